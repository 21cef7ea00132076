#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "fathom/errors.hpp"
#include "fathom/retrieval.hpp"
#include "fathom/rng.hpp"

using namespace fathom;

namespace {

DescriptorSet make_set(const std::vector<std::string>& ids, int dim,
                       const std::vector<float>& data) {
  return DescriptorSet(ids, dim, data);
}

const VisitPair kPair{"visitQ", "visitD"};

LinkSet links_of(std::initializer_list<std::pair<const char*, const char*>> pairs) {
  LinkSet set;
  set.pair = kPair;
  for (const auto& [q, d] : pairs) set.links.push_back({q, d, 0.5, 1.0});
  return set;
}

}  // namespace

TEST_CASE("top_k finds an exact duplicate at rank 1 with distance 0") {
  const DescriptorSet db = make_set({"a", "b", "c"}, 2, {1.0f, 0.0f, 0.0f, 1.0f, 1.0f, 1.0f});
  const std::vector<float> query = {0.0f, 1.0f};
  const RetrievalResult r = top_k(query, "q", db, 1);
  CHECK(r.ranked.size() == 1);
  CHECK(r.ranked[0].db_view_id == "b");
  CHECK(r.ranked[0].squared_distance == 0.0);
}

TEST_CASE("top_k orders 1-D descriptors by hand-checked distance") {
  const DescriptorSet db = make_set({"x", "y", "z"}, 1, {1.0f, 0.5f, 2.0f});
  const std::vector<float> query = {0.0f};
  const RetrievalResult r = top_k(query, "q", db, 2);
  REQUIRE(r.ranked.size() == 2);
  CHECK(r.ranked[0].db_view_id == "y");
  CHECK(r.ranked[0].squared_distance == doctest::Approx(0.25));
  CHECK(r.ranked[1].db_view_id == "x");
  CHECK(r.ranked[1].squared_distance == doctest::Approx(1.0));
}

TEST_CASE("top_k equals a full-sort oracle on random 64-D data") {
  Rng rng(12001);
  const int dim = 64;
  const size_t n = 300;
  std::vector<std::string> ids;
  std::vector<float> data;
  for (size_t i = 0; i < n; ++i) {
    ids.push_back("db" + std::to_string(1000 + i));
    for (int j = 0; j < dim; ++j) data.push_back(static_cast<float>(rng.normal()));
  }
  const DescriptorSet db = make_set(ids, dim, data);

  for (int trial = 0; trial < 10; ++trial) {
    std::vector<float> query;
    for (int j = 0; j < dim; ++j) query.push_back(static_cast<float>(rng.normal()));
    const RetrievalResult r = top_k(query, "q", db, 10);

    std::vector<std::pair<double, std::string>> oracle;
    for (size_t i = 0; i < n; ++i) {
      double d = 0.0;
      for (int j = 0; j < dim; ++j) {
        const double diff = double(query[j]) - double(db.row(i)[j]);
        d += diff * diff;
      }
      oracle.emplace_back(d, ids[i]);
    }
    std::sort(oracle.begin(), oracle.end());
    REQUIRE(r.ranked.size() == 10);
    for (int k = 0; k < 10; ++k) {
      CHECK(r.ranked[k].db_view_id == oracle[k].second);
      CHECK(r.ranked[k].squared_distance == oracle[k].first);
    }
  }
}

TEST_CASE("top_k clamps K to the database size") {
  const DescriptorSet db = make_set({"a", "b"}, 1, {1.0f, 2.0f});
  const std::vector<float> query = {0.0f};
  const RetrievalResult r = top_k(query, "q", db, 10);
  CHECK(r.ranked.size() == 2);
}

TEST_CASE("top_k breaks distance ties by ascending view id") {
  // Two identical rows under different ids, inserted in both orders.
  const std::vector<float> query = {0.0f, 0.0f};
  const DescriptorSet db1 = make_set({"zz", "aa"}, 2, {1.0f, 0.0f, 1.0f, 0.0f});
  const DescriptorSet db2 = make_set({"aa", "zz"}, 2, {1.0f, 0.0f, 1.0f, 0.0f});
  CHECK(top_k(query, "q", db1, 2).ranked[0].db_view_id == "aa");
  CHECK(top_k(query, "q", db2, 2).ranked[0].db_view_id == "aa");
}

TEST_CASE("top_k validates inputs") {
  const DescriptorSet db = make_set({"a"}, 2, {1.0f, 0.0f});
  const std::vector<float> bad_query = {0.0f};
  try {
    top_k(bad_query, "q", db, 1);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DimensionMismatch);
  }
  const DescriptorSet empty;
  const std::vector<float> query = {0.0f, 0.0f};
  try {
    top_k(query, "q", empty, 1);
    FAIL("expected EmptyDatabase");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EmptyDatabase);
  }
  CHECK_THROWS_AS(DescriptorSet({"a"}, 2, {1.0f}), Error);           // bad buffer
  CHECK_THROWS_AS(DescriptorSet({"a"}, 2, {1.0f, NAN}), Error);      // non-finite
}

TEST_CASE("metrics are invariant to database row order") {
  Rng rng(12002);
  const int dim = 8;
  std::vector<std::string> ids;
  std::vector<float> data;
  for (int i = 0; i < 40; ++i) {
    ids.push_back("d" + std::to_string(100 + i));
    for (int j = 0; j < dim; ++j) data.push_back(static_cast<float>(rng.normal()));
  }
  std::vector<std::string> qids;
  std::vector<float> qdata;
  for (int i = 0; i < 10; ++i) {
    qids.push_back("q" + std::to_string(i));
    for (int j = 0; j < dim; ++j) qdata.push_back(static_cast<float>(rng.normal()));
  }
  const DescriptorSet queries = make_set(qids, dim, qdata);
  const DescriptorSet db = make_set(ids, dim, data);

  // Permute database rows.
  std::vector<std::string> pids(ids.rbegin(), ids.rend());
  std::vector<float> pdata;
  for (int i = 39; i >= 0; --i) {
    for (int j = 0; j < dim; ++j) pdata.push_back(data[static_cast<size_t>(i) * dim + j]);
  }
  const DescriptorSet permuted = make_set(pids, dim, pdata);

  LinkSet links;
  links.pair = kPair;
  for (int i = 0; i < 10; ++i) {
    links.links.push_back({"q" + std::to_string(i), "d" + std::to_string(100 + (i * 3) % 40), 0.5, 1.0});
  }
  const auto res_a = retrieve_all(queries, db, 10);
  const auto res_b = retrieve_all(queries, permuted, 10);
  CHECK(recall_at_k(res_a, links, 5) == recall_at_k(res_b, links, 5));
  CHECK(ir_recall_at_k(res_a, links, 5) == ir_recall_at_k(res_b, links, 5));
}

TEST_CASE("recall fixture: hits at ranks 2 and 7, one miss") {
  // Database ids d01..d10; query q1 hits at rank 2, q2 at rank 7, q3 never.
  std::vector<RetrievalResult> results(3);
  for (int q = 0; q < 3; ++q) {
    results[q].query_view_id = "q" + std::to_string(q + 1);
    for (int k = 0; k < 10; ++k) {
      results[q].ranked.push_back(
          {"d" + std::to_string(q * 10 + k + 1), static_cast<double>(k)});
    }
  }
  const LinkSet links = links_of({{"q1", "d2"}, {"q2", "d17"}, {"q3", "d99"}});

  CHECK(recall_at_k(results, links, 1) == doctest::Approx(0.0));
  CHECK(recall_at_k(results, links, 5) == doctest::Approx(1.0 / 3.0));
  CHECK(recall_at_k(results, links, 10) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("all rank-1 hits give recall 1; no hits give 0") {
  std::vector<RetrievalResult> results(4);
  LinkSet links;
  links.pair = kPair;
  for (int q = 0; q < 4; ++q) {
    results[q].query_view_id = "q" + std::to_string(q);
    results[q].ranked.push_back({"d" + std::to_string(q), 0.0});
    links.links.push_back({"q" + std::to_string(q), "d" + std::to_string(q), 1.0, 0.0});
  }
  CHECK(recall_at_k(results, links, 1) == 1.0);

  LinkSet misses;
  misses.pair = kPair;
  for (int q = 0; q < 4; ++q) misses.links.push_back({"q" + std::to_string(q), "other", 1.0, 0.0});
  CHECK(recall_at_k(results, misses, 1) == 0.0);
}

TEST_CASE("unlinked queries are invalid and excluded from the denominator") {
  std::vector<RetrievalResult> results(2);
  results[0].query_view_id = "hit";
  results[0].ranked.push_back({"d0", 0.0});
  results[1].query_view_id = "stray";
  results[1].ranked.push_back({"d1", 0.0});
  const LinkSet links = links_of({{"hit", "d0"}});
  CHECK(recall_at_k(results, links, 1) == 1.0);  // stray does not dilute

  const auto report = recall_curve(results, links, std::vector<int>{1});
  CHECK(report.valid_query_count == 1);
  CHECK(report.invalid_query_count == 1);
  CHECK(report.per_query[1].outcome_at(1) == QueryOutcome::Invalid);
}

TEST_CASE("ir_recall counts retrieved link pairs") {
  // One query with 4 links, exactly 1 retrieved in the top-K.
  std::vector<RetrievalResult> results(1);
  results[0].query_view_id = "q";
  results[0].ranked = {{"d1", 0.0}, {"x1", 1.0}, {"x2", 2.0}};
  const LinkSet links = links_of({{"q", "d1"}, {"q", "d2"}, {"q", "d3"}, {"q", "d4"}});
  CHECK(ir_recall_at_k(results, links, 3) == doctest::Approx(0.25));

  // TP@K + FN@K == |links| by construction: TP = 1, FN = 3.
  const auto report = recall_curve(results, links, std::vector<int>{1, 3});
  size_t tp = 0;
  for (const auto& q : report.per_query) {
    for (int rank : q.hit_ranks) {
      if (rank <= 3) ++tp;
    }
  }
  CHECK(tp + (links.links.size() - tp) == links.links.size());
  CHECK(report.ir_recall_at_k[1] == doctest::Approx(0.25));
}

TEST_CASE("ir_recall equals a brute-force pair count on random fixtures") {
  Rng rng(12003);
  for (int trial = 0; trial < 20; ++trial) {
    const int n_q = 8, n_d = 15, k = 5;
    std::vector<RetrievalResult> results(n_q);
    for (int q = 0; q < n_q; ++q) {
      results[q].query_view_id = "q" + std::to_string(q);
      std::vector<int> perm;
      for (int d = 0; d < n_d; ++d) perm.push_back(d);
      for (size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
      for (int r = 0; r < k; ++r) {
        results[q].ranked.push_back({"d" + std::to_string(perm[r]), static_cast<double>(r)});
      }
    }
    LinkSet links;
    links.pair = kPair;
    std::set<std::pair<std::string, std::string>> pairs;
    for (int i = 0; i < 20; ++i) {
      const std::string q = "q" + std::to_string(rng.below(n_q));
      const std::string d = "d" + std::to_string(rng.below(n_d));
      if (pairs.insert({q, d}).second) links.links.push_back({q, d, 0.5, 1.0});
    }

    size_t tp = 0;
    for (const auto& [q, d] : pairs) {
      for (const auto& r : results) {
        if (r.query_view_id != q) continue;
        for (const auto& c : r.ranked) {
          if (c.db_view_id == d) ++tp;
        }
      }
    }
    CHECK(ir_recall_at_k(results, links, k) ==
          doctest::Approx(double(tp) / double(pairs.size())).epsilon(1e-12));
  }
}

TEST_CASE("recall curves are monotone and equal per-K recomputation") {
  Rng rng(12004);
  const std::vector<int> ks = {1, 2, 3, 5, 8, 13};
  for (int trial = 0; trial < 100; ++trial) {
    const int n_q = 6, n_d = 20;
    std::vector<RetrievalResult> results(n_q);
    LinkSet links;
    links.pair = kPair;
    for (int q = 0; q < n_q; ++q) {
      results[q].query_view_id = "q" + std::to_string(q);
      std::vector<int> perm;
      for (int d = 0; d < n_d; ++d) perm.push_back(d);
      for (size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
      for (int r = 0; r < 13; ++r) {
        results[q].ranked.push_back({"d" + std::to_string(perm[r]), static_cast<double>(r)});
      }
      const int n_links = 1 + static_cast<int>(rng.below(3));
      for (int l = 0; l < n_links; ++l) {
        links.links.push_back(
            {"q" + std::to_string(q), "d" + std::to_string(rng.below(n_d)), 0.5, 1.0});
      }
    }
    const EvalReport report = recall_curve(results, links, ks);
    for (size_t i = 1; i < ks.size(); ++i) {
      CHECK(report.recall_at_k[i] >= report.recall_at_k[i - 1]);
      CHECK(report.ir_recall_at_k[i] >= report.ir_recall_at_k[i - 1]);
    }
    for (size_t i = 0; i < ks.size(); ++i) {
      CHECK(report.recall_at_k[i] == recall_at_k(results, links, ks[i]));
      CHECK(report.ir_recall_at_k[i] == ir_recall_at_k(results, links, ks[i]));
    }
  }
}

TEST_CASE("ground-truth monotonicity: more links never lower recall") {
  Rng rng(12005);
  for (int trial = 0; trial < 25; ++trial) {
    const int n_q = 6, n_d = 18;
    std::vector<RetrievalResult> results(n_q);
    for (int q = 0; q < n_q; ++q) {
      results[q].query_view_id = "q" + std::to_string(q);
      for (int r = 0; r < 10; ++r) {
        results[q].ranked.push_back(
            {"d" + std::to_string(rng.below(n_d)), static_cast<double>(r)});
      }
    }
    LinkSet base;
    base.pair = kPair;
    for (int q = 0; q < n_q; ++q) {
      base.links.push_back({"q" + std::to_string(q), "d" + std::to_string(rng.below(n_d)), 0.5, 1.0});
    }
    LinkSet super = base;
    for (int extra = 0; extra < 10; ++extra) {
      super.links.push_back(
          {"q" + std::to_string(rng.below(n_q)), "d" + std::to_string(rng.below(n_d)), 0.5, 1.0});
    }
    CHECK(recall_at_k(results, super, 10) >= recall_at_k(results, base, 10) - 1e-12);
  }
}

TEST_CASE("error conditions: empty links, no valid queries, uncovered queries") {
  std::vector<RetrievalResult> results(1);
  results[0].query_view_id = "q";
  results[0].ranked.push_back({"d", 0.0});
  LinkSet empty;
  empty.pair = kPair;
  try {
    recall_at_k(results, empty, 1);
    FAIL("expected NoValidQueries");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NoValidQueries);
  }
  try {
    ir_recall_at_k(results, empty, 1);
    FAIL("expected EmptyLinkSet");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EmptyLinkSet);
  }
  const LinkSet uncovered = links_of({{"other_query", "d"}});
  CHECK_THROWS_AS(recall_at_k(results, uncovered, 1), Error);

  const LinkSet ok = links_of({{"q", "d"}});
  const std::vector<int> unsorted = {5, 1};
  CHECK_THROWS_AS(recall_curve(results, ok, unsorted), Error);
}
