#include "fathom/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "fathom/errors.hpp"

namespace fathom {

DescriptorSet::DescriptorSet(std::vector<std::string> view_ids, int dim, std::vector<float> data)
    : view_ids_(std::move(view_ids)), dim_(dim), data_(std::move(data)) {
  if (dim_ <= 0) raise(Errc::InvalidArgument, "descriptor dimension must be positive");
  if (data_.size() != view_ids_.size() * static_cast<size_t>(dim_)) {
    raise(Errc::DimensionMismatch, "descriptor buffer does not match ids x dim");
  }
  for (float v : data_) {
    if (!std::isfinite(v)) raise(Errc::InvalidArgument, "descriptors must be finite");
  }
}

RetrievalResult top_k(std::span<const float> query, const std::string& query_view_id,
                      const DescriptorSet& db, int k) {
  if (k < 1) raise(Errc::InvalidArgument, "k must be at least 1");
  if (db.size() == 0) raise(Errc::EmptyDatabase, "database has no descriptors");
  if (query.size() != static_cast<size_t>(db.dim())) {
    raise(Errc::DimensionMismatch, "query dimension does not match database");
  }
  const size_t n = db.size();
  const size_t take = std::min(static_cast<size_t>(k), n);

  std::vector<std::pair<double, size_t>> scored(n);
  for (size_t i = 0; i < n; ++i) {
    const std::span<const float> row = db.row(i);
    double d = 0.0;
    for (size_t j = 0; j < query.size(); ++j) {
      const double diff = static_cast<double>(query[j]) - static_cast<double>(row[j]);
      d += diff * diff;
    }
    scored[i] = {d, i};
  }
  const auto better = [&db](const std::pair<double, size_t>& l, const std::pair<double, size_t>& r) {
    if (l.first != r.first) return l.first < r.first;
    return db.view_id(l.second) < db.view_id(r.second);
  };
  std::partial_sort(scored.begin(), scored.begin() + static_cast<long>(take), scored.end(), better);

  RetrievalResult result;
  result.query_view_id = query_view_id;
  result.ranked.reserve(take);
  for (size_t i = 0; i < take; ++i) {
    result.ranked.push_back({db.view_id(scored[i].second), scored[i].first});
  }
  return result;
}

std::vector<RetrievalResult> retrieve_all(const DescriptorSet& queries, const DescriptorSet& db,
                                          int k) {
  if (queries.dim() != db.dim()) {
    raise(Errc::DimensionMismatch, "query and database descriptor dimensions differ");
  }
  std::vector<RetrievalResult> results;
  results.reserve(queries.size());
  for (size_t i = 0; i < queries.size(); ++i) {
    results.push_back(top_k(queries.row(i), queries.view_id(i), db, k));
  }
  return results;
}

QueryOutcome PerQueryOutcome::outcome_at(int k) const {
  if (!valid) return QueryOutcome::Invalid;
  for (int rank : hit_ranks) {
    if (rank <= k) return QueryOutcome::Recognized;
  }
  return QueryOutcome::Unrecognized;
}

namespace {

// Ground-truth links grouped per query view id.
std::map<std::string, std::set<std::string>> links_by_query(const LinkSet& links) {
  std::map<std::string, std::set<std::string>> by_query;
  for (const auto& l : links.links) by_query[l.query_view_id].insert(l.db_view_id);
  return by_query;
}

std::vector<PerQueryOutcome> evaluate_queries(std::span<const RetrievalResult> results,
                                              const LinkSet& links) {
  const auto by_query = links_by_query(links);

  std::unordered_set<std::string> covered;
  covered.reserve(results.size());
  for (const auto& r : results) covered.insert(r.query_view_id);
  for (const auto& [qid, _] : by_query) {
    if (!covered.contains(qid)) {
      raise(Errc::InvalidArgument, "results do not cover linked query view " + qid);
    }
  }

  std::vector<PerQueryOutcome> outcomes;
  outcomes.reserve(results.size());
  for (const auto& r : results) {
    PerQueryOutcome o;
    o.view_id = r.query_view_id;
    const auto it = by_query.find(r.query_view_id);
    if (it != by_query.end()) {
      o.valid = true;
      o.link_count = it->second.size();
      for (size_t i = 0; i < r.ranked.size(); ++i) {
        if (it->second.contains(r.ranked[i].db_view_id)) {
          o.hit_ranks.push_back(static_cast<int>(i) + 1);
        }
      }
    }
    outcomes.push_back(std::move(o));
  }
  return outcomes;
}

double recall_from_outcomes(std::span<const PerQueryOutcome> outcomes, int k) {
  size_t valid = 0;
  size_t recognized = 0;
  for (const auto& o : outcomes) {
    if (!o.valid) continue;
    ++valid;
    if (o.outcome_at(k) == QueryOutcome::Recognized) ++recognized;
  }
  if (valid == 0) raise(Errc::NoValidQueries, "no query has any ground-truth link");
  return static_cast<double>(recognized) / static_cast<double>(valid);
}

double ir_recall_from_outcomes(std::span<const PerQueryOutcome> outcomes, size_t total_links,
                               int k) {
  if (total_links == 0) raise(Errc::EmptyLinkSet, "no ground-truth links");
  size_t tp = 0;
  for (const auto& o : outcomes) {
    for (int rank : o.hit_ranks) {
      if (rank <= k) ++tp;
    }
  }
  return static_cast<double>(tp) / static_cast<double>(total_links);
}

size_t distinct_link_pairs(const LinkSet& links) {
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& l : links.links) pairs.insert({l.query_view_id, l.db_view_id});
  return pairs.size();
}

}  // namespace

double recall_at_k(std::span<const RetrievalResult> results, const LinkSet& links, int k) {
  if (k < 1) raise(Errc::InvalidArgument, "k must be at least 1");
  return recall_from_outcomes(evaluate_queries(results, links), k);
}

double ir_recall_at_k(std::span<const RetrievalResult> results, const LinkSet& links, int k) {
  if (k < 1) raise(Errc::InvalidArgument, "k must be at least 1");
  return ir_recall_from_outcomes(evaluate_queries(results, links), distinct_link_pairs(links), k);
}

EvalReport recall_curve(std::span<const RetrievalResult> results, const LinkSet& links,
                        std::span<const int> k_values) {
  if (k_values.empty()) raise(Errc::InvalidArgument, "need at least one rank cutoff");
  for (size_t i = 0; i < k_values.size(); ++i) {
    if (k_values[i] < 1) raise(Errc::InvalidArgument, "rank cutoffs must be at least 1");
    if (i > 0 && k_values[i] <= k_values[i - 1]) {
      raise(Errc::InvalidArgument, "rank cutoffs must be strictly ascending");
    }
  }

  EvalReport report;
  report.pair = links.pair;
  report.k_values.assign(k_values.begin(), k_values.end());
  report.per_query = evaluate_queries(results, links);
  const size_t total_links = distinct_link_pairs(links);
  for (const auto& o : report.per_query) {
    if (o.valid) {
      ++report.valid_query_count;
    } else {
      ++report.invalid_query_count;
    }
  }
  for (int k : k_values) {
    report.recall_at_k.push_back(recall_from_outcomes(report.per_query, k));
    report.ir_recall_at_k.push_back(ir_recall_from_outcomes(report.per_query, total_links, k));
  }
  return report;
}

}  // namespace fathom
