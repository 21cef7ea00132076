#pragma once

#include <span>
#include <string>
#include <vector>

#include "fathom/linking.hpp"

namespace fathom {

// Image descriptors, one row per view, row-major float32. Rows are used
// as-is: no normalization is applied internally.
class DescriptorSet {
 public:
  DescriptorSet() = default;
  DescriptorSet(std::vector<std::string> view_ids, int dim, std::vector<float> data);

  size_t size() const { return view_ids_.size(); }
  int dim() const { return dim_; }
  const std::vector<std::string>& view_ids() const { return view_ids_; }
  const std::string& view_id(size_t i) const { return view_ids_[i]; }
  std::span<const float> row(size_t i) const {
    return {data_.data() + i * static_cast<size_t>(dim_), static_cast<size_t>(dim_)};
  }
  const std::vector<float>& data() const { return data_; }

 private:
  std::vector<std::string> view_ids_;
  int dim_ = 0;
  std::vector<float> data_;
};

struct Candidate {
  std::string db_view_id;
  double squared_distance = 0.0;
};

struct RetrievalResult {
  std::string query_view_id;
  std::vector<Candidate> ranked;  // ascending distance, ties by ascending view id
};

// Exact top-K rows of `db` by squared L2 distance to `query`. K larger than
// the database is clamped. Ties are broken by ascending db view id, so the
// result is independent of database row order.
RetrievalResult top_k(std::span<const float> query, const std::string& query_view_id,
                      const DescriptorSet& db, int k);

// top_k for every query row against the database.
std::vector<RetrievalResult> retrieve_all(const DescriptorSet& queries, const DescriptorSet& db,
                                          int k);

enum class QueryOutcome { Recognized, Unrecognized, Invalid };

struct PerQueryOutcome {
  std::string view_id;
  bool valid = false;         // has at least one ground-truth link
  size_t link_count = 0;      // ground-truth links for this query
  std::vector<int> hit_ranks; // 1-based ranks at which linked views were retrieved

  QueryOutcome outcome_at(int k) const;
};

struct EvalReport {
  VisitPair pair;
  std::vector<int> k_values;
  std::vector<double> recall_at_k;
  std::vector<double> ir_recall_at_k;
  size_t valid_query_count = 0;
  size_t invalid_query_count = 0;
  std::vector<PerQueryOutcome> per_query;
};

// Fraction of valid queries with at least one linked view in their top-K.
// Queries without any link are invalid and excluded from the denominator.
double recall_at_k(std::span<const RetrievalResult> results, const LinkSet& links, int k);

// Information-retrieval recall: TP@K / (TP@K + FN@K) over all link pairs.
double ir_recall_at_k(std::span<const RetrievalResult> results, const LinkSet& links, int k);

// Both metrics over a list of ascending rank cutoffs, computed from a single
// pass over results ranked at the largest cutoff.
EvalReport recall_curve(std::span<const RetrievalResult> results, const LinkSet& links,
                        std::span<const int> k_values);

}  // namespace fathom
