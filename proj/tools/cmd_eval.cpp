#include <algorithm>
#include <filesystem>
#include <iostream>
#include <memory>
#include <vector>

#include "cli_common.hpp"
#include "commands.hpp"
#include "fathom/io.hpp"
#include "fathom/retrieval.hpp"

namespace fathom::cli {

namespace fs = std::filesystem;

namespace {

struct EvalOptions {
  std::string config_path;
  std::string query_desc_path;
  std::string db_desc_path;
  std::string links_path;
  std::vector<int> k_values = {1, 5, 10, 20};
  std::string query_visit;
  std::string db_visit;
  std::string out_path;
  std::string per_query_csv;
};

int run(const EvalOptions& opt) {
  if (opt.query_desc_path.empty() || opt.db_desc_path.empty() || opt.links_path.empty() ||
      opt.out_path.empty()) {
    raise(Errc::InvalidArgument, "--query-desc, --db-desc, --links and --out are required");
  }
  std::vector<int> ks = opt.k_values;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  if (ks.empty() || ks.front() < 1) {
    raise(Errc::InvalidArgument, "rank cutoffs must be positive");
  }

  const DescriptorSet queries = io::read_descriptors(opt.query_desc_path);
  const DescriptorSet db = io::read_descriptors(opt.db_desc_path);

  LinkSet links;
  links.pair = {opt.query_visit, opt.db_visit};
  links.links = io::read_links(opt.links_path);
  if (links.links.empty()) {
    raise(Errc::EmptyLinkSet, "link file is empty; nothing to evaluate against");
  }

  int k_max = ks.back();
  if (static_cast<size_t>(k_max) > db.size()) {
    std::cerr << "warning: K=" << k_max << " exceeds the database size " << db.size()
              << "; clamping\n";
    k_max = static_cast<int>(db.size());
    while (!ks.empty() && ks.back() > k_max) ks.pop_back();
    if (ks.empty() || ks.back() != k_max) ks.push_back(k_max);
  }

  const std::vector<RetrievalResult> results = retrieve_all(queries, db, k_max);
  const EvalReport report = recall_curve(results, links, ks);

  io::write_eval_report(opt.out_path, report);
  if (!opt.per_query_csv.empty()) {
    io::write_per_query_csv(opt.per_query_csv, report);
  }
  std::cerr << "eval: " << report.valid_query_count << " valid queries, R@" << ks.back() << " = "
            << report.recall_at_k.back() << "\n";
  return kOk;
}

}  // namespace

void register_eval(CLI::App& app, int& result) {
  auto opt = std::make_shared<EvalOptions>();
  CLI::App* cmd = app.add_subcommand(
      "eval", "Score descriptor retrieval against a ground-truth link set");
  cmd->add_option("--config", opt->config_path, "JSON config file");
  cmd->add_option("--query-desc", opt->query_desc_path, "Query descriptor .dsc file");
  cmd->add_option("--db-desc", opt->db_desc_path, "Database descriptor .dsc file");
  cmd->add_option("--links", opt->links_path, "Ground-truth link JSONL");
  cmd->add_option("--k", opt->k_values, "Rank cutoffs")->delimiter(',');
  cmd->add_option("--query-visit", opt->query_visit, "Query visit id (label)");
  cmd->add_option("--db-visit", opt->db_visit, "Database visit id (label)");
  cmd->add_option("--out", opt->out_path, "Evaluation report JSON output");
  cmd->add_option("--per-query-csv", opt->per_query_csv, "Optional per-query outcome CSV");

  cmd->callback([opt, cmd, &result]() {
    result = run_guarded([&]() {
      ConfigFile cfg;
      if (!opt->config_path.empty()) cfg = ConfigFile::load(opt->config_path);
      fill_from_config(*cmd, cfg, "eval", "--query-desc", "query_desc", opt->query_desc_path);
      fill_from_config(*cmd, cfg, "eval", "--db-desc", "db_desc", opt->db_desc_path);
      fill_from_config(*cmd, cfg, "eval", "--links", "links", opt->links_path);
      fill_from_config(*cmd, cfg, "eval", "--k", "k_values", opt->k_values);
      fill_from_config(*cmd, cfg, "eval", "--out", "out", opt->out_path);
      fill_from_config(*cmd, cfg, "eval", "--per-query-csv", "per_query_csv",
                       opt->per_query_csv);
      return run(*opt);
    });
  });
}

}  // namespace fathom::cli
