#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgs/classify.hpp"
#include "sgs/decomposition.hpp"
#include "sgs/engine.hpp"
#include "sgs/errors.hpp"
#include "sgs/io.hpp"
#include "sgs/netgen.hpp"
#include "sgs/network.hpp"

using namespace sgs;
using json = nlohmann::ordered_json;

namespace {

constexpr int kDataError = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string join_names(const Network& bn, const NodeSet& nodes) {
  std::string out;
  for (std::size_t i = 0; i < nodes.size(); ++i) out += (i ? "," : "") + bn.name(nodes[i]);
  return out;
}

json names_of(const Network& bn, const NodeSet& nodes) {
  json out = json::array();
  for (NodeId v : nodes) out.push_back(bn.name(v));
  return out;
}

Method method_arg(const std::string& text) {
  const auto m = parse_method(text);
  if (!m) throw UsageError("unknown method '" + text + "'");
  return *m;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") std::cout << text;
  else write_text_file(out_path, text);
}

SgsConfig sgs_config(int n_max, std::size_t samples, std::uint64_t seed) {
  SgsConfig cfg;
  cfg.n_max = n_max < 0 ? kUnlimitedSubsetSize : n_max;
  cfg.sampler.samples = samples;
  cfg.sampler.seed = seed;
  return cfg;
}

int report(const Error& e) {
  json j;
  j["error"] = std::string(to_string(e.kind()));
  j["message"] = e.what();
  if (const auto* p = dynamic_cast<const ParseError*>(&e)) {
    j["code"] = std::string(to_string(p->code()));
    j["line"] = p->line();
    j["column"] = p->column();
  } else {
    j["code"] = nullptr;
    j["line"] = nullptr;
    j["column"] = nullptr;
  }
  std::cerr << j.dump() << "\n";
  return kDataError;
}

int cmd_validate(const std::string& path) {
  const Network bn = read_network_file(path);
  const auto violations = validate(bn, 1e-6);
  if (violations.empty()) {
    std::cout << "ok " << bn.size() << " variables\n";
    return 0;
  }
  for (const Violation& v : violations)
    std::cout << v.defect << " " << bn.name(v.node) << " row " << v.row << ": " << v.message << "\n";
  return kDataError;
}

int cmd_marginal(const std::string& path, const std::string& evidence, const std::string& method, int n_max,
                 std::size_t samples, std::uint64_t seed) {
  const Method m = method_arg(method);
  const Network bn = read_network_file(path);
  const Evidence e = parse_evidence(bn, evidence);
  const MarginalEstimate r = marginal(bn, e, m, sgs_config(n_max, samples, seed));
  std::ostringstream out;
  out << "method " << to_string(r.method) << "\n";
  out << "probability " << num(r.value()) << "\n";
  out << "log_probability " << num(r.log_value) << "\n";
  out << "samples " << r.samples << "\n";
  out << "sampled_variables " << r.sampled_variables << "\n";
  out << "relative_weight_variance " << num(r.relative_weight_variance) << "\n";
  if (r.method == Method::sgs) {
    out << "leftover_log_factor " << num(r.leftover_log_factor) << "\n";
    for (std::size_t k = 0; k < r.per_subset.size(); ++k) {
      const SubsetFactor& f = r.per_subset[k];
      out << "subset " << k << " " << to_string(f.method) << (f.fell_back ? " fallback" : "")
          << " size " << f.subset.size() << " log_factor " << num(f.log_factor) << " samples " << f.samples
          << " relative_weight_variance " << num(f.relative_weight_variance) << " nodes "
          << join_names(bn, f.subset) << "\n";
    }
  }
  std::cout << out.str();
  return 0;
}

int cmd_decompose(const std::string& path, const std::string& evidence) {
  const Network bn = read_network_file(path);
  const Evidence e = parse_evidence(bn, evidence);
  const SubsetDecomposition d = decompose(bn, e);
  json out;
  out["relevant"] = names_of(bn, d.relevant_nodes);
  out["subsets"] = json::array();
  for (std::size_t k = 0; k < d.subsets.size(); ++k) {
    json s;
    s["nodes"] = names_of(bn, d.subsets[k]);
    s["markov_blanket"] = names_of(bn, d.boundaries[k].markov_blanket);
    s["children"] = names_of(bn, d.boundaries[k].children);
    s["parents"] = names_of(bn, d.boundaries[k].parents);
    out["subsets"].push_back(s);
  }
  out["leftover_evidence"] = names_of(bn, d.leftover_evidence);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_simulate(const std::string& family, const GenSpec& base, const std::string& out_path) {
  const auto f = parse_family(family);
  if (!f) throw UsageError("unknown family '" + family + "'");
  GenSpec spec = base;
  spec.family = *f;
  emit(out_path, serialize_network(gen_network(spec)));
  return 0;
}

int cmd_benchmark(const std::string& spec_path, const std::string& methods, const std::string& budgets, int reps,
                  int n_max, const std::string& out_path) {
  BenchOptions opt;
  opt.methods.clear();
  for (const std::string& m : split_list(methods)) opt.methods.push_back(method_arg(m));
  opt.budgets.clear();
  for (const std::string& b : split_list(budgets)) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(b, &used);
      if (used != b.size() || v < 1) throw std::invalid_argument(b);
      opt.budgets.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw UsageError("budget '" + b + "' is not a positive integer");
    }
  }
  if (opt.methods.empty() || opt.budgets.empty()) throw UsageError("methods and budgets must be non-empty");
  opt.repetitions = reps;
  opt.base.n_max = n_max < 0 ? kUnlimitedSubsetSize : n_max;
  const auto specs = parse_gen_specs(read_text_file(spec_path));
  emit(out_path, write_bench_csv(run_benchmark(specs, opt)));
  return 0;
}

struct ClassifyArgs {
  std::string models, data, out, label_column, roc;
  int n_max = 15;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  bool drop_missing = false;
};

int cmd_classify(const ClassifyArgs& a) {
  const auto paths = split_list(a.models);
  if (paths.size() < 2) throw UsageError("--models needs at least two files");
  std::vector<Network> models;
  std::vector<std::string> names;
  for (const std::string& p : paths) {
    models.push_back(read_network_file(p));
    names.push_back(std::filesystem::path(p).stem().string());
  }
  const Dataset data = parse_dataset(read_text_file(a.data));
  std::size_t label_index = data.header.size();
  std::vector<std::string> skip;
  if (!a.label_column.empty()) {
    const auto it = std::find(data.header.begin(), data.header.end(), a.label_column);
    if (it == data.header.end()) throw ParseError(ParseCode::schema, "no column " + a.label_column, 1, 1);
    label_index = static_cast<std::size_t>(it - data.header.begin());
    skip.push_back(a.label_column);
  }
  if (!a.roc.empty() && (models.size() != 2 || a.label_column.empty()))
    throw UsageError("--roc needs two models and --label-column");

  const SgsConfig cfg = sgs_config(a.n_max, a.samples, a.seed);
  std::ostringstream out;
  out << "record";
  for (const std::string& n : names) out << "," << n;
  out << ",predicted,tie\n";
  std::vector<double> scores;
  std::vector<bool> labels;
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    const PartialRecord record = data.record(i, skip);
    const ClassificationResult r = a.drop_missing ? classify_drop_missing(record, models) : classify(record, models, cfg);
    out << i;
    for (double p : r.posteriors) out << "," << num(p);
    out << "," << names[r.predicted] << "," << (r.tie ? 1 : 0) << "\n";
    if (!a.roc.empty()) {
      const auto& label = data.rows[i][label_index];
      if (!label || (*label != names[0] && *label != names[1]))
        throw ParseError(ParseCode::unknown_value, "label must name a model", static_cast<int>(i + 2),
                         static_cast<int>(label_index + 1));
      scores.push_back(r.posteriors[1]);
      labels.push_back(*label == names[1]);
    }
  }
  emit(a.out, out.str());
  if (!a.roc.empty()) {
    const RocCurve c = roc_auc(scores, labels);
    std::ostringstream roc;
    roc << "# auc " << num(c.auc) << "\nfpr\ttpr\n";
    for (const auto& [x, y] : c.points) roc << num(x) << "\t" << num(y) << "\n";
    write_text_file(a.roc, roc.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Marginal probabilities of evidence in categorical Bayesian networks"};
  app.require_subcommand(1);

  std::string network, evidence, method = "sgs", out;
  int n_max = 15;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;

  auto* validate_cmd = app.add_subcommand("validate", "Check a network file");
  validate_cmd->add_option("--network", network, "Network file")->required();

  auto* marginal_cmd = app.add_subcommand("marginal", "Estimate P(X_e)");
  marginal_cmd->add_option("--network", network, "Network file")->required();
  marginal_cmd->add_option("--evidence", evidence, "name=state,...");
  marginal_cmd->add_option("--method", method, "sgs, jt, lbp-is, gs or enum");
  marginal_cmd->add_option("--n-max", n_max, "Exact inference below this subset size; negative for no limit");
  marginal_cmd->add_option("--samples", samples, "Importance samples per estimate")->check(CLI::PositiveNumber);
  marginal_cmd->add_option("--seed", seed, "Random seed");

  auto* decompose_cmd = app.add_subcommand("decompose", "Print the evidence decomposition");
  decompose_cmd->add_option("--network", network, "Network file")->required();
  decompose_cmd->add_option("--evidence", evidence, "name=state,...");

  std::string family = "er";
  GenSpec gen;
  auto* simulate_cmd = app.add_subcommand("simulate", "Generate a random network");
  simulate_cmd->add_option("--family", family, "er, ba, ws or islands");
  simulate_cmd->add_option("--n", gen.n, "Number of variables");
  simulate_cmd->add_option("--mb-size", gen.avg_mb_size, "Target mean Markov blanket size");
  simulate_cmd->add_option("--categories", gen.categories, "States per variable");
  simulate_cmd->add_option("--islands", gen.islands, "Island count for the islands family");
  simulate_cmd->add_option("--seed", gen.seed, "Random seed");
  simulate_cmd->add_option("--out", out, "Output file, stdout by default");

  std::string spec_path, methods = "sgs,lbp-is,gs", budgets = "100,1000";
  int reps = 10;
  auto* bench_cmd = app.add_subcommand("benchmark", "NRMSE and wall time per method and budget");
  bench_cmd->add_option("--spec", spec_path, "JSON list of network specs")->required();
  bench_cmd->add_option("--methods", methods, "Comma-separated methods");
  bench_cmd->add_option("--budgets", budgets, "Comma-separated sample budgets");
  bench_cmd->add_option("--reps", reps, "Repetitions per cell")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--n-max", n_max, "Exact inference below this subset size");
  bench_cmd->add_option("--out", out, "Output CSV, stdout by default");

  ClassifyArgs ca;
  auto* classify_cmd = app.add_subcommand("classify", "Classify incomplete records against several networks");
  classify_cmd->add_option("--models", ca.models, "Comma-separated network files")->required();
  classify_cmd->add_option("--data", ca.data, "CSV with ? for missing cells")->required();
  classify_cmd->add_option("--n-max", ca.n_max, "Exact inference below this subset size");
  classify_cmd->add_option("--samples", ca.samples, "Importance samples per estimate")->check(CLI::PositiveNumber);
  classify_cmd->add_option("--seed", ca.seed, "Random seed");
  classify_cmd->add_option("--out", ca.out, "Output CSV, stdout by default");
  classify_cmd->add_flag("--drop-missing", ca.drop_missing, "Models hold only observed variables; score joints");
  classify_cmd->add_option("--label-column", ca.label_column, "Column with the true model name, not evidence");
  classify_cmd->add_option("--roc", ca.roc, "Write the ROC curve as TSV (two models)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*validate_cmd) return cmd_validate(network);
    if (*marginal_cmd) return cmd_marginal(network, evidence, method, n_max, samples, seed);
    if (*decompose_cmd) return cmd_decompose(network, evidence);
    if (*simulate_cmd) return cmd_simulate(family, gen, out);
    if (*bench_cmd) return cmd_benchmark(spec_path, methods, budgets, reps, n_max, out);
    if (*classify_cmd) return cmd_classify(ca);
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    return report(e);
  }
  return kUsageError;
}
