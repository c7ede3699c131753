#include "sgs/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sgs/errors.hpp"
#include "sgs/netgen.hpp"
#include "sgs/numeric.hpp"

namespace sgs {

namespace {

void check_record(const PartialRecord& record) {
  for (const auto& [name, state] : record.observed)
    if (record.missing.count(name)) throw ArgumentError("variable " + name + " is both observed and missing");
}

// Evidence over the model's variables; names it lacks go to `ignored`.
Evidence resolve(const PartialRecord& record, const Network& model, std::vector<std::string>& ignored) {
  Evidence e;
  for (const auto& [name, state] : record.observed) {
    const auto v = model.find(name);
    if (!v) {
      ignored.push_back(name);
      continue;
    }
    const auto s = model.find_state(*v, state);
    if (!s) throw IdentifierError("unknown state '" + state + "' of variable " + name);
    e[*v] = *s;
  }
  return e;
}

void finish(ClassificationResult& r) {
  LogSumExp total;
  for (double l : r.log_likelihoods) total.add(l);
  if (total.value() == kNegInf) throw ClassificationError("record has zero probability under every model");
  r.posteriors.clear();
  for (double l : r.log_likelihoods) r.posteriors.push_back(std::exp(l - total.value()));
  r.predicted = static_cast<std::size_t>(
      std::max_element(r.log_likelihoods.begin(), r.log_likelihoods.end()) - r.log_likelihoods.begin());
  r.tie = std::count(r.log_likelihoods.begin(), r.log_likelihoods.end(), r.log_likelihoods[r.predicted]) > 1;
}

}  // namespace

ClassificationResult classify(const PartialRecord& record, const std::vector<Network>& models, const SgsConfig& cfg) {
  if (models.size() < 2) throw ArgumentError("classification needs at least two models");
  check_record(record);
  ClassificationResult r;
  r.ignored.resize(models.size());
  for (std::size_t i = 0; i < models.size(); ++i) {
    const Evidence e = resolve(record, models[i], r.ignored[i]);
    if (e.empty()) throw ClassificationError("model " + std::to_string(i) + " resolves no observed variable");
    r.log_likelihoods.push_back(marginal_sgs(models[i], e, cfg).log_value);
  }
  finish(r);
  return r;
}

ClassificationResult classify_drop_missing(const PartialRecord& record, const std::vector<Network>& reduced_models) {
  if (reduced_models.size() < 2) throw ArgumentError("classification needs at least two models");
  check_record(record);
  ClassificationResult r;
  r.ignored.resize(reduced_models.size());
  for (std::size_t i = 0; i < reduced_models.size(); ++i) {
    const Network& m = reduced_models[i];
    const Evidence e = resolve(record, m, r.ignored[i]);
    if (e.empty()) throw ClassificationError("model " + std::to_string(i) + " resolves no observed variable");
    FullAssignment x(m.size());
    for (NodeId v = 0; v < m.size(); ++v) {
      const auto it = e.find(v);
      if (it == e.end())
        throw ClassificationError("reduced model " + std::to_string(i) + " holds unobserved variable " + m.name(v));
      x[v] = it->second;
    }
    r.log_likelihoods.push_back(log_joint_probability(m, x));
  }
  finish(r);
  return r;
}

RocCurve roc_auc(const std::vector<double>& scores, const std::vector<bool>& labels) {
  if (scores.size() != labels.size()) throw ArgumentError("scores and labels differ in length");
  if (scores.empty()) throw ArgumentError("ROC needs at least one item");
  const auto positives = static_cast<double>(std::count(labels.begin(), labels.end(), true));
  const double negatives = static_cast<double>(labels.size()) - positives;
  if (positives == 0 || negatives == 0) throw DomainError("ROC needs both classes");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve out;
  out.points.emplace_back(0.0, 0.0);
  double tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] ? tp : fp) += 1;
      ++j;
    }
    const auto [x0, y0] = out.points.back();
    const double x1 = fp / negatives, y1 = tp / positives;
    out.auc += (x1 - x0) * (y0 + y1) / 2;
    out.points.emplace_back(x1, y1);
    i = j;
  }
  return out;
}

Network fit_network(const Dag& dag, const std::vector<int>& cards, const std::vector<std::string>& names,
                    const std::vector<FullAssignment>& records, double pseudo_count) {
  if (!(pseudo_count >= 0)) throw ArgumentError("pseudo count must be non-negative");
  std::vector<std::vector<double>> counts(dag.size());
  for (NodeId v = 0; v < dag.size(); ++v) {
    std::size_t rows = 1;
    for (NodeId p : dag.parents(v)) rows *= cards[p];
    counts[v].assign(rows * cards[v], pseudo_count);
  }
  for (const FullAssignment& x : records) {
    if (static_cast<int>(x.size()) != dag.size()) throw ArgumentError("training record has the wrong width");
    for (NodeId v = 0; v < dag.size(); ++v) {
      std::size_t row = 0;
      for (NodeId p : dag.parents(v)) row = row * cards[p] + x[p];
      counts[v][row * cards[v] + x[v]] += 1;
    }
  }
  for (NodeId v = 0; v < dag.size(); ++v) {
    const std::size_t c = cards[v];
    for (std::size_t r = 0; r < counts[v].size() / c; ++r) {
      double total = 0;
      for (std::size_t s = 0; s < c; ++s) total += counts[v][r * c + s];
      for (std::size_t s = 0; s < c; ++s) counts[v][r * c + s] = total > 0 ? counts[v][r * c + s] / total : 1.0 / c;
    }
  }
  return Network(dag, cards, std::move(counts), names);
}

StudyResult run_classification_study(const StudyConfig& cfg) {
  if (!(cfg.mask_fraction >= 0 && cfg.mask_fraction < 1)) throw ArgumentError("mask fraction must lie in [0, 1)");
  if (cfg.training_records == 0 || cfg.test_records == 0) throw ArgumentError("record counts must be positive");

  std::vector<std::string> names(cfg.n);
  for (int i = 0; i < cfg.n; ++i) names[i] = "X" + std::to_string(i);
  const std::vector<int> cards(cfg.n, cfg.categories);

  std::vector<Network> full, reduced;
  std::vector<std::vector<FullAssignment>> tests;

  // Fixed panel of masked variables.
  Rng rng(mix_seed(cfg.seed, 0));
  std::vector<NodeId> ids(cfg.n);
  std::iota(ids.begin(), ids.end(), 0);
  std::shuffle(ids.begin(), ids.end(), rng);
  const int masked_count = static_cast<int>(std::floor(cfg.mask_fraction * cfg.n + 1e-9));
  const NodeSet masked = make_node_set(std::vector<NodeId>(ids.begin(), ids.begin() + masked_count));
  NodeSet observed;
  for (NodeId v = 0; v < cfg.n; ++v)
    if (!set_contains(masked, v)) observed.push_back(v);

  std::vector<std::string> observed_names;
  for (NodeId v : observed) observed_names.push_back(names[v]);

  for (int k = 0; k < 2; ++k) {
    GenSpec spec;
    spec.n = cfg.n;
    spec.categories = cfg.categories;
    spec.avg_mb_size = cfg.avg_mb_size;
    spec.seed = mix_seed(cfg.seed, 10 + k);
    const Network source = gen_network(spec);
    const auto training = sample_forward(source, cfg.training_records, mix_seed(cfg.seed, 20 + k));
    tests.push_back(sample_forward(source, cfg.test_records, mix_seed(cfg.seed, 30 + k)));

    full.push_back(fit_network(source.dag(), cards, names, training, cfg.pseudo_count));

    std::vector<FullAssignment> projected;
    for (const FullAssignment& x : training) {
      FullAssignment y;
      for (NodeId v : observed) y.push_back(x[v]);
      projected.push_back(std::move(y));
    }
    reduced.push_back(fit_network(source.dag().induced(observed), std::vector<int>(observed.size(), cfg.categories),
                                  observed_names, projected, cfg.pseudo_count));
  }

  std::vector<double> score_m, score_d;
  std::vector<bool> labels;
  std::size_t correct_m = 0, correct_d = 0;
  for (int k = 0; k < 2; ++k)
    for (const FullAssignment& x : tests[k]) {
      PartialRecord record;
      for (NodeId v = 0; v < cfg.n; ++v) {
        if (set_contains(masked, v)) record.missing.insert(names[v]);
        else record.observed[names[v]] = full[0].state_names(v)[x[v]];
      }
      const ClassificationResult m = classify(record, full, cfg.sgs);
      const ClassificationResult d = classify_drop_missing(record, reduced);
      correct_m += static_cast<int>(m.predicted) == k;
      correct_d += static_cast<int>(d.predicted) == k;
      score_m.push_back(m.posteriors[1]);
      score_d.push_back(d.posteriors[1]);
      labels.push_back(k == 1);
    }

  StudyResult out;
  const double total = static_cast<double>(labels.size());
  out.accuracy_marginalized = correct_m / total;
  out.accuracy_dropped = correct_d / total;
  out.auc_marginalized = roc_auc(score_m, labels).auc;
  out.auc_dropped = roc_auc(score_d, labels).auc;
  for (NodeId v : masked) out.masked.push_back(names[v]);
  return out;
}

}  // namespace sgs
