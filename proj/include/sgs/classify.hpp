#ifndef SGS_CLASSIFY_HPP
#define SGS_CLASSIFY_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sgs/engine.hpp"
#include "sgs/network.hpp"

namespace sgs {

/// Observed variable -> state name, plus the names known to be missing.
struct PartialRecord {
  std::map<std::string, std::string> observed;
  std::set<std::string> missing;
};

struct ClassificationResult {
  std::vector<double> log_likelihoods;  // log P(X_e | B_i)
  std::vector<double> posteriors;       // uniform model prior
  std::size_t predicted = 0;
  bool tie = false;
  /// Observed names each model does not define; they were left out.
  std::vector<std::vector<std::string>> ignored;
};

/// Marginal likelihood of the observed part of the record under every
/// model (decomposed estimator), normalized to posteriors. Throws
/// ArgumentError for fewer than two models or a name both observed and
/// missing, IdentifierError for an unknown state of a known variable, and
/// ClassificationError when some model resolves no observed variable or
/// every model gives the record zero probability.
ClassificationResult classify(const PartialRecord& record, const std::vector<Network>& models,
                              const SgsConfig& cfg = {});

/// Baseline on models that hold only observed variables: each likelihood
/// is a complete-data joint. Throws ClassificationError when a model
/// variable is not observed in the record.
ClassificationResult classify_drop_missing(const PartialRecord& record, const std::vector<Network>& reduced_models);

struct RocCurve {
  double auc = 0.0;
  std::vector<std::pair<double, double>> points;  // (fpr, tpr), from (0,0) to (1,1)
};

/// Threshold sweep from the highest score down; tied scores move the curve
/// diagonally, so ties count half. Throws DomainError when only one class
/// is present and ArgumentError on size mismatch or empty input.
RocCurve roc_auc(const std::vector<double>& scores, const std::vector<bool>& labels);

/// Maximum-likelihood CPTs with a symmetric pseudo-count, from complete
/// records laid out by node id.
Network fit_network(const Dag& dag, const std::vector<int>& cards, const std::vector<std::string>& names,
                    const std::vector<FullAssignment>& records, double pseudo_count = 1.0);

struct StudyConfig {
  int n = 30;
  int categories = 2;
  double avg_mb_size = 3.3;
  std::size_t training_records = 200;  // per class
  std::size_t test_records = 200;      // per class
  double mask_fraction = 0.4;
  double pseudo_count = 1.0;
  std::uint64_t seed = 1;
  SgsConfig sgs;
};

struct StudyResult {
  double accuracy_marginalized = 0.0;
  double accuracy_dropped = 0.0;
  double auc_marginalized = 0.0;
  double auc_dropped = 0.0;
  std::vector<std::string> masked;
};

/// Two random networks generate complete training records and test
/// records; one fixed random set of variables is masked in every test
/// record. Both arms fit their CPTs on the same training records: the
/// marginalization arm on the full structures, the dropped arm on the
/// structures induced on the observed variables.
StudyResult run_classification_study(const StudyConfig& cfg);

}  // namespace sgs

#endif  // SGS_CLASSIFY_HPP
