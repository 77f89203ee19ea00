#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mind/alt_reps.hpp"
#include "mind/bag.hpp"
#include "mind/classifiers.hpp"
#include "mind/dissim_space.hpp"
#include "mind/measure.hpp"

namespace mind {

/// Mann-Whitney AUC: probability that a random positive outscores a random
/// negative, ties counted one half. Throws unless both classes are present.
double auc(const std::vector<double>& scores, const std::vector<Label>& labels);

enum class Baseline { none, minimax, miles };

std::string_view to_string(Baseline baseline);
std::optional<Baseline> parse_baseline(std::string_view name);

/// Everything that turns training bags into a scoring model.
struct PipelineSpec {
  MeasureSpec measure;
  SymmetrizationMode symmetrization = SymmetrizationMode::average;
  RepresentationMode representation = RepresentationMode::to;
  Baseline baseline = Baseline::none;
  MilesParams miles;
  PrototypeStrategy prototypes = PrototypeStrategy::all;
  std::size_t num_prototypes = 0;
  ClassifierKind classifier = ClassifierKind::svm;
  TrainConfig train;
  bool standardize = true;
  unsigned threads = 1;
};

/// Intermediate products of one train/test split.
struct FoldOutcome {
  std::optional<DissimMatrix> to_matrix;
  std::optional<DissimMatrix> from_matrix;
  FeatureTable train_features;  ///< after standardization
  FeatureTable test_features;   ///< after standardization
  LinearModel model;
  std::vector<double> test_scores;
  double matrix_seconds = 0.0;
  double train_seconds = 0.0;
  double test_seconds = 0.0;
};

/// Fits the pipeline on `train` and scores `test`. Test labels are removed
/// before any computation, so they cannot influence the result.
FoldOutcome run_fold(const MilDataset& train, const MilDataset& test, const PipelineSpec& spec,
                     std::uint64_t seed);

struct FoldScore {
  std::size_t repeat = 0;
  std::size_t fold = 0;
  double auc = 0.0;
  std::vector<std::string> test_ids;
};

struct PhaseTimes {
  double matrix_seconds = 0.0;
  double train_seconds = 0.0;
  double test_seconds = 0.0;
};

struct EvalReport {
  std::vector<FoldScore> folds;
  double mean_auc = 0.0;
  double std_error = 0.0;
  PhaseTimes times;
  /// Learning curves: bags per class requested and actually used.
  std::optional<std::size_t> requested_per_class;
  std::optional<std::size_t> used_positive;
  std::optional<std::size_t> used_negative;
};

/// Mean and standard error (sample standard deviation / sqrt(count)) of the
/// fold AUCs.
void summarize(EvalReport& report);

struct CVConfig {
  std::size_t folds = 10;
  std::size_t repeats = 5;
  std::uint64_t seed = 0;
  PipelineSpec pipeline;
};

/// Stratified fold assignment of the bags for one repeat: positives and
/// negatives are shuffled separately and dealt round-robin over the folds.
std::vector<std::size_t> stratified_folds(const MilDataset& dataset, std::size_t folds,
                                          std::uint64_t seed);

EvalReport cross_validate(const MilDataset& dataset, const CVConfig& config);

struct CurveConfig {
  std::vector<std::size_t> sizes{5, 10, 20, 40};
  std::size_t iterations = 20;
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
  PipelineSpec pipeline;
};

/// One report per size; within an iteration every size is scored on the same
/// held-out bags. Each report's folds list holds one entry per iteration.
std::vector<EvalReport> learning_curve(const MilDataset& dataset, const CurveConfig& config);

}  // namespace mind
