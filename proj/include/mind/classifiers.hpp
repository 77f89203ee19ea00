#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "mind/dissim_space.hpp"

namespace mind {

enum class ClassifierKind { logistic, svm };

std::string_view to_string(ClassifierKind kind);
std::optional<ClassifierKind> parse_classifier(std::string_view name);

struct TrainConfig {
  double C = 1.0;
  /// Gradient-norm bound for logistic regression; relative primal-dual gap
  /// for the SVM. Zero selects the per-classifier default (1e-6 / 1e-4).
  double tolerance = 0.0;
  std::size_t max_iterations = 10000;
  std::uint64_t seed = 0;
};

double effective_tolerance(ClassifierKind kind, const TrainConfig& config);

struct LinearModel {
  ClassifierKind kind = ClassifierKind::logistic;
  Eigen::VectorXd weights;
  double bias = 0.0;
  std::vector<std::string> feature_names;
  TrainConfig config;

  /// Scores of the training rows, computed once training finished.
  std::vector<double> training_scores;
  /// Objective value after every accepted step (the SVM records its dual
  /// objective, which SMO decreases). Empty for deserialized models.
  std::vector<double> objective_trace;
  std::size_t iterations = 0;
  /// Primal objective at the returned parameters.
  double objective = 0.0;
};

/// Minimizes 1/2 ||w||^2 + C * sum log(1 + exp(-y (w.z + b))) by damped
/// Newton steps until the gradient norm drops below the tolerance. The bias
/// is not regularized.
LinearModel train_logistic(const FeatureTable& table, const TrainConfig& config);

/// Minimizes 1/2 ||w||^2 + C * sum max(0, 1 - y (w.z + b)) through its dual
/// with SMO working-set selection, stopping on a relative primal-dual gap.
/// The bias is not regularized.
LinearModel train_linear_svm(const FeatureTable& table, const TrainConfig& config);

LinearModel train(ClassifierKind kind, const FeatureTable& table, const TrainConfig& config);

/// w.z + b per row.
std::vector<double> predict_scores(const LinearModel& model, const FeatureTable& table);
std::vector<double> predict_scores(const LinearModel& model, const Eigen::MatrixXd& rows);

/// Logistic link applied to the scores.
std::vector<double> predict_probabilities(const LinearModel& model, const FeatureTable& table);

double sigmoid(double t);

/// +1 / -1 targets; throws on unknown labels or when a class is missing.
Eigen::VectorXd signed_targets(const FeatureTable& table);

/// Objective and gradient of the logistic problem at (weights, bias); the
/// gradient has the bias derivative in its last entry.
double logistic_objective(const Eigen::MatrixXd& z, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& weights, double bias, double C);
Eigen::VectorXd logistic_gradient(const Eigen::MatrixXd& z, const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& weights, double bias, double C);

double svm_primal_objective(const Eigen::MatrixXd& z, const Eigen::VectorXd& y,
                            const Eigen::VectorXd& weights, double bias, double C);

/// Column-wise centering and scaling fitted on training rows. Constant
/// columns are centered only.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;

  static Standardizer fit(const FeatureTable& training);
  FeatureTable apply(const FeatureTable& table) const;
};

}  // namespace mind
