#include "mind/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace mind {

std::string_view to_string(ClassifierKind kind) {
  return kind == ClassifierKind::logistic ? "logistic" : "svm";
}

std::optional<ClassifierKind> parse_classifier(std::string_view name) {
  if (name == "logistic") return ClassifierKind::logistic;
  if (name == "svm") return ClassifierKind::svm;
  return std::nullopt;
}

double effective_tolerance(ClassifierKind kind, const TrainConfig& config) {
  if (config.tolerance > 0.0) return config.tolerance;
  return kind == ClassifierKind::logistic ? 1e-6 : 1e-4;
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

namespace {

// log(1 + exp(t)) without overflow.
double softplus(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

void check_config(const TrainConfig& config) {
  if (!(config.C > 0.0) || !std::isfinite(config.C)) throw Error("C must be positive");
  if (config.tolerance < 0.0) throw Error("tolerance must be non-negative");
  if (config.max_iterations == 0) throw Error("max_iterations must be positive");
}

Eigen::VectorXd margins(const Eigen::MatrixXd& z, const Eigen::VectorXd& w, double b) {
  Eigen::VectorXd m = z * w;
  m.array() += b;
  return m;
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

Eigen::VectorXd signed_targets(const FeatureTable& table) {
  if (table.rows() == 0) throw Error("empty training table");
  if (table.labels.size() != table.rows()) throw Error("label count does not match rows");
  Eigen::VectorXd y(static_cast<Eigen::Index>(table.rows()));
  bool has_pos = false;
  bool has_neg = false;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    switch (table.labels[i]) {
      case Label::positive:
        y[static_cast<Eigen::Index>(i)] = 1.0;
        has_pos = true;
        break;
      case Label::negative:
        y[static_cast<Eigen::Index>(i)] = -1.0;
        has_neg = true;
        break;
      case Label::unknown:
        throw Error("training row " + table.row_ids[i] + " has no label");
    }
  }
  if (!has_pos || !has_neg) throw Error("single-class training data");
  return y;
}

double logistic_objective(const Eigen::MatrixXd& z, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& weights, double bias, double C) {
  const Eigen::VectorXd m = margins(z, weights, bias);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < m.size(); ++i) loss += softplus(-y[i] * m[i]);
  return 0.5 * weights.squaredNorm() + C * loss;
}

Eigen::VectorXd logistic_gradient(const Eigen::MatrixXd& z, const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& weights, double bias, double C) {
  const Eigen::VectorXd m = margins(z, weights, bias);
  Eigen::VectorXd coef(m.size());
  for (Eigen::Index i = 0; i < m.size(); ++i) coef[i] = -C * y[i] * sigmoid(-y[i] * m[i]);
  Eigen::VectorXd grad(weights.size() + 1);
  grad.head(weights.size()) = weights + z.transpose() * coef;
  grad[weights.size()] = coef.sum();
  return grad;
}

double svm_primal_objective(const Eigen::MatrixXd& z, const Eigen::VectorXd& y,
                            const Eigen::VectorXd& weights, double bias, double C) {
  const Eigen::VectorXd m = margins(z, weights, bias);
  double hinge = 0.0;
  for (Eigen::Index i = 0; i < m.size(); ++i) hinge += std::max(0.0, 1.0 - y[i] * m[i]);
  return 0.5 * weights.squaredNorm() + C * hinge;
}

LinearModel train_logistic(const FeatureTable& table, const TrainConfig& config) {
  check_config(config);
  const Eigen::VectorXd y = signed_targets(table);
  const Eigen::MatrixXd& z = table.values;
  const Eigen::Index p = z.cols();
  const double tolerance = effective_tolerance(ClassifierKind::logistic, config);

  LinearModel model;
  model.kind = ClassifierKind::logistic;
  model.feature_names = table.columns;
  model.config = config;
  model.weights = Eigen::VectorXd::Zero(p);
  model.bias = 0.0;

  double f = logistic_objective(z, y, model.weights, model.bias, config.C);
  model.objective_trace.push_back(f);
  double grad_norm = 0.0;
  for (std::size_t iter = 0;; ++iter) {
    const Eigen::VectorXd g = logistic_gradient(z, y, model.weights, model.bias, config.C);
    grad_norm = g.norm();
    if (grad_norm <= tolerance) {
      model.iterations = iter;
      break;
    }
    if (iter >= config.max_iterations) {
      std::ostringstream msg;
      msg << "logistic regression did not converge in " << config.max_iterations
          << " iterations (gradient norm " << grad_norm << ")";
      throw Error(msg.str());
    }

    // Hessian of the augmented problem; the bias block is unregularized.
    const Eigen::VectorXd m = margins(z, model.weights, model.bias);
    Eigen::VectorXd curvature(m.size());
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      const double s = sigmoid(m[i]);
      curvature[i] = config.C * s * (1.0 - s);
    }
    Eigen::MatrixXd za(z.rows(), p + 1);
    za << z, Eigen::VectorXd::Ones(z.rows());
    Eigen::MatrixXd hessian = za.transpose() * curvature.asDiagonal() * za;
    hessian.diagonal().head(p).array() += 1.0;

    Eigen::LDLT<Eigen::MatrixXd> ldlt(hessian);
    Eigen::VectorXd step = -ldlt.solve(g);
    if (ldlt.info() != Eigen::Success || !step.allFinite() || g.dot(step) >= 0.0) {
      // saturated bias curvature: fall back to a gradient step
      step = -g;
    }

    // Armijo backtracking.
    const double slope = g.dot(step);
    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving, t *= 0.5) {
      const Eigen::VectorXd w_new = model.weights + t * step.head(p);
      const double b_new = model.bias + t * step[p];
      const double f_new = logistic_objective(z, y, w_new, b_new, config.C);
      if (f_new <= f + 1e-4 * t * slope) {
        model.weights = w_new;
        model.bias = b_new;
        f = f_new;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      std::ostringstream msg;
      msg << "logistic regression line search failed after " << iter
          << " iterations (gradient norm " << grad_norm << ")";
      throw Error(msg.str());
    }
    model.objective_trace.push_back(f);
  }
  model.objective = f;
  model.training_scores = to_std(margins(z, model.weights, model.bias));
  return model;
}

namespace {

// Bias minimizing sum of hinge losses for fixed scores s_i = w.z_i. The loss
// is convex and piecewise linear in b with kinks at y_i - s_i, so the optimum
// sits on a kink; ties resolve to the midpoint of the optimal kinks.
double best_bias(const Eigen::VectorXd& scores, const Eigen::VectorXd& y) {
  const Eigen::Index n = scores.size();
  std::vector<double> kinks(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) kinks[static_cast<std::size_t>(i)] = y[i] - scores[i];
  std::sort(kinks.begin(), kinks.end());
  auto loss = [&](double b) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) total += std::max(0.0, 1.0 - y[i] * (scores[i] + b));
    return total;
  };
  double best = std::numeric_limits<double>::infinity();
  double lo = 0.0;
  double hi = 0.0;
  for (double k : kinks) {
    const double value = loss(k);
    if (value < best) {
      best = value;
      lo = hi = k;
    } else if (value == best) {
      hi = k;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

LinearModel train_linear_svm(const FeatureTable& table, const TrainConfig& config) {
  check_config(config);
  const Eigen::VectorXd y = signed_targets(table);
  const Eigen::MatrixXd& z = table.values;
  const Eigen::Index n = z.rows();
  const double C = config.C;
  const double gap_tolerance = effective_tolerance(ClassifierKind::svm, config);
  constexpr double kTau = 1e-12;

  const Eigen::MatrixXd kernel = z * z.transpose();
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd grad = -Eigen::VectorXd::Ones(n);  // Q alpha - e

  LinearModel model;
  model.kind = ClassifierKind::svm;
  model.feature_names = table.columns;
  model.config = config;
  model.objective_trace.push_back(0.0);

  auto dual_objective = [&] { return 0.5 * alpha.dot(grad - Eigen::VectorXd::Ones(n)); };
  auto up = [&](Eigen::Index t) { return y[t] > 0 ? alpha[t] < C : alpha[t] > 0; };
  auto low = [&](Eigen::Index t) { return y[t] > 0 ? alpha[t] > 0 : alpha[t] < C; };

  double kkt_eps = 1e-3;
  std::size_t iter = 0;
  for (;;) {
    // SMO with second-order working-set selection until the maximal KKT
    // violation drops below kkt_eps.
    for (;;) {
      double g_max = -std::numeric_limits<double>::infinity();
      Eigen::Index i = -1;
      for (Eigen::Index t = 0; t < n; ++t) {
        if (up(t) && -y[t] * grad[t] >= g_max) {
          g_max = -y[t] * grad[t];
          i = t;
        }
      }
      double g_max2 = -std::numeric_limits<double>::infinity();
      Eigen::Index j = -1;
      double best_decrease = std::numeric_limits<double>::infinity();
      for (Eigen::Index t = 0; t < n; ++t) {
        if (!low(t)) continue;
        g_max2 = std::max(g_max2, y[t] * grad[t]);
        const double diff = g_max + y[t] * grad[t];
        if (i >= 0 && diff > 0.0) {
          const double quad =
              std::max(kernel(i, i) + kernel(t, t) - 2.0 * kernel(i, t), kTau);
          const double decrease = -(diff * diff) / quad;
          if (decrease <= best_decrease) {
            best_decrease = decrease;
            j = t;
          }
        }
      }
      if (i < 0 || j < 0 || g_max + g_max2 < kkt_eps) break;
      if (iter >= config.max_iterations) {
        std::ostringstream msg;
        msg << "svm did not converge in " << config.max_iterations
            << " iterations (KKT violation " << g_max + g_max2 << ")";
        throw Error(msg.str());
      }

      const double old_i = alpha[i];
      const double old_j = alpha[j];
      const double qij = y[i] * y[j] * kernel(i, j);
      if (y[i] != y[j]) {
        const double quad = std::max(kernel(i, i) + kernel(j, j) + 2.0 * qij, kTau);
        const double delta = (-grad[i] - grad[j]) / quad;
        const double diff = alpha[i] - alpha[j];
        alpha[i] += delta;
        alpha[j] += delta;
        if (diff > 0) {
          if (alpha[j] < 0) {
            alpha[j] = 0;
            alpha[i] = diff;
          }
        } else if (alpha[i] < 0) {
          alpha[i] = 0;
          alpha[j] = -diff;
        }
        if (diff > 0) {
          if (alpha[i] > C) {
            alpha[i] = C;
            alpha[j] = C - diff;
          }
        } else if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = C + diff;
        }
      } else {
        const double quad = std::max(kernel(i, i) + kernel(j, j) - 2.0 * qij, kTau);
        const double delta = (grad[i] - grad[j]) / quad;
        const double sum = alpha[i] + alpha[j];
        alpha[i] -= delta;
        alpha[j] += delta;
        if (sum > C) {
          if (alpha[i] > C) {
            alpha[i] = C;
            alpha[j] = sum - C;
          }
        } else if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = sum;
        }
        if (sum > C) {
          if (alpha[j] > C) {
            alpha[j] = C;
            alpha[i] = sum - C;
          }
        } else if (alpha[i] < 0) {
          alpha[i] = 0;
          alpha[j] = sum;
        }
      }
      const double d_i = alpha[i] - old_i;
      const double d_j = alpha[j] - old_j;
      for (Eigen::Index t = 0; t < n; ++t) {
        grad[t] += y[t] * (y[i] * kernel(t, i) * d_i + y[j] * kernel(t, j) * d_j);
      }
      ++iter;
      model.objective_trace.push_back(dual_objective());
    }

    const Eigen::VectorXd w = z.transpose() * alpha.cwiseProduct(y);
    const Eigen::VectorXd scores = z * w;
    const double b = best_bias(scores, y);
    const double primal = svm_primal_objective(z, y, w, b, C);
    const double dual = -dual_objective();
    model.weights = w;
    model.bias = b;
    model.objective = primal;
    if (primal - dual <= gap_tolerance * std::abs(primal) || kkt_eps < 1e-12) break;
    kkt_eps *= 0.1;
  }
  model.iterations = iter;
  model.training_scores = to_std(margins(z, model.weights, model.bias));
  return model;
}

LinearModel train(ClassifierKind kind, const FeatureTable& table, const TrainConfig& config) {
  return kind == ClassifierKind::logistic ? train_logistic(table, config)
                                          : train_linear_svm(table, config);
}

std::vector<double> predict_scores(const LinearModel& model, const Eigen::MatrixXd& rows) {
  if (rows.cols() != model.weights.size()) {
    throw Error("feature count mismatch: model has " + std::to_string(model.weights.size()) +
                ", table has " + std::to_string(rows.cols()));
  }
  return to_std(margins(rows, model.weights, model.bias));
}

std::vector<double> predict_scores(const LinearModel& model, const FeatureTable& table) {
  return predict_scores(model, table.values);
}

std::vector<double> predict_probabilities(const LinearModel& model, const FeatureTable& table) {
  std::vector<double> scores = predict_scores(model, table);
  for (double& s : scores) s = sigmoid(s);
  return scores;
}

Standardizer Standardizer::fit(const FeatureTable& training) {
  const Eigen::MatrixXd& v = training.values;
  if (v.rows() == 0) throw Error("cannot standardize an empty table");
  Standardizer s;
  s.mean = v.colwise().mean().transpose();
  s.scale = Eigen::VectorXd::Ones(v.cols());
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    if (v.col(c).maxCoeff() == v.col(c).minCoeff()) continue;
    const double sd = std::sqrt((v.col(c).array() - s.mean[c]).square().mean());
    if (sd > 0.0) s.scale[c] = sd;
  }
  return s;
}

FeatureTable Standardizer::apply(const FeatureTable& table) const {
  if (table.values.cols() != mean.size()) throw Error("standardizer: column count mismatch");
  FeatureTable out = table;
  out.values = (table.values.rowwise() - mean.transpose()).array().rowwise() /
               scale.transpose().array();
  return out;
}

}  // namespace mind
