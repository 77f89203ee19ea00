#include "mind/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "mind/random.hpp"

namespace mind {

double auc(const std::vector<double>& scores, const std::vector<Label>& labels) {
  if (scores.size() != labels.size()) throw Error("auc: scores and labels differ in length");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Mann-Whitney U from midranks of tied groups.
  double positive_rank_sum = 0.0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  for (std::size_t start = 0; start < order.size();) {
    std::size_t end = start + 1;
    while (end < order.size() && scores[order[end]] == scores[order[start]]) ++end;
    const double midrank = 0.5 * static_cast<double>(start + 1 + end);
    for (std::size_t k = start; k < end; ++k) {
      switch (labels[order[k]]) {
        case Label::positive:
          positive_rank_sum += midrank;
          ++positives;
          break;
        case Label::negative:
          ++negatives;
          break;
        case Label::unknown:
          throw Error("auc: unknown label");
      }
    }
    start = end;
  }
  if (positives == 0 || negatives == 0) throw Error("auc: needs both positive and negative labels");
  const double np = static_cast<double>(positives);
  const double nn = static_cast<double>(negatives);
  return (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

std::string_view to_string(Baseline baseline) {
  switch (baseline) {
    case Baseline::none:
      return "none";
    case Baseline::minimax:
      return "minimax";
    case Baseline::miles:
      break;
  }
  return "miles";
}

std::optional<Baseline> parse_baseline(std::string_view name) {
  if (name == "none") return Baseline::none;
  if (name == "minimax") return Baseline::minimax;
  if (name == "miles") return Baseline::miles;
  return std::nullopt;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

FeatureTable take_rows(const FeatureTable& table, std::size_t begin, std::size_t count) {
  FeatureTable out;
  out.columns = table.columns;
  out.row_ids.assign(table.row_ids.begin() + static_cast<std::ptrdiff_t>(begin),
                     table.row_ids.begin() + static_cast<std::ptrdiff_t>(begin + count));
  out.labels.assign(table.labels.begin() + static_cast<std::ptrdiff_t>(begin),
                    table.labels.begin() + static_cast<std::ptrdiff_t>(begin + count));
  out.values = table.values.middleRows(static_cast<Eigen::Index>(begin),
                                       static_cast<Eigen::Index>(count));
  return out;
}

std::vector<std::string> ids_of(const MilDataset& dataset) {
  std::vector<std::string> ids;
  for (const Bag& b : dataset.bags) ids.push_back(b.id);
  return ids;
}

void require_labeled(const MilDataset& dataset) {
  bool pos = false;
  bool neg = false;
  for (const Bag& b : dataset.bags) {
    if (b.label == Label::unknown) throw Error("evaluation requires labeled bags (bag " + b.id + ")");
    pos = pos || b.label == Label::positive;
    neg = neg || b.label == Label::negative;
  }
  if (!pos || !neg) throw Error("evaluation requires both positive and negative bags");
}

}  // namespace

FoldOutcome run_fold(const MilDataset& train, const MilDataset& test, const PipelineSpec& spec,
                     std::uint64_t seed) {
  FoldOutcome out;
  const MilDataset all = concat(train, strip_labels(test));
  const std::size_t n_train = train.size();

  auto start = Clock::now();
  FeatureTable table;
  switch (spec.baseline) {
    case Baseline::none: {
      const PrototypeSet protos =
          select_prototypes(train, spec.prototypes, spec.num_prototypes, seed);
      const bool directed_views = spec.representation != RepresentationMode::to;
      MatrixOptions opts;
      opts.threads = spec.threads;
      opts.symmetrization = directed_views ? SymmetrizationMode::none : spec.symmetrization;
      out.to_matrix = compute_matrix(all, protos, spec.measure, opts);
      if (directed_views) {
        opts.direction = Direction::from;
        out.from_matrix = compute_matrix(all, protos, spec.measure, opts);
      }
      table = build_representation(*out.to_matrix, out.from_matrix, spec.representation,
                                   labels_of(all));
      break;
    }
    case Baseline::minimax:
      table = minimax_rep(all);
      break;
    case Baseline::miles: {
      std::vector<std::string> names;
      const std::vector<Instance> reference = collect_instances(train, &names);
      table = miles_rep(all, reference, spec.miles, names);
      break;
    }
  }
  out.matrix_seconds = seconds_since(start);

  start = Clock::now();
  out.train_features = take_rows(table, 0, n_train);
  out.test_features = take_rows(table, n_train, table.rows() - n_train);
  if (spec.standardize) {
    const Standardizer scaler = Standardizer::fit(out.train_features);
    out.train_features = scaler.apply(out.train_features);
    out.test_features = scaler.apply(out.test_features);
  }
  out.model = mind::train(spec.classifier, out.train_features, spec.train);
  out.train_seconds = seconds_since(start);

  start = Clock::now();
  out.test_scores = predict_scores(out.model, out.test_features);
  out.test_seconds = seconds_since(start);
  return out;
}

void summarize(EvalReport& report) {
  const std::size_t count = report.folds.size();
  report.mean_auc = 0.0;
  report.std_error = 0.0;
  if (count == 0) return;
  double sum = 0.0;
  for (const FoldScore& f : report.folds) sum += f.auc;
  report.mean_auc = sum / static_cast<double>(count);
  if (count < 2) return;
  double ss = 0.0;
  for (const FoldScore& f : report.folds) ss += (f.auc - report.mean_auc) * (f.auc - report.mean_auc);
  const double sd = std::sqrt(ss / static_cast<double>(count - 1));
  report.std_error = sd / std::sqrt(static_cast<double>(count));
}

std::vector<std::size_t> stratified_folds(const MilDataset& dataset, std::size_t folds,
                                          std::uint64_t seed) {
  if (folds < 2) throw Error("need at least 2 folds");
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    (dataset.bags[i].label == Label::positive ? pos : neg).push_back(i);
  }
  Rng rng(seed);
  rng.shuffle(pos);
  rng.shuffle(neg);
  std::vector<std::size_t> assignment(dataset.size());
  std::size_t slot = 0;
  for (std::size_t i : pos) assignment[i] = slot++ % folds;
  for (std::size_t i : neg) assignment[i] = slot++ % folds;
  return assignment;
}

EvalReport cross_validate(const MilDataset& dataset, const CVConfig& config) {
  require_valid(dataset);
  require_labeled(dataset);
  if (config.repeats == 0) throw Error("need at least 1 repeat");

  EvalReport report;
  for (std::size_t r = 0; r < config.repeats; ++r) {
    const std::vector<std::size_t> assignment =
        stratified_folds(dataset, config.folds, derive_seed(config.seed, r));
    for (std::size_t f = 0; f < config.folds; ++f) {
      std::vector<std::size_t> train_idx;
      std::vector<std::size_t> test_idx;
      for (std::size_t i = 0; i < dataset.size(); ++i) {
        (assignment[i] == f ? test_idx : train_idx).push_back(i);
      }
      const MilDataset train = subset(dataset, train_idx);
      const MilDataset test = subset(dataset, test_idx);
      const std::vector<Label> test_labels = labels_of(test);
      const bool has_pos = std::count(test_labels.begin(), test_labels.end(), Label::positive) > 0;
      const bool has_neg = std::count(test_labels.begin(), test_labels.end(), Label::negative) > 0;
      if (!has_pos || !has_neg) {
        throw Error("fold without both classes (repeat " + std::to_string(r) + ", fold " +
                    std::to_string(f) + " of " + std::to_string(config.folds) +
                    "); use fewer folds");
      }
      const FoldOutcome outcome =
          run_fold(train, test, config.pipeline, derive_seed(config.seed, 1000003 * (r + 1) + f));
      report.folds.push_back({r, f, auc(outcome.test_scores, test_labels), ids_of(test)});
      report.times.matrix_seconds += outcome.matrix_seconds;
      report.times.train_seconds += outcome.train_seconds;
      report.times.test_seconds += outcome.test_seconds;
    }
  }
  summarize(report);
  return report;
}

std::vector<EvalReport> learning_curve(const MilDataset& dataset, const CurveConfig& config) {
  require_valid(dataset);
  require_labeled(dataset);
  if (config.sizes.empty()) throw Error("learning curve needs at least one size");
  if (config.iterations == 0) throw Error("learning curve needs at least one iteration");
  if (!(config.test_fraction > 0.0 && config.test_fraction < 1.0)) {
    throw Error("test fraction must lie in (0, 1)");
  }

  std::vector<EvalReport> reports(config.sizes.size());
  for (std::size_t it = 0; it < config.iterations; ++it) {
    std::vector<std::size_t> pos;
    std::vector<std::size_t> neg;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      (dataset.bags[i].label == Label::positive ? pos : neg).push_back(i);
    }
    Rng rng(derive_seed(config.seed, it));
    rng.shuffle(pos);
    rng.shuffle(neg);
    const auto held_out = [&](std::size_t n) {
      const auto k = static_cast<std::size_t>(std::llround(config.test_fraction * static_cast<double>(n)));
      return std::clamp<std::size_t>(k, 1, n - 1);
    };
    if (pos.size() < 2 || neg.size() < 2) throw Error("learning curve needs 2 bags per class");
    const std::size_t test_pos = held_out(pos.size());
    const std::size_t test_neg = held_out(neg.size());

    std::vector<std::size_t> test_idx(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(test_pos));
    test_idx.insert(test_idx.end(), neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(test_neg));
    const MilDataset test = subset(dataset, test_idx);
    const std::vector<Label> test_labels = labels_of(test);
    const std::vector<std::size_t> pool_pos(pos.begin() + static_cast<std::ptrdiff_t>(test_pos), pos.end());
    const std::vector<std::size_t> pool_neg(neg.begin() + static_cast<std::ptrdiff_t>(test_neg), neg.end());

    for (std::size_t s = 0; s < config.sizes.size(); ++s) {
      const std::size_t want = config.sizes[s];
      if (want == 0) throw Error("learning curve sizes must be positive");
      const std::size_t use_pos = std::min(want, pool_pos.size());
      const std::size_t use_neg = std::min(want, pool_neg.size());
      std::vector<std::size_t> train_idx(pool_pos.begin(), pool_pos.begin() + static_cast<std::ptrdiff_t>(use_pos));
      train_idx.insert(train_idx.end(), pool_neg.begin(), pool_neg.begin() + static_cast<std::ptrdiff_t>(use_neg));
      const MilDataset train = subset(dataset, train_idx);

      const FoldOutcome outcome =
          run_fold(train, test, config.pipeline, derive_seed(config.seed, 7919 * (it + 1) + s));
      EvalReport& report = reports[s];
      report.requested_per_class = want;
      report.used_positive = use_pos;
      report.used_negative = use_neg;
      report.folds.push_back({it, 0, auc(outcome.test_scores, test_labels), ids_of(test)});
      report.times.matrix_seconds += outcome.matrix_seconds;
      report.times.train_seconds += outcome.train_seconds;
      report.times.test_seconds += outcome.test_seconds;
    }
  }
  for (EvalReport& r : reports) summarize(r);
  return reports;
}

}  // namespace mind
