#include "mind/dissim_space.hpp"

#include <algorithm>
#include <exception>
#include <numeric>
#include <thread>

#include "mind/random.hpp"

namespace mind {

std::vector<std::string> PrototypeSet::ids() const {
  std::vector<std::string> out;
  out.reserve(bags.size());
  for (const Bag& b : bags) out.push_back(b.id);
  return out;
}

PrototypeSet select_prototypes(const MilDataset& training, PrototypeStrategy strategy,
                               std::size_t count, std::uint64_t seed) {
  PrototypeSet out;
  out.strategy = strategy;
  out.seed = seed;
  if (strategy == PrototypeStrategy::all) {
    if (training.empty()) throw Error("no training bags to use as prototypes");
    out.bags = training.bags;
    return out;
  }
  if (count == 0) throw Error("number of prototypes must be positive");
  if (count > training.size()) {
    throw Error("requested " + std::to_string(count) + " prototypes but only " +
                std::to_string(training.size()) + " training bags are available");
  }
  std::vector<std::size_t> order(training.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order);
  order.resize(count);
  std::sort(order.begin(), order.end());
  for (std::size_t i : order) out.bags.push_back(training.bags[i]);
  return out;
}

namespace {

double entry(const Bag& bag, const Bag& proto, const MeasureSpec& measure,
             const MatrixOptions& options) {
  const bool to = options.direction == Direction::to;
  const Bag& first = to ? bag : proto;
  const Bag& second = to ? proto : bag;
  const double forward = bag_dissimilarity(first, second, measure);
  if (!is_directed(measure.kind) || options.symmetrization == SymmetrizationMode::none) {
    return forward;
  }
  return symmetrize(forward, bag_dissimilarity(second, first, measure), options.symmetrization);
}

void fill_rows(const MilDataset& bags, const PrototypeSet& prototypes, const MeasureSpec& measure,
               const MatrixOptions& options, std::size_t begin, std::size_t end,
               Eigen::MatrixXd& values) {
  for (std::size_t i = begin; i < end; ++i) {
    const Bag& bag = bags.bags[i];
    for (std::size_t j = 0; j < prototypes.bags.size(); ++j) {
      const Bag& proto = prototypes.bags[j];
      try {
        values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            entry(bag, proto, measure, options);
      } catch (const Error& e) {
        throw Error(std::string(e.what()) + " [bag " + bag.id + ", prototype " + proto.id + "]");
      }
    }
  }
}

}  // namespace

DissimMatrix compute_matrix(const MilDataset& bags, const PrototypeSet& prototypes,
                            const MeasureSpec& measure, const MatrixOptions& options) {
  if (prototypes.bags.empty()) throw Error("empty prototype set");
  for (const Bag& p : prototypes.bags) {
    if (p.dim() != bags.dim && !bags.empty()) {
      throw Error("prototype " + p.id + " has dimensionality " + std::to_string(p.dim()) +
                  ", bags have " + std::to_string(bags.dim));
    }
  }

  DissimMatrix out;
  out.measure = std::string(to_string(measure.kind));
  out.symmetrization =
      is_directed(measure.kind) ? options.symmetrization : SymmetrizationMode::none;
  out.col_ids = prototypes.ids();
  out.row_ids.reserve(bags.size());
  for (const Bag& b : bags.bags) out.row_ids.push_back(b.id);
  out.values.resize(static_cast<Eigen::Index>(bags.size()),
                    static_cast<Eigen::Index>(prototypes.size()));

  const std::size_t n = bags.size();
  const std::size_t workers = std::clamp<std::size_t>(options.threads, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    fill_rows(bags, prototypes, measure, options, 0, n, out.values);
    return out;
  }

  // Contiguous row blocks; each entry is written by exactly one worker.
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = n * w / workers;
    const std::size_t end = n * (w + 1) / workers;
    pool.emplace_back([&, w, begin, end] {
      try {
        fill_rows(bags, prototypes, measure, options, begin, end, out.values);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::string_view to_string(RepresentationMode mode) {
  switch (mode) {
    case RepresentationMode::to:
      return "to";
    case RepresentationMode::from:
      return "from";
    case RepresentationMode::extended:
      break;
  }
  return "extended";
}

std::optional<RepresentationMode> parse_representation(std::string_view name) {
  if (name == "to") return RepresentationMode::to;
  if (name == "from") return RepresentationMode::from;
  if (name == "extended") return RepresentationMode::extended;
  return std::nullopt;
}

std::vector<Label> labels_of(const MilDataset& bags) {
  std::vector<Label> out;
  out.reserve(bags.size());
  for (const Bag& b : bags.bags) out.push_back(b.label);
  return out;
}

FeatureTable build_representation(const DissimMatrix& to_matrix,
                                  const std::optional<DissimMatrix>& from_matrix,
                                  RepresentationMode mode, const std::vector<Label>& labels) {
  if (mode != RepresentationMode::to) {
    if (!from_matrix) throw Error("representation '" + std::string(to_string(mode)) +
                                  "' needs the reverse-direction matrix");
    if (from_matrix->row_ids != to_matrix.row_ids || from_matrix->col_ids != to_matrix.col_ids) {
      throw Error("representation: row/column ids of the two matrices differ");
    }
  }
  if (!labels.empty() && labels.size() != to_matrix.rows()) {
    throw Error("representation: label count does not match matrix rows");
  }

  FeatureTable table;
  table.row_ids = to_matrix.row_ids;
  table.labels = labels.empty() ? std::vector<Label>(to_matrix.rows(), Label::unknown) : labels;

  const auto named = [&](const DissimMatrix& m, const char* suffix) {
    for (const std::string& id : m.col_ids) table.columns.push_back(m.measure + ":" + id + suffix);
  };
  switch (mode) {
    case RepresentationMode::to:
      named(to_matrix, "");
      table.values = to_matrix.values;
      break;
    case RepresentationMode::from:
      named(*from_matrix, ":from");
      table.values = from_matrix->values;
      break;
    case RepresentationMode::extended:
      named(to_matrix, ":to");
      named(*from_matrix, ":from");
      table.values.resize(to_matrix.values.rows(), 2 * to_matrix.values.cols());
      table.values << to_matrix.values, from_matrix->values;
      break;
  }
  return table;
}

}  // namespace mind
