#include "mind/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace mind {

using nlohmann::json;

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  for (;;) {
    const auto comma = line.find(',');
    out.push_back(trim(line.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return out;
}

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

double parse_number(std::string_view cell, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw Error(at_line(line) + "not a number: '" + std::string(cell) + "'");
  }
  return value;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  return out;
}

// Reads the next non-empty line; false at end of input.
bool next_line(std::istream& in, std::string& line, std::size_t& number) {
  while (std::getline(in, line)) {
    ++number;
    if (!trim(line).empty()) return true;
  }
  return false;
}

Label parse_label(std::string_view cell, std::size_t line) {
  if (cell == "+1" || cell == "1") return Label::positive;
  if (cell == "-1") return Label::negative;
  if (cell == "?") return Label::unknown;
  throw Error(at_line(line) + "label must be +1, -1 or ?, got '" + std::string(cell) + "'");
}

std::string_view label_text(Label label) {
  switch (label) {
    case Label::positive:
      return "+1";
    case Label::negative:
      return "-1";
    case Label::unknown:
      break;
  }
  return "?";
}

}  // namespace

MilDataset parse_mil_table(std::istream& in) {
  std::string line;
  std::size_t number = 0;
  if (!next_line(in, line, number)) throw Error("empty dataset file");
  const auto header = split(line);
  if (header.size() < 3 || header[0] != "bag_id" || header[1] != "label") {
    throw Error(at_line(number) + "header must be bag_id,label,f0,...");
  }
  const std::size_t dim = header.size() - 2;

  MilDataset dataset;
  dataset.dim = dim;
  std::unordered_map<std::string, std::size_t> index;
  while (next_line(in, line, number)) {
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw Error(at_line(number) + "expected " + std::to_string(header.size()) +
                  " fields, got " + std::to_string(cells.size()));
    }
    const std::string id(cells[0]);
    if (id.empty()) throw Error(at_line(number) + "empty bag id");
    const Label label = parse_label(cells[1], number);
    Instance x(dim);
    for (std::size_t k = 0; k < dim; ++k) x[k] = parse_number(cells[k + 2], number);

    auto [it, inserted] = index.emplace(id, dataset.bags.size());
    if (inserted) dataset.bags.push_back(Bag{id, {}, label});
    Bag& bag = dataset.bags[it->second];
    if (bag.label != label) throw Error("inconsistent label: " + id);
    bag.instances.push_back(std::move(x));
  }
  require_valid(dataset);
  return dataset;
}

MilDataset parse_mil_table(const std::string& path) {
  std::ifstream in = open_in(path);
  return parse_mil_table(in);
}

void write_mil_table(std::ostream& out, const MilDataset& dataset) {
  out << "bag_id,label";
  for (std::size_t k = 0; k < dataset.dim; ++k) out << ",f" << k;
  out << '\n';
  for (const Bag& bag : dataset.bags) {
    for (const Instance& x : bag.instances) {
      out << bag.id << ',' << label_text(bag.label);
      for (double v : x) out << ',' << format_double(v);
      out << '\n';
    }
  }
}

void write_mil_table(const std::string& path, const MilDataset& dataset) {
  std::ofstream out = open_out(path);
  write_mil_table(out, dataset);
}

void write_matrix(std::ostream& out, const DissimMatrix& matrix) {
  out << "measure=" << matrix.measure << ";symmetrize=" << to_string(matrix.symmetrization);
  for (const std::string& id : matrix.col_ids) out << ',' << id;
  out << '\n';
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    out << matrix.row_ids[i];
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
      out << ',' << format_double(matrix.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    out << '\n';
  }
}

void write_matrix(const std::string& path, const DissimMatrix& matrix) {
  std::ofstream out = open_out(path);
  write_matrix(out, matrix);
}

DissimMatrix read_matrix(std::istream& in) {
  std::string line;
  std::size_t number = 0;
  if (!next_line(in, line, number)) throw Error("empty matrix file");
  const auto header = split(line);
  if (header.size() < 2) throw Error(at_line(number) + "matrix header has no column ids");

  DissimMatrix matrix;
  // measure=<name>;symmetrize=<mode>; anything else leaves the tags empty
  const std::string_view tags = header[0];
  if (tags.starts_with("measure=")) {
    const auto semi = tags.find(';');
    matrix.measure = std::string(tags.substr(8, semi == std::string_view::npos ? semi : semi - 8));
    if (semi != std::string_view::npos) {
      const std::string_view rest = tags.substr(semi + 1);
      if (rest.starts_with("symmetrize=")) {
        if (auto mode = parse_symmetrization(rest.substr(11))) matrix.symmetrization = *mode;
      }
    }
  }
  for (std::size_t j = 1; j < header.size(); ++j) {
    if (header[j].empty()) throw Error(at_line(number) + "missing column id at position " + std::to_string(j));
    matrix.col_ids.emplace_back(header[j]);
  }

  std::vector<std::vector<double>> rows;
  while (next_line(in, line, number)) {
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw Error(at_line(number) + "expected " + std::to_string(header.size()) + " fields, got " +
                  std::to_string(cells.size()));
    }
    if (cells[0].empty()) throw Error(at_line(number) + "missing row id");
    matrix.row_ids.emplace_back(cells[0]);
    std::vector<double> row;
    for (std::size_t j = 1; j < cells.size(); ++j) row.push_back(parse_number(cells[j], number));
    rows.push_back(std::move(row));
  }
  matrix.values.resize(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(matrix.col_ids.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      matrix.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return matrix;
}

DissimMatrix read_matrix(const std::string& path) {
  std::ifstream in = open_in(path);
  return read_matrix(in);
}

void write_feature_table(std::ostream& out, const FeatureTable& table) {
  out << "bag_id,label";
  for (const std::string& c : table.columns) out << ',' << c;
  out << '\n';
  for (std::size_t i = 0; i < table.rows(); ++i) {
    out << table.row_ids[i] << ',' << label_text(table.labels[i]);
    for (std::size_t j = 0; j < table.cols(); ++j) {
      out << ',' << format_double(table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    out << '\n';
  }
}

void write_model(std::ostream& out, const LinearModel& model) {
  out << "kind=" << to_string(model.kind) << '\n'
      << "C=" << format_double(model.config.C) << '\n'
      << "tolerance=" << format_double(model.config.tolerance) << '\n'
      << "max_iterations=" << model.config.max_iterations << '\n'
      << "seed=" << model.config.seed << '\n'
      << "bias=" << format_double(model.bias) << '\n'
      << "features=" << model.weights.size() << '\n';
  for (Eigen::Index k = 0; k < model.weights.size(); ++k) {
    const std::string name = static_cast<std::size_t>(k) < model.feature_names.size()
                                 ? model.feature_names[static_cast<std::size_t>(k)]
                                 : "f" + std::to_string(k);
    out << "w." << name << '=' << format_double(model.weights[k]) << '\n';
  }
}

LinearModel read_model(std::istream& in) {
  LinearModel model;
  std::string line;
  std::size_t number = 0;
  std::optional<std::size_t> features;
  std::vector<double> weights;
  while (next_line(in, line, number)) {
    const auto eq = line.rfind('=');
    if (eq == std::string::npos) throw Error(at_line(number) + "expected key=value");
    const std::string key = line.substr(0, eq);
    const std::string_view value = trim(std::string_view(line).substr(eq + 1));
    if (key == "kind") {
      const auto kind = parse_classifier(value);
      if (!kind) throw Error(at_line(number) + "unknown model kind");
      model.kind = *kind;
    } else if (key == "C") {
      model.config.C = parse_number(value, number);
    } else if (key == "tolerance") {
      model.config.tolerance = parse_number(value, number);
    } else if (key == "max_iterations") {
      model.config.max_iterations = static_cast<std::size_t>(parse_number(value, number));
    } else if (key == "seed") {
      std::uint64_t seed = 0;
      std::from_chars(value.data(), value.data() + value.size(), seed);
      model.config.seed = seed;
    } else if (key == "bias") {
      model.bias = parse_number(value, number);
    } else if (key == "features") {
      features = static_cast<std::size_t>(parse_number(value, number));
    } else if (key.starts_with("w.")) {
      model.feature_names.push_back(key.substr(2));
      weights.push_back(parse_number(value, number));
    } else {
      throw Error(at_line(number) + "unknown key '" + key + "'");
    }
  }
  if (!features || *features != weights.size()) {
    throw Error("model file: feature count does not match weight lines");
  }
  model.weights = Eigen::Map<const Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  return model;
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

// Infinite values have no JSON literal; they are stored as null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or_inf(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

template <typename T, typename Parse>
T parse_enum(const json& j, const char* key, Parse parse) {
  const std::string text = j.at(key).get<std::string>();
  const auto value = parse(text);
  if (!value) throw Error(std::string("report: bad value for ") + key + ": " + text);
  return *value;
}

}  // namespace

json to_json(const PipelineSpec& spec) {
  return json{
      {"measure",
       {{"kind", to_string(spec.measure.kind)},
        {"sigma", optional_number(spec.measure.sigma)},
        {"ridge", optional_number(spec.measure.ridge)},
        {"emd_max_instances", spec.measure.emd_max_instances}}},
      {"symmetrization", to_string(spec.symmetrization)},
      {"representation", to_string(spec.representation)},
      {"baseline", to_string(spec.baseline)},
      {"miles_sigma", spec.miles.sigma},
      {"prototypes", spec.prototypes == PrototypeStrategy::all ? "all" : "random"},
      {"num_prototypes", spec.num_prototypes},
      {"classifier", to_string(spec.classifier)},
      {"train",
       {{"C", spec.train.C},
        {"tolerance", spec.train.tolerance},
        {"max_iterations", spec.train.max_iterations},
        {"seed", spec.train.seed}}},
      {"standardize", spec.standardize},
      {"threads", spec.threads},
  };
}

PipelineSpec pipeline_from_json(const json& j) {
  PipelineSpec spec;
  const json& m = j.at("measure");
  spec.measure.kind = parse_enum<MeasureKind>(m, "kind", parse_measure);
  spec.measure.sigma = read_optional(m, "sigma");
  spec.measure.ridge = read_optional(m, "ridge");
  spec.measure.emd_max_instances = m.at("emd_max_instances").get<std::size_t>();
  spec.symmetrization = parse_enum<SymmetrizationMode>(j, "symmetrization", parse_symmetrization);
  spec.representation = parse_enum<RepresentationMode>(j, "representation", parse_representation);
  spec.baseline = parse_enum<Baseline>(j, "baseline", parse_baseline);
  spec.miles.sigma = j.at("miles_sigma").get<double>();
  spec.prototypes = j.at("prototypes").get<std::string>() == "random" ? PrototypeStrategy::random
                                                                      : PrototypeStrategy::all;
  spec.num_prototypes = j.at("num_prototypes").get<std::size_t>();
  spec.classifier = parse_enum<ClassifierKind>(j, "classifier", parse_classifier);
  const json& t = j.at("train");
  spec.train.C = t.at("C").get<double>();
  spec.train.tolerance = t.at("tolerance").get<double>();
  spec.train.max_iterations = t.at("max_iterations").get<std::size_t>();
  spec.train.seed = t.at("seed").get<std::uint64_t>();
  spec.standardize = j.at("standardize").get<bool>();
  spec.threads = j.at("threads").get<unsigned>();
  return spec;
}

json to_json(const EvalReport& report) {
  json folds = json::array();
  for (const FoldScore& f : report.folds) {
    folds.push_back({{"repeat", f.repeat}, {"fold", f.fold}, {"auc", f.auc}, {"test_ids", f.test_ids}});
  }
  json j{
      {"folds", folds},
      {"mean_auc", report.mean_auc},
      {"std_error", report.std_error},
      {"std_error_formula", "sample_sd(fold_aucs) / sqrt(number_of_folds)"},
      {"seconds",
       {{"matrix", report.times.matrix_seconds},
        {"train", report.times.train_seconds},
        {"test", report.times.test_seconds}}},
  };
  if (report.requested_per_class) j["requested_per_class"] = *report.requested_per_class;
  if (report.used_positive) j["used_positive"] = *report.used_positive;
  if (report.used_negative) j["used_negative"] = *report.used_negative;
  return j;
}

EvalReport eval_report_from_json(const json& j) {
  EvalReport report;
  for (const json& f : j.at("folds")) {
    report.folds.push_back({f.at("repeat").get<std::size_t>(), f.at("fold").get<std::size_t>(),
                            f.at("auc").get<double>(), f.at("test_ids").get<std::vector<std::string>>()});
  }
  report.mean_auc = j.at("mean_auc").get<double>();
  report.std_error = j.at("std_error").get<double>();
  const json& s = j.at("seconds");
  report.times = {s.at("matrix").get<double>(), s.at("train").get<double>(), s.at("test").get<double>()};
  if (j.contains("requested_per_class")) report.requested_per_class = j["requested_per_class"].get<std::size_t>();
  if (j.contains("used_positive")) report.used_positive = j["used_positive"].get<std::size_t>();
  if (j.contains("used_negative")) report.used_negative = j["used_negative"].get<std::size_t>();
  return report;
}

json to_json(const SpectrumReport& report) {
  return json{{"source", report.source},
              {"eigenvalues", std::vector<double>(report.eigenvalues.data(),
                                                  report.eigenvalues.data() + report.eigenvalues.size())},
              {"nef", report.nef},
              {"ner", finite_or_null(report.ner)}};
}

SpectrumReport spectrum_report_from_json(const json& j) {
  SpectrumReport report;
  report.source = j.at("source").get<std::string>();
  const auto values = j.at("eigenvalues").get<std::vector<double>>();
  report.eigenvalues = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  report.nef = j.at("nef").get<double>();
  report.ner = number_or_inf(j.at("ner"));
  return report;
}

json to_json(const MetricityReport& report) {
  return json{{"source", report.source},
              {"nmf", report.nmf},
              {"violated", report.violated},
              {"total", report.total},
              {"symmetry_deviation", report.symmetry_deviation},
              {"sampled", report.sampled},
              {"seed", report.seed}};
}

MetricityReport metricity_report_from_json(const json& j) {
  MetricityReport report;
  report.source = j.at("source").get<std::string>();
  report.nmf = j.at("nmf").get<double>();
  report.violated = j.at("violated").get<std::uint64_t>();
  report.total = j.at("total").get<std::uint64_t>();
  report.symmetry_deviation = j.at("symmetry_deviation").get<double>();
  report.sampled = j.at("sampled").get<bool>();
  report.seed = j.at("seed").get<std::uint64_t>();
  return report;
}

json make_document(const std::string& command, const json& config, const json& body) {
  return json{{"toolkit", kToolkitName},
              {"version", kToolkitVersion},
              {"command", command},
              {"config", config},
              {"report", body}};
}

void write_json(const std::string& path, const json& document) {
  std::ofstream out = open_out(path);
  out << document.dump(2) << '\n';
}

json read_json(const std::string& path) {
  std::ifstream in = open_in(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error("cannot parse " + path + ": " + e.what());
  }
}

}  // namespace mind
