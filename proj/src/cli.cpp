#include "mind/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mind/alt_reps.hpp"
#include "mind/datagen.hpp"
#include "mind/evaluation.hpp"
#include "mind/io.hpp"
#include "mind/matrix_analysis.hpp"

namespace mind {

namespace {

const std::vector<std::string> kMeasures{"minmin",   "meanmin",     "maxmin", "hausdorff",
                                         "meanmean", "mahalanobis", "cs",     "emd"};
const std::vector<std::string> kSymmetrizations{"none", "avg", "average", "min", "max"};

// Options shared by dissim, represent, cv and curve.
struct MeasureArgs {
  std::string measure = "meanmin";
  std::string symmetrize = "avg";
  double sigma = 0.0;
  double ridge = 0.0;
  std::size_t emd_max_instances = 512;
  unsigned threads = 1;
  CLI::Option* sigma_opt = nullptr;
  CLI::Option* ridge_opt = nullptr;

  void attach(CLI::App& app) {
    app.add_option("--measure", measure, "bag dissimilarity")
        ->check(CLI::IsMember(kMeasures))
        ->capture_default_str();
    app.add_option("--symmetrize", symmetrize, "none|avg|min|max")
        ->check(CLI::IsMember(kSymmetrizations))
        ->capture_default_str();
    sigma_opt = app.add_option("--sigma", sigma, "Cauchy-Schwarz kernel width (default sqrt(dim))")
                    ->check(CLI::PositiveNumber);
    ridge_opt = app.add_option("--ridge", ridge, "Mahalanobis ridge (default automatic)")
                    ->check(CLI::NonNegativeNumber);
    app.add_option("--emd-max-instances", emd_max_instances, "largest bag EMD accepts")
        ->capture_default_str();
    app.add_option("--threads", threads, "worker threads for matrix builds")
        ->envname("MIND_THREADS")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }

  MeasureSpec spec() const {
    MeasureSpec s;
    s.kind = *parse_measure(measure);
    if (sigma_opt->count() > 0) s.sigma = sigma;
    if (ridge_opt->count() > 0) s.ridge = ridge;
    s.emd_max_instances = emd_max_instances;
    return s;
  }

  SymmetrizationMode mode() const { return *parse_symmetrization(symmetrize); }
};

struct PipelineArgs {
  MeasureArgs measure;
  std::string representation = "to";
  std::string baseline = "none";
  double miles_sigma = 10.0;
  std::string classifier = "svm";
  double C = 1.0;
  double tolerance = 0.0;
  std::size_t max_iterations = 10000;
  bool no_standardize = false;
  std::string prototypes = "all";
  std::size_t num_prototypes = 0;

  void attach(CLI::App& app) {
    measure.attach(app);
    app.add_option("--representation", representation, "to|from|extended")
        ->check(CLI::IsMember({"to", "from", "extended"}))
        ->capture_default_str();
    app.add_option("--baseline", baseline, "none|minimax|miles (replaces the dissimilarity space)")
        ->check(CLI::IsMember({"none", "minimax", "miles"}))
        ->capture_default_str();
    app.add_option("--miles-sigma", miles_sigma, "MILES kernel width")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--classifier", classifier, "logistic|svm")
        ->check(CLI::IsMember({"logistic", "svm"}))
        ->capture_default_str();
    app.add_option("--C", C, "regularization trade-off")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--tolerance", tolerance, "stopping tolerance (0 = classifier default)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_option("--max-iterations", max_iterations, "solver iteration cap")->capture_default_str();
    app.add_flag("--no-standardize", no_standardize, "skip feature standardization");
    app.add_option("--prototypes", prototypes, "all|random")
        ->check(CLI::IsMember({"all", "random"}))
        ->capture_default_str();
    app.add_option("--num-prototypes", num_prototypes, "prototype count for --prototypes random");
  }

  PipelineSpec spec(std::uint64_t seed) const {
    PipelineSpec s;
    s.measure = measure.spec();
    s.symmetrization = measure.mode();
    s.representation = *parse_representation(representation);
    s.baseline = *parse_baseline(baseline);
    s.miles.sigma = miles_sigma;
    s.prototypes = prototypes == "random" ? PrototypeStrategy::random : PrototypeStrategy::all;
    s.num_prototypes = num_prototypes;
    s.classifier = *parse_classifier(classifier);
    s.train.C = C;
    s.train.tolerance = tolerance;
    s.train.max_iterations = max_iterations;
    s.train.seed = seed;
    s.standardize = !no_standardize;
    s.threads = measure.threads;
    return s;
  }
};

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t pos = 0;
    unsigned long long value = 0;
    try {
      value = std::stoull(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != item.size() || value == 0) throw Error("bad --sizes entry '" + item + "'");
    sizes.push_back(static_cast<std::size_t>(value));
  }
  if (sizes.empty()) throw Error("--sizes is empty");
  return sizes;
}

void print_summary(std::ostream& out, const DatasetSummary& s) {
  out << "positive_bags=" << s.positive_bags << '\n'
      << "negative_bags=" << s.negative_bags << '\n'
      << "unknown_bags=" << s.unknown_bags << '\n'
      << "dim=" << s.dim << '\n'
      << "instances=" << s.total_instances << '\n'
      << "min_bag_size=" << s.min_bag_size << '\n'
      << "avg_bag_size=" << format_double(s.avg_bag_size) << '\n'
      << "max_bag_size=" << s.max_bag_size << '\n';
}

DissimMatrix symmetric_part(const DissimMatrix& m) {
  DissimMatrix out = m;
  out.values = 0.5 * (m.values + m.values.transpose());
  return out;
}

// All bags serve as prototypes, so matrices and tables are square.
PrototypeSet all_prototypes(const MilDataset& data) {
  return select_prototypes(data, PrototypeStrategy::all, 0, 0);
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multiple-instance learning in dissimilarity space", "mind"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolkitVersion);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic MIL dataset");
  std::string problem = "concept";
  GenConfig gen_config;
  std::string gen_out;
  gen->add_option("--problem", problem, "concept|distribution|multiconcept")
      ->check(CLI::IsMember({"concept", "distribution", "multiconcept"}))
      ->required();
  gen->add_option("--bags-per-class", gen_config.bags_per_class)->capture_default_str();
  gen->add_option("--instances", gen_config.instances_per_bag, "instances per bag")->capture_default_str();
  gen->add_option("--dim", gen_config.dim)->capture_default_str();
  gen->add_option("--seed", gen_config.seed)->capture_default_str();
  gen->add_option("-o,--output", gen_out, "dataset file")->required();

  // summary
  auto* summary = app.add_subcommand("summary", "print dataset statistics");
  std::string summary_in;
  summary->add_option("-i,--input", summary_in, "dataset file")->required()->check(CLI::ExistingFile);

  // dissim
  auto* dissim = app.add_subcommand("dissim", "bag-to-bag dissimilarity matrix over all bags");
  MeasureArgs dissim_args;
  dissim_args.attach(*dissim);
  std::string dissim_in;
  std::string dissim_out;
  dissim->add_option("-i,--input", dissim_in, "dataset file")->required()->check(CLI::ExistingFile);
  dissim->add_option("-o,--output", dissim_out, "matrix file")->required();

  // represent
  auto* represent = app.add_subcommand("represent", "write the bag feature table (all bags as prototypes)");
  PipelineArgs represent_args;
  represent_args.attach(*represent);
  std::string represent_in;
  std::string represent_out;
  represent->add_option("-i,--input", represent_in, "dataset file")->required()->check(CLI::ExistingFile);
  represent->add_option("-o,--output", represent_out, "feature table file")->required();

  // cv
  auto* cv = app.add_subcommand("cv", "repeated stratified cross-validation");
  PipelineArgs cv_args;
  cv_args.attach(*cv);
  CVConfig cv_config;
  std::string cv_in;
  std::string cv_out;
  cv->add_option("--folds", cv_config.folds)->capture_default_str();
  cv->add_option("--repeats", cv_config.repeats)->capture_default_str();
  cv->add_option("--seed", cv_config.seed)->capture_default_str();
  cv->add_option("-i,--input", cv_in, "dataset file")->required()->check(CLI::ExistingFile);
  cv->add_option("-o,--output", cv_out, "report file");

  // curve
  auto* curve = app.add_subcommand("curve", "learning curve over training-set sizes");
  PipelineArgs curve_args;
  curve_args.attach(*curve);
  CurveConfig curve_config;
  std::string sizes_text = "5,10,20,40";
  std::string curve_in;
  std::string curve_out;
  curve->add_option("--sizes", sizes_text, "bags per class, comma separated")->capture_default_str();
  curve->add_option("--iterations", curve_config.iterations)->capture_default_str();
  curve->add_option("--test-fraction", curve_config.test_fraction)->capture_default_str();
  curve->add_option("--seed", curve_config.seed)->capture_default_str();
  curve->add_option("-i,--input", curve_in, "dataset file")->required()->check(CLI::ExistingFile);
  curve->add_option("-o,--output", curve_out, "report file");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "NEF, NER and NMF of a square dissimilarity matrix");
  std::string analyze_in;
  std::string analyze_out;
  bool square_first = false;
  NmfOptions nmf_options;
  analyze->add_option("-i,--input", analyze_in, "matrix file")->required()->check(CLI::ExistingFile);
  analyze->add_option("-o,--output", analyze_out, "report file");
  analyze->add_flag("--square-first", square_first, "square entries before double centering");
  analyze->add_option("--seed", nmf_options.seed, "seed for sampled triangle checks")->capture_default_str();
  analyze->add_option("--exact-limit", nmf_options.exact_limit, "largest matrix checked exhaustively")
      ->capture_default_str();
  analyze->add_option("--samples", nmf_options.samples, "sampled triples above the limit")
      ->capture_default_str();

  std::vector<std::string> argv_storage{"mind"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    const CLI::App* target = &app;
    for (const CLI::App* sub : app.get_subcommands()) target = sub;
    err << target->help();
    return 2;
  }

  try {
    if (gen->parsed()) {
      const MilDataset data = generate(*parse_problem(problem), gen_config);
      write_mil_table(gen_out, data);
      out << "wrote " << data.size() << " bags to " << gen_out << '\n';
    } else if (summary->parsed()) {
      print_summary(out, dataset_summary(parse_mil_table(summary_in)));
    } else if (dissim->parsed()) {
      const MilDataset data = parse_mil_table(dissim_in);
      MatrixOptions opts;
      opts.symmetrization = dissim_args.mode();
      opts.threads = dissim_args.threads;
      const DissimMatrix m = compute_matrix(data, all_prototypes(data), dissim_args.spec(), opts);
      write_matrix(dissim_out, m);
      out << "wrote " << m.rows() << "x" << m.cols() << " matrix to " << dissim_out << '\n';
    } else if (represent->parsed()) {
      const MilDataset data = parse_mil_table(represent_in);
      require_valid(data);
      const PipelineSpec spec = represent_args.spec(0);
      FeatureTable table;
      switch (spec.baseline) {
        case Baseline::none: {
          const PrototypeSet protos = all_prototypes(data);
          const bool directed_views = spec.representation != RepresentationMode::to;
          MatrixOptions opts;
          opts.threads = spec.threads;
          opts.symmetrization = directed_views ? SymmetrizationMode::none : spec.symmetrization;
          const DissimMatrix to = compute_matrix(data, protos, spec.measure, opts);
          std::optional<DissimMatrix> from;
          if (directed_views) {
            opts.direction = Direction::from;
            from = compute_matrix(data, protos, spec.measure, opts);
          }
          table = build_representation(to, from, spec.representation, labels_of(data));
          break;
        }
        case Baseline::minimax:
          table = minimax_rep(data);
          break;
        case Baseline::miles: {
          std::vector<std::string> names;
          const std::vector<Instance> reference = collect_instances(data, &names);
          table = miles_rep(data, reference, spec.miles, names);
          break;
        }
      }
      std::ofstream file(represent_out);
      if (!file) throw Error("cannot write " + represent_out);
      write_feature_table(file, table);
      out << "wrote " << table.rows() << "x" << table.cols() << " features to " << represent_out << '\n';
    } else if (cv->parsed()) {
      const MilDataset data = parse_mil_table(cv_in);
      cv_config.pipeline = cv_args.spec(cv_config.seed);
      const EvalReport report = cross_validate(data, cv_config);
      if (!cv_out.empty()) {
        const nlohmann::json config{{"input", cv_in},
                                    {"folds", cv_config.folds},
                                    {"repeats", cv_config.repeats},
                                    {"seed", cv_config.seed},
                                    {"pipeline", to_json(cv_config.pipeline)}};
        write_json(cv_out, make_document("cv", config, to_json(report)));
      }
      out << "mean_auc=" << format_double(report.mean_auc) << " std_error=" << format_double(report.std_error)
          << '\n';
    } else if (curve->parsed()) {
      const MilDataset data = parse_mil_table(curve_in);
      curve_config.sizes = parse_sizes(sizes_text);
      curve_config.pipeline = curve_args.spec(curve_config.seed);
      const std::vector<EvalReport> reports = learning_curve(data, curve_config);
      nlohmann::json body = nlohmann::json::array();
      for (const EvalReport& r : reports) body.push_back(to_json(r));
      if (!curve_out.empty()) {
        const nlohmann::json config{{"input", curve_in},
                                    {"sizes", curve_config.sizes},
                                    {"iterations", curve_config.iterations},
                                    {"test_fraction", curve_config.test_fraction},
                                    {"seed", curve_config.seed},
                                    {"pipeline", to_json(curve_config.pipeline)}};
        write_json(curve_out, make_document("curve", config, body));
      }
      for (const EvalReport& r : reports) {
        out << "size=" << *r.requested_per_class << " used_positive=" << *r.used_positive
            << " used_negative=" << *r.used_negative << " mean_auc=" << format_double(r.mean_auc)
            << " std_error=" << format_double(r.std_error) << '\n';
      }
    } else if (analyze->parsed()) {
      const DissimMatrix m = read_matrix(analyze_in);
      if (m.rows() != m.cols()) throw Error("analyze needs a square matrix");
      SpectrumReport spectrum = nef_ner(symmetric_part(m), square_first);
      spectrum.source = analyze_in;
      MetricityReport metricity = nmf(m, nmf_options);
      metricity.source = analyze_in;
      if (!analyze_out.empty()) {
        const nlohmann::json config{{"input", analyze_in},
                                    {"measure", m.measure},
                                    {"square_first", square_first},
                                    {"seed", nmf_options.seed},
                                    {"exact_limit", nmf_options.exact_limit},
                                    {"samples", nmf_options.samples}};
        const nlohmann::json body{{"spectrum", to_json(spectrum)}, {"metricity", to_json(metricity)}};
        write_json(analyze_out, make_document("analyze", config, body));
      }
      out << "nef=" << format_double(spectrum.nef) << " ner=" << format_double(spectrum.ner)
          << " nmf=" << format_double(metricity.nmf) << '\n';
    }
  } catch (const std::exception& e) {
    std::string message = e.what();
    for (char& c : message) {
      if (c == '\n') c = ' ';
    }
    err << "error: " << message << '\n';
    return 1;
  }
  return 0;
}

int run_command(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_command(args, std::cout, std::cerr);
}

}  // namespace mind
