#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mind/bag.hpp"
#include "mind/classifiers.hpp"
#include "mind/dissim_space.hpp"
#include "mind/evaluation.hpp"
#include "mind/matrix_analysis.hpp"

namespace mind {

inline constexpr const char* kToolkitName = "mind";
inline constexpr const char* kToolkitVersion = "0.1.0";

// --- dataset table ---------------------------------------------------------
//
//   bag_id,label,f0,...,f{d-1}
//   b1,+1,0.5,1.25
//   b1,+1,0.75,1
//   b2,?,3,4
//
// One instance per row; label is +1, -1 or ? and constant within a bag.
// Rows of one bag need not be adjacent; bags keep order of first appearance.

MilDataset parse_mil_table(std::istream& in);
MilDataset parse_mil_table(const std::string& path);
void write_mil_table(std::ostream& out, const MilDataset& dataset);
void write_mil_table(const std::string& path, const MilDataset& dataset);

// --- dissimilarity matrix --------------------------------------------------
//
//   measure=meanmin;symmetrize=average,p0,p1
//   p0,0,1.5
//   n0,2.25,0.5
//
// The first header cell carries the measure and symmetrization tags; the
// remaining header cells are prototype ids. Values use 17 significant digits.

void write_matrix(std::ostream& out, const DissimMatrix& matrix);
void write_matrix(const std::string& path, const DissimMatrix& matrix);
DissimMatrix read_matrix(std::istream& in);
DissimMatrix read_matrix(const std::string& path);

/// bag_id,label,<feature names...>
void write_feature_table(std::ostream& out, const FeatureTable& table);

// --- linear model ----------------------------------------------------------
//
//   kind=svm
//   C=1
//   tolerance=0.0001
//   max_iterations=10000
//   seed=0
//   bias=-0.25
//   features=2
//   w.meanmin:p0=0.5
//   w.meanmin:p1=-1.5
//
// One key=value pair per line, weights in feature order.

void write_model(std::ostream& out, const LinearModel& model);
LinearModel read_model(std::istream& in);

// --- reports ---------------------------------------------------------------

nlohmann::json to_json(const PipelineSpec& spec);
PipelineSpec pipeline_from_json(const nlohmann::json& j);

nlohmann::json to_json(const EvalReport& report);
EvalReport eval_report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SpectrumReport& report);
SpectrumReport spectrum_report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const MetricityReport& report);
MetricityReport metricity_report_from_json(const nlohmann::json& j);

/// Wraps a report with toolkit name, version, command and config echo.
nlohmann::json make_document(const std::string& command, const nlohmann::json& config,
                             const nlohmann::json& body);

void write_json(const std::string& path, const nlohmann::json& document);
nlohmann::json read_json(const std::string& path);

/// 17 significant digits; parses back to the identical double.
std::string format_double(double value);

}  // namespace mind
