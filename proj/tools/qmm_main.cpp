// Copyright 2026 the qmm-calibrate authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: fit, predict, and evaluate over CSV data and
// JSON configs. All diagnostics go to stderr; data goes to files or
// stdout. Exit codes: 0 ok, 2 config error, 3 data error, 4 solver or
// domain error, 1 internal error.

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmm/dataset.hpp"
#include "qmm/pipeline.hpp"
#include "qmm/serialization.hpp"

namespace {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

LogLevel log_level_from_env() {
  const char* raw = std::getenv("QMM_LOG");
  if (raw == nullptr) return LogLevel::Warn;
  const std::string value(raw);
  if (value == "error") return LogLevel::Error;
  if (value == "warn") return LogLevel::Warn;
  if (value == "info") return LogLevel::Info;
  if (value == "debug") return LogLevel::Debug;
  std::cerr << "qmm: ignoring unknown QMM_LOG value '" << value << "'\n";
  return LogLevel::Warn;
}

LogLevel g_log_level = LogLevel::Warn;

void log_at(LogLevel level, const std::string& message) {
  static const char* names[] = {"error", "warn", "info", "debug"};
  if (level <= g_log_level)
    std::cerr << "qmm " << names[static_cast<int>(level)] << ": " << message << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qmm::DataError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qmm::DataError("cannot open file for writing: " + path);
  out << content;
  if (!out) throw qmm::DataError("failed writing file: " + path);
}

std::string shortest_decimal(double value) {
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

nlohmann::json parse_json_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qmm::DataError(std::string("cannot open ") + what + ": " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw qmm::ConfigError(std::string(what) + " is not valid JSON: " + e.what());
  }
}

qmm::MeasurementSeries load_series(const std::string& path) {
  const std::string text = read_file(path);
  std::vector<qmm::Finding> findings;
  qmm::MeasurementSeries series = qmm::parse_measurement_csv(text, &findings);
  for (const qmm::Finding& finding : findings) log_at(LogLevel::Warn, finding.message);
  series.label = std::filesystem::path(path).stem().string();
  return series;
}

bool is_percentage_family(qmm::ModelFamily family) {
  return family != qmm::ModelFamily::PowerLaw && family != qmm::ModelFamily::LogLinear;
}

// Percentage grids are logarithmic (points_per_decade per decade); rain-rate
// grids are linear (points_per_decade is the total point count).
std::vector<double> make_grid(qmm::ModelFamily family, double min, double max, int points) {
  std::vector<double> grid;
  if (is_percentage_family(family)) {
    const double decades = std::log10(max / min);
    const int steps = std::max(1, static_cast<int>(std::ceil(decades * points)));
    for (int i = 0; i <= steps; ++i)
      grid.push_back(min * std::pow(10.0, decades * i / steps));
    grid.back() = max;
  } else {
    for (int i = 0; i < points; ++i)
      grid.push_back(min + (max - min) * i / (points - 1));
  }
  return grid;
}

std::string render_curve_csv(const qmm::CalibratedModel& model,
                             const qmm::MeasurementSeries& series,
                             const std::vector<double>& grid) {
  // Grid rows carry the two model curves; measurement rows also carry the
  // measured value, so one file reproduces a measurements-vs-models plot.
  struct Row {
    double x;
    std::optional<double> measurement;
  };
  std::vector<Row> rows;
  for (double x : grid) rows.push_back({x, std::nullopt});
  for (qmm::Index i = 0; i < series.abscissa.size(); ++i)
    rows.push_back({series.abscissa(i), series.ordinate(i)});
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.x < b.x; });
  // Collapse a grid point that lands exactly on a measurement abscissa.
  std::vector<Row> merged;
  for (const Row& row : rows) {
    if (!merged.empty() && merged.back().x == row.x) {
      if (row.measurement) merged.back().measurement = row.measurement;
    } else {
      merged.push_back(row);
    }
  }

  const qmm::CalibratedModel base{
      model.spec, qmm::VectorXd::Ones(qmm::basis_count(model.spec.family())),
      model.normalization};
  std::ostringstream os;
  os << "abscissa,base_prediction,qmm_prediction,measurement\n";
  for (const Row& row : merged) {
    os << shortest_decimal(row.x) << ',' << shortest_decimal(qmm::predict(base, row.x)) << ','
       << shortest_decimal(qmm::predict(model, row.x)) << ',';
    if (row.measurement) os << shortest_decimal(*row.measurement);
    os << '\n';
  }
  return os.str();
}

int run_fit(const std::string& config_path) {
  const nlohmann::json config_json = parse_json_file(config_path, "config");
  const qmm::RunConfig config = qmm::run_config_from_json(config_json);

  // Relative data/output paths resolve against the config file's directory.
  const std::filesystem::path base_dir = std::filesystem::path(config_path).parent_path();
  const auto resolve = [&base_dir](const std::string& path) {
    const std::filesystem::path p(path);
    return p.is_absolute() ? p.string() : (base_dir / p).string();
  };

  const qmm::MeasurementSeries series = load_series(resolve(config.data_path));
  log_at(LogLevel::Info, "fitting " + qmm::family_name(config.spec.family()) + " to " +
                             std::to_string(series.abscissa.size()) + " points from " +
                             config.data_path);

  qmm::FitRequest request{config.spec, series, {}, config.normalize};
  const qmm::FitOutcome outcome = qmm::fit(request);

  if (outcome.model.normalization) {
    const qmm::NormalizationDescriptor& desc = *outcome.model.normalization;
    log_at(LogLevel::Info, "normalization scale " + shortest_decimal(desc.scale) +
                               ", equivalent anchor " +
                               shortest_decimal(desc.a001_equivalent) + " dB");
    if (desc.normalized_range[1] > 1.0 + 1e-12)
      log_at(LogLevel::Warn, "normalized percentages extend above 1%");
    if (desc.scale < 1.0)
      log_at(LogLevel::Warn,
             "smallest percentage is above 0.01%; scaling down (scale < 1) is unusual");
  }
  log_at(LogLevel::Debug, "rank " + std::to_string(outcome.report.diagnostics.rank) +
                              ", residual " +
                              shortest_decimal(outcome.report.diagnostics.residual_norm));

  write_file(resolve(config.output_report), qmm::to_json(outcome.report).dump(2) + "\n");
  log_at(LogLevel::Info, "report written to " + config.output_report);

  if (config.output_curve) {
    const auto& grid_config = *config.curve_grid;
    const std::vector<double> grid = make_grid(config.spec.family(), grid_config.min,
                                               grid_config.max, grid_config.points_per_decade);
    write_file(resolve(*config.output_curve),
               render_curve_csv(outcome.model, series, grid));
    log_at(LogLevel::Info, "curve written to " + *config.output_curve);
  }
  return 0;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const std::string cell = text.substr(start, comma - start);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || cell.empty())
      throw qmm::ConfigError("not a number: '" + cell + "'");
    values.push_back(value);
    start = comma + 1;
    if (comma == text.size()) break;
  }
  if (values.empty()) throw qmm::ConfigError("empty value list");
  return values;
}

int run_predict(const std::string& model_path, const std::string& at_list,
                const std::string& grid_spec) {
  const qmm::CalibratedModel model =
      qmm::calibrated_model_from_json(parse_json_file(model_path, "model"));

  std::vector<double> points;
  if (!at_list.empty()) {
    points = parse_double_list(at_list);
  } else {
    const std::vector<double> parts = parse_double_list(grid_spec);
    if (parts.size() != 3 || parts[2] < 2)
      throw qmm::ConfigError("--grid expects min,max,count with count >= 2");
    if (!(parts[0] > 0.0) || !(parts[1] > parts[0]))
      throw qmm::ConfigError("--grid expects 0 < min < max");
    const int count = static_cast<int>(parts[2]);
    if (is_percentage_family(model.spec.family())) {
      for (int i = 0; i < count; ++i)
        points.push_back(parts[0] *
                         std::pow(parts[1] / parts[0], static_cast<double>(i) / (count - 1)));
    } else {
      for (int i = 0; i < count; ++i)
        points.push_back(parts[0] + (parts[1] - parts[0]) * i / (count - 1));
    }
  }

  std::ostringstream os;
  os << "abscissa,prediction\n";
  for (double x : points)
    os << shortest_decimal(x) << ',' << shortest_decimal(qmm::predict(model, x)) << '\n';
  std::cout << os.str();
  return 0;
}

int run_evaluate(const std::string& model_path, const std::string& data_path) {
  const qmm::CalibratedModel model =
      qmm::calibrated_model_from_json(parse_json_file(model_path, "model"));
  const qmm::MeasurementSeries series = load_series(data_path);
  const qmm::DbErrorSummary summary = qmm::evaluate_on_series(model, series);
  std::cout << "rmse_base_db,rmse_qmm_db,improvement_percent\n"
            << shortest_decimal(summary.rmse_base_db) << ','
            << shortest_decimal(summary.rmse_qmm_db) << ','
            << shortest_decimal(summary.improvement_percent) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  g_log_level = log_level_from_env();

  CLI::App app{"Quasi-moment-method calibration of rain-attenuation models"};
  app.require_subcommand(1);

  std::string config_path;
  CLI::App* fit_cmd = app.add_subcommand("fit", "calibrate a model against a CSV series");
  fit_cmd->add_option("--config", config_path, "JSON run configuration")->required();

  std::string model_path;
  std::string at_list;
  std::string grid_spec;
  CLI::App* predict_cmd =
      app.add_subcommand("predict", "print predictions of a saved model as CSV");
  predict_cmd->add_option("--model", model_path, "saved model or report JSON")->required();
  CLI::Option* at_option =
      predict_cmd->add_option("--at", at_list, "comma-separated abscissa values");
  predict_cmd->add_option("--grid", grid_spec, "min,max,count grid")->excludes(at_option);

  std::string eval_model_path;
  std::string eval_data_path;
  CLI::App* evaluate_cmd =
      app.add_subcommand("evaluate", "RMSE of a saved model against a CSV series");
  evaluate_cmd->add_option("--model", eval_model_path, "saved model or report JSON")->required();
  evaluate_cmd->add_option("--data", eval_data_path, "measurement CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help family
    std::ostringstream os;
    app.exit(e, os, os);
    std::cerr << os.str();
    return 2;
  }

  try {
    if (fit_cmd->parsed()) return run_fit(config_path);
    if (predict_cmd->parsed()) {
      if (at_list.empty() && grid_spec.empty())
        throw qmm::ConfigError("predict needs --at or --grid");
      return run_predict(model_path, at_list, grid_spec);
    }
    if (evaluate_cmd->parsed()) return run_evaluate(eval_model_path, eval_data_path);
  } catch (const qmm::ConfigError& e) {
    log_at(LogLevel::Error, e.what());
    return 2;
  } catch (const qmm::DataError& e) {
    log_at(LogLevel::Error, e.what());
    return 3;
  } catch (const qmm::DomainError& e) {
    log_at(LogLevel::Error, e.what());
    return 4;
  } catch (const qmm::SolveError& e) {
    log_at(LogLevel::Error, e.what());
    return 4;
  } catch (const std::exception& e) {
    log_at(LogLevel::Error, std::string("internal error: ") + e.what());
    return 1;
  }
  return 1;
}
