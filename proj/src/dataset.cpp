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

#include "qmm/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <utility>

namespace qmm {
namespace {

constexpr const char* kPercentHeader = "exceedance_percent";
constexpr const char* kAttenuationHeader = "attenuation_db";
constexpr const char* kRainRateHeader = "rain_rate_mm_per_h";
constexpr const char* kSpecificAttenuationHeader = "specific_attenuation_db_per_km";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

// Strict full-cell numeric parse; plain decimal and scientific notation
// only (comma decimal separators never reach here: the comma is the CSV
// field separator).
double parse_cell(std::string_view cell, std::size_t row, std::string_view column) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || cell.empty()) {
    std::ostringstream os;
    os << "row " << row << ": non-numeric value '" << std::string(cell) << "' in column "
       << column;
    throw DataError(os.str());
  }
  return value;
}

void append_warning(std::vector<Finding>* findings, std::string message) {
  if (findings != nullptr)
    findings->push_back({Finding::Severity::Warning, std::move(message)});
}

}  // namespace

MeasurementSeries parse_measurement_csv(std::string_view text, std::vector<Finding>* findings) {
  // UTF-8 BOM tolerated.
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    const std::string_view line =
        (nl == std::string_view::npos) ? text.substr(start) : text.substr(start, nl - start);
    if (!trim(line).empty()) lines.push_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  if (lines.empty()) throw DataError("empty CSV: missing header row");

  const std::vector<std::string_view> header = split_fields(lines.front());
  int abscissa_column = -1;
  int ordinate_column = -1;
  bool percent_kind = false;
  bool rain_kind = false;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string_view name = header[i];
    if (name == kPercentHeader || name == kRainRateHeader) {
      if (abscissa_column >= 0) throw DataError("duplicate abscissa column in header");
      abscissa_column = static_cast<int>(i);
      percent_kind = percent_kind || name == kPercentHeader;
      rain_kind = rain_kind || name == kRainRateHeader;
    } else if (name == kAttenuationHeader || name == kSpecificAttenuationHeader) {
      if (ordinate_column >= 0) throw DataError("duplicate attenuation column in header");
      ordinate_column = static_cast<int>(i);
      percent_kind = percent_kind || name == kAttenuationHeader;
      rain_kind = rain_kind || name == kSpecificAttenuationHeader;
    } else {
      append_warning(findings, "ignoring unrecognized column '" + std::string(name) + "'");
    }
  }
  if (abscissa_column < 0 || ordinate_column < 0 || (percent_kind && rain_kind)) {
    std::ostringstream os;
    os << "unknown header: expected columns {" << kPercentHeader << ", " << kAttenuationHeader
       << "} or {" << kRainRateHeader << ", " << kSpecificAttenuationHeader << "}";
    throw DataError(os.str());
  }
  const SeriesKind kind = percent_kind ? SeriesKind::ExceedancePercent : SeriesKind::RainRate;
  const std::string_view abscissa_name = header[static_cast<std::size_t>(abscissa_column)];
  const std::string_view ordinate_name = header[static_cast<std::size_t>(ordinate_column)];

  std::vector<std::pair<double, double>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string_view> fields = split_fields(lines[i]);
    const std::size_t row_number = i + 1;  // header is row 1
    if (fields.size() != header.size()) {
      std::ostringstream os;
      os << "row " << row_number << ": expected " << header.size() << " fields, got "
         << fields.size();
      throw DataError(os.str());
    }
    const double x =
        parse_cell(fields[static_cast<std::size_t>(abscissa_column)], row_number, abscissa_name);
    const double y =
        parse_cell(fields[static_cast<std::size_t>(ordinate_column)], row_number, ordinate_name);
    if (!std::isfinite(x) || !(x > 0.0)) {
      std::ostringstream os;
      os << "row " << row_number << ": " << abscissa_name << " must be positive";
      throw DataError(os.str());
    }
    if (!std::isfinite(y) || !(y > 0.0)) {
      std::ostringstream os;
      os << "row " << row_number << ": " << ordinate_name << " must be positive";
      throw DataError(os.str());
    }
    rows.emplace_back(x, y);
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  // Collapse exact duplicate abscissas to the largest attenuation (the tie
  // rule the normalization step uses for its anchor).
  std::vector<std::pair<double, double>> collapsed;
  for (const auto& row : rows) {
    if (!collapsed.empty() && collapsed.back().first == row.first) {
      collapsed.back().second = std::max(collapsed.back().second, row.second);
    } else {
      collapsed.push_back(row);
    }
  }
  if (collapsed.size() != rows.size())
    append_warning(findings, "collapsed duplicate abscissas, keeping the largest attenuation");
  if (collapsed.size() < 2) throw DataError("fewer than 2 data rows");

  MeasurementSeries series;
  series.kind = kind;
  series.abscissa.resize(static_cast<Index>(collapsed.size()));
  series.ordinate.resize(static_cast<Index>(collapsed.size()));
  for (std::size_t i = 0; i < collapsed.size(); ++i) {
    series.abscissa(static_cast<Index>(i)) = collapsed[i].first;
    series.ordinate(static_cast<Index>(i)) = collapsed[i].second;
  }
  return series;
}

namespace {

std::string shortest_decimal(double value) {
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

}  // namespace

std::string serialize_measurement_csv(const MeasurementSeries& series) {
  std::ostringstream os;
  if (series.kind == SeriesKind::ExceedancePercent)
    os << kPercentHeader << ',' << kAttenuationHeader << '\n';
  else
    os << kRainRateHeader << ',' << kSpecificAttenuationHeader << '\n';
  for (Index i = 0; i < series.abscissa.size(); ++i)
    os << shortest_decimal(series.abscissa(i)) << ',' << shortest_decimal(series.ordinate(i))
       << '\n';
  return os.str();
}

std::vector<Finding> validate_series(const MeasurementSeries& series) {
  std::vector<Finding> findings;
  const auto error = [&findings](std::string message) {
    findings.push_back({Finding::Severity::Error, std::move(message)});
  };

  if (series.abscissa.size() != series.ordinate.size()) {
    error("abscissa and ordinate lengths differ");
    return findings;
  }
  if (series.abscissa.size() < 2) error("series must contain at least 2 points");

  for (Index i = 0; i < series.abscissa.size(); ++i) {
    if (!std::isfinite(series.abscissa(i)) || !(series.abscissa(i) > 0.0)) {
      error("abscissa values must be finite and positive");
      break;
    }
  }
  for (Index i = 0; i < series.ordinate.size(); ++i) {
    if (!std::isfinite(series.ordinate(i)) || !(series.ordinate(i) > 0.0)) {
      error("attenuation values must be finite and positive");
      break;
    }
  }
  for (Index i = 1; i < series.abscissa.size(); ++i) {
    if (!(series.abscissa(i) > series.abscissa(i - 1))) {
      error("abscissa must be strictly increasing (canonical sort order)");
      break;
    }
  }

  if (series.kind == SeriesKind::ExceedancePercent && findings.empty()) {
    Index inversions = 0;
    for (Index i = 1; i < series.ordinate.size(); ++i)
      if (series.ordinate(i) > series.ordinate(i - 1)) ++inversions;
    if (inversions > 0) {
      std::ostringstream os;
      os << "attenuation is not non-increasing in exceedance percentage (" << inversions
         << " inversion" << (inversions == 1 ? "" : "s") << "); expected for digitized data";
      findings.push_back({Finding::Severity::Warning, os.str()});
    }
  }
  return findings;
}

}  // namespace qmm
