/*
 * Copyright 2026 The PACL Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "render.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "pacl/error.h"

namespace pacl::cli {
namespace {

bool LooksNumeric(const std::string& s) {
  if (s.empty()) return false;
  try {
    ParseDouble(s);
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::optional<double> MaybeNumber(const std::string& s) {
  if (!LooksNumeric(s)) return std::nullopt;
  const double v = ParseDouble(s);
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

std::string Fixed(double v, int digits = 4) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

size_t ColumnIndex(const TsvTable& table, const std::string& name) {
  auto it = std::find(table.header.begin(), table.header.end(), name);
  if (it == table.header.end()) {
    throw Error(ErrorCode::kParseError, "table has no column '" + name + "'");
  }
  return static_cast<size_t>(it - table.header.begin());
}

std::string XmlEscape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string RenderTable(const std::vector<std::string>& header,
                        const std::vector<std::vector<std::string>>& rows) {
  std::vector<size_t> width(header.size(), 0);
  for (size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size() && c < width.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::ostringstream os;
  auto emit = [&](const std::vector<std::string>& row, bool is_header) {
    for (size_t c = 0; c < width.size(); ++c) {
      const std::string cell = c < row.size() ? row[c] : "";
      const std::string pad(width[c] - std::min(width[c], cell.size()), ' ');
      if (c > 0) os << "  ";
      if (!is_header && LooksNumeric(cell)) {
        os << pad << cell;
      } else {
        os << cell << (c + 1 < width.size() ? pad : "");
      }
    }
    os << "\n";
  };
  emit(header, true);
  size_t total = 0;
  for (size_t c = 0; c < width.size(); ++c) total += width[c] + (c > 0 ? 2 : 0);
  os << std::string(total, '-') << "\n";
  for (const auto& row : rows) emit(row, false);
  return os.str();
}

std::string RenderMetricReport(const MetricReport& report) {
  std::ostringstream os;
  os << "task: " << TaskKindName(report.kind) << "\n\n";
  std::vector<std::vector<std::string>> rows;
  for (const auto& [name, value] : report.values) rows.push_back({name, Fixed(value)});
  os << RenderTable({"metric", "value"}, rows);
  if (!report.table_columns.empty()) {
    std::vector<std::vector<std::string>> detail;
    for (const auto& r : report.table_rows) {
      std::vector<std::string> cells;
      for (size_t c = 0; c < r.size(); ++c) {
        const bool integral = std::isfinite(r[c]) && r[c] == std::floor(r[c]) &&
                              std::fabs(r[c]) < 1e15;
        cells.push_back(integral ? std::to_string(static_cast<long long>(r[c]))
                                 : Fixed(r[c]));
      }
      detail.push_back(std::move(cells));
    }
    os << "\n" << RenderTable(report.table_columns, detail);
  }
  return os.str();
}

std::string RenderTsvTable(const TsvTable& table) {
  std::ostringstream os;
  for (const auto& [k, v] : table.meta) os << k << ": " << v << "\n";
  if (!table.meta.empty()) os << "\n";
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : table.rows) {
    std::vector<std::string> cells;
    for (const std::string& cell : row) {
      auto v = MaybeNumber(cell);
      const bool integral = v && *v == std::floor(*v) && cell.find('.') == std::string::npos;
      cells.push_back(v && !integral ? Fixed(*v) : cell);
    }
    rows.push_back(std::move(cells));
  }
  os << RenderTable(table.header, rows);
  return os.str();
}

std::string RenderTrainLog(const std::string& jsonl) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(jsonl);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError,
                  "log line " + std::to_string(line_no) + ": " + e.what());
    }
    auto num = [&](const char* key) -> std::string {
      if (!j.contains(key) || j[key].is_null()) return "-";
      return Fixed(j[key].get<double>());
    };
    rows.push_back({std::to_string(j.value("epoch", 0)), j.value("phase", "?"), num("l1"),
                    num("l2"), num("l3"), num("l4"), num("total"), num("lr")});
  }
  return RenderTable({"epoch", "phase", "l1", "l2", "l3", "l4", "total", "lr"}, rows);
}

std::string SweepSvg(const TsvTable& table, const std::string& x_column,
                     const std::string& y_column) {
  const size_t xi = ColumnIndex(table, x_column);
  const size_t yi = ColumnIndex(table, y_column);
  const size_t n = table.rows.size();
  std::vector<std::optional<double>> ys;
  double lo = 1e300, hi = -1e300;
  for (const auto& row : table.rows) {
    ys.push_back(MaybeNumber(row[yi]));
    if (ys.back()) {
      lo = std::min(lo, *ys.back());
      hi = std::max(hi, *ys.back());
    }
  }
  if (lo > hi) lo = 0.0, hi = 1.0;
  if (hi - lo < 1e-12) lo -= 0.05, hi += 0.05;
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;

  const double W = 640, H = 400, left = 70, right = 20, top = 30, bottom = 60;
  const double pw = W - left - right, ph = H - top - bottom;
  auto X = [&](size_t i) {
    return n <= 1 ? left + pw / 2 : left + pw * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  auto Y = [&](double v) { return top + ph * (1.0 - (v - lo) / (hi - lo)); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"18\" text-anchor=\"middle\">"
     << XmlEscape(y_column + " vs " + table.MetaOr("axis", x_column)) << "</text>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw
     << "\" y2=\"" << top + ph << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
     << top + ph << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = lo + (hi - lo) * t / 4.0;
    os << "<text x=\"" << left - 6 << "\" y=\"" << Y(v) + 4 << "\" text-anchor=\"end\">"
       << Fixed(v, 3) << "</text>\n";
  }
  for (size_t i = 0; i < n; ++i) {
    os << "<text x=\"" << X(i) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
       << XmlEscape(table.rows[i][xi]) << "</text>\n";
  }
  std::string segment;
  auto flush = [&]() {
    if (!segment.empty()) {
      os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\""
         << segment << "\"/>\n";
    }
    segment.clear();
  };
  for (size_t i = 0; i < n; ++i) {
    if (!ys[i]) {
      flush();
      continue;
    }
    segment += (segment.empty() ? "" : " ") + Fixed(X(i), 1) + "," + Fixed(Y(*ys[i]), 1);
  }
  flush();
  for (size_t i = 0; i < n; ++i) {
    if (ys[i]) {
      os << "<circle cx=\"" << Fixed(X(i), 1) << "\" cy=\"" << Fixed(Y(*ys[i]), 1)
         << "\" r=\"3\" fill=\"steelblue\"/>\n";
    } else {
      os << "<text x=\"" << X(i) << "\" y=\"" << top + ph - 6
         << "\" text-anchor=\"middle\" fill=\"firebrick\">failed</text>\n";
    }
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">"
     << XmlEscape(x_column) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace pacl::cli
