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

#ifndef PACL_TOOLS_RENDER_H_
#define PACL_TOOLS_RENDER_H_

#include <string>
#include <vector>

#include "pacl/metrics.h"
#include "pacl/tsv.h"

namespace pacl::cli {

// Columns padded to their widest cell; numeric-looking cells right-aligned.
std::string RenderTable(const std::vector<std::string>& header,
                        const std::vector<std::vector<std::string>>& rows);

std::string RenderMetricReport(const MetricReport& report);
std::string RenderTsvTable(const TsvTable& table);
// One row per JSONL training-log record.
std::string RenderTrainLog(const std::string& jsonl);

// Line chart of `y_column` against the row order of a sweep table, x ticks
// labeled by `x_column`. Rows whose y cell is not a number break the line.
std::string SweepSvg(const TsvTable& table, const std::string& x_column,
                     const std::string& y_column);

}  // namespace pacl::cli

#endif  // PACL_TOOLS_RENDER_H_
