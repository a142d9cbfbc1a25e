// Copyright 2026  The svsr Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "svsr/eval/mismatch.hpp"

namespace svsr::eval {

/// Minimal CSV table: header plus string cells (no quoting support beyond
/// what write_* in this library emits for numeric tables).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  // throws FormatError if absent
  static CsvTable read(const std::filesystem::path& path);
};

void write_mismatch_csv(const std::vector<MismatchCell>& cells, const std::filesystem::path& path);
std::vector<MismatchCell> read_mismatch_csv(const std::filesystem::path& path);

/// Grouped bar chart: one group per test set, one bar per model. Each bar
/// carries its value in a data-value attribute.
std::string mismatch_svg(const std::vector<MismatchCell>& cells);

struct Series {
  std::string name;
  std::vector<double> y;
};
std::string line_plot_svg(const std::string& title, const std::vector<double>& x, const std::vector<Series>& series);

struct PlotFiles {
  std::filesystem::path csv;
  std::optional<std::filesystem::path> svg;
};

/// mismatch.csv is written first; mismatch.svg is rendered from the re-read
/// CSV and omitted for an empty report.
PlotFiles emit_plots(const MismatchReport& report, const std::filesystem::path& out_dir);

/// Line plot of columns `y_columns` against `x_column` of a training CSV.
void emit_loss_plot(const std::filesystem::path& csv, const std::string& x_column,
                    const std::vector<std::string>& y_columns, const std::filesystem::path& svg);

}  // namespace svsr::eval
