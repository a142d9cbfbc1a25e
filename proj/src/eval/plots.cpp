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

#include "svsr/eval/plots.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "svsr/common/error.hpp"

namespace svsr::eval {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  out.push_back(cell);
  return out;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

constexpr const char* kPalette[] = {"#4472c4", "#ed7d31", "#70ad47", "#7f7f7f", "#ffc000", "#5b9bd5"};

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw FormatError(fmt::format("CSV has no column '{}'", name));
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable CsvTable::read(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifactError(fmt::format("{} not found", path.string()));
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw FormatError(fmt::format("{} is empty", path.string()));
  t.header = split_csv_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = split_csv_line(line);
    if (row.size() != t.header.size())
      throw FormatError(fmt::format("{}: row has {} cells, header has {}", path.string(), row.size(), t.header.size()));
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_mismatch_csv(const std::vector<MismatchCell>& cells, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  out << "model,test,wer,errors,ref_words,utterances\n";
  for (const auto& c : cells)
    out << fmt::format("{},{},{},{},{},{}\n", c.model, c.test, c.wer, c.errors, c.ref_words, c.utterances);
}

std::vector<MismatchCell> read_mismatch_csv(const fs::path& path) {
  const auto t = CsvTable::read(path);
  const auto cm = t.column("model"), ct = t.column("test"), cw = t.column("wer"), ce = t.column("errors"),
             cr = t.column("ref_words"), cu = t.column("utterances");
  std::vector<MismatchCell> out;
  for (const auto& r : t.rows)
    out.push_back({r[cm], r[ct], std::stod(r[cw]), std::stoll(r[ce]), std::stoll(r[cr]), std::stoll(r[cu])});
  return out;
}

std::string mismatch_svg(const std::vector<MismatchCell>& cells) {
  std::vector<std::string> groups, models;
  for (const auto& c : cells) {
    if (std::find(groups.begin(), groups.end(), c.test) == groups.end()) groups.push_back(c.test);
    if (std::find(models.begin(), models.end(), c.model) == models.end()) models.push_back(c.model);
  }
  double top = 0.0;
  for (const auto& c : cells)
    if (std::isfinite(c.wer)) top = std::max(top, c.wer);
  top = top > 0.0 ? top * 1.1 : 1.0;

  const double width = 480, height = 320, left = 60, bottom = 40, right = 20, upper = 40;
  const double plot_w = width - left - right, plot_h = height - bottom - upper;
  const double group_w = plot_w / static_cast<double>(std::max<std::size_t>(groups.size(), 1));
  const double bar_w = group_w * 0.7 / static_cast<double>(std::max<std::size_t>(models.size(), 1));

  std::ostringstream s;
  s << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">)", width,
                   height, width, height)
    << "\n";
  s << fmt::format(R"(<text x="{}" y="20" text-anchor="middle" font-family="sans-serif" font-size="14">WER by model and test set</text>)",
                   width / 2)
    << "\n";
  s << fmt::format(R"(<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="black"/>)", left, upper, upper + plot_h) << "\n";
  s << fmt::format(R"(<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="black"/>)", left, upper + plot_h, left + plot_w)
    << "\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = top * k / 4.0;
    const double y = upper + plot_h - plot_h * k / 4.0;
    s << fmt::format(R"(<text x="{}" y="{}" text-anchor="end" font-family="sans-serif" font-size="10">{:.2f}</text>)",
                     left - 4, y + 3, v)
      << "\n";
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double gx = left + group_w * static_cast<double>(g) + group_w * 0.15;
    s << fmt::format(R"(<g class="group" data-test="{}">)", xml_escape(groups[g])) << "\n";
    for (std::size_t m = 0; m < models.size(); ++m) {
      const auto it = std::find_if(cells.begin(), cells.end(),
                                   [&](const MismatchCell& c) { return c.test == groups[g] && c.model == models[m]; });
      if (it == cells.end()) continue;
      const double v = std::isfinite(it->wer) ? it->wer : top;
      const double h = plot_h * v / top;
      s << fmt::format(
               R"(<rect class="bar" x="{:.2f}" y="{:.2f}" width="{:.2f}" height="{:.2f}" fill="{}" data-model="{}" data-test="{}" data-value="{}"/>)",
               gx + bar_w * static_cast<double>(m), upper + plot_h - h, bar_w, h, kPalette[m % 6],
               xml_escape(it->model), xml_escape(it->test), it->wer)
        << "\n";
    }
    s << fmt::format(R"(<text x="{:.2f}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">{} test</text>)",
                     left + group_w * (static_cast<double>(g) + 0.5), upper + plot_h + 18, xml_escape(groups[g]))
      << "\n</g>\n";
  }
  for (std::size_t m = 0; m < models.size(); ++m) {
    const double y = upper + 14.0 * static_cast<double>(m);
    s << fmt::format(R"(<rect x="{}" y="{}" width="10" height="10" fill="{}"/>)", left + plot_w - 110, y, kPalette[m % 6])
      << fmt::format(R"(<text x="{}" y="{}" font-family="sans-serif" font-size="11">{}</text>)", left + plot_w - 95,
                     y + 9, xml_escape(models[m]))
      << "\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string line_plot_svg(const std::string& title, const std::vector<double>& x, const std::vector<Series>& series) {
  const double width = 560, height = 320, left = 60, bottom = 40, right = 120, upper = 40;
  const double plot_w = width - left - right, plot_h = height - bottom - upper;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!x.empty()) {
    x0 = *std::min_element(x.begin(), x.end());
    x1 = *std::max_element(x.begin(), x.end());
  }
  bool first = true;
  for (const auto& s : series)
    for (double v : s.y) {
      if (!std::isfinite(v)) continue;
      y0 = first ? v : std::min(y0, v);
      y1 = first ? v : std::max(y1, v);
      first = false;
    }
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  auto px = [&](double v) { return left + plot_w * (v - x0) / (x1 - x0); };
  auto py = [&](double v) { return upper + plot_h - plot_h * (v - y0) / (y1 - y0); };

  std::ostringstream s;
  s << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">)", width,
                   height, width, height)
    << "\n";
  s << fmt::format(R"(<text x="{}" y="20" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>)",
                   left + plot_w / 2, xml_escape(title))
    << "\n";
  s << fmt::format(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>)", left, upper, plot_w,
                   plot_h)
    << "\n";
  s << fmt::format(R"(<text x="{}" y="{}" font-family="sans-serif" font-size="10">{:.4g}</text>)", 4, upper + 4, y1)
    << fmt::format(R"(<text x="{}" y="{}" font-family="sans-serif" font-size="10">{:.4g}</text>)", 4, upper + plot_h, y0)
    << fmt::format(R"(<text x="{}" y="{}" font-family="sans-serif" font-size="10">{:.6g}</text>)", left, upper + plot_h + 14, x0)
    << fmt::format(R"(<text x="{}" y="{}" text-anchor="end" font-family="sans-serif" font-size="10">{:.6g}</text>)",
                   left + plot_w, upper + plot_h + 14, x1)
    << "\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    std::string pts;
    for (std::size_t i = 0; i < std::min(x.size(), series[k].y.size()); ++i)
      if (std::isfinite(series[k].y[i])) pts += fmt::format("{:.2f},{:.2f} ", px(x[i]), py(series[k].y[i]));
    s << fmt::format(R"(<polyline fill="none" stroke="{}" stroke-width="1.2" points="{}" data-series="{}"/>)",
                     kPalette[k % 6], pts, xml_escape(series[k].name))
      << "\n";
    s << fmt::format(R"(<text x="{}" y="{}" font-family="sans-serif" font-size="11" fill="{}">{}</text>)",
                     left + plot_w + 8, upper + 14.0 * static_cast<double>(k) + 10, kPalette[k % 6],
                     xml_escape(series[k].name))
      << "\n";
  }
  s << "</svg>\n";
  return s.str();
}

PlotFiles emit_plots(const MismatchReport& report, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  PlotFiles files;
  files.csv = out_dir / "mismatch.csv";
  write_mismatch_csv(report.cells, files.csv);
  const auto cells = read_mismatch_csv(files.csv);
  if (!cells.empty()) {
    files.svg = out_dir / "mismatch.svg";
    std::ofstream(*files.svg) << mismatch_svg(cells);
  }
  return files;
}

void emit_loss_plot(const fs::path& csv, const std::string& x_column, const std::vector<std::string>& y_columns,
                    const fs::path& svg) {
  const auto t = CsvTable::read(csv);
  const auto cx = t.column(x_column);
  std::vector<double> x;
  for (const auto& r : t.rows) x.push_back(std::stod(r[cx]));
  std::vector<Series> series;
  for (const auto& name : y_columns) {
    const auto c = t.column(name);
    Series s{name, {}};
    for (const auto& r : t.rows) s.y.push_back(std::stod(r[c]));
    series.push_back(std::move(s));
  }
  std::ofstream(svg) << line_plot_svg(csv.stem().string(), x, series);
}

}  // namespace svsr::eval
