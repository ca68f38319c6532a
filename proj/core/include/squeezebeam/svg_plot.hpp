#pragma once

#include <string>
#include <vector>

#include "squeezebeam/tables.hpp"

namespace squeezebeam {

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::string x_column;
  std::vector<std::string> y_columns;
  double x_scale = 1.0;    // multiplies x before plotting, e.g. 1e3 for mm
  bool log_y = false;      // values below 1e-6 are clamped to it
  bool normalize = false;  // divide each series by its largest magnitude
};

enum class PlotKind { Densities, TimeSeries, Sweep };

/// Self-contained SVG line plot on a 800x500 viewBox.
std::string render_svg(const Table& table, const PlotSpec& spec);

/// Stock layouts for the three standard tables.
std::string emit_plot(const Table& table, PlotKind kind);

}  // namespace squeezebeam
