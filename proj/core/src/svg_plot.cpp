#include "squeezebeam/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "squeezebeam/error.hpp"

namespace squeezebeam {

namespace {

constexpr double kWidth = 800, kHeight = 500;
constexpr double kLeft = 90, kRight = 30, kTop = 50, kBottom = 70;
constexpr double kLogFloor = 1e-6;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
constexpr const char* kDashes[] = {"", "6,4", "2,3", "8,3,2,3"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
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

// Roughly five ticks at 1, 2 or 5 times a power of ten.
std::vector<double> linear_ticks(double lo, double hi) {
  const double raw = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double f : {1.0, 2.0, 5.0, 10.0}) {
    step = f * mag;
    if (raw <= step) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step)
    ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  return ticks;
}

struct Axis {
  double lo = 0, hi = 1;
  bool log = false;

  double value(double v) const { return log ? std::log10(std::max(v, kLogFloor)) : v; }
  double frac(double v) const { return (value(v) - lo) / (hi - lo); }
};

Axis make_axis(double lo, double hi, bool log) {
  Axis a;
  a.log = log;
  if (log) {
    lo = std::floor(std::log10(std::max(lo, kLogFloor)));
    hi = std::ceil(std::log10(std::max(hi, kLogFloor)));
  }
  if (!(hi > lo)) {
    const double pad = lo == 0 ? 1.0 : std::abs(lo) * 0.1;
    lo -= pad;
    hi += pad;
  }
  a.lo = lo;
  a.hi = hi;
  return a;
}

}  // namespace

std::string render_svg(const Table& table, const PlotSpec& spec) {
  if (table.rows.empty()) throw ValidationError("cannot plot an empty table");
  if (spec.y_columns.empty()) throw ValidationError("plot needs at least one y column");
  const std::size_t xc = table.column(spec.x_column);
  std::vector<std::size_t> ycs;
  for (const auto& name : spec.y_columns) ycs.push_back(table.column(name));

  std::vector<double> xs;
  std::vector<std::vector<double>> ys(ycs.size());
  for (const auto& row : table.rows) xs.push_back(row[xc] * spec.x_scale);
  for (std::size_t s = 0; s < ycs.size(); ++s) {
    for (const auto& row : table.rows) ys[s].push_back(row[ycs[s]]);
    if (spec.normalize) {
      double peak = 0;
      for (double v : ys[s])
        if (std::isfinite(v)) peak = std::max(peak, std::abs(v));
      if (peak > 0)
        for (double& v : ys[s]) v /= peak;
    }
  }

  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = xlo, yhi = -xlo;
  for (double x : xs)
    if (std::isfinite(x)) xlo = std::min(xlo, x), xhi = std::max(xhi, x);
  for (const auto& series : ys)
    for (double y : series)
      if (std::isfinite(y)) ylo = std::min(ylo, y), yhi = std::max(yhi, y);
  if (!std::isfinite(xlo)) xlo = 0, xhi = 1;
  if (!std::isfinite(ylo)) ylo = 0, yhi = 1;
  if (!spec.log_y && ylo > 0 && ylo < 0.5 * yhi) ylo = 0;
  const Axis xa = make_axis(xlo, xhi, false);
  const Axis ya = make_axis(ylo, yhi, spec.log_y);

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + xa.frac(x) * pw; };
  auto py = [&](double y) { return kTop + (1.0 - ya.frac(y)) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\" width=\"800\" height=\"500\" "
        "font-family=\"sans-serif\" font-size=\"13\">\n";
  os << "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
  os << "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">" << escape(spec.title)
     << "</text>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double t : linear_ticks(xa.lo, xa.hi)) {
    const double x = px(t);
    os << "<line x1=\"" << coord(x) << "\" y1=\"" << kTop + ph << "\" x2=\"" << coord(x) << "\" y2=\""
       << kTop + ph + 6 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << coord(x) << "\" y=\"" << kTop + ph + 22 << "\" text-anchor=\"middle\">"
       << fmt(t) << "</text>\n";
  }
  std::vector<double> yticks;
  if (ya.log) {
    const double step = std::max(1.0, std::ceil((ya.hi - ya.lo) / 8.0));
    for (double e = ya.lo; e <= ya.hi + 1e-9; e += step) yticks.push_back(std::pow(10.0, e));
  } else {
    yticks = linear_ticks(ya.lo, ya.hi);
  }
  for (double t : yticks) {
    const double y = py(t);
    os << "<line x1=\"" << kLeft - 6 << "\" y1=\"" << coord(y) << "\" x2=\"" << kLeft << "\" y2=\""
       << coord(y) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kLeft - 10 << "\" y=\"" << coord(y + 4) << "\" text-anchor=\"end\">" << fmt(t)
       << "</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 20 << "\" text-anchor=\"middle\">"
     << escape(spec.x_label) << "</text>\n";
  os << "<text x=\"20\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
     << kTop + ph / 2 << ")\">" << escape(spec.y_label) << "</text>\n";

  for (std::size_t s = 0; s < ys.size(); ++s) {
    const char* color = kColors[s % std::size(kColors)];
    const char* dash = kDashes[s % std::size(kDashes)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
    if (*dash) os << " stroke-dasharray=\"" << dash << "\"";
    os << " points=\"";
    bool first = true;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!std::isfinite(xs[i]) || !std::isfinite(ys[s][i])) continue;
      if (!first) os << ' ';
      os << coord(px(xs[i])) << ',' << coord(py(ys[s][i]));
      first = false;
    }
    os << "\"/>\n";
    const double ly = kTop + 18 + 18 * static_cast<double>(s);
    const double lx = kLeft + pw - 170;
    os << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 30 << "\" y2=\"" << ly - 4
       << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
    if (*dash) os << " stroke-dasharray=\"" << dash << "\"";
    os << "/>\n<text x=\"" << lx + 36 << "\" y=\"" << ly << "\">" << escape(spec.y_columns[s])
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string emit_plot(const Table& table, PlotKind kind) {
  PlotSpec spec;
  switch (kind) {
    case PlotKind::Densities:
      spec = {"Densities at the final time", "x (mm)", "density / peak", "x_m",
              {"atom_density", "photon_density", "condensate_density"}, 1e3, false, true};
      break;
    case PlotKind::TimeSeries:
      spec = {"Fock-input detector variance", "t (s)", "v_fock", "t_s", {"v_fock"}, 1.0, true, false};
      break;
    case PlotKind::Sweep:
      spec = {"Minimum v_fock over time", "parameter value", "min v_fock", "param_value",
              {"min_vfock"}, 1.0, true, false};
      break;
  }
  return render_svg(table, spec);
}

}  // namespace squeezebeam
