#include "attkit_tools/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace attkit::tools {

namespace {

constexpr double kFloor = 1e-16;  // log-scale clamp for exact zeros

struct Series {
  std::string mode;
  std::vector<double> t;
  std::vector<double> v;
};

const char* kPalette[] = {"#1f6fb4", "#c23b3b", "#3d8f5f", "#d98a23", "#7b5cc4", "#2d8f8f"};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct Panel {
  double x0, y0, w, h;      // plot area in page coordinates
  double tmin, tmax;        // data range
  double lmin, lmax;        // log10 range

  double px(double t) const { return x0 + (t - tmin) / (tmax - tmin) * w; }
  double py(double v) const {
    const double l = std::log10(std::max(v, kFloor));
    return y0 + h - (l - lmin) / (lmax - lmin) * h;
  }
};

void render_panel(std::ostringstream& svg, const Panel& p, const std::vector<Series>& series,
                  const std::string& ylabel, bool with_legend) {
  svg << "<rect x='" << p.x0 << "' y='" << p.y0 << "' width='" << p.w << "' height='" << p.h
      << "' fill='white' stroke='#404040'/>\n";

  // Horizontal decade grid. Keep to at most ~8 labelled decades.
  const int lo = static_cast<int>(std::ceil(p.lmin));
  const int hi = static_cast<int>(std::floor(p.lmax));
  int step = 1;
  while ((hi - lo) / step > 8) ++step;
  for (int d = lo; d <= hi; d += step) {
    const double y = p.py(std::pow(10.0, d));
    svg << "<line x1='" << p.x0 << "' y1='" << y << "' x2='" << p.x0 + p.w << "' y2='" << y
        << "' stroke='#d9d9d9' stroke-width='0.6'/>\n";
    svg << "<text x='" << p.x0 - 8 << "' y='" << y + 3
        << "' text-anchor='end' font-size='11'>1e" << d << "</text>\n";
  }

  // Vertical ticks at a 1/2/5 step.
  const double span = p.tmax - p.tmin;
  double tstep = std::pow(10.0, std::floor(std::log10(std::max(span, 1e-12))));
  if (span / tstep > 8.0) tstep *= 2.0;
  if (span / tstep > 8.0) tstep *= 2.5;
  if (span / tstep > 8.0) tstep *= 2.0;
  for (double t = std::ceil(p.tmin / tstep) * tstep; t <= p.tmax + 1e-9; t += tstep) {
    const double x = p.px(t);
    svg << "<line x1='" << x << "' y1='" << p.y0 + p.h << "' x2='" << x << "' y2='"
        << p.y0 + p.h + 4 << "' stroke='#404040'/>\n";
    svg << "<text x='" << x << "' y='" << p.y0 + p.h + 16
        << "' text-anchor='middle' font-size='11'>" << fmt(t) << "</text>\n";
  }

  for (std::size_t i = 0; i < series.size(); ++i) {
    svg << "<polyline fill='none' stroke='" << kPalette[i % 6]
        << "' stroke-width='1.4' points='";
    for (std::size_t k = 0; k < series[i].t.size(); ++k)
      svg << fmt(p.px(series[i].t[k])) << ',' << fmt(p.py(series[i].v[k])) << ' ';
    svg << "'/>\n";
  }

  svg << "<text x='" << p.x0 - 52 << "' y='" << p.y0 + p.h / 2
      << "' font-size='12' transform='rotate(-90 " << p.x0 - 52 << ' ' << p.y0 + p.h / 2
      << ")' text-anchor='middle'>" << ylabel << "</text>\n";
  svg << "<text x='" << p.x0 + p.w / 2 << "' y='" << p.y0 + p.h + 32
      << "' text-anchor='middle' font-size='12'>t [s]</text>\n";

  if (with_legend) {
    double ly = p.y0 + 14;
    for (std::size_t i = 0; i < series.size(); ++i) {
      const double lx = p.x0 + p.w - 110;
      svg << "<line x1='" << lx << "' y1='" << ly - 4 << "' x2='" << lx + 22 << "' y2='"
          << ly - 4 << "' stroke='" << kPalette[i % 6] << "' stroke-width='2'/>\n";
      svg << "<text x='" << lx + 28 << "' y='" << ly << "' font-size='11'>" << series[i].mode
          << "</text>\n";
      ly += 15;
    }
  }
}

std::vector<Series> collect(const std::vector<TraceRow>& rows, bool bias) {
  std::vector<Series> out;
  std::map<std::string, std::size_t> index;
  for (const TraceRow& r : rows) {
    auto it = index.find(r.mode);
    if (it == index.end()) {
      index.emplace(r.mode, out.size());
      out.push_back(Series{r.mode, {}, {}});
      it = index.find(r.mode);
    }
    Series& s = out[it->second];
    s.t.push_back(r.t);
    s.v.push_back(bias ? r.bias_err : r.attitude_err);
  }
  return out;
}

Panel fit_panel(double x0, double y0, double w, double h, const std::vector<Series>& series) {
  Panel p{x0, y0, w, h, 0.0, 1.0, -16.0, 0.0};
  double tmin = 1e300, tmax = -1e300, vmax = kFloor, vmin = 1e300;
  for (const Series& s : series) {
    for (double t : s.t) {
      tmin = std::min(tmin, t);
      tmax = std::max(tmax, t);
    }
    for (double v : s.v) {
      vmax = std::max(vmax, v);
      vmin = std::min(vmin, std::max(v, kFloor));
    }
  }
  if (!(tmax > tmin)) tmax = tmin + 1.0;
  p.tmin = tmin;
  p.tmax = tmax;
  p.lmax = std::ceil(std::log10(vmax) + 0.2);
  p.lmin = std::floor(std::max(std::log10(vmin) - 0.2, -16.0));
  if (p.lmax - p.lmin < 1.0) p.lmin = p.lmax - 1.0;
  return p;
}

}  // namespace

std::string render_error_plot(const std::vector<TraceRow>& rows, const std::string& title) {
  if (rows.empty()) throw std::invalid_argument("plot: empty trace");
  const std::vector<Series> att = collect(rows, false);
  const std::vector<Series> bias = collect(rows, true);

  const double width = 900, height = 720;
  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
      << "' viewBox='0 0 " << width << ' ' << height
      << "' font-family='Helvetica,Arial,sans-serif'>\n";
  svg << "<rect width='100%' height='100%' fill='white'/>\n";
  svg << "<text x='" << width / 2 << "' y='22' text-anchor='middle' font-size='15'>" << title
      << "</text>\n";

  const Panel top = fit_panel(90, 50, 760, 270, att);
  render_panel(svg, top, att, "attitude error |R Rhat^T|^2", true);
  const Panel bottom = fit_panel(90, 400, 760, 270, bias);
  render_panel(svg, bottom, bias, "bias error [rad/s]", false);

  svg << "</svg>\n";
  return svg.str();
}

void write_error_plot(const std::string& path, const std::vector<TraceRow>& rows,
                      const std::string& title) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("plot: cannot write '" + path + "'");
  out << render_error_plot(rows, title);
}

}  // namespace attkit::tools
