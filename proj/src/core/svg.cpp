// SVG line chart for a single detected region.

#include "analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace mmcmc {

namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 90.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    switch (c) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    default: out += c;
    }
  }
  return out;
}

// Roughly five round tick values covering [lo, hi].
std::vector<double> ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    step = m * mag;
    if (raw <= step)
      break;
  }
  std::vector<double> out;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span;
       t += step)
    out.push_back(std::abs(t) < 1e-12 ? 0.0 : t);
  return out;
}

struct Frame {
  double y_lo;
  double y_hi;
  std::size_t n;

  double x(std::size_t i) const {
    const double w = kWidth - kLeft - kRight;
    if (n == 1)
      return kLeft + w / 2.0;
    return kLeft + w * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  double y(double v) const {
    const double h = kHeight - kTop - kBottom;
    return kTop + h * (y_hi - v) / (y_hi - y_lo);
  }
};

void series(std::ostream &out, const Frame &f, const std::vector<double> &v,
            const std::string &group, const std::string &colour) {
  out << "  <g class=\"series\" data-group=\"" << group << "\" data-points=\""
      << v.size() << "\" stroke=\"" << colour << "\" fill=\"" << colour
      << "\">\n";
  // Missing points break the line.
  std::string pts;
  auto flush = [&] {
    if (!pts.empty())
      out << "    <polyline fill=\"none\" stroke-width=\"2\" points=\"" << pts
          << "\"/>\n";
    pts.clear();
  };
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      flush();
      continue;
    }
    if (!pts.empty())
      pts += ' ';
    pts += num(f.x(i)) + "," + num(f.y(v[i]));
  }
  flush();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]))
      continue;
    out << "    <circle class=\"point\" cx=\"" << num(f.x(i)) << "\" cy=\""
        << num(f.y(v[i])) << "\" r=\"3\"><title>" << group << " " << i + 1
        << ": " << num(v[i]) << "</title></circle>\n";
  }
  out << "  </g>\n";
}

} // namespace

std::string render_svg(const RegionPlot &plot) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto *s : {&plot.cancer, &plot.normal})
    for (double v : *s)
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
  if (!std::isfinite(lo)) {
    lo = -1.0;
    hi = 1.0;
  }
  const double pad = std::max((hi - lo) * 0.08, 0.25);
  const Frame frame{lo - pad, hi + pad, plot.cpg_ids.size()};

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "  <text class=\"title\" x=\"" << num(kWidth / 2.0)
      << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(plot.title) << "</text>\n";

  // Axes.
  const double x0 = kLeft, x1 = kWidth - kRight;
  const double y0 = kHeight - kBottom, y1 = kTop;
  out << "  <g class=\"axes\" stroke=\"black\">\n";
  out << "    <line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1
      << "\" y2=\"" << y0 << "\"/>\n";
  out << "    <line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0
      << "\" y2=\"" << y1 << "\"/>\n";
  out << "  </g>\n";

  out << "  <g class=\"y-ticks\">\n";
  for (double t : ticks(frame.y_lo, frame.y_hi)) {
    const double y = frame.y(t);
    out << "    <line x1=\"" << num(x0 - 4) << "\" y1=\"" << num(y)
        << "\" x2=\"" << num(x0) << "\" y2=\"" << num(y)
        << "\" stroke=\"black\"/>\n";
    out << "    <text x=\"" << num(x0 - 7) << "\" y=\"" << num(y + 4)
        << "\" text-anchor=\"end\">" << num(t) << "</text>\n";
  }
  out << "  </g>\n";

  const std::size_t n = plot.cpg_ids.size();
  const std::size_t every = std::max<std::size_t>(1, (n + 24) / 25);
  out << "  <g class=\"x-ticks\">\n";
  for (std::size_t i = 0; i < n; i += every) {
    const double x = frame.x(i);
    out << "    <line x1=\"" << num(x) << "\" y1=\"" << num(y0) << "\" x2=\""
        << num(x) << "\" y2=\"" << num(y0 + 4) << "\" stroke=\"black\"/>\n";
    out << "    <text x=\"" << num(x) << "\" y=\"" << num(y0 + 10)
        << "\" text-anchor=\"end\" transform=\"rotate(-45 " << num(x) << ' '
        << num(y0 + 10) << ")\">" << escape(plot.cpg_ids[i]) << "</text>\n";
  }
  out << "  </g>\n";

  out << "  <text x=\"" << num((x0 + x1) / 2.0) << "\" y=\""
      << num(kHeight - 8) << "\" text-anchor=\"middle\">CpG site</text>\n";
  out << "  <text x=\"16\" y=\"" << num((y0 + y1) / 2.0)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << num((y0 + y1) / 2.0) << ")\">Mean M-value</text>\n";

  series(out, frame, plot.cancer, "cancer", "#d62728");
  series(out, frame, plot.normal, "normal", "#1f77b4");

  out << "  <g class=\"legend\">\n";
  const double lx = x1 + 20;
  out << "    <line x1=\"" << lx << "\" y1=\"" << kTop + 10 << "\" x2=\""
      << lx + 24 << "\" y2=\"" << kTop + 10
      << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
  out << "    <text x=\"" << lx + 30 << "\" y=\"" << kTop + 14
      << "\">Cancer</text>\n";
  out << "    <line x1=\"" << lx << "\" y1=\"" << kTop + 30 << "\" x2=\""
      << lx + 24 << "\" y2=\"" << kTop + 30
      << "\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
  out << "    <text x=\"" << lx + 30 << "\" y=\"" << kTop + 34
      << "\">Normal</text>\n";
  out << "  </g>\n";
  out << "</svg>\n";
  return out.str();
}

} // namespace mmcmc
