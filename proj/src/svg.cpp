#include "radapt/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "radapt/error.hpp"

namespace radapt {

namespace {

constexpr std::array<const char*, 6> kPalette = {"#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  bool log = false;

  double transform(double v) const { return log ? std::log10(v) : v; }
  double fraction(double v) const { return (transform(v) - lo) / (hi - lo); }

  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      for (double e = std::floor(lo); e <= std::ceil(hi) + 1e-9; e += 1.0) {
        if (e >= lo - 1e-9 && e <= hi + 1e-9) out.push_back(std::pow(10.0, e));
      }
      if (out.size() < 2) {
        out = {std::pow(10.0, lo), std::pow(10.0, hi)};
      }
      return out;
    }
    for (int i = 0; i <= 5; ++i) out.push_back(lo + i * (hi - lo) / 5.0);
    return out;
  }
};

Axis make_axis(const std::vector<const std::vector<double>*>& data, bool log) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto* v : data) {
    for (double x : *v) {
      const double t = log ? std::log10(x) : x;
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
  }
  if (!std::isfinite(lo)) {
    lo = 0.0;
    hi = 1.0;
  }
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  if (!log) {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  return Axis{lo, hi, log};
}

}  // namespace

SvgPlot::SvgPlot(std::string title, std::string xlabel, std::string ylabel)
    : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)) {}

SvgPlot& SvgPlot::log_x(bool on) {
  log_x_ = on;
  return *this;
}

SvgPlot& SvgPlot::log_y(bool on) {
  log_y_ = on;
  return *this;
}

SvgPlot& SvgPlot::add(Series series) {
  if (series.x.size() != series.y.size()) throw InvalidParameter("plot series '" + series.name + "' has mismatched lengths");
  for (std::size_t i = 0; i < series.x.size(); ++i) {
    if ((log_x_ && !(series.x[i] > 0.0)) || (log_y_ && !(series.y[i] > 0.0))) {
      throw InvalidParameter("plot series '" + series.name + "' has nonpositive values on a log axis");
    }
  }
  if (series.color.empty()) series.color = kPalette[series_.size() % kPalette.size()];
  series_.push_back(std::move(series));
  return *this;
}

std::string SvgPlot::render(int width, int height) const {
  const double left = 80.0;
  const double right = 20.0;
  const double top = 40.0;
  const double bottom = 60.0;
  const double pw = width - left - right;
  const double ph = height - top - bottom;

  std::vector<const std::vector<double>*> xs;
  std::vector<const std::vector<double>*> ys;
  for (const auto& s : series_) {
    xs.push_back(&s.x);
    ys.push_back(&s.y);
  }
  const Axis ax = make_axis(xs, log_x_);
  const Axis ay = make_axis(ys, log_y_);
  auto px = [&](double v) { return left + ax.fraction(v) * pw; };
  auto py = [&](double v) { return top + (1.0 - ay.fraction(v)) * ph; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << escape(title_)
     << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double t : ax.ticks()) {
    const double x = px(t);
    os << "<line x1=\"" << x << "\" y1=\"" << top + ph << "\" x2=\"" << x << "\" y2=\"" << top + ph + 5
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << x << "\" y=\"" << top + ph + 20 << "\" text-anchor=\"middle\" font-size=\"11\">"
       << fmt(t) << "</text>\n";
  }
  for (double t : ay.ticks()) {
    const double y = py(t);
    os << "<line x1=\"" << left - 5 << "\" y1=\"" << y << "\" x2=\"" << left << "\" y2=\"" << y
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << left - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(t)
       << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\" font-size=\"13\">"
     << escape(xlabel_) << "</text>\n";
  os << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
     << top + ph / 2 << ")\">" << escape(ylabel_) << "</text>\n";

  for (const auto& s : series_) {
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
    if (s.dashed) os << " stroke-dasharray=\"6 4\"";
    os << " points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i) os << ' ';
      os << px(s.x[i]) << ',' << py(s.y[i]);
    }
    os << "\"/>\n";
    if (s.markers) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        os << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\"2.5\" fill=\"" << s.color
           << "\"/>\n";
      }
    }
  }

  double ly = top + 14.0;
  for (const auto& s : series_) {
    const double lx = left + pw - 150.0;
    os << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 24 << "\" y2=\"" << ly << "\" stroke=\""
       << s.color << "\" stroke-width=\"1.5\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
    os << "<text x=\"" << lx + 30 << "\" y=\"" << ly + 4 << "\" font-size=\"11\">" << escape(s.name) << "</text>\n";
    ly += 16.0;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace radapt
