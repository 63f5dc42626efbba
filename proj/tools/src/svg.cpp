// SPDX-License-Identifier: Apache-2.0

#include "spec2cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spec2cli/io.hpp"

namespace spec2::cli {
namespace {

std::string xml_escape(const std::string& s) {
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

std::string fixed(double x) {
  std::ostringstream s;
  s.precision(2);
  s << std::fixed << x;
  return s.str();
}

}  // namespace

SvgPlot::SvgPlot(std::string title, int width, int height) : title_(std::move(title)), width_(width), height_(height) {}

void SvgPlot::add_points(const std::vector<Complex>& pts, const std::string& color, double radius,
                         const std::string& label) {
  layers_.push_back({pts, color, radius, label});
}

void SvgPlot::add_polyline(const std::vector<Complex>& pts, const std::string& color, const std::string& label) {
  layers_.push_back({pts, color, 0.0, label});
}

std::string SvgPlot::str() const {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& l : layers_) {
    for (Complex p : l.pts) {
      x0 = std::min(x0, p.real());
      x1 = std::max(x1, p.real());
      y0 = std::min(y0, p.imag());
      y1 = std::max(y1, p.imag());
    }
  }
  if (!std::isfinite(x0)) x0 = y0 = -1.0, x1 = y1 = 1.0;
  // Square aspect, padded, so circles stay circles.
  const double span = std::max({x1 - x0, y1 - y0, 1e-6}) * 1.1;
  const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
  x0 = cx - span / 2;
  y1 = cy + span / 2;
  const double margin = 40.0;
  const double scale = std::min(width_, height_) - 2 * margin;
  auto sx = [&](double x) { return margin + (x - x0) / span * scale; };
  auto sy = [&](double y) { return margin + (y1 - y) / span * scale; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\"" << height_
      << "\" viewBox=\"0 0 " << width_ << " " << height_ << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << margin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << xml_escape(title_)
      << "</text>\n";
  out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << scale << "\" height=\"" << scale
      << "\" fill=\"none\" stroke=\"#999\"/>\n";
  if (0.0 >= y1 - span && 0.0 <= y1) {
    out << "<line x1=\"" << fixed(sx(x0)) << "\" y1=\"" << fixed(sy(0)) << "\" x2=\"" << fixed(sx(x0 + span))
        << "\" y2=\"" << fixed(sy(0)) << "\" stroke=\"#ccc\"/>\n";
  }
  if (0.0 >= x0 && 0.0 <= x0 + span) {
    out << "<line x1=\"" << fixed(sx(0)) << "\" y1=\"" << fixed(sy(y1)) << "\" x2=\"" << fixed(sx(0))
        << "\" y2=\"" << fixed(sy(y1 - span)) << "\" stroke=\"#ccc\"/>\n";
  }
  out << "<text x=\"" << margin << "\" y=\"" << height_ - 12 << "\" font-family=\"sans-serif\" font-size=\"11\">re ["
      << format_double(x0) << ", " << format_double(x0 + span) << "], im [" << format_double(y1 - span) << ", "
      << format_double(y1) << "]</text>\n";

  double legend_y = margin + 14;
  for (const auto& l : layers_) {
    out << "<g" << (l.label.empty() ? "" : " id=\"" + xml_escape(l.label) + "\"") << ">\n";
    if (l.radius > 0.0) {
      for (Complex p : l.pts) {
        out << "<circle cx=\"" << fixed(sx(p.real())) << "\" cy=\"" << fixed(sy(p.imag())) << "\" r=\"" << l.radius
            << "\" fill=\"" << l.color << "\"/>\n";
      }
    } else if (!l.pts.empty()) {
      out << "<polyline fill=\"none\" stroke=\"" << l.color << "\" stroke-width=\"1.2\" points=\"";
      for (Complex p : l.pts) out << fixed(sx(p.real())) << "," << fixed(sy(p.imag())) << " ";
      out << "\"/>\n";
    }
    out << "</g>\n";
    if (!l.label.empty()) {
      out << "<text x=\"" << margin + scale - 150 << "\" y=\"" << legend_y
          << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << l.color << "\">" << xml_escape(l.label)
          << "</text>\n";
      legend_y += 14;
    }
  }
  out << "</svg>\n";
  return out.str();
}

void SvgPlot::write(const std::filesystem::path& path) const { write_text(path, str()); }

}  // namespace spec2::cli
