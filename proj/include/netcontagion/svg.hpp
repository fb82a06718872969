#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

// Minimal self-contained SVG charts on the unit square [0,1] x [0,1].
namespace netcontagion::svg {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
  std::string color = "#1f77b4";
  bool dots = false;  // scatter instead of a polyline
};

inline std::string escape(const std::string& s) {
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

inline std::string chart(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                         const std::vector<Series>& series) {
  const double w = 520, h = 400, left = 60, right = 20, top = 40, bottom = 50;
  const double pw = w - left - right, ph = h - top - bottom;
  auto X = [&](double x) { return left + std::clamp(x, 0.0, 1.0) * pw; };
  auto Y = [&](double y) { return top + (1 - std::clamp(y, 0.0, 1.0)) * ph; };
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(2);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' ' << h
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << w / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">" << escape(title) << "</text>\n";
  for (int k = 0; k <= 10; ++k) {
    double t = k / 10.0;
    o << "<line x1=\"" << X(t) << "\" y1=\"" << Y(0) << "\" x2=\"" << X(t) << "\" y2=\"" << Y(1) << "\" stroke=\"#eee\"/>\n";
    o << "<line x1=\"" << X(0) << "\" y1=\"" << Y(t) << "\" x2=\"" << X(1) << "\" y2=\"" << Y(t) << "\" stroke=\"#eee\"/>\n";
    if (k % 2 == 0) {
      o << "<text x=\"" << X(t) << "\" y=\"" << Y(0) + 15 << "\" text-anchor=\"middle\">" << t << "</text>\n";
      o << "<text x=\"" << X(0) - 6 << "\" y=\"" << Y(t) + 4 << "\" text-anchor=\"end\">" << t << "</text>\n";
    }
  }
  o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\">" << escape(xlabel) << "</text>\n";
  o << "<text transform=\"translate(15," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">" << escape(ylabel)
    << "</text>\n";
  double legend_y = top + 12;
  for (const auto& s : series) {
    if (s.dots) {
      o << "<g fill=\"" << s.color << "\" fill-opacity=\"0.25\">\n";
      for (auto [x, y] : s.points) o << "<circle cx=\"" << X(x) << "\" cy=\"" << Y(y) << "\" r=\"1.5\"/>\n";
      o << "</g>\n";
    } else if (!s.points.empty()) {
      o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
      for (auto [x, y] : s.points) o << X(x) << ',' << Y(y) << ' ';
      o << "\"/>\n";
    }
    if (!s.label.empty()) {
      o << "<rect x=\"" << left + 10 << "\" y=\"" << legend_y - 8 << "\" width=\"10\" height=\"10\" fill=\"" << s.color << "\"/>\n";
      o << "<text x=\"" << left + 25 << "\" y=\"" << legend_y + 1 << "\">" << escape(s.label) << "</text>\n";
      legend_y += 15;
    }
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace netcontagion::svg
