#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>
#include <system_error>
#include <vector>

#include "peretz/numeric.hpp"

namespace peretz::svg {

inline constexpr int kCanvas = 1024;
inline constexpr int kMargin = 32;

/// Shortest round-trip decimal form, independent of locale.
inline std::string num(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

struct Box {
  double u0, u1, v0, v1;
};

namespace detail {

inline std::string header(const Box& b, const std::string& stroke) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kCanvas) + "\" height=\"" +
         std::to_string(kCanvas) + "\" viewBox=\"0 0 " + std::to_string(kCanvas) + " " + std::to_string(kCanvas) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const int lo = kMargin, hi = kCanvas - kMargin;
  out += "<rect x=\"" + std::to_string(lo) + "\" y=\"" + std::to_string(lo) + "\" width=\"" + std::to_string(hi - lo) +
         "\" height=\"" + std::to_string(hi - lo) + "\" fill=\"none\" stroke=\"" + stroke + "\"/>\n";
  out += "<text x=\"" + std::to_string(lo) + "\" y=\"" + std::to_string(kCanvas - 8) + "\" font-size=\"12\">u in [" +
         num(b.u0) + ", " + num(b.u1) + "], v in [" + num(b.v0) + ", " + num(b.v1) + "]</text>\n";
  return out;
}

inline double px(double u, const Box& b) { return kMargin + (u - b.u0) / (b.u1 - b.u0) * (kCanvas - 2 * kMargin); }
inline double py(double v, const Box& b) { return kCanvas - kMargin - (v - b.v0) / (b.v1 - b.v0) * (kCanvas - 2 * kMargin); }

}  // namespace detail

/// Image points inside the box; rows outside it are skipped.
inline std::string scatter(const std::vector<SampleRow>& rows, const Box& b, const std::string& stroke = "black") {
  std::string out = detail::header(b, stroke);
  out += "<g fill=\"" + stroke + "\">\n";
  for (const auto& r : rows) {
    if (!(r.u >= b.u0 && r.u <= b.u1 && r.v >= b.v0 && r.v <= b.v1)) continue;
    out += "<circle cx=\"" + num(std::round(detail::px(r.u, b) * 100) / 100) + "\" cy=\"" +
           num(std::round(detail::py(r.v, b) * 100) / 100) + "\" r=\"1\"/>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

/// Uncovered raster cells as filled rectangles.
inline std::string heatmap(const ComplementReport& rep, const Box& b, const std::string& stroke = "black") {
  std::string out = detail::header(b, stroke);
  const double w = (kCanvas - 2 * kMargin) / static_cast<double>(rep.nx);
  const double h = (kCanvas - 2 * kMargin) / static_cast<double>(rep.ny);
  out += "<g fill=\"" + stroke + "\">\n";
  for (const auto& c : rep.uncovered) {
    double x = kMargin + static_cast<double>(c.i) * w;
    double y = kCanvas - kMargin - static_cast<double>(c.j + 1) * h;
    out += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" + num(h) + "\"/>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace peretz::svg
