#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "peretz/assertions.hpp"
#include "peretz/error.hpp"
#include "peretz/poly.hpp"

namespace peretz {

/// F = (p, q) on the (x, y) plane with image coordinates (u, v).
struct PairMap {
  Poly p;
  Poly q;
  std::string u_label = "u";
  std::string v_label = "v";

  PairMap(Poly p_, Poly q_) : p(std::move(p_)), q(std::move(q_)) {
    for (const Poly* c : {&p, &q}) {
      bivariate_degrees(*c);
    }
  }
};

inline Poly jacobian_det(const PairMap& m) {
  return derivative(m.p, kX) * derivative(m.q, kY) - derivative(m.p, kY) * derivative(m.q, kX);
}

inline constexpr std::uint64_t kMaxGridNodes = 100'000'000;

/// Closed box [x0, x1] x [y0, y1] with nx by ny nodes (sampling) or cells (rasters).
struct GridSpec {
  Rational x0, x1, y0, y1;
  std::uint64_t nx = 1;
  std::uint64_t ny = 1;

  void validate() const {
    if (nx == 0 || ny == 0) throw Error(ErrorCode::InvalidArgument, "grid needs at least one node per axis");
    if (nx > kMaxGridNodes / ny) throw Error(ErrorCode::InvalidArgument, "grid exceeds 1e8 nodes");
    if (!(x0 < x1) || !(y0 < y1)) throw Error(ErrorCode::InvalidArgument, "grid ranges must be nondegenerate");
  }

  /// Node i of n evenly spaced points, endpoints included; a single node sits at the low end.
  static double node(const Rational& lo, const Rational& hi, std::uint64_t i, std::uint64_t n) {
    if (n == 1) return to_double(lo);
    return to_double(lo + (hi - lo) * make_rational(mpz_class(std::to_string(i)), mpz_class(std::to_string(n - 1))));
  }

  double x_node(std::uint64_t i) const { return node(x0, x1, i, nx); }
  double y_node(std::uint64_t j) const { return node(y0, y1, j, ny); }
};

namespace detail {

/// Shared float evaluation of p, q and the Jacobian determinant.
class CompiledPair {
 public:
  explicit CompiledPair(const PairMap& m)
      : p_(m.p, {kX, kY}),
        q_(m.q, {kX, kY}),
        px_(derivative(m.p, kX), {kX, kY}),
        py_(derivative(m.p, kY), {kX, kY}),
        qx_(derivative(m.q, kX), {kX, kY}),
        qy_(derivative(m.q, kY), {kX, kY}),
        det_(jacobian_det(m), {kX, kY}) {}

  std::array<double, 2> operator()(double x, double y) const { return {p_({x, y}), q_({x, y})}; }
  std::array<double, 4> jacobian(double x, double y) const { return {px_({x, y}), py_({x, y}), qx_({x, y}), qy_({x, y})}; }
  double det(double x, double y) const { return det_({x, y}); }

 private:
  CompiledPoly p_, q_, px_, py_, qx_, qy_, det_;
};

inline int sign_of(double v) { return (v > 0) - (v < 0); }

}  // namespace detail

struct SampleRow {
  double x, y, u, v;
  int det_sign;
};

/// Row-major over y then x: rows for j = 0 come first.
inline std::vector<SampleRow> sample_image(const PairMap& m, const GridSpec& g) {
  g.validate();
  detail::CompiledPair f(m);
  std::vector<SampleRow> rows;
  rows.reserve(static_cast<std::size_t>(g.nx * g.ny));
  for (std::uint64_t j = 0; j < g.ny; ++j) {
    double y = g.y_node(j);
    for (std::uint64_t i = 0; i < g.nx; ++i) {
      double x = g.x_node(i);
      auto [u, v] = f(x, y);
      rows.push_back({x, y, u, v, detail::sign_of(f.det(x, y))});
    }
  }
  return rows;
}

struct NewtonOptions {
  double tol = 1e-10;
  int max_iterations = 100;
  int max_halvings = 40;
};

enum class SeedStatus { Converged, JacobianSingular, MaxIterations, Diverged };

inline std::string to_string(SeedStatus s) {
  switch (s) {
    case SeedStatus::Converged: return "converged";
    case SeedStatus::JacobianSingular: return "jacobian_singular";
    case SeedStatus::MaxIterations: return "max_iterations";
    case SeedStatus::Diverged: return "diverged";
  }
  return "unknown";
}

struct SeedOutcome {
  double seed_x, seed_y;
  SeedStatus status;
  double x, y;
  int iterations;
};

struct PreimageReport {
  std::array<double, 2> target;
  double tol;
  std::vector<std::array<double, 2>> points;  // sorted lexicographically
  std::vector<SeedOutcome> seeds;

  std::size_t count() const { return points.size(); }
};

namespace detail {

inline double residual(const CompiledPair& f, double x, double y, const std::array<double, 2>& t) {
  auto [u, v] = f(x, y);
  return std::hypot(u - t[0], v - t[1]);
}

/// Damped Newton: the step halves while the residual grows. Converged once the
/// residual is below tol and the last full step is shorter than tol.
inline SeedOutcome newton(const CompiledPair& f, double x, double y, const std::array<double, 2>& t,
                          const NewtonOptions& o) {
  SeedOutcome out{x, y, SeedStatus::MaxIterations, x, y, 0};
  double r = residual(f, x, y, t);
  for (int it = 0; it < o.max_iterations; ++it) {
    out.iterations = it;
    if (!std::isfinite(r)) {
      out.status = SeedStatus::Diverged;
      break;
    }
    auto [a, b, c, d] = f.jacobian(x, y);
    double det = a * d - b * c;
    if (det == 0 || !std::isfinite(det)) {
      if (r == 0) {
        out.status = SeedStatus::Converged;
      } else {
        out.status = SeedStatus::JacobianSingular;
      }
      break;
    }
    auto [u, v] = f(x, y);
    double fu = u - t[0], fv = v - t[1];
    double dx = (d * fu - b * fv) / det;
    double dy = (-c * fu + a * fv) / det;
    if (r < o.tol && std::hypot(dx, dy) < o.tol) {
      out.status = SeedStatus::Converged;
      break;
    }
    double lambda = 1;
    double nx = x - dx, ny = y - dy;
    double nr = residual(f, nx, ny, t);
    for (int h = 0; h < o.max_halvings && !(nr <= r); ++h) {
      lambda /= 2;
      nx = x - lambda * dx;
      ny = y - lambda * dy;
      nr = residual(f, nx, ny, t);
    }
    x = nx;
    y = ny;
    r = nr;
    out.iterations = it + 1;
  }
  out.x = x;
  out.y = y;
  return out;
}

}  // namespace detail

/// Multistart Newton from every seed node; converged points closer than 10*tol merge.
inline PreimageReport preimage_count(const PairMap& m, std::array<double, 2> target, const GridSpec& seeds,
                                     double tol = 1e-10) {
  if (!(tol > 0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  seeds.validate();
  detail::CompiledPair f(m);
  NewtonOptions o;
  o.tol = tol;
  PreimageReport rep{target, tol, {}, {}};
  for (std::uint64_t j = 0; j < seeds.ny; ++j)
    for (std::uint64_t i = 0; i < seeds.nx; ++i) {
      SeedOutcome s = detail::newton(f, seeds.x_node(i), seeds.y_node(j), target, o);
      rep.seeds.push_back(s);
      if (s.status != SeedStatus::Converged) continue;
      bool known = std::any_of(rep.points.begin(), rep.points.end(),
                               [&](const auto& p) { return std::hypot(p[0] - s.x, p[1] - s.y) < 10 * tol; });
      if (!known) rep.points.push_back({s.x, s.y});
    }
  std::sort(rep.points.begin(), rep.points.end());
  return rep;
}

struct RasterCell {
  std::uint64_t i, j;
  double u, v;  // cell center
  unsigned depth;
};

struct ComplementReport {
  std::uint64_t nx, ny;
  std::uint64_t covered = 0;
  unsigned rounds = 0;
  std::vector<std::uint64_t> uncovered_per_round;  // entry r: after round r (0 = coarse grid)
  std::vector<RasterCell> uncovered;
};

inline constexpr unsigned kMaxComplementRounds = 6;

namespace detail {

class Raster {
 public:
  explicit Raster(const GridSpec& w)
      : w_(w), u0_(to_double(w.x0)), u1_(to_double(w.x1)), v0_(to_double(w.y0)), v1_(to_double(w.y1)),
        hit_(static_cast<std::size_t>(w.nx * w.ny), false) {}

  std::optional<std::pair<std::uint64_t, std::uint64_t>> cell_of(double u, double v) const {
    if (!(u >= u0_ && u <= u1_ && v >= v0_ && v <= v1_)) return std::nullopt;
    auto idx = [](double a, double lo, double hi, std::uint64_t n) {
      auto k = static_cast<std::uint64_t>(std::floor((a - lo) / (hi - lo) * static_cast<double>(n)));
      return std::min(k, n - 1);
    };
    return std::pair{idx(u, u0_, u1_, w_.nx), idx(v, v0_, v1_, w_.ny)};
  }

  void mark(double u, double v) {
    if (auto c = cell_of(u, v)) hit_[static_cast<std::size_t>(c->second * w_.nx + c->first)] = true;
  }

  bool hit(std::uint64_t i, std::uint64_t j) const { return hit_[static_cast<std::size_t>(j * w_.nx + i)]; }

  std::uint64_t uncovered() const { return static_cast<std::uint64_t>(std::count(hit_.begin(), hit_.end(), false)); }

  /// Does the box [ulo, uhi] x [vlo, vhi] meet an uncovered cell?
  bool box_meets_uncovered(double ulo, double uhi, double vlo, double vhi) const {
    if (uhi < u0_ || ulo > u1_ || vhi < v0_ || vlo > v1_) return false;
    auto a = cell_of(std::clamp(ulo, u0_, u1_), std::clamp(vlo, v0_, v1_));
    auto b = cell_of(std::clamp(uhi, u0_, u1_), std::clamp(vhi, v0_, v1_));
    for (std::uint64_t j = a->second; j <= b->second; ++j)
      for (std::uint64_t i = a->first; i <= b->first; ++i)
        if (!hit(i, j)) return true;
    return false;
  }

  double center_u(std::uint64_t i) const { return u0_ + (static_cast<double>(i) + 0.5) * (u1_ - u0_) / static_cast<double>(w_.nx); }
  double center_v(std::uint64_t j) const { return v0_ + (static_cast<double>(j) + 0.5) * (v1_ - v0_) / static_cast<double>(w_.ny); }

 private:
  GridSpec w_;
  double u0_, u1_, v0_, v1_;
  std::vector<bool> hit_;
};

struct DomainCell {
  double x0, x1, y0, y1;
};

}  // namespace detail

/// Marks raster cells hit by images of domain samples. Each round splits every
/// domain cell whose corner-image box meets an uncovered raster cell into 2x2.
/// Uncovered cells are candidates only.
inline ComplementReport complement_scan(const PairMap& m, const GridSpec& domain, const GridSpec& window,
                                        unsigned rounds) {
  domain.validate();
  window.validate();
  if (rounds > kMaxComplementRounds) throw Error(ErrorCode::InvalidArgument, "at most 6 refinement rounds");
  if (domain.nx < 2 || domain.ny < 2) throw Error(ErrorCode::InvalidArgument, "domain grid needs two nodes per axis");
  detail::CompiledPair f(m);
  detail::Raster raster(window);
  auto sample = [&](double x, double y) {
    auto [u, v] = f(x, y);
    raster.mark(u, v);
    return std::array<double, 2>{u, v};
  };
  std::vector<detail::DomainCell> cells;
  for (std::uint64_t j = 0; j < domain.ny; ++j)
    for (std::uint64_t i = 0; i < domain.nx; ++i) sample(domain.x_node(i), domain.y_node(j));
  for (std::uint64_t j = 0; j + 1 < domain.ny; ++j)
    for (std::uint64_t i = 0; i + 1 < domain.nx; ++i)
      cells.push_back({domain.x_node(i), domain.x_node(i + 1), domain.y_node(j), domain.y_node(j + 1)});
  ComplementReport rep{window.nx, window.ny, 0, rounds, {raster.uncovered()}, {}};
  for (unsigned r = 1; r <= rounds; ++r) {
    std::vector<detail::DomainCell> next;
    for (const auto& c : cells) {
      std::array<std::array<double, 2>, 4> img = {f(c.x0, c.y0), f(c.x1, c.y0), f(c.x0, c.y1), f(c.x1, c.y1)};
      double ulo = img[0][0], uhi = img[0][0], vlo = img[0][1], vhi = img[0][1];
      for (const auto& p : img) {
        ulo = std::min(ulo, p[0]);
        uhi = std::max(uhi, p[0]);
        vlo = std::min(vlo, p[1]);
        vhi = std::max(vhi, p[1]);
      }
      if (!raster.box_meets_uncovered(ulo, uhi, vlo, vhi)) continue;
      double xm = (c.x0 + c.x1) / 2, ym = (c.y0 + c.y1) / 2;
      sample(xm, ym);
      sample(xm, c.y0);
      sample(xm, c.y1);
      sample(c.x0, ym);
      sample(c.x1, ym);
      next.push_back({c.x0, xm, c.y0, ym});
      next.push_back({xm, c.x1, c.y0, ym});
      next.push_back({c.x0, xm, ym, c.y1});
      next.push_back({xm, c.x1, ym, c.y1});
    }
    cells = std::move(next);
    rep.uncovered_per_round.push_back(raster.uncovered());
  }
  for (std::uint64_t j = 0; j < window.ny; ++j)
    for (std::uint64_t i = 0; i < window.nx; ++i) {
      if (raster.hit(i, j)) {
        ++rep.covered;
      } else {
        rep.uncovered.push_back({i, j, raster.center_u(i), raster.center_v(j), rounds});
      }
    }
  return rep;
}

}  // namespace peretz
