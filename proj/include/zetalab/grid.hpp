#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "zetalab/core.hpp"

namespace zetalab {

/// Finite sample of a compact set. Lattices are anchored so that halving the
/// mesh yields a superset of the points.
struct CompactGrid {
  enum class Shape { Rectangle, Disk };

  Shape shape = Shape::Disk;
  double sigma_min = 0.0, sigma_max = 0.0, t_min = 0.0, t_max = 0.0;
  cplx center{};
  double radius = 0.0;
  double mesh = 0.01;

  static CompactGrid rectangle(double s0, double s1, double t0, double t1, double mesh) {
    CompactGrid g;
    g.shape = Shape::Rectangle;
    g.sigma_min = s0;
    g.sigma_max = s1;
    g.t_min = t0;
    g.t_max = t1;
    g.mesh = mesh;
    g.validate();
    return g;
  }

  static CompactGrid disk(cplx c, double r, double mesh) {
    CompactGrid g;
    g.shape = Shape::Disk;
    g.center = c;
    g.radius = r;
    g.mesh = mesh;
    g.validate();
    return g;
  }

  void validate() const {
    if (!(mesh > 0.0) || !std::isfinite(mesh)) fail(ErrorKind::InvalidArgument, "grid mesh must be positive");
    if (shape == Shape::Rectangle) {
      if (!(sigma_min <= sigma_max) || !(t_min <= t_max) || !std::isfinite(sigma_min) || !std::isfinite(sigma_max) ||
          !std::isfinite(t_min) || !std::isfinite(t_max)) {
        fail(ErrorKind::InvalidArgument, "rectangle bounds must be finite and ordered");
      }
    } else if (!(radius >= 0.0) || !is_finite(center) || !std::isfinite(radius)) {
      fail(ErrorKind::InvalidArgument, "disk needs a finite center and radius >= 0");
    }
  }

  /// Expansion point for Taylor-based tabulation.
  cplx anchor() const {
    if (shape == Shape::Disk) return center;
    return {0.5 * (sigma_min + sigma_max), 0.5 * (t_min + t_max)};
  }

  std::vector<cplx> points() const {
    validate();
    std::vector<cplx> out;
    if (shape == Shape::Rectangle) {
      auto axis = [&](double lo, double hi) {
        std::vector<double> v;
        for (long i = 0;; ++i) {
          const double x = lo + static_cast<double>(i) * mesh;
          if (x > hi) break;
          v.push_back(x);
        }
        if (v.back() != hi) v.push_back(hi);
        return v;
      };
      for (double t : axis(t_min, t_max)) {
        for (double s : axis(sigma_min, sigma_max)) out.emplace_back(s, t);
      }
      return out;
    }
    const long n = static_cast<long>(std::floor(radius / mesh));
    for (long j = -n; j <= n; ++j) {
      for (long i = -n; i <= n; ++i) {
        const double dx = static_cast<double>(i) * mesh;
        const double dy = static_cast<double>(j) * mesh;
        if (std::hypot(dx, dy) <= radius * (1.0 + 1e-12)) out.push_back(center + cplx{dx, dy});
      }
    }
    if (radius > 0.0) {
      // Boundary circle: smallest power of two with arc length <= mesh.
      long count = 4;
      while (2.0 * kPi * radius / static_cast<double>(count) > mesh) count *= 2;
      for (long q = 0; q < count; ++q) {
        const long double th = kTwoPiL * static_cast<long double>(q) / static_cast<long double>(count);
        out.push_back(center + radius * cplx{static_cast<double>(std::cos(th)), static_cast<double>(std::sin(th))});
      }
    }
    return out;
  }

  double sigma_lo() const { return shape == Shape::Disk ? center.real() - radius : sigma_min; }
  double sigma_hi() const { return shape == Shape::Disk ? center.real() + radius : sigma_max; }

  bool contains(cplx z, double slack = 1e-12) const {
    if (shape == Shape::Disk) return std::abs(z - center) <= radius + slack;
    return z.real() >= sigma_min - slack && z.real() <= sigma_max + slack && z.imag() >= t_min - slack &&
           z.imag() <= t_max + slack;
  }

  /// Every point satisfies lo < sigma < hi.
  bool inside_strip(double lo, double hi) const { return sigma_lo() > lo && sigma_hi() < hi; }
};

/// Target functions: exp(p(s)), p(s), or values tabulated on a fixed point list.
/// Polynomial coefficients are in ascending order.
struct TargetSpec {
  enum class Kind { ExpPoly, Poly, Tabulated };

  Kind kind = Kind::Poly;
  std::vector<cplx> coeffs;
  std::vector<cplx> tab_points;
  std::vector<cplx> tab_values;

  static TargetSpec exp_poly(std::vector<cplx> c) { return {Kind::ExpPoly, std::move(c), {}, {}}; }
  static TargetSpec poly(std::vector<cplx> c) { return {Kind::Poly, std::move(c), {}, {}}; }
  static TargetSpec constant(cplx c) { return poly({c}); }
  static TargetSpec tabulated(std::vector<cplx> pts, std::vector<cplx> vals) {
    if (pts.size() != vals.size()) fail(ErrorKind::ShapeMismatch, "tabulated target needs one value per point");
    return {Kind::Tabulated, {}, std::move(pts), std::move(vals)};
  }

  cplx operator()(cplx s) const {
    if (kind == Kind::Tabulated) {
      for (std::size_t i = 0; i < tab_points.size(); ++i) {
        if (tab_points[i] == s) return tab_values[i];
      }
      fail(ErrorKind::DomainError, "tabulated target has no value at the requested point");
    }
    cplx p{};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) p = p * s + *it;
    return kind == Kind::ExpPoly ? std::exp(p) : p;
  }

  std::vector<cplx> values_on(const std::vector<cplx>& pts) const {
    std::vector<cplx> out;
    out.reserve(pts.size());
    for (const cplx& s : pts) out.push_back((*this)(s));
    return out;
  }
};

enum class GridRole { K1, K2 };

/// Roots of an ascending-coefficient polynomial (Durand-Kerner).
inline std::vector<cplx> polynomial_roots(std::vector<cplx> c) {
  while (!c.empty() && c.back() == cplx{}) c.pop_back();
  if (c.size() < 2) return {};
  const std::size_t deg = c.size() - 1;
  const cplx lead = c.back();
  for (cplx& x : c) x /= lead;
  double bound = 0.0;
  for (std::size_t i = 0; i < deg; ++i) bound = std::max(bound, std::abs(c[i]));
  bound += 1.0;
  std::vector<cplx> z(deg);
  for (std::size_t i = 0; i < deg; ++i) z[i] = bound * std::polar(1.0, 2.0 * kPi * (static_cast<double>(i) + 0.25) / static_cast<double>(deg));
  auto eval = [&](cplx s) {
    cplx p{};
    for (auto it = c.rbegin(); it != c.rend(); ++it) p = p * s + *it;
    return p;
  };
  for (int iter = 0; iter < 500; ++iter) {
    double change = 0.0;
    for (std::size_t i = 0; i < deg; ++i) {
      cplx den{1.0, 0.0};
      for (std::size_t j = 0; j < deg; ++j) {
        if (j != i) den *= z[i] - z[j];
      }
      const cplx step = eval(z[i]) / den;
      z[i] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-15 * bound) break;
  }
  return z;
}

/// K1 targets must be non-vanishing on the grid (exp-polynomials always are);
/// K2 targets are unrestricted.
inline bool target_admissible(const TargetSpec& target, const CompactGrid& grid, GridRole role) {
  if (role == GridRole::K2) return true;
  if (target.kind == TargetSpec::Kind::ExpPoly) return true;
  if (target.kind == TargetSpec::Kind::Poly) {
    const bool zero_poly = std::all_of(target.coeffs.begin(), target.coeffs.end(), [](cplx c) { return c == cplx{}; });
    if (zero_poly) return false;
    for (const cplx& r : polynomial_roots(target.coeffs)) {
      if (grid.contains(r, 1e-9)) return false;
    }
  }
  for (const cplx& v : target.values_on(grid.points())) {
    if (v == cplx{}) return false;
  }
  return true;
}

}  // namespace zetalab
