#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "curverad/linalg.hpp"

namespace curverad {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Position and first two parameter derivatives of a curve at one t.
/// A regular parametrization has d1 != 0 everywhere.
template <std::size_t N>
struct CurveJet {
  Vec<N> x;   // position
  Vec<N> d1;  // dx/dt
  Vec<N> d2;  // d^2x/dt^2
};

enum class CurveKind { Circle, Ellipse, Fourier, Transformed };

/// Shape metadata kept alongside the evaluator so closed-form reference
/// values stay available after construction. a/b are the semi-axes and are
/// meaningful for Circle (a == b == r) and Ellipse only.
struct CurveDescriptor {
  CurveKind kind = CurveKind::Transformed;
  double a = 0.0;
  double b = 0.0;
};

inline const char* curve_kind_name(CurveKind k) {
  switch (k) {
    case CurveKind::Circle: return "circle";
    case CurveKind::Ellipse: return "ellipse";
    case CurveKind::Fourier: return "fourier";
    case CurveKind::Transformed: return "transformed";
  }
  return "unknown";
}

/// Smooth closed curve in R^N, represented by a 2*pi-periodic jet
/// evaluator on t in [-pi, pi). All derivatives are analytic (transforms
/// compose jets by the chain rule; nothing is finite-differenced
/// internally). Immutable after construction: jet() is a pure function and
/// safe to call concurrently.
template <std::size_t N>
class Curve {
  static_assert(N >= 2, "curves live in R^N with N >= 2");

 public:
  using Evaluator = std::function<CurveJet<N>(double)>;

  Curve(CurveDescriptor desc, Evaluator eval)
      : desc_(desc), eval_(std::move(eval)) {
    if (!eval_) throw std::invalid_argument("curve: null evaluator");
  }

  CurveJet<N> jet(double t) const { return eval_(t); }
  const CurveDescriptor& descriptor() const { return desc_; }
  CurveKind kind() const { return desc_.kind; }

  static constexpr std::size_t dimension = N;

 private:
  CurveDescriptor desc_;
  Evaluator eval_;
};

/// (a cos t, b sin t) with exact jets.
inline Curve<2> make_ellipse(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("make_ellipse: axes must be positive");
  CurveDescriptor desc{a == b ? CurveKind::Circle : CurveKind::Ellipse, a, b};
  return Curve<2>(desc, [a, b](double t) {
    const double c = std::cos(t), s = std::sin(t);
    return CurveJet<2>{Vec<2>{{a * c, b * s}},
                       Vec<2>{{-a * s, b * c}},
                       Vec<2>{{-a * c, -b * s}}};
  });
}

inline Curve<2> make_circle(double r) { return make_ellipse(r, r); }

/// Truncated Fourier series per coordinate:
///   x_k(t) = sum_m cos_coeff[k][m] cos(m t) + sum_m sin_coeff[k][m] sin(m t)
/// Lists are indexed by frequency m starting at 0 (the m = 0 sine entry is
/// inert). Jets are exact term-by-term derivatives.
template <std::size_t N>
struct FourierCurve {
  std::array<std::vector<double>, N> cos_coeff{};
  std::array<std::vector<double>, N> sin_coeff{};

  Curve<N> to_curve() const {
    bool any = false;
    for (std::size_t k = 0; k < N; ++k)
      any = any || !cos_coeff[k].empty() || !sin_coeff[k].empty();
    if (!any) throw std::invalid_argument("fourier curve: no coefficients");
    FourierCurve copy = *this;
    return Curve<N>({CurveKind::Fourier}, [copy](double t) {
      CurveJet<N> j;
      for (std::size_t k = 0; k < N; ++k) {
        double x = 0.0, v = 0.0, acc = 0.0;
        for (std::size_t m = 0; m < copy.cos_coeff[k].size(); ++m) {
          const double cm = copy.cos_coeff[k][m];
          if (cm == 0.0) continue;
          const double dm = static_cast<double>(m);
          x += cm * std::cos(dm * t);
          v -= cm * dm * std::sin(dm * t);
          acc -= cm * dm * dm * std::cos(dm * t);
        }
        for (std::size_t m = 0; m < copy.sin_coeff[k].size(); ++m) {
          const double sm = copy.sin_coeff[k][m];
          if (sm == 0.0) continue;
          const double dm = static_cast<double>(m);
          x += sm * std::sin(dm * t);
          v += sm * dm * std::cos(dm * t);
          acc -= sm * dm * dm * std::sin(dm * t);
        }
        j.x[k] = x;
        j.d1[k] = v;
        j.d2[k] = acc;
      }
      return j;
    });
  }
};

/// Bounding-box diagonal from uniformly sampled positions. Used as the
/// length scale for clearance tolerances.
template <std::size_t N>
inline double curve_diameter(const Curve<N>& curve, int samples = 256) {
  Vec<N> lo, hi;
  lo.c.fill(std::numeric_limits<double>::infinity());
  hi.c.fill(-std::numeric_limits<double>::infinity());
  for (int i = 0; i < samples; ++i) {
    const double t = -pi + two_pi * i / samples;
    const Vec<N> x = curve.jet(t).x;
    for (std::size_t k = 0; k < N; ++k) {
      lo[k] = std::min(lo[k], x[k]);
      hi[k] = std::max(hi[k], x[k]);
    }
  }
  return norm(hi - lo);
}

/// Distance from p to the curve: coarse scan plus golden-section
/// refinement around the best sample, so tangential near-contacts (and
/// exact contacts) are resolved well below the sample spacing.
template <std::size_t N>
inline double min_distance_to(const Curve<N>& curve, const Vec<N>& p,
                              int samples = 1024) {
  auto dist2 = [&](double t) { return norm2(curve.jet(t).x - p); };
  double best = std::numeric_limits<double>::infinity();
  int best_i = 0;
  for (int i = 0; i < samples; ++i) {
    const double d = dist2(-pi + two_pi * i / samples);
    if (d < best) {
      best = d;
      best_i = i;
    }
  }
  const double h = two_pi / samples;
  const double t0 = -pi + h * best_i;
  double lo = t0 - h, hi = t0 + h;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
  double fa = dist2(a), fb = dist2(b);
  for (int it = 0; it < 80 && hi - lo > 1e-14; ++it) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - gr * (hi - lo);
      fa = dist2(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + gr * (hi - lo);
      fb = dist2(b);
    }
  }
  return std::sqrt(std::min({best, fa, fb}));
}

}  // namespace curverad
