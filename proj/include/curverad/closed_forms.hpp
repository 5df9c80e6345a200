#pragma once

#include <cmath>
#include <stdexcept>

#include "curverad/curve.hpp"

namespace curverad {

/// Ellipse with major semi-axis a, minor semi-axis b, so the aspect ratio
/// xi = b/a lies in (0, 1].
struct EllipseShape {
  double a;
  double b;

  EllipseShape(double a_, double b_) : a(a_), b(b_) {
    if (!(b > 0.0) || !(a >= b))
      throw std::invalid_argument("EllipseShape: need a >= b > 0");
  }
  double xi() const { return b / a; }
};

/// alpha = (a^2 - b^2)/2, beta = (a^2 + b^2)/2; always beta > |alpha|.
struct AngularIntegralParams {
  double alpha;
  double beta;

  static AngularIntegralParams from_axes(double a, double b) {
    return {(a * a - b * b) / 2.0, (a * a + b * b) / 2.0};
  }
};

inline double n_circle() { return 2.0 * pi * pi; }

/// (xi + 1/xi) pi^2. Defined for any xi > 0; symmetric under xi -> 1/xi
/// (axis exchange), minimized at xi = 1 where it meets the circle value.
inline double n_ellipse(double xi) {
  if (!(xi > 0.0)) throw std::invalid_argument("n_ellipse: xi must be > 0");
  return (xi + 1.0 / xi) * pi * pi;
}

/// T(beta) = int_0^{2pi} du / (beta - alpha cos u) = 2 pi (beta^2 - alpha^2)^{-1/2}.
/// Valid for beta > |alpha| (covers alpha <= 0 as well).
inline double T_integral(double beta, double alpha) {
  if (!(beta > std::abs(alpha)))
    throw std::domain_error("T_integral: requires beta > |alpha|");
  return two_pi / std::sqrt(beta * beta - alpha * alpha);
}

/// J = int_{-pi}^{pi} dx (a^2 sin^2 x + b^2 cos^2 x)^{-2}
///   = pi (a^2 + b^2) / (a^3 b^3) = -dT/dbeta at (alpha, beta) from the axes.
inline double J_integral(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("J_integral: axes must be positive");
  return pi * (a * a + b * b) / (a * a * a * b * b * b);
}

/// Small-mu behavior of the near-intersection disk integral I(mu, phi).
enum class AsymptoteKind { Pole, Log, Zero };

struct Asymptote {
  AsymptoteKind kind;
  double coefficient;  // c in c/mu (pole) or c ln(1/mu) (log); 0 for zero
};

inline const char* asymptote_kind_name(AsymptoteKind k) {
  switch (k) {
    case AsymptoteKind::Pole: return "pole";
    case AsymptoteKind::Log: return "log";
    case AsymptoteKind::Zero: return "zero";
  }
  return "unknown";
}

/// cos phi = +-1 -> +-pi/sqrt(2) / mu; cos phi = 0 -> identically zero;
/// otherwise pi (cos phi / |sin phi|) ln(1/mu).
inline Asymptote intersection_asymptote(double phi) {
  const double s = std::sin(phi), c = std::cos(phi);
  if (std::abs(s) < 1e-6)
    return {AsymptoteKind::Pole, std::copysign(pi / std::sqrt(2.0), c)};
  if (std::abs(c) < 1e-6) return {AsymptoteKind::Zero, 0.0};
  return {AsymptoteKind::Log, pi * c / std::abs(s)};
}

}  // namespace curverad
