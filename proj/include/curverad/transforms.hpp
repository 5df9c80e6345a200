#pragma once

#include <cmath>
#include <stdexcept>

#include "curverad/curve.hpp"

namespace curverad {

/// Center of the inversion x -> (x - c)/|x - c|^2. The inversion is only
/// defined for curves that keep a positive clearance from c.
template <std::size_t N>
struct InversionCenter {
  Vec<N> center{};
};

namespace detail {
// Sampled clearance guard: the inversion of a curve through its center is
// the degenerate line image and is rejected up front.
inline constexpr double kCenterClearanceRel = 1e-9;
}  // namespace detail

/// Inversion image with chain-rule jets. Writing z = x - c and s = z.z:
///   y    = z / s
///   y'   = z'/s - 2 (z.z') z / s^2
///   y''  = z''/s - 4 (z.z') z'/s^2 - 2 (|z'|^2 + z.z'') z/s^2
///          + 8 (z.z')^2 z / s^3
/// Applying it twice with the same center reproduces the original curve.
template <std::size_t N>
inline Curve<N> invert(const Curve<N>& curve, const InversionCenter<N>& inv) {
  const double clearance = min_distance_to(curve, inv.center);
  const double diam = curve_diameter(curve);
  if (!(clearance > detail::kCenterClearanceRel * diam))
    throw std::domain_error("invert: curve passes through inversion center");
  const Vec<N> c = inv.center;
  return Curve<N>({CurveKind::Transformed}, [curve, c](double t) {
    const CurveJet<N> j = curve.jet(t);
    const Vec<N> z = j.x - c;
    const double s = norm2(z);
    const double zd1 = dot(z, j.d1);
    const double zd2 = dot(z, j.d2);
    const double d1d1 = norm2(j.d1);
    CurveJet<N> out;
    out.x = (1.0 / s) * z;
    out.d1 = (1.0 / s) * j.d1 - (2.0 * zd1 / (s * s)) * z;
    out.d2 = (1.0 / s) * j.d2 - (4.0 * zd1 / (s * s)) * j.d1 +
             (8.0 * zd1 * zd1 / (s * s * s) - 2.0 * (d1d1 + zd2) / (s * s)) * z;
    return out;
  });
}

/// Circle diffeomorphism t -> t + amplitude sin t applied to the parameter.
template <std::size_t N>
inline Curve<N> reparametrize(const Curve<N>& curve, double phase_amplitude) {
  if (!(std::abs(phase_amplitude) < 1.0))
    throw std::invalid_argument(
        "reparametrize: |amplitude| must be < 1 for a diffeomorphism");
  const double a = phase_amplitude;
  return Curve<N>({CurveKind::Transformed}, [curve, a](double t) {
    const double phase = t + a * std::sin(t);
    const double dphase = 1.0 + a * std::cos(t);
    const double ddphase = -a * std::sin(t);
    const CurveJet<N> j = curve.jet(phase);
    return CurveJet<N>{j.x, dphase * j.d1,
                       (dphase * dphase) * j.d2 + ddphase * j.d1};
  });
}

/// x -> scale * Q x + translation (translation moves positions only).
template <std::size_t N>
inline Curve<N> euclidean_transform(const Curve<N>& curve,
                                    const Mat<N>& rotation,
                                    const Vec<N>& translation, double scale) {
  if (orthogonality_defect(rotation) > 1e-12)
    throw std::invalid_argument("euclidean_transform: matrix not orthogonal");
  if (!(scale > 0.0))
    throw std::invalid_argument("euclidean_transform: scale must be positive");
  return Curve<N>({CurveKind::Transformed},
                  [curve, rotation, translation, scale](double t) {
                    const CurveJet<N> j = curve.jet(t);
                    return CurveJet<N>{scale * (rotation * j.x) + translation,
                                       scale * (rotation * j.d1),
                                       scale * (rotation * j.d2)};
                  });
}

/// Simplicity evidence: the worst ratio of chordal distance to torus
/// parameter distance over all sample pairs. Self-intersecting curves give
/// (near-)zero; thresholding is the caller's policy.
template <std::size_t N>
inline double check_simple(const Curve<N>& curve, int samples = 4096) {
  if (samples < 16)
    throw std::invalid_argument("check_simple: need at least 16 samples");
  std::vector<Vec<N>> xs(samples);
  for (int i = 0; i < samples; ++i)
    xs[i] = curve.jet(-pi + two_pi * i / samples).x;
  const double h = two_pi / samples;
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    for (int j = i + 1; j < samples; ++j) {
      const double dt_line = (j - i) * h;
      const double dt = std::min(dt_line, two_pi - dt_line);
      const double r2 = norm2(xs[i] - xs[j]) / (dt * dt);
      worst = std::min(worst, r2);
    }
  }
  return std::sqrt(worst);
}

}  // namespace curverad
