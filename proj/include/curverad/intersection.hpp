#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "curverad/closed_forms.hpp"

namespace curverad {

/// Local model of a developing self-intersection: two straight pieces at
/// tangent angle phi whose gap-to-length ratio is mu = d/t0.
struct IntersectionConfig {
  double mu;
  double phi;
  int panel_nodes = 32;  // Gauss-Legendre nodes per quadrature panel
};

/// M_{mu,phi}(t,t') = (t t' sin^2 phi + mu^2 cos phi)
///                    / (t^2 + t'^2 - 2 t t' cos phi + mu^2)^2 on [-1,1]^2.
inline double m_integrand(double t, double tp, double mu, double phi) {
  if (!(mu > 0.0)) throw std::invalid_argument("m_integrand: mu must be > 0");
  const double s = std::sin(phi), c = std::cos(phi);
  const double denom = t * t + tp * tp - 2.0 * t * tp * c + mu * mu;
  return (t * tp * s * s + mu * mu * c) / (denom * denom);
}

/// Closed angular integral over the polar angle at radius r:
///   A(r) = pi cos phi [ L(r)^{-1/2} + mu^4 L(r)^{-3/2} ],
///   L(r) = r^4 sin^2 phi + 2 mu^2 r^2 + mu^4.
inline double angular_reduction(double r, double mu, double phi) {
  if (!(mu > 0.0) || r < 0.0)
    throw std::invalid_argument("angular_reduction: need mu > 0, r >= 0");
  const double s = std::sin(phi);
  const double l = r * r * r * r * s * s + 2.0 * mu * mu * r * r +
                   mu * mu * mu * mu;
  const double mu4 = mu * mu * mu * mu;
  return pi * std::cos(phi) *
         (1.0 / std::sqrt(l) + mu4 / (l * std::sqrt(l)));
}

namespace detail {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
struct GaussRule {
  std::vector<double> x, w;
};

inline GaussRule gauss_legendre(int n) {
  GaussRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.x[i] = -x;
    rule.x[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.w[i] = w;
    rule.w[n - 1 - i] = w;
  }
  return rule;
}

template <class F>
inline double integrate_panel(const F& f, double lo, double hi,
                              const GaussRule& rule) {
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double s = 0.0;
  for (std::size_t k = 0; k < rule.x.size(); ++k)
    s += rule.w[k] * f(mid + half * rule.x[k]);
  return half * s;
}

// Geometric decade panels covering [0, hi]; the integrands below vary over
// many scales but are smooth within each decade.
template <class F>
inline double integrate_decades(const F& f, double hi, const GaussRule& rule) {
  double total = 0.0;
  double lo = 0.0, edge = std::min(1.0, hi);
  for (;;) {
    total += integrate_panel(f, lo, edge, rule);
    if (edge >= hi) break;
    lo = edge;
    edge = std::min(edge * 10.0, hi);
  }
  return total;
}

}  // namespace detail

/// Unit-disk integral of M_{mu,phi} via the closed radial reduction in the
/// variable u = r^2/mu^2:
///   I(mu,phi) = (pi/2) cos phi * int_0^{1/mu^2}
///               [ P(u)^{-1/2} + P(u)^{-3/2} ] du,
///   P(u) = u^2 sin^2 phi + 2u + 1.
/// Decade panels toward u = 0 and u = 1/mu^2 keep the node budget
/// logarithmic in 1/mu.
inline double disk_integral(double mu, double phi, int panel_nodes = 32) {
  if (!(mu > 0.0)) throw std::invalid_argument("disk_integral: mu must be > 0");
  const double upper = 1.0 / (mu * mu);
  if (!std::isfinite(upper) || upper > 1e64)
    throw std::domain_error("disk_integral: mu too small to resolve");
  const double s2 = std::sin(phi) * std::sin(phi);
  const auto rule = detail::gauss_legendre(panel_nodes);
  const auto f = [s2](double u) {
    const double p = u * u * s2 + 2.0 * u + 1.0;
    const double rp = 1.0 / std::sqrt(p);
    return rp + rp / p;
  };
  return 0.5 * pi * std::cos(phi) * detail::integrate_decades(f, upper, rule);
}

/// Brute-force 2D polar quadrature of M over the unit disk. Validation
/// oracle for disk_integral; not a production path.
inline double disk_integral_2d(double mu, double phi, int theta_nodes = 512,
                               int panel_nodes = 32) {
  if (!(mu > 0.0))
    throw std::invalid_argument("disk_integral_2d: mu must be > 0");
  const auto rule = detail::gauss_legendre(panel_nodes);
  const auto ring = [&](double r) {
    double s = 0.0;
    for (int k = 0; k < theta_nodes; ++k) {
      const double th = two_pi * k / theta_nodes;
      s += m_integrand(r * std::cos(th), r * std::sin(th), mu, phi);
    }
    return r * s * two_pi / theta_nodes;
  };
  // radial panels refined toward the mu-scale peak at the origin
  std::vector<double> edges{0.0};
  double e = std::min(mu, 1.0);
  while (e < 1.0) {
    edges.push_back(e);
    e *= 4.0;
  }
  edges.push_back(1.0);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    total += detail::integrate_panel(ring, edges[i], edges[i + 1], rule);
  return total;
}

inline double disk_integral(const IntersectionConfig& config) {
  return disk_integral(config.mu, config.phi, config.panel_nodes);
}

struct AsymptoticFit {
  std::optional<AsymptoteKind> model;  // nullopt: insufficient mu range
  double coefficient = 0.0;
};

namespace detail {

// Least squares of y against {basis(x), 1}; returns the basis coefficient.
inline double fit_with_intercept(const std::vector<double>& bx,
                                 const std::vector<double>& y) {
  const double n = static_cast<double>(bx.size());
  double sb = 0.0, sbb = 0.0, sy = 0.0, sby = 0.0;
  for (std::size_t i = 0; i < bx.size(); ++i) {
    sb += bx[i];
    sbb += bx[i] * bx[i];
    sy += y[i];
    sby += bx[i] * y[i];
  }
  return (n * sby - sb * sy) / (n * sbb - sb * sb);
}

}  // namespace detail

/// Fits the small-mu model of I(mu, phi) over a decreasing mu sequence:
/// c/mu at the pole angles (|sin phi| < 1e-6), c ln(1/mu) otherwise, with
/// an all-zero sweep reported as the zero model. Needs at least 4 samples
/// spanning two decades.
inline AsymptoticFit asymptotic_fit(double phi,
                                    const std::vector<double>& mus,
                                    int panel_nodes = 32) {
  if (mus.size() < 4) return {std::nullopt, 0.0};
  for (std::size_t i = 0; i + 1 < mus.size(); ++i)
    if (!(mus[i] > mus[i + 1]) || !(mus[i + 1] > 0.0))
      return {std::nullopt, 0.0};
  if (mus.front() / mus.back() < 100.0) return {std::nullopt, 0.0};

  std::vector<double> values(mus.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < mus.size(); ++i) {
    values[i] = disk_integral(mus[i], phi, panel_nodes);
    peak = std::max(peak, std::abs(values[i]));
  }
  if (peak < 1e-10) return {AsymptoteKind::Zero, 0.0};

  std::vector<double> basis(mus.size());
  if (std::abs(std::sin(phi)) < 1e-6) {
    for (std::size_t i = 0; i < mus.size(); ++i) basis[i] = 1.0 / mus[i];
    return {AsymptoteKind::Pole, detail::fit_with_intercept(basis, values)};
  }
  for (std::size_t i = 0; i < mus.size(); ++i) basis[i] = std::log(1.0 / mus[i]);
  return {AsymptoteKind::Log, detail::fit_with_intercept(basis, values)};
}

}  // namespace curverad
