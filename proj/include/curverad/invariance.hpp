#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

#include "curverad/quadrature.hpp"

namespace curverad {

/// Transforms under which n is expected to be invariant.
template <std::size_t N>
struct ReparamOp {
  double amplitude;
};
template <std::size_t N>
struct RotateOp {
  Mat<N> rotation;
};
template <std::size_t N>
struct TranslateOp {
  Vec<N> offset;
};
template <std::size_t N>
struct ScaleOp {
  double factor;
};
template <std::size_t N>
struct InvertOp {
  Vec<N> center;
};

template <std::size_t N>
using CurveTransform = std::variant<ReparamOp<N>, RotateOp<N>, TranslateOp<N>,
                                    ScaleOp<N>, InvertOp<N>>;

template <std::size_t N>
inline Curve<N> apply_transform(const Curve<N>& curve,
                                const CurveTransform<N>& op) {
  return std::visit(
      [&](const auto& o) -> Curve<N> {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, ReparamOp<N>>)
          return reparametrize(curve, o.amplitude);
        else if constexpr (std::is_same_v<T, RotateOp<N>>)
          return euclidean_transform(curve, o.rotation, Vec<N>{}, 1.0);
        else if constexpr (std::is_same_v<T, TranslateOp<N>>)
          return euclidean_transform(curve, Mat<N>::identity(), o.offset, 1.0);
        else if constexpr (std::is_same_v<T, ScaleOp<N>>)
          return euclidean_transform(curve, Mat<N>::identity(), Vec<N>{},
                                     o.factor);
        else
          return invert(curve, InversionCenter<N>{o.center});
      },
      op);
}

template <std::size_t N>
inline std::string transform_name(const CurveTransform<N>& op) {
  switch (op.index()) {
    case 0: return "reparam";
    case 1: return "rotate";
    case 2: return "translate";
    case 3: return "scale";
    default: return "invert";
  }
}

struct InvarianceReport {
  std::string transform;
  double n_before = 0.0;
  double n_after = 0.0;
  double abs_dev = 0.0;
  double rel_dev = 0.0;
  bool pass = false;
};

/// Evaluates n before and after a transform at matched quadrature settings
/// and reports the deviation against the given tolerance.
template <std::size_t N>
inline InvarianceReport check_invariance(const Curve<N>& curve,
                                         const CurveTransform<N>& op,
                                         const QuadratureConfig& config = {},
                                         double tol = 1e-8) {
  const Curve<N> transformed = apply_transform(curve, op);
  const QuadratureResult before = integrate_n(curve, config);
  const QuadratureResult after = integrate_n(transformed, config);
  InvarianceReport rep;
  rep.transform = transform_name(op);
  rep.n_before = before.value;
  rep.n_after = after.value;
  rep.abs_dev = std::abs(after.value - before.value);
  rep.rel_dev = rep.abs_dev / std::abs(before.value);
  rep.pass = rep.rel_dev <= tol;
  return rep;
}

/// f(t) = ln(x.x) and its derivatives for a curve avoiding the origin;
/// the radial log profile whose derivative drives the inversion shift.
template <std::size_t N>
struct IIntegrandContext {
  const Curve<N>& curve;

  double f(double t) const { return std::log(norm2(curve.jet(t).x)); }
  double f_prime(double t) const {
    const CurveJet<N> j = curve.jet(t);
    return 2.0 * dot(j.x, j.d1) / norm2(j.x);
  }
  double f_second(double t) const {
    const CurveJet<N> j = curve.jet(t);
    const double xx = norm2(j.x);
    const double xd = dot(j.x, j.d1);
    return 2.0 * (norm2(j.d1) + dot(j.x, j.d2)) / xx - 4.0 * xd * xd / (xx * xx);
  }
};

namespace detail {

// I(t1,t2) off the diagonal. With f'(t) = 2 (x.x')/|x|^2 and the analytic
// partials of ln S this is
//   -f'(t1) f'(t2)/4 + (f'(t1)/2) d2 ln S + (f'(t2)/2) d1 ln S.
template <std::size_t N>
inline double i_integrand_off(const CurveJet<N>& j1, const CurveJet<N>& j2,
                              double fp1, double fp2) {
  const auto [delta, s2] = delta_and_s2(j1, j2);
  const double d1_ln_s = dot(delta, j1.d1) / s2;
  const double d2_ln_s = -dot(delta, j2.d1) / s2;
  return -0.25 * fp1 * fp2 + 0.5 * fp1 * d2_ln_s + 0.5 * fp2 * d1_ln_s;
}

// Diagonal value by the continuous extension R(t,t) = -2 f'' + 2 f' (x'.x'')/|x'|^2,
// I(t,t) = -f'^2/4 + R(t,t)/4.
template <std::size_t N>
inline double i_integrand_diag(const CurveJet<N>& j, double fp, double fpp) {
  const double r = -2.0 * fpp + 2.0 * fp * dot(j.d1, j.d2) / norm2(j.d1);
  return -0.25 * fp * fp + 0.25 * r;
}

}  // namespace detail

/// Torus quadrature of the inversion-shift integrand I(t1,t2); vanishes
/// (to quadrature accuracy) for every admissible curve, which is the
/// numerically checkable content of inversion invariance.
template <std::size_t N>
inline double i_integral(const Curve<N>& curve, int grid, int threads = 1) {
  if (grid < 2) throw std::invalid_argument("i_integral: grid < 2");
  const double clearance = min_distance_to(curve, Vec<N>{});
  if (!(clearance > detail::kCenterClearanceRel * curve_diameter(curve)))
    throw std::domain_error("i_integral: curve passes through the origin");

  const int m = grid;
  const double h = two_pi / m;
  std::vector<CurveJet<N>> jets(m);
  std::vector<double> fp(m), fpp(m);
  const IIntegrandContext<N> ctx{curve};
  for (int i = 0; i < m; ++i) {
    const double t = -pi + h * i;
    jets[i] = curve.jet(t);
    fp[i] = ctx.f_prime(t);
    fpp[i] = ctx.f_second(t);
  }
  auto eval = [&](int i, int j) {
    if (i == j) return detail::i_integrand_diag(jets[i], fp[i], fpp[i]);
    return detail::i_integrand_off(jets[i], jets[j], fp[i], fp[j]);
  };
  return h * h * detail::grid_sum(m, threads, eval);
}

struct KernelShift {
  double g_original;
  double g_inverted;
  double i_value;
};

/// Pointwise statement behind inversion invariance: the kernel of the
/// image curve (inversion about the origin) equals the original kernel
/// plus I(t1,t2).
template <std::size_t N>
inline KernelShift kernel_shift_under_inversion(const Curve<N>& curve,
                                                double t1, double t2) {
  const Curve<N> inverted = invert(curve, InversionCenter<N>{});
  const CurveJet<N> j1 = curve.jet(t1);
  const CurveJet<N> j2 = curve.jet(t2);
  const IIntegrandContext<N> ctx{curve};
  const double g0 = kernel_transverse(j1, j2).value;
  const double g1 = kernel_transverse(inverted.jet(t1), inverted.jet(t2)).value;
  const double iv =
      detail::i_integrand_off(j1, j2, ctx.f_prime(t1), ctx.f_prime(t2));
  return {g0, g1, iv};
}

}  // namespace curverad
