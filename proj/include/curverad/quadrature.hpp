#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "curverad/kernel.hpp"
#include "curverad/transforms.hpp"

namespace curverad {

struct QuadratureConfig {
  int initial_grid = 64;
  int max_grid = 8192;
  double rel_tol = 1e-10;
  int threads = 0;  // 0 = hardware concurrency
};

struct QuadratureResult {
  double value = 0.0;
  int grid = 0;
  std::vector<std::pair<int, double>> history;  // (grid, value) per doubling
  double error_estimate = 0.0;                  // |last - previous|
  bool converged = false;
};

namespace detail {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

// Pairwise (cascade) summation: the fixed association order makes serial
// and parallel totals bit-identical and keeps rounding growth logarithmic.
inline double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

// Sum of eval(i, j) over the full grid x grid index square. Rows are
// distributed over workers; each row is pairwise-summed into a slot indexed
// by row, then the row sums are pairwise-reduced. Totals do not depend on
// the thread count.
template <class Eval>
inline double grid_sum(int grid, int threads, const Eval& eval) {
  const int m = grid;
  std::vector<double> row_sums(m);
  const int workers = std::min(resolve_threads(threads), m);
  std::atomic<int> next{0};
  auto run = [&]() {
    std::vector<double> buf(m);
    int r;
    while ((r = next.fetch_add(1)) < m) {
      for (int j = 0; j < m; ++j) buf[j] = eval(r, j);
      row_sums[r] = pairwise_sum(buf.data(), buf.size());
    }
  };
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
  }
  return pairwise_sum(row_sums.data(), row_sums.size());
}

}  // namespace detail

/// Product trapezoid rule on the 2-torus [-pi,pi]^2: equal weights at an
/// M x M uniform grid. Spectrally accurate for smooth periodic integrands.
template <class F>
inline double integrate_torus(const F& f, int grid, int threads = 1) {
  if (grid < 2) throw std::invalid_argument("integrate_torus: grid < 2");
  const double h = two_pi / grid;
  std::vector<double> ts(grid);
  for (int i = 0; i < grid; ++i) ts[i] = -pi + h * i;
  const double sum =
      detail::grid_sum(grid, threads, [&](int i, int j) { return f(ts[i], ts[j]); });
  return sum * h * h;
}

/// One fixed-grid estimate of n = -2 * integral of g over the torus, with
/// the exact-diagonal nodes replaced by the diagonal limit and nodes closer
/// than kDiagonalSwitch evaluated through the near-diagonal series. Jets
/// are cached per grid node. Evaluation order is canonicalized so the
/// integrand matrix is exactly symmetric.
template <std::size_t N>
inline double integrate_n_grid(const Curve<N>& curve, int grid,
                               int threads = 1) {
  if (grid < 2) throw std::invalid_argument("integrate_n_grid: grid < 2");
  const int m = grid;
  const double h = two_pi / m;
  std::vector<double> ts(m);
  std::vector<CurveJet<N>> jets(m);
  for (int i = 0; i < m; ++i) {
    ts[i] = -pi + h * i;
    jets[i] = curve.jet(ts[i]);
  }
  const int band = std::min<int>(static_cast<int>(kDiagonalSwitch / h), m / 2 - 1);

  auto eval = [&](int i, int j) {
    int k = j - i;
    if (k < 0) k += m;
    const int sep = std::min(k, m - k);  // torus separation in grid steps
    if (sep == 0) return kernel_diagonal(jets[i]).value;
    if (sep <= band) {
      const int base = (k <= m - k) ? i : j;
      return kernel_near_diagonal(curve, ts[base], sep * h).value;
    }
    return kernel_transverse(jets[i], jets[j]).value;
  };
  return -2.0 * h * h * detail::grid_sum(m, threads, eval);
}

namespace detail {
// integrate_n gates on sampled simplicity evidence; the kernel is singular
// at genuine self-intersections.
inline constexpr int kSimplicitySamples = 512;
inline constexpr double kSimplicityThreshold = 1e-6;
}  // namespace detail

/// Grid-doubling driver: starts at config.initial_grid and doubles until
/// two successive estimates agree to rel_tol or max_grid is reached. A run
/// that exhausts max_grid comes back with converged == false rather than a
/// silently degraded value.
template <std::size_t N>
inline QuadratureResult integrate_n(const Curve<N>& curve,
                                    const QuadratureConfig& config = {}) {
  if (config.initial_grid < 2 || config.initial_grid > config.max_grid)
    throw std::invalid_argument("integrate_n: need 2 <= initial_grid <= max_grid");
  if (!(config.rel_tol > 0.0))
    throw std::invalid_argument("integrate_n: rel_tol must be positive");
  const double simplicity =
      check_simple(curve, detail::kSimplicitySamples);
  if (!(simplicity > detail::kSimplicityThreshold))
    throw std::domain_error("integrate_n: curve failed simplicity check");

  QuadratureResult res;
  int grid = config.initial_grid;
  double value = integrate_n_grid(curve, grid, config.threads);
  res.history.emplace_back(grid, value);
  while (grid < config.max_grid) {
    grid = std::min(2 * grid, config.max_grid);
    const double next = integrate_n_grid(curve, grid, config.threads);
    res.history.emplace_back(grid, next);
    res.error_estimate = std::abs(next - value);
    value = next;
    if (res.error_estimate <= config.rel_tol * std::abs(value)) {
      res.converged = true;
      break;
    }
  }
  res.value = value;
  res.grid = grid;
  return res;
}

enum class ConvergenceKind { Spectral, Algebraic, Stalled, Indeterminate };

struct ConvergenceClass {
  ConvergenceKind kind = ConvergenceKind::Indeterminate;
  double order = 0.0;  // estimated order for the algebraic case
};

inline const char* convergence_kind_name(ConvergenceKind k) {
  switch (k) {
    case ConvergenceKind::Spectral: return "spectral";
    case ConvergenceKind::Algebraic: return "algebraic";
    case ConvergenceKind::Stalled: return "stalled";
    case ConvergenceKind::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

/// Classifies a doubling history. Differences that sit at the rounding
/// floor count as converged; spectral means every pre-floor doubling cut
/// the difference by at least 10x (immediate floor qualifies), otherwise
/// the decay order is fitted from the difference ratios.
inline ConvergenceClass convergence_order(
    const std::vector<std::pair<int, double>>& history) {
  if (history.size() < 3) return {ConvergenceKind::Indeterminate, 0.0};
  double scale = 0.0;
  for (const auto& [g, v] : history) scale = std::max(scale, std::abs(v));
  const double floor = 1e-13 * std::max(scale, 1e-300);

  std::vector<double> diffs;
  for (std::size_t k = 0; k + 1 < history.size(); ++k)
    diffs.push_back(std::abs(history[k + 1].second - history[k].second));

  // Pre-floor prefix of the difference sequence.
  std::size_t live = 0;
  while (live < diffs.size() && diffs[live] > floor) ++live;
  if (live == 0) return {ConvergenceKind::Spectral, 0.0};

  std::vector<double> ratios;
  for (std::size_t k = 0; k + 1 < live; ++k)
    ratios.push_back(diffs[k] / std::max(diffs[k + 1], 1e-300));
  if (live < diffs.size())  // dropped into the floor: one more (large) ratio
    ratios.push_back(diffs[live - 1] / floor);

  if (ratios.empty()) return {ConvergenceKind::Indeterminate, 0.0};
  bool all_fast = true;
  for (double r : ratios) all_fast = all_fast && r >= 10.0;
  if (all_fast) return {ConvergenceKind::Spectral, 0.0};

  std::vector<double> orders;
  for (double r : ratios) orders.push_back(std::log2(std::max(r, 1e-300)));
  std::sort(orders.begin(), orders.end());
  const double med = orders[orders.size() / 2];
  if (med < 0.2) return {ConvergenceKind::Stalled, med};
  return {ConvergenceKind::Algebraic, med};
}

}  // namespace curverad
