#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace curverad {

/// Fixed-dimension Euclidean vector. The whole library works in R^N with
/// N known at compile time (N >= 2).
template <std::size_t N>
struct Vec {
  std::array<double, N> c{};

  double& operator[](std::size_t i) { return c[i]; }
  double operator[](std::size_t i) const { return c[i]; }

  static constexpr std::size_t dimension = N;

  Vec& operator+=(const Vec& o) {
    for (std::size_t i = 0; i < N; ++i) c[i] += o.c[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (std::size_t i = 0; i < N; ++i) c[i] -= o.c[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (std::size_t i = 0; i < N; ++i) c[i] *= s;
    return *this;
  }
};

template <std::size_t N>
inline Vec<N> operator+(Vec<N> a, const Vec<N>& b) { return a += b; }

template <std::size_t N>
inline Vec<N> operator-(Vec<N> a, const Vec<N>& b) { return a -= b; }

template <std::size_t N>
inline Vec<N> operator*(double s, Vec<N> a) { return a *= s; }

template <std::size_t N>
inline Vec<N> operator*(Vec<N> a, double s) { return a *= s; }

template <std::size_t N>
inline Vec<N> operator-(Vec<N> a) { return a *= -1.0; }

template <std::size_t N>
inline double dot(const Vec<N>& a, const Vec<N>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s += a[i] * b[i];
  return s;
}

template <std::size_t N>
inline double norm2(const Vec<N>& a) { return dot(a, a); }

template <std::size_t N>
inline double norm(const Vec<N>& a) { return std::sqrt(norm2(a)); }

inline Vec<3> cross(const Vec<3>& a, const Vec<3>& b) {
  return Vec<3>{{a[1] * b[2] - a[2] * b[1],
                 a[2] * b[0] - a[0] * b[2],
                 a[0] * b[1] - a[1] * b[0]}};
}

/// Plane vectors embed into R^3 with z = 0.
inline Vec<3> embed3(const Vec<2>& a) { return Vec<3>{{a[0], a[1], 0.0}}; }
inline Vec<3> embed3(const Vec<3>& a) { return a; }

/// Square matrix, row-major.
template <std::size_t N>
struct Mat {
  std::array<Vec<N>, N> row{};

  static Mat identity() {
    Mat m;
    for (std::size_t i = 0; i < N; ++i) m.row[i][i] = 1.0;
    return m;
  }
};

template <std::size_t N>
inline Vec<N> operator*(const Mat<N>& m, const Vec<N>& v) {
  Vec<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = dot(m.row[i], v);
  return out;
}

template <std::size_t N>
inline Mat<N> transpose(const Mat<N>& m) {
  Mat<N> out;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) out.row[i][j] = m.row[j][i];
  return out;
}

/// max_ij |(Q^T Q - I)_ij|; zero for exactly orthogonal Q.
template <std::size_t N>
inline double orthogonality_defect(const Mat<N>& q) {
  double worst = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < N; ++k) s += q.row[k][i] * q.row[k][j];
      if (i == j) s -= 1.0;
      worst = std::max(worst, std::abs(s));
    }
  }
  return worst;
}

inline Mat<2> rotation2d(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat<2> m;
  m.row[0] = Vec<2>{{c, -s}};
  m.row[1] = Vec<2>{{s, c}};
  return m;
}

}  // namespace curverad
