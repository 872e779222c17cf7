#pragma once

#include "kgo/evaluate.hpp"

#include <random>

namespace kgo::testing {

/// x in {-1, 0, 1}, unit weights, f = x, monomial bases {1, x}.
inline Sample t3_sample() {
  Matrix x(3, 1);
  x << -1, 0, 1;
  return Sample(x, x);
}

inline BasisSpec mono(int n) { return BasisSpec::univariate(BasisKind::Monomial, n); }

inline Embedding t3_embedding() { return embed(t3_sample(), mono(2), mono(2)); }

inline Vector vec(std::initializer_list<double> v) {
  Vector r(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) r(i++) = d;
  return r;
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Matrix matrix(Eigen::Index r, Eigen::Index c) {
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j) m(i, j) = normal();
    return m;
  }
  Matrix symmetric(Eigen::Index n) {
    const Matrix a = matrix(n, n);
    return 0.5 * (a + a.transpose());
  }
  Matrix spd(Eigen::Index n) {
    const Matrix a = matrix(n, n);
    return a * a.transpose() + 0.5 * Matrix::Identity(n, n);
  }
  /// Random D x n with orthonormal rows.
  Matrix partially_unitary(Eigen::Index d, Eigen::Index n) {
    Eigen::HouseholderQR<Matrix> qr(matrix(n, n));
    const Matrix q = qr.householderQ();
    return q.leftCols(d).transpose();
  }
  /// Well-conditioned square transform with first row e_0 scaled, so the
  /// constant stays in the constant slot.
  Matrix gauge(Eigen::Index n) {
    Matrix a = Matrix::Identity(n, n) + 0.3 * matrix(n, n);
    a.row(0).setZero();
    a(0, 0) = 1.0 + 0.5 * uniform(0.0, 1.0);
    return a;
  }
  /// A random supervised sample; f depends on x through a polynomial plus noise.
  Sample sample(int M, int xvars, int fvars, double noise = 0.3) {
    Matrix x(M, xvars), f(M, fvars);
    Vector w(M);
    for (int l = 0; l < M; ++l) {
      for (int v = 0; v < xvars; ++v) x(l, v) = uniform();
      for (int v = 0; v < fvars; ++v)
        f(l, v) = x(l, v % xvars) + 0.5 * x(l, 0) * x(l, 0) + noise * normal();
      w(l) = uniform(0.5, 1.5);
    }
    return Sample(x, f, w);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace kgo::testing
