#include "kgo/linalg.hpp"

#include "kgo/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <numeric>

namespace kgo {

namespace {

void check_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) fail_numerical(std::string(what) + ": non-finite entries");
}

void check_symmetric(const Matrix& a, const char* what) {
  if (a.rows() != a.cols()) fail_numerical(std::string(what) + ": matrix is not square");
  check_finite(a, what);
  if (asymmetry(a) > 1e-12) fail_numerical(std::string(what) + ": matrix is not symmetric");
}

SymEigResult descending(const Vector& vals, const Matrix& vecs) {
  const Eigen::Index n = vals.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return vals(a) > vals(b); });
  SymEigResult r{Vector(n), Matrix(vecs.rows(), n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    r.eigenvalues(i) = vals(order[static_cast<std::size_t>(i)]);
    r.eigenvectors.col(i) = vecs.col(order[static_cast<std::size_t>(i)]);
  }
  fix_column_signs(r.eigenvectors);
  return r;
}

}  // namespace

double asymmetry(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.transpose()).norm() / std::max(1.0, a.norm());
}

void fix_column_signs(Matrix& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index best = 0;
    double mag = -1.0;
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      // small slack so numerically tied entries pick the first index
      if (std::abs(vectors(r, c)) > mag * (1.0 + 1e-12)) {
        mag = std::abs(vectors(r, c));
        best = r;
      }
    }
    if (vectors.rows() > 0 && vectors(best, c) < 0.0) vectors.col(c) *= -1.0;
  }
}

SymEigResult sym_eig(const Matrix& a) {
  check_symmetric(a, "sym_eig");
  const Matrix sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) fail_numerical("sym_eig: eigensolver did not converge");
  return descending(es.eigenvalues(), es.eigenvectors());
}

Matrix spd_inverse_sqrt(const Matrix& g) {
  const SymEigResult e = sym_eig(g);
  const Eigen::Index n = e.eigenvalues.size();
  if (n == 0) return Matrix(0, 0);
  const double top = std::max(std::abs(e.eigenvalues(0)), std::abs(e.eigenvalues(n - 1)));
  if (!(e.eigenvalues(n - 1) > 1e-14 * top) || !(top > 0.0))
    fail_numerical("matrix is not positive definite");
  const Vector inv = e.eigenvalues.array().rsqrt();
  return e.eigenvectors * inv.asDiagonal() * e.eigenvectors.transpose();
}

GenEigResult gen_sym_eig(const Matrix& a, const Matrix& b) {
  check_symmetric(a, "gen_sym_eig");
  check_symmetric(b, "gen_sym_eig");
  if (a.rows() != b.rows()) fail_numerical("gen_sym_eig: dimension mismatch");
  const Matrix w = spd_inverse_sqrt(b);
  const Matrix reduced = w * a * w;
  const SymEigResult e = sym_eig(0.5 * (reduced + reduced.transpose()));
  GenEigResult r{e.eigenvalues, w * e.eigenvectors};
  fix_column_signs(r.eigenvectors);
  return r;
}

SvdResult svd(const Matrix& u) {
  check_finite(u, "svd");
  Eigen::JacobiSVD<Matrix> js(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
  SvdResult r{js.matrixU(), js.singularValues(), js.matrixV()};
  const Eigen::Index k = r.sigma.size();
  for (Eigen::Index c = 0; c < r.U.cols(); ++c) {
    Eigen::Index best = 0;
    double mag = -1.0;
    for (Eigen::Index i = 0; i < r.U.rows(); ++i) {
      if (std::abs(r.U(i, c)) > mag * (1.0 + 1e-12)) {
        mag = std::abs(r.U(i, c));
        best = i;
      }
    }
    if (r.U(best, c) < 0.0) {
      r.U.col(c) *= -1.0;
      if (c < k) r.V.col(c) *= -1.0;
    }
  }
  // columns of V beyond the singular values are free; fix their signs too
  for (Eigen::Index c = k; c < r.V.cols(); ++c) {
    Matrix col = r.V.col(c);
    fix_column_signs(col);
    r.V.col(c) = col;
  }
  return r;
}

}  // namespace kgo
