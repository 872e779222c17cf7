#include "kgo/hilbert.hpp"

#include "kgo/error.hpp"
#include "kgo/linalg.hpp"

#include <cmath>

namespace kgo {

Vector SpaceBasis::coords(const Vector& basis_values) const {
  if (basis_values.size() != raw_dim)
    fail_data("expected " + std::to_string(raw_dim) + " basis values, got " +
              std::to_string(basis_values.size()));
  return T * basis_values;
}

Vector SpaceBasis::coords_of_point(const Vector& raw_point) const {
  return coords(evaluate_basis(spec, raw_point));
}

Matrix gram(const Matrix& basis_rows, const Vector& weights) {
  if (basis_rows.rows() != weights.size()) fail_data("gram: row/weight count mismatch");
  Matrix g = basis_rows.transpose() * weights.asDiagonal() * basis_rows;
  return 0.5 * (g + g.transpose());
}

Matrix gram(const Sample& sample, Side side, const BasisSpec& spec) {
  const Matrix& raw = side == Side::X ? sample.x_rows() : sample.f_rows();
  return gram(evaluate_basis_rows(spec, raw), sample.weights());
}

SpaceBasis regularize(const Matrix& g_raw, double rel_threshold) {
  if (g_raw.rows() == 0 || g_raw.norm() == 0.0) fail_numerical("Gram matrix is zero");
  const SymEigResult e = sym_eig(g_raw);
  const double top = e.eigenvalues(0);
  int kept = 0;
  while (kept < e.eigenvalues.size() && e.eigenvalues(kept) > rel_threshold * top) ++kept;
  if (kept == 0) fail_numerical("Gram matrix has no positive eigenvalues");

  SpaceBasis s;
  s.raw_dim = static_cast<int>(g_raw.rows());
  s.eff_dim = kept;
  s.gram_raw = g_raw;
  s.T.resize(kept, s.raw_dim);
  for (int i = 0; i < kept; ++i)
    s.T.row(i) = e.eigenvectors.col(i).transpose() / std::sqrt(e.eigenvalues(i));
  s.constant_coords = s.T * g_raw.col(0);
  s.spec.degree = s.raw_dim - 1;
  return s;
}

SpaceBasis make_space(const Matrix& basis_rows, const Vector& weights,
                      const BasisSpec& spec, double rel_threshold) {
  SpaceBasis s = regularize(gram(basis_rows, weights), rel_threshold);
  s.spec = spec;
  return s;
}

double inverse_norm2(const Vector& v, Eigen::Index observation, const char* side) {
  const double n2 = v.squaredNorm();
  if (!(n2 > 0.0) || !std::isfinite(n2))
    fail_numerical(std::string("zero projection on the ") + side +
                   " side at observation " + std::to_string(observation + 1));
  return 1.0 / n2;
}

double christoffel(const SpaceBasis& space, const Vector& basis_values) {
  const Vector c = space.coords(basis_values);
  const double n2 = c.squaredNorm();
  if (!(n2 > 0.0)) fail_numerical("point has zero projection onto the space");
  return 1.0 / n2;
}

LocalizedState localized_state(const SpaceBasis& space, const Vector& basis_values,
                               Side side) {
  const Vector c = space.coords(basis_values);
  const double n2 = c.squaredNorm();
  if (!(n2 > 0.0)) fail_numerical("point has zero projection onto the space");
  return LocalizedState{c / std::sqrt(n2), side, 1.0 / n2};
}

double coverage_of_state(const Matrix& basis_rows, const Vector& weights,
                         const SpaceBasis& space, const LocalizedState& state) {
  double acc = 0.0;
  for (Eigen::Index l = 0; l < basis_rows.rows(); ++l) {
    const Vector c = space.coords(basis_rows.row(l).transpose());
    const double k = inverse_norm2(c, l, "state");
    const double psi = state.coords.dot(c);  // psi(x) = <state | x~>
    acc += weights(l) * k * psi * psi;
  }
  return acc;
}

Embedding embed_rows(const Matrix& x_basis, const Matrix& f_basis,
                     const Vector& weights, const BasisSpec& x_spec,
                     const BasisSpec& f_spec, double rel_threshold) {
  Embedding e;
  e.weights = weights;
  e.x_basis = x_basis;
  e.f_basis = f_basis;
  e.x_space = make_space(x_basis, weights, x_spec, rel_threshold);
  e.f_space = make_space(f_basis, weights, f_spec, rel_threshold);
  e.x_ortho = x_basis * e.x_space.T.transpose();
  e.f_ortho = f_basis * e.f_space.T.transpose();
  e.cross = e.f_ortho.transpose() * weights.asDiagonal() * e.x_ortho;
  return e;
}

Embedding embed(const Sample& sample, const BasisSpec& x_spec,
                const BasisSpec& f_spec, double rel_threshold) {
  return embed_rows(evaluate_basis_rows(x_spec, sample.x_rows()),
                    evaluate_basis_rows(f_spec, sample.f_rows()),
                    sample.weights(), x_spec, f_spec, rel_threshold);
}

}  // namespace kgo
