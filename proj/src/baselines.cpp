#include "kgo/baselines.hpp"

#include "kgo/error.hpp"

#include <cmath>

namespace kgo {

LeastSquaresMap fit_least_squares(const Embedding& e) {
  const Matrix fx = e.f_basis.transpose() * e.weights.asDiagonal() * e.x_basis;
  return LeastSquaresMap{fx * e.x_space.T.transpose() * e.x_space.T};
}

Vector eval_least_squares(const LeastSquaresMap& map, const Vector& x_basis_values) {
  if (x_basis_values.size() != map.beta.cols())
    fail_data("least squares: x dimension mismatch");
  return map.beta * x_basis_values;
}

Matrix least_squares_ortho(const Embedding& e) { return e.cross; }

double least_squares_residual(const Embedding& e, const LeastSquaresMap& map) {
  return (map.beta * e.x_space.gram_raw * map.beta.transpose() - e.f_space.gram_raw).norm();
}

RadonNikodymModel fit_radon_nikodym(const Embedding& e) {
  RadonNikodymModel m{e.x_space, {}};
  const Eigen::Index n = e.x_ortho.cols();
  for (Eigen::Index j = 0; j < e.f_basis.cols(); ++j) {
    Matrix a = Matrix::Zero(n, n);
    for (Eigen::Index l = 0; l < e.size(); ++l) {
      const Vector x = e.x_ortho.row(l).transpose();
      a.noalias() += (e.weights(l) * e.f_basis(l, j)) * (x * x.transpose());
    }
    m.third_moments.push_back(0.5 * (a + a.transpose()));
  }
  return m;
}

Vector eval_radon_nikodym(const RadonNikodymModel& model, const Vector& x_basis_values) {
  const Vector x = model.x_space.coords(x_basis_values);
  const double den = x.squaredNorm();
  if (!(den > 0.0)) fail_numerical("Radon-Nikodym: zero projection of the query point");
  Vector out(static_cast<Eigen::Index>(model.third_moments.size()));
  for (std::size_t j = 0; j < model.third_moments.size(); ++j)
    out(static_cast<Eigen::Index>(j)) = x.dot(model.third_moments[j] * x) / den;
  return out;
}

double joint_distribution_coverage(const Embedding& e) {
  double acc = 0.0;
  for (Eigen::Index l = 0; l < e.size(); ++l) {
    const Vector x = e.x_ortho.row(l).transpose();
    const Vector f = e.f_ortho.row(l).transpose();
    const double kx = inverse_norm2(x, l, "x");
    const double kf = inverse_norm2(f, l, "f");
    const double ov = f.dot(e.cross * x);
    acc += e.weights(l) * ov * ov * kx * kf;
  }
  return acc;
}

double direct_projection_probability(const Embedding& e, const LeastSquaresMap& map,
                                     const Vector& x_basis_values,
                                     const Vector& g_basis_values) {
  const Vector h = e.f_space.coords(eval_least_squares(map, x_basis_values));
  const Vector g = e.f_space.coords(g_basis_values);
  const double hn = h.squaredNorm(), gn = g.squaredNorm();
  if (!(hn > 0.0)) fail_numerical("least-squares prediction has zero f projection");
  if (!(gn > 0.0)) fail_numerical("query f has zero projection");
  const double ov = g.dot(h);
  return ov * ov / (hn * gn);
}

}  // namespace kgo
