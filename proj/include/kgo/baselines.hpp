#pragma once

#include "kgo/hilbert.hpp"

#include <vector>

namespace kgo {

/// f_j(x) ~ sum_k beta_jk b_k(x); rows follow the f-basis components.
struct LeastSquaresMap {
  Matrix beta;  // m_raw x n_raw
};

/// Orthonormal x-coordinate moments <x~ x~^T f_j> per f-basis component.
struct RadonNikodymModel {
  SpaceBasis x_space;
  std::vector<Matrix> third_moments;
};

LeastSquaresMap fit_least_squares(const Embedding& e);
Vector eval_least_squares(const LeastSquaresMap& map, const Vector& x_basis_values);

/// The least-squares map in orthonormal coordinates, u = C (m x n).
Matrix least_squares_ortho(const Embedding& e);

/// ||u G^x u^T - G^f||_F for the raw least-squares map.
double least_squares_residual(const Embedding& e, const LeastSquaresMap& map);

RadonNikodymModel fit_radon_nikodym(const Embedding& e);
Vector eval_radon_nikodym(const RadonNikodymModel& model, const Vector& x_basis_values);

/// sum_l <psi_f(l) | psi_x(l)>^2 w(l)
double joint_distribution_coverage(const Embedding& e);

/// <psi_g | psi_{f_LS(x)}>^2 with g and x given as basis values.
double direct_projection_probability(const Embedding& e, const LeastSquaresMap& map,
                                     const Vector& x_basis_values,
                                     const Vector& g_basis_values);

}  // namespace kgo
