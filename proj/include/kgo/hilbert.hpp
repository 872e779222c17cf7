#pragma once

#include "kgo/core_data.hpp"

namespace kgo {

enum class Side { X, F };

/// Orthonormalized description of one side's Hilbert space.
/// x~ = T b(x) are the orthonormal coordinates; T G T^T = I and G^+ = T^T T.
struct SpaceBasis {
  BasisSpec spec;
  int raw_dim = 0;
  int eff_dim = 0;
  Matrix T;
  Matrix gram_raw;
  /// Orthonormal coefficients of the constant function, T G e_0.
  Vector constant_coords;

  /// T * basis_values
  Vector coords(const Vector& basis_values) const;
  /// Basis expansion of a raw point, then T.
  Vector coords_of_point(const Vector& raw_point) const;
};

struct LocalizedState {
  Vector coords;  // unit norm
  Side side = Side::X;
  double christoffel = 0.0;
};

/// G_ab = <b_a b_b> for basis-evaluated rows.
Matrix gram(const Matrix& basis_rows, const Vector& weights);
Matrix gram(const Sample& sample, Side side, const BasisSpec& spec);

/// Eigen-whitening: keeps eigenpairs above rel_threshold * lambda_max.
SpaceBasis regularize(const Matrix& g_raw, double rel_threshold = 1e-12);
SpaceBasis make_space(const Matrix& basis_rows, const Vector& weights,
                      const BasisSpec& spec, double rel_threshold = 1e-12);

/// K = 1 / ||T b||^2 for basis-evaluated b.
double christoffel(const SpaceBasis& space, const Vector& basis_values);
LocalizedState localized_state(const SpaceBasis& space, const Vector& basis_values,
                               Side side = Side::X);

/// <K psi^2> over basis-evaluated rows.
double coverage_of_state(const Matrix& basis_rows, const Vector& weights,
                         const SpaceBasis& space, const LocalizedState& state);

/// A sample mapped into both orthonormal spaces.
struct Embedding {
  Vector weights;
  Matrix x_basis;  // M x n_raw
  Matrix f_basis;  // M x m_raw
  SpaceBasis x_space;
  SpaceBasis f_space;
  Matrix x_ortho;  // M x n
  Matrix f_ortho;  // M x m
  Matrix cross;    // <f~ x~^T>, m x n

  double total_weight() const { return weights.sum(); }
  Eigen::Index size() const { return weights.size(); }
  int n() const { return x_space.eff_dim; }
  int m() const { return f_space.eff_dim; }
};

Embedding embed(const Sample& sample, const BasisSpec& x_spec,
                const BasisSpec& f_spec, double rel_threshold = 1e-12);
Embedding embed_rows(const Matrix& x_basis, const Matrix& f_basis,
                     const Vector& weights, const BasisSpec& x_spec,
                     const BasisSpec& f_spec, double rel_threshold = 1e-12);

/// 1/||v||^2, failing with the observation index when v vanishes.
double inverse_norm2(const Vector& v, Eigen::Index observation, const char* side);

}  // namespace kgo
