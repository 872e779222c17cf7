#pragma once

#include "kgo/core_data.hpp"

namespace kgo {

struct SymEigResult {
  Vector eigenvalues;   // descending
  Matrix eigenvectors;  // columns
};

struct GenEigResult {
  Vector eigenvalues;   // descending
  Matrix eigenvectors;  // columns, v^T B v = I
};

struct SvdResult {
  Matrix U;      // D x D
  Vector sigma;  // descending, length min(D, n)
  Matrix V;      // n x n
};

/// Flips each column so its largest-magnitude entry is positive. Ties in
/// magnitude resolve to the lowest index.
void fix_column_signs(Matrix& vectors);

SymEigResult sym_eig(const Matrix& a);
GenEigResult gen_sym_eig(const Matrix& a, const Matrix& b);

/// Full SVD u = U diag(sigma) V^T. U's sign convention is applied and V
/// follows from it, so the product is unchanged.
SvdResult svd(const Matrix& u);

Matrix spd_inverse_sqrt(const Matrix& g);

/// Relative symmetry defect ||A - A^T|| / max(1, ||A||).
double asymmetry(const Matrix& a);

}  // namespace kgo
