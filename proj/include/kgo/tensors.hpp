#pragma once

#include "kgo/hilbert.hpp"

#include <optional>
#include <string>

namespace kgo {

enum class TensorKind { ChristoffelProduct, ChristoffelAdjusted, FChristoffel, PlainValue };

std::string to_string(TensorKind kind);
TensorKind tensor_kind_from_string(const std::string& name);

/// S flattened with index j*n + k, so F(u) = vec(u)^T S vec(u) for row-major
/// vec(u).
struct STensor {
  TensorKind kind = TensorKind::ChristoffelProduct;
  int D = 0;
  int n = 0;
  Matrix S;
};

enum class SubspaceVariant { Projective, Coverage };

/// Columns are orthonormal x-coordinate vectors; `raw` holds the matching
/// raw-basis coefficients (G^x-orthonormal).
struct ContributingSubspace {
  Matrix vectors;  // n x D
  Matrix raw;      // n_raw x D
  Vector eigenvalues;
  SubspaceVariant variant = SubspaceVariant::Projective;
};

/// Projector onto the x-components reachable through <f x>, and its raw form.
struct AdjustedChristoffel {
  Matrix projector;  // n x n, orthonormal coordinates
  Matrix gram_c;     // raw-coordinate quadratic form, 1/K^adj(b) = b^T G^C b
  double operator()(const Vector& x_ortho) const;
};

enum class Coordinates { Orthonormal, Raw };

/// sum_l w K^x K^f (f (x) x)(f (x) x)^T, index j*n + k.
Matrix christoffel_product_moments(const Embedding& e,
                                   Coordinates coords = Coordinates::Orthonormal);

AdjustedChristoffel adjusted_christoffel(const Embedding& e);

STensor build_s_tensor(TensorKind kind, const Embedding& e,
                       const ContributingSubspace* subspace = nullptr);

/// The per-observation weight c_l and out-vector for a tensor kind; shared by
/// build_s_tensor and the direct-sum oracles.
double tensor_weight(TensorKind kind, const Embedding& e, Eigen::Index l,
                     const AdjustedChristoffel* adj);

/// Map from the operator's row space to orthonormal f coordinates: identity
/// without a subspace, C A with one.
Matrix out_map(const Embedding& e, const ContributingSubspace* subspace);

double quadratic_form(const STensor& s, const Matrix& u);

/// <f~ f~^T K^f> in orthonormal f coordinates.
Matrix f_christoffel_moments(const Embedding& e);

/// Trace route, raw coordinates: tr(K^{f->x} G^{x,-1}).
double ftot_upper_bound(const Embedding& e);
/// Eigen route: spectrum of C^T K^f C, descending.
Vector ftot_eigenvalues(const Embedding& e);

ContributingSubspace contributing_subspace(const Embedding& e, int D,
                                           SubspaceVariant variant);

}  // namespace kgo
