#pragma once

#include "kgo/baselines.hpp"
#include "kgo/solver.hpp"

#include <optional>

namespace kgo {

/// A fitted operator and the spaces it acts between.
struct KgoModel {
  SpaceBasis x_space;
  SpaceBasis f_space;
  PartiallyUnitaryOp op;
  TensorKind kind = TensorKind::ChristoffelProduct;
  /// m x D map from operator rows to orthonormal f coordinates.
  Matrix out_map;
  /// Raw x-basis coefficients of the contributing subspace, when one is used.
  std::optional<Matrix> subspace_raw;
  /// Projector behind the adjusted Christoffel function, when defined.
  std::optional<Matrix> adjusted_projector;
  double F = 0.0;
  double F_tot = 0.0;
  double F_jdg = 0.0;
};

struct FitOptions {
  TensorKind kind = TensorKind::ChristoffelProduct;
  SolverConfig solver;
  /// Operator rows; defaults to the f dimension.
  std::optional<int> D;
  /// Forces a contributing subspace (also used whenever D < m).
  std::optional<SubspaceVariant> subspace;
  /// Start LINEAR_CONSTRAINTS from the adjusted least-squares map.
  bool lsq_initial = false;
  double rel_threshold = 1e-12;
};

struct FitResult {
  KgoModel model;
  IterationTrace trace;
  Embedding embedding;
  STensor tensor;
};

/// Chebyshev specs get their argument ranges from the sample.
FitResult fit_model(const Sample& sample, BasisSpec x_spec, BasisSpec f_spec,
                    const FitOptions& options);

double coverage(const Matrix& u, const STensor& s);

/// alpha in orthonormal f coordinates for a basis-evaluated x.
Vector alpha_of(const KgoModel& model, const Vector& x_basis_values);

double probability_basis(const KgoModel& model, const Vector& x_basis_values,
                         const Vector& f_basis_values);
double probability(const KgoModel& model, const Vector& x_raw, const Vector& f_raw);

struct Prediction {
  Vector f_max_p;  // raw f-basis vector
  double certainty = 0.0;
  bool probability_normalized = true;
  bool pole = false;
  Vector value;    // f_max_p / constant component
};

Prediction most_probable_basis(const KgoModel& model, const Vector& x_basis_values);
Prediction most_probable(const KgoModel& model, const Vector& x_raw);

/// Const-normalized most probable outcome; `pole` marks a vanishing constant.
Prediction value(const KgoModel& model, const Vector& x_raw);

/// Scalar label maximizing P for a univariate monomial f basis, from the real
/// roots of 2 p' q - p q'.
double value_by_roots(const KgoModel& model, const Vector& x_raw);

enum class AdjustedMode { ImportantOnly, DofAdjusted, SvdBasis };

double adjusted_probability_basis(const KgoModel& model, const Vector& x_basis_values,
                                  const Vector& f_basis_values, AdjustedMode mode);
double adjusted_probability(const KgoModel& model, const Vector& x_raw,
                            const Vector& f_raw, AdjustedMode mode);

/// u A u^T
Matrix map_operator(const Matrix& u, const Matrix& a);

}  // namespace kgo
