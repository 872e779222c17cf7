#include "kgo/tensors.hpp"

#include "kgo/error.hpp"
#include "kgo/linalg.hpp"

namespace kgo {

std::string to_string(TensorKind kind) {
  switch (kind) {
    case TensorKind::ChristoffelProduct: return "christoffel-product";
    case TensorKind::ChristoffelAdjusted: return "christoffel-adjusted";
    case TensorKind::FChristoffel: return "f-christoffel";
    case TensorKind::PlainValue: return "plain-value";
  }
  return "unknown";
}

TensorKind tensor_kind_from_string(const std::string& name) {
  for (TensorKind k : {TensorKind::ChristoffelProduct, TensorKind::ChristoffelAdjusted,
                       TensorKind::FChristoffel, TensorKind::PlainValue})
    if (to_string(k) == name) return k;
  fail_usage("unknown tensor kind '" + name + "'");
}

double AdjustedChristoffel::operator()(const Vector& x_ortho) const {
  const double q = x_ortho.dot(projector * x_ortho);
  if (!(q > 0.0)) fail_numerical("adjusted Christoffel function has a zero denominator");
  return 1.0 / q;
}

Matrix christoffel_product_moments(const Embedding& e, Coordinates coords) {
  const Matrix& xs = coords == Coordinates::Orthonormal ? e.x_ortho : e.x_basis;
  const Matrix& fs = coords == Coordinates::Orthonormal ? e.f_ortho : e.f_basis;
  const Eigen::Index n = xs.cols(), m = fs.cols();
  Matrix s = Matrix::Zero(m * n, m * n);
  Vector a(m * n);
  for (Eigen::Index l = 0; l < e.size(); ++l) {
    const double c = e.weights(l) *
                     inverse_norm2(e.x_ortho.row(l).transpose(), l, "x") *
                     inverse_norm2(e.f_ortho.row(l).transpose(), l, "f");
    for (Eigen::Index j = 0; j < m; ++j)
      a.segment(j * n, n) = fs(l, j) * xs.row(l).transpose();
    s.selfadjointView<Eigen::Lower>().rankUpdate(a, c);
  }
  return s.selfadjointView<Eigen::Lower>();
}

AdjustedChristoffel adjusted_christoffel(const Embedding& e) {
  const Matrix& c = e.cross;
  const Matrix cct = c * c.transpose();
  const SymEigResult ev = sym_eig(0.5 * (cct + cct.transpose()));
  const Eigen::Index m = ev.eigenvalues.size();
  if (m == 0 || !(ev.eigenvalues(m - 1) > 1e-12 * std::max(1.0, ev.eigenvalues(0))))
    fail_numerical("cross-moment matrix <f x> is rank deficient; adjusted Christoffel undefined");
  const Matrix inv = ev.eigenvectors * ev.eigenvalues.cwiseInverse().asDiagonal() *
                     ev.eigenvectors.transpose();
  AdjustedChristoffel adj;
  adj.projector = c.transpose() * inv * c;
  adj.projector = 0.5 * (adj.projector + adj.projector.transpose());
  adj.gram_c = e.x_space.T.transpose() * adj.projector * e.x_space.T;
  return adj;
}

double tensor_weight(TensorKind kind, const Embedding& e, Eigen::Index l,
                     const AdjustedChristoffel* adj) {
  const Vector x = e.x_ortho.row(l).transpose();
  const Vector f = e.f_ortho.row(l).transpose();
  switch (kind) {
    case TensorKind::ChristoffelProduct:
      return inverse_norm2(x, l, "x") * inverse_norm2(f, l, "f");
    case TensorKind::ChristoffelAdjusted: {
      if (adj == nullptr) fail_usage("adjusted tensor needs the adjusted Christoffel function");
      const double q = x.dot(adj->projector * x);
      if (!(q > 0.0))
        fail_numerical("zero adjusted Christoffel denominator at observation " +
                       std::to_string(l + 1));
      return inverse_norm2(f, l, "f") / q;
    }
    case TensorKind::FChristoffel:
      return inverse_norm2(f, l, "f");
    case TensorKind::PlainValue:
      return 1.0;
  }
  return 0.0;
}

Matrix out_map(const Embedding& e, const ContributingSubspace* subspace) {
  if (subspace == nullptr) return Matrix::Identity(e.m(), e.m());
  return e.cross * subspace->vectors;
}

STensor build_s_tensor(TensorKind kind, const Embedding& e,
                       const ContributingSubspace* subspace) {
  const int n = e.n();
  const Matrix om = out_map(e, subspace);  // m x D
  const int D = static_cast<int>(om.cols());
  if (D > n)
    fail_usage("operator rows (" + std::to_string(D) + ") exceed x dimension (" +
               std::to_string(n) + "); swap the x and f roles");
  std::optional<AdjustedChristoffel> adj;
  if (kind == TensorKind::ChristoffelAdjusted) adj = adjusted_christoffel(e);

  STensor t{kind, D, n, Matrix::Zero(D * n, D * n)};
  Vector a(D * n);
  for (Eigen::Index l = 0; l < e.size(); ++l) {
    const double c = e.weights(l) * tensor_weight(kind, e, l, adj ? &*adj : nullptr);
    const Vector g = om.transpose() * e.f_ortho.row(l).transpose();
    for (int j = 0; j < D; ++j) a.segment(j * n, n) = g(j) * e.x_ortho.row(l).transpose();
    t.S.selfadjointView<Eigen::Lower>().rankUpdate(a, c);
  }
  t.S = t.S.selfadjointView<Eigen::Lower>();
  return t;
}

double quadratic_form(const STensor& s, const Matrix& u) {
  if (u.rows() != s.D || u.cols() != s.n)
    fail_usage("operator shape " + std::to_string(u.rows()) + "x" + std::to_string(u.cols()) +
               " does not match tensor " + std::to_string(s.D) + "x" + std::to_string(s.n));
  const Matrix ut = u.transpose();  // column-major storage of u^T is row-major vec(u)
  const Eigen::Map<const Vector> v(ut.data(), ut.size());
  return v.dot(s.S * v);
}

Matrix f_christoffel_moments(const Embedding& e) {
  Matrix k = Matrix::Zero(e.m(), e.m());
  for (Eigen::Index l = 0; l < e.size(); ++l) {
    const Vector f = e.f_ortho.row(l).transpose();
    k.noalias() += (e.weights(l) * inverse_norm2(f, l, "f")) * (f * f.transpose());
  }
  return 0.5 * (k + k.transpose());
}

double ftot_upper_bound(const Embedding& e) {
  // raw-coordinate moments
  const Matrix xf = e.x_basis.transpose() * e.weights.asDiagonal() * e.f_basis;
  Matrix kf = Matrix::Zero(e.f_basis.cols(), e.f_basis.cols());
  for (Eigen::Index l = 0; l < e.size(); ++l) {
    const Vector f = e.f_basis.row(l).transpose();
    kf.noalias() +=
        (e.weights(l) * inverse_norm2(e.f_ortho.row(l).transpose(), l, "f")) * (f * f.transpose());
  }
  const Matrix gf_inv = e.f_space.T.transpose() * e.f_space.T;
  const Matrix gx_inv = e.x_space.T.transpose() * e.x_space.T;
  const Matrix k_fx = xf * gf_inv * kf * gf_inv * xf.transpose();
  return (k_fx * gx_inv).trace();
}

Vector ftot_eigenvalues(const Embedding& e) {
  const Matrix k = e.cross.transpose() * f_christoffel_moments(e) * e.cross;
  return sym_eig(0.5 * (k + k.transpose())).eigenvalues;
}

ContributingSubspace contributing_subspace(const Embedding& e, int D,
                                           SubspaceVariant variant) {
  const int cap = std::min(e.m(), e.n());
  if (D < 1 || D > cap)
    fail_usage("subspace dimension " + std::to_string(D) + " outside [1, " +
               std::to_string(cap) + "]");
  Matrix k;
  if (variant == SubspaceVariant::Projective) {
    k = e.cross.transpose() * f_christoffel_moments(e) * e.cross;
  } else {
    k = Matrix::Zero(e.n(), e.n());
    for (Eigen::Index l = 0; l < e.size(); ++l) {
      const Vector x = e.x_ortho.row(l).transpose();
      k.noalias() += (e.weights(l) * inverse_norm2(e.f_ortho.row(l).transpose(), l, "f")) *
                     (x * x.transpose());
    }
  }
  const SymEigResult ev = sym_eig(0.5 * (k + k.transpose()));
  ContributingSubspace s;
  s.vectors = ev.eigenvectors.leftCols(D);
  s.eigenvalues = ev.eigenvalues.head(D);
  s.raw = e.x_space.T.transpose() * s.vectors;
  s.variant = variant;
  return s;
}

}  // namespace kgo
