// SPDX-License-Identifier: Apache-2.0

#include "spec2/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spec2/error.hpp"

namespace spec2 {
namespace {

constexpr double kInfinityThreshold = 1e-12;
constexpr double kBoundaryTol = 1e-8;
constexpr double kRankTol = 1e-8;

ComplexMatrix factor_gram(const ComplexMatrix& m, std::string_view what) {
  try {
    return cholesky(m);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::not_positive_definite) throw;
    throw Error(ErrorCode::degenerate_basis, std::string(what) + " is not positive definite: " + e.what());
  }
}

void check_shapes(const ComplexMatrix& m, const ComplexMatrix& l, const ComplexMatrix& b) {
  const auto d = m.rows();
  if (d == 0) throw Error(ErrorCode::invalid_argument, "empty trial space");
  if (m.cols() != d || l.rows() != d || l.cols() != d || b.rows() != d || b.cols() != d) {
    throw Error(ErrorCode::invalid_argument, "Galerkin matrices have inconsistent shapes");
  }
}

// [[M^-1 L, -M^-1 B], [I, 0]] for the pencil z^2 M - z L + B.
ComplexMatrix companion_of(const ComplexMatrix& m, const ComplexMatrix& l, const ComplexMatrix& b,
                           std::string_view what) {
  check_shapes(m, l, b);
  const Eigen::Index d = m.rows();
  const ComplexMatrix r = factor_gram(m, what);
  ComplexMatrix rhs(d, 2 * d);
  rhs.leftCols(d) = l;
  rhs.rightCols(d) = -b;
  const ComplexMatrix top = cholesky_solve(r, rhs);
  const double defect = (m * top - rhs).norm();
  if (!(defect <= 1e-12 * (m.norm() * top.norm() + rhs.norm()))) {
    throw Error(ErrorCode::degenerate_basis,
                std::string(what) + " is too ill-conditioned for the companion solve (defect " +
                    std::to_string(defect) + ")");
  }
  ComplexMatrix s = ComplexMatrix::Zero(2 * d, 2 * d);
  s.topRows(d) = top;
  s.bottomLeftCorner(d, d).setIdentity();
  return s;
}

double pencil_residual(const ComplexMatrix& m, const ComplexMatrix& l, const ComplexMatrix& b, Complex z,
                       const ComplexVector& v) {
  const double nv = v.norm();
  if (nv == 0.0) return 0.0;
  const ComplexVector r = (z * z) * (m * v) - z * (l * v) + b * v;
  const double scale = std::norm(z) * m.norm() + std::abs(z) * l.norm() + b.norm();
  return scale > 0.0 ? r.norm() / (scale * nv) : r.norm() / nv;
}

struct RawEigen {
  SchurForm form;
  ComplexMatrix vectors;  // per diagonal index, original coordinates
  std::vector<double> backward;
};

// Index sets of the connected components of the joint sparsity graph of M, L
// and B. The pencil, and with it the companion matrix, decouples along them.
std::vector<std::vector<Eigen::Index>> pencil_components(const ComplexMatrix& m, const ComplexMatrix& l,
                                                         const ComplexMatrix& b) {
  const Eigen::Index d = m.rows();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(d));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  auto find = [&](Eigen::Index i) {
    while (parent[static_cast<std::size_t>(i)] != i) {
      parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
      i = parent[static_cast<std::size_t>(i)];
    }
    return i;
  };
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      if (i == j || (m(i, j) == 0.0 && l(i, j) == 0.0 && b(i, j) == 0.0)) continue;
      const Eigen::Index a = find(i);
      const Eigen::Index c = find(j);
      if (a != c) parent[static_cast<std::size_t>(std::max(a, c))] = std::min(a, c);
    }
  }
  std::vector<std::vector<Eigen::Index>> out;
  std::vector<long> slot(static_cast<std::size_t>(d), -1);
  for (Eigen::Index i = 0; i < d; ++i) {
    const Eigen::Index root = find(i);
    if (slot[static_cast<std::size_t>(root)] < 0) {
      slot[static_cast<std::size_t>(root)] = static_cast<long>(out.size());
      out.emplace_back();
    }
    out[static_cast<std::size_t>(slot[static_cast<std::size_t>(root)])].push_back(i);
  }
  return out;
}

// Schur form of the 2x2 companion s of a scalar pencil m z^2 - l z + b. The
// roots come from the quadratic's own coefficients: the companion entries
// l/m and b/m are rounded, which would split a double root by sqrt(ulp).
std::optional<SchurForm> scalar_schur(Complex m, Complex l, Complex b, const ComplexMatrix& s) {
  if (m.imag() != 0.0 || l.imag() != 0.0 || b.imag() != 0.0 || !(m.real() > 0.0)) return std::nullopt;
  const double mr = m.real();
  const double lr = l.real();
  const double br = b.real();
  const double disc = lr * lr - 4.0 * mr * br;
  Complex z1;
  Complex z2;
  if (disc > 0.0) {
    const double q = 0.5 * (lr + std::copysign(std::sqrt(disc), lr));
    z1 = q / mr;
    z2 = q != 0.0 ? Complex(br / q) : Complex(0.0);
  } else if (disc == 0.0) {
    z1 = z2 = lr / (2.0 * mr);
  } else {
    const double re = lr / (2.0 * mr);
    const double im = std::sqrt(-disc) / (2.0 * mr);
    z1 = {re, -im};
    z2 = {re, im};
  }
  // First Schur vector is the eigenvector (z1; 1) of the companion.
  const double norm = std::sqrt(std::norm(z1) + 1.0);
  ComplexMatrix q(2, 2);
  q << z1 / norm, -1.0 / norm, 1.0 / norm, std::conj(z1) / norm;
  SchurForm form;
  form.t = q.adjoint() * s * q;
  form.t(0, 0) = z1;
  form.t(1, 0) = 0.0;
  form.t(1, 1) = z2;
  form.z = q;
  form.balancing.perm = {0, 1};
  form.balancing.scale = RealVector::Ones(2);
  form.balancing.block_starts = {0, 2};
  return form;
}

// Schur form of the full companion s, assembled from independent pieces when
// the pencil decouples.
SchurForm pencil_schur(const ComplexMatrix& m, const ComplexMatrix& l, const ComplexMatrix& b,
                       const ComplexMatrix& s, const EigOptions& options, std::string_view what) {
  const Eigen::Index d = m.rows();
  const auto components = pencil_components(m, l, b);
  if (components.size() == 1 && d > 1) return schur(s, options);

  SchurForm form;
  form.t = ComplexMatrix::Zero(2 * d, 2 * d);
  form.z = ComplexMatrix::Zero(2 * d, 2 * d);
  form.balancing.perm.reserve(static_cast<std::size_t>(2 * d));
  form.balancing.scale.resize(2 * d);
  Eigen::Index offset = 0;
  for (const auto& idx : components) {
    const auto k = static_cast<Eigen::Index>(idx.size());
    std::vector<Eigen::Index> rows(idx.begin(), idx.end());
    for (Eigen::Index i : idx) rows.push_back(d + i);
    const ComplexMatrix sub = s(rows, rows);
    std::optional<SchurForm> piece;
    if (k == 1) piece = scalar_schur(m(idx[0], idx[0]), l(idx[0], idx[0]), b(idx[0], idx[0]), sub);
    if (!piece) piece = schur(companion_of(m(idx, idx), l(idx, idx), b(idx, idx), what), options);
    for (std::size_t j = 0; j < piece->balancing.perm.size(); ++j) {
      form.balancing.perm.push_back(static_cast<std::size_t>(rows[piece->balancing.perm[j]]));
      form.balancing.scale(offset + static_cast<Eigen::Index>(j)) = piece->balancing.scale(static_cast<Eigen::Index>(j));
    }
    for (std::size_t j = 0; j + 1 < piece->balancing.block_starts.size(); ++j) {
      form.balancing.block_starts.push_back(static_cast<std::size_t>(offset) + piece->balancing.block_starts[j]);
    }
    form.t.block(offset, offset, 2 * k, 2 * k) = piece->t;
    form.z.block(offset, offset, 2 * k, 2 * k) = piece->z;
    offset += 2 * k;
  }
  form.balancing.block_starts.push_back(static_cast<std::size_t>(2 * d));
  return form;
}

RawEigen solve_pencil(const ComplexMatrix& m, const ComplexMatrix& l, const ComplexMatrix& b, const ComplexMatrix& s,
                      const EigOptions& options, std::string_view what) {
  RawEigen out;
  out.form = pencil_schur(m, l, b, s, options, what);
  out.vectors = schur_eigenvectors(out.form);
  const double snorm = s.norm();
  const Eigen::Index n = s.rows();
  out.backward.resize(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex w = out.form.t(k, k);
    const double resid = (s * out.vectors.col(k) - w * out.vectors.col(k)).norm();
    const double be = snorm > 0.0 ? resid / snorm : resid;
    if (!(be <= options.tol_eig)) {
      throw Error(ErrorCode::no_convergence, "companion eigenpair backward error " + std::to_string(be) +
                                                 " exceeds " + std::to_string(options.tol_eig));
    }
    out.backward[static_cast<std::size_t>(k)] = be;
  }
  return out;
}

void sort_points(Spec2Result& result) {
  std::vector<std::size_t> order(result.points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return lex_less(result.points[a].z, result.points[b].z); });
  std::vector<Spec2Point> points;
  std::vector<std::size_t> positions;
  points.reserve(order.size());
  positions.reserve(order.size());
  for (std::size_t i : order) {
    points.push_back(std::move(result.points[i]));
    positions.push_back(result.schur_position[i]);
  }
  result.points = std::move(points);
  result.schur_position = std::move(positions);
}

}  // namespace

std::vector<Complex> Spec2Result::values() const {
  std::vector<Complex> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.z);
  return out;
}

ComplexMatrix companion(const GalerkinMatrices& g) { return companion_of(g.m, g.l(), g.b, "Gram matrix"); }

ComplexMatrix finite_section(const GalerkinMatrices& g) {
  check_shapes(g.m, g.n, g.b);
  return cholesky_solve(factor_gram(g.m, "Gram matrix"), g.n);
}

Spec2Result spec2(const GalerkinMatrices& g, const EigOptions& options) {
  const ComplexMatrix l = g.l();
  const ComplexMatrix s = companion_of(g.m, l, g.b, "Gram matrix");
  const auto d = g.m.rows();
  const double shift = g.alpha.value_or(0.0);
  RawEigen raw = solve_pencil(g.m, l, g.b, s, options, "Gram matrix");

  Spec2Result result;
  result.dim = static_cast<std::size_t>(d);
  result.alpha = g.alpha;
  for (Eigen::Index k = 0; k < 2 * d; ++k) {
    Spec2Point p;
    const Complex w = raw.form.t(k, k);
    p.z = w + shift;
    p.u = raw.vectors.col(k).head(d);
    p.v = raw.vectors.col(k).tail(d);
    p.backward_error = raw.backward[static_cast<std::size_t>(k)];
    p.pencil_residual = pencil_residual(g.m, l, g.b, w, p.v);
    result.points.push_back(std::move(p));
    result.schur_position.push_back(static_cast<std::size_t>(k));
  }
  result.schur = std::move(raw.form);
  sort_points(result);
  return result;
}

Spec2Result spec2_shifted(const GalerkinMatrices& shifted, const EigOptions& options) {
  if (!shifted.alpha) throw Error(ErrorCode::invalid_argument, "spec2_shifted needs shifted matrices");
  const double alpha = *shifted.alpha;
  const ComplexMatrix l = shifted.l();
  // Inverse pencil: w^2 B(alpha) - w L(alpha) + M.
  const ComplexMatrix s = companion_of(shifted.b, l, shifted.m, "shifted image Gram matrix");
  const auto d = shifted.m.rows();
  RawEigen raw = solve_pencil(shifted.b, l, shifted.m, s, options, "shifted image Gram matrix");

  Spec2Result result;
  result.dim = static_cast<std::size_t>(d);
  result.alpha = alpha;
  for (Eigen::Index k = 0; k < 2 * d; ++k) {
    const Complex w = raw.form.t(k, k);
    if (std::abs(w) < kInfinityThreshold) {
      ++result.points_at_infinity;
      continue;
    }
    Spec2Point p;
    p.z = alpha + 1.0 / w;
    p.u = raw.vectors.col(k).head(d);
    p.v = raw.vectors.col(k).tail(d);
    p.backward_error = raw.backward[static_cast<std::size_t>(k)];
    p.pencil_residual = pencil_residual(shifted.m, l, shifted.b, p.z - alpha, p.v);
    result.points.push_back(std::move(p));
    result.schur_position.push_back(static_cast<std::size_t>(k));
  }
  result.schur = std::move(raw.form);
  sort_points(result);
  return result;
}

std::size_t cluster(Spec2Result& result, Complex center, double radius) {
  if (!std::isfinite(radius) || !std::isfinite(center.real()) || !std::isfinite(center.imag())) {
    throw Error(ErrorCode::non_finite, "cluster circle is not finite");
  }
  if (!(radius > 0.0)) throw Error(ErrorCode::invalid_circle, "cluster radius must be positive");
  if (center.imag() != 0.0) {
    if (!(radius < std::abs(center.imag()))) {
      throw Error(ErrorCode::invalid_circle, "circle around a non-real center must not meet the real axis");
    }
  } else if (std::abs(std::abs(center.real()) - radius) <= 1e-14 * std::max(1.0, radius)) {
    throw Error(ErrorCode::invalid_circle, "circle around a real center must not pass through zero");
  }
  Cluster c;
  c.center = center;
  c.radius = radius;
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    const double dist = std::abs(result.points[i].z - center);
    if (std::abs(dist - radius) <= kBoundaryTol) {
      throw Error(ErrorCode::boundary_eigenvalue, "a point lies within 1e-8 of the cluster circle");
    }
    if (dist < radius) c.members.push_back(i);
  }
  result.clusters.push_back(std::move(c));
  return result.clusters.size() - 1;
}

SpectralSubspace subspace(const Spec2Result& result, std::size_t cluster_id, SubspaceMethod method) {
  if (cluster_id >= result.clusters.size()) throw Error(ErrorCode::invalid_argument, "unknown cluster id");
  const Cluster& c = result.clusters[cluster_id];
  if (c.members.empty()) throw Error(ErrorCode::empty_subspace, "cluster has no points");
  const auto d = static_cast<Eigen::Index>(result.dim);
  const auto k = static_cast<Eigen::Index>(c.members.size());

  ComplexMatrix raw;
  if (method == SubspaceMethod::schur) {
    SchurForm form = result.schur;
    std::vector<std::size_t> positions;
    positions.reserve(c.members.size());
    for (std::size_t i : c.members) positions.push_back(result.schur_position[i]);
    (void)reorder_schur(form, positions);
    raw = form.balancing.unbalance(form.z.leftCols(k));
  } else {
    raw.resize(2 * d, k);
    for (Eigen::Index j = 0; j < k; ++j) {
      const Spec2Point& p = result.points[c.members[static_cast<std::size_t>(j)]];
      raw.col(j).head(d) = p.u;
      raw.col(j).tail(d) = p.v;
    }
  }

  SpectralSubspace out;
  out.count = c.members.size();
  Orthonormalized full = orthonormalize(raw, kRankTol);
  if (method == SubspaceMethod::eigenvectors && full.rank < out.count) {
    throw Error(ErrorCode::defective_cluster, "cluster of " + std::to_string(out.count) + " points has only " +
                                                  std::to_string(full.rank) + " independent eigenvectors");
  }
  out.full = std::move(full.basis);
  out.full_rank = full.rank;
  Orthonormalized plus = orthonormalize(out.full.topRows(d), kRankTol);
  Orthonormalized minus = orthonormalize(out.full.bottomRows(d), kRankTol);
  out.plus = std::move(plus.basis);
  out.plus_rank = plus.rank;
  out.minus = std::move(minus.basis);
  out.minus_rank = minus.rank;
  return out;
}

double residual_gamma(const GalerkinMatrices& g, const ComplexMatrix& v, Complex z) {
  if (v.cols() == 0) throw Error(ErrorCode::empty_subspace, "residual needs a nonempty subspace");
  if (v.rows() != g.m.rows()) throw Error(ErrorCode::invalid_argument, "subspace rows do not match trial dimension");
  const Complex w = z - g.alpha.value_or(0.0);
  const ComplexMatrix form = g.b - std::conj(w) * g.n - w * g.n.adjoint() + std::norm(w) * g.m;
  ComplexMatrix h = v.adjoint() * form * v;
  h = 0.5 * (h + h.adjoint()).eval();
  ComplexMatrix gram = v.adjoint() * g.m * v;
  gram = 0.5 * (gram + gram.adjoint()).eval();
  const HermitianPencilEig eig = eig_hermitian_pencil(h, gram);
  return std::sqrt(std::max(0.0, eig.values(0)));
}

}  // namespace spec2
