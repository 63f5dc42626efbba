// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "spec2/error.hpp"
#include "spec2/linalg.hpp"

using namespace spec2;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double kUlp = std::numeric_limits<double>::epsilon();

ComplexMatrix make(std::initializer_list<std::initializer_list<Complex>> rows) {
  ComplexMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (Complex v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("cholesky of small matrices", "[linalg][cholesky]") {
  ComplexMatrix d = ComplexMatrix::Identity(2, 2) * 2.0;
  ComplexMatrix r = cholesky(d);
  CHECK_THAT(r(0, 0).real(), WithinAbs(std::sqrt(2.0), 1e-15));
  CHECK_THAT(r(1, 1).real(), WithinAbs(std::sqrt(2.0), 1e-15));
  CHECK(std::abs(r(0, 1)) == 0.0);

  CHECK(cholesky(ComplexMatrix::Identity(3, 3)).isApprox(ComplexMatrix::Identity(3, 3)));

  const ComplexMatrix m = make({{2.0, 1.0}, {1.0, 2.0}});
  r = cholesky(m);
  CHECK((r.adjoint() * r - m).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(std::abs(r(1, 0)) == 0.0);
}

TEST_CASE("cholesky rejects singular and non-Hermitian input", "[linalg][cholesky]") {
  const ComplexMatrix singular = make({{1.0, 1.0}, {1.0, 1.0}});
  try {
    (void)cholesky(singular);
    FAIL("expected NotPositiveDefinite");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_positive_definite);
  }
  CHECK_THROWS_AS(cholesky(make({{1.0, 2.0}, {0.0, 1.0}})), Error);
  ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(cholesky(bad), Error);
}

TEST_CASE("cholesky factor reproduces random Hermitian positive definite matrices", "[linalg][cholesky][property]") {
  oracle::Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index d = 1 + trial * 63 / 39;
    const ComplexMatrix m = oracle::random_hpd(rng, d);
    const ComplexMatrix r = cholesky(m);
    const double rel = (r.adjoint() * r - m).norm() / m.norm();
    INFO("d = " << d);
    CHECK(rel <= 64.0 * static_cast<double>(d) * kUlp);
    const ComplexMatrix b = oracle::random_matrix(rng, d, 2);
    CHECK((m * cholesky_solve(r, b) - b).norm() <= 1e-10 * m.norm() * b.norm());
  }
}

TEST_CASE("hermitian_check reports asymmetry and definiteness", "[linalg]") {
  const auto report = hermitian_check(make({{2.0, 1.0}, {1.0 + 1e-3, 2.0}}));
  CHECK_THAT(report.max_asymmetry, WithinAbs(1e-3, 1e-15));
  CHECK(report.is_psd_hint);
  CHECK_FALSE(hermitian_check(make({{1.0, 0.0}, {0.0, -1.0}})).is_psd_hint);
}

TEST_CASE("eig_dense small examples", "[linalg][eig]") {
  auto values = eig_dense(make({{0.0, 1.0}, {1.0, 0.0}}), false).values;
  REQUIRE(values.size() == 2);
  CHECK_THAT(values[0].real(), WithinAbs(-1.0, 1e-14));
  CHECK_THAT(values[1].real(), WithinAbs(1.0, 1e-14));

  // Real parts of the pair are rounding noise, so compare as a set.
  values = eig_dense(make({{0.0, -1.0}, {1.0, 0.0}}), false).values;
  CHECK(oracle::matched_distance(values, {Complex(0.0, -1.0), Complex(0.0, 1.0)}) <= 1e-14);

  // Characteristic polynomial z^3 - 2z.
  const auto pairs = eig_dense(make({{0.0, 1.0, 0.0}, {1.0, 0.0, 1.0}, {0.0, 1.0, 0.0}}), true);
  CHECK(std::abs(pairs.values[0] + std::sqrt(2.0)) <= 1e-12);
  CHECK(std::abs(pairs.values[1]) <= 1e-12);
  CHECK(std::abs(pairs.values[2] - std::sqrt(2.0)) <= 1e-12);
  REQUIRE(pairs.vectors.has_value());
  for (Eigen::Index k = 0; k < 3; ++k) CHECK_THAT(pairs.vectors->col(k).norm(), WithinAbs(1.0, 1e-14));
}

TEST_CASE("eig_dense keeps nilpotent and triangular structure exact", "[linalg][eig]") {
  for (Eigen::Index n : {1, 2, 5, 17, 33}) {
    ComplexMatrix down = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 1; i < n; ++i) down(i, i - 1) = 1.0;
    for (Complex z : eig_dense(down, true).values) CHECK(z == Complex(0.0));
  }
  oracle::Rng rng(3);
  ComplexMatrix upper = oracle::random_matrix(rng, 6, 6).triangularView<Eigen::Upper>();
  const auto values = eig_dense(upper, false).values;
  std::vector<Complex> diag;
  for (Eigen::Index i = 0; i < 6; ++i) diag.push_back(upper(i, i));
  std::sort(diag.begin(), diag.end(), lex_less);
  for (std::size_t k = 0; k < 6; ++k) CHECK(values[k] == diag[k]);
}

TEST_CASE("eig_dense backward errors and agreement with an independent solver", "[linalg][eig][property]") {
  oracle::Rng rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index d = 1 + (trial * 7) % 64;
    ComplexMatrix s = oracle::random_matrix(rng, d, d);
    if (trial % 4 == 1) s = s.triangularView<Eigen::Upper>();
    if (trial % 4 == 2) {
      for (Eigen::Index i = 0; i < d; ++i) s.row(i) *= std::pow(10.0, static_cast<double>(i % 5) - 2.0);
    }
    INFO("trial " << trial << " d = " << d);
    const EigenPairs pairs = eig_dense(s, true);
    REQUIRE(pairs.values.size() == static_cast<std::size_t>(d));
    const double snorm = s.norm();
    for (std::size_t k = 0; k < pairs.values.size(); ++k) {
      const ComplexVector v = pairs.vectors->col(static_cast<Eigen::Index>(k));
      CHECK_THAT(v.norm(), WithinAbs(1.0, 1e-12));
      CHECK((s * v - pairs.values[k] * v).norm() <= 1e-10 * snorm);
      CHECK(pairs.backward_errors[k] <= 1e-10);
    }
    CHECK(oracle::matched_distance(pairs.values, oracle::reference_eigenvalues(s)) <= 1e-8 * snorm);
  }
}

TEST_CASE("eig_dense is invariant under similarity and permutation", "[linalg][eig][property]") {
  oracle::Rng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index d = 2 + trial % 40;
    const ComplexMatrix s = oracle::random_matrix(rng, d, d);
    const ComplexMatrix p = oracle::random_well_conditioned(rng, d);
    const ComplexMatrix similar = p * s * p.inverse();
    const auto a = eig_dense(s, false).values;
    const auto b = eig_dense(similar, false).values;
    CHECK(oracle::matched_distance(a, b) <= 1e-8 * std::max(1.0, s.norm()));

    std::vector<Eigen::Index> perm(static_cast<std::size_t>(d));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    ComplexMatrix permuted(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) permuted(i, j) = s(perm[i], perm[j]);
    }
    CHECK(oracle::matched_distance(a, eig_dense(permuted, false).values) <= 1e-10 * s.norm());
  }
}

TEST_CASE("eig_dense without balancing still converges", "[linalg][eig]") {
  oracle::Rng rng(5);
  const ComplexMatrix s = oracle::random_matrix(rng, 20, 20);
  const auto pairs = eig_dense(s, true, EigOptions{false, 1e-10});
  CHECK(oracle::matched_distance(pairs.values, oracle::reference_eigenvalues(s)) <= 1e-10 * s.norm());
}

TEST_CASE("reorder_schur moves chosen eigenvalues to an invariant leading block", "[linalg][schur]") {
  oracle::Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index n = 4 + trial;
    const ComplexMatrix s = oracle::random_matrix(rng, n, n);
    SchurForm form = schur(s);
    const ComplexVector before = form.eigenvalues();
    const std::vector<std::size_t> chosen{static_cast<std::size_t>(n - 1), 1, static_cast<std::size_t>(n / 2)};
    const auto where = reorder_schur(form, chosen);
    for (std::size_t k = 0; k < chosen.size(); ++k) {
      CHECK(where[chosen[k]] == k);
      CHECK(std::abs(form.t(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) -
                     before(static_cast<Eigen::Index>(chosen[k]))) <= 1e-12 * s.norm());
    }
    // Lower triangle stays zero and Z stays unitary.
    CHECK(form.t.triangularView<Eigen::StrictlyLower>().toDenseMatrix().norm() == 0.0);
    CHECK((form.z.adjoint() * form.z - ComplexMatrix::Identity(n, n)).norm() <= 1e-12);
    // Leading block spans an invariant subspace of s.
    const ComplexMatrix x = form.balancing.unbalance(form.z.leftCols(3));
    const ComplexMatrix q = orthonormalize(x).basis;
    CHECK((s * q - q * (q.adjoint() * s * q)).norm() <= 1e-10 * s.norm());
  }
}

TEST_CASE("eig_hermitian_pencil examples", "[linalg][hermitian]") {
  const ComplexMatrix h = make({{3.0, 0.0}, {0.0, 1.0}});
  auto eig = eig_hermitian_pencil(h, ComplexMatrix::Identity(2, 2));
  CHECK_THAT(eig.values(0), WithinAbs(1.0, 1e-14));
  CHECK_THAT(eig.values(1), WithinAbs(3.0, 1e-14));

  oracle::Rng rng(4);
  const ComplexMatrix m = oracle::random_hpd(rng, 5);
  eig = eig_hermitian_pencil(m, m);
  for (Eigen::Index k = 0; k < 5; ++k) CHECK_THAT(eig.values(k), WithinAbs(1.0, 1e-12));

  // det(H - l M) = 0 with H = [[2,1],[1,2]], M = diag(1,4): 4 l^2 - 10 l + 3 = 0.
  eig = eig_hermitian_pencil(make({{2.0, 1.0}, {1.0, 2.0}}), make({{1.0, 0.0}, {0.0, 4.0}}));
  const auto [r1, r2] = oracle::quadratic_roots(4.0, -10.0, 3.0);
  CHECK_THAT(eig.values(0), WithinAbs(std::min(r1.real(), r2.real()), 1e-14));
  CHECK_THAT(eig.values(1), WithinAbs(std::max(r1.real(), r2.real()), 1e-14));

  CHECK_THROWS_AS(eig_hermitian_pencil(h, make({{1.0, 0.0}, {0.0, 0.0}})), Error);
}

TEST_CASE("eig_hermitian_pencil agrees with eig_dense on the reduced matrix", "[linalg][hermitian][property]") {
  oracle::Rng rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::Index d = 1 + trial;
    const ComplexMatrix x = oracle::random_matrix(rng, d, d);
    const ComplexMatrix h = x + x.adjoint();
    const ComplexMatrix m = oracle::random_hpd(rng, d);
    const auto eig = eig_hermitian_pencil(h, m);
    const ComplexMatrix r = cholesky(m);
    const auto upper = r.triangularView<Eigen::Upper>();
    const ComplexMatrix reduced = upper.adjoint().solve(upper.adjoint().solve(h).adjoint()).adjoint();
    const auto dense = eig_dense(reduced, false).values;
    for (Eigen::Index k = 0; k < d; ++k) {
      CHECK(std::abs(dense[static_cast<std::size_t>(k)] - eig.values(k)) <= 1e-10 * std::max(1.0, h.norm()));
      const ComplexVector v = eig.vectors.col(k);
      CHECK((h * v - eig.values(k) * (m * v)).norm() <= 1e-10 * (h.norm() + m.norm()) * v.norm());
    }
    CHECK((eig.vectors.adjoint() * m * eig.vectors - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("subspace_gap examples", "[linalg][gap]") {
  const ComplexMatrix e1 = ComplexMatrix::Identity(3, 1);
  ComplexMatrix e2 = ComplexMatrix::Zero(3, 1);
  e2(1, 0) = 1.0;
  auto g = subspace_gap(e1, e1);
  CHECK(g.forward == 0.0);
  CHECK(g.symmetric == 0.0);
  g = subspace_gap(e1, e2);
  CHECK_THAT(g.forward, WithinAbs(1.0, 1e-15));
  CHECK_THAT(g.backward, WithinAbs(1.0, 1e-15));
  const double eps = 0.3;
  ComplexMatrix tilted = ComplexMatrix::Zero(3, 1);
  tilted(0, 0) = std::sqrt(1.0 - eps * eps);
  tilted(1, 0) = eps;
  g = subspace_gap(e1, tilted);
  CHECK_THAT(g.forward, WithinAbs(0.3, 1e-15));
  CHECK_THAT(g.symmetric, WithinAbs(0.3, 1e-15));

  // Unequal dimensions: the larger space is never inside the smaller one.
  g = subspace_gap(ComplexMatrix::Identity(3, 2), e1);
  CHECK_THAT(g.forward, WithinAbs(1.0, 1e-15));
  CHECK_THAT(g.backward, WithinAbs(0.0, 1e-15));

  CHECK_THROWS_AS(subspace_gap(ComplexMatrix(3, 0), e1), Error);
}

TEST_CASE("subspace_gap matches principal angles", "[linalg][gap][property]") {
  oracle::Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 3 + trial % 20;
    const Eigen::Index k = 1 + trial % std::min<Eigen::Index>(n - 1, 6);
    const ComplexMatrix u = oracle::random_matrix(rng, n, k);
    // Mix in a nearby subspace for small angles as well as unrelated ones.
    const double weight = (trial % 3 == 0) ? 1e-3 : 1.0;
    const ComplexMatrix v = u + weight * oracle::random_matrix(rng, n, k);
    const auto g = subspace_gap(u, v);
    CHECK(std::abs(g.forward - oracle::principal_angle_gap(u, v)) <= 1e-12);
    CHECK(std::abs(g.forward - g.backward) <= 1e-12);
    CHECK(g.forward >= 0.0);
    CHECK(g.forward <= 1.0);
  }
}

TEST_CASE("orthonormalize reports numerical rank", "[linalg]") {
  oracle::Rng rng(6);
  const ComplexMatrix a = oracle::random_matrix(rng, 8, 3);
  ComplexMatrix x(8, 5);
  x << a, a.col(0) + a.col(1), 2.0 * a.col(2);
  const auto o = orthonormalize(x);
  CHECK(o.rank == 3);
  CHECK(o.input_columns == 5);
  CHECK((o.basis.adjoint() * o.basis - ComplexMatrix::Identity(3, 3)).norm() <= 1e-13);
  CHECK(orthonormalize(ComplexMatrix::Zero(4, 2)).rank == 0);
  CHECK_THAT(spectral_norm(ComplexMatrix::Identity(3, 3) * 2.0), WithinAbs(2.0, 1e-14));
}
