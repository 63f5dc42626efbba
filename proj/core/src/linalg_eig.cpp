// SPDX-License-Identifier: Apache-2.0
//
// Dense complex eigensolver: block-triangularizing permutation plus norm
// balancing, Householder Hessenberg reduction and single-shift complex QR per
// diagonal block (modelled on LAPACK zgehrd/zlahqr/ztrevc/ztrexc),
// eigenvector back-substitution and Schur reordering.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "spec2/error.hpp"
#include "spec2/linalg.hpp"

namespace spec2 {
namespace {

using Index = Eigen::Index;

constexpr double kUlp = std::numeric_limits<double>::epsilon();
constexpr double kSafeMin = std::numeric_limits<double>::min();

double cabs1(Complex z) { return std::abs(z.real()) + std::abs(z.imag()); }

// Strongly connected components of the graph with an edge i -> j whenever
// a(i, j) != 0, in an order that makes the permuted matrix block upper
// triangular. Iterative Tarjan; components come out sinks first, so the
// list is reversed at the end.
std::vector<std::vector<Index>> ordered_components(const ComplexMatrix& a) {
  const Index n = a.rows();
  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j && a(i, j) != Complex(0.0)) adj[static_cast<std::size_t>(i)].push_back(j);
    }
  }
  constexpr Index kUnvisited = -1;
  std::vector<Index> index(static_cast<std::size_t>(n), kUnvisited);
  std::vector<Index> low(static_cast<std::size_t>(n), 0);
  std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
  std::vector<Index> stack;
  std::vector<std::vector<Index>> comps;
  Index counter = 0;
  struct Frame {
    Index node;
    std::size_t next_edge;
  };
  for (Index root = 0; root < n; ++root) {
    if (index[static_cast<std::size_t>(root)] != kUnvisited) continue;
    std::vector<Frame> call{{root, 0}};
    index[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = counter++;
    stack.push_back(root);
    on_stack[static_cast<std::size_t>(root)] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto v = static_cast<std::size_t>(f.node);
      if (f.next_edge < adj[v].size()) {
        const Index w = adj[v][f.next_edge++];
        const auto wi = static_cast<std::size_t>(w);
        if (index[wi] == kUnvisited) {
          index[wi] = low[wi] = counter++;
          stack.push_back(w);
          on_stack[wi] = true;
          call.push_back({w, 0});
        } else if (on_stack[wi]) {
          low[v] = std::min(low[v], index[wi]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<Index> comp;
        Index w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(w)] = false;
          comp.push_back(w);
        } while (w != f.node);
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
      }
      const Index done = f.node;
      call.pop_back();
      if (!call.empty()) {
        const auto parent = static_cast<std::size_t>(call.back().node);
        low[parent] = std::min(low[parent], low[static_cast<std::size_t>(done)]);
      }
    }
  }
  std::reverse(comps.begin(), comps.end());
  return comps;
}

// Equalizes off-diagonal row and column norms inside [lo, hi) with powers of two.
void scale_block(ComplexMatrix& a, RealVector& scale, Index lo, Index hi) {
  if (hi - lo < 2) return;
  constexpr double kRadix = 2.0;
  const double sfmin = kSafeMin / kUlp;
  const double sfmax = 1.0 / sfmin;
  bool again = true;
  for (int sweep = 0; again && sweep < 200; ++sweep) {
    again = false;
    for (Index i = lo; i < hi; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (Index k = lo; k < hi; ++k) {
        if (k == i) continue;
        c += std::norm(a(k, i));
        r += std::norm(a(i, k));
      }
      c = std::sqrt(c);
      r = std::sqrt(r);
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      double g = r / kRadix;
      while (c < g && f < sfmax && c < sfmax) {
        f *= kRadix;
        c *= kRadix;
        r /= kRadix;
        g = r / kRadix;
      }
      g = c / kRadix;
      while (g >= r && f > sfmin && r < sfmax) {
        f /= kRadix;
        c /= kRadix;
        g /= kRadix;
        r *= kRadix;
      }
      if (c + r >= 0.95 * s) continue;
      scale(i) *= f;
      a.row(i) *= 1.0 / f;
      a.col(i) *= f;
      again = true;
    }
  }
}

Balancing identity_balancing(Index n) {
  Balancing bal;
  bal.perm.resize(static_cast<std::size_t>(n));
  std::iota(bal.perm.begin(), bal.perm.end(), std::size_t{0});
  bal.scale = RealVector::Ones(n);
  bal.block_starts = {0, static_cast<std::size_t>(n)};
  return bal;
}

Balancing balance(ComplexMatrix& a) {
  const Index n = a.rows();
  Balancing bal = identity_balancing(n);
  bal.block_starts.clear();
  std::vector<std::vector<Index>> comps = ordered_components(a);
  std::size_t pos = 0;
  for (const auto& comp : comps) {
    bal.block_starts.push_back(pos);
    for (Index v : comp) bal.perm[pos++] = static_cast<std::size_t>(v);
  }
  bal.block_starts.push_back(static_cast<std::size_t>(n));
  ComplexMatrix permuted(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      permuted(i, j) = a(static_cast<Index>(bal.perm[static_cast<std::size_t>(i)]),
                         static_cast<Index>(bal.perm[static_cast<std::size_t>(j)]));
    }
  }
  a = std::move(permuted);
  for (std::size_t k = 0; k + 1 < bal.block_starts.size(); ++k) {
    scale_block(a, bal.scale, static_cast<Index>(bal.block_starts[k]), static_cast<Index>(bal.block_starts[k + 1]));
  }
  return bal;
}

// Reduces a to upper Hessenberg form in place, accumulating the unitary factor.
void hessenberg(ComplexMatrix& a, ComplexMatrix& q) {
  const Index n = a.rows();
  q = ComplexMatrix::Identity(n, n);
  for (Index k = 0; k + 2 < n; ++k) {
    const Index len = n - k - 1;
    ComplexVector x = a.col(k).segment(k + 1, len);
    const Complex alpha = x(0);
    const double xnorm = x.tail(len - 1).norm();
    if (xnorm == 0.0) continue;
    const double norm = std::hypot(std::abs(alpha), xnorm);
    const double beta = alpha.real() >= 0.0 ? -norm : norm;
    const Complex tau((beta - alpha.real()) / beta, -alpha.imag() / beta);
    ComplexVector v = x / (alpha - beta);
    v(0) = 1.0;
    // H = I - tau v v^H; A <- H^H A H.
    {
      auto block = a.bottomRightCorner(len, n - k);
      Eigen::RowVectorXcd w = v.adjoint() * block;
      block.noalias() -= (std::conj(tau) * v) * w;
    }
    {
      auto block = a.rightCols(len);
      ComplexVector w = block * v;
      block.noalias() -= (tau * w) * v.adjoint();
    }
    {
      auto block = q.rightCols(len);
      ComplexVector w = block * v;
      block.noalias() -= (tau * w) * v.adjoint();
    }
    a(k + 1, k) = beta;
    a.col(k).tail(len - 1).setZero();
  }
}

// Two-element Householder generator: returns tau and overwrites (v0, v1) with
// (beta, v) so that (I - conj(tau) u u^H) (v0; v1) = (beta; 0), u = (1; v).
Complex larfg2(Complex& v0, Complex& v1) {
  const double xnorm = std::abs(v1);
  if (xnorm == 0.0 && v0.imag() == 0.0) return Complex(0.0);
  const double norm = std::hypot(std::abs(v0), xnorm);
  const double beta = v0.real() >= 0.0 ? -norm : norm;
  const Complex tau((beta - v0.real()) / beta, -v0.imag() / beta);
  v1 = v1 / (v0 - beta);
  v0 = beta;
  return tau;
}

// Single-shift QR on an upper Hessenberg matrix, full Schur form, updating z.
void hessenberg_qr(ComplexMatrix& h, ComplexMatrix& z) {
  const Index n = h.rows();
  if (n <= 1) return;
  constexpr int kExceptionalEvery = 10;
  constexpr double kExceptionalFactor = 0.75;
  const Index ilo = 0;
  const Index ihi = n - 1;

  for (Index j = ilo; j + 3 <= ihi; ++j) {
    h(j + 2, j) = 0.0;
    h(j + 3, j) = 0.0;
  }
  if (ilo + 2 <= ihi) h(ihi, ihi - 2) = 0.0;

  for (Index i = ilo + 1; i <= ihi; ++i) {
    if (h(i, i - 1).imag() != 0.0) {
      Complex sc = h(i, i - 1) / cabs1(h(i, i - 1));
      sc = std::conj(sc) / std::abs(sc);
      h(i, i - 1) = std::abs(h(i, i - 1));
      h.row(i).segment(i, n - i) *= sc;
      const Index last = std::min(n - 1, i + 1);
      h.col(i).head(last + 1) *= std::conj(sc);
      z.col(i) *= std::conj(sc);
    }
  }

  const Index nh = ihi - ilo + 1;
  const double smlnum = kSafeMin * (static_cast<double>(nh) / kUlp);
  const Index i1 = 0;
  const Index i2 = n - 1;
  const int itmax = 30 * static_cast<int>(std::max<Index>(10, nh));
  int kdefl = 0;

  Index i = ihi;
  while (i >= ilo) {
    Index l = ilo;
    bool converged = false;
    for (int its = 0; its <= itmax; ++its) {
      Index k = i;
      for (; k > l; --k) {
        if (cabs1(h(k, k - 1)) <= smlnum) break;
        double tst = cabs1(h(k - 1, k - 1)) + cabs1(h(k, k));
        if (tst == 0.0) {
          if (k - 2 >= ilo) tst += std::abs(h(k - 1, k - 2).real());
          if (k + 1 <= ihi) tst += std::abs(h(k + 1, k).real());
        }
        if (std::abs(h(k, k - 1).real()) <= kUlp * tst) break;
      }
      l = k;
      if (l > ilo) h(l, l - 1) = 0.0;
      if (l >= i) {
        converged = true;
        break;
      }
      ++kdefl;

      Complex t;
      if (kdefl % (2 * kExceptionalEvery) == 0) {
        t = kExceptionalFactor * std::abs(h(i, i - 1).real()) + h(i, i);
      } else if (kdefl % kExceptionalEvery == 0) {
        t = kExceptionalFactor * std::abs(h(l + 1, l).real()) + h(l, l);
      } else {
        t = h(i, i);
        const Complex u = std::sqrt(h(i - 1, i)) * std::sqrt(h(i, i - 1));
        double s = cabs1(u);
        if (s != 0.0) {
          const Complex x = 0.5 * (h(i - 1, i - 1) - t);
          const double sx = cabs1(x);
          s = std::max(s, sx);
          Complex y = s * std::sqrt((x / s) * (x / s) + (u / s) * (u / s));
          if (sx > 0.0) {
            const Complex xs = x / sx;
            if (xs.real() * y.real() + xs.imag() * y.imag() < 0.0) y = -y;
          }
          t -= u * (u / (x + y));
        }
      }

      // Look for two consecutive small subdiagonal elements.
      Index m = i - 1;
      Complex v0;
      Complex v1;
      for (;; --m) {
        const Complex h11 = h(m, m);
        const Complex h22 = h(m + 1, m + 1);
        Complex h11s = h11 - t;
        double h21 = h(m + 1, m).real();
        const double s = cabs1(h11s) + std::abs(h21);
        h11s /= s;
        h21 /= s;
        v0 = h11s;
        v1 = h21;
        if (m == l) break;
        const double h10 = h(m, m - 1).real();
        if (std::abs(h10) * std::abs(h21) <= kUlp * (cabs1(h11s) * (cabs1(h11) + cabs1(h22)))) break;
      }

      for (Index k2 = m; k2 <= i - 1; ++k2) {
        if (k2 > m) {
          v0 = h(k2, k2 - 1);
          v1 = h(k2 + 1, k2 - 1);
        }
        const Complex t1 = larfg2(v0, v1);
        if (k2 > m) {
          h(k2, k2 - 1) = v0;
          h(k2 + 1, k2 - 1) = 0.0;
        }
        const Complex v2 = v1;
        const double t2 = (t1 * v2).real();
        for (Index j = k2; j <= i2; ++j) {
          const Complex sum = std::conj(t1) * h(k2, j) + t2 * h(k2 + 1, j);
          h(k2, j) -= sum;
          h(k2 + 1, j) -= sum * v2;
        }
        for (Index j = i1; j <= std::min(k2 + 2, i); ++j) {
          const Complex sum = t1 * h(j, k2) + t2 * h(j, k2 + 1);
          h(j, k2) -= sum;
          h(j, k2 + 1) -= sum * std::conj(v2);
        }
        for (Index j = 0; j < n; ++j) {
          const Complex sum = t1 * z(j, k2) + t2 * z(j, k2 + 1);
          z(j, k2) -= sum;
          z(j, k2 + 1) -= sum * std::conj(v2);
        }
        if (k2 == m && m > l) {
          // Keep h(m, m-1) real after starting the sweep below row l.
          Complex temp = 1.0 - t1;
          temp /= std::abs(temp);
          h(m + 1, m) *= std::conj(temp);
          if (m + 2 <= i) h(m + 2, m + 1) *= temp;
          for (Index j = m; j <= i; ++j) {
            if (j == m + 1) continue;
            if (i2 > j) h.row(j).segment(j + 1, i2 - j) *= temp;
            h.col(j).segment(i1, j - i1) *= std::conj(temp);
            z.col(j) *= std::conj(temp);
          }
        }
      }

      Complex temp = h(i, i - 1);
      if (temp.imag() != 0.0) {
        const double rtemp = std::abs(temp);
        h(i, i - 1) = rtemp;
        temp /= rtemp;
        if (i2 > i) h.row(i).segment(i + 1, i2 - i) *= std::conj(temp);
        h.col(i).segment(i1, i - i1) *= temp;
        z.col(i) *= temp;
      }
    }
    if (!converged) {
      throw Error(ErrorCode::no_convergence,
                  "QR iteration did not deflate row " + std::to_string(i) + " within " +
                      std::to_string(itmax) + " iterations");
    }
    kdefl = 0;
    i = l - 1;
  }
  // Entries below the diagonal are zero up to the deflation tests; make it exact.
  for (Index c = 0; c < n; ++c) h.col(c).tail(n - c - 1).setZero();
}

// Back substitution for the eigenvector of upper-triangular t at diagonal k.
ComplexVector triangular_eigenvector(const ComplexMatrix& t, Index k, double smin) {
  const Index n = t.rows();
  ComplexVector x = ComplexVector::Zero(n);
  x(k) = 1.0;
  const Complex lambda = t(k, k);
  constexpr double kBig = 1e150;
  for (Index j = k - 1; j >= 0; --j) {
    Complex rhs = 0.0;
    for (Index l = j + 1; l <= k; ++l) rhs -= t(j, l) * x(l);
    Complex denom = t(j, j) - lambda;
    if (std::abs(denom) < smin) denom = smin;
    const double arhs = std::abs(rhs);
    if (arhs > 1.0 && arhs >= std::abs(denom) * kBig) {
      x *= 1.0 / arhs;
      rhs *= 1.0 / arhs;
    }
    x(j) = rhs / denom;
    if (std::abs(x(j)) > kBig) x *= 1.0 / std::abs(x(j));
  }
  return x;
}

void rotate(Eigen::Ref<Eigen::RowVectorXcd> x, Eigen::Ref<Eigen::RowVectorXcd> y, double c, Complex s) {
  for (Index j = 0; j < x.size(); ++j) {
    const Complex xj = x(j);
    const Complex yj = y(j);
    x(j) = c * xj + s * yj;
    y(j) = c * yj - std::conj(s) * xj;
  }
}

void rotate_cols(ComplexMatrix& a, Index p, Index q, Index rows, double c, Complex s) {
  for (Index j = 0; j < rows; ++j) {
    const Complex xj = a(j, p);
    const Complex yj = a(j, q);
    a(j, p) = c * xj + s * yj;
    a(j, q) = c * yj - std::conj(s) * xj;
  }
}

// Plane rotation [c s; -conj(s) c] mapping (f, g) to (r, 0).
void givens(Complex f, Complex g, double& c, Complex& s) {
  if (g == Complex(0.0)) {
    c = 1.0;
    s = 0.0;
    return;
  }
  if (f == Complex(0.0)) {
    c = 0.0;
    s = std::conj(g) / std::abs(g);
    return;
  }
  const double af = std::abs(f);
  const double d = std::hypot(af, std::abs(g));
  c = af / d;
  s = (f / af) * std::conj(g) / d;
}

// Swaps diagonal entries k and k+1 of the Schur form.
void swap_adjacent(SchurForm& form, Index k) {
  ComplexMatrix& t = form.t;
  const Index n = t.rows();
  const Complex t11 = t(k, k);
  const Complex t22 = t(k + 1, k + 1);
  double c = 1.0;
  Complex s = 0.0;
  givens(t(k, k + 1), t22 - t11, c, s);
  if (k + 2 < n) {
    Eigen::RowVectorXcd rk = t.row(k).segment(k + 2, n - k - 2);
    Eigen::RowVectorXcd rk1 = t.row(k + 1).segment(k + 2, n - k - 2);
    rotate(rk, rk1, c, s);
    t.row(k).segment(k + 2, n - k - 2) = rk;
    t.row(k + 1).segment(k + 2, n - k - 2) = rk1;
  }
  rotate_cols(t, k, k + 1, k, c, std::conj(s));
  t(k, k) = t22;
  t(k + 1, k + 1) = t11;
  rotate_cols(form.z, k, k + 1, form.z.rows(), c, std::conj(s));
}

}  // namespace

ComplexMatrix Balancing::unbalance(const ComplexMatrix& x) const {
  ComplexMatrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    out.row(static_cast<Index>(perm[i])) = scale(static_cast<Index>(i)) * x.row(static_cast<Index>(i));
  }
  return out;
}

SchurForm schur(const ComplexMatrix& s, const EigOptions& options) {
  if (s.rows() != s.cols()) throw Error(ErrorCode::invalid_argument, "schur needs a square matrix");
  require_finite(s, "eigenvalue input");
  SchurForm form;
  form.t = s;
  const Index n = s.rows();
  form.balancing = options.balance ? balance(form.t) : identity_balancing(n);
  form.z = ComplexMatrix::Identity(n, n);
  const auto& starts = form.balancing.block_starts;
  for (std::size_t k = 0; k + 1 < starts.size(); ++k) {
    const auto lo = static_cast<Index>(starts[k]);
    const Index nb = static_cast<Index>(starts[k + 1]) - lo;
    if (nb == 1) continue;
    ComplexMatrix block = form.t.block(lo, lo, nb, nb);
    ComplexMatrix q;
    hessenberg(block, q);
    hessenberg_qr(block, q);
    form.t.block(lo, lo, nb, nb) = block;
    const Index right = n - lo - nb;
    if (right > 0) form.t.block(lo, lo + nb, nb, right) = q.adjoint() * form.t.block(lo, lo + nb, nb, right);
    if (lo > 0) form.t.block(0, lo, lo, nb) = form.t.block(0, lo, lo, nb) * q;
    form.z.block(lo, lo, nb, nb) = q;
  }
  return form;
}

std::vector<std::size_t> reorder_schur(SchurForm& form, const std::vector<std::size_t>& positions) {
  const std::size_t n = form.dim();
  std::vector<std::size_t> where(n);   // old index -> current position
  std::vector<std::size_t> who(n);     // current position -> old index
  std::iota(where.begin(), where.end(), std::size_t{0});
  std::iota(who.begin(), who.end(), std::size_t{0});
  std::vector<bool> seen(n, false);
  std::size_t target = 0;
  for (std::size_t old : positions) {
    if (old >= n || seen[old]) {
      throw Error(ErrorCode::invalid_argument, "reorder_schur: bad or repeated position");
    }
    seen[old] = true;
    for (std::size_t p = where[old]; p > target; --p) {
      swap_adjacent(form, static_cast<Index>(p - 1));
      std::swap(who[p - 1], who[p]);
      where[who[p - 1]] = p - 1;
      where[who[p]] = p;
    }
    ++target;
  }
  return where;
}

ComplexMatrix schur_eigenvectors(const SchurForm& form) {
  const Index n = form.t.rows();
  ComplexMatrix vectors(n, n);
  if (n == 0) return vectors;
  const double smlnum = kSafeMin * (static_cast<double>(n) / kUlp);
  for (Index k = 0; k < n; ++k) {
    const double smin = std::max(kUlp * cabs1(form.t(k, k)), smlnum);
    ComplexVector x = triangular_eigenvector(form.t, k, smin);
    ComplexVector y = form.z * x;
    ComplexVector v = form.balancing.unbalance(y);
    const double nv = v.norm();
    if (nv > 0.0) v *= 1.0 / nv;
    vectors.col(k) = v;
  }
  return vectors;
}

EigenPairs eig_dense(const ComplexMatrix& s, bool want_vectors, const EigOptions& options) {
  SchurForm form = schur(s, options);
  const Index n = form.t.rows();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return lex_less(form.t(a, a), form.t(b, b)); });

  EigenPairs out;
  out.values.reserve(order.size());
  for (Index k : order) out.values.push_back(form.t(k, k));
  if (!want_vectors) return out;

  const ComplexMatrix raw = schur_eigenvectors(form);
  ComplexMatrix vectors(n, n);
  const double snorm = s.norm();
  out.backward_errors.reserve(order.size());
  for (std::size_t c = 0; c < order.size(); ++c) {
    const Index k = order[c];
    vectors.col(static_cast<Index>(c)) = raw.col(k);
    const double resid = (s * raw.col(k) - form.t(k, k) * raw.col(k)).norm();
    const double be = snorm > 0.0 ? resid / snorm : resid;
    if (!(be <= options.tol_eig)) {
      throw Error(ErrorCode::no_convergence, "eigenpair backward error " + std::to_string(be) +
                                                 " exceeds tolerance " + std::to_string(options.tol_eig));
    }
    out.backward_errors.push_back(be);
  }
  out.vectors = std::move(vectors);
  return out;
}

}  // namespace spec2
