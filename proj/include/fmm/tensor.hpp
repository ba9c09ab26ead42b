#pragma once

#include "fmm/matrix.hpp"
#include "fmm/rational.hpp"
#include "fmm/rings.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fmm {

struct MatShape {
  std::size_t m = 1, k = 1, n = 1;
  friend bool operator==(const MatShape&, const MatShape&) = default;
  std::string str() const { return std::to_string(m) + "x" + std::to_string(k) + "x" + std::to_string(n); }
};

// A <m,k,n;r> bilinear algorithm. Row t of L is the row-major vec of the t-th
// left factor (m x k), row t of R that of the right factor (k x n), and column
// t of P is the row-major vec of the transposed product factor: P(i*n + j, t)
// is the coefficient of product t in C(i,j).
template <class T>
struct LrpDecomposition {
  MatShape shape;
  Matrix<T> L, R, P;

  LrpDecomposition() = default;
  LrpDecomposition(MatShape s, Matrix<T> l, Matrix<T> r, Matrix<T> p)
      : shape(s), L(std::move(l)), R(std::move(r)), P(std::move(p)) {
    validate();
  }

  std::size_t rank() const { return L.rows(); }

  void validate() const {
    const std::size_t r = L.rows();
    if (shape.m == 0 || shape.k == 0 || shape.n == 0) throw std::invalid_argument("shape dimensions must be >= 1");
    if (L.cols() != shape.m * shape.k || R.cols() != shape.k * shape.n || P.rows() != shape.m * shape.n ||
        R.rows() != r || P.cols() != r)
      throw std::invalid_argument("LRP matrices do not match shape " + shape.str() + ": L " +
                                  std::to_string(L.rows()) + "x" + std::to_string(L.cols()) + ", R " +
                                  std::to_string(R.rows()) + "x" + std::to_string(R.cols()) + ", P " +
                                  std::to_string(P.rows()) + "x" + std::to_string(P.cols()));
  }

  friend bool operator==(const LrpDecomposition& a, const LrpDecomposition& b) {
    return a.shape == b.shape && a.L == b.L && a.R == b.R && a.P == b.P;
  }
};

// Infers (m,k,n) from matrix dimensions: mk, kn, mn.
inline MatShape infer_shape(std::size_t mk, std::size_t kn, std::size_t mn) {
  for (std::size_t m = 1; m <= mk; ++m) {
    if (mk % m || mn % m) continue;
    std::size_t k = mk / m, n = mn / m;
    if (k * n == kn) return {m, k, n};
  }
  throw std::invalid_argument("cannot infer a shape from factor sizes " + std::to_string(mk) + ", " +
                              std::to_string(kn) + ", " + std::to_string(mn));
}

// One summand A (x) B (x) C with A m x k, B k x n and C n x m: C is the factor
// as it appears in the trace form Tr(ABC), the transpose of the m x n
// coefficient pattern of the product.
template <class T>
struct RankOneTensor {
  Matrix<T> A, B, C;
  friend bool operator==(const RankOneTensor&, const RankOneTensor&) = default;
};

template <class T>
RankOneTensor<T> term(const LrpDecomposition<T>& d, std::size_t t) {
  const auto [m, k, n] = d.shape;
  RankOneTensor<T> x{Matrix<T>(m, k), Matrix<T>(k, n), Matrix<T>(n, m)};
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j) x.A(i, j) = d.L(t, i * k + j);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < n; ++j) x.B(i, j) = d.R(t, i * n + j);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) x.C(j, i) = d.P(i * n + j, t);
  return x;
}

template <class T>
LrpDecomposition<T> from_terms(MatShape s, const std::vector<RankOneTensor<T>>& terms) {
  const std::size_t r = terms.size();
  Matrix<T> L(r, s.m * s.k), R(r, s.k * s.n), P(s.m * s.n, r);
  for (std::size_t t = 0; t < r; ++t) {
    const auto& x = terms[t];
    if (x.A.rows() != s.m || x.A.cols() != s.k || x.B.rows() != s.k || x.B.cols() != s.n || x.C.rows() != s.n ||
        x.C.cols() != s.m)
      throw std::invalid_argument("rank-one term " + std::to_string(t) + " does not match shape " + s.str());
    for (std::size_t i = 0; i < s.m; ++i)
      for (std::size_t j = 0; j < s.k; ++j) L(t, i * s.k + j) = x.A(i, j);
    for (std::size_t i = 0; i < s.k; ++i)
      for (std::size_t j = 0; j < s.n; ++j) R(t, i * s.n + j) = x.B(i, j);
    for (std::size_t i = 0; i < s.m; ++i)
      for (std::size_t j = 0; j < s.n; ++j) P(i * s.n + j, t) = x.C(j, i);
  }
  return {s, std::move(L), std::move(R), std::move(P)};
}

// ============================================================================
// contraction: vec(C) = P ((L vec A) .* (R vec B))

template <Ring Rg>
Matrix<value_t<Rg>> contract_bilinear(const Rg& ring, const LrpDecomposition<Rational>& d,
                                      const Matrix<value_t<Rg>>& A, const Matrix<value_t<Rg>>& B) {
  using V = value_t<Rg>;
  const auto [m, k, n] = d.shape;
  if (A.rows() != m || A.cols() != k || B.rows() != k || B.cols() != n)
    throw std::invalid_argument("contract_bilinear: operands do not match shape " + d.shape.str());
  auto lin = [&](const Matrix<Rational>& M, std::size_t t, const std::vector<V>& x) {
    V s = ring.zero();
    for (std::size_t j = 0; j < M.cols(); ++j)
      if (!M(t, j).is_zero()) s = ring.add(s, ring.mul_const(x[j], ring.from_rational(M(t, j))));
    return s;
  };
  std::vector<V> prod(d.rank());
  for (std::size_t t = 0; t < d.rank(); ++t) prod[t] = ring.mul(lin(d.L, t, A.data()), lin(d.R, t, B.data()));
  Matrix<V> C(m, n, ring.zero());
  for (std::size_t i = 0; i < m * n; ++i) C.data()[i] = lin(d.P, i, prod);
  return C;
}

template <class T>
Matrix<T> contract_bilinear(const LrpDecomposition<T>& d, const Matrix<T>& A, const Matrix<T>& B) {
  const auto [m, k, n] = d.shape;
  if (A.rows() != m || A.cols() != k || B.rows() != k || B.cols() != n)
    throw std::invalid_argument("contract_bilinear: operands do not match shape " + d.shape.str());
  Matrix<T> va(m * k, 1, A.data()), vb(k * n, 1, B.data());
  Matrix<T> l = d.L * va, r = d.R * vb, p(d.rank(), 1);
  for (std::size_t t = 0; t < d.rank(); ++t) p(t, 0) = l(t, 0) * r(t, 0);
  return Matrix<T>(m, n, (d.P * p).data());
}

// ============================================================================
// exhaustive check against the matrix-multiplication tensor

template <class T>
struct TensorCheck {
  bool ok = true;
  std::array<std::size_t, 6> sextuple{};  // 1-based (i1,i2,j1,j2,k1,k2)
  T value{}, expected{};
  explicit operator bool() const { return ok; }
  std::string witness() const {
    std::ostringstream os;
    os << "(" << sextuple[0] << "," << sextuple[1] << "," << sextuple[2] << "," << sextuple[3] << ","
       << sextuple[4] << "," << sextuple[5] << ") value=" << value << " expected=" << expected;
    return os.str();
  }
};

// For every (i1,i2) of A, (j1,j2) of B and (k1,k2) of C:
//   sum_t L(t, i1 k + i2) R(t, j1 n + j2) P(k1 n + k2, t) = [i2 = j1][k1 = i1][k2 = j2]
// which is what C(k1,k2) = sum_l A(k1,l) B(l,k2) requires. The first violation in
// lexicographic order is reported.
template <class T>
TensorCheck<T> verify_mm_tensor(const LrpDecomposition<T>& d) {
  const auto [m, k, n] = d.shape;
  const std::size_t na = m * k, nb = k * n, nc = m * n;
  const T zero(0);
  std::vector<T> acc(na * nb * nc, zero);
  std::vector<std::pair<std::size_t, T>> lt, rt, pt;
  for (std::size_t t = 0; t < d.rank(); ++t) {
    lt.clear();
    rt.clear();
    pt.clear();
    for (std::size_t a = 0; a < na; ++a)
      if (!(d.L(t, a) == zero)) lt.emplace_back(a, d.L(t, a));
    for (std::size_t b = 0; b < nb; ++b)
      if (!(d.R(t, b) == zero)) rt.emplace_back(b, d.R(t, b));
    for (std::size_t c = 0; c < nc; ++c)
      if (!(d.P(c, t) == zero)) pt.emplace_back(c, d.P(c, t));
    for (const auto& [a, x] : lt)
      for (const auto& [b, y] : rt) {
        T xy = x * y;
        for (const auto& [c, z] : pt) {
          T& s = acc[(a * nb + b) * nc + c];
          s = s + xy * z;
        }
      }
  }
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t b = 0; b < nb; ++b)
      for (std::size_t c = 0; c < nc; ++c) {
        std::size_t i1 = a / k, i2 = a % k, j1 = b / n, j2 = b % n, k1 = c / n, k2 = c % n;
        T want = (i2 == j1 && k1 == i1 && k2 == j2) ? T(1) : zero;
        const T& got = acc[(a * nb + b) * nc + c];
        if (!(got == want)) return {false, {i1 + 1, i2 + 1, j1 + 1, j2 + 1, k1 + 1, k2 + 1}, got, want};
      }
  return {};
}

// ============================================================================
// type polynomial: sum over terms of X^rank(A) Y^rank(B) Z^rank(C)

struct TypePolynomial {
  std::map<std::array<std::size_t, 3>, std::size_t> terms;

  std::size_t total() const {
    std::size_t s = 0;
    for (const auto& [e, c] : terms) s += c;
    return s;
  }
  std::size_t coefficient(std::size_t x, std::size_t y, std::size_t z) const {
    auto it = terms.find({x, y, z});
    return it == terms.end() ? 0 : it->second;
  }
  friend bool operator==(const TypePolynomial&, const TypePolynomial&) = default;

  // highest total degree first, e.g. "16X2Y2Z2+32XYZ"
  std::string str() const {
    std::vector<std::pair<std::array<std::size_t, 3>, std::size_t>> v(terms.begin(), terms.end());
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
      auto da = a.first[0] + a.first[1] + a.first[2], db = b.first[0] + b.first[1] + b.first[2];
      return da != db ? da > db : a.first > b.first;
    });
    std::string s;
    for (const auto& [e, c] : v) {
      if (!s.empty()) s += "+";
      std::string mono;
      const char* var = "XYZ";
      for (int i = 0; i < 3; ++i) {
        if (e[static_cast<std::size_t>(i)] == 0) continue;
        mono += var[i];
        if (e[static_cast<std::size_t>(i)] > 1) mono += std::to_string(e[static_cast<std::size_t>(i)]);
      }
      if (c != 1 || mono.empty()) s += std::to_string(c);
      s += mono;
    }
    return s.empty() ? "0" : s;
  }
};

template <class T>
TypePolynomial tensor_type(const LrpDecomposition<T>& d) {
  TypePolynomial tp;
  for (std::size_t t = 0; t < d.rank(); ++t) {
    auto x = term(d, t);
    ++tp.terms[{rank(x.A), rank(x.B), rank(x.C)}];
  }
  return tp;
}

// ============================================================================
// equality up to summand permutation and scalings (a,b,c) with abc = 1

namespace detail {

// scale A and B so their first nonzero entry is 1; C absorbs the product
template <class T>
std::string normalized_term_key(const LrpDecomposition<T>& d, std::size_t t) {
  const T zero(0);
  auto first_nonzero = [&](const Matrix<T>& M, bool by_row) -> T {
    std::size_t len = by_row ? M.cols() : M.rows();
    for (std::size_t j = 0; j < len; ++j) {
      const T& v = by_row ? M(t, j) : M(j, t);
      if (!(v == zero)) return v;
    }
    return zero;
  };
  T a = first_nonzero(d.L, true), b = first_nonzero(d.R, true);
  if (a == zero || b == zero) return "zero";
  std::ostringstream os;
  T ia = T(1) / a, ib = T(1) / b, ab = a * b;
  for (std::size_t j = 0; j < d.L.cols(); ++j) os << (d.L(t, j) * ia) << ',';
  os << '|';
  for (std::size_t j = 0; j < d.R.cols(); ++j) os << (d.R(t, j) * ib) << ',';
  os << '|';
  for (std::size_t j = 0; j < d.P.rows(); ++j) os << (d.P(j, t) * ab) << ',';
  return os.str();
}

}  // namespace detail

template <class T>
bool equivalent_up_to_term_scaling(const LrpDecomposition<T>& d1, const LrpDecomposition<T>& d2) {
  if (!(d1.shape == d2.shape) || d1.rank() != d2.rank()) return false;
  std::map<std::string, long> bag;
  for (std::size_t t = 0; t < d1.rank(); ++t) ++bag[detail::normalized_term_key(d1, t)];
  for (std::size_t t = 0; t < d2.rank(); ++t) --bag[detail::normalized_term_key(d2, t)];
  return std::all_of(bag.begin(), bag.end(), [](const auto& kv) { return kv.second == 0; });
}

// ============================================================================
// coefficient conversions

inline LrpDecomposition<GaussianRational> to_gaussian(const LrpDecomposition<Rational>& d) {
  auto f = [](const Rational& q) { return GaussianRational(q); };
  return {d.shape, map_matrix<GaussianRational>(d.L, f), map_matrix<GaussianRational>(d.R, f),
          map_matrix<GaussianRational>(d.P, f)};
}

inline bool is_real(const LrpDecomposition<GaussianRational>& d) {
  for (const auto* M : {&d.L, &d.R, &d.P})
    for (const auto& z : M->data())
      if (!z.is_real()) return false;
  return true;
}

// demotes a decomposition with all-zero imaginary parts; throws otherwise
inline LrpDecomposition<Rational> to_rational(const LrpDecomposition<GaussianRational>& d) {
  if (!is_real(d)) throw std::domain_error("decomposition has non-real coefficients");
  auto f = [](const GaussianRational& z) { return z.re(); };
  return {d.shape, map_matrix<Rational>(d.L, f), map_matrix<Rational>(d.R, f), map_matrix<Rational>(d.P, f)};
}

}  // namespace fmm
