#pragma once

#include "fmm/matrix.hpp"
#include "fmm/rational.hpp"
#include "fmm/tensor.hpp"

#include <random>
#include <stdexcept>

namespace fmm {

using CMatrix = Matrix<GaussianRational>;

inline CMatrix to_complex(const Matrix<Rational>& m) {
  return map_matrix<GaussianRational>(m, [](const Rational& q) { return GaussianRational(q); });
}

// (U, V, W) acting on <m,k,n> decompositions. The S3 part of the isotropy
// group is not represented. Determinants are reported, not constrained.
class Isotropy {
 public:
  Isotropy(CMatrix U, CMatrix V, CMatrix W) : U_(std::move(U)), V_(std::move(V)), W_(std::move(W)) {
    for (auto [M, name] : {std::pair{&U_, "U"}, std::pair{&V_, "V"}, std::pair{&W_, "W"}}) {
      if (!M->square()) throw std::invalid_argument(std::string("isotropy matrix ") + name + " is not square");
      if (determinant(*M).is_zero()) throw std::domain_error(std::string("isotropy matrix ") + name + " is singular");
    }
    Ui_ = inverse(U_);
    Vi_ = inverse(V_);
    Wi_ = inverse(W_);
  }

  static Isotropy identity(MatShape s) {
    return {CMatrix::identity(s.m), CMatrix::identity(s.k), CMatrix::identity(s.n)};
  }

  const CMatrix& U() const { return U_; }
  const CMatrix& V() const { return V_; }
  const CMatrix& W() const { return W_; }
  const CMatrix& U_inv() const { return Ui_; }
  const CMatrix& V_inv() const { return Vi_; }
  const CMatrix& W_inv() const { return Wi_; }
  MatShape shape() const { return {U_.rows(), V_.rows(), W_.rows()}; }

  // (det U, det V, det W); all in {1,-1} means the triple lies in PSL+-
  std::array<GaussianRational, 3> determinants() const { return {determinant(U_), determinant(V_), determinant(W_)}; }
  bool unimodular() const {
    for (const auto& d : determinants())
      if (!(d == GaussianRational(1) || d == GaussianRational(-1))) return false;
    return true;
  }
  bool is_real() const {
    for (const auto* M : {&U_, &V_, &W_})
      for (const auto& z : M->data())
        if (!z.is_real()) return false;
    return true;
  }

  friend bool operator==(const Isotropy& a, const Isotropy& b) { return a.U_ == b.U_ && a.V_ == b.V_ && a.W_ == b.W_; }

 private:
  CMatrix U_, V_, W_, Ui_, Vi_, Wi_;
};

inline Isotropy compose(const Isotropy& g1, const Isotropy& g2) {
  if (!(g1.shape() == g2.shape()))
    throw std::invalid_argument("compose: isotropy shapes " + g1.shape().str() + " and " + g2.shape().str() +
                                " differ");
  return {g1.U() * g2.U(), g1.V() * g2.V(), g1.W() * g2.W()};
}

inline Isotropy inverse(const Isotropy& g) { return {g.U_inv(), g.V_inv(), g.W_inv()}; }

// (U^-T A V^T) (x) (V^-T B W^T) (x) (W^-T C U^T)
inline RankOneTensor<GaussianRational> act_rank_one(const Isotropy& g, const RankOneTensor<GaussianRational>& t) {
  const MatShape s = g.shape();
  if (t.A.rows() != s.m || t.A.cols() != s.k || t.B.rows() != s.k || t.B.cols() != s.n || t.C.rows() != s.n ||
      t.C.cols() != s.m)
    throw std::invalid_argument("act_rank_one: tensor does not match isotropy shape " + s.str());
  return {transpose(g.U_inv()) * t.A * transpose(g.V()), transpose(g.V_inv()) * t.B * transpose(g.W()),
          transpose(g.W_inv()) * t.C * transpose(g.U())};
}

// With row-major vec, vec(X Y Z) = (X (x) Z^T) vec(Y), so the sandwich action on
// the rows of L and R and the columns of P reads:
//   L' = L (U^-1 (x) V^T),  R' = R (V^-1 (x) W^T),  P' = (U (x) W^-T) P.
inline LrpDecomposition<GaussianRational> act_lrp(const Isotropy& g, const LrpDecomposition<GaussianRational>& d) {
  if (!(g.shape() == d.shape))
    throw std::invalid_argument("act_lrp: isotropy shape " + g.shape().str() + " does not match decomposition " +
                                d.shape.str());
  return {d.shape, d.L * kron(g.U_inv(), transpose(g.V())), d.R * kron(g.V_inv(), transpose(g.W())),
          kron(g.U(), transpose(g.W_inv())) * d.P};
}

inline LrpDecomposition<GaussianRational> act_lrp(const Isotropy& g, const LrpDecomposition<Rational>& d) {
  return act_lrp(g, to_gaussian(d));
}

// Random integer matrix with determinant +-1, built from elementary operations.
inline Matrix<Rational> random_unimodular(std::size_t n, std::mt19937_64& rng, std::size_t steps = 0) {
  Matrix<Rational> M = Matrix<Rational>::identity(n);
  if (n < 2) {
    if (n == 1 && rng() % 2) M(0, 0) = Rational(-1);
    return M;
  }
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_int_distribution<int> mult(-2, 2), kind(0, 5);
  if (steps == 0) steps = 3 * n;
  for (std::size_t s = 0; s < steps; ++s) {
    std::size_t i = idx(rng), j = idx(rng);
    if (i == j) j = (i + 1) % n;
    int k = kind(rng);
    if (k == 0) {
      for (std::size_t c = 0; c < n; ++c) std::swap(M(i, c), M(j, c));
    } else if (k == 1) {
      for (std::size_t c = 0; c < n; ++c) M(i, c) = -M(i, c);
    } else {
      int f = mult(rng);
      if (f == 0) f = 1;
      for (std::size_t c = 0; c < n; ++c) M(i, c) = M(i, c) + Rational(f) * M(j, c);
    }
  }
  return M;
}

inline Isotropy random_unimodular_isotropy(MatShape s, std::mt19937_64& rng) {
  return {to_complex(random_unimodular(s.m, rng)), to_complex(random_unimodular(s.k, rng)),
          to_complex(random_unimodular(s.n, rng))};
}

}  // namespace fmm
