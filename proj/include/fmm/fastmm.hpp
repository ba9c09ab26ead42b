#pragma once

#include "fmm/matrix.hpp"
#include "fmm/op_count.hpp"
#include "fmm/rational.hpp"
#include "fmm/rings.hpp"
#include "fmm/slp.hpp"
#include "fmm/tensor.hpp"

#include <chrono>
#include <cmath>
#include <future>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace fmm {

template <Ring R>
using Blocks = std::vector<std::vector<value_t<R>>>;

// ============================================================================
// linear stages: out = M * in, applied elementwise over equal-length vectors

class LinearStage {
 public:
  LinearStage() = default;

  static LinearStage from_matrix(Matrix<Rational> M) {
    LinearStage s;
    s.M_ = std::move(M);
    s.in_ = s.M_.cols();
    s.out_ = s.M_.rows();
    for (std::size_t i = 0; i < s.M_.rows(); ++i) {
      std::size_t nz = 0;
      for (std::size_t j = 0; j < s.M_.cols(); ++j) {
        const Rational& c = s.M_(i, j);
        if (c.is_zero()) continue;
        ++nz;
        if (c.abs() != Rational(1)) ++s.cost_.scalar_mults;
      }
      if (nz > 1) s.cost_.additions += nz - 1;
    }
    return s;
  }

  static LinearStage from_slp(const SlpProgram& p, const std::vector<std::string>& inputs,
                              const std::vector<std::string>& outputs) {
    if (p.has_products()) throw std::invalid_argument("linear stage program contains variable products");
    LinearStage s;
    s.slp_ = CompiledSlp(p, inputs, outputs);
    s.is_slp_ = true;
    s.in_ = inputs.size();
    s.out_ = outputs.size();
    s.cost_ = count_ops(p);
    return s;
  }

  std::size_t inputs() const { return in_; }
  std::size_t outputs() const { return out_; }
  bool is_slp() const { return is_slp_; }
  // operations per element position
  OpCount cost() const { return cost_; }

  template <Ring R>
  Blocks<R> apply(const R& ring, const Blocks<R>& in) const {
    if (in.size() != in_)
      throw std::invalid_argument("linear stage expects " + std::to_string(in_) + " inputs, got " +
                                  std::to_string(in.size()));
    if (is_slp_) return slp_.run(ring, in);
    using V = value_t<R>;
    const std::size_t len = in.empty() ? 0 : in[0].size();
    Blocks<R> out(out_);
    for (std::size_t i = 0; i < out_; ++i) {
      std::vector<V> acc;
      for (std::size_t j = 0; j < in_; ++j) {
        const Rational& c = M_(i, j);
        if (c.is_zero()) continue;
        const auto& x = in[j];
        bool negative = c.sign() < 0;
        std::vector<V> term;
        const std::vector<V>* src = &x;
        if (c.abs() != Rational(1)) {
          V k = ring.from_rational(c.abs());
          term.reserve(len);
          for (const auto& v : x) term.push_back(ring.mul_const(v, k));
          src = &term;
        }
        if (acc.empty() && len > 0) {
          if (negative) {
            acc.reserve(len);
            for (const auto& v : *src) acc.push_back(ring.neg(v));
          } else {
            acc = *src;
          }
        } else {
          for (std::size_t p = 0; p < len; ++p)
            acc[p] = negative ? ring.sub(acc[p], (*src)[p]) : ring.add(acc[p], (*src)[p]);
        }
      }
      if (acc.empty()) acc.assign(len, ring.zero());
      out[i] = std::move(acc);
    }
    return out;
  }

 private:
  Matrix<Rational> M_;
  CompiledSlp slp_;
  bool is_slp_ = false;
  std::size_t in_ = 0, out_ = 0;
  OpCount cost_;
};

// ============================================================================
// naive product

template <Ring R>
Matrix<value_t<R>> multiply_naive(const R& ring, const Matrix<value_t<R>>& A, const Matrix<value_t<R>>& B) {
  if (A.cols() != B.rows()) throw std::invalid_argument("multiply_naive: inner dimensions differ");
  Matrix<value_t<R>> C(A.rows(), B.cols(), ring.zero());
  if (A.cols() == 0) return C;
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < B.cols(); ++j) {
      auto s = ring.mul(A(i, 0), B(0, j));
      for (std::size_t l = 1; l < A.cols(); ++l) s = ring.add(s, ring.mul(A(i, l), B(l, j)));
      C(i, j) = std::move(s);
    }
  return C;
}

template <Ring R>
Matrix<value_t<R>> random_matrix(const R& ring, std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  Matrix<value_t<R>> M(rows, cols, ring.zero());
  for (auto& x : M.data()) x = random_element(ring, rng);
  return M;
}

template <Ring R>
Matrix<value_t<R>> identity_matrix(const R& ring, std::size_t n) {
  Matrix<value_t<R>> M(n, n, ring.zero());
  for (std::size_t i = 0; i < n; ++i) M(i, i) = ring.one();
  return M;
}

template <Ring R>
bool matrices_equal(const R& ring, const Matrix<value_t<R>>& A, const Matrix<value_t<R>>& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) return false;
  for (std::size_t i = 0; i < A.data().size(); ++i)
    if (!ring.equal(A.data()[i], B.data()[i])) return false;
  return true;
}

// ============================================================================
// padding and block plumbing

struct RecursionConfig {
  std::size_t base_threshold = 1;  // naive at or below this side
  bool parallel = false;           // run the top-level products concurrently
};

struct Padding {
  std::size_t depth = 0;   // recursion levels
  std::size_t leaf = 0;    // side handled naively
  std::size_t padded = 0;  // base^depth * leaf
};

// smallest depth with ceil(n / base^depth) <= threshold
inline Padding plan_padding(std::size_t n, std::size_t base, std::size_t threshold) {
  if (threshold < 1) throw std::invalid_argument("base_threshold must be >= 1");
  if (base < 2) throw std::invalid_argument("recursion base must be >= 2");
  Padding p;
  std::size_t scale = 1;
  while ((n + scale - 1) / scale > threshold) {
    scale *= base;
    ++p.depth;
  }
  p.leaf = (n + scale - 1) / scale;
  p.padded = scale * p.leaf;
  return p;
}

template <class V>
Matrix<V> pad_matrix(const Matrix<V>& A, std::size_t N, const V& zero) {
  if (A.rows() == N && A.cols() == N) return A;
  Matrix<V> P(N, N, zero);
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) P(i, j) = A(i, j);
  return P;
}

template <class V>
Matrix<V> crop_matrix(const Matrix<V>& A, std::size_t rows, std::size_t cols) {
  if (A.rows() == rows && A.cols() == cols) return A;
  Matrix<V> C(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) C(i, j) = A(i, j);
  return C;
}

// b x b grid of h x h blocks, each flattened row-major, in row-major block order
template <class V>
std::vector<std::vector<V>> split_blocks(const Matrix<V>& A, std::size_t b) {
  const std::size_t h = A.rows() / b;
  std::vector<std::vector<V>> out(b * b);
  for (std::size_t bi = 0; bi < b; ++bi)
    for (std::size_t bj = 0; bj < b; ++bj) {
      auto& v = out[bi * b + bj];
      v.reserve(h * h);
      for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < h; ++j) v.push_back(A(bi * h + i, bj * h + j));
    }
  return out;
}

template <class V>
Matrix<V> join_blocks(const std::vector<std::vector<V>>& blocks, std::size_t b, std::size_t h) {
  Matrix<V> A(b * h, b * h);
  for (std::size_t bi = 0; bi < b; ++bi)
    for (std::size_t bj = 0; bj < b; ++bj) {
      const auto& v = blocks[bi * b + bj];
      for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < h; ++j) A(bi * h + i, bj * h + j) = v[i * h + j];
    }
  return A;
}

inline std::size_t isqrt_exact(std::size_t x) {
  auto r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(x))));
  if (r * r != x) throw std::invalid_argument(std::to_string(x) + " is not a perfect square");
  return r;
}

// ============================================================================
// plain recursion driven by an LRP decomposition

struct LrpScheme {
  std::string name;
  std::size_t base = 0;  // square shape <base,base,base>
  std::size_t rank = 0;
  LinearStage left, right, out;

  static LrpScheme from_decomposition(const LrpDecomposition<Rational>& d, std::string name = "lrp") {
    if (d.shape.m != d.shape.k || d.shape.k != d.shape.n)
      throw std::invalid_argument("recursive multiplication needs a square shape, got " + d.shape.str());
    return {std::move(name), d.shape.m, d.rank(), LinearStage::from_matrix(d.L), LinearStage::from_matrix(d.R),
            LinearStage::from_matrix(d.P)};
  }

  // L/R programs map A11../B11.. to l0../r0..; the product program must be
  // p_t := l_t * r_t; the P program maps p0.. to C11..
  static LrpScheme from_slps(std::string name, std::size_t base, std::size_t rank, const SlpProgram& Lp,
                             const SlpProgram& Rp, const SlpProgram& Prodp, const SlpProgram& Pp) {
    auto l = indexed_names("l", rank), r = indexed_names("r", rank), p = indexed_names("p", rank);
    if (Prodp.size() != rank) throw std::invalid_argument("product program must have one product per rank");
    for (std::size_t t = 0; t < rank; ++t) {
      const auto& in = Prodp.instructions()[t];
      const auto& n = Prodp.nodes()[static_cast<std::size_t>(in.root)];
      bool ok = Prodp.symbol(in.target) == p[t] && n.op == SlpOp::mul;
      if (ok) {
        const auto& a = Prodp.nodes()[static_cast<std::size_t>(n.a)];
        const auto& b = Prodp.nodes()[static_cast<std::size_t>(n.b)];
        ok = a.op == SlpOp::var && b.op == SlpOp::var && Prodp.symbol(a.sym) == l[t] && Prodp.symbol(b.sym) == r[t];
      }
      if (!ok) throw std::invalid_argument("product program instruction " + std::to_string(t) + " is not " + p[t] +
                                           ":=" + l[t] + "*" + r[t]);
    }
    return {std::move(name), base, rank, LinearStage::from_slp(Lp, entry_names('A', base, base), l),
            LinearStage::from_slp(Rp, entry_names('B', base, base), r),
            LinearStage::from_slp(Pp, p, entry_names('C', base, base))};
  }

  OpCount stage_cost() const { return left.cost() + right.cost() + out.cost(); }
};

struct RecursionStats {
  std::vector<OpCount> stage_by_level;  // linear-stage work per recursion level
  OpCount base;                         // naive leaf products
  Padding padding;

  OpCount total() const {
    OpCount t = base;
    for (const auto& s : stage_by_level) t += s;
    return t;
  }
  void add_stage(std::size_t level, const OpCount& c) {
    if (stage_by_level.size() <= level) stage_by_level.resize(level + 1);
    stage_by_level[level] += c;
  }
  void merge(const RecursionStats& o) {
    for (std::size_t l = 0; l < o.stage_by_level.size(); ++l) add_stage(l, o.stage_by_level[l]);
    base += o.base;
  }
};

namespace detail {

template <Ring R>
Matrix<value_t<R>> lrp_rec(const R& ring, const LrpScheme& s, const Matrix<value_t<R>>& A,
                           const Matrix<value_t<R>>& B, std::size_t level, std::size_t depth,
                           const RecursionConfig& cfg, RecursionStats& st) {
  using V = value_t<R>;
  if (level == depth) {
    OpCount before = ring_counts(ring);
    auto C = multiply_naive(ring, A, B);
    st.base += ring_counts(ring) - before;
    return C;
  }
  const std::size_t b = s.base, h = A.rows() / b;
  OpCount before = ring_counts(ring);
  auto l = s.left.apply(ring, split_blocks(A, b));
  auto r = s.right.apply(ring, split_blocks(B, b));
  st.add_stage(level, ring_counts(ring) - before);

  Blocks<R> prods(s.rank);
  if (cfg.parallel && level == 0) {
    std::vector<R> rings;
    std::vector<RecursionStats> stats(s.rank);
    for (std::size_t t = 0; t < s.rank; ++t) rings.push_back(fork_ring(ring));
    std::vector<std::future<Matrix<V>>> fut;
    for (std::size_t t = 0; t < s.rank; ++t)
      fut.push_back(std::async(std::launch::async, [&, t] {
        return lrp_rec(rings[t], s, Matrix<V>(h, h, l[t]), Matrix<V>(h, h, r[t]), level + 1, depth, cfg, stats[t]);
      }));
    for (std::size_t t = 0; t < s.rank; ++t) {
      prods[t] = fut[t].get().data();
      merge_ring(ring, rings[t]);
      st.merge(stats[t]);
    }
  } else {
    for (std::size_t t = 0; t < s.rank; ++t)
      prods[t] = lrp_rec(ring, s, Matrix<V>(h, h, std::move(l[t])), Matrix<V>(h, h, std::move(r[t])), level + 1,
                         depth, cfg, st)
                     .data();
  }

  before = ring_counts(ring);
  auto c = s.out.apply(ring, prods);
  st.add_stage(level, ring_counts(ring) - before);
  return join_blocks(c, b, h);
}

}  // namespace detail

template <Ring R>
Matrix<value_t<R>> multiply_recursive(const R& ring, const LrpScheme& s, const Matrix<value_t<R>>& A,
                                      const Matrix<value_t<R>>& B, const RecursionConfig& cfg = {},
                                      RecursionStats* stats = nullptr) {
  if (!A.square() || !B.square() || A.rows() != B.rows())
    throw std::invalid_argument("multiply_recursive: A and B must be square of equal side");
  RecursionStats local;
  RecursionStats& st = stats ? *stats : local;
  st = {};
  st.padding = plan_padding(A.rows(), s.base, cfg.base_threshold);
  const std::size_t N = st.padding.padded;
  auto C = detail::lrp_rec(ring, s, pad_matrix(A, N, ring.zero()), pad_matrix(B, N, ring.zero()), 0,
                           st.padding.depth, cfg, st);
  return crop_matrix(C, A.rows(), B.cols());
}

template <Ring R>
Matrix<value_t<R>> multiply_recursive(const R& ring, const LrpDecomposition<Rational>& d,
                                      const Matrix<value_t<R>>& A, const Matrix<value_t<R>>& B,
                                      const RecursionConfig& cfg = {}, RecursionStats* stats = nullptr) {
  return multiply_recursive(ring, LrpScheme::from_decomposition(d), A, B, cfg, stats);
}

// ============================================================================
// alternative basis: L = L_alt CoB_L, R = R_alt CoB_R, P = CoB_P P_alt

struct AltBasisAlgorithm {
  Matrix<Rational> L_alt, CoB_L, R_alt, CoB_R, P_alt, CoB_P;

  std::size_t rank() const { return L_alt.rows(); }
  std::size_t basis() const { return CoB_L.rows(); }
  std::size_t base() const { return isqrt_exact(CoB_L.cols()); }

  void validate() const {
    const std::size_t r = L_alt.rows(), q = CoB_L.rows(), bb = CoB_L.cols();
    if (L_alt.cols() != q || R_alt.rows() != r || R_alt.cols() != CoB_R.rows() || CoB_R.cols() != bb ||
        P_alt.cols() != r || CoB_P.cols() != P_alt.rows() || CoB_P.rows() != bb || CoB_R.rows() != q ||
        P_alt.rows() != q)
      throw std::invalid_argument("alternative-basis matrices have inconsistent dimensions");
    base();
  }

  LrpDecomposition<Rational> recompose() const {
    const std::size_t b = base();
    return {{b, b, b}, L_alt * CoB_L, R_alt * CoB_R, CoB_P * P_alt};
  }
};

struct AltScheme {
  std::string name;
  std::size_t base = 0, basis = 0, rank = 0;
  LinearStage cob_left, cob_right, core_left, core_right, core_out, cob_out;

  static AltScheme from_algorithm(const AltBasisAlgorithm& a, std::string name = "alt") {
    a.validate();
    return {std::move(name),
            a.base(),
            a.basis(),
            a.rank(),
            LinearStage::from_matrix(a.CoB_L),
            LinearStage::from_matrix(a.CoB_R),
            LinearStage::from_matrix(a.L_alt),
            LinearStage::from_matrix(a.R_alt),
            LinearStage::from_matrix(a.P_alt),
            LinearStage::from_matrix(a.CoB_P)};
  }

  // CoB_L: A11.. -> u0.., CoB_R: B11.. -> v0.., CoB_P: w0.. -> C11..
  static AltScheme from_algorithm(const AltBasisAlgorithm& a, const SlpProgram& cobL, const SlpProgram& cobR,
                                  const SlpProgram& cobP, std::string name = "alt") {
    AltScheme s = from_algorithm(a, std::move(name));
    const std::size_t b = s.base, q = s.basis;
    s.cob_left = LinearStage::from_slp(cobL, entry_names('A', b, b), indexed_names("u", q));
    s.cob_right = LinearStage::from_slp(cobR, entry_names('B', b, b), indexed_names("v", q));
    s.cob_out = LinearStage::from_slp(cobP, indexed_names("w", q), entry_names('C', b, b));
    return s;
  }

  OpCount core_cost() const { return core_left.cost() + core_right.cost() + core_out.cost(); }
};

// 47^d transformed blocks of side leaf, flattened; top-level block index major
template <class V>
struct TransformedOperand {
  std::size_t depth = 0, leaf = 0;
  std::vector<V> data;
};

struct AltStats {
  OpCount transform_left, transform_right;  // CoB_L / CoB_R
  OpCount core_stage;                       // L_alt / R_alt / P_alt
  OpCount base;                             // naive leaf products
  OpCount untransform;                      // CoB_P
  Padding padding;

  OpCount core() const { return core_stage + base; }
  OpCount cob() const { return transform_left + transform_right + untransform; }
  OpCount total() const { return core() + cob(); }
};

namespace detail {

inline std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

template <Ring R>
std::vector<value_t<R>> alt_transform(const R& ring, const LinearStage& cob, const Matrix<value_t<R>>& A,
                                      std::size_t depth, std::size_t base) {
  using V = value_t<R>;
  if (depth == 0) return A.data();
  const std::size_t h = A.rows() / base;
  auto t = cob.apply(ring, split_blocks(A, base));
  std::vector<V> out;
  for (auto& blk : t) {
    auto sub = alt_transform(ring, cob, Matrix<V>(h, h, std::move(blk)), depth - 1, base);
    out.insert(out.end(), std::make_move_iterator(sub.begin()), std::make_move_iterator(sub.end()));
  }
  return out;
}

template <Ring R>
Matrix<value_t<R>> alt_untransform(const R& ring, const LinearStage& cob, const std::vector<value_t<R>>& x,
                                   std::size_t depth, std::size_t leaf, std::size_t base, std::size_t basis) {
  using V = value_t<R>;
  if (depth == 0) return Matrix<V>(leaf, leaf, x);
  const std::size_t chunk = x.size() / basis;
  const std::size_t h = leaf * ipow(base, depth - 1);
  Blocks<R> parts(basis);
  for (std::size_t u = 0; u < basis; ++u) {
    std::vector<V> piece(x.begin() + static_cast<std::ptrdiff_t>(u * chunk),
                         x.begin() + static_cast<std::ptrdiff_t>((u + 1) * chunk));
    parts[u] = alt_untransform(ring, cob, piece, depth - 1, leaf, base, basis).data();
  }
  return join_blocks(cob.apply(ring, parts), base, h);
}

template <Ring R>
std::vector<value_t<R>> alt_core(const R& ring, const AltScheme& s, const std::vector<value_t<R>>& a,
                                 const std::vector<value_t<R>>& b, std::size_t depth, std::size_t leaf,
                                 AltStats& st) {
  using V = value_t<R>;
  if (depth == 0) {
    OpCount before = ring_counts(ring);
    auto C = multiply_naive(ring, Matrix<V>(leaf, leaf, a), Matrix<V>(leaf, leaf, b));
    st.base += ring_counts(ring) - before;
    return C.data();
  }
  const std::size_t q = s.basis, chunk = a.size() / q;
  auto chunks = [&](const std::vector<V>& x) {
    Blocks<R> c(q);
    for (std::size_t u = 0; u < q; ++u)
      c[u].assign(x.begin() + static_cast<std::ptrdiff_t>(u * chunk),
                  x.begin() + static_cast<std::ptrdiff_t>((u + 1) * chunk));
    return c;
  };
  OpCount before = ring_counts(ring);
  auto l = s.core_left.apply(ring, chunks(a));
  auto r = s.core_right.apply(ring, chunks(b));
  st.core_stage += ring_counts(ring) - before;
  Blocks<R> prods(s.rank);
  for (std::size_t t = 0; t < s.rank; ++t) prods[t] = alt_core(ring, s, l[t], r[t], depth - 1, leaf, st);
  before = ring_counts(ring);
  auto w = s.core_out.apply(ring, prods);
  st.core_stage += ring_counts(ring) - before;
  std::vector<V> out;
  out.reserve(chunk * q);
  for (auto& piece : w) out.insert(out.end(), piece.begin(), piece.end());
  return out;
}

}  // namespace detail

template <Ring R>
TransformedOperand<value_t<R>> transform_operand(const R& ring, const LinearStage& cob,
                                                 const Matrix<value_t<R>>& A, std::size_t depth,
                                                 std::size_t base) {
  if (A.rows() % detail::ipow(base, depth) != 0) throw std::invalid_argument("operand side not divisible");
  return {depth, A.rows() / detail::ipow(base, depth), detail::alt_transform(ring, cob, A, depth, base)};
}

template <Ring R>
Matrix<value_t<R>> multiply_alt_basis(const R& ring, const AltScheme& s, const Matrix<value_t<R>>& A,
                                      const Matrix<value_t<R>>& B, const RecursionConfig& cfg = {},
                                      AltStats* stats = nullptr) {
  if (!ring.two_invertible())
    throw std::domain_error("alternative-basis multiplication requires a ring containing an inverse of 2 (" +
                            ring.name() + " has none)");
  if (!A.square() || !B.square() || A.rows() != B.rows())
    throw std::invalid_argument("multiply_alt_basis: A and B must be square of equal side");
  AltStats local;
  AltStats& st = stats ? *stats : local;
  st = {};
  st.padding = plan_padding(A.rows(), s.base, cfg.base_threshold);
  const auto [depth, leaf, N] = st.padding;
  OpCount before = ring_counts(ring);
  auto ta = transform_operand(ring, s.cob_left, pad_matrix(A, N, ring.zero()), depth, s.base);
  st.transform_left = ring_counts(ring) - before;
  before = ring_counts(ring);
  auto tb = transform_operand(ring, s.cob_right, pad_matrix(B, N, ring.zero()), depth, s.base);
  st.transform_right = ring_counts(ring) - before;
  auto tc = detail::alt_core(ring, s, ta.data, tb.data, depth, leaf, st);
  before = ring_counts(ring);
  auto C = detail::alt_untransform(ring, s.cob_out, tc, depth, leaf, s.base, s.basis);
  st.untransform = ring_counts(ring) - before;
  return crop_matrix(C, A.rows(), B.cols());
}

template <Ring R>
Matrix<value_t<R>> multiply_alt_basis(const R& ring, const AltBasisAlgorithm& a, const Matrix<value_t<R>>& A,
                                      const Matrix<value_t<R>>& B, const RecursionConfig& cfg = {},
                                      AltStats* stats = nullptr) {
  return multiply_alt_basis(ring, AltScheme::from_algorithm(a), A, B, cfg, stats);
}

// ============================================================================
// predicted operation counts (no padding): recurrences over the stage costs

inline OpCount naive_counts(std::size_t s) {
  OpCount c;
  c.products = s * s * s;
  c.additions = s * s * (s > 0 ? s - 1 : 0);
  return c;
}

// T(leaf) = naive; T(level) = r T(child) + stage_cost * child_side^2
inline std::optional<OpCount> predict_counts(const LrpScheme& s, std::size_t n, std::size_t threshold) {
  Padding p = plan_padding(n, s.base, threshold);
  if (p.padded != n) return std::nullopt;
  OpCount t = naive_counts(p.leaf);
  std::size_t side = p.leaf;
  for (std::size_t d = 0; d < p.depth; ++d) {
    t = t * s.rank + s.stage_cost() * (side * side);
    side *= s.base;
  }
  return t;
}

struct AltPrediction {
  OpCount core, transform_left, transform_right, untransform;
  OpCount total() const { return core + transform_left + transform_right + untransform; }
};

inline std::optional<AltPrediction> predict_counts(const AltScheme& s, std::size_t n, std::size_t threshold) {
  Padding p = plan_padding(n, s.base, threshold);
  if (p.padded != n) return std::nullopt;
  AltPrediction out;
  const std::size_t leaf2 = p.leaf * p.leaf;
  // core at depth j works on chunks of 47^(j-1) leaf^2 elements
  out.core = naive_counts(p.leaf);
  for (std::size_t j = 1; j <= p.depth; ++j)
    out.core = out.core * s.rank + s.core_cost() * (detail::ipow(s.basis, j - 1) * leaf2);
  // a transform at depth j applies CoB to (base^(j-1) leaf)^2 positions, then 47 sub-transforms
  auto transform = [&](const OpCount& c) {
    OpCount t;
    for (std::size_t j = 1; j <= p.depth; ++j) {
      std::size_t h = detail::ipow(s.base, j - 1) * p.leaf;
      t = t * s.basis + c * (h * h);
    }
    return t;
  };
  out.transform_left = transform(s.cob_left.cost());
  out.transform_right = transform(s.cob_right.cost());
  out.untransform = transform(s.cob_out.cost());
  return out;
}

// ============================================================================
// closed forms for n = 4^k (exact rational evaluation)

inline Rational rpow(std::size_t b, std::size_t e) {
  BigInt r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= b;
  return Rational(r);
}

// T(1) = 1, T(n) = r T(n/b) + c (n/b)^2  =>  T = (1 + c/(r - b^2)) r^k - c/(r - b^2) b^(2k)
inline Rational plain_closed_form(std::size_t rank, std::size_t base, std::uint64_t c, std::size_t k) {
  Rational q = Rational(static_cast<long long>(c)) / Rational(static_cast<long long>(rank - base * base));
  return (Rational(1) + q) * rpow(rank, k) - q * rpow(base * base, k);
}

// T(1) = 1, T(4^k) = r T(4^(k-1)) + c q^(k-1)  =>  T = (1 + c/(r - q)) r^k - c/(r - q) q^k
inline Rational alt_core_closed_form(std::size_t rank, std::size_t basis, std::uint64_t c, std::size_t k) {
  Rational f = Rational(static_cast<long long>(c)) / Rational(static_cast<long long>(rank - basis));
  return (Rational(1) + f) * rpow(rank, k) - f * rpow(basis, k);
}

// X(k) = q X(k-1) + c b^(2(k-1))  =>  X = c (q^k - b^(2k)) / (q - b^2)
inline Rational cob_closed_form(std::size_t basis, std::size_t base, std::uint64_t c, std::size_t k) {
  return Rational(static_cast<long long>(c)) * (rpow(basis, k) - rpow(base * base, k)) /
         Rational(static_cast<long long>(basis - base * base));
}

inline std::optional<std::size_t> log_exact(std::size_t n, std::size_t base) {
  std::size_t k = 0, p = 1;
  while (p < n) {
    p *= base;
    ++k;
  }
  if (p != n) return std::nullopt;
  return k;
}

// ============================================================================
// benchmark

struct NaiveScheme {};
using AnyScheme = std::variant<NaiveScheme, LrpScheme, AltScheme>;

inline std::string scheme_name(const AnyScheme& s) {
  return std::visit(
      [](const auto& x) -> std::string {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, NaiveScheme>)
          return "naive";
        else
          return x.name;
      },
      s);
}

template <Ring R>
Matrix<value_t<R>> multiply(const R& ring, const AnyScheme& s, const Matrix<value_t<R>>& A,
                            const Matrix<value_t<R>>& B, const RecursionConfig& cfg = {}) {
  return std::visit(
      [&](const auto& x) -> Matrix<value_t<R>> {
        using S = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<S, NaiveScheme>)
          return multiply_naive(ring, A, B);
        else if constexpr (std::is_same_v<S, LrpScheme>)
          return multiply_recursive(ring, x, A, B, cfg);
        else
          return multiply_alt_basis(ring, x, A, B, cfg);
      },
      s);
}

inline std::optional<OpCount> predict_counts(const AnyScheme& s, std::size_t n, std::size_t threshold) {
  return std::visit(
      [&](const auto& x) -> std::optional<OpCount> {
        using S = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<S, NaiveScheme>)
          return naive_counts(n);
        else if constexpr (std::is_same_v<S, LrpScheme>)
          return predict_counts(x, n, threshold);
        else {
          auto p = predict_counts(x, n, threshold);
          if (!p) return std::nullopt;
          return p->total();
        }
      },
      s);
}

struct BenchmarkRow {
  std::size_t n = 0, repetitions = 0;
  double seconds = 0;  // mean wall-clock per multiplication
  OpCount measured;    // instrumented run
  std::optional<OpCount> expected;
  bool matches_naive = false;         // exact rings: equality; floats: deviation bound
  std::optional<double> max_deviation;  // floats only
};

template <Ring R>
std::vector<BenchmarkRow> benchmark(const AnyScheme& s, const R& ring, const std::vector<std::size_t>& sizes,
                                    std::size_t repetitions, const RecursionConfig& cfg = {},
                                    std::uint64_t seed = 1, double tolerance = 1e-9) {
  using V = value_t<R>;
  std::vector<BenchmarkRow> rows;
  std::mt19937_64 rng(seed);
  for (std::size_t n : sizes) {
    if (n == 0) throw std::invalid_argument("benchmark sizes must be positive");
    BenchmarkRow row;
    row.n = n;
    row.repetitions = repetitions;
    auto A = random_matrix(ring, n, n, rng), B = random_matrix(ring, n, n, rng);
    Matrix<V> C;
    auto t0 = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < repetitions; ++i) C = multiply(ring, s, A, B, cfg);
    auto t1 = std::chrono::steady_clock::now();
    if (repetitions) row.seconds = std::chrono::duration<double>(t1 - t0).count() / static_cast<double>(repetitions);
    CountingRing<R> counter(ring);
    RecursionConfig serial = cfg;
    serial.parallel = false;
    auto Cc = multiply(counter, s, A, B, serial);
    row.measured = counter.counts();
    row.expected = predict_counts(s, n, cfg.base_threshold);
    auto ref = multiply_naive(ring, A, B);
    if (!repetitions) C = Cc;
    if constexpr (std::is_same_v<V, double>) {
      double dev = 0;
      for (std::size_t i = 0; i < C.data().size(); ++i) dev = std::max(dev, std::abs(C.data()[i] - ref.data()[i]));
      row.max_deviation = dev;
      row.matches_naive = dev <= tolerance;
    } else {
      row.matches_naive = matrices_equal(ring, C, ref);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fmm
