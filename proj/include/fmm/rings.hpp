#pragma once

#include "fmm/op_count.hpp"
#include "fmm/rational.hpp"

#include <concepts>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>

namespace fmm {

// A ring object carries any parameters (a modulus) and performs arithmetic on
// its value_type. mul_const multiplies by a value obtained from from_rational;
// it is separate from mul so that instrumented rings can tell the two apart.
template <class R>
concept Ring = std::copy_constructible<R> &&
               requires(const R& r, const typename R::value_type& a, const Rational& q) {
                 { r.zero() } -> std::same_as<typename R::value_type>;
                 { r.one() } -> std::same_as<typename R::value_type>;
                 { r.add(a, a) } -> std::same_as<typename R::value_type>;
                 { r.sub(a, a) } -> std::same_as<typename R::value_type>;
                 { r.neg(a) } -> std::same_as<typename R::value_type>;
                 { r.mul(a, a) } -> std::same_as<typename R::value_type>;
                 { r.mul_const(a, a) } -> std::same_as<typename R::value_type>;
                 { r.half(a) } -> std::same_as<typename R::value_type>;
                 { r.from_rational(q) } -> std::same_as<typename R::value_type>;
                 { r.equal(a, a) } -> std::same_as<bool>;
                 { r.two_invertible() } -> std::same_as<bool>;
                 { r.str(a) } -> std::convertible_to<std::string>;
                 { r.name() } -> std::convertible_to<std::string>;
                 { R::is_exact } -> std::convertible_to<bool>;
               };

template <class R>
using value_t = typename R::value_type;

// ============================================================================
// exact rings

struct RationalRing {
  using value_type = Rational;
  static constexpr bool is_exact = true;

  Rational zero() const { return {}; }
  Rational one() const { return Rational(1); }
  Rational add(const Rational& a, const Rational& b) const { return a + b; }
  Rational sub(const Rational& a, const Rational& b) const { return a - b; }
  Rational neg(const Rational& a) const { return -a; }
  Rational mul(const Rational& a, const Rational& b) const { return a * b; }
  Rational mul_const(const Rational& a, const Rational& c) const { return a * c; }
  Rational half(const Rational& a) const { return a.half(); }
  Rational from_rational(const Rational& q) const { return q; }
  bool equal(const Rational& a, const Rational& b) const { return a == b; }
  bool two_invertible() const { return true; }
  std::string str(const Rational& a) const { return a.str(); }
  std::string name() const { return "rational"; }
};

struct DyadicRing {
  using value_type = DyadicRational;
  static constexpr bool is_exact = true;

  DyadicRational zero() const { return {}; }
  DyadicRational one() const { return DyadicRational(1); }
  DyadicRational add(const DyadicRational& a, const DyadicRational& b) const { return a + b; }
  DyadicRational sub(const DyadicRational& a, const DyadicRational& b) const { return a - b; }
  DyadicRational neg(const DyadicRational& a) const { return -a; }
  DyadicRational mul(const DyadicRational& a, const DyadicRational& b) const { return a * b; }
  DyadicRational mul_const(const DyadicRational& a, const DyadicRational& c) const { return a * c; }
  DyadicRational half(const DyadicRational& a) const { return a.half(); }
  DyadicRational from_rational(const Rational& q) const { return DyadicRational::from_rational(q); }
  bool equal(const DyadicRational& a, const DyadicRational& b) const { return a == b; }
  bool two_invertible() const { return true; }
  std::string str(const DyadicRational& a) const { return a.str(); }
  std::string name() const { return "dyadic"; }
};

struct GaussianRing {
  using value_type = GaussianRational;
  static constexpr bool is_exact = true;

  GaussianRational zero() const { return {}; }
  GaussianRational one() const { return GaussianRational(1); }
  GaussianRational add(const GaussianRational& a, const GaussianRational& b) const { return a + b; }
  GaussianRational sub(const GaussianRational& a, const GaussianRational& b) const { return a - b; }
  GaussianRational neg(const GaussianRational& a) const { return -a; }
  GaussianRational mul(const GaussianRational& a, const GaussianRational& b) const { return a * b; }
  GaussianRational mul_const(const GaussianRational& a, const GaussianRational& c) const { return a * c; }
  GaussianRational half(const GaussianRational& a) const { return a.half(); }
  GaussianRational from_rational(const Rational& q) const { return GaussianRational(q); }
  bool equal(const GaussianRational& a, const GaussianRational& b) const { return a == b; }
  bool two_invertible() const { return true; }
  std::string str(const GaussianRational& a) const { return a.str(); }
  std::string name() const { return "gaussian"; }
};

// Big integers: no inverse of 2. half() and non-integral constants throw.
struct IntegerRing {
  using value_type = BigInt;
  static constexpr bool is_exact = true;

  BigInt zero() const { return 0; }
  BigInt one() const { return 1; }
  BigInt add(const BigInt& a, const BigInt& b) const { return a + b; }
  BigInt sub(const BigInt& a, const BigInt& b) const { return a - b; }
  BigInt neg(const BigInt& a) const { return -a; }
  BigInt mul(const BigInt& a, const BigInt& b) const { return a * b; }
  BigInt mul_const(const BigInt& a, const BigInt& c) const { return a * c; }
  BigInt half(const BigInt& a) const {
    if (!is_even(a)) throw std::domain_error("integer ring has no inverse of 2");
    return shr_exact(a, 1);
  }
  BigInt from_rational(const Rational& q) const {
    if (!q.is_integer())
      throw std::domain_error("integer ring cannot represent " + q.str() +
                              (is_even(q.den()) ? " (requires an inverse of 2)" : ""));
    return q.num();
  }
  bool equal(const BigInt& a, const BigInt& b) const { return a == b; }
  bool two_invertible() const { return false; }
  std::string str(const BigInt& a) const { return a.str(); }
  std::string name() const { return "integer"; }
};

// Residues modulo an odd modulus p < 2^62. The modulus lives in the ring.
struct Residue {
  std::uint64_t v = 0;
  friend bool operator==(const Residue&, const Residue&) = default;
};

class ModularRing {
 public:
  using value_type = Residue;
  static constexpr bool is_exact = true;

  explicit ModularRing(std::uint64_t p) : p_(p) {
    if (p < 3 || p % 2 == 0)
      throw std::invalid_argument("modulus " + std::to_string(p) +
                                  " rejected: the ring must contain an inverse of 2 (odd modulus >= 3)");
    if (p >= (std::uint64_t{1} << 62)) throw std::invalid_argument("modulus too large");
  }

  std::uint64_t modulus() const { return p_; }
  Residue make(std::int64_t x) const {
    auto r = x % static_cast<std::int64_t>(p_);
    return {static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(p_) : r)};
  }

  Residue zero() const { return {0}; }
  Residue one() const { return {1}; }
  Residue add(Residue a, Residue b) const {
    std::uint64_t s = a.v + b.v;
    return {s >= p_ ? s - p_ : s};
  }
  Residue sub(Residue a, Residue b) const { return {a.v >= b.v ? a.v - b.v : a.v + p_ - b.v}; }
  Residue neg(Residue a) const { return {a.v == 0 ? 0 : p_ - a.v}; }
  Residue mul(Residue a, Residue b) const {
    __extension__ using wide = unsigned __int128;
    return {static_cast<std::uint64_t>(static_cast<wide>(a.v) * b.v % p_)};
  }
  Residue mul_const(Residue a, Residue c) const { return mul(a, c); }
  Residue half(Residue a) const { return {a.v % 2 == 0 ? a.v / 2 : (a.v + p_) / 2}; }
  Residue from_rational(const Rational& q) const {
    Residue n = reduce(q.num());
    if (q.is_integer()) return n;
    BigInt d = q.den() % p_;
    auto inv = inverse(static_cast<std::uint64_t>(d));
    if (!inv) throw std::domain_error("constant " + q.str() + " has no inverse modulo " + std::to_string(p_));
    return mul(n, {*inv});
  }
  bool equal(Residue a, Residue b) const { return a == b; }
  bool two_invertible() const { return true; }
  std::string str(Residue a) const { return std::to_string(a.v); }
  std::string name() const { return "mod:" + std::to_string(p_); }

 private:
  Residue reduce(const BigInt& x) const {
    BigInt r = x % p_;
    if (r < 0) r += p_;
    return {static_cast<std::uint64_t>(r)};
  }
  std::optional<std::uint64_t> inverse(std::uint64_t a) const {
    std::int64_t t = 0, nt = 1;
    std::int64_t r = static_cast<std::int64_t>(p_), nr = static_cast<std::int64_t>(a);
    while (nr != 0) {
      std::int64_t q = r / nr;
      std::tie(t, nt) = std::pair{nt, t - q * nt};
      std::tie(r, nr) = std::pair{nr, r - q * nr};
    }
    if (r != 1) return std::nullopt;
    return static_cast<std::uint64_t>(t < 0 ? t + static_cast<std::int64_t>(p_) : t);
  }

  std::uint64_t p_;
};

struct FloatRing {
  using value_type = double;
  static constexpr bool is_exact = false;

  double zero() const { return 0.0; }
  double one() const { return 1.0; }
  double add(double a, double b) const { return a + b; }
  double sub(double a, double b) const { return a - b; }
  double neg(double a) const { return -a; }
  double mul(double a, double b) const { return a * b; }
  double mul_const(double a, double c) const { return a * c; }
  double half(double a) const { return a * 0.5; }
  double from_rational(const Rational& q) const { return q.to_double(); }
  bool equal(double a, double b) const { return a == b; }
  bool two_invertible() const { return true; }
  std::string str(double a) const {
    std::ostringstream os;
    os.precision(17);
    os << a;
    return os.str();
  }
  std::string name() const { return "f64"; }
};

// ============================================================================
// CountingRing: forwards to Base and tallies operations. Negation is free and
// tracked separately. Counts are per object: parallel work forks a child and
// merges it back in a fixed order.

template <Ring Base>
class CountingRing {
 public:
  using value_type = typename Base::value_type;
  using V = value_type;
  static constexpr bool is_exact = Base::is_exact;

  explicit CountingRing(Base base = Base()) : base_(std::move(base)) {}

  const Base& base() const { return base_; }
  OpCount counts() const { return counts_; }
  std::uint64_t negations() const { return negations_; }
  void reset() const {
    counts_ = {};
    negations_ = 0;
  }
  CountingRing fork() const { return CountingRing(base_); }
  void merge(const CountingRing& child) const {
    counts_ += child.counts_;
    negations_ += child.negations_;
  }

  V zero() const { return base_.zero(); }
  V one() const { return base_.one(); }
  V add(const V& a, const V& b) const {
    ++counts_.additions;
    return base_.add(a, b);
  }
  V sub(const V& a, const V& b) const {
    ++counts_.additions;
    return base_.sub(a, b);
  }
  V neg(const V& a) const {
    ++negations_;
    return base_.neg(a);
  }
  V mul(const V& a, const V& b) const {
    ++counts_.products;
    return base_.mul(a, b);
  }
  V mul_const(const V& a, const V& c) const {
    ++counts_.scalar_mults;
    return base_.mul_const(a, c);
  }
  V half(const V& a) const {
    ++counts_.scalar_mults;
    return base_.half(a);
  }
  V from_rational(const Rational& q) const { return base_.from_rational(q); }
  bool equal(const V& a, const V& b) const { return base_.equal(a, b); }
  bool two_invertible() const { return base_.two_invertible(); }
  std::string str(const V& a) const { return base_.str(a); }
  std::string name() const { return "counting(" + base_.name() + ")"; }

 private:
  Base base_;
  mutable OpCount counts_;
  mutable std::uint64_t negations_ = 0;
};

template <class R>
concept CountingLike = Ring<R> && requires(const R& r) {
  { r.counts() } -> std::same_as<OpCount>;
  { r.fork() } -> std::same_as<R>;
};

template <Ring R>
R fork_ring(const R& r) {
  if constexpr (CountingLike<R>)
    return r.fork();
  else
    return r;
}

template <Ring R>
void merge_ring(const R& parent, const R& child) {
  if constexpr (CountingLike<R>) parent.merge(child);
}

template <Ring R>
OpCount ring_counts(const R& r) {
  if constexpr (CountingLike<R>)
    return r.counts();
  else
    return {};
}

// ============================================================================
// random elements for tests, benchmarks and the CLI

inline Rational random_element(const RationalRing&, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 4);
  return Rational(BigInt(num(rng)), BigInt(den(rng)));
}
inline DyadicRational random_element(const DyadicRing&, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-9, 9), e(0, 3);
  return DyadicRational(BigInt(num(rng)), static_cast<unsigned>(e(rng)));
}
inline GaussianRational random_element(const GaussianRing&, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-5, 5), den(1, 3);
  return {Rational(BigInt(num(rng)), BigInt(den(rng))), Rational(BigInt(num(rng)), BigInt(den(rng)))};
}
inline BigInt random_element(const IntegerRing&, std::mt19937_64& rng) {
  return BigInt(std::uniform_int_distribution<int>(-9, 9)(rng));
}
inline Residue random_element(const ModularRing& r, std::mt19937_64& rng) {
  return {std::uniform_int_distribution<std::uint64_t>(0, r.modulus() - 1)(rng)};
}
inline double random_element(const FloatRing&, std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
}
template <Ring Base>
value_t<Base> random_element(const CountingRing<Base>& r, std::mt19937_64& rng) {
  return random_element(r.base(), rng);
}

}  // namespace fmm
