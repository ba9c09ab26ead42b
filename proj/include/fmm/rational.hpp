#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace fmm {

using BigInt = boost::multiprecision::cpp_int;

inline bool is_power_of_two(const BigInt& x) { return x > 0 && (x & (x - 1)) == 0; }

// exponent of 2 in a power of two; caller checks is_power_of_two
inline unsigned log2_exact(const BigInt& x) { return static_cast<unsigned>(boost::multiprecision::msb(x)); }

inline bool is_even(const BigInt& x) { return !boost::multiprecision::bit_test(x < 0 ? BigInt(-x) : x, 0); }

// x / 2^k for x divisible by 2^k, acting on the magnitude
inline BigInt shr_exact(const BigInt& x, unsigned k) { return x < 0 ? BigInt(-(BigInt(-x) >> k)) : BigInt(x >> k); }

inline BigInt parse_bigint(std::string_view s) {
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = s[i++] == '-';
  if (i == s.size()) throw std::invalid_argument("expected digits in '" + std::string(s) + "'");
  BigInt v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("bad digit in '" + std::string(s) + "'");
    v = v * 10 + (s[i] - '0');
  }
  return neg ? BigInt(-v) : v;
}

// ============================================================================
// Rational: reduced num/den with den > 0

class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long n) : num_(n), den_(1) {}  // NOLINT: implicit from integers
  Rational(int n) : num_(n), den_(1) {}        // NOLINT
  Rational(BigInt n) : num_(std::move(n)), den_(1) {}  // NOLINT
  Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  bool is_dyadic() const { return is_power_of_two(den_); }
  int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }
  Rational abs() const { return num_ < 0 ? -*this : *this; }

  Rational operator-() const { return raw(-num_, den_); }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.den_ == 1 && b.den_ == 1) return raw(a.num_ + b.num_, 1);
    if (a.den_ == b.den_) return Rational(a.num_ + b.num_, a.den_);
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    if (a.den_ == 1 && b.den_ == 1) return raw(a.num_ - b.num_, 1);
    if (a.den_ == b.den_) return Rational(a.num_ - b.num_, a.den_);
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    if (a.den_ == 1 && b.den_ == 1) return raw(a.num_ * b.num_, 1);
    if (a.num_ == 0 || b.num_ == 0) return Rational();
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
  }

  friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    BigInt l = a.num_ * b.den_, r = b.num_ * a.den_;
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  Rational inverse() const {
    if (num_ == 0) throw std::domain_error("inverse of zero");
    return Rational(den_, num_);
  }

  // half(x) = x * 2^-1
  Rational half() const {
    if (num_ == 0) return *this;
    if (is_even(num_)) return raw(shr_exact(num_, 1), den_);
    return raw(num_, den_ << 1);
  }

  double to_double() const { return num_.convert_to<double>() / den_.convert_to<double>(); }

  std::string str() const {
    std::string s = num_.str();
    if (den_ != 1) s += "/" + den_.str();
    return s;
  }

  // optional sign, digits, optional "/" positive digits
  static Rational parse(std::string_view s) {
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return Rational(parse_bigint(s));
    auto d = s.substr(slash + 1);
    if (d.empty() || d[0] == '+' || d[0] == '-')
      throw std::invalid_argument("bad denominator in '" + std::string(s) + "'");
    BigInt den = parse_bigint(d);
    if (den == 0) throw std::domain_error("zero denominator in '" + std::string(s) + "'");
    return Rational(parse_bigint(s.substr(0, slash)), den);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

 private:
  static Rational raw(BigInt n, BigInt d) {
    Rational q;
    q.num_ = std::move(n);
    q.den_ = std::move(d);
    return q;
  }
  void normalize() {
    if (den_ == 0) throw std::domain_error("zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    if (num_ == 0) {
      den_ = 1;
      return;
    }
    if (den_ == 1) return;
    BigInt g = boost::multiprecision::gcd(num_, den_);
    if (g != 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  BigInt num_, den_;
};

inline Rational canonicalize(const BigInt& num, const BigInt& den) { return Rational(num, den); }

// ============================================================================
// DyadicRational: num / 2^exp2 with num odd, or exp2 = 0

class DyadicRational {
 public:
  DyadicRational() = default;
  DyadicRational(long long n) : num_(n) { normalize(); }  // NOLINT
  DyadicRational(BigInt n, unsigned e = 0) : num_(std::move(n)), exp2_(e) { normalize(); }

  static DyadicRational from_rational(const Rational& q) {
    if (!q.is_dyadic()) throw std::domain_error("not a dyadic rational: " + q.str());
    return DyadicRational(q.num(), log2_exact(q.den()));
  }
  Rational to_rational() const { return Rational(num_, BigInt(1) << exp2_); }

  const BigInt& num() const { return num_; }
  unsigned exp2() const { return exp2_; }
  bool is_zero() const { return num_ == 0; }

  DyadicRational operator-() const { return raw(-num_, exp2_); }
  friend DyadicRational operator+(const DyadicRational& a, const DyadicRational& b) {
    if (a.exp2_ == b.exp2_) return DyadicRational(a.num_ + b.num_, a.exp2_);
    if (a.exp2_ > b.exp2_) return DyadicRational(a.num_ + (b.num_ << (a.exp2_ - b.exp2_)), a.exp2_);
    return DyadicRational((a.num_ << (b.exp2_ - a.exp2_)) + b.num_, b.exp2_);
  }
  friend DyadicRational operator-(const DyadicRational& a, const DyadicRational& b) { return a + (-b); }
  friend DyadicRational operator*(const DyadicRational& a, const DyadicRational& b) {
    if (a.num_ == 0 || b.num_ == 0) return {};
    return DyadicRational(a.num_ * b.num_, a.exp2_ + b.exp2_);
  }
  friend bool operator==(const DyadicRational& a, const DyadicRational& b) {
    return a.num_ == b.num_ && a.exp2_ == b.exp2_;
  }

  DyadicRational half() const { return DyadicRational(num_, exp2_ + 1); }
  DyadicRational div_pow2(unsigned k) const { return DyadicRational(num_, exp2_ + k); }

  std::string str() const { return to_rational().str(); }
  friend std::ostream& operator<<(std::ostream& os, const DyadicRational& q) { return os << q.str(); }

 private:
  static DyadicRational raw(BigInt n, unsigned e) {
    DyadicRational q;
    q.num_ = std::move(n);
    q.exp2_ = e;
    return q;
  }
  void normalize() {
    if (num_ == 0) {
      exp2_ = 0;
      return;
    }
    if (exp2_ == 0) return;
    unsigned tz = static_cast<unsigned>(boost::multiprecision::lsb(num_ < 0 ? BigInt(-num_) : num_));
    unsigned s = tz < exp2_ ? tz : exp2_;
    num_ = shr_exact(num_, s);
    exp2_ -= s;
  }

  BigInt num_ = 0;
  unsigned exp2_ = 0;
};

// ============================================================================
// GaussianRational: re + im*i over Q

class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(Rational re) : re_(std::move(re)) {}  // NOLINT
  GaussianRational(long long re) : re_(re) {}            // NOLINT
  GaussianRational(int re) : re_(re) {}                  // NOLINT
  GaussianRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

  static GaussianRational i() { return {Rational(0), Rational(1)}; }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }
  bool is_real() const { return im_.is_zero(); }
  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }

  GaussianRational conj() const { return {re_, -im_}; }
  GaussianRational operator-() const { return {-re_, -im_}; }
  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re_ + b.re_, a.im_ + b.im_};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re_ - b.re_, a.im_ - b.im_};
  }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    if (a.is_real() && b.is_real()) return {a.re_ * b.re_};
    return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
  }
  GaussianRational inverse() const {
    Rational n = re_ * re_ + im_ * im_;
    if (n.is_zero()) throw std::domain_error("inverse of zero");
    return {re_ / n, -im_ / n};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    return a * b.inverse();
  }
  GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }
  GaussianRational& operator-=(const GaussianRational& o) { return *this = *this - o; }
  GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  GaussianRational half() const { return {re_.half(), im_.half()}; }

  // "a", "bi", "a+bi", "a-bi"; b == 1 prints as "i"
  std::string str() const {
    if (im_.is_zero()) return re_.str();
    std::string ims = im_ == Rational(1) ? "i" : im_ == Rational(-1) ? "-i" : im_.str() + "i";
    if (re_.is_zero()) return ims;
    return re_.str() + (ims[0] == '-' ? "" : "+") + ims;
  }

  static GaussianRational parse(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("empty complex literal");
    if (s.back() != 'i') return {Rational::parse(s)};
    std::string_view body = s.substr(0, s.size() - 1);
    // split at the last sign that is not leading
    std::size_t cut = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;)
      if (body[k] == '+' || body[k] == '-') {
        cut = k;
        break;
      }
    auto imag = [&](std::string_view t) {
      if (t.empty() || t == "+") return Rational(1);
      if (t == "-") return Rational(-1);
      return Rational::parse(t);
    };
    if (cut == std::string_view::npos) return {Rational(0), imag(body)};
    return {Rational::parse(body.substr(0, cut)), imag(body.substr(cut))};
  }

  friend std::ostream& operator<<(std::ostream& os, const GaussianRational& z) { return os << z.str(); }

 private:
  Rational re_, im_;
};

}  // namespace fmm

template <>
struct std::hash<fmm::Rational> {
  std::size_t operator()(const fmm::Rational& q) const {
    return std::hash<std::string>{}(q.str());
  }
};
