#pragma once

#include <cstdint>
#include <ostream>

namespace fmm {

// additions include subtractions; scalar_mults are *c or /c with |c| != 1
struct OpCount {
  std::uint64_t additions = 0;
  std::uint64_t scalar_mults = 0;
  std::uint64_t products = 0;

  std::uint64_t linear() const { return additions + scalar_mults; }
  std::uint64_t total() const { return additions + scalar_mults + products; }

  OpCount& operator+=(const OpCount& o) {
    additions += o.additions;
    scalar_mults += o.scalar_mults;
    products += o.products;
    return *this;
  }
  friend OpCount operator+(OpCount a, const OpCount& b) { return a += b; }
  friend OpCount operator-(OpCount a, const OpCount& b) {
    a.additions -= b.additions;
    a.scalar_mults -= b.scalar_mults;
    a.products -= b.products;
    return a;
  }
  friend OpCount operator*(OpCount a, std::uint64_t k) {
    a.additions *= k;
    a.scalar_mults *= k;
    a.products *= k;
    return a;
  }
  friend bool operator==(const OpCount&, const OpCount&) = default;

  friend std::ostream& operator<<(std::ostream& os, const OpCount& c) {
    return os << "additions=" << c.additions << " shifts=" << c.scalar_mults << " products=" << c.products;
  }
};

}  // namespace fmm
