// Operation counts of the plain and alternative-basis recursions for n = 4^k.
#include "fmm/builtins.hpp"

#include <iomanip>
#include <iostream>

int main() {
  using namespace fmm;
  std::cout << std::setw(6) << "n" << std::setw(16) << "plain" << std::setw(16) << "alt core" << std::setw(14)
            << "basis change" << std::setw(16) << "alt total" << "\n";
  for (std::size_t n = 1; n <= 1024; n *= 4) {
    auto p = count_operations(CountScheme::plain_341, n);
    auto a = count_operations(CountScheme::alt_core_6, n);
    std::cout << std::setw(6) << n << std::setw(16) << p.total().total() << std::setw(16) << a.core.total()
              << std::setw(14) << a.cob().total() << std::setw(16) << a.total().total() << "\n";
  }

  // one instrumented run to show the counts are real
  CountingRing<ModularRing> ring(ModularRing(65521));
  std::mt19937_64 rng(3);
  auto A = random_matrix(ModularRing(65521), 16, 16, rng), B = random_matrix(ModularRing(65521), 16, 16, rng);
  AltStats st;
  auto C = multiply_alt_basis(ring, rational48_alt_scheme(), A, B, {}, &st);
  bool ok = matrices_equal(ModularRing(65521), C, multiply_naive(ModularRing(65521), A, B));
  std::cout << "n=16 over Z/65521: measured " << ring.counts().total() << " operations ("
            << st.cob().total() << " in basis changes), product " << (ok ? "correct" : "WRONG") << "\n";
  return !ok;
}
