// Move Strassen's algorithm around its isotropy orbit.
#include "fmm/builtins.hpp"

#include <iostream>
#include <random>

int main() {
  using namespace fmm;
  auto s = builtin_decomposition("strassen_2x2x2_7");

  // the complex isotropy shipped with the assets
  auto g = builtin_isotropy("example_2x2_complex");
  auto c = act_lrp(g, s);
  std::cout << "complex image verifies: " << (verify_mm_tensor(c) ? "yes" : "no") << "\n";
  for (std::size_t t = 0; t < c.rank(); ++t) {
    auto r1 = term(c, t);
    std::cout << "term " << t + 1 << "\nA =\n" << r1.A << "\nB =\n" << r1.B << "\nC =\n" << r1.C << "\n";
  }
  std::cout << "g^-1 restores Strassen: " << (act_lrp(inverse(g), c) == to_gaussian(s) ? "yes" : "no") << "\n";

  // random integer isotropies keep both correctness and type
  std::mt19937_64 rng(2024);
  int kept = 0;
  for (int i = 0; i < 20; ++i) {
    auto d = act_lrp(random_unimodular_isotropy(s.shape, rng), s);
    kept += verify_mm_tensor(d) && tensor_type(d).str() == tensor_type(s).str();
  }
  std::cout << kept << "/20 random unimodular images verify with type " << tensor_type(s).str() << "\n";
  return kept != 20;
}
