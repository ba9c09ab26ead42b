// Verify every built-in decomposition and print its type polynomial.
#include "fmm/builtins.hpp"

#include <iostream>

int main() {
  using namespace fmm;
  int bad = 0;
  for (const auto& name : builtin_names()) {
    auto d = builtin_decomposition(name);
    auto chk = verify_mm_tensor(d);
    std::cout << name << ": shape " << d.shape.str() << ", rank " << d.rank() << ", ";
    if (chk) {
      std::cout << "type " << tensor_type(d).str() << "\n";
    } else {
      std::cout << "FAILS at " << chk.witness() << "\n";
      ++bad;
    }
  }

  // the trilinear listing and the L, R, P matrices describe the same terms
  bool same = equivalent_up_to_term_scaling(builtin_decomposition("rational_4x4x4_48"),
                                            builtin_decomposition("rational_4x4x4_48_trilinear"));
  std::cout << "trilinear listing equivalent to LRP matrices: " << (same ? "yes" : "no") << "\n";
  return bad || !same;
}
