// Multiply two 4x4 matrices through the four shipped straight-line programs.
#include "fmm/builtins.hpp"

#include <iostream>
#include <random>

int main() {
  using namespace fmm;
  AssetStore store;
  auto L = store.slp("4x4x4_48_rational_L.slp");
  auto R = store.slp("4x4x4_48_rational_R.slp");
  auto prods = store.slp("4x4x4_48_rational_products.slp", true);
  auto P = store.slp("4x4x4_48_rational_P.slp");

  OpCount total;
  for (const auto* p : {&L, &R, &prods, &P}) total += count_ops(*p);
  std::cout << "L: " << count_ops(L) << "\nR: " << count_ops(R) << "\nproducts: " << count_ops(prods)
            << "\nP: " << count_ops(P) << "\nlinear operations: " << total.linear() << "\n";

  RationalRing q;
  std::mt19937_64 rng(7);
  auto A = random_matrix(q, 4, 4, rng), B = random_matrix(q, 4, 4, rng);
  auto C = run_full_slp_pipeline(q, L, R, prods, P, A, B);
  std::cout << "A =\n" << A << "\nB =\n" << B << "\nC =\n" << C << "\n";
  bool ok = C == multiply_naive(q, A, B);
  std::cout << "equals A*B: " << (ok ? "yes" : "no") << "\n";
  return !ok;
}
