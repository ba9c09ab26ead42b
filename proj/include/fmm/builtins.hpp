#pragma once

#include "fmm/fastmm.hpp"
#include "fmm/isotropy.hpp"
#include "fmm/slp.hpp"
#include "fmm/sms.hpp"
#include "fmm/tensor.hpp"

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fmm {

namespace detail {

// generated at configure time from assets/
inline const std::map<std::string_view, std::string_view>& embedded_assets() {
  static const std::map<std::string_view, std::string_view> m = {
#include "fmm/embedded_assets.inc"
  };
  return m;
}

}  // namespace detail

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Embedded asset texts, or files from a directory override.
class AssetStore {
 public:
  AssetStore() = default;
  explicit AssetStore(std::string dir) : dir_(std::move(dir)) {}

  // FMM48_ASSETS_DIR if set, embedded copies otherwise
  static AssetStore from_environment() {
    if (const char* d = std::getenv("FMM48_ASSETS_DIR"); d && *d) return AssetStore(d);
    return {};
  }

  bool embedded() const { return !dir_; }
  const std::optional<std::string>& directory() const { return dir_; }

  std::string text(const std::string& name) const {
    if (dir_) return read_file((std::filesystem::path(*dir_) / name).string());
    const auto& m = detail::embedded_assets();
    auto it = m.find(name);
    if (it == m.end()) throw std::invalid_argument("unknown asset '" + name + "'");
    return std::string(it->second);
  }

  bool contains(const std::string& name) const {
    if (dir_) return std::filesystem::exists(std::filesystem::path(*dir_) / name);
    return detail::embedded_assets().count(name) > 0;
  }

  std::vector<std::string> names() const {
    std::vector<std::string> v;
    if (dir_) {
      for (const auto& e : std::filesystem::directory_iterator(*dir_))
        if (e.is_regular_file()) v.push_back(e.path().filename().string());
      std::sort(v.begin(), v.end());
    } else {
      for (const auto& [k, _] : detail::embedded_assets()) v.emplace_back(k);
    }
    return v;
  }

  Matrix<Rational> matrix(const std::string& name) const { return read_sms_matrix<Rational>(text(name)); }
  CMatrix complex_matrix(const std::string& name) const { return read_sms_matrix<GaussianRational>(text(name)); }
  SlpProgram slp(const std::string& name, bool products = false) const {
    return parse_slp(text(name), {products});
  }

 private:
  std::optional<std::string> dir_;
};

// ============================================================================
// decompositions

inline LrpDecomposition<Rational> decomposition_from_matrices(Matrix<Rational> L, Matrix<Rational> R,
                                                              Matrix<Rational> P) {
  MatShape s = infer_shape(L.cols(), R.cols(), P.rows());
  return {s, std::move(L), std::move(R), std::move(P)};
}

// <prefix>_L.sms, <prefix>_R.sms, <prefix>_P.sms
inline LrpDecomposition<Rational> load_decomposition(const AssetStore& store, const std::string& prefix) {
  return decomposition_from_matrices(store.matrix(prefix + "_L.sms"), store.matrix(prefix + "_R.sms"),
                                     store.matrix(prefix + "_P.sms"));
}

inline LrpDecomposition<Rational> load_decomposition_files(const std::string& prefix) {
  auto m = [&](const char* s) { return read_sms_matrix<Rational>(read_file(prefix + s)); };
  return decomposition_from_matrices(m("_L.sms"), m("_R.sms"), m("_P.sms"));
}

// A trilinear listing assigns a<t>, b<t>, c<t> for t = 1..r as linear forms in
// A.., B.. and C..; the coefficient of C(i,j) in c<t> is P(i*n + j, t).
inline LrpDecomposition<Rational> decomposition_from_trilinear(const SlpProgram& p, MatShape s) {
  std::size_t r = 0;
  while (p.is_target("a" + std::to_string(r + 1))) ++r;
  if (r == 0) throw std::invalid_argument("trilinear program assigns no a1");
  auto ia = entry_names('A', s.m, s.k), ib = entry_names('B', s.k, s.n), ic = entry_names('C', s.m, s.n);
  std::vector<std::string> in = ia;
  in.insert(in.end(), ib.begin(), ib.end());
  in.insert(in.end(), ic.begin(), ic.end());
  std::vector<std::string> out;
  for (char f : {'a', 'b', 'c'})
    for (std::size_t t = 1; t <= r; ++t) out.push_back(std::string(1, f) + std::to_string(t));
  Matrix<Rational> M = linear_forms(p, in, out);
  Matrix<Rational> L(r, ia.size()), R(r, ib.size()), P(ic.size(), r);
  const std::size_t na = ia.size(), nb = ib.size();
  for (std::size_t t = 0; t < r; ++t)
    for (std::size_t j = 0; j < in.size(); ++j) {
      const Rational &a = M(t, j), &b = M(r + t, j), &c = M(2 * r + t, j);
      bool in_a = j < na, in_b = j >= na && j < na + nb, in_c = j >= na + nb;
      if ((!in_a && !a.is_zero()) || (!in_b && !b.is_zero()) || (!in_c && !c.is_zero()))
        throw std::invalid_argument("trilinear factor of term " + std::to_string(t + 1) + " mixes operands");
      if (in_a) L(t, j) = a;
      if (in_b) R(t, j - na) = b;
      if (in_c) P(j - na - nb, t) = c;
    }
  return {s, std::move(L), std::move(R), std::move(P)};
}

inline const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> v = {"strassen_2x2x2_7", "rational_4x4x4_48", "rational_4x4x4_48_trilinear",
                                             "rational_4x4x4_48_alt"};
  return v;
}

namespace detail {

inline std::string available(const std::vector<std::string>& names) {
  std::string s;
  for (const auto& n : names) s += (s.empty() ? "" : ", ") + n;
  return s;
}

}  // namespace detail

inline AltBasisAlgorithm load_alt_basis(const AssetStore& store, const std::string& prefix) {
  AltBasisAlgorithm a{store.matrix(prefix + "-ALT_L.sms"), store.matrix(prefix + "-CoB_L.sms"),
                      store.matrix(prefix + "-ALT_R.sms"), store.matrix(prefix + "-CoB_R.sms"),
                      store.matrix(prefix + "-ALT_P.sms"), store.matrix(prefix + "-CoB_P.sms")};
  a.validate();
  return a;
}

inline LrpDecomposition<Rational> builtin_decomposition(const std::string& name, const AssetStore& store = {}) {
  if (name == "strassen_2x2x2_7") return load_decomposition(store, "strassen");
  if (name == "rational_4x4x4_48") return load_decomposition(store, "4x4x4_48_rational");
  if (name == "rational_4x4x4_48_trilinear")
    return decomposition_from_trilinear(store.slp("4x4x4_48_rational_trilinear.slp"), {4, 4, 4});
  if (name == "rational_4x4x4_48_alt") return load_alt_basis(store, "4x4x4_48_rational").recompose();
  throw std::invalid_argument("unknown builtin '" + name + "'; available: " + detail::available(builtin_names()));
}

inline AltBasisAlgorithm builtin_alt(const std::string& name, const AssetStore& store = {}) {
  if (name == "rational_4x4x4_48_alt") return load_alt_basis(store, "4x4x4_48_rational");
  throw std::invalid_argument("unknown alternative-basis builtin '" + name + "'; available: rational_4x4x4_48_alt");
}

inline std::variant<LrpDecomposition<Rational>, AltBasisAlgorithm> builtin(const std::string& name,
                                                                         const AssetStore& store = {}) {
  if (name == "rational_4x4x4_48_alt") return builtin_alt(name, store);
  return builtin_decomposition(name, store);
}

// ============================================================================
// isotropies

inline const std::vector<std::string>& builtin_isotropy_names() {
  static const std::vector<std::string> v = {"example_2x2_complex", "paper_4x4_complexifier"};
  return v;
}

inline Isotropy load_isotropy(const AssetStore& store, const std::string& prefix) {
  return {store.complex_matrix(prefix + "_U.sms"), store.complex_matrix(prefix + "_V.sms"),
          store.complex_matrix(prefix + "_W.sms")};
}

inline Isotropy load_isotropy_files(const std::string& prefix) {
  auto m = [&](const char* s) { return read_sms_matrix<GaussianRational>(read_file(prefix + s)); };
  return {m("_U.sms"), m("_V.sms"), m("_W.sms")};
}

inline Isotropy builtin_isotropy(const std::string& name, const AssetStore& store = {}) {
  for (const auto& n : builtin_isotropy_names())
    if (n == name) return load_isotropy(store, name);
  throw std::invalid_argument("unknown builtin isotropy '" + name + "'; available: " +
                              detail::available(builtin_isotropy_names()));
}

// ============================================================================
// schemes driven by the shipped programs

inline LrpScheme rational48_slp_scheme(const AssetStore& store = {}) {
  return LrpScheme::from_slps("rational_4x4x4_48", 4, 48, store.slp("4x4x4_48_rational_L.slp"),
                              store.slp("4x4x4_48_rational_R.slp"),
                              store.slp("4x4x4_48_rational_products.slp", true),
                              store.slp("4x4x4_48_rational_P.slp"));
}

inline AltScheme rational48_alt_scheme(const AssetStore& store = {}, bool slp_cob = true) {
  auto a = builtin_alt("rational_4x4x4_48_alt", store);
  if (!slp_cob) return AltScheme::from_algorithm(a, "rational_4x4x4_48_alt");
  return AltScheme::from_algorithm(a, store.slp("4x4x4_48_rational-CoB_L.slp"),
                                   store.slp("4x4x4_48_rational-CoB_R.slp"),
                                   store.slp("4x4x4_48_rational-CoB_P.slp"), "rational_4x4x4_48_alt");
}

// ============================================================================
// operation counts for n = 4^k

enum class CountScheme { plain_341, alt_core_6 };

struct ComplexityReport {
  std::size_t n = 0, k = 0;
  OpCount core;                           // products and linear work of the recursion proper
  OpCount cob_left, cob_right, cob_out;   // change-of-basis work, zero for the plain scheme
  Rational core_closed_form, cob_closed_form;
  OpCount cob() const { return cob_left + cob_right + cob_out; }
  OpCount total() const { return core + cob(); }
};

inline ComplexityReport count_operations(CountScheme scheme, std::size_t n, const AssetStore& store = {}) {
  auto k = log_exact(n, 4);
  if (!k) throw std::invalid_argument("count_operations: n = " + std::to_string(n) + " is not a power of 4");
  ComplexityReport rep;
  rep.n = n;
  rep.k = *k;
  if (scheme == CountScheme::plain_341) {
    auto s = rational48_slp_scheme(store);
    rep.core = *predict_counts(s, n, 1);
    rep.core_closed_form = plain_closed_form(s.rank, s.base, s.stage_cost().linear(), *k);
    if (rep.core_closed_form != Rational(BigInt(rep.core.total())))
      throw std::logic_error("recurrence and closed form disagree for n = " + std::to_string(n));
    return rep;
  }
  auto s = rational48_alt_scheme(store);
  auto p = *predict_counts(s, n, 1);
  rep.core = p.core;
  rep.cob_left = p.transform_left;
  rep.cob_right = p.transform_right;
  rep.cob_out = p.untransform;
  rep.core_closed_form = alt_core_closed_form(s.rank, s.basis, s.core_cost().linear(), *k);
  rep.cob_closed_form = cob_closed_form(s.basis, s.base,
                                        (s.cob_left.cost() + s.cob_right.cost() + s.cob_out.cost()).linear(), *k);
  if (rep.core_closed_form != Rational(BigInt(rep.core.total())) ||
      rep.cob_closed_form != Rational(BigInt(rep.cob().total())))
    throw std::logic_error("recurrence and closed form disagree for n = " + std::to_string(n));
  return rep;
}

}  // namespace fmm
