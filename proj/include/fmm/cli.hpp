#pragma once

#include "fmm/builtins.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace fmm {

namespace cli {

// exit codes
inline constexpr int ok = 0;
inline constexpr int failed = 1;
inline constexpr int usage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using AnyRing = std::variant<RationalRing, DyadicRing, ModularRing, FloatRing, IntegerRing>;

inline AnyRing parse_ring(const std::string& s) {
  if (s == "rational") return RationalRing{};
  if (s == "dyadic") return DyadicRing{};
  if (s == "f64") return FloatRing{};
  if (s == "integer") return IntegerRing{};
  if (s.rfind("mod:", 0) == 0) {
    std::uint64_t p = 0;
    try {
      std::size_t used = 0;
      p = std::stoull(s.substr(4), &used);
      if (used != s.size() - 4) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw UsageError("bad modulus in ring '" + s + "'");
    }
    return ModularRing(p);
  }
  throw UsageError("unknown ring '" + s + "' (rational, dyadic, mod:<p>, f64, integer)");
}

// A path on disk wins; otherwise the name of an asset.
inline std::string load_text(const AssetStore& store, const std::string& name) {
  if (std::filesystem::exists(name)) return read_file(name);
  if (store.contains(name)) return store.text(name);
  throw std::runtime_error("no such file or asset '" + name + "'");
}

inline bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }

inline std::string strip_digits(const std::string& s) {
  std::size_t e = s.size();
  while (e > 0 && std::isdigit(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(0, e);
}

inline std::optional<std::size_t> square_side(std::size_t x) {
  std::size_t s = 0;
  while (s * s < x) ++s;
  if (s * s == x) return s;
  return std::nullopt;
}

// "A" -> A11..Ass when count = s*s; "l" -> l0..l(count-1); "x,y,z" -> as listed
inline std::vector<std::string> expand_names(const std::string& spec, std::size_t count) {
  if (spec.find(',') != std::string::npos) {
    std::vector<std::string> v;
    std::stringstream ss(spec);
    for (std::string t; std::getline(ss, t, ',');) v.push_back(t);
    return v;
  }
  if (spec.size() == 1 && is_upper(spec[0]))
    if (auto s = square_side(count)) return entry_names(spec[0], *s, *s);
  return indexed_names(spec, count);
}

// Guess the naming of count variables from the names a program uses.
inline std::optional<std::vector<std::string>> infer_names(const std::vector<std::string>& used, std::size_t count,
                                                           const std::function<bool(const std::string&)>& has) {
  std::vector<std::string> tried;
  for (const auto& u : used) {
    std::string pre = strip_digits(u);
    if (pre.empty() || std::find(tried.begin(), tried.end(), pre) != tried.end()) continue;
    tried.push_back(pre);
    auto v = expand_names(pre, count);
    if (v.size() == count && std::all_of(v.begin(), v.end(), has)) return v;
  }
  return std::nullopt;
}

inline std::string count_line(const OpCount& c) {
  std::string s = "additions=" + std::to_string(c.additions) + " shifts=" + std::to_string(c.scalar_mults);
  if (c.products) s += " products=" + std::to_string(c.products);
  return s;
}

// ----------------------------------------------------------------------------
// verify

struct DecompositionSource {
  std::string builtin, prefix, L, R, P;

  void add_to(CLI::App* c, const std::string& what) {
    c->add_option("--builtin", builtin, "built-in " + what + " (" + detail::available(builtin_names()) + ")");
    c->add_option("prefix", prefix, "read <prefix>_L.sms, <prefix>_R.sms, <prefix>_P.sms");
    c->add_option("--L", L, "L matrix file");
    c->add_option("--R", R, "R matrix file");
    c->add_option("--P", P, "P matrix file");
  }

  using Loaded = std::variant<LrpDecomposition<Rational>, AltBasisAlgorithm, LrpDecomposition<GaussianRational>>;

  // Files may carry complex entries (an orbit written by `orbit --out`).
  Loaded load(const AssetStore& store) const {
    int n = !builtin.empty() + !prefix.empty() + !(L.empty() && R.empty() && P.empty());
    if (n != 1) throw UsageError("give exactly one of --builtin NAME, PREFIX, or --L/--R/--P");
    if (!builtin.empty()) {
      auto b = fmm::builtin(builtin, store);
      if (auto* a = std::get_if<AltBasisAlgorithm>(&b)) return *a;
      return std::get<LrpDecomposition<Rational>>(b);
    }
    std::string l = L, r = R, pp = P;
    if (!prefix.empty()) {
      l = prefix + "_L.sms";
      r = prefix + "_R.sms";
      pp = prefix + "_P.sms";
    }
    if (l.empty() || r.empty() || pp.empty()) throw UsageError("--L, --R and --P must be given together");
    auto m = [](const std::string& f) { return read_sms_matrix<GaussianRational>(read_file(f)); };
    CMatrix cl = m(l), cr = m(r), cp = m(pp);
    LrpDecomposition<GaussianRational> d{infer_shape(cl.cols(), cr.cols(), cp.rows()), cl, cr, cp};
    if (is_real(d)) return to_rational(d);
    return d;
  }

  static LrpDecomposition<GaussianRational> complex(const Loaded& v) {
    if (auto* a = std::get_if<AltBasisAlgorithm>(&v)) return to_gaussian(a->recompose());
    if (auto* d = std::get_if<LrpDecomposition<Rational>>(&v)) return to_gaussian(*d);
    return std::get<LrpDecomposition<GaussianRational>>(v);
  }
};

template <class T>
int report_verification(const LrpDecomposition<T>& d, std::ostream& out) {
  auto chk = verify_mm_tensor(d);
  const auto s = d.shape;
  out << "shape=" << s.str() << " rank=" << d.rank() << " sextuples=" << s.m * s.k * s.k * s.n * s.m * s.n << "\n";
  if (!chk) {
    out << "verified=false\nwitness=" << chk.witness() << "\n";
    return failed;
  }
  out << "verified=true\nrank=" << d.rank() << " type=" << tensor_type(d).str() << "\n";
  return ok;
}

inline int run_verify(const DecompositionSource& src, const AssetStore& store, std::ostream& out) {
  auto v = src.load(store);
  if (auto* a = std::get_if<AltBasisAlgorithm>(&v)) {
    // load_alt_basis has already checked the three factorizations
    out << "factorizations=ok basis=" << a->basis() << "\n";
    return report_verification(a->recompose(), out);
  }
  if (auto* d = std::get_if<LrpDecomposition<Rational>>(&v)) return report_verification(*d, out);
  return report_verification(std::get<LrpDecomposition<GaussianRational>>(v), out);
}

// ----------------------------------------------------------------------------
// orbit

inline int run_orbit(const DecompositionSource& src, const std::string& iso_builtin, const std::string& iso_prefix,
                     bool invert, const std::string& out_prefix, const AssetStore& store, std::ostream& out) {
  auto d = DecompositionSource::complex(src.load(store));
  if (iso_builtin.empty() == iso_prefix.empty())
    throw UsageError("give exactly one of --isotropy NAME or --isotropy-files PREFIX");
  Isotropy g = iso_builtin.empty() ? load_isotropy_files(iso_prefix) : builtin_isotropy(iso_builtin, store);
  if (invert) g = inverse(g);
  auto r = act_lrp(g, d);
  auto dets = g.determinants();
  out << "det_U=" << dets[0] << " det_V=" << dets[1] << " det_W=" << dets[2]
      << " real=" << (is_real(r) ? "true" : "false") << "\n";
  int status = report_verification(r, out);
  if (!out_prefix.empty()) {
    if (is_real(r)) {
      auto q = to_rational(r);
      write_file(out_prefix + "_L.sms", sms_text(q.L));
      write_file(out_prefix + "_R.sms", sms_text(q.R));
      write_file(out_prefix + "_P.sms", sms_text(q.P));
    } else {
      write_file(out_prefix + "_L.sms", sms_text(r.L));
      write_file(out_prefix + "_R.sms", sms_text(r.R));
      write_file(out_prefix + "_P.sms", sms_text(r.P));
    }
    out << "written=" << out_prefix << "_{L,R,P}.sms\n";
  }
  return status;
}

// ----------------------------------------------------------------------------
// slp

inline int run_slp_check(const SlpProgram& p, const std::string& matrix, const std::string& inputs,
                         const std::string& outputs, const AssetStore& store, std::ostream& out) {
  out << "instructions=" << p.size() << " inputs=" << p.inputs().size() << " assigned=" << p.targets().size()
      << "\n"
      << count_line(count_ops(p)) << "\n";
  if (matrix.empty()) return ok;
  auto M = read_sms_matrix<Rational>(load_text(store, matrix));
  auto in_used = p.inputs();
  auto out_used = p.targets();
  auto in = inputs.empty()
                ? infer_names(in_used, M.cols(), [](const std::string&) { return true; })
                : std::optional(expand_names(inputs, M.cols()));
  auto outn = outputs.empty() ? infer_names(out_used, M.rows(), [&](const std::string& s) { return p.is_target(s); })
                              : std::optional(expand_names(outputs, M.rows()));
  if (!in) throw UsageError("cannot infer input names; pass --inputs");
  if (!outn) throw UsageError("cannot infer output names; pass --outputs");
  auto chk = verify_linear(p, M, *in, *outn);
  if (!chk) {
    out << "matches_matrix=false\nmismatch input=" << chk.input << " output=" << chk.output
        << " expected=" << chk.expected << " actual=" << chk.actual << "\n";
    return failed;
  }
  out << "matches_matrix=true\n";
  return ok;
}

inline int run_slp_run(const SlpProgram& p, const std::vector<std::string>& sets, const AnyRing& ring,
                       std::ostream& out) {
  return std::visit(
      [&](const auto& r) {
        using V = value_t<std::decay_t<decltype(r)>>;
        std::map<std::string, V> env;
        for (const auto& s : sets) {
          auto eq = s.find('=');
          if (eq == std::string::npos || eq == 0) throw UsageError("--set expects NAME=VALUE, got '" + s + "'");
          Rational q;
          try {
            q = Rational::parse(s.substr(eq + 1));
          } catch (const std::exception&) {
            throw UsageError("bad value in --set '" + s + "'");
          }
          env[s.substr(0, eq)] = r.from_rational(q);
        }
        for (const auto& in : p.inputs())
          if (!env.count(in)) throw UsageError("input '" + in + "' has no value; pass --set " + in + "=VALUE");
        auto res = eval_slp(r, p, env);
        for (const auto& name : p.outputs()) out << name << "=" << r.str(res.at(name)) << "\n";
        return ok;
      },
      ring);
}

// ----------------------------------------------------------------------------
// mul

inline AnyScheme parse_scheme(const std::string& s, bool slp_stages, const AssetStore& store) {
  if (s == "naive") return NaiveScheme{};
  auto colon = s.find(':');
  if (colon == std::string::npos) throw UsageError("unknown scheme '" + s + "' (naive, lrp:<name|prefix>, alt:<name|prefix>)");
  std::string kind = s.substr(0, colon), arg = s.substr(colon + 1);
  if (arg.empty()) throw UsageError("scheme '" + s + "' names nothing");
  const auto& names = builtin_names();
  bool is_builtin = std::find(names.begin(), names.end(), arg) != names.end();
  if (kind == "lrp") {
    if (arg == "rational_4x4x4_48" && slp_stages) return rational48_slp_scheme(store);
    if (is_builtin) return LrpScheme::from_decomposition(builtin_decomposition(arg, store), arg);
    return LrpScheme::from_decomposition(load_decomposition_files(arg), arg);
  }
  if (kind == "alt") {
    if (arg == "rational_4x4x4_48_alt" || arg == "rational_4x4x4_48") return rational48_alt_scheme(store, slp_stages);
    auto m = [&](const char* suf) { return read_sms_matrix<Rational>(read_file(arg + suf)); };
    AltBasisAlgorithm a{m("-ALT_L.sms"), m("-CoB_L.sms"), m("-ALT_R.sms"),
                        m("-CoB_R.sms"), m("-ALT_P.sms"), m("-CoB_P.sms")};
    a.validate();
    return AltScheme::from_algorithm(a, arg);
  }
  throw UsageError("unknown scheme kind '" + kind + "'");
}

struct MulOptions {
  std::string scheme = "naive", ring = "rational", format = "human", stages = "slp";
  std::vector<std::size_t> sizes;
  std::size_t threshold = 1, reps = 1;
  std::uint64_t seed = 1;
  bool parallel = false, timing = false;
};

inline int run_mul(const MulOptions& o, const AssetStore& store, std::ostream& out) {
  if (o.sizes.empty()) throw UsageError("--size is required");
  if (o.format != "human" && o.format != "kv") throw UsageError("--format must be human or kv");
  if (o.stages != "slp" && o.stages != "matrix") throw UsageError("--stages must be slp or matrix");
  AnyScheme s = parse_scheme(o.scheme, o.stages == "slp", store);
  AnyRing ring = parse_ring(o.ring);
  RecursionConfig cfg{o.threshold, o.parallel};
  return std::visit(
      [&](const auto& r) {
        auto rows = benchmark(s, r, o.sizes, o.reps, cfg, o.seed);
        bool all = true;
        const std::string name = scheme_name(s);
        if (o.format == "human") {
          out << "scheme " << name << ", ring " << r.name() << ", threshold " << o.threshold << "\n";
          out << std::setw(6) << "n" << std::setw(14) << "additions" << std::setw(12) << "shifts" << std::setw(14)
              << "products" << std::setw(14) << "total" << std::setw(14) << "predicted" << std::setw(12)
              << "seconds" << "  result\n";
        }
        for (const auto& row : rows) {
          all = all && row.matches_naive;
          const auto& m = row.measured;
          std::string pred = row.expected ? std::to_string(row.expected->total()) : "-";
          if (o.format == "kv") {
            out << "scheme=" << name << " ring=" << r.name() << " n=" << row.n << " threshold=" << o.threshold
                << " seed=" << o.seed << " additions=" << m.additions << " shifts=" << m.scalar_mults
                << " products=" << m.products << " total=" << m.total() << " predicted=" << pred;
            if (row.max_deviation) out << " max_deviation=" << std::setprecision(3) << *row.max_deviation;
            out << " matches_naive=" << (row.matches_naive ? "true" : "false");
            if (o.timing) out << " seconds=" << std::setprecision(6) << row.seconds;
            out << "\n";
          } else {
            out << std::setw(6) << row.n << std::setw(14) << m.additions << std::setw(12) << m.scalar_mults
                << std::setw(14) << m.products << std::setw(14) << m.total() << std::setw(14) << pred
                << std::setw(12) << std::setprecision(4) << row.seconds << "  "
                << (row.matches_naive ? "ok" : "MISMATCH");
            if (row.max_deviation) out << " (max deviation " << std::setprecision(3) << *row.max_deviation << ")";
            out << "\n";
          }
        }
        return all ? ok : failed;
      },
      ring);
}

// ----------------------------------------------------------------------------
// assets

inline std::string hex64(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

inline int run_assets_list(const AssetStore& store, std::ostream& out) {
  for (const auto& n : store.names()) {
    auto t = store.text(n);
    out << n << " bytes=" << t.size() << " fnv1a64=" << hex64(fnv1a64(t)) << "\n";
  }
  return ok;
}

inline int run_assets_export(const AssetStore& store, const std::string& dir, std::ostream& out) {
  std::filesystem::create_directories(dir);
  auto names = store.names();
  for (const auto& n : names) write_file((std::filesystem::path(dir) / n).string(), store.text(n));
  out << "exported=" << names.size() << " dir=" << dir << "\n";
  return ok;
}

}  // namespace cli

// Parses args (without the program name) and runs one subcommand.
// Returns 0 on success, 1 when a verification fails, 2 on usage or I/O errors.
inline int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace cli;
  CLI::App app{"Fast 4x4 matrix multiplication: verification, isotropies, straight-line programs", "fmm48"};
  app.require_subcommand(1);
  std::string assets_dir;
  app.add_option("--assets-dir", assets_dir, "read assets from this directory instead of the embedded copies");

  DecompositionSource vsrc;
  auto* verify = app.add_subcommand("verify", "check a decomposition against the matrix-multiplication tensor");
  vsrc.add_to(verify, "decomposition");

  DecompositionSource osrc;
  std::string iso_builtin, iso_prefix, orbit_out;
  bool orbit_inverse = false;
  auto* orbit = app.add_subcommand("orbit", "apply an isotropy to a decomposition");
  osrc.add_to(orbit, "decomposition");
  orbit->add_option("--isotropy", iso_builtin,
                    "built-in isotropy (" + detail::available(builtin_isotropy_names()) + ")");
  orbit->add_option("--isotropy-files", iso_prefix, "read <prefix>_U.sms, <prefix>_V.sms, <prefix>_W.sms");
  orbit->add_flag("--inverse", orbit_inverse, "apply the inverse isotropy");
  orbit->add_option("--out", orbit_out, "write the result to <prefix>_{L,R,P}.sms");

  auto* slp = app.add_subcommand("slp", "straight-line programs");
  slp->require_subcommand(1);
  std::string slp_file, slp_matrix, slp_inputs, slp_outputs, slp_ring = "rational";
  std::vector<std::string> slp_sets;
  auto* s_parse = slp->add_subcommand("parse", "parse and print in canonical form");
  auto* s_check = slp->add_subcommand("check", "parse, count, and optionally compare with a coefficient matrix");
  auto* s_count = slp->add_subcommand("count", "count additions, shifts and products");
  auto* s_run = slp->add_subcommand("run", "evaluate on given inputs");
  for (auto* c : {s_parse, s_check, s_count, s_run})
    c->add_option("file", slp_file, "program file or asset name")->required();
  s_check->add_option("--matrix", slp_matrix, "SMS coefficient matrix (file or asset name)");
  s_check->add_option("--inputs", slp_inputs, "input names: a letter (A -> A11..), a prefix (l -> l0..) or a list");
  s_check->add_option("--outputs", slp_outputs, "output names, same forms as --inputs");
  s_run->add_option("--set", slp_sets, "NAME=VALUE, repeatable");
  s_run->add_option("--ring", slp_ring, "rational, dyadic, mod:<p>, f64, integer");

  MulOptions mo;
  auto* mul = app.add_subcommand("mul", "multiply random matrices and report operation counts");
  mul->add_option("--scheme", mo.scheme, "naive | lrp:<name|prefix> | alt:<name|prefix>");
  mul->add_option("--ring", mo.ring, "rational | dyadic | mod:<p> | f64 | integer");
  mul->add_option("--size", mo.sizes, "matrix side, repeatable or comma separated")->delimiter(',');
  mul->add_option("--threshold", mo.threshold, "naive at or below this side");
  mul->add_option("--seed", mo.seed, "random seed");
  mul->add_option("--reps", mo.reps, "timed repetitions per size");
  mul->add_option("--format", mo.format, "human | kv");
  mul->add_option("--stages", mo.stages, "slp | matrix: how the linear stages are executed");
  mul->add_flag("--parallel", mo.parallel, "run top-level products concurrently");
  mul->add_flag("--timing", mo.timing, "include seconds in kv output");

  auto* assets = app.add_subcommand("assets", "list or export the embedded assets");
  assets->require_subcommand(1);
  std::string export_dir;
  auto* a_list = assets->add_subcommand("list", "names, sizes and checksums");
  auto* a_export = assets->add_subcommand("export", "write every asset into a directory");
  a_export->add_option("dir", export_dir, "target directory")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  auto selected = [&]() -> CLI::App* {
    CLI::App* a = &app;
    while (!a->get_subcommands().empty()) a = a->get_subcommands().back();
    return a;
  };
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << selected()->help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << selected()->help();
    return usage;
  }

  AssetStore store = assets_dir.empty() ? AssetStore::from_environment() : AssetStore(assets_dir);
  try {
    if (verify->parsed()) return run_verify(vsrc, store, out);
    if (orbit->parsed()) return run_orbit(osrc, iso_builtin, iso_prefix, orbit_inverse, orbit_out, store, out);
    if (slp->parsed()) {
      auto p = parse_slp(load_text(store, slp_file), {true});
      if (s_parse->parsed()) {
        out << print_slp(p);
        return ok;
      }
      if (s_count->parsed()) {
        out << count_line(count_ops(p)) << "\n";
        return ok;
      }
      if (s_check->parsed()) return run_slp_check(p, slp_matrix, slp_inputs, slp_outputs, store, out);
      return run_slp_run(p, slp_sets, parse_ring(slp_ring), out);
    }
    if (mul->parsed()) return run_mul(mo, store, out);
    if (a_list->parsed()) return run_assets_list(store, out);
    if (a_export->parsed()) return run_assets_export(store, export_dir, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << selected()->help();
    return usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  }
  return usage;
}

inline int cli_dispatch(int argc, const char* const* argv, std::ostream& out = std::cout,
                        std::ostream& err = std::cerr) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_dispatch(args, out, err);
}

}  // namespace fmm
