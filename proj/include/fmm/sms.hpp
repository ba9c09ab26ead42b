#pragma once

#include "fmm/matrix.hpp"
#include "fmm/rational.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <type_traits>
#include <vector>

namespace fmm {

// 1-based sparse text matrix: "<rows> <cols> M", "<i> <j> <v>" lines, "0 0 0".
struct SmsEntry {
  std::size_t i = 0, j = 0;
  std::string value;
  friend bool operator==(const SmsEntry&, const SmsEntry&) = default;
};

struct SmsMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<SmsEntry> entries;
  friend bool operator==(const SmsMatrix&, const SmsMatrix&) = default;
};

class SmsError : public std::runtime_error {
 public:
  SmsError(std::size_t line, const std::string& what)
      : std::runtime_error("sms line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// reduced form of an entry; write_sms drops zeros
inline std::string canonical_value(const std::string& v) {
  if (!v.empty() && v.back() == 'i') return GaussianRational::parse(v).str();
  return Rational::parse(v).str();
}

inline SmsMatrix read_sms(std::istream& in) {
  SmsMatrix m;
  std::string line;
  std::size_t lineno = 0;
  bool header = false, done = false;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (done) throw SmsError(lineno, "content after terminator");
    auto index = [&](const std::string& s) -> std::size_t {
      if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw SmsError(lineno, "bad index '" + s + "'");
      return std::stoul(s);
    };
    if (!header) {
      if (tok.size() != 3 || tok[2] != "M") throw SmsError(lineno, "malformed header, expected '<rows> <cols> M'");
      m.rows = index(tok[0]);
      m.cols = index(tok[1]);
      header = true;
      continue;
    }
    if (tok.size() != 3) throw SmsError(lineno, "expected '<i> <j> <value>'");
    std::size_t i = index(tok[0]), j = index(tok[1]);
    if (i == 0 && j == 0) {
      if (tok[2] != "0") throw SmsError(lineno, "malformed terminator");
      done = true;
      continue;
    }
    if (i < 1 || i > m.rows || j < 1 || j > m.cols)
      throw SmsError(lineno, "index (" + tok[0] + "," + tok[1] + ") out of range");
    if (!seen.insert({i, j}).second) throw SmsError(lineno, "duplicate entry (" + tok[0] + "," + tok[1] + ")");
    try {
      canonical_value(tok[2]);
    } catch (const std::exception& e) {
      throw SmsError(lineno, "bad value '" + tok[2] + "': " + e.what());
    }
    m.entries.push_back({i, j, tok[2]});
  }
  if (!header) throw SmsError(lineno, "missing header");
  if (!done) throw SmsError(lineno, "missing terminator '0 0 0'");
  return m;
}

inline SmsMatrix parse_sms(const std::string& text) {
  std::istringstream in(text);
  return read_sms(in);
}

inline void write_sms(const SmsMatrix& m, std::ostream& out) {
  std::vector<SmsEntry> e;
  for (const auto& x : m.entries) {
    std::string v = canonical_value(x.value);
    if (v != "0") e.push_back({x.i, x.j, v});
  }
  std::sort(e.begin(), e.end(), [](const SmsEntry& a, const SmsEntry& b) { return std::tie(a.i, a.j) < std::tie(b.i, b.j); });
  out << m.rows << ' ' << m.cols << " M\n";
  for (const auto& x : e) out << x.i << ' ' << x.j << ' ' << x.value << '\n';
  out << "0 0 0\n";
}

inline std::string sms_text(const SmsMatrix& m) {
  std::ostringstream os;
  write_sms(m, os);
  return os.str();
}

template <class T>
Matrix<T> sms_to_matrix(const SmsMatrix& s) {
  Matrix<T> m(s.rows, s.cols);
  for (const auto& e : s.entries) {
    if constexpr (std::is_same_v<T, Rational>) {
      if (!e.value.empty() && e.value.back() == 'i')
        throw std::invalid_argument("complex entry '" + e.value + "' in a rational matrix");
      m(e.i - 1, e.j - 1) = Rational::parse(e.value);
    } else {
      m(e.i - 1, e.j - 1) = T::parse(e.value);
    }
  }
  return m;
}

template <class T>
SmsMatrix matrix_to_sms(const Matrix<T>& m) {
  SmsMatrix s{m.rows(), m.cols(), {}};
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!(m(i, j) == T(0))) s.entries.push_back({i + 1, j + 1, m(i, j).str()});
  return s;
}

template <class T>
Matrix<T> read_sms_matrix(const std::string& text) {
  return sms_to_matrix<T>(parse_sms(text));
}

template <class T>
std::string sms_text(const Matrix<T>& m) {
  return sms_text(matrix_to_sms(m));
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << text;
}

}  // namespace fmm
