#pragma once

#include "fmm/matrix.hpp"
#include "fmm/op_count.hpp"
#include "fmm/rational.hpp"
#include "fmm/rings.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fmm {

class SlpError : public std::runtime_error {
 public:
  SlpError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

enum class SlpOp { var, constant, neg, add, sub, mul_const, div_const, mul };

struct SlpNode {
  SlpOp op = SlpOp::constant;
  int a = -1, b = -1;  // child nodes
  int sym = -1;        // variable symbol
  BigInt c = 0;        // constant, multiplier or divisor
};

struct SlpInstruction {
  int target = -1;  // symbol
  int root = -1;    // node
  std::size_t line = 0, column = 0;
};

struct SlpParseOptions {
  bool allow_products = false;
};

class SlpProgram {
 public:
  const std::vector<SlpNode>& nodes() const { return nodes_; }
  const std::vector<SlpInstruction>& instructions() const { return instr_; }
  const std::string& symbol(int s) const { return symbols_[static_cast<std::size_t>(s)]; }
  std::optional<int> find_symbol(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // unassigned variables, in order of first use
  std::vector<std::string> inputs() const {
    std::vector<std::string> v;
    for (int s : inputs_) v.push_back(symbol(s));
    return v;
  }
  // assigned variables, in assignment order
  std::vector<std::string> targets() const {
    std::vector<std::string> v;
    for (const auto& in : instr_) v.push_back(symbol(in.target));
    return v;
  }
  bool is_target(const std::string& name) const {
    auto s = find_symbol(name);
    return s && assigned_[static_cast<std::size_t>(*s)];
  }
  bool is_input(const std::string& name) const {
    auto s = find_symbol(name);
    return s && !assigned_[static_cast<std::size_t>(*s)];
  }

  // declared outputs; defaults to every target
  std::vector<std::string> outputs() const { return outputs_ ? *outputs_ : targets(); }
  void set_outputs(std::vector<std::string> names) {
    for (const auto& n : names)
      if (!is_target(n)) throw std::invalid_argument("declared output '" + n + "' is not assigned by the program");
    outputs_ = std::move(names);
  }

  bool has_products() const {
    for (const auto& n : nodes_)
      if (n.op == SlpOp::mul) return true;
    return false;
  }
  std::size_t size() const { return instr_.size(); }
  bool empty() const { return instr_.empty(); }

 private:
  friend class SlpParser;
  int intern(const std::string& name) {
    auto [it, fresh] = index_.try_emplace(name, static_cast<int>(symbols_.size()));
    if (fresh) {
      symbols_.push_back(name);
      assigned_.push_back(false);
    }
    return it->second;
  }

  std::vector<SlpNode> nodes_;
  std::vector<SlpInstruction> instr_;
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, int> index_;
  std::vector<bool> assigned_;
  std::vector<int> inputs_;
  std::optional<std::vector<std::string>> outputs_;
};

// ============================================================================
// parser

class SlpParser {
 public:
  SlpParser(std::string_view text, SlpParseOptions opt) : s_(text), opt_(opt) {}

  SlpProgram run() {
    skip();
    while (pos_ < s_.size()) {
      std::size_t line = line_, col = col_;
      if (!ident_start(peek())) fail("expected assignment target");
      std::string target = ident();
      skip();
      if (!(peek() == ':' && peek(1) == '=')) fail("expected ':='");
      advance(2);
      skip();
      int root = expr();
      skip();
      if (peek() != ';') fail(pos_ < s_.size() ? std::string("unexpected '") + peek() + "'" : "expected ';'");
      advance(1);
      skip();
      int sym = p_.intern(target);
      auto& u = used_at_[sym];
      if (p_.assigned_[static_cast<std::size_t>(sym)])
        throw SlpError(line, col, "double assignment of '" + target + "'");
      if (u.first)
        throw SlpError(u.first, u.second, "use of '" + target + "' before its assignment at line " +
                                              std::to_string(line) + ", column " + std::to_string(col));
      p_.assigned_[static_cast<std::size_t>(sym)] = true;
      p_.instr_.push_back({sym, root, line, col});
    }
    // inputs are the symbols read but never assigned
    for (std::size_t s = 0; s < p_.symbols_.size(); ++s)
      if (!p_.assigned_[s]) p_.inputs_.push_back(static_cast<int>(s));
    std::sort(p_.inputs_.begin(), p_.inputs_.end(),
              [&](int a, int b) { return first_use_order_[a] < first_use_order_[b]; });
    return std::move(p_);
  }

 private:
  char peek(std::size_t k = 0) const { return pos_ + k < s_.size() ? s_[pos_ + k] : '\0'; }
  void advance(std::size_t k) {
    for (; k && pos_ < s_.size(); --k, ++pos_) {
      if (s_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) advance(1);
  }
  [[noreturn]] void fail(const std::string& msg) const { throw SlpError(line_, col_, msg); }
  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }
  static bool digit(char c) { return c >= '0' && c <= '9'; }

  std::string ident() {
    std::size_t b = pos_;
    while (ident_char(peek())) advance(1);
    return std::string(s_.substr(b, pos_ - b));
  }
  BigInt number() {
    std::size_t b = pos_;
    while (digit(peek())) advance(1);
    return parse_bigint(s_.substr(b, pos_ - b));
  }

  int node(SlpNode n) {
    p_.nodes_.push_back(std::move(n));
    return static_cast<int>(p_.nodes_.size() - 1);
  }
  const SlpNode& at(int i) const { return p_.nodes_[static_cast<std::size_t>(i)]; }

  int expr() {
    int lhs = term();
    for (skip(); peek() == '+' || peek() == '-'; skip()) {
      SlpOp op = peek() == '+' ? SlpOp::add : SlpOp::sub;
      advance(1);
      skip();
      int rhs = term();
      lhs = node({op, lhs, rhs});
    }
    return lhs;
  }

  int term() {
    std::size_t line = line_, col = col_;
    int f = factor();
    skip();
    char c = peek();
    if (c == '/') {
      advance(1);
      skip();
      if (!digit(peek())) fail("expected integer constant after '/'");
      BigInt d = number();
      if (d == 0) fail("division by zero constant");
      return node({SlpOp::div_const, f, -1, -1, d});
    }
    if (c != '*') return f;
    advance(1);
    skip();
    if (digit(peek())) return node({SlpOp::mul_const, f, -1, -1, number()});
    // constant * factor, possibly with a leading minus on the constant
    const SlpNode& fn = at(f);
    bool neg_const = fn.op == SlpOp::neg && at(fn.a).op == SlpOp::constant;
    if (fn.op == SlpOp::constant || neg_const) {
      BigInt k = neg_const ? at(fn.a).c : fn.c;
      int rhs = factor();
      int m = node({SlpOp::mul_const, rhs, -1, -1, k});
      return neg_const ? node({SlpOp::neg, m}) : m;
    }
    if (!opt_.allow_products)
      throw SlpError(line, col, "variable product in a program not flagged as a product stage");
    int rhs = factor();
    return node({SlpOp::mul, f, rhs});
  }

  int factor() {
    skip();
    char c = peek();
    if (c == '(') {
      advance(1);
      int e = expr();
      skip();
      if (peek() != ')') fail("expected ')'");
      advance(1);
      return e;
    }
    if (c == '-') {
      advance(1);
      int f = factor();
      return node({SlpOp::neg, f});
    }
    if (digit(c)) return node({SlpOp::constant, -1, -1, -1, number()});
    if (ident_start(c)) {
      std::size_t line = line_, col = col_;
      std::string name = ident();
      int sym = p_.intern(name);
      if (!p_.assigned_[static_cast<std::size_t>(sym)]) {
        auto& u = used_at_[sym];
        if (!u.first) {
          u = {line, col};
          first_use_order_[sym] = next_use_++;
        }
      }
      return node({SlpOp::var, -1, -1, sym});
    }
    if (c == '\0') fail("unexpected end of input");
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view s_;
  SlpParseOptions opt_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
  SlpProgram p_;
  std::map<int, std::pair<std::size_t, std::size_t>> used_at_;
  std::map<int, std::size_t> first_use_order_;
  std::size_t next_use_ = 0;
};

inline SlpProgram parse_slp(std::string_view text, SlpParseOptions opt = {}) { return SlpParser(text, opt).run(); }

// ============================================================================
// printing

namespace detail {

inline std::string print_node(const SlpProgram& p, int i, int ctx);

// ctx: 0 expression, 1 term, 2 factor
inline std::string print_node(const SlpProgram& p, int i, int ctx) {
  const SlpNode& n = p.nodes()[static_cast<std::size_t>(i)];
  std::string s;
  int level = 2;
  switch (n.op) {
    case SlpOp::var: return p.symbol(n.sym);
    case SlpOp::constant: return n.c.str();
    case SlpOp::neg: return "-" + print_node(p, n.a, 2);
    case SlpOp::add:
    case SlpOp::sub:
      s = print_node(p, n.a, 0) + (n.op == SlpOp::add ? "+" : "-") + print_node(p, n.b, 1);
      level = 0;
      break;
    case SlpOp::mul_const:
      s = print_node(p, n.a, 2) + "*" + n.c.str();
      level = 1;
      break;
    case SlpOp::div_const:
      s = print_node(p, n.a, 2) + "/" + n.c.str();
      level = 1;
      break;
    case SlpOp::mul:
      s = print_node(p, n.a, 2) + "*" + print_node(p, n.b, 2);
      level = 1;
      break;
  }
  return level < ctx ? "(" + s + ")" : s;
}

}  // namespace detail

inline std::string print_slp(const SlpProgram& p) {
  std::string out;
  for (const auto& in : p.instructions())
    out += p.symbol(in.target) + ":=" + detail::print_node(p, in.root, 0) + ";\n";
  return out;
}

// ============================================================================
// counting

// unary negation is free; *1 and /1 are free
inline OpCount count_ops(const SlpProgram& p) {
  OpCount c;
  for (const auto& n : p.nodes()) {
    switch (n.op) {
      case SlpOp::add:
      case SlpOp::sub: ++c.additions; break;
      case SlpOp::mul_const:
      case SlpOp::div_const:
        if (n.c != 1) ++c.scalar_mults;
        break;
      case SlpOp::mul: ++c.products; break;
      default: break;
    }
  }
  return c;
}

// ============================================================================
// evaluation

template <Ring R>
std::map<std::string, value_t<R>> eval_slp(const R& ring, const SlpProgram& p,
                                           const std::map<std::string, value_t<R>>& env) {
  using V = value_t<R>;
  std::vector<std::optional<V>> val(p.nodes().size());
  std::map<int, V> vars;
  for (const auto& name : p.inputs()) {
    auto it = env.find(name);
    if (it == env.end()) throw std::invalid_argument("missing input '" + name + "'");
    vars.emplace(*p.find_symbol(name), it->second);
  }
  auto eval = [&](auto&& self, int i) -> V {
    const SlpNode& n = p.nodes()[static_cast<std::size_t>(i)];
    switch (n.op) {
      case SlpOp::var: return vars.at(n.sym);
      case SlpOp::constant: return ring.from_rational(Rational(n.c));
      case SlpOp::neg: return ring.neg(self(self, n.a));
      case SlpOp::add: return ring.add(self(self, n.a), self(self, n.b));
      case SlpOp::sub: return ring.sub(self(self, n.a), self(self, n.b));
      case SlpOp::mul_const: {
        V x = self(self, n.a);
        return n.c == 1 ? x : ring.mul_const(x, ring.from_rational(Rational(n.c)));
      }
      case SlpOp::div_const: {
        V x = self(self, n.a);
        return n.c == 1 ? x : ring.mul_const(x, ring.from_rational(Rational(BigInt(1), n.c)));
      }
      case SlpOp::mul: return ring.mul(self(self, n.a), self(self, n.b));
    }
    throw std::logic_error("bad slp node");
  };
  for (const auto& in : p.instructions()) vars.insert_or_assign(in.target, eval(eval, in.root));
  std::map<std::string, V> out;
  for (const auto& name : p.outputs()) out.emplace(name, vars.at(*p.find_symbol(name)));
  return out;
}

// ============================================================================
// compiled form: three-address code over registers, evaluated on whole
// vectors of positions at once (one register value per block element)

class CompiledSlp {
 public:
  enum class Op { add, sub, neg, mul_const, div_const, mul, constant };
  struct Code {
    Op op;
    int dst, a = -1, b = -1;
    BigInt c = 0;
  };

  CompiledSlp() = default;
  CompiledSlp(const SlpProgram& p, const std::vector<std::string>& input_order,
              const std::vector<std::string>& output_order) {
    std::unordered_map<int, int> reg;
    n_inputs_ = input_order.size();
    for (std::size_t i = 0; i < input_order.size(); ++i)
      if (auto s = p.find_symbol(input_order[i])) {
        if (p.is_target(input_order[i]))
          throw std::invalid_argument("input '" + input_order[i] + "' is assigned by the program");
        reg[*s] = static_cast<int>(i);
      }
    for (const auto& name : p.inputs())
      if (!reg.count(*p.find_symbol(name)))
        throw std::invalid_argument("program input '" + name + "' missing from the input order");
    int next = static_cast<int>(n_inputs_);
    auto emit = [&](auto&& self, int i) -> int {
      const SlpNode& n = p.nodes()[static_cast<std::size_t>(i)];
      switch (n.op) {
        case SlpOp::var: return reg.at(n.sym);
        case SlpOp::constant: code_.push_back({Op::constant, next, -1, -1, n.c}); return next++;
        case SlpOp::neg: {
          int a = self(self, n.a);
          code_.push_back({Op::neg, next, a});
          return next++;
        }
        case SlpOp::add:
        case SlpOp::sub:
        case SlpOp::mul: {
          int a = self(self, n.a), b = self(self, n.b);
          Op op = n.op == SlpOp::add ? Op::add : n.op == SlpOp::sub ? Op::sub : Op::mul;
          code_.push_back({op, next, a, b});
          return next++;
        }
        case SlpOp::mul_const:
        case SlpOp::div_const: {
          int a = self(self, n.a);
          if (n.c == 1) return a;
          code_.push_back({n.op == SlpOp::mul_const ? Op::mul_const : Op::div_const, next, a, -1, n.c});
          return next++;
        }
      }
      throw std::logic_error("bad slp node");
    };
    for (const auto& in : p.instructions()) reg[in.target] = emit(emit, in.root);
    n_regs_ = static_cast<std::size_t>(next);
    for (const auto& name : output_order) {
      auto s = p.find_symbol(name);
      if (!s || !reg.count(*s)) throw std::invalid_argument("output '" + name + "' not produced by the program");
      outputs_.push_back(reg.at(*s));
    }
  }

  std::size_t inputs() const { return n_inputs_; }
  std::size_t outputs() const { return outputs_.size(); }
  const std::vector<Code>& code() const { return code_; }

  // in[i] holds input i at every position; all vectors share one length
  template <Ring R>
  std::vector<std::vector<value_t<R>>> run(const R& ring, const std::vector<std::vector<value_t<R>>>& in) const {
    using V = value_t<R>;
    if (in.size() != n_inputs_) throw std::invalid_argument("compiled slp: wrong number of inputs");
    const std::size_t len = in.empty() ? 0 : in[0].size();
    std::vector<std::vector<V>> store(n_regs_ - n_inputs_);
    auto r = [&](int i) -> const std::vector<V>& {
      return static_cast<std::size_t>(i) < n_inputs_ ? in[static_cast<std::size_t>(i)]
                                                     : store[static_cast<std::size_t>(i) - n_inputs_];
    };
    for (const auto& c : code_) {
      std::vector<V> out;
      out.reserve(len);
      switch (c.op) {
        case Op::constant: out.assign(len, ring.from_rational(Rational(c.c))); break;
        case Op::neg:
          for (const auto& x : r(c.a)) out.push_back(ring.neg(x));
          break;
        case Op::add: {
          const auto &x = r(c.a), &y = r(c.b);
          for (std::size_t k = 0; k < len; ++k) out.push_back(ring.add(x[k], y[k]));
          break;
        }
        case Op::sub: {
          const auto &x = r(c.a), &y = r(c.b);
          for (std::size_t k = 0; k < len; ++k) out.push_back(ring.sub(x[k], y[k]));
          break;
        }
        case Op::mul: {
          const auto &x = r(c.a), &y = r(c.b);
          for (std::size_t k = 0; k < len; ++k) out.push_back(ring.mul(x[k], y[k]));
          break;
        }
        case Op::mul_const:
        case Op::div_const: {
          V k = ring.from_rational(c.op == Op::mul_const ? Rational(c.c) : Rational(BigInt(1), c.c));
          for (const auto& x : r(c.a)) out.push_back(ring.mul_const(x, k));
          break;
        }
      }
      store[static_cast<std::size_t>(c.dst) - n_inputs_] = std::move(out);
    }
    std::vector<std::vector<V>> res;
    res.reserve(outputs_.size());
    for (int o : outputs_) res.push_back(r(o));
    return res;
  }

 private:
  std::size_t n_inputs_ = 0, n_regs_ = 0;
  std::vector<Code> code_;
  std::vector<int> outputs_;
};

// ============================================================================
// verification against a coefficient matrix

struct LinearCheck {
  bool ok = true;
  std::size_t column = 0;  // input index of the first mismatch
  std::string input, output;
  Rational expected, actual;
  explicit operator bool() const { return ok; }
};

// Outputs must equal M * inputs: evaluating on basis vector e_j reproduces column j.
inline LinearCheck verify_linear(const SlpProgram& p, const Matrix<Rational>& M,
                                 const std::vector<std::string>& input_order,
                                 const std::vector<std::string>& output_order) {
  if (p.has_products()) throw std::invalid_argument("verify_linear: program contains variable products");
  if (M.rows() != output_order.size() || M.cols() != input_order.size())
    throw std::invalid_argument("verify_linear: matrix is " + std::to_string(M.rows()) + "x" +
                                std::to_string(M.cols()) + " but program maps " +
                                std::to_string(input_order.size()) + " inputs to " +
                                std::to_string(output_order.size()) + " outputs");
  CompiledSlp c(p, input_order, output_order);
  const std::size_t n = input_order.size();
  // position j carries basis vector e_j
  std::vector<std::vector<Rational>> in(n, std::vector<Rational>(n));
  for (std::size_t j = 0; j < n; ++j) in[j][j] = Rational(1);
  auto out = c.run(RationalRing{}, in);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < out.size(); ++k)
      if (out[k][j] != M(k, j)) return {false, j, input_order[j], output_order[k], M(k, j), out[k][j]};
  return {};
}

// Coefficient matrix of a linear program: entry (k, j) is the coefficient of
// input j in output k.
inline Matrix<Rational> linear_forms(const SlpProgram& p, const std::vector<std::string>& input_order,
                                     const std::vector<std::string>& output_order) {
  if (p.has_products()) throw std::invalid_argument("linear_forms: program contains variable products");
  CompiledSlp c(p, input_order, output_order);
  const std::size_t n = input_order.size();
  std::vector<std::vector<Rational>> in(n, std::vector<Rational>(n));
  for (std::size_t j = 0; j < n; ++j) in[j][j] = Rational(1);
  auto out = c.run(RationalRing{}, in);
  Matrix<Rational> M(output_order.size(), n);
  for (std::size_t k = 0; k < out.size(); ++k)
    for (std::size_t j = 0; j < n; ++j) M(k, j) = out[k][j];
  return M;
}

// Each output is a signed, scaled sum of inputs; rows are emitted independently.
inline std::string naive_slp_text(const Matrix<Rational>& M, const std::vector<std::string>& input_names,
                                  const std::vector<std::string>& output_names) {
  if (M.rows() != output_names.size() || M.cols() != input_names.size())
    throw std::invalid_argument("naive_slp_from_matrix: names do not match matrix shape");
  std::string out;
  for (std::size_t i = 0; i < M.rows(); ++i) {
    std::string e;
    for (std::size_t j = 0; j < M.cols(); ++j) {
      const Rational& c = M(i, j);
      if (c.is_zero()) continue;
      bool first = e.empty();
      Rational a = c.abs();
      std::string t = input_names[j];
      if (a.num() != 1 && !a.is_integer())
        t = "(" + a.num().str() + "*" + t + ")/" + a.den().str();
      else if (a.num() != 1)
        t = t + "*" + a.num().str();
      else if (!a.is_integer())
        t = t + "/" + a.den().str();
      e += c.sign() < 0 ? "-" + t : (first ? t : "+" + t);
    }
    out += output_names[i] + ":=" + (e.empty() ? "0" : e) + ";\n";
  }
  return out;
}

inline SlpProgram naive_slp_from_matrix(const Matrix<Rational>& M, const std::vector<std::string>& input_names,
                                        const std::vector<std::string>& output_names) {
  auto p = parse_slp(naive_slp_text(M, input_names, output_names));
  p.set_outputs(output_names);
  return p;
}

// ============================================================================
// conventional names: A11..Amk, l0..l(r-1)

inline std::string entry_name(char prefix, std::size_t i, std::size_t j) {
  return std::string(1, prefix) + std::to_string(i + 1) + std::to_string(j + 1);
}

inline std::vector<std::string> entry_names(char prefix, std::size_t rows, std::size_t cols) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) v.push_back(entry_name(prefix, i, j));
  return v;
}

inline std::vector<std::string> indexed_names(const std::string& prefix, std::size_t count) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < count; ++i) v.push_back(prefix + std::to_string(i));
  return v;
}

// L and R programs feed the product program by name; its outputs feed P.
template <Ring R>
Matrix<value_t<R>> run_full_slp_pipeline(const R& ring, const SlpProgram& Lp, const SlpProgram& Rp,
                                         const SlpProgram& Prodp, const SlpProgram& Pp,
                                         const Matrix<value_t<R>>& A, const Matrix<value_t<R>>& B) {
  using V = value_t<R>;
  if (A.cols() != B.rows()) throw std::invalid_argument("pipeline: A and B do not conform");
  std::map<std::string, V> ea, eb;
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) ea[entry_name('A', i, j)] = A(i, j);
  for (std::size_t i = 0; i < B.rows(); ++i)
    for (std::size_t j = 0; j < B.cols(); ++j) eb[entry_name('B', i, j)] = B(i, j);
  auto need = [](const SlpProgram& p, const std::map<std::string, V>& env, const char* stage) {
    for (const auto& in : p.inputs())
      if (!env.count(in))
        throw std::invalid_argument(std::string("name-chaining mismatch: ") + stage + " input '" + in +
                                    "' is not produced upstream");
  };
  need(Lp, ea, "L");
  need(Rp, eb, "R");
  auto lr = eval_slp(ring, Lp, ea);
  auto rr = eval_slp(ring, Rp, eb);
  lr.insert(rr.begin(), rr.end());
  need(Prodp, lr, "product");
  auto pr = eval_slp(ring, Prodp, lr);
  need(Pp, pr, "P");
  auto cr = eval_slp(ring, Pp, pr);
  Matrix<V> C(A.rows(), B.cols(), ring.zero());
  for (std::size_t i = 0; i < C.rows(); ++i)
    for (std::size_t j = 0; j < C.cols(); ++j) {
      auto it = cr.find(entry_name('C', i, j));
      if (it == cr.end())
        throw std::invalid_argument("name-chaining mismatch: P program does not assign " + entry_name('C', i, j));
      C(i, j) = it->second;
    }
  return C;
}

}  // namespace fmm
