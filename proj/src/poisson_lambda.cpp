#include "opalg/poisson_lambda.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace opalg::poisson {

using boost::multiprecision::cpp_int;

namespace {

std::string rational_str(const Rational& r) {
  const cpp_int num = boost::multiprecision::numerator(r);
  const cpp_int den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

void require_same_coords(const LambdaElement& a, const LambdaElement& b, const char* what) {
  if (a.num_coords() != b.num_coords())
    throw ValidationError(std::string(what) + ": coordinate-count mismatch (" + std::to_string(a.num_coords()) +
                          " vs " + std::to_string(b.num_coords()) + ")");
}

cpp_int binomial(unsigned n, unsigned k) {
  cpp_int r = 1;
  for (unsigned j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

cpp_int factorial(unsigned n) {
  cpp_int r = 1;
  for (unsigned j = 2; j <= n; ++j) r *= j;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// GaussianRational

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  const Rational den = o.re_ * o.re_ + o.im_ * o.im_;
  if (den == 0) throw ValidationError("division by zero");
  Rational re = (re_ * o.re_ + im_ * o.im_) / den;
  Rational im = (im_ * o.re_ - re_ * o.im_) / den;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

std::string GaussianRational::str() const {
  if (im_ == 0) {
    if (boost::multiprecision::denominator(re_) == 1) return rational_str(re_);
    return "(" + rational_str(re_) + ")";
  }
  std::string out = "(" + rational_str(re_);
  out += im_ < 0 ? "-" : "+";
  out += rational_str(im_ < 0 ? Rational(-im_) : im_) + "i)";
  return out;
}

// ---------------------------------------------------------------------------
// Monomial / LambdaElement

int Monomial::degree() const {
  int d = 2 * static_cast<int>(z);
  for (unsigned e : q) d += static_cast<int>(e);
  for (unsigned e : p) d += static_cast<int>(e);
  return d;
}

bool Monomial::is_unit() const {
  return z == 0 && std::all_of(q.begin(), q.end(), [](unsigned e) { return e == 0; }) &&
         std::all_of(p.begin(), p.end(), [](unsigned e) { return e == 0; });
}

LambdaElement::LambdaElement(int num_coords) : s_(num_coords) {
  if (s_ < 1) throw ValidationError("LambdaElement: number of coordinates must be >= 1");
}

LambdaElement LambdaElement::scalar(int s, const GaussianRational& c) {
  LambdaElement e(s);
  e.add_term(Monomial::unit(s), c);
  return e;
}

LambdaElement LambdaElement::q(int s, int index) {
  if (index < 1 || index > s) throw ValidationError("q index out of range");
  Monomial m = Monomial::unit(s);
  m.q[static_cast<std::size_t>(index - 1)] = 1;
  return monomial(m, 1);
}

LambdaElement LambdaElement::p(int s, int index) {
  if (index < 1 || index > s) throw ValidationError("p index out of range");
  Monomial m = Monomial::unit(s);
  m.p[static_cast<std::size_t>(index - 1)] = 1;
  return monomial(m, 1);
}

LambdaElement LambdaElement::Z(int s) {
  Monomial m = Monomial::unit(s);
  m.z = 1;
  return monomial(m, 1);
}

LambdaElement LambdaElement::monomial(const Monomial& m, const GaussianRational& c) {
  if (m.q.size() != m.p.size() || m.q.empty()) throw ValidationError("monomial: malformed exponent vectors");
  LambdaElement e(static_cast<int>(m.q.size()));
  e.add_term(m, c);
  return e;
}

int LambdaElement::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

bool LambdaElement::is_scalar() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_unit());
}

GaussianRational LambdaElement::as_scalar() const {
  if (!is_scalar()) throw ValidationError("element is not a scalar");
  return terms_.empty() ? GaussianRational(0) : terms_.begin()->second;
}

void LambdaElement::add_term(const Monomial& m, const GaussianRational& c) {
  if (static_cast<int>(m.q.size()) != s_ || static_cast<int>(m.p.size()) != s_)
    throw ValidationError("add_term: monomial has the wrong number of coordinates");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

LambdaElement& LambdaElement::operator+=(const LambdaElement& o) {
  require_same_coords(*this, o, "add");
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

LambdaElement& LambdaElement::operator-=(const LambdaElement& o) {
  require_same_coords(*this, o, "subtract");
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

LambdaElement& LambdaElement::operator*=(const GaussianRational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

LambdaElement LambdaElement::operator-() const {
  LambdaElement out = *this;
  for (auto& [m, v] : out.terms_) v = -v;
  return out;
}

namespace {

std::string monomial_str(const Monomial& m) {
  std::vector<std::string> factors;
  auto push = [&](const std::string& sym, unsigned e) {
    if (e == 0) return;
    factors.push_back(e == 1 ? sym : sym + "^" + std::to_string(e));
  };
  push("Z", m.z);
  for (std::size_t i = 0; i < m.q.size(); ++i) push("q" + std::to_string(i + 1), m.q[i]);
  for (std::size_t i = 0; i < m.p.size(); ++i) push("p" + std::to_string(i + 1), m.p[i]);
  std::string out;
  for (std::size_t k = 0; k < factors.size(); ++k) out += (k ? "*" : "") + factors[k];
  return out;
}

// Shared by LambdaElement and ClassicalPolynomial: terms in descending
// monomial order, real negative coefficients folded into " - ".
template <typename TermMap, typename MonoStr, typename IsUnit>
std::string terms_str(const TermMap& terms, MonoStr mono_str, IsUnit is_unit) {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    const auto& [m, c] = *it;
    GaussianRational coeff = c;
    bool negative = false;
    if (coeff.is_real() && coeff.re() < 0) {
      negative = true;
      coeff = -coeff;
    }
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    const std::string ms = mono_str(m);
    if (is_unit(m)) {
      out += coeff.str();
    } else if (coeff == GaussianRational(1)) {
      out += ms;
    } else {
      out += coeff.str() + "*" + ms;
    }
  }
  return out;
}

}  // namespace

std::string LambdaElement::str() const {
  return terms_str(terms_, monomial_str, [](const Monomial& m) { return m.is_unit(); });
}

// ---------------------------------------------------------------------------
// Products

namespace {

// (z1 q^a1 p^b1)(z2 q^a2 p^b2): reorder p^b1 q^a2 coordinate by coordinate using
// p^b q^c = sum_k C(b,k) C(c,k) k! (-Z)^k q^(c-k) p^(b-k).
void multiply_monomials(const Monomial& m1, const Monomial& m2, const GaussianRational& coeff,
                        LambdaElement& out) {
  const std::size_t s = m1.q.size();
  Monomial acc;
  acc.z = m1.z + m2.z;
  acc.q.assign(s, 0);
  acc.p.assign(s, 0);
  std::function<void(std::size_t, const cpp_int&)> rec = [&](std::size_t i, const cpp_int& weight) {
    if (i == s) {
      out.add_term(acc, coeff * GaussianRational(Rational(weight)));
      return;
    }
    const unsigned b = m1.p[i];
    const unsigned c = m2.q[i];
    const unsigned kmax = std::min(b, c);
    for (unsigned k = 0; k <= kmax; ++k) {
      cpp_int w = binomial(b, k) * binomial(c, k) * factorial(k);
      if (k % 2 == 1) w = -w;
      acc.z += k;
      acc.q[i] = m1.q[i] + c - k;
      acc.p[i] = b - k + m2.p[i];
      rec(i + 1, weight * w);
      acc.z -= k;
    }
  };
  rec(0, cpp_int(1));
}

}  // namespace

LambdaElement multiply(const LambdaElement& a, const LambdaElement& b) {
  require_same_coords(a, b, "multiply");
  LambdaElement out(a.num_coords());
  for (const auto& [m1, c1] : a.terms())
    for (const auto& [m2, c2] : b.terms()) multiply_monomials(m1, m2, c1 * c2, out);
  return out;
}

LambdaElement operator*(const LambdaElement& a, const LambdaElement& b) { return multiply(a, b); }

LambdaElement commutator(const LambdaElement& a, const LambdaElement& b) {
  return multiply(a, b) - multiply(b, a);
}

namespace {

enum class GenKind { z, q, p };
struct Generator {
  GenKind kind;
  std::size_t index;  // 0-based coordinate
};

// Leftmost factor of a non-unit normal-ordered monomial and the remaining monomial.
std::pair<Generator, Monomial> peel_leftmost(const Monomial& m) {
  Monomial rest = m;
  if (rest.z > 0) {
    --rest.z;
    return {{GenKind::z, 0}, rest};
  }
  for (std::size_t i = 0; i < rest.q.size(); ++i)
    if (rest.q[i] > 0) {
      --rest.q[i];
      return {{GenKind::q, i}, rest};
    }
  for (std::size_t i = 0; i < rest.p.size(); ++i)
    if (rest.p[i] > 0) {
      --rest.p[i];
      return {{GenKind::p, i}, rest};
    }
  throw ValidationError("peel_leftmost: unit monomial has no factors");
}

LambdaElement generator_element(const Generator& g, int s) {
  switch (g.kind) {
    case GenKind::z: return LambdaElement::Z(s);
    case GenKind::q: return LambdaElement::q(s, static_cast<int>(g.index) + 1);
    case GenKind::p: return LambdaElement::p(s, static_cast<int>(g.index) + 1);
  }
  return LambdaElement(s);
}

// {g, m} for a generator g. Leibniz over the factors of m leaves each
// remaining factor in place, so the result is again a single normal monomial:
// {q_i, m} removes one p_i (times its multiplicity), {p_i, m} removes one q_i
// with a minus sign, {Z, m} = 0.
LambdaElement generator_bracket(const Generator& g, const Monomial& m, int s) {
  LambdaElement out(s);
  if (g.kind == GenKind::z) return out;
  Monomial r = m;
  if (g.kind == GenKind::q) {
    const unsigned e = r.p[g.index];
    if (e == 0) return out;
    --r.p[g.index];
    out.add_term(r, GaussianRational(static_cast<long long>(e)));
  } else {
    const unsigned e = r.q[g.index];
    if (e == 0) return out;
    --r.q[g.index];
    out.add_term(r, GaussianRational(-static_cast<long long>(e)));
  }
  return out;
}

// {m1, m2} = {m1, y} rest + y {m1, rest} with m2 = y * rest, {m1, y} = -{y, m1}.
LambdaElement monomial_bracket(const Monomial& m1, const Monomial& m2, int s) {
  if (m2.is_unit() || m1.is_unit()) return LambdaElement(s);
  const auto [y, rest] = peel_leftmost(m2);
  const LambdaElement rest_el = LambdaElement::monomial(rest, 1);
  LambdaElement out = multiply(-generator_bracket(y, m1, s), rest_el);
  out += multiply(generator_element(y, s), monomial_bracket(m1, rest, s));
  return out;
}

}  // namespace

LambdaElement lie_bracket(const LambdaElement& a, const LambdaElement& b) {
  require_same_coords(a, b, "lie_bracket");
  const int s = a.num_coords();
  LambdaElement out(s);
  for (const auto& [m1, c1] : a.terms())
    for (const auto& [m2, c2] : b.terms()) out += monomial_bracket(m1, m2, s) * (c1 * c2);
  return out;
}

LambdaElement adjoint(const LambdaElement& a) {
  const int s = a.num_coords();
  LambdaElement out(s);
  for (const auto& [m, c] : a.terms()) {
    // (Z^k q^a p^b)* = p^b q^a (Z*)^k = (-1)^k Z^k p^b q^a.
    Monomial pm = Monomial::unit(s);
    pm.p = m.p;
    Monomial qm = Monomial::unit(s);
    qm.q = m.q;
    LambdaElement term = multiply(LambdaElement::monomial(pm, 1), LambdaElement::monomial(qm, 1));
    Monomial zm = Monomial::unit(s);
    zm.z = m.z;
    term = multiply(LambdaElement::monomial(zm, m.z % 2 ? GaussianRational(-1) : GaussianRational(1)), term);
    out += term * c.conj();
  }
  return out;
}

bool commutator_bracket_check(const LambdaElement& a, const LambdaElement& b) {
  require_same_coords(a, b, "commutator_bracket_check");
  return commutator(a, b) == multiply(LambdaElement::Z(a.num_coords()), lie_bracket(a, b));
}

bool dirac_identity_check(const LambdaElement& a, const LambdaElement& b, const LambdaElement& c,
                          const LambdaElement& d) {
  require_same_coords(a, b, "dirac_identity_check");
  require_same_coords(a, c, "dirac_identity_check");
  require_same_coords(a, d, "dirac_identity_check");
  return multiply(commutator(a, b), lie_bracket(c, d)) == multiply(lie_bracket(a, b), commutator(c, d));
}

bool jacobi_check(const LambdaElement& a, const LambdaElement& b, const LambdaElement& c) {
  require_same_coords(a, b, "jacobi_check");
  require_same_coords(a, c, "jacobi_check");
  const LambdaElement sum =
      lie_bracket(a, lie_bracket(b, c)) + lie_bracket(c, lie_bracket(a, b)) + lie_bracket(b, lie_bracket(c, a));
  return sum.is_zero();
}

// ---------------------------------------------------------------------------
// Parser

ParseError::ParseError(const std::string& message, std::size_t position)
    : ValidationError("syntax error at position " + std::to_string(position) + ": " + message),
      position_(position) {}

namespace {

enum class Tok { number, symbol, op, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
  GaussianRational value;  // number tokens
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto digits = [&](std::size_t& j) {
    const std::size_t start = j;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    return std::string(text.substr(start, j - start));
  };
  while (i < text.size()) {
    const char ch = text[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::string num = digits(i);
      Rational value{cpp_int(num)};
      // "a/b" directly following digits is one rational literal.
      if (i + 1 < text.size() && text[i] == '/' && std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
        ++i;
        const std::string den = digits(i);
        if (cpp_int(den) == 0) throw ParseError("zero denominator", start);
        value = Rational(cpp_int(num), cpp_int(den));
      }
      GaussianRational g(value);
      if (i < text.size() && text[i] == 'i') {
        ++i;
        g = GaussianRational(0, value);
      }
      out.push_back({Tok::number, std::string(text.substr(start, i - start)), start, g});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      while (i < text.size() && std::isalnum(static_cast<unsigned char>(text[i]))) ++i;
      out.push_back({Tok::symbol, std::string(text.substr(start, i - start)), start, {}});
      continue;
    }
    if (std::string_view("+-*/^()[]{},").find(ch) != std::string_view::npos) {
      out.push_back({Tok::op, std::string(1, ch), start, {}});
      ++i;
      continue;
    }
    throw ParseError(std::string("unexpected character '") + ch + "'", start);
  }
  out.push_back({Tok::end, "", text.size(), {}});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, int s) : toks_(std::move(tokens)), s_(s) {}

  LambdaElement parse_all() {
    LambdaElement e = expr();
    if (peek().kind != Tok::end) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool at_op(char c) const { return peek().kind == Tok::op && peek().text[0] == c; }
  void expect(char c) {
    if (!at_op(c)) {
      if (peek().kind == Tok::end) throw ParseError(std::string("expected '") + c + "' but input ended", peek().pos);
      throw ParseError(std::string("expected '") + c + "'", peek().pos);
    }
    ++pos_;
  }

  LambdaElement expr() {
    LambdaElement acc = term();
    while (at_op('+') || at_op('-')) {
      const bool minus = at_op('-');
      ++pos_;
      LambdaElement rhs = term();
      if (minus) acc -= rhs; else acc += rhs;
    }
    return acc;
  }

  LambdaElement term() {
    LambdaElement acc = factor();
    while (at_op('*') || at_op('/')) {
      const bool divide = at_op('/');
      const std::size_t at = peek().pos;
      ++pos_;
      LambdaElement rhs = factor();
      if (divide) {
        if (!rhs.is_scalar()) throw ParseError("division by a non-scalar", at);
        const GaussianRational d = rhs.as_scalar();
        if (d.is_zero()) throw ParseError("division by zero", at);
        acc *= GaussianRational(1) / d;
      } else {
        acc = multiply(acc, rhs);
      }
    }
    return acc;
  }

  LambdaElement factor() {
    if (at_op('-')) {
      ++pos_;
      return -factor();
    }
    if (at_op('+')) {
      ++pos_;
      return factor();
    }
    return power();
  }

  LambdaElement power() {
    LambdaElement base = primary();
    if (at_op('^')) {
      ++pos_;
      const Token& t = peek();
      if (t.kind != Tok::number || !t.value.is_real() ||
          boost::multiprecision::denominator(t.value.re()) != 1 || t.value.re() < 0)
        throw ParseError("exponent must be a nonnegative integer", t.pos);
      if (t.value.re() > 64) throw ParseError("exponent too large", t.pos);
      const int e = static_cast<int>(boost::multiprecision::numerator(t.value.re()));
      ++pos_;
      LambdaElement out = LambdaElement::scalar(s_, 1);
      for (int k = 0; k < e; ++k) out = multiply(out, base);
      return out;
    }
    return base;
  }

  LambdaElement primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::number:
        ++pos_;
        return LambdaElement::scalar(s_, t.value);
      case Tok::symbol:
        ++pos_;
        return symbol(t);
      case Tok::end:
        throw ParseError("unexpected end of input", t.pos);
      case Tok::op:
        break;
    }
    if (at_op('(')) {
      ++pos_;
      LambdaElement e = expr();
      expect(')');
      return e;
    }
    if (at_op('[') || at_op('{')) {
      const bool lie = at_op('{');
      ++pos_;
      LambdaElement x = expr();
      expect(',');
      LambdaElement y = expr();
      expect(lie ? '}' : ']');
      return lie ? lie_bracket(x, y) : commutator(x, y);
    }
    throw ParseError("unexpected '" + t.text + "'", t.pos);
  }

  LambdaElement symbol(const Token& t) {
    if (t.text == "Z") return LambdaElement::Z(s_);
    if ((t.text[0] == 'q' || t.text[0] == 'p') && t.text.size() > 1 &&
        std::all_of(t.text.begin() + 1, t.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      if (t.text.size() > 6) throw ParseError("index out of range in '" + t.text + "'", t.pos);
      const int index = std::stoi(t.text.substr(1));
      if (index < 1 || index > s_)
        throw ParseError("index out of range in '" + t.text + "' (s = " + std::to_string(s_) + ")", t.pos);
      return t.text[0] == 'q' ? LambdaElement::q(s_, index) : LambdaElement::p(s_, index);
    }
    throw ParseError("unknown symbol '" + t.text + "'", t.pos);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int s_;
};

}  // namespace

LambdaElement parse(std::string_view text, int s) {
  if (s < 1) throw ValidationError("parse: number of coordinates must be >= 1");
  return Parser(tokenize(text), s).parse_all();
}

// ---------------------------------------------------------------------------
// Classical specialization

void ClassicalPolynomial::add_term(const Exponents& e, const GaussianRational& c) {
  if (static_cast<int>(e.q.size()) != s_ || static_cast<int>(e.p.size()) != s_)
    throw ValidationError("ClassicalPolynomial: exponent vector has the wrong length");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

ClassicalPolynomial& ClassicalPolynomial::operator+=(const ClassicalPolynomial& o) {
  if (o.s_ != s_) throw ValidationError("ClassicalPolynomial: coordinate-count mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

ClassicalPolynomial& ClassicalPolynomial::operator-=(const ClassicalPolynomial& o) {
  if (o.s_ != s_) throw ValidationError("ClassicalPolynomial: coordinate-count mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

ClassicalPolynomial operator*(const ClassicalPolynomial& a, const ClassicalPolynomial& b) {
  if (a.s_ != b.s_) throw ValidationError("ClassicalPolynomial: coordinate-count mismatch");
  ClassicalPolynomial out(a.s_);
  for (const auto& [e1, c1] : a.terms_)
    for (const auto& [e2, c2] : b.terms_) {
      ClassicalPolynomial::Exponents e = e1;
      for (std::size_t i = 0; i < e.q.size(); ++i) {
        e.q[i] += e2.q[i];
        e.p[i] += e2.p[i];
      }
      out.add_term(e, c1 * c2);
    }
  return out;
}

ClassicalPolynomial ClassicalPolynomial::derivative(int index, bool momentum) const {
  if (index < 1 || index > s_) throw ValidationError("derivative: index out of range");
  const auto i = static_cast<std::size_t>(index - 1);
  ClassicalPolynomial out(s_);
  for (const auto& [e, c] : terms_) {
    const unsigned k = momentum ? e.p[i] : e.q[i];
    if (k == 0) continue;
    Exponents d = e;
    (momentum ? d.p[i] : d.q[i]) -= 1;
    out.add_term(d, c * GaussianRational(static_cast<long long>(k)));
  }
  return out;
}

std::string ClassicalPolynomial::str() const {
  return terms_str(
      terms_,
      [](const Exponents& e) {
        Monomial m;
        m.q = e.q;
        m.p = e.p;
        return monomial_str(m);
      },
      [](const Exponents& e) {
        return std::all_of(e.q.begin(), e.q.end(), [](unsigned x) { return x == 0; }) &&
               std::all_of(e.p.begin(), e.p.end(), [](unsigned x) { return x == 0; });
      });
}

ClassicalPolynomial specialize_classical(const LambdaElement& a) {
  ClassicalPolynomial out(a.num_coords());
  for (const auto& [m, c] : a.terms()) {
    if (m.z > 0) continue;
    out.add_term({m.q, m.p}, c);
  }
  return out;
}

ClassicalPolynomial classical_poisson(const ClassicalPolynomial& f, const ClassicalPolynomial& g) {
  if (f.num_coords() != g.num_coords()) throw ValidationError("classical_poisson: coordinate-count mismatch");
  ClassicalPolynomial out(f.num_coords());
  for (int i = 1; i <= f.num_coords(); ++i) {
    out += f.derivative(i, false) * g.derivative(i, true);
    out -= f.derivative(i, true) * g.derivative(i, false);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quantum specialization

void UnivariatePolynomial::trim() {
  while (!coefficients.empty() && coefficients.back().is_zero()) coefficients.pop_back();
}

UnivariatePolynomial& UnivariatePolynomial::operator*=(const GaussianRational& c) {
  for (auto& v : coefficients) v *= c;
  trim();
  return *this;
}

std::string UnivariatePolynomial::str() const {
  std::map<int, GaussianRational> terms;
  for (std::size_t k = 0; k < coefficients.size(); ++k)
    if (!coefficients[k].is_zero()) terms.emplace(static_cast<int>(k), coefficients[k]);
  return terms_str(
      terms, [](int k) { return k == 1 ? std::string("x") : "x^" + std::to_string(k); },
      [](int k) { return k == 0; });
}

UnivariatePolynomial specialize_quantum(const LambdaElement& a, const Rational& hbar,
                                        const UnivariatePolynomial& psi) {
  if (a.num_coords() != 1)
    throw ValidationError("specialize_quantum: only one coordinate (s = 1) is supported");
  const GaussianRational ihbar(0, hbar);
  const GaussianRational minus_ihbar(0, -hbar);
  UnivariatePolynomial out;
  for (const auto& [m, c] : a.terms()) {
    std::vector<GaussianRational> v = psi.coefficients;
    for (unsigned k = 0; k < m.p[0]; ++k) {  // p -> -i hbar d/dx
      std::vector<GaussianRational> d;
      for (std::size_t j = 1; j < v.size(); ++j) d.push_back(v[j] * GaussianRational(static_cast<long long>(j)) * minus_ihbar);
      v = std::move(d);
    }
    v.insert(v.begin(), m.q[0], GaussianRational(0));  // q -> x
    GaussianRational scale = c;
    for (unsigned k = 0; k < m.z; ++k) scale *= ihbar;  // Z -> i hbar
    if (out.coefficients.size() < v.size()) out.coefficients.resize(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) out.coefficients[j] += v[j] * scale;
  }
  out.trim();
  return out;
}

// ---------------------------------------------------------------------------
// Random elements

LambdaElement random_element(std::mt19937_64& rng, const RandomElementConfig& cfg) {
  const int s = cfg.num_coords;
  LambdaElement out(s);
  std::uniform_int_distribution<int> n_terms(1, std::max(1, cfg.max_terms));
  std::uniform_int_distribution<int> budget(0, std::max(0, cfg.max_degree));
  std::uniform_int_distribution<int> which(0, 2 * s);  // 0 = Z, then q_1..q_s, p_1..p_s
  std::uniform_int_distribution<int> numer(-4, 4);
  std::uniform_int_distribution<int> denom(1, 3);
  std::uniform_int_distribution<int> flavour(0, 3);
  const int terms = n_terms(rng);
  for (int t = 0; t < terms; ++t) {
    Monomial m = Monomial::unit(s);
    int left = budget(rng);
    while (left > 0) {
      const int g = which(rng);
      if (g == 0) {
        if (left < 2) continue;
        ++m.z;
        left -= 2;
      } else if (g <= s) {
        ++m.q[static_cast<std::size_t>(g - 1)];
        --left;
      } else {
        ++m.p[static_cast<std::size_t>(g - s - 1)];
        --left;
      }
    }
    int num = 0;
    while (num == 0) num = numer(rng);
    const Rational r(num, denom(rng));
    GaussianRational c;
    switch (flavour(rng)) {
      case 0: c = GaussianRational(0, r); break;
      case 1: c = GaussianRational(r, Rational(numer(rng), denom(rng))); break;
      default: c = GaussianRational(r); break;
    }
    out.add_term(m, c);
  }
  return out;
}

}  // namespace opalg::poisson
