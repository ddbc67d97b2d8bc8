#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "opalg/matrix.hpp"

// Exact engine for the canonical Poisson algebra generated by q_1..q_s,
// p_1..p_s and a central element Z, held in the normal form Z^k q^a p^b
// modulo [q_i, p_j] = Z delta_ij. No floating point is used here.
namespace opalg::poisson {

using Rational = boost::multiprecision::cpp_rational;

class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {}
  GaussianRational(long long re) : re_(re), im_(0) {}

  static GaussianRational i() { return {0, 1}; }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }
  bool is_zero() const { return re_ == 0 && im_ == 0; }
  bool is_real() const { return im_ == 0; }
  GaussianRational conj() const { return {re_, -im_}; }

  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);
  GaussianRational& operator/=(const GaussianRational& o);
  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  GaussianRational operator-() const { return {-re_, -im_}; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  /// Literal form accepted by the parser: "3", "(3/2)", "(0+1i)", "(1/2-3/4i)".
  std::string str() const;

 private:
  Rational re_{0};
  Rational im_{0};
};

/// Z^z q^q p^p in normal order (all q left of all p). Exponent vectors have length s.
struct Monomial {
  unsigned z = 0;
  std::vector<unsigned> q;
  std::vector<unsigned> p;

  static Monomial unit(int s) { return {0, std::vector<unsigned>(static_cast<std::size_t>(s), 0u), std::vector<unsigned>(static_cast<std::size_t>(s), 0u)}; }
  /// Z counts as degree 2.
  int degree() const;
  bool is_unit() const;
  auto operator<=>(const Monomial&) const = default;
  bool operator==(const Monomial&) const = default;
};

class LambdaElement {
 public:
  using Terms = std::map<Monomial, GaussianRational>;

  explicit LambdaElement(int num_coords);

  static LambdaElement zero(int s) { return LambdaElement(s); }
  static LambdaElement scalar(int s, const GaussianRational& c);
  static LambdaElement q(int s, int index);  // 1-based
  static LambdaElement p(int s, int index);  // 1-based
  static LambdaElement Z(int s);
  static LambdaElement monomial(const Monomial& m, const GaussianRational& c);

  int num_coords() const { return s_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// -1 for the zero element.
  int degree() const;
  /// Constant term when the element is a scalar; throws otherwise.
  GaussianRational as_scalar() const;
  bool is_scalar() const;

  void add_term(const Monomial& m, const GaussianRational& c);

  LambdaElement& operator+=(const LambdaElement& o);
  LambdaElement& operator-=(const LambdaElement& o);
  LambdaElement& operator*=(const GaussianRational& c);
  friend LambdaElement operator+(LambdaElement a, const LambdaElement& b) { return a += b; }
  friend LambdaElement operator-(LambdaElement a, const LambdaElement& b) { return a -= b; }
  friend LambdaElement operator*(LambdaElement a, const GaussianRational& c) { return a *= c; }
  friend LambdaElement operator*(const GaussianRational& c, LambdaElement a) { return a *= c; }
  LambdaElement operator-() const;
  friend bool operator==(const LambdaElement& a, const LambdaElement& b) {
    return a.s_ == b.s_ && a.terms_ == b.terms_;
  }

  /// Canonical text, e.g. "(3/2)*Z^2*q1^2*p2 + (0+1i)*p1"; re-readable by parse().
  std::string str() const;

 private:
  int s_;
  Terms terms_;
};

/// Associative product, rewritten to normal order with p_i q_i -> q_i p_i - Z.
LambdaElement multiply(const LambdaElement& a, const LambdaElement& b);
LambdaElement operator*(const LambdaElement& a, const LambdaElement& b);

LambdaElement commutator(const LambdaElement& a, const LambdaElement& b);

/// Lie product fixed by {q_i, p_j} = delta_ij, {q_i, q_j} = {p_i, p_j} = 0,
/// {Z, .} = 0, and extended by antisymmetry and the Leibniz rule
/// {A, BC} = {A, B} C + B {A, C}, peeling the leftmost factor of the right slot.
LambdaElement lie_bracket(const LambdaElement& a, const LambdaElement& b);

/// Involution: reverses products, conjugates scalars, fixes q and p, Z* = -Z.
LambdaElement adjoint(const LambdaElement& a);

/// [A, B] == Z {A, B}.
bool commutator_bracket_check(const LambdaElement& a, const LambdaElement& b);
/// [A, B] {C, D} == {A, B} [C, D].
bool dirac_identity_check(const LambdaElement& a, const LambdaElement& b, const LambdaElement& c,
                          const LambdaElement& d);
/// {a,{b,c}} + {c,{a,b}} + {b,{c,a}} == 0.
bool jacobi_check(const LambdaElement& a, const LambdaElement& b, const LambdaElement& c);

class ParseError : public ValidationError {
 public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Grammar: rational / imaginary literals (3, 3/2, 2i, 1/2i), symbols q1..qs,
/// p1..ps, Z, binary + - * /, unary -, ^ with a nonnegative integer exponent,
/// commutator [X, Y], Lie bracket {X, Y}, parentheses. Division only by
/// nonzero scalars.
LambdaElement parse(std::string_view text, int s);

// ---------------------------------------------------------------------------
// Specializations

/// Commutative polynomial in q_1..q_s, p_1..p_s.
class ClassicalPolynomial {
 public:
  struct Exponents {
    std::vector<unsigned> q, p;
    auto operator<=>(const Exponents&) const = default;
    bool operator==(const Exponents&) const = default;
  };
  using Terms = std::map<Exponents, GaussianRational>;

  explicit ClassicalPolynomial(int s) : s_(s) {}
  int num_coords() const { return s_; }
  const Terms& terms() const { return terms_; }
  void add_term(const Exponents& e, const GaussianRational& c);
  ClassicalPolynomial& operator+=(const ClassicalPolynomial& o);
  ClassicalPolynomial& operator-=(const ClassicalPolynomial& o);
  friend ClassicalPolynomial operator+(ClassicalPolynomial a, const ClassicalPolynomial& b) { return a += b; }
  friend ClassicalPolynomial operator-(ClassicalPolynomial a, const ClassicalPolynomial& b) { return a -= b; }
  friend ClassicalPolynomial operator*(const ClassicalPolynomial& a, const ClassicalPolynomial& b);
  friend bool operator==(const ClassicalPolynomial& a, const ClassicalPolynomial& b) {
    return a.s_ == b.s_ && a.terms_ == b.terms_;
  }
  /// Formal partial derivative; `momentum` selects p_i instead of q_i (index 1-based).
  ClassicalPolynomial derivative(int index, bool momentum) const;
  std::string str() const;

 private:
  int s_;
  Terms terms_;
};

/// Z -> 0.
ClassicalPolynomial specialize_classical(const LambdaElement& a);

/// sum_i df/dq_i dg/dp_i - df/dp_i dg/dq_i by formal differentiation.
ClassicalPolynomial classical_poisson(const ClassicalPolynomial& f, const ClassicalPolynomial& g);

/// Polynomial in x; coefficient k multiplies x^k.
struct UnivariatePolynomial {
  std::vector<GaussianRational> coefficients;

  void trim();
  friend bool operator==(UnivariatePolynomial a, UnivariatePolynomial b) {
    a.trim();
    b.trim();
    return a.coefficients == b.coefficients;
  }
  UnivariatePolynomial& operator*=(const GaussianRational& c);
  std::string str() const;
};

/// Z -> i hbar, q -> x, p -> -i hbar d/dx, applied to psi factor by factor
/// from the right. Only s = 1 is supported.
UnivariatePolynomial specialize_quantum(const LambdaElement& a, const Rational& hbar,
                                        const UnivariatePolynomial& psi);

// ---------------------------------------------------------------------------
// Seeded random elements for identity batteries.

struct RandomElementConfig {
  int num_coords = 1;
  int max_degree = 4;
  int max_terms = 3;
};

LambdaElement random_element(std::mt19937_64& rng, const RandomElementConfig& cfg);

}  // namespace opalg::poisson
