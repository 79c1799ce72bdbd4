#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace ncg {

using Int = mpz_class;

/// Raised for any input that violates an operation's precondition.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Int isqrt(const Int& n);
bool is_perfect_square(const Int& n);

/// Writes |d| = square^2 * core with core squarefree. Trial division runs up
/// to 10^6; a cofactor above that bound whose square-freeness cannot be settled
/// raises InputError.
struct SquarefreeSplit {
  Int square;
  Int core;
};
SquarefreeSplit squarefree_split(const Int& d);

class Rational {
 public:
  Rational() = default;
  Rational(long n) : v_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(const Int& n) : v_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(const Int& num, const Int& den);

  Int num() const { return v_.get_num(); }
  Int den() const { return v_.get_den(); }
  const mpq_class& value() const { return v_; }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }
  Int floor() const;

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ + b.v_)); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ - b.v_)); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ * b.v_)); }
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(mpq_class(-v_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }

 private:
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }
  mpq_class v_;
};

/**
 * Canonical element (p + q*sqrt(D)) / r of a real quadratic field.
 *
 * Invariants: D > 1 squarefree, r > 0, gcd(p, q, r) = 1, q != 0. Two values
 * are equal iff their fields are equal.
 */
class QuadSurd {
 public:
  /// Canonicalizes (p + q*sqrt(d)) / r, extracting square factors of d.
  /// Throws InputError when r == 0, d <= 0, or the value is rational.
  static QuadSurd normalize(const Int& p, const Int& q, const Int& r, const Int& d);

  const Int& p() const { return p_; }
  const Int& q() const { return q_; }
  const Int& r() const { return r_; }
  const Int& radicand() const { return d_; }

  /// Galois conjugate (p - q*sqrt(D)) / r.
  QuadSurd conjugate() const { return QuadSurd(p_, -q_, r_, d_); }
  QuadSurd operator-() const { return QuadSurd(-p_, -q_, r_, d_); }

  int sign() const;
  Int floor() const;
  double approx() const;

  friend bool operator==(const QuadSurd&, const QuadSurd&) = default;

 private:
  friend std::variant<Rational, QuadSurd> make_number(const Int&, const Int&, const Int&, const Int&);
  QuadSurd(Int p, Int q, Int r, Int d)
      : p_(std::move(p)), q_(std::move(q)), r_(std::move(r)), d_(std::move(d)) {}
  Int p_, q_, r_, d_;
};

using Number = std::variant<Rational, QuadSurd>;

/// (p + q*sqrt(d)) / r with d already squarefree (or q == 0); rational values
/// are demoted to Rational.
Number make_number(const Int& p, const Int& q, const Int& r, const Int& d);

enum class FieldOp { add, sub, mul, div };

/// Exact field arithmetic. Two surds must share a radicand; a Rational mixes
/// with either field. Division by zero and mixed radicands raise InputError.
Number field_op(const Number& x, const Number& y, FieldOp op);

inline Number operator+(const Number& x, const Number& y) { return field_op(x, y, FieldOp::add); }
inline Number operator-(const Number& x, const Number& y) { return field_op(x, y, FieldOp::sub); }
inline Number operator*(const Number& x, const Number& y) { return field_op(x, y, FieldOp::mul); }
inline Number operator/(const Number& x, const Number& y) { return field_op(x, y, FieldOp::div); }
Number negate(const Number& x);

int sign(const Number& x);
bool is_zero(const Number& x);
Int floor(const Number& x);
double approx(const Number& x);
/// Three-way comparison of exact values; throws on mixed radicands.
int compare(const Number& x, const Number& y);

inline bool is_rational(const Number& x) { return std::holds_alternative<Rational>(x); }
inline const QuadSurd& as_surd(const Number& x) { return std::get<QuadSurd>(x); }

/// Primitive integer polynomial a x^2 + b x + c with a > 0.
struct MinPoly {
  Int a, b, c;
  Int discriminant() const { return b * b - 4 * a * c; }
  friend bool operator==(const MinPoly&, const MinPoly&) = default;
};

MinPoly minimal_polynomial(const QuadSurd& x);

/// Evaluates a x^2 + b x + c exactly at x.
Number evaluate(const MinPoly& poly, const Number& x);

/// Text forms: "(p+q*sqrt(D))/r" for surds, "n/d" or "n" for rationals.
std::string to_string(const Rational& x);
std::string to_string(const QuadSurd& x);
std::string to_string(const Number& x);

/// Parses ring expressions over the integers and sqrt(n): "sqrt(2)",
/// "(1+sqrt(5))/2", "3/4", "-2*sqrt(3)+1". Throws InputError on bad syntax.
Number parse_number(std::string_view text);
QuadSurd parse_surd(std::string_view text);

}  // namespace ncg
