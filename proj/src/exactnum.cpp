#include "ncg/exactnum.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace ncg {

namespace {

constexpr unsigned long kTrialBound = 1000000UL;

Int gcd3(const Int& a, const Int& b, const Int& c) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Uniform view of a Number as (p + q*sqrt(d)) / r; rationals carry q = d = 0.
struct Parts {
  Int p, q, r, d;
};

Parts parts_of(const Number& x) {
  if (const auto* rat = std::get_if<Rational>(&x)) return {rat->num(), 0, rat->den(), 0};
  const auto& s = std::get<QuadSurd>(x);
  return {s.p(), s.q(), s.r(), s.radicand()};
}

Int common_radicand(const Parts& x, const Parts& y) {
  if (x.d != 0 && y.d != 0 && x.d != y.d) {
    throw InputError("field arithmetic across different radicands: sqrt(" + x.d.get_str() +
                     ") and sqrt(" + y.d.get_str() + ")");
  }
  return x.d != 0 ? x.d : y.d;
}

}  // namespace

Int isqrt(const Int& n) {
  if (n < 0) throw InputError("isqrt of a negative integer");
  Int s;
  mpz_sqrt(s.get_mpz_t(), n.get_mpz_t());
  return s;
}

bool is_perfect_square(const Int& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0; }

SquarefreeSplit squarefree_split(const Int& d) {
  Int m = abs(d);
  if (m == 0) return {0, 1};
  Int square = 1;
  Int core = 1;
  bool exhausted = false;
  for (unsigned long p = 2; p <= kTrialBound; p += (p == 2 ? 1 : 2)) {
    if (mpz_cmp_ui(m.get_mpz_t(), p * p) < 0) {
      exhausted = true;
      break;
    }
    if (!mpz_divisible_ui_p(m.get_mpz_t(), p)) continue;
    unsigned e = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
      ++e;
    }
    Int pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), p, e / 2);
    square *= pw;
    if (e % 2 == 1) core *= p;
  }
  if (m == 1) return {square, core};
  if (exhausted) return {square, core * m};
  // Every prime factor of m exceeds the trial bound.
  if (is_perfect_square(m)) return {square * isqrt(m), core};
  Int limit;
  mpz_ui_pow_ui(limit.get_mpz_t(), kTrialBound, 3);
  if (m < limit) return {square, core * m};
  throw InputError("cannot certify square-freeness of cofactor " + m.get_str() +
                   " beyond trial division bound 10^6");
}

// ---------------------------------------------------------------- Rational

Rational::Rational(const Int& num, const Int& den) {
  if (den == 0) throw InputError("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Int Rational::floor() const { return floor_div(num(), den()); }

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw InputError("division by zero");
  return Rational(mpq_class(a.v_ / b.v_));
}

// ---------------------------------------------------------------- QuadSurd

Number make_number(const Int& p, const Int& q, const Int& r, const Int& d) {
  if (r == 0) throw InputError("zero denominator");
  if (q == 0 || d == 0) return Rational(p, r);
  Int g = gcd3(p, q, r);
  Int pp = p / g, qq = q / g, rr = r / g;
  if (rr < 0) {
    pp = -pp;
    qq = -qq;
    rr = -rr;
  }
  return QuadSurd(pp, qq, rr, d);
}

QuadSurd QuadSurd::normalize(const Int& p, const Int& q, const Int& r, const Int& d) {
  if (r == 0) throw InputError("surd with zero denominator");
  if (d <= 0) throw InputError("surd radicand must be positive, got " + d.get_str());
  auto split = squarefree_split(d);
  if (split.core == 1 || q == 0) throw InputError("value is rational, not a quadratic surd");
  auto n = make_number(p, q * split.square, r, split.core);
  return std::get<QuadSurd>(n);
}

int QuadSurd::sign() const {
  if (p_ >= 0 && q_ > 0) return 1;
  if (p_ <= 0 && q_ < 0) return -1;
  Int lhs = p_ * p_;
  Int rhs = q_ * q_ * d_;
  // p and q have opposite signs; the larger magnitude wins.
  if (p_ > 0) return lhs > rhs ? 1 : -1;
  return lhs > rhs ? -1 : 1;
}

Int QuadSurd::floor() const {
  // q*sqrt(D) lies strictly between consecutive integers, so the numerator
  // lies in (n, n+1) and floor(num / r) = floor(n / r).
  Int s = isqrt(q_ * q_ * d_);
  Int n = q_ > 0 ? Int(p_ + s) : Int(p_ - s - 1);
  return floor_div(n, r_);
}

double QuadSurd::approx() const {
  mpf_class root(d_, 256);
  root = sqrt(root);
  mpf_class v(0, 256);
  v = (mpf_class(p_, 256) + mpf_class(q_, 256) * root) / mpf_class(r_, 256);
  return v.get_d();
}

// ---------------------------------------------------------------- Number ops

Number field_op(const Number& x, const Number& y, FieldOp op) {
  Parts a = parts_of(x);
  Parts b = parts_of(y);
  Int d = common_radicand(a, b);
  switch (op) {
    case FieldOp::add:
      return make_number(a.p * b.r + b.p * a.r, a.q * b.r + b.q * a.r, a.r * b.r, d);
    case FieldOp::sub:
      return make_number(a.p * b.r - b.p * a.r, a.q * b.r - b.q * a.r, a.r * b.r, d);
    case FieldOp::mul:
      return make_number(a.p * b.p + a.q * b.q * d, a.p * b.q + a.q * b.p, a.r * b.r, d);
    case FieldOp::div: {
      Int norm = b.p * b.p - b.q * b.q * d;
      if (norm == 0) throw InputError("division by zero");
      // 1/y = r (p - q sqrt d) / (p^2 - q^2 d)
      Int ip = b.r * b.p, iq = -b.r * b.q;
      return make_number(a.p * ip + a.q * iq * d, a.p * iq + a.q * ip, a.r * norm, d);
    }
  }
  throw std::logic_error("unknown field op");
}

Number negate(const Number& x) {
  if (const auto* r = std::get_if<Rational>(&x)) return -*r;
  return -std::get<QuadSurd>(x);
}

int sign(const Number& x) {
  return std::visit([](const auto& v) { return v.sign(); }, x);
}

bool is_zero(const Number& x) { return sign(x) == 0; }

Int floor(const Number& x) {
  return std::visit([](const auto& v) { return v.floor(); }, x);
}

double approx(const Number& x) {
  if (const auto* r = std::get_if<Rational>(&x)) return r->value().get_d();
  return std::get<QuadSurd>(x).approx();
}

int compare(const Number& x, const Number& y) { return sign(x - y); }

MinPoly minimal_polynomial(const QuadSurd& x) {
  // (r x - p)^2 = q^2 D
  Int a = x.r() * x.r();
  Int b = -2 * x.p() * x.r();
  Int c = x.p() * x.p() - x.q() * x.q() * x.radicand();
  Int g = gcd3(a, b, c);
  return {a / g, b / g, c / g};
}

Number evaluate(const MinPoly& poly, const Number& x) {
  return Number(Rational(poly.a)) * x * x + Number(Rational(poly.b)) * x + Number(Rational(poly.c));
}

// ---------------------------------------------------------------- text

std::string to_string(const Rational& x) {
  if (x.den() == 1) return x.num().get_str();
  return x.num().get_str() + "/" + x.den().get_str();
}

std::string to_string(const QuadSurd& x) {
  std::string num;
  Int aq = abs(x.q());
  std::string radical = (aq == 1 ? std::string() : aq.get_str() + "*") + "sqrt(" + x.radicand().get_str() + ")";
  bool two_terms = x.p() != 0;
  if (two_terms) {
    num = x.p().get_str() + (x.q() > 0 ? "+" : "-") + radical;
  } else {
    num = (x.q() > 0 ? "" : "-") + radical;
  }
  if (x.r() == 1) return num;
  if (two_terms) return "(" + num + ")/" + x.r().get_str();
  return num + "/" + x.r().get_str();
}

std::string to_string(const Number& x) {
  return std::visit([](const auto& v) { return to_string(v); }, x);
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Number parse() {
    Number v = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    std::ostringstream os;
    os << "cannot parse number '" << text_ << "' at offset " << pos_ << ": " << why;
    throw InputError(os.str());
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Number expr() {
    Number v = term();
    for (;;) {
      if (accept('+')) {
        v = v + term();
      } else if (accept('-')) {
        v = v - term();
      } else {
        return v;
      }
    }
  }

  Number term() {
    Number v = unary();
    for (;;) {
      if (accept('*')) {
        v = v * unary();
      } else if (accept('/')) {
        v = v / unary();
      } else {
        return v;
      }
    }
  }

  Number unary() {
    if (accept('-')) return negate(unary());
    if (accept('+')) return unary();
    return primary();
  }

  Number primary() {
    skip_ws();
    if (accept('(')) {
      Number v = expr();
      expect(')');
      return v;
    }
    if (text_.substr(pos_, 4) == "sqrt") {
      pos_ += 4;
      expect('(');
      Number arg = expr();
      expect(')');
      return square_root(arg);
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer, sqrt(...) or '('");
    return Rational(Int(std::string(text_.substr(start, pos_ - start))));
  }

  Number square_root(const Number& arg) {
    const auto* r = std::get_if<Rational>(&arg);
    if (r == nullptr) fail("sqrt argument must be rational");
    if (r->sign() < 0) fail("sqrt of a negative number");
    // sqrt(n/d) = sqrt(n d) / d
    Int radicand = r->num() * r->den();
    auto split = squarefree_split(radicand);
    if (radicand == 0) return Rational(0);
    if (split.core == 1) return Rational(split.square, r->den());
    return make_number(0, split.square, r->den(), split.core);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Number parse_number(std::string_view text) { return Parser(text).parse(); }

QuadSurd parse_surd(std::string_view text) {
  Number n = parse_number(text);
  if (is_rational(n)) throw InputError("expected an irrational quadratic surd, got rational " + to_string(n));
  return as_surd(n);
}

}  // namespace ncg
