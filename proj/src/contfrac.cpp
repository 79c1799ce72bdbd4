#include "ncg/contfrac.hpp"

#include <cctype>
#include <map>
#include <utility>

namespace ncg {

namespace {

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// floor((P + sqrt(d)) / Q) for nonsquare d.
Int state_floor(const CFState& s) {
  Int root = isqrt(s.d);
  if (s.Q > 0) return floor_div(s.P + root, s.Q);
  return floor_div(-s.P - root - 1, -s.Q);
}

std::vector<Int> rotate_left(const std::vector<Int>& v, std::size_t s) {
  std::vector<Int> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[(i + s) % v.size()];
  return out;
}

std::string join(const std::vector<Int>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i].get_str();
  }
  return out;
}

}  // namespace

Int CFExpansion::term(std::size_t k) const {
  if (k < preperiod.size()) return preperiod[k];
  return period[(k - preperiod.size()) % period.size()];
}

CFState initial_state(const QuadSurd& x) {
  CFState s;
  s.d = x.q() * x.q() * x.radicand();
  if (x.q() > 0) {
    s.P = x.p();
    s.Q = x.r();
  } else {
    s.P = -x.p();
    s.Q = -x.r();
  }
  Int rem = s.d - s.P * s.P;
  if (!mpz_divisible_p(rem.get_mpz_t(), s.Q.get_mpz_t())) {
    Int aq = abs(s.Q);
    s.P *= aq;
    s.d *= s.Q * s.Q;
    s.Q *= aq;
  }
  return s;
}

CFExpansion cf_expand(const QuadSurd& x) {
  CFState s = initial_state(x);
  std::map<std::pair<Int, Int>, std::size_t> seen;
  std::vector<Int> terms;
  for (;;) {
    auto [it, fresh] = seen.try_emplace({s.P, s.Q}, terms.size());
    if (!fresh) {
      std::size_t start = it->second;
      CFExpansion e;
      e.preperiod.assign(terms.begin(), terms.begin() + static_cast<std::ptrdiff_t>(start));
      e.period.assign(terms.begin() + static_cast<std::ptrdiff_t>(start), terms.end());
      return e;
    }
    Int a = state_floor(s);
    terms.push_back(a);
    s.P = a * s.Q - s.P;
    s.Q = (s.d - s.P * s.P) / s.Q;
  }
}

std::size_t period_length(const CFExpansion& e) { return e.period.size(); }

QuadSurd cf_value(const CFExpansion& e) {
  if (e.period.empty()) throw InputError("continued fraction without a period");
  Mat2Z m = Mat2Z::identity();
  for (const auto& a : e.period) {
    if (a < 1) throw InputError("period entries must be positive");
    m = m * Mat2Z{a, 1, 1, 0};
  }
  // y = (m11 y + m12) / (m21 y + m22), y > 1
  Int disc = (m.a22 - m.a11) * (m.a22 - m.a11) + 4 * m.a21 * m.a12;
  QuadSurd y = QuadSurd::normalize(m.a11 - m.a22, 1, 2 * m.a21, disc);
  Mat2Z pre = Mat2Z::identity();
  for (std::size_t i = 0; i < e.preperiod.size(); ++i) {
    if (i > 0 && e.preperiod[i] < 1) throw InputError("partial quotients after the first must be positive");
    pre = pre * Mat2Z{e.preperiod[i], 1, 1, 0};
  }
  return moebius_apply(pre, y, Convention::standard);
}

CFExpansion canonicalize(CFExpansion e) {
  if (e.period.empty()) throw InputError("continued fraction without a period");
  std::size_t r = e.period.size();
  for (std::size_t len = 1; len < r; ++len) {
    if (r % len != 0) continue;
    bool repeats = true;
    for (std::size_t i = len; i < r && repeats; ++i) repeats = e.period[i] == e.period[i - len];
    if (repeats) {
      e.period.resize(len);
      break;
    }
  }
  while (!e.preperiod.empty() && e.preperiod.back() == e.period.back()) {
    // [.., c; (p1..c)] == [..; (c, p1, ..)]
    e.preperiod.pop_back();
    e.period = rotate_left(e.period, e.period.size() - 1);
  }
  return e;
}

std::vector<Convergent> convergents(const CFExpansion& e, std::size_t count) {
  std::vector<Convergent> out;
  Int p_prev = 1, q_prev = 0, p = e.term(0), q = 1;
  for (std::size_t k = 0; k < count; ++k) {
    if (k > 0) {
      Int a = e.term(k);
      Int pn = a * p + p_prev;
      Int qn = a * q + q_prev;
      p_prev = p;
      q_prev = q;
      p = pn;
      q = qn;
    }
    out.push_back({p, q});
  }
  return out;
}

std::string to_string(Convention c) { return c == Convention::paper ? "paper" : "standard"; }

QuadSurd moebius_apply(const Mat2Z& g, const QuadSurd& x, Convention conv) {
  if (!is_unimodular(g)) throw InputError("Moebius action needs a unimodular matrix, got " + to_string(g));
  Number v = x;
  auto c = [](const Int& k) { return Number(Rational(k)); };
  Number image = conv == Convention::paper ? (c(g.a11) + c(g.a12) * v) / (c(g.a21) + c(g.a22) * v)
                                           : (c(g.a11) * v + c(g.a12)) / (c(g.a21) * v + c(g.a22));
  return as_surd(image);
}

bool serret_equivalent(const QuadSurd& x, const QuadSurd& y, Group group) {
  if (minimal_polynomial(x).discriminant() != minimal_polynomial(y).discriminant()) return false;
  CFExpansion ex = cf_expand(x);
  CFExpansion ey = cf_expand(y);
  std::size_t r = ex.period.size();
  if (r != ey.period.size()) return false;
  for (std::size_t s = 0; s < r; ++s) {
    if (rotate_left(ex.period, s) != ey.period) continue;
    if (group == Group::GL) return true;
    // Complete quotient x_(pre_x + s) equals y_(pre_y); an odd period can
    // absorb a parity mismatch.
    if (r % 2 == 1 || (ex.preperiod.size() + s + ey.preperiod.size()) % 2 == 0) return true;
  }
  return false;
}

std::string to_string(const CFExpansion& e) {
  std::string period = "(" + join(e.period, ",") + ")";
  if (e.preperiod.empty()) return "[" + period + "]";
  std::string out = "[" + e.preperiod[0].get_str() + "; ";
  for (std::size_t i = 1; i < e.preperiod.size(); ++i) out += e.preperiod[i].get_str() + ", ";
  return out + period + "]";
}

namespace {

std::vector<Int> parse_int_list(std::string_view s, std::string_view context) {
  std::vector<Int> out;
  std::string tok;
  auto flush = [&] {
    std::string t;
    for (char c : tok)
      if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    tok.clear();
    if (t.empty()) return;
    bool ok = true;
    for (std::size_t i = 0; i < t.size() && ok; ++i)
      ok = std::isdigit(static_cast<unsigned char>(t[i])) || (i == 0 && t[i] == '-' && t.size() > 1);
    if (!ok) throw InputError("bad partial quotient '" + t + "' in '" + std::string(context) + "'");
    out.emplace_back(t);
  };
  for (char c : s) {
    if (c == ',' || c == ';') {
      flush();
    } else {
      tok += c;
    }
  }
  flush();
  return out;
}

}  // namespace

CFExpansion parse_cf(std::string_view text) {
  auto fail = [&](const char* why) { throw InputError("cannot parse continued fraction '" + std::string(text) + "': " + why); };
  std::size_t open = text.find('[');
  std::size_t close = text.rfind(']');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) fail("missing brackets");
  for (std::size_t i = 0; i < open; ++i)
    if (!std::isspace(static_cast<unsigned char>(text[i]))) fail("text before '['");
  for (std::size_t i = close + 1; i < text.size(); ++i)
    if (!std::isspace(static_cast<unsigned char>(text[i]))) fail("text after ']'");
  std::string_view body = text.substr(open + 1, close - open - 1);
  std::size_t lp = body.find('(');
  std::size_t rp = body.find(')');
  if (lp == std::string_view::npos || rp == std::string_view::npos || rp < lp) fail("missing parenthesized period");
  for (std::size_t i = rp + 1; i < body.size(); ++i)
    if (!std::isspace(static_cast<unsigned char>(body[i]))) fail("period must come last");
  std::string_view head = body.substr(0, lp);
  // drop the separator that precedes the period
  std::size_t last = head.find_last_not_of(" \t");
  if (last != std::string_view::npos && (head[last] == ',' || head[last] == ';')) head = head.substr(0, last);
  CFExpansion e;
  e.preperiod = parse_int_list(head, text);
  e.period = parse_int_list(body.substr(lp + 1, rp - lp - 1), text);
  if (e.period.empty()) fail("empty period");
  for (const auto& a : e.period)
    if (a < 1) fail("period entries must be positive");
  for (std::size_t i = 1; i < e.preperiod.size(); ++i)
    if (e.preperiod[i] < 1) fail("partial quotients after the first must be positive");
  return canonicalize(std::move(e));
}

}  // namespace ncg
