#include "ncg/intmat.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <utility>

namespace ncg {

bool lex_less(const Mat2Z& x, const Mat2Z& y) {
  if (x.a11 != y.a11) return x.a11 < y.a11;
  if (x.a12 != y.a12) return x.a12 < y.a12;
  if (x.a21 != y.a21) return x.a21 < y.a21;
  return x.a22 < y.a22;
}

bool is_unimodular(const Mat2Z& m) { return abs(m.det()) == 1; }

bool is_nonnegative(const Mat2Z& m) { return m.a11 >= 0 && m.a12 >= 0 && m.a21 >= 0 && m.a22 >= 0; }

Mat2Z inverse(const Mat2Z& m) {
  Int d = m.det();
  if (abs(d) != 1) throw InputError("matrix " + to_string(m) + " is not unimodular");
  // adjugate / det, with det = +-1
  return {m.a22 * d, -m.a12 * d, -m.a21 * d, m.a11 * d};
}

Mat2Z power(const Mat2Z& m, unsigned k) {
  Mat2Z result = Mat2Z::identity();
  Mat2Z base = m;
  while (k > 0) {
    if (k & 1U) result = result * base;
    base = base * base;
    k >>= 1U;
  }
  return result;
}

bool is_anosov(const Mat2Z& m) { return is_unimodular(m) && abs(m.trace()) > 2; }

QuadSurd perron_eigenvalue(const Mat2Z& m) {
  if (!is_anosov(m)) throw InputError("matrix " + to_string(m) + " is not Anosov");
  Int t = m.trace();
  if (t <= 2) throw InputError("Perron eigenvalue needs trace > 2; negate or square first");
  Int disc = t * t - 4 * m.det();
  if (is_perfect_square(disc)) throw std::logic_error("hyperbolic matrix with square discriminant");
  return QuadSurd::normalize(t, 1, 2, disc);
}

QuadSurd eigen_slope(const Mat2Z& m) {
  if (!is_nonnegative(m)) throw InputError("eigen slope needs nonnegative entries, got " + to_string(m));
  QuadSurd lambda = perron_eigenvalue(m);
  if (m.a12 == 0 && m.a21 == 0) throw InputError("diagonal matrix has no positive slope");
  Number slope = m.a12 != 0 ? (Number(lambda) - Number(Rational(m.a11))) / Number(Rational(m.a12))
                            : Number(Rational(m.a21)) / (Number(lambda) - Number(Rational(m.a22)));
  return as_surd(slope);
}

// ------------------------------------------------------------ RL words

namespace {

Mat2Z r_power(const Int& e) { return {1, e, 0, 1}; }
Mat2Z l_power(const Int& e) { return {1, 0, e, 1}; }

struct Run {
  char letter;
  Int count;
};

Mat2Z run_matrix(const Run& run) { return run.letter == 'R' ? r_power(run.count) : l_power(run.count); }

bool reduced(const QuadSurd& x) {
  Number v = x;
  Number c = x.conjugate();
  return compare(v, Rational(1)) > 0 && compare(c, Rational(-1)) > 0 && sign(c) < 0;
}

std::vector<Int> rotate_left(const std::vector<Int>& v, std::size_t s) {
  std::vector<Int> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[(i + s) % v.size()];
  return out;
}

}  // namespace

Mat2Z product(const RLWord& w) {
  Mat2Z p = Mat2Z::identity();
  for (std::size_t i = 0; i < w.exponents.size(); ++i) {
    p = p * (i % 2 == 0 ? r_power(w.exponents[i]) : l_power(w.exponents[i]));
  }
  return p;
}

std::string to_string(const RLWord& w) {
  std::ostringstream os;
  for (std::size_t i = 0; i < w.exponents.size(); ++i) {
    os << (i % 2 == 0 ? 'R' : 'L');
    if (w.exponents[i] != 1) os << '^' << w.exponents[i].get_str();
  }
  return os.str();
}

RLDecomposition rl_decompose(const Mat2Z& m) {
  if (m.det() != 1) throw InputError("RL decomposition needs det 1, got " + to_string(m));
  if (m.trace() <= 2) throw InputError("RL decomposition needs a hyperbolic matrix with trace > 2");
  if (!is_nonnegative(m)) throw InputError("RL decomposition needs nonnegative entries");

  std::vector<Run> runs;
  Mat2Z b = m;
  while (b != Mat2Z::identity()) {
    // For nonnegative SL(2,Z) matrices other than I exactly one row dominates.
    if (b.a11 >= b.a21 && b.a12 >= b.a22) {
      Int k = -1;
      if (b.a21 > 0) k = b.a11 / b.a21;
      if (b.a22 > 0 && (k < 0 || b.a12 / b.a22 < k)) k = b.a12 / b.a22;
      b = r_power(-k) * b;
      runs.push_back({'R', k});
    } else if (b.a21 >= b.a11 && b.a22 >= b.a12) {
      Int k = -1;
      if (b.a11 > 0) k = b.a21 / b.a11;
      if (b.a12 > 0 && (k < 0 || b.a22 / b.a12 < k)) k = b.a22 / b.a12;
      b = l_power(-k) * b;
      runs.push_back({'L', k});
    } else {
      throw std::logic_error("RL peeling stalled on " + to_string(b));
    }
  }

  Mat2Z conj = Mat2Z::identity();
  if (runs.size() >= 2 && runs.front().letter == runs.back().letter) {
    // w = u v  ->  v u = v w v^-1
    Run last = runs.back();
    runs.pop_back();
    conj = run_matrix(last) * conj;
    runs.front().count += last.count;
  }
  if (runs.front().letter == 'L') {
    // w = u v  ->  v u = u^-1 w u
    Run first = runs.front();
    runs.erase(runs.begin());
    conj = inverse(run_matrix(first)) * conj;
    runs.push_back(first);
  }
  if (runs.size() % 2 != 0) throw std::logic_error("RL word without both letters");

  RLDecomposition out;
  for (const auto& r : runs) out.word.exponents.push_back(r.count);
  out.conjugator = conj;
  return out;
}

RLDecomposition hyperbolic_normal_form(const Mat2Z& m) {
  if (m.det() != 1 || m.trace() <= 2) throw InputError("normal form needs det 1 and trace > 2");
  QuadSurd lambda = perron_eigenvalue(m);
  // Attracting fixed point of x -> (a11 x + a12) / (a21 x + a22).
  Number alpha = (Number(lambda) - Number(Rational(m.a22))) / Number(Rational(m.a21));
  QuadSurd x = as_surd(alpha);
  Mat2Z expansion = Mat2Z::identity();
  unsigned steps = 0;
  while (!(reduced(x) && steps % 2 == 0)) {
    Int a = x.floor();
    expansion = expansion * Mat2Z{a, 1, 1, 0};
    x = as_surd(Number(Rational(1)) / (Number(x) - Number(Rational(a))));
    ++steps;
  }
  Mat2Z t = inverse(expansion);
  Mat2Z positive = t * m * expansion;
  RLDecomposition out = rl_decompose(positive);
  out.conjugator = out.conjugator * t;
  return out;
}

std::string to_string(Group g) { return g == Group::GL ? "GL" : "SL"; }

std::vector<Int> canonical_cycle(const std::vector<Int>& cycle, Group group) {
  std::vector<Int> best = cycle;
  std::size_t step = group == Group::GL ? 1 : 2;
  for (std::size_t s = step; s < cycle.size(); s += step) {
    auto cand = rotate_left(cycle, s);
    if (cand < best) best = std::move(cand);
  }
  return best;
}

ConjugacyResult decide_conjugacy(const Mat2Z& m, const Mat2Z& n, Group group) {
  if (!is_anosov(m) || !is_anosov(n)) throw InputError("conjugacy test needs Anosov matrices");
  ConjugacyResult result;
  if (m.trace() != n.trace() || m.det() != n.det()) return result;

  // Equal traces make m^2 ~ n^2 equivalent to m ~ n, with the same conjugator.
  Mat2Z mm = m, nn = n;
  if (m.det() == -1) {
    mm = m * m;
    nn = n * n;
    result.squared = true;
  } else if (m.trace() < 0) {
    mm = -m;
    nn = -n;
    result.negated = true;
  }

  auto f1 = hyperbolic_normal_form(mm);
  auto f2 = hyperbolic_normal_form(nn);
  const auto& e1 = f1.word.exponents;
  const auto& e2 = f2.word.exponents;
  if (e1.size() != e2.size()) return result;

  for (std::size_t s = 0; s < e1.size(); ++s) {
    if (group == Group::SL && s % 2 == 1) continue;
    if (rotate_left(e1, s) != e2) continue;
    // u = first s runs of word 1; rotating by u conjugates by u^-1, odd
    // rotations then swap R and L via the flip.
    Mat2Z u = Mat2Z::identity();
    for (std::size_t i = 0; i < s; ++i) u = u * (i % 2 == 0 ? r_power(e1[i]) : l_power(e1[i]));
    Mat2Z rot = inverse(u);
    if (s % 2 == 1) rot = matrix_flip() * rot;
    Mat2Z t = inverse(f2.conjugator) * rot * f1.conjugator;
    if (t * m != n * t) throw std::logic_error("conjugator reconstruction failed");
    result.conjugate = true;
    result.conjugator = t;
    return result;
  }
  return result;
}

std::optional<Mat2Z> brute_force_conjugator(const Mat2Z& m, const Mat2Z& n, unsigned bound) {
  // Coordinate order 0, 1, -1, 2, -2, ...; row-major lexicographic over it.
  std::vector<long> values{0};
  for (long v = 1; v <= static_cast<long>(bound); ++v) {
    values.push_back(v);
    values.push_back(-v);
  }
  Int lim = bound;
  auto accept = [&](const Mat2Z& t) { return abs(t.det()) == 1 && n * t == t * m; };

  if (n.a12 != 0) {
    // First row of n*T = T*m determines the second row of T.
    for (long t11 : values) {
      for (long t12 : values) {
        Int n21 = t11 * m.a11 + t12 * m.a21 - n.a11 * t11;
        Int n22 = t11 * m.a12 + t12 * m.a22 - n.a11 * t12;
        if (!mpz_divisible_p(n21.get_mpz_t(), n.a12.get_mpz_t()) ||
            !mpz_divisible_p(n22.get_mpz_t(), n.a12.get_mpz_t())) {
          continue;
        }
        Mat2Z t{t11, t12, n21 / n.a12, n22 / n.a12};
        if (abs(t.a21) > lim || abs(t.a22) > lim) continue;
        if (accept(t)) return t;
      }
    }
    return std::nullopt;
  }
  for (long t11 : values)
    for (long t12 : values)
      for (long t21 : values)
        for (long t22 : values) {
          Mat2Z t{t11, t12, t21, t22};
          if (accept(t)) return t;
        }
  return std::nullopt;
}

// ------------------------------------------------------------ IntMatrix

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, std::vector<Int> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) throw InputError("matrix data does not match its shape");
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Mat2Z IntMatrix::to_mat2() const {
  if (rows_ != 2 || cols_ != 2) throw InputError("expected a 2x2 matrix");
  return {data_[0], data_[1], data_[2], data_[3]};
}

Int IntMatrix::max_abs_entry() const {
  Int best = 0;
  for (const auto& v : data_) best = std::max<Int>(best, abs(v));
  return best;
}

bool IntMatrix::is_nonnegative() const {
  return std::all_of(data_.begin(), data_.end(), [](const Int& v) { return v >= 0; });
}

IntMatrix operator*(const IntMatrix& x, const IntMatrix& y) {
  if (x.cols_ != y.rows_) throw InputError("matrix shape mismatch in product");
  IntMatrix p(x.rows_, y.cols_);
  for (std::size_t i = 0; i < x.rows_; ++i)
    for (std::size_t k = 0; k < x.cols_; ++k) {
      const Int& xik = x(i, k);
      if (xik == 0) continue;
      for (std::size_t j = 0; j < y.cols_; ++j) p(i, j) += xik * y(k, j);
    }
  return p;
}

IntMatrix operator-(const IntMatrix& x, const IntMatrix& y) {
  if (x.rows_ != y.rows_ || x.cols_ != y.cols_) throw InputError("matrix shape mismatch in difference");
  IntMatrix d(x.rows_, x.cols_);
  for (std::size_t i = 0; i < x.data_.size(); ++i) d.data_[i] = x.data_[i] - y.data_[i];
  return d;
}

Int determinant(const IntMatrix& m) {
  if (!m.is_square()) throw InputError("determinant of a non-square matrix");
  std::size_t n = m.rows();
  if (n == 0) return 1;
  // Fraction-free Bareiss elimination.
  IntMatrix a = m;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t swap = k + 1;
      while (swap < n && a(swap, k) == 0) ++swap;
      if (swap == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(swap, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

std::vector<Int> SmithForm::diagonal() const {
  std::vector<Int> d;
  for (std::size_t i = 0; i < std::min(S.rows(), S.cols()); ++i) d.push_back(S(i, i));
  return d;
}

namespace {

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}
void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}
// row[dst] += k * row[src]
void add_row(IntMatrix& m, std::size_t dst, std::size_t src, const Int& k) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(dst, j) += k * m(src, j);
}
void add_col(IntMatrix& m, std::size_t dst, std::size_t src, const Int& k) {
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, dst) += k * m(i, src);
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& m) {
  SmithForm f{IntMatrix::identity(m.rows()), m, IntMatrix::identity(m.cols())};
  IntMatrix& S = f.S;
  const std::size_t rank_cap = std::min(m.rows(), m.cols());
  for (std::size_t t = 0; t < rank_cap; ++t) {
    for (;;) {
      // Smallest nonzero |entry| in the trailing block, first in row-major scan.
      std::size_t pi = 0, pj = 0;
      bool found = false;
      for (std::size_t i = t; i < S.rows(); ++i)
        for (std::size_t j = t; j < S.cols(); ++j) {
          if (S(i, j) == 0) continue;
          if (!found || abs(S(i, j)) < abs(S(pi, pj))) {
            pi = i;
            pj = j;
            found = true;
          }
        }
      if (!found) return f;
      swap_rows(S, t, pi);
      swap_rows(f.U, t, pi);
      swap_cols(S, t, pj);
      swap_cols(f.V, t, pj);

      bool dirty = false;
      for (std::size_t i = t + 1; i < S.rows(); ++i) {
        if (S(i, t) == 0) continue;
        Int q = S(i, t) / S(t, t);
        add_row(S, i, t, -q);
        add_row(f.U, i, t, -q);
        if (S(i, t) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < S.cols(); ++j) {
        if (S(t, j) == 0) continue;
        Int q = S(t, j) / S(t, t);
        add_col(S, j, t, -q);
        add_col(f.V, j, t, -q);
        if (S(t, j) != 0) dirty = true;
      }
      if (dirty) continue;

      // Enforce divisibility of the trailing block by the pivot.
      bool fixed = false;
      for (std::size_t i = t + 1; i < S.rows() && !fixed; ++i)
        for (std::size_t j = t + 1; j < S.cols() && !fixed; ++j) {
          if (!mpz_divisible_p(S(i, j).get_mpz_t(), S(t, t).get_mpz_t())) {
            add_row(S, t, i, 1);
            add_row(f.U, t, i, 1);
            fixed = true;
          }
        }
      if (fixed) continue;
      break;
    }
    if (S(t, t) < 0) {
      for (std::size_t j = 0; j < S.cols(); ++j) S(t, j) = -S(t, j);
      for (std::size_t j = 0; j < f.U.cols(); ++j) f.U(t, j) = -f.U(t, j);
    }
  }
  return f;
}

// ------------------------------------------------------------ text

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

Int parse_int(const std::string& tok, std::string_view context) {
  std::string t = tok;
  if (!t.empty() && t[0] == '+') t.erase(0, 1);
  bool ok = !t.empty();
  for (std::size_t i = 0; i < t.size() && ok; ++i) {
    ok = std::isdigit(static_cast<unsigned char>(t[i])) || (i == 0 && t[i] == '-' && t.size() > 1);
  }
  if (!ok) throw InputError("bad integer '" + tok + "' in matrix '" + std::string(context) + "'");
  return Int(t);
}

}  // namespace

IntMatrix parse_matrix(std::string_view text) {
  auto rows = split(text, ';');
  std::size_t cols = 0;
  std::vector<Int> data;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto cells = split(rows[i], ',');
    if (i == 0) cols = cells.size();
    if (cells.size() != cols) throw InputError("ragged matrix '" + std::string(text) + "'");
    for (const auto& c : cells) data.push_back(parse_int(c, text));
  }
  return IntMatrix(rows.size(), cols, std::move(data));
}

Mat2Z parse_mat2(std::string_view text) {
  IntMatrix m = parse_matrix(text);
  if (m.rows() != 2 || m.cols() != 2) throw InputError("expected a 2x2 matrix 'a11,a12;a21,a22', got '" + std::string(text) + "'");
  return m.to_mat2();
}

std::string to_string(const IntMatrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i) out += ';';
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += m(i, j).get_str();
    }
  }
  return out;
}

std::string to_string(const Mat2Z& m) { return to_string(IntMatrix(m)); }

}  // namespace ncg
