#include "support.hpp"

#include <cstdlib>
#include <cstring>
#include <string_view>

namespace ncg::testing {

namespace {
std::uint64_t g_seed = kDefaultSeed;
}

std::uint64_t seed() { return g_seed; }
void set_seed(std::uint64_t s) { g_seed = s; }

void strip_seed_flag(int& argc, char** argv) {
  int out = 1;
  for (int i = 1; i < argc; ++i) {
    std::string_view a = argv[i];
    if (a.rfind("--seed=", 0) == 0) {
      set_seed(std::strtoull(argv[i] + 7, nullptr, 10));
    } else if (a == "--seed" && i + 1 < argc) {
      set_seed(std::strtoull(argv[++i], nullptr, 10));
    } else {
      argv[out++] = argv[i];
    }
  }
  argc = out;
  argv[argc] = nullptr;
}

QuadSurd Gen::surd(long bound, const std::vector<long>& radicands) {
  long q = 0;
  while (q == 0) q = uniform(-bound, bound);
  return QuadSurd::normalize(uniform(-bound, bound), q, uniform(1, bound), pick(radicands));
}

Mat2Z Gen::unimodular_word(std::size_t len) {
  static const std::vector<Mat2Z> gens = {matrix_R(), matrix_L(), inverse(matrix_R()), inverse(matrix_L()),
                                          matrix_flip()};
  Mat2Z t = Mat2Z::identity();
  std::size_t n = static_cast<std::size_t>(uniform(0, static_cast<long>(len)));
  for (std::size_t i = 0; i < n; ++i) t = t * pick(gens);
  return t;
}

Mat2Z Gen::unimodular(long bound) {
  for (;;) {
    Mat2Z m{uniform(-bound, bound), uniform(-bound, bound), uniform(-bound, bound), uniform(-bound, bound)};
    if (is_unimodular(m)) return m;
  }
}

Mat2Z Gen::positive_anosov(long bound) {
  for (;;) {
    Mat2Z m{uniform(0, bound), uniform(0, bound), uniform(0, bound), uniform(0, bound)};
    if (is_anosov(m)) return m;
  }
}

std::vector<Mat2Z> anosov_box(long lo, long hi) {
  std::vector<Mat2Z> out;
  for (long a = lo; a <= hi; ++a)
    for (long b = lo; b <= hi; ++b)
      for (long c = lo; c <= hi; ++c)
        for (long d = lo; d <= hi; ++d) {
          long det = a * d - b * c;
          if ((det == 1 || det == -1) && std::abs(a + d) > 2) out.push_back({a, b, c, d});
        }
  return out;
}

BigFloat to_bigfloat(const Number& x, long bits) {
  BigFloat out(bits);
  if (const auto* r = std::get_if<Rational>(&x)) {
    mpfr_set_q(out.get(), r->value().get_mpq_t(), MPFR_RNDN);
    return out;
  }
  const QuadSurd& s = std::get<QuadSurd>(x);
  BigFloat t(bits);
  mpfr_set_z(t.get(), s.radicand().get_mpz_t(), MPFR_RNDN);
  mpfr_sqrt(t.get(), t.get(), MPFR_RNDN);
  mpfr_mul_z(t.get(), t.get(), s.q().get_mpz_t(), MPFR_RNDN);
  mpfr_add_z(t.get(), t.get(), s.p().get_mpz_t(), MPFR_RNDN);
  mpfr_div_z(out.get(), t.get(), s.r().get_mpz_t(), MPFR_RNDN);
  return out;
}

double relative_gap(const BigFloat& a, const BigFloat& b) {
  long bits = static_cast<long>(mpfr_get_prec(a.get()));
  BigFloat d(bits);
  mpfr_sub(d.get(), a.get(), b.get(), MPFR_RNDN);
  mpfr_abs(d.get(), d.get(), MPFR_RNDN);
  if (!mpfr_zero_p(b.get())) {
    BigFloat ab(bits);
    mpfr_abs(ab.get(), b.get(), MPFR_RNDN);
    mpfr_div(d.get(), d.get(), ab.get(), MPFR_RNDN);
  }
  return mpfr_get_d(d.get(), MPFR_RNDN);
}

std::vector<long> float_cf_sqrt(long n, std::size_t count, long bits) {
  std::vector<long> out;
  BigFloat x(bits), f(bits);
  mpfr_set_si(x.get(), n, MPFR_RNDN);
  mpfr_sqrt(x.get(), x.get(), MPFR_RNDN);
  for (std::size_t k = 0; k < count; ++k) {
    mpfr_floor(f.get(), x.get());
    out.push_back(mpfr_get_si(f.get(), MPFR_RNDN));
    mpfr_sub(x.get(), x.get(), f.get(), MPFR_RNDN);
    mpfr_ui_div(x.get(), 1, x.get(), MPFR_RNDN);
  }
  return out;
}

}  // namespace ncg::testing
