#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <mpfr.h>

#include "ncg/contfrac.hpp"
#include "ncg/exactnum.hpp"
#include "ncg/intmat.hpp"

namespace ncg::testing {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

/// Seed for randomized tests; set from --seed=N by the test main.
std::uint64_t seed();
void set_seed(std::uint64_t s);

/// Removes "--seed=N" / "--seed N" from argv and records the seed.
void strip_seed_flag(int& argc, char** argv);

class Gen {
 public:
  explicit Gen(std::uint64_t s) : eng_(s) {}

  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(eng_); }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(uniform(0, static_cast<long>(v.size()) - 1))];
  }

  /// (p + q sqrt(D)) / r with |p|, |q| <= bound, q != 0, 1 <= r <= bound, D from `radicands`.
  QuadSurd surd(long bound, const std::vector<long>& radicands);

  /// Product of up to `len` generators R, L, their inverses and the flip.
  Mat2Z unimodular_word(std::size_t len);

  /// Uniform matrix with entries in [-bound, bound] and determinant +-1.
  Mat2Z unimodular(long bound);

  /// Nonnegative Anosov matrix with entries <= bound.
  Mat2Z positive_anosov(long bound);

 private:
  std::mt19937_64 eng_;
};

/// All matrices with entries in [lo, hi] satisfying |det| = 1, |trace| > 2.
std::vector<Mat2Z> anosov_box(long lo, long hi);

/// Owning MPFR value.
class BigFloat {
 public:
  explicit BigFloat(long bits) { mpfr_init2(v_, bits); mpfr_set_ui(v_, 0, MPFR_RNDN); }
  BigFloat(const BigFloat& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  BigFloat& operator=(const BigFloat& o) { mpfr_set(v_, o.v_, MPFR_RNDN); return *this; }
  ~BigFloat() { mpfr_clear(v_); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

/// (p + q sqrt(D)) / r, or a rational, evaluated independently with MPFR.
BigFloat to_bigfloat(const Number& x, long bits);

/// |a - b| / |b|, or |a - b| when b == 0.
double relative_gap(const BigFloat& a, const BigFloat& b);

/// First `count` partial quotients of sqrt(n) from iterating x -> 1/(x - floor x)
/// in floating point. Independent of the exact engine.
std::vector<long> float_cf_sqrt(long n, std::size_t count, long bits = 2048);

}  // namespace ncg::testing
