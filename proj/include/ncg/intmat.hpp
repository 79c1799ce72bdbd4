#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ncg/exactnum.hpp"

namespace ncg {

/// 2x2 integer matrix, row-major [[a11, a12], [a21, a22]].
struct Mat2Z {
  Int a11 = 0, a12 = 0, a21 = 0, a22 = 0;

  static Mat2Z identity() { return {1, 0, 0, 1}; }

  Int det() const { return a11 * a22 - a12 * a21; }
  Int trace() const { return a11 + a22; }
  Mat2Z transpose() const { return {a11, a21, a12, a22}; }
  Mat2Z operator-() const { return {-a11, -a12, -a21, -a22}; }

  friend Mat2Z operator*(const Mat2Z& x, const Mat2Z& y) {
    return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
            x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
  }
  friend bool operator==(const Mat2Z&, const Mat2Z&) = default;
};

/// Row-major lexicographic order on (a11, a12, a21, a22).
bool lex_less(const Mat2Z& x, const Mat2Z& y);

bool is_unimodular(const Mat2Z& m);
bool is_nonnegative(const Mat2Z& m);
/// Inverse of a unimodular matrix; throws InputError otherwise.
Mat2Z inverse(const Mat2Z& m);
Mat2Z power(const Mat2Z& m, unsigned k);

inline Mat2Z matrix_R() { return {1, 1, 0, 1}; }
inline Mat2Z matrix_L() { return {1, 0, 1, 1}; }
inline Mat2Z matrix_flip() { return {0, 1, 1, 0}; }

/// |det m| = 1 and |trace m| > 2.
bool is_anosov(const Mat2Z& m);

/// The eigenvalue (t + sqrt(t^2 - 4 det)) / 2 > 1. Requires an Anosov matrix
/// with trace > 2.
QuadSurd perron_eigenvalue(const Mat2Z& m);

/// Slope v2/v1 of the Perron eigenvector. Requires Anosov, trace > 2 and
/// nonnegative entries.
QuadSurd eigen_slope(const Mat2Z& m);

/// R^e1 L^e2 ... R^e(2k-1) L^e(2k), all exponents positive, even length.
struct RLWord {
  std::vector<Int> exponents;
  friend bool operator==(const RLWord&, const RLWord&) = default;
};

Mat2Z product(const RLWord& w);
std::string to_string(const RLWord& w);

/// product(word) == conjugator * m * conjugator^-1, conjugator in SL(2,Z).
struct RLDecomposition {
  RLWord word;
  Mat2Z conjugator;
};

/// Peels a nonnegative hyperbolic SL(2,Z) matrix into R and L factors and
/// rotates the word cyclically so that it starts with R and ends with L.
RLDecomposition rl_decompose(const Mat2Z& m);

/// For any hyperbolic m with det 1 and trace > 2 (entries of either sign):
/// a positive SL(2,Z)-conjugate and its RL word.
RLDecomposition hyperbolic_normal_form(const Mat2Z& m);

enum class Group { GL, SL };
std::string to_string(Group g);

/// Lexicographically least rotation of an RL exponent cycle: even shifts only
/// for SL, any shift for GL (odd shifts are conjugation by the flip).
std::vector<Int> canonical_cycle(const std::vector<Int>& cycle, Group group);

struct ConjugacyResult {
  bool conjugate = false;
  /// When conjugate: T with n == T * m * T^-1, T in the requested group.
  std::optional<Mat2Z> conjugator;
  bool negated = false;  // trace < -2 handled by classifying -m
  bool squared = false;  // det = -1 handled by classifying m^2
};

/// Decides n = T m T^-1 for Anosov m, n. Throws InputError for non-Anosov input.
ConjugacyResult decide_conjugacy(const Mat2Z& m, const Mat2Z& n, Group group = Group::GL);
inline bool conjugacy_test(const Mat2Z& m, const Mat2Z& n, Group group = Group::GL) {
  return decide_conjugacy(m, n, group).conjugate;
}

/// Lexicographically smallest T in GL(2,Z) with entries in [-bound, bound]
/// and n*T == T*m, found by exhaustive search.
std::optional<Mat2Z> brute_force_conjugator(const Mat2Z& m, const Mat2Z& n, unsigned bound);

/// Dense integer matrix, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Int(0)) {}
  IntMatrix(std::size_t rows, std::size_t cols, std::vector<Int> data);
  explicit IntMatrix(const Mat2Z& m) : IntMatrix(2, 2, {m.a11, m.a12, m.a21, m.a22}) {}

  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<Int>& data() const { return data_; }

  IntMatrix transpose() const;
  Mat2Z to_mat2() const;
  Int max_abs_entry() const;
  bool is_nonnegative() const;

  friend IntMatrix operator*(const IntMatrix& x, const IntMatrix& y);
  friend IntMatrix operator-(const IntMatrix& x, const IntMatrix& y);
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Int> data_;
};

Int determinant(const IntMatrix& m);

/// U * m * V == S with U, V unimodular and S diagonal, d1 | d2 | ..., di >= 0.
struct SmithForm {
  IntMatrix U, S, V;
  std::vector<Int> diagonal() const;
};

SmithForm smith_normal_form(const IntMatrix& m);

/// "a11,a12;a21,a22" and its n x n / r x c generalization.
Mat2Z parse_mat2(std::string_view text);
IntMatrix parse_matrix(std::string_view text);
std::string to_string(const Mat2Z& m);
std::string to_string(const IntMatrix& m);

}  // namespace ncg
