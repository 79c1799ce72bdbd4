#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ncg/exactnum.hpp"
#include "ncg/intmat.hpp"

namespace ncg {

/**
 * Eventually periodic regular continued fraction [pre...; (period...)].
 *
 * The period is minimal and the preperiod is the shortest possible; a purely
 * periodic expansion has an empty preperiod. Entries after the first are >= 1.
 */
struct CFExpansion {
  std::vector<Int> preperiod;
  std::vector<Int> period;

  /// k-th partial quotient a_k (a_0 first).
  Int term(std::size_t k) const;
  friend bool operator==(const CFExpansion&, const CFExpansion&) = default;
};

/// Complete quotient (P + sqrt(d)) / Q with Q | d - P^2. The radicand d is a
/// nonsquare, not necessarily squarefree.
struct CFState {
  Int P, Q, d;
  friend bool operator==(const CFState&, const CFState&) = default;
};

CFState initial_state(const QuadSurd& x);

CFExpansion cf_expand(const QuadSurd& x);
std::size_t period_length(const CFExpansion& e);

/// Exact value of an expansion (always an irrational surd).
QuadSurd cf_value(const CFExpansion& e);

/// Minimizes period and preperiod of an arbitrary periodic expansion.
CFExpansion canonicalize(CFExpansion e);

struct Convergent {
  Int p, q;
};
std::vector<Convergent> convergents(const CFExpansion& e, std::size_t count);

/// paper: (a11 + a12 x) / (a21 + a22 x); standard: (a11 x + a12) / (a21 x + a22).
enum class Convention { paper, standard };
std::string to_string(Convention c);

/// Fractional-linear image of x under a unimodular g; throws InputError for
/// |det g| != 1.
QuadSurd moebius_apply(const Mat2Z& g, const QuadSurd& x, Convention conv = Convention::paper);

/// GL: the expansions share a tail. SL: they share a tail at offsets of equal
/// parity.
bool serret_equivalent(const QuadSurd& x, const QuadSurd& y, Group group);

/// "[a0; a1, a2, (p1,...,pr)]", "[(p1,...)]" when purely periodic.
std::string to_string(const CFExpansion& e);
/// Accepts the printed form with arbitrary spacing; the result is canonicalized.
CFExpansion parse_cf(std::string_view text);

}  // namespace ncg
