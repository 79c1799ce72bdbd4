#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ncg/contfrac.hpp"
#include "ncg/exactnum.hpp"
#include "ncg/intmat.hpp"

namespace ncg {

/// The order of discriminant conductor^2 * field_disc in Q(sqrt(field_disc)).
struct QuadOrder {
  Int field_disc;
  Int conductor;
  Int discriminant() const { return conductor * conductor * field_disc; }
  friend bool operator==(const QuadOrder&, const QuadOrder&) = default;
};

/// Writes a nonsquare discriminant as conductor^2 * fundamental discriminant.
QuadOrder order_of_discriminant(const Int& disc);

/**
 * Equivalence class of the module Z + Z*theta.
 *
 * `cycle` is the lexicographically least rotation of the period of theta's
 * continued fraction and decides GL(2,Z)-equivalence. `sl_cycle` is the least
 * rotation reachable from complete quotients of even index, which refines the
 * class to SL(2,Z)-equivalence; it equals `cycle` whenever the period is odd.
 */
struct ModuleClass {
  std::vector<Int> cycle;
  std::vector<Int> sl_cycle;
  friend bool operator==(const ModuleClass&, const ModuleClass&) = default;
};

/// (Lambda, [I], K), with K recorded as its fundamental discriminant.
struct HandelmanTriple {
  QuadOrder order;
  ModuleClass cls;
  Int field_disc;

  /// Component-wise equality in the GL flavor (the default comparison).
  bool same_class(const HandelmanTriple& o) const {
    return order == o.order && cls.cycle == o.cls.cycle && field_disc == o.field_disc;
  }
  /// Additionally requires equal SL refinements.
  bool same_sl_class(const HandelmanTriple& o) const { return same_class(o) && cls.sl_cycle == o.cls.sl_cycle; }
  friend bool operator==(const HandelmanTriple&, const HandelmanTriple&) = default;
};

/// The slope theta of the Perron eigenvector; the module m = Z v1 + Z v2 is
/// equivalent to Z + Z theta after scaling by 1/v1.
QuadSurd module_from_matrix(const Mat2Z& m);

QuadOrder coefficient_ring(const QuadSurd& theta);
ModuleClass ideal_class_representative(const QuadSurd& theta);
HandelmanTriple handelman_triple(const Mat2Z& m);

bool stable_isomorphic_stationary(const Mat2Z& m, const Mat2Z& n);

struct EffrosShenVerdict {
  bool gl = false;
  bool sl = false;
};
/// gl is the verdict; sl is reported alongside.
EffrosShenVerdict stable_isomorphic_effros_shen(const QuadSurd& x, const QuadSurd& y);

/// JSON number when the value fits in a signed 64-bit integer, else a decimal string.
nlohmann::json json_int(const Int& v);
nlohmann::json json_int_list(const std::vector<Int>& v);

/// {field_disc, conductor, cycle, sl_refinement}
nlohmann::json to_json(const HandelmanTriple& t);

}  // namespace ncg
