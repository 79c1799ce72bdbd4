#include "ncg/invariants.hpp"

#include <algorithm>

namespace ncg {

QuadOrder order_of_discriminant(const Int& disc) {
  if (is_perfect_square(disc)) throw InputError("discriminant " + disc.get_str() + " is a square");
  unsigned long mod4 = mpz_fdiv_ui(disc.get_mpz_t(), 4);
  if (mod4 != 0 && mod4 != 1) throw InputError(disc.get_str() + " is not a discriminant (must be 0 or 1 mod 4)");
  auto split = squarefree_split(disc);
  Int core = disc < 0 ? Int(-split.core) : split.core;
  if (mpz_fdiv_ui(core.get_mpz_t(), 4) == 1) return {core, split.square};
  // core = 2, 3 mod 4: the square part carries the factor 2 of 4*core.
  return {4 * core, split.square / 2};
}

QuadSurd module_from_matrix(const Mat2Z& m) { return eigen_slope(m); }

QuadOrder coefficient_ring(const QuadSurd& theta) {
  return order_of_discriminant(minimal_polynomial(theta).discriminant());
}

ModuleClass ideal_class_representative(const QuadSurd& theta) {
  CFExpansion e = cf_expand(theta);
  const auto& period = e.period;
  std::size_t r = period.size();
  ModuleClass cls;
  cls.cycle = canonical_cycle(period, Group::GL);
  // Complete quotients of even index sit at rotations s = (i - pre) mod r.
  bool all = r % 2 == 1;
  std::size_t parity = e.preperiod.size() % 2;
  for (std::size_t s = 0; s < r; ++s) {
    if (!all && s % 2 != parity) continue;
    std::vector<Int> rot(r);
    for (std::size_t i = 0; i < r; ++i) rot[i] = period[(i + s) % r];
    if (cls.sl_cycle.empty() || rot < cls.sl_cycle) cls.sl_cycle = std::move(rot);
  }
  return cls;
}

HandelmanTriple handelman_triple(const Mat2Z& m) {
  QuadSurd theta = module_from_matrix(m);
  HandelmanTriple t;
  t.order = coefficient_ring(theta);
  t.cls = ideal_class_representative(theta);
  t.field_disc = t.order.field_disc;
  return t;
}

bool stable_isomorphic_stationary(const Mat2Z& m, const Mat2Z& n) {
  return handelman_triple(m).same_class(handelman_triple(n));
}

EffrosShenVerdict stable_isomorphic_effros_shen(const QuadSurd& x, const QuadSurd& y) {
  return {serret_equivalent(x, y, Group::GL), serret_equivalent(x, y, Group::SL)};
}

nlohmann::json json_int(const Int& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

nlohmann::json json_int_list(const std::vector<Int>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& x : v) a.push_back(json_int(x));
  return a;
}

nlohmann::json to_json(const HandelmanTriple& t) {
  return {{"field_disc", json_int(t.field_disc)},
          {"conductor", json_int(t.order.conductor)},
          {"cycle", json_int_list(t.cls.cycle)},
          {"sl_refinement", json_int_list(t.cls.sl_cycle)}};
}

}  // namespace ncg
