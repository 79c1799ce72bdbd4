#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ncg/afcore.hpp"
#include "ncg/contfrac.hpp"
#include "ncg/exactnum.hpp"
#include "ncg/intmat.hpp"
#include "ncg/invariants.hpp"

namespace ncg {

// ---------------------------------------------------------------- Anosov

/// mu: phi -> A_phi as a stationary diagram tagged with its matrix.
BratteliDiagram anosov_functor(const Mat2Z& m, std::size_t depth);

enum class CheckStatus { pass, fail, inapplicable };
std::string to_string(CheckStatus s);

struct AnosovFunctorialityReport {
  CheckStatus status = CheckStatus::inapplicable;
  std::string reason;
  std::optional<Mat2Z> conjugate;  // t * m * t^-1
  std::optional<HandelmanTriple> source, target;
  std::optional<BlockWitness> witness;
};

/// Conjugates m by t and compares Handelman triples; a common-block witness
/// is attached when `witness_depth` > 0 and one is found.
AnosovFunctorialityReport functoriality_check_anosov(const Mat2Z& m, const Mat2Z& t, std::size_t witness_depth = 0);

/// Homotopy type of the mapping torus, decided by GL(2,Z)-conjugacy. Equal
/// answers imply equal Handelman triples.
bool mapping_torus_homotopy_equiv(const Mat2Z& m, const Mat2Z& n);

/// Torus bundles over the circle with monodromies a, b (|det| = 1). Hyperbolic
/// pairs are decided exactly; parabolic and elliptic ones by a conjugator
/// search with entries bounded by kTorusBundleSearchBound.
inline constexpr unsigned kTorusBundleSearchBound = 10;
bool torus_bundle_equiv(const Mat2Z& a, const Mat2Z& b);

// ---------------------------------------------------------------- tori

/// Periods of a closed 1-form along the basis cycles gamma1, gamma2.
struct FormPeriods {
  Number p1, p2;
};

/// Measured foliation: slope theta and transverse measure mu > 0.
struct FoliationData {
  Number slope;
  Number measure;
};

/// slope = p2 / p1, measure = p1, after negating both periods when p1 < 0.
FoliationData foliation_from_form(const FormPeriods& p);

/// F = pi o h: the Effros-Shen diagram of the slope. The measure is forgotten.
BratteliDiagram torus_functor(const FormPeriods& p, std::size_t depth);

struct TorusFunctorialityReport {
  CheckStatus status = CheckStatus::inapplicable;
  std::string reason;
  std::optional<QuadSurd> image;
  EffrosShenVerdict verdict;
};

TorusFunctorialityReport functoriality_check_torus(const QuadSurd& x, const Mat2Z& g,
                                                   Convention conv = Convention::paper);

// ---------------------------------------------------------------- exercises

/// Formal product of primes; std::nullopt marks an infinite exponent.
struct SupernaturalNumber {
  std::map<Int, std::optional<unsigned long>> exponents;
  friend bool operator==(const SupernaturalNumber&, const SupernaturalNumber&) = default;
};
std::string to_string(const SupernaturalNumber& s);

/// Supernatural number of the UHF algebra with the given multiplicities; with
/// repeat_forever the block repeats at every level. Equal values classify
/// isomorphic UHF algebras.
SupernaturalNumber uhf_supernatural(const std::vector<Int>& factors, bool repeat_forever);

struct AbelianGroupInvariant {
  std::vector<Int> torsion;
  std::size_t free_rank = 0;
  friend bool operator==(const AbelianGroupInvariant&, const AbelianGroupInvariant&) = default;
};
std::string to_string(const AbelianGroupInvariant& g);

/// Z^n / (I - A^T) Z^n, or Z^n / (I - A) Z^n when transpose is false.
AbelianGroupInvariant ck_k0(const IntMatrix& a, bool transpose = true);

// ---------------------------------------------------------------- CM harness

struct CMCurveRecord {
  std::string label;
  Int cm_disc;
  Int rank;
};

/// How a real quadratic slope is attached to an imaginary CM discriminant.
/// real_mirror: theta = f * omega_D with cm_disc = f^2 d_K, Q(sqrt d_K) =
/// Q(sqrt -D), omega_D = (1 + sqrt D)/2 for D = 1 mod 4 and sqrt D otherwise.
/// abs_disc: theta = sqrt(|cm_disc|).
enum class MirrorRule { real_mirror, abs_disc };
std::string to_string(MirrorRule r);
MirrorRule parse_mirror_rule(std::string_view s);

void validate(const CMCurveRecord& rec);
QuadSurd cm_theta(const CMCurveRecord& rec, MirrorRule rule = MirrorRule::real_mirror);

struct ConjectureRow {
  CMCurveRecord record;
  std::optional<QuadSurd> theta;
  std::optional<CFExpansion> expansion;
  std::optional<std::size_t> period;
  std::optional<long> predicted_rank;  // r - 1
  std::optional<bool> match;
  std::string error;
};

struct ConjectureReport {
  MirrorRule rule = MirrorRule::real_mirror;
  std::vector<ConjectureRow> rows;
  std::size_t evaluated = 0;
  std::size_t matches = 0;
  /// matches / evaluated, absent when nothing was evaluated.
  std::optional<double> agreement() const;
};

/// Tabulates predicted r - 1 against the supplied ranks. Never asserts the
/// conjecture; per-record failures are reported inline.
ConjectureReport conjecture_check(const std::vector<CMCurveRecord>& records, MirrorRule rule = MirrorRule::real_mirror);

/// CSV with header "label,cm_disc,rank".
std::vector<CMCurveRecord> parse_cm_csv(std::string_view text);

nlohmann::json to_json(const ConjectureReport& r);
std::string to_table(const ConjectureReport& r);

}  // namespace ncg
