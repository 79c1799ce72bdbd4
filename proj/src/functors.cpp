#include "ncg/functors.hpp"

#include <cctype>
#include <sstream>

namespace ncg {

BratteliDiagram anosov_functor(const Mat2Z& m, std::size_t depth) {
  if (!is_anosov(m)) throw InputError("not an Anosov matrix: " + to_string(m));
  if (m.trace() <= 2) throw InputError("Anosov functor needs trace > 2, got " + to_string(m));
  if (!is_nonnegative(m)) throw InputError("Anosov functor needs nonnegative entries, got " + to_string(m));
  return stationary_diagram(m, depth);
}

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::inapplicable: return "inapplicable";
  }
  return "?";
}

AnosovFunctorialityReport functoriality_check_anosov(const Mat2Z& m, const Mat2Z& t, std::size_t witness_depth) {
  AnosovFunctorialityReport rep;
  if (!is_anosov(m) || m.trace() <= 2 || !is_nonnegative(m)) {
    rep.reason = "m must be Anosov with trace > 2 and nonnegative entries";
    return rep;
  }
  if (!is_unimodular(t)) {
    rep.reason = "t must have determinant +-1";
    return rep;
  }
  Mat2Z n = t * m * inverse(t);
  rep.conjugate = n;
  if (!is_nonnegative(n)) {
    rep.reason = "t*m*t^-1 = " + to_string(n) + " leaves the nonnegative cone";
    return rep;
  }
  rep.source = handelman_triple(m);
  rep.target = handelman_triple(n);
  bool same = rep.source->same_class(*rep.target);
  rep.status = same ? CheckStatus::pass : CheckStatus::fail;
  if (!same) rep.reason = "Handelman triples differ";
  if (witness_depth > 0) {
    rep.witness = common_block_search(stationary_diagram(m, 2), stationary_diagram(n, 2), witness_depth);
  }
  return rep;
}

bool mapping_torus_homotopy_equiv(const Mat2Z& m, const Mat2Z& n) { return conjugacy_test(m, n, Group::GL); }

bool torus_bundle_equiv(const Mat2Z& a, const Mat2Z& b) {
  if (!is_unimodular(a) || !is_unimodular(b)) throw InputError("torus bundle monodromy must have determinant +-1");
  if (a.trace() != b.trace() || a.det() != b.det()) return false;
  if (is_anosov(a)) return conjugacy_test(a, b, Group::GL);
  return brute_force_conjugator(a, b, kTorusBundleSearchBound).has_value();
}

FoliationData foliation_from_form(const FormPeriods& p) {
  if (is_zero(p.p1)) throw InputError("first period of the form must be nonzero");
  Number p1 = p.p1, p2 = p.p2;
  if (sign(p1) < 0) {
    p1 = negate(p1);
    p2 = negate(p2);
  }
  return {p2 / p1, p1};
}

BratteliDiagram torus_functor(const FormPeriods& p, std::size_t depth) {
  FoliationData f = foliation_from_form(p);
  if (is_rational(f.slope)) {
    throw InputError("rational slope " + to_string(f.slope) +
                     ": the projection pi degenerates (no periodic Effros-Shen diagram)");
  }
  return effros_shen_diagram(cf_expand(as_surd(f.slope)), depth);
}

TorusFunctorialityReport functoriality_check_torus(const QuadSurd& x, const Mat2Z& g, Convention conv) {
  TorusFunctorialityReport rep;
  if (!is_unimodular(g)) {
    rep.reason = "g must have determinant +-1";
    return rep;
  }
  rep.image = moebius_apply(g, x, conv);
  rep.verdict = stable_isomorphic_effros_shen(x, *rep.image);
  rep.status = rep.verdict.gl ? CheckStatus::pass : CheckStatus::fail;
  if (!rep.verdict.gl) rep.reason = "continued fraction tails differ";
  return rep;
}

// ---------------------------------------------------------------- exercises

namespace {

// Prime factorization by trial division; a cofactor left above 10^12 must be
// a probable prime.
std::map<Int, unsigned long> factorize(Int n) {
  std::map<Int, unsigned long> out;
  for (Int p = 2; p * p <= n && p <= 1000000; p += (p == 2 ? 1 : 2)) {
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
      ++out[p];
      n /= p;
    }
  }
  if (n > 1) {
    if (n > Int("1000000000000") && mpz_probab_prime_p(n.get_mpz_t(), 40) == 0) {
      throw InputError("cannot factor " + n.get_str());
    }
    ++out[n];
  }
  return out;
}

}  // namespace

std::string to_string(const SupernaturalNumber& s) {
  if (s.exponents.empty()) return "1";
  std::string out;
  for (const auto& [p, e] : s.exponents) {
    if (!out.empty()) out += " * ";
    out += p.get_str() + "^" + (e ? std::to_string(*e) : std::string("∞"));
  }
  return out;
}

SupernaturalNumber uhf_supernatural(const std::vector<Int>& factors, bool repeat_forever) {
  if (factors.empty()) throw InputError("UHF multiplicities must be nonempty");
  SupernaturalNumber s;
  for (const auto& f : factors) {
    if (f < 2) throw InputError("UHF multiplicity must be >= 2, got " + f.get_str());
    for (const auto& [p, e] : factorize(f)) {
      if (repeat_forever) {
        s.exponents[p] = std::nullopt;
      } else {
        auto& slot = s.exponents[p];
        slot = slot.value_or(0) + e;
      }
    }
  }
  return s;
}

std::string to_string(const AbelianGroupInvariant& g) {
  std::string out;
  for (const auto& t : g.torsion) out += (out.empty() ? "" : " + ") + std::string("Z/") + t.get_str();
  if (g.free_rank > 0) {
    std::string free = g.free_rank == 1 ? "Z" : "Z^" + std::to_string(g.free_rank);
    out += (out.empty() ? "" : " + ") + free;
  }
  return out.empty() ? "0" : out;
}

AbelianGroupInvariant ck_k0(const IntMatrix& a, bool transpose) {
  if (!a.is_square() || a.rows() == 0) throw InputError("Cuntz-Krieger matrix must be square and nonempty");
  if (!a.is_nonnegative()) throw InputError("Cuntz-Krieger matrix must be nonnegative");
  std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) {
    bool row = false, col = false;
    for (std::size_t j = 0; j < n; ++j) {
      row = row || a(i, j) != 0;
      col = col || a(j, i) != 0;
    }
    if (!row || !col) throw InputError("Cuntz-Krieger matrix has a zero row or column");
  }
  IntMatrix rel = IntMatrix::identity(n) - (transpose ? a.transpose() : a);
  AbelianGroupInvariant g;
  for (const auto& d : smith_normal_form(rel).diagonal()) {
    if (d == 0) {
      ++g.free_rank;
    } else if (d > 1) {
      g.torsion.push_back(d);
    }
  }
  return g;
}

// ---------------------------------------------------------------- CM harness

std::string to_string(MirrorRule r) { return r == MirrorRule::real_mirror ? "real_mirror" : "abs_disc"; }

MirrorRule parse_mirror_rule(std::string_view s) {
  if (s == "real_mirror") return MirrorRule::real_mirror;
  if (s == "abs_disc") return MirrorRule::abs_disc;
  throw InputError("unknown mirror rule '" + std::string(s) + "' (expected real_mirror or abs_disc)");
}

void validate(const CMCurveRecord& rec) {
  if (rec.cm_disc >= 0) throw InputError("cm_disc must be negative in record '" + rec.label + "'");
  Int m = rec.cm_disc % 4;
  if (m < 0) m += 4;
  if (m != 0 && m != 1) throw InputError("cm_disc must be 0 or 1 mod 4 in record '" + rec.label + "'");
  if (rec.rank < 0) throw InputError("rank must be nonnegative in record '" + rec.label + "'");
}

QuadSurd cm_theta(const CMCurveRecord& rec, MirrorRule rule) {
  validate(rec);
  if (rule == MirrorRule::abs_disc) {
    Int a = -rec.cm_disc;
    if (is_perfect_square(a)) throw InputError("sqrt(|cm_disc|) is rational for " + rec.cm_disc.get_str());
    return QuadSurd::normalize(0, 1, 1, a);
  }
  QuadOrder o = order_of_discriminant(rec.cm_disc);
  Int D = squarefree_split(o.field_disc).core;
  if (D == 1) throw InputError("mirror undefined by rule: cm_disc " + rec.cm_disc.get_str() + " has D = 1");
  if (D % 4 == 1) return QuadSurd::normalize(o.conductor, o.conductor, 2, D);
  return QuadSurd::normalize(0, o.conductor, 1, D);
}

std::optional<double> ConjectureReport::agreement() const {
  if (evaluated == 0) return std::nullopt;
  return static_cast<double>(matches) / static_cast<double>(evaluated);
}

ConjectureReport conjecture_check(const std::vector<CMCurveRecord>& records, MirrorRule rule) {
  ConjectureReport rep;
  rep.rule = rule;
  for (const auto& rec : records) {
    ConjectureRow row;
    row.record = rec;
    try {
      row.theta = cm_theta(rec, rule);
      row.expansion = cf_expand(*row.theta);
      row.period = period_length(*row.expansion);
      row.predicted_rank = static_cast<long>(*row.period) - 1;
      row.match = Int(*row.predicted_rank) == rec.rank;
      ++rep.evaluated;
      if (*row.match) ++rep.matches;
    } catch (const InputError& e) {
      row.error = e.what();
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

std::vector<CMCurveRecord> parse_cm_csv(std::string_view text) {
  std::vector<CMCurveRecord> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  auto trim = [](std::string s) {
    auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return std::string();
    return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
  };
  auto parse_int = [&](const std::string& s, const char* field) {
    bool ok = !s.empty();
    for (std::size_t i = 0; i < s.size() && ok; ++i)
      ok = std::isdigit(static_cast<unsigned char>(s[i])) || (i == 0 && (s[i] == '-' || s[i] == '+') && s.size() > 1);
    if (!ok) throw InputError("line " + std::to_string(lineno) + ": " + field + " must be an integer, got '" + s + "'");
    return Int(s[0] == '+' ? s.substr(1) : s);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    if (!header) {
      if (line != "label,cm_disc,rank") throw InputError("CSV header must be 'label,cm_disc,rank'");
      header = true;
      continue;
    }
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(trim(field));
    if (line.back() == ',') fields.emplace_back();
    if (fields.size() != 3) throw InputError("line " + std::to_string(lineno) + ": expected 3 fields");
    CMCurveRecord rec{fields[0], parse_int(fields[1], "cm_disc"), parse_int(fields[2], "rank")};
    try {
      validate(rec);
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(lineno) + ": " + e.what());
    }
    out.push_back(std::move(rec));
  }
  if (!header) throw InputError("CSV header must be 'label,cm_disc,rank'");
  return out;
}

nlohmann::json to_json(const ConjectureReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json j;
    j["label"] = row.record.label;
    j["cm_disc"] = json_int(row.record.cm_disc);
    j["observed_rank"] = json_int(row.record.rank);
    j["theta"] = row.theta ? nlohmann::json(to_string(*row.theta)) : nlohmann::json(nullptr);
    j["cf"] = row.expansion ? nlohmann::json(to_string(*row.expansion)) : nlohmann::json(nullptr);
    j["period"] = row.period ? nlohmann::json(*row.period) : nlohmann::json(nullptr);
    j["predicted_rank"] = row.predicted_rank ? nlohmann::json(*row.predicted_rank) : nlohmann::json(nullptr);
    j["match"] = row.match ? nlohmann::json(*row.match) : nlohmann::json(nullptr);
    j["error"] = row.error.empty() ? nlohmann::json(nullptr) : nlohmann::json(row.error);
    rows.push_back(std::move(j));
  }
  return rows;
}

std::string to_table(const ConjectureReport& r) {
  std::vector<std::vector<std::string>> cells = {{"label", "cm_disc", "theta", "r", "r-1", "R", "match"}};
  for (const auto& row : r.rows) {
    if (!row.error.empty()) {
      cells.push_back({row.record.label, row.record.cm_disc.get_str(), "-", "-", "-", row.record.rank.get_str(),
                       "error: " + row.error});
      continue;
    }
    cells.push_back({row.record.label, row.record.cm_disc.get_str(), to_string(*row.theta), std::to_string(*row.period),
                     std::to_string(*row.predicted_rank), row.record.rank.get_str(), *row.match ? "yes" : "no"});
  }
  std::vector<std::size_t> width(cells[0].size(), 0);
  for (const auto& c : cells)
    for (std::size_t i = 0; i + 1 < c.size(); ++i) width[i] = std::max(width[i], c[i].size());
  std::string out;
  for (const auto& c : cells) {
    std::string line;
    for (std::size_t i = 0; i < c.size(); ++i) {
      line += c[i];
      if (i + 1 < c.size()) line += std::string(width[i] - c[i].size() + 2, ' ');
    }
    out += line + "\n";
  }
  auto rate = r.agreement();
  std::ostringstream summary;
  summary << "rule " << to_string(r.rule) << ": " << r.matches << "/" << r.evaluated << " agree";
  if (rate) {
    summary.setf(std::ios::fixed);
    summary.precision(3);
    summary << " (" << *rate << ")";
  } else {
    summary << " (agreement NA)";
  }
  summary << ", " << (r.rows.size() - r.evaluated) << " not evaluated\n";
  return out + summary.str();
}

}  // namespace ncg
