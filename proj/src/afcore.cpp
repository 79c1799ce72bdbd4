#include "ncg/afcore.hpp"

#include <cctype>
#include <sstream>

namespace ncg {

namespace {

const Int& entry_bound() {
  static const Int bound("1000000000000");
  return bound;
}

IntMatrix root_inclusion() { return IntMatrix(2, 1, {1, 1}); }

IntMatrix effros_shen_block(const Int& a) { return IntMatrix(2, 2, {a, 1, 1, 0}); }

}  // namespace

BratteliDiagram::BratteliDiagram(std::vector<std::size_t> levels, std::vector<IntMatrix> incidences,
                                 DiagramGenerator generator)
    : levels_(std::move(levels)), incidences_(std::move(incidences)), generator_(std::move(generator)) {
  if (levels_.empty()) throw InputError("diagram needs at least one level");
  if (incidences_.size() + 1 != levels_.size()) throw InputError("diagram needs one incidence per level step");
  for (std::size_t k = 0; k < incidences_.size(); ++k) {
    const auto& inc = incidences_[k];
    if (inc.rows() != levels_[k + 1] || inc.cols() != levels_[k]) {
      throw InputError("incidence " + std::to_string(k) + " has the wrong shape");
    }
    if (!inc.is_nonnegative()) throw InputError("incidence " + std::to_string(k) + " has a negative multiplicity");
  }
}

IntMatrix BratteliDiagram::block_product(std::size_t from, std::size_t to) const {
  if (from > to || to > incidences_.size()) throw InputError("block range outside the diagram");
  IntMatrix p = IntMatrix::identity(levels_[from]);
  for (std::size_t k = from; k < to; ++k) p = incidences_[k] * p;
  return p;
}

BratteliDiagram BratteliDiagram::extended(std::size_t depth) const {
  if (const auto* s = std::get_if<StationaryGenerator>(&generator_)) return stationary_diagram(s->matrix, depth);
  if (const auto* e = std::get_if<EffrosShenGenerator>(&generator_)) return effros_shen_diagram(e->expansion, depth);
  if (depth <= incidences_.size()) {
    std::vector<std::size_t> lv(levels_.begin(), levels_.begin() + static_cast<std::ptrdiff_t>(depth + 1));
    std::vector<IntMatrix> inc(incidences_.begin(), incidences_.begin() + static_cast<std::ptrdiff_t>(depth));
    return BratteliDiagram(std::move(lv), std::move(inc));
  }
  throw InputError("explicit diagram cannot be extended past its depth");
}

BratteliDiagram stationary_diagram(const Mat2Z& m, std::size_t depth) {
  if (depth == 0) throw InputError("diagram depth must be positive");
  if (!is_anosov(m) || m.trace() <= 2) throw InputError("stationary diagram needs an Anosov matrix with trace > 2");
  if (!is_nonnegative(m)) throw InputError("stationary diagram needs nonnegative multiplicities");
  std::vector<std::size_t> levels(depth + 1, 2);
  levels[0] = 1;
  std::vector<IntMatrix> inc{root_inclusion()};
  IntMatrix block(m);
  for (std::size_t k = 1; k < depth; ++k) inc.push_back(block);
  return BratteliDiagram(std::move(levels), std::move(inc), StationaryGenerator{m});
}

BratteliDiagram effros_shen_diagram(const CFExpansion& e, std::size_t depth) {
  if (depth == 0) throw InputError("diagram depth must be positive");
  if (e.period.empty()) throw InputError("expansion without a period");
  if (e.term(0) < 0) {
    throw InputError("leading partial quotient " + e.term(0).get_str() +
                     " is negative; shift the slope by an integer first");
  }
  std::vector<std::size_t> levels(depth + 1, 2);
  levels[0] = 1;
  std::vector<IntMatrix> inc{root_inclusion()};
  for (std::size_t k = 1; k < depth; ++k) inc.push_back(effros_shen_block(e.term(k - 1)));
  return BratteliDiagram(std::move(levels), std::move(inc), EffrosShenGenerator{e});
}

BratteliDiagram telescope(const BratteliDiagram& d, const std::vector<std::size_t>& grouping) {
  std::size_t total = 0;
  for (auto g : grouping) {
    if (g == 0) throw InputError("telescoping groups must be positive");
    total += g;
  }
  if (total > d.depth()) throw InputError("telescoping grouping exceeds the diagram depth");
  std::vector<std::size_t> levels{d.levels()[0]};
  std::vector<IntMatrix> inc;
  std::size_t at = 0;
  for (auto g : grouping) {
    inc.push_back(d.block_product(at, at + g));
    at += g;
    levels.push_back(d.levels()[at]);
  }
  return BratteliDiagram(std::move(levels), std::move(inc));
}

// ------------------------------------------------------------ common blocks

namespace {

// Generated diagrams become stationary after `offset` incidences, repeating
// `matrix` every `unit` incidences.
struct EventualForm {
  std::size_t offset;
  std::size_t unit;
  Mat2Z matrix;
};

std::optional<EventualForm> eventual_form(const BratteliDiagram& d) {
  if (const auto* s = std::get_if<StationaryGenerator>(&d.generator())) return EventualForm{1, 1, s->matrix};
  if (const auto* e = std::get_if<EffrosShenGenerator>(&d.generator())) {
    Mat2Z m = Mat2Z::identity();
    for (const auto& a : e->expansion.period) m = Mat2Z{a, 1, 1, 0} * m;
    return EventualForm{1 + e->expansion.preperiod.size(), e->expansion.period.size(), m};
  }
  return std::nullopt;
}

bool within_bound(const Mat2Z& m) {
  const Int& b = entry_bound();
  return abs(m.a11) <= b && abs(m.a12) <= b && abs(m.a21) <= b && abs(m.a22) <= b;
}

bool within_bound(const IntMatrix& m) { return m.max_abs_entry() <= entry_bound(); }

struct Intertwiner {
  Mat2Z down, up;
};

// Nonnegative down, up with up*down == p1 and down*up == p2.
std::optional<Intertwiner> find_intertwiner(const Mat2Z& p1, const Mat2Z& p2) {
  constexpr long kSearchBox = 64;
  if (p2.a12 == 0) return std::nullopt;
  for (long f11 = 0; f11 <= kSearchBox; ++f11) {
    for (long f12 = 0; f12 <= kSearchBox; ++f12) {
      // First row of down*p1 == p2*down fixes the second row of down.
      Int n21 = f11 * p1.a11 + f12 * p1.a21 - p2.a11 * f11;
      Int n22 = f11 * p1.a12 + f12 * p1.a22 - p2.a11 * f12;
      if (!mpz_divisible_p(n21.get_mpz_t(), p2.a12.get_mpz_t()) ||
          !mpz_divisible_p(n22.get_mpz_t(), p2.a12.get_mpz_t())) {
        continue;
      }
      Mat2Z down{f11, f12, n21 / p2.a12, n22 / p2.a12};
      if (!is_nonnegative(down)) continue;
      Int det = down.det();
      if (det == 0 || down * p1 != p2 * down) continue;
      Mat2Z adj{down.a22, -down.a12, -down.a21, down.a11};
      Mat2Z num = p1 * adj;
      bool integral = true;
      for (const Int* v : {&num.a11, &num.a12, &num.a21, &num.a22}) {
        integral = integral && mpz_divisible_p(v->get_mpz_t(), det.get_mpz_t());
      }
      if (!integral) continue;
      Mat2Z up{num.a11 / det, num.a12 / det, num.a21 / det, num.a22 / det};
      if (!is_nonnegative(up)) continue;
      if (up * down != p1 || down * up != p2) continue;
      return Intertwiner{down, up};
    }
  }
  return std::nullopt;
}

std::optional<BlockWitness> periodic_search(const EventualForm& e1, const EventualForm& e2, std::size_t length) {
  std::vector<Mat2Z> pow1{Mat2Z::identity()}, pow2{Mat2Z::identity()};
  for (unsigned k = 1; k <= kMaxCommonBlockLag; ++k) {
    pow1.push_back(pow1.back() * e1.matrix);
    pow2.push_back(pow2.back() * e2.matrix);
  }
  for (unsigned sum = 2; sum <= 2 * kMaxCommonBlockLag; ++sum) {
    for (unsigned l1 = 1; l1 < sum; ++l1) {
      unsigned l2 = sum - l1;
      if (l1 > kMaxCommonBlockLag || l2 > kMaxCommonBlockLag) continue;
      const Mat2Z& p1 = pow1[l1];
      const Mat2Z& p2 = pow2[l2];
      if (!within_bound(p1) || !within_bound(p2)) continue;
      if (p1.trace() != p2.trace() || p1.det() != p2.det()) continue;
      auto tw = find_intertwiner(p1, p2);
      if (!tw) continue;
      BlockWitness w;
      w.start1 = e1.offset;
      w.start2 = e2.offset;
      w.length = length;
      w.lag1 = l1 * e1.unit;
      w.lag2 = l2 * e2.unit;
      w.down.assign(length + 1, IntMatrix(tw->down));
      w.up.assign(length, IntMatrix(tw->up));
      return w;
    }
  }
  return std::nullopt;
}

// Identical telescoped blocks in both diagrams, joined through identities.
std::optional<BlockWitness> literal_search(const BratteliDiagram& d1, const BratteliDiagram& d2, std::size_t length) {
  for (std::size_t s1 = 0; s1 < d1.depth(); ++s1) {
    for (std::size_t s2 = 0; s2 < d2.depth(); ++s2) {
      if (d1.levels()[s1] != d2.levels()[s2]) continue;
      for (std::size_t l1 = 1; l1 <= kMaxCommonBlockLag && s1 + length * l1 <= d1.depth(); ++l1) {
        for (std::size_t l2 = 1; l2 <= kMaxCommonBlockLag && s2 + length * l2 <= d2.depth(); ++l2) {
          std::vector<IntMatrix> blocks;
          bool ok = true;
          for (std::size_t k = 0; k < length && ok; ++k) {
            IntMatrix b1 = d1.block_product(s1 + k * l1, s1 + (k + 1) * l1);
            ok = within_bound(b1) && b1 == d2.block_product(s2 + k * l2, s2 + (k + 1) * l2);
            if (ok) blocks.push_back(std::move(b1));
          }
          if (!ok) continue;
          BlockWitness w{s1, s2, length, l1, l2, {}, {}};
          for (std::size_t k = 0; k < length; ++k) w.down.push_back(IntMatrix::identity(d1.levels()[s1 + k * l1]));
          w.down.push_back(IntMatrix::identity(d1.levels()[s1 + length * l1]));
          w.up = std::move(blocks);
          return w;
        }
      }
    }
  }
  return std::nullopt;
}

BlockWitness swap_sides(const BlockWitness& w) {
  // A zig-zag starting on the second diagram, read from its first up-step.
  BlockWitness s;
  s.start1 = w.start2;
  s.start2 = w.start1 + w.lag1;
  s.length = w.length;
  s.lag1 = w.lag2;
  s.lag2 = w.lag1;
  for (std::size_t k = 0; k < w.length; ++k) s.down.push_back(w.up[k]);
  s.down.push_back(w.up.back());
  for (std::size_t k = 1; k <= w.length; ++k) s.up.push_back(w.down[k]);
  return s;
}

}  // namespace

std::optional<BlockWitness> common_block_search(const BratteliDiagram& d1, const BratteliDiagram& d2,
                                                std::size_t max_depth) {
  if (max_depth == 0) throw InputError("common block length must be positive");
  auto e1 = eventual_form(d1);
  auto e2 = eventual_form(d2);
  if (e1 && e2) {
    if (auto w = periodic_search(*e1, *e2, max_depth)) return w;
    if (auto w = periodic_search(*e2, *e1, max_depth)) return swap_sides(*w);
    return std::nullopt;
  }
  return literal_search(d1, d2, max_depth);
}

bool verify_witness(const BratteliDiagram& d1, const BratteliDiagram& d2, const BlockWitness& w) {
  if (w.length == 0 || w.lag1 == 0 || w.lag2 == 0) return false;
  if (w.down.size() != w.length + 1 || w.up.size() != w.length) return false;
  std::size_t need1 = w.start1 + w.length * w.lag1;
  std::size_t need2 = w.start2 + w.length * w.lag2;
  auto grow = [](const BratteliDiagram& d, std::size_t need) {
    return d.depth() >= need ? d : (d.is_generated() ? d.extended(need) : d);
  };
  BratteliDiagram a = grow(d1, need1);
  BratteliDiagram b = grow(d2, need2);
  if (a.depth() < need1 || b.depth() < need2) return false;
  for (std::size_t k = 0; k < w.length; ++k) {
    std::size_t i = w.start1 + k * w.lag1;
    std::size_t j = w.start2 + k * w.lag2;
    const IntMatrix& dn = w.down[k];
    const IntMatrix& up = w.up[k];
    const IntMatrix& dn_next = w.down[k + 1];
    if (!dn.is_nonnegative() || !up.is_nonnegative() || !dn_next.is_nonnegative()) return false;
    if (dn.cols() != a.levels()[i] || dn.rows() != b.levels()[j]) return false;
    if (up.cols() != dn.rows() || dn_next.cols() != up.rows()) return false;
    if (up * dn != a.block_product(i, i + w.lag1)) return false;
    if (dn_next * up != b.block_product(j, j + w.lag2)) return false;
  }
  return true;
}

// ------------------------------------------------------------ text

std::string serialize(const BratteliDiagram& d) {
  std::ostringstream os;
  for (std::size_t k = 0; k < d.levels().size(); ++k) {
    os << d.levels()[k] << " |";
    if (k > 0) {
      for (const auto& v : d.incidences()[k - 1].data()) os << ' ' << v.get_str();
    }
    os << '\n';
  }
  return os.str();
}

BratteliDiagram parse_diagram(std::string_view text) {
  std::vector<std::size_t> levels;
  std::vector<IntMatrix> inc;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto bar = line.find('|');
    auto fail = [&](const std::string& why) {
      throw InputError("diagram line " + std::to_string(lineno) + ": " + why);
    };
    if (bar == std::string::npos) fail("missing '|'");
    std::istringstream head(line.substr(0, bar));
    long n = 0;
    if (!(head >> n) || n <= 0) fail("vertex count must be a positive integer");
    std::string rest;
    if (head >> rest) fail("unexpected text before '|'");
    std::istringstream body(line.substr(bar + 1));
    std::vector<Int> entries;
    std::string tok;
    while (body >> tok) {
      bool ok = !tok.empty();
      for (std::size_t i = 0; i < tok.size() && ok; ++i)
        ok = std::isdigit(static_cast<unsigned char>(tok[i])) || (i == 0 && tok[i] == '-' && tok.size() > 1);
      if (!ok) fail("bad multiplicity '" + tok + "'");
      entries.emplace_back(tok);
    }
    if (levels.empty()) {
      if (!entries.empty()) fail("the first level has no incoming edges");
    } else {
      std::size_t rows = static_cast<std::size_t>(n), cols = levels.back();
      if (entries.size() != rows * cols) fail("expected " + std::to_string(rows * cols) + " multiplicities");
      inc.emplace_back(rows, cols, std::move(entries));
    }
    levels.push_back(static_cast<std::size_t>(n));
  }
  return BratteliDiagram(std::move(levels), std::move(inc));
}

}  // namespace ncg
