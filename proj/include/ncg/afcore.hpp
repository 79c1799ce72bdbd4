#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ncg/contfrac.hpp"
#include "ncg/intmat.hpp"

namespace ncg {

struct StationaryGenerator {
  Mat2Z matrix;
};
struct EffrosShenGenerator {
  CFExpansion expansion;
};
struct ExplicitGenerator {};

using DiagramGenerator = std::variant<ExplicitGenerator, StationaryGenerator, EffrosShenGenerator>;

/**
 * Leveled multigraph. incidences[k] has shape levels[k+1] x levels[k]; entry
 * (i, j) is the number of edges from vertex j of level k to vertex i of level
 * k+1. Generated diagrams can be regrown to any depth.
 */
class BratteliDiagram {
 public:
  BratteliDiagram(std::vector<std::size_t> levels, std::vector<IntMatrix> incidences,
                  DiagramGenerator generator = ExplicitGenerator{});

  const std::vector<std::size_t>& levels() const { return levels_; }
  const std::vector<IntMatrix>& incidences() const { return incidences_; }
  const DiagramGenerator& generator() const { return generator_; }
  std::size_t depth() const { return incidences_.size(); }
  bool is_generated() const { return !std::holds_alternative<ExplicitGenerator>(generator_); }

  /// incidences[to-1] * ... * incidences[from]: level `from` to level `to`.
  IntMatrix block_product(std::size_t from, std::size_t to) const;

  /// Same generator regrown to `depth` incidences; explicit diagrams throw
  /// if asked to grow.
  BratteliDiagram extended(std::size_t depth) const;

  friend bool operator==(const BratteliDiagram& a, const BratteliDiagram& b) {
    return a.levels_ == b.levels_ && a.incidences_ == b.incidences_;
  }

 private:
  std::vector<std::size_t> levels_;
  std::vector<IntMatrix> incidences_;
  DiagramGenerator generator_;
};

/// Root vertex with two unit edges, then `depth - 1` copies of m.
BratteliDiagram stationary_diagram(const Mat2Z& m, std::size_t depth);

/// Root vertex with two unit edges, then blocks [[a_k, 1], [1, 0]] for
/// k = 0, 1, ... read off the expansion. Throws for depth 0 or a_0 < 0.
BratteliDiagram effros_shen_diagram(const CFExpansion& e, std::size_t depth);

/// Multiplies consecutive groups of incidences; a tail past sum(grouping)
/// is dropped.
BratteliDiagram telescope(const BratteliDiagram& d, const std::vector<std::size_t>& grouping);

/**
 * A finite intertwining of telescopings of two diagrams.
 *
 * Levels i_k = start1 + k*lag1 of the first diagram and j_k = start2 + k*lag2
 * of the second are joined by down[k] (i_k -> j_k) and up[k] (j_k -> i_{k+1})
 * with up[k]*down[k] and down[k+1]*up[k] equal to the block products of the
 * first and second diagram. The zig-zag is a common block of both diagrams.
 */
struct BlockWitness {
  std::size_t start1 = 0, start2 = 0, length = 0;
  std::size_t lag1 = 0, lag2 = 0;
  std::vector<IntMatrix> down;  // length + 1 entries
  std::vector<IntMatrix> up;    // length entries
};

/// Largest telescoping lag tried for generated diagrams, counted in
/// eventual periods.
inline constexpr unsigned kMaxCommonBlockLag = 12;

/// Semi-decision: a witness of block length max_depth, or absent when none is
/// found within the lag and entry bounds (products over 10^12 are abandoned).
std::optional<BlockWitness> common_block_search(const BratteliDiagram& d1, const BratteliDiagram& d2,
                                                std::size_t max_depth);

/// Exact check of a witness against both diagrams.
bool verify_witness(const BratteliDiagram& d1, const BratteliDiagram& d2, const BlockWitness& w);

/// One level per line: "n_k | e1 e2 ..." with the incoming incidence row-major.
std::string serialize(const BratteliDiagram& d);
BratteliDiagram parse_diagram(std::string_view text);

}  // namespace ncg
