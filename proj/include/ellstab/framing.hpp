#pragma once

// Framing-torus data for quiver varieties: the hyperplanes w_i - w_j = n a
// point w lies on, the induced block partition of the framing coordinates,
// the order of the cyclic subgroup generated by w, and the enumeration of
// product components of the fixed locus.

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "ellstab/charalg.hpp"
#include "ellstab/rational.hpp"

namespace ellstab {

struct FramingPoint {
  std::vector<Rational> w;
};

struct Hyperplane {
  /// 1-based, i < j.
  int i = 0;
  int j = 0;
  /// w_i - w_j.
  std::int64_t n = 0;

  bool operator==(const Hyperplane&) const = default;
};

/// Blocks are sorted, 1-based, and ordered by their smallest element.
struct BlockPartition {
  std::vector<std::vector<int>> blocks;

  /// Block number of framing coordinate i (1-based).
  std::size_t blockOf(int i) const;
  std::vector<int> sizes() const;
  bool operator==(const BlockPartition&) const = default;
};

struct QuiverFrame {
  /// r_v per vertex.
  std::vector<int> framing;
  /// n_v per vertex.
  std::vector<int> dimension;

  std::size_t vertexCount() const { return framing.size(); }
  int framingRank() const;
};

std::vector<Hyperplane> activeHyperplanes(const FramingPoint& p);
BlockPartition indexBlocks(const FramingPoint& p);
/// Least b >= 1 with b w_i integral for all i.
std::int64_t cyclicOrder(const FramingPoint& p);

struct FixedComponents {
  /// r_k per vertex, one row per block: the framing split.
  std::vector<std::vector<int>> framingSplit;
  /// Each entry is one dimension vector per block.
  std::vector<std::vector<std::vector<int>>> components;
};

/// Framing coordinates are numbered vertex by vertex. Components are all
/// per-vertex weak compositions of n_v into one part per block, ascending.
FixedComponents enumerateFixedComponents(const QuiverFrame& frame, const BlockPartition& blocks);

/// Number of weak compositions of n into k parts.
std::int64_t weakCompositionCount(int n, int k);

/// a_i / a_j is a normal-bundle character: i and j are in different blocks.
bool normalCharacterPredicate(int i, int j, const BlockPartition& blocks);

struct PolarizationSplit {
  Character invariant;
  Character moving;
};

PolarizationSplit invariantPolarizationSplit(const Character& p, const FramingPoint& point);

nlohmann::json framingReport(const FramingPoint& p, const QuiverFrame* frame);
FramingPoint framingPointFromString(const std::string& text);

}  // namespace ellstab
