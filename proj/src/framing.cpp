#include "ellstab/framing.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ellstab {

using nlohmann::json;

std::size_t BlockPartition::blockOf(int i) const {
  for (std::size_t b = 0; b < blocks.size(); ++b)
    if (std::find(blocks[b].begin(), blocks[b].end(), i) != blocks[b].end()) return b;
  throw std::out_of_range("framing coordinate " + std::to_string(i) + " is in no block");
}

std::vector<int> BlockPartition::sizes() const {
  std::vector<int> out;
  for (const auto& b : blocks) out.push_back(static_cast<int>(b.size()));
  return out;
}

int QuiverFrame::framingRank() const { return std::accumulate(framing.begin(), framing.end(), 0); }

std::vector<Hyperplane> activeHyperplanes(const FramingPoint& p) {
  std::vector<Hyperplane> out;
  const int r = static_cast<int>(p.w.size());
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j) {
      const Rational d = p.w[static_cast<std::size_t>(i)] - p.w[static_cast<std::size_t>(j)];
      if (isIntegral(d)) out.push_back({i + 1, j + 1, d.numerator()});
    }
  return out;
}

BlockPartition indexBlocks(const FramingPoint& p) {
  BlockPartition out;
  const int r = static_cast<int>(p.w.size());
  // Integrality of differences is an equivalence, so comparing with the
  // first member of each block suffices.
  for (int i = 1; i <= r; ++i) {
    bool placed = false;
    for (auto& block : out.blocks) {
      const Rational d = p.w[static_cast<std::size_t>(block.front() - 1)] - p.w[static_cast<std::size_t>(i - 1)];
      if (isIntegral(d)) {
        block.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) out.blocks.push_back({i});
  }
  return out;
}

std::int64_t cyclicOrder(const FramingPoint& p) {
  std::int64_t b = 1;
  // Denominators are unchanged by integer shifts, so this is w mod 1.
  for (const auto& wi : p.w) b = lcm(b, wi.denominator());
  return b;
}

std::int64_t weakCompositionCount(int n, int k) {
  if (k <= 0) return n == 0 ? 1 : 0;
  // C(n + k - 1, k - 1)
  std::int64_t c = 1;
  for (int i = 1; i < k; ++i) c = c * (n + i) / i;
  return c;
}

namespace {

void weakCompositions(int n, int k, std::vector<int>& current, std::vector<std::vector<int>>& out) {
  if (k == 1) {
    current.push_back(n);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int first = 0; first <= n; ++first) {
    current.push_back(first);
    weakCompositions(n - first, k - 1, current, out);
    current.pop_back();
  }
}

}  // namespace

FixedComponents enumerateFixedComponents(const QuiverFrame& frame, const BlockPartition& blocks) {
  if (frame.framing.size() != frame.dimension.size())
    throw std::invalid_argument("framing and dimension vectors differ in length");
  const std::size_t l = frame.vertexCount();
  const std::size_t m = blocks.blocks.size();
  int total = 0;
  for (const auto& b : blocks.blocks) total += static_cast<int>(b.size());
  if (total != frame.framingRank())
    throw std::invalid_argument("blocks do not partition the framing coordinates");

  FixedComponents out;
  // Framing coordinates 1..r_1 belong to vertex 1, the next r_2 to vertex 2, ...
  std::vector<int> vertexOf;
  for (std::size_t v = 0; v < l; ++v)
    for (int k = 0; k < frame.framing[v]; ++k) vertexOf.push_back(static_cast<int>(v));
  out.framingSplit.assign(m, std::vector<int>(l, 0));
  for (std::size_t b = 0; b < m; ++b)
    for (int i : blocks.blocks[b]) ++out.framingSplit[b][static_cast<std::size_t>(vertexOf[static_cast<std::size_t>(i - 1)])];

  if (m == 0) {
    if (std::any_of(frame.dimension.begin(), frame.dimension.end(), [](int n) { return n != 0; }))
      return out;
    out.components.push_back({});
    return out;
  }

  std::vector<std::vector<std::vector<int>>> perVertex(l);
  for (std::size_t v = 0; v < l; ++v) {
    if (frame.dimension[v] < 0) throw std::invalid_argument("dimension entries must be nonnegative");
    std::vector<int> current;
    weakCompositions(frame.dimension[v], static_cast<int>(m), current, perVertex[v]);
  }
  // Odometer over vertices; components are stored block-major, so sort after.
  std::vector<std::size_t> idx(l, 0);
  bool done = false;
  while (!done) {
    std::vector<std::vector<int>> comp(m, std::vector<int>(l, 0));
    for (std::size_t v = 0; v < l; ++v)
      for (std::size_t b = 0; b < m; ++b) comp[b][v] = perVertex[v][idx[v]][b];
    out.components.push_back(std::move(comp));
    done = true;
    for (std::size_t v = l; v-- > 0;) {
      if (++idx[v] < perVertex[v].size()) {
        done = false;
        break;
      }
      idx[v] = 0;
    }
  }
  std::sort(out.components.begin(), out.components.end());
  return out;
}

bool normalCharacterPredicate(int i, int j, const BlockPartition& blocks) {
  if (i == j) throw std::invalid_argument("normal characters need i != j");
  return blocks.blockOf(i) != blocks.blockOf(j);
}

PolarizationSplit invariantPolarizationSplit(const Character& p, const FramingPoint& point) {
  Character inv = invariantPart(p, point.w);
  return {inv, p - inv};
}

json framingReport(const FramingPoint& p, const QuiverFrame* frame) {
  json hyperplanes = json::array();
  for (const auto& h : activeHyperplanes(p)) hyperplanes.push_back({h.i, h.j, h.n});
  const BlockPartition blocks = indexBlocks(p);
  json w = json::array();
  for (const auto& x : p.w) w.push_back(toString(x));
  json out{{"w", w},
           {"hyperplanes", hyperplanes},
           {"blocks", blocks.blocks},
           {"b", cyclicOrder(p)}};
  if (frame) {
    const FixedComponents fc = enumerateFixedComponents(*frame, blocks);
    out["framing_split"] = fc.framingSplit;
    out["component_count"] = fc.components.size();
    out["components"] = fc.components;
  }
  return out;
}

FramingPoint framingPointFromString(const std::string& text) {
  FramingPoint p;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    p.w.push_back(parseRational(text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return p;
}

}  // namespace ellstab
