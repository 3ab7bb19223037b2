#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "jumpcode/codes.hpp"
#include "jumpcode/state.hpp"

namespace jumpcode {

/// A block is a size-k subset of the points {1..n}, kept sorted ascending.
using Block = std::vector<int>;

namespace detail {

inline Block sorted_block(Block b) {
  std::sort(b.begin(), b.end());
  return b;
}

inline void check_block(const Block& b, int n, int k) {
  if (static_cast<int>(b.size()) != k)
    throw InvalidParameters("block has size " + std::to_string(b.size()) +
                            ", expected " + std::to_string(k));
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i] < 1 || b[i] > n)
      throw InvalidParameters("block point " + std::to_string(b[i]) +
                              " outside 1.." + std::to_string(n));
    if (i > 0 && b[i] == b[i - 1])
      throw InvalidParameters("block repeats point " + std::to_string(b[i]));
  }
}

inline BasisState block_to_basis(const Block& b, int n) {
  std::uint64_t bits = 0;
  for (int p : b) bits |= std::uint64_t{1} << (n - p);
  return BasisState(n, bits);
}

}  // namespace detail

/// A spontaneous-emission-error design: l classes of k-blocks on n points.
/// Each class induces one codeword (see seed_to_code). Blocks within a
/// class must be distinct; a block shared across classes is suspicious but
/// not forbidden, so validate() reports it as a warning and the induced
/// code decides.
struct SeedDesign {
  int n = 0;
  int k = 0;
  std::vector<std::vector<Block>> classes;

  int l() const { return static_cast<int>(classes.size()); }

  std::vector<std::string> validate() const {
    if (n < 1 || k < 1 || k > n)
      throw InvalidParameters("design needs 1 <= k <= n");
    if (classes.empty()) throw InvalidParameters("design needs l >= 1");
    for (const auto& cls : classes) {
      if (cls.empty()) throw InvalidParameters("empty class in design");
      std::set<Block> seen;
      for (const auto& b : cls) {
        detail::check_block(b, n, k);
        if (!seen.insert(detail::sorted_block(b)).second)
          throw InvalidParameters("class repeats a block");
      }
    }
    std::vector<std::string> warnings;
    std::map<Block, int> first_owner;
    for (std::size_t ci = 0; ci < classes.size(); ++ci)
      for (const auto& b : classes[ci]) {
        auto [it, fresh] = first_owner.emplace(detail::sorted_block(b),
                                               static_cast<int>(ci));
        if (!fresh && it->second != static_cast<int>(ci)) {
          std::string pts;
          for (int p : b) pts += std::to_string(p);
          warnings.push_back("block {" + pts + "} appears in classes " +
                             std::to_string(it->second + 1) + " and " +
                             std::to_string(ci + 1));
        }
      }
    return warnings;
  }
};

/// The finite affine plane of prime order q: q^2 points numbered 1..q^2
/// row-major over the coordinate grid, q^2+q lines of q points, and q+1
/// parallel classes (one per slope, plus the columns) each partitioning
/// the points.
struct AffinePlane {
  int q = 0;
  int n = 0;
  std::vector<Block> lines;
  std::vector<std::vector<Block>> parallel_classes;
};

inline AffinePlane affine_plane(int q) {
  if (q < 2) throw UnsupportedOrder("affine plane order must be >= 2");
  for (int d = 2; d * d <= q; ++d)
    if (q % d == 0)
      throw UnsupportedOrder("order " + std::to_string(q) +
                             " is not prime; prime-power planes are out of "
                             "scope");
  AffinePlane plane;
  plane.q = q;
  plane.n = q * q;
  auto point = [q](int r, int c) { return q * r + c + 1; };
  for (int s = 0; s < q; ++s) {  // lines r = s*c + b, one class per slope
    std::vector<Block> cls;
    for (int b = 0; b < q; ++b) {
      Block line;
      for (int c = 0; c < q; ++c) line.push_back(point((s * c + b) % q, c));
      std::sort(line.begin(), line.end());
      cls.push_back(std::move(line));
    }
    std::sort(cls.begin(), cls.end());
    plane.parallel_classes.push_back(std::move(cls));
  }
  std::vector<Block> columns;  // the vertical class, c = const
  for (int c = 0; c < q; ++c) {
    Block line;
    for (int r = 0; r < q; ++r) line.push_back(point(r, c));
    columns.push_back(std::move(line));
  }
  plane.parallel_classes.push_back(std::move(columns));
  for (const auto& cls : plane.parallel_classes)
    plane.lines.insert(plane.lines.end(), cls.begin(), cls.end());
  return plane;
}

/// The plane's parallel classes read as a 1-SEED(q^2, q, q+1).
inline SeedDesign as_seed(const AffinePlane& plane) {
  SeedDesign d;
  d.n = plane.n;
  d.k = plane.q;
  d.classes = plane.parallel_classes;
  return d;
}

/// Codeword i = equal-amplitude superposition over class i's blocks, where
/// a block marks its points' qubits as excited. Non-orthogonal codewords
/// mean the class structure is unusable as a code: InvalidSeed.
inline Codebook seed_to_code(const SeedDesign& design,
                             std::vector<std::string>* warnings = nullptr) {
  auto notes = design.validate();
  if (warnings) *warnings = std::move(notes);
  Codebook cb;
  cb.n = design.n;
  cb.k = design.k;
  cb.label = "SEED(" + std::to_string(design.n) + "," +
             std::to_string(design.k) + "," + std::to_string(design.l()) +
             ")";
  for (const auto& cls : design.classes) {
    const double amp = 1.0 / std::sqrt(static_cast<double>(cls.size()));
    StateVector::TermMap map;
    for (const auto& b : cls)
      map.emplace(detail::block_to_basis(b, design.n), Complex{amp, 0.0});
    cb.codewords.emplace_back(design.n, std::move(map));
  }
  for (std::size_t i = 0; i < cb.codewords.size(); ++i)
    for (std::size_t j = i + 1; j < cb.codewords.size(); ++j)
      if (std::abs(inner_product(cb.codewords[i], cb.codewords[j])) > 1e-12)
        throw InvalidSeed("classes " + std::to_string(i + 1) + " and " +
                          std::to_string(j + 1) +
                          " induce non-orthogonal codewords");
  return cb;
}

/// Exact verification of the induced code plus combinatorial diagnostics:
/// for every distinct-position pattern, the per-class count of blocks
/// containing all pattern points (equality across classes is a necessary
/// condition for the diagonal part of the check).
inline ConditionReport verify_seed(const SeedDesign& design, int t,
                                   const DecayModel& model,
                                   double tol = 1e-10) {
  const Codebook code = seed_to_code(design);
  ConditionReport report = verify_detected_jump(code, t, model, tol);
  for (PatternCheck& pc : report.patterns) {
    if (pc.repeated) continue;
    pc.class_block_counts.clear();
    for (const auto& cls : design.classes) {
      int count = 0;
      for (const auto& b : cls) {
        bool contains_all = true;
        for (int p : pc.pattern)
          if (std::find(b.begin(), b.end(), p) == b.end()) {
            contains_all = false;
            break;
          }
        if (contains_all) ++count;
      }
      pc.class_block_counts.push_back(count);
    }
  }
  return report;
}

/// The complementary-pair construction as a design: every n/2-subset is a
/// block, classes are the complement pairs {B, B-bar} ordered by the pair
/// member with the smaller induced basis state. seed_to_code of the result
/// reproduces build_1jc(n) codeword for codeword.
inline SeedDesign build_1seed_complementary(int n) {
  if (n < 2 || n % 2 != 0)
    throw OddLengthUnsupported("complementary-pair designs need even n >= 2");
  SeedDesign d;
  d.n = n;
  d.k = n / 2;
  for (const BasisState& b : dfs_basis(n)) {
    const BasisState comp = b.complement();
    if (b.bits() > comp.bits()) continue;
    Block b1, b2;
    for (int p = 1; p <= n; ++p) (b.bit(p) ? b1 : b2).push_back(p);
    std::vector<Block> cls{std::move(b1), std::move(b2)};
    std::sort(cls.begin(), cls.end());
    d.classes.push_back(std::move(cls));
  }
  return d;
}

/// The nine blocks of the printed first codeword of the 9-point, 3-block
/// code: the non-column parallel classes of the order-3 affine plane (grid
/// rows plus the slope-1 and slope-2 line families), canonically sorted.
inline std::vector<Block> canonical_933_class() {
  const AffinePlane plane = affine_plane(3);
  std::vector<Block> blocks;
  for (int s = 0; s < 3; ++s)  // slope classes only; columns are excluded
    blocks.insert(blocks.end(), plane.parallel_classes[s].begin(),
                  plane.parallel_classes[s].end());
  std::sort(blocks.begin(), blocks.end());
  return blocks;
}

struct SearchResult {
  std::vector<SeedDesign> designs;
  std::uint64_t candidates_examined = 0;
  bool exhausted = true;  // whole screened space covered within budget
};

namespace detail {

// All 280 partitions of {1..9} into three unordered triples, each partition
// canonically sorted.
inline std::vector<std::vector<Block>> all_triple_partitions_9() {
  std::vector<std::vector<Block>> out;
  std::vector<int> pts{1, 2, 3, 4, 5, 6, 7, 8, 9};
  // First triple always contains point 1, second the smallest remaining.
  for (int i = 1; i < 8; ++i)
    for (int j = i + 1; j < 9; ++j) {
      Block b1{pts[0], pts[i], pts[j]};
      std::vector<int> rest;
      for (int m = 1; m < 9; ++m)
        if (m != i && m != j) rest.push_back(pts[m]);
      for (int u = 1; u < 5; ++u)
        for (int v = u + 1; v < 6; ++v) {
          Block b2{rest[0], rest[u], rest[v]};
          Block b3;
          for (int m = 1; m < 6; ++m)
            if (m != u && m != v) b3.push_back(rest[m]);
          out.push_back({b1, b2, b3});
        }
    }
  return out;
}

inline int pair_index(int p, int q) {  // p < q, both 1..9
  return (p - 1) * 9 + (q - 1);
}

// Pair-coverage counts of a block list over the 36 point pairs.
inline std::array<int, 81> pair_counts(const std::vector<Block>& blocks) {
  std::array<int, 81> counts{};
  for (const auto& b : blocks)
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = i + 1; j < b.size(); ++j)
        ++counts[static_cast<std::size_t>(pair_index(b[i], b[j]))];
  return counts;
}

}  // namespace detail

/// Brute-force search for 9-point designs of three 9-block classes, each
/// class built from three triple-partitions, that pass the exact t=2 check.
/// The first class is pinned (default: canonical_933_class()); candidate
/// classes are screened by the pair-coverage necessary condition before the
/// exact checker runs. Throws SearchExhausted when the screened space (or
/// the budget) is exhausted without a solution.
inline SearchResult search_2seed_933(
    std::optional<std::vector<Block>> fixed_first_class = std::nullopt,
    std::uint64_t budget = 1000000) {
  std::vector<Block> first =
      fixed_first_class ? std::move(*fixed_first_class)
                        : canonical_933_class();
  for (auto& b : first) b = detail::sorted_block(b);
  std::sort(first.begin(), first.end());

  SearchResult result;
  auto give_up = [&](const std::string& why) -> SearchResult {
    if (result.designs.empty())
      throw SearchExhausted("no 9-point design found: " + why +
                            " (candidates examined: " +
                            std::to_string(result.candidates_examined) + ")");
    return result;
  };

  // Anchor sanity: 9 distinct in-range triples, else nothing can match it.
  bool anchor_ok = first.size() == 9;
  if (anchor_ok)
    for (std::size_t i = 0; i < first.size() && anchor_ok; ++i) {
      try {
        detail::check_block(first[i], 9, 3);
      } catch (const InvalidParameters&) {
        anchor_ok = false;
      }
      if (i > 0 && first[i] == first[i - 1]) anchor_ok = false;
    }
  if (!anchor_ok) return give_up("fixed first class violates class invariants");

  const auto target = detail::pair_counts(first);
  const std::set<Block> first_blocks(first.begin(), first.end());

  // Partitions whose blocks avoid every pair the anchor never covers and
  // reuse no anchor block; only these can appear in a matching class.
  const auto partitions = detail::all_triple_partitions_9();
  std::vector<std::vector<Block>> pool;
  std::vector<std::array<int, 81>> pool_counts;
  for (const auto& part : partitions) {
    bool usable = true;
    for (const auto& b : part) {
      if (first_blocks.count(b)) usable = false;
      for (std::size_t i = 0; i < b.size() && usable; ++i)
        for (std::size_t j = i + 1; j < b.size(); ++j)
          if (target[static_cast<std::size_t>(
                  detail::pair_index(b[i], b[j]))] == 0) {
            usable = false;
            break;
          }
      if (!usable) break;
    }
    if (usable) {
      pool.push_back(part);
      pool_counts.push_back(detail::pair_counts(part));
    }
  }

  // Candidate classes: 3 block-disjoint pool partitions whose combined
  // pair coverage equals the anchor's exactly.
  auto blocks_disjoint = [](const std::vector<Block>& a,
                            const std::vector<Block>& b) {
    for (const auto& x : a)
      for (const auto& y : b)
        if (x == y) return false;
    return true;
  };
  std::vector<std::vector<Block>> candidates;
  const std::size_t np = pool.size();
  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t j = i + 1; j < np; ++j) {
      if (!blocks_disjoint(pool[i], pool[j])) continue;
      for (std::size_t m = j + 1; m < np; ++m) {
        if (!blocks_disjoint(pool[i], pool[m]) ||
            !blocks_disjoint(pool[j], pool[m]))
          continue;
        bool match = true;
        for (std::size_t pi = 0; pi < target.size(); ++pi)
          if (pool_counts[i][pi] + pool_counts[j][pi] + pool_counts[m][pi] !=
              target[pi]) {
            match = false;
            break;
          }
        if (!match) continue;
        std::vector<Block> cls;
        for (const auto* part : {&pool[i], &pool[j], &pool[m]})
          cls.insert(cls.end(), part->begin(), part->end());
        std::sort(cls.begin(), cls.end());
        candidates.push_back(std::move(cls));
      }
    }
  std::sort(candidates.begin(), candidates.end());

  // Assemble designs from disjoint candidate pairs and certify exactly.
  const DecayModel model(9, 1.0);
  for (std::size_t i = 0; i < candidates.size(); ++i)
    for (std::size_t j = i + 1; j < candidates.size(); ++j) {
      if (!blocks_disjoint(candidates[i], candidates[j])) continue;
      if (result.candidates_examined >= budget) {
        result.exhausted = false;
        return give_up("budget exhausted");
      }
      ++result.candidates_examined;
      SeedDesign design;
      design.n = 9;
      design.k = 3;
      design.classes = {first, candidates[i], candidates[j]};
      try {
        const ConditionReport report = verify_seed(design, 2, model);
        if (report.pass) result.designs.push_back(std::move(design));
      } catch (const Error&) {
        // screened candidate still failed exact construction; skip it
      }
    }
  return give_up("screened space exhausted");
}

}  // namespace jumpcode
