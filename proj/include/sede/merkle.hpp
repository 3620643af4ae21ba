#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "sede/note.hpp"

namespace sede {

struct MerklePath {
  std::uint64_t             index = 0;
  std::vector<FieldElement> siblings;  // leaf level first
};

/// Append-only binary Merkle tree over commitments with a fixed depth.
/// Empty positions hold the per-level zero values. Keeps every node that
/// covers an inserted leaf, so membership paths are served directly.
class MerkleTree {
 public:
  explicit MerkleTree(unsigned depth = 20, std::size_t root_window = 16);

  static FieldElement hash_pair(const FieldElement& left, const FieldElement& right);
  static FieldElement zero_leaf();

  unsigned      depth() const noexcept { return depth_; }
  std::uint64_t size() const noexcept { return leaves_.size(); }
  std::uint64_t capacity() const noexcept { return std::uint64_t{1} << depth_; }

  const FieldElement&            root() const noexcept { return root_; }
  const std::vector<Commitment>& leaves() const noexcept { return leaves_; }
  const FieldElement&            zero(unsigned level) const { return zeros_.at(level); }

  /// Appends at the next empty index and returns that index. Throws TreeFull.
  std::uint64_t insert(const Commitment& leaf);

  /// Sibling path for an existing leaf.
  MerklePath prove(std::uint64_t index) const;

  /// Current root or one of the last `root_window` roots.
  bool is_known_root(const FieldElement& root) const;

  std::optional<std::uint64_t> find(const Commitment& leaf) const;

 private:
  unsigned                               depth_;
  std::size_t                            window_;
  std::vector<FieldElement>              zeros_;
  std::vector<std::vector<FieldElement>> levels_;  // levels_[0] = leaf hashes
  std::vector<Commitment>                leaves_;
  FieldElement                           root_;
  std::deque<FieldElement>               history_;
};

bool verify_path(const FieldElement& root, const Commitment& leaf, const MerklePath& path);

}  // namespace sede
