#include "sede/merkle.hpp"

#include <algorithm>
#include <string>

#include "sede/error.hpp"
#include "sede/hash.hpp"

namespace sede {

FieldElement MerkleTree::hash_pair(const FieldElement& left, const FieldElement& right) {
  return Hasher("sede/merkle-node").add(left).add(right).to_field();
}

FieldElement MerkleTree::zero_leaf() { return Hasher("sede/merkle-zero").to_field(); }

MerkleTree::MerkleTree(unsigned depth, std::size_t root_window) : depth_(depth), window_(root_window) {
  if (depth_ == 0 || depth_ > 32) fail(ErrorCode::InvalidConfig, "tree depth must be in [1, 32]");
  zeros_.reserve(depth_ + 1);
  zeros_.push_back(zero_leaf());
  for (unsigned l = 0; l < depth_; ++l) zeros_.push_back(hash_pair(zeros_[l], zeros_[l]));
  levels_.resize(depth_ + 1);
  root_ = zeros_[depth_];
}

std::uint64_t MerkleTree::insert(const Commitment& leaf) {
  if (size() >= capacity()) fail(ErrorCode::TreeFull, "tree of depth " + std::to_string(depth_) + " is full");
  std::uint64_t index = leaves_.size();
  leaves_.push_back(leaf);

  levels_[0].push_back(leaf.value);
  std::uint64_t pos = index;
  for (unsigned l = 0; l < depth_; ++l) {
    std::uint64_t       parent = pos / 2;
    const FieldElement& left   = levels_[l][parent * 2];
    const FieldElement& right  = parent * 2 + 1 < levels_[l].size() ? levels_[l][parent * 2 + 1] : zeros_[l];
    FieldElement        node   = hash_pair(left, right);
    if (parent < levels_[l + 1].size()) {
      levels_[l + 1][parent] = node;
    } else {
      levels_[l + 1].push_back(node);
    }
    pos = parent;
  }

  history_.push_back(root_);
  while (history_.size() > window_) history_.pop_front();
  root_ = levels_[depth_][0];
  return index;
}

MerklePath MerkleTree::prove(std::uint64_t index) const {
  if (index >= leaves_.size()) fail(ErrorCode::UnknownCommitment, "no leaf at index " + std::to_string(index));
  MerklePath path{index, {}};
  path.siblings.reserve(depth_);
  std::uint64_t pos = index;
  for (unsigned l = 0; l < depth_; ++l) {
    std::uint64_t sib = pos ^ 1;
    path.siblings.push_back(sib < levels_[l].size() ? levels_[l][sib] : zeros_[l]);
    pos /= 2;
  }
  return path;
}

bool MerkleTree::is_known_root(const FieldElement& root) const {
  return root == root_ || std::find(history_.begin(), history_.end(), root) != history_.end();
}

std::optional<std::uint64_t> MerkleTree::find(const Commitment& leaf) const {
  auto it = std::find(leaves_.begin(), leaves_.end(), leaf);
  if (it == leaves_.end()) return std::nullopt;
  return static_cast<std::uint64_t>(it - leaves_.begin());
}

bool verify_path(const FieldElement& root, const Commitment& leaf, const MerklePath& path) {
  FieldElement  node = leaf.value;
  std::uint64_t pos  = path.index;
  for (const auto& sib : path.siblings) {
    node = (pos & 1) ? MerkleTree::hash_pair(sib, node) : MerkleTree::hash_pair(node, sib);
    pos >>= 1;
  }
  return pos == 0 && node == root;
}

}  // namespace sede
