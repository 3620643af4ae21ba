#pragma once

// Independent oracles shared by the unit tests and the acceptance binary.
// Nothing here calls the arithmetic it is meant to check.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <unistd.h>

#include "sede/curve.hpp"
#include "sede/error.hpp"
#include "sede/merkle.hpp"
#include "sede/rng.hpp"
#include "sede/simulator.hpp"

namespace sede::test {

// ---------------------------------------------------------------------------
// Toy curve arithmetic in plain 64-bit integers.

struct ToyPoint {
  std::int64_t x = 0, y = 0;
  bool         inf = true;

  friend bool operator==(const ToyPoint&, const ToyPoint&) = default;
};

class ToyOracle {
 public:
  static constexpr std::int64_t p = 65407, a = 3894, b = 3354, n = 65557;
  static constexpr ToyPoint     G{1, 22237, false};

  static std::int64_t md(std::int64_t v) { return ((v % p) + p) % p; }

  static std::int64_t inv(std::int64_t v) {
    // extended Euclid
    std::int64_t t = 0, nt = 1, r = p, nr = md(v);
    while (nr != 0) {
      std::int64_t q = r / nr;
      std::tie(t, nt) = std::pair{nt, t - q * nt};
      std::tie(r, nr) = std::pair{nr, r - q * nr};
    }
    return md(t);
  }

  static ToyPoint add(const ToyPoint& P, const ToyPoint& Q) {
    if (P.inf) return Q;
    if (Q.inf) return P;
    std::int64_t lambda;
    if (P.x == Q.x) {
      if (md(P.y + Q.y) == 0) return {};
      lambda = md(md(3 * md(P.x * P.x) + a) * inv(2 * P.y));
    } else {
      lambda = md(md(Q.y - P.y) * inv(Q.x - P.x));
    }
    std::int64_t x = md(lambda * lambda - P.x - Q.x);
    std::int64_t y = md(lambda * (P.x - x) - P.y);
    return {x, y, false};
  }

  static bool on_curve(std::int64_t x, std::int64_t y) {
    return md(y * y) == md(md(md(x * x) * x) + md(a * x) + b);
  }

  /// table[k] = k*G by repeated addition, k in [0, n).
  static const std::vector<ToyPoint>& multiples() {
    static const std::vector<ToyPoint> table = [] {
      std::vector<ToyPoint> t(n);
      for (std::int64_t k = 1; k < n; ++k) t[k] = add(t[k - 1], G);
      return t;
    }();
    return table;
  }

  /// Smallest square root of every residue, or -1.
  static const std::vector<std::int64_t>& sqrt_table() {
    static const std::vector<std::int64_t> table = [] {
      std::vector<std::int64_t> t(p, -1);
      for (std::int64_t y = p - 1; y >= 0; --y) t[md(y * y)] = y;
      return t;
    }();
    return table;
  }
};

inline ToyPoint to_toy(const CurvePoint& P) {
  if (P.is_identity()) return {};
  return {static_cast<std::int64_t>(P.x().get_si()), static_cast<std::int64_t>(P.y().get_si()), false};
}

inline CurvePoint from_toy(const ToyPoint& P) {
  if (P.inf) return CurvePoint::identity();
  return {BigInt(static_cast<long>(P.x)), BigInt(static_cast<long>(P.y))};
}

// ---------------------------------------------------------------------------
// Merkle root by hashing every one of the 2^depth leaves.

inline FieldElement full_merkle_root(const std::vector<Commitment>& leaves, unsigned depth) {
  std::vector<FieldElement> level(std::size_t{1} << depth, MerkleTree::zero_leaf());
  for (std::size_t i = 0; i < leaves.size(); ++i) level[i] = leaves[i].value;
  while (level.size() > 1) {
    std::vector<FieldElement> up(level.size() / 2);
    for (std::size_t i = 0; i < up.size(); ++i) up[i] = MerkleTree::hash_pair(level[2 * i], level[2 * i + 1]);
    level = std::move(up);
  }
  return level[0];
}

// ---------------------------------------------------------------------------
// Taint closure read straight from the builder's witnesses.

struct Closure {
  std::set<std::uint64_t>                     txs;
  std::set<std::uint64_t>                     tainted_leaves;
  std::map<std::uint64_t, std::uint64_t>      unspent;  // leaf -> value, tainted and not spent
  std::map<std::uint64_t, std::uint64_t>      leaf_creator;
};

inline Closure witness_closure(const Simulator& sim, std::uint64_t root) {
  const auto& txs = sim.ledger().transactions;
  Closure     c;
  std::uint64_t leaf = 0;
  std::vector<std::uint64_t> first_leaf(txs.size());
  for (std::uint64_t i = 0; i < txs.size(); ++i) {
    first_leaf[i] = leaf;
    for (std::size_t j = 0; j < txs[i].new_commitments.size(); ++j) c.leaf_creator[leaf++] = i;
  }
  std::set<std::uint64_t> spent;
  for (std::uint64_t i = 0; i < txs.size(); ++i) {
    const auto& w = sim.witnesses().at(i);
    bool        hit = i == root;
    for (const auto& s : w.spends) {
      if (s.padding) continue;
      spent.insert(s.leaf_index);
      if (c.tainted_leaves.contains(s.leaf_index)) hit = true;
    }
    if (!hit) continue;
    c.txs.insert(i);
    for (std::size_t j = 0; j < w.outputs.size(); ++j) c.tainted_leaves.insert(first_leaf[i] + j);
  }
  for (auto l : c.tainted_leaves) {
    const auto& w     = sim.witnesses().at(c.leaf_creator[l]);
    const auto  value = w.outputs[l - first_leaf[c.leaf_creator[l]]].value;
    if (value > 0 && !spent.contains(l)) c.unspent[l] = value;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Files.

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream     in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Files under `dir`, relative path -> contents.
inline std::map<std::string, std::string> snapshot(const std::filesystem::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[std::filesystem::relative(e.path(), dir).generic_string()] = slurp(e.path());
  }
  return out;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("sede-test-" + name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Set SEDE_UPDATE_GOLDEN=1 to rewrite golden files instead of comparing.
inline bool update_golden() {
  const char* v = std::getenv("SEDE_UPDATE_GOLDEN");
  return v && std::string(v) == "1";
}

// ---------------------------------------------------------------------------
// Random ledgers: a tainted deposit for "eve", honest deposits, then random
// deposits, transfers and withdrawals between everyone.

inline SimConfig random_ledger_config(std::uint64_t seed) {
  SimConfig cfg;
  cfg.curve            = "toy";
  cfg.policy           = {2, 3};
  cfg.seed             = seed;
  cfg.pool.tree_depth  = 10;
  cfg.pool.max_outputs = 3;
  return cfg;
}

inline Simulator random_ledger(std::uint64_t seed, std::size_t max_tx) {
  Simulator sim(random_ledger_config(seed));
  const std::vector<std::string> names = {"eve", "h1", "h2", "h3", "m1", "m2"};
  for (const auto& n : names) sim.enroll(n);
  Rng rng(Rng::derive(seed, "test-ledger"));
  sim.deposit("eve", 100, "dirty");
  sim.deposit("h1", 60);
  sim.deposit("h2", 60);
  while (sim.ledger().transactions.size() < max_tx) {
    const auto& from = names[rng.below(static_cast<long>(names.size())).get_si()];
    auto        bal  = sim.actor(from).balance();
    auto        op   = rng.below(10).get_si();
    if (op == 0) {
      sim.deposit(from, 1 + rng.below(30).get_si());
      continue;
    }
    if (bal == 0) continue;
    std::uint64_t amount = 1 + rng.below(static_cast<long>(bal)).get_si();
    try {
      if (op == 1) {
        sim.withdraw(from, amount, "out");
      } else {
        sim.transfer(from, names[rng.below(static_cast<long>(names.size())).get_si()], amount);
      }
    } catch (const Error& e) {
      // Fragmented wallets can need more inputs than the arity allows.
      if (e.code() != ErrorCode::InvalidArity) throw;
    }
  }
  return sim;
}

}  // namespace sede::test
