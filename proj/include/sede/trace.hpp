#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sede/protocol.hpp"

namespace sede {

/// Hex of the compressed owner key.
std::string account_id(const Curve& curve, const CurvePoint& owner);

struct TaintEdge {
  std::uint64_t              tx = 0;
  TxKind                     kind = TxKind::Transfer;
  std::vector<std::uint64_t> parents;            // edges whose notes this transaction spends
  std::vector<Nullifier>     linked_nullifiers;  // the spent nullifiers that were derived from those notes
  std::vector<std::string>   from;               // owners of the linked notes; empty for the root
  std::vector<RevealedNote>  outputs;            // every decrypted output, padding included
  std::uint64_t              v_in  = 0;
  std::uint64_t              v_out = 0;
  std::string                recipient;
  std::size_t                request = 0;        // queue id
  bool                       via_linkage = false;
};

struct FrontierNote {
  std::string   account;
  std::uint64_t value      = 0;
  std::uint64_t created_in = 0;
  std::uint64_t leaf_index = 0;
  Nullifier     nullifier;
};

enum class TraceStatus { Complete, Partial };
std::string_view to_string(TraceStatus s) noexcept;

struct TaintGraph {
  std::uint64_t              root = 0;
  TraceStatus                status = TraceStatus::Complete;
  std::vector<std::string>   nodes;  // discovery order
  std::vector<TaintEdge>     edges;  // ascending tx index
  std::vector<FrontierNote>  frontier;
  std::vector<std::uint64_t> rejected;  // transactions whose request the guardians turned down

  std::vector<std::uint64_t> edge_ids() const;
  const TaintEdge*           edge(std::uint64_t tx) const;
};

struct TraceOptions {
  bool use_linkage = true;  // attach linkage proofs so descendants skip the decision script
  bool parallel    = true;
};

/// Breadth-first de-anonymization from `root_tx` by ascending transaction
/// index. Each step posts a signed request, convenes the guardians, decrypts,
/// scans for the revealed notes' nullifiers and queues the spending
/// transactions. A rejected request leaves that branch out and marks the
/// graph Partial. Throws UnknownTransaction.
TaintGraph trace_subgraph(const Curve& curve, const LedgerState& ledger, std::uint64_t root_tx,
                          const FieldElement& revoker_priv, std::span<const Guardian> guardians,
                          const SharePolicy& policy, RequestQueue& queue, const TraceOptions& options = {});

/// Every edge other than the root spends a nullifier derived from a note
/// revealed on one of its parent edges, and that nullifier is in the
/// transaction's public spend list.
bool edges_are_sound(const TaintGraph& graph, const LedgerState& ledger);

}  // namespace sede
