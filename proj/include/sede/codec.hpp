#pragma once

// JSON forms of the persisted objects. Scalars, field elements and digests
// are lower-case hex; points are compressed hex. Every top-level document
// carries a "version" field.

#include "json.hpp"

#include "sede/pool.hpp"
#include "sede/protocol.hpp"
#include "sede/trace.hpp"

namespace sede {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

Json       point_to_json(const Curve& curve, const CurvePoint& P);
CurvePoint point_from_json(const Curve& curve, const Json& j);

FieldElement field_from_json(const FieldPtr& field, const Json& j);

Json note_to_json(const Curve& curve, const Note& note);
Note note_from_json(const Curve& curve, const Json& j);

Json               payload_to_json(const Curve& curve, const TransactionPayload& payload);
TransactionPayload payload_from_json(const Curve& curve, const Json& j);

Json       pool_config_to_json(const PoolConfig& config);
PoolConfig pool_config_from_json(const Json& j);

Json ledger_to_json(const LedgerState& ledger);
/// Rebuilds the tree and nullifier set by replaying every transaction
/// through apply_in_place; fails with MalformedData if the stored root or
/// balance disagree with the replay.
LedgerState ledger_from_json(const CurvePtr& curve, const Json& j);

/// Digest over the canonical bytes of every payload, the root and the balance.
Sha256Digest ledger_digest(const LedgerState& ledger);

Json           policy_to_json(const DecisionPolicy& policy);
DecisionPolicy policy_from_json(const Json& j);

Json          share_to_json(const GuardianShare& share, const SharePolicy& policy);
GuardianShare share_from_json(const Curve& curve, const Json& j);

Json         queue_to_json(const Curve& curve, const RequestQueue& queue);
RequestQueue queue_from_json(const Curve& curve, const Json& j);

/// Nodes, edges and frontier; recovered values are included, blindings are not.
Json graph_to_json(const Curve& curve, const TaintGraph& graph);

}  // namespace sede
