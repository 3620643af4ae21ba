#include "sede/trace.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "sede/error.hpp"

namespace sede {

std::string account_id(const Curve& curve, const CurvePoint& owner) { return curve.point_to_hex(owner); }

std::string_view to_string(TraceStatus s) noexcept { return s == TraceStatus::Complete ? "complete" : "partial"; }

std::vector<std::uint64_t> TaintGraph::edge_ids() const {
  std::vector<std::uint64_t> ids;
  for (const auto& e : edges) ids.push_back(e.tx);
  return ids;
}

const TaintEdge* TaintGraph::edge(std::uint64_t tx) const {
  for (const auto& e : edges) {
    if (e.tx == tx) return &e;
  }
  return nullptr;
}

namespace {

struct Pending {
  std::vector<std::uint64_t> parents;
  std::vector<Nullifier>     nullifiers;
  std::vector<std::string>   from;
};

void add_unique(std::vector<std::string>& v, const std::string& s) {
  if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

}  // namespace

TaintGraph trace_subgraph(const Curve& curve, const LedgerState& ledger, std::uint64_t root_tx,
                          const FieldElement& revoker_priv, std::span<const Guardian> guardians,
                          const SharePolicy& policy, RequestQueue& queue, const TraceOptions& options) {
  if (root_tx >= ledger.transactions.size()) {
    fail(ErrorCode::UnknownTransaction, "no transaction at index " + std::to_string(root_tx));
  }
  const CurvePoint revoker_pub = curve.mul_base(revoker_priv);

  TaintGraph graph;
  graph.root = root_tx;

  std::set<std::uint64_t>                                worklist{root_tx};
  std::map<std::uint64_t, Pending>                       incoming;
  std::map<std::uint64_t, std::vector<RevealedNote>>     revealed;
  std::set<Nullifier>                                    spent_anywhere;

  while (!worklist.empty()) {
    const std::uint64_t tx = *worklist.begin();
    worklist.erase(worklist.begin());
    const auto& payload = ledger.transactions[tx];
    const auto& in      = incoming[tx];

    std::optional<LinkageProof> linkage;
    if (options.use_linkage && tx != root_tx && !in.parents.empty()) {
      const std::uint64_t parent = in.parents.front();
      linkage = make_linkage_proof(curve, revealed[parent], parent, payload, tx);
    }

    std::size_t id = queue.post(sign_request(curve, revoker_priv, ledger, tx), linkage);
    if (convene_guardians(curve, queue, id, guardians, revoker_pub, ledger, policy) != RequestStatus::Approved) {
      graph.status = TraceStatus::Partial;
      graph.rejected.push_back(tx);
      continue;
    }

    auto notes = revoker_decrypt(curve, queue, id, revoker_priv, ledger, policy);
    auto found = locate_notes(curve, ledger, notes, tx);

    TaintEdge edge;
    edge.tx                = tx;
    edge.kind              = kind_of(payload);
    edge.parents           = in.parents;
    edge.linked_nullifiers = in.nullifiers;
    edge.from              = in.from;
    edge.v_in              = payload.v_in;
    edge.v_out             = payload.v_out;
    edge.recipient         = payload.aux.recipient;
    edge.request           = id;
    edge.via_linkage       = linkage.has_value() &&
                       std::all_of(queue.at(id).decisions.begin(), queue.at(id).decisions.end(),
                                   [](const GuardianDecision& d) { return d.verdict != Verdict::Approve || d.via_linkage; });
    for (const auto& rn : found) {
      if (rn.note.value > 0) add_unique(graph.nodes, account_id(curve, rn.note.owner));
    }

    for (const auto& hit : scan_for_spends(ledger, found, options.parallel)) {
      spent_anywhere.insert(hit.nullifier);
      auto& child = incoming[hit.tx_index];
      if (std::find(child.parents.begin(), child.parents.end(), tx) == child.parents.end()) {
        child.parents.push_back(tx);
      }
      child.nullifiers.push_back(hit.nullifier);
      add_unique(child.from, account_id(curve, found[hit.note_index].note.owner));
      worklist.insert(hit.tx_index);
    }

    edge.outputs = found;
    revealed[tx] = std::move(found);
    graph.edges.push_back(std::move(edge));
  }

  for (const auto& e : graph.edges) {
    for (const auto& rn : e.outputs) {
      if (rn.note.value == 0 || spent_anywhere.contains(rn.nullifier)) continue;
      graph.frontier.push_back({account_id(curve, rn.note.owner), rn.note.value, rn.created_in, rn.leaf_index, rn.nullifier});
    }
  }
  return graph;
}

bool edges_are_sound(const TaintGraph& graph, const LedgerState& ledger) {
  for (const auto& e : graph.edges) {
    if (e.tx >= ledger.transactions.size()) return false;
    if (e.tx == graph.root) continue;
    if (e.parents.empty() || e.linked_nullifiers.empty()) return false;
    const auto& spent = ledger.transactions[e.tx].spent_nullifiers;
    for (const auto& nf : e.linked_nullifiers) {
      if (std::find(spent.begin(), spent.end(), nf) == spent.end()) return false;
      bool derived = false;
      for (auto p : e.parents) {
        const TaintEdge* parent = graph.edge(p);
        if (!parent || p == e.tx) return false;
        for (const auto& rn : parent->outputs) derived = derived || rn.nullifier == nf;
      }
      if (!derived) return false;
    }
  }
  return true;
}

}  // namespace sede
