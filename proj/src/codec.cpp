#include "sede/codec.hpp"

#include <algorithm>

#include "sede/error.hpp"

namespace sede {

namespace {

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorCode::MalformedData, std::string("missing field '") + key + "'");
  return j.at(key);
}

template <typename T>
T get(const Json& j, const char* key) {
  const Json& v = need(j, key);
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(ErrorCode::MalformedData, std::string("field '") + key + "' has the wrong type");
  }
}

const Json& array_at(const Json& j, const char* key) {
  const Json& v = need(j, key);
  if (!v.is_array()) fail(ErrorCode::MalformedData, std::string("field '") + key + "' must be an array");
  return v;
}

std::string digest_hex(const Sha256Digest& d) { return to_hex(d); }

Sha256Digest digest_from_json(const Json& j) {
  if (!j.is_string()) fail(ErrorCode::MalformedData, "digest must be a hex string");
  Bytes b = from_hex(j.get<std::string>());
  if (b.size() != 32) fail(ErrorCode::MalformedData, "digest must be 32 bytes");
  Sha256Digest d{};
  std::copy(b.begin(), b.end(), d.begin());
  return d;
}

void check_version(const Json& j) {
  if (get<int>(j, "version") != kFormatVersion) fail(ErrorCode::MalformedData, "unsupported format version");
}

Json points_to_json(const Curve& curve, const std::vector<CurvePoint>& pts) {
  Json a = Json::array();
  for (const auto& P : pts) a.push_back(point_to_json(curve, P));
  return a;
}

std::vector<CurvePoint> points_from_json(const Curve& curve, const Json& a) {
  if (!a.is_array()) fail(ErrorCode::MalformedData, "expected an array of points");
  std::vector<CurvePoint> out;
  out.reserve(a.size());
  for (const auto& p : a) out.push_back(point_from_json(curve, p));
  return out;
}

Json ciphertext1_to_json(const Curve& curve, const Ciphertext1& ct) {
  return Json::array({point_to_json(curve, ct.c1), point_to_json(curve, ct.c2)});
}

Ciphertext1 ciphertext1_from_json(const Curve& curve, const Json& j) {
  if (!j.is_array() || j.size() != 2) fail(ErrorCode::MalformedData, "ciphertext must be a pair of points");
  return {point_from_json(curve, j[0]), point_from_json(curve, j[1])};
}

Json linkage_to_json(const Curve& curve, const LinkageProof& p) {
  Json j;
  j["parent_tx"]  = p.parent_tx;
  j["child_tx"]   = p.child_tx;
  j["commitment"] = p.commitment.value.to_hex();
  j["nullifier"]  = p.nullifier.value.to_hex();
  j["leaf_index"] = p.leaf_index;
  j["witness"]    = note_to_json(curve, p.witness);
  return j;
}

LinkageProof linkage_from_json(const Curve& curve, const Json& j) {
  LinkageProof p;
  p.parent_tx        = get<std::uint64_t>(j, "parent_tx");
  p.child_tx         = get<std::uint64_t>(j, "child_tx");
  p.commitment.value = field_from_json(hash_field(), need(j, "commitment"));
  p.nullifier.value  = field_from_json(hash_field(), need(j, "nullifier"));
  p.leaf_index       = get<std::uint64_t>(j, "leaf_index");
  p.witness          = note_from_json(curve, need(j, "witness"));
  return p;
}

Json revealed_to_json(const Curve& curve, const RevealedNote& rn) {
  Json j;
  j["account"]    = account_id(curve, rn.note.owner);
  j["value"]      = rn.note.value;
  j["leaf_index"] = rn.leaf_index;
  j["commitment"] = rn.commitment.value.to_hex();
  j["nullifier"]  = rn.nullifier.value.to_hex();
  return j;
}

}  // namespace

Json point_to_json(const Curve& curve, const CurvePoint& P) { return curve.point_to_hex(P); }

CurvePoint point_from_json(const Curve& curve, const Json& j) {
  if (!j.is_string()) fail(ErrorCode::MalformedData, "point must be a hex string");
  return curve.point_from_hex(j.get<std::string>());
}

FieldElement field_from_json(const FieldPtr& field, const Json& j) {
  if (!j.is_string()) fail(ErrorCode::MalformedData, "field element must be a hex string");
  return FieldElement::from_hex(field, j.get<std::string>());
}

Json note_to_json(const Curve& curve, const Note& note) {
  Json j;
  j["value"]    = note.value;
  j["owner"]    = point_to_json(curve, note.owner);
  j["blinding"] = note.blinding.to_hex();
  j["id"]       = note.id.to_hex();
  return j;
}

Note note_from_json(const Curve& curve, const Json& j) {
  return {get<std::uint64_t>(j, "value"), point_from_json(curve, need(j, "owner")),
          field_from_json(hash_field(), need(j, "blinding")), field_from_json(hash_field(), need(j, "id"))};
}

Json payload_to_json(const Curve& curve, const TransactionPayload& p) {
  Json j;
  j["proof"] = {{"statement", digest_hex(p.proof.statement)},
                {"suite", p.proof.suite},
                {"valid", p.proof.valid},
                {"failed_statement", p.proof.failed_statement}};
  Json cs = Json::array(), ns = Json::array();
  for (const auto& c : p.new_commitments) cs.push_back(c.value.to_hex());
  for (const auto& n : p.spent_nullifiers) ns.push_back(n.value.to_hex());
  j["new_commitments"]  = std::move(cs);
  j["spent_nullifiers"] = std::move(ns);
  j["v_in"]             = p.v_in;
  j["v_out"]            = p.v_out;

  Json bundles = Json::array();
  for (const auto& b : p.ciphertexts) {
    Json items = Json::array();
    if (b.mode == EncryptionMode::Combined) {
      for (const auto& ct : b.combined) {
        items.push_back(Json::array({point_to_json(curve, ct.c1), point_to_json(curve, ct.c2)}));
      }
    } else {
      for (const auto& ct : b.layered) {
        items.push_back(Json::array({ciphertext1_to_json(curve, ct.outer1), ciphertext1_to_json(curve, ct.outer2)}));
      }
    }
    bundles.push_back({{"mode", std::string(to_string(b.mode))}, {"points", std::move(items)}});
  }
  j["ciphertexts"] = std::move(bundles);
  j["aux"]         = {{"root", p.aux.root.to_hex()}, {"recipient", p.aux.recipient}, {"chain_id", p.aux.chain_id}};
  return j;
}

TransactionPayload payload_from_json(const Curve& curve, const Json& j) {
  TransactionPayload p;
  const Json&        proof = need(j, "proof");
  p.proof.statement        = digest_from_json(need(proof, "statement"));
  p.proof.suite            = get<std::string>(proof, "suite");
  p.proof.valid            = get<bool>(proof, "valid");
  p.proof.failed_statement = get<std::string>(proof, "failed_statement");

  for (const auto& c : array_at(j, "new_commitments")) p.new_commitments.push_back({field_from_json(hash_field(), c)});
  for (const auto& n : array_at(j, "spent_nullifiers")) p.spent_nullifiers.push_back({field_from_json(hash_field(), n)});
  p.v_in  = get<std::uint64_t>(j, "v_in");
  p.v_out = get<std::uint64_t>(j, "v_out");

  for (const auto& b : array_at(j, "ciphertexts")) {
    EncryptedNote en;
    en.mode = parse_encryption_mode(get<std::string>(b, "mode"));
    for (const auto& item : array_at(b, "points")) {
      if (!item.is_array() || item.size() != 2) fail(ErrorCode::MalformedData, "ciphertext must have two components");
      if (en.mode == EncryptionMode::Combined) {
        en.combined.push_back({point_from_json(curve, item[0]), point_from_json(curve, item[1])});
      } else {
        en.layered.push_back({ciphertext1_from_json(curve, item[0]), ciphertext1_from_json(curve, item[1])});
      }
    }
    p.ciphertexts.push_back(std::move(en));
  }
  const Json& aux = need(j, "aux");
  p.aux.root      = field_from_json(hash_field(), need(aux, "root"));
  p.aux.recipient = get<std::string>(aux, "recipient");
  p.aux.chain_id  = get<std::string>(aux, "chain_id");
  return p;
}

Json pool_config_to_json(const PoolConfig& c) {
  Json j;
  j["tree_depth"]  = c.tree_depth;
  j["root_window"] = c.root_window;
  j["max_inputs"]  = c.max_inputs;
  j["max_outputs"] = c.max_outputs;
  j["encryption"]  = std::string(to_string(c.mode));
  j["chain_id"]    = c.chain_id;
  return j;
}

PoolConfig pool_config_from_json(const Json& j) {
  PoolConfig c;
  c.tree_depth  = get<unsigned>(j, "tree_depth");
  c.root_window = get<std::size_t>(j, "root_window");
  c.max_inputs  = get<std::size_t>(j, "max_inputs");
  c.max_outputs = get<std::size_t>(j, "max_outputs");
  c.mode        = parse_encryption_mode(get<std::string>(j, "encryption"));
  c.chain_id    = get<std::string>(j, "chain_id");
  return c;
}

Json ledger_to_json(const LedgerState& ledger) {
  const Curve& curve = *ledger.curve;
  Json         j;
  j["version"]      = kFormatVersion;
  j["curve"]        = curve.name();
  j["keys"]         = {{"revoker", point_to_json(curve, ledger.keys.revoker)},
                       {"guardians", point_to_json(curve, ledger.keys.guardians)}};
  j["config"]       = pool_config_to_json(ledger.config);
  j["pool_balance"] = ledger.pool_balance;
  j["root"]         = ledger.tree.root().to_hex();
  j["digest"]       = digest_hex(ledger_digest(ledger));
  Json txs          = Json::array();
  for (const auto& p : ledger.transactions) txs.push_back(payload_to_json(curve, p));
  j["transactions"] = std::move(txs);
  return j;
}

LedgerState ledger_from_json(const CurvePtr& curve, const Json& j) {
  check_version(j);
  if (get<std::string>(j, "curve") != curve->name()) fail(ErrorCode::MalformedData, "ledger was written for another curve");
  const Json& keys = need(j, "keys");
  PublicKeys  pk{point_from_json(*curve, need(keys, "revoker")), point_from_json(*curve, need(keys, "guardians"))};
  PoolConfig  cfg = pool_config_from_json(need(j, "config"));
  LedgerState ledger(curve, pk, cfg);
  for (const auto& tx : array_at(j, "transactions")) apply_in_place(ledger, payload_from_json(*curve, tx));

  if (ledger.pool_balance != get<std::uint64_t>(j, "pool_balance") ||
      ledger.tree.root() != field_from_json(hash_field(), need(j, "root"))) {
    fail(ErrorCode::MalformedData, "ledger file does not match its replay");
  }
  return ledger;
}

Sha256Digest ledger_digest(const LedgerState& ledger) {
  Hasher h("sede/ledger");
  h.add(std::string_view(ledger.curve->name()));
  h.add(static_cast<std::uint64_t>(ledger.transactions.size()));
  for (const auto& p : ledger.transactions) h.add(canonical_payload_bytes(*ledger.curve, p));
  h.add(ledger.tree.root());
  h.add(ledger.pool_balance);
  return h.digest();
}

Json policy_to_json(const DecisionPolicy& policy) {
  Json j;
  j["default"] = std::string(to_string(policy.fallback));
  Json per     = Json::object();
  for (const auto& [tx, v] : policy.per_tx) per[std::to_string(tx)] = std::string(to_string(v));
  j["per_tx"] = std::move(per);
  return j;
}

DecisionPolicy policy_from_json(const Json& j) {
  DecisionPolicy p;
  if (j.is_string()) {
    p.fallback = parse_verdict(j.get<std::string>() == "always-reject" ? "reject"
                               : j.get<std::string>() == "always-approve" ? "approve"
                                                                           : j.get<std::string>());
    return p;
  }
  p.fallback = parse_verdict(get<std::string>(j, "default"));
  if (j.contains("per_tx")) {
    const Json& per = j.at("per_tx");
    if (!per.is_object()) fail(ErrorCode::MalformedData, "per_tx must be an object");
    for (const auto& [key, v] : per.items()) {
      std::uint64_t tx = 0;
      try {
        std::size_t used = 0;
        tx               = std::stoull(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        fail(ErrorCode::MalformedData, "per_tx key '" + key + "' is not a transaction index");
      }
      if (!v.is_string()) fail(ErrorCode::MalformedData, "per_tx verdict must be a string");
      p.per_tx[tx] = parse_verdict(v.get<std::string>());
    }
  }
  return p;
}

Json share_to_json(const GuardianShare& share, const SharePolicy& policy) {
  Json j;
  j["version"] = kFormatVersion;
  j["t"]       = policy.t;
  j["n"]       = policy.n;
  j["index"]   = share.index.value().get_ui();
  j["share"]   = share.share.to_hex();
  return j;
}

GuardianShare share_from_json(const Curve& curve, const Json& j) {
  check_version(j);
  return {curve.scalar(static_cast<long>(get<std::uint64_t>(j, "index"))),
          field_from_json(curve.scalar_field(), need(j, "share"))};
}

Json queue_to_json(const Curve& curve, const RequestQueue& queue) {
  Json entries = Json::array();
  for (const auto& e : queue.entries()) {
    Json req;
    req["tx_index"]       = e.request.tx.index;
    req["payload_digest"] = digest_hex(e.request.tx.payload_digest);
    req["signature"]      = {{"r", bigint_to_hex(e.request.signature.r)}, {"s", bigint_to_hex(e.request.signature.s)}};
    req["requester"]      = point_to_json(curve, e.request.requester);

    Json decisions = Json::array();
    for (const auto& d : e.decisions) {
      Json dj;
      dj["guardian"]         = d.guardian;
      dj["verdict"]          = std::string(to_string(d.verdict));
      dj["reason"]           = d.reason;
      dj["consulted_script"] = d.consulted_script;
      dj["via_linkage"]      = d.via_linkage;
      dj["quorum"]           = d.quorum;
      if (d.contributions) {
        Json cs = Json::array();
        for (const auto& bundle : *d.contributions) cs.push_back(points_to_json(curve, bundle));
        dj["contributions"] = std::move(cs);
      } else {
        dj["contributions"] = nullptr;
      }
      decisions.push_back(std::move(dj));
    }

    Json ej;
    ej["request"]   = std::move(req);
    ej["linkage"]   = e.linkage ? linkage_to_json(curve, *e.linkage) : Json(nullptr);
    ej["decisions"] = std::move(decisions);
    ej["status"]    = std::string(to_string(e.status));
    entries.push_back(std::move(ej));
  }
  return {{"version", kFormatVersion}, {"requests", std::move(entries)}};
}

RequestQueue queue_from_json(const Curve& curve, const Json& j) {
  check_version(j);
  std::vector<QueueEntry> entries;
  for (const auto& ej : array_at(j, "requests")) {
    QueueEntry  e;
    const Json& req          = need(ej, "request");
    e.request.tx.index       = get<std::uint64_t>(req, "tx_index");
    e.request.tx.payload_digest = digest_from_json(need(req, "payload_digest"));
    const Json& sig          = need(req, "signature");
    e.request.signature      = {bigint_from_hex(get<std::string>(sig, "r")), bigint_from_hex(get<std::string>(sig, "s"))};
    e.request.requester      = point_from_json(curve, need(req, "requester"));
    if (!need(ej, "linkage").is_null()) e.linkage = linkage_from_json(curve, ej.at("linkage"));

    for (const auto& dj : array_at(ej, "decisions")) {
      GuardianDecision d;
      d.guardian         = get<std::size_t>(dj, "guardian");
      d.verdict          = parse_verdict(get<std::string>(dj, "verdict"));
      d.reason           = get<std::string>(dj, "reason");
      d.consulted_script = get<bool>(dj, "consulted_script");
      d.via_linkage      = get<bool>(dj, "via_linkage");
      d.quorum           = get<std::vector<std::size_t>>(dj, "quorum");
      if (!need(dj, "contributions").is_null()) {
        ContributionSet cs;
        for (const auto& bundle : array_at(dj, "contributions")) cs.push_back(points_from_json(curve, bundle));
        d.contributions = std::move(cs);
      }
      e.decisions.push_back(std::move(d));
    }
    e.status = parse_request_status(get<std::string>(ej, "status"));
    entries.push_back(std::move(e));
  }
  return RequestQueue::from_entries(std::move(entries));
}

Json graph_to_json(const Curve& curve, const TaintGraph& graph) {
  Json j;
  j["version"] = kFormatVersion;
  j["root"]    = graph.root;
  j["status"]  = std::string(to_string(graph.status));
  j["nodes"]   = graph.nodes;

  Json edges = Json::array();
  for (const auto& e : graph.edges) {
    Json ej;
    ej["tx"]      = e.tx;
    ej["kind"]    = std::string(to_string(e.kind));
    ej["parents"] = e.parents;
    Json linked   = Json::array();
    for (const auto& n : e.linked_nullifiers) linked.push_back(n.value.to_hex());
    ej["linked_nullifiers"] = std::move(linked);
    ej["from"]              = e.from;
    Json outs               = Json::array();
    for (const auto& rn : e.outputs) outs.push_back(revealed_to_json(curve, rn));
    ej["outputs"]     = std::move(outs);
    ej["v_in"]        = e.v_in;
    ej["v_out"]       = e.v_out;
    ej["recipient"]   = e.recipient;
    ej["request"]     = e.request;
    ej["via_linkage"] = e.via_linkage;
    edges.push_back(std::move(ej));
  }
  j["edges"] = std::move(edges);

  Json frontier = Json::array();
  for (const auto& f : graph.frontier) {
    frontier.push_back({{"account", f.account},
                        {"value", f.value},
                        {"created_in", f.created_in},
                        {"leaf_index", f.leaf_index},
                        {"nullifier", f.nullifier.value.to_hex()}});
  }
  j["frontier"] = std::move(frontier);
  j["rejected"] = graph.rejected;
  return j;
}

}  // namespace sede
