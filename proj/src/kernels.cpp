#include "sede/kernels.hpp"

#include "sede/error.hpp"

namespace sede::kernels {

namespace {

void require_same_length(std::size_t a, std::size_t b) {
  if (a != b) fail(ErrorCode::InvalidArgument, "kernel inputs have mismatched lengths");
}

void require_randomness(std::span<const FieldElement> r) {
  for (const auto& x : r) {
    if (x.is_zero()) fail(ErrorCode::BadRandomness, "encryption randomness must be in [1, n)");
  }
}

}  // namespace

namespace serial {

std::vector<CurvePoint> scale_points(const Curve& curve, const FieldElement& k, std::span<const CurvePoint> points) {
  std::vector<CurvePoint> out;
  out.reserve(points.size());
  for (const auto& P : points) out.push_back(curve.mul(k, P));
  return out;
}

std::vector<CombinedCiphertext> encrypt_combined_many(const Curve& curve, const CurvePoint& revoker_pub,
                                                      const CurvePoint& guardian_pub, std::span<const CurvePoint> msgs,
                                                      std::span<const FieldElement> r) {
  require_same_length(msgs.size(), r.size());
  std::vector<CombinedCiphertext> out;
  out.reserve(msgs.size());
  for (std::size_t i = 0; i < msgs.size(); ++i) {
    out.push_back(encrypt_combined(curve, revoker_pub, guardian_pub, msgs[i], r[i]));
  }
  return out;
}

std::vector<Ciphertext2> encrypt_double_many(const Curve& curve, const CurvePoint& revoker_pub,
                                             const CurvePoint& guardian_pub, std::span<const CurvePoint> msgs,
                                             std::span<const FieldElement> r1, std::span<const FieldElement> r2) {
  require_same_length(msgs.size(), r1.size());
  require_same_length(msgs.size(), r2.size());
  std::vector<Ciphertext2> out;
  out.reserve(msgs.size());
  for (std::size_t i = 0; i < msgs.size(); ++i) {
    out.push_back(encrypt_double(curve, revoker_pub, guardian_pub, msgs[i], r1[i], r2[i]));
  }
  return out;
}

std::vector<SpendHit> scan_spends(std::span<const TransactionPayload> txs, const NullifierTargets& targets,
                                  std::uint64_t first_tx) {
  std::vector<SpendHit> hits;
  for (std::uint64_t t = first_tx; t < txs.size(); ++t) {
    for (const auto& n : txs[t].spent_nullifiers) {
      if (auto it = targets.find(n); it != targets.end()) hits.push_back({n, t, it->second});
    }
  }
  return hits;
}

}  // namespace serial

namespace parallel {

std::vector<CurvePoint> scale_points(const Curve& curve, const FieldElement& k, std::span<const CurvePoint> points) {
  std::vector<CurvePoint> out(points.size());
  const auto              n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = curve.mul(k, points[i]);
  return out;
}

std::vector<CombinedCiphertext> encrypt_combined_many(const Curve& curve, const CurvePoint& revoker_pub,
                                                      const CurvePoint& guardian_pub, std::span<const CurvePoint> msgs,
                                                      std::span<const FieldElement> r) {
  require_same_length(msgs.size(), r.size());
  require_randomness(r);
  const CurvePoint                q = curve.add(revoker_pub, guardian_pub);
  std::vector<CombinedCiphertext> out(msgs.size());
  const auto                      n = static_cast<std::ptrdiff_t>(msgs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = {curve.mul_base(r[i]), curve.add(msgs[i], curve.mul(r[i], q))};
  }
  return out;
}

std::vector<Ciphertext2> encrypt_double_many(const Curve& curve, const CurvePoint& revoker_pub,
                                             const CurvePoint& guardian_pub, std::span<const CurvePoint> msgs,
                                             std::span<const FieldElement> r1, std::span<const FieldElement> r2) {
  require_same_length(msgs.size(), r1.size());
  require_same_length(msgs.size(), r2.size());
  require_randomness(r1);
  require_randomness(r2);
  std::vector<Ciphertext2> out(msgs.size());
  const auto               n = static_cast<std::ptrdiff_t>(msgs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = encrypt_double(curve, revoker_pub, guardian_pub, msgs[i], r1[i], r2[i]);
  }
  return out;
}

std::vector<SpendHit> scan_spends(std::span<const TransactionPayload> txs, const NullifierTargets& targets,
                                  std::uint64_t first_tx) {
  if (first_tx >= txs.size()) return {};
  const auto                         n = static_cast<std::ptrdiff_t>(txs.size() - first_tx);
  std::vector<std::vector<SpendHit>> per_tx(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::uint64_t t = first_tx + static_cast<std::uint64_t>(i);
    for (const auto& nf : txs[t].spent_nullifiers) {
      if (auto it = targets.find(nf); it != targets.end()) per_tx[i].push_back({nf, t, it->second});
    }
  }
  std::vector<SpendHit> hits;
  for (auto& v : per_tx) hits.insert(hits.end(), v.begin(), v.end());
  return hits;
}

}  // namespace parallel

}  // namespace sede::kernels
