#include "sede/signature.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include "sede/error.hpp"
#include "sede/hash.hpp"

namespace sede {

namespace {

Sha256Digest hmac(std::span<const std::uint8_t> key, std::span<const std::uint8_t> data) {
  Sha256Digest out{};
  unsigned int len = 0;
  HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(), data.size(), out.data(), &len);
  return out;
}

template <typename... Parts>
Bytes concat(const Parts&... parts) {
  Bytes out;
  (out.insert(out.end(), std::begin(parts), std::end(parts)), ...);
  return out;
}

class Rfc6979 {
 public:
  Rfc6979(const Curve& curve, const FieldElement& priv, const Sha256Digest& h1) : q_(curve.order()) {
    qlen_ = mpz_sizeinbase(q_.get_mpz_t(), 2);
    rlen_ = (qlen_ + 7) / 8;

    Bytes x  = bigint_to_bytes(priv.value(), rlen_);
    Bytes hb = bits2octets(h1);
    V_.fill(0x01);
    K_.fill(0x00);
    const Bytes zero{0x00}, one{0x01};
    K_ = hmac(K_, concat(V_, zero, x, hb));
    V_ = hmac(K_, V_);
    K_ = hmac(K_, concat(V_, one, x, hb));
    V_ = hmac(K_, V_);
  }

  BigInt bits2int(std::span<const std::uint8_t> b) const {
    BigInt v = bigint_from_bytes(b);
    if (b.size() * 8 > qlen_) v >>= static_cast<mp_bitcnt_t>(b.size() * 8 - qlen_);
    return v;
  }

  BigInt next() {
    for (;;) {
      Bytes t;
      while (t.size() < rlen_) {
        V_ = hmac(K_, V_);
        t.insert(t.end(), V_.begin(), V_.end());
      }
      BigInt k = bits2int(std::span(t).first(rlen_));
      retry();
      if (k >= 1 && k < q_) return k;
    }
  }

 private:
  Bytes bits2octets(std::span<const std::uint8_t> b) const {
    BigInt z = bits2int(b);
    if (z >= q_) z -= q_;
    return bigint_to_bytes(z, rlen_);
  }

  void retry() {
    const Bytes zero{0x00};
    K_ = hmac(K_, concat(V_, zero));
    V_ = hmac(K_, V_);
  }

  BigInt       q_;
  std::size_t  qlen_ = 0;
  std::size_t  rlen_ = 0;
  Sha256Digest V_{};
  Sha256Digest K_{};
};

}  // namespace

Signature ecdsa_sign(const Curve& curve, const FieldElement& priv, std::span<const std::uint8_t> message) {
  if (priv.is_zero()) fail(ErrorCode::InvalidArgument, "signing key must be nonzero");
  const auto& n  = *curve.scalar_field();
  auto        h1 = sha256(message);
  Rfc6979     nonces(curve, priv, h1);
  BigInt      e = n.reduce(nonces.bits2int(h1));

  for (;;) {
    BigInt     k = nonces.next();
    CurvePoint R = curve.mul(k, curve.generator());
    BigInt     r = n.reduce(R.x());
    if (r == 0) continue;
    BigInt s = n.mul(n.inv(k), n.add(e, n.mul(r, priv.value())));
    if (s == 0) continue;
    return {r, s};
  }
}

bool ecdsa_verify(const Curve& curve, const CurvePoint& pub, std::span<const std::uint8_t> message,
                  const Signature& sig) {
  const auto& n = *curve.scalar_field();
  if (pub.is_identity() || !curve.contains(pub)) return false;
  if (sig.r < 1 || sig.r >= n.modulus() || sig.s < 1 || sig.s >= n.modulus()) return false;

  auto    h1    = sha256(message);
  BigInt  e     = bigint_from_bytes(h1);
  std::size_t qlen = n.bit_length();
  if (256 > qlen) e >>= static_cast<mp_bitcnt_t>(256 - qlen);
  e = n.reduce(e);

  BigInt     w  = n.inv(sig.s);
  CurvePoint X  = curve.add(curve.mul(n.mul(e, w), curve.generator()), curve.mul(n.mul(sig.r, w), pub));
  if (X.is_identity()) return false;
  return n.reduce(X.x()) == sig.r;
}

}  // namespace sede
