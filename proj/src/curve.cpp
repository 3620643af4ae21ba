#include "sede/curve.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sede/error.hpp"
#include "sede/rng.hpp"

namespace sede {

namespace {

// Jacobian point (X, Y, Z) representing (X/Z^2, Y/Z^3); Z = 0 is the identity.
struct Jacobian {
  BigInt X;
  BigInt Y;
  BigInt Z;
};

class JacobianOps {
 public:
  JacobianOps(const PrimeField& f, const BigInt& a) : f_(f), a_(a) {}

  void dbl(Jacobian& P) const {
    if (P.Z == 0 || P.Y == 0) {
      P.Z = 0;
      return;
    }
    BigInt XX   = f_.mul(P.X, P.X);
    BigInt YY   = f_.mul(P.Y, P.Y);
    BigInt YYYY = f_.mul(YY, YY);
    BigInt ZZ   = f_.mul(P.Z, P.Z);
    BigInt S    = f_.mul(f_.reduce(4 * P.X), YY);
    BigInt M    = f_.reduce(3 * XX);
    if (a_ != 0) M = f_.add(M, f_.mul(a_, f_.mul(ZZ, ZZ)));
    BigInt X3 = f_.sub(f_.mul(M, M), f_.reduce(2 * S));
    BigInt Y3 = f_.sub(f_.mul(M, f_.sub(S, X3)), f_.reduce(8 * YYYY));
    BigInt Z3 = f_.mul(f_.reduce(2 * P.Y), P.Z);
    P.X       = std::move(X3);
    P.Y       = std::move(Y3);
    P.Z       = std::move(Z3);
  }

  // P += Q with Q affine and not the identity.
  void add_affine(Jacobian& P, const CurvePoint& Q) const {
    if (P.Z == 0) {
      P = {Q.x(), Q.y(), 1};
      return;
    }
    BigInt Z1Z1 = f_.mul(P.Z, P.Z);
    BigInt U2   = f_.mul(Q.x(), Z1Z1);
    BigInt S2   = f_.mul(Q.y(), f_.mul(P.Z, Z1Z1));
    BigInt H    = f_.sub(U2, P.X);
    BigInt r    = f_.sub(S2, P.Y);
    if (H == 0) {
      if (r == 0) {
        dbl(P);
      } else {
        P.Z = 0;
      }
      return;
    }
    BigInt HH  = f_.mul(H, H);
    BigInt HHH = f_.mul(H, HH);
    BigInt V   = f_.mul(P.X, HH);
    BigInt X3  = f_.sub(f_.sub(f_.mul(r, r), HHH), f_.reduce(2 * V));
    BigInt Y3  = f_.sub(f_.mul(r, f_.sub(V, X3)), f_.mul(P.Y, HHH));
    BigInt Z3  = f_.mul(P.Z, H);
    P.X        = std::move(X3);
    P.Y        = std::move(Y3);
    P.Z        = std::move(Z3);
  }

  CurvePoint to_affine(const Jacobian& P) const {
    if (P.Z == 0) return CurvePoint::identity();
    BigInt zi  = f_.inv(P.Z);
    BigInt zi2 = f_.mul(zi, zi);
    return {f_.mul(P.X, zi2), f_.mul(P.Y, f_.mul(zi2, zi))};
  }

 private:
  const PrimeField& f_;
  const BigInt&     a_;
};

std::string hex_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    fail(ErrorCode::InvalidConfig, std::string("curve config: missing hex field '") + key + "'");
  }
  return j.at(key).get<std::string>();
}

}  // namespace

CurveParams parse_curve_params(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidConfig, std::string("curve config: ") + e.what());
  }
  CurveParams params;
  try {
    params.name  = j.value("name", std::string("custom"));
    params.p     = bigint_from_hex(hex_field(j, "p"));
    params.a     = bigint_from_hex(hex_field(j, "a"));
    params.b     = bigint_from_hex(hex_field(j, "b"));
    params.gx    = bigint_from_hex(hex_field(j, "gx"));
    params.gy    = bigint_from_hex(hex_field(j, "gy"));
    params.n     = bigint_from_hex(hex_field(j, "n"));
    params.kappa = j.value("kappa", 32u);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidConfig) throw;
    fail(ErrorCode::InvalidConfig, e.what());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidConfig, std::string("curve config: ") + e.what());
  }
  return params;
}

CurveParams load_curve_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidConfig, "cannot open curve config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_curve_params(ss.str());
}

std::string curve_params_to_json(const CurveParams& params) {
  nlohmann::ordered_json j;
  j["name"]  = params.name;
  j["p"]     = bigint_to_hex(params.p);
  j["a"]     = bigint_to_hex(params.a);
  j["b"]     = bigint_to_hex(params.b);
  j["gx"]    = bigint_to_hex(params.gx);
  j["gy"]    = bigint_to_hex(params.gy);
  j["n"]     = bigint_to_hex(params.n);
  j["kappa"] = params.kappa;
  return j.dump(2);
}

// ---------------------------------------------------------------------------

Curve::Curve(CurveParams params) : params_(std::move(params)) {
  base_   = std::make_shared<const PrimeField>(params_.p);
  scalar_ = std::make_shared<const PrimeField>(params_.n);

  auto& f   = *base_;
  params_.a = f.reduce(params_.a);
  params_.b = f.reduce(params_.b);
  if (f.reduce(4 * params_.a * params_.a * params_.a + 27 * params_.b * params_.b) == 0) {
    fail(ErrorCode::InvalidConfig, "singular curve");
  }
  if (params_.gx < 0 || params_.gx >= params_.p || params_.gy < 0 || params_.gy >= params_.p) {
    fail(ErrorCode::InvalidConfig, "generator coordinates out of range");
  }
  g_ = CurvePoint(params_.gx, params_.gy);
  if (!contains(g_)) fail(ErrorCode::InvalidConfig, "generator is not on the curve");
  if (!add(mul(params_.n - 1, g_), g_).is_identity()) {
    fail(ErrorCode::InvalidConfig, "n*G is not the identity");
  }
  if (params_.kappa < 2) fail(ErrorCode::InvalidConfig, "kappa must be at least 2");

  max_message_ = (params_.p - params_.kappa) / params_.kappa;
  if (max_message_ < 255) fail(ErrorCode::InvalidConfig, "kappa window leaves no room for a byte");
  // Whole bytes b with 2^(8b) - 1 <= max_message.
  std::size_t bits = mpz_sizeinbase(BigInt(max_message_ + 1).get_mpz_t(), 2) - 1;
  chunk_bytes_     = bits / 8;
}

std::shared_ptr<const Curve> Curve::toy() {
  static const auto curve = std::make_shared<const Curve>(CurveParams{
      .name  = "toy",
      .p     = 65407,
      .a     = 3894,
      .b     = 3354,
      .gx    = 1,
      .gy    = 22237,
      .n     = 65557,
      .kappa = 4,
  });
  return curve;
}

std::shared_ptr<const Curve> Curve::secp256k1() {
  static const auto curve = std::make_shared<const Curve>(CurveParams{
      .name  = "secp256k1",
      .p     = BigInt("fffffffffffffffffffffffffffffffffffffffffffffffffffffffefffffc2f", 16),
      .a     = 0,
      .b     = 7,
      .gx    = BigInt("79be667ef9dcbbac55a06295ce870b07029bfcdb2dce28d959f2815b16f81798", 16),
      .gy    = BigInt("483ada7726a3c4655da4fbfc0e1108a8fd17b448a68554199c47d08ffb10d4b8", 16),
      .n     = BigInt("fffffffffffffffffffffffffffffffebaaedce6af48a03bbfd25e8cd0364141", 16),
      .kappa = 32,
  });
  return curve;
}

std::shared_ptr<const Curve> Curve::by_name(std::string_view name) {
  if (name == "toy") return toy();
  if (name == "secp256k1") return secp256k1();
  fail(ErrorCode::InvalidConfig, "unknown curve '" + std::string(name) + "'");
}

FieldElement Curve::random_scalar(Rng& rng) const { return rng.nonzero_element(scalar_); }

BigInt Curve::rhs(const BigInt& x) const {
  const auto& f = *base_;
  BigInt      r = f.mul(f.mul(x, x), x);
  r             = f.add(r, f.mul(params_.a, x));
  return f.add(r, params_.b);
}

bool Curve::contains(const CurvePoint& P) const {
  if (P.is_identity()) return true;
  if (P.x() < 0 || P.x() >= params_.p || P.y() < 0 || P.y() >= params_.p) return false;
  return base_->mul(P.y(), P.y()) == rhs(P.x());
}

CurvePoint Curve::negate(const CurvePoint& P) const {
  if (P.is_identity()) return P;
  return {P.x(), base_->neg(P.y())};
}

CurvePoint Curve::add(const CurvePoint& P, const CurvePoint& Q) const {
  if (P.is_identity()) return Q;
  if (Q.is_identity()) return P;
  const auto& f = *base_;
  BigInt      lambda;
  if (P.x() == Q.x()) {
    if (P.y() != Q.y() || P.y() == 0) return CurvePoint::identity();
    BigInt num = f.add(f.reduce(3 * f.mul(P.x(), P.x())), params_.a);
    lambda     = f.mul(num, f.inv(f.reduce(2 * P.y())));
  } else {
    lambda = f.mul(f.sub(Q.y(), P.y()), f.inv(f.sub(Q.x(), P.x())));
  }
  BigInt x3 = f.sub(f.sub(f.mul(lambda, lambda), P.x()), Q.x());
  BigInt y3 = f.sub(f.mul(lambda, f.sub(P.x(), x3)), P.y());
  return {x3, y3};
}

CurvePoint Curve::mul(const BigInt& k, const CurvePoint& P) const {
  BigInt e = scalar_->reduce(k);
  if (e == 0 || P.is_identity()) return CurvePoint::identity();

  JacobianOps ops(*base_, params_.a);
  Jacobian    acc{0, 1, 0};
  for (long i = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2)) - 1; i >= 0; --i) {
    ops.dbl(acc);
    if (mpz_tstbit(e.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) ops.add_affine(acc, P);
  }
  return ops.to_affine(acc);
}

// ---------------------------------------------------------------------------

Bytes Curve::encode_point(const CurvePoint& P) const {
  if (P.is_identity()) return Bytes{0x00};
  Bytes out;
  out.reserve(point_size());
  out.push_back(mpz_odd_p(P.y().get_mpz_t()) ? 0x03 : 0x02);
  auto x = bigint_to_bytes(P.x(), base_->byte_length());
  out.insert(out.end(), x.begin(), x.end());
  return out;
}

CurvePoint Curve::decode_point(std::span<const std::uint8_t> bytes) const {
  if (bytes.size() == 1 && bytes[0] == 0x00) return CurvePoint::identity();
  if (bytes.size() != point_size() || (bytes[0] != 0x02 && bytes[0] != 0x03)) {
    fail(ErrorCode::MalformedData, "bad compressed point encoding");
  }
  BigInt x = bigint_from_bytes(bytes.subspan(1));
  if (x >= params_.p) fail(ErrorCode::MalformedData, "point x-coordinate out of range");
  auto y = base_->sqrt(rhs(x));
  if (!y) fail(ErrorCode::NotOnCurve, "x-coordinate has no curve point");
  bool want_odd = bytes[0] == 0x03;
  if (static_cast<bool>(mpz_odd_p(y->get_mpz_t())) != want_odd) *y = base_->neg(*y);
  return {x, *y};
}

std::string Curve::point_to_hex(const CurvePoint& P) const { return to_hex(encode_point(P)); }

CurvePoint Curve::point_from_hex(std::string_view hex) const { return decode_point(from_hex(hex)); }

// ---------------------------------------------------------------------------

CurvePoint Curve::koblitz_encode(const BigInt& message) const {
  if (message < 0 || message > max_message_) {
    fail(ErrorCode::EncodingFailure, "message integer outside the encodable range");
  }
  BigInt start = message * params_.kappa;
  for (unsigned j = 0; j < params_.kappa; ++j) {
    BigInt x = start + j;
    if (auto y = base_->sqrt(rhs(x))) return {x, *y};
  }
  fail(ErrorCode::EncodingFailure, "no curve point in the Koblitz window of " + message.get_str());
}

BigInt Curve::koblitz_decode(const CurvePoint& X) const {
  if (X.is_identity()) fail(ErrorCode::DecodingFailure, "identity carries no message");
  return X.x() / params_.kappa;
}

CurvePoint Curve::koblitz_encode_chunk(std::span<const std::uint8_t> chunk) const {
  if (chunk.size() > chunk_bytes_) fail(ErrorCode::EncodingFailure, "chunk exceeds point capacity");
  return koblitz_encode(bigint_from_bytes(chunk));
}

Bytes Curve::koblitz_decode_chunk(const CurvePoint& X) const {
  BigInt m = koblitz_decode(X);
  if (m >= (BigInt(1) << static_cast<mp_bitcnt_t>(chunk_bytes_ * 8))) {
    fail(ErrorCode::DecodingFailure, "decoded integer exceeds chunk capacity");
  }
  return bigint_to_bytes(m, chunk_bytes_);
}

std::vector<CurvePoint> Curve::encode_message(std::span<const std::uint8_t> message) const {
  if (message.size() > 0xffff) fail(ErrorCode::EncodingFailure, "message longer than 65535 bytes");
  Bytes framed;
  framed.reserve(message.size() + 2 + chunk_bytes_);
  framed.push_back(static_cast<std::uint8_t>(message.size() >> 8));
  framed.push_back(static_cast<std::uint8_t>(message.size() & 0xff));
  framed.insert(framed.end(), message.begin(), message.end());
  while (framed.size() % chunk_bytes_ != 0) framed.push_back(0);

  std::vector<CurvePoint> points;
  points.reserve(framed.size() / chunk_bytes_);
  for (std::size_t off = 0; off < framed.size(); off += chunk_bytes_) {
    points.push_back(koblitz_encode_chunk(std::span(framed).subspan(off, chunk_bytes_)));
  }
  return points;
}

Bytes Curve::decode_message(std::span<const CurvePoint> points) const {
  Bytes framed;
  framed.reserve(points.size() * chunk_bytes_);
  for (const auto& X : points) {
    auto chunk = koblitz_decode_chunk(X);
    framed.insert(framed.end(), chunk.begin(), chunk.end());
  }
  if (framed.size() < 2) fail(ErrorCode::DecodingFailure, "message shorter than its length header");
  std::size_t len = (static_cast<std::size_t>(framed[0]) << 8) | framed[1];
  std::size_t expected_chunks = (len + 2 + chunk_bytes_ - 1) / chunk_bytes_;
  if (expected_chunks != points.size()) fail(ErrorCode::DecodingFailure, "length header disagrees with point count");
  for (std::size_t i = 2 + len; i < framed.size(); ++i) {
    if (framed[i] != 0) fail(ErrorCode::DecodingFailure, "non-zero padding after message");
  }
  return Bytes(framed.begin() + 2, framed.begin() + 2 + static_cast<std::ptrdiff_t>(len));
}

}  // namespace sede
