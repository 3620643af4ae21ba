#include "sede/field.hpp"

#include "sede/error.hpp"

namespace sede {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0x0f]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  if (hex.size() % 2 != 0) fail(ErrorCode::MalformedData, "odd-length hex string");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = hex_value(hex[2 * i]);
    int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) fail(ErrorCode::MalformedData, "invalid hex digit");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

Bytes bigint_to_bytes(const BigInt& value, std::size_t width) {
  if (value < 0) fail(ErrorCode::MalformedData, "negative integer cannot be serialized");
  std::size_t needed = value == 0 ? 0 : (mpz_sizeinbase(value.get_mpz_t(), 2) + 7) / 8;
  if (needed > width) fail(ErrorCode::MalformedData, "integer does not fit in " + std::to_string(width) + " bytes");
  Bytes out(width, 0);
  if (needed > 0) {
    std::size_t written = 0;
    mpz_export(out.data() + (width - needed), &written, 1, 1, 1, 0, value.get_mpz_t());
  }
  return out;
}

BigInt bigint_from_bytes(std::span<const std::uint8_t> bytes) {
  BigInt v;
  if (!bytes.empty()) mpz_import(v.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  return v;
}

BigInt bigint_from_hex(std::string_view hex) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  if (hex.empty()) fail(ErrorCode::MalformedData, "empty hex integer");
  for (char c : hex) {
    if (hex_value(c) < 0) fail(ErrorCode::MalformedData, "invalid hex digit");
  }
  return BigInt(std::string(hex), 16);
}

std::string bigint_to_hex(const BigInt& value) { return value.get_str(16); }

// ---------------------------------------------------------------------------

PrimeField::PrimeField(BigInt modulus) : p_(std::move(modulus)) {
  if (p_ < 3 || mpz_probab_prime_p(p_.get_mpz_t(), 30) == 0) {
    fail(ErrorCode::InvalidConfig, "field modulus must be an odd prime");
  }
  bits_  = mpz_sizeinbase(p_.get_mpz_t(), 2);
  bytes_ = (bits_ + 7) / 8;

  q_ = p_ - 1;
  s_ = 0;
  while (mpz_even_p(q_.get_mpz_t())) {
    q_ >>= 1;
    ++s_;
  }
  z_ = 2;
  while (mpz_legendre(z_.get_mpz_t(), p_.get_mpz_t()) != -1) ++z_;
}

BigInt PrimeField::reduce(const BigInt& v) const {
  BigInt r;
  mpz_mod(r.get_mpz_t(), v.get_mpz_t(), p_.get_mpz_t());
  return r;
}

BigInt PrimeField::add(const BigInt& a, const BigInt& b) const {
  BigInt r = a + b;
  if (r >= p_) r -= p_;
  return r;
}

BigInt PrimeField::sub(const BigInt& a, const BigInt& b) const {
  BigInt r = a - b;
  if (r < 0) r += p_;
  return r;
}

BigInt PrimeField::mul(const BigInt& a, const BigInt& b) const {
  BigInt r = a * b;
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), p_.get_mpz_t());
  return r;
}

BigInt PrimeField::neg(const BigInt& a) const { return a == 0 ? BigInt(0) : BigInt(p_ - a); }

BigInt PrimeField::inv(const BigInt& a) const {
  BigInt r;
  if (a == 0 || mpz_invert(r.get_mpz_t(), a.get_mpz_t(), p_.get_mpz_t()) == 0) {
    fail(ErrorCode::DivisionByZero, "inverse of zero");
  }
  return r;
}

BigInt PrimeField::pow(const BigInt& a, const BigInt& e) const {
  BigInt r;
  mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p_.get_mpz_t());
  return r;
}

bool PrimeField::is_square(const BigInt& a) const {
  return a == 0 || mpz_legendre(a.get_mpz_t(), p_.get_mpz_t()) == 1;
}

std::optional<BigInt> PrimeField::sqrt(const BigInt& a) const {
  if (a == 0) return BigInt(0);
  if (!is_square(a)) return std::nullopt;

  BigInt root;
  if (s_ == 1) {
    root = pow(a, (p_ + 1) / 4);
  } else {
    // Tonelli-Shanks
    unsigned m = s_;
    BigInt   c = pow(z_, q_);
    BigInt   t = pow(a, q_);
    root       = pow(a, (q_ + 1) / 2);
    while (t != 1) {
      unsigned i  = 0;
      BigInt   tt = t;
      while (tt != 1) {
        tt = mul(tt, tt);
        ++i;
      }
      BigInt b = c;
      for (unsigned j = 0; j + i + 1 < m; ++j) b = mul(b, b);
      m    = i;
      c    = mul(b, b);
      t    = mul(t, c);
      root = mul(root, b);
    }
  }
  BigInt other = neg(root);
  return other < root ? other : root;
}

// ---------------------------------------------------------------------------

FieldElement::FieldElement(FieldPtr field, const BigInt& value) : field_(std::move(field)) {
  if (!field_) fail(ErrorCode::InvalidArgument, "field element without a field");
  value_ = field_->reduce(value);
}

FieldElement::FieldElement(FieldPtr field, long value) : FieldElement(std::move(field), BigInt(value)) {}

FieldElement FieldElement::from_bytes(FieldPtr field, std::span<const std::uint8_t> bytes) {
  if (bytes.size() != field->byte_length()) fail(ErrorCode::MalformedData, "field element has wrong width");
  BigInt v = bigint_from_bytes(bytes);
  if (v >= field->modulus()) fail(ErrorCode::MalformedData, "field element is not canonical");
  return {std::move(field), v};
}

FieldElement FieldElement::from_hex(FieldPtr field, std::string_view hex) {
  auto bytes = sede::from_hex(hex);
  return from_bytes(std::move(field), bytes);
}

FieldElement FieldElement::inverse() const { return {field_, field_->inv(value_)}; }

FieldElement FieldElement::pow(const BigInt& e) const { return {field_, field_->pow(value_, e)}; }

Bytes FieldElement::to_bytes() const { return bigint_to_bytes(value_, field_->byte_length()); }

std::string FieldElement::to_hex() const { return sede::to_hex(to_bytes()); }

void FieldElement::check_same_field(const FieldElement& o) const {
  if (!field_ || !o.field_ || !(*field_ == *o.field_)) {
    fail(ErrorCode::InvalidArgument, "arithmetic across different fields");
  }
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
  check_same_field(o);
  value_ = field_->add(value_, o.value_);
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
  check_same_field(o);
  value_ = field_->sub(value_, o.value_);
  return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
  check_same_field(o);
  value_ = field_->mul(value_, o.value_);
  return *this;
}

FieldElement& FieldElement::operator/=(const FieldElement& o) {
  check_same_field(o);
  value_ = field_->mul(value_, field_->inv(o.value_));
  return *this;
}

FieldElement FieldElement::operator-() const { return {field_, field_->neg(value_)}; }

bool operator==(const FieldElement& a, const FieldElement& b) {
  if (a.value_ != b.value_) return false;
  if (!a.field_ || !b.field_) return a.field_ == b.field_;
  return *a.field_ == *b.field_;
}

std::strong_ordering operator<=>(const FieldElement& a, const FieldElement& b) {
  int c = cmp(a.value_, b.value_);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace sede
