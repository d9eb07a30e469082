#include "ellhomog/field.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "ellhomog/errors.hpp"

namespace ellhomog {

namespace {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

// ---------------------------------------------------------------- GF(p)[x]

using Poly = std::vector<u32>;  // little-endian, trimmed

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

u32 inv_mod(u32 a, u32 p) {
  long long t = 0, nt = 1, r = p, nr = a % p;
  while (nr != 0) {
    long long q = r / nr;
    t -= q * nt;
    std::swap(t, nt);
    r -= q * nr;
    std::swap(r, nr);
  }
  if (r != 1) throw UsageError("element not invertible mod p");
  if (t < 0) t += p;
  return static_cast<u32>(t);
}

Poly poly_mod(Poly a, const Poly& f, u32 p) {
  trim(a);
  const std::size_t df = f.size() - 1;
  const u32 lead_inv = inv_mod(f.back(), p);
  while (a.size() >= f.size()) {
    const u64 c = static_cast<u64>(a.back()) * lead_inv % p;
    const std::size_t shift = a.size() - f.size();
    for (std::size_t i = 0; i <= df; ++i) {
      a[shift + i] = static_cast<u32>((a[shift + i] + p - c * f[i] % p) % p);
    }
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, u32 p) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] = static_cast<u32>((out[i + j] + static_cast<u64>(a[i]) * b[j]) % p);
    }
  }
  return poly_mod(std::move(out), f, p);
}

Poly poly_gcd(Poly a, Poly b, u32 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// x^(p^k) mod f by repeated Frobenius.
Poly frobenius_power(const Poly& f, u32 p, int k) {
  Poly x = poly_mod(Poly{0, 1}, f, p);
  for (int step = 0; step < k; ++step) {
    Poly acc{1};
    Poly base = x;
    for (u32 e = p; e > 0; e >>= 1) {
      if (e & 1U) acc = poly_mulmod(acc, base, f, p);
      base = poly_mulmod(base, base, f, p);
    }
    x = std::move(acc);
  }
  return x;
}

// Rabin's test.
bool is_irreducible(const Poly& f, u32 p) {
  const int m = static_cast<int>(f.size()) - 1;
  if (m == 1) return true;
  Poly top = frobenius_power(f, p, m);
  Poly diff = top;
  diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
  diff[1] = (diff[1] + p - 1) % p;
  trim(diff);
  if (!diff.empty()) return false;
  for (int l = 2; l <= m; ++l) {
    if (m % l != 0) continue;
    bool prime = true;
    for (int d = 2; d * d <= l; ++d) prime = prime && (l % d != 0);
    if (!prime) continue;
    Poly h = frobenius_power(f, p, m / l);
    h.resize(std::max<std::size_t>(h.size(), 2), 0);
    h[1] = (h[1] + p - 1) % p;
    trim(h);
    Poly g = poly_gcd(f, h, p);
    if (g.size() != 1) return false;
  }
  return true;
}

bool is_prime(u32 n) {
  if (n < 2) return false;
  for (u32 d = 2; static_cast<u64>(d) * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------- GF(p^m)

struct Gf {
  u32 p;
  int m;
  const FiniteCoords& mod;  // c_0..c_{m-1}

  FiniteCoords add(const FiniteCoords& a, const FiniteCoords& b) const {
    FiniteCoords out(m);
    for (int i = 0; i < m; ++i) out[i] = (a[i] + b[i]) % p;
    return out;
  }
  FiniteCoords sub(const FiniteCoords& a, const FiniteCoords& b) const {
    FiniteCoords out(m);
    for (int i = 0; i < m; ++i) out[i] = (a[i] + p - b[i]) % p;
    return out;
  }
  FiniteCoords neg(const FiniteCoords& a) const {
    FiniteCoords out(m);
    for (int i = 0; i < m; ++i) out[i] = (p - a[i]) % p;
    return out;
  }
  FiniteCoords mul(const FiniteCoords& a, const FiniteCoords& b) const {
    if (m == 1) return {static_cast<u32>(static_cast<u64>(a[0]) * b[0] % p)};
    std::vector<u64> prod(2 * m - 1, 0);
    for (int i = 0; i < m; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; j < m; ++j) prod[i + j] = (prod[i + j] + static_cast<u64>(a[i]) * b[j]) % p;
    }
    // x^m = -sum c_i x^i
    for (int k = 2 * m - 2; k >= m; --k) {
      const u64 c = prod[k];
      if (c == 0) continue;
      prod[k] = 0;
      for (int i = 0; i < m; ++i) prod[k - m + i] = (prod[k - m + i] + (p - mod[i]) * c) % p;
    }
    FiniteCoords out(m);
    for (int i = 0; i < m; ++i) out[i] = static_cast<u32>(prod[i]);
    return out;
  }
  FiniteCoords one() const {
    FiniteCoords out(m, 0);
    out[0] = 1 % p;
    return out;
  }
  bool is_zero(const FiniteCoords& a) const {
    return std::all_of(a.begin(), a.end(), [](u32 c) { return c == 0; });
  }
  FiniteCoords pow(FiniteCoords base, mpz_class e) const {
    FiniteCoords acc = one();
    while (e > 0) {
      if (mpz_odd_p(e.get_mpz_t())) acc = mul(acc, base);
      base = mul(base, base);
      e >>= 1;
    }
    return acc;
  }
  mpz_class order() const {
    mpz_class q;
    mpz_ui_pow_ui(q.get_mpz_t(), p, static_cast<unsigned long>(m));
    return q;
  }
  FiniteCoords inverse(const FiniteCoords& a) const {
    if (is_zero(a)) throw UsageError("division by zero");
    return pow(a, order() - 2);
  }
  u64 encode(const FiniteCoords& a) const {
    u64 code = 0;
    for (int i = m - 1; i >= 0; --i) code = code * p + a[i];
    return code;
  }
  FiniteCoords decode(u64 code) const {
    FiniteCoords out(m);
    for (int i = 0; i < m; ++i) {
      out[i] = static_cast<u32>(code % p);
      code /= p;
    }
    return out;
  }

  std::optional<FiniteCoords> sqrt(const FiniteCoords& x) const {
    if (is_zero(x)) return x;
    if (p == 2) {
      FiniteCoords r = x;
      for (int i = 0; i < m - 1; ++i) r = mul(r, r);
      return r;
    }
    const mpz_class q = order();
    const mpz_class half = (q - 1) / 2;
    if (pow(x, half) != one()) return std::nullopt;
    // Tonelli-Shanks
    mpz_class Q = q - 1;
    unsigned long S = 0;
    while (mpz_even_p(Q.get_mpz_t())) {
      Q >>= 1;
      ++S;
    }
    FiniteCoords z;
    const FiniteCoords minus_one = neg(one());
    for (u64 code = 2;; ++code) {
      z = decode(code);
      if (pow(z, half) == minus_one) break;
    }
    unsigned long M = S;
    FiniteCoords c = pow(z, Q);
    FiniteCoords t = pow(x, Q);
    FiniteCoords r = pow(x, (Q + 1) / 2);
    const FiniteCoords id = one();
    while (t != id) {
      unsigned long i = 0;
      FiniteCoords tt = t;
      while (tt != id) {
        tt = mul(tt, tt);
        ++i;
      }
      FiniteCoords b = c;
      for (unsigned long j = 0; j + i + 1 < M; ++j) b = mul(b, b);
      M = i;
      c = mul(b, b);
      t = mul(t, c);
      r = mul(r, b);
    }
    return r;
  }
};

Gf gf_of(const FieldDescriptor& f) { return Gf{f.characteristic(), f.degree(), f.modulus()}; }

// ---------------------------------------------------------------- Q towers

using Radicands = std::vector<RationalCoords>;

bool all_zero(const RationalCoords& a) {
  return std::all_of(a.begin(), a.end(), [](const mpq_class& c) { return sgn(c) == 0; });
}

int depth_of(std::size_t size) {
  int k = 0;
  while ((std::size_t{1} << k) < size) ++k;
  return k;
}

RationalCoords half(const RationalCoords& a, bool upper) {
  const std::size_t h = a.size() / 2;
  return upper ? RationalCoords(a.begin() + static_cast<std::ptrdiff_t>(h), a.end())
               : RationalCoords(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(h));
}

RationalCoords join(const RationalCoords& lo, const RationalCoords& hi) {
  RationalCoords out(lo);
  out.insert(out.end(), hi.begin(), hi.end());
  return out;
}

RationalCoords tadd(const RationalCoords& a, const RationalCoords& b) {
  RationalCoords out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

RationalCoords tsub(const RationalCoords& a, const RationalCoords& b) {
  RationalCoords out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

RationalCoords tneg(const RationalCoords& a) {
  RationalCoords out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
  return out;
}

RationalCoords tscale(const RationalCoords& a, const mpq_class& s) {
  RationalCoords out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * s;
  return out;
}

RationalCoords tzero(std::size_t n) { return RationalCoords(n, mpq_class(0)); }

RationalCoords tmul(const Radicands& rad, const RationalCoords& a, const RationalCoords& b) {
  if (a.size() == 1) return {a[0] * b[0]};
  const int k = depth_of(a.size());
  const RationalCoords& d = rad[static_cast<std::size_t>(k - 1)];
  RationalCoords a0 = half(a, false), a1 = half(a, true);
  RationalCoords b0 = half(b, false), b1 = half(b, true);
  const bool a1z = all_zero(a1), b1z = all_zero(b1);
  if (a1z && b1z) return join(tmul(rad, a0, b0), tzero(a0.size()));
  if (a1z) return join(tmul(rad, a0, b0), tmul(rad, a0, b1));
  if (b1z) return join(tmul(rad, a0, b0), tmul(rad, a1, b0));
  RationalCoords m0 = tmul(rad, a0, b0);
  RationalCoords m1 = tmul(rad, a1, b1);
  RationalCoords cross = tadd(tmul(rad, a0, b1), tmul(rad, a1, b0));
  return join(tadd(m0, tmul(rad, d, m1)), cross);
}

RationalCoords tinv(const Radicands& rad, const RationalCoords& a) {
  if (a.size() == 1) {
    if (sgn(a[0]) == 0) throw UsageError("division by zero");
    return {1 / a[0]};
  }
  const int k = depth_of(a.size());
  const RationalCoords& d = rad[static_cast<std::size_t>(k - 1)];
  RationalCoords a0 = half(a, false), a1 = half(a, true);
  RationalCoords norm = tsub(tmul(rad, a0, a0), tmul(rad, d, tmul(rad, a1, a1)));
  RationalCoords ni = tinv(rad, norm);
  return join(tmul(rad, a0, ni), tneg(tmul(rad, a1, ni)));
}

std::optional<mpq_class> rational_sqrt(const mpq_class& x) {
  if (sgn(x) < 0) return std::nullopt;
  const mpz_class& num = x.get_num();
  const mpz_class& den = x.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  mpq_class r(rn, rd);
  r.canonicalize();
  return r;
}

std::optional<RationalCoords> tsqrt(const Radicands& rad, const RationalCoords& x) {
  if (x.size() == 1) {
    auto r = rational_sqrt(x[0]);
    if (!r) return std::nullopt;
    return RationalCoords{*r};
  }
  const int k = depth_of(x.size());
  const RationalCoords& d = rad[static_cast<std::size_t>(k - 1)];
  RationalCoords x0 = half(x, false), x1 = half(x, true);
  const std::size_t h = x0.size();
  if (all_zero(x1)) {
    if (auto s = tsqrt(rad, x0)) return join(*s, tzero(h));
    if (auto s = tsqrt(rad, tmul(rad, x0, tinv(rad, d)))) return join(tzero(h), *s);
    return std::nullopt;
  }
  RationalCoords n2 = tsub(tmul(rad, x0, x0), tmul(rad, d, tmul(rad, x1, x1)));
  auto n = tsqrt(rad, n2);
  if (!n) return std::nullopt;
  const mpq_class one_half(1, 2);
  for (int sign : {1, -1}) {
    RationalCoords t = tscale(sign > 0 ? tadd(x0, *n) : tsub(x0, *n), one_half);
    if (all_zero(t)) continue;
    auto u = tsqrt(rad, t);
    if (!u) continue;
    RationalCoords v = tmul(rad, x1, tinv(rad, tscale(*u, mpq_class(2))));
    RationalCoords root = join(*u, v);
    if (tmul(rad, root, root) == x) return root;
  }
  return std::nullopt;
}

void canonical_sign(RationalCoords& r) {
  for (const auto& c : r) {
    if (sgn(c) == 0) continue;
    if (sgn(c) < 0) r = tneg(r);
    return;
  }
}

std::vector<const FieldDescriptor*> chain_to(const FieldDescriptor& start, int depth) {
  std::vector<const FieldDescriptor*> chain;
  const FieldDescriptor* f = &start;
  while (f->depth() > depth) {
    chain.push_back(f);
    f = f->parent().get();
  }
  chain.push_back(f);
  return chain;  // start first, ancestor at `depth` last
}

std::string rational_string(const mpq_class& c) { return c.get_str(); }

// v = s^2 k with k carrying the sign; trial division removes square factors
// of primes below 10^5 and a square cofactor.
std::pair<mpz_class, mpz_class> square_free_split(mpz_class v) {
  mpz_class s = 1, k = sgn(v) < 0 ? -1 : 1;
  v = abs(v);
  for (unsigned long d = 2; d < 100000 && d * d <= v; ++d) {
    unsigned e = 0;
    while (mpz_divisible_ui_p(v.get_mpz_t(), d)) {
      v /= d;
      ++e;
    }
    for (unsigned i = 0; i < e / 2; ++i) s *= d;
    if (e % 2 == 1) k *= d;
  }
  if (mpz_perfect_square_p(v.get_mpz_t())) {
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
    s *= r;
  } else {
    k *= v;
  }
  return {s, k};
}

}  // namespace

// ---------------------------------------------------------------- descriptor

Field FieldDescriptor::rationals(int max_depth) {
  auto* f = new FieldDescriptor();
  f->kind_ = FieldKind::RationalTower;
  f->max_depth_ = max_depth;
  return Field(f);
}

Field FieldDescriptor::galois(std::uint32_t p, int m, int max_depth) {
  if (!is_prime(p)) throw UsageError("characteristic " + std::to_string(p) + " is not prime");
  if (m < 1) throw UsageError("extension degree must be >= 1");
  auto* f = new FieldDescriptor();
  f->kind_ = FieldKind::Finite;
  f->p_ = p;
  f->m_ = m;
  f->max_depth_ = max_depth;
  f->modulus_ = least_irreducible(p, m);
  return Field(f);
}

std::uint64_t FieldDescriptor::order() const {
  if (!is_finite()) throw UsageError("order of an infinite field");
  u64 q = 1;
  for (int i = 0; i < m_; ++i) {
    if (q > std::numeric_limits<u64>::max() / p_) throw BoundExceeded("field order overflows 64 bits");
    q *= p_;
  }
  return q;
}

std::size_t FieldDescriptor::coordinate_count() const {
  return is_finite() ? static_cast<std::size_t>(m_) : (std::size_t{1} << depth_);
}

bool FieldDescriptor::same_as(const FieldDescriptor& other) const {
  if (this == &other) return true;
  if (kind_ != other.kind_ || depth_ != other.depth_) return false;
  if (is_finite()) return p_ == other.p_ && m_ == other.m_ && modulus_ == other.modulus_;
  return radicands_ == other.radicands_;
}

bool FieldDescriptor::extends(const FieldDescriptor& other) const {
  if (kind_ != other.kind_ || depth_ < other.depth_) return false;
  const FieldDescriptor* f = this;
  while (f->depth_ > other.depth_) f = f->parent_.get();
  return f->same_as(other);
}

std::string FieldDescriptor::name() const {
  std::ostringstream os;
  if (is_finite()) {
    os << "GF(" << p_;
    if (m_ > 1) os << "^" << m_;
    os << ")";
    return os.str();
  }
  if (depth_ == 0) return "Q";
  os << "Q(";
  for (int k = 0; k < depth_; ++k) {
    if (k) os << ", ";
    const FieldDescriptor* level = this;
    while (level->depth_ > k) level = level->parent_.get();
    // non-owning handle; the element does not outlive this call
    Field lf(std::shared_ptr<const FieldDescriptor>{}, level);
    os << "sqrt(" << FieldElement(lf, radicands_[static_cast<std::size_t>(k)]).to_string() << ")";
  }
  os << ")";
  return os.str();
}

Field FieldDescriptor::with_radicand(const Field& base, RationalCoords radicand) {
  if (base->is_finite()) throw UsageError("radicands apply to rational towers only");
  if (base->depth_ + 1 > base->max_depth_) {
    throw BoundExceeded("tower depth bound " + std::to_string(base->max_depth_) + " exceeded");
  }
  if (radicand.size() != base->coordinate_count()) throw UsageError("radicand has wrong coordinate count");
  auto* f = new FieldDescriptor(*base);
  f->depth_ = base->depth_ + 1;
  f->parent_ = base;
  f->radicands_.push_back(std::move(radicand));
  return Field(f);
}

Field FieldDescriptor::quadratic_extension(const Field& base) {
  if (!base->is_finite()) throw UsageError("quadratic_extension applies to finite fields");
  if (base->depth_ + 1 > base->max_depth_) {
    throw BoundExceeded("extension depth bound " + std::to_string(base->max_depth_) + " exceeded");
  }
  auto* f = new FieldDescriptor();
  f->kind_ = FieldKind::Finite;
  f->p_ = base->p_;
  f->m_ = 2 * base->m_;
  f->depth_ = base->depth_ + 1;
  f->max_depth_ = base->max_depth_;
  f->parent_ = base;
  f->modulus_ = least_irreducible(f->p_, f->m_);
  // Embed: the smallest-encoding root of the old modulus.
  const Gf gf = gf_of(*f);
  const u64 q = f->order();
  if (q > (u64{1} << 24)) throw BoundExceeded("finite extension too large to embed by search");
  for (u64 code = 0; code < q; ++code) {
    FiniteCoords z = gf.decode(code);
    FiniteCoords acc = gf.one();  // Horner with the monic top coefficient
    for (int i = base->m_ - 1; i >= 0; --i) {
      FiniteCoords c(static_cast<std::size_t>(f->m_), 0);
      c[0] = base->modulus_[static_cast<std::size_t>(i)];
      acc = gf.add(gf.mul(acc, z), c);
    }
    if (gf.is_zero(acc)) {
      f->embedding_ = z;
      return Field(f);
    }
  }
  delete f;
  throw VerificationFailed("old modulus has no root in the quadratic extension");
}

FiniteCoords least_irreducible(std::uint32_t p, int m) {
  if (m == 1) return {0};
  Poly f(static_cast<std::size_t>(m) + 1, 0);
  f[static_cast<std::size_t>(m)] = 1;
  u64 limit = 1;
  for (int i = 0; i < m; ++i) {
    if (limit > (u64{1} << 40) / p) throw BoundExceeded("irreducible search too large");
    limit *= p;
  }
  for (u64 code = 0; code < limit; ++code) {
    u64 c = code;
    for (int i = 0; i < m; ++i) {
      f[static_cast<std::size_t>(i)] = static_cast<u32>(c % p);
      c /= p;
    }
    if (f[0] == 0) continue;
    if (is_irreducible(f, p)) return FiniteCoords(f.begin(), f.end() - 1);
  }
  throw VerificationFailed("no irreducible polynomial found");
}

Field common_field(const Field& a, const Field& b) {
  if (!a || !b) throw UsageError("uninitialized field element");
  if (a.get() == b.get()) return a;
  if (a->extends(*b)) return a;
  if (b->extends(*a)) return b;
  throw UsageError("fields " + a->name() + " and " + b->name() + " are unrelated");
}

// ---------------------------------------------------------------- elements

FieldElement::FieldElement(Field field, RationalCoords coords) : field_(std::move(field)), q_(std::move(coords)) {
  if (field_ && (field_->is_finite() || q_.size() != field_->coordinate_count())) {
    throw UsageError("rational coordinates do not fit field");
  }
}

FieldElement::FieldElement(Field field, FiniteCoords coords) : field_(std::move(field)), f_(std::move(coords)) {
  if (!field_ || !field_->is_finite() || f_.size() != field_->coordinate_count()) {
    throw UsageError("finite coordinates do not fit field");
  }
  for (auto& c : f_) c %= field_->characteristic();
}

FieldElement FieldElement::zero(const Field& field) { return from_int(field, 0); }
FieldElement FieldElement::one(const Field& field) { return from_int(field, 1); }

FieldElement FieldElement::from_int(const Field& field, long long value) {
  return from_rational(field, mpq_class(mpz_class(std::to_string(value))));
}

FieldElement FieldElement::from_rational(const Field& field, const mpq_class& value) {
  if (!field->is_finite()) {
    RationalCoords c = tzero(field->coordinate_count());
    c[0] = value;
    return FieldElement(field, std::move(c));
  }
  const u32 p = field->characteristic();
  const u32 num = static_cast<u32>(mpz_fdiv_ui(value.get_num_mpz_t(), p));
  const u32 den = static_cast<u32>(mpz_fdiv_ui(value.get_den_mpz_t(), p));
  if (den == 0) throw UsageError("denominator vanishes in characteristic " + std::to_string(p));
  FiniteCoords c(field->coordinate_count(), 0);
  c[0] = static_cast<u32>(static_cast<u64>(num) * inv_mod(den, p) % p);
  return FieldElement(field, std::move(c));
}

FieldElement FieldElement::from_encoding(const Field& field, std::uint64_t code) {
  if (!field->is_finite()) throw UsageError("encodings exist for finite fields only");
  return FieldElement(field, gf_of(*field).decode(code));
}

bool FieldElement::is_zero() const {
  if (!field_) throw UsageError("uninitialized field element");
  if (field_->is_finite()) return gf_of(*field_).is_zero(f_);
  return all_zero(q_);
}

FieldElement FieldElement::lifted(const Field& target) const {
  if (!field_) throw UsageError("uninitialized field element");
  if (field_.get() == target.get()) return *this;
  if (!target->extends(*field_)) {
    throw UsageError("cannot lift from " + field_->name() + " to " + target->name());
  }
  if (!target->is_finite()) {
    RationalCoords c = tzero(target->coordinate_count());
    std::copy(q_.begin(), q_.end(), c.begin());
    return FieldElement(target, std::move(c));
  }
  auto chain = chain_to(*target, field_->depth());
  FiniteCoords cur = f_;
  for (std::size_t idx = chain.size() - 1; idx-- > 0;) {
    const FieldDescriptor& up = *chain[idx];
    const Gf gf = gf_of(up);
    FiniteCoords acc(static_cast<std::size_t>(up.degree()), 0);
    for (std::size_t i = cur.size(); i-- > 0;) {
      FiniteCoords c(static_cast<std::size_t>(up.degree()), 0);
      c[0] = cur[i];
      acc = gf.add(gf.mul(acc, up.parent_generator_image()), c);
    }
    cur = std::move(acc);
  }
  return FieldElement(target, std::move(cur));
}

FieldElement FieldElement::operator-() const {
  if (!field_) throw UsageError("uninitialized field element");
  if (field_->is_finite()) return FieldElement(field_, gf_of(*field_).neg(f_));
  return FieldElement(field_, tneg(q_));
}

FieldElement FieldElement::inverse() const {
  if (!field_) throw UsageError("uninitialized field element");
  if (field_->is_finite()) return FieldElement(field_, gf_of(*field_).inverse(f_));
  return FieldElement(field_, tinv(field_->radicands(), q_));
}

FieldElement FieldElement::pow(long long exponent) const {
  FieldElement base = exponent < 0 ? inverse() : *this;
  unsigned long long e = exponent < 0 ? static_cast<unsigned long long>(-(exponent + 1)) + 1
                                      : static_cast<unsigned long long>(exponent);
  FieldElement acc = one(field_);
  while (e > 0) {
    if (e & 1ULL) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

FieldElement& FieldElement::operator+=(const FieldElement& rhs) {
  Field f = common_field(field_, rhs.field_);
  FieldElement r = rhs.lifted(f);
  if (field_.get() != f.get()) *this = lifted(f);
  if (f->is_finite()) {
    f_ = gf_of(*f).add(f_, r.f_);
  } else {
    for (std::size_t i = 0; i < q_.size(); ++i) q_[i] += r.q_[i];
  }
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& rhs) {
  Field f = common_field(field_, rhs.field_);
  FieldElement r = rhs.lifted(f);
  if (field_.get() != f.get()) *this = lifted(f);
  if (f->is_finite()) {
    f_ = gf_of(*f).sub(f_, r.f_);
  } else {
    for (std::size_t i = 0; i < q_.size(); ++i) q_[i] -= r.q_[i];
  }
  return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& rhs) {
  Field f = common_field(field_, rhs.field_);
  FieldElement r = rhs.lifted(f);
  if (field_.get() != f.get()) *this = lifted(f);
  if (f->is_finite()) {
    f_ = gf_of(*f).mul(f_, r.f_);
  } else {
    q_ = tmul(f->radicands(), q_, r.q_);
  }
  return *this;
}

FieldElement& FieldElement::operator/=(const FieldElement& rhs) {
  Field f = common_field(field_, rhs.field_);
  return *this *= rhs.lifted(f).inverse();
}

bool operator==(const FieldElement& lhs, const FieldElement& rhs) {
  Field f = common_field(lhs.field_, rhs.field_);
  FieldElement a = lhs.lifted(f), b = rhs.lifted(f);
  return f->is_finite() ? a.f_ == b.f_ : a.q_ == b.q_;
}

std::uint64_t FieldElement::encoding() const {
  if (!field_ || !field_->is_finite()) throw UsageError("encodings exist for finite fields only");
  return gf_of(*field_).encode(f_);
}

std::vector<std::string> FieldElement::coordinate_strings() const {
  std::vector<std::string> out;
  if (field_->is_finite()) {
    for (u32 c : f_) out.push_back(std::to_string(c));
  } else {
    for (const auto& c : q_) out.push_back(rational_string(c));
  }
  return out;
}

std::string FieldElement::to_string() const {
  if (!field_) return "<unset>";
  std::ostringstream os;
  bool first = true;
  if (field_->is_finite()) {
    if (field_->degree() == 1) return std::to_string(f_[0]);
    for (std::size_t i = 0; i < f_.size(); ++i) {
      if (f_[i] == 0) continue;
      if (!first) os << "+";
      first = false;
      if (i == 0 || f_[i] != 1) os << f_[i];
      if (i > 0) os << (f_[i] != 1 ? "*" : "") << "x" << (i > 1 ? "^" + std::to_string(i) : "");
    }
    return first ? "0" : os.str();
  }
  for (std::size_t i = 0; i < q_.size(); ++i) {
    const mpq_class& c = q_[i];
    if (sgn(c) == 0) continue;
    std::string gens;
    for (int k = 0; (std::size_t{1} << k) <= i; ++k) {
      if (i & (std::size_t{1} << k)) gens += "*s" + std::to_string(k + 1);
    }
    mpq_class mag = abs(c);
    if (first) {
      if (sgn(c) < 0) os << "-";
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    if (gens.empty()) {
      os << mag.get_str();
    } else if (mag == 1) {
      os << gens.substr(1);
    } else {
      os << mag.get_str() << gens;
    }
  }
  return first ? "0" : os.str();
}

std::optional<mpq_class> FieldElement::as_rational() const {
  if (!field_ || field_->is_finite()) return std::nullopt;
  for (std::size_t i = 1; i < q_.size(); ++i) {
    if (sgn(q_[i]) != 0) return std::nullopt;
  }
  return q_[0];
}

// ---------------------------------------------------------------- roots

std::optional<FieldElement> square_root(const FieldElement& x) {
  const Field& f = x.field();
  if (!f) throw UsageError("uninitialized field element");
  if (f->is_finite()) {
    const Gf gf = gf_of(*f);
    auto r = gf.sqrt(x.finite_coordinates());
    if (!r) return std::nullopt;
    FiniteCoords other = gf.neg(*r);
    if (gf.encode(other) < gf.encode(*r)) r = other;
    return FieldElement(f, std::move(*r));
  }
  auto r = tsqrt(f->radicands(), x.rational_coordinates());
  if (!r) return std::nullopt;
  canonical_sign(*r);
  return FieldElement(f, std::move(*r));
}

SqrtExtension sqrt_extend(const FieldElement& x, const Field& field) {
  FieldElement xf = x.lifted(field);
  if (auto r = square_root(xf)) return {*r, field};
  if (!field->is_finite()) {
    // A rational radicand n/d is replaced by the square-free part k of n*d, so
    // that sqrt(n/d) = (s/d) sqrt(k).
    RationalCoords radicand = xf.rational_coordinates();
    mpq_class scale = 1;
    if (auto q = xf.as_rational()) {
      const mpz_class& den = q->get_den();
      auto [square, kernel] = square_free_split(mpz_class(q->get_num() * den));
      radicand = tzero(field->coordinate_count());
      radicand[0] = mpq_class(kernel);
      scale = mpq_class(square, den);
      scale.canonicalize();
    }
    Field ext = FieldDescriptor::with_radicand(field, std::move(radicand));
    RationalCoords g = tzero(ext->coordinate_count());
    g[field->coordinate_count()] = scale;
    FieldElement root(ext, std::move(g));
    if (root * root != xf) throw VerificationFailed("adjoined root does not square to its radicand");
    return {root, ext};
  }
  Field ext = FieldDescriptor::quadratic_extension(field);
  auto r = square_root(xf.lifted(ext));
  if (!r) throw VerificationFailed("no square root in the quadratic extension");
  return {*r, ext};
}

}  // namespace ellhomog
