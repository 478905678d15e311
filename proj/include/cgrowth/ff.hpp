#pragma once

// Finite fields F_{p^k}, univariate polynomials over them, factorization and
// extension fields.
//
// An element is stored as a code in [0, q). The coefficient vector
// (c_0, ..., c_{k-1}) of the residue c_0 + c_1 x + ... maps to the code
// c_0 p^{k-1} + c_1 p^{k-2} + ... + c_{k-1}, so numeric order on codes is the
// lexicographic order on coefficient vectors (low degree first). This order
// is the tie-breaker for every "least" choice elsewhere in the library.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cgrowth/error.hpp"
#include "cgrowth/rng.hpp"

namespace cgrowth {

inline constexpr std::uint64_t kDefaultFieldCap = std::uint64_t{1} << 20;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

/// Returns (p, k) with q = p^k, or nullopt when q is not a prime power.
inline std::optional<std::pair<std::uint32_t, std::uint32_t>> prime_power(std::uint64_t q) {
  if (q < 2) return std::nullopt;
  std::uint64_t p = 0;
  for (std::uint64_t d = 2; d * d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      break;
    }
  }
  if (p == 0) return std::make_pair(static_cast<std::uint32_t>(q), 1u);
  std::uint32_t k = 0;
  while (q % p == 0) {
    q /= p;
    ++k;
  }
  if (q != 1) return std::nullopt;
  return std::make_pair(static_cast<std::uint32_t>(p), k);
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

class Field;
using FieldPtr = std::shared_ptr<Field const>;

class Field {
 public:
  using Elem = std::uint32_t;

  /// F_{p^k} with the lexicographically least monic irreducible modulus.
  static FieldPtr make(std::uint32_t p, std::uint32_t k, std::uint64_t cap = kDefaultFieldCap);

  /// F_q for a prime power q.
  static FieldPtr of_order(std::uint64_t q, std::uint64_t cap = kDefaultFieldCap) {
    auto pk = prime_power(q);
    if (!pk) fail(Errc::NonPrime, "field order " + std::to_string(q) + " is not a prime power");
    return make(pk->first, pk->second, cap);
  }

  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t k() const noexcept { return k_; }
  std::uint32_t q() const noexcept { return q_; }
  /// Monic modulus over F_p, low degree first, length k + 1. For k = 1 this is x.
  std::vector<std::uint32_t> const& modulus() const noexcept { return modulus_; }
  bool is_prime_field() const noexcept { return k_ == 1; }

  Elem zero() const noexcept { return 0; }
  Elem one() const noexcept { return one_; }
  /// A fixed generator of the multiplicative group.
  Elem primitive() const noexcept { return exp_[1]; }

  std::vector<std::uint32_t> coeffs(Elem a) const {
    std::vector<std::uint32_t> c(k_);
    for (std::uint32_t i = k_; i-- > 0;) {
      c[i] = a % p_;
      a /= p_;
    }
    return c;
  }

  Elem from_coeffs(std::span<std::uint32_t const> c) const {
    if (c.size() != k_) fail(Errc::BadEncoding, "expected " + std::to_string(k_) + " coefficients");
    Elem a = 0;
    for (std::uint32_t i = 0; i < k_; ++i) {
      if (c[i] >= p_) fail(Errc::BadEncoding, "coefficient out of range");
      a = a * p_ + c[i];
    }
    return a;
  }

  /// Image of an integer in the prime subfield.
  Elem from_int(long long v) const {
    long long r = v % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return static_cast<Elem>(r) * one_;
  }

  Elem add(Elem a, Elem b) const {
    if (k_ == 1) {
      std::uint32_t s = a + b;
      return s >= p_ ? s - p_ : s;
    }
    if (p_ == 2) return a ^ b;
    if (!add_.empty()) return add_[static_cast<std::size_t>(a) * q_ + b];
    return add_digits(a, b);
  }

  Elem neg(Elem a) const { return neg_[a]; }
  Elem sub(Elem a, Elem b) const { return add(a, neg_[b]); }

  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }

  Elem inv(Elem a) const {
    if (a == 0) fail(Errc::DivisionByZero, "inverse of zero");
    return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
  }

  Elem div(Elem a, Elem b) const {
    if (b == 0) fail(Errc::DivisionByZero, "division by zero");
    return mul(a, inv(b));
  }

  Elem pow(Elem a, long long e) const {
    if (a == 0) {
      if (e < 0) fail(Errc::DivisionByZero, "negative power of zero");
      return e == 0 ? one_ : 0;
    }
    long long const m = q_ - 1;
    long long r = (static_cast<long long>(log_[a]) * (e % m)) % m;
    if (r < 0) r += m;
    return exp_[static_cast<std::size_t>(r)];
  }

  /// Discrete log base primitive(); a must be nonzero.
  std::uint32_t log(Elem a) const {
    if (a == 0) fail(Errc::DivisionByZero, "log of zero");
    return log_[a];
  }

  std::string encode(Elem a) const {
    auto c = coeffs(a);
    std::string s;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(c[i]);
    }
    return s;
  }

  Elem decode(std::string_view s) const {
    std::vector<std::uint32_t> c;
    std::size_t pos = 0;
    while (pos <= s.size()) {
      auto next = s.find(',', pos);
      if (next == std::string_view::npos) next = s.size();
      c.push_back(parse_digit(s.substr(pos, next - pos)));
      pos = next + 1;
    }
    return from_coeffs(c);
  }

  std::uint32_t parse_digit(std::string_view tok) const {
    std::size_t b = 0, e = tok.size();
    while (b < e && tok[b] == ' ') ++b;
    while (e > b && tok[e - 1] == ' ') --e;
    tok = tok.substr(b, e - b);
    if (tok.empty()) fail(Errc::BadEncoding, "empty field coefficient");
    std::uint64_t v = 0;
    for (char ch : tok) {
      if (ch < '0' || ch > '9') fail(Errc::BadEncoding, "bad field coefficient '" + std::string(tok) + "'");
      v = v * 10 + static_cast<std::uint64_t>(ch - '0');
      if (v >= p_) fail(Errc::BadEncoding, "field coefficient out of range: " + std::string(tok));
    }
    return static_cast<std::uint32_t>(v);
  }

 private:
  Field() = default;

  Elem add_digits(Elem a, Elem b) const {
    Elem r = 0, place = 1;
    for (std::uint32_t i = 0; i < k_; ++i) {
      std::uint32_t d = a % p_ + b % p_;
      if (d >= p_) d -= p_;
      r += d * place;
      place *= p_;
      a /= p_;
      b /= p_;
    }
    return r;
  }

  // Multiplication on coefficient vectors, used only while building tables.
  Elem slow_mul(Elem a, Elem b) const {
    auto ca = coeffs(a), cb = coeffs(b);
    std::vector<std::uint64_t> prod(2 * k_ - 1, 0);
    for (std::uint32_t i = 0; i < k_; ++i)
      for (std::uint32_t j = 0; j < k_; ++j) prod[i + j] += static_cast<std::uint64_t>(ca[i]) * cb[j];
    for (auto& v : prod) v %= p_;
    for (std::size_t d = prod.size(); d-- > k_;) {
      std::uint64_t const c = prod[d];
      if (c == 0) continue;
      for (std::uint32_t i = 0; i < k_; ++i) prod[d - k_ + i] = (prod[d - k_ + i] + (p_ - c) * modulus_[i]) % p_;
      prod[d] = 0;
    }
    std::vector<std::uint32_t> r(k_);
    for (std::uint32_t i = 0; i < k_; ++i) r[i] = static_cast<std::uint32_t>(prod[i]);
    return from_coeffs(r);
  }

  void build_tables();

  std::uint32_t p_ = 0, k_ = 0, q_ = 0;
  Elem one_ = 0;
  std::vector<std::uint32_t> modulus_;
  std::vector<Elem> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<Elem> neg_;
  std::vector<Elem> add_;

  friend class Poly;
};

/// A field element bound to its field; arithmetic checks that operands agree.
class FieldElem {
 public:
  FieldElem(FieldPtr f, Field::Elem v) : f_(std::move(f)), v_(v) {}
  static FieldElem from_coeffs(FieldPtr f, std::span<std::uint32_t const> c) {
    auto v = f->from_coeffs(c);
    return {std::move(f), v};
  }

  FieldPtr const& field() const noexcept { return f_; }
  Field::Elem code() const noexcept { return v_; }
  std::vector<std::uint32_t> coeffs() const { return f_->coeffs(v_); }

  FieldElem operator+(FieldElem const& o) const { return {f_, f_->add(v_, check(o))}; }
  FieldElem operator-(FieldElem const& o) const { return {f_, f_->sub(v_, check(o))}; }
  FieldElem operator*(FieldElem const& o) const { return {f_, f_->mul(v_, check(o))}; }
  FieldElem operator/(FieldElem const& o) const { return {f_, f_->div(v_, check(o))}; }
  FieldElem operator-() const { return {f_, f_->neg(v_)}; }
  FieldElem inv() const { return {f_, f_->inv(v_)}; }
  FieldElem pow(long long e) const { return {f_, f_->pow(v_, e)}; }

  bool operator==(FieldElem const& o) const { return f_ == o.f_ && v_ == o.v_; }
  bool operator<(FieldElem const& o) const { return v_ < check(o); }

 private:
  Field::Elem check(FieldElem const& o) const {
    if (f_ != o.f_) fail(Errc::FieldMismatch, "operands belong to different fields");
    return o.v_;
  }

  FieldPtr f_;
  Field::Elem v_;
};

/// Univariate polynomial over a Field, low degree first, no trailing zeros.
class Poly {
 public:
  using Elem = Field::Elem;

  explicit Poly(FieldPtr f) : f_(std::move(f)) {}
  Poly(FieldPtr f, std::vector<Elem> c) : f_(std::move(f)), c_(std::move(c)) { trim(); }

  static Poly constant(FieldPtr f, Elem a) { return Poly(std::move(f), {a}); }
  static Poly monomial(FieldPtr f, Elem a, std::size_t deg) {
    std::vector<Elem> c(deg + 1, 0);
    c[deg] = a;
    return Poly(std::move(f), std::move(c));
  }
  static Poly x(FieldPtr f) {
    auto one = f->one();
    return monomial(std::move(f), one, 1);
  }

  FieldPtr const& field() const noexcept { return f_; }
  std::vector<Elem> const& coeffs() const noexcept { return c_; }
  bool is_zero() const noexcept { return c_.empty(); }
  /// -1 for the zero polynomial.
  long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
  Elem lead() const { return c_.empty() ? 0 : c_.back(); }
  Elem coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
  bool is_monic() const { return !c_.empty() && c_.back() == f_->one(); }

  Poly operator+(Poly const& o) const {
    check(o);
    std::vector<Elem> r(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = f_->add(coeff(i), o.coeff(i));
    return Poly(f_, std::move(r));
  }

  Poly operator-(Poly const& o) const {
    check(o);
    std::vector<Elem> r(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = f_->sub(coeff(i), o.coeff(i));
    return Poly(f_, std::move(r));
  }

  Poly operator*(Poly const& o) const {
    check(o);
    if (is_zero() || o.is_zero()) return Poly(f_);
    std::vector<Elem> r(c_.size() + o.c_.size() - 1, 0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] = f_->add(r[i + j], f_->mul(c_[i], o.c_[j]));
    }
    return Poly(f_, std::move(r));
  }

  Poly scale(Elem a) const {
    std::vector<Elem> r(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = f_->mul(c_[i], a);
    return Poly(f_, std::move(r));
  }

  /// (quotient, remainder)
  std::pair<Poly, Poly> divmod(Poly const& d) const {
    check(d);
    if (d.is_zero()) fail(Errc::DivisionByZero, "polynomial division by zero");
    std::vector<Elem> rem = c_;
    if (rem.size() < d.c_.size()) return {Poly(f_), *this};
    std::vector<Elem> quo(rem.size() - d.c_.size() + 1, 0);
    Elem const inv_lead = f_->inv(d.lead());
    for (std::size_t i = rem.size(); i-- >= d.c_.size();) {
      Elem const t = f_->mul(rem[i], inv_lead);
      std::size_t const shift = i + 1 - d.c_.size();
      quo[shift] = t;
      if (t == 0) continue;
      for (std::size_t j = 0; j < d.c_.size(); ++j) rem[shift + j] = f_->sub(rem[shift + j], f_->mul(t, d.c_[j]));
    }
    return {Poly(f_, std::move(quo)), Poly(f_, std::move(rem))};
  }

  Poly operator/(Poly const& d) const { return divmod(d).first; }
  Poly operator%(Poly const& d) const { return divmod(d).second; }

  Poly monic() const {
    if (is_zero()) return *this;
    return scale(f_->inv(lead()));
  }

  Elem eval(Elem x) const {
    Elem r = 0;
    for (std::size_t i = c_.size(); i-- > 0;) r = f_->add(f_->mul(r, x), c_[i]);
    return r;
  }

  bool operator==(Poly const& o) const { return f_ == o.f_ && c_ == o.c_; }

  /// Degree first, then coefficients lexicographically (low degree first).
  bool operator<(Poly const& o) const {
    if (degree() != o.degree()) return degree() < o.degree();
    return c_ < o.c_;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string s;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (c_[i] == 0) continue;
      if (!s.empty()) s += " + ";
      bool const unit = c_[i] == f_->one();
      if (!unit || i == 0) {
        std::string enc = f_->encode(c_[i]);
        s += f_->is_prime_field() ? enc : "(" + enc + ")";
      }
      if (i >= 1) s += "x";
      if (i >= 2) s += "^" + std::to_string(i);
    }
    return s;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  void check(Poly const& o) const {
    if (f_ != o.f_) fail(Errc::FieldMismatch, "polynomials over different fields");
  }

  FieldPtr f_;
  std::vector<Elem> c_;
};

/// Monic gcd; gcd(0, 0) = 0.
inline Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

inline Poly powmod(Poly base, std::uint64_t e, Poly const& mod) {
  Poly result = Poly::constant(base.field(), base.field()->one()) % mod;
  base = base % mod;
  while (e > 0) {
    if (e & 1) result = (result * base) % mod;
    e >>= 1;
    if (e) base = (base * base) % mod;
  }
  return result;
}

/// Rabin-style test: f of degree k is irreducible iff gcd(f, x^{q^i} - x) = 1
/// for every i <= k/2.
inline bool is_irreducible(Poly const& f) {
  if (f.degree() < 1) return false;
  if (f.degree() == 1) return true;
  auto const& F = f.field();
  Poly const x = Poly::x(F);
  Poly h = x;
  for (long i = 1; 2 * i <= f.degree(); ++i) {
    h = powmod(h, F->q(), f);
    if (gcd(f, h - x).degree() > 0) return false;
  }
  return true;
}

namespace detail {

// Splits a squarefree product of distinct irreducibles of degree d.
inline void equal_degree_split(Poly const& h, long d, Rng& rng, std::vector<Poly>& out) {
  auto const& F = h.field();
  if (h.degree() == d) {
    out.push_back(h.monic());
    return;
  }
  if (d == 1) {
    for (Field::Elem r = 0; r < F->q(); ++r) {
      if (h.eval(r) == 0) out.push_back(Poly(F, {F->neg(r), F->one()}));
    }
    return;
  }
  for (;;) {
    std::vector<Field::Elem> c(static_cast<std::size_t>(h.degree()));
    for (auto& v : c) v = static_cast<Field::Elem>(rng.below(F->q()));
    Poly a(F, std::move(c));
    if (a.degree() < 1) continue;
    Poly b(F);
    if (F->p() == 2) {
      // absolute trace a + a^2 + ... + a^{2^{kd-1}} mod h
      Poly t = a;
      b = a;
      for (long j = 1; j < static_cast<long>(F->k()) * d; ++j) {
        t = (t * t) % h;
        b = b + t;
      }
    } else {
      // a^{(q^d - 1)/2} = (a^{1 + q + ... + q^{d-1}})^{(q-1)/2}
      Poly t = a;
      Poly norm = a;
      for (long j = 1; j < d; ++j) {
        t = powmod(t, F->q(), h);
        norm = (norm * t) % h;
      }
      b = powmod(norm, (F->q() - 1) / 2, h) - Poly::constant(F, F->one());
    }
    Poly g = gcd(h, b);
    if (g.degree() > 0 && g.degree() < h.degree()) {
      equal_degree_split(g, d, rng, out);
      equal_degree_split(h / g, d, rng, out);
      return;
    }
  }
}

}  // namespace detail

/// Factorization of a monic polynomial into irreducibles with multiplicities,
/// sorted by degree then lexicographically.
inline std::vector<std::pair<Poly, int>> poly_factor(Poly const& f) {
  if (f.is_zero()) fail(Errc::ZeroPolynomial, "cannot factor the zero polynomial");
  if (!f.is_monic()) fail(Errc::NotMonic, "poly_factor requires a monic polynomial");
  if (f.degree() < 1) fail(Errc::InvalidArgument, "poly_factor requires degree >= 1");
  auto const& F = f.field();
  Rng rng(0x5eed);
  std::vector<std::pair<Poly, int>> result;
  Poly g = f;
  Poly const x = Poly::x(F);
  auto strip = [&](std::vector<Poly> const& irreducibles) {
    for (auto const& u : irreducibles) {
      int mult = 0;
      for (;;) {
        auto [quo, rem] = g.divmod(u);
        if (!rem.is_zero()) break;
        g = std::move(quo);
        ++mult;
      }
      result.emplace_back(u, mult);
    }
  };
  for (long d = 1; 2 * d <= g.degree(); ++d) {
    Poly h = x;
    for (long j = 0; j < d; ++j) h = powmod(h, F->q(), g);
    Poly part = gcd(g, h - x);
    if (part.degree() > 0) {
      std::vector<Poly> pieces;
      detail::equal_degree_split(part, d, rng, pieces);
      strip(pieces);
    }
  }
  if (g.degree() > 0) result.emplace_back(g.monic(), 1);
  std::sort(result.begin(), result.end(), [](auto const& a, auto const& b) { return a.first < b.first; });
  return result;
}

inline FieldPtr Field::make(std::uint32_t p, std::uint32_t k, std::uint64_t cap) {
  if (!is_prime(p)) fail(Errc::NonPrime, std::to_string(p) + " is not prime");
  if (k < 1) fail(Errc::InvalidArgument, "extension degree must be >= 1");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    q *= p;
    if (q > cap) fail(Errc::CapExceeded, std::to_string(p) + "^" + std::to_string(k) + " exceeds field cap");
  }
  std::shared_ptr<Field> f(new Field());
  f->p_ = p;
  f->k_ = k;
  f->q_ = static_cast<std::uint32_t>(q);
  if (k == 1) {
    f->modulus_ = {0, 1};
  } else {
    FieldPtr prime = make(p, 1, cap);
    // candidates in lexicographic order of (c_0, ..., c_{k-1})
    std::uint64_t const count = q;
    for (std::uint64_t code = 0; code < count; ++code) {
      std::vector<Field::Elem> c(k + 1);
      std::uint64_t v = code;
      for (std::uint32_t i = k; i-- > 0;) {
        c[i] = static_cast<Field::Elem>(v % p);
        v /= p;
      }
      c[k] = 1;
      if (c[0] == 0) continue;
      if (is_irreducible(Poly(prime, c))) {
        f->modulus_.assign(c.begin(), c.end());
        break;
      }
    }
  }
  f->build_tables();
  return f;
}

inline void Field::build_tables() {
  one_ = 1;
  for (std::uint32_t i = 1; i < k_; ++i) one_ *= p_;
  neg_.resize(q_);
  for (Elem a = 0; a < q_; ++a) {
    auto c = coeffs(a);
    for (auto& v : c) v = (p_ - v) % p_;
    neg_[a] = from_coeffs(c);
  }
  if (k_ > 1 && p_ != 2 && q_ <= 1024) {
    add_.resize(static_cast<std::size_t>(q_) * q_);
    for (Elem a = 0; a < q_; ++a)
      for (Elem b = 0; b < q_; ++b) add_[static_cast<std::size_t>(a) * q_ + b] = add_digits(a, b);
  }
  auto mulf = [this](Elem a, Elem b) -> Elem {
    if (k_ == 1) return static_cast<Elem>((static_cast<std::uint64_t>(a) * b) % p_);
    return slow_mul(a, b);
  };
  std::uint64_t const order = q_ - 1;
  auto const factors = prime_factors(order);
  auto slow_pow = [&](Elem a, std::uint64_t e) {
    Elem r = one_;
    while (e) {
      if (e & 1) r = mulf(r, a);
      a = mulf(a, a);
      e >>= 1;
    }
    return r;
  };
  Elem gen = one_;
  for (Elem a = 1; a < q_; ++a) {
    bool primitive = true;
    for (auto l : factors) {
      if (slow_pow(a, order / l) == one_) {
        primitive = false;
        break;
      }
    }
    if (primitive) {
      gen = a;
      break;
    }
  }
  exp_.resize(2 * static_cast<std::size_t>(order) + 1);
  log_.assign(q_, 0);
  Elem cur = one_;
  for (std::uint64_t i = 0; i < order; ++i) {
    exp_[i] = cur;
    log_[cur] = static_cast<std::uint32_t>(i);
    cur = mulf(cur, gen);
  }
  for (std::uint64_t i = order; i < exp_.size(); ++i) exp_[i] = exp_[i - order];
}

/// F_{q^d} together with an embedding of the base field.
struct Extension {
  FieldPtr base;
  FieldPtr field;
  std::uint32_t degree = 1;
  std::vector<Field::Elem> image;  // image[a] for every base code a

  Field::Elem embed(Field::Elem a) const { return image.at(a); }

  Poly embed(Poly const& f) const {
    std::vector<Field::Elem> c;
    c.reserve(f.coeffs().size());
    for (auto a : f.coeffs()) c.push_back(embed(a));
    return Poly(field, std::move(c));
  }
};

/// Builds F_{q^d} from F_q. The base generator (the class of x) is sent to the
/// least root of the base modulus in the larger field.
inline Extension field_extend(FieldPtr const& base, std::uint32_t d, std::uint64_t cap = kDefaultFieldCap) {
  if (d < 1) fail(Errc::InvalidArgument, "extension degree must be >= 1");
  Extension ext;
  ext.base = base;
  ext.degree = d;
  ext.field = d == 1 ? base : Field::make(base->p(), base->k() * d, cap);
  auto const& E = ext.field;
  ext.image.resize(base->q());
  if (d == 1) {
    for (Field::Elem a = 0; a < base->q(); ++a) ext.image[a] = a;
    return ext;
  }
  if (base->k() == 1) {
    for (Field::Elem a = 0; a < base->q(); ++a) ext.image[a] = E->from_int(a);
    return ext;
  }
  std::vector<Field::Elem> mod;
  for (auto c : base->modulus()) mod.push_back(E->from_int(c));
  Poly const m(E, mod);
  Field::Elem root = 0;
  bool found = false;
  for (Field::Elem b = 0; b < E->q(); ++b) {
    if (m.eval(b) == 0) {
      root = b;
      found = true;
      break;
    }
  }
  if (!found) fail(Errc::InvalidArgument, "no root of base modulus in extension");
  std::vector<Field::Elem> powers(base->k());
  powers[0] = E->one();
  for (std::uint32_t i = 1; i < base->k(); ++i) powers[i] = E->mul(powers[i - 1], root);
  for (Field::Elem a = 0; a < base->q(); ++a) {
    auto c = base->coeffs(a);
    Field::Elem v = 0;
    for (std::uint32_t i = 0; i < base->k(); ++i) v = E->add(v, E->mul(E->from_int(c[i]), powers[i]));
    ext.image[a] = v;
  }
  return ext;
}

}  // namespace cgrowth
