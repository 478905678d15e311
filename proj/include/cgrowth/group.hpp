#pragma once

// SL(n,q) and PSL(n,q) as explicit matrix groups.
//
// After enumerate(), elements are numbered 0..|G|-1 in increasing order of
// their canonical encoding, so comparing indices compares canonical forms.
// Sets of elements are sorted index vectors.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "cgrowth/error.hpp"
#include "cgrowth/ff.hpp"
#include "cgrowth/rng.hpp"

namespace cgrowth {

inline constexpr std::uint64_t kDefaultGroupCap = 10'000'000;
inline constexpr int kMaxDim = 6;

enum class Family { SL, PSL };

inline std::string family_name(Family f) { return f == Family::SL ? "SL" : "PSL"; }

inline Family parse_family(std::string_view s) {
  std::string up(s);
  for (auto& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (up == "SL") return Family::SL;
  if (up == "PSL") return Family::PSL;
  fail(Errc::UnsupportedFamily, "unknown family '" + std::string(s) + "'");
}

/// Closed-form |SL(n,q)|, saturating at UINT64_MAX.
inline std::uint64_t sl_order(int n, std::uint64_t q) {
  long double v = 1;
  for (int i = 0; i < n * (n - 1) / 2; ++i) v *= q;
  for (int i = 2; i <= n; ++i) v *= std::pow(static_cast<long double>(q), i) - 1;
  if (v >= 1.8e19L) return UINT64_MAX;
  std::uint64_t r = 1;
  for (int i = 0; i < n * (n - 1) / 2; ++i) r *= q;
  for (int i = 2; i <= n; ++i) {
    std::uint64_t qi = 1;
    for (int j = 0; j < i; ++j) qi *= q;
    r *= qi - 1;
  }
  return r;
}

/// Square matrix over a field, row-major codes.
struct Matrix {
  int n = 0;
  std::array<Field::Elem, kMaxDim * kMaxDim> a{};

  Field::Elem& operator()(int i, int j) { return a[static_cast<std::size_t>(i * n + j)]; }
  Field::Elem operator()(int i, int j) const { return a[static_cast<std::size_t>(i * n + j)]; }
  bool operator==(Matrix const& o) const {
    return n == o.n && std::equal(a.begin(), a.begin() + n * n, o.a.begin());
  }
};

/// Matrix arithmetic over a fixed field.
class MatrixOps {
 public:
  MatrixOps(FieldPtr f, int n) : f_(std::move(f)), n_(n) {
    if (n < 1 || n > kMaxDim) fail(Errc::InvalidArgument, "matrix dimension out of range");
  }

  FieldPtr const& field() const noexcept { return f_; }
  int n() const noexcept { return n_; }

  Matrix identity() const {
    Matrix m;
    m.n = n_;
    for (int i = 0; i < n_; ++i) m(i, i) = f_->one();
    return m;
  }

  Matrix scalar(Field::Elem c) const {
    Matrix m;
    m.n = n_;
    for (int i = 0; i < n_; ++i) m(i, i) = c;
    return m;
  }

  Matrix mul(Matrix const& x, Matrix const& y) const {
    Matrix r;
    r.n = n_;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        Field::Elem s = 0;
        for (int k = 0; k < n_; ++k) s = f_->add(s, f_->mul(x(i, k), y(k, j)));
        r(i, j) = s;
      }
    return r;
  }

  Matrix scale(Matrix x, Field::Elem c) const {
    for (int i = 0; i < n_ * n_; ++i) x.a[static_cast<std::size_t>(i)] = f_->mul(x.a[static_cast<std::size_t>(i)], c);
    return x;
  }

  Matrix sub(Matrix x, Matrix const& y) const {
    for (int i = 0; i < n_ * n_; ++i)
      x.a[static_cast<std::size_t>(i)] = f_->sub(x.a[static_cast<std::size_t>(i)], y.a[static_cast<std::size_t>(i)]);
    return x;
  }

  Field::Elem det(Matrix x) const {
    Field::Elem d = f_->one();
    for (int c = 0; c < n_; ++c) {
      int piv = -1;
      for (int r = c; r < n_; ++r)
        if (x(r, c) != 0) {
          piv = r;
          break;
        }
      if (piv < 0) return 0;
      if (piv != c) {
        for (int j = 0; j < n_; ++j) std::swap(x(piv, j), x(c, j));
        d = f_->neg(d);
      }
      d = f_->mul(d, x(c, c));
      Field::Elem const inv = f_->inv(x(c, c));
      for (int r = c + 1; r < n_; ++r) {
        Field::Elem const t = f_->mul(x(r, c), inv);
        if (t == 0) continue;
        for (int j = c; j < n_; ++j) x(r, j) = f_->sub(x(r, j), f_->mul(t, x(c, j)));
      }
    }
    return d;
  }

  Matrix inv(Matrix x) const {
    Matrix r = identity();
    for (int c = 0; c < n_; ++c) {
      int piv = -1;
      for (int i = c; i < n_; ++i)
        if (x(i, c) != 0) {
          piv = i;
          break;
        }
      if (piv < 0) fail(Errc::DivisionByZero, "singular matrix");
      for (int j = 0; j < n_; ++j) {
        std::swap(x(piv, j), x(c, j));
        std::swap(r(piv, j), r(c, j));
      }
      Field::Elem const inv = f_->inv(x(c, c));
      for (int j = 0; j < n_; ++j) {
        x(c, j) = f_->mul(x(c, j), inv);
        r(c, j) = f_->mul(r(c, j), inv);
      }
      for (int i = 0; i < n_; ++i) {
        if (i == c || x(i, c) == 0) continue;
        Field::Elem const t = x(i, c);
        for (int j = 0; j < n_; ++j) {
          x(i, j) = f_->sub(x(i, j), f_->mul(t, x(c, j)));
          r(i, j) = f_->sub(r(i, j), f_->mul(t, r(c, j)));
        }
      }
    }
    return r;
  }

  int rank(Matrix x) const {
    int rank = 0;
    for (int c = 0; c < n_ && rank < n_; ++c) {
      int piv = -1;
      for (int i = rank; i < n_; ++i)
        if (x(i, c) != 0) {
          piv = i;
          break;
        }
      if (piv < 0) continue;
      for (int j = 0; j < n_; ++j) std::swap(x(piv, j), x(rank, j));
      Field::Elem const inv = f_->inv(x(rank, c));
      for (int i = rank + 1; i < n_; ++i) {
        Field::Elem const t = f_->mul(x(i, c), inv);
        if (t == 0) continue;
        for (int j = c; j < n_; ++j) x(i, j) = f_->sub(x(i, j), f_->mul(t, x(rank, j)));
      }
      ++rank;
    }
    return rank;
  }

  /// "a,b;c,d" with each entry a field-element encoding (k coefficients).
  std::string encode(Matrix const& m) const {
    std::string s;
    for (int i = 0; i < n_; ++i) {
      if (i) s += ';';
      for (int j = 0; j < n_; ++j) {
        if (j) s += ',';
        s += f_->encode(m(i, j));
      }
    }
    return s;
  }

  Matrix decode(std::string_view s) const {
    Matrix m;
    m.n = n_;
    std::vector<std::string_view> rows;
    std::size_t pos = 0;
    while (pos <= s.size()) {
      auto next = s.find(';', pos);
      if (next == std::string_view::npos) next = s.size();
      rows.push_back(s.substr(pos, next - pos));
      pos = next + 1;
    }
    if (static_cast<int>(rows.size()) != n_)
      fail(Errc::BadEncoding, "expected " + std::to_string(n_) + " rows in '" + std::string(s) + "'");
    int const k = static_cast<int>(f_->k());
    for (int i = 0; i < n_; ++i) {
      std::vector<std::uint32_t> digits;
      std::string_view row = rows[static_cast<std::size_t>(i)];
      std::size_t p = 0;
      while (p <= row.size()) {
        auto next = row.find(',', p);
        if (next == std::string_view::npos) next = row.size();
        digits.push_back(f_->parse_digit(row.substr(p, next - p)));
        p = next + 1;
      }
      if (static_cast<int>(digits.size()) != n_ * k)
        fail(Errc::BadEncoding, "row " + std::to_string(i) + " has wrong number of entries");
      for (int j = 0; j < n_; ++j)
        m(i, j) = f_->from_coeffs(std::span<std::uint32_t const>(digits.data() + j * k, static_cast<std::size_t>(k)));
    }
    return m;
  }

 private:
  FieldPtr f_;
  int n_;
};

class Group;
using GroupPtr = std::shared_ptr<Group>;

class Group {
 public:
  using Elem = std::uint32_t;

  /// SL(n,q) or PSL(n,q). Generators are the elementary transvections
  /// e_ij(b) for b running over the F_p-basis 1, a, ..., a^{k-1} of F_q.
  static GroupPtr make(Family family, int n, std::uint64_t q, std::uint64_t cap = kDefaultGroupCap) {
    if (n < 2) fail(Errc::InvalidArgument, "n must be >= 2");
    if (n > kMaxDim) fail(Errc::CapExceeded, "dimension above " + std::to_string(kMaxDim));
    auto pk = prime_power(q);
    if (!pk) fail(Errc::NonPrime, std::to_string(q) + " is not a prime power");
    std::uint64_t const sl = sl_order(n, q);
    std::uint64_t const centre = std::gcd(static_cast<std::uint64_t>(n), q - 1);
    std::uint64_t const estimate = family == Family::SL ? sl : sl / centre;
    if (sl == UINT64_MAX || estimate > cap)
      fail(Errc::CapExceeded, family_name(family) + "(" + std::to_string(n) + "," + std::to_string(q) +
                                  ") has order above the cap " + std::to_string(cap));
    long double const key_space = std::pow(static_cast<long double>(q), n * n);
    if (key_space >= 1.8e19L) fail(Errc::CapExceeded, "matrix encodings do not fit in 64 bits");
    GroupPtr g(new Group(family, n, Field::make(pk->first, pk->second)));
    g->cap_ = cap;
    g->estimate_ = estimate;
    return g;
  }

  Family family() const noexcept { return family_; }
  int n() const noexcept { return ops_.n(); }
  int rank() const noexcept { return ops_.n() - 1; }
  std::uint64_t q() const noexcept { return field()->q(); }
  FieldPtr const& field() const noexcept { return ops_.field(); }
  MatrixOps const& ops() const noexcept { return ops_; }
  std::vector<Matrix> const& generators() const noexcept { return gens_; }
  std::uint64_t order_estimate() const noexcept { return estimate_; }
  std::string name() const {
    return family_name(family_) + "(" + std::to_string(n()) + "," + std::to_string(q()) + ")";
  }

  /// n-th roots of unity in F_q; the scalars by which PSL identifies matrices.
  std::vector<Field::Elem> const& centre_scalars() const noexcept { return centre_; }

  // ---- matrix level (no enumeration needed) ----

  Matrix canonical(Matrix const& m) const {
    if (family_ == Family::SL || centre_.size() == 1) return m;
    Matrix best = m;
    std::uint64_t best_key = key(m);
    for (auto c : centre_) {
      Matrix s = ops_.scale(m, c);
      std::uint64_t const k = key(s);
      if (k < best_key) {
        best_key = k;
        best = s;
      }
    }
    return best;
  }

  std::uint64_t key(Matrix const& m) const {
    std::uint64_t k = 0;
    std::uint64_t const q = field()->q();
    for (int i = 0; i < n() * n(); ++i) k = k * q + m.a[static_cast<std::size_t>(i)];
    return k;
  }

  Matrix from_key(std::uint64_t k) const {
    Matrix m;
    m.n = n();
    std::uint64_t const q = field()->q();
    for (int i = n() * n(); i-- > 0;) {
      m.a[static_cast<std::size_t>(i)] = static_cast<Field::Elem>(k % q);
      k /= q;
    }
    return m;
  }

  Matrix mat_mul(Matrix const& a, Matrix const& b) const { return canonical(ops_.mul(a, b)); }
  Matrix mat_inv(Matrix const& a) const { return canonical(ops_.inv(a)); }
  /// g^{-1} a g
  Matrix mat_conj(Matrix const& a, Matrix const& g) const { return canonical(ops_.mul(ops_.mul(ops_.inv(g), a), g)); }

  bool is_member(Matrix const& m) const { return m.n == n() && ops_.det(m) == field()->one(); }

  /// Parses and canonicalizes a matrix; rejects det != 1.
  Matrix parse(std::string_view s) const {
    Matrix m = ops_.decode(s);
    if (!is_member(m)) fail(Errc::BadEncoding, "matrix '" + std::string(s) + "' does not have determinant 1");
    return canonical(m);
  }
  std::string encode(Matrix const& m) const { return ops_.encode(m); }

  // ---- enumeration ----

  /// Breadth-first closure of the generators. Idempotent.
  void enumerate() {
    if (enumerated()) return;
    if (estimate_ > cap_) fail(Errc::CapExceeded, "group order above cap");
    std::unordered_set<std::uint64_t> seen;
    std::vector<Matrix> frontier{canonical(ops_.identity())};
    std::vector<std::uint64_t> keys{key(frontier[0])};
    seen.insert(keys[0]);
    while (!frontier.empty()) {
      std::vector<Matrix> next;
      for (auto const& m : frontier) {
        for (auto const& g : gens_) {
          Matrix p = mat_mul(m, g);
          std::uint64_t const k = key(p);
          if (seen.insert(k).second) {
            if (seen.size() > cap_) fail(Errc::CapExceeded, "enumeration exceeded the cap");
            keys.push_back(k);
            next.push_back(p);
          }
        }
      }
      frontier = std::move(next);
    }
    std::sort(keys.begin(), keys.end());
    keys_ = std::move(keys);
    std::size_t const N = keys_.size();
    identity_ = index_of_key(key(canonical(ops_.identity())));
    inv_.resize(N);
    for (std::size_t i = 0; i < N; ++i) inv_[i] = index_of_key(key(mat_inv(from_key(keys_[i]))));
    gen_idx_.clear();
    for (auto const& g : gens_) gen_idx_.push_back(index_of_key(key(g)));
    if (N <= kTableLimit) {
      table_.assign(N * N, 0);
      row_ready_.assign(N, 0);
    }
  }

  bool enumerated() const noexcept { return !keys_.empty(); }

  std::size_t order() const {
    require_enumerated();
    return keys_.size();
  }

  Elem identity() const {
    require_enumerated();
    return identity_;
  }

  std::vector<Elem> const& generator_indices() const {
    require_enumerated();
    return gen_idx_;
  }

  Matrix matrix(Elem e) const { return from_key(keys_.at(e)); }

  Elem index_of(Matrix const& m) const {
    require_enumerated();
    return index_of_key(key(canonical(m)));
  }

  Elem mul(Elem a, Elem b) const {
    if (!table_.empty()) {
      std::size_t const N = keys_.size();
      if (!row_ready_[a]) fill_row(a);
      return table_[static_cast<std::size_t>(a) * N + b];
    }
    return index_of_key(key(mat_mul(from_key(keys_[a]), from_key(keys_[b]))));
  }

  Elem inv(Elem a) const { return inv_[a]; }
  /// g^{-1} a g
  Elem conj(Elem a, Elem g) const { return mul(mul(inv_[g], a), g); }

  std::uint64_t element_order(Elem a) const {
    std::uint64_t k = 1;
    Elem x = a;
    while (x != identity_) {
      x = mul(x, a);
      ++k;
    }
    return k;
  }

 private:
  static constexpr std::size_t kTableLimit = 6000;

  Group(Family family, int n, FieldPtr f) : family_(family), ops_(std::move(f), n) {
    auto const& F = field();
    for (Field::Elem c = 1; c < F->q(); ++c)
      if (F->pow(c, n) == F->one()) centre_.push_back(c);
    // F_p basis of F_q: 1, a, a^2, ... where a is the class of x
    std::vector<Field::Elem> basis;
    for (std::uint32_t i = 0; i < F->k(); ++i) {
      std::vector<std::uint32_t> c(F->k(), 0);
      c[i] = 1;
      basis.push_back(F->from_coeffs(c));
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        for (auto b : basis) {
          Matrix t = ops_.identity();
          t(i, j) = b;
          gens_.push_back(canonical(t));
        }
      }
  }

  void require_enumerated() const {
    if (!enumerated()) fail(Errc::NotEnumerated, name() + " has not been enumerated");
  }

  Elem index_of_key(std::uint64_t k) const {
    auto it = std::lower_bound(keys_.begin(), keys_.end(), k);
    if (it == keys_.end() || *it != k) fail(Errc::NotFound, "element not in " + name());
    return static_cast<Elem>(it - keys_.begin());
  }

  void fill_row(Elem a) const {
    std::size_t const N = keys_.size();
    Matrix const ma = from_key(keys_[a]);
    for (std::size_t b = 0; b < N; ++b)
      table_[a * N + b] = index_of_key(key(mat_mul(ma, from_key(keys_[b]))));
    row_ready_[a] = 1;
  }

  Family family_;
  MatrixOps ops_;
  std::uint64_t cap_ = kDefaultGroupCap;
  std::uint64_t estimate_ = 0;
  std::vector<Field::Elem> centre_;
  std::vector<Matrix> gens_;
  std::vector<std::uint64_t> keys_;
  std::vector<Elem> inv_;
  std::vector<Elem> gen_idx_;
  Elem identity_ = 0;
  mutable std::vector<Elem> table_;
  mutable std::vector<std::uint8_t> row_ready_;
};

/// Deduplicated set of elements of an enumerated group, sorted by canonical order.
class ElemSet {
 public:
  using Elem = Group::Elem;

  ElemSet() = default;
  explicit ElemSet(Group const& g) : g_(&g) {}
  ElemSet(Group const& g, std::vector<Elem> elems) : g_(&g), v_(std::move(elems)) {
    std::sort(v_.begin(), v_.end());
    v_.erase(std::unique(v_.begin(), v_.end()), v_.end());
  }

  static ElemSet whole(Group const& g) {
    std::vector<Elem> v(g.order());
    std::iota(v.begin(), v.end(), 0);
    return ElemSet(g, std::move(v));
  }
  static ElemSet singleton(Group const& g, Elem e) { return ElemSet(g, {e}); }

  /// From a membership mask of length |G|.
  static ElemSet from_mask(Group const& g, std::vector<std::uint8_t> const& mask) {
    ElemSet s(g);
    for (std::size_t i = 0; i < mask.size(); ++i)
      if (mask[i]) s.v_.push_back(static_cast<Elem>(i));
    return s;
  }

  Group const& group() const { return *g_; }
  Group const* group_ptr() const noexcept { return g_; }
  std::size_t size() const noexcept { return v_.size(); }
  bool empty() const noexcept { return v_.empty(); }
  std::vector<Elem> const& elements() const noexcept { return v_; }
  auto begin() const noexcept { return v_.begin(); }
  auto end() const noexcept { return v_.end(); }
  Elem operator[](std::size_t i) const { return v_[i]; }

  bool contains(Elem e) const { return std::binary_search(v_.begin(), v_.end(), e); }

  std::vector<std::uint8_t> mask() const {
    std::vector<std::uint8_t> m(g_->order(), 0);
    for (auto e : v_) m[e] = 1;
    return m;
  }

  bool is_subset_of(ElemSet const& o) const { return std::includes(o.v_.begin(), o.v_.end(), v_.begin(), v_.end()); }

  bool operator==(ElemSet const& o) const { return g_ == o.g_ && v_ == o.v_; }

 private:
  Group const* g_ = nullptr;
  std::vector<Elem> v_;
};

inline void check_same_group(ElemSet const& a, ElemSet const& b) {
  if (a.group_ptr() != b.group_ptr()) fail(Errc::GroupMismatch, "sets belong to different groups");
}

/// {ab : a in A, b in B}
inline ElemSet set_product(ElemSet const& A, ElemSet const& B) {
  check_same_group(A, B);
  Group const& G = A.group();
  std::vector<std::uint8_t> mask(G.order(), 0);
  for (auto a : A)
    for (auto b : B) mask[G.mul(a, b)] = 1;
  return ElemSet::from_mask(G, mask);
}

/// |AB| without materializing the product. `scratch` must be all-zero of size |G|
/// and is restored to all-zero on return.
inline std::size_t product_size(ElemSet const& A, ElemSet const& B, std::vector<std::uint8_t>& scratch) {
  Group const& G = A.group();
  std::vector<Group::Elem> touched;
  touched.reserve(A.size() * B.size());
  for (auto a : A)
    for (auto b : B) {
      auto const c = G.mul(a, b);
      if (!scratch[c]) {
        scratch[c] = 1;
        touched.push_back(c);
      }
    }
  for (auto c : touched) scratch[c] = 0;
  return touched.size();
}

/// S^g = g^{-1} S g
inline ElemSet set_conjugate(ElemSet const& S, Group::Elem g) {
  Group const& G = S.group();
  std::vector<Group::Elem> v;
  v.reserve(S.size());
  for (auto s : S) v.push_back(G.conj(s, g));
  return ElemSet(G, std::move(v));
}

inline ElemSet set_inverse(ElemSet const& S) {
  Group const& G = S.group();
  std::vector<Group::Elem> v;
  v.reserve(S.size());
  for (auto s : S) v.push_back(G.inv(s));
  return ElemSet(G, std::move(v));
}

inline ElemSet set_intersection(ElemSet const& A, ElemSet const& B) {
  check_same_group(A, B);
  std::vector<Group::Elem> v;
  std::set_intersection(A.begin(), A.end(), B.begin(), B.end(), std::back_inserter(v));
  return ElemSet(A.group(), std::move(v));
}

inline ElemSet set_union(ElemSet const& A, ElemSet const& B) {
  check_same_group(A, B);
  std::vector<Group::Elem> v;
  std::set_union(A.begin(), A.end(), B.begin(), B.end(), std::back_inserter(v));
  return ElemSet(A.group(), std::move(v));
}

inline ElemSet set_difference(ElemSet const& A, ElemSet const& B) {
  check_same_group(A, B);
  std::vector<Group::Elem> v;
  std::set_difference(A.begin(), A.end(), B.begin(), B.end(), std::back_inserter(v));
  return ElemSet(A.group(), std::move(v));
}

inline std::size_t intersection_size(ElemSet const& A, ElemSet const& B) {
  std::size_t n = 0;
  auto i = A.begin();
  auto j = B.begin();
  while (i != A.end() && j != B.end()) {
    if (*i < *j)
      ++i;
    else if (*j < *i)
      ++j;
    else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

/// Uniform m-subset via a partial Fisher-Yates shuffle; platform independent.
inline ElemSet random_subset(Group const& G, std::size_t m, std::uint64_t seed) {
  std::size_t const N = G.order();
  if (m < 2 || m > N) fail(Errc::SizeOutOfRange, "subset size " + std::to_string(m) + " outside [2, |G|]");
  std::vector<Group::Elem> perm(N);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t const j = i + static_cast<std::size_t>(rng.below(N - i));
    std::swap(perm[i], perm[j]);
  }
  perm.resize(m);
  return ElemSet(G, std::move(perm));
}

/// Uniform m-subset of a given pool (1 <= m <= |pool|).
inline ElemSet random_subset_of(ElemSet const& pool, std::size_t m, std::uint64_t seed) {
  if (m < 1 || m > pool.size()) fail(Errc::SizeOutOfRange, "subset size outside [1, |pool|]");
  std::vector<Group::Elem> v(pool.begin(), pool.end());
  Rng rng(seed);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t const j = i + static_cast<std::size_t>(rng.below(v.size() - i));
    std::swap(v[i], v[j]);
  }
  v.resize(m);
  return ElemSet(pool.group(), std::move(v));
}

inline Group::Elem random_element(Group const& G, Rng& rng) {
  return static_cast<Group::Elem>(rng.below(G.order()));
}

}  // namespace cgrowth
