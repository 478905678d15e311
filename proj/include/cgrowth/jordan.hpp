#pragma once

// Jordan block multiplicities of elements of SL(n,q) over a splitting field,
// centralizer dimension formulas, centralizer degree estimates from exact
// class sizes, and products of conjugates realizing a prescribed type.

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cgrowth/classes.hpp"
#include "cgrowth/error.hpp"
#include "cgrowth/ff.hpp"
#include "cgrowth/group.hpp"
#include "cgrowth/rng.hpp"

namespace cgrowth {

struct JordanType {
  int n = 0;
  FieldPtr field;  // splitting field the eigenvalues live in
  std::map<std::pair<Field::Elem, int>, int> entries;  // (lambda, block size) -> count
  std::optional<Field::Elem> special;  // least lambda with 2 n_1 >= n

  int count(Field::Elem lambda, int i) const {
    auto it = entries.find({lambda, i});
    return it == entries.end() ? 0 : it->second;
  }

  std::vector<Field::Elem> eigenvalues() const {
    std::vector<Field::Elem> v;
    for (auto const& [key, c] : entries)
      if (v.empty() || v.back() != key.first) v.push_back(key.first);
    return v;
  }

  /// Σ i n_i
  int dimension() const {
    int s = 0;
    for (auto const& [key, c] : entries) s += key.second * c;
    return s;
  }

  bool operator==(JordanType const& o) const {
    return n == o.n && field->q() == o.field->q() && entries == o.entries && special == o.special;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << "F_" << field->q() << ":";
    for (auto const& [key, c] : entries) os << " J" << key.second << "(" << field->encode(key.first) << ")^" << c;
    if (special) os << " special=" << field->encode(*special);
    return os.str();
  }
};

namespace detail {

/// det of a polynomial matrix by cofactor expansion along the first row (n <= 6).
inline Poly poly_det(std::vector<std::vector<Poly>> const& m, FieldPtr const& F) {
  std::size_t const n = m.size();
  if (n == 1) return m[0][0];
  Poly acc(F);
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    std::vector<std::vector<Poly>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<Poly> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(std::move(row));
    }
    Poly const t = m[0][j] * poly_det(minor, F);
    acc = j % 2 == 0 ? acc + t : acc - t;
  }
  return acc;
}

inline Matrix embed_matrix(Matrix const& x, Extension const& ext) {
  Matrix y = x;
  for (int i = 0; i < x.n * x.n; ++i) y.a[static_cast<std::size_t>(i)] = ext.embed(x.a[static_cast<std::size_t>(i)]);
  return y;
}

}  // namespace detail

/// det(tI - x) over the entry field.
inline Poly characteristic_polynomial(Matrix const& x, FieldPtr const& F) {
  std::vector<std::vector<Poly>> m(static_cast<std::size_t>(x.n));
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j) {
      Poly e = Poly::constant(F, F->neg(x(i, j)));
      if (i == j) e = e + Poly::x(F);
      m[static_cast<std::size_t>(i)].push_back(e);
    }
  return detail::poly_det(m, F);
}

/// Degree over F of the splitting field of the characteristic polynomial.
inline std::uint32_t splitting_degree(Matrix const& x, FieldPtr const& F) {
  std::uint32_t d = 1;
  for (auto const& [f, e] : poly_factor(characteristic_polynomial(x, F))) d = std::lcm(d, static_cast<std::uint32_t>(f.degree()));
  return d;
}

/// Type of x (entries over ext.base) with eigenvalues read in ext.field.
/// Eigenvalues not in ext.field are absent, so dimension() < n then.
inline JordanType jordan_type_in(Matrix const& x, Extension const& ext) {
  auto const& E = ext.field;
  int const n = x.n;
  JordanType jt;
  jt.n = n;
  jt.field = E;
  Poly const chi = ext.embed(characteristic_polynomial(x, ext.base));
  MatrixOps const ops(E, n);
  Matrix const xe = detail::embed_matrix(x, ext);
  for (Field::Elem lambda = 1; lambda < E->q(); ++lambda) {
    if (chi.eval(lambda) != 0) continue;
    Matrix const shifted = ops.sub(xe, ops.scalar(lambda));
    // kernel dimensions d_j of (x - lambda)^j, j = 0..n+1
    std::vector<int> d(static_cast<std::size_t>(n) + 2, 0);
    Matrix p = ops.identity();
    for (int j = 1; j <= n + 1; ++j) {
      p = ops.mul(p, shifted);
      d[static_cast<std::size_t>(j)] = n - ops.rank(p);
    }
    for (int i = 1; i <= n; ++i) {
      int const ni = 2 * d[static_cast<std::size_t>(i)] - d[static_cast<std::size_t>(i) - 1] - d[static_cast<std::size_t>(i) + 1];
      if (ni > 0) jt.entries[{lambda, i}] = ni;
    }
  }
  for (auto lambda : jt.eigenvalues())
    if (2 * jt.count(lambda, 1) >= n) {
      jt.special = lambda;
      break;
    }
  return jt;
}

/// Type of x ∈ SL(n,q) over the splitting field of its characteristic polynomial.
inline JordanType jordan_type(Matrix const& x, FieldPtr const& F, std::uint64_t cap = kDefaultFieldCap) {
  auto const ext = field_extend(F, splitting_degree(x, F), cap);
  auto jt = jordan_type_in(x, ext);
  if (jt.dimension() != x.n) fail(Errc::InvariantViolated, "block sizes do not add up to n");
  return jt;
}

inline JordanType jordan_type(Group const& G, Matrix const& x, std::uint64_t cap = kDefaultFieldCap) {
  if (!G.is_member(x)) fail(Errc::InvalidArgument, "matrix is not in " + G.name());
  return jordan_type(x, G.field(), cap);
}

enum class FamilyRow { SL_SU, Sp, SO };

inline std::string row_name(FamilyRow r) {
  switch (r) {
    case FamilyRow::SL_SU: return "SL/SU";
    case FamilyRow::Sp: return "Sp";
    case FamilyRow::SO: return "SO";
  }
  return "?";
}

inline FamilyRow parse_row(std::string_view s) {
  if (s == "sl" || s == "su" || s == "SL" || s == "SU" || s == "SL/SU") return FamilyRow::SL_SU;
  if (s == "sp" || s == "Sp") return FamilyRow::Sp;
  if (s == "so" || s == "SO") return FamilyRow::SO;
  fail(Errc::InvalidArgument, "unknown row '" + std::string(s) + "'");
}

struct CentralizerParams {
  long R = 0;
  long S = 0;
  FamilyRow row = FamilyRow::SL_SU;
  long m = 0;
  long dimG = 0;
};

inline CentralizerParams centralizer_params(JordanType const& jt, FamilyRow row) {
  CentralizerParams c;
  c.row = row;
  auto const& E = *jt.field;
  Field::Elem const plus = E.one(), minus = E.neg(E.one());
  for (auto lambda : jt.eigenvalues()) {
    std::vector<std::pair<int, int>> blocks;  // (i, n_i), increasing i
    for (auto const& [key, cnt] : jt.entries)
      if (key.first == lambda) blocks.emplace_back(key.second, cnt);
    for (std::size_t a = 0; a < blocks.size(); ++a) {
      auto const [i, ni] = blocks[a];
      c.R += static_cast<long>(i) * ni * ni;
      for (std::size_t b = a + 1; b < blocks.size(); ++b) c.R += 2L * i * ni * blocks[b].second;
      if ((lambda == plus || lambda == minus) && i % 2 == 1) c.S += ni;
    }
  }
  long const n = jt.n;
  switch (row) {
    case FamilyRow::SL_SU:
      c.m = c.R - 1;
      c.dimG = n * n - 1;
      break;
    case FamilyRow::Sp:
      if ((c.R + c.S) % 2 != 0) fail(Errc::ParityViolation, "R + S is odd");
      c.m = (c.R + c.S) / 2;
      c.dimG = (n * n + n) / 2;
      break;
    case FamilyRow::SO:
      if ((c.R - c.S) % 2 != 0 || c.R < c.S) fail(Errc::ParityViolation, "R - S is odd or negative");
      c.m = (c.R - c.S) / 2;
      c.dimG = (n * n - n) / 2;
      break;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Centralizer degree

/// Jordan blocks J_size(lambda) with lambda an integer read in the prime field.
struct PrimeBlock {
  long lambda = 1;
  int size = 1;
};

/// Block-diagonal matrix for the blocks, or TypeUnavailable when the type does
/// not exist in SL(n,q) (eigenvalue 0, merged eigenvalues, det != 1).
inline Matrix prime_jordan_matrix(std::vector<PrimeBlock> const& blocks, FieldPtr const& F) {
  int n = 0;
  for (auto const& b : blocks) n += b.size;
  if (n < 1 || n > kMaxDim) fail(Errc::InvalidArgument, "block sizes must add up to a dimension in 1.." + std::to_string(kMaxDim));
  std::map<long, Field::Elem> seen;
  for (auto const& b : blocks) {
    if (b.size < 1) fail(Errc::InvalidArgument, "block size must be >= 1");
    Field::Elem const v = F->from_int(b.lambda);
    if (v == 0) fail(Errc::TypeUnavailable, "eigenvalue vanishes in F_" + std::to_string(F->q()));
    for (auto const& [l, w] : seen)
      if (l != b.lambda && w == v) fail(Errc::TypeUnavailable, "distinct eigenvalues coincide in F_" + std::to_string(F->q()));
    seen[b.lambda] = v;
  }
  MatrixOps const ops(F, n);
  Matrix m = ops.scalar(0);
  int at = 0;
  for (auto const& b : blocks) {
    Field::Elem const v = F->from_int(b.lambda);
    for (int i = 0; i < b.size; ++i) {
      m.a[static_cast<std::size_t>((at + i) * n + at + i)] = v;
      if (i + 1 < b.size) m.a[static_cast<std::size_t>((at + i) * n + at + i + 1)] = F->one();
    }
    at += b.size;
  }
  if (ops.det(m) != F->one()) fail(Errc::TypeUnavailable, "determinant is not 1 in F_" + std::to_string(F->q()));
  return m;
}

/// |x^G|, as the orbit of x under conjugation by the generators, on matrices.
inline std::uint64_t class_size(Group const& G, Matrix const& x) {
  auto const& ops = G.ops();
  std::vector<std::pair<Matrix, Matrix>> gens;
  for (auto const& g : G.generators()) gens.emplace_back(g, ops.inv(g));
  std::unordered_set<std::uint64_t> seen{G.key(G.canonical(x))};
  std::vector<Matrix> todo{G.canonical(x)};
  for (std::size_t i = 0; i < todo.size(); ++i)
    for (auto const& [g, gi] : gens) {
      Matrix const y = G.canonical(ops.mul(ops.mul(gi, todo[i]), g));
      if (seen.insert(G.key(y)).second) todo.push_back(y);
    }
  return todo.size();
}

struct DegreeCheck {
  int n = 0;
  std::uint64_t q1 = 0, q2 = 0;
  std::uint64_t order1 = 0, order2 = 0;
  std::uint64_t class1 = 0, class2 = 0;
  std::uint64_t centralizer1 = 0, centralizer2 = 0;
  double degree = 0;  // log(C2/C1) / log(q2/q1)
  long m = 0;
  double tolerance = 1.0;
  bool pass = false;
  std::string type;
};

/// Exact centralizer orders |SL(n,q)| / |class| at q1 and q2 and the degree
/// they imply, compared with m = R - 1.
inline DegreeCheck centralizer_degree_check(std::vector<PrimeBlock> const& blocks, std::uint64_t q1, std::uint64_t q2,
                                            double tolerance = 1.0, std::uint64_t cap = kDefaultGroupCap) {
  if (q1 == q2) fail(Errc::InvalidArgument, "q1 and q2 must differ");
  DegreeCheck r;
  r.q1 = q1;
  r.q2 = q2;
  r.tolerance = tolerance;
  std::optional<JordanType> first;
  auto measure = [&](std::uint64_t q, std::uint64_t& order, std::uint64_t& cls, std::uint64_t& cent) {
    auto const F = Field::of_order(q);
    Matrix const x = prime_jordan_matrix(blocks, F);
    auto G = Group::make(Family::SL, x.n, q, cap);
    order = G->order_estimate();
    cls = class_size(*G, x);
    cent = order / cls;
    auto jt = jordan_type(*G, x);
    if (!first) first = jt;
    r.n = x.n;
  };
  measure(q1, r.order1, r.class1, r.centralizer1);
  measure(q2, r.order2, r.class2, r.centralizer2);
  r.degree = std::log(static_cast<double>(r.centralizer2) / static_cast<double>(r.centralizer1)) /
             std::log(static_cast<double>(q2) / static_cast<double>(q1));
  r.m = centralizer_params(*first, FamilyRow::SL_SU).m;
  r.type = first->to_string();
  r.pass = std::abs(r.degree - static_cast<double>(r.m)) <= tolerance;
  return r;
}

// ---------------------------------------------------------------------------
// Class product witness

struct WitnessResult {
  Matrix y;
  Matrix g1, g2;  // y = x1^{g1} x2^{g2}
  JordanType type;
  JordanType target;
  std::string stage;  // "identity", "permutation", "random"
  std::size_t tried = 0;
};

/// Type of y predicted from the special eigenvalues of x1 and x2: blocks of x1
/// scaled by lambda_2, blocks of x2 scaled by lambda_1 (the special 1-blocks
/// left out), and n_1(x1) + n_1(x2) - n one-blocks at lambda_1 lambda_2.
inline JordanType target_type(JordanType const& t1, JordanType const& t2) {
  if (!t1.special || !t2.special) fail(Errc::PreconditionFailed, "both elements need a special eigenvalue");
  if (t1.field->q() != t2.field->q() || t1.n != t2.n) fail(Errc::FieldMismatch, "types live in different fields");
  auto const& E = *t1.field;
  Field::Elem const l1 = *t1.special, l2 = *t2.special;
  JordanType t;
  t.n = t1.n;
  t.field = t1.field;
  for (auto const& [key, c] : t1.entries)
    if (!(key.first == l1 && key.second == 1)) t.entries[{E.mul(key.first, l2), key.second}] += c;
  for (auto const& [key, c] : t2.entries)
    if (!(key.first == l2 && key.second == 1)) t.entries[{E.mul(key.first, l1), key.second}] += c;
  int const ones = t1.count(l1, 1) + t2.count(l2, 1) - t1.n;
  if (ones > 0) t.entries[{E.mul(l1, l2), 1}] += ones;
  for (auto lambda : t.eigenvalues())
    if (2 * t.count(lambda, 1) >= t.n) {
      t.special = lambda;
      break;
    }
  return t;
}

namespace detail {

/// Permutation matrices, one row negated when needed so that det = 1.
inline std::vector<Matrix> signed_permutations(MatrixOps const& ops) {
  int const n = ops.n();
  auto const& F = *ops.field();
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Matrix> out;
  do {
    Matrix m = ops.scalar(0);
    for (int i = 0; i < n; ++i) m.a[static_cast<std::size_t>(i * n + perm[static_cast<std::size_t>(i)])] = F.one();
    if (ops.det(m) != F.one()) {
      for (int j = 0; j < n; ++j) m.a[static_cast<std::size_t>(j)] = F.neg(m.a[static_cast<std::size_t>(j)]);
    }
    out.push_back(m);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

/// Uniform invertible matrix with its first row rescaled to det 1.
inline Matrix random_sl(MatrixOps const& ops, Rng& rng) {
  auto const& F = *ops.field();
  int const n = ops.n();
  for (;;) {
    Matrix m;
    m.n = n;
    for (int i = 0; i < n * n; ++i) m.a[static_cast<std::size_t>(i)] = static_cast<Field::Elem>(rng.below(F.q()));
    Field::Elem const d = ops.det(m);
    if (d == 0) continue;
    Field::Elem const s = F.inv(d);
    for (int j = 0; j < n; ++j) m.a[static_cast<std::size_t>(j)] = F.mul(m.a[static_cast<std::size_t>(j)], s);
    return m;
  }
}

}  // namespace detail

/// Searches y = x1^{g1} x2^{g2} with the target type: identity conjugators,
/// then signed permutation matrices for g2, then seeded random pairs.
inline WitnessResult class_product_witness(Group const& G, Matrix const& x1, Matrix const& x2, std::size_t budget,
                                           std::uint64_t seed, std::uint64_t cap = kDefaultFieldCap) {
  if (!G.is_member(x1) || !G.is_member(x2)) fail(Errc::InvalidArgument, "inputs must lie in " + G.name());
  auto const& F = G.field();
  std::uint32_t const d = std::lcm(splitting_degree(x1, F), splitting_degree(x2, F));
  auto const ext = field_extend(F, d, cap);
  JordanType const t1 = jordan_type_in(x1, ext), t2 = jordan_type_in(x2, ext);
  WitnessResult r;
  r.target = target_type(t1, t2);
  MatrixOps const& ops = G.ops();
  auto attempt = [&](Matrix const& g1, Matrix const& g2, char const* stage) {
    ++r.tried;
    Matrix const y = ops.mul(ops.mul(ops.mul(ops.inv(g1), x1), g1), ops.mul(ops.mul(ops.inv(g2), x2), g2));
    JordanType const t = jordan_type_in(y, ext);
    if (!(t == r.target)) return false;
    r.y = y;
    r.g1 = g1;
    r.g2 = g2;
    r.type = t;
    r.stage = stage;
    return true;
  };
  Matrix const e = ops.identity();
  if (attempt(e, e, "identity")) return r;
  for (auto const& p : detail::signed_permutations(ops))
    if (attempt(e, p, "permutation")) return r;
  Rng rng(seed);
  for (std::size_t i = 0; i < budget; ++i) {
    Matrix const g1 = detail::random_sl(ops, rng);
    Matrix const g2 = detail::random_sl(ops, rng);
    if (attempt(g1, g2, "random")) return r;
  }
  fail(Errc::NoWitnessInBudget, "no product of conjugates with type " + r.target.to_string());
}

}  // namespace cgrowth
