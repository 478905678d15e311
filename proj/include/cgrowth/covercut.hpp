#pragma once

// Separation of subsets of a class by conjugation, covers of a class by
// conjugates of a subset, and extraction of a subset U with U^{-1}U avoiding
// a symmetric set T.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cgrowth/classes.hpp"
#include "cgrowth/error.hpp"
#include "cgrowth/group.hpp"
#include "cgrowth/rng.hpp"

namespace cgrowth {

inline constexpr std::size_t kDefaultSeparationBudget = 4096;

/// Smallest b with 2^b >= n (n >= 1).
inline std::uint64_t ceil_log2(std::uint64_t n) {
  std::uint64_t b = 0;
  while ((std::uint64_t{1} << b) < n) ++b;
  return b;
}

/// |S^g ∩ T| with T given as a membership mask.
inline std::size_t conjugate_overlap(ElemSet const& S, Group::Elem g, std::vector<std::uint8_t> const& t_mask) {
  Group const& G = S.group();
  std::size_t n = 0;
  for (auto s : S) n += t_mask[G.conj(s, g)];
  return n;
}

/// Does g meet |S^g ∩ T| <= min(|S| - 1, |S||T|/|C|)? Integer arithmetic only.
inline bool separation_bound_holds(std::size_t overlap, std::size_t s, std::size_t t, std::size_t c) {
  return overlap + 1 <= s && overlap * c <= s * t;
}

/// Finds g with |S^g ∩ T| <= min(|S| - 1, |S||T|/|C|): `budget` seeded random
/// candidates first, then a sweep over G in canonical order.
inline Group::Elem separation_search(ElemSet const& S, ElemSet const& T, ClassTable const& table, ClassRef C,
                                     std::size_t budget = kDefaultSeparationBudget, std::uint64_t seed = 0) {
  check_same_group(S, T);
  Group const& G = S.group();
  auto const& cls = table[C].members;
  if (S.empty() || !S.is_subset_of(cls) || S.size() >= cls.size())
    fail(Errc::NotProperSubset, "S must be a nonempty proper subset of the class");
  if (!T.is_subset_of(cls) || T.size() >= cls.size()) fail(Errc::NotProperSubset, "T must be a proper subset of the class");
  auto const mask = T.mask();
  auto const ok = [&](Group::Elem g) {
    return separation_bound_holds(conjugate_overlap(S, g, mask), S.size(), T.size(), cls.size());
  };
  Rng rng(seed);
  for (std::size_t i = 0; i < budget; ++i) {
    auto g = random_element(G, rng);
    if (ok(g)) return g;
  }
  for (Group::Elem g = 0; g < G.order(); ++g)
    if (ok(g)) return g;
  fail(Errc::ExhaustedWitness, "no separating conjugator exists; this contradicts the counting argument");
}

enum class CoverMethod { Greedy, Randomized };

struct CoverResult {
  std::vector<Group::Elem> conjugators;  // H, in the order chosen or drawn
  ClassRef covered = 0;
  std::size_t class_size = 0;
  std::size_t subset_size = 0;
  std::uint64_t bound_proof_internal = 0;  // ceil(|C|/|S|) * (ceil(log2 |S|) + 1)
  double bound_published = 0;              // 6 |C| ln|S| / |S|
  CoverMethod method = CoverMethod::Greedy;
  std::uint64_t planned_draws = 0;  // randomized: t = floor(|C| ln|C| / |S|) + 1
  std::uint64_t extra_draws = 0;    // randomized: draws beyond t
  bool covers = false;              // recomputed from scratch after construction

  std::size_t size() const noexcept { return conjugators.size(); }
  bool within_proof_bound() const noexcept { return conjugators.size() <= bound_proof_internal; }
  bool within_published_bound() const noexcept { return static_cast<double>(conjugators.size()) <= bound_published; }
};

/// Does ⋃_{h∈H} S^h equal the class? Independent of how H was built.
inline bool verify_cover(ElemSet const& S, std::vector<Group::Elem> const& H, ElemSet const& cls) {
  Group const& G = S.group();
  std::vector<std::uint8_t> hit(G.order(), 0);
  for (auto h : H)
    for (auto s : S) hit[G.conj(s, h)] = 1;
  for (auto x : cls)
    if (!hit[x]) return false;
  std::size_t total = 0;
  for (auto v : hit) total += v;
  return total == cls.size();
}

namespace detail {

inline CoverResult cover_header(ElemSet const& S, ClassTable const& table, ClassRef C, CoverMethod method) {
  auto const& cls = table[C].members;
  if (S.size() < 2) fail(Errc::SubsetTooSmall, "cover requires |S| >= 2");
  if (!S.is_subset_of(cls)) fail(Errc::NotInClass, "S is not contained in the class");
  CoverResult r;
  r.covered = C;
  r.class_size = cls.size();
  r.subset_size = S.size();
  r.method = method;
  std::uint64_t const c = cls.size(), s = S.size();
  r.bound_proof_internal = ((c + s - 1) / s) * (ceil_log2(s) + 1);
  r.bound_published = 6.0 * static_cast<double>(c) * std::log(static_cast<double>(s)) / static_cast<double>(s);
  return r;
}

}  // namespace detail

/// Builds H one conjugator at a time, each step taking h that maximizes
/// |S^h \ T_i|. Candidates are scanned identity first, then in canonical
/// order; the first maximizer wins.
inline CoverResult greedy_cover(ElemSet const& S, ClassTable const& table, ClassRef C) {
  auto r = detail::cover_header(S, table, C, CoverMethod::Greedy);
  Group const& G = S.group();
  std::size_t const N = G.order();
  std::vector<std::uint8_t> covered(N, 0);
  std::size_t remaining = r.class_size;
  Group::Elem const e = G.identity();
  while (remaining > 0) {
    std::size_t best = 0;
    Group::Elem best_h = e;
    auto consider = [&](Group::Elem h) {
      std::size_t fresh = 0;
      for (auto s : S) fresh += !covered[G.conj(s, h)];
      if (fresh > best) {
        best = fresh;
        best_h = h;
      }
      return best == S.size();
    };
    if (!consider(e)) {
      for (Group::Elem h = 0; h < N; ++h) {
        if (h != e && consider(h)) break;
      }
    }
    if (best == 0) fail(Errc::InvariantViolated, "greedy cover made no progress");
    for (auto s : S) {
      auto& c = covered[G.conj(s, best_h)];
      if (!c) {
        c = 1;
        --remaining;
      }
    }
    r.conjugators.push_back(best_h);
  }
  r.covers = verify_cover(S, r.conjugators, table[C].members);
  return r;
}

/// Draws t = floor(|C| ln|C| / |S|) + 1 uniform conjugators, then single extra
/// draws until C is covered.
inline CoverResult randomized_cover(ElemSet const& S, ClassTable const& table, ClassRef C, std::uint64_t seed) {
  auto r = detail::cover_header(S, table, C, CoverMethod::Randomized);
  Group const& G = S.group();
  double const c = static_cast<double>(r.class_size);
  r.planned_draws = static_cast<std::uint64_t>(std::floor(c * std::log(c) / static_cast<double>(r.subset_size))) + 1;
  std::vector<std::uint8_t> covered(G.order(), 0);
  std::size_t remaining = r.class_size;
  Rng rng(seed);
  auto draw = [&] {
    auto h = random_element(G, rng);
    r.conjugators.push_back(h);
    for (auto s : S) {
      auto& m = covered[G.conj(s, h)];
      if (!m) {
        m = 1;
        --remaining;
      }
    }
  };
  for (std::uint64_t i = 0; i < r.planned_draws; ++i) draw();
  while (remaining > 0) {
    draw();
    ++r.extra_draws;
  }
  r.covers = verify_cover(S, r.conjugators, table[C].members);
  return r;
}

struct CutPolicy {
  /// nullopt: always take the least remaining element; otherwise a seeded
  /// uniform choice.
  std::optional<std::uint64_t> seed;

  static CutPolicy least_canonical() { return {}; }
  static CutPolicy seeded(std::uint64_t s) { return {s}; }
};

/// U ⊆ S with |U| >= |S| / (|T| + 1) and U^{-1}U ∩ T = ∅, for e ∉ T = T^{-1}.
/// Picks x from V, then removes {x} ∪ xT from V, until V is empty. With
/// `checked`, the loop invariants U∩V = ∅, U^{-1}U∩T = ∅ and U^{-1}V∩T = ∅
/// are re-verified after every step.
inline ElemSet cut_small(ElemSet const& S, ElemSet const& T, CutPolicy policy = {}, bool checked = false) {
  check_same_group(S, T);
  Group const& G = S.group();
  if (T.contains(G.identity())) fail(Errc::BadT, "T contains the identity");
  if (!(set_inverse(T) == T)) fail(Errc::BadT, "T is not closed under inversion");
  std::vector<Group::Elem> V(S.begin(), S.end());
  std::vector<std::uint8_t> in_v = S.mask();
  std::vector<Group::Elem> U;
  std::optional<Rng> rng;
  if (policy.seed) rng.emplace(*policy.seed);
  auto const t_mask = T.mask();
  std::size_t cursor = 0;
  std::size_t live = V.size();
  while (live > 0) {
    Group::Elem x;
    if (rng) {
      // compact V, then draw uniformly
      std::erase_if(V, [&](Group::Elem v) { return !in_v[v]; });
      cursor = 0;
      x = V[static_cast<std::size_t>(rng->below(V.size()))];
    } else {
      while (!in_v[V[cursor]]) ++cursor;
      x = V[cursor];
    }
    U.push_back(x);
    in_v[x] = 0;
    --live;
    for (auto t : T) {
      auto const y = G.mul(x, t);
      if (in_v[y]) {
        in_v[y] = 0;
        --live;
      }
    }
    if (checked) {
      std::vector<Group::Elem> v_now;
      for (auto v : V)
        if (in_v[v]) v_now.push_back(v);
      for (auto u : U) {
        if (in_v[u]) fail(Errc::InvariantViolated, "U and V intersect");
        auto const ui = G.inv(u);
        for (auto w : U)
          if (t_mask[G.mul(ui, w)]) fail(Errc::InvariantViolated, "U^-1 U meets T");
        for (auto w : v_now)
          if (t_mask[G.mul(ui, w)]) fail(Errc::InvariantViolated, "U^-1 V meets T");
      }
    }
  }
  return ElemSet(G, std::move(U));
}

/// U^{-1}U ∩ T = ∅, recomputed directly.
inline bool inverse_square_avoids(ElemSet const& U, ElemSet const& T) {
  Group const& G = U.group();
  auto const mask = T.mask();
  for (auto a : U) {
    auto const ai = G.inv(a);
    for (auto b : U)
      if (mask[G.mul(ai, b)]) return false;
  }
  return true;
}

}  // namespace cgrowth
