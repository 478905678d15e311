#pragma once

// Growth steps: products of conjugates of a base set, the P1/P2 predicates,
// disjoint conjugates, exact small-set growth, the conjugation product step,
// the large-intersection loop over classes, and greedy closure to G.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cgrowth/classes.hpp"
#include "cgrowth/covercut.hpp"
#include "cgrowth/error.hpp"
#include "cgrowth/group.hpp"
#include "cgrowth/rng.hpp"

namespace cgrowth {

struct GrowthParams {
  double epsilon = 0.5;
  double delta = 0.25;
  double tau = 0.05;
  int b = 8;
  std::optional<double> eta;  // defaults to epsilon / 100

  // Stage gates |G|^theta replacing the asymptotic thresholds.
  double theta1 = 0.25;
  double theta2 = 0.5;
  double theta4 = 0.75;
  double theta_escape = 0.75;  // Y_k escape size in the class loop

  std::size_t search_budget = 256;       // random candidates before a sweep
  std::size_t sweep_cap = 1'000'000;     // no exhaustive sweep above this |G|
  std::size_t close_budget = 64;         // max factors appended by greedy_close
  std::size_t close_sample = 2048;       // candidates per close step when |G| is larger
  std::size_t max_iterations = 32;       // per staged loop

  double eta_value() const { return eta.value_or(epsilon / 100.0); }

  void validate() const {
    if (!(epsilon > 0 && epsilon <= 0.5)) fail(Errc::InvalidArgument, "epsilon must lie in (0, 1/2]");
    if (!(delta > 0 && delta <= 1)) fail(Errc::InvalidArgument, "delta must lie in (0, 1]");
    if (!(tau > 0)) fail(Errc::InvalidArgument, "tau must be positive");
    if (b < 1) fail(Errc::InvalidArgument, "b must be >= 1");
    double const e = eta_value();
    if (!(e > 0 && e < 1)) fail(Errc::InvalidArgument, "eta must lie in (0, 1)");
    for (double t : {theta1, theta2, theta4, theta_escape})
      if (!(t > 0 && t <= 1)) fail(Errc::InvalidArgument, "stage exponents must lie in (0, 1]");
  }
};

// ---------------------------------------------------------------------------
// Words of conjugates

struct Factor {
  Group::Elem conjugator = 0;
  int orientation = 1;  // +1: A, -1: A^{-1}
  bool operator==(Factor const&) const = default;
};

/// Π (A^{orientation})^{conjugator}, read left to right, over some base set A.
struct FactorWord {
  std::vector<Factor> factors;

  std::size_t size() const noexcept { return factors.size(); }
  bool operator==(FactorWord const&) const = default;

  static FactorWord single(Group::Elem g, int orientation = 1) { return FactorWord{{Factor{g, orientation}}}; }

  /// (A^g)^h = A^{gh}
  FactorWord conjugated(Group const& G, Group::Elem h) const {
    FactorWord w = *this;
    for (auto& f : w.factors) f.conjugator = G.mul(f.conjugator, h);
    return w;
  }

  /// (Π A_i)^{-1} = Π reversed (A_i^{-1})
  FactorWord inverse() const {
    FactorWord w;
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) w.factors.push_back({it->conjugator, -it->orientation});
    return w;
  }

  FactorWord& append(FactorWord const& o) {
    factors.insert(factors.end(), o.factors.begin(), o.factors.end());
    return *this;
  }

  FactorWord concat(FactorWord const& o) const {
    FactorWord w = *this;
    return w.append(o);
  }
};

/// Given an outer word over X and an inner word with X ⊆ expand(inner, A),
/// returns a word over A whose expansion contains expand(outer, X).
inline FactorWord compose(Group const& G, FactorWord const& outer, FactorWord const& inner) {
  FactorWord inv = inner.inverse();
  FactorWord w;
  for (auto const& f : outer.factors) w.append((f.orientation > 0 ? inner : inv).conjugated(G, f.conjugator));
  return w;
}

inline ElemSet factor_set(ElemSet const& base, ElemSet const& base_inv, Factor const& f) {
  return set_conjugate(f.orientation > 0 ? base : base_inv, f.conjugator);
}

/// Left-to-right expansion. Returns the sizes of every prefix product in
/// `prefix_sizes` when given.
inline ElemSet expand(FactorWord const& w, ElemSet const& base, std::vector<std::size_t>* prefix_sizes = nullptr) {
  Group const& G = base.group();
  if (w.factors.empty()) return ElemSet::singleton(G, G.identity());
  ElemSet const base_inv = set_inverse(base);
  ElemSet acc = factor_set(base, base_inv, w.factors[0]);
  if (prefix_sizes) prefix_sizes->assign(1, acc.size());
  for (std::size_t i = 1; i < w.factors.size(); ++i) {
    acc = set_product(acc, factor_set(base, base_inv, w.factors[i]));
    if (prefix_sizes) prefix_sizes->push_back(acc.size());
  }
  return acc;
}

// ---------------------------------------------------------------------------
// P1 / P2

/// X^{-1}X
inline ElemSet quotient_left(ElemSet const& X) { return set_product(set_inverse(X), X); }
/// XX^{-1}
inline ElemSet quotient_right(ElemSet const& X) { return set_product(X, set_inverse(X)); }

inline std::vector<std::size_t> class_histogram(ElemSet const& S, ClassTable const& T) {
  std::vector<std::size_t> h(T.count(), 0);
  for (auto x : S) ++h[T.class_of(x)];
  return h;
}

/// Threshold |X|^{eps/3} separating small from large classes.
inline double class_threshold(std::size_t x_size, double epsilon) {
  return std::pow(static_cast<double>(x_size), epsilon / 3.0);
}

/// Every nontrivial class C with |C| < |X|^{eps/3} has X^{-1}X ∩ C = ∅.
inline bool check_P1(ElemSet const& X, double epsilon, ClassTable const& T) {
  double const th = class_threshold(X.size(), epsilon);
  auto const hist = class_histogram(quotient_left(X), T);
  for (ClassRef c = 0; c < T.count(); ++c) {
    if (c == T.identity_class()) continue;
    if (static_cast<double>(T[c].size()) < th && hist[c] > 0) return false;
  }
  return true;
}

struct P2Violation {
  ClassRef cls = 0;
  std::size_t left = 0;   // |X^{-1}X ∩ C|
  std::size_t right = 0;  // |XX^{-1} ∩ C|
};

/// Classes with |C| >= |X|^{eps/3} where X^{-1}X or XX^{-1} meets C in at
/// least |C|^{1/4} elements.
inline std::vector<P2Violation> p2_violations(ElemSet const& X, double epsilon, ClassTable const& T) {
  double const th = class_threshold(X.size(), epsilon);
  auto const hl = class_histogram(quotient_left(X), T);
  auto const hr = class_histogram(quotient_right(X), T);
  std::vector<P2Violation> out;
  for (ClassRef c = 0; c < T.count(); ++c) {
    if (c == T.identity_class()) continue;
    double const sz = static_cast<double>(T[c].size());
    if (sz < th) continue;
    double const quarter = std::pow(sz, 0.25);
    if (static_cast<double>(hl[c]) >= quarter || static_cast<double>(hr[c]) >= quarter) out.push_back({c, hl[c], hr[c]});
  }
  return out;
}

inline bool check_P2(ElemSet const& X, double epsilon, ClassTable const& T) { return p2_violations(X, epsilon, T).empty(); }

// ---------------------------------------------------------------------------
// Candidate search

namespace detail {

/// `budget` seeded random candidates, then (if |G| <= sweep_cap) a sweep in
/// canonical order. Returns the first candidate accepted by `ok`.
template <class Pred>
std::optional<Group::Elem> find_conjugator(Group const& G, std::size_t budget, std::uint64_t seed, std::size_t sweep_cap,
                                           Pred&& ok) {
  Rng rng(seed);
  for (std::size_t i = 0; i < budget; ++i) {
    auto g = random_element(G, rng);
    if (ok(g)) return g;
  }
  if (G.order() <= sweep_cap) {
    for (Group::Elem g = 0; g < G.order(); ++g)
      if (ok(g)) return g;
  }
  return std::nullopt;
}

}  // namespace detail

/// g with X^{-1}X ∩ (XX^{-1})^g = {e}; then |XX^g| = |X|^2 is checked.
inline Group::Elem disjoint_conjugate_search(ElemSet const& X, std::size_t budget, std::uint64_t seed,
                                             std::size_t sweep_cap = 1'000'000) {
  Group const& G = X.group();
  if (X.empty()) fail(Errc::InvalidArgument, "X must be nonempty");
  auto const left = quotient_left(X).mask();
  std::vector<Group::Elem> right;
  for (auto z : quotient_right(X))
    if (z != G.identity()) right.push_back(z);
  auto ok = [&](Group::Elem g) {
    for (auto z : right)
      if (left[G.conj(z, g)]) return false;
    return true;
  };
  auto g = detail::find_conjugator(G, budget, seed, sweep_cap, ok);
  if (!g) fail(Errc::NoWitness, "no g with X^-1 X ∩ (XX^-1)^g = {e}");
  if (set_product(X, set_conjugate(X, *g)).size() != X.size() * X.size())
    fail(Errc::InvariantViolated, "disjoint conjugate did not give |XX^g| = |X|^2");
  return *g;
}

struct XclsmallResult {
  ElemSet next;                // X'
  Group::Elem conjugator = 0;  // g
  FactorWord word;             // [(e,+1), (g,+1)] over X
  std::size_t product_size = 0;  // |XX^g|
  double cut_threshold = 0;      // |XX^g|^{eps/3}
  std::size_t cut_set_size = 0;  // |T|
  bool size_claim_applicable = false;  // |X| >= q^{100 r / eps}
  bool size_claim_holds = false;       // |X'| >= |X|^{2 - eps}
  bool p1_next = false;
};

/// One doubling step for X with P1 and P2: a disjoint conjugate, then
/// removal of the small classes from (XX^g)^{-1}(XX^g).
inline XclsmallResult xclsmall_step(ElemSet const& X, double epsilon, ClassTable const& T, std::uint64_t seed,
                                    std::size_t budget = 256, std::size_t sweep_cap = 1'000'000) {
  if (!check_P1(X, epsilon, T)) fail(Errc::PreconditionFailed, "P1 does not hold");
  if (!check_P2(X, epsilon, T)) fail(Errc::PreconditionFailed, "P2 does not hold");
  Group const& G = X.group();
  XclsmallResult r;
  r.conjugator = disjoint_conjugate_search(X, budget, seed, sweep_cap);
  ElemSet const S = set_product(X, set_conjugate(X, r.conjugator));
  r.product_size = S.size();
  r.cut_threshold = class_threshold(S.size(), epsilon);
  ElemSet const small = small_class_union(T, r.cut_threshold);
  r.cut_set_size = small.size();
  r.next = cut_small(S, small);
  r.word = FactorWord{{Factor{G.identity(), 1}, Factor{r.conjugator, 1}}};
  r.p1_next = check_P1(r.next, epsilon, T);
  if (!r.p1_next) fail(Errc::InvariantViolated, "P1 fails for the cut product");
  double const lq = std::log(static_cast<double>(G.q()));
  r.size_claim_applicable = std::log(static_cast<double>(X.size())) >= 100.0 * G.rank() / epsilon * lq;
  r.size_claim_holds = std::log(static_cast<double>(r.next.size())) >= (2.0 - epsilon) * std::log(static_cast<double>(X.size())) - 1e-12;
  if (r.size_claim_applicable && !r.size_claim_holds) fail(Errc::InvariantViolated, "|X'| < |X|^{2-eps}");
  return r;
}

struct SmallGrowResult {
  FactorWord word;  // over S
  ElemSet product;
  bool reached = false;  // |product| >= target
};

/// X = S^{h_1} ... S^{h_m} with |X| = |S|^m exactly, h_1 = e, extended while
/// |X| < target and an exact-growth conjugator exists.
inline SmallGrowResult small_grow(ElemSet const& S, double target, std::size_t budget, std::uint64_t seed,
                                  std::size_t sweep_cap = 1'000'000) {
  if (S.size() < 2) fail(Errc::SubsetTooSmall, "small_grow requires |S| >= 2");
  Group const& G = S.group();
  SmallGrowResult r;
  r.word = FactorWord::single(G.identity());
  r.product = S;
  std::vector<std::uint8_t> scratch(G.order(), 0);
  std::uint64_t step = 0;
  while (static_cast<double>(r.product.size()) < target) {
    std::size_t const want = r.product.size() * S.size();
    if (want > G.order()) break;
    auto h = detail::find_conjugator(G, budget, seed + 0x9e3779b97f4a7c15ULL * ++step, sweep_cap, [&](Group::Elem g) {
      return product_size(r.product, set_conjugate(S, g), scratch) == want;
    });
    if (!h) break;
    r.product = set_product(r.product, set_conjugate(S, *h));
    r.word.factors.push_back({*h, 1});
  }
  r.reached = static_cast<double>(r.product.size()) >= target;
  return r;
}

struct PtcResult {
  bool grew = false;
  Group::Elem conjugator = 0;
  std::size_t best_size = 0;  // max |SS^g| seen
  double exponent = 0;        // log|SS^g| / log|S|
  // when no conjugator reaches |S|^{1+tau}:
  FactorWord fallback;        // over S
  std::size_t fallback_size = 0;
  bool fallback_reached_G = false;
  bool fallback_within_b = false;
};

/// Either g with |SS^g| >= |S|^{1+tau}, or a greedy product of conjugates of
/// S aimed at G (its length compared with b).
inline PtcResult ptc_step(ElemSet const& S, double tau, std::size_t budget, std::uint64_t seed, int b = 8,
                          std::size_t sweep_cap = 1'000'000) {
  Group const& G = S.group();
  if (S.size() < 2) fail(Errc::SubsetTooSmall, "ptc_step requires |S| >= 2");
  if (S.size() == G.order()) fail(Errc::PreconditionFailed, "ptc_step requires S != G");
  PtcResult r;
  double const target = std::pow(static_cast<double>(S.size()), 1.0 + tau);
  std::size_t const ceiling = std::min<std::size_t>(S.size() * S.size(), G.order());
  std::vector<std::uint8_t> scratch(G.order(), 0);
  bool have = false;
  auto consider = [&](Group::Elem g) {
    std::size_t const s = product_size(S, set_conjugate(S, g), scratch);
    if (!have || s > r.best_size || (s == r.best_size && g < r.conjugator)) {
      r.best_size = s;
      r.conjugator = g;
      have = true;
    }
    return r.best_size == ceiling;
  };
  Rng rng(seed);
  bool done = false;
  for (std::size_t i = 0; i < budget && !done; ++i) done = consider(random_element(G, rng));
  if (!done && static_cast<double>(r.best_size) < target && G.order() <= sweep_cap) {
    for (Group::Elem g = 0; g < G.order() && !done; ++g) done = consider(g);
  }
  r.exponent = std::log(static_cast<double>(r.best_size)) / std::log(static_cast<double>(S.size()));
  if (static_cast<double>(r.best_size) >= target) {
    r.grew = true;
    return r;
  }
  // fallback: multiply by the best conjugate of S until G or no progress
  ElemSet X = S;
  r.fallback = FactorWord::single(G.identity());
  std::size_t const limit = 4 * static_cast<std::size_t>(b);
  while (X.size() < G.order() && r.fallback.size() < limit) {
    std::size_t best = X.size();
    Group::Elem best_h = 0;
    std::size_t const cap = std::min<std::size_t>(G.order(), X.size() * S.size());
    auto scan = [&](Group::Elem h) {
      std::size_t const s = product_size(X, set_conjugate(S, h), scratch);
      if (s > best) {
        best = s;
        best_h = h;
      }
      return best == cap;
    };
    if (G.order() <= sweep_cap) {
      for (Group::Elem h = 0; h < G.order(); ++h)
        if (scan(h)) break;
    } else {
      Rng frng(seed ^ r.fallback.size());
      for (std::size_t i = 0; i < budget; ++i)
        if (scan(random_element(G, frng))) break;
    }
    if (best == X.size()) break;
    X = set_product(X, set_conjugate(S, best_h));
    r.fallback.factors.push_back({best_h, 1});
  }
  r.fallback_size = X.size();
  r.fallback_reached_G = X.size() == G.order();
  r.fallback_within_b = r.fallback_reached_G && r.fallback.size() <= static_cast<std::size_t>(b);
  return r;
}

// ---------------------------------------------------------------------------
// Loop over classes for X with a large share of a class C

struct XcldeltaStep {
  std::size_t index = 1;  // i
  ElemSet Y;
  ClassRef cls = 0;  // C_i
  FactorWord word;   // i factors over X with Y ⊆ expand(word, X)
  std::size_t cover_h = 0;  // |H| used to reach this step (0 for i = 1)
  std::size_t cover_k = 0;  // |K|
  double floor_value = 0;   // |X|^{1/3} |Y_{i-1}|, reported only
};

struct XcldeltaResult {
  std::vector<XcldeltaStep> trace;
  FactorWord word;  // over X
  ElemSet product;  // actual set whose containment in expand(word, X) is guaranteed
  bool escaped = false;      // |Y_k| > |G|^{theta_escape}
  bool no_progress = false;  // loop stopped without escaping
  bool reached_G = false;
  bool floor_applicable = false;  // q^{10r/delta} <= |C| and r > 100
  std::size_t ptc_doublings = 0;
};

/// Largest class contained in the normal set C_i C, ties by least representative.
inline ClassRef largest_class_in(ElemSet const& normal_set, ClassTable const& T) {
  std::optional<ClassRef> best;
  for (ClassRef c = 0; c < T.count(); ++c) {
    if (!normal_set.contains(T[c].rep)) continue;
    if (!best || T[c].size() > T[*best].size() || (T[c].size() == T[*best].size() && T[c].rep < T[*best].rep)) best = c;
  }
  if (!best) fail(Errc::InvariantViolated, "empty normal set");
  return *best;
}

inline XcldeltaResult xcldelta_run(ElemSet const& X, ClassTable const& T, ClassRef C, GrowthParams const& params,
                                   std::uint64_t seed) {
  params.validate();
  Group const& G = X.group();
  auto const& cls = T[C].members;
  if (X.size() < 2) fail(Errc::SubsetTooSmall, "xcldelta_run requires |X| >= 2");
  if (!X.is_subset_of(cls)) fail(Errc::NotInClass, "X must lie in the class C");
  XcldeltaResult r;
  double const lq = std::log(static_cast<double>(G.q()));
  r.floor_applicable = G.rank() > 100 && 10.0 * G.rank() / params.delta * lq <= std::log(static_cast<double>(cls.size()));
  double const escape = std::pow(static_cast<double>(G.order()), params.theta_escape);

  XcldeltaStep cur;
  cur.index = 1;
  cur.Y = X;
  cur.cls = C;
  cur.word = FactorWord::single(G.identity());
  r.trace.push_back(cur);
  CoverResult const H = greedy_cover(X, T, C);

  while (static_cast<double>(cur.Y.size()) <= escape && r.trace.size() <= params.max_iterations) {
    if (cur.Y.size() < 2) {
      r.no_progress = true;
      break;
    }
    ElemSet const normal = set_product(T[cur.cls].members, cls);
    ClassRef const next_cls = largest_class_in(normal, T);
    auto const& target = T[next_cls].members;
    CoverResult const K = greedy_cover(cur.Y, T, cur.cls);
    std::size_t best = 0;
    Group::Elem b1 = 0, b2 = 0;
    bool have = false;
    auto const tmask = target.mask();
    std::vector<std::uint8_t> seen(G.order(), 0);
    std::vector<Group::Elem> touched;
    for (auto g1 : H.conjugators) {
      ElemSet const Xg = set_conjugate(X, g1);
      for (auto g2 : K.conjugators) {
        ElemSet const Yg = set_conjugate(cur.Y, g2);
        touched.clear();
        for (auto a : Xg)
          for (auto y : Yg) {
            auto const z = G.mul(a, y);
            if (tmask[z] && !seen[z]) {
              seen[z] = 1;
              touched.push_back(z);
            }
          }
        for (auto z : touched) seen[z] = 0;
        std::size_t const s = touched.size();
        if (!have || s > best || (s == best && std::make_pair(g1, g2) < std::make_pair(b1, b2))) {
          best = s;
          b1 = g1;
          b2 = g2;
          have = true;
        }
      }
    }
    if (best <= cur.Y.size()) {
      r.no_progress = true;
      break;
    }
    XcldeltaStep nxt;
    nxt.index = cur.index + 1;
    nxt.Y = set_intersection(set_product(set_conjugate(X, b1), set_conjugate(cur.Y, b2)), target);
    nxt.cls = next_cls;
    nxt.word = FactorWord::single(b1).concat(cur.word.conjugated(G, b2));
    nxt.cover_h = H.size();
    nxt.cover_k = K.size();
    nxt.floor_value = std::cbrt(static_cast<double>(X.size())) * static_cast<double>(cur.Y.size());
    r.trace.push_back(nxt);
    cur = nxt;
  }
  r.escaped = static_cast<double>(cur.Y.size()) > escape;
  r.word = cur.word;
  r.product = cur.Y;

  // finish with repeated doubling steps
  for (std::size_t it = 0; it < params.max_iterations && r.product.size() < G.order(); ++it) {
    if (r.product.size() < 2) break;
    auto p = ptc_step(r.product, params.tau, params.search_budget, seed + it, params.b, params.sweep_cap);
    if (!p.grew) break;
    r.product = set_product(r.product, set_conjugate(r.product, p.conjugator));
    r.word = r.word.concat(r.word.conjugated(G, p.conjugator));
    ++r.ptc_doublings;
  }
  r.reached_G = r.product.size() == G.order();
  return r;
}

/// Y_i ⊆ C_i, Y_i ⊆ expand(word_i, X) with |word_i| = i, and each C_{i+1}
/// a class of maximal size inside C_i C. Recomputed from the trace.
inline bool verify_xcldelta_trace(XcldeltaResult const& r, ElemSet const& X, ClassTable const& T, ClassRef C) {
  if (r.trace.empty() || r.trace.front().cls != C || !(r.trace.front().Y == X)) return false;
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    auto const& st = r.trace[i];
    if (st.index != i + 1 || st.word.size() != st.index) return false;
    if (!st.Y.is_subset_of(T[st.cls].members)) return false;
    if (!st.Y.is_subset_of(expand(st.word, X))) return false;
    if (i > 0) {
      ElemSet const normal = set_product(T[r.trace[i - 1].cls].members, T[C].members);
      if (!T[st.cls].members.is_subset_of(normal)) return false;
      for (ClassRef c = 0; c < T.count(); ++c)
        if (T[c].members.is_subset_of(normal) && T[c].size() > T[st.cls].size()) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Greedy closure

struct CloseResult {
  FactorWord appended;  // over A
  ElemSet product;
};

/// Appends the (conjugator, orientation) of A maximizing |X (A^{±1})^h| until
/// the product is G. Ties: least h, then +1 before -1.
inline CloseResult greedy_close(ElemSet const& X, ElemSet const& A, GrowthParams const& params, std::uint64_t seed) {
  check_same_group(X, A);
  Group const& G = X.group();
  if (A.size() < 2) fail(Errc::SubsetTooSmall, "greedy_close requires |A| >= 2");
  CloseResult r;
  r.product = X;
  ElemSet const Ainv = set_inverse(A);
  std::vector<std::uint8_t> scratch(G.order(), 0);
  Rng rng(seed);
  while (r.product.size() < G.order()) {
    if (r.appended.size() >= params.close_budget)
      fail(Errc::BudgetExhausted, "greedy_close used " + std::to_string(r.appended.size()) + " factors, product size " +
                                      std::to_string(r.product.size()) + " of " + std::to_string(G.order()));
    std::size_t const cap = std::min<std::size_t>(G.order(), r.product.size() * A.size());
    std::size_t best = 0;
    Factor best_f;
    auto scan = [&](Group::Elem h) {
      for (int o : {1, -1}) {
        std::size_t const s = product_size(r.product, set_conjugate(o > 0 ? A : Ainv, h), scratch);
        if (s > best) {
          best = s;
          best_f = {h, o};
        }
        if (best == cap) return true;
      }
      return false;
    };
    if (G.order() <= params.close_sample || G.order() <= params.sweep_cap / 64) {
      for (Group::Elem h = 0; h < G.order(); ++h)
        if (scan(h)) break;
    } else {
      std::vector<Group::Elem> cand;
      for (std::size_t i = 0; i < params.close_sample; ++i) cand.push_back(random_element(G, rng));
      std::sort(cand.begin(), cand.end());
      for (auto h : cand)
        if (scan(h)) break;
    }
    r.product = set_product(r.product, factor_set(A, Ainv, best_f));
    r.appended.factors.push_back(best_f);
  }
  return r;
}

// ---------------------------------------------------------------------------

struct NormalGrowthReport {
  std::size_t a_size = 0, b_size = 0, product_size = 0;
  double exponent = 0;  // log(|AB|/|A|) / log|B|
  double target = 0;    // 1 - eps
  bool meets_target = false;
  bool within_eta_regime = false;  // |A|, |B| <= |G|^eta
};

/// |AB| against |A||B|^{1-eps} for a nontrivial class B. Report only.
inline NormalGrowthReport normal_growth_report(ElemSet const& A, ClassTable const& T, ClassRef B, double epsilon,
                                               std::optional<double> eta = std::nullopt) {
  if (B == T.identity_class()) fail(Errc::InvalidArgument, "B must be a nontrivial class");
  auto const& cls = T[B].members;
  NormalGrowthReport r;
  r.a_size = A.size();
  r.b_size = cls.size();
  r.product_size = set_product(A, cls).size();
  r.exponent = std::log(static_cast<double>(r.product_size) / static_cast<double>(r.a_size)) /
               std::log(static_cast<double>(r.b_size));
  r.target = 1.0 - epsilon;
  r.meets_target = r.exponent >= r.target - 1e-12;
  double const lim = std::pow(static_cast<double>(A.group().order()), eta.value_or(epsilon / 100.0));
  r.within_eta_regime = static_cast<double>(r.a_size) <= lim && static_cast<double>(r.b_size) <= lim;
  return r;
}

}  // namespace cgrowth
