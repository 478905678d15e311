#pragma once

// Staged construction of G as a product of conjugates of A and A^{-1}, and
// the certificate that records it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cgrowth/classes.hpp"
#include "cgrowth/covercut.hpp"
#include "cgrowth/error.hpp"
#include "cgrowth/group.hpp"
#include "cgrowth/growth.hpp"

namespace cgrowth {

using json = nlohmann::json;

struct BoundRatios {
  double conjecture = 0;  // N log|A| / log|G|
  double theorem = 0;     // N (log|A| / log|G|)^{1+eps}
  double pyber = 0;       // N log|A| / (r^eps log|G|)
};

inline BoundRatios bound_ratios(std::size_t N, std::size_t a_size, std::size_t order, int r, double epsilon) {
  double const la = std::log(static_cast<double>(a_size));
  double const lg = std::log(static_cast<double>(order));
  double const n = static_cast<double>(N);
  return {n * la / lg, n * std::pow(la / lg, 1.0 + epsilon), n * la / (std::pow(static_cast<double>(r), epsilon) * lg)};
}

struct CertFactor {
  std::string conjugator;
  int orientation = 1;
};

struct Certificate {
  Family family = Family::PSL;
  int n = 2;
  std::uint64_t q = 2;
  std::vector<std::string> base_set;
  std::vector<CertFactor> word;
  std::size_t claimed_N = 0;
  BoundRatios bounds;
  json params = json::object();
  std::uint64_t seed = 0;

  json to_json() const {
    json w = json::array();
    for (auto const& f : word) w.push_back({{"conjugator", f.conjugator}, {"orientation", f.orientation}});
    return {{"group", {{"family", family_name(family)}, {"n", n}, {"q", q}}},
            {"base_set", base_set},
            {"word", w},
            {"claimed_N", claimed_N},
            {"bounds",
             {{"conjecture_ratio", bounds.conjecture}, {"theorem_ratio", bounds.theorem}, {"pyber_ratio", bounds.pyber}}},
            {"params", params},
            {"seed", seed}};
  }

  std::string dump() const { return to_json().dump(2) + "\n"; }

  static Certificate from_json(json const& j) {
    try {
      Certificate c;
      auto const& g = j.at("group");
      c.family = parse_family(g.at("family").get<std::string>());
      c.n = g.at("n").get<int>();
      c.q = g.at("q").get<std::uint64_t>();
      c.base_set = j.at("base_set").get<std::vector<std::string>>();
      for (auto const& f : j.at("word")) {
        int const o = f.at("orientation").get<int>();
        if (o != 1 && o != -1) fail(Errc::BadEncoding, "orientation must be 1 or -1");
        c.word.push_back({f.at("conjugator").get<std::string>(), o});
      }
      c.claimed_N = j.at("claimed_N").get<std::size_t>();
      auto const& b = j.at("bounds");
      c.bounds = {b.at("conjecture_ratio").get<double>(), b.at("theorem_ratio").get<double>(),
                  b.at("pyber_ratio").get<double>()};
      c.params = j.at("params");
      c.seed = j.at("seed").get<std::uint64_t>();
      return c;
    } catch (json::exception const& e) {
      fail(Errc::BadEncoding, std::string("malformed certificate: ") + e.what());
    } catch (Error const& e) {
      if (e.code() == Errc::BadEncoding) throw;
      fail(Errc::BadEncoding, std::string("malformed certificate: ") + e.what());
    }
  }

  static Certificate parse(std::string const& text) {
    json j;
    try {
      j = json::parse(text);
    } catch (json::exception const& e) {
      fail(Errc::BadEncoding, std::string("certificate is not JSON: ") + e.what());
    }
    return from_json(j);
  }
};

// ---------------------------------------------------------------------------
// Pipeline

struct PipelineReport {
  std::string group;
  std::size_t order = 0;
  std::size_t base_size = 0;
  std::size_t a1 = 0, a2 = 0, a3 = 0, a4 = 0, a5 = 0;
  std::size_t N1 = 1, N2 = 1, N4 = 1, N5 = 1, N6 = 1;
  std::size_t k = 0;        // doubling steps in stage 2
  std::size_t k_prime = 0;  // xclsmall steps in stage 4
  std::string stage6_branch = "none";
  std::vector<std::pair<std::size_t, std::size_t>> xcldelta_trace;  // (|Y_i|, |C_i|)
  std::size_t staged_length = 0;  // N1 N2 N4 N5 N6
  std::size_t closed_at_stage = 0;  // first stage after which the expansion was G (7: greedy_close)
  std::size_t close_factors = 0;
  std::size_t truncated = 0;  // factors after the first prefix equal to G
  std::size_t pruned = 0;     // factors removed without losing G
  std::size_t N = 0;
  std::vector<std::string> fallbacks;
  std::vector<std::string> demoted;  // assertions reported rather than checked
  bool stage_containment = true;     // each stage set inside its prefix expansion

  json to_json() const {
    json tr = json::array();
    for (auto [y, c] : xcldelta_trace) tr.push_back({{"Y", y}, {"C", c}});
    return {{"group", group},
            {"order", order},
            {"base_size", base_size},
            {"sizes", {{"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5}}},
            {"counts", {{"N1", N1}, {"N2", N2}, {"N4", N4}, {"N5", N5}, {"N6", N6}}},
            {"k", k},
            {"k_prime", k_prime},
            {"stage6_branch", stage6_branch},
            {"xcldelta_trace", tr},
            {"staged_length", staged_length},
            {"closed_at_stage", closed_at_stage},
            {"close_factors", close_factors},
            {"truncated", truncated},
            {"pruned", pruned},
            {"N", N},
            {"fallbacks", fallbacks},
            {"demoted", demoted},
            {"stage_containment", stage_containment}};
  }
};

struct PipelineResult {
  Certificate certificate;
  PipelineReport report;
  FactorWord word;  // over A, in group indices
};

inline json params_json(GrowthParams const& p) {
  return {{"epsilon", p.epsilon},       {"delta", p.delta},
          {"tau", p.tau},               {"b", p.b},
          {"eta", p.eta_value()},       {"theta1", p.theta1},
          {"theta2", p.theta2},         {"theta4", p.theta4},
          {"theta_escape", p.theta_escape}, {"search_budget", p.search_budget},
          {"close_budget", p.close_budget}, {"max_iterations", p.max_iterations}};
}

namespace detail {

/// Drops every factor after the first prefix equal to G, then each factor
/// whose removal keeps the product equal to G (front to back).
inline std::pair<std::size_t, std::size_t> shorten_word(FactorWord& w, ElemSet const& A) {
  Group const& G = A.group();
  std::vector<std::size_t> prefix;
  expand(w, A, &prefix);
  std::size_t truncated = 0;
  auto hit = std::find(prefix.begin(), prefix.end(), G.order());
  if (hit == prefix.end()) return {0, 0};
  std::size_t const keep = static_cast<std::size_t>(hit - prefix.begin()) + 1;
  truncated = w.size() - keep;
  w.factors.resize(keep);
  std::size_t pruned = 0;
  ElemSet const Ainv = set_inverse(A);
  for (std::size_t i = 0; i < w.size() && w.size() > 1;) {
    FactorWord t = w;
    t.factors.erase(t.factors.begin() + static_cast<std::ptrdiff_t>(i));
    ElemSet acc = factor_set(A, Ainv, t.factors[0]);
    for (std::size_t j = 1; j < t.size() && acc.size() < G.order(); ++j) acc = set_product(acc, factor_set(A, Ainv, t.factors[j]));
    if (acc.size() == G.order()) {
      w = std::move(t);
      ++pruned;
    } else {
      ++i;
    }
  }
  return {truncated, pruned};
}

inline std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stage) { return seed * 1000 + stage; }

}  // namespace detail

/// Stages: (1) exact small growth to |G|^theta1, (2) doubling by conjugates
/// to |G|^theta2, (3) removal of small classes, (4) disjoint-conjugate steps
/// while P1 and P2 hold, up to |G|^theta4, (5) the larger of A4^{-1}A4 ∩ C and
/// A4A4^{-1} ∩ C for a class C violating P2, (6) the class loop when
/// |A5| >= |C|^delta and doubling otherwise. Greedy closure finishes the word.
inline PipelineResult pipeline_run(ElemSet const& A, GrowthParams const& params, std::uint64_t seed) {
  params.validate();
  Group const& G = A.group();
  if (A.size() < 2) fail(Errc::SubsetTooSmall, "pipeline_run requires |A| >= 2");
  ClassTable const T = classes_enumerate(G);
  double const order = static_cast<double>(G.order());
  Group::Elem const e = G.identity();

  PipelineReport rep;
  rep.group = G.name();
  rep.order = G.order();
  rep.base_size = A.size();
  rep.demoted.push_back("stage gates use |G|^theta in place of the asymptotic thresholds");

  FactorWord word = FactorWord::single(e);
  ElemSet cur = A;
  bool closed = A.size() == G.order();
  auto check_stage = [&](std::size_t stage) {
    ElemSet const full = expand(word, A);
    if (!cur.is_subset_of(full)) rep.stage_containment = false;
    if (!closed && full.size() == G.order()) {
      closed = true;
      rep.closed_at_stage = stage;
    }
  };
  // doubling X -> X X^g while ptc_step finds growth
  auto doubling = [&](ElemSet& X, FactorWord& w, double gate, std::uint64_t s, std::string const& tag) {
    std::size_t steps = 0;
    while (static_cast<double>(X.size()) < gate && X.size() < G.order() && steps < params.max_iterations) {
      if (X.size() < 2) break;
      auto p = ptc_step(X, params.tau, params.search_budget, detail::sub_seed(s, steps), params.b, params.sweep_cap);
      if (!p.grew) {
        rep.fallbacks.push_back(tag + ": no conjugate reaches |X|^(1+tau)");
        break;
      }
      X = set_product(X, set_conjugate(X, p.conjugator));
      w = w.concat(w.conjugated(G, p.conjugator));
      ++steps;
    }
    return steps;
  };

  // stage 1
  if (!closed) {
    double const gate1 = std::pow(order, params.theta1);
    if (static_cast<double>(A.size()) < gate1) {
      auto sg = small_grow(A, gate1, params.search_budget, detail::sub_seed(seed, 1), params.sweep_cap);
      if (!sg.reached) rep.fallbacks.push_back("stage 1: exact growth stalled below the gate");
      word = sg.word;
      cur = sg.product;
    }
    rep.N1 = word.size();
    rep.a1 = cur.size();
    check_stage(1);
  }

  // stage 2
  if (!closed) {
    FactorWord w2 = FactorWord::single(e);
    rep.k = doubling(cur, w2, std::pow(order, params.theta2), detail::sub_seed(seed, 2), "stage 2");
    word = compose(G, w2, word);
    rep.N2 = w2.size();
    rep.a2 = cur.size();
    check_stage(2);
  }

  // stage 3
  if (!closed) {
    ElemSet const small = small_class_union(T, class_threshold(cur.size(), params.epsilon));
    cur = cut_small(cur, small);
    rep.a3 = cur.size();
    check_stage(3);
  }

  // stage 4
  if (!closed) {
    FactorWord w4 = FactorWord::single(e);
    double const gate4 = std::pow(order, params.theta4);
    while (static_cast<double>(cur.size()) < gate4 && rep.k_prime < params.max_iterations) {
      if (!check_P1(cur, params.epsilon, T)) {
        rep.fallbacks.push_back("stage 4: P1 fails");
        break;
      }
      if (!check_P2(cur, params.epsilon, T)) break;
      try {
        auto st = xclsmall_step(cur, params.epsilon, T, detail::sub_seed(seed, 40 + rep.k_prime), params.search_budget,
                                params.sweep_cap);
        if (!st.size_claim_applicable && rep.k_prime == 0)
          rep.demoted.push_back("stage 4: |X'| >= |X|^(2-eps) reported, its size precondition is unreachable");
        cur = st.next;
        w4 = compose(G, st.word, w4);
        ++rep.k_prime;
      } catch (Error const& err) {
        if (err.code() != Errc::NoWitness) throw;
        rep.fallbacks.push_back("stage 4: no disjoint conjugate");
        break;
      }
    }
    word = compose(G, w4, word);
    rep.N4 = w4.size();
    rep.a4 = cur.size();
    check_stage(4);
  }

  // stage 5
  std::optional<ClassRef> C5;
  if (!closed) {
    auto viol = p2_violations(cur, params.epsilon, T);
    if (!viol.empty()) {
      ClassRef best = viol.front().cls;
      for (auto const& v : viol)
        if (T[v.cls].size() > T[best].size() || (T[v.cls].size() == T[best].size() && T[v.cls].rep < T[best].rep))
          best = v.cls;
      ElemSet const L = set_intersection(quotient_left(cur), T[best].members);
      ElemSet const R = set_intersection(quotient_right(cur), T[best].members);
      FactorWord w5;
      if (L.size() >= R.size()) {
        cur = L;
        w5 = FactorWord{{Factor{e, -1}, Factor{e, 1}}};
      } else {
        cur = R;
        w5 = FactorWord{{Factor{e, 1}, Factor{e, -1}}};
      }
      word = compose(G, w5, word);
      rep.N5 = 2;
      C5 = best;
    } else {
      rep.fallbacks.push_back("stage 5: no class violates P2");
    }
    rep.a5 = cur.size();
    check_stage(5);
  }

  // stage 6
  if (!closed) {
    FactorWord w6 = FactorWord::single(e);
    bool const use_loop = C5 && cur.size() >= 2 &&
                          std::log(static_cast<double>(cur.size())) >=
                              params.delta * std::log(static_cast<double>(T[*C5].size())) - 1e-12;
    if (use_loop) {
      rep.stage6_branch = "xcldelta";
      rep.demoted.push_back("stage 6: per-step floor |X|^(1/3)|Y_i| reported only");
      auto r = xcldelta_run(cur, T, *C5, params, detail::sub_seed(seed, 6));
      for (auto const& st : r.trace) rep.xcldelta_trace.emplace_back(st.Y.size(), T[st.cls].size());
      if (r.no_progress) rep.fallbacks.push_back("stage 6: class loop made no progress");
      w6 = r.word;
      cur = r.product;
    } else if (cur.size() >= 2 && cur.size() < G.order()) {
      rep.stage6_branch = "ptc";
      doubling(cur, w6, order, detail::sub_seed(seed, 60), "stage 6");
    }
    word = compose(G, w6, word);
    rep.N6 = w6.size();
    check_stage(6);
  }
  rep.staged_length = word.size();
  if (rep.staged_length != rep.N1 * rep.N2 * rep.N4 * rep.N5 * rep.N6 && !rep.closed_at_stage)
    fail(Errc::InvariantViolated, "word length differs from N1 N2 N4 N5 N6");

  // closure
  ElemSet const full = expand(word, A);
  if (full.size() < G.order()) {
    try {
      auto c = greedy_close(full, A, params, detail::sub_seed(seed, 7));
      rep.close_factors = c.appended.size();
      word.append(c.appended);
      rep.closed_at_stage = 7;
      rep.fallbacks.push_back("greedy closure appended " + std::to_string(c.appended.size()) + " factors");
    } catch (Error const& err) {
      if (err.code() != Errc::BudgetExhausted) throw;
      fail(Errc::ClosureFailed, G.name() + ": " + err.what());
    }
  }
  auto [truncated, pruned] = detail::shorten_word(word, A);
  rep.truncated = truncated;
  rep.pruned = pruned;
  rep.N = word.size();

  std::vector<std::size_t> prefix;
  if (expand(word, A, &prefix).size() != G.order()) fail(Errc::ClosureFailed, "final word does not expand to G");

  PipelineResult out;
  out.word = word;
  out.report = rep;
  Certificate& c = out.certificate;
  c.family = G.family();
  c.n = G.n();
  c.q = G.q();
  for (auto a : A) c.base_set.push_back(G.encode(G.matrix(a)));
  for (auto const& f : word.factors) c.word.push_back({G.encode(G.matrix(f.conjugator)), f.orientation});
  c.claimed_N = word.size();
  c.bounds = bound_ratios(word.size(), A.size(), G.order(), G.rank(), params.epsilon);
  c.params = params_json(params);
  c.params["prefix_sizes"] = prefix;
  c.params["claimed_product_is_G"] = true;
  c.seed = seed;
  return out;
}

// ---------------------------------------------------------------------------
// Verification

struct VerifyReport {
  bool pass = false;
  std::optional<Errc> error;
  std::string message;
  std::string group;
  std::size_t order = 0;
  std::size_t base_size = 0;
  std::size_t N = 0;
  std::size_t final_size = 0;
  std::optional<std::size_t> failing_prefix;
  std::vector<std::size_t> prefix_sizes;
  BoundRatios recomputed;

  json to_json() const {
    json j = {{"pass", pass},
              {"error", error ? errc_name(*error) : std::string()},
              {"message", message},
              {"group", group},
              {"order", order},
              {"base_size", base_size},
              {"N", N},
              {"final_size", final_size},
              {"prefix_sizes", prefix_sizes},
              {"conjecture_ratio", recomputed.conjecture},
              {"theorem_ratio", recomputed.theorem},
              {"pyber_ratio", recomputed.pyber}};
    j["failing_prefix"] = failing_prefix ? json(*failing_prefix) : json(nullptr);
    return j;
  }
};

/// Checks a certificate against an enumerated group. Never throws for a bad
/// certificate; the failure is recorded in the report.
inline VerifyReport certificate_check(Certificate const& c, Group const& G) {
  VerifyReport r;
  r.group = G.name();
  r.order = G.order();
  auto reject = [&](Errc code, std::string msg) {
    r.pass = false;
    r.error = code;
    r.message = std::move(msg);
    return r;
  };
  if (c.family != G.family() || c.n != G.n() || c.q != G.q())
    return reject(Errc::BadEncoding, "certificate names a different group than " + G.name());
  std::vector<Group::Elem> base;
  std::vector<Factor> factors;
  try {
    for (auto const& s : c.base_set) base.push_back(G.index_of(G.parse(s)));
    for (auto const& f : c.word) factors.push_back({G.index_of(G.parse(f.conjugator)), f.orientation});
  } catch (Error const& err) {
    return reject(Errc::BadEncoding, err.what());
  }
  ElemSet const A(G, base);
  r.base_size = A.size();
  r.N = factors.size();
  if (A.size() != c.base_set.size()) return reject(Errc::BadEncoding, "base set lists an element twice");
  if (A.size() < 2) return reject(Errc::BadEncoding, "base set has fewer than two elements");
  if (c.claimed_N != factors.size()) return reject(Errc::BadEncoding, "claimed_N differs from the word length");
  if (factors.empty()) return reject(Errc::ProductNotG, "empty word");

  ElemSet const full = expand(FactorWord{factors}, A, &r.prefix_sizes);
  r.final_size = full.size();
  std::vector<std::size_t> recorded;
  if (c.params.contains("prefix_sizes")) {
    try {
      recorded = c.params.at("prefix_sizes").get<std::vector<std::size_t>>();
    } catch (json::exception const&) {
      return reject(Errc::BadEncoding, "prefix_sizes is not a list of sizes");
    }
  }
  std::optional<std::size_t> mismatch;
  if (!recorded.empty()) {
    for (std::size_t i = 0; i < r.prefix_sizes.size(); ++i)
      if (i >= recorded.size() || recorded[i] != r.prefix_sizes[i]) {
        mismatch = i;
        break;
      }
    if (!mismatch && recorded.size() != r.prefix_sizes.size()) mismatch = r.prefix_sizes.size();
  }
  if (full.size() != G.order()) {
    r.failing_prefix = mismatch ? *mismatch : r.prefix_sizes.size() - 1;
    return reject(Errc::ProductNotG, "product has " + std::to_string(full.size()) + " of " + std::to_string(G.order()) +
                                         " elements; first deviating prefix " + std::to_string(*r.failing_prefix));
  }
  if (mismatch) {
    r.failing_prefix = mismatch;
    return reject(Errc::BadEncoding, "recorded prefix sizes disagree with the expansion at prefix " + std::to_string(*mismatch));
  }

  double epsilon = 0.5;
  try {
    epsilon = c.params.at("epsilon").get<double>();
  } catch (json::exception const&) {
    return reject(Errc::BadEncoding, "params.epsilon missing");
  }
  r.recomputed = bound_ratios(factors.size(), A.size(), G.order(), G.rank(), epsilon);
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9; };
  if (!close(r.recomputed.conjecture, c.bounds.conjecture) || !close(r.recomputed.theorem, c.bounds.theorem) ||
      !close(r.recomputed.pyber, c.bounds.pyber))
    return reject(Errc::RatioMismatch, "stored bound ratios differ from the recomputed ones");
  r.pass = true;
  r.message = "product of " + std::to_string(r.N) + " conjugates equals " + G.name();
  return r;
}

/// Builds and enumerates the named group, then checks the certificate.
inline VerifyReport certificate_check(Certificate const& c, std::uint64_t cap = kDefaultGroupCap) {
  auto G = Group::make(c.family, c.n, c.q, cap);
  G->enumerate();
  return certificate_check(c, *G);
}

/// Throwing form: BadEncoding, ProductNotG or RatioMismatch.
inline VerifyReport certificate_verify(Certificate const& c, Group const& G) {
  auto r = certificate_check(c, G);
  if (!r.pass) fail(*r.error, r.message);
  return r;
}

inline VerifyReport certificate_verify(Certificate const& c, std::uint64_t cap = kDefaultGroupCap) {
  auto r = certificate_check(c, cap);
  if (!r.pass) fail(*r.error, r.message);
  return r;
}

}  // namespace cgrowth
