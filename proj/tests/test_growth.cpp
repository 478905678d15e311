#include <catch_amalgamated.hpp>

#include <cmath>

#include <cgrowth/growth.hpp>

#include "oracles.hpp"

using namespace cgrowth;

namespace {

struct Fixture {
  GroupPtr G;
  ClassTable T;
  explicit Fixture(Family f, int n, std::uint64_t q) : G(Group::make(f, n, q)) {
    G->enumerate();
    T = classes_enumerate(*G);
  }
  ClassRef class_of_size(std::size_t s) const {
    for (ClassRef c = 0; c < T.count(); ++c)
      if (T[c].size() == s) return c;
    FAIL("no class of size " << s);
    return 0;
  }
  ElemSet all_but_identity() const {
    std::vector<Group::Elem> v;
    for (Group::Elem x = 0; x < G->order(); ++x)
      if (x != G->identity()) v.push_back(x);
    return ElemSet(*G, v);
  }
};

// |X^{-1}X ∩ C| and |XX^{-1} ∩ C| by pairwise products.
std::pair<std::size_t, std::size_t> quotient_counts(ElemSet const& X, ElemSet const& C) {
  Group const& G = X.group();
  std::vector<std::uint8_t> l(G.order(), 0), r(G.order(), 0);
  for (auto a : X)
    for (auto b : X) {
      l[G.mul(G.inv(a), b)] = 1;
      r[G.mul(a, G.inv(b))] = 1;
    }
  std::size_t nl = 0, nr = 0;
  for (auto c : C) {
    nl += l[c];
    nr += r[c];
  }
  return {nl, nr};
}

bool p1_oracle(ElemSet const& X, double eps, ClassTable const& T) {
  double const th = std::pow(static_cast<double>(X.size()), eps / 3);
  for (ClassRef c = 0; c < T.count(); ++c) {
    if (c == T.identity_class() || static_cast<double>(T[c].size()) >= th) continue;
    if (quotient_counts(X, T[c].members).first > 0) return false;
  }
  return true;
}

bool p2_oracle(ElemSet const& X, double eps, ClassTable const& T) {
  double const th = std::pow(static_cast<double>(X.size()), eps / 3);
  for (ClassRef c = 0; c < T.count(); ++c) {
    if (c == T.identity_class() || static_cast<double>(T[c].size()) < th) continue;
    auto [l, r] = quotient_counts(X, T[c].members);
    double const q = std::pow(static_cast<double>(T[c].size()), 0.25);
    if (l >= q || r >= q) return false;
  }
  return true;
}

std::size_t oracle_expand_size(FactorWord const& w, ElemSet const& A) {
  Group const& G = A.group();
  std::vector<Matrix> base;
  for (auto a : A) base.push_back(G.matrix(a));
  std::vector<std::pair<Matrix, int>> word;
  for (auto const& f : w.factors) word.emplace_back(G.matrix(f.conjugator), f.orientation);
  return oracle::word_product_size(G, base, word);
}

}  // namespace

TEST_CASE("GrowthParams validation", "[growth]") {
  GrowthParams p;
  CHECK_NOTHROW(p.validate());
  CHECK(p.eta_value() == Catch::Approx(0.005));
  auto bad = [](auto mutate) {
    GrowthParams q;
    mutate(q);
    try {
      q.validate();
    } catch (Error const& e) {
      return e.code() == Errc::InvalidArgument;
    }
    return false;
  };
  CHECK(bad([](GrowthParams& q) { q.epsilon = 0.6; }));
  CHECK(bad([](GrowthParams& q) { q.epsilon = 0; }));
  CHECK(bad([](GrowthParams& q) { q.delta = 1.5; }));
  CHECK(bad([](GrowthParams& q) { q.tau = 0; }));
  CHECK(bad([](GrowthParams& q) { q.b = 0; }));
  CHECK(bad([](GrowthParams& q) { q.eta = 1.0; }));
}

TEST_CASE("FactorWord algebra", "[growth][property]") {
  Fixture f(Family::PSL, 2, 7);
  Group const& G = *f.G;
  Rng rng(17);
  for (int t = 0; t < 20; ++t) {
    auto A = random_subset(G, 2 + rng.below(3), rng.next());
    FactorWord w;
    for (int i = 0; i < 3; ++i) w.factors.push_back({random_element(G, rng), rng.below(2) ? 1 : -1});
    auto const h = random_element(G, rng);
    ElemSet const X = expand(w, A);
    CHECK(expand(w.inverse(), A) == set_inverse(X));
    CHECK(expand(w.conjugated(G, h), A) == set_conjugate(X, h));
    CHECK(oracle_expand_size(w, A) == X.size());

    FactorWord outer;
    for (int i = 0; i < 2; ++i) outer.factors.push_back({random_element(G, rng), rng.below(2) ? 1 : -1});
    FactorWord const composed = compose(G, outer, w);
    CHECK(composed.size() == outer.size() * w.size());
    CHECK(expand(outer, X).is_subset_of(expand(composed, A)));
  }
}

TEST_CASE("P1 and P2", "[growth]") {
  SECTION("singleton") {
    Fixture f(Family::PSL, 2, 7);
    auto X = ElemSet::singleton(*f.G, 5);
    CHECK(check_P1(X, 0.5, f.T));
    CHECK(check_P2(X, 0.5, f.T));
  }
  SECTION("X = G fails P2") {
    Fixture f(Family::PSL, 2, 7);
    auto X = ElemSet::whole(*f.G);
    CHECK_FALSE(check_P2(X, 0.5, f.T));
    CHECK_FALSE(p2_violations(X, 0.5, f.T).empty());
  }
  SECTION("PSL(2,11) random 4-set: P1 vacuous at eps = 1/2") {
    Fixture f(Family::PSL, 2, 11);
    auto X = random_subset(*f.G, 4, 1);
    CHECK(class_threshold(4, 0.5) == Catch::Approx(std::pow(4.0, 1.0 / 6)));
    CHECK(class_threshold(4, 0.5) < static_cast<double>(f.T.min_nontrivial_size()));
    CHECK(check_P1(X, 0.5, f.T));
  }
  SECTION("agreement with pairwise oracle") {
    Fixture f(Family::PSL, 2, 11);
    Rng rng(3);
    for (int t = 0; t < 40; ++t) {
      auto X = random_subset(*f.G, 2 + rng.below(30), rng.next());
      double const eps = 0.1 + 0.4 * static_cast<double>(rng.below(5)) / 4;
      CHECK(check_P1(X, eps, f.T) == p1_oracle(X, eps, f.T));
      CHECK(check_P2(X, eps, f.T) == p2_oracle(X, eps, f.T));
    }
  }
}

TEST_CASE("disjoint_conjugate_search", "[growth]") {
  SECTION("singleton") {
    Fixture f(Family::PSL, 2, 7);
    auto X = ElemSet::singleton(*f.G, 3);
    auto g = disjoint_conjugate_search(X, 8, 1);
    CHECK(set_product(X, set_conjugate(X, g)).size() == 1);
  }
  SECTION("X = G has no witness") {
    Fixture f(Family::PSL, 2, 5);
    try {
      disjoint_conjugate_search(ElemSet::whole(*f.G), 8, 1);
      FAIL("expected NoWitness");
    } catch (Error const& e) {
      CHECK(e.code() == Errc::NoWitness);
    }
  }
  SECTION("PSL(2,11) random 3-set, seed 5") {
    Fixture f(Family::PSL, 2, 11);
    Group const& G = *f.G;
    auto X = random_subset(G, 3, 5);
    auto g = disjoint_conjugate_search(X, 256, 5);
    // X^{-1}X ∩ (XX^{-1})^g = {e}, pair by pair
    for (auto a : X)
      for (auto b : X) {
        auto const z = G.conj(G.mul(a, G.inv(b)), g);
        if (z == G.identity()) continue;
        for (auto c : X)
          for (auto d : X) CHECK(G.mul(G.inv(c), d) != z);
      }
    CHECK(oracle_expand_size(FactorWord{{Factor{G.identity(), 1}, Factor{g, 1}}}, X) == 9);
  }
}

TEST_CASE("xclsmall_step", "[growth]") {
  SECTION("singleton") {
    Fixture f(Family::PSL, 2, 7);
    auto X = ElemSet::singleton(*f.G, 9);
    auto r = xclsmall_step(X, 0.5, f.T, 1);
    CHECK(r.cut_set_size == 0);
    CHECK(r.next == set_product(X, set_conjugate(X, r.conjugator)));
    CHECK(r.p1_next);
    CHECK_FALSE(r.size_claim_applicable);
  }
  SECTION("precondition") {
    Fixture f(Family::PSL, 2, 5);
    try {
      xclsmall_step(ElemSet::whole(*f.G), 0.5, f.T, 1);
      FAIL("expected PreconditionFailed");
    } catch (Error const& e) {
      CHECK(e.code() == Errc::PreconditionFailed);
    }
  }
  SECTION("PSL(2,11) random 3-set with P1 and P2, seed 5") {
    Fixture f(Family::PSL, 2, 11);
    // first 3-set from seed 5 on with both properties
    std::uint64_t seed = 5;
    auto X = random_subset(*f.G, 3, seed);
    while (!(p1_oracle(X, 0.5, f.T) && p2_oracle(X, 0.5, f.T))) X = random_subset(*f.G, 3, ++seed);
    auto r = xclsmall_step(X, 0.5, f.T, seed);
    ElemSet const XXg = set_product(X, set_conjugate(X, r.conjugator));
    CHECK(r.product_size == 9);
    CHECK(r.next.is_subset_of(XXg));
    CHECK(r.next.size() * (r.cut_set_size + 1) >= r.product_size);
    ElemSet const small = small_class_union(f.T, std::pow(9.0, 0.5 / 3));
    CHECK(r.cut_set_size == small.size());
    CHECK(inverse_square_avoids(r.next, small));
    CHECK(p1_oracle(r.next, 0.5, f.T));
    CHECK(expand(r.word, X).is_subset_of(XXg));
  }
}

TEST_CASE("small_grow", "[growth]") {
  SECTION("target already met") {
    Fixture f(Family::PSL, 2, 7);
    auto S = random_subset(*f.G, 3, 4);
    auto r = small_grow(S, 2.0, 16, 1);
    CHECK(r.word == FactorWord::single(f.G->identity()));
    CHECK(r.product == S);
    CHECK(r.reached);
  }
  SECTION("|S| = 2, one exact step") {
    Fixture f(Family::PSL, 2, 7);
    auto S = random_subset(*f.G, 2, 8);
    auto r = small_grow(S, 3.0, 64, 2);
    REQUIRE(r.reached);
    CHECK(r.word.size() == 2);
    CHECK(r.product.size() == 4);
    CHECK(oracle_expand_size(r.word, S) == 4);
  }
  SECTION("PSL(2,13), |S| = 2, seed 9: target sqrt(13)/2 met at m = 1") {
    Fixture f(Family::PSL, 2, 13);
    auto S = random_subset(*f.G, 2, 9);
    double const target = std::sqrt(13.0) / 2;
    CHECK(target == Catch::Approx(1.8028).epsilon(1e-4));
    auto r = small_grow(S, target, 64, 9);
    CHECK(r.word.size() == 1);
    CHECK(r.reached);
  }
  SECTION("exact sizes along a longer run") {
    Fixture f(Family::PSL, 2, 11);
    auto S = random_subset(*f.G, 2, 21);
    auto r = small_grow(S, 60.0, 256, 21);
    CHECK(r.product.size() == static_cast<std::size_t>(std::pow(2.0, static_cast<double>(r.word.size()))));
    CHECK(oracle_expand_size(r.word, S) == r.product.size());
  }
  SECTION("too small") {
    Fixture f(Family::PSL, 2, 5);
    CHECK_THROWS_AS(small_grow(ElemSet::singleton(*f.G, 0), 4, 4, 1), Error);
  }
}

TEST_CASE("ptc_step", "[growth]") {
  SECTION("S = G minus identity in PSL(2,5)") {
    Fixture f(Family::PSL, 2, 5);
    auto S = f.all_but_identity();
    for (Group::Elem g = 0; g < f.G->order(); ++g) CHECK(set_product(S, set_conjugate(S, g)).size() == 60);
    auto r = ptc_step(S, 0.001, 16, 1);
    CHECK(r.grew);
    CHECK(r.best_size == 60);
    CHECK(r.exponent == Catch::Approx(std::log(60.0) / std::log(59.0)));
    // log 60 / log 59 is below 1.05, so the default tau takes the fallback
    auto d = ptc_step(S, 0.05, 16, 1);
    CHECK_FALSE(d.grew);
    CHECK(d.fallback_reached_G);
    CHECK(d.fallback.size() == 2);
    CHECK(d.fallback_within_b);
  }
  SECTION("PSL(2,7) 2-element set, seed 1: best over all g") {
    Fixture f(Family::PSL, 2, 7);
    auto S = random_subset(*f.G, 2, 1);
    std::size_t best = 0;
    for (Group::Elem g = 0; g < f.G->order(); ++g) best = std::max(best, set_product(S, set_conjugate(S, g)).size());
    auto r = ptc_step(S, 0.05, 16, 1);
    CHECK(r.best_size == best);
    CHECK(r.exponent == Catch::Approx(std::log(static_cast<double>(best)) / std::log(2.0)));
    CHECK(r.grew);
    CHECK(r.exponent >= 1.05);
  }
  SECTION("S = G rejected") {
    Fixture f(Family::PSL, 2, 5);
    CHECK_THROWS_AS(ptc_step(ElemSet::whole(*f.G), 0.05, 4, 1), Error);
  }
}

TEST_CASE("xcldelta_run on the 21-class of PSL(2,7)", "[growth]") {
  Fixture f(Family::PSL, 2, 7);
  Group const& G = *f.G;
  ClassRef const C = f.class_of_size(21);
  auto X = random_subset_of(f.T[C].members, 6, 2);
  GrowthParams p;
  auto r = xcldelta_run(X, f.T, C, p, 2);
  REQUIRE_FALSE(r.trace.empty());
  CHECK(r.trace.front().Y == X);
  CHECK(r.trace.front().cls == C);
  CHECK(verify_xcldelta_trace(r, X, f.T, C));
  CHECK_FALSE(r.floor_applicable);
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    auto const& st = r.trace[i];
    CHECK(st.word.size() == i + 1);
    CHECK(st.Y.is_subset_of(f.T[st.cls].members));
    CHECK(oracle_expand_size(st.word, X) >= st.Y.size());
    if (i > 0) {
      // pigeonhole: the chosen class holds at least an average share of C_i C
      ElemSet const normal = set_product(f.T[r.trace[i - 1].cls].members, f.T[C].members);
      std::size_t classes_inside = 0;
      for (ClassRef c = 0; c < f.T.count(); ++c) classes_inside += f.T[c].members.is_subset_of(normal);
      CHECK(f.T[st.cls].size() * classes_inside >= normal.size());
    }
  }
  CHECK(r.product.is_subset_of(expand(r.word, X)));
  if (r.reached_G) CHECK(expand(r.word, X).size() == G.order());

  SECTION("errors") {
    auto outside = random_subset(G, 3, 1);
    if (!outside.is_subset_of(f.T[C].members)) CHECK_THROWS_AS(xcldelta_run(outside, f.T, C, p, 1), Error);
    CHECK_THROWS_AS(xcldelta_run(ElemSet::singleton(G, f.T[C].rep), f.T, C, p, 1), Error);
  }
}

TEST_CASE("greedy_close", "[growth]") {
  GrowthParams p;
  SECTION("X = G needs nothing") {
    Fixture f(Family::PSL, 2, 5);
    auto A = random_subset(*f.G, 3, 1);
    auto r = greedy_close(ElemSet::whole(*f.G), A, p, 1);
    CHECK(r.appended.size() == 0);
  }
  SECTION("A = G minus identity in PSL(2,5) closes in at most 2 factors") {
    Fixture f(Family::PSL, 2, 5);
    auto A = f.all_but_identity();
    auto r = greedy_close(A, A, p, 1);
    FactorWord w = FactorWord::single(f.G->identity()).concat(r.appended);
    CHECK(w.size() <= 2);
    CHECK(oracle_expand_size(w, A) == 60);
  }
  SECTION("PSL(2,11) random 4-set, seed 1") {
    Fixture f(Family::PSL, 2, 11);
    auto A = random_subset(*f.G, 4, 1);
    auto r = greedy_close(A, A, p, 1);
    FactorWord w = FactorWord::single(f.G->identity()).concat(r.appended);
    CHECK(r.product.size() == 660);
    CHECK(oracle_expand_size(w, A) == 660);
  }
  SECTION("budget exhausted") {
    Fixture f(Family::PSL, 2, 11);
    auto A = random_subset(*f.G, 2, 1);
    GrowthParams tight;
    tight.close_budget = 1;
    try {
      greedy_close(A, A, tight, 1);
      FAIL("expected BudgetExhausted");
    } catch (Error const& e) {
      CHECK(e.code() == Errc::BudgetExhausted);
    }
  }
}

TEST_CASE("normal_growth_report", "[growth]") {
  Fixture f(Family::PSL, 2, 7);
  ClassRef const C = f.class_of_size(21);
  SECTION("A = {e}") {
    auto r = normal_growth_report(ElemSet::singleton(*f.G, f.G->identity()), f.T, C, 0.5);
    CHECK(r.product_size == 21);
    CHECK(r.exponent == Catch::Approx(1.0));
    CHECK(r.meets_target);
  }
  SECTION("A = B = the 21-class") {
    auto const& B = f.T[C].members;
    auto r = normal_growth_report(B, f.T, C, 0.5);
    std::vector<std::uint8_t> hit(f.G->order(), 0);
    for (auto a : B)
      for (auto b : B) hit[f.G->mul(a, b)] = 1;
    std::size_t n = 0;
    for (auto h : hit) n += h;
    CHECK(r.product_size == n);
    CHECK(r.exponent == Catch::Approx(std::log(static_cast<double>(n) / 21) / std::log(21.0)));
  }
  SECTION("trivial class rejected") {
    CHECK_THROWS_AS(normal_growth_report(ElemSet::whole(*f.G), f.T, f.T.identity_class(), 0.5), Error);
  }
}
