#include <catch_amalgamated.hpp>

#include <cmath>

#include <cgrowth/jordan.hpp>

using namespace cgrowth;

namespace {

GroupPtr sl(int n, std::uint64_t q, bool enumerate = true) {
  auto G = Group::make(Family::SL, n, q);
  if (enumerate) G->enumerate();
  return G;
}

Matrix diag(FieldPtr const& F, std::vector<long> const& v) {
  MatrixOps const ops(F, static_cast<int>(v.size()));
  Matrix m = ops.scalar(0);
  for (std::size_t i = 0; i < v.size(); ++i) m.a[i * v.size() + i] = F->from_int(v[i]);
  return m;
}

Errc code_of(auto&& f) {
  try {
    f();
  } catch (Error const& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("jordan_type examples", "[jordan]") {
  SECTION("identity in SL_3") {
    auto G = sl(3, 2, false);
    auto jt = jordan_type(*G, G->ops().identity());
    CHECK(jt.count(G->field()->one(), 1) == 3);
    CHECK(jt.entries.size() == 1);
    REQUIRE(jt.special);
    CHECK(*jt.special == G->field()->one());
  }
  SECTION("regular unipotent J_3(1) in SL_3(2)") {
    auto G = sl(3, 2, false);
    auto x = prime_jordan_matrix({{1, 3}}, G->field());
    auto jt = jordan_type(*G, x);
    CHECK(jt.count(jt.field->one(), 3) == 1);
    CHECK(jt.entries.size() == 1);
    CHECK_FALSE(jt.special);
  }
  SECTION("companion matrix of x^2 + 1 in SL_2(3)") {
    auto G = sl(2, 3, false);
    auto x = G->ops().decode("0,2;1,0");
    REQUIRE(G->is_member(x));
    auto jt = jordan_type(*G, x);
    CHECK(jt.field->q() == 9);
    auto ev = jt.eigenvalues();
    REQUIRE(ev.size() == 2);
    auto const& E = *jt.field;
    for (auto l : ev) {
      CHECK(jt.count(l, 1) == 1);
      CHECK(E.mul(l, l) == E.neg(E.one()));  // l^2 = -1
    }
    CHECK(E.pow(ev[0], 3) == ev[1]);  // Frobenius swaps them
    CHECK(jt.special);                // n_1 = 1 >= 2/2
  }
}

TEST_CASE("jordan_type recovers constructed block structures", "[jordan][property]") {
  struct Case {
    int n;
    std::uint64_t q;
    std::vector<PrimeBlock> blocks;
  };
  std::vector<Case> cases = {
      {3, 3, {{1, 2}, {1, 1}}}, {3, 5, {{2, 1}, {2, 1}, {4, 1}}}, {4, 3, {{1, 2}, {1, 2}}},
      {4, 5, {{4, 2}, {4, 1}, {4, 1}}}, {3, 7, {{2, 2}, {2, 1}}}, {4, 2, {{1, 3}, {1, 1}}},
  };
  Rng rng(5);
  for (auto const& c : cases) {
    auto const F = Field::of_order(c.q);
    MatrixOps const ops(F, c.n);
    Matrix const x = prime_jordan_matrix(c.blocks, F);
    std::map<std::pair<Field::Elem, int>, int> expected;
    for (auto const& b : c.blocks) expected[{F->from_int(b.lambda), b.size}] += 1;
    for (int t = 0; t < 5; ++t) {
      Matrix const g = detail::random_sl(ops, rng);
      auto jt = jordan_type(ops.mul(ops.mul(ops.inv(g), x), g), F);
      CHECK(jt.field->q() == c.q);
      CHECK(jt.entries == expected);
    }
  }
}

TEST_CASE("jordan_type invariants", "[jordan][property]") {
  for (auto [n, q] : {std::pair{2, 5}, std::pair{3, 2}, std::pair{2, 4}}) {
    auto G = sl(n, q);
    auto const T = classes_enumerate(*G);
    for (ClassRef c = 0; c < T.count(); ++c) {
      auto const rep = jordan_type(*G, G->matrix(T[c].rep));
      CHECK(rep.dimension() == n);
      // Frobenius-conjugate eigenvalues carry equal multiplicities
      for (auto const& [key, cnt] : rep.entries)
        CHECK(rep.count(rep.field->pow(key.first, static_cast<long long>(q)), key.second) == cnt);
      // class members share the type
      for (auto x : T[c].members) CHECK(jordan_type(*G, G->matrix(x)) == rep);
    }
  }
}

TEST_CASE("jordan_type conjugation invariance on random pairs", "[jordan][property]") {
  auto G = sl(3, 3);
  Rng rng(11);
  for (int t = 0; t < 1000; ++t) {
    auto const x = G->matrix(random_element(*G, rng));
    auto const g = G->matrix(random_element(*G, rng));
    REQUIRE(jordan_type(*G, G->mat_conj(x, g)) == jordan_type(*G, x));
  }
}

TEST_CASE("centralizer_params", "[jordan]") {
  SECTION("identity in SL_n") {
    for (int n = 2; n <= 4; ++n) {
      auto const F = Field::of_order(3);
      auto p = centralizer_params(jordan_type(MatrixOps(F, n).identity(), F), FamilyRow::SL_SU);
      CHECK(p.R == n * n);
      CHECK(p.m == n * n - 1);
      CHECK(p.m == p.dimG);
    }
  }
  SECTION("J_n(1)") {
    for (int n = 2; n <= 4; ++n) {
      auto const F = Field::of_order(5);
      auto p = centralizer_params(jordan_type(prime_jordan_matrix({{1, n}}, F), F), FamilyRow::SL_SU);
      CHECK(p.R == n);
      CHECK(p.m == n - 1);
    }
  }
  SECTION("transvection J_2(1) + J_1(1) in SL_3") {
    auto G = sl(3, 2);
    auto x = prime_jordan_matrix({{1, 2}, {1, 1}}, G->field());
    auto p = centralizer_params(jordan_type(*G, x), FamilyRow::SL_SU);
    CHECK(p.R == 5);
    CHECK(p.m == 4);
    auto T = classes_enumerate(*G);
    auto const size = T[T.class_of(G->index_of(x))].size();
    CHECK(size == 21);
    CHECK(G->order() / size == 8);
    for (ClassRef c = 0; c < T.count(); ++c) CHECK(class_size(*G, G->matrix(T[c].rep)) == T[c].size());
  }
  SECTION("symplectic and orthogonal rows for the identity in dimension 2") {
    auto G = sl(2, 5, false);
    auto jt = jordan_type(*G, G->ops().identity());
    auto sp = centralizer_params(jt, FamilyRow::Sp);
    CHECK(sp.S == 2);
    CHECK(sp.m == 3);
    CHECK(sp.dimG == 3);
    auto so = centralizer_params(jt, FamilyRow::SO);
    CHECK(so.m == 1);
    CHECK(so.dimG == 1);
  }
  SECTION("parity violation") {
    JordanType jt;
    jt.n = 1;
    jt.field = Field::of_order(5);
    jt.entries[{2, 1}] = 1;  // R = 1, S = 0
    CHECK(code_of([&] { centralizer_params(jt, FamilyRow::Sp); }) == Errc::ParityViolation);
    CHECK(code_of([&] { centralizer_params(jt, FamilyRow::SO); }) == Errc::ParityViolation);
    CHECK(centralizer_params(jt, FamilyRow::SL_SU).m == 0);
  }
}

TEST_CASE("centralizer_degree_check", "[jordan]") {
  SECTION("J_2(1) in SL_2 at (5,7)") {
    auto r = centralizer_degree_check({{1, 2}}, 5, 7);
    CHECK(r.centralizer1 == 10);
    CHECK(r.centralizer2 == 14);
    CHECK(r.degree == Catch::Approx(1.0));
    CHECK(r.m == 1);
    CHECK(r.pass);
  }
  SECTION("identity in SL_2 at (5,7)") {
    auto r = centralizer_degree_check({{1, 1}, {1, 1}}, 5, 7);
    CHECK(r.centralizer1 == 120);
    CHECK(r.centralizer2 == 336);
    CHECK(r.degree == Catch::Approx(std::log(336.0 / 120) / std::log(7.0 / 5)));
    CHECK(r.m == 3);
    CHECK(r.pass);
  }
  SECTION("J_3(1) in SL_3 at (2,3)") {
    auto r = centralizer_degree_check({{1, 3}}, 2, 3);
    CHECK(r.class1 == 42);
    CHECK(r.class2 == 624);
    CHECK(r.centralizer1 == 4);
    CHECK(r.centralizer2 == 9);
    CHECK(r.degree == Catch::Approx(2.0));
    CHECK(r.m == 2);
    CHECK(r.pass);
  }
  SECTION("type unavailable") {
    CHECK(code_of([] { centralizer_degree_check({{2, 1}, {2, 1}}, 5, 7); }) == Errc::TypeUnavailable);
    CHECK(code_of([] { centralizer_degree_check({{5, 1}, {1, 1}}, 5, 7); }) == Errc::TypeUnavailable);
  }
}

TEST_CASE("class_product_witness", "[jordan]") {
  SECTION("x2 = identity") {
    auto G = sl(3, 5, false);
    auto const x1 = diag(G->field(), {2, 2, 4});
    auto r = class_product_witness(*G, x1, G->ops().identity(), 16, 1);
    CHECK(r.stage == "identity");
    CHECK(r.y == x1);
    CHECK(r.type == r.target);
    CHECK(r.target.count(G->field()->from_int(2), 1) == 2);
    CHECK(r.target.count(G->field()->from_int(4), 1) == 1);
  }
  SECTION("SL_3(7), x1 = x2 = diag(3,3,4)") {
    auto G = sl(3, 7, false);
    auto const& F = G->field();
    auto const x = diag(F, {3, 3, 4});
    auto r = class_product_witness(*G, x, x, 64, 1);
    CHECK(r.target.entries.size() == 2);
    CHECK(r.target.count(F->from_int(2), 1) == 1);
    CHECK(r.target.count(F->from_int(5), 1) == 2);
    REQUIRE(r.target.special);
    CHECK(*r.target.special == F->from_int(5));
    CHECK(r.type == r.target);
    CHECK(r.stage == "permutation");
    CHECK(r.y == diag(F, {2, 5, 5}));
    // y = x^{g1} x^{g2}
    auto const& ops = G->ops();
    CHECK(ops.mul(ops.mul(ops.mul(ops.inv(r.g1), x), r.g1), ops.mul(ops.mul(ops.inv(r.g2), x), r.g2)) == r.y);
    CHECK(ops.mul(ops.mul(ops.inv(r.g2), x), r.g2) == diag(F, {3, 4, 3}));
  }
  SECTION("scalar inputs in SL_3(4)") {
    auto G = sl(3, 4, false);
    auto const& F = G->field();
    Field::Elem const a = F->primitive();
    REQUIRE(F->pow(a, 3) == F->one());
    auto const x = G->ops().scalar(a);
    auto r = class_product_witness(*G, x, x, 4, 1);
    CHECK(r.stage == "identity");
    CHECK(r.y == G->ops().scalar(F->mul(a, a)));
    REQUIRE(r.type.special);
    CHECK(*r.type.special == F->mul(a, a));
  }
  SECTION("no special eigenvalue") {
    auto G = sl(3, 2, false);
    auto const j = prime_jordan_matrix({{1, 3}}, G->field());
    CHECK(code_of([&] { class_product_witness(*G, j, j, 4, 1); }) == Errc::PreconditionFailed);
  }
}
