#include <catch_amalgamated.hpp>

#include <random>

#include <mlef/simple_props.hpp>

using namespace mlef;

namespace {

  ClassAlgebra algebra(std::string const& name) {
    return ClassAlgebra(builtin_group(name));
  }

  Index el(ClassAlgebra const& A, std::vector<std::vector<std::uint32_t>> const& cycles) {
    return A.group().at(Perm::from_cycles(A.group().degree(), cycles));
  }

}  // namespace

TEST_CASE("class algebra products", "[simple_props]") {
  auto A = algebra("A5");
  auto const& P = A.group();
  for (Index a = 0; a < P.size(); a += 7) {
    for (Index b = 0; b < P.size(); b += 5) {
      for (Index g = 0; g < P.size(); ++g) {
        bool direct = false;
        for (Index x = 0; x < P.size() && !direct; ++x) {
          for (Index y = 0; y < P.size() && !direct; ++y) {
            direct = P.mul(P.conj(a, x), P.conj(b, y)) == g;
          }
        }
        REQUIRE(A.in_product(a, b, g) == direct);
      }
    }
  }
}

TEST_CASE("xi on the A5 counterexample", "[simple_props]") {
  auto A  = algebra("A5");
  auto u1 = el(A, {{0, 1}, {2, 3}});
  auto c  = el(A, {{0, 1, 2, 3, 4}});
  CHECK_FALSE(xi(A, u1, c, c));
  CHECK_FALSE(xi(A, u1, c, c, EvalMode::raw));
}

TEST_CASE("xi with u3 = u2^-1 u1^-1", "[simple_props]") {
  for (auto name : {"A5", "S3", "A4", "Z3"}) {
    auto A = algebra(name);
    auto const& P = A.group();
    for (Index u1 = 0; u1 < P.size(); ++u1) {
      for (Index u2 = 0; u2 < P.size(); ++u2) {
        REQUIRE(xi(A, u1, u2, P.mul(P.inv(u2), P.inv(u1))));
      }
    }
  }
}

TEST_CASE("xi: class products agree with the raw search", "[simple_props]") {
  for (auto name : {"A5", "A4", "S3", "S4"}) {
    auto A = algebra(name);
    auto const& P = A.group();
    for (std::size_t c1 = 0; c1 < A.classes().count(); ++c1) {
      for (std::size_t c2 = 0; c2 < A.classes().count(); ++c2) {
        auto u1 = A.classes().representative(c1);
        auto u2 = A.classes().representative(c2);
        for (Index u3 = 0; u3 < P.size(); ++u3) {
          bool fast = xi(A, u1, u2, u3);
          REQUIRE(fast == xi(A, u1, u2, u3, EvalMode::raw));
          if (fast) {
            auto [x, y] = solve_xi(A, u1, u2, u3);
            REQUIRE(P.mul(P.conj(P.inv(u2), x), P.conj(P.inv(u1), y)) == u3);
          } else {
            REQUIRE_THROWS_AS(solve_xi(A, u1, u2, u3), NoSolution);
          }
        }
      }
    }
  }
}

TEST_CASE("xi is conjugation invariant in each argument", "[simple_props]") {
  auto A = algebra("A5");
  auto const& P = A.group();
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<Index> pick(0, 59);
  for (int i = 0; i < 2000; ++i) {
    Index u1 = pick(rng), u2 = pick(rng), u3 = pick(rng);
    Index a = pick(rng), b = pick(rng), c = pick(rng);
    REQUIRE(xi(A, u1, u2, u3) == xi(A, P.conj(u1, a), P.conj(u2, b), P.conj(u3, c)));
  }
}

TEST_CASE("S1-S4 hold on A5", "[simple_props]") {
  auto A = algebra("A5");
  auto reports = check_all(A);
  for (auto const& r : reports) {
    INFO(to_string(r.id));
    CHECK(r.holds);
    CHECK(witness_verifies(A, r));
  }
  CHECK(reports[3].witness.size() == 3);
}

TEST_CASE("a transposition pair with two 5-cycles realizes S4 on A5", "[simple_props]") {
  auto A = algebra("A5");
  PropReport r{Statement::S4, true,
               {el(A, {{0, 1}, {2, 3}}), el(A, {{0, 1, 2, 3, 4}}), el(A, {{0, 1, 2, 3, 4}})}};
  CHECK(witness_verifies(A, r));
}

TEST_CASE("S1 fails on abelian groups", "[simple_props]") {
  auto A = algebra("Z3");
  auto r = check_S1(A);
  CHECK_FALSE(r.holds);
  REQUIRE(r.witness.size() == 2);
  // abelian: the form collapses to a1^-1
  CHECK(r.witness[1] != A.group().inv(r.witness[0]));
  CHECK(witness_verifies(A, r));
}

TEST_CASE("class and raw evaluation agree on small groups", "[simple_props]") {
  for (auto name : {"S3", "A4", "Z2", "Z3"}) {
    auto A = algebra(name);
    INFO(name);
    auto s3c = check_S3(A);
    auto s3r = check_S3(A, EvalMode::raw);
    CHECK(s3c.holds == s3r.holds);
    CHECK(witness_verifies(A, s3c));
    CHECK(witness_verifies(A, s3r));
    auto s4c = check_S4(A);
    auto s4r = check_S4(A, EvalMode::raw);
    CHECK(s4c.holds == s4r.holds);
    CHECK(witness_verifies(A, s4c));
  }
}

TEST_CASE("S1 solver", "[simple_props]") {
  auto A = algebra("A5");
  auto const& P = A.group();
  for (Index a1 = 0; a1 < P.size(); ++a1) {
    auto [x, y] = solve_S1_instance(A, a1, P.inv(a1));
    CHECK(s1_form(P, a1, x, y) == P.inv(a1));
  }
  CHECK(solve_S1_instance(A, 0, 0) == std::pair<Index, Index>{0, 0});

  std::mt19937_64 rng(1);
  std::uniform_int_distribution<Index> pick(0, 59);
  for (int i = 0; i < 1000; ++i) {
    Index a1 = pick(rng), a2 = pick(rng);
    auto [x, y] = solve_S1_instance(A, a1, a2);
    REQUIRE(s1_form(P, a1, x, y) == a2);
    // first solution in (x, y) order
    for (Index x2 = 0; x2 <= x; ++x2) {
      for (Index y2 = 0; y2 < (x2 == x ? y : P.size()); ++y2) {
        REQUIRE(s1_form(P, a1, x2, y2) != a2);
      }
    }
  }

  auto Z = algebra("Z3");
  auto g = Z.group().generators()[0];
  CHECK_THROWS_AS(solve_S1_instance(Z, g, g), NoSolution);
}

TEST_CASE("S2 solver", "[simple_props]") {
  auto A = algebra("A5");
  auto const& P = A.group();
  CHECK(solve_S2_instance(A, 0, 0, 0) == std::tuple<Index, Index, Index>{0, 0, 0});
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<Index> pick(0, 59);
  for (int i = 0; i < 1000; ++i) {
    Index a1 = pick(rng), a2 = pick(rng), a3 = pick(rng);
    auto [z, u, v] = solve_S2_instance(A, a1, a2, a3);
    REQUIRE(P.mul(P.mul(P.inv(a3), z), P.mul(a3, u)) == a1);
    REQUIRE(P.mul(P.inv(z), P.mul(P.mul(v, P.inv(u)), P.inv(v))) == a2);
    REQUIRE(s2_form(P, a1, a3, u, v) == a2);
  }
}

TEST_CASE("S3 solver", "[simple_props]") {
  auto A = algebra("A5");
  auto const& P = A.group();
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<Index> pick(1, 59);
  for (int i = 0; i < 1000; ++i) {
    Index u1 = pick(rng), u2 = pick(rng), u3 = pick(rng), u4 = pick(rng);
    auto [x, y, z] = solve_S3_instance(A, u1, u2, u3, u4);
    REQUIRE(s3_form(P, u1, u2, u3, x, y, z) == u4);
  }
  Index a = 5, b = 9, c = 17;
  CHECK(solve_S3_instance(A, a, b, c, P.mul(P.mul(a, b), c))
        == std::tuple<Index, Index, Index>{0, 0, 0});
  CHECK_THROWS_AS(solve_S3_instance(A, 0, 1, 2, 3), InvalidArgument);

  // exhaustive over class representatives: never fails
  auto reps = detail::nontrivial_reps(A);
  for (auto u1 : reps) {
    for (auto u2 : reps) {
      for (auto u3 : reps) {
        for (Index u4 = 1; u4 < P.size(); ++u4) {
          auto [x, y, z] = solve_S3_instance(A, u1, u2, u3, u4);
          REQUIRE(s3_form(P, u1, u2, u3, x, y, z) == u4);
        }
      }
    }
  }
}
