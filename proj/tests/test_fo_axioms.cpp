#include <catch_amalgamated.hpp>

#include <random>
#include <set>

#include <mlef/conjugacy.hpp>
#include <mlef/fo_axioms.hpp>
#include <mlef/norm_ops.hpp>

using namespace mlef;

namespace {

  std::vector<Rational> range_of(NormTable const& t) {
    std::set<Rational> r(t.values().begin(), t.values().end());
    return {r.begin(), r.end()};
  }

  // range plus pairwise sums, so every triangle instance on the range is
  // expressible
  std::vector<Rational> closed_thresholds(NormTable const& t) {
    auto r = range_of(t);
    std::set<Rational> q(r.begin(), r.end());
    for (auto const& a : r) {
      for (auto const& b : r) {
        q.insert(a + b);
      }
    }
    q.insert(Rational(0));
    return {q.begin(), q.end()};
  }

  std::vector<NormTable> sample_tables() {
    std::vector<NormTable> out;
    for (auto name : {"S3", "A4", "S4"}) {
      auto G = builtin_group(name);
      auto c = conjugacy_classes(*G);
      // invariant word norms over generating class closures
      for (std::size_t k = 1; k < c.count(); ++k) {
        auto S = conjugacy_closure(*G, c, c.classes[k]);
        if (subgroup_closure(*G, S).size() == G->size()) {
          out.push_back(word_norm_bfs(G, S));
        }
      }
      // a non-invariant word norm over the plain generators
      ElementSet gens(G->generators().begin(), G->generators().end());
      for (auto g : G->generators()) {
        gens.push_back(G->inv(g));
      }
      std::sort(gens.begin(), gens.end());
      gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
      out.push_back(word_norm_bfs(G, gens));
    }
    return out;
  }

}  // namespace

TEST_CASE("from_norm compares exactly", "[fo_axioms]") {
  auto G = builtin_group("S3");
  std::vector<Rational> v(6, Rational(1));
  v[G->identity()] = 0;
  NormTable d(G, v);
  auto f = from_norm(d, {Rational(1), Rational(0), Rational(1, 2)});
  REQUIRE(f.thresholds() == std::vector<Rational>{0, Rational(1, 2), 1});
  for (Index g = 0; g < 6; ++g) {
    bool one = g == G->identity();
    CHECK(f.at(g, 0) == (one ? Sign::equal : Sign::greater));
    CHECK(f.at(g, 1) == (one ? Sign::less : Sign::greater));
    CHECK(f.at(g, 2) == (one ? Sign::less : Sign::equal));
  }
  v[1] = v[G->inv(1)] = 2;
  auto f2 = from_norm(NormTable(G, v), {Rational(0), Rational(2)});
  CHECK(f2.at(1, 1) == Sign::equal);
  CHECK_THROWS_AS(from_norm(d, {Rational(1)}), InvalidArgument);
}

TEST_CASE("w_of inverts from_norm on the range", "[fo_axioms]") {
  for (auto name : {"S3", "A5"}) {
    auto G = builtin_group(name);
    auto c = conjugacy_classes(*G);
    for (std::size_t k = 1; k < c.count(); ++k) {
      auto S = conjugacy_closure(*G, c, c.classes[k]);
      if (subgroup_closure(*G, S).size() != G->size()) {
        continue;
      }
      auto t = word_norm_bfs(G, S);
      auto w = w_of(from_norm(t, range_of(t)));
      for (Index g = 0; g < G->size(); ++g) {
        REQUIRE(w[g].has_value());
        REQUIRE(*w[g] == t[g]);
      }
    }
  }
}

TEST_CASE("w_of beyond the thresholds", "[fo_axioms]") {
  auto G = builtin_group("S3");
  auto t = word_norm_bfs(G, {G->generators().begin(), G->generators().end()});
  auto w0 = w_of(from_norm(t, {Rational(0)}));
  for (Index g = 0; g < 6; ++g) {
    CHECK(w0[g].has_value() == (g == G->identity()));
  }
  // values strictly between thresholds round up to the next threshold
  auto w = w_of(from_norm(t, {Rational(0), Rational(3, 2), Rational(3)}));
  for (Index g = 0; g < 6; ++g) {
    if (t[g] == 0) {
      CHECK(*w[g] == 0);
    } else if (t[g] <= Rational(3, 2)) {
      CHECK(*w[g] == Rational(3, 2));
    } else {
      CHECK(*w[g] == 3);
    }
  }
}

TEST_CASE("check_axioms on norms, pseudo-norms and planted tables", "[fo_axioms]") {
  auto A = builtin_group("A5");
  auto c = conjugacy_classes(*A);
  auto t = word_norm_bfs(A, conjugacy_closure(*A, c, c.classes[1]));
  auto f = from_norm(t, closed_thresholds(t));
  for (auto th : {Theory::T_W, Theory::T_IPMG, Theory::T_IMG}) {
    auto rep = check_axioms(f, th);
    CHECK(rep.ok);
    CHECK(rep.instances["W1"] > 0);
  }
  CHECK(check_axioms(f, Theory::T_IMG).instances.count("NORM") == 1);

  // pulled back from S3 / A3: kernel A3
  auto G  = builtin_group("S3");
  auto A3 = subgroup_closure(*G, {G->at(Perm::from_cycles(3, {{0, 1, 2}}))});
  std::vector<Rational> v(6, Rational(1));
  for (auto a : A3) {
    v[a] = 0;
  }
  auto fp = from_norm(NormTable(G, v), {Rational(0), Rational(1), Rational(2)});
  CHECK(check_axioms(fp, Theory::T_IPMG).ok);
  auto img = check_axioms(fp, Theory::T_IMG);
  REQUIRE_FALSE(img.ok);
  REQUIRE(img.violation_counts.size() == 1);
  REQUIRE(img.violation_counts["NORM"] == 2);
  for (auto const& viol : img.violations) {
    CHECK(std::binary_search(A3.begin(), A3.end(), static_cast<Index>(viol.elements[0])));
    CHECK(reverify(fp, viol));
  }

  // planted monotonicity failure: '<' at 1/2 but '>' at 1
  auto planted = from_norm(NormTable(G, v), {Rational(0), Rational(1, 2), Rational(1)});
  Index g = 1;
  while (std::binary_search(A3.begin(), A3.end(), g)) {
    ++g;
  }
  planted.set(g, 1, Sign::less);
  planted.set(G->inv(g), 1, Sign::less);
  planted.set(g, 2, Sign::greater);
  planted.set(G->inv(g), 2, Sign::greater);
  auto w = check_axioms(planted, Theory::T_W);
  REQUIRE_FALSE(w.ok);
  REQUIRE(w.violation_counts.count("W1") == 1);
  bool witnessed = false;
  for (auto const& viol : w.violations) {
    CHECK(reverify(planted, viol));
    witnessed = witnessed
                || (viol.axiom == "W1" && viol.elements[0] == g
                    && viol.thresholds == std::vector<Rational>{Rational(1, 2), 1});
  }
  CHECK(witnessed);

  // a 3-cycle whose row differs from its inverse's
  auto k    = G->at(Perm::from_cycles(3, {{0, 1, 2}}));
  auto asym = from_norm(NormTable(G, v), {Rational(0), Rational(1)});
  asym.set(k, 1, Sign::equal);
  auto rw = check_axioms(asym, Theory::T_W);
  CHECK(rw.violation_counts.count("W4") == 1);
  for (auto const& viol : rw.violations) {
    CHECK(reverify(asym, viol));
  }
}

TEST_CASE("triangle instances outside Q are vacuous", "[fo_axioms]") {
  auto G = builtin_group("S3");
  auto t = word_norm_bfs(G, {G->generators().begin(), G->generators().end()});
  auto r = check_axioms(from_norm(t, {Rational(0), Rational(5)}), Theory::T_IPMG);
  // (5, 5) has no sum in Q
  CHECK(r.vacuous_triangle == 36);
  CHECK(r.instances["TRI"] == 36 * 3);
}

TEST_CASE("axiom checks agree with the direct validators", "[fo_axioms]") {
  auto tables = sample_tables();
  // random symmetric rational tables; some fail the triangle inequality
  std::mt19937_64 rng(41);
  for (auto name : {"S3", "A4"}) {
    auto G = builtin_group(name);
    for (int r = 0; r < 40; ++r) {
      std::uniform_int_distribution<int> num(0, 8);
      std::vector<Rational> v(G->size());
      for (Index g = 0; g < G->size(); ++g) {
        auto gi = G->inv(g);
        if (gi < g) {
          v[g] = v[gi];
        } else {
          // values in [1/2, 5/2]: some triangles fail
          v[g] = Rational(2 + num(rng), 4);
        }
      }
      v[G->identity()] = 0;
      tables.emplace_back(G, v);
    }
  }
  std::size_t both_ok = 0, both_bad = 0;
  for (auto const& t : tables) {
    bool direct = validate_pseudo_norm(t).ok && validate_invariance(t).ok;
    auto rep    = check_axioms(from_norm(t, closed_thresholds(t)), Theory::T_IPMG);
    REQUIRE(rep.ok == direct);
    (direct ? both_ok : both_bad) += 1;
    for (auto const& viol : rep.violations) {
      REQUIRE(reverify(from_norm(t, closed_thresholds(t)), viol));
    }
  }
  CHECK(both_ok > 0);
  CHECK(both_bad > 0);
}
