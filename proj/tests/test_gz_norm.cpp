#include <catch_amalgamated.hpp>

#include <mlef/gz_norm.hpp>
#include <mlef/random.hpp>

using namespace mlef;

namespace {

  Index element(BasePtr const& B, std::vector<std::vector<std::uint32_t>> const& cycles) {
    auto const& P = B->group();
    return P.at(Perm::from_cycles(P.degree(), cycles));
  }

  LampElem at_indices(BasePtr const& B, Mode mode, std::vector<std::int64_t> const& idx,
                      std::vector<Index> const& vals, std::int64_t shift = 0) {
    std::vector<LampElem::Entry> s;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      s.emplace_back(idx[j], vals[j]);
    }
    return LampElem(B, mode, s, shift);
  }

  std::vector<Rational> q_range(int hi) {
    std::vector<Rational> Q;
    for (int q = 0; q <= hi; ++q) {
      Q.emplace_back(q);
    }
    Q.emplace_back(3, 2);
    return Q;
  }

}  // namespace

TEST_CASE("norm_gz on the case table", "[gz_norm]") {
  auto B = builtin_base("A5");
  auto I = Mode::infinite();
  auto const& P = B->group();
  CHECK(norm_gz(LampElem::identity(B, I)) == 0);
  CHECK(norm_gz(LampElem::t(B, I, 5)) == 5);
  CHECK(norm_gz(LampElem::t(B, I, -4)) == 4);
  CHECK(norm_gz(LampElem::single(B, I, 7, 3)) == 1);
  CHECK(norm_gz(at_indices(B, I, {-3, 8}, {5, 9})) == 2);

  auto tau = element(B, {{0, 1}, {2, 3}});
  auto c5  = element(B, {{0, 1, 2, 3, 4}});
  // 1 is not in C(tau) C(c5) C(c5): weight 3, not a [+-,t]-commutator
  CHECK(norm_gz(at_indices(B, I, {0, 1, 2}, {tau, c5, c5})) == 3);
  CHECK(norm_gz(at_indices(B, I, {0, 4, 9}, {tau, tau, tau})) == 2);

  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    auto h = random_vector_of_weight(B, I, rng, 4 + i % 5, -8, 8);
    REQUIRE(norm_gz(h) == 2);
  }
  // shift +-1: telescoping vectors have norm 1, the rest 2
  auto g = at_indices(B, I, {0, 1}, {c5, P.inv(c5)}, 1);
  CHECK(norm_gz(g) == 1);
  CHECK(norm_gz(at_indices(B, I, {0, 1}, {c5, c5}, 1)) == 2);
  CHECK(norm_gz(at_indices(B, I, {0, 1}, {c5, P.inv(c5)}, -1)) == 1);
  CHECK(norm_gz(at_indices(B, I, {0, 1, 5}, {c5, c5, tau}, 3)) == 3);
}

TEST_CASE("norm_gz rejects bases failing S1-S4", "[gz_norm]") {
  for (auto name : {"S3", "Z3", "A4"}) {
    auto B = builtin_base(name);
    auto g = LampElem::t(B, Mode::infinite());
    CHECK_THROWS_AS(norm_gz(g), UnsupportedBase);
    try {
      norm_gz(g);
    } catch (UnsupportedBase const& e) {
      CHECK(std::string(e.what()).find("S") != std::string::npos);
    }
  }
  auto B = builtin_base("A5");
  CHECK_THROWS_AS(norm_gz(LampElem::t(B, Mode::truncated(3))), InvalidArgument);
  CHECK_THROWS_AS(norm_truncated(LampElem::t(B, Mode::infinite())), InvalidArgument);
}

TEST_CASE("norm_gz metric properties on samples", "[gz_norm]") {
  auto B = builtin_base("A5");
  auto I = Mode::infinite();
  Rng  rng(22);
  for (int i = 0; i < 10000; ++i) {
    auto a  = random_elem(B, I, rng, 5, -6, 6, 4);
    auto b  = random_elem(B, I, rng, 5, -6, 6, 4);
    auto na = norm_gz(a);
    REQUIRE(na >= (a.shift() < 0 ? -a.shift() : a.shift()));
    REQUIRE((na == 0) == a.is_identity());
    REQUIRE((na == 1) == in_Sbar(a));
    REQUIRE(norm_gz(inverse(a)) == na);
    REQUIRE(norm_gz(mul(a, b)) <= na + norm_gz(b));
    REQUIRE(norm_gz(conjugate(a, b)) == na);
  }
}

TEST_CASE("geodesics in G_Z", "[gz_norm]") {
  auto B = builtin_base("A5");
  auto I = Mode::infinite();
  auto t = LampElem::t(B, I);

  auto g3 = geodesic(LampElem::t(B, I, 3));
  REQUIRE(g3.length() == 3);
  for (auto const& s : g3.factors) {
    CHECK(s == t);
  }
  CHECK(geodesic(LampElem::identity(B, I)).length() == 0);

  // a weight-3 [+-,t]-commutator gives a T- factor followed by a T+ factor
  auto tau = element(B, {{0, 1}, {2, 3}});
  auto pm  = geodesic(at_indices(B, I, {0, 4, 9}, {tau, tau, tau}));
  REQUIRE(pm.length() == 2);
  CHECK(in_Tminus(pm.factors[0]));
  CHECK(in_Tplus(pm.factors[1]));

  Rng rng(23);
  for (int i = 0; i < 1000; ++i) {
    auto g   = random_elem(B, I, rng, 6, -7, 7, 5);
    auto geo = geodesic(g);
    auto bad = geodesic_violations(g, geo, norm_gz(g));
    INFO(g.to_string());
    REQUIRE(bad.empty());
  }
}

TEST_CASE("norm_truncated basics", "[gz_norm]") {
  auto B = builtin_base("A5");
  for (std::int64_t n : {1, 2, 3, 5}) {
    auto T = Mode::truncated(n);
    CHECK(norm_truncated(LampElem::t(B, T)) == 1);
    CHECK(norm_truncated(LampElem::t(B, T, 2 * n + 1)) == 0);
    CHECK(norm_truncated(LampElem::t(B, T, n + 1)) == n);
  }
  CHECK(formula_mode(Mode::truncated(2)) == FormulaMode::advisory);
  CHECK(formula_mode(Mode::truncated(3)) == FormulaMode::theory);
  // theory mode refuses bases outside S1-S4, advisory mode does not
  auto S = builtin_base("S3");
  CHECK_THROWS_AS(norm_truncated(LampElem::t(S, Mode::truncated(3))), UnsupportedBase);
  CHECK(norm_truncated(LampElem::t(S, Mode::truncated(1))) == 1);
}

TEST_CASE("truncated geodesics and invariance", "[gz_norm]") {
  auto B = builtin_base("A5");
  Rng  rng(24);
  for (std::int64_t n : {1, 2, 3, 4}) {
    auto T = Mode::truncated(n);
    for (int i = 0; i < 300; ++i) {
      // full-support vectors exercise the wrap-around split
      auto g = i % 3 == 0 ? random_vector_of_weight(B, T, rng, 2 * n + 1, -n, n)
                                .with_shift(static_cast<std::int64_t>(i % (2 * n + 1)) - n)
                          : random_elem(B, T, rng, 2 * n + 1, -n, n, n);
      auto y   = random_elem(B, T, rng, 3, -n, n, n);
      auto nv  = norm_truncated(g);
      auto geo = geodesic(g);
      INFO(g.to_string());
      REQUIRE(geodesic_violations(g, geo, nv).empty());
      REQUIRE(norm_truncated(conjugate(g, y)) == nv);
      REQUIRE(norm_truncated(inverse(g)) == nv);
    }
  }
}

TEST_CASE("phi", "[gz_norm]") {
  auto B = builtin_base("A5");
  auto I = Mode::infinite();
  std::int64_t N = 2;
  auto g = at_indices(B, I, {-6, 3}, {4, 7}, 5);
  auto p = phi(g, N);
  CHECK(p.mode() == Mode::truncated(7));
  CHECK(p.support() == g.support());
  CHECK(p.shift() == 5);
  CHECK(phi(LampElem::t(B, I, 2 * N + 3), N).is_identity());
  CHECK(phi(LampElem::identity(B, I), N).is_identity());
  CHECK(phi(LampElem::single(B, I, -7, 1), N).is_identity());
}

TEST_CASE("phi preserves norms on random K", "[gz_norm]") {
  auto B = builtin_base("A5");
  auto I = Mode::infinite();
  Rng  rng(25);
  for (int r = 0; r < 30; ++r) {
    std::vector<LampElem> K;
    for (int i = 0; i < 8; ++i) {
      K.push_back(random_elem(B, I, rng, 4, -4, 4, 3));
    }
    auto N = max_N_value(K);
    for (auto const& g : K) {
      REQUIRE(norm_gz(g) == norm_truncated(phi(g, N)));
    }
    // close K a little under multiplication so the triple check has content
    K.push_back(mul(K[0], K[1]));
    std::sort(K.begin(), K.end(), [](auto const& a, auto const& b) {
      return a.to_string() < b.to_string();
    });
    K.erase(std::unique(K.begin(), K.end()), K.end());
    N = max_N_value(K);
    auto rep = verify_KQ_almost_hom([&](LampElem const& g) { return phi(g, N); }, K,
                                    q_range(8), norm_gz, norm_truncated);
    INFO((rep.failures.empty() ? "" : rep.failures.front()));
    REQUIRE(rep.ok());
    REQUIRE(rep.triples_checked >= 1);
    REQUIRE(rep.norm_agreements.size() == K.size() * q_range(8).size());
  }
}

TEST_CASE("verify_KQ_almost_hom", "[gz_norm]") {
  auto B = builtin_base("A5");
  auto I = Mode::infinite();
  Rng  rng(26);
  std::vector<LampElem> K;
  for (int i = 0; i < 6; ++i) {
    K.push_back(random_elem(B, I, rng, 4, -4, 4, 3));
  }
  K.push_back(LampElem::identity(B, I));
  auto id  = [](LampElem const& g) { return g; };
  auto rep = verify_KQ_almost_hom(id, K, q_range(6), norm_gz, norm_gz);
  CHECK(rep.ok());
  CHECK(rep.failures.empty());
  CHECK_THROWS_AS(verify_KQ_almost_hom(id, K, {Rational(1)}, norm_gz, norm_gz), InvalidArgument);

  // a constant map is neither injective nor norm preserving
  auto one   = LampElem::identity(B, I);
  auto konst = [&](LampElem const&) { return one; };
  auto bad   = verify_KQ_almost_hom(konst, K, q_range(6), norm_gz, norm_gz);
  CHECK_FALSE(bad.injective_on_K);
  CHECK_FALSE(bad.norms_ok());
  CHECK_FALSE(bad.failures.empty());
}

TEST_CASE("an under-sized window fails on adversarial K", "[gz_norm]") {
  auto B = builtin_base("A5");
  auto I = Mode::infinite();
  Rng  rng(27);
  std::size_t found = 0;
  for (int r = 0; r < 20; ++r) {
    std::vector<LampElem> K;
    for (int i = 0; i < 6; ++i) {
      K.push_back(random_elem(B, I, rng, 3, -4, 4, 3));
    }
    // an element reaching the edge of K's range
    K.push_back(LampElem::single(B, I, 4, 1).with_shift(4));
    auto N = max_N_value(K);
    REQUIRE(N == 4);
    // the truncation [-(N-1), N-1] cannot hold K
    auto small = [&](LampElem const& g) { return window_map(g, N - 1, N - 1); };
    auto rep = verify_KQ_almost_hom(small, K, q_range(8), norm_gz, norm_truncated);
    found += !rep.ok();
    // the truncation [-N, N] is tight but still exact on these samples
    auto tight = [&](LampElem const& g) { return window_map(g, N, N); };
    auto ok    = verify_KQ_almost_hom(tight, K, q_range(8), norm_gz, norm_truncated);
    INFO((ok.failures.empty() ? "" : ok.failures.front()));
    CHECK(ok.ok());
  }
  CHECK(found == 20);
}
