#include <catch_amalgamated.hpp>

#include <map>
#include <set>

#include <mlef/brute_force.hpp>
#include <mlef/lamplighter.hpp>
#include <mlef/random.hpp>

using namespace mlef;

namespace {

  // Truncated elements act on window x P by (i, x) -> (i + k, x h_i); this
  // is a faithful right action, so it realizes the truncation inside a
  // symmetric group independently of mul().
  Perm as_perm(LampElem const& g) {
    auto const& P = g.P();
    auto const  n = *g.mode().n;
    auto const  w = static_cast<std::uint32_t>(2 * n + 1);
    auto const  m = static_cast<std::uint32_t>(P.size());
    std::vector<std::uint32_t> images(w * m);
    for (std::int64_t i = -n; i <= n; ++i) {
      for (Index x = 0; x < m; ++x) {
        auto j   = g.mode().reduce(i + g.shift());
        auto src = static_cast<std::uint32_t>(i + n) * m + x;
        images[src] = static_cast<std::uint32_t>(j + n) * m + P.mul(x, g.at(i));
      }
    }
    return Perm(images);
  }

  std::vector<LampElem> all_truncated(BasePtr const& base, std::int64_t n) {
    std::vector<LampElem> out;
    auto mode = Mode::truncated(n);
    for (std::int64_t k = -n; k <= n; ++k) {
      brute::for_each_vector(base, mode, -n, n,
                             [&](LampElem const& v) { out.push_back(v.with_shift(k)); });
    }
    return out;
  }

}  // namespace

TEST_CASE("construction and canonical form", "[lamplighter]") {
  auto B = builtin_base("S3");
  auto I = Mode::infinite();
  LampElem x(B, I, {{3, 0}, {-1, 2}}, 0);
  CHECK(x.weight() == 1);
  CHECK(x.support().front() == LampElem::Entry{-1, 2});
  CHECK_THROWS_AS(LampElem(B, I, {{1, 2}, {1, 3}}, 0), InvalidArgument);
  CHECK_THROWS_AS(LampElem(B, I, {{1, 6}}, 0), InvalidArgument);
  CHECK_THROWS_AS(LampElem(B, Mode::truncated(1), {{2, 1}}, 0), InvalidArgument);
  CHECK_THROWS_AS(Mode::truncated(0), InvalidArgument);
  CHECK(LampElem::t(B, Mode::truncated(2), 3).shift() == -2);
  CHECK(LampElem::t(B, Mode::truncated(2), 5).is_identity());
}

TEST_CASE("multiplication basics", "[lamplighter]") {
  auto B  = builtin_base("A5");
  auto I  = Mode::infinite();
  Rng  rng(1);
  auto one = LampElem::identity(B, I);
  auto t   = LampElem::t(B, I);
  for (int i = 0; i < 100; ++i) {
    auto x = random_elem(B, I, rng, 5, -4, 4, 3);
    CHECK(mul(x, one) == x);
    CHECK(mul(one, x) == x);
    auto g = random_vector(B, I, rng, 5, -4, 4);
    // t g t^-1 = alpha(g)
    CHECK(mul(t, mul(g, inverse(t))) == alpha(g));
    CHECK(mul(mul(t, g), inverse(t)) == alpha_pow(g, 1));
  }
  CHECK_THROWS_AS(mul(one, LampElem::identity(B, Mode::truncated(1))), InvalidArgument);
  CHECK_THROWS_AS(mul(one, LampElem::identity(builtin_base("S3"), I)), InvalidArgument);
  // structurally equal bases are interchangeable
  CHECK_NOTHROW(mul(one, LampElem::identity(builtin_base("A5"), I)));
}

TEST_CASE("associativity and inverses", "[lamplighter]") {
  auto B = builtin_base("A5");
  Rng  rng(2);
  for (auto mode : {Mode::infinite(), Mode::truncated(1), Mode::truncated(3)}) {
    std::int64_t lo = mode.is_truncated() ? -*mode.n : -6;
    std::int64_t hi = -lo;
    for (int i = 0; i < 1000; ++i) {
      auto a = random_elem(B, mode, rng, 6, lo, hi, 4);
      auto b = random_elem(B, mode, rng, 6, lo, hi, 4);
      auto c = random_elem(B, mode, rng, 6, lo, hi, 4);
      REQUIRE(mul(mul(a, b), c) == mul(a, mul(b, c)));
      REQUIRE(mul(a, inverse(a)).is_identity());
      REQUIRE(mul(inverse(a), a).is_identity());
      REQUIRE(inverse(inverse(a)) == a);
      REQUIRE(inverse(a).shift() == mode.reduce(-a.shift()));
      REQUIRE(mul(a, b).shift() == mode.reduce(a.shift() + b.shift()));
      REQUIRE(conjugate(a, b) == mul(mul(inverse(b), a), b));
      auto v = a.vector_part();
      REQUIRE(conjugate(v, b).shift() == 0);
    }
  }
}

TEST_CASE("alpha moves indices down", "[lamplighter]") {
  auto B = builtin_base("S3");
  auto I = Mode::infinite();
  auto x = LampElem::single(B, I, 0, 3);
  CHECK(alpha(x) == LampElem::single(B, I, -1, 3));
  CHECK(stats(alpha(x)).i_min == -1);
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    auto g = random_vector(B, I, rng, 5, -5, 5);
    CHECK(alpha_pow(alpha_pow(g, 1), -1) == g);
    CHECK(alpha_pow(alpha_pow(g, 3), 4) == alpha_pow(g, 7));
    if (g.weight() > 0) {
      CHECK(*stats(alpha(g)).i_min == *stats(g).i_min - 1);
    }
  }
  auto T = Mode::truncated(1);
  CHECK(alpha(LampElem::single(B, T, -1, 2)) == LampElem::single(B, T, 1, 2));
  CHECK_THROWS_AS(alpha(LampElem::t(B, I)), InvalidArgument);
}

TEST_CASE("support statistics", "[lamplighter]") {
  auto B = builtin_base("S3");
  auto I = Mode::infinite();
  auto s = stats(LampElem::t(B, I, 3));
  CHECK(s.weight == 0);
  CHECK(s.N_value == 3);
  CHECK_FALSE(s.i_min.has_value());
  CHECK_FALSE(s.i_max.has_value());

  s = stats(LampElem(B, I, {{-2, 1}, {5, 2}}, 1));
  CHECK(s.i_min == -2);
  CHECK(s.i_max == 5);
  CHECK(s.weight == 2);
  CHECK(s.N_value == 5);

  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    auto g = random_vector(B, I, rng, 5, -7, 7);
    CHECK(stats(inverse(g)).N_value == stats(g).N_value);
    CHECK(inverse(g).indices() == g.indices());
  }
}

TEST_CASE("generator membership predicates", "[lamplighter]") {
  auto B = builtin_base("A5");
  auto I = Mode::infinite();
  auto t = LampElem::t(B, I);
  CHECK(in_Tplus(t));
  CHECK(in_Tminus(inverse(t)));
  CHECK_FALSE(in_Tplus(inverse(t)));
  CHECK(in_Sbar(t));
  CHECK_FALSE(in_Sbar(LampElem::identity(B, I)));
  CHECK_FALSE(in_Sbar(LampElem::t(B, I, 2)));

  auto const& P = B->group();
  for (Index g = 1; g < P.size(); ++g) {
    LampElem x(B, I, {{0, g}, {1, P.inv(g)}}, 1);
    CHECK(in_Tplus(x));
    CHECK(in_single_support(LampElem::single(B, I, 7, g)));
    CHECK_FALSE(in_single_support(LampElem(B, I, {{7, g}}, 1)));
  }

  Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    auto g = random_vector(B, I, rng, 5, -5, 5);
    CHECK(in_Tplus(mul(plus_factor(g), t)));
    CHECK(in_Tminus(mul(minus_factor(g), inverse(t))));
  }
}

TEST_CASE("telescoping predicates equal the existential definition", "[lamplighter]") {
  // h = g alpha(g^-1) forces supp g inside [i_min(h) + 1, i_max(h)], so for
  // h supported in {0, 1, 2} a search over g supported in {0, 1, 2} is
  // exhaustive.
  for (auto name : {"S3", "A5"}) {
    auto B     = builtin_base(name);
    auto I     = Mode::infinite();
    auto plus  = brute::plus_images(B, 0, 2);
    auto minus = brute::minus_images(B, 0, 2);
    auto t     = LampElem::t(B, I);
    std::size_t tp = 0, tm = 0;
    brute::for_each_vector(B, I, 0, 2, [&](LampElem const& h) {
      bool p = in_Tplus(mul(h, t));
      bool m = in_Tminus(mul(h, inverse(t)));
      REQUIRE(p == plus.contains(h));
      REQUIRE(m == minus.contains(h));
      tp += p;
      tm += m;
    });
    auto n = B->group().size();
    CHECK(tp == n * n);
    CHECK(tm == n * n);
  }
}

TEST_CASE("the generating set is conjugation invariant", "[lamplighter]") {
  auto B = builtin_base("A5");
  Rng  rng(6);
  for (auto mode : {Mode::infinite(), Mode::truncated(2)}) {
    std::int64_t lo = mode.is_truncated() ? -2 : -5;
    auto t = LampElem::t(B, mode);
    for (int i = 0; i < 1000; ++i) {
      auto y = random_elem(B, mode, rng, 5, lo, -lo, 3);
      auto g = random_vector(B, mode, rng, 4, lo, -lo);
      auto single = random_vector_of_weight(B, mode, rng, 1, lo, -lo);
      for (auto const& s : {mul(plus_factor(g), t), mul(minus_factor(g), inverse(t)), single}) {
        REQUIRE(in_Sbar(s));
        REQUIRE(in_Sbar(conjugate(s, y)));
      }
      auto x = random_elem(B, mode, rng, 5, lo, -lo, 3);
      REQUIRE(in_Sbar(x) == in_Sbar(conjugate(x, y)));
    }
  }
}

TEST_CASE("truncated telescoping is rotation invariant", "[lamplighter]") {
  auto B = builtin_base("S3");
  auto const& P = B->group();
  for (std::int64_t n : {1, 2}) {
    auto mode = Mode::truncated(n);
    brute::for_each_vector(B, mode, -n, n, [&](LampElem const& h) {
      bool base = ordered_product(h) == P.identity();
      for (std::int64_t start = -n; start <= n; ++start) {
        Index r = P.identity();
        for (std::int64_t j = 0; j < 2 * n + 1; ++j) {
          r = P.mul(r, h.at(mode.reduce(start + j)));
        }
        REQUIRE((r == P.identity()) == base);
      }
    });
  }
}

TEST_CASE("truncated multiplication matches a permutation model", "[lamplighter]") {
  auto B    = builtin_base("S3");
  auto mode = Mode::truncated(1);
  auto all  = all_truncated(B, 1);
  REQUIRE(all.size() == 648);

  // the permutation group generated by the images of P at index 0 and t
  std::vector<Perm> gens;
  for (auto g : B->group().generators()) {
    gens.push_back(as_perm(LampElem::single(B, mode, 0, g)));
  }
  gens.push_back(as_perm(LampElem::t(B, mode)));
  auto G = generate_group(gens);
  REQUIRE(G->size() == 648);

  std::map<Perm, std::size_t> where;
  for (std::size_t i = 0; i < all.size(); ++i) {
    auto p = as_perm(all[i]);
    REQUIRE(G->index_of(p).has_value());
    where[p] = i;
  }
  REQUIRE(where.size() == all.size());
  for (auto const& a : all) {
    auto pa = as_perm(a);
    for (auto const& b : all) {
      REQUIRE(as_perm(mul(a, b)) == compose(pa, as_perm(b)));
    }
  }
}
