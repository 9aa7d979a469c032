#include <catch_amalgamated.hpp>

#include <mlef/json_io.hpp>
#include <mlef/norm_ops.hpp>
#include <mlef/random.hpp>

using namespace mlef;
using io::json;

TEST_CASE("elements round-trip through JSON", "[json_io]") {
  auto B = builtin_base("A5");
  Rng  rng(51);
  for (auto mode : {Mode::infinite(), Mode::truncated(3)}) {
    for (int i = 0; i < 300; ++i) {
      auto g    = random_elem(B, mode, rng, 5, -3, 3, 5);
      auto text = io::to_json(g).dump();
      REQUIRE(io::elem_from_json(io::parse(text), B) == g);
    }
  }
  // indices reduce into the window; element indices are accepted too
  auto g = io::elem_from_json(io::parse(R"({"mode":{"truncated":1},"shift":4,"support":{"3":7}})"), B);
  CHECK(g.shift() == 1);
  CHECK(g.support() == std::vector<LampElem::Entry>{{0, 7}});
  CHECK(io::elem_from_json(json::object(), B).is_identity());
  CHECK_THROWS_AS(io::elem_from_json(io::parse(R"({"support":{"x":[0,1,2,3,4]}})"), B),
                  InvalidArgument);
  CHECK_THROWS_AS(io::elem_from_json(io::parse(R"({"support":{"0":[1,0,2,3,4]}})"), B),
                  InvalidArgument);
  CHECK_THROWS_AS(io::elem_from_json(io::parse(R"({"mode":"finite"})"), B), InvalidArgument);
}

TEST_CASE("witnesses round-trip through JSON", "[json_io]") {
  auto B = builtin_base("A5");
  Rng  rng(52);
  for (int i = 0; i < 100; ++i) {
    auto h = random_vector_of_weight(B, Mode::infinite(), rng, 5, -4, 4);
    for (auto const& w : {build_2_commutator(h, 1), build_pm_commutator(h)}) {
      auto back = io::witness_from_json(io::parse(io::to_json(w).dump()), B);
      REQUIRE(back.k == w.k);
      REQUIRE(back.order == w.order);
      REQUIRE(back.vectors == w.vectors);
      REQUIRE(verify_witness(h, back));
    }
  }
  CHECK_THROWS_AS(io::witness_from_json(io::parse(R"({"kind":{"k":0},"vectors":[]})"), B),
                  InvalidArgument);
  CHECK_THROWS_AS(io::witness_from_json(io::parse(R"({"kind":{"pm":"++"},"vectors":[]})"), B),
                  InvalidArgument);
}

TEST_CASE("norm tables and weight functions round-trip", "[json_io]") {
  auto G = builtin_group("S4");
  std::vector<Rational> v(G->size(), Rational(3, 2));
  v[G->identity()] = 0;
  NormTable t(G, v);
  auto j = io::to_json(t);
  CHECK(j[1]["value"] == "3/2");
  CHECK(io::norm_table_from_json(j, G).values() == t.values());
  j.erase(j.size() - 1);
  CHECK_THROWS_AS(io::norm_table_from_json(j, G), InvalidArgument);

  auto f    = from_norm(t, {Rational(0), Rational(1), Rational(3, 2)});
  auto back = io::weight_fn_from_json(io::parse(io::to_json(f).dump()), G);
  CHECK(back.thresholds() == f.thresholds());
  for (Index g = 0; g < G->size(); ++g) {
    for (std::size_t q = 0; q < 3; ++q) {
      REQUIRE(back.at(g, q) == f.at(g, q));
    }
  }
}

TEST_CASE("group specs and hashes", "[json_io]") {
  auto a = io::base_from_text("A4");
  auto b = io::base_from_text(io::group_spec_json(a->group()).dump());
  CHECK(b->group().size() == 12);
  CHECK(io::group_hash(a->group()) == io::group_hash(b->group()));
  CHECK(io::group_hash(a->group()) != io::group_hash(*builtin_group("S4")));
  // the hash covers the generator list, so other generators of A4 hash differently
  auto c = io::base_from_text(R"({"degree":4,"generators":[[1,2,0,3],[0,2,3,1],[1,2,0,3]]})");
  CHECK(c->group().size() == 12);
  CHECK(io::group_hash(c->group()) != io::group_hash(a->group()));
  CHECK(io::sha256_hex("abc")
        == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  try {
    io::parse("[1, 2,");
    FAIL("no parse error");
  } catch (io::ParseError const& e) {
    CHECK(e.position() == 7);
  }
  CHECK_THROWS_AS(io::base_from_text(R"({"degree":3,"generators":[[0,1]]})"), InvalidArgument);
}
