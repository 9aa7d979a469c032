#pragma once

#include <concepts>
#include <cstddef>
#include <ranges>

namespace mlef {

  // A finite group whose elements are the integers 0 .. size() - 1.
  //
  // Models: FiniteGroup (enumerated permutation groups) and TruncatedGroup
  // (the dense-coded finite lamplighter truncations).  generators() must
  // generate the group; validators use it to reduce invariance checks to
  // conjugation by generators.
  template <typename G>
  concept EnumeratedGroup = requires(G const&                 g,
                                     typename G::index_type a,
                                     typename G::index_type b) {
    typename G::index_type;
    { g.size() } -> std::convertible_to<std::size_t>;
    { g.identity() } -> std::same_as<typename G::index_type>;
    { g.mul(a, b) } -> std::same_as<typename G::index_type>;
    { g.inv(a) } -> std::same_as<typename G::index_type>;
    { g.generators() } -> std::ranges::range;
  };

}  // namespace mlef
