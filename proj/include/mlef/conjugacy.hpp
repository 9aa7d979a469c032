#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "errors.hpp"
#include "finite_group.hpp"
#include "group_concept.hpp"

namespace mlef {

  // Partition of a group into conjugacy classes.
  //
  // Classes are numbered in order of their smallest element, so the identity
  // class is class 0.  Each class is a sorted list of element indices.
  template <typename Index = FiniteGroup::index_type>
  struct BasicConjClassTable {
    std::vector<std::uint32_t>      class_of;
    std::vector<std::vector<Index>> classes;

    std::size_t count() const noexcept {
      return classes.size();
    }

    Index representative(std::size_t c) const {
      return classes.at(c).front();
    }

    std::vector<std::size_t> sizes() const {
      std::vector<std::size_t> out;
      for (auto const& c : classes) {
        out.push_back(c.size());
      }
      return out;
    }
  };

  using ConjClassTable = BasicConjClassTable<>;

  // Orbits under conjugation by the generators; these are the full classes
  // because the generators generate the group.
  template <EnumeratedGroup G>
  BasicConjClassTable<typename G::index_type> conjugacy_classes(G const& group) {
    using I                   = typename G::index_type;
    constexpr auto unassigned = static_cast<std::uint32_t>(-1);

    BasicConjClassTable<I> table;
    table.class_of.assign(group.size(), unassigned);
    std::vector<I> gen_inv;
    std::vector<I> gens;
    for (auto s : group.generators()) {
      gens.push_back(s);
      gen_inv.push_back(group.inv(s));
    }
    for (std::size_t start = 0; start < group.size(); ++start) {
      if (table.class_of[start] != unassigned) {
        continue;
      }
      auto const     id = static_cast<std::uint32_t>(table.classes.size());
      std::vector<I> orbit{static_cast<I>(start)};
      table.class_of[start] = id;
      for (std::size_t pos = 0; pos < orbit.size(); ++pos) {
        for (std::size_t j = 0; j < gens.size(); ++j) {
          I c = group.mul(group.mul(gen_inv[j], orbit[pos]), gens[j]);
          if (table.class_of[c] == unassigned) {
            table.class_of[c] = id;
            orbit.push_back(c);
          }
        }
      }
      std::sort(orbit.begin(), orbit.end());
      table.classes.push_back(std::move(orbit));
    }
    return table;
  }

  // { ab : a in C1, b in C2 }, sorted.
  template <EnumeratedGroup G>
  std::vector<typename G::index_type> class_product(
      G const& group, BasicConjClassTable<typename G::index_type> const& table,
      std::size_t c1, std::size_t c2) {
    if (c1 >= table.count() || c2 >= table.count()) {
      throw InvalidArgument("class_product: class id out of range");
    }
    std::vector<bool> hit(group.size(), false);
    for (auto a : table.classes[c1]) {
      for (auto b : table.classes[c2]) {
        hit[group.mul(a, b)] = true;
      }
    }
    std::vector<typename G::index_type> out;
    for (std::size_t i = 0; i < hit.size(); ++i) {
      if (hit[i]) {
        out.push_back(static_cast<typename G::index_type>(i));
      }
    }
    return out;
  }

}  // namespace mlef
