#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "group_concept.hpp"
#include "perm.hpp"

namespace mlef {

  // A permutation group enumerated in full.
  //
  // Elements are numbered in breadth-first order from the identity (index 0),
  // expanding each element by the generators in input order, so the numbering
  // is a pure function of the generator list.
  class FiniteGroup {
   public:
    using index_type = std::uint32_t;

    static constexpr std::size_t default_cap = 10'000'000;
    // Full Cayley tables are kept only up to this order.
    static constexpr std::size_t table_limit = 2048;

    static FiniteGroup generate(std::vector<Perm> const& gens,
                                std::size_t              cap = default_cap) {
      if (gens.empty()) {
        throw InvalidArgument("generate_group: empty generating set");
      }
      std::size_t const degree = gens.front().degree();
      for (auto const& g : gens) {
        if (g.degree() != degree) {
          throw InvalidArgument("generate_group: generators of mixed degree");
        }
      }

      FiniteGroup G;
      G.degree_ = degree;
      G.add(Perm::identity(degree), 0, 0);
      std::size_t const k = gens.size();
      for (std::size_t pos = 0; pos < G.elements_.size(); ++pos) {
        for (std::size_t j = 0; j < k; ++j) {
          Perm next = compose(G.elements_[pos], gens[j]);
          auto it   = G.index_.find(next);
          index_type idx;
          if (it == G.index_.end()) {
            if (G.elements_.size() >= cap) {
              throw CapExceeded("generate_group: closure too large", cap);
            }
            idx = static_cast<index_type>(G.elements_.size());
            G.add(std::move(next), static_cast<index_type>(pos),
                  static_cast<index_type>(j));
          } else {
            idx = it->second;
          }
          G.right_gen_.push_back(idx);
        }
      }
      for (auto const& g : gens) {
        G.gen_index_.push_back(G.index_.at(g));
      }
      G.ngens_ = k;
      G.finish();
      return G;
    }

    std::size_t size() const noexcept {
      return elements_.size();
    }

    std::size_t degree() const noexcept {
      return degree_;
    }

    index_type identity() const noexcept {
      return 0;
    }

    Perm const& element(index_type i) const {
      return elements_.at(i);
    }

    std::vector<Perm> const& elements() const noexcept {
      return elements_;
    }

    std::optional<index_type> index_of(Perm const& p) const {
      auto it = index_.find(p);
      if (it == index_.end()) {
        return std::nullopt;
      }
      return it->second;
    }

    index_type at(Perm const& p) const {
      auto i = index_of(p);
      if (!i) {
        throw InvalidArgument("permutation " + p.to_string()
                              + " is not an element of the group");
      }
      return *i;
    }

    index_type mul(index_type a, index_type b) const {
      if (!table_.empty()) {
        return table_[static_cast<std::size_t>(a) * size() + b];
      }
      // b = g_1 ... g_r along its BFS word
      std::vector<index_type> word;
      for (index_type x = b; x != 0; x = parent_[x]) {
        word.push_back(parent_gen_[x]);
      }
      index_type r = a;
      for (auto it = word.rbegin(); it != word.rend(); ++it) {
        r = right_gen_[static_cast<std::size_t>(r) * ngens_ + *it];
      }
      return r;
    }

    index_type inv(index_type a) const {
      return inverse_[a];
    }

    // h^-1 g h
    index_type conj(index_type g, index_type h) const {
      return mul(mul(inv(h), g), h);
    }

    std::vector<index_type> const& generators() const noexcept {
      return gen_index_;
    }

    // Right multiplication by the j-th input generator.
    index_type mul_gen(index_type a, std::size_t j) const {
      return right_gen_[static_cast<std::size_t>(a) * ngens_ + j];
    }

    std::vector<Perm> generator_perms() const {
      std::vector<Perm> out;
      for (auto i : gen_index_) {
        out.push_back(elements_[i]);
      }
      return out;
    }

   private:
    void add(Perm p, index_type parent, index_type gen) {
      index_.emplace(p, static_cast<index_type>(elements_.size()));
      elements_.push_back(std::move(p));
      parent_.push_back(parent);
      parent_gen_.push_back(gen);
    }

    void finish() {
      inverse_.resize(size());
      for (std::size_t i = 0; i < size(); ++i) {
        inverse_[i] = index_.at(elements_[i].inverse());
      }
      if (size() <= table_limit) {
        std::size_t const n = size();
        table_.assign(n * n, 0);
        // column b from column parent(b), one generator step
        for (std::size_t a = 0; a < n; ++a) {
          table_[a * n] = static_cast<index_type>(a);
        }
        for (std::size_t b = 1; b < n; ++b) {
          for (std::size_t a = 0; a < n; ++a) {
            table_[a * n + b] = mul_gen(table_[a * n + parent_[b]], parent_gen_[b]);
          }
        }
      }
    }

    std::size_t                                        degree_ = 0;
    std::size_t                                        ngens_  = 0;
    std::vector<Perm>                                  elements_;
    std::unordered_map<Perm, index_type, PermHash>     index_;
    std::vector<index_type>                            parent_;
    std::vector<index_type>                            parent_gen_;
    std::vector<index_type>                            right_gen_;
    std::vector<index_type>                            gen_index_;
    std::vector<index_type>                            inverse_;
    std::vector<index_type>                            table_;
  };

  static_assert(EnumeratedGroup<FiniteGroup>);

  using GroupPtr = std::shared_ptr<FiniteGroup const>;
  using Index    = FiniteGroup::index_type;

  inline GroupPtr generate_group(std::vector<Perm> const& gens,
                                 std::size_t cap = FiniteGroup::default_cap) {
    return std::make_shared<FiniteGroup const>(FiniteGroup::generate(gens, cap));
  }

  // Generators of the built-in groups, by name.
  inline std::map<std::string, std::vector<Perm>> const& builtin_generators() {
    static std::map<std::string, std::vector<Perm>> const table = {
        {"A5", {Perm::from_cycles(5, {{0, 1, 2, 3, 4}}), Perm::from_cycles(5, {{0, 1, 2}})}},
        {"A4", {Perm::from_cycles(4, {{0, 1, 2}}), Perm::from_cycles(4, {{1, 2, 3}})}},
        {"S4", {Perm::from_cycles(4, {{0, 1}}), Perm::from_cycles(4, {{0, 1, 2, 3}})}},
        {"S3", {Perm::from_cycles(3, {{0, 1}}), Perm::from_cycles(3, {{0, 1, 2}})}},
        {"Z2", {Perm::from_cycles(2, {{0, 1}})}},
        {"Z3", {Perm::from_cycles(3, {{0, 1, 2}})}},
        {"Z4", {Perm::from_cycles(4, {{0, 1, 2, 3}})}},
    };
    return table;
  }

  inline GroupPtr builtin_group(std::string const& name) {
    auto const& table = builtin_generators();
    auto        it    = table.find(name);
    if (it == table.end()) {
      throw InvalidArgument("unknown built-in group '" + name + "'");
    }
    return generate_group(it->second);
  }

  using ElementSet = std::vector<FiniteGroup::index_type>;

  inline ElementSet sorted_unique(ElementSet s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
  }

  // Closure of a finite subset under products (hence a subgroup).
  template <EnumeratedGroup G>
  std::vector<typename G::index_type> subgroup_closure(
      G const&                                   group,
      std::vector<typename G::index_type> const& gens) {
    using I = typename G::index_type;
    std::vector<bool> in(group.size(), false);
    std::vector<I>    out{group.identity()};
    in[group.identity()] = true;
    for (std::size_t pos = 0; pos < out.size(); ++pos) {
      for (auto s : gens) {
        I x = group.mul(out[pos], s);
        if (!in[x]) {
          in[x] = true;
          out.push_back(x);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  template <EnumeratedGroup G>
  bool is_subgroup(G const& group, std::vector<typename G::index_type> const& set) {
    std::vector<bool> in(group.size(), false);
    for (auto x : set) {
      if (x >= group.size()) {
        return false;
      }
      in[x] = true;
    }
    if (!in[group.identity()]) {
      return false;
    }
    // a finite subset closed under products is a subgroup
    for (auto a : set) {
      for (auto b : set) {
        if (!in[group.mul(a, b)]) {
          return false;
        }
      }
    }
    return true;
  }

  // Assumes is_subgroup; conjugating by generators of the group suffices.
  template <EnumeratedGroup G>
  bool is_normal(G const& group, std::vector<typename G::index_type> const& set) {
    if (!is_subgroup(group, set)) {
      return false;
    }
    std::vector<bool> in(group.size(), false);
    for (auto x : set) {
      in[x] = true;
    }
    for (auto x : group.generators()) {
      for (auto n : set) {
        if (!in[group.mul(group.mul(group.inv(x), n), x)]) {
          return false;
        }
      }
    }
    return true;
  }

  inline ElementSet normal_closure(FiniteGroup const& G, ElementSet const& seeds) {
    ElementSet gens = seeds;
    // keep adding conjugates by generators until stable
    ElementSet current = subgroup_closure(G, gens);
    while (true) {
      ElementSet extra;
      std::vector<bool> in(G.size(), false);
      for (auto x : current) {
        in[x] = true;
      }
      for (auto x : G.generators()) {
        for (auto n : current) {
          auto c = G.conj(n, x);
          if (!in[c]) {
            in[c] = true;
            extra.push_back(c);
          }
        }
      }
      if (extra.empty()) {
        return current;
      }
      gens.insert(gens.end(), extra.begin(), extra.end());
      current = subgroup_closure(G, gens);
    }
  }

  // All normal subgroups, sorted by order then lexicographically.  Intended
  // for small groups: joins of normal closures of single elements.
  inline std::vector<ElementSet> normal_subgroups(FiniteGroup const& G) {
    std::vector<ElementSet> found;
    auto add = [&](ElementSet const& s) {
      if (std::find(found.begin(), found.end(), s) == found.end()) {
        found.push_back(s);
        return true;
      }
      return false;
    };
    add({G.identity()});
    for (FiniteGroup::index_type g = 0; g < G.size(); ++g) {
      add(normal_closure(G, {g}));
    }
    bool grew = true;
    while (grew) {
      grew = false;
      auto snapshot = found;
      for (std::size_t i = 0; i < snapshot.size(); ++i) {
        for (std::size_t j = i + 1; j < snapshot.size(); ++j) {
          ElementSet u = snapshot[i];
          u.insert(u.end(), snapshot[j].begin(), snapshot[j].end());
          grew |= add(normal_closure(G, sorted_unique(u)));
        }
      }
    }
    std::sort(found.begin(), found.end(), [](auto const& a, auto const& b) {
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return found;
  }

}  // namespace mlef
