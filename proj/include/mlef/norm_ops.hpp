#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "conjugacy.hpp"
#include "errors.hpp"
#include "finite_group.hpp"
#include "norm_table.hpp"
#include "rational.hpp"

namespace mlef {

  // A subgroup or quotient realized as its own FiniteGroup, with the map
  // relating its element indices to those of the parent group.
  struct DerivedNorm {
    GroupPtr           group;
    NormTable          table;
    std::vector<Index> map;  // restriction: sub -> parent; quotient: parent -> quotient
  };

  // Greedy generating set of a subgroup given by its elements.
  inline std::vector<Perm> subgroup_generators(FiniteGroup const& G, ElementSet const& H) {
    std::vector<Perm>  gens;
    std::vector<Index> gen_idx;
    ElementSet         closure{G.identity()};
    for (auto h : H) {
      if (!std::binary_search(closure.begin(), closure.end(), h)) {
        gens.push_back(G.element(h));
        gen_idx.push_back(h);
        closure = subgroup_closure(G, gen_idx);
      }
    }
    if (gens.empty()) {
      gens.push_back(Perm::identity(G.degree()));
    }
    return gens;
  }

  inline DerivedNorm restrict_norm(NormTable const& t, ElementSet const& H) {
    auto const& G   = t.group();
    auto        set = sorted_unique(H);
    if (!is_subgroup(G, set)) {
      throw InvalidArgument("restrict_norm: element set is not a subgroup");
    }
    auto               sub = generate_group(subgroup_generators(G, set));
    std::vector<Index> embed;
    std::vector<Rational> values;
    for (auto const& p : sub->elements()) {
      auto i = G.at(p);
      embed.push_back(i);
      values.push_back(t[i]);
    }
    return {sub, NormTable(sub, std::move(values)), std::move(embed)};
  }

  // Right cosets of a normal subgroup, numbered by smallest element.
  inline std::vector<Index> coset_labels(FiniteGroup const& G, ElementSet const& N,
                                         std::size_t& count) {
    constexpr Index    none = std::numeric_limits<Index>::max();
    std::vector<Index> label(G.size(), none);
    count = 0;
    for (Index g = 0; g < G.size(); ++g) {
      if (label[g] != none) {
        continue;
      }
      for (auto n : N) {
        label[G.mul(n, g)] = static_cast<Index>(count);
      }
      ++count;
    }
    return label;
  }

  // Quotient pseudo-norm: the value of a coset is the minimum over the coset.
  inline DerivedNorm quotient_norm(NormTable const& t, ElementSet const& N) {
    auto const& G   = t.group();
    auto        set = sorted_unique(N);
    if (!is_normal(G, set)) {
      throw InvalidArgument("quotient_norm: element set is not a normal subgroup");
    }
    std::size_t m     = 0;
    auto        label = coset_labels(G, set, m);
    std::vector<Index> rep(m);
    for (Index g = G.size(); g-- > 0;) {
      rep[label[g]] = g;
    }
    // g acts on cosets by Nx -> Nxg
    auto action = [&](Index g) {
      std::vector<Perm::point_type> images(m);
      for (std::size_t c = 0; c < m; ++c) {
        images[c] = label[G.mul(rep[c], g)];
      }
      return Perm(std::move(images));
    };
    std::vector<Perm> gens;
    for (auto s : G.generators()) {
      gens.push_back(action(s));
    }
    auto Q = generate_group(gens);
    if (Q->size() != m) {
      throw InvalidArgument("quotient_norm: coset action is not regular");
    }
    std::vector<Index>    proj(G.size());
    std::vector<Rational> values(m);
    std::vector<bool>     seen(m, false);
    for (Index g = 0; g < G.size(); ++g) {
      proj[g] = Q->at(action(g));
      if (!seen[proj[g]] || t[g] < values[proj[g]]) {
        values[proj[g]] = t[g];
        seen[proj[g]]   = true;
      }
    }
    return {Q, NormTable(Q, std::move(values)), std::move(proj)};
  }

  // Replaces 0 by eps on non-identity elements.
  inline NormTable plus_epsilon(NormTable const& t, Rational const& eps) {
    std::optional<Rational> min_nonzero;
    for (auto const& v : t.values()) {
      if (v != 0 && (!min_nonzero || v < *min_nonzero)) {
        min_nonzero = v;
      }
    }
    if (eps <= 0 || (min_nonzero && eps >= *min_nonzero)) {
      throw InvalidArgument("plus_epsilon: epsilon " + to_string(eps)
                            + " outside (0, min nonzero value)");
    }
    auto values = t.values();
    for (Index g = 0; g < values.size(); ++g) {
      if (values[g] == 0 && g != t.group().identity()) {
        values[g] = eps;
      }
    }
    return NormTable(t.group_ptr(), std::move(values));
  }

  // A value in (n, n+1] becomes n+1.
  inline NormTable integer_round(NormTable const& t) {
    std::vector<Rational> values;
    values.reserve(t.size());
    for (auto const& v : t.values()) {
      values.emplace_back(ceil(v));
    }
    return NormTable(t.group_ptr(), std::move(values));
  }

  inline bool is_prime(std::int64_t p) {
    if (p < 2) {
      return false;
    }
    for (std::int64_t d = 2; d * d <= p; ++d) {
      if (p % d == 0) {
        return false;
      }
    }
    return true;
  }

  // l_p(g) = max { 1/p^s : g not in N_s }.
  //
  // If the chain starts with the whole group it is read as N_0 > N_1 > ...,
  // otherwise as N_1 > N_2 > ...; either way the last member must be {1}.
  inline NormTable profinite_norm(GroupPtr const& G, std::vector<ElementSet> const& chain,
                                  std::int64_t p) {
    if (!is_prime(p)) {
      throw InvalidArgument("profinite_norm: " + std::to_string(p) + " is not prime");
    }
    if (chain.empty()) {
      throw InvalidArgument("profinite_norm: empty chain");
    }
    std::vector<ElementSet> members;
    for (auto const& n : chain) {
      members.push_back(sorted_unique(n));
    }
    for (std::size_t s = 0; s < members.size(); ++s) {
      if (!is_normal(*G, members[s])) {
        throw InvalidArgument("profinite_norm: chain member " + std::to_string(s)
                              + " is not a normal subgroup");
      }
      if (s > 0
          && (members[s].size() >= members[s - 1].size()
              || !std::includes(members[s - 1].begin(), members[s - 1].end(),
                                members[s].begin(), members[s].end()))) {
        throw InvalidArgument("profinite_norm: chain is not strictly descending at "
                              + std::to_string(s));
      }
    }
    if (members.back() != ElementSet{G->identity()}) {
      throw InvalidArgument("profinite_norm: chain does not end at the trivial subgroup");
    }
    std::size_t const offset = members.front().size() == G->size() ? 0 : 1;
    std::vector<Rational> values(G->size(), Rational(0));
    for (Index g = 0; g < G->size(); ++g) {
      if (g == G->identity()) {
        continue;
      }
      for (std::size_t s = 0; s < members.size(); ++s) {
        if (!std::binary_search(members[s].begin(), members[s].end(), g)) {
          std::int64_t den = 1;
          for (std::size_t e = 0; e < s + offset; ++e) {
            den *= p;
          }
          values[g] = Rational(1, den);
          break;
        }
      }
    }
    return NormTable(G, std::move(values));
  }

  // Union of the classes meeting S and S^-1, without the identity.
  inline ElementSet conjugacy_closure(FiniteGroup const& G, ConjClassTable const& classes,
                                      ElementSet const& S) {
    std::vector<bool> take(classes.count(), false);
    for (auto s : S) {
      take[classes.class_of.at(s)]        = true;
      take[classes.class_of.at(G.inv(s))] = true;
    }
    take[classes.class_of[G.identity()]] = false;
    ElementSet out;
    for (std::size_t c = 0; c < classes.count(); ++c) {
      if (take[c]) {
        out.insert(out.end(), classes.classes[c].begin(), classes.classes[c].end());
      }
    }
    return sorted_unique(out);
  }

  inline ElementSet conjugacy_closure(FiniteGroup const& G, ElementSet const& S) {
    return conjugacy_closure(G, conjugacy_classes(G), S);
  }

  // Word length over gens.  The set is symmetrized and the identity removed
  // first, with a notice on the table when that changed anything.
  inline NormTable word_norm_bfs(GroupPtr const& G, ElementSet const& gens) {
    ElementSet sym = gens;
    for (auto s : gens) {
      sym.push_back(G->inv(s));
    }
    sym = sorted_unique(sym);
    std::vector<std::string> notices;
    if (sym.size() != sorted_unique(gens).size()) {
      notices.push_back("generating set symmetrized");
    }
    if (auto it = std::find(sym.begin(), sym.end(), G->identity()); it != sym.end()) {
      sym.erase(it);
      notices.push_back("identity removed from generating set");
    }

    constexpr std::int64_t    unseen = -1;
    std::vector<std::int64_t> dist(G->size(), unseen);
    std::deque<Index>         queue{G->identity()};
    dist[G->identity()] = 0;
    while (!queue.empty()) {
      auto x = queue.front();
      queue.pop_front();
      for (auto s : sym) {
        auto y = G->mul(x, s);
        if (dist[y] == unseen) {
          dist[y] = dist[x] + 1;
          queue.push_back(y);
        }
      }
    }
    std::vector<Rational> values;
    for (Index g = 0; g < G->size(); ++g) {
      if (dist[g] == unseen) {
        throw InvalidArgument("word_norm_bfs: set does not generate the group (element "
                              + std::to_string(g) + " unreached)");
      }
      values.emplace_back(dist[g]);
    }
    NormTable t(G, std::move(values));
    t.notices = std::move(notices);
    return t;
  }

  // Closed ball of radius r around the identity.
  template <EnumeratedGroup G>
  std::vector<typename G::index_type> ball(BasicNormTable<G> const& t, Rational const& r) {
    std::vector<typename G::index_type> out;
    for (std::size_t g = 0; g < t.size(); ++g) {
      if (t[static_cast<typename G::index_type>(g)] <= r) {
        out.push_back(static_cast<typename G::index_type>(g));
      }
    }
    return out;
  }

}  // namespace mlef
