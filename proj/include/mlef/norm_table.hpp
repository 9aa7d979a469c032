#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "finite_group.hpp"
#include "group_concept.hpp"
#include "rational.hpp"

namespace mlef {

  // Exact nonnegative values on every element of an enumerated group.
  template <EnumeratedGroup G>
  class BasicNormTable {
   public:
    using group_type = G;
    using index_type = typename G::index_type;

    BasicNormTable(std::shared_ptr<G const> group, std::vector<Rational> values)
        : group_(std::move(group)), values_(std::move(values)) {
      if (!group_) {
        throw InvalidArgument("norm table without a group");
      }
      if (values_.size() != group_->size()) {
        throw InvalidArgument("norm table has " + std::to_string(values_.size())
                              + " values for a group of order "
                              + std::to_string(group_->size()));
      }
      for (auto const& v : values_) {
        if (v < 0) {
          throw InvalidArgument("negative norm value " + to_string(v));
        }
      }
    }

    G const& group() const noexcept {
      return *group_;
    }

    std::shared_ptr<G const> const& group_ptr() const noexcept {
      return group_;
    }

    Rational const& operator[](index_type g) const {
      return values_[g];
    }

    std::vector<Rational> const& values() const noexcept {
      return values_;
    }

    std::size_t size() const noexcept {
      return values_.size();
    }

    // d(g, h) = l(g h^-1)
    Rational distance(index_type g, index_type h) const {
      return values_[group_->mul(g, group_->inv(h))];
    }

    Rational max_value() const {
      return values_.empty() ? Rational(0) : *std::max_element(values_.begin(), values_.end());
    }

    // Remarks attached by the producing operation (symmetrized input etc.).
    std::vector<std::string> notices;

   private:
    std::shared_ptr<G const> group_;
    std::vector<Rational>    values_;
  };

  using NormTable = BasicNormTable<FiniteGroup>;

  struct Violation {
    std::string                axiom;  // "N1", "N2", "N3", "N1'", "INV"
    std::vector<std::uint64_t> elements;
    std::vector<Rational>      values;
  };

  struct ValidationReport {
    bool                               ok = true;
    std::vector<Violation>             violations;  // first few per axiom
    std::map<std::string, std::size_t> violation_counts;
    std::vector<std::string>           notices;

    static constexpr std::size_t witnesses_per_axiom = 16;

    void add(Violation v) {
      ok          = false;
      auto& count = violation_counts[v.axiom];
      if (count++ < witnesses_per_axiom) {
        violations.push_back(std::move(v));
      }
    }

    void merge(ValidationReport const& other) {
      ok = ok && other.ok;
      violations.insert(violations.end(), other.violations.begin(), other.violations.end());
      for (auto const& [k, v] : other.violation_counts) {
        violation_counts[k] += v;
      }
      notices.insert(notices.end(), other.notices.begin(), other.notices.end());
    }

    std::size_t total_violations() const {
      std::size_t n = 0;
      for (auto const& [k, v] : violation_counts) {
        n += v;
      }
      return n;
    }
  };

  namespace detail {

    // Values scaled to a common denominator when that fits, for fast sums.
    inline std::optional<std::vector<std::int64_t>> common_scale(
        std::vector<Rational> const& values) {
      std::int64_t l = 1;
      for (auto const& v : values) {
        auto d = v.denominator();
        auto g = std::gcd(l, d);
        if (l / g > (std::int64_t{1} << 40) / d) {
          return std::nullopt;
        }
        l = l / g * d;
      }
      std::vector<std::int64_t> out;
      out.reserve(values.size());
      for (auto const& v : values) {
        auto n = v.numerator();
        auto m = l / v.denominator();
        if (n > (std::int64_t{1} << 60) / m) {
          return std::nullopt;
        }
        out.push_back(n * m);
      }
      return out;
    }

  }  // namespace detail

  // Axioms (i) l(1) = 0, (ii) symmetry, (iii) triangle inequality.
  //
  // The triangle check is exhaustive: only pairs with l(g) + l(h) below the
  // maximal value can fail, so pairs are visited in order of increasing value
  // and the scan stops once the sum reaches the maximum.
  template <EnumeratedGroup G>
  ValidationReport validate_pseudo_norm(BasicNormTable<G> const& t) {
    using I       = typename G::index_type;
    auto const& g = t.group();
    ValidationReport report;

    if (t[g.identity()] != 0) {
      report.add({"N1", {g.identity()}, {t[g.identity()]}});
    }
    for (std::size_t x = 0; x < t.size(); ++x) {
      auto xi = g.inv(static_cast<I>(x));
      if (x < xi && t[static_cast<I>(x)] != t[xi]) {
        report.add({"N2", {x, xi}, {t[static_cast<I>(x)], t[xi]}});
      }
    }

    std::vector<I> order(t.size());
    std::iota(order.begin(), order.end(), I{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](I a, I b) { return t[a] < t[b]; });

    auto scaled = detail::common_scale(t.values());
    auto add    = [&](I a, I b, I ab) {
      report.add({"N3", {a, b, ab}, {t[a], t[b], t[ab]}});
    };
    if (scaled) {
      auto const& v   = *scaled;
      auto const  top = *std::max_element(v.begin(), v.end());
      for (std::size_t i = 0; i < order.size() && 2 * v[order[i]] < top; ++i) {
        I a = order[i];
        for (std::size_t j = 0; j < order.size(); ++j) {
          I b = order[j];
          if (v[a] + v[b] >= top) {
            break;
          }
          I ab = g.mul(a, b);
          if (v[ab] > v[a] + v[b]) {
            add(a, b, ab);
          }
          // (b, a) is covered when b comes first in the outer loop, unless
          // b is past the outer cut-off; check it here in that case.
          if (2 * v[b] >= top) {
            I ba = g.mul(b, a);
            if (v[ba] > v[a] + v[b]) {
              add(b, a, ba);
            }
          }
        }
      }
    } else {
      Rational const top = t.max_value();
      for (std::size_t i = 0; i < order.size() && 2 * t[order[i]] < top; ++i) {
        I a = order[i];
        for (std::size_t j = 0; j < order.size(); ++j) {
          I b = order[j];
          if (t[a] + t[b] >= top) {
            break;
          }
          I ab = g.mul(a, b);
          if (t[ab] > t[a] + t[b]) {
            add(a, b, ab);
          }
          if (2 * t[b] >= top) {
            I ba = g.mul(b, a);
            if (t[ba] > t[a] + t[b]) {
              add(b, a, ba);
            }
          }
        }
      }
    }
    return report;
  }

  // Pseudo-norm axioms plus (i'): l(g) = 0 only at the identity.
  template <EnumeratedGroup G>
  ValidationReport validate_norm(BasicNormTable<G> const& t) {
    auto report = validate_pseudo_norm(t);
    for (std::size_t x = 0; x < t.size(); ++x) {
      auto xi = static_cast<typename G::index_type>(x);
      if (xi != t.group().identity() && t[xi] == 0) {
        report.add({"N1'", {x}, {t[xi]}});
      }
    }
    return report;
  }

  // l(h^-1 g h) = l(g).  Conjugation by generators suffices; all_elements
  // switches to conjugating by every element (small groups only).
  template <EnumeratedGroup G>
  ValidationReport validate_invariance(BasicNormTable<G> const& t,
                                       bool                     all_elements = false) {
    using I       = typename G::index_type;
    auto const& g = t.group();
    ValidationReport report;
    std::vector<I> conjugators;
    if (all_elements) {
      for (std::size_t x = 0; x < g.size(); ++x) {
        conjugators.push_back(static_cast<I>(x));
      }
    } else {
      for (auto s : g.generators()) {
        conjugators.push_back(s);
      }
    }
    for (auto h : conjugators) {
      auto hi = g.inv(h);
      for (std::size_t x = 0; x < t.size(); ++x) {
        auto xi = static_cast<I>(x);
        auto c  = g.mul(g.mul(hi, xi), h);
        if (t[c] != t[xi]) {
          report.add({"INV", {x, h, c}, {t[xi], t[c]}});
        }
      }
    }
    return report;
  }

}  // namespace mlef
