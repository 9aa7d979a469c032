#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "group_concept.hpp"
#include "norm_table.hpp"
#include "rational.hpp"

namespace mlef {

  // f : G x Q -> {<, =, >} on a finite threshold set Q (sorted, distinct,
  // nonnegative).  Rows are indexed by group element.
  template <EnumeratedGroup G>
  class BasicWeightFn {
   public:
    using index_type = typename G::index_type;

    BasicWeightFn(std::shared_ptr<G const> group, std::vector<Rational> thresholds,
                  std::vector<Sign> table)
        : group_(std::move(group)), Q_(std::move(thresholds)), table_(std::move(table)) {
      if (!group_) {
        throw InvalidArgument("weight function without a group");
      }
      for (std::size_t i = 0; i < Q_.size(); ++i) {
        if (Q_[i] < 0) {
          throw InvalidArgument("negative threshold " + to_string(Q_[i]));
        }
        if (i > 0 && !(Q_[i - 1] < Q_[i])) {
          throw InvalidArgument("thresholds must be strictly increasing");
        }
      }
      if (table_.size() != group_->size() * Q_.size()) {
        throw InvalidArgument("weight table has " + std::to_string(table_.size())
                              + " entries, expected " + std::to_string(group_->size())
                              + " x " + std::to_string(Q_.size()));
      }
    }

    G const& group() const noexcept {
      return *group_;
    }

    std::shared_ptr<G const> const& group_ptr() const noexcept {
      return group_;
    }

    std::vector<Rational> const& thresholds() const noexcept {
      return Q_;
    }

    Sign at(index_type g, std::size_t qi) const {
      return table_[static_cast<std::size_t>(g) * Q_.size() + qi];
    }

    void set(index_type g, std::size_t qi, Sign s) {
      table_[static_cast<std::size_t>(g) * Q_.size() + qi] = s;
    }

    std::optional<std::size_t> threshold_index(Rational const& q) const {
      auto it = std::lower_bound(Q_.begin(), Q_.end(), q);
      if (it == Q_.end() || *it != q) {
        return std::nullopt;
      }
      return static_cast<std::size_t>(it - Q_.begin());
    }

   private:
    std::shared_ptr<G const> group_;
    std::vector<Rational>    Q_;
    std::vector<Sign>        table_;
  };

  using WeightFn = BasicWeightFn<FiniteGroup>;

  inline bool at_most(Sign s) {
    return s != Sign::greater;
  }

  // f_l(g, q) = the comparison of l(g) with q.  Q must contain 0.
  template <EnumeratedGroup G>
  BasicWeightFn<G> from_norm(BasicNormTable<G> const& t, std::vector<Rational> Q) {
    std::sort(Q.begin(), Q.end());
    Q.erase(std::unique(Q.begin(), Q.end()), Q.end());
    if (Q.empty() || Q.front() != 0) {
      throw InvalidArgument("threshold set must contain 0 and no negative values");
    }
    std::vector<Sign> table;
    table.reserve(t.size() * Q.size());
    for (std::size_t g = 0; g < t.size(); ++g) {
      for (auto const& q : Q) {
        table.push_back(compare(t[static_cast<typename G::index_type>(g)], q));
      }
    }
    return BasicWeightFn<G>(t.group_ptr(), std::move(Q), std::move(table));
  }

  // w_f(g): the least threshold q with f(g, q) in {<, =}; nullopt stands for
  // "above all thresholds".  Values strictly between thresholds come back
  // as the next threshold up.
  template <EnumeratedGroup G>
  std::vector<std::optional<Rational>> w_of(BasicWeightFn<G> const& f) {
    std::vector<std::optional<Rational>> out(f.group().size());
    for (std::size_t g = 0; g < out.size(); ++g) {
      for (std::size_t qi = 0; qi < f.thresholds().size(); ++qi) {
        if (at_most(f.at(static_cast<typename G::index_type>(g), qi))) {
          out[g] = f.thresholds()[qi];
          break;
        }
      }
    }
    return out;
  }

  enum class Theory { T_W, T_IPMG, T_IMG };

  inline std::string to_string(Theory t) {
    switch (t) {
      case Theory::T_W: return "T_W";
      case Theory::T_IPMG: return "T_IPMG";
      case Theory::T_IMG: return "T_IMG";
    }
    return "?";
  }

  inline Theory theory_from_string(std::string const& s) {
    if (s == "T_W") {
      return Theory::T_W;
    }
    if (s == "T_IPMG") {
      return Theory::T_IPMG;
    }
    if (s == "T_IMG") {
      return Theory::T_IMG;
    }
    throw InvalidArgument("unknown theory '" + s + "' (expected T_W, T_IPMG or T_IMG)");
  }

  // Axiom names:
  //   W1   q <= q', f(g,q) in {<,=}  =>  f(g,q') in {<,=}
  //   W2   q <= q', f(g,q') in {>,=} =>  f(g,q) in {>,=}
  //   W3   f(1,0) is '=' and f(g,0) in {=,>}
  //   W4   f(g,q) = f(g^-1,q)
  //   TRI  f(x,q), f(x',q') in {<,=}  =>  f(xx', q+q') in {<,=}, for q+q' in Q
  //   INV  f(x,q) = f(y^-1 x y, q)
  //   NORM f(x,0) in {<,=}  =>  x = 1
  struct AxiomViolation {
    std::string                axiom;
    std::vector<std::uint64_t> elements;
    std::vector<Rational>      thresholds;
  };

  struct AxiomReport {
    Theory                                theory = Theory::T_W;
    bool                                  ok     = true;
    std::vector<AxiomViolation>           violations;  // first few per axiom
    std::map<std::string, std::uint64_t>  violation_counts;
    std::map<std::string, std::uint64_t>  instances;  // evaluated schema instances
    std::uint64_t                         vacuous_triangle = 0;  // q + q' outside Q
    std::vector<std::string>              notices;

    static constexpr std::size_t witnesses_per_axiom = 16;

    void add(AxiomViolation v) {
      ok          = false;
      auto& count = violation_counts[v.axiom];
      if (count++ < witnesses_per_axiom) {
        violations.push_back(std::move(v));
      }
    }
  };

  namespace detail {

    template <EnumeratedGroup G>
    void check_weight_conditions(BasicWeightFn<G> const& f, AxiomReport& rep) {
      using I       = typename G::index_type;
      auto const& g = f.group();
      auto const& Q = f.thresholds();
      auto const  m = Q.size();
      for (std::size_t x = 0; x < g.size(); ++x) {
        auto xi = static_cast<I>(x);
        for (std::size_t a = 0; a < m; ++a) {
          for (std::size_t b = a; b < m; ++b) {
            rep.instances["W1"] += 1;
            rep.instances["W2"] += 1;
            if (at_most(f.at(xi, a)) && !at_most(f.at(xi, b))) {
              rep.add({"W1", {x}, {Q[a], Q[b]}});
            }
            if (f.at(xi, b) != Sign::less && f.at(xi, a) == Sign::less) {
              rep.add({"W2", {x}, {Q[a], Q[b]}});
            }
          }
        }
      }
      if (auto z = f.threshold_index(Rational(0))) {
        for (std::size_t x = 0; x < g.size(); ++x) {
          auto xi = static_cast<I>(x);
          auto s  = f.at(xi, *z);
          rep.instances["W3"] += 1;
          if ((xi == g.identity() && s != Sign::equal) || s == Sign::less) {
            rep.add({"W3", {x}, {Rational(0)}});
          }
        }
      } else {
        rep.notices.push_back("0 is not a threshold: W3 and NORM are not evaluable");
      }
      for (std::size_t x = 0; x < g.size(); ++x) {
        auto xi  = static_cast<I>(x);
        auto inv = g.inv(xi);
        for (std::size_t a = 0; a < m; ++a) {
          rep.instances["W4"] += 1;
          if (f.at(xi, a) != f.at(inv, a)) {
            rep.add({"W4", {x, static_cast<std::uint64_t>(inv)}, {Q[a]}});
          }
        }
      }
    }

    template <EnumeratedGroup G>
    void check_triangle(BasicWeightFn<G> const& f, AxiomReport& rep) {
      using I       = typename G::index_type;
      auto const& g = f.group();
      auto const& Q = f.thresholds();
      auto const  m = Q.size();
      // sum_index[a][b]: index of Q[a] + Q[b] in Q, if present
      std::vector<std::vector<std::optional<std::size_t>>> sum_index(
          m, std::vector<std::optional<std::size_t>>(m));
      std::uint64_t in_Q = 0;
      for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
          sum_index[a][b] = f.threshold_index(Q[a] + Q[b]);
          in_Q += sum_index[a][b].has_value();
        }
      }
      auto const n2 = static_cast<std::uint64_t>(g.size()) * g.size();
      rep.instances["TRI"] += n2 * in_Q;
      rep.vacuous_triangle += n2 * (m * m - in_Q);
      std::vector<std::vector<std::size_t>> le(g.size());
      for (std::size_t x = 0; x < g.size(); ++x) {
        for (std::size_t a = 0; a < m; ++a) {
          if (at_most(f.at(static_cast<I>(x), a))) {
            le[x].push_back(a);
          }
        }
      }
      for (std::size_t x = 0; x < g.size(); ++x) {
        if (le[x].empty()) {
          continue;
        }
        for (std::size_t y = 0; y < g.size(); ++y) {
          if (le[y].empty()) {
            continue;
          }
          auto xy = g.mul(static_cast<I>(x), static_cast<I>(y));
          for (auto a : le[x]) {
            for (auto b : le[y]) {
              auto s = sum_index[a][b];
              if (s && !at_most(f.at(xy, *s))) {
                rep.add({"TRI", {x, y, static_cast<std::uint64_t>(xy)}, {Q[a], Q[b]}});
              }
            }
          }
        }
      }
    }

    template <EnumeratedGroup G>
    void check_invariance(BasicWeightFn<G> const& f, bool all_conjugators, AxiomReport& rep) {
      using I       = typename G::index_type;
      auto const& g = f.group();
      auto const  m = f.thresholds().size();
      std::vector<I> ys;
      if (all_conjugators) {
        for (std::size_t y = 0; y < g.size(); ++y) {
          ys.push_back(static_cast<I>(y));
        }
      } else {
        for (auto s : g.generators()) {
          ys.push_back(s);
        }
        rep.notices.push_back("INV evaluated for conjugation by generators");
      }
      for (auto y : ys) {
        auto yi = g.inv(y);
        for (std::size_t x = 0; x < g.size(); ++x) {
          auto xi = static_cast<I>(x);
          auto c  = g.mul(g.mul(yi, xi), y);
          for (std::size_t a = 0; a < m; ++a) {
            rep.instances["INV"] += 1;
            if (f.at(xi, a) != f.at(c, a)) {
              rep.add({"INV", {x, static_cast<std::uint64_t>(y), static_cast<std::uint64_t>(c)},
                       {f.thresholds()[a]}});
            }
          }
        }
      }
    }

    template <EnumeratedGroup G>
    void check_norm_axiom(BasicWeightFn<G> const& f, AxiomReport& rep) {
      using I       = typename G::index_type;
      auto const& g = f.group();
      auto        z = f.threshold_index(Rational(0));
      if (!z) {
        return;
      }
      for (std::size_t x = 0; x < g.size(); ++x) {
        auto xi = static_cast<I>(x);
        rep.instances["NORM"] += 1;
        if (xi != g.identity() && at_most(f.at(xi, *z))) {
          rep.add({"NORM", {x}, {Rational(0)}});
        }
      }
    }

  }  // namespace detail

  // Exhaustive evaluation of every schema instance of the theory expressible
  // over the thresholds of f.  Triangle instances with q + q' outside Q are
  // counted as vacuous.  INV conjugates by every element unless
  // all_conjugators is false (then by generators, which is equivalent).
  template <EnumeratedGroup G>
  AxiomReport check_axioms(BasicWeightFn<G> const& f, Theory theory,
                           bool all_conjugators = true) {
    AxiomReport rep;
    rep.theory = theory;
    detail::check_weight_conditions(f, rep);
    if (theory != Theory::T_W) {
      detail::check_triangle(f, rep);
      detail::check_invariance(f, all_conjugators, rep);
    }
    if (theory == Theory::T_IMG) {
      detail::check_norm_axiom(f, rep);
    }
    return rep;
  }

  // Re-evaluates one reported violation; true iff it is a genuine failure.
  template <EnumeratedGroup G>
  bool reverify(BasicWeightFn<G> const& f, AxiomViolation const& v) {
    using I       = typename G::index_type;
    auto const& g = f.group();
    auto        q = [&](std::size_t i) { return f.threshold_index(v.thresholds.at(i)); };
    auto        e = [&](std::size_t i) { return static_cast<I>(v.elements.at(i)); };
    if (v.axiom == "W1" || v.axiom == "W2") {
      auto a = q(0), b = q(1);
      if (!a || !b || !(v.thresholds[0] <= v.thresholds[1])) {
        return false;
      }
      return v.axiom == "W1" ? at_most(f.at(e(0), *a)) && !at_most(f.at(e(0), *b))
                             : f.at(e(0), *b) != Sign::less && f.at(e(0), *a) == Sign::less;
    }
    if (v.axiom == "W3") {
      auto s = f.at(e(0), *q(0));
      return (e(0) == g.identity() && s != Sign::equal) || s == Sign::less;
    }
    if (v.axiom == "W4") {
      return e(1) == g.inv(e(0)) && f.at(e(0), *q(0)) != f.at(e(1), *q(0));
    }
    if (v.axiom == "TRI") {
      auto s = f.threshold_index(v.thresholds.at(0) + v.thresholds.at(1));
      return s && e(2) == g.mul(e(0), e(1)) && at_most(f.at(e(0), *q(0)))
             && at_most(f.at(e(1), *q(1))) && !at_most(f.at(e(2), *s));
    }
    if (v.axiom == "INV") {
      return e(2) == g.mul(g.mul(g.inv(e(1)), e(0)), e(1))
             && f.at(e(0), *q(0)) != f.at(e(2), *q(0));
    }
    if (v.axiom == "NORM") {
      return e(0) != g.identity() && at_most(f.at(e(0), *q(0)));
    }
    return false;
  }

}  // namespace mlef
