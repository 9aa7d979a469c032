#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "commutators.hpp"
#include "errors.hpp"
#include "lamplighter.hpp"
#include "rational.hpp"

namespace mlef {

  // Truncations with 2n+1 >= 7 run the closed form as theory; smaller ones
  // treat it as advisory (exhaustive search is authoritative there).
  enum class FormulaMode { theory, advisory };

  inline std::string to_string(FormulaMode m) {
    return m == FormulaMode::theory ? "theory" : "advisory";
  }

  inline FormulaMode formula_mode(Mode mode) {
    if (!mode.is_truncated()) {
      return FormulaMode::theory;
    }
    return mode.window() >= 7 ? FormulaMode::theory : FormulaMode::advisory;
  }

  namespace detail {

    inline std::int64_t iabs(std::int64_t x) {
      return x < 0 ? -x : x;
    }

    // Prefix-product DP over the window: a with a and a^-1 h both in U,
    // where U holds the vectors whose product in scan order is 1 (increasing
    // for T+, decreasing for T-).  Returns a, or nullopt.
    inline std::optional<LampElem> split_into_two_telescopes(LampElem const& h,
                                                             bool increasing) {
      auto const& P    = h.P();
      auto const  m    = static_cast<std::uint32_t>(P.size());
      auto const  mode = h.mode();
      auto const  n    = *mode.n;
      auto const  W    = static_cast<std::size_t>(mode.window());
      std::vector<std::int64_t> order;
      for (std::int64_t j = -n; j <= n; ++j) {
        order.push_back(j);
      }
      if (!increasing) {
        std::reverse(order.begin(), order.end());
      }
      // state p * m + q: prefix products of a and of a^-1 h
      auto const states = static_cast<std::size_t>(m) * m;
      constexpr std::uint32_t none = 0xffffffffu;
      std::vector<std::vector<std::uint32_t>> from(W, std::vector<std::uint32_t>(states, none));
      std::vector<std::vector<Index>>         pick(W, std::vector<Index>(states, 0));
      std::vector<std::uint32_t> cur{P.identity() * m + P.identity()};
      for (std::size_t s = 0; s < W; ++s) {
        auto const hj = h.at(order[s]);
        std::vector<std::uint32_t> next;
        for (auto st : cur) {
          Index p = st / m, q = st % m;
          for (Index x = 0; x < m; ++x) {
            auto ns = P.mul(p, x) * m + P.mul(q, P.mul(P.inv(x), hj));
            if (from[s][ns] == none) {
              from[s][ns] = st;
              pick[s][ns] = x;
              next.push_back(ns);
            }
          }
        }
        cur = std::move(next);
      }
      auto goal = P.identity() * m + P.identity();
      if (from[W - 1][goal] == none) {
        return std::nullopt;
      }
      std::vector<LampElem::Entry> a;
      auto st = goal;
      for (std::size_t s = W; s-- > 0;) {
        if (pick[s][st] != P.identity()) {
          a.emplace_back(order[s], pick[s][st]);
        }
        st = from[s][st];
      }
      std::sort(a.begin(), a.end());
      return LampElem(h.base_ptr(), mode, std::move(a), 0);
    }

    // hbar t^sign = abar t^sign * (single), abar telescoping: the single
    // sits just outside the support on the side the shift moves it to.
    inline std::pair<LampElem, LampElem> near_telescope_split(LampElem const& g) {
      auto const& P    = g.P();
      auto const  base = g.base_ptr();
      auto const  mode = g.mode();
      auto const  hb   = g.vector_part();
      auto        sup  = hb.support();
      if (g.shift() == 1) {
        // change the top entry so the increasing product is 1
        auto p          = ordered_product(hb, true);
        auto hi         = sup.back().first;
        sup.back().second = P.mul(sup.back().second, P.inv(p));
        if (sup.back().second == P.identity()) {
          sup.pop_back();
        }
        LampElem abar(base, mode, std::move(sup), 1);
        return {abar, alpha_pow(LampElem::single(base, mode, hi, p), -1)};
      }
      // change the bottom entry so the decreasing product is 1
      auto lo   = sup.front().first;
      auto h_lo = sup.front().second;
      Index rest = P.identity();
      for (auto it = sup.rbegin(); std::next(it) != sup.rend(); ++it) {
        rest = P.mul(rest, it->second);
      }
      auto b_lo = P.inv(rest);
      sup.front().second = b_lo;
      if (b_lo == P.identity()) {
        sup.erase(sup.begin());
      }
      LampElem bbar(base, mode, std::move(sup), -1);
      auto     star = LampElem::single(base, mode, lo, P.mul(P.inv(b_lo), h_lo));
      return {bbar, alpha_pow(star, 1)};
    }

    // The case table shared by G_Z and the truncations.  `two_split` decides
    // |k| >= 2 (always true in G_Z under S1, S2).
    template <class TwoSplit>
    std::int64_t norm_cases(LampElem const& g, TwoSplit const& two_split) {
      auto const k = g.shift();
      auto const w = g.weight();
      if (k == 0) {
        if (w <= 2) {
          return static_cast<std::int64_t>(w);
        }
        return is_pm_commutator(g, XiVariant::direct) ? 2 : 3;
      }
      if (k == 1 || k == -1) {
        return in_Tplus(g) || in_Tminus(g) ? 1 : 2;
      }
      return two_split(g) ? iabs(k) : iabs(k) + 1;
    }

  }  // namespace detail

  // Closed-form invariant word norm on G_Z with respect to S-bar.  The base
  // must satisfy S1-S4.
  inline std::int64_t norm_gz(LampElem const& g) {
    if (g.mode().is_truncated()) {
      throw InvalidArgument("norm_gz needs an infinite-mode element; use norm_truncated");
    }
    g.base().require({Statement::S1, Statement::S2, Statement::S3, Statement::S4});
    return detail::norm_cases(g, [](LampElem const&) { return true; });
  }

  // The same case table read cyclically on G_[-n,n].  |k| >= 2 is decided by
  // an exact split of the vector into two telescoping vectors; when no split
  // exists the value is |k| + 1 in advisory mode and an error in theory mode.
  inline std::int64_t norm_truncated(LampElem const& g) {
    if (!g.mode().is_truncated()) {
      throw InvalidArgument("norm_truncated needs a truncated-mode element");
    }
    auto const fm = formula_mode(g.mode());
    if (fm == FormulaMode::theory) {
      g.base().require({Statement::S1, Statement::S2, Statement::S3, Statement::S4});
    }
    return detail::norm_cases(g, [&](LampElem const& x) {
      bool ok = detail::split_into_two_telescopes(x.vector_part(), x.shift() > 0).has_value();
      if (!ok && fm == FormulaMode::theory) {
        throw NoSolution("no split into two telescoping vectors: " + x.to_string());
      }
      return ok;
    });
  }

  inline std::int64_t norm_formula(LampElem const& g) {
    return g.mode().is_truncated() ? norm_truncated(g) : norm_gz(g);
  }

  struct Geodesic {
    std::vector<LampElem> factors;

    std::size_t length() const noexcept {
      return factors.size();
    }
  };

  namespace detail {

    inline LampElem t_pow(LampElem const& like, std::int64_t k) {
      return LampElem::t(like.base_ptr(), like.mode(), k);
    }

    // s1 s2 = F+(g1) t * alpha^-1(F+(g2)) t = F+(g1) F+(g2) t^2, or the
    // mirrored T- version; then t^{+-1} repeated.
    inline Geodesic shifted_geodesic(LampElem const& a, LampElem const& b, std::int64_t k) {
      auto const sign = k > 0 ? 1 : -1;
      auto const ts   = t_pow(a, sign);
      Geodesic   geo;
      geo.factors.push_back(mul(a, ts));
      geo.factors.push_back(mul(alpha_pow(b, -sign), ts));
      for (std::int64_t i = 2; i < iabs(k); ++i) {
        geo.factors.push_back(ts);
      }
      return geo;
    }

    // Cyclic minus_plus witness on G_[-n,n] from conjugators x with
    // prod x_j^-1 h_j x_j = 1 over the support in increasing order.
    inline std::pair<LampElem, LampElem> cyclic_pm_vectors(LampElem const& h,
                                                          std::vector<Index> const& xs) {
      auto const& P    = h.P();
      auto const  mode = h.mode();
      auto const  n    = *mode.n;
      auto const  W    = static_cast<std::size_t>(mode.window());
      // h_j = a_{j+1} a_j^-1 b_j b_{j+1}^-1; with c_j = a_j^-1 b_j this is
      // a_{j+1}^-1 h_j a_{j+1} = c_j c_{j+1}^-1
      std::vector<Index> a(W, P.identity()), c(W + 1, P.identity());
      auto pos = [&](std::int64_t j) { return static_cast<std::size_t>(mode.reduce(j) + n); };
      std::size_t s = 0;
      for (auto const& e : h.support()) {
        a[pos(e.first + 1)] = xs[s++];
      }
      for (std::int64_t j = -n; j <= n; ++j) {
        auto i    = pos(j);
        auto conj = P.conj(h.at(j), a[pos(j + 1)]);
        c[i + 1]  = P.mul(P.inv(conj), c[i]);
      }
      if (c[W] != P.identity()) {
        throw NoSolution("cyclic_pm_vectors: conjugators do not multiply to 1");
      }
      std::vector<Index> b(W);
      for (std::size_t i = 0; i < W; ++i) {
        b[i] = P.mul(a[i], c[i]);
      }
      return {from_dense(h.base_ptr(), mode, -n, a), from_dense(h.base_ptr(), mode, -n, b)};
    }

    inline Geodesic pm_geodesic(LampElem const& h) {
      auto const one = LampElem::identity(h.base_ptr(), h.mode());
      auto const t   = t_pow(h, 1);
      auto const ti  = t_pow(h, -1);
      if (h.mode().is_truncated()) {
        auto xs = pm_conjugators(h.base(), support_values(h));
        if (!xs) {
          throw NoSolution("not a [+-,t]-commutator: " + h.to_string());
        }
        auto [a, b] = cyclic_pm_vectors(h, *xs);
        return Geodesic{{mul(minus_factor(a), ti), mul(alpha(plus_factor(b)), t)}};
      }
      auto w = build_pm_commutator(h, XiVariant::direct);
      auto const& g1 = w.vectors[0];
      auto const& g2 = w.vectors[1];
      if (w.order == PmOrder::minus_plus) {
        return Geodesic{{mul(minus_factor(g1), ti), mul(alpha(plus_factor(g2)), t)}};
      }
      return Geodesic{{mul(plus_factor(g1), t), mul(alpha_pow(minus_factor(g2), -1), ti)}};
    }

  }  // namespace detail

  // A shortest S-bar word for g, built from the constructive proofs.  In
  // G_Z every factor is supported within [i_min(g) - 2, i_max(g) + 2].
  inline Geodesic geodesic(LampElem const& g) {
    auto const base  = g.base_ptr();
    auto const mode  = g.mode();
    auto const k     = g.shift();
    auto const w     = g.weight();
    auto const claim = norm_formula(g);
    auto const hb    = g.vector_part();
    Geodesic   geo;
    if (k == 0) {
      if (w <= 2 || claim == 3) {
        for (auto const& e : g.support()) {
          geo.factors.push_back(LampElem::single(base, mode, e.first, e.second));
        }
      } else {
        geo = detail::pm_geodesic(hb);
      }
    } else if (k == 1 || k == -1) {
      if (claim == 1) {
        geo.factors.push_back(g);
      } else {
        auto [s1, s2] = detail::near_telescope_split(g);
        geo.factors   = {s1, s2};
      }
    } else if (!mode.is_truncated()) {
      auto wit = build_2_commutator(hb, k > 0 ? 1 : -1);
      auto f   = k > 0 ? plus_factor : minus_factor;
      geo = detail::shifted_geodesic(f(wit.vectors[0]), f(wit.vectors[1]), k);
    } else {
      auto a = detail::split_into_two_telescopes(hb, k > 0);
      if (!a) {
        throw NoSolution("no geodesic construction for " + g.to_string());
      }
      geo = detail::shifted_geodesic(*a, mul(inverse(*a), hb), k);
    }
    if (static_cast<std::int64_t>(geo.length()) != claim) {
      throw NoSolution("no geodesic construction of length " + std::to_string(claim) + " for "
                       + g.to_string());
    }
    return geo;
  }

  // Checks every Geodesic invariant against g and a claimed norm; the
  // support bound applies in G_Z only.
  inline std::vector<std::string> geodesic_violations(LampElem const& g, Geodesic const& geo,
                                                      std::int64_t claimed) {
    std::vector<std::string> out;
    auto const sg = stats(g);
    for (std::size_t i = 0; i < geo.factors.size(); ++i) {
      auto const& s = geo.factors[i];
      if (!in_Sbar(s)) {
        out.push_back("factor " + std::to_string(i) + " not in S-bar: " + s.to_string());
      }
      auto const ss = stats(s);
      if (!g.mode().is_truncated() && ss.i_min
          && (!sg.i_min || *ss.i_min < *sg.i_min - 2 || *ss.i_max > *sg.i_max + 2)) {
        out.push_back("factor " + std::to_string(i) + " outside the support bound: "
                      + s.to_string());
      }
    }
    if (product(geo.factors, LampElem::identity(g.base_ptr(), g.mode())) != g) {
      out.push_back("product of factors differs from " + g.to_string());
    }
    if (static_cast<std::int64_t>(geo.length()) != claimed) {
      out.push_back("length " + std::to_string(geo.length()) + " differs from claimed norm "
                    + std::to_string(claimed));
    }
    return out;
  }

  // Re-reads g in G_[-n,n] when N(g) <= cutoff, else the identity.
  inline LampElem window_map(LampElem const& g, std::int64_t n, std::int64_t cutoff) {
    if (g.mode().is_truncated()) {
      throw InvalidArgument("window_map needs an infinite-mode element");
    }
    auto mode = Mode::truncated(n);
    if (stats(g).N_value > cutoff) {
      return LampElem::identity(g.base_ptr(), mode);
    }
    return LampElem(g.base_ptr(), mode, g.support(), g.shift());
  }

  // The approximating map into G_[-2N-3, 2N+3].
  inline LampElem phi(LampElem const& g, std::int64_t N) {
    if (N < 0) {
      throw InvalidArgument("phi: N must be nonnegative");
    }
    return window_map(g, 2 * N + 3, 2 * N + 2);
  }

  inline std::int64_t max_N_value(std::vector<LampElem> const& K) {
    std::int64_t N = 0;
    for (auto const& g : K) {
      N = std::max(N, stats(g).N_value);
    }
    return N;
  }

  struct NormAgreement {
    std::size_t element = 0;  // index into K
    Rational    q;
    Sign        source = Sign::equal;
    Sign        target = Sign::equal;

    bool agrees() const noexcept {
      return source == target;
    }
  };

  struct AlmostHomReport {
    bool                       injective_on_K            = true;
    bool                       multiplicative_triples_ok = true;
    std::size_t                triples_checked           = 0;
    std::vector<NormAgreement> norm_agreements;
    std::vector<std::string>   failures;

    bool norms_ok() const {
      return std::all_of(norm_agreements.begin(), norm_agreements.end(),
                         [](NormAgreement const& a) { return a.agrees(); });
    }

    bool ok() const {
      return injective_on_K && multiplicative_triples_ok && norms_ok();
    }
  };

  // Checks that `map` is a K-Q-almost-homomorphism from (source, l_src) to
  // (target, l_tgt).  Elements need mul(), == and to_string().
  template <class Src, class Map, class LSrc, class LTgt>
  AlmostHomReport verify_KQ_almost_hom(Map const& map, std::vector<Src> K,
                                       std::vector<Rational> const& Q, LSrc const& l_src,
                                       LTgt const& l_tgt) {
    if (std::find(Q.begin(), Q.end(), Rational(0)) == Q.end()) {
      throw InvalidArgument("verify_KQ_almost_hom: Q must contain 0");
    }
    std::vector<Src> uniq;
    for (auto& g : K) {
      if (std::find(uniq.begin(), uniq.end(), g) == uniq.end()) {
        uniq.push_back(std::move(g));
      }
    }
    K = std::move(uniq);
    using Tgt = decltype(map(K.front()));
    std::vector<Tgt> img;
    img.reserve(K.size());
    for (auto const& g : K) {
      img.push_back(map(g));
    }

    AlmostHomReport rep;
    for (std::size_t i = 0; i < K.size(); ++i) {
      for (std::size_t j = i + 1; j < K.size(); ++j) {
        if (img[i] == img[j]) {
          rep.injective_on_K = false;
          rep.failures.push_back("not injective: " + K[i].to_string() + " and "
                                 + K[j].to_string() + " both map to " + img[i].to_string());
        }
      }
    }
    for (std::size_t i = 0; i < K.size(); ++i) {
      for (std::size_t j = 0; j < K.size(); ++j) {
        auto hg = mul(K[i], K[j]);
        auto it = std::find(K.begin(), K.end(), hg);
        if (it == K.end()) {
          continue;
        }
        ++rep.triples_checked;
        auto const& want = img[static_cast<std::size_t>(it - K.begin())];
        if (mul(img[i], img[j]) != want) {
          rep.multiplicative_triples_ok = false;
          rep.failures.push_back("not multiplicative on h = " + K[i].to_string()
                                 + ", g = " + K[j].to_string());
        }
      }
    }
    for (std::size_t i = 0; i < K.size(); ++i) {
      Rational ls(l_src(K[i]));
      Rational lt(l_tgt(img[i]));
      for (auto const& q : Q) {
        NormAgreement a{i, q, compare(ls, q), compare(lt, q)};
        if (!a.agrees()) {
          rep.failures.push_back("norm comparison with " + to_string(q) + " differs on "
                                 + K[i].to_string() + ": source " + to_string(ls)
                                 + ", target " + to_string(lt));
        }
        rep.norm_agreements.push_back(a);
      }
    }
    return rep;
  }

}  // namespace mlef
