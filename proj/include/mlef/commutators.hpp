#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "brute_force.hpp"
#include "errors.hpp"
#include "lamplighter.hpp"
#include "simple_props.hpp"

namespace mlef {

  // [k,t]-commutators (k != 0) and [+-,t]-commutators (k == 0) of H.
  //   k > 0:  g1 alpha(g1^-1) ... gk alpha(gk^-1)
  //   k < 0:  alpha(g1) g1^-1 ... alpha(g|k|) g|k|^-1
  //   k == 0: g1 alpha(g1^-1) alpha(g2) g2^-1   (plus_minus)
  //           alpha(g1) g1^-1 g2 alpha(g2^-1)   (minus_plus)

  enum class PmOrder { plus_minus, minus_plus };

  inline std::string to_string(PmOrder o) {
    return o == PmOrder::plus_minus ? "+-" : "-+";
  }

  struct CommWitness {
    std::int64_t          k     = 0;
    PmOrder               order = PmOrder::plus_minus;
    std::vector<LampElem> vectors;

    bool is_pm() const noexcept {
      return k == 0;
    }

    // number of vectors the kind requires
    std::size_t arity() const noexcept {
      return k == 0 ? 2 : static_cast<std::size_t>(k < 0 ? -k : k);
    }
  };

  // The product the witness defines; nullopt when the witness is malformed.
  inline std::optional<LampElem> evaluate(CommWitness const& w) {
    if (w.vectors.size() != w.arity() || w.vectors.empty()) {
      return std::nullopt;
    }
    for (auto const& g : w.vectors) {
      if (g.shift() != 0) {
        return std::nullopt;
      }
    }
    auto const& g0 = w.vectors.front();
    auto        r  = LampElem::identity(g0.base_ptr(), g0.mode());
    try {
      for (std::size_t i = 0; i < w.vectors.size(); ++i) {
        bool plus = w.k > 0 || (w.k == 0 && (w.order == PmOrder::plus_minus) == (i == 0));
        auto const& g = w.vectors[i];
        r = mul(r, plus ? plus_factor(g) : minus_factor(g));
      }
    } catch (InvalidArgument const&) {
      return std::nullopt;
    }
    return r;
  }

  inline bool verify_witness(LampElem const& h, CommWitness const& w) {
    if (h.shift() != 0) {
      return false;
    }
    auto r = evaluate(w);
    return r && r->mode() == h.mode() && r->base().same_as(h.base()) && *r == h;
  }

  // The monotonicity closure: a [k,t] witness (k != 0) becomes a [k+-1,t]
  // witness by appending a trivial vector.
  inline CommWitness extend(CommWitness w) {
    if (w.is_pm()) {
      throw InvalidArgument("extend: [+-,t] witnesses have fixed arity");
    }
    auto const& g0 = w.vectors.front();
    w.vectors.push_back(LampElem::identity(g0.base_ptr(), g0.mode()));
    w.k += w.k > 0 ? 1 : -1;
    return w;
  }

  // A [1,t] (resp. [-1,t]) witness read as a [+-,t] witness.
  inline CommWitness promote_to_pm(CommWitness const& w) {
    if (w.k != 1 && w.k != -1) {
      throw InvalidArgument("promote_to_pm: expected a [+-1,t] witness");
    }
    auto const& g0 = w.vectors.front();
    auto        one = LampElem::identity(g0.base_ptr(), g0.mode());
    CommWitness out{0, w.k == 1 ? PmOrder::plus_minus : PmOrder::minus_plus, {g0, one}};
    return out;
  }

  namespace detail {

    inline void require_vector(LampElem const& h, char const* who) {
      if (h.shift() != 0) {
        throw InvalidArgument(std::string(who) + ": element must have shift 0");
      }
    }

    inline void require_infinite(LampElem const& h, char const* who) {
      if (h.mode().is_truncated()) {
        throw InvalidArgument(std::string(who) + ": builders work in G_Z only");
      }
    }

    // Values of h as a dense array over [lo, hi].
    inline std::vector<Index> dense(LampElem const& h, std::int64_t lo, std::int64_t hi) {
      std::vector<Index> out;
      for (auto i = lo; i <= hi; ++i) {
        out.push_back(h.at(i));
      }
      return out;
    }

    inline LampElem from_dense(BasePtr const& base, Mode mode, std::int64_t lo,
                               std::vector<Index> const& values) {
      std::vector<LampElem::Entry> s;
      for (std::size_t j = 0; j < values.size(); ++j) {
        s.emplace_back(lo + static_cast<std::int64_t>(j), values[j]);
      }
      return LampElem(base, mode, std::move(s), 0);
    }

    // Mirror i -> -i, an automorphism of H with rho alpha = alpha^-1 rho.
    inline LampElem mirror(LampElem const& h) {
      std::vector<LampElem::Entry> s;
      for (auto const& [i, g] : h.support()) {
        s.emplace_back(-i, g);
      }
      return LampElem(h.base_ptr(), h.mode(), std::move(s), 0);
    }

  }  // namespace detail

  inline bool is_pm1_commutator(LampElem const& h, int sign) {
    detail::require_vector(h, "is_pm1_commutator");
    if (sign != 1 && sign != -1) {
      throw InvalidArgument("sign must be +1 or -1");
    }
    return ordered_product(h, sign == 1) == h.P().identity();
  }

  struct Pm1Decomposition {
    CommWitness  witness;   // k = sign, one vector
    LampElem     residual;  // supported at `index` (or trivial)
    std::int64_t index = 0;

    bool trivial_residual() const {
      return residual.is_identity();
    }
  };

  // h = (a [sign,t]-commutator) * residual, residual supported at i_max(h).
  inline Pm1Decomposition build_pm1_decomposition(LampElem const& h, int sign) {
    detail::require_vector(h, "build_pm1_decomposition");
    detail::require_infinite(h, "build_pm1_decomposition");
    if (sign != 1 && sign != -1) {
      throw InvalidArgument("sign must be +1 or -1");
    }
    auto const& P    = h.P();
    auto const  base = h.base_ptr();
    auto const  mode = h.mode();
    if (h.is_identity()) {
      return {CommWitness{sign, PmOrder::plus_minus, {h}}, h, 0};
    }
    auto const lo = h.support().front().first;
    auto const hi = h.support().back().first;
    // g at lo + 1 .. hi
    std::vector<Index> g;
    Index              cur = P.identity();
    for (auto j = lo; j < hi; ++j) {
      cur = sign == 1 ? P.mul(P.inv(h.at(j)), cur) : P.mul(h.at(j), cur);
      g.push_back(cur);
    }
    Index last = g.empty() ? P.identity() : g.back();
    Index res  = sign == 1 ? P.mul(P.inv(last), h.at(hi)) : P.mul(last, h.at(hi));
    auto  gv   = detail::from_dense(base, mode, lo + 1, g);
    return {CommWitness{sign, PmOrder::plus_minus, {gv}}, LampElem::single(base, mode, hi, res),
            hi};
  }

  // A [2,t] (sign +1) or [-2,t] (sign -1) witness; needs S1 and S2 in P.
  inline CommWitness build_2_commutator(LampElem const& h, int sign) {
    detail::require_vector(h, "build_2_commutator");
    detail::require_infinite(h, "build_2_commutator");
    if (sign != 1 && sign != -1) {
      throw InvalidArgument("sign must be +1 or -1");
    }
    auto const  base = h.base_ptr();
    auto const  mode = h.mode();
    auto const& P    = h.P();
    auto const& A    = base->algebra();
    auto const  one  = LampElem::identity(base, mode);
    if (h.is_identity()) {
      return CommWitness{2 * sign, PmOrder::plus_minus, {one, one}};
    }
    if (sign == -1) {
      // rho(h) = F+(g1) F+(g2) gives h = F-(alpha^-1 rho g1) F-(alpha^-1 rho g2)
      auto w = build_2_commutator(detail::mirror(h), 1);
      for (auto& g : w.vectors) {
        g = alpha_pow(detail::mirror(g), -1);
      }
      w.k = -2;
      return w;
    }
    base->require({Statement::S1, Statement::S2});

    auto lo = h.support().front().first;
    auto hi = h.support().back().first;
    if ((hi - lo + 1) % 2 == 1) {
      --lo;  // pad with a trivial entry so the length is even
    }
    auto               hv = detail::dense(h, lo, hi);
    auto const         len = hv.size();
    // position p of the tables is index lo + p - 1; vectors live on 2 .. len + 1
    std::vector<Index> g1(len + 2, P.identity()), g2(len + 2, P.identity());
    auto [x, y] = solve_S1_instance(A, hv[0], hv[1]);
    g1[2] = P.mul(P.inv(x), P.inv(hv[0]));
    g1[3] = P.inv(y);
    g2[2] = x;
    g2[3] = y;
    Index prev = y;
    for (std::size_t p = 3; p + 1 <= len; p += 2) {
      auto [z, u, v] = solve_S2_instance(A, hv[p - 1], hv[p], prev);
      g1[p + 1] = P.inv(z);
      g1[p + 2] = P.inv(v);
      g2[p + 1] = P.inv(u);
      g2[p + 2] = v;
      prev      = v;
    }
    std::vector<Index> a(g1.begin() + 2, g1.end()), b(g2.begin() + 2, g2.end());
    return CommWitness{2, PmOrder::plus_minus,
                       {detail::from_dense(base, mode, lo + 1, a),
                        detail::from_dense(base, mode, lo + 1, b)}};
  }

  // Statement Xi applied to a support triple.  `direct` tests Xi(h1, h2, h3),
  // equivalently 1 in C(h1) C(h2) C(h3); `inverted` tests Xi(h1^-1, h2^-1, h3).
  enum class XiVariant { direct, inverted };

  inline std::string to_string(XiVariant v) {
    return v == XiVariant::direct ? "direct" : "inverted";
  }

  // Values of h in increasing index order.
  inline std::vector<Index> support_values(LampElem const& h) {
    std::vector<Index> out;
    for (auto const& e : h.support()) {
      out.push_back(e.second);
    }
    return out;
  }

  // Re-places the support values of h at the indices 1 .. omega.
  inline LampElem compress(LampElem const& h) {
    detail::require_vector(h, "compress");
    return detail::from_dense(h.base_ptr(), h.mode(), 1, support_values(h));
  }

  // First conjugators x (lexicographic) with prod_j x_j^-1 h_j x_j = 1 in
  // increasing j, or nullopt.  Dynamic programming over reachable products.
  inline std::optional<std::vector<Index>> identity_product_conjugators(
      ClassAlgebra const& A, std::vector<Index> const& hs) {
    auto const& P = A.group();
    auto const  n = P.size();
    if (hs.empty()) {
      return std::vector<Index>{};
    }
    // reach[j][r]: r is attainable as a product of conjugates of h_j .. h_end
    // that equals r; filled from the back so forward choices can be greedy.
    std::vector<std::vector<bool>> reach(hs.size() + 1, std::vector<bool>(n, false));
    reach[hs.size()][P.identity()] = true;
    for (std::size_t j = hs.size(); j-- > 0;) {
      auto const& cls = A.classes().classes[A.class_of(hs[j])];
      for (Index r = 0; r < n; ++r) {
        if (!reach[j + 1][r]) {
          continue;
        }
        for (auto c : cls) {
          reach[j][P.mul(c, r)] = true;
        }
      }
    }
    // we need prefix^-1 ... : walk forward keeping the required remainder
    if (!reach[0][P.identity()]) {
      return std::nullopt;
    }
    std::vector<Index> xs;
    Index              need = P.identity();  // remaining product h_j' .. must equal need
    for (std::size_t j = 0; j < hs.size(); ++j) {
      bool found = false;
      for (Index x = 0; x < n && !found; ++x) {
        auto c    = P.conj(hs[j], x);
        auto rest = P.mul(P.inv(c), need);
        if (reach[j + 1][rest]) {
          xs.push_back(x);
          need  = rest;
          found = true;
        }
      }
      if (!found) {
        throw NoSolution("identity_product_conjugators: inconsistent table");
      }
    }
    return xs;
  }

  namespace detail {

    // From conjugators with prod x_j^-1 h_j x_j = 1 over the compressed
    // support 1 .. omega, the minus_plus witness alpha(a) a^-1 b alpha(b^-1)
    // supported on 2 .. omega.
    inline CommWitness witness_from_conjugators(BasePtr const& base, Mode mode,
                                                std::vector<Index> const& hs,
                                                std::vector<Index> xs) {
      auto const& P = base->group();
      auto const  w = hs.size();
      // normalize x_omega = 1 by conjugating the whole product
      auto last = xs.back();
      for (auto& x : xs) {
        x = P.mul(x, P.inv(last));
      }
      // a_{j+1} = x_j, a_1 = 1; b_1 = 1, b_{j+1} = h_j^-1 a_{j+1} a_j^-1 b_j
      std::vector<Index> a(w + 2, P.identity()), b(w + 2, P.identity());
      for (std::size_t j = 1; j < w; ++j) {
        a[j + 1] = xs[j - 1];
      }
      for (std::size_t j = 1; j < w; ++j) {
        b[j + 1] = P.mul(P.mul(P.inv(hs[j - 1]), a[j + 1]), P.mul(P.inv(a[j]), b[j]));
      }
      std::vector<Index> av(a.begin() + 2, a.begin() + static_cast<std::ptrdiff_t>(w) + 1);
      std::vector<Index> bv(b.begin() + 2, b.begin() + static_cast<std::ptrdiff_t>(w) + 1);
      return CommWitness{0, PmOrder::minus_plus,
                         {from_dense(base, mode, 2, av), from_dense(base, mode, 2, bv)}};
    }

    // Conjugators for omega >= 4 by peeling the top factors down to one S3
    // instance; nullopt if a peel step has no admissible choice.
    inline std::optional<std::vector<Index>> peel_conjugators(ClassAlgebra const& A,
                                                              std::vector<Index> const& hs) {
      auto const& P = A.group();
      auto const  w = hs.size();
      std::vector<Index> xs(w, P.identity());
      // prod_{j < w} x_j^-1 h_j x_j = R with R = h_w^-1, peeled from the top
      Index R = P.inv(hs[w - 1]);
      for (std::size_t j = w - 2; j >= 3; --j) {
        bool found = false;
        for (Index x = 0; x < P.size() && !found; ++x) {
          auto c = P.conj(hs[j], x);
          if (c != R) {
            xs[j] = x;
            R     = P.mul(R, P.inv(c));
            found = true;
          }
        }
        if (!found) {
          return std::nullopt;
        }
      }
      auto [x1, x2, x3] = solve_S3_instance(A, hs[0], hs[1], hs[2], R);
      xs[0] = x1;
      xs[1] = x2;
      xs[2] = x3;
      return xs;
    }

    // Exhaustive search for omega <= 2: the first vector over the window
    // [1, omega + 1] whose residual is a [-+1,t]-commutator.  The second
    // vector is then unique (telescoping) and lies in the same window.
    inline std::optional<CommWitness> window_search(LampElem const& hc) {
      auto const  base = hc.base_ptr();
      auto const  mode = hc.mode();
      auto const  w    = static_cast<std::int64_t>(hc.weight());
      auto const  lo   = std::int64_t{1};
      auto const  hi   = w + 1;
      for (auto order : {PmOrder::plus_minus, PmOrder::minus_plus}) {
        std::optional<CommWitness> found;
        int const sign2 = order == PmOrder::plus_minus ? -1 : 1;
        brute::for_each_vector(base, mode, lo, hi, [&](LampElem const& g1) {
          if (found) {
            return;
          }
          auto f1 = order == PmOrder::plus_minus ? plus_factor(g1) : minus_factor(g1);
          auto r  = mul(inverse(f1), hc);
          if (!r.is_identity()
              && (r.support().front().first < lo - 1 || r.support().back().first > hi)) {
            return;
          }
          if (is_pm1_commutator(r, sign2)) {
            auto g2 = build_pm1_decomposition(r, sign2).witness.vectors[0];
            found   = CommWitness{0, order, {g1, g2}};
          }
        });
        if (found) {
          return found;
        }
      }
      return std::nullopt;
    }

  }  // namespace detail

  // Re-places the support values of evaluate(w) from old_indices at
  // new_indices.  Widened gaps reuse the witness through a monotone index
  // map (g'_p = g_sigma(p)); narrowed gaps are handled the same way for
  // [+-1,t] witnesses and by rebuilding for the others.
  inline CommWitness build_pm_commutator(LampElem const& h,
                                         XiVariant variant = XiVariant::direct);

  inline CommWitness transport(CommWitness const& w, std::vector<std::int64_t> const& old_idx,
                               std::vector<std::int64_t> const& new_idx) {
    if (old_idx.size() != new_idx.size()) {
      throw InvalidArgument("transport: index sequences differ in length");
    }
    for (std::size_t j = 1; j < old_idx.size(); ++j) {
      if (old_idx[j] <= old_idx[j - 1] || new_idx[j] <= new_idx[j - 1]) {
        throw InvalidArgument("transport: index sequences must be strictly increasing");
      }
    }
    auto h = evaluate(w);
    if (!h) {
      throw InvalidArgument("transport: malformed witness");
    }
    detail::require_infinite(*h, "transport");
    for (auto const& [i, g] : h->support()) {
      if (!std::binary_search(old_idx.begin(), old_idx.end(), i)) {
        throw InvalidArgument("transport: element not supported on old_indices");
      }
    }
    if (old_idx.empty() || old_idx == new_idx) {
      return w;
    }
    auto const base = h->base_ptr();
    auto const mode = h->mode();
    auto const L    = old_idx.size();

    bool narrows = false;
    for (std::size_t j = 1; j < L; ++j) {
      narrows = narrows || new_idx[j] - new_idx[j - 1] < old_idx[j] - old_idx[j - 1];
    }
    if (narrows && w.k != 1 && w.k != -1) {
      std::vector<LampElem::Entry> s;
      for (std::size_t j = 0; j < L; ++j) {
        s.emplace_back(new_idx[j], h->at(old_idx[j]));
      }
      LampElem target(base, mode, std::move(s), 0);
      if (w.is_pm()) {
        return build_pm_commutator(target, XiVariant::direct);
      }
      auto r = build_2_commutator(target, w.k > 0 ? 1 : -1);
      while (r.arity() < w.arity()) {
        r = extend(r);
      }
      return r;
    }

    // sigma: new positions -> old positions, nondecreasing, with sigma(n_j) =
    // o_j and sigma(n_j + 1) = o_j + 1 (or o_{j+1} - gap' + 1 when narrowed).
    auto sigma = [&](std::int64_t p) -> std::int64_t {
      if (p <= new_idx[0]) {
        return p - new_idx[0] + old_idx[0];
      }
      for (std::size_t j = 0; j + 1 < L; ++j) {
        if (p <= new_idx[j + 1]) {
          auto gap_new = new_idx[j + 1] - new_idx[j];
          auto gap_old = old_idx[j + 1] - old_idx[j];
          if (gap_new >= gap_old) {
            return std::min(p - new_idx[j] + old_idx[j], old_idx[j + 1]);
          }
          return old_idx[j + 1] - (new_idx[j + 1] - p);
        }
      }
      return p - new_idx[L - 1] + old_idx[L - 1];
    };
    // range of new positions whose image meets the supports of the vectors
    std::int64_t lo_old = old_idx.front(), hi_old = old_idx.back();
    for (auto const& g : w.vectors) {
      if (!g.is_identity()) {
        lo_old = std::min(lo_old, g.support().front().first);
        hi_old = std::max(hi_old, g.support().back().first);
      }
    }
    auto const lo_new = lo_old - old_idx.front() + new_idx.front();
    auto const hi_new = hi_old - old_idx.back() + new_idx.back();
    CommWitness out{w.k, w.order, {}};
    for (auto const& g : w.vectors) {
      std::vector<LampElem::Entry> s;
      for (auto p = lo_new; p <= hi_new; ++p) {
        s.emplace_back(p, g.at(sigma(p)));
      }
      out.vectors.emplace_back(base, mode, std::move(s), 0);
    }
    return out;
  }

  namespace detail {

    // Conjugators x with prod x_j^-1 h_j x_j = 1 for omega >= 3 support
    // values: Xi's solver, then peeling under S3, then the exact DP.
    inline std::optional<std::vector<Index>> pm_conjugators(BaseGroup const& base,
                                                            std::vector<Index> const& hs) {
      auto const& A = base.algebra();
      auto const& P = A.group();
      std::optional<std::vector<Index>> xs;
      if (hs.size() == 3) {
        // Xi(h1, h2, h3): h3 = x^-1 h2^-1 x y^-1 h1^-1 y, so (y, x, 1) works
        if (xi(A, hs[0], hs[1], hs[2])) {
          auto [x, y] = solve_xi(A, hs[0], hs[1], hs[2]);
          xs          = std::vector<Index>{y, x, P.identity()};
        }
      } else if (hs.size() > 3 && base.satisfies(Statement::S3)) {
        xs = peel_conjugators(A, hs);
      }
      if (!xs) {
        xs = identity_product_conjugators(A, hs);
      }
      return xs;
    }

  }  // namespace detail

  inline bool is_pm_commutator(LampElem const& h, XiVariant variant = XiVariant::direct) {
    detail::require_vector(h, "is_pm_commutator");
    auto const& A  = h.base().algebra();
    auto const& P  = h.P();
    auto        hs = support_values(h);
    switch (hs.size()) {
      case 0: return true;
      case 1:
      case 2: {
        detail::require_infinite(h, "is_pm_commutator");
        return detail::window_search(compress(h)).has_value();
      }
      case 3:
        if (variant == XiVariant::direct) {
          return xi(A, hs[0], hs[1], hs[2]);
        }
        return xi(A, P.inv(hs[0]), P.inv(hs[1]), hs[2]);
      default:
        if (h.base().satisfies(Statement::S3)) {
          return true;
        }
        return identity_product_conjugators(A, hs).has_value();
    }
  }

  inline CommWitness build_pm_commutator(LampElem const& h, XiVariant variant) {
    detail::require_vector(h, "build_pm_commutator");
    detail::require_infinite(h, "build_pm_commutator");
    auto const  base = h.base_ptr();
    auto const  mode = h.mode();
    auto const& A    = base->algebra();
    auto const& P    = h.P();
    auto const  one  = LampElem::identity(base, mode);
    if (!is_pm_commutator(h, variant)) {
      throw NoSolution("not a [+-,t]-commutator: " + h.to_string());
    }
    auto hs = support_values(h);
    if (hs.empty()) {
      return CommWitness{0, PmOrder::plus_minus, {one, one}};
    }
    auto        hc = compress(h);
    CommWitness wc;
    if (hs.size() <= 2) {
      wc = *detail::window_search(hc);
    } else {
      auto xs = detail::pm_conjugators(*base, hs);
      if (!xs) {
        throw NoSolution("Xi variant " + to_string(variant)
                         + " accepted an element with no [+-,t] witness: " + h.to_string());
      }
      wc = detail::witness_from_conjugators(base, mode, hs, *xs);
    }
    std::vector<std::int64_t> from, to;
    for (std::size_t j = 0; j < hs.size(); ++j) {
      from.push_back(static_cast<std::int64_t>(j) + 1);
    }
    to = h.indices();
    return transport(wc, from, to);
  }

}  // namespace mlef
