#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "finite_group.hpp"
#include "simple_props.hpp"

namespace mlef {

  // The lamp group P with its class algebra.  The statements S1-S4 are
  // evaluated on first request and cached.
  class BaseGroup {
   public:
    explicit BaseGroup(GroupPtr group, std::string name = {})
        : name_(std::move(name)), algebra_(std::move(group)) {}

    FiniteGroup const& group() const noexcept {
      return algebra_.group();
    }

    GroupPtr const& group_ptr() const noexcept {
      return algebra_.group_ptr();
    }

    ClassAlgebra const& algebra() const noexcept {
      return algebra_;
    }

    std::string const& name() const noexcept {
      return name_;
    }

    std::array<PropReport, 4> const& props() const {
      std::call_once(props_once_, [this] { props_ = check_all(algebra_); });
      return props_;
    }

    bool satisfies(Statement s) const {
      return props()[static_cast<std::size_t>(s)].holds;
    }

    // Throws UnsupportedBase naming the first failing statement of `which`.
    void require(std::initializer_list<Statement> which) const {
      for (auto s : which) {
        auto const& r = props()[static_cast<std::size_t>(s)];
        if (!r.holds) {
          std::string w;
          for (auto i : r.witness) {
            w += (w.empty() ? "" : " ") + group().element(i).to_string();
          }
          throw UnsupportedBase(to_string(s), (name_.empty() ? "base group" : name_)
                                                  + (w.empty() ? "" : ", witness " + w));
        }
      }
    }

    bool same_as(BaseGroup const& other) const {
      return this == &other || group().elements() == other.group().elements();
    }

   private:
    std::string                       name_;
    ClassAlgebra                      algebra_;
    mutable std::once_flag            props_once_;
    mutable std::array<PropReport, 4> props_{};
  };

  using BasePtr = std::shared_ptr<BaseGroup const>;

  inline BasePtr make_base(GroupPtr group, std::string name = {}) {
    return std::make_shared<BaseGroup const>(std::move(group), std::move(name));
  }

  inline BasePtr builtin_base(std::string const& name) {
    return make_base(builtin_group(name), name);
  }

  // G_Z (no window) or the truncation G_[-n,n] over Z_{2n+1}.
  struct Mode {
    std::optional<std::int64_t> n;

    static Mode infinite() {
      return {};
    }

    static Mode truncated(std::int64_t n) {
      if (n < 1) {
        throw InvalidArgument("truncation window n must be at least 1 (got "
                              + std::to_string(n) + ")");
      }
      return {n};
    }

    bool is_truncated() const noexcept {
      return n.has_value();
    }

    std::int64_t window() const {
      return 2 * *n + 1;
    }

    // Representative in [-n, n]; identity map in infinite mode.
    std::int64_t reduce(std::int64_t i) const {
      if (!n) {
        return i;
      }
      auto w = window();
      auto r = ((i + *n) % w + w) % w;
      return r - *n;
    }

    std::string to_string() const {
      return n ? "truncated(" + std::to_string(*n) + ")" : "infinite";
    }

    friend bool operator==(Mode const&, Mode const&) = default;
  };

  struct SupportStats {
    std::optional<std::int64_t> i_min;  // absent for empty support
    std::optional<std::int64_t> i_max;
    std::size_t                 weight  = 0;
    std::int64_t                N_value = 0;
  };

  // An element h t^k: a finitely supported vector over P and a shift.
  //
  // Support entries are kept sorted by index and never hold the identity.
  class LampElem {
   public:
    using Entry = std::pair<std::int64_t, Index>;

    LampElem() = default;

    LampElem(BasePtr base, Mode mode, std::vector<Entry> support, std::int64_t shift)
        : base_(std::move(base)), mode_(mode), shift_(mode.reduce(shift)) {
      if (!base_) {
        throw InvalidArgument("lamplighter element without a base group");
      }
      std::sort(support.begin(), support.end());
      for (std::size_t i = 0; i < support.size(); ++i) {
        auto [idx, g] = support[i];
        if (g >= base_->group().size()) {
          throw InvalidArgument("support value is not an element of the base group");
        }
        if (mode_.is_truncated() && (idx < -*mode_.n || idx > *mode_.n)) {
          throw InvalidArgument("support index " + std::to_string(idx)
                                + " outside the window of " + mode_.to_string());
        }
        if (i + 1 < support.size() && support[i + 1].first == idx) {
          throw InvalidArgument("repeated support index " + std::to_string(idx));
        }
        if (g != base_->group().identity()) {
          support_.push_back(support[i]);
        }
      }
    }

    static LampElem identity(BasePtr base, Mode mode) {
      return LampElem(std::move(base), mode, {}, 0);
    }

    static LampElem t(BasePtr base, Mode mode, std::int64_t k = 1) {
      return LampElem(std::move(base), mode, {}, k);
    }

    static LampElem single(BasePtr base, Mode mode, std::int64_t i, Index g) {
      return LampElem(std::move(base), mode, {{i, g}}, 0);
    }

    BaseGroup const& base() const {
      return *base_;
    }

    BasePtr const& base_ptr() const noexcept {
      return base_;
    }

    FiniteGroup const& P() const {
      return base_->group();
    }

    Mode const& mode() const noexcept {
      return mode_;
    }

    std::int64_t shift() const noexcept {
      return shift_;
    }

    std::vector<Entry> const& support() const noexcept {
      return support_;
    }

    std::size_t weight() const noexcept {
      return support_.size();
    }

    bool is_identity() const noexcept {
      return shift_ == 0 && support_.empty();
    }

    // Value at index i (identity of P off the support).
    Index at(std::int64_t i) const {
      auto it = std::lower_bound(support_.begin(), support_.end(), Entry{i, 0});
      return it != support_.end() && it->first == i ? it->second : P().identity();
    }

    std::vector<std::int64_t> indices() const {
      std::vector<std::int64_t> out;
      for (auto const& e : support_) {
        out.push_back(e.first);
      }
      return out;
    }

    // Same vector with shift 0.
    LampElem vector_part() const {
      LampElem r = *this;
      r.shift_   = 0;
      return r;
    }

    LampElem with_shift(std::int64_t k) const {
      LampElem r = *this;
      r.shift_   = mode_.reduce(k);
      return r;
    }

    friend bool operator==(LampElem const& a, LampElem const& b) {
      return a.mode_ == b.mode_ && a.shift_ == b.shift_ && a.support_ == b.support_
             && a.base_->same_as(*b.base_);
    }

    friend bool operator<(LampElem const& a, LampElem const& b) {
      return std::tie(a.shift_, a.support_) < std::tie(b.shift_, b.support_);
    }

    std::string to_string() const {
      std::string s = "{";
      for (auto const& [i, g] : support_) {
        s += (s.size() > 1 ? ", " : "") + std::to_string(i) + ": " + P().element(g).to_string();
      }
      return s + "} t^" + std::to_string(shift_);
    }

   private:
    friend LampElem mul(LampElem const&, LampElem const&);
    friend LampElem inverse(LampElem const&);
    friend LampElem alpha_pow(LampElem const&, std::int64_t);

    BasePtr            base_;
    Mode               mode_;
    std::vector<Entry> support_;
    std::int64_t       shift_ = 0;
  };

  namespace detail {

    inline void check_compatible(LampElem const& a, LampElem const& b) {
      if (!(a.mode() == b.mode())) {
        throw InvalidArgument("mode mismatch: " + a.mode().to_string() + " vs "
                              + b.mode().to_string());
      }
      if (!a.base().same_as(b.base())) {
        throw InvalidArgument("base group mismatch");
      }
    }

    // Support of alpha^k(g): index j moves to j - k (cyclically when truncated).
    inline std::vector<LampElem::Entry> shifted(std::vector<LampElem::Entry> const& s,
                                                Mode const& mode, std::int64_t k) {
      std::vector<LampElem::Entry> out;
      out.reserve(s.size());
      for (auto const& [i, g] : s) {
        out.emplace_back(mode.reduce(i - k), g);
      }
      if (mode.is_truncated()) {
        std::sort(out.begin(), out.end());
      }
      return out;
    }

  }  // namespace detail

  // (h, k)(g, l) = h alpha^k(g) t^(k+l)
  inline LampElem mul(LampElem const& a, LampElem const& b) {
    detail::check_compatible(a, b);
    auto const& P  = a.P();
    auto        bs = detail::shifted(b.support_, b.mode_, a.shift_);
    LampElem    r;
    r.base_  = a.base_;
    r.mode_  = a.mode_;
    r.shift_ = a.mode_.reduce(a.shift_ + b.shift_);
    r.support_.reserve(a.support_.size() + bs.size());
    std::size_t i = 0, j = 0;
    while (i < a.support_.size() || j < bs.size()) {
      if (j == bs.size() || (i < a.support_.size() && a.support_[i].first < bs[j].first)) {
        r.support_.push_back(a.support_[i++]);
      } else if (i == a.support_.size() || bs[j].first < a.support_[i].first) {
        r.support_.push_back(bs[j++]);
      } else {
        auto v = P.mul(a.support_[i].second, bs[j].second);
        if (v != P.identity()) {
          r.support_.emplace_back(bs[j].first, v);
        }
        ++i;
        ++j;
      }
    }
    return r;
  }

  // (h, k)^-1 = (alpha^-k(h^-1), -k)
  inline LampElem inverse(LampElem const& x) {
    LampElem r = x;
    for (auto& e : r.support_) {
      e.second = x.P().inv(e.second);
    }
    r.support_ = detail::shifted(r.support_, x.mode_, -x.shift_);
    r.shift_   = x.mode_.reduce(-x.shift_);
    return r;
  }

  // alpha^k on a shift-0 element: (alpha h)_i = h_{i+1}.
  inline LampElem alpha_pow(LampElem const& x, std::int64_t k) {
    if (x.shift_ != 0) {
      throw InvalidArgument("alpha_pow: element has non-zero shift");
    }
    LampElem r = x;
    r.support_ = detail::shifted(x.support_, x.mode_, k);
    return r;
  }

  inline LampElem alpha(LampElem const& x) {
    return alpha_pow(x, 1);
  }

  // y^-1 x y
  inline LampElem conjugate(LampElem const& x, LampElem const& y) {
    return mul(mul(inverse(y), x), y);
  }

  inline LampElem product(std::vector<LampElem> const& factors, LampElem const& unit) {
    LampElem r = unit;
    for (auto const& f : factors) {
      r = mul(r, f);
    }
    return r;
  }

  inline SupportStats stats(LampElem const& x) {
    SupportStats s;
    s.weight = x.weight();
    std::int64_t N = x.shift() < 0 ? -x.shift() : x.shift();
    if (!x.support().empty()) {
      s.i_min = x.support().front().first;
      s.i_max = x.support().back().first;
      N       = std::max({N, *s.i_min < 0 ? -*s.i_min : *s.i_min,
                          *s.i_max < 0 ? -*s.i_max : *s.i_max});
    }
    s.N_value = N;
    return s;
  }

  // Product of the support values in increasing (or decreasing) index order.
  inline Index ordered_product(LampElem const& x, bool increasing = true) {
    auto const& P = x.P();
    Index       r = P.identity();
    if (increasing) {
      for (auto const& e : x.support()) {
        r = P.mul(r, e.second);
      }
    } else {
      for (auto it = x.support().rbegin(); it != x.support().rend(); ++it) {
        r = P.mul(r, it->second);
      }
    }
    return r;
  }

  inline bool in_single_support(LampElem const& x) {
    return x.shift() == 0 && x.weight() == 1;
  }

  // g alpha(g^-1) t: shift +1 and the increasing-order product is 1.  In
  // truncated mode indices run from -n, so the same scan is the cyclic
  // product started at -n.
  inline bool in_Tplus(LampElem const& x) {
    return x.shift() == 1 && ordered_product(x, true) == x.P().identity();
  }

  // alpha(g) g^-1 t^-1: shift -1 and the decreasing-order product is 1.
  inline bool in_Tminus(LampElem const& x) {
    return x.shift() == -1 && ordered_product(x, false) == x.P().identity();
  }

  inline bool in_Sbar(LampElem const& x) {
    return in_single_support(x) || in_Tplus(x) || in_Tminus(x);
  }

  // g alpha(g^-1) and alpha(g) g^-1 for a shift-0 vector g.
  inline LampElem plus_factor(LampElem const& g) {
    return mul(g, alpha(inverse(g)));
  }

  inline LampElem minus_factor(LampElem const& g) {
    return mul(alpha(g), inverse(g));
  }

}  // namespace mlef
