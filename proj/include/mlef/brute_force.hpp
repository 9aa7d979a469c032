#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "lamplighter.hpp"

namespace mlef::brute {

  // Exhaustive existential searches over vectors supported in a window of
  // G_Z.  They back the closed-form predicates in tests and the selftest.

  // Calls fn on every shift-0 vector supported in [lo, hi], in mixed-radix
  // order (position lo varies fastest).
  inline void for_each_vector(BasePtr const& base, Mode mode, std::int64_t lo, std::int64_t hi,
                              std::function<void(LampElem const&)> const& fn) {
    auto const  n    = base->group().size();
    std::size_t w    = hi >= lo ? static_cast<std::size_t>(hi - lo + 1) : 0;
    std::vector<Index> digits(w, 0);
    while (true) {
      std::vector<LampElem::Entry> support;
      for (std::size_t j = 0; j < w; ++j) {
        support.emplace_back(lo + static_cast<std::int64_t>(j), digits[j]);
      }
      fn(LampElem(base, mode, std::move(support), 0));
      std::size_t j = 0;
      while (j < w && ++digits[j] == n) {
        digits[j++] = 0;
      }
      if (j == w) {
        return;
      }
    }
  }

  // A set of shift-0 vectors supported in [lo, hi], as a bitmap over
  // mixed-radix codes.
  class VectorSet {
   public:
    VectorSet(std::size_t order, std::int64_t lo, std::int64_t hi, std::size_t cap = 1u << 28)
        : order_(order), lo_(lo), hi_(hi) {
      std::size_t size = 1;
      for (auto i = lo; i <= hi; ++i) {
        if (size > cap / order) {
          throw CapExceeded("brute-force vector set too large", cap);
        }
        size *= order;
      }
      bits_.assign(size, false);
    }

    std::optional<std::size_t> code(LampElem const& x) const {
      if (x.shift() != 0) {
        return std::nullopt;
      }
      std::size_t c = 0;
      for (auto it = x.support().rbegin(); it != x.support().rend(); ++it) {
        if (it->first < lo_ || it->first > hi_) {
          return std::nullopt;
        }
      }
      for (auto i = hi_; i >= lo_; --i) {
        c = c * order_ + x.at(i);
      }
      return c;
    }

    void insert(LampElem const& x) {
      auto c = code(x);
      if (!c) {
        throw InvalidArgument("vector outside the set's window: " + x.to_string());
      }
      bits_[*c] = true;
    }

    bool contains(LampElem const& x) const {
      auto c = code(x);
      return c && bits_[*c];
    }

    std::size_t count() const {
      std::size_t n = 0;
      for (bool b : bits_) {
        n += b;
      }
      return n;
    }

   private:
    std::size_t       order_;
    std::int64_t      lo_, hi_;
    std::vector<bool> bits_;
  };

  // { g alpha(g^-1) : supp g in [lo, hi] }, supported in [lo - 1, hi].
  inline VectorSet plus_images(BasePtr const& base, std::int64_t lo, std::int64_t hi) {
    VectorSet s(base->group().size(), lo - 1, hi);
    for_each_vector(base, Mode::infinite(), lo, hi,
                    [&](LampElem const& g) { s.insert(plus_factor(g)); });
    return s;
  }

  // { alpha(g) g^-1 : supp g in [lo, hi] }, supported in [lo - 1, hi].
  inline VectorSet minus_images(BasePtr const& base, std::int64_t lo, std::int64_t hi) {
    VectorSet s(base->group().size(), lo - 1, hi);
    for_each_vector(base, Mode::infinite(), lo, hi,
                    [&](LampElem const& g) { s.insert(minus_factor(g)); });
    return s;
  }

  // Search windows for a [+-,t] decomposition h = F1(g1) F2(g2): g1 ranges
  // over [lo1, hi1]; membership of the residual F1(g1)^-1 h is looked up in
  // a precomputed image set (g2 ranging over the set's window).
  struct PmSearch {
    BasePtr      base;
    std::int64_t lo1, hi1;
    VectorSet    plus2, minus2;

    PmSearch(BasePtr b, std::int64_t lo1_, std::int64_t hi1_, std::int64_t lo2, std::int64_t hi2)
        : base(std::move(b)),
          lo1(lo1_),
          hi1(hi1_),
          plus2(plus_images(base, lo2, hi2)),
          minus2(minus_images(base, lo2, hi2)) {}

    // order "+-": g1 alpha(g1^-1) alpha(g2) g2^-1
    bool plus_minus(LampElem const& h) const {
      bool found = false;
      for_each_vector(base, Mode::infinite(), lo1, hi1, [&](LampElem const& g1) {
        found = found || minus2.contains(mul(inverse(plus_factor(g1)), h));
      });
      return found;
    }

    // order "-+": alpha(g1) g1^-1 g2 alpha(g2^-1)
    bool minus_plus(LampElem const& h) const {
      bool found = false;
      for_each_vector(base, Mode::infinite(), lo1, hi1, [&](LampElem const& g1) {
        found = found || plus2.contains(mul(inverse(minus_factor(g1)), h));
      });
      return found;
    }

    bool either(LampElem const& h) const {
      return plus_minus(h) || minus_plus(h);
    }
  };

}  // namespace mlef::brute
