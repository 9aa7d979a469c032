#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "lamplighter.hpp"

namespace mlef {

  using Rng = std::mt19937_64;

  // Shift-0 vector with `weight` nontrivial entries at distinct indices in
  // [lo, hi] (weight is clamped to the window size).
  inline LampElem random_vector_of_weight(BasePtr const& base, Mode mode, Rng& rng,
                                          std::size_t weight, std::int64_t lo,
                                          std::int64_t hi) {
    auto const n = base->group().size();
    weight       = std::min<std::size_t>(weight, static_cast<std::size_t>(hi - lo + 1));
    std::uniform_int_distribution<std::int64_t> pos(lo, hi);
    std::uniform_int_distribution<Index>        val(1, static_cast<Index>(n - 1));
    std::set<std::int64_t>                      idx;
    while (idx.size() < weight) {
      idx.insert(pos(rng));
    }
    std::vector<LampElem::Entry> support;
    for (auto i : idx) {
      // index 0 of P is the identity
      support.emplace_back(i, n > 1 ? val(rng) : 0);
    }
    return LampElem(base, mode, std::move(support), 0);
  }

  inline LampElem random_vector(BasePtr const& base, Mode mode, Rng& rng,
                                std::size_t max_weight, std::int64_t lo, std::int64_t hi) {
    std::uniform_int_distribution<std::size_t> w(0, max_weight);
    return random_vector_of_weight(base, mode, rng, w(rng), lo, hi);
  }

  inline LampElem random_elem(BasePtr const& base, Mode mode, Rng& rng,
                              std::size_t max_weight, std::int64_t lo, std::int64_t hi,
                              std::int64_t max_shift) {
    std::uniform_int_distribution<std::int64_t> s(-max_shift, max_shift);
    return random_vector(base, mode, rng, max_weight, lo, hi).with_shift(s(rng));
  }

}  // namespace mlef
