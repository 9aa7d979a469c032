#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

#include "errors.hpp"

namespace mlef {

  // A permutation of {0, ..., degree - 1}, stored by images.
  //
  // Products act on the right: compose(p, q) applies p first, then q, so
  // i^(pq) = (i^p)^q.  Every group product in this library is compose().
  class Perm {
   public:
    using point_type = std::uint32_t;

    Perm() = default;

    explicit Perm(std::vector<point_type> images) : images_(std::move(images)) {
      std::vector<bool> seen(images_.size(), false);
      for (auto x : images_) {
        if (x >= images_.size() || seen[x]) {
          throw InvalidArgument("images do not form a permutation of degree "
                                + std::to_string(images_.size()));
        }
        seen[x] = true;
      }
    }

    Perm(std::initializer_list<point_type> images)
        : Perm(std::vector<point_type>(images)) {}

    static Perm identity(std::size_t degree) {
      Perm p;
      p.images_.resize(degree);
      for (std::size_t i = 0; i < degree; ++i) {
        p.images_[i] = static_cast<point_type>(i);
      }
      return p;
    }

    // Product of disjoint or overlapping cycles, applied left to right.
    static Perm from_cycles(std::size_t                                  degree,
                            std::vector<std::vector<point_type>> const& cycles) {
      Perm result = identity(degree);
      for (auto const& cycle : cycles) {
        Perm c = identity(degree);
        for (std::size_t i = 0; i < cycle.size(); ++i) {
          if (cycle[i] >= degree) {
            throw InvalidArgument("cycle point out of range");
          }
          c.images_[cycle[i]] = cycle[(i + 1) % cycle.size()];
        }
        // validates repeated points inside one cycle
        c = Perm(c.images_);
        result = result.then(c);
      }
      return result;
    }

    std::size_t degree() const noexcept {
      return images_.size();
    }

    point_type operator[](std::size_t i) const {
      return images_[i];
    }

    std::vector<point_type> const& images() const noexcept {
      return images_;
    }

    bool is_identity() const noexcept {
      for (std::size_t i = 0; i < images_.size(); ++i) {
        if (images_[i] != i) {
          return false;
        }
      }
      return true;
    }

    Perm inverse() const {
      Perm r;
      r.images_.resize(images_.size());
      for (std::size_t i = 0; i < images_.size(); ++i) {
        r.images_[images_[i]] = static_cast<point_type>(i);
      }
      return r;
    }

    // this first, then q
    Perm then(Perm const& q) const {
      if (q.degree() != degree()) {
        throw InvalidArgument("degree mismatch: " + std::to_string(degree())
                              + " vs " + std::to_string(q.degree()));
      }
      Perm r;
      r.images_.resize(images_.size());
      for (std::size_t i = 0; i < images_.size(); ++i) {
        r.images_[i] = q.images_[images_[i]];
      }
      return r;
    }

    std::string to_string() const {
      std::string s = "[";
      for (std::size_t i = 0; i < images_.size(); ++i) {
        if (i != 0) {
          s += ",";
        }
        s += std::to_string(images_[i]);
      }
      return s + "]";
    }

    friend bool operator==(Perm const&, Perm const&) = default;
    friend auto operator<=>(Perm const&, Perm const&) = default;

   private:
    std::vector<point_type> images_;
  };

  // The one multiplication convention: (compose(p, q))(i) = q(p(i)).
  inline Perm compose(Perm const& p, Perm const& q) {
    return p.then(q);
  }

  // h^-1 g h
  inline Perm conj(Perm const& g, Perm const& h) {
    return compose(compose(h.inverse(), g), h);
  }

  struct PermHash {
    std::size_t operator()(Perm const& p) const noexcept {
      std::uint64_t x = 1469598103934665603ull;
      for (auto v : p.images()) {
        x ^= v;
        x *= 1099511628211ull;
      }
      return static_cast<std::size_t>(x);
    }
  };

}  // namespace mlef
