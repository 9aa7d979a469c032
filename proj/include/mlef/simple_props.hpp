#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "conjugacy.hpp"
#include "errors.hpp"
#include "finite_group.hpp"

namespace mlef {

  // Conjugacy classes of a finite group together with all pairwise class
  // products, stored as membership bitmaps.
  class ClassAlgebra {
   public:
    explicit ClassAlgebra(GroupPtr group)
        : group_(std::move(group)), classes_(conjugacy_classes(*group_)) {
      auto const k = classes_.count();
      auto const n = group_->size();
      products_.assign(k * k, std::vector<bool>(n, false));
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
          auto& hit = products_[a * k + b];
          for (auto x : classes_.classes[a]) {
            for (auto y : classes_.classes[b]) {
              hit[group_->mul(x, y)] = true;
            }
          }
        }
      }
    }

    FiniteGroup const& group() const noexcept {
      return *group_;
    }

    GroupPtr const& group_ptr() const noexcept {
      return group_;
    }

    ConjClassTable const& classes() const noexcept {
      return classes_;
    }

    std::size_t class_of(Index g) const {
      return classes_.class_of[g];
    }

    // g in C(a) C(b), for elements a, b.
    bool in_product(Index a, Index b, Index g) const {
      return products_[class_of(a) * classes_.count() + class_of(b)][g];
    }

    // 1 in C(a) C(b) C(c)
    bool identity_in_product(Index a, Index b, Index c) const {
      return in_product(a, b, group_->inv(c));
    }

    // Set of elements of C(a) C(b) C(c), as a bitmap.
    std::vector<bool> triple_product(Index a, Index b, Index c) const {
      auto const& ab = products_[class_of(a) * classes_.count() + class_of(b)];
      std::vector<bool> out(group_->size(), false);
      for (Index g = 0; g < group_->size(); ++g) {
        if (ab[g]) {
          for (auto z : classes_.classes[class_of(c)]) {
            out[group_->mul(g, z)] = true;
          }
        }
      }
      return out;
    }

    // First z (in element order) with z^-1 g z = target.
    std::optional<Index> first_conjugator(Index g, Index target) const {
      if (class_of(g) != class_of(target)) {
        return std::nullopt;
      }
      for (Index z = 0; z < group_->size(); ++z) {
        if (group_->conj(g, z) == target) {
          return z;
        }
      }
      return std::nullopt;
    }

   private:
    GroupPtr                       group_;
    ConjClassTable                 classes_;
    std::vector<std::vector<bool>> products_;
  };

  enum class Statement { S1, S2, S3, S4 };

  inline std::string to_string(Statement s) {
    switch (s) {
      case Statement::S1: return "S1";
      case Statement::S2: return "S2";
      case Statement::S3: return "S3";
      case Statement::S4: return "S4";
    }
    return "?";
  }

  // holds, plus a witness: the first failing tuple for S1-S3, the first
  // realizing triple for S4.
  struct PropReport {
    Statement          id;
    bool               holds = false;
    std::vector<Index> witness;
  };

  // Quantifier evaluation: over class representatives (class products) or
  // over raw tuples.  The raw mode is a slow oracle.
  enum class EvalMode { classes, raw };

  // u3 = x^-1 u2^-1 x y^-1 u1^-1 y for some x, y; i.e. u3 in C(u2^-1) C(u1^-1).
  inline bool xi(ClassAlgebra const& A, Index u1, Index u2, Index u3,
                 EvalMode mode = EvalMode::classes) {
    auto const& P = A.group();
    if (mode == EvalMode::classes) {
      return A.in_product(P.inv(u2), P.inv(u1), u3);
    }
    for (Index x = 0; x < P.size(); ++x) {
      auto left = P.conj(P.inv(u2), x);
      for (Index y = 0; y < P.size(); ++y) {
        if (P.mul(left, P.conj(P.inv(u1), y)) == u3) {
          return true;
        }
      }
    }
    return false;
  }

  // First (x, y) with u3 = x^-1 u2^-1 x y^-1 u1^-1 y.
  inline std::pair<Index, Index> solve_xi(ClassAlgebra const& A, Index u1, Index u2,
                                          Index u3) {
    auto const& P = A.group();
    for (Index x = 0; x < P.size(); ++x) {
      auto left   = P.conj(P.inv(u2), x);
      auto target = P.mul(P.inv(left), u3);
      if (auto y = A.first_conjugator(P.inv(u1), target)) {
        return {x, *y};
      }
    }
    throw NoSolution("xi: no x, y realize the equation");
  }

  // x^-1 a1^-1 y x y^-1
  inline Index s1_form(FiniteGroup const& P, Index a1, Index x, Index y) {
    return P.mul(P.mul(P.mul(P.inv(x), P.inv(a1)), P.mul(y, x)), P.inv(y));
  }

  // a3 u a1^-1 a3^-1 v u^-1 v^-1
  inline Index s2_form(FiniteGroup const& P, Index a1, Index a3, Index u, Index v) {
    auto left = P.mul(P.mul(a3, u), P.mul(P.inv(a1), P.inv(a3)));
    return P.mul(left, P.mul(P.mul(v, P.inv(u)), P.inv(v)));
  }

  // x^-1 u1 x y^-1 u2 y z^-1 u3 z
  inline Index s3_form(FiniteGroup const& P, Index u1, Index u2, Index u3, Index x,
                       Index y, Index z) {
    return P.mul(P.mul(P.conj(u1, x), P.conj(u2, y)), P.conj(u3, z));
  }

  // S1: every a2 has the form x^-1 a1^-1 y x y^-1.  Evaluated over all a1
  // (the statement is not conjugation-covariant in a1).
  inline PropReport check_S1(ClassAlgebra const& A) {
    auto const& P = A.group();
    PropReport  r{Statement::S1, true, {}};
    for (Index a1 = 0; a1 < P.size(); ++a1) {
      std::vector<bool> hit(P.size(), false);
      for (Index x = 0; x < P.size(); ++x) {
        for (Index y = 0; y < P.size(); ++y) {
          hit[s1_form(P, a1, x, y)] = true;
        }
      }
      for (Index a2 = 0; a2 < P.size(); ++a2) {
        if (!hit[a2]) {
          return {Statement::S1, false, {a1, a2}};
        }
      }
    }
    return r;
  }

  // S2: for all a1, a3 every a2 has the form a3 u a1^-1 a3^-1 v u^-1 v^-1.
  inline PropReport check_S2(ClassAlgebra const& A) {
    auto const& P = A.group();
    for (Index a1 = 0; a1 < P.size(); ++a1) {
      for (Index a3 = 0; a3 < P.size(); ++a3) {
        std::vector<bool> hit(P.size(), false);
        std::size_t       covered = 0;
        for (Index u = 0; u < P.size() && covered < P.size(); ++u) {
          for (Index v = 0; v < P.size(); ++v) {
            auto g = s2_form(P, a1, a3, u, v);
            if (!hit[g]) {
              hit[g] = true;
              ++covered;
            }
          }
        }
        if (covered < P.size()) {
          for (Index a2 = 0; a2 < P.size(); ++a2) {
            if (!hit[a2]) {
              return {Statement::S2, false, {a1, a2, a3}};
            }
          }
        }
      }
    }
    return {Statement::S2, true, {}};
  }

  namespace detail {

    inline std::vector<Index> nontrivial(FiniteGroup const& P) {
      std::vector<Index> out;
      for (Index g = 0; g < P.size(); ++g) {
        if (g != P.identity()) {
          out.push_back(g);
        }
      }
      return out;
    }

    inline std::vector<Index> nontrivial_reps(ClassAlgebra const& A) {
      std::vector<Index> out;
      for (std::size_t c = 1; c < A.classes().count(); ++c) {
        out.push_back(A.classes().representative(c));
      }
      return out;
    }

  }  // namespace detail

  // S3: any three non-trivial classes multiply onto P minus {1}.
  inline PropReport check_S3(ClassAlgebra const& A, EvalMode mode = EvalMode::classes) {
    auto const& P = A.group();
    auto const  us = mode == EvalMode::classes ? detail::nontrivial_reps(A)
                                               : detail::nontrivial(P);
    for (auto u1 : us) {
      for (auto u2 : us) {
        for (auto u3 : us) {
          std::vector<bool> hit;
          if (mode == EvalMode::classes) {
            hit = A.triple_product(u1, u2, u3);
          } else {
            hit.assign(P.size(), false);
            for (Index x = 0; x < P.size(); ++x) {
              for (Index y = 0; y < P.size(); ++y) {
                for (Index z = 0; z < P.size(); ++z) {
                  hit[s3_form(P, u1, u2, u3, x, y, z)] = true;
                }
              }
            }
          }
          for (Index u4 = 0; u4 < P.size(); ++u4) {
            if (u4 != P.identity() && !hit[u4]) {
              return {Statement::S3, false, {u1, u2, u3, u4}};
            }
          }
        }
      }
    }
    return {Statement::S3, true, {}};
  }

  // S4: some non-trivial u1, u2, u3 fail xi.
  inline PropReport check_S4(ClassAlgebra const& A, EvalMode mode = EvalMode::classes) {
    auto const& P  = A.group();
    auto const  us = mode == EvalMode::classes ? detail::nontrivial_reps(A)
                                               : detail::nontrivial(P);
    for (auto u1 : us) {
      for (auto u2 : us) {
        for (Index u3 = 0; u3 < P.size(); ++u3) {
          if (u3 != P.identity() && !xi(A, u1, u2, u3, mode)) {
            return {Statement::S4, true, {u1, u2, u3}};
          }
        }
      }
    }
    return {Statement::S4, false, {}};
  }

  inline std::array<PropReport, 4> check_all(ClassAlgebra const& A) {
    return {check_S1(A), check_S2(A), check_S3(A), check_S4(A)};
  }

  // Re-verifies a report's witness by direct evaluation.
  inline bool witness_verifies(ClassAlgebra const& A, PropReport const& r) {
    auto const& P = A.group();
    auto const& w = r.witness;
    switch (r.id) {
      case Statement::S1:
        if (r.holds) {
          return w.empty();
        }
        for (Index x = 0; x < P.size(); ++x) {
          for (Index y = 0; y < P.size(); ++y) {
            if (s1_form(P, w.at(0), x, y) == w.at(1)) {
              return false;
            }
          }
        }
        return true;
      case Statement::S2:
        if (r.holds) {
          return w.empty();
        }
        for (Index u = 0; u < P.size(); ++u) {
          for (Index v = 0; v < P.size(); ++v) {
            if (s2_form(P, w.at(0), w.at(2), u, v) == w.at(1)) {
              return false;
            }
          }
        }
        return true;
      case Statement::S3:
        if (r.holds) {
          return w.empty();
        }
        for (auto u : w) {
          if (u == P.identity()) {
            return false;
          }
        }
        for (Index x = 0; x < P.size(); ++x) {
          for (Index y = 0; y < P.size(); ++y) {
            for (Index z = 0; z < P.size(); ++z) {
              if (s3_form(P, w[0], w[1], w[2], x, y, z) == w[3]) {
                return false;
              }
            }
          }
        }
        return true;
      case Statement::S4:
        if (!r.holds) {
          return w.empty();
        }
        return w.size() == 3 && w[0] != P.identity() && w[1] != P.identity()
               && w[2] != P.identity() && !xi(A, w[0], w[1], w[2], EvalMode::raw);
    }
    return false;
  }

  // First (x, y) with a2 = x^-1 a1^-1 y x y^-1.
  inline std::pair<Index, Index> solve_S1_instance(ClassAlgebra const& A, Index a1, Index a2) {
    auto const& P = A.group();
    for (Index x = 0; x < P.size(); ++x) {
      for (Index y = 0; y < P.size(); ++y) {
        if (s1_form(P, a1, x, y) == a2) {
          return {x, y};
        }
      }
    }
    throw NoSolution("S1 instance has no solution");
  }

  // First (z, u, v) with a1 = a3^-1 z a3 u and a2 = z^-1 v u^-1 v^-1.
  // z determines u, so the scan runs over z and v.
  inline std::tuple<Index, Index, Index> solve_S2_instance(ClassAlgebra const& A, Index a1,
                                                           Index a2, Index a3) {
    auto const& P = A.group();
    for (Index z = 0; z < P.size(); ++z) {
      auto u  = P.mul(P.mul(P.inv(a3), P.inv(z)), P.mul(a3, a1));
      auto zi = P.inv(z);
      for (Index v = 0; v < P.size(); ++v) {
        if (P.mul(zi, P.mul(P.mul(v, P.inv(u)), P.inv(v))) == a2) {
          return {z, u, v};
        }
      }
    }
    throw NoSolution("S2 instance has no solution");
  }

  // First (x, y, z) with u4 = x^-1 u1 x y^-1 u2 y z^-1 u3 z.
  inline std::tuple<Index, Index, Index> solve_S3_instance(ClassAlgebra const& A, Index u1,
                                                           Index u2, Index u3, Index u4) {
    auto const& P = A.group();
    for (auto u : {u1, u2, u3, u4}) {
      if (u == P.identity()) {
        throw InvalidArgument("solve_S3_instance: arguments must be non-trivial");
      }
    }
    for (Index x = 0; x < P.size(); ++x) {
      auto a = P.conj(u1, x);
      for (Index y = 0; y < P.size(); ++y) {
        auto ab     = P.mul(a, P.conj(u2, y));
        auto target = P.mul(P.inv(ab), u4);
        if (auto z = A.first_conjugator(u3, target)) {
          return {x, y, *z};
        }
      }
    }
    throw NoSolution("S3 instance has no solution");
  }

}  // namespace mlef
