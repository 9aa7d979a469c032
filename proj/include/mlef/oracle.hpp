#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "lamplighter.hpp"
#include "norm_table.hpp"

namespace mlef {

  // Mixed-radix code of G_[-n,n]: digit p holds the value at index p - n
  // (radix |P|), then code = vector_code * (2n+1) + (shift + n).
  class DenseCode {
   public:
    DenseCode(std::size_t order, std::int64_t n) : m_(order), n_(n), W_(2 * n + 1) {
      if (n < 1) {
        throw InvalidArgument("dense code needs n >= 1 (got " + std::to_string(n) + ")");
      }
      if (order < 1) {
        throw InvalidArgument("dense code needs a nonempty group");
      }
      std::uint64_t s   = 1;
      auto const    lim = ~std::uint64_t{0} / (static_cast<std::uint64_t>(W_) * m_ + 1);
      pow_.push_back(1);
      for (std::int64_t p = 0; p < W_; ++p) {
        if (s > lim) {
          throw CapExceeded("dense code for |P| = " + std::to_string(order) + ", n = "
                            + std::to_string(n) + " does not fit 64 bits",
                            static_cast<std::size_t>(lim));
        }
        s *= m_;
        pow_.push_back(s);
      }
      vectors_ = s;
    }

    std::size_t order() const noexcept {
      return m_;
    }

    std::int64_t n() const noexcept {
      return n_;
    }

    std::int64_t window() const noexcept {
      return W_;
    }

    std::uint64_t vector_count() const noexcept {
      return vectors_;
    }

    std::uint64_t size() const noexcept {
      return vectors_ * static_cast<std::uint64_t>(W_);
    }

    std::uint64_t radix_power(std::size_t p) const {
      return pow_[p];
    }

    // shift in [-n, n]
    std::uint64_t compose(std::uint64_t vector_code, std::int64_t shift) const {
      return vector_code * static_cast<std::uint64_t>(W_) + static_cast<std::uint64_t>(shift + n_);
    }

    std::int64_t shift_of(std::uint64_t code) const {
      return static_cast<std::int64_t>(code % static_cast<std::uint64_t>(W_)) - n_;
    }

    std::uint64_t vector_of(std::uint64_t code) const {
      return code / static_cast<std::uint64_t>(W_);
    }

    void digits(std::uint64_t code, Index* out) const {
      auto v = vector_of(code);
      for (std::int64_t p = 0; p < W_; ++p) {
        out[p] = static_cast<Index>(v % m_);
        v /= m_;
      }
    }

    std::uint64_t encode(LampElem const& g) const {
      check(g);
      std::uint64_t v = 0;
      for (auto const& e : g.support()) {
        v += pow_[static_cast<std::size_t>(e.first + n_)] * e.second;
      }
      return compose(v, g.shift());
    }

    LampElem decode(std::uint64_t code, BasePtr const& base) const {
      if (code >= size()) {
        throw InvalidArgument("code " + std::to_string(code) + " out of range");
      }
      std::vector<Index> d(static_cast<std::size_t>(W_));
      digits(code, d.data());
      std::vector<LampElem::Entry> s;
      for (std::int64_t p = 0; p < W_; ++p) {
        if (d[static_cast<std::size_t>(p)] != 0) {
          s.emplace_back(p - n_, d[static_cast<std::size_t>(p)]);
        }
      }
      return LampElem(base, Mode::truncated(n_), std::move(s), shift_of(code));
    }

   private:
    void check(LampElem const& g) const {
      if (g.mode() != Mode::truncated(n_) || g.P().size() != m_) {
        throw InvalidArgument("element " + g.to_string() + " does not belong to this code");
      }
    }

    std::size_t                m_;
    std::int64_t               n_;
    std::int64_t               W_;
    std::vector<std::uint64_t> pow_;
    std::uint64_t              vectors_ = 1;
  };

  // G_[-n,n] as an enumerated group on dense codes.
  class TruncatedGroup {
   public:
    using index_type = std::uint64_t;

    TruncatedGroup(BasePtr base, std::int64_t n)
        : base_(std::move(base)), code_(base_->group().size(), n) {
      if (code_.window() > 64) {
        throw CapExceeded("window too wide for dense-code arithmetic", 64);
      }
      auto mode = Mode::truncated(n);
      for (auto g : base_->group().generators()) {
        gens_.push_back(code_.encode(LampElem::single(base_, mode, 0, g)));
      }
      gens_.push_back(code_.encode(LampElem::t(base_, mode)));
    }

    BasePtr const& base() const noexcept {
      return base_;
    }

    DenseCode const& code() const noexcept {
      return code_;
    }

    Mode mode() const {
      return Mode::truncated(code_.n());
    }

    std::size_t size() const noexcept {
      return static_cast<std::size_t>(code_.size());
    }

    index_type identity() const noexcept {
      return code_.compose(0, 0);
    }

    // (h, k)(g, l): digit p is h_p g_{p+k}
    index_type mul(index_type a, index_type b) const {
      auto const& P = base_->group();
      auto const  W = static_cast<std::size_t>(code_.window());
      Index da[64], db[64];
      code_.digits(a, da);
      code_.digits(b, db);
      auto ka = code_.shift_of(a);
      auto kb = code_.shift_of(b);
      std::uint64_t v = 0;
      for (std::size_t p = 0; p < W; ++p) {
        auto q = static_cast<std::size_t>(wrap(static_cast<std::int64_t>(p) + ka));
        v += code_.radix_power(p) * P.mul(da[p], db[q]);
      }
      return code_.compose(v, mode().reduce(ka + kb));
    }

    // (h, k)^-1 = alpha^-k(h^-1) t^-k
    index_type inv(index_type a) const {
      auto const& P = base_->group();
      auto const  W = static_cast<std::size_t>(code_.window());
      Index da[64];
      code_.digits(a, da);
      auto          k = code_.shift_of(a);
      std::uint64_t v = 0;
      for (std::size_t p = 0; p < W; ++p) {
        auto q = static_cast<std::size_t>(wrap(static_cast<std::int64_t>(p) - k));
        v += code_.radix_power(p) * P.inv(da[q]);
      }
      return code_.compose(v, mode().reduce(-k));
    }

    std::vector<index_type> const& generators() const noexcept {
      return gens_;
    }

    LampElem element(index_type c) const {
      return code_.decode(c, base_);
    }

    index_type index_of(LampElem const& g) const {
      return code_.encode(g);
    }

   private:
    std::int64_t wrap(std::int64_t p) const {
      auto W = code_.window();
      return ((p % W) + W) % W;
    }

    BasePtr                 base_;
    DenseCode               code_;
    std::vector<index_type> gens_;
  };

  using TruncatedNormTable = BasicNormTable<TruncatedGroup>;

  namespace detail {

    // Calls fn(digits) for every vector of length W whose product in the
    // given scan order is 1: free digits everywhere but the last scanned one.
    template <class Fn>
    void for_each_telescoping(FiniteGroup const& P, std::size_t W, bool increasing, Fn&& fn) {
      std::vector<Index> d(W, P.identity());
      auto const         m    = static_cast<Index>(P.size());
      std::size_t const  last = increasing ? W - 1 : 0;
      auto close = [&] {
        Index r = P.identity();
        for (std::size_t s = 0; s < W; ++s) {
          auto p = increasing ? s : W - 1 - s;
          if (p != last) {
            r = P.mul(r, d[p]);
          }
        }
        d[last] = P.inv(r);
        fn(d);
      };
      // odometer over the free positions
      while (true) {
        close();
        std::size_t p = 0;
        for (; p < W; ++p) {
          if (p == last) {
            continue;
          }
          if (++d[p] < m) {
            break;
          }
          d[p] = 0;
        }
        if (p == W) {
          return;
        }
      }
    }

  }  // namespace detail

  // Dense codes of S-bar: singles, then T+, then T-.
  inline std::vector<std::uint64_t> sbar_codes(TruncatedGroup const& G,
                                               std::uint64_t cap = 50'000'000) {
    auto const& P = G.base()->group();
    auto const& C = G.code();
    auto const  W = static_cast<std::size_t>(C.window());
    auto const  m = P.size();
    // (2n+1)(|P|-1) + 2 |P|^(2n)
    long double expect = static_cast<long double>(W) * static_cast<long double>(m - 1)
                         + 2.0L * static_cast<long double>(C.vector_count()) / m;
    if (expect > static_cast<long double>(cap)) {
      throw CapExceeded("S-bar of G_[-" + std::to_string(C.n()) + "," + std::to_string(C.n())
                        + "] over |P| = " + std::to_string(m) + " is too large",
                        static_cast<std::size_t>(cap));
    }
    std::vector<std::uint64_t> out;
    out.reserve(static_cast<std::size_t>(expect));
    for (std::size_t p = 0; p < W; ++p) {
      for (Index x = 1; x < m; ++x) {
        out.push_back(C.compose(C.radix_power(p) * x, 0));
      }
    }
    for (int sign : {1, -1}) {
      detail::for_each_telescoping(P, W, sign > 0, [&](std::vector<Index> const& d) {
        std::uint64_t v = 0;
        for (std::size_t p = 0; p < W; ++p) {
          v += C.radix_power(p) * d[p];
        }
        out.push_back(C.compose(v, sign));
      });
    }
    return out;
  }

  // S-bar = singles + T+ + T- of G_[-n,n], duplicate-free.
  inline std::vector<LampElem> enumerate_Sbar(BasePtr const& base, std::int64_t n,
                                              std::uint64_t cap = 50'000'000) {
    TruncatedGroup G(base, n);
    std::vector<LampElem> out;
    for (auto c : sbar_codes(G, cap)) {
      out.push_back(G.element(c));
    }
    return out;
  }

  struct BfsOptions {
    unsigned      threads   = 1;
    std::uint64_t state_cap = 1'000'000'000;
  };

  struct BfsResult {
    std::string                group;
    std::size_t                order = 0;  // |P|
    std::int64_t               n     = 0;
    std::uint64_t              generators = 0;
    std::vector<std::uint8_t>  dist;  // by dense code, 255 = unreached
    std::vector<std::uint64_t> layer_sizes;
    unsigned                   threads      = 1;
    double                     wall_seconds = 0;

    static constexpr std::uint8_t unreached = 255;

    unsigned diameter() const {
      return layer_sizes.empty() ? 0 : static_cast<unsigned>(layer_sizes.size() - 1);
    }
  };

  namespace detail {

    // Right multiplication by the generators on dense codes, with generator
    // digits pre-rotated for every shift of the left factor.
    class CodeStepper {
     public:
      CodeStepper(TruncatedGroup const& G, std::vector<std::uint64_t> const& gens)
          : C_(G.code()), W_(static_cast<std::size_t>(G.code().window())) {
        auto const& P = G.base()->group();
        m_            = P.size();
        mul_.resize(m_ * m_);
        for (Index a = 0; a < m_; ++a) {
          for (Index b = 0; b < m_; ++b) {
            mul_[a * m_ + b] = P.mul(a, b);
          }
        }
        ngen_ = gens.size();
        rot_.resize(W_ * ngen_ * W_);
        gshift_.resize(ngen_);
        std::vector<Index> d(W_);
        for (std::size_t g = 0; g < ngen_; ++g) {
          C_.digits(gens[g], d.data());
          gshift_[g] = C_.shift_of(gens[g]);
          for (std::size_t k = 0; k < W_; ++k) {
            // left shift k - n sends digit p to p + k - n
            for (std::size_t p = 0; p < W_; ++p) {
              auto q = (p + k + W_ - static_cast<std::size_t>(C_.n()) % W_) % W_;
              rot_[(k * ngen_ + g) * W_ + p] = d[q];
            }
          }
        }
      }

      std::size_t generator_count() const noexcept {
        return ngen_;
      }

      // calls fn(code of x * s_g) for every generator g
      template <class Fn>
      void for_each_neighbor(std::uint64_t x, Fn&& fn) const {
        Index d[64];
        C_.digits(x, d);
        auto const k  = static_cast<std::size_t>(C_.shift_of(x) + C_.n());
        auto const Wi = static_cast<std::int64_t>(W_);
        for (std::size_t g = 0; g < ngen_; ++g) {
          Index const*  r = &rot_[(k * ngen_ + g) * W_];
          std::uint64_t v = 0;
          for (std::size_t p = W_; p-- > 0;) {
            v = v * m_ + mul_[d[p] * m_ + r[p]];
          }
          auto s = static_cast<std::int64_t>(k) + gshift_[g];
          s      = ((s % Wi) + Wi) % Wi;
          if (fn(v * W_ + static_cast<std::uint64_t>(s))) {
            return;
          }
        }
      }

     private:
      DenseCode const&          C_;
      std::size_t               W_;
      std::size_t               m_    = 0;
      std::size_t               ngen_ = 0;
      std::vector<Index>        mul_;
      std::vector<Index>        rot_;
      std::vector<std::int64_t> gshift_;
    };

    template <class Fn>
    void parallel_chunks(std::size_t count, unsigned threads, Fn&& fn) {
      threads = std::max(1u, threads);
      if (threads == 1 || count < 1024) {
        fn(0, std::size_t{0}, count);
        return;
      }
      std::vector<std::thread> pool;
      auto per = (count + threads - 1) / threads;
      for (unsigned t = 0; t < threads; ++t) {
        auto lo = std::min(count, t * per);
        auto hi = std::min(count, lo + per);
        pool.emplace_back([&fn, t, lo, hi] { fn(t, lo, hi); });
      }
      for (auto& th : pool) {
        th.join();
      }
    }

  }  // namespace detail

  // Exact distances from the identity in the Cayley graph of G_[-n,n] over
  // S-bar.  Level synchronous: a layer is finished before the next starts,
  // so labels do not depend on the thread schedule.  Layers are expanded by
  // pushing from the frontier, or by pulling into the unvisited states once
  // those are fewer.
  inline BfsResult bfs_norms(BasePtr const& base, std::int64_t n, BfsOptions opt = {}) {
    auto const start = std::chrono::steady_clock::now();
    TruncatedGroup G(base, n);
    auto const     total = G.code().size();
    if (total > opt.state_cap) {
      throw CapExceeded("G_[-" + std::to_string(n) + "," + std::to_string(n) + "] has "
                        + std::to_string(total) + " states",
                        static_cast<std::size_t>(opt.state_cap));
    }
    if (G.code().window() > 64) {
      throw CapExceeded("window too wide for the BFS stepper", 64);
    }
    auto const gens = sbar_codes(G);
    detail::CodeStepper step(G, gens);

    BfsResult res;
    res.group      = base->name();
    res.order      = base->group().size();
    res.n          = n;
    res.generators = gens.size();
    res.threads    = std::max(1u, opt.threads);
    res.dist.assign(static_cast<std::size_t>(total), BfsResult::unreached);

    std::vector<std::uint64_t> frontier{G.identity()};
    res.dist[static_cast<std::size_t>(G.identity())] = 0;
    res.layer_sizes.push_back(1);
    std::uint64_t seen = 1;
    std::vector<std::vector<std::uint64_t>> found(res.threads);

    for (std::uint8_t d = 0; seen < total; ++d) {
      if (d == BfsResult::unreached - 1) {
        throw CapExceeded("BFS depth exceeds the byte encoding", 254);
      }
      auto const next = static_cast<std::uint8_t>(d + 1);
      for (auto& f : found) {
        f.clear();
      }
      auto const remaining = total - seen;
      if (remaining < frontier.size()) {
        std::vector<std::uint64_t> open;
        for (std::uint64_t x = 0; x < total; ++x) {
          if (res.dist[static_cast<std::size_t>(x)] == BfsResult::unreached) {
            open.push_back(x);
          }
        }
        detail::parallel_chunks(open.size(), res.threads,
                                [&](unsigned t, std::size_t lo, std::size_t hi) {
          for (auto i = lo; i < hi; ++i) {
            step.for_each_neighbor(open[i], [&](std::uint64_t y) {
              std::atomic_ref<std::uint8_t> dy(res.dist[static_cast<std::size_t>(y)]);
              if (dy.load(std::memory_order_relaxed) == d) {
                found[t].push_back(open[i]);
                return true;
              }
              return false;
            });
          }
        });
        for (auto const& f : found) {
          for (auto x : f) {
            res.dist[static_cast<std::size_t>(x)] = next;
          }
        }
      } else {
        detail::parallel_chunks(frontier.size(), res.threads,
                                [&](unsigned t, std::size_t lo, std::size_t hi) {
          for (auto i = lo; i < hi; ++i) {
            step.for_each_neighbor(frontier[i], [&](std::uint64_t y) {
              std::atomic_ref<std::uint8_t> dy(res.dist[static_cast<std::size_t>(y)]);
              auto expected = BfsResult::unreached;
              if (dy.load(std::memory_order_relaxed) == expected
                  && dy.compare_exchange_strong(expected, next, std::memory_order_relaxed)) {
                found[t].push_back(y);
              }
              return false;
            });
          }
        });
      }
      frontier.clear();
      for (auto const& f : found) {
        frontier.insert(frontier.end(), f.begin(), f.end());
      }
      if (frontier.empty()) {
        throw std::runtime_error("BFS stalled with " + std::to_string(total - seen)
                                 + " states unreached: S-bar does not generate");
      }
      std::sort(frontier.begin(), frontier.end());
      seen += frontier.size();
      res.layer_sizes.push_back(frontier.size());
    }
    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
  }

  inline TruncatedNormTable to_norm_table(BfsResult const& r, BasePtr const& base) {
    auto G = std::make_shared<TruncatedGroup const>(base, r.n);
    if (G->size() != r.dist.size()) {
      throw InvalidArgument("BFS result does not match the group");
    }
    std::vector<Rational> values;
    values.reserve(r.dist.size());
    for (auto d : r.dist) {
      if (d == BfsResult::unreached) {
        throw InvalidArgument("BFS result has unreached states");
      }
      values.emplace_back(d);
    }
    return TruncatedNormTable(G, std::move(values));
  }

  inline std::uint8_t bfs_lookup(BfsResult const& r, LampElem const& g) {
    DenseCode C(r.order, r.n);
    return r.dist[static_cast<std::size_t>(C.encode(g))];
  }

  // Binary layout, little endian:
  //   8 bytes  magic "MLEFBFS1"
  //   u32      |P|
  //   u32      n
  //   u64      state count |P|^(2n+1) (2n+1)
  //   u32      length of the group name, then its bytes
  //   u64      state-count bytes: distance per dense code, 255 = unreached
  namespace detail {
    inline void put_le(std::ostream& os, std::uint64_t v, int bytes) {
      for (int i = 0; i < bytes; ++i) {
        os.put(static_cast<char>((v >> (8 * i)) & 0xff));
      }
    }

    inline std::uint64_t get_le(std::istream& is, int bytes) {
      std::uint64_t v = 0;
      for (int i = 0; i < bytes; ++i) {
        auto c = is.get();
        if (c == std::char_traits<char>::eof()) {
          throw InvalidArgument("truncated BFS file");
        }
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
      }
      return v;
    }
  }  // namespace detail

  inline constexpr char bfs_magic[9] = "MLEFBFS1";

  inline void write_bfs_binary(std::ostream& os, BfsResult const& r) {
    os.write(bfs_magic, 8);
    detail::put_le(os, r.order, 4);
    detail::put_le(os, static_cast<std::uint64_t>(r.n), 4);
    detail::put_le(os, r.dist.size(), 8);
    detail::put_le(os, r.group.size(), 4);
    os.write(r.group.data(), static_cast<std::streamsize>(r.group.size()));
    os.write(reinterpret_cast<char const*>(r.dist.data()),
             static_cast<std::streamsize>(r.dist.size()));
  }

  // Reads the table back; layer sizes are recomputed from the body.
  inline BfsResult read_bfs_binary(std::istream& is) {
    char magic[8];
    if (!is.read(magic, 8) || std::memcmp(magic, bfs_magic, 8) != 0) {
      throw InvalidArgument("not an MLEFBFS1 file");
    }
    BfsResult r;
    r.order     = static_cast<std::size_t>(detail::get_le(is, 4));
    r.n         = static_cast<std::int64_t>(detail::get_le(is, 4));
    auto states = detail::get_le(is, 8);
    if (DenseCode(r.order, r.n).size() != states) {
      throw InvalidArgument("BFS header is inconsistent");
    }
    auto len = detail::get_le(is, 4);
    r.group.resize(static_cast<std::size_t>(len));
    is.read(r.group.data(), static_cast<std::streamsize>(len));
    r.dist.resize(static_cast<std::size_t>(states));
    if (!is.read(reinterpret_cast<char*>(r.dist.data()), static_cast<std::streamsize>(states))) {
      throw InvalidArgument("truncated BFS file");
    }
    for (auto d : r.dist) {
      if (d == BfsResult::unreached) {
        continue;
      }
      if (d >= r.layer_sizes.size()) {
        r.layer_sizes.resize(d + 1, 0);
      }
      ++r.layer_sizes[d];
    }
    return r;
  }

  // S-bar membership on dense codes, for searches that avoid a full BFS.
  class SbarIndex {
   public:
    SbarIndex(BasePtr base, std::int64_t n, std::uint64_t state_cap = 1'000'000'000)
        : G_(std::move(base), n) {
      if (G_.code().size() > state_cap) {
        throw CapExceeded("membership bitmap for " + std::to_string(G_.code().size())
                              + " states",
                          static_cast<std::size_t>(state_cap));
      }
      codes_ = sbar_codes(G_);
      member_.assign(static_cast<std::size_t>(G_.code().size()), false);
      for (auto c : codes_) {
        member_[static_cast<std::size_t>(c)] = true;
      }
      // S-bar is closed under inverses, so x s for s in S-bar covers x S-bar^-1
      stepper_ = std::make_unique<detail::CodeStepper>(G_, codes_);
    }

    TruncatedGroup const& group() const noexcept {
      return G_;
    }

    std::vector<std::uint64_t> const& codes() const noexcept {
      return codes_;
    }

    bool contains(std::uint64_t c) const {
      return member_[static_cast<std::size_t>(c)];
    }

    // smallest r <= r_max with x in S-bar^r, or nullopt
    std::optional<unsigned> bounded(std::uint64_t x, unsigned r_max) const {
      if (r_max > 3) {
        throw InvalidArgument("bounded_norm supports r_max <= 3 (got "
                              + std::to_string(r_max) + ")");
      }
      for (unsigned r = 0; r <= r_max; ++r) {
        if (within(x, r)) {
          return r;
        }
      }
      return std::nullopt;
    }

   private:
    bool within(std::uint64_t x, unsigned r) const {
      if (r == 0) {
        return x == G_.identity();
      }
      if (r == 1) {
        return contains(x);
      }
      bool hit = false;
      stepper_->for_each_neighbor(x, [&](std::uint64_t y) {
        hit = within(y, r - 1);
        return hit;
      });
      return hit;
    }

    TruncatedGroup                       G_;
    std::vector<std::uint64_t>           codes_;
    std::vector<bool>                    member_;
    std::unique_ptr<detail::CodeStepper> stepper_;
  };

  // Word norm of g if it is at most r_max (<= 3), else nullopt.
  inline std::optional<unsigned> bounded_norm(LampElem const& g, unsigned r_max,
                                              SbarIndex const& index) {
    return index.bounded(index.group().index_of(g), r_max);
  }

  inline std::optional<unsigned> bounded_norm(LampElem const& g, unsigned r_max) {
    if (!g.mode().is_truncated()) {
      throw InvalidArgument("bounded_norm needs a truncated-mode element");
    }
    SbarIndex index(g.base_ptr(), *g.mode().n);
    return bounded_norm(g, r_max, index);
  }

}  // namespace mlef
