#include <iostream>

#include <mlef/mlef.hpp>

// A short walk through the library on the lamplighter group over A5.
int main() {
  using namespace mlef;
  auto B = builtin_base("A5");
  auto I = Mode::infinite();
  auto const& P = B->group();

  std::cout << "base group A5, order " << P.size() << "\n";
  for (auto const& r : B->props()) {
    std::cout << "  " << to_string(r.id) << (r.holds ? " holds" : " fails") << "\n";
  }

  auto tau = P.at(Perm::from_cycles(5, {{0, 1}, {2, 3}}));
  auto c5  = P.at(Perm::from_cycles(5, {{0, 1, 2, 3, 4}}));
  std::cout << "Xi((0 1)(2 3), c5, c5) = " << std::boolalpha
            << xi(B->algebra(), tau, c5, c5) << "\n\n";

  // three lamps: a [+-,t]-commutator, so the norm is 2
  LampElem h(B, I, {{0, tau}, {4, tau}, {9, tau}}, 0);
  std::cout << "h = " << h.to_string() << "\n  norm " << norm_gz(h) << "\n";
  auto w = build_pm_commutator(h);
  std::cout << "  [" << to_string(w.order) << ",t] witness verifies: " << verify_witness(h, w)
            << "\n";
  for (auto const& f : geodesic(h).factors) {
    std::cout << "  geodesic factor " << f.to_string() << "\n";
  }

  // the counterexample triple is not such a commutator: norm 3
  LampElem u(B, I, {{0, tau}, {1, c5}, {2, c5}}, 0);
  std::cout << "u = " << u.to_string() << "\n  norm " << norm_gz(u) << "\n";

  // a shifted element and its image in a finite truncation
  auto g = mul(u, LampElem::t(B, I, 3));
  auto N = max_N_value({g, h, u});
  std::cout << "g = u t^3, norm " << norm_gz(g) << "; phi into G_[-" << 2 * N + 3 << ","
            << 2 * N + 3 << "] has norm " << norm_truncated(phi(g, N)) << "\n\n";

  // the closed form against exhaustive BFS on the smallest truncation over S3
  auto S = builtin_base("S3");
  auto r = bfs_norms(S, 1);
  TruncatedGroup G(S, 1);
  std::size_t mismatches = 0;
  for (std::uint64_t c = 0; c < G.size(); ++c) {
    mismatches += norm_truncated(G.element(c)) != r.dist[c];
  }
  std::cout << "G_[-1,1] over S3: " << G.size() << " elements, diameter " << r.diameter()
            << ", closed form mismatches " << mismatches << "\n";
}
