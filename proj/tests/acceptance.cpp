#include <cstdio>
#include <thread>

#include <mlef/acceptance.hpp>

// One line per criterion.  Every tolerance is exact: zero mismatches and
// zero failures; budgets are wall-clock seconds.
int main(int argc, char** argv) {
  mlef::acceptance::Config cfg;
  cfg.threads = std::max(1u, std::thread::hardware_concurrency());
  if (argc > 1 && std::string(argv[1]) == "quick") {
    cfg.scale = mlef::acceptance::Scale::quick;
  }
  bool all = true;
  mlef::acceptance::run(cfg, [&](mlef::acceptance::Criterion const& c) {
    all = all && c.pass;
    std::string budget =
        c.budget_seconds > 0 ? " budget " + std::to_string(static_cast<int>(c.budget_seconds)) + "s"
                             : "";
    std::printf("criterion %d %s: %s (%.1fs%s) %s\n", c.id, c.pass ? "PASS" : "FAIL",
                c.name.c_str(), c.seconds, budget.c_str(), c.detail.dump().c_str());
    std::fflush(stdout);
  });
  return all ? 0 : 1;
}
