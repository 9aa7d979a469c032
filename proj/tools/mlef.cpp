#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include <mlef/acceptance.hpp>
#include <mlef/json_io.hpp>

using namespace mlef;
using io::json;

namespace {

  struct Options {
    std::string              group  = "A5";
    std::uint64_t            seed   = 1;
    std::string              out;
    std::string              format = "json";
    unsigned                 threads = 1;
    std::uint64_t            state_cap  = 1'000'000'000;
    std::uint64_t            memory_cap = 4'000'000'000;
    double                   time_budget = 0;

    std::string              element, k_list, table, weights, witness, kind = "auto", gens = "generators";
    std::string              theory = "T_IPMG", scale = "quick";
    std::vector<std::string> q;
    std::optional<std::int64_t> truncated, window, N;
    int                      trials = 100;
    bool                     raw = false, show_geodesic = false, validate = false;
  };

  struct Outcome {
    json        result;
    bool        ok = true;
    std::string csv;  // set by commands with a flat table
  };

  // JSON given inline or as @path.
  std::string arg_text(std::string const& s) {
    if (s.empty() || s[0] != '@') {
      return s;
    }
    std::ifstream in(s.substr(1), std::ios::binary);
    if (!in) {
      throw InvalidArgument("cannot read " + s.substr(1));
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  std::vector<Rational> thresholds(Options const& o) {
    std::vector<Rational> Q;
    for (auto const& s : o.q) {
      Q.push_back(parse_rational(s));
    }
    return Q;
  }

  json config_json(Options const& o, std::string const& command, BasePtr const& B) {
    json c = {{"command", command},
              {"group", o.group.find('{') == std::string::npos ? json(o.group)
                                                               : io::parse(arg_text(o.group))},
              {"seed", o.seed},
              {"format", o.format},
              {"threads", o.threads}};
    if (o.window) {
      c["window"] = *o.window;
    }
    if (o.truncated) {
      c["truncated"] = *o.truncated;
    }
    if (!o.q.empty()) {
      json q = json::array();
      for (auto const& x : thresholds(o)) {
        q.push_back(to_string(x));
      }
      c["thresholds"] = q;
    }
    c["group_spec"] = io::group_spec_json(B->group());
    return c;
  }

  std::string require(std::string const& v, char const* flag) {
    if (v.empty()) {
      throw InvalidArgument(std::string("missing ") + flag);
    }
    return v;
  }

  std::vector<Perm> perms(FiniteGroup const& P, ElementSet const& s) {
    std::vector<Perm> out;
    for (auto x : s) {
      out.push_back(P.element(x));
    }
    return out;
  }

  // ---- commands -----------------------------------------------------------

  Outcome props_check(Options const& o, BasePtr const& B) {
    auto const& A    = B->algebra();
    auto const  mode = o.raw ? EvalMode::raw : EvalMode::classes;
    std::array<PropReport, 4> reps{check_S1(A), check_S2(A), check_S3(A, mode),
                                   check_S4(A, mode)};
    Outcome out;
    json    st = json::array();
    for (auto const& r : reps) {
      auto j              = io::to_json(r, B->group());
      j["witness_verifies"] = witness_verifies(A, r);
      out.ok              = out.ok && r.holds && j["witness_verifies"].get<bool>();
      st.push_back(j);
    }
    out.result = {{"evaluation", o.raw ? "raw" : "classes"}, {"statements", st}};
    return out;
  }

  Outcome norm_eval(Options const& o, BasePtr const& B) {
    std::optional<Mode> mode;
    if (o.truncated) {
      mode = Mode::truncated(*o.truncated);
    }
    auto g   = io::elem_from_json(io::parse(arg_text(require(o.element, "--element"))), B, mode);
    bool tr  = g.mode().is_truncated();
    auto nv  = tr ? norm_truncated(g) : norm_gz(g);
    auto geo = geodesic(g);
    auto bad = geodesic_violations(g, geo, nv);
    Outcome out;
    out.ok     = bad.empty();
    out.result = {{"element", io::to_json(g)}, {"norm", nv}};
    if (tr) {
      out.result["formula_mode"] = to_string(formula_mode(g.mode()));
    }
    if (o.show_geodesic) {
      out.result["geodesic"] = io::to_json(geo);
    }
    out.result["geodesic_verified"] = bad.empty();
    out.result["geodesic_violations"] = bad;
    return out;
  }

  Outcome norm_table(Options const& o, BasePtr const& B) {
    auto const& G = B->group_ptr();
    ElementSet  S;
    if (o.gens == "generators") {
      for (auto s : G->generators()) {
        S.push_back(s);
        S.push_back(G->inv(s));
      }
    } else if (o.gens.rfind("class:", 0) == 0) {
      auto c = conjugacy_classes(*G);
      auto k = std::stoul(o.gens.substr(6));
      if (k == 0 || k >= c.count()) {
        throw InvalidArgument("class index " + std::to_string(k) + " outside 1.."
                              + std::to_string(c.count() - 1));
      }
      S = conjugacy_closure(*G, c, c.classes[k]);
    } else {
      throw InvalidArgument("--gens must be 'generators' or 'class:<k>'");
    }
    S      = sorted_unique(S);
    auto t = word_norm_bfs(G, S);
    auto vn = validate_norm(t);
    auto vi = validate_invariance(t);
    Outcome out;
    out.ok = vn.ok;
    json gs = json::array();
    for (auto const& p : perms(*G, S)) {
      gs.push_back(io::perm_json(p));
    }
    out.result = {{"generating_set", gs},
                  {"table", io::to_json(t)},
                  {"validate_norm", io::to_json(vn)},
                  {"validate_invariance", io::to_json(vi)}};
    std::ostringstream csv;
    csv << "element,perm,value\n";
    for (Index g = 0; g < t.size(); ++g) {
      csv << g << ",\"" << G->element(g).to_string() << "\"," << to_string(t[g]) << "\n";
    }
    out.csv = csv.str();
    return out;
  }

  Outcome oracle_bfs(Options const& o, BasePtr const& B) {
    if (!o.window) {
      throw InvalidArgument("missing --window");
    }
    auto states = DenseCode(B->group().size(), *o.window).size();
    if (states > o.memory_cap) {
      throw CapExceeded("BFS needs one byte per state, " + std::to_string(states) + " bytes",
                        static_cast<std::size_t>(o.memory_cap));
    }
    auto r = bfs_norms(B, *o.window, BfsOptions{o.threads, o.state_cap});
    r.group = B->name();
    Outcome out;
    out.result = io::bfs_summary(r);
    bool complete = std::none_of(r.dist.begin(), r.dist.end(),
                                 [](auto d) { return d == BfsResult::unreached; });
    out.result["complete"] = complete;
    out.ok = complete;
    if (!o.out.empty()) {
      std::ofstream f(o.out, std::ios::binary);
      write_bfs_binary(f, r);
      if (!f) {
        throw InvalidArgument("cannot write " + o.out);
      }
      out.result["binary"] = o.out;
    }
    if (o.validate) {
      auto t  = to_norm_table(r, B);
      auto vn = validate_norm(t);
      auto vi = validate_invariance(t);
      out.result["validate_norm"]       = io::to_json(vn);
      out.result["validate_invariance"] = io::to_json(vi);
      out.ok = out.ok && vn.ok && vi.ok;
    }
    std::ostringstream csv;
    csv << "layer,size\n";
    for (std::size_t i = 0; i < r.layer_sizes.size(); ++i) {
      csv << i << "," << r.layer_sizes[i] << "\n";
    }
    out.csv = csv.str();
    return out;
  }

  Outcome decompose(Options const& o, BasePtr const& B) {
    auto h = io::elem_from_json(io::parse(arg_text(require(o.element, "--element"))), B);
    Outcome out;
    out.result["element"] = io::to_json(h);
    if (!o.witness.empty()) {
      auto w  = io::witness_from_json(io::parse(arg_text(o.witness)), B);
      out.ok  = verify_witness(h, w);
      out.result["witness"]  = io::to_json(w);
      out.result["verified"] = out.ok;
      return out;
    }
    auto kind = o.kind;
    if (kind == "auto") {
      kind = is_pm_commutator(h) ? "pm" : "2";
    }
    out.result["kind"] = kind;
    try {
      CommWitness w;
      if (kind == "pm") {
        w = build_pm_commutator(h);
      } else if (kind == "2" || kind == "-2") {
        w = build_2_commutator(h, kind == "2" ? 1 : -1);
      } else if (kind == "1" || kind == "-1") {
        auto d = build_pm1_decomposition(h, kind == "1" ? 1 : -1);
        out.result["residual"]         = io::to_json(d.residual);
        out.result["residual_index"]   = d.index;
        out.result["is_commutator"]    = d.trivial_residual();
        out.result["witness"]          = io::to_json(d.witness);
        out.ok = verify_witness(mul(h, inverse(d.residual)), d.witness);
        out.result["verified"] = out.ok;
        return out;
      } else {
        throw InvalidArgument("--kind must be one of 2, -2, 1, -1, pm, auto");
      }
      out.ok = verify_witness(h, w);
      out.result["exists"]   = true;
      out.result["witness"]  = io::to_json(w);
      out.result["verified"] = out.ok;
    } catch (NoSolution const& e) {
      out.ok                = false;
      out.result["exists"]  = false;
      out.result["reason"]  = e.what();
    }
    return out;
  }

  Outcome almost_hom_verify(Options const& o, BasePtr const& B) {
    auto Q = o.q.empty() ? std::vector<Rational>{0, 1, 2, 3, 4, 5} : thresholds(o);
    std::vector<std::vector<LampElem>> Ks;
    if (!o.k_list.empty()) {
      Ks.push_back(io::elems_from_json(io::parse(arg_text(o.k_list)), B, Mode::infinite()));
    } else {
      Rng rng(o.seed);
      std::uniform_int_distribution<int> size(1, 8);
      for (int r = 0; r < o.trials; ++r) {
        std::vector<LampElem> K;
        for (int i = size(rng); i > 0; --i) {
          K.push_back(random_elem(B, Mode::infinite(), rng, 4, -5, 5, 3));
        }
        Ks.push_back(std::move(K));
      }
    }
    Outcome out;
    json    reports = json::array();
    for (auto const& K : Ks) {
      if (K.empty()) {
        throw InvalidArgument("K is empty");
      }
      auto N   = o.N ? *o.N : max_N_value(K);
      auto rep = verify_KQ_almost_hom([&](LampElem const& g) { return phi(g, N); }, K, Q,
                                      norm_gz, norm_truncated);
      auto j   = io::to_json(rep);
      j["N"]      = N;
      j["window"] = 2 * N + 3;
      if (!o.k_list.empty()) {
        json imgs = json::array();
        for (auto const& g : K) {
          imgs.push_back({{"element", io::to_json(g)},
                          {"norm_gz", norm_gz(g)},
                          {"phi", io::to_json(phi(g, N))},
                          {"norm_truncated", norm_truncated(phi(g, N))}});
        }
        j["images"] = imgs;
      }
      out.ok = out.ok && rep.ok();
      reports.push_back(j);
    }
    json q = json::array();
    for (auto const& x : Q) {
      q.push_back(to_string(x));
    }
    out.result = {{"thresholds", q}, {"sets", Ks.size()}, {"reports", reports}};
    return out;
  }

  Outcome axioms_validate(Options const& o, BasePtr const& B) {
    auto const& G  = B->group_ptr();
    auto        th = theory_from_string(o.theory);
    Outcome     out;
    std::optional<WeightFn> f;
    if (!o.weights.empty()) {
      f = io::weight_fn_from_json(io::parse(arg_text(o.weights)), G);
    } else {
      auto t = io::norm_table_from_json(io::parse(arg_text(require(o.table, "--table or --weights"))), G);
      auto Q = o.q.empty() ? acceptance::detail::closed_thresholds(t) : thresholds(o);
      f      = from_norm(t, Q);
      auto vp = validate_pseudo_norm(t);
      auto vn = validate_norm(t);
      auto vi = validate_invariance(t);
      out.result["validate_pseudo_norm"] = io::to_json(vp);
      out.result["validate_norm"]        = io::to_json(vn);
      out.result["validate_invariance"]  = io::to_json(vi);
    }
    auto rep = check_axioms(*f, th);
    std::size_t unverified = 0;
    for (auto const& v : rep.violations) {
      unverified += !reverify(*f, v);
    }
    out.result["report"]                  = io::to_json(rep);
    out.result["violations_reverified"]   = unverified == 0;
    out.ok = rep.ok;
    return out;
  }

  Outcome selftest(Options const& o) {
    if (o.scale != "quick" && o.scale != "full") {
      throw InvalidArgument("selftest scale must be quick or full");
    }
    acceptance::Config cfg;
    cfg.scale   = o.scale == "quick" ? acceptance::Scale::quick : acceptance::Scale::full;
    cfg.seed    = o.seed;
    cfg.threads = o.threads;
    Outcome out;
    json    cs = json::array();
    acceptance::detail::Timer clock;
    for (auto const& c : acceptance::run(cfg)) {
      bool in_budget = o.time_budget <= 0 || clock.seconds() <= o.time_budget;
      bool pass      = c.pass && in_budget;
      out.ok         = out.ok && pass;
      cs.push_back({{"id", c.id},
                    {"name", c.name},
                    {"pass", pass},
                    {"seconds", c.seconds},
                    {"detail", c.detail}});
    }
    out.result = {{"scale", o.scale}, {"criteria", cs}};
    return out;
  }

  json error_json(std::string const& type, std::string const& message) {
    return {{"ok", false}, {"error", {{"type", type}, {"message", message}}}};
  }

  // Keeps the config and group hash when they were already recorded.
  int fail(json& doc, std::string const& type, std::string const& message) {
    if (doc.is_object()) {
      doc.erase("result");
    } else {
      doc = json::object();
    }
    doc["ok"]    = false;
    doc["error"] = {{"type", type}, {"message", message}};
    return 2;
  }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mlef: lamplighter norms, commutator witnesses and almost-homomorphism checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;

  app.add_option("--group", o.group, "built-in group (A5, A4, S4, S3, Z2, Z3, Z4) or generator JSON")
      ->capture_default_str();
  app.add_option("--seed", o.seed, "seed for every randomized selection")->capture_default_str();
  app.add_option("--out", o.out, "output path (oracle bfs: the binary table)");
  app.add_option("--format", o.format, "json or csv (csv only for flat tables)")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--threads", o.threads, "worker cap")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--state-cap", o.state_cap, "maximal BFS state count")
      ->envname("MLEF_STATE_CAP")
      ->capture_default_str();
  app.add_option("--memory-cap", o.memory_cap, "maximal BFS table size in bytes")
      ->envname("MLEF_MEMORY_CAP")
      ->capture_default_str();
  app.add_option("--time-budget", o.time_budget, "selftest wall-clock budget in seconds (0: none)")
      ->envname("MLEF_TIME_BUDGET")
      ->capture_default_str();

  auto* props = app.add_subcommand("props", "simple properties S1-S4 of the base group");
  auto* props_check_cmd = props->add_subcommand("check", "evaluate S1-S4 with witnesses");
  props_check_cmd->add_flag("--raw", o.raw, "evaluate S3 and S4 over raw tuples");
  props->require_subcommand(1);

  auto* norm = app.add_subcommand("norm", "word norms");
  norm->require_subcommand(1);
  auto* eval = norm->add_subcommand("eval", "closed-form norm of a lamplighter element");
  eval->add_option("--element", o.element, "element JSON or @file")->required();
  eval->add_option("--truncated", o.truncated, "evaluate in G_[-n,n]");
  eval->add_flag("--geodesic", o.show_geodesic, "include a geodesic word");
  auto* table = norm->add_subcommand("table", "word norm table of the base group");
  table->add_option("--gens", o.gens, "generators | class:<k> (conjugacy closure)")
      ->capture_default_str();

  auto* oracle = app.add_subcommand("oracle", "exhaustive oracles");
  oracle->require_subcommand(1);
  auto* bfs = oracle->add_subcommand("bfs", "BFS word norms on G_[-n,n]");
  bfs->add_option("--window", o.window, "n")->required();
  bfs->add_flag("--validate", o.validate, "run the norm and invariance validators");

  auto* dec = app.add_subcommand("decompose", "commutator witnesses for a shift-0 element");
  dec->add_option("--element", o.element, "element JSON or @file")->required();
  dec->add_option("--kind", o.kind, "2, -2, 1, -1, pm or auto")->capture_default_str();
  dec->add_option("--witness", o.witness, "verify this witness JSON instead of building one");

  auto* ah = app.add_subcommand("almost-hom", "K-Q-almost-homomorphism checks");
  ah->require_subcommand(1);
  auto* ahv = ah->add_subcommand("verify", "check phi on K (given or seeded random)");
  ahv->add_option("--k", o.k_list, "JSON list of G_Z elements or @file");
  ahv->add_option("--q", o.q, "thresholds (default 0..5)")->delimiter(',');
  ahv->add_option("--N", o.N, "window parameter (default: max N-value over K)");
  ahv->add_option("--trials", o.trials, "random K sets when --k is absent")->capture_default_str();

  auto* ax = app.add_subcommand("axioms", "first-order axiom schemas");
  ax->require_subcommand(1);
  auto* axv = ax->add_subcommand("validate", "evaluate T_W, T_IPMG or T_IMG");
  axv->add_option("--theory", o.theory, "T_W, T_IPMG or T_IMG")
      ->check(CLI::IsMember({"T_W", "T_IPMG", "T_IMG"}))
      ->capture_default_str();
  axv->add_option("--weights", o.weights, "weight function JSON or @file");
  axv->add_option("--table", o.table, "norm table JSON or @file (converted with --q)");
  axv->add_option("--q", o.q, "thresholds (default: range and pairwise sums)")->delimiter(',');

  auto* st = app.add_subcommand("selftest", "acceptance suite");
  st->add_option("scale", o.scale, "quick or full")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);
  } catch (CLI::CallForAllHelp const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    std::cout << error_json("usage", e.what()).dump(2) << "\n";
    return 2;
  }

  std::string command;
  for (auto* sub = app.get_subcommands().front(); sub;) {
    command += (command.empty() ? "" : " ") + sub->get_name();
    auto subs = sub->get_subcommands();
    sub       = subs.empty() ? nullptr : subs.front();
  }

  json doc;
  int  code = 0;
  Outcome out;
  try {
    auto B = io::base_from_text(arg_text(o.group));
    doc    = {{"config", config_json(o, command, B)}, {"group_hash", io::group_hash(B->group())}};
    if (command == "props check") {
      out = props_check(o, B);
    } else if (command == "norm eval") {
      out = norm_eval(o, B);
    } else if (command == "norm table") {
      out = norm_table(o, B);
    } else if (command == "oracle bfs") {
      out = oracle_bfs(o, B);
    } else if (command == "decompose") {
      out = decompose(o, B);
    } else if (command == "almost-hom verify") {
      out = almost_hom_verify(o, B);
    } else if (command == "axioms validate") {
      out = axioms_validate(o, B);
    } else if (command == "selftest") {
      out = selftest(o);
    } else {
      throw InvalidArgument("incomplete command '" + command + "'");
    }
    if (o.format == "csv" && out.csv.empty()) {
      throw InvalidArgument("csv output is only available for norm table and oracle bfs");
    }
    doc["ok"]     = out.ok;
    doc["result"] = out.result;
    code          = out.ok ? 0 : 1;
  } catch (io::ParseError const& e) {
    code = fail(doc, "parse_error", e.what());
    doc["error"]["position"] = e.position();
  } catch (CapExceeded const& e) {
    code = fail(doc, "cap_exceeded", e.what());
    doc["error"]["cap"] = e.cap();
  } catch (UnsupportedBase const& e) {
    code = fail(doc, "unsupported_base", e.what());
  } catch (NoSolution const& e) {
    code = fail(doc, "no_solution", e.what());
  } catch (std::exception const& e) {
    code = fail(doc, "invalid_argument", e.what());
  }

  std::string text = code != 2 && o.format == "csv" ? out.csv : doc.dump(2) + "\n";
  bool to_file = !o.out.empty() && command != "oracle bfs";
  if (to_file) {
    std::ofstream f(o.out, std::ios::binary);
    f << text;
    if (!f) {
      std::cout << error_json("io_error", "cannot write " + o.out).dump(2) << "\n";
      return 2;
    }
  } else {
    std::cout << text;
  }
  return code;
}
