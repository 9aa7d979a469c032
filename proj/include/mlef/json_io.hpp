#pragma once

#include <cstdint>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <openssl/evp.h>

#include <mlef/commutators.hpp>
#include <mlef/errors.hpp>
#include <mlef/fo_axioms.hpp>
#include <mlef/gz_norm.hpp>
#include <mlef/lamplighter.hpp>
#include <mlef/norm_table.hpp>
#include <mlef/oracle.hpp>
#include <mlef/simple_props.hpp>

namespace mlef::io {

  using json = nlohmann::ordered_json;

  // Parses text, turning syntax errors into InvalidArgument carrying the byte
  // offset.
  class ParseError : public InvalidArgument {
   public:
    ParseError(std::string const& what, std::size_t position)
        : InvalidArgument(what), position_(position) {}

    std::size_t position() const noexcept {
      return position_;
    }

   private:
    std::size_t position_;
  };

  inline json parse(std::string const& text) {
    try {
      return json::parse(text);
    } catch (nlohmann::json::parse_error const& e) {
      throw ParseError(e.what(), e.byte);
    }
  }

  namespace detail {

    [[noreturn]] inline void bad(std::string const& what) {
      throw InvalidArgument(what);
    }

    template <class T>
    T get(json const& j, char const* what) {
      try {
        return j.get<T>();
      } catch (nlohmann::json::exception const&) {
        bad(std::string("malformed ") + what + ": " + j.dump());
      }
    }

  }  // namespace detail

  // ---- rationals ----------------------------------------------------------

  inline json to_json(Rational const& r) {
    return to_string(r);
  }

  inline Rational rational_from_json(json const& j) {
    if (j.is_number_integer()) {
      return Rational(j.get<std::int64_t>());
    }
    if (j.is_string()) {
      return parse_rational(j.get<std::string>());
    }
    detail::bad("expected an integer or a \"p/q\" string, got " + j.dump());
  }

  inline std::vector<Rational> rationals_from_json(json const& j) {
    if (!j.is_array()) {
      detail::bad("expected an array of rationals, got " + j.dump());
    }
    std::vector<Rational> out;
    for (auto const& x : j) {
      out.push_back(rational_from_json(x));
    }
    return out;
  }

  // ---- groups -------------------------------------------------------------

  inline json perm_json(Perm const& p) {
    return p.images();
  }

  inline Perm perm_from_json(json const& j, std::size_t degree) {
    auto images = detail::get<std::vector<Perm::point_type>>(j, "permutation");
    if (images.size() != degree) {
      detail::bad("permutation " + j.dump() + " has degree " + std::to_string(images.size())
                  + ", expected " + std::to_string(degree));
    }
    return Perm(std::move(images));
  }

  // {"degree": n, "generators": [[images...], ...]}
  inline json group_spec_json(FiniteGroup const& G) {
    json gens = json::array();
    for (auto const& p : G.generator_perms()) {
      gens.push_back(perm_json(p));
    }
    return {{"degree", G.degree()}, {"generators", gens}};
  }

  inline std::string sha256_hex(std::string const& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int  len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("sha256 failed");
    }
    std::ostringstream os;
    for (unsigned i = 0; i < len; ++i) {
      os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    }
    return os.str();
  }

  // Content hash over the canonical generator spec, so a built-in name and
  // its explicit generators hash alike.
  inline std::string group_hash(FiniteGroup const& G) {
    return "sha256:" + sha256_hex(group_spec_json(G).dump());
  }

  // A built-in name or a generator spec.
  inline BasePtr base_from_json(json const& j) {
    if (j.is_string()) {
      return builtin_base(j.get<std::string>());
    }
    if (!j.is_object() || !j.contains("degree") || !j.contains("generators")) {
      detail::bad("group spec needs \"degree\" and \"generators\": " + j.dump());
    }
    auto degree = detail::get<std::size_t>(j["degree"], "degree");
    std::vector<Perm> gens;
    for (auto const& g : j["generators"]) {
      gens.push_back(perm_from_json(g, degree));
    }
    if (gens.empty()) {
      gens.push_back(Perm::identity(degree));
    }
    return make_base(generate_group(gens), j.contains("name") ? j["name"].get<std::string>()
                                                              : std::string("custom"));
  }

  // Accepts a built-in name or literal JSON.
  inline BasePtr base_from_text(std::string const& text) {
    auto trimmed = text.find_first_not_of(" \t\n");
    if (trimmed != std::string::npos && text[trimmed] == '{') {
      return base_from_json(parse(text));
    }
    return builtin_base(text);
  }

  // ---- lamplighter elements -----------------------------------------------

  inline json mode_json(Mode const& m) {
    if (m.is_truncated()) {
      return {{"truncated", *m.n}};
    }
    return "infinite";
  }

  inline Mode mode_from_json(json const& j) {
    if (j.is_string() && j.get<std::string>() == "infinite") {
      return Mode::infinite();
    }
    if (j.is_object() && j.contains("truncated")) {
      return Mode::truncated(detail::get<std::int64_t>(j["truncated"], "window"));
    }
    detail::bad("mode must be \"infinite\" or {\"truncated\": n}, got " + j.dump());
  }

  inline json to_json(LampElem const& g) {
    json support = json::object();
    for (auto const& [i, v] : g.support()) {
      support[std::to_string(i)] = perm_json(g.P().element(v));
    }
    return {{"mode", mode_json(g.mode())}, {"shift", g.shift()}, {"support", support}};
  }

  // Support values are image lists or element indices.  A missing mode is
  // infinite unless `mode_override` is given, which always wins.
  inline LampElem elem_from_json(json const& j, BasePtr const& base,
                                 std::optional<Mode> mode_override = {}) {
    if (!j.is_object()) {
      detail::bad("element must be an object, got " + j.dump());
    }
    auto mode  = mode_override ? *mode_override
                 : j.contains("mode") ? mode_from_json(j["mode"])
                                      : Mode::infinite();
    auto shift = j.contains("shift") ? detail::get<std::int64_t>(j["shift"], "shift") : 0;
    auto const& P = base->group();
    std::vector<LampElem::Entry> support;
    if (j.contains("support")) {
      if (!j["support"].is_object()) {
        detail::bad("support must be an object keyed by index, got " + j["support"].dump());
      }
      for (auto const& [key, val] : j["support"].items()) {
        std::int64_t idx = 0;
        try {
          std::size_t used = 0;
          idx = std::stoll(key, &used);
          if (used != key.size()) {
            throw std::invalid_argument(key);
          }
        } catch (std::exception const&) {
          detail::bad("support key '" + key + "' is not an integer");
        }
        Index v = 0;
        if (val.is_number_unsigned()) {
          v = val.get<Index>();
          if (v >= P.size()) {
            detail::bad("element index " + val.dump() + " out of range");
          }
        } else {
          auto p  = perm_from_json(val, P.degree());
          auto at = P.index_of(p);
          if (!at) {
            detail::bad("permutation " + val.dump() + " is not in the base group");
          }
          v = *at;
        }
        support.emplace_back(mode.reduce(idx), v);
      }
    }
    return LampElem(base, mode, std::move(support), shift);
  }

  inline std::vector<LampElem> elems_from_json(json const& j, BasePtr const& base,
                                               std::optional<Mode> mode_override = {}) {
    if (!j.is_array()) {
      detail::bad("expected an array of elements, got " + j.dump());
    }
    std::vector<LampElem> out;
    for (auto const& e : j) {
      out.push_back(elem_from_json(e, base, mode_override));
    }
    return out;
  }

  // ---- witnesses and geodesics --------------------------------------------

  inline json to_json(CommWitness const& w) {
    json kind = w.is_pm() ? json{{"pm", to_string(w.order)}} : json{{"k", w.k}};
    json vs   = json::array();
    for (auto const& v : w.vectors) {
      vs.push_back(to_json(v));
    }
    return {{"kind", kind}, {"vectors", vs}};
  }

  inline CommWitness witness_from_json(json const& j, BasePtr const& base) {
    if (!j.is_object() || !j.contains("kind") || !j.contains("vectors")) {
      detail::bad("witness needs \"kind\" and \"vectors\": " + j.dump());
    }
    CommWitness w;
    auto const& kind = j["kind"];
    if (kind.contains("k")) {
      w.k = detail::get<std::int64_t>(kind["k"], "k");
      if (w.k == 0) {
        detail::bad("witness kind k must be nonzero; use {\"pm\": ...}");
      }
    } else if (kind.contains("pm")) {
      auto o = detail::get<std::string>(kind["pm"], "pm order");
      if (o != "+-" && o != "-+") {
        detail::bad("pm order must be \"+-\" or \"-+\", got " + o);
      }
      w.order = o == "+-" ? PmOrder::plus_minus : PmOrder::minus_plus;
    } else {
      detail::bad("witness kind must be {\"k\": k} or {\"pm\": order}: " + kind.dump());
    }
    w.vectors = elems_from_json(j["vectors"], base);
    return w;
  }

  inline json to_json(Geodesic const& g) {
    json fs = json::array();
    for (auto const& f : g.factors) {
      fs.push_back(to_json(f));
    }
    return {{"length", g.length()}, {"factors", fs}};
  }

  // ---- norm tables and validation -----------------------------------------

  template <EnumeratedGroup G>
  json to_json(BasicNormTable<G> const& t) {
    json a = json::array();
    for (std::size_t x = 0; x < t.size(); ++x) {
      a.push_back({{"element", x},
                   {"value", to_string(t[static_cast<typename G::index_type>(x)])}});
    }
    return a;
  }

  // Every element must appear exactly once.
  inline NormTable norm_table_from_json(json const& j, GroupPtr const& G) {
    if (!j.is_array()) {
      detail::bad("norm table must be an array of {\"element\", \"value\"}");
    }
    std::vector<std::optional<Rational>> vals(G->size());
    for (auto const& row : j) {
      if (!row.is_object() || !row.contains("element") || !row.contains("value")) {
        detail::bad("malformed norm table row " + row.dump());
      }
      auto x = detail::get<std::size_t>(row["element"], "element index");
      if (x >= G->size()) {
        detail::bad("element index " + std::to_string(x) + " out of range");
      }
      if (vals[x]) {
        detail::bad("element " + std::to_string(x) + " listed twice");
      }
      vals[x] = rational_from_json(row["value"]);
    }
    std::vector<Rational> v;
    for (std::size_t x = 0; x < vals.size(); ++x) {
      if (!vals[x]) {
        detail::bad("norm table misses element " + std::to_string(x));
      }
      v.push_back(*vals[x]);
    }
    return NormTable(G, std::move(v));
  }

  inline json to_json(ValidationReport const& r) {
    json vs = json::array();
    for (auto const& v : r.violations) {
      json vals = json::array();
      for (auto const& x : v.values) {
        vals.push_back(to_string(x));
      }
      vs.push_back({{"axiom", v.axiom}, {"elements", v.elements}, {"values", vals}});
    }
    json counts = json::object();
    for (auto const& [k, n] : r.violation_counts) {
      counts[k] = n;
    }
    return {{"ok", r.ok}, {"violation_counts", counts}, {"violations", vs},
            {"notices", r.notices}};
  }

  // ---- simple properties --------------------------------------------------

  inline json to_json(PropReport const& r, FiniteGroup const& P) {
    json w = json::array();
    for (auto i : r.witness) {
      w.push_back(perm_json(P.element(i)));
    }
    return {{"id", to_string(r.id)}, {"holds", r.holds}, {"witness", w}};
  }

  // ---- almost-homomorphism ------------------------------------------------

  inline json to_json(AlmostHomReport const& r) {
    std::size_t agree = 0;
    json        disagreements = json::array();
    for (auto const& a : r.norm_agreements) {
      if (a.agrees()) {
        ++agree;
      } else {
        disagreements.push_back({{"element", a.element},
                                 {"q", to_string(a.q)},
                                 {"source", std::string(1, to_char(a.source))},
                                 {"target", std::string(1, to_char(a.target))}});
      }
    }
    return {{"ok", r.ok()},
            {"injective_on_K", r.injective_on_K},
            {"multiplicative_triples_ok", r.multiplicative_triples_ok},
            {"triples_checked", r.triples_checked},
            {"norm_comparisons", r.norm_agreements.size()},
            {"norm_agreements", agree},
            {"norm_disagreements", disagreements},
            {"failures", r.failures}};
  }

  // ---- BFS ----------------------------------------------------------------

  // Summary only; the per-state bytes go to the binary format.  Wall time is
  // omitted when `timing` is false so reports stay byte-stable.
  inline json bfs_summary(BfsResult const& r, bool timing = true) {
    json j = {{"group", r.group},
              {"order", r.order},
              {"n", r.n},
              {"states", r.dist.size()},
              {"generators", r.generators},
              {"layer_sizes", r.layer_sizes},
              {"diameter", r.diameter()}};
    if (timing) {
      j["threads"]      = r.threads;
      j["wall_seconds"] = r.wall_seconds;
    }
    return j;
  }

  // ---- weight functions and axiom reports ---------------------------------

  inline json to_json(WeightFn const& f) {
    json q = json::array();
    for (auto const& x : f.thresholds()) {
      q.push_back(to_string(x));
    }
    json rows = json::object();
    for (Index g = 0; g < f.group().size(); ++g) {
      json row = json::array();
      for (std::size_t i = 0; i < f.thresholds().size(); ++i) {
        row.push_back(std::string(1, to_char(f.at(g, i))));
      }
      rows[std::to_string(g)] = row;
    }
    return {{"thresholds", q}, {"rows", rows}};
  }

  inline WeightFn weight_fn_from_json(json const& j, GroupPtr const& G) {
    if (!j.is_object() || !j.contains("thresholds") || !j.contains("rows")) {
      detail::bad("weight function needs \"thresholds\" and \"rows\"");
    }
    auto Q = rationals_from_json(j["thresholds"]);
    std::vector<Sign>  table(G->size() * Q.size(), Sign::greater);
    std::vector<bool>  seen(G->size(), false);
    for (auto const& [key, row] : j["rows"].items()) {
      std::size_t g = 0;
      try {
        g = std::stoul(key);
      } catch (std::exception const&) {
        detail::bad("row key '" + key + "' is not an element index");
      }
      if (g >= G->size()) {
        detail::bad("row key " + key + " out of range");
      }
      if (!row.is_array() || row.size() != Q.size()) {
        detail::bad("row " + key + " must have one sign per threshold");
      }
      seen[g] = true;
      for (std::size_t i = 0; i < Q.size(); ++i) {
        auto s = detail::get<std::string>(row[i], "sign");
        if (s.size() != 1) {
          detail::bad("sign must be one of <, =, >; got " + s);
        }
        table[g * Q.size() + i] = sign_from_char(s[0]);
      }
    }
    for (std::size_t g = 0; g < seen.size(); ++g) {
      if (!seen[g]) {
        detail::bad("weight function misses row " + std::to_string(g));
      }
    }
    return WeightFn(G, std::move(Q), std::move(table));
  }

  inline json to_json(AxiomReport const& r) {
    json vs = json::array();
    for (auto const& v : r.violations) {
      json q = json::array();
      for (auto const& x : v.thresholds) {
        q.push_back(to_string(x));
      }
      vs.push_back({{"axiom", v.axiom}, {"elements", v.elements}, {"thresholds", q}});
    }
    json counts = json::object(), inst = json::object();
    for (auto const& [k, n] : r.violation_counts) {
      counts[k] = n;
    }
    for (auto const& [k, n] : r.instances) {
      inst[k] = n;
    }
    return {{"theory", to_string(r.theory)},
            {"ok", r.ok},
            {"instances", inst},
            {"vacuous_triangle", r.vacuous_triangle},
            {"violation_counts", counts},
            {"violations", vs},
            {"notices", r.notices}};
  }

}  // namespace mlef::io
