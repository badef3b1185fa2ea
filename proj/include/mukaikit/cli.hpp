#pragma once

// Config-driven command-line front end. Every subcommand builds one JSON
// document (sorted keys, rationals as "p/q" strings) and an equivalent text
// rendering.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mukaikit/mukaikit.hpp"

namespace mukaikit::cli {

using json = nlohmann::json;

constexpr int schema_version = 1;

enum exit_code : int { ok = 0, internal_error = 1, validation_error = 2, hypothesis_failed = 3, unknown_command = 64 };

// ---------------------------------------------------------------------------
// JSON encoding of library values

inline json encode(const Integer &x) {
  if (x.fits_slong_p()) return x.get_si();
  return x.get_str();
}

inline json encode(const Rational &x) { return x.get_str(); }

inline json encode(const LatticeVector &x) {
  json a = json::array();
  for (const auto &c : x.coords()) a.push_back(encode(c));
  return a;
}

inline json encode_integral(const LatticeVector &x) {
  json a = json::array();
  for (const auto &c : x.integer_coords()) a.push_back(encode(c));
  return a;
}

inline json encode(const MukaiVector &v) { return {{"v0", encode(v.v0())}, {"v1", encode(v.v1())}, {"v2", encode(v.v2())}}; }

inline json encode(const Signature &s) { return {{"positive", s.positive}, {"zero", s.zero}, {"negative", s.negative}}; }

inline json encode(const IntMatrix &m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(encode(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json encode(const RatMatrix &m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(encode(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json encode(const std::vector<Integer> &xs) {
  json a = json::array();
  for (const auto &x : xs) a.push_back(encode(x));
  return a;
}

inline json encode(const Wall &w) {
  return {{"d", encode_integral(w.d)}, {"d_square", encode(w.d_square)}, {"bound", encode(w.bound)}};
}

inline json encode(const H11Class &x) { return {{"ns", encode(x.ns_part)}, {"t", encode(x.t_part)}}; }

inline std::string show(const Signature &s) {
  return "(" + std::to_string(s.positive) + "," + std::to_string(s.zero) + "," + std::to_string(s.negative) + ")";
}

inline std::string show(const MukaiVector &v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// ---------------------------------------------------------------------------
// Config

/// A parsed config. Sections are optional; subcommands demand what they use.
struct Config {
  std::optional<K3Model> model;
  std::optional<MukaiVector> mukai;
  std::optional<H11Class> omega;
  std::optional<H11Class> omega_prime;
  std::optional<TwistData> twist;
  std::optional<TwistedSheafData> sheaf;
  std::optional<IntMatrix> embedding;
  std::optional<std::array<Integer, 3>> existence;
};

namespace detail {

[[noreturn]] inline void fail(const std::string &path, const std::string &what) {
  throw invalid_input("config: " + path + ": " + what);
}

inline Rational read_rational(const json &j, const std::string &path) {
  if (j.is_number_integer()) return j.is_number_unsigned() ? Rational(Integer(j.get<unsigned long>())) : Rational(Integer(j.get<long>()));
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const invalid_input &) {
      fail(path, "not a rational \"" + j.get<std::string>() + "\"");
    }
  }
  if (j.is_number_float()) fail(path, "floating-point values are not accepted; use an integer or a \"p/q\" string");
  fail(path, "expected an integer or a \"p/q\" string");
}

inline Integer read_integer(const json &j, const std::string &path) {
  Rational q = read_rational(j, path);
  if (!is_integer(q)) fail(path, "expected an integer, got " + q.get_str());
  return q.get_num();
}

inline std::vector<Rational> read_rational_vector(const json &j, const std::string &path, std::size_t expected) {
  if (!j.is_array()) fail(path, "expected an array");
  if (j.size() != expected)
    fail(path, "expected " + std::to_string(expected) + " entries, got " + std::to_string(j.size()));
  std::vector<Rational> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_rational(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline IntMatrix read_matrix(const json &j, const std::string &path, std::optional<std::size_t> rows,
                             std::optional<std::size_t> cols) {
  if (!j.is_array()) fail(path, "expected an array of rows");
  if (rows && j.size() != *rows) fail(path, "expected " + std::to_string(*rows) + " rows, got " + std::to_string(j.size()));
  std::size_t width = cols ? *cols : (j.empty() ? 0 : j[0].size());
  IntMatrix m(j.size(), width);
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::string rp = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_array()) fail(rp, "expected an array");
    if (j[i].size() != width)
      fail(rp, "expected " + std::to_string(width) + " entries, got " + std::to_string(j[i].size()));
    for (std::size_t k = 0; k < width; ++k) m(i, k) = read_integer(j[i][k], rp + "[" + std::to_string(k) + "]");
  }
  return m;
}

inline void check_keys(const json &j, const std::string &path, std::initializer_list<const char *> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto &item : j.items()) {
    bool known = false;
    for (const char *a : allowed) known = known || item.key() == a;
    if (!known) fail(path, "unknown key \"" + item.key() + "\"");
  }
}

inline const json &member(const json &j, const std::string &path, const char *key) {
  if (!j.contains(key)) fail(path, "missing key \"" + std::string(key) + "\"");
  return j.at(key);
}

inline LatticePtr read_gram(const json &j, const std::string &path) {
  IntMatrix g = read_matrix(j, path, std::nullopt, std::nullopt);
  if (!g.is_symmetric()) fail(path, "Gram matrix must be square and symmetric");
  return make_lattice(std::move(g));
}

/// An H^{1,1} class given as {"ns": [...], "t": [...]} or as one flat array.
inline H11Class read_class(const json &j, const std::string &path, const LatticePtr &ns, const LatticePtr &t) {
  if (j.is_array()) {
    auto all = read_rational_vector(j, path, ns->rank() + t->rank());
    std::vector<Rational> a(all.begin(), all.begin() + static_cast<long>(ns->rank()));
    std::vector<Rational> b(all.begin() + static_cast<long>(ns->rank()), all.end());
    return {LatticeVector(ns, a), LatticeVector(t, b)};
  }
  check_keys(j, path, {"ns", "t"});
  auto a = read_rational_vector(member(j, path, "ns"), path + ".ns", ns->rank());
  std::vector<Rational> b(t->rank());
  if (j.contains("t")) b = read_rational_vector(j.at("t"), path + ".t", t->rank());
  return {LatticeVector(ns, a), LatticeVector(t, b)};
}

inline LatticeVector read_ns_vector(const json &j, const std::string &path, const LatticePtr &ns) {
  return {ns, read_rational_vector(j, path, ns->rank())};
}

template <class F> auto rethrow_at(const std::string &path, F &&f) -> decltype(f()) {
  try {
    return f();
  } catch (const hypothesis_violation &) {
    throw;
  } catch (const invalid_input &e) {
    std::string msg = e.what();
    if (msg.rfind("config: ", 0) == 0) throw;
    fail(path, msg);
  }
}

} // namespace detail

inline Config parse_config(const json &root) {
  using namespace detail;
  check_keys(root, "<root>",
             {"description", "surface", "mukai", "omega", "omega_prime", "twist", "sheaf", "embedding", "existence"});
  Config cfg;
  LatticePtr ns, t;
  if (root.contains("surface")) {
    const json &s = root.at("surface");
    check_keys(s, "surface", {"ns_gram", "t11_gram", "curve_classes", "reference_positive"});
    ns = read_gram(member(s, "surface", "ns_gram"), "surface.ns_gram");
    t = s.contains("t11_gram") ? read_gram(s.at("t11_gram"), "surface.t11_gram") : make_lattice(IntMatrix(0, 0), "0");
    std::vector<LatticeVector> curves;
    if (s.contains("curve_classes")) {
      const json &c = s.at("curve_classes");
      if (!c.is_array()) fail("surface.curve_classes", "expected an array of vectors");
      for (std::size_t i = 0; i < c.size(); ++i)
        curves.push_back(read_ns_vector(c[i], "surface.curve_classes[" + std::to_string(i) + "]", ns));
    }
    H11Class ref = read_class(member(s, "surface", "reference_positive"), "surface.reference_positive", ns, t);
    cfg.model = rethrow_at("surface", [&] { return K3Model(ns, t, curves, ref); });
  }
  auto need_surface = [&](const char *section) {
    if (!cfg.model) fail(section, "needs the \"surface\" section");
  };
  if (root.contains("mukai")) {
    need_surface("mukai");
    const json &m = root.at("mukai");
    check_keys(m, "mukai", {"r", "xi", "a"});
    cfg.mukai = MukaiVector(read_rational(member(m, "mukai", "r"), "mukai.r"),
                            read_ns_vector(member(m, "mukai", "xi"), "mukai.xi", ns),
                            read_rational(member(m, "mukai", "a"), "mukai.a"));
  }
  if (root.contains("omega")) {
    need_surface("omega");
    cfg.omega = read_class(root.at("omega"), "omega", ns, t);
  }
  if (root.contains("omega_prime")) {
    need_surface("omega_prime");
    cfg.omega_prime = read_class(root.at("omega_prime"), "omega_prime", ns, t);
  }
  if (root.contains("twist")) {
    need_surface("twist");
    const json &tw = root.at("twist");
    check_keys(tw, "twist", {"s", "b", "b_field"});
    Integer s = read_integer(member(tw, "twist", "s"), "twist.s");
    if (s < 1) fail("twist.s", "rank of the twisting bundle must be >= 1");
    std::optional<LatticeVector> bf;
    if (tw.contains("b_field")) bf = read_ns_vector(tw.at("b_field"), "twist.b_field", ns);
    cfg.twist = TwistData(s, read_rational(member(tw, "twist", "b"), "twist.b"), bf);
  }
  if (root.contains("sheaf")) {
    need_surface("sheaf");
    const json &sh = root.at("sheaf");
    check_keys(sh, "sheaf", {"r", "xi", "a"});
    Integer r = read_integer(member(sh, "sheaf", "r"), "sheaf.r");
    if (r < 1) fail("sheaf.r", "rank must be >= 1");
    cfg.sheaf = TwistedSheafData{r, read_ns_vector(member(sh, "sheaf", "xi"), "sheaf.xi", ns),
                                 read_rational(member(sh, "sheaf", "a"), "sheaf.a")};
  }
  if (root.contains("embedding")) {
    need_surface("embedding");
    cfg.embedding = read_matrix(root.at("embedding"), "embedding", ns->rank(), k3_rank);
  }
  if (root.contains("existence")) {
    const json &e = root.at("existence");
    check_keys(e, "existence", {"r", "d", "g"});
    cfg.existence = std::array<Integer, 3>{read_integer(member(e, "existence", "r"), "existence.r"),
                                           read_integer(member(e, "existence", "d"), "existence.d"),
                                           read_integer(member(e, "existence", "g"), "existence.g")};
  }
  return cfg;
}

inline Config load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("config: cannot open " + path);
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error &e) {
    throw invalid_input("config: " + path + ": malformed JSON: " + e.what());
  }
  return parse_config(root);
}

// ---------------------------------------------------------------------------
// Reports

/// Ordered text lines alongside the JSON document.
class Report {
public:
  explicit Report(const std::string &command) {
    doc_["schema_version"] = schema_version;
    doc_["command"] = command;
  }

  void put(const std::string &key, json value, std::optional<std::string> text = std::nullopt) {
    lines_.push_back(key + ": " + (text ? *text : render(value)));
    doc_[key] = std::move(value);
  }

  /// JSON-only field.
  void attach(const std::string &key, json value) { doc_[key] = std::move(value); }
  void note(const std::string &line) { lines_.push_back(line); }

  const json &doc() const { return doc_; }

  std::string text() const {
    std::string out;
    for (const auto &l : lines_) out += l + "\n";
    return out;
  }

  static std::string render(const json &v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "n/a";
    if (v.is_array()) {
      std::string s = "[";
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + render(v[i]);
      return s + "]";
    }
    if (v.is_object()) {
      std::string s = "{";
      bool first = true;
      for (const auto &item : v.items()) {
        s += (first ? "" : ", ") + item.key() + ": " + render(item.value());
        first = false;
      }
      return s + "}";
    }
    return v.dump();
  }

private:
  json doc_ = json::object();
  std::vector<std::string> lines_;
};

/// Canonical serialization: sorted keys, two-space indent, trailing newline.
inline std::string dump_canonical(const json &j) { return j.dump(2) + "\n"; }

struct Options {
  std::string config_path;
  std::string format = "text";
  unsigned threads = 1;
  std::optional<long> r, d, g;
};

struct Outcome {
  Report report;
  int code = ok;
};

namespace detail {

template <class T> const T &need(const std::optional<T> &x, const char *section, const std::string &command) {
  if (!x) throw invalid_input("config: section \"" + std::string(section) + "\" is required by " + command);
  return *x;
}

inline Config config_for(const Options &o, const std::string &command) {
  if (o.config_path.empty()) throw invalid_input(command + " needs --config <path>");
  return load_config(o.config_path);
}

inline void put_mukai(Report &rep, const MukaiVector &v) { rep.put("v", encode(v), show(v)); }

inline std::optional<std::string> gcd_note(const MukaiVector &v) {
  if (!v.is_integral() || v.v0() < 1 || v.v1().is_zero()) return std::nullopt;
  if (gcd(v.v0().get_num(), content(v.v1())) != 1) return "gcd(r, content(xi)) != 1";
  return std::nullopt;
}

} // namespace detail

inline Outcome cmd_pairing(const Options &o) {
  auto cfg = detail::config_for(o, "pairing");
  const auto &v = detail::need(cfg.mukai, "mukai", "pairing");
  Report rep("pairing");
  detail::put_mukai(rep, v);
  rep.put("v_square", encode(mukai_square(v)));
  rep.put("chern_character", encode(chern_character(v)), show(chern_character(v)));
  if (v.v0() != 0) {
    rep.put("discriminant", encode(discriminant(v)));
    rep.put("bogomolov", bogomolov_satisfied(v));
    rep.put("wall_bound", encode(wall_bound(v)));
  } else {
    rep.put("discriminant", nullptr);
  }
  if (v.is_integral() && v.v0() != 0 && v.v1().size() > 0 && !v.v1().is_zero())
    rep.put("content_xi", encode(content(v.v1())));
  return {rep, ok};
}

inline Outcome cmd_type(const Options &o) {
  auto cfg = detail::config_for(o, "type");
  const auto &v = detail::need(cfg.mukai, "mukai", "type");
  auto tau = topological_type(v);
  Report rep("type");
  detail::put_mukai(rep, v);
  rep.put("r", encode(tau.r));
  rep.put("c1", encode(tau.c1));
  rep.put("c2", encode(tau.c2));
  rep.put("discriminant", encode(discriminant(tau)));
  return {rep, ok};
}

inline Outcome cmd_walls(const Options &o) {
  auto cfg = detail::config_for(o, "walls");
  const auto &m = detail::need(cfg.model, "surface", "walls");
  const auto &v = detail::need(cfg.mukai, "mukai", "walls");
  const auto &omega = detail::need(cfg.omega, "omega", "walls");
  auto walls = walls_through_class(m, v, omega, o.threads);
  Report rep("walls");
  detail::put_mukai(rep, v);
  rep.put("bound", encode(wall_bound(v)));
  json list = json::array();
  for (const auto &w : walls) list.push_back(encode(w));
  rep.put("count", walls.size());
  rep.put("walls", list);
  if (m.ns()->rank() == 2) {
    // D^⊥ in NS coordinates (x, y): a x + b y = 0 with (a, b) = Gram·D
    json lines = json::array();
    for (const auto &w : walls) {
      json ab = json::array();
      for (const auto &c : dual_row(w.d)) ab.push_back(encode(c.get_num()));
      lines.push_back(ab);
    }
    rep.put("plot_lines", lines);
  }
  return {rep, ok};
}

inline Outcome cmd_generic(const Options &o) {
  auto cfg = detail::config_for(o, "generic");
  const auto &m = detail::need(cfg.model, "surface", "generic");
  const auto &v = detail::need(cfg.mukai, "mukai", "generic");
  const auto &omega = detail::need(cfg.omega, "omega", "generic");
  auto walls = walls_through_class(m, v, omega, o.threads);
  auto empty = wall_set_empty(m, v, o.threads);
  Report rep("generic");
  std::string why = walls.empty() ? (empty && *empty ? " (wall set empty)" : " (no wall through omega)")
                                  : " (" + std::to_string(walls.size()) + " wall(s) through omega)";
  rep.put("generic", walls.empty(), std::string(walls.empty() ? "true" : "false") + why);
  rep.put("wall_set_empty", empty ? json(*empty) : json(nullptr));
  rep.put("walls_through_omega", walls.size());
  return {rep, ok};
}

inline Outcome cmd_crossings_impl(const Options &o, const std::string &command) {
  auto cfg = detail::config_for(o, command);
  const auto &m = detail::need(cfg.model, "surface", command);
  const auto &v = detail::need(cfg.mukai, "mukai", command);
  const auto &w0 = detail::need(cfg.omega, "omega", command);
  const auto &w1 = detail::need(cfg.omega_prime, "omega_prime", command);
  auto xs = walls_crossing_segment(m, v, {w0, w1}, o.threads);
  Report rep(command);
  if (command == "chamber") {
    rep.put("same_chamber", xs.empty());
    rep.put("separating_walls", xs.size());
    return {rep, ok};
  }
  json list = json::array();
  for (const auto &x : xs) {
    json c = encode(x.wall);
    c["t"] = encode(x.t);
    list.push_back(c);
  }
  rep.put("count", xs.size());
  rep.put("crossings", list);
  return {rep, ok};
}

inline Outcome cmd_chamber(const Options &o) { return cmd_crossings_impl(o, "chamber"); }
inline Outcome cmd_crossings(const Options &o) { return cmd_crossings_impl(o, "crossings"); }

inline Outcome cmd_twist(const Options &o) {
  auto cfg = detail::config_for(o, "twist");
  Report rep("twist");
  if (cfg.twist) {
    const auto &e = *cfg.twist;
    auto sheaf = [&]() -> TwistedSheafData {
      if (cfg.sheaf) return *cfg.sheaf;
      // untwisted reading of the mukai section: ch2 = a - r
      const auto &v = detail::need(cfg.mukai, "sheaf", "twist");
      if (!is_integer(v.v0()) || v.v0() < 1) throw invalid_input("config: mukai.r must be a positive integer for twist");
      return {v.v0().get_num(), v.v1(), v.v2() - v.v0()};
    };
    const TwistedSheafData f = sheaf();
    auto che = ch_E(f, e);
    auto ve = v_E(f, e);
    rep.put("ch_E", encode(che), show(che));
    rep.put("v_E", encode(ve), show(ve));
    rep.put("v_E_square", encode(mukai_square(ve)));
    rep.put("v_E_square_closed_form", encode(v_E_square_closed_form(f, e)));
    rep.put("delta_E", encode(delta_E(f, e)));
    rep.put("delta_E_endomorphism_route", encode(delta_E_endomorphism_route(f, e)));
    if (cfg.omega && cfg.model) {
      require_polarization(*cfg.model, *cfg.omega);
      rep.put("slope_E", encode(slope_E(f, e, *cfg.omega)));
    }
    if (e.b_field) {
      auto chb = ch_B(che, e);
      rep.put("ch_B", encode(chb), show(chb));
    }
  }
  if (cfg.mukai && cfg.mukai->v0() >= 1 && is_integer(cfg.mukai->v0())) {
    const auto &v = *cfg.mukai;
    auto w = untwisted_w(v);
    auto wx = w_xi(w, v.v1(), v.v0().get_num());
    rep.put("w", encode(w), show(w));
    rep.put("w_xi", encode(wx.value), show(wx.value));
    rep.put("w_xi_integral", wx.integral, wx.integral ? "true" : "false (warning: w_xi is not integral)");
    rep.put("w_xi_equals_v", wx.value == v);
  }
  if (!cfg.twist && !cfg.mukai) throw invalid_input("config: twist needs a \"twist\" or a \"mukai\" section");
  return {rep, ok};
}

inline Outcome cmd_report(const Options &o) {
  auto cfg = detail::config_for(o, "report");
  const auto &m = detail::need(cfg.model, "surface", "report");
  const auto &v = detail::need(cfg.mukai, "mukai", "report");
  const auto &omega = detail::need(cfg.omega, "omega", "report");
  auto r = moduli_report(m, v, omega, o.threads);
  Report rep("report");
  detail::put_mukai(rep, v);
  rep.put("valid", r.valid);
  rep.put("reasons", r.reasons);
  rep.put("v_square", encode(r.v_square));
  rep.put("discriminant", r.discriminant ? encode(*r.discriminant) : json(nullptr));
  rep.put("dim", r.dim ? encode(*r.dim) : json(nullptr));
  rep.put("n", r.n ? encode(*r.n) : json(nullptr));
  rep.put("deformation_class", r.deformation_class ? json(*r.deformation_class) : json(nullptr));
  rep.put("b2", r.b2 ? json(*r.b2) : json(nullptr));
  rep.put("rigid", r.rigid);
  rep.put("generic", r.generic);
  rep.put("projective_moduli", r.projective_moduli ? json(*r.projective_moduli) : json(nullptr));
  rep.put("projective_surface", r.projective_surface);
  rep.put("interpretation_notes", r.interpretation_notes);
  return {rep, r.valid ? ok : hypothesis_failed};
}

inline Outcome cmd_h2(const Options &o) {
  auto cfg = detail::config_for(o, "h2");
  const auto &m = detail::need(cfg.model, "surface", "h2");
  const auto &v = detail::need(cfg.mukai, "mukai", "h2");
  NSEmbedding emb = cfg.embedding ? NSEmbedding(m.ns(), *cfg.embedding) : standard_embedding(m.ns());
  auto ev = emb.embed(v);
  auto h2 = h2_lattice(ev);
  Report rep("h2");
  detail::put_mukai(rep, v);
  rep.put("embedded", encode(ev.coords));
  rep.put("v_square", encode(square(ev.as_vector())));
  rep.put("quotient", h2.quotient, h2.quotient ? "true (v-perp / Zv)" : "false (v-perp)");
  rep.put("rank", h2.lattice->rank());
  rep.put("signature", encode(h2.signature), show(h2.signature));
  rep.put("discriminant_group", encode(h2.discriminant_group));
  rep.put("discriminant_order", encode(discriminant_order(*h2.lattice)));
  rep.attach("gram", encode(h2.lattice->gram()));
  rep.attach("basis", encode(h2.basis));
  return {rep, ok};
}

inline Outcome cmd_projective(const Options &o) {
  auto cfg = detail::config_for(o, "projective");
  const auto &m = detail::need(cfg.model, "surface", "projective");
  const auto &v = detail::need(cfg.mukai, "mukai", "projective");
  auto w = projectivity_check(m, v);
  Report rep("projective");
  detail::put_mukai(rep, v);
  rep.put("projective_moduli", w.projective);
  rep.put("projective_surface", w.surface_projective);
  rep.put("agree", w.projective == w.surface_projective);
  json gens = json::array();
  for (const auto &g : w.generators) gens.push_back(encode(g));
  rep.put("generators", gens);
  rep.put("gram", encode(w.gram));
  rep.put("signature", encode(w.signature), show(w.signature));
  Rational r = v.v0();
  rep.put("extra_square", encode(w.extra_square));
  rep.put("minus_4r2v2", encode(-4 * r * r * mukai_square(v)));
  return {rep, ok};
}

inline Outcome cmd_exists(const Options &o) {
  std::optional<std::array<Integer, 3>> from_cfg;
  if (!o.config_path.empty()) from_cfg = load_config(o.config_path).existence;
  auto pick = [&](const std::optional<long> &flag, std::size_t i, const char *name) -> Integer {
    if (flag) return Integer(*flag);
    if (from_cfg) return (*from_cfg)[i];
    throw invalid_input(std::string("exists needs --") + name + " or an \"existence\" config section");
  };
  Integer r = pick(o.r, 0, "r"), d = pick(o.d, 1, "d"), g = pick(o.g, 2, "g");
  auto e = bundle_existence_check(r, d, g);
  Report rep("exists");
  rep.put("input", {{"r", encode(r)}, {"d", encode(d)}, {"g", encode(g)}},
          "r=" + r.get_str() + " d=" + d.get_str() + " g=" + g.get_str());
  rep.put("accepted", e.accepted);
  rep.put("failed_hypotheses", e.failed);
  if (e.accepted) {
    rep.put("xi_square", encode(*e.xi_square));
    rep.put("delta", encode(*e.delta));
    rep.put("c2", encode(*e.c2));
    rep.put("v", encode(*e.v), show(*e.v));
    rep.put("dim", encode(*e.dim));
    const auto &irr = *e.irreducibility;
    json j = {{"irreducible", irr.irreducible},
              {"min_lower_bound", irr.min_lower_bound ? encode(*irr.min_lower_bound) : json(nullptr)},
              {"proof_bound", irr.proof_bound ? encode(*irr.proof_bound) : json(nullptr)},
              {"witness", irr.witness ? json{{"r1", encode(irr.witness->first)}, {"n2", encode(irr.witness->second)}}
                                      : json(nullptr)}};
    rep.attach("irreducibility", j);
    rep.note(std::string("irreducible: ") + (irr.irreducible ? "true" : "false"));
    if (irr.min_lower_bound) rep.note("irreducibility lower bound: " + irr.min_lower_bound->get_str());
    if (irr.proof_bound) rep.note("proof bound: " + irr.proof_bound->get_str());
  }
  return {rep, e.accepted ? ok : hypothesis_failed};
}

inline const std::map<std::string, std::pair<std::string, std::function<Outcome(const Options &)>>> &commands() {
  static const std::map<std::string, std::pair<std::string, std::function<Outcome(const Options &)>>> table{
      {"pairing", {"Mukai square, discriminant and wall bound", cmd_pairing}},
      {"type", {"topological type (r, c1, c2)", cmd_type}},
      {"walls", {"walls through omega", cmd_walls}},
      {"generic", {"whether omega is v-generic", cmd_generic}},
      {"chamber", {"whether omega and omega_prime share a chamber", cmd_chamber}},
      {"crossings", {"walls crossed by the segment [omega, omega_prime]", cmd_crossings}},
      {"twist", {"twisted characters, discriminants and w_xi", cmd_twist}},
      {"report", {"moduli report", cmd_report}},
      {"h2", {"the lattice v-perp (or v-perp / Zv)", cmd_h2}},
      {"projective", {"projectivity criterion with witness", cmd_projective}},
      {"exists", {"existence checker for rank-r bundles on cyclic NS", cmd_exists}},
  };
  return table;
}

inline unsigned default_threads() {
  if (const char *env = std::getenv("MUKAIKIT_THREADS")) {
    char *end = nullptr;
    long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 1) throw invalid_input("MUKAIKIT_THREADS must be a positive integer");
    return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// First argument naming a subcommand, skipping global options and their values.
inline std::optional<std::string> find_subcommand(const std::vector<std::string> &args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto &a = args[i];
    if (a == "--config" || a == "--format" || a == "--threads") {
      ++i;
      continue;
    }
    if (!a.empty() && a[0] == '-') continue;
    return a;
  }
  return std::nullopt;
}

/// Runs one invocation; `args` excludes the program name.
inline int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  if (auto sub = find_subcommand(args); sub && !commands().count(*sub)) {
    err << "mukaikit: unknown subcommand \"" << *sub << "\"\n";
    return unknown_command;
  }

  CLI::App app{"Exact lattice invariants of moduli of sheaves on K3 surfaces", "mukaikit"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Options opt;
  std::optional<unsigned> threads;
  app.add_option("--config", opt.config_path, "JSON config file");
  app.add_option("--format", opt.format, "output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--threads", threads, "worker threads (default: MUKAIKIT_THREADS or hardware concurrency)")
      ->check(CLI::Range(1u, 4096u));
  std::string chosen;
  for (const auto &[name, entry] : commands()) {
    auto *sub = app.add_subcommand(name, entry.first);
    if (name == "exists") {
      sub->add_option("--r", opt.r, "rank");
      sub->add_option("--d", opt.d, "dimension 2r^2 Delta - 2(r^2-1)");
      sub->add_option("--g", opt.g, "L^2 = 2g - 2");
    }
    sub->callback([&chosen, n = name] { chosen = n; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &e) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp &e) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError &e) {
    err << "mukaikit: " << e.what() << "\n";
    return validation_error;
  }

  try {
    opt.threads = threads ? *threads : default_threads();
    Outcome result = commands().at(chosen).second(opt);
    if (opt.format == "json")
      out << dump_canonical(result.report.doc());
    else
      out << result.report.text();
    return result.code;
  } catch (const hypothesis_violation &e) {
    err << "mukaikit: hypothesis violated: " << e.what() << "\n";
    return hypothesis_failed;
  } catch (const invalid_input &e) {
    err << "mukaikit: " << e.what() << "\n";
    return validation_error;
  } catch (const resource_limit &e) {
    err << "mukaikit: input out of supported range: " << e.what() << "\n";
    return validation_error;
  } catch (const std::exception &e) {
    err << "mukaikit: internal error: " << e.what() << "\n";
    return internal_error;
  }
}

} // namespace mukaikit::cli
