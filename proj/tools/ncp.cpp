// ncp: orbits, check suites and thin wrappers, JSON in and out.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ncp/suites.hpp"

using json = nlohmann::ordered_json;
using namespace ncp;

namespace {

// exit codes
constexpr int kPass = 0, kFail = 1, kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- output

void write_json(std::ostream& os, const json& j) {
  switch (j.type()) {
    case json::value_t::object: {
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        os << json(it.key()).dump() << ':';
        write_json(os, it.value());
      }
      os << '}';
      break;
    }
    case json::value_t::array: {
      os << '[';
      for (size_t k = 0; k < j.size(); ++k) {
        if (k) os << ',';
        write_json(os, j[k]);
      }
      os << ']';
      break;
    }
    case json::value_t::number_float: {
      double x = j.get<double>();
      if (!std::isfinite(x)) {
        os << "null";
        break;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      os << buf;
      break;
    }
    default: os << j.dump();
  }
}

void emit(std::ostream& os, const json& j) {
  write_json(os, j);
  os << '\n';
}

template <class R> json num(const R& x) { return to_double(x); }
template <class R> json cx(const Cx<R>& z) { return json::array({to_double(z.real()), to_double(z.imag())}); }

template <class R> json point(const ProjPoint<R>& p) {
  auto q = p.normalized();
  return json::array({cx(q[0]), cx(q[1]), cx(q[2])});
}

template <class R> json points(const std::vector<ProjPoint<R>>& ps) {
  json a = json::array();
  for (auto& p : ps) a.push_back(point(p));
  return a;
}

json error_object(const Error& e) {
  return {{"error", {{"kind", kind_name(e.kind())}, {"message", e.what()}, {"value", e.value()}}}};
}

std::string fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ull;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---- config

struct Flags {
  std::string config, out, precision;
  std::uint64_t seed = 0;
  double tol = 0;
  bool has_seed = false, has_tol = false, has_precision = false;
};

bool same_type(const json& want, const json& got) {
  if (want.is_null()) return true;
  if (want.is_number()) return got.is_number() || (want.is_number_float() && got.is_null());
  if (want.is_string()) return got.is_string() || got.is_number();
  return want.type() == got.type();
}

// defaults double as the schema: unknown keys and type mismatches are usage errors
json load_config(const json& defaults, const Flags& f) {
  json cfg = defaults;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw UsageError("cannot read config " + f.config);
    json user;
    try {
      user = json::parse(in);
    } catch (const json::parse_error& e) {
      throw UsageError(std::string("config is not JSON: ") + e.what());
    }
    if (!user.is_object()) throw UsageError("config must be a JSON object");
    for (auto it = user.begin(); it != user.end(); ++it) {
      if (!defaults.contains(it.key())) throw UsageError("unknown config key '" + it.key() + "'");
      if (!same_type(defaults[it.key()], it.value())) throw UsageError("config key '" + it.key() + "' has the wrong type");
      cfg[it.key()] = it.value();
    }
  }
  auto set = [&](const char* key, const json& v) {
    if (!defaults.contains(key)) throw UsageError(std::string("--") + key + " does not apply to this command");
    cfg[key] = v;
  };
  if (f.has_seed) set("seed", f.seed);
  if (f.has_tol) set("tol", f.tol);
  if (f.has_precision) set("precision", f.precision);
  if (cfg.contains("precision") && cfg["precision"] != "double" && cfg["precision"] != "extended")
    throw UsageError("precision must be double or extended");
  return cfg;
}

bool extended(const json& cfg) { return cfg.value("precision", std::string("double")) == "extended"; }

template <class R> ProjPoint<R> point_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw UsageError("a point is a list of three [re, im] pairs");
  Vec<R> v(3);
  for (int k = 0; k < 3; ++k) {
    if (j[k].is_number()) v(k) = Cx<R>(R(j[k].get<double>()), R(0));
    else v(k) = Cx<R>(R(j[k].at(0).get<double>()), R(j[k].at(1).get<double>()));
  }
  return ProjPoint<R>::from(v);
}

// ---- orbit

json orbit_defaults() {
  return {{"seed", 14},   {"curve_seed", 7},         {"t", "generic"},  {"d", 3},
          {"chi", nullptr}, {"word", "a(1,2)"},    {"steps", 10},     {"renormalize", true},
          {"general_path", false}, {"round_trip", false}, {"tol", 1e-6}, {"precision", "double"}};
}

template <class R> int run_orbit(const json& cfg, std::ostream& os) {
  const std::string hash = fnv1a(cfg.dump());
  const auto cseed = cfg["curve_seed"].get<std::uint64_t>();
  EllipticCurve<R> base(random_cubic<R>(cseed));
  const std::string tm = cfg["t"];
  ProjPoint<R> t;
  if (tm == "generic") t = base.random_point(cseed + 1000);
  else if (tm == "origin") t = base.O();
  else if (tm == "torsion") {
    auto fl = flexes(base.cubic());
    t = proj_distance(fl[0], base.O()) > R(1e-6) ? fl[0] : fl[1];
  } else throw UsageError("t must be generic, origin or torsion");
  auto E = std::make_shared<const EllipticCurve<R>>(base.cubic(), base.O(), t);
  const int d = cfg["d"];
  const int chi_ = cfg["chi"].is_null() ? d + 1 : cfg["chi"].get<int>();
  const int steps = cfg["steps"];
  if (steps < 0) throw UsageError("steps must be non-negative");
  const double tol = cfg["tol"];
  auto s = random_state(E, d, chi_, cfg["seed"].get<std::uint64_t>());
  auto w = parse_word(cfg["word"], 3 * d);
  MoveOptions opt;
  opt.general_path = cfg["general_path"];
  auto tr = orbit(s, w, steps, cfg["renormalize"].get<bool>(), opt);
  bool all = true;
  for (auto& r : tr) {
    bool ok = r.ok && to_double(r.constraint) < tol;
    all = all && ok;
    json rec = {{"record", "step"}, {"inputs_hash", hash},       {"step", r.step}, {"ok", ok},
                {"constraint", num(r.constraint)}, {"gap", num(r.gap)}, {"D", points(r.state.D)},
                {"P", points(r.state.P)}};
    if (!r.error.empty()) rec["error"] = r.error;
    emit(os, rec);
  }
  if (cfg["round_trip"].get<bool>() && all) {
    auto back = orbit(tr.back().state, inverse_word(w), steps, cfg["renormalize"].get<bool>(), opt);
    double dist = back.back().ok ? to_double(state_distance(back.back().state, s)) : INFINITY;
    bool ok = dist < tol;
    all = all && ok;
    emit(os, {{"record", "round_trip"}, {"inputs_hash", hash}, {"steps", steps}, {"distance", dist}, {"ok", ok}});
  }
  return all ? kPass : kFail;
}

// ---- check

json check_defaults() { return {{"seed", 0}, {"tol", nullptr}, {"precision", "double"}, {"timings", false}}; }

int run_check(const std::string& which, const json& cfg, std::ostream& os) {
  std::vector<std::string> names;
  if (which == "all") names = suite_names();
  else {
    auto known = suite_names();
    if (std::find(known.begin(), known.end(), which) == known.end()) throw UsageError("unknown suite " + which);
    names = {which};
  }
  SuiteConfig sc;
  sc.seed = cfg["seed"];
  if (!cfg["tol"].is_null()) sc.tol = cfg["tol"].get<double>();
  bool all = true;
  for (auto& n : names) {
    SuiteReport rep;
    try {
      rep = run_suite(n, sc, extended(cfg));
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    static const char* kinds[] = {"below", "above", "exact"};
    for (auto& c : rep.checks)
      emit(os, {{"record", "check"},  {"suite", n},        {"criterion", c.criterion}, {"check", c.name},
                {"kind", kinds[c.kind]}, {"value", c.value}, {"bound", c.bound},       {"pass", c.pass()},
                {"detail", c.detail}});
    json sum = {{"record", "suite"}, {"suite", n}, {"pass", rep.pass()}, {"checks", rep.checks.size()}};
    if (cfg["timings"].get<bool>()) sum["seconds"] = rep.seconds;
    emit(os, sum);
    all = all && rep.pass();
  }
  return all ? kPass : kFail;
}

// ---- sklyanin-info

json sklyanin_defaults() { return {{"seed", 1}, {"params", nullptr}, {"precision", "double"}}; }

template <class R> int run_sklyanin_info(const json& cfg, std::ostream& os) {
  SklyaninParams<R> par = random_params<R>(cfg["seed"].get<std::uint64_t>());
  if (!cfg["params"].is_null()) {
    auto p = point_from<R>(cfg["params"]).vec();
    par = {p(0), p(1), p(2)};
  }
  Sklyanin<R> A(par);
  auto ps = point_scheme(A);
  auto ce = central_element(A);
  json cubic = json::array();
  auto mons = Monomials::list(3);
  const auto& F = ps.E->cubic().f;
  for (size_t k = 0; k < mons.size(); ++k)
    cubic.push_back({{"monomial", mons[k]}, {"coef", cx(F.a[k])}});
  json theta = json::array();
  for (int a = 0; a < A.dim(3); ++a) {
    std::string word;
    for (int l : word_letters(A.basis_words(3)[a], 3)) word += "x" + std::to_string(l);
    theta.push_back({{"word", word}, {"coef", cx(ce.theta.c(a))}});
  }
  emit(os, {{"params", json::array({cx(par.a), cx(par.b), cx(par.c)})},
            {"cubic", cubic},
            {"O", point(ps.E->O())},
            {"t", point(ps.E->t())},
            {"translation_error", num(ps.translation_error)},
            {"theta", theta},
            {"theta_kernel_dim", ce.kernel_dim},
            {"commutator_residual", num(ce.commutator_residual)}});
  return kPass;
}

// ---- sheaf-s0

json sheaf_defaults() {
  return {{"seed", 101}, {"algebra_seed", 21}, {"base_seed", 1}, {"x", nullptr},
          {"guard", true}, {"tol", 1e-5},      {"precision", "double"}};
}

template <class R> int run_sheaf_s0(const json& cfg, std::ostream& os) {
  auto A = std::make_shared<const Sklyanin<R>>(random_params<R>(cfg["algebra_seed"].get<std::uint64_t>()));
  auto E = point_scheme(*A).E;
  auto bp = random_blowup_params<R>(A, E, cfg["base_seed"].get<std::uint64_t>());
  auto d = cfg["x"].is_null() ? random_datum(bp, cfg["seed"].get<std::uint64_t>()) : generic_datum(bp, point_from<R>(cfg["x"]));
  HeckeOptions opt;
  opt.guard_double_zero = cfg["guard"];
  HeckeDiag<R> dg;
  auto co = hecke_cross_oracle(d, &dg, opt);
  auto nd = hecke_s0(d, static_cast<HeckeDiag<R>*>(nullptr), opt);
  bool ok = to_double(co.distance) < cfg["tol"].get<double>();
  emit(os, {{"old_params", points(bp.P)},
            {"new_params", points(nd.params.P)},
            {"generic", bp.generic.clean()},
            {"old_point", point(plane_point_of(d))},
            {"new_point", point(co.sheaf_point)},
            {"dynamics_point", point(co.dynamics_point)},
            {"distance", num(co.distance)},
            {"param_distance", num(co.param_distance)},
            {"pass", ok},
            {"diagnostics",
             {{"step1_det_residual", num(dg.step1_det_residual)},
              {"step1_fit_residual", num(dg.step1_fit_residual)},
              {"rank_gap", num(dg.rank_gap)},
              {"l_zero_error", num(dg.l_zero_error)},
              {"new_base_residual", num(dg.new_base_residual)}}}});
  return ok ? kPass : kFail;
}

// ---- pairing

json pairing_defaults() {
  return {{"mode", "linear"}, {"seed", 7},     {"pencil_seed", 107}, {"deformation_seeds", {1, 2}},
          {"base_seed", 4},   {"x", nullptr}, {"x_seed", 10},       {"precision", "double"}};
}

int run_pairing(const json& cfg, std::ostream& os) {
  using R = double;
  if (extended(cfg)) throw UsageError("pairing runs in double precision only");
  auto A = std::make_shared<const Sklyanin<R>>(random_params<R>(cfg["seed"].get<std::uint64_t>()));
  auto E = point_scheme(*A).E;
  const std::string mode = cfg["mode"];
  Pencil<R> P;
  std::vector<CurvePoint<R>> supp;
  Deformation<R> D1, D2;
  json extra = json::object();
  if (mode == "linear") {
    auto ds = cfg["deformation_seeds"];
    if (!ds.is_array() || ds.size() != 2) throw UsageError("deformation_seeds takes two seeds");
    P = random_linear_pencil<R>(A, E, 3, cfg["pencil_seed"].get<std::uint64_t>());
    supp = support(P);
    auto basis = support_preserving_basis(P, supp);
    D1 = random_deformation(P, basis, ds[0].get<std::uint64_t>());
    D2 = random_deformation(P, basis, ds[1].get<std::uint64_t>());
    extra["support_preserving_dim"] = basis.cols();
  } else if (mode == "leaf") {
    auto bp = random_blowup_params<R>(A, E, cfg["base_seed"].get<std::uint64_t>());
    auto x = cfg["x"].is_null() ? ProjPoint<R>::from(Rng(cfg["x_seed"].get<std::uint64_t>()).cvec<R>(3))
                                : point_from<R>(cfg["x"]);
    auto fam = leaf_family(bp, x);
    auto lt = leaf_tangents(fam, Cx<R>(0), Cx<R>(0));
    P = sheaf_pencil(lt.datum);
    SupportOptions<R> so;
    so.seeds = bp.P;
    supp = support(P, so);
    D1 = lt.d1;
    D2 = lt.d2;
    extra["x"] = point(x);
    extra["density"] = cx(leaf_density(fam));
  } else throw UsageError("mode must be linear or leaf");
  auto p12 = pairing(P, supp, D1, D2), p21 = pairing(P, supp, D2, D1);
  R scale(0);
  json res = json::array();
  for (auto& r : p12.residues) res.push_back(cx(r)), scale = std::max(scale, std::abs(r));
  json out = {{"mode", mode},
              {"value", cx(p12.value)},
              {"reversed", cx(p21.value)},
              {"skew_relative", std::abs(p12.value + p21.value) / scale},
              {"residues", res},
              {"support", points(supp)},
              {"worst_change", p12.worst_change},
              {"worst_splitting", p12.worst_splitting}};
  out.update(extra);
  emit(os, out);
  return kPass;
}

// ---- toy

json toy_defaults() { return {{"hbar", "1/3"}, {"s", "1"}, {"f", {{2, -3, 1}}}, {"N", nullptr}}; }

ore::Q rational(const json& j) {
  try {
    if (j.is_number_integer()) return ore::Q(j.get<long long>());
    if (j.is_string()) return ore::Q(j.get<std::string>());
  } catch (const std::exception&) {
  }
  throw UsageError("rationals are integers or strings like \"-3/4\"");
}

std::string qstr(const ore::Q& q) { return q.str(); }

json qlist(const std::vector<ore::Q>& v) {
  json a = json::array();
  for (auto& q : v) a.push_back(qstr(q));
  return a;
}

int run_toy(const json& cfg, std::ostream& os) {
  using namespace ore;
  Q h = rational(cfg["hbar"]), s = rational(cfg["s"]);
  // f[a][b] is the coefficient of y^a x^b
  const json& fj = cfg["f"];
  if (!fj.is_array() || fj.empty()) throw UsageError("f is a nonempty list of coefficient lists");
  OrePoly f(h);
  for (size_t a = 0; a < fj.size(); ++a) {
    if (!fj[a].is_array()) throw UsageError("f is a list of coefficient lists");
    for (size_t b = 0; b < fj[a].size(); ++b) f.add(int(a), int(b), rational(fj[a][b]));
  }
  int N = cfg["N"].is_null() ? f.degree() + 2 : cfg["N"].get<int>();
  auto [fp, rep] = hecke_verify(f, s, N);
  json coeffs = json::array();
  for (auto& [k, c] : fp.terms()) {
    while (int(coeffs.size()) <= k.first) coeffs.push_back(json::array());
    auto& row = coeffs[k.first];
    while (int(row.size()) <= k.second) row.push_back("0");
    row[k.second] = qstr(c);
  }
  bool ok = rep.roots_match && rep.f0_match;
  emit(os, {{"f", f.str()},
            {"s", qstr(s)},
            {"hbar", qstr(h)},
            {"f_prime", coeffs},
            {"f_prime_str", fp.str()},
            {"generator", rep.c.str()},
            {"t", qstr(rep.t)},
            {"bound", rep.bound},
            {"roots_before", qlist(rep.roots_before)},
            {"roots_after", qlist(rep.roots_after)},
            {"expected", qlist(rep.expected)},
            {"roots_match", rep.roots_match},
            {"f0_match", rep.f0_match},
            {"pass", ok}});
  return ok ? kPass : kFail;
}

bool is_usage(ErrorKind k) { return k == ErrorKind::Config || k == ErrorKind::Parse; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noncommutative Painleve toolkit"};
  app.require_subcommand(1);
  Flags f;
  std::string suite;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", f.config, "JSON config file");
    sub->add_option("--out", f.out, "output path (default stdout)");
    sub->add_option("--seed", f.seed, "seed")->each([&](const std::string&) { f.has_seed = true; });
    sub->add_option("--tol", f.tol, "tolerance")->each([&](const std::string&) { f.has_tol = true; });
    sub->add_option("--precision", f.precision, "double or extended")
        ->check(CLI::IsMember({"double", "extended"}))
        ->each([&](const std::string&) { f.has_precision = true; });
  };
  auto* orbit_cmd = app.add_subcommand("orbit", "run a W0 word on a seeded state, JSONL per step");
  auto* check_cmd = app.add_subcommand("check", "run a check suite, or all");
  check_cmd->add_option("suite", suite, "suite name or all")->required();
  auto* skl_cmd = app.add_subcommand("sklyanin-info", "point scheme, t and the central element");
  auto* s0_cmd = app.add_subcommand("sheaf-s0", "hecke_s0 against the dynamics s0 move");
  auto* pair_cmd = app.add_subcommand("pairing", "residue pairing of two deformations");
  auto* toy_cmd = app.add_subcommand("toy", "Ore toy: f' and the root multisets");
  for (auto* sub : {orbit_cmd, check_cmd, skl_cmd, s0_cmd, pair_cmd, toy_cmd}) common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  std::ofstream file;
  if (!f.out.empty()) {
    file.open(f.out, std::ios::binary);
    if (!file) {
      std::cerr << "cannot open " << f.out << "\n";
      return kUsage;
    }
  }
  std::ostream& os = f.out.empty() ? std::cout : file;

  try {
    if (*orbit_cmd) {
      auto cfg = load_config(orbit_defaults(), f);
      return extended(cfg) ? run_orbit<Extended>(cfg, os) : run_orbit<double>(cfg, os);
    }
    if (*check_cmd) return run_check(suite, load_config(check_defaults(), f), os);
    if (*skl_cmd) {
      auto cfg = load_config(sklyanin_defaults(), f);
      return extended(cfg) ? run_sklyanin_info<Extended>(cfg, os) : run_sklyanin_info<double>(cfg, os);
    }
    if (*s0_cmd) {
      auto cfg = load_config(sheaf_defaults(), f);
      return extended(cfg) ? run_sheaf_s0<Extended>(cfg, os) : run_sheaf_s0<double>(cfg, os);
    }
    if (*pair_cmd) return run_pairing(load_config(pairing_defaults(), f), os);
    if (*toy_cmd) return run_toy(load_config(toy_defaults(), f), os);
  } catch (const UsageError& e) {
    emit(std::cerr, {{"error", {{"kind", "Usage"}, {"message", e.what()}}}});
    return kUsage;
  } catch (const json::exception& e) {
    emit(std::cerr, {{"error", {{"kind", "Usage"}, {"message", e.what()}}}});
    return kUsage;
  } catch (const Error& e) {
    emit(os, error_object(e));
    return is_usage(e.kind()) ? kUsage : kFail;
  }
  return kUsage;
}
