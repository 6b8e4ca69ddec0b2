#include "core/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "core/output.hpp"

namespace hbft {

std::string ScenarioConfig::where(const std::string& field) const {
  std::string prefix = source.empty() ? "<config>" : source;
  // Fall back to the closest enclosing field that has a recorded line.
  std::string probe = field;
  while (true) {
    if (auto it = lines.find(probe); it != lines.end()) {
      prefix += ":" + std::to_string(it->second);
      break;
    }
    if (probe.empty()) break;
    const auto dot = probe.find_last_of(".[");
    probe.erase(dot == std::string::npos ? 0 : dot);
  }
  return prefix + ": " + field + ": ";
}

namespace {

constexpr double kDerived = std::numeric_limits<double>::quiet_NaN();

struct CheckSpec {
  std::string name;
  std::vector<std::pair<std::string, double>> defaults;
  bool hbft_only = false;
  bool surface_only = false;
};

const std::vector<CheckSpec>& check_specs() {
  static const std::vector<CheckSpec> specs = {
      {"energy_monotone", {{"threshold", 1e-8}}, true},
      {"energy_balance", {{"threshold", kDefaultEnergyBalanceThreshold}}, true},
      {"velocity_bound", {{"threshold", 1e-8}}, true},
      {"tail_asymptotics", {{"threshold", 1e-5}, {"tail_fraction", kDefaultTailFraction}}, true},
      {"barbalat",
       {{"l2_budget", 10.0},
        {"linf_budget", 10.0},
        {"dot_budget", 100.0},
        {"threshold", 1e-5},
        {"tail_fraction", kDefaultTailFraction}},
       true},
      {"acceleration_bound", {{"threshold", 1e3}}, true},
      {"friction_hypotheses",
       {{"bound", 10.0}, {"t1", 0.0}, {"horizon", kDerived}, {"grid_points", 1001.0}}},
      {"gradient_validation", {{"threshold", 1e-4}, {"points", 100.0}, {"h", 1e-5}, {"box", 2.0}}},
      {"gradient_lipschitz", {{"threshold", 1e6}, {"radius", 2.0}, {"pairs", 200.0}}},
      {"critical_point",
       {{"threshold", 1e-3}, {"grad_threshold", 1e-4}, {"tail_fraction", kDefaultTailFraction}}},
      {"stationary", {}},
      {"model_discrepancy", {{"threshold", 1e-2}}, false, true},
  };
  return specs;
}

const CheckSpec* find_spec(const std::string& name) {
  for (const auto& s : check_specs())
    if (s.name == name) return &s;
  return nullptr;
}

double param(const CheckRequest& req, const std::string& key) {
  if (req.params.contains(key)) return req.params.scalar(key);
  for (const auto& [k, v] : find_spec(req.name)->defaults)
    if (k == key) return v;
  throw InputError("check '" + req.name + "' has no parameter '" + key + "'");
}

// YAML helpers ---------------------------------------------------------------

class Reader {
 public:
  Reader(ScenarioConfig& cfg) : cfg_(cfg) {}

  void note(const std::string& field, const YAML::Node& node) {
    if (node.IsDefined() && !node.IsNull()) cfg_.lines[field] = node.Mark().line + 1;
  }

  [[noreturn]] void fail(const std::string& field, const std::string& msg) const {
    throw ConfigError(cfg_.where(field) + msg);
  }

  void require_map(const std::string& field, const YAML::Node& node) {
    if (!node.IsMap()) fail(field, "expected a mapping");
  }

  void only_keys(const std::string& field, const YAML::Node& node,
                 std::initializer_list<const char*> allowed) {
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) {
        note(join(field, key), kv.first);
        fail(join(field, key), "unknown key");
      }
    }
  }

  double number(const std::string& field, const YAML::Node& node) {
    note(field, node);
    if (!node.IsScalar()) fail(field, "expected a number");
    try {
      return node.as<double>();
    } catch (const YAML::Exception&) {
      fail(field, "expected a number, got '" + node.Scalar() + "'");
    }
  }

  std::string text(const std::string& field, const YAML::Node& node) {
    note(field, node);
    if (!node.IsScalar()) fail(field, "expected a string");
    return node.Scalar();
  }

  bool boolean(const std::string& field, const YAML::Node& node) {
    note(field, node);
    try {
      return node.as<bool>();
    } catch (const YAML::Exception&) {
      fail(field, "expected true or false");
    }
  }

  Vec numbers(const std::string& field, const YAML::Node& node) {
    note(field, node);
    if (node.IsScalar()) return {number(field, node)};
    if (!node.IsSequence()) fail(field, "expected a number or a list of numbers");
    Vec out;
    for (std::size_t i = 0; i < node.size(); ++i)
      out.push_back(number(field + "[" + std::to_string(i) + "]", node[i]));
    return out;
  }

  ParamMap params(const std::string& field, const YAML::Node& node) {
    ParamMap out;
    if (!node.IsDefined() || node.IsNull()) return out;
    note(field, node);
    require_map(field, node);
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      out.set(key, numbers(join(field, key), kv.second));
    }
    return out;
  }

  ComponentRef component(const std::string& field, const YAML::Node& node) {
    if (!node.IsDefined()) fail(field, "missing required section");
    note(field, node);
    if (node.IsScalar()) return {text(field, node), {}};
    require_map(field, node);
    only_keys(field, node, {"name", "params"});
    if (!node["name"]) fail(field + ".name", "missing required key");
    return {text(field + ".name", node["name"]), params(field + ".params", node["params"])};
  }

  static std::string join(const std::string& a, const std::string& b) {
    return a.empty() ? b : a + "." + b;
  }

 private:
  ScenarioConfig& cfg_;
};

std::size_t count_param(Reader& r, const std::string& field, const YAML::Node& node) {
  const double v = r.number(field, node);
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e12) r.fail(field, "expected a positive integer");
  return static_cast<std::size_t>(v);
}

void read_integrator(Reader& r, const YAML::Node& node, IntegratorConfig& ic) {
  r.note("integrator", node);
  r.require_map("integrator", node);
  r.only_keys("integrator", node,
              {"method", "step", "abs_tol", "rel_tol", "h_min", "h_max", "t_max", "sample_stride",
               "sample_dt", "stop"});
  if (node["method"]) {
    const auto m = r.text("integrator.method", node["method"]);
    auto parsed = parse_method(m);
    if (!parsed) r.fail("integrator.method", "unknown method '" + m + "' (rk4 | dopri45)");
    ic.method = *parsed;
  }
  auto opt = [&](const char* key, double& slot) {
    if (node[key]) slot = r.number(std::string("integrator.") + key, node[key]);
  };
  opt("step", ic.step);
  opt("abs_tol", ic.abs_tol);
  opt("rel_tol", ic.rel_tol);
  opt("h_min", ic.h_min);
  opt("h_max", ic.h_max);
  opt("t_max", ic.t_max);
  if (node["sample_stride"])
    ic.sample_stride = count_param(r, "integrator.sample_stride", node["sample_stride"]);
  if (node["sample_dt"]) ic.sample_dt = r.number("integrator.sample_dt", node["sample_dt"]);
  if (const auto stop = node["stop"]) {
    r.note("integrator.stop", stop);
    r.require_map("integrator.stop", stop);
    r.only_keys("integrator.stop", stop,
                {"stationarity_tol", "dwell", "divergence_radius", "halt_on_contact_loss"});
    auto sopt = [&](const char* key, double& slot) {
      if (stop[key]) slot = r.number(std::string("integrator.stop.") + key, stop[key]);
    };
    sopt("stationarity_tol", ic.stop.stationarity_tol);
    sopt("dwell", ic.stop.dwell);
    sopt("divergence_radius", ic.stop.divergence_radius);
    if (stop["halt_on_contact_loss"])
      ic.stop.halt_on_contact_loss =
          r.boolean("integrator.stop.halt_on_contact_loss", stop["halt_on_contact_loss"]);
  }
}

void read_checks(Reader& r, const YAML::Node& node, std::vector<CheckRequest>& out) {
  r.note("checks", node);
  if (!node.IsSequence()) r.fail("checks", "expected a list");
  for (std::size_t i = 0; i < node.size(); ++i) {
    const std::string field = "checks[" + std::to_string(i) + "]";
    const YAML::Node item = node[i];
    r.note(field, item);
    CheckRequest req;
    if (item.IsScalar()) {
      req.name = r.text(field, item);
    } else if (item.IsMap()) {
      if (!item["name"]) r.fail(field, "missing 'name'");
      req.name = r.text(field + ".name", item["name"]);
      for (const auto& kv : item) {
        const auto key = kv.first.as<std::string>();
        if (key == "name") continue;
        const double v = r.number(field + "." + key, kv.second);
        req.params.set(key, v);
      }
    } else {
      r.fail(field, "expected a check name or a mapping with 'name'");
    }
    out.push_back(std::move(req));
  }
}

}  // namespace

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& s : check_specs()) out.push_back(s.name);
    return out;
  }();
  return names;
}

ScenarioConfig parse_scenario(const std::string& text, const std::string& source) {
  ScenarioConfig cfg;
  cfg.source = source;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ": syntax error: " + e.msg);
  }
  Reader r(cfg);
  r.note("", root);
  if (!root.IsMap()) throw ConfigError(source + ": top level must be a mapping");
  r.only_keys("", root,
              {"name", "model", "potential", "schedule", "initial", "mechanical", "integrator",
               "checks", "outputs"});

  if (root["name"]) cfg.name = r.text("name", root["name"]);
  if (root["model"]) {
    const auto m = r.text("model", root["model"]);
    auto kind = parse_model_kind(m);
    if (!kind) r.fail("model", "unknown model '" + m + "' (hbft | full_surface)");
    cfg.model = *kind;
  }
  cfg.potential = r.component("potential", root["potential"]);
  cfg.schedule = r.component("schedule", root["schedule"]);

  const YAML::Node init = root["initial"];
  if (!init) r.fail("initial", "missing required section");
  r.note("initial", init);
  r.require_map("initial", init);
  r.only_keys("initial", init, {"x", "v"});
  if (!init["x"]) r.fail("initial.x", "missing required key");
  cfg.x0 = r.numbers("initial.x", init["x"]);
  cfg.v0 = init["v"] ? r.numbers("initial.v", init["v"]) : Vec(cfg.x0.size(), 0.0);

  if (const auto mech = root["mechanical"]) {
    r.note("mechanical", mech);
    r.require_map("mechanical", mech);
    r.only_keys("mechanical", mech, {"mass", "gravity"});
    MechanicalParams mp;
    if (mech["mass"]) mp.mass = r.number("mechanical.mass", mech["mass"]);
    if (mech["gravity"]) mp.gravity = r.number("mechanical.gravity", mech["gravity"]);
    cfg.mechanical = mp;
  }
  if (const auto integ = root["integrator"]) read_integrator(r, integ, cfg.integrator);
  if (const auto checks = root["checks"]) read_checks(r, checks, cfg.checks);
  if (const auto outs = root["outputs"]) {
    r.note("outputs", outs);
    r.require_map("outputs", outs);
    r.only_keys("outputs", outs, {"trajectory_csv", "report_json", "summary_txt"});
    if (outs["trajectory_csv"])
      cfg.outputs.trajectory_csv = r.text("outputs.trajectory_csv", outs["trajectory_csv"]);
    if (outs["report_json"])
      cfg.outputs.report_json = r.text("outputs.report_json", outs["report_json"]);
    if (outs["summary_txt"])
      cfg.outputs.summary_txt = r.text("outputs.summary_txt", outs["summary_txt"]);
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

VectorField make_reduced_surface_field(const Potential& p, const FrictionSchedule& s,
                                       const MechanicalParams& mp) {
  validate(mp);
  return VectorField(ModelKind::hbft, p.dim(), [p, s, mp](const PhaseState& y) {
    StateDerivative d = hbft_field(p, s, y);
    const double lam = s.lambda_at(y.t);
    // hbft_field gives -lam v - grad; rescale to -(lam/m) v - g grad.
    for (std::size_t i = 0; i < d.dv.size(); ++i) {
      const double grad = -d.dv[i] - lam * y.v[i];
      d.dv[i] = -(lam / mp.mass) * y.v[i] - mp.gravity * grad;
    }
    return d;
  });
}

ResolvedScenario resolve_scenario(const ScenarioConfig& cfg) {
  auto wrap = [&](const std::string& field, auto&& make) {
    try {
      return make();
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(cfg.where(field) + e.what());
    }
  };
  // Parameter errors point at the params block, name errors at the name.
  auto anchor = [&](const std::string& field, const ComponentRef& ref, const auto& catalogue) {
    const bool known = std::any_of(catalogue.begin(), catalogue.end(),
                                   [&](const CatalogueEntry& e) { return e.name == ref.name; });
    return field + (known && !ref.params.entries().empty() ? ".params" : ".name");
  };
  Potential p = wrap(anchor("potential", cfg.potential, potential_catalogue()),
                     [&] { return make_potential(cfg.potential.name, cfg.potential.params); });
  FrictionSchedule s = wrap(anchor("schedule", cfg.schedule, schedule_catalogue()),
                            [&] { return make_schedule(cfg.schedule.name, cfg.schedule.params); });

  if (cfg.x0.size() != p.dim())
    throw ConfigError(cfg.where("initial.x") + "has length " + std::to_string(cfg.x0.size()) +
                      " but potential '" + p.name() + "' has dim " + std::to_string(p.dim()));
  if (cfg.v0.size() != p.dim())
    throw ConfigError(cfg.where("initial.v") + "has length " + std::to_string(cfg.v0.size()) +
                      " but potential '" + p.name() + "' has dim " + std::to_string(p.dim()));
  if (!all_finite(cfg.x0)) throw ConfigError(cfg.where("initial.x") + "must be finite");
  if (!all_finite(cfg.v0)) throw ConfigError(cfg.where("initial.v") + "must be finite");
  wrap("integrator", [&] {
    validate(cfg.integrator);
    return 0;
  });

  std::optional<VectorField> field;
  if (cfg.model == ModelKind::full_surface) {
    if (!cfg.mechanical)
      throw ConfigError(cfg.where("model") +
                        "the full_surface model needs a mechanical section (mass, gravity)");
    if (!p.has_hessian())
      throw ConfigError(cfg.where("potential") + "potential '" + p.name() +
                        "' has no Hessian form, required by the full_surface model");
    field = wrap("mechanical", [&] { return make_full_surface_field(p, s, *cfg.mechanical); });
  } else {
    field = make_hbft_field(p, s);
  }

  for (std::size_t i = 0; i < cfg.checks.size(); ++i) {
    const auto& req = cfg.checks[i];
    const std::string field_name = "checks[" + std::to_string(i) + "]";
    const CheckSpec* spec = find_spec(req.name);
    if (!spec) {
      std::string names;
      for (const auto& n : known_checks()) names += (names.empty() ? "" : ", ") + n;
      throw ConfigError(cfg.where(field_name) + "unknown check '" + req.name + "' (known: " +
                        names + ")");
    }
    for (const auto& [key, _] : req.params.entries()) {
      bool ok = false;
      for (const auto& [k, v] : spec->defaults) ok = ok || k == key;
      if (!ok)
        throw ConfigError(cfg.where(field_name + "." + key) + "unknown parameter for check '" +
                          req.name + "'");
    }
    if (spec->hbft_only && cfg.model != ModelKind::hbft)
      throw ConfigError(cfg.where(field_name) + "check '" + req.name +
                        "' certifies the hbft energy law and needs model: hbft");
    if (spec->surface_only && cfg.model != ModelKind::full_surface)
      throw ConfigError(cfg.where(field_name) + "check '" + req.name +
                        "' compares against the surface model and needs model: full_surface");
    for (const auto& [k, v] : spec->defaults) {
      const double value = req.params.contains(k) ? req.params.scalar(k) : v;
      if (!std::isnan(value) && !(value > 0.0) && k != "t1")
        throw ConfigError(cfg.where(field_name + "." + k) + "must be > 0");
      if (k == "tail_fraction" && !(value < 1.0))
        throw ConfigError(cfg.where(field_name + "." + k) + "must lie in (0, 1)");
    }
  }
  return {std::move(p), std::move(s), std::move(*field)};
}

namespace {

CheckRecord gradient_validation_record(const Potential& p, const CheckRequest& req) {
  const auto points = static_cast<std::size_t>(param(req, "points"));
  const double h = param(req, "h");
  const double box = param(req, "box");
  std::mt19937_64 rng(20240101);
  std::uniform_real_distribution<double> coord(-box, box);
  double worst = 0.0;
  Vec x(p.dim());
  for (std::size_t k = 0; k < points; ++k) {
    for (auto& xi : x) xi = coord(rng);
    worst = std::max(worst, validate_gradient(p, x, h));
  }
  auto r = make_record("gradient_validation", worst, param(req, "threshold"),
                       "max central-difference gradient residual over random points");
  r.metrics["points"] = static_cast<double>(points);
  r.metrics["h"] = h;
  return r;
}

CheckRecord friction_record(const FrictionSchedule& s, const CheckRequest& req, double t_max) {
  const double horizon = std::isnan(param(req, "horizon")) ? t_max : param(req, "horizon");
  const double bound = param(req, "bound");
  const double t1 = param(req, "t1");
  const auto grid = static_cast<std::size_t>(param(req, "grid_points"));
  if (!(horizon > t1))
    throw ConfigError("check 'friction_hypotheses': horizon must exceed t1");
  const auto rep = verify_friction_hypotheses(s, horizon, grid, bound, t1);
  const double continuity =
      rep.continuity_threshold > 0.0
          ? rep.max_increment / rep.continuity_threshold
          : (rep.max_increment > 1e-12 ? std::numeric_limits<double>::infinity() : 0.0);
  auto r = make_record("friction_hypotheses",
                       std::max(rep.max_after_t1 / bound, continuity), 1.0,
                       "max(sup_{t>=t1} lambda / bound, max grid increment / continuity "
                       "threshold)");
  r.metrics["max_after_t1"] = rep.max_after_t1;
  r.metrics["bound"] = bound;
  r.metrics["max_increment"] = rep.max_increment;
  r.metrics["continuity_threshold"] = rep.continuity_threshold;
  r.metrics["min_lambda"] = rep.min_lambda;
  r.metrics["horizon"] = horizon;
  r.partial_certificate = true;
  r.flags.push_back(rep.bounded ? "bounded" : "unbounded");
  r.flags.push_back(rep.continuity_ok ? "continuous" : "discontinuous");
  r.flags.push_back(rep.strictly_positive ? "strictly_positive"
                                          : (rep.nonnegative ? "has_zeros" : "negative"));
  if (rep.derivative_bounded) {
    r.metrics["max_abs_derivative"] = rep.max_abs_derivative;
    r.flags.push_back(*rep.derivative_bounded ? "derivative_bounded" : "derivative_unbounded");
  }
  return r;
}

}  // namespace

CertificationReport certify(const ScenarioConfig& cfg, const ResolvedScenario& rs,
                            const Trajectory& traj) {
  CertificationReport report;
  if (cfg.checks.empty()) return report;
  if (rs.potential.unbounded_below()) {
    report.refused = true;
    report.refusal_reason = "potential '" + rs.potential.name() +
                            "' is unbounded below; certification refused";
    return report;
  }
  const Potential& p = rs.potential;
  const FrictionSchedule& s = rs.schedule;
  for (const auto& req : cfg.checks) {
    const std::string& n = req.name;
    CheckRecord rec;
    if (n == "energy_monotone") {
      rec = check_energy_monotone(traj, param(req, "threshold"));
    } else if (n == "energy_balance") {
      rec = energy_balance_residual(traj, s, param(req, "threshold"));
    } else if (n == "velocity_bound") {
      rec = check_velocity_bound(traj, p, param(req, "threshold"));
    } else if (n == "tail_asymptotics") {
      rec = tail_asymptotics_check(traj, s, p, param(req, "threshold"),
                                   param(req, "tail_fraction"));
    } else if (n == "barbalat") {
      BarbalatBudgets b{param(req, "l2_budget"), param(req, "linf_budget"),
                        param(req, "dot_budget"), param(req, "threshold"),
                        param(req, "tail_fraction")};
      rec = barbalat_check(sqrt_lambda_speed(traj), b).record(b);
      rec.details = "f = sqrt(lambda)|v|: " + rec.details;
      if (!s.has_derivative()) rec.flags.push_back("premise_unverified");
    } else if (n == "acceleration_bound") {
      rec = check_acceleration_bound(traj, p, s, param(req, "threshold"));
    } else if (n == "friction_hypotheses") {
      rec = friction_record(s, req, cfg.integrator.t_max);
    } else if (n == "gradient_validation") {
      rec = gradient_validation_record(p, req);
    } else if (n == "gradient_lipschitz") {
      const auto est = estimate_gradient_lipschitz(
          p, Vec(p.dim(), 0.0), param(req, "radius"),
          static_cast<std::size_t>(param(req, "pairs")));
      rec = make_record("gradient_lipschitz", est.constant, param(req, "threshold"),
                        "sampled local Lipschitz constant of grad Phi on B(0, radius)");
      rec.metrics["radius"] = est.radius;
      rec.metrics["pairs"] = static_cast<double>(est.pairs);
    } else if (n == "critical_point") {
      rec = check_critical_point(traj, p, param(req, "threshold"), param(req, "grad_threshold"),
                                 param(req, "tail_fraction"));
    } else if (n == "stationary") {
      rec = make_record("stationary", traj.termination == Termination::stationary ? 0.0 : 1.0,
                        0.0, std::string("termination: ") + to_string(traj.termination));
    } else if (n == "model_discrepancy") {
      const VectorField reduced = make_reduced_surface_field(p, s, *cfg.mechanical);
      const Trajectory other =
          integrate(reduced, p, s, PhaseState{0.0, cfg.x0, cfg.v0}, cfg.integrator);
      rec = model_discrepancy(traj, other, param(req, "threshold"));
      if (p.params().contains("scale")) rec.metrics["potential_scale"] = p.params().scalar("scale");
    }
    report.checks.push_back(std::move(rec));
  }
  return report;
}

ScenarioOutcome run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir) {
  const ResolvedScenario rs = resolve_scenario(cfg);
  ScenarioOutcome out;
  try {
    out.trajectory = integrate(rs.field, rs.potential, rs.schedule,
                               PhaseState{0.0, cfg.x0, cfg.v0}, cfg.integrator);
    out.report = certify(cfg, rs, out.trajectory);
    out.exit = out.report.all_pass() ? ExitCode::pass : ExitCode::check_failure;
  } catch (const StepUnderflowError& e) {
    out.trajectory = e.partial();
    out.error = e.what();
    out.exit = ExitCode::integration_error;
  }

  auto resolve = [&](const std::string& configured, const std::string& suffix) {
    const std::filesystem::path p = configured.empty() ? cfg.name + suffix : configured;
    return p.is_absolute() ? p : out_dir / p;
  };
  out.csv_path = resolve(cfg.outputs.trajectory_csv, ".csv");
  out.report_path = resolve(cfg.outputs.report_json, ".report.json");
  out.summary_path = resolve(cfg.outputs.summary_txt, ".summary.txt");

  write_trajectory_csv(out.trajectory, out.csv_path);
  out.summary = render_summary(cfg, out);
  write_text(out.report_path, report_json(cfg, out));
  write_text(out.summary_path, out.summary);
  return out;
}

}  // namespace hbft
