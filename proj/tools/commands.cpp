#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>

#include "json.hpp"
#include "qikdv/abelianization.hpp"
#include "qikdv/charges.hpp"
#include "qikdv/coupled.hpp"
#include "qikdv/errors.hpp"
#include "qikdv/io.hpp"
#include "qikdv/loop_algebra.hpp"
#include "qikdv/nls_map.hpp"
#include "qikdv/pde.hpp"
#include "qikdv/solitons.hpp"

namespace qikdv::cli {

namespace {

using json = nlohmann::json;

struct Run {
  const Config& cfg;
  std::string dir;
  json outputs = json::array();
  json records = json::object();
  int status = kOk;

  void text(const std::string& name, const std::string& body, std::size_t rows) {
    write_text(join_path(dir, name), body);
    char h[17];
    std::snprintf(h, sizeof h, "%016llx", static_cast<unsigned long long>(fnv1a64(body)));
    outputs.push_back({{"file", name}, {"rows", rows}, {"fnv1a64", h}});
  }
  void csv(const std::string& name, const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
    text(name, csv_text(header, rows), rows.size());
  }
};

// csv with a leading text column
std::string labelled_csv(const std::vector<std::string>& header, const std::vector<std::string>& labels,
                         const std::vector<std::vector<double>>& rows) {
  std::string s;
  for (std::size_t i = 0; i < header.size(); ++i) s += (i ? "," : "") + header[i];
  s += "\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    s += labels[r];
    for (double v : rows[r]) s += "," + format_double(v);
    s += "\n";
  }
  return s;
}

void reject_unused(const Config& c) {
  const auto extra = c.unused();
  if (!extra.empty()) throw ValidationError(extra.front(), "unknown key for this command");
}

json nan_safe(double v) { return std::isfinite(v) ? json(v) : json(format_double(v)); }

json number_list(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(nan_safe(x));
  return a;
}

// ---- config readers ----

struct Grid {
  double L;
  std::size_t n;
};

Grid read_grid(const Config& c) {
  const double L = c.get_double("grid.L", 40.0);
  const long n = c.get_int("grid.n", 512);
  if (n <= 0) throw ValidationError("grid.n", "must be a power of two >= 16");
  validate_grid(L, static_cast<std::size_t>(n), "grid");
  return {L, static_cast<std::size_t>(n)};
}

DeformationSpec read_deformation(const Config& c, const std::string& prefix) {
  const auto kind = c.get_string(prefix + ".kind", "none");
  const double eps = c.get_double(prefix + ".epsilon", 0.0);
  const long m = c.get_int(prefix + ".m", 3);
  const long n = c.get_int(prefix + ".n", 1);
  DeformationSpec s;
  if (kind == "none")
    s = DeformationSpec::none();
  else if (kind == "uuxx")
    s = DeformationSpec::uuxx(eps);
  else if (kind == "power_ux")
    s = DeformationSpec::power_ux(static_cast<int>(m), eps);
  else if (kind == "ud2n")
    s = DeformationSpec::ud2n(static_cast<int>(n), eps);
  else if (kind == "power_def")
    s = DeformationSpec::power_def(eps);
  else
    throw ValidationError(prefix + ".kind", "expected none, uuxx, power_ux, ud2n or power_def");
  s.validate(prefix);
  return s;
}

void read_time(const Config& c, EvolutionProblem& p) {
  p.dt = c.get_double("equation.dt", 1e-4);
  p.t_end = c.get_double("equation.t_end", 1.0);
}

EvolutionProblem read_problem(const Config& c) {
  EvolutionProblem p;
  p.equation = equation_from_string(c.get_string("equation.name", "KDV"));
  if (p.equation == Equation::NLS || p.equation == Equation::COUPLED_KDV)
    throw ValidationError("equation.name", "use the map-nls or coupled subcommand for " + to_string(p.equation));
  p.epsilon = c.get_double("equation.epsilon", 0.0);
  p.m = static_cast<int>(c.get_int("equation.m", 3));
  p.n_order = static_cast<int>(c.get_int("equation.n", 1));
  p.drop_log = c.get_bool("equation.drop_log", false);
  read_time(c, p);
  p.deformation = read_deformation(c, "deformation");
  p.validate("equation");
  return p;
}

int read_sample_every(const Config& c) {
  const long s = c.get_int("output.sample_every", 1000);
  if (s < 1) throw ValidationError("output.sample_every", "must be >= 1");
  return static_cast<int>(s);
}

struct Initial {
  GridField u;
  std::optional<KdvSoliton> reference;
};

Initial read_initial(const Config& c, const Grid& g) {
  const auto kind = c.get_string("initial.kind", "soliton");
  const double offset = c.get_double("initial.offset", 0.0);
  Initial in;
  if (kind == "soliton") {
    const double speed = c.get_double("initial.c", 4.0);
    const double x0 = c.get_double("initial.x0", 0.0);
    const double eps = c.get_double("initial.eps", 0.0);
    const auto form = c.get_string("initial.form", "scaled");
    if (!(speed > 0.0)) throw ValidationError("initial.c", "must be positive");
    KdvSolitonForm f;
    if (form == "scaled")
      f = KdvSolitonForm::Scaled;
    else if (form == "log")
      f = KdvSolitonForm::Log;
    else
      throw ValidationError("initial.form", "expected scaled or log");
    const auto s = soliton_kdv(speed, eps, x0, 0.0, f);
    in.u = s.sample(g.L, g.n, 0.0);
    if (offset == 0.0) in.reference = s;
  } else if (kind == "sech2") {
    const double amp = c.get_double("initial.amplitude", -0.5);
    const double width = c.get_double("initial.width", 1.0);
    const double x0 = c.get_double("initial.x0", 0.0);
    if (!(width > 0.0)) throw ValidationError("initial.width", "must be positive");
    in.u = sample(g.L, g.n, [&](double x) {
      const double s = 1.0 / std::cosh((x - x0) / width);
      return amp * s * s;
    });
  } else if (kind == "file") {
    const auto path = c.require_string("initial.file");
    const auto t = read_csv(path);
    const auto col = t.column("u");
    if (t.rows.size() != g.n) throw ValidationError("initial.file", "row count does not match grid.n");
    in.u = GridField{g.L, std::vector<double>(g.n)};
    for (std::size_t j = 0; j < g.n; ++j) in.u.values[j] = t.rows[j].at(col);
  } else {
    throw ValidationError("initial.kind", "expected soliton, sech2 or file");
  }
  for (auto& v : in.u.values) v += offset;
  in.u.validate("initial");
  return in;
}

GaugeOptions read_gauge(const Config& c, const Grid& g) {
  GaugeOptions o;
  o.inverse_lambda = c.get_double("gauge.inverse_lambda", 1.0);
  o.a_minus0 = c.get_double("gauge.a_minus0", 0.0);
  o.a_plus0 = c.get_double("gauge.a_plus0", 0.0);
  const long sub = c.get_int("gauge.substeps", 4);
  const long start = c.get_int("gauge.start_index", 0);
  o.blowup_threshold = c.get_double("gauge.blowup_threshold", 1e8);
  if (sub < 1) throw ValidationError("gauge.substeps", "must be >= 1");
  if (start < 0 || static_cast<std::size_t>(start) >= g.n) throw ValidationError("gauge.start_index", "outside the grid");
  if (!(o.blowup_threshold > 0.0)) throw ValidationError("gauge.blowup_threshold", "must be positive");
  o.substeps = static_cast<int>(sub);
  o.start_index = static_cast<std::size_t>(start);
  return o;
}

int read_orders(const Config& c) {
  const long k = c.get_int("charges.orders", 2);
  if (k < 0 || k > 2) throw ValidationError("charges.orders", "must be 0, 1 or 2");
  return static_cast<int>(k);
}

void require_domain(const EvolutionProblem& p, const GridField& u) {
  const bool power = p.effective_deformation().kind == DeformKind::PowerDef;
  if (!power && !(p.equation == Equation::LOG_KDV)) return;
  for (std::size_t j = 0; j < u.n(); ++j)
    if (!(u.values[j] > kPowerDefFloor))
      throw ValidationError("initial", "this equation needs u > 0; index " + std::to_string(j) + " is not");
}

struct RealSetup {
  Grid grid;
  EvolutionProblem problem;
  Initial initial;
  GaugeOptions gauge;
  int orders;
  int sample_every;
};

RealSetup read_real(const Config& c) {
  RealSetup s{read_grid(c), read_problem(c), {}, {}, 0, 0};
  s.initial = read_initial(c, s.grid);
  s.gauge = read_gauge(c, s.grid);
  s.orders = read_orders(c);
  s.sample_every = read_sample_every(c);
  require_domain(s.problem, s.initial.u);
  return s;
}

void split(const std::vector<TrajectorySample>& traj, std::vector<double>& t, std::vector<GridField>& u) {
  for (const auto& s : traj) {
    t.push_back(s.t);
    u.push_back(std::get<GridField>(s.field));
  }
}

void record_series(Run& run, const ChargeSeries& cs) {
  run.records["q0_method"] = cs.q0_method;
  run.records["singular_gauge_times"] = number_list(cs.singular_at);
}

// ---- subcommands ----

void simulate(Run& run) {
  const auto s = read_real(run.cfg);
  reject_unused(run.cfg);
  const auto traj = evolve(s.initial.u, s.problem, s.sample_every);
  std::vector<double> t;
  std::vector<GridField> u;
  split(traj, t, u);

  std::vector<std::vector<double>> rows, fields;
  for (std::size_t i = 0; i < t.size(); ++i) {
    double ref = std::numeric_limits<double>::quiet_NaN();
    if (s.initial.reference) ref = max_abs_diff(u[i].values, s.initial.reference->sample(s.grid.L, s.grid.n, t[i]).values);
    rows.push_back({t[i], max_abs(u[i].values), classical_invariants(u[i]).mass, ref});
    for (std::size_t j = 0; j < u[i].n(); ++j) fields.push_back({t[i], u[i].x(j), u[i].values[j]});
  }
  run.csv("trajectory.csv", {"t", "max_abs", "mass", "linf_vs_analytic"}, rows);
  run.csv("fields.csv", {"t", "x", "u"}, fields);

  const auto cs = track_charges(t, u, equation_anomaly(s.problem), s.orders, s.gauge);
  run.csv("charges.csv", charge_csv_header(), charge_csv_rows(cs));
  record_series(run, cs);
}

void charges(Run& run) {
  const auto s = read_real(run.cfg);
  const bool qc = run.cfg.get_bool("charges.quasi_continuity", false);
  const long qc_steps = run.cfg.get_int("charges.qc_steps", 10);
  if (qc_steps < 1) throw ValidationError("charges.qc_steps", "must be >= 1");
  reject_unused(run.cfg);

  const auto traj = evolve(s.initial.u, s.problem, s.sample_every);
  std::vector<double> t;
  std::vector<GridField> u;
  split(traj, t, u);
  const auto X = equation_anomaly(s.problem);
  const auto cs = track_charges(t, u, X, s.orders, s.gauge);
  run.csv("charges.csv", charge_csv_header(), charge_csv_rows(cs));
  record_series(run, cs);

  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
  auto add = [&](const std::string& name, const std::vector<double>& q, const std::vector<double>* rate,
                 const std::vector<double>* lambda) {
    double mismatch = std::numeric_limits<double>::quiet_NaN();
    if (rate && q.size() > 2) {
      mismatch = 0.0;
      for (std::size_t i = 1; i + 1 < q.size(); ++i) mismatch = std::max(mismatch, std::abs((*rate)[i] - (*lambda)[i]));
      if (std::isnan((*rate)[1])) mismatch = std::numeric_limits<double>::quiet_NaN();
    }
    labels.push_back(name);
    rows.push_back({q.front(), q.back(), relative_drift(q), mismatch});
  };
  for (int n = 0; n <= s.orders; ++n)
    add("Q" + std::to_string(n), cs.Q[n], &cs.dQ_dt_numeric[n], &cs.Lambda[n]);
  add("mass", cs.mass, nullptr, nullptr);
  add("momentum", cs.momentum, nullptr, nullptr);
  add("energy", cs.energy, nullptr, nullptr);
  const std::string body = labelled_csv({"quantity", "initial", "final", "drift", "max_rate_mismatch"}, labels, rows);
  run.text("charges_summary.csv", body, rows.size());

  if (qc) {
    EvolutionProblem p = s.problem;
    p.t_end = p.dt * static_cast<double>(qc_steps);
    const auto pair = evolve(s.initial.u, p, static_cast<int>(qc_steps));
    const auto& a = std::get<GridField>(pair.front().field);
    const auto& b = std::get<GridField>(pair.back().field);
    std::vector<std::vector<double>> qrows;
    try {
      GaugeOptions o = s.gauge;
      o.order = s.orders;
      const auto r = verify_quasi_continuity(lax_data(a, X(a)), lax_data(b, X(b)), p.t_end, o);
      for (std::size_t n = 0; n < r.residual.size(); ++n)
        qrows.push_back({static_cast<double>(n), r.residual[n], r.gamma_norm[n], r.x_norm[n]});
    } catch (const SingularGaugeError& e) {
      run.records["quasi_continuity_singular_at"] = e.location();
    }
    run.csv("quasi_continuity.csv", {"order", "residual", "gamma_norm", "x_norm"}, qrows);
  }
}

void verify_algebra(Run& run, std::uint64_t seed) {
  const auto& c = run.cfg;
  const long samples = c.get_int("algebra.samples", 1000);
  const long bch_samples = c.get_int("algebra.bch_samples", 100);
  const long depth = c.get_int("algebra.depth", 4);
  const double lambda = c.get_double("algebra.lambda", 0.7);
  const auto table_name = c.get_string("algebra.table", "standard");
  reject_unused(c);
  if (samples < 1) throw ValidationError("algebra.samples", "must be >= 1");
  if (bch_samples < 1) throw ValidationError("algebra.bch_samples", "must be >= 1");
  if (depth < 1 || depth > 8) throw ValidationError("algebra.depth", "must be in 1..8");
  if (!(lambda > 0.0)) throw ValidationError("algebra.lambda", "must be positive");
  CommutatorTable table;
  if (table_name == "standard")
    table = CommutatorTable::standard();
  else if (table_name == "corrupted")
    table = CommutatorTable::corrupted();
  else
    throw ValidationError("algebra.table", "expected standard or corrupted");

  const auto rep = verify_identities(seed, static_cast<int>(samples), table);
  const auto bch = verify_bch(seed, static_cast<int>(bch_samples), static_cast<int>(depth), lambda);
  const std::vector<std::string> labels{"antisymmetry", "jacobi", "grade", "bch"};
  const std::vector<std::vector<double>> rows{
      {double(rep.antisymmetry_pass), double(rep.antisymmetry_fail), 0.0},
      {double(rep.jacobi_pass), double(rep.jacobi_fail), 0.0},
      {double(rep.grade_pass), double(rep.grade_fail), 0.0},
      {double(bch.pass), double(bch.fail), bch.worst_ratio}};
  run.text("algebra.csv", labelled_csv({"check", "pass", "fail", "worst_ratio"}, labels, rows), rows.size());
  const int failures = rep.antisymmetry_fail + rep.jacobi_fail + rep.grade_fail + bch.fail;
  run.records["table"] = table_name;
  run.records["failures"] = failures;
  if (failures > 0) run.status = kNumerical;
}

void map_nls(Run& run) {
  const auto& c = run.cfg;
  const auto eps = c.get_list("map.epsilons", {0.02, 0.04, 0.08});
  const double k0 = c.get_double("map.k0", 1.0);
  CorrespondenceSetup s;
  s.LX = c.get_double("map.LX", s.LX);
  const long NX = c.get_int("map.NX", static_cast<long>(s.NX));
  const long nx = c.get_int("map.n_x", static_cast<long>(s.n_x));
  s.dt = c.get_double("map.dt", s.dt);
  s.t_end = c.get_double("map.t_end", s.t_end);
  s.compare_every = static_cast<int>(c.get_int("map.compare_every", s.compare_every));
  s.amplitude = c.get_double("map.amplitude", s.amplitude);
  s.nls_sign = c.get_double("map.nls_sign", s.nls_sign);
  s.eps_def = c.get_double("map.eps_def", s.eps_def);
  s.include_log = c.get_bool("map.include_log", s.include_log);
  reject_unused(c);
  if (eps.size() < 2) throw ValidationError("map.epsilons", "need >=2 points");
  for (double e : eps)
    if (!(e > 0.0 && e <= 0.1)) throw ValidationError("map.epsilons", "each value must be in (0, 0.1]");
  if (NX <= 0) throw ValidationError("map.NX", "must be a power of two >= 16");
  if (nx <= 0) throw ValidationError("map.n_x", "must be a power of two >= 16");
  s.NX = static_cast<std::size_t>(NX);
  s.n_x = static_cast<std::size_t>(nx);
  validate_grid(s.LX, s.NX, "map.envelope");
  validate_grid(s.LX, s.n_x, "map.kdv");
  if (s.nls_sign != 1.0 && s.nls_sign != -1.0) throw ValidationError("map.nls_sign", "must be 1 or -1");

  const auto study = scaling_study(eps, k0, s);
  std::vector<std::vector<double>> rows;
  for (const auto& r : study.rows) rows.push_back({r.epsilon_wc, r.k0, r.beta, r.error, study.slope});
  run.csv("scaling.csv", {"epsilon", "k0", "beta", "error", "slope"}, rows);
  run.records["slope"] = nan_safe(study.slope);
}

void coupled(Run& run) {
  const auto& c = run.cfg;
  const auto grid = read_grid(c);
  EvolutionProblem p;
  read_time(c, p);
  p.validate("equation");
  const auto init = read_initial(c, grid);
  const auto mode = c.get_string("coupled.mode", "reduction");
  const double k = c.get_double("coupled.k", 0.0);
  const auto q_equation = c.get_string("coupled.q_equation", "lax");
  if (q_equation != "lax" && q_equation != "flipped") throw ValidationError("coupled.q_equation", "expected lax or flipped");
  CoupledSpecs specs{read_deformation(c, "deformation.q"), read_deformation(c, "deformation.qbar")};
  const auto gauge = read_gauge(c, grid);
  const int orders = read_orders(c);
  const int every = read_sample_every(c);
  reject_unused(c);

  CoupledState s0;
  if (mode == "reduction") {
    s0.q = ComplexField{grid.L, std::vector<cplx>(grid.n, 1.0)};
    s0.qbar = to_complex(init.u);
  } else if (mode == "conjugate") {
    const double turns = k * grid.L / (2.0 * std::numbers::pi);
    if (std::abs(turns - std::round(turns)) > 1e-9) throw ValidationError("coupled.k", "k L / 2pi must be an integer");
    s0.q = ComplexField{grid.L, std::vector<cplx>(grid.n)};
    s0.qbar = s0.q;
    for (std::size_t j = 0; j < grid.n; ++j) {
      const cplx ph = std::polar(1.0, k * init.u.x(j));
      s0.q.values[j] = init.u.values[j] * ph;
      s0.qbar.values[j] = init.u.values[j] * std::conj(ph);
    }
  } else {
    throw ValidationError("coupled.mode", "expected reduction or conjugate");
  }

  const auto traj = evolve_coupled(s0, specs, p.dt, p.t_end, every, q_equation == "flipped");
  std::vector<TrajectorySample> real;
  if (mode == "reduction") {
    EvolutionProblem rp = p;
    rp.equation = Equation::DEFORMED_KDV;
    rp.deformation = specs.qbar;
    real = evolve(init.u, rp, every);
  }
  const auto cs = track_coupled_charges(traj, specs, orders, gauge);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& st = std::get<CoupledState>(traj[i].field);
    double vs_real = std::numeric_limits<double>::quiet_NaN();
    if (!real.empty()) {
      const auto& u = std::get<GridField>(real[i].field).values;
      vs_real = 0.0;
      for (std::size_t j = 0; j < u.size(); ++j) vs_real = std::max(vs_real, std::abs(st.qbar.values[j] - u[j]));
    }
    rows.push_back({traj[i].t, cs.q_norm[i], cs.qbar_norm[i], cs.conjugacy[i], vs_real});
  }
  run.csv("coupled_trajectory.csv", {"t", "q_norm", "qbar_norm", "conjugacy_defect", "qbar_vs_real"}, rows);
  run.csv("coupled_charges.csv", coupled_csv_header(), coupled_csv_rows(cs));
  run.records["r0_method"] = cs.r0_method;
  run.records["singular_gauge_times"] = number_list(cs.singular_at);
}

json error_object(const std::string& type, const std::string& message, int code) {
  return {{"type", type}, {"message", message}, {"exit_code", code}};
}

}  // namespace

Config effective_config(const Invocation& inv) {
  Config c = inv.config_path.empty() ? Config() : Config::load(inv.config_path);
  if (inv.seed) c.set("run.seed", std::to_string(*inv.seed));
  if (inv.orders) c.set("charges.orders", std::to_string(*inv.orders));
  return c;
}

int run(const Invocation& inv) {
  const auto start = std::chrono::steady_clock::now();
  std::optional<Config> cfg;
  std::optional<Run> r;
  json err;
  int code = kOk;
  try {
    cfg = effective_config(inv);
    const long seed = cfg->get_int("run.seed", 0);
    if (seed < 0) throw ValidationError("run.seed", "must be >= 0");
    ensure_dir(inv.out_dir);
    r.emplace(Run{*cfg, inv.out_dir});
    if (inv.command == "simulate")
      simulate(*r);
    else if (inv.command == "charges")
      charges(*r);
    else if (inv.command == "verify-algebra")
      verify_algebra(*r, static_cast<std::uint64_t>(seed));
    else if (inv.command == "map-nls")
      map_nls(*r);
    else if (inv.command == "coupled")
      coupled(*r);
    else
      throw ValidationError("command", "unknown subcommand '" + inv.command + "'");
    code = r->status;
  } catch (const ValidationError& e) {
    code = kValidation;
    err = error_object("validation", e.what(), code);
    err["key"] = e.key();
  } catch (const IoError& e) {
    code = kIo;
    err = error_object("io", e.what(), code);
    err["path"] = e.path();
  } catch (const BlowUpError& e) {
    code = kNumerical;
    err = error_object("blow_up", e.what(), code);
    err["t"] = e.time();
    json last = json::object();
    for (const auto& [k, v] : e.last_diagnostics()) last[k] = nan_safe(v);
    err["last_diagnostics"] = last;
  } catch (const SingularGaugeError& e) {
    code = kNumerical;
    err = error_object("singular_gauge", e.what(), code);
    err["x"] = e.location();
  } catch (const DomainError& e) {
    code = kNumerical;
    err = error_object("domain", e.what(), code);
    err["index"] = e.index();
  } catch (const GradeOverflowError& e) {
    code = kNumerical;
    err = error_object("grade_overflow", e.what(), code);
  } catch (const std::exception& e) {
    code = kNumerical;
    err = error_object("numerical", e.what(), code);
  }

  if (!err.is_null()) std::cerr << json{{"error", err}}.dump() << "\n";
  if (!r || !cfg) return code;

  json manifest;
  manifest["version"] = kVersion;
  manifest["command"] = inv.command;
  manifest["config_hash"] = cfg->hash();
  manifest["config"] = cfg->values();
  manifest["outputs"] = r->outputs;
  manifest["records"] = r->records;
  manifest["status"] = err.is_null() ? (code == kOk ? "ok" : "check_failed") : "error";
  if (!err.is_null()) manifest["error"] = err;
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  try {
    write_text(join_path(inv.out_dir, "manifest.json"), manifest.dump(2) + "\n");
    write_text(join_path(inv.out_dir, "timing.json"), json{{"wall_seconds", wall}}.dump(2) + "\n");
  } catch (const IoError& e) {
    std::cerr << json{{"error", error_object("io", e.what(), kIo)}}.dump() << "\n";
    return code == kOk ? kIo : code;
  }
  return code;
}

}  // namespace qikdv::cli
