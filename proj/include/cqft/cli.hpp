#pragma once

// Command-line front end. Each subcommand owns a flat table of fields; the
// same table drives the CLI flags, the JSON config file and the resolved
// config echoed into every output.

#include <CLI11.hpp>
#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "cqft/errors.hpp"
#include "cqft/gauge.hpp"
#include "cqft/gaussian.hpp"
#include "cqft/kinematics.hpp"
#include "cqft/perturbation.hpp"
#include "cqft/propagator.hpp"
#include "cqft/renorm.hpp"
#include "cqft/statevector.hpp"

namespace cqft::cli {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

/// Fixed 17-significant-digit formatting.
inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Validation: return 1;
    case ErrorCategory::Convergence: return 2;
    case ErrorCategory::ResourceCap: return 3;
  }
  return 1;
}

using FieldRef = std::variant<double*, int*, std::string*, std::vector<double>*, std::vector<int>*>;

struct Field {
  std::string key;  ///< JSON key; the flag is --key with '_' replaced by '-'
  FieldRef ref;
  std::string help;
  CLI::Option* option = nullptr;
};

/// What a subcommand produces: CSV rows or a JSON report body.
struct Output {
  bool is_json = false;
  std::string csv;     ///< header row plus data rows
  ordered_json report; ///< report fields after config_hash and config
};

class Command {
 public:
  using Action = std::function<Output(const json& config)>;

  Command(std::string name, std::string description) : name_(std::move(name)), description_(std::move(description)) {}

  Command& field(std::string key, FieldRef ref, std::string help) {
    fields_.push_back({std::move(key), ref, std::move(help)});
    return *this;
  }
  Command& action(Action a) {
    action_ = std::move(a);
    return *this;
  }
  /// Extra bytes folded into the config hash (e.g. contents of referenced files).
  Command& salt(std::function<std::string()> f) {
    salt_ = std::move(f);
    return *this;
  }
  /// Runs after merging flags and config file (e.g. to fill derived defaults).
  Command& resolve(std::function<void()> r) {
    resolve_ = std::move(r);
    return *this;
  }

  void attach(CLI::App& app) {
    app_ = app.add_subcommand(name_, description_);
    app_->add_option("--config", config_path_, "JSON config file; explicit flags override it");
    app_->add_option("--out", out_path_, "output file (default: standard output)");
    for (auto& f : fields_) {
      std::string flag = "--" + f.key;
      for (auto& ch : flag)
        if (ch == '_') ch = '-';
      if (flag != "--" + f.key) flag += ",--" + f.key;
      std::visit(
          [&](auto* p) {
            using T = std::remove_pointer_t<decltype(p)>;
            auto* opt = app_->add_option(flag, *p, f.help)->capture_default_str();
            if constexpr (std::is_same_v<T, std::vector<double>> || std::is_same_v<T, std::vector<int>>)
              opt->delimiter(',');
            f.option = opt;
          },
          f.ref);
    }
  }

  bool parsed() const { return app_ != nullptr && app_->parsed(); }
  const std::string& name() const { return name_; }
  const std::string& out_path() const { return out_path_; }

  /// Applies the config file to every field not given on the command line.
  void merge_config() {
    if (config_path_.empty()) return;
    std::ifstream in(config_path_);
    if (!in) throw DomainError("cannot open config file '" + config_path_ + "'");
    json cfg;
    try {
      cfg = json::parse(in);
    } catch (const json::exception& e) {
      throw DomainError("config file is not valid JSON: " + std::string(e.what()));
    }
    if (!cfg.is_object()) throw DomainError("config file must hold a JSON object");
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
      if (it.key() == "subcommand") {
        if (it.value() != name_) throw DomainError("config file is for subcommand " + it.value().dump());
        continue;
      }
      Field* f = find(it.key());
      if (f == nullptr) throw DomainError("unknown config key '" + it.key() + "' for " + name_);
      if (f->option->count() > 0) continue;
      try {
        std::visit([&](auto* p) { *p = it.value().get<std::remove_pointer_t<decltype(p)>>(); }, f->ref);
      } catch (const json::exception&) {
        throw DomainError("config key '" + it.key() + "' has the wrong type");
      }
    }
  }

  json resolved() const {
    json j = json::object();
    j["subcommand"] = name_;
    for (const auto& f : fields_) std::visit([&](auto* p) { j[f.key] = *p; }, f.ref);
    return j;
  }

  /// Full output text, starting with the config hash.
  std::string execute() {
    if (resolve_) resolve_();
    const json cfg = resolved();
    const std::string dump = cfg.dump();
    const std::string hash = hex64(fnv1a64(salt_ ? dump + salt_() : dump));
    Output out = action_(cfg);
    if (!out.is_json) return "# config_hash=" + hash + " config=" + dump + "\n" + out.csv;
    ordered_json report;
    report["config_hash"] = hash;
    report["config"] = cfg;
    for (auto it = out.report.begin(); it != out.report.end(); ++it) report[it.key()] = it.value();
    return report.dump(2) + "\n";
  }

 private:
  Field* find(const std::string& key) {
    for (auto& f : fields_)
      if (f.key == key) return &f;
    return nullptr;
  }

  std::string name_, description_;
  std::vector<Field> fields_;
  Action action_;
  std::function<void()> resolve_;
  std::function<std::string()> salt_;
  CLI::App* app_ = nullptr;
  std::string config_path_, out_path_;
};

inline ordered_json complex_json(cplx z) { return ordered_json::array({z.real(), z.imag()}); }

inline double rel_error(cplx got, cplx want) {
  const double s = std::abs(want);
  return std::abs(got - want) / (s > 0.0 ? s : 1.0);
}

struct LatticeFields {
  double a = 0.1, dt = 0.0, m = 1.0, lambda = 0.0;

  void add_to(Command& c) {
    c.field("a", &a, "lattice spacing")
        .field("dt", &dt, "timestep (0 selects dt = a)")
        .field("m", &m, "bare mass")
        .field("lambda", &lambda, "quartic coupling");
  }
  void resolve() {
    if (dt == 0.0) dt = a;
  }
  LatticeParams params() const {
    LatticeConfig c;
    c.a = a;
    c.dt = dt;
    c.m = m;
    c.lambda = lambda;
    return LatticeParams(c);
  }
};

inline CircuitKind parse_circuit(const std::string& s) {
  if (s == "shift") return CircuitKind::Shift;
  if (s == "strang") return CircuitKind::Strang;
  throw DomainError("circuit kind must be shift or strang, got '" + s + "'");
}

inline StepKind parse_step(const std::string& s) {
  if (s == "shift") return StepKind::Shift;
  if (s == "strang") return StepKind::Strang;
  if (s == "trotter") return StepKind::Trotter;
  throw DomainError("step kind must be strang, trotter or shift, got '" + s + "'");
}

inline IEpsilon parse_prescription(const std::string& s) {
  if (s == "denominator") return IEpsilon::Denominator;
  if (s == "shifted_theta") return IEpsilon::ShiftedTheta;
  throw DomainError("prescription must be denominator or shifted_theta, got '" + s + "'");
}

/// Reads a calibration problem file.
inline RenormProblem load_renorm_problem(const json& j) {
  if (!j.is_object()) throw DomainError("renorm problem must be a JSON object");
  static const std::vector<std::string> allowed{"observables", "targets", "planted", "init",     "eta",
                                                "fd_step",     "tol",     "max_iters", "lattice", "backtrack"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw DomainError("unknown renorm problem key '" + it.key() + "'");
  RenormProblem pr;
  try {
    if (j.contains("lattice")) {
      const auto& l = j.at("lattice");
      for (auto it = l.begin(); it != l.end(); ++it) {
        if (it.key() == "a") pr.base.a = it.value().get<double>();
        else if (it.key() == "dt") pr.base.dt = it.value().get<double>();
        else if (it.key() == "m") pr.base.m = it.value().get<double>();
        else if (it.key() == "lambda") pr.base.lambda = it.value().get<double>();
        else throw DomainError("unknown lattice key '" + it.key() + "' in renorm problem");
      }
    }
    for (const auto& o : j.at("observables")) pr.observables.push_back(parse_observable(o.get<std::string>()));
    const auto& init = j.at("init");
    if (!init.is_object() || init.empty()) throw DomainError("init must be a non-empty object of parameter values");
    for (auto it = init.begin(); it != init.end(); ++it) {
      pr.parameters.push_back(it.key());
      pr.init.push_back(it.value().get<double>());
    }
    if (j.contains("eta")) pr.eta = j.at("eta").get<double>();
    if (j.contains("fd_step")) pr.fd_step = j.at("fd_step").get<double>();
    if (j.contains("tol")) pr.tol = j.at("tol").get<double>();
    if (j.contains("max_iters")) pr.max_iters = j.at("max_iters").get<int>();
    if (j.contains("backtrack")) pr.backtrack = j.at("backtrack").get<bool>();
    if (j.contains("targets") == j.contains("planted"))
      throw DomainError("renorm problem needs exactly one of targets or planted");
    if (j.contains("targets")) {
      pr.targets = j.at("targets").get<std::vector<double>>();
    } else {
      std::vector<double> g;
      for (const auto& name : pr.parameters) g.push_back(j.at("planted").at(name).get<double>());
      pr.targets = simulate_observables(g, pr);
    }
  } catch (const json::exception& e) {
    throw DomainError("malformed renorm problem: " + std::string(e.what()));
  }
  pr.validate();
  return pr;
}

/// Runs the tool. Output goes to --out or `out`; diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Discrete-spacetime quantum field theory checks and tables", "cqft"};
  app.require_subcommand(1, 1);
  std::vector<std::unique_ptr<Command>> commands;
  auto make = [&](const char* name, const char* desc) -> Command& {
    commands.push_back(std::make_unique<Command>(name, desc));
    return *commands.back();
  };

  // dispersion
  LatticeFields disp_lat;
  int disp_L = 256;
  {
    auto& c = make("dispersion", "dispersion table p, theta, omega, E, E_latt over [0, pi/a]");
    disp_lat.add_to(c);
    c.field("L", &disp_L, "number of momentum rows");
    c.resolve([&] { disp_lat.resolve(); });
    c.action([&](const json&) {
      detail::require(disp_L >= 2, "L must be at least 2");
      const auto params = disp_lat.params();
      detail::require(params.m() > 0.0, "dispersion table requires m > 0");
      std::string s = "p,theta,omega,E,E_latt\n";
      for (int k = 0; k < disp_L; ++k) {
        const double p = (k == disp_L - 1) ? pi / params.a() : k * (pi / params.a()) / (disp_L - 1);
        const Momentum mom{p};
        const auto ref = reference_energies(params, mom);
        s += num(p) + "," + num(dispersion_theta(params, mom)) + "," + num(omega(params, mom)) + "," + num(ref.E) +
             "," + num(ref.E_latt) + "\n";
      }
      return Output{false, s, {}};
    });
  }

  // movers
  LatticeFields mov_lat;
  mov_lat.m = 0.0;
  int mov_L = 8;
  {
    auto& c = make("movers", "mover shift residual of the Shift circuit");
    mov_lat.add_to(c);
    c.field("L", &mov_L, "number of sites");
    c.resolve([&] { mov_lat.resolve(); });
    c.action([&](const json&) {
      const auto params = mov_lat.params();
      Output o{true, {}, {}};
      o.report["L"] = mov_L;
      o.report["residual"] = mover_shift_residual(params, mov_L);
      o.report["exact_regime"] = params.m() == 0.0 && params.lambda() == 0.0;
      return o;
    });
  }

  // lightcone
  LatticeFields lc_lat;
  int lc_L = 0, lc_tau = 5;
  std::string lc_component = "field";
  {
    auto& c = make("lightcone", "support radius of an evolved single-site observable");
    lc_lat.add_to(c);
    c.field("L", &lc_L, "number of sites (0 selects 4 tau_max + 3)")
        .field("tau_max", &lc_tau, "largest number of steps")
        .field("component", &lc_component, "field or momentum");
    c.resolve([&] {
      lc_lat.resolve();
      if (lc_L == 0) lc_L = 4 * lc_tau + 3;
    });
    c.action([&](const json&) {
      detail::require(lc_tau >= 0, "tau_max must be non-negative");
      detail::require(lc_component == "field" || lc_component == "momentum", "component must be field or momentum");
      const auto comp = lc_component == "field" ? PerturbationComponent::Field : PerturbationComponent::Momentum;
      const auto params = lc_lat.params();
      std::string s = "tau,shift,strang\n";
      for (int t = 0; t <= lc_tau; ++t)
        s += std::to_string(t) + "," + std::to_string(lightcone_radius(params, lc_L, CircuitKind::Shift, t, comp)) +
             "," + std::to_string(lightcone_radius(params, lc_L, CircuitKind::Strang, t, comp)) + "\n";
      return Output{false, s, {}};
    });
  }

  // propagator
  LatticeFields prop_lat;
  int prop_n0 = 64, prop_n1 = 64;
  double prop_eps = 1e-3;
  std::string prop_presc = "denominator";
  {
    auto& c = make("propagator", "momentum-space Feynman propagator on a zone grid");
    prop_lat.add_to(c);
    c.field("n_p0", &prop_n0, "frequency nodes")
        .field("n_p", &prop_n1, "spatial momentum nodes")
        .field("epsilon", &prop_eps, "i epsilon")
        .field("prescription", &prop_presc, "denominator or shifted_theta");
    c.resolve([&] { prop_lat.resolve(); });
    c.action([&](const json&) {
      detail::require(prop_n0 >= 1 && prop_n1 >= 1, "node counts must be positive");
      const auto params = prop_lat.params();
      const auto presc = parse_prescription(prop_presc);
      std::string s = "p0,p1,re,im\n";
      for (int i = 0; i < prop_n0; ++i) {
        const double p0 = periodic_node(i, prop_n0, pi / params.dt());
        for (int j = 0; j < prop_n1; ++j) {
          const double p1 = periodic_node(j, prop_n1, pi / params.a());
          const cplx v = feynman_momentum({params, p0, Momentum{p1}, prop_eps, presc});
          s += num(p0) + "," + num(p1) + "," + num(v.real()) + "," + num(v.imag()) + "\n";
        }
      }
      return Output{false, s, {}};
    });
  }

  // oneloop
  LatticeFields ol_lat;
  ol_lat.lambda = 1.0;
  std::vector<double> ol_series{0.2, 0.1, 0.05, 0.025};
  double ol_pin = 0.0;
  {
    auto& c = make("oneloop", "one-loop mass correction for three regulators over a series of spacings");
    c.field("m", &ol_lat.m, "bare mass")
        .field("lambda", &ol_lat.lambda, "quartic coupling")
        .field("a_series", &ol_series, "comma-separated lattice spacings")
        .field("p_in", &ol_pin, "incoming momentum for the smeared vertex");
    c.action([&](const json&) {
      detail::require(!ol_series.empty(), "a_series must not be empty");
      struct Row {
        double a, cont, plain, smeared;
      };
      std::vector<Row> rows;
      for (double a : ol_series) {
        auto lat = ol_lat;
        lat.a = a;
        lat.dt = a;
        const auto params = lat.params();
        rows.push_back({a, one_loop_mass(Regulator::ContinuumCutoff, params),
                        one_loop_mass(Regulator::ShiftPlain, params),
                        one_loop_mass(Regulator::ShiftSmeared, params, ol_pin)});
      }
      const Row* ref = &rows.front();
      for (const auto& r : rows)
        if (r.a > ref->a) ref = &r;
      std::string s =
          "a,pi_cont,pi_shift_plain,pi_shift_smeared,pi_cont_norm,pi_shift_plain_norm,pi_shift_smeared_norm\n";
      for (const auto& r : rows)
        s += num(r.a) + "," + num(r.cont) + "," + num(r.plain) + "," + num(r.smeared) + "," + num(r.cont - ref->cont) +
             "," + num(r.plain - ref->plain) + "," + num(r.smeared - ref->smeared) + "\n";
      return Output{false, s, {}};
    });
  }

  // pathint-check
  LatticeFields pi_lat;
  pi_lat.a = 0.5;
  pi_lat.lambda = 0.1;
  std::string pi_kind = "strang", pi_grid = "matched";
  int pi_L = 2, pi_n = 16, pi_tau = 2;
  double pi_extent = 0.0;
  std::vector<int> pi_i, pi_f;
  {
    auto& c = make("pathint-check", "circuit amplitude against path-sum and action-form evaluations");
    pi_lat.add_to(c);
    c.field("kind", &pi_kind, "strang, trotter or shift")
        .field("L", &pi_L, "number of sites")
        .field("n_points", &pi_n, "field grid points per site")
        .field("tau", &pi_tau, "number of steps")
        .field("grid", &pi_grid, "matched or fixed")
        .field("phi_max", &pi_extent, "field extent for the fixed grid (0 selects the default)")
        .field("phi_i", &pi_i, "initial configuration as grid indices (default: centre)")
        .field("phi_f", &pi_f, "final configuration as grid indices (default: centre)");
    c.resolve([&] {
      pi_lat.resolve();
      if (pi_i.empty()) pi_i.assign(std::max(pi_L, 0), pi_n / 2);
      if (pi_f.empty()) pi_f.assign(std::max(pi_L, 0), pi_n / 2);
      if (pi_grid == "fixed" && pi_extent == 0.0 && pi_lat.m > 0.0)
        pi_extent = FieldGrid::default_extent(pi_lat.params());
    });
    c.action([&](const json&) {
      const auto params = pi_lat.params();
      const auto kind = parse_step(pi_kind);
      FieldGrid grid;
      if (pi_grid == "matched")
        grid = FieldGrid::gauss_matched(pi_n, params);
      else if (pi_grid == "fixed")
        grid = FieldGrid::fixed_extent(pi_n, pi_extent);
      else
        throw DomainError("grid must be matched or fixed");
      const TruncatedLattice lat(pi_L, grid, params);
      const cplx circ = amplitude_circuit(lat, kind, params.lambda(), pi_i, pi_f, pi_tau);
      const cplx path = amplitude_path_sum(lat, kind, params.lambda(), pi_i, pi_f, pi_tau);
      Output o{true, {}, {}};
      o.report["kind"] = pi_kind;
      o.report["L"] = pi_L;
      o.report["n_points"] = pi_n;
      o.report["tau"] = pi_tau;
      o.report["delta_phi"] = grid.delta_phi;
      o.report["circuit_amp"] = complex_json(circ);
      o.report["path_amp"] = complex_json(path);
      ordered_json rel;
      rel["path"] = rel_error(path, circ);
      if (kind == StepKind::Strang && pi_tau >= 1) {
        const cplx act = amplitude_action_form(lat, params.lambda(), pi_i, pi_f, pi_tau);
        o.report["action_amp"] = complex_json(act);
        rel["action"] = rel_error(act, circ);
      } else {
        o.report["action_amp"] = nullptr;
        rel["action"] = nullptr;
      }
      o.report["rel_errors"] = rel;
      return o;
    });
  }

  // gauge-check
  int gc_N = 2, gc_Lx = 2, gc_Ly = 2, gc_tau = 1;
  double gc_g = 1.0, gc_kappa = 1.0;
  std::vector<int> gc_i, gc_f;
  {
    auto& c = make("gauge-check", "Z_N transfer matrix against the Wilson-action sum");
    c.field("N", &gc_N, "group order")
        .field("Lx", &gc_Lx, "sites along x")
        .field("Ly", &gc_Ly, "sites along y")
        .field("g", &gc_g, "gauge coupling")
        .field("kappa", &gc_kappa, "anisotropy dt / a")
        .field("tau", &gc_tau, "number of steps")
        .field("U_i", &gc_i, "initial link configuration (default: identity)")
        .field("U_f", &gc_f, "final link configuration (default: identity)");
    c.resolve([&] {
      const int links = 2 * std::max(gc_Lx, 0) * std::max(gc_Ly, 0);
      if (gc_i.empty()) gc_i.assign(links, 0);
      if (gc_f.empty()) gc_f.assign(links, 0);
    });
    c.action([&](const json&) {
      const GaugeLattice lat(gc_Lx, gc_Ly);
      const GaugeGroupZN G(gc_N);
      const auto r = amplitude_equiv_check(lat, G, gc_g, gc_kappa, gc_i, gc_f, gc_tau);
      Output o{true, {}, {}};
      o.report["N"] = gc_N;
      o.report["lattice"] = ordered_json::array({gc_Lx, gc_Ly});
      o.report["g"] = gc_g;
      o.report["kappa"] = gc_kappa;
      o.report["tau"] = gc_tau;
      o.report["lhs"] = complex_json(r.lhs);
      o.report["rhs"] = complex_json(r.rhs);
      o.report["deviation"] = r.deviation;
      o.report["wel_unitarity_deviation"] = unitarity_report(G, gc_g, gc_kappa);
      o.report["gauss_commutator_max"] = gauss_commutator_max(lat, G, gc_g, gc_kappa);
      return o;
    });
  }

  // renorm
  std::string rn_problem_path;
  std::string rn_problem_text;
  {
    auto& c = make("renorm", "gradient-descent calibration of bare parameters");
    c.field("problem", &rn_problem_path, "JSON problem file");
    c.salt([&] { return rn_problem_text; });
    c.action([&](const json&) {
      const auto pr = load_renorm_problem(json::parse(rn_problem_text));
      const auto check = gradient_self_check(pr.init, pr);
      const auto res = calibrate(pr);
      Output o{true, {}, {}};
      o.report["problem"] = ordered_json::parse(rn_problem_text);
      o.report["parameters"] = pr.parameters;
      o.report["converged"] = res.converged;
      o.report["iterations"] = res.iterations;
      o.report["params"] = res.params;
      o.report["final_cost"] = res.trace.back().cost;
      ordered_json gc;
      gc["finite_difference"] = check.finite_difference;
      gc["richardson"] = check.richardson;
      gc["relative_difference"] = check.relative_difference;
      o.report["gradient_check"] = gc;
      ordered_json trace = ordered_json::array();
      for (const auto& t : res.trace) {
        ordered_json e;
        e["iteration"] = t.iteration;
        e["params"] = t.params;
        e["cost"] = t.cost;
        e["grad_norm"] = t.grad_norm;
        e["step"] = t.step;
        trace.push_back(e);
      }
      o.report["trace"] = trace;
      return o;
    });
  }

  for (auto& c : commands) c.get()->attach(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::All);
    return 1;
  }

  Command* cmd = nullptr;
  for (auto& c : commands)
    if (c->parsed()) cmd = c.get();
  if (cmd == nullptr) {
    err << app.help();
    return 1;
  }

  try {
    cmd->merge_config();
    if (cmd->name() == "renorm") {
      detail::require(!rn_problem_path.empty(), "renorm needs --problem");
      std::ifstream in(rn_problem_path);
      if (!in) throw DomainError("cannot open problem file '" + rn_problem_path + "'");
      std::stringstream ss;
      ss << in.rdbuf();
      rn_problem_text = ss.str();
      try {
        const json probe = json::parse(rn_problem_text);
        if (!probe.is_object()) throw DomainError("problem file must hold a JSON object");
      } catch (const json::exception& e) {
        throw DomainError("problem file is not valid JSON: " + std::string(e.what()));
      }
    }
    const std::string text = cmd->execute();
    if (cmd->out_path().empty()) {
      out << text;
    } else {
      std::ofstream f(cmd->out_path(), std::ios::binary);
      if (!f) throw DomainError("cannot write '" + cmd->out_path() + "'");
      f << text;
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.category());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cqft::cli
