#pragma once

// Calibration of bare couplings by gradient descent on
// C(g) = sum_i (target_i - observable_i(g))^2.

#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "cqft/errors.hpp"
#include "cqft/kinematics.hpp"
#include "cqft/perturbation.hpp"

namespace cqft {

enum class ObservableKind { Theta, Omega, OneLoopSmeared, OneLoopPlain };

struct Observable {
  ObservableKind kind = ObservableKind::Theta;
  double p = 0.0;  ///< probe momentum (theta, omega) or incoming momentum (smeared one-loop)

  std::string name() const {
    switch (kind) {
      case ObservableKind::Theta: return "theta:" + format(p);
      case ObservableKind::Omega: return "omega:" + format(p);
      case ObservableKind::OneLoopSmeared: return "one_loop_smeared:" + format(p);
      case ObservableKind::OneLoopPlain: return "one_loop_plain";
    }
    return "?";
  }

 private:
  static std::string format(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
  }
};

/// Parses "theta:<p>", "omega:<p>", "one_loop_smeared[:<p_in>]" or "one_loop_plain".
inline Observable parse_observable(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string head(spec.substr(0, colon));
  const bool has_arg = colon != std::string_view::npos;
  double arg = 0.0;
  if (has_arg) {
    const std::string tail(spec.substr(colon + 1));
    std::size_t used = 0;
    try {
      arg = std::stod(tail, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tail.size()) throw DomainError("bad observable argument in '" + std::string(spec) + "'");
  }
  if (head == "theta" || head == "omega") {
    if (!has_arg) throw DomainError("observable '" + head + "' needs a probe momentum");
    return {head == "theta" ? ObservableKind::Theta : ObservableKind::Omega, arg};
  }
  if (head == "one_loop_smeared") return {ObservableKind::OneLoopSmeared, arg};
  if (head == "one_loop_plain" && !has_arg) return {ObservableKind::OneLoopPlain, 0.0};
  throw DomainError("unknown observable '" + std::string(spec) + "'");
}

struct RenormProblem {
  LatticeConfig base;                   ///< fixed lattice data; tuned fields are overwritten
  std::vector<Observable> observables;
  std::vector<double> targets;
  std::vector<std::string> parameters;  ///< subset of {"m", "lambda"}
  std::vector<double> init;
  double eta = 0.05;
  double fd_step = 1e-4;
  double tol = 1e-7;                    ///< stop when the gradient norm falls below this
  int max_iters = 500;
  bool backtrack = true;                ///< halve the step while the cost would increase
  int max_halvings = 30;
  OneLoopOptions loop{};

  void validate() const {
    detail::require(std::isfinite(eta) && eta > 0.0, "eta must be positive");
    detail::require(std::isfinite(fd_step) && fd_step > 0.0, "fd_step must be positive");
    detail::require(std::isfinite(tol) && tol >= 0.0, "tol must be non-negative");
    detail::require(max_iters >= 0, "max_iters must be non-negative");
    detail::require(targets.size() == observables.size(), "need one target per observable");
    detail::require(init.size() == parameters.size(), "need one initial value per parameter");
    for (std::size_t i = 0; i < parameters.size(); ++i) {
      detail::require(parameters[i] == "m" || parameters[i] == "lambda", "tunable parameters are m and lambda");
      for (std::size_t j = 0; j < i; ++j) detail::require(parameters[i] != parameters[j], "duplicate parameter");
    }
  }
};

namespace detail {

inline std::string describe_point(const RenormProblem& pr, const std::vector<double>& g) {
  std::string s = "{";
  for (std::size_t i = 0; i < g.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%s=%.17g", i ? ", " : "", pr.parameters[i].c_str(), g[i]);
    s += buf;
  }
  return s + "}";
}

inline LatticeParams params_at(const RenormProblem& pr, const std::vector<double>& g) {
  LatticeConfig c = pr.base;
  for (std::size_t i = 0; i < g.size(); ++i) (pr.parameters[i] == "m" ? c.m : c.lambda) = g[i];
  return LatticeParams(c);
}

inline double evaluate(const Observable& o, const LatticeParams& params, const OneLoopOptions& loop) {
  require(params.m() > 0.0, "observables require m > 0");
  switch (o.kind) {
    case ObservableKind::Theta: return dispersion_theta(params, Momentum{o.p});
    case ObservableKind::Omega: return omega(params, Momentum{o.p});
    case ObservableKind::OneLoopSmeared: return one_loop_mass(Regulator::ShiftSmeared, params, o.p, loop);
    case ObservableKind::OneLoopPlain: return one_loop_mass(Regulator::ShiftPlain, params, 0.0, loop);
  }
  throw DomainError("unknown observable kind");
}

}  // namespace detail

/// Observables at bare parameters g. Validation failures are reported as
/// ObservableFailure naming the parameter point.
inline std::vector<double> simulate_observables(const std::vector<double>& g, const RenormProblem& pr) {
  detail::require(g.size() == pr.parameters.size(), "parameter vector has the wrong size");
  std::vector<double> out;
  out.reserve(pr.observables.size());
  try {
    const auto params = detail::params_at(pr, g);
    for (const auto& o : pr.observables) out.push_back(detail::evaluate(o, params, pr.loop));
  } catch (const Error& e) {
    if (e.category() != ErrorCategory::Validation) throw;
    throw ObservableFailure(std::string(e.what()) + " at " + detail::describe_point(pr, g));
  }
  for (double v : out)
    if (!std::isfinite(v)) throw NonFinite("observable is not finite at " + detail::describe_point(pr, g));
  return out;
}

inline double cost(const std::vector<double>& g, const RenormProblem& pr) {
  const auto sim = simulate_observables(g, pr);
  double c = 0.0;
  for (std::size_t i = 0; i < sim.size(); ++i) c += (pr.targets[i] - sim[i]) * (pr.targets[i] - sim[i]);
  if (!std::isfinite(c)) throw NonFinite("cost is not finite at " + detail::describe_point(pr, g));
  return c;
}

/// Central differences with h_i = scale * max(1, |g_i|).
inline std::vector<double> cost_gradient(const std::vector<double>& g, const RenormProblem& pr, double scale) {
  std::vector<double> grad(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double h = scale * std::max(1.0, std::abs(g[i]));
    auto up = g, down = g;
    up[i] += h;
    down[i] -= h;
    grad[i] = (cost(up, pr) - cost(down, pr)) / (2.0 * h);
  }
  return grad;
}

inline double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

struct GradientCheck {
  std::vector<double> finite_difference;
  std::vector<double> richardson;  ///< (4 D(h/2) - D(h)) / 3
  double relative_difference;
};

inline GradientCheck gradient_self_check(const std::vector<double>& g, const RenormProblem& pr) {
  const auto d1 = cost_gradient(g, pr, pr.fd_step);
  const auto d2 = cost_gradient(g, pr, 0.5 * pr.fd_step);
  std::vector<double> r(g.size()), diff(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    r[i] = (4.0 * d2[i] - d1[i]) / 3.0;
    diff[i] = d1[i] - r[i];
  }
  const double denom = norm2(r);
  return {d1, r, denom > 0.0 ? norm2(diff) / denom : norm2(diff)};
}

struct TraceEntry {
  int iteration;
  std::vector<double> params;
  double cost;
  double grad_norm;
  double step;  ///< eta actually used to reach the next point (0 on the last entry)
};

struct CalibrationResult {
  std::vector<double> params;
  std::vector<TraceEntry> trace;
  bool converged = false;
  int iterations = 0;
};

/// Fixed-eta gradient descent with optional halving backtracking.
inline CalibrationResult calibrate(const RenormProblem& pr) {
  pr.validate();
  CalibrationResult res;
  std::vector<double> g = pr.init;
  double c = cost(g, pr);
  int increases = 0;
  for (int it = 0;; ++it) {
    const auto grad = cost_gradient(g, pr, pr.fd_step);
    const double gn = norm2(grad);
    if (!std::isfinite(gn)) throw NonFinite("gradient is not finite at " + detail::describe_point(pr, g));
    res.trace.push_back({it, g, c, gn, 0.0});
    if (gn < pr.tol) {
      res.converged = true;
      break;
    }
    if (it == pr.max_iters) break;

    double eta = pr.eta;
    std::vector<double> next(g.size());
    double c_next = 0.0;
    for (int h = 0;; ++h) {
      for (std::size_t i = 0; i < g.size(); ++i) next[i] = g[i] - eta * grad[i];
      try {
        c_next = cost(next, pr);
      } catch (const ObservableFailure&) {
        // Stepped outside the valid region (e.g. m <= 0): shrink if allowed.
        if (!pr.backtrack || h >= pr.max_halvings) throw;
        eta *= 0.5;
        continue;
      }
      if (c_next <= c || !pr.backtrack || h >= pr.max_halvings) break;
      eta *= 0.5;
    }
    res.trace.back().step = eta;
    increases = c_next > c ? increases + 1 : 0;
    if (increases >= 5) throw Diverged("cost increased for 5 consecutive steps at " + detail::describe_point(pr, next));
    g = next;
    c = c_next;
    res.iterations = it + 1;
  }
  res.params = g;
  return res;
}

}  // namespace cqft
