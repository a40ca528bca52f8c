// chiral_cli: simulate, reduce, reconstruct, verify and plot the planar chiral particle.
//
// Exit codes: 0 success, 1 check failure, 2 usage/config error, 3 numeric failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include "chiral/cli/config.hpp"
#include "chiral/cli/report.hpp"
#include "chiral/cli/svg.hpp"
#include "chiral/cli/trajectory_io.hpp"
#include "chiral/dynamics.hpp"
#include "chiral/verify.hpp"

namespace {

using namespace chiral;
using chiral::cli::InputError;

constexpr int kOk = 0;
constexpr int kCheckFailure = 1;
constexpr int kUsage = 2;
constexpr int kNumeric = 3;

// Parameters from --lambda/--mass, falling back to `base` for flags not given.
struct ParamFlags {
  double lambda = 1.0;
  double mass = 1.0;
  CLI::Option* lambda_opt = nullptr;
  CLI::Option* mass_opt = nullptr;

  void add(CLI::App* cmd) {
    lambda_opt = cmd->add_option("--lambda", lambda, "exotic coupling lambda (default 1)");
    mass_opt = cmd->add_option("--mass", mass, "mass m (default 1)");
  }
  Params resolve(const Params& base) const {
    try {
      return Params(lambda_opt->count() ? lambda : base.lambda(), mass_opt->count() ? mass : base.mass());
    } catch (const Error& e) {
      throw InputError("params", e.what());
    }
  }
  bool given() const { return lambda_opt->count() || mass_opt->count(); }
};

Vec2 vec2_flag(const std::vector<double>& v, const char* name) {
  if (v.size() != 2) throw InputError(name, "expected 2 comma-separated values");
  return {v[0], v[1]};
}

int numeric_or_usage(const Error& e) {
  switch (e.code()) {
    case ErrorCode::InvalidParams:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NegativeLambda: return kUsage;
    default: return kNumeric;
  }
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string config;
  std::string formulation;
  std::string method;
  std::vector<double> z0;
  double dt = 1e-3;
  double t_end = 10.0;
  std::vector<std::string> out;
  ParamFlags params;
  CLI::Option* formulation_opt = nullptr;
  CLI::Option* method_opt = nullptr;
  CLI::Option* z0_opt = nullptr;
  CLI::Option* dt_opt = nullptr;
  CLI::Option* t_end_opt = nullptr;
};

cli::RunConfig build_config(const SimulateArgs& a) {
  cli::RunConfig c = a.config.empty() ? cli::RunConfig{} : cli::load_config(a.config);
  if (a.formulation_opt->count()) c.formulation = cli::formulation_from_name(a.formulation);
  c.params = a.params.resolve(c.params);
  if (a.z0_opt->count()) c.initial = Eigen::Map<const Vector>(a.z0.data(), static_cast<Eigen::Index>(a.z0.size()));
  if (a.dt_opt->count()) c.dt = a.dt;
  if (a.t_end_opt->count()) c.t_end = a.t_end;
  if (a.method_opt->count()) c.method = cli::method_from_name(a.method);
  if (!a.out.empty()) {
    c.outputs.clear();
    for (const std::string& p : a.out) c.outputs.push_back({p, cli::format_from_path(p)});
  }
  cli::validate(c);
  return c;
}

int run_simulate(const SimulateArgs& a) {
  const cli::RunConfig c = build_config(a);
  if (is_full_space(c.formulation)) {
    const Vec2 phi = constraint_values(unflatten(c.initial), c.params);
    if (std::max(std::abs(phi.x), std::abs(phi.y)) > 1e-10) {
      std::cerr << "warning: initial state is off the constraint surface (phi = " << phi.x << ", " << phi.y
                << ")\n";
    }
  }
  const Trajectory t = integrate(c.formulation, c.initial, c.params, c.dt, c.t_end, c.method);
  for (const std::string& w : t.warnings) std::cerr << w << '\n';
  std::ostream& summary = c.outputs.empty() ? std::cerr : std::cout;
  if (c.outputs.empty()) cli::write_csv(std::cout, t);
  for (const cli::OutputSpec& o : c.outputs) {
    if (o.format == "json") {
      std::ofstream out(o.path, std::ios::binary);
      if (!out) throw InputError("out", "cannot write " + o.path);
      out << cli::trajectory_to_json(t).dump() << '\n';
    } else {
      std::ofstream out(o.path, std::ios::binary);
      if (!out) throw InputError("out", "cannot write " + o.path);
      cli::write_csv(out, t);
    }
  }
  summary << to_string(c.formulation) << ", " << to_string(c.method) << ", dt=" << t.step()
          << ", t_end=" << c.t_end << ", lambda=" << c.params.lambda() << ", m=" << c.params.mass() << '\n';
  cli::write_conservation(summary, t);
  return kOk;
}

// ------------------------------------------------------- reduce/reconstruct

void emit(const Trajectory& t, const std::string& out) {
  if (out.empty()) {
    cli::write_csv(std::cout, t);
  } else {
    cli::save_trajectory(out, t);
  }
}

Trajectory load_with_params(const std::string& path, const ParamFlags& flags) {
  Trajectory t = cli::load_trajectory(path, flags.resolve(Params(1.0, 1.0)));
  t.params = flags.resolve(t.params);
  return t;
}

int run_reduce(const std::string& in, const std::string& triple, const ParamFlags& flags, const std::string& out) {
  Triple which;
  if (triple == "dirac") {
    which = Triple::Dirac;
  } else if (triple == "canonical") {
    which = Triple::Canonical;
  } else {
    throw InputError("triple", "expected canonical or dirac");
  }
  const Trajectory t = load_with_params(in, flags);
  if (!t.formulation || t.formulation == Formulation::ReducedLiePoisson) {
    throw InputError("input", "reduce needs a full-space or darboux trajectory");
  }
  emit(project_full_to_reduced(t, which, t.params), out);
  return kOk;
}

int run_reconstruct(const std::string& in, const std::vector<double>& p0, const std::vector<double>& x0,
                    const ParamFlags& flags, const std::string& out) {
  const Trajectory t = load_with_params(in, flags);
  if (t.formulation != Formulation::ReducedLiePoisson) throw InputError("input", "reconstruct needs a reduced trajectory");
  emit(reconstruct(t, vec2_flag(p0, "p0"), vec2_flag(x0, "x0")), out);
  return kOk;
}

// ------------------------------------------------------------------ verify

int run_verify(const std::string& suite_name, std::uint64_t seed, const ParamFlags& flags, const std::string& out) {
  const auto suite = parse_suite(suite_name);
  if (!suite) {
    throw InputError("suite", "unknown '" + suite_name + "' (expected algebra, brackets, hamiltonians, dynamics, "
                              "reduction or all)");
  }
  const auto results = run_suite(*suite, seed, flags.resolve(Params(1.0, 1.0)));
  cli::write_jsonl(std::cout, results);
  if (!out.empty()) {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw InputError("out", "cannot write " + out);
    cli::write_jsonl(f, results);
  }
  cli::write_summary(std::cerr, results);
  return all_ok(results) ? kOk : kCheckFailure;
}

// -------------------------------------------------------------------- plot

int run_plot(const std::string& in, const std::string& kind_name, const ParamFlags& flags, const std::string& out) {
  const auto kind = cli::parse_plot_kind(kind_name);
  if (!kind) {
    throw InputError("kind", "unknown '" + kind_name +
                                 "' (expected xy_curve, orbit_JXJY, paraboloid_residual, invariant_drift)");
  }
  const Trajectory t = load_with_params(in, flags);
  const std::string svg = cli::render_svg(cli::make_plot(*kind, t));
  if (out.empty()) {
    std::cout << svg;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw InputError("out", "cannot write " + out);
    f << svg;
  }
  return kOk;
}

// ------------------------------------------------------------------- sweep

struct SweepArgs {
  std::string formulation = "reduced";
  std::vector<double> z0;
  std::vector<double> lambdas{1.0};
  std::vector<double> masses{1.0};
  double dt = 1e-3;
  double t_end = 10.0;
  std::string method = "rk4";
  std::string out = ".";
};

int run_sweep(const SweepArgs& a) {
  const Formulation f = cli::formulation_from_name(a.formulation);
  const Method method = cli::method_from_name(a.method);
  if (static_cast<int>(a.z0.size()) != state_dim(f)) {
    throw InputError("initial", "expected " + std::to_string(state_dim(f)) + " values, got " +
                                    std::to_string(a.z0.size()));
  }
  std::filesystem::create_directories(a.out);

  struct Job {
    Params params;
    std::string path;
    std::future<Trajectory> result;
  };
  std::vector<Job> jobs;
  for (double lam : a.lambdas) {
    for (double m : a.masses) {
      Params p(1.0, 1.0);
      try {
        p = Params(lam, m);
      } catch (const Error& e) {
        throw InputError("params", e.what());
      }
      Vector y0 = Eigen::Map<const Vector>(a.z0.data(), static_cast<Eigen::Index>(a.z0.size()));
      // Full-space starts are moved onto the constraint surface of each lambda.
      if (is_full_space(f)) {
        const FullState z = unflatten(y0);
        y0 = flatten(on_surface(z.pos, z.vel, z.p0, p));
      }
      const std::string path = (std::filesystem::path(a.out) / (std::string(to_string(f)) + "_lambda" +
                                                                 cli::format_double(lam) + "_mass" +
                                                                 cli::format_double(m) + ".csv"))
                                   .string();
      jobs.push_back({p, path, std::async(std::launch::async, [=] {
                        return integrate(f, y0, p, a.dt, a.t_end, method);
                      })});
    }
  }
  int status = kOk;
  std::cout << "lambda,mass,max_dH,file\n";
  for (Job& j : jobs) {
    try {
      const Trajectory t = j.result.get();
      cli::save_trajectory(j.path, t);
      std::cout << cli::format_double(j.params.lambda()) << ',' << cli::format_double(j.params.mass()) << ','
                << cli::format_double(conservation(t).energy) << ',' << j.path << '\n';
    } catch (const Error& e) {
      std::cerr << "lambda=" << j.params.lambda() << " mass=" << j.params.mass() << ": " << e.what() << '\n';
      status = numeric_or_usage(e);
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ostrogradskii, Dirac and reduced dynamics of the planar chiral particle"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "integrate one formulation and write the trajectory");
  simulate->add_option("--config", sim.config, "JSON RunConfig file; flags override its fields");
  sim.formulation_opt = simulate->add_option("--formulation", sim.formulation,
                                             "canonical_dirac_h | dirac_canonical_h | darboux | reduced");
  sim.params.add(simulate);
  sim.z0_opt = simulate->add_option("--z0", sim.z0, "initial state, comma separated")->delimiter(',');
  sim.dt_opt = simulate->add_option("--dt", sim.dt, "step size (default 1e-3)");
  sim.t_end_opt = simulate->add_option("--t-end", sim.t_end, "final time (default 10)");
  sim.method_opt = simulate->add_option("--method", sim.method, "rk4 | implicit_midpoint");
  simulate->add_option("--out", sim.out, "output file(s), .csv or .json; CSV to stdout if absent");

  std::string in, triple = "dirac", out, kind, suite = "all";
  std::vector<double> p0, x0{0.0, 0.0};
  std::uint64_t seed = 42;
  ParamFlags reduce_params, reconstruct_params, verify_params, plot_params;

  auto* reduce = app.add_subcommand("reduce", "project a full-space trajectory onto (J_R, J_X, J_Y, l^2)");
  reduce->add_option("--in", in, "trajectory file (.csv or .json)")->required();
  reduce->add_option("--triple", triple, "canonical | dirac (default dirac)");
  reduce_params.add(reduce);
  reduce->add_option("--out", out, "output file; CSV to stdout if absent");

  auto* recon = app.add_subcommand("reconstruct", "configuration curve from a reduced trajectory");
  recon->add_option("--in", in, "reduced trajectory file")->required();
  recon->add_option("--p0", p0, "conserved linear momentum px,py")->delimiter(',')->required();
  recon->add_option("--x0", x0, "initial position x,y (default 0,0)")->delimiter(',');
  reconstruct_params.add(recon);
  recon->add_option("--out", out, "output file; CSV to stdout if absent");

  auto* verify = app.add_subcommand("verify", "run a verification suite, JSON lines on stdout");
  verify->add_option("suite", suite, "algebra | brackets | hamiltonians | dynamics | reduction | all");
  verify->add_option("--seed", seed, "PRNG seed (default 42)");
  verify_params.add(verify);
  verify->add_option("--out", out, "also write the JSON-lines report here");

  auto* plot = app.add_subcommand("plot", "static SVG plot of a trajectory");
  plot->add_option("--in", in, "trajectory file")->required();
  plot->add_option("--kind", kind, "xy_curve | orbit_JXJY | paraboloid_residual | invariant_drift")->required();
  plot_params.add(plot);
  plot->add_option("--out", out, "SVG file; stdout if absent");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "integrate over a grid of (lambda, mass), one CSV per point");
  sweep->add_option("--formulation", sw.formulation, "formulation (default reduced)");
  sweep->add_option("--z0", sw.z0, "initial state, comma separated")->delimiter(',')->required();
  sweep->add_option("--lambda", sw.lambdas, "lambda values, comma separated")->delimiter(',');
  sweep->add_option("--mass", sw.masses, "mass values, comma separated")->delimiter(',');
  sweep->add_option("--dt", sw.dt, "step size");
  sweep->add_option("--t-end", sw.t_end, "final time");
  sweep->add_option("--method", sw.method, "rk4 | implicit_midpoint");
  sweep->add_option("--out", sw.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*reduce) return run_reduce(in, triple, reduce_params, out);
    if (*recon) return run_reconstruct(in, p0, x0, reconstruct_params, out);
    if (*verify) return run_verify(suite, seed, verify_params, out);
    if (*plot) return run_plot(in, kind, plot_params, out);
    if (*sweep) return run_sweep(sw);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return numeric_or_usage(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  }
  return kUsage;
}
