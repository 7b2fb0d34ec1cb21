// socindex: scenario runner for the SOC change index.
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "socindex/batch.hpp"
#include "socindex/errors.hpp"
#include "socindex/io.hpp"
#include "svg.hpp"

namespace fs = std::filesystem;
using namespace socindex;

namespace {

enum Exit { kOk = 0, kConfig = 1, kData = 2, kNumerical = 3 };

fs::path prepare_out(const std::string& out) {
  fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory '" + out + "': " + ec.message());
  return dir;
}

std::string tag(double eps) {
  std::string s = format_double(eps);
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

svg::Series annual_series(const std::string& name, const Trajectory& traj) {
  svg::Series s{name, {}, {}};
  for (const auto& a : traj.annual_means()) {
    s.x.push_back(a.year);
    s.y.push_back(a.delta_soc);
  }
  return s;
}

void print_annual(const Trajectory& traj) {
  std::printf("%-6s %14s\n", "year", "mean_dsoc");
  for (const auto& a : traj.annual_means()) std::printf("%-6d %14.6e\n", a.year, a.delta_soc);
}

struct SimulateArgs {
  std::string config, scheme, mode = "delta", out;
  bool svg = false;
};

int cmd_simulate(const SimulateArgs& a) {
  const auto cfg = load_config(a.config);
  const Scenario s = build_scenario(cfg);
  const Scheme scheme = a.scheme.empty() ? cfg.scheme : parse_scheme(a.scheme);
  const Mode mode = parse_mode(a.mode);
  const auto dir = prepare_out(a.out);

  Trajectory traj;
  if (s.fym == FymPolicy::Controlled) {
    if (mode == Mode::Absolute) throw ConfigError("controlled manure runs in delta mode only");
    traj = simulate_controlled(s, s.epsilon(), scheme).trajectory;
  } else {
    traj = simulate(s, scheme, mode);
  }
  write_trajectory(dir / "trajectory.csv", traj);
  print_annual(traj);
  if (a.svg) {
    svg::write(dir / "trajectory.svg",
               svg::line_chart("Annual mean SOC change index", "year", "delta soc",
                               {annual_series(traj.scheme, traj)}));
  }
  return kOk;
}

struct SensitivityArgs {
  std::string config, param, out;
  double dt = 0;
  int years = 0;
  bool svg = false;
};

int cmd_sensitivity(const SensitivityArgs& a) {
  const auto cfg = load_config(a.config);
  const Scenario s = build_scenario(cfg);
  const auto param = parse_sensitivity_param(a.param);
  const double dt = a.dt > 0 ? a.dt : cfg.sensitivity_dt_months;
  int years = a.years;
  if (years == 0) years = param == SensitivityParam::Ratio ? s.horizon_years : 1;
  const auto dir = prepare_out(a.out);

  const auto model = make_averaged_model(s);
  const auto series = sensitivity(param, model, years, dt, 1);
  const auto file = std::string("sensitivity_") + to_string(param);
  write_sensitivity(dir / (file + ".csv"), series, s.hash);

  double lo = series.samples.front().s_dsoc, hi = lo;
  for (const auto& smp : series.samples) lo = std::min(lo, smp.s_dsoc), hi = std::max(hi, smp.s_dsoc);
  std::printf("param=%s years=%d min=%.6e max=%.6e terminal=%.6e\n", to_string(param), years,
              lo, hi, series.samples.back().s_dsoc);
  if (a.svg) {
    svg::Series ser{to_string(param), {}, {}};
    for (const auto& smp : series.samples) {
      ser.x.push_back(smp.t / model.T());
      ser.y.push_back(smp.s_dsoc);
    }
    svg::write(dir / (file + ".svg"),
               svg::line_chart("Sensitivity of delta soc", "year", "s", {ser}));
  }
  return kOk;
}

struct ControlArgs {
  std::string config, out;
  std::vector<double> epsilon;
  bool svg = false;
};

int cmd_control(const ControlArgs& a) {
  const auto cfg = load_config(a.config);
  const Scenario s = build_scenario(cfg);
  const auto dir = prepare_out(a.out);

  for (double e : a.epsilon) {
    if (!(e >= 0.0 && e <= 1.0)) {
      throw ConfigError("epsilon must lie in [0, 1], got " + format_double(e));
    }
  }
  const auto runs = epsilon_sweep(s, a.epsilon, cfg.scheme, Execution::Parallel);

  std::vector<svg::Series> plot;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& run = runs[i];
    const std::string t = tag(a.epsilon[i]);
    write_trajectory(dir / ("trajectory_eps" + t + ".csv"), run.trajectory);
    if (run.routed_to_uncontrolled) {
      std::cerr << "notice: epsilon = 1 has no manure to control; ran the uncontrolled model\n";
    } else {
      write_control(dir / ("control_eps" + t + ".csv"), run.schedule, s.hash,
                    to_string(cfg.scheme));
    }
    plot.push_back(annual_series("eps " + format_double(a.epsilon[i]), run.trajectory));
  }

  // Summary: annual manure totals (t C/ha/yr) per epsilon.
  std::printf("%-6s", "year");
  for (double e : a.epsilon) std::printf(" %14s", ("eps=" + format_double(e)).c_str());
  std::printf("\n");
  for (int n = 1; n <= s.horizon_years; ++n) {
    std::printf("%-6d", s.baseline_year + n);
    for (const auto& run : runs) {
      double total = 0.0;
      for (const auto& am : run.schedule.annual_totals()) {
        if (am.year == s.baseline_year + n) total = am.total;
      }
      std::printf(" %14.6e", total);
    }
    std::printf("\n");
  }
  if (a.svg) {
    svg::write(dir / "control.svg",
               svg::line_chart("Controlled annual mean delta soc", "year", "delta soc", plot));
  }
  return kOk;
}

struct EquilibriumArgs {
  std::string config;
  std::vector<double> soc, inputs;
};

int cmd_equilibrium(const EquilibriumArgs& a) {
  const auto cfg = load_config(a.config);
  if (a.soc.empty() == a.inputs.empty()) {
    throw ConfigError("give exactly one of --soc or --inputs");
  }
  const Scenario s = build_scenario(cfg);
  BaselineState b;
  if (!a.inputs.empty()) {
    b = baseline_from_inputs(a.inputs[0], a.inputs[1], s.rho0(), s.mats, s.T());
  } else {
    b = baseline_from_soc(a.soc[0], cfg.manure_input_t_per_ha, s.rho0(), s.mats, s.T());
  }
  const double res = equilibrium_residual(b, s.rho0(), s.mats, s.T());
  std::printf("rho0 %s\n", format_double(s.rho0()).c_str());
  std::printf("c0 dpm %s rpm %s bio %s hum %s\n", format_double(b.c0.dpm()).c_str(),
              format_double(b.c0.rpm()).c_str(), format_double(b.c0.bio()).c_str(),
              format_double(b.c0.hum()).c_str());
  std::printf("c_iom %s\n", format_double(b.c_iom).c_str());
  std::printf("soc_active %s\n", format_double(b.soc_active()).c_str());
  std::printf("soc_total %s\n", format_double(b.soc_total()).c_str());
  std::printf("plant_input %s\n", format_double(b.plant_input).c_str());
  std::printf("manure_input %s\n", format_double(b.manure_input).c_str());
  std::printf("residual %s\n", format_double(res).c_str());
  return kOk;
}

template <class F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const DomainError& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return kConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SOC change index scenarios"};
  app.require_subcommand(0, 1);
  bool version = false;
  app.add_flag("--version", version, "Print version and scheme identifiers");

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Run the change-index trajectory");
  c_sim->add_option("config", sim.config, "Scenario config file")->required();
  c_sim->add_option("--scheme", sim.scheme, "nonstandard | rothc_discrete");
  c_sim->add_option("--mode", sim.mode, "delta | absolute");
  c_sim->add_option("--out", sim.out, "Output directory")->required();
  c_sim->add_flag("--svg", sim.svg, "Also write an SVG chart");

  SensitivityArgs sens;
  auto* c_sens = app.add_subcommand("sensitivity", "Direct-method sensitivity");
  c_sens->add_option("config", sens.config, "Scenario config file")->required();
  c_sens->add_option("--param", sens.param, "temp1 | np1 | r")->required();
  c_sens->add_option("--dt", sens.dt, "Step in months (default from config)");
  c_sens->add_option("--years", sens.years, "Years to integrate");
  c_sens->add_option("--out", sens.out, "Output directory")->required();
  c_sens->add_flag("--svg", sens.svg, "Also write an SVG chart");

  ControlArgs ctl;
  auto* c_ctl = app.add_subcommand("control", "Manure schedule keeping delta soc >= 0");
  c_ctl->add_option("config", ctl.config, "Scenario config file")->required();
  c_ctl->add_option("--epsilon", ctl.epsilon, "Plant fractions, comma separated")
      ->required()
      ->delimiter(',');
  c_ctl->add_option("--out", ctl.out, "Output directory")->required();
  c_ctl->add_flag("--svg", ctl.svg, "Also write an SVG chart");

  EquilibriumArgs eq;
  auto* c_eq = app.add_subcommand("equilibrium", "Baseline pools from inputs or SOC");
  c_eq->add_option("config", eq.config, "Scenario config file")->required();
  auto* o_soc = c_eq->add_option("--soc", eq.soc, "Measured total SOC (t C/ha)")->expected(1);
  auto* o_in = c_eq->add_option("--inputs", eq.inputs, "P0 F0 (t C/ha/yr)")->expected(2);
  o_soc->excludes(o_in);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  if (version) {
    std::printf("socindex %s\nschemes: nonstandard rothc_discrete\nmodes: delta absolute\n",
                kVersion);
    return kOk;
  }
  if (*c_sim) return guarded([&] { return cmd_simulate(sim); });
  if (*c_sens) return guarded([&] { return cmd_sensitivity(sens); });
  if (*c_ctl) return guarded([&] { return cmd_control(ctl); });
  if (*c_eq) return guarded([&] { return cmd_equilibrium(eq); });
  std::cout << app.help();
  return kConfig;
}
