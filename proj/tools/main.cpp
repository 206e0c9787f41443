// SPDX-License-Identifier: Apache-2.0
// rspk command line: spectrum, oneshot, mse and estimate experiments.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rspk/errors.hpp"
#include "rspk/harness/config.hpp"
#include "rspk/harness/experiments.hpp"
#include "rspk/types.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonFlags {
  std::string config;
  std::string preset;
  std::vector<std::string> sets;
  std::string seed;
  std::string trials;
  std::string workers;
  std::string out;
  std::string methods;
  std::string input;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "key = value config file");
  cmd->add_option("--preset", f.preset, "built-in config: fig1, fig2, fig3, fig4");
  cmd->add_option("--set", f.sets, "override one key, KEY=VALUE (repeatable)");
  cmd->add_option("--seed", f.seed, "master seed (u64)");
  cmd->add_option("--trials", f.trials, "Monte Carlo trials");
  cmd->add_option("--workers", f.workers, "worker threads");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--method", f.methods, "comma list of methods or 'all'");
}

rspk::harness::ExperimentConfig build_config(const CommonFlags& f, rspk::harness::Scenario scenario) {
  using rspk::ConfigError;
  rspk::harness::ExperimentConfig cfg;
  cfg.scenario = scenario;
  if (!f.preset.empty()) {
    const std::string text = rspk::harness::preset_text(f.preset);
    if (text.empty()) throw ConfigError("unknown preset '" + f.preset + "'");
    rspk::harness::apply_config_text(cfg, text, "preset " + f.preset);
  }
  if (!f.config.empty()) rspk::harness::apply_config_file(cfg, f.config);
  for (const auto& kv : f.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects KEY=VALUE, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!f.seed.empty()) cfg.set("seed", f.seed);
  if (!f.trials.empty()) cfg.set("trials", f.trials);
  if (!f.workers.empty()) cfg.set("workers", f.workers);
  if (!f.out.empty()) cfg.set("out", f.out);
  if (!f.methods.empty()) cfg.set("methods", f.methods);
  if (!f.input.empty()) cfg.set("input", f.input);
  // The subcommand decides the scenario even if a file says otherwise.
  cfg.scenario = scenario;
  cfg.validate();
  return cfg;
}

int run(rspk::harness::Scenario scenario, const CommonFlags& flags) {
  using namespace rspk::harness;
  const ExperimentConfig cfg = build_config(flags, scenario);
  const std::filesystem::path out = cfg.out;
  std::printf("%s config_hash=%016llx seed=%llu\n", scenario_name(scenario),
              static_cast<unsigned long long>(cfg.hash()), static_cast<unsigned long long>(cfg.seed));
  switch (scenario) {
    case Scenario::kSpectrum: {
      const auto r = run_spectrum_histogram(cfg, out);
      std::printf("gamma=%.6g S+=%.6g S+_mu=%.6g p-=%.6g\n", r.gamma, r.s_plus, r.support_edge, r.p_minus);
      std::size_t two = 0;
      for (std::size_t t = 0; t < r.trials.size(); ++t) two += r.count_above(t, r.s_plus) == cfg.n_sources();
      std::printf("trials=%zu skipped=%zu with_%zu_above_S+=%zu\n", r.trials.size(), r.skipped, cfg.n_sources(),
                  two);
      break;
    }
    case Scenario::kOneshot: {
      const auto r = run_localization_oneshot(cfg, out);
      for (const auto& c : r.curves) {
        std::printf("%-18s", rspk::method_name(c.method));
        for (double a : c.minima) std::printf(" %9.4f", rspk::rad_to_deg(a));
        std::printf("\n");
      }
      break;
    }
    case Scenario::kMse: {
      const auto r = run_mse_sweep(cfg, out);
      std::printf("%8s", "dB");
      for (auto m : r.methods) std::printf(" %18s", rspk::method_name(m));
      std::printf("\n");
      for (const auto& pt : r.points) {
        std::printf("%8.2f", pt.power_db);
        for (double v : pt.mse) std::printf(" %18.4e", v);
        std::printf("\n");
      }
      break;
    }
    case Scenario::kEstimate: {
      const auto r = run_estimate(cfg, out);
      std::printf("N=%lld n=%lld iterations=%d gamma_hat=%.6g threshold=%.6g\n",
                  static_cast<long long>(r.n_antennas), static_cast<long long>(r.n_samples), r.iterations,
                  r.gamma_hat, r.report.threshold);
      for (const auto& e : r.report.spikes) {
        std::printf("spike k=%lld eigenvalue=%.6g power=%.6g weight=%.6g flags=%u\n",
                    static_cast<long long>(e.index + 1), e.eigenvalue, e.power, e.weight, e.flags);
      }
      for (double a : r.angles) std::printf("angle %.4f deg\n", rspk::rad_to_deg(a));
      break;
    }
  }
  if (!out.empty()) std::printf("wrote %s\n", out.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust scatter estimation, spiked spectrum analysis and robust G-MUSIC"};
  app.require_subcommand(1);

  using rspk::harness::Scenario;
  CommonFlags spectrum_f, oneshot_f, mse_f, estimate_f;
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalue histogram against the limiting density");
  add_common(spectrum, spectrum_f);
  auto* oneshot = app.add_subcommand("oneshot", "one realization of the six localization functions");
  add_common(oneshot, oneshot_f);
  auto* mse = app.add_subcommand("mse", "MSE of theta_1 against source power");
  add_common(mse, mse_f);
  auto* estimate = app.add_subcommand("estimate", "full pipeline on an RSPK1 or CSV snapshot file");
  add_common(estimate, estimate_f);
  estimate->add_option("--input", estimate_f.input, "snapshot file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (spectrum->parsed()) return run(Scenario::kSpectrum, spectrum_f);
    if (oneshot->parsed()) return run(Scenario::kOneshot, oneshot_f);
    if (mse->parsed()) return run(Scenario::kMse, mse_f);
    return run(Scenario::kEstimate, estimate_f);
  } catch (const rspk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const rspk::FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const rspk::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const rspk::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
