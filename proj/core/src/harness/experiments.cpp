// SPDX-License-Identifier: Apache-2.0
#include "rspk/harness/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "rspk/errors.hpp"
#include "rspk/harness/csv.hpp"
#include "rspk/linalg.hpp"
#include "rspk/rng.hpp"
#include "rspk/scatter.hpp"
#include "rspk/snapshot_io.hpp"

namespace rspk::harness {

namespace {

double aspect(const ExperimentConfig& cfg) {
  return static_cast<double>(cfg.n_antennas) / static_cast<double>(cfg.n_samples);
}

FixedPointOptions solver_options(const ExperimentConfig& cfg) {
  FixedPointOptions o;
  o.tolerance = cfg.tolerance;
  o.max_iterations = cfg.max_iterations;
  return o;
}

std::vector<double> density_grid(double hi, std::size_t points) {
  std::vector<double> grid(points);
  for (std::size_t k = 0; k < points; ++k) grid[k] = hi * (static_cast<double>(k) + 0.5) / static_cast<double>(points);
  return grid;
}

std::string optional_number(const std::optional<double>& x) { return x ? csv_number(*x) : std::string("none"); }

}  // namespace

TauMeasure config_measure(const ExperimentConfig& cfg) {
  auto m = TauMeasure::analytic(cfg.noise_model(), cfg.quadrature_draws, cfg.quadrature_seed);
  return cfg.quadrature_bins > 0 ? m.compressed(cfg.quadrature_bins) : m;
}

KnownContexts build_known_contexts(const ExperimentConfig& cfg) {
  const double c = aspect(cfg);
  const TauMeasure measure = config_measure(cfg);
  KnownContexts k;
  k.robust = std::make_shared<const SpectralContext>(measure, WeightFunction::maronna(cfg.alpha, c));
  k.sample = std::make_shared<const SpectralContext>(gmusic_context_known(measure, c));
  return k;
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min(workers, count));
  if (n_threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
}

std::size_t SpectrumResult::count_above(std::size_t t, double level) const {
  const auto& e = robust_eigenvalues.at(t);
  return static_cast<std::size_t>(std::count_if(e.begin(), e.end(), [&](double x) { return x > level; }));
}

double MseResult::mse(std::size_t point, Method m) const {
  const auto it = std::find(methods.begin(), methods.end(), m);
  if (it == methods.end()) throw ConfigError(std::string("method not in sweep: ") + method_name(m));
  return points.at(point).mse[static_cast<std::size_t>(it - methods.begin())];
}

SpectrumResult run_spectrum_histogram(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  cfg.validate();
  const SourceConfig sources = cfg.sources();
  const KnownContexts known = build_known_contexts(cfg);
  const SpectralContext& robust = *known.robust;
  const SpectralContext& sample = *known.sample;

  SpectrumResult r;
  r.gamma = robust.gamma();
  r.s_plus = robust.s_plus();
  r.support_edge = robust.support_edge();
  r.p_minus = robust.p_minus();
  r.sample_edge = sample.support_edge();
  for (double p : sources.powers) {
    r.spike_locations.push_back(robust.spike_location(p));
    r.sample_spike_locations.push_back(sample.spike_location(p));
  }

  struct Slot {
    bool ok = false;
    std::vector<double> robust;
    std::vector<double> sample;
  };
  std::vector<Slot> slots(cfg.trials);
  const WeightFunction w = WeightFunction::maronna(cfg.alpha, aspect(cfg));
  parallel_for(cfg.trials, cfg.workers, [&](std::size_t t) {
    Rng rng = make_stream(cfg.seed, t, StreamRole::kData);
    const auto syn = synthesize(sources, cfg.noise_model(), cfg.n_antennas, cfg.n_samples, rng, cfg.symbol_law());
    try {
      const auto est = solve_fixed_point(syn.snapshots, w, solver_options(cfg));
      const auto eig = hermitian_eigen(sample_covariance(syn.snapshots.data()));
      slots[t].robust.assign(est.eigenvalues().data(), est.eigenvalues().data() + est.eigenvalues().size());
      slots[t].sample.assign(eig.values.data(), eig.values.data() + eig.values.size());
      slots[t].ok = true;
    } catch (const NumericalError&) {
      slots[t].ok = false;
    }
  });
  for (std::size_t t = 0; t < slots.size(); ++t) {
    if (!slots[t].ok) {
      ++r.skipped;
      continue;
    }
    r.trials.push_back(t);
    r.robust_eigenvalues.push_back(std::move(slots[t].robust));
    r.sample_eigenvalues.push_back(std::move(slots[t].sample));
  }

  double robust_top = r.s_plus;
  double sample_top = r.sample_edge;
  for (const auto& loc : r.spike_locations) robust_top = std::max(robust_top, loc.value_or(0.0));
  for (const auto& loc : r.sample_spike_locations) sample_top = std::max(sample_top, loc.value_or(0.0));
  if (cfg.density_points > 0) {
    r.density = robust.limiting_density(density_grid(1.25 * robust_top, cfg.density_points), cfg.density_eps);
    r.sample_density = sample.limiting_density(density_grid(1.25 * sample_top, cfg.density_points), cfg.density_eps);
  }

  if (!out_dir.empty()) {
    const auto h = cfg.hash();
    CsvWriter eigs(out_dir / "eigs.csv", h, cfg.seed, {"trial", "k", "robust", "sample"});
    for (std::size_t i = 0; i < r.trials.size(); ++i) {
      for (std::size_t k = 0; k < r.robust_eigenvalues[i].size(); ++k) {
        eigs.row({std::to_string(r.trials[i]), std::to_string(k + 1), csv_number(r.robust_eigenvalues[i][k]),
                  csv_number(r.sample_eigenvalues[i][k])});
      }
    }
    auto write_density = [&](const std::filesystem::path& p, const std::vector<DensityPoint>& d) {
      CsvWriter out(p, h, cfg.seed, {"x", "density", "converged"});
      for (const auto& pt : d) out.row({csv_number(pt.x), csv_number(pt.density), pt.converged ? "1" : "0"});
    };
    write_density(out_dir / "density.csv", r.density);
    write_density(out_dir / "density_sample.csv", r.sample_density);

    CsvWriter th(out_dir / "thresholds.csv", h, cfg.seed, {"name", "value"});
    th.row({"gamma", csv_number(r.gamma)});
    th.row({"s_plus", csv_number(r.s_plus)});
    th.row({"s_plus_mu", csv_number(r.support_edge)});
    th.row({"p_minus", csv_number(r.p_minus)});
    for (std::size_t l = 0; l < r.spike_locations.size(); ++l) {
      th.row({"lambda_" + std::to_string(l + 1), optional_number(r.spike_locations[l])});
    }
    th.row({"sample_s_plus_mu", csv_number(r.sample_edge)});
    for (std::size_t l = 0; l < r.sample_spike_locations.size(); ++l) {
      th.row({"sample_lambda_" + std::to_string(l + 1), optional_number(r.sample_spike_locations[l])});
    }
    th.row({"trials_kept", std::to_string(r.trials.size())});
    th.row({"trials_skipped", std::to_string(r.skipped)});
  }
  return r;
}

OneshotResult run_localization_oneshot(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  cfg.validate();
  const SourceConfig sources = cfg.sources();
  const KnownContexts known = build_known_contexts(cfg);
  const auto methods = parse_method_list(cfg.methods);

  Rng rng = make_stream(cfg.seed, 0, StreamRole::kData);
  const auto syn = synthesize(sources, cfg.noise_model(), cfg.n_antennas, cfg.n_samples, rng, cfg.symbol_law());
  const auto est =
      solve_fixed_point(syn.snapshots, WeightFunction::maronna(cfg.alpha, aspect(cfg)), solver_options(cfg));
  Localizer::Options opts;
  opts.n_sources = static_cast<Index>(cfg.n_sources());
  opts.spacing = cfg.spacing;
  opts.force_sources = cfg.force_sources;
  opts.margin = cfg.margin;
  const Localizer loc(syn.snapshots, est, *known.robust, *known.sample, opts);

  const auto grid = make_grid(cfg.grid_lo(), cfg.grid_hi(), deg_to_rad(cfg.grid_step_deg));
  OneshotResult r;
  for (Method m : methods) r.curves.push_back(evaluate_curve(m, loc.function(m), grid, cfg.n_sources()));

  if (!out_dir.empty()) {
    const auto h = cfg.hash();
    std::vector<std::string> header{"theta_deg"};
    for (Method m : methods) header.emplace_back(method_name(m));
    CsvWriter curves(out_dir / "curves.csv", h, cfg.seed, header);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      std::vector<std::string> row{csv_number(rad_to_deg(grid[g]))};
      for (const auto& c : r.curves) row.push_back(csv_number(c.values[g]));
      curves.row(row);
    }
    std::vector<std::string> mh{"method"};
    for (std::size_t l = 0; l < cfg.n_sources(); ++l) mh.push_back("theta" + std::to_string(l + 1) + "_deg");
    CsvWriter minima(out_dir / "minima.csv", h, cfg.seed, mh);
    for (const auto& c : r.curves) {
      std::vector<std::string> row{method_name(c.method)};
      for (double a : c.minima) row.push_back(csv_number(rad_to_deg(a)));
      minima.row(row);
    }
  }
  return r;
}

TrialErrors localization_errors(const ExperimentConfig& cfg, const SourceConfig& sources, const KnownContexts& known,
                                const std::vector<Method>& methods, std::size_t trial) {
  Rng rng = make_stream(cfg.seed, trial, StreamRole::kData);
  const auto syn = synthesize(sources, cfg.noise_model(), cfg.n_antennas, cfg.n_samples, rng, cfg.symbol_law());
  const auto est =
      solve_fixed_point(syn.snapshots, WeightFunction::maronna(cfg.alpha, aspect(cfg)), solver_options(cfg));
  Localizer::Options opts;
  opts.n_sources = static_cast<Index>(sources.size());
  opts.spacing = sources.spacing;
  // Sweeps always localize L sources, detected or not.
  opts.force_sources = true;
  opts.margin = cfg.margin;
  const Localizer loc(syn.snapshots, est, *known.robust, *known.sample, opts);
  const auto grid = make_grid(cfg.grid_lo(), cfg.grid_hi(), deg_to_rad(cfg.grid_step_deg));

  TrialErrors out;
  for (Method m : methods) {
    const auto curve = evaluate_curve(m, loc.function(m), grid, sources.size());
    const double theta1 = closest_estimate(curve.minima, sources.angles.front());
    const double e = theta1 - sources.angles.front();
    out.sq_error.push_back(e * e);
    bool flagged = false;
    if (const auto& rep = loc.report(m)) {
      for (const auto& s : rep->spikes) flagged = flagged || s.flags != kSpikeOk;
    }
    out.flagged.push_back(flagged);
  }
  return out;
}

MseResult run_mse_sweep(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  cfg.validate();
  const KnownContexts known = build_known_contexts(cfg);
  MseResult r;
  r.methods = parse_method_list(cfg.methods);
  const std::size_t n_methods = r.methods.size();

  for (double db : cfg.sweep_db) {
    const SourceConfig sources = cfg.sources_at(db);
    std::vector<std::optional<TrialErrors>> slots(cfg.trials);
    parallel_for(cfg.trials, cfg.workers, [&](std::size_t t) {
      try {
        slots[t] = localization_errors(cfg, sources, known, r.methods, t);
      } catch (const NumericalError&) {
        slots[t].reset();
      }
    });
    MsePoint pt;
    pt.power_db = db;
    pt.mse.assign(n_methods, 0.0);
    pt.failures.assign(n_methods, 0);
    for (const auto& s : slots) {
      if (!s) {
        ++pt.skipped;
        continue;
      }
      ++pt.used;
      for (std::size_t m = 0; m < n_methods; ++m) {
        pt.mse[m] += s->sq_error[m];
        if (s->flagged[m]) ++pt.failures[m];
      }
    }
    for (auto& v : pt.mse) v = pt.used > 0 ? v / static_cast<double>(pt.used) : std::nan("");
    r.points.push_back(std::move(pt));
  }

  if (!out_dir.empty()) {
    std::vector<std::string> header{"power_db", "trials", "skipped"};
    for (Method m : r.methods) header.push_back(std::string("mse_") + method_name(m));
    for (Method m : r.methods) header.push_back(std::string("flagged_") + method_name(m));
    CsvWriter out(out_dir / "mse.csv", cfg.hash(), cfg.seed, header);
    for (const auto& pt : r.points) {
      std::vector<std::string> row{csv_number(pt.power_db), std::to_string(pt.used), std::to_string(pt.skipped)};
      for (double v : pt.mse) row.push_back(csv_number(v));
      for (std::size_t f : pt.failures) row.push_back(std::to_string(f));
      out.row(row);
    }
  }
  return r;
}

EstimateResult run_estimate(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  cfg.validate();
  const SnapshotMatrix y = load_snapshots(cfg.input);
  if (!(y.n_antennas() < y.n_samples())) {
    throw ConfigError("estimate: need N < n, file has N = " + std::to_string(y.n_antennas()) + ", n = " +
                      std::to_string(y.n_samples()));
  }
  const auto est = solve_fixed_point(y, WeightFunction::maronna(cfg.alpha, y.aspect_ratio()), solver_options(cfg));
  const SpectralContext ctx = empirical_context(est);

  EstimateResult r;
  r.n_antennas = y.n_antennas();
  r.n_samples = y.n_samples();
  r.iterations = est.iterations();
  r.gamma_hat = est.gamma_hat();
  r.report = detect_spikes(est.eigenvalues(), ctx, EstimatorMode::kEmpirical,
                           std::min<Index>(cfg.max_sources, y.n_antennas() - 1), cfg.margin);
  if (!r.report.empty()) {
    const auto f = LocalizationFunction::weighted(est.eigenvectors(), r.report, cfg.spacing);
    const auto grid = make_grid(cfg.grid_lo(), cfg.grid_hi(), deg_to_rad(cfg.grid_step_deg));
    r.angles = evaluate_curve(Method::kRobustGMusicEmpirical, f, grid, r.report.size()).minima;
  }

  if (!out_dir.empty()) {
    const auto h = cfg.hash();
    CsvWriter spikes(out_dir / "spikes.csv", h, cfg.seed, {"k", "eigenvalue", "power", "weight", "flags"});
    for (const auto& e : r.report.spikes) {
      spikes.row({std::to_string(e.index + 1), csv_number(e.eigenvalue), csv_number(e.power), csv_number(e.weight),
                  std::to_string(e.flags)});
    }
    CsvWriter angles(out_dir / "angles.csv", h, cfg.seed, {"source", "theta_deg"});
    for (std::size_t l = 0; l < r.angles.size(); ++l) {
      angles.row({std::to_string(l + 1), csv_number(rad_to_deg(r.angles[l]))});
    }
  }
  return r;
}

}  // namespace rspk::harness
