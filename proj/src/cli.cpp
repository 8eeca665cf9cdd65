#include "spechom/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spechom/event_io.hpp"
#include "spechom/fisher.hpp"
#include "spechom/oracle.hpp"
#include "spechom/quadrature.hpp"
#include "spechom/simulation.hpp"

namespace spechom {

namespace {

using nlohmann::json;

void require_keys(const json& obj, std::initializer_list<const char*> allowed,
                  const std::string& context) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) known = true;
    if (!known)
      throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + context);
  }
}

Spectrum parse_spectrum(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: spectrum must be an object");
  require_keys(j, {"kind", "center", "sigma", "knots"}, "spectrum");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "gaussian") {
    require_keys(j, {"kind", "center", "sigma"}, "gaussian spectrum");
    return Spectrum::gaussian(j.at("center").get<double>(), j.at("sigma").get<double>());
  }
  if (kind == "tabulated") {
    require_keys(j, {"kind", "knots"}, "tabulated spectrum");
    std::vector<SpectrumKnot> knots;
    for (const json& k : j.at("knots")) {
      if (!k.is_array() || k.size() != 2)
        throw std::invalid_argument("config: tabulated knots must be [omega, density] pairs");
      knots.push_back({k[0].get<double>(), k[1].get<double>()});
    }
    return Spectrum::tabulated(std::move(knots));
  }
  throw std::invalid_argument("config: spectrum kind must be 'gaussian' or 'tabulated'");
}

struct CliOverrides {
  std::optional<double> delta_t, eta, gamma, sigma;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

struct LoadedConfig {
  json root = json::object();
};

LoadedConfig load_config(const std::optional<std::string>& path) {
  LoadedConfig cfg;
  if (!path) return cfg;
  std::ifstream in(*path);
  if (!in) throw std::invalid_argument("config: cannot open '" + *path + "'");
  cfg.root = json::parse(in);  // parse errors carry the offending position
  if (!cfg.root.is_object()) throw std::invalid_argument("config: top level must be an object");
  require_keys(cfg.root,
               {"experiment", "beats", "scan", "simulate", "estimate", "validate_crb",
                "oracle", "out"},
               "top level");
  return cfg;
}

ExperimentConfig build_experiment(const LoadedConfig& cfg, const CliOverrides& ov) {
  double delta_t = 1.0, eta = 1.0, gamma = 1.0;
  std::optional<double> delta_omega;
  std::optional<Spectrum> spectrum;
  bool enforce = true;

  if (cfg.root.contains("experiment")) {
    const json& e = cfg.root.at("experiment");
    require_keys(e, {"delta_t", "eta", "gamma", "delta_omega", "spectrum",
                     "enforce_resolution"},
                 "experiment");
    if (e.contains("delta_t")) delta_t = e.at("delta_t").get<double>();
    if (e.contains("eta")) eta = e.at("eta").get<double>();
    if (e.contains("gamma")) gamma = e.at("gamma").get<double>();
    if (e.contains("delta_omega")) delta_omega = e.at("delta_omega").get<double>();
    if (e.contains("spectrum")) spectrum = parse_spectrum(e.at("spectrum"));
    if (e.contains("enforce_resolution")) enforce = e.at("enforce_resolution").get<bool>();
  }

  if (ov.delta_t) delta_t = *ov.delta_t;
  if (ov.eta) eta = *ov.eta;
  if (ov.gamma) gamma = *ov.gamma;
  if (ov.sigma) {
    if (spectrum && spectrum->kind() != SpectrumKind::Gaussian)
      throw std::invalid_argument("--sigma cannot override a tabulated spectrum");
    spectrum = Spectrum::gaussian(spectrum ? spectrum->center() : 0.0, *ov.sigma);
  }
  if (!spectrum) spectrum = Spectrum::gaussian(0.0, 1.0);

  if (!delta_omega) {
    // Auto resolution: 80% of the admissible bound.
    double scale = spectrum->sigma();
    if (delta_t != 0.0) scale = std::min(scale, 1.0 / std::abs(delta_t));
    delta_omega = 0.8 * ExperimentConfig::kResolutionFactor * scale;
  }

  return ExperimentConfig(delta_t, eta, gamma, *delta_omega, *spectrum,
                          enforce ? ResolutionPolicy::Enforce : ResolutionPolicy::Relax);
}

const json* command_block(const LoadedConfig& cfg, const char* name) {
  if (!cfg.root.contains(name)) return nullptr;
  return &cfg.root.at(name);
}

void emit(const std::optional<std::string>& out_path, const std::string& content) {
  if (out_path) {
    std::ofstream out(*out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file '" + *out_path + "'");
    out << content;
  } else {
    std::cout << content;
  }
}

std::string json_report(std::initializer_list<std::pair<const char*, json>> fields) {
  json j = json::object();
  for (const auto& [k, v] : fields) j[k] = v;
  return j.dump(2) + "\n";
}

int dispatch(const std::string& command, const LoadedConfig& cfg, const CliOverrides& ov,
             const CLI::App& sub);

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Frequency-resolved two-photon interference: outcome probabilities, "
               "Fisher information for delay estimation, Monte Carlo simulation and "
               "maximum-likelihood validation"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  CliOverrides ov;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--delta-t", ov.delta_t, "Override the time delay");
  app.add_option("--eta", ov.eta, "Override the indistinguishability");
  app.add_option("--gamma", ov.gamma, "Override the detector efficiency");
  app.add_option("--sigma", ov.sigma, "Override the Gaussian spectral width");
  app.add_option("--seed", ov.seed, "Override the random seed");
  app.add_option("--out", ov.out, "Output file (default: stdout)");

  CLI::App* beats = app.add_subcommand("beats", "Quantum-beat marginals vs frequency difference");
  beats->add_option("--n-points", "Number of grid points");

  CLI::App* scan = app.add_subcommand("fisher-scan", "Fisher information over a parameter grid");
  scan->add_option("--axis", "Scan axis: delta_t | sigma_sq");
  scan->add_option("--from", "Grid start");
  scan->add_option("--to", "Grid end");
  scan->add_option("--count", "Grid point count");
  scan->add_option("--n-repetitions", "Repetitions N entering the CRB columns");

  CLI::App* simulate = app.add_subcommand("simulate", "Sample detection events to CSV");
  simulate->add_option("--n-events", "Number of events");

  CLI::App* estimate = app.add_subcommand("estimate", "Maximum-likelihood delay estimate");
  estimate->add_option("--events", "Events CSV produced by `simulate`");
  estimate->add_option("--search-max", "Upper end of the delay search range");

  CLI::App* validate = app.add_subcommand("validate-crb", "Empirical Cramer-Rao saturation");
  validate->add_option("--n-events", "Events per trial");
  validate->add_option("--n-trials", "Number of trials");

  CLI::App* oracle_check =
      app.add_subcommand("oracle-check", "Discrete beam-splitter cross-check report");
  oracle_check->add_option("--grid-size", "Frequency bins M");
  oracle_check->add_option("--fd-step", "Finite-difference step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const LoadedConfig cfg = load_config(config_path);
    for (CLI::App* sub : {beats, scan, simulate, estimate, validate, oracle_check})
      if (sub->parsed()) return dispatch(sub->get_name(), cfg, ov, *sub);
    return 1;
  } catch (const QuadratureError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

namespace {

template <class T>
T block_or_flag(const json* block, const char* key, const CLI::App& sub, const char* flag,
                T fallback) {
  T value = fallback;
  if (block && block->contains(key)) value = block->at(key).get<T>();
  if (sub.count(flag) > 0) value = sub.get_option(flag)->as<T>();
  return value;
}

int dispatch(const std::string& command, const LoadedConfig& cfg, const CliOverrides& ov,
             const CLI::App& sub) {
  const ExperimentConfig experiment = build_experiment(cfg, ov);

  if (command == "beats") {
    const json* block = command_block(cfg, "beats");
    if (block) require_keys(*block, {"n_points"}, "beats");
    const int n_points = block_or_flag(block, "n_points", sub, "--n-points", 501);
    std::ostringstream out;
    write_beats_csv(out, beat_profile(experiment, n_points));
    emit(ov.out, out.str());
    return 0;
  }

  if (command == "fisher-scan") {
    const json* block = command_block(cfg, "scan");
    if (block)
      require_keys(*block, {"axis", "grid", "from", "to", "count", "n_repetitions"}, "scan");
    const std::string axis_name =
        block_or_flag<std::string>(block, "axis", sub, "--axis", "delta_t");
    ScanAxis axis;
    if (axis_name == "delta_t")
      axis = ScanAxis::DeltaT;
    else if (axis_name == "sigma_sq")
      axis = ScanAxis::SigmaSq;
    else
      throw std::invalid_argument("fisher-scan: axis must be delta_t or sigma_sq");

    std::vector<double> grid;
    if (block && block->contains("grid")) {
      grid = block->at("grid").get<std::vector<double>>();
    } else {
      const double from = block_or_flag(block, "from", sub, "--from", 0.0);
      const double to = block_or_flag(block, "to", sub, "--to", 5.0);
      const int count = block_or_flag(block, "count", sub, "--count", 51);
      if (count < 1) throw std::invalid_argument("fisher-scan: count must be >= 1");
      for (int i = 0; i < count; ++i)
        grid.push_back(count == 1 ? from : from + (to - from) * i / (count - 1));
    }
    const int n_rep = block_or_flag(block, "n_repetitions", sub, "--n-repetitions", 1);

    const std::vector<ScanPoint> points = fisher_scan(experiment, axis, grid, n_rep);
    std::ostringstream out;
    write_scan_csv(out, points);
    emit(ov.out, out.str());
    for (const ScanPoint& p : points) {
      if (!p.report) {
        std::cerr << "numerical failure at axis value " << format_number(p.axis_value) << ": "
                  << p.error << "\n";
        return 2;
      }
    }
    return 0;
  }

  if (command == "simulate") {
    const json* block = command_block(cfg, "simulate");
    if (block) require_keys(*block, {"n_events", "seed"}, "simulate");
    const std::uint64_t n = block_or_flag<std::uint64_t>(block, "n_events", sub, "--n-events",
                                                         1000);
    std::uint64_t seed = 1;
    if (block && block->contains("seed")) seed = block->at("seed").get<std::uint64_t>();
    if (ov.seed) seed = *ov.seed;
    const EventDataset data = sample_events(experiment, n, seed);
    std::ostringstream out;
    write_events_csv(out, data.events);
    emit(ov.out, out.str());
    return 0;
  }

  if (command == "estimate") {
    const json* block = command_block(cfg, "estimate");
    if (block) require_keys(*block, {"events", "search_max"}, "estimate");
    const std::string events_path =
        block_or_flag<std::string>(block, "events", sub, "--events", "");
    if (events_path.empty())
      throw std::invalid_argument("estimate: events CSV path required (--events)");
    std::ifstream in(events_path);
    if (!in) throw std::invalid_argument("estimate: cannot open '" + events_path + "'");
    EventDataset data{experiment, 0, read_events_csv(in)};

    const double default_max =
        2.0 * std::abs(experiment.delta_t()) + 2.0 * experiment.spectrum().coherence_time();
    const double search_max =
        block_or_flag(block, "search_max", sub, "--search-max", default_max);
    const EstimateResult r = mle(data, search_max);
    emit(ov.out, json_report({{"delta_t_hat", r.delta_t_hat},
                              {"log_likelihood", r.log_likelihood},
                              {"n_informative", r.n_informative},
                              {"stderr_crb", r.stderr_crb},
                              {"n_clamped", r.n_clamped}}));
    return 0;
  }

  if (command == "validate-crb") {
    const json* block = command_block(cfg, "validate_crb");
    if (block) require_keys(*block, {"n_events", "n_trials", "seed"}, "validate_crb");
    const std::uint64_t n_events =
        block_or_flag<std::uint64_t>(block, "n_events", sub, "--n-events", 10000);
    const int n_trials = block_or_flag(block, "n_trials", sub, "--n-trials", 200);
    std::uint64_t seed = 1;
    if (block && block->contains("seed")) seed = block->at("seed").get<std::uint64_t>();
    if (ov.seed) seed = *ov.seed;
    const CrbValidationReport r = crb_validation(experiment, n_events, n_trials, seed);
    emit(ov.out, json_report({{"empirical_variance", r.empirical_variance},
                              {"crb", r.crb},
                              {"ratio", r.ratio},
                              {"bias", r.bias},
                              {"n_trials", r.n_trials}}));
    return 0;
  }

  if (command == "oracle-check") {
    const json* block = command_block(cfg, "oracle");
    if (block) require_keys(*block, {"grid_size", "fd_step"}, "oracle");
    const std::uint64_t m =
        block_or_flag<std::uint64_t>(block, "grid_size", sub, "--grid-size", 256);
    const double fd_step = block_or_flag(block, "fd_step", sub, "--fd-step",
                                         1e-4 / experiment.spectrum().sigma());

    const double fi_quad = fi_resolved(experiment);
    const auto state = oracle::apply_beamsplitter(oracle::build_state(experiment, m));
    const double max_err = oracle::max_density_error(experiment, state);
    const auto fd = oracle::fi_finite_difference(experiment, m, fd_step);
    const double rel =
        fi_quad != 0.0 ? std::abs(fd.fi - fi_quad) / fi_quad : std::abs(fd.fi);
    emit(ov.out, json_report({{"max_abs_density_error", max_err},
                              {"fi_quadrature", fi_quad},
                              {"fi_finite_difference", fd.fi},
                              {"rel_error", rel}}));
    return 0;
  }

  return 1;
}

}  // namespace

}  // namespace spechom
