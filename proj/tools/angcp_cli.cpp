// Command-line front end: single tests, binary segmentation, the Monte Carlo
// experiments and the samplers, over CSV in and JSON/CSV out.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "angcp/angcp.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitDegenerate = 3;

struct IoOpts {
  std::string input;
  std::string output;
  std::string surface = "torus";
  double ratio = 0.5;
  std::string units = "deg";
  std::string out_format = "json";
  std::string phi_col = "phi";
  std::string theta_col = "theta";
  std::string timestamp_col;
  bool lat_long = false;
};

struct ModelOpts {
  std::string model = "auto";  // auto: sine on the torus, fisher on the sphere
  double mu_phi = 0.0;
  double mu_theta = 0.0;
  double kappa1 = 2.0;
  double kappa2 = 2.0;
  double kappa3 = 0.0;
  double kappa = 2.0;
};

angcp::SurfaceSpec make_surface(const IoOpts& io) {
  return io.surface == "sphere" ? angcp::SurfaceSpec::sphere()
                                : angcp::SurfaceSpec::torus(io.ratio);
}

angcp::DatasetSpec make_dataset_spec(const IoOpts& io) {
  angcp::DatasetSpec spec;
  spec.path = io.input;
  spec.units = io.units == "rad" ? angcp::AngleUnits::radians
                                 : angcp::AngleUnits::degrees;
  spec.surface = make_surface(io);
  spec.phi_col = io.phi_col;
  spec.theta_col = io.theta_col;
  spec.timestamp_col = io.timestamp_col;
  spec.lat_long = io.lat_long;
  return spec;
}

angcp::ModelSpec make_model(const IoOpts& io, const ModelOpts& m) {
  std::string model = m.model;
  if (model == "auto") model = io.surface == "sphere" ? "fisher" : "sine";
  if (model == "fisher") {
    return angcp::FisherParams{m.mu_theta, m.mu_phi, m.kappa};
  }
  if (model == "cosine") {
    return angcp::CosineModelParams{m.mu_phi, m.mu_theta, m.kappa1, m.kappa2,
                                    m.kappa3};
  }
  return angcp::SineModelParams{m.mu_phi, m.mu_theta, m.kappa1, m.kappa2,
                                m.kappa3};
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw angcp::data_error("cannot write " + path);
  out << content;
}

void add_dataset_options(CLI::App* cmd, IoOpts& io) {
  cmd->add_option("input", io.input, "CSV file with a header row")->required();
  cmd->add_option("--units", io.units, "angle units in the file")
      ->check(CLI::IsMember({"deg", "rad"}))
      ->capture_default_str();
  cmd->add_option("--phi-col", io.phi_col, "horizontal-angle column")
      ->capture_default_str();
  cmd->add_option("--theta-col", io.theta_col, "vertical-angle column")
      ->capture_default_str();
  cmd->add_option("--timestamp-col", io.timestamp_col,
                  "timestamp column (checked for presence only)");
  cmd->add_flag("--lat-long", io.lat_long,
                "theta column holds latitudes, phi column longitudes (sphere)");
}

void add_surface_options(CLI::App* cmd, IoOpts& io) {
  cmd->add_option("--surface", io.surface, "surface the angles live on")
      ->check(CLI::IsMember({"torus", "sphere"}))
      ->capture_default_str();
  cmd->add_option("--ratio", io.ratio, "torus radius ratio r/R in (0,1]")
      ->capture_default_str();
}

void add_output_options(CLI::App* cmd, IoOpts& io) {
  cmd->add_option("--out", io.out_format, "report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--output", io.output, "write the report here (default stdout)");
}

void add_model_options(CLI::App* cmd, ModelOpts& m, bool with_model = true) {
  if (with_model) {
    cmd->add_option("--model", m.model,
                    "sampling model (auto = sine on torus, fisher on sphere)")
        ->check(CLI::IsMember({"auto", "sine", "cosine", "fisher"}))
        ->capture_default_str();
  }
  cmd->add_option("--mu-phi", m.mu_phi, "mean horizontal angle, radians")
      ->capture_default_str();
  cmd->add_option("--mu-theta", m.mu_theta,
                  "mean vertical angle (fisher: mean colatitude), radians")
      ->capture_default_str();
  cmd->add_option("--kappa1", m.kappa1, "phi concentration (sine/cosine)")
      ->capture_default_str();
  cmd->add_option("--kappa2", m.kappa2, "theta concentration (sine/cosine)")
      ->capture_default_str();
  cmd->add_option("--kappa3", m.kappa3, "association (sine/cosine)")
      ->capture_default_str();
  cmd->add_option("--kappa", m.kappa, "fisher concentration")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Changepoint detection in the mean direction of toroidal and spherical "
      "angular time series"};
  app.require_subcommand(1);

  IoOpts io;
  ModelOpts model;
  double alpha = 0.05;
  std::size_t min_seg = 20;
  std::size_t max_depth = 0;
  bool bonferroni = false;
  std::uint64_t seed = 0;
  std::size_t reps = 2000;
  std::size_t n = 1000;
  unsigned threads = 0;
  double kstar_frac = 0.5;
  std::size_t dphi_count = 21, dtheta_count = 21;
  double dphi_half = angcp::pi / 2.0;
  double dtheta_half = -1.0;  // default depends on the surface
  std::string sample_model_name = "sine";
  double vm_mu = 0.0, vm_kappa = 1.0;

  auto* detect = app.add_subcommand("detect", "single mean-direction test");
  add_dataset_options(detect, io);
  add_surface_options(detect, io);
  add_output_options(detect, io);
  detect->add_option("--alpha", alpha, "test level")->capture_default_str();

  auto* segment =
      app.add_subcommand("segment", "multiple changepoints by binary segmentation");
  add_dataset_options(segment, io);
  add_surface_options(segment, io);
  add_output_options(segment, io);
  segment->add_option("--alpha", alpha, "per-test level")->capture_default_str();
  segment->add_option("--min-seg", min_seg, "smallest testable half-segment")
      ->capture_default_str();
  segment->add_option("--max-depth", max_depth, "recursion depth limit (0 = none)")
      ->capture_default_str();
  segment->add_flag("--bonferroni", bonferroni, "correct the per-test level");

  auto* sim_null =
      app.add_subcommand("simulate-null", "null distribution of the statistic");
  add_surface_options(sim_null, io);
  add_output_options(sim_null, io);
  add_model_options(sim_null, model);
  sim_null->add_option("--n", n, "sample size per replication")->capture_default_str();
  sim_null->add_option("--reps", reps, "replications")->capture_default_str();
  sim_null->add_option("--alpha", alpha, "test level")->capture_default_str();
  sim_null->add_option("--seed", seed, "RNG seed")->capture_default_str();
  sim_null->add_option("--threads", threads, "worker threads (0 = hardware)")
      ->capture_default_str();

  auto* sim_power = app.add_subcommand("simulate-power",
                                       "power over a grid of mean shifts");
  add_surface_options(sim_power, io);
  add_output_options(sim_power, io);
  add_model_options(sim_power, model);
  sim_power->add_option("--n", n, "sample size per replication")
      ->capture_default_str();
  sim_power->add_option("--reps", reps, "replications per cell")
      ->capture_default_str();
  sim_power->add_option("--alpha", alpha, "test level")->capture_default_str();
  sim_power->add_option("--seed", seed, "RNG seed")->capture_default_str();
  sim_power->add_option("--threads", threads, "worker threads (0 = hardware)")
      ->capture_default_str();
  sim_power->add_option("--kstar-frac", kstar_frac, "changepoint position / n")
      ->capture_default_str();
  sim_power->add_option("--dphi-count", dphi_count, "phi-shift grid size")
      ->capture_default_str();
  sim_power->add_option("--dphi-half-range", dphi_half,
                        "phi shifts span [-h, h], radians")
      ->capture_default_str();
  sim_power->add_option("--dtheta-count", dtheta_count, "theta-shift grid size")
      ->capture_default_str();
  sim_power->add_option("--dtheta-half-range", dtheta_half,
                        "theta shifts span [-h, h] (default pi/2 torus, "
                        "pi/2.5 sphere)");

  auto* sample = app.add_subcommand("sample", "draw from a fitted model as CSV");
  add_surface_options(sample, io);
  sample->add_option("--model", sample_model_name, "vonmises, sine, cosine or fisher")
      ->check(CLI::IsMember({"vonmises", "sine", "cosine", "fisher"}))
      ->capture_default_str();
  sample->add_option("--n", n, "number of draws")->required();
  sample->add_option("--seed", seed, "RNG seed")->capture_default_str();
  sample->add_option("--mu", vm_mu, "von Mises mean, radians")->capture_default_str();
  sample->add_option("--kappa-vm", vm_kappa, "von Mises concentration")
      ->capture_default_str();
  add_model_options(sample, model, false);
  sample->add_option("--units", io.units, "units of the emitted CSV")
      ->check(CLI::IsMember({"deg", "rad"}))
      ->capture_default_str();
  sample->add_option("--output", io.output, "write the CSV here (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  // power matrices are plot-ready CSV unless JSON is asked for explicitly
  if (sim_power->parsed() && sim_power->get_option("--out")->count() == 0) {
    io.out_format = "csv";
  }

  try {
    const angcp::ReportFormat fmt = io.out_format == "csv"
                                        ? angcp::ReportFormat::csv
                                        : angcp::ReportFormat::json;
    if (detect->parsed()) {
      const auto pairs = angcp::parse_angular_csv(make_dataset_spec(io));
      const auto result =
          angcp::detect_changepoint(pairs, {alpha, make_surface(io), 1e-12});
      write_output(io.output, angcp::emit_detect_report(result, alpha, fmt));
    } else if (segment->parsed()) {
      const auto pairs = angcp::parse_angular_csv(make_dataset_spec(io));
      angcp::SegmentationConfig config;
      config.alpha = alpha;
      config.min_segment = min_seg;
      config.max_depth = max_depth;
      config.bonferroni = bonferroni;
      const auto report = angcp::binary_segment(pairs, make_surface(io), config);
      write_output(io.output, angcp::emit_segment_report(report, alpha, fmt));
    } else if (sim_null->parsed()) {
      angcp::NullExperimentConfig config;
      config.model = make_model(io, model);
      config.torus_ratio = io.ratio;
      config.n = n;
      config.reps = reps;
      config.alpha = alpha;
      config.seed = seed;
      config.threads = threads;
      write_output(io.output,
                   angcp::emit_null_report(angcp::null_experiment(config), fmt));
    } else if (sim_power->parsed()) {
      angcp::PowerGridConfig config;
      config.model = make_model(io, model);
      config.torus_ratio = io.ratio;
      config.kstar_fraction = kstar_frac;
      if (dtheta_half < 0.0) {
        dtheta_half = io.surface == "sphere" ? angcp::pi / 2.5 : angcp::pi / 2.0;
      }
      config.delta_phi_grid = angcp::symmetric_grid(dphi_half, dphi_count);
      config.delta_theta_grid = angcp::symmetric_grid(dtheta_half, dtheta_count);
      config.n = n;
      config.reps = reps;
      config.alpha = alpha;
      config.seed = seed;
      config.threads = threads;
      write_output(io.output,
                   angcp::emit_power_report(angcp::power_grid(config), fmt));
    } else if (sample->parsed()) {
      const angcp::AngleUnits units = io.units == "rad"
                                          ? angcp::AngleUnits::radians
                                          : angcp::AngleUnits::degrees;
      if (sample_model_name == "vonmises") {
        const auto series = angcp::sample_von_mises(vm_mu, vm_kappa, n, seed);
        write_output(io.output, angcp::emit_series_csv(series, units));
      } else {
        model.model = sample_model_name;
        const auto pairs =
            angcp::sample_model(make_model(io, model), n, seed, 0);
        write_output(io.output, angcp::emit_pairs_csv(pairs, units));
      }
    }
  } catch (const angcp::data_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const angcp::degeneracy_error& e) {
    std::cerr << "degenerate input: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}
