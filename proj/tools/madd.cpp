// Command-line front end: simulate scores, measure MADD, post-process
// probabilities, sweep lambda and run the train/validate/test pipeline.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "madd/csv.hpp"
#include "madd/densities.hpp"
#include "madd/error.hpp"
#include "madd/io.hpp"
#include "madd/objective.hpp"
#include "madd/pipeline.hpp"
#include "madd/simulate.hpp"
#include "madd/transport.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path output_dir() {
  const char* env = std::getenv("MADD_OUTPUT_DIR");
  return env && *env ? fs::path(env) : fs::path(".");
}

fs::path resolve_output(const std::string& given, const std::string& fallback) {
  return given.empty() ? output_dir() / fallback : fs::path(given);
}

fs::path manifest_for(const fs::path& out) { return fs::path(out.string() + ".manifest.json"); }

struct Clock {
  std::chrono::system_clock::time_point started = std::chrono::system_clock::now();
};

void finish(madd::RunManifest& manifest, const Clock& clock, const fs::path& path) {
  manifest.started = clock.started;
  manifest.finished = std::chrono::system_clock::now();
  madd::write_json(path, madd::manifest_to_json(manifest));
}

json bins_json(const madd::DensityVector& d) {
  return json(std::vector<double>(d.bins().begin(), d.bins().end()));
}

json curve_json(const std::vector<madd::CurvePoint>& curve) {
  auto out = json::array();
  for (const auto& p : curve) out.push_back({p.x, p.density});
  return out;
}

struct SimulateArgs {
  madd::SimulationSpec spec;
  std::string out;
};

int run_simulate(const SimulateArgs& args) {
  const Clock clock;
  const madd::Simulator simulator(args.spec);
  const auto records = simulator.sample();
  const auto out = resolve_output(args.out, "simulated.csv");
  madd::write_records(out, records);

  madd::RunManifest manifest;
  manifest.command = "simulate";
  const auto& s = args.spec;
  manifest.config = {{"n_g0", s.n_g0},
                     {"n_g1", s.n_g1},
                     {"seed", s.seed},
                     {"gamma_shape", s.gamma_shape},
                     {"gamma_rate", s.gamma_rate},
                     {"gamma_xscale", s.gamma_xscale},
                     {"normal_mean", s.normal_mean},
                     {"normal_sd", s.normal_sd},
                     {"normal_xscale", s.normal_xscale},
                     {"table_nodes", s.table_nodes}};
  manifest.extra = {{"c0", simulator.c0()}, {"c1", simulator.c1()}};
  manifest.outputs = {out.string()};
  manifest.rows_g0 = s.n_g0;
  manifest.rows_g1 = s.n_g1;
  finish(manifest, clock, manifest_for(out));
  return 0;
}

struct MaddArgs {
  std::string in;
  std::string out;
  std::size_t bins = madd::kDefaultBins;
  bool kde = false;
  double bandwidth = madd::kDefaultBandwidth;
  std::size_t kde_points = 201;
};

int run_madd(const MaddArgs& args) {
  const Clock clock;
  const auto records = madd::read_records(args.in);
  const auto p0 = madd::probas_of(records, madd::Group::G0);
  const auto p1 = madd::probas_of(records, madd::Group::G1);
  if (p0.empty() || p1.empty()) {
    throw madd::Error(madd::ErrorCode::EmptyGroup, "both groups need at least one record");
  }
  const auto d0 = madd::build_density_vector(p0, args.bins);
  const auto d1 = madd::build_density_vector(p1, args.bins);
  const double value = madd::madd(d0, d1);

  json result = {{"madd", value},
                 {"fairness_loss", 0.5 * value},
                 {"m", args.bins},
                 {"rows", {{"g0", p0.size()}, {"g1", p1.size()}}},
                 {"bins", {{"g0", bins_json(d0)}, {"g1", bins_json(d1)}}}};
  if (args.kde) {
    result["kde"] = {{"bandwidth", args.bandwidth},
                     {"g0", curve_json(madd::kde_plot_curve(d0, args.bandwidth, args.kde_points))},
                     {"g1", curve_json(madd::kde_plot_curve(d1, args.bandwidth, args.kde_points))}};
  }
  const auto out = resolve_output(args.out, "madd.json");
  madd::write_json(out, result);
  std::cout << result["madd"].dump() << '\n';

  madd::RunManifest manifest;
  manifest.command = "madd";
  manifest.config = {{"m", args.bins}, {"kde", args.kde}, {"bandwidth", args.bandwidth}};
  manifest.inputs = {args.in};
  manifest.outputs = {out.string()};
  manifest.rows_g0 = p0.size();
  manifest.rows_g1 = p1.size();
  finish(manifest, clock, manifest_for(out));
  return 0;
}

struct FipArgs {
  std::string in;
  std::string out;
  double lambda = 0.0;
  madd::TransportOptions transport;
  std::string cdf = "interpolated";
};

int run_fip(FipArgs args) {
  const Clock clock;
  madd::check_lambda(args.lambda);
  args.transport.method = madd::parse_cdf_method(args.cdf);
  const auto records = madd::read_records(args.in);
  const auto mapped = madd::fip(records, args.lambda, args.transport);

  std::string csv = "original_proba,new_proba,group\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    csv += madd::format_real(records[i].proba) + ',' + madd::format_real(mapped[i]) +
           (records[i].group == madd::Group::G0 ? ",0\n" : ",1\n");
  }
  const auto out = resolve_output(args.out, "fip.csv");
  madd::write_file(out, csv);

  madd::RunManifest manifest;
  manifest.command = "fip";
  manifest.config = {{"lambda", args.lambda}, {"m", args.transport.bins}, {"cdf_method", args.cdf}};
  manifest.inputs = {args.in};
  manifest.outputs = {out.string()};
  manifest.rows_g0 = madd::count_of(records, madd::Group::G0);
  manifest.rows_g1 = madd::count_of(records, madd::Group::G1);
  finish(manifest, clock, manifest_for(out));
  return 0;
}

struct ObjectiveArgs {
  double theta = 0.5;
  double threshold = 0.5;
  std::size_t bins = madd::kDefaultBins;
  std::size_t grid = 1000;
  std::string cdf = "interpolated";
  unsigned threads = 0;

  madd::ObjectiveConfig config() const {
    if (grid == 0) throw madd::Error(madd::ErrorCode::InvalidConfig, "--grid must be at least 1");
    madd::ObjectiveConfig c;
    c.theta = theta;
    c.threshold = threshold;
    c.bins = bins;
    c.lambda_grid = madd::even_grid(grid);
    c.cdf_method = madd::parse_cdf_method(cdf);
    c.threads = threads;
    c.validate();
    return c;
  }
};

void add_objective_flags(CLI::App* cmd, ObjectiveArgs& args) {
  cmd->add_option("--theta", args.theta, "weight of the fairness loss in [0,1]")->capture_default_str();
  cmd->add_option("--t", args.threshold, "classification threshold in (0,1)")->capture_default_str();
  cmd->add_option("--m", args.bins, "histogram bin count")->capture_default_str();
  cmd->add_option("--grid", args.grid, "number of evenly spaced lambda values in [0,1]")->capture_default_str();
  cmd->add_option("--cdf", args.cdf, "CDF estimate: interpolated | exact")->capture_default_str();
  cmd->add_option("--threads", args.threads, "sweep worker threads (0 = all cores)")->capture_default_str();
}

struct SweepArgs {
  std::string in;
  std::string out_dir;
  ObjectiveArgs objective;
};

int run_sweep(const SweepArgs& args) {
  const Clock clock;
  const auto config = args.objective.config();
  const auto records = madd::read_records(args.in);
  const auto result = madd::sweep(records, config);

  const fs::path dir = args.out_dir.empty() ? output_dir() : fs::path(args.out_dir);
  madd::write_file(dir / "sweep.csv", madd::sweep_to_csv(result));
  madd::write_json(dir / "sweep.json", madd::sweep_to_json(result, config));
  std::cout << json{{"lambda_star", result.lambda_star}, {"min_total_loss", result.min_total_loss}}.dump() << '\n';

  madd::RunManifest manifest;
  manifest.command = "sweep";
  manifest.config = madd::config_to_json(config);
  manifest.inputs = {args.in};
  manifest.outputs = {(dir / "sweep.csv").string(), (dir / "sweep.json").string()};
  manifest.rows_g0 = madd::count_of(records, madd::Group::G0);
  manifest.rows_g1 = madd::count_of(records, madd::Group::G1);
  finish(manifest, clock, dir / "manifest.json");
  return 0;
}

struct PipelineArgs {
  std::string in;
  std::string out_dir;
  std::string sensitive = "gender";
  std::string label = "final_result";
  std::uint64_t seed = 42;
  ObjectiveArgs objective;
};

int run_pipeline_cmd(const PipelineArgs& args) {
  const Clock clock;
  madd::PipelineConfig config;
  config.objective = args.objective.config();
  config.sensitive = args.sensitive;
  config.seed = args.seed;
  auto schema = madd::DatasetSchema::oulad();
  schema.label_column = args.label;
  const auto data = madd::load_dataset(args.in, schema);
  const auto result = madd::run_pipeline(data, config);

  const fs::path dir = args.out_dir.empty() ? output_dir() : fs::path(args.out_dir);
  const auto model_path = dir / "model.json";
  const auto sweep_csv = dir / "validation_sweep.csv";
  const auto sweep_json = dir / "validation_sweep.json";
  const auto metrics_path = dir / "test_metrics.json";
  const auto predictions_path = dir / "test_predictions.csv";
  madd::write_json(model_path, madd::model_to_json(result.training.model, result.encoder));
  madd::write_file(sweep_csv, madd::sweep_to_csv(result.validation_sweep));
  madd::write_json(sweep_json, madd::sweep_to_json(result.validation_sweep, config.objective));
  const auto metrics = madd::metrics_to_json(result);
  madd::write_json(metrics_path, metrics);

  std::string csv = "original_proba,new_proba,group,label\n";
  for (std::size_t i = 0; i < result.test_records.size(); ++i) {
    const auto& r = result.test_records[i];
    csv += madd::format_real(r.proba) + ',' + madd::format_real(result.test_post_processed[i]) +
           (r.group == madd::Group::G0 ? ",0," : ",1,") + (*r.label ? "1\n" : "0\n");
  }
  madd::write_file(predictions_path, csv);
  std::cout << metrics.dump() << '\n';

  madd::RunManifest manifest;
  manifest.command = "pipeline";
  manifest.config = madd::config_to_json(config.objective);
  manifest.config["seed"] = args.seed;
  manifest.config["sensitive"] = args.sensitive;
  manifest.config["label"] = args.label;
  manifest.config["split"] = {config.ratios.train, config.ratios.validation, config.ratios.test};
  manifest.config["train"] = {{"l2", config.train.l2},
                              {"learning_rate", config.train.learning_rate},
                              {"max_iterations", config.train.max_iterations},
                              {"gradient_tolerance", config.train.gradient_tolerance}};
  json encodings = json::object();
  for (const auto& column : data.columns) {
    if (column.kind != madd::ColumnKind::Numerical) encodings[column.name] = column.levels;
  }
  manifest.extra = {{"category_codes", encodings},
                    {"dropped_rows", data.dropped_rows},
                    {"training_iterations", result.training.iterations}};
  manifest.inputs = {args.in};
  manifest.outputs = {model_path.string(), sweep_csv.string(), sweep_json.string(), metrics_path.string(),
                      predictions_path.string()};
  manifest.rows_g0 = result.test_before.rows_g0;
  manifest.rows_g1 = result.test_before.rows_g1;
  finish(manifest, clock, dir / "manifest.json");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MADD fairness metric and post-processing"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(MADD_VERSION));

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "sample the two simulated score distributions");
  simulate->add_option("--n-g0", sim.spec.n_g0, "G0 sample count")->capture_default_str();
  simulate->add_option("--n-g1", sim.spec.n_g1, "G1 sample count")->capture_default_str();
  simulate->add_option("--seed", sim.spec.seed, "generator seed")->capture_default_str();
  simulate->add_option("--gamma-shape", sim.spec.gamma_shape)->capture_default_str();
  simulate->add_option("--gamma-rate", sim.spec.gamma_rate)->capture_default_str();
  simulate->add_option("--gamma-xscale", sim.spec.gamma_xscale)->capture_default_str();
  simulate->add_option("--normal-mean", sim.spec.normal_mean)->capture_default_str();
  simulate->add_option("--normal-sd", sim.spec.normal_sd)->capture_default_str();
  simulate->add_option("--normal-xscale", sim.spec.normal_xscale)->capture_default_str();
  simulate->add_option("--out", sim.out, "records CSV (default $MADD_OUTPUT_DIR/simulated.csv)");

  MaddArgs madd_args;
  auto* madd_cmd = app.add_subcommand("madd", "MADD between the two groups of a records CSV");
  madd_cmd->add_option("--in", madd_args.in, "records CSV")->required();
  madd_cmd->add_option("--m", madd_args.bins, "histogram bin count")->capture_default_str();
  madd_cmd->add_option("--out", madd_args.out, "result JSON (default $MADD_OUTPUT_DIR/madd.json)");
  madd_cmd->add_flag("--kde", madd_args.kde, "include kernel-smoothed curves for plotting");
  madd_cmd->add_option("--bandwidth", madd_args.bandwidth, "KDE bandwidth")->capture_default_str();
  madd_cmd->add_option("--kde-points", madd_args.kde_points, "KDE grid size")->capture_default_str();

  FipArgs fip_args;
  auto* fip_cmd = app.add_subcommand("fip", "post-process probabilities with a fixed lambda");
  fip_cmd->add_option("--in", fip_args.in, "records CSV")->required();
  fip_cmd->add_option("--lambda", fip_args.lambda, "fairness coefficient in [0,1]")->required();
  fip_cmd->add_option("--m", fip_args.transport.bins, "histogram bin count")->capture_default_str();
  fip_cmd->add_option("--cdf", fip_args.cdf, "CDF estimate: interpolated | exact")->capture_default_str();
  fip_cmd->add_option("--out", fip_args.out, "output CSV (default $MADD_OUTPUT_DIR/fip.csv)");

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "evaluate the objective over a lambda grid");
  sweep_cmd->add_option("--in", sweep_args.in, "labelled records CSV")->required();
  sweep_cmd->add_option("--out-dir", sweep_args.out_dir, "output directory (default $MADD_OUTPUT_DIR)");
  add_objective_flags(sweep_cmd, sweep_args.objective);

  PipelineArgs pipe_args;
  auto* pipe_cmd = app.add_subcommand("pipeline", "train, select lambda on validation, evaluate on test");
  pipe_cmd->add_option("--in", pipe_args.in, "flat course CSV")->required();
  pipe_cmd->add_option("--out-dir", pipe_args.out_dir, "output directory (default $MADD_OUTPUT_DIR)");
  pipe_cmd->add_option("--sensitive", pipe_args.sensitive, "binary sensitive column")->capture_default_str();
  pipe_cmd->add_option("--label", pipe_args.label, "label column")->capture_default_str();
  pipe_cmd->add_option("--seed", pipe_args.seed, "split seed")->capture_default_str();
  add_objective_flags(pipe_cmd, pipe_args.objective);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*madd_cmd) return run_madd(madd_args);
    if (*fip_cmd) return run_fip(fip_args);
    if (*sweep_cmd) return run_sweep(sweep_args);
    if (*pipe_cmd) return run_pipeline_cmd(pipe_args);
  } catch (const madd::Error& e) {
    std::cerr << "madd: error: code=" << madd::to_string(e.code()) << " message=\"" << e.what() << "\"\n";
    return madd::exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "madd: error: code=Internal message=\"" << e.what() << "\"\n";
    return 1;
  }
  return 1;
}
