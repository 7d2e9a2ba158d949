// Command line front end: scenario runs, phase-diagram sweeps, heatmap
// rendering and config validation on top of the epistock core library.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "epistock/config.hpp"
#include "epistock/csv_io.hpp"
#include "epistock/errors.hpp"
#include "epistock/metrics.hpp"
#include "epistock/model.hpp"
#include "epistock/svg_render.hpp"
#include "epistock/sweep.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolve = 3;

struct CommonOptions {
  std::string config_path;
  std::string output_dir = ".";
  std::vector<std::string> overrides;
  bool verbose = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw epistock::ConfigError("cannot read config file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

epistock::ScenarioConfig load_with_overrides(const CommonOptions& opt) {
  std::vector<std::string> warnings;
  const epistock::ScenarioConfig cfg =
      epistock::load_config(read_file(opt.config_path), opt.overrides, &warnings);
  for (const auto& w : warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  return cfg;
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw epistock::Error("cannot write " + path.string());
  }
  out << content;
}

epistock::SweepAxis parse_axis_spec(const std::string& spec) {
  // Grammar: parameter:min:max:steps, e.g. theta:0:1:26.
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : spec) {
    if (ch == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  if (parts.size() != 4) {
    throw epistock::AxisError("axis spec '" + spec +
                              "' must be parameter:min:max:steps");
  }
  epistock::SweepAxis ax;
  ax.parameter = epistock::axis_param_from_string(parts[0]);
  try {
    ax.min = std::stod(parts[1]);
    ax.max = std::stod(parts[2]);
    const long steps = std::stol(parts[3]);
    if (steps < 0) throw std::invalid_argument("negative");
    ax.steps = static_cast<std::size_t>(steps);
  } catch (const std::exception&) {
    throw epistock::AxisError("axis spec '" + spec + "' has malformed numbers");
  }
  ax.validate();
  return ax;
}

ordered_json summary_to_json(const epistock::ScenarioSummary& s) {
  ordered_json j;
  j["infected_ratio_a"] = s.infected_ratio_a;
  j["infected_ratio_b"] = s.infected_ratio_b;
  j["infected_ratio_mean"] = s.infected_ratio_mean;
  j["depleted_a"] = s.depleted_a;
  j["depleted_b"] = s.depleted_b;
  j["min_stock_ratio_a"] = s.min_stock_ratio_a;
  j["min_stock_ratio_b"] = s.min_stock_ratio_b;
  j["unserved_ratio_a"] = s.unserved_ratio_a;
  j["unserved_ratio_b"] = s.unserved_ratio_b;
  j["peak_infected_a"] = s.peak_infected_a;
  j["peak_infected_b"] = s.peak_infected_b;
  j["complete"] = s.complete;
  j["outcome"] = epistock::to_string(s.outcome);
  return j;
}

void render_channels(const epistock::SweepResult& res,
                     const std::vector<std::string>& channels,
                     const fs::path& outdir, bool verbose) {
  for (const auto& name : channels) {
    const epistock::HeatmapChannel ch = epistock::channel_from_string(name);
    const fs::path path = outdir / ("heatmap_" + name + ".svg");
    std::ostringstream svg;
    epistock::render_heatmap_svg(res, ch, svg);
    write_text_file(path, svg.str());
    if (verbose) std::cerr << "wrote " << path.string() << "\n";
  }
}

const std::vector<std::string> kAllChannels = {
    "outcome", "infected_ratio_mean", "unserved_mean"};

int cmd_simulate(const CommonOptions& opt) {
  const epistock::ScenarioConfig cfg = load_with_overrides(opt);
  const fs::path outdir(opt.output_dir);
  fs::create_directories(outdir);

  const epistock::ScenarioParams p = cfg.params();
  const epistock::Trajectory traj = epistock::run_scenario(
      p.epidemic, p.community_a, p.community_b, p.sharing, p.numerics,
      cfg.integrator_settings());
  const epistock::ScenarioSummary summary = epistock::summarize(traj);

  {
    std::ostringstream csv;
    epistock::write_timeseries_csv(traj, csv);
    write_text_file(outdir / "timeseries.csv", csv.str());
  }
  write_text_file(outdir / "summary.json", summary_to_json(summary).dump(2) + "\n");
  write_text_file(outdir / "resolved.ini", epistock::echo_config(cfg));

  if (opt.verbose) {
    std::cerr << "samples: " << traj.samples.size() << "\n";
  }
  std::cout << "outcome " << epistock::to_string(summary.outcome)
            << " infected_ratio_mean " << summary.infected_ratio_mean << "\n";
  return kExitOk;
}

int cmd_sweep(const CommonOptions& opt, const std::string& axis_x_spec,
              const std::string& axis_y_spec, unsigned workers, bool svg) {
  const epistock::ScenarioConfig cfg = load_with_overrides(opt);
  const epistock::SweepAxis ax = parse_axis_spec(axis_x_spec);
  const epistock::SweepAxis ay = parse_axis_spec(axis_y_spec);
  const fs::path outdir(opt.output_dir);
  fs::create_directories(outdir);

  const epistock::SweepResult res = epistock::run_sweep(cfg, ax, ay, workers);

  std::ostringstream csv;
  epistock::write_phase_csv(res, csv);
  write_text_file(outdir / "phase.csv", csv.str());
  if (opt.verbose) {
    std::cerr << "swept " << res.points.size() << " cells\n";
  }
  if (svg) {
    render_channels(res, kAllChannels, outdir, opt.verbose);
  }
  std::cout << "phase.csv with " << res.points.size() << " cells\n";
  return kExitOk;
}

int cmd_render(const std::string& input, const std::string& output_dir,
               std::vector<std::string> channels, bool verbose) {
  std::ifstream in(input, std::ios::binary);
  if (!in) {
    throw epistock::ConfigError("cannot read phase csv: " + input);
  }
  const epistock::SweepResult res = epistock::read_phase_csv(in);
  if (channels.empty()) channels = kAllChannels;
  for (const auto& name : channels) {
    epistock::channel_from_string(name);  // validate before writing anything
  }
  const fs::path outdir(output_dir);
  fs::create_directories(outdir);
  render_channels(res, channels, outdir, verbose);
  return kExitOk;
}

int cmd_validate(const CommonOptions& opt) {
  const epistock::ScenarioConfig cfg = load_with_overrides(opt);
  std::cout << epistock::echo_config(cfg);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-community epidemic / stock-sharing simulator"};
  app.require_subcommand(1);

  CommonOptions sim_opt, sweep_opt, val_opt;
  std::string axis_x_spec, axis_y_spec;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  bool svg = false;
  std::string render_input, render_outdir = ".";
  std::vector<std::string> render_channels;
  bool render_verbose = false;

  auto add_common = [](CLI::App* sub, CommonOptions& opt) {
    sub->add_option("-c,--config", opt.config_path, "Scenario config file")
        ->required();
    sub->add_option("-o,--output", opt.output_dir, "Output directory");
    sub->add_option("--set", opt.overrides,
                    "Override a config key (section.key=value, repeatable)");
    sub->add_flag("-v,--verbose", opt.verbose, "Verbose progress output");
  };

  CLI::App* simulate =
      app.add_subcommand("simulate", "Run one scenario and write its outputs");
  add_common(simulate, sim_opt);

  CLI::App* sweep =
      app.add_subcommand("sweep", "Run a two-axis phase-diagram sweep");
  add_common(sweep, sweep_opt);
  sweep->add_option("--axis-x", axis_x_spec, "parameter:min:max:steps")
      ->required();
  sweep->add_option("--axis-y", axis_y_spec, "parameter:min:max:steps")
      ->required();
  sweep->add_option("--workers", workers, "Worker thread count");
  sweep->add_flag("--svg", svg, "Also render heatmaps per channel");

  CLI::App* render =
      app.add_subcommand("render", "Render heatmaps from an existing phase.csv");
  render->add_option("-i,--input", render_input, "phase.csv produced by sweep")
      ->required();
  render->add_option("-o,--output", render_outdir, "Output directory");
  render->add_option("--channel", render_channels,
                     "outcome | infected_ratio_mean | unserved_mean "
                     "(repeatable; default all)");
  render->add_flag("-v,--verbose", render_verbose, "Verbose progress output");

  CLI::App* validate = app.add_subcommand(
      "validate", "Load, validate and echo the resolved config");
  add_common(validate, val_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim_opt);
    if (sweep->parsed()) {
      return cmd_sweep(sweep_opt, axis_x_spec, axis_y_spec, workers, svg);
    }
    if (render->parsed()) {
      return cmd_render(render_input, render_outdir, render_channels,
                        render_verbose);
    }
    if (validate->parsed()) return cmd_validate(val_opt);
  } catch (const epistock::SolveError& e) {
    std::cerr << "integration failed: " << e.what() << "\n";
    return kExitSolve;
  } catch (const epistock::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return kExitSolve;
  }
  return kExitConfig;
}
