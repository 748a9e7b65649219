// arcphase: command-line front end for the iterative phase-estimation simulator.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "arcphase/arcphase.hpp"
#include "arcphase/io.hpp"

namespace {

using namespace arcphase;

constexpr std::int64_t kFullScaleTrials = 100'000;

struct OutputOptions {
  std::string out;  // empty: stdout, no manifest
};

void emit(const OutputOptions& opts, const std::string& csv, const json& params) {
  if (opts.out.empty()) {
    std::cout << csv;
    return;
  }
  write_text(opts.out, csv);
  write_text(manifest_path_for(opts.out), make_manifest(params).dump(2) + "\n");
}

void add_output(CLI::App* cmd, OutputOptions& opts) {
  cmd->add_option("--out", opts.out,
                  "Write CSV here and a JSON manifest beside it (default: CSV to stdout)");
}

struct TableOptions {
  std::int64_t trials = 10'000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool full_scale = false;
  OutputOptions output;
};

void add_table_command(CLI::App& app, const std::string& name, const std::string& about,
                       TableSpec (*make_spec)(std::int64_t, std::uint64_t, unsigned),
                       TableOptions& opts) {
  auto* cmd = app.add_subcommand(name, about);
  cmd->add_option("--trials", opts.trials, "Trials per cell")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", opts.seed, "Root seed");
  cmd->add_option("--threads", opts.threads, "Worker threads (0: all cores)");
  cmd->add_flag("--full-scale", opts.full_scale, "Use 100,000 trials per cell");
  add_output(cmd, opts.output);
  cmd->callback([name, make_spec, &opts] {
    const std::int64_t trials = opts.full_scale ? kFullScaleTrials : opts.trials;
    const auto cells = coverage_table(make_spec(trials, opts.seed, opts.threads));
    emit(opts.output, coverage_table_csv(cells),
         json{{"command", name}, {"trials", trials}, {"seed", opts.seed}});
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iterative phase estimation with circular confidence arcs"};
  app.require_subcommand(1);

  // simulate
  struct {
    std::string theta = "random";
    int stages = 6;
    std::int64_t ntot = 30;
    double noise = 0.0;
    std::uint64_t seed = 0;
    std::optional<std::int64_t> trials;
    unsigned threads = 0;
    OutputOptions output;
  } sim;
  auto* simulate = app.add_subcommand("simulate", "Run one trial, or a coverage experiment with --trials");
  simulate->add_option("--theta", sim.theta, "True phase in [0,1), or 'random'");
  simulate->add_option("--stages", sim.stages, "Iterative stages l")->check(CLI::Range(1, 52));
  simulate->add_option("--ntot", sim.ntot, "Shots per stage, split across x and y (even)");
  simulate->add_option("--noise", sim.noise, "Depolarizing rate r in [0,1)");
  simulate->add_option("--seed", sim.seed, "Root seed");
  simulate->add_option("--trials", sim.trials, "Number of trials (coverage report)");
  simulate->add_option("--threads", sim.threads, "Worker threads (0: all cores)");
  add_output(simulate, sim.output);
  simulate->callback([&sim] {
    ExperimentConfig cfg;
    cfg.stages = sim.stages;
    cfg.shots_per_stage = sim.ntot;
    cfg.noise = NoiseModel{sim.noise};
    cfg.seed = sim.seed;
    cfg.threads = sim.threads;
    if (sim.theta == "random") {
      cfg.theta_source = ThetaSource::kUniform;
    } else {
      cfg.theta_source = ThetaSource::kFixed;
      cfg.fixed_theta = std::stod(sim.theta);
    }
    json params{{"command", "simulate"}, {"theta", sim.theta}, {"stages", sim.stages},
                {"ntot", sim.ntot},      {"noise", sim.noise}, {"seed", sim.seed}};
    if (sim.trials) {
      cfg.trials = *sim.trials;
      params["trials"] = *sim.trials;
      emit(sim.output, coverage_report_csv(coverage_experiment(cfg)), params);
    } else {
      cfg.trials = 1;
      emit(sim.output, trial_csv(run_trials(cfg).front()), params);
    }
  });

  TableOptions t1, t2;
  add_table_command(app, "table1", "Noiseless coverage grid (N_tot 20..50, l 6..9)", &table1_spec, t1);
  add_table_command(app, "table2", "Depolarizing coverage grid (r 2^-4..2^-8, l 4..9, N_tot 30)",
                    &table2_spec, t2);

  // scaling
  ScalingSpec scale;
  double scale_noise = 0.0;
  OutputOptions scale_out;
  auto* scaling = app.add_subcommand("scaling", "Mean fidelity cost vs channel uses, epsilon = 2^-2l");
  scaling->add_option("--lmin", scale.min_stages, "Smallest l")->check(CLI::Range(1, 52));
  scaling->add_option("--lmax", scale.max_stages, "Largest l")->check(CLI::Range(1, 52));
  scaling->add_option("--trials", scale.trials, "Trials per l")->check(CLI::PositiveNumber);
  scaling->add_option("--seed", scale.seed, "Root seed");
  scaling->add_option("--noise", scale_noise, "Depolarizing rate r in [0,1)");
  scaling->add_option("--threads", scale.threads, "Worker threads (0: all cores)");
  add_output(scaling, scale_out);
  scaling->callback([&] {
    scale.noise = NoiseModel{scale_noise};
    emit(scale_out, scaling_csv(scaling_experiment(scale)),
         json{{"command", "scaling"}, {"lmin", scale.min_stages}, {"lmax", scale.max_stages},
              {"trials", scale.trials}, {"seed", scale.seed}, {"noise", scale_noise}});
  });

  // fisher
  double fisher_noise = 0x1p-5;
  int kmax = 9;
  int grid = 1024;
  OutputOptions fisher_out;
  auto* fisher = app.add_subcommand("fisher", "Per-use SLD and Fisher information by stage");
  fisher->add_option("--noise", fisher_noise, "Depolarizing rate r in [0,1)");
  fisher->add_option("--kmax", kmax, "Last stage")->check(CLI::Range(1, 62));
  fisher->add_option("--grid", grid, "Theta grid size for the Fisher averages")
      ->check(CLI::PositiveNumber);
  add_output(fisher, fisher_out);
  fisher->callback([&] {
    emit(fisher_out, info_curve_csv(info_curve(fisher_noise, kmax, grid)),
         json{{"command", "fisher"}, {"noise", fisher_noise}, {"kmax", kmax}, {"grid", grid}});
  });

  // samplesize
  int budget_stages = 6;
  std::optional<double> budget_epsilon;
  auto* samplesize = app.add_subcommand("samplesize", "Hoeffding shot counts for l stages");
  samplesize->add_option("--stages", budget_stages, "Iterative stages l")->required()
      ->check(CLI::Range(1, 62));
  samplesize->add_option("--epsilon", budget_epsilon, "Overall error rate (default 2^-2l)");
  samplesize->callback([&] {
    const double eps = budget_epsilon.value_or(heisenberg_epsilon(budget_stages));
    std::cout << sample_budget_csv(sample_budget(budget_stages, eps));
  });

  // refine
  std::string refine_path;
  auto* refine = app.add_subcommand("refine", "Fold recorded stage arcs into a final arc");
  refine->add_option("--input", refine_path, "JSON file {\"width\": w, \"lowers\": [...]}, or -")
      ->required();
  refine->callback([&] {
    json doc;
    if (refine_path == "-") {
      doc = json::parse(std::cin);
    } else {
      std::ifstream in(refine_path);
      if (!in) throw std::runtime_error("cannot open " + refine_path);
      doc = json::parse(in);
    }
    const RefineInput input = parse_refine_input(doc);
    const auto arcs = input.arcs();
    std::cout << refine_output(refine_arcs(arcs), arcs.size()).dump(2) << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "arcphase: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
