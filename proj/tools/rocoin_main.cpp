#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rocoin/activation_graph.hpp"
#include "rocoin/assignment.hpp"
#include "rocoin/errors.hpp"
#include "rocoin/failure_sim.hpp"
#include "rocoin/io.hpp"
#include "rocoin/planner.hpp"
#include "rocoin/spectral.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitBadArgs = 3;

struct PlanArgs {
  std::string devices_path, activations_path, students_path, out_path;
  double d_th = 0.0;
  double p_th = 0.25;
  std::uint64_t seed = 0;
  std::string metric = "filter_count";
  bool normalize_capacity = false;
};

rocoin::PlannerConfig to_config(const PlanArgs& a) {
  rocoin::PlannerConfig cfg;
  cfg.d_th = a.d_th;
  cfg.p_th = a.p_th;
  cfg.seed = a.seed;
  cfg.normalize_capacity = a.normalize_capacity;
  if (a.metric == "filter_count")
    cfg.partition_size_metric = rocoin::PartitionSizeMetric::filter_count;
  else if (a.metric == "volume")
    cfg.partition_size_metric = rocoin::PartitionSizeMetric::volume;
  else
    throw CLI::ValidationError("--metric", "must be 'filter_count' or 'volume'");
  return cfg;
}

int run_plan(const PlanArgs& a) {
  const auto devices = rocoin::load_devices(a.devices_path);
  const auto students = rocoin::load_students(a.students_path);
  const auto acts = rocoin::load_activations(a.activations_path);
  const rocoin::PlannerConfig cfg = to_config(a);

  const rocoin::AssignmentPlan plan = rocoin::make_plan(devices, acts, students, cfg);
  const rocoin::ConstraintReport report =
      rocoin::validate_plan(plan, devices, students, acts.filter_count(), cfg);
  rocoin::save_plan(a.out_path, plan, report);
  std::cout << "plan: " << plan.groups.size() << " groups, predicted latency "
            << rocoin::format_number(plan.predicted_latency_s) << " s -> "
            << a.out_path << "\n";
  return kExitOk;
}

struct SimArgs {
  std::string plan_path, devices_path, students_path, out_path, csv_path;
  std::string mode = "outage";
  int crash_count = 0;
  int trials = 10000;
  std::uint64_t seed = 0;
};

int run_simulate(const SimArgs& a) {
  const auto devices = rocoin::load_devices(a.devices_path);
  const auto students = rocoin::load_students(a.students_path);
  const auto plan = rocoin::load_plan(a.plan_path);

  rocoin::FailureScenario scenario;
  if (a.mode == "outage")
    scenario.mode = rocoin::FailureMode::outage_sampling;
  else if (a.mode == "crash")
    scenario.mode = rocoin::FailureMode::crash_subset;
  else
    throw CLI::ValidationError("--mode", "must be 'outage' or 'crash'");
  scenario.crash_count = a.crash_count;
  scenario.trials = a.trials;
  scenario.seed = a.seed;

  const rocoin::SimReport report = rocoin::simulate(plan, devices, students, scenario);
  rocoin::save_report_json(a.out_path, report, scenario);
  if (!a.csv_path.empty()) rocoin::save_report_csv(a.csv_path, report);
  std::cout << "simulate: coverage_rate " << rocoin::format_number(report.coverage_rate)
            << ", accuracy_proxy " << rocoin::format_number(report.accuracy_proxy)
            << " -> " << a.out_path << "\n";
  return kExitOk;
}

struct EvalArgs {
  std::string plan_path, devices_path, students_path, activations_path;
  double p_th = 0.25;
};

int run_eval(const EvalArgs& a) {
  const auto devices = rocoin::load_devices(a.devices_path);
  const auto students = rocoin::load_students(a.students_path);
  const auto acts = rocoin::load_activations(a.activations_path);
  const auto plan = rocoin::load_plan(a.plan_path);

  const rocoin::FilterGraph graph = rocoin::build_filter_graph(acts);
  std::cout << "ncut: " << rocoin::format_number(rocoin::ncut_value(graph, plan.partitions))
            << "\n";
  std::cout << "latency_s: "
            << rocoin::format_number(rocoin::plan_latency(plan, devices, students)) << "\n";
  std::cout << "closed_form_coverage: "
            << rocoin::format_number(rocoin::coverage_closed_form(plan, devices)) << "\n";

  rocoin::PlannerConfig cfg;
  cfg.d_th = 1.0;  // unused by validate_plan
  cfg.p_th = a.p_th;
  const rocoin::ConstraintReport report =
      rocoin::validate_plan(plan, devices, students, acts.filter_count(), cfg);
  for (const auto& c : report.checks) {
    std::cout << c.name << ": " << (c.pass ? "PASS" : "FAIL") ;
    if (!c.pass) std::cout << " (" << c.detail << ")";
    std::cout << "\n";
  }
  return report.all_pass() ? kExitOk : kExitInfeasible;
}

int run_graph(const std::string& activations_path, const std::string& out_path) {
  const auto acts = rocoin::load_activations(activations_path);
  rocoin::save_edge_list(out_path, rocoin::build_filter_graph(acts));
  std::cout << "graph: " << acts.filter_count() << " filters -> " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knowledge-assignment planning and failure simulation for "
               "replicated distributed inference over edge devices"};
  app.require_subcommand(1);

  PlanArgs plan_args;
  auto* plan_cmd = app.add_subcommand("plan", "Compute an assignment plan");
  plan_cmd->add_option("--devices", plan_args.devices_path)->required();
  plan_cmd->add_option("--activations", plan_args.activations_path)->required();
  plan_cmd->add_option("--students", plan_args.students_path)->required();
  plan_cmd->add_option("--d-th", plan_args.d_th, "Capacity similarity threshold")->required();
  plan_cmd->add_option("--p-th", plan_args.p_th, "Group outage threshold");
  plan_cmd->add_option("--seed", plan_args.seed);
  plan_cmd->add_option("--metric", plan_args.metric, "Partition size metric");
  plan_cmd->add_flag("--normalize-capacity", plan_args.normalize_capacity,
                     "Min-max normalize capacities before grouping distances");
  plan_cmd->add_option("-o,--output", plan_args.out_path)->required();

  SimArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo failure injection on a plan");
  sim_cmd->add_option("--plan", sim_args.plan_path)->required();
  sim_cmd->add_option("--devices", sim_args.devices_path)->required();
  sim_cmd->add_option("--students", sim_args.students_path)->required();
  sim_cmd->add_option("--mode", sim_args.mode, "outage|crash");
  sim_cmd->add_option("--crash-count", sim_args.crash_count);
  sim_cmd->add_option("--trials", sim_args.trials);
  sim_cmd->add_option("--seed", sim_args.seed);
  sim_cmd->add_option("-o,--output", sim_args.out_path)->required();
  sim_cmd->add_option("--csv", sim_args.csv_path, "Also write a flat CSV report");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Print plan metrics and constraint report");
  eval_cmd->add_option("--plan", eval_args.plan_path)->required();
  eval_cmd->add_option("--devices", eval_args.devices_path)->required();
  eval_cmd->add_option("--students", eval_args.students_path)->required();
  eval_cmd->add_option("--activations", eval_args.activations_path)->required();
  eval_cmd->add_option("--p-th", eval_args.p_th);

  auto* synth_cmd = app.add_subcommand("synth", "Generate synthetic inputs");
  synth_cmd->require_subcommand(1);

  std::string synth_out;
  int synth_n = 8;
  double success_mean = 0.7;
  int het_level = -1;
  std::uint64_t synth_seed = 0;
  auto* synth_dev = synth_cmd->add_subcommand("devices", "Device profile generator");
  synth_dev->add_option("--n", synth_n);
  synth_dev->add_option("--success-mean", success_mean, "Mean per-device success probability");
  synth_dev->add_option("--het-level", het_level,
                        "Heterogeneity level 0..5 (overrides the default ranges)");
  synth_dev->add_option("--seed", synth_seed);
  synth_dev->add_option("-o,--output", synth_out)->required();

  std::string students_preset = "paper-cifar";
  std::string synth_students_out;
  auto* synth_stu = synth_cmd->add_subcommand("students", "Student catalog generator");
  synth_stu->add_option("--preset", students_preset, "paper-cifar|paper-cifar100");
  synth_stu->add_option("-o,--output", synth_students_out)->required();

  int acts_m = 32, acts_classes = 4, acts_samples = 8;
  double acts_sharpness = 10.0;
  std::uint64_t acts_seed = 0;
  std::string acts_out;
  auto* synth_act = synth_cmd->add_subcommand("activations", "Activity matrix generator");
  synth_act->add_option("--m", acts_m, "Filter count");
  synth_act->add_option("--classes", acts_classes);
  synth_act->add_option("--samples-per-class", acts_samples);
  synth_act->add_option("--sharpness", acts_sharpness);
  synth_act->add_option("--seed", acts_seed);
  synth_act->add_option("-o,--output", acts_out)->required();

  std::string graph_acts, graph_out;
  auto* graph_cmd = app.add_subcommand("graph", "Export the filter graph edge list");
  graph_cmd->add_option("--activations", graph_acts)->required();
  graph_cmd->add_option("-o,--output", graph_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadArgs;
  }

  try {
    if (plan_cmd->parsed()) return run_plan(plan_args);
    if (sim_cmd->parsed()) return run_simulate(sim_args);
    if (eval_cmd->parsed()) return run_eval(eval_args);
    if (graph_cmd->parsed()) return run_graph(graph_acts, graph_out);
    if (synth_cmd->parsed()) {
      if (synth_dev->parsed()) {
        std::vector<rocoin::DeviceProfile> devices;
        if (het_level >= 0)
          devices = rocoin::heterogeneity_scenario(het_level, synth_seed, 1.0 - success_mean);
        else
          devices = rocoin::synth_devices(synth_n, success_mean, synth_seed);
        rocoin::save_devices(synth_out, devices);
        std::cout << "synth devices: " << devices.size() << " -> " << synth_out << "\n";
        return kExitOk;
      }
      if (synth_stu->parsed()) {
        rocoin::save_students(synth_students_out, rocoin::synth_students(students_preset));
        std::cout << "synth students: preset " << students_preset << " -> "
                  << synth_students_out << "\n";
        return kExitOk;
      }
      if (synth_act->parsed()) {
        rocoin::save_activations(acts_out, rocoin::synth_activations(acts_m, acts_classes,
                                                                     acts_samples,
                                                                     acts_sharpness, acts_seed));
        std::cout << "synth activations: " << acts_m << " filters -> " << acts_out << "\n";
        return kExitOk;
      }
    }
  } catch (const rocoin::InfeasibleError& e) {
    std::cerr << "infeasible at stage " << e.stage() << ": " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const rocoin::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const rocoin::ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitBadArgs;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadArgs;
  }
  return kExitBadArgs;
}
