// pcredit: score prediction experiments and compare treatments.
//
// Exit codes: 0 success, 1 data error (malformed or degenerate bundle),
// 2 usage error (bad flags or invalid board configuration).

#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pcredit/io/dataset.hpp"
#include "pcredit/metrics.hpp"
#include "pcredit/mnk/oracle.hpp"
#include "pcredit/report.hpp"
#include "pcredit/rng.hpp"

namespace fs = std::filesystem;
using namespace pcredit;

namespace {

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::string bundle;
  std::string out_dir;
  std::vector<std::string> formats;
  double p = overlap::kDefaultPersistence;
  double alpha = stats::kDefaultAlpha;
  std::uint64_t seed = 0;
};

std::set<report::Format> parse_formats(const std::vector<std::string>& names, std::set<report::Format> fallback) {
  if (names.empty()) return fallback;
  std::set<report::Format> out;
  for (const std::string& n : names) {
    try {
      out.insert(report::parse_format(n));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string(flag) + " is required");
}

// ---- simulate --------------------------------------------------------------

struct SimulateOptions {
  int m = 9, n = 4, k = 4;
  int participants = 86;
  std::string treatments = "4";
  double mutation = 0.0;
  std::uint64_t rollouts = 256;
  int decisions = 4;
  int agents = 1;
  std::string model = "geometric:0.6";
  std::vector<std::string> model_for;
  std::string experiment_id = "synthetic";
  bool exhaustive = false;
};

int run_simulate(const GlobalOptions& g, const SimulateOptions& o) {
  require(g.out_dir, "--out-dir");
  io::SyntheticConfig cfg;
  cfg.experiment_id = o.experiment_id;
  cfg.board = {o.m, o.n, o.k};
  try {
    cfg.board.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (o.participants < 1) throw UsageError("--participants must be at least 1");
  if (o.agents < 1) throw UsageError("--agents must be at least 1");
  if (o.decisions < 1) throw UsageError("--decisions must be at least 1");
  if (!(o.mutation >= 0.0)) throw UsageError("--mutation must be >= 0");
  cfg.participants = o.participants;
  cfg.decisions_per_game = o.decisions;
  cfg.seed = g.seed;

  bool numeric = !o.treatments.empty() && o.treatments.find_first_not_of("0123456789") == std::string::npos;
  if (numeric) {
    const int count = std::stoi(o.treatments);
    if (count < 1) throw UsageError("--treatments must name at least one treatment");
    for (int i = 1; i <= count; ++i) cfg.treatments.push_back("T" + std::to_string(i));
  } else {
    cfg.treatments = split(o.treatments, ',');
  }

  try {
    cfg.behavior.default_model = io::ParticipantModel::parse(o.model);
    for (const std::string& item : o.model_for) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--model-for expects TREATMENT=MODEL");
      cfg.behavior.per_treatment[item.substr(0, eq)] = io::ParticipantModel::parse(item.substr(eq + 1));
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  for (int a = 0; a < o.agents; ++a) {
    const std::uint64_t agent_seed = mix_seed(g.seed, 1000 + static_cast<std::uint64_t>(a));
    mnk::AgentSpec spec = o.exhaustive ? mnk::AgentSpec::make_exhaustive()
                                       : mnk::AgentSpec::make_sampled(o.rollouts, agent_seed);
    if (o.mutation > 0.0) spec.mutation = mnk::Mutation{mix_seed(agent_seed, 7), o.mutation};
    cfg.agents.push_back(spec);
  }

  const io::ExperimentBundle bundle = io::generate_synthetic_experiment(cfg);
  const fs::path dir(g.out_dir);
  io::save_bundle(bundle, dir);
  io::write_file(dir / "scores.csv",
                 io::serialize_score_tensor_csv(mnk::export_score_tensor(cfg.board, bundle.decisions)));
  std::cout << "bundle: " << dir.string() << "\n"
            << "actions: " << bundle.manifest.actions.size() << "\n"
            << "decisions: " << bundle.decisions.size() << "\n"
            << "participants: " << cfg.participants << "\n"
            << "treatments: " << bundle.treatments.size() << "\n"
            << "predictions: " << bundle.predictions.size() << "\n";
  return 0;
}

// ---- metrics / grade ---------------------------------------------------------

struct MetricsOptions {
  std::string metrics = "lv,lr,dlr,mrbo";
  std::string grouping = "by_treatment";
  std::string grades;
};

report::ReportSpec make_spec(const GlobalOptions& g, const MetricsOptions& o) {
  report::ReportSpec spec;
  try {
    spec.grouping = report::parse_grouping(o.grouping);
    spec.metrics.clear();
    for (const std::string& m : split(o.metrics, ',')) spec.metrics.insert(report::parse_metric(m));
    spec.p = g.p;
    if (!o.grades.empty()) spec.scale = metrics::GradeScale::parse(o.grades);
    spec.formats = parse_formats(g.formats, {report::Format::csv, report::Format::markdown});
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return spec;
}

int run_metrics(const GlobalOptions& g, const MetricsOptions& o) {
  require(g.bundle, "--bundle");
  require(g.out_dir, "--out-dir");
  const report::ReportSpec spec = make_spec(g, o);
  const io::ExperimentBundle bundle = io::load_bundle(g.bundle);
  const report::MetricsReport r = report::build_metrics_report(bundle, spec, g.alpha);
  const fs::path out(g.out_dir);
  if (spec.formats.contains(report::Format::csv)) {
    io::write_file(out / "metrics.csv", report::metrics_csv(r.table));
    if (!r.grades.empty()) io::write_file(out / "grades.csv", report::grades_csv(r.grades, spec.scale));
    io::write_file(out / "boxplot.csv", report::box_csv(r.boxes));
  }
  if (spec.formats.contains(report::Format::markdown)) {
    io::write_file(out / "metrics.md", report::metrics_markdown(r, spec.scale, g.alpha));
  }
  if (spec.formats.contains(report::Format::svg)) {
    io::write_file(out / "boxplot_lv.svg", report::box_svg(r.boxes, "lv"));
    io::write_file(out / "boxplot_lr.svg", report::box_svg(r.boxes, "lr"));
  }
  std::cout << "groups: " << r.table.rows.size() << ", decisions: " << bundle.decisions.size()
            << ", columns: " << r.table.columns.size() << "\n";
  for (const std::string& n : r.notices) std::cout << "notice: " << n << "\n";
  return 0;
}

int run_grade(const GlobalOptions& g, const MetricsOptions& o) {
  require(g.bundle, "--bundle");
  require(g.out_dir, "--out-dir");
  MetricsOptions with_dlr = o;
  with_dlr.metrics = "dlr";
  const report::ReportSpec spec = make_spec(g, with_dlr);
  const io::ExperimentBundle bundle = io::load_bundle(g.bundle);
  const auto samples = metrics::score_dataset(bundle.predictions, bundle.decisions, spec.scale);
  const fs::path out(g.out_dir);
  io::write_file(out / "samples.csv", report::samples_csv(samples));
  io::write_file(out / "grades.csv", report::grades_csv(report::build_grade_distribution(bundle, spec), spec.scale));
  std::cout << "samples: " << samples.size() << "\n";
  return 0;
}

// ---- stats -------------------------------------------------------------------

int run_stats(const GlobalOptions& g, const std::string& space) {
  require(g.bundle, "--bundle");
  report::LossSpace loss_space;
  try {
    loss_space = report::parse_space(space);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!(g.alpha > 0.0 && g.alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
  const io::ExperimentBundle bundle = io::load_bundle(g.bundle);
  const report::StatsReport r = report::build_stats_report(bundle, loss_space, g.alpha);
  const std::string text = report::stats_text(r, g.alpha);
  std::cout << text;
  if (!g.out_dir.empty()) {
    const fs::path out(g.out_dir);
    io::write_file(out / "stats.txt", text);
    io::write_file(out / "stats.json", report::stats_json(r, g.alpha));
  }
  return 0;
}

// ---- votes -------------------------------------------------------------------

int run_votes(const GlobalOptions& g, const std::string& decision, const std::string& grouping) {
  require(g.bundle, "--bundle");
  require(g.out_dir, "--out-dir");
  require(decision, "--decision");
  report::Grouping group_by;
  std::set<report::Format> formats;
  try {
    group_by = report::parse_grouping(grouping);
    formats = parse_formats(g.formats, {report::Format::csv});
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const io::ExperimentBundle bundle = io::load_bundle(g.bundle);
  const auto matrices = report::build_vote_matrices(bundle, decision, group_by);
  const fs::path out(g.out_dir);
  if (formats.contains(report::Format::csv) || formats.contains(report::Format::markdown)) {
    io::write_file(out / ("votes_" + decision + ".csv"), report::votes_csv(matrices));
  }
  if (formats.contains(report::Format::svg)) {
    for (const auto& vm : matrices) {
      io::write_file(out / ("votes_" + decision + "_" + vm.group + ".svg"), report::votes_svg(vm));
    }
  }
  for (const auto& vm : matrices) std::cout << vm.group << ": " << vm.total() << " votes\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial-credit scoring of predictions of an agent's action choices.\n"
               "Exit codes: 0 ok, 1 data error, 2 usage error."};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--bundle", g.bundle, "Bundle directory (manifest.json, values.csv, predictions.csv)");
  app.add_option("--out-dir", g.out_dir, "Output directory; outputs are written relative to it");
  app.add_option("--format", g.formats, "Output formats: csv, markdown, svg (repeatable)")->delimiter(',');
  app.add_option("--p", g.p, "RBO persistence p in (0, 1)")->capture_default_str();
  app.add_option("--alpha", g.alpha, "Gate threshold for the normality/equivariance checks")->capture_default_str();
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic MNK experiment bundle");
  simulate->add_option("--m", sim.m, "Board columns")->capture_default_str();
  simulate->add_option("--n", sim.n, "Board rows")->capture_default_str();
  simulate->add_option("--k", sim.k, "Run length needed to win")->capture_default_str();
  simulate->add_option("--participants", sim.participants, "Participant count")->capture_default_str();
  simulate->add_option("--treatments", sim.treatments, "Treatment count or comma-separated labels")
      ->capture_default_str();
  simulate->add_option("--mutation", sim.mutation, "Agent value-noise magnitude")->capture_default_str();
  simulate->add_option("--rollouts", sim.rollouts, "Monte-Carlo rollouts per square")->capture_default_str();
  simulate->add_flag("--exhaustive", sim.exhaustive, "Use the exhaustive oracle (at most 12 empty squares)");
  simulate->add_option("--decisions", sim.decisions, "Agent decisions recorded per game")->capture_default_str();
  simulate->add_option("--agents", sim.agents, "Number of games/agents")->capture_default_str();
  simulate->add_option("--model", sim.model, "Participant model: rank1 | uniform | geometric:R | weights:W1,W2,...")
      ->capture_default_str();
  simulate->add_option("--model-for", sim.model_for, "Per-treatment model override TREATMENT=MODEL (repeatable)");
  simulate->add_option("--experiment-id", sim.experiment_id, "Experiment id")->capture_default_str();

  MetricsOptions mo;
  auto* metrics_cmd = app.add_subcommand("metrics", "Per-group LV/LR/mRBO tables and grade distributions");
  metrics_cmd->add_option("--metrics", mo.metrics, "Subset of lv,lr,dlr,av,ar,mrbo")->capture_default_str();
  metrics_cmd->add_option("--grouping", mo.grouping, "by_treatment | all")->capture_default_str();
  metrics_cmd->add_option("--grades", mo.grades, "Grade scale, e.g. 4:A,8:B,12:C,16:D,*:F");

  auto* grade_cmd = app.add_subcommand("grade", "Per-prediction LV, LR and grade");
  grade_cmd->add_option("--grouping", mo.grouping, "by_treatment | all")->capture_default_str();
  grade_cmd->add_option("--grades", mo.grades, "Grade scale, e.g. 4:A,8:B,12:C,16:D,*:F");

  std::string space = "value";
  auto* stats_cmd = app.add_subcommand("stats", "Normality/equivariance gates, then ANOVA or Kruskal-Wallis");
  stats_cmd->add_option("--space", space, "Loss space summed per participant: value | rank")->capture_default_str();

  std::string decision;
  std::string vote_grouping = "by_treatment";
  auto* votes_cmd = app.add_subcommand("votes", "Vote-count heat maps for one decision");
  votes_cmd->add_option("--decision", decision, "Decision id");
  votes_cmd->add_option("--grouping", vote_grouping, "by_treatment | all")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*simulate) return run_simulate(g, sim);
    if (*metrics_cmd) return run_metrics(g, mo);
    if (*grade_cmd) return run_grade(g, mo);
    if (*stats_cmd) return run_stats(g, space);
    if (*votes_cmd) return run_votes(g, decision, vote_grouping);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
