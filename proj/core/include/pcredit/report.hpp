#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pcredit/io/dataset.hpp"
#include "pcredit/metrics.hpp"
#include "pcredit/rank_overlap.hpp"
#include "pcredit/stats.hpp"

namespace pcredit::report {

enum class Grouping { by_treatment, all };
enum class Metric { lv, lr, dlr, av, ar, mrbo };
enum class Format { csv, markdown, svg };

Metric parse_metric(std::string_view text);
Format parse_format(std::string_view text);
Grouping parse_grouping(std::string_view text);
std::string_view to_string(Metric m) noexcept;

inline const std::string kAllGroup = "All";

struct ReportSpec {
  Grouping grouping = Grouping::by_treatment;
  std::set<Metric> metrics = {Metric::lv, Metric::lr, Metric::dlr, Metric::mrbo};
  double p = overlap::kDefaultPersistence;
  metrics::GradeScale scale = metrics::GradeScale::letter_default();
  std::set<Format> formats = {Format::csv, Format::markdown};

  /// Throws std::invalid_argument on an empty metric or format set or a
  /// persistence outside (0, 1).
  void validate() const;
};

struct Group {
  std::string label;
  std::vector<PredictionRecord> records;
};

/// Treatment groups in the bundle's treatment order (treatments without
/// predictions are skipped), or one group holding everything.
std::vector<Group> make_groups(const io::ExperimentBundle& bundle, Grouping grouping);

/// Per-group table. Column names are "<metric>_all" or "<metric>_<decision>".
struct MetricsTable {
  struct Row {
    std::string label;
    std::size_t participants = 0;
    std::vector<double> cells;
    std::vector<std::string> best_in;  // columns where this row is best
  };
  std::vector<std::string> columns;
  std::vector<Row> rows;
};

/// Columns per requested metric: lv and lr give All plus one per decision;
/// av, ar and mrbo give one per decision. Lower is better for lv, lr and ar;
/// higher for av and mrbo.
MetricsTable build_metrics_table(const io::ExperimentBundle& bundle, const ReportSpec& spec);

struct GradeCounts {
  std::string decision_id;
  std::string group;
  std::vector<std::size_t> counts;  // aligned with scale labels
};

std::vector<GradeCounts> build_grade_distribution(const io::ExperimentBundle& bundle, const ReportSpec& spec);

struct FiveNumber {
  std::string group;
  std::string metric;  // "lv" or "lr"
  std::size_t n = 0;
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

/// Five-number summaries of per-prediction LV and LR for each group.
std::vector<FiveNumber> build_box_summaries(const io::ExperimentBundle& bundle, const ReportSpec& spec);

struct VoteMatrix {
  std::string group;
  std::string decision_id;
  int rows = 0;  // board n
  int cols = 0;  // board m
  std::vector<std::vector<std::size_t>> counts;  // [row][col]
  std::optional<mnk::SquareId> chosen;

  std::size_t total() const;
};

/// Vote counts laid out on the board. Requires an mnk bundle; throws
/// std::invalid_argument for an unknown decision.
std::vector<VoteMatrix> build_vote_matrices(const io::ExperimentBundle& bundle, const std::string& decision_id,
                                            Grouping grouping);

enum class LossSpace { value, rank };
LossSpace parse_space(std::string_view text);

struct StatsReport {
  LossSpace space = LossSpace::value;
  std::vector<stats::SampleGroup> groups;  // per-participant loss sums per treatment
  stats::PipelineResult pipeline;
};

/// Sums each participant's LV (or LR) over decisions, groups by treatment
/// and runs the test-selection pipeline. Throws std::invalid_argument with
/// fewer than 2 treatments or degenerate groups.
StatsReport build_stats_report(const io::ExperimentBundle& bundle, LossSpace space, double alpha);

/// Everything `metrics` reports for one bundle. The treatment comparison on
/// per-participant LV sums is attempted and replaced by a notice when the
/// groups cannot support it (fewer than 2 groups, or under 3 participants).
struct MetricsReport {
  MetricsTable table;
  std::vector<GradeCounts> grades;
  std::vector<FiveNumber> boxes;
  std::optional<StatsReport> comparison;
  std::vector<std::string> notices;
};

MetricsReport build_metrics_report(const io::ExperimentBundle& bundle, const ReportSpec& spec,
                                   double alpha = stats::kDefaultAlpha);

// Rendering. Numbers in CSV use the shortest round-trip form.
std::string metrics_csv(const MetricsTable& table);
std::string grades_csv(const std::vector<GradeCounts>& grades, const metrics::GradeScale& scale);
std::string box_csv(const std::vector<FiveNumber>& boxes);
std::string samples_csv(const std::vector<metrics::MetricSample>& samples);
std::string metrics_markdown(const MetricsReport& report, const metrics::GradeScale& scale, double alpha);
std::string votes_csv(const std::vector<VoteMatrix>& matrices);
std::string votes_svg(const VoteMatrix& matrix);
std::string box_svg(const std::vector<FiveNumber>& boxes, std::string_view metric);
std::string stats_text(const StatsReport& report, double alpha);
std::string stats_json(const StatsReport& report, double alpha);

}  // namespace pcredit::report
