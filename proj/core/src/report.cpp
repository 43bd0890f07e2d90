#include "pcredit/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "pcredit/io/csv.hpp"

namespace pcredit::report {
namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::string fixed(double v, int decimals) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s = buf;
  if (s.find_first_not_of("-0.") == std::string::npos) s = decimals > 0 ? "0." + std::string(decimals, '0') : "0";
  return s;
}

std::string csv_number(double v) { return std::isnan(v) ? std::string() : io::format_double(v); }

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

bool lower_is_better(Metric m) { return m == Metric::lv || m == Metric::lr || m == Metric::ar; }

// Samples for each group, keyed by decision, from one library scoring pass.
struct GroupSamples {
  std::string label;
  std::size_t participants = 0;
  std::vector<metrics::MetricSample> all;
  std::map<std::string, std::vector<metrics::MetricSample>> by_decision;
  std::map<std::string, std::vector<PredictionRecord>> records_by_decision;
};

std::vector<GroupSamples> score_groups(const io::ExperimentBundle& bundle, const ReportSpec& spec) {
  std::vector<GroupSamples> out;
  for (Group& g : make_groups(bundle, spec.grouping)) {
    GroupSamples gs;
    gs.label = g.label;
    gs.all = metrics::score_dataset(g.records, bundle.decisions, spec.scale);
    std::set<std::string> people;
    for (const metrics::MetricSample& s : gs.all) {
      people.insert(s.participant_id);
      gs.by_decision[s.decision_id].push_back(s);
    }
    for (const PredictionRecord& r : g.records) gs.records_by_decision[r.decision_id].push_back(r);
    gs.participants = people.size();
    out.push_back(std::move(gs));
  }
  return out;
}

template <typename F>
std::vector<double> project(const std::vector<metrics::MetricSample>& samples, F f) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const metrics::MetricSample& s : samples) out.push_back(f(s));
  return out;
}

double mean_or_missing(const std::vector<double>& xs) { return xs.empty() ? kMissing : stats::mean(xs); }

}  // namespace

Metric parse_metric(std::string_view text) {
  if (text == "lv") return Metric::lv;
  if (text == "lr") return Metric::lr;
  if (text == "dlr") return Metric::dlr;
  if (text == "av") return Metric::av;
  if (text == "ar") return Metric::ar;
  if (text == "mrbo") return Metric::mrbo;
  throw std::invalid_argument("unknown metric '" + std::string(text) + "'");
}

Format parse_format(std::string_view text) {
  if (text == "csv") return Format::csv;
  if (text == "markdown" || text == "md") return Format::markdown;
  if (text == "svg") return Format::svg;
  throw std::invalid_argument("unknown format '" + std::string(text) + "'");
}

Grouping parse_grouping(std::string_view text) {
  if (text == "by_treatment") return Grouping::by_treatment;
  if (text == "all") return Grouping::all;
  throw std::invalid_argument("unknown grouping '" + std::string(text) + "'");
}

LossSpace parse_space(std::string_view text) {
  if (text == "value") return LossSpace::value;
  if (text == "rank") return LossSpace::rank;
  throw std::invalid_argument("unknown loss space '" + std::string(text) + "' (expected value or rank)");
}

std::string_view to_string(Metric m) noexcept {
  switch (m) {
    case Metric::lv: return "lv";
    case Metric::lr: return "lr";
    case Metric::dlr: return "dlr";
    case Metric::av: return "av";
    case Metric::ar: return "ar";
    case Metric::mrbo: return "mrbo";
  }
  return "lv";
}

void ReportSpec::validate() const {
  if (metrics.empty()) throw std::invalid_argument("report needs at least one metric");
  if (formats.empty()) throw std::invalid_argument("report needs at least one output format");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("persistence p must lie in (0, 1)");
}

std::vector<Group> make_groups(const io::ExperimentBundle& bundle, Grouping grouping) {
  if (grouping == Grouping::all) return {{kAllGroup, bundle.predictions}};
  std::vector<Group> groups;
  for (const std::string& t : bundle.treatments) {
    Group g{t, {}};
    for (const PredictionRecord& p : bundle.predictions) {
      if (p.treatment == t) g.records.push_back(p);
    }
    if (!g.records.empty()) groups.push_back(std::move(g));
  }
  return groups;
}

MetricsTable build_metrics_table(const io::ExperimentBundle& bundle, const ReportSpec& spec) {
  spec.validate();
  const std::vector<GroupSamples> groups = score_groups(bundle, spec);
  MetricsTable table;
  std::vector<Metric> column_metric;

  auto add_column = [&](Metric m, const std::string& suffix) {
    table.columns.push_back(std::string(to_string(m)) + "_" + suffix);
    column_metric.push_back(m);
  };
  for (Metric m : {Metric::lv, Metric::lr}) {
    if (!spec.metrics.contains(m)) continue;
    add_column(m, "all");
    for (const DecisionValues& d : bundle.decisions) add_column(m, d.decision_id());
  }
  for (Metric m : {Metric::av, Metric::ar, Metric::mrbo}) {
    if (!spec.metrics.contains(m)) continue;
    for (const DecisionValues& d : bundle.decisions) add_column(m, d.decision_id());
  }

  for (const GroupSamples& g : groups) {
    MetricsTable::Row row{g.label, g.participants, {}, {}};
    auto lv_of = [](const metrics::MetricSample& s) { return s.lv; };
    auto lr_of = [](const metrics::MetricSample& s) { return static_cast<double>(s.lr); };
    for (Metric m : {Metric::lv, Metric::lr}) {
      if (!spec.metrics.contains(m)) continue;
      const auto pick = m == Metric::lv ? +lv_of : +lr_of;
      row.cells.push_back(mean_or_missing(project(g.all, pick)));
      for (const DecisionValues& d : bundle.decisions) {
        auto it = g.by_decision.find(d.decision_id());
        row.cells.push_back(it == g.by_decision.end() ? kMissing : mean_or_missing(project(it->second, pick)));
      }
    }
    for (Metric m : {Metric::av, Metric::ar, Metric::mrbo}) {
      if (!spec.metrics.contains(m)) continue;
      for (const DecisionValues& d : bundle.decisions) {
        auto it = g.records_by_decision.find(d.decision_id());
        if (it == g.records_by_decision.end()) {
          row.cells.push_back(kMissing);
        } else if (m == Metric::av) {
          row.cells.push_back(metrics::av_score(it->second, d));
        } else if (m == Metric::ar) {
          row.cells.push_back(metrics::ar_score(it->second, d));
        } else {
          row.cells.push_back(overlap::mrbo_ext(overlap::vote_ranklist(it->second), overlap::agent_ranklist(d), spec.p));
        }
      }
    }
    table.rows.push_back(std::move(row));
  }

  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    std::optional<double> best;
    for (const auto& row : table.rows) {
      const double v = row.cells[c];
      if (std::isnan(v)) continue;
      if (!best || (lower_is_better(column_metric[c]) ? v < *best : v > *best)) best = v;
    }
    if (!best) continue;
    for (auto& row : table.rows) {
      if (row.cells[c] == *best) row.best_in.push_back(table.columns[c]);
    }
  }
  return table;
}

std::vector<GradeCounts> build_grade_distribution(const io::ExperimentBundle& bundle, const ReportSpec& spec) {
  spec.validate();
  const std::vector<GroupSamples> groups = score_groups(bundle, spec);
  const std::vector<std::string> labels = spec.scale.labels();
  std::vector<GradeCounts> out;
  for (const DecisionValues& d : bundle.decisions) {
    for (const GroupSamples& g : groups) {
      GradeCounts gc{d.decision_id(), g.label, std::vector<std::size_t>(labels.size(), 0)};
      auto it = g.by_decision.find(d.decision_id());
      if (it != g.by_decision.end()) {
        for (const metrics::MetricSample& s : it->second) {
          const auto pos = std::find(labels.begin(), labels.end(), s.grade) - labels.begin();
          ++gc.counts[static_cast<std::size_t>(pos)];
        }
      }
      out.push_back(std::move(gc));
    }
  }
  return out;
}

std::vector<FiveNumber> build_box_summaries(const io::ExperimentBundle& bundle, const ReportSpec& spec) {
  spec.validate();
  std::vector<FiveNumber> out;
  for (const GroupSamples& g : score_groups(bundle, spec)) {
    if (g.all.empty()) continue;
    for (const char* metric : {"lv", "lr"}) {
      const std::vector<double> xs = project(g.all, [metric](const metrics::MetricSample& s) {
        return metric[1] == 'v' ? s.lv : static_cast<double>(s.lr);
      });
      out.push_back({g.label, metric, xs.size(), stats::quantile(xs, 0.0), stats::quantile(xs, 0.25),
                     stats::quantile(xs, 0.5), stats::quantile(xs, 0.75), stats::quantile(xs, 1.0)});
    }
  }
  return out;
}

std::size_t VoteMatrix::total() const {
  std::size_t t = 0;
  for (const auto& row : counts) {
    for (std::size_t c : row) t += c;
  }
  return t;
}

std::vector<VoteMatrix> build_vote_matrices(const io::ExperimentBundle& bundle, const std::string& decision_id,
                                            Grouping grouping) {
  if (bundle.manifest.domain.kind != io::DomainKind::mnk) {
    throw std::invalid_argument("vote heat maps need an mnk bundle");
  }
  const DecisionValues* decision = bundle.find_decision(decision_id);
  if (!decision) throw std::invalid_argument("unknown decision '" + decision_id + "'");
  const mnk::BoardConfig& cfg = bundle.manifest.domain.board;
  std::vector<VoteMatrix> out;
  for (const Group& g : make_groups(bundle, grouping)) {
    VoteMatrix vm;
    vm.group = g.label;
    vm.decision_id = decision_id;
    vm.rows = cfg.n;
    vm.cols = cfg.m;
    vm.counts.assign(static_cast<std::size_t>(cfg.n), std::vector<std::size_t>(static_cast<std::size_t>(cfg.m), 0));
    vm.chosen = mnk::SquareId::parse(decision->chosen().str());
    for (const PredictionRecord& p : g.records) {
      if (p.decision_id != decision_id) continue;
      const mnk::SquareId sq = mnk::SquareId::parse(p.predicted.str());
      ++vm.counts[static_cast<std::size_t>(sq.row)][static_cast<std::size_t>(sq.col)];
    }
    out.push_back(std::move(vm));
  }
  return out;
}

StatsReport build_stats_report(const io::ExperimentBundle& bundle, LossSpace space, double alpha) {
  const std::vector<Group> groups = make_groups(bundle, Grouping::by_treatment);
  if (groups.size() < 2) {
    throw std::invalid_argument("treatment comparison needs at least 2 treatments with predictions");
  }
  StatsReport report;
  report.space = space;
  for (const Group& g : groups) {
    std::map<std::string, double, NaturalLess> per_participant;
    for (const metrics::MetricSample& s : metrics::score_dataset(g.records, bundle.decisions)) {
      per_participant[s.participant_id] += space == LossSpace::value ? s.lv : static_cast<double>(s.lr);
    }
    stats::SampleGroup sg{g.label, {}};
    for (const auto& [participant, total] : per_participant) sg.values.push_back(total);
    report.groups.push_back(std::move(sg));
  }
  report.pipeline = stats::run_pipeline(report.groups, alpha);
  return report;
}

MetricsReport build_metrics_report(const io::ExperimentBundle& bundle, const ReportSpec& spec, double alpha) {
  MetricsReport r;
  r.table = build_metrics_table(bundle, spec);
  if (spec.metrics.contains(Metric::dlr)) r.grades = build_grade_distribution(bundle, spec);
  r.boxes = build_box_summaries(bundle, spec);
  for (const auto& row : r.table.rows) {
    if (row.participants < 3) {
      r.notices.push_back("group '" + row.label + "' has " + std::to_string(row.participants) +
                          " participant(s); treatment comparison omitted");
    }
  }
  if (spec.grouping != Grouping::by_treatment || r.table.rows.size() < 2) {
    r.notices.push_back("fewer than 2 treatment groups; treatment comparison omitted");
  }
  if (r.notices.empty()) {
    try {
      r.comparison = build_stats_report(bundle, LossSpace::value, alpha);
    } catch (const std::invalid_argument& e) {
      r.notices.push_back(std::string("treatment comparison omitted: ") + e.what());
    }
  }
  return r;
}

std::string metrics_csv(const MetricsTable& table) {
  std::vector<std::string> header = {"group", "participants"};
  header.insert(header.end(), table.columns.begin(), table.columns.end());
  header.push_back("best_in");
  std::string out = io::csv_line(header);
  for (const auto& row : table.rows) {
    std::vector<std::string> fields = {row.label, std::to_string(row.participants)};
    for (double v : row.cells) fields.push_back(csv_number(v));
    std::string best;
    for (const std::string& c : row.best_in) best += (best.empty() ? "" : ";") + c;
    fields.push_back(best);
    out += io::csv_line(fields);
  }
  return out;
}

std::string grades_csv(const std::vector<GradeCounts>& grades, const metrics::GradeScale& scale) {
  std::vector<std::string> header = {"decision_id", "group"};
  for (const std::string& l : scale.labels()) header.push_back(l);
  std::string out = io::csv_line(header);
  for (const GradeCounts& g : grades) {
    std::vector<std::string> fields = {g.decision_id, g.group};
    for (std::size_t c : g.counts) fields.push_back(std::to_string(c));
    out += io::csv_line(fields);
  }
  return out;
}

std::string box_csv(const std::vector<FiveNumber>& boxes) {
  std::string out = io::csv_line({"group", "metric", "n", "min", "q1", "median", "q3", "max"});
  for (const FiveNumber& b : boxes) {
    out += io::csv_line({b.group, b.metric, std::to_string(b.n), io::format_double(b.min), io::format_double(b.q1),
                         io::format_double(b.median), io::format_double(b.q3), io::format_double(b.max)});
  }
  return out;
}

std::string samples_csv(const std::vector<metrics::MetricSample>& samples) {
  std::string out =
      io::csv_line({"participant_id", "treatment", "decision_id", "predicted_action", "lv", "rank", "lr", "grade"});
  for (const metrics::MetricSample& s : samples) {
    out += io::csv_line({s.participant_id, s.treatment, s.decision_id, s.predicted.str(), io::format_double(s.lv),
                         std::to_string(s.rank), std::to_string(s.lr), s.grade});
  }
  return out;
}

std::string metrics_markdown(const MetricsReport& report, const metrics::GradeScale& scale, double alpha) {
  const MetricsTable& table = report.table;
  std::string out = "## Metrics by group\n\n| Group | n |";
  for (const std::string& c : table.columns) out += " " + c + " |";
  out += "\n|---|---:|";
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += "---:|";
  out += "\n";
  for (const auto& row : table.rows) {
    out += "| " + row.label + " | " + std::to_string(row.participants) + " |";
    for (std::size_t c = 0; c < row.cells.size(); ++c) {
      const bool lr_like = table.columns[c].rfind("lr_", 0) == 0 || table.columns[c].rfind("ar_", 0) == 0;
      std::string cell = fixed(row.cells[c], lr_like ? 1 : 3);
      if (std::find(row.best_in.begin(), row.best_in.end(), table.columns[c]) != row.best_in.end()) {
        cell = "**" + cell + "**";
      }
      out += " " + cell + " |";
    }
    out += "\n";
  }
  out += "\nBold marks the best value in each column (lowest loss, highest mRBO/AV).\n";

  if (!report.grades.empty()) {
    out += "\n## Grade distribution\n\n| Decision | Group |";
    for (const std::string& l : scale.labels()) out += " " + l + " |";
    out += "\n|---|---|";
    for (std::size_t i = 0; i < scale.labels().size(); ++i) out += "---:|";
    out += "\n";
    for (const GradeCounts& g : report.grades) {
      out += "| " + g.decision_id + " | " + g.group + " |";
      for (std::size_t c : g.counts) out += " " + std::to_string(c) + " |";
      out += "\n";
    }
  }
  if (!report.boxes.empty()) {
    out += "\n## Loss distributions\n\n| Group | Metric | n | min | q1 | median | q3 | max |\n";
    out += "|---|---|---:|---:|---:|---:|---:|---:|\n";
    for (const FiveNumber& b : report.boxes) {
      out += "| " + b.group + " | " + b.metric + " | " + std::to_string(b.n) + " | " + fixed(b.min, 3) + " | " +
             fixed(b.q1, 3) + " | " + fixed(b.median, 3) + " | " + fixed(b.q3, 3) + " | " + fixed(b.max, 3) + " |\n";
    }
  }
  if (report.comparison) {
    out += "\n## Treatment comparison (per-participant sum of LV)\n\n```\n" + stats_text(*report.comparison, alpha) +
           "```\n";
  }
  if (!report.notices.empty()) {
    out += "\n## Notices\n\n";
    for (const std::string& n : report.notices) out += "- " + n + "\n";
  }
  return out;
}

std::string votes_csv(const std::vector<VoteMatrix>& matrices) {
  std::string out;
  for (const VoteMatrix& vm : matrices) {
    std::vector<std::string> header = {"group", "decision_id", "row"};
    for (int c = 0; c < vm.cols; ++c) {
      std::string col = mnk::SquareId{c, 0}.to_string();
      header.push_back(col.substr(0, col.size() - 1));
    }
    if (out.empty()) out += io::csv_line(header);
    for (int r = 0; r < vm.rows; ++r) {
      std::vector<std::string> fields = {vm.group, vm.decision_id, std::to_string(r + 1)};
      for (std::size_t v : vm.counts[static_cast<std::size_t>(r)]) fields.push_back(std::to_string(v));
      out += io::csv_line(fields);
    }
  }
  return out;
}

std::string votes_svg(const VoteMatrix& vm) {
  // 9-step monotone blue ramp, lightest for zero votes.
  static constexpr const char* kBlues[9] = {"#f7fbff", "#deebf7", "#c6dbef", "#9ecae1", "#6baed6",
                                            "#4292c6", "#2171b5", "#08519c", "#08306b"};
  constexpr int cell = 40;
  constexpr int margin = 30;
  const int width = margin + vm.cols * cell + 10;
  const int height = margin + vm.rows * cell + 30;
  std::size_t peak = 0;
  for (const auto& row : vm.counts) {
    for (std::size_t v : row) peak = std::max(peak, v);
  }
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
                    std::to_string(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<title>" + xml_escape(vm.group + " " + vm.decision_id) + "</title>\n";
  // Row n is drawn at the top so the board reads like the game display.
  for (int r = 0; r < vm.rows; ++r) {
    const int y = margin + (vm.rows - 1 - r) * cell;
    out += "<text x=\"" + std::to_string(margin - 18) + "\" y=\"" + std::to_string(y + cell / 2 + 4) + "\">" +
           std::to_string(r + 1) + "</text>\n";
    for (int c = 0; c < vm.cols; ++c) {
      const std::size_t v = vm.counts[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      const std::size_t step = peak == 0 ? 0 : (v * 8 + peak - 1) / peak;
      const int x = margin + c * cell;
      out += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) + "\" width=\"" + std::to_string(cell) +
             "\" height=\"" + std::to_string(cell) + "\" fill=\"" + kBlues[step] + "\" stroke=\"#999\"/>\n";
      if (v > 0) {
        out += "<text x=\"" + std::to_string(x + cell / 2) + "\" y=\"" + std::to_string(y + cell / 2 + 4) +
               "\" text-anchor=\"middle\" fill=\"" + (step >= 5 ? "#fff" : "#000") + "\">" + std::to_string(v) +
               "</text>\n";
      }
    }
  }
  for (int c = 0; c < vm.cols; ++c) {
    std::string col = mnk::SquareId{c, 0}.to_string();
    out += "<text x=\"" + std::to_string(margin + c * cell + cell / 2) + "\" y=\"" +
           std::to_string(margin + vm.rows * cell + 16) + "\" text-anchor=\"middle\">" +
           col.substr(0, col.size() - 1) + "</text>\n";
  }
  if (vm.chosen) {
    const int x = margin + vm.chosen->col * cell;
    const int y = margin + (vm.rows - 1 - vm.chosen->row) * cell;
    out += "<rect x=\"" + std::to_string(x + 2) + "\" y=\"" + std::to_string(y + 2) + "\" width=\"" +
           std::to_string(cell - 4) + "\" height=\"" + std::to_string(cell - 4) +
           "\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"3\"><title>chosen</title></rect>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string box_svg(const std::vector<FiveNumber>& boxes, std::string_view metric) {
  std::vector<const FiveNumber*> sel;
  for (const FiveNumber& b : boxes) {
    if (b.metric == metric) sel.push_back(&b);
  }
  constexpr int plot_h = 240;
  constexpr int top = 20;
  constexpr int left = 60;
  constexpr int slot = 80;
  const int width = left + static_cast<int>(sel.size()) * slot + 20;
  double lo = 0.0, hi = 1.0;
  if (!sel.empty()) {
    lo = sel.front()->min;
    hi = sel.front()->max;
    for (const FiveNumber* b : sel) {
      lo = std::min(lo, b->min);
      hi = std::max(hi, b->max);
    }
  }
  if (hi <= lo) hi = lo + 1.0;
  auto y_of = [&](double v) { return top + plot_h - (v - lo) / (hi - lo) * plot_h; };
  auto num = [](double v) { return fixed(v, 2); };

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
                    std::to_string(top + plot_h + 40) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<title>" + xml_escape(std::string(metric)) + " by group</title>\n";
  out += "<line x1=\"" + std::to_string(left - 5) + "\" y1=\"" + num(y_of(lo)) + "\" x2=\"" + std::to_string(left - 5) +
         "\" y2=\"" + num(y_of(hi)) + "\" stroke=\"#000\"/>\n";
  out += "<text x=\"5\" y=\"" + num(y_of(hi) + 4) + "\">" + fixed(hi, 3) + "</text>\n";
  out += "<text x=\"5\" y=\"" + num(y_of(lo) + 4) + "\">" + fixed(lo, 3) + "</text>\n";
  for (std::size_t i = 0; i < sel.size(); ++i) {
    const FiveNumber& b = *sel[i];
    const int cx = left + static_cast<int>(i) * slot + slot / 2;
    const std::string x0 = std::to_string(cx - 20), x1 = std::to_string(cx + 20), xc = std::to_string(cx);
    out += "<line x1=\"" + xc + "\" y1=\"" + num(y_of(b.min)) + "\" x2=\"" + xc + "\" y2=\"" + num(y_of(b.max)) +
           "\" stroke=\"#333\"/>\n";
    out += "<rect x=\"" + x0 + "\" y=\"" + num(y_of(b.q3)) + "\" width=\"40\" height=\"" +
           num(y_of(b.q1) - y_of(b.q3)) + "\" fill=\"#9ecae1\" stroke=\"#333\"/>\n";
    out += "<line x1=\"" + x0 + "\" y1=\"" + num(y_of(b.median)) + "\" x2=\"" + x1 + "\" y2=\"" + num(y_of(b.median)) +
           "\" stroke=\"#08306b\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + xc + "\" y=\"" + std::to_string(top + plot_h + 20) + "\" text-anchor=\"middle\">" +
           xml_escape(b.group) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

namespace {

std::string df_text(const std::vector<double>& df) {
  std::string out;
  for (double d : df) out += (out.empty() ? "" : ", ") + io::format_double(d);
  return out;
}

std::string result_line(const stats::TestResult& r) {
  std::string line = std::string(stats::to_string(r.test));
  if (!r.label.empty()) line += " [" + r.label + "]";
  line += ": statistic = " + io::format_double(r.statistic);
  if (!r.df.empty()) line += ", df = (" + df_text(r.df) + ")";
  line += ", p = " + io::format_double(r.p_value);
  return line;
}

nlohmann::ordered_json result_json(const stats::TestResult& r) {
  nlohmann::ordered_json j = {{"test", std::string(stats::to_string(r.test))}};
  if (!r.label.empty()) j["group"] = r.label;
  j["statistic"] = std::isinf(r.statistic) ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(r.statistic);
  j["df"] = r.df;
  j["p_value"] = r.p_value;
  return j;
}

}  // namespace

std::string stats_text(const StatsReport& report, double alpha) {
  std::string out = "loss space: ";
  out += report.space == LossSpace::value ? "value" : "rank";
  out += " (per-participant sum)\nalpha: " + io::format_double(alpha) + "\n";
  for (const stats::SampleGroup& g : report.groups) {
    out += "group " + g.label + ": n = " + std::to_string(g.values.size()) +
           ", median = " + io::format_double(stats::median(g.values)) + "\n";
  }
  out += "gates:\n";
  for (const stats::TestResult& r : report.pipeline.gate_results) out += "  " + result_line(r) + "\n";
  out += "normality: ";
  out += report.pipeline.normality_ok ? "ok" : "rejected";
  out += ", equivariance: ";
  out += report.pipeline.equivariance_ok ? "ok" : "rejected";
  out += "\nselected test: " + std::string(stats::to_string(report.pipeline.test_used)) + "\n";
  out += "comparison: " + result_line(report.pipeline.comparison) + "\n";
  for (const std::string& w : report.pipeline.warnings) out += "warning: " + w + "\n";
  return out;
}

std::string stats_json(const StatsReport& report, double alpha) {
  nlohmann::ordered_json groups = nlohmann::ordered_json::array();
  for (const stats::SampleGroup& g : report.groups) groups.push_back({{"label", g.label}, {"values", g.values}});
  nlohmann::ordered_json gates = nlohmann::ordered_json::array();
  for (const stats::TestResult& r : report.pipeline.gate_results) gates.push_back(result_json(r));
  nlohmann::ordered_json doc = {{"space", report.space == LossSpace::value ? "value" : "rank"},
                                {"alpha", alpha},
                                {"groups", groups},
                                {"gate_results", gates},
                                {"normality_ok", report.pipeline.normality_ok},
                                {"equivariance_ok", report.pipeline.equivariance_ok},
                                {"test_used", std::string(stats::to_string(report.pipeline.test_used))},
                                {"comparison", result_json(report.pipeline.comparison)},
                                {"warnings", report.pipeline.warnings}};
  return doc.dump(2) + "\n";
}

}  // namespace pcredit::report
