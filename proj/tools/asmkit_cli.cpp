// Operator CLI: validate -> derive-links -> calibrate -> optimize ->
// baseline -> score -> report. Exit codes: 0 success, 1 validation or
// user error, 2 internal error.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "asmkit/baseline.hpp"
#include "asmkit/costs.hpp"
#include "asmkit/cyber_engine.hpp"
#include "asmkit/elo.hpp"
#include "asmkit/errors.hpp"
#include "asmkit/fixtures.hpp"
#include "asmkit/manifest.hpp"
#include "asmkit/mcts.hpp"
#include "asmkit/netjson.hpp"
#include "asmkit/subprocess_sm.hpp"

namespace {

using nlohmann::json;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw asmkit::ParseError("cannot open file", path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw asmkit::ParseError(std::string("invalid JSON: ") + e.what(), path);
  }
  return doc;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw asmkit::Error("cannot write file", path);
  out << text;
}

void write_json_file(const std::string& path, const json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> seed) {
  if (seed) return *seed;
  std::random_device rd;
  const std::uint64_t value =
      (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  std::cerr << "seed not given; using " << value << "\n";
  return value;
}

// Simulation-model selection. "builtin" wants the bundled feeder model and
// needs its configuration; "cmd:..." wraps an external process speaking the
// scenario/KPI JSON contract. ASM_SM_CMD overrides the default.
struct SmSetup {
  std::shared_ptr<const asmkit::Sm> sm;
  asmkit::Scenario base;
  double config_budget = 0.0;
};

SmSetup make_sm(const std::string& sm_arg, const std::string& sm_config_path) {
  std::string choice = sm_arg;
  if (choice.empty()) {
    const char* env = std::getenv("ASM_SM_CMD");
    choice = (env != nullptr && *env != '\0') ? std::string("cmd:") + env
                                              : std::string("builtin");
  }
  if (sm_config_path.empty()) {
    throw asmkit::PreconditionError(
        "--sm-config is required (operating profile lives there)");
  }
  const json config = read_json_file(sm_config_path);
  SmSetup setup;
  setup.base = asmkit::scenario_from_json(config.value("base", json::object()));
  setup.base.impacts.clear();
  setup.config_budget = config.value("budget", 0.0);
  if (choice == "builtin") {
    if (!config.contains("feeder")) {
      throw asmkit::PreconditionError(
          "builtin model needs a 'feeder' block in the SM config",
          sm_config_path);
    }
    setup.sm = std::make_shared<asmkit::FeederSm>(
        asmkit::feeder_config_from_json(config["feeder"]));
  } else if (choice.rfind("cmd:", 0) == 0) {
    std::vector<std::string> handlers =
        config.value("handlers", asmkit::feeder_supported_handlers());
    setup.sm = std::make_shared<asmkit::SubprocessSm>(choice.substr(4),
                                                      std::move(handlers));
  } else {
    throw asmkit::PreconditionError("unknown --sm '" + choice +
                                    "' (use builtin or cmd:<command>)");
  }
  return setup;
}

asmkit::Ci load_ci_arg(const std::vector<std::string>& paths) {
  if (paths.empty()) throw asmkit::PreconditionError("--ci is required");
  return asmkit::load_ci_files(paths);
}

json manifest_block(const std::string& command, const std::string& fingerprint,
                    const std::string& sm_id, json config, std::uint64_t seed,
                    const std::string& out, bool stamp) {
  asmkit::RunManifest manifest;
  manifest.command = command;
  manifest.ci_fingerprint = fingerprint;
  manifest.sm_id = sm_id;
  manifest.config = std::move(config);
  manifest.seed = seed;
  manifest.out_path = out;
  if (stamp) manifest.timestamp = asmkit::iso8601_now();
  return asmkit::manifest_to_json(manifest);
}

std::string narrative_verb(const json& step) {
  const std::string category = step.value("category", "");
  if (category == "access") {
    return step.value("entry_point", false)
               ? "gains entry through"
               : "moves laterally via";
  }
  if (category == "exploit") return "exploits";
  return "triggers the impact";
}

std::string render_narrative(const json& steps) {
  std::ostringstream out;
  int n = 1;
  for (const json& step : steps) {
    out << "  " << n++ << ". The adversary " << narrative_verb(step) << " '"
        << step.value("action_id", "") << "' (cost "
        << step.value("cost", 0.0) << ", spent "
        << step.value("cumulative_cost", 0.0) << ").\n";
  }
  return out.str();
}

// Minimal static ECDF rendering; x = KPI y of a sample, vertical marker at
// the optimized result.
std::string render_ecdf_svg(std::vector<double> ys, double y_star) {
  std::sort(ys.begin(), ys.end());
  const double w = 640, h = 420, ml = 70, mr = 20, mt = 20, mb = 50;
  double lo = ys.front(), hi = ys.back();
  lo = std::min(lo, y_star);
  hi = std::max(hi, y_star);
  if (hi - lo < 1e-12) hi = lo + 1e-12;
  const double span = hi - lo;
  lo -= 0.05 * span;
  hi += 0.05 * span;
  auto px = [&](double y) {
    return ml + (y - lo) / (hi - lo) * (w - ml - mr);
  };
  auto py = [&](double f) { return h - mb - f * (h - mt - mb); };
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr
      << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
  svg << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" "
         "points=\"";
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double f = static_cast<double>(i + 1) / ys.size();
    svg << px(ys[i]) << "," << py(f) << " ";
  }
  svg << "\"/>\n";
  svg << "<line x1=\"" << px(y_star) << "\" y1=\"" << mt << "\" x2=\""
      << px(y_star) << "\" y2=\"" << h - mb
      << "\" stroke=\"firebrick\" stroke-dasharray=\"4 3\"/>\n";
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" "
                "fill=\"firebrick\">y* = %.6f</text>\n",
                px(y_star) + 4, mt + 12.0, y_star);
  svg << buf;
  svg << "<text x=\"" << (ml + (w - ml - mr) / 2 - 60) << "\" y=\"" << h - 12
      << "\" font-size=\"13\">sampled KPI y (ECDF)</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double f = i / 4.0;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" "
                  "text-anchor=\"end\">%.2f</text>\n",
                  ml - 6, py(f) + 4, f);
    svg << buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" "
                  "text-anchor=\"middle\">%.4f</text>\n",
                  px(lo + f * (hi - lo)), h - mb + 16, lo + f * (hi - lo));
    svg << buf;
  }
  svg << "</svg>\n";
  return svg.str();
}

int cmd_validate(const std::vector<std::string>& paths,
                 const std::string& format) {
  // Parse structurally but report violations instead of throwing when the
  // layer is merely inconsistent.
  asmkit::ValidationReport report;
  bool parsed = true;
  try {
    std::vector<asmkit::CiDocument> documents;
    for (const std::string& path : paths) {
      documents.push_back({path, read_json_file(path)});
    }
    asmkit::Ci ci = asmkit::load_ci_relaxed(documents, &report);
    (void)ci;
  } catch (const asmkit::Error& e) {
    parsed = false;
    report.violations.push_back(
        {asmkit::Violation::Severity::kError, e.context(), e.what()});
  }
  if (format == "json") {
    json out = json::array();
    for (const auto& v : report.violations) {
      out.push_back({{"severity", v.severity == asmkit::Violation::Severity::kError
                                      ? "error"
                                      : "warning"},
                     {"entity", v.entity_id},
                     {"message", v.message}});
    }
    std::cout << out.dump(2) << "\n";
  } else {
    if (report.violations.empty()) {
      std::cout << "OK: no violations\n";
    }
    for (const auto& v : report.violations) {
      std::cout << (v.severity == asmkit::Violation::Severity::kError
                        ? "error"
                        : "warning")
                << " [" << v.entity_id << "] " << v.message << "\n";
    }
  }
  return (parsed && report.ok()) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attack-path discovery toolkit for cyber-physical models"};
  app.require_subcommand(1);

  std::string format = "text";
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  // validate
  auto* validate = app.add_subcommand(
      "validate", "Check a cybersecurity layer for structural violations");
  std::vector<std::string> validate_paths;
  validate->add_option("ci", validate_paths, "NetJSON documents")->required();

  // derive-links
  auto* derive = app.add_subcommand(
      "derive-links", "Fill per-link logical links from shortest paths");
  std::string derive_ci, derive_out;
  std::vector<std::string> derive_sources, derive_sinks, derive_source_types,
      derive_sink_types;
  bool derive_strict = false;
  derive->add_option("--ci", derive_ci)->required();
  derive->add_option("--out", derive_out)->required();
  derive->add_option("--source", derive_sources, "Source device id");
  derive->add_option("--sink", derive_sinks, "Sink device id");
  derive->add_option("--source-type", derive_source_types,
                     "Select sources by device type");
  derive->add_option("--sink-type", derive_sink_types,
                     "Select sinks by device type");
  derive->add_flag("--strict", derive_strict,
                   "Error out on shortest-path ambiguity");

  // calibrate
  auto* calibrate = app.add_subcommand(
      "calibrate", "Turn pairwise expert comparisons into action costs");
  std::string cal_comparisons, cal_out;
  std::vector<std::string> cal_ci;
  int cal_resamples = 1000;
  std::optional<std::uint64_t> cal_seed;
  double cal_ke = 400.0, cal_ku = 32.0, cal_initial = 1000.0;
  calibrate->add_option("--comparisons", cal_comparisons, "JSONL records")
      ->required();
  calibrate->add_option("--resamples", cal_resamples);
  calibrate->add_option("--seed", cal_seed);
  calibrate->add_option("--out", cal_out)->required();
  calibrate->add_option("--ci", cal_ci,
                        "CI whose action ids must all get a rating");
  calibrate->add_option("--k-e", cal_ke);
  calibrate->add_option("--k-u", cal_ku);
  calibrate->add_option("--initial-rating", cal_initial);

  // optimize
  auto* optimize =
      app.add_subcommand("optimize", "Search for a worst-case attack path");
  std::vector<std::string> opt_ci;
  std::string opt_sm, opt_sm_config, opt_out;
  double opt_budget = -1.0, opt_exploration = 1.41421356237309515;
  int opt_iterations = 2000;
  std::optional<std::uint64_t> opt_seed;
  std::optional<double> opt_time_limit;
  bool opt_stamp = false;
  optimize->add_option("--ci", opt_ci)->required();
  optimize->add_option("--sm", opt_sm, "builtin or cmd:<command>");
  optimize->add_option("--sm-config", opt_sm_config)->required();
  optimize->add_option("--budget", opt_budget);
  optimize->add_option("--iterations", opt_iterations);
  optimize->add_option("--exploration", opt_exploration);
  optimize->add_option("--seed", opt_seed);
  optimize->add_option("--time-limit", opt_time_limit,
                       "Seconds per decision step");
  optimize->add_flag("--stamp", opt_stamp,
                     "Record wall-clock data (breaks byte reproducibility)");
  optimize->add_option("--out", opt_out)->required();

  // baseline
  auto* baseline =
      app.add_subcommand("baseline", "Random-walk sample set for p_CDF");
  std::vector<std::string> base_ci;
  std::string base_sm, base_sm_config, base_out;
  double base_budget = -1.0;
  int base_count = 5000;
  std::optional<std::uint64_t> base_seed;
  baseline->add_option("--ci", base_ci)->required();
  baseline->add_option("--sm", base_sm);
  baseline->add_option("--sm-config", base_sm_config)->required();
  baseline->add_option("--budget", base_budget);
  baseline->add_option("--count", base_count);
  baseline->add_option("--seed", base_seed);
  baseline->add_option("--out", base_out)->required();

  // score
  auto* score =
      app.add_subcommand("score", "p_CDF of an optimized path vs a sample set");
  std::string score_path, score_samples;
  score->add_option("--path", score_path)->required();
  score->add_option("--samples", score_samples)->required();

  // report
  auto* report = app.add_subcommand("report", "Human-readable result report");
  std::string rep_path, rep_samples, rep_out, rep_runs;
  report->add_option("--path", rep_path);
  report->add_option("--samples", rep_samples);
  report->add_option("--out", rep_out, "Output directory")->required();
  report->add_option("--runs", rep_runs,
                     "Directory of optimize results for a summary table");

  // fixture
  auto* fixture =
      app.add_subcommand("fixture", "Write a bundled fixture to disk");
  std::string fix_name = "medium", fix_dir = ".";
  fixture->add_option("--name", fix_name)
      ->check(CLI::IsMember({"micro0", "micro1", "micro2", "small", "medium"}));
  fixture->add_option("--out", fix_dir, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(validate_paths, format);

    if (*derive) {
      json doc = read_json_file(derive_ci);
      std::set<std::string> sources(derive_sources.begin(),
                                    derive_sources.end());
      std::set<std::string> sinks(derive_sinks.begin(), derive_sinks.end());
      for (const json& node : doc.value("nodes", json::array())) {
        const std::string type =
            node.value("properties", json::object()).value("type", "");
        const std::string id = node.value("id", "");
        if (std::count(derive_source_types.begin(), derive_source_types.end(),
                       type) > 0) {
          sources.insert(id);
        }
        if (std::count(derive_sink_types.begin(), derive_sink_types.end(),
                       type) > 0) {
          sinks.insert(id);
        }
      }
      if (sources.empty() || sinks.empty()) {
        throw asmkit::PreconditionError(
            "derive-links needs at least one source and one sink");
      }
      asmkit::DeriveOptions options;
      options.strict = derive_strict;
      asmkit::derive_logical_links_in_document(
          doc, {sources.begin(), sources.end()}, {sinks.begin(), sinks.end()},
          options);
      doc["x_asm_manifest"] = manifest_block(
          "derive-links", "", "",
          json{{"strict", derive_strict},
               {"sources", json(sources)},
               {"sinks", json(sinks)}},
          0, derive_out, false);
      write_json_file(derive_out, doc);
      std::cout << "wrote " << derive_out << "\n";
      return 0;
    }

    if (*calibrate) {
      const std::uint64_t seed = resolve_seed(cal_seed);
      asmkit::RatingConfig config;
      config.k_e = cal_ke;
      config.k_u = cal_ku;
      config.initial_rating = cal_initial;
      config.bootstrap_resamples = cal_resamples;
      config.rng_seed = seed;
      std::vector<std::string> known;
      std::string fingerprint;
      if (!cal_ci.empty()) {
        asmkit::Ci ci = load_ci_arg(cal_ci);
        known = ci.action_ids();
        fingerprint = asmkit::ci_fingerprint(ci);
      }
      auto comparisons = asmkit::load_comparisons(cal_comparisons);
      auto result = asmkit::bootstrap_ratings(comparisons, config, known);
      json out = asmkit::export_cost_map(result);
      out["manifest"] = manifest_block(
          "calibrate", fingerprint, "",
          json{{"resamples", cal_resamples},
               {"k_e", cal_ke},
               {"k_u", cal_ku},
               {"initial_rating", cal_initial},
               {"comparisons", cal_comparisons}},
          seed, cal_out, false);
      write_json_file(cal_out, out);
      if (!result.unseen.empty()) {
        std::cerr << result.unseen.size()
                  << " action(s) had no evidence and keep the initial rating\n";
      }
      std::cout << "wrote " << cal_out << "\n";
      return 0;
    }

    if (*optimize) {
      const std::uint64_t seed = resolve_seed(opt_seed);
      asmkit::Ci ci = load_ci_arg(opt_ci);
      SmSetup setup = make_sm(opt_sm, opt_sm_config);
      const double budget =
          opt_budget >= 0.0 ? opt_budget : setup.config_budget;
      asmkit::SearchConfig config;
      config.iterations = opt_iterations;
      config.exploration = opt_exploration;
      config.budget = budget;
      config.rng_seed = seed;
      config.time_limit_seconds = opt_time_limit;
      const auto t0 = std::chrono::steady_clock::now();
      asmkit::AttackPath path =
          asmkit::search(ci, *setup.sm, setup.base, config);
      const double duration =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();

      json out = asmkit::attack_path_to_json(path);
      for (json& step : out["steps"]) {
        const asmkit::ActionSpec* action =
            ci.find_action(step["action_id"].get<std::string>());
        step["entry_point"] = action != nullptr && action->entry_point;
      }
      asmkit::ScenarioEvaluator evaluator(ci, *setup.sm, setup.base);
      std::vector<std::size_t> log;
      for (const asmkit::AttackStep& step : path.steps) {
        log.push_back(*ci.action_index(step.action_id));
      }
      out["kpi"] = asmkit::kpi_to_json(evaluator.evaluate_full(log));
      const asmkit::BudgetBreakdown breakdown =
          asmkit::budget_breakdown(path, ci);
      out["budget_breakdown"] = {{"access_entry", breakdown.access_entry},
                                 {"access_lateral", breakdown.access_lateral},
                                 {"exploit", breakdown.exploit},
                                 {"impact", breakdown.impact}};
      out["budget"] = budget;
      if (opt_stamp) out["duration_seconds"] = duration;
      out["manifest"] = manifest_block(
          "optimize", asmkit::ci_fingerprint(ci), setup.sm->id(),
          json{{"iterations", opt_iterations},
               {"exploration", opt_exploration},
               {"budget", budget}},
          seed, opt_out, opt_stamp);
      write_json_file(opt_out, out);
      std::cout << "y = " << path.y << " (baseline " << path.baseline_y
                << "), wrote " << opt_out << "\n";
      if (path.empty_flagged) {
        std::cerr << "no affordable entry point under budget " << budget
                  << "; empty path flagged\n";
      }
      return 0;
    }

    if (*baseline) {
      const std::uint64_t seed = resolve_seed(base_seed);
      asmkit::Ci ci = load_ci_arg(base_ci);
      SmSetup setup = make_sm(base_sm, base_sm_config);
      const double budget =
          base_budget >= 0.0 ? base_budget : setup.config_budget;
      asmkit::SampleSet set = asmkit::sample_random(
          ci, *setup.sm, setup.base, budget, base_count, seed);
      set.ci_fingerprint = asmkit::ci_fingerprint(ci);
      json out = asmkit::sample_set_to_json(set);
      out["manifest"] = manifest_block(
          "baseline", set.ci_fingerprint, setup.sm->id(),
          json{{"count", base_count}, {"budget", budget}}, seed, base_out,
          false);
      write_json_file(base_out, out);
      std::cout << "wrote " << set.samples.size() << " samples to " << base_out
                << (set.shortfall ? " (feasible space exhausted)" : "") << "\n";
      return 0;
    }

    if (*score) {
      const json path_doc = read_json_file(score_path);
      const json samples_doc = read_json_file(score_samples);
      const std::string fp_path =
          path_doc.value("manifest", json::object()).value("ci_fingerprint", "");
      asmkit::SampleSet set = asmkit::sample_set_from_json(samples_doc);
      if (!fp_path.empty() && !set.ci_fingerprint.empty() &&
          fp_path != set.ci_fingerprint) {
        throw asmkit::PreconditionError(
            "path and samples were produced from different CIs");
      }
      const double y_star = path_doc.at("y").get<double>();
      asmkit::PCdfResult result = asmkit::p_cdf(set, y_star);
      if (format == "json") {
        std::cout << json{{"p_cdf", result.value},
                          {"wilson_low", result.wilson_low},
                          {"wilson_high", result.wilson_high},
                          {"samples", result.sample_count},
                          {"y", y_star}}
                         .dump(2)
                  << "\n";
      } else {
        std::printf("p_CDF = %.6f (95%% CI [%.6f, %.6f], n=%zu, y*=%.9f)\n",
                    result.value, result.wilson_low, result.wilson_high,
                    result.sample_count, y_star);
      }
      return 0;
    }

    if (*report) {
      namespace fs = std::filesystem;
      fs::create_directories(rep_out);
      json doc;
      doc["tool_version"] = asmkit::kToolVersion;

      if (!rep_runs.empty()) {
        // Multi-run summary table: one row per optimize artifact.
        if (rep_samples.empty()) {
          throw asmkit::PreconditionError(
              "--runs needs --samples to score each run");
        }
        asmkit::SampleSet set =
            asmkit::sample_set_from_json(read_json_file(rep_samples));
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(rep_runs)) {
          if (entry.path().extension() == ".json") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        json rows = json::array();
        std::ostringstream table;
        table << "run                            iterations   duration_s   "
                 "y            p_CDF\n";
        for (const fs::path& file : files) {
          const json run = read_json_file(file.string());
          const json manifest = run.value("manifest", json::object());
          if (manifest.value("command", "") != "optimize") continue;
          if (!set.ci_fingerprint.empty() &&
              manifest.value("ci_fingerprint", "") != set.ci_fingerprint) {
            throw asmkit::PreconditionError(
                "run produced from a different CI than the samples",
                file.string());
          }
          const double y_star = run.at("y").get<double>();
          const auto pc = asmkit::p_cdf(set, y_star);
          json row = {{"run", file.filename().string()},
                      {"iterations", manifest.value("config", json::object())
                                         .value("iterations", 0)},
                      {"y", y_star},
                      {"p_cdf", pc.value}};
          char line[256];
          if (run.contains("duration_seconds")) {
            row["duration_seconds"] = run["duration_seconds"];
            std::snprintf(line, sizeof(line),
                          "%-30s %-12d %-12.2f %-12.6f %.6f\n",
                          file.filename().string().c_str(),
                          row["iterations"].get<int>(),
                          run["duration_seconds"].get<double>(), y_star,
                          pc.value);
          } else {
            std::snprintf(line, sizeof(line),
                          "%-30s %-12d %-12s %-12.6f %.6f\n",
                          file.filename().string().c_str(),
                          row["iterations"].get<int>(), "n/a", y_star,
                          pc.value);
          }
          table << line;
          rows.push_back(std::move(row));
        }
        doc["runs"] = rows;
        write_json_file((fs::path(rep_out) / "summary.json").string(), doc);
        write_text_file((fs::path(rep_out) / "summary.txt").string(),
                        table.str());
        std::cout << table.str();
        return 0;
      }

      if (rep_path.empty()) {
        throw asmkit::PreconditionError("report needs --path (or --runs)");
      }
      const json path_doc = read_json_file(rep_path);
      if (!path_doc.contains("manifest")) {
        throw asmkit::PreconditionError(
            "input was not produced by this tool (no manifest)", rep_path);
      }
      doc["path"] = path_doc;
      std::ostringstream text;
      text << "Attack path report\n==================\n\n";
      text << "KPI y = " << path_doc.at("y").get<double>() << " (no-attack "
           << path_doc.value("baseline_y", 0.0) << ")\n";
      text << "Total effort spent: " << path_doc.value("total_cost", 0.0)
           << " of budget " << path_doc.value("budget", 0.0) << "\n\n";
      text << "Sequence\n--------\n"
           << render_narrative(path_doc.value("steps", json::array()));
      if (path_doc.contains("budget_breakdown")) {
        const json& b = path_doc["budget_breakdown"];
        text << "\nBudget breakdown\n----------------\n";
        text << "  entry access:    " << b.value("access_entry", 0.0) << "\n";
        text << "  lateral access:  " << b.value("access_lateral", 0.0) << "\n";
        text << "  exploits:        " << b.value("exploit", 0.0) << "\n";
        text << "  impacts:         " << b.value("impact", 0.0) << "\n";
      }
      if (path_doc.contains("kpi")) {
        const json& kpi = path_doc["kpi"];
        doc["kpi_trace"] = kpi;
        const auto& vispf = kpi.value("vispf_series", std::vector<double>{});
        if (!vispf.empty()) {
          const auto [mn, mx] =
              std::minmax_element(vispf.begin(), vispf.end());
          text << "\nPer-step KPI trace: " << vispf.size()
               << " steps, VISPF range [" << *mn << ", " << *mx << "]\n";
        }
      }
      if (!rep_samples.empty()) {
        asmkit::SampleSet set =
            asmkit::sample_set_from_json(read_json_file(rep_samples));
        const std::string fp =
            path_doc["manifest"].value("ci_fingerprint", "");
        if (!fp.empty() && !set.ci_fingerprint.empty() &&
            fp != set.ci_fingerprint) {
          throw asmkit::PreconditionError(
              "path and samples were produced from different CIs");
        }
        const double y_star = path_doc.at("y").get<double>();
        const auto pc = asmkit::p_cdf(set, y_star);
        doc["p_cdf"] = {{"value", pc.value},
                        {"wilson_low", pc.wilson_low},
                        {"wilson_high", pc.wilson_high},
                        {"samples", pc.sample_count}};
        text << "\np_CDF = " << pc.value << " (95% CI [" << pc.wilson_low
             << ", " << pc.wilson_high << "], n = " << pc.sample_count
             << ")\n";
        std::vector<double> ys;
        json series = json::array();
        for (const auto& sample : set.samples) {
          ys.push_back(sample.y);
          series.push_back(sample.y);
        }
        std::sort(series.begin(), series.end());
        doc["ecdf_series"] = std::move(series);
        write_text_file((fs::path(rep_out) / "ecdf.svg").string(),
                        render_ecdf_svg(ys, y_star));
        text << "ECDF written to ecdf.svg\n";
      } else {
        std::cerr << "warning: no --samples given, skipping p_CDF\n";
      }
      write_json_file((fs::path(rep_out) / "report.json").string(), doc);
      write_text_file((fs::path(rep_out) / "report.txt").string(), text.str());
      std::cout << "report written to " << rep_out << "\n";
      return 0;
    }

    if (*fixture) {
      namespace fs = std::filesystem;
      fs::create_directories(fix_dir);
      asmkit::Fixture fx = asmkit::make_fixture(fix_name);
      const fs::path ci_path = fs::path(fix_dir) / (fix_name + ".netjson");
      const fs::path sm_path = fs::path(fix_dir) / (fix_name + ".sm.json");
      write_json_file(ci_path.string(), asmkit::fixture_netjson(fx));
      json sm_config;
      sm_config["feeder"] = asmkit::feeder_config_to_json(fx.sm->config());
      sm_config["base"] = asmkit::scenario_to_json(fx.base);
      sm_config["budget"] = fx.budget;
      write_json_file(sm_path.string(), sm_config);
      std::cout << "wrote " << ci_path.string() << " and " << sm_path.string()
                << "\n";
      return 0;
    }
  } catch (const asmkit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
