// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <functional>
#include <iostream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "curate/cli/config.hpp"
#include "curate/code/distribution.hpp"
#include "curate/core/manifest.hpp"
#include "curate/math/plan.hpp"
#include "curate/merge/merge.hpp"
#include "curate/quality/agreement.hpp"
#include "curate/quality/http_judge.hpp"
#include "curate/style/report.hpp"

#ifndef CURATE_VERSION
#define CURATE_VERSION "0.1.0"
#endif
#ifndef CURATE_BUILD_ID
#define CURATE_BUILD_ID "dev"
#endif

namespace curate::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

inline std::string version_string() { return std::string("curate ") + CURATE_VERSION + " (" + CURATE_BUILD_ID + ")"; }

namespace detail {

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::string config_path;
  unsigned jobs = 0;  // 0: take from config
  std::uint64_t seed = 0;
  bool seed_set = false;

  PipelineConfig config() const {
    PipelineConfig c = config_path.empty() ? PipelineConfig{} : load_config(config_path);
    if (jobs) c.jobs = jobs;
    if (seed_set) c.seed = seed;
    return c;
  }
  void warn(const std::vector<std::string>& ws) const {
    for (const auto& w : ws) err << "warning: " << w << '\n';
  }
  void info(const std::string& s) const { err << s << '\n'; }
};

inline void write_single(const std::string& path, const Record& r) { write_file(path, dump_record(r) + "\n"); }

inline std::string assistant_text(const Sample& s) {
  return s.first_with_role(Role::assistant) ? s.joined(Role::assistant) : s.concatenated_text();
}

inline std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, ',');)
    if (!text::is_blank(part)) out.emplace_back(text::trim(part));
  return out;
}

inline Record style_stats_record(const std::string& label, const std::vector<style::StyleStats>& stats) {
  style::StyleAggregate agg;
  for (const auto& s : stats) agg.add(s);
  Record r = Record::object();
  r["kind"] = "stats";
  r["label"] = label;
  r["documents"] = agg.count;
  r["unclosed_fences"] = agg.unclosed_fences;
  auto m = agg.means();
  for (std::size_t i = 0; i < style::kColumns.size(); ++i) r[std::string(style::kColumns[i])] = m[i];
  return r;
}

inline std::vector<style::StyleStats> analyze_all(const std::vector<Sample>& samples, unsigned jobs) {
  std::vector<style::StyleStats> out(samples.size());
  parallel_for(samples.size(), jobs, [&](std::size_t i) { out[i] = style::analyze(assistant_text(samples[i])); });
  return out;
}

}  // namespace detail

/// Entry point without the program name. Data goes to files; diagnostics to
/// `err`; `out` only carries --help and --version text.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Training-data curation toolkit", "curate"};
  app.require_subcommand(0, 1);
  bool show_version = false;
  app.add_flag("--version", show_version, "Print the build identifier");

  detail::Context ctx{out, err, {}, 0, 0, false};
  std::function<void()> action;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", ctx.config_path, "Pipeline config file (JSON)");
    sub->add_option("--jobs", ctx.jobs, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", ctx.seed, "Seed for every sampled choice")->each([&](const std::string&) { ctx.seed_set = true; });
  };

  // code
  std::string in, outp, drops, review, report, table, targets, compare, mixture, mode, judge_opt, critical;
  std::string a_path, b_path, ratio, dump, weights_csv, axes_csv, domain_key;
  std::vector<std::string> chain;
  std::size_t capacity = 0, batch = 0, batches = 0;
  bool reuse = false;

  {
    auto* s = app.add_subcommand("code", "Run the staged code refinement pipeline");
    common(s);
    s->add_option("--in", in, "Input manifest")->required();
    s->add_option("--out", outp, "Output manifest")->required();
    s->add_option("--drops", drops, "Drop log (records)");
    s->add_option("--review", review, "Samples routed to review (manifest)");
    s->add_option("--report", report, "Distribution report (record)");
    s->add_option("--table", table, "Rendered distribution table (text)");
    s->callback([&] {
      action = [&] {
        auto cfg = ctx.config();
        code::CodePipelineConfig pc;
        for (const auto& [alias, lang] : cfg.code.aliases) pc.aliases.set(alias, lang);
        pc.thresholds = cfg.code.thresholds;
        pc.tags_key = cfg.code.tags_key;
        pc.jobs = cfg.jobs;
        auto samples = load_manifest(in);
        std::size_t n = samples.size();
        auto res = code::run_code_pipeline(std::move(samples), pc);
        ctx.warn(res.warnings);
        write_manifest(res.samples, outp);
        if (!drops.empty()) write_records(drops, res.drops.to_records());
        if (!review.empty()) write_manifest(res.review, review);
        auto dist = distribution_report(res.samples, cfg.code.report_axes, cfg.code.dominance_threshold);
        if (!report.empty()) detail::write_single(report, dist.to_record());
        if (!table.empty()) write_file(table, render_distribution(dist));
        ctx.info("code: " + std::to_string(n) + " in, " + std::to_string(res.samples.size()) + " out, " +
                 std::to_string(res.drops.distinct_ids()) + " dropped (" + std::to_string(res.review.size()) +
                 " to review)");
      };
    });
  }
  {
    auto* s = app.add_subcommand("tag-math", "Tag math samples with domain, conceptual and reasoning levels");
    common(s);
    s->add_option("--in", in)->required();
    s->add_option("--out", outp)->required();
    s->callback([&] {
      action = [&] {
        auto cfg = ctx.config();
        auto samples = load_manifest(in);
        std::vector<Meta> tags(samples.size());
        parallel_for(samples.size(), cfg.jobs, [&](std::size_t i) { tags[i] = math::to_meta(math::tag_math(samples[i])); });
        for (std::size_t i = 0; i < samples.size(); ++i) samples[i].meta[std::string(math::kMathMetaKey)] = tags[i];
        write_manifest(samples, outp);
        ctx.info("tag-math: tagged " + std::to_string(samples.size()) + " samples");
      };
    });
  }
  {
    auto* s = app.add_subcommand("math-grid", "Count tagged math samples per grid cell");
    common(s);
    s->add_option("--in", in)->required();
    s->add_option("--out", outp, "Grid report (record)")->required();
    s->callback([&] {
      action = [&] {
        auto grid = math::grid_distribution(load_manifest(in));
        detail::write_single(outp, grid.to_record());
        ctx.info("math-grid: " + std::to_string(grid.total()) + " samples");
      };
    });
  }
  {
    auto* s = app.add_subcommand("math-plan", "Plan gap-filling synthesis quotas");
    common(s);
    s->add_option("--in", in)->required();
    s->add_option("--targets", targets, "Target spec file (JSON)");
    s->add_option("--out", outp, "Plan (records)")->required();
    s->callback([&] {
      action = [&] {
        auto cfg = ctx.config();
        Record spec_json;
        if (!targets.empty()) spec_json = read_json_file(targets);
        else if (cfg.math_targets) spec_json = *cfg.math_targets;
        else throw Error(ErrorCode::invalid_argument, "math-plan needs --targets or config math.targets");
        auto spec = math::parse_target_spec(spec_json);
        auto grid = math::grid_distribution(load_manifest(in));
        auto plan = math::plan_gap_fill(grid, spec);
        write_records(outp, math::plan_to_records(plan));
        ctx.info("math-plan: " + std::to_string(plan.items.size()) + " cells, " + std::to_string(plan.total_quota()) +
                 " samples to synthesize");
      };
    });
  }
  {
    auto* s = app.add_subcommand("qgate", "Judge, triage and filter samples");
    common(s);
    s->add_option("--in", in)->required();
    s->add_option("--out", outp, "Pass and Review samples (manifest)")->required();
    s->add_option("--drops", drops, "Rejected samples (drop log)");
    s->add_option("--review", review, "Ids routed to Review (records)");
    s->add_option("--report", report, "Label counts (record)");
    s->add_option("--judge", judge_opt, "rule, or an http:// endpoint");
    s->add_option("--critical", critical, "Critical categories (JSON array or one per line)");
    s->callback([&] {
      action = [&] {
        auto cfg = ctx.config();
        std::string which = judge_opt.empty() ? cfg.quality.judge : judge_opt;
        quality::Judge judge;
        if (which == "rule") judge = quality::rule_judge();
        else judge = quality::http_judge({which, cfg.quality.timeout_seconds});
        auto crit = critical.empty() ? cfg.quality.critical : quality::load_critical_set(critical);
        auto samples = load_manifest(in);
        auto res = quality::run_quality_gate(samples, judge, crit, cfg.jobs);
        ctx.warn(res.warnings);
        write_manifest(res.samples, outp);
        if (!drops.empty()) write_records(drops, res.drops.to_records());
        if (!review.empty()) {
          std::vector<Record> ids;
          for (const auto& id : res.review) ids.push_back({{"id", id}});
          write_records(review, ids);
        }
        Record rep = {{"samples", samples.size()},
                      {"Pass", res.pass},
                      {"Review", res.review.size()},
                      {"Reject", res.drops.size()}};
        if (!report.empty()) detail::write_single(report, rep);
        ctx.info("qgate: " + rep.dump());
      };
    });
  }
  {
    auto* s = app.add_subcommand("style", "Response structure statistics");
    common(s);
    s->add_option("--in", in, "Manifest (before)")->required();
    s->add_option("--compare", compare, "Manifest (after)");
    s->add_option("--out", outp, "Report (records)")->required();
    s->add_option("--table", table, "Rendered delta table (text)");
    s->callback([&] {
      action = [&] {
        auto cfg = ctx.config();
        auto before = load_manifest(in);
        if (before.empty()) throw Error(ErrorCode::invalid_argument, "style needs at least one sample in '" + in + "'");
        auto sb = detail::analyze_all(before, cfg.jobs);
        std::vector<Record> recs = {detail::style_stats_record("before", sb)};
        Record hb = style::histogram_to_record(style::bullet_histogram(sb));
        hb["kind"] = "bullet_histogram";
        hb["label"] = "before";
        recs.push_back(hb);
        if (!compare.empty()) {
          auto after = load_manifest(compare);
          if (after.empty()) throw Error(ErrorCode::invalid_argument, "style needs at least one sample in '" + compare + "'");
          auto sa = detail::analyze_all(after, cfg.jobs);
          recs.push_back(detail::style_stats_record("after", sa));
          Record ha = style::histogram_to_record(style::bullet_histogram(sa));
          ha["kind"] = "bullet_histogram";
          ha["label"] = "after";
          recs.push_back(ha);
          auto delta = style::delta_report(style::aggregate(sb), style::aggregate(sa));
          recs.push_back({{"kind", "delta"}, {"columns", style::delta_to_record(delta)}});
          if (!table.empty()) write_file(table, style::render_delta(delta));
        } else if (!table.empty()) {
          write_file(table, style::render_stats(style::aggregate(sb), sb.size()));
        }
        write_records(outp, recs);
      };
    });
  }
  {
    auto* s = app.add_subcommand("pack", "Best-fit-decreasing sequence packing");
    common(s);
    s->add_option("--in", in)->required();
    s->add_option("--out", outp, "Packed sequences (records)")->required();
    s->add_option("--capacity", capacity, "Tokens per sequence")->check(CLI::PositiveNumber);
    s->add_option("--report", report, "Pack report (record)");
    s->callback([&] {
      action = [&] {
        auto cfg = ctx.config();
        auto res = pack::pack(load_manifest(in), capacity ? capacity : cfg.capacity);
        write_records(outp, pack::sequences_to_records(res));
        auto rep = pack::pack_report(res);
        if (!report.empty()) detail::write_single(report, rep);
        ctx.info("pack: " + rep.dump());
      };
    });
  }
  {
    auto* s = app.add_subcommand("blend", "Compose batches to a domain mixture");
    common(s);
    s->add_option("--in", in)->required();
    s->add_option("--mixture", mixture, "Mixture file: {domain: weight}");
    s->add_option("--batch", batch, "Batch size")->check(CLI::PositiveNumber);
    s->add_option("--batches", batches, "Stop after this many batches");
    s->add_flag("--reuse", reuse, "Reshuffle exhausted pools instead of ending");
    s->add_option("--domain-key", domain_key, "Meta key holding the domain");
    s->add_option("--out", outp, "Batches (records)")->required();
    s->add_option("--report", report, "Blend report (record)");
    s->callback([&] {
      action = [&] {
        auto cfg = ctx.config();
        pack::MixtureSpec mix;
        if (!mixture.empty()) mix = pack::parse_mixture(read_json_file(mixture));
        else if (cfg.blend.mixture) mix = *cfg.blend.mixture;
        else throw Error(ErrorCode::invalid_argument, "blend needs --mixture or config blend.mixture");
        bool re = reuse || cfg.blend.reuse;
        std::optional<std::size_t> limit = batches ? std::optional<std::size_t>(batches) : cfg.blend.batches;
        if (re && !limit) throw Error(ErrorCode::invalid_argument, "--reuse needs --batches, the stream never ends otherwise");
        auto samples = load_manifest(in);
        pack::BatchBlender blender(pack::pools_by(samples, domain_key.empty() ? cfg.blend.domain_key : domain_key), mix,
                                   batch ? batch : cfg.blend.batch_size, cfg.seed, re);
        std::vector<Record> recs;
        while (!limit || recs.size() < *limit) {
          auto b = blender.next();
          if (!b) break;
          recs.push_back(pack::batch_to_record(*b));
        }
        write_records(outp, recs);
        auto rep = pack::blend_report_to_record(blender.report());
        if (!report.empty()) detail::write_single(report, rep);
        ctx.info("blend: " + rep.dump());
      };
    });
  }
  {
    auto* s = app.add_subcommand("difficulty", "Score code problems on the 1.0-5.0 scale");
    common(s);
    s->add_option("--in", in)->required();
    s->add_option("--out", outp)->required();
    s->callback([&] {
      action = [&] {
        auto cfg = ctx.config();
        auto samples = load_manifest(in);
        for (auto& smp : samples) {
          pack::DifficultyScore d;
          try {
            d = pack::score_code_difficulty(pack::difficulty_inputs(smp), cfg.difficulty_weights);
          } catch (const Error& e) {
            throw Error(e.code(), "sample '" + smp.id + "': " + e.what());
          }
          Meta f = Meta::object();
          for (std::size_t i = 0; i < pack::kFactors.size(); ++i) f[std::string(to_string(pack::kFactors[i]))] = d.sub_scores[i];
          smp.meta[std::string(pack::kFactorsMetaKey)] = f;
          smp.meta[std::string(pack::kScoreMetaKey)] = d.score;
          smp.meta["difficulty_bin"] = std::string(to_string(pack::bin_difficulty(d.score)));
        }
        write_manifest(samples, outp);
      };
    });
  }
  {
    auto* s = app.add_subcommand("select", "Difficulty-aware curriculum selection");
    common(s);
    s->add_option("--in", in)->required();
    s->add_option("--targets", targets, "Bin targets: {bin: count}");
    s->add_option("--out", outp)->required();
    s->add_option("--report", report, "Selection report (record)");
    s->callback([&] {
      action = [&] {
        auto cfg = ctx.config();
        pack::BinTargets t;
        if (!targets.empty()) t = pack::parse_bin_targets(read_json_file(targets));
        else if (cfg.select_targets) t = *cfg.select_targets;
        else throw Error(ErrorCode::invalid_argument, "select needs --targets or config select.targets");
        auto res = pack::select_curriculum(load_manifest(in), t, cfg.seed);
        write_manifest(res.samples, outp);
        auto rep = pack::curriculum_report(res);
        if (!report.empty()) detail::write_single(report, rep);
        for (std::size_t b = 0; b < pack::kBins.size(); ++b)
          if (res.bins[b].shortfall)
            ctx.warn({"bin " + std::string(to_string(pack::kBins[b])) + " short by " + std::to_string(res.bins[b].shortfall)});
      };
    });
  }
  {
    auto* s = app.add_subcommand("merge", "Linear checkpoint merging");
    common(s);
    s->add_option("--a", a_path, "First checkpoint");
    s->add_option("--b", b_path, "Second checkpoint");
    s->add_option("--ratio", ratio, "Ratio a:b, e.g. 8:2");
    s->add_option("--chain", chain, "Checkpoints for a weighted chain merge");
    s->add_option("--weights", weights_csv, "Comma-separated chain weights");
    s->add_option("--out", outp)->required();
    s->add_option("--dump", dump, "Debug dump of the result (records)");
    s->callback([&] {
      action = [&] {
        auto cfg = ctx.config();
        merge::Checkpoint result;
        if (!chain.empty()) {
          if (!a_path.empty() || !b_path.empty() || !ratio.empty())
            throw Error(ErrorCode::invalid_argument, "use either --a/--b/--ratio or --chain/--weights");
          std::vector<merge::Checkpoint> cks;
          for (const auto& p : chain) cks.push_back(merge::load_checkpoint(p));
          std::vector<double> w;
          for (const auto& x : detail::split_csv(weights_csv)) {
            try {
              std::size_t used = 0;
              w.push_back(std::stod(x, &used));
              if (used != x.size()) throw std::invalid_argument(x);
            } catch (const std::logic_error&) {
              throw Error(ErrorCode::invalid_argument, "bad weight '" + x + "'");
            }
          }
          result = merge::merge_chain(cks, w, cfg.jobs);
        } else {
          if (a_path.empty() || b_path.empty() || ratio.empty())
            throw Error(ErrorCode::invalid_argument, "merge needs --a, --b and --ratio");
          auto r = merge::parse_ratio(ratio);
          result = merge::merge_linear(merge::load_checkpoint(a_path), merge::load_checkpoint(b_path), r, cfg.jobs);
        }
        merge::save_checkpoint(result, outp);
        if (!dump.empty()) write_records(dump, merge::checkpoint_to_records(result));
      };
    });
  }
  {
    auto* s = app.add_subcommand("reward", "Verifiable rewards for response records");
    common(s);
    s->add_option("--mode", mode, "code, choice or schema")->required()->check(CLI::IsMember({"code", "choice", "schema"}));
    s->add_option("--in", in, "Response records")->required();
    s->add_option("--out", outp, "Reward records")->required();
    s->callback([&] {
      action = [&] {
        auto cfg = ctx.config();
        std::vector<Record> outs;
        std::size_t line = 0;
        for (const auto& r : read_records(in)) {
          ++line;
          auto where = "'" + in + "' line " + std::to_string(line);
          if (!r.is_object() || !r.contains("response") || !r["response"].is_string())
            throw Error(ErrorCode::malformed_record, where + ": record needs a string 'response'");
          reward::RewardTask task;
          if (mode == "code") {
            reward::RunResult rr;
            bool have = r.contains("test_results") && r["test_results"].is_object();
            if (have) {
              rr.passed = r["test_results"].value("passed", std::size_t{0});
              rr.total = r["test_results"].value("total", std::size_t{0});
            }
            task = reward::CodeTask{[have, rr, where](const std::string&, const std::string&) {
              if (!have) throw Error(ErrorCode::runner_unavailable, where + ": no test_results to replay");
              return rr;
            }};
          } else if (mode == "choice") {
            if (!r.contains("gold") || !r["gold"].is_string())
              throw Error(ErrorCode::malformed_record, where + ": choice mode needs a string 'gold'");
            task = reward::ChoiceTask{r["gold"].get<std::string>(), cfg.reward.answer};
          } else {
            Record schema = r.contains("schema") ? r["schema"] : cfg.reward.schema.value_or(Record());
            if (schema.is_null()) throw Error(ErrorCode::malformed_record, where + ": schema mode needs a 'schema'");
            task = reward::SchemaTask{schema, cfg.reward.schema_mode};
          }
          auto o = reward::evaluate(r["response"].get<std::string>(), task, cfg.reward.penalty);
          Record rec = Record::object();
          if (r.contains("id")) rec["id"] = r["id"];
          Record outcome = reward::outcome_to_record(o);
          for (auto& [k, v] : outcome.items()) rec[k] = v;
          outs.push_back(std::move(rec));
        }
        write_records(outp, outs);
      };
    });
  }
  {
    auto* s = app.add_subcommand("report", "Distribution report over meta axes");
    common(s);
    s->add_option("--in", in)->required();
    s->add_option("--axes", axes_csv, "Comma-separated meta keys");
    s->add_option("--drops", drops, "Drop log to summarize by stage");
    s->add_option("--out", outp, "Report (records)")->required();
    s->add_option("--table", table, "Rendered table (text)");
    s->callback([&] {
      action = [&] {
        auto cfg = ctx.config();
        auto axes = axes_csv.empty() ? cfg.code.report_axes : detail::split_csv(axes_csv);
        auto dist = distribution_report(load_manifest(in), axes, cfg.code.dominance_threshold);
        std::vector<Record> recs = {dist.to_record()};
        if (!drops.empty()) {
          std::map<std::string, std::size_t> by_stage;
          for (const auto& d : read_records(drops)) by_stage[d.value("stage", std::string("?"))]++;
          Record r = {{"kind", "drops"}};
          for (const auto& [k, n] : by_stage) r[k] = n;
          recs.push_back(r);
        }
        write_records(outp, recs);
        if (!table.empty()) write_file(table, render_distribution(dist));
      };
    });
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitValidation;
  }
  if (show_version) {
    out << version_string() << '\n';
    return kExitOk;
  }
  if (!action) {
    err << "error: a subcommand is required\n\n" << app.help();
    return kExitValidation;
  }
  try {
    action();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.is_io() ? kExitIo : kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace curate::cli
