// SPDX-License-Identifier: Apache-2.0
// One PASS/FAIL line per acceptance criterion; exits non-zero if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "curate/cli/app.hpp"
#include "support/testing.hpp"

namespace {

using namespace curate;
using testing::Gen;

struct Check {
  bool ok = true;
  std::vector<std::string> notes;
  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (notes.size() < 8) notes.push_back(what);
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// --- 1 --------------------------------------------------------------------------

Check packing_efficiency() {
  Check c;
  auto t0 = std::chrono::steady_clock::now();
  Gen g(1);
  std::vector<pack::PackItem> items;
  for (int i = 0; i < 10000; ++i) {
    std::size_t len = g.coin(0.8) ? static_cast<std::size_t>(g.range(256, 4096)) : static_cast<std::size_t>(g.range(4096, 65536));
    items.push_back({"s" + std::to_string(i), len});
  }
  auto r = pack::pack_items(items, 65536);
  double secs = seconds_since(t0);
  c.expect(r.efficiency() >= 0.88, "efficiency " + fixed(r.efficiency(), 4) + " < 0.88");
  c.expect(secs < 5, "took " + fixed(secs, 2) + " s");
  c.notes.insert(c.notes.begin(), "efficiency " + fixed(r.efficiency(), 4) + " over " +
                                      std::to_string(r.sequences.size()) + " sequences, " + fixed(secs, 2) + " s");
  return c;
}

// --- 2 --------------------------------------------------------------------------

std::size_t brute_force_bins(const std::vector<std::size_t>& lengths, std::size_t cap) {
  std::size_t best = lengths.size();
  std::vector<std::size_t> bins;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (bins.size() >= best) return;
    if (i == lengths.size()) {
      best = bins.size();
      return;
    }
    // by index: the recursion grows bins
    for (std::size_t k = 0; k < bins.size(); ++k)
      if (bins[k] + lengths[i] <= cap) {
        bins[k] += lengths[i];
        go(i + 1);
        bins[k] -= lengths[i];
      }
    bins.push_back(lengths[i]);
    go(i + 1);
    bins.pop_back();
  };
  go(0);
  return best;
}

Check packing_oracle() {
  Check c;
  auto t0 = std::chrono::steady_clock::now();
  Gen g(2);
  for (int t = 0; t < 200; ++t) {
    std::size_t cap = 10 + g.index(200);
    std::vector<pack::PackItem> items;
    std::vector<std::size_t> lengths;
    for (std::size_t i = 0, n = 1 + g.index(6); i < n; ++i) {
      lengths.push_back(1 + g.index(cap));
      items.push_back({"i" + std::to_string(i), lengths.back()});
    }
    auto r = pack::pack_items(items, cap);
    std::size_t opt = brute_force_bins(lengths, cap);
    c.expect(r.sequences.size() <= opt + 1, "instance " + std::to_string(t) + ": BFD " +
                                                std::to_string(r.sequences.size()) + " vs optimum " + std::to_string(opt));
    std::multiset<std::string> seen;
    std::size_t total = 0;
    for (const auto& s : r.sequences) {
      std::size_t used = 0;
      for (const auto& it : s.items) used += it.length, seen.insert(it.id);
      c.expect(used == s.used && used <= cap && !s.items.empty(), "instance " + std::to_string(t) + ": bad sequence");
      total += used;
    }
    c.expect(seen.size() == items.size() && std::set<std::string>(seen.begin(), seen.end()).size() == items.size(),
             "instance " + std::to_string(t) + ": items not placed exactly once");
    c.expect(total == r.total_tokens, "instance " + std::to_string(t) + ": token total");
  }
  double secs = seconds_since(t0);
  c.expect(secs < 10, "took " + fixed(secs, 2) + " s");
  return c;
}

// --- 3 --------------------------------------------------------------------------

Check difficulty_tables() {
  Check c;
  using code::Difficulty;
  const std::vector<std::pair<Difficulty, std::vector<std::string>>> rows = {
      {Difficulty::Easy, {"Array", "String", "Hash Table", "Math", "Simulation"}},
      {Difficulty::Medium,
       {"Binary Search", "Sliding Window", "Greedy", "Heap", "Backtracking", "Topological Sort", "Union-Find",
        "Tree/Graph", "DP"}},
      {Difficulty::Hard,
       {"Suffix Array", "Aho--Corasick", "Min-Cost Max-Flow", "Heavy-Light Decomposition", "Li Chao Tree",
        "Convex Hull Trick", "Matrix Exponentiation", "Digit/Tree DP"}}};
  std::size_t n = 0;
  for (const auto& [want, tags] : rows)
    for (const auto& t : tags) {
      ++n;
      auto got = code::label_difficulty({t}).difficulty;
      c.expect(got == want, t + " -> " + std::string(code::to_string(got)));
    }
  using pack::DifficultyBin;
  const std::vector<std::pair<double, DifficultyBin>> bounds = {
      {1.0, DifficultyBin::VeryEasy},      {1.4999, DifficultyBin::VeryEasy}, {1.5, DifficultyBin::Easy},
      {2.4999, DifficultyBin::Easy},       {2.5, DifficultyBin::Medium},      {3.4999, DifficultyBin::Medium},
      {3.5, DifficultyBin::Difficult},     {4.4999, DifficultyBin::Difficult}, {4.5, DifficultyBin::VeryDifficult},
      {5.0, DifficultyBin::VeryDifficult}};
  for (const auto& [score, want] : bounds) {
    auto got = pack::bin_difficulty(score);
    c.expect(got == want, fixed(score, 4) + " -> " + std::string(pack::to_string(got)));
  }
  c.notes.insert(c.notes.begin(), std::to_string(n) + " category rows, " + std::to_string(bounds.size()) + " score boundaries");
  return c;
}

// --- 4 --------------------------------------------------------------------------

Check blending() {
  Check c;
  auto t0 = std::chrono::steady_clock::now();
  pack::MixtureSpec mix{{{"Math", 32}, {"Code", 28}, {"STEM", 21}, {"IF", 12}, {"SO", 12}}};
  auto norm = mix.normalized();
  std::map<std::string, std::vector<std::string>> pools;
  for (const auto& [d, w] : mix.weights)
    for (int i = 0; i < 1000; ++i) pools[d].push_back(d + "-" + std::to_string(i));
  pack::BatchBlender b(pools, mix, 128, 42, true);
  for (int k = 0; k < 2000; ++k) {
    auto batch = b.next();
    if (!batch) {
      c.expect(false, "stream ended at batch " + std::to_string(k));
      break;
    }
    std::size_t sum = 0;
    for (const auto& [d, q] : batch->quotas) sum += q;
    c.expect(sum == 128 && batch->ids.size() == 128, "batch " + std::to_string(k) + " has " + std::to_string(sum));
  }
  double worst = 0;
  for (const auto& [d, w] : norm.weights) {
    double freq = static_cast<double>(b.report().delivered.at(d)) / (2000.0 * 128.0);
    worst = std::max(worst, std::fabs(freq - w));
    c.expect(std::fabs(freq - w) <= 0.005, d + " frequency " + fixed(freq, 5) + " vs " + fixed(w, 5));
  }
  double secs = seconds_since(t0);
  c.expect(secs < 5, "took " + fixed(secs, 2) + " s");
  c.notes.insert(c.notes.begin(), "max frequency error " + fixed(worst, 6) + ", " + fixed(secs, 2) + " s");
  return c;
}

// --- 5 --------------------------------------------------------------------------

Check style_delta() {
  Check c;
  std::array<double, 7> before{742.92, 7.87, 227.07, 4.53, 0.68, 1.46, 0.10};
  std::array<double, 7> after{2649.99, 69.85, 43.40, 25.06, 4.90, 40.47, 0.14};
  auto d = style::delta_report(before, after);
  // column index, expected diff, expected percent
  const std::vector<std::tuple<std::size_t, std::string, std::string>> row = {
      {0, "+1907.07", "+256.7%"}, {1, "+61.98", "+787.2%"}, {3, "+20.53", "+453.1%"},
      {4, "+4.22", "+618.6%"},    {5, "+39.01", "+2669.9%"}, {6, "+0.04", "+42.6%"}};
  for (const auto& [i, diff, pct] : row) {
    auto got_diff = style::signed_fixed(d[i].diff, 2), got_pct = style::format_percent(d[i].percent);
    c.expect(got_diff == diff, d[i].column + " diff " + got_diff + " vs expected " + diff);
    c.expect(got_pct == pct, d[i].column + " percent " + got_pct + " vs expected " + pct);
  }
  // Characters/Line: after minus before, percent over before
  c.expect(std::fabs(d[2].diff - (43.40 - 227.07)) < 1e-9 && d[2].percent &&
               std::fabs(*d[2].percent - 100.0 * (43.40 - 227.07) / 227.07) < 1e-9,
           "Characters/Line delta");
  return c;
}

// --- 6 --------------------------------------------------------------------------

Check bullet_histogram() {
  Check c;
  std::vector<style::StyleStats> stats;
  for (int i = 0; i < 1000; ++i) {
    std::string doc = "Paragraph text.\n\nMore text.";
    if (i >= 828) {
      std::size_t bullets = 1 + (i % 30);
      for (std::size_t k = 0; k < bullets; ++k) doc += "\n- point";
    }
    stats.push_back(style::analyze(doc));
  }
  auto h = style::bullet_histogram(stats);
  c.expect(std::fabs(h.fraction(0) - 0.828) <= 1e-9, "bucket0 = " + fixed(h.fraction(0), 6));
  c.notes.insert(c.notes.begin(), "bucket0 = " + fixed(h.fraction(0), 3));
  return c;
}

// --- 7 --------------------------------------------------------------------------

Check quality_gate() {
  using namespace quality;
  Check c;
  Gen g(7);
  const auto& cats = known_categories();
  std::size_t parsed = 0, rejected = 0;
  std::vector<QualityVerdict> verdicts;
  for (int i = 0; i < 1000; ++i) {
    bool valid = g.coin();
    std::size_t n = valid ? 0 : g.index(4) + (g.coin(0.1) ? 0 : 1);
    Record j = {{"valid", g.coin(0.1) ? !valid : valid}, {"issues", Record::array()}};
    for (std::size_t k = 0; k < n; ++k) j["issues"].push_back({{"category", g.pick(cats)}, {"explanation", g.word()}});
    try {
      auto v = parse_verdict(j.dump());
      ++parsed;
      c.expect(v.valid() == v.issues().empty(), "verdict " + std::to_string(i) + " breaks valid <=> no issues");
      c.expect(parse_verdict(serialize_verdict(v)) == v, "verdict " + std::to_string(i) + " does not round-trip");
      verdicts.push_back(v);
    } catch (const Error& e) {
      ++rejected;
      c.expect(e.code() == ErrorCode::contract_violation &&
                   j["valid"].get<bool>() != j["issues"].empty(),
               "verdict " + std::to_string(i) + " wrongly rejected");
    }
  }
  std::array<std::size_t, 3> labels{};
  for (const auto& v : verdicts) {
    auto l = triage(v);
    ++labels[static_cast<std::size_t>(l)];
    bool crit = false;
    for (const auto& is : v.issues()) crit = crit || default_critical_set().count(is.category);
    auto want = v.valid() ? TriageLabel::Pass : crit ? TriageLabel::Reject : TriageLabel::Review;
    c.expect(l == want, "triage label mismatch");
  }
  c.expect(labels[0] + labels[1] + labels[2] == verdicts.size(), "triage does not partition");
  for (int t = 0; t < 500; ++t) {
    Confusion m{g.index(50), g.index(50), g.index(50), g.index(50)};
    auto s = agreement(m);
    auto near = [](const std::optional<double>& got, std::size_t num, std::size_t den) {
      return den == 0 ? !got : got && std::fabs(*got - double(num) / double(den)) < 1e-12;
    };
    c.expect(near(s.accuracy, m.tp + m.tn, m.total()) && near(s.precision, m.tp, m.tp + m.fp) &&
                 near(s.recall, m.tp, m.tp + m.fn),
             "agreement formula mismatch on matrix " + std::to_string(t));
  }
  std::ifstream in(testing::fixture("qgate_agreement.jsonl"));
  c.expect(static_cast<bool>(in), "missing qgate_agreement.jsonl");
  std::vector<QualityVerdict> pred;
  std::vector<bool> gold;
  auto judge = rule_judge();
  for (std::string line; std::getline(in, line);) {
    auto j = Record::parse(line);
    pred.push_back(assess(parse_manifest(j["sample"].dump()).at(0), judge).verdict);
    gold.push_back(j["gold_invalid"].get<bool>());
  }
  auto s = agreement(pred, gold);
  c.expect(s.accuracy && fixed(*s.accuracy * 100, 1) == "84.2", "fixture accuracy " + fixed(s.accuracy.value_or(0) * 100, 2) + "%");
  c.notes.insert(c.notes.begin(), std::to_string(parsed) + " verdicts parsed, " + std::to_string(rejected) +
                                      " rejected; fixture accuracy " + fixed(s.accuracy.value_or(0) * 100, 1) + "%");
  return c;
}

// --- 8 --------------------------------------------------------------------------

merge::Checkpoint random_ckpt(Gen& g, const merge::Checkpoint* like = nullptr) {
  merge::Checkpoint c;
  if (like) {
    for (const auto& t : like->tensors()) {
      merge::Tensor u = t;
      for (auto& v : u.values) v = static_cast<float>(g.real(-3, 3));
      c.add(std::move(u));
    }
    return c;
  }
  for (std::size_t i = 0, n = 1 + g.index(4); i < n; ++i) {
    merge::Tensor t{"t" + std::to_string(i), {1 + g.index(4), 1 + g.index(6)}, {}};
    t.values.resize(merge::element_count(t.shape));
    for (auto& v : t.values) v = static_cast<float>(g.real(-3, 3));
    c.add(std::move(t));
  }
  return c;
}

Check merging() {
  Check c;
  Gen g(8);
  auto a = random_ckpt(g), b = random_ckpt(g, &a);
  for (double w : {0.0, 0.5, 1.0})
    c.expect(merge::merge_linear(a, a, merge::make_ratio(w)).bitwise_equal(a), "merge(A,A," + fixed(w, 1) + ") != A");
  c.expect(merge::merge_linear(a, b, merge::make_ratio(1)).bitwise_equal(a), "w=1 is not A");
  c.expect(merge::merge_linear(a, b, merge::make_ratio(0)).bitwise_equal(b), "w=0 is not B");
  double worst = 0;
  for (int t = 0; t < 50; ++t) {
    auto x = random_ckpt(g);
    std::vector<merge::Checkpoint> cks = {x, random_ckpt(g, &x), random_ckpt(g, &x)};
    std::vector<double> w = {g.unit(), g.unit(), g.unit()};
    double s = w[0] + w[1] + w[2];
    for (auto& v : w) v /= s;
    auto m = merge::merge_chain(cks, w);
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t k = 0; k < x.tensors()[i].values.size(); ++k) {
        double want = 0;
        for (std::size_t j = 0; j < 3; ++j) want += w[j] * cks[j].tensors()[i].values[k];
        worst = std::max(worst, std::fabs(m.tensors()[i].values[k] - want));
      }
  }
  c.expect(worst <= 1e-6, "chain error " + std::to_string(worst));
  c.expect(merge::parse_ratio("8:2").w == 0.8 && merge::parse_ratio("5:5").w == 0.5 && merge::parse_ratio("2:8").w == 0.2,
           "table ratios");
  c.notes.insert(c.notes.begin(), "max chain error " + std::to_string(worst));
  return c;
}

// --- 9 --------------------------------------------------------------------------

Record random_value(Gen& g, int depth) {
  switch (g.index(depth > 1 ? 5 : 7)) {
    case 0: return g.range(-3, 3);
    case 1: return g.word();
    case 2: return g.coin();
    case 3: return nullptr;
    case 4: return g.real(-2, 2);
    case 5: {
      Record a = Record::array();
      for (std::size_t i = 0, n = g.index(3); i < n; ++i) a.push_back(random_value(g, depth + 1));
      return a;
    }
    default: {
      Record o = Record::object();
      for (const char* k : {"a", "b", "c"})
        if (g.coin()) o[k] = random_value(g, depth + 1);
      return o;
    }
  }
}

Record random_schema(Gen& g, int depth) {
  static const std::vector<std::string> types = {"object", "array", "string", "integer", "number", "boolean", "null"};
  Record s = Record::object();
  if (g.coin(0.7)) s["type"] = g.pick(types);
  if (g.coin(0.3)) s["required"] = std::vector<std::string>{"a", "b"};
  if (depth < 2 && g.coin(0.4)) s["properties"] = {{"a", random_schema(g, depth + 1)}, {"c", random_schema(g, depth + 1)}};
  if (depth < 2 && g.coin(0.2)) s["items"] = random_schema(g, depth + 1);
  if (depth < 2 && g.coin(0.15)) s["anyOf"] = Record::array({random_schema(g, depth + 1), random_schema(g, depth + 1)});
  return s;
}

Check rewards() {
  using namespace reward;
  Check c;
  ReplayRunner runner;
  runner.add("solve()\n", {10, 10});
  runner.add("partial()\n", {3, 4});
  const std::string perfect = "```python\nsolve()\n```";
  const std::vector<std::string> adversarial = {
      "<think>never closed " + perfect,
      "<think>ok</think>" + perfect + std::string("<|im_end|>") + "<|im_end|><|im_end|><|im_end|><|im_end|><|im_end|><|im_end|><|im_end|><|im_end|>",
      "</think>" + perfect,
      "<think>a<think>b</think></think>" + perfect};
  for (const auto& r : adversarial) {
    auto o = evaluate(r, CodeTask{runner});
    c.expect(o.is_penalty() && o.value == -1.0, "no penalty for: " + r.substr(0, 40));
  }
  c.expect(evaluate("<think>ok</think>" + perfect, CodeTask{runner}).value == 1.0, "clean perfect response");
  c.expect(normalize_reward(0) == -1 && normalize_reward(1) == 1 && normalize_reward(0.5) == 0, "normalize endpoints");
  c.expect(code_reward("```\npartial()\n```", runner).value == 0.5, "code_reward(3/4)");
  Gen g(9);
  std::size_t full = 0, none = 0;
  for (int i = 0; i < 100; ++i) {
    auto inst = random_value(g, 0), schema = random_schema(g, 0);
    auto chk = check_schema(inst, schema);
    double bin = schema_reward(inst, schema).value, grad = schema_reward(inst, schema, SchemaMode::graded).value;
    if (chk.valid()) {
      ++full;
      c.expect(bin == 1 && grad == 1, "endpoint disagreement (all satisfied) on pair " + std::to_string(i));
    } else if (chk.satisfied == 0) {
      ++none;
      c.expect(bin == -1 && grad == -1, "endpoint disagreement (none satisfied) on pair " + std::to_string(i));
    }
  }
  c.expect(full > 0 && none > 0, "random pairs never hit an endpoint");
  c.notes.insert(c.notes.begin(), std::to_string(full) + " all-satisfied and " + std::to_string(none) +
                                      " none-satisfied schema pairs");
  return c;
}

// --- 10 -------------------------------------------------------------------------

std::set<std::string> ids_in(const std::string& path, const std::string& key = "id") {
  std::set<std::string> ids;
  for (const auto& r : read_records(path)) ids.insert(r[key].get<std::string>());
  return ids;
}

Check conservation() {
  Check c;
  testing::TempDir dir;
  auto corpus = testing::fixture("golden_corpus.jsonl").string();
  auto n_in = load_manifest(corpus).size();
  c.expect(n_in == 500, "golden corpus has " + std::to_string(n_in) + " samples");
  auto cli = [&](std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    c.expect(code == 0, args[0] + " exited " + std::to_string(code) + ": " + err.str().substr(0, 200));
  };
  auto p = [&](const std::string& name) { return (dir / name).string(); };
  for (int k = 0; k < 2; ++k) {
    auto t = std::to_string(k);
    std::string jobs = k ? "3" : "1";
    cli({"code", "--in", corpus, "--out", p("code" + t), "--drops", p("code-drops" + t), "--review", p("code-review" + t),
         "--report", p("code-report" + t), "--seed", "11", "--jobs", jobs});
    cli({"qgate", "--in", corpus, "--out", p("q" + t), "--drops", p("q-drops" + t), "--review", p("q-review" + t),
         "--report", p("q-report" + t), "--seed", "11", "--jobs", jobs});
    cli({"style", "--in", corpus, "--out", p("style" + t), "--seed", "11"});
    cli({"pack", "--in", corpus, "--out", p("pack" + t), "--report", p("pack-report" + t), "--seed", "11"});
  }
  if (!c.ok) return c;
  for (const char* f : {"code", "code-drops", "code-review", "code-report", "q", "q-drops", "q-review", "q-report",
                        "style", "pack", "pack-report"})
    c.expect(read_file(p(std::string(f) + "0")) == read_file(p(std::string(f) + "1")),
             std::string(f) + " differs between identical runs");

  auto code_out = ids_in(p("code0")), code_drop = ids_in(p("code-drops0"));
  std::size_t overlap = 0;
  for (const auto& id : code_out) overlap += code_drop.count(id);
  c.expect(overlap == 0, "code: ids both kept and dropped");
  c.expect(code_out.size() + code_drop.size() == n_in,
           "code: " + std::to_string(code_out.size()) + " out + " + std::to_string(code_drop.size()) + " dropped");
  auto q_out = ids_in(p("q0")), q_drop = ids_in(p("q-drops0"));
  c.expect(q_out.size() + q_drop.size() == n_in,
           "qgate: " + std::to_string(q_out.size()) + " out + " + std::to_string(q_drop.size()) + " dropped");
  std::size_t packed = 0;
  for (const auto& s : read_records(p("pack0"))) packed += s["items"].size();
  c.expect(packed == n_in, "pack: " + std::to_string(packed) + " packed");
  c.notes.insert(c.notes.begin(), "code " + std::to_string(code_out.size()) + "+" + std::to_string(code_drop.size()) +
                                      ", qgate " + std::to_string(q_out.size()) + "+" + std::to_string(q_drop.size()) +
                                      " of " + std::to_string(n_in));
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
      {"packing efficiency on the synthetic 10k corpus", packing_efficiency},
      {"packing within one sequence of brute force", packing_oracle},
      {"difficulty category table and score bins", difficulty_tables},
      {"batch blending tracks the stage mixture", blending},
      {"style delta row at two-decimal precision", style_delta},
      {"bullet histogram zero bucket", bullet_histogram},
      {"quality verdicts, triage and agreement", quality_gate},
      {"linear and chain merging", merging},
      {"reward penalties, normalization and schema modes", rewards},
      {"golden corpus conservation and reruns", conservation},
  };
  int failed = 0;
  auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c = criteria[i].second();
    } catch (const std::exception& e) {
      c.ok = false;
      c.notes.push_back(std::string("threw: ") + e.what());
    }
    std::string notes;
    for (const auto& n : c.notes) notes += (notes.empty() ? "" : "; ") + n;
    std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " ("
              << fixed(seconds_since(t0), 2) << " s)" << (notes.empty() ? "" : " - " + notes) << '\n';
    if (!c.ok) ++failed;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed in "
            << fixed(seconds_since(start), 1) << " s\n";
  return failed ? 1 : 0;
}
