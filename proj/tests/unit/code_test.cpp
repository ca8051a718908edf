// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "curate/code/distribution.hpp"
#include "curate/code/pipeline.hpp"
#include "support/testing.hpp"

namespace curate::code {
namespace {

using testing::chat;
using testing::Gen;

std::string fenced(const std::string& tag, const std::string& code) { return "```" + tag + "\n" + code + "```\n"; }

Sample code_sample(const std::string& id, const std::string& tag, const std::string& code,
                   const std::string& user = "Write a function for this.", Meta meta = Meta::object(),
                   const std::string& source = "repo") {
  return chat(id, user, "Here you go.\n\n" + fenced(tag, code), std::move(meta), source);
}

const std::string kGoodPython =
    "def total(xs):\n"
    "    # running sum\n"
    "    s = 0\n"
    "    for x in xs:\n"
    "        s += x\n"
    "    return s\n";

// --- language --------------------------------------------------------------

TEST(Language, TaggedFenceIsPrimarySignal) {
  EXPECT_EQ(identify_language(code_sample("a", "python", "x = 1\n")), Language::python);
  // tag wins even when the body looks like another language
  EXPECT_EQ(identify_language(code_sample("b", "python", "#include <vector>\nstd::vector<int> v;\n")),
            Language::python);
}

TEST(Language, AliasesNormalizeTags) {
  EXPECT_EQ(identify_language(code_sample("a", "py", "x = 1\n")), Language::python);
  EXPECT_EQ(identify_language(code_sample("b", "C++", "int x;\n")), Language::cpp);
  EXPECT_EQ(identify_language(code_sample("c", "sh", "ls\n")), Language::shell);
  EXPECT_EQ(identify_language(code_sample("d", "ts", "let x = 1;\n")), Language::typescript);
  EXPECT_EQ(identify_language(code_sample("e", "cobol", "DISPLAY 'X'.\n")), Language::other);
  AliasTable t;
  t.set("mylang", Language::rust);
  EXPECT_EQ(identify_language(code_sample("f", "mylang", "fn main() {}\n"), t), Language::rust);
}

TEST(Language, FirstTaggedFenceDecides) {
  auto s = chat("a", "q", "```\nx = 1\n```\n\n```java\nclass A {}\n```\n\n```python\ny = 2\n```\n");
  EXPECT_EQ(identify_language(s), Language::java);
}

TEST(Language, UntaggedFallbackCpp) {
  auto s = code_sample("a", "", "#include <vector>\nstd::vector<int> v;\nint main() { return 0; }\n");
  EXPECT_EQ(identify_language(s), Language::cpp);
}

TEST(Language, UntaggedFallbackOthers) {
  EXPECT_EQ(identify_language(code_sample("p", "", "def f(x):\n    return x\n\nimport os\n")), Language::python);
  EXPECT_EQ(identify_language(code_sample("g", "", "package main\n\nfunc main() {\n\tfmt.Println(1)\n}\n")),
            Language::go);
  EXPECT_EQ(identify_language(code_sample("r", "", "fn main() {\n    let mut x = 1;\n    println!(\"{}\", x);\n}\n")),
            Language::rust);
  EXPECT_EQ(identify_language(code_sample("j", "", "public class A {\n  public static void main(String[] a) {\n"
                                                   "    System.out.println(1);\n  }\n}\n")),
            Language::java);
  EXPECT_EQ(identify_language(code_sample("s", "", "SELECT name FROM users WHERE id = 1;\n")), Language::sql);
}

TEST(Language, ProseOnlyIsNotACodeSample) {
  auto s = code_sample("a", "", "hello world prose only\n");
  try {
    identify_language(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_a_code_sample);
  }
  EXPECT_THROW(identify_language(chat("b", "hi", "no code at all")), Error);
}

TEST(Language, RawCodeSamples) {
  auto s = make_sample("r", "s", {{Role::assistant, "#include <iostream>\nint main() { std::cout << \"x\"; }\n"}},
                       Meta{{"raw_code", true}});
  EXPECT_EQ(identify_language(s), Language::cpp);
}

TEST(Language, PluggableFallback) {
  LanguageClassifier always_go = [](std::string_view) { return Language::go; };
  EXPECT_EQ(identify_language(code_sample("a", "", "int x = 1;\n"), {}, always_go), Language::go);
}

TEST(Language, Deterministic) {
  auto s = code_sample("a", "", "import numpy as np\nx = np.zeros(3)\n");
  auto first = identify_language(s);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(identify_language(s), first);
}

// --- fences ----------------------------------------------------------------

TEST(Fences, ExtractsTagsAndContent) {
  auto blocks = extract_code_blocks("a\n```python title\nx\n```\nb\n````\n```inner```\n````\n");
  ASSERT_EQ(blocks.size(), 2u);
  EXPECT_EQ(blocks[0].tag, "python");
  EXPECT_EQ(blocks[0].content, "x\n");
  EXPECT_TRUE(blocks[0].closed);
  EXPECT_EQ(blocks[1].content, "```inner```\n");
}

TEST(Fences, UnclosedBlock) {
  auto blocks = extract_code_blocks("```js\nlet x\n");
  ASSERT_EQ(blocks.size(), 1u);
  EXPECT_FALSE(blocks[0].closed);
}

// --- education --------------------------------------------------------------

TEST(Education, EmptyBlockScoresOne) {
  auto s = chat("a", "q", "```python\n```\n");
  EXPECT_EQ(score_education(s, Language::python), 1);
}

TEST(Education, CompleteFunctionScoresFive) {
  auto s = code_sample("a", "python", kGoodPython);
  auto b = education_breakdown(kGoodPython, Language::python);
  EXPECT_TRUE(b.parseable);
  EXPECT_TRUE(b.defines_function);
  EXPECT_TRUE(b.control_flow);
  EXPECT_TRUE(b.self_contained);
  EXPECT_EQ(score_education(s, Language::python), 5);
}

TEST(Education, BrokenSnippetWithLoopIsFiltered) {
  std::string broken = "def f(xs):\n    for x in xs\n        print(x)\n";
  int score = score_education(code_sample("a", "python", broken), Language::python);
  EXPECT_LE(score, kMaxRejectedScore);
}

TEST(Education, FreeNamesLoseSelfContainedPoint) {
  std::string code = "def f(xs):\n    for x in xs:\n        helper(x)\n";
  auto b = education_breakdown(code, Language::python);
  EXPECT_FALSE(b.self_contained);
  EXPECT_EQ(b.score, 4);
}

TEST(Education, PluggableScorerAndRange) {
  EducationScorer two = [](const EducationInput&) { return 2; };
  EXPECT_EQ(score_education(code_sample("a", "python", kGoodPython), Language::python, two), 2);
  EducationScorer bad = [](const EducationInput&) { return 9; };
  EXPECT_THROW(score_education(code_sample("a", "python", kGoodPython), Language::python, bad), Error);
}

TEST(Education, BraceLanguage) {
  std::string cpp = "int sum(const int* a, int n) {\n  int s = 0;\n  for (int i = 0; i < n; ++i) s += a[i];\n"
                    "  return s;\n}\n";
  EXPECT_EQ(education_breakdown(cpp, Language::cpp).score, 5);
}

// --- file level ------------------------------------------------------------

std::vector<FileSignals> group_of(std::size_t n, std::size_t low_quality, std::size_t low_ratio = 0,
                                  std::size_t multi = 0) {
  std::vector<FileSignals> g(n, FileSignals{0.9, 5, 1});
  for (std::size_t i = 0; i < low_quality; ++i) g[i].quality_score = 2;
  for (std::size_t i = 0; i < low_ratio; ++i) g[n - 1 - i].code_ratio = 0.1;
  for (std::size_t i = 0; i < multi; ++i) g[i].definition_groups = 3;
  return g;
}

TEST(FileLevel, LowQualityShareDropsSource) {
  auto d = filter_file_level(group_of(10, 8));
  EXPECT_FALSE(d.keep);
  EXPECT_DOUBLE_EQ(d.low_quality_fraction, 0.8);
  EXPECT_FALSE(d.reason.empty());
}

TEST(FileLevel, CleanSourceKept) {
  auto d = filter_file_level(group_of(10, 0));
  EXPECT_TRUE(d.keep);
  EXPECT_TRUE(d.reason.empty());
}

TEST(FileLevel, ExactlyAtThresholdKept) {
  EXPECT_TRUE(filter_file_level(group_of(10, 6)).keep);   // 0.6, rule b is strict
  EXPECT_TRUE(filter_file_level(group_of(10, 0, 5)).keep);  // 0.5, rule a
  EXPECT_TRUE(filter_file_level(group_of(10, 0, 0, 5)).keep);
  EXPECT_FALSE(filter_file_level(group_of(10, 7)).keep);
  EXPECT_FALSE(filter_file_level(group_of(10, 0, 6)).keep);
  EXPECT_FALSE(filter_file_level(group_of(10, 0, 0, 6)).keep);
}

TEST(FileLevel, ConfigurableThresholds) {
  FileLevelThresholds t;
  t.low_quality_share = 0.9;
  EXPECT_TRUE(filter_file_level(group_of(10, 8), t).keep);
}

TEST(FileLevel, EmptyGroupIsError) {
  try {
    filter_file_level(std::vector<FileSignals>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::empty_group);
  }
}

TEST(FileLevel, CodeRatioFromSample) {
  auto s = chat("a", "q", "abcdefghij" + std::string("\n```python\nx = 1\n```\n"));
  double r = code_nl_ratio(s);
  EXPECT_GT(r, 0.0);
  EXPECT_LT(r, 1.0);
  EXPECT_DOUBLE_EQ(code_nl_ratio(chat("b", "q", "```python\nx = 1\n```")), 1.0);
}

TEST(FileLevel, UnrelatedDefinitionGroups) {
  std::string related = "def a():\n    return b()\n\ndef b():\n    return 1\n";
  std::string unrelated = "def parse_csv(p):\n    return p\n\ndef draw_circle(r):\n    return r\n";
  EXPECT_EQ(unrelated_definition_groups(related, Language::python), 1u);
  EXPECT_EQ(unrelated_definition_groups(unrelated, Language::python), 2u);
}

// --- executability ---------------------------------------------------------

TEST(Executability, MinimalPython) {
  auto v = check_executability("def f():\n    return 1\n", Language::python);
  EXPECT_TRUE(v.executable);
  EXPECT_EQ(v.reason, ExecReason::ok);
  EXPECT_FALSE(v.location);
}

TEST(Executability, InconsistentIndentationHasLocation) {
  auto v = check_executability("def f():\n    x = 1\n  y = 2\n", Language::python);
  EXPECT_FALSE(v.executable);
  EXPECT_EQ(v.reason, ExecReason::indentation_inconsistent);
  ASSERT_TRUE(v.location);
  EXPECT_EQ(v.location->line, 3u);
}

TEST(Executability, PythonFailureKinds) {
  EXPECT_EQ(check_executability("x = (1, 2\n", Language::python).reason, ExecReason::unbalanced_delimiters);
  EXPECT_EQ(check_executability("s = 'abc\n", Language::python).reason, ExecReason::tokenize_error);
  EXPECT_EQ(check_executability("def f()\n    pass\n", Language::python).reason, ExecReason::grammar_violation);
  EXPECT_EQ(check_executability("# only a comment\n", Language::python).reason, ExecReason::grammar_violation);
}

TEST(Executability, CppBraceInsideStringRespected) {
  auto v = check_executability("int main() {\n  const char* s = \"}\";\n  char c = '{';\n  // }\n  return 0;\n}\n",
                               Language::cpp);
  EXPECT_TRUE(v.executable) << v.detail;
  EXPECT_EQ(v.reason, ExecReason::ok);
}

TEST(Executability, BraceFailures) {
  auto v = check_executability("int main() {\n  return 0;\n", Language::cpp);
  EXPECT_FALSE(v.executable);
  EXPECT_EQ(v.reason, ExecReason::unbalanced_delimiters);
  EXPECT_TRUE(v.location);
  EXPECT_EQ(check_executability("void f() { g(]; }\n", Language::java).reason, ExecReason::unbalanced_delimiters);
  EXPECT_EQ(check_executability("char* s = \"abc;\n", Language::c).reason, ExecReason::tokenize_error);
  EXPECT_EQ(check_executability("// nothing\n", Language::go).reason, ExecReason::grammar_violation);
}

TEST(Executability, LanguageSpecificLiterals) {
  EXPECT_TRUE(check_executability("const s = `a ${b} }`;\n", Language::javascript).executable);
  EXPECT_TRUE(check_executability("let s = r#\"}\"#;\nfn main() {}\n", Language::rust).executable);
  EXPECT_TRUE(check_executability("var s = @\"}\\\";\nclass A {}\n", Language::csharp).executable);
  EXPECT_TRUE(check_executability("s := `}`\nfunc main() {}\n", Language::go).executable);
}

TEST(Executability, ApproximateLanguages) {
  for (auto lang : {Language::sql, Language::shell, Language::other}) {
    auto v = check_executability("SELECT (1);\n", lang);
    EXPECT_TRUE(v.executable);
    EXPECT_EQ(v.reason, ExecReason::unsupported_language_approx);
    EXPECT_FALSE(check_executability("SELECT (1;\n", lang).executable);
  }
}

TEST(Executability, VerdictInvariantOnRandomInputs) {
  Gen g(5);
  const std::string alphabet = "ab(){}[]:'\"\n    #=";
  const std::vector<Language> langs(kAllLanguages.begin(), kAllLanguages.end());
  for (int i = 0; i < 300; ++i) {
    std::string t;
    std::size_t n = g.index(30);
    for (std::size_t k = 0; k < n; ++k) t += alphabet[g.index(alphabet.size())];
    Language lang = g.pick(langs);
    auto v = check_executability(t, lang);
    bool approx = lang == Language::sql || lang == Language::shell || lang == Language::other;
    if (v.executable) { EXPECT_EQ(v.reason, approx ? ExecReason::unsupported_language_approx : ExecReason::ok); }
    if (v.reason == ExecReason::unsupported_language_approx) { EXPECT_TRUE(approx); }
    if (!v.executable) { EXPECT_NE(v.reason, ExecReason::ok); }
  }
}

// --- difficulty ------------------------------------------------------------

TEST(DifficultyLabel, TableExamples) {
  EXPECT_EQ(label_difficulty({"Hash Table"}).difficulty, Difficulty::Easy);
  EXPECT_EQ(label_difficulty({"Heap", "Array"}).difficulty, Difficulty::Medium);
  EXPECT_EQ(label_difficulty({"Convex Hull Trick"}).difficulty, Difficulty::Hard);
}

TEST(DifficultyLabel, NormalizationAndAliases) {
  EXPECT_EQ(label_difficulty({"  hash   TABLE "}).difficulty, Difficulty::Easy);
  EXPECT_EQ(label_difficulty({"union_find"}).difficulty, Difficulty::Medium);
  EXPECT_EQ(label_difficulty({"Aho--Corasick"}).difficulty, Difficulty::Hard);
  EXPECT_EQ(label_difficulty({"Aho–Corasick"}).difficulty, Difficulty::Hard);
  EXPECT_EQ(label_difficulty({"priority queue"}).difficulty, Difficulty::Medium);
  EXPECT_EQ(label_difficulty({"dynamic programming"}).difficulty, Difficulty::Medium);
}

TEST(DifficultyLabel, UnknownTagsAreEasyAndReported) {
  auto l = label_difficulty({"Quantum Stuff"});
  EXPECT_EQ(l.difficulty, Difficulty::Easy);
  ASSERT_EQ(l.unknown_tags.size(), 1u);
  EXPECT_EQ(l.unknown_tags[0], "Quantum Stuff");
}

TEST(DifficultyLabel, EmptyTagsIsNoTags) {
  try {
    label_difficulty({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::no_tags);
  }
}

TEST(DifficultyLabel, MaxRuleMonotone) {
  Gen g(8);
  const std::vector<std::string> vocab = {"Array", "Greedy", "Segment Tree", "DP", "Math", "Unknown",
                                          "Suffix Array", "Heap", "String", "Li Chao Tree"};
  for (int i = 0; i < 500; ++i) {
    std::vector<std::string> tags;
    std::size_t n = 1 + g.index(4);
    for (std::size_t k = 0; k < n; ++k) tags.push_back(g.pick(vocab));
    auto before = label_difficulty(tags).difficulty;
    tags.push_back(g.pick(vocab));
    EXPECT_GE(label_difficulty(tags).difficulty, before);
  }
}

TEST(DifficultyLabel, KeywordDetectionFallback) {
  auto tags = detect_algorithm_tags("import heapq\nheapq.heappush(h, 1)\n");
  ASSERT_FALSE(tags.empty());
  EXPECT_EQ(label_difficulty(tags).difficulty, Difficulty::Medium);
  EXPECT_TRUE(detect_algorithm_tags("x = 1\n").empty());
  auto hard = detect_algorithm_tags("class SegmentTree:\n    pass\n");
  EXPECT_EQ(label_difficulty(hard).difficulty, Difficulty::Hard);
}

// --- task ------------------------------------------------------------------

TEST(Task, SelfRepair) {
  auto s = chat("a", "here is my code, it throws IndexError, fix it\n\n" + fenced("python", "xs = []\nprint(xs[0])\n"),
                "Use a guard.");
  EXPECT_EQ(classify_task(s), CodeTask::SelfRepair);
}

TEST(Task, CodeExecution) {
  auto s = chat("a", "given this function and input [1,2], what does it return?\n\n" +
                         fenced("python", "def f(xs):\n    return sum(xs)\n"),
                "3");
  EXPECT_EQ(classify_task(s), CodeTask::CodeExecution);
}

TEST(Task, TestOutputPrediction) {
  auto s = chat("a", "Given the test `assert f([1, 2]) == 3`, what is the output of this test?\n\n" +
                         fenced("python", "def f(xs):\n    return sum(xs)\n"),
                "It passes.");
  EXPECT_EQ(classify_task(s), CodeTask::TestOutputPrediction);
}

TEST(Task, CodeGenerationDefault) {
  auto s = chat("a", "write a function that reverses a string", fenced("python", "def r(s):\n    return s[::-1]\n"));
  EXPECT_EQ(classify_task(s), CodeTask::CodeGeneration);
}

TEST(Task, CompleteProgramForbidsCodeGeneration) {
  auto s = chat("a", "Improve this solution.\n\n" + fenced("python", kGoodPython), fenced("python", kGoodPython));
  EXPECT_NE(classify_task(s), CodeTask::CodeGeneration);
}

TEST(Task, NoUserMessageIsMalformed) {
  auto s = make_sample("a", "s", {{Role::assistant, "x"}});
  try {
    classify_task(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::malformed_sample);
  }
}

TEST(Task, PostProcessingPropertyOnGeneratedPrompts) {
  Gen g(21);
  const std::vector<std::string> lead = {"Please", "Can you", "Kindly", "Help me"};
  const std::vector<std::string> ask = {"write code", "make it faster", "explain", "refactor", "add comments"};
  for (int i = 0; i < 100; ++i) {
    std::string user = g.pick(lead) + " " + g.pick(ask) + ".\n\n" + fenced("python", kGoodPython);
    auto s = chat("a" + std::to_string(i), user, "ok");
    EXPECT_NE(classify_task(s), CodeTask::CodeGeneration) << user;
  }
}

// --- distribution ----------------------------------------------------------

std::vector<Sample> tasks(const std::vector<std::string>& labels) {
  std::vector<Sample> v;
  for (std::size_t i = 0; i < labels.size(); ++i)
    v.push_back(chat("s" + std::to_string(i), "q", "a", Meta{{"task", labels[i]}}));
  return v;
}

TEST(Distribution, DominantBucketFlagged) {
  auto r = distribution_report(tasks({"SelfRepair", "SelfRepair", "SelfRepair", "SelfRepair", "SelfRepair",
                                      "SelfRepair", "CodeGeneration", "CodeGeneration", "CodeExecution",
                                      "CodeExecution"}),
                               {"task"});
  const auto& a = r.axis("task");
  EXPECT_DOUBLE_EQ(a.fraction("SelfRepair"), 0.6);
  EXPECT_EQ(a.dominant(0.5), std::vector<std::string>{"SelfRepair"});
}

TEST(Distribution, SingleSampleAndUniform) {
  EXPECT_DOUBLE_EQ(distribution_report(tasks({"X"}), {"task"}).axis("task").fraction("X"), 1.0);
  auto u = distribution_report(tasks({"A", "B", "C", "D"}), {"task"});
  EXPECT_TRUE(u.axis("task").dominant(0.5).empty());
}

TEST(Distribution, MissingKeyNamesSampleAndKey) {
  auto v = tasks({"A"});
  v.push_back(chat("lonely", "q", "a"));
  try {
    distribution_report(v, {"task"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::missing_key);
    std::string m = e.what();
    EXPECT_NE(m.find("lonely"), std::string::npos);
    EXPECT_NE(m.find("task"), std::string::npos);
  }
}

TEST(Distribution, FractionsSumToOneAndMergeIsAdditive) {
  Gen g(4);
  const std::vector<std::string> labels = {"A", "B", "C", "D", "E"};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> l1, l2;
    for (std::size_t i = 0, n = 1 + g.index(30); i < n; ++i) l1.push_back(g.pick(labels));
    for (std::size_t i = 0, n = 1 + g.index(30); i < n; ++i) l2.push_back(g.pick(labels));
    auto r1 = distribution_report(tasks(l1), {"task"});
    auto r2 = distribution_report(tasks(l2), {"task"});
    double sum = 0;
    for (const auto& [b, n] : r1.axis("task").counts) sum += r1.axis("task").fraction(b);
    EXPECT_NEAR(sum, 1.0, 1e-9);
    auto all = l1;
    all.insert(all.end(), l2.begin(), l2.end());
    r1.merge(r2);
    EXPECT_EQ(r1.axis("task").counts, distribution_report(tasks(all), {"task"}).axis("task").counts);
  }
}

TEST(Distribution, NonStringBuckets) {
  std::vector<Sample> v = {chat("a", "q", "a", Meta{{"quality_score", 5}}),
                           chat("b", "q", "a", Meta{{"quality_score", 4}}),
                           chat("c", "q", "a", Meta{{"quality_score", 5}})};
  auto r = distribution_report(v, {"quality_score"});
  EXPECT_EQ(r.axis("quality_score").counts.at("5"), 2u);
}

// --- pipeline --------------------------------------------------------------

TEST(Pipeline, EmptyCorpus) {
  auto r = run_code_pipeline({});
  EXPECT_TRUE(r.samples.empty());
  EXPECT_TRUE(r.drops.empty());
}

TEST(Pipeline, OneFailsExecutability) {
  // The broken sample has its own source so file-level rules do not fire on the others.
  std::string cpp_broken = "int f(int n) {\n  // count down\n  while (n > 0) { n--; \n  return n;\n}\n";
  std::vector<Sample> in = {code_sample("ok1", "python", kGoodPython, "Write a sum function.",
                                        Meta{{"algorithm_tags", {"Array"}}}),
                            code_sample("ok2", "python", kGoodPython, "Write a sum function.",
                                        Meta{{"algorithm_tags", {"Heap"}}}),
                            code_sample("bad", "cpp", cpp_broken, "Write a countdown.", Meta::object(), "other")};
  auto r = run_code_pipeline(in);
  ASSERT_EQ(r.samples.size(), 2u);
  // the brace scorer does not parse, so the broken sample is dropped at education or executability
  ASSERT_EQ(r.drops.size(), 1u);
  EXPECT_EQ(r.drops.entries()[0].id, "bad");
  EXPECT_EQ(r.samples[1].meta["difficulty"], "Medium");
}

TEST(Pipeline, ExecutabilityStageNamed) {
  // Scores 5 under a lenient scorer, then fails the structural check.
  EducationScorer lenient = [](const EducationInput&) { return 5; };
  CodePipelineConfig cfg;
  cfg.scorer = lenient;
  std::vector<Sample> in = {code_sample("a", "python", kGoodPython), code_sample("b", "python", kGoodPython),
                            code_sample("c", "python", "def f(:\n    pass\n")};
  auto r = run_code_pipeline(in, cfg);
  EXPECT_EQ(r.samples.size(), 2u);
  ASSERT_EQ(r.drops.size(), 1u);
  EXPECT_EQ(r.drops.entries()[0].stage, Stage::executability);
  EXPECT_EQ(r.drops.entries()[0].id, "c");
}

TEST(Pipeline, AllGoodSurviveWithFullMeta) {
  std::vector<Sample> in;
  for (int i = 0; i < 5; ++i)
    in.push_back(code_sample("s" + std::to_string(i), "python", kGoodPython, "Write a sum function.",
                             Meta{{"keep_me", i}}));
  auto r = run_code_pipeline(in);
  ASSERT_EQ(r.samples.size(), 5u);
  for (const auto& s : r.samples) {
    EXPECT_EQ(s.meta["language"], "python");
    EXPECT_EQ(s.meta["quality_score"], 5);
    EXPECT_EQ(s.meta["is_executable"], true);
    EXPECT_TRUE(s.has_meta("difficulty"));
    EXPECT_EQ(s.meta["task"], "CodeGeneration");
    EXPECT_TRUE(s.has_meta("keep_me"));  // unknown keys survive
  }
}

TEST(Pipeline, ScorerFailureRoutesToReview) {
  CodePipelineConfig cfg;
  cfg.scorer = [](const EducationInput& in) -> int {
    if (in.sample.id == "boom") throw std::runtime_error("judge down");
    return 5;
  };
  std::vector<Sample> in = {code_sample("ok", "python", kGoodPython), code_sample("boom", "python", kGoodPython)};
  auto r = run_code_pipeline(in, cfg);
  EXPECT_EQ(r.samples.size(), 1u);
  ASSERT_EQ(r.review.size(), 1u);
  EXPECT_EQ(r.review[0].id, "boom");
  EXPECT_EQ(r.drops.distinct_ids(), 1u);
}

TEST(Pipeline, NoisySourceDroppedWhole) {
  std::vector<Sample> in;
  for (int i = 0; i < 10; ++i) {
    bool low = i < 8;
    in.push_back(code_sample("n" + std::to_string(i), "python", low ? "x = 1\n" : kGoodPython, "Write code.",
                             Meta::object(), "noisy"));
  }
  auto r = run_code_pipeline(in);
  EXPECT_TRUE(r.samples.empty());
  EXPECT_FALSE(r.sources.at("noisy").keep);
  std::size_t file_level = 0;
  for (const auto& e : r.drops.entries())
    if (e.stage == Stage::file_level) ++file_level;
  EXPECT_EQ(file_level, 2u);
}

std::vector<Sample> random_corpus(Gen& g, std::size_t n) {
  const std::vector<std::string> bodies = {kGoodPython, "x = 1\n", "def f(:\n", "int main() { return 0; }\n",
                                           "plain words only", "", "for i in range(3):\n    print(i)\n"};
  const std::vector<std::string> tags = {"python", "", "cpp", "py"};
  const std::vector<std::string> prompts = {"Write code.", "it fails with an error, fix it",
                                            "what does this print for input 3?"};
  std::vector<Sample> v;
  for (std::size_t i = 0; i < n; ++i) {
    std::string body = g.pick(bodies);
    std::string answer = body.empty() ? "no code" : "Answer:\n" + fenced(g.pick(tags), body);
    Meta meta = Meta::object();
    if (g.coin()) meta["algorithm_tags"] = {g.pick(std::vector<std::string>{"Heap", "Array", "Nope"})};
    v.push_back(chat("r" + std::to_string(i), g.pick(prompts), answer, meta, "src" + std::to_string(g.index(4))));
  }
  return v;
}

TEST(Pipeline, ConservationSoundnessMonotonicity) {
  Gen g(99);
  for (int trial = 0; trial < 30; ++trial) {
    auto in = random_corpus(g, 1 + g.index(25));
    CodePipelineConfig cfg;
    cfg.jobs = 1 + static_cast<unsigned>(g.index(3));
    auto r = run_code_pipeline(in, cfg);
    EXPECT_EQ(in.size(), r.samples.size() + r.drops.distinct_ids());
    for (const auto& s : r.samples) {
      EXPECT_GE(s.meta["quality_score"].get<int>(), 4);
      EXPECT_EQ(s.meta["is_executable"], true);
      // language is identified once, from the same sample content
      Sample original = *std::find_if(in.begin(), in.end(), [&](const Sample& x) { return x.id == s.id; });
      EXPECT_EQ(s.meta["language"], std::string(to_string(identify_language(original))));
      EXPECT_EQ(s.messages, original.messages);
    }
  }
}

TEST(Pipeline, ParallelMatchesSequential) {
  Gen g(7);
  auto in = random_corpus(g, 60);
  CodePipelineConfig one, many;
  many.jobs = 4;
  auto a = run_code_pipeline(in, one);
  auto b = run_code_pipeline(in, many);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_EQ(a.drops.to_records(), b.drops.to_records());
}

TEST(Pipeline, StagePanicBecomesInternalError) {
  CodePipelineConfig cfg;
  cfg.fallback = [](std::string_view) -> Language { throw std::logic_error("classifier crashed"); };
  std::vector<Sample> in = {code_sample("a", "", "int x = 1;\n"), code_sample("b", "python", kGoodPython),
                            code_sample("c", "python", kGoodPython)};
  auto r = run_code_pipeline(in, cfg);
  ASSERT_EQ(r.drops.size(), 1u);
  EXPECT_EQ(r.drops.entries()[0].id, "a");
  EXPECT_NE(r.drops.entries()[0].reason.find("internal-error"), std::string::npos);
  EXPECT_EQ(r.samples.size(), 2u);
}

}  // namespace
}  // namespace curate::code
