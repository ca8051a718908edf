// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <fstream>

#include "curate/code/python_parser.hpp"
#include "curate/core/records.hpp"
#include "support/testing.hpp"

namespace curate::code::python {
namespace {

bool ok(std::string_view src) { return !check_syntax(src).has_value(); }

TEST(PythonSyntax, AcceptsCommonConstructs) {
  EXPECT_TRUE(ok("def f():\n    return 1\n"));
  EXPECT_TRUE(ok("x = [1,\n     2]\n"));
  EXPECT_TRUE(ok("if x:\n    pass\nelif y:\n    pass\nelse:\n    pass\n"));
  EXPECT_TRUE(ok("try:\n    f()\nexcept ValueError as e:\n    raise\nfinally:\n    g()\n"));
  EXPECT_TRUE(ok("class A:\n    def m(self):\n        return self\n"));
  EXPECT_TRUE(ok("import a.b as c\nfrom x import (y, z)\n"));
  EXPECT_TRUE(ok("s = \"\"\"multi\nline\"\"\"\n"));
  EXPECT_TRUE(ok("x = 1 \\\n    + 2\n"));
  EXPECT_TRUE(ok("no_trailing_newline = 1"));
}

TEST(PythonSyntax, RejectsWithKindAndPosition) {
  auto f = check_syntax("x = 1\ny = (2,\n");
  ASSERT_TRUE(f);
  EXPECT_EQ(f->kind, FailureKind::delimiters);
  f = check_syntax("def f():\nreturn 1\n");
  ASSERT_TRUE(f);
  EXPECT_EQ(f->kind, FailureKind::indentation);
  EXPECT_EQ(f->line, 2u);
  f = check_syntax("x = = 1\n");
  ASSERT_TRUE(f);
  EXPECT_EQ(f->kind, FailureKind::grammar);
  EXPECT_EQ(f->line, 1u);
  f = check_syntax("x = 'open\n");
  ASSERT_TRUE(f);
  EXPECT_EQ(f->kind, FailureKind::tokenize);
}

TEST(PythonSyntax, RejectsInvalidTargetsAndDanglingClauses) {
  EXPECT_FALSE(ok("f() = 1\n"));
  EXPECT_FALSE(ok("else:\n    pass\n"));
}

// Placement errors come from the compiler, not the parser, so they pass here.
TEST(PythonSyntax, CompilerOnlyErrorsAreAccepted) {
  EXPECT_TRUE(ok("return 1\n"));
  EXPECT_TRUE(ok("break\n"));
  EXPECT_TRUE(ok("def f(a, a):\n    pass\n"));
}

TEST(PythonSyntax, NeverThrowsOnGarbage) {
  testing::Gen g(17);
  const std::string alphabet = "ab1 :()[]{}'\"\\\n\t#=.,@*+-/<>!%&|^~";
  for (int i = 0; i < 2000; ++i) {
    std::string t;
    std::size_t n = g.index(50);
    for (std::size_t k = 0; k < n; ++k) t += alphabet[g.index(alphabet.size())];
    EXPECT_NO_THROW(check_syntax(t)) << t;
  }
}

// Labels come from CPython's ast.parse; see fixtures/make_python_corpus.py.
TEST(PythonSyntax, AgreesWithReferenceParser) {
  std::ifstream in(testing::fixture("python_exec_corpus.jsonl"));
  ASSERT_TRUE(in) << "missing fixture";
  std::string line;
  std::size_t n = 0, agree = 0;
  std::vector<std::string> disagreements;
  while (std::getline(in, line)) {
    auto j = Record::parse(line);
    bool reference_valid = j["valid"].get<bool>();
    bool mine = ok(j["code"].get<std::string>());
    ++n;
    if (mine == reference_valid) ++agree;
    else disagreements.push_back(j["id"].get<std::string>());
  }
  ASSERT_GE(n, 200u);
  double rate = static_cast<double>(agree) / static_cast<double>(n);
  std::string ids;
  for (const auto& d : disagreements) ids += d + " ";
  EXPECT_GE(rate, 0.98) << agree << "/" << n << " disagreements: " << ids;
  RecordProperty("agreement", std::to_string(agree) + "/" + std::to_string(n));
}

}  // namespace
}  // namespace curate::code::python
