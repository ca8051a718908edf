# SPDX-License-Identifier: Apache-2.0
"""Builds golden_corpus.jsonl: 500 mixed samples for end-to-end runs.

    python3 tests/fixtures/make_golden_corpus.py > tests/fixtures/golden_corpus.jsonl

The mix covers every code-pipeline stage outcome (non-code, low education
score, noisy sources, syntax errors, each task type), tagged and untagged math,
and prose samples for the quality gate. Output is deterministic.
"""
import json
import random

rng = random.Random(20240612)

PY_GOOD = [
    ("def two_sum(nums, target):\n    # index of each value seen so far\n    seen = {}\n"
     "    for i, x in enumerate(nums):\n        if target - x in seen:\n            return [seen[target - x], i]\n"
     "        seen[x] = i\n    return []\n", ["Hash Table", "Array"]),
    ("import heapq\n\n\ndef k_smallest(items, k):\n    \"\"\"Return the k smallest items.\"\"\"\n"
     "    heap = list(items)\n    heapq.heapify(heap)\n    return [heapq.heappop(heap) for _ in range(min(k, len(heap)))]\n",
     ["Heap"]),
    ("def lis(a):\n    # O(n log n) longest increasing subsequence\n    import bisect\n    tails = []\n"
     "    for x in a:\n        i = bisect.bisect_left(tails, x)\n        if i == len(tails):\n            tails.append(x)\n"
     "        else:\n            tails[i] = x\n    return len(tails)\n", ["Binary Search", "DP"]),
    ("class SegmentTree:\n    def __init__(self, data):\n        self.n = len(data)\n        self.t = [0] * (2 * self.n)\n"
     "        for i, v in enumerate(data):\n            self.t[self.n + i] = v\n        for i in range(self.n - 1, 0, -1):\n"
     "            self.t[i] = self.t[2 * i] + self.t[2 * i + 1]\n\n    def query(self, lo, hi):\n        res = 0\n"
     "        lo += self.n\n        hi += self.n\n        while lo < hi:\n            if lo & 1:\n                res += self.t[lo]\n"
     "                lo += 1\n            if hi & 1:\n                hi -= 1\n                res += self.t[hi]\n"
     "            lo //= 2\n            hi //= 2\n        return res\n", ["Segment Tree"]),
    ("from collections import deque\n\n\ndef shortest_path(graph, start, goal):\n    # breadth-first search\n"
     "    queue = deque([(start, 0)])\n    seen = {start}\n    while queue:\n        node, d = queue.popleft()\n"
     "        if node == goal:\n            return d\n        for nxt in graph.get(node, []):\n            if nxt not in seen:\n"
     "                seen.add(nxt)\n                queue.append((nxt, d + 1))\n    return -1\n", ["Graph"]),
    ("def fib(n):\n    \"\"\"Iterative Fibonacci.\"\"\"\n    a, b = 0, 1\n    for _ in range(n):\n        a, b = b, a + b\n"
     "    return a\n", []),
    ("def is_palindrome(s: str) -> bool:\n    # compare from both ends\n    i, j = 0, len(s) - 1\n    while i < j:\n"
     "        if s[i] != s[j]:\n            return False\n        i += 1\n        j -= 1\n    return True\n", ["String"]),
]

PY_BAD = [
    "def broken(:\n    return 1\n",
    "for i in range(3)\n    print(i)\n",
    "def f():\n    x = 1\n      y = 2\n",
    "print('unterminated)\n",
    "if x == 1:\nprint(x)\n",
    "class :\n    pass\n",
]

CPP_GOOD = [
    ("#include <vector>\n#include <algorithm>\n\n// sort and dedupe\nstd::vector<int> uniq(std::vector<int> v) {\n"
     "  std::sort(v.begin(), v.end());\n  v.erase(std::unique(v.begin(), v.end()), v.end());\n  return v;\n}\n",
     ["Array"]),
    ("#include <queue>\n#include <vector>\n\nint kth_largest(const std::vector<int>& a, int k) {\n"
     "  std::priority_queue<int, std::vector<int>, std::greater<int>> pq;\n  for (int x : a) {\n    pq.push(x);\n"
     "    if ((int)pq.size() > k) pq.pop();\n  }\n  return pq.top();\n}\n", ["Heap"]),
]
CPP_BAD = ["int main() {\n  int x = 1;\n  if (x) {\n    return 0;\n}\n", "void f() { std::cout << \"hi; }\n"]

JAVA_GOOD = ["public class Main {\n    // entry point\n    public static void main(String[] args) {\n"
             "        int total = 0;\n        for (int i = 0; i < 10; i++) {\n            total += i;\n        }\n"
             "        System.out.println(total);\n    }\n}\n"]
JS_GOOD = ["function debounce(fn, ms) {\n  // delay calls until quiet\n  let t;\n  return (...args) => {\n"
           "    clearTimeout(t);\n    t = setTimeout(() => fn(...args), ms);\n  };\n}\n"]
GO_GOOD = ["package main\n\nimport \"fmt\"\n\n// Sum adds the values.\nfunc Sum(xs []int) int {\n\ttotal := 0\n"
           "\tfor _, x := range xs {\n\t\ttotal += x\n\t}\n\treturn total\n}\n\nfunc main() {\n\tfmt.Println(Sum([]int{1, 2, 3}))\n}\n"]
RUST_GOOD = ["fn gcd(a: u64, b: u64) -> u64 {\n    // Euclid\n    if b == 0 { a } else { gcd(b, a % b) }\n}\n\n"
             "fn main() {\n    println!(\"{}\", gcd(12, 18));\n}\n"]
SQL_GOOD = ["SELECT name, COUNT(*) AS orders\nFROM customers c\nJOIN orders o ON o.customer_id = c.id\n"
            "GROUP BY name\nORDER BY orders DESC;\n"]
SHELL_GOOD = ["#!/bin/bash\n# count lines in every file\nfor f in *.txt; do\n  wc -l \"$f\"\ndone\n"]

GEN_PROMPTS = ["Write a function that solves this.", "Implement an efficient solution.",
               "Please write code for the following problem.", "Can you implement this in {lang}?"]

samples = []


def add(sid, source, messages, meta):
    samples.append({"id": sid, "source": source, "messages": messages, "meta": meta})


def fence(lang, code):
    return "```" + lang + "\n" + code + "```\n"


def code_sample(i, source, lang, code, tags, kind):
    meta = {"domain": "Code", "test_case_count": rng.choice([1, 3, 4, 8, 12, 25])}
    if tags and rng.random() < 0.8:
        meta["algorithm_tags"] = tags
    tag = lang if rng.random() < 0.85 else ""
    if kind == "generation":
        user = rng.choice(GEN_PROMPTS).format(lang=lang or "code") + " Given a list of numbers, compute the answer."
        assistant = "Here is a solution.\n\n" + fence(tag, code) + "\nIt runs in linear time."
    elif kind == "repair":
        user = ("This code fails with an error, please fix it:\n\n" + fence(tag, code) +
                "It raises an exception on empty input.")
        assistant = "The bug is the missing guard. Fixed version:\n\n" + fence(tag, code)
    elif kind == "tests":
        user = ("Given this code and the test `assert f([1, 2]) == 3`, what is the result of the test?\n\n" +
                fence(tag, code))
        assistant = "The assertion passes.\n\n" + fence(tag, code)
    else:
        user = "What does this print when called with input [3, 1, 2]?\n\n" + fence(tag, code)
        assistant = "It prints the processed values.\n\n" + fence(tag, code)
    add("code-%03d" % i, source, [{"role": "user", "content": user}, {"role": "assistant", "content": assistant}], meta)


KINDS = ["generation", "generation", "repair", "tests", "execution"]
i = 0
# 260 code samples from clean sources
for n in range(260):
    r = rng.random()
    source = "repo-%02d" % rng.randrange(12)
    if r < 0.45:
        code, tags = rng.choice(PY_GOOD)
        code_sample(i, source, "python", code, tags, rng.choice(KINDS))
    elif r < 0.55:
        code_sample(i, source, "python", rng.choice(PY_BAD), ["Array"], "generation")
    elif r < 0.65:
        code, tags = rng.choice(CPP_GOOD)
        code_sample(i, source, "cpp", code, tags, rng.choice(KINDS))
    elif r < 0.69:
        code_sample(i, source, "cpp", rng.choice(CPP_BAD), [], "repair")
    elif r < 0.74:
        code_sample(i, source, "java", rng.choice(JAVA_GOOD), ["Math"], rng.choice(KINDS))
    elif r < 0.79:
        code_sample(i, source, "javascript", rng.choice(JS_GOOD), [], "generation")
    elif r < 0.84:
        code_sample(i, source, "go", rng.choice(GO_GOOD), ["Array"], rng.choice(KINDS))
    elif r < 0.89:
        code_sample(i, source, "rust", rng.choice(RUST_GOOD), ["Math"], "generation")
    elif r < 0.94:
        code_sample(i, source, "sql", rng.choice(SQL_GOOD), [], "generation")
    else:
        code_sample(i, source, "bash", rng.choice(SHELL_GOOD), [], "generation")
    i += 1

# 20 low-education code samples: tiny, no comments, no functions
for n in range(20):
    code = "x = %d\nprint(x)\n" % n
    add("code-%03d" % i, "repo-%02d" % rng.randrange(12),
        [{"role": "user", "content": "Print a number."},
         {"role": "assistant", "content": fence("python", code)}], {"domain": "Code"})
    i += 1

# 20 samples from a noisy source: mostly prose with a sliver of code
for n in range(20):
    prose = " ".join(rng.choice(["the", "project", "works", "well", "and", "we", "like", "it"]) for _ in range(120))
    add("code-%03d" % i, "scrape-noisy",
        [{"role": "user", "content": "Tell me about the project."},
         {"role": "assistant", "content": prose + "\n\n" + fence("python", "def f():\n    return 1\n")}],
        {"domain": "Code"})
    i += 1

MATH = [
    ("Solve the quadratic equation x^2 - 5x + 6 = 0.", "Step 1: factor.\nStep 2: (x-2)(x-3)=0.\nStep 3: x=2 or x=3."),
    ("Find the area of a triangle with base 4 and height 6.", "1. Area = base*height/2.\n2. Area = 12."),
    ("Compute the integral of x^2 from 0 to 1.", "Step 1: antiderivative x^3/3.\nStep 2: evaluate.\nAnswer: 1/3."),
    ("A die is rolled twice. What is the probability the sum is 7?", "1. 36 outcomes.\n2. 6 favorable.\n3. 1/6."),
    ("How many ways can 5 people sit in a row?", "Step 1: permutation count 5!.\nStep 2: 120."),
    ("A car travels at a speed of 60 km per hour for 2.5 hours. How far does it go?", "Distance = 150 km."),
    ("Prove that the limit of 1/n converges to 0.",
     "Step 1: fix epsilon.\nStep 2: choose N > 1/epsilon.\nStep 3: for n > N, 1/n < epsilon.\nStep 4: done.\n"
     "Step 5: hence converges.\nStep 6: QED."),
    ("Is every prime greater than 2 odd?", "Yes, since even numbers above 2 are divisible by 2."),
]
for n in range(100):
    q, a = MATH[n % len(MATH)]
    q = q + ("" if n < len(MATH) else " (variant %d)" % n)
    add("math-%03d" % n, "math-set-%d" % (n % 3),
        [{"role": "user", "content": q}, {"role": "assistant", "content": a}], {"domain": "math"})

PROSE = [
    ("Respond in exactly 3 sentences. Why is the sky blue?",
     "Sunlight scatters off air molecules. Blue light scatters the most. So the sky looks blue."),
    ("Respond in exactly 3 sentences. Why is the sky blue?",
     "Sunlight scatters. Blue scatters most. That is Rayleigh scattering. It depends on wavelength. "
     "Red scatters less. Sunsets look red. So the sky is blue."),
    ("List exactly 3 bullet points about tea.", "- Green tea\n- Black tea\n- Oolong tea"),
    ("Answer in JSON with keys name and age.", "{\"name\": \"Ann\", \"age\": 30}"),
    ("Answer in JSON with keys name and age.", "Her name is Ann and she is 30."),
    ("Is Paris the capital of France?", "Paris is the capital of France. Paris is not the capital of France."),
    ("Summarize the benefits of sleep.", "Sleep restores energy, consolidates memory and supports health."),
]
DOMAINS = ["STEM", "IF", "SO"]
for n in range(100):
    q, a = PROSE[n % len(PROSE)]
    add("chat-%03d" % n, "chat-%d" % (n % 4),
        [{"role": "system", "content": "You are a helpful assistant."},
         {"role": "user", "content": q}, {"role": "assistant", "content": a}],
        {"domain": DOMAINS[n % 3], "lang": "en"})

assert len(samples) == 500, len(samples)
rng.shuffle(samples)
for s in samples:
    print(json.dumps(s, ensure_ascii=False))
