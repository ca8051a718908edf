// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <functional>
#include <optional>
#include <regex>
#include <string>
#include <string_view>

#include "curate/core/sample.hpp"
#include "curate/core/text.hpp"
#include "curate/error.hpp"

namespace curate::math {

enum class Domain {
  Algebra,
  GeometryTopology,
  Analysis,
  ProbabilityStatistics,
  AppliedMathematics,
  DiscreteMathematics,
  Others
};
enum class Conceptual { Elementary, MiddleSchool, HighSchool, Undergraduate, Graduate, AdvancedResearch };
enum class Reasoning { Shallow, Moderate, Deep, ExtremelyHard };

inline constexpr std::array<Domain, 7> kDomains = {
    Domain::Algebra,           Domain::GeometryTopology,   Domain::Analysis, Domain::ProbabilityStatistics,
    Domain::AppliedMathematics, Domain::DiscreteMathematics, Domain::Others};
inline constexpr std::array<Conceptual, 6> kConceptual = {Conceptual::Elementary,    Conceptual::MiddleSchool,
                                                          Conceptual::HighSchool,    Conceptual::Undergraduate,
                                                          Conceptual::Graduate,      Conceptual::AdvancedResearch};
inline constexpr std::array<Reasoning, 4> kReasoning = {Reasoning::Shallow, Reasoning::Moderate, Reasoning::Deep,
                                                        Reasoning::ExtremelyHard};

constexpr std::string_view to_string(Domain d) {
  constexpr std::array<std::string_view, 7> names = {"Algebra",           "GeometryTopology",
                                                     "Analysis",          "ProbabilityStatistics",
                                                     "AppliedMathematics", "DiscreteMathematics",
                                                     "Others"};
  return names[static_cast<std::size_t>(d)];
}
constexpr std::string_view to_string(Conceptual c) {
  constexpr std::array<std::string_view, 6> names = {"Elementary",    "MiddleSchool", "HighSchool",
                                                     "Undergraduate", "Graduate",     "AdvancedResearch"};
  return names[static_cast<std::size_t>(c)];
}
constexpr std::string_view to_string(Reasoning r) {
  constexpr std::array<std::string_view, 4> names = {"Shallow", "Moderate", "Deep", "ExtremelyHard"};
  return names[static_cast<std::size_t>(r)];
}

template <class Enum, std::size_t N>
std::optional<Enum> parse_enum(std::string_view s, const std::array<Enum, N>& all) {
  for (auto v : all)
    if (to_string(v) == s) return v;
  return std::nullopt;
}

inline std::optional<Domain> parse_domain(std::string_view s) { return parse_enum(s, kDomains); }
inline std::optional<Conceptual> parse_conceptual(std::string_view s) { return parse_enum(s, kConceptual); }
inline std::optional<Reasoning> parse_reasoning(std::string_view s) { return parse_enum(s, kReasoning); }

struct MathMeta {
  Domain domain = Domain::Others;
  Conceptual conceptual = Conceptual::Elementary;
  Reasoning reasoning = Reasoning::Moderate;
  bool operator==(const MathMeta&) const = default;
};

/// Tags live under one meta key so they are always written together.
inline constexpr std::string_view kMathMetaKey = "math";

inline Meta to_meta(const MathMeta& m) {
  Meta j = Meta::object();
  j["domain"] = std::string(to_string(m.domain));
  j["conceptual"] = std::string(to_string(m.conceptual));
  j["reasoning"] = std::string(to_string(m.reasoning));
  return j;
}

/// Reads the tags back; nullopt when absent or incomplete.
inline std::optional<MathMeta> read_math_meta(const Sample& s) {
  if (!s.has_meta(kMathMetaKey)) return std::nullopt;
  const auto& j = s.meta[std::string(kMathMetaKey)];
  if (!j.is_object()) return std::nullopt;
  auto str = [&](const char* k) -> std::string {
    return j.contains(k) && j[k].is_string() ? j[k].get<std::string>() : std::string();
  };
  auto d = parse_domain(str("domain"));
  auto c = parse_conceptual(str("conceptual"));
  auto r = parse_reasoning(str("reasoning"));
  if (!d || !c || !r) return std::nullopt;
  return MathMeta{*d, *c, *r};
}

using MathTagger = std::function<MathMeta(const Sample&)>;

namespace detail {

struct Cue {
  std::string_view phrase;
  double weight;
};

inline std::size_t count_phrase(const std::string& lowered, std::string_view phrase) {
  std::size_t n = 0;
  for (std::size_t at = lowered.find(phrase); at != std::string::npos; at = lowered.find(phrase, at + 1)) {
    bool left = at == 0 || !text::is_ident_char(lowered[at - 1]);
    std::size_t end = at + phrase.size();
    // allow simple plurals
    if (end < lowered.size() && lowered[end] == 's') ++end;
    bool right = end >= lowered.size() || !text::is_ident_char(lowered[end]);
    if (left && right) ++n;
  }
  return n;
}

inline const std::array<std::vector<Cue>, 6>& domain_cues() {
  static const std::array<std::vector<Cue>, 6> cues = {{
      {{"equation", 1}, {"polynomial", 2}, {"solve for", 1}, {"quadratic", 2}, {"factor", 1}, {"matrix", 2},
       {"eigenvalue", 2}, {"linear", 1}, {"roots", 1}, {"inequality", 1}, {"simplify", 1}, {"logarithm", 1},
       {"group", 1}, {"ring", 1}, {"vector space", 2}, {"system of equations", 2}},
      {{"triangle", 2}, {"circle", 2}, {"angle", 2}, {"polygon", 2}, {"perimeter", 2}, {"radius", 2},
       {"diameter", 2}, {"geometry", 2}, {"topology", 3}, {"manifold", 3}, {"sphere", 2}, {"perpendicular", 2},
       {"parallel", 1}, {"hypotenuse", 2}, {"square", 1}, {"rectangle", 2}, {"area", 1}, {"volume", 1},
       {"homeomorphic", 3}},
      {{"integral", 3}, {"integrate", 3}, {"derivative", 3}, {"differentiate", 3}, {"limit", 3}, {"converge", 2},
       {"convergence", 2}, {"series", 1}, {"continuous", 2}, {"differentiable", 2}, {"calculus", 2},
       {"taylor", 2}, {"supremum", 2}, {"infimum", 2}, {"lim", 2}},
      {{"probability", 3}, {"expected value", 3}, {"random", 2}, {"dice", 2}, {"die", 1}, {"coin", 2},
       {"variance", 3}, {"standard deviation", 3}, {"mean", 1}, {"median", 2}, {"distribution", 1},
       {"statistic", 2}, {"drawing", 1}, {"odds", 2}, {"sample", 1}},
      {{"optimization", 2}, {"optimize", 2}, {"velocity", 2}, {"speed", 2}, {"interest", 2}, {"profit", 2},
       {"cost", 1}, {"population", 2}, {"rate", 1}, {"per hour", 2}, {"physics", 2}, {"model", 1},
       {"mixture", 2}, {"revenue", 2}, {"minimize", 1}, {"maximize", 1}},
      {{"graph", 2}, {"vertex", 3}, {"vertices", 3}, {"edge", 2}, {"combinatoric", 3}, {"permutation", 3},
       {"combination", 2}, {"choose", 1}, {"prime", 2}, {"divisible", 2}, {"modulo", 2}, {"gcd", 2},
       {"recurrence", 2}, {"counting", 2}, {"pigeonhole", 3}, {"integer", 1}, {"number theory", 3},
       {"how many ways", 3}, {"binomial", 1}},
  }};
  return cues;
}

inline const std::array<std::vector<std::string_view>, 6>& conceptual_cues() {
  static const std::array<std::vector<std::string_view>, 6> cues = {{
      {},
      {"ratio", "percent", "fraction", "proportion", "perimeter", "area", "angle", "solve for x", "average",
       "linear equation"},
      {"quadratic", "logarithm", "trigonometry", "sine", "cosine", "sin", "cos", "polynomial", "probability",
       "exponential", "sequence", "function", "permutation", "combination"},
      {"integral", "derivative", "eigenvalue", "matrix", "limit", "differential equation", "vector space",
       "converge", "taylor", "group", "proof", "prove", "variance", "expected value"},
      {"measure theory", "lebesgue", "hilbert space", "banach", "manifold", "galois", "functional analysis",
       "topological space", "homology", "stochastic process", "sobolev"},
      {"conjecture", "open problem", "cohomology", "sheaf", "category theory", "riemann hypothesis",
       "langlands", "moduli space"},
  }};
  return cues;
}

}  // namespace detail

inline Domain tag_domain(std::string_view problem) {
  std::string lowered = text::to_lower(problem);
  Domain best = Domain::Others;
  double best_score = 0;
  const auto& cues = detail::domain_cues();
  for (std::size_t d = 0; d < cues.size(); ++d) {
    double score = 0;
    for (const auto& c : cues[d]) score += c.weight * static_cast<double>(detail::count_phrase(lowered, c.phrase));
    if (score > best_score) {
      best_score = score;
      best = static_cast<Domain>(d);
    }
  }
  return best;
}

/// Highest tier with a cue; arithmetic-only text is Elementary.
inline Conceptual tag_conceptual(std::string_view problem) {
  std::string lowered = text::to_lower(problem);
  const auto& cues = detail::conceptual_cues();
  for (std::size_t tier = cues.size(); tier-- > 1;)
    for (auto c : cues[tier])
      if (detail::count_phrase(lowered, c) > 0) return static_cast<Conceptual>(tier);
  return Conceptual::Elementary;
}

/// Lines opening with "Step k" or "k." / "k)".
inline std::size_t count_solution_steps(std::string_view solution) {
  static const std::regex marker(R"(^\s*(step\s*\d+\b|\d+\s*[.)]\s))", std::regex::icase);
  std::size_t n = 0;
  for (auto line : text::split_lines(solution)) {
    std::string l(line);
    if (std::regex_search(l, marker)) ++n;
  }
  return n;
}

inline Reasoning reasoning_from_steps(std::size_t steps) {
  if (steps == 0) return Reasoning::Moderate;  // no step-marked solution
  if (steps <= 2) return Reasoning::Shallow;
  if (steps <= 5) return Reasoning::Moderate;
  if (steps <= 9) return Reasoning::Deep;
  return Reasoning::ExtremelyHard;
}

inline void require_math(const Sample& s) {
  if (!s.has_meta("domain")) return;
  const auto& d = s.meta["domain"];
  if (!d.is_string() || text::to_lower(d.get<std::string>()) != "math")
    throw Error(ErrorCode::wrong_domain, "sample '" + s.id + "' is flagged domain " + d.dump() + ", not math");
}

/// Rule-based tagger: problem text from user turns, steps from assistant turns.
inline MathMeta default_math_tagger(const Sample& s) {
  std::string problem = s.first_with_role(Role::user) ? s.joined(Role::user) : s.concatenated_text();
  MathMeta m;
  m.domain = tag_domain(problem);
  m.conceptual = tag_conceptual(problem);
  m.reasoning = reasoning_from_steps(count_solution_steps(s.joined(Role::assistant)));
  return m;
}

inline MathMeta tag_math(const Sample& s, const MathTagger& tagger = {}) {
  require_math(s);
  return tagger ? tagger(s) : default_math_tagger(s);
}

}  // namespace curate::math
