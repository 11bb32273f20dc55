#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ka/io.hpp"

namespace ka {

struct RunConfig {
  std::uint64_t seed = 20240611;
  // Replaces every criterion's stated tolerance when set.
  std::optional<double> tol;
  // Restricts the sweep to these signatures when non-empty.
  std::vector<Signature> signatures;
  // Replaces the stated sample counts when set.
  std::optional<int> samples;
  std::string format = "text";
};

enum class Outcome { pass, fail, skip };

// One checked quantity: residual parts pass when worst < threshold, discrete parts
// count mismatches and pass when worst <= threshold.
struct CriterionPart {
  std::string name;
  double worst = 0.0;
  double threshold = 0.0;
  int cases = 0;
  bool discrete = false;

  bool passed() const;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  Outcome outcome = Outcome::skip;
  std::vector<CriterionPart> parts;
  std::string detail;
  double seconds = 0.0;
};

std::string to_string(Outcome o);

// Criteria 1..11 in order; deterministic in config.seed.
std::vector<CriterionResult> run_acceptance(const RunConfig& config);
CriterionResult run_criterion(int id, const RunConfig& config);
constexpr int kCriterionCount = 11;

bool all_passed(const std::vector<CriterionResult>& results);

// One "PASS|FAIL|SKIP <id> <name> ..." line per criterion.
std::string format_text(const std::vector<CriterionResult>& results, bool with_timing = true);
json format_json(const std::vector<CriterionResult>& results, const RunConfig& config, bool with_timing = false);
std::string format_csv(const std::vector<CriterionResult>& results);

}  // namespace ka
