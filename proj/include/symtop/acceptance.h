#ifndef SYMTOP_ACCEPTANCE_H_
#define SYMTOP_ACCEPTANCE_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace symtop {

enum class Suite { kFast, kFull };

std::optional<Suite> parse_suite(const std::string& name);
std::string to_string(Suite suite);

struct CriterionResult {
  int id = 0;
  std::string title;
  std::string status;  // "pass", "fail" or "skipped"
  std::string detail;
  double seconds = 0.0;
  nlohmann::json data;
};

struct AcceptanceOptions {
  Suite suite = Suite::kFast;
  unsigned threads = 1;
  std::uint64_t seed = 1;
  /// When set, each line is printed as soon as its criterion finishes.
  std::ostream* progress = nullptr;
};

/// Criteria 1 to 11. The fast suite skips the j = 1 closure.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

/// "[PASS] 1 title: detail (1.23 s)".
std::string format_line(const CriterionResult& r);
nlohmann::json to_json(const std::vector<CriterionResult>& results);
bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace symtop

#endif  // SYMTOP_ACCEPTANCE_H_
