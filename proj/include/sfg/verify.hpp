#ifndef SFG_VERIFY_HPP
#define SFG_VERIFY_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace sfg::verify {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Run the full oracle-versus-analytic verification suite (criteria 1-10).
/// Criterion 10 aggregates the others (total runtime and overall status).
std::vector<CriterionResult> run_all();

/// One pass/fail line per criterion plus a summary; returns the number of
/// failed criteria (the process exit code).
int report(const std::vector<CriterionResult>& results, std::ostream& os);

}  // namespace sfg::verify

#endif  // SFG_VERIFY_HPP
