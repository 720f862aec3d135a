// Acceptance checks shared by the acceptance test binary and `verify`.
#ifndef CQED_VERIFICATION_HPP
#define CQED_VERIFICATION_HPP

#include <string>
#include <vector>

namespace cqed::verification {

struct CheckResult {
  int id;
  std::string name;
  bool passed;
  std::string detail;
};

CheckResult ideal_optimal_ecp();
CheckResult ideal_efficient_ecp();
CheckResult ideal_epp();
CheckResult pcd_correctness();
CheckResult reflection_coefficients();
CheckResult analytic_simulation_equivalence();
CheckResult experimental_checkpoints();
CheckResult practical_efficient_ecp_fidelity();
CheckResult property_suite();

/// Every check above, in order.
std::vector<CheckResult> run_all();

}  // namespace cqed::verification

#endif  // CQED_VERIFICATION_HPP
