#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "htridiag/models.hpp"

namespace htridiag::verify {

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// Run the structural and spectral invariant suite for one model instance.
/// When tol_override is set it replaces every per-check threshold.
std::vector<CheckResult> run_checks(const models::ModelDescriptor& model, std::size_t n,
                                    std::optional<double> tol_override = std::nullopt);

bool all_pass(const std::vector<CheckResult>& results);

}  // namespace htridiag::verify
