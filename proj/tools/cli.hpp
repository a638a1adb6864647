#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "trackctl/simrun.hpp"

namespace trackctl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand (simulate, tune, analyze, roots). `args` excludes the
/// program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Table with columns Specificity, Sensitivity, Accuracy, SNR(dB), PSNR(dB),
/// MSE.
std::string print_report(const MetricsReport& report);

}  // namespace trackctl::cli
