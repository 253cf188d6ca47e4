#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "clmm/reconstruction.hpp"

namespace clmm::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kConfigError = 2,
    kDataError = 3,
    kEngineError = 4,  // partial fill or inconsistent observation
};

// Runs the command line `args` (without the program name). Reports go to
// the output directory; diagnostics to `err`, summaries to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Batch reconstruction over a CSV stream with header
// liquidity,price_a,price_b,ratio.
// Rows that fail validation raise DataError, inconsistent observations
// InconsistentObservation, both naming the row.
void reconstruct_csv(std::istream& in, std::ostream& out, RatioConvention convention,
                     double tolerance);

}  // namespace clmm::cli
