// runner.hpp — dispatch of a validated RunConfig to the experiment drivers.
#pragma once

#include "ringqed/config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace ringqed {

struct RunOutcome {
    std::string summary;  // one line, headline metric ± standard error
    std::vector<std::filesystem::path> files;
    bool pass = true;  // false only for a failing oracle check
};

// Fills the "auto" fields (grids, spectrum span, cloud calibration) so the
// sidecar records exactly what ran.
RunConfig resolve(const RunConfig& config);

// Runs the experiment and writes CSV + JSON sidecar (+ gnuplot script) into
// config.out. On failure a sidecar marked "partial" is flushed before the
// error propagates.
RunOutcome run(const RunConfig& config);

}  // namespace ringqed
