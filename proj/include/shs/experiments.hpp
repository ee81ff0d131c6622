#pragma once

#include <string>
#include <vector>

#include "shs/config.hpp"
#include "shs/report.hpp"

namespace shs::io {

struct ExperimentResult {
    std::vector<ReportRow> rows;
    int exit_code = 0;  // 0 all-pass, 2 verdict failure, 1 execution error
};

// Runs the experiment named by cfg.experiment, writes its artifacts under
// out_dir, and returns the consolidated rows. Individual sweep-run failures
// are recorded per row without aborting the sweep.
ExperimentResult run_experiment(const RunConfig& cfg, const std::string& out_dir,
                                bool verbose = false);

}  // namespace shs::io
