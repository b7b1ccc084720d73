#pragma once

#include <filesystem>
#include <functional>

#include "bwu/harness/config.hpp"
#include "bwu/harness/report.hpp"

namespace bwu::harness {

struct RunOptions {
    std::filesystem::path out_dir = "reports";
    int threads = 1;
    bool refine = false; // echo the run at h/2 and sqrt(rho)
};

/// Dispatches the experiment named by the config's `kind` and writes the
/// CSV + JSON outputs. Exit-code contract: 0 pass, 2 assertion failures,
/// 3 config errors (mapped by the CLI from RunReport / ConfigError).
RunReport run(const ExperimentConfig& config, const RunOptions& options = {});

/// Simple index-parallel loop used by experiments; results slots are
/// preassigned so output order is deterministic.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body);

} // namespace bwu::harness
