#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>

#include "evoport/config.hpp"
#include "evoport/report.hpp"

namespace evoport {

/// Stream for run k: split k of the base seed.
RngStream run_stream(std::uint64_t baseSeed, std::size_t runIndex);

/// One configured run, logged to out (and console when given).
RunResult run_and_report(const PortfolioConfig& cfg, const ProblemRegistry& registry, std::size_t runIndex,
                         std::ostream& out, ConsoleMirror* console = nullptr,
                         const std::atomic<bool>* interrupt = nullptr);

}  // namespace evoport
