#pragma once

#include <filesystem>
#include <string>

#include "platoonsim/certify.hpp"
#include "platoonsim/explore.hpp"
#include "platoonsim/scenario.hpp"

namespace platoonsim {

/// Plain-text `key = value` summary of a completed run: scenario hash, graph
/// and controller digest, verdict, limit state (when converged), every
/// certification check with its margin/tolerance/worst sample, and any
/// disturbance-bound warnings. 9 significant digits throughout.
std::string run_summary_text(const Scenario& scenario, const SimulationResult& result);
void write_run_summary(const Scenario& scenario, const SimulationResult& result,
                       const std::filesystem::path& path);

/// The certification section alone (used by the certify command, which has no
/// scenario hash or verdict context of its own).
std::string certification_report_text(const CertificationReport& report);

/// Text digest of a counterexample search: per-outcome tallies, interesting
/// trials, and the contradiction verdict.
std::string search_report_text(const SearchReport& report);

}  // namespace platoonsim
