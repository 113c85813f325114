#include "platoonsim/summary.hpp"

#include <fstream>
#include <sstream>

#include "platoonsim/scenario_io.hpp"
#include "text_format.hpp"

namespace platoonsim {

namespace {

using detail::format_g9;

std::string vector_text(const Eigen::VectorXd& v) {
    std::ostringstream os;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i > 0) os << ' ';
        os << format_g9(v[i]);
    }
    return os.str();
}

void append_check(std::ostringstream& os, const CheckEntry& entry) {
    const std::string prefix = "check." + entry.name;
    os << prefix << ".pass = " << (entry.pass ? "true" : "false") << "\n";
    os << prefix << ".margin = " << format_g9(entry.worst_margin) << "\n";
    os << prefix << ".tolerance = " << format_g9(entry.tolerance) << "\n";
    os << prefix << ".worst_time = " << format_g9(entry.worst_time) << "\n";
    if (entry.worst_index >= 0) {
        os << prefix << ".worst_agent = " << (entry.worst_index + 1) << "\n";
    }
    if (!entry.note.empty()) {
        os << prefix << ".note = " << entry.note << "\n";
    }
}

}  // namespace

std::string certification_report_text(const CertificationReport& report) {
    std::ostringstream os;
    os << "checks = " << report.entries.size() << "\n";
    for (const CheckEntry& entry : report.entries) append_check(os, entry);
    os << "all_checks_pass = " << (report.all_pass() ? "true" : "false") << "\n";
    return os.str();
}

std::string run_summary_text(const Scenario& scenario, const SimulationResult& result) {
    std::ostringstream os;
    os << "format = platoonsim-run-summary-v1\n";

    char hash_text[19];
    std::snprintf(hash_text, sizeof(hash_text), "0x%016llx",
                  static_cast<unsigned long long>(scenario_hash(scenario)));
    os << "scenario_hash = " << hash_text << "\n";

    os << "agents = " << scenario.graph.size() << "\n";
    os << "graph = " << (scenario.graph.is_chain() ? "chain" : "general") << "\n";
    os << "controller = " << to_string(scenario.controller.kind) << "\n";
    os << "threshold = " << to_string(scenario.controller.threshold.kind) << "\n";
    os << "gain = " << format_g9(scenario.controller.gain) << "\n";
    os << "w_bar = " << format_g9(scenario.controller.w_bar) << "\n";
    os << "dt = " << format_g9(scenario.integration.dt) << "\n";
    os << "horizon = " << format_g9(scenario.integration.horizon) << "\n";
    os << "samples = " << result.trajectory.samples() << "\n";

    os << "verdict = " << to_string(result.verdict.status) << "\n";
    os << "tail_variation = " << format_g9(result.verdict.tail_variation) << "\n";
    os << "oscillation_amplitude = " << format_g9(result.verdict.oscillation_amplitude) << "\n";
    if (result.verdict.status == VerdictStatus::Converged) {
        os << "x_star = " << vector_text(result.verdict.x_star) << "\n";
    }
    os << "reference = " << vector_text(result.reference) << "\n";
    os << "final_energy = " << format_g9(result.trajectory.energy.back()) << "\n";

    os << certification_report_text(result.report);

    const std::vector<BoundWarning> warnings = scenario.bound_warnings();
    os << "warnings = " << warnings.size() << "\n";
    for (std::size_t k = 0; k < warnings.size(); ++k) {
        const BoundWarning& w = warnings[k];
        os << "warning." << (k + 1) << " = disturbance on edge (" << (w.j + 1) << ", "
           << (w.i + 1) << ") has bound " << format_g9(w.bound) << " exceeding w_bar "
           << format_g9(w.w_bar) << "\n";
    }
    return os.str();
}

void write_run_summary(const Scenario& scenario, const SimulationResult& result,
                       const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write summary file: " + path.string());
    out << run_summary_text(scenario, result);
}

std::string search_report_text(const SearchReport& report) {
    std::ostringstream os;
    os << "format = platoonsim-search-report-v1\n";
    os << "family = " << to_string(report.family) << "\n";
    os << "trials = " << report.trials << "\n";
    for (const auto& [outcome, count] : report.tally) {
        os << "outcome." << to_string(outcome) << " = " << count << "\n";
    }
    os << "contradiction = " << (report.theorem_contradiction ? "true" : "false") << "\n";
    if (report.theorem_contradiction) {
        os << "contradiction_detail = " << report.contradiction_detail << "\n";
    }
    os << "interesting = " << report.interesting.size() << "\n";
    for (std::size_t k = 0; k < report.interesting.size(); ++k) {
        const TrialRecord& r = report.interesting[k];
        const std::string prefix = "interesting." + std::to_string(k + 1);
        os << prefix << ".trial = " << r.index << "\n";
        os << prefix << ".outcome = " << to_string(r.outcome) << "\n";
        os << prefix << ".policy = " << to_string(r.policy.kind) << "\n";
        os << prefix << ".dim = " << r.a.rows() << "\n";
        os << prefix << ".clusters = " << r.clusters << "\n";
        os << prefix << ".kernel_distance = " << format_g9(r.limit_kernel_distance) << "\n";
        os << prefix << ".max_norm = " << format_g9(r.max_norm) << "\n";
    }
    return os.str();
}

}  // namespace platoonsim
