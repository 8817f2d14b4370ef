#ifndef CTAH_TOOLS_TRACE_HPP
#define CTAH_TOOLS_TRACE_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ctah {

// One row of the per-round trace. Column order is fixed by the v1 schema:
// t, h_t, H_t, eta_t, delta_t, Delta_t, v_t, V_t, q_0..q_D, regret_0..regret_D.
struct TraceRow {
    std::uint64_t t = 0;
    double expected_loss = 0.0;   // h_t
    double expected_cum = 0.0;    // H_t
    double eta = 0.0;             // eta_t (inf on the first round)
    double gap = 0.0;             // delta_t
    double gap_cum = 0.0;         // Delta_t
    double variance = 0.0;        // v_t
    double variance_cum = 0.0;    // V_t
    std::vector<double> posterior;       // q_t(0..D)
    std::vector<double> regret_to_order; // H_t - bestLoss(d) for d in 0..D
};

inline constexpr const char* kTraceSchema = "# ctah-trace v1";

void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& rows);

// Generic CSV table as read back by the plotting and test code. Lines starting
// with '#' are skipped; the first remaining line names the columns.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    int column_index(const std::string& name) const; // -1 when absent
};
CsvTable read_csv(const std::filesystem::path& path);

std::string format_double(double value);

} // namespace ctah

#endif // CTAH_TOOLS_TRACE_HPP
