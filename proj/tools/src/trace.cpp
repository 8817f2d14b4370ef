#include "trace.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ctah/errors.hpp"

namespace ctah {

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open trace file for writing: " + path.string());

    out << kTraceSchema << '\n';
    out << "t,h_t,H_t,eta_t,delta_t,Delta_t,v_t,V_t";
    const std::size_t orders = rows.empty() ? 0 : rows.front().posterior.size();
    for (std::size_t d = 0; d < orders; ++d) out << ",q_" << d;
    for (std::size_t d = 0; d < orders; ++d) out << ",regret_" << d;
    out << '\n';

    for (const TraceRow& row : rows) {
        out << row.t << ',' << format_double(row.expected_loss) << ','
            << format_double(row.expected_cum) << ',' << format_double(row.eta) << ','
            << format_double(row.gap) << ',' << format_double(row.gap_cum) << ','
            << format_double(row.variance) << ',' << format_double(row.variance_cum);
        for (double q : row.posterior) out << ',' << format_double(q);
        for (double r : row.regret_to_order) out << ',' << format_double(r);
        out << '\n';
    }
    if (!out) throw IoError("failed writing trace file: " + path.string());
}

int CsvTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return static_cast<int>(i);
    }
    return -1;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open CSV file: " + path.string());

    CsvTable table;
    std::string line;
    bool have_header = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.front() == '#') continue;
        std::stringstream ss(line);
        std::string field;
        if (!have_header) {
            while (std::getline(ss, field, ',')) table.columns.push_back(field);
            if (table.columns.empty()) throw IoError("CSV header missing in " + path.string());
            have_header = true;
            continue;
        }
        std::vector<double> row;
        row.reserve(table.columns.size());
        while (std::getline(ss, field, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(field, &used));
                if (used != field.size()) throw std::invalid_argument(field);
            } catch (const std::exception&) {
                throw IoError("malformed CSV value '" + field + "' at " + path.string() + ":" +
                              std::to_string(lineno));
            }
        }
        if (row.size() != table.columns.size()) {
            throw IoError("CSV row width mismatch at " + path.string() + ":" + std::to_string(lineno));
        }
        table.rows.push_back(std::move(row));
    }
    if (!have_header) throw IoError("CSV has no header: " + path.string());
    return table;
}

} // namespace ctah
