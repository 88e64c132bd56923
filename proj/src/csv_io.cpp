#include "scadtv/csv_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace scadtv {

namespace {

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

} // namespace

void write_csv(const std::vector<SweepRecord>& records, const std::string& path) {
    std::vector<SweepRecord> sorted = records;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const SweepRecord& a, const SweepRecord& b) { return a.lambda < b.lambda; });

    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("write_csv: cannot open '" + path + "'");
    out << "lambda,mse,sure\n";
    for (const auto& rec : sorted) {
        out << format_value(rec.lambda) << ',';
        if (rec.mse) out << format_value(*rec.mse);
        out << ',';
        if (rec.sure) out << format_value(*rec.sure);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write_csv: write failed for '" + path + "'");
}

void write_histogram_csv(const std::vector<long long>& counts, double lo, double hi,
                         const std::string& path) {
    if (counts.empty()) throw std::invalid_argument("write_histogram_csv: no bins");
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("write_histogram_csv: cannot open '" + path + "'");
    out << "bin_lo,bin_hi,count\n";
    const double width = (hi - lo) / static_cast<double>(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        out << format_value(lo + i * width) << ',' << format_value(lo + (i + 1) * width) << ','
            << counts[i] << '\n';
    if (!out) throw std::runtime_error("write_histogram_csv: write failed for '" + path + "'");
}

void write_level_shifts_csv(const std::vector<std::pair<double, double>>& shifts,
                            const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("write_level_shifts_csv: cannot open '" + path + "'");
    out << "level,shift\n";
    for (const auto& [level, shift] : shifts)
        out << format_value(level) << ',' << format_value(shift) << '\n';
    if (!out) throw std::runtime_error("write_level_shifts_csv: write failed for '" + path + "'");
}

std::vector<SweepRecord> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_csv: cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line) || line != "lambda,mse,sure")
        throw std::runtime_error("read_csv: missing or unexpected header in '" + path + "'");

    std::vector<SweepRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string lambda_s, mse_s, sure_s;
        if (!std::getline(ss, lambda_s, ',') || !std::getline(ss, mse_s, ','))
            throw std::runtime_error("read_csv: malformed row '" + line + "'");
        std::getline(ss, sure_s, ',');

        SweepRecord rec;
        rec.lambda = std::stod(lambda_s);
        if (!mse_s.empty()) rec.mse = std::stod(mse_s);
        if (!sure_s.empty()) rec.sure = std::stod(sure_s);
        records.push_back(rec);
    }
    return records;
}

} // namespace scadtv
