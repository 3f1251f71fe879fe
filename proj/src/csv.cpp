#include "pcns/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "pcns/errors.hpp"

namespace pcns {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : width_(header.size()) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    os_.open(path, std::ios::trunc);
    if (!os_) throw Error("cannot open for writing: " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
    os_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != width_) throw Error("CSV row width does not match header");
    for (std::size_t i = 0; i < values.size(); ++i) os_ << (i ? "," : "") << format_double(values[i]);
    os_ << '\n';
}

void CsvWriter::flush() { os_.flush(); }

std::vector<double> CsvTable::column(const std::string& name) const {
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] != name) continue;
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r[c]);
        return out;
    }
    throw InputError("no column named " + name);
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw InputError("cannot open " + path.string());
    CsvTable t;
    std::string line;
    if (!std::getline(is, line)) throw InputError("empty CSV: " + path.string());
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) t.header.push_back(cell);
    }
    long lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<double> r;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            char* end = nullptr;
            r.push_back(std::strtod(cell.c_str(), &end));
            if (end == cell.c_str()) throw InputError(path.string() + ": line " + std::to_string(lineno) + ": bad number");
        }
        if (r.size() != t.header.size())
            throw InputError(path.string() + ": line " + std::to_string(lineno) + ": wrong number of columns");
        t.rows.push_back(std::move(r));
    }
    return t;
}

DiagnosticsCsv::DiagnosticsCsv(const std::filesystem::path& path) : out_(path, diagnostics_columns()) {}

void DiagnosticsCsv::on_record(const DiagnosticsRecord& r) { out_.row(record_values(r)); }

void DiagnosticsCsv::flush() { out_.flush(); }

EnergyCsv::EnergyCsv(const std::filesystem::path& path)
    : out_(path, {"t", "E", "D", "mass", "min_rho", "max_rho"}) {}

void EnergyCsv::on_energy(const EnergySample& e) { out_.row({e.t, e.E, e.D, e.mass, e.min_rho, e.max_rho}); }

void EnergyCsv::flush() { out_.flush(); }

} // namespace pcns
