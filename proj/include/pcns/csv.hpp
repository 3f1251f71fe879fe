#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "pcns/diagnostics.hpp"
#include "pcns/solver.hpp"

namespace pcns {

/// %.17g, so binary64 values survive a round trip.
std::string format_double(double v);

/// Writes a header then rows of doubles. Rows must match the header width.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    void row(const std::vector<double>& values);
    void flush();

private:
    std::ofstream os_;
    std::size_t width_;
};

/// Header and numeric rows of a CSV written by CsvWriter.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    /// Throws InputError for an unknown column.
    std::vector<double> column(const std::string& name) const;
};
CsvTable read_csv(const std::filesystem::path& path);

/// Streams diagnostics records as they are emitted by a run.
class DiagnosticsCsv : public RunObserver {
public:
    explicit DiagnosticsCsv(const std::filesystem::path& path);
    void on_record(const DiagnosticsRecord& r) override;
    void flush() override;

private:
    CsvWriter out_;
};

/// Streams the per-step energy samples (t, E, D, mass, min_rho, max_rho).
class EnergyCsv : public RunObserver {
public:
    explicit EnergyCsv(const std::filesystem::path& path);
    void on_energy(const EnergySample& e) override;
    void flush() override;

private:
    CsvWriter out_;
};

} // namespace pcns
