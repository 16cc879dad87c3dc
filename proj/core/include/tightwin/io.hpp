#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tightwin/solver.hpp"
#include "tightwin/spectral.hpp"
#include "tightwin/types.hpp"

namespace tightwin {

// All writers emit numbers at full round-trip precision so identical inputs
// produce byte-identical files. Readers validate against the documented
// schemas and throw SchemaError on malformed content, IoError on missing or
// unreadable files.

// Window JSON: {"K": int, "a": int, "M": int, "p": real|null,
//               "lambda": real|null, "coeffs": [real x K]}
void write_window_json(const std::filesystem::path& path, const Window& w);

/// Reads a window file. The lattice length L is not part of the format; it
/// defaults to 4K (rounded up to a multiple of a if needed) unless given.
Window read_window_json(const std::filesystem::path& path,
                        std::optional<int> L = std::nullopt);

// Bare CSV export: one coefficient per line, no header.
void write_window_csv(const std::filesystem::path& path, const Window& w);
Eigen::VectorXd read_window_csv(const std::filesystem::path& path);

// Spectrum CSV: freq_cycles_per_sample,freq_nyquist_normalized,magnitude_db
void write_spectrum_csv(const std::filesystem::path& path, const SpectrumSamples& s);
SpectrumSamples read_spectrum_csv(const std::filesystem::path& path);

// Metrics JSON: {"p": real, "concentration": real, "sidelobe_energy": real,
//                "is_tight": bool, "lambda": real}
struct WindowMetrics {
    double p = 0.0;
    double concentration = 0.0;
    double sidelobe_energy = 0.0;
    bool is_tight = false;
    double lambda = 0.0;
};
void write_metrics_json(const std::filesystem::path& path, const WindowMetrics& m);
WindowMetrics read_metrics_json(const std::filesystem::path& path);

// Trace CSV: iter,grad_norm,objective with iter = 0 the start point.
void write_trace_csv(const std::filesystem::path& path, const SolverTrace& t);
SolverTrace read_trace_csv(const std::filesystem::path& path);

// Sweep summary CSV: p_numerator,iterations,status,concentration,sidelobe_energy
struct SummaryRow {
    int p_numerator = 0;
    int iterations = 0;
    std::string status;
    double concentration = 0.0;
    double sidelobe_energy = 0.0;
};
void write_summary_csv(const std::filesystem::path& path,
                       const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path);

/// Full-precision decimal formatting used by every CSV writer ("%.17g").
std::string format_double(double v);

}  // namespace tightwin
