#pragma once

#include "tvtv/core.hpp"
#include "tvtv/io.hpp"
#include "tvtv/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tvtv::cli {

namespace fs = std::filesystem;

struct SimulateOptions {
    fs::path gt;
    fs::path csr;
    std::size_t block = 32;
    fs::path z_out;
    fs::path y_out;
};

struct FuseOptions {
    fs::path z;
    fs::path y;
    fs::path csr;
    std::size_t block = 32;
    fs::path out;
};

struct SolveOptions {
    fs::path w;
    fs::path z;
    fs::path y;
    fs::path csr;
    fs::path out;
    std::optional<fs::path> report;
    SolverConfig config;
};

struct EvalOptions {
    fs::path estimate;
    fs::path gt;
    double scale = 32.0;
    std::string method = "estimate";
    std::optional<fs::path> append;
};

struct PipelineOptions {
    std::optional<fs::path> gt;
    std::optional<fs::path> csr;
    bool synthetic = false;
    std::size_t rows = 64;
    std::size_t cols = 64;
    std::size_t bands = 8;
    std::size_t channels = 2;
    std::size_t rectangles = 12;
    std::uint64_t seed = 1;
    // Standard deviation of Gaussian noise added to the baseline W.
    double noise = 0.0;
    std::optional<fs::path> workdir;
    std::optional<fs::path> out;
    SolverConfig config;
};

struct PreviewOptions {
    fs::path input;
    std::size_t band = 0;
    fs::path out;
};

// Plain-text solver report: key=value lines with fixed keys.
std::string format_report(const SolveReport& report);

// Each command throws tvtv::Error on failure; `out` receives the
// human-readable summary.
void run_simulate(const SimulateOptions& opt, std::ostream& out);
void run_fuse(const FuseOptions& opt, std::ostream& out);
SolveReport run_solve(const SolveOptions& opt, std::ostream& out);
MetricsRow run_eval(const EvalOptions& opt, std::ostream& out);
std::vector<MetricsRow> run_pipeline(const PipelineOptions& opt, std::ostream& out);
void run_preview(const PreviewOptions& opt, std::ostream& out);

// Parses argv and dispatches; returns the process exit code. Errors are
// written to `err`.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace tvtv::cli
