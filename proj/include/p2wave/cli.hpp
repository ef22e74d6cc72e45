#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "p2wave/filtering.hpp"

namespace p2wave::cli {

// Exit-code contract.
enum ExitCode : int { kOk = 0, kValidation = 2, kToleranceBreach = 3, kNumerical = 4, kIo = 5 };

struct RunConfig {
    std::string command;
    int n = 19;
    std::vector<int> n_ladder;  // empty: the command's default ladder
    std::optional<double> t;    // empty: the subspace's default horizon
    std::string spec = "bigrid";
    double lambda_a_plus = 5.0;
    double lambda_o_minus = 20.0;
    double lambda_o_plus = 50.0;
    double alpha = 0.5;
    std::string data = "sin";  // named data set or a JSON coefficient file
    std::string out = "out";
    std::uint64_t seed = 1;
    int fine_grid = 4096;
    int ref_modes = 2048;

    void validate() const;
};

std::vector<std::string> commands();

// Flat JSON, the same layout as the manifest written by every run.
std::string to_json(const RunConfig& cfg);
RunConfig from_json(const std::string& text);

SubspaceSpec make_spec(const RunConfig& cfg, const std::string& kind);
std::vector<int> ladder_or(const RunConfig& cfg, std::vector<int> fallback);
// Horizon for a spec: the configured T, else 4 (full, nonresonant), 1.2 T* (truncation), 2.5 (bi-grid).
double horizon(const RunConfig& cfg, const SubspaceSpec& spec);

// Runs one resolved config; returns the exit code and reports errors on stderr.
int dispatch(const RunConfig& cfg);
// Parses argv (flags override --config) and dispatches.
int run(int argc, char** argv);

// Writes text to path through a temporary file and a rename.
void write_atomic(const std::string& path, const std::string& text);
std::string format_double(double x);

}  // namespace p2wave::cli
