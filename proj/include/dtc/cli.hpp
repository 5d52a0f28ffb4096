#pragma once

// Command-line front end: sweeps, frontiers and verification reports as CSV
// or JSON.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dtc/rate.hpp"

namespace dtc::cli {

inline constexpr const char* kVersion = "dirtytape 0.1.0";

enum ExitStatus : int { kOk = 0, kUsage = 1, kVerifyFailed = 2, kIoError = 3 };

enum class Format { Csv, Json };

struct RunConfig {
    std::string command;   // single-user | mac-dtc | jdpt | verify

    std::optional<double> p;        // single point; overrides the sweep
    double p_lo = 1e-2;
    double p_hi = 1e5;
    int points = 120;

    double p1 = 200.0;
    double p2 = 100.0;
    std::optional<double> ps;       // required for mac-dtc and jdpt
    double pz = 1.0;

    std::optional<int> grid;        // time-share points or beta points per axis
    double alpha_lo = -1.0;
    double alpha_hi = 2.0;
    int alpha_points = 301;
    int r1_points = 1001;

    Unit unit = Unit::Bits;
    Format format = Format::Csv;
    std::string out;                // empty: stdout
    std::uint64_t seed = 20240521;
    int trials = 1000;
    int triple_trials = 10000;
    int mc_samples = 100000;
};

using Cell = std::variant<std::string, double, long long>;

struct Table {
    std::vector<std::pair<std::string, Cell>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// %.12g; the only float formatting used in emitted files.
std::string format_number(double v);

std::string render(const Table& t, Format f);

/// Fills a config from a JSON object whose keys are the long flag names.
/// Throws ParameterError on unknown keys or bad values.
RunConfig config_from_json(const std::string& command, const std::string& json_text);

/// Checks every parameter against the library domains.
void validate(const RunConfig& cfg);

Table single_user_table(const RunConfig& cfg);
Table mac_dtc_table(const RunConfig& cfg);
Table jdpt_table(const RunConfig& cfg);
/// `all_pass` reports whether every check passed.
Table verify_table(const RunConfig& cfg, bool& all_pass);

/// Full program: argument parsing, dispatch, output. Returns the exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dtc::cli
