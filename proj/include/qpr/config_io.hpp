#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qpr/model.hpp"

namespace qpr {

// Options read from the optional config sections, one per CLI command.
struct SolveOptions {
    int order = 8;
    int grid = 0;  // 0 = automatic
};

struct DiagnoseOptions {
    int n_max = 5;
    std::int64_t budget = kDefaultLatticeBudget;
};

struct OracleOptions {
    int k_max = 5;
    std::int64_t tree_budget = 1'000'000;
};

struct AttractOptions {
    std::vector<double> offsets = {0.01, 0.05, 0.1};
    double t_end = 100.0;
    double dt = 0.0;  // 0 = automatic
    double threshold = 1e-6;
};

struct SweepOptions {
    std::vector<double> eps;
    std::vector<int> orders = {4, 8};
};

struct Config {
    Problem problem;
    SolveOptions solve;
    DiagnoseOptions diagnose;
    OracleOptions oracle;
    AttractOptions attract;
    SweepOptions sweep;
};

// Strict parser: unknown keys anywhere, wrong types, malformed modes, or a
// non-real forcing all throw ConfigError.
Config load_config(const std::filesystem::path& path);
Config parse_config(const std::string& json_text);

// 17-significant-digit decimal form, shortest faithful for round-tripping.
std::string fmt(double v);
std::string fmt(std::complex<double> v);  // "re im"
std::string fmt_mode(const Mode& nu);     // comma-separated components

// Writes via a temp file in the same directory plus an atomic rename.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

std::string serialize_series(const FourierSeries& s);  // lines: nu re im
FourierSeries deserialize_series(const std::string& text, int dim, bool declared_real);

}  // namespace qpr
