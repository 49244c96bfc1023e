#pragma once

#include "filmnet/boxstats.hpp"
#include "filmnet/conetwork.hpp"
#include "filmnet/indicator.hpp"
#include "filmnet/ranktest.hpp"
#include "filmnet/synthgen.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace filmnet {

struct GlobalOptions {
    std::filesystem::path out_dir;
    bool quiet = false;
};

struct BuildOptions {
    std::filesystem::path input;       // canonical corpus TSV
    std::filesystem::path imdb_basics; // adapter mode: both imdb files set, input empty
    std::filesystem::path imdb_akas;
    std::filesystem::path aliases;     // optional
    int year_from = 1980;
    int year_to = 2017;
    long long min_total = 1000;
};

struct IndicatorOptions {
    std::filesystem::path matrix_dir;
    std::vector<std::string> focals;
};

struct ScanOptions {
    std::filesystem::path indicator_dir;
    double alpha = 0.06;
};

struct BoxstatsOptions {
    std::filesystem::path indicator_dir;
};

struct SynthOptions {
    std::optional<std::filesystem::path> config_file;
    std::optional<int> n_countries;
    std::optional<int> year_from;
    std::optional<int> year_to;
    std::optional<int> base_volume;
    std::optional<double> cross_prob;
    std::optional<int> shock_year;
    std::optional<std::string> shock_country;
    std::optional<double> shock_factor;
    std::optional<std::uint64_t> seed;
};

struct ReportOptions {
    std::filesystem::path scan_dir;
    std::optional<std::filesystem::path> indicator_dir; // default: scan manifest
};

// Each command writes its outputs plus manifest.json under global.out_dir.
// Errors surface as exceptions: UsageError for bad option combinations,
// FormatError/DataError for input problems.
void cmd_build(const BuildOptions& options, const GlobalOptions& global);
void cmd_indicator(const IndicatorOptions& options, const GlobalOptions& global);
void cmd_scan(const ScanOptions& options, const GlobalOptions& global);
void cmd_boxstats(const BoxstatsOptions& options, const GlobalOptions& global);
void cmd_synth(const SynthOptions& options, const GlobalOptions& global);
void cmd_report(const ReportOptions& options, const GlobalOptions& global);

/// In-memory equivalent of build -> indicator -> scan for one focal country.
struct PipelineResult {
    std::vector<YearNetwork> networks;
    CountryList list;
    IndicatorSeries series;
    std::vector<RhoPoint> details;
    ScanReport scan;
};

PipelineResult run_pipeline(std::span<const MovieRecord> records, int year_from, int year_to,
                            long long min_total, const std::string& focal, double alpha);

} // namespace filmnet
