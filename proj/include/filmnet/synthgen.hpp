#pragma once

#include "filmnet/ingest.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace filmnet {

/// Synthetic corpus parameters. Each country publishes base_volume home
/// movies per year; every movie picks up each foreign country independently
/// with probability cross_prob. From shock_year onward the shock country's
/// movies use cross_prob * shock_factor (clamped to [0, 1]).
struct SynthConfig {
    int n_countries = 5;
    int year_from = 1980;
    int year_to = 2017;
    int base_volume = 100;
    double cross_prob = 0.05;
    std::optional<int> shock_year;
    std::optional<std::string> shock_country;
    double shock_factor = 1.0;
    std::uint64_t seed = 0;
};

// Country code for index i: "C00", "C01", ... (wider when needed).
std::string synth_country_code(int index, int n_countries);

// Deterministic for a fixed seed: mt19937_64 draws mapped to [0,1) via the
// top 53 bits, consumed in (year, country, movie, partner) order.
std::vector<MovieRecord> generate(const SynthConfig& config);

// Flat key=value lines with '#' comments; keys match the config field names,
// plus a years = FROM..TO shorthand for the range.
SynthConfig parse_synth_config(std::istream& in);

} // namespace filmnet
