#include "filmnet/synthgen.hpp"

#include "filmnet/common.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <random>
#include <stdexcept>

namespace filmnet {

namespace {

int code_width(int n_countries) {
    int width = 2;
    int limit = 100;
    while (n_countries > limit) {
        ++width;
        limit *= 10;
    }
    return width;
}

void validate(const SynthConfig& config) {
    if (config.n_countries < 2) throw std::invalid_argument("n_countries must be >= 2");
    if (config.year_from > config.year_to) throw std::invalid_argument("inverted year range");
    if (config.base_volume < 1) throw std::invalid_argument("base_volume must be >= 1");
    if (!(config.cross_prob >= 0.0 && config.cross_prob <= 1.0)) {
        throw std::invalid_argument("cross_prob must lie in [0, 1]");
    }
    if (config.shock_factor < 1.0) throw std::invalid_argument("shock_factor must be >= 1");
    if (config.shock_year.has_value() != config.shock_country.has_value()) {
        throw std::invalid_argument("shock_year and shock_country must be set together");
    }
    if (config.shock_year &&
        (*config.shock_year < config.year_from || *config.shock_year > config.year_to)) {
        throw std::invalid_argument("shock_year outside the years range");
    }
    if (config.shock_country) {
        bool known = false;
        for (int i = 0; i < config.n_countries; ++i) {
            if (synth_country_code(i, config.n_countries) == *config.shock_country) {
                known = true;
                break;
            }
        }
        if (!known) throw std::invalid_argument("shock_country is not a generated code");
    }
}

double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

std::string synth_country_code(int index, int n_countries) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "C%0*d", code_width(n_countries), index);
    return buf;
}

std::vector<MovieRecord> generate(const SynthConfig& config) {
    validate(config);
    std::mt19937_64 rng(config.seed);

    std::vector<std::string> codes;
    codes.reserve(static_cast<std::size_t>(config.n_countries));
    for (int i = 0; i < config.n_countries; ++i) {
        codes.push_back(synth_country_code(i, config.n_countries));
    }

    std::vector<MovieRecord> records;
    records.reserve(static_cast<std::size_t>(config.n_countries) *
                    static_cast<std::size_t>(config.year_to - config.year_from + 1) *
                    static_cast<std::size_t>(config.base_volume));

    for (int year = config.year_from; year <= config.year_to; ++year) {
        for (int home = 0; home < config.n_countries; ++home) {
            bool shocked = config.shock_year && year >= *config.shock_year &&
                           codes[static_cast<std::size_t>(home)] == *config.shock_country;
            double p = config.cross_prob * (shocked ? config.shock_factor : 1.0);
            p = std::clamp(p, 0.0, 1.0);
            for (int k = 0; k < config.base_volume; ++k) {
                std::vector<std::string> regions;
                regions.push_back(codes[static_cast<std::size_t>(home)]);
                for (int other = 0; other < config.n_countries; ++other) {
                    if (other == home) continue;
                    if (unit_uniform(rng) < p) {
                        regions.push_back(codes[static_cast<std::size_t>(other)]);
                    }
                }
                MovieRecord rec;
                rec.movie_id = codes[static_cast<std::size_t>(home)] + "-" +
                               std::to_string(year) + "-" + std::to_string(k);
                rec.year = year;
                rec.regions = make_region_set(std::move(regions));
                records.push_back(std::move(rec));
            }
        }
    }
    return records;
}

SynthConfig parse_synth_config(std::istream& in) {
    SynthConfig config;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&line_no](const std::string& what) -> void {
        throw FormatError("synth config line " + std::to_string(line_no) + ": " + what);
    };

    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = line;
        if (auto hash = trimmed.find('#'); hash != std::string::npos) trimmed.resize(hash);
        while (!trimmed.empty() && (trimmed.back() == ' ' || trimmed.back() == '\t')) {
            trimmed.pop_back();
        }
        while (!trimmed.empty() && (trimmed.front() == ' ' || trimmed.front() == '\t')) {
            trimmed.erase(trimmed.begin());
        }
        if (trimmed.empty()) continue;

        auto eq = trimmed.find('=');
        if (eq == std::string::npos) fail("expected key = value");
        auto strip = [](std::string s) {
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
            return s;
        };
        std::string key = strip(trimmed.substr(0, eq));
        std::string value = strip(trimmed.substr(eq + 1));
        long long ivalue = 0;
        double rvalue = 0.0;

        if (key == "n_countries") {
            if (!parse_int(value, ivalue)) fail("bad integer for n_countries");
            config.n_countries = static_cast<int>(ivalue);
        } else if (key == "year_from") {
            if (!parse_int(value, ivalue)) fail("bad integer for year_from");
            config.year_from = static_cast<int>(ivalue);
        } else if (key == "year_to") {
            if (!parse_int(value, ivalue)) fail("bad integer for year_to");
            config.year_to = static_cast<int>(ivalue);
        } else if (key == "years") {
            auto dots = value.find("..");
            long long from = 0;
            long long to = 0;
            if (dots == std::string::npos || !parse_int(value.substr(0, dots), from) ||
                !parse_int(value.substr(dots + 2), to)) {
                fail("years must be FROM..TO");
            }
            config.year_from = static_cast<int>(from);
            config.year_to = static_cast<int>(to);
        } else if (key == "base_volume") {
            if (!parse_int(value, ivalue)) fail("bad integer for base_volume");
            config.base_volume = static_cast<int>(ivalue);
        } else if (key == "cross_prob") {
            if (!parse_real(value, rvalue)) fail("bad real for cross_prob");
            config.cross_prob = rvalue;
        } else if (key == "shock_year") {
            if (!parse_int(value, ivalue)) fail("bad integer for shock_year");
            config.shock_year = static_cast<int>(ivalue);
        } else if (key == "shock_country") {
            if (value.empty()) fail("empty shock_country");
            config.shock_country = to_upper_ascii(value);
        } else if (key == "shock_factor") {
            if (!parse_real(value, rvalue)) fail("bad real for shock_factor");
            config.shock_factor = rvalue;
        } else if (key == "seed") {
            if (!parse_int(value, ivalue) || ivalue < 0) fail("bad integer for seed");
            config.seed = static_cast<std::uint64_t>(ivalue);
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    return config;
}

} // namespace filmnet
