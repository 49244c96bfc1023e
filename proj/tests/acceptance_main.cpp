// Release-gate checks. Each check prints exactly one [PASS]/[FAIL] line (or
// [SKIP] for the optional real-corpus run); the process exits nonzero when
// any check fails. Budgets are wall-clock on the machine running the gate.

#include "filmnet/boxstats.hpp"
#include "filmnet/common.hpp"
#include "filmnet/conetwork.hpp"
#include "filmnet/indicator.hpp"
#include "filmnet/ingest.hpp"
#include "filmnet/pipeline.hpp"
#include "filmnet/ranktest.hpp"
#include "filmnet/synthgen.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace filmnet;
namespace fs = std::filesystem;

namespace {

struct CheckResult {
    bool ok = false;
    std::string detail;
};

int g_failures = 0;

template <typename Fn>
void run_check(const std::string& name, std::optional<double> budget_ms, Fn&& fn) {
    auto start = std::chrono::steady_clock::now();
    CheckResult result = fn();
    double elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    bool in_budget = !budget_ms || elapsed_ms < *budget_ms;
    bool pass = result.ok && in_budget;
    std::string detail = result.detail;
    if (result.ok && !in_budget) {
        detail += " [over budget of " + format_real(*budget_ms) + " ms]";
    }
    std::printf("[%s] %s: %s (%.1f ms)\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str(),
                elapsed_ms);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

bool nearly(double got, double want, double rel_tol) {
    return std::abs(got - want) <= rel_tol * std::max({std::abs(got), std::abs(want), 1.0});
}

// ---------------------------------------------------------------------------
// 1. One candidate year against 37 others: the exact two-sided p sits at the
//    2/38 floor, 0.0526 to four decimal places.

CheckResult check_exact_floor() {
    std::vector<double> rest(37);
    std::iota(rest.begin(), rest.end(), 1.0);
    RankTestResult result = mann_whitney_exact(std::vector<double>{100.0}, rest);
    double want = 2.0 / 38.0;
    bool value_ok = std::abs(result.p_two_sided - want) < 1e-15 &&
                    std::abs(result.p_two_sided - 0.0526) < 5e-5;
    return {value_ok, "two-sided p = " + format_real(result.p_two_sided) + " vs 2/38 = " +
                          format_real(want)};
}

// ---------------------------------------------------------------------------
// 2. The dynamic-programming tail counts agree with explicit enumeration of
//    every group assignment, for all sample sizes up to 6x6.

struct BruteTails {
    long long ge = 0;
    long long le = 0;
    long long total = 0;
};

BruteTails brute_force_tails(const std::vector<double>& sample1,
                             const std::vector<double>& sample2) {
    std::vector<double> combined(sample1.begin(), sample1.end());
    combined.insert(combined.end(), sample2.begin(), sample2.end());
    std::size_t n1 = sample1.size();

    double u_observed = 0.0;
    for (double a : sample1) {
        for (double b : sample2) {
            if (a > b) u_observed += 1.0;
        }
    }

    std::vector<bool> in_first(combined.size(), false);
    std::fill(in_first.begin(), in_first.begin() + static_cast<std::ptrdiff_t>(n1), true);
    std::sort(in_first.begin(), in_first.end());

    BruteTails tails;
    do {
        std::vector<double> group1;
        std::vector<double> group2;
        for (std::size_t i = 0; i < combined.size(); ++i) {
            (in_first[i] ? group1 : group2).push_back(combined[i]);
        }
        double u = 0.0;
        for (double a : group1) {
            for (double b : group2) {
                if (a > b) u += 1.0;
            }
        }
        if (u >= u_observed) ++tails.ge;
        if (u <= u_observed) ++tails.le;
        ++tails.total;
    } while (std::next_permutation(in_first.begin(), in_first.end()));
    return tails;
}

CheckResult check_brute_force_equivalence() {
    std::mt19937 rng(2026);
    std::uniform_real_distribution<double> value_dist(-10.0, 10.0);
    int inputs = 0;
    for (std::size_t n1 = 1; n1 <= 6; ++n1) {
        for (std::size_t n2 = 1; n2 <= 6; ++n2) {
            for (int rep = 0; rep < 14; ++rep) {
                std::vector<double> combined;
                std::set<double> seen;
                while (combined.size() < n1 + n2) {
                    double v = value_dist(rng);
                    if (seen.insert(v).second) combined.push_back(v);
                }
                std::vector<double> sample1(combined.begin(),
                                            combined.begin() + static_cast<std::ptrdiff_t>(n1));
                std::vector<double> sample2(combined.begin() + static_cast<std::ptrdiff_t>(n1),
                                            combined.end());

                RankTestResult exact = mann_whitney_exact(sample1, sample2);
                BruteTails tails = brute_force_tails(sample1, sample2);
                double p_one = static_cast<double>(tails.ge) / static_cast<double>(tails.total);
                double p_two = std::min(
                    1.0, 2.0 * static_cast<double>(std::min(tails.ge, tails.le)) /
                             static_cast<double>(tails.total));
                if (exact.p_one_sided != p_one || exact.p_two_sided != p_two) {
                    return {false, "mismatch at n1=" + std::to_string(n1) +
                                       ", n2=" + std::to_string(n2) + ": got p=(" +
                                       format_real(exact.p_one_sided) + ", " +
                                       format_real(exact.p_two_sided) + "), enumeration gives (" +
                                       format_real(p_one) + ", " + format_real(p_two) + ")"};
                }
                ++inputs;
            }
        }
    }
    return {true, std::to_string(inputs) + " random untied inputs across all sizes up to 6x6, "
                  "identical rationals"};
}

// ---------------------------------------------------------------------------
// 3. The network builder agrees with a brute-force membership-scan oracle.

CheckResult check_matrix_oracle() {
    const std::vector<std::string> pool{"AA", "BB", "CC", "DD", "EE", "FF", "GG", "HH"};
    std::mt19937 rng(4242);
    std::uniform_int_distribution<int> movie_count(0, 50);
    std::uniform_int_distribution<int> region_count(1, 4);

    for (int corpus = 0; corpus < 1000; ++corpus) {
        std::vector<MovieRecord> records;
        int movies = movie_count(rng);
        for (int m = 0; m < movies; ++m) {
            MovieRecord record;
            record.movie_id = "m" + std::to_string(m);
            record.year = 2001;
            std::vector<std::string> regions;
            std::sample(pool.begin(), pool.end(), std::back_inserter(regions),
                        region_count(rng), rng);
            record.regions = make_region_set(std::move(regions));
            records.push_back(std::move(record));
        }

        YearNetwork net = build_year_network(records, 2001);

        std::map<std::string, long long> diag;
        std::map<std::pair<std::string, std::string>, long long> edges;
        for (const MovieRecord& record : records) {
            for (std::size_t i = 0; i < record.regions.size(); ++i) {
                ++diag[record.regions[i]];
                for (std::size_t j = i + 1; j < record.regions.size(); ++j) {
                    ++edges[{record.regions[i], record.regions[j]}];
                }
            }
        }
        if (net.diagonals() != diag || net.pair_counts() != edges) {
            return {false, "corpus " + std::to_string(corpus) + " (" + std::to_string(movies) +
                               " movies) disagrees with the membership-scan oracle"};
        }
    }
    return {true, "1000 random corpora up to 50 movies over 8 countries, exact equality"};
}

// ---------------------------------------------------------------------------
// 4. Pairwise rate-of-change invariants: symmetry, zero numerator, count
//    scaling, and exclusion of zero-denominator pairs.

YearNetwork random_network(std::mt19937& rng, int year, const std::vector<std::string>& codes,
                           bool allow_zero_diag) {
    std::uniform_int_distribution<long long> diag_dist(allow_zero_diag ? 0 : 1, 30);
    YearNetwork net(year);
    std::vector<long long> diag(codes.size());
    for (std::size_t i = 0; i < codes.size(); ++i) {
        diag[i] = diag_dist(rng);
        net.set_diagonal(codes[i], diag[i]);
    }
    for (std::size_t i = 0; i < codes.size(); ++i) {
        for (std::size_t j = i + 1; j < codes.size(); ++j) {
            long long cap = std::min(diag[i], diag[j]);
            if (cap == 0) continue;
            net.set_edge(codes[i], codes[j],
                         std::uniform_int_distribution<long long>(0, cap)(rng));
        }
    }
    return net;
}

YearNetwork scaled_copy(const YearNetwork& net, long long c) {
    YearNetwork out(net.year());
    for (const auto& [country, v] : net.diagonals()) out.set_diagonal(country, c * v);
    for (const auto& [key, v] : net.pair_counts()) out.set_edge(key.first, key.second, c * v);
    return out;
}

CheckResult check_rho_invariants() {
    const std::vector<std::string> codes{"AA", "BB", "CC", "DD", "EE"};
    std::mt19937 rng(99);
    std::uniform_int_distribution<long long> scale_dist(2, 9);

    for (int iter = 0; iter < 200; ++iter) {
        YearNetwork prev = random_network(rng, 2000, codes, true);
        YearNetwork now = random_network(rng, 2001, codes, true);

        for (std::size_t i = 0; i < codes.size(); ++i) {
            for (std::size_t j = i + 1; j < codes.size(); ++j) {
                auto xy = rho_pair(prev, now, codes[i], codes[j]);
                auto yx = rho_pair(prev, now, codes[j], codes[i]);
                if (xy.has_value() != yx.has_value() || (xy && xy->rho != yx->rho)) {
                    return {false, "swapping the countries changed the result (iteration " +
                                       std::to_string(iter) + ")"};
                }

                bool either_prev_zero = prev.diagonal(codes[i]) == 0 ||
                                        prev.diagonal(codes[j]) == 0;
                if (either_prev_zero != !xy.has_value()) {
                    return {false, "zero-denominator pair was " +
                                       std::string(xy ? "not excluded" : "wrongly excluded") +
                                       " (iteration " + std::to_string(iter) + ")"};
                }
                if (!xy) continue;

                if (xy->edge_now == xy->edge_prev && xy->rho != 0.0) {
                    return {false, "flat edge count gave nonzero rho (iteration " +
                                       std::to_string(iter) + ")"};
                }

                long long c = scale_dist(rng);
                auto scaled = rho_pair(scaled_copy(prev, c), scaled_copy(now, c), codes[i],
                                       codes[j]);
                if (!scaled || !nearly(scaled->rho, xy->rho / static_cast<double>(c), 1e-12)) {
                    return {false, "scaling all counts by " + std::to_string(c) +
                                       " did not divide rho by it (iteration " +
                                       std::to_string(iter) + ")"};
                }
            }
        }

        // force a flat pair to pin the zero-numerator case explicitly
        YearNetwork flat_prev(2000);
        YearNetwork flat_now(2001);
        flat_prev.set_diagonal("AA", 5);
        flat_prev.set_diagonal("BB", 7);
        flat_prev.set_edge("AA", "BB", 3);
        flat_now.set_diagonal("AA", 9);
        flat_now.set_diagonal("BB", 2);
        flat_now.set_edge("AA", "BB", 3);
        auto flat = rho_pair(flat_prev, flat_now, "AA", "BB");
        if (!flat || flat->rho != 0.0) return {false, "constructed flat pair broke"};
    }
    return {true, "200 random network pairs over 5 countries, tolerance 1e-12"};
}

// ---------------------------------------------------------------------------
// 5. A synthetic cross-publication shock is flagged almost always, and a
//    shock-free corpus flags no year much beyond the test's own floor rate.

CheckResult check_shock_detection() {
    SynthConfig base;
    base.n_countries = 5;
    base.year_from = 1980;
    base.year_to = 2019;
    base.base_volume = 200;
    base.cross_prob = 0.05;

    int hits = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        SynthConfig config = base;
        config.shock_year = 2000;
        config.shock_country = "C02";
        config.shock_factor = 4.0;
        config.seed = seed;
        PipelineResult result = run_pipeline(generate(config), 1980, 2019, 0, "C02", 0.06);
        const auto& years = result.scan.significant_years;
        if (std::find(years.begin(), years.end(), 2000) != years.end()) ++hits;
    }

    // Null calibration for the same designated year: with two-sided flagging
    // each of the 39 testable years is hit at rate ~2/39 under no shock, so a
    // pre-specified year must stay within the doubled-alpha allowance. The
    // busiest year overall is reported for context but not gated: the maximum
    // over 39 exchangeable counts regularly exceeds a single year's bound.
    std::map<int, int> null_flags;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        SynthConfig config = base;
        config.seed = seed;
        PipelineResult result = run_pipeline(generate(config), 1980, 2019, 0, "C02", 0.06);
        for (int year : result.scan.significant_years) ++null_flags[year];
    }
    int designated = null_flags[2000];
    int busiest = 0;
    for (const auto& [year, count] : null_flags) busiest = std::max(busiest, count);

    bool ok = hits >= 95 && designated <= 11;
    return {ok, "shock year flagged in " + std::to_string(hits) +
                    "/100 corpora (needs >= 95); without a shock the same year is flagged " +
                    std::to_string(designated) + "/100 (needs <= 11; busiest year: " +
                    std::to_string(busiest) + "/100)"};
}

// ---------------------------------------------------------------------------
// 6. Two identical command-line runs produce byte-identical data files.

std::string slurp(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

int run_tool(const std::string& args) {
    std::string command = std::string(FILMNET_BIN_PATH) + " " + args + " >/dev/null 2>/dev/null";
    int status = std::system(command.c_str());
    if (status == -1 || !WIFEXITED(status)) return -1;
    return WEXITSTATUS(status);
}

CheckResult check_pipeline_determinism() {
    fs::path root = fs::temp_directory_path() /
                    ("filmnet_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    std::string corpus = (fs::path(FILMNET_FIXTURE_DIR) / "fixture_corpus.tsv").string();

    auto run_chain = [&](const std::string& tag) -> std::optional<fs::path> {
        fs::path base = root / tag;
        if (run_tool("build --input " + corpus + " --from 1980 --to 1985 --min-total 5 --quiet"
                     " --out " + (base / "net").string()) != 0) return std::nullopt;
        if (run_tool("indicator --matrix " + (base / "net").string() +
                     " --focal US --focal CN --quiet --out " + (base / "ind").string()) != 0) {
            return std::nullopt;
        }
        if (run_tool("scan --indicator " + (base / "ind").string() +
                     " --alpha 0.5 --quiet --out " + (base / "scan").string()) != 0) {
            return std::nullopt;
        }
        if (run_tool("report --scan " + (base / "scan").string() + " --quiet --out " +
                     (base / "rep").string()) != 0) {
            return std::nullopt;
        }
        return base;
    };

    auto first = run_chain("one");
    auto second = run_chain("two");
    if (!first || !second) return {false, "a pipeline stage exited nonzero"};

    const std::vector<std::string> files{
        "net/matrix.csv",    "net/totals.csv",  "net/countries.csv",
        "ind/indicator.csv", "ind/pairs.csv",   "scan/scan_US.json",
        "scan/scan_CN.json", "scan/box_US.csv", "scan/box_CN.csv",
        "rep/report.md",
    };
    for (const std::string& name : files) {
        std::string a = slurp(*first / name);
        if (a.empty()) return {false, name + " is missing or empty"};
        if (a != slurp(*second / name)) return {false, name + " differs between runs"};
    }
    fs::remove_all(root);
    return {true, std::to_string(files.size()) + " data files byte-identical across two runs"};
}

// ---------------------------------------------------------------------------
// 7. Box summaries match a direct transcription of the quartile/fence rules.

double reference_quantile(const std::vector<double>& sorted, double p) {
    double position = static_cast<double>(sorted.size() - 1) * p;
    std::size_t lower = static_cast<std::size_t>(position);
    std::size_t upper = std::min(lower + 1, sorted.size() - 1);
    double fraction = position - static_cast<double>(lower);
    return sorted[lower] + fraction * (sorted[upper] - sorted[lower]);
}

CheckResult check_box_oracle() {
    std::mt19937 rng(314);
    std::uniform_int_distribution<int> size_dist(1, 60);
    std::uniform_real_distribution<double> value_dist(-3.0, 3.0);
    std::bernoulli_distribution dup(0.25);

    for (int iter = 0; iter < 500; ++iter) {
        std::vector<double> values;
        int n = size_dist(rng);
        for (int i = 0; i < n; ++i) {
            if (!values.empty() && dup(rng)) {
                values.push_back(
                    values[std::uniform_int_distribution<std::size_t>(0, values.size() - 1)(rng)]);
            } else {
                values.push_back(value_dist(rng));
            }
        }

        BoxSummary got = box_summary(values, 1980);

        std::vector<double> sorted = values;
        std::sort(sorted.begin(), sorted.end());
        double q1 = reference_quantile(sorted, 0.25);
        double median = reference_quantile(sorted, 0.5);
        double q3 = reference_quantile(sorted, 0.75);
        double lower_fence = q1 - 1.5 * (q3 - q1);
        double upper_fence = q3 + 1.5 * (q3 - q1);
        std::vector<double> outliers;
        for (double v : sorted) {
            if (v < lower_fence || v > upper_fence) outliers.push_back(v);
        }

        bool ok = nearly(got.minimum, sorted.front(), 1e-12) &&
                  nearly(got.maximum, sorted.back(), 1e-12) && nearly(got.q1, q1, 1e-12) &&
                  nearly(got.median, median, 1e-12) && nearly(got.q3, q3, 1e-12) &&
                  nearly(got.lower_fence, lower_fence, 1e-12) &&
                  nearly(got.upper_fence, upper_fence, 1e-12) &&
                  got.outliers.size() == outliers.size();
        for (std::size_t i = 0; ok && i < outliers.size(); ++i) {
            ok = nearly(got.outliers[i], outliers[i], 1e-12);
        }
        if (!ok) {
            return {false, "summary diverged from the reference on input " +
                               std::to_string(iter) + " (n = " + std::to_string(n) + ")"};
        }
    }
    return {true, "500 random inputs up to 60 values, tolerance 1e-12"};
}

// ---------------------------------------------------------------------------
// 8. Optional: a user-supplied full title/registry dump pair builds the
//    1980-2017 networks inside five minutes.

void run_real_corpus_check() {
    const char* basics = std::getenv("FILMNET_IMDB_BASICS");
    const char* akas = std::getenv("FILMNET_IMDB_AKAS");
    if (basics == nullptr || akas == nullptr) {
        std::printf("[SKIP] full-dump build: set FILMNET_IMDB_BASICS and FILMNET_IMDB_AKAS "
                    "to point at a real title/registry dump pair\n");
        return;
    }
    run_check("full-dump build", 300000.0, [&]() -> CheckResult {
        fs::path out = fs::temp_directory_path() /
                       ("filmnet_acceptance_dump_" + std::to_string(::getpid()));
        fs::remove_all(out);
        int code = run_tool("build --imdb-basics " + std::string(basics) + " --imdb-akas " +
                            std::string(akas) +
                            " --from 1980 --to 2017 --min-total 1000 --quiet --out " +
                            out.string());
        if (code != 0) return {false, "build exited with " + std::to_string(code)};
        std::string matrix = slurp(out / "matrix.csv");
        bool ok = !matrix.empty() && matrix.rfind("year,country_a,country_b,count\n", 0) == 0 &&
                  matrix.size() > std::string("year,country_a,country_b,count\n").size();
        fs::remove_all(out);
        return {ok, ok ? "built 1980..2017 networks from the supplied dumps"
                       : "matrix.csv missing or empty"};
    });
}

} // namespace

int main() {
    run_check("exact rank test at the 38-year floor", 1.0, check_exact_floor);
    run_check("exact rank test equals brute-force enumeration", 10000.0,
              check_brute_force_equivalence);
    run_check("network builder equals membership-scan oracle", 5000.0, check_matrix_oracle);
    run_check("pairwise rate-of-change invariants", std::nullopt, check_rho_invariants);
    run_check("synthetic shock detection and null calibration", 60000.0, check_shock_detection);
    run_check("command-line pipeline determinism", std::nullopt, check_pipeline_determinism);
    run_check("box summary equals reference formulas", std::nullopt, check_box_oracle);
    run_real_corpus_check();

    if (g_failures != 0) {
        std::printf("%d check(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all checks passed\n");
    return 0;
}
