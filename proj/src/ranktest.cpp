#include "filmnet/ranktest.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace filmnet {

namespace {

constexpr int kExactCombinedLimit = 25;

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

void require_non_empty(std::span<const double> sample1, std::span<const double> sample2) {
    if (sample1.empty() || sample2.empty()) {
        throw std::invalid_argument("rank-sum test requires two non-empty samples");
    }
}

bool has_ties(std::span<const double> sample1, std::span<const double> sample2) {
    std::vector<double> all(sample1.begin(), sample1.end());
    all.insert(all.end(), sample2.begin(), sample2.end());
    std::sort(all.begin(), all.end());
    return std::adjacent_find(all.begin(), all.end()) != all.end();
}

} // namespace

std::vector<std::uint64_t> exact_u_distribution(int n1, int n2) {
    if (n1 < 0 || n2 < 0) throw std::invalid_argument("negative sample size");
    // Subset counts overflow 64 bits past C(64, 32); single-observation
    // samples stay at count 1 per U value and are safe at any size.
    if (std::min(n1, n2) > 1 && n1 + n2 > 64) {
        throw std::invalid_argument("combined sample too large for exact enumeration");
    }
    // c[m][u] = number of m-subsets of ranks with U statistic u, built by the
    // subset-count recursion c(m, n, u) = c(m-1, n, u-n) + c(m, n-1, u).
    std::vector<std::vector<std::uint64_t>> counts(static_cast<std::size_t>(n1) + 1);
    for (auto& row : counts) row = {1}; // n = 0 column: c(m, 0, 0) = 1

    for (int n = 1; n <= n2; ++n) {
        // Ascending m so counts[m-1] already holds c(m-1, n, .).
        for (int m = 1; m <= n1; ++m) {
            auto& row = counts[static_cast<std::size_t>(m)];
            std::vector<std::uint64_t> next(static_cast<std::size_t>(m) * n + 1, 0);
            for (std::size_t u = 0; u < next.size(); ++u) {
                std::uint64_t total = 0;
                if (u < row.size()) total += row[u]; // c(m, n-1, u)
                const auto& above = counts[static_cast<std::size_t>(m) - 1];
                if (u >= static_cast<std::size_t>(n) &&
                    u - static_cast<std::size_t>(n) < above.size()) {
                    total += above[u - static_cast<std::size_t>(n)]; // c(m-1, n, u-n)
                }
                next[u] = total;
            }
            row = std::move(next);
        }
    }
    return counts[static_cast<std::size_t>(n1)];
}

std::pair<std::vector<double>, std::vector<double>> midranks(std::span<const double> sample1,
                                                             std::span<const double> sample2) {
    struct Tagged {
        double value;
        std::size_t index; // < n1: sample1
    };
    std::vector<Tagged> all;
    all.reserve(sample1.size() + sample2.size());
    for (std::size_t i = 0; i < sample1.size(); ++i) all.push_back({sample1[i], i});
    for (std::size_t i = 0; i < sample2.size(); ++i) all.push_back({sample2[i], sample1.size() + i});
    std::sort(all.begin(), all.end(),
              [](const Tagged& a, const Tagged& b) { return a.value < b.value; });

    std::vector<double> ranks1(sample1.size());
    std::vector<double> ranks2(sample2.size());
    std::size_t i = 0;
    while (i < all.size()) {
        std::size_t j = i;
        while (j < all.size() && all[j].value == all[i].value) ++j;
        double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) {
            if (all[k].index < sample1.size()) {
                ranks1[all[k].index] = midrank;
            } else {
                ranks2[all[k].index - sample1.size()] = midrank;
            }
        }
        i = j;
    }
    return {std::move(ranks1), std::move(ranks2)};
}

bool exact_test_applicable(std::span<const double> sample1, std::span<const double> sample2) {
    if (sample1.empty() || sample2.empty()) return false;
    if (has_ties(sample1, sample2)) return false;
    std::size_t n1 = sample1.size();
    std::size_t n2 = sample2.size();
    return n1 + n2 <= kExactCombinedLimit || std::min(n1, n2) == 1;
}

RankTestResult mann_whitney_exact(std::span<const double> sample1,
                                  std::span<const double> sample2) {
    require_non_empty(sample1, sample2);
    if (has_ties(sample1, sample2)) {
        throw TiedSamplesError("tied values present: fall back to the normal approximation");
    }
    std::size_t n1 = sample1.size();
    std::size_t n2 = sample2.size();
    if (n1 + n2 > kExactCombinedLimit && std::min(n1, n2) != 1) {
        throw std::invalid_argument("combined sample too large for the exact method");
    }

    auto [ranks1, ranks2] = midranks(sample1, sample2);
    double rank_sum = std::accumulate(ranks1.begin(), ranks1.end(), 0.0);
    double u_real = rank_sum - static_cast<double>(n1) * (static_cast<double>(n1) + 1.0) / 2.0;
    auto u_obs = static_cast<std::uint64_t>(std::llround(u_real)); // integral: no ties

    std::vector<std::uint64_t> dist =
        exact_u_distribution(static_cast<int>(n1), static_cast<int>(n2));
    std::uint64_t total = std::accumulate(dist.begin(), dist.end(), std::uint64_t{0});
    std::uint64_t tail_ge = 0;
    for (std::size_t u = u_obs; u < dist.size(); ++u) tail_ge += dist[u];
    std::uint64_t point_mass = u_obs < dist.size() ? dist[u_obs] : 0;
    std::uint64_t tail_le = total - tail_ge + point_mass;

    RankTestResult result;
    result.u_statistic = u_real;
    result.n1 = static_cast<int>(n1);
    result.n2 = static_cast<int>(n2);
    result.method = TestMethod::exact;
    result.tie_correction_applied = false;
    result.p_one_sided = static_cast<double>(tail_ge) / static_cast<double>(total);
    double smaller_tail = static_cast<double>(std::min(tail_ge, tail_le)) /
                          static_cast<double>(total);
    result.p_two_sided = std::min(1.0, 2.0 * smaller_tail);
    return result;
}

RankTestResult mann_whitney_approx(std::span<const double> sample1,
                                   std::span<const double> sample2) {
    require_non_empty(sample1, sample2);
    auto n1 = static_cast<double>(sample1.size());
    auto n2 = static_cast<double>(sample2.size());
    double n = n1 + n2;
    if (n < 2) throw std::invalid_argument("need at least two values in total");

    auto [ranks1, ranks2] = midranks(sample1, sample2);
    double rank_sum = std::accumulate(ranks1.begin(), ranks1.end(), 0.0);
    double u = rank_sum - n1 * (n1 + 1.0) / 2.0;

    // Tie groups over the combined sample.
    std::vector<double> all(sample1.begin(), sample1.end());
    all.insert(all.end(), sample2.begin(), sample2.end());
    std::sort(all.begin(), all.end());
    double tie_term = 0.0;
    bool any_tie = false;
    std::size_t i = 0;
    while (i < all.size()) {
        std::size_t j = i;
        while (j < all.size() && all[j] == all[i]) ++j;
        auto t = static_cast<double>(j - i);
        if (t > 1.0) {
            any_tie = true;
            tie_term += t * t * t - t;
        }
        i = j;
    }

    double variance = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if (variance <= 0.0) {
        throw DegenerateDistributionError("all values identical: rank test is degenerate");
    }

    double mean = n1 * n2 / 2.0;
    double delta = u - mean;
    double corrected = delta > 0 ? std::max(0.0, delta - 0.5)
                                 : std::min(0.0, delta + 0.5);
    double z = corrected / std::sqrt(variance);

    RankTestResult result;
    result.u_statistic = u;
    result.n1 = static_cast<int>(sample1.size());
    result.n2 = static_cast<int>(sample2.size());
    result.method = TestMethod::normal_approx;
    result.tie_correction_applied = any_tie;
    result.p_one_sided = normal_sf(z);
    result.p_two_sided = std::min(1.0, 2.0 * normal_sf(std::abs(z)));
    return result;
}

RankTestResult mann_whitney_auto(std::span<const double> sample1,
                                 std::span<const double> sample2) {
    if (exact_test_applicable(sample1, sample2)) {
        return mann_whitney_exact(sample1, sample2);
    }
    return mann_whitney_approx(sample1, sample2);
}

ScanReport scan_years(const IndicatorSeries& series, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("alpha must lie in (0, 1]");
    }
    std::vector<int> years;
    std::vector<double> values;
    for (std::size_t i = 0; i < series.years.size(); ++i) {
        if (series.avg_rho[i]) {
            years.push_back(series.years[i]);
            values.push_back(*series.avg_rho[i]);
        }
    }
    if (values.size() < 3) {
        throw DataError("scan needs at least 3 defined avg_rho points, got " +
                        std::to_string(values.size()));
    }

    ScanReport report;
    report.focal = series.focal;
    report.alpha = alpha;
    report.p_floor = 2.0 / static_cast<double>(values.size());

    for (std::size_t i = 0; i < values.size(); ++i) {
        std::vector<double> rest;
        rest.reserve(values.size() - 1);
        for (std::size_t j = 0; j < values.size(); ++j) {
            if (j != i) rest.push_back(values[j]);
        }
        std::span<const double> one(&values[i], 1);

        ScanEntry entry;
        entry.year = years[i];
        entry.avg_rho = values[i];
        try {
            RankTestResult r = mann_whitney_auto(one, rest);
            entry.u = r.u_statistic;
            entry.p_one_sided = r.p_one_sided;
            entry.p_two_sided = r.p_two_sided;
            entry.method = r.method == TestMethod::exact ? ScanMethod::exact
                                                         : ScanMethod::normal_approx;
        } catch (const DegenerateDistributionError&) {
            entry.u = static_cast<double>(rest.size()) / 2.0;
            entry.p_one_sided = 1.0;
            entry.p_two_sided = 1.0;
            entry.method = ScanMethod::degenerate;
        }
        if (entry.p_two_sided < alpha) report.significant_years.push_back(entry.year);
        report.entries.push_back(entry);
    }
    return report;
}

namespace {

const char* scan_method_name(ScanMethod method) {
    switch (method) {
    case ScanMethod::exact: return "exact";
    case ScanMethod::normal_approx: return "normal_approx";
    case ScanMethod::degenerate: return "degenerate";
    }
    return "unknown";
}

ScanMethod scan_method_from_name(const std::string& name) {
    if (name == "exact") return ScanMethod::exact;
    if (name == "normal_approx") return ScanMethod::normal_approx;
    if (name == "degenerate") return ScanMethod::degenerate;
    throw FormatError("scan report: unknown method '" + name + "'");
}

} // namespace

void write_scan_json(std::ostream& out, const ScanReport& report) {
    nlohmann::json doc;
    doc["focal"] = report.focal;
    doc["alpha"] = report.alpha;
    doc["p_floor"] = report.p_floor;
    doc["entries"] = nlohmann::json::array();
    for (const ScanEntry& entry : report.entries) {
        doc["entries"].push_back({{"year", entry.year},
                                  {"avg_rho", entry.avg_rho},
                                  {"u", entry.u},
                                  {"p_one_sided", entry.p_one_sided},
                                  {"p_two_sided", entry.p_two_sided},
                                  {"method", scan_method_name(entry.method)}});
    }
    doc["significant_years"] = report.significant_years;
    out << doc.dump(2) << '\n';
}

ScanReport read_scan_json(std::istream& in) {
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("scan report: invalid JSON: ") + e.what());
    }
    try {
        ScanReport report;
        report.focal = doc.at("focal").get<std::string>();
        report.alpha = doc.at("alpha").get<double>();
        report.p_floor = doc.at("p_floor").get<double>();
        for (const auto& item : doc.at("entries")) {
            ScanEntry entry;
            entry.year = item.at("year").get<int>();
            entry.avg_rho = item.at("avg_rho").get<double>();
            entry.u = item.at("u").get<double>();
            entry.p_one_sided = item.at("p_one_sided").get<double>();
            entry.p_two_sided = item.at("p_two_sided").get<double>();
            entry.method = scan_method_from_name(item.at("method").get<std::string>());
            report.entries.push_back(entry);
        }
        report.significant_years = doc.at("significant_years").get<std::vector<int>>();
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("scan report: missing or mistyped field: ") + e.what());
    }
}

} // namespace filmnet
