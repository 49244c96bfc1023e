#pragma once

#include "filmnet/common.hpp"
#include "filmnet/indicator.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace filmnet {

/// Exact rank-sum test refused the input because of tied values.
class TiedSamplesError : public DataError {
public:
    using DataError::DataError;
};

/// All values identical: the rank statistic carries no information.
class DegenerateDistributionError : public DataError {
public:
    using DataError::DataError;
};

enum class TestMethod { exact, normal_approx };

struct RankTestResult {
    double u_statistic = 0.0; // U of sample 1
    int n1 = 0;
    int n2 = 0;
    double p_one_sided = 1.0; // P(U >= u_obs): alternative "sample1 shifted up"
    double p_two_sided = 1.0; // smaller tail doubled (point mass included), capped at 1
    TestMethod method = TestMethod::exact;
    bool tie_correction_applied = false;
};

// Null distribution of U for sample sizes (n1, n2): count of rank subsets per
// U value, indexed 0..n1*n2. Counts sum to C(n1+n2, n1).
std::vector<std::uint64_t> exact_u_distribution(int n1, int n2);

// Midranks of the combined sample, returned as (ranks_sample1, ranks_sample2).
// Ties share their average rank.
std::pair<std::vector<double>, std::vector<double>> midranks(std::span<const double> sample1,
                                                             std::span<const double> sample2);

// The exact method handles untied samples up to a combined size of 25, plus
// single-observation samples of any size (their null is uniform over ranks).
bool exact_test_applicable(std::span<const double> sample1, std::span<const double> sample2);

RankTestResult mann_whitney_exact(std::span<const double> sample1,
                                  std::span<const double> sample2);

// Normal approximation with continuity correction toward the mean (clamped at
// zero) and midrank tie correction in the variance.
RankTestResult mann_whitney_approx(std::span<const double> sample1,
                                   std::span<const double> sample2);

// Exact when applicable, approximation otherwise.
RankTestResult mann_whitney_auto(std::span<const double> sample1,
                                 std::span<const double> sample2);

enum class ScanMethod { exact, normal_approx, degenerate };

struct ScanEntry {
    int year = 0;
    double avg_rho = 0.0;
    double u = 0.0;
    double p_one_sided = 1.0;
    double p_two_sided = 1.0;
    ScanMethod method = ScanMethod::exact;
};

struct ScanReport {
    std::string focal;
    double alpha = 0.0;
    double p_floor = 0.0; // 2/N for N defined years: smallest reachable two-sided p
    std::vector<ScanEntry> entries;
    std::vector<int> significant_years;
};

// Tests each defined avg_rho value against all the others (one-vs-rest
// rank-sum). Years whose combined sample is all-identical are reported with
// p = 1 under ScanMethod::degenerate.
ScanReport scan_years(const IndicatorSeries& series, double alpha);

void write_scan_json(std::ostream& out, const ScanReport& report);

ScanReport read_scan_json(std::istream& in);

} // namespace filmnet
