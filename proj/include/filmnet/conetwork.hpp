#pragma once

#include "filmnet/ingest.hpp"

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace filmnet {

/// Symmetric country co-occurrence counts for one year, stored sparsely:
/// a diagonal map (movies per country) plus an unordered-pair map keyed with
/// the lexicographically smaller code first.
class YearNetwork {
public:
    explicit YearNetwork(int year) : year_(year) {}

    int year() const { return year_; }

    // regions must be a sorted unique set (MovieRecord invariant).
    void add_movie(const std::vector<std::string>& regions);

    void set_diagonal(const std::string& country, long long count);
    void set_edge(const std::string& a, const std::string& b, long long count);

    long long diagonal(const std::string& country) const;
    long long edge(const std::string& a, const std::string& b) const;

    // Countries with a nonzero diagonal, lexicographic order.
    std::vector<std::string> countries() const;
    bool empty() const { return diag_.empty(); }

    const std::map<std::string, long long>& diagonals() const { return diag_; }
    const std::map<std::pair<std::string, std::string>, long long>& pair_counts() const {
        return pairs_;
    }

private:
    int year_;
    std::map<std::string, long long> diag_;
    std::map<std::pair<std::string, std::string>, long long> pairs_;
};

/// Countries whose whole-window movie total exceeds a threshold, ordered by
/// descending total then lexicographic.
struct CountryList {
    std::vector<std::string> members;
    long long threshold = 0;
    std::map<std::string, long long> totals; // all observed countries
};

YearNetwork build_year_network(std::span<const MovieRecord> records, int year);

// One network per year in [year_from, year_to]; gap years yield empty networks.
std::vector<YearNetwork> build_all_years(std::span<const MovieRecord> records, int year_from,
                                         int year_to);

std::map<std::string, long long> country_totals(std::span<const YearNetwork> networks);

CountryList filter_country_list(const std::map<std::string, long long>& totals,
                                long long threshold);

// Matrix dump: CSV "year,country_a,country_b,count", rows sorted by
// (year, country_a, country_b); diagonal rows have country_a == country_b;
// each off-diagonal pair appears once with country_a < country_b.
void write_matrix_csv(std::ostream& out, std::span<const YearNetwork> networks);

// Inverse of write_matrix_csv for a known year range; years absent from the
// file come back as empty networks.
std::vector<YearNetwork> read_matrix_csv(std::istream& in, int year_from, int year_to);

// "country,total", lexicographic order, all observed countries.
void write_totals_csv(std::ostream& out, const std::map<std::string, long long>& totals);

// "country,total" in member order (descending total, lexicographic tiebreak).
void write_country_list_csv(std::ostream& out, const CountryList& list);

CountryList read_country_list_csv(std::istream& in);

} // namespace filmnet
