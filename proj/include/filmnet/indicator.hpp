#pragma once

#include "filmnet/conetwork.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace filmnet {

/// One pairwise rate-of-change observation: the year-over-year edge-count
/// delta between the focal country and one partner, divided by the product
/// of their previous-year publication counts. Undefined (never emitted) when
/// either previous-year diagonal is zero.
struct RhoPoint {
    int year = 0; // the later year of the i-1 -> i step
    std::string focal;
    std::string partner;
    long long edge_now = 0;
    long long edge_prev = 0;
    long long diag_prev_focal = 0;
    long long diag_prev_partner = 0;
    double rho = 0.0;
};

struct IndicatorSeries {
    std::string focal;
    std::vector<int> years;                     // second window year onward
    std::vector<std::optional<double>> avg_rho; // present iff n_partners > 0
    std::vector<int> n_partners;
    std::vector<long long> abs_change;          // focal diagonal delta
    bool focal_absent = false;                  // focal had no movies in any year
};

std::optional<RhoPoint> rho_pair(const YearNetwork& net_prev, const YearNetwork& net_now,
                                 const std::string& x, const std::string& y);

// networks must be consecutive ascending years. Partners are the list members
// minus the focal country itself; the focal may sit outside the list.
IndicatorSeries indicator_series(std::span<const YearNetwork> networks, const std::string& focal,
                                 const CountryList& partners);

// All defined RhoPoints behind an indicator series, ordered (year, partner).
std::vector<RhoPoint> rho_details(std::span<const YearNetwork> networks, const std::string& focal,
                                  const CountryList& partners);

std::vector<std::optional<double>> percent_series(const IndicatorSeries& series);

// "focal,year,avg_rho,n_partners,abs_change,percent"; absent reals are empty fields.
void write_indicator_csv(std::ostream& out, std::span<const IndicatorSeries> series);

std::vector<IndicatorSeries> read_indicator_csv(std::istream& in);

// "focal,partner,year,edge_now,edge_prev,diag_prev_x,diag_prev_y,rho",
// rows ordered (focal, year, partner).
void write_pair_detail_csv(std::ostream& out, std::span<const RhoPoint> points);

// focal -> year -> partner rho values, in file order.
std::map<std::string, std::map<int, std::vector<double>>> read_pair_rhos_csv(std::istream& in);

} // namespace filmnet
