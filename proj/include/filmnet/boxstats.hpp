#pragma once

#include <iosfwd>
#include <span>
#include <vector>

namespace filmnet {

/// Five-number summary with Tukey fences for one year's rho distribution.
/// Quartiles use linear interpolation at position (n-1)*p on the sorted
/// values; outliers lie strictly outside [lower_fence, upper_fence].
struct BoxSummary {
    int year = 0;
    double minimum = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double maximum = 0.0;
    double lower_fence = 0.0;
    double upper_fence = 0.0;
    std::vector<double> outliers;
};

BoxSummary box_summary(std::span<const double> values, int year);

// "year,min,q1,median,q3,max,lower_fence,upper_fence,n_outliers"
void write_box_csv(std::ostream& out, std::span<const BoxSummary> summaries);

} // namespace filmnet
