#include "filmnet/boxstats.hpp"

#include "filmnet/common.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace filmnet {

namespace {

double interpolated_quantile(const std::vector<double>& sorted, double p) {
    double position = static_cast<double>(sorted.size() - 1) * p;
    auto lower = static_cast<std::size_t>(position);
    double fraction = position - static_cast<double>(lower);
    if (lower + 1 >= sorted.size()) return sorted.back();
    return sorted[lower] + fraction * (sorted[lower + 1] - sorted[lower]);
}

} // namespace

BoxSummary box_summary(std::span<const double> values, int year) {
    if (values.empty()) throw std::invalid_argument("box_summary requires a non-empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    BoxSummary box;
    box.year = year;
    box.minimum = sorted.front();
    box.maximum = sorted.back();
    box.q1 = interpolated_quantile(sorted, 0.25);
    box.median = interpolated_quantile(sorted, 0.5);
    box.q3 = interpolated_quantile(sorted, 0.75);
    double iqr = box.q3 - box.q1;
    box.lower_fence = box.q1 - 1.5 * iqr;
    box.upper_fence = box.q3 + 1.5 * iqr;
    for (double v : sorted) {
        if (v < box.lower_fence || v > box.upper_fence) box.outliers.push_back(v);
    }
    return box;
}

void write_box_csv(std::ostream& out, std::span<const BoxSummary> summaries) {
    out << "year,min,q1,median,q3,max,lower_fence,upper_fence,n_outliers\n";
    for (const BoxSummary& box : summaries) {
        out << box.year << ',' << format_real(box.minimum) << ',' << format_real(box.q1) << ','
            << format_real(box.median) << ',' << format_real(box.q3) << ','
            << format_real(box.maximum) << ',' << format_real(box.lower_fence) << ','
            << format_real(box.upper_fence) << ',' << box.outliers.size() << '\n';
    }
}

} // namespace filmnet
