#include "filmnet/indicator.hpp"

#include "filmnet/common.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace filmnet {

std::optional<RhoPoint> rho_pair(const YearNetwork& net_prev, const YearNetwork& net_now,
                                 const std::string& x, const std::string& y) {
    if (x == y) throw std::invalid_argument("rho_pair requires two distinct countries");
    if (net_prev.year() + 1 != net_now.year()) {
        throw std::invalid_argument("rho_pair requires consecutive years");
    }
    long long dx = net_prev.diagonal(x);
    long long dy = net_prev.diagonal(y);
    if (dx == 0 || dy == 0) return std::nullopt;

    RhoPoint point;
    point.year = net_now.year();
    point.focal = x;
    point.partner = y;
    point.edge_now = net_now.edge(x, y);
    point.edge_prev = net_prev.edge(x, y);
    point.diag_prev_focal = dx;
    point.diag_prev_partner = dy;
    point.rho = static_cast<double>(point.edge_now - point.edge_prev) /
                (static_cast<double>(dx) * static_cast<double>(dy));
    return point;
}

namespace {

void check_consecutive(std::span<const YearNetwork> networks) {
    for (std::size_t i = 1; i < networks.size(); ++i) {
        if (networks[i].year() != networks[i - 1].year() + 1) {
            throw std::invalid_argument("networks must cover consecutive ascending years");
        }
    }
}

} // namespace

IndicatorSeries indicator_series(std::span<const YearNetwork> networks, const std::string& focal,
                                 const CountryList& partners) {
    check_consecutive(networks);
    IndicatorSeries series;
    series.focal = focal;

    bool seen = false;
    for (const YearNetwork& net : networks) {
        if (net.diagonal(focal) > 0) {
            seen = true;
            break;
        }
    }
    series.focal_absent = !seen;

    for (std::size_t i = 1; i < networks.size(); ++i) {
        const YearNetwork& prev = networks[i - 1];
        const YearNetwork& now = networks[i];
        double sum = 0.0;
        int defined = 0;
        for (const std::string& partner : partners.members) {
            if (partner == focal) continue;
            if (auto point = rho_pair(prev, now, focal, partner)) {
                sum += point->rho;
                ++defined;
            }
        }
        series.years.push_back(now.year());
        series.n_partners.push_back(defined);
        series.avg_rho.push_back(defined > 0 ? std::optional<double>(sum / defined)
                                             : std::nullopt);
        series.abs_change.push_back(now.diagonal(focal) - prev.diagonal(focal));
    }
    return series;
}

std::vector<RhoPoint> rho_details(std::span<const YearNetwork> networks, const std::string& focal,
                                  const CountryList& partners) {
    check_consecutive(networks);
    std::vector<std::string> sorted_partners;
    for (const std::string& partner : partners.members) {
        if (partner != focal) sorted_partners.push_back(partner);
    }
    std::sort(sorted_partners.begin(), sorted_partners.end());

    std::vector<RhoPoint> points;
    for (std::size_t i = 1; i < networks.size(); ++i) {
        for (const std::string& partner : sorted_partners) {
            if (auto point = rho_pair(networks[i - 1], networks[i], focal, partner)) {
                points.push_back(*point);
            }
        }
    }
    return points;
}

std::vector<std::optional<double>> percent_series(const IndicatorSeries& series) {
    std::vector<std::optional<double>> out;
    out.reserve(series.avg_rho.size());
    for (const auto& value : series.avg_rho) {
        out.push_back(value ? std::optional<double>(*value * 100.0) : std::nullopt);
    }
    return out;
}

void write_indicator_csv(std::ostream& out, std::span<const IndicatorSeries> series) {
    out << "focal,year,avg_rho,n_partners,abs_change,percent\n";
    for (const IndicatorSeries& s : series) {
        for (std::size_t i = 0; i < s.years.size(); ++i) {
            out << s.focal << ',' << s.years[i] << ',';
            if (s.avg_rho[i]) out << format_real(*s.avg_rho[i]);
            out << ',' << s.n_partners[i] << ',' << s.abs_change[i] << ',';
            if (s.avg_rho[i]) out << format_real(*s.avg_rho[i] * 100.0);
            out << '\n';
        }
    }
}

std::vector<IndicatorSeries> read_indicator_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "focal,year,avg_rho,n_partners,abs_change,percent") {
        throw FormatError("indicator table: unexpected header");
    }
    std::vector<IndicatorSeries> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> fields = split(line, ',');
        long long year = 0;
        long long n_partners = 0;
        long long abs_change = 0;
        if (fields.size() != 6 || fields[0].empty() || !parse_int(fields[1], year) ||
            !parse_int(fields[3], n_partners) || !parse_int(fields[4], abs_change)) {
            throw FormatError("indicator table line " + std::to_string(line_no) +
                              ": malformed row");
        }
        std::optional<double> avg_rho;
        if (!fields[2].empty()) {
            double value = 0.0;
            if (!parse_real(fields[2], value)) {
                throw FormatError("indicator table line " + std::to_string(line_no) +
                                  ": bad avg_rho");
            }
            avg_rho = value;
        }
        if (out.empty() || out.back().focal != fields[0]) {
            out.push_back(IndicatorSeries{});
            out.back().focal = fields[0];
        }
        IndicatorSeries& series = out.back();
        series.years.push_back(static_cast<int>(year));
        series.avg_rho.push_back(avg_rho);
        series.n_partners.push_back(static_cast<int>(n_partners));
        series.abs_change.push_back(abs_change);
    }
    return out;
}

void write_pair_detail_csv(std::ostream& out, std::span<const RhoPoint> points) {
    out << "focal,partner,year,edge_now,edge_prev,diag_prev_x,diag_prev_y,rho\n";
    for (const RhoPoint& p : points) {
        out << p.focal << ',' << p.partner << ',' << p.year << ',' << p.edge_now << ','
            << p.edge_prev << ',' << p.diag_prev_focal << ',' << p.diag_prev_partner << ','
            << format_real(p.rho) << '\n';
    }
}

std::map<std::string, std::map<int, std::vector<double>>> read_pair_rhos_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) ||
        line != "focal,partner,year,edge_now,edge_prev,diag_prev_x,diag_prev_y,rho") {
        throw FormatError("pair detail table: unexpected header");
    }
    std::map<std::string, std::map<int, std::vector<double>>> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> fields = split(line, ',');
        long long year = 0;
        double rho = 0.0;
        if (fields.size() != 8 || fields[0].empty() || !parse_int(fields[2], year) ||
            !parse_real(fields[7], rho)) {
            throw FormatError("pair detail table line " + std::to_string(line_no) +
                              ": malformed row");
        }
        out[fields[0]][static_cast<int>(year)].push_back(rho);
    }
    return out;
}

} // namespace filmnet
