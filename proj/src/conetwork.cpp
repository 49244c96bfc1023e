#include "filmnet/conetwork.hpp"

#include "filmnet/common.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace filmnet {

void YearNetwork::add_movie(const std::vector<std::string>& regions) {
    for (std::size_t i = 0; i < regions.size(); ++i) {
        ++diag_[regions[i]];
        for (std::size_t j = i + 1; j < regions.size(); ++j) {
            ++pairs_[{regions[i], regions[j]}];
        }
    }
}

void YearNetwork::set_diagonal(const std::string& country, long long count) {
    if (count < 0) throw std::invalid_argument("negative diagonal count");
    if (count == 0) {
        diag_.erase(country);
    } else {
        diag_[country] = count;
    }
}

void YearNetwork::set_edge(const std::string& a, const std::string& b, long long count) {
    if (a == b) throw std::invalid_argument("set_edge requires two distinct countries");
    if (count < 0) throw std::invalid_argument("negative edge count");
    auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    if (count == 0) {
        pairs_.erase(key);
    } else {
        pairs_[key] = count;
    }
}

long long YearNetwork::diagonal(const std::string& country) const {
    auto it = diag_.find(country);
    return it == diag_.end() ? 0 : it->second;
}

long long YearNetwork::edge(const std::string& a, const std::string& b) const {
    if (a == b) throw std::invalid_argument("edge requires two distinct countries");
    auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    auto it = pairs_.find(key);
    return it == pairs_.end() ? 0 : it->second;
}

std::vector<std::string> YearNetwork::countries() const {
    std::vector<std::string> out;
    out.reserve(diag_.size());
    for (const auto& [country, count] : diag_) out.push_back(country);
    return out;
}

YearNetwork build_year_network(std::span<const MovieRecord> records, int year) {
    YearNetwork net(year);
    for (const MovieRecord& rec : records) {
        if (rec.year == year) net.add_movie(rec.regions);
    }
    return net;
}

std::vector<YearNetwork> build_all_years(std::span<const MovieRecord> records, int year_from,
                                         int year_to) {
    if (year_from > year_to) {
        throw std::invalid_argument("inverted year range: " + std::to_string(year_from) + ".." +
                                    std::to_string(year_to));
    }
    std::vector<YearNetwork> nets;
    nets.reserve(static_cast<std::size_t>(year_to - year_from + 1));
    for (int year = year_from; year <= year_to; ++year) {
        nets.emplace_back(year);
    }
    for (const MovieRecord& rec : records) {
        if (rec.year < year_from || rec.year > year_to) continue;
        nets[static_cast<std::size_t>(rec.year - year_from)].add_movie(rec.regions);
    }
    return nets;
}

std::map<std::string, long long> country_totals(std::span<const YearNetwork> networks) {
    std::map<std::string, long long> totals;
    for (const YearNetwork& net : networks) {
        for (const auto& [country, count] : net.diagonals()) {
            totals[country] += count;
        }
    }
    return totals;
}

CountryList filter_country_list(const std::map<std::string, long long>& totals,
                                long long threshold) {
    if (threshold < 0) throw std::invalid_argument("negative country-list threshold");
    CountryList list;
    list.threshold = threshold;
    list.totals = totals;
    for (const auto& [country, total] : totals) {
        if (total > threshold) list.members.push_back(country);
    }
    std::sort(list.members.begin(), list.members.end(),
              [&totals](const std::string& a, const std::string& b) {
                  long long ta = totals.at(a);
                  long long tb = totals.at(b);
                  if (ta != tb) return ta > tb;
                  return a < b;
              });
    return list;
}

void write_matrix_csv(std::ostream& out, std::span<const YearNetwork> networks) {
    out << "year,country_a,country_b,count\n";
    for (const YearNetwork& net : networks) {
        // Diagonal and pair rows interleaved in (country_a, country_b) order:
        // for each country, its diagonal row precedes its pair rows.
        auto diag_it = net.diagonals().begin();
        auto pair_it = net.pair_counts().begin();
        while (diag_it != net.diagonals().end() || pair_it != net.pair_counts().end()) {
            bool take_diag;
            if (diag_it == net.diagonals().end()) {
                take_diag = false;
            } else if (pair_it == net.pair_counts().end()) {
                take_diag = true;
            } else {
                take_diag = std::make_pair(diag_it->first, diag_it->first) < pair_it->first;
            }
            if (take_diag) {
                out << net.year() << ',' << diag_it->first << ',' << diag_it->first << ','
                    << diag_it->second << '\n';
                ++diag_it;
            } else {
                out << net.year() << ',' << pair_it->first.first << ',' << pair_it->first.second
                    << ',' << pair_it->second << '\n';
                ++pair_it;
            }
        }
    }
}

std::vector<YearNetwork> read_matrix_csv(std::istream& in, int year_from, int year_to) {
    if (year_from > year_to) throw std::invalid_argument("inverted year range");
    std::string line;
    if (!std::getline(in, line) || line != "year,country_a,country_b,count") {
        throw FormatError("matrix dump: expected header 'year,country_a,country_b,count'");
    }
    std::vector<YearNetwork> nets;
    for (int year = year_from; year <= year_to; ++year) nets.emplace_back(year);

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> fields = split(line, ',');
        long long year = 0;
        long long count = 0;
        if (fields.size() != 4 || !parse_int(fields[0], year) || !parse_int(fields[3], count) ||
            count < 0) {
            throw FormatError("matrix dump line " + std::to_string(line_no) + ": malformed row");
        }
        if (year < year_from || year > year_to) {
            throw FormatError("matrix dump line " + std::to_string(line_no) + ": year " +
                              fields[0] + " outside range " + std::to_string(year_from) + ".." +
                              std::to_string(year_to));
        }
        YearNetwork& net = nets[static_cast<std::size_t>(year - year_from)];
        if (fields[1] == fields[2]) {
            net.set_diagonal(fields[1], count);
        } else if (fields[1] < fields[2]) {
            net.set_edge(fields[1], fields[2], count);
        } else {
            throw FormatError("matrix dump line " + std::to_string(line_no) +
                              ": off-diagonal row must have country_a < country_b");
        }
    }
    return nets;
}

void write_totals_csv(std::ostream& out, const std::map<std::string, long long>& totals) {
    out << "country,total\n";
    for (const auto& [country, total] : totals) {
        out << country << ',' << total << '\n';
    }
}

void write_country_list_csv(std::ostream& out, const CountryList& list) {
    out << "country,total\n";
    for (const std::string& member : list.members) {
        out << member << ',' << list.totals.at(member) << '\n';
    }
}

CountryList read_country_list_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "country,total") {
        throw FormatError("country list: expected header 'country,total'");
    }
    CountryList list;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> fields = split(line, ',');
        long long total = 0;
        if (fields.size() != 2 || fields[0].empty() || !parse_int(fields[1], total)) {
            throw FormatError("country list line " + std::to_string(line_no) + ": malformed row");
        }
        list.members.push_back(fields[0]);
        list.totals[fields[0]] = total;
    }
    return list;
}

} // namespace filmnet
