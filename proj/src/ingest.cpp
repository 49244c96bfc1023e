#include "filmnet/ingest.hpp"

#include "filmnet/common.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <unordered_map>

namespace filmnet {

namespace {

constexpr const char* kCanonicalHeader = "movie_id\tyear\tregions";

std::string row_issue(std::size_t line_no, const std::string& what) {
    return "line " + std::to_string(line_no) + ": " + what;
}

} // namespace

std::vector<std::string> make_region_set(std::vector<std::string> raw) {
    std::vector<std::string> out;
    out.reserve(raw.size());
    for (std::string& code : raw) {
        if (code.empty()) continue;
        out.push_back(to_upper_ascii(std::move(code)));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

AliasMap::AliasMap(std::map<std::string, std::string> entries) : entries_(std::move(entries)) {
    for (const auto& [raw, canon] : entries_) {
        auto it = entries_.find(canon);
        if (it != entries_.end() && it->second != canon) {
            throw DataError("alias map is not idempotent: " + raw + " -> " + canon + " -> " +
                            it->second);
        }
    }
}

const std::string& AliasMap::canonical(const std::string& code) const {
    auto it = entries_.find(code);
    return it == entries_.end() ? code : it->second;
}

ParseResult parse_canonical(std::istream& in) {
    ParseResult result;
    std::string line;
    if (!std::getline(in, line) || line != kCanonicalHeader) {
        throw FormatError("line 1: expected canonical header '" +
                          std::string(kCanonicalHeader) + "'");
    }

    std::unordered_map<std::string, std::size_t> index_by_id;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        ++result.stats.data_rows;

        std::vector<std::string> fields = split(line, '\t');
        if (fields.size() != 3) {
            ++result.stats.bad_rows;
            result.stats.issues.push_back(
                row_issue(line_no, "expected 3 tab-separated fields, got " +
                                       std::to_string(fields.size())));
            continue;
        }
        if (fields[0].empty()) {
            ++result.stats.bad_rows;
            result.stats.issues.push_back(row_issue(line_no, "empty movie_id"));
            continue;
        }
        long long year = 0;
        if (!parse_int(fields[1], year)) {
            ++result.stats.bad_year_rows;
            result.stats.issues.push_back(
                row_issue(line_no, "unparseable year '" + fields[1] + "'"));
            continue;
        }
        std::vector<std::string> regions = make_region_set(split(fields[2], ','));
        if (regions.empty()) {
            ++result.stats.skipped_no_regions;
            continue;
        }

        auto it = index_by_id.find(fields[0]);
        if (it == index_by_id.end()) {
            index_by_id.emplace(fields[0], result.records.size());
            result.records.push_back(
                MovieRecord{fields[0], static_cast<int>(year), std::move(regions)});
            ++result.stats.emitted;
        } else {
            // Union the regions; the first row's year stands.
            MovieRecord& existing = result.records[it->second];
            existing.regions.insert(existing.regions.end(), regions.begin(), regions.end());
            existing.regions = make_region_set(std::move(existing.regions));
            ++result.stats.merged_rows;
            if (existing.year != static_cast<int>(year)) {
                ++result.stats.year_conflicts;
                result.stats.issues.push_back(row_issue(
                    line_no, "year " + fields[1] + " conflicts with " +
                                 std::to_string(existing.year) + " for movie " + fields[0]));
            }
        }
    }
    return result;
}

void write_canonical(std::ostream& out, const std::vector<MovieRecord>& records) {
    out << kCanonicalHeader << '\n';
    for (const MovieRecord& rec : records) {
        out << rec.movie_id << '\t' << rec.year << '\t' << join(rec.regions, ',') << '\n';
    }
}

namespace {

// Locate required columns in a tab-separated header; missing names are fatal.
std::vector<std::size_t> header_indices(const std::string& header_line,
                                        const std::vector<std::string>& wanted,
                                        const char* file_label) {
    std::vector<std::string> names = split(header_line, '\t');
    std::vector<std::size_t> indices;
    for (const std::string& name : wanted) {
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) {
            throw FormatError(std::string(file_label) + ": required column '" + name +
                              "' absent from header");
        }
        indices.push_back(static_cast<std::size_t>(it - names.begin()));
    }
    return indices;
}

} // namespace

ParseResult parse_imdb_pair(std::istream& basics, std::istream& akas) {
    ParseResult result;
    std::string line;

    if (!std::getline(basics, line)) throw FormatError("basics: empty input");
    std::vector<std::size_t> bcols =
        header_indices(line, {"tconst", "titleType", "startYear"}, "basics");

    struct Pending {
        std::string id;
        int year;
        std::vector<std::string> regions;
    };
    std::vector<Pending> pending;
    std::unordered_map<std::string, std::size_t> index_by_id;

    std::size_t line_no = 1;
    while (std::getline(basics, line)) {
        ++line_no;
        ++result.stats.data_rows;
        std::vector<std::string> fields = split(line, '\t');
        std::size_t needed = std::max({bcols[0], bcols[1], bcols[2]}) + 1;
        if (fields.size() < needed) {
            ++result.stats.bad_rows;
            result.stats.issues.push_back(row_issue(line_no, "basics row has too few fields"));
            continue;
        }
        if (fields[bcols[1]] != "movie") {
            ++result.stats.skipped_non_movie;
            continue;
        }
        long long year = 0;
        const std::string& year_field = fields[bcols[2]];
        if (year_field == "\\N" || !parse_int(year_field, year)) {
            ++result.stats.bad_year_rows;
            result.stats.issues.push_back(
                row_issue(line_no, "unparseable start year '" + year_field + "' for " + fields[bcols[0]]));
            continue;
        }
        if (index_by_id.count(fields[bcols[0]]) != 0) {
            ++result.stats.merged_rows;
            continue;
        }
        index_by_id.emplace(fields[bcols[0]], pending.size());
        pending.push_back(Pending{fields[bcols[0]], static_cast<int>(year), {}});
    }

    if (!std::getline(akas, line)) throw FormatError("akas: empty input");
    std::vector<std::size_t> acols = header_indices(line, {"titleId", "region"}, "akas");

    while (std::getline(akas, line)) {
        std::vector<std::string> fields = split(line, '\t');
        std::size_t needed = std::max(acols[0], acols[1]) + 1;
        if (fields.size() < needed) continue;
        const std::string& region = fields[acols[1]];
        if (region.empty() || region == "\\N") continue;
        auto it = index_by_id.find(fields[acols[0]]);
        if (it == index_by_id.end()) continue;
        pending[it->second].regions.push_back(region);
    }

    for (Pending& p : pending) {
        std::vector<std::string> regions = make_region_set(std::move(p.regions));
        if (regions.empty()) {
            ++result.stats.skipped_no_regions;
            continue;
        }
        result.records.push_back(MovieRecord{std::move(p.id), p.year, std::move(regions)});
        ++result.stats.emitted;
    }
    return result;
}

std::vector<MovieRecord> normalize_regions(std::vector<MovieRecord> records, const AliasMap& aliases) {
    for (MovieRecord& rec : records) {
        for (std::string& code : rec.regions) {
            code = aliases.canonical(code);
        }
        rec.regions = make_region_set(std::move(rec.regions));
    }
    return records;
}

AliasMap load_alias_file(std::istream& in) {
    std::map<std::string, std::string> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> fields = split(line, '\t');
        if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
            throw FormatError("alias file line " + std::to_string(line_no) +
                              ": expected 'raw\\tcanonical'");
        }
        entries[to_upper_ascii(fields[0])] = to_upper_ascii(fields[1]);
    }
    return AliasMap(std::move(entries));
}

} // namespace filmnet
