#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace filmnet {

/// One deduplicated movie: opaque id, release year, set of publication regions.
/// Regions are kept sorted, unique, uppercase ASCII, never empty strings.
struct MovieRecord {
    std::string movie_id;
    int year = 0;
    std::vector<std::string> regions;

    friend bool operator==(const MovieRecord&, const MovieRecord&) = default;
};

// Uppercase, drop empty tokens, sort, dedupe.
std::vector<std::string> make_region_set(std::vector<std::string> raw);

/// Raw-to-canonical region code mapping. Construction rejects non-idempotent
/// maps (a canonical code appearing as a key must map to itself).
class AliasMap {
public:
    AliasMap() = default;
    explicit AliasMap(std::map<std::string, std::string> entries);

    const std::string& canonical(const std::string& code) const;
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

private:
    std::map<std::string, std::string> entries_;
};

struct ParseStats {
    std::size_t data_rows = 0;          // rows after the header (basics rows in adapter mode)
    std::size_t emitted = 0;
    std::size_t merged_rows = 0;        // duplicate-id rows folded into an earlier record
    std::size_t skipped_no_regions = 0;
    std::size_t bad_rows = 0;           // wrong field count
    std::size_t bad_year_rows = 0;      // missing or non-integer year
    std::size_t skipped_non_movie = 0;  // adapter: title type other than "movie"
    std::size_t year_conflicts = 0;     // duplicate id merged with a different year
    std::vector<std::string> issues;    // per-row reports with line numbers
};

struct ParseResult {
    std::vector<MovieRecord> records;
    ParseStats stats;
};

// Canonical corpus format: UTF-8, LF, tab-separated, header exactly
// "movie_id\tyear\tregions"; regions comma-separated. Duplicate ids are
// merged by unioning regions; the first surviving row's year wins.
ParseResult parse_canonical(std::istream& in);

void write_canonical(std::ostream& out, const std::vector<MovieRecord>& records);

// Adapter for the published IMDB dump shape: tab-separated with named header
// columns and "\N" for missing values. Keeps basics rows whose title type is
// "movie" and whose start year parses; regions joined from akas by title id.
ParseResult parse_imdb_pair(std::istream& basics, std::istream& akas);

std::vector<MovieRecord> normalize_regions(std::vector<MovieRecord> records, const AliasMap& aliases);

// Two-column TSV raw\tcanonical, no header.
AliasMap load_alias_file(std::istream& in);

} // namespace filmnet
