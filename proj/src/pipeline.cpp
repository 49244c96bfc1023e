#include "filmnet/pipeline.hpp"

#include "filmnet/common.hpp"
#include "filmnet/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace filmnet {

namespace {

void note(const GlobalOptions& global, const std::string& message) {
    if (!global.quiet) std::cerr << "filmnet: " << message << '\n';
}

void warn(const GlobalOptions& global, const std::string& message) {
    if (!global.quiet) std::cerr << "filmnet: warning: " << message << '\n';
}

// Per-row parse issues can number in the tens of thousands on a full dump;
// show a sample and summarize the rest.
void report_issues(const GlobalOptions& global, const std::vector<std::string>& issues) {
    constexpr std::size_t kMaxShown = 20;
    for (std::size_t i = 0; i < issues.size() && i < kMaxShown; ++i) warn(global, issues[i]);
    if (issues.size() > kMaxShown) {
        note(global, "... and " + std::to_string(issues.size() - kMaxShown) + " more row issues");
    }
}

void ensure_out_dir(const GlobalOptions& global) {
    if (global.out_dir.empty()) throw UsageError("--out DIR is required");
    std::error_code ec;
    std::filesystem::create_directories(global.out_dir, ec);
    if (ec) {
        throw DataError("cannot create output directory '" + global.out_dir.string() +
                        "': " + ec.message());
    }
}

std::ifstream open_input(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw DataError("cannot open '" + file.string() + "'");
    return in;
}

void write_output(const GlobalOptions& global, const std::string& name,
                  const std::ostringstream& content) {
    write_text_file(global.out_dir / name, content.str());
}

void finish_manifest(const GlobalOptions& global, RunManifest manifest) {
    manifest.timestamp_utc = utc_timestamp_now();
    write_manifest_json(global.out_dir, manifest);
}

std::vector<std::string> unique_upper(const std::vector<std::string>& raw) {
    std::vector<std::string> out;
    for (const std::string& item : raw) {
        std::string code = to_upper_ascii(item);
        if (code.empty()) continue;
        if (std::find(out.begin(), out.end(), code) == out.end()) out.push_back(code);
    }
    std::sort(out.begin(), out.end());
    return out;
}

int manifest_year(const RunManifest& manifest, const std::string& key) {
    auto it = manifest.resolved_options.find(key);
    long long value = 0;
    if (it == manifest.resolved_options.end() || !parse_int(it->second, value)) {
        throw DataError("manifest for '" + manifest.subcommand + "' lacks a usable '" + key +
                        "' option");
    }
    return static_cast<int>(value);
}

} // namespace

void cmd_build(const BuildOptions& options, const GlobalOptions& global) {
    if (options.year_from > options.year_to) throw UsageError("--from must not exceed --to");
    if (options.min_total < 0) throw UsageError("--min-total must be non-negative");
    const bool have_input = !options.input.empty();
    const bool have_basics = !options.imdb_basics.empty();
    const bool have_akas = !options.imdb_akas.empty();
    if (have_basics != have_akas) {
        throw UsageError("--imdb-basics and --imdb-akas must be given together");
    }
    if (have_input == have_basics) {
        throw UsageError("pass exactly one corpus: --input FILE, or --imdb-basics/--imdb-akas");
    }

    ParseResult parsed;
    if (have_input) {
        std::ifstream in = open_input(options.input);
        parsed = parse_canonical(in);
        report_issues(global, parsed.stats.issues);
        note(global, "read " + std::to_string(parsed.stats.data_rows) + " rows: " +
                         std::to_string(parsed.stats.emitted) + " movies, " +
                         std::to_string(parsed.stats.merged_rows) + " duplicates merged, " +
                         std::to_string(parsed.stats.skipped_no_regions) + " without regions, " +
                         std::to_string(parsed.stats.bad_rows + parsed.stats.bad_year_rows) +
                         " rejected");
    } else {
        std::ifstream basics = open_input(options.imdb_basics);
        std::ifstream akas = open_input(options.imdb_akas);
        parsed = parse_imdb_pair(basics, akas);
        report_issues(global, parsed.stats.issues);
        note(global, "read " + std::to_string(parsed.stats.data_rows) + " title rows: " +
                         std::to_string(parsed.stats.emitted) + " movies kept, " +
                         std::to_string(parsed.stats.skipped_non_movie) + " non-movie titles, " +
                         std::to_string(parsed.stats.bad_year_rows) + " without a usable year, " +
                         std::to_string(parsed.stats.skipped_no_regions) + " without regions");
    }

    if (!options.aliases.empty()) {
        std::ifstream in = open_input(options.aliases);
        AliasMap aliases = load_alias_file(in);
        parsed.records = normalize_regions(std::move(parsed.records), aliases);
        note(global, "applied " + std::to_string(aliases.size()) + " region aliases");
    }

    std::vector<YearNetwork> networks =
        build_all_years(parsed.records, options.year_from, options.year_to);
    std::map<std::string, long long> totals = country_totals(networks);
    CountryList list = filter_country_list(totals, options.min_total);
    note(global, std::to_string(list.members.size()) + " of " + std::to_string(totals.size()) +
                     " countries publish more than " + std::to_string(options.min_total) +
                     " movies in " + std::to_string(options.year_from) + ".." +
                     std::to_string(options.year_to));

    ensure_out_dir(global);
    std::ostringstream matrix;
    write_matrix_csv(matrix, networks);
    write_output(global, "matrix.csv", matrix);
    std::ostringstream totals_csv;
    write_totals_csv(totals_csv, totals);
    write_output(global, "totals.csv", totals_csv);
    std::ostringstream countries_csv;
    write_country_list_csv(countries_csv, list);
    write_output(global, "countries.csv", countries_csv);

    RunManifest manifest;
    manifest.subcommand = "build";
    manifest.resolved_options["from"] = std::to_string(options.year_from);
    manifest.resolved_options["to"] = std::to_string(options.year_to);
    manifest.resolved_options["min_total"] = std::to_string(options.min_total);
    if (have_input) {
        manifest.resolved_options["input"] = options.input.string();
        manifest.input_digests[options.input.string()] = fnv1a64_hex_of_file(options.input);
    } else {
        manifest.resolved_options["imdb_basics"] = options.imdb_basics.string();
        manifest.resolved_options["imdb_akas"] = options.imdb_akas.string();
        manifest.input_digests[options.imdb_basics.string()] =
            fnv1a64_hex_of_file(options.imdb_basics);
        manifest.input_digests[options.imdb_akas.string()] =
            fnv1a64_hex_of_file(options.imdb_akas);
    }
    if (!options.aliases.empty()) {
        manifest.resolved_options["aliases"] = options.aliases.string();
        manifest.input_digests[options.aliases.string()] = fnv1a64_hex_of_file(options.aliases);
    }
    finish_manifest(global, manifest);
    note(global, "wrote matrix.csv, totals.csv, countries.csv to " + global.out_dir.string());
}

void cmd_indicator(const IndicatorOptions& options, const GlobalOptions& global) {
    std::vector<std::string> focals = unique_upper(options.focals);
    if (focals.empty()) throw UsageError("at least one --focal COUNTRY is required");

    RunManifest source = read_manifest_json(options.matrix_dir);
    int year_from = manifest_year(source, "from");
    int year_to = manifest_year(source, "to");

    const auto matrix_path = options.matrix_dir / "matrix.csv";
    const auto countries_path = options.matrix_dir / "countries.csv";
    std::ifstream matrix_in = open_input(matrix_path);
    std::vector<YearNetwork> networks = read_matrix_csv(matrix_in, year_from, year_to);
    std::ifstream countries_in = open_input(countries_path);
    CountryList list = read_country_list_csv(countries_in);

    std::set<std::string> known(list.members.begin(), list.members.end());
    for (const YearNetwork& net : networks) {
        for (const auto& [country, count] : net.diagonals()) known.insert(country);
    }
    for (const std::string& focal : focals) {
        if (known.count(focal) != 0) continue;
        std::string available;
        std::size_t shown = 0;
        for (const std::string& code : known) {
            if (shown++ == 20) {
                available += ", ...";
                break;
            }
            if (!available.empty()) available += ", ";
            available += code;
        }
        throw DataError("unknown focal country '" + focal + "'; known countries: " + available);
    }

    std::vector<IndicatorSeries> all_series;
    std::vector<RhoPoint> all_points;
    for (const std::string& focal : focals) {
        IndicatorSeries series = indicator_series(networks, focal, list);
        if (series.focal_absent) {
            warn(global, "focal country " + focal +
                             " has no movies in the window; writing an empty series");
            continue;
        }
        std::vector<RhoPoint> points = rho_details(networks, focal, list);
        all_points.insert(all_points.end(), points.begin(), points.end());
        all_series.push_back(std::move(series));
    }

    ensure_out_dir(global);
    std::ostringstream indicator_csv;
    write_indicator_csv(indicator_csv, all_series);
    write_output(global, "indicator.csv", indicator_csv);
    std::ostringstream pairs_csv;
    write_pair_detail_csv(pairs_csv, all_points);
    write_output(global, "pairs.csv", pairs_csv);

    RunManifest manifest;
    manifest.subcommand = "indicator";
    manifest.resolved_options["matrix"] = options.matrix_dir.string();
    manifest.resolved_options["focals"] = join(focals, ',');
    manifest.resolved_options["from"] = std::to_string(year_from);
    manifest.resolved_options["to"] = std::to_string(year_to);
    manifest.input_digests[matrix_path.string()] = fnv1a64_hex_of_file(matrix_path);
    manifest.input_digests[countries_path.string()] = fnv1a64_hex_of_file(countries_path);
    finish_manifest(global, manifest);
    note(global, "wrote indicator.csv and pairs.csv for " + std::to_string(all_series.size()) +
                     " focal countries to " + global.out_dir.string());
}

namespace {

std::vector<BoxSummary> focal_box_summaries(const std::map<int, std::vector<double>>& by_year) {
    std::vector<BoxSummary> summaries;
    for (const auto& [year, values] : by_year) {
        if (!values.empty()) summaries.push_back(box_summary(values, year));
    }
    return summaries;
}

} // namespace

void cmd_scan(const ScanOptions& options, const GlobalOptions& global) {
    if (!(options.alpha > 0.0 && options.alpha <= 1.0)) {
        throw UsageError("--alpha must lie in (0, 1]");
    }
    const auto indicator_path = options.indicator_dir / "indicator.csv";
    const auto pairs_path = options.indicator_dir / "pairs.csv";
    std::ifstream indicator_in = open_input(indicator_path);
    std::vector<IndicatorSeries> all_series = read_indicator_csv(indicator_in);
    if (all_series.empty()) {
        throw DataError("no indicator series in '" + indicator_path.string() + "'");
    }
    std::ifstream pairs_in = open_input(pairs_path);
    auto rhos_by_focal = read_pair_rhos_csv(pairs_in);

    ensure_out_dir(global);
    std::string findings;
    for (const IndicatorSeries& series : all_series) {
        std::size_t defined = 0;
        for (const auto& value : series.avg_rho) {
            if (value) ++defined;
        }
        if (defined < 3) {
            throw DataError("insufficient data for focal country '" + series.focal + "': " +
                            std::to_string(defined) + " defined years (need at least 3)");
        }
        ScanReport report = scan_years(series, options.alpha);

        std::ostringstream scan_json;
        write_scan_json(scan_json, report);
        write_output(global, "scan_" + series.focal + ".json", scan_json);

        std::vector<BoxSummary> summaries = focal_box_summaries(rhos_by_focal[series.focal]);
        std::ostringstream box_csv;
        write_box_csv(box_csv, summaries);
        write_output(global, "box_" + series.focal + ".csv", box_csv);

        for (int year : report.significant_years) {
            for (const ScanEntry& entry : report.entries) {
                if (entry.year == year) {
                    findings += series.focal + "\t" + std::to_string(year) + "\t" +
                                format_real(entry.p_two_sided) + "\n";
                    break;
                }
            }
        }
        note(global, series.focal + ": " + std::to_string(defined) + " defined years, p floor " +
                         format_real(report.p_floor) + ", " +
                         std::to_string(report.significant_years.size()) + " significant");
    }
    std::cout << findings;

    RunManifest manifest;
    manifest.subcommand = "scan";
    manifest.resolved_options["indicator"] = options.indicator_dir.string();
    manifest.resolved_options["alpha"] = format_real(options.alpha);
    manifest.input_digests[indicator_path.string()] = fnv1a64_hex_of_file(indicator_path);
    manifest.input_digests[pairs_path.string()] = fnv1a64_hex_of_file(pairs_path);
    finish_manifest(global, manifest);
}

void cmd_boxstats(const BoxstatsOptions& options, const GlobalOptions& global) {
    const auto pairs_path = options.indicator_dir / "pairs.csv";
    std::ifstream pairs_in = open_input(pairs_path);
    auto rhos_by_focal = read_pair_rhos_csv(pairs_in);
    if (rhos_by_focal.empty()) {
        warn(global, "no pair observations in '" + pairs_path.string() + "'");
    }

    ensure_out_dir(global);
    for (const auto& [focal, by_year] : rhos_by_focal) {
        std::ostringstream box_csv;
        write_box_csv(box_csv, focal_box_summaries(by_year));
        write_output(global, "box_" + focal + ".csv", box_csv);
    }

    RunManifest manifest;
    manifest.subcommand = "boxstats";
    manifest.resolved_options["indicator"] = options.indicator_dir.string();
    manifest.input_digests[pairs_path.string()] = fnv1a64_hex_of_file(pairs_path);
    finish_manifest(global, manifest);
    note(global, "wrote box summaries for " + std::to_string(rhos_by_focal.size()) +
                     " focal countries to " + global.out_dir.string());
}

void cmd_synth(const SynthOptions& options, const GlobalOptions& global) {
    SynthConfig config;
    if (options.config_file) {
        std::ifstream in = open_input(*options.config_file);
        config = parse_synth_config(in);
    }
    if (options.n_countries) config.n_countries = *options.n_countries;
    if (options.year_from) config.year_from = *options.year_from;
    if (options.year_to) config.year_to = *options.year_to;
    if (options.base_volume) config.base_volume = *options.base_volume;
    if (options.cross_prob) config.cross_prob = *options.cross_prob;
    if (options.shock_year) config.shock_year = *options.shock_year;
    if (options.shock_country) config.shock_country = to_upper_ascii(*options.shock_country);
    if (options.shock_factor) config.shock_factor = *options.shock_factor;
    if (options.seed) config.seed = *options.seed;

    std::vector<MovieRecord> records = generate(config);

    ensure_out_dir(global);
    std::ostringstream corpus;
    write_canonical(corpus, records);
    write_output(global, "corpus.tsv", corpus);

    RunManifest manifest;
    manifest.subcommand = "synth";
    manifest.resolved_options["n_countries"] = std::to_string(config.n_countries);
    manifest.resolved_options["years"] =
        std::to_string(config.year_from) + ".." + std::to_string(config.year_to);
    manifest.resolved_options["base_volume"] = std::to_string(config.base_volume);
    manifest.resolved_options["cross_prob"] = format_real(config.cross_prob);
    if (config.shock_year) {
        manifest.resolved_options["shock_year"] = std::to_string(*config.shock_year);
        manifest.resolved_options["shock_country"] = *config.shock_country;
        manifest.resolved_options["shock_factor"] = format_real(config.shock_factor);
    }
    manifest.resolved_options["seed"] = std::to_string(config.seed);
    if (options.config_file) {
        manifest.resolved_options["config"] = options.config_file->string();
        manifest.input_digests[options.config_file->string()] =
            fnv1a64_hex_of_file(*options.config_file);
    }
    finish_manifest(global, manifest);
    note(global, "generated " + std::to_string(records.size()) + " movies (seed " +
                     std::to_string(config.seed) + ") into " +
                     (global.out_dir / "corpus.tsv").string());
}

namespace {

struct FocalDigest {
    std::string focal;
    ScanReport scan;
    const IndicatorSeries* series = nullptr; // may stay null if the table lacks the focal

    // Significant year with the smallest two-sided p (earliest on ties).
    std::optional<ScanEntry> top_significant() const {
        std::optional<ScanEntry> best;
        for (const ScanEntry& entry : scan.entries) {
            bool significant = std::find(scan.significant_years.begin(),
                                         scan.significant_years.end(),
                                         entry.year) != scan.significant_years.end();
            if (!significant) continue;
            if (!best || entry.p_two_sided < best->p_two_sided) best = entry;
        }
        return best;
    }
};

void append_series_lines(std::ostringstream& body, const IndicatorSeries& series) {
    std::optional<std::size_t> peak;
    std::optional<std::size_t> rise;
    std::optional<std::size_t> fall;
    for (std::size_t i = 0; i < series.years.size(); ++i) {
        if (series.avg_rho[i] && (!peak || *series.avg_rho[i] > *series.avg_rho[*peak])) peak = i;
        if (!rise || series.abs_change[i] > series.abs_change[*rise]) rise = i;
        if (!fall || series.abs_change[i] < series.abs_change[*fall]) fall = i;
    }
    if (peak) {
        body << "- peak average rho: " << format_real(*series.avg_rho[*peak]) << " in "
             << series.years[*peak] << " (" << format_real(*series.avg_rho[*peak] * 100.0)
             << "% of the previous-year count product)\n";
    }
    if (rise) {
        long long delta = series.abs_change[*rise];
        body << "- largest movie-count increase: " << (delta >= 0 ? "+" : "") << delta << " in "
             << series.years[*rise] << '\n';
    }
    if (fall) {
        long long delta = series.abs_change[*fall];
        body << "- largest movie-count decline: " << (delta >= 0 ? "+" : "") << delta << " in "
             << series.years[*fall] << '\n';
    }
}

} // namespace

void cmd_report(const ReportOptions& options, const GlobalOptions& global) {
    std::vector<std::filesystem::path> scan_files;
    {
        std::error_code ec;
        std::filesystem::directory_iterator it(options.scan_dir, ec);
        if (ec) throw DataError("cannot read directory '" + options.scan_dir.string() + "'");
        for (const auto& entry : it) {
            const std::string name = entry.path().filename().string();
            if (name.rfind("scan_", 0) == 0 && name.size() > 10 &&
                name.substr(name.size() - 5) == ".json") {
                scan_files.push_back(entry.path());
            }
        }
    }
    std::sort(scan_files.begin(), scan_files.end());
    if (scan_files.empty()) {
        throw DataError("no scan reports (scan_*.json) in '" + options.scan_dir.string() + "'");
    }

    std::filesystem::path indicator_dir;
    if (options.indicator_dir) {
        indicator_dir = *options.indicator_dir;
    } else {
        RunManifest source = read_manifest_json(options.scan_dir);
        auto it = source.resolved_options.find("indicator");
        if (it == source.resolved_options.end()) {
            throw DataError("scan manifest does not name an indicator directory; "
                            "pass --indicator DIR");
        }
        indicator_dir = it->second;
    }
    const auto indicator_path = indicator_dir / "indicator.csv";
    std::ifstream indicator_in = open_input(indicator_path);
    std::vector<IndicatorSeries> all_series = read_indicator_csv(indicator_in);

    std::vector<FocalDigest> digests;
    for (const auto& file : scan_files) {
        std::ifstream in = open_input(file);
        FocalDigest digest;
        digest.scan = read_scan_json(in);
        digest.focal = digest.scan.focal;
        for (const IndicatorSeries& series : all_series) {
            if (series.focal == digest.focal) digest.series = &series;
        }
        digests.push_back(std::move(digest));
    }
    std::sort(digests.begin(), digests.end(),
              [](const FocalDigest& a, const FocalDigest& b) { return a.focal < b.focal; });

    std::ostringstream body;
    body << "# Country co-occurrence report\n";
    for (const FocalDigest& digest : digests) {
        const ScanReport& scan = digest.scan;
        body << "\n## " << digest.focal << "\n\n";
        if (!scan.entries.empty()) {
            body << "- scanned years " << scan.entries.front().year << ".."
                 << scan.entries.back().year << " (" << scan.entries.size()
                 << " with a defined average rho)\n";
        }
        body << "- rank test: alpha " << format_real(scan.alpha) << ", smallest reachable p "
             << format_real(scan.p_floor) << '\n';
        if (scan.significant_years.empty()) {
            body << "- no year clears alpha\n";
        }
        for (int year : scan.significant_years) {
            for (const ScanEntry& entry : scan.entries) {
                if (entry.year == year) {
                    body << "- significant: " << year << " (two-sided p "
                         << format_real(entry.p_two_sided) << ", " << "U "
                         << format_real(entry.u) << ")\n";
                    break;
                }
            }
        }
        if (digest.series) append_series_lines(body, *digest.series);
        body << "- data files: scan_" << digest.focal << ".json, box_" << digest.focal
             << ".csv\n";
    }

    std::vector<std::pair<ScanEntry, std::string>> peaks;
    for (const FocalDigest& digest : digests) {
        if (auto top = digest.top_significant()) peaks.emplace_back(*top, digest.focal);
    }
    std::sort(peaks.begin(), peaks.end(), [](const auto& a, const auto& b) {
        return std::pair(a.first.year, a.second) < std::pair(b.first.year, b.second);
    });
    if (peaks.size() >= 2) {
        body << "\n## Peak timing\n\n";
        for (std::size_t i = 1; i < peaks.size(); ++i) {
            const auto& [prev, prev_focal] = peaks[i - 1];
            const auto& [curr, curr_focal] = peaks[i];
            if (curr.year == prev.year) {
                body << "- " << curr_focal << "'s most significant year (" << curr.year
                     << ") coincides with " << prev_focal << "'s\n";
            } else {
                body << "- " << curr_focal << "'s most significant year (" << curr.year
                     << ") follows " << prev_focal << "'s (" << prev.year << ") by "
                     << (curr.year - prev.year) << " years\n";
            }
        }
    }

    ensure_out_dir(global);
    write_output(global, "report.md", body);

    RunManifest manifest;
    manifest.subcommand = "report";
    manifest.resolved_options["scan"] = options.scan_dir.string();
    manifest.resolved_options["indicator"] = indicator_dir.string();
    for (const auto& file : scan_files) {
        manifest.input_digests[file.string()] = fnv1a64_hex_of_file(file);
    }
    manifest.input_digests[indicator_path.string()] = fnv1a64_hex_of_file(indicator_path);
    finish_manifest(global, manifest);
    note(global, "wrote report.md covering " + std::to_string(digests.size()) +
                     " focal countries");
}

PipelineResult run_pipeline(std::span<const MovieRecord> records, int year_from, int year_to,
                            long long min_total, const std::string& focal, double alpha) {
    PipelineResult result;
    result.networks = build_all_years(records, year_from, year_to);
    result.list = filter_country_list(country_totals(result.networks), min_total);
    result.series = indicator_series(result.networks, focal, result.list);
    result.details = rho_details(result.networks, focal, result.list);
    result.scan = scan_years(result.series, alpha);
    return result;
}

} // namespace filmnet
