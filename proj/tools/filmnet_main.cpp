// filmnet: build country co-occurrence networks from movie corpora, track a
// year-over-year co-publication indicator, and rank-test it for significant
// years. Subcommands chain through output directories; every run leaves a
// manifest describing how its directory was produced.

#include <CLI11.hpp>

#include "filmnet/common.hpp"
#include "filmnet/manifest.hpp"
#include "filmnet/pipeline.hpp"

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

namespace {

int run(int argc, char** argv) {
    CLI::App app{"Country co-occurrence networks and the co-publication indicator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", filmnet::kToolVersion);

    filmnet::GlobalOptions global;
    app.add_option("--out", global.out_dir, "Output directory (created if missing)");
    app.add_flag("--quiet", global.quiet, "Suppress progress notes on stderr");

    filmnet::BuildOptions build;
    CLI::App* cmd_build = app.add_subcommand(
        "build", "Parse a corpus and dump per-year country co-occurrence matrices");
    cmd_build->add_option("--input", build.input, "Canonical corpus TSV");
    cmd_build->add_option("--imdb-basics", build.imdb_basics,
                          "IMDB-shaped title basics TSV (with --imdb-akas)");
    cmd_build->add_option("--imdb-akas", build.imdb_akas,
                          "IMDB-shaped title akas TSV (with --imdb-basics)");
    cmd_build->add_option("--aliases", build.aliases, "Region alias TSV (raw<TAB>canonical)");
    cmd_build->add_option("--from", build.year_from, "First window year")
        ->capture_default_str();
    cmd_build->add_option("--to", build.year_to, "Last window year")->capture_default_str();
    cmd_build->add_option("--min-total", build.min_total,
                          "Keep countries with a window total above this")
        ->capture_default_str();

    filmnet::IndicatorOptions indicator;
    CLI::App* cmd_indicator = app.add_subcommand(
        "indicator", "Compute the average rate-of-change indicator for focal countries");
    cmd_indicator->add_option("--matrix", indicator.matrix_dir, "Directory written by build")
        ->required();
    cmd_indicator->add_option("--focal", indicator.focals, "Focal country code (repeatable)")
        ->required();

    filmnet::ScanOptions scan;
    CLI::App* cmd_scan = app.add_subcommand(
        "scan", "Rank-test each year's indicator value against the remaining years");
    cmd_scan->add_option("--indicator", scan.indicator_dir, "Directory written by indicator")
        ->required();
    cmd_scan->add_option("--alpha", scan.alpha, "Two-sided significance threshold in (0, 1]")
        ->capture_default_str();

    filmnet::BoxstatsOptions boxstats;
    CLI::App* cmd_boxstats = app.add_subcommand(
        "boxstats", "Summarize per-year rho distributions as box statistics");
    cmd_boxstats
        ->add_option("--indicator", boxstats.indicator_dir, "Directory written by indicator")
        ->required();

    filmnet::SynthOptions synth;
    CLI::App* cmd_synth =
        app.add_subcommand("synth", "Generate a deterministic synthetic corpus");
    cmd_synth->add_option("--config", synth.config_file, "key = value config file");
    cmd_synth->add_option("--n-countries", synth.n_countries, "Number of countries");
    cmd_synth->add_option("--from", synth.year_from, "First year");
    cmd_synth->add_option("--to", synth.year_to, "Last year");
    cmd_synth->add_option("--base-volume", synth.base_volume, "Home movies per country-year");
    cmd_synth->add_option("--cross-prob", synth.cross_prob,
                          "Per-partner co-publication probability");
    cmd_synth->add_option("--shock-year", synth.shock_year,
                          "Year the shock country's cross probability jumps");
    cmd_synth->add_option("--shock-country", synth.shock_country, "Country receiving the shock");
    cmd_synth->add_option("--shock-factor", synth.shock_factor,
                          "Multiplier on the shock country's cross probability");
    cmd_synth->add_option("--seed", synth.seed, "Generator seed");

    filmnet::ReportOptions report;
    CLI::App* cmd_report =
        app.add_subcommand("report", "Write a markdown digest of scan results");
    cmd_report->add_option("--scan", report.scan_dir, "Directory written by scan")->required();
    cmd_report->add_option("--indicator", report.indicator_dir,
                           "Indicator directory (default: recorded in the scan manifest)");

    for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints the parse error to stderr
        return 1;
    }

    if (cmd_build->parsed()) filmnet::cmd_build(build, global);
    if (cmd_indicator->parsed()) filmnet::cmd_indicator(indicator, global);
    if (cmd_scan->parsed()) filmnet::cmd_scan(scan, global);
    if (cmd_boxstats->parsed()) filmnet::cmd_boxstats(boxstats, global);
    if (cmd_synth->parsed()) filmnet::cmd_synth(synth, global);
    if (cmd_report->parsed()) filmnet::cmd_report(report, global);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const filmnet::UsageError& e) {
        std::cerr << "filmnet: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "filmnet: " << e.what() << '\n';
        return 1;
    } catch (const filmnet::FormatError& e) {
        std::cerr << "filmnet: " << e.what() << '\n';
        return 2;
    } catch (const filmnet::DataError& e) {
        std::cerr << "filmnet: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "filmnet: " << e.what() << '\n';
        return 2;
    }
}
