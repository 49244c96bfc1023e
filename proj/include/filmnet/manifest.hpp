#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace filmnet {

inline constexpr const char* kToolVersion = "0.1.0";

/// Provenance record written as manifest.json into every output directory.
struct RunManifest {
    std::string tool_version = kToolVersion;
    std::string subcommand;
    std::map<std::string, std::string> resolved_options;
    std::map<std::string, std::string> input_digests; // path -> fnv1a64 hex
    std::string timestamp_utc;
};

void write_manifest_json(const std::filesystem::path& out_dir, const RunManifest& manifest);

RunManifest read_manifest_json(const std::filesystem::path& out_dir);

} // namespace filmnet
