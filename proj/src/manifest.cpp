#include "filmnet/manifest.hpp"

#include "filmnet/common.hpp"

#include <json.hpp>

#include <fstream>

namespace filmnet {

void write_manifest_json(const std::filesystem::path& out_dir, const RunManifest& manifest) {
    nlohmann::json doc;
    doc["tool_version"] = manifest.tool_version;
    doc["subcommand"] = manifest.subcommand;
    doc["resolved_options"] = manifest.resolved_options;
    doc["input_digests"] = manifest.input_digests;
    doc["timestamp"] = manifest.timestamp_utc;
    write_text_file(out_dir / "manifest.json", doc.dump(2) + "\n");
}

RunManifest read_manifest_json(const std::filesystem::path& out_dir) {
    auto path = out_dir / "manifest.json";
    std::ifstream in(path);
    if (!in) throw DataError("missing manifest: " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
        RunManifest manifest;
        manifest.tool_version = doc.at("tool_version").get<std::string>();
        manifest.subcommand = doc.at("subcommand").get<std::string>();
        manifest.resolved_options =
            doc.at("resolved_options").get<std::map<std::string, std::string>>();
        manifest.input_digests =
            doc.at("input_digests").get<std::map<std::string, std::string>>();
        manifest.timestamp_utc = doc.at("timestamp").get<std::string>();
        return manifest;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("invalid manifest " + path.string() + ": " + e.what());
    }
}

} // namespace filmnet
