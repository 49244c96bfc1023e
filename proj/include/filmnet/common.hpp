#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace filmnet {

/// Malformed input text: bad headers, unparseable files, format violations.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input is well-formed but semantically unusable for the requested analysis.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad command-line usage (flag combinations, out-of-range options). Exit code 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Split keeping empty fields ("a,,b" -> {"a","","b"}).
std::vector<std::string> split(std::string_view text, char sep);

std::string join(const std::vector<std::string>& parts, char sep);

// Full-match signed integer parse; rejects leading/trailing junk.
bool parse_int(std::string_view text, long long& out);

bool parse_real(std::string_view text, double& out);

std::string to_upper_ascii(std::string s);

// Reals in output files: up to 12 significant digits, trailing zeros trimmed.
std::string format_real(double v);

// FNV-1a 64-bit digest of a file's bytes, as 16 lowercase hex chars.
std::string fnv1a64_hex_of_file(const std::filesystem::path& file);

std::string utc_timestamp_now();

std::string read_text_file(const std::filesystem::path& file);

void write_text_file(const std::filesystem::path& file, std::string_view content);

} // namespace filmnet
