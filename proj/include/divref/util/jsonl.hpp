#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace divref::util {

using Json = nlohmann::json;

// Calls `on_record(line_number, object)` for every non-blank line of a
// line-delimited JSON file. Line numbers are 1-based. Parse failures and
// non-object lines raise DataError naming the file and line; exceptions thrown
// by `on_record` that are DataErrors get the location prefixed.
void read_jsonl(const std::filesystem::path& path,
                const std::function<void(std::size_t, const Json&)>& on_record);
void read_jsonl(std::istream& in, const std::string& origin,
                const std::function<void(std::size_t, const Json&)>& on_record);

// Compact single-line dump with a trailing newline. Key order is preserved
// for ordered_json and sorted for json, so output is stable either way.
void write_jsonl_line(std::ostream& out, const Json& record);
void write_jsonl_line(std::ostream& out, const nlohmann::ordered_json& record);

// Writes `content` to `path` atomically (temp file + rename), creating parent
// directories as needed.
void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

// Typed field access with DataError on missing / mistyped fields.
const Json& require(const Json& obj, const char* key);
std::string require_string(const Json& obj, const char* key);
double require_number(const Json& obj, const char* key);
std::int64_t require_integer(const Json& obj, const char* key);

}  // namespace divref::util
