#include "divref/util/jsonl.hpp"

#include <fstream>
#include <sstream>

#include "divref/error.hpp"

namespace divref::util {

namespace {

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

void read_jsonl(std::istream& in, const std::string& origin,
                const std::function<void(std::size_t, const Json&)>& on_record) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    Json obj;
    try {
      obj = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw DataError(origin + ":" + std::to_string(line_no) + ": parse error: " + e.what());
    }
    if (!obj.is_object()) {
      throw DataError(origin + ":" + std::to_string(line_no) + ": expected a JSON object");
    }
    try {
      on_record(line_no, obj);
    } catch (const DataError& e) {
      throw DataError(origin + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Json::exception& e) {
      throw DataError(origin + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void read_jsonl(const std::filesystem::path& path,
                const std::function<void(std::size_t, const Json&)>& on_record) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  read_jsonl(in, path.string(), on_record);
}

void write_jsonl_line(std::ostream& out, const Json& record) {
  out << record.dump(-1, ' ', false, Json::error_handler_t::strict) << '\n';
}

void write_jsonl_line(std::ostream& out, const nlohmann::ordered_json& record) {
  out << record.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::strict) << '\n';
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out << content;
    if (!out) throw DataError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const Json& require(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw DataError(std::string("missing field '") + key + "'");
  return *it;
}

std::string require_string(const Json& obj, const char* key) {
  const auto& v = require(obj, key);
  if (!v.is_string()) throw DataError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

double require_number(const Json& obj, const char* key) {
  const auto& v = require(obj, key);
  if (!v.is_number()) throw DataError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::int64_t require_integer(const Json& obj, const char* key) {
  const auto& v = require(obj, key);
  if (!v.is_number_integer()) throw DataError(std::string("field '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

}  // namespace divref::util
