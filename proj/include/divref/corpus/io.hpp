#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "divref/corpus/types.hpp"
#include "divref/util/jsonl.hpp"

namespace divref::corpus {

enum class Format { wmt, summeval, pascal50s, native };

Format parse_format(std::string_view s);

// Loads and validates a benchmark. All text fields are NFC-normalized and
// otherwise kept verbatim. Throws DataError on parse failures (with the line
// number), dangling or duplicate ids, and any other invariant violation.
Benchmark load_benchmark(const std::filesystem::path& path, Format format);
Benchmark load_benchmark(std::istream& in, Format format, const std::string& origin);

// Native line-delimited format: optional {"kind":"benchmark"} header, then
// segment, reference, output and judgment records.
void write_native(const Benchmark& benchmark, std::ostream& out);
void save_native(const Benchmark& benchmark, const std::filesystem::path& path);

// Cache / generation files: one DiversifiedRecord per line.
std::vector<DiversifiedRecord> load_records(const std::filesystem::path& path);
void write_records(std::span<const DiversifiedRecord> records, std::ostream& out);
void save_records(std::span<const DiversifiedRecord> records, const std::filesystem::path& path);

nlohmann::ordered_json record_to_json(const DiversifiedRecord& record);
DiversifiedRecord record_from_json(const util::Json& obj);

// Adds generations to the matching reference sets. Ground truths never
// change; re-merging identical records is a no-op, and the resulting entry
// order depends only on provenance. Unknown segment ids raise DataError.
Benchmark merge_diversified(const Benchmark& benchmark, std::span<const DiversifiedRecord> records);

// Every invariant violation, one message each. Empty iff the benchmark is valid.
std::vector<std::string> validate(const Benchmark& benchmark);

}  // namespace divref::corpus
