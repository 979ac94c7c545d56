#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace svi {

// Insertion-ordered JSON so emitted files are byte-stable.
using Json = nlohmann::ordered_json;

// Calls fn(line_number, parsed) for every non-blank line (1-based numbering).
// Throws MalformedRecordError on parse failure, IoError if unreadable.
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(std::size_t, const Json&)>& fn);

std::vector<Json> read_jsonl(const std::filesystem::path& path);

// One record per line, LF-terminated.
void write_jsonl(const std::filesystem::path& path,
                 const std::vector<Json>& records);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

}  // namespace svi
