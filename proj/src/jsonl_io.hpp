#pragma once

// Internal JSONL plumbing shared by the record-file readers and writers.

#include <cctype>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>

#include "json.hpp"

#include "condor/errors.hpp"

namespace condor::detail {

using ordered_json = nlohmann::ordered_json;

inline bool all_whitespace(const std::string& s) {
    for (unsigned char c : s) {
        if (!std::isspace(c)) return false;
    }
    return true;
}

// Streams a JSONL file, invoking fn(line_number, parsed_object) per record.
// Blank lines are skipped so hand-edited fixtures stay friendly.
inline void for_each_record(const std::string& path,
                            const std::function<void(std::size_t, const ordered_json&)>& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (all_whitespace(line)) continue;
        ordered_json record;
        try {
            record = ordered_json::parse(line);
        } catch (const std::exception& e) {
            throw DataError(path + ":" + std::to_string(line_no) + ": invalid JSON: " + e.what());
        }
        if (!record.is_object()) {
            throw DataError(path + ":" + std::to_string(line_no) + ": record is not an object");
        }
        try {
            fn(line_no, record);
        } catch (const DataError& e) {
            throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (in.bad()) throw DataError("I/O failure while reading: " + path);
}

// Writes through a temp file and renames into place.
inline void write_lines_atomic(const std::string& path,
                               const std::function<void(std::ostream&)>& emit) {
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot open file for writing: " + tmp.string());
        emit(out);
        out.flush();
        if (!out) throw DataError("I/O failure while writing: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) throw DataError("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
}

inline std::string require_string(const ordered_json& record, const char* field) {
    auto it = record.find(field);
    if (it == record.end()) throw DataError(std::string("missing field \"") + field + "\"");
    if (!it->is_string()) throw DataError(std::string("field \"") + field + "\" must be a string");
    return it->get<std::string>();
}

inline std::string optional_string(const ordered_json& record, const char* field) {
    auto it = record.find(field);
    if (it == record.end()) return "";
    if (!it->is_string()) throw DataError(std::string("field \"") + field + "\" must be a string");
    return it->get<std::string>();
}

}  // namespace condor::detail
