#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lapdog {

std::string iso_timestamp_now();

// Writes via a temp file + rename so readers never observe a partial file.
void write_file_atomic(const std::string &path, const std::string &content);

// Record of one CLI run: what ran, on which inputs (byte fingerprints),
// with which seed, and what it produced. Written once, at run end.
struct RunManifest {
    std::string command;
    std::string config; // config snapshot as a JSON string, may be empty
    std::map<std::string, std::string> inputs;
    std::int64_t seed = 0;
    std::string started;
    std::string finished;
    std::vector<std::string> outputs;

    void add_input(const std::string &path);
    void write(const std::string &path) const;
};

} // namespace lapdog
