#include "lapdog/manifest.hpp"

#include "lapdog/error.hpp"
#include "lapdog/fingerprint.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace lapdog {

std::string to_hex(std::uint64_t v) {
    static const char *digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

std::uint64_t file_fingerprint(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot read file for fingerprinting: ", path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 14];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        h = fnv1a64(std::string_view(buf, static_cast<std::size_t>(in.gcount())), h);
        if (in.eof())
            break;
    }
    return h;
}

std::string iso_timestamp_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

void write_file_atomic(const std::string &path, const std::string &content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        require(out.good(), "cannot open for writing: ", tmp);
        out << content;
        out.flush();
        require(out.good(), "write failed: ", tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    require(!ec, "atomic rename failed for ", path, ": ", ec.message());
}

void RunManifest::add_input(const std::string &path) {
    inputs[path] = to_hex(file_fingerprint(path));
}

void RunManifest::write(const std::string &path) const {
    nlohmann::json j;
    j["command"] = command;
    j["config"] = config.empty() ? nlohmann::json::object() : nlohmann::json::parse(config);
    j["inputs"] = inputs;
    j["seed"] = seed;
    j["started"] = started;
    j["finished"] = finished;
    j["outputs"] = outputs;
    write_file_atomic(path, j.dump(2) + "\n");
}

} // namespace lapdog
