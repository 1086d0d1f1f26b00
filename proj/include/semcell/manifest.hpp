#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace semcell {

// Everything needed to re-execute a run bit-identically from the same
// inputs: the command, its full parameter set, and content digests of every
// input file.
struct InputDigest {
    std::string role;
    std::string path;
    std::string sha256;
};

struct RunManifest {
    std::string tool = "semcell";
    std::string version;
    std::string command;
    std::string hash_algorithm = "sha256";
    std::vector<InputDigest> inputs;
    nlohmann::json params;               // full flag echo, command specific
    nlohmann::json results;              // run facts needed downstream (may be empty)
    std::size_t item_count = 0;
    std::size_t unit_count = 0;
    std::string started_utc;
    std::string finished_utc;
};

std::string sha256_file(const std::string& path);

void write_manifest(const RunManifest& manifest, const std::string& path);
RunManifest read_manifest(const std::string& path);

} // namespace semcell
