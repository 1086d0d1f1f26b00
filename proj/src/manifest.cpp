#include "semcell/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "semcell/format.hpp"
#include "semcell/types.hpp"
#include "semcell/version.hpp"

namespace semcell {

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file for hashing: " + path);

    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("failed to initialize SHA-256");
    }
    char buffer[1 << 16];
    while (in) {
        in.read(buffer, sizeof(buffer));
        const std::streamsize got = in.gcount();
        if (got > 0 && EVP_DigestUpdate(ctx.get(), buffer, static_cast<std::size_t>(got)) != 1) {
            throw std::runtime_error("SHA-256 update failed");
        }
    }
    if (in.bad()) throw DataError("error while reading file for hashing: " + path);

    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int digest_len = 0;
    if (EVP_DigestFinal_ex(ctx.get(), digest, &digest_len) != 1) {
        throw std::runtime_error("SHA-256 finalization failed");
    }
    std::string hex(digest_len * 2, '0');
    static const char* digits = "0123456789abcdef";
    for (unsigned int i = 0; i < digest_len; ++i) {
        hex[2 * i] = digits[digest[i] >> 4];
        hex[2 * i + 1] = digits[digest[i] & 0xF];
    }
    return hex;
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
    nlohmann::json inputs = nlohmann::json::array();
    for (const auto& input : manifest.inputs) {
        inputs.push_back({{"role", input.role}, {"path", input.path}, {"sha256", input.sha256}});
    }
    nlohmann::json doc{
        {"tool", manifest.tool},
        {"version", manifest.version.empty() ? std::string(SEMCELL_VERSION) : manifest.version},
        {"command", manifest.command},
        {"hash_algorithm", manifest.hash_algorithm},
        {"inputs", inputs},
        {"params", manifest.params},
        {"item_count", manifest.item_count},
        {"unit_count", manifest.unit_count},
        {"started_utc", manifest.started_utc},
        {"finished_utc", manifest.finished_utc},
    };
    if (!manifest.results.is_null() && !manifest.results.empty()) {
        doc["results"] = manifest.results;
    }
    write_text_file(path, doc.dump(2) + "\n");
}

RunManifest read_manifest(const std::string& path) {
    const std::string content = read_text_file(path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(content);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(path + ": invalid manifest JSON: " + e.what());
    }
    RunManifest manifest;
    try {
        manifest.tool = doc.at("tool").get<std::string>();
        manifest.version = doc.at("version").get<std::string>();
        manifest.command = doc.at("command").get<std::string>();
        manifest.hash_algorithm = doc.at("hash_algorithm").get<std::string>();
        for (const auto& input : doc.at("inputs")) {
            manifest.inputs.push_back({input.at("role").get<std::string>(),
                                       input.at("path").get<std::string>(),
                                       input.at("sha256").get<std::string>()});
        }
        manifest.params = doc.at("params");
        manifest.item_count = doc.at("item_count").get<std::size_t>();
        manifest.unit_count = doc.at("unit_count").get<std::size_t>();
        manifest.started_utc = doc.at("started_utc").get<std::string>();
        manifest.finished_utc = doc.at("finished_utc").get<std::string>();
        if (doc.contains("results")) manifest.results = doc.at("results");
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": manifest missing required field: " + e.what());
    }
    if (manifest.tool != "semcell") {
        throw DataError(path + ": manifest was not written by this tool (tool='" + manifest.tool + "')");
    }
    return manifest;
}

} // namespace semcell
