#include "trapmodes_app/manifest.hpp"

#include <trapmodes/error.hpp>

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace trapmodes::app {

namespace fs = std::filesystem;

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw IoError("SHA-256 digest failed");
    std::ostringstream out;
    out << std::hex << std::setfill('0');
    for (unsigned int i = 0; i < len; ++i) out << std::setw(2) << int(digest[i]);
    return out.str();
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

Json RunManifest::to_json() const {
    Json j;
    j["experiment"] = experiment;
    j["code_version"] = code_version;
    j["config_sha256"] = config_digest;
    j["started_utc"] = started_utc;
    j["finished_utc"] = finished_utc;
    j["status"] = status;
    j["exit_code"] = exit_code;
    j["steps"] = Json::array();
    for (const auto& s : steps) {
        Json e;
        e["name"] = s.name;
        e["status"] = s.status;
        e["seconds"] = s.seconds;
        if (!s.message.empty()) e["message"] = s.message;
        j["steps"].push_back(e);
    }
    j["files"] = Json::array();
    for (const auto& f : files) j["files"].push_back({{"path", f.path}, {"bytes", f.bytes}, {"sha256", f.sha256}});
    return j;
}

OutputWriter::OutputWriter(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory '" + dir_.string() + "': " + ec.message());
    const fs::path probe = dir_ / ".write-probe";
    {
        std::ofstream out(probe);
        if (!out || !(out << "probe") || !out.flush())
            throw IoError("output directory '" + dir_.string() + "' is not writable");
    }
    fs::remove(probe, ec);
}

void OutputWriter::write(const std::string& relative, const std::string& bytes) {
    const fs::path target = dir_ / relative;
    std::ofstream out(target, std::ios::binary);
    if (!out || !out.write(bytes.data(), std::streamsize(bytes.size())) || !out.flush())
        throw IoError("cannot write '" + target.string() + "'");
    for (auto& f : files_)
        if (f.path == relative) {
            f = {relative, bytes.size(), sha256_hex(bytes)};
            return;
        }
    files_.push_back({relative, bytes.size(), sha256_hex(bytes)});
}

void OutputWriter::write_manifest(RunManifest manifest) {
    manifest.files = files_;
    const std::string text = manifest.to_json().dump(2) + "\n";
    const fs::path target = dir_ / "manifest.json";
    std::ofstream out(target, std::ios::binary);
    if (!out || !(out << text) || !out.flush()) throw IoError("cannot write '" + target.string() + "'");
}

}  // namespace trapmodes::app
