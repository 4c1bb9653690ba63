#pragma once

#include "trapmodes_app/report.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace trapmodes::app {

std::string sha256_hex(const std::string& bytes);

struct StepStatus {
    std::string name;
    std::string status;  // "ok" or "failed"
    double seconds = 0.0;
    std::string message;
};

struct FileEntry {
    std::string path;  // relative to the output directory
    std::uintmax_t bytes = 0;
    std::string sha256;
};

struct RunManifest {
    std::string config_digest;  // SHA-256 of the normalized config text
    std::string code_version;
    std::string experiment;
    std::string started_utc;
    std::string finished_utc;
    std::string status = "ok";
    int exit_code = 0;
    std::vector<StepStatus> steps;
    std::vector<FileEntry> files;

    Json to_json() const;
};

std::string utc_now();

// Every artifact goes through one writer so the manifest inventory is
// complete. The constructor checks that the directory is writable.
class OutputWriter {
public:
    explicit OutputWriter(std::filesystem::path dir);

    void write(const std::string& relative, const std::string& bytes);
    const std::filesystem::path& dir() const { return dir_; }
    const std::vector<FileEntry>& files() const { return files_; }

    // Writes manifest.json; it is the one file not listed in itself.
    void write_manifest(RunManifest manifest);

private:
    std::filesystem::path dir_;
    std::vector<FileEntry> files_;
};

}  // namespace trapmodes::app
