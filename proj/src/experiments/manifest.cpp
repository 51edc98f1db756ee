// Copyright 2026 The lhiggs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "lhiggs/errors.hpp"
#include "lhiggs/experiments.hpp"

#ifndef LHIGGS_VERSION_TAG
#define LHIGGS_VERSION_TAG "unknown"
#endif

namespace lhiggs::exp {

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string read_all(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

std::string sha256_file(const std::filesystem::path& p) { return sha256_hex(read_all(p)); }

std::filesystem::path write_manifest(const std::filesystem::path& dir, const RunManifest& m) {
  nlohmann::json j;
  j["command"] = m.command;
  j["config"] = m.config;
  j["seeds"] = m.seeds;
  j["version"] = m.version;
  j["started"] = m.started;
  j["finished"] = m.finished;
  j["csv_schema_version"] = m.csv_schema_version;
  j["files"] = nlohmann::json::array();
  for (const OutputFile& f : m.files) j["files"].push_back({{"name", f.name}, {"sha256", f.sha256}});
  const std::filesystem::path path = dir / (m.command + ".manifest.json");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << j.dump(2) << '\n';
  return path;
}

bool verify_manifest(const std::filesystem::path& manifest_path, std::string* problem) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_all(manifest_path));
  } catch (const std::exception& e) {
    if (problem) *problem = e.what();
    return false;
  }
  const std::filesystem::path dir = manifest_path.parent_path();
  for (const auto& f : j.at("files")) {
    const std::filesystem::path p = dir / f.at("name").get<std::string>();
    if (!std::filesystem::exists(p)) {
      if (problem) *problem = "missing " + p.string();
      return false;
    }
    if (sha256_file(p) != f.at("sha256").get<std::string>()) {
      if (problem) *problem = "digest mismatch for " + p.string();
      return false;
    }
  }
  return true;
}

RunRecorder::RunRecorder(std::string command, const RunConfig& cfg, std::filesystem::path dir)
    : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
  manifest_.command = std::move(command);
  manifest_.config = cfg.serialize();
  manifest_.version = LHIGGS_VERSION_TAG;
  manifest_.started = utc_now();
  write(manifest_.command + ".config.toml", manifest_.config);
}

void RunRecorder::write(const std::string& name, const std::string& contents) {
  const std::filesystem::path p = dir_ / name;
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + p.string());
  out << contents;
  out.close();
  for (OutputFile& f : manifest_.files) {
    if (f.name == name) {
      f.sha256 = sha256_hex(contents);
      return;
    }
  }
  manifest_.files.push_back({name, sha256_hex(contents)});
}

std::filesystem::path RunRecorder::finish() {
  manifest_.finished = utc_now();
  return write_manifest(dir_, manifest_);
}

}  // namespace lhiggs::exp
