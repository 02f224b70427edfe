// Copyright 2026 The dcgeom Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "output.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>

#include <openssl/evp.h>

#include "dcgeom/cli.hpp"
#include "dcgeom/errors.hpp"

namespace dcgeom::cli {
namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void Table::add_row(std::vector<double> row) {
  if (row.size() != columns_.size()) throw DimensionMismatch("table row has the wrong number of columns");
  rows_.push_back(std::move(row));
}

void Table::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
  out << '\n';
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_double(r[i]);
    out << '\n';
  }
  if (!out) throw ValidationError("failed writing " + path.string());
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 15];
  }
  return out;
}

Manifest::Manifest(std::string command, const std::string& config_text, std::uint64_t seed, int threads) {
  doc_["tool"] = "dcgeom";
  doc_["version"] = DCGEOM_VERSION;
  doc_["command"] = std::move(command);
  doc_["config_sha256"] = sha256_hex(config_text);
  doc_["seed"] = seed;
  doc_["threads"] = threads;
  doc_["started_at"] = utc_now();
  doc_["status"] = "ok";
}

void Manifest::add_table(const std::filesystem::path& dir, const std::string& name, const Table& table) {
  table.write(dir / name);
  files_.push_back({{"name", name}, {"kind", "csv"}, {"columns", table.columns()}, {"rows", table.rows()}});
}

void Manifest::add_file(const std::string& name, const std::string& kind) {
  files_.push_back({{"name", name}, {"kind", kind}});
}

void Manifest::set_status(const std::string& status, const std::string& message) {
  doc_["status"] = status;
  if (!message.empty()) doc_["message"] = message;
}

void Manifest::write(const std::filesystem::path& dir) {
  doc_["finished_at"] = utc_now();
  doc_["files"] = files_;
  doc_["metrics"] = metrics_;
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw ValidationError("cannot write manifest in " + dir.string());
  out << doc_.dump(2) << '\n';
}

}  // namespace dcgeom::cli
