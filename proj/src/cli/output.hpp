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

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace dcgeom::cli {

/// In-memory table written as UTF-8 CSV with a header row.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_row(std::vector<double> row);
  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const { return rows_.size(); }

  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

/// Collects produced files and metrics, then writes manifest.json.
class Manifest {
 public:
  Manifest(std::string command, const std::string& config_text, std::uint64_t seed, int threads);

  /// Writes the table into dir and records its schema.
  void add_table(const std::filesystem::path& dir, const std::string& name, const Table& table);
  void add_file(const std::string& name, const std::string& kind);
  nlohmann::json& metrics() { return metrics_; }
  void set_status(const std::string& status, const std::string& message = "");
  void write(const std::filesystem::path& dir);

 private:
  nlohmann::json doc_;
  nlohmann::json files_ = nlohmann::json::array();
  nlohmann::json metrics_ = nlohmann::json::object();
};

std::string format_double(double x);

}  // namespace dcgeom::cli
