#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace specres::cli {

using nlohmann::json;

// Input the user supplied is unusable: missing file, malformed CSV, bad flag
// combination. Maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string format_double(double x);

void write_eigenvalue_csv(const std::string& path, const std::vector<double>& values);
void write_density_csv(const std::string& path, const std::vector<double>& lambdas, const std::vector<double>& rho);
void write_json(const std::string& path, const json& j);

std::vector<double> read_eigenvalue_csv(const std::string& path);
void read_density_csv(const std::string& path, std::vector<double>& lambdas, std::vector<double>& rho);
json read_json(const std::string& path);

std::string sha256_file(const std::string& path);

// Collects what a command did and writes <out>.manifest.json.
class Manifest {
public:
  Manifest(std::string command, std::vector<std::string> args);

  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void set_config(json config) { config_ = std::move(config); }
  void add_output(const std::string& path) { outputs_.push_back(path); }

  json to_json() const;
  void write(const std::string& primary_output) const;

private:
  std::string command_;
  std::vector<std::string> args_;
  std::optional<std::uint64_t> seed_;
  json config_ = json::object();
  std::vector<std::string> outputs_;
  std::string started_at_;
  std::chrono::steady_clock::time_point start_;
};

std::string manifest_path(const std::string& output);

} // namespace specres::cli
