#include "io.hpp"

#include <charconv>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

namespace specres::cli {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw UsageError("cannot open " + path + " for writing");
  return os;
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  return s.substr(i);
}

double parse_number(const std::string& field, const std::string& path, std::size_t line) {
  const std::string t = trim(field);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw UsageError(path + ":" + std::to_string(line) + ": not a number: '" + t + "'");
  return v;
}

std::vector<std::vector<std::string>> read_rows(const std::string& path, const std::vector<std::string>& header) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot read " + path);
  std::string line;
  if (!std::getline(is, line)) throw UsageError(path + ": empty file");
  std::vector<std::string> got;
  {
    std::stringstream ss(trim(line));
    std::string cell;
    while (std::getline(ss, cell, ',')) got.push_back(trim(cell));
  }
  if (got != header) throw UsageError(path + ": unexpected CSV header '" + trim(line) + "'");
  std::vector<std::vector<std::string>> rows;
  std::size_t n = 1;
  while (std::getline(is, line)) {
    ++n;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != header.size())
      throw UsageError(path + ":" + std::to_string(n) + ": expected " + std::to_string(header.size()) + " fields");
    rows.push_back(std::move(cells));
  }
  return rows;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

} // namespace

void write_eigenvalue_csv(const std::string& path, const std::vector<double>& values) {
  auto os = open_out(path);
  os << "eigenvalue\n";
  for (double v : values) os << format_double(v) << '\n';
  if (!os) throw UsageError("write failed: " + path);
}

void write_density_csv(const std::string& path, const std::vector<double>& lambdas, const std::vector<double>& rho) {
  auto os = open_out(path);
  os << "lambda,rho\n";
  for (std::size_t i = 0; i < lambdas.size(); ++i) os << format_double(lambdas[i]) << ',' << format_double(rho[i]) << '\n';
  if (!os) throw UsageError("write failed: " + path);
}

void write_json(const std::string& path, const json& j) {
  auto os = open_out(path);
  os << j.dump(2) << '\n';
  if (!os) throw UsageError("write failed: " + path);
}

std::vector<double> read_eigenvalue_csv(const std::string& path) {
  const auto rows = read_rows(path, {"eigenvalue"});
  std::vector<double> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out.push_back(parse_number(rows[i][0], path, i + 2));
  return out;
}

void read_density_csv(const std::string& path, std::vector<double>& lambdas, std::vector<double>& rho) {
  const auto rows = read_rows(path, {"lambda", "rho"});
  lambdas.clear();
  rho.clear();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    lambdas.push_back(parse_number(rows[i][0], path, i + 2));
    rho.push_back(parse_number(rows[i][1], path, i + 2));
    if (i > 0 && !(lambdas[i] > lambdas[i - 1])) throw UsageError(path + ": lambda column must be strictly ascending");
    if (!(rho[i] >= 0.0)) throw UsageError(path + ": negative density");
  }
}

json read_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot read " + path);
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

std::string sha256_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw UsageError("cannot read " + path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (is) {
    is.read(buf, sizeof buf);
    if (is.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(is.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

Manifest::Manifest(std::string command, std::vector<std::string> args)
    : command_(std::move(command)), args_(std::move(args)), started_at_(utc_now()),
      start_(std::chrono::steady_clock::now()) {}

json Manifest::to_json() const {
  json j;
  j["command"] = command_;
  j["args"] = args_;
  j["seed"] = seed_ ? json(*seed_) : json(nullptr);
  j["version"] = SPECRES_VERSION;
  j["started_at"] = started_at_;
  j["elapsed_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  json outs = json::array();
  for (const auto& p : outputs_) outs.push_back({{"path", p}, {"sha256", sha256_file(p)}});
  j["outputs"] = outs;
  j["config"] = config_;
  return j;
}

std::string manifest_path(const std::string& output) { return output + ".manifest.json"; }

void Manifest::write(const std::string& primary_output) const { write_json(manifest_path(primary_output), to_json()); }

} // namespace specres::cli
