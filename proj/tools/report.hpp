#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "semibound/constants.hpp"
#include "semibound/schrodinger.hpp"
#include "semibound/verify.hpp"

namespace semibound::cli {

/// 9 significant digits, for tables.
std::string fmt9(double v);
/// Shortest round-trip representation, for CSV; NaN and empty become "".
std::string csv_num(double v);
std::string csv_num(const std::optional<double>& v);

class Table {
 public:
  explicit Table(std::vector<std::string> headers) : headers_(std::move(headers)) {}
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  void print(std::ostream& os) const;

 private:
  std::vector<std::string> headers_;
  std::vector<std::vector<std::string>> rows_;
};

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void write_file(const std::filesystem::path& path, const std::string& text);

nlohmann::json to_json(const GammaConstants& g);
nlohmann::json to_json(const PotentialBound& b);
nlohmann::json to_json(const BoundReport& r);
nlohmann::json to_json(const MuScanResult& r);
nlohmann::json to_json(const BridgeReport& r);
nlohmann::json to_json(const VerifyRow& r);
nlohmann::json to_json(const GridSpec& g);
nlohmann::json to_json(const PotentialSpec& v);

std::vector<std::string> verify_csv_header();
std::vector<std::string> verify_csv_row(const VerifyRow& r);

}  // namespace semibound::cli
