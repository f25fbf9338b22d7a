#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tunebench/joint_table.hpp"

namespace tunebench {

struct Network {
  std::string id;
  JointTable table;
};

/// Shortest-safe text for a double: 17 significant digits, round-trips exactly.
std::string format_double(double value);

/// Parses a full-field double; throws FormatError on trailing junk.
double parse_double(const std::string& text);

/// Splits one CSV line on commas. No quoting is supported.
std::vector<std::string> split_csv_line(const std::string& line);

/// Writes `id,p000,p001,p010,p011,p100,p101,p110,p111` rows preceded by that
/// header line.
void write_networks_csv(std::ostream& out, const std::vector<Network>& networks);
void write_networks_csv(const std::filesystem::path& path, const std::vector<Network>& networks);

/// Reads the network CSV. The header line is optional. Rows whose cells sum
/// within 1e-9 of 1 are renormalized; anything further off is rejected with
/// FormatError.
std::vector<Network> read_networks_csv(std::istream& in);
std::vector<Network> read_networks_csv(const std::filesystem::path& path);

}  // namespace tunebench
