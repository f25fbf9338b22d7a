#include "tunebench/network_csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tunebench/errors.hpp"

namespace tunebench {

namespace {

constexpr const char* kHeader = "id,p000,p001,p010,p011,p100,p101,p110,p111";
constexpr double kLoadTolerance = 1e-9;

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

double parse_double(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE) {
    throw FormatError("not a number: '" + text + "'");
  }
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) {
    if (!field.empty() && field.back() == '\r') field.pop_back();
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

void write_networks_csv(std::ostream& out, const std::vector<Network>& networks) {
  out << kHeader << '\n';
  for (const auto& network : networks) {
    out << network.id;
    for (double cell : network.table.cells()) out << ',' << format_double(cell);
    out << '\n';
  }
}

void write_networks_csv(const std::filesystem::path& path, const std::vector<Network>& networks) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_networks_csv(out, networks);
}

std::vector<Network> read_networks_csv(std::istream& in) {
  std::vector<Network> networks;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("id,", 0) == 0) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 9) {
      throw FormatError("networks line " + std::to_string(line_no) + ": expected 9 fields, got " +
                        std::to_string(fields.size()));
    }
    JointTable::Cells cells{};
    for (int i = 0; i < 8; ++i) cells[i] = parse_double(fields[i + 1]);
    try {
      // Tables that are already valid keep their exact cells so a write/read
      // round trip is lossless; only near-misses are rescaled.
      double sum = 0.0;
      for (double v : cells) sum += v;
      networks.push_back({fields[0], std::abs(sum - 1.0) <= kSliceMassEpsilon
                                         ? JointTable(cells)
                                         : JointTable::normalized(cells, kLoadTolerance)});
    } catch (const std::invalid_argument& e) {
      throw FormatError("networks line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return networks;
}

std::vector<Network> read_networks_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_networks_csv(in);
}

}  // namespace tunebench
