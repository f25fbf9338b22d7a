#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tunebench/calculi.hpp"
#include "tunebench/mce.hpp"
#include "tunebench/network_csv.hpp"
#include "tunebench/stats.hpp"
#include "tunebench/tuner.hpp"

namespace tunebench {

struct StudyConfig {
  std::uint64_t seed = 0;
  std::size_t networks = 109;
  std::vector<double> grid = kDefaultGrid;
  std::vector<Calculus> methods{kAllCalculi.begin(), kAllCalculi.end()};
  std::size_t restarts = 4;
  bool mycin_clamp = true;
  unsigned threads = 0;
  IpfOptions ipf{};
  CgOptions cg{};
  // When set, tables are read from this CSV instead of being sampled.
  std::optional<std::filesystem::path> networks_file;
};

/// Run parameters carried through every persisted stage into the report.
struct RunMetadata {
  std::uint64_t seed = 0;
  std::vector<double> grid;
  std::vector<Calculus> methods;
  std::size_t restarts = 0;
  bool mycin_clamp = true;
};

struct TunedEntry {
  std::string network_id;
  TuneResult result;
};

/// Contents of tuned_params.json.
struct TunedSet {
  RunMetadata metadata;
  // One entry per (network, calculus), networks in file order and calculi in
  // metadata.methods order.
  std::vector<TunedEntry> entries;
};

struct CalculusFit {
  Calculus calculus;
  double rmse = 0.0;
  double mse = 0.0;
};

struct NetworkResult {
  std::string network_id;
  double additivity = 0.0;
  std::vector<CalculusFit> fits;  // in metadata.methods order
};

struct CalculusSummary {
  Calculus calculus;
  Summary rmse;        // over per-network RMSEs
  double pooled_rmse;  // sqrt of the mse pooled over all problems and networks
  std::optional<OlsFit> regression;  // RMSE on additivity factor
};

struct StudyReport {
  RunMetadata metadata;
  std::size_t networks = 0;
  std::size_t probes_per_network = 0;
  Summary additivity;
  std::vector<CalculusSummary> calculi;
  // Pearson correlations of per-network RMSEs; empty optional where a series
  // is constant. Indexed like `calculi`.
  std::vector<std::vector<std::optional<double>>> correlations;
  std::optional<AnovaResult> anova;
  // Networks where some calculus beats independence by more than 1e-9.
  std::size_t independence_exceptions = 0;
};

// Stages. Each is deterministic for any thread count.

std::vector<Network> generate_networks(std::uint64_t seed, std::size_t count, unsigned threads);

std::vector<NormRecord> solve_all(const std::vector<Network>& networks,
                                  const std::vector<double>& grid, const IpfOptions& ipf,
                                  unsigned threads);

/// Seed for the random restarts of network number `index`.
std::uint64_t network_tuning_seed(std::uint64_t seed, std::size_t index);

TunedSet tune_all(const std::vector<Network>& networks, const std::vector<NormRecord>& norms,
                  const RunMetadata& metadata, const CgOptions& cg, unsigned threads);

std::vector<NetworkResult> network_results(const std::vector<Network>& networks,
                                           const TunedSet& tuned);

StudyReport build_report(const std::vector<NetworkResult>& results, const TunedSet& tuned);

// Persistence.

nlohmann::json tuned_to_json(const TunedSet& tuned);
TunedSet tuned_from_json(const nlohmann::json& doc);
void write_tuned_json(const std::filesystem::path& path, const TunedSet& tuned);
TunedSet read_tuned_json(const std::filesystem::path& path);

/// `network_id,additivity,<method>...` with 17 significant digits.
void write_per_network_rmse_csv(const std::filesystem::path& path,
                                const std::vector<NetworkResult>& results,
                                const std::vector<Calculus>& methods);

nlohmann::json report_to_json(const StudyReport& report);
std::string report_to_markdown(const StudyReport& report);
/// Writes per_network_rmse.csv, report.md and report.json into `dir`.
void write_report_files(const std::filesystem::path& dir, const std::vector<NetworkResult>& results,
                        const StudyReport& report);

/// Full pipeline. When `out_dir` is given, writes networks.csv, norms.csv,
/// tuned_params.json, per_network_rmse.csv, report.md and report.json there.
StudyReport run_study(const StudyConfig& config,
                      const std::optional<std::filesystem::path>& out_dir = std::nullopt);

/// Rebuilds the report stage from persisted networks.csv and
/// tuned_params.json in `dir`, rewriting the report files.
StudyReport report_from_files(const std::filesystem::path& networks_csv,
                              const std::filesystem::path& tuned_json,
                              const std::optional<std::filesystem::path>& out_dir);

}  // namespace tunebench
