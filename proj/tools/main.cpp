// Command-line front end for the tuning study pipeline.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "tunebench/errors.hpp"
#include "tunebench/mce.hpp"
#include "tunebench/network_csv.hpp"
#include "tunebench/study.hpp"

namespace fs = std::filesystem;
using namespace tunebench;

namespace {

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  for (const auto& field : split_csv_line(text)) {
    const double v = parse_double(field);
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("grid value " + field + " outside [0,1]");
    grid.push_back(v);
  }
  if (grid.empty()) throw std::invalid_argument("empty grid");
  return grid;
}

std::vector<Calculus> parse_methods(const std::string& text) {
  if (text == "all") return {kAllCalculi.begin(), kAllCalculi.end()};
  std::vector<Calculus> methods;
  for (const auto& field : split_csv_line(text)) methods.push_back(parse_calculus(field));
  if (methods.empty()) throw std::invalid_argument("no methods given");
  return methods;
}

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw std::invalid_argument("expected true or false, got '" + text + "'");
}

void print_summary(const StudyReport& report) {
  for (const auto& s : report.calculi) {
    std::cout << to_string(s.calculus) << ": average RMSE " << s.rmse.mean << " (high "
              << s.rmse.high << ", low " << s.rmse.low << ")\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tune uncertain-inference calculi against minimum cross-entropy posteriors"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::size_t count = 109;
  std::string grid_text = "0.999,0.75,0.5,0.25,0.001";
  std::string methods_text = "all";
  std::size_t restarts = 4;
  std::string clamp_text = "true";
  unsigned threads = 0;
  std::string networks_path, norms_path, tuned_path, out_path, networks_file;

  auto* generate = app.add_subcommand("generate", "Sample joint tables uniformly from the simplex");
  generate->add_option("--seed", seed, "Master seed")->required();
  generate->add_option("--networks", count, "Number of tables")->check(CLI::PositiveNumber);
  generate->add_option("--out", out_path, "Output networks CSV")->required();
  generate->add_option("--threads", threads, "Worker threads (0 = all cores)");

  auto* solve = app.add_subcommand("solve", "Compute minimum cross-entropy norms on a probe grid");
  solve->add_option("--networks", networks_path, "Networks CSV")->required();
  solve->add_option("--grid", grid_text, "Comma-separated evidence levels");
  solve->add_option("--out", out_path, "Output norms CSV")->required();
  solve->add_option("--threads", threads, "Worker threads (0 = all cores)");

  auto* tune_cmd = app.add_subcommand("tune", "Tune each calculus per network against the norms");
  tune_cmd->add_option("--networks", networks_path, "Networks CSV")->required();
  tune_cmd->add_option("--norms", norms_path, "Norms CSV")->required();
  tune_cmd->add_option("--methods", methods_text, "Comma-separated calculi or 'all'");
  tune_cmd->add_option("--restarts", restarts, "Random restarts per tuning");
  tune_cmd->add_option("--seed", seed, "Seed for random restarts")->required();
  tune_cmd->add_option("--mycin-clamp", clamp_text, "Use max(0,u) MYCIN premise attenuation");
  tune_cmd->add_option("--out", out_path, "Output tuned parameter JSON")->required();
  tune_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");

  auto* report_cmd = app.add_subcommand("report", "Aggregate statistics from persisted results");
  report_cmd->add_option("--networks", networks_path, "Networks CSV")->required();
  report_cmd->add_option("--tuned", tuned_path, "Tuned parameter JSON")->required();
  report_cmd->add_option("--out", out_path, "Output directory")->required();

  auto* study = app.add_subcommand("study", "Run every stage and write all artifacts");
  study->add_option("--seed", seed, "Master seed")->required();
  study->add_option("--networks", count, "Number of sampled tables")->check(CLI::PositiveNumber);
  study->add_option("--networks-file", networks_file, "Read tables from CSV instead of sampling");
  study->add_option("--grid", grid_text, "Comma-separated evidence levels");
  study->add_option("--methods", methods_text, "Comma-separated calculi or 'all'");
  study->add_option("--restarts", restarts, "Random restarts per tuning");
  study->add_option("--mycin-clamp", clamp_text, "Use max(0,u) MYCIN premise attenuation");
  study->add_option("--out", out_path, "Output directory")->required();
  study->add_option("--threads", threads, "Worker threads (0 = all cores)");

  CLI11_PARSE(app, argc, argv);

  std::string stage = app.get_subcommands().front()->get_name();
  try {
    if (*generate) {
      write_networks_csv(out_path, generate_networks(seed, count, threads));
    } else if (*solve) {
      const auto grid = parse_grid(grid_text);
      write_norms_csv(out_path, solve_all(read_networks_csv(networks_path), grid, {}, threads));
    } else if (*tune_cmd) {
      const auto networks = read_networks_csv(networks_path);
      const auto norms = read_norms_csv(norms_path);
      RunMetadata metadata{seed, {}, parse_methods(methods_text), restarts, parse_bool(clamp_text)};
      // Recover the evidence levels from the E1 column, in file order.
      for (const auto& r : norms) {
        if (r.network_id != norms.front().network_id) break;
        if (metadata.grid.empty() || metadata.grid.back() != r.probe.p1) {
          metadata.grid.push_back(r.probe.p1);
        }
      }
      write_tuned_json(out_path, tune_all(networks, norms, metadata, {}, threads));
    } else if (*report_cmd) {
      print_summary(report_from_files(networks_path, tuned_path, fs::path(out_path)));
    } else if (*study) {
      StudyConfig config;
      config.seed = seed;
      config.networks = count;
      config.grid = parse_grid(grid_text);
      config.methods = parse_methods(methods_text);
      config.restarts = restarts;
      config.mycin_clamp = parse_bool(clamp_text);
      config.threads = threads;
      if (!networks_file.empty()) config.networks_file = fs::path(networks_file);
      print_summary(run_study(config, fs::path(out_path)));
    }
  } catch (const std::exception& e) {
    std::cerr << "error [" << stage << "]: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
