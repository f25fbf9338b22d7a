#include "tunebench/study.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "tunebench/errors.hpp"
#include "tunebench/parallel.hpp"
#include "tunebench/params_json.hpp"
#include "tunebench/random.hpp"
#include "tunebench/sampler.hpp"

namespace tunebench {

namespace {

using nlohmann::json;

[[noreturn]] void rethrow_annotated(const std::string& context) {
  try {
    throw;
  } catch (const DegenerateSlice& e) {
    throw DegenerateSlice(context + ": " + e.what());
  } catch (const InvalidProbe& e) {
    throw InvalidProbe(context + ": " + e.what());
  } catch (const NoConvergence& e) {
    throw NoConvergence(context + ": " + e.what());
  } catch (const OptimizerFailure& e) {
    throw OptimizerFailure(context + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(context + ": " + e.what());
  }
}

std::string_view stop_name(CgStop stop) {
  switch (stop) {
    case CgStop::Gradient: return "gradient";
    case CgStop::RelativeChange: return "relative_change";
    case CgStop::IterationLimit: return "iteration_limit";
    case CgStop::LineSearch: return "line_search";
  }
  return "?";
}

CgStop parse_stop(const std::string& name) {
  for (CgStop s : {CgStop::Gradient, CgStop::RelativeChange, CgStop::IterationLimit,
                   CgStop::LineSearch}) {
    if (stop_name(s) == name) return s;
  }
  throw FormatError("unknown stop reason '" + name + "'");
}

std::string_view outcome_name(AnovaOutcome outcome) {
  switch (outcome) {
    case AnovaOutcome::Ok: return "ok";
    case AnovaOutcome::NoVariance: return "not_significant";
    case AnovaOutcome::ZeroError: return "infinite";
  }
  return "?";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
}

json metadata_to_json(const RunMetadata& m) {
  json methods = json::array();
  for (Calculus c : m.methods) methods.push_back(std::string(to_string(c)));
  return {{"seed", m.seed},
          {"grid", m.grid},
          {"methods", methods},
          {"restarts", m.restarts},
          {"mycin_clamp", m.mycin_clamp}};
}

RunMetadata metadata_from_json(const json& doc) {
  RunMetadata m;
  m.seed = doc.at("seed").get<std::uint64_t>();
  m.grid = doc.at("grid").get<std::vector<double>>();
  for (const auto& name : doc.at("methods")) m.methods.push_back(parse_calculus(name.get<std::string>()));
  m.restarts = doc.at("restarts").get<std::size_t>();
  m.mycin_clamp = doc.at("mycin_clamp").get<bool>();
  return m;
}

json optional_number(const std::optional<double>& v) {
  return v && std::isfinite(*v) ? json(*v) : json(nullptr);
}

std::string fixed(double v, int digits) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(digits);
  out << v;
  return out.str();
}

}  // namespace

std::vector<Network> generate_networks(std::uint64_t seed, std::size_t count, unsigned threads) {
  const auto tables = sample_tables({seed, count, threads});
  std::vector<Network> networks;
  networks.reserve(tables.size());
  for (std::size_t i = 0; i < tables.size(); ++i) {
    networks.push_back({std::to_string(i + 1), tables[i]});
  }
  return networks;
}

std::vector<NormRecord> solve_all(const std::vector<Network>& networks,
                                  const std::vector<double>& grid, const IpfOptions& ipf,
                                  unsigned threads) {
  const auto probes = probe_grid(grid);
  std::vector<std::vector<NormRecord>> per_network(networks.size());
  parallel_for(networks.size(), threads, [&](std::size_t i) {
    try {
      per_network[i] = solve_norms(networks[i].id, networks[i].table, probes, ipf);
    } catch (...) {
      rethrow_annotated("network " + networks[i].id);
    }
  });
  std::vector<NormRecord> all;
  for (auto& block : per_network) all.insert(all.end(), block.begin(), block.end());
  return all;
}

std::uint64_t network_tuning_seed(std::uint64_t seed, std::size_t index) {
  return derive_seed(seed, {0x6e6574ULL, index});
}

TunedSet tune_all(const std::vector<Network>& networks, const std::vector<NormRecord>& norms,
                  const RunMetadata& metadata, const CgOptions& cg, unsigned threads) {
  std::map<std::string, std::vector<const NormRecord*>> by_id;
  for (const auto& r : norms) by_id[r.network_id].push_back(&r);

  std::vector<ProblemSet> problems;
  problems.reserve(networks.size());
  for (const auto& network : networks) {
    const auto it = by_id.find(network.id);
    if (it == by_id.end()) throw FormatError("no norms for network " + network.id);
    std::vector<EvidenceProbe> probes;
    std::vector<double> targets;
    for (const NormRecord* r : it->second) {
      probes.push_back(r->probe);
      targets.push_back(r->posterior_c);
    }
    try {
      problems.push_back(make_problem_set(std::move(probes), std::move(targets)));
    } catch (...) {
      rethrow_annotated("network " + network.id);
    }
  }

  const std::size_t k = metadata.methods.size();
  TunedSet tuned{metadata, std::vector<TunedEntry>(networks.size() * k)};
  parallel_for(networks.size() * k, threads, [&](std::size_t task) {
    const std::size_t i = task / k;
    const Calculus calculus = metadata.methods[task % k];
    TunerConfig config;
    config.restarts = metadata.restarts;
    config.seed = network_tuning_seed(metadata.seed, i);
    config.cg = cg;
    config.eval.mycin_premise =
        metadata.mycin_clamp ? MycinPremise::Clamped : MycinPremise::SignedProduct;
    try {
      tuned.entries[task] = {networks[i].id, tune(calculus, problems[i], networks[i].table, config)};
    } catch (...) {
      rethrow_annotated("network " + networks[i].id + ", " + std::string(to_string(calculus)));
    }
  });
  return tuned;
}

std::vector<NetworkResult> network_results(const std::vector<Network>& networks,
                                           const TunedSet& tuned) {
  std::map<std::string, std::vector<const TunedEntry*>> by_id;
  for (const auto& e : tuned.entries) by_id[e.network_id].push_back(&e);

  std::vector<NetworkResult> results;
  results.reserve(networks.size());
  for (const auto& network : networks) {
    NetworkResult r;
    r.network_id = network.id;
    try {
      r.additivity = additivity_factor(network.table);
    } catch (...) {
      rethrow_annotated("network " + network.id);
    }
    const auto it = by_id.find(network.id);
    if (it == by_id.end()) throw FormatError("no tuned parameters for network " + network.id);
    for (Calculus c : tuned.metadata.methods) {
      const auto match = std::find_if(it->second.begin(), it->second.end(), [&](const TunedEntry* e) {
        return calculus_of(e->result.params) == c;
      });
      if (match == it->second.end()) {
        throw FormatError("network " + network.id + " has no " + std::string(to_string(c)) +
                          " parameters");
      }
      r.fits.push_back({c, (*match)->result.rmse, (*match)->result.mse});
    }
    results.push_back(std::move(r));
  }
  return results;
}

StudyReport build_report(const std::vector<NetworkResult>& results, const TunedSet& tuned) {
  if (results.empty()) throw InsufficientData("no networks to report on");
  StudyReport report;
  report.metadata = tuned.metadata;
  report.networks = results.size();
  report.probes_per_network = tuned.metadata.grid.size() * tuned.metadata.grid.size();

  const std::size_t k = tuned.metadata.methods.size();
  std::vector<double> additivity;
  std::vector<std::vector<double>> rmse(k), mse(k);
  std::vector<std::vector<double>> anova_rows;
  for (const auto& r : results) {
    additivity.push_back(r.additivity);
    std::vector<double> row;
    for (std::size_t j = 0; j < k; ++j) {
      rmse[j].push_back(r.fits[j].rmse);
      mse[j].push_back(r.fits[j].mse);
      row.push_back(r.fits[j].rmse);
    }
    anova_rows.push_back(std::move(row));
  }
  report.additivity = summarize(additivity);

  for (std::size_t j = 0; j < k; ++j) {
    CalculusSummary s{tuned.metadata.methods[j], summarize(rmse[j]),
                      std::sqrt(summarize(mse[j]).mean), std::nullopt};
    if (results.size() >= 3) {
      try {
        s.regression = ols_fit(additivity, rmse[j]);
      } catch (const ZeroVariance&) {
      }
    }
    report.calculi.push_back(s);
  }

  report.correlations.assign(k, std::vector<std::optional<double>>(k));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      if (results.size() < 3) continue;
      try {
        // The diagonal is 1 whenever the series is not constant.
        report.correlations[a][b] = a == b ? (pearson(rmse[a], rmse[a]), 1.0) : pearson(rmse[a], rmse[b]);
      } catch (const ZeroVariance&) {
        report.correlations[a][b].reset();
      }
    }
  }

  if (results.size() >= 2 && k >= 2) report.anova = rm_anova_f(anova_rows);

  const auto independence =
      std::find(tuned.metadata.methods.begin(), tuned.metadata.methods.end(), Calculus::Independence);
  if (independence != tuned.metadata.methods.end()) {
    const std::size_t ji = static_cast<std::size_t>(independence - tuned.metadata.methods.begin());
    for (std::size_t i = 0; i < results.size(); ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        if (j != ji && rmse[j][i] < rmse[ji][i] - 1e-9) {
          ++report.independence_exceptions;
          break;
        }
      }
    }
  }
  return report;
}

json tuned_to_json(const TunedSet& tuned) {
  json entries = json::array();
  for (const auto& e : tuned.entries) {
    json starts = json::array();
    for (const auto& s : e.result.starts) {
      starts.push_back({{"theoretical", s.theoretical},
                        {"initial_mse", s.initial_mse},
                        {"final_mse", s.final_mse},
                        {"iterations", s.iterations},
                        {"stop", std::string(stop_name(s.stop))}});
    }
    entries.push_back({{"network_id", e.network_id},
                       {"params", params_to_json(e.result.params)},
                       {"mse", e.result.mse},
                       {"rmse", e.result.rmse},
                       {"theoretical_mse", e.result.theoretical_mse},
                       {"gradient_norm", e.result.gradient_norm},
                       {"starts_agreeing", e.result.starts_agreeing},
                       {"starts", starts}});
  }
  return {{"metadata", metadata_to_json(tuned.metadata)}, {"results", entries}};
}

TunedSet tuned_from_json(const json& doc) {
  try {
    TunedSet tuned;
    tuned.metadata = metadata_from_json(doc.at("metadata"));
    for (const auto& item : doc.at("results")) {
      TunedEntry e;
      e.network_id = item.at("network_id").get<std::string>();
      e.result.params = params_from_json(item.at("params"));
      e.result.mse = item.at("mse").get<double>();
      e.result.rmse = item.at("rmse").get<double>();
      e.result.theoretical_mse = item.at("theoretical_mse").get<double>();
      e.result.gradient_norm = item.at("gradient_norm").get<double>();
      e.result.starts_agreeing = item.at("starts_agreeing").get<std::size_t>();
      for (const auto& s : item.at("starts")) {
        e.result.starts.push_back({s.at("theoretical").get<bool>(), s.at("initial_mse").get<double>(),
                                   s.at("final_mse").get<double>(),
                                   s.at("iterations").get<std::size_t>(),
                                   parse_stop(s.at("stop").get<std::string>())});
      }
      if (!(e.result.mse >= 0.0)) throw FormatError("negative mse for network " + e.network_id);
      tuned.entries.push_back(std::move(e));
    }
    return tuned;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed tuned parameter file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

void write_tuned_json(const std::filesystem::path& path, const TunedSet& tuned) {
  write_text(path, tuned_to_json(tuned).dump(2) + "\n");
}

TunedSet read_tuned_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return tuned_from_json(doc);
}

void write_per_network_rmse_csv(const std::filesystem::path& path,
                                const std::vector<NetworkResult>& results,
                                const std::vector<Calculus>& methods) {
  std::ostringstream out;
  out << "network_id,additivity";
  for (Calculus c : methods) out << ',' << to_string(c);
  out << '\n';
  for (const auto& r : results) {
    out << r.network_id << ',' << format_double(r.additivity);
    for (const auto& fit : r.fits) out << ',' << format_double(fit.rmse);
    out << '\n';
  }
  write_text(path, out.str());
}

json report_to_json(const StudyReport& report) {
  json rmse = json::object();
  json regressions = json::object();
  json names = json::array();
  for (const auto& s : report.calculi) {
    const std::string name(to_string(s.calculus));
    names.push_back(name);
    rmse[name] = {{"average", s.rmse.mean},
                  {"high", s.rmse.high},
                  {"low", s.rmse.low},
                  {"pooled", s.pooled_rmse}};
    regressions[name] = s.regression ? json{{"slope", s.regression->slope},
                                            {"intercept", s.regression->intercept}}
                                     : json(nullptr);
  }
  json matrix = json::array();
  for (const auto& row : report.correlations) {
    json r = json::array();
    for (const auto& v : row) r.push_back(optional_number(v));
    matrix.push_back(r);
  }
  json anova = nullptr;
  if (report.anova) {
    anova = {{"f", std::isfinite(report.anova->f) ? json(report.anova->f) : json(nullptr)},
             {"df1", report.anova->df1},
             {"df2", report.anova->df2},
             {"p_value", report.anova->p_value},
             {"outcome", std::string(outcome_name(report.anova->outcome))}};
  }
  return {{"metadata", metadata_to_json(report.metadata)},
          {"networks", report.networks},
          {"probes_per_network", report.probes_per_network},
          {"additivity", {{"average", report.additivity.mean},
                          {"high", report.additivity.high},
                          {"low", report.additivity.low}}},
          {"rmse", rmse},
          {"correlations", {{"methods", names}, {"matrix", matrix}}},
          {"regressions", regressions},
          {"anova", anova},
          {"independence_exceptions", report.independence_exceptions}};
}

std::string report_to_markdown(const StudyReport& report) {
  std::ostringstream md;
  md << "# Tuned inference calculi: accuracy against the minimum cross-entropy norm\n\n";
  md << "Seed " << report.metadata.seed << ", " << report.networks << " networks, "
     << report.probes_per_network << " probes per network, " << report.metadata.restarts
     << " random restarts, MYCIN premise "
     << (report.metadata.mycin_clamp ? "clamped" : "signed") << ".\n\n";

  md << "## Root mean squared errors\n\n";
  md << "| Inference method | Average RMSE | High RMSE | Low RMSE | Pooled RMSE |\n";
  md << "|---|---|---|---|---|\n";
  for (const auto& s : report.calculi) {
    md << "| " << to_string(s.calculus) << " | " << fixed(s.rmse.mean, 5) << " | "
       << fixed(s.rmse.high, 5) << " | " << fixed(s.rmse.low, 5) << " | "
       << fixed(s.pooled_rmse, 5) << " |\n";
  }

  md << "\n## Pearson correlations between per-network RMSEs\n\n|  |";
  for (const auto& s : report.calculi) md << ' ' << to_string(s.calculus) << " |";
  md << "\n|---|";
  for (std::size_t j = 0; j < report.calculi.size(); ++j) md << "---|";
  md << '\n';
  for (std::size_t a = 0; a < report.calculi.size(); ++a) {
    md << "| " << to_string(report.calculi[a].calculus) << " |";
    for (std::size_t b = 0; b < report.calculi.size(); ++b) {
      if (b < a) {
        md << "  |";
      } else if (b == a) {
        md << " -- |";
      } else {
        const auto& v = report.correlations[a][b];
        md << ' ' << (v ? fixed(*v, 4) : std::string("n/a")) << " |";
      }
    }
    md << '\n';
  }

  md << "\n## RMSE regressed on additivity factor\n\n";
  md << "Additivity factor: average " << fixed(report.additivity.mean, 5) << ", high "
     << fixed(report.additivity.high, 5) << ", low " << fixed(report.additivity.low, 5)
     << ".\n\n";
  for (const auto& s : report.calculi) {
    md << "- " << to_string(s.calculus) << " RMSE = ";
    if (s.regression) {
      md << fixed(s.regression->slope, 4) << " * additivity_factor + "
         << fixed(s.regression->intercept, 5) << '\n';
    } else {
      md << "n/a\n";
    }
  }

  md << "\n## Repeated-measures ANOVA across calculi\n\n";
  if (report.anova) {
    md << "F(" << report.anova->df1 << "," << report.anova->df2 << ") = ";
    if (report.anova->outcome == AnovaOutcome::ZeroError) {
      md << "inf";
    } else {
      md << fixed(report.anova->f, 2);
    }
    md << ", p = " << format_double(report.anova->p_value) << " ("
       << outcome_name(report.anova->outcome) << ")\n";
  } else {
    md << "n/a\n";
  }
  md << "\nNetworks where a calculus beat the independence model: "
     << report.independence_exceptions << "\n";
  return md.str();
}

void write_report_files(const std::filesystem::path& dir, const std::vector<NetworkResult>& results,
                        const StudyReport& report) {
  std::filesystem::create_directories(dir);
  write_per_network_rmse_csv(dir / "per_network_rmse.csv", results, report.metadata.methods);
  write_text(dir / "report.md", report_to_markdown(report));
  write_text(dir / "report.json", report_to_json(report).dump(2) + "\n");
}

StudyReport run_study(const StudyConfig& config, const std::optional<std::filesystem::path>& out_dir) {
  if (config.methods.empty()) throw std::invalid_argument("no calculi selected");
  if (config.grid.empty()) throw std::invalid_argument("empty evidence grid");
  if (out_dir) std::filesystem::create_directories(*out_dir);

  std::vector<Network> networks;
  try {
    networks = config.networks_file ? read_networks_csv(*config.networks_file)
                                    : generate_networks(config.seed, config.networks, config.threads);
  } catch (...) {
    rethrow_annotated("generate");
  }
  if (out_dir) write_networks_csv(*out_dir / "networks.csv", networks);

  std::vector<NormRecord> norms;
  try {
    norms = solve_all(networks, config.grid, config.ipf, config.threads);
  } catch (...) {
    rethrow_annotated("solve");
  }
  if (out_dir) write_norms_csv(*out_dir / "norms.csv", norms);

  const RunMetadata metadata{config.seed, config.grid, config.methods, config.restarts,
                             config.mycin_clamp};
  TunedSet tuned;
  try {
    tuned = tune_all(networks, norms, metadata, config.cg, config.threads);
  } catch (...) {
    rethrow_annotated("tune");
  }
  if (out_dir) write_tuned_json(*out_dir / "tuned_params.json", tuned);

  try {
    const auto results = network_results(networks, tuned);
    StudyReport report = build_report(results, tuned);
    if (out_dir) write_report_files(*out_dir, results, report);
    return report;
  } catch (...) {
    rethrow_annotated("report");
  }
}

StudyReport report_from_files(const std::filesystem::path& networks_csv,
                              const std::filesystem::path& tuned_json,
                              const std::optional<std::filesystem::path>& out_dir) {
  const auto networks = read_networks_csv(networks_csv);
  const auto tuned = read_tuned_json(tuned_json);
  const auto results = network_results(networks, tuned);
  StudyReport report = build_report(results, tuned);
  if (out_dir) write_report_files(*out_dir, results, report);
  return report;
}

}  // namespace tunebench
