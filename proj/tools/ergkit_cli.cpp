// Command line front end: solve / curve / mf / sample / check.
// Exit codes: 0 success, 1 usage, 2 domain rejection, 3 numerical failure.
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ergkit/glauber.hpp"
#include "ergkit/limit_lab.hpp"
#include "ergkit/meanfield_exact.hpp"
#include "ergkit/model.hpp"
#include "ergkit/scalar_landscape.hpp"

using json = nlohmann::json;
using namespace ergkit;

namespace {

std::string g17(double value) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char chunk[8192];
  while (in.read(chunk, sizeof(chunk)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(chunk[i]);
      hash *= 0x100000001b3ULL;
    }
  }
  return hash;
}

struct ManifestWriter {
  std::string subcommand;
  json parameters = json::object();
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  std::string path;  // empty: derive from the first output

  void write() const {
    json doc;
    doc["subcommand"] = subcommand;
    doc["version"] = kVersion;
    doc["parameters"] = parameters;
    doc["seed"] = seed;
    doc["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    json outs = json::array();
    for (const std::string& out : outputs) {
      char digest[32];
      std::snprintf(digest, sizeof(digest), "%016llx",
                    static_cast<unsigned long long>(fnv1a64_file(out)));
      outs.push_back({{"path", out}, {"fnv1a64", digest}});
    }
    doc["outputs"] = outs;
    const std::string target =
        !path.empty() ? path
        : outputs.empty() ? subcommand + ".manifest.json"
                          : outputs.front() + ".manifest.json";
    std::ofstream os(target);
    os << doc.dump(2) << '\n';
  }
};

const char* phase_name(Phase tag) {
  switch (tag) {
    case Phase::Uniqueness:
      return "uniqueness";
    case Phase::CriticalCurve:
      return "critical-curve";
    case Phase::CriticalPoint:
      return "critical-point";
  }
  return "?";
}

json law_to_json(const LimitLaw& law) {
  if (const auto* g = std::get_if<GaussianLaw>(&law)) {
    return {{"kind", "gaussian"}, {"variance", g->variance}};
  }
  if (const auto* q = std::get_if<QuarticLaw>(&law)) {
    return {{"kind", "quartic"}, {"scale", q->scale}};
  }
  const auto& m = std::get<MixtureLaw>(law);
  return {{"kind", "mixture"},
          {"kappa", m.kappa},
          {"atom_low", m.atom_low},
          {"atom_high", m.atom_high}};
}

void warn_if_slow_mixing(const ModelParams& p) {
  const PhaseClass phase = classify_phase(p);
  if (phase.tag != Phase::Uniqueness) {
    std::cerr << "warning: parameters sit on the " << phase_name(phase.tag)
              << "; Glauber mixing is exponential there, samples may not "
                 "equilibrate\n";
  }
}

InitSpec parse_init(const std::string& text) {
  if (text == "empty") return {InitSpec::Kind::Empty, 0.0};
  if (text == "complete") return {InitSpec::Kind::Complete, 0.0};
  if (text.rfind("bernoulli", 0) == 0) {
    InitSpec spec{InitSpec::Kind::Bernoulli, 0.5};
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
      spec.p = std::stod(text.substr(colon + 1));
      if (!(spec.p >= 0.0 && spec.p <= 1.0)) {
        throw CLI::ValidationError("--init", "bernoulli p must be in [0,1]");
      }
    }
    return spec;
  }
  throw CLI::ValidationError(
      "--init", "expected empty, complete, or bernoulli[:p]");
}

// ---------------------------------------------------------------------------

int cmd_solve(double alpha, double h, bool as_json,
              const std::string& out_path, std::uint64_t seed,
              const std::string& manifest_path) {
  ManifestWriter manifest{"solve"};
  manifest.parameters = {{"alpha", alpha}, {"h", h}, {"json", as_json}};
  manifest.seed = seed;
  manifest.path = manifest_path;

  const ModelParams p{alpha, h};
  const MaximizerSet ms = find_maximizers(p);
  const PhaseClass phase = classify_phase(p);
  const LimitLaw law = limit_law_triangle(p);

  std::ostringstream body;
  if (as_json) {
    json doc;
    doc["alpha"] = alpha;
    doc["h"] = h;
    doc["phase"] = phase_name(phase.tag);
    doc["maximizers"] = ms.maximizers;
    doc["residuals"] = ms.residuals;
    doc["free_energy"] = ms.free_energy;
    if (phase.tag == Phase::CriticalCurve) {
      doc["u_low"] = phase.u_low;
      doc["u_high"] = phase.u_high;
      doc["kappa"] = mixture_kappa(alpha, phase.u_low, phase.u_high);
    }
    if (phase.tag == Phase::CriticalPoint) doc["u_critical"] = phase.u_low;
    doc["limit_law"] = law_to_json(law);
    body << doc.dump(2) << '\n';
  } else {
    body << "phase: " << phase_name(phase.tag) << '\n';
    for (std::size_t i = 0; i < ms.maximizers.size(); ++i) {
      body << "u*: " << g17(ms.maximizers[i])
           << " (residual " << g17(ms.residuals[i]) << ")\n";
    }
    body << "free energy: " << g17(ms.free_energy) << '\n';
    if (const auto* g = std::get_if<GaussianLaw>(&law)) {
      body << "limit law: gaussian, variance " << g17(g->variance) << '\n';
    } else if (const auto* q = std::get_if<QuarticLaw>(&law)) {
      body << "limit law: quartic, scale " << g17(q->scale) << '\n';
    } else {
      const auto& m = std::get<MixtureLaw>(law);
      body << "limit law: mixture, kappa " << g17(m.kappa) << ", atoms "
           << g17(m.atom_low) << " / " << g17(m.atom_high) << '\n';
    }
  }
  std::cout << body.str();
  if (!out_path.empty()) {
    std::ofstream os(out_path);
    os << body.str();
    manifest.outputs.push_back(out_path);
  }
  manifest.write();
  return 0;
}

int cmd_curve(double alpha_min, double alpha_max, int points,
              const std::string& out_path, std::uint64_t seed,
              const std::string& manifest_path) {
  ManifestWriter manifest{"curve"};
  manifest.parameters = {{"alpha_min", alpha_min},
                         {"alpha_max", alpha_max},
                         {"points", points},
                         {"out", out_path}};
  manifest.seed = seed;
  manifest.path = manifest_path;

  if (points < 2) throw CLI::ValidationError("--points", "need at least 2");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    grid.push_back(alpha_min + (alpha_max - alpha_min) * i / (points - 1));
  }
  const auto curve = trace_critical_curve(grid);

  std::ofstream os(out_path);
  os << "alpha,q_alpha,u_low,u_high,kappa\n";
  for (const CurvePoint& pt : curve) {
    os << g17(pt.alpha) << ',' << g17(pt.h) << ',' << g17(pt.u_low) << ','
       << g17(pt.u_high) << ','
       << g17(mixture_kappa(pt.alpha, pt.u_low, pt.u_high)) << '\n';
  }
  os.close();
  manifest.outputs.push_back(out_path);
  manifest.write();
  return 0;
}

int cmd_mf(int n, double alpha, double h, const std::string& out_path,
           std::vector<double> window, std::vector<int> moment_orders,
           std::uint64_t seed, const std::string& manifest_path) {
  ManifestWriter manifest{"mf"};
  manifest.parameters = {{"n", n},       {"alpha", alpha},
                         {"h", h},       {"window", window},
                         {"moments", moment_orders}, {"out", out_path}};
  manifest.seed = seed;
  manifest.path = manifest_path;

  const ModelParams p{alpha, h};
  EdgeDensityPmf pmf = build_pmf(n, p);
  if (!window.empty()) {
    if (window.size() != 2) {
      throw CLI::ValidationError("--window", "expected INDEX DELTA");
    }
    const MaximizerSet ms = find_maximizers(p);
    pmf = conditional_pmf(pmf, {static_cast<int>(window[0]), window[1]}, ms);
  }
  std::ofstream os(out_path);
  write_pmf_csv(os, pmf);
  os.close();

  json summary;
  summary["n"] = n;
  summary["support_size"] = pmf.support_size();
  summary["log_partition"] = pmf.log_partition();
  summary["free_energy_density"] = pmf.free_energy_density();
  json moments = json::object();
  if (moment_orders.empty()) moment_orders = {1, 3};
  for (int k : moment_orders) {
    moments[std::to_string(k)] = moment(pmf, k);
  }
  summary["moments"] = moments;
  std::cout << summary.dump(2) << '\n';

  manifest.outputs.push_back(out_path);
  manifest.write();
  return 0;
}

json sidecar_json(const ChainConfig& cfg, int chains,
                  const std::vector<SampleBatch>& batches,
                  const std::string& init_text,
                  const std::string& rule_text) {
  json doc;
  doc["n"] = cfg.n;
  doc["alpha"] = cfg.params.alpha;
  doc["h"] = cfg.params.h;
  doc["seed"] = cfg.seed;
  doc["burn_in_steps"] = cfg.effective_burn_in();
  doc["thin_steps"] = cfg.effective_thin();
  doc["num_samples"] = cfg.num_samples;
  doc["chains"] = chains;
  doc["init"] = init_text;
  doc["update_rule"] = rule_text;
  doc["rng"] = Xoshiro256pp::kName;
  doc["version"] = kVersion;
  json walls = json::array();
  for (const SampleBatch& b : batches) walls.push_back(b.wall_time_seconds);
  doc["chain_wall_time_seconds"] = walls;
  return doc;
}

int cmd_sample(int n, double alpha, double h, std::uint64_t seed,
               std::int64_t burnin, std::int64_t thin, std::int64_t samples,
               int chains, const std::string& init_text,
               const std::string& rule_text, const std::string& out_path,
               const std::string& manifest_path) {
  ManifestWriter manifest{"sample"};
  manifest.parameters = {{"n", n},           {"alpha", alpha},
                         {"h", h},           {"burnin", burnin},
                         {"thin", thin},     {"samples", samples},
                         {"chains", chains}, {"init", init_text},
                         {"update_rule", rule_text}, {"out", out_path}};
  manifest.seed = seed;
  manifest.path = manifest_path;

  ChainConfig cfg;
  cfg.n = n;
  cfg.params = {alpha, h};
  cfg.seed = seed;
  cfg.burn_in_steps = burnin;
  cfg.thin_steps = thin;
  cfg.num_samples = samples;
  cfg.init = parse_init(init_text);
  if (rule_text == "literal") {
    cfg.rule = UpdateRule::Literal;
  } else if (rule_text != "hamiltonian") {
    throw CLI::ValidationError("--update-rule",
                               "expected hamiltonian or literal");
  }
  warn_if_slow_mixing(cfg.params);

  const std::vector<SampleBatch> batches = run_chains(cfg, chains);
  std::ofstream os(out_path);
  os << "step,edge_count,triangle_count\n";
  for (const SampleBatch& batch : batches) {
    for (const SampleRecord& r : batch.records) {
      os << r.step << ',' << r.edge_count << ',' << r.triangle_count << '\n';
    }
  }
  os.close();

  const std::string sidecar_path = out_path + ".json";
  std::ofstream sc(sidecar_path);
  sc << sidecar_json(cfg, chains, batches, init_text, rule_text).dump(2)
     << '\n';
  sc.close();

  manifest.outputs.push_back(out_path);
  manifest.outputs.push_back(sidecar_path);
  manifest.write();
  return 0;
}

int cmd_check(const std::string& batch_path, std::string sidecar_path,
              const std::string& law_text, const std::string& out_path,
              const std::string& hist_path, int bins, std::uint64_t seed,
              const std::string& manifest_path) {
  ManifestWriter manifest{"check"};
  manifest.parameters = {{"batch", batch_path}, {"law", law_text},
                         {"out", out_path},     {"hist", hist_path},
                         {"bins", bins}};
  manifest.seed = seed;
  manifest.path = manifest_path;

  if (sidecar_path.empty()) sidecar_path = batch_path + ".json";
  std::ifstream sc(sidecar_path);
  if (!sc) {
    throw std::runtime_error("cannot open batch sidecar " + sidecar_path);
  }
  json meta = json::parse(sc);

  SampleBatch batch;
  batch.config.n = meta.at("n").get<int>();
  batch.config.params = {meta.at("alpha").get<double>(),
                         meta.at("h").get<double>()};
  batch.config.seed = meta.at("seed").get<std::uint64_t>();

  std::ifstream in(batch_path);
  if (!in) throw std::runtime_error("cannot open batch file " + batch_path);
  std::string line;
  std::getline(in, line);
  if (line != "step,edge_count,triangle_count") {
    throw std::runtime_error("unexpected batch header: " + line);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    SampleRecord r{};
    if (std::sscanf(line.c_str(), "%lld,%lld,%lld",
                    reinterpret_cast<long long*>(&r.step),
                    reinterpret_cast<long long*>(&r.edge_count),
                    reinterpret_cast<long long*>(&r.triangle_count)) != 3) {
      throw std::runtime_error("bad batch row: " + line);
    }
    batch.records.push_back(r);
  }

  // Resolve the reference law and the matching scaling.
  LimitLaw law = limit_law_triangle(batch.config.params);
  std::string resolved = law_text;
  if (law_text == "auto") {
    if (std::holds_alternative<GaussianLaw>(law)) {
      resolved = "gaussian";
    } else if (std::holds_alternative<QuarticLaw>(law)) {
      resolved = "quartic";
    } else {
      throw std::domain_error(
          "parameters sit on the critical curve; the fluctuation reference "
          "is a mixture, pick gaussian or quartic explicitly");
    }
  } else if (law_text == "gaussian") {
    if (!std::holds_alternative<GaussianLaw>(law)) {
      throw std::domain_error(
          "gaussian reference requested away from the uniqueness region");
    }
  } else if (law_text == "quartic") {
    law = QuarticLaw{std::pow(2.0, 3.5) / 9.0};
  } else {
    throw CLI::ValidationError("--law", "expected auto, gaussian, or quartic");
  }
  const Scaling scaling =
      resolved == "quartic" ? Scaling::NonStdClt : Scaling::Clt;
  const StandardizedSeries series = standardize(batch, scaling);
  const double ks = ks_distance(series, law);
  const MomentReport report = moment_report(series, law);

  json doc;
  doc["n"] = batch.config.n;
  doc["alpha"] = batch.config.params.alpha;
  doc["h"] = batch.config.params.h;
  doc["samples"] = batch.records.size();
  doc["law"] = law_to_json(law);
  doc["scaling"] = resolved == "quartic" ? "nonstandard-clt" : "clt";
  doc["center"] = series.center;
  doc["ks_distance"] = ks;
  json rows = json::array();
  for (const MomentRow& row : report.rows) {
    rows.push_back({{"order", row.order},
                    {"empirical", row.empirical},
                    {"theoretical", row.theoretical},
                    {"gap", row.gap}});
  }
  doc["moments"] = rows;
  doc["kurtosis_empirical"] = report.kurtosis_empirical;
  doc["kurtosis_theoretical"] = report.kurtosis_theoretical;

  std::ofstream os(out_path);
  os << doc.dump(2) << '\n';
  os.close();
  manifest.outputs.push_back(out_path);

  if (!hist_path.empty()) {
    const auto histogram = make_histogram(series, law, bins);
    std::ofstream hs(hist_path);
    write_histogram_csv(hs, histogram);
    hs.close();
    manifest.outputs.push_back(hist_path);
  }
  std::cout << "ks_distance: " << g17(ks) << '\n';
  manifest.write();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"edge-triangle random graph toolkit"};
  app.require_subcommand(1);
  // --h is a model parameter, so help is long-form only.
  app.set_help_flag("--help", "print help");

  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "global seed recorded in the run manifest");
  std::string manifest_path;
  app.add_option("--manifest", manifest_path,
                 "manifest destination (default: next to the first output)");

  // solve
  auto* solve = app.add_subcommand("solve", "maximizers, phase, limit law");
  solve->set_help_flag("--help", "print help");
  double alpha = 0.0, h = 0.0;
  bool as_json = false;
  std::string solve_out;
  solve->add_option("--alpha", alpha, "triangle weight")->required();
  solve->add_option("--h", h, "edge weight")->required();
  solve->add_flag("--json", as_json, "JSON output");
  solve->add_option("--out", solve_out, "also write the report to a file");

  // curve
  auto* curve = app.add_subcommand("curve", "trace the coexistence curve");
  curve->set_help_flag("--help", "print help");
  double alpha_min = 3.4, alpha_max = 8.0;
  int points = 50;
  std::string curve_out;
  curve->add_option("--alpha-min", alpha_min, "grid start (> 27/8)")
      ->required();
  curve->add_option("--alpha-max", alpha_max, "grid end")->required();
  curve->add_option("--points", points, "grid size");
  curve->add_option("--out", curve_out, "CSV destination")->required();

  // mf
  auto* mf = app.add_subcommand("mf", "exact finite-size edge density pmf");
  mf->set_help_flag("--help", "print help");
  int mf_n = 0;
  double mf_alpha = 0.0, mf_h = 0.0;
  std::string mf_out;
  std::vector<double> window;
  std::vector<int> moment_orders;
  mf->add_option("--n", mf_n, "graph size")->required();
  mf->add_option("--alpha", mf_alpha, "triangle weight")->required();
  mf->add_option("--h", mf_h, "edge weight")->required();
  mf->add_option("--out", mf_out, "pmf CSV destination")->required();
  mf->add_option("--window", window,
                 "conditioning window: maximizer index (1|2) and exponent")
      ->expected(2);
  mf->add_option("--moments", moment_orders, "moment orders to report");

  // sample
  auto* sample = app.add_subcommand("sample", "Glauber dynamics sampling");
  sample->set_help_flag("--help", "print help");
  int s_n = 0, chains = 1;
  double s_alpha = 0.0, s_h = 0.0;
  std::int64_t burnin = -1, thin = -1, samples = 1000;
  std::string init_text = "bernoulli:0.5";
  std::string rule_text = "hamiltonian";
  std::string sample_out;
  sample->add_option("--n", s_n, "graph size")->required();
  sample->add_option("--alpha", s_alpha, "triangle weight")->required();
  sample->add_option("--h", s_h, "edge weight")->required();
  sample->add_option("--burnin", burnin,
                     "burn-in steps (default ceil(10 n^2 ln n))");
  sample->add_option("--thin", thin, "steps between samples (default n^2)");
  sample->add_option("--samples", samples, "records per chain");
  sample->add_option("--chains", chains, "parallel chains");
  sample->add_option("--init", init_text, "empty | complete | bernoulli[:p]");
  sample->add_option("--update-rule", rule_text, "hamiltonian | literal");
  sample->add_option("--out", sample_out, "CSV destination")->required();

  // check
  auto* check = app.add_subcommand("check", "compare a batch to a limit law");
  check->set_help_flag("--help", "print help");
  std::string batch_path, sidecar_path, law_text = "auto", check_out,
                                        hist_path;
  int bins = 61;
  check->add_option("--batch", batch_path, "batch CSV from sample")
      ->required();
  check->add_option("--sidecar", sidecar_path,
                    "batch sidecar JSON (default <batch>.json)");
  check->add_option("--law", law_text, "auto | gaussian | quartic");
  check->add_option("--out", check_out, "JSON report destination")->required();
  check->add_option("--hist", hist_path, "histogram CSV destination");
  check->add_option("--bins", bins, "histogram bins");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (solve->parsed()) {
      return cmd_solve(alpha, h, as_json, solve_out, seed, manifest_path);
    }
    if (curve->parsed()) {
      return cmd_curve(alpha_min, alpha_max, points, curve_out, seed,
                       manifest_path);
    }
    if (mf->parsed()) {
      return cmd_mf(mf_n, mf_alpha, mf_h, mf_out, window, moment_orders, seed,
                    manifest_path);
    }
    if (sample->parsed()) {
      return cmd_sample(s_n, s_alpha, s_h, seed, burnin, thin, samples, chains,
                        init_text, rule_text, sample_out, manifest_path);
    }
    if (check->parsed()) {
      return cmd_check(batch_path, sidecar_path, law_text, check_out,
                       hist_path, bins, seed, manifest_path);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }
  return 1;
}
