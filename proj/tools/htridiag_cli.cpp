// Command-line driver: model construction, factorization, partner transforms,
// recurrence eigen-solutions and the verification suite, with deterministic
// JSON/CSV output for scripts.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "htridiag/factorization.hpp"
#include "htridiag/models.hpp"
#include "htridiag/oracle.hpp"
#include "htridiag/recurrence.hpp"
#include "htridiag/serialize.hpp"
#include "htridiag/verify.hpp"

namespace {

using htridiag::cplx;
using htridiag::json;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct RunConfig {
  std::string model;
  std::map<std::string, cplx> params;
  std::size_t n = 64;
  std::vector<std::size_t> levels;
  std::optional<cplx> energy;
  bool both_sides = false;
  double tol = 1e-10;
  std::string out;
  std::string format = "json";
  std::string gauge = "one";
};

// Raw option storage; only options the user actually passed override the
// config file.
struct RawOptions {
  std::string config_path;
  std::string model;
  std::vector<double> alpha, beta, gamma, delta;
  double r = 0.0, theta = 0.0;
  std::size_t n = 64;
  std::vector<std::size_t> levels;
  std::vector<double> energy;
  bool both_sides = false;
  double tol = 1e-10;
  std::string out;
  std::string format = "json";
  std::string gauge = "one";
};

void add_common_options(CLI::App* cmd, RawOptions& raw, bool with_model = true) {
  cmd->add_option("--config", raw.config_path,
                  "JSON file mirroring the run configuration");
  if (with_model) {
    cmd->add_option("--name", raw.model, "model name");
    cmd->add_option("--alpha", raw.alpha, "complex parameter alpha (re im)")
        ->expected(2);
    cmd->add_option("--beta", raw.beta, "complex parameter beta (re im)")->expected(2);
    cmd->add_option("--gamma", raw.gamma, "complex parameter gamma (re im)")
        ->expected(2);
    cmd->add_option("--delta", raw.delta, "complex parameter delta (re im)")
        ->expected(2);
    cmd->add_option("--r", raw.r, "squeezing modulus");
    cmd->add_option("--theta", raw.theta, "squeezing phase");
  }
  cmd->add_option("--n", raw.n, "truncation length");
  cmd->add_option("--tol", raw.tol, "tolerance override")->check(CLI::PositiveNumber);
  cmd->add_option("--out", raw.out, "output path (stdout when omitted)");
  cmd->add_option("--format", raw.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
}

RunConfig build_config(const CLI::App* cmd, const RawOptions& raw) {
  RunConfig cfg;
  if (!raw.config_path.empty()) {
    std::ifstream in(raw.config_path);
    if (!in) throw htridiag::InvalidParameterError("cannot open config file: " + raw.config_path);
    json doc = json::parse(in);
    if (doc.contains("model")) cfg.model = doc["model"].get<std::string>();
    if (doc.contains("params")) {
      for (const auto& [key, value] : doc["params"].items()) {
        if (value.is_number())
          cfg.params[key] = cplx(value.get<double>(), 0.0);
        else
          cfg.params[key] = htridiag::complex_from_json(value);
      }
    }
    if (doc.contains("n")) cfg.n = doc["n"].get<std::size_t>();
    if (doc.contains("levels"))
      cfg.levels = doc["levels"].get<std::vector<std::size_t>>();
    if (doc.contains("energy")) cfg.energy = htridiag::complex_from_json(doc["energy"]);
    if (doc.contains("both_sides")) cfg.both_sides = doc["both_sides"].get<bool>();
    if (doc.contains("tol")) cfg.tol = doc["tol"].get<double>();
    if (doc.contains("out")) cfg.out = doc["out"].get<std::string>();
    if (doc.contains("format")) cfg.format = doc["format"].get<std::string>();
    if (doc.contains("gauge")) cfg.gauge = doc["gauge"].get<std::string>();
  }
  auto passed = [&](const std::string& name) {
    const CLI::Option* opt = cmd->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (passed("--name")) cfg.model = raw.model;
  if (passed("--alpha")) cfg.params["alpha"] = cplx(raw.alpha[0], raw.alpha[1]);
  if (passed("--beta")) cfg.params["beta"] = cplx(raw.beta[0], raw.beta[1]);
  if (passed("--gamma")) cfg.params["gamma"] = cplx(raw.gamma[0], raw.gamma[1]);
  if (passed("--delta")) cfg.params["delta"] = cplx(raw.delta[0], raw.delta[1]);
  if (passed("--r")) cfg.params["r"] = cplx(raw.r, 0.0);
  if (passed("--theta")) cfg.params["theta"] = cplx(raw.theta, 0.0);
  if (passed("--n")) cfg.n = raw.n;
  if (passed("--levels")) cfg.levels = raw.levels;
  if (passed("--energy")) cfg.energy = cplx(raw.energy[0], raw.energy[1]);
  if (passed("--both-sides")) cfg.both_sides = raw.both_sides;
  if (passed("--tol")) cfg.tol = raw.tol;
  if (passed("--out")) cfg.out = raw.out;
  if (passed("--format")) cfg.format = raw.format;
  if (passed("--gauge")) cfg.gauge = raw.gauge;
  return cfg;
}

void emit(const RunConfig& cfg, const std::string& content) {
  if (cfg.out.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(cfg.out, std::ios::binary);
  if (!out) throw htridiag::InvalidParameterError("cannot open output path: " + cfg.out);
  out << content;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

void require_json(const RunConfig& cfg) {
  if (cfg.format != "json")
    throw htridiag::InvalidParameterError("this subcommand only supports --format json");
}

htridiag::models::ModelDescriptor load_model(const RunConfig& cfg) {
  if (cfg.model.empty())
    throw htridiag::InvalidParameterError("no model selected; pass --name or a config file");
  return htridiag::models::make_model(cfg.model, cfg.params);
}

json params_to_json(const RunConfig& cfg) {
  json out = json::object();
  for (const auto& [key, value] : cfg.params) out[key] = htridiag::complex_to_json(value);
  return out;
}

int cmd_model_describe(const RunConfig& cfg) {
  require_json(cfg);
  const auto model = load_model(cfg);
  emit(cfg, dump(htridiag::model_to_json(model, cfg.n)));
  return 0;
}

int cmd_band_emit(const RunConfig& cfg) {
  const auto model = load_model(cfg);
  if (cfg.format == "csv") {
    emit(cfg, htridiag::band_to_csv(model.band, cfg.n));
    return 0;
  }
  emit(cfg, dump(htridiag::band_to_json(model.band, cfg.n)));
  return 0;
}

int cmd_factorize(const RunConfig& cfg) {
  require_json(cfg);
  const auto model = load_model(cfg);
  if (cfg.gauge != "one" && cfg.gauge != "model")
    throw htridiag::InvalidParameterError("--gauge must be 'one' or 'model'");
  const htridiag::ComplexSeq gauge =
      cfg.gauge == "model" ? model.factors.c
                           : htridiag::ComplexSeq::constant(cplx(1.0, 0.0), "1");
  const auto solved = htridiag::solve_factorization(model.band, gauge, cfg.n);
  emit(cfg, dump(htridiag::factorization_to_json(solved, cfg.n)));
  return 0;
}

int cmd_susy(const RunConfig& cfg) {
  const auto model = load_model(cfg);
  const htridiag::BandSpec partner = htridiag::susy_band(model.factors);
  if (cfg.format == "csv") {
    emit(cfg, htridiag::band_to_csv(partner, cfg.n));
    return 0;
  }
  emit(cfg, dump(htridiag::band_to_json(partner, cfg.n)));
  return 0;
}

cplx level_energy(const htridiag::models::ModelDescriptor& model, std::size_t level) {
  if (!model.has_spectrum())
    throw htridiag::InvalidParameterError(
        "model '" + model.name +
        "' has no closed-form spectrum; supply --energy re im instead of --levels");
  if (!model.level_supported(level))
    throw htridiag::InvalidParameterError(
        "level " + std::to_string(level) + " of model '" + model.name +
        "' has a vanishing leading coefficient; the seeded recurrence cannot reach it");
  return (*model.spectrum)(level);
}

int cmd_eigs(const RunConfig& cfg) {
  const auto model = load_model(cfg);
  if (cfg.levels.empty() && !cfg.energy)
    throw htridiag::InvalidParameterError("eigs needs --levels or --energy");

  struct Entry {
    std::optional<std::size_t> level;
    cplx energy;
  };
  std::vector<Entry> entries;
  for (std::size_t level : cfg.levels) entries.push_back({level, level_energy(model, level)});
  if (cfg.energy) entries.push_back({std::nullopt, *cfg.energy});

  json out;
  out["model"] = model.name;
  out["params"] = params_to_json(cfg);
  out["n"] = cfg.n;
  std::vector<htridiag::EigenPacket> flat;
  if (cfg.both_sides) {
    json pairs = json::array();
    for (const Entry& entry : entries) {
      const auto right = htridiag::run_recurrence_right(model.band, entry.energy, cfg.n);
      const auto left = htridiag::run_recurrence_left(model.band, entry.energy, cfg.n);
      const auto pair = htridiag::normalize_pair(right, left, cfg.tol);
      json row;
      row["level"] = entry.level ? json(*entry.level) : json(nullptr);
      row["right"] = htridiag::packet_to_json(pair.right);
      row["left"] = htridiag::packet_to_json(pair.left);
      row["pairing"] = htridiag::complex_to_json(pair.record.pairing);
      row["scale_choice"] = pair.record.scale_choice;
      row["tail_estimate"] = pair.record.tail_estimate;
      pairs.push_back(std::move(row));
      flat.push_back(pair.right);
      flat.push_back(pair.left);
    }
    out["pairs"] = std::move(pairs);
  } else {
    json packets = json::array();
    for (const Entry& entry : entries) {
      const auto packet = htridiag::run_recurrence_right(model.band, entry.energy, cfg.n);
      json row;
      row["level"] = entry.level ? json(*entry.level) : json(nullptr);
      row["packet"] = htridiag::packet_to_json(packet);
      packets.push_back(std::move(row));
      flat.push_back(packet);
    }
    out["packets"] = std::move(packets);
  }
  if (cfg.format == "csv") {
    emit(cfg, htridiag::packets_to_csv(flat));
    return 0;
  }
  emit(cfg, dump(out));
  return 0;
}

int cmd_verify(const RunConfig& cfg, bool tol_passed) {
  require_json(cfg);
  const auto model = load_model(cfg);
  const auto results = htridiag::verify::run_checks(
      model, cfg.n, tol_passed ? std::optional<double>(cfg.tol) : std::nullopt);
  json out;
  out["model"] = model.name;
  out["params"] = params_to_json(cfg);
  out["n"] = cfg.n;
  json checks = json::array();
  for (const auto& r : results) {
    json row;
    row["name"] = r.name;
    row["measured"] = r.measured;
    row["threshold"] = r.threshold;
    row["pass"] = r.pass;
    checks.push_back(std::move(row));
  }
  out["checks"] = std::move(checks);
  const bool ok = htridiag::verify::all_pass(results);
  out["pass"] = ok;
  emit(cfg, dump(out));
  return ok ? 0 : kExitFailure;
}

int cmd_oracle_eigs(const RunConfig& cfg) {
  const auto model = load_model(cfg);
  const auto m = htridiag::truncate(model.band, cfg.n);
  const auto estimate = htridiag::oracle::dense_eigenvalues(m);
  if (cfg.format == "csv") {
    emit(cfg, htridiag::spectrum_to_csv(estimate.eigenvalues));
    return 0;
  }
  json out;
  out["model"] = model.name;
  out["params"] = params_to_json(cfg);
  out["n"] = cfg.n;
  json eigs = json::array();
  for (const cplx& z : estimate.eigenvalues) eigs.push_back(htridiag::complex_to_json(z));
  out["eigenvalues"] = std::move(eigs);
  out["departure_from_normality"] = estimate.departure_from_normality;
  out["condition_note"] =
      estimate.condition_note.empty() ? json(nullptr) : json(estimate.condition_note);
  emit(cfg, dump(out));
  return 0;
}

int cmd_oracle_residual(const RunConfig& cfg) {
  require_json(cfg);
  const auto model = load_model(cfg);
  if (cfg.levels.empty() && !cfg.energy)
    throw htridiag::InvalidParameterError("oracle residual needs --levels or --energy");
  const auto m = htridiag::truncate(model.band, cfg.n);
  json rows = json::array();
  auto run_one = [&](std::optional<std::size_t> level, cplx energy) {
    const auto packet = htridiag::run_recurrence_right(model.band, energy, cfg.n);
    const auto report = htridiag::oracle::residual_check(m, energy, packet, cfg.tol);
    json row;
    row["level"] = level ? json(*level) : json(nullptr);
    row["E"] = htridiag::complex_to_json(energy);
    row["interior_residual"] = report.interior_residual;
    row["tail_mass"] = report.tail_mass;
    row["pass"] = report.pass;
    rows.push_back(std::move(row));
  };
  for (std::size_t level : cfg.levels) run_one(level, level_energy(model, level));
  if (cfg.energy) run_one(std::nullopt, *cfg.energy);
  json out;
  out["model"] = model.name;
  out["params"] = params_to_json(cfg);
  out["n"] = cfg.n;
  out["tol"] = cfg.tol;
  out["reports"] = std::move(rows);
  emit(cfg, dump(out));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"banded non-self-adjoint operator toolkit"};
  app.require_subcommand(1);

  RawOptions raw;

  CLI::App* model_cmd = app.add_subcommand("model", "model inspection");
  model_cmd->require_subcommand(1);
  CLI::App* describe = model_cmd->add_subcommand("describe", "emit a model descriptor");
  add_common_options(describe, raw);

  CLI::App* band_cmd = app.add_subcommand("band", "band serialization");
  band_cmd->require_subcommand(1);
  CLI::App* band_emit = band_cmd->add_subcommand("emit", "emit a model band");
  add_common_options(band_emit, raw);

  CLI::App* factorize = app.add_subcommand("factorize", "recover factors from a band");
  add_common_options(factorize, raw);
  factorize->add_option("--gauge", raw.gauge, "gauge for the diagonal factor")
      ->check(CLI::IsMember({"one", "model"}));

  CLI::App* susy = app.add_subcommand("susy", "emit the partner band X*Ydag");
  add_common_options(susy, raw);

  CLI::App* eigs = app.add_subcommand("eigs", "recurrence eigenvector packets");
  add_common_options(eigs, raw);
  eigs->add_option("--levels", raw.levels, "spectrum levels to solve");
  eigs->add_option("--energy", raw.energy, "explicit eigenvalue (re im)")->expected(2);
  eigs->add_flag("--both-sides", raw.both_sides, "also solve the adjoint side and normalize");

  CLI::App* verify = app.add_subcommand("verify", "run the invariant suite");
  add_common_options(verify, raw);

  CLI::App* oracle_cmd = app.add_subcommand("oracle", "dense verification");
  oracle_cmd->require_subcommand(1);
  CLI::App* oracle_eigs = oracle_cmd->add_subcommand("eigs", "dense eigenvalues");
  add_common_options(oracle_eigs, raw);
  CLI::App* oracle_residual =
      oracle_cmd->add_subcommand("residual", "residuals of recurrence packets");
  add_common_options(oracle_residual, raw);
  oracle_residual->add_option("--levels", raw.levels, "spectrum levels to check");
  oracle_residual->add_option("--energy", raw.energy, "explicit eigenvalue (re im)")
      ->expected(2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (describe->parsed()) return cmd_model_describe(build_config(describe, raw));
    if (band_emit->parsed()) return cmd_band_emit(build_config(band_emit, raw));
    if (factorize->parsed()) return cmd_factorize(build_config(factorize, raw));
    if (susy->parsed()) return cmd_susy(build_config(susy, raw));
    if (eigs->parsed()) return cmd_eigs(build_config(eigs, raw));
    if (verify->parsed())
      return cmd_verify(build_config(verify, raw), verify->count("--tol") > 0);
    if (oracle_eigs->parsed()) return cmd_oracle_eigs(build_config(oracle_eigs, raw));
    if (oracle_residual->parsed())
      return cmd_oracle_residual(build_config(oracle_residual, raw));
  } catch (const htridiag::UnknownModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const htridiag::InvalidParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const htridiag::DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const htridiag::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
