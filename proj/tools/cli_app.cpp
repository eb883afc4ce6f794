#include "cli_app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

#include "rmshell/rmshell.hpp"

namespace rmshell::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char* kDimensionlessKeys[] = {"g1", "g2", "g3", "beta", "lc_ratio", "delta"};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ConfigError("key '" + key + "': expected a finite number, got '" + text + "'");
  return v;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
  std::size_t v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError("key '" + key + "': expected an integer, got '" + text + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" + text + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
  if (out.empty()) throw ConfigError("key '" + key + "': expected a comma-separated list of numbers");
  return out;
}

Mode parse_mode(const std::string& text) {
  if (text == "solve") return Mode::kSolve;
  if (text == "sweep") return Mode::kSweep;
  if (text == "verify") return Mode::kVerify;
  if (text == "figures") return Mode::kFigures;
  throw ConfigError("mode must be one of solve, sweep, verify, figures (got '" + text + "')");
}

double DimensionlessSet<double>::*dimensionless_field(const std::string& key) {
  using D = DimensionlessSet<double>;
  if (key == "g1") return &D::g1;
  if (key == "g2") return &D::g2;
  if (key == "g3") return &D::g3;
  if (key == "beta") return &D::beta;
  if (key == "lc_ratio") return &D::lc_ratio;
  if (key == "delta") return &D::delta;
  throw ConfigError("sweep_key must be one of g1, g2, g3, beta, lc_ratio, delta (got '" + key + "')");
}

std::string file_label(std::string label) {
  std::replace(label.begin(), label.end(), '=', '_');
  return label;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  return f;
}

void finish(std::ofstream& f, const fs::path& path) {
  f.flush();
  if (!f) throw IoError("write to '" + path.string() + "' failed");
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory '" + dir.string() + "'");
}

void write_csv_file(const fs::path& path, const RadialProfile<double>& profile, bool raw) {
  auto f = open_output(path);
  write_profile_csv(f, profile, raw);
  finish(f, path);
}

void write_classical_csv(const fs::path& path, const RadialProfile<double>& profile, bool raw) {
  auto f = open_output(path);
  const double rs = raw ? 1.0 : profile.geometry.r_o;
  const double us = raw ? 1.0 : profile.boundary.u_o;
  f << (raw ? "r,u_r_classical\n" : "r_over_ro,u_r_classical_over_Uo\n");
  for (std::size_t k = 0; k < profile.size(); ++k)
    f << format_number(profile.samples[k].r / rs) << ',' << format_number(profile.classical_u[k] / us) << '\n';
  finish(f, path);
}

struct CurveSummary {
  double max_abs_delta = 0;
  std::string side;  // above, below, mixed or equal, over the open interior
};

CurveSummary summarize(const RadialProfile<double>& profile) {
  CurveSummary s;
  bool above = false;
  bool below = false;
  for (std::size_t k = 1; k + 1 < profile.size(); ++k) {
    const double d = profile.samples[k].u_r - profile.classical_u[k];
    above = above || d > 0;
    below = below || d < 0;
    if (profile.deviation) s.max_abs_delta = std::max(s.max_abs_delta, std::abs((*profile.deviation)[k]));
  }
  s.side = above && below ? "mixed" : above ? "above" : below ? "below" : "equal";
  return s;
}

void write_parameters(std::ostream& meta, const std::string& prefix, const DimensionlessSet<double>& g) {
  meta << prefix << "g1 = " << format_short(g.g1) << '\n';
  meta << prefix << "g2 = " << format_short(g.g2) << '\n';
  meta << prefix << "g3 = " << format_short(g.g3) << '\n';
  meta << prefix << "beta = " << format_short(g.beta) << '\n';
  meta << prefix << "lc_ratio = " << format_short(g.lc_ratio) << '\n';
  meta << prefix << "delta = " << format_short(g.delta) << '\n';
}

struct Curve {
  std::string label;
  DimensionlessSet<double> set;
};

/// Solves every curve concurrently, then writes files in curve order.
void write_curve_family(const fs::path& dir, const std::string& stem, const std::vector<Curve>& curves,
                        const RunConfig& cfg, const std::vector<std::pair<std::string, std::string>>& header,
                        std::ostream& out) {
  ensure_directory(dir);
  std::vector<std::future<RadialProfile<double>>> jobs;
  for (const auto& c : curves) {
    jobs.push_back(std::async(std::launch::async, [&cfg, set = c.set] {
      const auto pr = make_problem(set, cfg.mu_M, cfg.r_o, cfg.u_o, cfg.mu_c);
      return profile(pr.material, pr.geometry, pr.boundary, cfg.samples);
    }));
  }
  std::vector<RadialProfile<double>> profiles;
  for (auto& j : jobs) profiles.push_back(j.get());

  const fs::path meta_path = dir / (stem + "_metadata.txt");
  auto meta = open_output(meta_path);
  for (const auto& [k, v] : header) meta << k << " = " << v << '\n';
  meta << "samples = " << cfg.samples << '\n';
  meta << "normalization = " << (cfg.raw ? "none (r, u_r)" : "r / r_o, u_r / U_o") << '\n';
  meta << "mu_M = " << format_short(cfg.mu_M) << '\n';
  meta << "r_o = " << format_short(cfg.r_o) << '\n';
  meta << "U_o = " << format_short(cfg.u_o) << '\n';
  meta << "mu_c = " << format_short(cfg.mu_c) << '\n';
  meta << "curves = " << curves.size() << '\n';

  // one classical baseline per distinct boundary data
  std::vector<std::pair<double, double>> seen;
  std::vector<std::size_t> classical_owner;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const std::pair<double, double> key{curves[i].set.beta, curves[i].set.delta};
    if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
      seen.push_back(key);
      classical_owner.push_back(i);
    }
  }

  for (std::size_t i = 0; i < curves.size(); ++i) {
    const std::string label = file_label(curves[i].label);
    const std::string file = stem + "_" + label + ".csv";
    write_csv_file(dir / file, profiles[i], cfg.raw);
    const auto s = summarize(profiles[i]);
    const std::string prefix = "curve." + label + ".";
    meta << prefix << "file = " << file << '\n';
    write_parameters(meta, prefix, curves[i].set);
    meta << prefix << "side_of_classical = " << s.side << '\n';
    meta << prefix << "max_abs_delta = " << format_number(s.max_abs_delta) << '\n';
    out << stem << ' ' << curves[i].label << ": " << s.side << " classical, max |delta| = "
        << format_number(s.max_abs_delta) << '\n';
  }
  for (std::size_t i : classical_owner) {
    const std::string file = seen.size() == 1 ? stem + "_classical.csv"
                                              : stem + "_classical_" + file_label(curves[i].label) + ".csv";
    write_classical_csv(dir / file, profiles[i], cfg.raw);
    meta << "classical." << (seen.size() == 1 ? std::string("all") : file_label(curves[i].label)) << ".file = " << file
         << '\n';
  }
  finish(meta, meta_path);
}

int run_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto pr = make_problem(cfg.dimensionless(), cfg.mu_M, cfg.r_o, cfg.u_o, cfg.mu_c);
  const auto prof = profile(pr.material, pr.geometry, pr.boundary, cfg.samples);
  const FieldEvaluator<double> eval(pr.material, pr.geometry, prof.coefficients);
  const auto bc = boundary_errors(eval, pr.boundary);

  std::ostream* summary = &out;
  if (cfg.output) {
    const fs::path path = *cfg.output;
    write_csv_file(path, prof, cfg.raw);
  } else {
    write_profile_csv(out, prof, cfg.raw);
    summary = &err;
  }
  const auto& c = prof.coefficients;
  *summary << "C1=" << format_number(c.c1) << " C2=" << format_number(c.c2) << " C3=" << format_number(c.c3)
           << " D1=" << format_number(c.d1()) << " D2=" << format_number(c.d2())
           << " condition=" << format_number(c.condition) << " bc_error_max=" << format_number(bc.max()) << '\n';
  return kOk;
}

int run_sweep(const RunConfig& cfg, std::ostream& out) {
  const auto field = dimensionless_field(*cfg.sweep_key);
  DimensionlessSet<double> base;
  for (const char* key : kDimensionlessKeys) {
    if (key == *cfg.sweep_key) continue;
    const auto f = dimensionless_field(key);
    const auto v = [&]() -> std::optional<double> {
      const std::string k = key;
      if (k == "g1") return cfg.g1;
      if (k == "g2") return cfg.g2;
      if (k == "g3") return cfg.g3;
      if (k == "beta") return cfg.beta;
      if (k == "lc_ratio") return cfg.lc_ratio;
      return cfg.delta;
    }();
    if (!v) throw ConfigError(std::string("missing required key '") + key + "'");
    base.*f = *v;
  }
  std::vector<Curve> curves;
  for (double v : cfg.sweep_values) {
    auto set = base;
    set.*field = v;
    curves.push_back({*cfg.sweep_key + "=" + format_short(v), set});
  }
  write_curve_family(*cfg.output, "sweep", curves, cfg, {{"sweep_key", *cfg.sweep_key}}, out);
  return kOk;
}

int run_verify(const RunConfig& cfg, std::ostream& out) {
  const auto pr = make_problem(cfg.dimensionless(), cfg.mu_M, cfg.r_o, cfg.u_o, cfg.mu_c);
  auto coeffs = solve_coefficients(pr.material, pr.geometry, pr.boundary);
  if (cfg.corrupt_c1) coeffs.c1 *= 1.01;
  const VerificationLimits limits;
  const auto rep = verify(pr.material, pr.geometry, pr.boundary, coeffs, limits);

  for (std::size_t e = 0; e < kEquationCount; ++e) {
    const auto& eq = rep.residuals.equations[e];
    out << "residual_" << equation_name(static_cast<Equation>(e)) << ": " << format_number(eq.max_normalized) << '\n';
  }
  out << "residual_max: " << format_number(rep.residuals.max_radial()) << '\n';
  out << "shear_residual_max: " << format_number(rep.residuals.max_shear()) << '\n';
  out << "residual_samples: " << limits.residual_samples << '\n';
  out << "boundary_error_max: " << format_number(rep.boundary.max()) << '\n';
  out << "fd_points: " << limits.fd_points << '\n';
  out << "fd_relative_error: " << format_number(rep.fd_error) << '\n';
  out << "energy: " << format_number(rep.energy) << '\n';
  out << "fd_energy: " << format_number(rep.fd_energy) << '\n';
  out << "energy_relative_gap: " << format_number(rep.energy_gap) << '\n';
  out << "condition_estimate: " << format_number(coeffs.condition) << '\n';
  for (const auto& f : rep.failures) out << "failure: " << f << '\n';
  out << "status: " << (rep.passed() ? "pass" : "fail") << '\n';
  return rep.passed() ? kOk : kVerificationFailed;
}

int run_figures(const RunConfig& cfg, std::ostream& out) {
  std::vector<int> ids;
  if (*cfg.figure == "all") {
    for (const auto& f : figure_presets()) ids.push_back(f.id);
  } else {
    int id = 0;
    const auto& text = *cfg.figure;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), id);
    if (ec != std::errc() || ptr != text.data() + text.size()) throw ConfigError("figure must be 2..8 or all");
    try {
      figure_preset(id);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
    ids.push_back(id);
  }
  for (int id : ids) {
    const auto& fig = figure_preset(id);
    std::vector<Curve> curves;
    for (const auto& c : fig.curves) curves.push_back({c.label, c.set});
    std::vector<std::pair<std::string, std::string>> header{
        {"figure", std::to_string(fig.id)}, {"title", fig.title}, {"varied_key", fig.varied_key}};
    for (const auto& note : fig.notes) header.emplace_back("note", note);
    write_curve_family(*cfg.output, "fig" + std::to_string(fig.id), curves, cfg, header, out);
  }
  return kOk;
}

}  // namespace

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{"mode",   "g1",     "g2",     "g3",        "beta",         "lc_ratio",
                                             "delta",  "mu_M",   "r_o",    "mu_c",      "u_o",          "samples",
                                             "output", "figure", "raw",    "sweep_key", "sweep_values"};
  return keys;
}

DimensionlessSet<double> RunConfig::dimensionless() const {
  std::vector<std::string> missing;
  const std::optional<double>* fields[] = {&g1, &g2, &g3, &beta, &lc_ratio, &delta};
  for (std::size_t i = 0; i < 6; ++i)
    if (!*fields[i]) missing.push_back(kDimensionlessKeys[i]);
  if (!missing.empty()) {
    std::string msg = "missing required key";
    msg += missing.size() > 1 ? "s " : " ";
    for (std::size_t i = 0; i < missing.size(); ++i) msg += (i ? ", '" : "'") + missing[i] + "'";
    throw ConfigError(msg);
  }
  return {*g1, *g2, *g3, *beta, *lc_ratio, *delta};
}

KeyValues parse_key_values(std::istream& in, const std::string& source) {
  KeyValues out;
  const auto& keys = known_keys();
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(number);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ConfigError(where + ": unknown key '" + key + "'");
    if (value.empty()) throw ConfigError(where + ": empty value for '" + key + "'");
    if (!out.emplace(key, value).second) throw ConfigError(where + ": duplicate key '" + key + "'");
  }
  return out;
}

RunConfig build_config(const KeyValues& values) {
  RunConfig cfg;
  const auto mode = values.find("mode");
  if (mode == values.end()) throw ConfigError("missing required key 'mode'");
  cfg.mode = parse_mode(mode->second);

  for (const auto& [key, value] : values) {
    if (key == "mode") continue;
    if (key == "g1") cfg.g1 = parse_double(key, value);
    else if (key == "g2") cfg.g2 = parse_double(key, value);
    else if (key == "g3") cfg.g3 = parse_double(key, value);
    else if (key == "beta") cfg.beta = parse_double(key, value);
    else if (key == "lc_ratio") cfg.lc_ratio = parse_double(key, value);
    else if (key == "delta") cfg.delta = parse_double(key, value);
    else if (key == "mu_M") cfg.mu_M = parse_double(key, value);
    else if (key == "r_o") cfg.r_o = parse_double(key, value);
    else if (key == "mu_c") cfg.mu_c = parse_double(key, value);
    else if (key == "u_o") cfg.u_o = parse_double(key, value);
    else if (key == "samples") cfg.samples = parse_count(key, value);
    else if (key == "output") cfg.output = value;
    else if (key == "figure") cfg.figure = value;
    else if (key == "raw") cfg.raw = parse_bool(key, value);
    else if (key == "sweep_key") cfg.sweep_key = value;
    else if (key == "sweep_values") cfg.sweep_values = parse_list(key, value);
    else throw ConfigError("unknown key '" + key + "'");
  }

  if (cfg.samples < 2) throw ConfigError("samples must be at least 2");
  switch (cfg.mode) {
    case Mode::kSolve:
    case Mode::kVerify:
      cfg.dimensionless();
      break;
    case Mode::kSweep:
      if (!cfg.sweep_key) throw ConfigError("missing required key 'sweep_key'");
      dimensionless_field(*cfg.sweep_key);
      if (cfg.sweep_values.empty()) throw ConfigError("missing required key 'sweep_values'");
      if (!cfg.output) throw ConfigError("missing required key 'output' (directory)");
      break;
    case Mode::kFigures:
      if (!cfg.figure) throw ConfigError("missing required key 'figure'");
      if (!cfg.output) throw ConfigError("missing required key 'output' (directory)");
      break;
  }
  return cfg;
}

std::string format_short(double v) {
  if (v == 0) v = 0;  // drop the sign of negative zero
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, r.ptr};
}

std::string format_number(double v) {
  if (v == 0) v = 0;
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
  return {buf, r.ptr};
}

void write_profile_csv(std::ostream& out, const RadialProfile<double>& profile, bool raw) {
  const double u_o = profile.boundary.u_o;
  if (!raw && u_o == 0)
    throw NormalizationError("u_r / U_o is undefined for U_o = 0; use raw output");
  const double rs = raw ? 1.0 : profile.geometry.r_o;
  const double us = raw ? 1.0 : u_o;
  out << (raw ? kRawProfileHeader : kProfileHeader) << '\n';
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < profile.size(); ++k) {
    const auto& s = profile.samples[k];
    const double delta = profile.deviation ? (*profile.deviation)[k] : nan;
    out << format_number(s.r / rs) << ',' << format_number(s.u_r / us) << ',' << format_number(s.p_rr) << ','
        << format_number(s.p_tt) << ',' << format_number(s.z) << ',' << format_number(s.y) << ','
        << format_number(profile.classical_u[k] / us) << ',' << format_number(delta) << '\n';
  }
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) return t;
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) t.header.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream rs(line);
    while (std::getline(rs, cell, ',')) {
      double v = 0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) throw ConfigError("malformed CSV cell '" + cell + "'");
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Closed-form relaxed micromorphic cylindrical shell: solve, sweep, verify, figures"};
  std::string config_path;
  app.add_option("--config", config_path, "key = value parameter file; flags override it");
  std::map<std::string, std::string> flags;
  std::map<std::string, CLI::Option*> options;
  for (const auto& key : known_keys()) {
    if (key == "raw") continue;
    options[key] = app.add_option("--" + key, flags[key]);
  }
  options["mode"]->description("solve | sweep | verify | figures (required here or in --config)");
  options["figure"]->description("2..8 or all");
  options["output"]->description("CSV file (solve) or directory (sweep, figures)");
  options["sweep_values"]->description("comma-separated values of sweep_key");
  options["u_o"]->description("outer displacement U_o (default 1)");
  bool raw = false;
  auto* raw_flag = app.add_flag("--raw", raw, "unnormalized r and u_r columns");
  bool corrupt = false;
  app.add_flag("--corrupt-c1", corrupt)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    KeyValues values;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw IoError("cannot read config file '" + config_path + "'");
      values = parse_key_values(f, config_path);
    }
    for (const auto& [key, opt] : options)
      if (opt->count() > 0) values[key] = flags[key];
    if (raw_flag->count() > 0) values["raw"] = raw ? "true" : "false";

    auto cfg = build_config(values);
    cfg.corrupt_c1 = corrupt;
    switch (cfg.mode) {
      case Mode::kSolve: return run_solve(cfg, out, err);
      case Mode::kSweep: return run_sweep(cfg, out);
      case Mode::kVerify: return run_verify(cfg, out);
      case Mode::kFigures: return run_figures(cfg, out);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NormalizationError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const ConditioningError& e) {
    err << "error: " << e.what() << '\n';
    return kVerificationFailed;
  } catch (const OracleFailure& e) {
    err << "error: " << e.what() << '\n';
    return kVerificationFailed;
  }
  return kOk;
}

}  // namespace rmshell::cli
