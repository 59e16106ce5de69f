#include "cli_app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "thzqkd/converter.hpp"
#include "thzqkd/keyrate.hpp"
#include "thzqkd/linkmodel.hpp"
#include "thzqkd/planck.hpp"

namespace thzqkd::cli {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// formatting and emission

bool parses_as_number(const std::string& text, double& value) {
  if (text.empty()) return false;
  char* end = nullptr;
  value = std::strtod(text.c_str(), &end);
  return end == text.c_str() + text.size() && std::isfinite(value);
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

void write_csv(std::ostream& out, const Table& table) {
  for (const auto& [key, value] : table.metadata) {
    out << "# " << key << "=" << value << "\n";
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << row[i];
    }
    out << "\n";
  }
}

void write_json(std::ostream& out, const Table& table) {
  json doc;
  doc["metadata"] = json::object();
  for (const auto& [key, value] : table.metadata) doc["metadata"][key] = value;
  doc["records"] = json::array();
  for (const auto& row : table.rows) {
    json rec = json::object();
    for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
      double num = 0.0;
      if (row[i].empty()) {
        rec[table.columns[i]] = nullptr;
      } else if (parses_as_number(row[i], num)) {
        rec[table.columns[i]] = num;
      } else {
        rec[table.columns[i]] = row[i];
      }
    }
    doc["records"].push_back(std::move(rec));
  }
  out << doc.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// sweep grids

std::vector<double> SweepSpec::grid() const {
  std::vector<double> values;
  values.reserve(points);
  if (points == 1) {
    values.push_back(min);
    return values;
  }
  if (scale == SweepScale::kLog) {
    const double ratio = std::log(max / min);
    for (int i = 0; i < points; ++i) {
      values.push_back(min * std::exp(ratio * i / (points - 1)));
    }
  } else {
    for (int i = 0; i < points; ++i) {
      values.push_back(min + (max - min) * i / (points - 1));
    }
  }
  return values;
}

SweepSpec parse_sweep(const std::string& text) {
  std::vector<std::string> parts;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ':')) parts.push_back(token);
  if (parts.size() < 4 || parts.size() > 5) {
    throw std::invalid_argument("sweep must be VAR:MIN:MAX:POINTS[:log], got '" + text + "'");
  }

  SweepSpec spec;
  spec.variable = parts[0];
  const std::vector<std::string> known = {"distance", "frequency", "transmissivity", "omega"};
  if (std::find(known.begin(), known.end(), spec.variable) == known.end()) {
    throw std::invalid_argument("unknown sweep variable '" + spec.variable + "'");
  }
  try {
    spec.min = std::stod(parts[1]);
    spec.max = std::stod(parts[2]);
    spec.points = std::stoi(parts[3]);
  } catch (const std::exception&) {
    throw std::invalid_argument("sweep bounds must be numeric: '" + text + "'");
  }
  if (parts.size() == 5) {
    if (parts[4] != "log" && parts[4] != "lin") {
      throw std::invalid_argument("sweep scale must be 'log' or 'lin', got '" + parts[4] + "'");
    }
    spec.scale = parts[4] == "log" ? SweepScale::kLog : SweepScale::kLinear;
  }
  if (spec.points < 1) throw std::invalid_argument("sweep needs at least one point");
  if (spec.points == 1 && spec.min != spec.max) {
    throw std::invalid_argument("single-point sweep needs min == max");
  }
  if (spec.points > 1 && !(spec.min < spec.max)) {
    throw std::invalid_argument("sweep needs min < max");
  }
  if (spec.scale == SweepScale::kLog && !(spec.min > 0.0)) {
    throw std::invalid_argument("log sweep needs positive bounds");
  }
  return spec;
}

namespace {

// ---------------------------------------------------------------------------
// configuration file: key=value lines or a flat JSON object; command-line
// flags always win

std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();

  std::map<std::string, std::string> values;
  const auto first = content.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && content[first] == '{') {
    json doc = json::parse(content);
    for (const auto& [key, value] : doc.items()) {
      if (value.is_string()) {
        values[key] = value.get<std::string>();
      } else {
        values[key] = value.dump();
      }
    }
    return values;
  }

  std::istringstream lines(content);
  std::string line;
  while (std::getline(lines, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) values[key] = value;
  }
  return values;
}

// Inserts config-derived tokens for flags the user did not pass explicitly.
std::vector<std::string> merge_config_into_args(const std::vector<std::string>& args) {
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (config_path.empty()) return args;

  const std::map<std::string, std::string> values = load_config_file(config_path);
  const auto user_passed = [&](const std::string& key) {
    const std::string flag = "--" + key;
    for (const std::string& a : args) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
  };

  std::vector<std::string> merged = args;
  for (const auto& [key, value] : values) {
    if (user_passed(key)) continue;
    if (value == "true") {
      merged.push_back("--" + key);
    } else if (value == "false") {
      continue;
    } else {
      merged.push_back("--" + key + "=" + value);
    }
  }
  return merged;
}

// ---------------------------------------------------------------------------
// shared option bundle

struct CommonOptions {
  std::string config_path;
  double frequency_hz = 30e12;
  double temperature_k = 296.0;
  double eta = 0.1;
  double va = 1e8;
  std::string trusted_noise = "optimize";  // unit | match-v0 | optimize
  std::string w_policy = "match-v0";       // match-v0 | value:X
  std::string sweep;
  std::string atten_table_path;
  double converter_noise_nbar = 0.0;
  std::string injection = "input";  // input | output
  std::string out_path = "-";
  std::string format = "csv";
};

void add_common_flags(CLI::App& cmd, CommonOptions& opt, const std::string& default_sweep) {
  opt.sweep = default_sweep;
  cmd.add_option("--config", opt.config_path, "config file (key=value or JSON); flags override");
  cmd.add_option("--freq", opt.frequency_hz, "carrier frequency in Hz");
  cmd.add_option("--temp", opt.temperature_k, "environment temperature in K");
  cmd.add_option("--eta", opt.eta, "detector efficiency in (0,1]");
  cmd.add_option("--va", opt.va, "modulation variance in SNU");
  cmd.add_option("--trusted-noise", opt.trusted_noise, "detector noise policy: unit|match-v0|optimize")
      ->check(CLI::IsMember({"unit", "match-v0", "optimize"}));
  cmd.add_option("--w-policy", opt.w_policy, "attack noise policy: match-v0|value:X");
  cmd.add_option("--sweep", opt.sweep, "sweep spec VAR:MIN:MAX:POINTS[:log]");
  cmd.add_option("--atten-table", opt.atten_table_path, "CSV override for the attenuation table");
  cmd.add_option("--converter-noise", opt.converter_noise_nbar, "converter occupation nbar");
  cmd.add_option("--injection", opt.injection, "converter-noise referencing: input|output")
      ->check(CLI::IsMember({"input", "output"}));
  cmd.add_option("--out", opt.out_path, "output path, '-' for stdout");
  cmd.add_option("--format", opt.format, "output format")->check(CLI::IsMember({"csv", "json"}));
}

TrustedNoisePolicy trusted_policy(const std::string& name) {
  if (name == "unit") return TrustedNoisePolicy::kUnit;
  if (name == "match-v0") return TrustedNoisePolicy::kMatchV0;
  return TrustedNoisePolicy::kOptimized;
}

double attack_noise_for(const std::string& policy, double v0) {
  if (policy == "match-v0") return v0;
  if (policy.rfind("value:", 0) == 0) {
    const double w = std::stod(policy.substr(6));
    if (!(w >= 1.0)) throw std::invalid_argument("--w-policy value must be >= 1 SNU");
    return w;
  }
  throw std::invalid_argument("unknown --w-policy '" + policy + "'");
}

AttenuationTable resolve_table(const CommonOptions& opt) {
  if (opt.atten_table_path.empty()) return AttenuationTable::clear_atmosphere();
  return AttenuationTable::from_csv(opt.atten_table_path);
}

void emit(const CommonOptions& opt, const Table& table) {
  if (opt.out_path == "-") {
    if (opt.format == "json") {
      write_json(std::cout, table);
    } else {
      write_csv(std::cout, table);
    }
    return;
  }
  std::ofstream out(opt.out_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file " + opt.out_path);
  if (opt.format == "json") {
    write_json(out, table);
  } else {
    write_csv(out, table);
  }
}

std::vector<std::pair<std::string, std::string>> common_metadata(const std::string& subcommand,
                                                                 const CommonOptions& opt) {
  return {
      {"atten_table", opt.atten_table_path.empty() ? "builtin-clear-atmosphere" : opt.atten_table_path},
      {"converter_noise_nbar", format_number(opt.converter_noise_nbar)},
      {"eta", format_number(opt.eta)},
      {"format", opt.format},
      {"freq_hz", format_number(opt.frequency_hz)},
      {"injection", opt.injection},
      {"subcommand", subcommand},
      {"sweep", opt.sweep},
      {"temp_k", format_number(opt.temperature_k)},
      {"trusted_noise", opt.trusted_noise},
      {"va_snu", format_number(opt.va)},
      {"w_policy", opt.w_policy},
  };
}

// ---------------------------------------------------------------------------
// rate: key rates against distance (or transmissivity/frequency)

int cmd_rate(const CommonOptions& opt, double fixed_distance_m) {
  const SweepSpec sweep = parse_sweep(opt.sweep);
  if (sweep.variable == "omega") {
    throw std::invalid_argument("rate sweeps over distance, transmissivity or frequency");
  }
  const AttenuationTable table = resolve_table(opt);

  Table out;
  out.metadata = common_metadata("rate", opt);
  out.metadata.emplace_back("distance_m", format_number(fixed_distance_m));
  std::sort(out.metadata.begin(), out.metadata.end());
  out.columns = {"frequency_hz", "distance_m", "transmissivity", "v0",     "rate_dr",
                 "rate_rr",      "plob",       "rate_dr_raw",    "rate_rr_raw", "flags"};

  const double v_c = 2.0 * opt.converter_noise_nbar;
  for (double x : sweep.grid()) {
    double freq = opt.frequency_hz;
    double distance = fixed_distance_m;
    double transmissivity = 0.0;
    if (sweep.variable == "frequency") freq = x;
    const double delta = table.delta_db_per_km(freq);
    if (sweep.variable == "distance") distance = x;
    if (sweep.variable == "transmissivity") {
      transmissivity = x;
      distance = distance_from_transmissivity(x, delta);
    } else {
      transmissivity = transmissivity_from_distance(distance, delta);
    }

    const double v0 = preparation_variance({freq, opt.temperature_k}).v0;
    ProtocolParams p;
    p.v0 = v0;
    p.va = opt.va;
    p.transmissivity = transmissivity;
    p.attack_noise = attack_noise_for(opt.w_policy, v0);
    if (opt.injection == "input") {
      p.attack_noise += v_c;
    } else if (transmissivity < 1.0) {
      p.attack_noise += v_c / (1.0 - transmissivity);
    }
    p.eta = opt.eta;

    ProtocolParams dr_params = p;
    dr_params.trusted_noise = opt.trusted_noise == "match-v0" ? v0 : 1.0;
    const KeyRateResult dr = rate_dr(dr_params);
    KeyRateResult rr;
    if (opt.trusted_noise == "optimize") {
      rr = rate_rr_optimized(p);
    } else {
      ProtocolParams rr_params = p;
      rr_params.trusted_noise = opt.trusted_noise == "match-v0" ? v0 : 1.0;
      rr = rate_rr(rr_params);
    }
    const double nbar_channel = 0.5 * (p.attack_noise - 1.0);
    const double bound = plob_bound(transmissivity, nbar_channel);

    std::string flags;
    const auto add_flag = [&flags](const std::string& f) {
      if (!flags.empty()) flags += ";";
      flags += f;
    };
    if (dr.status == RateStatus::kPlusInfinite) add_flag("dr+inf");
    if (dr.status == RateStatus::kMinusInfinite) add_flag("dr-inf");
    if (rr.status == RateStatus::kPlusInfinite) add_flag("rr+inf");
    if (rr.status == RateStatus::kMinusInfinite) add_flag("rr-inf");

    const auto clamped = [](const KeyRateResult& r) {
      if (r.status != RateStatus::kFinite) return std::string();
      return format_number(std::max(0.0, r.rate));
    };
    out.rows.push_back({format_number(freq), format_number(distance), format_number(transmissivity),
                        format_number(v0), clamped(dr), clamped(rr), format_number(bound),
                        format_number(dr.rate), format_number(rr.rate), flags});
  }
  emit(opt, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// threshold: accessible frequencies against transmissivity

int cmd_threshold(const CommonOptions& opt) {
  const SweepSpec sweep = parse_sweep(opt.sweep);
  if (sweep.variable != "transmissivity") {
    throw std::invalid_argument("threshold sweeps over transmissivity");
  }

  Table out;
  out.metadata = common_metadata("threshold", opt);
  std::sort(out.metadata.begin(), out.metadata.end());
  out.columns = {"transmissivity", "f_dr_eta_hz",         "f_dr_ideal_hz", "f_rr_ideal_hz",
                 "f_rr_eta_trusted_hz", "f_plob_hz",      "flags"};

  for (double t : sweep.grid()) {
    const auto solve = [&](double eta, Reconciliation mode, TrustedNoisePolicy pol) {
      return security_threshold_frequency(t, eta, mode, pol, opt.temperature_k);
    };
    const ThresholdResult dr_eta = solve(opt.eta, Reconciliation::kDirect, TrustedNoisePolicy::kUnit);
    const ThresholdResult dr_ideal = solve(1.0, Reconciliation::kDirect, TrustedNoisePolicy::kUnit);
    const ThresholdResult rr_ideal = solve(1.0, Reconciliation::kReverse, TrustedNoisePolicy::kUnit);
    const ThresholdResult rr_trusted =
        solve(opt.eta, Reconciliation::kReverse, TrustedNoisePolicy::kMatchV0);
    const double plob_f = plob_threshold_frequency(t, opt.temperature_k);

    const auto cell = [](const ThresholdResult& r) {
      return r.frequency_hz ? format_number(*r.frequency_hz) : std::string();
    };
    std::string flags;
    if (dr_eta.multiple_roots || dr_ideal.multiple_roots || rr_ideal.multiple_roots ||
        rr_trusted.multiple_roots) {
      flags = "multiple-roots";
    }
    out.rows.push_back({format_number(t), cell(dr_eta), cell(dr_ideal), cell(rr_ideal),
                        cell(rr_trusted), format_number(plob_f), flags});
  }
  emit(opt, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// plob: capacity bound along a sweep

int cmd_plob(const CommonOptions& opt) {
  const SweepSpec sweep = parse_sweep(opt.sweep);
  if (sweep.variable != "transmissivity" && sweep.variable != "distance") {
    throw std::invalid_argument("plob sweeps over transmissivity or distance");
  }

  Table out;
  out.metadata = common_metadata("plob", opt);
  std::sort(out.metadata.begin(), out.metadata.end());
  out.columns = {"transmissivity", "distance_m", "nbar", "plob_bits"};

  const double nbar = mean_thermal_photons({opt.frequency_hz, opt.temperature_k});
  const AttenuationTable table = resolve_table(opt);
  for (double x : sweep.grid()) {
    double t = x, distance = 0.0;
    const double delta = table.delta_db_per_km(opt.frequency_hz);
    if (sweep.variable == "distance") {
      distance = x;
      t = transmissivity_from_distance(x, delta);
    } else {
      distance = distance_from_transmissivity(x, delta);
    }
    out.rows.push_back({format_number(t), format_number(distance), format_number(nbar),
                        format_number(plob_bound(t, nbar))});
  }
  emit(opt, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// converter: frequency response sweeps and steady-state occupations

ConverterParams preset_by_name(const std::string& name) {
  if (name == "paper-1K") return cryo_1k_preset();
  if (name == "symmetric") {
    ConverterParams p;
    p.g_o = p.g_t = 1e8;
    p.kappa_o = p.kappa_t = 1e9;
    p.kappa_m = 0.0;
    return p;
  }
  throw std::invalid_argument("unknown preset '" + name + "' (try symmetric, paper-1K)");
}

int cmd_converter(const CommonOptions& opt, CLI::App* cmd, const std::string& preset,
                  ConverterParams flags_params, bool occupations) {
  ConverterParams params = preset.empty() ? ConverterParams{} : preset_by_name(preset);
  // explicit flags override the preset
  const auto take = [&](const char* flag, double& dst, double src) {
    if (cmd->count(flag)) dst = src;
  };
  take("--g-o", params.g_o, flags_params.g_o);
  take("--g-t", params.g_t, flags_params.g_t);
  take("--kappa-o", params.kappa_o, flags_params.kappa_o);
  take("--kappa-t", params.kappa_t, flags_params.kappa_t);
  take("--kappa-m", params.kappa_m, flags_params.kappa_m);
  take("--n-bath-o", params.n_bath_o, flags_params.n_bath_o);
  take("--n-bath-t", params.n_bath_t, flags_params.n_bath_t);
  take("--n-bath-m", params.n_bath_m, flags_params.n_bath_m);

  Table out;
  out.metadata = common_metadata("converter", opt);
  out.metadata.emplace_back("preset", preset.empty() ? "none" : preset);
  out.metadata.emplace_back("g_o", format_number(params.g_o));
  out.metadata.emplace_back("g_t", format_number(params.g_t));
  out.metadata.emplace_back("kappa_o", format_number(params.kappa_o));
  out.metadata.emplace_back("kappa_t", format_number(params.kappa_t));
  out.metadata.emplace_back("kappa_m", format_number(params.kappa_m));
  out.metadata.emplace_back("n_bath_o", format_number(params.n_bath_o));
  out.metadata.emplace_back("n_bath_t", format_number(params.n_bath_t));
  out.metadata.emplace_back("n_bath_m", format_number(params.n_bath_m));
  std::sort(out.metadata.begin(), out.metadata.end());

  if (occupations) {
    const SteadyStateOccupations occ = steady_state_occupations(params);
    out.columns = {"n_o_eff", "n_t_eff", "n_m_eff", "lyapunov_residual"};
    out.rows.push_back({format_number(occ.n_o), format_number(occ.n_t), format_number(occ.n_m),
                        format_number(occ.lyapunov_residual)});
    emit(opt, out);
    return kExitOk;
  }

  const SweepSpec sweep = parse_sweep(opt.sweep);
  if (sweep.variable != "omega") {
    throw std::invalid_argument("converter sweeps over omega");
  }
  out.columns = {"omega_rad_per_s", "re_t", "im_t", "mag2", "phase_rad", "group_delay_s"};
  for (double omega : sweep.grid()) {
    const FrequencyResponse r = frequency_response(params, omega);
    out.rows.push_back({format_number(omega), format_number(r.transmissivity.real()),
                        format_number(r.transmissivity.imag()), format_number(r.magnitude_sq),
                        format_number(r.phase_rad), format_number(r.group_delay_s)});
  }
  emit(opt, out);
  return kExitOk;
}

}  // namespace

// ---------------------------------------------------------------------------

int run(int argc, const char* const* argv) {
  std::vector<std::string> raw_args(argv + 1, argv + argc);

  CLI::App app{"Terahertz CV-QKD rate, threshold and converter calculator", "thzqkd"};
  app.require_subcommand(1);

  CommonOptions rate_opt, thresh_opt, plob_opt, conv_opt;
  double fixed_distance_m = 0.0;

  CLI::App* rate = app.add_subcommand("rate", "secret-key rates along a sweep");
  add_common_flags(*rate, rate_opt, "distance:0:300:301");
  rate->add_option("--distance", fixed_distance_m, "fixed distance in m for frequency sweeps");

  CLI::App* threshold = app.add_subcommand("threshold", "accessible-frequency thresholds");
  add_common_flags(*threshold, thresh_opt, "transmissivity:0.01:0.99:99");

  CLI::App* plob = app.add_subcommand("plob", "channel capacity bound along a sweep");
  add_common_flags(*plob, plob_opt, "transmissivity:0.01:0.99:99");

  CLI::App* converter = app.add_subcommand("converter", "frequency response and occupations");
  add_common_flags(*converter, conv_opt, "omega:-1e9:1e9:401");
  std::string preset;
  bool occupations = false;
  ConverterParams conv_flags;
  converter->add_option("--preset", preset, "named parameter set: symmetric, paper-1K");
  converter->add_flag("--occupations", occupations, "emit steady-state occupations instead of a sweep");
  converter->add_option("--g-o", conv_flags.g_o, "optical-phonon coupling (1/s)");
  converter->add_option("--g-t", conv_flags.g_t, "terahertz-phonon coupling (1/s)");
  converter->add_option("--kappa-o", conv_flags.kappa_o, "optical out-coupling (1/s)");
  converter->add_option("--kappa-t", conv_flags.kappa_t, "terahertz out-coupling (1/s)");
  converter->add_option("--kappa-m", conv_flags.kappa_m, "phonon damping (1/s)");
  converter->add_option("--n-bath-o", conv_flags.n_bath_o, "optical bath occupation");
  converter->add_option("--n-bath-t", conv_flags.n_bath_t, "terahertz bath occupation");
  converter->add_option("--n-bath-m", conv_flags.n_bath_m, "phonon bath occupation");

  try {
    const std::vector<std::string> merged = merge_config_into_args(raw_args);
    // CLI11 parses reversed argv-style vectors
    std::vector<std::string> reversed(merged.rbegin(), merged.rend());
    app.parse(reversed);

    if (rate->parsed()) return cmd_rate(rate_opt, fixed_distance_m);
    if (threshold->parsed()) return cmd_threshold(thresh_opt);
    if (plob->parsed()) return cmd_plob(plob_opt);
    if (converter->parsed()) return cmd_converter(conv_opt, converter, preset, conv_flags, occupations);
    return kExitConfig;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  } catch (const UnresolvedBandError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace thzqkd::cli
