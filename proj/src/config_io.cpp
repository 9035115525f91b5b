#include "oemsim/config_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "oemsim/constants.hpp"
#include "oemsim/errors.hpp"

namespace oemsim {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

enum class Quantity { frequency, mass, temperature, power, length, plain };

const std::unordered_map<std::string, double>& unit_table(Quantity q) {
  static const std::unordered_map<std::string, double> frequency{
      {"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}, {"THz", 1e12}};
  static const std::unordered_map<std::string, double> mass{
      {"kg", 1.0}, {"g", 1e-3},  {"mg", 1e-6},
      {"ug", 1e-9}, {"ng", 1e-12}, {"pg", 1e-15}};
  static const std::unordered_map<std::string, double> temperature{
      {"K", 1.0}, {"mK", 1e-3}, {"uK", 1e-6}};
  static const std::unordered_map<std::string, double> power{
      {"W", 1.0}, {"mW", 1e-3}, {"uW", 1e-6}, {"nW", 1e-9}, {"kW", 1e3}};
  static const std::unordered_map<std::string, double> length{
      {"m", 1.0},  {"cm", 1e-2}, {"mm", 1e-3},
      {"um", 1e-6}, {"nm", 1e-9}, {"pm", 1e-12}};
  static const std::unordered_map<std::string, double> plain{};
  switch (q) {
    case Quantity::frequency: return frequency;
    case Quantity::mass: return mass;
    case Quantity::temperature: return temperature;
    case Quantity::power: return power;
    case Quantity::length: return length;
    case Quantity::plain: return plain;
  }
  return plain;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw validation_error("config: " + where + ": " + what);
}

/// Converts a JSON value into the internal SI representation. Plain
/// numbers are base SI with frequencies in ordinary Hz; strings carry a
/// unit suffix, or "omega_m" for mechanical-relative rates and detunings.
/// Internally every frequency-like quantity is angular, so Hz-family
/// values pick up a factor of 2*pi.
double read_value(const json& node, const std::string& where, Quantity quantity,
                  double omega_m = 0.0) {
  const double angular = quantity == Quantity::frequency ? 2.0 * constants::pi : 1.0;
  if (node.is_number()) {
    return angular * node.get<double>();
  }
  if (!node.is_string()) {
    fail(where, "expected a number or a unit-suffixed string");
  }
  const std::string text = node.get<std::string>();
  const char* begin = text.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || !std::isfinite(value)) {
    fail(where, "cannot parse numeric part of \"" + text + "\"");
  }
  std::string unit(end);
  const auto first = unit.find_first_not_of(" \t");
  const auto last = unit.find_last_not_of(" \t");
  unit = first == std::string::npos ? "" : unit.substr(first, last - first + 1);
  if (unit.empty()) {
    return angular * value;
  }
  if (unit == "omega_m") {
    if (quantity != Quantity::frequency) {
      fail(where, "omega_m units only apply to rates and detunings");
    }
    if (omega_m <= 0.0) {
      fail(where, "omega_m units are not available for this field");
    }
    return value * omega_m;
  }
  const auto& table = unit_table(quantity);
  const auto it = table.find(unit);
  if (it == table.end()) {
    fail(where, "unknown unit \"" + unit + "\"");
  }
  return angular * value * it->second;
}

const json& require(const json& obj, const std::string& where, const std::string& key) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    fail(where, "missing key \"" + key + "\"");
  }
  return *it;
}

void reject_unknown_keys(const json& obj, const std::string& where,
                         std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      fail(where, "unknown key \"" + it.key() + "\"");
    }
  }
}

std::string g17(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace

SystemConfig parse_config_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw validation_error(std::string("config: malformed JSON: ") + err.what());
  }
  if (!doc.is_object()) {
    fail("top level", "expected an object");
  }
  reject_unknown_keys(doc, "top level", {"mechanical", "optical", "microwaves"});

  SystemConfig config;

  const json& mech = require(doc, "top level", "mechanical");
  if (!mech.is_object()) fail("mechanical", "expected an object");
  reject_unknown_keys(mech, "mechanical",
                      {"frequency", "quality_factor", "mass", "temperature"});
  config.mech.omega_m =
      read_value(require(mech, "mechanical", "frequency"), "mechanical.frequency",
                 Quantity::frequency);
  config.mech.quality_factor =
      read_value(require(mech, "mechanical", "quality_factor"),
                 "mechanical.quality_factor", Quantity::plain);
  config.mech.mass = read_value(require(mech, "mechanical", "mass"),
                                "mechanical.mass", Quantity::mass);
  config.mech.temperature =
      read_value(require(mech, "mechanical", "temperature"),
                 "mechanical.temperature", Quantity::temperature);
  const double omega_m = config.mech.omega_m;

  const json& optical = require(doc, "top level", "optical");
  if (!optical.is_object()) fail("optical", "expected an object");
  reject_unknown_keys(optical, "optical",
                      {"wavelength", "kappa", "power", "length", "detuning"});
  config.optical.drive_wavelength =
      read_value(require(optical, "optical", "wavelength"), "optical.wavelength",
                 Quantity::length);
  config.optical.kappa_c = read_value(require(optical, "optical", "kappa"),
                                      "optical.kappa", Quantity::frequency, omega_m);
  config.optical.drive_power = read_value(require(optical, "optical", "power"),
                                          "optical.power", Quantity::power);
  config.optical.cavity_length = read_value(require(optical, "optical", "length"),
                                            "optical.length", Quantity::length);
  config.optical.delta_c =
      read_value(require(optical, "optical", "detuning"), "optical.detuning",
                 Quantity::frequency, omega_m);

  const json& mw = require(doc, "top level", "microwaves");
  if (!mw.is_array()) fail("microwaves", "expected an array");
  for (std::size_t i = 0; i < mw.size(); ++i) {
    const std::string where = "microwaves[" + std::to_string(i) + "]";
    const json& entry = mw[i];
    if (!entry.is_object()) fail(where, "expected an object");
    reject_unknown_keys(entry, where,
                        {"frequency", "kappa", "power", "gap", "mu", "detuning",
                         "pair", "sign"});
    MicrowaveCavityParams cavity;
    cavity.omega_w = read_value(require(entry, where, "frequency"),
                                where + ".frequency", Quantity::frequency);
    cavity.kappa_w = read_value(require(entry, where, "kappa"), where + ".kappa",
                                Quantity::frequency, omega_m);
    cavity.drive_power = read_value(require(entry, where, "power"),
                                    where + ".power", Quantity::power);
    cavity.gap =
        read_value(require(entry, where, "gap"), where + ".gap", Quantity::length);
    cavity.mu =
        read_value(require(entry, where, "mu"), where + ".mu", Quantity::plain);
    cavity.delta_w = read_value(require(entry, where, "detuning"),
                                where + ".detuning", Quantity::frequency, omega_m);
    // Pair bookkeeping defaults to list position so hand-written configs
    // can omit it; explicit values win.
    cavity.pair_id = static_cast<int>(i / 2) + 1;
    cavity.sign = i % 2 == 0 ? +1 : -1;
    if (entry.contains("pair")) {
      if (!entry["pair"].is_number_integer()) fail(where + ".pair", "expected an integer");
      cavity.pair_id = entry["pair"].get<int>();
    }
    if (entry.contains("sign")) {
      if (!entry["sign"].is_number_integer()) fail(where + ".sign", "expected an integer");
      cavity.sign = entry["sign"].get<int>();
    }
    config.microwaves.push_back(cavity);
  }
  return config;
}

SystemConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw io_error("cannot open config file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw io_error("failed reading config file: " + path);
  }
  return parse_config_json(buffer.str());
}

std::string config_to_json(const SystemConfig& config) {
  const double two_pi = 2.0 * constants::pi;
  ordered_json doc;
  doc["mechanical"] = {{"frequency", config.mech.omega_m / two_pi},
                       {"quality_factor", config.mech.quality_factor},
                       {"mass", config.mech.mass},
                       {"temperature", config.mech.temperature}};
  doc["optical"] = {{"wavelength", config.optical.drive_wavelength},
                    {"kappa", config.optical.kappa_c / two_pi},
                    {"power", config.optical.drive_power},
                    {"length", config.optical.cavity_length},
                    {"detuning", config.optical.delta_c / two_pi}};
  doc["microwaves"] = ordered_json::array();
  for (const auto& cavity : config.microwaves) {
    doc["microwaves"].push_back({{"frequency", cavity.omega_w / two_pi},
                                 {"kappa", cavity.kappa_w / two_pi},
                                 {"power", cavity.drive_power},
                                 {"gap", cavity.gap},
                                 {"mu", cavity.mu},
                                 {"detuning", cavity.delta_w / two_pi},
                                 {"pair", cavity.pair_id},
                                 {"sign", cavity.sign}});
  }
  return doc.dump(2) + "\n";
}

std::string canonical_config_string(const SystemConfig& config) {
  std::ostringstream out;
  out << "mech.omega_m=" << g17(config.mech.omega_m) << '\n'
      << "mech.quality_factor=" << g17(config.mech.quality_factor) << '\n'
      << "mech.mass=" << g17(config.mech.mass) << '\n'
      << "mech.temperature=" << g17(config.mech.temperature) << '\n'
      << "optical.drive_wavelength=" << g17(config.optical.drive_wavelength) << '\n'
      << "optical.kappa_c=" << g17(config.optical.kappa_c) << '\n'
      << "optical.drive_power=" << g17(config.optical.drive_power) << '\n'
      << "optical.cavity_length=" << g17(config.optical.cavity_length) << '\n'
      << "optical.delta_c=" << g17(config.optical.delta_c) << '\n';
  for (std::size_t i = 0; i < config.microwaves.size(); ++i) {
    const auto& cavity = config.microwaves[i];
    const std::string prefix = "microwave[" + std::to_string(i) + "].";
    out << prefix << "omega_w=" << g17(cavity.omega_w) << '\n'
        << prefix << "kappa_w=" << g17(cavity.kappa_w) << '\n'
        << prefix << "drive_power=" << g17(cavity.drive_power) << '\n'
        << prefix << "gap=" << g17(cavity.gap) << '\n'
        << prefix << "mu=" << g17(cavity.mu) << '\n'
        << prefix << "delta_w=" << g17(cavity.delta_w) << '\n'
        << prefix << "pair_id=" << cavity.pair_id << '\n'
        << prefix << "sign=" << cavity.sign << '\n';
  }
  return out.str();
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char byte : text) {
    hash ^= byte;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::uint64_t config_hash(const SystemConfig& config) {
  return fnv1a64(canonical_config_string(config));
}

}  // namespace oemsim
