#include "pbsi/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pbsi {
namespace {

[[noreturn]] void fail(const std::string& label, int line, const std::string& msg) {
  throw std::runtime_error(label + ":" + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(value);
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  if (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

double parse_double(const std::string& label, int line, const std::string& tok) {
  if (tok.empty()) fail(label, line, "expected a number");
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size())
    fail(label, line, "not a number: '" + tok + "'");
  return v;
}

long long parse_int(const std::string& label, int line, const std::string& tok) {
  if (tok.empty()) fail(label, line, "expected an integer");
  char* end = nullptr;
  const long long v = std::strtoll(tok.c_str(), &end, 10);
  if (end != tok.c_str() + tok.size())
    fail(label, line, "not an integer: '" + tok + "'");
  return v;
}

std::vector<double> parse_doubles(const std::string& label, int line,
                                  const std::string& value) {
  std::vector<double> out;
  for (const std::string& tok : split_list(value))
    out.push_back(parse_double(label, line, tok));
  return out;
}

std::vector<int> parse_ints(const std::string& label, int line,
                            const std::string& value) {
  std::vector<int> out;
  for (const std::string& tok : split_list(value))
    out.push_back(static_cast<int>(parse_int(label, line, tok)));
  return out;
}

SweepAxis parse_axis_tok(const std::string& label, int line, const std::string& tok) {
  SweepAxis axis;
  if (!parse_sweep_axis(tok, axis))
    fail(label, line, "unknown sweep axis '" + tok +
                          "' (expected none, lambda, xi, eta or msur)");
  return axis;
}

}  // namespace

ExperimentSpec parse_experiment_spec(const std::string& text,
                                     const std::string& label) {
  ExperimentSpec spec;
  spec.base.energy = EnergyModel::bernoulli(0.12);

  std::string section;  // "" = top level
  bool saw_aofbl = false;
  std::string energy_kind = "bernoulli";
  double energy_param = 0.12;
  std::vector<int> table_support;
  std::vector<double> table_probs;

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(label, line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "sensor" && section != "system" && section != "sweep")
        fail(label, line, "unknown section [" + section + "]");
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) fail(label, line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail(label, line, "empty key");
    if (value.empty()) fail(label, line, "empty value for '" + key + "'");

    if (section.empty()) {
      if (key == "scenario") spec.scenario = value;
      else if (key == "seed")
        spec.seed = static_cast<std::uint64_t>(parse_int(label, line, value));
      else if (key == "episodes") spec.episodes = parse_int(label, line, value);
      else if (key == "horizon") spec.horizon = parse_int(label, line, value);
      else if (key == "workers")
        spec.workers = static_cast<int>(parse_int(label, line, value));
      else if (key == "out") spec.out = value;
      else if (key == "oft_eval_slots")
        spec.oft_eval_slots = parse_int(label, line, value);
      else if (key == "policies") {
        spec.policies = split_list(value);
        for (const std::string& name : spec.policies) {
          PolicyKind kind;
          if (!parse_policy_name(name, kind))
            fail(label, line, "unknown policy '" + name + "'");
        }
      } else
        fail(label, line, "unknown key '" + key + "'");
    } else if (section == "sensor") {
      if (key == "battery_capacity")
        spec.base.battery_capacity = static_cast<int>(parse_int(label, line, value));
      else if (key == "max_aocsi")
        spec.base.max_aocsi = static_cast<int>(parse_int(label, line, value));
      else if (key == "max_aofbl") {
        spec.base.max_aofbl = static_cast<int>(parse_int(label, line, value));
        saw_aofbl = true;
      } else if (key == "weight")
        spec.base.weight = parse_double(label, line, value);
      else if (key == "eta")
        spec.base.request_prob = parse_double(label, line, value);
      else if (key == "xi")
        spec.base.channel_success = parse_double(label, line, value);
      else if (key == "energy") {
        if (value != "bernoulli" && value != "poisson" && value != "table")
          fail(label, line, "unknown energy model '" + value + "'");
        energy_kind = value;
      } else if (key == "lambda")
        energy_param = parse_double(label, line, value);
      else if (key == "energy_support")
        table_support = parse_ints(label, line, value);
      else if (key == "energy_probs")
        table_probs = parse_doubles(label, line, value);
      else
        fail(label, line, "unknown key '" + key + "' in [sensor]");
    } else if (section == "system") {
      if (key == "num_sensors")
        spec.num_sensors = static_cast<int>(parse_int(label, line, value));
      else if (key == "msur")
        spec.msur = parse_double(label, line, value);
      else if (key == "xi_values")
        spec.xi_values = parse_doubles(label, line, value);
      else if (key == "xi_counts")
        spec.xi_counts = parse_ints(label, line, value);
      else if (key == "lambda_values")
        spec.lambda_values = parse_doubles(label, line, value);
      else if (key == "lambda_counts")
        spec.lambda_counts = parse_ints(label, line, value);
      else
        fail(label, line, "unknown key '" + key + "' in [system]");
    } else {  // [sweep]
      if (key == "axis") spec.axis = parse_axis_tok(label, line, value);
      else if (key == "values")
        spec.values = parse_doubles(label, line, value);
      else if (key == "split_axis")
        spec.split_axis = parse_axis_tok(label, line, value);
      else if (key == "split_values")
        spec.split_values = parse_doubles(label, line, value);
      else
        fail(label, line, "unknown key '" + key + "' in [sweep]");
    }
  }

  if (!saw_aofbl) spec.base.max_aofbl = spec.base.max_aocsi;
  if (energy_kind == "bernoulli")
    spec.base.energy = EnergyModel::bernoulli(energy_param);
  else if (energy_kind == "poisson")
    spec.base.energy = EnergyModel::poisson(energy_param);
  else
    spec.base.energy = EnergyModel::table(table_support, table_probs);

  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(label + ": " + e.what());
  }
  return spec;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open spec file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_experiment_spec(buf.str(), path);
}

}  // namespace pbsi
