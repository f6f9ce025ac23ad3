#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rsgraph/demand.hpp"
#include "rsgraph/errors.hpp"

namespace rsgraph {

struct CostParams {
  double fixed = 0.0;     // K, per order (or review)
  double unit = 0.0;      // z, per unit ordered
  double holding = 1.0;   // h, per unit per period
  double penalty = 1.0;   // b, per unit back-ordered per period

  double critical_fractile() const { return penalty / (penalty + holding); }
};

enum class DemandPattern { erratic, lumpy, explicit_means };

inline std::string to_string(DemandPattern p) {
  switch (p) {
    case DemandPattern::erratic: return "erratic";
    case DemandPattern::lumpy: return "lumpy";
    case DemandPattern::explicit_means: return "explicit";
  }
  return "explicit";
}

inline DemandPattern parse_pattern(const std::string& s) {
  if (s == "erratic") return DemandPattern::erratic;
  if (s == "lumpy") return DemandPattern::lumpy;
  if (s == "explicit") return DemandPattern::explicit_means;
  throw InputError("unknown demand pattern '" + s + "' (expected erratic, lumpy or explicit)");
}

// A single-item lot-sizing problem with Normal demand, sigma_t = cv * mean_t.
struct Instance {
  std::string id;
  std::vector<double> means;
  double cv = 0.0;
  CostParams costs;
  DemandPattern pattern = DemandPattern::explicit_means;
  std::uint64_t seed = 0;
  double initial_inventory = 0.0;

  int horizon() const { return static_cast<int>(means.size()); }

  std::vector<PeriodDemand> demands() const {
    std::vector<PeriodDemand> out;
    out.reserve(means.size());
    for (double m : means) out.push_back({m, cv * m});
    return out;
  }

  DemandProfile profile() const { return DemandProfile(demands()); }
};

inline void validate(const Instance& inst) {
  auto fail = [](const std::string& field, const std::string& why) {
    throw InputError("field '" + field + "': " + why);
  };
  if (inst.means.empty()) fail("means", "must contain at least one period");
  for (std::size_t t = 0; t < inst.means.size(); ++t) {
    if (!std::isfinite(inst.means[t]) || inst.means[t] < 0.0) {
      fail("means[" + std::to_string(t) + "]", "must be finite and nonnegative");
    }
  }
  if (!std::isfinite(inst.cv) || inst.cv < 0.0) fail("cv", "must be finite and nonnegative");
  const auto& c = inst.costs;
  if (!std::isfinite(c.fixed) || c.fixed < 0.0) fail("K", "must be finite and nonnegative");
  if (!std::isfinite(c.unit) || c.unit < 0.0) fail("z", "must be finite and nonnegative");
  if (!std::isfinite(c.holding) || c.holding <= 0.0) fail("h", "must be positive");
  if (!std::isfinite(c.penalty) || c.penalty <= 0.0) fail("b", "must be positive");
  if (c.unit >= c.penalty) fail("z", "must be below b, otherwise the final cycle has no finite optimum");
  if (!std::isfinite(inst.initial_inventory)) fail("initial_inventory", "must be finite");
}

inline nlohmann::json to_json(const Instance& inst) {
  nlohmann::json j;
  if (!inst.id.empty()) j["id"] = inst.id;
  j["horizon"] = inst.horizon();
  j["pattern"] = to_string(inst.pattern);
  j["means"] = inst.means;
  j["cv"] = inst.cv;
  j["K"] = inst.costs.fixed;
  j["z"] = inst.costs.unit;
  j["h"] = inst.costs.holding;
  j["b"] = inst.costs.penalty;
  j["seed"] = inst.seed;
  j["initial_inventory"] = inst.initial_inventory;
  return j;
}

inline Instance instance_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("instance must be a JSON object");
  auto number = [&](const char* key, bool required, double fallback) -> double {
    if (!j.contains(key)) {
      if (required) throw InputError(std::string("field '") + key + "': missing");
      return fallback;
    }
    if (!j.at(key).is_number()) throw InputError(std::string("field '") + key + "': not a number");
    return j.at(key).get<double>();
  };
  Instance inst;
  if (j.contains("id")) {
    if (!j.at("id").is_string()) throw InputError("field 'id': not a string");
    inst.id = j.at("id").get<std::string>();
  }
  if (!j.contains("means")) throw InputError("field 'means': missing");
  if (!j.at("means").is_array()) throw InputError("field 'means': not an array");
  for (std::size_t t = 0; t < j.at("means").size(); ++t) {
    const auto& m = j.at("means")[t];
    if (!m.is_number()) throw InputError("field 'means[" + std::to_string(t) + "]': not a number");
    inst.means.push_back(m.get<double>());
  }
  if (j.contains("horizon")) {
    if (!j.at("horizon").is_number_integer()) throw InputError("field 'horizon': not an integer");
    if (j.at("horizon").get<long long>() != static_cast<long long>(inst.means.size())) {
      throw InputError("field 'horizon': " + j.at("horizon").dump() + " does not match " +
                       std::to_string(inst.means.size()) + " entries in 'means'");
    }
  }
  inst.cv = number("cv", true, 0.0);
  inst.costs.fixed = number("K", true, 0.0);
  inst.costs.unit = number("z", false, 0.0);
  inst.costs.holding = number("h", true, 1.0);
  inst.costs.penalty = number("b", true, 1.0);
  inst.initial_inventory = number("initial_inventory", false, 0.0);
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer()) {
      throw InputError("field 'seed': not an integer");
    }
    inst.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("pattern")) {
    if (!j.at("pattern").is_string()) throw InputError("field 'pattern': not a string");
    inst.pattern = parse_pattern(j.at("pattern").get<std::string>());
  }
  validate(inst);
  return inst;
}

inline Instance parse_instance(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // Report a line number; nlohmann only gives the byte offset.
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i) {
      if (text[i] == '\n') ++line;
    }
    throw InputError("line " + std::to_string(line) + ": " + e.what());
  }
  return instance_from_json(j);
}

// Failure to open the file is reported as std::ios_base::failure (an I/O error,
// not an input error).
inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::ios_base::failure("write to '" + path + "' failed");
}

inline Instance load_instance(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_instance(text);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

inline void save_instance(const Instance& inst, const std::string& path) {
  write_text_file(path, to_json(inst).dump(2) + "\n");
}

}  // namespace rsgraph
