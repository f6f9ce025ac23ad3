#pragma once

// (R_t, S_t) policy parameters: which periods are reviewed and the order-up-to
// level at each review.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"
#include "rsgraph/demand.hpp"
#include "rsgraph/errors.hpp"
#include "rsgraph/graph.hpp"
#include "rsgraph/instance.hpp"

namespace rsgraph {

enum class PolicySource { relaxed, augmented, external };

inline const char* to_string(PolicySource s) {
  switch (s) {
    case PolicySource::relaxed: return "relaxed";
    case PolicySource::augmented: return "augmented";
    case PolicySource::external: return "external";
  }
  return "external";
}

inline PolicySource parse_policy_source(const std::string& s) {
  if (s == "relaxed") return PolicySource::relaxed;
  if (s == "augmented") return PolicySource::augmented;
  if (s == "external") return PolicySource::external;
  throw InputError("unknown policy source '" + s + "'");
}

struct PeriodDecision {
  bool review = false;
  // A review that pays K but never orders. order_up_to then holds the
  // projected expected inventory at that point (informational).
  bool zero_quantity = false;
  double order_up_to = std::numeric_limits<double>::quiet_NaN();
};

struct PolicyParams {
  std::vector<PeriodDecision> periods;  // index t-1
  PolicySource source = PolicySource::external;

  int horizon() const { return static_cast<int>(periods.size()); }
  const PeriodDecision& at(int t) const { return periods.at(static_cast<std::size_t>(t - 1)); }

  std::vector<int> review_periods() const {
    std::vector<int> out;
    for (int t = 1; t <= horizon(); ++t) {
      if (at(t).review) out.push_back(t);
    }
    return out;
  }
};

inline void validate(const PolicyParams& p) {
  if (p.periods.empty()) throw InputError("policy has no periods");
  if (!p.periods.front().review || p.periods.front().zero_quantity) {
    throw InputError("policy must place an order in period 1");
  }
  for (int t = 1; t <= p.horizon(); ++t) {
    const auto& d = p.at(t);
    if (d.review && !d.zero_quantity && !std::isfinite(d.order_up_to)) {
      throw InputError("policy period " + std::to_string(t) + ": review without a finite order-up-to level");
    }
    if (!d.review && d.zero_quantity) {
      throw InputError("policy period " + std::to_string(t) + ": zero-quantity flag without a review");
    }
  }
}

/// Policy implied by a source-to-sink path.
inline PolicyParams extract_policy(const PathSolution& path, const DemandProfile& demand,
                                   PolicySource source) {
  PolicyParams p;
  p.source = source;
  p.periods.resize(static_cast<std::size_t>(demand.horizon()));
  for (const Arc& a : path.arcs) {
    auto& d = p.periods.at(static_cast<std::size_t>(a.cycle_start - 1));
    d.review = true;
    d.zero_quantity = false;
    d.order_up_to = a.order_up_to;
    for (int r : a.zero_reviews) {
      auto& z = p.periods.at(static_cast<std::size_t>(r - 1));
      z.review = true;
      z.zero_quantity = true;
      z.order_up_to = a.order_up_to - demand.mean(a.cycle_start, r - 1);
    }
  }
  return p;
}

inline nlohmann::json to_json(const PolicyParams& p) {
  nlohmann::json j;
  j["horizon"] = p.horizon();
  j["source"] = to_string(p.source);
  nlohmann::json reviews = nlohmann::json::array();
  for (int t = 1; t <= p.horizon(); ++t) {
    const auto& d = p.at(t);
    if (!d.review) continue;
    nlohmann::json r;
    r["period"] = t;
    r["order_up_to"] = d.order_up_to;
    r["zero_quantity"] = d.zero_quantity;
    reviews.push_back(r);
  }
  j["reviews"] = reviews;
  return j;
}

inline PolicyParams policy_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("policy must be a JSON object");
  if (!j.contains("horizon") || !j.at("horizon").is_number_integer()) {
    throw InputError("policy field 'horizon': missing or not an integer");
  }
  const auto horizon = j.at("horizon").get<long long>();
  if (horizon < 1) throw InputError("policy field 'horizon': must be at least 1");
  PolicyParams p;
  p.periods.resize(static_cast<std::size_t>(horizon));
  if (j.contains("source")) p.source = parse_policy_source(j.at("source").get<std::string>());
  if (!j.contains("reviews") || !j.at("reviews").is_array()) {
    throw InputError("policy field 'reviews': missing or not an array");
  }
  for (const auto& r : j.at("reviews")) {
    if (!r.contains("period") || !r.at("period").is_number_integer()) {
      throw InputError("policy review: 'period' missing or not an integer");
    }
    const auto t = r.at("period").get<long long>();
    if (t < 1 || t > horizon) throw InputError("policy review period " + std::to_string(t) + " out of range");
    auto& d = p.periods[static_cast<std::size_t>(t - 1)];
    d.review = true;
    d.zero_quantity = r.value("zero_quantity", false);
    if (r.contains("order_up_to") && r.at("order_up_to").is_number()) {
      d.order_up_to = r.at("order_up_to").get<double>();
    }
  }
  validate(p);
  return p;
}

inline PolicyParams load_policy(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return policy_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": " + e.what());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

inline void save_policy(const PolicyParams& p, const std::string& path) {
  write_text_file(path, to_json(p).dump(2) + "\n");
}

}  // namespace rsgraph
