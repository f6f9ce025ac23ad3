#pragma once

// Per-period Normal demand, cumulative horizon demand and first-order loss
// functions. The Normal is used untruncated; with cv <= 0.3 the negative tail
// carries less than 0.05% of the mass.

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rsgraph/errors.hpp"

namespace rsgraph {

struct PeriodDemand {
  double mean = 0.0;
  double std_dev = 0.0;
};

// Demand accumulated over periods first..last (1-based, inclusive).
struct HorizonDemand {
  int first_period = 1;
  int last_period = 1;
  double mean = 0.0;
  double std_dev = 0.0;
};

namespace detail {

inline double std_normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

inline double std_normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

inline void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw InputError(std::string(what) + " must be finite");
  }
}

}  // namespace detail

inline HorizonDemand cumulative(std::span<const PeriodDemand> demands, int i, int k) {
  const int horizon = static_cast<int>(demands.size());
  if (i < 1 || k < i || k > horizon) {
    std::ostringstream msg;
    msg << "cumulative demand range [" << i << ", " << k << "] outside horizon 1.." << horizon;
    throw InputError(msg.str());
  }
  double mean = 0.0;
  double var = 0.0;
  for (int t = i; t <= k; ++t) {
    mean += demands[t - 1].mean;
    var += demands[t - 1].std_dev * demands[t - 1].std_dev;
  }
  return {i, k, mean, std::sqrt(var)};
}

/// E[max(d - x, 0)] for Normal d. Zero std_dev degenerates to max(mean - x, 0).
inline double loss(double x, double mean, double std_dev) {
  detail::require_finite(x, "loss argument");
  if (std_dev <= 0.0) {
    return std::max(mean - x, 0.0);
  }
  const double z = (x - mean) / std_dev;
  const double value =
      std_dev * (detail::std_normal_pdf(z) - 0.5 * std::erfc(z / std::numbers::sqrt2) * z);
  return std::max(value, 0.0);
}

/// E[max(x - d, 0)] for Normal d.
inline double complementary_loss(double x, double mean, double std_dev) {
  detail::require_finite(x, "loss argument");
  if (std_dev <= 0.0) {
    return std::max(x - mean, 0.0);
  }
  const double z = (x - mean) / std_dev;
  const double value = std_dev * (detail::std_normal_pdf(z) + detail::std_normal_cdf(z) * z);
  return std::max(value, 0.0);
}

inline double loss(double x, const HorizonDemand& d) { return loss(x, d.mean, d.std_dev); }

inline double complementary_loss(double x, const HorizonDemand& d) {
  return complementary_loss(x, d.mean, d.std_dev);
}

// Generic distributions for the quadrature path.

struct Density {
  std::function<double(double)> pdf;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
};

struct PointMass {
  double at = 0.0;
};

using GenericDistribution = std::variant<Density, PointMass>;

struct QuadratureOptions {
  double abs_tolerance = 1e-8;
  unsigned max_depth = 15;
};

/// E[max(d - x, 0)] by adaptive Gauss-Kronrod quadrature over [max(x, lower), upper].
inline double numeric_loss(double x, const GenericDistribution& dist,
                           const QuadratureOptions& opts = {}) {
  detail::require_finite(x, "loss argument");
  if (const auto* pm = std::get_if<PointMass>(&dist)) {
    return std::max(pm->at - x, 0.0);
  }
  const auto& density = std::get<Density>(dist);
  const double lo = std::max(x, density.lower);
  const double hi = density.upper;
  if (!(lo < hi)) {
    return 0.0;
  }
  auto integrand = [&](double d) { return (d - x) * density.pdf(d); };
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, lo, hi, opts.max_depth, opts.abs_tolerance * 1e-3, &error, &l1);
  if (!std::isfinite(value) || error > opts.abs_tolerance) {
    std::ostringstream msg;
    msg << "numeric_loss: quadrature did not converge on [" << lo << ", " << hi
        << "] at x=" << x << " (estimate " << value << ", error " << error << ", L1 " << l1
        << ", tolerance " << opts.abs_tolerance << ")";
    throw NumericalError(msg.str());
  }
  return std::max(value, 0.0);
}

/// E[max(x - d, 0)] by quadrature over [lower, min(x, upper)].
inline double numeric_complementary_loss(double x, const GenericDistribution& dist,
                                         const QuadratureOptions& opts = {}) {
  detail::require_finite(x, "loss argument");
  if (const auto* pm = std::get_if<PointMass>(&dist)) {
    return std::max(x - pm->at, 0.0);
  }
  const auto& density = std::get<Density>(dist);
  const double lo = density.lower;
  const double hi = std::min(x, density.upper);
  if (!(lo < hi)) {
    return 0.0;
  }
  auto integrand = [&](double d) { return (x - d) * density.pdf(d); };
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, lo, hi, opts.max_depth, opts.abs_tolerance * 1e-3, &error);
  if (!std::isfinite(value) || error > opts.abs_tolerance) {
    std::ostringstream msg;
    msg << "numeric_complementary_loss: quadrature did not converge at x=" << x
        << " (estimate " << value << ", error " << error << ")";
    throw NumericalError(msg.str());
  }
  return std::max(value, 0.0);
}

inline Density normal_density(double mean, double std_dev) {
  return {[mean, std_dev](double d) {
            return detail::std_normal_pdf((d - mean) / std_dev) / std_dev;
          },
          -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
}

// Prefix sums over a demand vector so cumulative(i, k) is O(1).
class DemandProfile {
 public:
  DemandProfile() = default;

  explicit DemandProfile(std::vector<PeriodDemand> demands) : demands_(std::move(demands)) {
    mean_prefix_.assign(demands_.size() + 1, 0.0);
    var_prefix_.assign(demands_.size() + 1, 0.0);
    for (std::size_t t = 0; t < demands_.size(); ++t) {
      mean_prefix_[t + 1] = mean_prefix_[t] + demands_[t].mean;
      var_prefix_[t + 1] = var_prefix_[t] + demands_[t].std_dev * demands_[t].std_dev;
    }
  }

  int horizon() const { return static_cast<int>(demands_.size()); }
  std::span<const PeriodDemand> periods() const { return demands_; }
  const PeriodDemand& period(int t) const { return demands_.at(static_cast<std::size_t>(t - 1)); }

  double mean(int i, int k) const { return mean_prefix_[k] - mean_prefix_[i - 1]; }

  HorizonDemand cumulative(int i, int k) const {
    if (i < 1 || k < i || k > horizon()) {
      return rsgraph::cumulative(demands_, i, k);  // throws with the range in the message
    }
    const double var = std::max(var_prefix_[k] - var_prefix_[i - 1], 0.0);
    return {i, k, mean(i, k), std::sqrt(var)};
  }

 private:
  std::vector<PeriodDemand> demands_;
  std::vector<double> mean_prefix_;
  std::vector<double> var_prefix_;
};

}  // namespace rsgraph
