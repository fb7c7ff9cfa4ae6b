#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "padic_dbn/energy_models.hpp"
#include "padic_dbn/field_config.hpp"

namespace padic_dbn {

struct EnumerationLimits {
  unsigned max_visible_width = 20;
  unsigned max_joint_width = 24;

  // Honors PADIC_DBN_CAP (joint width in free units); the visible cap never exceeds it.
  static EnumerationLimits from_environment();
};

// Probability table over all 2^width configurations, indexed by bit mask.
class Distribution {
 public:
  Distribution(unsigned width, std::vector<double> probs);

  static Distribution uniform(unsigned width);
  static Distribution point_mass(unsigned width, std::uint64_t bits);
  // Normalizes exp(log_weights) with a max shift.
  static Distribution from_log_weights(unsigned width, std::span<const double> log_weights);
  // Normalizes nonnegative weights.
  static Distribution from_weights(unsigned width, std::span<const double> weights);

  unsigned width() const { return width_; }
  std::size_t size() const { return probs_.size(); }
  const std::vector<double>& probs() const { return probs_; }
  double operator[](std::uint64_t bits) const { return probs_[bits]; }

 private:
  unsigned width_;
  std::vector<double> probs_;
};

double max_abs_difference(const Distribution& x, const Distribution& y);

// Deterministic log(sum exp(x)) in index order, shifted by the running maximum.
class LogSumExp {
 public:
  void add(double x);
  double value() const;

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
};

double log_sum_exp(std::span<const double> xs);

struct PartitionFunction {
  double log_z;
  double value() const;
};

enum class Side { visible, hidden };

// Sum over every (v, h, extra) configuration in ascending bit-mask order.
PartitionFunction partition_function(const DbnModel& m,
                                     const EnumerationLimits& limits = EnumerationLimits::from_environment());

double joint_prob(const DbnModel& m, const FieldConfig& v, const FieldConfig& h, const FieldConfig& extra,
                  const EnumerationLimits& limits = EnumerationLimits::from_environment());
double joint_prob(const DbnModel& m, const FieldConfig& v, const FieldConfig& h,
                  const EnumerationLimits& limits = EnumerationLimits::from_environment());

// Marginal by full joint enumeration.
Distribution marginal(const DbnModel& m, Side side = Side::visible,
                      const EnumerationLimits& limits = EnumerationLimits::from_environment());

// Sum over h (and extra units) of exp(-E(v, h)), by the product formula.
double free_energy_factorized(const DbnModel& m, const FieldConfig& v);
double log_free_energy_factorized(const DbnModel& m, const FieldConfig& v);

// Log of the unnormalized visible marginal for every v, factorized route.
std::vector<double> log_visible_weights(const DbnModel& m,
                                        const EnumerationLimits& limits = EnumerationLimits::from_environment());
Distribution visible_marginal_factorized(const DbnModel& m,
                                         const EnumerationLimits& limits = EnumerationLimits::from_environment());

// ln(1 + e^x) without overflow.
double log1p_exp(double x);

// KL(q | p) with 0 ln 0 = 0; +infinity when q puts mass where p has none.
double kl_divergence(const Distribution& q, const Distribution& p);
bool kl_support_violated(const Distribution& q, const Distribution& p);
double entropy(const Distribution& q);

}  // namespace padic_dbn
