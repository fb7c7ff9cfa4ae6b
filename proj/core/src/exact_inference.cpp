#include "padic_dbn/exact_inference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

namespace padic_dbn {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_visible(const DbnModel& m, const EnumerationLimits& limits) {
  if (m.units() > limits.max_visible_width) {
    throw CapExceeded(fmt::format("visible width {} exceeds the cap {}", m.units(), limits.max_visible_width));
  }
}

unsigned joint_width(const DbnModel& m) { return static_cast<unsigned>(2 * m.units() + m.deepening().size()); }

void check_joint(const DbnModel& m, const EnumerationLimits& limits) {
  if (joint_width(m) > limits.max_joint_width) {
    throw CapExceeded(
        fmt::format("joint enumeration over {} units exceeds the cap {}", joint_width(m), limits.max_joint_width));
  }
}

// -E for a fixed v, from the hidden drive; the bias and drive terms follow the energy definitions.
struct VisibleSlice {
  double visible_term = 0.0;     // sum a_i v_i
  std::vector<double> drive;     // c_j(v) + b_j
  std::vector<double> layer;     // <w_eff, v> + b_eff, unused for silent layers
};

VisibleSlice slice(const DbnModel& m, const FieldConfig& v) {
  VisibleSlice s;
  for (std::size_t i = 0; i < m.units(); ++i) {
    if (v[i]) s.visible_term += m.visible_bias()[i];
  }
  s.drive = hidden_drive(m, v);
  for (std::size_t j = 0; j < m.units(); ++j) s.drive[j] += m.hidden_bias()[j];
  for (const auto& layer : m.deepening()) {
    s.layer.push_back(layer.silent() ? -kInf : layer_drive(layer, v) + *layer.b_eff);
  }
  return s;
}

// Enumerates (h, extra) for one v in ascending order, feeding -E into acc.
void accumulate_hidden(const DbnModel& m, const VisibleSlice& s, LogSumExp& acc,
                       std::vector<LogSumExp>* hidden_acc) {
  const std::size_t n = m.units();
  const std::size_t layers = m.deepening().size();
  for (std::uint64_t h = 0; h < (std::uint64_t{1} << n); ++h) {
    double neg_e = s.visible_term;
    for (std::size_t j = 0; j < n; ++j) {
      if ((h >> j) & 1u) neg_e += s.drive[j];
    }
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << layers); ++x) {
      double total = neg_e;
      bool frozen = false;
      for (std::size_t i = 0; i < layers; ++i) {
        if (!((x >> i) & 1u)) continue;
        if (m.deepening()[i].silent()) {
          frozen = true;
          break;
        }
        total += s.layer[i];
      }
      if (frozen) continue;
      if (!std::isfinite(total)) throw DomainError("non-finite energy during enumeration");
      acc.add(total);
      if (hidden_acc) (*hidden_acc)[h].add(total);
    }
  }
}

}  // namespace

EnumerationLimits EnumerationLimits::from_environment() {
  EnumerationLimits limits;
  if (const char* env = std::getenv("PADIC_DBN_CAP")) {
    try {
      const unsigned long cap = std::stoul(env);
      limits.max_joint_width = static_cast<unsigned>(std::min(cap, 62ul));
      limits.max_visible_width = std::min(limits.max_visible_width, limits.max_joint_width);
    } catch (const std::exception&) {
      throw DomainError(fmt::format("PADIC_DBN_CAP='{}' is not a number", env));
    }
  }
  return limits;
}

Distribution::Distribution(unsigned width, std::vector<double> probs) : width_(width), probs_(std::move(probs)) {
  if (width > 62) throw DomainError("distribution width above 62");
  if (probs_.size() != (std::size_t{1} << width)) {
    throw DomainError(fmt::format("distribution of width {} needs {} entries, got {}", width,
                                  std::size_t{1} << width, probs_.size()));
  }
  double sum = 0.0;
  for (double x : probs_) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("distribution entries must be finite and nonnegative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw DomainError(fmt::format("distribution sums to {:.17g}", sum));
}

Distribution Distribution::uniform(unsigned width) {
  const std::size_t n = std::size_t{1} << width;
  return Distribution(width, std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Distribution Distribution::point_mass(unsigned width, std::uint64_t bits) {
  std::vector<double> probs(std::size_t{1} << width, 0.0);
  if (bits >= probs.size()) throw DomainError("point_mass: bits exceed width");
  probs[bits] = 1.0;
  return Distribution(width, std::move(probs));
}

Distribution Distribution::from_log_weights(unsigned width, std::span<const double> log_weights) {
  const double log_z = log_sum_exp(log_weights);
  if (!std::isfinite(log_z)) throw DomainError("from_log_weights: total weight is not finite and positive");
  std::vector<double> probs;
  probs.reserve(log_weights.size());
  for (double lw : log_weights) probs.push_back(std::exp(lw - log_z));
  return Distribution(width, std::move(probs));
}

Distribution Distribution::from_weights(unsigned width, std::span<const double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("from_weights: weights must be finite and nonnegative");
    sum += w;
  }
  if (!(sum > 0.0)) throw DomainError("from_weights: all weights are zero");
  std::vector<double> probs;
  probs.reserve(weights.size());
  for (double w : weights) probs.push_back(w / sum);
  return Distribution(width, std::move(probs));
}

double max_abs_difference(const Distribution& x, const Distribution& y) {
  if (x.width() != y.width()) throw DomainError("max_abs_difference: widths differ");
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

void LogSumExp::add(double x) {
  if (x == -kInf) return;
  if (x > max_) {
    sum_ = sum_ * std::exp(max_ - x) + 1.0;
    max_ = x;
  } else {
    sum_ += std::exp(x - max_);
  }
}

double LogSumExp::value() const { return sum_ == 0.0 ? -kInf : max_ + std::log(sum_); }

double log_sum_exp(std::span<const double> xs) {
  double hi = -kInf;
  for (double x : xs) hi = std::max(hi, x);
  if (hi == -kInf) return -kInf;
  double sum = 0.0;
  for (double x : xs) sum += std::exp(x - hi);
  return hi + std::log(sum);
}

double PartitionFunction::value() const { return std::exp(log_z); }

PartitionFunction partition_function(const DbnModel& m, const EnumerationLimits& limits) {
  check_joint(m, limits);
  LogSumExp acc;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << m.units()); ++v) {
    accumulate_hidden(m, slice(m, FieldConfig(v, static_cast<unsigned>(m.units()))), acc, nullptr);
  }
  return PartitionFunction{acc.value()};
}

double joint_prob(const DbnModel& m, const FieldConfig& v, const FieldConfig& h, const FieldConfig& extra,
                  const EnumerationLimits& limits) {
  const auto e = deep_energy(m, v, h, extra);
  if (!e) return 0.0;
  return std::exp(-*e - partition_function(m, limits).log_z);
}

double joint_prob(const DbnModel& m, const FieldConfig& v, const FieldConfig& h, const EnumerationLimits& limits) {
  return joint_prob(m, v, h, FieldConfig::zeros(static_cast<unsigned>(m.deepening().size())), limits);
}

Distribution marginal(const DbnModel& m, Side side, const EnumerationLimits& limits) {
  check_joint(m, limits);
  check_visible(m, limits);
  const auto n = static_cast<unsigned>(m.units());
  const std::size_t size = std::size_t{1} << n;
  if (side == Side::visible) {
    std::vector<double> log_w(size);
    for (std::uint64_t v = 0; v < size; ++v) {
      LogSumExp acc;
      accumulate_hidden(m, slice(m, FieldConfig(v, n)), acc, nullptr);
      log_w[v] = acc.value();
    }
    return Distribution::from_log_weights(n, log_w);
  }
  std::vector<LogSumExp> per_h(size);
  LogSumExp total;
  for (std::uint64_t v = 0; v < size; ++v) accumulate_hidden(m, slice(m, FieldConfig(v, n)), total, &per_h);
  std::vector<double> log_w;
  log_w.reserve(size);
  for (const auto& acc : per_h) log_w.push_back(acc.value());
  return Distribution::from_log_weights(n, log_w);
}

double log1p_exp(double x) {
  if (x == -kInf) return 0.0;
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double log_free_energy_factorized(const DbnModel& m, const FieldConfig& v) {
  if (v.width() != m.units()) throw DomainError("free_energy_factorized: width mismatch");
  const VisibleSlice s = slice(m, v);
  double out = s.visible_term;
  for (double c : s.drive) out += log1p_exp(c);
  for (double c : s.layer) out += log1p_exp(c);
  return out;
}

double free_energy_factorized(const DbnModel& m, const FieldConfig& v) {
  return std::exp(log_free_energy_factorized(m, v));
}

std::vector<double> log_visible_weights(const DbnModel& m, const EnumerationLimits& limits) {
  check_visible(m, limits);
  const auto n = static_cast<unsigned>(m.units());
  std::vector<double> log_w(std::size_t{1} << n);
  for (std::uint64_t v = 0; v < log_w.size(); ++v) log_w[v] = log_free_energy_factorized(m, FieldConfig(v, n));
  return log_w;
}

Distribution visible_marginal_factorized(const DbnModel& m, const EnumerationLimits& limits) {
  const auto log_w = log_visible_weights(m, limits);
  return Distribution::from_log_weights(static_cast<unsigned>(m.units()), log_w);
}

bool kl_support_violated(const Distribution& q, const Distribution& p) {
  if (q.width() != p.width()) throw DomainError("kl_divergence: widths differ");
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] > 0.0 && p[i] == 0.0) return true;
  }
  return false;
}

double kl_divergence(const Distribution& q, const Distribution& p) {
  if (kl_support_violated(q, p)) return kInf;
  double sum = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] > 0.0) sum += q[i] * std::log(q[i] / p[i]);
  }
  // Gibbs' inequality holds exactly; clear rounding noise below zero.
  return std::max(sum, 0.0);
}

double entropy(const Distribution& q) {
  double sum = 0.0;
  for (double x : q.probs()) {
    if (x > 0.0) sum -= x * std::log(x);
  }
  return sum;
}

}  // namespace padic_dbn
