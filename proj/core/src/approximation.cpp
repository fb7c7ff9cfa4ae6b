#include "padic_dbn/approximation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

namespace padic_dbn {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double dot(const std::vector<double>& w, const FieldConfig& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (v[i]) s += w[i];
  }
  return s;
}

// Marginal after multiplying each visible weight by 1 + exp(<w, v> + b).
Distribution with_layer(const std::vector<double>& log_w, unsigned width, const std::vector<double>& w, double b) {
  std::vector<double> out(log_w.size());
  for (std::uint64_t v = 0; v < log_w.size(); ++v) out[v] = log_w[v] + log1p_exp(dot(w, FieldConfig(v, width)) + b);
  return Distribution::from_log_weights(width, out);
}

std::vector<std::uint64_t> support_ascending(const Distribution& q) {
  std::vector<std::uint64_t> order;
  for (std::uint64_t v = 0; v < q.size(); ++v) {
    if (q[v] > 0.0) order.push_back(v);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::uint64_t x, std::uint64_t y) { return q[x] < q[y]; });
  return order;
}

}  // namespace

std::vector<double> indicator_weights(const FieldConfig& target, double alpha) {
  std::vector<double> w(target.width());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = alpha * ((target[i] ? 1.0 : 0.0) - 0.5);
  return w;
}

Lemma3Choice lemma3_select(const Distribution& q, const Distribution& p_model, double alpha) {
  if (q.width() != p_model.width()) throw DomainError("lemma3_select: widths differ");
  if (!(alpha > 0.0)) throw DomainError("lemma3_select: alpha must be positive");
  if (max_abs_difference(q, p_model) < 1e-12) throw AlreadyMatched("target already equals the model marginal");
  std::uint64_t best = 0;
  double gap = 0.0;
  for (std::uint64_t v = 0; v < q.size(); ++v) {
    const double d = q[v] - p_model[v];
    if (d > gap) {
      gap = d;
      best = v;
    }
  }
  if (gap <= 0.0) throw AlreadyMatched("no configuration where the target exceeds the model");
  const FieldConfig v_hat(best, q.width());
  return Lemma3Choice{v_hat, indicator_weights(v_hat, alpha)};
}

double inequality1_sum(const std::vector<double>& w, const Distribution& p_model, const Distribution& q) {
  if (w.size() != q.width() || q.width() != p_model.width()) throw DomainError("inequality1_sum: widths differ");
  double top = -kInf;
  for (std::uint64_t v = 0; v < q.size(); ++v) top = std::max(top, dot(w, FieldConfig(v, q.width())));
  double s = 0.0;
  for (std::uint64_t v = 0; v < q.size(); ++v) {
    s += std::exp(dot(w, FieldConfig(v, q.width())) - top) * (p_model[v] - q[v]);
  }
  return s;
}

double first_order_kl_gap(const Distribution& q, const Distribution& p_model, const DeepLayer& layer) {
  if (layer.silent()) return 0.0;
  double s = 0.0;
  for (std::uint64_t v = 0; v < q.size(); ++v) {
    s += std::exp(dot(layer.w_eff, FieldConfig(v, q.width())) + *layer.b_eff) * (p_model[v] - q[v]);
  }
  return s;
}

Theorem2Step theorem2_step(const DbnModel& current, const Distribution& q, const SearchOptions& options) {
  const auto n = static_cast<unsigned>(current.units());
  if (q.width() != n) throw DomainError("theorem2_step: target width differs from the model");
  const std::vector<double> log_w = log_visible_weights(current);
  const Distribution p_model = Distribution::from_log_weights(n, log_w);
  const double kl0 = kl_divergence(q, p_model);

  Lemma3Choice choice = lemma3_select(q, p_model, options.alpha_start);
  double alpha0 = options.alpha_start;
  for (unsigned t = 0; inequality1_sum(choice.w_hat, p_model, q) >= 0.0; ++t) {
    if (t == options.max_alpha_doublings) throw DomainError("theorem2_step: no alpha makes the weighted shortfall sum negative");
    alpha0 *= 2.0;
    choice.w_hat = indicator_weights(choice.v_hat, alpha0);
  }

  Theorem2Step best{DeepLayer{}, choice.v_hat, alpha0, alpha0, 0.0, kl0, kl0, false};
  double best_kl = kInf;
  for (unsigned t = 0; t < options.alpha_ladder; ++t) {
    const double alpha = alpha0 * std::ldexp(1.0, static_cast<int>(t));
    const std::vector<double> w = indicator_weights(choice.v_hat, alpha);
    const double anchor = dot(w, choice.v_hat);
    for (double lambda : options.lambda_offsets) {
      const double b = -anchor + lambda;
      const double kl = kl_divergence(q, with_layer(log_w, n, w, b));
      if (kl < best_kl) {
        best_kl = kl;
        best.layer = DeepLayer{w, b, 1, 1};
        best.alpha = alpha;
        best.lambda = lambda;
      }
    }
  }
  best.kl_after = best_kl;
  best.improved = best_kl < kl0;
  return best;
}

ApproxTrace greedy_construct(const Distribution& q, const DbnModel& base, double eps, unsigned max_layers,
                             const SearchOptions& options) {
  if (!(eps > 0.0)) throw DomainError("greedy_construct: eps must be positive");
  DbnModel model = base;
  const double kl_start = kl_divergence(q, visible_marginal_factorized(model));
  ApproxTrace trace{{}, model, kl_start, kl_start, kl_start < eps};
  double kl = kl_start;
  for (unsigned step = 1; step <= max_layers && !(kl < eps); ++step) {
    std::optional<Theorem2Step> s;
    try {
      s.emplace(theorem2_step(model, q, options));
    } catch (const AlreadyMatched&) {
      break;
    }
    if (!s->improved) break;
    auto layers = model.deepening();
    layers.push_back(s->layer);
    model = model.with_deepening(std::move(layers));
    kl = s->kl_after;
    trace.steps.push_back(TraceStep{step, s->target.bits(), s->alpha, *s->layer.b_eff, kl});
  }
  trace.final_model = model;
  trace.final_kl = kl;
  trace.reached = kl < eps;
  return trace;
}

double lambda_for_multiplier(double r) {
  if (r < 1.0) throw DomainError("multiplier below 1 cannot be produced by a layer");
  if (r == 1.0) return -kInf;
  return std::log(r - 1.0);
}

unsigned padded_level(unsigned width, unsigned p) {
  if (!is_prime(p)) throw DomainError(fmt::format("{} is not prime", p));
  unsigned l = 1;
  std::uint64_t n = p;
  while (n < width) {
    n *= p;
    ++l;
  }
  return l;
}

Distribution pad_distribution(const Distribution& q, unsigned p) {
  const unsigned l0 = padded_level(q.width(), p);
  const TreeGroup g(p, l0);
  const auto width = static_cast<unsigned>(g.size());
  if (width == q.width()) return q;
  EnumerationLimits limits = EnumerationLimits::from_environment();
  if (width > limits.max_visible_width) {
    throw CapExceeded(fmt::format("padding to {} visible units exceeds the cap", width));
  }
  std::vector<double> probs(std::size_t{1} << width, 0.0);
  std::copy(q.probs().begin(), q.probs().end(), probs.begin());
  return Distribution(width, std::move(probs));
}

Theorem3Result theorem3_construct(const Distribution& q, unsigned p, double lambda1, double alpha) {
  const unsigned l0 = padded_level(q.width(), p);
  const TreeGroup g(p, l0);
  if (g.size() != q.width()) throw DomainError("theorem3_construct: target width must be p^l0 (pad it first)");
  if (!(alpha > 0.0)) throw DomainError("theorem3_construct: alpha must be positive");
  const std::vector<std::uint64_t> order = support_ascending(q);
  if (order.empty()) throw DomainError("theorem3_construct: empty support");
  const bool full_support = order.size() == q.size();

  DbnModel model = DbnModel::zeros(g, ModelKind::conv);
  ApproxTrace trace{{}, model, kl_divergence(q, Distribution::uniform(q.width())), 0.0, false};
  const double q1 = q[order.front()];
  // Weight of u_i relative to the off-support configurations, which keep weight 1.
  const double w1 = full_support ? 1.0 : 1.0 + std::exp(lambda1);

  std::vector<DeepLayer> layers;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const double r = w1 * (q[order[i]] / q1);
    if (r < 1.0) throw std::logic_error("theorem3_construct: multiplier below 1 under ascending order");
    const double lambda = i == 0 && !full_support ? lambda1 : lambda_for_multiplier(r);
    if (lambda == -kInf) continue;
    const FieldConfig u(order[i], q.width());
    std::vector<double> w = indicator_weights(u, alpha);
    const double b = -dot(w, u) + lambda;
    layers.push_back(DeepLayer{std::move(w), b, 1, 1});
    model = model.with_deepening(layers);
    const double kl = kl_divergence(q, visible_marginal_factorized(model));
    trace.steps.push_back(TraceStep{static_cast<unsigned>(layers.size()), order[i], alpha, lambda, kl});
  }
  trace.final_model = model;
  trace.final_kl = kl_divergence(q, visible_marginal_factorized(model));
  trace.reached = true;
  return Theorem3Result{model, trace, order};
}

Distribution theorem3_closed_form(const Distribution& q, double lambda1) {
  const std::vector<std::uint64_t> order = support_ascending(q);
  if (order.empty()) throw DomainError("theorem3_closed_form: empty support");
  const double q1 = q[order.front()];
  const double k = static_cast<double>(order.size());
  const double off = static_cast<double>(q.size()) - k;
  const double e = std::exp(lambda1);
  const double denom = 1.0 + e + off * q1;
  std::vector<double> probs(q.size());
  for (std::uint64_t v = 0; v < q.size(); ++v) probs[v] = q[v] > 0.0 ? q[v] * (1.0 + e) / denom : q1 / denom;
  return Distribution(q.width(), std::move(probs));
}

double theorem3_kl_estimate(const Distribution& q, double lambda1) {
  const double k = static_cast<double>(support_ascending(q).size());
  const double off = static_cast<double>(q.size()) - k;
  double s = 0.0;
  for (double x : q.probs()) s += x * off * x;
  return s / (1.0 + std::exp(lambda1));
}

}  // namespace padic_dbn

namespace padic_dbn {

double theorem3_kl_closed_form(const Distribution& q, double lambda1) {
  const std::vector<std::uint64_t> order = support_ascending(q);
  if (order.empty()) throw DomainError("theorem3_kl_closed_form: empty support");
  const double off = static_cast<double>(q.size() - order.size());
  return std::log1p(off * q[order.front()] / (1.0 + std::exp(lambda1)));
}

}  // namespace padic_dbn
