#pragma once

#include <cstdint>
#include <vector>

#include "padic_dbn/deepening.hpp"
#include "padic_dbn/energy_models.hpp"
#include "padic_dbn/exact_inference.hpp"

namespace padic_dbn {

struct Lemma3Choice {
  FieldConfig v_hat;
  std::vector<double> w_hat;
};

// alpha * (target - 1/2).
std::vector<double> indicator_weights(const FieldConfig& target, double alpha);

// v_hat = argmax of q - p over {q > p}, ties to the smallest bit mask.
Lemma3Choice lemma3_select(const Distribution& q, const Distribution& p_model, double alpha);

// sum_v exp(<w, v>) (P(v) - Q(v)), scaled by exp(-max_v <w, v>). Only its sign matters.
double inequality1_sum(const std::vector<double>& w, const Distribution& p_model, const Distribution& q);

// First-order KL change sum_v exp(<w, v> + b) (P(v) - Q(v)) from adding one layer.
double first_order_kl_gap(const Distribution& q, const Distribution& p_model, const DeepLayer& layer);

struct SearchOptions {
  double alpha_start = 1.0;
  unsigned max_alpha_doublings = 40;
  unsigned alpha_ladder = 6;  // tries alpha0 * 2^t for t < alpha_ladder
  // lambda = b + <w_hat, v_hat>; the downward run is the asymptotic regime, the upward run helps
  // when the target is far away.
  std::vector<double> lambda_offsets = {-8, -12, -16, -20, -24, -28, -4, 0, 4, 8, 12, 16, 20, 24};
};

struct Theorem2Step {
  DeepLayer layer;
  FieldConfig target;
  double alpha;   // alpha actually used
  double alpha0;  // first doubling with a negative weighted shortfall sum
  double lambda;
  double kl_before;
  double kl_after;
  bool improved;  // false: search budget exhausted, layer is the best candidate found
};

// Adds one layer to the current model (its existing layers included) reducing KL(q | marginal).
Theorem2Step theorem2_step(const DbnModel& current, const Distribution& q, const SearchOptions& options = {});

struct TraceStep {
  unsigned step;
  std::uint64_t target;
  double alpha;
  double lambda_or_beff;
  double kl;
};

struct ApproxTrace {
  std::vector<TraceStep> steps;
  DbnModel final_model;
  double initial_kl;
  double final_kl;
  bool reached;
};

ApproxTrace greedy_construct(const Distribution& q, const DbnModel& base, double eps, unsigned max_layers,
                             const SearchOptions& options = {});

// lambda with 1 + e^lambda = r; r == 1 gives -infinity.
double lambda_for_multiplier(double r);

// Smallest l0 with p^l0 >= width.
unsigned padded_level(unsigned width, unsigned p);
// Embeds q on {0,1}^m into {0,1}^(p^l0), padded units carrying zero mass.
Distribution pad_distribution(const Distribution& q, unsigned p);

struct Theorem3Result {
  DbnModel model;
  ApproxTrace trace;
  std::vector<std::uint64_t> order;  // support sorted ascending by mass
};

// q must already have width p^l0.
Theorem3Result theorem3_construct(const Distribution& q, unsigned p, double lambda1, double alpha = 80.0);

Distribution theorem3_closed_form(const Distribution& q, double lambda1);
// The tail estimate sum_i Q(u_i) (2^m - k) Q(u_i) / (1 + e^lambda1). It bounds the leading term from above.
double theorem3_kl_estimate(const Distribution& q, double lambda1);
// KL(q | closed form) exactly: ln(1 + (2^m - k) Q(u_1) / (1 + e^lambda1)).
double theorem3_kl_closed_form(const Distribution& q, double lambda1);

}  // namespace padic_dbn
