#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "padic_dbn/energy_models.hpp"
#include "padic_dbn/exact_inference.hpp"

namespace padic_dbn {

// Hidden unit added by one key-construction step.
struct ExtraUnit {
  std::uint64_t index = 0;  // j0 = alpha * p^l in the lattice group
  unsigned alpha = 1;
  unsigned beta = 1;
  bool silent = false;  // bias -infinity: the unit is frozen at 0
};

// A conv network on G_L whose visible field is replicated from G_{l0} (v_j = v_{j mod p^l0})
// and whose only free hidden units are G_{l0} plus the extra units.
template <class T>
struct LatticeModel {
  BasicDbnModel<T> model;
  unsigned visible_level = 1;
  std::vector<ExtraUnit> extras;

  std::uint64_t visible_units() const { return model.group().power(visible_level); }
  std::vector<std::uint64_t> free_hidden() const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t j = 0; j < visible_units(); ++j) out.push_back(j);
    for (const auto& e : extras) {
      if (!e.silent) out.push_back(e.index);
    }
    return out;
  }
};

template <class T>
struct FullExtension {
  LatticeModel<T> base;
  LatticeModel<T> extended;       // parameters on G_{l+1} with the zero pattern of the construction
  GroupElement j0;
  unsigned alpha = 1;
  unsigned beta = 1;
  std::vector<GroupElement> copy_indices;  // copy_indices[j] = -j + beta p^l carries w_new[j]
  std::vector<T> w_new;
  std::optional<T> b_new;         // empty: -infinity

  std::size_t new_parameter_count() const { return w_new.size() + 1; }
  // Hidden units of G_{l+1} clamped to zero.
  std::vector<std::uint64_t> forced_zero_hidden() const;
};

template <class T>
LatticeModel<T> lattice_from_conv(const BasicDbnModel<T>& conv);

template <class T>
FullExtension<T> key_construct_full(const LatticeModel<T>& base, const std::vector<T>& w_new,
                                    std::optional<T> b_new, unsigned alpha = 1, unsigned beta = 1);

template <class T>
FullExtension<T> key_construct_full(const BasicDbnModel<T>& base, const std::vector<T>& w_new,
                                    std::optional<T> b_new, unsigned alpha = 1, unsigned beta = 1) {
  return key_construct_full(lattice_from_conv(base), w_new, std::move(b_new), alpha, beta);
}

// Visible field replicated onto G_L.
template <class T>
FieldConfig replicate_visible(const LatticeModel<T>& lm, const FieldConfig& v);
// Free hidden bits (ordered as free_hidden()) scattered onto G_L.
template <class T>
FieldConfig scatter_hidden(const LatticeModel<T>& lm, const FieldConfig& h_free);

template <class T>
T lattice_energy(const LatticeModel<T>& lm, const FieldConfig& v, const FieldConfig& h_free);

// S(a, b) = sum over j in G_l + a p^l, k in G_l + b p^l of w_k v_j h_{j+k}, on the extended lattice.
template <class T>
T coset_block_sum(const FullExtension<T>& ext, unsigned a, unsigned b, const FieldConfig& v,
                  const FieldConfig& h_free);

// The whole bilinear form sum_{j,k in G_{l+1}} w_k v_j h_{j+k}; the coset blocks partition it.
template <class T>
T lattice_bilinear_form(const FullExtension<T>& ext, const FieldConfig& v, const FieldConfig& h_free);

// Compressed layer as the key formula states it: w_eff = p * w_new folded onto G_l0, b_eff = b_new.
template <class T>
BasicDeepLayer<T> nominal_layer(const FullExtension<T>& ext);

// Compressed model with exactly the lattice energy: the base kernel, the visible bias and every
// extra unit's coupling are the sums over residue classes mod p^l0 of the lattice parameters.
template <class T>
BasicDbnModel<T> collapse(const LatticeModel<T>& lm);

template <class T>
std::optional<T> extended_energy_compressed(const BasicDbnModel<T>& base, const std::vector<BasicDeepLayer<T>>& layers,
                                            const FieldConfig& v, const FieldConfig& h_base,
                                            const FieldConfig& h_extra) {
  std::vector<BasicDeepLayer<T>> all = base.deepening();
  all.insert(all.end(), layers.begin(), layers.end());
  return deep_energy(base.with_deepening(std::move(all)), v, h_base, h_extra);
}

// P(v) proportional to prod_i (1 + exp(<w_eff_i, v> + b_eff_i)) * sum_h exp(-E_base(v, h)).
Distribution extended_marginal(const DbnModel& base, const std::vector<DeepLayer>& layers,
                               const EnumerationLimits& limits = EnumerationLimits::from_environment());

// Visible marginal of a lattice model by enumerating its free units.
Distribution lattice_marginal(const LatticeModel<double>& lm,
                              const EnumerationLimits& limits = EnumerationLimits::from_environment());

extern template struct FullExtension<double>;
extern template struct FullExtension<Rational>;

}  // namespace padic_dbn
