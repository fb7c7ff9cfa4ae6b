#include "padic_dbn/deepening.hpp"

#include <algorithm>
#include <cmath>

namespace padic_dbn {
namespace {

template <class T>
std::vector<T> fiber_sums(const std::vector<T>& xs, std::uint64_t modulus) {
  std::vector<T> out(modulus, T{0});
  for (std::uint64_t j = 0; j < xs.size(); ++j) out[j % modulus] += xs[j];
  return out;
}

}  // namespace

template <class T>
std::vector<std::uint64_t> FullExtension<T>::forced_zero_hidden() const {
  const auto free = extended.free_hidden();
  std::vector<std::uint64_t> out;
  for (std::uint64_t j = 0; j < extended.model.group().size(); ++j) {
    if (std::find(free.begin(), free.end(), j) == free.end()) out.push_back(j);
  }
  return out;
}

template <class T>
LatticeModel<T> lattice_from_conv(const BasicDbnModel<T>& conv) {
  if (conv.kind() != ModelKind::conv) throw DomainError("key construction needs a conv base model");
  if (!conv.deepening().empty()) throw DomainError("key construction base must not carry compressed layers");
  return LatticeModel<T>{conv, conv.group().level(), {}};
}

template <class T>
FullExtension<T> key_construct_full(const LatticeModel<T>& base, const std::vector<T>& w_new,
                                    std::optional<T> b_new, unsigned alpha, unsigned beta) {
  const TreeGroup& lo = base.model.group();
  const unsigned p = lo.prime();
  if (alpha < 1 || alpha >= p || beta < 1 || beta >= p) {
    throw DomainError("key construction: alpha and beta must lie in [1, p-1]");
  }
  if (w_new.size() != lo.size()) {
    throw DomainError(fmt::format("key construction: w_new needs {} entries, got {}", lo.size(), w_new.size()));
  }
  const TreeGroup hi = lo.refined();
  const std::uint64_t n = lo.size();

  const auto& kernel = std::get<ConvCoupling<T>>(base.model.coupling()).kernel;
  std::vector<T> w(hi.size(), T{0});
  std::vector<T> a(hi.size(), T{0});
  std::vector<T> b(hi.size(), T{0});
  std::copy(kernel.begin(), kernel.end(), w.begin());
  std::copy(base.model.visible_bias().begin(), base.model.visible_bias().end(), a.begin());
  std::copy(base.model.hidden_bias().begin(), base.model.hidden_bias().end(), b.begin());

  FullExtension<T> ext{base, base, GroupElement{alpha * n}, alpha, beta, {}, w_new, b_new};
  for (std::uint64_t j = 0; j < n; ++j) {
    const GroupElement c{(n - j) % n + beta * n};
    ext.copy_indices.push_back(c);
    w[c.value] = w_new[j];
  }
  if (b_new) b[ext.j0.value] = *b_new;

  ext.extended.model = BasicDbnModel<T>(hi, ConvCoupling<T>{std::move(w)}, std::move(a), std::move(b));
  ext.extended.extras.push_back(ExtraUnit{ext.j0.value, alpha, beta, !b_new.has_value()});
  return ext;
}

template <class T>
FieldConfig replicate_visible(const LatticeModel<T>& lm, const FieldConfig& v) {
  const std::uint64_t n0 = lm.visible_units();
  if (v.width() != n0) throw DomainError(fmt::format("lattice visible field needs width {}", n0));
  const std::uint64_t size = lm.model.group().size();
  std::uint64_t bits = 0;
  for (std::uint64_t j = 0; j < size; ++j) {
    if (v[j % n0]) bits |= std::uint64_t{1} << j;
  }
  return FieldConfig(bits, static_cast<unsigned>(size));
}

template <class T>
FieldConfig scatter_hidden(const LatticeModel<T>& lm, const FieldConfig& h_free) {
  const auto free = lm.free_hidden();
  if (h_free.width() != free.size()) throw DomainError(fmt::format("lattice needs {} free hidden bits", free.size()));
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < free.size(); ++i) {
    if (h_free[i]) bits |= std::uint64_t{1} << free[i];
  }
  return FieldConfig(bits, static_cast<unsigned>(lm.model.group().size()));
}

template <class T>
T lattice_energy(const LatticeModel<T>& lm, const FieldConfig& v, const FieldConfig& h_free) {
  return conv_energy(lm.model, replicate_visible(lm, v), scatter_hidden(lm, h_free));
}

template <class T>
T coset_block_sum(const FullExtension<T>& ext, unsigned a, unsigned b, const FieldConfig& v,
                  const FieldConfig& h_free) {
  const TreeGroup& hi = ext.extended.model.group();
  if (a >= hi.prime() || b >= hi.prime()) throw DomainError("coset_block_sum: a and b must lie in [0, p-1]");
  const auto cosets = ext.base.model.group().torsion_and_cosets().cosets;
  const FieldConfig V = replicate_visible(ext.extended, v);
  const FieldConfig H = scatter_hidden(ext.extended, h_free);
  const auto& w = std::get<ConvCoupling<T>>(ext.extended.model.coupling()).kernel;
  T s{0};
  for (GroupElement j : cosets[a]) {
    if (!V[j.value]) continue;
    for (GroupElement k : cosets[b]) {
      if (H[hi.add(j, k).value]) s += w[k.value];
    }
  }
  return s;
}

template <class T>
T lattice_bilinear_form(const FullExtension<T>& ext, const FieldConfig& v, const FieldConfig& h_free) {
  const TreeGroup& hi = ext.extended.model.group();
  const FieldConfig V = replicate_visible(ext.extended, v);
  const FieldConfig H = scatter_hidden(ext.extended, h_free);
  const auto& w = std::get<ConvCoupling<T>>(ext.extended.model.coupling()).kernel;
  T s{0};
  for (std::uint64_t j = 0; j < hi.size(); ++j) {
    for (std::uint64_t k = 0; k < hi.size(); ++k) {
      if (V[j] && H[hi.add(GroupElement{j}, GroupElement{k}).value]) s += w[k];
    }
  }
  return s;
}

template <class T>
BasicDeepLayer<T> nominal_layer(const FullExtension<T>& ext) {
  const std::uint64_t n0 = ext.base.visible_units();
  std::vector<T> w_eff = fiber_sums(ext.w_new, n0);
  const T p = T(ext.base.model.group().prime());
  for (auto& x : w_eff) x *= p;
  return BasicDeepLayer<T>{std::move(w_eff), ext.b_new, ext.alpha, ext.beta};
}

template <class T>
BasicDbnModel<T> collapse(const LatticeModel<T>& lm) {
  const TreeGroup& hi = lm.model.group();
  const TreeGroup lo(hi.prime(), lm.visible_level, hi.cap());
  const std::uint64_t n0 = lo.size();
  const auto& kernel = std::get<ConvCoupling<T>>(lm.model.coupling()).kernel;
  const std::vector<T> folded = fiber_sums(kernel, n0);
  std::vector<T> b(lm.model.hidden_bias().begin(), lm.model.hidden_bias().begin() + n0);

  std::vector<BasicDeepLayer<T>> layers;
  for (const auto& e : lm.extras) {
    // h_m reads sum_k w_k v_{(m + k) mod p^l0}.
    std::vector<T> w_eff(n0, T{0});
    for (std::uint64_t i = 0; i < n0; ++i) w_eff[i] = folded[(i + n0 - e.index % n0) % n0];
    std::optional<T> b_eff;
    if (!e.silent) b_eff = lm.model.hidden_bias()[e.index];
    layers.push_back(BasicDeepLayer<T>{std::move(w_eff), std::move(b_eff), e.alpha, e.beta});
  }
  return BasicDbnModel<T>(lo, ConvCoupling<T>{folded}, fiber_sums(lm.model.visible_bias(), n0), std::move(b),
                          std::move(layers));
}

Distribution extended_marginal(const DbnModel& base, const std::vector<DeepLayer>& layers,
                               const EnumerationLimits& limits) {
  if (2 * base.units() > limits.max_joint_width || base.units() > limits.max_visible_width) {
    throw CapExceeded(fmt::format("extended_marginal: {} units exceed the enumeration cap", base.units()));
  }
  const DbnModel plain = base.base();
  const auto n = static_cast<unsigned>(base.units());
  std::vector<DeepLayer> all = base.deepening();
  all.insert(all.end(), layers.begin(), layers.end());
  for (const auto& layer : all) {
    if (layer.w_eff.size() != n) throw DomainError("extended_marginal: layer width mismatch");
  }
  std::vector<double> log_w(std::size_t{1} << n);
  for (std::uint64_t v = 0; v < log_w.size(); ++v) {
    const FieldConfig vc(v, n);
    LogSumExp acc;
    for (std::uint64_t h = 0; h < log_w.size(); ++h) acc.add(-base_energy(plain, vc, FieldConfig(h, n)));
    double lw = acc.value();
    for (const auto& layer : all) {
      if (!layer.silent()) lw += log1p_exp(layer_drive(layer, vc) + *layer.b_eff);
    }
    log_w[v] = lw;
  }
  return Distribution::from_log_weights(n, log_w);
}

Distribution lattice_marginal(const LatticeModel<double>& lm, const EnumerationLimits& limits) {
  const auto n0 = static_cast<unsigned>(lm.visible_units());
  const auto free = static_cast<unsigned>(lm.free_hidden().size());
  if (n0 + free > limits.max_joint_width) {
    throw CapExceeded(fmt::format("lattice enumeration over {} units exceeds the cap", n0 + free));
  }
  std::vector<double> log_w(std::size_t{1} << n0);
  for (std::uint64_t v = 0; v < log_w.size(); ++v) {
    LogSumExp acc;
    for (std::uint64_t h = 0; h < (std::uint64_t{1} << free); ++h) {
      acc.add(-lattice_energy(lm, FieldConfig(v, n0), FieldConfig(h, free)));
    }
    log_w[v] = acc.value();
  }
  return Distribution::from_log_weights(n0, log_w);
}

#define PADIC_DBN_INSTANTIATE(T)                                                                                  \
  template struct FullExtension<T>;                                                                               \
  template LatticeModel<T> lattice_from_conv(const BasicDbnModel<T>&);                                            \
  template FullExtension<T> key_construct_full(const LatticeModel<T>&, const std::vector<T>&, std::optional<T>,   \
                                               unsigned, unsigned);                                               \
  template FieldConfig replicate_visible(const LatticeModel<T>&, const FieldConfig&);                             \
  template FieldConfig scatter_hidden(const LatticeModel<T>&, const FieldConfig&);                                \
  template T lattice_energy(const LatticeModel<T>&, const FieldConfig&, const FieldConfig&);                      \
  template T coset_block_sum(const FullExtension<T>&, unsigned, unsigned, const FieldConfig&, const FieldConfig&); \
  template T lattice_bilinear_form(const FullExtension<T>&, const FieldConfig&, const FieldConfig&);              \
  template BasicDeepLayer<T> nominal_layer(const FullExtension<T>&);                                              \
  template BasicDbnModel<T> collapse(const LatticeModel<T>&);

PADIC_DBN_INSTANTIATE(double)
PADIC_DBN_INSTANTIATE(Rational)

#undef PADIC_DBN_INSTANTIATE

}  // namespace padic_dbn
