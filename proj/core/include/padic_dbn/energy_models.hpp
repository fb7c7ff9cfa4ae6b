#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include <fmt/format.h>

#include "padic_dbn/errors.hpp"
#include "padic_dbn/field_config.hpp"
#include "padic_dbn/rational.hpp"
#include "padic_dbn/schwartz.hpp"
#include "padic_dbn/tree_group.hpp"

namespace padic_dbn {

enum class ModelKind { rbm, conv, radial };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

template <class T>
struct RbmCoupling {
  std::vector<T> matrix;  // matrix[i * n + j] couples v_i with h_j
};

template <class T>
struct ConvCoupling {
  std::vector<T> kernel;  // kernel[k] couples v_{j+k} with h_j
};

template <class T>
struct RadialCoupling {
  std::vector<T> shells;  // shells[m] couples v_i, h_j with ord_p(i - j) = m, m < l
  T diag{};               // couples v_i with h_i
};

// One extra hidden unit reading the visible field through w_eff.
// An empty b_eff stands for b = -infinity: the unit is frozen at 0 and its factor is 1.
template <class T>
struct BasicDeepLayer {
  std::vector<T> w_eff;
  std::optional<T> b_eff;
  unsigned alpha = 1;
  unsigned beta = 1;

  bool silent() const { return !b_eff.has_value(); }
};

template <class T>
class BasicDbnModel {
 public:
  using Scalar = T;
  using Layer = BasicDeepLayer<T>;
  using Coupling = std::variant<RbmCoupling<T>, ConvCoupling<T>, RadialCoupling<T>>;

  BasicDbnModel(TreeGroup group, Coupling coupling, std::vector<T> a, std::vector<T> b,
                std::vector<Layer> deepening = {})
      : group_(std::move(group)),
        coupling_(std::move(coupling)),
        a_(std::move(a)),
        b_(std::move(b)),
        deepening_(std::move(deepening)) {
    validate();
  }

  static BasicDbnModel zeros(const TreeGroup& g, ModelKind kind) {
    const std::size_t n = g.size();
    std::vector<T> zero(n, T{0});
    switch (kind) {
      case ModelKind::rbm:
        return BasicDbnModel(g, RbmCoupling<T>{std::vector<T>(n * n, T{0})}, zero, zero);
      case ModelKind::conv:
        return BasicDbnModel(g, ConvCoupling<T>{zero}, zero, zero);
      case ModelKind::radial:
        return BasicDbnModel(g, RadialCoupling<T>{std::vector<T>(g.level(), T{0}), T{0}}, zero, zero);
    }
    throw DomainError("unknown model kind");
  }

  const TreeGroup& group() const { return group_; }
  std::size_t units() const { return a_.size(); }
  ModelKind kind() const { return static_cast<ModelKind>(coupling_.index()); }
  const Coupling& coupling() const { return coupling_; }
  const std::vector<T>& visible_bias() const { return a_; }
  const std::vector<T>& hidden_bias() const { return b_; }
  const std::vector<Layer>& deepening() const { return deepening_; }

  // Parameters of the base energy, excluding deepening layers.
  std::size_t parameter_count() const {
    return std::visit([](const auto& c) { return coupling_size(c); }, coupling_) + a_.size() + b_.size();
  }

  // Coupling between v_i and h_j.
  T weight(std::size_t i, std::size_t j) const {
    const std::size_t n = units();
    if (const auto* r = std::get_if<RbmCoupling<T>>(&coupling_)) return r->matrix[i * n + j];
    if (const auto* c = std::get_if<ConvCoupling<T>>(&coupling_)) return c->kernel[(i + n - j) % n];
    const auto& rad = std::get<RadialCoupling<T>>(coupling_);
    if (i == j) return rad.diag;
    return rad.shells[group_.order(group_.sub(GroupElement{i}, GroupElement{j}))];
  }

  std::vector<T> weight_matrix() const {
    const std::size_t n = units();
    std::vector<T> m;
    m.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m.push_back(weight(i, j));
    }
    return m;
  }

  BasicDbnModel with_deepening(std::vector<Layer> layers) const {
    return BasicDbnModel(group_, coupling_, a_, b_, std::move(layers));
  }
  BasicDbnModel base() const { return with_deepening({}); }

 private:
  static std::size_t coupling_size(const RbmCoupling<T>& c) { return c.matrix.size(); }
  static std::size_t coupling_size(const ConvCoupling<T>& c) { return c.kernel.size(); }
  static std::size_t coupling_size(const RadialCoupling<T>& c) { return c.shells.size() + 1; }

  static void check_finite(const T& x, const char* what) {
    if constexpr (std::is_floating_point_v<T>) {
      if (!std::isfinite(x)) throw DomainError(fmt::format("model: non-finite {}", what));
    }
  }

  void validate() const {
    const std::size_t n = group_.size();
    if (a_.size() != n || b_.size() != n) {
      throw DomainError(fmt::format("model: bias vectors must have {} entries", n));
    }
    std::size_t expected = 0;
    switch (kind()) {
      case ModelKind::rbm:
        if (std::get<RbmCoupling<T>>(coupling_).matrix.size() != n * n) {
          throw DomainError(fmt::format("rbm model: weight matrix must be {0}x{0}", n));
        }
        expected = n * n + 2 * n;
        break;
      case ModelKind::conv:
        if (std::get<ConvCoupling<T>>(coupling_).kernel.size() != n) {
          throw DomainError(fmt::format("conv model: kernel must have {} entries", n));
        }
        expected = 3 * n;
        break;
      case ModelKind::radial:
        if (std::get<RadialCoupling<T>>(coupling_).shells.size() != group_.level()) {
          throw DomainError(fmt::format("radial model: need {} shell weights", group_.level()));
        }
        expected = group_.level() + 1 + 2 * n;
        break;
    }
    if (parameter_count() != expected) throw std::logic_error("model: parameter count mismatch");
    std::visit(
        [](const auto& c) {
          using C = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<C, RbmCoupling<T>>) {
            for (const auto& x : c.matrix) check_finite(x, "weight");
          } else if constexpr (std::is_same_v<C, ConvCoupling<T>>) {
            for (const auto& x : c.kernel) check_finite(x, "weight");
          } else {
            for (const auto& x : c.shells) check_finite(x, "weight");
            check_finite(c.diag, "weight");
          }
        },
        coupling_);
    for (const auto& x : a_) check_finite(x, "visible bias");
    for (const auto& x : b_) check_finite(x, "hidden bias");
    for (const auto& layer : deepening_) {
      if (layer.w_eff.size() != n) {
        throw DomainError(fmt::format("deepening layer: w_eff must have {} entries", n));
      }
      if (layer.alpha < 1 || layer.alpha >= group_.prime() || layer.beta < 1 || layer.beta >= group_.prime()) {
        throw DomainError("deepening layer: alpha and beta must lie in [1, p-1]");
      }
      for (const auto& x : layer.w_eff) check_finite(x, "layer weight");
      if (layer.b_eff) check_finite(*layer.b_eff, "layer bias");
    }
  }

  TreeGroup group_;
  Coupling coupling_;
  std::vector<T> a_;
  std::vector<T> b_;
  std::vector<Layer> deepening_;
};

using DeepLayer = BasicDeepLayer<double>;
using DbnModel = BasicDbnModel<double>;
using ExactDeepLayer = BasicDeepLayer<Rational>;
using ExactDbnModel = BasicDbnModel<Rational>;

namespace detail {

template <class T>
void check_widths(const BasicDbnModel<T>& m, const FieldConfig& v, const FieldConfig& h) {
  if (v.width() != m.units() || h.width() != m.units()) {
    throw DomainError(fmt::format("energy: fields of width {}/{} for a model with {} units", v.width(),
                                  h.width(), m.units()));
  }
}

template <class T>
void check_kind(const BasicDbnModel<T>& m, ModelKind kind) {
  if (m.kind() != kind) {
    throw DomainError(fmt::format("expected a {} model, got {}", to_string(kind), to_string(m.kind())));
  }
  if (!m.deepening().empty()) throw DomainError("base energy requested on a deepened model");
}

template <class T>
T bias_terms(const BasicDbnModel<T>& m, const FieldConfig& v, const FieldConfig& h) {
  T e{0};
  for (std::size_t i = 0; i < m.units(); ++i) {
    if (v[i]) e -= m.visible_bias()[i];
    if (h[i]) e -= m.hidden_bias()[i];
  }
  return e;
}

template <class T>
T conv_terms(const BasicDbnModel<T>& m, const FieldConfig& v, const FieldConfig& h) {
  const auto& g = m.group();
  const auto& w = std::get<ConvCoupling<T>>(m.coupling()).kernel;
  T e{0};
  for (std::uint64_t j = 0; j < g.size(); ++j) {
    if (!h[j]) continue;
    for (std::uint64_t k = 0; k < g.size(); ++k) {
      if (v[g.add(GroupElement{j}, GroupElement{k}).value]) e -= w[k];
    }
  }
  return e;
}

template <class T>
T rbm_terms(const BasicDbnModel<T>& m, const FieldConfig& v, const FieldConfig& h) {
  const std::size_t n = m.units();
  const auto& w = std::get<RbmCoupling<T>>(m.coupling()).matrix;
  T e{0};
  for (std::size_t i = 0; i < n; ++i) {
    if (!v[i]) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (h[j]) e -= w[i * n + j];
    }
  }
  return e;
}

template <class T>
T radial_terms(const BasicDbnModel<T>& m, const FieldConfig& v, const FieldConfig& h) {
  const auto& g = m.group();
  const auto& rad = std::get<RadialCoupling<T>>(m.coupling());
  T e{0};
  for (std::uint64_t i = 0; i < g.size(); ++i) {
    if (!v[i]) continue;
    for (std::uint64_t j = 0; j < g.size(); ++j) {
      if (!h[j]) continue;
      if (i == j) {
        e -= rad.diag;
      } else {
        e -= rad.shells[g.order(g.sub(GroupElement{i}, GroupElement{j}))];
      }
    }
  }
  return e;
}

}  // namespace detail

template <class T>
T conv_energy(const BasicDbnModel<T>& m, const FieldConfig& v, const FieldConfig& h) {
  detail::check_kind(m, ModelKind::conv);
  detail::check_widths(m, v, h);
  return detail::conv_terms(m, v, h) + detail::bias_terms(m, v, h);
}

template <class T>
T rbm_energy(const BasicDbnModel<T>& m, const FieldConfig& v, const FieldConfig& h) {
  detail::check_kind(m, ModelKind::rbm);
  detail::check_widths(m, v, h);
  return detail::rbm_terms(m, v, h) + detail::bias_terms(m, v, h);
}

template <class T>
T radial_energy(const BasicDbnModel<T>& m, const FieldConfig& v, const FieldConfig& h) {
  detail::check_kind(m, ModelKind::radial);
  detail::check_widths(m, v, h);
  return detail::radial_terms(m, v, h) + detail::bias_terms(m, v, h);
}

// Energy of the base network, ignoring any deepening layers.
template <class T>
T base_energy(const BasicDbnModel<T>& m, const FieldConfig& v, const FieldConfig& h) {
  detail::check_widths(m, v, h);
  T e = detail::bias_terms(m, v, h);
  switch (m.kind()) {
    case ModelKind::rbm: return e + detail::rbm_terms(m, v, h);
    case ModelKind::conv: return e + detail::conv_terms(m, v, h);
    case ModelKind::radial: return e + detail::radial_terms(m, v, h);
  }
  return e;
}

// c_j(v): coefficient of h_j in -E, without the hidden bias.
template <class T>
std::vector<T> hidden_drive(const BasicDbnModel<T>& m, const FieldConfig& v) {
  const std::size_t n = m.units();
  std::vector<T> c(n, T{0});
  for (std::size_t i = 0; i < n; ++i) {
    if (!v[i]) continue;
    for (std::size_t j = 0; j < n; ++j) c[j] += m.weight(i, j);
  }
  return c;
}

template <class T>
T layer_drive(const BasicDeepLayer<T>& layer, const FieldConfig& v) {
  T s{0};
  for (std::size_t i = 0; i < layer.w_eff.size(); ++i) {
    if (v[i]) s += layer.w_eff[i];
  }
  return s;
}

// Energy including deepening layers; empty when a silent layer's unit is on (zero Boltzmann weight).
template <class T>
std::optional<T> deep_energy(const BasicDbnModel<T>& m, const FieldConfig& v, const FieldConfig& h,
                             const FieldConfig& extra) {
  if (extra.width() != m.deepening().size()) throw DomainError("deep_energy: one extra bit per layer");
  T e = base_energy(m, v, h);
  for (std::size_t i = 0; i < m.deepening().size(); ++i) {
    if (!extra[i]) continue;
    const auto& layer = m.deepening()[i];
    if (layer.silent()) return std::nullopt;
    e -= layer_drive(layer, v) + *layer.b_eff;
  }
  return e;
}

// Rbm model with the same coupling between every (v_i, h_j) pair.
template <class T>
BasicDbnModel<T> to_rbm(const BasicDbnModel<T>& m) {
  return BasicDbnModel<T>(m.group(), RbmCoupling<T>{m.weight_matrix()}, m.visible_bias(), m.hidden_bias(),
                          m.deepening());
}

template <class To, class From>
BasicDbnModel<To> convert_model(const BasicDbnModel<From>& m) {
  auto cv = [](const std::vector<From>& xs) {
    std::vector<To> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(scalar_from<To>(x));
    return out;
  };
  typename BasicDbnModel<To>::Coupling coupling = std::visit(
      [&](const auto& c) -> typename BasicDbnModel<To>::Coupling {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, RbmCoupling<From>>) {
          return RbmCoupling<To>{cv(c.matrix)};
        } else if constexpr (std::is_same_v<C, ConvCoupling<From>>) {
          return ConvCoupling<To>{cv(c.kernel)};
        } else {
          return RadialCoupling<To>{cv(c.shells), scalar_from<To>(c.diag)};
        }
      },
      m.coupling());
  std::vector<BasicDeepLayer<To>> layers;
  for (const auto& layer : m.deepening()) {
    BasicDeepLayer<To> out{cv(layer.w_eff), std::nullopt, layer.alpha, layer.beta};
    if (layer.b_eff) out.b_eff = scalar_from<To>(*layer.b_eff);
    layers.push_back(std::move(out));
  }
  return BasicDbnModel<To>(m.group(), std::move(coupling), cv(m.visible_bias()), cv(m.hidden_bias()),
                           std::move(layers));
}

// Zero-pads an n x m standard RBM (w row-major, w[i * m + j]) into G_l with the smallest p^l >= max(n, m).
DbnModel embed_standard_rbm(std::size_t n_visible, std::size_t m_hidden, const std::vector<double>& w,
                            const std::vector<double>& a, const std::vector<double>& b, unsigned p);

// Models whose parameters are discretizations of locally constant kernels and biases.
ExactDbnModel discretized_conv_model(const TestFunction& w, const TestFunction& a, const TestFunction& b,
                                     const TreeGroup& g);
ExactDbnModel discretized_rbm_model(const TestFunction2& w, const TestFunction& a, const TestFunction& b,
                                    const TreeGroup& g);
ExactDbnModel discretized_radial_model(const RadialProfile& w, const TestFunction& a, const TestFunction& b,
                                       const TreeGroup& g);

}  // namespace padic_dbn
