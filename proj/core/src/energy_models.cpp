#include "padic_dbn/energy_models.hpp"

namespace padic_dbn {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::rbm: return "rbm";
    case ModelKind::conv: return "conv";
    case ModelKind::radial: return "radial";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "rbm") return ModelKind::rbm;
  if (name == "conv") return ModelKind::conv;
  if (name == "radial") return ModelKind::radial;
  throw DomainError(fmt::format("unknown model kind '{}'", name));
}

DbnModel embed_standard_rbm(std::size_t n_visible, std::size_t m_hidden, const std::vector<double>& w,
                            const std::vector<double>& a, const std::vector<double>& b, unsigned p) {
  if (w.size() != n_visible * m_hidden || a.size() != n_visible || b.size() != m_hidden) {
    throw DomainError("embed_standard_rbm: parameter sizes do not match n x m");
  }
  if (!is_prime(p)) throw DomainError(fmt::format("{} is not prime", p));
  const std::size_t width = std::max<std::size_t>({n_visible, m_hidden, 1});
  unsigned l = 1;
  std::uint64_t n = p;
  while (n < width) {
    if (n > kDefaultGroupCap / p) throw CapExceeded("embed_standard_rbm: no level within the group cap");
    n *= p;
    ++l;
  }
  const TreeGroup g(p, l);
  std::vector<double> matrix(n * n, 0.0);
  for (std::size_t i = 0; i < n_visible; ++i) {
    for (std::size_t j = 0; j < m_hidden; ++j) matrix[i * n + j] = w[i * m_hidden + j];
  }
  std::vector<double> va(n, 0.0);
  std::vector<double> vb(n, 0.0);
  std::copy(a.begin(), a.end(), va.begin());
  std::copy(b.begin(), b.end(), vb.begin());
  return DbnModel(g, RbmCoupling<double>{std::move(matrix)}, std::move(va), std::move(vb));
}

ExactDbnModel discretized_conv_model(const TestFunction& w, const TestFunction& a, const TestFunction& b,
                                     const TreeGroup& g) {
  return ExactDbnModel(g, ConvCoupling<Rational>{discretize_conv_kernel(w, g)}, discretize_bias(a, g),
                       discretize_bias(b, g));
}

ExactDbnModel discretized_rbm_model(const TestFunction2& w, const TestFunction& a, const TestFunction& b,
                                    const TreeGroup& g) {
  return ExactDbnModel(g, RbmCoupling<Rational>{discretize_kernel2(w, g)}, discretize_bias(a, g),
                       discretize_bias(b, g));
}

ExactDbnModel discretized_radial_model(const RadialProfile& w, const TestFunction& a, const TestFunction& b,
                                       const TreeGroup& g) {
  RadialCoefficients c = radial_coefficients(w, g);
  return ExactDbnModel(g, RadialCoupling<Rational>{std::move(c.offdiag), std::move(c.diag)},
                       discretize_bias(a, g), discretize_bias(b, g));
}

}  // namespace padic_dbn
