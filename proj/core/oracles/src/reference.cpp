#include "padic_dbn/oracles/reference.hpp"

#include <algorithm>
#include <cmath>

namespace padic_dbn::oracles {
namespace {

std::uint64_t ipow(unsigned p, unsigned k) {
  std::uint64_t r = 1;
  while (k-- > 0) r *= p;
  return r;
}

unsigned naive_order(unsigned p, std::uint64_t x) {
  unsigned s = 0;
  while (x % p == 0) {
    x /= p;
    ++s;
  }
  return s;
}

template <class Kernel>
Rational fine_sum(unsigned p, unsigned l, unsigned fine, std::uint64_t v, std::uint64_t h, Kernel kernel) {
  const std::uint64_t n = ipow(p, l);
  const std::uint64_t big = ipow(p, fine);
  const Rational cell = inverse_power(p, 2 * static_cast<int>(fine));
  Rational s{0};
  for (std::uint64_t x = 0; x < big; ++x) {
    if (!((v >> (x % n)) & 1u)) continue;
    for (std::uint64_t y = 0; y < big; ++y) {
      if ((h >> (y % n)) & 1u) s += kernel(x, y) * cell;
    }
  }
  return s;
}

Rational fine_linear(const TestFunction& f, unsigned l, unsigned fine, std::uint64_t field) {
  const std::uint64_t n = ipow(f.prime(), l);
  const std::uint64_t big = ipow(f.prime(), fine);
  const Rational cell = inverse_power(f.prime(), static_cast<int>(fine));
  Rational s{0};
  for (std::uint64_t x = 0; x < big; ++x) {
    if ((field >> (x % n)) & 1u) s += f.at(x) * cell;
  }
  return s;
}

}  // namespace

unsigned tree_ancestor_level(unsigned p, unsigned l, std::uint64_t a, std::uint64_t b) {
  // The root-to-leaf path of i visits i mod p, i mod p^2, ...
  unsigned level = 0;
  for (unsigned k = 1; k <= l; ++k) {
    if (a % ipow(p, k) != b % ipow(p, k)) break;
    level = k;
  }
  return level;
}

Rational naive_norm(unsigned p, unsigned l, std::uint64_t x) {
  if (x % ipow(p, l) == 0) return Rational{0};
  for (unsigned s = l; s-- > 0;) {
    if (x % ipow(p, s) == 0) return inverse_power(p, static_cast<int>(s));
  }
  return Rational{1};
}

double naive_coupling(const DbnModel& m, std::size_t i, std::size_t j) {
  const std::size_t n = m.units();
  if (const auto* r = std::get_if<RbmCoupling<double>>(&m.coupling())) return r->matrix[i * n + j];
  if (const auto* c = std::get_if<ConvCoupling<double>>(&m.coupling())) {
    // Energy pairs v_{j+k} with h_j, so v_i meets h_j through k = i - j.
    for (std::size_t k = 0; k < n; ++k) {
      if ((j + k) % n == i) return c->kernel[k];
    }
  }
  const auto& rad = std::get<RadialCoupling<double>>(m.coupling());
  if (i == j) return rad.diag;
  const std::uint64_t d = (i + n - j) % n;
  return rad.shells[naive_order(m.group().prime(), d)];
}

double naive_energy(const DbnModel& m, std::uint64_t v, std::uint64_t h, std::uint64_t extra) {
  const std::size_t n = m.units();
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (((v >> i) & 1u) && ((h >> j) & 1u)) e -= naive_coupling(m, i, j);
    }
    if ((v >> i) & 1u) e -= m.visible_bias()[i];
    if ((h >> i) & 1u) e -= m.hidden_bias()[i];
  }
  for (std::size_t t = 0; t < m.deepening().size(); ++t) {
    if (!((extra >> t) & 1u)) continue;
    const auto& layer = m.deepening()[t];
    if (layer.silent()) return std::numeric_limits<double>::infinity();
    double s = *layer.b_eff;
    for (std::size_t i = 0; i < n; ++i) {
      if ((v >> i) & 1u) s += layer.w_eff[i];
    }
    e -= s;
  }
  return e;
}

long double naive_hidden_sum(const DbnModel& m, std::uint64_t v) {
  const std::size_t n = m.units();
  long double s = 0.0L;
  for (std::uint64_t h = 0; h < (std::uint64_t{1} << n); ++h) {
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << m.deepening().size()); ++x) {
      s += std::exp(-static_cast<long double>(naive_energy(m, v, h, x)));
    }
  }
  return s;
}

long double naive_partition(const DbnModel& m) {
  long double z = 0.0L;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << m.units()); ++v) z += naive_hidden_sum(m, v);
  return z;
}

Distribution naive_visible_marginal(const DbnModel& m) {
  std::vector<double> w;
  long double z = 0.0L;
  std::vector<long double> raw;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << m.units()); ++v) {
    raw.push_back(naive_hidden_sum(m, v));
    z += raw.back();
  }
  for (long double x : raw) w.push_back(static_cast<double>(x / z));
  return Distribution::from_weights(static_cast<unsigned>(m.units()), w);
}

Rational continuous_conv_energy(const TestFunction& w, const TestFunction& a, const TestFunction& b, unsigned l,
                                std::uint64_t v, std::uint64_t h) {
  const unsigned p = w.prime();
  const unsigned fine = std::max({l, w.level(), a.level(), b.level()}) + 1;
  const std::uint64_t big = ipow(p, fine);
  const Rational pair = fine_sum(p, l, fine, v, h, [&](std::uint64_t x, std::uint64_t y) {
    return w.at((x + big - y) % big);
  });
  return -pair - fine_linear(a, l, fine, v) - fine_linear(b, l, fine, h);
}

Rational continuous_rbm_energy(const TestFunction2& w, const TestFunction& a, const TestFunction& b, unsigned l,
                               std::uint64_t v, std::uint64_t h) {
  const unsigned fine = std::max({l, w.level(), a.level(), b.level()}) + 1;
  const Rational pair = fine_sum(w.prime(), l, fine, v, h, [&](std::uint64_t x, std::uint64_t y) {
    return w.at(x, y);
  });
  return -pair - fine_linear(a, l, fine, v) - fine_linear(b, l, fine, h);
}

Rational continuous_radial_energy(const RadialProfile& w, const TestFunction& a, const TestFunction& b, unsigned l,
                                  std::uint64_t v, std::uint64_t h) {
  const unsigned p = w.p;
  // Below the explicit shells the profile is constant, so diagonal cells integrate to tail * cell.
  const unsigned fine =
      std::max({l, static_cast<unsigned>(w.shells.size()), a.level(), b.level()}) + 1;
  const std::uint64_t big = ipow(p, fine);
  const Rational pair = fine_sum(p, l, fine, v, h, [&](std::uint64_t x, std::uint64_t y) {
    if (x == y) return w.tail;
    return w.at_order(naive_order(p, (x + big - y) % big));
  });
  return -pair - fine_linear(a, l, fine, v) - fine_linear(b, l, fine, h);
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

double dyadic(Rng& rng, double range) {
  const auto steps = static_cast<int>(range * 16);
  return std::uniform_int_distribution<int>(-steps, steps)(rng) / 16.0;
}

std::vector<double> uniform_vector(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> out(n);
  for (auto& x : out) x = uniform(rng, lo, hi);
  return out;
}

DbnModel random_model(Rng& rng, const TreeGroup& g, ModelKind kind, double scale) {
  const std::size_t n = g.size();
  DbnModel::Coupling coupling;
  switch (kind) {
    case ModelKind::rbm: coupling = RbmCoupling<double>{uniform_vector(rng, n * n, -scale, scale)}; break;
    case ModelKind::conv: coupling = ConvCoupling<double>{uniform_vector(rng, n, -scale, scale)}; break;
    case ModelKind::radial:
      coupling = RadialCoupling<double>{uniform_vector(rng, g.level(), -scale, scale), uniform(rng, -scale, scale)};
      break;
  }
  return DbnModel(g, std::move(coupling), uniform_vector(rng, n, -scale, scale), uniform_vector(rng, n, -scale, scale));
}

Distribution random_distribution(Rng& rng, unsigned width) {
  std::vector<double> w(std::size_t{1} << width);
  for (auto& x : w) x = uniform(rng, 0.05, 1.0);
  return Distribution::from_weights(width, w);
}

Distribution random_sparse_distribution(Rng& rng, unsigned width, unsigned k) {
  const std::size_t size = std::size_t{1} << width;
  if (k == 0 || k > size) throw DomainError("random_sparse_distribution: bad support size");
  std::vector<std::uint64_t> configs(size);
  for (std::uint64_t v = 0; v < size; ++v) configs[v] = v;
  std::shuffle(configs.begin(), configs.end(), rng);
  std::vector<double> w(size, 0.0);
  for (unsigned i = 0; i < k; ++i) w[configs[i]] = uniform(rng, 0.1, 1.0);
  return Distribution::from_weights(width, w);
}

TestFunction random_test_function(Rng& rng, unsigned p, unsigned level) {
  std::vector<double> coeffs(ipow(p, level));
  for (auto& c : coeffs) c = dyadic(rng, 2.0);
  return TestFunction(p, level, std::span<const double>(coeffs));
}

}  // namespace padic_dbn::oracles
