#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "padic_dbn/energy_models.hpp"
#include "padic_dbn/exact_inference.hpp"
#include "padic_dbn/schwartz.hpp"

// Deliberately naive second implementations used to cross-check the library.
namespace padic_dbn::oracles {

// Level of the first common ancestor, found by walking both root-to-leaf paths digit by digit.
unsigned tree_ancestor_level(unsigned p, unsigned l, std::uint64_t a, std::uint64_t b);

// |x|_p in Z/p^l by trial division; 0 for x == 0.
Rational naive_norm(unsigned p, unsigned l, std::uint64_t x);

// Coupling between v_i and h_j recomputed from the raw parameters.
double naive_coupling(const DbnModel& m, std::size_t i, std::size_t j);
double naive_energy(const DbnModel& m, std::uint64_t v, std::uint64_t h, std::uint64_t extra);

// Plain (unshifted) sums of exp(-E) in long double.
long double naive_partition(const DbnModel& m);
Distribution naive_visible_marginal(const DbnModel& m);
// sum_h exp(-E(v, h, extra)) for one v.
long double naive_hidden_sum(const DbnModel& m, std::uint64_t v);

// Continuous energy functionals for fields v, h constant on balls of level l, integrated exactly over a
// finer partition of Z_p x Z_p.
Rational continuous_conv_energy(const TestFunction& w, const TestFunction& a, const TestFunction& b, unsigned l,
                                std::uint64_t v, std::uint64_t h);
Rational continuous_rbm_energy(const TestFunction2& w, const TestFunction& a, const TestFunction& b, unsigned l,
                               std::uint64_t v, std::uint64_t h);
Rational continuous_radial_energy(const RadialProfile& w, const TestFunction& a, const TestFunction& b, unsigned l,
                                  std::uint64_t v, std::uint64_t h);

// Seeded generators for property tests.
using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);
// Multiples of 1/16 in [-range, range], exact in binary.
double dyadic(Rng& rng, double range);
std::vector<double> uniform_vector(Rng& rng, std::size_t n, double lo, double hi);
DbnModel random_model(Rng& rng, const TreeGroup& g, ModelKind kind, double scale = 1.0);
Distribution random_distribution(Rng& rng, unsigned width);
// Random masses on k distinct configurations.
Distribution random_sparse_distribution(Rng& rng, unsigned width, unsigned k);
TestFunction random_test_function(Rng& rng, unsigned p, unsigned level);

}  // namespace padic_dbn::oracles
