#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "padic_dbn/approximation.hpp"
#include "padic_dbn/energy_models.hpp"
#include "padic_dbn/exact_inference.hpp"
#include "padic_dbn/schwartz.hpp"

namespace padic_dbn {

// Model JSON: {p, l, kind, w, a, b, deepening: [{w_eff, b_eff, alpha, beta}]}.
// w is a matrix for rbm, a vector for conv and {profile, diag} for radial; b_eff = -inf is the string "-inf".
nlohmann::json model_to_json(const DbnModel& m);
DbnModel model_from_json(const nlohmann::json& j, std::uint64_t group_cap = kDefaultGroupCap);

nlohmann::json test_function_to_json(const TestFunction& f);
TestFunction test_function_from_json(const nlohmann::json& j);
RadialProfile radial_profile_from_json(const nlohmann::json& j);
TestFunction2 test_function2_from_json(const nlohmann::json& j);

// Discretization request: {l, kind, w, a, b} where a, b are test functions and w is a test function (conv),
// a two-variable test function (rbm) or {p, shells, tail} (radial).
ExactDbnModel discretized_model_from_json(const nlohmann::json& j);

// Decimal with 17 significant digits.
std::string format_double(double x);

std::string distribution_to_csv(const Distribution& d);
// All 2^width rows in ascending order; the total must be 1 within tolerance and is then renormalized.
Distribution distribution_from_csv(std::string_view text, double tolerance = 1e-6);

std::string trace_to_csv(const ApproxTrace& trace);

}  // namespace padic_dbn
