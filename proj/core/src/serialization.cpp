#include "padic_dbn/serialization.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace padic_dbn {
namespace {

using nlohmann::json;

std::vector<double> doubles(const json& j, const char* what) {
  if (!j.is_array()) throw DomainError(fmt::format("model JSON: '{}' must be an array", what));
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) throw DomainError(fmt::format("model JSON: '{}' must hold numbers", what));
    out.push_back(x.get<double>());
  }
  return out;
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw DomainError(fmt::format("JSON: missing field '{}'", key));
  return j.at(key);
}

unsigned small_uint(const json& j, const char* key) {
  const json& x = field(j, key);
  if (!x.is_number_integer() || x.get<long long>() < 0) {
    throw DomainError(fmt::format("JSON: '{}' must be a nonnegative integer", key));
  }
  return x.get<unsigned>();
}

std::vector<Rational> rationals(const json& j, const char* what) {
  std::vector<Rational> out;
  for (double x : doubles(j, what)) out.push_back(exact_rational(x));
  return out;
}

}  // namespace

nlohmann::json model_to_json(const DbnModel& m) {
  json j;
  j["p"] = m.group().prime();
  j["l"] = m.group().level();
  j["kind"] = std::string(to_string(m.kind()));
  const std::size_t n = m.units();
  switch (m.kind()) {
    case ModelKind::rbm: {
      const auto& w = std::get<RbmCoupling<double>>(m.coupling()).matrix;
      json rows = json::array();
      for (std::size_t i = 0; i < n; ++i) rows.push_back(std::vector<double>(w.begin() + i * n, w.begin() + (i + 1) * n));
      j["w"] = rows;
      break;
    }
    case ModelKind::conv:
      j["w"] = std::get<ConvCoupling<double>>(m.coupling()).kernel;
      break;
    case ModelKind::radial: {
      const auto& r = std::get<RadialCoupling<double>>(m.coupling());
      j["w"] = json{{"profile", r.shells}, {"diag", r.diag}};
      break;
    }
  }
  j["a"] = m.visible_bias();
  j["b"] = m.hidden_bias();
  json layers = json::array();
  for (const auto& layer : m.deepening()) {
    json l;
    l["w_eff"] = layer.w_eff;
    if (layer.b_eff) {
      l["b_eff"] = *layer.b_eff;
    } else {
      l["b_eff"] = "-inf";
    }
    l["alpha"] = layer.alpha;
    l["beta"] = layer.beta;
    layers.push_back(l);
  }
  j["deepening"] = layers;
  return j;
}

DbnModel model_from_json(const nlohmann::json& j, std::uint64_t group_cap) {
  const TreeGroup g(small_uint(j, "p"), small_uint(j, "l"), group_cap);
  const ModelKind kind = parse_model_kind(field(j, "kind").get<std::string>());
  const json& w = field(j, "w");
  DbnModel::Coupling coupling;
  switch (kind) {
    case ModelKind::rbm: {
      if (!w.is_array()) throw DomainError("model JSON: rbm 'w' must be a matrix");
      std::vector<double> flat;
      for (const auto& row : w) {
        const auto r = doubles(row, "w");
        if (r.size() != g.size()) throw DomainError("model JSON: rbm 'w' rows must have p^l entries");
        flat.insert(flat.end(), r.begin(), r.end());
      }
      coupling = RbmCoupling<double>{std::move(flat)};
      break;
    }
    case ModelKind::conv:
      coupling = ConvCoupling<double>{doubles(w, "w")};
      break;
    case ModelKind::radial: {
      const json& diag = field(w, "diag");
      if (!diag.is_number()) throw DomainError("model JSON: radial 'diag' must be a number");
      coupling = RadialCoupling<double>{doubles(field(w, "profile"), "profile"), diag.get<double>()};
      break;
    }
  }
  std::vector<DeepLayer> layers;
  if (j.contains("deepening")) {
    for (const auto& l : field(j, "deepening")) {
      DeepLayer layer;
      layer.w_eff = doubles(field(l, "w_eff"), "w_eff");
      const json& b = field(l, "b_eff");
      if (b.is_string() && b.get<std::string>() == "-inf") {
        layer.b_eff.reset();
      } else if (b.is_number()) {
        layer.b_eff = b.get<double>();
      } else {
        throw DomainError("model JSON: 'b_eff' must be a number or \"-inf\"");
      }
      layer.alpha = l.contains("alpha") ? small_uint(l, "alpha") : 1;
      layer.beta = l.contains("beta") ? small_uint(l, "beta") : 1;
      layers.push_back(std::move(layer));
    }
  }
  return DbnModel(g, std::move(coupling), doubles(field(j, "a"), "a"), doubles(field(j, "b"), "b"),
                  std::move(layers));
}

nlohmann::json test_function_to_json(const TestFunction& f) {
  json coeffs = json::array();
  for (const auto& c : f.coeffs()) coeffs.push_back(to_double(c));
  return json{{"p", f.prime()}, {"level", f.level()}, {"coeffs", coeffs}};
}

TestFunction test_function_from_json(const nlohmann::json& j) {
  return TestFunction(small_uint(j, "p"), small_uint(j, "level"), rationals(field(j, "coeffs"), "coeffs"));
}

RadialProfile radial_profile_from_json(const nlohmann::json& j) {
  const json& tail = field(j, "tail");
  if (!tail.is_number()) throw DomainError("radial profile: 'tail' must be a number");
  const auto shells = doubles(field(j, "shells"), "shells");
  return RadialProfile::from_doubles(small_uint(j, "p"), shells, tail.get<double>());
}

TestFunction2 test_function2_from_json(const nlohmann::json& j) {
  return TestFunction2(small_uint(j, "p"), small_uint(j, "level"), rationals(field(j, "coeffs"), "coeffs"));
}

ExactDbnModel discretized_model_from_json(const nlohmann::json& j) {
  const ModelKind kind = parse_model_kind(field(j, "kind").get<std::string>());
  const TestFunction a = test_function_from_json(field(j, "a"));
  const TestFunction b = test_function_from_json(field(j, "b"));
  const TreeGroup g(a.prime(), small_uint(j, "l"));
  switch (kind) {
    case ModelKind::conv: return discretized_conv_model(test_function_from_json(field(j, "w")), a, b, g);
    case ModelKind::rbm: return discretized_rbm_model(test_function2_from_json(field(j, "w")), a, b, g);
    case ModelKind::radial: return discretized_radial_model(radial_profile_from_json(field(j, "w")), a, b, g);
  }
  throw DomainError("unknown model kind");
}

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", x);
}

std::string distribution_to_csv(const Distribution& d) {
  std::string out = "bitmask,probability\n";
  for (std::uint64_t v = 0; v < d.size(); ++v) out += fmt::format("{},{}\n", v, format_double(d[v]));
  return out;
}

Distribution distribution_from_csv(std::string_view text, double tolerance) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line.rfind("bitmask,probability", 0) != 0) {
    throw DomainError("distribution CSV: expected header 'bitmask,probability'");
  }
  std::vector<double> probs;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DomainError(fmt::format("distribution CSV: bad row '{}'", line));
    std::uint64_t bits = 0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + comma, bits);
    if (ec != std::errc{} || ptr != line.data() + comma || bits != probs.size()) {
      throw DomainError(fmt::format("distribution CSV: row {} must have bitmask {}", probs.size() + 1, probs.size()));
    }
    try {
      std::size_t used = 0;
      const std::string value = line.substr(comma + 1);
      probs.push_back(std::stod(value, &used));
      if (used != value.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw DomainError(fmt::format("distribution CSV: bad probability in '{}'", line));
    }
  }
  if (probs.empty() || !std::has_single_bit(probs.size())) {
    throw DomainError("distribution CSV: the row count must be a power of two");
  }
  double sum = 0.0;
  for (double x : probs) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("distribution CSV: probabilities must be nonnegative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > tolerance) {
    throw DomainError(fmt::format("distribution CSV: probabilities sum to {:.17g}, not 1", sum));
  }
  // Rows written by distribution_to_csv read back unchanged.
  if (std::abs(sum - 1.0) > 1e-12) {
    for (double& x : probs) x /= sum;
  }
  const auto width = static_cast<unsigned>(std::countr_zero(probs.size()));
  return Distribution(width, std::move(probs));
}

std::string trace_to_csv(const ApproxTrace& trace) {
  std::string out = "step,target_bitmask,alpha,lambda_or_beff,kl\n";
  for (const auto& s : trace.steps) {
    out += fmt::format("{},{},{},{},{}\n", s.step, s.target, format_double(s.alpha), format_double(s.lambda_or_beff),
                       format_double(s.kl));
  }
  return out;
}

}  // namespace padic_dbn
