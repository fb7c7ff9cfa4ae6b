#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "padic_dbn/approximation.hpp"
#include "padic_dbn/deepening.hpp"
#include "padic_dbn/exact_inference.hpp"
#include "padic_dbn/oracles/reference.hpp"
#include "padic_dbn/oracles/suites.hpp"
#include "padic_dbn/serialization.hpp"

namespace padic_dbn::cli {
namespace {

struct RunConfig {
  std::uint64_t seed = 0;
  EnumerationLimits limits;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError(fmt::format("cannot read '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DomainError(fmt::format("cannot write '{}'", path));
  out << text;
}

nlohmann::json read_json(const std::string& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(fmt::format("malformed JSON in '{}': {}", path, e.what()));
  }
}

DbnModel read_model(const std::string& path) {
  try {
    return model_from_json(read_json(path));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(fmt::format("bad model JSON in '{}': {}", path, e.what()));
  }
}

std::string model_text(const DbnModel& m) { return model_to_json(m).dump(2) + "\n"; }

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw DomainError(fmt::format("'{}' is not a number", item));
    }
  }
  return out;
}

std::optional<double> parse_bias(const std::string& text) {
  if (text == "-inf") return std::nullopt;
  return parse_list(text).at(0);
}

int cmd_tree(unsigned p, unsigned l, std::ostream& out) {
  const TreeGroup g(p, l);
  if (g.size() > 4096) throw DomainError("tree: printing is limited to p^l <= 4096");
  out << fmt::format("G_{} for p = {}: {} leaves\n", l, p, g.size());
  out << "element,digits\n";
  for (std::uint64_t i = 0; i < g.size(); ++i) {
    const auto d = g.digits(GroupElement{i});
    out << i << ',' << fmt::format("{}", fmt::join(d, " ")) << '\n';
  }
  out << "ancestor levels (row i, column j)\n";
  for (std::uint64_t i = 0; i < g.size(); ++i) {
    std::vector<unsigned> row;
    for (std::uint64_t j = 0; j < g.size(); ++j) row.push_back(g.ancestor_level(GroupElement{i}, GroupElement{j}));
    out << fmt::format("{}\n", fmt::join(row, " "));
  }
  out << "p-adic distances\n";
  for (std::uint64_t i = 0; i < g.size(); ++i) {
    std::vector<std::string> row;
    for (std::uint64_t j = 0; j < g.size(); ++j) row.push_back(to_string(g.distance(GroupElement{i}, GroupElement{j})));
    out << fmt::format("{}\n", fmt::join(row, " "));
  }
  return kOk;
}

int cmd_exact(const std::string& model_path, const std::string& out_path, bool check, const std::string& side,
              const RunConfig& cfg, std::ostream& out) {
  const DbnModel m = read_model(model_path);
  Distribution d = Distribution::uniform(1);
  if (side == "hidden") {
    d = marginal(m, Side::hidden, cfg.limits);
  } else {
    d = visible_marginal_factorized(m, cfg.limits);
  }
  const double log_z = log_sum_exp(log_visible_weights(m, cfg.limits));
  write_file(out_path, distribution_to_csv(d));
  out << "log_z = " << format_double(log_z) << '\n';
  if (check) {
    const double gap = max_abs_difference(d, marginal(m, side == "hidden" ? Side::hidden : Side::visible, cfg.limits));
    const double z_gap = std::abs(partition_function(m, cfg.limits).log_z - log_z);
    out << "check: factorized vs enumerated max gap = " << format_double(gap)
        << ", log_z gap = " << format_double(z_gap) << '\n';
    if (gap > 1e-10 || z_gap > 1e-10) {
      out << "check FAILED\n";
      return kDomain;
    }
  }
  return kOk;
}

Distribution load_target(const std::string& path) { return distribution_from_csv(read_file(path)); }

int cmd_greedy(const std::string& target, const std::string& model_path, double eps, unsigned max_layers,
               const std::string& out_model, const std::string& trace_path, std::ostream& out) {
  const Distribution q = load_target(target);
  const DbnModel base = read_model(model_path);
  if (q.width() != base.units()) {
    throw DomainError(fmt::format("target width {} does not match the model's {} visible units", q.width(),
                                  base.units()));
  }
  const ApproxTrace trace = greedy_construct(q, base, eps, max_layers);
  if (!out_model.empty()) write_file(out_model, model_text(trace.final_model));
  if (!trace_path.empty()) write_file(trace_path, trace_to_csv(trace));
  out << fmt::format("layers added = {}\ninitial KL = {}\nfinal KL = {}\nreached = {}\n", trace.steps.size(),
                     format_double(trace.initial_kl), format_double(trace.final_kl), trace.reached);
  return kOk;
}

struct ApproxArgs {
  std::string target;
  unsigned random_support = 0;
  unsigned width = 4;
  unsigned p = 2;
  unsigned l0 = 0;  // 0: smallest level that holds the target
  double eps = 1e-3;
  double lambda1 = 2.0;
  double lambda_step = 2.0;
  double lambda_max = 60.0;
  double alpha = 80.0;
  std::string out_model;
  std::string trace;
  std::string out_target;
};

int cmd_approx(const ApproxArgs& args, const RunConfig& cfg, std::ostream& out) {
  Distribution q = Distribution::uniform(1);
  if (!args.target.empty()) {
    q = load_target(args.target);
  } else if (args.random_support > 0) {
    oracles::Rng rng(cfg.seed);
    q = oracles::random_sparse_distribution(rng, args.width, args.random_support);
    out << "seed = " << cfg.seed << '\n';
  } else {
    throw DomainError("approx: give --target or --random-support");
  }
  if (!args.out_target.empty()) write_file(args.out_target, distribution_to_csv(q));
  Distribution padded = pad_distribution(q, args.p);
  if (args.l0 != 0) {
    const TreeGroup g(args.p, args.l0);
    if (g.size() < padded.width()) {
      throw DomainError(fmt::format("approx: p^l0 = {} is smaller than the target width {}", g.size(), q.width()));
    }
    const auto width = static_cast<unsigned>(g.size());
    if (width > cfg.limits.max_visible_width) {
      throw CapExceeded(fmt::format("padding to {} visible units exceeds the cap", width));
    }
    std::vector<double> probs(std::size_t{1} << width, 0.0);
    std::copy(padded.probs().begin(), padded.probs().end(), probs.begin());
    padded = Distribution(width, std::move(probs));
  }
  std::optional<Theorem3Result> built;
  double lambda1 = args.lambda1;
  for (;; lambda1 += args.lambda_step) {
    built.emplace(theorem3_construct(padded, args.p, lambda1, args.alpha));
    if (built->trace.final_kl < args.eps || lambda1 + args.lambda_step > args.lambda_max) break;
  }
  if (!args.out_model.empty()) write_file(args.out_model, model_text(built->model));
  if (!args.trace.empty()) write_file(args.trace, trace_to_csv(built->trace));
  const double closed_kl = theorem3_kl_closed_form(padded, lambda1);
  out << fmt::format("visible units = {}\nsupport = {}\nlambda1 = {}\nlayers = {}\nfinal KL = {}\n"
                     "closed-form KL = {}\nreached = {}\n",
                     padded.width(), built->order.size(), format_double(lambda1), built->model.deepening().size(),
                     format_double(built->trace.final_kl), format_double(closed_kl), built->trace.final_kl < args.eps);
  return kOk;
}

int cmd_oracle(const std::string& suite, std::uint64_t seed, std::ostream& out) {
  const oracles::SuiteReport report = oracles::run_suite(suite, seed);
  out << fmt::format("suite {} (seed {})\n", report.name, seed);
  for (const auto& line : report.details) out << "  " << line << '\n';
  out << (report.passed ? "PASS" : "FAIL") << '\n';
  return report.passed ? kOk : kDomain;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"p-adic discrete deep belief networks"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* tree = app.add_subcommand("tree", "Print G_l, its digits, ancestor levels and distances");
  unsigned tree_p = 2, tree_l = 1;
  tree->add_option("--p", tree_p, "prime")->required();
  tree->add_option("--l", tree_l, "level")->required();

  auto* model = app.add_subcommand("model", "Create, inspect or validate model JSON");
  model->require_subcommand(1);
  auto* model_new = model->add_subcommand("new", "Write a zero or random model");
  unsigned new_p = 2, new_l = 1;
  std::string new_kind = "conv", new_out;
  double new_scale = 0.0;
  model_new->add_option("--p", new_p)->required();
  model_new->add_option("--l", new_l)->required();
  model_new->add_option("--kind", new_kind)->check(CLI::IsMember({"rbm", "conv", "radial"}));
  model_new->add_option("--random-scale", new_scale, "uniform parameters in [-s, s]; 0 for all zeros");
  model_new->add_option("--seed", cfg.seed);
  model_new->add_option("--out", new_out)->required();
  auto* model_show = model->add_subcommand("show", "Summarize a model");
  std::string show_path;
  model_show->add_option("--model", show_path)->required();
  auto* model_validate = model->add_subcommand("validate", "Check a model file");
  std::string validate_path;
  model_validate->add_option("--model", validate_path)->required();
  auto* model_disc = model->add_subcommand("discretize", "Discretize kernels and biases given as test functions");
  std::string disc_input, disc_out;
  model_disc->add_option("--input", disc_input)->required();
  model_disc->add_option("--out", disc_out)->required();

  auto* exact = app.add_subcommand("exact", "Exact marginal distribution and log Z");
  std::string exact_model, exact_out, exact_side = "visible";
  bool exact_check = false;
  exact->add_option("--model", exact_model)->required();
  exact->add_option("--out", exact_out)->required();
  exact->add_option("--side", exact_side)->check(CLI::IsMember({"visible", "hidden"}));
  exact->add_flag("--check", exact_check, "cross-check against full enumeration");

  auto* deepen = app.add_subcommand("deepen", "Append one compressed layer");
  std::string deepen_model, deepen_out, deepen_w, deepen_b;
  unsigned deepen_alpha = 1, deepen_beta = 1;
  deepen->add_option("--model", deepen_model)->required();
  deepen->add_option("--out", deepen_out)->required();
  deepen->add_option("--w-eff", deepen_w, "comma-separated weights, one per visible unit")->required();
  deepen->add_option("--b-eff", deepen_b, "bias, or -inf")->required();
  deepen->add_option("--alpha", deepen_alpha);
  deepen->add_option("--beta", deepen_beta);

  auto* greedy = app.add_subcommand("greedy", "Greedy KL-reducing layer construction");
  std::string greedy_target, greedy_model, greedy_out, greedy_trace;
  double greedy_eps = 1e-2;
  unsigned greedy_layers = 8;
  greedy->add_option("--target", greedy_target)->required();
  greedy->add_option("--model", greedy_model)->required();
  greedy->add_option("--eps", greedy_eps);
  greedy->add_option("--max-layers", greedy_layers);
  greedy->add_option("--out-model", greedy_out);
  greedy->add_option("--trace", greedy_trace);

  auto* approx = app.add_subcommand("approx", "Recursive universal-approximation construction");
  ApproxArgs ax;
  approx->add_option("--target", ax.target, "distribution CSV");
  approx->add_option("--random-support", ax.random_support, "draw a random target on this many configurations");
  approx->add_option("--width", ax.width, "visible width of a random target");
  approx->add_option("--p", ax.p);
  approx->add_option("--l0", ax.l0, "visible level; defaults to the smallest that holds the target");
  approx->add_option("--eps", ax.eps);
  approx->add_option("--lambda1", ax.lambda1, "starting lambda1");
  approx->add_option("--lambda-step", ax.lambda_step);
  approx->add_option("--lambda-max", ax.lambda_max);
  approx->add_option("--alpha", ax.alpha);
  approx->add_option("--seed", cfg.seed);
  approx->add_option("--out-model", ax.out_model);
  approx->add_option("--trace", ax.trace);
  approx->add_option("--out-target", ax.out_target);

  auto* oracle = app.add_subcommand("oracle", "Run an oracle property suite");
  std::string suite;
  oracle->add_option("suite", suite)->required();
  oracle->add_option("--seed", cfg.seed);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsage;
  }

  try {
    cfg.limits = EnumerationLimits::from_environment();
    if (*tree) return cmd_tree(tree_p, tree_l, out);
    if (*model_new) {
      const TreeGroup g(new_p, new_l);
      const ModelKind kind = parse_model_kind(new_kind);
      oracles::Rng rng(cfg.seed);
      const DbnModel m = new_scale > 0.0 ? oracles::random_model(rng, g, kind, new_scale) : DbnModel::zeros(g, kind);
      write_file(new_out, model_text(m));
      if (new_scale > 0.0) out << "seed = " << cfg.seed << '\n';
      return kOk;
    }
    if (*model_show) {
      const DbnModel m = read_model(show_path);
      out << fmt::format("kind = {}\np = {}\nl = {}\nunits = {}\nparameters = {}\ndeepening layers = {}\n",
                         to_string(m.kind()), m.group().prime(), m.group().level(), m.units(), m.parameter_count(),
                         m.deepening().size());
      return kOk;
    }
    if (*model_validate) {
      read_model(validate_path);
      out << "ok\n";
      return kOk;
    }
    if (*model_disc) {
      const ExactDbnModel exact_model_r = discretized_model_from_json(read_json(disc_input));
      write_file(disc_out, model_text(convert_model<double>(exact_model_r)));
      return kOk;
    }
    if (*exact) return cmd_exact(exact_model, exact_out, exact_check, exact_side, cfg, out);
    if (*deepen) {
      const DbnModel m = read_model(deepen_model);
      auto layers = m.deepening();
      layers.push_back(DeepLayer{parse_list(deepen_w), parse_bias(deepen_b), deepen_alpha, deepen_beta});
      write_file(deepen_out, model_text(m.with_deepening(std::move(layers))));
      return kOk;
    }
    if (*greedy) {
      return cmd_greedy(greedy_target, greedy_model, greedy_eps, greedy_layers, greedy_out, greedy_trace, out);
    }
    if (*approx) return cmd_approx(ax, cfg, out);
    if (*oracle) {
      const auto& names = oracles::suite_names();
      if (std::find(names.begin(), names.end(), suite) == names.end()) {
        err << fmt::format("unknown suite '{}'; choose one of: {}\n", suite, fmt::join(names, ", "));
        return kUsage;
      }
      return cmd_oracle(suite, cfg.seed, out);
    }
  } catch (const CapExceeded& e) {
    err << "cap exceeded: " << e.what() << '\n';
    return kCapExceeded;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kDomain;
  } catch (const AlreadyMatched& e) {
    err << "error: " << e.what() << '\n';
    return kDomain;
  }
  return kUsage;
}

}  // namespace padic_dbn::cli
