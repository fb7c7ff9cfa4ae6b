#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace padic_dbn::oracles {

struct SuiteReport {
  std::string name;
  bool passed = true;
  std::vector<std::string> details;  // one line per check, prefixed with ok/FAIL

  void check(bool ok, std::string line);
  void note(std::string line);
};

SuiteReport ultrametric_suite(std::uint64_t seed);
SuiteReport discretize_suite(std::uint64_t seed);
SuiteReport extension_suite(std::uint64_t seed, unsigned draws = 20);
SuiteReport lemma2_suite(std::uint64_t seed, unsigned draws = 10);
SuiteReport factorization_suite(std::uint64_t seed, unsigned models = 20);
SuiteReport theorem2_suite(std::uint64_t seed, unsigned trials = 50);
SuiteReport theorem3_suite(std::uint64_t seed, unsigned targets = 5);

const std::vector<std::string>& suite_names();
// Throws DomainError for an unknown name.
SuiteReport run_suite(std::string_view name, std::uint64_t seed);

}  // namespace padic_dbn::oracles
