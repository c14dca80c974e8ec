#pragma once

#include "anticonc/bounds.hpp"
#include "anticonc/distributions.hpp"
#include "anticonc/weights.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace anticonc {

/// Malformed or incomplete input; the CLI exits with code 2.
class InputError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Reference values an instance file may pin down; checked by `verify`.
struct ExpectedValues {
    std::optional<double> q_exact;  // Q(F_a, tau)
    std::optional<double> p;        // p(tau / kappa)
    std::optional<double> lambda;   // lambda_d(tau / kappa)
    std::optional<double> M;        // M(tau / kappa)
    std::optional<double> lcd_D;    // must lie in [D_lower, D_upper]
    std::optional<double> beta;     // beta_{r,m}(M*, delta) upper bound
    std::optional<double> gamma;    // gamma_{r,s}(M*, delta) upper bound
};

/// One problem instance: the law of X, the weights and every parameter any command may need.
struct InstanceSpec {
    std::string id;
    DiscreteDistribution X = DiscreteDistribution::rademacher();
    WeightVector a = WeightVector::scalar({1.0});
    double tau = 1.0;
    double kappa = 1.0;
    double delta = 1.0;
    std::size_t r = 1;
    std::uint64_t m = 11;
    std::uint64_t s = 11;
    double gamma = 0.5;
    double alpha = 1.0;
    double theta_max = 0.0;  // <= 0: default ceiling
    double lcd_tol = 1e-6;
    std::optional<double> D;  // LCD radius; computed when absent
    double b = 1.0;
    double n_prime = 0.0;     // 0: n
    std::size_t mc_samples = 500'000;
    ConstantsConfig constants;
    ExpectedValues expected;
};

/// Parses one instance object. `source` names the input in diagnostics.
[[nodiscard]] InstanceSpec parse_instance(const std::string& json_text, const std::string& source = "<input>");

/// A file holding one instance object, an array of them, or {"instances": [...]}.
[[nodiscard]] std::vector<InstanceSpec> load_instance_file(const std::filesystem::path& path);

/// Every *.json file of a directory, in file-name order.
[[nodiscard]] std::vector<InstanceSpec> load_corpus(const std::filesystem::path& dir);

/// Applies a {"c2": 1.5, ...} overrides object.
void apply_constants_json(ConstantsConfig& constants, const std::string& json_text, const std::string& source);

[[nodiscard]] DiscreteDistribution parse_distribution_json(const std::string& json_text);

}  // namespace anticonc
