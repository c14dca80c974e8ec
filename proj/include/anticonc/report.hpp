#pragma once

#include "anticonc/bounds.hpp"
#include "anticonc/concentration.hpp"
#include "anticonc/instance.hpp"
#include "anticonc/lcd.hpp"
#include "anticonc/progressions.hpp"

#include <map>
#include <string>
#include <vector>

namespace anticonc {

/// Version tag written into every JSON document.
inline constexpr const char* kSchemaVersion = "1.0";

/// Evaluated right-hand sides for one instance.
///
/// Tags: L13, C14, L15, E_H (the H-side lemmas and the smoothing-integral
/// cross-check), T16, T17, T18, T110, T111 (scalar weights only), T31, T33,
/// T34, T35 (least-common-denominator bounds).
struct BoundReport {
    std::string id;
    ConcentrationEstimate q;
    std::map<std::string, BoundValue> bounds;
    std::map<std::string, double> params;
    std::map<std::string, double> quantities;  // functionals, search values, guards, budgets
    ConstantsConfig constants;
};

/// Q by exact enumeration when it fits in `budget`, otherwise Monte Carlo with spec.mc_samples.
[[nodiscard]] ConcentrationEstimate concentration_for(const InstanceSpec& spec, RngSeed seed,
                                                      std::size_t budget = kDefaultExactBudget);

[[nodiscard]] LcdParams lcd_params_for(const InstanceSpec& spec);

[[nodiscard]] BoundReport evaluate_bound_report(const InstanceSpec& spec, RngSeed seed,
                                                std::size_t budget = kDefaultExactBudget);

/// {"spec_version", "reports": [...]}, reports sorted by id.
[[nodiscard]] std::string bound_reports_json(std::vector<BoundReport> reports);
/// instance_id,tag,value,vacuous; rows sorted by id then tag.
[[nodiscard]] std::string bound_reports_csv(std::vector<BoundReport> reports);

[[nodiscard]] std::string q_json(const InstanceSpec& spec, const ConcentrationEstimate& q);
[[nodiscard]] std::string lcd_json(const InstanceSpec& spec, const LcdResult& r);

struct GapfitResult {
    BetaResult beta;
    GammaResult gamma;
    Coverage beta_coverage;   // of the weights a_k by [K]_delta
    Coverage gamma_coverage;
    std::vector<double> beta_image;
    std::vector<double> gamma_image;
};

/// beta_{r,m}(M*, delta) and gamma_{r,s}(M*, delta) with witnesses and weight coverage. Scalar weights only.
[[nodiscard]] GapfitResult gapfit(const InstanceSpec& spec);
[[nodiscard]] std::string gapfit_json(const InstanceSpec& spec, const GapfitResult& g);

}  // namespace anticonc
