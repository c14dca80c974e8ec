#include "anticonc/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace anticonc {

namespace {

using ojson = nlohmann::ordered_json;

ojson estimate_json(const ConcentrationEstimate& q) {
    ojson j;
    j["value"] = q.value;
    j["method"] = to_string(q.method);
    j["stderr"] = q.stderr_;
    j["tau"] = q.tau;
    return j;
}

ojson constants_json(const ConstantsConfig& c) {
    ojson j = ojson::object();
    for (const auto& name : ConstantsConfig::names()) j[name] = c.get(name);
    return j;
}

ojson vector_json(std::span<const double> v) {
    ojson j = ojson::array();
    for (double x : v) j.push_back(x);
    return j;
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double max_abs_weight(const WeightVector& a) {
    double m = 0.0;
    for (double x : a.rows().coords) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

ConcentrationEstimate concentration_for(const InstanceSpec& spec, RngSeed seed, std::size_t budget) {
    if (spec.a.dim() <= 4) {
        try {
            return exact_Q(spec.X, spec.a, spec.tau, budget);
        } catch (const CapacityError&) {
        }
    }
    return mc_Q(Sampler{WeightedSumSampler{spec.X, spec.a}}, spec.tau, spec.mc_samples, seed);
}

LcdParams lcd_params_for(const InstanceSpec& spec) {
    LcdParams p;
    p.gamma = spec.gamma;
    p.alpha = spec.alpha;
    p.theta_max = spec.theta_max;
    p.tol = spec.lcd_tol;
    return p;
}

BoundReport evaluate_bound_report(const InstanceSpec& spec, RngSeed seed, std::size_t budget) {
    spec.constants.validate();
    const ConstantsConfig& C = spec.constants;
    const WeightVector& a = spec.a;
    const std::size_t d = a.dim();
    const std::size_t n = a.n();

    BoundReport rep;
    rep.id = spec.id;
    rep.constants = C;
    rep.q = concentration_for(spec, derive_seed(seed, 0), budget);

    const DiscreteDistribution G = symmetrize(spec.X);
    const double ratio = spec.tau / spec.kappa;
    const TauDFunctionals fr = functionals_at(G, ratio, static_cast<unsigned>(d));
    const double p = fr.p;
    const double lam = fr.lambda;
    const double lam1 = functionals_at(G, ratio, 1).lambda;
    auto& Q = rep.quantities;
    Q["p"] = p;
    Q["lambda_d"] = lam;
    Q["lambda_1"] = lam1;
    Q["M"] = fr.M;

    // H-side lemmas, one shared seed so the three laws are coupled.
    const RngSeed hseed = derive_seed(seed, 1);
    const ConcentrationEstimate qhp = q_h_power_mc(a, p, spec.kappa, spec.mc_samples, hseed);
    const ConcentrationEstimate qhl = q_h_power_mc(a, lam, spec.kappa, spec.mc_samples, hseed);
    const ConcentrationEstimate qhd = q_h_power_mc(a, p, spec.delta, spec.mc_samples, hseed);
    Q["Q_Hp_kappa"] = qhp.value;
    Q["Q_Hp_kappa_stderr"] = qhp.stderr_;
    Q["Q_Hlambda_kappa"] = qhl.value;
    Q["Q_Hlambda_kappa_stderr"] = qhl.stderr_;
    Q["Q_Hp_delta"] = qhd.value;
    rep.bounds["L13"] = bound_lemma13(qhp.value, C.c_d);
    rep.bounds["C14"] = bound_cor14(qhd.value, spec.kappa, spec.delta, d, C.c_d);
    rep.bounds["L15"] = bound_lemma15(qhl.value, lam, C.c_d);
    try {
        const CompoundPoisson hp = h_power(a, p);
        const CharFn f = [hp](std::span<const double> t) { return cp_char_fn(hp, t); };
        const ConcentrationEstimate e = esseen_upper_Q(f, spec.kappa, d, C.c_esseen, max_abs_weight(a));
        rep.bounds["E_H"] = make_bound(e.value);
    } catch (const NumericError&) {
        Q["E_H_failed"] = 1.0;
    }

    if (d == 1) {
        const DiscreteDistribution Mstar = spectral_measure_Mstar(a);
        const BetaResult beta = beta_rm(Mstar, spec.delta, spec.r, spec.m);
        const GammaResult gam = gamma_rs(Mstar, spec.delta, spec.r, spec.s);
        const double alpha_h = static_cast<double>(n) * p / 2.0;
        Q["beta"] = beta.value;
        Q["gamma_rs"] = gam.value;
        Q["alpha_H"] = alpha_h;
        rep.bounds["T16"] = bound_arak_T16(alpha_h, beta.value, spec.r, spec.m, C.c2);
        rep.bounds["T17"] = bound_T17(spec.kappa, spec.delta, spec.r, spec.m, n, p, beta.value, C.c3);
        const GuardedBound t18 = bound_T18(spec.kappa, spec.delta, spec.r, spec.m, n, beta.value, lam1, C.c4,
                                           C.c_guard);
        rep.bounds["T18"] = t18.bound;
        Q["T18_guard_ok"] = t18.guard_ok ? 1.0 : 0.0;
        rep.bounds["T110"] = bound_T110(alpha_h, gam.value, spec.r, spec.s, C.c5, C.c6);
        const GuardedBound t111 = bound_T111(spec.kappa, spec.delta, spec.r, spec.s, n, gam.value, lam1, C.c7, C.c8,
                                             C.c_guard);
        rep.bounds["T111"] = t111.bound;
        Q["T111_guard_ok"] = t111.guard_ok ? 1.0 : 0.0;

        if (rep.q.value > 0.0) {
            InverseInputs in;
            in.tau = spec.tau > 0.0 ? spec.tau : spec.delta;
            in.kappa = spec.kappa;
            in.delta = spec.delta;
            in.r = spec.r;
            in.n_prime = spec.n_prime;
            const InverseReport inv = inverse_principle_report(spec.X, a, rep.q.value, in, C);
            Q["inv_n_prime"] = inv.n_prime;
            Q["inv_n_prime_min_p"] = inv.n_prime_min_p;
            Q["inv_n_prime_min_lambda"] = inv.n_prime_min_lambda;
            Q["inv_m_budget_p"] = inv.m_budget_p;
            Q["inv_m_budget_lambda"] = inv.m_budget_lambda;
            Q["inv_size_budget"] = inv.size_budget;
            Q["inv_rank_budget"] = inv.rank_budget;
            Q["inv_uncovered_budget_p"] = inv.uncovered_budget_p;
            Q["inv_uncovered_budget_lambda"] = inv.uncovered_budget_lambda;
            Q["inv_size_budget_general_p"] = inv.size_budget_general_p;
            Q["inv_size_budget_general_lambda"] = inv.size_budget_general_lambda;
            Q["inv_log_rank_budget"] = inv.log_rank_budget;
            Q["inv_log_uncovered_budget_p"] = inv.log_uncovered_budget_p;
            Q["inv_log_uncovered_budget_lambda"] = inv.log_uncovered_budget_lambda;
            Q["inv_guard_ok"] = inv.guard_ok ? 1.0 : 0.0;
            Q["inv_witness_cap"] = static_cast<double>(inv.witness_cap);
            Q["inv_witness_rank"] = static_cast<double>(inv.witness_rank);
            Q["inv_witness_size"] = static_cast<double>(inv.witness_size);
            Q["inv_witness_uncovered"] = static_cast<double>(inv.witness_uncovered);
            Q["inv_witness_mass"] = inv.witness_mass;
        }
    }

    double D = 0.0;
    if (spec.D) {
        D = *spec.D;
    } else {
        const LcdResult lr = compute_lcd(a, lcd_params_for(spec));
        D = lr.D_lower;
        Q["lcd_D_lower"] = lr.D_lower;
        Q["lcd_D_upper"] = lr.D_upper;
        Q["lcd_certified"] = lr.certified ? 1.0 : 0.0;
    }
    const double detA = matrix_A(a).det;
    Q["detA"] = detA;
    rep.bounds["T31"] = bound_T31(spec.b, spec.gamma, D, spec.alpha, detA, d, C.c_d);
    const TauDFunctionals f = taud_functionals(G, spec.tau, D, static_cast<unsigned>(d));
    Q["lambda_d_tauD"] = f.lambda;
    Q["p_tauD"] = f.p;
    Q["M_tauD"] = f.M;
    const LcdBounds lb = bound_T33_T34_T35(f, spec.gamma, D, spec.alpha, detA, d, C);
    rep.bounds["T33"] = lb.T33;
    rep.bounds["T34"] = lb.T34;
    rep.bounds["T35"] = lb.T35;
    Q["T35_le_T34"] = lb.dominance_holds() ? 1.0 : 0.0;

    auto& P = rep.params;
    P["n"] = static_cast<double>(n);
    P["d"] = static_cast<double>(d);
    P["tau"] = spec.tau;
    P["kappa"] = spec.kappa;
    P["delta"] = spec.delta;
    P["r"] = static_cast<double>(spec.r);
    P["m"] = static_cast<double>(spec.m);
    P["s"] = static_cast<double>(spec.s);
    P["gamma"] = spec.gamma;
    P["alpha"] = spec.alpha;
    P["D"] = D;
    P["b"] = spec.b;
    P["n_prime"] = spec.n_prime > 0.0 ? spec.n_prime : static_cast<double>(n);
    return rep;
}

std::string bound_reports_json(std::vector<BoundReport> reports) {
    std::stable_sort(reports.begin(), reports.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
    ojson doc;
    doc["spec_version"] = kSchemaVersion;
    doc["reports"] = ojson::array();
    for (const auto& r : reports) {
        ojson j;
        j["id"] = r.id;
        j["q"] = estimate_json(r.q);
        j["params"] = ojson(r.params);
        j["quantities"] = ojson(r.quantities);
        ojson b = ojson::object();
        for (const auto& [tag, v] : r.bounds) b[tag] = ojson{{"value", v.value}, {"vacuous", v.vacuous}};
        j["bounds"] = b;
        j["constants"] = constants_json(r.constants);
        doc["reports"].push_back(j);
    }
    return doc.dump(2) + "\n";
}

std::string bound_reports_csv(std::vector<BoundReport> reports) {
    std::stable_sort(reports.begin(), reports.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
    std::ostringstream out;
    out << "instance_id,tag,value,vacuous\n";
    for (const auto& r : reports) {
        for (const auto& [tag, v] : r.bounds) {
            out << r.id << ',' << tag << ',' << format_double(v.value) << ',' << (v.vacuous ? "true" : "false")
                << '\n';
        }
    }
    return out.str();
}

std::string q_json(const InstanceSpec& spec, const ConcentrationEstimate& q) {
    ojson doc;
    doc["spec_version"] = kSchemaVersion;
    doc["id"] = spec.id;
    doc["value"] = q.value;
    doc["method"] = to_string(q.method);
    doc["stderr"] = q.stderr_;
    doc["tau"] = q.tau;
    return doc.dump(2) + "\n";
}

std::string lcd_json(const InstanceSpec& spec, const LcdResult& r) {
    ojson doc;
    doc["spec_version"] = kSchemaVersion;
    doc["id"] = spec.id;
    doc["gamma"] = spec.gamma;
    doc["alpha"] = spec.alpha;
    doc["D_lower"] = r.D_lower;
    doc["D_upper"] = r.D_upper;
    doc["witness_t"] = r.witness_t ? vector_json(*r.witness_t) : ojson(nullptr);
    doc["certified"] = r.certified;
    doc["ceiling_reached"] = r.ceiling_reached;
    doc["budget_exhausted"] = r.budget_exhausted;
    doc["theta_max"] = r.theta_max;
    doc["boxes"] = r.boxes;
    return doc.dump(2) + "\n";
}

GapfitResult gapfit(const InstanceSpec& spec) {
    if (spec.a.dim() != 1) throw InputError(spec.id + ": gapfit needs scalar weights");
    const DiscreteDistribution Mstar = spectral_measure_Mstar(spec.a);
    GapfitResult g;
    g.beta = beta_rm(Mstar, spec.delta, spec.r, spec.m);
    g.gamma = gamma_rs(Mstar, spec.delta, spec.r, spec.s);
    g.beta_image = cgap_image(g.beta.witness);
    g.gamma_image = gap_image(g.gamma.witness).coords;
    g.beta_coverage = neighborhood_coverage(spec.a.rows(), PointCloud(1, g.beta_image), spec.delta);
    g.gamma_coverage = neighborhood_coverage(spec.a.rows(), PointCloud(1, g.gamma_image), spec.delta);
    return g;
}

std::string gapfit_json(const InstanceSpec& spec, const GapfitResult& g) {
    auto coverage = [](const Coverage& c) {
        ojson j;
        j["covered"] = c.covered;
        j["uncovered"] = c.uncovered;
        return j;
    };
    ojson doc;
    doc["spec_version"] = kSchemaVersion;
    doc["id"] = spec.id;
    doc["delta"] = spec.delta;
    {
        ojson b;
        b["r"] = spec.r;
        b["m"] = spec.m;
        b["value"] = g.beta.value;
        b["exact"] = g.beta.exact;
        b["evaluated"] = g.beta.evaluated;
        ojson w;
        w["h"] = vector_json(g.beta.witness.h);
        ojson box = ojson::array();
        for (const auto& s : g.beta.witness.body) box.push_back(s.b);
        w["V"] = ojson{{"box", box}};
        w["m"] = g.beta.witness.cap;
        b["witness"] = w;
        b["image"] = vector_json(g.beta_image);
        b["coverage"] = coverage(g.beta_coverage);
        doc["beta"] = b;
    }
    {
        ojson c;
        c["r"] = spec.r;
        c["s"] = spec.s;
        c["value"] = g.gamma.value;
        c["exact"] = g.gamma.exact;
        c["evaluated"] = g.gamma.evaluated;
        ojson w;
        w["L"] = vector_json(g.gamma.witness.L);
        ojson gens = ojson::array();
        for (std::size_t j = 0; j < g.gamma.witness.gens.size(); ++j) gens.push_back(vector_json(g.gamma.witness.gens.point(j)));
        w["g"] = gens;
        c["witness"] = w;
        c["image"] = vector_json(g.gamma_image);
        c["coverage"] = coverage(g.gamma_coverage);
        doc["gamma"] = c;
    }
    return doc.dump(2) + "\n";
}

}  // namespace anticonc
