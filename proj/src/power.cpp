#include "evgof/power.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "evgof/errors.hpp"
#include "evgof/parallel.hpp"
#include "evgof/rng.hpp"

namespace evgof {

namespace {

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

std::string statistic_label(StatFamily statistic, EstimatorKind estimator) {
    if (statistic == StatFamily::Tn) return "Tn";
    return estimator == EstimatorKind::P ? "SnP" : "SnCFG";
}

double solve_asym_theta_for_tau(Family base, double lambda, double kappa, double target_tau) {
    if (target_tau >= mo_tau_bound(lambda, kappa)) {
        throw RangeError("target tau exceeds the Marshall-Olkin bound for (lambda, kappa)");
    }
    auto tau_at = [&](double theta) {
        return tau_of_theta(CopulaModel{base, {theta}, Asymmetry{lambda, kappa}});
    };
    const auto [glo, ghi] = tau_range(base);
    double lo = theta_of_tau(base, std::max(glo, 1e-6));
    double hi = theta_of_tau(base, std::min(ghi, 0.995));
    double flo = tau_at(lo) - target_tau;
    double fhi = tau_at(hi) - target_tau;
    if (flo > 0.0 || fhi < 0.0) throw RangeError("target tau not bracketed by the base family");
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
        x = (std::fabs(fhi - flo) > 1e-300) ? lo - flo * (hi - lo) / (fhi - flo)
                                            : 0.5 * (lo + hi);
        if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
        const double fx = tau_at(x) - target_tau;
        if (std::fabs(fx) < 1e-9 || hi - lo < 1e-12 * (1.0 + std::fabs(x))) return x;
        if ((fx < 0.0) == (flo < 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
    }
    return x;
}

PowerRow run_scenario(const Scenario& s) {
    if (s.reps < 1) throw ConfigError("scenario '" + s.id + "' has no repetitions");
    make_copula(s.true_model);  // validate before spawning any work
    GofConfig cfg;
    cfg.estimator = s.estimator;
    cfg.statistic = s.statistic;
    cfg.method = s.method;
    cfg.bootstrap_n = s.bootstrap_n;
    cfg.grid_m = s.grid_m;
    cfg.workers = 1;  // parallelism lives at the repetition level
    if (s.statistic == StatFamily::Sn && !is_extreme_value(s.h0.family)) {
        throw ConfigError("scenario '" + s.id + "': Sn needs an extreme-value null");
    }

    const std::uint64_t scenario_seed = Philox::derive(s.seed, fnv1a64(s.id));
    std::vector<char> reject(s.reps, 0);
    std::vector<double> runtime_ms(s.reps, 0.0);
    parallel_for(static_cast<std::size_t>(s.reps), s.workers, [&](std::size_t r) {
        const auto t0 = std::chrono::steady_clock::now();
        const std::uint64_t rep_seed = Philox::derive(scenario_seed, r);
        RawSample data;
        data.pairs = sample(s.true_model, static_cast<std::size_t>(s.n),
                            Philox::derive(rep_seed, 0));
        GofConfig rep_cfg = cfg;
        rep_cfg.seed = Philox::derive(rep_seed, 1);
        const GofResult res = bootstrap_test(data, s.h0, rep_cfg);
        reject[r] = res.pvalue < s.level ? 1 : 0;
        runtime_ms[r] = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    });

    PowerRow row;
    row.scenario = s.id;
    row.reps = s.reps;
    double hits = 0.0;
    double total_ms = 0.0;
    for (int r = 0; r < s.reps; ++r) {
        hits += reject[r];
        total_ms += runtime_ms[r];
    }
    row.rejection_rate = hits / s.reps;
    row.mc_stderr = std::sqrt(row.rejection_rate * (1.0 - row.rejection_rate) / s.reps);
    row.mean_runtime_ms = total_ms / s.reps;
    return row;
}

namespace {

struct TrueSpec {
    std::string label;
    CopulaModel model;
    int group;
};

std::vector<TrueSpec> true_models(Scale scale) {
    const std::vector<Family> ev = {Family::GumbelHougaard, Family::Galambos,
                                    Family::HuslerReiss, Family::TEV4};
    const std::vector<Family> nev = {Family::Clayton, Family::Frank, Family::Normal,
                                     Family::Plackett};
    std::vector<double> taus = {0.25, 0.50, 0.75};
    std::vector<TrueSpec> out;
    for (Family f : ev) {
        for (double tau : taus) {
            std::ostringstream label;
            label << family_name(f) << "-tau" << static_cast<int>(tau * 100);
            out.push_back({label.str(), CopulaModel{f, {theta_of_tau(f, tau)}, std::nullopt}, 1});
        }
    }
    for (Family f : nev) {
        for (double tau : taus) {
            std::ostringstream label;
            label << family_name(f) << "-tau" << static_cast<int>(tau * 100);
            out.push_back({label.str(), CopulaModel{f, {theta_of_tau(f, tau)}, std::nullopt}, 2});
        }
    }
    const double lambda = 0.3, kappa = 0.8, tau3 = 0.20;
    for (Family f : ev) {
        const double theta = solve_asym_theta_for_tau(f, lambda, kappa, tau3);
        std::ostringstream label;
        label << "a-" << family_name(f) << "-tau20";
        out.push_back(
            {label.str(), CopulaModel{f, {theta}, Asymmetry{lambda, kappa}}, 3});
    }
    if (scale == Scale::Desk) {
        // Group 1 keeps all tau levels (matched pairs only, see below);
        // groups 2 and 3 are already small.
        return out;
    }
    return out;
}

}  // namespace

std::vector<Scenario> paper_suite(Scale scale, std::uint64_t master_seed) {
    const std::vector<Family> nulls = {Family::GumbelHougaard, Family::Galambos,
                                       Family::HuslerReiss, Family::TEV4};
    struct StatChoice {
        StatFamily statistic;
        EstimatorKind estimator;
    };
    const std::vector<StatChoice> stats = {{StatFamily::Tn, EstimatorKind::Cfg},
                                           {StatFamily::Sn, EstimatorKind::P},
                                           {StatFamily::Sn, EstimatorKind::Cfg}};
    const bool desk = scale == Scale::Desk;
    std::vector<Scenario> suite;
    for (const TrueSpec& spec : true_models(scale)) {
        for (Family h0 : nulls) {
            if (desk) {
                // Desk scale: matched null within group 1, Gumbel-Hougaard
                // null against groups 2 and 3.
                if (spec.group == 1 && h0 != spec.model.family) continue;
                if (spec.group != 1 && h0 != Family::GumbelHougaard) continue;
            }
            for (const StatChoice& st : stats) {
                Scenario s;
                s.true_model = spec.model;
                s.h0 = CopulaModel{h0, {}, std::nullopt};
                s.statistic = st.statistic;
                s.estimator = st.estimator;
                s.method = spec.group == 3 ? FitMethod::Mpl : FitMethod::ITau;
                s.n = desk ? (spec.group == 3 ? 300 : 150) : 300;
                s.bootstrap_n = desk ? 250 : 1000;
                s.reps = desk ? 200 : 1000;
                s.grid_m = desk ? 251 : 1001;
                s.seed = master_seed;
                s.workers = 0;
                std::ostringstream id;
                id << "group" << spec.group << "/" << spec.label << "/h0-" << family_name(h0)
                   << "/" << statistic_label(st.statistic, st.estimator);
                s.id = id.str();
                suite.push_back(std::move(s));
            }
        }
    }
    return suite;
}

std::vector<Scenario> filter_suite(const std::vector<Scenario>& suite, const std::string& only) {
    if (only.empty()) return suite;
    std::vector<std::string> wanted;
    std::stringstream ss(only);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token == "group1" || token == "group2" || token == "group3") {
            wanted.push_back(token + "/");
        } else if (token.find('/') != std::string::npos) {
            wanted.push_back(token);  // explicit scenario-id prefix
        } else {
            throw ConfigError("unknown suite filter '" + token + "'");
        }
    }
    std::vector<Scenario> out;
    for (const Scenario& s : suite) {
        for (const std::string& w : wanted) {
            if (s.id.rfind(w, 0) == 0) {
                out.push_back(s);
                break;
            }
        }
    }
    return out;
}

}  // namespace evgof
