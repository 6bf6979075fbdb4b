#include "evgof/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "evgof/errors.hpp"
#include "evgof/fit.hpp"
#include "evgof/gof.hpp"
#include "evgof/ltd.hpp"
#include "evgof/pickands.hpp"
#include "evgof/power.hpp"
#include "evgof/report.hpp"
#include "evgof/special.hpp"

namespace evgof {

namespace {

struct ModelToken {
    Family family;
    bool asym;
};

ModelToken parse_model_token(std::string token) {
    std::transform(token.begin(), token.end(), token.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    bool asym = false;
    if (token.rfind("a-", 0) == 0) {
        asym = true;
        token = token.substr(2);
    }
    static const std::vector<std::pair<std::string, Family>> names = {
        {"gh", Family::GumbelHougaard}, {"gumbel", Family::GumbelHougaard},
        {"galambos", Family::Galambos}, {"hr", Family::HuslerReiss},
        {"tev", Family::TEV4},          {"clayton", Family::Clayton},
        {"frank", Family::Frank},       {"normal", Family::Normal},
        {"plackett", Family::Plackett}, {"fgm", Family::FGM}};
    for (const auto& [name, family] : names) {
        if (token == name) {
            if (asym && !is_extreme_value(family)) {
                throw ConfigError("asymmetric variant requires an extreme-value base: " + token);
            }
            return {family, asym};
        }
    }
    throw ConfigError("unknown copula family '" + token + "'");
}

FitMethod parse_method(const std::string& method) {
    if (method == "itau") return FitMethod::ITau;
    if (method == "irho") return FitMethod::IRho;
    if (method == "mpl") return FitMethod::Mpl;
    throw ConfigError("unknown method '" + method + "'");
}

TiePolicy parse_ties(const std::string& ties) {
    if (ties == "reject") return TiePolicy::Reject;
    if (ties == "midrank") return TiePolicy::Midrank;
    throw ConfigError("unknown tie policy '" + ties + "'");
}

void parse_stat(const std::string& stat, StatFamily& family, EstimatorKind& estimator) {
    if (stat == "p") {
        family = StatFamily::Sn;
        estimator = EstimatorKind::P;
    } else if (stat == "cfg") {
        family = StatFamily::Sn;
        estimator = EstimatorKind::Cfg;
    } else if (stat == "tn") {
        family = StatFamily::Tn;
        estimator = EstimatorKind::Cfg;
    } else {
        throw ConfigError("unknown statistic '" + stat + "' (expected p, cfg or tn)");
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write to '" + path + "'");
    out << content;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (!token.empty()) out.push_back(token);
    }
    return out;
}

// --------------------------------------------------------------------------
// gof subcommand
// --------------------------------------------------------------------------

struct GofArgs {
    std::string input;
    std::string h0 = "gh";
    std::string stat = "cfg";
    std::string method = "itau";
    int bootstrap_n = 1000;
    int grid = 1001;
    std::uint64_t seed = 0;
    std::string ties = "reject";
    bool corrected = true;
    std::string out = "gof_report.json";
    int workers = 0;
};

int run_gof(const GofArgs& args) {
    const RawSample data = read_xy_csv_file(args.input);
    const TiePolicy ties = parse_ties(args.ties);
    const PseudoSample ps = pseudo_observations(data, ties);

    GofConfig cfg;
    parse_stat(args.stat, cfg.statistic, cfg.estimator);
    cfg.method = parse_method(args.method);
    cfg.corrected = args.corrected;
    cfg.bootstrap_n = args.bootstrap_n;
    cfg.grid_m = args.grid;
    cfg.seed = args.seed;
    cfg.workers = args.workers;
    cfg.ties = ties;

    ReportDocument doc;
    doc.seed = args.seed;
    doc.n = ps.size();
    doc.ties = ps.had_ties ? args.ties + "(applied)" : args.ties;

    for (const std::string& token : split_commas(args.h0)) {
        const ModelToken mt = parse_model_token(token);
        CopulaModel h0{mt.family, {}, std::nullopt};
        GofConfig model_cfg = cfg;
        if (mt.asym) {
            h0.asym = Asymmetry{0.5, 0.5};
            model_cfg.method = FitMethod::Mpl;  // several parameters
        }
        const GofResult res = bootstrap_test(ps, h0, model_cfg);
        ReportRow row;
        row.family = model_name(h0);
        row.asym = res.fitted.asym;
        row.method = method_name(model_cfg.method);
        row.statistic_kind = statistic_label(model_cfg.statistic, model_cfg.estimator);
        row.statistic = res.statistic;
        row.pvalue = res.pvalue;
        row.bootstrap_n = model_cfg.bootstrap_n;
        row.theta_hat = res.fitted.theta;
        if (res.fitted.asym) {
            row.theta_hat.push_back(res.fitted.asym->lambda);
            row.theta_hat.push_back(res.fitted.asym->kappa);
        }
        row.flags = gof_flag_names(res.flags);
        doc.results.push_back(std::move(row));
    }

    write_text_file(args.out, report_to_json(doc));
    std::cout << "n = " << doc.n << ", ties = " << doc.ties << ", seed = " << doc.seed << "\n";
    std::cout << "model      stat    statistic      p-value   theta\n";
    for (const ReportRow& row : doc.results) {
        std::ostringstream line;
        line << row.family;
        line << std::string(row.family.size() < 11 ? 11 - row.family.size() : 1, ' ');
        line << row.statistic_kind << (row.statistic_kind.size() < 6 ? "   " : " ");
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%10.5f  %10.4f   ", row.statistic, row.pvalue);
        line << buf;
        for (double th : row.theta_hat) line << format_g17(th).substr(0, 8) << " ";
        for (const std::string& f : row.flags) line << " [" << f << "]";
        std::cout << line.str() << "\n";
    }
    std::cout << "report written to " << args.out << "\n";
    return 0;
}

// --------------------------------------------------------------------------
// pickands subcommand
// --------------------------------------------------------------------------

struct PickandsArgs {
    std::string input;
    int grid = 1001;
    bool corrected = true;
    std::string fit_family;
    std::string method = "itau";
    std::string ties = "reject";
    std::string out = "pickands_curve.csv";
};

int run_pickands(const PickandsArgs& args) {
    if (args.grid < 2) throw ConfigError("--grid must be at least 2");
    const RawSample data = read_xy_csv_file(args.input);
    const PseudoSample ps = pseudo_observations(data, parse_ties(args.ties));
    const PickandsEstimator est_p(ps, EstimatorKind::P, args.corrected);
    const PickandsEstimator est_cfg(ps, EstimatorKind::Cfg, args.corrected);

    std::unique_ptr<const Copula> fitted;
    if (!args.fit_family.empty()) {
        const ModelToken mt = parse_model_token(args.fit_family);
        if (!is_extreme_value(mt.family)) {
            throw ConfigError("--fit requires an extreme-value family");
        }
        CopulaModel proto{mt.family, {}, std::nullopt};
        if (mt.asym) proto.asym = Asymmetry{0.5, 0.5};
        const FitMethod method = mt.asym ? FitMethod::Mpl : parse_method(args.method);
        fitted = make_copula(fit(proto, ps, method).model);
    }

    std::string csv = fitted ? "t,A_P,A_CFG,A_fit\n" : "t,A_P,A_CFG\n";
    const double h = 1.0 / (args.grid - 1);
    for (int j = 0; j < args.grid; ++j) {
        const double t = j * h;
        const double envelope = std::max(t, 1.0 - t);
        auto clamp_curve = [envelope](double a) { return std::clamp(a, envelope, 1.0); };
        csv += format_g17(t) + "," + format_g17(clamp_curve(est_p(t))) + "," +
               format_g17(clamp_curve(est_cfg(t)));
        if (fitted) csv += "," + format_g17(fitted->pickands()->A(t));
        csv += "\n";
    }
    write_text_file(args.out, csv);
    std::cout << "curve written to " << args.out << "\n";
    return 0;
}

// --------------------------------------------------------------------------
// power subcommand
// --------------------------------------------------------------------------

struct PowerArgs {
    std::string scale = "desk";
    std::string only;
    std::uint64_t seed = 0;
    std::string out = "power_out";
    int workers = 0;
    int reps_override = 0;
    int bootstrap_override = 0;
    int n_override = 0;
};

std::string scenario_file_name(const std::string& id) {
    std::string name = id;
    for (char& c : name) {
        if (c == '/' || c == ' ') c = '_';
    }
    return name + ".json";
}

int run_power(const PowerArgs& args) {
    Scale scale;
    if (args.scale == "desk") {
        scale = Scale::Desk;
    } else if (args.scale == "full") {
        scale = Scale::Full;
    } else {
        throw ConfigError("--scale must be desk or full");
    }
    std::vector<Scenario> suite = filter_suite(paper_suite(scale, args.seed), args.only);
    if (suite.empty()) throw ConfigError("no scenarios selected");
    for (Scenario& s : suite) {
        if (args.reps_override > 0) s.reps = args.reps_override;
        if (args.bootstrap_override > 0) s.bootstrap_n = args.bootstrap_override;
        if (args.n_override > 0) s.n = args.n_override;
        s.workers = args.workers;
    }
    std::filesystem::create_directories(args.out);
    std::vector<PowerRow> rows;
    for (const Scenario& s : suite) {
        const std::string path = args.out + "/" + scenario_file_name(s.id);
        if (std::filesystem::exists(path)) {
            std::ifstream in(path);
            std::stringstream buf;
            buf << in.rdbuf();
            rows.push_back(power_row_from_json(buf.str()));
            std::cerr << "resume " << s.id << "\n";
            continue;
        }
        const PowerRow row = run_scenario(s);
        write_text_file(path, power_row_to_json(row));
        std::cerr << s.id << ": rate " << row.rejection_rate << " (se " << row.mc_stderr
                  << ", " << row.mean_runtime_ms << " ms/rep)\n";
        rows.push_back(row);
    }
    write_text_file(args.out + "/power_table.csv", power_rows_to_csv(rows));
    write_text_file(args.out + "/power_table.json", power_rows_to_json(rows));
    std::cout << "power tables written to " << args.out << "\n";
    return 0;
}

// --------------------------------------------------------------------------
// sample subcommand
// --------------------------------------------------------------------------

struct SampleArgs {
    std::string family = "gh";
    double theta = std::numeric_limits<double>::quiet_NaN();
    double tau = std::numeric_limits<double>::quiet_NaN();
    double lambda = std::numeric_limits<double>::quiet_NaN();
    double kappa = std::numeric_limits<double>::quiet_NaN();
    std::size_t n = 100;
    std::uint64_t seed = 0;
    std::string margins = "uniform";
    std::string out = "sample.csv";
};

int run_sample(const SampleArgs& args) {
    const ModelToken mt = parse_model_token(args.family);
    CopulaModel model{mt.family, {}, std::nullopt};
    if (mt.asym) {
        if (std::isnan(args.lambda) || std::isnan(args.kappa)) {
            throw ConfigError("asymmetric families need --lambda and --kappa");
        }
        model.asym = Asymmetry{args.lambda, args.kappa};
    }
    const bool has_theta = !std::isnan(args.theta);
    const bool has_tau = !std::isnan(args.tau);
    if (has_theta == has_tau) {
        throw ConfigError("specify exactly one of --theta and --tau");
    }
    if (has_theta) {
        model.theta = {args.theta};
    } else if (mt.asym) {
        model.theta = {solve_asym_theta_for_tau(mt.family, args.lambda, args.kappa, args.tau)};
    } else {
        model.theta = {theta_of_tau(mt.family, args.tau)};
    }
    if (args.n < 1) throw ConfigError("--n must be positive");

    auto transform = [&args](double u) {
        if (args.margins == "uniform") return u;
        if (args.margins == "normal") return norm_quantile(u);
        if (args.margins == "exponential") return -std::log1p(-u);
        throw ConfigError("unknown margins '" + args.margins + "'");
    };
    const auto pairs = sample(model, args.n, args.seed);
    std::string csv = args.margins == "uniform" ? "u,v\n" : "x,y\n";
    for (const auto& [u, v] : pairs) {
        csv += format_g17(transform(u)) + "," + format_g17(transform(v)) + "\n";
    }
    write_text_file(args.out, csv);
    std::cout << args.n << " pairs written to " << args.out << "\n";
    return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"Goodness-of-fit tests for bivariate extreme-value copulas"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    GofArgs gof_args;
    CLI::App* gof_cmd = app.add_subcommand("gof", "test null copula families on (x,y) data");
    gof_cmd->add_option("input", gof_args.input, "two-column CSV of raw observations")
        ->required();
    gof_cmd->add_option("--h0", gof_args.h0, "comma list of null families (e.g. gh,a-galambos)");
    gof_cmd->add_option("--stat", gof_args.stat, "statistic: p, cfg or tn");
    gof_cmd->add_option("--method", gof_args.method, "estimator: itau, irho or mpl");
    gof_cmd->add_option("--N", gof_args.bootstrap_n, "bootstrap sample count");
    gof_cmd->add_option("--grid", gof_args.grid, "quadrature grid size");
    gof_cmd->add_option("--seed", gof_args.seed, "master seed");
    gof_cmd->add_option("--ties", gof_args.ties, "tie policy: reject or midrank");
    gof_cmd->add_option("--corrected", gof_args.corrected, "end-point-corrected estimators");
    gof_cmd->add_option("--out", gof_args.out, "JSON report path");
    gof_cmd->add_option("--workers", gof_args.workers, "worker threads (0 = all)");

    PickandsArgs pick_args;
    CLI::App* pick_cmd = app.add_subcommand("pickands", "export estimated Pickands curves");
    pick_cmd->add_option("input", pick_args.input, "two-column CSV of raw observations")
        ->required();
    pick_cmd->add_option("--grid", pick_args.grid, "number of grid points");
    pick_cmd->add_option("--corrected", pick_args.corrected, "end-point-corrected estimators");
    pick_cmd->add_option("--fit", pick_args.fit_family, "overlay a fitted family");
    pick_cmd->add_option("--method", pick_args.method, "fit method for --fit");
    pick_cmd->add_option("--ties", pick_args.ties, "tie policy: reject or midrank");
    pick_cmd->add_option("--out", pick_args.out, "CSV output path");

    PowerArgs power_args;
    CLI::App* power_cmd = app.add_subcommand("power", "run the simulation study grid");
    power_cmd->add_option("--scale", power_args.scale, "desk or full");
    power_cmd->add_option("--only", power_args.only, "subset: group1,group2,group3");
    power_cmd->add_option("--seed", power_args.seed, "master seed");
    power_cmd->add_option("--out", power_args.out, "output directory (resumable)");
    power_cmd->add_option("--workers", power_args.workers, "worker threads (0 = all)");
    power_cmd->add_option("--reps", power_args.reps_override, "override repetitions");
    power_cmd->add_option("--N", power_args.bootstrap_override, "override bootstrap count");
    power_cmd->add_option("--n", power_args.n_override, "override sample size");

    SampleArgs sample_args;
    CLI::App* sample_cmd = app.add_subcommand("sample", "draw pairs from a copula model");
    sample_cmd->add_option("--family", sample_args.family, "family token (e.g. gh, a-galambos)");
    sample_cmd->add_option("--theta", sample_args.theta, "parameter value");
    sample_cmd->add_option("--tau", sample_args.tau, "target Kendall tau");
    sample_cmd->add_option("--lambda", sample_args.lambda, "asymmetry lambda in (0,1)");
    sample_cmd->add_option("--kappa", sample_args.kappa, "asymmetry kappa in (0,1)");
    sample_cmd->add_option("--n", sample_args.n, "number of pairs");
    sample_cmd->add_option("--seed", sample_args.seed, "seed");
    sample_cmd->add_option("--margins", sample_args.margins, "uniform, normal or exponential");
    sample_cmd->add_option("--out", sample_args.out, "CSV output path");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gof_cmd->parsed()) return run_gof(gof_args);
        if (pick_cmd->parsed()) return run_pickands(pick_args);
        if (power_cmd->parsed()) return run_power(power_args);
        if (sample_cmd->parsed()) return run_sample(sample_args);
        return 2;
    } catch (const TieError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}

int cli_main(int argc, char** argv) {
    std::vector<std::string> args;
    args.reserve(static_cast<std::size_t>(argc > 0 ? argc - 1 : 0));
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return cli_main(args);
}

}  // namespace evgof
