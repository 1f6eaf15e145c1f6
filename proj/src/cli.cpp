#include "mixrate/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>

#include "mixrate/config.hpp"
#include "mixrate/coupling.hpp"
#include "mixrate/errors.hpp"
#include "mixrate/hyperbolic_bounds.hpp"
#include "mixrate/report.hpp"
#include "mixrate/transfer.hpp"

namespace mixrate {

namespace {

constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

std::string out_path(const RunConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.output) / name).string();
}

void announce(const std::string& path) { std::cout << "wrote " << path << '\n'; }

Json certificate_json(const DecayCertificate& c) {
    Json j;
    j["lambda"] = c.lambda;
    j["K"] = c.K;
    j["eta"] = c.eta;
    j["R"] = c.R;
    j["xi"] = c.xi;
    j["C"] = c.C;
    j["gamma"] = c.gamma;
    j["degenerate"] = c.degenerate;
    j["source"] = c.source;
    if (c.R > 0.0 && c.xi > 0.0) j["slack"] = validate_constants(c.lambda, c.K, c.eta, c.R, c.xi).slack;
    return j;
}

Json law_json(const TailLaw& l) {
    Json j;
    j["kind"] = l.name();
    j["C_tau"] = l.C_tau;
    if (l.kind == TailLaw::Kind::Polynomial) {
        j["beta"] = l.beta;
    } else if (l.kind == TailLaw::Kind::Stretched) {
        j["A"] = l.A;
        j["gamma"] = l.gamma;
    }
    return j;
}

Json tail_bound_json(const TailBound& b) {
    Json j;
    j["kind"] = b.kind == TailBound::Kind::Polynomial ? "polynomial" : "stretched";
    j["N"] = b.N;
    j["p_minus1"] = b.p_minus1;
    j["R"] = b.R;
    j["C_tau"] = b.C_tau;
    if (b.kind == TailBound::Kind::Polynomial) {
        j["beta"] = b.beta;
        j["C1"] = b.C1;
        j["series"] = b.series;
        j["C1prime"] = b.C1prime;
    } else {
        j["A"] = b.A;
        j["gamma"] = b.gamma;
        j["C_Agamma"] = b.C_Agamma;
        j["c_w"] = b.c_w;
        j["C1"] = b.C1;
        j["B"] = b.B;
        j["r"] = b.r;
        j["Cprime"] = b.Cprime;
    }
    j["final_C"] = b.final_C;
    j["final_B"] = b.final_B;
    return j;
}

Json tower_json(const TowerSpec& s) {
    const auto& tc = s.constants;
    Json j;
    j["certificate"] = certificate_json(s.cert);
    j["R"] = tc.R;
    j["xi"] = tc.xi;
    j["tau_bar"] = s.tau_bar;
    j["d"] = s.d;
    j["I"] = tc.I_set;
    j["delta"] = tc.delta;
    j["N1"] = tc.N1;
    j["N2"] = tc.N2;
    j["N"] = tc.N;
    j["eps"] = tc.eps;
    j["log_eps"] = tc.log_eps;
    j["p_minus1"] = tc.p_minus1;
    j["p0"] = tc.p0;
    j["p1"] = tc.p(1);
    j["p_total"] = tc.total_mass();
    j["declared_law"] = law_json(s.declared_law);
    j["law"] = law_json(s.law);
    j["L_max"] = s.L_max;
    j["levels"] = s.levels;
    j["omitted_mass"] = s.omitted_mass;
    j["level_masses"] = s.level_masses;
    return j;
}

TowerSpec build_from(const RunConfig& cfg, const Json& doc) {
    TowerConfig t = parse_tower(doc);
    if (cfg.R_floor) t.options.R_floor = *cfg.R_floor;
    if (cfg.L_max) t.options.L_max = *cfg.L_max;
    if (cfg.n_max) t.options.n_max = *cfg.n_max;
    if (!doc.contains("cells")) t.options.cells = cfg.cells;
    return build_tower(t.base, t.tau, t.law, t.options);
}

double r_floor(const RunConfig& cfg) { return cfg.R_floor.value_or(0.1); }

DecayCertificate map_certificate(const RunConfig& cfg, const Json& doc, const MapSpec& m) {
    if (doc.contains("R")) return override_certificate(m.lambda, m.K, m.eta, doc.at("R").get<double>());
    return tower_certificate(m.lambda, m.K, m.eta, r_floor(cfg));
}

GridObservable observable_from(const Json& doc, int cells, double eta) {
    if (doc.contains("observable")) return parse_observable(doc.at("observable"), cells, eta);
    return GridObservable::sample(cells, [](double x) { return x - 0.5; }, eta);
}

// --- subcommands ---

void cmd_certificate(const RunConfig& cfg) {
    DecayCertificate c = cfg.R_floor ? override_certificate(cfg.lambda, cfg.K, cfg.eta, *cfg.R_floor)
                                     : ue_certificate(cfg.lambda, cfg.K, cfg.eta);
    if (!c.degenerate && !validate_constants(c.lambda, c.K, c.eta, c.R, c.xi).ok)
        throw InvalidParameter("certificate fails the (R, xi) constraint");
    const Json j = certificate_json(c);
    std::cout << to_json(j);
    emit_report(j, out_path(cfg, "certificate.json"));
}

void cmd_decay_ue(const RunConfig& cfg) {
    const Json doc = read_json_file(cfg.input);
    const MapSpec m = parse_map(doc.at("map"));
    const DecayCertificate c = map_certificate(cfg, doc, m);
    const GridObservable phi = observable_from(doc, cfg.cells, m.eta);
    if (std::abs(integrate(phi)) > 1e-10) throw NotMeanZero("decay-ue needs a Lebesgue mean-zero observable");
    const int steps = get_or(doc, "steps", 20);
    const double ceiling = get_or(doc, "budget_ceiling", 1.0);
    const TransferOperator op(m, cfg.cells);
    const double semi0 = holder_seminorm(phi, m.eta);
    CsvTable t{{"n", "sup_norm", "holder_seminorm", "certificate_bound", "error_budget"}, {}};
    t.rows.push_back({0.0, sup_norm(phi), semi0, c.C * semi0, phi.error_budget});
    for (int n = 1; n <= steps; ++n) {
        const GridObservable g = op.apply_n(phi, n, ceiling);
        t.rows.push_back({double(n), sup_norm(g), holder_seminorm(g, m.eta), c.C * std::pow(c.gamma, n) * semi0,
                          g.error_budget});
    }
    emit_report(t, out_path(cfg, "decay_ue.csv"));
    announce(out_path(cfg, "decay_ue.csv"));
}

void cmd_invariant_density(const RunConfig& cfg) {
    const Json doc = read_json_file(cfg.input);
    const MapSpec m = parse_map(doc.contains("map") ? doc.at("map") : doc);
    const DecayCertificate c = ue_certificate(m.lambda, m.K, m.eta);
    const TransferOperator op(m, cfg.cells);
    const DensityResult d = invariant_density(op, cfg.tolerance.value_or(1e-8));
    CsvTable t{{"x", "rho"}, {}};
    for (int i = 0; i < d.rho.nodes(); ++i) t.rows.push_back({d.rho.x(i), d.rho.values[i]});
    const auto [lo, hi] = std::minmax_element(d.rho.values.begin(), d.rho.values.end());
    const double slack = 1e-9 + d.rho.error_budget;
    Json j;
    j["R"] = c.R;
    j["iterations"] = d.iterations;
    j["residual"] = d.residual;
    j["integral"] = integrate(d.rho);
    j["min"] = *lo;
    j["max"] = *hi;
    j["lower"] = std::exp(-c.R);
    j["upper"] = std::exp(c.R);
    j["error_budget"] = d.rho.error_budget;
    j["sandwich"] = *lo >= std::exp(-c.R) - slack && *hi <= std::exp(c.R) + slack;
    emit_report(t, out_path(cfg, "density.csv"));
    emit_report(j, out_path(cfg, "density.json"));
    std::cout << to_json(j);
}

void cmd_coupling_trace(const RunConfig& cfg) {
    const Json doc = read_json_file(cfg.input);
    const MapSpec m = parse_map(doc.at("map"));
    const DecayCertificate c = map_certificate(cfg, doc, m);
    const GridObservable phi = observable_from(doc, cfg.cells, m.eta);
    const CouplingTrace tr = run_coupling(m, c, phi, get_or(doc, "steps", 20));
    CsvTable t{{"step", "mass_plus", "mass_minus", "lhs_seminorm_plus", "lhs_seminorm_minus", "sup_bound",
                "holder_bound"},
               {}};
    for (const auto& r : tr.steps)
        t.rows.push_back({double(r.n), r.mass_plus, r.mass_minus, r.log_seminorm_plus, r.log_seminorm_minus,
                          r.sup_bound, r.holder_bound});
    Json j;
    j["R"] = tr.R;
    j["xi"] = tr.xi;
    j["gamma"] = tr.gamma;
    j["scale"] = tr.scale;
    j["final_difference_seminorm"] = tr.steps.back().difference_seminorm;
    j["final_raw_holder_bound"] = tr.raw_holder_bound(static_cast<int>(tr.steps.size()) - 1);
    emit_report(t, out_path(cfg, "coupling.csv"));
    emit_report(j, out_path(cfg, "coupling.json"));
    std::cout << to_json(j);
}

void write_tower(const RunConfig& cfg, const TowerSpec& s, const std::string& stem) {
    const Json j = tower_json(s);
    CsvTable t{{"n", "t", "p"}, {}};
    const auto& tc = s.constants;
    t.rows.push_back({-1.0, kUndefined, tc.p_minus1});
    t.rows.push_back({0.0, kUndefined, tc.p0});
    for (long n = 1; n <= tc.horizon(); ++n) t.rows.push_back({double(n), tc.t(n), tc.p(n)});
    emit_report(j, out_path(cfg, stem + ".json"));
    emit_report(t, out_path(cfg, stem + "_sequences.csv"));
    std::cout << to_json(j);
}

void cmd_tower(const RunConfig& cfg) {
    const TowerSpec s = build_from(cfg, read_json_file(cfg.input));
    write_tower(cfg, s, "tower");
}

// rows n, measured, bound, budget; the bound column is empty where it does not apply yet
CsvTable tower_decay_table(const TowerSpec& s, long steps) {
    const TowerObservable phi = tower_base_indicator_centred(s);
    const double norm = tower_norm(s, phi);
    CsvTable t{{"n", "measured", "bound", "budget"}, {}};
    const long N = s.constants.N;
    if (s.mixing()) {
        for (const auto& p : measure_decay(s, phi, steps))
            t.rows.push_back({double(p.n), p.measured, p.n >= N ? tower_decay_bound(s, norm, p.n) : kUndefined,
                              p.budget});
        return t;
    }
    // nonmixing: int |sum_{k<d} L^{nd+k} phi|
    const auto pts = measure_decay(s, phi, 0);
    const double columns = pts[0].budget - phi.error_budget;
    TowerObservable cur = phi;
    for (long n = 0; n <= steps; ++n) {
        TowerObservable sum = cur;
        double budget = cur.error_budget;
        for (int k = 1; k < s.d; ++k) {
            cur = tower_apply(s, cur);
            budget += cur.error_budget;
            for (size_t l = 0; l < sum.levels.size(); ++l)
                for (size_t i = 0; i < sum.levels[l].size(); ++i) sum.levels[l][i] += cur.levels[l][i];
        }
        t.rows.push_back({double(n), tower_l1(s, sum), nonmixing_bound(s, norm, n), budget + s.d * columns});
        cur = tower_apply(s, cur);
    }
    return t;
}

void cmd_tower_decay(const RunConfig& cfg) {
    const Json doc = read_json_file(cfg.input);
    const TowerSpec s = build_from(cfg, doc);
    const long steps = get_or<long>(doc, "steps", s.constants.N + 50);
    emit_report(tower_decay_table(s, steps), out_path(cfg, "tower_decay.csv"));
    announce(out_path(cfg, "tower_decay.csv"));
}

CsvTable tail_table(const PSequence& pseq, const TailBound& b, long samples, long n_max, std::uint64_t seed) {
    const EmpiricalTail e = sample_h(pseq, samples, seed, n_max);
    CsvTable t{{"n", "empirical_tail", "wilson_upper", "analytic_bound"}, {}};
    // the bound is stated for P(h >= n); P(h > n) = P(h >= n+1)
    for (long n = 0; n <= n_max; ++n) t.rows.push_back({double(n), e.tail[n], e.wilson_upper[n], b(n + 1.0)});
    return t;
}

void cmd_tail(const RunConfig& cfg) {
    const Json doc = read_json_file(cfg.input);
    const long samples = get_or<long>(doc, "samples", 1000000);
    const long n_max = get_or<long>(doc, "n_max", 200);
    PSequence pseq;
    TailBound b;
    if (doc.contains("tower")) {
        const TowerSpec s = build_from(cfg, doc.at("tower"));
        auto tb = tower_tail_bound(s);
        if (!tb) throw InvalidParameter("tower constants underflow; no finite tail bound");
        pseq = PSequence::from_tower(s.constants);
        b = *tb;
    } else {
        const PSequenceConfig pc = parse_pseq(doc.at("pseq"));
        pseq = pc.pseq;
        if (pc.q) {
            std::vector<double> p{pseq.p0};
            p.insert(p.end(), pseq.p.begin(), pseq.p.end());
            coupling_matrix(p, *pc.q);
        }
        const TailLaw law = parse_law(doc.at("law"));
        b = law.kind == TailLaw::Kind::Polynomial
                ? poly_tail_bound(law.C_tau, law.beta, pc.R, pseq.N, pseq.p_minus1)
                : stretched_tail_bound(law.C_tau, law.A, law.gamma, pc.R, pseq.N, pseq.p_minus1);
    }
    emit_report(tail_table(pseq, b, samples, n_max, cfg.seed), out_path(cfg, "tail.csv"));
    const Json j = tail_bound_json(b);
    emit_report(j, out_path(cfg, "tail_bound.json"));
    std::cout << to_json(j);
}

void cmd_nuh_bound(const RunConfig& cfg) {
    const Json doc = read_json_file(cfg.input);
    NUHInput in;
    in.nuh = parse_nuh(doc.at("nuh"));
    in.eta = in.nuh.eta;
    in.tau_law = parse_law(doc.at("law"));
    in.tau_bar = doc.at("tau_bar").get<double>();
    const Json& q = doc.at("quotient");
    if (q.contains("base") || q.contains("preset")) {
        const TowerSpec s = build_from(cfg, q);
        auto tb = tower_tail_bound(s);
        if (!tb) throw InvalidParameter("quotient tower constants underflow; no finite tail bound");
        in.quotient_tail = *tb;
    } else {
        const TailLaw ql = q.contains("law") ? parse_law(q.at("law")) : in.tau_law;
        const double R = q.at("R").get<double>(), p = q.at("p_minus1").get<double>();
        const long N = q.at("N").get<long>();
        in.quotient_tail = ql.kind == TailLaw::Kind::Polynomial
                               ? poly_tail_bound(ql.C_tau, ql.beta, R, N, p)
                               : stretched_tail_bound(ql.C_tau, ql.A, ql.gamma, R, N, p);
    }
    const double v = get_or(doc, "v_norm", 1.0), w = get_or(doc, "w_norm", 1.0);
    std::vector<long> ns;
    if (doc.contains("n_values")) {
        ns = doc.at("n_values").get<std::vector<long>>();
    } else {
        const long lo = get_or<long>(doc, "n_min", 10), hi = get_or<long>(doc, "n_max", 10000),
                   step = get_or<long>(doc, "step", 10);
        if (step < 1) throw InvalidParameter("step must be positive");
        for (long n = lo; n <= hi; n += step) ns.push_back(n);
    }
    CsvTable t{{"n", "kappa_term", "tower_term", "total_bound"}, {}};
    for (long n : ns) {
        const NUHBoundTerms b = nuh_bound_terms(in, v, w, n);
        t.rows.push_back({double(n), b.kappa_term, b.tower_term, b.total});
    }
    const KappaConstants kc = kappa_constants(in);
    Json j;
    j["K"] = in.nuh.K;
    j["theta"] = in.nuh.theta;
    j["K0"] = in.nuh.K0;
    j["eta"] = in.nuh.eta;
    j["rho"] = in.nuh.rho;
    j["K1"] = in.nuh.K1;
    j["K2"] = in.nuh.K2;
    if (in.tau_law.kind == TailLaw::Kind::Polynomial) {
        j["C2"] = kc.C2;
    } else {
        j["B"] = kc.B;
        j["C1"] = kc.C1;
        j["rate_shrunk"] = kc.rate_shrunk;
    }
    j["quotient_tail"] = tail_bound_json(in.quotient_tail);
    emit_report(t, out_path(cfg, "nuh.csv"));
    emit_report(j, out_path(cfg, "nuh.json"));
    std::cout << to_json(j);
}

Json golden_tower_doc(bool formal) {
    Json j;
    j["base"] = Json{{"preset", "doubling"}};
    j["tau"] = {1, 2};
    j["law"] = Json{{"kind", "polynomial"}, {"C_tau", 1.0}, {"beta", 2.0}};
    if (formal)
        j["formal_zero_R"] = true;
    else
        j["R"] = 0.1;
    j["cells"] = 1024;
    return j;
}

// every defined bound entry must dominate the measured one
bool dominates(const CsvTable& t, size_t measured, size_t bound) {
    for (const auto& r : t.rows)
        if (!std::isnan(r[bound]) && r[measured] > r[bound]) return false;
    return true;
}

void cmd_demo(const RunConfig& cfg) {
    const DecayCertificate c = ue_certificate(2.0, 1.0, 1.0);
    emit_report(certificate_json(c), out_path(cfg, "demo_certificate.json"));

    const TowerSpec golden = build_from(cfg, golden_tower_doc(true));
    std::cout << "golden tower constants\n";
    write_tower(cfg, golden, "demo_tower");

    const TowerSpec g1 = build_from(cfg, golden_tower_doc(false));
    const CsvTable decay = tower_decay_table(g1, g1.constants.N + 50);
    emit_report(decay, out_path(cfg, "demo_tower_decay.csv"));

    auto tb = tower_tail_bound(g1);
    if (!tb) throw InternalError("golden tower has no tail bound");
    const CsvTable tail = tail_table(PSequence::from_tower(g1.constants), *tb, 200000, 200, cfg.seed);
    emit_report(tail, out_path(cfg, "demo_tail.csv"));

    const bool ok = dominates(decay, 1, 2) && dominates(tail, 2, 3);
    std::cout << "cross-file dominance: " << (ok ? "ok" : "violated") << '\n';
    if (!ok) throw InternalError("an analytic bound fell below its measured column");
}

}  // namespace

void validate_run_config(const RunConfig& cfg) {
    if (cfg.output.empty()) throw InvalidParameter("output path is empty");
    const bool needs_input = cfg.subcommand != "certificate" && cfg.subcommand != "demo";
    if (needs_input && cfg.input.empty()) throw InvalidParameter("subcommand '" + cfg.subcommand + "' needs --config");
    const int m = cfg.cells;
    if (m < (1 << 8) || m > (1 << 18) || (m & (m - 1)) != 0)
        throw InvalidParameter("grid size must be a power of two in [2^8, 2^18]");
}

void run_subcommand(const RunConfig& cfg) {
    validate_run_config(cfg);
    std::filesystem::create_directories(cfg.output);
    const std::string& s = cfg.subcommand;
    if (s == "certificate") return cmd_certificate(cfg);
    if (s == "decay-ue") return cmd_decay_ue(cfg);
    if (s == "invariant-density") return cmd_invariant_density(cfg);
    if (s == "coupling-trace") return cmd_coupling_trace(cfg);
    if (s == "tower") return cmd_tower(cfg);
    if (s == "tower-decay") return cmd_tower_decay(cfg);
    if (s == "tail") return cmd_tail(cfg);
    if (s == "nuh-bound") return cmd_nuh_bound(cfg);
    if (s == "demo") return cmd_demo(cfg);
    throw InvalidParameter("unknown subcommand '" + s + "'");
}

int run(const RunConfig& cfg) {
    try {
        run_subcommand(cfg);
        return 0;
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return static_cast<int>(e.error_class());
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "IOError: " << e.what() << '\n';
        return static_cast<int>(ErrorClass::Numerical);
    } catch (const std::exception& e) {
        std::cerr << "InternalError: " << e.what() << '\n';
        return static_cast<int>(ErrorClass::Internal);
    }
}

int cli_main(int argc, char** argv) {
    CLI::App app{"mixrate: explicit decay-of-correlations constants and bounds"};
    app.require_subcommand(1, 1);
    RunConfig cfg;
    const char* env = std::getenv("MIXRATE_OUTPUT_DIR");
    cfg.output = env && *env ? env : ".";

    auto common = [&](CLI::App* sub) {
        sub->add_option("-o,--out", cfg.output, "output directory");
        sub->add_option("-M,--cells", cfg.cells, "grid size (power of two, 2^8..2^18)");
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--r-floor", cfg.R_floor, "R used when the default certificate is degenerate");
        sub->add_option("--l-max", cfg.L_max, "tower truncation level");
        sub->add_option("--n-max", cfg.n_max, "sequence horizon");
        sub->add_option("--tol", cfg.tolerance, "fixed-point tolerance");
    };
    auto* cert = app.add_subcommand("certificate", "decay certificate for (lambda, K, eta)");
    common(cert);
    cert->add_option("--lambda", cfg.lambda)->required();
    cert->add_option("--K", cfg.K)->required();
    cert->add_option("--eta", cfg.eta)->required();
    const std::pair<const char*, const char*> with_input[] = {
        {"decay-ue", "transfer-operator decay against the certificate bound"},
        {"invariant-density", "invariant density and its e^{-R}..e^R sandwich"},
        {"coupling-trace", "step-by-step coupling trace"},
        {"tower", "tower constants and p/t sequences"},
        {"tower-decay", "measured tower decay against the analytic bound"},
        {"tail", "Monte Carlo tail of h against the analytic tail bound"},
        {"nuh-bound", "correlation bound for the hyperbolic pipeline"},
    };
    for (const auto& [name, help] : with_input) {
        auto* sub = app.add_subcommand(name, help);
        common(sub);
        sub->add_option("-c,--config", cfg.input, "config document (JSON)")->required();
    }
    common(app.add_subcommand("demo", "golden examples end to end"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ErrorClass::Config);
    }
    cfg.subcommand = app.get_subcommands().front()->get_name();
    return run(cfg);
}

}  // namespace mixrate
