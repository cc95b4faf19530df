#include "frozen/cli.hpp"

#include <CLI11.hpp>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <mutex>
#include <sstream>
#include <thread>

#include "frozen/analytic.hpp"
#include "frozen/bethe.hpp"
#include "frozen/coarsen.hpp"
#include "frozen/forcing.hpp"
#include "frozen/graphgen.hpp"
#include "frozen/hessian.hpp"
#include "frozen/isalg.hpp"

namespace frozen::cli {

using json = nlohmann::ordered_json;

namespace {

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
};

std::string format_number(double x) {
    if (!std::isfinite(x)) throw std::runtime_error("non-finite value in output");
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

std::string csv_field(const json& v) {
    std::string s;
    if (v.is_null()) return s;
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return format_number(v.get<double>());
    s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

void write_csv(std::ostream& os, const Table& t) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
    os << "\r\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
        os << "\r\n";
    }
}

json finite(double x) {
    if (!std::isfinite(x)) throw std::runtime_error("non-finite value in output");
    return x;
}

json finite_array(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(finite(x));
    return a;
}

json law_json(const Law& l) { return finite_array(std::vector<double>(l.begin(), l.end())); }

json table_json(const Table& t) {
    json rows = json::array();
    for (const auto& r : t.rows) {
        json o = json::object();
        for (std::size_t i = 0; i < r.size(); ++i) o[t.columns[i]] = r[i];
        rows.push_back(o);
    }
    return rows;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

struct Output {
    std::string format;  // empty = command default
    std::string out_path;
};

struct Result {
    Table table;
    json object;  // used by object-shaped commands
    bool is_object = false;
    int exit_code = kExitOk;
};

int emit(const Result& r, const std::string& command, const json& params, const Output& o, const std::string& def_format,
         std::ostream& out, std::ostream& err) {
    const std::string fmt = o.format.empty() ? def_format : o.format;
    json manifest = {{"command", command},
                     {"parameters", params},
                     {"seed", params.contains("seed") ? params["seed"] : json(nullptr)},
                     {"artifact_version", kVersion},
                     {"csv_schema_version", kCsvSchemaVersion},
                     {"rng", kRngAlgorithm},
                     {"timestamp", utc_timestamp()}};
    std::ostringstream body;
    if (fmt == "csv") {
        Table t = r.table;
        if (r.is_object) {
            t.columns.clear();
            t.rows.assign(1, {});
            for (auto it = r.object.begin(); it != r.object.end(); ++it) {
                if (it.value().is_array()) {
                    for (std::size_t i = 0; i < it.value().size(); ++i) {
                        t.columns.push_back(it.key() + "_" + std::to_string(i));
                        t.rows[0].push_back(it.value()[i]);
                    }
                } else {
                    t.columns.push_back(it.key());
                    t.rows[0].push_back(it.value());
                }
            }
        }
        write_csv(body, t);
    } else {
        json doc = {{"manifest", manifest}};
        if (r.is_object) {
            for (auto it = r.object.begin(); it != r.object.end(); ++it) doc[it.key()] = it.value();
        } else {
            doc["columns"] = r.table.columns;
            doc["rows"] = table_json(r.table);
        }
        body << doc.dump(2) << '\n';
    }
    if (o.out_path.empty()) {
        out << body.str();
    } else {
        std::ofstream f(o.out_path, std::ios::binary);
        if (!f) {
            err << "error: cannot open " << o.out_path << '\n';
            return kExitError;
        }
        f << body.str();
        std::ofstream m(o.out_path + ".manifest.json");
        m << manifest.dump(2) << '\n';
    }
    return r.exit_code;
}

int worker_count() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("FROZEN_THRESHOLD_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) n = v;
    }
    return std::max(1, n);
}

Result cmd_thresholds(const std::vector<int>& ds, const std::vector<double>& ns, std::ostream& err) {
    Result r;
    r.table.columns = {"d", "n", "alpha_fm", "alpha_fm_tilde", "alpha_star", "lambda_star", "q_star", "c_star",
                       "mis_location", "alpha_lbd", "alpha_ubd", "in_proven_regime", "residual"};
    for (int d : ds) {
        if (d < kMinConfigDegree) {
            err << "warning: d=" << d << " is below " << kMinConfigDegree
                << "; outside proven regime (d >= d0 unknown)\n";
            r.exit_code = kExitRegime;
        }
        ThresholdSummary s;
        try {
            s = threshold_summary(d);
        } catch (const RegimeError& e) {
            err << "warning: " << e.what() << '\n';
            r.exit_code = kExitRegime;
            continue;
        }
        if (!s.in_proven_regime)
            err << "note: d=" << d << " alpha_star=" << format_number(s.alpha_star)
                << " lies outside the proven interval [" << format_number(s.alpha_lbd) << ", "
                << format_number(s.alpha_ubd) << "]\n";
        std::vector<double> n_list = ns;
        if (n_list.empty()) n_list.push_back(std::nan(""));
        for (double n : n_list) {
            const bool has_n = !std::isnan(n);
            r.table.rows.push_back({d, has_n ? json(n) : json(nullptr), finite(s.alpha_fm), finite(s.alpha_fm_tilde),
                                    finite(s.alpha_star), finite(s.lambda_star), finite(s.q_star), finite(s.c_star),
                                    has_n ? finite(s.mis_location(n)) : json(nullptr), finite(s.alpha_lbd),
                                    finite(s.alpha_ubd), s.in_proven_regime, finite(s.residual)});
        }
    }
    return r;
}

Result cmd_curve(int d, double amin, double amax, int points, std::ostream& err) {
    Result r;
    if (d < kMinConfigDegree) {
        err << "warning: d=" << d << " is below " << kMinConfigDegree << "; outside proven regime (d >= d0 unknown)\n";
        r.exit_code = kExitRegime;
    }
    r.table.columns = {"d", "alpha", "phi_indep", "phi_star", "lambda", "q", "in_proven_regime", "residual"};
    for (int i = 0; i < points; ++i) {
        const double a = points == 1 ? amin : amin + (amax - amin) * i / (points - 1.0);
        std::vector<json> row = {d, finite(a), finite(phi_indep(d, a))};
        try {
            const QAlpha qa = q_of_alpha(d, a);
            row.insert(row.end(), {finite(phi_star(d, a)), finite(qa.lambda), finite(qa.q), qa.in_proven_regime,
                                   finite(qa.residual)});
        } catch (const RegimeError&) {
            row.insert(row.end(), {nullptr, nullptr, nullptr, false, nullptr});
        }
        r.table.rows.push_back(std::move(row));
    }
    return r;
}

Result cmd_bethe(int d, double lambda, std::ostream& err) {
    Result r;
    r.is_object = true;
    if (d < kMinConfigDegree) {
        err << "warning: d=" << d << " is below " << kMinConfigDegree << "; outside proven regime (d >= d0 unknown)\n";
        r.exit_code = kExitRegime;
    }
    const BetheSolution s = symmetric_solution(d, lambda);
    const EmpiricalMeasure m = empirical_measure(d, lambda, s);
    const FreeEnergy fe = bethe_free_energy(d, m, lambda);
    const double res = law_distance(bp_step(d, lambda, s), s);
    r.object = {{"d", d},
                {"lambda", finite(lambda)},
                {"alphabet", {"00", "01", "0f", "10", "11", "1f", "f0", "f1", "ff"}},
                {"h_hat", law_json(s.h_hat)},
                {"h_dot", law_json(s.h_dot)},
                {"z_dot", finite(s.z_dot)},
                {"z_hat", finite(s.z_hat)},
                {"phi", finite(fe.long_form)},
                {"alpha", finite(fe.alpha)},
                {"phi_star", finite(fe.phi_star)},
                {"edge_marginal", law_json(m.edge)},
                {"clause_measure", law_json(m.clause)},
                {"z_dot_bar", finite(m.z_dot_bar)},
                {"z_hat_bar", finite(m.z_hat_bar)},
                {"z_bar", finite(m.z_bar)},
                {"phi_shortcut", finite(fe.shortcut)},
                {"fixed_point_residual", finite(res)}};
    return r;
}

constexpr int kFullMeasureMaxD = 2000;

Result cmd_hessian(int d, double lambda_opt, std::ostream& err) {
    Result r;
    r.is_object = true;
    if (d < kMinConfigDegree) {
        err << "warning: d=" << d << " is below " << kMinConfigDegree << "; outside proven regime (d >= d0 unknown)\n";
        r.exit_code = kExitRegime;
    }
    double lambda = lambda_opt;
    if (!(lambda > 0)) lambda = threshold_summary(d).lambda_star;
    const FrozenFixedPoint fp = solve_q(d, lambda);
    const TransitionMatrix tm = build_M(d, fp);
    SpectrumReport sp = spectrum(tm, d);
    EmpiricalMeasure m;
    if (d <= kFullMeasureMaxD) {
        m = empirical_measure(d, lambda, symmetric_solution(d, lambda));
    } else {
        // the class table is quadratic in d; the edge marginal has a closed form
        m.d = d;
        m.lambda = lambda;
        m.edge = symmetric_edge_marginal(fp);
        m.intensity = alpha_of_q(d, fp.q_one);
    }
    const RestrictedHessian rh = restricted_hessian_check(d, fp, m);
    sp.restricted_hessian_max_eigenvalue = rh.max_eigenvalue;
    r.object = {{"d", d},
                {"lambda", finite(lambda)},
                {"alpha", finite(m.intensity)},
                {"epsilon", finite(tm.epsilon)},
                {"eigenvalues", finite_array(sp.eigenvalues)},
                {"lambda1", finite(sp.lambda1)},
                {"lambda2", finite(sp.lambda2)},
                {"det_shift", finite(sp.det_shift)},
                {"qdot_eigenvalues", finite_array(sp.qdot_eigenvalues)},
                {"qdot_singular", sp.qdot_singular},
                {"restricted_hessian_eigenvalues", finite_array(rh.eigenvalues)},
                {"restricted_hessian_max_eigenvalue", finite(rh.max_eigenvalue)},
                {"pair_gap", finite(pair_eigen_gap(d, sp.eigenvalues))},
                {"xbar_residual", finite(xbar_residual(tm))},
                {"reversibility_defect", finite(reversibility_defect(tm, m.edge))}};
    return r;
}

struct TrialRow {
    std::vector<json> cells;
};

Result cmd_simulate(int d, int n, int trials, std::uint64_t seed, std::ostream& err) {
    (void)err;
    Result r;
    r.table.columns = {"trial",           "seed",           "n",
                       "d",               "is_simple",      "self_loops",
                       "multi_edges",     "mis_size",       "mis_intensity",
                       "mis_step2_moves", "mis_frozen_valid", "greedy_size",
                       "greedy_intensity", "greedy_frozen_valid", "greedy_violations"};
    std::vector<TrialRow> rows(trials);
    std::atomic<int> next{0};
    std::mutex fail_mu;
    std::string failure;
    auto work = [&]() {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= trials) return;
            try {
                const std::uint64_t s = seed + static_cast<std::uint64_t>(t);
                const RegularGraph g = sample_config_model(n, d, s);
                const GraphStats st = graph_stats(g);
                std::vector<json> row = {t, s, n, d, st.is_simple, st.self_loop_count, st.multi_edge_count};
                if (n <= kBruteForceMaxN) {
                    const MisResult mis = brute_force_mis(g);
                    CoarsenTrace tr;
                    const FrozenConfig c = coarsen(g, mis.witness, &tr);
                    const FrozenVerdict v = validate_frozen(g, c, false);
                    row.insert(row.end(), {mis.size, finite(c.intensity.value()), tr.step2_moves, v.valid});
                } else {
                    row.insert(row.end(), {nullptr, nullptr, nullptr, nullptr});
                }
                const IndepSet gs = greedy_maximal(g, s);
                const FrozenConfig gc = coarsen(g, gs);
                const FrozenVerdict gv = validate_frozen(g, gc, false);
                std::string rules;
                for (const auto& vi : gv.violations) rules += (rules.empty() ? "" : ";") + vi.rule;
                row.insert(row.end(), {gs.size, finite(gc.intensity.value()), gv.valid, rules});
                rows[t].cells = std::move(row);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lk(fail_mu);
                if (failure.empty()) failure = e.what();
            }
        }
    };
    const int workers = std::min(worker_count(), std::max(1, trials));
    std::vector<std::thread> pool;
    for (int i = 1; i < workers; ++i) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    if (!failure.empty()) throw std::runtime_error(failure);
    for (auto& row : rows) r.table.rows.push_back(std::move(row.cells));
    return r;
}

Result cmd_forcing(const ForcingSpec& spec) {
    Result r;
    r.table.columns = {"n", "d", "k", "pair", "total", "total_11", "total_10", "total_01", "theta", "probability"};
    const double p = forcing_probability_exact(spec);
    if (spec.pair)
        r.table.rows.push_back({spec.n, spec.d, spec.k, true, nullptr, spec.pair_total[0], spec.pair_total[1],
                                spec.pair_total[2], finite(spec.theta), finite(p)});
    else
        r.table.rows.push_back({spec.n, spec.d, spec.k, false, spec.total, nullptr, nullptr, nullptr,
                                finite(spec.theta), finite(p)});
    return r;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Frozen-model thresholds for maximum independent sets on random regular graphs", "frozen"};
    app.require_subcommand(1);
    app.fallthrough();
    Output o;
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", o.out_path, "Write output to this path (manifest alongside)");
    app.set_version_flag("--version", kVersion);
    const auto degree = CLI::Range(3, 100000000);

    std::vector<int> th_d;
    std::vector<double> th_n;
    auto* th = app.add_subcommand("thresholds", "alpha_fm, alpha_star, c_star and the predicted location");
    th->add_option("--d", th_d, "Degree(s)")->required()->check(degree);
    th->add_option("--n", th_n, "Vertex counts for the location")->check(CLI::PositiveNumber);

    int cv_d = 0, cv_p = 0;
    double cv_lo = 0, cv_hi = 0;
    auto* cv = app.add_subcommand("curve", "Exponent table over an alpha grid");
    cv->add_option("--d", cv_d)->required()->check(degree);
    cv->add_option("--alpha-min", cv_lo)->required()->check(CLI::Range(1e-12, 0.5));
    cv->add_option("--alpha-max", cv_hi)->required()->check(CLI::Range(1e-12, 0.5));
    cv->add_option("--points", cv_p)->required()->check(CLI::PositiveNumber);

    int be_d = 0;
    double be_l = 0;
    auto* be = app.add_subcommand("bethe", "Symmetric Bethe fixed point and free energy");
    be->add_option("--d", be_d)->required()->check(degree);
    be->add_option("--lambda", be_l)->required()->check(CLI::Range(1.0 + 1e-9, 1e300));

    int he_d = 0;
    double he_l = 0;
    auto* he = app.add_subcommand("hessian", "Transition-matrix spectrum and Hessian checks");
    he->add_option("--d", he_d)->required()->check(degree);
    he->add_option("--lambda", he_l, "Fugacity (default: lambda_star)")->check(CLI::Range(1.0 + 1e-9, 1e300));

    int si_d = 0, si_n = 0, si_t = 0;
    std::uint64_t si_s = 0;
    auto* si = app.add_subcommand("simulate", "Sample graphs, solve MIS, coarsen and validate");
    si->add_option("--d", si_d)->required()->check(CLI::Range(1, 64));
    si->add_option("--n", si_n)->required()->check(CLI::Range(1, 1000000));
    si->add_option("--trials", si_t)->required()->check(CLI::PositiveNumber);
    si->add_option("--seed", si_s)->required();

    ForcingSpec fs;
    std::vector<long> fo_pair;
    auto* fo = app.add_subcommand("forcing", "Exact conditioned forcing probability");
    fo->add_option("--n", fs.n)->required()->check(CLI::PositiveNumber);
    fo->add_option("--d", fs.d)->required()->check(CLI::PositiveNumber);
    fo->add_option("--k", fs.k)->required()->check(CLI::NonNegativeNumber);
    auto* fo_total = fo->add_option("--total", fs.total)->check(CLI::NonNegativeNumber);
    auto* fo_pt = fo->add_option("--pair-total", fo_pair, "Totals of 11,10,01")->expected(3)->delimiter(',');
    fo->add_option("--theta", fs.theta)->check(CLI::Range(1e-300, 1.0 - 1e-16));
    fo_total->excludes(fo_pt);

    try {
        app.parse(argc, argv);
        if (cv->parsed() && !(cv_lo <= cv_hi)) throw CLI::ValidationError("--alpha-min must not exceed --alpha-max");
        if (fo->parsed() && !fo_total->count() && !fo_pt->count())
            throw CLI::ValidationError("forcing needs --total or --pair-total");
        if (si->parsed() && (static_cast<long>(si_n) * si_d) % 2)
            throw CLI::ValidationError("simulate needs n*d even");
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        err << app.help();
        return kExitUsage;
    }

    try {
        json params = json::object();
        if (th->parsed()) {
            params = {{"d", th_d}, {"n", th_n}};
            return emit(cmd_thresholds(th_d, th_n, err), "thresholds", params, o, "csv", out, err);
        }
        if (cv->parsed()) {
            params = {{"d", cv_d}, {"alpha_min", cv_lo}, {"alpha_max", cv_hi}, {"points", cv_p}};
            return emit(cmd_curve(cv_d, cv_lo, cv_hi, cv_p, err), "curve", params, o, "csv", out, err);
        }
        if (be->parsed()) {
            params = {{"d", be_d}, {"lambda", be_l}};
            return emit(cmd_bethe(be_d, be_l, err), "bethe", params, o, "json", out, err);
        }
        if (he->parsed()) {
            params = {{"d", he_d}, {"lambda", he_l > 0 ? json(he_l) : json(nullptr)}};
            return emit(cmd_hessian(he_d, he_l, err), "hessian", params, o, "json", out, err);
        }
        if (si->parsed()) {
            params = {{"d", si_d}, {"n", si_n}, {"trials", si_t}, {"seed", si_s}};
            return emit(cmd_simulate(si_d, si_n, si_t, si_s, err), "simulate", params, o, "csv", out, err);
        }
        if (fo->parsed()) {
            if (fo_pt->count()) {
                fs.pair = true;
                for (int i = 0; i < 3; ++i) fs.pair_total[i] = fo_pair[i];
            }
            params = {{"n", fs.n}, {"d", fs.d}, {"k", fs.k}, {"theta", fs.theta}};
            if (fs.pair) params["pair_total"] = fo_pair;
            else params["total"] = fs.total;
            return emit(cmd_forcing(fs), "forcing", params, o, "csv", out, err);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitUsage;
}

}  // namespace frozen::cli
