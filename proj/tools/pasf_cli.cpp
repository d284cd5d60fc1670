#include "pasf_cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <pasf/continuous.hpp>
#include <pasf/io.hpp>
#include <pasf/parallel.hpp>
#include <pasf/reconstruct.hpp>

namespace pasf::cli {

namespace fs = std::filesystem;

namespace {

struct GlobalOpts {
    std::uint64_t seed = kDefaultSeed;
    long long budget_nodes = -1;  // unset = unlimited
    double budget_seconds = -1.0;
    double tol = kTolExact;
    int threads = 0;  // 0 = env var or hardware default
    std::string output_dir = "pasf-out";
    std::string cache_dir;
    bool no_cache = false;
};

Budget to_budget(const GlobalOpts& g) {
    Budget b;
    if (g.budget_nodes > 0) b.max_nodes = static_cast<std::uint64_t>(g.budget_nodes);
    if (g.budget_seconds > 0) b.max_seconds = g.budget_seconds;
    return b;
}

std::vector<double> parse_doubles(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string field;
    while (std::getline(ss, field, ',')) {
        if (field.empty()) continue;
        out.push_back(std::stod(field));
    }
    return out;
}

std::vector<int> parse_ints(const std::string& csv) {
    std::vector<int> out;
    for (double v : parse_doubles(csv)) out.push_back(static_cast<int>(v));
    return out;
}

Vec to_vec(const std::vector<double>& v) {
    Vec out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
    return out;
}

Mat json_to_mat(const Json& rows, const char* name) {
    if (!rows.is_array() || rows.empty() || !rows[0].is_array())
        throw SchemaError(std::string("expected nested array for ") + name);
    const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index c = static_cast<Eigen::Index>(rows[0].size());
    Mat m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != c)
            throw SchemaError(std::string("ragged rows in ") + name);
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rows[i][j].get<double>();
    }
    return m;
}

// frame source shared by the frame-consuming subcommands
struct FrameSource {
    std::string builtin;  // standard | dup | random
    std::string frame_path;
    int d = 3;
    int n = 0;
    int k = 2;
    double p = 2.0;
    double r = 0.0;  // 0 -> same as p

    void attach(CLI::App* cmd) {
        cmd->add_option("--builtin", builtin, "built-in frame: standard|dup|random");
        cmd->add_option("--frame", frame_path, "path to a frame JSON file");
        cmd->add_option("--d", d, "dimension for built-ins");
        cmd->add_option("--n", n, "element count for the random built-in");
        cmd->add_option("--k", k, "copy count for the dup built-in");
        cmd->add_option("--p", p, "sequence exponent for built-ins");
        cmd->add_option("--r", r, "space norm exponent for built-ins (default: p)");
    }

    Pasf load(const GlobalOpts& g, std::string* input_bytes, bool* defaulted_r) const {
        if (!frame_path.empty()) {
            if (!fs::exists(frame_path)) throw IoError("no such frame file: " + frame_path);
            *input_bytes = read_file(frame_path);
            return frame_from_json(Json::parse(*input_bytes), defaulted_r);
        }
        const Exponent pe(p), re(r > 0 ? r : p);
        *input_bytes = "";
        if (builtin == "standard") return make_standard(d, pe, re);
        if (builtin == "dup") return make_duplicated_standard(d, k, pe, re);
        if (builtin == "random") return make_random(d, n > 0 ? n : d + 1, pe, re, g.seed);
        throw SchemaError("unknown builtin '" + builtin + "' (use standard|dup|random or --frame)");
    }

    Json config() const {
        Json j;
        j["builtin"] = builtin;
        j["frame"] = frame_path;
        j["d"] = d;
        j["n"] = n;
        j["k"] = k;
        j["p"] = p;
        j["r"] = r;
        return j;
    }
};

struct RunContext {
    GlobalOpts global;
    Json config;        // resolved, recorded verbatim
    std::string input_bytes;
    std::string notes;  // warnings such as the legacy-r default
};

int finish_run(const RunContext& ctx, const Json& report, int exit_code) {
    const fs::path out_dir(ctx.global.output_dir);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output dir " + out_dir.string());

    const std::string report_bytes = report.dump(2) + "\n";
    atomic_write(out_dir / "report.json", report_bytes);

    const std::string digest =
        sha256_hex(std::string(kToolVersion) + "\n" + ctx.config.dump() + "\n" + ctx.input_bytes);

    Json record;
    record["config"] = ctx.config;
    record["tool_version"] = kToolVersion;
    record["input_digest"] = digest;
    record["report"] = report;
    record["cached"] = false;
    if (!ctx.notes.empty()) record["warnings"] = ctx.notes;
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    record["timestamp_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
    atomic_write(out_dir / "run.json", record.dump(2) + "\n");

    if (!ctx.global.no_cache && !ctx.global.cache_dir.empty()) {
        fs::create_directories(ctx.global.cache_dir, ec);
        if (!ec) {
            Json cached;
            cached["config"] = ctx.config;
            cached["tool_version"] = kToolVersion;
            cached["input_digest"] = digest;
            cached["report"] = report;
            atomic_write(fs::path(ctx.global.cache_dir) / (digest + ".json"),
                         cached.dump(2) + "\n");
        }
    }
    return exit_code;
}

// returns the prior report if the digest matches a well-formed cache record
std::optional<Json> cache_lookup(const RunContext& ctx, std::string* digest_out) {
    const std::string digest =
        sha256_hex(std::string(kToolVersion) + "\n" + ctx.config.dump() + "\n" + ctx.input_bytes);
    if (digest_out) *digest_out = digest;
    if (ctx.global.no_cache || ctx.global.cache_dir.empty()) return std::nullopt;
    const fs::path hit = fs::path(ctx.global.cache_dir) / (digest + ".json");
    if (!fs::exists(hit)) return std::nullopt;
    try {
        Json record = Json::parse(read_file(hit));
        if (record.value("tool_version", "") != kToolVersion) return std::nullopt;
        return record.at("report");
    } catch (...) {
        std::cerr << "warning: corrupted cache record skipped: " << hit << "\n";
        return std::nullopt;
    }
}

int serve_cached(const RunContext& ctx, const Json& report, int exit_code) {
    const fs::path out_dir(ctx.global.output_dir);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    atomic_write(out_dir / "report.json", report.dump(2) + "\n");
    Json record;
    record["config"] = ctx.config;
    record["tool_version"] = kToolVersion;
    record["report"] = report;
    record["cached"] = true;
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    record["timestamp_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
    atomic_write(out_dir / "run.json", record.dump(2) + "\n");
    return exit_code;
}

int status_exit(SearchStatus s) {
    switch (s) {
        case SearchStatus::holds_with_witness: return kExitHolds;
        case SearchStatus::refuted_with_witness: return kExitRefuted;
        case SearchStatus::exhausted_inconclusive: return kExitInconclusive;
    }
    return kExitInconclusive;
}

int report_exit_code(const Json& report) {
    const std::string s = report.value("status", "");
    if (s == "holds-with-witness") return kExitHolds;
    if (s == "refuted-with-witness") return kExitRefuted;
    if (s == "exhausted-inconclusive") return kExitInconclusive;
    return kExitHolds;
}

void write_csv(const fs::path& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    std::ostringstream ss;
    ss << header << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            ss << (i ? "," : "") << Json(row[i]).dump();  // shortest round-trip form
        ss << "\n";
    }
    atomic_write(path, ss.str());
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"finite-dimensional p-approximate Schauder frame laboratory"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts global;
    app.add_option("--seed", global.seed, "deterministic seed for all searches");
    auto* bn = app.add_option("--budget-nodes", global.budget_nodes, "search node budget");
    auto* bs = app.add_option("--budget-seconds", global.budget_seconds, "wall-clock budget");
    app.add_option("--tol", global.tol, "tolerance for exact identity checks");
    app.add_option("--threads", global.threads, "worker threads (0 = PASF_THREADS or hardware)");
    app.add_option("--output-dir", global.output_dir, "directory for report files");
    app.add_option("--cache-dir", global.cache_dir, "result cache directory");
    app.add_flag("--no-cache", global.no_cache, "bypass the result cache");

    // ---- analyze ----
    auto* analyze = app.add_subcommand("analyze", "classify a frame and certify its bounds");
    FrameSource analyze_src;
    analyze_src.attach(analyze);

    // ---- certify-riesz ----
    auto* certify = app.add_subcommand("certify-riesz", "p-approximate Riesz basis check");
    FrameSource certify_src;
    certify_src.attach(certify);

    // ---- partition ----
    auto* partition = app.add_subcommand("partition", "Feichtinger / Weaver / R_eps partition search");
    FrameSource part_src;
    part_src.attach(partition);
    std::string criterion = "feichtinger";
    double a_min = 0.5, weaver_b = 2.0, eps = 0.5;
    int max_m = 4, weaver_m = 2, sweep_m = 0;
    bool unit_norm = false, tight = false, spectrum_nonneg = false;
    partition->add_option("--criterion", criterion, "feichtinger|weaver|r-eps");
    partition->add_option("--a-min", a_min, "lower Riesz bound threshold");
    partition->add_option("--max-M", max_m, "largest part count tried");
    partition->add_option("--b", weaver_b, "Weaver upper bound");
    partition->add_option("--eps", eps, "Weaver / R_eps epsilon");
    partition->add_option("--M", weaver_m, "Weaver part count");
    partition->add_option("--sweep-M", sweep_m, "write weaver objective vs M CSV up to this M");
    partition->add_flag("--unit-norm", unit_norm, "Weaver unit-norm variant");
    partition->add_flag("--tight", tight, "Weaver tight variant");
    partition->add_flag("--spectrum-nonneg", spectrum_nonneg, "Weaver strong form");

    // ---- scale ----
    auto* scale = app.add_subcommand("scale", "p-scalability via exact least squares");
    FrameSource scale_src;
    scale_src.attach(scale);

    // ---- reconstruct ----
    auto* reconstruct = app.add_subcommand("reconstruct", "iterative frame reconstruction");
    FrameSource rec_src;
    rec_src.attach(reconstruct);
    std::string rec_x, rec_coeffs;
    int rec_iters = 200;
    double rec_tol = 1e-12;
    bool rec_iterates = false;
    reconstruct->add_option("--x", rec_x, "ground-truth vector (comma separated); coefficients synthesized");
    reconstruct->add_option("--coeffs", rec_coeffs, "measurement coefficients (comma separated)");
    reconstruct->add_option("--max-iters", rec_iters, "iteration cap");
    reconstruct->add_option("--rec-tol", rec_tol, "stopping tolerance");
    reconstruct->add_flag("--iterates", rec_iterates, "include iterates in the trace");

    // ---- retrieval ----
    auto* retrieval = app.add_subcommand("retrieval", "phase / norm retrieval certification");
    FrameSource ret_src;
    ret_src.attach(retrieval);
    std::string ret_kind = "phase", ret_side = "vector";
    retrieval->add_option("--kind", ret_kind, "phase|norm");
    retrieval->add_option("--side", ret_side, "vector|functional");

    // ---- dynamics ----
    auto* dynamics = app.add_subcommand("dynamics", "iterated system (f U^m, V^m tau)");
    std::string dyn_spec;
    int dyn_horizon = 2;
    double dyn_p = 2.0, dyn_r = 0.0;
    dynamics->add_option("--spec", dyn_spec, "JSON with f, tau, U, V")->required();
    dynamics->add_option("--horizon", dyn_horizon, "number of powers M");
    dynamics->add_option("--p", dyn_p, "sequence exponent");
    dynamics->add_option("--r", dyn_r, "space norm exponent (default: p)");

    // ---- continuous ----
    auto* continuous = app.add_subcommand("continuous", "continuous pair: quadrature, discretization, bridges");
    std::string cont_builtin = "circle", cont_samples, cont_rule = "trapezoid", cont_which, cont_sweep;
    int cont_n = 16;
    double cont_p = 2.0, cont_r = 0.0, cont_amin = 0.5, cont_b = 4.0, cont_eps = 1.0, cont_rweight = 0.5;
    int cont_maxm = 4, cont_m = 2, cont_blocks = 8;
    continuous->add_option("--builtin", cont_builtin, "circle");
    continuous->add_option("--samples", cont_samples, "tabulated CSV (alpha,w,f_*,tau_*)");
    continuous->add_option("--p", cont_p, "sequence exponent");
    continuous->add_option("--r", cont_r, "space norm exponent (tabulated input only)");
    continuous->add_option("--rule", cont_rule, "trapezoid|midpoint|gauss-legendre");
    continuous->add_option("--N", cont_n, "node count");
    continuous->add_option("--which", cont_which, "bridge: feichtinger|weaver|akemann-weaver");
    continuous->add_option("--sweep-N", cont_sweep, "CSV of node counts for the convergence sweep");
    continuous->add_option("--a-min", cont_amin, "bridge: Feichtinger threshold");
    continuous->add_option("--b", cont_b, "bridge: Weaver bound");
    continuous->add_option("--eps", cont_eps, "bridge: Weaver epsilon");
    continuous->add_option("--max-M", cont_maxm, "bridge: Feichtinger part cap");
    continuous->add_option("--M", cont_m, "bridge: Weaver part count");
    continuous->add_option("--r-weight", cont_rweight, "bridge: constant Akemann-Weaver weight");
    continuous->add_option("--blocks", cont_blocks, "bridge: coarse block count");

    // ---- inequality ----
    auto* inequality = app.add_subcommand("inequality", "fundamental inequality and majorization checks");
    std::string ineq_a, ineq_b, ineq_c, ineq_lambda;
    double ineq_p = 2.0, ineq_q = 2.0, ineq_r = 2.0;
    int ineq_d = 2;
    inequality->add_option("--a", ineq_a, "functional norms (comma separated)")->required();
    inequality->add_option("--b", ineq_b, "vector norms (default: a)");
    inequality->add_option("--c", ineq_c, "pairing values (default: a)");
    inequality->add_option("--p", ineq_p, "exponent for a");
    inequality->add_option("--q", ineq_q, "exponent for b");
    inequality->add_option("--rr", ineq_r, "exponent for c");
    inequality->add_option("--d", ineq_d, "space dimension");
    inequality->add_option("--lambda", ineq_lambda, "spectrum for the majorization check");

    // ---- decompose ----
    auto* decompose = app.add_subcommand("decompose", "decomposition over p-orthonormal bases");
    FrameSource dec_src;
    dec_src.attach(decompose);
    std::string dec_mode = "lin-comb";
    int dec_m = 2;
    decompose->add_option("--mode", dec_mode, "lin-comb|multiple-of-sum|onb-plus-riesz");
    decompose->add_option("--M", dec_m, "term cap");

    // ---- verify ----
    auto* verify = app.add_subcommand("verify", "re-check a partition certificate from scratch");
    FrameSource ver_src;
    ver_src.attach(verify);
    std::string cert_path;
    verify->add_option("--certificate", cert_path, "certificate JSON")->required();

    std::vector<const char*> argv;
    argv.push_back("pasf");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return kExitHolds;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }
    if ((bn->count() && global.budget_nodes <= 0) || (bs->count() && global.budget_seconds <= 0)) {
        std::cerr << "budget flags must be positive\n";
        return kExitUsage;
    }

    if (global.threads > 0) {
        set_thread_count(static_cast<unsigned>(global.threads));
    } else if (const char* env = std::getenv("PASF_THREADS")) {
        set_thread_count(static_cast<unsigned>(std::atoi(env)));
    }

    try {
        RunContext ctx;
        ctx.global = global;
        Json gconf;
        gconf["seed"] = global.seed;
        gconf["budget_nodes"] = global.budget_nodes;
        gconf["budget_seconds"] = global.budget_seconds;
        gconf["tol"] = global.tol;
        gconf["threads"] = static_cast<int>(thread_count());

        auto with_frame = [&](CLI::App* cmd, const FrameSource& src, Json extra,
                              const std::function<Json(const Pasf&)>& body,
                              bool exit_from_status = false) -> std::optional<int> {
            if (!cmd->parsed()) return std::nullopt;
            bool defaulted_r = false;
            Pasf frame = src.load(global, &ctx.input_bytes, &defaulted_r);
            if (defaulted_r) ctx.notes = "legacy frame file: missing r defaulted to r = p";
            extra["subcommand"] = cmd->get_name();
            extra["source"] = src.config();
            extra["global"] = gconf;
            ctx.config = std::move(extra);
            if (auto cached = cache_lookup(ctx, nullptr))
                return serve_cached(ctx, *cached, exit_from_status ? report_exit_code(*cached) : kExitHolds);
            const Json report = body(frame);
            return finish_run(ctx, report, exit_from_status ? report_exit_code(report) : kExitHolds);
        };

        if (auto code = with_frame(analyze, analyze_src, Json::object(), [&](const Pasf& P) {
                Json rep;
                rep["label"] = P.label;
                rep["classification"] = classification_to_json(classify(P, global.tol));
                rep["bounds"] = bounds_to_json(frame_bounds(P));
                rep["frame_operator"] = Json::array();
                const Mat s = frame_operator(P);
                for (Eigen::Index i = 0; i < s.rows(); ++i)
                    for (Eigen::Index j = 0; j < s.cols(); ++j) rep["frame_operator"].push_back(s(i, j));
                return rep;
            }))
            return *code;

        if (auto code = with_frame(
                certify, certify_src, Json::object(),
                [&](const Pasf& P) {
                    const RieszBasisResult rb = is_riesz_basis(P, global.tol);
                    Json rep;
                    rep["status"] = rb.is_riesz ? "holds-with-witness" : "refuted-with-witness";
                    rep["conjecture"] = "Theorem: theta_f S^-1 theta_tau = I characterization";
                    rep["is_riesz_basis"] = rb.is_riesz;
                    rep["defect"] = std::isinf(rb.defect) ? Json("inf") : Json(rb.defect);
                    return rep;
                },
                true))
            return *code;

        if (partition->parsed()) {
            Json extra;
            extra["criterion"] = criterion;
            extra["a_min"] = a_min;
            extra["max_M"] = max_m;
            extra["b"] = weaver_b;
            extra["eps"] = eps;
            extra["M"] = weaver_m;
            extra["sweep_M"] = sweep_m;
            extra["unit_norm"] = unit_norm;
            extra["tight"] = tight;
            extra["spectrum_nonneg"] = spectrum_nonneg;
            if (auto code = with_frame(
                    partition, part_src, std::move(extra),
                    [&](const Pasf& P) {
                        SearchReport rep;
                        if (criterion == "feichtinger") {
                            rep = feichtinger_search(P, a_min, max_m, to_budget(global));
                        } else if (criterion == "weaver") {
                            WeaverFlags flags{unit_norm, tight, spectrum_nonneg};
                            rep = weaver_search(P, weaver_b, eps, weaver_m, flags, to_budget(global));
                            if (sweep_m > 0) {
                                std::vector<std::vector<double>> rows;
                                for (int mm = 1; mm <= sweep_m; ++mm) {
                                    const SearchReport r2 =
                                        weaver_search(P, weaver_b, eps, mm, flags, to_budget(global));
                                    rows.push_back({static_cast<double>(mm), r2.objective,
                                                    r2.status == SearchStatus::holds_with_witness ? 1.0 : 0.0});
                                }
                                write_csv(fs::path(global.output_dir) / "weaver_objective_vs_M.csv",
                                          "M,objective,holds", rows);
                            }
                        } else if (criterion == "r-eps") {
                            rep = r_eps_search(P, eps, max_m, to_budget(global));
                        } else {
                            throw SchemaError("unknown criterion " + criterion);
                        }
                        if (rep.certificate)
                            rep.certificate->verified = verify_certificate(*rep.certificate, P);
                        return report_to_json(rep);
                    },
                    true))
                return *code;
        }

        if (auto code = with_frame(
                scale, scale_src, Json::object(),
                [&](const Pasf& P) {
                    const ScalingResult sc = scaling_solve(P);
                    Json rep;
                    rep["status"] = sc.scalable ? "holds-with-witness" : "refuted-with-witness";
                    rep["conjecture"] = "Scaling problem for Banach spaces";
                    rep["scalable"] = sc.scalable;
                    rep["residual"] = sc.residual;
                    rep["scalars"] = std::vector<double>(sc.scalars.data(), sc.scalars.data() + sc.scalars.size());
                    rep["a_scalars"] =
                        std::vector<double>(sc.a_scalars.data(), sc.a_scalars.data() + sc.a_scalars.size());
                    rep["b_scalars"] =
                        std::vector<double>(sc.b_scalars.data(), sc.b_scalars.data() + sc.b_scalars.size());
                    rep["used_negative_scalars"] = sc.used_negative;
                    return rep;
                },
                true))
            return *code;

        if (partition->parsed() || analyze->parsed() || certify->parsed() || scale->parsed()) {
            // handled above; unreachable
        }

        if (reconstruct->parsed()) {
            Json extra;
            extra["x"] = rec_x;
            extra["coeffs"] = rec_coeffs;
            extra["max_iters"] = rec_iters;
            extra["rec_tol"] = rec_tol;
            if (auto code = with_frame(
                    reconstruct, rec_src, std::move(extra),
                    [&](const Pasf& P) {
                        std::optional<Vec> truth;
                        Vec coeffs;
                        if (!rec_x.empty()) {
                            truth = to_vec(parse_doubles(rec_x));
                            coeffs = P.functionals * *truth;
                        } else if (!rec_coeffs.empty()) {
                            coeffs = to_vec(parse_doubles(rec_coeffs));
                        } else {
                            throw SchemaError("reconstruct: need --x or --coeffs");
                        }
                        const ReconstructionTrace tr =
                            duffin_schaeffer(P, coeffs, rec_iters, rec_tol, truth);
                        Json rep = trace_to_json(tr, rec_iterates);
                        rep["status"] = tr.converged ? "holds-with-witness" : "exhausted-inconclusive";
                        rep["conjecture"] = "Duffin-Schaeffer algorithm theorem";
                        return rep;
                    },
                    true))
                return *code;
        }

        if (retrieval->parsed()) {
            Json extra;
            extra["kind"] = ret_kind;
            extra["side"] = ret_side;
            if (auto code = with_frame(
                    retrieval, ret_src, std::move(extra),
                    [&](const Pasf& P) {
                        const RetrievalSide side = ret_side == "functional" ? RetrievalSide::functional
                                                                            : RetrievalSide::vector;
                        const RetrievalKind kind =
                            ret_kind == "norm" ? RetrievalKind::norm : RetrievalKind::phase;
                        return report_to_json(retrieval_check(P, side, kind, global.tol));
                    },
                    true))
                return *code;
        }

        if (dynamics->parsed()) {
            if (!fs::exists(dyn_spec)) throw IoError("no such file: " + dyn_spec);
            ctx.input_bytes = read_file(dyn_spec);
            Json spec = Json::parse(ctx.input_bytes);
            Json extra;
            extra["subcommand"] = "dynamics";
            extra["spec"] = dyn_spec;
            extra["horizon"] = dyn_horizon;
            extra["p"] = dyn_p;
            extra["r"] = dyn_r;
            extra["global"] = gconf;
            ctx.config = std::move(extra);
            if (auto cached = cache_lookup(ctx, nullptr)) return serve_cached(ctx, *cached, kExitHolds);
            const Mat gen_f = json_to_mat(spec.at("f"), "f");
            Mat gen_tau = json_to_mat(spec.at("tau"), "tau").transpose();  // rows on disk, columns here
            const Mat u = json_to_mat(spec.at("U"), "U");
            const Mat v = json_to_mat(spec.at("V"), "V");
            const Exponent pe(dyn_p), re(dyn_r > 0 ? dyn_r : dyn_p);
            const Pasf P = dynamical_build(gen_f, gen_tau, u, v, dyn_horizon, pe, re);
            Json rep;
            rep["conjecture"] = "Dynamical sampling problem for Banach spaces";
            rep["frame"] = frame_to_json(P);
            rep["classification"] = classification_to_json(classify(P, global.tol));
            rep["riesz"] = is_riesz_basis(P, global.tol).is_riesz;
            return finish_run(ctx, rep, kExitHolds);
        }

        if (continuous->parsed()) {
            ContinuousPasf c;
            if (!cont_samples.empty()) {
                if (!fs::exists(cont_samples)) throw IoError("no such file: " + cont_samples);
                ctx.input_bytes = read_file(cont_samples);
                c = load_tabulated_continuous(cont_samples, Exponent(cont_p),
                                              Exponent(cont_r > 0 ? cont_r : cont_p));
            } else if (cont_builtin == "circle") {
                c = circle_example(Exponent(cont_p));
            } else {
                throw SchemaError("unknown continuous builtin " + cont_builtin);
            }
            QuadratureRule rule = QuadratureRule::trapezoid;
            if (cont_rule == "midpoint") rule = QuadratureRule::midpoint;
            else if (cont_rule == "gauss-legendre") rule = QuadratureRule::gauss_legendre;
            else if (cont_rule != "trapezoid") throw SchemaError("unknown rule " + cont_rule);

            Json extra;
            extra["subcommand"] = "continuous";
            extra["builtin"] = cont_builtin;
            extra["samples"] = cont_samples;
            extra["p"] = cont_p;
            extra["r"] = cont_r;
            extra["rule"] = cont_rule;
            extra["N"] = cont_n;
            extra["which"] = cont_which;
            extra["sweep_N"] = cont_sweep;
            extra["a_min"] = cont_amin;
            extra["b"] = cont_b;
            extra["eps"] = cont_eps;
            extra["max_M"] = cont_maxm;
            extra["M"] = cont_m;
            extra["r_weight"] = cont_rweight;
            extra["blocks"] = cont_blocks;
            extra["global"] = gconf;
            ctx.config = std::move(extra);
            if (auto cached = cache_lookup(ctx, nullptr))
                return serve_cached(ctx, *cached, report_exit_code(*cached));

            const Quadrature q = make_quadrature(rule, cont_n, c.domain_lo, c.domain_hi);
            Json rep;
            rep["label"] = c.label;
            const Mat s = cont_frame_operator(c, q);
            rep["frame_operator"] = Json::array();
            for (Eigen::Index i = 0; i < s.rows(); ++i)
                for (Eigen::Index j = 0; j < s.cols(); ++j) rep["frame_operator"].push_back(s(i, j));
            const Pasf disc = discretize(c, q);
            rep["discretized_classification"] = classification_to_json(classify(disc, 1e-8));
            const ContNormEstimates est = cont_norm_estimates(c, q, 200, global.seed);
            rep["analysis_norm_estimate"] = est.analysis;
            rep["synthesis_norm_estimate"] = est.synthesis;
            try {
                rep["riesz_defect"] = cont_riesz_defect(c, q);
            } catch (const std::runtime_error&) {
                rep["riesz_defect"] = "singular";
            }
            if (!cont_sweep.empty()) {
                std::vector<std::vector<double>> rows;
                for (int nn : parse_ints(cont_sweep)) {
                    const Quadrature qs = make_quadrature(rule, nn, c.domain_lo, c.domain_hi);
                    const Mat sn = cont_frame_operator(c, qs);
                    const double lam = sn.trace() / sn.rows();
                    const double err =
                        op_norm(Mat(sn - lam * Mat::Identity(sn.rows(), sn.cols())), Exponent(2), Exponent(2))
                            .lower;
                    rows.push_back({static_cast<double>(nn), err});
                }
                std::error_code ec;
                fs::create_directories(global.output_dir, ec);
                write_csv(fs::path(global.output_dir) / "quadrature_error_vs_N.csv",
                          "N,tight_defect_2norm", rows);
            }
            int code = kExitHolds;
            if (!cont_which.empty()) {
                BridgeParams params;
                params.a_min = cont_amin;
                params.max_m = cont_maxm;
                params.b = cont_b;
                params.eps = cont_eps;
                params.m = cont_m;
                params.r_map = [cont_rweight](double) { return cont_rweight; };
                params.coarse_blocks = cont_blocks;
                params.budget = to_budget(global);
                BridgeWhich which = BridgeWhich::feichtinger;
                if (cont_which == "weaver") which = BridgeWhich::weaver;
                else if (cont_which == "akemann-weaver") which = BridgeWhich::akemann_weaver;
                else if (cont_which != "feichtinger") throw SchemaError("unknown bridge " + cont_which);
                SearchReport bridge = continuous_conjecture_bridge(c, q, which, params);
                if (bridge.certificate)
                    bridge.certificate->verified = verify_certificate(*bridge.certificate, disc);
                rep["bridge"] = report_to_json(bridge);
                code = status_exit(bridge.status);
            }
            return finish_run(ctx, rep, code);
        }

        if (inequality->parsed()) {
            NormProfile profile;
            profile.a = parse_doubles(ineq_a);
            profile.b = ineq_b.empty() ? profile.a : parse_doubles(ineq_b);
            profile.c = ineq_c.empty() ? profile.a : parse_doubles(ineq_c);
            profile.p = ineq_p;
            profile.q = ineq_q;
            profile.r = ineq_r;
            Json extra;
            extra["subcommand"] = "inequality";
            extra["a"] = profile.a;
            extra["b"] = profile.b;
            extra["c"] = profile.c;
            extra["p"] = ineq_p;
            extra["q"] = ineq_q;
            extra["r"] = ineq_r;
            extra["d"] = ineq_d;
            extra["lambda"] = ineq_lambda;
            extra["global"] = gconf;
            ctx.config = std::move(extra);
            if (auto cached = cache_lookup(ctx, nullptr))
                return serve_cached(ctx, *cached, report_exit_code(*cached));
            const InequalityResult res = fundamental_inequality_check(profile, ineq_d);
            Json rep;
            rep["conjecture"] = "Conjecture FUNDAMENTALINEQUALITY";
            rep["a_ok"] = res.a_ok;
            rep["b_ok"] = res.b_ok;
            rep["c_ok"] = res.c_ok;
            rep["combined"] = res.combined;
            rep["status"] = res.combined ? "holds-with-witness" : "refuted-with-witness";
            if (!ineq_lambda.empty()) {
                const MajorizationResult mj = majorization_check(profile, parse_doubles(ineq_lambda));
                Json m;
                m["conjecture"] = "Conjecture GCONJECTURE";
                m["a_ok"] = mj.a_ok;
                m["b_ok"] = mj.b_ok;
                m["c_ok"] = mj.c_ok;
                m["combined"] = mj.combined;
                rep["majorization"] = std::move(m);
            }
            return finish_run(ctx, rep, res.combined ? kExitHolds : kExitRefuted);
        }

        if (decompose->parsed()) {
            Json extra;
            extra["mode"] = dec_mode;
            extra["M"] = dec_m;
            if (auto code = with_frame(
                    decompose, dec_src, std::move(extra),
                    [&](const Pasf& P) {
                        DecompositionMode mode = DecompositionMode::lin_comb;
                        if (dec_mode == "multiple-of-sum") mode = DecompositionMode::multiple_of_sum;
                        else if (dec_mode == "onb-plus-riesz") mode = DecompositionMode::onb_plus_riesz;
                        else if (dec_mode != "lin-comb") throw SchemaError("unknown mode " + dec_mode);
                        return report_to_json(decomposition_search(P, mode, dec_m, to_budget(global)));
                    },
                    true))
                return *code;
        }

        if (verify->parsed()) {
            Json extra;
            extra["certificate"] = cert_path;
            if (!fs::exists(cert_path)) throw IoError("no such certificate: " + cert_path);
            const std::string cert_bytes = read_file(cert_path);
            if (auto code = with_frame(
                    verify, ver_src, std::move(extra),
                    [&](const Pasf& P) {
                        PartitionCertificate cert = certificate_from_json(Json::parse(cert_bytes));
                        const bool ok = verify_certificate(cert, P);
                        Json rep;
                        rep["status"] = ok ? "holds-with-witness" : "refuted-with-witness";
                        rep["conjecture"] = "certificate re-verification";
                        rep["verified"] = ok;
                        return rep;
                    },
                    true))
                return *code;
        }

        std::cerr << "no subcommand executed\n";
        return kExitUsage;
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitNoInput;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}

}  // namespace pasf::cli
