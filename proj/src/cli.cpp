#include "scadtv/cli.hpp"

#include "scadtv/csv_io.hpp"
#include "scadtv/estimators.hpp"
#include "scadtv/metrics.hpp"
#include "scadtv/noise.hpp"
#include "scadtv/penalty.hpp"
#include "scadtv/pgm_io.hpp"
#include "scadtv/solvers.hpp"
#include "scadtv/synth.hpp"
#include "scadtv/two_pixel.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace scadtv {

namespace {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// Affine encoding of real-valued intermediates in 16-bit PGM files.
constexpr double kSidecarOffset = 1024.0;
constexpr double kSidecarScale = 16.0;

/// Files created by the running command; removed if the command fails.
struct OutputGuard {
    std::vector<std::string> paths;
    bool committed = false;

    void track(const std::string& path) { paths.push_back(path); }

    ~OutputGuard() {
        if (committed) return;
        for (const auto& p : paths) {
            std::error_code ec;
            std::filesystem::remove(p, ec);
        }
    }
};

Image load_image(const std::string& path) {
    const std::string sidecar = path + ".json";
    if (std::filesystem::exists(sidecar)) {
        std::ifstream in(sidecar);
        json meta = json::parse(in);
        const double offset = meta.at("offset").get<double>();
        const double scale = meta.at("scale").get<double>();
        return decode_pgm16(read_pgm_raw(path), offset, scale);
    }
    return read_pgm(path);
}

std::vector<double> parse_levels(const std::string& csv) {
    std::vector<double> levels;
    std::string token;
    std::istringstream ss(csv);
    while (std::getline(ss, token, ','))
        levels.push_back(std::stod(token));
    if (levels.empty()) throw CLI::ValidationError("--levels", "expected a comma-separated list");
    return levels;
}

PatternKind parse_pattern(const std::string& name) {
    if (name == "nested-squares") return PatternKind::nested_squares;
    if (name == "nested-squares-thick") return PatternKind::nested_squares_thick;
    if (name == "rotated-diamonds") return PatternKind::rotated_diamonds;
    throw CLI::ValidationError("--pattern", "unknown pattern '" + name + "'");
}

struct MethodOptions {
    std::string method = "tv";
    double lambda = 0.0;
    double lambda2 = 0.0; // satv second step; defaults to lambda
    double e = 10.0;
    double a = 3.7;
    int K = 2;
    bool lambda2_given = false;
    bool e_given = false;
    bool a_given = false;
    bool k_given = false;
    // satv pilot lambda for sweeps; 0 means "sweep both steps together"
    double lambda1_fixed = 0.0;
};

void check_method_flags(const MethodOptions& m) {
    if (m.method != "satv" && (m.e_given || m.lambda2_given || m.lambda1_fixed > 0.0))
        throw CLI::ValidationError("--e/--lambda2/--lambda1 apply only to --method satv");
    if (m.method != "scad" && (m.a_given || m.k_given))
        throw CLI::ValidationError("--a/--K apply only to --method scad");
    if (m.method == "satv" && !m.e_given)
        std::fprintf(stderr, "warning: --e not given, using default e=%g\n", m.e);
}

void solver_flags(CLI::App* cmd, SolverConfig& cfg, double default_tol = 1e-4,
                  int default_iters = 500) {
    cfg.rel_tol = default_tol;
    cfg.max_inner_iters = default_iters;
    cmd->add_option("--dt", cfg.dt, "initial time step");
    cmd->add_option("--iters", cfg.max_inner_iters, "inner iteration cap");
    cmd->add_option("--tol", cfg.rel_tol, "relative-change stopping threshold");
    cmd->add_option("--beta", cfg.beta, "gradient magnitude smoothing");
}

void add_method_flags(CLI::App* cmd, MethodOptions& m, bool lambda_required) {
    cmd->add_option("--method", m.method, "denoising method")
        ->check(CLI::IsMember({"tv", "satv", "scad"}))
        ->required();
    auto* lam = cmd->add_option("--lambda", m.lambda, "regularization strength");
    if (lambda_required) lam->required();
    cmd->add_option("--lambda2", m.lambda2, "satv second-step strength (default: --lambda)");
    cmd->add_option("--e", m.e, "satv stabilization offset");
    cmd->add_option("--a", m.a, "scad shape parameter");
    cmd->add_option("--K", m.K, "scad outer iterations");
}

void finish_method_flags(CLI::App* cmd, MethodOptions& m) {
    m.lambda2_given = cmd->count("--lambda2") > 0;
    m.e_given = cmd->count("--e") > 0;
    m.a_given = cmd->count("--a") > 0;
    m.k_given = cmd->count("--K") > 0;
    if (!m.lambda2_given) m.lambda2 = m.lambda;
}

ParamDenoiser make_denoiser(const MethodOptions& m, const SolverConfig& cfg) {
    if (m.method == "tv")
        return [cfg](const Image& f, double lambda) { return tv_denoise(f, lambda, cfg); };
    if (m.method == "satv") {
        const double pilot = m.lambda1_fixed;
        const double e = m.e;
        return [cfg, pilot, e](const Image& f, double lambda) {
            return satv_denoise(f, pilot > 0.0 ? pilot : lambda, lambda, e, cfg);
        };
    }
    const double a = m.a;
    SolverConfig scfg = cfg;
    scfg.outer_iters = m.K;
    return [scfg, a](const Image& f, double lambda) {
        return scad_denoise(f, ScadParams(lambda, a), scfg).image;
    };
}

Image denoise_once(const MethodOptions& m, const SolverConfig& cfg, const Image& f,
                   std::vector<double>* scad_trace) {
    if (m.method == "tv") return tv_denoise(f, m.lambda, cfg);
    if (m.method == "satv") return satv_denoise(f, m.lambda, m.lambda2, m.e, cfg);
    SolverConfig scfg = cfg;
    scfg.outer_iters = m.K;
    ScadResult res = scad_denoise(f, ScadParams(m.lambda, m.a), scfg);
    if (scad_trace) *scad_trace = res.objectives;
    return std::move(res.image);
}

// ---- subcommand setup ----------------------------------------------------

struct GenerateArgs {
    std::string pattern = "nested-squares";
    int size = 0;
    std::string levels;
    int band_width = 0;
    std::string out;
};

void run_generate(const GenerateArgs& a, OutputGuard& guard) {
    PatternSpec spec = default_spec(parse_pattern(a.pattern));
    if (a.size > 0) spec.size = a.size;
    if (a.band_width > 0) spec.band_width = a.band_width;
    if (!a.levels.empty()) spec.levels = parse_levels(a.levels);

    const Image img = generate(spec);
    guard.track(a.out);
    write_pgm(img, a.out, /*clamp=*/true);
    std::printf("total_variation %.9g\n", total_variation(img));
}

struct AddNoiseArgs {
    double sigma = 0.0;
    std::uint64_t seed = 1;
    std::string in, out;
};

void run_add_noise(const AddNoiseArgs& a, OutputGuard& guard) {
    if (!(a.sigma > 0.0)) throw CLI::ValidationError("--sigma", "must be > 0");
    const Image img = load_image(a.in);
    const Image noisy = add_gaussian_noise(img, a.sigma, a.seed);

    guard.track(a.out);
    write_pgm16(noisy, a.out, kSidecarOffset, kSidecarScale);

    json meta = {{"offset", kSidecarOffset},
                 {"scale", kSidecarScale},
                 {"sigma_requested", a.sigma},
                 {"seed", a.seed}};
    const std::string sidecar = a.out + ".json";
    guard.track(sidecar);
    std::ofstream(sidecar) << meta.dump(2) << "\n";
}

struct DenoiseArgs {
    MethodOptions m;
    std::string in, out, truth, report, histogram, level_shifts;
};

void run_denoise(const DenoiseArgs& a, const SolverConfig& cfg, OutputGuard& guard) {
    check_method_flags(a.m);
    if (!a.level_shifts.empty() && a.truth.empty())
        throw CLI::ValidationError("--level-shifts requires --truth");
    const Image f = load_image(a.in);

    std::vector<double> scad_trace;
    const Image restored = denoise_once(a.m, cfg, f, &scad_trace);

    guard.track(a.out);
    write_pgm(restored, a.out, /*clamp=*/true);

    if (!a.histogram.empty()) {
        guard.track(a.histogram);
        write_histogram_csv(histogram(restored, 256, 0.0, 255.0), 0.0, 255.0, a.histogram);
    }

    json report;
    report["method"] = a.m.method;
    report["lambda"] = a.m.lambda;
    if (a.m.method == "satv") {
        report["lambda2"] = a.m.lambda2;
        report["e"] = a.m.e;
    }
    if (a.m.method == "scad") {
        report["a"] = a.m.a;
        report["K"] = a.m.K;
        report["objective_trace"] = scad_trace;
    }

    if (!a.truth.empty()) {
        const Image truth = load_image(a.truth);
        const double err = mse(truth, restored);
        std::printf("mse %.9g\n", err);
        report["mse"] = err;

        const std::set<double> levels(truth.data.begin(), truth.data.end());
        if (levels.size() <= 16) {
            json shift_obj = json::object();
            std::vector<std::pair<double, double>> shift_rows;
            for (double level : levels) {
                const double shift = level_shift(truth, restored, level, 0.5);
                shift_obj[format_double(level)] = shift;
                shift_rows.emplace_back(level, shift);
            }
            report["level_shifts"] = shift_obj;
            if (!a.level_shifts.empty()) {
                guard.track(a.level_shifts);
                write_level_shifts_csv(shift_rows, a.level_shifts);
            }
        } else if (!a.level_shifts.empty()) {
            throw std::runtime_error("--level-shifts: truth has more than 16 distinct levels");
        }
    }

    if (!a.report.empty()) {
        guard.track(a.report);
        std::ofstream(a.report) << report.dump(2) << "\n";
    }
}

struct SweepArgs {
    MethodOptions m;
    std::string lambdas, in, truth, out_csv;
};

void run_sweep(const SweepArgs& a, const SolverConfig& cfg, OutputGuard& guard) {
    check_method_flags(a.m);
    const Image f = load_image(a.in);
    const Image truth = load_image(a.truth);
    const std::vector<double> grid = parse_log_grid(a.lambdas);

    const auto curve = sweep_true_mse(f, truth, grid, make_denoiser(a.m, cfg));
    if (!a.out_csv.empty()) {
        guard.track(a.out_csv);
        write_csv(curve, a.out_csv);
    }
    const auto& best = curve[argmin_mse(curve)];
    std::printf("best lambda %.9g mse %.9g\n", best.lambda, *best.mse);
}

struct SureArgs {
    MethodOptions m;
    std::string lambdas, in, out_csv, out;
    double epsilon = 0.5;
    std::uint64_t seed = 1;
    double sigma = 0.0; // 0: estimate from the input
};

void run_sure(const SureArgs& a, const SolverConfig& cfg, OutputGuard& guard) {
    check_method_flags(a.m);
    const Image f = load_image(a.in);
    const std::vector<double> grid = parse_log_grid(a.lambdas);

    SureConfig sure_cfg;
    sure_cfg.epsilon = a.epsilon;
    sure_cfg.seed = a.seed;
    sure_cfg.sigma = a.sigma > 0.0 ? a.sigma : estimate_sigma(f);
    if (!(sure_cfg.sigma > 0.0))
        throw std::runtime_error("estimated sigma is zero; supply --sigma");
    std::printf("sigma %.9g%s\n", sure_cfg.sigma, a.sigma > 0.0 ? "" : " (estimated)");

    const auto sel = select_lambda_sure(f, grid, make_denoiser(a.m, cfg), sure_cfg);
    if (!a.out_csv.empty()) {
        guard.track(a.out_csv);
        write_csv(sel.curve, a.out_csv);
    }
    std::printf("selected lambda %.9g\n", sel.lambda);

    if (!a.out.empty()) {
        guard.track(a.out);
        write_pgm(make_denoiser(a.m, cfg)(f, sel.lambda), a.out, /*clamp=*/true);
    }
}

struct TwoPixelArgs {
    double y1 = 0.0, y2 = 0.0, lambda = 0.0, a = 3.7;
    std::string penalty = "scad";
    bool verify = false;
};

void run_two_pixel(const TwoPixelArgs& a) {
    TwoPixelSolution sol;
    TwoPixelPenalty pen = TwoPixelPenalty::tv(a.lambda);
    if (a.penalty == "scad") {
        const ScadParams p(a.lambda, a.a);
        pen = TwoPixelPenalty::scad(p);
        sol = two_pixel_scad(a.y1, a.y2, p);
    } else {
        sol = two_pixel_tv(a.y1, a.y2, a.lambda);
    }
    std::printf("theta1 %.9g\ntheta2 %.9g\nbranch %s\nobjective %.9g\n", sol.theta1, sol.theta2,
                to_string(sol.branch).c_str(), sol.objective);

    if (a.verify) {
        const double step = default_grid_step(a.y1, a.y2);
        const auto oracle =
            two_pixel_brute_force(a.y1, a.y2, pen, default_grid_halfwidth(pen), step);
        std::printf("oracle_theta1 %.9g\noracle_theta2 %.9g\nobjective_gap %.3g\n", oracle.theta1,
                    oracle.theta2, std::abs(oracle.objective - sol.objective));
    }
}

struct ReproArgs {
    int size = 256;
    double sigma = 20.0;
    std::uint64_t seed = 99;
    std::string out_dir = "repro_out";
    std::string lambdas = "2:400:15";
};

void run_repro(const ReproArgs& a, const SolverConfig& cfg, OutputGuard& guard) {
    namespace fs = std::filesystem;
    fs::create_directories(a.out_dir);

    PatternSpec spec = default_spec(PatternKind::nested_squares_thick);
    spec.size = a.size;
    const Image truth = generate(spec);
    const Image noisy = add_gaussian_noise(truth, a.sigma, a.seed);
    write_pgm(truth, a.out_dir + "/truth.pgm", true);
    write_pgm16(noisy, a.out_dir + "/noisy.pgm", kSidecarOffset, kSidecarScale);

    const std::vector<double> grid = parse_log_grid(a.lambdas);

    MethodOptions tv_m;
    tv_m.method = "tv";
    auto tv_curve = sweep_true_mse(noisy, truth, grid, make_denoiser(tv_m, cfg));
    write_csv(tv_curve, a.out_dir + "/tv_sweep.csv");
    const auto& tv_best = tv_curve[argmin_mse(tv_curve)];

    // satv: pilot at the tv optimum, each e swept on a lambda2 grid scaled
    // by e/2 so the flat-region strength 2*lambda2/e matches the base grid
    const Image pilot = tv_denoise(noisy, tv_best.lambda, cfg);
    double satv_best_mse = std::numeric_limits<double>::infinity();
    double satv_best_lambda = 0.0, satv_best_e = 0.0;
    for (double e : {1.0, 10.0, 100.0, 500.0}) {
        const Image base_w = satv_weight_field(pilot, e);
        std::vector<SweepRecord> curve;
        for (double lambda : grid) {
            const double lambda2 = lambda * e / 2.0;
            Image w = base_w;
            for (double& v : w.data) v *= lambda2;
            SweepRecord rec;
            rec.lambda = lambda2;
            rec.mse = mse(truth, weighted_tv_denoise(noisy, w, cfg));
            curve.push_back(rec);
        }
        write_csv(curve, a.out_dir + "/satv_sweep_e" + format_double(e) + ".csv");
        const auto& best = curve[argmin_mse(curve)];
        if (*best.mse < satv_best_mse) {
            satv_best_mse = *best.mse;
            satv_best_lambda = best.lambda;
            satv_best_e = e;
        }
    }

    MethodOptions scad_m;
    scad_m.method = "scad";
    auto scad_curve = sweep_true_mse(noisy, truth, grid, make_denoiser(scad_m, cfg));
    write_csv(scad_curve, a.out_dir + "/scad_sweep.csv");
    const auto& scad_best = scad_curve[argmin_mse(scad_curve)];

    std::printf("method    best_lambda    best_mse\n");
    std::printf("tv        %-12.6g %.6g\n", tv_best.lambda, *tv_best.mse);
    std::printf("satv      %-12.6g %.6g (e=%g)\n", satv_best_lambda, satv_best_mse, satv_best_e);
    std::printf("scad      %-12.6g %.6g\n", scad_best.lambda, *scad_best.mse);
    guard.committed = true;
}

} // namespace

std::vector<double> parse_log_grid(const std::string& spec) {
    double lo = 0.0, hi = 0.0;
    int n = 0;
    char extra = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%d%c", &lo, &hi, &n, &extra) != 3)
        throw std::invalid_argument("grid spec must be lo:hi:n, got '" + spec + "'");
    if (!(lo > 0.0) || !(hi >= lo) || n < 1)
        throw std::invalid_argument("grid spec requires 0 < lo <= hi and n >= 1");
    if (n == 1) return {lo};
    std::vector<double> grid(n);
    const double ratio = std::log(hi / lo);
    for (int i = 0; i < n; ++i)
        grid[i] = lo * std::exp(ratio * i / (n - 1));
    grid.back() = hi;
    return grid;
}

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"TV / SATV / SCAD denoising for blocky images"};
    app.require_subcommand(1);

    OutputGuard guard;

    GenerateArgs gen;
    auto* cmd_gen = app.add_subcommand("generate", "write a synthetic blocky test image");
    cmd_gen->add_option("--pattern", gen.pattern,
                        "nested-squares | nested-squares-thick | rotated-diamonds")
        ->check(CLI::IsMember({"nested-squares", "nested-squares-thick", "rotated-diamonds"}));
    cmd_gen->add_option("--size", gen.size, "image side length");
    cmd_gen->add_option("--levels", gen.levels, "comma-separated intensities");
    cmd_gen->add_option("--band-width", gen.band_width, "band width in pixels");
    cmd_gen->add_option("--out", gen.out, "output PGM path")->required();
    cmd_gen->callback([&] { run_generate(gen, guard); });

    AddNoiseArgs an;
    auto* cmd_noise = app.add_subcommand("add-noise", "add seeded Gaussian noise");
    cmd_noise->add_option("--sigma", an.sigma, "noise standard deviation")->required();
    cmd_noise->add_option("--seed", an.seed, "RNG seed");
    cmd_noise->add_option("--in", an.in, "input PGM")->required();
    cmd_noise->add_option("--out", an.out, "output 16-bit PGM (+ .json sidecar)")->required();
    cmd_noise->callback([&] { run_add_noise(an, guard); });

    DenoiseArgs dn;
    auto* cmd_dn = app.add_subcommand("denoise", "restore an image");
    add_method_flags(cmd_dn, dn.m, /*lambda_required=*/true);
    SolverConfig dn_cfg;
    solver_flags(cmd_dn, dn_cfg);
    cmd_dn->add_option("--in", dn.in, "input image")->required();
    cmd_dn->add_option("--out", dn.out, "restored PGM")->required();
    cmd_dn->add_option("--truth", dn.truth, "ground truth for MSE");
    cmd_dn->add_option("--report", dn.report, "JSON report path");
    cmd_dn->add_option("--histogram", dn.histogram, "restored-image histogram CSV");
    cmd_dn->add_option("--level-shifts", dn.level_shifts, "per-level bias CSV (needs --truth)");
    cmd_dn->callback([&] {
        finish_method_flags(cmd_dn, dn.m);
        run_denoise(dn, dn_cfg, guard);
    });

    SweepArgs sw;
    auto* cmd_sw = app.add_subcommand("sweep", "true-MSE sweep over a lambda grid");
    add_method_flags(cmd_sw, sw.m, /*lambda_required=*/false);
    cmd_sw->add_option("--lambda1", sw.m.lambda1_fixed, "fixed satv first-step lambda");
    SolverConfig sw_cfg;
    solver_flags(cmd_sw, sw_cfg);
    cmd_sw->add_option("--lambdas", sw.lambdas, "lo:hi:n log-spaced grid")->required();
    cmd_sw->add_option("--in", sw.in, "input image")->required();
    cmd_sw->add_option("--truth", sw.truth, "ground truth image")->required();
    cmd_sw->add_option("--out-csv", sw.out_csv, "CSV output path");
    cmd_sw->callback([&] {
        finish_method_flags(cmd_sw, sw.m);
        run_sweep(sw, sw_cfg, guard);
    });

    SureArgs su;
    auto* cmd_su = app.add_subcommand("sure", "risk-estimate lambda selection");
    add_method_flags(cmd_su, su.m, /*lambda_required=*/false);
    cmd_su->add_option("--lambda1", su.m.lambda1_fixed, "fixed satv first-step lambda");
    SolverConfig su_cfg;
    solver_flags(cmd_su, su_cfg, 1e-6, 2000);
    cmd_su->add_option("--lambdas", su.lambdas, "lo:hi:n log-spaced grid")->required();
    cmd_su->add_option("--in", su.in, "input image")->required();
    cmd_su->add_option("--epsilon", su.epsilon, "perturbation amplitude");
    cmd_su->add_option("--seed", su.seed, "probe vector seed");
    cmd_su->add_option("--sigma", su.sigma, "noise std (default: estimated)");
    cmd_su->add_option("--out-csv", su.out_csv, "CSV output path");
    cmd_su->add_option("--out", su.out, "denoise at the selected lambda");
    cmd_su->callback([&] {
        finish_method_flags(cmd_su, su.m);
        run_sure(su, su_cfg, guard);
    });

    TwoPixelArgs tp;
    auto* cmd_tp = app.add_subcommand("two-pixel", "closed-form two-pixel minimizer");
    cmd_tp->add_option("--y1", tp.y1)->required();
    cmd_tp->add_option("--y2", tp.y2)->required();
    cmd_tp->add_option("--lambda", tp.lambda)->required();
    cmd_tp->add_option("--a", tp.a, "scad shape parameter");
    cmd_tp->add_option("--penalty", tp.penalty)->check(CLI::IsMember({"scad", "tv"}));
    cmd_tp->add_flag("--verify", tp.verify, "also run the brute-force oracle");
    cmd_tp->callback([&] { run_two_pixel(tp); });

    ReproArgs rp;
    auto* cmd_rp = app.add_subcommand("repro", "bundled end-to-end comparison scenario");
    cmd_rp->add_option("--size", rp.size);
    cmd_rp->add_option("--sigma", rp.sigma);
    cmd_rp->add_option("--seed", rp.seed);
    cmd_rp->add_option("--out-dir", rp.out_dir);
    cmd_rp->add_option("--lambdas", rp.lambdas, "lo:hi:n log-spaced grid");
    SolverConfig rp_cfg;
    solver_flags(cmd_rp, rp_cfg, 1e-6, 1500);
    cmd_rp->callback([&] { run_repro(rp, rp_cfg, guard); });

    std::vector<const char*> argv;
    argv.push_back("scadtv");
    for (const auto& s : args) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    guard.committed = true;
    return 0;
}

} // namespace scadtv
