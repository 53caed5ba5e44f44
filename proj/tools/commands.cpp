#include "commands.hpp"

#include "tvtv/baseline.hpp"
#include "tvtv/metrics.hpp"
#include "tvtv/operators.hpp"
#include "tvtv/projection.hpp"
#include "tvtv/synthetic.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

namespace tvtv::cli {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

// Residual after the float32 narrowing applied by the HSC1 writer.
double stored_consistency(const HsCube& z, const HsCube& y, const BlockAverage& a, const SpectralMatrix& r) {
    return consistency_residual(decode_hsc(encode_hsc(z)), decode_hsc(encode_hsc(y)), a, r);
}

void add_solver_flags(CLI::App* cmd, SolverConfig& cfg, std::size_t& threads, std::string& mode) {
    cmd->add_option("--beta", cfg.beta, "Trade-off between TV(X) and TV(X - W)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--rho", cfg.rho, "Augmented Lagrangian parameter")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--max-iters", cfg.max_iters, "Iteration cap")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--tol", cfg.residual_tol, "Stop when the primal or dual residual falls below this")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--mode", mode, "X-update projection: auto, exact or dykstra")
        ->check(CLI::IsMember({"auto", "exact", "dykstra"}))
        ->capture_default_str();
    cmd->add_option("--dykstra-iters", cfg.dykstra_iters, "Dykstra sweep budget")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--dykstra-tol", cfg.dykstra_tol, "Dykstra per-sweep change tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--threads", threads, "Worker threads for per-band updates")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_flag("--clamp", cfg.clamp_output, "Clip the output to [0,1] (may break measurement consistency)");
}

void finish_solver_flags(SolverConfig& cfg, std::size_t threads, const std::string& mode) {
    cfg.projection_mode = parse_projection_mode(mode);
    cfg.threads = threads;
    cfg.parallel_bands = threads > 1;
}

}  // namespace

std::string format_report(const SolveReport& r) {
    std::ostringstream os;
    os << "iterations=" << r.iterations << "\n"
       << "stop_reason=" << to_string(r.stop_reason) << "\n"
       << "primal_res=" << fmt(r.final_primal_res) << "\n"
       << "dual_res=" << fmt(r.final_dual_res) << "\n"
       << "objective=" << fmt(r.objective) << "\n"
       << "res_A=" << fmt(r.constraint_res_a) << "\n"
       << "res_R=" << fmt(r.constraint_res_r) << "\n"
       << "wall_time_s=" << fmt(r.wall_time) << "\n";
    return os.str();
}

void run_simulate(const SimulateOptions& opt, std::ostream& out) {
    const HsCube gt = read_hsc(opt.gt);
    const SpectralMatrix r = read_csr(opt.csr);
    const BlockAverage a(opt.block, gt.rows(), gt.cols());
    const HsCube z = block_avg_apply(gt, a);
    const HsCube y = csr_apply(gt, r);
    write_hsc(z, opt.z_out);
    write_hsc(y, opt.y_out);
    out << "z=" << opt.z_out.string() << " (" << z.shape_string() << ")\n"
        << "y=" << opt.y_out.string() << " (" << y.shape_string() << ")\n"
        << "consistency_residual=" << fmt(consistency_residual(z, y, a, r)) << "\n"
        << "consistency_residual_stored=" << fmt(stored_consistency(z, y, a, r)) << "\n";
}

void run_fuse(const FuseOptions& opt, std::ostream& out) {
    const HsCube z = read_hsc(opt.z);
    const HsCube y = read_hsc(opt.y);
    const SpectralMatrix r = read_csr(opt.csr);
    if (y.rows() != z.rows() * opt.block || y.cols() != z.cols() * opt.block) {
        throw DimensionError("fuse: block " + std::to_string(opt.block) + " does not map " + z.shape_string() +
                             " onto " + y.shape_string());
    }
    const HsCube w = naive_fuse(z, y, r, opt.block);
    write_hsc(w, opt.out);
    out << "w=" << opt.out.string() << " (" << w.shape_string() << ")\n";
}

SolveReport run_solve(const SolveOptions& opt, std::ostream& out) {
    const HsCube w = read_hsc(opt.w);
    const HsCube z = read_hsc(opt.z);
    const HsCube y = read_hsc(opt.y);
    const SpectralMatrix r = read_csr(opt.csr);
    SolveResult result = solve_tvtv(w, z, y, r, opt.config);
    write_hsc(result.x, opt.out);
    const std::string report = format_report(result.report);
    if (opt.report) write_text(report, *opt.report);
    out << report;
    return result.report;
}

MetricsRow run_eval(const EvalOptions& opt, std::ostream& out) {
    const HsCube x = read_hsc(opt.estimate);
    const HsCube gt = read_hsc(opt.gt);
    MetricsRow row{opt.method, evaluate(x, gt, opt.scale)};
    out << kMetricsHeader << "\n" << format_metrics_row(row) << "\n";
    if (opt.append) append_metrics_row(row, *opt.append);
    return row;
}

std::vector<MetricsRow> run_pipeline(const PipelineOptions& opt, std::ostream& out) {
    HsCube gt;
    if (opt.gt) {
        gt = read_hsc(*opt.gt);
    } else if (opt.synthetic) {
        gt = synthetic_cube({opt.rows, opt.cols, opt.bands, opt.rectangles, opt.seed});
    } else {
        throw Error("pipeline: give --gt or --synthetic");
    }

    std::optional<SpectralMatrix> r;
    if (opt.csr) {
        r = read_csr(*opt.csr);
    } else if (opt.synthetic) {
        r = random_csr(gt.bands(), opt.channels, opt.seed + 1);
    } else {
        throw Error("pipeline: give --csr (or --synthetic for a random response)");
    }

    const std::size_t block = opt.config.block;
    const BlockAverage a(block, gt.rows(), gt.cols());
    const HsCube z = block_avg_apply(gt, a);
    const HsCube y = csr_apply(gt, *r);
    HsCube w = naive_fuse(z, y, *r, block);
    if (opt.noise > 0.0) add_gaussian_noise(w, opt.noise, opt.seed + 2);

    SolveResult result = solve_tvtv(w, z, y, *r, opt.config);

    const double ratio = static_cast<double>(block);
    std::vector<MetricsRow> rows{{"baseline", evaluate(w, gt, ratio)}, {"tvtv", evaluate(result.x, gt, ratio)}};

    if (opt.workdir) {
        fs::create_directories(*opt.workdir);
        write_hsc(gt, *opt.workdir / "gt.hsc");
        write_csr(*r, *opt.workdir / "csr.csv");
        write_hsc(z, *opt.workdir / "z.hsc");
        write_hsc(y, *opt.workdir / "y.hsc");
        write_hsc(w, *opt.workdir / "w.hsc");
        write_hsc(result.x, *opt.workdir / "xhat.hsc");
        write_text(format_report(result.report), *opt.workdir / "report.txt");
    }
    const std::string table = format_metrics_table(rows);
    if (opt.out) write_text(table, *opt.out);
    out << table;
    return rows;
}

void run_preview(const PreviewOptions& opt, std::ostream& out) {
    const HsCube cube = read_hsc(opt.input);
    write_band_preview(cube, opt.band, opt.out);
    out << "preview=" << opt.out.string() << " (band " << opt.band << ")\n";
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Measurement-consistent hyperspectral super-resolution by TV-TV minimization"};
    app.require_subcommand(1);

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "Degrade a ground-truth cube into Z (block average) and Y (X R)");
    simulate->add_option("gt", sim.gt, "Ground-truth cube (.hsc)")->required();
    simulate->add_option("csr", sim.csr, "Spectral response (CSV)")->required();
    simulate->add_option("--block", sim.block, "Downscaling factor")->check(CLI::PositiveNumber)->capture_default_str();
    simulate->add_option("--z-out", sim.z_out, "Low-resolution output")->required();
    simulate->add_option("--y-out", sim.y_out, "Multispectral output")->required();

    FuseOptions fuse;
    auto* fuse_cmd = app.add_subcommand("fuse", "Baseline fusion: bicubic upsample plus spectral correction");
    fuse_cmd->add_option("z", fuse.z, "Low-resolution cube")->required();
    fuse_cmd->add_option("y", fuse.y, "Multispectral cube")->required();
    fuse_cmd->add_option("csr", fuse.csr, "Spectral response")->required();
    fuse_cmd->add_option("--block", fuse.block, "Downscaling factor")->check(CLI::PositiveNumber)->capture_default_str();
    fuse_cmd->add_option("-o,--out", fuse.out, "Output W")->required();

    SolveOptions solve;
    std::size_t solve_threads = 1;
    std::string solve_mode = "auto";
    std::string solve_report;
    auto* solve_cmd = app.add_subcommand("solve", "Refine W into a measurement-consistent estimate");
    solve_cmd->add_option("w", solve.w, "Base estimate W")->required();
    solve_cmd->add_option("z", solve.z, "Low-resolution cube")->required();
    solve_cmd->add_option("y", solve.y, "Multispectral cube")->required();
    solve_cmd->add_option("csr", solve.csr, "Spectral response")->required();
    solve_cmd->add_option("-o,--out", solve.out, "Output estimate")->required();
    solve_cmd->add_option("--block", solve.config.block, "Downscaling factor")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    solve_cmd->add_option("--report", solve_report, "Write the key=value report here");
    add_solver_flags(solve_cmd, solve.config, solve_threads, solve_mode);

    EvalOptions eval;
    std::string eval_append;
    auto* eval_cmd = app.add_subcommand("eval", "Compare an estimate with ground truth");
    eval_cmd->add_option("estimate", eval.estimate, "Estimated cube")->required();
    eval_cmd->add_option("gt", eval.gt, "Ground-truth cube")->required();
    eval_cmd->add_option("--scale", eval.scale, "ERGAS resolution ratio")->check(CLI::PositiveNumber)->capture_default_str();
    eval_cmd->add_option("--method", eval.method, "Row label")->capture_default_str();
    eval_cmd->add_option("--append", eval_append, "Append the row to this metrics table");

    PipelineOptions pipe;
    std::size_t pipe_threads = 1;
    std::string pipe_mode = "auto";
    std::string pipe_gt, pipe_csr, pipe_workdir, pipe_out;
    auto* pipe_cmd = app.add_subcommand("pipeline", "simulate, fuse, solve and evaluate in one run");
    pipe_cmd->add_option("--gt", pipe_gt, "Ground-truth cube");
    pipe_cmd->add_option("--csr", pipe_csr, "Spectral response");
    pipe_cmd->add_flag("--synthetic", pipe.synthetic, "Generate a piecewise-constant ground truth");
    pipe_cmd->add_option("--rows", pipe.rows, "Synthetic rows")->check(CLI::PositiveNumber)->capture_default_str();
    pipe_cmd->add_option("--cols", pipe.cols, "Synthetic cols")->check(CLI::PositiveNumber)->capture_default_str();
    pipe_cmd->add_option("--bands", pipe.bands, "Synthetic bands")->check(CLI::PositiveNumber)->capture_default_str();
    pipe_cmd->add_option("--channels", pipe.channels, "Channels of the random response")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    pipe_cmd->add_option("--rectangles", pipe.rectangles, "Rectangles in the synthetic scene")->capture_default_str();
    pipe_cmd->add_option("--seed", pipe.seed, "Fixture seed")->capture_default_str();
    pipe_cmd->add_option("--noise", pipe.noise, "Std. deviation of noise added to W")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    pipe_cmd->add_option("--workdir", pipe_workdir, "Write intermediate cubes and the report here");
    pipe_cmd->add_option("--out", pipe_out, "Write the metrics table here");
    pipe_cmd->add_option("--block", pipe.config.block, "Downscaling factor")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_solver_flags(pipe_cmd, pipe.config, pipe_threads, pipe_mode);

    PreviewOptions preview;
    auto* preview_cmd = app.add_subcommand("preview", "Export one band as an 8-bit PGM");
    preview_cmd->add_option("cube", preview.input, "Input cube")->required();
    preview_cmd->add_option("--band", preview.band, "Band index")->capture_default_str();
    preview_cmd->add_option("-o,--out", preview.out, "Output .pgm")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (simulate->parsed()) {
            run_simulate(sim, out);
        } else if (fuse_cmd->parsed()) {
            run_fuse(fuse, out);
        } else if (solve_cmd->parsed()) {
            finish_solver_flags(solve.config, solve_threads, solve_mode);
            if (!solve_report.empty()) solve.report = solve_report;
            run_solve(solve, out);
        } else if (eval_cmd->parsed()) {
            if (!eval_append.empty()) eval.append = eval_append;
            run_eval(eval, out);
        } else if (pipe_cmd->parsed()) {
            finish_solver_flags(pipe.config, pipe_threads, pipe_mode);
            if (!pipe_gt.empty()) pipe.gt = pipe_gt;
            if (!pipe_csr.empty()) pipe.csr = pipe_csr;
            if (!pipe_workdir.empty()) pipe.workdir = pipe_workdir;
            if (!pipe_out.empty()) pipe.out = pipe_out;
            run_pipeline(pipe, out);
        } else if (preview_cmd->parsed()) {
            run_preview(preview, out);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace tvtv::cli
