#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "commands.hpp"
#include "test_support.hpp"
#include "tvtv/io.hpp"

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

using namespace tvtv;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("tvtv_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "tvtv");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

// Writes gt.hsc and csr.csv for a synthetic 64x64x8 scene.
void write_fixture(const TempDir& dir, std::size_t size = 64, std::size_t bands = 8) {
    write_hsc(synthetic_cube({size, size, bands, 12, 5}), dir / "gt.hsc");
    write_csr(random_csr(bands, 2, 6), dir / "csr.csv");
}

}  // namespace

TEST_CASE("simulate writes Z and Y with the expected shapes") {
    TempDir dir;
    write_fixture(dir);
    const Run r = run({"simulate", dir / "gt.hsc", dir / "csr.csv", "--block", "4", "--z-out", dir / "z.hsc",
                       "--y-out", dir / "y.hsc"});
    REQUIRE(r.code == 0);
    const HsCube z = read_hsc(dir / "z.hsc");
    const HsCube y = read_hsc(dir / "y.hsc");
    CHECK(z.rows() == 16);
    CHECK(z.cols() == 16);
    CHECK(z.bands() == 8);
    CHECK(y.rows() == 64);
    CHECK(y.bands() == 2);
    // In double precision the degraded pair is consistent.
    const auto pos = r.out.find("consistency_residual=");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(r.out.substr(pos + 21)) <= 1e-10);
}

TEST_CASE("simulate rejects a non-dividing block") {
    TempDir dir;
    write_fixture(dir);
    const Run r = run({"simulate", dir / "gt.hsc", dir / "csr.csv", "--block", "3", "--z-out", dir / "z.hsc",
                       "--y-out", dir / "y.hsc"});
    CHECK(r.code != 0);
    CHECK(r.err.find("error:") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "z.hsc"));
}

TEST_CASE("fuse: valid run and shape errors") {
    TempDir dir;
    write_fixture(dir);
    REQUIRE(run({"simulate", dir / "gt.hsc", dir / "csr.csv", "--block", "4", "--z-out", dir / "z.hsc", "--y-out",
                 dir / "y.hsc"})
                .code == 0);
    CHECK(run({"fuse", dir / "z.hsc", dir / "y.hsc", dir / "csr.csv", "--block", "4", "-o", dir / "w.hsc"}).code == 0);
    const HsCube w = read_hsc(dir / "w.hsc");
    CHECK(w.rows() == 64);
    CHECK(w.bands() == 8);

    CHECK(run({"fuse", dir / "z.hsc", dir / "y.hsc", dir / "csr.csv", "--block", "2", "-o", dir / "w2.hsc"}).code != 0);

    write_csr(random_csr(6, 2, 1), dir / "csr6.csv");
    const Run band = run({"fuse", dir / "z.hsc", dir / "y.hsc", dir / "csr6.csv", "--block", "4", "-o", dir / "w3.hsc"});
    CHECK(band.code != 0);
    CHECK(band.err.find("bands") != std::string::npos);
}

TEST_CASE("solve flags") {
    TempDir dir;
    write_fixture(dir, 32, 4);
    REQUIRE(run({"simulate", dir / "gt.hsc", dir / "csr.csv", "--block", "4", "--z-out", dir / "z.hsc", "--y-out",
                 dir / "y.hsc"})
                .code == 0);
    REQUIRE(run({"fuse", dir / "z.hsc", dir / "y.hsc", dir / "csr.csv", "--block", "4", "-o", dir / "w.hsc"}).code == 0);
    const std::vector<std::string> base{"solve", dir / "w.hsc", dir / "z.hsc", dir / "y.hsc", dir / "csr.csv",
                                        "--block", "4"};

    auto with = [&](std::vector<std::string> extra) {
        auto args = base;
        args.insert(args.end(), extra.begin(), extra.end());
        return run(args);
    };

    const Run zero_rho = with({"--rho", "0", "-o", dir / "x0.hsc"});
    CHECK(zero_rho.code != 0);
    CHECK_FALSE(fs::exists(dir / "x0.hsc"));

    const Run beta0 = with({"--beta", "0", "-o", dir / "xb.hsc", "--report", dir / "report.txt"});
    REQUIRE(beta0.code == 0);
    const std::string report = read_text(dir / "report.txt");
    for (const char* key : {"iterations=", "stop_reason=", "primal_res=", "dual_res=", "objective=", "res_A=",
                            "res_R=", "wall_time_s="}) {
        CHECK(report.find(key) != std::string::npos);
    }
    CHECK(report.find("stop_reason=residual") != std::string::npos);

    CHECK(with({"--mode", "sideways", "-o", dir / "xm.hsc"}).code != 0);
}

TEST_CASE("eval on identical files") {
    TempDir dir;
    write_fixture(dir, 32, 4);
    const Run r = run({"eval", dir / "gt.hsc", dir / "gt.hsc"});
    REQUIRE(r.code == 0);
    CHECK(r.out == "method,psnr,ssim,sam,ergas,rmse\nestimate,100.000,1.000,0.000,0.000,0.000\n");
}

TEST_CASE("eval --scale only changes ERGAS") {
    TempDir dir;
    write_fixture(dir, 32, 4);
    HsCube noisy = read_hsc(dir / "gt.hsc");
    add_gaussian_noise(noisy, 0.01, 3);
    write_hsc(noisy, dir / "noisy.hsc");

    std::ostringstream sink;
    const MetricsRow a = cli::run_eval({dir / "noisy.hsc", dir / "gt.hsc", 32.0, "x", std::nullopt}, sink);
    const MetricsRow b = cli::run_eval({dir / "noisy.hsc", dir / "gt.hsc", 8.0, "x", std::nullopt}, sink);
    CHECK(a.metrics.psnr == b.metrics.psnr);
    CHECK(a.metrics.ssim == b.metrics.ssim);
    CHECK(a.metrics.sam == b.metrics.sam);
    CHECK(a.metrics.rmse == b.metrics.rmse);
    CHECK(b.metrics.ergas == doctest::Approx(4.0 * a.metrics.ergas).epsilon(1e-12));

    const Run appended = run({"eval", dir / "noisy.hsc", dir / "gt.hsc", "--method", "noisy", "--append",
                              dir / "table.csv"});
    REQUIRE(appended.code == 0);
    const std::string table = read_text(dir / "table.csv");
    CHECK(table.rfind("method,psnr,ssim,sam,ergas,rmse\nnoisy,", 0) == 0);
}

TEST_CASE("eval on mismatched cubes fails") {
    TempDir dir;
    write_hsc(HsCube(16, 16, 2), dir / "a.hsc");
    write_hsc(HsCube(16, 16, 3), dir / "b.hsc");
    const Run r = run({"eval", dir / "a.hsc", dir / "b.hsc"});
    CHECK(r.code != 0);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("pipeline with a missing csr file") {
    TempDir dir;
    write_fixture(dir, 32, 4);
    const Run r = run({"pipeline", "--gt", dir / "gt.hsc", "--csr", dir / "nope.csv", "--block", "4"});
    CHECK(r.code != 0);
    CHECK(r.err.find("nope.csv") != std::string::npos);
}

TEST_CASE("pipeline reruns with the same seed are byte-identical") {
    TempDir dir;
    const std::vector<std::string> common{"pipeline", "--synthetic", "--rows", "32", "--cols", "32", "--bands", "4",
                                          "--block",  "4",           "--seed", "9",  "--noise", "0.02"};
    auto args1 = common, args2 = common;
    args1.insert(args1.end(), {"--workdir", dir / "a", "--out", dir / "a.csv"});
    args2.insert(args2.end(), {"--workdir", dir / "b", "--out", dir / "b.csv"});
    const Run r1 = run(args1);
    const Run r2 = run(args2);
    REQUIRE(r1.code == 0);
    REQUIRE(r2.code == 0);
    CHECK(r1.out == r2.out);
    CHECK(read_bytes(dir / "a.csv") == read_bytes(dir / "b.csv"));
    for (const char* f : {"gt.hsc", "csr.csv", "z.hsc", "y.hsc", "w.hsc", "xhat.hsc"}) {
        CHECK(read_bytes(dir.path / "a" / f) == read_bytes(dir.path / "b" / f));
    }
    CHECK(r1.out.find("baseline,") != std::string::npos);
    CHECK(r1.out.find("tvtv,") != std::string::npos);

    auto args3 = common;
    args3[11] = "10";
    CHECK(run(args3).out != r1.out);
}

TEST_CASE("preview subcommand writes a graymap") {
    TempDir dir;
    write_hsc(HsCube(2, 2, 1, {0.5, 0.5, 0.5, 0.5}), dir / "c.hsc");
    REQUIRE(run({"preview", dir / "c.hsc", "--band", "0", "-o", dir / "c.pgm"}).code == 0);
    const auto bytes = read_bytes(dir / "c.pgm");
    CHECK(bytes.size() == std::string("P5\n2 2\n255\n").size() + 4);
    CHECK(bytes.back() == 128);
    CHECK(run({"preview", dir / "c.hsc", "--band", "1", "-o", dir / "d.pgm"}).code != 0);
}

TEST_CASE("the installed binary reports errors through its exit code") {
    const char* exe = std::getenv("TVTV_CLI");
    if (exe == nullptr) return;
    TempDir dir;
    const std::string ok = std::string(exe) + " --help > " + (dir / "help.txt") + " 2>&1";
    CHECK(WEXITSTATUS(std::system(ok.c_str())) == 0);
    const std::string bad = std::string(exe) + " eval " + (dir / "missing.hsc") + " " + (dir / "missing.hsc") +
                            " > /dev/null 2> " + (dir / "err.txt");
    CHECK(WEXITSTATUS(std::system(bad.c_str())) != 0);
    CHECK(read_text(dir / "err.txt").find("missing.hsc") != std::string::npos);
}
