#include "scadtv/cli.hpp"

#include "scadtv/csv_io.hpp"
#include "scadtv/estimators.hpp"
#include "scadtv/metrics.hpp"
#include "scadtv/pgm_io.hpp"

#include <json.hpp>

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <unistd.h>

using namespace scadtv;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("scadtv_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("grid spec parsing") {
    const auto grid = parse_log_grid("1:100:3");
    REQUIRE(grid.size() == 3);
    CHECK(grid[0] == doctest::Approx(1.0));
    CHECK(grid[1] == doctest::Approx(10.0));
    CHECK(grid[2] == doctest::Approx(100.0));

    CHECK(parse_log_grid("5:5:1") == std::vector<double>{5.0});
    CHECK_THROWS_AS(parse_log_grid("junk"), std::invalid_argument);
    CHECK_THROWS_AS(parse_log_grid("1:100:0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_log_grid("-1:100:4"), std::invalid_argument);
    CHECK_THROWS_AS(parse_log_grid("1:100:4:9"), std::invalid_argument);
}

TEST_CASE("generate writes the image and rejects bad patterns") {
    TempDir tmp;
    const auto out = tmp.file("img.pgm");
    CHECK(run_cli({"generate", "--pattern", "nested-squares", "--size", "64", "--band-width",
                   "8", "--out", out}) == 0);
    const Image img = read_pgm(out);
    CHECK(img.width == 64);
    CHECK(img.height == 64);

    CHECK(run_cli({"generate", "--pattern", "bogus", "--out", tmp.file("x.pgm")}) == 2);
    CHECK(run_cli({"generate"}) == 2); // --out is required
}

TEST_CASE("generate rotated diamonds has the requested level support") {
    TempDir tmp;
    const auto out = tmp.file("dia.pgm");
    CHECK(run_cli({"generate", "--pattern", "rotated-diamonds", "--size", "128", "--band-width",
                   "16", "--levels", "0,85,170,255", "--out", out}) == 0);
    const Image img = read_pgm(out);
    const std::set<double> seen(img.data.begin(), img.data.end());
    CHECK(seen == std::set<double>{0.0, 85.0, 170.0, 255.0});
}

TEST_CASE("add-noise is reproducible per seed and writes a sidecar") {
    TempDir tmp;
    const auto src = tmp.file("src.pgm");
    REQUIRE(run_cli({"generate", "--pattern", "nested-squares", "--size", "64", "--band-width",
                     "16", "--out", src}) == 0);

    const auto n1 = tmp.file("n1.pgm");
    const auto n2 = tmp.file("n2.pgm");
    CHECK(run_cli({"add-noise", "--sigma", "20", "--seed", "9", "--in", src, "--out", n1}) == 0);
    CHECK(run_cli({"add-noise", "--sigma", "20", "--seed", "9", "--in", src, "--out", n2}) == 0);
    CHECK(slurp(n1) == slurp(n2));
    CHECK(fs::exists(n1 + ".json"));

    const auto meta = nlohmann::json::parse(std::ifstream(n1 + ".json"));
    CHECK(meta.at("sigma_requested") == 20.0);
    CHECK(meta.at("seed") == 9);

    // decoded noise level is recoverable from the 16-bit file
    const Image noisy = decode_pgm16(read_pgm_raw(n1), meta.at("offset"), meta.at("scale"));
    CHECK(std::abs(estimate_sigma(noisy) - 20.0) / 20.0 < 0.15);

    CHECK(run_cli({"add-noise", "--sigma", "-5", "--in", src, "--out", tmp.file("bad.pgm")}) !=
          0);
}

TEST_CASE("denoise with a vanishing lambda approximates the input") {
    TempDir tmp;
    const auto src = tmp.file("src.pgm");
    REQUIRE(run_cli({"generate", "--pattern", "nested-squares", "--size", "32", "--band-width",
                     "4", "--levels", "60,180", "--out", src}) == 0);
    const auto noisy = tmp.file("noisy.pgm");
    REQUIRE(run_cli({"add-noise", "--sigma", "5", "--seed", "3", "--in", src, "--out", noisy}) ==
            0);

    const auto out = tmp.file("out.pgm");
    CHECK(run_cli({"denoise", "--method", "tv", "--lambda", "1e-9", "--in", noisy, "--out", out,
                   "--truth", noisy}) == 0);
    // output is 8-bit quantized, so the difference is rounding-only
    const Image meta_noisy = decode_pgm16(read_pgm_raw(noisy), 1024.0, 16.0);
    CHECK(mse(meta_noisy, read_pgm(out)) < 0.1);
}

TEST_CASE("denoise flag consistency") {
    TempDir tmp;
    const auto src = tmp.file("src.pgm");
    REQUIRE(run_cli({"generate", "--pattern", "nested-squares", "--size", "32", "--band-width",
                     "4", "--out", src}) == 0);
    const auto out = tmp.file("out.pgm");

    CHECK(run_cli({"denoise", "--method", "tv", "--lambda", "5", "--e", "10", "--in", src,
                   "--out", out}) == 2);
    CHECK(run_cli({"denoise", "--method", "tv", "--lambda", "5", "--K", "3", "--in", src,
                   "--out", out}) == 2);
    CHECK(run_cli({"denoise", "--method", "satv", "--lambda", "5", "--a", "3.7", "--in", src,
                   "--out", out}) == 2);
    // satv without --e runs on the default with a warning
    CHECK(run_cli({"denoise", "--method", "satv", "--lambda", "5", "--in", src, "--out", out}) ==
          0);
}

TEST_CASE("denoise writes a report with a nonincreasing scad objective trace") {
    TempDir tmp;
    const auto src = tmp.file("src.pgm");
    REQUIRE(run_cli({"generate", "--pattern", "nested-squares", "--size", "32", "--band-width",
                     "4", "--out", src}) == 0);
    const auto noisy = tmp.file("noisy.pgm");
    REQUIRE(run_cli({"add-noise", "--sigma", "20", "--seed", "5", "--in", src, "--out",
                     noisy}) == 0);

    const auto out = tmp.file("out.pgm");
    const auto report = tmp.file("report.json");
    CHECK(run_cli({"denoise", "--method", "scad", "--lambda", "40", "--K", "3", "--in", noisy,
                   "--out", out, "--truth", src, "--report", report}) == 0);

    const auto meta = nlohmann::json::parse(std::ifstream(report));
    CHECK(meta.at("method") == "scad");
    CHECK(meta.at("mse").get<double>() > 0.0);
    const auto trace = meta.at("objective_trace").get<std::vector<double>>();
    REQUIRE(trace.size() == 4);
    for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1] * (1 + 1e-12));
    CHECK(meta.at("level_shifts").size() == 2);
}

TEST_CASE("denoise exports histogram and level-shift csv files") {
    TempDir tmp;
    const auto src = tmp.file("src.pgm");
    REQUIRE(run_cli({"generate", "--pattern", "nested-squares", "--size", "32", "--band-width",
                     "4", "--out", src}) == 0);
    const auto noisy = tmp.file("noisy.pgm");
    REQUIRE(run_cli({"add-noise", "--sigma", "10", "--seed", "2", "--in", src, "--out",
                     noisy}) == 0);

    const auto out = tmp.file("out.pgm");
    const auto hist = tmp.file("hist.csv");
    const auto shifts = tmp.file("shifts.csv");
    CHECK(run_cli({"denoise", "--method", "tv", "--lambda", "15", "--in", noisy, "--out", out,
                   "--truth", src, "--histogram", hist, "--level-shifts", shifts}) == 0);

    std::ifstream hin(hist);
    std::string line;
    CHECK(std::getline(hin, line));
    CHECK(line == "bin_lo,bin_hi,count");
    long long total = 0;
    while (std::getline(hin, line)) {
        const auto last = line.rfind(',');
        total += std::stoll(line.substr(last + 1));
    }
    CHECK(total == 32 * 32);

    std::ifstream sin(shifts);
    CHECK(std::getline(sin, line));
    CHECK(line == "level,shift");
    int rows = 0;
    while (std::getline(sin, line)) ++rows;
    CHECK(rows == 2);

    // shifts without truth is a usage error
    CHECK(run_cli({"denoise", "--method", "tv", "--lambda", "15", "--in", noisy, "--out", out,
                   "--level-shifts", shifts}) == 2);
}

TEST_CASE("sweep and sure accept the satv and scad methods") {
    TempDir tmp;
    const auto src = tmp.file("src.pgm");
    REQUIRE(run_cli({"generate", "--pattern", "nested-squares", "--size", "32", "--band-width",
                     "4", "--out", src}) == 0);
    const auto noisy = tmp.file("noisy.pgm");
    REQUIRE(run_cli({"add-noise", "--sigma", "20", "--seed", "4", "--in", src, "--out",
                     noisy}) == 0);

    const auto satv_csv = tmp.file("satv.csv");
    CHECK(run_cli({"sweep", "--method", "satv", "--e", "10", "--lambda1", "20", "--lambdas",
                   "20:80:3", "--in", noisy, "--truth", src, "--out-csv", satv_csv,
                   "--iters", "300"}) == 0);
    CHECK(read_csv(satv_csv).size() == 3);

    const auto scad_csv = tmp.file("scad.csv");
    const auto restored = tmp.file("restored.pgm");
    CHECK(run_cli({"sure", "--method", "scad", "--lambdas", "20:80:3", "--in", noisy,
                   "--out-csv", scad_csv, "--out", restored, "--iters", "300", "--tol",
                   "1e-5"}) == 0);
    CHECK(read_csv(scad_csv).size() == 3);
    CHECK(fs::exists(restored));
}

TEST_CASE("sweep writes an ordered csv and prints the best row") {
    TempDir tmp;
    const auto src = tmp.file("src.pgm");
    REQUIRE(run_cli({"generate", "--pattern", "nested-squares", "--size", "32", "--band-width",
                     "4", "--out", src}) == 0);
    const auto noisy = tmp.file("noisy.pgm");
    REQUIRE(run_cli({"add-noise", "--sigma", "20", "--seed", "5", "--in", src, "--out",
                     noisy}) == 0);

    const auto csv = tmp.file("sweep.csv");
    CHECK(run_cli({"sweep", "--method", "tv", "--lambdas", "5:40:4", "--in", noisy, "--truth",
                   src, "--out-csv", csv}) == 0);
    const auto records = read_csv(csv);
    REQUIRE(records.size() == 4);
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(records[i].mse.has_value());
        CHECK(std::isfinite(*records[i].mse));
        if (i > 0) CHECK(records[i].lambda > records[i - 1].lambda);
    }

    // single-point grid returns that point
    const auto single = tmp.file("single.csv");
    CHECK(run_cli({"sweep", "--method", "tv", "--lambdas", "10:10:1", "--in", noisy, "--truth",
                   src, "--out-csv", single}) == 0);
    CHECK(read_csv(single).size() == 1);
}

TEST_CASE("sure honors the sigma override and is reproducible per seed") {
    TempDir tmp;
    const auto src = tmp.file("src.pgm");
    REQUIRE(run_cli({"generate", "--pattern", "nested-squares", "--size", "32", "--band-width",
                     "4", "--out", src}) == 0);
    const auto noisy = tmp.file("noisy.pgm");
    REQUIRE(run_cli({"add-noise", "--sigma", "20", "--seed", "5", "--in", src, "--out",
                     noisy}) == 0);

    const auto c1 = tmp.file("s1.csv");
    const auto c2 = tmp.file("s2.csv");
    const auto c3 = tmp.file("s3.csv");
    const std::vector<std::string> base = {"sure",   "--method",  "tv",  "--lambdas", "5:40:4",
                                           "--in",   noisy,       "--seed", "11",
                                           "--iters", "300", "--tol", "1e-5"};
    auto with = [&](const std::string& csv, std::vector<std::string> extra) {
        auto args = base;
        args.insert(args.end(), {"--out-csv", csv});
        args.insert(args.end(), extra.begin(), extra.end());
        return args;
    };
    CHECK(run_cli(with(c1, {})) == 0);
    CHECK(run_cli(with(c2, {})) == 0);
    CHECK(slurp(c1) == slurp(c2));

    CHECK(run_cli(with(c3, {"--sigma", "12"})) == 0);
    CHECK(slurp(c3) != slurp(c1)); // a different sigma changes the curve
}

TEST_CASE("two-pixel command verifies against the oracle") {
    CHECK(run_cli({"two-pixel", "--y1", "100", "--y2", "0", "--lambda", "10", "--penalty",
                   "scad", "--verify"}) == 0);
    CHECK(run_cli({"two-pixel", "--y1", "10", "--y2", "2", "--lambda", "4", "--penalty", "tv",
                   "--verify"}) == 0);
    CHECK(run_cli({"two-pixel", "--y1", "5", "--y2", "5", "--lambda", "1"}) == 0);
}

TEST_CASE("failed commands remove their partial outputs") {
    TempDir tmp;
    const auto src = tmp.file("src.pgm");
    REQUIRE(run_cli({"generate", "--pattern", "nested-squares", "--size", "32", "--band-width",
                     "4", "--out", src}) == 0);

    const auto out = tmp.file("partial.pgm");
    // the restored image is written before the truth file fails to load
    CHECK(run_cli({"denoise", "--method", "tv", "--lambda", "5", "--in", src, "--out", out,
                   "--truth", tmp.file("missing.pgm")}) == 1);
    CHECK(!fs::exists(out));
}
