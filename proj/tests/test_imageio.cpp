#include "scadtv/csv_io.hpp"
#include "scadtv/pgm_io.hpp"

#include "scadtv/noise.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <unistd.h>

using namespace scadtv;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("scadtv_io_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_bytes(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

} // namespace

TEST_CASE("minimal ascii pgm parses") {
    TempDir tmp;
    const auto path = tmp.file("min.pgm");
    write_bytes(path, "P2 2 1 255 0 255");
    const Image img = read_pgm(path);
    CHECK(img.width == 2);
    CHECK(img.height == 1);
    CHECK(img[0] == 0.0);
    CHECK(img[1] == 255.0);
}

TEST_CASE("header comments are skipped") {
    TempDir tmp;
    const auto path = tmp.file("comment.pgm");
    write_bytes(path, "P2 # a comment\n2 2 # another\n255\n1 2 3 4");
    const Image img = read_pgm(path);
    CHECK(img.at(0, 0) == 1.0);
    CHECK(img.at(1, 1) == 4.0);
}

TEST_CASE("binary pgm round trip is lossless on integer images") {
    TempDir tmp;
    Image img(13, 9);
    for (std::size_t i = 0; i < img.size(); ++i)
        img[i] = std::floor(uniform_at(3, i) * 256.0);
    const auto path = tmp.file("rt.pgm");
    write_pgm(img, path, false);
    const Image back = read_pgm(path);
    CHECK(back.width == img.width);
    CHECK(back.height == img.height);
    CHECK(back.data == img.data);
}

TEST_CASE("16-bit pgm values are scaled by 255/maxval") {
    TempDir tmp;
    const auto path = tmp.file("wide.pgm");
    std::string payload = "P5 3 1 65535 ";
    const auto push16 = [&payload](unsigned v) {
        payload.push_back(static_cast<char>(v >> 8));
        payload.push_back(static_cast<char>(v & 0xff));
    };
    push16(0);
    push16(65535);
    push16(32768);
    write_bytes(path, payload);
    const Image img = read_pgm(path);
    CHECK(img[0] == 0.0);
    CHECK(img[1] == doctest::Approx(255.0).epsilon(1e-14));
    CHECK(img[2] == doctest::Approx(32768.0 * 255.0 / 65535.0).epsilon(1e-14));
}

TEST_CASE("parse failures are distinct and carry byte offsets") {
    TempDir tmp;

    const auto magic = tmp.file("magic.pgm");
    write_bytes(magic, "P6 2 2 255 garbage");
    try {
        read_pgm(magic);
        FAIL("expected bad magic");
    } catch (const PgmError& e) {
        CHECK(e.kind == PgmError::Kind::bad_magic);
        CHECK(e.offset == 0);
        CHECK(std::string(e.what()).find("offset") != std::string::npos);
    }

    const auto header = tmp.file("header.pgm");
    write_bytes(header, "P2 abc 1 255 0");
    try {
        read_pgm(header);
        FAIL("expected malformed header");
    } catch (const PgmError& e) {
        CHECK(e.kind == PgmError::Kind::malformed_header);
        CHECK(e.offset == 3);
    }

    const auto trunc = tmp.file("trunc.pgm");
    write_bytes(trunc, std::string("P5 2 2 255 ") + "\x01\x02");
    try {
        read_pgm(trunc);
        FAIL("expected truncated payload");
    } catch (const PgmError& e) {
        CHECK(e.kind == PgmError::Kind::truncated);
        CHECK(e.offset == 13);
    }

    const auto overflow = tmp.file("over.pgm");
    write_bytes(overflow, "P2 2 1 100 5 200");
    CHECK_THROWS_AS(read_pgm(overflow), PgmError);

    CHECK_THROWS_AS(read_pgm(tmp.file("missing.pgm")), PgmError);
}

TEST_CASE("write_pgm clamps or rejects out-of-range values") {
    TempDir tmp;
    Image img(2, 1);
    img[0] = 300.0;
    img[1] = 17.4;

    const auto clamped = tmp.file("clamped.pgm");
    write_pgm(img, clamped, true);
    const Image back = read_pgm(clamped);
    CHECK(back[0] == 255.0);
    CHECK(back[1] == 17.0);

    CHECK_THROWS_AS(write_pgm(img, tmp.file("strict.pgm"), false), std::domain_error);
    img[0] = -3.0;
    CHECK_THROWS_AS(write_pgm(img, tmp.file("strict2.pgm"), false), std::domain_error);
}

TEST_CASE("16-bit affine encoding round trips on its quantization grid") {
    TempDir tmp;
    Image img(8, 8);
    for (std::size_t i = 0; i < img.size(); ++i)
        img[i] = std::round((uniform_at(9, i) * 500.0 - 100.0) * 16.0) / 16.0;
    const auto path = tmp.file("affine.pgm");
    write_pgm16(img, path, 1024.0, 16.0);
    const Image back = decode_pgm16(read_pgm_raw(path), 1024.0, 16.0);
    for (std::size_t i = 0; i < img.size(); ++i)
        CHECK(back[i] == doctest::Approx(img[i]).epsilon(1e-12));

    Image out_of_range(1, 1, 1e6);
    CHECK_THROWS_AS(write_pgm16(out_of_range, tmp.file("bad.pgm"), 1024.0, 16.0),
                    std::domain_error);
}

TEST_CASE("csv writing: header, order, precision") {
    TempDir tmp;
    const auto path = tmp.file("sweep.csv");

    write_csv({}, path);
    {
        std::ifstream in(path);
        std::string line;
        CHECK(std::getline(in, line));
        CHECK(line == "lambda,mse,sure");
        CHECK(!std::getline(in, line));
    }

    SweepRecord rec;
    rec.lambda = 1.0;
    rec.mse = 17.13;
    rec.sure = 18.2;
    write_csv({rec}, path);
    {
        std::ifstream in(path);
        std::string header, row, extra;
        CHECK(std::getline(in, header));
        CHECK(std::getline(in, row));
        CHECK(row == "1,17.13,18.2");
        CHECK(!std::getline(in, extra));
    }

    // unsorted input comes out ordered by lambda, absent fields stay empty
    SweepRecord r1{2.0, std::nullopt, 4.0};
    SweepRecord r2{0.5, 1.0 / 3.0, std::nullopt};
    write_csv({r1, r2}, path);
    const auto back = read_csv(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].lambda == 0.5);
    CHECK(back[0].mse == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    CHECK(!back[0].sure);
    CHECK(back[1].lambda == 2.0);
    CHECK(!back[1].mse);
    CHECK(back[1].sure == 4.0);
}

TEST_CASE("two-byte pgm with a non-65535 maxval scales by 255/maxval") {
    TempDir tmp;
    const auto path = tmp.file("mv300.pgm");
    std::string payload = "P5 2 1 300 ";
    payload.push_back(static_cast<char>(300 >> 8));
    payload.push_back(static_cast<char>(300 & 0xff));
    payload.push_back(0);
    payload.push_back(150);
    write_bytes(path, payload);
    const Image img = read_pgm(path);
    CHECK(img[0] == doctest::Approx(255.0).epsilon(1e-14));
    CHECK(img[1] == doctest::Approx(150.0 * 255.0 / 300.0).epsilon(1e-14));
}

TEST_CASE("zero dimensions are a malformed header") {
    TempDir tmp;
    const auto path = tmp.file("zero.pgm");
    write_bytes(path, "P2 0 1 255 ");
    try {
        read_pgm(path);
        FAIL("expected malformed header");
    } catch (const PgmError& e) {
        CHECK(e.kind == PgmError::Kind::malformed_header);
    }
}

TEST_CASE("histogram and level-shift csv writers") {
    TempDir tmp;
    const auto hist = tmp.file("hist.csv");
    write_histogram_csv({3, 0, 7}, 0.0, 30.0, hist);
    {
        std::ifstream in(hist);
        std::string line;
        CHECK(std::getline(in, line));
        CHECK(line == "bin_lo,bin_hi,count");
        CHECK(std::getline(in, line));
        CHECK(line == "0,10,3");
        CHECK(std::getline(in, line));
        CHECK(line == "10,20,0");
        CHECK(std::getline(in, line));
        CHECK(line == "20,30,7");
    }
    CHECK_THROWS_AS(write_histogram_csv({}, 0.0, 1.0, hist), std::invalid_argument);

    const auto shifts = tmp.file("shifts.csv");
    write_level_shifts_csv({{0.0, 1.25}, {255.0, -0.5}}, shifts);
    {
        std::ifstream in(shifts);
        std::string line;
        CHECK(std::getline(in, line));
        CHECK(line == "level,shift");
        CHECK(std::getline(in, line));
        CHECK(line == "0,1.25");
        CHECK(std::getline(in, line));
        CHECK(line == "255,-0.5");
    }
}

TEST_CASE("csv re-serialization is idempotent") {
    TempDir tmp;
    std::vector<SweepRecord> records;
    for (int i = 0; i < 10; ++i) {
        SweepRecord rec;
        rec.lambda = 0.1 * (i + 1);
        rec.mse = 100.0 * uniform_at(21, 2 * i);
        rec.sure = 100.0 * uniform_at(21, 2 * i + 1) - 50.0;
        records.push_back(rec);
    }
    const auto p1 = tmp.file("a.csv");
    const auto p2 = tmp.file("b.csv");
    write_csv(records, p1);
    write_csv(read_csv(p1), p2);

    std::ifstream f1(p1), f2(p2);
    std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(s1 == s2);
}
