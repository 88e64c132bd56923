#include "scadtv/pgm_io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>

namespace scadtv {

namespace {

/// Byte-counting reader over an input stream.
class Reader {
  public:
    explicit Reader(std::istream& in) : in_(in) {}

    int get() {
        const int ch = in_.get();
        if (ch != EOF) ++offset_;
        return ch;
    }

    std::size_t offset() const { return offset_; }

    std::size_t read_block(char* dst, std::size_t n) {
        in_.read(dst, static_cast<std::streamsize>(n));
        const auto got = static_cast<std::size_t>(in_.gcount());
        offset_ += got;
        return got;
    }

  private:
    std::istream& in_;
    std::size_t offset_ = 0;
};

/// Skips whitespace and '#' comments; returns the first payload character,
/// or EOF.
int skip_separators(Reader& r) {
    int ch = r.get();
    for (;;) {
        if (ch == '#') {
            while (ch != '\n' && ch != EOF) ch = r.get();
        } else if (ch != EOF && std::isspace(static_cast<unsigned char>(ch))) {
            ch = r.get();
        } else {
            return ch;
        }
    }
}

long parse_header_int(Reader& r, const char* what) {
    const std::size_t start = r.offset();
    int ch = skip_separators(r);
    if (ch == EOF)
        throw PgmError(PgmError::Kind::malformed_header,
                       std::string("missing ") + what + " in PGM header", r.offset());
    if (!std::isdigit(static_cast<unsigned char>(ch)))
        throw PgmError(PgmError::Kind::malformed_header,
                       std::string("non-numeric ") + what + " in PGM header", r.offset() - 1);
    long value = 0;
    while (ch != EOF && std::isdigit(static_cast<unsigned char>(ch))) {
        value = value * 10 + (ch - '0');
        if (value > 1000000)
            throw PgmError(PgmError::Kind::malformed_header,
                           std::string(what) + " out of range in PGM header", start);
        ch = r.get();
    }
    if (ch != EOF && !std::isspace(static_cast<unsigned char>(ch)) && ch != '#')
        throw PgmError(PgmError::Kind::malformed_header,
                       std::string("malformed ") + what + " in PGM header", r.offset() - 1);
    return value;
}

} // namespace

PgmRaw read_pgm_raw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw PgmError(PgmError::Kind::io, "cannot open '" + path + "'", 0);
    Reader r(in);

    const int m0 = r.get();
    const int m1 = r.get();
    if (m0 != 'P' || (m1 != '2' && m1 != '5'))
        throw PgmError(PgmError::Kind::bad_magic, "not a P2/P5 PGM file", 0);
    const bool binary = m1 == '5';

    PgmRaw raw;
    const long w = parse_header_int(r, "width");
    const long h = parse_header_int(r, "height");
    const long maxval = parse_header_int(r, "maxval");
    if (w < 1 || h < 1)
        throw PgmError(PgmError::Kind::malformed_header, "PGM dimensions must be positive",
                       r.offset());
    if (maxval < 1 || maxval > 65535)
        throw PgmError(PgmError::Kind::malformed_header, "PGM maxval must be in [1,65535]",
                       r.offset());
    raw.width = static_cast<int>(w);
    raw.height = static_cast<int>(h);
    raw.maxval = static_cast<int>(maxval);

    const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    raw.values.resize(count);

    if (binary) {
        // parse_header_int consumed exactly one separator byte after maxval.
        const int bytes_per_sample = maxval > 255 ? 2 : 1;
        std::vector<char> buf(count * bytes_per_sample);
        const std::size_t got = r.read_block(buf.data(), buf.size());
        if (got != buf.size())
            throw PgmError(PgmError::Kind::truncated, "PGM payload truncated", r.offset());
        for (std::size_t i = 0; i < count; ++i) {
            if (bytes_per_sample == 1) {
                raw.values[i] = static_cast<std::uint8_t>(buf[i]);
            } else {
                const auto hi = static_cast<std::uint8_t>(buf[2 * i]);
                const auto lo = static_cast<std::uint8_t>(buf[2 * i + 1]);
                raw.values[i] = static_cast<std::uint16_t>((hi << 8) | lo);
            }
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            int ch = skip_separators(r);
            if (ch == EOF)
                throw PgmError(PgmError::Kind::truncated, "PGM payload truncated", r.offset());
            if (!std::isdigit(static_cast<unsigned char>(ch)))
                throw PgmError(PgmError::Kind::malformed_header,
                               "non-numeric sample in P2 payload", r.offset() - 1);
            long value = 0;
            while (ch != EOF && std::isdigit(static_cast<unsigned char>(ch))) {
                value = value * 10 + (ch - '0');
                if (value > 65535)
                    throw PgmError(PgmError::Kind::malformed_header,
                                   "P2 sample out of range", r.offset());
                ch = r.get();
            }
            raw.values[i] = static_cast<std::uint16_t>(value);
        }
    }

    for (std::size_t i = 0; i < count; ++i) {
        if (raw.values[i] > raw.maxval)
            throw PgmError(PgmError::Kind::malformed_header,
                           "sample value exceeds declared maxval", r.offset());
    }
    return raw;
}

Image read_pgm(const std::string& path) {
    const PgmRaw raw = read_pgm_raw(path);
    Image img(raw.width, raw.height);
    const double scale = raw.maxval > 255 ? 255.0 / raw.maxval : 1.0;
    for (std::size_t i = 0; i < img.size(); ++i)
        img[i] = raw.values[i] * scale;
    return img;
}

void write_pgm(const Image& img, const std::string& path, bool clamp) {
    std::vector<std::uint8_t> bytes(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) {
        double v = std::round(img[i]);
        if (clamp) {
            v = std::min(255.0, std::max(0.0, v));
        } else if (v < 0.0 || v > 255.0) {
            throw std::domain_error("write_pgm: value " + std::to_string(img[i]) +
                                    " outside [0,255] in strict mode");
        }
        bytes[i] = static_cast<std::uint8_t>(v);
    }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw PgmError(PgmError::Kind::io, "cannot open '" + path + "' for writing", 0);
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw PgmError(PgmError::Kind::io, "write failed for '" + path + "'", 0);
}

void write_pgm16(const Image& img, const std::string& path, double offset, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("write_pgm16: scale must be > 0");
    std::vector<std::uint8_t> bytes(2 * img.size());
    for (std::size_t i = 0; i < img.size(); ++i) {
        const double enc = std::round((img[i] + offset) * scale);
        if (!(enc >= 0.0 && enc <= 65535.0))
            throw std::domain_error("write_pgm16: encoded value out of range for pixel " +
                                    std::to_string(i));
        const auto v = static_cast<std::uint16_t>(enc);
        bytes[2 * i] = static_cast<std::uint8_t>(v >> 8);
        bytes[2 * i + 1] = static_cast<std::uint8_t>(v & 0xff);
    }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw PgmError(PgmError::Kind::io, "cannot open '" + path + "' for writing", 0);
    out << "P5\n" << img.width << " " << img.height << "\n65535\n";
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw PgmError(PgmError::Kind::io, "write failed for '" + path + "'", 0);
}

Image decode_pgm16(const PgmRaw& raw, double offset, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("decode_pgm16: scale must be > 0");
    Image img(raw.width, raw.height);
    for (std::size_t i = 0; i < img.size(); ++i)
        img[i] = raw.values[i] / scale - offset;
    return img;
}

} // namespace scadtv
