#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "byte_reader.hpp"
#include "hdrtk/io.hpp"

namespace hdrtk::io {

namespace {

constexpr int kMinRleWidth = 8;
constexpr int kMaxRleWidth = 0x7fff;
constexpr std::size_t kMinRun = 4;

struct RgbeHeader {
    int width = 0;
    int height = 0;
};

RgbeHeader parse_header(detail::ByteReader& in) {
    auto magic = in.line();
    if (!magic || (*magic != "#?RADIANCE" && *magic != "#?RGBE")) {
        throw Error(ErrorCode::MalformedHeader, "RGBE: missing #?RADIANCE / #?RGBE signature");
    }
    for (;;) {
        auto line = in.line();
        if (!line) throw Error(ErrorCode::MalformedHeader, "RGBE: header not terminated");
        if (line->empty()) break;
        if (line->rfind("FORMAT=", 0) == 0 && *line != "FORMAT=32-bit_rle_rgbe") {
            throw Error(ErrorCode::MalformedHeader, "RGBE: unsupported " + *line);
        }
        // Other variables (EXPOSURE, GAMMA, comments) carry no pixel semantics here.
    }
    auto res = in.line();
    if (!res) throw Error(ErrorCode::MalformedHeader, "RGBE: missing resolution line");

    char ya[3] = {};
    char xa[3] = {};
    int a = 0;
    int b = 0;
    char trailing = 0;
    if (std::sscanf(res->c_str(), "%2s %d %2s %d %c", ya, &a, xa, &b, &trailing) != 4) {
        throw Error(ErrorCode::MalformedHeader, "RGBE: bad resolution line '" + *res + "'");
    }
    const std::string first(ya);
    const std::string second(xa);
    auto valid_axis = [](const std::string& s) {
        return s.size() == 2 && (s[0] == '+' || s[0] == '-') && (s[1] == 'X' || s[1] == 'Y');
    };
    if (!valid_axis(first) || !valid_axis(second)) {
        throw Error(ErrorCode::MalformedHeader, "RGBE: bad resolution line '" + *res + "'");
    }
    if (first != "-Y" || second != "+X") {
        throw Error(ErrorCode::UnsupportedOrientation,
                    "RGBE: only -Y h +X w orientation is supported, got '" + *res + "'");
    }
    if (a < 1 || b < 1) throw Error(ErrorCode::MalformedHeader, "RGBE: non-positive dimensions");
    return {b, a};
}

void decode_scanline(detail::ByteReader& in, int width, std::vector<std::uint8_t>& scan) {
    scan.resize(static_cast<std::size_t>(width) * 4);
    const bool rle_width = width >= kMinRleWidth && width <= kMaxRleWidth;
    if (rle_width && in.remaining() >= 4) {
        auto head = in.take(4);
        const bool rle = head[0] == 2 && head[1] == 2 && (head[2] & 0x80) == 0;
        if (rle) {
            if (((head[2] << 8) | head[3]) != width) {
                throw Error(ErrorCode::CorruptData, "RGBE: scanline width mismatch");
            }
            for (int ch = 0; ch < 4; ++ch) {
                int x = 0;
                while (x < width) {
                    if (in.at_end()) throw Error(ErrorCode::TruncatedData, "RGBE: truncated scanline");
                    int count = in.get();
                    if (count > 128) {
                        count -= 128;
                        if (x + count > width) {
                            throw Error(ErrorCode::CorruptData, "RGBE: run overflows scanline");
                        }
                        if (in.at_end()) throw Error(ErrorCode::TruncatedData, "RGBE: truncated scanline");
                        const std::uint8_t v = in.get();
                        for (int k = 0; k < count; ++k) scan[4 * (x++) + ch] = v;
                    } else {
                        if (count == 0 || x + count > width) {
                            throw Error(ErrorCode::CorruptData, "RGBE: bad literal count");
                        }
                        if (in.remaining() < static_cast<std::size_t>(count)) {
                            throw Error(ErrorCode::TruncatedData, "RGBE: truncated scanline");
                        }
                        for (int k = 0; k < count; ++k) scan[4 * (x++) + ch] = in.get();
                    }
                }
            }
            return;
        }
        // Flat scanline: the four bytes already read are the first pixel.
        std::copy(head.begin(), head.end(), scan.begin());
        const std::size_t rest = scan.size() - 4;
        if (in.remaining() < rest) throw Error(ErrorCode::TruncatedData, "RGBE: truncated scanline");
        auto body = in.take(rest);
        std::copy(body.begin(), body.end(), scan.begin() + 4);
        return;
    }
    if (in.remaining() < scan.size()) throw Error(ErrorCode::TruncatedData, "RGBE: truncated scanline");
    auto body = in.take(scan.size());
    std::copy(body.begin(), body.end(), scan.begin());
}

void encode_channel_rle(const std::uint8_t* data, std::size_t n, std::size_t stride, Bytes& out) {
    auto at = [&](std::size_t i) { return data[i * stride]; };
    std::size_t cur = 0;
    while (cur < n) {
        // Find the next run of at least kMinRun identical bytes.
        std::size_t run_start = cur;
        std::size_t run_len = 0;
        while (run_start < n) {
            run_len = 1;
            while (run_start + run_len < n && run_len < 127 && at(run_start + run_len) == at(run_start)) {
                ++run_len;
            }
            if (run_len >= kMinRun) break;
            run_start += run_len;
        }
        if (run_start > n) run_start = n;
        while (cur < run_start) {
            const std::size_t count = std::min<std::size_t>(128, run_start - cur);
            out.push_back(static_cast<std::uint8_t>(count));
            for (std::size_t k = 0; k < count; ++k) out.push_back(at(cur + k));
            cur += count;
        }
        if (run_start < n && run_len >= kMinRun) {
            out.push_back(static_cast<std::uint8_t>(128 + run_len));
            out.push_back(at(run_start));
            cur = run_start + run_len;
        }
    }
}

}  // namespace

std::array<std::uint8_t, 4> encode_rgbe_pixel(double r, double g, double b) {
    const double v = std::max({r, g, b});
    if (!(v >= 1e-32)) return {0, 0, 0, 0};
    int e = 0;
    const double mant = std::frexp(v, &e);
    if (e > 127) {
        throw Error(ErrorCode::NonFiniteValue, "RGBE: value exceeds representable range");
    }
    const double scale = mant * 256.0 / v;
    auto q = [&](double c) {
        return static_cast<std::uint8_t>(std::clamp(std::floor(c * scale), 0.0, 255.0));
    };
    return {q(r), q(g), q(b), static_cast<std::uint8_t>(e + 128)};
}

std::array<double, 3> decode_rgbe_pixel(std::span<const std::uint8_t, 4> p) {
    if (p[3] == 0) return {0.0, 0.0, 0.0};
    const double f = std::ldexp(1.0, static_cast<int>(p[3]) - (128 + 8));
    return {p[0] * f, p[1] * f, p[2] * f};
}

HdrImage read_rgbe(std::span<const std::uint8_t> bytes) {
    detail::ByteReader in(bytes);
    const RgbeHeader hdr = parse_header(in);
    HdrImage img(hdr.width, hdr.height);
    std::vector<std::uint8_t> scan;
    for (int y = 0; y < hdr.height; ++y) {
        decode_scanline(in, hdr.width, scan);
        for (int x = 0; x < hdr.width; ++x) {
            const auto rgb = decode_rgbe_pixel(std::span<const std::uint8_t, 4>(scan.data() + 4 * x, 4));
            auto px = img.pixel(x, y);
            px[0] = rgb[0];
            px[1] = rgb[1];
            px[2] = rgb[2];
        }
    }
    return img;
}

Bytes write_rgbe(const HdrImage& img) {
    validate_hdr(img);
    const int w = img.width();
    const int h = img.height();
    const std::string header = "#?RADIANCE\nFORMAT=32-bit_rle_rgbe\n\n-Y " + std::to_string(h) +
                               " +X " + std::to_string(w) + "\n";
    Bytes out(header.begin(), header.end());
    out.reserve(out.size() + static_cast<std::size_t>(w) * h * 4);
    const bool rle = w >= kMinRleWidth && w <= kMaxRleWidth;
    std::vector<std::uint8_t> scan(static_cast<std::size_t>(w) * 4);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            auto px = img.pixel(x, y);
            const auto q = encode_rgbe_pixel(px[0], px[1], px[2]);
            std::copy(q.begin(), q.end(), scan.begin() + 4 * x);
        }
        if (!rle) {
            out.insert(out.end(), scan.begin(), scan.end());
            continue;
        }
        out.push_back(2);
        out.push_back(2);
        out.push_back(static_cast<std::uint8_t>(w >> 8));
        out.push_back(static_cast<std::uint8_t>(w & 0xff));
        for (int ch = 0; ch < 4; ++ch) encode_channel_rle(scan.data() + ch, w, 4, out);
    }
    return out;
}

}  // namespace hdrtk::io
