#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <string>
#include <system_error>

#include "byte_reader.hpp"
#include "hdrtk/color.hpp"
#include "hdrtk/io.hpp"

namespace hdrtk::io {

namespace {

int parse_int(const std::optional<std::string>& tok, const char* what) {
    int v = 0;
    if (!tok) throw Error(ErrorCode::MalformedHeader, std::string(what) + ": header ends early");
    auto [p, ec] = std::from_chars(tok->data(), tok->data() + tok->size(), v);
    if (ec != std::errc() || p != tok->data() + tok->size() || v < 1) {
        throw Error(ErrorCode::MalformedHeader, std::string(what) + ": bad header field '" + *tok + "'");
    }
    return v;
}

std::uint32_t byteswap32(std::uint32_t v) {
    return (v >> 24) | ((v >> 8) & 0xff00u) | ((v << 8) & 0xff0000u) | (v << 24);
}

std::string lower_ext(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext;
}

}  // namespace

const char* to_string(FileFormat f) noexcept {
    switch (f) {
        case FileFormat::RadianceRGBE: return "rgbe";
        case FileFormat::PFM: return "pfm";
        case FileFormat::PPM6: return "ppm";
    }
    return "unknown";
}

FileFormat detect_format(std::span<const std::uint8_t> bytes) {
    if (detail::starts_with(bytes, "#?RADIANCE") || detail::starts_with(bytes, "#?RGBE")) {
        return FileFormat::RadianceRGBE;
    }
    auto ws_after = [&](std::size_t i) { return bytes.size() > i && detail::ByteReader::is_space(bytes[i]); };
    if (detail::starts_with(bytes, "PF") && ws_after(2)) return FileFormat::PFM;
    if (detail::starts_with(bytes, "Pf") && ws_after(2)) {
        throw Error(ErrorCode::GrayscalePfm, "grayscale PFM (Pf) is not supported");
    }
    if (detail::starts_with(bytes, "P6") && ws_after(2)) return FileFormat::PPM6;
    throw Error(ErrorCode::UnsupportedFormat, "unrecognized image signature");
}

HdrImage read_pfm(std::span<const std::uint8_t> bytes) {
    detail::ByteReader in(bytes);
    auto magic = in.token();
    if (magic && *magic == "Pf") throw Error(ErrorCode::GrayscalePfm, "grayscale PFM (Pf) is not supported");
    if (!magic || *magic != "PF") throw Error(ErrorCode::MalformedHeader, "PFM: missing PF signature");
    const int w = parse_int(in.token(), "PFM");
    const int h = parse_int(in.token(), "PFM");
    auto scale_tok = in.token();
    if (!scale_tok) throw Error(ErrorCode::MalformedHeader, "PFM: missing scale");
    double scale = 0.0;
    try {
        std::size_t used = 0;
        scale = std::stod(*scale_tok, &used);
        if (used != scale_tok->size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw Error(ErrorCode::MalformedHeader, "PFM: bad scale '" + *scale_tok + "'");
    }
    if (scale == 0.0) throw Error(ErrorCode::MalformedHeader, "PFM: zero scale");
    // Exactly one whitespace byte separates the header from the payload.
    if (in.at_end() || !detail::ByteReader::is_space(in.get())) {
        throw Error(ErrorCode::MalformedHeader, "PFM: header not terminated");
    }
    const bool file_little = scale < 0.0;
    const bool host_little = std::endian::native == std::endian::little;

    const std::size_t count = static_cast<std::size_t>(w) * h * 3;
    if (in.remaining() < count * 4) throw Error(ErrorCode::TruncatedData, "PFM: truncated payload");
    auto payload = in.take(count * 4);

    HdrImage img(w, h);
    std::size_t k = 0;
    for (int row = 0; row < h; ++row) {
        const int y = h - 1 - row;
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < 3; ++c, ++k) {
                std::uint32_t bits = 0;
                std::memcpy(&bits, payload.data() + 4 * k, 4);
                if (file_little != host_little) bits = byteswap32(bits);
                img.at(x, y, c) = static_cast<double>(std::bit_cast<float>(bits));
            }
        }
    }
    validate_hdr(img);
    return img;
}

Bytes write_pfm(const HdrImage& img) {
    validate_hdr(img);
    const int w = img.width();
    const int h = img.height();
    const std::string header = "PF\n" + std::to_string(w) + " " + std::to_string(h) + "\n-1.0\n";
    Bytes out(header.begin(), header.end());
    out.reserve(out.size() + img.size() * 4);
    const bool host_little = std::endian::native == std::endian::little;
    for (int row = 0; row < h; ++row) {
        const int y = h - 1 - row;
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < 3; ++c) {
                std::uint32_t bits = std::bit_cast<std::uint32_t>(static_cast<float>(img.at(x, y, c)));
                if (!host_little) bits = byteswap32(bits);
                std::uint8_t b[4];
                std::memcpy(b, &bits, 4);
                out.insert(out.end(), b, b + 4);
            }
        }
    }
    return out;
}

LdrImage read_ppm(std::span<const std::uint8_t> bytes) {
    detail::ByteReader in(bytes);
    auto magic = in.token();
    if (!magic || *magic != "P6") throw Error(ErrorCode::MalformedHeader, "PPM: missing P6 signature");
    const int w = parse_int(in.token(), "PPM");
    const int h = parse_int(in.token(), "PPM");
    const int maxval = parse_int(in.token(), "PPM");
    if (maxval != 255) {
        throw Error(ErrorCode::UnsupportedMaxval, "PPM: maxval " + std::to_string(maxval) + " unsupported");
    }
    if (in.at_end() || !detail::ByteReader::is_space(in.get())) {
        throw Error(ErrorCode::MalformedHeader, "PPM: header not terminated");
    }
    const std::size_t count = static_cast<std::size_t>(w) * h * 3;
    if (in.remaining() < count) throw Error(ErrorCode::TruncatedData, "PPM: truncated payload");
    auto payload = in.take(count);
    return LdrImage(w, h, std::vector<std::uint8_t>(payload.begin(), payload.end()));
}

Bytes write_ppm(const LdrImage& img) {
    const std::string header =
        "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
    Bytes out(header.begin(), header.end());
    out.insert(out.end(), img.data().begin(), img.data().end());
    return out;
}

Bytes read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::Io, "cannot open " + path.string());
    Bytes data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (f.bad()) throw Error(ErrorCode::Io, "read failed: " + path.string());
    return data;
}

void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error(ErrorCode::Io, "cannot create " + tmp.string());
        f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!f) throw Error(ErrorCode::Io, "write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorCode::Io, "cannot rename onto " + path.string());
    }
}

HdrImage load_hdr(const std::filesystem::path& path) {
    const Bytes bytes = read_file(path);
    switch (detect_format(bytes)) {
        case FileFormat::RadianceRGBE: return read_rgbe(bytes);
        case FileFormat::PFM: return read_pfm(bytes);
        case FileFormat::PPM6: return retag<HdrImage>(srgb_to_linear(read_ppm(bytes)));
    }
    throw Error(ErrorCode::UnsupportedFormat, path.string());
}

LdrImage load_ldr(const std::filesystem::path& path) {
    const Bytes bytes = read_file(path);
    if (detect_format(bytes) != FileFormat::PPM6) {
        throw Error(ErrorCode::UnsupportedFormat, path.string() + ": expected an 8-bit PPM");
    }
    return read_ppm(bytes);
}

void save_hdr(const std::filesystem::path& path, const HdrImage& img) {
    const std::string ext = lower_ext(path);
    if (ext == ".hdr" || ext == ".pic") {
        write_file_atomic(path, write_rgbe(img));
    } else if (ext == ".pfm") {
        write_file_atomic(path, write_pfm(img));
    } else {
        throw Error(ErrorCode::UnsupportedFormat, path.string() + ": HDR output must be .hdr, .pic or .pfm");
    }
}

void save_ldr(const std::filesystem::path& path, const LdrImage& img) {
    const std::string ext = lower_ext(path);
    if (ext != ".ppm") {
        throw Error(ErrorCode::UnsupportedFormat, path.string() + ": LDR output must be .ppm");
    }
    write_file_atomic(path, write_ppm(img));
}

}  // namespace hdrtk::io
