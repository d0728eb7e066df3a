#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace hdrtk::io::detail {

// Cursor over an in-memory file used by the header parsers.
class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t position() const { return pos_; }
    std::size_t remaining() const { return bytes_.size() - pos_; }
    bool at_end() const { return pos_ >= bytes_.size(); }

    std::optional<std::uint8_t> peek() const {
        if (at_end()) return std::nullopt;
        return bytes_[pos_];
    }
    std::uint8_t get() { return bytes_[pos_++]; }

    /// Reads up to and excluding '\n'; nullopt if no newline remains.
    std::optional<std::string> line() {
        std::string out;
        while (!at_end()) {
            const char ch = static_cast<char>(bytes_[pos_++]);
            if (ch == '\n') return out;
            out.push_back(ch);
        }
        return std::nullopt;
    }

    std::span<const std::uint8_t> take(std::size_t n) {
        auto s = bytes_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

    // Netpbm-style token: skips whitespace and '#' comments.
    std::optional<std::string> token() {
        for (;;) {
            while (!at_end() && is_space(bytes_[pos_])) ++pos_;
            if (at_end()) return std::nullopt;
            if (bytes_[pos_] != '#') break;
            while (!at_end() && bytes_[pos_] != '\n') ++pos_;
        }
        std::string out;
        while (!at_end() && !is_space(bytes_[pos_])) out.push_back(static_cast<char>(bytes_[pos_++]));
        return out;
    }

    static bool is_space(std::uint8_t c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

inline bool starts_with(std::span<const std::uint8_t> bytes, std::string_view magic) {
    if (bytes.size() < magic.size()) return false;
    for (std::size_t i = 0; i < magic.size(); ++i) {
        if (bytes[i] != static_cast<std::uint8_t>(magic[i])) return false;
    }
    return true;
}

}  // namespace hdrtk::io::detail
