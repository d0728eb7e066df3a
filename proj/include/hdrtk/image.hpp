#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hdrtk/error.hpp"

namespace hdrtk {

/// Interleaved row-major raster, rows stored top-to-bottom. The tag keeps
/// images with different meanings (linear radiance, 8-bit codes, masks)
/// from being mixed up by accident.
template <typename T, int Channels, typename Tag>
class Image {
public:
    using value_type = T;
    static constexpr int channels = Channels;

    Image() = default;

    Image(int width, int height, T fill = T{}) : width_(width), height_(height) {
        check_dims(width, height);
        data_.assign(static_cast<std::size_t>(width) * height * Channels, fill);
    }

    Image(int width, int height, std::vector<T> data)
        : width_(width), height_(height), data_(std::move(data)) {
        check_dims(width, height);
        if (data_.size() != static_cast<std::size_t>(width) * height * Channels) {
            throw Error(ErrorCode::InvalidArgument,
                        "buffer length " + std::to_string(data_.size()) +
                            " does not match " + std::to_string(width) + "x" +
                            std::to_string(height) + "x" + std::to_string(Channels));
        }
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t pixel_count() const noexcept {
        return static_cast<std::size_t>(width_) * height_;
    }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    T& at(int x, int y, int c) noexcept { return data_[index(x, y, c)]; }
    const T& at(int x, int y, int c) const noexcept { return data_[index(x, y, c)]; }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }
    std::vector<T>& storage() noexcept { return data_; }
    const std::vector<T>& storage() const noexcept { return data_; }

    std::span<T> pixel(int x, int y) noexcept {
        return std::span<T>(data_).subspan(index(x, y, 0), Channels);
    }
    std::span<const T> pixel(int x, int y) const noexcept {
        return std::span<const T>(data_).subspan(index(x, y, 0), Channels);
    }

    template <typename U, int C, typename G>
    bool same_shape(const Image<U, C, G>& other) const noexcept {
        return width_ == other.width() && height_ == other.height();
    }

    bool operator==(const Image&) const = default;

    std::size_t index(int x, int y, int c) const noexcept {
        return (static_cast<std::size_t>(y) * width_ + x) * Channels + c;
    }

private:
    static void check_dims(int width, int height) {
        if (width < 1 || height < 1) {
            throw Error(ErrorCode::InvalidArgument, "image dimensions must be positive, got " +
                                                        std::to_string(width) + "x" +
                                                        std::to_string(height));
        }
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

struct HdrTag {};
struct LinearTag {};
struct LdrTag {};
struct PlaneTag {};
struct ProbTag {};
struct SegTag {};

/// Linear radiance in relative luminance units. Values are finite and >= 0.
using HdrImage = Image<double, 3, HdrTag>;
/// Linearized LDR, every value in [0, 1].
using LinearLdr = Image<double, 3, LinearTag>;
/// 8-bit sRGB-encoded code values.
using LdrImage = Image<std::uint8_t, 3, LdrTag>;
/// Single-channel scalar map (channel means, merge masks, validity).
using Plane = Image<double, 1, PlaneTag>;
/// Soft per-class probabilities predicted by a segmentation head.
using ProbMask = Image<double, 3, ProbTag>;
/// One-hot dim / mid / bright luminance classes.
using SegMask = Image<std::uint8_t, 3, SegTag>;

/// Reinterprets a raster under a different tag, keeping the samples.
template <typename To, typename From>
To retag(const From& img) {
    static_assert(To::channels == From::channels);
    return To(img.width(), img.height(),
              std::vector<typename To::value_type>(img.data().begin(), img.data().end()));
}

/// Throws NonFiniteValue / InvalidArgument unless every sample is finite and >= 0.
void validate_hdr(const HdrImage& img);

template <typename A, typename B>
void require_same_shape(const A& a, const B& b, const char* what) {
    if (!a.same_shape(b)) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + ": " + std::to_string(a.width()) + "x" +
                        std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                        std::to_string(b.height()));
    }
}

template <typename A>
void require_dims(const A& a, int width, int height, const char* what) {
    if (a.width() != width || a.height() != height) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + ": expected " + std::to_string(width) + "x" +
                        std::to_string(height) + ", got " + std::to_string(a.width()) + "x" +
                        std::to_string(a.height()));
    }
}

}  // namespace hdrtk
