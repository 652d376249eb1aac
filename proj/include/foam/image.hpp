// Row-major image planes and the 8-bit frame types the sensors produce.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <memory>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

namespace foam {

// Leaves elements default-initialized (indeterminate for arithmetic types)
// when a vector is resized without a value.
template <typename T>
struct DefaultInitAllocator : std::allocator<T> {
    template <typename U>
    struct rebind {
        using other = DefaultInitAllocator<U>;
    };
    using std::allocator<T>::allocator;

    template <typename U>
    void construct(U* p) noexcept(std::is_nothrow_default_constructible_v<U>) {
        ::new (static_cast<void*>(p)) U;
    }
    template <typename U, typename... Args>
    void construct(U* p, Args&&... args) {
        ::new (static_cast<void*>(p)) U(std::forward<Args>(args)...);
    }
};

/// Tag for planes whose every pixel the caller is about to write.
struct Uninitialized {};
inline constexpr Uninitialized uninitialized{};

template <typename T>
class Plane {
public:
    using value_type = T;

    Plane() = default;
    Plane(int width, int height, T fill = T{})
        : width_(width), height_(height),
          data_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {
        if (width < 0 || height < 0) throw std::invalid_argument("negative image dimensions");
    }
    Plane(int width, int height, Uninitialized)
        : width_(width), height_(height) {
        if (width < 0 || height < 0) throw std::invalid_argument("negative image dimensions");
        data_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    }

    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] int height() const noexcept { return height_; }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    [[nodiscard]] T& at(int x, int y) noexcept { return data_[index(x, y)]; }
    [[nodiscard]] const T& at(int x, int y) const noexcept { return data_[index(x, y)]; }

    [[nodiscard]] std::span<T> row(int y) noexcept {
        return {data_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
    }
    [[nodiscard]] std::span<const T> row(int y) const noexcept {
        return {data_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
    }

    [[nodiscard]] std::span<T> pixels() noexcept { return data_; }
    [[nodiscard]] std::span<const T> pixels() const noexcept { return data_; }

    friend bool operator==(const Plane&, const Plane&) = default;

private:
    [[nodiscard]] std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_{0};
    int height_{0};
    std::vector<T, DefaultInitAllocator<T>> data_;
};

using GrayPlane = Plane<std::uint8_t>;
using FloatPlane = Plane<float>;
using ScalarField = Plane<double>;

/// 8-bit grayscale frame with its capture time.
struct ImageFrame {
    GrayPlane intensities;
    double timestamp{0.0};

    [[nodiscard]] int width() const noexcept { return intensities.width(); }
    [[nodiscard]] int height() const noexcept { return intensities.height(); }

    friend bool operator==(const ImageFrame&, const ImageFrame&) = default;
};

/// Planar 8-bit RGB frame.
struct RgbFrame {
    GrayPlane r;
    GrayPlane g;
    GrayPlane b;
    double timestamp{0.0};
};

/// Writes a binary portable graymap (P5, maxval 255).
void write_pgm(const std::filesystem::path& path, const GrayPlane& image);

/// Reads a binary P5 graymap with maxval 255.
[[nodiscard]] GrayPlane read_pgm(const std::filesystem::path& path);

}  // namespace foam
