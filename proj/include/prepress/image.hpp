#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "prepress/colorspace.hpp"
#include "prepress/errors.hpp"

namespace prepress {

/// Row-major sRGB raster. A default-constructed image is empty (0 x 0);
/// operations that need pixels reject it.
struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<RGBColor> pixels;

    RasterImage() = default;
    RasterImage(int w, int h, RGBColor fill = {})
        : width(w), height(h), pixels(checked_size(w, h), fill) {}

    bool empty() const noexcept { return pixels.empty(); }
    std::size_t size() const noexcept { return pixels.size(); }

    RGBColor& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    const RGBColor& at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }

    friend bool operator==(const RasterImage&, const RasterImage&) = default;

private:
    static std::size_t checked_size(int w, int h) {
        if (w < 0 || h < 0) throw DomainError("negative image dimensions");
        return static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    }
};

struct PixelCoord {
    int x = 0;
    int y = 0;

    friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

/// Per-pixel CIELAB values (D65), row-major.
inline std::vector<LabColor> image_lab(const RasterImage& image, const WhitePoint& wp = WhitePoint::d65()) {
    std::vector<LabColor> out;
    out.reserve(image.size());
    for (const auto& px : image.pixels) out.push_back(rgb_to_lab(px, wp));
    return out;
}

}  // namespace prepress
