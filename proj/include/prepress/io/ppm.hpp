#pragma once

// Binary portable pixmap (P6, maxval 255). Samples are sRGB-encoded bytes.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prepress/errors.hpp"
#include "prepress/image.hpp"

namespace prepress::io {

namespace detail {

class PpmHeaderReader {
public:
    explicit PpmHeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    // Skips whitespace and '#' comments (to end of line).
    void skip_separators() {
        while (pos_ < bytes_.size()) {
            const auto c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
            } else if (std::isspace(c)) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    unsigned long read_number(const char* what) {
        skip_separators();
        const std::size_t start = pos_;
        unsigned long value = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 1u << 24) throw ParseError::at_offset(start, std::string(what) + " is too large");
            ++pos_;
        }
        if (pos_ == start) {
            if (pos_ >= bytes_.size()) throw ParseError::at_offset(pos_, std::string("truncated header, expected ") + what);
            throw ParseError::at_offset(pos_, std::string("expected ") + what);
        }
        return value;
    }

    std::size_t pos_ = 0;
    std::span<const std::uint8_t> bytes_;
};

}  // namespace detail

inline RasterImage read_ppm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2) throw ParseError::at_offset(0, "truncated header, expected magic \"P6\"");
    if (bytes[0] != 'P' || bytes[1] != '6') throw ParseError::at_offset(0, "bad magic, expected \"P6\"");

    detail::PpmHeaderReader reader(bytes);
    reader.pos_ = 2;
    if (reader.pos_ < bytes.size() && !std::isspace(bytes[reader.pos_]) && bytes[reader.pos_] != '#')
        throw ParseError::at_offset(2, "bad magic, expected \"P6\"");
    const auto width = reader.read_number("width");
    const auto height = reader.read_number("height");
    const std::size_t maxvalAt = (reader.skip_separators(), reader.pos_);
    const auto maxval = reader.read_number("maxval");
    if (width == 0 || height == 0) throw ParseError::at_offset(maxvalAt, "image dimensions must be positive");
    if (maxval != 255) throw ParseError::at_offset(maxvalAt, "unsupported maxval " + std::to_string(maxval) + ", expected 255");
    if (reader.pos_ >= bytes.size() || !std::isspace(bytes[reader.pos_]))
        throw ParseError::at_offset(reader.pos_, "expected a single whitespace byte before pixel data");
    const std::size_t dataStart = reader.pos_ + 1;

    const std::size_t needed = 3 * width * height;
    if (bytes.size() - dataStart < needed)
        throw ParseError::at_offset(bytes.size(), "truncated pixel data: expected " + std::to_string(needed) +
                                                      " bytes, found " + std::to_string(bytes.size() - dataStart));

    RasterImage image(static_cast<int>(width), static_cast<int>(height));
    for (std::size_t i = 0; i < image.pixels.size(); ++i) {
        const auto* px = &bytes[dataStart + 3 * i];
        image.pixels[i] = {px[0] / 255.0, px[1] / 255.0, px[2] / 255.0};
    }
    return image;
}

inline RasterImage read_ppm(std::string_view bytes) {
    return read_ppm(std::span(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
}

inline std::uint8_t quantize_channel(double v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

/// Canonical P6: "P6\n<w> <h>\n255\n" followed by RGB bytes.
inline std::vector<std::uint8_t> write_ppm(const RasterImage& image) {
    if (image.empty()) throw DomainError("cannot write an empty image as PPM");
    const std::string header = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(header.size() + 3 * image.size());
    for (const auto& px : image.pixels) {
        out.push_back(quantize_channel(px.r));
        out.push_back(quantize_channel(px.g));
        out.push_back(quantize_channel(px.b));
    }
    return out;
}

}  // namespace prepress::io
