#pragma once

// Colorimetry core: sRGB <-> XYZ <-> CIELAB <-> LCh, CIE76 difference and a
// GCR/UCR RGB -> CMYK separation with total-ink limiting.
//
// Constants (all in one place, see also README "Color constants"):
//
//   sRGB transfer      decode: v <= 0.04045 ? v / 12.92 : ((v + 0.055) / 1.055)^2.4
//                      encode: v <= 0.0031308 ? 12.92 v : 1.055 v^(1/2.4) - 0.055
//   sRGB primaries     R (0.64, 0.33)  G (0.30, 0.60)  B (0.15, 0.06)
//   D65 white          (0.3127, 0.3290)
//   CIELAB f(t)        t > (6/29)^3 ? cbrt(t) : t / (3 (6/29)^2) + 4/29
//
// The RGB -> XYZ matrix is derived from the chromaticities at compile time so
// that RGB white maps onto the white point exactly (no rounded 7-digit table).

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "prepress/errors.hpp"

namespace prepress {

struct RGBColor {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;

    friend bool operator==(const RGBColor&, const RGBColor&) = default;
};

struct XYZColor {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

struct LabColor {
    double l = 0.0;
    double a = 0.0;
    double b = 0.0;

    friend bool operator==(const LabColor&, const LabColor&) = default;
};

struct LChColor {
    double l = 0.0;
    double c = 0.0;
    double h = 0.0;  // degrees, [0, 360)
};

struct CMYKColor {
    double c = 0.0;
    double m = 0.0;
    double y = 0.0;
    double k = 0.0;

    double total() const noexcept { return c + m + y + k; }
};

struct SeparationParams {
    double gcrStrength = 0.7;
    double blackStart = 0.2;
    double blackWidth = 0.6;
    double totalInkLimit = 3.2;

    friend bool operator==(const SeparationParams&, const SeparationParams&) = default;
};

struct WhitePoint {
    double xn = 0.0;
    double yn = 1.0;
    double zn = 0.0;

    /// White point with Y = 1 from CIE xy chromaticity.
    static constexpr WhitePoint from_chromaticity(double x, double y) {
        return {x / y, 1.0, (1.0 - x - y) / y};
    }
    static constexpr WhitePoint d65() { return from_chromaticity(0.3127, 0.3290); }
    static constexpr WhitePoint d50() { return from_chromaticity(0.3457, 0.3585); }
};

namespace detail {

using Matrix3 = std::array<std::array<double, 3>, 3>;

constexpr double det3(const Matrix3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

constexpr Matrix3 inverse3(const Matrix3& m) {
    const double inv = 1.0 / det3(m);
    Matrix3 r{};
    r[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) * inv;
    r[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * inv;
    r[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * inv;
    r[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) * inv;
    r[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * inv;
    r[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * inv;
    r[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) * inv;
    r[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * inv;
    r[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * inv;
    return r;
}

constexpr std::array<double, 3> mul3(const Matrix3& m, const std::array<double, 3>& v) {
    return {m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2]};
}

// Columns are the primaries' XYZ scaled so that R + G + B = white.
constexpr Matrix3 primaries_to_xyz(double rx, double ry, double gx, double gy, double bx, double by,
                                   const WhitePoint& white) {
    const Matrix3 p{{{rx / ry, gx / gy, bx / by},
                     {1.0, 1.0, 1.0},
                     {(1 - rx - ry) / ry, (1 - gx - gy) / gy, (1 - bx - by) / by}}};
    const auto s = mul3(inverse3(p), {white.xn, white.yn, white.zn});
    Matrix3 m{};
    for (int row = 0; row < 3; ++row)
        for (int col = 0; col < 3; ++col) m[row][col] = p[row][col] * s[col];
    return m;
}

inline constexpr double kSrgbDecodeThreshold = 0.04045;
inline constexpr double kSrgbEncodeThreshold = 0.0031308;
inline constexpr double kSrgbLinearSlope = 12.92;
inline constexpr double kSrgbOffset = 0.055;
inline constexpr double kSrgbGamma = 2.4;

inline constexpr double kLabDelta = 6.0 / 29.0;
inline constexpr double kLabEpsilon = kLabDelta * kLabDelta * kLabDelta;

// Linear channels within this distance of [0, 1] still count as in gamut, so
// that round-off on exact white/black does not trip the flag.
inline constexpr double kGamutSlack = 1e-9;

inline constexpr Matrix3 kSrgbToXyz =
    primaries_to_xyz(0.64, 0.33, 0.30, 0.60, 0.15, 0.06, WhitePoint::d65());
inline constexpr Matrix3 kXyzToSrgb = inverse3(kSrgbToXyz);

inline double lab_f(double t) {
    return t > kLabEpsilon ? std::cbrt(t) : t / (3.0 * kLabDelta * kLabDelta) + 4.0 / 29.0;
}

inline double lab_f_inv(double t) {
    return t > kLabDelta ? t * t * t : 3.0 * kLabDelta * kLabDelta * (t - 4.0 / 29.0);
}

inline void check_unit(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0))
        throw DomainError(std::string("RGB channel ") + name + " outside [0,1]: " + std::to_string(v));
}

}  // namespace detail

inline void validate(const RGBColor& rgb) {
    detail::check_unit(rgb.r, "r");
    detail::check_unit(rgb.g, "g");
    detail::check_unit(rgb.b, "b");
}

inline double srgb_decode_channel(double v) {
    using namespace detail;
    return v <= kSrgbDecodeThreshold ? v / kSrgbLinearSlope
                                     : std::pow((v + kSrgbOffset) / (1.0 + kSrgbOffset), kSrgbGamma);
}

inline double srgb_encode_channel(double v) {
    using namespace detail;
    return v <= kSrgbEncodeThreshold ? kSrgbLinearSlope * v
                                     : (1.0 + kSrgbOffset) * std::pow(v, 1.0 / kSrgbGamma) - kSrgbOffset;
}

/// Nonlinear sRGB to linear light. Throws DomainError for channels outside [0,1].
inline std::array<double, 3> srgb_decode(const RGBColor& rgb) {
    validate(rgb);
    return {srgb_decode_channel(rgb.r), srgb_decode_channel(rgb.g), srgb_decode_channel(rgb.b)};
}

inline XYZColor rgb_to_xyz(const RGBColor& rgb) {
    const auto xyz = detail::mul3(detail::kSrgbToXyz, srgb_decode(rgb));
    return {xyz[0], xyz[1], xyz[2]};
}

inline LabColor xyz_to_lab(const XYZColor& xyz, const WhitePoint& wp = WhitePoint::d65()) {
    const double fx = detail::lab_f(xyz.x / wp.xn);
    const double fy = detail::lab_f(xyz.y / wp.yn);
    const double fz = detail::lab_f(xyz.z / wp.zn);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

inline XYZColor lab_to_xyz(const LabColor& lab, const WhitePoint& wp = WhitePoint::d65()) {
    const double fy = (lab.l + 16.0) / 116.0;
    const double fx = fy + lab.a / 500.0;
    const double fz = fy - lab.b / 200.0;
    return {wp.xn * detail::lab_f_inv(fx), wp.yn * detail::lab_f_inv(fy), wp.zn * detail::lab_f_inv(fz)};
}

inline LabColor rgb_to_lab(const RGBColor& rgb, const WhitePoint& wp = WhitePoint::d65()) {
    return xyz_to_lab(rgb_to_xyz(rgb), wp);
}

struct RGBConversion {
    RGBColor rgb;
    bool inGamut = true;
};

/// Inverse of rgb_to_lab. Out-of-range linear channels are flagged, then clamped.
inline RGBConversion lab_to_rgb(const LabColor& lab, const WhitePoint& wp = WhitePoint::d65()) {
    const XYZColor xyz = lab_to_xyz(lab, wp);
    auto lin = detail::mul3(detail::kXyzToSrgb, {xyz.x, xyz.y, xyz.z});
    bool inside = true;
    for (double& v : lin) {
        if (!(v >= -detail::kGamutSlack && v <= 1.0 + detail::kGamutSlack)) inside = false;
        v = std::clamp(v, 0.0, 1.0);
    }
    return {{srgb_encode_channel(lin[0]), srgb_encode_channel(lin[1]), srgb_encode_channel(lin[2])}, inside};
}

inline double normalize_hue(double degrees) {
    double h = std::fmod(degrees, 360.0);
    if (h < 0.0) h += 360.0;
    if (h >= 360.0) h -= 360.0;  // fmod of a tiny negative plus 360 can round up
    return h;
}

/// Hue of a neutral (c == 0) is 0 degrees.
inline LChColor lab_lch(const LabColor& lab) {
    const double c = std::hypot(lab.a, lab.b);
    if (c == 0.0) return {lab.l, 0.0, 0.0};
    return {lab.l, c, normalize_hue(std::atan2(lab.b, lab.a) * 180.0 / std::numbers::pi)};
}

inline LabColor lch_lab(const LChColor& lch) {
    const double rad = lch.h * std::numbers::pi / 180.0;
    return {lch.l, lch.c * std::cos(rad), lch.c * std::sin(rad)};
}

inline double chroma(const LabColor& lab) { return std::hypot(lab.a, lab.b); }

inline double delta_e76(const LabColor& p, const LabColor& q) {
    const double dl = p.l - q.l;
    const double da = p.a - q.a;
    const double db = p.b - q.b;
    return std::sqrt(dl * dl + da * da + db * db);
}

/// Smallest absolute angular difference in degrees, in [0, 180].
inline double hue_distance(double h1, double h2) {
    const double d = std::fabs(normalize_hue(h1) - normalize_hue(h2));
    return d > 180.0 ? 360.0 - d : d;
}

inline void validate(const SeparationParams& p) {
    auto fail = [](const std::string& what) { throw DomainError("invalid separation params: " + what); };
    if (!(p.gcrStrength >= 0.0 && p.gcrStrength <= 1.0)) fail("gcrStrength outside [0,1]");
    if (!(p.blackStart >= 0.0 && p.blackStart <= 1.0)) fail("blackStart outside [0,1]");
    if (!(p.blackWidth > 0.0 && p.blackWidth <= 1.0)) fail("blackWidth outside (0,1]");
    if (!(p.totalInkLimit >= 1.0 && p.totalInkLimit <= 4.0)) fail("totalInkLimit outside [1,4]");
}

/// GCR/UCR separation on encoded RGB.
///
/// The gray component g = min(c, m, y) is replaced by black along a ramp that
/// starts at `blackStart` and reaches full strength `blackWidth` later. If the
/// total coverage exceeds the ink limit, C, M and Y are scaled down together;
/// K is kept.
inline CMYKColor separate_to_cmyk(const RGBColor& rgb, const SeparationParams& params) {
    validate(rgb);
    validate(params);

    double c = 1.0 - rgb.r;
    double m = 1.0 - rgb.g;
    double y = 1.0 - rgb.b;
    const double gray = std::min({c, m, y});
    const double ramp = std::clamp((gray - params.blackStart) / params.blackWidth, 0.0, 1.0);
    const double k = params.gcrStrength * ramp * gray;

    c = std::max(0.0, c - k);
    m = std::max(0.0, m - k);
    y = std::max(0.0, y - k);

    const double cmy = c + m + y;
    if (cmy + k > params.totalInkLimit && cmy > 0.0) {
        const double scale = (params.totalInkLimit - k) / cmy;
        c *= scale;
        m *= scale;
        y *= scale;
    }
    return {c, m, y, k};
}

}  // namespace prepress
