#pragma once

// Test charts: image-adapted charts per key class, IT8-style scanner targets,
// chart rendering, and device characterization from chart measurements.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "prepress/classification.hpp"
#include "prepress/colorspace.hpp"
#include "prepress/errors.hpp"
#include "prepress/image.hpp"

namespace prepress {

enum class PatchRole { Standardized, ToneScale, Vendor, Custom, NeutralRamp, Chromatic };

inline std::string_view to_string(PatchRole role) {
    switch (role) {
        case PatchRole::Standardized: return "standardized";
        case PatchRole::ToneScale: return "tone-scale";
        case PatchRole::Vendor: return "vendor";
        case PatchRole::Custom: return "custom";
        case PatchRole::NeutralRamp: return "neutral-ramp";
        case PatchRole::Chromatic: return "chromatic";
    }
    return "?";
}

inline PatchRole parse_patch_role(std::string_view s) {
    for (auto role : {PatchRole::Standardized, PatchRole::ToneScale, PatchRole::Vendor, PatchRole::Custom,
                      PatchRole::NeutralRamp, PatchRole::Chromatic})
        if (to_string(role) == s) return role;
    throw DomainError("unknown patch role '" + std::string(s) + "'");
}

struct Patch {
    int row = 0;
    int col = 0;
    LabColor target;
    PatchRole role = PatchRole::Custom;

    friend bool operator==(const Patch&, const Patch&) = default;
};

struct TestChartLayout {
    int rows = 0;
    int cols = 0;
    std::vector<Patch> patches;  // row-major
    std::optional<ImageKeyClass> keyClass;

    const Patch& at(int row, int col) const { return patches[static_cast<std::size_t>(row) * cols + col]; }
    Patch& at(int row, int col) { return patches[static_cast<std::size_t>(row) * cols + col]; }

    friend bool operator==(const TestChartLayout&, const TestChartLayout&) = default;
};

inline void check_patch_target(const LabColor& lab) {
    if (!(lab.l >= 0.0 && lab.l <= 100.0))
        throw DomainError("patch L* outside [0,100]: " + std::to_string(lab.l));
}

/// Throws DomainError unless the layout is a complete, row-major grid of valid patches.
inline void validate(const TestChartLayout& layout) {
    if (layout.rows <= 0 || layout.cols <= 0) throw DomainError("chart dimensions must be positive");
    if (layout.patches.size() != static_cast<std::size_t>(layout.rows) * layout.cols)
        throw DomainError("chart has " + std::to_string(layout.patches.size()) + " patches, expected " +
                          std::to_string(layout.rows * layout.cols));
    for (std::size_t i = 0; i < layout.patches.size(); ++i) {
        const auto& p = layout.patches[i];
        if (p.row != static_cast<int>(i) / layout.cols || p.col != static_cast<int>(i) % layout.cols)
            throw DomainError("patch " + std::to_string(i) + " is out of row-major position");
        check_patch_target(p.target);
    }
}

/// Largest chroma reproducible in sRGB at the given lightness and hue, by
/// bisection against lab_to_rgb's gamut flag.
inline double srgb_max_chroma(double l, double hueDegrees) {
    auto inside = [&](double c) { return lab_to_rgb(lch_lab({l, c, hueDegrees})).inGamut; };
    if (!inside(0.0)) return 0.0;
    double lo = 0.0;
    double hi = 256.0;
    for (int i = 0; i < 64; ++i) {
        const double mid = 0.5 * (lo + hi);
        (inside(mid) ? lo : hi) = mid;
    }
    return lo;
}

namespace detail {

inline constexpr int kMinChartPatches = 12;
inline constexpr int kMinRampLength = 6;
inline constexpr std::array<double, 3> kChartLightnessFractions{0.25, 0.5, 0.75};
inline constexpr std::array<double, 2> kChartChromaFractions{0.45, 0.9};

}  // namespace detail

/// Chart concentrated on one key range: a descending neutral ramp across the
/// first row(s), then chromatic patches at six hues (60 degrees apart), two
/// chroma levels and three lightness levels, all inside the key range.
inline TestChartLayout generate_adapted_chart(ImageKeyClass cls, int rows, int cols) {
    if (rows <= 0 || cols <= 0 || rows * cols < detail::kMinChartPatches)
        throw DomainError("adapted chart needs at least 12 patches, got " + std::to_string(rows) + "x" +
                          std::to_string(cols));
    const auto range = key_range(cls);
    const int total = rows * cols;
    const int rampLength = std::min(total, cols * ((detail::kMinRampLength + cols - 1) / cols));

    TestChartLayout layout;
    layout.rows = rows;
    layout.cols = cols;
    layout.keyClass = cls;
    layout.patches.reserve(static_cast<std::size_t>(total));

    for (int i = 0; i < total; ++i) {
        Patch p;
        p.row = i / cols;
        p.col = i % cols;
        if (i < rampLength) {
            // hi, hi - step, ... never reaches the exclusive lower end
            p.target = {range.hi - (range.hi - range.lo) * i / rampLength, 0.0, 0.0};
            p.role = PatchRole::NeutralRamp;
        } else {
            const int j = i - rampLength;
            const double hue = 60.0 * (j % 6);
            const double chromaFraction = detail::kChartChromaFractions[(j / 6) % 2];
            const double l = range.lo + (range.hi - range.lo) * detail::kChartLightnessFractions[(j / 12) % 3];
            p.target = lch_lab({l, chromaFraction * srgb_max_chroma(l, hue), hue});
            p.role = PatchRole::Chromatic;
        }
        layout.patches.push_back(p);
    }
    return layout;
}

// IT8 block geometry (0-based columns).
inline constexpr int kIt8Rows = 12;
inline constexpr int kIt8Cols = 22;
inline constexpr int kIt8ToneScaleCol = 12;
inline constexpr int kIt8VendorCol = 19;
inline constexpr int kIt8VendorSlots = 36;
inline constexpr std::array<double, 3> kIt8Lightness{25.0, 50.0, 75.0};
inline constexpr double kToneScaleLightness = 50.0;

struct ToneScaleSpec {
    std::string_view name;
    RGBColor primary;  // hue source; neutral has none
};

inline constexpr std::array<ToneScaleSpec, 7> kToneScales{{
    {"cyan", {0, 1, 1}},
    {"magenta", {1, 0, 1}},
    {"yellow", {1, 1, 0}},
    {"red", {1, 0, 0}},
    {"green", {0, 1, 0}},
    {"blue", {0, 0, 1}},
    {"neutral", {1, 1, 1}},
}};

struct IT8Target {
    TestChartLayout layout;

    std::size_t count(PatchRole role) const {
        return static_cast<std::size_t>(
            std::count_if(layout.patches.begin(), layout.patches.end(), [&](const Patch& p) { return p.role == role; }));
    }

    friend bool operator==(const IT8Target&, const IT8Target&) = default;
};

/// Row/column of the n-th vendor slot (row-major inside the three vendor columns).
inline std::pair<int, int> it8_vendor_slot(int n) { return {n / 3, kIt8VendorCol + n % 3}; }

/// Standard 12 x 22 scanner target: 144 standardized LCh patches, 84 tone-scale
/// patches and 36 vendor patches (unused vendor slots are neutral L* 50).
inline IT8Target build_it8_target(std::span<const LabColor> vendorPatches = {}) {
    if (vendorPatches.size() > static_cast<std::size_t>(kIt8VendorSlots))
        throw CapacityError("IT8 vendor block holds 36 patches, got " + std::to_string(vendorPatches.size()));
    for (const auto& v : vendorPatches) check_patch_target(v);

    IT8Target target;
    auto& layout = target.layout;
    layout.rows = kIt8Rows;
    layout.cols = kIt8Cols;
    layout.patches.resize(static_cast<std::size_t>(kIt8Rows * kIt8Cols));
    for (int r = 0; r < kIt8Rows; ++r)
        for (int c = 0; c < kIt8Cols; ++c) {
            layout.at(r, c).row = r;
            layout.at(r, c).col = c;
        }

    // Standardized: row = hue (30 degree steps), col = lightness * 4 + chroma step.
    for (int hueIdx = 0; hueIdx < 12; ++hueIdx) {
        const double hue = 30.0 * hueIdx;
        for (int li = 0; li < 3; ++li) {
            const double l = kIt8Lightness[li];
            const double cmax = srgb_max_chroma(l, hue);
            for (int ci = 0; ci < 4; ++ci) {
                auto& p = layout.at(hueIdx, li * 4 + ci);
                p.target = lch_lab({l, cmax * (ci + 1) / 4.0, hue});
                p.role = PatchRole::Standardized;
            }
        }
    }

    // Tone scales: one column each, twelve steps of rising chroma at constant
    // hue ending at the sRGB maximum at L* 50. The neutral scale steps lightness.
    for (int s = 0; s < static_cast<int>(kToneScales.size()); ++s) {
        const bool neutral = kToneScales[s].name == "neutral";
        const double hue = neutral ? 0.0 : lab_lch(rgb_to_lab(kToneScales[s].primary)).h;
        const double cmax = neutral ? 0.0 : srgb_max_chroma(kToneScaleLightness, hue);
        for (int step = 0; step < 12; ++step) {
            auto& p = layout.at(step, kIt8ToneScaleCol + s);
            p.target = neutral ? LabColor{100.0 * step / 11.0, 0.0, 0.0}
                               : lch_lab({kToneScaleLightness, cmax * (step + 1) / 12.0, hue});
            p.role = PatchRole::ToneScale;
        }
    }

    for (int n = 0; n < kIt8VendorSlots; ++n) {
        const auto [r, c] = it8_vendor_slot(n);
        auto& p = layout.at(r, c);
        p.target = n < static_cast<int>(vendorPatches.size()) ? vendorPatches[n] : LabColor{50.0, 0.0, 0.0};
        p.role = PatchRole::Vendor;
    }
    return target;
}

/// Places custom patches into the vendor block in row-major slot order.
inline IT8Target customize_target(IT8Target target, std::span<const LabColor> custom) {
    if (custom.size() > static_cast<std::size_t>(kIt8VendorSlots))
        throw CapacityError("IT8 vendor block holds 36 patches, got " + std::to_string(custom.size()) +
                            " custom patches");
    for (const auto& c : custom) check_patch_target(c);
    for (std::size_t n = 0; n < custom.size(); ++n) {
        const auto [r, c] = it8_vendor_slot(static_cast<int>(n));
        auto& p = target.layout.at(r, c);
        p.target = custom[n];
        p.role = PatchRole::Custom;
    }
    return target;
}

struct RenderedChart {
    RasterImage image;
    std::vector<Patch> clamped;  // targets outside sRGB, drawn clamped
};

inline RenderedChart render_chart(const TestChartLayout& layout, int patchPx) {
    if (patchPx < 1) throw DomainError("patchPx must be >= 1");
    validate(layout);
    RenderedChart out;
    out.image = RasterImage(layout.cols * patchPx, layout.rows * patchPx);
    for (const auto& p : layout.patches) {
        const auto conv = lab_to_rgb(p.target);
        if (!conv.inGamut) out.clamped.push_back(p);
        for (int y = 0; y < patchPx; ++y)
            for (int x = 0; x < patchPx; ++x) out.image.at(p.col * patchPx + x, p.row * patchPx + y) = conv.rgb;
    }
    return out;
}

using Metadata = std::vector<std::pair<std::string, std::string>>;

struct MeasurementEntry {
    RGBColor device;
    LabColor measured;
    Metadata extras;  // unrecognized per-row columns, by column name
};

struct MeasurementSet {
    std::vector<MeasurementEntry> entries;
    Metadata metadata;
};

/// Device RGB -> Lab lookup table on a gridN^3 lattice, evaluated by
/// tetrahedral interpolation.
struct DeviceProfile {
    int gridN = 0;
    std::vector<LabColor> lut;  // index (ri * N + gi) * N + bi
    Metadata metadata;

    std::size_t index(int ri, int gi, int bi) const {
        return (static_cast<std::size_t>(ri) * gridN + gi) * gridN + bi;
    }
    const LabColor& node(int ri, int gi, int bi) const { return lut[index(ri, gi, bi)]; }
    double node_coord(int i) const { return static_cast<double>(i) / (gridN - 1); }
};

inline void validate(const DeviceProfile& p) {
    if (p.gridN < 2) throw DomainError("profile grid must be >= 2");
    if (p.lut.size() != static_cast<std::size_t>(p.gridN) * p.gridN * p.gridN)
        throw DomainError("profile LUT has " + std::to_string(p.lut.size()) + " nodes, expected gridN^3");
    for (const auto& v : p.lut)
        if (!(v.l >= 0.0 && v.l <= 100.0)) throw DomainError("profile LUT L* outside [0,100]");
}

struct CharacterizeOptions {
    double idwPower = 2.0;
    // Measurements farther than this multiple of the nearest one are ignored
    // for a node; the weighted average stays local to the node's neighborhood.
    double neighborhoodFactor = 1.5;
    double exactHitRadius = 1e-6;
};

inline constexpr int kMinMeasurements = 8;

/// Fills each LUT node with the inverse-distance-weighted mean of nearby
/// measurements in device RGB space. A measurement within exactHitRadius of a
/// node is copied to it unchanged.
inline DeviceProfile characterize_device(const MeasurementSet& ms, int gridN,
                                         const CharacterizeOptions& opts = {}) {
    if (gridN < 2) throw DomainError("gridN must be >= 2, got " + std::to_string(gridN));
    if (ms.entries.size() < static_cast<std::size_t>(kMinMeasurements))
        throw DomainError("characterization needs at least 8 measurements, got " +
                          std::to_string(ms.entries.size()));
    for (const auto& e : ms.entries) {
        validate(e.device);
        if (!(e.measured.l >= 0.0 && e.measured.l <= 100.0))
            throw DomainError("measured L* outside [0,100]: " + std::to_string(e.measured.l));
    }

    DeviceProfile profile;
    profile.gridN = gridN;
    profile.metadata = ms.metadata;
    profile.lut.resize(static_cast<std::size_t>(gridN) * gridN * gridN);

    std::vector<double> dist(ms.entries.size());
    for (int ri = 0; ri < gridN; ++ri)
        for (int gi = 0; gi < gridN; ++gi)
            for (int bi = 0; bi < gridN; ++bi) {
                const RGBColor nodeRgb{profile.node_coord(ri), profile.node_coord(gi), profile.node_coord(bi)};
                std::size_t nearest = 0;
                for (std::size_t m = 0; m < ms.entries.size(); ++m) {
                    const auto& d = ms.entries[m].device;
                    dist[m] = std::sqrt((d.r - nodeRgb.r) * (d.r - nodeRgb.r) + (d.g - nodeRgb.g) * (d.g - nodeRgb.g) +
                                        (d.b - nodeRgb.b) * (d.b - nodeRgb.b));
                    if (dist[m] < dist[nearest]) nearest = m;
                }
                LabColor& out = profile.lut[profile.index(ri, gi, bi)];
                if (dist[nearest] <= opts.exactHitRadius) {
                    out = ms.entries[nearest].measured;
                    continue;
                }
                const double cutoff = dist[nearest] * opts.neighborhoodFactor;
                double wsum = 0.0;
                LabColor acc{};
                for (std::size_t m = 0; m < ms.entries.size(); ++m) {
                    if (dist[m] > cutoff) continue;
                    const double w = 1.0 / std::pow(dist[m], opts.idwPower);
                    wsum += w;
                    acc.l += w * ms.entries[m].measured.l;
                    acc.a += w * ms.entries[m].measured.a;
                    acc.b += w * ms.entries[m].measured.b;
                }
                out = {acc.l / wsum, acc.a / wsum, acc.b / wsum};
            }
    return profile;
}

/// Tetrahedral interpolation. The unit cell is split along its main diagonal
/// into six tetrahedra, selected by the ordering of the fractional offsets.
inline LabColor profile_eval(const DeviceProfile& p, const RGBColor& device) {
    validate(device);
    const int cells = p.gridN - 1;
    auto split = [cells](double v, int& base, double& frac) {
        const double pos = v * cells;
        base = std::min(static_cast<int>(std::floor(pos)), cells - 1);
        frac = pos - base;
    };
    int ri, gi, bi;
    double fr, fg, fb;
    split(device.r, ri, fr);
    split(device.g, gi, fg);
    split(device.b, bi, fb);

    // Barycentric weights (1 - f1, f1 - f2, f2 - f3, f3) over the path
    // c000 -> v1 -> v2 -> c111; a weight of exactly 1 reproduces a node.
    auto blend = [&](double f1, double f2, double f3, const LabColor& v1, const LabColor& v2) -> LabColor {
        const LabColor& c000 = p.node(ri, gi, bi);
        const LabColor& c111 = p.node(ri + 1, gi + 1, bi + 1);
        const double w0 = 1.0 - f1, w1 = f1 - f2, w2 = f2 - f3, w3 = f3;
        return {w0 * c000.l + w1 * v1.l + w2 * v2.l + w3 * c111.l,
                w0 * c000.a + w1 * v1.a + w2 * v2.a + w3 * c111.a,
                w0 * c000.b + w1 * v1.b + w2 * v2.b + w3 * c111.b};
    };

    if (fr >= fg) {
        if (fg >= fb) return blend(fr, fg, fb, p.node(ri + 1, gi, bi), p.node(ri + 1, gi + 1, bi));
        if (fr >= fb) return blend(fr, fb, fg, p.node(ri + 1, gi, bi), p.node(ri + 1, gi, bi + 1));
        return blend(fb, fr, fg, p.node(ri, gi, bi + 1), p.node(ri + 1, gi, bi + 1));
    }
    if (fb >= fg) return blend(fb, fg, fr, p.node(ri, gi, bi + 1), p.node(ri, gi + 1, bi + 1));
    if (fb >= fr) return blend(fg, fb, fr, p.node(ri, gi + 1, bi), p.node(ri, gi + 1, bi + 1));
    return blend(fg, fr, fb, p.node(ri, gi + 1, bi), p.node(ri + 1, gi + 1, bi));
}

/// Profile output over a regular samplesPerAxis^3 device grid.
inline std::vector<LabColor> profile_gamut_points(const DeviceProfile& p, int samplesPerAxis) {
    if (samplesPerAxis < 2) throw DomainError("samplesPerAxis must be >= 2");
    std::vector<LabColor> out;
    out.reserve(static_cast<std::size_t>(samplesPerAxis) * samplesPerAxis * samplesPerAxis);
    const double step = 1.0 / (samplesPerAxis - 1);
    for (int r = 0; r < samplesPerAxis; ++r)
        for (int g = 0; g < samplesPerAxis; ++g)
            for (int b = 0; b < samplesPerAxis; ++b)
                out.push_back(profile_eval(p, {std::min(1.0, r * step), std::min(1.0, g * step), std::min(1.0, b * step)}));
    return out;
}

}  // namespace prepress
