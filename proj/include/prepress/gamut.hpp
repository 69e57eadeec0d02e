#pragma once

// Gamut boundaries as segment maxima (max chroma per hue sector x lightness
// band), elementary gamut-mapping transforms, principle-based scoring and a
// coordinate-descent auto-fit.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "prepress/colorspace.hpp"
#include "prepress/errors.hpp"
#include "prepress/image.hpp"

namespace prepress {

inline constexpr int kDefaultHueSectors = 36;
inline constexpr int kDefaultLightnessBands = 18;

struct GamutBoundary {
    int hueSectors = kDefaultHueSectors;
    int lightnessBands = kDefaultLightnessBands;
    std::vector<double> maxChroma;   // index sector * lightnessBands + band
    std::vector<bool> interpolated;  // same indexing; true where no point fell
    double lMin = 0.0;
    double lMax = 0.0;

    std::size_t cell(int sector, int band) const {
        return static_cast<std::size_t>(sector) * lightnessBands + band;
    }
    double max_chroma(int sector, int band) const { return maxChroma[cell(sector, band)]; }

    int sector_of(double hue) const {
        const int s = static_cast<int>(std::floor(normalize_hue(hue) * hueSectors / 360.0));
        return std::clamp(s, 0, hueSectors - 1);
    }
    int band_of(double l) const {
        const int b = static_cast<int>(std::floor(std::clamp(l, 0.0, 100.0) * lightnessBands / 100.0));
        return std::clamp(b, 0, lightnessBands - 1);
    }

    double sector_start(int sector) const { return 360.0 * sector / hueSectors; }
    double sector_center(int sector) const { return 360.0 * (sector + 0.5) / hueSectors; }
    double band_start(int band) const { return 100.0 * band / lightnessBands; }
    double band_center(int band) const { return 100.0 * (band + 0.5) / lightnessBands; }
};

/// Segment-maxima boundary of a point cloud. Cells without points take the
/// value of the nearest populated cell in the same lightness band (circular
/// in hue); bands without any point copy the nearest populated band. Filled
/// cells are flagged interpolated.
inline GamutBoundary gamut_from_points(std::span<const LabColor> points, int hueSectors = kDefaultHueSectors,
                                       int lightnessBands = kDefaultLightnessBands) {
    if (points.empty()) throw DomainError("gamut boundary needs at least one point");
    if (hueSectors < 4) throw DomainError("hueSectors must be >= 4");
    if (lightnessBands < 3) throw DomainError("lightnessBands must be >= 3");

    GamutBoundary bd;
    bd.hueSectors = hueSectors;
    bd.lightnessBands = lightnessBands;
    const std::size_t cells = static_cast<std::size_t>(hueSectors) * lightnessBands;
    bd.maxChroma.assign(cells, 0.0);
    bd.interpolated.assign(cells, true);
    bd.lMin = std::numeric_limits<double>::infinity();
    bd.lMax = -std::numeric_limits<double>::infinity();

    for (const auto& p : points) {
        const LChColor lch = lab_lch(p);
        const std::size_t c = bd.cell(bd.sector_of(lch.h), bd.band_of(lch.l));
        if (bd.interpolated[c] || lch.c > bd.maxChroma[c]) bd.maxChroma[c] = lch.c;
        bd.interpolated[c] = false;
        bd.lMin = std::min(bd.lMin, p.l);
        bd.lMax = std::max(bd.lMax, p.l);
    }

    const std::vector<bool> measured = [&] {
        std::vector<bool> m(cells);
        for (std::size_t i = 0; i < cells; ++i) m[i] = !bd.interpolated[i];
        return m;
    }();

    std::vector<bool> bandPopulated(static_cast<std::size_t>(lightnessBands), false);
    for (int s = 0; s < hueSectors; ++s)
        for (int b = 0; b < lightnessBands; ++b)
            if (measured[bd.cell(s, b)]) bandPopulated[b] = true;

    for (int b = 0; b < lightnessBands; ++b) {
        if (!bandPopulated[b]) continue;
        for (int s = 0; s < hueSectors; ++s) {
            if (measured[bd.cell(s, b)]) continue;
            for (int d = 1; d <= hueSectors / 2; ++d) {
                const int below = (s - d + hueSectors) % hueSectors;
                const int above = (s + d) % hueSectors;
                if (measured[bd.cell(below, b)]) {
                    bd.maxChroma[bd.cell(s, b)] = bd.maxChroma[bd.cell(below, b)];
                    break;
                }
                if (measured[bd.cell(above, b)]) {
                    bd.maxChroma[bd.cell(s, b)] = bd.maxChroma[bd.cell(above, b)];
                    break;
                }
            }
        }
    }
    for (int b = 0; b < lightnessBands; ++b) {
        if (bandPopulated[b]) continue;
        for (int d = 1; d < lightnessBands; ++d) {
            const int src = b - d >= 0 && bandPopulated[b - d] ? b - d
                            : b + d < lightnessBands && bandPopulated[b + d] ? b + d
                                                                              : -1;
            if (src < 0) continue;
            for (int s = 0; s < hueSectors; ++s) bd.maxChroma[bd.cell(s, b)] = bd.maxChroma[bd.cell(s, src)];
            break;
        }
    }
    return bd;
}

inline bool contains(const GamutBoundary& bd, const LabColor& p) {
    if (!(p.l >= bd.lMin && p.l <= bd.lMax)) return false;
    const LChColor lch = lab_lch(p);
    return lch.c <= bd.max_chroma(bd.sector_of(lch.h), bd.band_of(lch.l));
}

inline double oog_fraction(const GamutBoundary& bd, std::span<const LabColor> points) {
    if (points.empty()) throw DomainError("oog_fraction of an empty point list");
    const auto outside = std::count_if(points.begin(), points.end(), [&](const LabColor& p) { return !contains(bd, p); });
    return static_cast<double>(outside) / static_cast<double>(points.size());
}

// --- Elementary transforms -------------------------------------------------

struct LightnessTranslate {
    double distance = 0.0;
};
struct LightnessScale {
    double factor = 1.0;
    double pivot = 50.0;
};
struct ChromaScale {
    double factor = 1.0;
};
struct HueRotate {
    double degrees = 0.0;  // normalized to (-180, 180]
};

using ElementaryTransform = std::variant<LightnessTranslate, LightnessScale, ChromaScale, HueRotate>;

inline double normalize_rotation(double degrees) {
    double d = std::fmod(degrees, 360.0);
    if (d <= -180.0) d += 360.0;
    if (d > 180.0) d -= 360.0;
    return d;
}

/// Validated constructors for the transforms with constrained parameters.
inline LightnessScale make_lightness_scale(double factor, double pivot = 50.0) {
    if (!(factor > 0.0) || !std::isfinite(factor)) throw DomainError("lightness scale factor must be > 0");
    return {factor, pivot};
}
inline ChromaScale make_chroma_scale(double factor) {
    if (!(factor > 0.0) || !std::isfinite(factor)) throw DomainError("chroma scale factor must be > 0");
    return {factor};
}
inline HueRotate make_hue_rotate(double degrees) {
    if (!std::isfinite(degrees)) throw DomainError("hue rotation must be finite");
    return {normalize_rotation(degrees)};
}

struct GamutMap {
    std::vector<ElementaryTransform> transforms;  // applied front to back
};

inline void validate(const GamutMap& m) {
    for (const auto& t : m.transforms)
        std::visit(
            [](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, LightnessTranslate>) {
                    if (!std::isfinite(x.distance)) throw DomainError("lightness translation must be finite");
                } else if constexpr (std::is_same_v<T, LightnessScale>) {
                    make_lightness_scale(x.factor, x.pivot);
                    if (!std::isfinite(x.pivot)) throw DomainError("lightness pivot must be finite");
                } else if constexpr (std::is_same_v<T, ChromaScale>) {
                    make_chroma_scale(x.factor);
                } else {
                    if (!std::isfinite(x.degrees) || x.degrees <= -180.0 || x.degrees > 180.0)
                        throw DomainError("hue rotation must lie in (-180, 180]");
                }
            },
            t);
}

/// Counts outputs whose L* had to be clamped into [0, 100].
struct ClampCounter {
    std::size_t clamped = 0;
};

/// Applies the transforms in order. Chroma and hue transforms act on (a, b)
/// directly, so c = 0 stays exactly 0 and factor 1 / angle 0 are exact no-ops.
inline LabColor apply_map(const GamutMap& m, LabColor p, ClampCounter* counter = nullptr) {
    for (const auto& t : m.transforms) {
        std::visit(
            [&p](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, LightnessTranslate>) {
                    p.l += x.distance;
                } else if constexpr (std::is_same_v<T, LightnessScale>) {
                    p.l = x.factor * p.l + (1.0 - x.factor) * x.pivot;
                } else if constexpr (std::is_same_v<T, ChromaScale>) {
                    p.a *= x.factor;
                    p.b *= x.factor;
                } else {
                    const double rad = x.degrees * std::numbers::pi / 180.0;
                    const double cs = std::cos(rad);
                    const double sn = std::sin(rad);
                    const double a = p.a * cs - p.b * sn;
                    const double b = p.a * sn + p.b * cs;
                    p.a = a;
                    p.b = b;
                }
            },
            t);
    }
    if (p.l < 0.0 || p.l > 100.0) {
        p.l = std::clamp(p.l, 0.0, 100.0);
        if (counter) ++counter->clamped;
    }
    return p;
}

// --- Principle scoring -----------------------------------------------------

inline constexpr double kNeutralChroma = 0.5;
inline constexpr double kChromaDecreaseEpsilon = 0.1;

struct PrincipleScores {
    double grayAxisDeviation = 0.0;       // max mapped chroma of source neutrals
    double luminanceContrast = 0.0;       // mapped L* span / destination L* span
    double oogFraction = 0.0;             // mapped points outside the destination
    double meanAbsHueShift = 0.0;         // degrees, chromatic points only
    double chromaDecreaseFraction = 0.0;  // chromatic points that lost chroma
    std::size_t clampedCount = 0;         // L* clamps during mapping

    friend bool operator==(const PrincipleScores&, const PrincipleScores&) = default;
};

/// Weights w1..w5 for principles (1) gray axis, (2) contrast, (3) out of
/// gamut, (4) hue shift, (5) chroma decrease.
struct ObjectiveWeights {
    double grayAxis = 1.0;
    double contrast = 1.0;
    double outOfGamut = 5.0;
    double hueShift = 1.0;
    double chromaDecrease = 1.0;

    static ObjectiveWeights from_array(const std::array<double, 5>& w) { return {w[0], w[1], w[2], w[3], w[4]}; }
    std::array<double, 5> to_array() const { return {grayAxis, contrast, outOfGamut, hueShift, chromaDecrease}; }
};

inline void validate(const ObjectiveWeights& w) {
    bool any = false;
    for (double v : w.to_array()) {
        if (!std::isfinite(v) || v < 0.0) throw DomainError("objective weights must be finite and nonnegative");
        any = any || v > 0.0;
    }
    if (!any) throw DomainError("objective weights must not all be zero");
}

inline double objective(const PrincipleScores& s, const ObjectiveWeights& w) {
    return w.outOfGamut * s.oogFraction + w.grayAxis * s.grayAxisDeviation / 100.0 +
           w.contrast * std::max(0.0, 1.0 - s.luminanceContrast) + w.hueShift * s.meanAbsHueShift / 180.0 +
           w.chromaDecrease * s.chromaDecreaseFraction;
}

namespace detail {

// Source colors with their LCh precomputed; the auto-fit scores many maps
// against the same source.
class ScoringContext {
public:
    ScoringContext(std::span<const LabColor> src, const GamutBoundary& bd) : src_(src), bd_(bd) {
        if (src.empty()) throw DomainError("cannot score an empty source");
        lch_.reserve(src.size());
        for (const auto& p : src) lch_.push_back(lab_lch(p));
    }

    PrincipleScores score(const GamutMap& m) const {
        PrincipleScores s;
        ClampCounter clamps;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        std::size_t outside = 0;
        std::size_t chromatic = 0;
        std::size_t decreased = 0;
        double hueShiftSum = 0.0;
        for (std::size_t i = 0; i < src_.size(); ++i) {
            const LabColor mapped = apply_map(m, src_[i], &clamps);
            const LChColor mlch = lab_lch(mapped);
            lo = std::min(lo, mapped.l);
            hi = std::max(hi, mapped.l);
            if (!contains(bd_, mapped)) ++outside;
            if (lch_[i].c <= kNeutralChroma) {
                s.grayAxisDeviation = std::max(s.grayAxisDeviation, mlch.c);
            } else {
                ++chromatic;
                hueShiftSum += hue_distance(lch_[i].h, mlch.h);
                if (mlch.c < lch_[i].c - kChromaDecreaseEpsilon) ++decreased;
            }
        }
        const double destSpan = bd_.lMax - bd_.lMin;
        s.luminanceContrast = destSpan > 0.0 ? (hi - lo) / destSpan : 1.0;
        s.oogFraction = static_cast<double>(outside) / static_cast<double>(src_.size());
        if (chromatic > 0) {
            s.meanAbsHueShift = hueShiftSum / static_cast<double>(chromatic);
            s.chromaDecreaseFraction = static_cast<double>(decreased) / static_cast<double>(chromatic);
        }
        s.clampedCount = clamps.clamped;
        return s;
    }

private:
    std::span<const LabColor> src_;
    const GamutBoundary& bd_;
    std::vector<LChColor> lch_;
};

}  // namespace detail

/// Scores a map against the five principles. Points with source chroma <= 0.5
/// count as neutral, the rest as chromatic.
inline PrincipleScores score_principles(std::span<const LabColor> src, const GamutBoundary& bd, const GamutMap& m) {
    return detail::ScoringContext(src, bd).score(m);
}

// --- Auto-fit --------------------------------------------------------------

struct AutoFitConfig {
    int rounds = 8;
    int gridPoints = 11;  // candidates per coordinate sweep, current value included
    double shrink = 0.5;  // search half-width factor per round
    bool includeHueRotate = false;

    // Initial half-widths around identity and hard bounds.
    double translateHalfWidth = 25.0;
    double lightnessScaleHalfWidth = 0.5;
    double chromaScaleHalfWidth = 0.6;
    double hueHalfWidth = 30.0;
    std::pair<double, double> translateBounds{-50.0, 50.0};
    std::pair<double, double> scaleBounds{0.2, 2.0};
    std::pair<double, double> hueBounds{-45.0, 45.0};
    double pivot = 50.0;
};

struct TemplateParams {
    double translate = 0.0;
    double lightnessScale = 1.0;
    double chromaScale = 1.0;
    double hueRotate = 0.0;
};

inline GamutMap template_map(const TemplateParams& p, double pivot = 50.0, bool withHue = false) {
    GamutMap m;
    m.transforms.push_back(LightnessTranslate{p.translate});
    m.transforms.push_back(LightnessScale{p.lightnessScale, pivot});
    m.transforms.push_back(ChromaScale{p.chromaScale});
    if (withHue) m.transforms.push_back(HueRotate{normalize_rotation(p.hueRotate)});
    return m;
}

struct AutoFitResult {
    GamutMap map;
    TemplateParams params;
    PrincipleScores scores;
    double objective = 0.0;
    std::vector<double> history;  // identity first, then after every coordinate sweep
};

/// Coordinate descent over the template [translate, lightness scale, chroma
/// scale(, hue rotate)] starting from identity, sweeping chroma scale first,
/// then lightness scale, translate and hue. Each sweep scans an evenly
/// spaced grid around the current value; a candidate replaces the current
/// value only if its objective is lower, or equal and closer to the identity
/// value of that parameter. The search window shrinks every round.
inline AutoFitResult auto_fit(std::span<const LabColor> src, const GamutBoundary& bd, const ObjectiveWeights& weights,
                              const AutoFitConfig& cfg = {}) {
    validate(weights);
    if (cfg.rounds < 1 || cfg.gridPoints < 2) throw DomainError("auto-fit needs rounds >= 1 and gridPoints >= 2");
    const detail::ScoringContext ctx(src, bd);

    TemplateParams cur;
    // Objectives are compared on a 1e-12 grid so that rounding noise in the
    // hue statistics does not break ties between equivalent candidates.
    auto evaluate = [&](const TemplateParams& p) {
        const double obj = objective(ctx.score(template_map(p, cfg.pivot, cfg.includeHueRotate)), weights);
        return std::round(obj * 1e12) / 1e12;
    };
    double best = evaluate(cur);

    AutoFitResult result;
    result.history.push_back(best);

    struct Coordinate {
        double TemplateParams::*field;
        double identity;
        double halfWidth;
        std::pair<double, double> bounds;
    };
    std::vector<Coordinate> coords{
        {&TemplateParams::chromaScale, 1.0, cfg.chromaScaleHalfWidth, cfg.scaleBounds},
        {&TemplateParams::lightnessScale, 1.0, cfg.lightnessScaleHalfWidth, cfg.scaleBounds},
        {&TemplateParams::translate, 0.0, cfg.translateHalfWidth, cfg.translateBounds},
    };
    if (cfg.includeHueRotate) coords.push_back({&TemplateParams::hueRotate, 0.0, cfg.hueHalfWidth, cfg.hueBounds});

    for (int round = 0; round < cfg.rounds; ++round) {
        for (auto& coord : coords) {
            const double center = cur.*coord.field;
            const double lo = std::max(coord.bounds.first, center - coord.halfWidth);
            const double hi = std::min(coord.bounds.second, center + coord.halfWidth);
            double chosen = center;
            double chosenDist = std::fabs(center - coord.identity);
            for (int i = 0; i < cfg.gridPoints; ++i) {
                const double v = lo + (hi - lo) * i / (cfg.gridPoints - 1);
                TemplateParams trial = cur;
                trial.*coord.field = v;
                const double obj = evaluate(trial);
                const double dist = std::fabs(v - coord.identity);
                if (obj < best || (obj == best && dist < chosenDist)) {
                    best = obj;
                    chosen = v;
                    chosenDist = dist;
                }
            }
            cur.*coord.field = chosen;
            coord.halfWidth *= cfg.shrink;
            result.history.push_back(best);
        }
    }

    result.params = cur;
    result.map = template_map(cur, cfg.pivot, cfg.includeHueRotate);
    result.scores = ctx.score(result.map);
    result.objective = best;
    return result;
}

// --- Image-level operations ------------------------------------------------

struct MappedImage {
    RasterImage image;
    std::size_t clampedLightness = 0;  // pixels whose L* was clamped
    std::size_t clampedToGamut = 0;    // pixels clamped into sRGB
};

inline MappedImage map_image(const RasterImage& image, const GamutMap& m) {
    MappedImage out;
    out.image = RasterImage(image.width, image.height);
    ClampCounter clamps;
    for (std::size_t i = 0; i < image.pixels.size(); ++i) {
        const auto conv = lab_to_rgb(apply_map(m, rgb_to_lab(image.pixels[i]), &clamps));
        if (!conv.inGamut) ++out.clampedToGamut;
        out.image.pixels[i] = conv.rgb;
    }
    out.clampedLightness = clamps.clamped;
    return out;
}

struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;  // row-major, 0 or 1

    std::size_t count() const { return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), 1)); }
    double density() const { return bits.empty() ? 0.0 : static_cast<double>(count()) / static_cast<double>(bits.size()); }

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;
};

inline BinaryMask oog_mask(const RasterImage& image, const GamutBoundary& bd) {
    BinaryMask mask{image.width, image.height, std::vector<std::uint8_t>(image.size(), 0)};
    for (std::size_t i = 0; i < image.pixels.size(); ++i)
        mask.bits[i] = contains(bd, rgb_to_lab(image.pixels[i])) ? 0 : 1;
    return mask;
}

/// Run lengths of alternating values, starting with a run of zeros (possibly
/// of length 0). The runs sum to width * height.
inline std::vector<std::uint64_t> rle_encode(const BinaryMask& mask) {
    std::vector<std::uint64_t> runs;
    std::uint8_t current = 0;
    std::uint64_t length = 0;
    for (auto bit : mask.bits) {
        if (bit != current) {
            runs.push_back(length);
            current = bit;
            length = 0;
        }
        ++length;
    }
    runs.push_back(length);
    return runs;
}

inline BinaryMask rle_decode(int width, int height, std::span<const std::uint64_t> runs) {
    if (width < 0 || height < 0) throw DomainError("negative mask dimensions");
    BinaryMask mask{width, height, {}};
    const std::size_t expected = static_cast<std::size_t>(width) * height;
    mask.bits.reserve(expected);
    std::uint8_t value = 0;
    for (auto run : runs) {
        if (run > expected - mask.bits.size()) throw DomainError("mask runs exceed width * height");
        mask.bits.insert(mask.bits.end(), run, value);
        value ^= 1;
    }
    if (mask.bits.size() != expected) throw DomainError("mask runs do not cover width * height");
    return mask;
}

/// Closed interval; for hue, lo > hi means the range wraps through 0.
struct ValueRange {
    double lo = 0.0;
    double hi = 0.0;
};

inline bool hue_in_range(double h, const ValueRange& r) {
    const double lo = normalize_hue(r.lo);
    const double hi = normalize_hue(r.hi);
    if (r.hi - r.lo >= 360.0) return true;
    return lo <= hi ? (h >= lo && h <= hi) : (h >= lo || h <= hi);
}

inline std::vector<PixelCoord> pixels_for_region(const RasterImage& image, const ValueRange& lRange,
                                                 const ValueRange& cRange, const ValueRange& hRange) {
    std::vector<PixelCoord> out;
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x) {
            const LChColor lch = lab_lch(rgb_to_lab(image.at(x, y)));
            if (lch.l >= lRange.lo && lch.l <= lRange.hi && lch.c >= cRange.lo && lch.c <= cRange.hi &&
                hue_in_range(lch.h, hRange))
                out.push_back({x, y});
        }
    return out;
}

struct CellRegion {
    ValueRange lightness;
    ValueRange chroma;
    ValueRange hue;
};

/// LCh ranges covering one boundary cell, for pixels_for_region.
inline CellRegion cell_region(const GamutBoundary& bd, int sector, int band) {
    const double hueWidth = 360.0 / bd.hueSectors;
    const double bandWidth = 100.0 / bd.lightnessBands;
    return {{bd.band_start(band), bd.band_start(band) + bandWidth},
            {0.0, std::numeric_limits<double>::infinity()},
            {bd.sector_start(sector), bd.sector_start(sector) + hueWidth}};
}

// --- Mesh --------------------------------------------------------------------

struct MeshVertex {
    LabColor lab;
    RGBColor display;
};

struct GamutMesh {
    std::vector<MeshVertex> vertices;
    std::vector<std::array<std::uint32_t, 3>> triangles;
    int hueSectors = 0;
    int lightnessBands = 0;
};

/// One vertex per cell at (band center L*, cell max chroma, sector center hue),
/// plus poles at lMin and lMax. Index of cell vertex: band * H + sector;
/// poles follow. Triangles wind outward.
inline GamutMesh boundary_mesh(const GamutBoundary& bd) {
    const int H = bd.hueSectors;
    const int B = bd.lightnessBands;
    GamutMesh mesh;
    mesh.hueSectors = H;
    mesh.lightnessBands = B;
    auto vertex = [](const LabColor& lab) { return MeshVertex{lab, lab_to_rgb(lab).rgb}; };
    for (int b = 0; b < B; ++b)
        for (int s = 0; s < H; ++s)
            mesh.vertices.push_back(vertex(lch_lab({bd.band_center(b), bd.max_chroma(s, b), bd.sector_center(s)})));
    const auto bottom = static_cast<std::uint32_t>(mesh.vertices.size());
    mesh.vertices.push_back(vertex({std::clamp(bd.lMin, 0.0, 100.0), 0.0, 0.0}));
    const auto top = static_cast<std::uint32_t>(mesh.vertices.size());
    mesh.vertices.push_back(vertex({std::clamp(bd.lMax, 0.0, 100.0), 0.0, 0.0}));

    auto idx = [H](int b, int s) { return static_cast<std::uint32_t>(b * H + (s % H)); };
    for (int b = 0; b + 1 < B; ++b)
        for (int s = 0; s < H; ++s) {
            mesh.triangles.push_back({idx(b, s), idx(b, s + 1), idx(b + 1, s + 1)});
            mesh.triangles.push_back({idx(b, s), idx(b + 1, s + 1), idx(b + 1, s)});
        }
    for (int s = 0; s < H; ++s) {
        mesh.triangles.push_back({bottom, idx(0, s + 1), idx(0, s)});
        mesh.triangles.push_back({top, idx(B - 1, s), idx(B - 1, s + 1)});
    }
    return mesh;
}

/// Every index in range, every undirected edge used by exactly two triangles
/// and every directed edge by exactly one (consistent winding).
inline bool is_watertight(const GamutMesh& mesh) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> directed;
    for (const auto& t : mesh.triangles)
        for (int e = 0; e < 3; ++e) {
            const auto u = t[e];
            const auto v = t[(e + 1) % 3];
            if (u >= mesh.vertices.size() || v >= mesh.vertices.size() || u == v) return false;
            if (++directed[{u, v}] > 1) return false;
        }
    for (const auto& [edge, n] : directed)
        if (!directed.contains({edge.second, edge.first})) return false;
    return !mesh.triangles.empty();
}

}  // namespace prepress
