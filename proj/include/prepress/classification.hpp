#pragma once

// Image key classification from the L* distribution.
//
// Class ranges partition [0, 100]:
//   LowKey    [0, 40]
//   NormalKey (40, 60]
//   HighKey   (60, 100]
// Histogram bins use the same orientation, (lo, hi] with bin 0 closed at 0, so
// with the default 10 steps every bin lies wholly inside one class.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prepress/colorspace.hpp"
#include "prepress/errors.hpp"
#include "prepress/image.hpp"

namespace prepress {

enum class ImageKeyClass { LowKey, NormalKey, HighKey };

inline constexpr int kDefaultLStarSteps = 10;

struct LStarRange {
    double lo;  // exclusive, except 0 for LowKey
    double hi;  // inclusive
};

inline constexpr LStarRange key_range(ImageKeyClass cls) {
    switch (cls) {
        case ImageKeyClass::LowKey: return {0.0, 40.0};
        case ImageKeyClass::NormalKey: return {40.0, 60.0};
        case ImageKeyClass::HighKey: return {60.0, 100.0};
    }
    return {0.0, 0.0};
}

inline bool in_key_range(ImageKeyClass cls, double l) {
    const auto r = key_range(cls);
    if (cls == ImageKeyClass::LowKey) return l >= r.lo && l <= r.hi;
    return l > r.lo && l <= r.hi;
}

inline std::string_view to_string(ImageKeyClass cls) {
    switch (cls) {
        case ImageKeyClass::LowKey: return "low-key";
        case ImageKeyClass::NormalKey: return "normal-key";
        case ImageKeyClass::HighKey: return "high-key";
    }
    return "?";
}

/// Accepts "low-key"/"low", "normal-key"/"normal", "high-key"/"high".
inline ImageKeyClass parse_key_class(std::string_view s) {
    if (s == "low-key" || s == "low") return ImageKeyClass::LowKey;
    if (s == "normal-key" || s == "normal") return ImageKeyClass::NormalKey;
    if (s == "high-key" || s == "high") return ImageKeyClass::HighKey;
    throw DomainError("unknown key class '" + std::string(s) + "'");
}

struct LStarHistogram {
    int stepCount = kDefaultLStarSteps;
    std::vector<std::uint64_t> counts;
    std::uint64_t totalPixels = 0;

    double bin_lo(int i) const { return 100.0 * i / stepCount; }
    double bin_hi(int i) const { return 100.0 * (i + 1) / stepCount; }
};

/// L* is snapped to a 1e-6 grid before binning so that conversion round-off
/// (e.g. 60 + 1e-13) does not push a value across a bin edge.
inline int lstar_bin(double l, int stepCount) {
    const double snapped = std::round(l * 1e6) / 1e6;
    const double pos = std::ceil(snapped * stepCount / 100.0) - 1.0;
    return static_cast<int>(std::clamp(pos, 0.0, static_cast<double>(stepCount - 1)));
}

inline LStarHistogram lstar_histogram_from_values(std::span<const double> lvalues, int stepCount) {
    if (stepCount < 3) throw DomainError("stepCount must be >= 3, got " + std::to_string(stepCount));
    if (lvalues.empty()) throw DomainError("cannot build an L* histogram of an empty image");
    LStarHistogram h;
    h.stepCount = stepCount;
    h.counts.assign(static_cast<std::size_t>(stepCount), 0);
    for (double l : lvalues) ++h.counts[static_cast<std::size_t>(lstar_bin(l, stepCount))];
    h.totalPixels = lvalues.size();
    return h;
}

inline LStarHistogram lstar_histogram(const RasterImage& image, int stepCount = kDefaultLStarSteps) {
    if (stepCount < 3) throw DomainError("stepCount must be >= 3, got " + std::to_string(stepCount));
    if (image.empty()) throw DomainError("cannot build an L* histogram of an empty image");
    std::vector<double> lvalues;
    lvalues.reserve(image.size());
    for (const auto& px : image.pixels) lvalues.push_back(rgb_to_lab(px).l);
    return lstar_histogram_from_values(lvalues, stepCount);
}

struct KeyMassReport {
    double highMass = 0.0;
    double normalMass = 0.0;
    double lowMass = 0.0;
    ImageKeyClass chosen = ImageKeyClass::NormalKey;
    std::optional<int> excludedBin;  // set when a background peak was dropped
};

// Background peak: among bins reaching above L* 95, the fullest one, if it
// holds more than 30% of all pixels.
inline constexpr double kBackgroundLStar = 95.0;
inline constexpr double kBackgroundShare = 0.30;

inline std::optional<int> find_background_peak(const LStarHistogram& hist) {
    std::optional<int> best;
    for (int i = 0; i < hist.stepCount; ++i) {
        if (hist.bin_hi(i) <= kBackgroundLStar) continue;
        if (!best || hist.counts[i] > hist.counts[*best]) best = i;
    }
    if (!best) return std::nullopt;
    const double share = static_cast<double>(hist.counts[*best]) / static_cast<double>(hist.totalPixels);
    if (share <= kBackgroundShare) return std::nullopt;
    if (hist.counts[*best] == hist.totalPixels) return std::nullopt;  // nothing would remain
    return best;
}

/// Splits histogram mass into the three key ranges. A bin straddling a class
/// border contributes proportionally to its overlap with each range. Ties for
/// the largest mass resolve to NormalKey.
inline KeyMassReport classify_key(const LStarHistogram& hist, bool excludeBackgroundPeak = false) {
    if (hist.stepCount < 3 || hist.counts.size() != static_cast<std::size_t>(hist.stepCount))
        throw DomainError("malformed L* histogram");
    KeyMassReport report;
    if (excludeBackgroundPeak) report.excludedBin = find_background_peak(hist);

    std::uint64_t total = 0;
    for (int i = 0; i < hist.stepCount; ++i)
        if (i != report.excludedBin) total += hist.counts[i];
    if (total == 0) throw DomainError("L* histogram holds no pixels");

    constexpr std::array classes{ImageKeyClass::LowKey, ImageKeyClass::NormalKey, ImageKeyClass::HighKey};
    std::array<double, 3> mass{};
    for (int i = 0; i < hist.stepCount; ++i) {
        if (i == report.excludedBin || hist.counts[i] == 0) continue;
        const double lo = hist.bin_lo(i);
        const double hi = hist.bin_hi(i);
        const double share = static_cast<double>(hist.counts[i]) / static_cast<double>(total);
        for (std::size_t c = 0; c < classes.size(); ++c) {
            const auto r = key_range(classes[c]);
            const double overlap = std::max(0.0, std::min(hi, r.hi) - std::max(lo, r.lo));
            mass[c] += share * overlap / (hi - lo);
        }
    }
    report.lowMass = mass[0];
    report.normalMass = mass[1];
    report.highMass = mass[2];

    const double best = std::max({mass[0], mass[1], mass[2]});
    const int winners = (mass[0] == best) + (mass[1] == best) + (mass[2] == best);
    if (winners > 1 || mass[1] == best)
        report.chosen = ImageKeyClass::NormalKey;
    else
        report.chosen = mass[0] == best ? ImageKeyClass::LowKey : ImageKeyClass::HighKey;
    return report;
}

/// Separation presets per image key (house values, not measured data).
inline SeparationParams recommend_separation(ImageKeyClass cls) {
    switch (cls) {
        case ImageKeyClass::LowKey: return {0.9, 0.1, 0.7, 3.0};
        case ImageKeyClass::NormalKey: return {0.7, 0.2, 0.6, 3.2};
        case ImageKeyClass::HighKey: return {0.5, 0.3, 0.5, 3.4};
    }
    return {};
}

}  // namespace prepress
