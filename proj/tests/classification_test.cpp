#include "prepress/classification.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

namespace prepress {
namespace {

RasterImage uniform_lstar_image(double l, int w = 4, int h = 3) {
    return RasterImage(w, h, lab_to_rgb({l, 0, 0}).rgb);
}

TEST(LStarHistogram, UniformImageFallsInOneBin) {
    // Bins are (lo, hi], so L* 50 closes bin 4 = (40, 50].
    const auto hist = lstar_histogram(uniform_lstar_image(50), 10);
    EXPECT_EQ(hist.counts[4], 12u);
    EXPECT_EQ(hist.totalPixels, 12u);
    EXPECT_EQ(std::accumulate(hist.counts.begin(), hist.counts.end(), std::uint64_t{0}), 12u);
}

TEST(LStarHistogram, BlackAndWhiteHitTheEndBins) {
    RasterImage img(2, 1);
    img.at(0, 0) = {0, 0, 0};
    img.at(1, 0) = {1, 1, 1};
    const auto hist = lstar_histogram(img, 10);
    EXPECT_EQ(hist.counts[0], 1u);
    EXPECT_EQ(hist.counts[9], 1u);
}

TEST(LStarHistogram, Errors) {
    EXPECT_THROW(lstar_histogram(RasterImage{}, 10), DomainError);
    EXPECT_THROW(lstar_histogram(uniform_lstar_image(50), 2), DomainError);
}

TEST(LStarHistogram, BinEdgesFollowClassEndpoints) {
    EXPECT_EQ(lstar_bin(0.0, 10), 0);
    EXPECT_EQ(lstar_bin(10.0, 10), 0);
    EXPECT_EQ(lstar_bin(10.0 + 1e-3, 10), 1);
    EXPECT_EQ(lstar_bin(60.0 + 1e-12, 10), 5);  // snapped back onto the edge
    EXPECT_EQ(lstar_bin(100.0, 10), 9);
    EXPECT_EQ(lstar_bin(100.0 + 1e-9, 10), 9);
    EXPECT_EQ(lstar_bin(-1e-9, 10), 0);
}

TEST(LStarHistogram, ConservationProperty) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0, 1);
    std::uniform_int_distribution<int> dim(1, 20), steps(3, 40);
    for (int trial = 0; trial < 50; ++trial) {
        RasterImage img(dim(rng), dim(rng));
        for (auto& px : img.pixels) px = {u(rng), u(rng), u(rng)};
        const auto hist = lstar_histogram(img, steps(rng));
        EXPECT_EQ(std::accumulate(hist.counts.begin(), hist.counts.end(), std::uint64_t{0}), img.size());
        const auto report = classify_key(hist);
        EXPECT_NEAR(report.highMass + report.normalMass + report.lowMass, 1.0, 1e-9);
    }
}

TEST(ClassifyKey, UniformImages) {
    auto classify = [](double l) { return classify_key(lstar_histogram(uniform_lstar_image(l), 10)); };
    const auto high = classify(80);
    EXPECT_EQ(high.chosen, ImageKeyClass::HighKey);
    EXPECT_DOUBLE_EQ(high.highMass, 1.0);
    EXPECT_EQ(classify(50).chosen, ImageKeyClass::NormalKey);
    EXPECT_EQ(classify(20).chosen, ImageKeyClass::LowKey);
    EXPECT_EQ(classify(60).chosen, ImageKeyClass::NormalKey);
    EXPECT_EQ(classify(40).chosen, ImageKeyClass::LowKey);
}

TEST(ClassifyKey, TieBreaksTowardNormal) {
    const std::vector<double> l{20, 20, 80, 80};
    const auto report = classify_key(lstar_histogram_from_values(l, 10));
    EXPECT_DOUBLE_EQ(report.lowMass, 0.5);
    EXPECT_DOUBLE_EQ(report.highMass, 0.5);
    EXPECT_DOUBLE_EQ(report.normalMass, 0.0);
    EXPECT_EQ(report.chosen, ImageKeyClass::NormalKey);
}

TEST(ClassifyKey, StraddlingBinSplitsProportionally) {
    // 4 steps: bin 1 = (25, 50] straddles 40: 15/25 low, 10/25 normal.
    const std::vector<double> l{45};
    const auto report = classify_key(lstar_histogram_from_values(l, 4));
    EXPECT_NEAR(report.lowMass, 0.6, 1e-12);
    EXPECT_NEAR(report.normalMass, 0.4, 1e-12);
    EXPECT_EQ(report.chosen, ImageKeyClass::LowKey);
}

TEST(ClassifyKey, BackgroundPeakExclusion) {
    // 40% paper white, 60% normal-key content, 0% high-key otherwise.
    std::vector<double> l(40, 100.0);
    l.insert(l.end(), 35, 55.0);
    l.insert(l.end(), 25, 30.0);
    const auto hist = lstar_histogram_from_values(l, 10);

    const auto kept = classify_key(hist, false);
    EXPECT_FALSE(kept.excludedBin);
    EXPECT_NEAR(kept.highMass, 0.4, 1e-12);

    const auto dropped = classify_key(hist, true);
    ASSERT_TRUE(dropped.excludedBin);
    EXPECT_EQ(*dropped.excludedBin, 9);
    EXPECT_EQ(dropped.highMass, 0.0);
    EXPECT_NEAR(dropped.normalMass, 35.0 / 60.0, 1e-12);
    EXPECT_EQ(dropped.chosen, ImageKeyClass::NormalKey);
}

TEST(ClassifyKey, SmallWhitePeakIsKept) {
    std::vector<double> l(20, 100.0);
    l.insert(l.end(), 80, 30.0);
    EXPECT_FALSE(classify_key(lstar_histogram_from_values(l, 10), true).excludedBin);
}

TEST(ClassifyKey, AllWhiteImageIsNotEmptiedByExclusion) {
    const std::vector<double> l(10, 100.0);
    const auto report = classify_key(lstar_histogram_from_values(l, 10), true);
    EXPECT_FALSE(report.excludedBin);
    EXPECT_EQ(report.chosen, ImageKeyClass::HighKey);
}

TEST(ClassifyKey, UpwardShiftNeverTurnsHighIntoLow) {
    // Low mass can only shrink and high mass only grow under an upward shift,
    // so a high-key image can never become low-key.
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> l(0, 100), shift(0, 30);
    int highBefore = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<double> values(50);
        const double center = l(rng);
        for (auto& v : values) v = std::clamp(center + 30.0 * (l(rng) / 100.0 - 0.5), 0.0, 100.0);
        const double d = shift(rng);
        std::vector<double> shifted(values);
        for (auto& v : shifted) v = std::min(100.0, v + d);
        const auto before = classify_key(lstar_histogram_from_values(values, 10));
        const auto after = classify_key(lstar_histogram_from_values(shifted, 10));
        EXPECT_LE(after.lowMass, before.lowMass + 1e-12);
        EXPECT_GE(after.highMass, before.highMass - 1e-12);
        if (before.chosen == ImageKeyClass::HighKey) {
            ++highBefore;
            EXPECT_NE(after.chosen, ImageKeyClass::LowKey);
        }
    }
    EXPECT_GT(highBefore, 100);
}

TEST(ClassifyKey, IsDeterministic) {
    const std::vector<double> l{12, 45, 45, 71, 99, 100, 3};
    const auto hist = lstar_histogram_from_values(l, 7);
    const auto a = classify_key(hist, true);
    const auto b = classify_key(hist, true);
    EXPECT_EQ(a.chosen, b.chosen);
    EXPECT_EQ(a.highMass, b.highMass);
    EXPECT_EQ(a.normalMass, b.normalMass);
    EXPECT_EQ(a.lowMass, b.lowMass);
}

TEST(RecommendSeparation, PresetTable) {
    EXPECT_EQ(recommend_separation(ImageKeyClass::LowKey), (SeparationParams{0.9, 0.1, 0.7, 3.0}));
    EXPECT_EQ(recommend_separation(ImageKeyClass::NormalKey), (SeparationParams{0.7, 0.2, 0.6, 3.2}));
    EXPECT_EQ(recommend_separation(ImageKeyClass::HighKey), (SeparationParams{0.5, 0.3, 0.5, 3.4}));
    for (auto cls : {ImageKeyClass::LowKey, ImageKeyClass::NormalKey, ImageKeyClass::HighKey})
        EXPECT_NO_THROW(validate(recommend_separation(cls)));
}

TEST(KeyClassNames, RoundTrip) {
    for (auto cls : {ImageKeyClass::LowKey, ImageKeyClass::NormalKey, ImageKeyClass::HighKey})
        EXPECT_EQ(parse_key_class(to_string(cls)), cls);
    EXPECT_EQ(parse_key_class("high"), ImageKeyClass::HighKey);
    EXPECT_THROW(parse_key_class("mid"), DomainError);
}

TEST(KeyRanges, PartitionZeroToHundred) {
    for (int i = 0; i <= 100000; ++i) {
        const double l = i / 1000.0;
        const int hits = in_key_range(ImageKeyClass::LowKey, l) + in_key_range(ImageKeyClass::NormalKey, l) +
                         in_key_range(ImageKeyClass::HighKey, l);
        ASSERT_EQ(hits, 1) << l;
    }
}

}  // namespace
}  // namespace prepress
