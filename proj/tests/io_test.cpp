#include "prepress/io/cgats.hpp"
#include "prepress/io/json.hpp"
#include "prepress/io/ppm.hpp"

#include <gtest/gtest.h>

#include <random>

namespace prepress::io {
namespace {

std::string bytes_to_string(const std::vector<std::uint8_t>& v) { return {v.begin(), v.end()}; }

std::string to_crlf(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '\n') out += '\r';
        out += c;
    }
    return out;
}

const std::string kMinimalCgats =
    "CGATS.17\n"
    "ORIGINATOR \"bench\"\n"
    "BEGIN_DATA_FORMAT\n"
    "RGB_R RGB_G RGB_B LAB_L LAB_A LAB_B\n"
    "END_DATA_FORMAT\n"
    "BEGIN_DATA\n"
    "255 255 255 100 0 0\n"
    "END_DATA\n";

std::size_t error_line(const std::string& text) {
    try {
        parse_cgats(text);
    } catch (const ParseError& e) {
        EXPECT_EQ(e.kind(), ParseError::Kind::Line);
        return e.position();
    }
    ADD_FAILURE() << "expected a parse error";
    return 0;
}

// --- PPM ---

TEST(Ppm, SingleWhitePixel) {
    const std::string file = std::string("P6\n1 1\n255\n") + "\xff\xff\xff";
    const auto img = read_ppm(file);
    ASSERT_EQ(img.size(), 1u);
    EXPECT_EQ(img.pixels[0], (RGBColor{1, 1, 1}));
}

TEST(Ppm, RejectsOtherMagic) {
    try {
        read_ppm(std::string("P3\n1 1\n255\n255 255 255\n"));
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.kind(), ParseError::Kind::ByteOffset);
        EXPECT_EQ(e.position(), 0u);
    }
}

TEST(Ppm, CommentsParseIdentically) {
    const std::string pixels("\x00\x10\x20\x30\x40\x50\x60\x70\x80\x90\xa0\xb0", 12);
    const auto plain = read_ppm("P6\n2 2\n255\n" + pixels);
    const auto commented = read_ppm("P6\n# made by hand\n2 # width\n  2\n#maxval next\n255\n" + pixels);
    EXPECT_EQ(plain, commented);
    EXPECT_EQ(plain.at(1, 1), (RGBColor{0x90 / 255.0, 0xa0 / 255.0, 0xb0 / 255.0}));
}

TEST(Ppm, Errors) {
    auto offset_of = [](const std::string& s) -> std::size_t {
        try {
            read_ppm(s);
        } catch (const ParseError& e) {
            return e.position();
        }
        return std::string::npos;
    };
    EXPECT_EQ(offset_of("P6\n1 1\n65535\n"), 7u);
    EXPECT_EQ(offset_of("P6\n2 1\n255\n\x01\x02\x03"), 14u);  // truncated data
    EXPECT_EQ(offset_of(""), 0u);
    EXPECT_EQ(offset_of("P6\n0 4\n255\n"), 7u);
    EXPECT_NE(offset_of("P6\n1"), std::string::npos);
    EXPECT_NE(offset_of("P6x 1 1 255\n..."), std::string::npos);
}

TEST(Ppm, WriteIsCanonical) {
    const RasterImage img(4, 2, {0.2, 0.4, 0.6});
    const auto bytes = write_ppm(img);
    const std::string header = "P6\n4 2\n255\n";
    EXPECT_EQ(bytes_to_string(bytes).substr(0, 3), "P6\n");
    EXPECT_EQ(bytes.size(), header.size() + 3 * 4 * 2);
    EXPECT_EQ(bytes[header.size()], 51);
    EXPECT_THROW(write_ppm(RasterImage{}), DomainError);
}

TEST(Ppm, RoundTripWithinQuantization) {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> u(0, 1);
    std::uniform_int_distribution<int> dim(1, 16);
    for (int trial = 0; trial < 50; ++trial) {
        RasterImage img(trial == 0 ? 8 : dim(rng), trial == 0 ? 8 : dim(rng));
        for (auto& px : img.pixels) px = {u(rng), u(rng), u(rng)};
        const auto back = read_ppm(bytes_to_string(write_ppm(img)));
        ASSERT_EQ(back.width, img.width);
        ASSERT_EQ(back.height, img.height);
        for (std::size_t i = 0; i < img.pixels.size(); ++i) {
            EXPECT_LE(std::fabs(back.pixels[i].r - img.pixels[i].r), 1.0 / 255);
            EXPECT_LE(std::fabs(back.pixels[i].g - img.pixels[i].g), 1.0 / 255);
            EXPECT_LE(std::fabs(back.pixels[i].b - img.pixels[i].b), 1.0 / 255);
        }
        EXPECT_EQ(write_ppm(back), write_ppm(img));  // quantized images are fixed points
    }
}

TEST(Ppm, TruncationNeverCrashes) {
    const auto full = bytes_to_string(write_ppm(RasterImage(3, 3, {0.5, 0.25, 1})));
    for (std::size_t n = 0; n < full.size(); ++n) EXPECT_THROW(read_ppm(full.substr(0, n)), ParseError);
}

// --- CGATS ---

TEST(Cgats, MinimalFile) {
    const auto ms = parse_cgats(kMinimalCgats);
    ASSERT_EQ(ms.entries.size(), 1u);
    EXPECT_EQ(ms.entries[0].device, (RGBColor{1, 1, 1}));
    EXPECT_EQ(ms.entries[0].measured, (LabColor{100, 0, 0}));
    ASSERT_GE(ms.metadata.size(), 2u);
    EXPECT_EQ(ms.metadata[1], (std::pair<std::string, std::string>{"ORIGINATOR", "bench"}));
}

TEST(Cgats, CrlfParsesIdentically) {
    const auto lf = parse_cgats(kMinimalCgats);
    const auto crlf = parse_cgats(to_crlf(kMinimalCgats));
    EXPECT_EQ(lf.entries.size(), crlf.entries.size());
    EXPECT_EQ(lf.entries[0].device, crlf.entries[0].device);
    EXPECT_EQ(lf.entries[0].measured, crlf.entries[0].measured);
    EXPECT_EQ(lf.metadata, crlf.metadata);
}

TEST(Cgats, MissingColumnIsNamed) {
    std::string text = kMinimalCgats;
    text.replace(text.find(" LAB_B"), 6, "");
    text.replace(text.find(" 0\n"), 2, "");
    try {
        parse_cgats(text);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("LAB_B"), std::string::npos);
        EXPECT_EQ(e.position(), 3u);
    }
}

TEST(Cgats, RowErrorsCarryLineNumbers) {
    std::string arity = kMinimalCgats;
    arity.replace(arity.find("255 255 255 100 0 0"), 19, "255 255 100 0 0");
    EXPECT_EQ(error_line(arity), 7u);

    std::string text = kMinimalCgats;
    text.replace(text.find("255 255 255 100 0 0"), 19, "255 255 255 100 0 0\n10 20 30 abc 0 0");
    EXPECT_EQ(error_line(text), 8u);
    EXPECT_EQ(error_line(to_crlf(text)), 8u);

    std::string range = kMinimalCgats;
    range.replace(range.find("255 255 255 100"), 15, "255 256 255 100");
    EXPECT_EQ(error_line(range), 7u);
}

TEST(Cgats, StructuralErrors) {
    EXPECT_THROW(parse_cgats(""), ParseError);
    EXPECT_THROW(parse_cgats("BEGIN_DATA\nEND_DATA\n"), ParseError);
    std::string noEnd = kMinimalCgats;
    noEnd.erase(noEnd.find("END_DATA\n", noEnd.find("BEGIN_DATA\n")));
    EXPECT_THROW(parse_cgats(noEnd), ParseError);
    std::string empty = kMinimalCgats;
    empty.replace(empty.find("255 255 255 100 0 0\n"), 20, "");
    EXPECT_THROW(parse_cgats(empty), ParseError);
}

TEST(Cgats, ExtrasCommentsAndQuotes) {
    const std::string text =
        "CGATS.17\n"
        "# leading comment\n"
        "BEGIN_DATA_FORMAT\n"
        "SAMPLE_ID RGB_R RGB_G RGB_B LAB_L LAB_A LAB_B\n"
        "END_DATA_FORMAT\n"
        "BEGIN_DATA\n"
        "\"A 1\" 0 127.5 255 50.5 -3 +4  # trailing\n"
        "A2\t10\t20\t30\t40\t1e1\t-2.5\n"
        "END_DATA\n";
    const auto ms = parse_cgats(text);
    ASSERT_EQ(ms.entries.size(), 2u);
    EXPECT_EQ(ms.entries[0].extras, (Metadata{{"SAMPLE_ID", "A 1"}}));
    EXPECT_EQ(ms.entries[0].device, (RGBColor{0, 0.5, 1}));
    EXPECT_EQ(ms.entries[0].measured, (LabColor{50.5, -3, 4}));
    EXPECT_EQ(ms.entries[1].measured, (LabColor{40, 10, -2.5}));
}

TEST(Cgats, FormatRoundTrip) {
    MeasurementSet ms;
    ms.metadata = {{"ORIGINATOR", "round trip"}};
    std::mt19937_64 rng(73);
    std::uniform_int_distribution<int> byte(0, 255);
    std::uniform_real_distribution<double> l(0, 100), ab(-100, 100);
    for (int i = 0; i < 30; ++i)
        ms.entries.push_back({{byte(rng) / 255.0, byte(rng) / 255.0, byte(rng) / 255.0},
                              {l(rng), ab(rng), ab(rng)},
                              {{"SAMPLE_ID", "S" + std::to_string(i)}}});
    const auto back = parse_cgats(format_cgats(ms));
    ASSERT_EQ(back.entries.size(), ms.entries.size());
    for (std::size_t i = 0; i < ms.entries.size(); ++i) {
        EXPECT_NEAR(back.entries[i].device.r, ms.entries[i].device.r, 1e-15);
        EXPECT_EQ(back.entries[i].measured, ms.entries[i].measured);
        EXPECT_EQ(back.entries[i].extras, ms.entries[i].extras);
    }
    EXPECT_EQ(format_cgats(back), format_cgats(ms));
}

TEST(Cgats, MutationsNeverCrash) {
    std::mt19937_64 rng(79);
    const std::string alphabet = " \t\r\n\"#0123456789.-+eABCDEFGHIJKLMNOPQRSTUVWXYZ_";
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::size_t parsed = 0;
    for (int i = 0; i < 3000; ++i) {
        std::string text = kMinimalCgats;
        std::uniform_int_distribution<std::size_t> pos(0, text.size() - 1);
        for (int k = 0; k < 1 + i % 4; ++k) {
            const std::size_t at = pos(rng);
            switch (k % 3) {
                case 0: text[at] = alphabet[pick(rng)]; break;
                case 1: text.erase(at, 1); break;
                default: text.insert(at, 1, alphabet[pick(rng)]); break;
            }
        }
        try {
            parse_cgats(text);
            ++parsed;
        } catch (const ParseError&) {
        }
    }
    EXPECT_GT(parsed, 0u);
}

// --- JSON ---

TEST(Json, LayoutRoundTrip) {
    const auto layout = generate_adapted_chart(ImageKeyClass::LowKey, 4, 5);
    const auto j = layout_to_json(layout);
    EXPECT_EQ(j["keyClass"], "low-key");
    EXPECT_EQ(j["patches"].size(), 20u);
    EXPECT_EQ(layout_from_json(parse_json_text(j.dump())), layout);
}

TEST(Json, It8Blocks) {
    const auto j = it8_to_json(build_it8_target());
    EXPECT_EQ(j["blocks"]["standardized"], 144);
    EXPECT_EQ(j["blocks"]["toneScale"], 84);
    EXPECT_EQ(j["blocks"]["vendor"], 36);
    EXPECT_EQ(j["patches"].size(), 264u);
    EXPECT_TRUE(j["keyClass"].is_null());
}

TEST(Json, LayoutErrors) {
    auto j = layout_to_json(generate_adapted_chart(ImageKeyClass::HighKey, 3, 4));
    auto dup = j;
    dup["patches"][1]["col"] = 0;
    EXPECT_THROW(layout_from_json(dup), DomainError);
    auto missing = j;
    missing.erase("rows");
    EXPECT_THROW(layout_from_json(missing), DomainError);
    auto badLab = j;
    badLab["patches"][0]["lab"] = json::array({101, 0, 0});
    EXPECT_THROW(layout_from_json(badLab), DomainError);
    auto badRole = j;
    badRole["patches"][0]["role"] = "mystery";
    EXPECT_THROW(layout_from_json(badRole), DomainError);
}

TEST(Json, ProfileRoundTrip) {
    DeviceProfile p;
    p.gridN = 2;
    for (int i = 0; i < 8; ++i) p.lut.push_back({12.5 * i, -1.0 * i, 0.25 * i});
    p.metadata = {{"source", "unit test"}};
    const auto back = profile_from_json(parse_json_text(profile_to_json(p).dump()));
    EXPECT_EQ(back.gridN, 2);
    EXPECT_EQ(back.lut, p.lut);
    EXPECT_EQ(back.metadata, p.metadata);
    auto j = profile_to_json(p);
    j["lut"].erase(0);
    EXPECT_THROW(profile_from_json(j), DomainError);
}

TEST(Json, MapRoundTrip) {
    const GamutMap m{{LightnessTranslate{-3.5}, LightnessScale{0.9, 40}, ChromaScale{0.8}, HueRotate{-12}}};
    const auto back = map_from_json(parse_json_text(map_to_json(m).dump()));
    ASSERT_EQ(back.transforms.size(), 4u);
    EXPECT_EQ(map_to_json(back), map_to_json(m));
    EXPECT_THROW(map_from_json(json::parse(R"([{"type":"chromaScale","factor":0}])")), DomainError);
    EXPECT_THROW(map_from_json(json::parse(R"([{"type":"warp"}])")), DomainError);
    EXPECT_EQ(std::get<LightnessScale>(map_from_json(json::parse(R"([{"type":"lightnessScale","factor":2}])"))
                                           .transforms[0])
                  .pivot,
              50.0);
}

TEST(Json, Weights) {
    const auto w = weights_from_json(json::parse("[1, 2, 3, 4, 5]"));
    EXPECT_EQ(w.to_array(), (std::array<double, 5>{1, 2, 3, 4, 5}));
    EXPECT_THROW(weights_from_json(json::parse("[0, 0, 0, 0, 0]")), DomainError);
    EXPECT_THROW(weights_from_json(json::parse("[1, 2]")), DomainError);
    EXPECT_THROW(weights_from_json(json::parse(R"([1, "a", 0, 0, 0])")), DomainError);
}

TEST(Json, MeshSchema) {
    const std::vector<LabColor> pts{lch_lab({30, 20, 10}), lch_lab({70, 40, 200})};
    const auto j = mesh_to_json(boundary_mesh(gamut_from_points(pts, 12, 6)));
    EXPECT_EQ(j["vertexCount"], 74);
    EXPECT_EQ(j["vertices"].size(), 74u);
    EXPECT_TRUE(j["watertight"].get<bool>());
    EXPECT_EQ(j["vertices"][0]["lab"].size(), 3u);
    EXPECT_EQ(j["vertices"][0]["rgb"].size(), 3u);
    EXPECT_EQ(j["triangles"].size(), 144u);
}

TEST(Json, MaskSchema) {
    const BinaryMask m{2, 2, {0, 1, 1, 0}};
    const auto j = mask_to_json(m);
    EXPECT_EQ(j["encoding"], "rle-zero-first");
    EXPECT_EQ(j["runs"], json::parse("[1, 2, 1]"));
}

TEST(Json, ParseErrorHasOffset) {
    try {
        parse_json_text("{\"rows\": 3,, }");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.kind(), ParseError::Kind::ByteOffset);
        EXPECT_GT(e.position(), 0u);
    }
}

}  // namespace
}  // namespace prepress::io
