#pragma once

// JSON schemas for chart layouts, device profiles, gamut meshes, gamut maps
// and reports. Field names are part of the external contract; see
// docs/formats.md.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>
#include "prepress/classification.hpp"
#include "prepress/errors.hpp"
#include "prepress/gamut.hpp"
#include "prepress/testchart.hpp"

namespace prepress::io {

using nlohmann::json;

namespace detail {

template <class T>
T field(const json& j, const char* key, std::string_view context) {
    const auto it = j.find(key);
    if (it == j.end()) throw DomainError(std::string(context) + ": missing field '" + key + "'");
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw DomainError(std::string(context) + ": field '" + key + "' has the wrong type");
    }
}

inline LabColor lab_from(const json& j, std::string_view context) {
    if (!j.is_array() || j.size() != 3) throw DomainError(std::string(context) + ": expected [L, a, b]");
    for (const auto& v : j)
        if (!v.is_number()) throw DomainError(std::string(context) + ": expected [L, a, b]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace detail

inline json parse_json_text(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError::at_offset(e.byte, "invalid JSON");
    }
}

inline json lab_json(const LabColor& c) { return json::array({c.l, c.a, c.b}); }
inline json rgb_json(const RGBColor& c) { return json::array({c.r, c.g, c.b}); }

// --- Chart layouts -----------------------------------------------------------

inline json layout_to_json(const TestChartLayout& layout) {
    json patches = json::array();
    for (const auto& p : layout.patches)
        patches.push_back({{"row", p.row}, {"col", p.col}, {"lab", lab_json(p.target)}, {"role", to_string(p.role)}});
    json j;
    j["rows"] = layout.rows;
    j["cols"] = layout.cols;
    j["keyClass"] = layout.keyClass ? json(to_string(*layout.keyClass)) : json(nullptr);
    j["patches"] = std::move(patches);
    return j;
}

inline json it8_to_json(const IT8Target& target) {
    json j = layout_to_json(target.layout);
    j["blocks"] = {{"standardized", target.count(PatchRole::Standardized)},
                   {"toneScale", target.count(PatchRole::ToneScale)},
                   {"vendor", target.count(PatchRole::Vendor)},
                   {"custom", target.count(PatchRole::Custom)}};
    return j;
}

/// Patches may appear in any order; they are placed by (row, col).
inline TestChartLayout layout_from_json(const json& j) {
    constexpr std::string_view ctx = "chart layout";
    if (!j.is_object()) throw DomainError("chart layout: expected an object");
    TestChartLayout layout;
    layout.rows = detail::field<int>(j, "rows", ctx);
    layout.cols = detail::field<int>(j, "cols", ctx);
    if (layout.rows <= 0 || layout.cols <= 0) throw DomainError("chart layout: rows and cols must be positive");
    if (const auto it = j.find("keyClass"); it != j.end() && !it->is_null())
        layout.keyClass = parse_key_class(detail::field<std::string>(j, "keyClass", ctx));

    const auto patches = detail::field<json>(j, "patches", ctx);
    if (!patches.is_array()) throw DomainError("chart layout: 'patches' must be an array");
    const std::size_t total = static_cast<std::size_t>(layout.rows) * layout.cols;
    if (patches.size() != total)
        throw DomainError("chart layout: " + std::to_string(patches.size()) + " patches for a " +
                          std::to_string(layout.rows) + "x" + std::to_string(layout.cols) + " grid");
    layout.patches.resize(total);
    std::vector<bool> seen(total, false);
    for (const auto& pj : patches) {
        Patch p;
        p.row = detail::field<int>(pj, "row", ctx);
        p.col = detail::field<int>(pj, "col", ctx);
        if (p.row < 0 || p.row >= layout.rows || p.col < 0 || p.col >= layout.cols)
            throw DomainError("chart layout: patch position out of range");
        p.target = detail::lab_from(detail::field<json>(pj, "lab", ctx), ctx);
        p.role = parse_patch_role(detail::field<std::string>(pj, "role", ctx));
        const std::size_t at = static_cast<std::size_t>(p.row) * layout.cols + p.col;
        if (seen[at]) throw DomainError("chart layout: duplicate patch position");
        seen[at] = true;
        layout.patches[at] = p;
    }
    validate(layout);
    return layout;
}

// --- Device profiles -----------------------------------------------------------

inline json profile_to_json(const DeviceProfile& p) {
    json lut = json::array();
    for (const auto& v : p.lut) lut.push_back(lab_json(v));
    json meta = json::array();
    for (const auto& [k, v] : p.metadata) meta.push_back(json::array({k, v}));
    return {{"gridN", p.gridN}, {"lutOrder", "r-major, then g, then b"}, {"lut", std::move(lut)}, {"metadata", std::move(meta)}};
}

inline DeviceProfile profile_from_json(const json& j) {
    constexpr std::string_view ctx = "device profile";
    if (!j.is_object()) throw DomainError("device profile: expected an object");
    DeviceProfile p;
    p.gridN = detail::field<int>(j, "gridN", ctx);
    const auto lut = detail::field<json>(j, "lut", ctx);
    if (!lut.is_array()) throw DomainError("device profile: 'lut' must be an array");
    for (const auto& v : lut) p.lut.push_back(detail::lab_from(v, ctx));
    if (const auto it = j.find("metadata"); it != j.end() && it->is_array())
        for (const auto& kv : *it)
            if (kv.is_array() && kv.size() == 2 && kv[0].is_string() && kv[1].is_string())
                p.metadata.emplace_back(kv[0].get<std::string>(), kv[1].get<std::string>());
    validate(p);
    return p;
}

// --- Gamut meshes and maps -----------------------------------------------------

inline json mesh_to_json(const GamutMesh& mesh) {
    json vertices = json::array();
    for (const auto& v : mesh.vertices) vertices.push_back({{"lab", lab_json(v.lab)}, {"rgb", rgb_json(v.display)}});
    json triangles = json::array();
    for (const auto& t : mesh.triangles) triangles.push_back(json::array({t[0], t[1], t[2]}));
    return {{"hueSectors", mesh.hueSectors},
            {"lightnessBands", mesh.lightnessBands},
            {"vertexCount", mesh.vertices.size()},
            {"watertight", is_watertight(mesh)},
            {"vertices", std::move(vertices)},
            {"triangles", std::move(triangles)}};
}

inline json transform_to_json(const ElementaryTransform& t) {
    return std::visit(
        [](const auto& x) -> json {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, LightnessTranslate>)
                return {{"type", "lightnessTranslate"}, {"distance", x.distance}};
            else if constexpr (std::is_same_v<T, LightnessScale>)
                return {{"type", "lightnessScale"}, {"factor", x.factor}, {"pivot", x.pivot}};
            else if constexpr (std::is_same_v<T, ChromaScale>)
                return {{"type", "chromaScale"}, {"factor", x.factor}};
            else
                return {{"type", "hueRotate"}, {"degrees", x.degrees}};
        },
        t);
}

inline json map_to_json(const GamutMap& m) {
    json arr = json::array();
    for (const auto& t : m.transforms) arr.push_back(transform_to_json(t));
    return arr;
}

inline GamutMap map_from_json(const json& j) {
    constexpr std::string_view ctx = "transform";
    if (!j.is_array()) throw DomainError("transforms: expected an array");
    GamutMap m;
    for (const auto& tj : j) {
        if (!tj.is_object()) throw DomainError("transform: expected an object");
        const auto type = detail::field<std::string>(tj, "type", ctx);
        if (type == "lightnessTranslate") {
            m.transforms.push_back(LightnessTranslate{detail::field<double>(tj, "distance", ctx)});
        } else if (type == "lightnessScale") {
            const double pivot = tj.contains("pivot") ? detail::field<double>(tj, "pivot", ctx) : 50.0;
            m.transforms.push_back(make_lightness_scale(detail::field<double>(tj, "factor", ctx), pivot));
        } else if (type == "chromaScale") {
            m.transforms.push_back(make_chroma_scale(detail::field<double>(tj, "factor", ctx)));
        } else if (type == "hueRotate") {
            m.transforms.push_back(make_hue_rotate(detail::field<double>(tj, "degrees", ctx)));
        } else {
            throw DomainError("transform: unknown type '" + type + "'");
        }
    }
    validate(m);
    return m;
}

inline json scores_to_json(const PrincipleScores& s) {
    return {{"grayAxisDeviation", s.grayAxisDeviation},
            {"luminanceContrast", s.luminanceContrast},
            {"oogFraction", s.oogFraction},
            {"meanAbsHueShift", s.meanAbsHueShift},
            {"chromaDecreaseFraction", s.chromaDecreaseFraction},
            {"clampedCount", s.clampedCount}};
}

inline ObjectiveWeights weights_from_json(const json& j) {
    if (!j.is_array() || j.size() != 5) throw DomainError("weights: expected an array of 5 numbers");
    std::array<double, 5> w{};
    for (std::size_t i = 0; i < 5; ++i) {
        if (!j[i].is_number()) throw DomainError("weights: expected an array of 5 numbers");
        w[i] = j[i].get<double>();
    }
    const auto weights = ObjectiveWeights::from_array(w);
    validate(weights);
    return weights;
}

inline json mask_to_json(const BinaryMask& mask) {
    return {{"width", mask.width}, {"height", mask.height}, {"encoding", "rle-zero-first"}, {"runs", rle_encode(mask)}};
}

inline json key_report_to_json(const KeyMassReport& r, const LStarHistogram& h) {
    json j{{"class", to_string(r.chosen)},
           {"highMass", r.highMass},
           {"normalMass", r.normalMass},
           {"lowMass", r.lowMass},
           {"stepCount", h.stepCount},
           {"counts", h.counts},
           {"totalPixels", h.totalPixels}};
    j["excludedBin"] = r.excludedBin ? json(*r.excludedBin) : json(nullptr);
    return j;
}

inline json separation_to_json(const SeparationParams& p) {
    return {{"gcrStrength", p.gcrStrength},
            {"blackStart", p.blackStart},
            {"blackWidth", p.blackWidth},
            {"totalInkLimit", p.totalInkLimit}};
}

}  // namespace prepress::io
