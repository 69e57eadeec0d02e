#pragma once

// Command-line front end. run_cli() is the whole program minus process
// plumbing, so tests can drive it in-process.
//
// Exit codes: 0 success, 1 domain/parse/file errors, 2 usage errors.

#include <cstdio>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "prepress/classification.hpp"
#include "prepress/gamut.hpp"
#include "prepress/io/cgats.hpp"
#include "prepress/io/json.hpp"
#include "prepress/io/ppm.hpp"
#include "prepress/testchart.hpp"

namespace prepress::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Profile gamut sampling density used by `gamut mesh` and `map auto`.
inline constexpr int kProfileSamplesPerAxis = 17;

class FileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot open '" + path + "' for reading");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FileError("cannot open '" + path + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FileError("failed writing '" + path + "'");
}

inline void write_json(const std::string& path, const io::json& j) { write_file(path, j.dump(2) + "\n"); }

inline RasterImage load_image(const std::string& path) { return io::read_ppm(read_file(path)); }

inline DeviceProfile load_profile(const std::string& path) {
    return io::profile_from_json(io::parse_json_text(read_file(path)));
}

inline std::string fixed(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

namespace detail {

inline const std::vector<std::string> kClassNames{"low", "normal", "high", "low-key", "normal-key", "high-key"};

struct Options {
    // classify
    std::string image;
    int steps = kDefaultLStarSteps;
    bool excludeBackground = false;
    // chart
    std::string keyClass;
    int rows = 0;
    int cols = 0;
    std::string layout;
    int patchPx = 0;
    std::string custom;
    // characterize
    std::string measurements;
    int grid = 0;
    // gamut / map
    std::string profile;
    int hueSectors = kDefaultHueSectors;
    int bands = kDefaultLightnessBands;
    std::array<double, 5> weights = ObjectiveWeights{}.to_array();
    bool hueRotate = false;
    std::string report;
    std::string output;
};

inline std::vector<LabColor> lab_list_from_json(const io::json& j) {
    if (!j.is_array()) throw DomainError("custom colors: expected an array of [L, a, b]");
    std::vector<LabColor> out;
    for (const auto& v : j) out.push_back(io::detail::lab_from(v, "custom colors"));
    return out;
}

inline GamutBoundary profile_boundary(const DeviceProfile& p, int hueSectors, int bands) {
    return gamut_from_points(profile_gamut_points(p, kProfileSamplesPerAxis), hueSectors, bands);
}

inline int cmd_classify(const Options& o, std::ostream& out) {
    const auto hist = lstar_histogram(load_image(o.image), o.steps);
    const auto r = classify_key(hist, o.excludeBackground);
    out << to_string(r.chosen) << "\n"
        << "high " << fixed(r.highMass) << "\nnormal " << fixed(r.normalMass) << "\nlow " << fixed(r.lowMass) << "\n";
    if (r.excludedBin) out << "excluded-bin " << *r.excludedBin << "\n";
    if (!o.report.empty()) write_json(o.report, io::key_report_to_json(r, hist));
    return kExitOk;
}

inline int cmd_chart_adapted(const Options& o, std::ostream& out) {
    const auto layout = generate_adapted_chart(parse_key_class(o.keyClass), o.rows, o.cols);
    write_json(o.output, io::layout_to_json(layout));
    out << layout.patches.size() << " patches\n";
    return kExitOk;
}

inline int cmd_chart_it8(const Options& o, std::ostream& out) {
    auto target = build_it8_target();
    if (!o.custom.empty())
        target = customize_target(target, lab_list_from_json(io::parse_json_text(read_file(o.custom))));
    write_json(o.output, io::it8_to_json(target));
    out << target.layout.patches.size() << " patches: " << target.count(PatchRole::Standardized) << " standardized, "
        << target.count(PatchRole::ToneScale) << " tone-scale, " << target.count(PatchRole::Vendor) << " vendor, "
        << target.count(PatchRole::Custom) << " custom\n";
    return kExitOk;
}

inline int cmd_chart_render(const Options& o, std::ostream& out, std::ostream& err) {
    const auto layout = io::layout_from_json(io::parse_json_text(read_file(o.layout)));
    const auto rendered = render_chart(layout, o.patchPx);
    const auto bytes = io::write_ppm(rendered.image);
    write_file(o.output, {reinterpret_cast<const char*>(bytes.data()), bytes.size()});
    for (const auto& p : rendered.clamped)
        err << "warning: patch (" << p.row << ", " << p.col << ") is outside sRGB and was clamped\n";
    out << rendered.image.width << "x" << rendered.image.height << "\n";
    return kExitOk;
}

inline int cmd_characterize(const Options& o, std::ostream& out) {
    const auto ms = io::parse_cgats(read_file(o.measurements));
    const auto profile = characterize_device(ms, o.grid);
    write_json(o.output, io::profile_to_json(profile));
    out << ms.entries.size() << " measurements, grid " << profile.gridN << "\n";
    return kExitOk;
}

inline int cmd_gamut_mesh(const Options& o, std::ostream& out) {
    const GamutBoundary bd = !o.image.empty()
                                 ? gamut_from_points(image_lab(load_image(o.image)), o.hueSectors, o.bands)
                                 : profile_boundary(load_profile(o.profile), o.hueSectors, o.bands);
    const auto mesh = boundary_mesh(bd);
    write_json(o.output, io::mesh_to_json(mesh));
    out << mesh.vertices.size() << " vertices, " << mesh.triangles.size() << " triangles\n";
    return kExitOk;
}

inline int cmd_map_auto(const Options& o, std::ostream& out) {
    const auto weights = ObjectiveWeights::from_array(o.weights);
    validate(weights);
    const auto image = load_image(o.image);
    const auto bd = profile_boundary(load_profile(o.profile), o.hueSectors, o.bands);
    const auto src = image_lab(image);
    AutoFitConfig cfg;
    cfg.includeHueRotate = o.hueRotate;
    const auto fit = auto_fit(src, bd, weights, cfg);
    const auto mapped = map_image(image, fit.map);
    const auto bytes = io::write_ppm(mapped.image);
    write_file(o.output, {reinterpret_cast<const char*>(bytes.data()), bytes.size()});
    if (!o.report.empty()) {
        io::json j;
        j["transforms"] = io::map_to_json(fit.map);
        j["scores"] = io::scores_to_json(fit.scores);
        j["identityScores"] = io::scores_to_json(score_principles(src, bd, {}));
        j["objective"] = fit.objective;
        j["history"] = fit.history;
        j["weights"] = o.weights;
        j["clampedLightness"] = mapped.clampedLightness;
        j["clampedToGamut"] = mapped.clampedToGamut;
        write_json(o.report, j);
    }
    out << "objective " << fixed(fit.objective) << "\noog " << fixed(fit.scores.oogFraction) << "\n";
    return kExitOk;
}

inline int cmd_separate(const Options& o, std::ostream& out) {
    const auto cls = parse_key_class(o.keyClass);
    const auto params = recommend_separation(cls);
    const auto image = load_image(o.image);
    io::json pixels = io::json::array();
    for (const auto& px : image.pixels) {
        const auto k = separate_to_cmyk(px, params);
        pixels.push_back(io::json::array({k.c, k.m, k.y, k.k}));
    }
    io::json j;
    j["width"] = image.width;
    j["height"] = image.height;
    j["keyClass"] = to_string(cls);
    j["params"] = io::separation_to_json(params);
    j["order"] = "row-major [c, m, y, k]";
    j["pixels"] = std::move(pixels);
    write_json(o.output, j);
    out << image.size() << " pixels separated with " << to_string(cls) << " preset\n";
    return kExitOk;
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    detail::Options o;
    CLI::App app{"Prepress color toolkit: key classification, test charts, characterization, gamut mapping",
                 "prepress"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    auto* classify = app.add_subcommand("classify", "Classify an image as low-, normal- or high-key by L*");
    classify->add_option("image", o.image, "Input P6 image")->required();
    classify->add_option("--steps", o.steps, "Histogram steps over L* 0-100")->check(CLI::Range(3, 1000));
    classify->add_flag("--exclude-bg", o.excludeBackground, "Ignore a dominant paper-white peak");
    classify->add_option("--report", o.report, "Write the class report as JSON");

    auto* chart = app.add_subcommand("chart", "Generate or render test charts");
    chart->require_subcommand(1);
    auto* adapted = chart->add_subcommand("adapted", "Chart concentrated in one key class");
    adapted->add_option("--class", o.keyClass, "low | normal | high")->required()->check(CLI::IsMember(detail::kClassNames));
    adapted->add_option("--rows", o.rows, "Patch rows")->required();
    adapted->add_option("--cols", o.cols, "Patch columns")->required();
    adapted->add_option("-o,--output", o.output, "Output layout JSON")->required();
    auto* it8 = chart->add_subcommand("it8", "12x22 IT8-style target");
    it8->add_option("--custom", o.custom, "JSON array of [L, a, b] for the vendor block");
    it8->add_option("-o,--output", o.output, "Output layout JSON")->required();
    auto* render = chart->add_subcommand("render", "Render a layout to a P6 image");
    render->add_option("layout", o.layout, "Layout JSON")->required();
    render->add_option("--patch-px", o.patchPx, "Patch edge in pixels")->required();
    render->add_option("-o,--output", o.output, "Output P6 image")->required();

    auto* characterize = app.add_subcommand("characterize", "Build a device profile from CGATS measurements");
    characterize->add_option("measurements", o.measurements, "CGATS measurement file")->required();
    characterize->add_option("--grid", o.grid, "LUT nodes per axis")->required();
    characterize->add_option("-o,--output", o.output, "Output profile JSON")->required();

    auto* gamut = app.add_subcommand("gamut", "Gamut boundaries");
    gamut->require_subcommand(1);
    auto* mesh = gamut->add_subcommand("mesh", "Export a boundary mesh");
    auto* meshSource = mesh->add_option_group("source", "Exactly one of --image or --profile");
    meshSource->add_option("--image", o.image, "Image whose gamut to mesh");
    meshSource->add_option("--profile", o.profile, "Device profile whose gamut to mesh");
    meshSource->require_option(1, 1);
    mesh->add_option("--sectors", o.hueSectors, "Hue sectors")->check(CLI::Range(4, 3600));
    mesh->add_option("--bands", o.bands, "Lightness bands")->check(CLI::Range(3, 1000));
    mesh->add_option("-o,--output", o.output, "Output mesh JSON")->required();

    auto* map = app.add_subcommand("map", "Gamut mapping");
    map->require_subcommand(1);
    auto* autofit = map->add_subcommand("auto", "Fit and apply a gamut map to a device profile");
    autofit->add_option("--image", o.image, "Source P6 image")->required();
    autofit->add_option("--profile", o.profile, "Destination device profile JSON")->required();
    const char* weightHelp[5] = {"Gray axis weight", "Contrast weight", "Out-of-gamut weight", "Hue shift weight",
                                 "Chroma decrease weight"};
    for (int i = 0; i < 5; ++i)
        autofit->add_option("--w" + std::to_string(i + 1), o.weights[static_cast<std::size_t>(i)], weightHelp[i])
            ->capture_default_str();
    autofit->add_flag("--hue", o.hueRotate, "Also search a hue rotation");
    autofit->add_option("-o,--output", o.output, "Mapped P6 image")->required();
    autofit->add_option("--report", o.report, "Write transforms and scores as JSON");

    auto* separate = app.add_subcommand("separate", "GCR/UCR separation with the preset for a key class");
    separate->add_option("image", o.image, "Input P6 image")->required();
    separate->add_option("--class", o.keyClass, "low | normal | high")->required()->check(CLI::IsMember(detail::kClassNames));
    separate->add_option("-o,--output", o.output, "Output CMYK JSON")->required();

    std::vector<const char*> argv{"prepress"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        if (code == 0) return kExitOk;
        err << app.help();
        return kExitUsage;
    }

    try {
        if (*classify) return detail::cmd_classify(o, out);
        if (*adapted) return detail::cmd_chart_adapted(o, out);
        if (*it8) return detail::cmd_chart_it8(o, out);
        if (*render) return detail::cmd_chart_render(o, out, err);
        if (*characterize) return detail::cmd_characterize(o, out);
        if (*mesh) return detail::cmd_gamut_mesh(o, out);
        if (*autofit) return detail::cmd_map_auto(o, out);
        if (*separate) return detail::cmd_separate(o, out);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace prepress::cli
