#pragma once

// HTTP-independent core of the studio service: an in-memory asset store and
// request handlers that map (method, path, query, body) to (status, body).
// service_http.hpp binds this to cpp-httplib.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "prepress/classification.hpp"
#include "prepress/gamut.hpp"
#include "prepress/io/cgats.hpp"
#include "prepress/io/json.hpp"
#include "prepress/io/ppm.hpp"
#include "prepress/testchart.hpp"

namespace prepress::service {

using io::json;

struct ServiceConfig {
    std::size_t maxUploadBytes = 16u << 20;
    int defaultGrid = 9;                // characterization grid for CGATS uploads
    int profileSamplesPerAxis = 17;     // device grid sampled for a profile's gamut
    std::size_t maxStoredPreviews = 256;
};

struct HttpRequest {
    std::string method;
    std::string path;
    std::map<std::string, std::string> query;
    std::string body;
};

struct HttpResponse {
    int status = 200;
    std::string contentType = "application/json";
    std::string body;
};

// --- Assets --------------------------------------------------------------------

struct ImageAsset {
    RasterImage image;
    std::vector<LabColor> lab;  // per pixel, row-major
};

struct ProfileAsset {
    DeviceProfile profile;
    GamutBoundary boundary;  // default H x B
    std::vector<LabColor> gamutPoints;
};

struct PreviewAsset {
    RasterImage image;
    std::string key;  // request fingerprint
};

using Asset = std::variant<ImageAsset, ProfileAsset, PreviewAsset>;

inline std::string_view kind_name(const Asset& a) {
    switch (a.index()) {
        case 0: return "image";
        case 1: return "profile";
        default: return "preview";
    }
}

/// Ids are issued from a counter and never reused. Stored assets are
/// immutable; readers share them without holding the lock. Previews are
/// keyed by request fingerprint so identical requests resolve to one id;
/// the oldest previews are evicted beyond the configured cap.
class AssetStore {
public:
    explicit AssetStore(std::size_t maxPreviews) : maxPreviews_(maxPreviews) {}

    std::string insert(Asset asset) {
        std::lock_guard lock(mutex_);
        return insert_locked(std::make_shared<const Asset>(std::move(asset)));
    }

    std::shared_ptr<const Asset> find(const std::string& id) const {
        std::lock_guard lock(mutex_);
        const auto it = assets_.find(id);
        return it == assets_.end() ? nullptr : it->second;
    }

    /// Returns the id already stored for `key`, or stores the preview.
    std::string insert_preview(const std::string& key, RasterImage image) {
        std::lock_guard lock(mutex_);
        if (const auto it = previewByKey_.find(key); it != previewByKey_.end()) return it->second;
        const auto id = insert_locked(std::make_shared<const Asset>(PreviewAsset{std::move(image), key}));
        previewByKey_[key] = id;
        previewOrder_.push_back(id);
        while (previewOrder_.size() > maxPreviews_) {
            const auto& victim = previewOrder_.front();
            if (const auto it = assets_.find(victim); it != assets_.end())
                previewByKey_.erase(std::get<PreviewAsset>(*it->second).key);
            assets_.erase(victim);
            previewOrder_.erase(previewOrder_.begin());
        }
        return id;
    }

private:
    std::string insert_locked(std::shared_ptr<const Asset> asset) {
        const std::string id = "a" + std::to_string(++counter_);
        assets_.emplace(id, std::move(asset));
        return id;
    }

    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<const Asset>> assets_;
    std::map<std::string, std::string> previewByKey_;
    std::vector<std::string> previewOrder_;
    std::uint64_t counter_ = 0;
    std::size_t maxPreviews_;
};

// --- Errors ----------------------------------------------------------------------

struct HttpError {
    int status;
    std::string code;
    std::string message;
};

inline HttpResponse json_response(int status, const json& body) { return {status, "application/json", body.dump()}; }

inline HttpResponse error_response(const HttpError& e) {
    return json_response(e.status, {{"error", {{"code", e.code}, {"message", e.message}}}});
}

inline HttpError not_found(const std::string& what) { return {404, "not_found", what}; }
inline HttpError unprocessable(const std::string& what) { return {422, "unprocessable", what}; }

// --- Service -----------------------------------------------------------------------

class Service {
public:
    explicit Service(ServiceConfig cfg = {}) : cfg_(cfg), store_(cfg.maxStoredPreviews) {}

    const ServiceConfig& config() const { return cfg_; }
    AssetStore& store() { return store_; }

    HttpResponse handle(const HttpRequest& req) const;

    // Handlers, public for in-process use.
    HttpResponse ingest(const std::string& kind, std::string_view payload, std::optional<int> grid) const;
    HttpResponse classification(const std::string& id, int steps, bool excludeBackground) const;
    HttpResponse mesh(const std::string& id, const std::string& source, int sectors, int bands) const;
    HttpResponse ppm(const std::string& id) const;
    HttpResponse preview(const json& body) const;
    HttpResponse autofit(const json& body) const;
    HttpResponse region(const std::string& id, int sector, int band, int sectors, int bands) const;
    HttpResponse pixel(const std::string& id, int x, int y, int sectors, int bands) const;
    HttpResponse it8_chart() const;
    HttpResponse adapted_chart(const json& body) const;

private:
    template <class T>
    std::shared_ptr<const Asset> require(const std::string& id) const {
        auto asset = store_.find(id);
        if (!asset) throw not_found("no asset '" + id + "'");
        if (!std::holds_alternative<T>(*asset))
            throw unprocessable("asset '" + id + "' is a " + std::string(kind_name(*asset)));
        return asset;
    }

    ServiceConfig cfg_;
    mutable AssetStore store_;
};

namespace detail {

inline std::vector<std::string> split_path(std::string_view path) {
    std::vector<std::string> parts;
    std::size_t i = 0;
    while (i < path.size()) {
        if (path[i] == '/') {
            ++i;
            continue;
        }
        const auto end = path.find('/', i);
        parts.emplace_back(path.substr(i, end == std::string_view::npos ? std::string_view::npos : end - i));
        i = end == std::string_view::npos ? path.size() : end;
    }
    return parts;
}

inline int query_int(const HttpRequest& req, const std::string& key, int fallback) {
    const auto it = req.query.find(key);
    if (it == req.query.end()) return fallback;
    try {
        std::size_t used = 0;
        const int v = std::stoi(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument(key);
        return v;
    } catch (const std::exception&) {
        throw unprocessable("query parameter '" + key + "' must be an integer");
    }
}

inline bool query_flag(const HttpRequest& req, const std::string& key) {
    const auto it = req.query.find(key);
    return it != req.query.end() && (it->second.empty() || it->second == "1" || it->second == "true");
}

inline json parse_body(std::string_view body) {
    try {
        return io::parse_json_text(body);
    } catch (const ParseError& e) {
        throw unprocessable(std::string("request body: ") + e.what());
    }
}

inline std::string string_field(const json& body, const char* key) {
    const auto it = body.find(key);
    if (it == body.end() || !it->is_string()) throw unprocessable(std::string("missing string field '") + key + "'");
    return it->get<std::string>();
}

inline json params_json(const TemplateParams& p) {
    return {{"translate", p.translate},
            {"lightnessScale", p.lightnessScale},
            {"chromaScale", p.chromaScale},
            {"hueRotate", p.hueRotate}};
}

}  // namespace detail

inline HttpResponse Service::ingest(const std::string& kind, std::string_view payload, std::optional<int> grid) const {
    if (payload.size() > cfg_.maxUploadBytes)
        throw HttpError{413, "payload_too_large",
                        "payload of " + std::to_string(payload.size()) + " bytes exceeds the " +
                            std::to_string(cfg_.maxUploadBytes) + " byte cap"};
    try {
        if (kind == "image") {
            ImageAsset a{io::read_ppm(payload), {}};
            a.lab = image_lab(a.image);
            const int w = a.image.width, h = a.image.height;
            const auto id = store_.insert(std::move(a));
            return json_response(201, {{"id", id}, {"kind", "image"}, {"width", w}, {"height", h}});
        }
        if (kind == "profile") {
            DeviceProfile profile;
            const auto first = payload.find_first_not_of(" \t\r\n");
            if (first != std::string_view::npos && payload[first] == '{') {
                profile = io::profile_from_json(io::parse_json_text(payload));
            } else {
                profile = characterize_device(io::parse_cgats(payload), grid.value_or(cfg_.defaultGrid));
            }
            ProfileAsset a{std::move(profile), {}, {}};
            a.gamutPoints = profile_gamut_points(a.profile, cfg_.profileSamplesPerAxis);
            a.boundary = gamut_from_points(a.gamutPoints);
            const int n = a.profile.gridN;
            const auto id = store_.insert(std::move(a));
            return json_response(201, {{"id", id}, {"kind", "profile"}, {"gridN", n}});
        }
    } catch (const ParseError& e) {
        throw unprocessable(e.what());
    } catch (const DomainError& e) {
        throw unprocessable(e.what());
    }
    throw unprocessable("kind must be 'image' or 'profile'");
}

inline HttpResponse Service::classification(const std::string& id, int steps, bool excludeBackground) const {
    const auto asset = require<ImageAsset>(id);
    const auto& img = std::get<ImageAsset>(*asset);
    std::vector<double> l;
    l.reserve(img.lab.size());
    for (const auto& p : img.lab) l.push_back(p.l);
    const auto hist = lstar_histogram_from_values(l, steps);
    const auto report = classify_key(hist, excludeBackground);
    json j = io::key_report_to_json(report, hist);
    j["separation"] = io::separation_to_json(recommend_separation(report.chosen));
    return json_response(200, j);
}

inline HttpResponse Service::mesh(const std::string& id, const std::string& source, int sectors, int bands) const {
    const auto asset = store_.find(id);
    if (!asset) throw not_found("no asset '" + id + "'");
    const std::string kind(kind_name(*asset));
    if (!source.empty() && source != kind) throw unprocessable("asset '" + id + "' is a " + kind + ", not a " + source);
    GamutBoundary bd;
    if (const auto* img = std::get_if<ImageAsset>(asset.get())) {
        bd = gamut_from_points(img->lab, sectors, bands);
    } else if (const auto* prof = std::get_if<ProfileAsset>(asset.get())) {
        bd = sectors == prof->boundary.hueSectors && bands == prof->boundary.lightnessBands
                 ? prof->boundary
                 : gamut_from_points(prof->gamutPoints, sectors, bands);
    } else {
        bd = gamut_from_points(image_lab(std::get<PreviewAsset>(*asset).image), sectors, bands);
    }
    json j = io::mesh_to_json(boundary_mesh(bd));
    j["source"] = kind;
    j["lMin"] = bd.lMin;
    j["lMax"] = bd.lMax;
    return json_response(200, j);
}

inline HttpResponse Service::ppm(const std::string& id) const {
    const auto asset = store_.find(id);
    if (!asset) throw not_found("no asset '" + id + "'");
    const RasterImage* img = nullptr;
    if (const auto* a = std::get_if<ImageAsset>(asset.get())) img = &a->image;
    if (const auto* p = std::get_if<PreviewAsset>(asset.get())) img = &p->image;
    if (!img) throw unprocessable("asset '" + id + "' is not an image");
    const auto bytes = io::write_ppm(*img);
    return {200, "image/x-portable-pixmap", std::string(bytes.begin(), bytes.end())};
}

inline HttpResponse Service::preview(const json& body) const {
    if (!body.is_object()) throw unprocessable("request body must be an object");
    const auto imageId = detail::string_field(body, "imageId");
    const auto profileId = detail::string_field(body, "profileId");
    const auto imageAsset = require<ImageAsset>(imageId);
    const auto profileAsset = require<ProfileAsset>(profileId);
    const auto& img = std::get<ImageAsset>(*imageAsset);
    const auto& prof = std::get<ProfileAsset>(*profileAsset);

    GamutMap map;
    std::optional<ObjectiveWeights> weights;
    try {
        map = io::map_from_json(body.contains("transforms") ? body["transforms"] : json::array());
        if (body.contains("weights")) weights = io::weights_from_json(body["weights"]);
    } catch (const DomainError& e) {
        throw unprocessable(e.what());
    }

    const auto scores = score_principles(img.lab, prof.boundary, map);
    BinaryMask mask{img.image.width, img.image.height, std::vector<std::uint8_t>(img.lab.size(), 0)};
    std::set<std::pair<int, int>> oogCells;
    RasterImage mapped(img.image.width, img.image.height);
    for (std::size_t i = 0; i < img.lab.size(); ++i) {
        const LabColor m = apply_map(map, img.lab[i]);
        mapped.pixels[i] = lab_to_rgb(m).rgb;
        if (!contains(prof.boundary, m)) {
            mask.bits[i] = 1;
            const LChColor lch = lab_lch(m);
            oogCells.insert({prof.boundary.sector_of(lch.h), prof.boundary.band_of(lch.l)});
        }
    }

    const std::string key = imageId + "|" + profileId + "|" + io::map_to_json(map).dump();
    const auto previewId = store_.insert_preview(key, std::move(mapped));

    json cells = json::array();
    for (const auto& [s, b] : oogCells) cells.push_back({{"sector", s}, {"band", b}});
    json j{{"previewId", previewId},
           {"transforms", io::map_to_json(map)},
           {"scores", io::scores_to_json(scores)},
           {"mask", io::mask_to_json(mask)},
           {"oogCells", std::move(cells)},
           {"hueSectors", prof.boundary.hueSectors},
           {"lightnessBands", prof.boundary.lightnessBands}};
    j["objective"] = objective(scores, weights.value_or(ObjectiveWeights{}));
    return json_response(200, j);
}

inline HttpResponse Service::autofit(const json& body) const {
    if (!body.is_object()) throw unprocessable("request body must be an object");
    const auto imageId = detail::string_field(body, "imageId");
    const auto profileId = detail::string_field(body, "profileId");
    const auto imageAsset = require<ImageAsset>(imageId);
    const auto profileAsset = require<ProfileAsset>(profileId);
    const auto& img = std::get<ImageAsset>(*imageAsset);
    const auto& prof = std::get<ProfileAsset>(*profileAsset);

    ObjectiveWeights weights;
    AutoFitConfig cfg;
    try {
        if (body.contains("weights")) weights = io::weights_from_json(body["weights"]);
        if (const auto it = body.find("includeHueRotate"); it != body.end()) {
            if (!it->is_boolean()) throw DomainError("includeHueRotate must be a boolean");
            cfg.includeHueRotate = it->get<bool>();
        }
    } catch (const DomainError& e) {
        throw unprocessable(e.what());
    }

    const auto fit = auto_fit(img.lab, prof.boundary, weights, cfg);
    return json_response(200, {{"transforms", io::map_to_json(fit.map)},
                               {"params", detail::params_json(fit.params)},
                               {"scores", io::scores_to_json(fit.scores)},
                               {"objective", fit.objective},
                               {"identityObjective", fit.history.front()},
                               {"history", fit.history},
                               {"weights", weights.to_array()}});
}

inline HttpResponse Service::region(const std::string& id, int sector, int band, int sectors, int bands) const {
    const auto asset = require<ImageAsset>(id);
    const auto& img = std::get<ImageAsset>(*asset);
    if (sectors < 4 || bands < 3) throw unprocessable("sectors must be >= 4 and bands >= 3");
    if (sector < 0 || sector >= sectors || band < 0 || band >= bands) throw unprocessable("cell out of range");
    GamutBoundary grid;
    grid.hueSectors = sectors;
    grid.lightnessBands = bands;
    const auto r = cell_region(grid, sector, band);
    json pixels = json::array();
    for (const auto& p : pixels_for_region(img.image, r.lightness, r.chroma, r.hue)) pixels.push_back({p.x, p.y});
    return json_response(200, {{"sector", sector},
                               {"band", band},
                               {"lightness", {r.lightness.lo, r.lightness.hi}},
                               {"hue", {r.hue.lo, r.hue.hi}},
                               {"pixels", std::move(pixels)}});
}

inline HttpResponse Service::pixel(const std::string& id, int x, int y, int sectors, int bands) const {
    const auto asset = require<ImageAsset>(id);
    const auto& img = std::get<ImageAsset>(*asset);
    if (sectors < 4 || bands < 3) throw unprocessable("sectors must be >= 4 and bands >= 3");
    if (x < 0 || y < 0 || x >= img.image.width || y >= img.image.height) throw unprocessable("pixel out of range");
    GamutBoundary grid;
    grid.hueSectors = sectors;
    grid.lightnessBands = bands;
    const LabColor lab = img.lab[static_cast<std::size_t>(y) * img.image.width + x];
    const LChColor lch = lab_lch(lab);
    return json_response(200, {{"x", x},
                               {"y", y},
                               {"lab", io::lab_json(lab)},
                               {"lch", {lch.l, lch.c, lch.h}},
                               {"sector", grid.sector_of(lch.h)},
                               {"band", grid.band_of(lch.l)}});
}

inline HttpResponse Service::it8_chart() const { return json_response(200, io::it8_to_json(build_it8_target())); }

inline HttpResponse Service::adapted_chart(const json& body) const {
    if (!body.is_object()) throw unprocessable("request body must be an object");
    try {
        const auto cls = parse_key_class(io::detail::field<std::string>(body, "class", "adapted chart"));
        const int rows = io::detail::field<int>(body, "rows", "adapted chart");
        const int cols = io::detail::field<int>(body, "cols", "adapted chart");
        return json_response(200, io::layout_to_json(generate_adapted_chart(cls, rows, cols)));
    } catch (const DomainError& e) {
        throw unprocessable(e.what());
    }
}

inline HttpResponse Service::handle(const HttpRequest& req) const {
    try {
        const auto parts = detail::split_path(req.path);
        const bool get = req.method == "GET";
        const bool post = req.method == "POST";
        auto is = [&](std::initializer_list<std::string_view> want) {
            if (parts.size() != want.size()) return false;
            std::size_t i = 0;
            for (auto w : want) {
                if (w != "*" && parts[i] != w) return false;
                ++i;
            }
            return true;
        };
        constexpr int H = kDefaultHueSectors;
        constexpr int B = kDefaultLightnessBands;

        if (is({"api", "health"}) && get) return json_response(200, {{"status", "ok"}});
        if (is({"api", "assets"}) && post) {
            const auto kind = req.query.contains("kind") ? req.query.at("kind") : std::string();
            std::optional<int> grid;
            if (req.query.contains("grid")) grid = detail::query_int(req, "grid", cfg_.defaultGrid);
            return ingest(kind, req.body, grid);
        }
        if (is({"api", "assets", "*", "classification"}) && get)
            return classification(parts[2], detail::query_int(req, "steps", kDefaultLStarSteps),
                                  detail::query_flag(req, "excludeBackground"));
        if (is({"api", "assets", "*", "mesh"}) && get) {
            const auto source = req.query.contains("source") ? req.query.at("source") : std::string();
            return mesh(parts[2], source, detail::query_int(req, "sectors", H), detail::query_int(req, "bands", B));
        }
        if (is({"api", "assets", "*", "ppm"}) && get) return ppm(parts[2]);
        if (is({"api", "assets", "*", "region"}) && get)
            return region(parts[2], detail::query_int(req, "sector", -1), detail::query_int(req, "band", -1),
                          detail::query_int(req, "sectors", H), detail::query_int(req, "bands", B));
        if (is({"api", "assets", "*", "pixel"}) && get)
            return pixel(parts[2], detail::query_int(req, "x", -1), detail::query_int(req, "y", -1),
                         detail::query_int(req, "sectors", H), detail::query_int(req, "bands", B));
        if (is({"api", "map", "preview"}) && post) return preview(detail::parse_body(req.body));
        if (is({"api", "map", "autofit"}) && post) return autofit(detail::parse_body(req.body));
        if (is({"api", "charts", "it8"}) && get) return it8_chart();
        if (is({"api", "charts", "adapted"}) && post) return adapted_chart(detail::parse_body(req.body));
        throw not_found("no route for " + req.method + " " + req.path);
    } catch (const HttpError& e) {
        return error_response(e);
    } catch (const DomainError& e) {
        return error_response(unprocessable(e.what()));
    } catch (const ParseError& e) {
        return error_response(unprocessable(e.what()));
    } catch (const std::exception& e) {
        return error_response({500, "internal", e.what()});
    }
}

}  // namespace prepress::service
