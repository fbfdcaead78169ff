// SPDX-License-Identifier: Apache-2.0
#include "isac/scene.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "isac/errors.hpp"

namespace isac {

namespace {

constexpr double kEps = 1e-9;

struct SegmentHit {
    double t; // parameter along the segment, in (0,1)
    Vec3 point;
};

// Intersection of segment a->b with the (finite) reflector rectangle.
std::optional<SegmentHit> intersect_segment(const PlanarReflector& r, const Vec3& a,
                                            const Vec3& b) {
    const Vec3 d = b - a;
    const double denom = d.dot(r.normal);
    if (std::abs(denom) < kEps) return std::nullopt; // parallel
    const double t = (r.center - a).dot(r.normal) / denom;
    if (t <= kEps || t >= 1.0 - kEps) return std::nullopt;
    const Vec3 p = a + t * d;
    if (!r.contains(p)) return std::nullopt;
    return SegmentHit{t, p};
}

// True when segment a->b is blocked by any reflector other than the two
// surfaces the segment endpoints lie on (skip_a / skip_b, -1 for none).
bool occluded(const Scene& scene, const Vec3& a, const Vec3& b, int skip_a, int skip_b) {
    for (int i = 0; i < static_cast<int>(scene.reflectors.size()); ++i) {
        if (i == skip_a || i == skip_b) continue;
        if (intersect_segment(scene.reflectors[i], a, b)) return true;
    }
    return false;
}

double elevation_of_arrival_deg(const Vec3& rx, const Vec3& last_point) {
    const Vec3 d = (last_point - rx).normalized();
    return rad2deg(std::asin(std::clamp(d.z, -1.0, 1.0)));
}

RayPath make_path(const Vec3& rx, double length, const Vec3& last_point,
                  std::vector<std::string> bounce_ids) {
    RayPath p;
    p.path_length = length;
    p.delay = length / kSpeedOfLight;
    p.aoa_elevation_deg = elevation_of_arrival_deg(rx, last_point);
    p.bounce_ids = std::move(bounce_ids);
    return p;
}

// Resolve one specular bounce sequence via the image method; nullopt when the
// geometric unfolding misses a rectangle or a segment is occluded.
std::optional<RayPath> resolve_sequence(const Scene& scene, const std::vector<int>& seq) {
    // Forward image chain of the transmitter.
    std::vector<Vec3> images(seq.size());
    Vec3 img = scene.tx_position;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const auto& r = scene.reflectors[seq[i]];
        img = mirror_point(img, r.center, r.normal);
        images[i] = img;
    }
    const double total_length = (scene.rx_position - images.back()).norm();
    if (total_length < kEps) return std::nullopt;

    // Backward trace: rx -> last image fixes the last bounce point, etc.
    std::vector<Vec3> bounce_points(seq.size());
    Vec3 from = scene.rx_position;
    for (int i = static_cast<int>(seq.size()) - 1; i >= 0; --i) {
        const auto& r = scene.reflectors[seq[i]];
        auto hit = intersect_segment(r, from, images[i]);
        if (!hit) return std::nullopt;
        bounce_points[i] = hit->point;
        from = hit->point;
    }

    // Occlusion along every physical segment.
    const int n = static_cast<int>(seq.size());
    if (occluded(scene, scene.tx_position, bounce_points[0], -1, seq[0]))
        return std::nullopt;
    for (int i = 0; i + 1 < n; ++i)
        if (occluded(scene, bounce_points[i], bounce_points[i + 1], seq[i], seq[i + 1]))
            return std::nullopt;
    if (occluded(scene, bounce_points[n - 1], scene.rx_position, seq[n - 1], -1))
        return std::nullopt;

    std::vector<std::string> ids;
    ids.reserve(seq.size());
    for (int s : seq) ids.push_back(scene.reflectors[s].name);
    return make_path(scene.rx_position, total_length, bounce_points.back(),
                     std::move(ids));
}

void enumerate_sequences(int n_reflectors, int max_len, std::vector<int>& cur,
                         std::vector<std::vector<int>>& out) {
    if (!cur.empty()) out.push_back(cur);
    if (static_cast<int>(cur.size()) == max_len) return;
    for (int i = 0; i < n_reflectors; ++i) {
        if (!cur.empty() && cur.back() == i) continue; // no immediate re-bounce
        cur.push_back(i);
        enumerate_sequences(n_reflectors, max_len, cur, out);
        cur.pop_back();
    }
}

} // namespace

Vec3 PlanarReflector::axis_u() const {
    const Vec3 z{0.0, 0.0, 1.0};
    const Vec3 x{1.0, 0.0, 0.0};
    const Vec3 seed = (std::abs(normal.dot(z)) < 1.0 - kEps) ? z : x;
    const Vec3 proj = seed - normal.dot(seed) * normal;
    return proj.normalized();
}

Vec3 PlanarReflector::axis_v() const { return normal.cross(axis_u()); }

bool PlanarReflector::contains(const Vec3& p) const {
    const Vec3 d = p - center;
    return std::abs(d.dot(axis_u())) <= half_extent_u &&
           std::abs(d.dot(axis_v())) <= half_extent_v;
}

void Scene::validate() const {
    if ((tx_position - rx_position).norm() < kEps)
        throw ConfigError("scene: tx_position equals rx_position");
    if (max_bounces < 0 || max_bounces > 3)
        throw ConfigError("scene: max_bounces must be in [0, 3]");
    for (const auto& r : reflectors) {
        if (std::abs(r.normal.norm() - 1.0) > 1e-9)
            throw ConfigError("reflector '" + r.name + "': normal is not unit length");
        if (!(r.half_extent_u > 0.0) || !(r.half_extent_v > 0.0))
            throw ConfigError("reflector '" + r.name + "': half extents must be positive");
        if (!(r.reflection_loss_db >= 0.0))
            throw ConfigError("reflector '" + r.name + "': reflection loss must be >= 0 dB");
    }
    for (const auto& s : scatterers) {
        if (!std::isfinite(s.scatter_loss_db) || s.scatter_loss_db < 0.0)
            throw ConfigError("scatterer '" + s.name + "': loss must be finite and >= 0 dB");
    }
}

std::vector<RayPath> trace_paths(const Scene& scene) {
    scene.validate();
    std::vector<RayPath> paths;

    // Direct path, when unoccluded.
    if (!occluded(scene, scene.tx_position, scene.rx_position, -1, -1)) {
        paths.push_back(make_path(scene.rx_position,
                                  (scene.rx_position - scene.tx_position).norm(),
                                  scene.tx_position, {}));
    }

    // Specular paths via the image method.
    std::vector<std::vector<int>> sequences;
    std::vector<int> cur;
    enumerate_sequences(static_cast<int>(scene.reflectors.size()), scene.max_bounces,
                        cur, sequences);
    for (const auto& seq : sequences)
        if (auto p = resolve_sequence(scene, seq)) paths.push_back(std::move(*p));

    // Single-bounce scatterer paths.
    for (int i = 0; i < static_cast<int>(scene.scatterers.size()); ++i) {
        const auto& s = scene.scatterers[i];
        if (occluded(scene, scene.tx_position, s.position, -1, -1)) continue;
        if (occluded(scene, s.position, scene.rx_position, -1, -1)) continue;
        const double len = (s.position - scene.tx_position).norm() +
                           (scene.rx_position - s.position).norm();
        paths.push_back(make_path(scene.rx_position, len, s.position, {s.name}));
    }

    if (paths.empty()) throw EmptyScene("no propagation path exists in this scene");
    std::stable_sort(paths.begin(), paths.end(),
                     [](const RayPath& a, const RayPath& b) { return a.delay < b.delay; });
    return paths;
}

double path_gain_db(double path_length_m, double carrier_freq_hz, double g_tx_db,
                    double g_rx_db, double l_sys_db, double l_ref_total_db) {
    const double fspl_db =
        20.0 * std::log10(4.0 * M_PI * path_length_m * carrier_freq_hz / kSpeedOfLight);
    return g_tx_db + g_rx_db - fspl_db - l_sys_db - l_ref_total_db;
}

GroundTruthChannel ground_truth_channel(const Scene& scene, const RadioParams& radio) {
    GroundTruthChannel out;
    out.carrier_freq_hz = radio.carrier_freq_hz;
    out.paths = trace_paths(scene);
    for (auto& p : out.paths) {
        double l_ref = 0.0;
        for (const auto& id : p.bounce_ids) {
            bool found = false;
            for (const auto& r : scene.reflectors) {
                if (r.name == id) {
                    l_ref += r.reflection_loss_db;
                    found = true;
                    break;
                }
            }
            if (found) continue;
            for (const auto& s : scene.scatterers) {
                if (s.name == id) {
                    l_ref += s.scatter_loss_db;
                    break;
                }
            }
        }
        p.gain_db = path_gain_db(p.path_length, radio.carrier_freq_hz, radio.g_tx_db,
                                 radio.g_rx_db, radio.l_sys_db, l_ref);
    }
    return out;
}

} // namespace isac
