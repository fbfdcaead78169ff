// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "isac/geometry.hpp"

namespace isac {

/// Finite rectangular specular reflector.  The in-plane axes are derived
/// deterministically from the normal: u is the projection of global +z onto
/// the plane (or +x when the normal is vertical), v = normal x u.
struct PlanarReflector {
    std::string name;
    Vec3 center;
    Vec3 normal;            // unit norm within 1e-9
    double half_extent_u = 0.0; // meters, > 0 (may be +inf for an open plane)
    double half_extent_v = 0.0;
    double reflection_loss_db = 0.0; // >= 0, applied once per bounce

    Vec3 axis_u() const;
    Vec3 axis_v() const;
    /// True if a point on the reflector plane lies inside the rectangle.
    bool contains(const Vec3& p) const;
};

/// Point scatterer re-radiating toward the receiver with a fixed loss.
struct PointScatterer {
    std::string name;
    Vec3 position;
    double scatter_loss_db = 0.0;
};

struct Scene {
    Vec3 tx_position;
    Vec3 rx_position;
    std::vector<PlanarReflector> reflectors;
    std::vector<PointScatterer> scatterers;
    int max_bounces = 2; // 0..3

    void validate() const; // throws ConfigError on invariant violation
};

/// One resolved propagation path.
struct RayPath {
    double path_length = 0.0;      // meters
    double delay = 0.0;            // seconds, = path_length / c
    double gain_db = 0.0;          // filled by ground_truth_channel
    double aoa_elevation_deg = 0.0; // elevation of arrival at rx, [-90, 90]
    std::vector<std::string> bounce_ids; // surfaces/scatterers in bounce order
};

/// Scalar link-budget parameters for turning geometry into tap gains.
struct RadioParams {
    double carrier_freq_hz = 79e9;
    double g_tx_db = 0.0;
    double g_rx_db = 0.0;
    double l_sys_db = 0.0;
};

struct GroundTruthChannel {
    std::vector<RayPath> paths; // sorted by delay, non-decreasing
    double carrier_freq_hz = 79e9;
};

/// All specular paths up to scene.max_bounces by the image method, plus
/// single-bounce paths via each point scatterer.  Every path and every
/// segment is occlusion-checked against the reflector rectangles.
/// Throws EmptyScene when no path survives.
std::vector<RayPath> trace_paths(const Scene& scene);

/// Link budget per tap: g_tx + g_rx - FSPL - l_sys - l_ref, with
/// FSPL_db = 20 log10(4 pi d f / c).
double path_gain_db(double path_length_m, double carrier_freq_hz, double g_tx_db,
                    double g_rx_db, double l_sys_db, double l_ref_total_db);

/// Traces the scene and attaches gains; l_ref accumulates per bounce.
GroundTruthChannel ground_truth_channel(const Scene& scene, const RadioParams& radio);

} // namespace isac
