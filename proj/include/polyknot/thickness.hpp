#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "polyknot/geometry.hpp"
#include "polyknot/parallel.hpp"

namespace polyknot {

/// Thickness data of a polygonal knot. radius = min(min_rad, dcsd/2) and
/// ropelength = L / radius.
struct ThicknessReport {
    double min_rad = 0.0;
    int minrad_vertex = -1;
    double dcsd = 0.0;
    ArcPoint dcsd_witness_a;
    ArcPoint dcsd_witness_b;
    double radius = 0.0;
    double ropelength = 0.0;
};

/// Polygonal minimum radius of curvature: at each vertex,
/// min(adjacent edge lengths) / (2 tan(theta/2)) with theta the turning
/// angle. Straight vertices (theta = 0) contribute +infinity.
inline std::pair<double, int> min_rad(const PolylineKnot& k) {
    const int n = k.size();
    double best = std::numeric_limits<double>::infinity();
    int best_vertex = -1;
    for (int i = 0; i < n; ++i) {
        const Vec3 u = k.unit_tangent((i + n - 1) % n);
        const Vec3 v = k.unit_tangent(i);
        const double theta = std::atan2(u.cross(v).norm(), u.dot(v));
        if (theta <= 0.0) continue;
        const double r = std::min(k.edge_length((i + n - 1) % n), k.edge_length(i)) /
                         (2.0 * std::tan(theta / 2.0));
        if (r < best) {
            best = r;
            best_vertex = i;
        }
    }
    return {best, best_vertex};
}

namespace detail {

// Tolerance for the directional-derivative criticality tests below,
// dimensionless (the derivatives are cosines).
inline constexpr double kCriticalTol = 1e-9;

// Is the chord p -> q critical at p, where p sits on edge `e` at parameter
// `u`? Interior points must be perpendicular to the edge; at a vertex the
// chord must realize a one-sided local extremum of the distance along the
// curve, i.e. the arriving and leaving derivatives may not share a strict
// sign.
inline bool chord_critical_at(const PolylineKnot& k, int e, double u,
                              const Vec3& p, const Vec3& q) {
    const double d = (p - q).norm();
    if (!(d > 0.0)) return false;
    const int n = k.size();
    const Vec3 dir = (p - q) / d;
    if (u > 1e-12 && u < 1.0 - 1e-12) {
        return std::fabs(k.unit_tangent(e).dot(dir)) <= kCriticalTol;
    }
    int before, after;
    if (u <= 1e-12) {           // p is vertex e
        before = (e + n - 1) % n;
        after = e;
    } else {                    // p is vertex e+1
        before = e;
        after = (e + 1) % n;
    }
    const double d_in = k.unit_tangent(before).dot(dir);
    const double d_out = k.unit_tangent(after).dot(dir);
    const bool local_min = d_in <= kCriticalTol && d_out >= -kCriticalTol;
    const bool local_max = d_in >= -kCriticalTol && d_out <= kCriticalTol;
    return local_min || local_max;
}

inline double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

// Parameter of the point on segment [a, b] closest to p.
inline double foot_parameter(const Vec3& a, const Vec3& b, const Vec3& p) {
    const Vec3 d = b - a;
    const double len2 = d.squaredNorm();
    if (len2 <= 0.0) return 0.0;
    return clamp_unit((p - a).dot(d) / len2);
}

struct DcsdCandidate {
    double dist = std::numeric_limits<double>::infinity();
    int edge_a = -1, edge_b = -1;
    double u = 0.0, v = 0.0;
};

// All doubly-critical chords between two non-adjacent edges occur at
// configurations that are stationary cell-by-cell: the clamped closest pair,
// a vertex projected onto the other segment, or a vertex-vertex pair. Test
// each candidate for curve-level criticality at both ends and keep the best.
inline void scan_pair(const PolylineKnot& k, int i, int j, DcsdCandidate& best) {
    const Vec3 a0 = k.vertex(i), a1 = k.vertex_wrapped(i + 1);
    const Vec3 b0 = k.vertex(j), b1 = k.vertex_wrapped(j + 1);

    double cand_u[9], cand_v[9];
    int count = 0;
    {
        double u, v;
        segment_segment_sq(a0, a1, b0, b1, u, v);
        cand_u[count] = u; cand_v[count] = v; ++count;
    }
    for (const double v : {0.0, 1.0}) {
        const Vec3 q = (v == 0.0) ? b0 : b1;
        cand_u[count] = foot_parameter(a0, a1, q); cand_v[count] = v; ++count;
    }
    for (const double u : {0.0, 1.0}) {
        const Vec3 p = (u == 0.0) ? a0 : a1;
        cand_u[count] = u; cand_v[count] = foot_parameter(b0, b1, p); ++count;
    }
    for (const double u : {0.0, 1.0}) {
        for (const double v : {0.0, 1.0}) {
            cand_u[count] = u; cand_v[count] = v; ++count;
        }
    }

    for (int c = 0; c < count; ++c) {
        const Vec3 p = a0 + cand_u[c] * (a1 - a0);
        const Vec3 q = b0 + cand_v[c] * (b1 - b0);
        const double d = (p - q).norm();
        if (d >= best.dist) continue;
        if (!chord_critical_at(k, i, cand_u[c], p, q)) continue;
        if (!chord_critical_at(k, j, cand_v[c], q, p)) continue;
        best.dist = d;
        best.edge_a = i;
        best.edge_b = j;
        best.u = cand_u[c];
        best.v = cand_v[c];
    }
}

inline ArcPoint arc_point_on_edge(const PolylineKnot& k, int e, double t) {
    ArcPoint p;
    p.edge_index = e;
    p.position = k.vertex(e) + t * k.edge_vector(e);
    p.s = wrap_arclength(k, k.arc_prefix()[static_cast<std::size_t>(e)] + t * k.edge_length(e));
    return p;
}

} // namespace detail

/// Doubly-critical self-distance: the minimum length over chords between
/// non-adjacent edges that are local extrema of the distance along the curve
/// at both endpoints. Ties break toward the lowest (i, j) edge pair.
inline std::pair<double, std::pair<ArcPoint, ArcPoint>> dcsd(const PolylineKnot& k) {
    const int n = k.size();
    std::vector<detail::DcsdCandidate> rows(static_cast<std::size_t>(n));
    parallel::for_each_block(static_cast<std::size_t>(n), [&](std::size_t bi) {
        const int i = static_cast<int>(bi);
        detail::DcsdCandidate best;
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            detail::scan_pair(k, i, j, best);
        }
        rows[bi] = best;
    });
    detail::DcsdCandidate best;
    for (const auto& r : rows) {
        if (r.dist < best.dist) best = r;
    }
    if (best.edge_a < 0) {
        // No critical chord (possible only for degenerate shapes); thickness
        // is then governed by curvature alone.
        return {std::numeric_limits<double>::infinity(), {ArcPoint{}, ArcPoint{}}};
    }
    return {best.dist,
            {detail::arc_point_on_edge(k, best.edge_a, best.u),
             detail::arc_point_on_edge(k, best.edge_b, best.v)}};
}

inline ThicknessReport thickness(const PolylineKnot& k) {
    ThicknessReport r;
    const auto [mr, mv] = min_rad(k);
    r.min_rad = mr;
    r.minrad_vertex = mv;
    const auto [d, wit] = dcsd(k);
    r.dcsd = d;
    r.dcsd_witness_a = wit.first;
    r.dcsd_witness_b = wit.second;
    r.radius = std::min(r.min_rad, r.dcsd / 2.0);
    r.ropelength = k.total_length() / r.radius;
    return r;
}

/// Rescale so the thickness radius becomes 1; the result's total length is
/// the ropelength of the input.
inline PolylineKnot normalize(const PolylineKnot& k) {
    const ThicknessReport r = thickness(k);
    if (!(r.radius > 0.0) || !std::isfinite(r.radius)) {
        throw NotSimple("knot has no positive finite thickness radius");
    }
    return scaled(k, 1.0 / r.radius);
}

} // namespace polyknot
