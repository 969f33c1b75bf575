#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "polyknot/errors.hpp"

namespace polyknot {

using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr long double kPiLong = 3.14159265358979323846264338327950288L;

// Relative floor below which an edge counts as degenerate.
inline constexpr double kDegenerateEdgeRel = 1e-12;
// Relative floor below which non-adjacent edges count as intersecting.
inline constexpr double kSimplicityRel = 1e-9;

/// A point on the knot addressed by global arclength.
struct ArcPoint {
    double s = 0.0;          // arclength parameter in [0, L)
    Vec3 position{0, 0, 0};  // point on the containing edge
    int edge_index = 0;
};

namespace detail {

// Closest points between segments [p1,p2] and [q1,q2].
// Returns squared distance; u, v are the clamped parameters.
// Follows the usual quadratic-clamping scheme (Ericson, Real-Time
// Collision Detection, 5.1.9), degenerate cases included.
inline double segment_segment_sq(const Vec3& p1, const Vec3& p2,
                                 const Vec3& q1, const Vec3& q2,
                                 double& u, double& v) {
    const Vec3 d1 = p2 - p1;
    const Vec3 d2 = q2 - q1;
    const Vec3 r = p1 - q1;
    const double a = d1.squaredNorm();
    const double e = d2.squaredNorm();
    const double f = d2.dot(r);
    const double c = d1.dot(r);
    const double b = d1.dot(d2);
    const double denom = a * e - b * b;

    if (denom > 1e-13 * a * e) {
        u = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
    } else {
        u = 0.0;  // near-parallel: pick an end of the first segment
    }
    v = (e > 0.0) ? (b * u + f) / e : 0.0;
    if (v < 0.0) {
        v = 0.0;
        u = (a > 0.0) ? std::clamp(-c / a, 0.0, 1.0) : 0.0;
    } else if (v > 1.0) {
        v = 1.0;
        u = (a > 0.0) ? std::clamp((b - c) / a, 0.0, 1.0) : 0.0;
    }
    return (p1 + u * d1 - (q1 + v * d2)).squaredNorm();
}

} // namespace detail

/// Closed polyline in 3-space with precomputed arclength tables.
/// Instances are validated on construction and immutable afterwards, so all
/// operations on them are pure and safe to call concurrently.
class PolylineKnot {
public:
    static PolylineKnot build(std::vector<Vec3> vertices, std::string name = "");

    const std::vector<Vec3>& vertices() const { return vertices_; }
    const std::vector<double>& edge_lengths() const { return edge_lengths_; }
    /// Cumulative arclength; arc_prefix()[0] == 0, arc_prefix()[n] == L.
    const std::vector<double>& arc_prefix() const { return arc_prefix_; }
    double total_length() const { return total_length_; }
    double diameter() const { return diameter_; }
    double max_edge_length() const { return max_edge_; }
    const std::string& name() const { return name_; }
    int size() const { return static_cast<int>(vertices_.size()); }

    const Vec3& vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }
    Vec3 vertex_wrapped(int i) const {
        const int n = size();
        return vertices_[static_cast<std::size_t>(((i % n) + n) % n)];
    }
    double edge_length(int i) const { return edge_lengths_[static_cast<std::size_t>(i)]; }
    Vec3 edge_vector(int i) const {
        return vertex_wrapped(i + 1) - vertices_[static_cast<std::size_t>(i)];
    }
    Vec3 unit_tangent(int i) const { return edge_vector(i) / edge_length(i); }

    /// Minimum distance between non-adjacent edges (exact over segment pairs).
    double min_nonadjacent_distance() const { return min_nonadj_dist_; }

private:
    PolylineKnot() = default;

    std::vector<Vec3> vertices_;
    std::vector<double> edge_lengths_;
    std::vector<double> arc_prefix_;
    double total_length_ = 0.0;
    double diameter_ = 0.0;
    double max_edge_ = 0.0;
    double min_nonadj_dist_ = 0.0;
    std::string name_;
};

inline PolylineKnot PolylineKnot::build(std::vector<Vec3> vertices, std::string name) {
    const std::size_t n = vertices.size();
    if (n < 3) {
        throw TooFewVertices("a closed polyline needs at least 3 vertices, got " +
                             std::to_string(n));
    }

    Vec3 lo = vertices[0], hi = vertices[0];
    for (const Vec3& v : vertices) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    const double diameter = (hi - lo).norm();
    if (diameter == 0.0) {
        throw DegenerateEdge("all vertices coincide");
    }

    PolylineKnot k;
    k.vertices_ = std::move(vertices);
    k.name_ = std::move(name);
    k.diameter_ = diameter;
    k.edge_lengths_.resize(n);
    k.arc_prefix_.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double len = (k.vertices_[(i + 1) % n] - k.vertices_[i]).norm();
        if (len <= kDegenerateEdgeRel * diameter) {
            throw DegenerateEdge("edge " + std::to_string(i) + " has length " +
                                 std::to_string(len));
        }
        k.edge_lengths_[i] = len;
        k.arc_prefix_[i + 1] = k.arc_prefix_[i] + len;
        k.max_edge_ = std::max(k.max_edge_, len);
    }
    k.total_length_ = k.arc_prefix_[n];

    // Embeddedness: every pair of non-adjacent edges must keep a positive
    // distance (relative to the diameter).
    double min_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            double u, v;
            const double d2 = detail::segment_segment_sq(
                k.vertices_[i], k.vertices_[(i + 1) % n],
                k.vertices_[j], k.vertices_[(j + 1) % n], u, v);
            min_d2 = std::min(min_d2, d2);
        }
    }
    k.min_nonadj_dist_ = std::sqrt(min_d2);
    const double floor = kSimplicityRel * diameter;
    if (!(k.min_nonadj_dist_ > floor)) {
        throw SelfIntersecting("non-adjacent edges come within " +
                               std::to_string(k.min_nonadj_dist_) +
                               " (floor " + std::to_string(floor) + ")");
    }
    return k;
}

inline PolylineKnot build_knot(std::vector<Vec3> vertices, std::string name = "") {
    return PolylineKnot::build(std::move(vertices), std::move(name));
}

/// Reduce an arclength parameter into [0, L).
inline double wrap_arclength(const PolylineKnot& k, double s) {
    const double L = k.total_length();
    double r = std::fmod(s, L);
    if (r < 0.0) r += L;
    if (r >= L) r = 0.0;  // guard against fmod rounding exactly to L
    return r;
}

inline ArcPoint point_at(const PolylineKnot& k, double s) {
    const double r = wrap_arclength(k, s);
    const auto& prefix = k.arc_prefix();
    // First prefix entry strictly greater than r, minus one, is the edge.
    const auto it = std::upper_bound(prefix.begin(), prefix.end(), r);
    int e = static_cast<int>(it - prefix.begin()) - 1;
    e = std::clamp(e, 0, k.size() - 1);
    const double offset = r - prefix[static_cast<std::size_t>(e)];
    ArcPoint p;
    p.s = r;
    p.edge_index = e;
    p.position = k.vertex(e) + (offset / k.edge_length(e)) * k.edge_vector(e);
    return p;
}

/// Shorter-way arclength separation; result in [0, L/2].
inline double arc_distance(const PolylineKnot& k, double s, double t) {
    const double L = k.total_length();
    double d = std::fabs(wrap_arclength(k, s) - wrap_arclength(k, t));
    if (d > L / 2.0) d = L - d;
    return d;
}

inline PolylineKnot scaled(const PolylineKnot& k, double factor) {
    if (!(factor > 0.0) || !std::isfinite(factor)) {
        throw BadParameter("scale factor must be a positive finite number");
    }
    std::vector<Vec3> vs = k.vertices();
    for (Vec3& v : vs) v *= factor;
    return PolylineKnot::build(std::move(vs), k.name());
}

/// Regular n-gon inscribed in the circle of the given radius, xy-plane.
inline PolylineKnot make_circle(double radius, int n) {
    if (!(radius > 0.0)) throw BadParameter("circle radius must be positive");
    if (n < 3) throw BadParameter("circle needs n >= 3 vertices");
    std::vector<Vec3> vs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        // synthesize in extended precision: turning angles of fine polygons
        // amplify coordinate rounding by n^2, and downstream closed-form
        // comparisons sit near that floor
        const long double a = 2.0L * kPiLong * (static_cast<long double>(i) / n);
        vs[static_cast<std::size_t>(i)] =
            Vec3(static_cast<double>(radius * std::cos(a)),
                 static_cast<double>(radius * std::sin(a)), 0.0);
    }
    return PolylineKnot::build(std::move(vs), "circle");
}

/// (p,q) torus knot sampled uniformly in the curve parameter on the torus
/// with the given major/minor radii. Throws SelfIntersecting when n is too
/// small for the sample to be embedded.
inline PolylineKnot make_torus_knot(int p, int q, double major, double minor, int n) {
    if (p < 2 || q < 2) throw BadParameter("torus knot needs p, q >= 2");
    if (std::gcd(p, q) != 1) throw BadParameter("torus knot needs gcd(p, q) = 1");
    if (!(major > minor && minor > 0.0)) {
        throw BadParameter("torus knot needs major > minor > 0");
    }
    if (n < 3) throw BadParameter("torus knot needs n >= 3 vertices");
    std::vector<Vec3> vs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const long double t = 2.0L * kPiLong * (static_cast<long double>(i) / n);
        const long double w = major + minor * std::cos(q * t);
        vs[static_cast<std::size_t>(i)] =
            Vec3(static_cast<double>(w * std::cos(p * t)),
                 static_cast<double>(w * std::sin(p * t)),
                 static_cast<double>(minor * std::sin(q * t)));
    }
    return PolylineKnot::build(std::move(vs),
                               "torus-" + std::to_string(p) + "-" + std::to_string(q));
}

namespace detail {

// Uniform double in [0,1) from the top 53 bits; avoids the
// implementation-defined std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double gaussian(std::mt19937_64& rng) {
    // Box-Muller on explicitly generated uniforms.
    double u1 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

} // namespace detail

/// Displace vertices by a deterministic pseudo-random field of low-frequency
/// Fourier modes, rescaled so every displacement has norm <= amplitude. The
/// smoothness keeps the perturbed curve embedded and its length close to the
/// original at small amplitudes.
inline PolylineKnot perturb(const PolylineKnot& k, double amplitude, std::uint64_t seed) {
    if (amplitude < 0.0) throw BadParameter("perturbation amplitude must be >= 0");
    if (amplitude == 0.0) return k;

    const int n = k.size();
    constexpr int kModes = 4;
    std::mt19937_64 rng(seed);
    std::vector<Vec3> coeff_cos(kModes), coeff_sin(kModes);
    for (int m = 0; m < kModes; ++m) {
        for (int c = 0; c < 3; ++c) coeff_cos[static_cast<std::size_t>(m)][c] = detail::gaussian(rng);
        for (int c = 0; c < 3; ++c) coeff_sin[static_cast<std::size_t>(m)][c] = detail::gaussian(rng);
    }

    std::vector<Vec3> disp(static_cast<std::size_t>(n), Vec3::Zero());
    double max_norm = 0.0;
    for (int i = 0; i < n; ++i) {
        const double phi = 2.0 * kPi * (static_cast<double>(i) / n);
        Vec3 d = Vec3::Zero();
        for (int m = 0; m < kModes; ++m) {
            d += coeff_cos[static_cast<std::size_t>(m)] * std::cos((m + 1) * phi) +
                 coeff_sin[static_cast<std::size_t>(m)] * std::sin((m + 1) * phi);
        }
        disp[static_cast<std::size_t>(i)] = d;
        max_norm = std::max(max_norm, d.norm());
    }
    if (max_norm == 0.0) return k;

    std::vector<Vec3> vs = k.vertices();
    const double scale = amplitude / max_norm;
    for (int i = 0; i < n; ++i) {
        vs[static_cast<std::size_t>(i)] += scale * disp[static_cast<std::size_t>(i)];
    }
    return PolylineKnot::build(std::move(vs), k.name());
}

} // namespace polyknot
