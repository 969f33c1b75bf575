#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "polyknot/errors.hpp"
#include "polyknot/geometry.hpp"
#include "polyknot/parallel.hpp"

namespace polyknot {

struct QuadratureConfig {
    /// Quadrature nodes per edge. 1 places a node at every vertex; larger
    /// values add evenly spaced nodes along each edge.
    int subdivisions_per_edge = 1;
};

/// Mobius energy split into the near-arc part, the far chord part and the
/// far arc regularizer: total = e_prox + e_dist - e_reg.
struct EnergyBreakdown {
    double e_prox = 0.0;
    double e_dist = 0.0;
    double e_reg = 0.0;
    double total = 0.0;
    double threshold_arc = 0.0;
    std::size_t sample_count = 0;
};

namespace detail {

// Quadrature nodes along the closed polyline. With m nodes per edge the rule
// is the composite (periodic) trapezoid rule: a node sits on every vertex and
// carries the half-sum of the two adjacent spacings as its weight. Chords
// between nodes never exceed the arc between them, which keeps every energy
// term nonnegative.
struct SampleSet {
    std::vector<Vec3> position;
    std::vector<double> weight;
    std::vector<double> arcpos;
    std::vector<int> edge;      // containing edge
    std::vector<double> frac;   // fraction along that edge, in [0,1)
    double total_length = 0.0;

    std::size_t size() const { return position.size(); }
};

inline SampleSet make_samples(const PolylineKnot& k, int subdivisions) {
    if (subdivisions < 1) throw BadParameter("subdivisions_per_edge must be >= 1");
    const int n = k.size();
    const int m = subdivisions;
    SampleSet s;
    s.total_length = k.total_length();
    const std::size_t count = static_cast<std::size_t>(n) * static_cast<std::size_t>(m);
    s.position.reserve(count);
    s.weight.reserve(count);
    s.arcpos.reserve(count);
    s.edge.reserve(count);
    s.frac.reserve(count);
    for (int e = 0; e < n; ++e) {
        const Vec3 base = k.vertex(e);
        const Vec3 ev = k.edge_vector(e);
        const double len = k.edge_length(e);
        const double prev_len = k.edge_length((e + n - 1) % n);
        for (int j = 0; j < m; ++j) {
            const double f = static_cast<double>(j) / m;
            s.position.push_back(base + f * ev);
            s.weight.push_back(j == 0 ? (prev_len + len) / (2.0 * m) : len / m);
            s.arcpos.push_back(k.arc_prefix()[static_cast<std::size_t>(e)] + f * len);
            s.edge.push_back(e);
            s.frac.push_back(f);
        }
    }
    return s;
}

} // namespace detail

/// Discrete Mobius energy of the knot: double sum over ordered node pairs of
/// 1/|x-y|^2 - 1/arc(x,y)^2, the diagonal omitted. Pairs with
/// arc <= threshold_arc accumulate into e_prox; the remaining pairs split
/// their chord term into e_dist and their arc term into e_reg, so the
/// decomposition identity holds exactly as accumulated. Deterministic for any
/// thread count: per-row partials are combined in row order.
inline EnergyBreakdown mobius_energy(const PolylineKnot& k, const QuadratureConfig& cfg,
                                     double threshold_arc) {
    const double L = k.total_length();
    // Arc separations never exceed L/2, so thresholds at or above that make
    // the whole sum proximal (the circle mesh at threshold pi relies on this:
    // an inscribed polygon is slightly shorter than its circle).
    if (!(threshold_arc > 0.0) || !std::isfinite(threshold_arc)) {
        throw BadParameter("threshold_arc must be positive and finite");
    }
    const detail::SampleSet s = detail::make_samples(k, cfg.subdivisions_per_edge);
    const std::size_t ns = s.size();
    const double dist_floor2 = 1e-24 * k.diameter() * k.diameter();

    struct RowPartial {
        double prox = 0.0, dist = 0.0, reg = 0.0;
        bool degenerate = false;
    };
    std::vector<RowPartial> rows(ns);

    parallel::for_each_block(ns, [&](std::size_t i) {
        parallel::CompensatedSum prox, dist, reg;
        bool degenerate = false;
        const Vec3 xi = s.position[i];
        const double wi = s.weight[i];
        const double si = s.arcpos[i];
        for (std::size_t j = i + 1; j < ns; ++j) {
            const double d2 = (xi - s.position[j]).squaredNorm();
            if (d2 < dist_floor2) degenerate = true;
            double da = std::fabs(si - s.arcpos[j]);
            if (da > L / 2.0) da = L - da;
            const double w = wi * s.weight[j];
            if (da <= threshold_arc) {
                prox.add(w * (1.0 / d2 - 1.0 / (da * da)));
            } else {
                dist.add(w / d2);
                reg.add(w / (da * da));
            }
        }
        rows[i] = {prox.value(), dist.value(), reg.value(), degenerate};
    });

    parallel::CompensatedSum prox, dist, reg;
    bool degenerate = false;
    for (const RowPartial& r : rows) {
        prox.add(r.prox);
        dist.add(r.dist);
        reg.add(r.reg);
        degenerate = degenerate || r.degenerate;
    }
    if (degenerate) {
        throw NonconvergentSample("a sample pair fell below 1e-12 of the diameter");
    }

    EnergyBreakdown out;
    out.e_prox = 2.0 * prox.value();  // ordered pairs
    out.e_dist = 2.0 * dist.value();
    out.e_reg = 2.0 * reg.value();
    out.total = out.e_prox + out.e_dist - out.e_reg;
    out.threshold_arc = threshold_arc;
    out.sample_count = ns;
    return out;
}

/// Inner Mobius integrand integral for a fixed point on a circle of the given
/// radius; closed form 2/(pi R).
inline double circle_inner_integral(double radius) {
    if (!(radius > 0.0)) throw BadParameter("radius must be positive");
    return 2.0 / (kPi * radius);
}

/// Closed form of the arc regularizer at threshold pi for a curve of the
/// given total length: 2 L / pi - 4. Valid for L >= 2 pi.
inline double e_reg_closed_form(double total_length) {
    if (!(total_length >= 2.0 * kPi)) {
        throw BadParameter("e_reg closed form needs L >= 2*pi");
    }
    return 2.0 * total_length / kPi - 4.0;
}

/// Sum of exterior (turning) angles, each in [0, pi).
inline double total_curvature(const PolylineKnot& k) {
    const int n = k.size();
    parallel::CompensatedSum acc;
    for (int i = 0; i < n; ++i) {
        const Vec3 u = k.unit_tangent((i + n - 1) % n);
        const Vec3 v = k.unit_tangent(i);
        acc.add(std::atan2(u.cross(v).norm(), u.dot(v)));
    }
    return acc.value();
}

namespace detail {

// Signed solid angle of the quadrilateral spanned by two segments, i.e. the
// exact Gauss-integral contribution of the pair (Levitt's formula). Zero for
// coplanar pairs.
inline double segment_pair_solid_angle(const Vec3& p1, const Vec3& p2,
                                       const Vec3& p3, const Vec3& p4) {
    const Vec3 r13 = p3 - p1, r14 = p4 - p1, r23 = p3 - p2, r24 = p4 - p2;
    Vec3 n1 = r13.cross(r14);
    Vec3 n2 = r14.cross(r24);
    Vec3 n3 = r24.cross(r23);
    Vec3 n4 = r23.cross(r13);
    const double l1 = n1.norm(), l2 = n2.norm(), l3 = n3.norm(), l4 = n4.norm();
    if (l1 < 1e-300 || l2 < 1e-300 || l3 < 1e-300 || l4 < 1e-300) return 0.0;
    n1 /= l1; n2 /= l2; n3 /= l3; n4 /= l4;
    auto asin_clamped = [](double x) { return std::asin(std::clamp(x, -1.0, 1.0)); };
    const double omega = asin_clamped(n1.dot(n2)) + asin_clamped(n2.dot(n3)) +
                         asin_clamped(n3.dot(n4)) + asin_clamped(n4.dot(n1));
    const double orient = (p4 - p3).cross(p2 - p1).dot(r13);
    if (orient > 0.0) return omega;
    if (orient < 0.0) return -omega;
    return 0.0;
}

} // namespace detail

/// Writhe: Gauss double integral evaluated exactly per non-adjacent edge
/// pair via the signed solid-angle formula. Adjacent pairs contribute
/// nothing (the integrand vanishes on coplanar segments).
inline double writhe(const PolylineKnot& k) {
    const int n = k.size();
    std::vector<double> rows(static_cast<std::size_t>(n), 0.0);
    parallel::for_each_block(static_cast<std::size_t>(n), [&](std::size_t bi) {
        const int i = static_cast<int>(bi);
        parallel::CompensatedSum acc;
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            acc.add(detail::segment_pair_solid_angle(
                k.vertex(i), k.vertex_wrapped(i + 1), k.vertex(j), k.vertex_wrapped(j + 1)));
        }
        rows[bi] = acc.value();
    });
    parallel::CompensatedSum total;
    for (double r : rows) total.add(r);
    return 2.0 * total.value() / (4.0 * kPi);
}

/// Average crossing number: same Gauss integrand in absolute value,
/// midpoint quadrature over non-adjacent edge pairs.
inline double average_crossing_number(const PolylineKnot& k, const QuadratureConfig& cfg) {
    if (cfg.subdivisions_per_edge < 1) throw BadParameter("subdivisions_per_edge must be >= 1");
    const int n = k.size();
    const int m = cfg.subdivisions_per_edge;
    std::vector<Vec3> mid(static_cast<std::size_t>(n) * static_cast<std::size_t>(m));
    std::vector<Vec3> tang(static_cast<std::size_t>(n));
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int e = 0; e < n; ++e) {
        tang[static_cast<std::size_t>(e)] = k.unit_tangent(e);
        w[static_cast<std::size_t>(e)] = k.edge_length(e) / m;
        for (int j = 0; j < m; ++j) {
            mid[static_cast<std::size_t>(e * m + j)] =
                k.vertex(e) + ((j + 0.5) / m) * k.edge_vector(e);
        }
    }
    std::vector<double> rows(static_cast<std::size_t>(n), 0.0);
    parallel::for_each_block(static_cast<std::size_t>(n), [&](std::size_t bi) {
        const int i = static_cast<int>(bi);
        parallel::CompensatedSum acc;
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            const Vec3 cr = tang[static_cast<std::size_t>(i)].cross(tang[static_cast<std::size_t>(j)]);
            const double ww = w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(j)];
            for (int a = 0; a < m; ++a) {
                for (int b = 0; b < m; ++b) {
                    const Vec3 d = mid[static_cast<std::size_t>(i * m + a)] -
                                   mid[static_cast<std::size_t>(j * m + b)];
                    const double dn = d.norm();
                    acc.add(std::fabs(cr.dot(d)) / (dn * dn * dn) * ww);
                }
            }
        }
        rows[bi] = acc.value();
    });
    parallel::CompensatedSum total;
    for (double r : rows) total.add(r);
    return 2.0 * total.value() / (4.0 * kPi);
}

} // namespace polyknot
