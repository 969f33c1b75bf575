#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "polyknot/errors.hpp"
#include "polyknot/geometry.hpp"

namespace polyknot {

/// Left end of the domain of the shell-packing machinery: 104/3 + 2*pi.
/// Below it the packing radius P would drop under 2 and the detailed bound
/// does not apply.
inline constexpr double kDetailedDomainMin = 104.0 / 3.0 + 2.0 * kPi;

inline double pow_4_3(double x) { return x * std::cbrt(x); }

/// Shell radius at which a unit tube of length L - 2*pi fills the spherical
/// shell from 1 to P+1: P = (3L/4 - 3pi/2 + 1)^(1/3) - 1. Needs P >= 2,
/// i.e. L >= 104/3 + 2*pi.
inline double p_constant(double length) {
    if (!(length >= kDetailedDomainMin)) {
        throw BelowDomain("p_constant needs L >= 104/3 + 2*pi = " +
                          std::to_string(kDetailedDomainMin));
    }
    return std::cbrt(0.75 * length - 1.5 * kPi + 1.0) - 1.0;
}

/// Length the sphere of radius 2 itself may carry: 4/3 (3^3 - 1^3) = 104/3.
inline double ell_star_at2() { return 104.0 / 3.0; }

/// Shell envelope over the half-open shell (a, b]:
/// 4/3 ((min(b,P)+1)^3 - (min(a,P)+1)^3).
inline double ell_star(double a, double b, double length) {
    if (!(a >= 2.0) || !(a < b)) throw BadParameter("ell_star needs 2 <= a < b");
    const double p = p_constant(length);
    const double bb = std::min(b, p) + 1.0;
    const double aa = std::min(a, p) + 1.0;
    return 4.0 / 3.0 * (bb * bb * bb - aa * aa * aa);
}

/// Envelope of the closed shell [2, b]: 104/3 + ell_star(2, b]; constant
/// L - 2*pi once b >= P.
inline double ell_star_upto(double b, double length) {
    if (!(b >= 2.0)) throw BadParameter("ell_star_upto needs b >= 2");
    if (b == 2.0) return ell_star_at2();
    return ell_star_at2() + ell_star(2.0, b, length);
}

/// Limit of the Riemann sums bounding the distal inner integral:
/// 8/3 + 4P - 4/P + 8 ln(P) - 8 ln(2).
inline double distal_inner_bound(double length) {
    const double p = p_constant(length);
    return 8.0 / 3.0 + 4.0 * p - 4.0 / p + 8.0 * std::log(p) - 8.0 * std::log(2.0);
}

/// Full shell-packing energy bound: L * distal_inner_bound(L) + 4.
inline double detailed_bound(double length) {
    return length * distal_inner_bound(length) + 4.0;
}

struct QuadraticBound {
    double raw = 0.0;     // L^2/4 - pi/2 L + 4
    double simple = 0.0;  // L^2/4
};

/// Quadratic energy bound; valid for L >= 2*pi (closed unit-thickness curves
/// cannot be shorter).
inline QuadraticBound quadratic_bound(double length) {
    if (!(length >= 2.0 * kPi)) {
        throw BelowDomain("quadratic bound needs L >= 2*pi");
    }
    QuadraticBound q;
    q.simple = 0.25 * length * length;
    q.raw = q.simple - 0.5 * kPi * length + 4.0;
    return q;
}

/// The 4/3-power bound 4.57 L^(4/3); valid for all positive L.
inline double power_bound(double length) {
    if (!(length > 0.0)) throw BadParameter("power bound needs L > 0");
    return 4.57 * pow_4_3(length);
}

/// Every bound evaluated at one normalized length, with domain gating.
struct BoundReport {
    double length = 0.0;
    std::optional<double> p_value;
    std::optional<double> quad_raw;
    std::optional<double> quad;
    std::optional<double> detailed;
    double power_457 = 0.0;
    double best = 0.0;
};

inline BoundReport bound_report(double length) {
    BoundReport r;
    r.length = length;
    r.power_457 = power_bound(length);
    r.best = r.power_457;
    if (length >= 2.0 * kPi) {
        const QuadraticBound q = quadratic_bound(length);
        r.quad_raw = q.raw;
        r.quad = q.simple;
        r.best = std::min(r.best, q.simple);
        r.best = std::min(r.best, q.raw);
    }
    if (length >= kDetailedDomainMin) {
        r.p_value = p_constant(length);
        r.detailed = detailed_bound(length);
        r.best = std::min(r.best, *r.detailed);
    }
    return r;
}

enum class BoundId { Quad, QuadRaw, Detailed, Power457 };

inline const char* bound_id_name(BoundId id) {
    switch (id) {
        case BoundId::Quad: return "quad";
        case BoundId::QuadRaw: return "quad-raw";
        case BoundId::Detailed: return "detailed";
        case BoundId::Power457: return "power-457";
    }
    return "?";
}

inline double evaluate_bound(BoundId id, double length) {
    switch (id) {
        case BoundId::Quad: return quadratic_bound(length).simple;
        case BoundId::QuadRaw: return quadratic_bound(length).raw;
        case BoundId::Detailed: return detailed_bound(length);
        case BoundId::Power457: return power_bound(length);
    }
    throw BadParameter("unknown bound id");
}

inline double bound_domain_min(BoundId id) {
    switch (id) {
        case BoundId::Quad:
        case BoundId::QuadRaw: return 2.0 * kPi;
        case BoundId::Detailed: return kDetailedDomainMin;
        case BoundId::Power457: return 0.0;
    }
    return 0.0;
}

namespace detail {

// Golden-section maximizer on [lo, hi] to relative tolerance 1e-10.
inline double golden_max(const std::function<double(double)>& f, double lo, double hi) {
    const double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > 1e-10 * std::max(1.0, std::fabs(a) + std::fabs(b))) {
        if (f1 < f2) {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + inv_phi * (b - a); f2 = f(x2);
        } else {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - inv_phi * (b - a); f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

} // namespace detail

/// Crossover of two bound curves inside [lo, hi]: the root of a(L) - b(L).
/// Transversal crossings are bisected to 1e-9 relative; curves that only
/// touch (within 1e-5 of the local bound scale) report the touching point.
/// Identically equal curves have no isolated crossover and raise
/// NoSignChange.
inline double crossover(BoundId bound_a, BoundId bound_b, double lo, double hi) {
    const double dom = std::max(bound_domain_min(bound_a), bound_domain_min(bound_b));
    lo = std::max(lo, dom);
    if (!(lo < hi)) throw BadParameter("empty crossover bracket after domain clipping");

    auto g = [&](double L) { return evaluate_bound(bound_a, L) - evaluate_bound(bound_b, L); };
    auto scale = [&](double L) {
        return std::max({std::fabs(evaluate_bound(bound_a, L)),
                         std::fabs(evaluate_bound(bound_b, L)), 1.0});
    };
    constexpr double kTouchTol = 1e-5;

    const double g_lo = g(lo), g_hi = g(hi);
    const bool lo_zero = std::fabs(g_lo) <= kTouchTol * scale(lo);
    const bool hi_zero = std::fabs(g_hi) <= kTouchTol * scale(hi);
    if (lo_zero && hi_zero) {
        throw NoSignChange("bounds coincide at both bracket ends; no isolated crossover");
    }
    if (lo_zero) return lo;
    if (hi_zero) return hi;

    if ((g_lo < 0.0) != (g_hi < 0.0)) {
        double a = lo, b = hi, ga = g_lo;
        while (b - a > 1e-9 * std::max(std::fabs(a), std::fabs(b))) {
            const double m = 0.5 * (a + b);
            const double gm = g(m);
            if (gm == 0.0) return m;
            if ((gm < 0.0) == (ga < 0.0)) {
                a = m; ga = gm;
            } else {
                b = m;
            }
        }
        return 0.5 * (a + b);
    }

    // Same sign at both ends: look for a tangency point where the curves
    // touch without crossing.
    const bool below = g_lo < 0.0;
    const double x = detail::golden_max(
        [&](double L) { return below ? g(L) : -g(L); }, lo, hi);
    if (std::fabs(g(x)) <= kTouchTol * scale(x)) return x;
    throw NoSignChange("bound difference keeps one sign over the bracket");
}

/// One sweep row: the detailed bound against its competitors at length L.
struct SweepRow {
    double length = 0.0;
    double detailed = 0.0;
    double quad = 0.0;
    double power_457 = 0.0;
    double ratio = 0.0;  // detailed / L^{4/3}
};

struct SweepResult {
    double argmax_length = 0.0;
    double max_ratio = 0.0;
    std::vector<SweepRow> rows;
};

/// Evaluate detailed_bound(L)/L^{4/3} on a log-spaced grid and refine the
/// maximum by golden section to 1e-6 relative.
inline SweepResult sweep_ratio(double l_min, double l_max, int steps) {
    if (!(l_min >= kDetailedDomainMin)) {
        throw BelowDomain("sweep needs l_min >= 104/3 + 2*pi");
    }
    if (!(l_min < l_max)) throw BadParameter("sweep needs l_min < l_max");
    if (steps < 2) throw BadParameter("sweep needs at least 2 steps");

    auto ratio = [](double L) { return detailed_bound(L) / pow_4_3(L); };

    SweepResult out;
    out.rows.resize(static_cast<std::size_t>(steps));
    const double log_lo = std::log(l_min), log_hi = std::log(l_max);
    int best_idx = 0;
    for (int i = 0; i < steps; ++i) {
        const double L = std::exp(log_lo + (log_hi - log_lo) * i / (steps - 1));
        SweepRow& row = out.rows[static_cast<std::size_t>(i)];
        row.length = L;
        row.detailed = detailed_bound(L);
        row.quad = 0.25 * L * L;
        row.power_457 = power_bound(L);
        row.ratio = row.detailed / pow_4_3(L);
        if (row.ratio > out.rows[static_cast<std::size_t>(best_idx)].ratio) best_idx = i;
    }
    const double lo = out.rows[static_cast<std::size_t>(std::max(0, best_idx - 1))].length;
    const double hi =
        out.rows[static_cast<std::size_t>(std::min(steps - 1, best_idx + 1))].length;
    out.argmax_length = detail::golden_max(ratio, lo, hi);
    out.max_ratio = ratio(out.argmax_length);
    return out;
}

} // namespace polyknot
