#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "polyknot/bounds.hpp"
#include "polyknot/energy.hpp"
#include "polyknot/geometry.hpp"
#include "polyknot/thickness.hpp"

namespace polyknot {

/// Outcome of one inequality check. Geometric checks carry slack
/// proportional to the mesh (polygonal chords undercut smooth ones near
/// corners); closed-form bound checks get 1e-9 relative slack. `margin` is
/// the raw worst margin before slack; pass means margin >= -tolerance.
/// Checks whose hypotheses the knot does not meet report applicable = false
/// and do not affect the verdict.
struct CheckResult {
    std::string id;
    bool applicable = true;
    bool pass = true;
    double margin = std::numeric_limits<double>::infinity();
    double tolerance = 0.0;
    std::string witness;
};

struct VerificationReport {
    std::string knot_name;
    double ropelength = 0.0;
    EnergyBreakdown energy;
    double writhe_value = 0.0;
    double total_curvature_value = 0.0;
    std::vector<CheckResult> checks;
    bool overall = true;
};

struct VerifyConfig {
    QuadratureConfig quadrature;
    int chord_samples = 256;   // arclength samples for the chord checks
    int basepoints = 16;       // basepoints for the per-point distal checks
    int radii_count = 64;      // radii for the shell occupancy curve
    int occupancy_samples = 8192;  // target sample count along the curve
};

namespace detail {

inline std::string pair_witness(double s, double t, double value) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "s=%.6g t=%.6g value=%.9g", s, t, value);
    return buf;
}

} // namespace detail

/// Chord comparison against the unit circle (Schur): on a curve normalized
/// to thickness 1, points with arc separation a <= pi stay at least the
/// circle chord 2 sin(a/2) apart.
inline CheckResult check_schur(const PolylineKnot& normalized, int samples) {
    const double L = normalized.total_length();
    CheckResult r;
    r.id = "schur-chord";
    r.tolerance = 1e-6 + 2.0 * normalized.max_edge_length();
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const ArcPoint pi_ = point_at(normalized, i * L / samples);
        for (int j = i + 1; j < samples; ++j) {
            const ArcPoint pj = point_at(normalized, j * L / samples);
            const double a = arc_distance(normalized, pi_.s, pj.s);
            if (a > kPi) continue;
            const double chord = (pi_.position - pj.position).norm();
            const double margin = chord - 2.0 * std::sin(a / 2.0);
            if (margin < worst) {
                worst = margin;
                r.witness = detail::pair_witness(pi_.s, pj.s, chord);
            }
        }
    }
    r.margin = worst;
    r.pass = !(worst < -r.tolerance);
    return r;
}

/// Distal chord floor: on a curve normalized to thickness 1, points with
/// arc separation >= pi stay at least 2 apart.
inline CheckResult check_distal_chord_floor(const PolylineKnot& normalized, int samples) {
    const double L = normalized.total_length();
    CheckResult r;
    r.id = "distal-chord-floor";
    r.tolerance = 1e-6 + 2.0 * normalized.max_edge_length();
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const ArcPoint pi_ = point_at(normalized, i * L / samples);
        for (int j = i + 1; j < samples; ++j) {
            const ArcPoint pj = point_at(normalized, j * L / samples);
            if (arc_distance(normalized, pi_.s, pj.s) < kPi) continue;
            const double margin = (pi_.position - pj.position).norm() - 2.0;
            if (margin < worst) {
                worst = margin;
                r.witness = detail::pair_witness(pi_.s, pj.s, margin + 2.0);
            }
        }
    }
    if (!std::isfinite(worst)) {
        r.witness = "no pairs with arc >= pi";
        r.margin = std::numeric_limits<double>::infinity();
        r.pass = true;
        return r;
    }
    r.margin = worst;
    r.pass = !(worst < -r.tolerance);
    return r;
}

/// Proximal energy bound: e_prox <= (2/pi) L on a normalized knot with
/// threshold pi. Slack scales with L * mesh to absorb the quadrature bias.
inline CheckResult check_proximal_bound(const PolylineKnot& normalized,
                                        const EnergyBreakdown& energy) {
    const double L = normalized.total_length();
    CheckResult r;
    r.id = "proximal-energy";
    r.tolerance = 1e-6 + 0.75 * L * normalized.max_edge_length();
    r.margin = (2.0 / kPi) * L - energy.e_prox;
    r.pass = !(r.margin < -r.tolerance);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "e_prox=%.9g bound=%.9g", energy.e_prox, (2.0 / kPi) * L);
    r.witness = buf;
    return r;
}

/// Arclength of the distal part of the curve inside the ball of radius r
/// around the basepoint, for each requested radius.
struct OccupancyCurve {
    std::vector<double> radii;
    std::vector<double> occupancy;
    double sample_spacing = 0.0;
};

namespace detail {

struct FineSamples {
    std::vector<Vec3> position;
    std::vector<double> arcpos;
    std::vector<double> weight;
    double spacing = 0.0;
};

inline FineSamples fine_samples(const PolylineKnot& k, int target_count) {
    const int n = k.size();
    const int m = std::max(1, (target_count + n - 1) / n);
    FineSamples s;
    s.position.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(m));
    for (int e = 0; e < n; ++e) {
        const double len = k.edge_length(e);
        s.spacing = std::max(s.spacing, len / m);
        for (int j = 0; j < m; ++j) {
            const double f = (j + 0.5) / m;
            s.position.push_back(k.vertex(e) + f * k.edge_vector(e));
            s.arcpos.push_back(k.arc_prefix()[static_cast<std::size_t>(e)] + f * len);
            s.weight.push_back(len / m);
        }
    }
    return s;
}

} // namespace detail

inline OccupancyCurve shell_occupancy(const PolylineKnot& normalized,
                                      const ArcPoint& basepoint,
                                      const std::vector<double>& radii,
                                      int sample_target = 8192) {
    const double L = normalized.total_length();
    const detail::FineSamples s = detail::fine_samples(normalized, sample_target);
    OccupancyCurve out;
    out.radii = radii;
    out.occupancy.assign(radii.size(), 0.0);
    out.sample_spacing = s.spacing;
    for (std::size_t i = 0; i < s.position.size(); ++i) {
        double da = std::fabs(s.arcpos[i] - basepoint.s);
        if (da > L / 2.0) da = L - da;
        if (da < kPi) continue;
        const double d = (s.position[i] - basepoint.position).norm();
        for (std::size_t ri = 0; ri < radii.size(); ++ri) {
            if (d <= radii[ri]) out.occupancy[ri] += s.weight[i];
        }
    }
    return out;
}

/// Shell envelope audit at one basepoint: occupancy(r) <= ell_star[2, r] for
/// every radius in [2, L/2]. Not applicable below the envelope domain.
inline CheckResult check_shell_envelope(const PolylineKnot& normalized,
                                        const ArcPoint& basepoint, int radii_count,
                                        int sample_target = 8192) {
    const double L = normalized.total_length();
    CheckResult r;
    r.id = "shell-envelope";
    if (L < kDetailedDomainMin) {
        r.applicable = false;
        r.witness = "L below 104/3 + 2*pi; envelope undefined";
        return r;
    }
    std::vector<double> radii(static_cast<std::size_t>(radii_count));
    for (int i = 0; i < radii_count; ++i) {
        radii[static_cast<std::size_t>(i)] =
            2.0 + (L / 2.0 - 2.0) * i / (radii_count - 1);
    }
    const OccupancyCurve curve = shell_occupancy(normalized, basepoint, radii, sample_target);
    r.tolerance = 1e-6 + 2.0 * std::max(curve.sample_spacing, normalized.max_edge_length());
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double envelope = ell_star_upto(radii[i], L);
        const double margin = envelope - curve.occupancy[i];
        if (margin < worst) {
            worst = margin;
            char buf[96];
            std::snprintf(buf, sizeof(buf), "x=%.6g r=%.6g occ=%.9g env=%.9g",
                          basepoint.s, radii[i], curve.occupancy[i], envelope);
            r.witness = buf;
        }
    }
    r.margin = worst;
    r.pass = !(worst < -r.tolerance);
    return r;
}

/// Distal inner-integral audit at one basepoint: the quadrature of
/// 1/|x-y|^2 over the distal part must stay under the closed-form shell
/// bound. Not applicable below the envelope domain.
inline CheckResult check_distal_inner_integral(const PolylineKnot& normalized, const ArcPoint& basepoint,
                                 int sample_target = 8192) {
    const double L = normalized.total_length();
    CheckResult r;
    r.id = "distal-inner-integral";
    if (L < kDetailedDomainMin) {
        r.applicable = false;
        r.witness = "L below 104/3 + 2*pi; bound undefined";
        return r;
    }
    const detail::FineSamples s = detail::fine_samples(normalized, sample_target);
    parallel::CompensatedSum acc;
    for (std::size_t i = 0; i < s.position.size(); ++i) {
        double da = std::fabs(s.arcpos[i] - basepoint.s);
        if (da > L / 2.0) da = L - da;
        if (da < kPi) continue;
        const double d2 = (s.position[i] - basepoint.position).squaredNorm();
        acc.add(s.weight[i] / d2);
    }
    const double bound = distal_inner_bound(L);
    r.tolerance = 1e-6 + 0.25 * normalized.max_edge_length();
    r.margin = bound - acc.value();
    r.pass = !(r.margin < -r.tolerance);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "x=%.6g integral=%.9g bound=%.9g",
                  basepoint.s, acc.value(), bound);
    r.witness = buf;
    return r;
}

namespace detail {

inline CheckResult bound_check(const std::string& id, double value, double bound,
                               bool applicable = true, const std::string& note = "") {
    CheckResult r;
    r.id = id;
    r.applicable = applicable;
    if (!applicable) {
        r.witness = note;
        return r;
    }
    r.tolerance = 1e-9 * std::max(1.0, std::fabs(bound));
    r.margin = bound - value;
    r.pass = !(r.margin < -r.tolerance);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "value=%.9g bound=%.9g", value, bound);
    r.witness = buf;
    return r;
}

} // namespace detail

/// Full audit of one knot: normalize to unit thickness, evaluate the energy
/// decomposition, then run every chord-level and energy-level inequality.
inline VerificationReport verify_knot(const PolylineKnot& knot,
                                      const VerifyConfig& cfg = {}) {
    VerificationReport rep;
    rep.knot_name = knot.name().empty() ? "knot" : knot.name();

    const ThicknessReport th = thickness(knot);
    rep.ropelength = th.ropelength;
    const PolylineKnot norm = scaled(knot, 1.0 / th.radius);
    const double L = norm.total_length();

    rep.energy = mobius_energy(norm, cfg.quadrature, kPi);
    rep.writhe_value = writhe(norm);
    rep.total_curvature_value = total_curvature(norm);

    rep.checks.push_back(check_schur(norm, cfg.chord_samples));
    rep.checks.push_back(check_distal_chord_floor(norm, cfg.chord_samples));
    rep.checks.push_back(check_proximal_bound(norm, rep.energy));

    // Per-basepoint distal checks; keep the worst margin of each family.
    // The domain gate is a property of L alone, so probing one basepoint
    // decides applicability for all of them.
    CheckResult shell_worst = check_shell_envelope(norm, point_at(norm, 0.0),
                                                   cfg.radii_count, cfg.occupancy_samples);
    CheckResult ix_worst = check_distal_inner_integral(norm, point_at(norm, 0.0), cfg.occupancy_samples);
    if (shell_worst.applicable) {
        for (int b = 1; b < cfg.basepoints; ++b) {
            const ArcPoint x = point_at(norm, b * L / cfg.basepoints);
            const CheckResult sh =
                check_shell_envelope(norm, x, cfg.radii_count, cfg.occupancy_samples);
            if (sh.margin < shell_worst.margin) shell_worst = sh;
            const CheckResult ix = check_distal_inner_integral(norm, x, cfg.occupancy_samples);
            if (ix.margin < ix_worst.margin) ix_worst = ix;
        }
    }
    rep.checks.push_back(shell_worst);
    rep.checks.push_back(ix_worst);

    const double total = rep.energy.total;
    rep.checks.push_back(detail::bound_check(
        "quadratic-energy-bound", total, quadratic_bound(L).simple));
    rep.checks.push_back(detail::bound_check(
        "power-energy-bound", total, power_bound(L)));
    if (L >= kDetailedDomainMin) {
        rep.checks.push_back(detail::bound_check(
            "detailed-energy-bound", total, detailed_bound(L)));
    } else {
        rep.checks.push_back(detail::bound_check(
            "detailed-energy-bound", 0.0, 0.0, false,
            "L below 104/3 + 2*pi; detailed bound undefined"));
    }
    rep.checks.push_back(detail::bound_check(
        "writhe-power-bound", std::fabs(rep.writhe_value), 0.25 * pow_4_3(L)));
    rep.checks.push_back(detail::bound_check(
        "fenchel-total-curvature", 2.0 * kPi, rep.total_curvature_value + 1e-9));

    rep.overall = true;
    for (const CheckResult& c : rep.checks) {
        if (c.applicable && !c.pass) rep.overall = false;
    }
    return rep;
}

} // namespace polyknot
