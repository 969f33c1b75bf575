#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "polyknot/energy.hpp"
#include "polyknot/geometry.hpp"
#include "polyknot/parallel.hpp"

namespace polyknot {

struct RelaxStep {
    int iteration = 0;
    double energy = 0.0;
    double gradient_norm = 0.0;
    double step_size = 0.0;
};

struct RelaxTrace {
    std::vector<RelaxStep> steps;
    PolylineKnot final_knot;
    bool converged = false;
};

/// Exact gradient of the discrete Mobius energy with respect to the vertex
/// positions. Every dependency is differentiated: node positions, node
/// weights, and the arclength coordinates entering arc(x, y) (including the
/// total length L on the far branch of the shorter-arc minimum).
inline std::vector<Vec3> energy_gradient(const PolylineKnot& k, const QuadratureConfig& cfg) {
    const detail::SampleSet s = detail::make_samples(k, cfg.subdivisions_per_edge);
    const std::size_t ns = s.size();
    const int n = k.size();
    const int m = cfg.subdivisions_per_edge;
    const double L = k.total_length();
    const double dist_floor2 = 1e-24 * k.diameter() * k.diameter();

    // Row-owned accumulators (disjoint writes).
    std::vector<Vec3> grad_pos(ns, Vec3::Zero());
    std::vector<double> grad_weight(ns, 0.0);

    // Arc-channel edge coefficients, accumulated per block of rows in
    // difference-array form so a pair costs O(1); merged in block order.
    constexpr std::size_t kRowsPerBlock = 32;
    const std::size_t blocks = (ns + kRowsPerBlock - 1) / kRowsPerBlock;
    struct ArcBlock {
        std::vector<double> diff;  // range part of the coefficient pattern
        std::vector<double> ends;  // fractional end-edge parts
        double sum_all = 0.0;      // coefficient applied to every edge
        bool degenerate = false;
    };
    std::vector<ArcBlock> arc_blocks(blocks);

    parallel::for_each_block(blocks, [&](std::size_t b) {
        ArcBlock& blk = arc_blocks[b];
        blk.diff.assign(static_cast<std::size_t>(n) + 1, 0.0);
        blk.ends.assign(static_cast<std::size_t>(n), 0.0);
        const std::size_t row_end = std::min(ns, (b + 1) * kRowsPerBlock);
        for (std::size_t i = b * kRowsPerBlock; i < row_end; ++i) {
            const Vec3 xi = s.position[i];
            const double wi = s.weight[i];
            Vec3 gpos = Vec3::Zero();
            parallel::CompensatedSum gw;
            for (std::size_t j = 0; j < ns; ++j) {
                if (j == i) continue;
                const Vec3 dvec = xi - s.position[j];
                const double d2 = dvec.squaredNorm();
                if (d2 < dist_floor2) blk.degenerate = true;
                const std::size_t lo = std::min(i, j), hi = std::max(i, j);
                const double fwd = s.arcpos[hi] - s.arcpos[lo];
                const bool near_branch = fwd <= L / 2.0;
                const double a = near_branch ? fwd : L - fwd;
                const double w = wi * s.weight[j];

                // position channel: d(1/d^2)/dx_i, counted for both ordered
                // pairs containing i
                gpos += (-4.0 * w / (d2 * d2)) * dvec;
                // weight channel: dE/dw_i
                gw.add(2.0 * s.weight[j] * (1.0 / d2 - 1.0 / (a * a)));

                // arc channel: dE/da = 4 w_i w_j / a^3 mapped onto the edge
                // lengths, applied once per unordered pair (in the row of
                // the larger index)
                if (j > i) continue;
                const double p = 4.0 * w / (a * a * a);
                const int e_lo = s.edge[lo], e_hi = s.edge[hi];
                const double f_lo = s.frac[lo], f_hi = s.frac[hi];
                if (std::fabs(2.0 * fwd - L) <= 1e-9 * L) {
                    // antipodal tie: min(fwd, L - fwd) has a kink here; use
                    // the symmetrized subgradient (1/2 on every edge) so
                    // symmetric configurations keep a symmetric gradient
                    blk.sum_all += 0.5 * p;
                    continue;
                }
                const double sign = near_branch ? 1.0 : -1.0;
                if (!near_branch) blk.sum_all += p;
                if (e_lo == e_hi) {
                    blk.ends[static_cast<std::size_t>(e_lo)] += sign * p * (f_hi - f_lo);
                } else {
                    blk.ends[static_cast<std::size_t>(e_lo)] += sign * p * (1.0 - f_lo);
                    blk.ends[static_cast<std::size_t>(e_hi)] += sign * p * f_hi;
                    if (e_hi > e_lo + 1) {
                        blk.diff[static_cast<std::size_t>(e_lo) + 1] += sign * p;
                        blk.diff[static_cast<std::size_t>(e_hi)] -= sign * p;
                    }
                }
            }
            grad_pos[i] = gpos;
            grad_weight[i] = gw.value();
        }
    });

    std::vector<double> diff(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> edge_coeff(static_cast<std::size_t>(n), 0.0);
    double sum_all = 0.0;
    bool degenerate = false;
    for (const ArcBlock& blk : arc_blocks) {
        for (std::size_t e = 0; e <= static_cast<std::size_t>(n); ++e) diff[e] += blk.diff[e];
        for (std::size_t e = 0; e < static_cast<std::size_t>(n); ++e)
            edge_coeff[e] += blk.ends[e];
        sum_all += blk.sum_all;
        degenerate = degenerate || blk.degenerate;
    }
    if (degenerate) {
        throw NonconvergentSample("a sample pair fell below 1e-12 of the diameter");
    }
    double running = 0.0;
    for (int e = 0; e < n; ++e) {
        running += diff[static_cast<std::size_t>(e)];
        edge_coeff[static_cast<std::size_t>(e)] += running + sum_all;
    }

    // weight channel onto edge lengths: interior nodes carry l_e/m, vertex
    // nodes carry (l_{e-1} + l_e) / (2m)
    for (std::size_t i = 0; i < ns; ++i) {
        const int e = s.edge[i];
        if (s.frac[i] > 0.0) {
            edge_coeff[static_cast<std::size_t>(e)] += grad_weight[i] / m;
        } else {
            edge_coeff[static_cast<std::size_t>((e + n - 1) % n)] +=
                grad_weight[i] / (2.0 * m);
            edge_coeff[static_cast<std::size_t>(e)] += grad_weight[i] / (2.0 * m);
        }
    }

    std::vector<Vec3> grad(static_cast<std::size_t>(n), Vec3::Zero());
    for (std::size_t i = 0; i < ns; ++i) {
        const int e = s.edge[i];
        const double f = s.frac[i];
        grad[static_cast<std::size_t>(e)] += (1.0 - f) * grad_pos[i];
        grad[static_cast<std::size_t>((e + 1) % n)] += f * grad_pos[i];
    }
    for (int e = 0; e < n; ++e) {
        const Vec3 u = k.unit_tangent(e);
        grad[static_cast<std::size_t>(e)] -= edge_coeff[static_cast<std::size_t>(e)] * u;
        grad[static_cast<std::size_t>((e + 1) % n)] +=
            edge_coeff[static_cast<std::size_t>(e)] * u;
    }
    return grad;
}

namespace detail {

inline double total_energy(const PolylineKnot& k, const QuadratureConfig& cfg) {
    return mobius_energy(k, cfg, k.total_length() / 2.0).total;
}

} // namespace detail

/// Gradient descent with Armijo backtracking. Steps that break embeddedness
/// are rejected by the validating constructor and retried at half the step.
/// Stops when the gradient norm drops under 1e-6 * energy / diameter.
inline RelaxTrace relax(const PolylineKnot& knot, int max_steps, const QuadratureConfig& cfg) {
    constexpr double kArmijo = 1e-4;
    constexpr int kMaxBacktracks = 60;

    RelaxTrace trace{{}, knot, false};
    PolylineKnot current = knot;
    double energy = detail::total_energy(current, cfg);

    for (int it = 0; it <= max_steps; ++it) {
        const std::vector<Vec3> grad = energy_gradient(current, cfg);
        double g2 = 0.0, gmax = 0.0;
        for (const Vec3& g : grad) {
            g2 += g.squaredNorm();
            gmax = std::max(gmax, g.norm());
        }
        const double gnorm = std::sqrt(g2);
        const double stop = 1e-6 * energy / current.diameter();

        if (gnorm <= stop || it == max_steps) {
            // terminal record: current state, no step taken
            trace.steps.push_back({it, energy, gnorm, 0.0});
            trace.converged = gnorm <= stop;
            break;
        }

        const double energy_before = energy;
        double alpha = 0.01 * current.diameter() / gmax;
        bool accepted = false;
        for (int bt = 0; bt < kMaxBacktracks; ++bt) {
            std::vector<Vec3> trial = current.vertices();
            for (std::size_t v = 0; v < trial.size(); ++v) trial[v] -= alpha * grad[v];
            try {
                PolylineKnot candidate = PolylineKnot::build(std::move(trial), current.name());
                const double trial_energy = detail::total_energy(candidate, cfg);
                if (trial_energy <= energy - kArmijo * alpha * g2) {
                    current = std::move(candidate);
                    energy = trial_energy;
                    accepted = true;
                    break;
                }
            } catch (const Error&) {
                // embeddedness lost or samples collapsed: shorten the step
            }
            alpha *= 0.5;
        }
        trace.steps.push_back({it, energy_before, gnorm, accepted ? alpha : 0.0});
        if (!accepted) break;  // no descent step available at any scale
    }
    trace.final_knot = current;
    return trace;
}

} // namespace polyknot
