#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "polyknot/geometry.hpp"

namespace testhelpers {

using polyknot::Vec3;

inline polyknot::PolylineKnot unit_square() {
    return polyknot::build_knot(
        {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)}, "square");
}

/// Planar stadium: two straight sides at y = +-cap_radius joined by
/// semicircular caps. Thickness radius equals cap_radius, total length
/// 2 * straight + 2 pi cap_radius.
inline polyknot::PolylineKnot stadium(double straight, double cap_radius, int n) {
    const double L = 2.0 * straight + 2.0 * polyknot::kPi * cap_radius;
    std::vector<Vec3> vs;
    vs.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double s = k * L / n;
        if (s < straight) {
            vs.emplace_back(s - straight / 2.0, -cap_radius, 0.0);
        } else if (s < straight + polyknot::kPi * cap_radius) {
            const double a = (s - straight) / cap_radius;
            vs.emplace_back(straight / 2.0 + cap_radius * std::sin(a),
                            -cap_radius * std::cos(a), 0.0);
        } else if (s < 2.0 * straight + polyknot::kPi * cap_radius) {
            const double t = s - straight - polyknot::kPi * cap_radius;
            vs.emplace_back(straight / 2.0 - t, cap_radius, 0.0);
        } else {
            const double a = (s - 2.0 * straight - polyknot::kPi * cap_radius) / cap_radius;
            vs.emplace_back(-straight / 2.0 - cap_radius * std::sin(a),
                            cap_radius * std::cos(a), 0.0);
        }
    }
    return polyknot::build_knot(std::move(vs), "stadium");
}

/// Stadium whose normalized length is close to the requested value.
inline polyknot::PolylineKnot stadium_of_length(double length, int n) {
    return stadium((length - 2.0 * polyknot::kPi) / 2.0, 1.0, n);
}

inline std::vector<double> random_doubles(std::uint64_t seed, int count, double lo, double hi) {
    std::mt19937_64 rng(seed);
    std::vector<double> out(static_cast<std::size_t>(count));
    for (double& x : out) {
        x = lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    }
    return out;
}

} // namespace testhelpers
