#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyknot/bounds.hpp"
#include "polyknot/energy.hpp"
#include "polyknot/geometry.hpp"
#include "polyknot/relax.hpp"
#include "polyknot/thickness.hpp"
#include "polyknot/verify.hpp"

namespace polyknot {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Shortest string with 17 significant digits; round-trips any double.
inline std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// ---- knot files -----------------------------------------------------------
// JSON: {"name": string, "vertices": [[x,y,z], ...]}, closure implicit.
// XYZ: one "x y z" triple per line.

inline std::string knot_to_json_text(const PolylineKnot& k) {
    std::ostringstream os;
    os << "{\n  \"name\": " << json(k.name()).dump() << ",\n  \"vertices\": [\n";
    const auto& vs = k.vertices();
    for (std::size_t i = 0; i < vs.size(); ++i) {
        os << "    [" << fmt17(vs[i].x()) << ", " << fmt17(vs[i].y()) << ", "
           << fmt17(vs[i].z()) << "]" << (i + 1 < vs.size() ? "," : "") << "\n";
    }
    os << "  ]\n}\n";
    return os.str();
}

inline std::string knot_to_xyz_text(const PolylineKnot& k) {
    std::ostringstream os;
    for (const Vec3& v : k.vertices()) {
        os << fmt17(v.x()) << " " << fmt17(v.y()) << " " << fmt17(v.z()) << "\n";
    }
    return os.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

inline void write_knot(const PolylineKnot& k, const std::string& path) {
    if (ends_with(path, ".xyz") || ends_with(path, ".txt")) {
        write_text_file(path, knot_to_xyz_text(k));
    } else {
        write_text_file(path, knot_to_json_text(k));
    }
}

inline PolylineKnot knot_from_json_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(origin + ": invalid JSON: " + e.what());
    }
    if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array()) {
        throw IoError(origin + ": expected an object with a \"vertices\" array");
    }
    std::vector<Vec3> vs;
    for (const auto& row : j["vertices"]) {
        if (!row.is_array() || row.size() != 3) {
            throw IoError(origin + ": each vertex must be [x, y, z]");
        }
        vs.emplace_back(row[0].get<double>(), row[1].get<double>(), row[2].get<double>());
    }
    const std::string name = j.value("name", std::string{});
    return build_knot(std::move(vs), name);
}

inline PolylineKnot knot_from_xyz_text(const std::string& text, const std::string& origin) {
    std::vector<Vec3> vs;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        double x, y, z;
        if (!(ls >> x >> y >> z)) {
            throw IoError(origin + ": bad XYZ line: \"" + line + "\"");
        }
        vs.emplace_back(x, y, z);
    }
    return build_knot(std::move(vs));
}

inline PolylineKnot read_knot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    if (ends_with(path, ".xyz") || ends_with(path, ".txt")) {
        return knot_from_xyz_text(text, path);
    }
    return knot_from_json_text(text, path);
}

// ---- report serialization ---------------------------------------------------

inline json finite_or_null(double x) {
    if (std::isfinite(x)) return x;
    return nullptr;
}

inline json to_json(const EnergyBreakdown& e) {
    return json{{"e_prox", e.e_prox},
                {"e_dist", e.e_dist},
                {"e_reg", e.e_reg},
                {"total", e.total},
                {"threshold_arc", e.threshold_arc},
                {"sample_count", e.sample_count}};
}

inline json to_json(const ArcPoint& p) {
    return json{{"s", p.s},
                {"position", {p.position.x(), p.position.y(), p.position.z()}},
                {"edge_index", p.edge_index}};
}

inline json to_json(const ThicknessReport& t) {
    return json{{"min_rad", finite_or_null(t.min_rad)},
                {"minrad_vertex", t.minrad_vertex},
                {"dcsd", finite_or_null(t.dcsd)},
                {"dcsd_witness", {to_json(t.dcsd_witness_a), to_json(t.dcsd_witness_b)}},
                {"radius", finite_or_null(t.radius)},
                {"ropelength", finite_or_null(t.ropelength)}};
}

inline json to_json(const BoundReport& b) {
    json j{{"length", b.length}, {"power_457", b.power_457}, {"best", b.best}};
    j["p_value"] = b.p_value ? json(*b.p_value) : json(nullptr);
    j["quad_raw"] = b.quad_raw ? json(*b.quad_raw) : json(nullptr);
    j["quad"] = b.quad ? json(*b.quad) : json(nullptr);
    j["detailed"] = b.detailed ? json(*b.detailed) : json(nullptr);
    return j;
}

inline json to_json(const CheckResult& c) {
    return json{{"id", c.id},
                {"applicable", c.applicable},
                {"pass", c.pass},
                {"margin", finite_or_null(c.margin)},
                {"tolerance", c.tolerance},
                {"witness", c.witness}};
}

inline json to_json(const VerificationReport& r) {
    json checks = json::array();
    for (const CheckResult& c : r.checks) checks.push_back(to_json(c));
    return json{{"knot_name", r.knot_name},
                {"ropelength", r.ropelength},
                {"energy", to_json(r.energy)},
                {"writhe", r.writhe_value},
                {"total_curvature", r.total_curvature_value},
                {"checks", checks},
                {"overall", r.overall}};
}

/// Assemble the standard artifact envelope: schema version + the config that
/// produced the payload. Execution parameters (thread counts) are not part
/// of the config, so artifacts are reproducible across them.
inline std::string artifact_text(const json& payload, const json& config) {
    json j = payload;
    j["schema"] = kSchemaVersion;
    j["config"] = config;
    return j.dump(2) + "\n";
}

inline std::string sweep_to_csv(const SweepResult& sweep, const json& config) {
    std::ostringstream os;
    os << "# schema: " << kSchemaVersion << "\n";
    os << "# config: " << config.dump() << "\n";
    os << "# max_ratio: " << fmt17(sweep.max_ratio)
       << " at L = " << fmt17(sweep.argmax_length) << "\n";
    os << "L,detailed,quad,power_457,ratio\n";
    for (const SweepRow& r : sweep.rows) {
        os << fmt17(r.length) << "," << fmt17(r.detailed) << "," << fmt17(r.quad) << ","
           << fmt17(r.power_457) << "," << fmt17(r.ratio) << "\n";
    }
    return os.str();
}

inline std::string relax_trace_to_csv(const RelaxTrace& t, const json& config) {
    std::ostringstream os;
    os << "# schema: " << kSchemaVersion << "\n";
    os << "# config: " << config.dump() << "\n";
    os << "iteration,energy,gradient_norm,step_size\n";
    for (const RelaxStep& s : t.steps) {
        os << s.iteration << "," << fmt17(s.energy) << "," << fmt17(s.gradient_norm) << ","
           << fmt17(s.step_size) << "\n";
    }
    return os.str();
}

/// Human-readable verification table.
inline void print_verification_table(const VerificationReport& r, std::ostream& os) {
    os << "knot: " << r.knot_name << "   ropelength: " << r.ropelength
       << "   mobius energy: " << r.energy.total << "\n";
    os << "writhe: " << r.writhe_value << "   total curvature: " << r.total_curvature_value
       << "\n";
    char buf[160];
    for (const CheckResult& c : r.checks) {
        if (!c.applicable) {
            std::snprintf(buf, sizeof(buf), "  [ -- ] %-24s %s", c.id.c_str(),
                          c.witness.c_str());
        } else {
            std::snprintf(buf, sizeof(buf), "  [%s] %-24s margin=%-12.5g %s",
                          c.pass ? "PASS" : "FAIL", c.id.c_str(), c.margin,
                          c.witness.c_str());
        }
        os << buf << "\n";
    }
    os << (r.overall ? "overall: PASS" : "overall: FAIL") << "\n";
}

} // namespace polyknot
