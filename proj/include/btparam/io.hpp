#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "btparam/curve.hpp"
#include "btparam/error.hpp"
#include "btparam/parametrization.hpp"
#include "btparam/verification.hpp"

namespace btparam {

using json = nlohmann::json;

// Curve files: {"closed": bool, "points": [[x, y, ...], ...]} for embedded
// curves, {"closed": bool, "matrix": [[...], ...]} for abstract ones.
inline json curve_to_json(const JordanCurve& curve) {
    json j;
    j["closed"] = curve.closed();
    if (curve.embedded()) {
        json pts = json::array();
        for (std::size_t i = 0; i < curve.size(); ++i) {
            json row = json::array();
            for (double v : curve.vertex(i)) row.push_back(v);
            pts.push_back(std::move(row));
        }
        j["points"] = std::move(pts);
    } else {
        json m = json::array();
        for (std::size_t i = 0; i < curve.size(); ++i) {
            json row = json::array();
            for (std::size_t k = 0; k < curve.size(); ++k) row.push_back(curve.matrix_at(i, k));
            m.push_back(std::move(row));
        }
        j["matrix"] = std::move(m);
    }
    return j;
}

inline JordanCurve curve_from_json(const json& j) {
    if (!j.is_object() || !j.contains("closed"))
        fail(errc::parse_error, "curve JSON needs a 'closed' field");
    bool closed = j.at("closed").get<bool>();
    auto grid = [&](const json& rows) {
        std::vector<std::vector<double>> out;
        if (!rows.is_array()) fail(errc::parse_error, "expected an array of rows");
        for (const json& r : rows) {
            if (!r.is_array()) fail(errc::parse_error, "expected an array of numbers per row");
            std::vector<double> row;
            for (const json& v : r) {
                if (!v.is_number()) fail(errc::parse_error, "non-numeric entry in curve data");
                row.push_back(v.get<double>());
            }
            out.push_back(std::move(row));
        }
        return out;
    };
    if (j.contains("points")) return curve_from_points(grid(j.at("points")), closed);
    if (j.contains("matrix")) return curve_from_distance_matrix(grid(j.at("matrix")), closed);
    fail(errc::parse_error, "curve JSON needs 'points' or 'matrix'");
}

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::io_error, "cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::io_error, "cannot open '" + path + "' for writing");
    out << content;
    if (!out) fail(errc::io_error, "short write to '" + path + "'");
}

inline json parse_json(const std::string& text, const std::string& origin) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) fail(errc::parse_error, "invalid JSON in " + origin);
    return j;
}

} // namespace detail

// Header-free comma-separated square distance matrix.
inline JordanCurve load_distance_csv(const std::string& path, bool closed) {
    std::istringstream in(detail::read_file(path));
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                fail(errc::parse_error, "bad number '" + cell + "' in " + path);
            }
        }
        rows.push_back(std::move(row));
    }
    return curve_from_distance_matrix(rows, closed);
}

// Loads a curve by extension: .json for the curve format, .csv for a
// distance matrix (closed unless told otherwise).
inline JordanCurve load_curve(const std::string& path, bool csv_closed = true) {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
        return load_distance_csv(path, csv_closed);
    return curve_from_json(detail::parse_json(detail::read_file(path), path));
}

inline void save_curve(const JordanCurve& curve, const std::string& path) {
    detail::write_file(path, curve_to_json(curve).dump(2) + "\n");
}

// Full hierarchy export: per level the exact dyadic breakpoints (as
// "num/2^exp" strings), their float mirrors, and the curve-side data.
inline json hierarchy_to_json(const Parametrization& p) {
    json j;
    j["closed"] = p.curve.closed();
    j["depth"] = p.depth;
    j["curve_diameter"] = p.gamma.curve_diameter;
    json levels = json::array();
    for (std::size_t ix = 0; ix < p.depth; ++ix) {
        const CircleLevel& cl = p.circle.levels[ix];
        const GammaLevel& gl = p.gamma.levels[ix];
        json lv;
        lv["level"] = ix + 1;
        lv["delta"] = gl.delta;
        json bp = json::array(), bpf = json::array(), len = json::array();
        for (const Dyadic& b : cl.breakpoints) bp.push_back(b.str());
        for (double b : cl.breakpoints_f64) bpf.push_back(b);
        for (const Dyadic& l : cl.lengths) len.push_back(l.str());
        lv["breakpoints"] = std::move(bp);
        lv["breakpoints_float"] = std::move(bpf);
        lv["lengths"] = std::move(len);
        lv["gamma_endpoints"] = gl.endpoints;
        lv["gamma_diameters"] = gl.diameters;
        lv["parent"] = cl.parent;
        json mid = json::array();
        for (char m : cl.middle) mid.push_back(m != 0);
        lv["middle"] = std::move(mid);
        levels.push_back(std::move(lv));
    }
    j["levels"] = std::move(levels);
    return j;
}

// Flat table of every stored breakpoint and its image.
inline std::string breakpoint_table_csv(const Parametrization& p) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "level,j,s,s_float,a_param";
    for (std::size_t d = 0; d < p.curve.dim(); ++d) out << ",a_" << d;
    out << "\n";
    for (std::size_t ix = 0; ix < p.depth; ++ix) {
        const CircleLevel& cl = p.circle.levels[ix];
        const GammaLevel& gl = p.gamma.levels[ix];
        for (std::size_t j = 0; j < cl.breakpoints.size(); ++j) {
            out << (ix + 1) << "," << j << "," << cl.breakpoints[j].str() << ","
                << cl.breakpoints_f64[j] << "," << gl.endpoints[j];
            if (p.curve.embedded()) {
                double param = gl.endpoints[j];
                if (p.curve.closed() && param >= 1.0) param = 0.0;
                for (double v : p.curve.point_at(param)) out << "," << v;
            }
            out << "\n";
        }
    }
    return out.str();
}

inline json breakpoint_table_json(const Parametrization& p) {
    json rows = json::array();
    for (std::size_t ix = 0; ix < p.depth; ++ix) {
        const CircleLevel& cl = p.circle.levels[ix];
        const GammaLevel& gl = p.gamma.levels[ix];
        for (std::size_t j = 0; j < cl.breakpoints.size(); ++j) {
            json row;
            row["level"] = ix + 1;
            row["j"] = j;
            row["s"] = cl.breakpoints[j].str();
            row["s_float"] = cl.breakpoints_f64[j];
            row["a_param"] = gl.endpoints[j];
            if (p.curve.embedded()) {
                double param = gl.endpoints[j];
                if (p.curve.closed() && param >= 1.0) param = 0.0;
                row["a_coords"] = p.curve.point_at(param);
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

inline json report_to_json(const CertificationReport& r) {
    json j;
    j["vertex_count"] = r.vertex_count;
    j["closed"] = r.closed;
    j["depth"] = r.depth;
    j["samples"] = r.samples;
    j["seed"] = r.seed;
    j["resolution"] = r.resolution;
    j["curve_diameter"] = r.curve_diameter;
    j["c_original"] = r.c_original;
    j["c_dd"] = r.c_dd;
    j["dd_triangle_max_violation"] = r.dd_triangle_max_violation;
    j["dd_diam_identity_max_error"] = r.dd_diam_identity_max_error;
    j["level1_min_norm"] = r.level1_min_norm;
    j["level1_max_norm"] = r.level1_max_norm;
    j["same_level_min_ratio"] = r.same_level_min_ratio;
    j["same_level_max_ratio"] = r.same_level_max_ratio;
    j["child_parent_min_ratio"] = r.child_parent_min_ratio;
    j["child_parent_max_ratio"] = r.child_parent_max_ratio;
    j["min_child_count"] = r.min_child_count;
    json mods = json::array();
    for (const ModulusSummary& m : r.modulus) {
        json mj;
        mj["level"] = m.level;
        mj["max_image_distance"] = m.max_image_distance;
        mj["bound"] = m.bound;
        mj["pairs"] = m.pairs;
        mj["adjacent_ok"] = m.adjacent_ok;
        mods.push_back(std::move(mj));
    }
    j["modulus"] = std::move(mods);
    j["max_ratio_lemma6"] = r.max_ratio_lemma6;
    j["interval_used"] = r.interval_used;
    j["interval_skipped"] = r.interval_skipped;
    j["max_level_gap"] = r.max_level_gap;
    j["gap_used"] = r.gap_used;
    j["gap_skipped"] = r.gap_skipped;
    j["exhaustive_gap_checked"] = r.exhaustive_gap_checked;
    j["max_level_gap_exhaustive"] = r.max_level_gap_exhaustive;
    j["h_emp_dd"] = r.h_emp_dd;
    j["h_emp_original"] = r.h_emp_original;
    j["h_sym"] = r.h_sym;
    j["h_bound"] = r.h_bound;
    j["eq4_implied_dd"] = r.eq4_implied_dd;
    j["eq4_implied_original"] = r.eq4_implied_original;
    j["wqs_used_dd"] = r.wqs_used_dd;
    j["wqs_skipped_dd"] = r.wqs_skipped_dd;
    j["wqs_used_original"] = r.wqs_used_original;
    j["wqs_skipped_original"] = r.wqs_skipped_original;
    j["pass_flags"] = r.pass_flags;
    j["errors"] = r.errors;
    j["all_pass"] = r.all_pass();
    return j;
}

inline CertificationReport report_from_json(const json& j) {
    CertificationReport r;
    try {
        r.vertex_count = j.at("vertex_count").get<std::size_t>();
        r.closed = j.at("closed").get<bool>();
        r.depth = j.at("depth").get<std::size_t>();
        r.samples = j.at("samples").get<std::size_t>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.resolution = j.at("resolution").get<std::size_t>();
        r.curve_diameter = j.at("curve_diameter").get<double>();
        r.c_original = j.at("c_original").get<double>();
        r.c_dd = j.at("c_dd").get<double>();
        r.dd_triangle_max_violation = j.at("dd_triangle_max_violation").get<double>();
        r.dd_diam_identity_max_error = j.at("dd_diam_identity_max_error").get<double>();
        r.level1_min_norm = j.at("level1_min_norm").get<double>();
        r.level1_max_norm = j.at("level1_max_norm").get<double>();
        r.same_level_min_ratio = j.at("same_level_min_ratio").get<double>();
        r.same_level_max_ratio = j.at("same_level_max_ratio").get<double>();
        r.child_parent_min_ratio = j.at("child_parent_min_ratio").get<double>();
        r.child_parent_max_ratio = j.at("child_parent_max_ratio").get<double>();
        r.min_child_count = j.at("min_child_count").get<std::size_t>();
        for (const json& mj : j.at("modulus")) {
            ModulusSummary m;
            m.level = mj.at("level").get<std::size_t>();
            m.max_image_distance = mj.at("max_image_distance").get<double>();
            m.bound = mj.at("bound").get<double>();
            m.pairs = mj.at("pairs").get<std::size_t>();
            m.adjacent_ok = mj.at("adjacent_ok").get<bool>();
            r.modulus.push_back(m);
        }
        r.max_ratio_lemma6 = j.at("max_ratio_lemma6").get<double>();
        r.interval_used = j.at("interval_used").get<std::size_t>();
        r.interval_skipped = j.at("interval_skipped").get<std::size_t>();
        r.max_level_gap = j.at("max_level_gap").get<std::size_t>();
        r.gap_used = j.at("gap_used").get<std::size_t>();
        r.gap_skipped = j.at("gap_skipped").get<std::size_t>();
        r.exhaustive_gap_checked = j.at("exhaustive_gap_checked").get<bool>();
        r.max_level_gap_exhaustive = j.at("max_level_gap_exhaustive").get<std::size_t>();
        r.h_emp_dd = j.at("h_emp_dd").get<double>();
        r.h_emp_original = j.at("h_emp_original").get<double>();
        r.h_sym = j.at("h_sym").get<double>();
        r.h_bound = j.at("h_bound").get<double>();
        r.eq4_implied_dd = j.at("eq4_implied_dd").get<double>();
        r.eq4_implied_original = j.at("eq4_implied_original").get<double>();
        r.wqs_used_dd = j.at("wqs_used_dd").get<std::size_t>();
        r.wqs_skipped_dd = j.at("wqs_skipped_dd").get<std::size_t>();
        r.wqs_used_original = j.at("wqs_used_original").get<std::size_t>();
        r.wqs_skipped_original = j.at("wqs_skipped_original").get<std::size_t>();
        r.pass_flags = j.at("pass_flags").get<std::map<std::string, bool>>();
        r.errors = j.at("errors").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        fail(errc::parse_error, std::string("report JSON: ") + e.what());
    }
    return r;
}

// SVG figure of an embedded planar curve, optionally with the subdivision
// breakpoints of the first `levels_to_show` levels color-coded by level and
// the basepoint marked.
inline std::string render_svg(const JordanCurve& curve, const Parametrization* p = nullptr,
                              std::size_t levels_to_show = 0) {
    if (!curve.embedded() || curve.dim() != 2)
        fail(errc::invalid_argument, "rendering needs an embedded planar curve");

    double min_x = curve.vertex(0)[0], max_x = min_x;
    double min_y = curve.vertex(0)[1], max_y = min_y;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        auto v = curve.vertex(i);
        min_x = std::min(min_x, v[0]);
        max_x = std::max(max_x, v[0]);
        min_y = std::min(min_y, v[1]);
        max_y = std::max(max_y, v[1]);
    }
    double w = max_x - min_x, h = max_y - min_y;
    double margin = 0.05 * std::max(w, h);
    double scale = 800.0 / std::max(w, h);
    auto X = [&](double x) { return (x - min_x + margin) * scale; };
    auto Y = [&](double y) { return (max_y - y + margin) * scale; }; // flip to screen coords

    std::ostringstream out;
    out << std::setprecision(8);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << (w + 2 * margin) * scale
        << " " << (h + 2 * margin) * scale << "\">\n";
    out << "<path fill=\"none\" stroke=\"#333\" stroke-width=\"1\" d=\"M";
    for (std::size_t i = 0; i < curve.size(); ++i) {
        auto v = curve.vertex(i);
        out << (i ? " L" : "") << X(v[0]) << " " << Y(v[1]);
    }
    if (curve.closed()) out << " Z";
    out << "\"/>\n";

    static const char* palette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b"};
    if (p && levels_to_show > 0) {
        std::size_t shown = std::min(levels_to_show, p->depth);
        for (std::size_t ix = 0; ix < shown; ++ix) {
            const GammaLevel& gl = p->gamma.levels[ix];
            const char* color = palette[ix % 6];
            double radius = std::max(1.5, 6.0 - 1.2 * static_cast<double>(ix));
            for (std::size_t j = 0; j + 1 < gl.endpoints.size(); ++j) {
                std::vector<double> pt = curve.point_at(gl.endpoints[j]);
                out << "<circle cx=\"" << X(pt[0]) << "\" cy=\"" << Y(pt[1]) << "\" r=\"" << radius
                    << "\" fill=\"" << color << "\" fill-opacity=\"0.7\"/>\n";
            }
        }
    }
    std::vector<double> base = curve.point_at(0.0);
    out << "<circle cx=\"" << X(base[0]) << "\" cy=\"" << Y(base[1])
        << "\" r=\"7\" fill=\"none\" stroke=\"#000\" stroke-width=\"2\"/>\n";
    out << "</svg>\n";
    return out.str();
}

} // namespace btparam
