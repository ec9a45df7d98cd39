// btparam: generate, analyze, parametrize, verify, and render
// bounded-turning curves from the command line.
//
// Exit codes: 0 success, 1 a verification check failed, 2 bad input.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <btparam/btparam.hpp>

namespace {

using btparam::json;

void emit_error(const std::string& code, const std::string& message) {
    json e;
    e["error"] = code;
    e["message"] = message;
    std::cerr << e.dump() << "\n";
}

// Writes to the path, or stdout when the path is empty or "-".
void put(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    btparam::detail::write_file(path, content);
}

std::string utc_timestamp() {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bounded-turning curve parametrization toolkit"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "emit a fixture curve as JSON");
    btparam::GeneratorSpec spec;
    std::string gen_out;
    gen->add_option("--kind", spec.kind,
                    "circle | regular_polygon | square | segment | l_arc | koch | "
                    "snowflake_family | random_bt")
        ->required();
    gen->add_option("--count", spec.count, "vertex count (circle, regular_polygon, segment, random_bt)");
    gen->add_option("--level", spec.level, "recursion level (koch, snowflake_family)");
    gen->add_option("--p", spec.p, "displacement parameter in (0, 1/2) (snowflake_family)");
    gen->add_option("--gen-seed", spec.seed, "generator seed (random_bt)");
    gen->add_option("--cap", spec.cap, "displacement cap in [0, 1/2) (random_bt)");
    gen->add_option("-o,--output", gen_out, "output path (default stdout)");

    // shared analysis knobs
    std::string in_path, out_path;
    std::size_t depth = 4, samples = 10000, resolution = 0;
    std::uint64_t seed = 0;
    double tol = 1e-6;

    auto* ana = app.add_subcommand("analyze", "measure bounded-turning constants");
    ana->add_option("-i,--input", in_path, "curve file (.json or .csv)")->required();
    ana->add_option("--samples", samples, "sample count");
    ana->add_option("--seed", seed, "sampling seed");
    ana->add_option("--resolution", resolution, "pair budget for the turning constant (default samples)");
    ana->add_option("-o,--output", out_path, "output path (default stdout)");

    auto* par = app.add_subcommand("parametrize", "build and export the subdivision hierarchy");
    std::string bp_out;
    par->add_option("-i,--input", in_path, "curve file (.json or .csv)")->required();
    par->add_option("--depth", depth, "hierarchy depth");
    par->add_option("--tol", tol, "division tolerance");
    par->add_option("-o,--output", out_path, "hierarchy JSON path (default stdout)");
    par->add_option("--breakpoints", bp_out, "also write the breakpoint table CSV here");

    auto* ver = app.add_subcommand("verify", "run the full certification and report");
    bool no_timestamp = false;
    ver->add_option("-i,--input", in_path, "curve file (.json or .csv)")->required();
    ver->add_option("--depth", depth, "hierarchy depth");
    ver->add_option("--samples", samples, "sample count per check");
    ver->add_option("--seed", seed, "sampling seed");
    ver->add_option("--tol", tol, "tolerance for the soft bounds");
    ver->add_option("--resolution", resolution, "pair budget for the turning constant (default samples)");
    ver->add_option("-o,--output", out_path, "report path (default stdout)");
    ver->add_flag("--no-timestamp", no_timestamp, "omit the timestamp field (comparison mode)");

    auto* ren = app.add_subcommand("render", "draw the curve and subdivision points as SVG");
    std::size_t render_levels = 2;
    ren->add_option("-i,--input", in_path, "curve file (.json, embedded planar)")->required();
    ren->add_option("--depth", depth, "hierarchy depth to build");
    ren->add_option("--level", render_levels, "show breakpoints down to this level (0 = curve only)");
    ren->add_option("-o,--output", out_path, "SVG path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error("bad_params", e.what());
        return 2;
    }

    try {
        if (*gen) {
            btparam::JordanCurve curve = btparam::generate_curve(spec);
            put(gen_out, btparam::curve_to_json(curve).dump(2) + "\n");
            return 0;
        }

        btparam::JordanCurve curve = btparam::load_curve(in_path);

        if (*ana) {
            std::size_t res = resolution ? resolution : samples;
            json j;
            j["vertex_count"] = curve.size();
            j["closed"] = curve.closed();
            j["diameter"] = curve.diameter();
            j["c_original"] = btparam::bounded_turning_constant(
                curve, res, btparam::mix_seed(seed, btparam::stream::bt_original));
            btparam::JordanCurve dd = btparam::remetrize_dd(curve);
            j["c_dd"] = btparam::bounded_turning_constant(
                dd, res, btparam::mix_seed(seed, btparam::stream::bt_dd));
            put(out_path, j.dump(2) + "\n");
            return 0;
        }

        if (*par) {
            btparam::Parametrization p = btparam::build_parametrization(curve, depth, tol);
            put(out_path, btparam::hierarchy_to_json(p).dump(2) + "\n");
            if (!bp_out.empty()) btparam::detail::write_file(bp_out, btparam::breakpoint_table_csv(p));
            return 0;
        }

        if (*ver) {
            btparam::CertifyConfig cfg;
            cfg.depth = depth;
            cfg.samples = samples;
            cfg.seed = seed;
            cfg.tol = tol;
            cfg.resolution = resolution;
            btparam::CertificationReport rep = btparam::certify(curve, cfg);
            json j = btparam::report_to_json(rep);
            if (!no_timestamp) j["timestamp"] = utc_timestamp();
            put(out_path, j.dump(2) + "\n");
            if (!rep.all_pass()) {
                for (const auto& [name, ok] : rep.pass_flags)
                    if (!ok) std::cerr << "check failed: " << name << "\n";
                for (const std::string& e : rep.errors) std::cerr << "stage error: " << e << "\n";
                return 1;
            }
            return 0;
        }

        if (*ren) {
            if (render_levels == 0) {
                put(out_path, btparam::render_svg(curve));
            } else {
                btparam::Parametrization p =
                    btparam::build_parametrization(curve, std::max(depth, render_levels), tol);
                put(out_path, btparam::render_svg(curve, &p, render_levels));
            }
            return 0;
        }
    } catch (const btparam::Error& e) {
        emit_error(e.code_name(), e.what());
        return 2;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return 2;
    }
    return 0;
}
