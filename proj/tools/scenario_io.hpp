#pragma once

// Scenario files: strict JSON in, ScenarioSpec out.  Unknown keys are errors
// at every nesting level so a typo never silently falls back to a default;
// missing sections do take documented defaults (plate, identity, unit
// material).  Numeric fields must be JSON numbers, never strings.

#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

#include "shellkit/scenario.hpp"

namespace shellkit::cli {

using nlohmann::json;

namespace detail {

[[noreturn]] inline void fail(const std::string& where, const std::string& what) {
    throw Error(ErrorCode::InvalidInput, where + ": " + what);
}

inline void expect_keys(const json& j, const std::string& where,
                        std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(where, "expected an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) {
                known = true;
                break;
            }
        if (!known) fail(where, "unknown key '" + item.key() + "'");
    }
}

inline double num(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<double>();
}

inline std::string str(const json& j, const std::string& where) {
    if (!j.is_string()) fail(where, "expected a string");
    return j.get<std::string>();
}

inline Vec3 vec3(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) fail(where, "expected an array of 3 numbers");
    return {num(j[0], where), num(j[1], where), num(j[2], where)};
}

inline std::vector<std::vector<double>> coeff_table(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of coefficient rows");
    std::vector<std::vector<double>> t;
    for (size_t i = 0; i < j.size(); ++i) {
        const json& row = j[i];
        if (!row.is_array()) fail(where, "row " + std::to_string(i) + " is not an array");
        std::vector<double> r;
        for (size_t k = 0; k < row.size(); ++k)
            r.push_back(num(row[k], where + "[" + std::to_string(i) + "]"));
        t.push_back(std::move(r));
    }
    return t;
}

inline PolyCoeffs poly_coeffs(const json& j, const std::string& where) {
    expect_keys(j, where, {"c0", "c1", "c2"});
    PolyCoeffs p;
    if (j.contains("c0")) p.c0 = coeff_table(j["c0"], where + ".c0");
    if (j.contains("c1")) p.c1 = coeff_table(j["c1"], where + ".c1");
    if (j.contains("c2")) p.c2 = coeff_table(j["c2"], where + ".c2");
    return p;
}

inline Domain domain_of(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 ||
        !j[1].is_array() || j[1].size() != 2)
        fail(where, "expected [[lo1, hi1], [lo2, hi2]]");
    Domain d;
    d.lo1 = num(j[0][0], where);
    d.hi1 = num(j[0][1], where);
    d.lo2 = num(j[1][0], where);
    d.hi2 = num(j[1][1], where);
    if (!(d.lo1 < d.hi1 && d.lo2 < d.hi2)) fail(where, "bounds must be increasing");
    return d;
}

inline void parse_surface(const json& j, ScenarioSpec& spec) {
    expect_keys(j, "surface", {"kind", "params", "domain"});
    if (!j.contains("kind")) fail("surface", "missing 'kind'");
    spec.surface_kind = str(j["kind"], "surface.kind");
    if (j.contains("domain")) spec.domain = domain_of(j["domain"], "surface.domain");
    const json params = j.contains("params") ? j["params"] : json::object();
    const std::string& k = spec.surface_kind;
    if (k == "cylinder" || k == "sphere") {
        expect_keys(params, "surface.params", {"radius"});
        if (params.contains("radius")) spec.radius = num(params["radius"], "surface.params.radius");
    } else if (k == "rolled_plate") {
        expect_keys(params, "surface.params", {"rho"});
        if (params.contains("rho")) spec.surface_rho = num(params["rho"], "surface.params.rho");
    } else {
        // plate, polar_plate, and anything build_scenario will reject by name
        expect_keys(params, "surface.params", {});
    }
}

inline void parse_deformation(const json& j, ScenarioSpec& spec) {
    expect_keys(j, "deformation", {"kind", "params"});
    if (!j.contains("kind")) fail("deformation", "missing 'kind'");
    spec.deformation_kind = str(j["kind"], "deformation.kind");
    const json params = j.contains("params") ? j["params"] : json::object();
    const std::string& k = spec.deformation_kind;
    const std::string where = "deformation.params";
    if (k == "rigid") {
        expect_keys(params, where, {"axis", "angle", "shift"});
        if (params.contains("axis")) spec.rigid_axis = vec3(params["axis"], where + ".axis");
        if (params.contains("angle")) spec.rigid_angle = num(params["angle"], where + ".angle");
        if (params.contains("shift")) spec.rigid_shift = vec3(params["shift"], where + ".shift");
    } else if (k == "scale") {
        expect_keys(params, where, {"alpha"});
        if (params.contains("alpha")) spec.alpha = num(params["alpha"], where + ".alpha");
    } else if (k == "radial_expansion") {
        expect_keys(params, where, {"epsilon"});
        if (params.contains("epsilon"))
            spec.epsilon = num(params["epsilon"], where + ".epsilon");
    } else if (k == "isometric_roll") {
        expect_keys(params, where, {"rho"});
        if (params.contains("rho")) spec.roll_rho = num(params["rho"], where + ".rho");
    } else if (k == "polynomial") {
        spec.v_poly = poly_coeffs(params, where);
    } else if (k == "drill") {
        expect_keys(params, where, {"theta"});
        if (params.contains("theta")) {
            const Vec3 t = vec3(params["theta"], where + ".theta");
            spec.drill_theta[0] = t[0];
            spec.drill_theta[1] = t[1];
            spec.drill_theta[2] = t[2];
        }
    } else if (k == "generic") {
        expect_keys(params, where, {"v", "theta"});
        if (params.contains("v")) spec.v_poly = poly_coeffs(params["v"], where + ".v");
        if (params.contains("theta"))
            spec.theta_poly = poly_coeffs(params["theta"], where + ".theta");
    } else {
        // identity and unknown kinds carry no parameters
        expect_keys(params, where, {});
    }
}

inline void parse_rotation(const json& j, ScenarioSpec& spec) {
    expect_keys(j, "rotation", {"kind", "params"});
    if (!j.contains("kind")) fail("rotation", "missing 'kind'");
    spec.rotation_kind = str(j["kind"], "rotation.kind");
    const json params = j.contains("params") ? j["params"] : json::object();
    const std::string& k = spec.rotation_kind;
    const std::string where = "rotation.params";
    if (k == "constant") {
        expect_keys(params, where, {"axis", "angle"});
        if (params.contains("axis")) spec.rotation_axis = vec3(params["axis"], where + ".axis");
        if (params.contains("angle"))
            spec.rotation_angle = num(params["angle"], where + ".angle");
    } else if (k == "drill") {
        expect_keys(params, where, {"theta"});
        if (params.contains("theta")) {
            const Vec3 t = vec3(params["theta"], where + ".theta");
            spec.rotation_drill_theta[0] = t[0];
            spec.rotation_drill_theta[1] = t[1];
            spec.rotation_drill_theta[2] = t[2];
        }
    } else if (k == "exp_poly") {
        spec.rotation_poly = poly_coeffs(params, where);
    } else {
        expect_keys(params, where, {});
    }
}

inline void parse_material(const json& j, ScenarioSpec& spec) {
    expect_keys(j, "material", {"mu", "lambda", "mu_c", "L_c", "b1", "b2", "b3", "h"});
    for (const char* k : {"mu", "lambda", "mu_c", "L_c", "b1", "b2", "b3", "h"})
        if (!j.contains(k)) fail("material", std::string("missing '") + k + "'");
    spec.material = MaterialParams(
        num(j["mu"], "material.mu"), num(j["lambda"], "material.lambda"),
        num(j["mu_c"], "material.mu_c"), num(j["L_c"], "material.L_c"),
        num(j["b1"], "material.b1"), num(j["b2"], "material.b2"),
        num(j["b3"], "material.b3"), num(j["h"], "material.h"));
}

}  // namespace detail

inline ScenarioSpec parse_scenario(const json& j) {
    using detail::fail;
    detail::expect_keys(j, "scenario",
                        {"schema_version", "name", "surface", "deformation", "rotation",
                         "material", "sample_points", "load", "bc"});
    if (!j.contains("schema_version")) fail("scenario", "missing 'schema_version'");
    if (!j["schema_version"].is_number_integer() || j["schema_version"].get<int>() != 1)
        fail("scenario", "unsupported schema_version (expected 1)");

    ScenarioSpec spec;
    if (j.contains("name")) spec.name = detail::str(j["name"], "name");
    if (j.contains("surface")) detail::parse_surface(j["surface"], spec);
    if (j.contains("deformation")) detail::parse_deformation(j["deformation"], spec);
    if (j.contains("rotation")) detail::parse_rotation(j["rotation"], spec);
    if (j.contains("material")) detail::parse_material(j["material"], spec);
    if (j.contains("sample_points")) {
        const json& pts = j["sample_points"];
        if (!pts.is_array()) fail("sample_points", "expected an array of [x1, x2] pairs");
        for (size_t i = 0; i < pts.size(); ++i) {
            const json& p = pts[i];
            const std::string where = "sample_points[" + std::to_string(i) + "]";
            if (!p.is_array() || p.size() != 2) fail(where, "expected [x1, x2]");
            spec.sample_points.push_back({detail::num(p[0], where), detail::num(p[1], where)});
        }
    }
    if (j.contains("load")) spec.load = detail::poly_coeffs(j["load"], "load");
    if (j.contains("bc")) spec.bc = detail::poly_coeffs(j["bc"], "bc");
    return spec;
}

inline ScenarioSpec load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) detail::fail(path, "cannot open scenario file");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        detail::fail(path, e.what());
    }
    return parse_scenario(j);
}

}  // namespace shellkit::cli
