#include <catch2/catch_amalgamated.hpp>
#include <functional>

#include "shellkit/verify.hpp"

using namespace shellkit;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a throw");
    return ErrorCode::InvalidInput;
}

Scenario rigid_scenario(const std::string& surface) {
    ScenarioSpec spec;
    spec.surface_kind = surface;
    spec.deformation_kind = "rigid";
    spec.rigid_axis = {0.2, -0.7, 0.4};
    spec.rigid_angle = 0.6;
    spec.rigid_shift = {1.5, -0.3, 0.8};
    return build_scenario(spec);
}

Scenario generic_cylinder() {
    ScenarioSpec spec;
    spec.surface_kind = "cylinder";
    spec.deformation_kind = "generic";
    spec.v_poly.c0 = {{0.0, 0.02}, {0.01}};
    spec.v_poly.c1 = {{0.0}, {0.0, 0.03}};
    spec.v_poly.c2 = {{0.0, 0.0, 0.02}, {0.015}};
    spec.theta_poly.c0 = {{0.0, 0.05}};
    spec.theta_poly.c1 = {{0.0}, {0.04}};
    spec.theta_poly.c2 = {{0.0, -0.03}};
    return build_scenario(spec);
}

}  // namespace

TEST_CASE("check catalog and tolerances") {
    const auto& ids = check_catalog();
    REQUIRE(ids.size() == 8);
    CHECK(ids.front() == "rigid_vanishing");
    CHECK(ids.back() == "drill_report");
    for (const auto& id : ids) CHECK(default_tolerance(id) >= 0.0);

    CHECK(code_of([] { default_tolerance("no_such_check"); }) == ErrorCode::UnknownCatalogId);
    const Scenario sc = rigid_scenario("plate");
    CHECK(code_of([&] { run_check("no_such_check", sc); }) == ErrorCode::UnknownCatalogId);
}

TEST_CASE("rigid motions annihilate every bending and membrane measure") {
    for (const char* surface : {"plate", "cylinder", "sphere"}) {
        const CheckReport r = run_check("rigid_vanishing", rigid_scenario(surface));
        INFO(surface << ": max residual " << r.max_residual);
        CHECK(r.pass);
        CHECK(r.residuals.size() == 5);
        CHECK(r.max_residual <= 1e-8);
    }

    // wrong deformation kind
    ScenarioSpec spec;
    const Scenario plain = build_scenario(spec);
    CHECK(code_of([&] { run_check("rigid_vanishing", plain); }) ==
          ErrorCode::IncompatibleScenario);
}

TEST_CASE("rigid check fails loudly on a corrupted deformed state") {
    Scenario sc = rigid_scenario("cylinder");
    sc.m = scaled(sc.y0, 1.1);  // not a rigid image of the reference
    const CheckReport r = run_check("rigid_vanishing", sc);
    CHECK_FALSE(r.pass);
    CHECK(r.max_residual > 1e-2);
}

TEST_CASE("scaling suite separates invariant from classical measures") {
    ScenarioSpec spec;
    spec.surface_kind = "cylinder";
    spec.deformation_kind = "scale";
    spec.alpha = 2.0;
    const CheckReport r = run_check("scaling_suite", build_scenario(spec));
    CHECK(r.pass);
    CHECK(r.notes.find("witness") != std::string::npos);

    // shrink factor on an undeformed sphere
    ScenarioSpec sphere;
    sphere.surface_kind = "sphere";
    sphere.alpha = 0.5;
    const CheckReport r2 = run_check("scaling_suite", build_scenario(sphere));
    CHECK(r2.pass);

    // flat deformed state: no curvature to witness
    ScenarioSpec flat;
    flat.deformation_kind = "scale";
    flat.alpha = 2.0;
    CHECK(code_of([&] { run_check("scaling_suite", build_scenario(flat)); }) ==
          ErrorCode::IncompatibleScenario);

    // unit factor: nothing to compare
    ScenarioSpec unit;
    unit.surface_kind = "cylinder";
    unit.deformation_kind = "scale";
    unit.alpha = 1.0;
    CHECK(code_of([&] { run_check("scaling_suite", build_scenario(unit)); }) ==
          ErrorCode::IncompatibleScenario);
}

TEST_CASE("radial expansion of a cylinder is pure stretch for the invariant measures") {
    ScenarioSpec spec;
    spec.surface_kind = "cylinder";
    spec.deformation_kind = "radial_expansion";
    spec.epsilon = 0.3;
    const Scenario sc = build_scenario(spec);

    const CheckReport r = run_check("pure_stretch_bending", sc);
    CHECK(r.pass);

    // the classical bending difference sees exactly the curvature change
    for (const Vec2& x : sc.sample_points)
        CHECK(norm(koiter_strains(sc.y0, sc.m, x).R) == Catch::Approx(0.3).margin(1e-6));

    // also valid away from unit radius
    ScenarioSpec wide = spec;
    wide.radius = 2.0;
    wide.epsilon = -0.2;
    CHECK(run_check("pure_stretch_bending", build_scenario(wide)).pass);

    ScenarioSpec sphere = spec;
    sphere.surface_kind = "sphere";
    CHECK(code_of([&] { run_check("pure_stretch_bending", build_scenario(sphere)); }) ==
          ErrorCode::IncompatibleScenario);
}

TEST_CASE("curvature variation rates agree with the closed formulas") {
    const CheckReport r = run_check("curvature_variation", generic_cylinder());
    CHECK(r.pass);
    CHECK(r.max_residual <= 1e-6);

    ScenarioSpec bump;
    bump.deformation_kind = "polynomial";
    bump.v_poly.c2 = {{0.0, 0.0, 0.05}, {0.0, 0.04}, {0.03}};
    const CheckReport r2 = run_check("curvature_variation", build_scenario(bump));
    CHECK(r2.pass);

    ScenarioSpec plain;
    CHECK(code_of([&] { run_check("curvature_variation", build_scenario(plain)); }) ==
          ErrorCode::IncompatibleScenario);
}

TEST_CASE("finite-difference strain rates match the linearised families") {
    const CheckReport r = run_check("linearization_fd", generic_cylinder());
    INFO("max residual " << r.max_residual);
    CHECK(r.pass);

    // displacement-only scenario: rotation family defaults to the identity
    ScenarioSpec bump;
    bump.deformation_kind = "polynomial";
    bump.v_poly.c2 = {{0.0, 0.0, 0.05}, {0.0, 0.04}, {0.03}};
    const CheckReport r2 = run_check("linearization_fd", build_scenario(bump));
    CHECK(r2.pass);

    ScenarioSpec plain;
    CHECK(code_of([&] { run_check("linearization_fd", build_scenario(plain)); }) ==
          ErrorCode::IncompatibleScenario);
}

TEST_CASE("stretch factor fixes the normal and matches the metric formula") {
    ScenarioSpec spec;
    spec.surface_kind = "cylinder";
    spec.deformation_kind = "radial_expansion";
    spec.epsilon = 0.3;
    const CheckReport r = run_check("appendix_stretch", build_scenario(spec));
    CHECK(r.pass);
    CHECK(r.max_residual <= 1e-8);

    ScenarioSpec sphere;
    sphere.surface_kind = "sphere";
    sphere.deformation_kind = "scale";
    sphere.alpha = 2.0;
    CHECK(run_check("appendix_stretch", build_scenario(sphere)).pass);

    // rolling a plate tilts the normal: the gate must reject it
    ScenarioSpec roll;
    roll.deformation_kind = "isometric_roll";
    roll.roll_rho = 2.0;
    CHECK(code_of([&] { run_check("appendix_stretch", build_scenario(roll)); }) ==
          ErrorCode::IncompatibleScenario);
}

TEST_CASE("energy density properties hold on a generic scenario") {
    const CheckReport r = run_check("energy_properties", generic_cylinder());
    REQUIRE(r.residuals.size() == 4);
    CHECK(r.pass);
    CHECK(r.residuals[2] == 0.0);  // positive definiteness held over all draws
}

TEST_CASE("drill report describes but never adjudicates") {
    ScenarioSpec spec;
    spec.deformation_kind = "drill";
    spec.drill_theta[0] = 0.3;
    spec.drill_theta[1] = 0.2;
    spec.drill_theta[2] = -0.1;
    const CheckReport r = run_check("drill_report", build_scenario(spec));
    CHECK(r.pass);
    CHECK(r.max_residual == 0.0);
    CHECK(r.notes.find("max |R|") != std::string::npos);

    ScenarioSpec cyl = spec;
    cyl.surface_kind = "cylinder";
    CHECK(code_of([&] { run_check("drill_report", build_scenario(cyl)); }) ==
          ErrorCode::IncompatibleScenario);
}

TEST_CASE("checks are deterministic across repeated runs") {
    const Scenario sc = generic_cylinder();
    const CheckReport a = run_check("linearization_fd", sc);
    const CheckReport b = run_check("linearization_fd", sc);
    REQUIRE(a.residuals.size() == b.residuals.size());
    for (size_t i = 0; i < a.residuals.size(); ++i) CHECK(a.residuals[i] == b.residuals[i]);
    CHECK(a.max_residual == b.max_residual);
}

TEST_CASE("run_all_checks executes the compatible subset in catalog order") {
    ScenarioSpec spec;
    spec.deformation_kind = "rigid";
    spec.rigid_axis = {0, 0, 1};  // keeps the plate normal, so the stretch check applies
    spec.rigid_angle = 0.4;
    spec.rigid_shift = {0.1, -0.2, 0.05};
    const Scenario sc = build_scenario(spec);

    std::vector<std::string> skipped;
    const std::vector<CheckReport> reports = run_all_checks(sc, &skipped);

    std::vector<std::string> ran;
    for (const CheckReport& r : reports) {
        ran.push_back(r.check_id);
        INFO(r.check_id << ": max residual " << r.max_residual);
        CHECK(r.pass);
    }
    CHECK(ran == std::vector<std::string>{"rigid_vanishing", "curvature_variation",
                                          "linearization_fd", "appendix_stretch",
                                          "energy_properties"});
    CHECK(skipped == std::vector<std::string>{"scaling_suite", "pure_stretch_bending",
                                              "drill_report"});
}
