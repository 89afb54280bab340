#pragma once

// Scenario catalog: canonical reference surfaces combined with canonical
// deformations and rotation fields, bundled with material parameters and
// sample points.  A Scenario is the unit of work for the verification checks
// and the command-line front end; everything in it is deterministic.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shellkit/energy.hpp"

namespace shellkit {

// Coefficient tables for the three components of a polynomial field,
// mirroring the scenario-file encoding.
struct PolyCoeffs {
    std::vector<std::vector<double>> c0, c1, c2;

    bool empty() const { return c0.empty() && c1.empty() && c2.empty(); }
};

inline VectorField poly_field_from(const PolyCoeffs& p, const Domain& dom) {
    return make_poly_field(Poly2{p.c0}, Poly2{p.c1}, Poly2{p.c2}, dom);
}

// Plain description of a scenario; build_scenario turns it into callable
// fields.  Only the fields relevant to the named kinds are read.
struct ScenarioSpec {
    std::string name;  // optional; a default id is derived from the kinds

    std::string surface_kind = "plate";  // plate|cylinder|sphere|polar_plate|rolled_plate
    double radius = 1.0;                 // cylinder, sphere
    double surface_rho = 1.0;            // rolled_plate
    std::optional<Domain> domain;        // chart rectangle; catalog default if absent

    // identity|rigid|scale|radial_expansion|isometric_roll|polynomial|drill|generic
    std::string deformation_kind = "identity";
    Vec3 rigid_axis{0, 0, 1};
    double rigid_angle = 0.0;
    Vec3 rigid_shift{};
    double alpha = 2.0;    // scale
    double epsilon = 0.0;  // radial_expansion
    double roll_rho = 1.0; // isometric_roll
    PolyCoeffs v_poly;     // polynomial, generic
    PolyCoeffs theta_poly; // generic
    double drill_theta[3] = {0.0, 0.0, 0.0};  // drill angle theta(x) = t0 + t1 x1 + t2 x2

    // Optional rotation-field override: identity|constant|drill|exp_poly.
    // Empty means "matched to the deformation".
    std::string rotation_kind;
    Vec3 rotation_axis{0, 0, 1};
    double rotation_angle = 0.0;
    double rotation_drill_theta[3] = {0.0, 0.0, 0.0};
    PolyCoeffs rotation_poly;

    MaterialParams material{1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.1};
    std::vector<Vec2> sample_points;  // default interior spread if empty

    std::optional<PolyCoeffs> load;  // minimizer data
    std::optional<PolyCoeffs> bc;
};

struct Scenario {
    std::string id;
    std::string surface_kind;
    std::string deformation_kind;

    SurfacePatch y0;  // reference configuration
    SurfacePatch m;   // deformed configuration
    RotationField Q;  // rotation field matched to (or overriding) the deformation

    // Linearization data of the deformation family, when the kind defines one:
    // v is d/d(parameter) of the deformed position at the reference, theta the
    // corresponding rotation rate.
    std::optional<VectorField> v;
    std::optional<VectorField> theta;

    std::optional<VectorField> load;  // minimizer right-hand side
    std::optional<VectorField> bc;    // boundary displacement

    double alpha = 2.0;    // scale factor used by the scaling checks
    double epsilon = 0.0;  // radial-expansion magnitude
    double radius = 1.0;   // reference radius for cylinder/sphere scenarios

    MaterialParams material;
    std::vector<Vec2> sample_points;
};

namespace detail {

// Analytic field x -> angle * (axis x y0(x)) + shift: the velocity of the
// rigid rotation family through the identity.
inline VectorField rigid_velocity_field(const SurfacePatch& y0, const Vec3& axis_unit,
                                        double angle, const Vec3& shift) {
    return VectorField::analytic(
        [y0, axis_unit, angle, shift](const Vec2& x) {
            const Jet2 b = y0.jet(x);
            Jet2 j;
            j.p = angle * cross(axis_unit, b.p) + shift;
            j.d1 = angle * cross(axis_unit, b.d1);
            j.d2 = angle * cross(axis_unit, b.d2);
            j.d11 = angle * cross(axis_unit, b.d11);
            j.d12 = angle * cross(axis_unit, b.d12);
            j.d22 = angle * cross(axis_unit, b.d22);
            return j;
        },
        y0.domain());
}

// The reference position as a displacement field (velocity of uniform
// scaling through alpha = 1).
inline VectorField position_field(const SurfacePatch& y0) {
    return VectorField::analytic([y0](const Vec2& x) { return y0.jet(x); }, y0.domain());
}

// In-plane projection (z component dropped): velocity of the radial
// expansion (x, y, z) -> ((1+eps) x, (1+eps) y, z).
inline VectorField planar_position_field(const SurfacePatch& y0) {
    return VectorField::analytic(
        [y0](const Vec2& x) {
            Jet2 j = y0.jet(x);
            j.p[2] = 0.0;
            j.d1[2] = 0.0;
            j.d2[2] = 0.0;
            j.d11[2] = 0.0;
            j.d12[2] = 0.0;
            j.d22[2] = 0.0;
            return j;
        },
        y0.domain());
}

inline VectorField constant_field(const Vec3& value, const Domain& dom) {
    return VectorField::analytic(
        [value](const Vec2&) {
            Jet2 j;
            j.p = value;
            return j;
        },
        dom);
}

// Affine drill angle as a rotation-vector field about e3.
inline VectorField drill_axis_field(const double t[3], const Domain& dom) {
    const Poly2 angle{{{t[0], t[2]}, {t[1]}}};
    return make_poly_field(Poly2{}, Poly2{}, angle, dom);
}

inline std::vector<Vec2> default_sample_points(const Domain& dom) {
    const double frac[5][2] = {
        {0.30, 0.40}, {0.62, 0.72}, {0.72, 0.26}, {0.44, 0.52}, {0.22, 0.62}};
    std::vector<Vec2> pts;
    pts.reserve(5);
    for (const auto& f : frac)
        pts.push_back({dom.lo1 + f[0] * (dom.hi1 - dom.lo1), dom.lo2 + f[1] * (dom.hi2 - dom.lo2)});
    return pts;
}

}  // namespace detail

inline Scenario build_scenario(const ScenarioSpec& spec) {
    // --- reference surface -------------------------------------------------
    std::optional<SurfacePatch> y0;
    if (spec.surface_kind == "plate") {
        y0 = spec.domain ? make_plate(*spec.domain) : make_plate();
    } else if (spec.surface_kind == "cylinder") {
        if (!(spec.radius > 0.0))
            throw Error(ErrorCode::BadParameters, "cylinder radius must be positive");
        y0 = spec.domain ? make_cylinder(spec.radius, *spec.domain) : make_cylinder(spec.radius);
    } else if (spec.surface_kind == "sphere") {
        if (!(spec.radius > 0.0))
            throw Error(ErrorCode::BadParameters, "sphere radius must be positive");
        y0 = spec.domain ? make_sphere(spec.radius, *spec.domain) : make_sphere(spec.radius);
    } else if (spec.surface_kind == "polar_plate") {
        y0 = spec.domain ? make_polar_plate(*spec.domain) : make_polar_plate();
    } else if (spec.surface_kind == "rolled_plate") {
        if (!(spec.surface_rho > 0.0))
            throw Error(ErrorCode::BadParameters, "rolled_plate radius must be positive");
        y0 = spec.domain ? make_rolled_plate(spec.surface_rho, *spec.domain)
                         : make_rolled_plate(spec.surface_rho);
    } else {
        throw Error(ErrorCode::UnknownCatalogId, "unknown surface kind '" + spec.surface_kind + "'");
    }
    const Domain dom = y0->domain();

    // --- deformation -------------------------------------------------------
    std::optional<SurfacePatch> m;
    std::optional<VectorField> v, theta;
    std::optional<Mat3> rigid_q;
    // The scaling checks need a factor even when the deformation is not itself
    // a scaling, so any positive spec.alpha is carried through.
    double alpha = spec.alpha > 0.0 ? spec.alpha : 2.0;
    double eps = 0.0;

    const std::string& dk = spec.deformation_kind;
    if (dk == "identity" || dk == "drill") {
        m = *y0;
    } else if (dk == "rigid") {
        if (norm(spec.rigid_axis) < 1e-12)
            throw Error(ErrorCode::BadParameters, "rigid axis must be nonzero");
        const Vec3 axis = normalized(spec.rigid_axis);
        rigid_q = rotation_exp(spec.rigid_angle * axis);
        m = affine_image(*y0, *rigid_q, spec.rigid_shift);
        v = detail::rigid_velocity_field(*y0, axis, spec.rigid_angle, spec.rigid_shift);
        theta = detail::constant_field(spec.rigid_angle * axis, dom);
    } else if (dk == "scale") {
        if (!(spec.alpha > 0.0))
            throw Error(ErrorCode::BadParameters, "scale factor must be positive");
        m = scaled(*y0, spec.alpha);
        v = detail::position_field(*y0);
        theta = detail::constant_field({0, 0, 0}, dom);
    } else if (dk == "radial_expansion") {
        if (!(1.0 + spec.epsilon > 0.0))
            throw Error(ErrorCode::BadParameters, "radial expansion must keep 1 + eps positive");
        eps = spec.epsilon;
        Mat3 stretch = identity3();
        stretch(0, 0) = stretch(1, 1) = 1.0 + spec.epsilon;
        m = affine_image(*y0, stretch);
        v = detail::planar_position_field(*y0);
        theta = detail::constant_field({0, 0, 0}, dom);
    } else if (dk == "isometric_roll") {
        if (!(spec.roll_rho > 0.0))
            throw Error(ErrorCode::BadParameters, "roll radius must be positive");
        if (spec.surface_kind != "plate")
            throw Error(ErrorCode::BadParameters, "isometric_roll deforms a plate reference");
        m = make_rolled_plate(spec.roll_rho, dom);
    } else if (dk == "polynomial") {
        v = poly_field_from(spec.v_poly, dom);
        m = displaced(*y0, *v);
        theta = detail::constant_field({0, 0, 0}, dom);
    } else if (dk == "generic") {
        v = poly_field_from(spec.v_poly, dom);
        theta = poly_field_from(spec.theta_poly, dom);
        m = displaced(*y0, *v);
    } else {
        throw Error(ErrorCode::UnknownCatalogId, "unknown deformation kind '" + dk + "'");
    }

    // --- rotation field ----------------------------------------------------
    std::optional<RotationField> q;
    if (spec.rotation_kind.empty()) {
        // matched to the deformation
        if (rigid_q) {
            q = rotation_constant(*rigid_q);
        } else if (dk == "drill") {
            q = rotation_drill(spec.drill_theta[0], spec.drill_theta[1], spec.drill_theta[2]);
            theta = detail::drill_axis_field(spec.drill_theta, dom);
        } else if (dk == "generic") {
            q = rotation_exp_poly(Poly2{spec.theta_poly.c0}, Poly2{spec.theta_poly.c1},
                                  Poly2{spec.theta_poly.c2});
        } else {
            q = rotation_identity();
        }
    } else if (spec.rotation_kind == "identity") {
        q = rotation_identity();
    } else if (spec.rotation_kind == "constant") {
        if (norm(spec.rotation_axis) < 1e-12)
            throw Error(ErrorCode::BadParameters, "rotation axis must be nonzero");
        q = rotation_constant(rotation_exp(spec.rotation_angle * normalized(spec.rotation_axis)));
    } else if (spec.rotation_kind == "drill") {
        q = rotation_drill(spec.rotation_drill_theta[0], spec.rotation_drill_theta[1],
                           spec.rotation_drill_theta[2]);
    } else if (spec.rotation_kind == "exp_poly") {
        q = rotation_exp_poly(Poly2{spec.rotation_poly.c0}, Poly2{spec.rotation_poly.c1},
                              Poly2{spec.rotation_poly.c2});
    } else {
        throw Error(ErrorCode::UnknownCatalogId,
                    "unknown rotation kind '" + spec.rotation_kind + "'");
    }

    // --- sample points -----------------------------------------------------
    std::vector<Vec2> pts =
        spec.sample_points.empty() ? detail::default_sample_points(dom) : spec.sample_points;
    for (const Vec2& x : pts) {
        const double margin =
            std::max({y0->required_margin(x), m->required_margin(x), 0.02});
        if (!dom.strictly_inside(x, margin))
            throw Error(ErrorCode::BadParameters,
                        "sample point (" + std::to_string(x[0]) + ", " + std::to_string(x[1]) +
                            ") is not interior with the finite-difference margin");
    }

    std::optional<VectorField> load, bc;
    if (spec.load) load = poly_field_from(*spec.load, dom);
    if (spec.bc) bc = poly_field_from(*spec.bc, dom);

    std::string id = spec.name.empty() ? spec.surface_kind + "_" + dk : spec.name;
    return Scenario{std::move(id), spec.surface_kind,     dk,
                    std::move(*y0), std::move(*m),        std::move(*q),
                    std::move(v),   std::move(theta),     std::move(load),
                    std::move(bc),  alpha,                eps,
                    spec.radius,    spec.material,        std::move(pts)};
}

}  // namespace shellkit
