#pragma once

// Named property checks over scenarios: rigid-motion annihilation, scaling
// behaviour, stretch/bending separation, curvature-variation identities,
// linearization consistency, the normal-preserving stretch formula, and the
// quadratic-form properties of the energy densities.
//
// Every check reduces to a per-point residual with the convention "smaller is
// better": identities contribute their violation directly, and non-vanishing
// witnesses contribute max(0, margin - value) so that a dead measure (one
// that silently became zero) fails the same way a broken identity does.
// Margins are half the hand-derived magnitude for the scenario at hand.

#include <algorithm>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "shellkit/scenario.hpp"

namespace shellkit {

struct CheckReport {
    std::string check_id;
    std::string scenario_id;
    std::vector<double> residuals;  // one per sample point unless noted otherwise
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string notes;
};

inline const std::vector<std::string>& check_catalog() {
    static const std::vector<std::string> ids = {
        "rigid_vanishing",  "scaling_suite",    "pure_stretch_bending",
        "curvature_variation", "linearization_fd", "appendix_stretch",
        "energy_properties", "drill_report"};
    return ids;
}

inline double default_tolerance(const std::string& check_id) {
    if (check_id == "rigid_vanishing") return 1e-8;
    if (check_id == "scaling_suite") return 1e-7;
    if (check_id == "pure_stretch_bending") return 1e-7;
    if (check_id == "curvature_variation") return 1e-6;
    if (check_id == "linearization_fd") return 1e-5;
    if (check_id == "appendix_stretch") return 1e-8;
    if (check_id == "energy_properties") return 1e-10;
    if (check_id == "drill_report") return 0.0;  // report-only: residuals stay 0
    throw Error(ErrorCode::UnknownCatalogId, "unknown check id '" + check_id + "'");
}

namespace detail {

inline CheckReport finish_report(CheckReport r) {
    r.max_residual = 0.0;
    for (double v : r.residuals) r.max_residual = std::max(r.max_residual, v);
    r.pass = r.max_residual <= r.tolerance;
    return r;
}

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

// Central difference with one Richardson sweep; eval must accept the signed
// family parameter.
template <class Fn>
auto rate_richardson(Fn&& eval) {
    const double e1 = 1e-4, e2 = 5e-5;
    const auto coarse = (1.0 / (2.0 * e1)) * (eval(e1) - eval(-e1));
    const auto half = (1.0 / (2.0 * e2)) * (eval(e2) - eval(-e2));
    return (1.0 / 3.0) * (4.0 * half - coarse);
}

inline double rel(double err, double scale) { return err / (1.0 + scale); }

// --- the individual checks ------------------------------------------------

inline CheckReport check_rigid_vanishing(const Scenario& sc, double tol) {
    if (sc.deformation_kind != "rigid")
        throw Error(ErrorCode::IncompatibleScenario,
                    "rigid_vanishing needs a rigid deformation");
    CheckReport r{"rigid_vanishing", sc.id, {}, 0, tol, false,
                  "max norm over membrane/bending/rotation-carrying/constrained/"
                  "stretch-weighted/third-form measures"};
    for (const Vec2& x : sc.sample_points) {
        const KoiterStrains k = koiter_strains(sc.y0, sc.m, x);
        const CosseratStrainSet cs = cosserat_strains(sc.y0, sc.m, sc.Q, x);
        const ConstrainedStrainSet ps = constrained_strains(sc.y0, sc.m, x);
        const AcharyaTensors a = acharya_tensors(sc.y0, sc.m, x);
        const Mat2 third = frame_at(sc.m, x).III - frame_at(sc.y0, x).III;
        double worst = std::max({norm(k.G), norm(k.R), norm(cs.E_ms), norm(cs.K_es),
                                 norm(ps.E_inf), norm(ps.K_inf), norm(a.R_tilde), norm(third)});
        r.residuals.push_back(worst);
    }
    return finish_report(std::move(r));
}

inline CheckReport check_scaling_suite(const Scenario& sc, double tol) {
    const double alpha = sc.alpha;
    if (std::abs(alpha - 1.0) < 1e-9)
        throw Error(ErrorCode::IncompatibleScenario, "scaling_suite needs alpha != 1");
    double max_curv = 0.0;
    for (const Vec2& x : sc.sample_points) max_curv = std::max(max_curv, norm(frame_at(sc.m, x).II));
    if (max_curv < 0.1)
        throw Error(ErrorCode::IncompatibleScenario,
                    "scaling_suite needs a curved deformed state for its witness");

    const SurfacePatch big = scaled(sc.m, alpha);
    CheckReport r{"scaling_suite", sc.id, {}, 0, tol, false, ""};
    double witness_min = 1e300;
    for (const Vec2& x : sc.sample_points) {
        const ConstrainedStrainSet p0 = constrained_strains(sc.y0, sc.m, x);
        const ConstrainedStrainSet p1 = constrained_strains(sc.y0, big, x);
        const AcharyaTensors a0 = acharya_tensors(sc.y0, sc.m, x);
        const AcharyaTensors a1 = acharya_tensors(sc.y0, big, x);
        const Mat2 t0 = frame_at(sc.m, x).III;
        const Mat2 t1 = frame_at(big, x).III;

        const double invariant_rinf = norm(p1.R_inf_flat - p0.R_inf_flat);
        const double homogeneous_a = norm(a1.R_tilde - alpha * a0.R_tilde);
        const double invariant_third = norm(t1 - t0);

        // the classical bending difference must NOT be scale-invariant:
        // II scales linearly, so the gap is exactly |alpha - 1| * |II_m|
        const Mat2 k0 = koiter_strains(sc.y0, sc.m, x).R;
        const Mat2 k1 = koiter_strains(sc.y0, big, x).R;
        const double witness = norm(k1 - k0);
        const double margin = 0.5 * std::abs(alpha - 1.0) * norm(frame_at(sc.m, x).II);
        witness_min = std::min(witness_min, witness);

        r.residuals.push_back(std::max({invariant_rinf, homogeneous_a, invariant_third,
                                        std::max(0.0, margin - witness)}));
    }
    r.notes = "scale factor " + fmt(alpha) + "; smallest classical-bending witness " +
              fmt(witness_min);
    return finish_report(std::move(r));
}

inline CheckReport check_pure_stretch_bending(const Scenario& sc, double tol) {
    if (sc.surface_kind != "cylinder" || sc.deformation_kind != "radial_expansion" || !sc.v)
        throw Error(ErrorCode::IncompatibleScenario,
                    "pure_stretch_bending needs a cylinder under radial expansion");
    // hand values for the arc-length chart of a radius-r cylinder under the
    // unit radial velocity: bending difference and the doubled-product
    // variant both have magnitude 1/r^2 times the radius factor of v = r e_r,
    // i.e. norm 1/r; margins are half that.
    const double margin = 0.5 / sc.radius;

    CheckReport r{"pure_stretch_bending", sc.id, {}, 0, tol, false,
                  "vanishing: scaling-invariant bending (finite and linear) and the "
                  "symmetrized variant; witnesses: classical and area-weighted differences"};
    for (const Vec2& x : sc.sample_points) {
        const ConstrainedStrainSet fin = constrained_strains(sc.y0, sc.m, x);
        const LinearStrainSet lin = constrained_linear(sc.y0, *sc.v, x);
        const double vanish = std::max({norm(fin.R_inf_flat), norm(lin.R_KSB),
                                        norm(lin.R_inf_lin)});
        const double witness = std::max({0.0, margin - norm(lin.R_K), margin - norm(lin.R_AL)});
        r.residuals.push_back(std::max(vanish, witness));
    }
    return finish_report(std::move(r));
}

inline CheckReport check_curvature_variation(const Scenario& sc, double tol) {
    if (!sc.v)
        throw Error(ErrorCode::IncompatibleScenario,
                    "curvature_variation needs a deformation with a velocity field");
    CheckReport r{"curvature_variation", sc.id, {}, 0, tol, false,
                  "finite-difference vs closed-form mean/Gauss curvature rates, plus "
                  "zero rates on annihilator-kernel fields"};

    // kernel fields: an infinitesimal rigid motion always, an in-plane flow
    // on flat references
    const Vec3 b{0.3, -0.5, 0.8};
    const VectorField rigid =
        rigid_velocity_field(sc.y0, normalized(b), norm(b), {0.1, 0.2, -0.3});
    std::optional<VectorField> planar;
    if (sc.surface_kind == "plate")
        planar = make_poly_field(Poly2{{{0.0, 1.0}, {0.0}, {0.3}}},
                                 Poly2{{{0.0}, {1.0, 0.0, -0.2}}}, Poly2{}, sc.y0.domain());

    for (const Vec2& x : sc.sample_points) {
        const VariationDerivatives vd = variation_derivatives(sc.y0, *sc.v, x);
        double worst = std::max(rel(std::abs(vd.fd.dH - vd.closed.dH), std::abs(vd.closed.dH)),
                                rel(std::abs(vd.fd.dK - vd.closed.dK), std::abs(vd.closed.dK)));

        const VariationDerivatives kr = variation_derivatives(sc.y0, rigid, x);
        const LinearStrainSet lr = constrained_linear(sc.y0, rigid, x);
        worst = std::max({worst, norm(lr.R_AL), std::abs(kr.fd.dH), std::abs(kr.fd.dK)});
        if (planar) {
            const VariationDerivatives kp = variation_derivatives(sc.y0, *planar, x);
            const LinearStrainSet lp = constrained_linear(sc.y0, *planar, x);
            worst = std::max({worst, norm(lp.R_AL), std::abs(kp.fd.dH), std::abs(kp.fd.dK)});
        }
        r.residuals.push_back(worst);
    }
    return finish_report(std::move(r));
}

inline CheckReport check_linearization_fd(const Scenario& sc, double tol) {
    if (!sc.v)
        throw Error(ErrorCode::IncompatibleScenario,
                    "linearization_fd needs a deformation with a velocity field");
    const VectorField& v = *sc.v;
    const VectorField th = sc.theta ? *sc.theta : zero_field(sc.y0.domain());

    CheckReport r{"linearization_fd", sc.id, {}, 0, tol, false,
                  "normalized gap between finite-difference strain rates and the "
                  "linearised measures, all families"};
    for (const Vec2& x : sc.sample_points) {
        double worst = 0.0;
        auto track = [&](double err, double scale) { worst = std::max(worst, rel(err, scale)); };

        // membrane/bending pair
        const KoiterLinearStrains kl = koiter_linear(sc.y0, v, x);
        track(norm(rate_richardson([&](double e) {
                  return koiter_strains(sc.y0, displaced(sc.y0, v, e), x).G;
              }) - kl.G),
              norm(kl.G));
        track(norm(rate_richardson([&](double e) {
                  return koiter_strains(sc.y0, displaced(sc.y0, v, e), x).R;
              }) - kl.R),
              norm(kl.R));

        // rotation-carrying family at (v, theta)
        const LinearStrainSet cl = cosserat_linear(sc.y0, v, th, x);
        auto strain_at = [&](double e) {
            const SurfacePatch me = displaced(sc.y0, v, e);
            const RotationField qe = RotationField::from_map(
                [&th, e](const Vec2& p) { return rotation_exp(e * th.jet(p).p); }, 6e-6,
                /*richardson=*/true);
            return cosserat_strains(sc.y0, me, qe, x);
        };
        track(norm(rate_richardson([&](double e) { return strain_at(e).G; }) - cl.G_lin),
              norm(cl.G_lin));
        track(norm(rate_richardson([&](double e) { return strain_at(e).T; }) - cl.T_lin),
              norm(cl.T_lin));
        track(norm(rate_richardson([&](double e) { return strain_at(e).R; }) - cl.R_lin),
              norm(cl.R_lin));
        track(norm(rate_richardson([&](double e) { return strain_at(e).N; }) - cl.N_lin),
              norm(cl.N_lin));
        track(norm(rate_richardson([&](double e) { return strain_at(e).K_es; }) - cl.K_lin),
              norm(cl.K_lin));

        // constrained family driven by the displacement alone
        const LinearStrainSet pl = constrained_linear(sc.y0, v, x);
        auto cons_at = [&](double e) { return constrained_strains(sc.y0, displaced(sc.y0, v, e), x); };
        track(norm(rate_richardson([&](double e) { return cons_at(e).E_inf; }) - pl.E_inf_lin),
              norm(pl.E_inf_lin));
        track(norm(rate_richardson([&](double e) { return cons_at(e).K_inf; }) - pl.K_lin),
              norm(pl.K_lin));
        track(norm(rate_richardson([&](double e) { return cons_at(e).R_inf_flat; }) -
                   lift_flat(pl.R_inf_lin)),
              norm(pl.R_inf_lin));
        track(norm(axl_of_skew_part(rate_richardson(
                       [&](double e) { return cons_at(e).Q_inf; })) -
                   pl.theta_inf),
              norm(pl.theta_inf));

        r.residuals.push_back(worst);
    }
    return finish_report(std::move(r));
}

inline CheckReport check_appendix_stretch(const Scenario& sc, double tol) {
    // gate: the deformation must leave the unit normal field untouched
    for (const Vec2& x : sc.sample_points) {
        if (norm(frame_at(sc.m, x).n0 - frame_at(sc.y0, x).n0) > 1e-6)
            throw Error(ErrorCode::IncompatibleScenario,
                        "appendix_stretch needs a normal-preserving deformation");
    }
    CheckReport r{"appendix_stretch", sc.id, {}, 0, tol, false,
                  "stretch factor fixes the normal; closed metric-form expression; "
                  "square-of-root consistency"};
    for (const Vec2& x : sc.sample_points) {
        const SurfaceFrame f0 = frame_at(sc.y0, x);
        const SurfaceFrame fm = frame_at(sc.m, x);
        const Mat3 fhat = append_col(fm.grad_y, fm.n0) * f0.grad_theta_inv;
        const Mat3 ue = polar_decompose(fhat).U;

        const double fixes_normal = norm(ue * f0.n0 - f0.n0);
        const Mat3 closed = spd_sqrt(transpose(f0.grad_theta_inv) * lift_hat(fm.I) *
                                     f0.grad_theta_inv);
        const double formula = norm(ue - closed);
        const double root_sq = norm(ue * ue - transpose(fhat) * fhat);
        r.residuals.push_back(std::max({fixes_normal, formula, root_sq}));
    }
    return finish_report(std::move(r));
}

inline CheckReport check_energy_properties(const Scenario& sc, double tol) {
    const MaterialParams& p = sc.material;
    CheckReport r{"energy_properties", sc.id, {}, 0, tol, false,
                  "residual order: zero-at-reference, frame invariance, positive "
                  "definiteness (0 = held over 1000 draws), polarization"};
    const QuadratureSpec quad{2, 4, 4};

    const double at_ref = std::abs(
        cosserat_energy(sc.y0, sc.y0, rotation_identity(), p, quad).total);

    const Mat3 qhat = rotation_exp({0.4, -0.8, 0.3});
    const RotationField moved_q = RotationField::analytic([qhat, &sc](const Vec2& x) {
        const RotJet j = sc.Q.jet(x);
        return RotJet{qhat * j.Q, qhat * j.d1, qhat * j.d2};
    });
    const double e0 = cosserat_energy(sc.y0, sc.m, sc.Q, p, quad).total;
    const double e1 =
        cosserat_energy(sc.y0, affine_image(sc.m, qhat, {2.0, -1.0, 0.7}), moved_q, p, quad)
            .total;
    const double invariance = std::abs(e1 - e0) / (1.0 + std::abs(e0));

    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double pd_violation = 0.0;
    double polarization = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        Mat3 x, y;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                x(i, j) = u(rng);
                y(i, j) = u(rng);
            }
        if (norm(x) > 1e-6) {
            pd_violation = std::max({pd_violation, -density_eval(DensityKind::Wshell, x, p),
                                     -density_eval(DensityKind::Wmp, x, p),
                                     -density_eval(DensityKind::Wcurv, x, p)});
            if (density_eval(DensityKind::Wshell, x, p) <= 0.0) pd_violation = 1.0;
        }
        const double bi = density_eval(DensityKind::WshellBilinear, x, y, p);
        const double pol = 0.25 * (density_eval(DensityKind::Wshell, x + y, p) -
                                   density_eval(DensityKind::Wshell, x - y, p));
        polarization = std::max(polarization, std::abs(bi - pol) / (1.0 + std::abs(bi)));
    }

    r.residuals = {at_ref, invariance, pd_violation, polarization};
    return finish_report(std::move(r));
}

inline CheckReport check_drill_report(const Scenario& sc, double tol) {
    if (sc.surface_kind != "plate" || sc.deformation_kind != "drill")
        throw Error(ErrorCode::IncompatibleScenario,
                    "drill_report needs a plate under a pure drill rotation");
    double max_r = 0.0, max_n = 0.0, max_a = 0.0;
    for (const Vec2& x : sc.sample_points) {
        const CosseratStrainSet cs = cosserat_strains(sc.y0, sc.m, sc.Q, x);
        const AcharyaTensors a = acharya_tensors(sc.y0, sc.m, x);
        max_r = std::max(max_r, norm(cs.R));
        max_n = std::max(max_n, norm(cs.N));
        max_a = std::max(max_a, norm(a.R_tilde));
    }
    CheckReport r{"drill_report", sc.id, {}, 0, tol, false, ""};
    r.residuals.assign(sc.sample_points.size(), 0.0);
    // Descriptive only: the rotation-carrying bending measures see a drill,
    // the deformation-only measure cannot. Neither outcome is adjudicated.
    r.notes = "max |R| = " + fmt(max_r) + ", max |N| = " + fmt(max_n) +
              ", max |stretch-weighted difference| = " + fmt(max_a) +
              " (reported, not adjudicated)";
    return finish_report(std::move(r));
}

}  // namespace detail

inline CheckReport run_check(const std::string& check_id, const Scenario& sc,
                             double tolerance) {
    if (check_id == "rigid_vanishing") return detail::check_rigid_vanishing(sc, tolerance);
    if (check_id == "scaling_suite") return detail::check_scaling_suite(sc, tolerance);
    if (check_id == "pure_stretch_bending")
        return detail::check_pure_stretch_bending(sc, tolerance);
    if (check_id == "curvature_variation")
        return detail::check_curvature_variation(sc, tolerance);
    if (check_id == "linearization_fd") return detail::check_linearization_fd(sc, tolerance);
    if (check_id == "appendix_stretch") return detail::check_appendix_stretch(sc, tolerance);
    if (check_id == "energy_properties") return detail::check_energy_properties(sc, tolerance);
    if (check_id == "drill_report") return detail::check_drill_report(sc, tolerance);
    throw Error(ErrorCode::UnknownCatalogId, "unknown check id '" + check_id + "'");
}

inline CheckReport run_check(const std::string& check_id, const Scenario& sc) {
    return run_check(check_id, sc, default_tolerance(check_id));
}

// Run every catalog check that is compatible with the scenario, in catalog
// order; incompatible ones are skipped (their ids are appended to `skipped`
// when a sink is given).
inline std::vector<CheckReport> run_all_checks(const Scenario& sc,
                                               std::vector<std::string>* skipped = nullptr) {
    std::vector<CheckReport> reports;
    for (const std::string& id : check_catalog()) {
        try {
            reports.push_back(run_check(id, sc));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::IncompatibleScenario) throw;
            if (skipped) skipped->push_back(id);
        }
    }
    return reports;
}

}  // namespace shellkit
