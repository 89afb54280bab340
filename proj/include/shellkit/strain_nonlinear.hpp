// Nonlinear shell strain measures: the change-of-metric / change-of-curvature
// pair, the six-parameter (rotation-carrying) strain tensors with their block
// representations, the rotation-constrained measures built on the polar
// factor, two historical curvature-change proposals for comparison, director
// based strains, the through-thickness strain reconstruction, and the
// quadratic thickness-stretch ansatz coefficients.
#pragma once

#include <cmath>

#include "shellkit/errors.hpp"
#include "shellkit/fields.hpp"
#include "shellkit/surface.hpp"
#include "shellkit/tensor.hpp"

namespace shellkit {

// ---------------------------------------------------------------------------
// Change of metric / change of curvature
// ---------------------------------------------------------------------------

struct KoiterStrains {
    Mat2 G;  // membrane: half the first-form difference
    Mat2 R;  // bending: second-form difference
};

inline KoiterStrains koiter_strains(const SurfacePatch& y0, const SurfacePatch& m,
                                    const Vec2& x) {
    const SurfaceFrame f0 = frame_at(y0, x);
    const SurfaceFrame fm = frame_at(m, x);
    return {0.5 * (fm.I - f0.I), fm.II - f0.II};
}

// ---------------------------------------------------------------------------
// Rotation-carrying strain set
// ---------------------------------------------------------------------------

// [[M, 0], [t, 0]]: 2x2 block over a 1x2 row, zero third column.
inline Mat3 block_matrix(const Mat2& m, const Row2& t) {
    Mat3 r{};
    r(0, 0) = m(0, 0);
    r(0, 1) = m(0, 1);
    r(1, 0) = m(1, 0);
    r(1, 1) = m(1, 1);
    r(2, 0) = t[0];
    r(2, 1) = t[1];
    return r;
}

struct CosseratStrainSet {
    Mat3 E_ms;   // in-plane/shear strain in the full frame
    Mat3 K_es;   // wryness (bending-curvature) tensor
    Mat2 G;      // change of metric relative to the rotated tangent frame
    Row2 T;      // transverse shear row
    Mat2 R;      // bending strain
    Mat2 C;      // R - G * L, assembled from parts by definition
    Row2 N;      // drilling bendings row
    Mat3 CK;     // alternator times wryness
    Mat3 EB_CK;  // E_ms * B + CK (the first-order thickness coefficient)
    double axl_defect = 0.0;  // largest symmetric residue removed before axl
};

namespace detail {

// Axial vectors of Q^T d_i Q after projecting out the symmetric residue left
// by finite differencing. The residue magnitude is returned so callers can
// log it; beyond tol it means the field is not differentiably a rotation.
struct Wryness {
    Vec3 k1, k2;
    double defect;
};

inline Wryness wryness_of(const RotJet& rj, double tol = 1e-6) {
    const Mat3 w1 = transpose(rj.Q) * rj.d1;
    const Mat3 w2 = transpose(rj.Q) * rj.d2;
    const double defect =
        std::max(norm(sym(w1)) / (1.0 + norm(w1)), norm(sym(w2)) / (1.0 + norm(w2)));
    if (defect > tol)
        throw Error(ErrorCode::NotRotation,
                    "rotation derivatives have symmetric residue " + std::to_string(defect));
    return {axl_of_skew_part(w1), axl_of_skew_part(w2), defect};
}

}  // namespace detail

inline CosseratStrainSet cosserat_strains(const SurfacePatch& y0, const SurfacePatch& m,
                                          const RotationField& Q, const Vec2& x) {
    const SurfaceFrame f0 = frame_at(y0, x);
    const Mat32 grad_m = frame_at(m, x).grad_y;
    const RotJet rj = Q.jet(x);
    const detail::Wryness w = detail::wryness_of(rj);

    CosseratStrainSet s;
    s.axl_defect = w.defect;

    s.E_ms = transpose(rj.Q) * append_col(grad_m, rj.Q * f0.n0) * f0.grad_theta_inv -
             identity3();
    s.K_es = from_cols(w.k1, w.k2, Vec3{}) * f0.grad_theta_inv;

    const Mat32 rot_ty = rj.Q * f0.grad_y;
    s.G = transpose(rot_ty) * grad_m - f0.I;
    const Vec3 rot_n = rj.Q * f0.n0;
    s.T = {dot(rot_n, col(grad_m, 0)), dot(rot_n, col(grad_m, 1))};

    // Columns of grad(Q n0) by the product rule.
    const Mat32 grad_rot_n = cols32(rj.d1 * f0.n0 + rj.Q * col(f0.grad_n, 0),
                                    rj.d2 * f0.n0 + rj.Q * col(f0.grad_n, 1));
    s.R = -1.0 * (transpose(rot_ty) * grad_rot_n) - f0.II;
    s.C = s.R - s.G * f0.L;
    s.N = {dot(f0.n0, w.k1), dot(f0.n0, w.k2)};

    s.CK = f0.C * s.K_es;
    s.EB_CK = s.E_ms * f0.B + s.CK;
    return s;
}

// ---------------------------------------------------------------------------
// Rotation-constrained strain set
// ---------------------------------------------------------------------------

struct ConstrainedStrainSet {
    Mat3 Q_inf;       // polar rotation of the intermediate deformation gradient
    Mat3 E_inf;       // symmetric strain (definition form; see e_inf_gap)
    Mat3 K_inf;       // wryness of the polar rotation field
    Mat2 G_inf;       // change of metric against the rotated frame
    Mat3 R_inf_flat;  // scaling-invariant bending tensor (mixed-form display)
    Row2 N_inf;       // drilling bendings of the polar rotation
    Mat3 sym_EB_CK;   // symmetrized first-order thickness coefficient
    // Diagnostics: agreement between the two strain formulas, transverse
    // shear (zero for the polar rotation), and the axl projection residue.
    double e_inf_gap = 0.0;
    Row2 t_shear;
    double axl_defect = 0.0;
};

namespace detail {

inline Mat3 polar_rotation_of_map(const SurfaceFrame& f0, const SurfaceFrame& fm) {
    try {
        return polar_decompose(append_col(fm.grad_y, fm.n0) * f0.grad_theta_inv).R;
    } catch (const Error& e) {
        throw Error(ErrorCode::PolarFailure,
                    std::string("polar factor of the deformation gradient: ") + e.what());
    }
}

}  // namespace detail

inline ConstrainedStrainSet constrained_strains(const SurfacePatch& y0, const SurfacePatch& m,
                                                const Vec2& x) {
    const SurfaceFrame f0 = frame_at(y0, x);
    const SurfaceFrame fm = frame_at(m, x);
    const Mat3& gt = f0.grad_theta;
    const Mat3& gti = f0.grad_theta_inv;
    const Mat3 gtit = transpose(gti);

    ConstrainedStrainSet s;
    s.Q_inf = detail::polar_rotation_of_map(f0, fm);

    // Strain, definition form.
    s.E_inf = transpose(s.Q_inf) * append_col(fm.grad_y, s.Q_inf * f0.n0) * gti - identity3();

    // Strain, square-root-difference form. Both Gram lifts have a structural
    // zero eigenvalue along n0 (the flat lift kills the normal direction), so
    // the clamp inside spd_sqrt is what makes this branch well defined.
    const Mat3 sqrt_m = spd_sqrt(gtit * lift_flat(fm.I) * gti);
    const Mat3 sqrt_0 = spd_sqrt(gtit * lift_flat(f0.I) * gti);
    s.e_inf_gap = norm(s.E_inf - (sqrt_m - sqrt_0));

    // Wryness of the polar rotation field: central differences of Q_inf over
    // the parameter point.
    RotJet rj;
    rj.Q = s.Q_inf;
    for (int axis = 0; axis < 2; ++axis) {
        const double h = 6e-6 * (1.0 + std::abs(x[axis]));
        Vec2 xp = x, xm = x;
        xp[axis] += h;
        xm[axis] -= h;
        const Mat3 qp = detail::polar_rotation_of_map(frame_at(y0, xp), frame_at(m, xp));
        const Mat3 qm = detail::polar_rotation_of_map(frame_at(y0, xm), frame_at(m, xm));
        (axis == 0 ? rj.d1 : rj.d2) = (1.0 / (2.0 * h)) * (qp - qm);
    }
    const detail::Wryness w = detail::wryness_of(rj);
    s.axl_defect = w.defect;
    s.K_inf = from_cols(w.k1, w.k2, Vec3{}) * gti;
    s.N_inf = {dot(f0.n0, w.k1), dot(f0.n0, w.k2)};

    const Mat32 rot_ty = s.Q_inf * f0.grad_y;
    s.G_inf = transpose(rot_ty) * fm.grad_y - f0.I;
    const Vec3 rot_n = s.Q_inf * f0.n0;
    s.t_shear = {dot(rot_n, col(fm.grad_y, 0)), dot(rot_n, col(fm.grad_y, 1))};

    const Mat32 grad_rot_n = cols32(rj.d1 * f0.n0 + s.Q_inf * col(f0.grad_n, 0),
                                    rj.d2 * f0.n0 + s.Q_inf * col(f0.grad_n, 1));
    const Mat2 r_inf = -1.0 * (transpose(rot_ty) * grad_rot_n) - f0.II;
    s.sym_EB_CK = -1.0 * (gtit * lift_flat(sym(r_inf - s.G_inf * f0.L)) * gti);

    // Bending tensor, mixed form: second forms decorated by the inverse-Gram
    // square roots (the reference factor is the identity by construction, but
    // the display is evaluated as written).
    Mat3 stretch_m = spd_sqrt(gt * lift_hat(inverse(fm.I)) * transpose(gt));
#ifdef SHELLKIT_FAULT_FLIP_RINF_SQRT
    // Fault-probe build: corrupt the deformed-state square-root factor to
    // confirm the verification checks notice. Never defined in regular builds.
    stretch_m = -1.0 * stretch_m;
#endif
    const Mat3 stretch_0 = spd_sqrt(gt * lift_hat(inverse(f0.I)) * transpose(gt));
    const Mat3 inner = stretch_m * (gtit * lift_flat(fm.II) * gti) -
                       stretch_0 * (gtit * lift_flat(f0.II) * gti);
    s.R_inf_flat = transpose(gt) * inner * gt;

    return s;
}

// ---------------------------------------------------------------------------
// Historical curvature-change proposals (for numeric comparison)
// ---------------------------------------------------------------------------

struct AcharyaTensors {
    Mat3 R_tilde;  // stretch-weighted second-form difference
    Mat3 R_sym;    // its symmetric part
};

inline AcharyaTensors acharya_tensors(const SurfacePatch& y0, const SurfacePatch& m,
                                      const Vec2& x) {
    const SurfaceFrame f0 = frame_at(y0, x);
    const SurfaceFrame fm = frame_at(m, x);
    const Mat3 gti = f0.grad_theta_inv;
    const Mat3 gtit = transpose(gti);

    // The lifted Gram again has the structural zero eigenvalue along n0.
    const Mat3 stretch = spd_sqrt(gtit * lift_flat(fm.I) * gti);
    AcharyaTensors a;
    a.R_tilde = -1.0 * (gtit * lift_flat(fm.II) * gti -
                        stretch * (gtit * lift_flat(f0.II) * gti));
    a.R_sym = sym(a.R_tilde);
    return a;
}

// Third-form bending measure of a deformed plate: (grad n)^T grad n.
inline Mat2 virga_plate_tensor(const SurfacePatch& m, const Vec2& x) {
    return frame_at(m, x).III;
}

// ---------------------------------------------------------------------------
// Director-based strains
// ---------------------------------------------------------------------------

struct NaghdiStrains {
    Mat2 R_N;  // bending
    Row2 T_N;  // transverse shear
    Mat2 P_N;  // director-gradient (third-form) strain
};

inline NaghdiStrains naghdi_strains(const SurfacePatch& y0, const SurfacePatch& m,
                                    const VectorField& d, const Vec2& x) {
    const SurfaceFrame f0 = frame_at(y0, x);
    const SurfaceFrame fm = frame_at(m, x);
    const Jet2 dj = d.jet(x);
    const Mat32 grad_d = cols32(dj.d1, dj.d2);

    NaghdiStrains n;
    // -[sym((grad m)^T grad d) - (grad y0)^T grad n0]; the subtrahend is -II
    // in this library's curvature-form sign convention.
    n.R_N = -1.0 * (sym(transpose(fm.grad_y) * grad_d) + f0.II);
    n.T_N = {dot(dj.p, col(fm.grad_y, 0)), dot(dj.p, col(fm.grad_y, 1))};
    n.P_N = transpose(grad_d) * grad_d - f0.III;
    return n;
}

// Director field d = n(m): unit normal of the deformed surface. Only the
// first-order jet is populated; director consumers never differentiate twice.
inline VectorField normal_director(const SurfacePatch& m) {
    return VectorField::analytic(
        [m](const Vec2& x) {
            const SurfaceFrame f = frame_at(m, x);
            Jet2 j;
            j.p = f.n0;
            j.d1 = col(f.grad_n, 0);
            j.d2 = col(f.grad_n, 1);
            return j;
        },
        m.domain());
}

// ---------------------------------------------------------------------------
// Through-thickness strain reconstruction
// ---------------------------------------------------------------------------

// Quadratic-in-x3 strain of the reconstructed three-dimensional deformation.
// The x3^0, x3^1, x3^2 brackets combine the constrained strain, its
// first-order thickness coefficient, and the second-order tail; the trace
// corrections implement the plane-stress elimination of the normal strain.
inline Mat3 reconstruct_3d_strain(const ConstrainedStrainSet& cs, const SurfaceFrame& f0,
                                  double lambda, double mu, double x3, bool symmetrized) {
    if (!(lambda + 2.0 * mu > 0.0))
        throw Error(ErrorCode::InvalidMaterial, "lambda + 2 mu must be positive");
    const double c = lambda / (lambda + 2.0 * mu);
    const Mat3 nn = outer(f0.n0, f0.n0);

    const Mat3 eb_ck = cs.E_inf * f0.B + f0.C * cs.K_inf;
    const Mat3 tail = eb_ck * f0.B;

    const Mat3 coef0 = (symmetrized ? sym(cs.E_inf) : cs.E_inf) - c * trace(cs.E_inf) * nn;
    const Mat3 coef1 = (symmetrized ? sym(eb_ck) : eb_ck) - c * trace(eb_ck) * nn;
    const Mat3 coef2 = symmetrized ? sym(tail) : tail;
    return coef0 + x3 * coef1 + (x3 * x3) * coef2;
}

// ---------------------------------------------------------------------------
// Thickness-stretch ansatz coefficients
// ---------------------------------------------------------------------------

struct ThicknessProfile {
    double rho_m = 1.0;  // linear thickness-stretch coefficient
    double rho_b = 0.0;  // quadratic (bending-induced) coefficient
};

inline ThicknessProfile thickness_ansatz(const SurfacePatch& y0, const SurfacePatch& m,
                                         const RotationField& Q, double lambda, double mu,
                                         const Vec2& x) {
    if (!(lambda + 2.0 * mu > 0.0))
        throw Error(ErrorCode::InvalidMaterial, "lambda + 2 mu must be positive");
    const double c = lambda / (lambda + 2.0 * mu);

    const SurfaceFrame f0 = frame_at(y0, x);
    const Jet2 jm = m.jet(x);
    const Mat32 grad_m = cols32(jm.d1, jm.d2);
    const RotJet rj = Q.jet(x);

    const Mat3 qt = transpose(rj.Q);
    const Mat3 pulled_m = qt * append_zero_col(grad_m) * f0.grad_theta_inv;

    ThicknessProfile p;
    p.rho_m = 1.0 - c * (trace(pulled_m) - 2.0);

    const Mat32 grad_rot_n = cols32(rj.d1 * f0.n0 + rj.Q * col(f0.grad_n, 0),
                                    rj.d2 * f0.n0 + rj.Q * col(f0.grad_n, 1));
    const double bend = trace(qt * append_zero_col(grad_rot_n) * f0.grad_theta_inv);
    const double cross = trace(pulled_m * append_zero_col(f0.grad_n) * f0.grad_theta_inv);
    p.rho_b = -c * bend + c * cross;
    return p;
}

inline Vec3 ansatz_point(const SurfacePatch& y0, const SurfacePatch& m, const RotationField& Q,
                         double lambda, double mu, const Vec2& x, double x3) {
    const ThicknessProfile p = thickness_ansatz(y0, m, Q, lambda, mu, x);
    const Vec3 director = Q.value(x) * frame_at(y0, x).n0;
    return m.point(x) + (x3 * p.rho_m + 0.5 * x3 * x3 * p.rho_b) * director;
}

}  // namespace shellkit
