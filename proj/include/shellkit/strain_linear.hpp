#pragma once

// Infinitesimal (linearised) strain measures for shells, plus the first
// variations of the fundamental forms along a displacement field.
//
// Everything here is the eta-derivative at 0 of the finite measures in
// strain_nonlinear.hpp along y0 + eta*v (and, for the micro-rotation models,
// Q = exp(anti(eta*theta))).  Closed forms are cheap and exact; the test
// suite checks each of them against central-difference derivatives of the
// finite theory so a sign slip in any one formula cannot survive.

#include <cmath>
#include <cstdlib>

#include "shellkit/fields.hpp"

namespace shellkit {

// Membrane / curvature-change pair of the classical linear shell model:
// G = sym((grad y0)^T grad v) and R = d/deta II.  Both symmetric 2x2.
struct KoiterLinearStrains {
    Mat2 G;
    Mat2 R;
};

// `direct` differentiates the fundamental forms in ambient coordinates;
// `christoffel` evaluates the classical covariant-component expressions.
// They agree to FD accuracy (the covariant curvature form needs one level
// of numerical differentiation for the surface data it consumes).
enum class KoiterForm { direct, christoffel };

// Linearised strain bundle shared by the micro-rotation models.  Ops fill
// the fields they define and leave the rest value-initialised:
//   cosserat_linear    -> G_K..K_lin
//   constrained_linear -> everything (theta is induced by v)
struct LinearStrainSet {
    Mat2 G_K{};            // symmetric membrane strain
    Mat2 R_K{};            // linearised second fundamental form
    Mat2 G_lin{};          // in-plane strain, unsymmetrised
    Row2 T_lin{};          // transverse shear row
    Mat2 R_lin{};          // bending strain
    Row2 N_lin{};          // normal components of the wryness columns
    Mat3 K_lin{};          // lifted wryness (grad theta | 0) [grad Theta]^-1
    Vec3 theta_inf{};      // constrained infinitesimal rotation vector
    Mat2 R_inf_lin{};      // R_K - G_K L  (constrained bending)
    Mat2 R_KSB{};          // R_K - sym(G_K L)
    Mat2 R_AL{};           // R_K - 2 sym(G_K L)  (change of curvature)
    // Images of the constrained measures in the lifted 3x3 frame.  These are
    // assembled from (G_K, R_K, L); the tests rebuild them independently from
    // the rotation field to pin the identities they encode.
    Mat3 E_inf_lin{};      // [grad Theta]^-T (G_K)^flat [grad Theta]^-1
    Mat3 CK_inf_lin{};     // alternator * wryness = -lift of R_K - G_K L
    Mat3 sym_EB_CK_lin{};  // sym(E B + C K)      = -lift of R_AL
};

namespace detail {

// d/deta of the unit normal along y0 + eta*v: the classical
// -sum_a <n0, d_a v> a^a.  Tangent to the surface.
inline Vec3 normal_variation(const SurfaceFrame& f, const Jet2& vj) {
    return -1.0 * (dot(f.n0, vj.d1) * f.a_contra[0] +
                   dot(f.n0, vj.d2) * f.a_contra[1]);
}

// Common step for the few spots where a surface quantity has to be
// differentiated across the chart (no third-order jets are carried).
inline double param_step(double coord) { return 6e-6 * (1.0 + std::abs(coord)); }

}  // namespace detail

inline KoiterLinearStrains koiter_linear(const SurfacePatch& y0, const VectorField& v,
                                         const Vec2& x, KoiterForm form = KoiterForm::direct) {
    const SurfaceFrame f = frame_at(y0, x);
    const Jet2 vj = v.jet(x);

    if (form == KoiterForm::direct) {
        KoiterLinearStrains k;
        k.G = sym(transpose(f.grad_y) * cols32(vj.d1, vj.d2));
        // d/deta II = <n0, dd_ab v - Gamma^g_ab d_g v>: the Christoffel part
        // absorbs the normal variation hitting dd_ab y0.
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                Vec3 w = second_partial(vj, a, b);
                w = w - f.gamma[0][a][b] * vj.d1 - f.gamma[1][a][b] * vj.d2;
                k.R(a, b) = dot(f.n0, w);
            }
        }
        return k;
    }

    // Covariant-component route.  v_a = <v, a_a>, v3 = <v, n0>; the strain
    // formulas live entirely in chart components.
    const Jet2 j = y0.jet(x);
    double vcov[2], dvcov[2][2];  // dvcov[c][b] = d_b <v, a_c>
    for (int c = 0; c < 2; ++c) {
        vcov[c] = dot(vj.p, f.a_co[c]);
        const Vec3 dv[2] = {vj.d1, vj.d2};
        const Vec3 dy[2] = {j.d1, j.d2};
        for (int b = 0; b < 2; ++b)
            dvcov[c][b] = dot(dv[b], dy[c]) + dot(vj.p, second_partial(j, c, b));
    }
    const double v3 = dot(vj.p, f.n0);
    double dv3[2];  // d_g <v, n0>
    for (int g = 0; g < 2; ++g) {
        const Vec3 dv = (g == 0) ? vj.d1 : vj.d2;
        dv3[g] = dot(dv, f.n0) + dot(vj.p, col(f.grad_n, g));
    }

    KoiterLinearStrains k;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            double s = 0.5 * (dvcov[a][b] + dvcov[b][a]) - f.II(a, b) * v3;
            for (int g = 0; g < 2; ++g) s -= f.gamma[g][a][b] * vcov[g];
            k.G(a, b) = s;
        }

    // The curvature form needs d_a d_b v3 and d_a L across the chart; both
    // are taken by central differences of first-order analytic data.
    Mat2 dL[2];
    double dg[2][2];  // dg[a][b] = d_a (d_b v3)
    for (int a = 0; a < 2; ++a) {
        const double h = detail::param_step(x[a]);
        Vec2 xp = x, xm = x;
        xp[a] += h;
        xm[a] -= h;
        const SurfaceFrame fp = frame_at(y0, xp), fm = frame_at(y0, xm);
        const Jet2 vp = v.jet(xp), vm = v.jet(xm);
        dL[a] = (1.0 / (2.0 * h)) * (fp.L - fm.L);
        for (int b = 0; b < 2; ++b) {
            const Vec3 dvp = (b == 0) ? vp.d1 : vp.d2;
            const Vec3 dvm = (b == 0) ? vm.d1 : vm.d2;
            const double gp = dot(dvp, fp.n0) + dot(vp.p, col(fp.grad_n, b));
            const double gm = dot(dvm, fm.n0) + dot(vm.p, col(fm.grad_n, b));
            dg[a][b] = (gp - gm) / (2.0 * h);
        }
    }

    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            double r = 0.5 * (dg[a][b] + dg[b][a]);  // FD noise is not symmetric
            for (int g = 0; g < 2; ++g) {
                r -= f.gamma[g][a][b] * dv3[g];
                r -= f.L(g, a) * f.II(g, b) * v3;
                double cov_b = dvcov[g][b], cov_a = dvcov[g][a];
                for (int t = 0; t < 2; ++t) {
                    cov_b -= f.gamma[t][b][g] * vcov[t];
                    cov_a -= f.gamma[t][a][g] * vcov[t];
                }
                r += f.L(g, a) * cov_b + f.L(g, b) * cov_a;
            }
            for (int t = 0; t < 2; ++t) {
                double w = dL[a](t, b);
                for (int g = 0; g < 2; ++g)
                    w += f.gamma[t][a][g] * f.L(g, b) - f.gamma[g][a][b] * f.L(t, g);
                r += w * vcov[t];
            }
            k.R(a, b) = r;
        }
    return k;
}

inline LinearStrainSet cosserat_linear(const SurfacePatch& y0, const VectorField& v,
                                       const VectorField& theta, const Vec2& x) {
    const SurfaceFrame f = frame_at(y0, x);
    const Jet2 vj = v.jet(x);
    const Jet2 tj = theta.jet(x);
    const Mat32 grad_v = cols32(vj.d1, vj.d2);
    const Mat32 grad_th = cols32(tj.d1, tj.d2);

    LinearStrainSet s;
    s.G_lin = transpose(f.grad_y) * grad_v +
              transpose(vec_cross_mat(tj.p, f.grad_y)) * f.grad_y;
    const Vec3 tn = cross(tj.p, f.n0);
    s.T_lin = {dot(f.n0, vj.d1) + dot(tn, f.a_co[0]),
               dot(f.n0, vj.d2) + dot(tn, f.a_co[1])};
    s.R_lin = -1.0 * (transpose(vec_cross_mat(f.n0, f.grad_y)) * grad_th);
    s.N_lin = {dot(f.n0, tj.d1), dot(f.n0, tj.d2)};
    s.K_lin = append_zero_col(grad_th) * f.grad_theta_inv;

    const KoiterLinearStrains k = koiter_linear(y0, v, x);
    s.G_K = k.G;
    s.R_K = k.R;
    return s;
}

namespace detail {

// Infinitesimal rotation induced on a shear-free shell by the displacement v:
// the skew part of the varied frame map (grad v | dn) [grad Theta]^-1, i.e.
// the eta-derivative of the polar rotation of the displaced surface.  Split
// into a drilling part normal to the surface and a tangential part that tilts
// n0 along with the deformation.
inline Vec3 induced_rotation(const SurfaceFrame& f, const Jet2& vj) {
    const double root_det = std::sqrt(det(f.I));
    if (root_det < 1e-12) throw Error(ErrorCode::Degenerate, "induced_rotation: flat metric");
    // area alternator and its exact inverse
    const Mat2 c_inv = (1.0 / root_det) * Mat2{{{0, -1}, {1, 0}}};
    const Mat2 m = transpose(f.grad_y) * cols32(vj.d1, vj.d2);
    const double drill = -0.5 * trace(skw(m) * c_inv);
    const Vec3 dn = normal_variation(f, vj);
    return drill * f.n0 + cross(f.n0, dn);
}

}  // namespace detail

inline LinearStrainSet constrained_linear(const SurfacePatch& y0, const VectorField& v,
                                          const Vec2& x) {
    const SurfaceFrame f = frame_at(y0, x);
    const Jet2 vj = v.jet(x);

    LinearStrainSet s;
    s.theta_inf = detail::induced_rotation(f, vj);

    // The rotation is a derived field of x; its gradient (for the wryness) is
    // taken by central differences, re-deriving the rotation at the shifted
    // points.
    Vec3 dth[2];
    for (int a = 0; a < 2; ++a) {
        const double h = detail::param_step(x[a]);
        Vec2 xp = x, xm = x;
        xp[a] += h;
        xm[a] -= h;
        const Vec3 tp = detail::induced_rotation(frame_at(y0, xp), v.jet(xp));
        const Vec3 tm = detail::induced_rotation(frame_at(y0, xm), v.jet(xm));
        dth[a] = (1.0 / (2.0 * h)) * (tp - tm);
    }
    const Mat32 grad_th = cols32(dth[0], dth[1]);

    const Mat32 grad_v = cols32(vj.d1, vj.d2);
    s.G_lin = transpose(f.grad_y) * grad_v +
              transpose(vec_cross_mat(s.theta_inf, f.grad_y)) * f.grad_y;
    const Vec3 tn = cross(s.theta_inf, f.n0);
    s.T_lin = {dot(f.n0, vj.d1) + dot(tn, f.a_co[0]),
               dot(f.n0, vj.d2) + dot(tn, f.a_co[1])};
    s.R_lin = -1.0 * (transpose(vec_cross_mat(f.n0, f.grad_y)) * grad_th);
    s.N_lin = {dot(f.n0, dth[0]), dot(f.n0, dth[1])};
    s.K_lin = append_zero_col(grad_th) * f.grad_theta_inv;

    const KoiterLinearStrains k = koiter_linear(y0, v, x);
    s.G_K = k.G;
    s.R_K = k.R;

    const Mat2 gl = s.G_K * f.L;
    s.R_inf_lin = s.R_K - gl;
    s.R_KSB = s.R_K - sym(gl);
    s.R_AL = s.R_K - 2.0 * sym(gl);

    const Mat3 gti = f.grad_theta_inv;
    const Mat3 gtit = transpose(gti);
    s.E_inf_lin = gtit * lift_flat(s.G_K) * gti;
    s.CK_inf_lin = -1.0 * (gtit * lift_flat(s.R_inf_lin) * gti);
    s.sym_EB_CK_lin = -1.0 * (gtit * lift_flat(s.R_AL) * gti);
    return s;
}

// First variations of the fundamental forms along v, by central differences
// of the displaced-surface frames (with Richardson extrapolation) and by the
// closed formulas.  Returned side by side; agreement is the caller's check.
struct VariationRates {
    Mat2 dI{}, dII{}, dIII{}, dL{};
    double dH = 0.0, dK = 0.0;
};

struct VariationDerivatives {
    VariationRates fd;
    VariationRates closed;
};

inline VariationDerivatives variation_derivatives(const SurfacePatch& y0, const VectorField& v,
                                                  const Vec2& x) {
    VariationDerivatives out;

    // Finite differences of frame data.  The second fundamental form already
    // carries second chart derivatives, so the eta-step is kept large and a
    // Richardson pass removes the leading quadratic error.
    auto rate_at = [&](double eta) {
        const SurfaceFrame fp = frame_at(displaced(y0, v, eta), x);
        const SurfaceFrame fm = frame_at(displaced(y0, v, -eta), x);
        VariationRates r;
        const double w = 1.0 / (2.0 * eta);
        r.dI = w * (fp.I - fm.I);
        r.dII = w * (fp.II - fm.II);
        r.dIII = w * (fp.III - fm.III);
        r.dL = w * (fp.L - fm.L);
        r.dH = w * (fp.H - fm.H);
        r.dK = w * (fp.K - fm.K);
        return r;
    };
    const VariationRates c = rate_at(1e-4);   // coarse
    const VariationRates h = rate_at(5e-5);   // halved
    auto rich = [](const Mat2& coarse, const Mat2& half) {
        return (1.0 / 3.0) * (4.0 * half - coarse);
    };
    out.fd.dI = rich(c.dI, h.dI);
    out.fd.dII = rich(c.dII, h.dII);
    out.fd.dIII = rich(c.dIII, h.dIII);
    out.fd.dL = rich(c.dL, h.dL);
    out.fd.dH = (4.0 * h.dH - c.dH) / 3.0;
    out.fd.dK = (4.0 * h.dK - c.dK) / 3.0;

    const SurfaceFrame f = frame_at(y0, x);
    const KoiterLinearStrains k = koiter_linear(y0, v, x);
    const Mat2 i_inv = inverse(f.I);
    const Mat2 r_al = k.R - 2.0 * sym(k.G * f.L);

    out.closed.dI = 2.0 * k.G;
    out.closed.dII = k.R;
    out.closed.dL = i_inv * (k.R - 2.0 * (k.G * f.L));
    out.closed.dIII = 2.0 * sym(transpose(f.L) * (k.R - k.G * f.L));
    out.closed.dH = 0.5 * trace(i_inv * r_al);
    // Jacobi's rule dK = tr(adj(L) dL); the adjugate stays finite where L is
    // singular (cylinders, plates), unlike the K tr(L^-1 dL) form.
    out.closed.dK = trace(adjugate(f.L) * (i_inv * r_al));
    return out;
}

}  // namespace shellkit
