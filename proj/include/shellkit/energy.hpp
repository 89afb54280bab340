#pragma once

// Quadratic energy densities, the Koiter functional, the thickness-expanded
// midsurface functional (eight terms through fifth order in h) for the
// rotation-carrying shell models, and a desk-scale nodal minimizer.
//
// All functionals integrate over the reference chart with tensor
// Gauss-Legendre quadrature; reference curvatures H and K enter the
// thickness coefficients frozen at each quadrature point.

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "shellkit/strain_linear.hpp"
#include "shellkit/strain_nonlinear.hpp"

namespace shellkit {

struct MaterialParams {
    double mu;      // shear modulus
    double lambda;  // second Lamé modulus
    double mu_c;    // couple modulus (may be 0: no independent-rotation penalty)
    double L_c;     // internal length
    double b1, b2, b3;  // curvature energy weights
    double h;       // shell thickness

    MaterialParams(double mu_, double lambda_, double mu_c_, double L_c_, double b1_, double b2_,
                   double b3_, double h_)
        : mu(mu_), lambda(lambda_), mu_c(mu_c_), L_c(L_c_), b1(b1_), b2(b2_), b3(b3_), h(h_) {
        if (!(mu > 0.0)) throw Error(ErrorCode::InvalidMaterial, "mu must be positive");
        if (!(lambda + 2.0 * mu > 0.0))
            throw Error(ErrorCode::InvalidMaterial, "lambda + 2 mu must be positive");
        if (!(mu_c >= 0.0)) throw Error(ErrorCode::InvalidMaterial, "mu_c must be non-negative");
        if (!(L_c > 0.0)) throw Error(ErrorCode::InvalidMaterial, "L_c must be positive");
        if (!(b1 > 0.0 && b2 > 0.0 && b3 > 0.0))
            throw Error(ErrorCode::InvalidMaterial, "curvature weights must be positive");
        if (!(h > 0.0)) throw Error(ErrorCode::InvalidMaterial, "thickness must be positive");
    }

    // Coefficient of tr^2 in the plane-stress-reduced quadratic form.
    double tr_coef() const { return lambda * mu / (lambda + 2.0 * mu); }
};

// The density family.  The *Inf kinds are the symmetrised variants used by
// the constrained models: identical except that the skew part carries no
// energy (and the membrane-type trace weight of Wmp acts on the sym part,
// which changes nothing since tr X = tr sym X).
enum class DensityKind { Wshell, WshellBilinear, Wmp, Wcurv, WshellInf, WshellInfBilinear, WmpInf };

namespace detail {

inline double dev_sym_norm2(const Mat3& x) {
    const Mat3 s = sym(x);
    const double t = trace(s) / 3.0;
    Mat3 d = s;
    d(0, 0) -= t;
    d(1, 1) -= t;
    d(2, 2) -= t;
    return fdot(d, d);
}

}  // namespace detail

inline double density_eval(DensityKind kind, const Mat3& x, const MaterialParams& p) {
    const Mat3 s = sym(x);
    const Mat3 a = skw(x);
    const double t = trace(x);
    switch (kind) {
        case DensityKind::Wshell:
            return p.mu * fdot(s, s) + p.mu_c * fdot(a, a) + p.tr_coef() * t * t;
        case DensityKind::Wmp:
            return p.mu * fdot(s, s) + p.mu_c * fdot(a, a) + 0.5 * p.lambda * t * t;
        case DensityKind::Wcurv:
            return p.mu * p.L_c * p.L_c *
                   (p.b1 * detail::dev_sym_norm2(x) + p.b2 * fdot(a, a) + p.b3 * t * t);
        case DensityKind::WshellInf:
            return p.mu * fdot(s, s) + p.tr_coef() * t * t;
        case DensityKind::WmpInf:
            return p.mu * fdot(s, s) + 0.5 * p.lambda * t * t;
        default:
            throw Error(ErrorCode::InvalidInput, "density_eval: bilinear kind needs two arguments");
    }
}

inline double density_eval(DensityKind kind, const Mat3& x, const Mat3& y,
                           const MaterialParams& p) {
    switch (kind) {
        case DensityKind::WshellBilinear:
            return p.mu * fdot(sym(x), sym(y)) + p.mu_c * fdot(skw(x), skw(y)) +
                   p.tr_coef() * trace(x) * trace(y);
        case DensityKind::WshellInfBilinear:
            return p.mu * fdot(sym(x), sym(y)) + p.tr_coef() * trace(x) * trace(y);
        default:
            throw Error(ErrorCode::InvalidInput, "density_eval: unary kind takes one argument");
    }
}

// ---------------------------------------------------------------------------
// Quadrature

struct QuadratureSpec {
    int order = 4;     // Gauss-Legendre points per direction per cell
    int cells1 = 16;   // cell partition of the chart domain
    int cells2 = 16;
};

namespace detail {

struct GaussPoint {
    double x;  // abscissa on [-1, 1]
    double w;
};

inline std::vector<GaussPoint> gauss_legendre(int order) {
    if (order < 1 || order > 64)
        throw Error(ErrorCode::QuadratureOrderInvalid,
                    "Gauss order " + std::to_string(order) + " outside [1, 64]");
    std::vector<GaussPoint> pts(static_cast<size_t>(order));
    const int n = order;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = -p1 / dp;
            x += dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        pts[static_cast<size_t>(i)] = {-x, w};  // ascending order
        pts[static_cast<size_t>(n - 1 - i)] = {x, w};
    }
    if (n % 2 == 1) pts[static_cast<size_t>(n / 2)].x = 0.0;  // exact middle node
    return pts;
}

// Visit every quadrature point of the tensor rule over `dom`, cell-major then
// point-major, with the full area weight.  The fixed visiting order makes
// every functional below reproducible bit-for-bit.
template <class Fn>
void for_each_quad_point(const Domain& dom, const QuadratureSpec& q, Fn&& fn) {
    if (q.cells1 < 1 || q.cells2 < 1)
        throw Error(ErrorCode::InvalidInput, "quadrature needs at least one cell per direction");
    const std::vector<GaussPoint> g = gauss_legendre(q.order);
    const double dx1 = (dom.hi1 - dom.lo1) / q.cells1;
    const double dx2 = (dom.hi2 - dom.lo2) / q.cells2;
    const double jac = 0.25 * dx1 * dx2;  // from the [-1,1]^2 reference cell
    for (int c1 = 0; c1 < q.cells1; ++c1) {
        for (int c2 = 0; c2 < q.cells2; ++c2) {
            const double m1 = dom.lo1 + (c1 + 0.5) * dx1;
            const double m2 = dom.lo2 + (c2 + 0.5) * dx2;
            for (const GaussPoint& a : g) {
                for (const GaussPoint& b : g) {
                    const Vec2 x = {m1 + 0.5 * dx1 * a.x, m2 + 0.5 * dx2 * b.x};
                    fn(x, a.w * b.w * jac);
                }
            }
        }
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Koiter functional

inline double koiter_energy(const SurfacePatch& y0, const SurfacePatch& m_or_v,
                            const MaterialParams& p, const QuadratureSpec& quad = {},
                            bool linear = false) {
    double acc = 0.0;
    const double c_tr = p.tr_coef();
    const double wm = p.h;
    const double wb = p.h * p.h * p.h / 12.0;
    detail::for_each_quad_point(y0.domain(), quad, [&](const Vec2& x, double w) {
        const SurfaceFrame f = frame_at(y0, x);
        Mat2 g, r;
        if (linear) {
            const KoiterLinearStrains k = koiter_linear(y0, m_or_v, x);
            g = k.G;
            r = k.R;
        } else {
            const KoiterStrains k = koiter_strains(y0, m_or_v, x);
            g = k.G;
            r = k.R;
        }
        const Mat3 gti = f.grad_theta_inv;
        const Mat3 e = transpose(gti) * lift_flat(g) * gti;
        const Mat3 ff = transpose(gti) * lift_flat(r) * gti;
        const double dens = wm * (p.mu * fdot(e, e) + c_tr * trace(e) * trace(e)) +
                            wb * (p.mu * fdot(ff, ff) + c_tr * trace(ff) * trace(ff));
        acc += dens * f.det_grad_theta * w;
    });
    return acc;
}

// ---------------------------------------------------------------------------
// Thickness-expanded functional

struct EnergyBreakdown {
    double membrane = 0.0;          // (h + K h^3/12) on the midsurface strain
    double membrane_bending = 0.0;  // (h^3/12 - K h^5/80) on E B + C K
    double coupling_H = 0.0;        // -h^3/3 H cross term
    double coupling_B = 0.0;        // h^3/6 cross term against (E B + C K) B
    double mp_term = 0.0;           // h^5/80 membrane-type term
    double curv_h1 = 0.0;           // (h - K h^3/12) curvature energy
    double curv_h3 = 0.0;           // (h^3/12 - K h^5/80) on K B
    double curv_h5 = 0.0;           // h^5/80 on K B^2
    double total = 0.0;

    void finalize() {
        total = membrane + membrane_bending + coupling_H + coupling_B + mp_term + curv_h1 +
                curv_h3 + curv_h5;
    }
};

// Thickness coefficients of the eight terms, with the reference curvatures
// frozen.  Exposed so reports can surface their signs (for thick shells on
// strongly curved references some may turn negative).
struct EnergyCoefficients {
    double membrane, membrane_bending, coupling_H, coupling_B, mp_term;
    double curv_h1, curv_h3, curv_h5;
};

inline EnergyCoefficients energy_coefficients(const MaterialParams& p, double mean_curv,
                                              double gauss_curv) {
    const double h3 = p.h * p.h * p.h;
    const double h5 = h3 * p.h * p.h;
    EnergyCoefficients c{};
    c.membrane = p.h + gauss_curv * h3 / 12.0;
    c.membrane_bending = h3 / 12.0 - gauss_curv * h5 / 80.0;
    c.coupling_H = -h3 / 3.0 * mean_curv;
    c.coupling_B = h3 / 6.0;
    c.mp_term = h5 / 80.0;
    c.curv_h1 = p.h - gauss_curv * h3 / 12.0;
    c.curv_h3 = h3 / 12.0 - gauss_curv * h5 / 80.0;
    c.curv_h5 = h5 / 80.0;
    return c;
}

enum class CosseratVariant { unconstrained, modified_constrained, linear, linear_constrained };

namespace detail {

// One quadrature point's contribution, given the midsurface strain E and the
// wryness K in the lifted frame.  `constrained` switches the first five
// densities to their symmetrised variants; the curvature terms always keep
// their skew part.
inline void accumulate_terms(EnergyBreakdown& acc, const SurfaceFrame& f, const Mat3& e,
                             const Mat3& k, const MaterialParams& p, bool constrained, double w) {
    const EnergyCoefficients c = energy_coefficients(p, f.H, f.K);
    const Mat3 eb_ck = e * f.B + f.C * k;
    const Mat3 eb_ck_b = eb_ck * f.B;
    const Mat3 kb = k * f.B;
    const Mat3 kbb = kb * f.B;
    const DensityKind w_sh = constrained ? DensityKind::WshellInf : DensityKind::Wshell;
    const DensityKind w_bi =
        constrained ? DensityKind::WshellInfBilinear : DensityKind::WshellBilinear;
    const DensityKind w_mp = constrained ? DensityKind::WmpInf : DensityKind::Wmp;

    const double da = f.det_grad_theta * w;
    acc.membrane += c.membrane * density_eval(w_sh, e, p) * da;
    acc.membrane_bending += c.membrane_bending * density_eval(w_sh, eb_ck, p) * da;
    acc.coupling_H += c.coupling_H * density_eval(w_bi, e, eb_ck, p) * da;
    acc.coupling_B += c.coupling_B * density_eval(w_bi, e, eb_ck_b, p) * da;
    acc.mp_term += c.mp_term * density_eval(w_mp, eb_ck_b, p) * da;
    acc.curv_h1 += c.curv_h1 * density_eval(DensityKind::Wcurv, k, p) * da;
    acc.curv_h3 += c.curv_h3 * density_eval(DensityKind::Wcurv, kb, p) * da;
    acc.curv_h5 += c.curv_h5 * density_eval(DensityKind::Wcurv, kbb, p) * da;
}

}  // namespace detail

// Finite-rotation variants; Q is ignored when the rotation is derived from m.
inline EnergyBreakdown cosserat_energy(const SurfacePatch& y0, const SurfacePatch& m,
                                       const RotationField& Q, const MaterialParams& p,
                                       const QuadratureSpec& quad = {},
                                       CosseratVariant variant = CosseratVariant::unconstrained) {
    if (quad.order < 2)
        throw Error(ErrorCode::QuadratureOrderInvalid,
                    "thickness-expanded functional needs Gauss order >= 2");
    if (variant != CosseratVariant::unconstrained &&
        variant != CosseratVariant::modified_constrained)
        throw Error(ErrorCode::InvalidInput,
                    "linear variants take displacement and rotation-vector fields");
    EnergyBreakdown acc;
    detail::for_each_quad_point(y0.domain(), quad, [&](const Vec2& x, double w) {
        const SurfaceFrame f = frame_at(y0, x);
        if (variant == CosseratVariant::unconstrained) {
            const CosseratStrainSet s = cosserat_strains(y0, m, Q, x);
            detail::accumulate_terms(acc, f, s.E_ms, s.K_es, p, false, w);
        } else {
            const ConstrainedStrainSet s = constrained_strains(y0, m, x);
            detail::accumulate_terms(acc, f, s.E_inf, s.K_inf, p, true, w);
        }
    });
    acc.finalize();
    return acc;
}

// Linearised variants over a displacement field and (for the unconstrained
// one) an independent rotation-vector field.
inline EnergyBreakdown cosserat_energy(const SurfacePatch& y0, const VectorField& v,
                                       const VectorField& theta, const MaterialParams& p,
                                       const QuadratureSpec& quad = {},
                                       CosseratVariant variant = CosseratVariant::linear) {
    if (quad.order < 2)
        throw Error(ErrorCode::QuadratureOrderInvalid,
                    "thickness-expanded functional needs Gauss order >= 2");
    if (variant != CosseratVariant::linear && variant != CosseratVariant::linear_constrained)
        throw Error(ErrorCode::InvalidInput,
                    "finite variants take a deformation and a rotation field");
    EnergyBreakdown acc;
    detail::for_each_quad_point(y0.domain(), quad, [&](const Vec2& x, double w) {
        const SurfaceFrame f = frame_at(y0, x);
        if (variant == CosseratVariant::linear) {
            const Jet2 vj = v.jet(x);
            const Jet2 tj = theta.jet(x);
            const Mat3 e =
                append_zero_col(cols32(vj.d1, vj.d2) - vec_cross_mat(tj.p, f.grad_y)) *
                f.grad_theta_inv;
            const Mat3 k = append_zero_col(cols32(tj.d1, tj.d2)) * f.grad_theta_inv;
            detail::accumulate_terms(acc, f, e, k, p, false, w);
        } else {
            const LinearStrainSet s = constrained_linear(y0, v, x);
            detail::accumulate_terms(acc, f, s.E_inf_lin, s.K_lin, p, true, w);
        }
    });
    acc.finalize();
    return acc;
}

// ---------------------------------------------------------------------------
// Nodal minimizer

struct MinimizeReport {
    int iterations = 0;
    double grad_norm = 0.0;
    bool converged = false;
    std::vector<double> energy_trace;  // internal minus load work, per accepted step
};

struct MinimizeResult {
    VectorField v;
    VectorField theta;  // zero field when the rotation is derived from v
    MinimizeReport report;
};

namespace detail {

struct NodalGrid {
    Domain dom;
    int n1 = 0, n2 = 0;  // cells per direction
    double dx1 = 0.0, dx2 = 0.0;

    int nodes1() const { return n1 + 1; }
    int nodes2() const { return n2 + 1; }
    int node_count() const { return nodes1() * nodes2(); }
    int node_index(int i, int j) const { return j * nodes1() + i; }
    bool on_boundary(int i, int j) const { return i == 0 || i == n1 || j == 0 || j == n2; }
    Vec2 node_pos(int i, int j) const { return {dom.lo1 + i * dx1, dom.lo2 + j * dx2}; }

    // Cell containing x (clamped), with local coordinates in [0, 1].
    void locate(const Vec2& x, int& ci, int& cj, double& s, double& t) const {
        ci = std::clamp(static_cast<int>((x[0] - dom.lo1) / dx1), 0, n1 - 1);
        cj = std::clamp(static_cast<int>((x[1] - dom.lo2) / dx2), 0, n2 - 1);
        s = (x[0] - (dom.lo1 + ci * dx1)) / dx1;
        t = (x[1] - (dom.lo2 + cj * dx2)) / dx2;
    }
};

// Bilinear value and first derivatives inside cell (ci, cj).
inline void bilinear_eval(const std::vector<Vec3>& nodes, const NodalGrid& g, int ci, int cj,
                          double s, double t, Vec3& p, Vec3& d1, Vec3& d2) {
    const Vec3& v00 = nodes[static_cast<size_t>(g.node_index(ci, cj))];
    const Vec3& v10 = nodes[static_cast<size_t>(g.node_index(ci + 1, cj))];
    const Vec3& v01 = nodes[static_cast<size_t>(g.node_index(ci, cj + 1))];
    const Vec3& v11 = nodes[static_cast<size_t>(g.node_index(ci + 1, cj + 1))];
    p = (1 - s) * (1 - t) * v00 + s * (1 - t) * v10 + (1 - s) * t * v01 + s * t * v11;
    d1 = (1.0 / g.dx1) * ((1 - t) * (v10 - v00) + t * (v11 - v01));
    d2 = (1.0 / g.dx2) * ((1 - s) * (v01 - v00) + s * (v11 - v10));
}

// Wrap shared nodal values as a VectorField with exact per-cell jets.
inline VectorField nodal_field(const NodalGrid& g, std::shared_ptr<const std::vector<Vec3>> vals) {
    return SurfacePatch::analytic(
        [g, vals](const Vec2& x) {
            int ci, cj;
            double s, t;
            g.locate(x, ci, cj, s, t);
            Jet2 j;
            bilinear_eval(*vals, g, ci, cj, s, t, j.p, j.d1, j.d2);
            const Vec3& v00 = (*vals)[static_cast<size_t>(g.node_index(ci, cj))];
            const Vec3& v10 = (*vals)[static_cast<size_t>(g.node_index(ci + 1, cj))];
            const Vec3& v01 = (*vals)[static_cast<size_t>(g.node_index(ci, cj + 1))];
            const Vec3& v11 = (*vals)[static_cast<size_t>(g.node_index(ci + 1, cj + 1))];
            j.d12 = (1.0 / (g.dx1 * g.dx2)) * (v11 - v10 - v01 + v00);
            return j;  // d11 = d22 = 0 for a bilinear patch
        },
        g.dom);
}

// Reference data cached per quadrature point: the frame at the point and, for
// the derived-rotation variant, frames at the four chart-shifted points its
// rotation gradient differences over.  All shift points stay inside the same
// cell (steps are ~1e-5, Gauss nodes keep ~1e-2 clearance).
struct MinimizeQPoint {
    int ci = 0, cj = 0;
    double s = 0.0, t = 0.0;
    double w = 0.0;
    SurfaceFrame f;
    Vec3 load;
    double hstep[2] = {0.0, 0.0};
    SurfaceFrame fshift[2][2];     // [axis][0 = plus, 1 = minus]
    double sshift[2][2], tshift[2][2];
};

struct MinimizeProblem {
    NodalGrid grid;
    MaterialParams p;
    CosseratVariant variant;
    std::vector<MinimizeQPoint> qpts;   // cell-major
    int qpp = 0;                        // points per cell

    double cell_energy(int ci, int cj, const std::vector<Vec3>& v,
                       const std::vector<Vec3>& th) const {
        const size_t base = static_cast<size_t>((ci * grid.n2 + cj) * qpp);
        double acc = 0.0;
        for (int k = 0; k < qpp; ++k) {
            const MinimizeQPoint& q = qpts[base + static_cast<size_t>(k)];
            Vec3 vp, vd1, vd2;
            bilinear_eval(v, grid, q.ci, q.cj, q.s, q.t, vp, vd1, vd2);
            Mat3 e, kk;
            if (variant == CosseratVariant::linear) {
                Vec3 tp, td1, td2;
                bilinear_eval(th, grid, q.ci, q.cj, q.s, q.t, tp, td1, td2);
                e = append_zero_col(cols32(vd1, vd2) - vec_cross_mat(tp, q.f.grad_y)) *
                    q.f.grad_theta_inv;
                kk = append_zero_col(cols32(td1, td2)) * q.f.grad_theta_inv;
            } else {
                const Mat2 g_k = sym(transpose(q.f.grad_y) * cols32(vd1, vd2));
                const Mat3 gti = q.f.grad_theta_inv;
                e = transpose(gti) * lift_flat(g_k) * gti;
                Vec3 dth[2];
                for (int axis = 0; axis < 2; ++axis) {
                    Vec3 rot[2];
                    for (int side = 0; side < 2; ++side) {
                        Jet2 vj;
                        bilinear_eval(v, grid, q.ci, q.cj, q.sshift[axis][side],
                                      q.tshift[axis][side], vj.p, vj.d1, vj.d2);
                        rot[side] = induced_rotation(q.fshift[axis][side], vj);
                    }
                    dth[axis] = (1.0 / (2.0 * q.hstep[axis])) * (rot[0] - rot[1]);
                }
                kk = append_zero_col(cols32(dth[0], dth[1])) * gti;
            }
            EnergyBreakdown b;
            accumulate_terms(b, q.f, e, kk, p, variant == CosseratVariant::linear_constrained,
                             q.w);
            b.finalize();
            acc += b.total - dot(q.load, vp) * q.f.det_grad_theta * q.w;
        }
        return acc;
    }

    double total_energy(const std::vector<Vec3>& v, const std::vector<Vec3>& th) const {
        double acc = 0.0;
        for (int ci = 0; ci < grid.n1; ++ci)
            for (int cj = 0; cj < grid.n2; ++cj) acc += cell_energy(ci, cj, v, th);
        return acc;
    }

    // Energy of the (at most four) cells whose shape functions see node (i, j).
    double patch_energy(int i, int j, const std::vector<Vec3>& v,
                        const std::vector<Vec3>& th) const {
        double acc = 0.0;
        for (int ci = std::max(0, i - 1); ci <= std::min(grid.n1 - 1, i); ++ci)
            for (int cj = std::max(0, j - 1); cj <= std::min(grid.n2 - 1, j); ++cj)
                acc += cell_energy(ci, cj, v, th);
        return acc;
    }
};

struct Dof {
    bool is_theta;
    int i, j, comp;
};

}  // namespace detail

inline MinimizeResult minimize_displacement(const SurfacePatch& y0, const VectorField& load,
                                            const VectorField& bc, const MaterialParams& p,
                                            int grid1, int grid2,
                                            CosseratVariant variant = CosseratVariant::linear,
                                            int max_iter = 5000) {
    if (variant != CosseratVariant::linear && variant != CosseratVariant::linear_constrained)
        throw Error(ErrorCode::InvalidInput, "minimizer drives the linearised variants only");
    if (grid1 < 4 || grid2 < 4)
        throw Error(ErrorCode::InvalidGrid, "displacement grid must be at least 4x4");

    detail::MinimizeProblem prob{
        {y0.domain(), grid1, grid2, (y0.domain().hi1 - y0.domain().lo1) / grid1,
         (y0.domain().hi2 - y0.domain().lo2) / grid2},
        p,
        variant,
        {},
        0};
    const detail::NodalGrid& grid = prob.grid;

    // Cache reference frames (and rotation-difference stencils) per point.
    {
        const QuadratureSpec quad{2, grid1, grid2};
        prob.qpp = quad.order * quad.order;
        prob.qpts.reserve(static_cast<size_t>(grid1 * grid2 * prob.qpp));
        detail::for_each_quad_point(y0.domain(), quad, [&](const Vec2& x, double w) {
            detail::MinimizeQPoint q;
            grid.locate(x, q.ci, q.cj, q.s, q.t);
            q.w = w;
            q.f = frame_at(y0, x);
            q.load = load.point(x);
            if (variant == CosseratVariant::linear_constrained) {
                for (int axis = 0; axis < 2; ++axis) {
                    q.hstep[axis] = detail::param_step(x[axis]);
                    for (int side = 0; side < 2; ++side) {
                        const double sign = side == 0 ? 1.0 : -1.0;
                        Vec2 xs = x;
                        xs[axis] += sign * q.hstep[axis];
                        q.fshift[axis][side] = frame_at(y0, xs);
                        // shifts stay well inside the cell (steps ~1e-5 vs a
                        // Gauss-node clearance of ~0.2 cell widths)
                        q.sshift[axis][side] =
                            q.s + (axis == 0 ? sign * q.hstep[0] / grid.dx1 : 0.0);
                        q.tshift[axis][side] =
                            q.t + (axis == 1 ? sign * q.hstep[1] / grid.dx2 : 0.0);
                    }
                }
            }
            prob.qpts.push_back(std::move(q));
        });
    }

    // Nodal unknowns; boundary nodes pinned to bc (rotations clamp to zero).
    std::vector<Vec3> v_nodes(static_cast<size_t>(grid.node_count()), Vec3{});
    std::vector<Vec3> th_nodes(static_cast<size_t>(grid.node_count()), Vec3{});
    std::vector<detail::Dof> dofs;
    for (int j = 0; j < grid.nodes2(); ++j)
        for (int i = 0; i < grid.nodes1(); ++i) {
            if (grid.on_boundary(i, j)) {
                // value query only; boundary nodes sit on the domain edge
                v_nodes[static_cast<size_t>(grid.node_index(i, j))] =
                    bc.point(grid.node_pos(i, j));
                continue;
            }
            for (int c = 0; c < 3; ++c) dofs.push_back({false, i, j, c});
            if (variant == CosseratVariant::linear)
                for (int c = 0; c < 3; ++c) dofs.push_back({true, i, j, c});
        }

    auto field_scale = [&](bool is_theta) {
        double s = 0.0;
        const std::vector<Vec3>& n = is_theta ? th_nodes : v_nodes;
        for (const Vec3& a : n) s += dot(a, a);
        return std::sqrt(s);
    };

    auto gradient = [&](std::vector<double>& g) {
        const double step_v = 1e-6 * (1.0 + field_scale(false));
        const double step_t = 1e-6 * (1.0 + field_scale(true));
        for (size_t d = 0; d < dofs.size(); ++d) {
            const detail::Dof& dof = dofs[d];
            std::vector<Vec3>& n = dof.is_theta ? th_nodes : v_nodes;
            double& slot = n[static_cast<size_t>(grid.node_index(dof.i, dof.j))][dof.comp];
            const double step = dof.is_theta ? step_t : step_v;
            const double saved = slot;
            slot = saved + step;
            const double ep = prob.patch_energy(dof.i, dof.j, v_nodes, th_nodes);
            slot = saved - step;
            const double em = prob.patch_energy(dof.i, dof.j, v_nodes, th_nodes);
            slot = saved;
            g[d] = (ep - em) / (2.0 * step);
        }
    };

    auto apply = [&](const std::vector<double>& dir, double alpha) {
        for (size_t d = 0; d < dofs.size(); ++d) {
            const detail::Dof& dof = dofs[d];
            std::vector<Vec3>& n = dof.is_theta ? th_nodes : v_nodes;
            n[static_cast<size_t>(grid.node_index(dof.i, dof.j))][dof.comp] += alpha * dir[d];
        }
    };

    MinimizeReport report;
    double energy = prob.total_energy(v_nodes, th_nodes);
    report.energy_trace.push_back(energy);
    const double tol = 1e-6 * (1.0 + std::abs(energy));

    std::vector<double> g(dofs.size()), g_new(dofs.size()), dir(dofs.size());
    gradient(g);
    auto norm_of = [](const std::vector<double>& a) {
        double s = 0.0;
        for (double x : a) s += x * x;
        return std::sqrt(s);
    };
    double gnorm = norm_of(g);
    report.grad_norm = gnorm;
    if (gnorm <= tol) {
        report.converged = true;
    } else {
        for (size_t d = 0; d < dir.size(); ++d) dir[d] = -g[d];
        double alpha_seed = 1.0;
        for (int iter = 1; iter <= max_iter; ++iter) {
            double dd = 0.0;
            for (size_t d = 0; d < dir.size(); ++d) dd += dir[d] * g[d];
            if (dd >= 0.0) {  // stale conjugate direction; restart downhill
                for (size_t d = 0; d < dir.size(); ++d) dir[d] = -g[d];
                dd = -gnorm * gnorm;
            }
            // Backtracking Armijo line search.
            double alpha = alpha_seed;
            bool accepted = false;
            for (int bt = 0; bt < 60; ++bt) {
                apply(dir, alpha);
                const double trial = prob.total_energy(v_nodes, th_nodes);
                if (trial <= energy + 1e-4 * alpha * dd) {
                    energy = trial;
                    accepted = true;
                    break;
                }
                apply(dir, -alpha);
                alpha *= 0.5;
            }
            report.iterations = iter;
            if (!accepted) {
                // No decrease even at vanishing step: the quadratic is flat to
                // FD resolution along every remaining direction.
                gradient(g);
                gnorm = norm_of(g);
                report.grad_norm = gnorm;
                report.converged = gnorm <= tol;
                break;
            }
            report.energy_trace.push_back(energy);
            alpha_seed = std::min(1.0, 2.0 * alpha);

            gradient(g_new);
            const double gnorm_new = norm_of(g_new);
            report.grad_norm = gnorm_new;
            if (gnorm_new <= tol) {
                report.converged = true;
                break;
            }
            double num = 0.0;
            for (size_t d = 0; d < g.size(); ++d) num += g_new[d] * (g_new[d] - g[d]);
            const double beta = std::max(0.0, num / (gnorm * gnorm));
            for (size_t d = 0; d < dir.size(); ++d) dir[d] = -g_new[d] + beta * dir[d];
            g.swap(g_new);
            gnorm = gnorm_new;
        }
        if (!report.converged)
            throw Error(ErrorCode::NonConvergence,
                        "gradient norm " + std::to_string(report.grad_norm) + " above tolerance " +
                            std::to_string(tol) + " after " +
                            std::to_string(report.iterations) + " iterations");
    }

    auto v_shared = std::make_shared<const std::vector<Vec3>>(std::move(v_nodes));
    auto t_shared = std::make_shared<const std::vector<Vec3>>(std::move(th_nodes));
    return MinimizeResult{detail::nodal_field(grid, v_shared), detail::nodal_field(grid, t_shared),
                          std::move(report)};
}

}  // namespace shellkit
