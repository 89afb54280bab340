// Midsurface geometry: parametrized patches with analytic or
// finite-difference jets, and the pointwise frame (bases, fundamental forms,
// curvatures, Christoffel symbols, and the three lifted surface tensors).
#pragma once

#include <cmath>
#include <functional>
#include <utility>

#include "shellkit/errors.hpp"
#include "shellkit/tensor.hpp"

namespace shellkit {

// Value and first/second partial derivatives of a map (x1,x2) -> R^3.
struct Jet2 {
    Vec3 p;
    Vec3 d1, d2;
    Vec3 d11, d12, d22;
};

struct Domain {
    double lo1 = -1.0, hi1 = 1.0;
    double lo2 = -1.0, hi2 = 1.0;

    bool strictly_inside(const Vec2& x, double margin = 0.0) const {
        return x[0] > lo1 + margin && x[0] < hi1 - margin && x[1] > lo2 + margin &&
               x[1] < hi2 - margin;
    }
};

// A parametrized surface patch. Construct either from an analytic jet closure
// (exact derivatives) or from a bare map, in which case derivatives come from
// central differences: first derivatives with step 0.03*h_fd*(1+|x|), second
// derivatives with step h_fd*(1+|x|) (defaults 6e-6 and 2e-4). The optional
// Richardson flag adds one extrapolation level to every difference.
class SurfacePatch {
public:
    using JetFn = std::function<Jet2(const Vec2&)>;
    using MapFn = std::function<Vec3(const Vec2&)>;

    static SurfacePatch analytic(JetFn jet, Domain dom) {
        SurfacePatch p;
        p.jet_ = std::move(jet);
        p.dom_ = dom;
        p.fd_ = false;
        return p;
    }

    static SurfacePatch from_map(MapFn map, Domain dom, double h_fd = 2e-4,
                                 bool richardson = false) {
        if (!(h_fd > 0.0))
            throw Error(ErrorCode::InvalidInput, "from_map: step must be positive");
        SurfacePatch p;
        p.map_ = std::move(map);
        p.dom_ = dom;
        p.fd_ = true;
        p.h_fd_ = h_fd;
        p.richardson_ = richardson;
        return p;
    }

    const Domain& domain() const { return dom_; }
    bool uses_fd() const { return fd_; }
    double h_fd() const { return h_fd_; }

    // Margin a query point must keep from the domain boundary so that every
    // difference stencil stays inside.
    double required_margin(const Vec2& x) const {
        if (!fd_) return 0.0;
        const double scale = 1.0 + std::max(std::abs(x[0]), std::abs(x[1]));
        return 2.0 * h_fd_ * scale;
    }

    Vec3 point(const Vec2& x) const { return fd_ ? map_(x) : jet_(x).p; }

    Jet2 jet(const Vec2& x) const {
        if (!dom_.strictly_inside(x, required_margin(x)))
            throw Error(ErrorCode::OutOfDomain,
                        "point (" + std::to_string(x[0]) + ", " + std::to_string(x[1]) +
                            ") outside patch domain (or too close to its boundary)");
        return fd_ ? fd_jet(x) : jet_(x);
    }

private:
    SurfacePatch() = default;

    Jet2 fd_jet(const Vec2& x) const {
        const double s1 = 0.03 * h_fd_ * (1.0 + std::abs(x[0]));
        const double s2 = 0.03 * h_fd_ * (1.0 + std::abs(x[1]));
        const double t1 = h_fd_ * (1.0 + std::abs(x[0]));
        const double t2 = h_fd_ * (1.0 + std::abs(x[1]));

        Jet2 j;
        j.p = map_(x);
        j.d1 = central1(x, 0, s1);
        j.d2 = central1(x, 1, s2);
        j.d11 = central2(x, 0, t1);
        j.d22 = central2(x, 1, t2);
        j.d12 = mixed2(x, t1, t2);
        return j;
    }

    Vec3 central1(const Vec2& x, int axis, double h) const {
        auto stencil = [&](double step) {
            Vec2 xp = x, xm = x;
            xp[axis] += step;
            xm[axis] -= step;
            return (1.0 / (2.0 * step)) * (map_(xp) - map_(xm));
        };
        if (!richardson_) return stencil(h);
        const Vec3 dh = stencil(h), dh2 = stencil(0.5 * h);
        return (1.0 / 3.0) * (4.0 * dh2 - dh);
    }

    Vec3 central2(const Vec2& x, int axis, double h) const {
        auto stencil = [&](double step) {
            Vec2 xp = x, xm = x;
            xp[axis] += step;
            xm[axis] -= step;
            return (1.0 / (step * step)) * (map_(xp) - 2.0 * map_(x) + map_(xm));
        };
        if (!richardson_) return stencil(h);
        const Vec3 dh = stencil(h), dh2 = stencil(0.5 * h);
        return (1.0 / 3.0) * (4.0 * dh2 - dh);
    }

    Vec3 mixed2(const Vec2& x, double h1, double h2) const {
        auto stencil = [&](double a, double b) {
            const Vec2 pp{x[0] + a, x[1] + b}, pm{x[0] + a, x[1] - b};
            const Vec2 mp{x[0] - a, x[1] + b}, mm{x[0] - a, x[1] - b};
            return (1.0 / (4.0 * a * b)) * (map_(pp) - map_(pm) - map_(mp) + map_(mm));
        };
        if (!richardson_) return stencil(h1, h2);
        const Vec3 dh = stencil(h1, h2), dh2 = stencil(0.5 * h1, 0.5 * h2);
        return (1.0 / 3.0) * (4.0 * dh2 - dh);
    }

    JetFn jet_;
    MapFn map_;
    Domain dom_;
    bool fd_ = false;
    bool richardson_ = false;
    double h_fd_ = 2e-4;
};

inline constexpr double reg_min = 1e-6;

// Everything the strain measures consume at one parameter point.
struct SurfaceFrame {
    Mat32 grad_y;          // tangent map, columns are partial derivatives
    Mat32 grad_n;          // columns are partial derivatives of the normal
    Vec3 n0;               // unit normal (right-hand rule of the chart)
    Mat3 grad_theta;       // (grad_y | n0)
    Mat3 grad_theta_inv;
    double det_grad_theta = 0.0;
    Vec3 a_co[3];          // covariant basis a_1, a_2, a_3 = n0
    Vec3 a_contra[3];      // dual basis rows of grad_theta_inv
    Mat2 I, II, III;       // fundamental forms, II = -(grad_y)^T grad_n
    Mat2 L;                // Weingarten map I^{-1} II
    double H = 0.0, K = 0.0;
    double gamma[2][2][2]{};  // Christoffel symbols gamma[g][a][b]
    Mat3 A, B, C;          // lifted tangent / curvature / alternator tensors
};

// Second partial derivative of the chart pulled out of a jet by index pair.
inline const Vec3& second_partial(const Jet2& j, int a, int b) {
    if (a == 0 && b == 0) return j.d11;
    if (a == 1 && b == 1) return j.d22;
    return j.d12;
}

inline SurfaceFrame frame_at(const SurfacePatch& surface, const Vec2& x) {
    const Jet2 j = surface.jet(x);

    SurfaceFrame f;
    f.grad_y = cols32(j.d1, j.d2);

    const Vec3 w = cross(j.d1, j.d2);
    const double wn = norm(w);
    if (wn < reg_min)
        throw Error(ErrorCode::Degenerate, "parametrization irregular: |d1 x d2| = " +
                                               std::to_string(wn));
    f.n0 = (1.0 / wn) * w;

    f.I = transpose(f.grad_y) * f.grad_y;
    if (det(f.I) < 1e-12)
        throw Error(ErrorCode::Degenerate, "metric determinant below 1e-12");

    f.grad_theta = append_col(f.grad_y, f.n0);
    f.det_grad_theta = det(f.grad_theta);
    f.grad_theta_inv = inverse(f.grad_theta);
    for (int i = 0; i < 3; ++i) {
        f.a_co[i] = col(f.grad_theta, i);
        f.a_contra[i] = row(f.grad_theta_inv, i);
    }

    // Derivatives of the unit normal via d_i n = P (d_i w) / |w| with the
    // projector P = 1 - n n^T (differentiating w/|w| directly).
    const Vec3 dw1 = cross(j.d11, j.d2) + cross(j.d1, j.d12);
    const Vec3 dw2 = cross(j.d12, j.d2) + cross(j.d1, j.d22);
    const Vec3 dn1 = (1.0 / wn) * (dw1 - dot(f.n0, dw1) * f.n0);
    const Vec3 dn2 = (1.0 / wn) * (dw2 - dot(f.n0, dw2) * f.n0);
    f.grad_n = cols32(dn1, dn2);

    f.II = -1.0 * (transpose(f.grad_y) * f.grad_n);
    f.III = transpose(f.grad_n) * f.grad_n;
    f.L = inverse(f.I) * f.II;
    f.H = 0.5 * trace(f.L);
    f.K = det(f.L);

    for (int g = 0; g < 2; ++g)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                f.gamma[g][a][b] = dot(f.a_contra[g], second_partial(j, a, b));

    f.A = append_zero_col(f.grad_y) * f.grad_theta_inv;
    f.B = -1.0 * (append_zero_col(f.grad_n) * f.grad_theta_inv);

    const Mat3 seed = {{{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}};
    f.C = f.det_grad_theta * (transpose(f.grad_theta_inv) * seed * f.grad_theta_inv);

#ifdef SHELLKIT_FAULT_FLIP_II
    // Fault-probe build: corrupt the curvature form to confirm the
    // verification checks notice. Never defined in regular builds.
    f.II = -1.0 * f.II;
#endif
#ifdef SHELLKIT_FAULT_FLIP_L
    // Fault-probe build: corrupt the shape operator (see above).
    f.L = -1.0 * f.L;
#endif

    return f;
}

// 2x2x2 array of Christoffel symbols, symmetric in the lower index pair.
struct Christoffels {
    double g[2][2][2]{};

    double operator()(int upper, int a, int b) const { return g[upper][a][b]; }
};

inline Christoffels christoffels(const SurfacePatch& surface, const Vec2& x) {
    const SurfaceFrame f = frame_at(surface, x);
    Christoffels c;
    for (int g = 0; g < 2; ++g)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) c.g[g][a][b] = f.gamma[g][a][b];
    return c;
}

inline Vec3 normal_of_map(const SurfacePatch& m, const Vec2& x) {
    const Jet2 j = m.jet(x);
    const Vec3 w = cross(j.d1, j.d2);
    const double wn = norm(w);
    if (wn < reg_min)
        throw Error(ErrorCode::Degenerate, "normal undefined: |d1 x d2| = " + std::to_string(wn));
    return (1.0 / wn) * w;
}

// ---------------------------------------------------------------------------
// Catalog charts (analytic jets; also reachable by name through scenarios)
// ---------------------------------------------------------------------------

inline SurfacePatch make_plate(Domain dom = {-1.0, 1.0, -1.0, 1.0}) {
    return SurfacePatch::analytic(
        [](const Vec2& x) {
            Jet2 j;
            j.p = {x[0], x[1], 0.0};
            j.d1 = {1, 0, 0};
            j.d2 = {0, 1, 0};
            return j;
        },
        dom);
}

// Arc-length chart of a cylinder of radius r about the x3-axis; the metric is
// the identity, so the only curvature is the hoop direction's -1/r.
inline SurfacePatch make_cylinder(double radius, Domain dom = {-1.5, 1.5, -1.0, 1.0}) {
    if (!(radius > 0.0)) throw Error(ErrorCode::BadParameters, "cylinder radius must be positive");
    return SurfacePatch::analytic(
        [radius](const Vec2& x) {
            const double c = std::cos(x[0] / radius), s = std::sin(x[0] / radius);
            Jet2 j;
            j.p = {radius * c, radius * s, x[1]};
            j.d1 = {-s, c, 0};
            j.d2 = {0, 0, 1};
            j.d11 = {-c / radius, -s / radius, 0};
            return j;
        },
        dom);
}

// Longitude/latitude chart of a sphere of radius r, valid away from the
// poles. With the chart's right-handed normal pointing outward, H = -1/r.
inline SurfacePatch make_sphere(double radius, Domain dom = {-1.5, 1.5, -1.2, 1.2}) {
    if (!(radius > 0.0)) throw Error(ErrorCode::BadParameters, "sphere radius must be positive");
    return SurfacePatch::analytic(
        [radius](const Vec2& x) {
            const double c1 = std::cos(x[0]), s1 = std::sin(x[0]);
            const double c2 = std::cos(x[1]), s2 = std::sin(x[1]);
            Jet2 j;
            j.p = {radius * c2 * c1, radius * c2 * s1, radius * s2};
            j.d1 = {-radius * c2 * s1, radius * c2 * c1, 0};
            j.d2 = {-radius * s2 * c1, -radius * s2 * s1, radius * c2};
            j.d11 = {-radius * c2 * c1, -radius * c2 * s1, 0};
            j.d12 = {radius * s2 * s1, -radius * s2 * c1, 0};
            j.d22 = {-radius * c2 * c1, -radius * c2 * s1, -radius * s2};
            return j;
        },
        dom);
}

// Polar-coordinate chart of the flat plane (radius x1, angle x2); its
// Christoffel symbols are the classical -x1 and 1/x1.
inline SurfacePatch make_polar_plate(Domain dom = {0.3, 2.0, 0.0, 1.5}) {
    return SurfacePatch::analytic(
        [](const Vec2& x) {
            const double c = std::cos(x[1]), s = std::sin(x[1]);
            Jet2 j;
            j.p = {x[0] * c, x[0] * s, 0.0};
            j.d1 = {c, s, 0};
            j.d2 = {-x[0] * s, x[0] * c, 0};
            j.d12 = {-s, c, 0};
            j.d22 = {-x[0] * c, -x[0] * s, 0};
            return j;
        },
        dom);
}

// The plate chart rolled isometrically onto a cylinder of radius rho: the
// in-plane metric stays the identity while the x1 direction acquires
// curvature 1/rho.
inline SurfacePatch make_rolled_plate(double rho, Domain dom = {-1.0, 1.0, -1.0, 1.0}) {
    if (!(rho > 0.0)) throw Error(ErrorCode::BadParameters, "roll radius must be positive");
    return SurfacePatch::analytic(
        [rho](const Vec2& x) {
            const double c = std::cos(x[0] / rho), s = std::sin(x[0] / rho);
            Jet2 j;
            j.p = {rho * s, x[1], rho * (1.0 - c)};
            j.d1 = {c, 0, s};
            j.d2 = {0, 1, 0};
            j.d11 = {-s / rho, 0, c / rho};
            return j;
        },
        dom);
}

// m(x) = M y(x) + c for a constant matrix and shift: covers rigid motions,
// uniform scalings, and axis-aligned stretches of a base chart.
inline SurfacePatch affine_image(const SurfacePatch& base, const Mat3& M, const Vec3& c = {}) {
    return SurfacePatch::analytic(
        [base, M, c](const Vec2& x) {
            const Jet2 b = base.jet(x);
            Jet2 j;
            j.p = M * b.p + c;
            j.d1 = M * b.d1;
            j.d2 = M * b.d2;
            j.d11 = M * b.d11;
            j.d12 = M * b.d12;
            j.d22 = M * b.d22;
            return j;
        },
        base.domain());
}

inline SurfacePatch scaled(const SurfacePatch& base, double alpha) {
    return affine_image(base, alpha * identity3());
}

}  // namespace shellkit
