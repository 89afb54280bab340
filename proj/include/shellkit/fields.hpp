// Fields over the parameter domain: displacement/director fields (reusing the
// surface-patch jet machinery), polynomial fields, and rotation fields with
// analytic or finite-difference derivatives.
#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "shellkit/errors.hpp"
#include "shellkit/surface.hpp"
#include "shellkit/tensor.hpp"

namespace shellkit {

// A vector field (x1,x2) -> R^3 carries exactly the jet structure of a
// surface chart, so displacement and director fields share SurfacePatch; only
// frame_at imposes surface regularity, plain jet queries do not.
using VectorField = SurfacePatch;

// m(x) = base(x) + scale * v(x).
inline SurfacePatch displaced(const SurfacePatch& base, const VectorField& v,
                              double scale = 1.0) {
    return SurfacePatch::analytic(
        [base, v, scale](const Vec2& x) {
            const Jet2 b = base.jet(x);
            const Jet2 w = v.jet(x);
            Jet2 j;
            j.p = b.p + scale * w.p;
            j.d1 = b.d1 + scale * w.d1;
            j.d2 = b.d2 + scale * w.d2;
            j.d11 = b.d11 + scale * w.d11;
            j.d12 = b.d12 + scale * w.d12;
            j.d22 = b.d22 + scale * w.d22;
            return j;
        },
        base.domain());
}

// ---------------------------------------------------------------------------
// Bivariate polynomial fields
// ---------------------------------------------------------------------------

// One scalar polynomial sum_{j,k} c[j][k] x1^j x2^k; the ragged coefficient
// table mirrors the JSON scenario encoding.
struct Poly2 {
    std::vector<std::vector<double>> c;

    double value(const Vec2& x) const { return d(x, 0, 0); }

    // Partial derivative of order (a,b).
    double d(const Vec2& x, int a, int b) const {
        double s = 0.0;
        for (std::size_t j = 0; j < c.size(); ++j) {
            for (std::size_t k = 0; k < c[j].size(); ++k) {
                if ((int)j < a || (int)k < b || c[j][k] == 0.0) continue;
                double f = c[j][k];
                for (int t = 0; t < a; ++t) f *= double(j - t);
                for (int t = 0; t < b; ++t) f *= double(k - t);
                s += f * std::pow(x[0], double(j - a)) * std::pow(x[1], double(k - b));
            }
        }
        return s;
    }
};

inline VectorField make_poly_field(const Poly2& c0, const Poly2& c1, const Poly2& c2,
                                   Domain dom = {-1.0, 1.0, -1.0, 1.0}) {
    return VectorField::analytic(
        [c0, c1, c2](const Vec2& x) {
            const Poly2* comp[3] = {&c0, &c1, &c2};
            Jet2 j;
            for (int i = 0; i < 3; ++i) {
                j.p[i] = comp[i]->d(x, 0, 0);
                j.d1[i] = comp[i]->d(x, 1, 0);
                j.d2[i] = comp[i]->d(x, 0, 1);
                j.d11[i] = comp[i]->d(x, 2, 0);
                j.d12[i] = comp[i]->d(x, 1, 1);
                j.d22[i] = comp[i]->d(x, 0, 2);
            }
            return j;
        },
        dom);
}

inline VectorField zero_field(Domain dom = {-1.0, 1.0, -1.0, 1.0}) {
    return make_poly_field(Poly2{}, Poly2{}, Poly2{}, dom);
}

// ---------------------------------------------------------------------------
// Rotation fields
// ---------------------------------------------------------------------------

// Rotation and its two partial derivatives at a point.
struct RotJet {
    Mat3 Q;
    Mat3 d1, d2;
};

// Q: (x1,x2) -> SO(3), either with analytic derivatives or by central
// differences of the map. Every queried value is validated to be a proper
// rotation within tol 1e-9.
class RotationField {
public:
    using JetFn = std::function<RotJet(const Vec2&)>;
    using MapFn = std::function<Mat3(const Vec2&)>;

    static RotationField analytic(JetFn jet) {
        RotationField f;
        f.jet_ = std::move(jet);
        return f;
    }

    static RotationField from_map(MapFn map, double h_fd = 6e-6, bool richardson = false) {
        if (!(h_fd > 0.0))
            throw Error(ErrorCode::InvalidInput, "from_map: step must be positive");
        RotationField f;
        f.map_ = std::move(map);
        f.fd_ = true;
        f.h_fd_ = h_fd;
        f.richardson_ = richardson;
        return f;
    }

    RotJet jet(const Vec2& x) const {
        RotJet j;
        if (!fd_) {
            j = jet_(x);
        } else {
            j.Q = map_(x);
            for (int axis = 0; axis < 2; ++axis) {
                const double h = h_fd_ * (1.0 + std::abs(x[axis]));
                auto stencil = [&](double step) {
                    Vec2 xp = x, xm = x;
                    xp[axis] += step;
                    xm[axis] -= step;
                    return (1.0 / (2.0 * step)) * (map_(xp) - map_(xm));
                };
                Mat3 d = stencil(h);
                if (richardson_) d = (1.0 / 3.0) * (4.0 * stencil(0.5 * h) - d);
                (axis == 0 ? j.d1 : j.d2) = d;
            }
        }
        validate(j.Q);
        return j;
    }

    Mat3 value(const Vec2& x) const {
        const Mat3 q = fd_ ? map_(x) : jet_(x).Q;
        validate(q);
        return q;
    }

private:
    RotationField() = default;

    static void validate(const Mat3& q) {
        if (norm(transpose(q) * q - identity3()) > 1e-9 || std::abs(det(q) - 1.0) > 1e-9)
            throw Error(ErrorCode::NotRotation, "rotation field value is not a proper rotation");
    }

    JetFn jet_;
    MapFn map_;
    bool fd_ = false;
    bool richardson_ = false;
    double h_fd_ = 6e-6;
};

// Rodrigues formula, exp(anti(w)).
inline Mat3 rotation_exp(const Vec3& w) {
    const double t = norm(w);
    if (t < 1e-12) {
        const Mat3 a = anti(w);
        return identity3() + a + 0.5 * (a * a);  // series; error O(t^3) ~ 1e-36
    }
    const Mat3 a = anti((1.0 / t) * w);
    return identity3() + std::sin(t) * a + (1.0 - std::cos(t)) * (a * a);
}

inline RotationField rotation_identity() {
    return RotationField::analytic([](const Vec2&) {
        RotJet j;
        j.Q = identity3();
        return j;
    });
}

inline RotationField rotation_constant(const Mat3& q) {
    return RotationField::analytic([q](const Vec2&) {
        RotJet j;
        j.Q = q;
        return j;
    });
}

// In-plane drill about e3 with affine angle theta(x) = c0 + c1 x1 + c2 x2.
inline RotationField rotation_drill(double c0, double c1, double c2) {
    return RotationField::analytic([c0, c1, c2](const Vec2& x) {
        const double th = c0 + c1 * x[0] + c2 * x[1];
        const double c = std::cos(th), s = std::sin(th);
        const Mat3 q = {{{c, -s, 0}, {s, c, 0}, {0, 0, 1}}};
        const Mat3 dq_dth = {{{-s, -c, 0}, {c, -s, 0}, {0, 0, 0}}};
        RotJet j;
        j.Q = q;
        j.d1 = c1 * dq_dth;
        j.d2 = c2 * dq_dth;
        return j;
    });
}

// Q(x) = exp(anti(w(x))) for a polynomial axis field; derivatives by
// Richardson-extrapolated central differences.
inline RotationField rotation_exp_poly(const Poly2& w0, const Poly2& w1, const Poly2& w2) {
    return RotationField::from_map(
        [w0, w1, w2](const Vec2& x) {
            return rotation_exp({w0.value(x), w1.value(x), w2.value(x)});
        },
        6e-6, /*richardson=*/true);
}

}  // namespace shellkit
