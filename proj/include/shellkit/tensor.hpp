// Small fixed-size tensor algebra: 2x2 / 3x3 / 3x2 matrices, Cartan
// decomposition, axl/anti, SPD square root, polar decomposition, flat/hat
// lifts, and column-wise vector-matrix cross products.
//
// Everything here is a pure function of its inputs; all tolerances are
// relative to (1 + input norm) so the routines behave identically across
// scales.
#pragma once

#include <array>
#include <cmath>
#include <ostream>

#include "shellkit/errors.hpp"

namespace shellkit {

// ---------------------------------------------------------------------------
// Value types (row-major aggregates)
// ---------------------------------------------------------------------------

struct Vec2 {
    double v[2]{};

    double& operator[](int i) { return v[i]; }
    double operator[](int i) const { return v[i]; }
};

struct Vec3 {
    double v[3]{};

    double& operator[](int i) { return v[i]; }
    double operator[](int i) const { return v[i]; }
};

// 1x2 row vectors (transverse shear / drilling rows) share Vec2 storage.
using Row2 = Vec2;

struct Mat2 {
    double m[2][2]{};

    double& operator()(int r, int c) { return m[r][c]; }
    double operator()(int r, int c) const { return m[r][c]; }
};

struct Mat3 {
    double m[3][3]{};

    double& operator()(int r, int c) { return m[r][c]; }
    double operator()(int r, int c) const { return m[r][c]; }
};

// 3 rows x 2 columns (surface gradients: columns are partial derivatives).
struct Mat32 {
    double m[3][2]{};

    double& operator()(int r, int c) { return m[r][c]; }
    double operator()(int r, int c) const { return m[r][c]; }
};

// 2 rows x 3 columns (transposed surface gradients).
struct Mat23 {
    double m[2][3]{};

    double& operator()(int r, int c) { return m[r][c]; }
    double operator()(int r, int c) const { return m[r][c]; }
};

// ---------------------------------------------------------------------------
// Vector operations
// ---------------------------------------------------------------------------

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline Vec3 operator-(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }

inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator*(double s, const Vec2& a) { return {s * a[0], s * a[1]}; }

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline double norm(const Vec2& a) { return std::sqrt(dot(a, a)); }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline Vec3 normalized(const Vec3& a) {
    const double n = norm(a);
    if (n == 0.0) throw Error(ErrorCode::Degenerate, "cannot normalize the zero vector");
    return (1.0 / n) * a;
}

// ---------------------------------------------------------------------------
// Matrix construction / access helpers
// ---------------------------------------------------------------------------

inline Mat2 identity2() { return {{{1, 0}, {0, 1}}}; }
inline Mat3 identity3() { return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}; }

inline Mat3 from_cols(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
    Mat3 r;
    for (int i = 0; i < 3; ++i) {
        r(i, 0) = c0[i];
        r(i, 1) = c1[i];
        r(i, 2) = c2[i];
    }
    return r;
}

inline Mat32 cols32(const Vec3& c0, const Vec3& c1) {
    Mat32 r;
    for (int i = 0; i < 3; ++i) {
        r(i, 0) = c0[i];
        r(i, 1) = c1[i];
    }
    return r;
}

inline Vec3 col(const Mat3& a, int c) { return {a(0, c), a(1, c), a(2, c)}; }
inline Vec3 col(const Mat32& a, int c) { return {a(0, c), a(1, c), a(2, c)}; }
inline Vec3 row(const Mat3& a, int r) { return {a(r, 0), a(r, 1), a(r, 2)}; }

inline Mat3 outer(const Vec3& a, const Vec3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = a[i] * b[j];
    return r;
}

// Embeds a 3x2 matrix as (M | c): third column appended.
inline Mat3 append_col(const Mat32& a, const Vec3& c) {
    Mat3 r;
    for (int i = 0; i < 3; ++i) {
        r(i, 0) = a(i, 0);
        r(i, 1) = a(i, 1);
        r(i, 2) = c[i];
    }
    return r;
}

// (M | 0): 3x2 matrix with a zero third column appended.
inline Mat3 append_zero_col(const Mat32& a) { return append_col(a, Vec3{}); }

// ---------------------------------------------------------------------------
// Matrix arithmetic
// ---------------------------------------------------------------------------

inline Mat2 operator+(const Mat2& a, const Mat2& b) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = a(i, j) + b(i, j);
    return r;
}
inline Mat2 operator-(const Mat2& a, const Mat2& b) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = a(i, j) - b(i, j);
    return r;
}
inline Mat2 operator*(double s, const Mat2& a) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = s * a(i, j);
    return r;
}
inline Mat2 operator-(const Mat2& a) { return -1.0 * a; }

inline Mat3 operator+(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = a(i, j) + b(i, j);
    return r;
}
inline Mat3 operator-(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = a(i, j) - b(i, j);
    return r;
}
inline Mat3 operator*(double s, const Mat3& a) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = s * a(i, j);
    return r;
}
inline Mat3 operator-(const Mat3& a) { return -1.0 * a; }

inline Mat32 operator+(const Mat32& a, const Mat32& b) {
    Mat32 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = a(i, j) + b(i, j);
    return r;
}
inline Mat32 operator-(const Mat32& a, const Mat32& b) {
    Mat32 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = a(i, j) - b(i, j);
    return r;
}
inline Mat32 operator*(double s, const Mat32& a) {
    Mat32 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = s * a(i, j);
    return r;
}

inline Mat2 operator*(const Mat2& a, const Mat2& b) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    return r;
}

inline Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
    return r;
}

inline Vec3 operator*(const Mat3& a, const Vec3& x) {
    return {a(0, 0) * x[0] + a(0, 1) * x[1] + a(0, 2) * x[2],
            a(1, 0) * x[0] + a(1, 1) * x[1] + a(1, 2) * x[2],
            a(2, 0) * x[0] + a(2, 1) * x[1] + a(2, 2) * x[2]};
}

inline Vec2 operator*(const Mat2& a, const Vec2& x) {
    return {a(0, 0) * x[0] + a(0, 1) * x[1], a(1, 0) * x[0] + a(1, 1) * x[1]};
}

// Row vector times 2x2 matrix (rows act from the left).
inline Row2 operator*(const Row2& t, const Mat2& a) {
    return {t[0] * a(0, 0) + t[1] * a(1, 0), t[0] * a(0, 1) + t[1] * a(1, 1)};
}

inline Mat32 operator*(const Mat3& a, const Mat32& b) {
    Mat32 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
    return r;
}

inline Mat32 operator*(const Mat32& a, const Mat2& b) {
    Mat32 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    return r;
}

inline Mat2 operator*(const Mat23& a, const Mat32& b) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
    return r;
}

inline Mat23 operator*(const Mat23& a, const Mat3& b) {
    Mat23 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
    return r;
}

inline Vec2 operator*(const Mat23& a, const Vec3& x) {
    return {a(0, 0) * x[0] + a(0, 1) * x[1] + a(0, 2) * x[2],
            a(1, 0) * x[0] + a(1, 1) * x[1] + a(1, 2) * x[2]};
}

inline Mat2 transpose(const Mat2& a) { return {{{a(0, 0), a(1, 0)}, {a(0, 1), a(1, 1)}}}; }

inline Mat3 transpose(const Mat3& a) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = a(j, i);
    return r;
}

inline Mat23 transpose(const Mat32& a) {
    Mat23 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = a(j, i);
    return r;
}

inline Mat32 transpose(const Mat23& a) {
    Mat32 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = a(j, i);
    return r;
}

inline double trace(const Mat2& a) { return a(0, 0) + a(1, 1); }
inline double trace(const Mat3& a) { return a(0, 0) + a(1, 1) + a(2, 2); }

inline double det(const Mat2& a) { return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0); }

inline double det(const Mat3& a) {
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
           a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

// Adjugate of a 2x2 matrix: adj(A)*A = det(A)*I. Finite even when A is
// singular, which is what the Gauss-curvature variation formula relies on.
inline Mat2 adjugate(const Mat2& a) { return {{{a(1, 1), -a(0, 1)}, {-a(1, 0), a(0, 0)}}}; }

inline Mat2 inverse(const Mat2& a) {
    const double d = det(a);
    if (std::abs(d) < 1e-300) throw Error(ErrorCode::Degenerate, "singular 2x2 matrix");
    return (1.0 / d) * adjugate(a);
}

inline Mat3 inverse(const Mat3& a) {
    const double d = det(a);
    if (std::abs(d) < 1e-300) throw Error(ErrorCode::Degenerate, "singular 3x3 matrix");
    Mat3 adj;
    adj(0, 0) = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
    adj(0, 1) = a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2);
    adj(0, 2) = a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1);
    adj(1, 0) = a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2);
    adj(1, 1) = a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0);
    adj(1, 2) = a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2);
    adj(2, 0) = a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0);
    adj(2, 1) = a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1);
    adj(2, 2) = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    return (1.0 / d) * adj;
}

inline double fdot(const Mat3& a, const Mat3& b) {
    double s = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += a(i, j) * b(i, j);
    return s;
}
inline double fdot(const Mat2& a, const Mat2& b) {
    double s = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) s += a(i, j) * b(i, j);
    return s;
}
inline double norm(const Mat3& a) { return std::sqrt(fdot(a, a)); }
inline double norm(const Mat2& a) { return std::sqrt(fdot(a, a)); }
inline double norm(const Mat32& a) {
    double s = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

inline Mat2 sym(const Mat2& a) { return 0.5 * (a + transpose(a)); }
inline Mat3 sym(const Mat3& a) { return 0.5 * (a + transpose(a)); }
inline Mat2 skw(const Mat2& a) { return 0.5 * (a - transpose(a)); }
inline Mat3 skw(const Mat3& a) { return 0.5 * (a - transpose(a)); }

inline bool finite(const Mat3& a) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (!std::isfinite(a(i, j))) return false;
    return true;
}
inline bool finite(const Vec3& a) {
    return std::isfinite(a[0]) && std::isfinite(a[1]) && std::isfinite(a[2]);
}

// ---------------------------------------------------------------------------
// Cartan decomposition, axl / anti
// ---------------------------------------------------------------------------

struct CartanParts {
    Mat3 devsym;     // symmetric traceless part
    Mat3 skew;       // antisymmetric part
    Mat3 spherical;  // (tr X / 3) * identity
};

// Orthogonal split X = dev sym X + skew X + (tr X / 3) * I under the
// Frobenius product.
inline CartanParts decompose(const Mat3& x) {
    if (!finite(x)) throw Error(ErrorCode::InvalidInput, "decompose: non-finite entries");
    CartanParts p;
    const double t = trace(x) / 3.0;
    p.spherical = t * identity3();
    p.skew = skw(x);
    p.devsym = sym(x) - p.spherical;
    return p;
}

// Axial vector of a skew matrix: axl(A) = (-A23, A13, -A12).
inline Vec3 axl(const Mat3& a, double tol_skew = 1e-9) {
    if (!finite(a)) throw Error(ErrorCode::InvalidInput, "axl: non-finite entries");
    const double defect = norm(a + transpose(a));
    if (defect > tol_skew * (1.0 + norm(a)))
        throw Error(ErrorCode::NotSkew, "axl: symmetric part " + std::to_string(defect));
    return {-a(1, 2), a(0, 2), -a(0, 1)};
}

// Axial vector of the skew part, without the skewness check. Used where the
// input is skew only up to finite-difference noise (noise is logged upstream).
inline Vec3 axl_of_skew_part(const Mat3& a) {
    const Mat3 w = skw(a);
    return {-w(1, 2), w(0, 2), -w(0, 1)};
}

inline Mat3 anti(const Vec3& v) {
    if (!finite(v)) throw Error(ErrorCode::InvalidInput, "anti: non-finite entries");
    return {{{0, -v[2], v[1]}, {v[2], 0, -v[0]}, {-v[1], v[0], 0}}};
}

// ---------------------------------------------------------------------------
// Symmetric 3x3 eigendecomposition (cyclic Jacobi)
// ---------------------------------------------------------------------------

struct EigenSym3 {
    Mat3 vectors;  // columns are orthonormal eigenvectors
    Vec3 values;   // matching eigenvalues (unsorted)
};

// Cyclic Jacobi sweeps; branch-free convergence on the off-diagonal norm.
// More than enough accuracy for 3x3 at double precision.
inline EigenSym3 eigen_sym(const Mat3& s) {
    Mat3 a = s;
    Mat3 v = identity3();
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = std::sqrt(a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2));
        if (off < 1e-15 * (1.0 + norm(s))) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                // A <- J^T A J with the rotation J acting in the (p,q) plane.
                for (int k = 0; k < 3; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
                for (int k = 0; k < 3; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
        }
    }
    return {v, {a(0, 0), a(1, 1), a(2, 2)}};
}

// ---------------------------------------------------------------------------
// SPD square root and polar decomposition
// ---------------------------------------------------------------------------

// Square root of a symmetric positive semi-definite matrix. Eigenvalues in
// [-eps_clamp, 0) are clamped to zero: the lifted surface Gram matrices this
// is applied to carry a structural zero eigenvalue along the normal that
// finite-precision assembly can push slightly negative.
inline Mat3 spd_sqrt(const Mat3& s, double tol_sym = 1e-9) {
    if (!finite(s)) throw Error(ErrorCode::InvalidInput, "spd_sqrt: non-finite entries");
    const double scale = 1.0 + norm(s);
    if (norm(s - transpose(s)) > tol_sym * scale)
        throw Error(ErrorCode::NotSymmetric, "spd_sqrt: input not symmetric");
    const double eps_clamp = 1e-12 * scale;
    EigenSym3 eig = eigen_sym(sym(s));
    Vec3 r;
    for (int i = 0; i < 3; ++i) {
        double lam = eig.values[i];
        if (lam < -eps_clamp)
            throw Error(ErrorCode::NotPSD,
                        "spd_sqrt: eigenvalue " + std::to_string(lam) + " below clamp");
        if (lam < 0.0) lam = 0.0;
        r[i] = std::sqrt(lam);
    }
    const Mat3& q = eig.vectors;
    Mat3 d{};
    d(0, 0) = r[0];
    d(1, 1) = r[1];
    d(2, 2) = r[2];
    return q * d * transpose(q);
}

struct PolarParts {
    Mat3 R;  // proper rotation factor
    Mat3 U;  // symmetric positive definite stretch, F = R * U
};

// Polar decomposition of F with det F > 0 via U = sqrt(F^T F), R = F U^{-1},
// followed by one Newton orthogonality step R <- (R + R^{-T})/2 which restores
// det R = 1 to ~1e-12 near ill-conditioned inputs.
inline PolarParts polar_decompose(const Mat3& f, double det_min = 1e-10) {
    if (!finite(f)) throw Error(ErrorCode::InvalidInput, "polar_decompose: non-finite entries");
    if (det(f) < det_min)
        throw Error(ErrorCode::Degenerate,
                    "polar_decompose: det " + std::to_string(det(f)) + " below floor");
    const Mat3 u = spd_sqrt(transpose(f) * f);
    Mat3 r = f * inverse(u);
    r = 0.5 * (r + transpose(inverse(r)));
    return {r, u};
}

// ---------------------------------------------------------------------------
// Lifts and cross products
// ---------------------------------------------------------------------------

enum class LiftMode { flat, hat };

// flat: embed M in the upper-left 2x2 block, zero elsewhere.
// hat:  same, but with entry (3,3) = 1.
inline Mat3 lift(const Mat2& a, LiftMode mode) {
    Mat3 r{};
    r(0, 0) = a(0, 0);
    r(0, 1) = a(0, 1);
    r(1, 0) = a(1, 0);
    r(1, 1) = a(1, 1);
    r(2, 2) = (mode == LiftMode::hat) ? 1.0 : 0.0;
    return r;
}

inline Mat3 lift_flat(const Mat2& a) { return lift(a, LiftMode::flat); }
inline Mat3 lift_hat(const Mat2& a) { return lift(a, LiftMode::hat); }

// Column-wise cross product q x M = anti(q) * M.
inline Mat3 vec_cross_mat(const Vec3& q, const Mat3& m) { return anti(q) * m; }
inline Mat32 vec_cross_mat(const Vec3& q, const Mat32& m) {
    return cols32(cross(q, col(m, 0)), cross(q, col(m, 1)));
}

// ---------------------------------------------------------------------------
// Stream output (diagnostics and test failure messages)
// ---------------------------------------------------------------------------

inline std::ostream& operator<<(std::ostream& os, const Vec2& a) {
    return os << "(" << a[0] << ", " << a[1] << ")";
}
inline std::ostream& operator<<(std::ostream& os, const Vec3& a) {
    return os << "(" << a[0] << ", " << a[1] << ", " << a[2] << ")";
}
inline std::ostream& operator<<(std::ostream& os, const Mat2& a) {
    return os << "[[" << a(0, 0) << ", " << a(0, 1) << "], [" << a(1, 0) << ", " << a(1, 1) << "]]";
}
inline std::ostream& operator<<(std::ostream& os, const Mat3& a) {
    os << "[";
    for (int i = 0; i < 3; ++i) {
        os << "[" << a(i, 0) << ", " << a(i, 1) << ", " << a(i, 2) << "]";
        if (i < 2) os << ", ";
    }
    return os << "]";
}
inline std::ostream& operator<<(std::ostream& os, const Mat32& a) {
    os << "[";
    for (int i = 0; i < 3; ++i) {
        os << "[" << a(i, 0) << ", " << a(i, 1) << "]";
        if (i < 2) os << ", ";
    }
    return os << "]";
}

}  // namespace shellkit
