#pragma once

#include <array>
#include <cmath>

namespace catlab {

/// Truncated bivariate Taylor series in (t, y) about a point, total degree
/// <= 3. Coefficient c[i][j] multiplies dt^i dy^j / (i! j!), i.e. stores the
/// partial derivative d_t^i d_y^j directly.
class Taylor2 {
public:
    static constexpr int degree = 3;

    Taylor2() { zero(); }
    explicit Taylor2(double value) {
        zero();
        c_[0][0] = value;
    }

    /// Independent variables t and y at (t0, y0).
    static Taylor2 t_var(double t0) {
        Taylor2 r(t0);
        r.c_[1][0] = 1.0;
        return r;
    }
    static Taylor2 y_var(double y0) {
        Taylor2 r(y0);
        r.c_[0][1] = 1.0;
        return r;
    }

    double d(int i, int j) const { return c_[i][j]; }
    double value() const { return c_[0][0]; }

    /// Derivative fields; the top-degree coefficients become unknown and are
    /// set to zero, so chained derivatives are exact up to the remaining degree.
    Taylor2 dt() const {
        Taylor2 r;
        for (int i = 0; i < degree; ++i)
            for (int j = 0; i + 1 + j <= degree; ++j) r.c_[i][j] = c_[i + 1][j];
        return r;
    }
    Taylor2 dy() const {
        Taylor2 r;
        for (int i = 0; i <= degree; ++i)
            for (int j = 0; i + j + 1 <= degree; ++j) r.c_[i][j] = c_[i][j + 1];
        return r;
    }

    friend Taylor2 operator+(const Taylor2& a, const Taylor2& b) {
        Taylor2 r;
        for (int i = 0; i <= degree; ++i)
            for (int j = 0; i + j <= degree; ++j) r.c_[i][j] = a.c_[i][j] + b.c_[i][j];
        return r;
    }
    friend Taylor2 operator-(const Taylor2& a, const Taylor2& b) {
        Taylor2 r;
        for (int i = 0; i <= degree; ++i)
            for (int j = 0; i + j <= degree; ++j) r.c_[i][j] = a.c_[i][j] - b.c_[i][j];
        return r;
    }
    friend Taylor2 operator*(double s, const Taylor2& a) {
        Taylor2 r;
        for (int i = 0; i <= degree; ++i)
            for (int j = 0; i + j <= degree; ++j) r.c_[i][j] = s * a.c_[i][j];
        return r;
    }
    /// Leibniz rule on derivative coefficients.
    friend Taylor2 operator*(const Taylor2& a, const Taylor2& b) {
        Taylor2 r;
        for (int i = 0; i <= degree; ++i)
            for (int j = 0; i + j <= degree; ++j) {
                double s = 0.0;
                for (int p = 0; p <= i; ++p)
                    for (int q = 0; q <= j; ++q)
                        s += binom(i, p) * binom(j, q) * a.c_[p][q] * b.c_[i - p][j - q];
                r.c_[i][j] = s;
            }
        return r;
    }

    /// f(a) for a scalar function with derivatives f0..f3 at a.value().
    static Taylor2 compose(const Taylor2& a, const std::array<double, 4>& f) {
        // Faa di Bruno through degree 3 on the shifted series u = a - a0.
        Taylor2 u = a;
        u.c_[0][0] = 0.0;
        const Taylor2 u2 = u * u;
        const Taylor2 u3 = u2 * u;
        return Taylor2(f[0]) + f[1] * u + (0.5 * f[2]) * u2 + (f[3] / 6.0) * u3;
    }

private:
    static double binom(int n, int k) {
        static const double table[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
        return table[n][k];
    }
    void zero() {
        for (auto& row : c_) row.fill(0.0);
    }
    std::array<std::array<double, degree + 1>, degree + 1> c_{};
};

inline Taylor2 sin(const Taylor2& a) {
    const double v = a.value();
    return Taylor2::compose(a, {std::sin(v), std::cos(v), -std::sin(v), -std::cos(v)});
}
inline Taylor2 cos(const Taylor2& a) {
    const double v = a.value();
    return Taylor2::compose(a, {std::cos(v), -std::sin(v), -std::cos(v), std::sin(v)});
}
inline Taylor2 exp(const Taylor2& a) {
    const double e = std::exp(a.value());
    return Taylor2::compose(a, {e, e, e, e});
}

}  // namespace catlab
