#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>

namespace gstatarb {

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
using Mat = std::array<std::array<double, N>, N>;

using Matrix3 = Mat<3>;
using Matrix4 = Mat<4>;

template <std::size_t N>
Vec<N> multiply(const Mat<N>& a, const Vec<N>& x) {
    Vec<N> y{};
    for (std::size_t i = 0; i < N; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < N; ++j) s += a[i][j] * x[j];
        y[i] = s;
    }
    return y;
}

template <std::size_t N>
double max_abs(const Mat<N>& a) {
    double m = 0.0;
    for (const auto& row : a)
        for (double v : row) m = std::max(m, std::abs(v));
    return m;
}

/// Determinant by elimination with partial pivoting.
template <std::size_t N>
double determinant(Mat<N> a) {
    double det = 1.0;
    for (std::size_t k = 0; k < N; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < N; ++i)
            if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
        if (a[piv][k] == 0.0) return 0.0;
        if (piv != k) {
            std::swap(a[piv], a[k]);
            det = -det;
        }
        det *= a[k][k];
        for (std::size_t i = k + 1; i < N; ++i) {
            const double f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < N; ++j) a[i][j] -= f * a[k][j];
        }
    }
    return det;
}

/// Solves a x = b by Gaussian elimination with partial pivoting.
/// Returns nullopt when a pivot falls below `rel_tol * max|a|`.
template <std::size_t N>
std::optional<Vec<N>> solve(Mat<N> a, Vec<N> b, double rel_tol = 1e-13) {
    const double scale = max_abs(a);
    if (scale == 0.0) return std::nullopt;
    for (std::size_t k = 0; k < N; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < N; ++i)
            if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
        if (std::abs(a[piv][k]) <= rel_tol * scale) return std::nullopt;
        std::swap(a[piv], a[k]);
        std::swap(b[piv], b[k]);
        for (std::size_t i = k + 1; i < N; ++i) {
            const double f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < N; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    Vec<N> x{};
    for (std::size_t ii = N; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t j = ii + 1; j < N; ++j) s -= a[ii][j] * x[j];
        x[ii] = s / a[ii][ii];
    }
    return x;
}

}  // namespace gstatarb
