#pragma once

#include "hdx/errors.hpp"

#include <Eigen/Dense>

#include <cstdlib>
#include <numeric>
#include <vector>

namespace hdx {

template <class Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Diagonalization D = left * A * right over the integers.
template <class Scalar>
struct SmithForm {
    DenseMatrix<Scalar> diagonal;
    DenseMatrix<Scalar> left;
    DenseMatrix<Scalar> right;
    Eigen::Index rank = 0;
    // Invariant factors d1 | d2 | ... (positive), one per unit of rank.
    std::vector<Scalar> invariants;
};

namespace detail {

template <class Scalar>
Scalar checked_axpy(Scalar target, Scalar q, Scalar source) {
    Scalar prod{};
    Scalar out{};
    if (__builtin_mul_overflow(q, source, &prod) || __builtin_sub_overflow(target, prod, &out))
        throw ResourceError("integer overflow during Smith normal form elimination");
    return out;
}

template <class Scalar>
Scalar abs_value(Scalar a) {
    return a < 0 ? -a : a;
}

}  // namespace detail

// Smith normal form by elimination with the smallest nonzero absolute value as pivot.
// The transforms are tracked only when requested.
template <class Scalar>
SmithForm<Scalar> smith_normal_form(DenseMatrix<Scalar> a, bool with_transforms = false) {
    using Index = Eigen::Index;
    const Index rows = a.rows();
    const Index cols = a.cols();
    SmithForm<Scalar> out;
    if (with_transforms) {
        out.left = DenseMatrix<Scalar>::Identity(rows, rows);
        out.right = DenseMatrix<Scalar>::Identity(cols, cols);
    }
    auto row_axpy = [&](Index dst, Scalar q, Index src) {
        for (Index c = 0; c < cols; ++c)
            if (a(src, c) != 0) a(dst, c) = detail::checked_axpy(a(dst, c), q, a(src, c));
        if (with_transforms)
            for (Index c = 0; c < rows; ++c)
                if (out.left(src, c) != 0) out.left(dst, c) = detail::checked_axpy(out.left(dst, c), q, out.left(src, c));
    };
    auto col_axpy = [&](Index dst, Scalar q, Index src) {
        for (Index r = 0; r < rows; ++r)
            if (a(r, src) != 0) a(r, dst) = detail::checked_axpy(a(r, dst), q, a(r, src));
        if (with_transforms)
            for (Index r = 0; r < cols; ++r)
                if (out.right(r, src) != 0) out.right(r, dst) = detail::checked_axpy(out.right(r, dst), q, out.right(r, src));
    };
    auto swap_rows = [&](Index x, Index y) {
        if (x == y) return;
        a.row(x).swap(a.row(y));
        if (with_transforms) out.left.row(x).swap(out.left.row(y));
    };
    auto swap_cols = [&](Index x, Index y) {
        if (x == y) return;
        a.col(x).swap(a.col(y));
        if (with_transforms) out.right.col(x).swap(out.right.col(y));
    };

    Index cend = cols;
    Index t = 0;
    while (t < rows && t < cend) {
        Index bi = -1;
        Index bj = -1;
        Scalar best = 0;
        for (Index j = t; j < cend; ++j) {
            bool nonzero = false;
            for (Index i = t; i < rows; ++i) {
                const Scalar v = detail::abs_value(a(i, j));
                if (v == 0) continue;
                nonzero = true;
                if (bi < 0 || v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                    if (v == 1) break;
                }
            }
            if (best == 1) break;
            if (!nonzero) {
                swap_cols(j, cend - 1);
                --cend;
                --j;
            }
        }
        if (bi < 0) break;
        swap_rows(t, bi);
        swap_cols(t, bj);
        bool dirty = true;
        while (dirty) {
            dirty = false;
            for (Index i = t + 1; i < rows; ++i) {
                if (a(i, t) == 0) continue;
                row_axpy(i, a(i, t) / a(t, t), t);
                if (a(i, t) != 0) {
                    swap_rows(t, i);
                    dirty = true;
                }
            }
            for (Index j = t + 1; j < cend; ++j) {
                if (a(t, j) == 0) continue;
                col_axpy(j, a(t, j) / a(t, t), t);
                if (a(t, j) != 0) {
                    swap_cols(t, j);
                    dirty = true;
                }
            }
        }
        if (a(t, t) < 0) {
            a.row(t) *= -1;
            if (with_transforms) out.left.row(t) *= -1;
        }
        ++t;
    }
    out.rank = t;
    out.diagonal = std::move(a);
    std::vector<Scalar> d;
    for (Index i = 0; i < t; ++i) d.push_back(out.diagonal(i, i));
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = i + 1; j < d.size(); ++j) {
            const Scalar g = std::gcd(d[i], d[j]);
            const Scalar l = d[i] / g * d[j];
            d[i] = g;
            d[j] = l;
        }
    out.invariants = std::move(d);
    return out;
}

}  // namespace hdx
