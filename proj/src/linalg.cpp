#include "cdg/linalg.hpp"

namespace cdg {

namespace {

// Row-reduce in place; returns pivot column per eliminated row.
std::vector<size_t> echelonize(ScalarMatrix& m) {
    std::vector<size_t> pivots;
    size_t row = 0;
    for (size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        size_t sel = row;
        while (sel < m.rows() && m.at(sel, col).is_zero()) ++sel;
        if (sel == m.rows()) continue;
        if (sel != row)
            for (size_t c = col; c < m.cols(); ++c) std::swap(m.at(row, c), m.at(sel, c));
        Scalar inv = m.at(row, col).inverse();
        for (size_t c = col; c < m.cols(); ++c) m.at(row, c) = m.at(row, c) * inv;
        for (size_t r = 0; r < m.rows(); ++r) {
            if (r == row || m.at(r, col).is_zero()) continue;
            Scalar f = m.at(r, col);
            for (size_t c = col; c < m.cols(); ++c)
                m.at(r, c) = m.at(r, c) - f * m.at(row, c);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

} // namespace

long rank(ScalarMatrix m) {
    return static_cast<long>(echelonize(m).size());
}

std::optional<std::vector<Scalar>> solve(const ScalarMatrix& a, const std::vector<Scalar>& b) {
    ScalarMatrix aug(a.rows(), a.cols() + 1, a.field());
    for (size_t r = 0; r < a.rows(); ++r) {
        for (size_t c = 0; c < a.cols(); ++c) aug.at(r, c) = a.at(r, c);
        aug.at(r, a.cols()) = b[r];
    }
    std::vector<size_t> pivots = echelonize(aug);
    for (size_t p : pivots)
        if (p == a.cols()) return std::nullopt; // pivot in the constant column
    std::vector<Scalar> x(a.cols(), Scalar::zero(a.field()));
    for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(r, a.cols());
    return x;
}

std::vector<std::vector<Scalar>> kernel_basis(ScalarMatrix a) {
    std::vector<size_t> pivots = echelonize(a);
    std::vector<bool> is_pivot(a.cols(), false);
    for (size_t p : pivots) is_pivot[p] = true;
    std::vector<std::vector<Scalar>> basis;
    for (size_t free = 0; free < a.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<Scalar> v(a.cols(), Scalar::zero(a.field()));
        v[free] = Scalar::one(a.field());
        for (size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = -a.at(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace cdg
