#pragma once
// Dense exact linear algebra over a scalar field (plain division pivoting).

#include "cdg/scalar.hpp"

#include <optional>
#include <vector>

namespace cdg {

class ScalarMatrix {
public:
    ScalarMatrix() = default;
    ScalarMatrix(size_t rows, size_t cols, const Field& f)
        : rows_(rows), cols_(cols), field_(f), a_(rows * cols, Scalar::zero(f)) {}
    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    const Field& field() const { return field_; }
    Scalar& at(size_t r, size_t c) { return a_[r * cols_ + c]; }
    const Scalar& at(size_t r, size_t c) const { return a_[r * cols_ + c]; }

private:
    size_t rows_ = 0, cols_ = 0;
    Field field_;
    std::vector<Scalar> a_;
};

long rank(ScalarMatrix m);

// one solution of A x = b, if consistent
std::optional<std::vector<Scalar>> solve(const ScalarMatrix& a, const std::vector<Scalar>& b);

// basis of the kernel of A (column vectors)
std::vector<std::vector<Scalar>> kernel_basis(ScalarMatrix a);

} // namespace cdg
