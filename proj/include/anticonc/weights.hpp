#pragma once

#include "anticonc/common.hpp"

#include <span>
#include <vector>

namespace anticonc {

/// Coefficients a = (a_1, ..., a_n), a_k in R^d, of the weighted sum S_a = sum X_k a_k.
class WeightVector {
  public:
    /// `rows` is n x d row-major. Requires n >= 1.
    WeightVector(std::size_t dim, std::vector<double> rows);

    /// One-dimensional weights.
    static WeightVector scalar(std::vector<double> values);

    [[nodiscard]] std::size_t n() const { return rows_.size(); }
    [[nodiscard]] std::size_t dim() const { return rows_.dim; }
    [[nodiscard]] std::span<const double> row(std::size_t k) const { return rows_.point(k); }
    [[nodiscard]] const PointCloud& rows() const { return rows_; }

    /// True when every a_k is the zero vector.
    [[nodiscard]] bool is_zero() const;

    /// (sum ||a_k||^2)^{1/2}.
    [[nodiscard]] double norm() const;

    /// The scalar weights a^{(j)} = (a_{1j}, ..., a_{nj}).
    [[nodiscard]] WeightVector coordinate(std::size_t j) const;

  private:
    PointCloud rows_;
};

/// A = sum_k a_k a_k^T together with its determinant.
struct MatrixA {
    std::size_t dim = 0;
    std::vector<double> entries;  // row-major d x d
    double det = 0.0;

    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return entries[i * dim + j]; }
    /// <A t, t>.
    [[nodiscard]] double quadratic_form(std::span<const double> t) const;
};

[[nodiscard]] MatrixA matrix_A(const WeightVector& a);

/// Spectral norm of the n x d matrix with rows a_k, i.e. sqrt(lambda_max(A)),
/// inflated by a relative 1e-12 so it is safe as a Lipschitz constant.
[[nodiscard]] double operator_norm(const WeightVector& a);

}  // namespace anticonc
