#include "anticonc/weights.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace anticonc {

WeightVector::WeightVector(std::size_t dim, std::vector<double> rows) : rows_(dim, std::move(rows)) {
    if (rows_.empty()) throw std::domain_error("WeightVector: at least one weight a_k is required");
    for (double v : rows_.coords) {
        if (!std::isfinite(v)) throw std::domain_error("WeightVector: non-finite weight");
    }
}

WeightVector WeightVector::scalar(std::vector<double> values) { return WeightVector(1, std::move(values)); }

bool WeightVector::is_zero() const {
    return std::all_of(rows_.coords.begin(), rows_.coords.end(), [](double v) { return v == 0.0; });
}

double WeightVector::norm() const { return euclid_norm(rows_.coords); }

WeightVector WeightVector::coordinate(std::size_t j) const {
    if (j >= dim()) throw std::out_of_range("WeightVector::coordinate: index exceeds dimension");
    std::vector<double> col(n());
    for (std::size_t k = 0; k < n(); ++k) col[k] = row(k)[j];
    return scalar(std::move(col));
}

double MatrixA::quadratic_form(std::span<const double> t) const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) s += entries[i * dim + j] * t[i] * t[j];
    }
    return s;
}

MatrixA matrix_A(const WeightVector& a) {
    const std::size_t d = a.dim();
    MatrixA out;
    out.dim = d;
    out.entries.assign(d * d, 0.0);
    for (std::size_t k = 0; k < a.n(); ++k) {
        const auto row = a.row(k);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) out.entries[i * d + j] += row[i] * row[j];
        }
    }
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
        out.entries.data(), static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    // Gram matrices are PSD; clamp round-off below zero.
    out.det = std::max(0.0, m.fullPivLu().determinant());
    return out;
}

double operator_norm(const WeightVector& a) {
    const MatrixA A = matrix_A(a);
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
        A.entries.data(), static_cast<Eigen::Index>(A.dim), static_cast<Eigen::Index>(A.dim));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    const double lmax = std::max(0.0, es.eigenvalues().maxCoeff());
    // Eigen's symmetric solver is backward stable; the inflation covers its error.
    return std::sqrt(lmax) * (1.0 + 1e-12) + 1e-300;
}

}  // namespace anticonc
