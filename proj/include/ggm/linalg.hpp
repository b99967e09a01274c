#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace ggm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense symmetric matrix. Symmetry is enforced on construction by
/// averaging the input with its transpose, so entries(i,j) == entries(j,i)
/// holds bit-for-bit afterwards.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(const Matrix& m);
    explicit SymMatrix(Matrix&& m);

    static SymMatrix zero(std::size_t dim);
    static SymMatrix identity(std::size_t dim);
    static SymMatrix diagonal(const Vector& d);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    bool empty() const noexcept { return m_.size() == 0; }

    double operator()(std::size_t i, std::size_t j) const {
        return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

    /// Writes both (i,j) and (j,i).
    void set(std::size_t i, std::size_t j, double v);

    const Matrix& mat() const noexcept { return m_; }

    bool all_finite() const { return m_.allFinite(); }

    SymMatrix operator+(const SymMatrix& o) const;
    SymMatrix operator-(const SymMatrix& o) const;
    SymMatrix operator*(double s) const;

    friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
        return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
    }

private:
    struct Trusted {};
    SymMatrix(Matrix&& m, Trusted) : m_(std::move(m)) {}

    Matrix m_;
};

struct EigenDecomp {
    Vector eigenvalues;   // ascending
    Matrix eigenvectors;  // orthonormal columns

    /// Q diag(f(λ)) Qᵀ for a precomputed mapped spectrum.
    SymMatrix reconstruct(const Vector& mapped) const;
};

/// Symmetric eigendecomposition. Throws InvalidInput on non-finite entries.
EigenDecomp eigh(const SymMatrix& a);

double min_eigenvalue(const SymMatrix& a);

/// log det of a PD matrix via Cholesky; returns +inf sentinel semantics to
/// the caller through `ok` when the matrix is not PD.
double logdet_pd(const SymMatrix& a, bool& ok);

}  // namespace ggm
