#include "ggm/linalg.hpp"

#include "ggm/error.hpp"

#include <cmath>

namespace ggm {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NumericalError: return "NumericalError";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

namespace {

void symmetrize_in_place(Matrix& m) {
    if (m.rows() != m.cols())
        throw_invalid("SymMatrix requires a square matrix, got " +
                      std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    const Eigen::Index n = m.rows();
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = j + 1; i < n; ++i) {
            const double v = 0.5 * (m(i, j) + m(j, i));
            m(i, j) = v;
            m(j, i) = v;
        }
}

}  // namespace

SymMatrix::SymMatrix(const Matrix& m) : m_(m) { symmetrize_in_place(m_); }

SymMatrix::SymMatrix(Matrix&& m) : m_(std::move(m)) { symmetrize_in_place(m_); }

SymMatrix SymMatrix::zero(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    return SymMatrix(Matrix::Zero(n, n), Trusted{});
}

SymMatrix SymMatrix::identity(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    return SymMatrix(Matrix::Identity(n, n), Trusted{});
}

SymMatrix SymMatrix::diagonal(const Vector& d) {
    Matrix m = d.asDiagonal();
    return SymMatrix(std::move(m), Trusted{});
}

void SymMatrix::set(std::size_t i, std::size_t j, double v) {
    const auto a = static_cast<Eigen::Index>(i);
    const auto b = static_cast<Eigen::Index>(j);
    m_(a, b) = v;
    m_(b, a) = v;
}

SymMatrix SymMatrix::operator+(const SymMatrix& o) const {
    return SymMatrix(Matrix(m_ + o.m_), Trusted{});
}

SymMatrix SymMatrix::operator-(const SymMatrix& o) const {
    return SymMatrix(Matrix(m_ - o.m_), Trusted{});
}

SymMatrix SymMatrix::operator*(double s) const {
    return SymMatrix(Matrix(m_ * s), Trusted{});
}

SymMatrix EigenDecomp::reconstruct(const Vector& mapped) const {
    return SymMatrix(Matrix(eigenvectors * mapped.asDiagonal() * eigenvectors.transpose()));
}

EigenDecomp eigh(const SymMatrix& a) {
    if (!a.all_finite())
        throw_invalid("eigh: matrix has non-finite entries");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a.mat(), Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw_numerical("eigh: eigensolver failed to converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const SymMatrix& a) {
    if (a.empty())
        return 0.0;
    if (!a.all_finite())
        throw_invalid("min_eigenvalue: matrix has non-finite entries");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a.mat(), Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

double logdet_pd(const SymMatrix& a, bool& ok) {
    Eigen::LLT<Matrix> llt(a.mat());
    ok = llt.info() == Eigen::Success;
    if (!ok)
        return 0.0;
    const Vector d = llt.matrixL().toDenseMatrix().diagonal();
    double s = 0.0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (!(d(i) > 0.0)) {
            ok = false;
            return 0.0;
        }
        s += std::log(d(i));
    }
    return 2.0 * s;
}

}  // namespace ggm
