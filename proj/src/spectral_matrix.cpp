#include "jpi/spectral_matrix.hpp"

#include <string>

#include "jpi/errors.hpp"

namespace jpi {

SpectralMatrix::SpectralMatrix(int n_sidebands)
    : n_(n_sidebands), m_(Eigen::MatrixXcd::Zero(2 * n_sidebands + 1, 2 * n_sidebands + 1)) {
    if (n_sidebands < 0) throw InvalidParameter("sideband count must be non-negative");
}

SpectralMatrix::SpectralMatrix(int n_sidebands, Eigen::MatrixXcd m)
    : n_(n_sidebands), m_(std::move(m)) {
    if (n_sidebands < 0) throw InvalidParameter("sideband count must be non-negative");
    if (m_.rows() != dim() || m_.cols() != dim())
        throw DimensionMismatch("spectral matrix must be " + std::to_string(dim()) + "x" +
                                std::to_string(dim()));
}

SpectralMatrix SpectralMatrix::identity(int n_sidebands) {
    const int d = 2 * n_sidebands + 1;
    return SpectralMatrix(n_sidebands, Eigen::MatrixXcd::Identity(d, d));
}

SpectralMatrix SpectralMatrix::diagonal(const Eigen::VectorXcd& d) {
    if (d.size() % 2 == 0) throw DimensionMismatch("diagonal length must be odd");
    return SpectralMatrix(static_cast<int>(d.size() / 2), d.asDiagonal().toDenseMatrix());
}

SpectralMatrix SpectralMatrix::truncated(int m) const {
    if (m < 0 || m > n_) throw DimensionMismatch("truncation order exceeds sideband count");
    return SpectralMatrix(m, m_.block(n_ - m, n_ - m, 2 * m + 1, 2 * m + 1));
}

double SpectralMatrix::max_abs() const { return m_.cwiseAbs().maxCoeff(); }

Eigen::VectorXd sideband_frequencies(double omega, double omega_m, int n_sidebands) {
    Eigen::VectorXd w(2 * n_sidebands + 1);
    for (int n = -n_sidebands; n <= n_sidebands; ++n) w(n + n_sidebands) = omega + n * omega_m;
    return w;
}

namespace {

double rcond_estimate(const Eigen::FullPivLU<Eigen::MatrixXcd>& lu, const Eigen::MatrixXcd& m) {
    // 1-norm condition from the explicit inverse; matrices here are small.
    const double norm = m.cwiseAbs().colwise().sum().maxCoeff();
    if (norm == 0.0 || !lu.isInvertible()) return 0.0;
    const Eigen::MatrixXcd inv = lu.inverse();
    const double inv_norm = inv.cwiseAbs().colwise().sum().maxCoeff();
    if (!std::isfinite(inv_norm)) return 0.0;
    return 1.0 / (norm * inv_norm);
}

}  // namespace

Eigen::MatrixXcd checked_inverse(const Eigen::MatrixXcd& m, const char* what, double omega,
                                 double rcond_min) {
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
    lu.setThreshold(0.0);
    if (rcond_estimate(lu, m) < rcond_min)
        throw SingularNetwork(std::string("singular ") + what, omega, what);
    return lu.inverse();
}

Eigen::MatrixXcd checked_solve(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                               const char* what, double omega, double rcond_min) {
    if (a.rows() != b.rows()) throw DimensionMismatch(std::string("solve shape mismatch in ") + what);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(a);
    lu.setThreshold(0.0);
    if (rcond_estimate(lu, a) < rcond_min)
        throw SingularNetwork(std::string("singular ") + what, omega, what);
    return lu.solve(b);
}

}  // namespace jpi
