#pragma once

#include <complex>

#include <Eigen/Dense>

namespace jpi {

using Complex = std::complex<double>;

/// Square complex matrix over sideband offsets n in [-N, N]. Row/column
/// index 0 corresponds to n = -N, index N to the signal itself.
class SpectralMatrix {
public:
    SpectralMatrix() = default;
    explicit SpectralMatrix(int n_sidebands);
    SpectralMatrix(int n_sidebands, Eigen::MatrixXcd m);

    static SpectralMatrix identity(int n_sidebands);
    static SpectralMatrix diagonal(const Eigen::VectorXcd& d);

    int sidebands() const { return n_; }
    int dim() const { return 2 * n_ + 1; }

    Complex& at(int n, int p) { return m_(n + n_, p + n_); }
    Complex at(int n, int p) const { return m_(n + n_, p + n_); }

    const Eigen::MatrixXcd& matrix() const { return m_; }
    Eigen::MatrixXcd& matrix() { return m_; }

    /// Central (2M+1)x(2M+1) sub-block, M <= N.
    SpectralMatrix truncated(int m) const;

    double max_abs() const;

private:
    int n_ = 0;
    Eigen::MatrixXcd m_ = Eigen::MatrixXcd::Zero(1, 1);
};

/// Signed sideband frequencies omega + n*omega_m for n in [-N, N].
Eigen::VectorXd sideband_frequencies(double omega, double omega_m, int n_sidebands);

/// Inverse via full-pivot LU; throws SingularNetwork when the reciprocal
/// condition estimate falls below `rcond_min`.
Eigen::MatrixXcd checked_inverse(const Eigen::MatrixXcd& m, const char* what, double omega,
                                 double rcond_min = 1e-14);

Eigen::MatrixXcd checked_solve(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                               const char* what, double omega, double rcond_min = 1e-14);

inline double to_db(double magnitude) { return 20.0 * std::log10(magnitude); }
inline double to_db(Complex z) { return to_db(std::abs(z)); }

}  // namespace jpi
