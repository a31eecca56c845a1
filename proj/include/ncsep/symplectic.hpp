#pragma once

#include "ncsep/core.hpp"

#include <cmath>

namespace ncsep {

// hbar_e = hbar (1 + theta*eta / 4 hbar^2)
inline double effective_planck(double theta, double eta, double hbar) {
    if (!(std::isfinite(theta) && std::isfinite(eta) && std::isfinite(hbar)))
        throw DomainError("effective_planck: non-finite input");
    if (hbar <= 0.0)
        throw DomainError("effective_planck: hbar must be positive");
    if (theta < 0.0 || eta < 0.0)
        throw DomainError("effective_planck: theta, eta must be nonnegative");
    return hbar * (1.0 + theta * eta / (4.0 * hbar * hbar));
}

// Noncommutativity parameters, valid on 0 <= theta <= hbar, 0 <= eta <= hbar.
struct NCParams {
    double theta = 0.0;
    double eta = 0.0;
    double hbar = 1.0;
    double hbar_e = 1.0;

    static NCParams make(double theta, double eta, double hbar = 1.0) {
        const double he = effective_planck(theta, eta, hbar);
        if (theta > hbar || eta > hbar)
            throw DomainError("NCParams: require theta <= hbar and eta <= hbar");
        return NCParams{theta, eta, hbar, he};
    }

    bool commutative() const { return theta == 0.0 && eta == 0.0; }
};

// Pi_{theta eta} = diag(theta, eta)
inline Matrix2 nc_block(const NCParams& nc) {
    Matrix2 pi = Matrix2::Zero();
    pi(0, 0) = nc.theta;
    pi(1, 1) = nc.eta;
    return pi;
}

// J = diag(J2, J2); encodes [X_a, X_b] = i hbar J_ab.
inline Matrix4 standard_symplectic() {
    Matrix4 j = Matrix4::Zero();
    j.block<2, 2>(0, 0) = j2();
    j.block<2, 2>(2, 2) = j2();
    return j;
}

// Deformed form J~ with off-diagonal blocks +-Pi/hbar_e.
inline Matrix4 deformed_symplectic(const NCParams& nc) {
    Matrix4 j = standard_symplectic();
    const Matrix2 pi = nc_block(nc) / nc.hbar_e;
    j.block<2, 2>(0, 2) = pi;
    j.block<2, 2>(2, 0) = -pi;
    return j;
}

// Darboux (Bopp shift) matrix Upsilon_D: X~ = Upsilon_D X.
inline Matrix4 bopp_shift(const NCParams& nc) {
    const Matrix2 k = (0.5 / nc.hbar) * nc_block(nc) * j2();
    Matrix4 u = Matrix4::Identity();
    u.block<2, 2>(0, 2) = -k;
    u.block<2, 2>(2, 0) = k;
    return u;
}

// det of the Schur complement of the identity block, (1 - theta*eta/4hbar^2)^2.
// >= 9/16 on the valid parameter domain.
inline double schur_complement_det(const NCParams& nc) {
    const double s = 1.0 - nc.theta * nc.eta / (4.0 * nc.hbar * nc.hbar);
    return s * s;
}

// Closed-form inverse via the Schur complement.
inline Matrix4 bopp_shift_inverse(const NCParams& nc) {
    const double det_c = schur_complement_det(nc);
    if (det_c < 1e-12)
        throw NumericalError("bopp_shift_inverse: Schur complement singular");
    const Matrix2 k = (0.5 / nc.hbar) * nc_block(nc) * j2();
    Matrix4 u = Matrix4::Identity();
    u.block<2, 2>(0, 2) = k;
    u.block<2, 2>(2, 0) = -k;
    return u / std::sqrt(det_c);
}

// || hbar_e J~ - hbar Upsilon_D J Upsilon_D^T ||_inf; an exact identity, so
// anything above ~1e-13 signals a broken transport.
inline double symplectic_correspondence_residual(const NCParams& nc) {
    const Matrix4 up = bopp_shift(nc);
    const Matrix4 lhs = nc.hbar_e * deformed_symplectic(nc);
    const Matrix4 rhs = nc.hbar * up * standard_symplectic() * up.transpose();
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

}  // namespace ncsep
