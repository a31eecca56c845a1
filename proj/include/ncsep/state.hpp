#pragma once

#include "ncsep/canonical.hpp"
#include "ncsep/covariance.hpp"
#include "ncsep/core.hpp"
#include "ncsep/symplectic.hpp"

#include <cmath>
#include <utility>

namespace ncsep {

// The ten independent q_ab of the Hermitian second-moment matrix Q^(13) over
// a displaced number state |n1, n2; b1, b2>. Entries (1,1),(2,2),(3,3),(4,4),
// (1,4),(2,3) are real; (1,2),(1,3),(2,4),(3,4) enter as i*q_ab and drop out
// of every covariance.
struct QuadraticMoments {
    double q11, q12, q13, q14;
    double q22, q23, q24;
    double q33, q34;
    double q44;
    int n1 = 0, n2 = 0;
};

inline QuadraticMoments q13_moments(const NormalModeDecomposition& dec, int n1,
                                    int n2) {
    if (n1 < 0 || n2 < 0)
        throw DomainError("q13_moments: occupations must be nonnegative");
    const auto& g = dec.gamma_hat;
    const double f1 = 2.0 * n1 + 1.0, f2 = 2.0 * n2 + 1.0;
    QuadraticMoments q;
    q.n1 = n1;
    q.n2 = n2;
    q.q11 = f1 * g(0, 1) * g(0, 1) + f2 * g(1, 1) * g(1, 1);
    q.q12 = g(0, 0) * g(0, 1) + g(1, 0) * g(1, 1);
    q.q13 = g(0, 1) * g(0, 3) + g(1, 1) * g(1, 3);
    q.q14 = -(f1 * g(0, 1) * g(0, 2) + f2 * g(1, 1) * g(1, 2));
    q.q22 = f1 * g(0, 0) * g(0, 0) + f2 * g(1, 0) * g(1, 0);
    q.q23 = f1 * g(0, 0) * g(0, 3) + f2 * g(1, 0) * g(1, 3);
    q.q24 = g(0, 0) * g(0, 2) + g(1, 0) * g(1, 2);
    q.q33 = f1 * g(0, 3) * g(0, 3) + f2 * g(1, 3) * g(1, 3);
    q.q34 = g(0, 2) * g(0, 3) + g(1, 2) * g(1, 3);
    q.q44 = f1 * g(0, 2) * g(0, 2) + f2 * g(1, 2) * g(1, 2);
    return q;
}

// NC-frame covariance with the exact sparsity pattern of the q-expansion:
// V~12 = V~13 = V~24 = V~34 = 0.
inline CovarianceMatrix nc_covariance(const QuadraticMoments& q,
                                      const NCParams& nc) {
    const double h = nc.hbar, th = nc.theta, et = nc.eta;
    Matrix4 v = Matrix4::Zero();
    v(0, 0) = q.q11 - th / h * q.q14 + th * th / (4.0 * h * h) * q.q44;
    v(1, 1) = q.q22 + et / h * q.q23 + et * et / (4.0 * h * h) * q.q33;
    v(2, 2) = q.q33 + th / h * q.q23 + th * th / (4.0 * h * h) * q.q22;
    v(3, 3) = q.q44 - et / h * q.q14 + et * et / (4.0 * h * h) * q.q11;
    v(0, 3) = v(3, 0) = nc.hbar_e / h * q.q14 - et / (2.0 * h) * q.q11 -
                        th / (2.0 * h) * q.q44;
    v(1, 2) = v(2, 1) = nc.hbar_e / h * q.q23 + th / (2.0 * h) * q.q22 +
                        et / (2.0 * h) * q.q33;
    return CovarianceMatrix(v, Frame::noncommutative);
}

// Commutative-frame covariance: V11 = diag(q11, q22), V22 = diag(q33, q44),
// V12 = antidiag(q14, q23).
inline CovarianceMatrix commutative_blocks(const QuadraticMoments& q) {
    Matrix4 v = Matrix4::Zero();
    v(0, 0) = q.q11;
    v(1, 1) = q.q22;
    v(2, 2) = q.q33;
    v(3, 3) = q.q44;
    v(0, 3) = v(3, 0) = q.q14;
    v(1, 2) = v(2, 1) = q.q23;
    return CovarianceMatrix(v, Frame::commutative);
}

// First moments <X~> = Upsilon_D Q beta~ with beta~ = (b1, b1*, b2, b2*).
// Reality is a theorem of the Q structure, not a numerical given; residue
// beyond tolerance signals a broken normalization.
inline Vector4 expectation_positions(const std::pair<Complex, Complex>& beta,
                                     const NormalModeDecomposition& dec,
                                     const NCParams& nc,
                                     double imag_tol = 1e-12) {
    ComplexVector4 bt(beta.first, std::conj(beta.first), beta.second,
                      std::conj(beta.second));
    const ComplexVector4 x =
        bopp_shift(nc).cast<Complex>() * (dec.Q * bt);
    const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
    if (x.imag().cwiseAbs().maxCoeff() > imag_tol * scale)
        throw NumericalError(
            "expectation_positions: non-real first moment (broken Q "
            "normalization?)");
    return x.real();
}

// Full Eq.(94)-(96) route: builds Q^(13) from the Q matrix entries, adds the
// beta-dependent first moments and subtracts them again. Equals
// nc_covariance(q13_moments(...)) for every beta; the displacement cancels.
inline CovarianceMatrix covariance_via_expectations(
    const std::pair<Complex, Complex>& beta, const NormalModeDecomposition& dec,
    const NCParams& nc, int n1, int n2) {
    if (n1 < 0 || n2 < 0)
        throw DomainError("covariance_via_expectations: occupations must be "
                          "nonnegative");
    ComplexVector4 bt(beta.first, std::conj(beta.first), beta.second,
                      std::conj(beta.second));
    const Matrix4 up = bopp_shift(nc);
    const ComplexMatrix4& q = dec.Q;

    ComplexMatrix4 q13;
    for (int j = 0; j < 4; ++j)
        for (int l = 0; l < 4; ++l)
            q13(j, l) = double(n1) * std::conj(q(j, 0)) * q(l, 0) +
                        double(n1 + 1) * q(j, 0) * std::conj(q(l, 0)) +
                        double(n2) * std::conj(q(j, 2)) * q(l, 2) +
                        double(n2 + 1) * q(j, 2) * std::conj(q(l, 2));

    const ComplexVector4 xc = up.cast<Complex>() * (q * bt);
    Matrix4 v;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            double acc = 0.0;
            for (int j = 0; j < 4; ++j)
                for (int l = 0; l < 4; ++l)
                    acc += up(a, j) * up(b, l) * std::real(q13(j, l));
            // 1/2 <{Xa, Xb}> carries the displacement, <Xa><Xb> removes it
            const double symmetrized = acc + std::real(xc(a) * xc(b));
            const double product = std::real(xc(a)) * std::real(xc(b));
            v(a, b) = symmetrized - product;
        }
    }
    return CovarianceMatrix(v, Frame::noncommutative, 1e-10);
}

// Commutative-space limit of Ps in natural units (hbar = 1), the paper's
// closed form:  1/16 - (1/4) m1^2 m2^4 w1^2 (w2^2 - w1^2)^4.
inline double commutative_limit_ps(double m1, double m2, double w1, double w2) {
    if (!(m1 > 0.0 && m2 > 0.0 && w1 > 0.0 && w2 > 0.0))
        throw DomainError("commutative_limit_ps: positive parameters required");
    const double d = w2 * w2 - w1 * w1;
    const double d2 = d * d;
    return 1.0 / 16.0 -
           0.25 * m1 * m1 * std::pow(m2, 4) * w1 * w1 * d2 * d2;
}

}  // namespace ncsep
