#pragma once

#include "ncsep/core.hpp"
#include "ncsep/schedule.hpp"
#include "ncsep/symplectic.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <utility>

namespace ncsep {

// Time-dependent oscillator in NC phase space: masses, frequencies, linear
// drive amplitudes and NC parameters are all schedules; hbar is constant.
struct OscillatorConfig {
    Schedule m1, m2;      // masses, strictly positive on the window
    Schedule w1, w2;      // frequencies (the tilde omegas), strictly positive
    Schedule e1, e2;      // drive amplitudes
    Schedule theta, eta;  // NC parameters, within [0, hbar]
    double hbar = 1.0;
};

// Effective parameters of the Bopp-shifted commutative Hamiltonian plus the
// characteristic-polynomial data of Omega = J H, p(l) = l^4 + b l^2 + c.
struct DerivedParams {
    double mu1, mu2;        // effective inverse-kinetic masses
    double alpha1, alpha2;  // effective spring constants
    double nu1, nu2;        // NC coupling strengths
    double w1_sq, w2_sq;    // effective frequencies, w_j^2 = alpha_j / mu_j
    double b, c, delta;     // b = w1^2 + w2^2 + 8 nu1 nu2, delta = b^2 - 4c
    double hbar;
};

inline std::atomic<long>& clamp_warning_count() {
    static std::atomic<long> n{0};
    return n;
}

namespace detail {
// The Appendix proves c >= 0 and delta >= 0 analytically; tiny negative
// values are roundoff and get clamped, anything beyond -1e-10 is a caller bug.
inline double clamp_nonneg(double x, const char* what) {
    if (x >= 0.0) return x;
    if (x >= -1e-10) {
        clamp_warning_count().fetch_add(1, std::memory_order_relaxed);
        return 0.0;
    }
    throw NumericalError(std::string(what) + " = " + std::to_string(x) +
                         " violates the Appendix nonnegativity bound");
}
}  // namespace detail

inline DerivedParams derived_params(double m1, double m2, double w1, double w2,
                                    const NCParams& nc) {
    if (!(m1 > 0.0 && m2 > 0.0 && w1 > 0.0 && w2 > 0.0))
        throw DomainError("derived_params: masses and frequencies must be positive");
    ensure_finite(m1, "derived_params");
    ensure_finite(m2, "derived_params");
    ensure_finite(w1, "derived_params");
    ensure_finite(w2, "derived_params");

    const double h = nc.hbar;
    const double th = nc.theta, et = nc.eta;
    DerivedParams dp{};
    dp.hbar = h;
    dp.mu1 = 1.0 / (1.0 / m1 + th * th / (4.0 * h * h) * m2 * w2 * w2);
    dp.mu2 = 1.0 / (1.0 / m2 + th * th / (4.0 * h * h) * m1 * w1 * w1);
    dp.alpha1 = m1 * w1 * w1 + et * et / (4.0 * h * h * m2);
    dp.alpha2 = m2 * w2 * w2 + et * et / (4.0 * h * h * m1);
    dp.nu1 = (et + m1 * m2 * th * w2 * w2) / (4.0 * h * m1);
    dp.nu2 = (et + m1 * m2 * th * w1 * w1) / (4.0 * h * m2);
    dp.w1_sq = dp.alpha1 / dp.mu1;
    dp.w2_sq = dp.alpha2 / dp.mu2;
    dp.b = dp.w1_sq + dp.w2_sq + 8.0 * dp.nu1 * dp.nu2;
    dp.c = detail::clamp_nonneg(
        dp.w1_sq * dp.w2_sq + 16.0 * dp.nu1 * dp.nu1 * dp.nu2 * dp.nu2 -
            4.0 * dp.nu1 * dp.nu1 * dp.w1_sq * dp.mu1 / dp.mu2 -
            4.0 * dp.nu2 * dp.nu2 * dp.w2_sq * dp.mu2 / dp.mu1,
        "derived_params: c");
    dp.delta =
        detail::clamp_nonneg(dp.b * dp.b - 4.0 * dp.c, "derived_params: delta");
    return dp;
}

inline NCParams nc_at(const OscillatorConfig& cfg, double t) {
    return NCParams::make(cfg.theta(t), cfg.eta(t), cfg.hbar);
}

inline DerivedParams derived_params(const OscillatorConfig& cfg, double t) {
    return derived_params(cfg.m1(t), cfg.m2(t), cfg.w1(t), cfg.w2(t),
                          nc_at(cfg, t));
}

// H block structure over (x1, p1, x2, p2):
//   C = diag(alpha1, 1/mu1), B = diag(alpha2, 1/mu2), A = [[0, 2nu1], [-2nu2, 0]],
// and the Bopp-shifted drive vector E = (e1, (th/2h) e2, e2, -(th/2h) e1).
inline std::pair<Matrix4, Vector4> build_hamiltonian(const DerivedParams& dp,
                                                     double e1, double e2,
                                                     const NCParams& nc) {
    Matrix4 h = Matrix4::Zero();
    h(0, 0) = dp.alpha1;
    h(1, 1) = 1.0 / dp.mu1;
    h(2, 2) = dp.alpha2;
    h(3, 3) = 1.0 / dp.mu2;
    h(1, 2) = h(2, 1) = 2.0 * dp.nu1;
    h(0, 3) = h(3, 0) = -2.0 * dp.nu2;
    const double r = nc.theta / (2.0 * nc.hbar);
    Vector4 e(e1, r * e2, e2, -r * e1);
    return {h, e};
}

// Omega = J H; purely imaginary spectrum in conjugate pairs.
inline Matrix4 build_omega(const Matrix4& h) {
    if ((h - h.transpose()).cwiseAbs().maxCoeff() >
        1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff()))
        throw ValidationError("build_omega: H must be symmetric");
    return standard_symplectic() * h;
}

// Normal frequencies l1 >= l2 > 0 from p(l) = l^4 + b l^2 + c.
// l2 is recovered from the product l1 l2 = sqrt(c) to avoid cancellation.
inline std::pair<double, double> normal_frequencies(const DerivedParams& dp) {
    if (dp.b <= 0.0)
        throw NumericalError("normal_frequencies: b must be positive");
    const double c = detail::clamp_nonneg(dp.c, "normal_frequencies: c");
    const double delta =
        detail::clamp_nonneg(dp.b * dp.b - 4.0 * c, "normal_frequencies: delta");
    const double l1_sq = 0.5 * (dp.b + std::sqrt(delta));
    const double l1 = std::sqrt(l1_sq);
    const double l2 = l1_sq > 0.0 ? std::sqrt(c) / l1 : 0.0;
    return {l1, l2};
}

// Raw left-eigenvector components for u Omega = -i l u,
// u = (1/k) (-i g1, g2, g3, i g4), plus the normalization constant k fixed by
// Q^{-1} J (Q^{-1})^T = Sigma_y / hbar with the g2-component phase convention.
struct GammaVector {
    std::array<double, 4> gamma;
    double k;
};

inline GammaVector eigenvector_gammas(const DerivedParams& dp, double lambda) {
    const double l2 = lambda * lambda;
    std::array<double, 4> g;
    g[0] = lambda * dp.mu1 * dp.mu2 * (l2 - dp.w2_sq - 4.0 * dp.nu1 * dp.nu2);
    g[1] = dp.mu2 * (l2 - dp.w2_sq) + 4.0 * dp.mu1 * dp.nu1 * dp.nu1;
    g[2] = 2.0 * dp.mu1 * dp.mu2 * dp.nu1 * (l2 - 4.0 * dp.nu1 * dp.nu2) +
           2.0 * dp.nu2 * dp.mu2 * dp.mu2 * dp.w2_sq;
    g[3] = 2.0 * lambda * (dp.mu1 * dp.nu1 + dp.mu2 * dp.nu2);

    const double mag = std::max({std::abs(g[0]), std::abs(g[1]),
                                 std::abs(g[2]), std::abs(g[3])});
    if (mag < 1e-12)
        throw DegenerateModeError(
            "eigenvector_gammas: closed-form eigenvector vanishes; use the "
            "decoupled-mode fallback");
    const double s = g[0] * g[1] + g[2] * g[3];
    if (!(s > 0.0))
        throw DegenerateModeError(
            "eigenvector_gammas: nonpositive symplectic pairing (abnormal "
            "mode)");
    double k = std::sqrt(2.0 * dp.hbar * s);
    if (g[1] < 0.0) k = -k;
    return GammaVector{g, k};
}

// Canonical-mode decomposition: Q maps A = (a1, a1+, a2, a2+) to X = Q A.
// gamma_hat = hbar * gamma / k are the normalized components; rows of Qinv are
// u_j = (-i gh1, gh2, gh3, i gh4)/hbar, columns of Q are (i gh2, gh1, gh4, -i gh3).
struct NormalModeDecomposition {
    double lambda1, lambda2;
    Eigen::Matrix<double, 2, 4> gamma;      // raw closed-form components
    double k1, k2;                           // normalization constants
    Eigen::Matrix<double, 2, 4> gamma_hat;  // hbar * gamma / k
    ComplexMatrix4 Q;
    ComplexMatrix4 Qinv;
    double hbar;
};

namespace detail {

inline void emplace_mode(NormalModeDecomposition& dec, int mode,
                         const std::array<double, 4>& gh) {
    const Complex i(0.0, 1.0);
    const int col = 2 * mode;
    dec.gamma_hat(mode, 0) = gh[0];
    dec.gamma_hat(mode, 1) = gh[1];
    dec.gamma_hat(mode, 2) = gh[2];
    dec.gamma_hat(mode, 3) = gh[3];
    ComplexVector4 v(i * gh[1], Complex(gh[0]), Complex(gh[3]), -i * gh[2]);
    dec.Q.col(col) = v;
    dec.Q.col(col + 1) = v.conjugate();
    Eigen::RowVector4cd u(-i * gh[0], Complex(gh[1]), Complex(gh[2]),
                          i * gh[3]);
    u /= dec.hbar;
    dec.Qinv.row(col) = u;
    dec.Qinv.row(col + 1) = u.conjugate();
}

// nu1 nu2 -> 0: modes decouple into the two oscillators; closed-form gammas
// vanish for the on-shell mode, so construct the per-mode ladders directly.
// Mode 1 is the higher-frequency oscillator.
inline NormalModeDecomposition build_q_decoupled(const DerivedParams& dp) {
    NormalModeDecomposition dec;
    dec.hbar = dp.hbar;
    const double wa = std::sqrt(dp.w1_sq), wb = std::sqrt(dp.w2_sq);
    dec.lambda1 = std::max(wa, wb);
    dec.lambda2 = std::min(wa, wb);
    const bool first_is_osc1 = wa >= wb;

    const auto ladder = [&](double mu, double w, bool osc1) {
        std::array<double, 4> gh{0.0, 0.0, 0.0, 0.0};
        const double gx = std::sqrt(dp.hbar * mu * w / 2.0);
        const double gp = std::sqrt(dp.hbar / (2.0 * mu * w));
        if (osc1) {
            gh[0] = gx;
            gh[1] = gp;
        } else {
            gh[2] = gx;
            gh[3] = gp;
        }
        return gh;
    };

    dec.gamma_hat.setZero();
    dec.Q.setZero();
    dec.Qinv.setZero();
    if (first_is_osc1) {
        emplace_mode(dec, 0, ladder(dp.mu1, wa, true));
        emplace_mode(dec, 1, ladder(dp.mu2, wb, false));
    } else {
        emplace_mode(dec, 0, ladder(dp.mu2, wb, false));
        emplace_mode(dec, 1, ladder(dp.mu1, wa, true));
    }
    // raw gammas are not meaningful here; store the normalized ones with k = hbar
    dec.gamma = dec.gamma_hat;
    dec.k1 = dec.k2 = dp.hbar;
    return dec;
}

}  // namespace detail

inline NormalModeDecomposition build_Q(const DerivedParams& dp) {
    if (dp.nu1 * dp.nu2 < 1e-14) return detail::build_q_decoupled(dp);

    const auto [l1, l2] = normal_frequencies(dp);
    if (std::abs(l1 - l2) < 1e-8 * l1)
        throw DegenerateModeError(
            "build_Q: degenerate coupled spectrum is outside the paper's "
            "assumption of four distinct eigenvalues");

    NormalModeDecomposition dec;
    dec.hbar = dp.hbar;
    dec.lambda1 = l1;
    dec.lambda2 = l2;
    dec.Q.setZero();
    dec.Qinv.setZero();
    const GammaVector g1 = eigenvector_gammas(dp, l1);
    const GammaVector g2 = eigenvector_gammas(dp, l2);
    dec.k1 = g1.k;
    dec.k2 = g2.k;
    for (int j = 0; j < 4; ++j) {
        dec.gamma(0, j) = g1.gamma[j];
        dec.gamma(1, j) = g2.gamma[j];
    }
    const auto normalize = [&](const GammaVector& g) {
        std::array<double, 4> gh;
        for (int j = 0; j < 4; ++j) gh[j] = dp.hbar * g.gamma[j] / g.k;
        return gh;
    };
    detail::emplace_mode(dec, 0, normalize(g1));
    detail::emplace_mode(dec, 1, normalize(g2));
    return dec;
}

// Residuals of the three structural identities the decomposition must satisfy.
struct DecompositionResiduals {
    double diagonalization;  // ||Qinv Omega Q - Omega_D||_inf / ||Omega||_inf
    double dagger_identity;  // ||Q^dag + hbar Sigma_z Qinv Sigma_y||_inf
    double symplectic_norm;  // ||Qinv J Qinv^T - Sigma_y / hbar||_inf
};

inline DecompositionResiduals validate(const NormalModeDecomposition& dec,
                                       const Matrix4& omega) {
    const Complex i(0.0, 1.0);
    ComplexMatrix4 omega_d = ComplexMatrix4::Zero();
    omega_d(0, 0) = -i * dec.lambda1;
    omega_d(1, 1) = i * dec.lambda1;
    omega_d(2, 2) = -i * dec.lambda2;
    omega_d(3, 3) = i * dec.lambda2;

    DecompositionResiduals r;
    r.diagonalization =
        (dec.Qinv * omega.cast<Complex>() * dec.Q - omega_d).cwiseAbs().maxCoeff() /
        std::max(1.0, omega.cwiseAbs().maxCoeff());
    // Eq. Q^dag = -Sigma_z Qinv Sigma_y in natural units; hbar restores units.
    r.dagger_identity = (dec.Q.adjoint() +
                         dec.hbar * sigma_z4() * dec.Qinv * sigma_y4())
                            .cwiseAbs()
                            .maxCoeff();
    r.symplectic_norm =
        (dec.Qinv * standard_symplectic().cast<Complex>() * dec.Qinv.transpose() -
         sigma_y4() / dec.hbar)
            .cwiseAbs()
            .maxCoeff();
    return r;
}

// Linear-interaction data of the canonical Hamiltonian,
// V(t) = g + sum_j (f_j a_j+ + f_j* a_j).
struct DriveTerms {
    Complex f1, f2;
    double g;
};

inline DriveTerms drive_terms(const NormalModeDecomposition& dec, double e1,
                              double e2, const NCParams& nc) {
    const double r = nc.theta / (2.0 * nc.hbar);
    const Complex i(0.0, 1.0);
    const auto f = [&](int mode) {
        const auto& gh = dec.gamma_hat;
        return e2 * (gh(mode, 3) + r * gh(mode, 0)) -
               i * e1 * (gh(mode, 1) + r * gh(mode, 2));
    };
    return DriveTerms{f(0), f(1), 0.5 * (dec.lambda1 + dec.lambda2)};
}

// Appendix alpha0 / omega_x / omega_y parameterization; an independent route
// to the same characteristic polynomial, usable whenever nu1 nu2 > 0.
struct AppendixDiagnostics {
    double omega_x_sq, omega_y_sq, alpha0;
    double b_alt, c_alt;     // recomputed b, c
    double ratio1, ratio2;   // mu1 w1^2 / (4 mu2 nu2^2), mu2 w2^2 / (4 mu1 nu1^2)
};

inline AppendixDiagnostics appendix_diagnostics(const DerivedParams& dp) {
    if (!(dp.nu1 * dp.nu2 > 0.0))
        throw DomainError("appendix_diagnostics: requires nu1 nu2 > 0");
    AppendixDiagnostics d;
    d.ratio1 = dp.mu1 * dp.w1_sq / (4.0 * dp.mu2 * dp.nu2 * dp.nu2);
    d.ratio2 = dp.mu2 * dp.w2_sq / (4.0 * dp.mu1 * dp.nu1 * dp.nu1);
    const double nn = 4.0 * dp.nu1 * dp.nu2;
    d.omega_x_sq = nn * (d.ratio1 - 1.0);
    d.omega_y_sq = nn * (d.ratio2 - 1.0);
    d.alpha0 = dp.mu2 * dp.nu2 / (dp.mu1 * dp.nu1);
    const double sa = std::sqrt(d.alpha0);
    d.b_alt = d.alpha0 * d.omega_x_sq + d.omega_y_sq / d.alpha0 +
              nn * (sa + 1.0 / sa) * (sa + 1.0 / sa);
    d.c_alt = d.omega_x_sq * d.omega_y_sq;
    return d;
}

}  // namespace ncsep
