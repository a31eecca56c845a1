#pragma once

#include "ncsep/core.hpp"
#include "ncsep/symplectic.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace ncsep {

enum class Frame { commutative, noncommutative };

// 4x4 real symmetric second-moment matrix over (x1, p1, x2, p2), tagged with
// the frame its entries refer to. Construction symmetrizes after checking the
// asymmetry is within tolerance.
class CovarianceMatrix {
  public:
    CovarianceMatrix(const Matrix4& m, Frame frame, double sym_tol = 1e-12)
        : frame_(frame) {
        ensure_finite(m, "CovarianceMatrix");
        const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
        const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
        if (asym > sym_tol * scale)
            throw ValidationError("CovarianceMatrix: asymmetry " +
                                  std::to_string(asym) + " beyond tolerance");
        m_ = 0.5 * (m + m.transpose());
    }

    const Matrix4& matrix() const { return m_; }
    Frame frame() const { return frame_; }

    Matrix2 block11() const { return m_.block<2, 2>(0, 0); }
    Matrix2 block12() const { return m_.block<2, 2>(0, 2); }
    Matrix2 block22() const { return m_.block<2, 2>(2, 2); }

  private:
    Matrix4 m_;
    Frame frame_;
};

struct LocalInvariants {
    double delta1;   // det V11
    double delta2;   // det V22
    double delta12;  // det V12
    double delta_v;  // det V
    double tau_v;    // Tr(V11 J2 V12 J2 V22 J2 V12^T J2)
};

inline void require_commutative(const CovarianceMatrix& v, const char* op) {
    if (v.frame() != Frame::commutative)
        throw ValidationError(std::string(op) +
                              ": covariance must be in the commutative frame");
}

// The four Sp(2,R) x Sp(2,R) local invariants plus det V.
inline LocalInvariants local_invariants(const CovarianceMatrix& v) {
    require_commutative(v, "local_invariants");
    const Matrix2 v11 = v.block11();
    const Matrix2 v12 = v.block12();
    const Matrix2 v22 = v.block22();
    LocalInvariants out;
    out.delta1 = v11.determinant();
    out.delta2 = v22.determinant();
    out.delta12 = v12.determinant();
    out.delta_v = v.matrix().determinant();
    out.tau_v =
        (v11 * j2() * v12 * j2() * v22 * j2() * v12.transpose() * j2()).trace();
    return out;
}

struct RsupResult {
    bool holds;
    double min_eigenvalue;  // of the Hermitian matrix V + (i/2) hbar J
    double scalar_slack;    // LHS - RHS of the Eq.(28) scalar inequality
};

// Robertson-Schrodinger check: V + (i/2) hbar J >= 0 (eigenvalue floor
// -1e-10), plus the scalar form
//   D1 D2 + (hbar^2/4 - D12)^2 - tau_v >= hbar^2/4 (D1 + D2).
inline RsupResult rsup_check(const CovarianceMatrix& v, double hbar,
                             double eig_floor = -1e-10) {
    require_commutative(v, "rsup_check");
    ComplexMatrix4 h = v.matrix().cast<Complex>();
    h += Complex(0.0, 0.5 * hbar) * standard_symplectic().cast<Complex>();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix4> es(h);
    const double min_eig = es.eigenvalues().minCoeff();

    const LocalInvariants li = local_invariants(v);
    const double q = hbar * hbar / 4.0;
    const double lhs =
        li.delta1 * li.delta2 + (q - li.delta12) * (q - li.delta12) - li.tau_v;
    const double rhs = q * (li.delta1 + li.delta2);
    return RsupResult{min_eig >= eig_floor, min_eig, lhs - rhs};
}

// Simon's separability functional. Ps >= 0 is necessary for separability and
// sufficient for bipartite Gaussian states.
inline double simon_ps(const CovarianceMatrix& v, double hbar) {
    const LocalInvariants li = local_invariants(v);
    const double q = hbar * hbar / 4.0;
    return li.delta1 * li.delta2 +
           (q - std::abs(li.delta12)) * (q - std::abs(li.delta12)) - li.tau_v -
           q * (li.delta1 + li.delta2);
}

// Magnitude scale of the four Ps terms, used for the verdict dead zone.
inline double simon_ps_scale(const CovarianceMatrix& v, double hbar) {
    const LocalInvariants li = local_invariants(v);
    const double q = hbar * hbar / 4.0;
    return std::max({1.0, std::abs(li.delta1 * li.delta2),
                     (q + std::abs(li.delta12)) * (q + std::abs(li.delta12)),
                     std::abs(li.tau_v), q * (li.delta1 + li.delta2)});
}

// Mirror reflection p2 -> -p2 (the Peres-Horodecki partial transpose on the
// covariance level). Involution; flips the sign of Delta12 only.
inline CovarianceMatrix mirror_reflection(const CovarianceMatrix& v) {
    require_commutative(v, "mirror_reflection");
    Matrix4 l = Matrix4::Identity();
    l(3, 3) = -1.0;
    return CovarianceMatrix(l * v.matrix() * l, Frame::commutative);
}

// Williamson eigenvalues of the diagonal blocks, d_j = sqrt(det V_jj).
inline std::pair<double, double> symplectic_eigenvalues(
    const CovarianceMatrix& v) {
    require_commutative(v, "symplectic_eigenvalues");
    const double d1 = v.block11().determinant();
    const double d2 = v.block22().determinant();
    if (d1 < 0.0 || d2 < 0.0)
        throw ValidationError(
            "symplectic_eigenvalues: negative block determinant (non-physical "
            "covariance)");
    return {std::sqrt(d1), std::sqrt(d2)};
}

// Normal-form off-diagonal pair (kappa1, kappa2) recovered from
// Delta12 = k1 k2 and DetV = (sqrt(D1 D2) - k1^2)(sqrt(D1 D2) - k2^2).
// Diagnostic only; the invariants carry the physics.
struct WilliamsonDiagnostic {
    double kappa1;
    double kappa2;
};

inline WilliamsonDiagnostic williamson_normal_form(const CovarianceMatrix& v) {
    const LocalInvariants li = local_invariants(v);
    const double g = std::sqrt(std::max(li.delta1 * li.delta2, 0.0));
    if (g <= 0.0)
        throw ValidationError("williamson_normal_form: singular blocks");
    // k1^2 + k2^2 and k1^2 k2^2 from the two invariants
    const double s2 = (li.delta1 * li.delta2 + li.delta12 * li.delta12 -
                       li.delta_v) / g;
    const double p2 = li.delta12 * li.delta12;
    const double disc = std::max(s2 * s2 - 4.0 * p2, 0.0);
    const double r1 = 0.5 * (s2 + std::sqrt(disc));
    const double r2 = 0.5 * (s2 - std::sqrt(disc));
    const double k1 = std::sqrt(std::max(r1, 0.0));
    double k2 = std::sqrt(std::max(r2, 0.0));
    if (li.delta12 < 0.0) k2 = -k2;
    return WilliamsonDiagnostic{k1, k2};
}

// NC -> commutative covariance transport, Schur-complement block formulas.
inline CovarianceMatrix nc_to_commutative(const CovarianceMatrix& v,
                                          const NCParams& nc) {
    if (v.frame() != Frame::noncommutative)
        throw ValidationError(
            "nc_to_commutative: covariance must be in the NC frame");
    const double det_c = schur_complement_det(nc);
    const Matrix2 k = (0.5 / nc.hbar) * nc_block(nc) * j2();
    const Matrix2 kt = k.transpose();
    const Matrix2 t11 = v.block11();
    const Matrix2 t12 = v.block12();
    const Matrix2 t22 = v.block22();

    const Matrix2 v11 =
        (t11 + t12 * kt + k * t12.transpose() + k * t22 * kt) / det_c;
    const Matrix2 v12 =
        (t12 - t11 * kt + k * t22 - k * t12.transpose() * kt) / det_c;
    const Matrix2 v22 =
        (t22 - t12.transpose() * kt - k * t12 + k * t11 * kt) / det_c;

    Matrix4 out;
    out.block<2, 2>(0, 0) = v11;
    out.block<2, 2>(0, 2) = v12;
    out.block<2, 2>(2, 0) = v12.transpose();
    out.block<2, 2>(2, 2) = v22;
    return CovarianceMatrix(out, Frame::commutative);
}

// Same transport as conjugation by the closed-form inverse Bopp matrix.
// Must agree with nc_to_commutative to 1e-12; exposed for the dual-route check.
inline CovarianceMatrix nc_to_commutative_via_conjugation(
    const CovarianceMatrix& v, const NCParams& nc) {
    if (v.frame() != Frame::noncommutative)
        throw ValidationError(
            "nc_to_commutative_via_conjugation: covariance must be in the NC "
            "frame");
    const Matrix4 ui = bopp_shift_inverse(nc);
    return CovarianceMatrix(ui * v.matrix() * ui.transpose(),
                            Frame::commutative);
}

inline CovarianceMatrix commutative_to_nc(const CovarianceMatrix& v,
                                          const NCParams& nc) {
    require_commutative(v, "commutative_to_nc");
    const Matrix4 u = bopp_shift(nc);
    return CovarianceMatrix(u * v.matrix() * u.transpose(),
                            Frame::noncommutative);
}

enum class Verdict { separable, entangled, marginal };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::separable: return "separable";
        case Verdict::entangled: return "entangled";
        default: return "marginal";
    }
}

struct SeparabilityReport {
    double delta1;
    double delta2;
    double delta12;
    double delta_v;
    double tau_v;
    double ps;
    bool rsup_ok;
    Verdict verdict;
    bool gaussian;  // false for n1,n2 > 0 states: Ps >= 0 is then only necessary
};

inline Verdict classify_ps(double ps, double scale, double rel_tol = 1e-10) {
    if (std::abs(ps) < rel_tol * scale) return Verdict::marginal;
    return ps >= 0.0 ? Verdict::separable : Verdict::entangled;
}

inline SeparabilityReport make_report(const CovarianceMatrix& v, double hbar,
                                      bool gaussian = true) {
    const LocalInvariants li = local_invariants(v);
    const double ps = simon_ps(v, hbar);
    const RsupResult rs = rsup_check(v, hbar);
    return SeparabilityReport{li.delta1, li.delta2, li.delta12,
                              li.delta_v, li.tau_v,  ps,
                              rs.holds,   classify_ps(ps, simon_ps_scale(v, hbar)),
                              gaussian};
}

inline nlohmann::json to_json(const SeparabilityReport& r) {
    nlohmann::json j{{"delta1", r.delta1},   {"delta2", r.delta2},
                     {"delta12", r.delta12}, {"delta_v", r.delta_v},
                     {"tau_v", r.tau_v},     {"ps", r.ps},
                     {"rsup_ok", r.rsup_ok}, {"verdict", to_string(r.verdict)}};
    if (!r.gaussian) j["non_gaussian_warning"] = true;
    return j;
}

}  // namespace ncsep
