#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace ncsep {

// Coordinate ordering is (x1, p1, x2, p2) everywhere.
using Matrix2 = Eigen::Matrix2d;
using Matrix4 = Eigen::Matrix4d;
using ComplexMatrix4 = Eigen::Matrix4cd;
using Vector4 = Eigen::Vector4d;
using ComplexVector4 = Eigen::Vector4cd;
using Complex = std::complex<double>;

struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when the spectrum is (near-)degenerate and the closed-form
// eigenvectors vanish; callers coupled through nu1*nu2 > 0 cannot proceed,
// decoupled ones should take the per-mode fallback.
struct DegenerateModeError : NumericalError {
    using NumericalError::NumericalError;
};

struct IntegrationError : NumericalError {
    double last_good_time;
    IntegrationError(const std::string& what, double t)
        : NumericalError(what), last_good_time(t) {}
};

inline const Matrix2& j2() {
    static const Matrix2 m = (Matrix2() << 0.0, 1.0, -1.0, 0.0).finished();
    return m;
}

inline const ComplexMatrix4& sigma_y4() {
    static const ComplexMatrix4 m = [] {
        ComplexMatrix4 s = ComplexMatrix4::Zero();
        const Complex i(0.0, 1.0);
        s(0, 1) = -i;
        s(1, 0) = i;
        s(2, 3) = -i;
        s(3, 2) = i;
        return s;
    }();
    return m;
}

inline const ComplexMatrix4& sigma_z4() {
    static const ComplexMatrix4 m = [] {
        ComplexMatrix4 s = ComplexMatrix4::Zero();
        s(0, 0) = 1.0;
        s(1, 1) = -1.0;
        s(2, 2) = 1.0;
        s(3, 3) = -1.0;
        return s;
    }();
    return m;
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
    return m.allFinite();
}

template <typename Derived>
void ensure_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
    if (!m.allFinite())
        throw NumericalError(std::string(what) + ": non-finite entries");
}

inline void ensure_finite(double x, const char* what) {
    if (!std::isfinite(x))
        throw NumericalError(std::string(what) + ": non-finite value");
}

// Kahan-compensated accumulator for sums with heavy cancellation.
class KahanSum {
  public:
    void add(double x) {
        const double y = x - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace ncsep
