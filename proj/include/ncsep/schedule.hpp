#pragma once

#include "ncsep/core.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace ncsep {

// Time-dependent parameter schedule. Kinds:
//   constant      v(t) = a
//   inverse_sqrt  v(t) = a / sqrt(1 + b t)
//   power_law     v(t) = a (1 + b t)^p
//   table         piecewise-linear through strictly increasing knots,
//                 clamped outside the knot range
class Schedule {
  public:
    enum class Kind { constant, inverse_sqrt, power_law, table };

    Schedule() : kind_(Kind::constant), a_(0.0) {}

    static Schedule constant(double value) {
        ensure_finite(value, "Schedule::constant");
        Schedule s;
        s.kind_ = Kind::constant;
        s.a_ = value;
        return s;
    }

    static Schedule inverse_sqrt(double a, double b) {
        ensure_finite(a, "Schedule::inverse_sqrt");
        ensure_finite(b, "Schedule::inverse_sqrt");
        Schedule s;
        s.kind_ = Kind::inverse_sqrt;
        s.a_ = a;
        s.b_ = b;
        return s;
    }

    static Schedule power_law(double a, double b, double p) {
        ensure_finite(a, "Schedule::power_law");
        ensure_finite(b, "Schedule::power_law");
        ensure_finite(p, "Schedule::power_law");
        Schedule s;
        s.kind_ = Kind::power_law;
        s.a_ = a;
        s.b_ = b;
        s.p_ = p;
        return s;
    }

    static Schedule table(std::vector<double> times, std::vector<double> values) {
        if (times.size() != values.size() || times.size() < 2)
            throw DomainError("Schedule::table: need >= 2 knots, equal sizes");
        for (std::size_t i = 0; i < times.size(); ++i) {
            ensure_finite(times[i], "Schedule::table");
            ensure_finite(values[i], "Schedule::table");
            if (i > 0 && times[i] <= times[i - 1])
                throw DomainError("Schedule::table: knots must be strictly increasing");
        }
        Schedule s;
        s.kind_ = Kind::table;
        s.times_ = std::move(times);
        s.values_ = std::move(values);
        return s;
    }

    double operator()(double t) const {
        double v = 0.0;
        switch (kind_) {
            case Kind::constant:
                v = a_;
                break;
            case Kind::inverse_sqrt: {
                const double u = 1.0 + b_ * t;
                if (u <= 0.0)
                    throw DomainError("Schedule::inverse_sqrt: 1 + b t <= 0");
                v = a_ / std::sqrt(u);
                break;
            }
            case Kind::power_law: {
                const double u = 1.0 + b_ * t;
                if (u <= 0.0)
                    throw DomainError("Schedule::power_law: 1 + b t <= 0");
                v = a_ * std::pow(u, p_);
                break;
            }
            case Kind::table: {
                if (t <= times_.front()) {
                    v = values_.front();
                } else if (t >= times_.back()) {
                    v = values_.back();
                } else {
                    std::size_t hi = 1;
                    while (times_[hi] < t) ++hi;
                    const double w =
                        (t - times_[hi - 1]) / (times_[hi] - times_[hi - 1]);
                    v = (1.0 - w) * values_[hi - 1] + w * values_[hi];
                }
                break;
            }
        }
        if (!std::isfinite(v))
            throw NumericalError("Schedule: non-finite value at t=" +
                                 std::to_string(t));
        return v;
    }

    Kind kind() const { return kind_; }
    double a() const { return a_; }
    double b() const { return b_; }
    double p() const { return p_; }
    const std::vector<double>& knot_times() const { return times_; }
    const std::vector<double>& knot_values() const { return values_; }

    bool operator==(const Schedule& o) const {
        return kind_ == o.kind_ && a_ == o.a_ && b_ == o.b_ && p_ == o.p_ &&
               times_ == o.times_ && values_ == o.values_;
    }

  private:
    Kind kind_;
    double a_ = 0.0;
    double b_ = 0.0;
    double p_ = 0.0;
    std::vector<double> times_;
    std::vector<double> values_;
};

}  // namespace ncsep
