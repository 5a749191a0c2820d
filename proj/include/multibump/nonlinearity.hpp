#pragma once

#include <cmath>

#include "multibump/common.hpp"
#include "multibump/operators.hpp"

namespace multibump {

/// Odd superlinear source term. Either a single power |u|^(p-1) u or the sum
/// of two such powers with a positive weight on the higher one.
class Nonlinearity {
  public:
    static Nonlinearity pure_power(double p = 3.0) {
        if (!std::isfinite(p) || p <= 1.0)
            throw UnsupportedNonlinearity("nonlinearity: exponent must exceed 1");
        Nonlinearity n;
        n.p1_ = n.p2_ = p;
        n.b_ = 0.0;
        return n;
    }

    static Nonlinearity two_power(double p1, double p2, double b) {
        if (!std::isfinite(p1) || p1 <= 1.0)
            throw UnsupportedNonlinearity("nonlinearity: first exponent must exceed 1");
        if (!std::isfinite(p2) || p2 <= p1)
            throw UnsupportedNonlinearity(
                "nonlinearity: second exponent must exceed the first");
        if (!std::isfinite(b) || b < 0.0)
            throw UnsupportedNonlinearity("nonlinearity: mixing weight must be nonnegative");
        Nonlinearity n;
        n.p1_ = p1;
        n.p2_ = p2;
        n.b_ = b;
        return n;
    }

    double f(double u) const {
        double v = sgnpow(u, p1_);
        if (b_ != 0.0) v += b_ * sgnpow(u, p2_);
        return v;
    }
    double df(double u) const {
        double v = p1_ * std::pow(std::abs(u), p1_ - 1.0);
        if (b_ != 0.0) v += b_ * p2_ * std::pow(std::abs(u), p2_ - 1.0);
        return v;
    }
    double F(double u) const {
        double v = std::pow(std::abs(u), p1_ + 1.0) / (p1_ + 1.0);
        if (b_ != 0.0) v += b_ * std::pow(std::abs(u), p2_ + 1.0) / (p2_ + 1.0);
        return v;
    }

    Vec f(const Vec& u) const { return map(u, [this](double x) { return f(x); }); }
    Vec df(const Vec& u) const { return map(u, [this](double x) { return df(x); }); }
    Vec F(const Vec& u) const { return map(u, [this](double x) { return F(x); }); }

    double p() const { return p1_; }
    double p2() const { return p2_; }
    double weight() const { return b_; }
    /// Hoelder exponent of f' at the origin, capped at 1.
    double alpha() const { return std::min(1.0, p1_ - 1.0); }

  private:
    static double sgnpow(double u, double p) {
        if (u == 0.0) return 0.0;
        return std::copysign(std::pow(std::abs(u), p), u);
    }
    template <class Fn>
    static Vec map(const Vec& u, Fn&& fn) {
        Vec v(u.size());
        for (int i = 0; i < u.size(); ++i) v[i] = fn(u[i]);
        return v;
    }

    double p1_ = 3.0, p2_ = 3.0, b_ = 0.0;
};

}  // namespace multibump
