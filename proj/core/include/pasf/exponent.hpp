#pragma once

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>

namespace pasf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Norm exponent in [1, inf]. The infinite value only arises as the conjugate
// of 1; all user-facing exponents are finite.
class Exponent {
public:
    Exponent() : value_(2.0) {}
    Exponent(double v) : value_(v) {
        if (!(v >= 1.0))
            throw std::invalid_argument("Exponent: value must be >= 1");
    }

    static Exponent infinity() {
        Exponent e;
        e.value_ = std::numeric_limits<double>::infinity();
        return e;
    }

    double value() const { return value_; }
    bool is_inf() const { return std::isinf(value_); }
    bool is_one() const { return value_ == 1.0; }
    bool is_two() const { return value_ == 2.0; }

    friend bool operator==(const Exponent& a, const Exponent& b) {
        return a.value_ == b.value_;
    }

private:
    double value_;
};

// Conjugate exponent q with 1/p + 1/q = 1.  dual(1) = inf, dual(inf) = 1.
Exponent dual_exponent(Exponent e);

// (sum_i |v_i|^e)^(1/e); max |v_i| for e = inf.  Scaled to avoid overflow on
// extreme inputs.
double p_norm(const Vec& v, Exponent e);

// p_norm of a matrix row without copying it out.
double row_p_norm(const Mat& a, Eigen::Index i, Exponent e);
double col_p_norm(const Mat& a, Eigen::Index j, Exponent e);

}  // namespace pasf
