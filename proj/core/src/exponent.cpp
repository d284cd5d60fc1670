#include "pasf/exponent.hpp"

#include <cmath>

namespace pasf {

Exponent dual_exponent(Exponent e) {
    if (e.is_one()) return Exponent::infinity();
    if (e.is_inf()) return Exponent(1.0);
    const double p = e.value();
    return Exponent(p / (p - 1.0));
}

namespace {

// scale-invariant evaluation: pull out the max to keep powers in range
template <typename Expr>
double p_norm_expr(const Expr& v, Exponent e) {
    const Eigen::Index n = v.size();
    if (n == 0) return 0.0;
    const double m = v.cwiseAbs().maxCoeff();
    if (m == 0.0 || e.is_inf()) return m;
    const double p = e.value();
    if (p == 1.0) return v.cwiseAbs().sum();
    if (p == 2.0) return v.norm();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        acc += std::pow(std::abs(v[i]) / m, p);
    return m * std::pow(acc, 1.0 / p);
}

}  // namespace

double p_norm(const Vec& v, Exponent e) { return p_norm_expr(v, e); }

double row_p_norm(const Mat& a, Eigen::Index i, Exponent e) {
    return p_norm_expr(Vec(a.row(i).transpose()), e);
}

double col_p_norm(const Mat& a, Eigen::Index j, Exponent e) {
    return p_norm_expr(Vec(a.col(j)), e);
}

}  // namespace pasf
