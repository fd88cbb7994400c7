#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "fracpath/path.hpp"

// Numerical fractional calculus on uniform grids: Riemann-Liouville integrals,
// Weyl fractional derivatives, fractional Besov-type norms, the generalized
// Lebesgue-Stieltjes (GLS) integral and its norm bound. All quadrature is
// product integration against the piecewise-linear interpolant: singular
// kernels x^{-b}, (x-y)^{-1-b} are integrated in closed form on each cell, so
// refinement behavior is clean and every operator is exactly linear in f.

namespace fracpath::fraccalc {

struct FracParams {
    double beta = 0.4;              // fractional order, in (0,1)
    std::size_t grid_points = 1024; // default resolution when building grids; >= 2
};

// Samples on a uniform grid over [0,T]; interpreted piecewise-linearly.
struct GridFn {
    std::vector<double> times;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double horizon() const { return times.back(); }
};

struct BesovReport {
    double beta = 0.0;
    double norm_w1 = 0.0;
    double norm_w2 = 0.0;
    std::size_t grid_points = 0;
};

struct BoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = true;
};

void validate(const FracParams& p);
void validate_grid(const GridFn& f);

GridFn make_gridfn(double horizon, std::size_t cells, const std::function<double(double)>& fn);
GridFn to_gridfn(const SampledPath& p);

// (I^b_{0+} f)(s) = (1/Gamma(b)) * integral_0^s f(u) (s-u)^{b-1} du, at every grid point
GridFn rl_integral_left(const GridFn& f, const FracParams& params);

// (I^b_{t-} f)(s) = (1/Gamma(b)) * integral_s^t f(u) (u-s)^{b-1} du on [0,t];
// t must coincide with a grid point
GridFn rl_integral_right(const GridFn& f, const FracParams& params, double t);

// (D^b_{0+} f)(x) = (1/Gamma(1-b)) ( f(x)/x^b + b * integral_0^x (f(x)-f(y))/(x-y)^{b+1} dy );
// undefined at x = 0 (slot holds 0 when f(0)=0, NaN otherwise)
GridFn weyl_deriv_left(const GridFn& f, const FracParams& params);

// (D^b_{t-} g)(x) = (1/Gamma(1-b)) ( g(x)/(t-x)^b + b * integral_x^t (g(x)-g(y))/(y-x)^{b+1} dy )
GridFn weyl_deriv_right(const GridFn& g, const FracParams& params, double t);

// ||f||_{1,b} = sup_{0<=s<t<=T} [ |f(t)-f(s)|/(t-s)^b + integral_s^t |f(u)-f(s)|/(u-s)^{1+b} du ]
double besov_norm_w1(const GridFn& f, const FracParams& params);

// ||f||_{2,b} = integral_0^T |f(s)|/s^b ds
//             + integral_0^T integral_0^s |f(s)-f(u)|/(s-u)^{1+b} du ds
double besov_norm_w2(const GridFn& f, const FracParams& params);

BesovReport besov_report(const GridFn& f, const FracParams& params);

// integral_0^t f dg := integral_0^t (D^b_{0+}f)(x) * (D^{1-b}_{t-} g_hat)(x) dx
// with g_hat(x) = g(t) - g(x), so that the integral of 1 dg equals g(t)-g(0)
double gls_integral(const GridFn& f, const GridFn& g, const FracParams& params, double t);

// |integral f dg| <= (1/Gamma(b)) ||f||_{2,b} ||g||_{1,1-b}
BoundCheck gls_bound_check(const GridFn& f, const GridFn& g, const FracParams& params, double t);

} // namespace fracpath::fraccalc
