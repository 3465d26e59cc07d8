#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace dixlab {

inline constexpr double e_const = std::numbers::e;
inline constexpr double pi = std::numbers::pi;

struct domain_error : std::domain_error {
	using std::domain_error::domain_error;
};

// Log-spaced grid on [lo, hi], at most per_decade points per decade.
inline std::vector<double> log_grid(double lo, double hi, int per_decade = 40)
{
	if (!(lo > 0) || !(hi >= lo))
		throw std::invalid_argument("log_grid: need 0 < lo <= hi");
	per_decade = std::clamp(per_decade, 1, 40);
	double decades = std::log10(hi / lo);
	int n = std::max(2, int(std::ceil(decades * per_decade)) + 1);
	if (hi == lo)
		return {lo};
	std::vector<double> g(n);
	for (int i = 0; i < n; ++i)
		g[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
	g.back() = hi;
	return g;
}

// Least-squares polynomial in x; coeffs[0] is the value at x = 0.
struct PolyFit {
	std::vector<double> coeffs;
	double at(double x) const
	{
		double r = 0;
		for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
			r = r * x + *it;
		return r;
	}
	double value() const { return coeffs.empty() ? 0.0 : coeffs[0]; }
};

inline PolyFit poly_fit(const std::vector<double> &x, const std::vector<double> &y,
                        int degree, const std::vector<double> &w = {})
{
	std::size_t n = x.size();
	if (n != y.size() || n == 0)
		throw std::invalid_argument("poly_fit: size mismatch");
	degree = std::min<int>(degree, int(n) - 1);
	Eigen::MatrixXd A(n, degree + 1);
	Eigen::VectorXd b(n);
	for (std::size_t i = 0; i < n; ++i) {
		double sw = w.empty() ? 1.0 : std::sqrt(w[i]);
		double p = 1;
		for (int j = 0; j <= degree; ++j, p *= x[i])
			A(i, j) = p * sw;
		b(i) = y[i] * sw;
	}
	Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
	return {std::vector<double>(c.data(), c.data() + c.size())};
}

// Slope of log y against log x over the last half of the points.
inline double tail_loglog_slope(const std::vector<double> &x, const std::vector<double> &y)
{
	std::size_t h = x.size() / 2;
	std::vector<double> lx, ly;
	for (std::size_t i = h; i < x.size(); ++i) {
		if (!(y[i] > 0) || !std::isfinite(y[i]))
			continue;
		lx.push_back(std::log(x[i]));
		ly.push_back(std::log(y[i]));
	}
	if (lx.size() < 2)
		return 0.0;
	return poly_fit(lx, ly, 1).coeffs[1];
}

// Integral over [a, b] with 0 <= a < b <= inf. Pieces beyond 1 are done in log variables.
inline double integrate(const std::function<double(double)> &f, double a, double b,
                        double rel_tol = 1e-10, double *err_out = nullptr)
{
	using boost::math::quadrature::gauss_kronrod;
	if (a == b)
		return 0.0;
	double total = 0, err = 0;
	if (a < 1) {
		double hi = std::min(b, 1.0);
		double e1 = 0;
		total += gauss_kronrod<double, 61>::integrate(f, a, hi, 15, rel_tol, &e1);
		err += e1;
		a = hi;
	}
	if (b > a) {
		auto g = [&](double x) {
			double s = std::exp(x);
			if (!std::isfinite(s))
				return 0.0;
			double v = f(s) * s;
			return std::isfinite(v) ? v : 0.0;
		};
		double la = std::log(a);
		if (std::isinf(b)) {
			boost::math::quadrature::exp_sinh<double> es;
			double e2 = 0;
			total += es.integrate([&](double u) { return g(la + u); }, rel_tol, &e2);
			err += e2 * std::abs(total);
		} else {
			double lb = std::log(b);
			int pieces = std::max(1, int(std::ceil((lb - la) / 4.0)));
			for (int i = 0; i < pieces; ++i) {
				double x0 = la + (lb - la) * i / pieces, x1 = la + (lb - la) * (i + 1) / pieces;
				double e2 = 0;
				total += gauss_kronrod<double, 61>::integrate(g, x0, x1, 15, rel_tol, &e2);
				err += e2;
			}
		}
	}
	if (err_out)
		*err_out = err;
	return total;
}

// Root of a monotone function on [lo, hi] by bisection to relative width rel.
inline double bisect(const std::function<double(double)> &g, double lo, double hi,
                     double rel = 1e-12)
{
	double glo = g(lo), ghi = g(hi);
	if (glo == 0)
		return lo;
	if (ghi == 0)
		return hi;
	if ((glo > 0) == (ghi > 0))
		throw domain_error("bisect: no sign change on [" + std::to_string(lo) + ", " +
		                   std::to_string(hi) + "]");
	for (int it = 0; it < 4000 && hi - lo > rel * std::max(std::abs(hi), 1e-300); ++it) {
		double mid = (lo > 0 && hi / lo > 4) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
		double gm = g(mid);
		if (gm == 0)
			return mid;
		if ((gm > 0) == (glo > 0)) {
			lo = mid;
			glo = gm;
		} else {
			hi = mid;
		}
	}
	return 0.5 * (lo + hi);
}

inline double falling_factorial(double rho, int n)
{
	double r = 1;
	for (int j = 0; j < n; ++j)
		r *= rho - j;
	return r;
}

} // namespace dixlab
