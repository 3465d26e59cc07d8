#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/special_functions/expint.hpp>

#include "numeric.hpp"

namespace dixlab {

// f(u) = u^a exp(g L^beta) sum_j c_j L^{e_j},  L = log u,  u = e + t.
struct LogSeries {
	double a = 0, g = 0, beta = 1;
	std::vector<std::pair<double, double>> terms; // (coefficient, exponent)

	double operator()(double u) const
	{
		double L = std::log(u);
		double s = 0;
		for (auto [c, e] : terms)
			s += c * std::pow(L, e);
		double lead = a * L + (g != 0 ? g * std::pow(L, beta) : 0.0);
		return std::exp(lead) * s;
	}

	LogSeries derivative() const
	{
		LogSeries d{a - 1, g, beta, {}};
		auto add = [&](double c, double e) {
			if (c == 0)
				return;
			for (auto &t : d.terms)
				if (std::abs(t.second - e) < 1e-12) {
					t.first += c;
					return;
				}
			d.terms.emplace_back(c, e);
		};
		for (auto [c, e] : terms) {
			add(a * c, e);
			if (g != 0)
				add(g * beta * c, beta - 1 + e);
			add(e * c, e - 1);
		}
		return d;
	}
};

struct VaryingFunction {
	std::string key;
	double index = 0;
	int smooth_order = 8;
	bool decreasing = true;
	double c_phi = 0;

	std::function<double(double)> eval;
	std::function<double(int, double)> derivative;
	// Some antiderivative A of eval; primitive(t) = A(t) - A(0) + c_phi.
	std::function<double(double)> antiderivative;
	// Closed-form inverses when known, empty otherwise.
	std::function<double(double)> inverse_closed;
	std::function<double(double)> antiderivative_inverse;

	double operator()(double t) const { return eval(t); }
	double primitive(double t) const { return antiderivative(t) - antiderivative(0) + c_phi; }
	double natural_offset() const { return antiderivative(0); }

	double inverse(double s) const
	{
		if (!(s > 0))
			throw domain_error("inverse: argument must be positive");
		if (inverse_closed)
			return inverse_closed(s);
		double f0 = eval(0);
		if (decreasing) {
			if (s > f0)
				throw domain_error("inverse: " + std::to_string(s) + " above phi(0)");
			if (s == f0)
				return 0;
			double hi = 1;
			while (eval(hi) > s) {
				hi *= 4;
				if (hi > 1e300)
					throw domain_error("inverse: value below numeric range of " + key);
			}
			return bisect([&](double t) { return eval(t) - s; }, 0, hi);
		}
		if (s < f0)
			throw domain_error("inverse: " + std::to_string(s) + " below phi(0)");
		double hi = 1;
		while (eval(hi) < s) {
			hi *= 4;
			if (hi > 1e300)
				throw domain_error("inverse: value above numeric range of " + key);
		}
		return bisect([&](double t) { return eval(t) - s; }, 0, hi);
	}

	double primitive_inverse(double s) const
	{
		double target = s - c_phi + antiderivative(0);
		if (antiderivative_inverse)
			return antiderivative_inverse(target);
		if (s < c_phi)
			throw domain_error("primitive_inverse: below Phi(0)");
		double hi = 1;
		while (antiderivative(hi) < target) {
			hi *= 4;
			if (hi > 1e300)
				throw domain_error("primitive_inverse: out of range for " + key);
		}
		return bisect([&](double t) { return antiderivative(t) - target; }, 0, hi);
	}
};

inline VaryingFunction natural(VaryingFunction f)
{
	f.c_phi = f.natural_offset();
	return f;
}

namespace detail {

inline VaryingFunction from_series(std::string key, LogSeries s, double index)
{
	auto ders = std::make_shared<std::vector<LogSeries>>();
	ders->push_back(s);
	for (int i = 0; i < 8; ++i)
		ders->push_back(ders->back().derivative());
	VaryingFunction f;
	f.key = std::move(key);
	f.index = index;
	f.smooth_order = 8;
	f.eval = [ders](double t) { return (*ders)[0](e_const + t); };
	f.derivative = [ders](int k, double t) {
		if (k < 0 || k > 8)
			throw std::out_of_range("derivative order");
		return (*ders)[k](e_const + t);
	};
	return f;
}

// Numeric antiderivative from 0, cached-free but exact to quadrature tolerance.
inline std::function<double(double)> numeric_antiderivative(std::function<double(double)> eval)
{
	return [eval](double t) { return t <= 0 ? 0.0 : integrate(eval, 0, t, 1e-12); };
}

} // namespace detail

// phi_{m,k}(t) = (e+t)^m log^k(e+t)
inline VaryingFunction phi_family(double m, double k)
{
	std::ostringstream key;
	key << "phi:" << m << ":" << k;
	auto f = detail::from_series(key.str(), LogSeries{m, 0, 1, {{1.0, k}}}, m);
	f.decreasing = m < 0 || (m == 0 && k < 0);
	if (m == -1 && k != -1) {
		f.antiderivative = [k](double t) { return std::pow(std::log(e_const + t), k + 1) / (k + 1); };
		f.antiderivative_inverse = [k](double s) {
			if (!(s * (k + 1) > 0))
				throw domain_error("primitive_inverse: out of range");
			double L = std::pow((k + 1) * s, 1 / (k + 1));
			if (L < 1)
				throw domain_error("primitive_inverse: below Phi(0)");
			return std::exp(L) - e_const;
		};
	} else if (m == -1 && k == -1) {
		f.antiderivative = [](double t) { return std::log(std::log(e_const + t)); };
		f.antiderivative_inverse = [](double s) {
			double L = std::exp(s);
			if (L < 1)
				throw domain_error("primitive_inverse: below Phi(0)");
			return std::exp(L) - e_const;
		};
	} else if (k == 0) {
		f.antiderivative = [m](double t) { return std::pow(e_const + t, m + 1) / (m + 1); };
	} else if (m == 0 && k == -1) {
		f.antiderivative = [](double t) { return boost::math::expint(std::log(e_const + t)); };
	} else {
		f.antiderivative = detail::numeric_antiderivative(f.eval);
	}
	if (m == -1 && k == 0)
		f.inverse_closed = [](double s) {
			if (!(s > 0) || s > 1 / e_const)
				throw domain_error("inverse: outside (0, 1/e]");
			return 1 / s - e_const;
		};
	if (m == 0 && k == -1)
		f.inverse_closed = [](double s) {
			if (!(s > 0) || s > 1)
				throw domain_error("inverse: outside (0, 1]");
			return std::exp(1 / s) - e_const;
		};
	return f;
}

inline VaryingFunction invlog() { return phi_family(0, -1); }

// Phi'(t) for Phi(t) = exp(log^beta(e+t)), 0 < beta < 1.
inline VaryingFunction explogbeta(double beta)
{
	if (!(beta > 0 && beta < 1))
		throw std::invalid_argument("explogbeta: need 0 < beta < 1");
	std::ostringstream key;
	key << "explogbeta:" << beta;
	auto f = detail::from_series(key.str(), LogSeries{-1, 1, beta, {{beta, beta - 1}}}, -1);
	f.decreasing = true;
	f.antiderivative = [beta](double t) { return std::exp(std::pow(std::log(e_const + t), beta)); };
	f.antiderivative_inverse = [beta](double s) {
		if (!(s >= e_const))
			throw domain_error("primitive_inverse: below Phi(0)");
		return std::exp(std::pow(std::log(s), 1 / beta)) - e_const;
	};
	return f;
}

inline VaryingFunction constant_one()
{
	auto f = detail::from_series("const", LogSeries{0, 0, 1, {{1.0, 0.0}}}, 0);
	f.decreasing = false;
	f.antiderivative = [](double t) { return t; };
	f.antiderivative_inverse = [](double s) { return s; };
	f.inverse_closed = [](double s) -> double {
		if (s != 1)
			throw domain_error("inverse: constant function");
		return 0;
	};
	return f;
}

// Keys: "phi:m:k", "invlog", "explogbeta:b", "const".
inline VaryingFunction family(const std::string &key)
{
	auto parts = [&] {
		std::vector<std::string> p;
		std::stringstream ss(key);
		std::string item;
		while (std::getline(ss, item, ':'))
			p.push_back(item);
		return p;
	}();
	try {
		if (parts.size() == 3 && parts[0] == "phi")
			return phi_family(std::stod(parts[1]), std::stod(parts[2]));
		if (parts.size() == 1 && parts[0] == "invlog")
			return invlog();
		if (parts.size() == 2 && parts[0] == "explogbeta")
			return explogbeta(std::stod(parts[1]));
		if (parts.size() == 1 && parts[0] == "const")
			return constant_one();
	} catch (const std::logic_error &) {
	}
	throw std::invalid_argument("unknown family key: " + key);
}

struct DeviationRow {
	double t, lambda_or_n, value, target, deviation;
};

struct DeviationReport {
	std::vector<DeviationRow> rows;
	// per lambda (or order n): deviation at largest t divided by deviation at smallest t
	std::map<double, double> trend;
	bool shrinking = true;
	double max_deviation = 0;
};

namespace detail {
inline void finish_trend(DeviationReport &r)
{
	std::map<double, std::pair<double, double>> ends;
	std::map<double, std::pair<double, double>> tmin, tmax;
	for (auto &row : r.rows) {
		r.max_deviation = std::max(r.max_deviation, row.deviation);
		auto key = row.lambda_or_n;
		if (!tmin.count(key) || row.t < tmin[key].first)
			tmin[key] = {row.t, row.deviation};
		if (!tmax.count(key) || row.t > tmax[key].first)
			tmax[key] = {row.t, row.deviation};
	}
	for (auto &[key, lo] : tmin) {
		double hi = tmax[key].second;
		r.trend[key] = lo.second > 0 ? hi / lo.second : (hi > 0 ? INFINITY : 0.0);
		if (hi > lo.second || (hi == lo.second && hi > 0))
			r.shrinking = false;
	}
}
} // namespace detail

inline DeviationReport check_regular_variation(const VaryingFunction &f, double rho,
                                               const std::vector<double> &lambdas,
                                               const std::vector<double> &t_grid)
{
	if (!std::is_sorted(t_grid.begin(), t_grid.end()))
		throw std::invalid_argument("t_grid must be increasing");
	DeviationReport r;
	for (double lam : lambdas) {
		if (!(lam > 0))
			throw std::invalid_argument("lambda must be positive");
		for (double t : t_grid) {
			double lt = lam * t;
			if (!(lt < 1e300))
				throw domain_error("lambda*t outside numeric domain");
			double v = f(lt) / f(t);
			if (!std::isfinite(v))
				throw domain_error("non-finite ratio at t=" + std::to_string(t));
			double target = std::pow(lam, rho);
			r.rows.push_back({t, lam, v, target, std::abs(v - target)});
		}
	}
	detail::finish_trend(r);
	return r;
}

inline DeviationReport check_smooth_variation(const VaryingFunction &f, double rho, int K,
                                              const std::vector<double> &t_grid)
{
	if (K > f.smooth_order)
		throw std::invalid_argument("unsupported derivative order " + std::to_string(K));
	DeviationReport r;
	for (int n = 1; n <= K; ++n)
		for (double t : t_grid) {
			double v = std::pow(t, n) * f.derivative(n, t) / f(t);
			double target = falling_factorial(rho, n);
			r.rows.push_back({t, double(n), v, target, std::abs(v - target)});
		}
	detail::finish_trend(r);
	return r;
}

enum class Side { below, above, partial, tail };

struct LimitReport {
	std::vector<double> grid, values;
	double target = 0, estimate = 0, rel_error = 0;
	double extrapolated = 0, rel_error_extrapolated = 0;
	std::vector<double> correction; // fitted coefficients in the correction variable
	double deviation_slope = 0;     // slope of log|value-target| against log of the grid variable
};

namespace detail {
inline void finish_limit(LimitReport &r, const std::vector<double> &xs, int degree)
{
	r.estimate = r.values.back();
	double denom = r.target != 0 ? std::abs(r.target) : 1.0;
	r.rel_error = std::abs(r.estimate - r.target) / denom;
	std::size_t h = xs.size() / 2;
	std::vector<double> fx(xs.begin() + h, xs.end()), fy(r.values.begin() + h, r.values.end());
	auto fit = poly_fit(fx, fy, degree);
	r.extrapolated = fit.value();
	r.correction.assign(fit.coeffs.begin() + 1, fit.coeffs.end());
	r.rel_error_extrapolated = std::abs(r.extrapolated - r.target) / denom;
	std::vector<double> dev;
	for (double v : r.values)
		dev.push_back(std::abs(v - r.target));
	r.deviation_slope = tail_loglog_slope(r.grid, dev);
}
} // namespace detail

inline LimitReport karamata_integral_limit(const VaryingFunction &f, double alpha, double beta,
                                           Side side, const std::vector<double> &t_grid,
                                           int fit_degree = 2)
{
	if (!f.decreasing)
		throw std::invalid_argument("karamata: f must be decreasing with index -1");
	if (side == Side::below && alpha < beta - 1)
		throw std::invalid_argument("karamata below: need alpha >= beta - 1");
	if (side == Side::above && !(alpha < beta - 1))
		throw std::invalid_argument("karamata above: need alpha < beta - 1");
	if (side != Side::below && side != Side::above)
		throw std::invalid_argument("karamata integral: side must be below or above");
	if (t_grid.empty() || !std::is_sorted(t_grid.begin(), t_grid.end()))
		throw std::invalid_argument("t_grid must be increasing and nonempty");

	auto integrand = [&](double s) { return std::pow(s, alpha) * std::pow(f(s), beta); };
	LimitReport r;
	r.grid = t_grid;
	r.target = side == Side::below ? alpha - beta + 1 : -alpha + beta - 1;
	std::vector<double> I(t_grid.size());
	if (side == Side::below) {
		double acc = integrate(integrand, 0, t_grid[0], 1e-10);
		I[0] = acc;
		for (std::size_t i = 1; i < t_grid.size(); ++i) {
			acc += integrate(integrand, t_grid[i - 1], t_grid[i], 1e-10);
			I[i] = acc;
		}
	} else {
		double err = 0;
		double acc = integrate(integrand, t_grid.back(), INFINITY, 1e-10, &err);
		if (!std::isfinite(acc) || err > 1e-6 * std::abs(acc))
			throw domain_error("karamata above: tail integral does not converge");
		I.back() = acc;
		for (std::size_t i = t_grid.size() - 1; i-- > 0;) {
			acc += integrate(integrand, t_grid[i], t_grid[i + 1], 1e-10);
			I[i] = acc;
		}
	}
	std::vector<double> xs;
	for (std::size_t i = 0; i < t_grid.size(); ++i) {
		double t = t_grid[i];
		r.values.push_back(std::pow(t, alpha + 1) * std::pow(f(t), beta) / I[i]);
		xs.push_back(1 / std::log(e_const + t));
	}
	detail::finish_limit(r, xs, fit_degree);
	return r;
}

inline LimitReport karamata_dyadic_limit(const VaryingFunction &f, double alpha, double beta,
                                         Side side, int n_terms, int fit_degree = 2)
{
	if (alpha == beta)
		throw std::invalid_argument("karamata dyadic: need alpha != beta");
	if (side == Side::partial && !(alpha > beta))
		throw std::invalid_argument("karamata partial: need alpha > beta");
	if (side == Side::tail && !(alpha < beta))
		throw std::invalid_argument("karamata tail: need alpha < beta");
	if (n_terms < 4)
		throw std::invalid_argument("karamata dyadic: need at least 4 terms");
	double g = alpha - beta;
	LimitReport r;
	r.target = side == Side::partial ? std::pow(2, g) / (std::pow(2, g) - 1) : 1 / (1 - std::pow(2, g));
	auto logterm = [&](int k) { return k * alpha * std::log(2.0) + beta * std::log(f(std::ldexp(1.0, k))); };
	std::vector<double> xs;
	for (int n = n_terms / 2; n <= n_terms; ++n) {
		double base = logterm(n), s = 0;
		if (side == Side::partial) {
			for (int k = 0; k <= n; ++k)
				s += std::exp(logterm(k) - base);
		} else {
			for (int k = n;; ++k) {
				if (k > 1020)
					throw domain_error("karamata tail: overflow guard reached");
				double term = std::exp(logterm(k) - base);
				s += term;
				if (term < 1e-14 * s)
					break;
			}
		}
		r.grid.push_back(n);
		r.values.push_back(s);
		xs.push_back(1.0 / n);
	}
	detail::finish_limit(r, xs, fit_degree);
	return r;
}

struct PropertyW {
	std::vector<double> t, ratio;
	double C1 = 0, C2 = 0; // inf and sup of the ratio over the tail
	double drift = 0;      // slope of log ratio against log log t over the tail
	bool w1 = false, w2 = false;
};

inline PropertyW check_property_w(const VaryingFunction &f, const std::vector<double> &t_grid,
                                  double drift_threshold = 0.25)
{
	if (!f.decreasing)
		throw std::invalid_argument("property W: f must be decreasing");
	PropertyW w;
	for (double t : t_grid) {
		if (1 / t > f(0))
			throw domain_error("property W: 1/t outside the range of phi at t=" + std::to_string(t));
		w.t.push_back(t);
		w.ratio.push_back(f.inverse(1 / t) / (t * t * f(t)));
	}
	std::size_t h = w.t.size() / 2;
	std::vector<double> x, y;
	w.C1 = INFINITY;
	w.C2 = 0;
	for (std::size_t i = h; i < w.t.size(); ++i) {
		x.push_back(std::log(std::log(w.t[i])));
		y.push_back(std::log(w.ratio[i]));
		w.C1 = std::min(w.C1, w.ratio[i]);
		w.C2 = std::max(w.C2, w.ratio[i]);
	}
	w.drift = x.size() >= 2 ? poly_fit(x, y, 1).coeffs[1] : 0.0;
	double last = y.empty() ? 0.0 : y.back();
	w.w2 = !(w.drift > drift_threshold && last > 0);
	w.w1 = !(w.drift < -drift_threshold && last < 0);
	return w;
}

struct GapGrowth {
	std::vector<double> t, gap;
	double slope = 0;
};

inline GapGrowth gap_growth(const VaryingFunction &f, const std::vector<double> &t_grid)
{
	GapGrowth g;
	double P0 = f.primitive(0);
	for (double t : t_grid) {
		double P = f.primitive(t);
		if (!(P > 1 + P0))
			continue;
		double back = f.primitive_inverse(P - 1);
		g.t.push_back(t);
		g.gap.push_back(t - back);
	}
	if (g.t.size() >= 2) {
		std::vector<double> lx, ly;
		for (std::size_t i = 0; i < g.t.size(); ++i) {
			lx.push_back(std::log(g.t[i]));
			ly.push_back(std::log(g.gap[i]));
		}
		g.slope = poly_fit(lx, ly, 1).coeffs[1];
	}
	return g;
}

} // namespace dixlab
