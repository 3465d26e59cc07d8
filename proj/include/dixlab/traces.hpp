#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/factorials.hpp>

#include "regvar.hpp"

namespace dixlab {

struct TraceEstimate {
	// sampled view of c_n, at most 40 points per decade plus the last index
	std::vector<double> n, c;
	std::size_t window_begin = 0, window_end = 0; // index range [begin, end]
	double liminf = 0, limsup = 0, cesaro = 0;
	double tol = 0.02;
	// c_n ~ limit + coefficient / log(e+n+1) fitted over the window
	double limit = 0, coefficient = 0;
	double residual_spread = 0;
	bool converged = false;
};

// Phi_k(t) = log^{k+1}(e+t)/(k+1)
inline VaryingFunction log_normalizer(int k) { return natural(phi_family(-1, k)); }

// Partial sums S at increasing indices idx (c = S / Phi(idx+1)).
inline TraceEstimate estimate_from_partial_sums(const std::vector<double> &idx,
                                                const std::vector<double> &partial,
                                                const VaryingFunction &f, double tol = 0.02)
{
	if (idx.empty() || idx.size() != partial.size())
		throw std::invalid_argument("trace estimate: empty or mismatched sequence");
	std::size_t L = idx.size();
	std::vector<double> c(L);
	for (std::size_t i = 0; i < L; ++i)
		c[i] = partial[i] / f.primitive(idx[i] + 1);

	TraceEstimate r;
	r.tol = tol;
	double top = idx.back() + 1;
	double lo = std::sqrt(top);
	std::size_t b = 0;
	while (b + 1 < L && idx[b] + 1 < lo)
		++b;
	r.window_begin = std::size_t(idx[b]);
	r.window_end = std::size_t(idx.back());

	std::vector<double> w(L - b), x(L - b), y(L - b);
	for (std::size_t i = b; i < L; ++i) {
		double left = std::log(idx[i > b ? i - 1 : i] + 1), right = std::log(idx[i + 1 < L ? i + 1 : i] + 1);
		double wi = 0.5 * (right - left);
		if (L - b == 1)
			wi = 1;
		w[i - b] = wi;
		x[i - b] = 1 / std::log(e_const + idx[i] + 1);
		y[i - b] = c[i];
	}
	double ws = 0, acc = 0;
	r.liminf = INFINITY;
	r.limsup = -INFINITY;
	for (std::size_t i = 0; i < w.size(); ++i) {
		ws += w[i];
		acc += w[i] * y[i];
		r.liminf = std::min(r.liminf, y[i]);
		r.limsup = std::max(r.limsup, y[i]);
	}
	r.cesaro = ws > 0 ? acc / ws : y.back();

	// fit on a log-sampled subset to keep the cost independent of L
	std::vector<double> fx, fy, fw;
	double last_log = -INFINITY;
	for (std::size_t i = 0; i < x.size(); ++i) {
		double ln = std::log10(idx[b + i] + 1);
		if (ln - last_log >= 1.0 / 200 || i + 1 == x.size()) {
			fx.push_back(x[i]);
			fy.push_back(y[i]);
			fw.push_back(1.0);
			last_log = ln;
		}
	}
	if (fx.size() >= 3) {
		auto fit = poly_fit(fx, fy, 1, fw);
		r.limit = fit.coeffs[0];
		r.coefficient = fit.coeffs[1];
	} else {
		r.limit = r.cesaro;
		r.coefficient = 0;
	}
	double dmin = INFINITY, dmax = -INFINITY;
	for (std::size_t i = 0; i < x.size(); ++i) {
		double d = y[i] - r.coefficient * x[i];
		dmin = std::min(dmin, d);
		dmax = std::max(dmax, d);
	}
	r.residual_spread = dmax - dmin;
	r.converged = r.residual_spread <= tol * std::max(1.0, std::abs(r.limit));

	double last_sample = -INFINITY;
	for (std::size_t i = 0; i < L; ++i) {
		double ln = std::log10(idx[i] + 1);
		if (ln - last_sample >= 1.0 / 40 || i + 1 == L) {
			r.n.push_back(idx[i]);
			r.c.push_back(c[i]);
			last_sample = ln;
		}
	}
	return r;
}

// c_n = (1/Phi(n+1)) sum_{k<=n} seq[k], order as given.
inline TraceEstimate dixmier_sequence(const std::vector<double> &seq, const VaryingFunction &f,
                                      double tol = 0.02)
{
	if (seq.empty())
		throw std::invalid_argument("dixmier_sequence: empty sequence");
	std::vector<double> idx(seq.size()), S(seq.size());
	double s = 0;
	for (std::size_t i = 0; i < seq.size(); ++i) {
		s += seq[i];
		S[i] = s;
		idx[i] = double(i);
	}
	return estimate_from_partial_sums(idx, S, f, tol);
}

// Self-adjoint input: positive and negative parts each sorted by magnitude,
// c_n = (S+_n - S-_n) / Phi(n+1).
inline TraceEstimate dixmier_selfadjoint(const std::vector<double> &eigenvalues,
                                         const VaryingFunction &f, double tol = 0.02)
{
	std::vector<double> pos, neg;
	for (double v : eigenvalues)
		(v >= 0 ? pos : neg).push_back(std::abs(v));
	std::sort(pos.begin(), pos.end(), std::greater<>());
	std::sort(neg.begin(), neg.end(), std::greater<>());
	std::size_t L = std::max(pos.size(), neg.size());
	if (L == 0)
		throw std::invalid_argument("dixmier_selfadjoint: empty sequence");
	std::vector<double> idx(L), S(L);
	double s = 0;
	for (std::size_t i = 0; i < L; ++i) {
		if (i < pos.size())
			s += pos[i];
		if (i < neg.size())
			s -= neg[i];
		S[i] = s;
		idx[i] = double(i);
	}
	return estimate_from_partial_sums(idx, S, f, tol);
}

// lambda(t) for real index t >= stored length, used to complete sums.
using AnalyticTail = std::function<double(double)>;

namespace detail {

inline double power_sum(const std::vector<double> &seq, double s, const AnalyticTail *tail)
{
	double sum = 0;
	for (double v : seq) {
		if (v < 0)
			throw std::invalid_argument("power sum: negative entry");
		if (v > 0)
			sum += std::pow(v, s);
	}
	if (tail && *tail) {
		double a = double(seq.size()) - 0.5;
		auto g = [&](double t) { return std::pow((*tail)(t), s); };
		double I = integrate([&](double u) { return g(a + u); }, 0, INFINITY, 1e-12);
		double h = std::max(1e-3, 1e-4 * a);
		double fprime = (g(a + h) - g(a - h)) / (2 * h);
		sum += I - fprime / 24;
	} else if (!seq.empty()) {
		double last = seq.back() > 0 ? std::pow(seq.back(), s) : 0.0;
		if (last > 1e-14 * sum)
			throw domain_error("non-summable tail at exponent " + std::to_string(s));
	}
	return sum;
}

} // namespace detail

// Tr(G^{1+1/log n}) / ((k+1)! Phi_k(n)) on the grid.
inline std::vector<double> zeta_estimate(const std::vector<double> &seq, int k,
                                         const std::vector<double> &n_grid,
                                         const AnalyticTail &tail = {})
{
	if (k < 0)
		throw std::invalid_argument("zeta_estimate: k must be >= 0");
	auto Phi = log_normalizer(k);
	std::vector<double> out;
	for (double n : n_grid) {
		if (!(n > 1))
			throw std::invalid_argument("zeta_estimate: grid points must exceed 1");
		double s = 1 + 1 / std::log(n);
		double tr = detail::power_sum(seq, s, tail ? &tail : nullptr);
		out.push_back(tr / (boost::math::factorial<double>(k + 1) * Phi.primitive(n)));
	}
	return out;
}

struct ZetaLimit {
	std::vector<double> s, values;
	std::vector<double> benchmark; // filled for the log(n)/n family
	std::vector<double> raw_sums;
	bool truncated = false;
};

// (s-1)^{k+1} sum_n lambda_n^s
inline ZetaLimit zeta_power_limit(const std::vector<double> &seq, int k, const std::vector<double> &s_grid,
                                  const AnalyticTail &tail = {})
{
	ZetaLimit z;
	for (double s : s_grid) {
		if (!(s > 1))
			throw std::invalid_argument("zeta_power_limit: s must exceed 1");
		double sum = 0;
		if (tail) {
			sum = detail::power_sum(seq, s, &tail);
		} else {
			for (double v : seq)
				sum += v > 0 ? std::pow(v, s) : 0.0;
			z.truncated = true;
		}
		z.s.push_back(s);
		z.raw_sums.push_back(sum);
		z.values.push_back(std::pow(s - 1, k + 1) * sum);
	}
	return z;
}

// lambda_n = log(n)/n for n = 1..M, index j holds n = j+1
struct LogLinFamily {
	std::vector<double> seq;
	AnalyticTail tail;
	static double benchmark(double s) { return std::pow(s - 1, -s - 1) * std::tgamma(1 + s); }
};

inline LogLinFamily loglin_family(std::size_t M)
{
	LogLinFamily f;
	f.seq.resize(M);
	for (std::size_t j = 0; j < M; ++j)
		f.seq[j] = std::log(double(j + 1)) / double(j + 1);
	f.tail = [](double t) { return std::log(t + 1) / (t + 1); };
	return f;
}

inline ZetaLimit zeta_loglin(const std::vector<double> &s_grid, std::size_t M = 1000000, int k = 1)
{
	auto fam = loglin_family(M);
	auto z = zeta_power_limit(fam.seq, k, s_grid, fam.tail);
	for (double s : z.s)
		z.benchmark.push_back(LogLinFamily::benchmark(s));
	return z;
}

} // namespace dixlab
