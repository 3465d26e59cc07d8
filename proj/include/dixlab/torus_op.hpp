#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <fftw3.h>

#include "linalg.hpp"
#include "numeric.hpp"
#include "regvar.hpp"

namespace dixlab {

using cplx = std::complex<double>;
using Freq = std::array<int, 2>;
using Point = std::array<double, 2>;

inline double bracket(double r2) { return std::sqrt(1 + r2); }

// Symbol p(x, xi) on T^d x R^d, x in [0, 2pi)^d, torus measure normalized to 1.
struct Symbol {
	int d = 1;
	std::string name;
	std::function<cplx(const Point &, const Point &)> eval;
	// closed-form x-Fourier coefficients; zero for max|m_i| > band when band >= 0
	std::function<cplx(const Freq &, const Point &)> coeff;
	int band = -1;
	int depth = 8;
	bool x_independent = false;

	std::size_t grid_size() const { return std::size_t(2 * depth + 1); }

	// all coefficients for |m_i| <= depth, lex order in m, by FFT over the (2M+1)^d grid
	std::vector<cplx> modes(const Point &xi) const
	{
		if (!eval)
			throw std::logic_error("symbol " + name + " has no evaluator");
		int n = int(grid_size());
		std::size_t total = d == 1 ? std::size_t(n) : std::size_t(n) * n;
		std::vector<cplx> in(total), out(total);
		for (int a = 0; a < n; ++a) {
			double xa = 2 * pi * a / n;
			if (d == 1) {
				in[a] = eval({xa, 0}, xi);
			} else {
				for (int b = 0; b < n; ++b)
					in[std::size_t(a) * n + b] = eval({xa, 2 * pi * b / n}, xi);
			}
		}
		fftw_plan plan = d == 1
		    ? fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex *>(in.data()),
		                       reinterpret_cast<fftw_complex *>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE)
		    : fftw_plan_dft_2d(n, n, reinterpret_cast<fftw_complex *>(in.data()),
		                       reinterpret_cast<fftw_complex *>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
		fftw_execute(plan);
		fftw_destroy_plan(plan);
		std::vector<cplx> res(total);
		auto wrap = [n](int m) { return m < 0 ? m + n : m; };
		for (int a = -depth; a <= depth; ++a) {
			if (d == 1) {
				res[a + depth] = out[wrap(a)] / double(n);
			} else {
				for (int b = -depth; b <= depth; ++b)
					res[std::size_t(a + depth) * n + (b + depth)] =
					    out[std::size_t(wrap(a)) * n + wrap(b)] / double(total);
			}
		}
		return res;
	}

	cplx mode(const Freq &m, const Point &xi) const
	{
		if (coeff) {
			if (band >= 0 && (std::abs(m[0]) > band || std::abs(m[1]) > band))
				return 0.0;
			return coeff(m, xi);
		}
		if (x_independent)
			return (m[0] == 0 && m[1] == 0) ? eval({0, 0}, xi) : cplx(0);
		if (std::abs(m[0]) > depth || std::abs(m[1]) > depth)
			return 0.0;
		auto all = modes(xi);
		std::size_t n = grid_size();
		return d == 1 ? all[m[0] + depth] : all[std::size_t(m[0] + depth) * n + (m[1] + depth)];
	}

	// |p_M(xi)| > 1e-10 |p_0(xi)|: too rough in x for the chosen depth
	bool decay_flag(const Point &xi) const
	{
		if (coeff || x_independent)
			return false;
		auto all = modes(xi);
		std::size_t n = grid_size();
		double top = 0;
		double zero = std::abs(d == 1 ? all[depth] : all[std::size_t(depth) * n + depth]);
		for (int a = -depth; a <= depth; ++a)
			for (int b = (d == 1 ? 0 : -depth); b <= (d == 1 ? 0 : depth); ++b) {
				if (std::max(std::abs(a), std::abs(b)) != depth)
					continue;
				cplx v = d == 1 ? all[a + depth] : all[std::size_t(a + depth) * n + (b + depth)];
				top = std::max(top, std::abs(v));
			}
		return top > 1e-10 * zero;
	}

	cplx operator()(const Point &x, const Point &xi) const
	{
		if (eval)
			return eval(x, xi);
		cplx s = 0;
		int B = band;
		for (int a = -B; a <= B; ++a)
			for (int b = (d == 1 ? 0 : -B); b <= (d == 1 ? 0 : B); ++b)
				s += coeff({a, b}, xi) * std::exp(cplx(0, a * x[0] + b * x[1]));
		return s;
	}
};

inline double norm2(const Point &xi) { return xi[0] * xi[0] + xi[1] * xi[1]; }

// x-independent multiplier h(xi)
inline Symbol multiplier(int d, std::function<cplx(const Point &)> h, std::string name = "multiplier")
{
	Symbol s;
	s.d = d;
	s.name = std::move(name);
	s.x_independent = true;
	s.band = 0;
	s.eval = [h](const Point &, const Point &xi) { return h(xi); };
	s.coeff = [h](const Freq &m, const Point &xi) { return (m[0] == 0 && m[1] == 0) ? h(xi) : cplx(0); };
	return s;
}

// sum_m c_m e^{i m x} h(xi)
inline Symbol separable(int d, std::vector<std::pair<Freq, cplx>> x_modes,
                        std::function<cplx(const Point &)> h, std::string name = "separable")
{
	Symbol s;
	s.d = d;
	s.name = std::move(name);
	int B = 0;
	auto table = std::make_shared<std::map<Freq, cplx>>();
	for (auto &[m, c] : x_modes) {
		(*table)[m] += c;
		B = std::max({B, std::abs(m[0]), std::abs(m[1])});
	}
	s.band = B;
	s.x_independent = table->size() == 1 && table->begin()->first == Freq{0, 0};
	s.coeff = [table, h](const Freq &m, const Point &xi) {
		auto it = table->find(m);
		return it == table->end() ? cplx(0) : it->second * h(xi);
	};
	s.eval = [table, h](const Point &x, const Point &xi) {
		cplx g = 0;
		for (auto &[m, c] : *table)
			g += c * std::exp(cplx(0, m[0] * x[0] + m[1] * x[1]));
		return g * h(xi);
	};
	return s;
}

inline Symbol from_evaluator(int d, std::function<cplx(const Point &, const Point &)> f, int depth,
                             std::string name = "evaluator")
{
	Symbol s;
	s.d = d;
	s.name = std::move(name);
	s.eval = std::move(f);
	s.depth = depth;
	return s;
}

// a*p + b*q; closed-form coefficients are kept when both have them
inline Symbol combine(const Symbol &p, cplx a, const Symbol &q, cplx b)
{
	if (p.d != q.d)
		throw std::invalid_argument("combine: dimension mismatch");
	Symbol s;
	s.d = p.d;
	s.name = "combination";
	s.x_independent = p.x_independent && q.x_independent;
	s.depth = std::max(p.depth, q.depth);
	if ((p.coeff || p.x_independent) && (q.coeff || q.x_independent)) {
		s.band = (p.band >= 0 && q.band >= 0) ? std::max(p.band, q.band) : -1;
		s.coeff = [p, q, a, b](const Freq &m, const Point &xi) { return a * p.mode(m, xi) + b * q.mode(m, xi); };
	}
	s.eval = [p, q, a, b](const Point &x, const Point &xi) { return a * p(x, xi) + b * q(x, xi); };
	return s;
}

enum class Region { angle, ball };

// k in Z^d with <k>^d <= N (angle) or |k|^d <= N (ball), lexicographic
inline std::vector<Freq> lattice(int d, double N, Region region = Region::angle)
{
	if (d != 1 && d != 2)
		throw std::invalid_argument("lattice: d must be 1 or 2");
	std::vector<Freq> pts;
	if (!(N > 0))
		return pts;
	double lim = std::pow(N, 2.0 / d) * (1 + 1e-13) - (region == Region::angle ? 1.0 : 0.0);
	if (lim < 0)
		return pts;
	int R = int(std::floor(std::sqrt(lim)));
	for (int a = -R; a <= R; ++a) {
		if (d == 1) {
			pts.push_back({a, 0});
			continue;
		}
		for (int b = -R; b <= R; ++b)
			if (double(a) * a + double(b) * b <= lim)
				pts.push_back({a, b});
	}
	return pts;
}

inline std::size_t lattice_count(int d, double N, Region region = Region::angle)
{
	return lattice(d, N, region).size();
}

struct TruncatedOperator {
	int d = 1;
	double N = 0;
	std::vector<Freq> points;
	Eigen::MatrixXcd matrix;
	std::string symbol_ref;
};

inline constexpr double default_memory_cap = 8.0 * 1024 * 1024 * 1024;

namespace detail {
inline void check_depth(const Symbol &p, const std::vector<Freq> &pts)
{
	int R = 0;
	for (auto &k : pts)
		R = std::max({R, std::abs(k[0]), std::abs(k[1])});
	bool closed = p.x_independent || (p.coeff && p.band >= 0);
	if (!closed && p.depth < 2 * R)
		throw std::invalid_argument("insufficient Fourier depth: need " + std::to_string(2 * R) + ", have " +
		                            std::to_string(p.depth));
}
} // namespace detail

// M(r, c) = p_hat_{k_r - k_c}(k_c)
inline TruncatedOperator quantize(const Symbol &p, double N, double memory_cap = default_memory_cap)
{
	TruncatedOperator T;
	T.d = p.d;
	T.N = N;
	T.symbol_ref = p.name;
	T.points = lattice(p.d, N);
	std::size_t n = T.points.size();
	if (double(n) * double(n) * 16.0 > memory_cap)
		throw std::length_error("quantize: " + std::to_string(n) + " rows exceeds the memory cap");
	detail::check_depth(p, T.points);
	T.matrix = Eigen::MatrixXcd::Zero(Eigen::Index(n), Eigen::Index(n));
	bool closed = p.x_independent || p.coeff;
	for (std::size_t c = 0; c < n; ++c) {
		Point xi{double(T.points[c][0]), double(T.points[c][1])};
		if (p.x_independent) {
			T.matrix(Eigen::Index(c), Eigen::Index(c)) = p.mode({0, 0}, xi);
			continue;
		}
		std::vector<cplx> all;
		if (!closed)
			all = p.modes(xi);
		std::size_t g = p.grid_size();
		for (std::size_t r = 0; r < n; ++r) {
			Freq m{T.points[r][0] - T.points[c][0], T.points[r][1] - T.points[c][1]};
			if (p.band >= 0 && (std::abs(m[0]) > p.band || std::abs(m[1]) > p.band))
				continue;
			cplx v;
			if (closed) {
				v = p.mode(m, xi);
			} else {
				if (std::abs(m[0]) > p.depth || std::abs(m[1]) > p.depth)
					continue;
				v = p.d == 1 ? all[m[0] + p.depth] : all[std::size_t(m[0] + p.depth) * g + (m[1] + p.depth)];
			}
			T.matrix(Eigen::Index(r), Eigen::Index(c)) = v;
		}
	}
	return T;
}

// d = 1 band-limited symbols, lattice k = -R..R
inline BandMatrix quantize_band(const Symbol &p, double N)
{
	if (p.d != 1)
		throw std::invalid_argument("quantize_band: d must be 1");
	if (!(p.x_independent || (p.coeff && p.band >= 0)))
		throw std::invalid_argument("quantize_band: symbol is not band-limited");
	auto pts = lattice(1, N);
	std::ptrdiff_t n = std::ptrdiff_t(pts.size());
	std::ptrdiff_t B = std::max(0, p.band);
	BandMatrix M(n, B);
	for (std::ptrdiff_t c = 0; c < n; ++c) {
		Point xi{double(pts[c][0]), 0};
		for (std::ptrdiff_t r = std::max<std::ptrdiff_t>(0, c - B); r <= std::min(n - 1, c + B); ++r)
			M.set(r, c, p.mode({int(r - c), 0}, xi));
	}
	return M;
}

// E(n) = sum over the lattice region of Re p_hat_0(k), for each n in n_grid (any order)
inline std::vector<double> expectation_sums(const Symbol &p, const std::vector<double> &n_grid,
                                            Region region = Region::angle)
{
	std::vector<double> out(n_grid.size(), 0.0);
	if (n_grid.empty())
		return out;
	double nmax = *std::max_element(n_grid.begin(), n_grid.end());
	double shift = region == Region::angle ? 1.0 : 0.0;
	auto key_of = [&](double n) -> long long {
		double lim = std::pow(n, 2.0 / p.d) * (1 + 1e-13) - shift;
		if (lim < 0)
			return -1;
		return p.d == 1 ? (long long)std::floor(std::sqrt(lim)) : (long long)std::floor(lim);
	};
	long long K = key_of(nmax);
	if (K < 0)
		return out;
	// cumulative sums over |k| (d=1) or |k|^2 (d=2)
	std::vector<double> shell(std::size_t(K) + 1, 0.0);
	if (p.d == 1) {
		for (long long j = 0; j <= K; ++j) {
			double v = p.mode({0, 0}, {double(j), 0}).real();
			if (j > 0)
				v += p.mode({0, 0}, {double(-j), 0}).real();
			shell[std::size_t(j)] = v;
		}
	} else {
		long long R = (long long)std::floor(std::sqrt(double(K)));
		for (long long a = -R; a <= R; ++a)
			for (long long b = -R; b <= R; ++b) {
				long long m = a * a + b * b;
				if (m <= K)
					shell[std::size_t(m)] += p.mode({0, 0}, {double(a), double(b)}).real();
			}
	}
	for (std::size_t i = 1; i < shell.size(); ++i)
		shell[i] += shell[i - 1];
	for (std::size_t i = 0; i < n_grid.size(); ++i) {
		long long key = key_of(n_grid[i]);
		out[i] = key < 0 ? 0.0 : shell[std::size_t(key)];
	}
	return out;
}

// I(n) = int_torus int_{region} p dxi dx, i.e. the region integral of p_hat_0
inline std::vector<double> symbol_integral(const Symbol &p, const std::vector<double> &n_grid,
                                           Region region = Region::angle, double rel_tol = 1e-9)
{
	auto radial = [&](double r) {
		if (p.d == 1)
			return p.mode({0, 0}, {r, 0}).real() + p.mode({0, 0}, {-r, 0}).real();
		const int M = 128;
		double s = 0;
		for (int j = 0; j < M; ++j) {
			double th = 2 * pi * j / M;
			s += p.mode({0, 0}, {r * std::cos(th), r * std::sin(th)}).real();
		}
		return r * s * (2 * pi / M);
	};
	auto radius = [&](double n) {
		double v = std::pow(n, 2.0 / p.d) - (region == Region::angle ? 1.0 : 0.0);
		return v > 0 ? std::sqrt(v) : 0.0;
	};
	std::vector<std::size_t> order(n_grid.size());
	for (std::size_t i = 0; i < order.size(); ++i)
		order[i] = i;
	std::sort(order.begin(), order.end(), [&](auto a, auto b) { return n_grid[a] < n_grid[b]; });
	std::vector<double> out(n_grid.size());
	double acc = 0, prev = 0;
	for (auto i : order) {
		double R = radius(n_grid[i]);
		if (R > prev) {
			double err = 0;
			double piece = integrate(radial, prev, R, rel_tol, &err);
			if (!std::isfinite(piece))
				throw std::runtime_error("symbol_integral: quadrature did not converge");
			acc += piece;
			prev = R;
		}
		out[i] = acc;
	}
	return out;
}

struct EigenComparison {
	double N = 0;
	std::size_t N_eig = 0;
	double eigen_sum = 0, expectation_sum = 0, delta = 0;
};

// Top N_eig eigenvalues of Re quantize(p, padding*N) against the lattice sum of Re p_hat_0.
inline std::vector<EigenComparison> eigen_vs_expectation(const Symbol &p, const VaryingFunction &f,
                                                         const std::vector<double> &N_list,
                                                         double padding = 2.0,
                                                         double memory_cap = default_memory_cap)
{
	if (padding < 1)
		throw std::invalid_argument("eigen_vs_expectation: padding must be >= 1");
	std::vector<EigenComparison> out;
	bool banded = p.d == 1 && (p.x_independent || (p.coeff && p.band >= 0));
	for (double N : N_list) {
		EigenComparison e;
		e.N = N;
		e.N_eig = lattice_count(p.d, N);
		double Np = p.d == 1 ? padding * N : std::pow(padding, p.d) * N;
		std::vector<double> ev;
		if (banded) {
			ev = band_hermitian_eigenvalues(quantize_band(p, Np).hermitian_part('R'));
		} else {
			auto T = quantize(p, Np, memory_cap);
			Eigen::MatrixXcd H = 0.5 * (T.matrix + T.matrix.adjoint());
			ev = hermitian_eigenvalues(H);
		}
		std::sort(ev.begin(), ev.end(), std::greater<>());
		for (std::size_t i = 0; i < e.N_eig && i < ev.size(); ++i)
			e.eigen_sum += ev[i];
		e.expectation_sum = expectation_sums(p, {N})[0];
		e.delta = std::abs(e.eigen_sum - e.expectation_sum) / f.primitive(double(e.N_eig));
		out.push_back(e);
	}
	return out;
}

// Fourier transform of indicator[a,b] convolved with a Gaussian of width sigma.
struct SmoothBox {
	double a = -0.1, b = 1.1, sigma = 0.02;
	cplx hat(double eta) const
	{
		double g = std::exp(-2 * pi * pi * sigma * sigma * eta * eta);
		if (std::abs(eta) < 1e-12)
			return (b - a) * g;
		cplx num = std::exp(cplx(0, -2 * pi * a * eta)) - std::exp(cplx(0, -2 * pi * b * eta));
		return num / cplx(0, 2 * pi * eta) * g;
	}
	cplx hat(const Point &eta, int d) const { return d == 1 ? hat(eta[0]) : hat(eta[0]) * hat(eta[1]); }
};

struct KernelErrorRow {
	double t = 0, max_weighted_error = 0;
};

// max over xi, u of |sum_{<k>^d<=t} e^{2 pi i<u,xi-k>} hat(xi-k) - chi_{[0,t]}(<xi>^d)| * <t - <xi>^d>
inline std::vector<KernelErrorRow> dirichlet_kernel_error(int d, const std::vector<double> &t_list,
                                                          const std::vector<Point> &xi_grid,
                                                          const std::vector<Point> &u_grid,
                                                          const SmoothBox &box = {})
{
	const int W = int(std::ceil(6 / (std::sqrt(2.0) * pi * box.sigma))) + 2;
	std::vector<KernelErrorRow> out;
	for (double t : t_list) {
		KernelErrorRow row{t, 0};
		double lim = std::pow(t, 2.0 / d) * (1 + 1e-13) - 1;
		for (auto &xi : xi_grid) {
			double bx = std::pow(bracket(norm2(xi)), d);
			double chi = bx <= t ? 1.0 : 0.0;
			for (auto &u : u_grid) {
				cplx s = 0;
				int c0 = int(std::round(xi[0])), c1 = int(std::round(xi[1]));
				for (int a = c0 - W; a <= c0 + W; ++a)
					for (int b = (d == 1 ? 0 : c1 - W); b <= (d == 1 ? 0 : c1 + W); ++b) {
						if (lim < 0 || double(a) * a + double(b) * b > lim)
							continue;
						Point eta{xi[0] - a, d == 1 ? 0.0 : xi[1] - b};
						double ph = 2 * pi * (u[0] * eta[0] + (d == 1 ? 0.0 : u[1] * eta[1]));
						s += std::exp(cplx(0, ph)) * box.hat(eta, d);
					}
				double err = std::abs(s - chi) * bracket((t - bx) * (t - bx));
				row.max_weighted_error = std::max(row.max_weighted_error, err);
			}
		}
		out.push_back(row);
	}
	return out;
}

} // namespace dixlab
