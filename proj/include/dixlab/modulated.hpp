#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ideals.hpp"
#include "regvar.hpp"
#include "torus_op.hpp"

namespace dixlab {

struct ModulationReport {
	std::vector<double> t, values;
	double sup_estimate = 0;
	double tail_slope = 0;
	bool finite = true;
};

inline constexpr double slope_threshold = 0.05;

namespace detail {
inline void finish_modulation(ModulationReport &r)
{
	r.sup_estimate = 0;
	for (double v : r.values)
		r.sup_estimate = std::max(r.sup_estimate, v);
	r.tail_slope = tail_loglog_slope(r.t, r.values);
	bool all_finite = std::all_of(r.values.begin(), r.values.end(), [](double v) { return std::isfinite(v); });
	r.finite = all_finite && r.tail_slope <= slope_threshold;
}
} // namespace detail

// G and positive V with cached eigendecomposition, eigenvalues nonincreasing.
class ReferencePair {
public:
	ReferencePair(Eigen::MatrixXcd G, const Eigen::MatrixXcd &V) : G_(std::move(G))
	{
		if (V.rows() != V.cols() || G_.cols() != V.rows())
			throw std::invalid_argument("ReferencePair: dimension mismatch");
		Eigen::MatrixXcd Vh = 0.5 * (V + V.adjoint());
		Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Vh);
		if (es.info() != Eigen::Success)
			throw std::runtime_error("ReferencePair: eigendecomposition failed");
		Eigen::Index n = V.rows();
		mu_.resize(std::size_t(n));
		U_.resize(n, n);
		for (Eigen::Index i = 0; i < n; ++i) {
			double m = es.eigenvalues()(n - 1 - i);
			if (m < -1e-12 * std::max(1.0, std::abs(es.eigenvalues()(n - 1))))
				throw std::invalid_argument("ReferencePair: V is not positive semidefinite");
			mu_[std::size_t(i)] = std::max(m, 0.0);
			U_.col(i) = es.eigenvectors().col(n - 1 - i);
		}
		GU_ = G_ * U_;
		col_norm2_.resize(std::size_t(n));
		for (Eigen::Index i = 0; i < n; ++i)
			col_norm2_[std::size_t(i)] = GU_.col(i).squaredNorm();
	}

	const Eigen::MatrixXcd &G() const { return G_; }
	const Eigen::MatrixXcd &U() const { return U_; }
	const std::vector<double> &mu() const { return mu_; }
	const std::vector<double> &column_norms2() const { return col_norm2_; }

	// t from 1/mu(0) to 1/mu(N/4): where the truncated spectrum below 1/t is still populated
	std::vector<double> default_t_grid(int points = 24) const
	{
		std::size_t n = mu_.size();
		double lo = 1 / mu_.front();
		double hi = 1 / std::max(mu_[std::min(n - 1, n / 4)], 1e-300);
		if (!(hi > lo))
			hi = lo * 10;
		std::vector<double> g(static_cast<std::size_t>(points));
		for (int i = 0; i < points; ++i)
			g[std::size_t(i)] = lo * std::pow(hi / lo, double(i) / (points - 1));
		return g;
	}

private:
	Eigen::MatrixXcd G_, U_, GU_;
	std::vector<double> mu_, col_norm2_;
};

inline ModulationReport strong_modulation_norm(const ReferencePair &pair, const VaryingFunction &f,
                                               const std::vector<double> &t_grid)
{
	ModulationReport r;
	const auto &mu = pair.mu();
	const auto &cn = pair.column_norms2();
	for (double t : t_grid) {
		double s = 0;
		for (std::size_t j = 0; j < mu.size(); ++j) {
			double q = 1 + t * mu[j];
			s += cn[j] / (q * q);
		}
		r.t.push_back(t);
		r.values.push_back(std::sqrt(s / f(t)));
	}
	detail::finish_modulation(r);
	return r;
}

inline ModulationReport spectral_modulation_norm(const ReferencePair &pair, const VaryingFunction &f,
                                                 const std::vector<double> &t_grid)
{
	ModulationReport r;
	const auto &mu = pair.mu();
	const auto &cn = pair.column_norms2();
	for (double t : t_grid) {
		double s = 0;
		for (std::size_t j = 0; j < mu.size(); ++j)
			if (t * mu[j] <= 1)
				s += cn[j];
		r.t.push_back(t);
		r.values.push_back(std::sqrt(s / f(t)));
	}
	detail::finish_modulation(r);
	return r;
}

struct WeakModulation {
	double p = 1, q = 1;
	double norm = 0;
	bool finite = true;
	SingularSequence sequence;
};

// singular values of G V^{-1/p} (spectral pseudo-inverse) against L_phi^{(q)}, q = p/(p-1)
inline WeakModulation weak_modulation_check(const ReferencePair &pair, const VaryingFunction &f, double p)
{
	if (!(p >= 1))
		throw std::invalid_argument("weak_modulation_check: p must be >= 1");
	const auto &mu = pair.mu();
	double floor = 1e-13 * mu.front();
	Eigen::Index n = Eigen::Index(mu.size());
	Eigen::VectorXd inv(n);
	double leak = 0, total = pair.G().squaredNorm();
	const auto &cn = pair.column_norms2();
	for (Eigen::Index i = 0; i < n; ++i) {
		if (mu[std::size_t(i)] > floor) {
			inv(i) = std::pow(mu[std::size_t(i)], -1 / p);
		} else {
			inv(i) = 0;
			leak += cn[std::size_t(i)];
		}
	}
	if (leak > 1e-20 + 1e-10 * total)
		throw std::invalid_argument("weak_modulation_check: G is not supported on the range of V");
	Eigen::MatrixXcd M = pair.G() * pair.U() * inv.asDiagonal() * pair.U().adjoint();
	WeakModulation w;
	w.p = p;
	w.sequence = singular_values(M);
	if (p == 1) {
		w.q = INFINITY;
		w.norm = weak_quasinorm(w.sequence, f).value;
	} else {
		w.q = p / (p - 1);
		w.norm = convexified_quasinorm(w.sequence, f, w.q).value;
	}
	w.finite = std::isfinite(w.norm);
	return w;
}

namespace detail {

// int_torus |p(x, xi)|^2 dx by Parseval over the available coefficients
inline double x_l2(const Symbol &p, const Point &xi)
{
	if (p.x_independent)
		return std::norm(p.mode({0, 0}, xi));
	if (p.coeff && p.band >= 0) {
		double s = 0;
		for (int a = -p.band; a <= p.band; ++a)
			for (int b = (p.d == 1 ? 0 : -p.band); b <= (p.d == 1 ? 0 : p.band); ++b)
				s += std::norm(p.coeff({a, b}, xi));
		return s;
	}
	double s = 0;
	for (auto &v : p.modes(xi))
		s += std::norm(v);
	return s;
}

// int_torus |p(x, xi)| dx by trapezoid
inline double x_l1(const Symbol &p, const Point &xi)
{
	if (p.x_independent)
		return std::abs(p.mode({0, 0}, xi));
	int n = std::max(64, 2 * std::max(p.band, p.depth) + 1);
	double s = 0;
	if (p.d == 1) {
		for (int a = 0; a < n; ++a)
			s += std::abs(p({2 * pi * a / n, 0}, xi));
		return s / n;
	}
	for (int a = 0; a < n; ++a)
		for (int b = 0; b < n; ++b)
			s += std::abs(p({2 * pi * a / n, 2 * pi * b / n}, xi));
	return s / (double(n) * n);
}

// sum of w(xi) over lattice points with r_lo < |xi| (d=1) or |xi|^2 in a band, radial tail by quadrature
template <class W>
double lattice_tail_sum(int d, double r_lo, double r_max, W w, bool *diverging)
{
	double s = 0;
	if (d == 1) {
		long long j0 = (long long)std::floor(r_lo) + 1;
		long long j1 = (long long)std::floor(r_max);
		for (long long j = std::max(0LL, j0); j <= j1; ++j) {
			s += w(Point{double(j), 0});
			if (j > 0)
				s += w(Point{double(-j), 0});
		}
		double a = std::max(r_max, r_lo) + 0.5;
		auto radial = [&](double r) { return w(Point{r, 0}) + w(Point{-r, 0}); };
		double err = 0;
		double tail = integrate([&](double u) { return radial(a + u); }, 0, INFINITY, 1e-8, &err);
		if (!std::isfinite(tail) || err > 1e-3 * std::abs(tail) + 1e-300 || tail > 1e12 * (s + 1e-300)) {
			*diverging = true;
			return INFINITY;
		}
		return s + tail;
	}
	long long R = (long long)std::floor(r_max);
	for (long long a = -R; a <= R; ++a)
		for (long long b = -R; b <= R; ++b) {
			double r2 = double(a) * a + double(b) * b;
			if ((r_lo < 0 || r2 > r_lo * r_lo) && r2 <= r_max * r_max)
				s += w(Point{double(a), double(b)});
		}
	double a0 = std::max(r_max, r_lo);
	auto radial = [&](double r) {
		const int M = 64;
		double acc = 0;
		for (int j = 0; j < M; ++j) {
			double th = 2 * pi * j / M;
			acc += w(Point{r * std::cos(th), r * std::sin(th)});
		}
		return r * acc * 2 * pi / M;
	};
	double err = 0;
	double tail = integrate([&](double u) { return radial(a0 + u); }, 0, INFINITY, 1e-8, &err);
	if (!std::isfinite(tail) || err > 1e-3 * std::abs(tail) + 1e-300 || tail > 1e12 * (s + 1e-300)) {
		*diverging = true;
		return INFINITY;
	}
	return s + tail;
}

} // namespace detail

// sup_t (1/phi(t)) sum_{phi(<xi>^d) < 1/t} int |p|^2 dx
inline ModulationReport symbol_l2_criterion(const Symbol &p, const VaryingFunction &f,
                                            const std::vector<double> &t_grid, double lattice_radius = 0)
{
	ModulationReport r;
	for (double t : t_grid) {
		double r_lo = -1; // whole lattice when 1/t >= phi(0)
		if (1 / t < f(0)) {
			double T = f.inverse(1 / t); // region <xi>^d > T
			double r_lo2 = std::pow(T, 2.0 / p.d) - 1;
			r_lo = r_lo2 > 0 ? std::sqrt(r_lo2) : -1;
		}
		double rmax = lattice_radius > 0 ? std::max(lattice_radius, r_lo + 1)
		                                 : std::max(r_lo, 0.0) * 4 + (p.d == 1 ? 4096.0 : 64.0);
		bool div = false;
		double v = detail::lattice_tail_sum(p.d, r_lo, rmax, [&](const Point &xi) { return detail::x_l2(p, xi); }, &div);
		r.t.push_back(t);
		r.values.push_back(v / f(t));
	}
	detail::finish_modulation(r);
	return r;
}

struct GrowthReport {
	std::vector<double> bands;      // B_k for k = 0..k_max
	std::vector<double> cumulative; // sum_{j<=k} B_j / (k+1)
	double sup = 0, slope = 0;
	bool moderate = true;
};

// B_k = sum over lattice points with k < Phi(<xi>^d) < k+1 of int |p| dx
inline GrowthReport moderate_growth(const Symbol &p, const VaryingFunction &f, int k_max,
                                    double max_lattice_points = 5e7)
{
	GrowthReport g;
	double top = f.primitive_inverse(double(k_max + 1)); // <xi>^d below this
	double r2 = std::pow(top, 2.0 / p.d) - 1;
	double R = r2 > 0 ? std::sqrt(r2) : 0;
	double pts = p.d == 1 ? 2 * R : pi * R * R;
	if (pts > max_lattice_points)
		throw std::length_error("moderate_growth: k_max needs too many lattice points");
	g.bands.assign(std::size_t(k_max + 1), 0.0);
	auto visit = [&](const Point &xi) {
		double b = std::pow(bracket(norm2(xi)), p.d);
		double P = f.primitive(b);
		if (P <= 0)
			return;
		double k = std::floor(P);
		if (k > k_max || P == k)
			return;
		g.bands[std::size_t(k)] += detail::x_l1(p, xi);
	};
	long long Ri = (long long)std::floor(R);
	for (long long a = -Ri; a <= Ri; ++a) {
		if (p.d == 1) {
			visit({double(a), 0});
			continue;
		}
		for (long long b = -Ri; b <= Ri; ++b)
			if (double(a) * a + double(b) * b <= r2)
				visit({double(a), double(b)});
	}
	double acc = 0;
	std::vector<double> ks, vs;
	for (int k = 0; k <= k_max; ++k) {
		acc += g.bands[std::size_t(k)];
		g.cumulative.push_back(acc / (k + 1));
		g.sup = std::max(g.sup, g.bands[std::size_t(k)]);
		ks.push_back(k + 1);
		vs.push_back(g.bands[std::size_t(k)]);
	}
	g.slope = tail_loglog_slope(ks, vs);
	g.moderate = g.slope <= slope_threshold * 4;
	return g;
}

struct DecayReport {
	std::vector<double> t, R;
	bool decaying = false;
};

// R(t) = (1/Phi(t)) sum_xi int |p| dx / <t - <xi>^d>
inline DecayReport reasonable_decay(const Symbol &p, const VaryingFunction &f, const std::vector<double> &t_grid)
{
	DecayReport d;
	double tmax = *std::max_element(t_grid.begin(), t_grid.end());
	double rmax = std::pow(4 * tmax, 1.0 / p.d) + 16;
	// cache |p| integrals on the lattice
	std::vector<std::pair<double, double>> cache; // (<xi>^d, weight)
	long long Ri = (long long)std::floor(rmax);
	for (long long a = -Ri; a <= Ri; ++a) {
		for (long long b = (p.d == 1 ? 0 : -Ri); b <= (p.d == 1 ? 0 : Ri); ++b) {
			double r2 = double(a) * a + double(b) * b;
			if (r2 > rmax * rmax)
				continue;
			Point xi{double(a), double(b)};
			double w = detail::x_l1(p, xi);
			if (w != 0)
				cache.emplace_back(std::pow(bracket(r2), p.d), w);
		}
	}
	for (double t : t_grid) {
		double s = 0;
		for (auto &[b, w] : cache)
			s += w / bracket((t - b) * (t - b));
		bool div = false;
		double tail = 0;
		auto tailw = [&](const Point &xi) {
			double b = std::pow(bracket(norm2(xi)), p.d);
			return detail::x_l1(p, xi) / bracket((t - b) * (t - b));
		};
		if (p.d == 1) {
			double a0 = std::floor(rmax) + 0.5;
			tail = integrate([&](double u) { return tailw({a0 + u, 0}) + tailw({-(a0 + u), 0}); }, 0, INFINITY, 1e-8);
		} else {
			tail = detail::lattice_tail_sum(2, rmax, rmax, tailw, &div);
		}
		d.t.push_back(t);
		d.R.push_back((s + tail) / f.primitive(t));
	}
	std::size_t h = d.R.size() / 2;
	d.decaying = d.R.size() >= 2;
	for (std::size_t i = h + 1; i < d.R.size(); ++i)
		if (d.R[i] > d.R[i - 1] * (1 + 1e-9))
			d.decaying = false;
	if (!d.R.empty() && d.R.size() >= 2 && !(d.R.back() < d.R[h]))
		d.decaying = false;
	return d;
}

} // namespace dixlab
