#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/special_functions/factorials.hpp>
#include <json.hpp>

#include "linalg.hpp"
#include "torus_op.hpp"
#include "traces.hpp"

namespace dixlab {

enum class InnerBall { freeze, zero };

// a_{-d-j,i}(x, w) = g(x) h(w),  g = sum c_m e^{i m x},  h(theta) = sum c_n e^{i n theta}
struct Component {
	int j = 0, i = 0;
	std::vector<std::pair<Freq, cplx>> x_modes{{{0, 0}, 1.0}};
	std::vector<std::pair<int, cplx>> angular; // empty: constant 1

	cplx g(const Point &x) const
	{
		cplx s = 0;
		for (auto &[m, c] : x_modes)
			s += c * std::exp(cplx(0, m[0] * x[0] + m[1] * x[1]));
		return s;
	}
	cplx g_mode(const Freq &m) const
	{
		cplx s = 0;
		for (auto &[mm, c] : x_modes)
			if (mm == m)
				s += c;
		return s;
	}
	cplx h(double theta) const
	{
		if (angular.empty())
			return 1.0;
		cplx s = 0;
		for (auto &[n, c] : angular)
			s += c * std::exp(cplx(0, n * theta));
		return s;
	}
	int band() const
	{
		int B = 0;
		for (auto &[m, c] : x_modes)
			B = std::max({B, std::abs(m[0]), std::abs(m[1])});
		return B;
	}
};

struct LogClassicalSymbol {
	int d = 1, k = 0;
	std::vector<Component> components;
	InnerBall inner = InnerBall::freeze;

	static double angle(const Point &xi) { return std::atan2(xi[1], xi[0]); }

	// mean over the unit cosphere of h
	static cplx sphere_mean(const Component &c, int d)
	{
		if (d == 1)
			return 0.5 * (c.h(0) + c.h(pi));
		const int M = 512;
		cplx s = 0;
		for (int q = 0; q < M; ++q)
			s += c.h(2 * pi * q / M);
		return s / double(M);
	}

	// radial-angular factor multiplying g(x) for component c at xi
	cplx factor(const Component &c, const Point &xi) const
	{
		double r = std::sqrt(norm2(xi));
		if (r >= 1)
			return c.h(angle(xi)) * std::pow(r, -d - c.j) * std::pow(std::log(r), c.i);
		if (inner == InnerBall::zero || c.i != 0)
			return 0.0;
		if (r == 0)
			return sphere_mean(c, d);
		return c.h(angle(xi));
	}

	cplx operator()(const Point &x, const Point &xi) const
	{
		cplx s = 0;
		for (auto &c : components)
			s += c.g(x) * factor(c, xi);
		return s;
	}

	// evaluate sum over components directly from the homogeneous expansion
	cplx expansion(const Point &x, const Point &xi) const
	{
		double r = std::sqrt(norm2(xi));
		cplx s = 0;
		for (auto &c : components)
			s += c.g(x) * c.h(angle(xi)) * std::pow(r, -d - c.j) * std::pow(std::log(r), c.i);
		return s;
	}

	Symbol to_symbol(std::string name = "logclassical") const
	{
		auto self = std::make_shared<LogClassicalSymbol>(*this);
		Symbol s;
		s.d = d;
		s.name = std::move(name);
		int B = 0;
		bool xi_only = true;
		for (auto &c : components) {
			B = std::max(B, c.band());
			for (auto &[m, v] : c.x_modes)
				if (m != Freq{0, 0} && v != cplx(0))
					xi_only = false;
		}
		s.band = B;
		s.x_independent = xi_only;
		s.coeff = [self](const Freq &m, const Point &xi) {
			cplx v = 0;
			for (auto &c : self->components) {
				cplx gm = c.g_mode(m);
				if (gm != cplx(0))
					v += gm * self->factor(c, xi);
			}
			return v;
		};
		s.eval = [self](const Point &x, const Point &xi) { return (*self)(x, xi); };
		return s;
	}
};

struct ResidueValue {
	cplx raw = 0;        // int_torus int_cosphere a_{-d,k}
	cplx res_k = 0;      // (k+1)!/(2 pi)^d * raw
	cplx prediction = 0; // (2 pi)^d / ((k+1)! d^{k+1}) * res_k
};

inline ResidueValue residue_k(const LogClassicalSymbol &s)
{
	ResidueValue r;
	for (auto &c : s.components) {
		if (c.j != 0 || c.i != s.k)
			continue;
		cplx mean_g = c.g_mode({0, 0});
		cplx ang = s.d == 1 ? c.h(0) + c.h(pi) : LogClassicalSymbol::sphere_mean(c, 2) * (2 * pi);
		r.raw += mean_g * ang;
	}
	double fact = boost::math::factorial<double>(unsigned(s.k + 1));
	double tp = std::pow(2 * pi, s.d);
	r.res_k = fact / tp * r.raw;
	r.prediction = tp / (fact * std::pow(double(s.d), s.k + 1)) * r.res_k;
	return r;
}

inline LogClassicalSymbol parse_manifest(const nlohmann::json &j)
{
	LogClassicalSymbol s;
	try {
		s.d = j.at("d").get<int>();
		s.k = j.at("k").get<int>();
		if (s.d != 1 && s.d != 2)
			throw std::invalid_argument("manifest: d must be 1 or 2");
		if (s.k < 0)
			throw std::invalid_argument("manifest: k must be >= 0");
		auto as_cplx = [](const nlohmann::json &v) {
			if (v.is_number())
				return cplx(v.get<double>(), 0);
			return cplx(v.at(0).get<double>(), v.at(1).get<double>());
		};
		for (auto &cj : j.at("components")) {
			Component c;
			c.j = cj.at("j").get<int>();
			c.i = cj.at("i").get<int>();
			if (c.j < 0 || c.i < 0 || c.i > s.k)
				throw std::invalid_argument("manifest: need j >= 0 and 0 <= i <= k");
			if (cj.contains("x_modes")) {
				c.x_modes.clear();
				for (auto &m : cj.at("x_modes")) {
					Freq f{0, 0};
					auto &mj = m.at(0);
					if (mj.is_array()) {
						f[0] = mj.at(0).get<int>();
						if (s.d == 2)
							f[1] = mj.at(1).get<int>();
					} else {
						f[0] = mj.get<int>();
					}
					c.x_modes.emplace_back(f, as_cplx(m.at(1)));
				}
			}
			const nlohmann::json *fourier = nullptr;
			if (cj.contains("fourier"))
				fourier = &cj.at("fourier");
			if (cj.contains("angular")) {
				auto &a = cj.at("angular");
				if (a.is_string()) {
					if (a.get<std::string>() != "const")
						throw std::invalid_argument("manifest: angular must be \"const\" or a fourier list");
				} else if (a.is_object() && a.contains("fourier")) {
					fourier = &a.at("fourier");
				} else {
					throw std::invalid_argument("manifest: malformed angular entry");
				}
			}
			if (fourier)
				for (auto &t : *fourier) {
					cplx v = t.size() >= 3 ? cplx(t.at(1).get<double>(), t.at(2).get<double>())
					                       : cplx(t.at(1).get<double>(), 0);
					c.angular.emplace_back(t.at(0).get<int>(), v);
				}
			s.components.push_back(std::move(c));
		}
	} catch (const nlohmann::json::exception &e) {
		throw std::invalid_argument(std::string("malformed manifest: ") + e.what());
	}
	return s;
}

inline nlohmann::json manifest_json(const LogClassicalSymbol &s)
{
	nlohmann::json j;
	j["d"] = s.d;
	j["k"] = s.k;
	j["components"] = nlohmann::json::array();
	for (auto &c : s.components) {
		nlohmann::json cj;
		cj["j"] = c.j;
		cj["i"] = c.i;
		cj["x_modes"] = nlohmann::json::array();
		for (auto &[m, v] : c.x_modes) {
			nlohmann::json mj = s.d == 1 ? nlohmann::json(m[0]) : nlohmann::json::array({m[0], m[1]});
			cj["x_modes"].push_back({mj, {v.real(), v.imag()}});
		}
		if (c.angular.empty()) {
			cj["angular"] = "const";
		} else {
			nlohmann::json f = nlohmann::json::array();
			for (auto &[n, v] : c.angular)
				f.push_back({n, v.real(), v.imag()});
			cj["angular"] = {{"fourier", f}};
		}
		j["components"].push_back(cj);
	}
	return j;
}

struct NamedSymbol {
	Symbol symbol;
	LogClassicalSymbol principal;
};

// "pow:s" max(1,|xi|)^s, "bracket:s" <xi>^s, "logbracket:s:i" <xi>^s log^i <xi>
inline NamedSymbol symbol_family(const std::string &key, int d, int k)
{
	std::vector<std::string> p;
	{
		std::stringstream ss(key);
		std::string item;
		while (std::getline(ss, item, ':'))
			p.push_back(item);
	}
	if (d != 1 && d != 2)
		throw std::invalid_argument("symbol family: d must be 1 or 2");
	NamedSymbol out;
	out.principal.d = d;
	out.principal.k = k;
	double s = 0;
	int i = 0;
	std::function<cplx(const Point &)> h;
	try {
		if (p.size() == 2 && p[0] == "pow") {
			s = std::stod(p[1]);
			h = [s](const Point &xi) { return cplx(std::pow(std::max(1.0, std::sqrt(norm2(xi))), s)); };
		} else if (p.size() == 2 && p[0] == "bracket") {
			s = std::stod(p[1]);
			h = [s](const Point &xi) { return cplx(std::pow(bracket(norm2(xi)), s)); };
		} else if (p.size() == 3 && p[0] == "logbracket") {
			s = std::stod(p[1]);
			i = std::stoi(p[2]);
			h = [s, i](const Point &xi) {
				double b = bracket(norm2(xi));
				return cplx(std::pow(b, s) * std::pow(std::log(b), i));
			};
		}
	} catch (const std::logic_error &) {
		h = nullptr;
	}
	if (!h)
		throw std::invalid_argument("unknown symbol family: " + key);
	out.symbol = multiplier(d, h, key);
	double jd = -s - d;
	if (jd >= 0 && std::abs(jd - std::round(jd)) < 1e-12) {
		Component c;
		c.j = int(std::round(jd));
		c.i = i;
		if (c.i <= k)
			out.principal.components.push_back(c);
	}
	return out;
}

struct ConvergenceRow {
	double n = 0, normalized = 0, relative_gap = 0;
};

struct ResidueReport {
	ResidueValue residue;
	TraceEstimate trace;
	std::vector<ConvergenceRow> table;
	double gap = 0;         // extrapolated limit against prediction
	double gap_cesaro = 0;  // raw Cesaro value against prediction
	double gap_last = 0;    // c at the largest n against prediction
	bool omega_dependent = false;
	std::string status;
	std::vector<EigenComparison> eigen_route;
};

inline ResidueReport connes_verify(const Symbol &lattice_symbol, const LogClassicalSymbol &principal,
                                   double n_max, double tol = 0.02, Region region = Region::angle,
                                   const std::vector<double> &eigen_N = {})
{
	if (!(n_max >= 16))
		throw std::invalid_argument("connes_verify: n must be at least 16");
	if (lattice_symbol.d != principal.d)
		throw std::invalid_argument("connes_verify: dimension mismatch");
	ResidueReport r;
	r.residue = residue_k(principal);
	std::size_t L = std::size_t(std::floor(n_max));
	std::vector<double> idx(L);
	for (std::size_t i = 0; i < L; ++i)
		idx[i] = double(i + 1);
	auto E = expectation_sums(lattice_symbol, idx, region);
	auto f = log_normalizer(principal.k);
	r.trace = estimate_from_partial_sums(idx, E, f, tol);
	double pred = r.residue.prediction.real();
	double denom = pred != 0 ? std::abs(pred) : 1.0;
	r.gap = std::abs(r.trace.limit - pred) / denom;
	r.gap_cesaro = std::abs(r.trace.cesaro - pred) / denom;
	double last = E.back() / f.primitive(idx.back() + 1);
	r.gap_last = std::abs(last - pred) / denom;
	for (double n = 10; n <= n_max * (1 + 1e-12); n *= 10) {
		std::size_t i = std::size_t(n) - 1;
		double c = E[i] / f.primitive(n + 1);
		r.table.push_back({n, c, std::abs(c - pred) / denom});
	}
	if (r.table.empty() || r.table.back().n != idx.back())
		r.table.push_back({idx.back(), last, r.gap_last});
	r.omega_dependent = !r.trace.converged;
	r.status = r.omega_dependent ? "omega-dependent; no single prediction" : "converged";
	if (!lattice_symbol.x_independent && !eigen_N.empty())
		r.eigen_route = eigen_vs_expectation(lattice_symbol, f, eigen_N);
	return r;
}

struct DiracReport {
	TraceEstimate first, second;                 // singular-value traces of (i) and (ii)
	TraceEstimate first_real, first_imag;        // linear traces of Hermitian / imaginary parts
	TraceEstimate second_real, second_imag;
	double ratio = 0;
	double symbol_prediction = 0; // 2 * mean |a'|
	bool degenerate = false;
	std::size_t N_eig = 0, rows = 0;
};

// (i) [Dslash, a] <Dslash>^{-1} against phi_{-1,0}, (ii) [D, a] with D = sign(Dslash) log(1 + Dslash^2) against phi_{-1,1}
inline DiracReport dirac_log_demo(const std::vector<std::pair<int, cplx>> &a_modes, double N,
                                  const VaryingFunction &f0, const VaryingFunction &f1,
                                  double padding = 2.0, double tol = 0.05)
{
	DiracReport rep;
	std::vector<std::pair<Freq, cplx>> modes;
	int B = 0;
	bool constant = true;
	for (auto &[m, c] : a_modes) {
		modes.push_back({{m, 0}, c});
		B = std::max(B, std::abs(m));
		if (m != 0 && c != cplx(0))
			constant = false;
	}
	for (auto &[m, c] : a_modes) {
		cplx partner = 0;
		for (auto &[m2, c2] : a_modes)
			if (m2 == -m)
				partner += c2;
		if (std::abs(partner - std::conj(c)) > 1e-12 * (1 + std::abs(c)))
			throw std::invalid_argument("dirac_log_demo: a must be real (conjugate-symmetric modes)");
	}
	if (N < 4 * std::max(B, 1))
		throw std::invalid_argument("dirac_log_demo: N must be at least 4x the bandwidth");
	rep.N_eig = lattice_count(1, N);
	auto Aop = quantize_band(separable(1, modes, [](const Point &) { return cplx(1); }, "a"), padding * N);
	std::ptrdiff_t n = Aop.n, R = (n - 1) / 2;
	rep.rows = std::size_t(n);
	auto h = [](double s) { return (s > 0 ? 1.0 : (s < 0 ? -1.0 : 0.0)) * std::log1p(s * s); };
	BandMatrix C1(n, Aop.kd), C2(n, Aop.kd);
	for (std::ptrdiff_t r = 0; r < n; ++r)
		for (std::ptrdiff_t c = std::max<std::ptrdiff_t>(0, r - Aop.kd); c <= std::min(n - 1, r + Aop.kd); ++c) {
			double kr = double(r - R), kc = double(c - R);
			cplx a = Aop(r, c);
			C1.set(r, c, (kr - kc) * a / bracket(kc * kc));
			C2.set(r, c, (h(kr) - h(kc)) * a);
		}
	double deriv = 0;
	const int Q = 4096;
	for (int q = 0; q < Q; ++q) {
		double x = 2 * pi * q / Q;
		cplx d = 0;
		for (auto &[m, c] : a_modes)
			d += cplx(0, m) * c * std::exp(cplx(0, m * x));
		deriv += std::abs(d);
	}
	rep.symbol_prediction = 2 * deriv / Q;
	auto singular = [&](const BandMatrix &M) {
		auto ev = band_hermitian_eigenvalues(M.gram());
		std::vector<double> s;
		for (double v : ev)
			s.push_back(std::sqrt(std::max(v, 0.0)));
		std::sort(s.begin(), s.end(), std::greater<>());
		s.resize(std::min(s.size(), rep.N_eig));
		return s;
	};
	auto linear = [&](const BandMatrix &M, char part, const VaryingFunction &f) {
		auto ev = band_hermitian_eigenvalues(M.hermitian_part(part));
		std::sort(ev.begin(), ev.end(), [](double x, double y) { return std::abs(x) > std::abs(y); });
		ev.resize(std::min(ev.size(), rep.N_eig));
		return dixmier_selfadjoint(ev, f, tol);
	};
	rep.first = dixmier_sequence(singular(C1), f0, tol);
	rep.second = dixmier_sequence(singular(C2), f1, tol);
	rep.first_real = linear(C1, 'R', f0);
	rep.first_imag = linear(C1, 'I', f0);
	rep.second_real = linear(C2, 'R', f1);
	rep.second_imag = linear(C2, 'I', f1);
	rep.degenerate = constant;
	rep.ratio = constant || rep.second.limit == 0 ? 0.0 : rep.first.limit / rep.second.limit;
	return rep;
}

} // namespace dixlab
