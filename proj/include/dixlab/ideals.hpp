#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "regvar.hpp"

namespace dixlab {

using cplx = std::complex<double>;
using MatrixC = Eigen::MatrixXcd;

enum class Origin { raw, from_matrix, from_symbol };

struct SingularSequence {
	std::vector<double> values;
	Origin origin = Origin::raw;

	std::size_t size() const { return values.size(); }
	double operator[](std::size_t i) const { return values[i]; }

	static SingularSequence from(std::vector<double> v, Origin o = Origin::raw)
	{
		for (double &x : v) {
			if (!(x >= 0))
				throw std::invalid_argument("singular sequence entries must be nonnegative");
		}
		std::stable_sort(v.begin(), v.end(), std::greater<>());
		return {std::move(v), o};
	}

	// n(s) = #{k : mu(k) > s}
	std::size_t count_above(double s) const
	{
		auto it = std::upper_bound(values.begin(), values.end(), s, std::greater_equal<>());
		return std::size_t(it - values.begin());
	}
};

inline SingularSequence singular_values(const MatrixC &A)
{
	if (!A.allFinite())
		throw std::invalid_argument("singular_values: non-finite entries");
	if (A.size() == 0)
		return {{}, Origin::from_matrix};
	Eigen::BDCSVD<MatrixC> svd(A);
	if (svd.info() != Eigen::Success)
		throw std::runtime_error("singular_values: SVD did not converge");
	auto s = svd.singularValues();
	std::vector<double> v(s.data(), s.data() + s.size());
	return SingularSequence::from(std::move(v), Origin::from_matrix);
}

struct NormValue {
	double value = 0;
	std::size_t argmax = 0;
	std::size_t N = 0;
};

inline NormValue weak_quasinorm(const SingularSequence &seq, const VaryingFunction &f)
{
	NormValue r{0, 0, seq.size()};
	for (std::size_t n = 0; n < seq.size(); ++n) {
		double v = seq[n] / f(double(n));
		if (v > r.value) {
			r.value = v;
			r.argmax = n;
		}
	}
	return r;
}

inline NormValue lorentz_norm(const SingularSequence &seq, const VaryingFunction &f)
{
	NormValue r{0, 0, seq.size()};
	double s = 0;
	for (std::size_t n = 0; n < seq.size(); ++n) {
		s += seq[n];
		double v = s / f.primitive(double(n + 1));
		if (v > r.value) {
			r.value = v;
			r.argmax = n;
		}
	}
	return r;
}

inline NormValue convexified_quasinorm(const SingularSequence &seq, const VaryingFunction &f, double q)
{
	if (!(q > 0))
		throw std::invalid_argument("convexified_quasinorm: q must be positive");
	SingularSequence p{{}, seq.origin};
	p.values.reserve(seq.size());
	for (double x : seq.values)
		p.values.push_back(std::pow(x, q));
	auto r = weak_quasinorm(p, f);
	r.value = std::pow(r.value, 1 / q);
	return r;
}

struct HolderResult {
	bool holds = false;
	double witnessed_C = 0; // lhs / (normA * normB)
	double lhs = 0, normA = 0, normB = 0;
};

inline HolderResult holder_check(const MatrixC &A, const MatrixC &B, const VaryingFunction &f,
                                 double q0, double q1)
{
	if (A.cols() != B.rows())
		throw std::invalid_argument("holder_check: dimension mismatch");
	if (!(q0 > 0 && q1 > 0))
		throw std::invalid_argument("holder_check: exponents must be positive");
	double q = 1 / (1 / q0 + 1 / q1);
	HolderResult h;
	h.normA = convexified_quasinorm(singular_values(A), f, q0).value;
	h.normB = convexified_quasinorm(singular_values(B), f, q1).value;
	h.lhs = convexified_quasinorm(singular_values(A * B), f, q).value;
	double rhs = h.normA * h.normB;
	h.witnessed_C = rhs > 0 ? h.lhs / rhs : 0.0;
	h.holds = std::isfinite(h.witnessed_C);
	return h;
}

} // namespace dixlab
