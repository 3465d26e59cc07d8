#pragma once

#include <algorithm>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#ifndef LAPACK_COMPLEX_CPP
#define LAPACK_COMPLEX_CPP
#endif
#include <lapacke.h>

namespace dixlab {

// Square complex band matrix with kd sub- and super-diagonals.
// Entry (r, c) with |r-c| <= kd is stored at diag[kd + c - r][r].
struct BandMatrix {
	std::ptrdiff_t n = 0, kd = 0;
	std::vector<std::vector<std::complex<double>>> diag;

	BandMatrix() = default;
	BandMatrix(std::ptrdiff_t n_, std::ptrdiff_t kd_)
	    : n(n_), kd(kd_), diag(2 * kd_ + 1, std::vector<std::complex<double>>(n_))
	{
	}

	std::complex<double> operator()(std::ptrdiff_t r, std::ptrdiff_t c) const
	{
		if (std::abs(r - c) > kd)
			return 0.0;
		return diag[kd + c - r][r];
	}
	void set(std::ptrdiff_t r, std::ptrdiff_t c, std::complex<double> v) { diag[kd + c - r][r] = v; }

	Eigen::MatrixXcd dense() const
	{
		Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
		for (std::ptrdiff_t r = 0; r < n; ++r)
			for (std::ptrdiff_t c = std::max<std::ptrdiff_t>(0, r - kd); c <= std::min(n - 1, r + kd); ++c)
				M(r, c) = (*this)(r, c);
		return M;
	}

	BandMatrix adjoint() const
	{
		BandMatrix A(n, kd);
		for (std::ptrdiff_t r = 0; r < n; ++r)
			for (std::ptrdiff_t c = std::max<std::ptrdiff_t>(0, r - kd); c <= std::min(n - 1, r + kd); ++c)
				A.set(c, r, std::conj((*this)(r, c)));
		return A;
	}

	// (A + A*)/2 if part = 'R', (A - A*)/(2i) if part = 'I'
	BandMatrix hermitian_part(char part) const
	{
		BandMatrix H(n, kd);
		for (std::ptrdiff_t r = 0; r < n; ++r)
			for (std::ptrdiff_t c = std::max<std::ptrdiff_t>(0, r - kd); c <= std::min(n - 1, r + kd); ++c) {
				auto a = (*this)(r, c), b = std::conj((*this)(c, r));
				H.set(r, c, part == 'R' ? 0.5 * (a + b) : (a - b) / std::complex<double>(0, 2));
			}
		return H;
	}

	// A* A, bandwidth 2 kd
	BandMatrix gram() const
	{
		BandMatrix G(n, 2 * kd);
		for (std::ptrdiff_t r = 0; r < n; ++r)
			for (std::ptrdiff_t c = r; c <= std::min(n - 1, r + 2 * kd); ++c) {
				std::complex<double> s = 0;
				std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, c - kd), hi = std::min(n - 1, r + kd);
				for (std::ptrdiff_t m = lo; m <= hi; ++m)
					s += std::conj((*this)(m, r)) * (*this)(m, c);
				G.set(r, c, s);
				G.set(c, r, std::conj(s));
			}
		return G;
	}
};

// Eigenvalues of a Hermitian band matrix, ascending.
inline std::vector<double> band_hermitian_eigenvalues(const BandMatrix &H)
{
	lapack_int n = lapack_int(H.n), kd = lapack_int(H.kd);
	if (n == 0)
		return {};
	bool real = true;
	for (auto &d : H.diag)
		for (auto &v : d)
			if (v.imag() != 0)
				real = false;
	std::vector<double> w(n);
	lapack_int ldab = kd + 1;
	lapack_int info;
	// upper storage, column major: ab[kd + r - c + c*ldab] = H(r, c) for r <= c
	if (real) {
		std::vector<double> ab(std::size_t(ldab) * n, 0.0);
		for (lapack_int c = 0; c < n; ++c)
			for (lapack_int r = std::max(0, c - kd); r <= c; ++r)
				ab[kd + r - c + std::size_t(c) * ldab] = H(r, c).real();
		info = LAPACKE_dsbevd(LAPACK_COL_MAJOR, 'N', 'U', n, kd, ab.data(), ldab, w.data(), nullptr, 1);
	} else {
		std::vector<lapack_complex_double> ab(std::size_t(ldab) * n);
		for (lapack_int c = 0; c < n; ++c)
			for (lapack_int r = std::max(0, c - kd); r <= c; ++r) {
				auto v = H(r, c);
				ab[kd + r - c + std::size_t(c) * ldab] = lapack_make_complex_double(v.real(), v.imag());
			}
		info = LAPACKE_zhbevd(LAPACK_COL_MAJOR, 'N', 'U', n, kd, ab.data(), ldab, w.data(), nullptr, 1);
	}
	if (info != 0)
		throw std::runtime_error("band eigensolver failed, info=" + std::to_string(info));
	return w;
}

// Eigenvalues of a dense Hermitian matrix (lower triangle used), ascending.
inline std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd &H)
{
	lapack_int n = lapack_int(H.rows());
	if (n == 0)
		return {};
	std::vector<lapack_complex_double> a(std::size_t(n) * n);
	for (lapack_int c = 0; c < n; ++c)
		for (lapack_int r = 0; r < n; ++r)
			a[r + std::size_t(c) * n] = lapack_make_complex_double(H(r, c).real(), H(r, c).imag());
	std::vector<double> w(n);
	lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data());
	if (info != 0)
		throw std::runtime_error("dense eigensolver failed, info=" + std::to_string(info));
	return w;
}

} // namespace dixlab
