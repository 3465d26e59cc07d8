#include <dixlab/modulated.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace dixlab;

namespace {

Eigen::MatrixXcd haar(int n, std::mt19937_64 &rng)
{
	std::normal_distribution<double> g;
	Eigen::MatrixXcd Z(n, n);
	for (int i = 0; i < n; ++i)
		for (int j = 0; j < n; ++j)
			Z(i, j) = cplx(g(rng), g(rng));
	Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Z);
	return qr.householderQ();
}

// V = U diag(phi(n)) U*, G = W diag(phi(n)^gamma) U*
ReferencePair make_pair(double gamma, int n, std::mt19937_64 &rng)
{
	auto f = phi_family(-1, 0);
	auto U = haar(n, rng), W = haar(n, rng);
	Eigen::VectorXd v(n), g(n);
	for (int i = 0; i < n; ++i) {
		v(i) = f(i);
		g(i) = std::pow(f(i), gamma);
	}
	return ReferencePair(W * g.asDiagonal() * U.adjoint(), U * v.asDiagonal() * U.adjoint());
}

} // namespace

TEST(Reference, SpectrumAndColumnNorms)
{
	std::mt19937_64 rng(1);
	auto pair = make_pair(1.0, 16, rng);
	auto f = phi_family(-1, 0);
	for (int i = 0; i < 16; ++i) {
		EXPECT_NEAR(pair.mu()[std::size_t(i)], f(i), 1e-14);
		EXPECT_NEAR(pair.column_norms2()[std::size_t(i)], f(i) * f(i), 1e-13);
	}
	auto grid = pair.default_t_grid(8);
	EXPECT_NEAR(grid.front(), 1 / f(0), 1e-12);
	EXPECT_NEAR(grid.back(), 1 / f(4), 1e-10);
}

TEST(Reference, Guards)
{
	Eigen::MatrixXcd V = Eigen::MatrixXcd::Identity(3, 3);
	V(2, 2) = -1;
	EXPECT_THROW(ReferencePair(Eigen::MatrixXcd::Identity(3, 3), V), std::invalid_argument);
	EXPECT_THROW(ReferencePair(Eigen::MatrixXcd::Identity(3, 2), Eigen::MatrixXcd::Identity(3, 3)),
	             std::invalid_argument);
}

TEST(Norms, ExplicitDiagonalValues)
{
	// U = W = I, mu = (1, 1/2), |G e_j|^2 = (4, 1)
	Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(2, 2), G = Eigen::MatrixXcd::Zero(2, 2);
	V(0, 0) = 1;
	V(1, 1) = 0.5;
	G(0, 0) = 2;
	G(1, 1) = 1;
	ReferencePair pair(G, V);
	auto f = constant_one();
	auto s = strong_modulation_norm(pair, f, {2.0});
	EXPECT_NEAR(s.values[0], std::sqrt(4 / 9.0 + 1 / 4.0), 1e-15);
	auto sp = spectral_modulation_norm(pair, f, {2.0});
	EXPECT_NEAR(sp.values[0], 1.0, 1e-15);
}

TEST(Norms, FiniteAndDivergingAgree)
{
	std::mt19937_64 rng(2);
	auto f = phi_family(-1, 0);
	for (int run = 0; run < 6; ++run) {
		bool finite = run % 2 == 0;
		auto pair = make_pair(finite ? 1.25 : 0.2, 64, rng);
		auto grid = pair.default_t_grid();
		auto a = strong_modulation_norm(pair, f, grid), b = spectral_modulation_norm(pair, f, grid);
		EXPECT_EQ(a.finite, finite);
		EXPECT_EQ(b.finite, finite);
		if (finite) {
			double ratio = a.sup_estimate / b.sup_estimate;
			EXPECT_GT(ratio, 0.1);
			EXPECT_LT(ratio, 10);
		}
	}
}

TEST(Weak, SquareOfReference)
{
	// G = V^2, p = 1: G V^{-1} = V, whose singular values are phi(n)
	std::mt19937_64 rng(3);
	auto f = phi_family(-1, 0);
	auto U = haar(32, rng);
	Eigen::VectorXd v(32);
	for (int i = 0; i < 32; ++i)
		v(i) = f(i);
	Eigen::MatrixXcd V = U * v.asDiagonal() * U.adjoint();
	ReferencePair pair(V * V, V);
	auto w = weak_modulation_check(pair, f, 1);
	EXPECT_NEAR(w.norm, 1.0, 1e-10);
	EXPECT_TRUE(std::isinf(w.q));
	auto w2 = weak_modulation_check(pair, f, 2);
	EXPECT_NEAR(w2.q, 2.0, 1e-15);
	EXPECT_TRUE(w2.finite);
	EXPECT_THROW(weak_modulation_check(pair, f, 0.5), std::invalid_argument);
}

TEST(Weak, LeakOntoKernelIsRejected)
{
	Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(2, 2), G = Eigen::MatrixXcd::Identity(2, 2);
	V(0, 0) = 1;
	ReferencePair pair(G, V);
	EXPECT_THROW(weak_modulation_check(pair, phi_family(-1, 0), 1), std::invalid_argument);
}

TEST(SymbolCriteria, L2FiniteAndDiverging)
{
	auto f = phi_family(-1, 0);
	auto grid = log_grid(10, 1e4, 4);
	auto good = multiplier(1, [](const Point &xi) { return cplx(1 / bracket(norm2(xi))); });
	auto r = symbol_l2_criterion(good, f, grid);
	EXPECT_TRUE(r.finite);
	EXPECT_LT(r.sup_estimate, 10);
	auto bad = multiplier(1, [](const Point &xi) { return cplx(std::pow(bracket(norm2(xi)), -0.5)); });
	auto s = symbol_l2_criterion(bad, f, grid);
	EXPECT_FALSE(s.finite);
}

TEST(SymbolCriteria, ModerateGrowth)
{
	auto f = natural(phi_family(-1, 0));
	auto p = multiplier(1, [](const Point &xi) { return cplx(1 / bracket(norm2(xi))); });
	auto g = moderate_growth(p, f, 12);
	EXPECT_TRUE(g.moderate);
	EXPECT_LT(g.sup, 5);
	auto one = multiplier(1, [](const Point &) { return cplx(1); });
	EXPECT_FALSE(moderate_growth(one, f, 12).moderate);
	EXPECT_THROW(moderate_growth(p, f, 40), std::length_error);
}

TEST(SymbolCriteria, ReasonableDecay)
{
	auto f = natural(phi_family(-1, 0));
	auto p = multiplier(1, [](const Point &xi) { return cplx(1 / bracket(norm2(xi))); });
	auto d = reasonable_decay(p, f, log_grid(10, 1e4, 4));
	EXPECT_TRUE(d.decaying);
	EXPECT_LT(d.R.back(), d.R.front());
}
