#include <dixlab/torus_op.hpp>

#include <gtest/gtest.h>

using namespace dixlab;

namespace {

Symbol inv_bracket(int d)
{
	return multiplier(d, [](const Point &xi) { return cplx(1 / bracket(norm2(xi))); }, "<xi>^-1");
}

} // namespace

TEST(Lattice, Counts)
{
	EXPECT_EQ(lattice_count(1, std::sqrt(5.0)), 5u);
	EXPECT_EQ(lattice_count(1, 1), 1u);
	EXPECT_EQ(lattice_count(1, 0.5), 0u);
	// a^2 + b^2 <= 9
	EXPECT_EQ(lattice_count(2, 10), 29u);
	// a^2 + b^2 <= 10
	EXPECT_EQ(lattice_count(2, 10, Region::ball), 37u);
	auto pts = lattice(2, 2);
	ASSERT_EQ(pts.size(), 5u);
	EXPECT_EQ(pts.front(), (Freq{-1, 0}));
	EXPECT_EQ(pts.back(), (Freq{1, 0}));
	EXPECT_THROW(lattice(3, 10), std::invalid_argument);
}

TEST(Quantize, MultiplierIsDiagonal)
{
	auto T = quantize(inv_bracket(1), std::sqrt(5.0));
	ASSERT_EQ(T.matrix.rows(), 5);
	const double want[] = {1 / std::sqrt(5.0), 1 / std::sqrt(2.0), 1, 1 / std::sqrt(2.0), 1 / std::sqrt(5.0)};
	for (int i = 0; i < 5; ++i)
		for (int j = 0; j < 5; ++j)
			EXPECT_NEAR(std::abs(T.matrix(i, j) - (i == j ? want[i] : 0.0)), 0, 1e-15);
}

TEST(Quantize, CosineShiftsByOne)
{
	auto p = separable(1, {{{1, 0}, 0.5}, {{-1, 0}, 0.5}},
	                   [](const Point &xi) { return cplx(1 / bracket(norm2(xi))); }, "cos x <xi>^-1");
	auto T = quantize(p, 10);
	for (Eigen::Index r = 0; r < T.matrix.rows(); ++r)
		for (Eigen::Index c = 0; c < T.matrix.cols(); ++c) {
			double kc = T.points[std::size_t(c)][0];
			double want = std::abs(r - c) == 1 ? 0.5 / bracket(kc * kc) : 0.0;
			EXPECT_NEAR(std::abs(T.matrix(r, c) - want), 0, 1e-15);
		}
}

TEST(Quantize, FftPathMatchesClosedForm)
{
	auto h = [](const Point &xi) { return cplx(1 / bracket(norm2(xi))); };
	std::vector<std::pair<Freq, cplx>> modes{{{0, 0}, 2.0}, {{1, 0}, 0.5}, {{-1, 0}, 0.5}, {{2, 0}, cplx(0, -0.5)},
	                                         {{-2, 0}, cplx(0, 0.5)}};
	auto closed = separable(1, modes, h);
	auto fft = from_evaluator(1, [closed](const Point &x, const Point &xi) { return closed(x, xi); }, 32);
	auto A = quantize(closed, 16), B = quantize(fft, 16);
	EXPECT_LT((A.matrix - B.matrix).cwiseAbs().maxCoeff(), 1e-14);
	EXPECT_FALSE(fft.decay_flag({3, 0}));
}

TEST(Quantize, TwoDimensionalFft)
{
	auto h = [](const Point &xi) { return cplx(std::pow(bracket(norm2(xi)), -2)); };
	auto closed = separable(2, {{{0, 0}, 1.0}, {{1, -1}, 0.25}, {{-1, 1}, 0.25}}, h);
	auto fft = from_evaluator(2, [closed](const Point &x, const Point &xi) { return closed(x, xi); }, 10);
	auto A = quantize(closed, 10), B = quantize(fft, 10);
	EXPECT_LT((A.matrix - B.matrix).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Quantize, Guards)
{
	auto rough = from_evaluator(1, [](const Point &x, const Point &) { return cplx(std::abs(std::sin(x[0]))); }, 4);
	EXPECT_THROW(quantize(rough, 10), std::invalid_argument);
	EXPECT_TRUE(rough.decay_flag({0, 0}));
	EXPECT_THROW(quantize(inv_bracket(2), 1e4, 1e6), std::length_error);
}

TEST(Quantize, BandMatchesDense)
{
	auto p = separable(1, {{{0, 0}, 2.0}, {{1, 0}, cplx(0.5, 0.2)}, {{-3, 0}, 0.1}},
	                   [](const Point &xi) { return cplx(std::log(bracket(norm2(xi)))); });
	auto B = quantize_band(p, 40);
	auto T = quantize(p, 40);
	EXPECT_LT((B.dense() - T.matrix).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Expectation, HarmonicOracle)
{
	auto p = multiplier(1, [](const Point &xi) { return cplx(1 / std::max(1.0, std::abs(xi[0]))); });
	// |k| <= 999: 1 + 2 H_999
	EXPECT_NEAR(expectation_sums(p, {1000})[0], 15.9689417211006898, 1e-12);
	auto q = multiplier(2, [](const Point &xi) { return cplx(1 / (1 + norm2(xi))); });
	EXPECT_NEAR(expectation_sums(q, {100})[0], 14.4307610646648066, 1e-12);
	auto many = expectation_sums(p, {10, 5, 1000});
	EXPECT_NEAR(many[2], 15.9689417211006898, 1e-12);
	EXPECT_LT(many[1], many[0]);
}

TEST(Expectation, TraceOfCompression)
{
	auto p = separable(2, {{{0, 0}, 1.5}, {{1, 0}, 0.3}},
	                   [](const Point &xi) { return cplx(std::pow(bracket(norm2(xi)), -2)); });
	auto T = quantize(p, 50);
	EXPECT_NEAR(T.matrix.trace().real(), expectation_sums(p, {50})[0], 1e-12);
}

TEST(SymbolIntegral, ClosedForm)
{
	// int_{|xi| <= R} <xi>^-1 = 2 asinh(R), R = sqrt(N^2 - 1)
	for (double N : {10.0, 1000.0}) {
		double R = std::sqrt(N * N - 1);
		EXPECT_NEAR(symbol_integral(inv_bracket(1), {N})[0], 2 * std::asinh(R), 1e-8);
	}
}

TEST(EigenVsExpectation, NoPaddingIsTraceIdentity)
{
	auto f = phi_family(-1, 1);
	auto p = separable(1, {{{0, 0}, 2.0}, {{1, 0}, 0.5}, {{-1, 0}, 0.5}},
	                   [f](const Point &xi) { return cplx(f(bracket(norm2(xi)))); });
	auto rows = eigen_vs_expectation(p, f, {64}, 1.0);
	EXPECT_LT(rows[0].delta, 1e-12);
	auto padded = eigen_vs_expectation(p, f, {64, 512}, 2.0);
	EXPECT_GT(padded[0].delta, 0);
	EXPECT_LT(padded[1].delta, padded[0].delta);
	EXPECT_THROW(eigen_vs_expectation(p, f, {64}, 0.5), std::invalid_argument);
}

TEST(EigenVsExpectation, DensePathTwoDimensions)
{
	auto f = phi_family(-1, 0);
	auto p = separable(2, {{{0, 0}, 1.0}, {{1, 0}, 0.2}, {{-1, 0}, 0.2}},
	                   [](const Point &xi) { return cplx(1 / (1 + norm2(xi))); });
	auto rows = eigen_vs_expectation(p, f, {40}, 1.0);
	EXPECT_LT(rows[0].delta, 1e-12);
}

TEST(DirichletKernel, ErrorIsBounded)
{
	std::vector<Point> xi, u;
	for (double x = 0; x <= 60; x += 0.5)
		xi.push_back({x, 0});
	for (double a : {0.25, 0.5, 0.75})
		u.push_back({a, 0});
	auto rows = dirichlet_kernel_error(1, {20, 40}, xi, u);
	ASSERT_EQ(rows.size(), 2u);
	for (auto &r : rows) {
		EXPECT_TRUE(std::isfinite(r.max_weighted_error));
		EXPECT_LT(r.max_weighted_error, 5);
	}
	EXPECT_NEAR(std::abs(SmoothBox{}.hat(0.0)), 1.2, 1e-15);
}
