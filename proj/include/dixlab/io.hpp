#pragma once

#include <bit>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "logclassical.hpp"
#include "modulated.hpp"
#include "regvar.hpp"
#include "torus_op.hpp"
#include "traces.hpp"

namespace dixlab {

static_assert(std::endian::native == std::endian::little, "binary formats assume little-endian hosts");

inline std::string fmt_double(double v)
{
	std::ostringstream os;
	os.imbue(std::locale::classic());
	os << std::setprecision(17) << v;
	return os.str();
}

// single-column CSV; a header line that does not parse as a number is skipped
inline std::vector<double> read_sequence_csv(const std::string &path)
{
	std::ifstream in(path);
	if (!in)
		throw std::invalid_argument("cannot open " + path);
	std::vector<double> v;
	std::string line;
	bool first = true;
	while (std::getline(in, line)) {
		if (line.empty())
			continue;
		auto comma = line.find(',');
		std::string cell = line.substr(0, comma);
		std::istringstream is(cell);
		is.imbue(std::locale::classic());
		double x;
		if (!(is >> x)) {
			if (first) {
				first = false;
				continue;
			}
			throw std::invalid_argument("malformed number in " + path + ": " + cell);
		}
		first = false;
		v.push_back(x);
	}
	return v;
}

inline void write_sequence_csv(const std::string &path, const std::vector<double> &v,
                               const std::string &header = "value")
{
	std::ofstream out(path);
	out << header << "\n";
	for (double x : v)
		out << fmt_double(x) << "\n";
}

inline void write_deviation_csv(const std::string &path, const DeviationReport &r)
{
	std::ofstream out(path);
	out << "t,lambda_or_n,value,target,deviation\n";
	for (auto &row : r.rows)
		out << fmt_double(row.t) << "," << fmt_double(row.lambda_or_n) << "," << fmt_double(row.value) << ","
		    << fmt_double(row.target) << "," << fmt_double(row.deviation) << "\n";
}

inline void write_matrix_binary(const std::string &path, const Eigen::MatrixXcd &M)
{
	std::ofstream out(path, std::ios::binary);
	for (Eigen::Index r = 0; r < M.rows(); ++r)
		for (Eigen::Index c = 0; c < M.cols(); ++c) {
			double re = M(r, c).real(), im = M(r, c).imag();
			out.write(reinterpret_cast<const char *>(&re), sizeof re);
			out.write(reinterpret_cast<const char *>(&im), sizeof im);
		}
}

// row-major little-endian float64, rows x cols
inline Eigen::MatrixXd read_matrix_binary(const std::string &path, Eigen::Index rows, Eigen::Index cols)
{
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw std::invalid_argument("cannot open " + path);
	Eigen::MatrixXd M(rows, cols);
	for (Eigen::Index r = 0; r < rows; ++r)
		for (Eigen::Index c = 0; c < cols; ++c) {
			double v;
			if (!in.read(reinterpret_cast<char *>(&v), sizeof v))
				throw std::invalid_argument("short matrix file " + path);
			M(r, c) = v;
		}
	return M;
}

inline Eigen::MatrixXd read_matrix_csv(const std::string &path)
{
	std::ifstream in(path);
	if (!in)
		throw std::invalid_argument("cannot open " + path);
	std::vector<std::vector<double>> rows;
	std::string line;
	while (std::getline(in, line)) {
		if (line.empty())
			continue;
		std::vector<double> row;
		std::stringstream ss(line);
		ss.imbue(std::locale::classic());
		std::string cell;
		while (std::getline(ss, cell, ',')) {
			std::istringstream is(cell);
			is.imbue(std::locale::classic());
			double x;
			if (!(is >> x))
				throw std::invalid_argument("malformed matrix entry in " + path);
			row.push_back(x);
		}
		if (!rows.empty() && row.size() != rows[0].size())
			throw std::invalid_argument("ragged matrix in " + path);
		rows.push_back(row);
	}
	Eigen::MatrixXd M(Eigen::Index(rows.size()), rows.empty() ? 0 : Eigen::Index(rows[0].size()));
	for (std::size_t r = 0; r < rows.size(); ++r)
		for (std::size_t c = 0; c < rows[r].size(); ++c)
			M(Eigen::Index(r), Eigen::Index(c)) = rows[r][c];
	return M;
}

inline void export_operator(const std::string &prefix, const TruncatedOperator &T)
{
	write_matrix_binary(prefix + ".bin", T.matrix);
	nlohmann::json h = {{"d", T.d},
	                    {"N", T.N},
	                    {"ordering", "lex"},
	                    {"rows", T.matrix.rows()},
	                    {"cols", T.matrix.cols()},
	                    {"dtype", "complex128"},
	                    {"layout", "row-major little-endian"},
	                    {"symbol", T.symbol_ref}};
	h["lattice"] = nlohmann::json::array();
	for (auto &k : T.points)
		h["lattice"].push_back(T.d == 1 ? nlohmann::json(k[0]) : nlohmann::json::array({k[0], k[1]}));
	std::ofstream(prefix + ".json") << h.dump(2) << "\n";
}

inline nlohmann::json to_json(const TraceEstimate &t)
{
	return {{"n", t.n},
	        {"c", t.c},
	        {"liminf", t.liminf},
	        {"limsup", t.limsup},
	        {"cesaro", t.cesaro},
	        {"verdict", t.converged ? "converged" : "ambiguous"},
	        {"tol", t.tol},
	        {"window", {t.window_begin, t.window_end}},
	        {"extrapolated_limit", t.limit},
	        {"log_correction_coefficient", t.coefficient},
	        {"detrended_spread", t.residual_spread}};
}

inline nlohmann::json to_json(const LimitReport &r)
{
	return {{"grid", r.grid},
	        {"values", r.values},
	        {"target", r.target},
	        {"estimate", r.estimate},
	        {"relative_error", r.rel_error},
	        {"extrapolated", r.extrapolated},
	        {"relative_error_extrapolated", r.rel_error_extrapolated},
	        {"correction_coefficients", r.correction},
	        {"deviation_slope", r.deviation_slope}};
}

inline nlohmann::json to_json(const ModulationReport &r)
{
	return {{"t", r.t},
	        {"values", r.values},
	        {"sup_estimate", r.sup_estimate},
	        {"tail_slope", r.tail_slope},
	        {"verdict", r.finite ? "finite" : "diverging"}};
}

inline nlohmann::json to_json(const ResidueReport &r)
{
	nlohmann::json rows = nlohmann::json::array();
	for (auto &row : r.table)
		rows.push_back({{"n", row.n}, {"normalized", row.normalized}, {"relative_gap", row.relative_gap}});
	nlohmann::json j = {{"res_k", {r.residue.res_k.real(), r.residue.res_k.imag()}},
	                    {"raw_cosphere_integral", {r.residue.raw.real(), r.residue.raw.imag()}},
	                    {"dixmier_prediction", r.residue.prediction.real()},
	                    {"trace", to_json(r.trace)},
	                    {"convergence_table", rows},
	                    {"gap", r.gap},
	                    {"gap_cesaro", r.gap_cesaro},
	                    {"gap_last", r.gap_last},
	                    {"status", r.status}};
	if (!r.eigen_route.empty()) {
		nlohmann::json e = nlohmann::json::array();
		for (auto &c : r.eigen_route)
			e.push_back({{"N", c.N}, {"N_eig", c.N_eig}, {"delta", c.delta}});
		j["eigen_route"] = e;
	}
	return j;
}

} // namespace dixlab
