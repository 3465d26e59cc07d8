// dixmier-lab: command-line front end. Exit 0 pass, 2 verdict fail, 1 usage or input error.
#include <dixlab/io.hpp>

#include <CLI11.hpp>
#include <cblas.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

using namespace dixlab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int exit_pass = 0, exit_input = 1, exit_verdict = 2;

struct Common {
	std::string out = "dixlab_out";
	std::uint64_t seed = 0;
	double memory_cap_gib = 8;
	double memory_cap() const { return memory_cap_gib * 1024 * 1024 * 1024; }
};

void apply_thread_cap()
{
	const char *env = std::getenv("DIXMIER_LAB_THREADS");
	if (!env)
		return;
	char *end = nullptr;
	long n = std::strtol(env, &end, 10);
	if (end == env || *end != '\0' || n < 1)
		throw std::invalid_argument("DIXMIER_LAB_THREADS must be a positive integer");
	openblas_set_num_threads(int(n));
	Eigen::setNbThreads(int(n));
}

// every option of the active subcommand, as given or defaulted
json run_config(const CLI::App *sub, const std::vector<std::string> &argv)
{
	json opts = json::object();
	for (const CLI::Option *o : sub->get_options()) {
		if (o->get_name() == "--help" || o->get_name().empty())
			continue;
		auto res = o->results();
		std::string key = o->get_name();
		if (res.empty()) {
			opts[key] = o->get_default_str();
		} else if (res.size() == 1) {
			opts[key] = res[0];
		} else {
			opts[key] = res;
		}
	}
	return {{"schema", "1"}, {"command", sub->get_name()}, {"argv", argv}, {"options", opts}};
}

void write_json(const fs::path &p, const json &j) { std::ofstream(p) << j.dump(2) << "\n"; }

json header(const std::string &command, const std::string &anchor)
{
	return {{"schema", "1"}, {"command", command}, {"anchor", anchor}};
}

void write_two_columns(const fs::path &p, const std::string &h, const std::vector<double> &a,
                       const std::vector<double> &b)
{
	std::ofstream out(p);
	out << h << "\n";
	for (std::size_t i = 0; i < a.size(); ++i)
		out << fmt_double(a[i]) << "," << fmt_double(b[i]) << "\n";
}

std::vector<double> grid_from(double lo, double hi, int per_decade)
{
	if (!(lo > 0 && hi > lo))
		throw std::invalid_argument("grid needs 0 < t-min < t-max");
	return log_grid(lo, hi, per_decade);
}

Eigen::MatrixXcd load_matrix(const std::string &path, Eigen::Index rows, Eigen::Index cols)
{
	Eigen::MatrixXd M;
	if (fs::path(path).extension() == ".csv")
		M = read_matrix_csv(path);
	else {
		if (rows <= 0 || cols <= 0)
			throw std::invalid_argument("binary matrix " + path + " needs --rows and --cols");
		M = read_matrix_binary(path, rows, cols);
	}
	return M.cast<cplx>();
}

LogClassicalSymbol load_manifest(const std::string &path)
{
	std::ifstream in(path);
	if (!in)
		throw std::invalid_argument("cannot open manifest " + path);
	json j;
	try {
		in >> j;
	} catch (const json::exception &e) {
		throw std::invalid_argument("malformed manifest " + path + ": " + e.what());
	}
	return parse_manifest(j);
}

Eigen::MatrixXcd haar_unitary(int n, std::mt19937_64 &rng)
{
	std::normal_distribution<double> g;
	Eigen::MatrixXcd Z(n, n);
	for (int i = 0; i < n; ++i)
		for (int j = 0; j < n; ++j)
			Z(i, j) = cplx(g(rng), g(rng)) / std::sqrt(2.0);
	Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Z);
	Eigen::MatrixXcd Q = qr.householderQ();
	Eigen::MatrixXcd R = qr.matrixQR().triangularView<Eigen::Upper>();
	for (int i = 0; i < n; ++i)
		Q.col(i) *= R(i, i) / std::abs(R(i, i));
	return Q;
}

std::vector<std::pair<int, cplx>> parse_modes(const std::string &s)
{
	// "m:re[:im],m:re[:im]"
	std::vector<std::pair<int, cplx>> out;
	std::stringstream ss(s);
	std::string item;
	while (std::getline(ss, item, ',')) {
		std::vector<std::string> p;
		std::stringstream is(item);
		std::string f;
		while (std::getline(is, f, ':'))
			p.push_back(f);
		if (p.size() < 2 || p.size() > 3)
			throw std::invalid_argument("mode must be m:re or m:re:im, got " + item);
		try {
			out.push_back({std::stoi(p[0]), cplx(std::stod(p[1]), p.size() == 3 ? std::stod(p[2]) : 0.0)});
		} catch (const std::logic_error &) {
			throw std::invalid_argument("malformed mode " + item);
		}
	}
	return out;
}

} // namespace

int main(int argc, char **argv)
{
	CLI::App app{"dixmier-lab: numerical Dixmier traces, ideals and pseudodifferential operators"};
	app.require_subcommand(1);
	Common c;
	auto common = [&](CLI::App *s) {
		s->add_option("--out", c.out, "output directory")->capture_default_str();
		s->add_option("--seed", c.seed, "seed for randomized runs")->capture_default_str();
		s->add_option("--memory-cap-gib", c.memory_cap_gib, "dense matrix memory cap")->capture_default_str();
	};

	// regvar-check
	std::string family_key;
	double rho = 0, t_min = 10, t_max = 1e8;
	int per_decade = 4, smooth_K = 0;
	std::vector<double> lambdas{0.5, 2, 10};
	auto *rv = app.add_subcommand("regvar-check", "regular / smooth variation deviation table");
	rv->add_option("--family", family_key, "family key")->required();
	rv->add_option("--rho", rho, "index")->capture_default_str();
	rv->add_option("--lambdas", lambdas, "scaling factors")->capture_default_str();
	rv->add_option("--t-min", t_min)->capture_default_str();
	rv->add_option("--t-max", t_max)->capture_default_str();
	rv->add_option("--per-decade", per_decade)->capture_default_str();
	rv->add_option("--smooth", smooth_K, "also check derivative ratios up to this order")->capture_default_str();
	common(rv);

	// karamata
	double alpha = 1, beta = 1, tol = -1;
	std::string side = "below";
	int terms = 40;
	auto *ka = app.add_subcommand("karamata", "Karamata integral and dyadic limits");
	ka->add_option("--family", family_key)->required();
	ka->add_option("--alpha", alpha)->capture_default_str();
	ka->add_option("--beta", beta)->capture_default_str();
	ka->add_option("--side", side, "below | above | partial | tail")
	    ->check(CLI::IsMember({"below", "above", "partial", "tail"}))
	    ->capture_default_str();
	ka->add_option("--t-max", t_max)->capture_default_str();
	ka->add_option("--per-decade", per_decade)->capture_default_str();
	ka->add_option("--terms", terms, "dyadic terms")->capture_default_str();
	ka->add_option("--tol", tol, "relative tolerance (default 0.1 integral, 0.02 dyadic)");
	common(ka);

	// property-w
	std::string expect;
	auto *pw = app.add_subcommand("property-w", "property (W) table");
	pw->add_option("--family", family_key)->required();
	pw->add_option("--t-max", t_max)->capture_default_str();
	pw->add_option("--expect", expect, "both | w1 | w2 | none")->check(CLI::IsMember({"both", "w1", "w2", "none"}));
	common(pw);

	// ideal-norms
	std::string input, matrix_path;
	Eigen::Index rows = 0, cols = 0;
	double q = 0;
	auto *in = app.add_subcommand("ideal-norms", "weak, Lorentz and convexified quasinorms");
	in->add_option("--family", family_key)->required();
	auto *in_seq = in->add_option("--input", input, "single-column sequence CSV");
	in->add_option("--matrix", matrix_path, "matrix CSV or binary float64")->excludes(in_seq);
	in->add_option("--rows", rows);
	in->add_option("--cols", cols);
	in->add_option("--q", q, "convexification exponent");
	common(in);

	// trace-estimate
	int k = 0;
	double trace_tol = 0.02;
	bool selfadjoint = false;
	auto *te = app.add_subcommand("trace-estimate", "Dixmier trace of a sequence");
	te->add_option("--input", input, "sequence CSV")->required();
	te->add_option("--k", k, "normalizer log^{k+1}(e+n)/(k+1)")->capture_default_str();
	te->add_option("--tol", trace_tol)->capture_default_str();
	te->add_flag("--selfadjoint", selfadjoint, "input is a list of real eigenvalues");
	common(te);

	// zeta
	std::vector<double> s_grid{1.5, 1.2, 1.1};
	std::vector<double> n_grid{1e4, 1e5, 1e6};
	double M = 1e6, zeta_tol = 0.01;
	std::string zfamily = "loglin";
	auto *ze = app.add_subcommand("zeta", "zeta-function route");
	ze->add_option("--family", zfamily, "loglin | csv")->check(CLI::IsMember({"loglin", "csv"}))->capture_default_str();
	ze->add_option("--s", s_grid, "exponents (loglin)")->capture_default_str();
	ze->add_option("--M", M, "stored terms (loglin)")->capture_default_str();
	ze->add_option("--input", input, "sequence CSV (csv)");
	ze->add_option("--k", k)->capture_default_str();
	ze->add_option("--n", n_grid, "grid for 1 + 1/log n (csv)")->capture_default_str();
	ze->add_option("--tol", zeta_tol)->capture_default_str();
	common(ze);

	// quantize
	int d = 1;
	double N = 16;
	std::string manifest;
	auto *qu = app.add_subcommand("quantize", "truncated toroidal quantization, dense export");
	auto *qf = qu->add_option("--family", family_key, "pow:s | bracket:s | logbracket:s:i");
	qu->add_option("--manifest", manifest, "log-classical JSON manifest")->excludes(qf);
	qu->add_option("--d", d)->capture_default_str();
	qu->add_option("--N", N)->capture_default_str();
	common(qu);

	// connes-verify
	double n_max = 1e6, gap_tol = -1;
	std::string region = "angle";
	std::vector<double> eigen_N;
	auto *cv = app.add_subcommand("connes-verify", "lattice trace against the residue prediction");
	auto *cf = cv->add_option("--family", family_key);
	cv->add_option("--manifest", manifest)->excludes(cf);
	cv->add_option("--d", d)->capture_default_str();
	cv->add_option("--k", k)->capture_default_str();
	cv->add_option("--n", n_max)->capture_default_str();
	cv->add_option("--tol", trace_tol, "trace convergence tolerance")->capture_default_str();
	cv->add_option("--gap-tol", gap_tol, "allowed relative gap (default 0.02 for k=0, 0.1 otherwise)");
	cv->add_option("--region", region)->check(CLI::IsMember({"angle", "ball"}))->capture_default_str();
	cv->add_option("--eigen-N", eigen_N, "also compare eigenvalue sums at these N");
	common(cv);

	// modulation
	std::string G_path, V_path;
	int random_n = 0;
	double gamma = 1.25, p_weak = 0;
	int points = 24;
	std::string mfamily = "phi:-1:0";
	auto *mo = app.add_subcommand("modulation", "strong, spectral and weak modulation");
	auto *mg = mo->add_option("--G", G_path, "matrix file");
	mo->add_option("--V", V_path, "positive reference matrix file")->needs(mg);
	mo->add_option("--rows", rows);
	mo->add_option("--cols", cols);
	mo->add_option("--random", random_n, "seeded pair V = U diag(phi) U*, G = W diag(phi^gamma) U*")->excludes(mg);
	mo->add_option("--gamma", gamma)->capture_default_str();
	mo->add_option("--family", mfamily)->capture_default_str();
	mo->add_option("--p", p_weak, "also run the weak check at this p >= 1");
	mo->add_option("--points", points, "t-grid size")->capture_default_str();
	common(mo);

	// dirac-demo
	double dN = 4096, dtol = 0.05, padding = 2;
	std::string modes = "1:0.5,-1:0.5";
	auto *di = app.add_subcommand("dirac-demo", "commutator traces for a(x) on the circle");
	di->add_option("--N", dN)->capture_default_str();
	di->add_option("--modes", modes, "Fourier modes of a, m:re[:im] comma separated")->capture_default_str();
	di->add_option("--tol", dtol)->capture_default_str();
	di->add_option("--padding", padding)->capture_default_str();
	common(di);

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError &e) {
		int rc = app.exit(e);
		return rc == 0 ? 0 : exit_input;
	}

	const CLI::App *sub = app.get_subcommands().front();
	std::vector<std::string> args(argv, argv + argc);
	args.erase(args.begin());
	try {
		apply_thread_cap();
		fs::path out(c.out);
		fs::create_directories(out);
		write_json(out / "run_config.json", run_config(sub, args));
		std::string cmd = sub->get_name();
		json j;
		int rc = exit_pass;

		if (cmd == "regvar-check") {
			auto f = family(family_key);
			auto grid = grid_from(t_min, t_max, per_decade);
			auto r = check_regular_variation(f, rho, lambdas, grid);
			write_deviation_csv(out / "deviation.csv", r);
			j = header(cmd, "regular variation of the normalizing function");
			j["family"] = family_key;
			j["rho"] = rho;
			j["max_deviation"] = r.max_deviation;
			j["shrinking"] = r.shrinking;
			json trend = json::object();
			for (auto &[lam, v] : r.trend)
				trend[fmt_double(lam)] = v;
			j["trend"] = trend;
			bool ok = r.shrinking;
			if (smooth_K > 0) {
				auto s = check_smooth_variation(f, rho, smooth_K, grid);
				write_deviation_csv(out / "smooth_deviation.csv", s);
				j["smooth_shrinking"] = s.shrinking;
				j["smooth_max_deviation"] = s.max_deviation;
				ok = ok && s.shrinking;
			}
			j["verdict"] = ok ? "pass" : "fail";
			rc = ok ? exit_pass : exit_verdict;
		} else if (cmd == "karamata") {
			auto f = family(family_key);
			Side sd = side == "below" ? Side::below : side == "above" ? Side::above : side == "partial" ? Side::partial : Side::tail;
			bool dyadic = sd == Side::partial || sd == Side::tail;
			auto r = dyadic ? karamata_dyadic_limit(f, alpha, beta, sd, terms)
			                : karamata_integral_limit(f, alpha, beta, sd, grid_from(10, t_max, per_decade));
			double t = tol > 0 ? tol : (dyadic ? 0.02 : 0.1);
			write_two_columns(out / "limit.csv", dyadic ? "n,value" : "t,value", r.grid, r.values);
			j = header(cmd, dyadic ? "Karamata-type limit for dyadic sums" : "Karamata-type limit for integrals");
			j["family"] = family_key;
			j["alpha"] = alpha;
			j["beta"] = beta;
			j["side"] = side;
			j["tol"] = t;
			j["report"] = to_json(r);
			bool ok = r.rel_error_extrapolated <= t;
			j["verdict"] = ok ? "pass" : "fail";
			rc = ok ? exit_pass : exit_verdict;
		} else if (cmd == "property-w") {
			auto w = check_property_w(family(family_key), grid_from(10, t_max, 10));
			write_two_columns(out / "ratio.csv", "t,ratio", w.t, w.ratio);
			std::string cls = w.w1 && w.w2 ? "both" : w.w1 ? "w1" : w.w2 ? "w2" : "none";
			j = header(cmd, "property (W): phi^{-1}(1/t) against t^2 phi(t)");
			j["family"] = family_key;
			j["w1"] = w.w1;
			j["w2"] = w.w2;
			j["C1"] = w.C1;
			j["C2"] = w.C2;
			j["drift"] = w.drift;
			j["classification"] = cls;
			if (!expect.empty()) {
				j["expected"] = expect;
				rc = cls == expect ? exit_pass : exit_verdict;
			}
		} else if (cmd == "ideal-norms") {
			auto f = family(family_key);
			SingularSequence seq;
			if (!input.empty())
				seq = SingularSequence::from(read_sequence_csv(input));
			else if (!matrix_path.empty())
				seq = singular_values(load_matrix(matrix_path, rows, cols));
			else
				throw std::invalid_argument("ideal-norms needs --input or --matrix");
			write_sequence_csv(out / "singular_values.csv", seq.values, "mu");
			auto w = weak_quasinorm(seq, f), l = lorentz_norm(seq, f);
			j = header(cmd, "weak and Lorentz ideal quasinorms");
			j["family"] = family_key;
			j["length"] = seq.size();
			j["weak"] = {{"value", w.value}, {"argmax", w.argmax}};
			j["lorentz"] = {{"value", l.value}, {"argmax", l.argmax}};
			if (q > 0) {
				auto cq = convexified_quasinorm(seq, f, q);
				j["convexified"] = {{"q", q}, {"value", cq.value}, {"argmax", cq.argmax}};
			}
			bool ok = std::isfinite(w.value) && std::isfinite(l.value);
			j["verdict"] = ok ? "pass" : "fail";
			rc = ok ? exit_pass : exit_verdict;
		} else if (cmd == "trace-estimate") {
			auto seq = read_sequence_csv(input);
			auto f = log_normalizer(k);
			auto r = selfadjoint ? dixmier_selfadjoint(seq, f, trace_tol) : dixmier_sequence(seq, f, trace_tol);
			write_two_columns(out / "partial_sums.csv", "n,c", r.n, r.c);
			j = header(cmd, "Dixmier trace of a Phi-normalized sequence");
			j["k"] = k;
			j["trace"] = to_json(r);
			j["verdict"] = r.converged ? "converged" : "ambiguous";
			rc = r.converged ? exit_pass : exit_verdict;
		} else if (cmd == "zeta") {
			j = header(cmd, "zeta-function formula for Dixmier traces");
			if (zfamily == "loglin") {
				if (!(M >= 1))
					throw std::invalid_argument("--M must be at least 1");
				auto z = zeta_loglin(s_grid, std::size_t(M), k > 0 ? k : 1);
				bool ok = true;
				json rows_j = json::array();
				std::ofstream csv(out / "zeta.csv");
				csv << "s,sum,benchmark,relative_error,scaled\n";
				for (std::size_t i = 0; i < z.s.size(); ++i) {
					double e = std::abs(z.raw_sums[i] / z.benchmark[i] - 1);
					ok = ok && e <= zeta_tol;
					rows_j.push_back({{"s", z.s[i]},
					                  {"sum", z.raw_sums[i]},
					                  {"benchmark", z.benchmark[i]},
					                  {"relative_error", e},
					                  {"scaled", z.values[i]}});
					csv << fmt_double(z.s[i]) << "," << fmt_double(z.raw_sums[i]) << ","
					    << fmt_double(z.benchmark[i]) << "," << fmt_double(e) << "," << fmt_double(z.values[i]) << "\n";
				}
				j["family"] = "loglin";
				j["tol"] = zeta_tol;
				j["rows"] = rows_j;
				j["verdict"] = ok ? "pass" : "fail";
				rc = ok ? exit_pass : exit_verdict;
			} else {
				if (input.empty())
					throw std::invalid_argument("zeta --family csv needs --input");
				auto seq = read_sequence_csv(input);
				std::sort(seq.begin(), seq.end(), std::greater<>());
				auto z = zeta_estimate(seq, k, n_grid);
				write_two_columns(out / "zeta.csv", "n,value", n_grid, z);
				j["family"] = "csv";
				j["k"] = k;
				j["n"] = n_grid;
				j["values"] = z;
			}
		} else if (cmd == "quantize") {
			Symbol p;
			if (!manifest.empty()) {
				p = load_manifest(manifest).to_symbol(manifest);
			} else if (!family_key.empty()) {
				p = symbol_family(family_key, d, 0).symbol;
			} else {
				throw std::invalid_argument("quantize needs --family or --manifest");
			}
			auto T = quantize(p, N, c.memory_cap());
			export_operator((out / "operator").string(), T);
			j = header(cmd, "toroidal quantization of a symbol");
			j["d"] = T.d;
			j["N"] = T.N;
			j["rows"] = T.matrix.rows();
			j["symbol"] = T.symbol_ref;
		} else if (cmd == "connes-verify") {
			Symbol lattice_symbol;
			LogClassicalSymbol principal;
			if (!manifest.empty()) {
				principal = load_manifest(manifest);
				lattice_symbol = principal.to_symbol(manifest);
			} else if (!family_key.empty()) {
				auto ns = symbol_family(family_key, d, k);
				lattice_symbol = ns.symbol;
				principal = ns.principal;
			} else {
				throw std::invalid_argument("connes-verify needs --family or --manifest");
			}
			double gt = gap_tol > 0 ? gap_tol : (principal.k == 0 ? 0.02 : 0.10);
			for (double e : eigen_N) {
				double rows_needed = double(lattice_count(principal.d, e * (principal.d == 1 ? 2 : 4)));
				if (!lattice_symbol.coeff && rows_needed * rows_needed * 16 > c.memory_cap())
					throw std::length_error("eigen route at N=" + fmt_double(e) + " exceeds the memory cap");
			}
			auto r = connes_verify(lattice_symbol, principal, n_max, trace_tol,
			                       region == "ball" ? Region::ball : Region::angle, eigen_N);
			std::ofstream csv(out / "convergence.csv");
			csv << "n,normalized,relative_gap\n";
			for (auto &row : r.table)
				csv << fmt_double(row.n) << "," << fmt_double(row.normalized) << "," << fmt_double(row.relative_gap)
				    << "\n";
			j = header(cmd, "Connes trace theorem for log-classical operators on the torus");
			j["d"] = principal.d;
			j["k"] = principal.k;
			j["n"] = n_max;
			j["region"] = region;
			j["gap_tol"] = gt;
			j["report"] = to_json(r);
			bool ok = r.gap <= gt;
			j["verdict"] = ok ? "pass" : "fail";
			rc = ok ? exit_pass : exit_verdict;
		} else if (cmd == "modulation") {
			auto f = family(mfamily);
			Eigen::MatrixXcd G, V;
			if (random_n > 0) {
				std::mt19937_64 rng(c.seed);
				auto U = haar_unitary(random_n, rng), W = haar_unitary(random_n, rng);
				Eigen::VectorXd v(random_n), g(random_n);
				for (int i = 0; i < random_n; ++i) {
					v(i) = f(i);
					g(i) = std::pow(f(i), gamma);
				}
				V = U * v.asDiagonal() * U.adjoint();
				G = W * g.asDiagonal() * U.adjoint();
			} else if (!G_path.empty() && !V_path.empty()) {
				G = load_matrix(G_path, rows, cols);
				V = load_matrix(V_path, G.cols(), G.cols());
			} else {
				throw std::invalid_argument("modulation needs --G and --V, or --random n");
			}
			ReferencePair pair(G, V);
			auto grid = pair.default_t_grid(points);
			auto a = strong_modulation_norm(pair, f, grid), b = spectral_modulation_norm(pair, f, grid);
			write_two_columns(out / "strong.csv", "t,value", a.t, a.values);
			write_two_columns(out / "spectral.csv", "t,value", b.t, b.values);
			j = header(cmd, "Laplacian modulated operators: strong and spectral characterizations");
			j["family"] = mfamily;
			j["strong"] = to_json(a);
			j["spectral"] = to_json(b);
			j["agree"] = a.finite == b.finite;
			j["ratio"] = b.sup_estimate > 0 ? a.sup_estimate / b.sup_estimate : 0.0;
			if (p_weak >= 1) {
				auto w = weak_modulation_check(pair, f, p_weak);
				j["weak"] = {{"p", p_weak}, {"q", std::isinf(w.q) ? json("inf") : json(w.q)}, {"norm", w.norm}};
			}
			bool ok = a.finite && b.finite;
			j["verdict"] = ok ? "modulated" : (a.finite == b.finite ? "not modulated" : "inconsistent");
			rc = ok ? exit_pass : exit_verdict;
		} else if (cmd == "dirac-demo") {
			auto r = dirac_log_demo(parse_modes(modes), dN, log_normalizer(0), log_normalizer(1), padding, dtol);
			j = header(cmd, "Dixmier traces of commutators with Dirac-type operators on the circle");
			j["N"] = dN;
			j["rows"] = r.rows;
			j["N_eig"] = r.N_eig;
			j["first"] = to_json(r.first);
			j["second"] = to_json(r.second);
			j["first_linear"] = {{"hermitian", to_json(r.first_real)}, {"imaginary", to_json(r.first_imag)}};
			j["second_linear"] = {{"hermitian", to_json(r.second_real)}, {"imaginary", to_json(r.second_imag)}};
			j["ratio"] = r.ratio;
			j["symbol_prediction"] = r.symbol_prediction;
			j["degenerate"] = r.degenerate;
			bool ok = !r.degenerate && r.first.converged && r.second.converged && std::abs(r.ratio - 1) <= dtol;
			j["verdict"] = ok ? "pass" : "fail";
			rc = ok ? exit_pass : exit_verdict;
		}
		write_json(out / "summary.json", j);
		std::cout << j.dump(2) << "\n";
		return rc;
	} catch (const std::exception &e) {
		std::cerr << "error: " << e.what() << "\n";
		return exit_input;
	}
}
