// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include "dickenet/commands.hpp"
#include "dickenet/exact_circuits.hpp"
#include "dickenet/qubit_circuit.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

using namespace dickenet;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace
{

struct Outcome
{
	bool passed = false;
	std::string detail;
};

std::string fmt(double x)
{
	char buf[32];
	std::snprintf(buf, sizeof buf, "%.4g", x);
	return buf;
}

ScenarioConfig config(const std::string& name)
{
	return load_scenario(std::string(DICKENET_SOURCE_DIR) + "/configs/" + name + ".yaml");
}

DickeState random_excitation(int n, std::mt19937_64& rng)
{
	std::normal_distribution<double> g;
	ComplexVector v(n + 1);
	v[0] = 0.0;
	for(int l = 1; l <= n; ++l)
		v[l] = {g(rng), g(rng)};
	return DickeState::normalized(v);
}

/// Random potentials and evolution time giving phases of order one per excitation.
std::pair<GravityContext, double> random_phase_configuration(std::mt19937_64& rng)
{
	std::uniform_real_distribution<double> u(-1, 1);
	GravityContext ctx;
	ctx.omega_eg = 2 * pi * 0.5e15;
	ctx.potentials = std::make_pair(30 * u(rng), 30 * u(rng));
	ctx.reference = ReferenceNode::midpoint;
	const double t = 0.3 * (1 + u(rng));
	return {ctx, t};
}

int run_cli(const std::string& args)
{
	const std::string cmd = std::string(DICKENET_CLI) + " " + args + " > /dev/null 2>&1";
	const int status = std::system(cmd.c_str());
	return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
	std::ifstream is(p, std::ios::binary);
	std::stringstream ss;
	ss << is.rdbuf();
	return ss.str();
}

Outcome beam_splitter_oracle()
{
	std::mt19937_64 rng(1001);
	std::uniform_real_distribution<double> u(0, 2 * pi);
	double worst = 0;
	for(int draw = 0; draw < 200; ++draw)
	{
		const int n = 1 + draw % 12;
		const DickeState local = random_excitation(n, rng);
		const double phi0 = u(rng);
		const auto [ctx, t] = random_phase_configuration(rng);
		const TwoNodeState psi = evolve_gravity(delocalized_state(local, phi0), ctx, t);
		const double oracle = oracle_beam_splitter_parity(psi, default_n_max(EnsembleDims(n)));
		const double analytic = signal_nonlocal_analytic(mass_distribution(local), ctx, phi0, t);
		worst = std::max(worst, std::abs(oracle - analytic));
	}
	return {worst < 1e-10, "max |diff| " + fmt(worst) + " over 200 states, N <= 12"};
}

Outcome quadrature_oracle()
{
	std::mt19937_64 rng(1002);
	std::uniform_real_distribution<double> u(0, 2 * pi);
	double worst = 0;
	for(int draw = 0; draw < 200; ++draw)
	{
		const int n = 1 + draw % 12;
		const EnsembleDims d(n);
		const DickeState local = random_excitation(n, rng);
		// U_p fixes |0> and sends |1> to the excitation, so U_p^dagger decodes it
		const SymmetricUnitary up = amplification_unitary(local);
		const double phi0 = u(rng);
		const auto [ctx, t] = random_phase_configuration(rng);
		const TwoNodeState psi = evolve_gravity(apply_local(up, up, seed_state(d, {phi0, 0.0})), ctx, t);
		const double oracle = oracle_quadrature_product(psi, up.adjoint(), default_n_max(d));
		const double analytic = signal_local_analytic(mass_distribution(local), ctx, phi0, t);
		worst = std::max(worst, std::abs(oracle - analytic));
	}

	// <Psi_{l',s'}| q_A q_B |Psi_{l,s}> = (s/2) d_{l1} d_{ll'} d_{ss'}
	const int n_max = 8;
	const ComplexMatrix q = quadrature_matrix(n_max);
	ComplexMatrix qq(q.rows() * q.rows(), q.cols() * q.cols());
	for(int i = 0; i < q.rows(); ++i)
		for(int j = 0; j < q.cols(); ++j)
			qq.block(i * q.rows(), j * q.cols(), q.rows(), q.cols()) = q(i, j) * q;
	const auto fock = [&](const TwoNodeState& psi) {
		const ComplexMatrix c = TwoModeFockState::from_atomic(psi, n_max).amplitudes();
		ComplexVector v(c.size());
		for(int a = 0; a < c.rows(); ++a)
			for(int b = 0; b < c.cols(); ++b)
				v[a * c.cols() + b] = c(a, b);
		return v;
	};
	const EnsembleDims d(6);
	double worst_element = 0;
	for(int l = 1; l <= 6; ++l)
		for(int lp = 1; lp <= 6; ++lp)
			for(int sg : {-1, 1})
				for(int sp : {-1, 1})
				{
					const cplx value = fock(sector_basis_state(d, lp, sp)).dot(qq * fock(sector_basis_state(d, l, sg)));
					const double expected = (l == 1 && lp == 1 && sg == sp) ? 0.5 * sg : 0.0;
					worst_element = std::max(worst_element, std::abs(value - expected));
				}
	return {worst < 1e-10 && worst_element < 1e-12,
	        "max |diff| " + fmt(worst) + " over 200 states; matrix elements max |err| " + fmt(worst_element)};
}

Outcome double_twist_identity()
{
	double worst = 0;
	for(int n = 2; n <= 40; n += 2)
	{
		const EnsembleDims d(n);
		worst = std::max(worst, (u_dt(d).matrix() - u_dt_closed_form(d).matrix()).cwiseAbs().maxCoeff());
	}
	return {worst < 1e-10, "max entry |diff| " + fmt(worst) + " for even N in [2, 40]"};
}

Outcome variance_identity()
{
	double worst = 0;
	for(int n : {4, 20, 100})
	{
		const EnsembleDims d(n);
		for(int k = 0; k < 20; ++k)
		{
			const double alpha = pi * (k + 0.5) / 40.0;
			const DickeState tilted =
			    apply(rotation(d, CollectiveAxis::y_axis(), 2 * alpha), DickeState::basis(d, n - 1));
			const double expected = (3.0 * n - 2) / 4 * std::pow(std::sin(2 * alpha), 2);
			worst = std::max(worst, std::abs(energy_moments(tilted).variance - expected));
		}
	}
	return {worst < 1e-10, "max |diff| " + fmt(worst)};
}

Outcome fisher_information()
{
	double worst = 0;
	for(int n = 2; n <= 100; n += 2)
	{
		const EnsembleDims d(n);
		worst = std::max(worst, std::abs(qfi_differential_phase(noon_minus_one(d, {})) - double(n - 1) * (n - 1)));
		worst = std::max(worst, std::abs(qfi_differential_phase(noon_state(d)) - double(n) * n));
	}
	return {worst < 1e-8, "max |F_Q - expected| " + fmt(worst) + " for even N <= 100"};
}

Outcome decoherence_time_scale()
{
	GravityContext ctx;
	ctx.omega_eg = 2 * pi * 0.5e15;
	ctx.delta_z = 1.0;
	const int n = 100;
	// spread of the most tilted state, (3N - 2)/4 (hbar omega)^2
	const double de = ctx.hbar * ctx.omega_eg * std::sqrt((3.0 * n - 2) / 4);
	const double tau = decoherence_time(ctx, de);
	return {std::abs(tau - 0.5) / 0.5 < 0.05, "tau_dec " + fmt(tau) + " s against 0.5 s"};
}

Outcome tilted_decay_regression()
{
	const cli::ScenarioRun slow = cli::run_scenario(config("fig4_alpha_pi50"));
	const cli::ScenarioRun fast = cli::run_scenario(config("fig4_alpha_pi12"));
	if(!slow.metrics.envelope || !slow.metrics.tau_predicted)
		return {false, "no envelope fit for alpha = pi/50"};
	const double rel = slow.metrics.envelope->tau / *slow.metrics.tau_predicted - 1;
	const bool revival = fast.metrics.revival.detected;
	return {std::abs(rel) < 0.10 && revival, "pi/50: tau_fit " + fmt(slow.metrics.envelope->tau) + " s, predicted " +
	                                             fmt(*slow.metrics.tau_predicted) + " s (" + fmt(100 * rel) +
	                                             "%); pi/12 revival " + (revival ? "detected" : "missing") +
	                                             (revival ? " at " + fmt(fast.metrics.revival.onset_time) + " s" : "")};
}

struct TraceShape
{
	bool single_frequency = false;
	double omega = 0;
	bool revival = false;
};

TraceShape shape_of(const cli::ScenarioRun& run)
{
	TraceShape s;
	s.revival = run.metrics.revival.detected;
	if(run.metrics.peak)
	{
		s.omega = run.metrics.peak->omega;
		s.single_frequency = run.metrics.peak->residual_rms < 1e-6;
	}
	return s;
}

Outcome ideal_trace_shapes()
{
	const ScenarioConfig eig = config("fig3_eigenstate_ideal");
	const int m = std::get<sequential::Eigenstate>(std::get<ExactSpec>(eig.state).sequential).l;
	const GravityContext& g = eig.gravity;
	const double expected = m * g.omega_eg * g.g * g.delta_z / (g.c * g.c);
	const TraceShape e = shape_of(cli::run_scenario(eig));
	const double rel = std::abs(e.omega / expected - 1);
	const TraceShape c = shape_of(cli::run_scenario(config("fig3_clock_ideal")));
	const TraceShape h = shape_of(cli::run_scenario(config("fig3_coherent_ideal")));
	return {rel < 1e-6 && e.single_frequency && c.revival && !h.revival && !h.single_frequency,
	        "eigenstate omega rel err " + fmt(rel) + (e.single_frequency ? " single cosine" : " not single") +
	            "; clock revival " + (c.revival ? "yes" : "no") + "; coherent revival " + (h.revival ? "yes" : "no")};
}

Outcome variational_preparation()
{
	bool ok = true;
	std::string detail;
	for(const char* target : {"eigenstate", "clock", "coherent"})
	{
		const cli::ScenarioRun var = cli::run_scenario(config(std::string("fig3_") + target));
		const cli::ScenarioRun ideal = cli::run_scenario(config(std::string("fig3_") + target + "_ideal"));
		const TraceShape a = shape_of(var);
		const TraceShape b = shape_of(ideal);
		// the dominant frequency is checked where the ideal trace has one
		const bool same_frequency = !b.single_frequency || std::abs(a.omega / b.omega - 1) < 0.02;
		const bool shape = a.revival == b.revival && same_frequency;
		const bool pass = var.metrics.vacuum_fidelity >= 0.95 && var.metrics.leakage < 0.05 && shape;
		ok = ok && pass;
		detail += std::string(detail.empty() ? "" : "; ") + target + " vac " + fmt(var.metrics.vacuum_fidelity) +
		          " leak " + fmt(var.metrics.leakage) + " shape " + (shape ? "match" : "differs");
	}
	return {ok, detail};
}

Outcome sequential_backend()
{
	std::mt19937_64 rng(1010);
	std::uniform_real_distribution<double> u(0, 2 * pi);
	double worst = 0;
	for(int draw = 0; draw < 100; ++draw)
	{
		const int n = 3 + draw % 10;
		const int first = 1 + int(rng() % std::uint64_t(n - 1));
		const int k = 1 + int(rng() % std::uint64_t(n - first));
		sequential::Profile prof{first, {}};
		for(int j = 0; j < k; ++j)
			prof.thetas.push_back(u(rng));
		const RealVector brute = sequential_populations(simulate(sequential_circuit(n, prof), 1), n);
		worst = std::max(worst, (brute.head(n + 1) - profile_probabilities(n, prof)).cwiseAbs().maxCoeff());
		worst = std::max(worst, brute[n + 1]);
	}

	const RealVector eig = sequential_populations(simulate(sequential_circuit(10, sequential::Eigenstate{6}), 1), 10);
	const RealVector clock = sequential_populations(simulate(sequential_circuit(10, sequential::Clock{4, 8}), 1), 10);
	double worst_target = 0;
	for(int l = 0; l <= 11; ++l)
	{
		worst_target = std::max(worst_target, std::abs(eig[l] - (l == 6 ? 1.0 : 0.0)));
		worst_target = std::max(worst_target, std::abs(clock[l] - ((l == 4 || l == 8) ? 0.5 : 0.0)));
	}
	return {worst < 1e-12 && worst_target < 1e-12,
	        "product formula max |diff| " + fmt(worst) + "; eigenstate/clock max |err| " + fmt(worst_target)};
}

Outcome determinism()
{
	const fs::path dir = fs::temp_directory_path() / ("dickenet-acceptance-" + std::to_string(::getpid()));
	fs::create_directories(dir);
	const int first = run_cli("verify --full --report " + (dir / "a.txt").string());
	const int second = run_cli("verify --full --report " + (dir / "b.txt").string());
	const bool identical = slurp(dir / "a.txt") == slurp(dir / "b.txt") && !slurp(dir / "a.txt").empty();
	fs::remove_all(dir);
	int caught = 0;
	const auto names = mutation_names();
	for(const auto& name : names)
		if(run_cli("verify --mutate " + name) == 1)
			++caught;
	const bool ok = first == 0 && second == 0 && identical && caught == int(names.size());
	return {ok, std::string("two full runs ") + (first == 0 && second == 0 ? "pass" : "fail") +
	                (identical ? ", reports identical" : ", reports differ") + "; mutations caught " +
	                std::to_string(caught) + "/" + std::to_string(names.size())};
}

} // namespace

int main()
{
	struct Criterion
	{
		std::string name;
		std::function<Outcome()> run;
		/// Wall-clock limit in seconds, 0 for none.
		double budget = 0;
	};
	const std::vector<Criterion> criteria{
	    {"beam-splitter parity oracle", beam_splitter_oracle, 30},
	    {"quadrature-product oracle", quadrature_oracle, 30},
	    {"double-twist closed form", double_twist_identity, 10},
	    {"tilted variance identity", variance_identity},
	    {"quantum Fisher information", fisher_information},
	    {"decoherence time scale", decoherence_time_scale},
	    {"tilted-state decay and revival", tilted_decay_regression, 60},
	    {"ideal interference shapes", ideal_trace_shapes},
	    {"variational preparation", variational_preparation},
	    {"sequential qubit backend", sequential_backend},
	    {"determinism and fault detection", determinism},
	};

	int failed = 0;
	for(std::size_t i = 0; i < criteria.size(); ++i)
	{
		const Criterion& c = criteria[i];
		const auto start = std::chrono::steady_clock::now();
		Outcome o;
		try
		{
			o = c.run();
		}
		catch(const std::exception& e)
		{
			o = {false, std::string("exception: ") + e.what()};
		}
		const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
		if(c.budget > 0 && secs >= c.budget)
		{
			o.passed = false;
			o.detail += "; over the " + fmt(c.budget) + " s budget";
		}
		std::printf("criterion %2zu  %-32s %s  %s  (%.1f s)\n", i + 1, c.name.c_str(), o.passed ? "PASS" : "FAIL",
		            o.detail.c_str(), secs);
		std::fflush(stdout);
		if(!o.passed)
			++failed;
	}
	std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
	return failed == 0 ? 0 : 1;
}
