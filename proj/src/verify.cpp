#include "dickenet/verify.hpp"

#include "dickenet/exact_circuits.hpp"
#include "dickenet/qubit_circuit.hpp"
#include "dickenet/scenario.hpp"
#include "dickenet/varprep.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace dickenet
{

namespace
{

using std::numbers::pi;
using kernels::Exec;

struct Limits
{
	int oracle_n;      // largest N in oracle equivalences
	int closed_n;      // largest N in closed-form identities
	int oracle_draws;  // random states per oracle check
	int qubit_n;       // largest register for the product formula check
	int theta_draws;
};

Limits limits(VerifyLevel level)
{
	if(level == VerifyLevel::full)
		return {12, 40, 200, 12, 100};
	return {8, 8, 50, 8, 20};
}

std::string sci(double x)
{
	char buf[32];
	std::snprintf(buf, sizeof buf, "%.3e", x);
	return buf;
}

CheckResult bounded(std::string name, double worst, double tol)
{
	return {std::move(name), worst < tol, "max deviation " + sci(worst) + " (tol " + sci(tol) + ")"};
}

class Rng
{
public:
	explicit Rng(std::uint64_t seed) : eng_{seed} {}

	double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
	int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }

	CollectiveAxis axis()
	{
		return CollectiveAxis::from_angles(std::acos(uniform(-1.0, 1.0)), uniform(0.0, 2.0 * pi));
	}

	/// Random excitation with psi_0 = 0 and random complex amplitudes.
	DickeState excitation(int n)
	{
		ComplexVector v = ComplexVector::Zero(n + 1);
		for(int l = 1; l <= n; ++l)
			v[l] = std::polar(uniform(0.0, 1.0), uniform(0.0, 2.0 * pi));
		return DickeState::normalized(std::move(v));
	}

	GravityContext context()
	{
		GravityContext ctx;
		ctx.omega_eg = 2.0 * pi * 0.5e15;
		ctx.potentials = std::make_pair(uniform(-30.0, 30.0), uniform(-30.0, 30.0));
		ctx.reference = ReferenceNode::midpoint;
		return ctx;
	}

private:
	std::mt19937_64 eng_;
};

ComplexMatrix expm_oracle(const ComplexMatrix& generator)
{
	// Pade scaling-and-squaring, independent of the eigendecomposition path
	return generator.exp();
}

double max_abs(const ComplexMatrix& m)
{
	return m.cwiseAbs().maxCoeff();
}

// dicke-core ---------------------------------------------------------------

CheckResult check_unitarity(const Limits& lim)
{
	Rng rng(11);
	double worst = 0.0;
	for(int n = 1; n <= lim.closed_n; ++n)
	{
		const EnsembleDims d(n);
		const CollectiveAxis a = rng.axis();
		worst = std::max(worst, unitarity_defect(rotation(d, a, rng.uniform(-2 * pi, 2 * pi)).matrix()));
		worst = std::max(worst, unitarity_defect(oat(d, a, rng.uniform(-2 * pi, 2 * pi)).matrix()));
	}
	return bounded("dicke.gate_unitarity", worst, 1e-10);
}

CheckResult check_commutator(const Limits& lim)
{
	double worst = 0.0;
	for(int n = 1; n <= lim.closed_n; ++n)
	{
		const EnsembleDims d(n);
		const ComplexMatrix x = collective_spin(d, CollectiveAxis::x_axis());
		const ComplexMatrix y = collective_spin(d, CollectiveAxis::y_axis());
		const ComplexMatrix z = collective_spin(d, CollectiveAxis::z_axis());
		worst = std::max(worst, max_abs(x * y - y * x - cplx(0, 1) * z));
	}
	return bounded("dicke.commutator_xy", worst, 1e-12);
}

CheckResult check_casimir(const Limits& lim)
{
	double worst = 0.0;
	for(int n = 1; n <= lim.closed_n; ++n)
	{
		const EnsembleDims d(n);
		const ComplexMatrix x = collective_spin(d, CollectiveAxis::x_axis());
		const ComplexMatrix y = collective_spin(d, CollectiveAxis::y_axis());
		const ComplexMatrix z = collective_spin(d, CollectiveAxis::z_axis());
		const double s = d.spin();
		worst = std::max(worst, max_abs(x * x + y * y + z * z - s * (s + 1) * ComplexMatrix::Identity(d.dim(), d.dim())));
	}
	return bounded("dicke.casimir", worst, 1e-10);
}

CheckResult check_rotation_covariance(const Limits& lim)
{
	Rng rng(12);
	double worst = 0.0;
	for(int trial = 0; trial < 20; ++trial)
	{
		const EnsembleDims d(rng.integer(1, lim.closed_n));
		const CollectiveAxis n = rng.axis();
		const CollectiveAxis m = rng.axis();
		const double theta = rng.uniform(-pi, pi);
		const ComplexMatrix r = rotation(d, n, theta).matrix();
		// R^dagger S_m R = S_{m'} with m' = m rotated by -theta about n
		const Eigen::Vector3d nv(n.x(), n.y(), n.z());
		const Eigen::Vector3d mv(m.x(), m.y(), m.z());
		const Eigen::Vector3d mr = Eigen::AngleAxisd(-theta, nv) * mv;
		const ComplexMatrix lhs = r.adjoint() * collective_spin(d, m) * r;
		worst = std::max(worst, max_abs(lhs - collective_spin(d, {mr.x(), mr.y(), mr.z()})));
	}
	return bounded("dicke.rotation_covariance", worst, 1e-9);
}

CheckResult check_exponential_oracle(const Limits& lim)
{
	Rng rng(13);
	double worst = 0.0;
	for(int n = 1; n <= std::min(lim.closed_n, 24); ++n)
	{
		const EnsembleDims d(n);
		const CollectiveAxis a = rng.axis();
		const double t = rng.uniform(-pi, pi);
		const ComplexMatrix s = collective_spin(d, a);
		worst = std::max(worst, max_abs(rotation(d, a, t).matrix() - expm_oracle(cplx(0, -t) * s)));
		worst = std::max(worst, max_abs(oat(d, a, t).matrix() - expm_oracle(cplx(0, -t) * s * s)));
	}
	return bounded("dicke.exp_vs_scaling_squaring", worst, 1e-10);
}

CheckResult check_apply_norm(const Limits& lim)
{
	Rng rng(14);
	double worst = 0.0;
	for(int n = 1; n <= lim.closed_n; ++n)
	{
		const EnsembleDims d(n);
		const DickeState psi = rng.excitation(n);
		const DickeState out = apply(oat(d, rng.axis(), rng.uniform(0, pi)) * rotation(d, rng.axis(), 1.3), psi);
		worst = std::max(worst, std::abs(out.amplitudes().norm() - 1.0));
	}
	return bounded("dicke.apply_norm", worst, 1e-12);
}

CheckResult check_rotated_variance(const Limits& lim)
{
	Rng rng(15);
	double worst = 0.0;
	for(int n = 2; n <= lim.closed_n; ++n)
	{
		const EnsembleDims d(n);
		const double beta = rng.uniform(0, pi);
		const double var =
		    energy_moments(apply(rotation(d, CollectiveAxis::y_axis(), beta), DickeState::basis(d, n - 1))).variance;
		const double s = d.spin();
		worst = std::max(worst, std::abs(var - std::pow(std::sin(beta), 2) * (3 * s - 1) / 2));
	}
	return bounded("dicke.rotated_variance", worst, 1e-10);
}

// gravity ------------------------------------------------------------------

CheckResult check_reference_shift()
{
	Rng rng(21);
	double worst = 0.0;
	for(int trial = 0; trial < 10; ++trial)
	{
		GravityContext a = rng.context();
		a.reference = ReferenceNode::A;
		GravityContext b = a;
		const double shift = rng.uniform(-100, 100);
		b.potentials = std::make_pair(a.potentials->first + shift, a.potentials->second + shift);
		const std::vector<double> t = linear_grid(0.0, 3.0, 64);
		const AciParams aci = AciParams::from_excitations(7, 3, a);
		const auto ta = aci_interference(aci, a, t);
		const auto tb = aci_interference(aci, b, t);
		RealVector w = RealVector::Zero(6);
		w.tail(5).setConstant(0.2);
		for(std::size_t i = 0; i < t.size(); ++i)
		{
			worst = std::max(worst, std::abs(ta.signal[i] - tb.signal[i]));
			worst = std::max(worst, std::abs(signal_nonlocal_analytic(w, a, 0.4, t[i]) -
			                                 signal_nonlocal_analytic(w, b, 0.4, t[i])));
			worst = std::max(worst, std::abs(signal_local_analytic(w, a, 0.4, t[i]) -
			                                 signal_local_analytic(w, b, 0.4, t[i])));
		}
	}
	return bounded("gravity.reference_shift_invariance", worst, 1e-10);
}

CheckResult check_phase_linearity()
{
	Rng rng(22);
	double worst = 0.0;
	for(int trial = 0; trial < 20; ++trial)
	{
		const GravityContext ctx = rng.context();
		const int l = rng.integer(1, 50);
		const double t = rng.uniform(0, 5);
		for(const Node n : {Node::A, Node::B})
		{
			const double base = redshift_phase(ctx, 1, n, 1.0);
			const double p = redshift_phase(ctx, l, n, t);
			worst = std::max(worst, std::abs(p - l * t * base) / std::max(1.0, std::abs(p)));
		}
		GravityContext twice = ctx;
		twice.potentials = std::make_pair(2 * ctx.potentials->first, 2 * ctx.potentials->second);
		const double p1 = redshift_phase(ctx, l, Node::B, t);
		worst = std::max(worst, std::abs(redshift_phase(twice, l, Node::B, t) - 2 * p1) / std::max(1.0, std::abs(p1)));
	}
	return bounded("gravity.phase_linearity", worst, 1e-12);
}

CheckResult check_tau_scaling()
{
	GravityContext ctx;
	ctx.omega_eg = 2 * pi * 0.5e15;
	const double de = ctx.hbar * ctx.omega_eg * std::sqrt(74.5);
	const double tau = decoherence_time(ctx, de);
	GravityContext far = ctx;
	far.delta_z = 2 * ctx.delta_z;
	double worst = std::abs(decoherence_time(far, de) / tau - 0.5);
	worst = std::max(worst, std::abs(decoherence_time(ctx, 2 * de) / tau - 0.5));
	return bounded("gravity.tau_scaling", worst, 1e-12);
}

// network ------------------------------------------------------------------

CheckResult check_gravity_evolution(const Limits& lim)
{
	Rng rng(31);
	double worst = 0.0;
	for(int trial = 0; trial < 10; ++trial)
	{
		const EnsembleDims d(rng.integer(1, lim.oracle_n));
		ComplexMatrix m(d.dim(), d.dim());
		for(int a = 0; a < d.dim(); ++a)
			for(int b = 0; b < d.dim(); ++b)
				m(a, b) = std::polar(rng.uniform(0, 1), rng.uniform(0, 2 * pi));
		const TwoNodeState psi(m / m.norm());
		const GravityContext ctx = rng.context();
		const double t1 = rng.uniform(0, 2);
		const double t2 = rng.uniform(0, 2);
		const TwoNodeState two = evolve_gravity(evolve_gravity(psi, ctx, t1), ctx, t2);
		const TwoNodeState one = evolve_gravity(psi, ctx, t1 + t2);
		const TwoNodeState swapped = evolve_gravity(evolve_gravity(psi, ctx, t2), ctx, t1);
		worst = std::max(worst, max_abs(two.amplitudes() - one.amplitudes()));
		worst = std::max(worst, max_abs(two.amplitudes() - swapped.amplitudes()));
		worst = std::max(worst, (one.amplitudes().cwiseAbs2() - psi.amplitudes().cwiseAbs2()).cwiseAbs().maxCoeff());
	}
	return bounded("network.gravity_semigroup_diagonal", worst, 1e-12);
}

CheckResult check_local_inverse(const Limits& lim)
{
	Rng rng(32);
	double worst = 0.0;
	for(int n = 1; n <= lim.oracle_n; ++n)
	{
		const EnsembleDims d(n);
		const SymmetricUnitary u = oat(d, rng.axis(), rng.uniform(0, pi)) * rotation(d, rng.axis(), rng.uniform(0, pi));
		const TwoNodeState psi = seed_state(d, {rng.uniform(0, 2 * pi), 0.1});
		const TwoNodeState back = apply_local(u.adjoint(), u.adjoint(), apply_local(u, u, psi));
		worst = std::max(worst, max_abs(back.amplitudes() - psi.amplitudes()));
	}
	return bounded("network.apply_local_inverse", worst, 1e-10);
}

CheckResult check_decoded_sector(const Limits& lim)
{
	Rng rng(33);
	double worst = 0.0;
	for(int n = 2; n <= lim.closed_n; n += 2)
	{
		const EnsembleDims d(n);
		const SymmetricUnitary u = u_dt(d);
		const SeedSpec seed{rng.uniform(0, 2 * pi), 0.0};
		const TwoNodeState evolved = evolve_gravity(noon_minus_one(d, seed), rng.context(), rng.uniform(0, 3));
		const TwoNodeState decoded = apply_local(u.adjoint(), u.adjoint(), evolved);
		const double inside = std::norm(decoded(0, 1)) + std::norm(decoded(1, 0));
		worst = std::max(worst, std::abs(1.0 - inside));
	}
	return bounded("network.decoded_single_excitation_sector", worst, 1e-10);
}

// varprep ------------------------------------------------------------------

CheckResult check_cost_invariances()
{
	Rng rng(41);
	double worst = 0.0;
	for(int trial = 0; trial < 10; ++trial)
	{
		const int n = rng.integer(2, 12);
		const EnsembleDims d(n);
		const int p = rng.integer(1, 3);
		std::vector<double> x(VariationalAnsatz::reduced_parameter_count(p));
		for(double& v : x)
			v = rng.uniform(0, 2 * pi);
		const SymmetricUnitary u = build_circuit(d, VariationalAnsatz::from_reduced(p, x));
		const SymmetricUnitary zu = rotation(d, CollectiveAxis::z_axis(), rng.uniform(0, 2 * pi)) * u;
		const DickeState target = rng.excitation(n);
		const DickeState moduli(target.amplitudes().cwiseAbs().cast<cplx>());
		worst = std::max(worst, std::abs(cost_target(zu, target, 1.0) - cost_target(u, target, 1.0)));
		worst = std::max(worst, std::abs(cost_energy(zu, 0.7, 0.3) - cost_energy(u, 0.7, 0.3)));
		worst = std::max(worst, std::abs(cost_target(u, moduli, 1.0) - cost_target(u, target, 1.0)));
	}
	return bounded("varprep.cost_invariances", worst, 1e-10);
}

CheckResult check_optimizer_reproducible()
{
	const EnsembleDims d(4);
	const CostSpec cost = CostSpec::target_distribution(mass_eigenstate(d, 3));
	const OptimizerConfig cfg{3, 400, 1e-8, 99};
	const OptimizationResult a = optimize(d, cost, 1, cfg);
	const OptimizationResult b = optimize(d, cost, 1, cfg);
	const bool same = a.parameters == b.parameters && a.cost == b.cost && a.best_restart == b.best_restart;
	return {"varprep.optimizer_reproducible", same, same ? "identical parameters" : "runs differ"};
}

// exact-circuits -----------------------------------------------------------

CheckResult check_udt_closed_form(const Limits& lim)
{
	double worst = 0.0;
	for(int n = 2; n <= lim.closed_n; n += 2)
	{
		const EnsembleDims d(n);
		worst = std::max(worst, max_abs(u_dt(d).matrix() - u_dt_closed_form(d).matrix()));
	}
	return bounded("exact.udt_closed_form", worst, 1e-10);
}

CheckResult check_tilted_variance(VerifyLevel level)
{
	double worst = 0.0;
	const std::vector<int> sizes = level == VerifyLevel::full ? std::vector<int>{4, 20, 100} : std::vector<int>{4, 8};
	for(const int n : sizes)
	{
		const EnsembleDims d(n);
		for(int j = 0; j < 20; ++j)
		{
			const double alpha = (j + 0.5) * pi / 40.0;
			const DickeState s = apply(rotation(d, CollectiveAxis::y_axis(), 2 * alpha), DickeState::basis(d, n - 1));
			worst = std::max(worst, std::abs(energy_moments(s).variance - tilted_variance(d, alpha)));
		}
	}
	return bounded("exact.tilted_variance", worst, 1e-10);
}

CheckResult check_qfi(const Limits& lim, VerifyLevel level)
{
	double worst = 0.0;
	const int top = level == VerifyLevel::full ? 100 : lim.closed_n;
	for(int n = 2; n <= top; n += 2)
	{
		const EnsembleDims d(n);
		worst = std::max(worst, std::abs(qfi_differential_phase(noon_minus_one(d, {})) - (n - 1.0) * (n - 1.0)));
		worst = std::max(worst, std::abs(qfi_differential_phase(noon_state(d)) - double(n) * n));
	}
	return bounded("exact.qfi_noon", worst, 1e-8);
}

CheckResult check_product_formula(const Limits& lim)
{
	Rng rng(51);
	double worst = 0.0;
	for(int trial = 0; trial < lim.theta_draws; ++trial)
	{
		const int n = rng.integer(2, lim.qubit_n);
		sequential::Profile p;
		p.first = rng.integer(1, n - 1);
		const int k = rng.integer(1, n - p.first);
		for(int j = 0; j < k; ++j)
			p.thetas.push_back(rng.uniform(0, 2 * pi));
		const QubitCircuit c = sequential_circuit(n, p);
		const RealVector brute = sequential_populations(simulate(c, 1, Exec::serial), n);
		const RealVector formula = profile_probabilities(n, p);
		worst = std::max(worst, (brute.head(n + 1) - formula).cwiseAbs().maxCoeff());
		worst = std::max(worst, brute[n + 1]);
		// vacuum untouched
		worst = std::max(worst, std::abs(1.0 - std::norm(simulate(c, 0, Exec::serial)[0])));
	}
	return bounded("exact.sequential_product_formula", worst, 1e-12);
}

// measurement --------------------------------------------------------------

/// Ideal sector state with random complex profile and random seed phase.
struct RandomIdeal
{
	TwoNodeState state;
	DickeState excitation;
	double phi0;
};

RandomIdeal random_ideal(Rng& rng, int max_n)
{
	const int n = rng.integer(1, max_n);
	DickeState e = rng.excitation(n);
	const double phi0 = rng.uniform(0, 2 * pi);
	TwoNodeState s = delocalized_state(e, phi0);
	return {std::move(s), std::move(e), phi0};
}

CheckResult check_nonlocal_oracle(const Limits& lim, const SignalHooks& hooks)
{
	Rng rng(61);
	double worst = 0.0;
	for(int trial = 0; trial < lim.oracle_draws; ++trial)
	{
		const RandomIdeal r = random_ideal(rng, lim.oracle_n);
		const GravityContext ctx = rng.context();
		const double t = rng.uniform(0, 3);
		const TwoNodeState evolved = evolve_gravity(r.state, ctx, t);
		const double oracle = oracle_beam_splitter_parity(evolved, default_n_max(r.state.dims()));
		const double analytic = hooks.nonlocal(mass_distribution(r.excitation), ctx, r.phi0, t);
		worst = std::max(worst, std::abs(oracle - analytic));
	}
	return bounded("measurement.nonlocal_beam_splitter_oracle", worst, 1e-10);
}

CheckResult check_local_oracle(const Limits& lim, const SignalHooks& hooks)
{
	Rng rng(62);
	double worst = 0.0;
	for(int trial = 0; trial < lim.oracle_draws; ++trial)
	{
		const int n = rng.integer(1, lim.oracle_n);
		const EnsembleDims d(n);
		const DickeState e = rng.excitation(n);
		const SymmetricUnitary u = amplification_unitary(e);
		const double phi0 = rng.uniform(0, 2 * pi);
		const TwoNodeState prepared = apply_local(u, u, seed_state(d, {phi0, 0.0}));
		const GravityContext ctx = rng.context();
		const double t = rng.uniform(0, 3);
		const double oracle = oracle_quadrature_product(evolve_gravity(prepared, ctx, t), u.adjoint(), default_n_max(d));
		const double analytic = hooks.local(mass_distribution(e), ctx, phi0, t);
		worst = std::max(worst, std::abs(oracle - analytic));
	}
	return bounded("measurement.local_quadrature_oracle", worst, 1e-10);
}

CheckResult check_matrix_elements()
{
	const EnsembleDims d(6);
	const int n_max = 8;
	const ComplexMatrix q = quadrature_matrix(n_max);
	double worst = 0.0;
	for(int l = 1; l <= 6; ++l)
		for(const int s : {1, -1})
			for(int lp = 1; lp <= 6; ++lp)
				for(const int sp : {1, -1})
				{
					const auto a = TwoModeFockState::from_atomic(sector_basis_state(d, l, s), n_max).amplitudes();
					const auto b = TwoModeFockState::from_atomic(sector_basis_state(d, lp, sp), n_max).amplitudes();
					const cplx m = (a.conjugate().cwiseProduct(q * b * q.transpose())).sum();
					const double expected = (l == 1 && l == lp && s == sp) ? 0.5 * s : 0.0;
					worst = std::max(worst, std::abs(m - expected));
				}
	return bounded("measurement.quadrature_matrix_elements", worst, 1e-12);
}

CheckResult check_position_observable(const Limits& lim, const SignalHooks& hooks)
{
	Rng rng(63);
	double worst = 0.0;
	for(int trial = 0; trial < lim.oracle_draws; ++trial)
	{
		const RandomIdeal r = random_ideal(rng, lim.oracle_n);
		const GravityContext ctx = rng.context();
		const double t = rng.uniform(0, 3);
		const double pos = position_observable_expectation(evolve_gravity(r.state, ctx, t));
		worst = std::max(worst, std::abs(pos - hooks.nonlocal(mass_distribution(r.excitation), ctx, r.phi0, t)));
	}
	return bounded("measurement.position_observable_nonlocal", worst, 1e-12);
}

CheckResult check_truncation(const Limits& lim)
{
	Rng rng(64);
	double worst = 0.0;
	for(int trial = 0; trial < 20; ++trial)
	{
		const RandomIdeal r = random_ideal(rng, lim.oracle_n);
		const int n = r.state.dims().atoms();
		const GravityContext ctx = rng.context();
		const TwoNodeState evolved = evolve_gravity(r.state, ctx, rng.uniform(0, 3));
		const SymmetricUnitary u = amplification_unitary(r.excitation);
		worst = std::max(worst, std::abs(oracle_quadrature_product(evolved, u.adjoint(), n + 1) -
		                                 oracle_quadrature_product(evolved, u.adjoint(), n + 4)));
		worst = std::max(worst, std::abs(oracle_beam_splitter_parity(evolved, n + 1) -
		                                 oracle_beam_splitter_parity(evolved, n + 4)));
	}
	return bounded("measurement.truncation_independence", worst, 1e-12);
}

CheckResult check_signal_bounds(const Limits& lim, const SignalHooks& hooks)
{
	Rng rng(65);
	double excess = 0.0;
	for(int trial = 0; trial < lim.oracle_draws; ++trial)
	{
		const RandomIdeal r = random_ideal(rng, lim.oracle_n);
		const GravityContext ctx = rng.context();
		const double t = rng.uniform(0, 3);
		const RealVector w = mass_distribution(r.excitation);
		excess = std::max(excess, std::abs(hooks.nonlocal(w, ctx, r.phi0, t)) - 1.0);
		excess = std::max(excess, std::abs(hooks.local(w, ctx, r.phi0, t)) - 0.5);
	}
	return {"measurement.signal_bounds", excess <= 1e-12, "max excess over bound " + sci(std::max(0.0, excess))};
}

CheckResult check_phi0_offset(const Limits& lim, const SignalHooks& hooks)
{
	// a seed-phase shift delta must act as I(phi0 + delta) = cos(delta) I(phi0) - sin(delta) I(phi0 - pi/2),
	// checked on oracle traces against the analytic formula
	Rng rng(66);
	double worst = 0.0;
	for(int trial = 0; trial < 20; ++trial)
	{
		const int n = rng.integer(1, lim.oracle_n);
		const EnsembleDims d(n);
		const DickeState e = rng.excitation(n);
		const SymmetricUnitary u = amplification_unitary(e);
		const GravityContext ctx = rng.context();
		const double phi0 = rng.uniform(0, 2 * pi);
		const double delta = rng.uniform(0, 2 * pi);
		const std::vector<double> times = linear_grid(0.0, 2.0, 9);
		const RealVector w = mass_distribution(e);
		for(const SchemeKind kind : {SchemeKind::nonlocal_parity, SchemeKind::local_quadrature})
		{
			MeasurementScheme scheme{kind, std::nullopt};
			if(kind == SchemeKind::local_quadrature)
				scheme.decoder = u.adjoint();
			const TwoNodeState shifted = apply_local(u, u, seed_state(d, {phi0 + delta, 0.0}));
			const RamseyResult r =
			    run_ramsey({shifted, ctx, scheme, phi0 + delta, times, 0}, EvalPath::oracle, Exec::serial);
			const SignalFunction& f = kind == SchemeKind::local_quadrature ? hooks.local : hooks.nonlocal;
			for(std::size_t i = 0; i < times.size(); ++i)
			{
				const double predicted = std::cos(delta) * f(w, ctx, phi0, times[i]) -
				                         std::sin(delta) * f(w, ctx, phi0 - 0.5 * pi, times[i]);
				worst = std::max(worst, std::abs(r.oracle->signal[i] - predicted));
			}
		}
	}
	return bounded("measurement.phi0_offset", worst, 1e-10);
}

CheckResult check_ramsey_paths(const Limits& lim)
{
	double worst = 0.0;
	for(int n = 2; n <= lim.oracle_n; n += 2)
	{
		const EnsembleDims d(n);
		const SymmetricUnitary u = u_dt(d);
		GravityContext ctx;
		ctx.omega_eg = 2 * pi * 0.5e15;
		const std::vector<double> times = linear_grid(0.0, 4.0, 33);
		for(const SchemeKind kind :
		    {SchemeKind::nonlocal_parity, SchemeKind::local_quadrature, SchemeKind::position_observable})
		{
			MeasurementScheme scheme{kind, std::nullopt};
			if(kind == SchemeKind::local_quadrature)
				scheme.decoder = u.adjoint();
			const RamseyResult r =
			    run_ramsey({noon_minus_one(d, {0.3, 0.0}), ctx, scheme, 0.3, times, 0}, EvalPath::both, Exec::serial);
			worst = std::max(worst, r.max_abs_diff);
		}
	}
	return bounded("measurement.ramsey_analytic_vs_oracle", worst, 1e-9);
}

double nonlocal_mutant(const RealVector& w, const GravityContext& ctx, double phi0, double t, double sb, double sa,
                  double s0, double overall)
{
	double s = 0.0;
	for(int l = 1; l < w.size(); ++l)
		s += w[l] * std::cos(sb * redshift_phase(ctx, l, Node::B, t) - sa * redshift_phase(ctx, l, Node::A, t) -
		                     s0 * phi0);
	return overall * s;
}

double local_mutant(const RealVector& w, const GravityContext& ctx, double phi0, double t, double sb, double sa,
                   double s0, double overall)
{
	double s = 0.0;
	for(int l = 1; l < w.size(); ++l)
		for(int lp = 1; lp < w.size(); ++lp)
			s += w[l] * w[lp] *
			     std::cos(sb * redshift_phase(ctx, l, Node::B, t) - sa * redshift_phase(ctx, lp, Node::A, t) -
			              s0 * phi0);
	return 0.5 * overall * s;
}

} // namespace

bool VerifyReport::all_passed() const
{
	for(const auto& c : checks)
		if(!c.passed)
			return false;
	return true;
}

std::string VerifyReport::render() const
{
	std::ostringstream os;
	os << "dickenet verify --" << (level == VerifyLevel::full ? "full" : "fast") << '\n';
	std::size_t width = 0;
	for(const auto& c : checks)
		width = std::max(width, c.name.size());
	int failed = 0;
	for(const auto& c : checks)
	{
		os << (c.passed ? "PASS  " : "FAIL  ") << c.name << std::string(width - c.name.size() + 2, ' ') << c.detail
		   << '\n';
		failed += !c.passed;
	}
	os << checks.size() - failed << '/' << checks.size() << " checks passed\n";
	return os.str();
}

VerifyReport run_verify(VerifyLevel level, const SignalHooks& hooks)
{
	const Limits lim = limits(level);
	VerifyReport report;
	report.level = level;
	const auto run = [&](const char* name, auto&& fn) {
		try
		{
			report.checks.push_back(fn());
		}
		catch(const std::exception& e)
		{
			report.checks.push_back({name, false, std::string("exception: ") + e.what()});
		}
	};
	run("dicke.gate_unitarity", [&] { return check_unitarity(lim); });
	run("dicke.commutator_xy", [&] { return check_commutator(lim); });
	run("dicke.casimir", [&] { return check_casimir(lim); });
	run("dicke.rotation_covariance", [&] { return check_rotation_covariance(lim); });
	run("dicke.exp_vs_scaling_squaring", [&] { return check_exponential_oracle(lim); });
	run("dicke.apply_norm", [&] { return check_apply_norm(lim); });
	run("dicke.rotated_variance", [&] { return check_rotated_variance(lim); });
	run("gravity.reference_shift_invariance", [&] { return check_reference_shift(); });
	run("gravity.phase_linearity", [&] { return check_phase_linearity(); });
	run("gravity.tau_scaling", [&] { return check_tau_scaling(); });
	run("network.gravity_semigroup_diagonal", [&] { return check_gravity_evolution(lim); });
	run("network.apply_local_inverse", [&] { return check_local_inverse(lim); });
	run("network.decoded_single_excitation_sector", [&] { return check_decoded_sector(lim); });
	run("varprep.cost_invariances", [&] { return check_cost_invariances(); });
	run("varprep.optimizer_reproducible", [&] { return check_optimizer_reproducible(); });
	run("exact.udt_closed_form", [&] { return check_udt_closed_form(lim); });
	run("exact.tilted_variance", [&] { return check_tilted_variance(level); });
	run("exact.qfi_noon", [&] { return check_qfi(lim, level); });
	run("exact.sequential_product_formula", [&] { return check_product_formula(lim); });
	run("measurement.nonlocal_beam_splitter_oracle", [&] { return check_nonlocal_oracle(lim, hooks); });
	run("measurement.local_quadrature_oracle", [&] { return check_local_oracle(lim, hooks); });
	run("measurement.quadrature_matrix_elements", [&] { return check_matrix_elements(); });
	run("measurement.position_observable_nonlocal", [&] { return check_position_observable(lim, hooks); });
	run("measurement.truncation_independence", [&] { return check_truncation(lim); });
	run("measurement.signal_bounds", [&] { return check_signal_bounds(lim, hooks); });
	run("measurement.phi0_offset", [&] { return check_phi0_offset(lim, hooks); });
	run("measurement.ramsey_analytic_vs_oracle", [&] { return check_ramsey_paths(lim); });
	return report;
}

std::vector<std::string> mutation_names()
{
	std::vector<std::string> out;
	for(const char* signal : {"nonlocal", "local"})
		for(const char* m : {"overall-sign", "phiB-sign", "phiA-sign", "phi0-sign"})
			out.push_back(std::string(signal) + "-" + m);
	return out;
}

SignalHooks mutated_hooks(const std::string& name)
{
	double sb = 1, sa = 1, s0 = 1, overall = 1;
	const auto dash = name.find('-');
	if(dash == std::string::npos)
		throw std::invalid_argument("unknown mutation '" + name + "'");
	const std::string signal = name.substr(0, dash);
	const std::string what = name.substr(dash + 1);
	if(what == "overall-sign")
		overall = -1;
	else if(what == "phiB-sign")
		sb = -1;
	else if(what == "phiA-sign")
		sa = -1;
	else if(what == "phi0-sign")
		s0 = -1;
	else
		throw std::invalid_argument("unknown mutation '" + name + "'");

	SignalHooks hooks;
	const auto bind = [=](auto fn) {
		return [=](const RealVector& w, const GravityContext& ctx, double phi0, double t) {
			return fn(w, ctx, phi0, t, sb, sa, s0, overall);
		};
	};
	if(signal == "nonlocal")
		hooks.nonlocal = bind(nonlocal_mutant);
	else if(signal == "local")
		hooks.local = bind(local_mutant);
	else
		throw std::invalid_argument("unknown mutation '" + name + "'");
	return hooks;
}

} // namespace dickenet
