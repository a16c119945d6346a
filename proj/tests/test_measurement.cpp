#include "dickenet/exact_circuits.hpp"
#include "dickenet/measurement.hpp"
#include "dickenet/spectrum.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace dickenet;
using std::numbers::pi;

namespace
{

GravityContext optical()
{
	GravityContext ctx;
	ctx.omega_eg = 2 * pi * 0.5e15;
	ctx.potentials = std::make_pair(-20.0, 25.0);
	ctx.reference = ReferenceNode::midpoint;
	return ctx;
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

/// Fock amplitudes of a two-node state in the oracle's product basis.
ComplexVector to_modes(const TwoNodeState& psi, const oracle::TwoModes& m)
{
	ComplexMatrix c = ComplexMatrix::Zero(m.n_max + 1, m.n_max + 1);
	c.topLeftCorner(psi.dim(), psi.dim()) = psi.amplitudes();
	return oracle::flatten(c);
}

/// Parity of mode B after exp(-(pi/4)(a_A^dag a_B - a_B^dag a_A)) (-1)^{N_B},
/// with the exponential taken on the truncated product space.
double reference_parity(const TwoNodeState& psi)
{
	const oracle::TwoModes m(2 * psi.dims().atoms() + 1);
	const ComplexMatrix k = m.a_a.adjoint() * m.a_b - m.a_b.adjoint() * m.a_a;
	const ComplexMatrix nb = m.a_b.adjoint() * m.a_b;
	ComplexMatrix parity = ComplexMatrix::Zero(m.dim(), m.dim());
	for(int i = 0; i < m.dim(); ++i)
		parity(i, i) = std::lround(nb(i, i).real()) % 2 == 0 ? 1.0 : -1.0;
	const ComplexVector out = oracle::expm(-(pi / 4) * k) * parity * to_modes(psi, m);
	return (out.adjoint() * parity * out)(0, 0).real();
}

double reference_quadrature_product(const TwoNodeState& psi)
{
	const oracle::TwoModes m(psi.dims().atoms() + 2);
	const ComplexMatrix qa = (m.a_a + m.a_a.adjoint()) / std::numbers::sqrt2;
	const ComplexMatrix qb = (m.a_b + m.a_b.adjoint()) / std::numbers::sqrt2;
	const ComplexVector v = to_modes(psi, m);
	return (v.adjoint() * qa * qb * v)(0, 0).real();
}

InterferenceTrace sampled(double t_max, int steps, const std::function<double(double)>& f)
{
	InterferenceTrace tr;
	tr.times = linear_grid(0.0, t_max, steps);
	for(double t : tr.times)
		tr.signal.push_back(f(t));
	return tr;
}

} // namespace

TEST_CASE("beam splitter blocks")
{
	for(int n = 0; n <= 8; ++n)
	{
		const ComplexMatrix b = beam_splitter_block(n);
		CHECK(unitarity_defect(b) < 1e-13);
	}
	// one photon: the transfer matrix itself
	const ComplexMatrix b1 = beam_splitter_block(1);
	const double h = 1 / std::numbers::sqrt2;
	CHECK(std::abs(std::abs(b1(0, 0)) - h) < 1e-14);
	CHECK(std::abs(std::abs(b1(1, 1)) - h) < 1e-14);
}

TEST_CASE("parity readout of single-excitation states")
{
	const EnsembleDims d(3);
	const int n_max = default_n_max(d);
	CHECK(oracle_beam_splitter_parity(sector_basis_state(d, 1, +1), n_max) == doctest::Approx(1.0).epsilon(1e-12));
	CHECK(oracle_beam_splitter_parity(sector_basis_state(d, 1, -1), n_max) == doctest::Approx(-1.0).epsilon(1e-12));
	CHECK(oracle_beam_splitter_parity(TwoNodeState::basis(d, 0, 0), n_max) == doctest::Approx(1.0).epsilon(1e-12));
	CHECK_THROWS_AS(oracle_beam_splitter_parity(sector_basis_state(d, 1, 1), 3), std::domain_error);
}

TEST_CASE("parity readout against an independent two-mode oracle")
{
	std::mt19937_64 rng(11);
	std::uniform_real_distribution<double> u(0, 2 * pi);
	const GravityContext ctx = optical();
	for(int draw = 0; draw < 12; ++draw)
	{
		const int n = 1 + draw % 5;
		const EnsembleDims d(n);
		const DickeState local = random_excitation(n, rng);
		const double phi0 = u(rng);
		const double t = 0.05 * u(rng);
		const TwoNodeState psi = evolve_gravity(delocalized_state(local, phi0), ctx, t);

		const double reference = reference_parity(psi);
		CHECK(std::abs(oracle_beam_splitter_parity(psi, default_n_max(d)) - reference) < 1e-10);

		const RealVector w = mass_distribution(local);
		CHECK(std::abs(signal_nonlocal_analytic(w, ctx, phi0, t) - reference) < 1e-10);
	}
}

TEST_CASE("quadrature product against an independent two-mode oracle")
{
	std::mt19937_64 rng(12);
	std::uniform_real_distribution<double> u(0, 2 * pi);
	const GravityContext ctx = optical();
	for(int draw = 0; draw < 12; ++draw)
	{
		const int n = 2 + draw % 4;
		const EnsembleDims d(n);
		const SymmetricUnitary up = oat(d, CollectiveAxis(1, 0.3, -0.2), u(rng)) * rotation(d, CollectiveAxis(0, 1, 0), 0.01);
		const DickeState local = random_excitation(n, rng);
		const double phi0 = u(rng);
		const double t = 0.05 * u(rng);
		const TwoNodeState encoded = apply_local(up, up, delocalized_state(local, phi0));
		const TwoNodeState evolved = evolve_gravity(encoded, ctx, t);

		const double reference = reference_quadrature_product(apply_local(up.adjoint(), up.adjoint(), evolved));
		CHECK(std::abs(oracle_quadrature_product(evolved, up.adjoint(), default_n_max(d)) - reference) < 1e-10);
	}
}

TEST_CASE("quadrature matrix elements on the ideal sector")
{
	const EnsembleDims d(6);
	const oracle::TwoModes m(8);
	const ComplexMatrix qa = (m.a_a + m.a_a.adjoint()) / std::numbers::sqrt2;
	const ComplexMatrix qb = (m.a_b + m.a_b.adjoint()) / std::numbers::sqrt2;
	const ComplexMatrix q = quadrature_matrix(8);
	for(int i = 0; i < 9; ++i)
		for(int j = 0; j < 9; ++j)
			CHECK(std::abs(q(i, j) - (std::abs(i - j) == 1 ? std::sqrt(std::max(i, j) / 2.0) : 0.0)) < 1e-15);
	for(int l = 1; l <= 6; ++l)
		for(int lp = 1; lp <= 6; ++lp)
			for(int s : {-1, 1})
				for(int sp : {-1, 1})
				{
					const ComplexVector ket = to_modes(sector_basis_state(d, l, s), m);
					const ComplexVector bra = to_modes(sector_basis_state(d, lp, sp), m);
					const double value = (bra.adjoint() * qa * qb * ket)(0, 0).real();
					const double expected = (l == 1 && lp == 1 && s == sp) ? 0.5 * s : 0.0;
					CHECK(std::abs(value - expected) < 1e-14);
				}
}

TEST_CASE("ramsey paths agree")
{
	const EnsembleDims d(8);
	const SymmetricUnitary up = u_dt(d);
	RamseyScenario sc{apply_local(up, up, seed_state(d, {0.4, 0.0})), optical(), {}, 0.4, linear_grid(0, 0.2, 41), 0};

	const RamseyResult parity = run_ramsey(sc, EvalPath::both);
	REQUIRE(parity.analytic);
	REQUIRE(parity.oracle);
	CHECK(parity.max_abs_diff < 1e-10);
	CHECK(parity.leakage < 1e-12);

	sc.scheme = {SchemeKind::local_quadrature, up.adjoint()};
	const RamseyResult quad = run_ramsey(sc, EvalPath::both);
	CHECK(quad.max_abs_diff < 1e-10);

	sc.scheme = {SchemeKind::position_observable, std::nullopt};
	const RamseyResult pos = run_ramsey(sc, EvalPath::both);
	CHECK(pos.max_abs_diff < 1e-10);

	sc.scheme = {SchemeKind::local_quadrature, std::nullopt};
	CHECK_THROWS_AS(run_ramsey(sc, EvalPath::analytic), std::domain_error);

	sc.scheme = {};
	const RamseyResult serial = run_ramsey(sc, EvalPath::oracle, kernels::Exec::serial);
	CHECK(serial.oracle->signal == parity.oracle->signal);
}

TEST_CASE("nonlocal signal of an eigenstate is a pure cosine")
{
	const GravityContext ctx = optical();
	RealVector w = RealVector::Zero(11);
	w[7] = 1.0;
	const double x = redshift_phase(ctx, 1, Node::B, 1.0) - redshift_phase(ctx, 1, Node::A, 1.0);
	for(double t : {0.0, 0.3, 1.7})
		CHECK(signal_nonlocal_analytic(w, ctx, 0.2, t) == doctest::Approx(std::cos(7 * x * t - 0.2)).epsilon(1e-12));
}

TEST_CASE("envelope fit on a synthetic trace")
{
	const double tau = 2.0;
	const InterferenceTrace tr = sampled(4.0, 8001, [&](double t) { return std::exp(-t * t / (tau * tau)) * std::cos(30 * t); });
	const EnvelopeFit fit = envelope_fit(tr);
	CHECK(std::abs(fit.tau / tau - 1) < 0.02);
	CHECK(fit.points >= 5);

	const InterferenceTrace flat = sampled(4.0, 101, [](double) { return 0.7; });
	CHECK_THROWS_AS(envelope_fit(flat), std::domain_error);
}

TEST_CASE("revival detection")
{
	const InterferenceTrace beat = sampled(12.0, 4801, [](double t) { return std::cos(20 * t) * std::cos(1.0 * t); });
	const RevivalReport r = detect_revival(beat);
	CHECK(r.detected);
	CHECK(r.onset_time > 1.0);
	CHECK(r.onset_time < pi + 0.5);
	CHECK(r.trough < 0.2);
	CHECK(r.peak > 0.9);

	const InterferenceTrace decay = sampled(12.0, 4801, [](double t) { return std::exp(-t * t / 4) * std::cos(20 * t); });
	CHECK_FALSE(detect_revival(decay).detected);
	const InterferenceTrace pure = sampled(12.0, 4801, [](double t) { return std::cos(20 * t); });
	CHECK_FALSE(detect_revival(pure).detected);
}

TEST_CASE("dominant frequency")
{
	const InterferenceTrace tr = sampled(12.0, 4801, [](double t) { return 0.8 * std::cos(3.7 * t + 0.3) + 0.1; });
	const SpectralPeak p = dominant_frequency(tr);
	CHECK(std::abs(p.omega / 3.7 - 1) < 1e-9);
	CHECK(p.amplitude == doctest::Approx(0.8).epsilon(1e-9));
	CHECK(p.residual_rms < 1e-9);
}
