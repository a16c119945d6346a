#include "dickenet/network.hpp"

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
	ctx.potentials = std::make_pair(-4.0, 7.0);
	ctx.reference = ReferenceNode::midpoint;
	return ctx;
}

TwoNodeState random_state(int n, std::uint64_t seed)
{
	std::mt19937_64 rng(seed);
	std::normal_distribution<double> g;
	ComplexMatrix m(n + 1, n + 1);
	for(int a = 0; a <= n; ++a)
		for(int b = 0; b <= n; ++b)
			m(a, b) = {g(rng), g(rng)};
	return TwoNodeState(m / m.norm());
}

SymmetricUnitary random_unitary(int n, std::uint64_t seed)
{
	std::mt19937_64 rng(seed);
	std::uniform_real_distribution<double> u(-2, 2);
	const EnsembleDims d(n);
	return oat(d, CollectiveAxis(u(rng), u(rng), u(rng)), u(rng)) * rotation(d, CollectiveAxis(u(rng), u(rng), u(rng)), u(rng));
}

} // namespace

TEST_CASE("seed state")
{
	const EnsembleDims d(3);
	const TwoNodeState s = seed_state(d, {});
	CHECK(std::abs(s(0, 1) - 1 / std::numbers::sqrt2) < 1e-15);
	CHECK(std::abs(s(1, 0) - 1 / std::numbers::sqrt2) < 1e-15);
	CHECK(std::abs(s(0, 0)) == 0.0);

	const TwoNodeState flipped = seed_state(d, {pi, 0.0});
	CHECK(std::abs(flipped(1, 0) / flipped(0, 1) + 1.0) < 1e-15);

	const TwoNodeState noisy = seed_state(d, {0.3, 0.1});
	CHECK(std::norm(noisy(0, 0)) == doctest::Approx(0.1));
	CHECK(std::norm(noisy(0, 1)) == doctest::Approx(0.45));
	CHECK_THROWS_AS(seed_state(d, {0.0, 1.5}), std::domain_error);
	CHECK_THROWS_AS(TwoNodeState(ComplexMatrix::Ones(2, 3) / std::sqrt(6.0)), std::domain_error);
}

TEST_CASE("local operations")
{
	const TwoNodeState psi = random_state(5, 1);
	const EnsembleDims d(5);
	const TwoNodeState same = apply_local(SymmetricUnitary::identity(d), SymmetricUnitary::identity(d), psi);
	CHECK((same.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff() < 1e-15);

	const SymmetricUnitary ua = random_unitary(5, 2);
	const SymmetricUnitary ub = random_unitary(5, 3);
	const TwoNodeState out = apply_local(ua, ub, psi);
	CHECK(out.amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-12));
	// against the Kronecker product on the A-major flattening
	ComplexMatrix kron(36, 36);
	for(int i = 0; i < 6; ++i)
		for(int j = 0; j < 6; ++j)
			kron.block(i * 6, j * 6, 6, 6) = ua.matrix()(i, j) * ub.matrix();
	CHECK((kron * psi.flattened() - out.flattened()).cwiseAbs().maxCoeff() < 1e-12);

	const TwoNodeState back = apply_local(ua.adjoint(), ua.adjoint(), apply_local(ua, ua, psi));
	CHECK((back.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("amplification of the seed")
{
	// U with U|0> = |0> exactly lifts the seed to a delocalized excitation
	const EnsembleDims d(6);
	const SymmetricUnitary u = rotation(d, CollectiveAxis::z_axis(), 0.4) * oat(d, CollectiveAxis::z_axis(), 1.3);
	const double phi0 = 0.9;
	const TwoNodeState lifted = apply_local(u, u, seed_state(d, {phi0, 0.0}));
	const DickeState one = apply(u, DickeState::basis(d, 1));
	CHECK(std::abs(std::abs(lifted.inner(delocalized_state(one, phi0))) - 1.0) < 1e-12);
}

TEST_CASE("gravity evolution")
{
	const GravityContext ctx = optical();
	const TwoNodeState psi = random_state(6, 4);
	const TwoNodeState t0 = evolve_gravity(psi, ctx, 0.0);
	CHECK((t0.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff() == 0.0);

	const TwoNodeState split = evolve_gravity(evolve_gravity(psi, ctx, 0.7), ctx, 1.6);
	const TwoNodeState whole = evolve_gravity(psi, ctx, 2.3);
	CHECK((split.amplitudes() - whole.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
	CHECK((whole.amplitudes().cwiseAbs() - psi.amplitudes().cwiseAbs()).cwiseAbs().maxCoeff() < 1e-14);
	for(const Node n : {Node::A, Node::B})
		CHECK((node_mass_distribution(whole, n) - node_mass_distribution(psi, n)).cwiseAbs().maxCoeff() < 1e-14);

	const EnsembleDims d(6);
	const int l = 4;
	const double t = 1.3;
	const TwoNodeState ev = evolve_gravity(sector_basis_state(d, l, 1), ctx, t);
	const double rel = redshift_phase(ctx, l, Node::B, t) - redshift_phase(ctx, l, Node::A, t);
	CHECK(std::abs(ev(0, l) / ev(l, 0) - std::polar(1.0, -rel)) < 1e-12);
	CHECK_THROWS_AS(evolve_gravity(psi, ctx, -1.0), std::domain_error);
}

TEST_CASE("excitation profile")
{
	const EnsembleDims d(10);
	ComplexVector v = ComplexVector::Zero(11);
	v[3] = v[8] = 1 / std::numbers::sqrt2;
	const ExcitationProfile p = extract_excitation_profile(delocalized_state(DickeState(v), 0.2));
	CHECK(p.weights[3] == doctest::Approx(0.5));
	CHECK(p.weights[8] == doctest::Approx(0.5));
	CHECK(std::abs(p.leakage) < 1e-14);
	CHECK(std::abs(p.branch_b[3] - v[3]) < 1e-14);
	CHECK(std::abs(p.branch_a[8] - std::polar(1.0, -0.2) * v[8]) < 1e-14);

	const ExcitationProfile vac = extract_excitation_profile(TwoNodeState::basis(d, 0, 0));
	CHECK(vac.weights.sum() == 0.0);
	CHECK(vac.leakage == doctest::Approx(1.0));

	const ExcitationProfile off = extract_excitation_profile(TwoNodeState::basis(d, 2, 3));
	CHECK(off.leakage == doctest::Approx(1.0));
}

TEST_CASE("sector basis")
{
	const EnsembleDims d(4);
	for(int l = 1; l <= 4; ++l)
		for(int lp = 1; lp <= 4; ++lp)
			for(int s : {1, -1})
				for(int sp : {1, -1})
				{
					const cplx ip = sector_basis_state(d, l, s).inner(sector_basis_state(d, lp, sp));
					CHECK(std::abs(ip - ((l == lp && s == sp) ? 1.0 : 0.0)) < 1e-15);
				}
	CHECK_THROWS(sector_basis_state(d, 0, 1));
	CHECK_THROWS(sector_basis_state(d, 1, 2));
}
