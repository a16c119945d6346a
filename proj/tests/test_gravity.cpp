#include "dickenet/gravity.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numbers>

using namespace dickenet;
using std::numbers::pi;

namespace
{

GravityContext optical(double g = 9.81)
{
	GravityContext ctx;
	ctx.omega_eg = 2 * pi * 0.5e15;
	ctx.g = g;
	return ctx;
}

} // namespace

TEST_CASE("redshift phase")
{
	const GravityContext ctx = optical();
	CHECK(redshift_phase(ctx, 0, Node::B, 3.0) == 0.0);
	CHECK(redshift_phase(ctx, 5, Node::B, 0.0) == 0.0);
	CHECK(redshift_phase(ctx, 5, Node::A, 2.0) == 0.0);
	// frozen from a 40-digit evaluation of omega_eg g dz T / c^2
	CHECK(redshift_phase(ctx, 1, Node::B, 1.0) == doctest::Approx(0.34290788705141472533).epsilon(1e-14));
	CHECK(redshift_phase(ctx, 7, Node::B, 2.5) == doctest::Approx(7 * 2.5 * 0.34290788705141472533).epsilon(1e-14));
}

TEST_CASE("reference node")
{
	GravityContext ctx = optical();
	ctx.potentials = std::make_pair(4.0, 10.0);
	ctx.reference = ReferenceNode::A;
	CHECK(ctx.potential(Node::A) == 0.0);
	CHECK(ctx.potential(Node::B) == 6.0);
	ctx.reference = ReferenceNode::B;
	CHECK(ctx.potential(Node::A) == -6.0);
	ctx.reference = ReferenceNode::midpoint;
	CHECK(ctx.potential(Node::B) == 3.0);
	CHECK(ctx.potential_difference() == 6.0);
	CHECK(ctx.mass_defect() == doctest::Approx(ctx.hbar * ctx.omega_eg / (ctx.c * ctx.c)));
}

TEST_CASE("phase linearity")
{
	GravityContext ctx = optical();
	ctx.potentials = std::make_pair(-3.0, 11.0);
	ctx.reference = ReferenceNode::midpoint;
	const double unit = redshift_phase(ctx, 1, Node::B, 1.0);
	for(int l : {1, 4, 17})
		for(double t : {0.1, 1.0, 7.5})
			CHECK(redshift_phase(ctx, l, Node::B, t) == doctest::Approx(l * t * unit).epsilon(1e-13));
	GravityContext twice = ctx;
	twice.potentials = std::make_pair(-6.0, 22.0);
	CHECK(redshift_phase(twice, 3, Node::A, 2.0) == doctest::Approx(2 * redshift_phase(ctx, 3, Node::A, 2.0)));
}

TEST_CASE("decoherence time")
{
	const GravityContext ctx = optical();
	const double de = ctx.hbar * ctx.omega_eg * std::sqrt((3.0 * 100 - 2) / 4);
	const double tau = decoherence_time(ctx, de);
	// frozen from a 40-digit evaluation; within 5% of the quoted half second
	CHECK(tau == doctest::Approx(0.47781456854983737517).epsilon(1e-13));
	CHECK(std::abs(tau - 0.5) / 0.5 < 0.05);
	GravityContext far = ctx;
	far.delta_z = 2.0;
	CHECK(decoherence_time(far, de) == doctest::Approx(tau / 2));
	CHECK(decoherence_time(ctx, 2 * de) == doctest::Approx(tau / 2));
	CHECK_THROWS_AS(decoherence_time(ctx, 0.0), std::domain_error);
	CHECK(decoherence_time(optical(9.80665), de) == doctest::Approx(0.47797779236272372833).epsilon(1e-13));
}

TEST_CASE("gaussian envelope")
{
	CHECK(gaussian_envelope(0.0, 2.0) == 1.0);
	CHECK(gaussian_envelope(2.0, 2.0) == doctest::Approx(std::exp(-1.0)));
	CHECK(gaussian_envelope(4.0, 2.0) == doctest::Approx(std::exp(-4.0)));
}

TEST_CASE("validation and warnings")
{
	GravityContext ctx;
	CHECK_THROWS_AS(ctx.validate(), std::domain_error);
	ctx = optical();
	CHECK_NOTHROW(ctx.validate());
	CHECK(ctx.warnings().empty());
	ctx.c = 10.0;
	CHECK(!ctx.warnings().empty());
}

TEST_CASE("atom-clock interferometer")
{
	const GravityContext ctx = optical();
	const AciParams aci = AciParams::from_excitations(21, 20, ctx);
	CHECK(aci.mass == doctest::Approx(20 * ctx.mass_defect()));
	CHECK(aci.internal_omega == doctest::Approx(ctx.omega_eg));

	const double d_omega = aci.mass * ctx.potential_difference() / ctx.hbar;
	const double beat = aci.internal_omega * ctx.potential_difference() / (ctx.c * ctx.c);
	const std::vector<double> times = linear_grid(0.0, 20.0, 20001);
	const InterferenceTrace trace = aci_interference(aci, ctx, times);
	CHECK(trace.signal[0] == doctest::Approx(1.0));
	for(std::size_t i = 0; i < times.size(); i += 97)
	{
		const double t = times[i];
		CHECK(trace.signal[i] ==
		      doctest::Approx(0.5 * (std::cos(d_omega * t) + std::cos((d_omega + beat) * t))).epsilon(1e-9));
	}

	// beat envelope |cos(beat T / 2)| vanishes first at beat T = pi
	const std::vector<double> vis = aci_visibility(trace, 1.2);
	const double first_zero = pi / beat;
	for(std::size_t i = 0; i < times.size(); i += 250)
		if(times[i] > 1.0 && times[i] < 19.0)
			CHECK(std::abs(vis[i] - std::abs(std::cos(beat * times[i] / 2))) < 0.1);
	const auto idx = static_cast<std::size_t>(std::round(first_zero / 0.001));
	CHECK(vis[idx] < 0.1);

	// no internal splitting: a pure cosine of unit visibility
	const AciParams cow = AciParams::from_excitations(20, 20, ctx);
	const InterferenceTrace pure = aci_interference(cow, ctx, times);
	const std::vector<double> v1 = aci_visibility(pure, 2.0);
	for(std::size_t i = 1000; i + 1000 < times.size(); i += 500)
	{
		CHECK(pure.signal[i] == doctest::Approx(std::cos(d_omega * times[i])).epsilon(1e-9));
		CHECK(std::abs(v1[i] - 1.0) < 1e-3);
	}

	// no potential difference: constant signal, zero visibility
	GravityContext flat = ctx;
	flat.delta_z = 0.0;
	const InterferenceTrace still = aci_interference(AciParams::from_excitations(21, 20, flat), flat, times);
	for(double s : still.signal)
		CHECK(s == 1.0);
	for(double v : aci_visibility(still, 1.0))
		CHECK(v == 0.0);
	CHECK_THROWS_AS(aci_visibility(still, 1e-6), std::domain_error);
}

TEST_CASE("reference shift leaves traces unchanged")
{
	GravityContext a = optical();
	a.potentials = std::make_pair(2.0, 9.0);
	GravityContext b = a;
	b.potentials = std::make_pair(52.0, 59.0);
	const auto times = linear_grid(0.0, 5.0, 301);
	const auto ta = aci_interference(AciParams::from_excitations(5, 2, a), a, times);
	const auto tb = aci_interference(AciParams::from_excitations(5, 2, b), b, times);
	for(std::size_t i = 0; i < times.size(); ++i)
		CHECK(std::abs(ta.signal[i] - tb.signal[i]) < 1e-10);
}

TEST_CASE("linear grid")
{
	const auto g = linear_grid(1.0, 2.0, 5);
	REQUIRE(g.size() == 5);
	CHECK(g[0] == 1.0);
	CHECK(g[4] == 2.0);
	CHECK(g[2] == doctest::Approx(1.5));
	CHECK_THROWS(linear_grid(0.0, 1.0, 1));
}
