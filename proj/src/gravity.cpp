#include "dickenet/gravity.hpp"

#include "dickenet/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dickenet
{

void GravityContext::validate() const
{
	if(!(omega_eg > 0.0) || !std::isfinite(omega_eg))
		throw std::domain_error("omega_eg must be positive");
	if(!(c > 0.0) || !std::isfinite(c))
		throw std::domain_error("speed of light must be positive");
	if(!(hbar > 0.0))
		throw std::domain_error("hbar must be positive");
	if(!std::isfinite(g) || !std::isfinite(delta_z))
		throw std::domain_error("g and delta_z must be finite");
	if(potentials && (!std::isfinite(potentials->first) || !std::isfinite(potentials->second)))
		throw std::domain_error("potentials must be finite");
}

std::vector<std::string> GravityContext::warnings() const
{
	std::vector<std::string> out;
	for(const Node n : {Node::A, Node::B})
	{
		const double ratio = std::abs(raw_potential(n)) / (c * c);
		if(ratio > 1e-3)
			out.push_back(std::string("|phi_") + (n == Node::A ? "A" : "B") + "|/c^2 = " + std::to_string(ratio) +
			              " exceeds 1e-3; weak-field expansion is questionable");
	}
	return out;
}

double GravityContext::raw_potential(Node node) const
{
	if(potentials)
		return node == Node::A ? potentials->first : potentials->second;
	return node == Node::A ? 0.0 : g * delta_z;
}

double GravityContext::potential(Node node) const
{
	const double pa = raw_potential(Node::A);
	const double pb = raw_potential(Node::B);
	double ref = pa;
	if(reference == ReferenceNode::B)
		ref = pb;
	else if(reference == ReferenceNode::midpoint)
		ref = 0.5 * (pa + pb);
	return (node == Node::A ? pa : pb) - ref;
}

double GravityContext::potential_difference() const
{
	return raw_potential(Node::B) - raw_potential(Node::A);
}

double GravityContext::mass_defect() const
{
	return hbar * omega_eg / (c * c);
}

double redshift_phase(const GravityContext& ctx, int excitations, Node node, double t)
{
	return excitations * (ctx.omega_eg / (ctx.c * ctx.c)) * ctx.potential(node) * t;
}

double decoherence_time(const GravityContext& ctx, double delta_e)
{
	if(!(delta_e > 0.0))
		throw std::domain_error("decoherence_time: energy spread must be positive");
	return std::sqrt(2.0) * ctx.hbar * ctx.c * ctx.c / (delta_e * std::abs(ctx.potential_difference()));
}

double gaussian_envelope(double t, double tau)
{
	if(!(tau > 0.0))
		throw std::domain_error("gaussian_envelope: tau must be positive");
	const double r = t / tau;
	return std::exp(-r * r);
}

AciParams AciParams::from_excitations(int l_up, int l_down, const GravityContext& ctx)
{
	if(l_down < 1 || l_up < l_down)
		throw std::domain_error("ACI mapping needs 1 <= l_down <= l_up");
	return {l_down * ctx.mass_defect(), (l_up - l_down) * ctx.omega_eg};
}

void AciParams::validate() const
{
	if(!(mass > 0.0))
		throw std::domain_error("ACI effective mass must be positive");
	if(!std::isfinite(internal_omega))
		throw std::domain_error("ACI internal splitting must be finite");
}

void InterferenceTrace::validate() const
{
	if(times.size() != signal.size())
		throw std::domain_error("trace times and signal differ in length");
	for(const double v : signal)
		if(!(std::abs(v) <= 1.0 + 1e-9))
			throw std::domain_error("trace signal outside [-1, 1]");
}

InterferenceTrace aci_interference(const AciParams& aci, const GravityContext& ctx, std::span<const double> times)
{
	aci.validate();
	ctx.validate();
	// only |Delta phi| matters: both cosines are even
	const double dphi = ctx.potential_difference();
	const double big = aci.mass * dphi / ctx.hbar;
	const double small = aci.internal_omega * dphi / (ctx.c * ctx.c);
	InterferenceTrace trace;
	trace.times.assign(times.begin(), times.end());
	trace.signal = kernels::evaluate_grid(times, [&](double t) {
		return 0.5 * (std::cos(big * t) + std::cos((big + small) * t));
	});
	return trace;
}

std::vector<double> aci_visibility(const InterferenceTrace& trace, double window)
{
	trace.validate();
	const std::size_t n = trace.times.size();
	if(n < 3)
		throw std::domain_error("visibility needs at least 3 samples");
	const double dt = (trace.times.back() - trace.times.front()) / static_cast<double>(n - 1);
	if(!(dt > 0.0))
		throw std::domain_error("visibility needs increasing sample times");
	const auto half = static_cast<std::ptrdiff_t>(std::floor(0.5 * window / dt));
	if(half < 1)
		throw std::domain_error("visibility window is smaller than the sampling step");
	std::vector<double> out(n);
	const auto sn = static_cast<std::ptrdiff_t>(n);
	for(std::ptrdiff_t i = 0; i < sn; ++i)
	{
		const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - half);
		const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(sn - 1, i + half);
		const auto [mn, mx] = std::minmax_element(trace.signal.begin() + lo, trace.signal.begin() + hi + 1);
		out[i] = 0.5 * (*mx - *mn);
	}
	return out;
}

std::vector<double> linear_grid(double start, double stop, int steps)
{
	if(steps < 2)
		throw std::domain_error("time grid needs at least 2 steps");
	if(!(stop > start))
		throw std::domain_error("time grid needs stop > start");
	std::vector<double> out(steps);
	for(int k = 0; k < steps; ++k)
		out[k] = start + (stop - start) * k / (steps - 1);
	return out;
}

} // namespace dickenet
