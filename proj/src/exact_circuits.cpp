#include "dickenet/exact_circuits.hpp"

#include "dickenet/simplex.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace dickenet
{

using std::numbers::pi;

namespace
{

int half_atoms_even(const EnsembleDims& dims, const char* what)
{
	if(dims.atoms() % 2 != 0)
		throw UnsupportedConfiguration(std::string(what) + " is only defined for even N (got N = " +
		                               std::to_string(dims.atoms()) + ")");
	return dims.atoms() / 2;
}

} // namespace

SymmetricUnitary u_dt(const EnsembleDims& dims, DoubleTwistVariant variant)
{
	const int s = half_atoms_even(dims, "U_DT");
	const SymmetricUnitary tx = oat(dims, CollectiveAxis::x_axis(), 0.5 * pi);
	if(variant == DoubleTwistVariant::positive_angle)
		return rotation(dims, CollectiveAxis::y_axis(), pi) * oat(dims, CollectiveAxis::y_axis(), 0.5 * pi) * tx;
	const double sign = (s % 2 == 1) ? 1.0 : -1.0;
	return oat(dims, CollectiveAxis::y_axis(), sign * 0.5 * pi) * tx;
}

SymmetricUnitary u_dt_closed_form(const EnsembleDims& dims)
{
	const int s = half_atoms_even(dims, "U_DT");
	const int n = dims.atoms();
	const double parity = (s % 2 == 0) ? 1.0 : -1.0;
	const cplx even_phase = std::polar(1.0, 0.25 * pi * (parity - 1.0));
	const cplx odd_phase = std::polar(1.0, 0.25 * pi * (3.0 - parity));
	ComplexMatrix u = ComplexMatrix::Zero(dims.dim(), dims.dim());
	for(int l = 0; l <= n; ++l)
	{
		if(l % 2 == 0)
			u(l, l) = even_phase;
		else
			u(n - l, l) = odd_phase;
	}
	return SymmetricUnitary(std::move(u));
}

TwoNodeState noon_minus_one(const EnsembleDims& dims, const SeedSpec& seed)
{
	const SymmetricUnitary u = u_dt(dims);
	return apply_local(u, u, seed_state(dims, seed));
}

TwoNodeState noon_state(const EnsembleDims& dims)
{
	const int n = dims.atoms();
	ComplexMatrix m = ComplexMatrix::Zero(dims.dim(), dims.dim());
	m(0, n) = (1.0 / std::numbers::sqrt2);
	m(n, 0) = (1.0 / std::numbers::sqrt2);
	return TwoNodeState(std::move(m));
}

double qfi_differential_phase(const TwoNodeState& psi)
{
	const int d = psi.dim();
	double mean = 0.0;
	double second = 0.0;
	for(int a = 0; a < d; ++a)
		for(int b = 0; b < d; ++b)
		{
			const double p = std::norm(psi(a, b));
			const double g = 0.5 * (a - b);
			mean += p * g;
			second += p * g * g;
		}
	return 4.0 * (second - mean * mean);
}

void AlphaSpec::validate() const
{
	if(!std::isfinite(alpha))
		throw std::domain_error("alpha must be finite");
	if(std::abs(std::cos(alpha)) < 1e-12)
		throw std::domain_error("cos(alpha) = 0: twisting angle diverges");
	if(k < 0)
		throw std::domain_error("branch index k must be >= 0");
}

double AlphaSpec::chi(const EnsembleDims& dims) const
{
	validate();
	const double s = dims.spin();
	if(!(2.0 * s - 1.0 > 0.0))
		throw UnsupportedConfiguration("energy tuning needs N >= 2");
	return (1.0 + 2.0 * k) * pi / (2.0 * (2.0 * s - 1.0) * std::cos(alpha));
}

FinalRotationFit fit_final_rotation(const EnsembleDims& dims, const AlphaSpec& spec)
{
	half_atoms_even(dims, "V_alpha");
	const double chi = spec.chi(dims);
	const double s = dims.spin();
	const ComplexVector v0 =
	    apply(oat(dims, CollectiveAxis::z_axis(), chi) * rotation(dims, CollectiveAxis::y_axis(), spec.alpha),
	          DickeState::basis(dims, 0))
	        .amplitudes();

	// <0|R_y(-a') is the (real) coherent state at polar angle a'
	const auto overlap = [&](double a_prime, double zeta) {
		const ComplexVector c = coherent_state(dims, a_prime, 0.0).amplitudes();
		cplx sum = 0.0;
		for(int l = 0; l < dims.dim(); ++l)
			sum += std::conj(c[l]) * std::polar(1.0, -zeta * (l - s)) * v0[l];
		return std::norm(sum);
	};
	const SimplexResult r = nelder_mead([&](std::span<const double> x) { return -overlap(x[0], x[1]); },
	                                    {spec.alpha, 2.0 * chi * s * std::cos(spec.alpha)}, {4000, 1e-10, 0.05});
	return {r.x[0], r.x[1], -r.value};
}

SymmetricUnitary v_alpha(const EnsembleDims& dims, const AlphaSpec& spec)
{
	const FinalRotationFit f = fit_final_rotation(dims, spec);
	const SymmetricUnitary rf =
	    rotation(dims, CollectiveAxis::y_axis(), -f.alpha_prime) * rotation(dims, CollectiveAxis::z_axis(), f.zeta);
	return rf * oat(dims, CollectiveAxis::z_axis(), spec.chi(dims)) *
	       rotation(dims, CollectiveAxis::y_axis(), spec.alpha);
}

TwoNodeState psi_alpha(const EnsembleDims& dims, const AlphaSpec& spec, const SeedSpec& seed)
{
	const SymmetricUnitary v = v_alpha(dims, spec);
	return apply_local(v, v, noon_minus_one(dims, seed));
}

double tilted_variance(const EnsembleDims& dims, double alpha)
{
	const double s2 = std::sin(2.0 * alpha);
	return (3.0 * dims.atoms() - 2.0) / 4.0 * s2 * s2;
}

} // namespace dickenet
