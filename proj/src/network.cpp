#include "dickenet/network.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dickenet
{

TwoNodeState::TwoNodeState(ComplexMatrix amplitudes) : amp_{std::move(amplitudes)}
{
	if(amp_.rows() < 2 || amp_.rows() != amp_.cols())
		throw std::domain_error("two-node state must be a square (N+1)x(N+1) array");
	const double n2 = amp_.squaredNorm();
	if(!(std::abs(n2 - 1.0) <= 1e-10))
		throw std::domain_error("two-node state is not normalized (norm^2 = " + std::to_string(n2) + ")");
}

TwoNodeState TwoNodeState::product(const DickeState& a, const DickeState& b)
{
	if(a.dim() != b.dim())
		throw std::domain_error("product state: node dimensions differ");
	return TwoNodeState(a.amplitudes() * b.amplitudes().transpose());
}

TwoNodeState TwoNodeState::basis(const EnsembleDims& dims, int l_a, int l_b)
{
	return product(DickeState::basis(dims, l_a), DickeState::basis(dims, l_b));
}

ComplexVector TwoNodeState::flattened() const
{
	const int d = dim();
	ComplexVector out(d * d);
	for(int a = 0; a < d; ++a)
		for(int b = 0; b < d; ++b)
			out[a * d + b] = amp_(a, b);
	return out;
}

cplx TwoNodeState::inner(const TwoNodeState& other) const
{
	if(other.dim() != dim())
		throw std::domain_error("inner product: dimension mismatch");
	return (amp_.conjugate().cwiseProduct(other.amp_)).sum();
}

void SeedSpec::validate() const
{
	if(!(infidelity >= 0.0 && infidelity < 1.0))
		throw std::domain_error("seed infidelity must lie in [0, 1)");
	if(!std::isfinite(phi0))
		throw std::domain_error("seed phase must be finite");
}

TwoNodeState seed_state(const EnsembleDims& dims, const SeedSpec& spec)
{
	spec.validate();
	const int d = dims.dim();
	ComplexMatrix m = ComplexMatrix::Zero(d, d);
	const double w = std::sqrt((1.0 - spec.infidelity) / 2.0);
	m(0, 1) = w;
	m(1, 0) = w * std::polar(1.0, -spec.phi0);
	m(0, 0) = std::sqrt(spec.infidelity);
	return TwoNodeState(std::move(m));
}

TwoNodeState apply_local(const SymmetricUnitary& u_a, const SymmetricUnitary& u_b, const TwoNodeState& psi)
{
	if(u_a.dim() != psi.dim() || u_b.dim() != psi.dim())
		throw std::domain_error("apply_local: dimension mismatch");
	return TwoNodeState(u_a.matrix() * psi.amplitudes() * u_b.matrix().transpose());
}

TwoNodeState evolve_gravity(const TwoNodeState& psi, const GravityContext& ctx, double t)
{
	if(t < 0.0)
		throw std::domain_error("evolve_gravity: negative time");
	const int d = psi.dim();
	ComplexMatrix m = psi.amplitudes();
	for(int a = 0; a < d; ++a)
	{
		const double pa = redshift_phase(ctx, a, Node::A, t);
		for(int b = 0; b < d; ++b)
			m(a, b) *= std::polar(1.0, -(pa + redshift_phase(ctx, b, Node::B, t)));
	}
	return TwoNodeState(std::move(m));
}

ExcitationProfile extract_excitation_profile(const TwoNodeState& psi)
{
	const int d = psi.dim();
	ExcitationProfile p;
	p.branch_a = ComplexVector::Zero(d);
	p.branch_b = ComplexVector::Zero(d);
	p.weights = RealVector::Zero(d);
	double total = 0.0;
	for(int l = 1; l < d; ++l)
	{
		p.branch_b[l] = std::numbers::sqrt2 * psi(0, l);
		p.branch_a[l] = std::numbers::sqrt2 * psi(l, 0);
		p.weights[l] = std::norm(psi(0, l)) + std::norm(psi(l, 0));
		total += p.weights[l];
	}
	p.leakage = std::max(0.0, 1.0 - total);
	return p;
}

TwoNodeState sector_basis_state(const EnsembleDims& dims, int l, int sigma)
{
	if(l < 1 || l > dims.atoms())
		throw std::domain_error("sector index must lie in [1, N]");
	if(sigma != 1 && sigma != -1)
		throw std::domain_error("sector sign must be +1 or -1");
	ComplexMatrix m = ComplexMatrix::Zero(dims.dim(), dims.dim());
	m(0, l) = (1.0 / std::numbers::sqrt2);
	m(l, 0) = sigma * (1.0 / std::numbers::sqrt2);
	return TwoNodeState(std::move(m));
}

TwoNodeState delocalized_state(const DickeState& psi, double phi0)
{
	if(std::abs(psi[0]) > 1e-12)
		throw std::domain_error("delocalized_state: excitation must have no vacuum component");
	const int d = psi.dim();
	ComplexMatrix m = ComplexMatrix::Zero(d, d);
	const cplx phase = std::polar(1.0, -phi0);
	for(int l = 1; l < d; ++l)
	{
		m(0, l) = (1.0 / std::numbers::sqrt2) * psi[l];
		m(l, 0) = (1.0 / std::numbers::sqrt2) * phase * psi[l];
	}
	return TwoNodeState(std::move(m));
}

RealVector node_mass_distribution(const TwoNodeState& psi, Node node)
{
	const RealVector p2 = psi.amplitudes().cwiseAbs2();
	if(node == Node::A)
		return p2.rowwise().sum();
	return p2.colwise().sum().transpose();
}

} // namespace dickenet
