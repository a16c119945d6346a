#pragma once

// Two-node states over the full (N+1)^2 tensor-product basis.

#include "dickenet/dicke.hpp"
#include "dickenet/gravity.hpp"

namespace dickenet
{

/// Amplitudes Psi(l_A, l_B); serialized row-major with A as the major index.
class TwoNodeState
{
public:
	/// Throws std::domain_error unless square and normalized (1e-10).
	explicit TwoNodeState(ComplexMatrix amplitudes);

	static TwoNodeState product(const DickeState& a, const DickeState& b);
	static TwoNodeState basis(const EnsembleDims& dims, int l_a, int l_b);

	[[nodiscard]] const ComplexMatrix& amplitudes() const { return amp_; }
	[[nodiscard]] cplx operator()(int l_a, int l_b) const { return amp_(l_a, l_b); }
	[[nodiscard]] int dim() const { return static_cast<int>(amp_.rows()); }
	[[nodiscard]] EnsembleDims dims() const { return EnsembleDims(dim() - 1); }
	/// Row-major A-major flattening, length (N+1)^2.
	[[nodiscard]] ComplexVector flattened() const;
	/// <this|other>.
	[[nodiscard]] cplx inner(const TwoNodeState& other) const;

private:
	ComplexMatrix amp_;
};

struct SeedSpec
{
	double phi0 = 0.0;
	/// Weight of the |0,0> admixture.
	double infidelity = 0.0;

	void validate() const;
};

/// sqrt(1-eps) (|0,1> + e^{-i phi0}|1,0>)/sqrt(2) + sqrt(eps)|0,0>.
TwoNodeState seed_state(const EnsembleDims& dims, const SeedSpec& spec);

/// (U_A (x) U_B) Psi as U_A Psi U_B^T.
TwoNodeState apply_local(const SymmetricUnitary& u_a, const SymmetricUnitary& u_b, const TwoNodeState& psi);

/// Multiplies Psi(l_A, l_B) by exp(-i (phi_{l_A,A} + phi_{l_B,B})).
TwoNodeState evolve_gravity(const TwoNodeState& psi, const GravityContext& ctx, double t);

/// Projection onto the ideal sector span{|0,l>, |l,0> : l >= 1}.
struct ExcitationProfile
{
	/// sqrt(2) Psi(0, l) and sqrt(2) Psi(l, 0); index 0 unused (zero).
	ComplexVector branch_b;
	ComplexVector branch_a;
	/// |psi_l|^2 = |Psi(0,l)|^2 + |Psi(l,0)|^2; index 0 is zero.
	RealVector weights;
	/// 1 - sum(weights).
	double leakage = 0.0;
};

ExcitationProfile extract_excitation_profile(const TwoNodeState& psi);

/// (|0,l> + sigma |l,0>)/sqrt(2), sigma = +1 or -1.
TwoNodeState sector_basis_state(const EnsembleDims& dims, int l, int sigma);

/// (|0>|psi> + e^{-i phi0}|psi>|0>)/sqrt(2) for a local excitation psi with psi_0 = 0.
TwoNodeState delocalized_state(const DickeState& psi, double phi0);

/// Reduced single-node excitation distribution of node A or B.
RealVector node_mass_distribution(const TwoNodeState& psi, Node node);

} // namespace dickenet
