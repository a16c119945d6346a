#pragma once

// Closed-form preparation circuits: double twisting, energy tuning and the
// NOON-1 state, plus the differential-phase quantum Fisher information.

#include "dickenet/dicke.hpp"
#include "dickenet/network.hpp"

namespace dickenet
{

/// Thrown for parameter combinations a closed form does not cover (odd N).
class UnsupportedConfiguration : public std::domain_error
{
public:
	using std::domain_error::domain_error;
};

enum class DoubleTwistVariant
{
	/// T_y(+pi/2) T_x(pi/2) for odd S, T_y(-pi/2) T_x(pi/2) for even S.
	signed_angle,
	/// R_y(pi) T_y(pi/2) T_x(pi/2).
	positive_angle,
};

/// Double twisting built from gate factories. Maps |0> -> |0> and |1> -> |N-1>
/// up to phases. Throws UnsupportedConfiguration for odd N.
SymmetricUnitary u_dt(const EnsembleDims& dims, DoubleTwistVariant variant = DoubleTwistVariant::signed_angle);

/// e^{i pi/4((-1)^S - 1)} sum_even |l><l| + e^{i pi/4(3 - (-1)^S)} sum_odd |N-l><l|.
SymmetricUnitary u_dt_closed_form(const EnsembleDims& dims);

/// apply_local(U_DT, U_DT, seed_state).
TwoNodeState noon_minus_one(const EnsembleDims& dims, const SeedSpec& seed);

/// (|0,N> + |N,0>)/sqrt(2).
TwoNodeState noon_state(const EnsembleDims& dims);

/// F_Q = 4 Var(G), G = (S_z^A - S_z^B)/2.
double qfi_differential_phase(const TwoNodeState& psi);

struct AlphaSpec
{
	double alpha = 0.0;
	int k = 0;

	void validate() const;
	/// (1 + 2k) pi / (2 (2S - 1) cos alpha).
	[[nodiscard]] double chi(const EnsembleDims& dims) const;
};

/// R_f = R_y(-alpha') R_z(zeta) with the vacuum-preservation maximiser.
struct FinalRotationFit
{
	double alpha_prime = 0.0;
	double zeta = 0.0;
	/// |<0|V_alpha|0>|^2 at the optimum.
	double vacuum_fidelity = 0.0;
};

FinalRotationFit fit_final_rotation(const EnsembleDims& dims, const AlphaSpec& spec);

/// V_alpha = R_f T_z(chi) R_y(alpha). Throws UnsupportedConfiguration for odd
/// N and std::domain_error for cos(alpha) = 0.
SymmetricUnitary v_alpha(const EnsembleDims& dims, const AlphaSpec& spec);

/// apply_local(V_alpha, V_alpha, noon_minus_one).
TwoNodeState psi_alpha(const EnsembleDims& dims, const AlphaSpec& spec, const SeedSpec& seed);

/// (3N - 2)/4 sin^2(2 alpha), the S_z variance of R_y(2 alpha)|N-1>.
double tilted_variance(const EnsembleDims& dims, double alpha);

} // namespace dickenet
