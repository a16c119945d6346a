#pragma once

// Interference signals of the non-local Ramsey protocol: analytic formulas on
// the excitation profile, and brute-force photon-number-space oracles for the
// beam-splitter parity and quadrature-product readouts.

#include "dickenet/gravity.hpp"
#include "dickenet/kernels.hpp"
#include "dickenet/network.hpp"

#include <optional>
#include <vector>

namespace dickenet
{

/// sum_{l>=1} w_l cos(phi_{l,B} - phi_{l,A} - phi0). `weights` is indexed by l
/// and its entry 0 is ignored.
double signal_nonlocal_analytic(const RealVector& weights, const GravityContext& ctx, double phi0, double t);

/// 1/2 sum_{l,l'>=1} w_l w_l' cos(phi_{l,B} - phi_{l',A} - phi0).
double signal_local_analytic(const RealVector& weights, const GravityContext& ctx, double phi0, double t);

/// sum_{l>=1} (|<Psi_{l,+}|Psi>|^2 - |<Psi_{l,-}|Psi>|^2). Population outside
/// the ideal sector contributes nothing.
double position_observable_expectation(const TwoNodeState& psi);

/// Two optical modes truncated at n_max photons each, amplitudes C(n_A, n_B).
class TwoModeFockState
{
public:
	/// Throws std::domain_error unless square and normalized (1e-10).
	explicit TwoModeFockState(ComplexMatrix amplitudes);

	/// Memory readout: |l_A, l_B> becomes |n_A = l_A, n_B = l_B>. Needs n_max >= N+1.
	static TwoModeFockState from_atomic(const TwoNodeState& psi, int n_max);

	[[nodiscard]] const ComplexMatrix& amplitudes() const { return amp_; }
	[[nodiscard]] int n_max() const { return static_cast<int>(amp_.rows()) - 1; }
	/// Largest n_A + n_B with non-zero amplitude.
	[[nodiscard]] int max_total_photons() const;

private:
	ComplexMatrix amp_;
};

/// exp(-(pi/4) K) (-1)^{N_B} restricted to total photon number n, in the basis
/// |k, n-k>, k = 0..n; K = a_A^dagger a_B - a_B^dagger a_A. It realizes the
/// transfer matrix (1/sqrt 2)[[1, 1], [1, -1]].
ComplexMatrix beam_splitter_block(int n);

/// Exact 50/50 beam splitter, applied block by block in total photon number.
/// Throws std::domain_error when the input occupies a block that would leave
/// the truncation.
TwoModeFockState apply_beam_splitter(const TwoModeFockState& in);

/// (a + a^dagger)/sqrt(2) truncated to n_max photons.
ComplexMatrix quadrature_matrix(int n_max);

/// <(-1)^{N_2}> after the beam splitter.
double oracle_beam_splitter_parity(const TwoNodeState& psi, int n_max);

/// <q_A q_B> after decoding with U_m on both nodes.
double oracle_quadrature_product(const TwoNodeState& psi, const SymmetricUnitary& decoder, int n_max);

/// Default truncation N + 2.
int default_n_max(const EnsembleDims& dims);

enum class SchemeKind
{
	nonlocal_parity,
	local_quadrature,
	position_observable,
};

struct MeasurementScheme
{
	SchemeKind kind = SchemeKind::nonlocal_parity;
	/// U_m; required (= U_p^dagger) for local_quadrature, absent otherwise.
	std::optional<SymmetricUnitary> decoder;

	void validate() const;
};

enum class EvalPath
{
	analytic,
	oracle,
	both,
};

struct RamseyScenario
{
	TwoNodeState prepared;
	GravityContext ctx;
	MeasurementScheme scheme;
	/// Seed phase, entering the analytic formulas as a constant offset.
	double phi0 = 0.0;
	std::vector<double> times;
	/// Fock truncation for the oracle path; 0 picks the default.
	int n_max = 0;
};

struct RamseyResult
{
	std::optional<InterferenceTrace> analytic;
	std::optional<InterferenceTrace> oracle;
	/// max |analytic - oracle| when both paths ran.
	double max_abs_diff = 0.0;
	/// Population outside the ideal sector of the prepared state.
	double leakage = 0.0;
};

/// For every T: evolve under gravity, decode, measure. The analytic path uses
/// the excitation profile; the oracle path goes through photon-number space
/// (position_observable has no Fock representation and evaluates the
/// projector expectation on the full state instead).
RamseyResult run_ramsey(const RamseyScenario& scenario, EvalPath path,
                        kernels::Exec exec = kernels::Exec::parallel);

struct EnvelopeMaxima
{
	std::vector<double> times;
	std::vector<double> values;
	/// Index of the first maximum exceeding its predecessor, or values.size().
	std::size_t revival_index = 0;
};

/// Local maxima of |I| (the first sample counts), refined by three-point
/// parabolic interpolation.
EnvelopeMaxima envelope_maxima(const InterferenceTrace& trace);

struct EnvelopeFit
{
	double tau = 0.0;
	/// Number of maxima used (those before revival onset).
	int points = 0;
	double rms_residual = 0.0;
};

/// Least-squares fit of exp(-(T/tau)^2) to the maxima preceding the first
/// revival. Throws std::domain_error with fewer than five such maxima.
EnvelopeFit envelope_fit(const InterferenceTrace& trace);

struct RevivalReport
{
	bool detected = false;
	double onset_time = 0.0;
	/// Smallest envelope maximum before the revival peak.
	double trough = 0.0;
	/// Largest envelope maximum after the trough.
	double peak = 0.0;
};

/// A revival is an envelope maximum rising at least `rise` above the lowest
/// preceding maximum, after that maximum has dropped below half the initial
/// contrast.
RevivalReport detect_revival(const InterferenceTrace& trace, double rise = 0.1);

} // namespace dickenet
