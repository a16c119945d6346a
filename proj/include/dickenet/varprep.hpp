#pragma once

// Variational compilation of the amplification unitary U_p from layers of
// one-axis twisting followed by one global rotation.

#include "dickenet/dicke.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dickenet
{

struct TwistLayer
{
	CollectiveAxis axis;
	double chi;
};

struct FinalRotation
{
	CollectiveAxis axis;
	double theta;
};

/// U_p = R_{n_r}(theta_r) T_{n_p}(chi_p) ... T_{n_1}(chi_1).
struct VariationalAnsatz
{
	std::vector<TwistLayer> layers;
	FinalRotation final_rotation{CollectiveAxis::z_axis(), 0.0};

	[[nodiscard]] int depth() const { return static_cast<int>(layers.size()); }
	void validate() const;

	static int raw_parameter_count(int p) { return 3 * p + 3; }
	static int reduced_parameter_count(int p) { return 3 * p + 1; }

	/// Reduced parameters: layer 1 (polar, chi) at azimuth 0; layers 2..p
	/// (polar, azimuth, chi); final rotation about an equatorial axis
	/// (azimuth, theta). Cost functions are blind to a global z rotation, which
	/// removes the two other parameters.
	static VariationalAnsatz from_reduced(int p, std::span<const double> params);
};

SymmetricUnitary build_circuit(const EnsembleDims& dims, const VariationalAnsatz& ansatz);

/// Applies the ansatz to the columns of `x` without forming the full unitary.
/// Rotations go through one cached eigendecomposition of S_y.
class AnsatzPropagator
{
public:
	explicit AnsatzPropagator(const EnsembleDims& dims);

	[[nodiscard]] ComplexMatrix apply(const VariationalAnsatz& ansatz, ComplexMatrix x) const;
	/// Columns U|0> and U|1>.
	[[nodiscard]] ComplexMatrix vacuum_and_single(const VariationalAnsatz& ansatz) const;

private:
	void rz(double t, ComplexMatrix& x) const;
	void ry(double t, ComplexMatrix& x) const;
	void tz(double chi, ComplexMatrix& x) const;

	EnsembleDims dims_;
	ComplexMatrix v_;     // eigenvectors of S_y
	RealVector lambda_;   // its snapped eigenvalues
	RealVector m_;        // S_z diagonal, l - S
};

/// -|<0|U|0>|^2 - lambda sum_{l>=1} |<l|psi>| |<l|U|1>|.
double cost_target(const SymmetricUnitary& u, const DickeState& target, double lambda);
/// -|<0|U|0>|^2 - l1 <S_z>/N - l2 sqrt(Var S_z)/N on U|1>.
double cost_energy(const SymmetricUnitary& u, double lambda1, double lambda2);

struct CostSpec
{
	enum class Kind
	{
		target_distribution,
		energy_moments,
	};

	Kind kind = Kind::target_distribution;
	std::optional<DickeState> target;
	double lambda = 1.0;
	double lambda1 = 0.0;
	double lambda2 = 0.0;
	/// Free-form label echoed into circuit files, e.g. "clock 5 15".
	std::string label;

	static CostSpec target_distribution(DickeState target, double lambda = 1.0, std::string label = {});
	static CostSpec energy_moments(double lambda1, double lambda2);
	void validate() const;

	/// Cost from the two columns U|0>, U|1>.
	[[nodiscard]] double evaluate_columns(const ComplexVector& u0, const ComplexVector& u1) const;
	[[nodiscard]] double evaluate(const SymmetricUnitary& u) const;
};

struct OptimizerConfig
{
	int restarts = 50;
	/// Evaluation budget of one local search, shared by its simplex
	/// re-initialisations.
	int max_evals = 20000;
	double tolerance = 1e-9;
	std::uint64_t seed = 20240601;
	/// Basin hops per restart: the incumbent is kicked by Gaussian noise of
	/// width hop_step on every reduced parameter, searched locally again, and
	/// replaced when the result is lower.
	int hops = 0;
	double hop_step = 0.2;

	void validate() const;
};

struct RestartRecord
{
	int index = 0;
	double cost = 0.0;
	int evaluations = 0;
	/// Non-finite cost met during the search.
	bool aborted = false;
};

struct OptimizationResult
{
	VariationalAnsatz ansatz;
	std::vector<double> parameters; // reduced
	double cost = 0.0;
	int best_restart = -1;
	std::vector<RestartRecord> restarts;
	/// Best-so-far cost after every simplex iteration of the winning restart.
	std::vector<double> trace;
};

/// Nelder-Mead from `restarts` seeded random starts over the reduced
/// parameters, each followed by `hops` seeded basin hops; the best restart
/// wins, ties go to the lowest index.
OptimizationResult optimize(const EnsembleDims& dims, const CostSpec& cost, int p, const OptimizerConfig& config);

/// Random reduced starting point for restart `index`: chi uniform in [0, pi],
/// axes uniform on the sphere, theta uniform in [0, 2 pi).
std::vector<double> initial_point(int p, std::uint64_t seed, int index);

DickeState mass_eigenstate(const EnsembleDims& dims, int m);
DickeState clock_state(const EnsembleDims& dims, int m1, int m2);
/// R_y(pi/2)|0>.
DickeState coherent_target(const EnsembleDims& dims);

struct CircuitRecord
{
	int atoms = 0;
	VariationalAnsatz ansatz;
	double cost = 0.0;
	std::uint64_t seed = 0;
	CostSpec cost_spec;
};

void write_circuit(std::ostream& os, const CircuitRecord& record);
CircuitRecord read_circuit(std::istream& is);

} // namespace dickenet
