#pragma once

// Scenario configuration: YAML in, canonical YAML out (for the manifest echo
// and the parameter hash).

#include "dickenet/exact_circuits.hpp"
#include "dickenet/gravity.hpp"
#include "dickenet/measurement.hpp"
#include "dickenet/network.hpp"
#include "dickenet/qubit_circuit.hpp"
#include "dickenet/varprep.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace dickenet
{

/// Invalid configuration; what() carries "line L, column C: ..." when the
/// problem maps to a source position.
class ConfigError : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

/// An angle kept together with its source spelling ("pi/50", "0.1").
struct Angle
{
	double value = 0.0;
	std::string text = "0";

	static Angle parse(const std::string& text);
	static Angle of(double value);
};

struct TargetSpec
{
	enum class Kind
	{
		eigenstate,
		clock,
		coherent,
	};
	Kind kind = Kind::eigenstate;
	int m1 = 1; // eigenstate M, or clock M1
	int m2 = 2; // clock M2

	[[nodiscard]] DickeState build(const EnsembleDims& dims) const;
	[[nodiscard]] std::string label() const;
};

struct VariationalSpec
{
	TargetSpec target;
	int p = 3;
	double lambda = 1.0;
	OptimizerConfig optimizer;
};

struct ExactSpec
{
	enum class Kind
	{
		noon_minus_one,
		psi_alpha,
		sequential,
	};
	Kind kind = Kind::noon_minus_one;
	Angle alpha;
	int k = 0;
	/// Sequential target; n_qubits is N.
	SequentialKind sequential = sequential::Eigenstate{1};
};

struct ProfileSpec
{
	/// Weights for l = 1..N (index 0 of the vector is l = 1); renormalized.
	std::vector<double> weights;
};

using StateSpec = std::variant<VariationalSpec, ExactSpec, ProfileSpec>;

struct TimeGrid
{
	double start = 0.0;
	double stop = 1.0;
	int steps = 2;
};

struct AciSpec
{
	int l_up = 2;
	int l_down = 1;
	/// Visibility window in seconds.
	double window = 1.0;
};

struct ScenarioConfig
{
	std::string name = "scenario";
	int atoms = 2;
	StateSpec state = ExactSpec{};
	GravityContext gravity;
	SeedSpec seed;
	SchemeKind scheme = SchemeKind::nonlocal_parity;
	EvalPath path = EvalPath::analytic;
	TimeGrid time;
	std::uint64_t rng_seed = 1;
	std::string output = "out";
	std::optional<AciSpec> aci;
	int n_max = 0;

	void validate() const;
};

/// Throws ConfigError on any problem.
ScenarioConfig parse_scenario(const std::string& yaml_text);
ScenarioConfig load_scenario(const std::string& path);

/// Canonical YAML; re-parses to an equal configuration.
std::string echo_scenario(const ScenarioConfig& config);

/// FNV-1a 64 of the canonical echo, as 16 hex digits.
std::string parameter_hash(const ScenarioConfig& config);

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);

std::string to_string(SchemeKind kind);
std::string to_string(EvalPath path);

/// Everything needed to run the protocol for a scenario.
struct PreparedScenario
{
	TwoNodeState state;
	/// The local amplification unitary U_p (exact or optimized).
	SymmetricUnitary u_p;
	std::optional<OptimizationResult> optimization;
};

PreparedScenario prepare_state(const ScenarioConfig& config);

/// U with U|0> = |0> and U|1> = |psi>, completed by a Householder reflection
/// on the excited subspace. Needs psi_0 = 0.
SymmetricUnitary amplification_unitary(const DickeState& psi);

RamseyScenario make_ramsey(const ScenarioConfig& config, const PreparedScenario& prepared);

} // namespace dickenet
