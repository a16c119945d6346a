#pragma once

// Subcommands of the `dickenet` executable. Every command writes into a
// staging directory and renames it into place after the manifest is written,
// so a run directory either holds a manifest and all outputs or does not exist.

#include "dickenet/measurement.hpp"
#include "dickenet/scenario.hpp"
#include "dickenet/spectrum.hpp"
#include "dickenet/verify.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dickenet::cli
{

enum ExitCode : int
{
	exit_ok = 0,
	exit_verify_failed = 1,
	exit_config_error = 2,
	exit_numeric_failure = 3,
};

inline constexpr const char* artifact_version = "0.1.0";
inline constexpr const char* output_root_env = "DICKENET_OUTPUT_ROOT";

struct RunOptions
{
	/// Replaces the config's rng_seed.
	std::optional<std::uint64_t> seed;
	std::ostream* out = nullptr; // defaults to std::cout
	std::ostream* err = nullptr; // defaults to std::cerr
};

/// $DICKENET_OUTPUT_ROOT when set, the working directory otherwise.
std::filesystem::path output_root();

/// Run directory of a config: output_root() / config.output.
std::filesystem::path run_directory(const ScenarioConfig& config);

/// Derived quantities of one simulated scenario.
struct ScenarioMetrics
{
	double leakage = 0.0;
	/// |<0|U_p|0>|^2.
	double vacuum_fidelity = 0.0;
	/// Spread of the local excitation energy (J).
	double delta_e = 0.0;
	std::optional<double> tau_predicted;
	std::optional<EnvelopeFit> envelope;
	RevivalReport revival;
	std::optional<SpectralPeak> peak;
};

struct ScenarioRun
{
	PreparedScenario prepared;
	RamseyResult result;
	/// The analytic trace when computed, the oracle trace otherwise.
	InterferenceTrace trace;
	ScenarioMetrics metrics;
};

/// Prepares the state, runs the protocol and evaluates the metrics; no I/O.
ScenarioRun run_scenario(const ScenarioConfig& config);

/// Excitation profile weights (index l) of the prepared local state.
RealVector local_profile(const PreparedScenario& prepared);

int cmd_simulate(const std::string& config_path, const RunOptions& options = {});
int cmd_prepare(const std::string& config_path, const RunOptions& options = {});
int cmd_aci(const std::string& config_path, const RunOptions& options = {});

/// parameter is one of alpha, N, delta_z, T_max; values accept expressions
/// such as "pi/50".
int cmd_scan(const std::string& config_path, const std::string& parameter, const std::vector<std::string>& values,
             const RunOptions& options = {});

struct VerifyOptions
{
	VerifyLevel level = VerifyLevel::fast;
	/// Planted fault from mutation_names().
	std::optional<std::string> mutation;
	/// Also write the rendered report to this file.
	std::optional<std::string> report_path;
};

int cmd_verify(const VerifyOptions& verify, const RunOptions& options = {});

} // namespace dickenet::cli
