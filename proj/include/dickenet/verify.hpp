#pragma once

// Self-check suite behind `dickenet verify`: oracle equivalences, closed-form
// identities and module invariants, with a deterministic report.

#include "dickenet/gravity.hpp"
#include "dickenet/measurement.hpp"

#include <functional>
#include <string>
#include <vector>

namespace dickenet
{

enum class VerifyLevel
{
	fast, // oracles up to N = 8
	full, // oracles up to N = 12, closed forms up to N = 40
};

using SignalFunction = std::function<double(const RealVector&, const GravityContext&, double, double)>;

/// The analytic signal implementations under test; swapped out to check that
/// the suite notices planted faults.
struct SignalHooks
{
	SignalFunction nonlocal = signal_nonlocal_analytic;
	SignalFunction local = signal_local_analytic;
};

struct CheckResult
{
	std::string name;
	bool passed = false;
	/// Worst deviation or a short failure reason.
	std::string detail;
};

struct VerifyReport
{
	VerifyLevel level = VerifyLevel::fast;
	std::vector<CheckResult> checks;

	[[nodiscard]] bool all_passed() const;
	/// One line per check plus a summary line; contains no timings.
	[[nodiscard]] std::string render() const;
};

VerifyReport run_verify(VerifyLevel level, const SignalHooks& hooks = {});

/// Named planted faults for the analytic signals, e.g. "nonlocal-phi0-sign".
std::vector<std::string> mutation_names();
SignalHooks mutated_hooks(const std::string& name);

} // namespace dickenet
