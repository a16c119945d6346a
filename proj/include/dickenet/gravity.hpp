#pragma once

// Gravitational redshift phases, decoherence timescale and the atom-clock
// interferometer (ACI) beat emulation.

#include <span>
#include <string>
#include <utility>
#include <optional>
#include <vector>

namespace dickenet
{

namespace constants
{
inline constexpr double hbar = 1.054571817e-34;     // J s
inline constexpr double speed_of_light = 299792458.0; // m/s
inline constexpr double standard_gravity = 9.80665;   // m/s^2
} // namespace constants

enum class Node
{
	A,
	B,
};

/// Lab-frame clock position; its potential is shifted to zero.
enum class ReferenceNode
{
	A,
	B,
	midpoint,
};

struct GravityContext
{
	double omega_eg = 0.0; // rad/s
	double c = constants::speed_of_light;
	double hbar = constants::hbar;
	double g = constants::standard_gravity;
	double delta_z = 1.0; // m, height of B above A
	/// Explicit (phi_A, phi_B) in m^2/s^2. When unset, phi_A = 0 and phi_B = g * delta_z.
	std::optional<std::pair<double, double>> potentials;
	ReferenceNode reference = ReferenceNode::A;

	/// Throws std::domain_error on omega_eg <= 0 or c <= 0.
	void validate() const;
	/// Human-readable warnings, e.g. when |phi|/c^2 exceeds 1e-3.
	[[nodiscard]] std::vector<std::string> warnings() const;

	[[nodiscard]] double raw_potential(Node node) const;
	/// Potential relative to the reference node.
	[[nodiscard]] double potential(Node node) const;
	/// phi_B - phi_A.
	[[nodiscard]] double potential_difference() const;
	/// m_eg = hbar omega_eg / c^2.
	[[nodiscard]] double mass_defect() const;
};

/// phi_{l,n} = l (omega_eg / c^2) phi(r_n) T, potentials re-referenced.
double redshift_phase(const GravityContext& ctx, int excitations, Node node, double t);

/// tau_dec = sqrt(2) hbar c^2 / (Delta E |Delta phi|), with |Delta phi| = g Delta z
/// for default potentials. Throws std::domain_error when delta_e <= 0.
double decoherence_time(const GravityContext& ctx, double delta_e);

/// exp(-(T/tau)^2).
double gaussian_envelope(double t, double tau);

struct AciParams
{
	double mass = 0.0;           // effective mass m~ (kg)
	double internal_omega = 0.0; // effective internal splitting omega~ (rad/s)

	/// m~ = l_down hbar omega_eg / c^2, omega~ = (l_up - l_down) omega_eg.
	static AciParams from_excitations(int l_up, int l_down, const GravityContext& ctx);
	void validate() const;
};

struct InterferenceTrace
{
	std::vector<double> times;  // lab-frame coordinate time T (s)
	std::vector<double> signal; // dimensionless I(T)

	void validate() const;
};

/// I(T) = (cos(dOmega T) + cos((dOmega + domega) T)) / 2 with
/// hbar dOmega = m~ Delta phi and domega = omega~ Delta phi / c^2.
InterferenceTrace aci_interference(const AciParams& aci, const GravityContext& ctx, std::span<const double> times);

/// Sliding-window (I_max - I_min)/2 centred on each sample. The window (in
/// seconds) must span at least 3 samples.
std::vector<double> aci_visibility(const InterferenceTrace& trace, double window);

/// times[k] = start + k (stop - start)/(steps - 1).
std::vector<double> linear_grid(double start, double stop, int steps);

} // namespace dickenet
