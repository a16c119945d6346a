#pragma once

// Qubit-level backend for the sequential-excitations subspace, where the
// state with l excitations is |e...e g...g> (first l qubits excited).
// Qubit q is bit q of a statevector index, so that state has index 2^l - 1.

#include "dickenet/dicke.hpp"
#include "dickenet/kernels.hpp"

#include <complex>
#include <iosfwd>
#include <variant>
#include <vector>

namespace dickenet
{

enum class GateKind
{
	cnot,
	ch,
	cry,
};

struct QubitGate
{
	GateKind kind;
	int control;
	int target;
	double theta = 0.0; // used by cry only

	friend bool operator==(const QubitGate&, const QubitGate&) = default;
};

class QubitCircuit
{
public:
	explicit QubitCircuit(int n_qubits);

	/// Throws std::domain_error on out-of-range or coinciding qubit indices.
	void add(const QubitGate& gate);

	[[nodiscard]] int n_qubits() const { return n_; }
	[[nodiscard]] const std::vector<QubitGate>& gates() const { return gates_; }
	[[nodiscard]] int count(GateKind kind) const;

	friend bool operator==(const QubitCircuit&, const QubitCircuit&) = default;

private:
	int n_;
	std::vector<QubitGate> gates_;
};

namespace sequential
{
/// |1> -> |l|.
struct Eigenstate
{
	int l;
};
/// |1> -> (|lo> + |hi>)/sqrt(2).
struct Clock
{
	int lo;
	int hi;
};
/// |1> -> sum over l = first..first+K with the product-formula weights.
struct Profile
{
	int first;
	std::vector<double> thetas; // length K
};
} // namespace sequential

using SequentialKind = std::variant<sequential::Eigenstate, sequential::Clock, sequential::Profile>;

/// Gate sequence for the requested target; every gate is conditioned (directly
/// or through a chain) on the first qubit, so |g...g> is left invariant.
QubitCircuit sequential_circuit(int n_qubits, const SequentialKind& kind);

/// Largest register the brute-force simulator accepts.
inline constexpr int max_simulated_qubits = 20;

/// Statevector after running the circuit on the basis state `initial_index`.
std::vector<std::complex<double>> simulate(const QubitCircuit& circuit, std::size_t initial_index,
                                           kernels::Exec exec = kernels::Exec::parallel);

/// Populations of the sequential states |0>..|n> in a statevector, plus the
/// weight found outside that subspace as the last entry.
RealVector sequential_populations(const std::vector<std::complex<double>>& state, int n_qubits);

/// |psi_l|^2 for l = 0..n from the product formula: for l = first + j,
/// P = [j < K ? cos^2(theta_{j+1}/2) : 1] * prod_{i=1..j} sin^2(theta_i/2).
RealVector profile_probabilities(int n_qubits, const sequential::Profile& profile);

/// Amplitude vector in the Dicke basis of the ideal sequential target.
DickeState sequential_target(int n_qubits, const SequentialKind& kind);

/// One gate per line: `CNOT c t`, `CH c t`, `CRY c t theta`, after a
/// `qubits <n>` line. `#` starts a comment.
void write_qubit_circuit(std::ostream& os, const QubitCircuit& circuit);
QubitCircuit read_qubit_circuit(std::istream& is);

} // namespace dickenet
