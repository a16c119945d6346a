#include "dickenet/qubit_circuit.hpp"

#include "dickenet/serialize.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace dickenet
{

QubitCircuit::QubitCircuit(int n_qubits) : n_{n_qubits}
{
	if(n_qubits < 1)
		throw std::domain_error("qubit circuit needs at least one qubit");
}

void QubitCircuit::add(const QubitGate& gate)
{
	if(gate.control < 0 || gate.control >= n_ || gate.target < 0 || gate.target >= n_)
		throw std::domain_error("gate qubit index out of range");
	if(gate.control == gate.target)
		throw std::domain_error("gate control and target coincide");
	if(!std::isfinite(gate.theta))
		throw std::domain_error("gate angle must be finite");
	gates_.push_back(gate);
}

int QubitCircuit::count(GateKind kind) const
{
	int c = 0;
	for(const auto& g : gates_)
		c += g.kind == kind;
	return c;
}

namespace
{

void check_level(int n_qubits, int l, const char* what)
{
	if(l < 1 || l > n_qubits)
		throw std::domain_error(std::string(what) + " excitation number out of range [1, n_qubits]");
}

struct Builder
{
	int n;

	QubitCircuit operator()(const sequential::Eigenstate& e) const
	{
		check_level(n, e.l, "eigenstate");
		QubitCircuit c(n);
		for(int q = 1; q < e.l; ++q)
			c.add({GateKind::cnot, 0, q});
		return c;
	}

	QubitCircuit operator()(const sequential::Clock& k) const
	{
		check_level(n, k.lo, "clock");
		check_level(n, k.hi, "clock");
		if(k.lo >= k.hi)
			throw std::domain_error("clock needs lo < hi");
		QubitCircuit c(n);
		for(int q = 1; q < k.lo; ++q)
			c.add({GateKind::cnot, 0, q});
		c.add({GateKind::ch, 0, k.lo});
		for(int q = k.lo + 1; q < k.hi; ++q)
			c.add({GateKind::cnot, k.lo, q});
		return c;
	}

	QubitCircuit operator()(const sequential::Profile& p) const
	{
		check_level(n, p.first, "profile");
		const int k = static_cast<int>(p.thetas.size());
		if(p.first + k > n)
			throw std::domain_error("profile reaches beyond the last qubit");
		QubitCircuit c(n);
		for(int q = 1; q < p.first; ++q)
			c.add({GateKind::cnot, 0, q});
		for(int j = 0; j < k; ++j)
			c.add({GateKind::cry, p.first - 1 + j, p.first + j, p.thetas[j]});
		return c;
	}
};

std::array<std::complex<double>, 4> gate_matrix(const QubitGate& g)
{
	switch(g.kind)
	{
	case GateKind::cnot:
		return {0.0, 1.0, 1.0, 0.0};
	case GateKind::ch:
	{
		const double h = (1.0 / std::numbers::sqrt2);
		return {h, h, h, -h};
	}
	case GateKind::cry:
	{
		const double c = std::cos(0.5 * g.theta);
		const double s = std::sin(0.5 * g.theta);
		return {c, -s, s, c};
	}
	}
	throw std::logic_error("unknown gate kind");
}

} // namespace

QubitCircuit sequential_circuit(int n_qubits, const SequentialKind& kind)
{
	return std::visit(Builder{n_qubits}, kind);
}

std::vector<std::complex<double>> simulate(const QubitCircuit& circuit, std::size_t initial_index,
                                           kernels::Exec exec)
{
	const int n = circuit.n_qubits();
	if(n > max_simulated_qubits)
		throw std::domain_error("brute-force simulation is capped at " + std::to_string(max_simulated_qubits) +
		                        " qubits");
	const std::size_t size = std::size_t{1} << n;
	if(initial_index >= size)
		throw std::domain_error("initial basis index out of range");
	std::vector<std::complex<double>> state(size);
	state[initial_index] = 1.0;
	for(const auto& g : circuit.gates())
		kernels::apply_controlled_gate(state, g.control, g.target, gate_matrix(g), exec);
	return state;
}

RealVector sequential_populations(const std::vector<std::complex<double>>& state, int n_qubits)
{
	if(state.size() != (std::size_t{1} << n_qubits))
		throw std::domain_error("statevector length does not match qubit count");
	RealVector p = RealVector::Zero(n_qubits + 2);
	double inside = 0.0;
	for(int l = 0; l <= n_qubits; ++l)
	{
		p[l] = std::norm(state[(std::size_t{1} << l) - 1]);
		inside += p[l];
	}
	double total = 0.0;
	for(const auto& a : state)
		total += std::norm(a);
	p[n_qubits + 1] = std::max(0.0, total - inside);
	return p;
}

RealVector profile_probabilities(int n_qubits, const sequential::Profile& profile)
{
	sequential_circuit(n_qubits, profile); // range checks
	const int k = static_cast<int>(profile.thetas.size());
	RealVector p = RealVector::Zero(n_qubits + 1);
	double carried = 1.0; // prod of sin^2 so far
	for(int j = 0; j <= k; ++j)
	{
		const double stay = j < k ? std::pow(std::cos(0.5 * profile.thetas[j]), 2) : 1.0;
		p[profile.first + j] = stay * carried;
		if(j < k)
			carried *= std::pow(std::sin(0.5 * profile.thetas[j]), 2);
	}
	return p;
}

DickeState sequential_target(int n_qubits, const SequentialKind& kind)
{
	const EnsembleDims dims(n_qubits);
	ComplexVector v = ComplexVector::Zero(dims.dim());
	if(const auto* e = std::get_if<sequential::Eigenstate>(&kind))
	{
		check_level(n_qubits, e->l, "eigenstate");
		v[e->l] = 1.0;
	}
	else if(const auto* c = std::get_if<sequential::Clock>(&kind))
	{
		sequential_circuit(n_qubits, *c);
		v[c->lo] = (1.0 / std::numbers::sqrt2);
		v[c->hi] = (1.0 / std::numbers::sqrt2);
	}
	else
	{
		v = profile_probabilities(n_qubits, std::get<sequential::Profile>(kind)).cwiseSqrt().cast<cplx>();
	}
	return DickeState::normalized(std::move(v));
}

void write_qubit_circuit(std::ostream& os, const QubitCircuit& circuit)
{
	os << "qubits " << circuit.n_qubits() << '\n';
	for(const auto& g : circuit.gates())
	{
		switch(g.kind)
		{
		case GateKind::cnot:
			os << "CNOT " << g.control << ' ' << g.target << '\n';
			break;
		case GateKind::ch:
			os << "CH " << g.control << ' ' << g.target << '\n';
			break;
		case GateKind::cry:
			os << "CRY " << g.control << ' ' << g.target << ' ' << format_real(g.theta) << '\n';
			break;
		}
	}
}

QubitCircuit read_qubit_circuit(std::istream& is)
{
	std::string line;
	int line_no = 0;
	std::optional<QubitCircuit> circuit;
	const auto fail = [&](const std::string& what) {
		throw std::runtime_error("line " + std::to_string(line_no) + ": " + what);
	};
	while(std::getline(is, line))
	{
		++line_no;
		if(const auto hash = line.find('#'); hash != std::string::npos)
			line.erase(hash);
		std::istringstream ls(line);
		std::string op;
		if(!(ls >> op))
			continue;
		if(op == "qubits")
		{
			int n = 0;
			if(circuit || !(ls >> n))
				fail("malformed or repeated 'qubits' line");
			circuit.emplace(n);
			continue;
		}
		if(!circuit)
			fail("'qubits <n>' must come first");
		QubitGate g{GateKind::cnot, -1, -1};
		if(op == "CNOT")
			g.kind = GateKind::cnot;
		else if(op == "CH")
			g.kind = GateKind::ch;
		else if(op == "CRY")
			g.kind = GateKind::cry;
		else
			fail("unknown gate '" + op + "'");
		if(!(ls >> g.control >> g.target) || (g.kind == GateKind::cry && !(ls >> g.theta)))
			fail("malformed " + op + " operands");
		std::string extra;
		if(ls >> extra)
			fail("trailing text '" + extra + "'");
		try
		{
			circuit->add(g);
		}
		catch(const std::domain_error& e)
		{
			fail(e.what());
		}
	}
	if(!circuit)
		throw std::runtime_error("empty qubit circuit");
	return *circuit;
}

} // namespace dickenet
