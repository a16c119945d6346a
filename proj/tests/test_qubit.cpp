#include "dickenet/qubit_circuit.hpp"

#include <doctest.h>

#include <numbers>
#include <random>
#include <sstream>

using namespace dickenet;
using std::numbers::pi;

namespace
{

using State = std::vector<std::complex<double>>;

/// Gate-by-gate statevector update written against the definitions only.
State reference_run(const QubitCircuit& c, std::size_t initial)
{
	State psi(std::size_t{1} << c.n_qubits(), 0.0);
	psi[initial] = 1.0;
	for(const QubitGate& g : c.gates())
	{
		const std::size_t cm = std::size_t{1} << g.control;
		const std::size_t tm = std::size_t{1} << g.target;
		for(std::size_t b = 0; b < psi.size(); ++b)
		{
			if(!(b & cm) || (b & tm))
				continue;
			const auto a0 = psi[b];
			const auto a1 = psi[b | tm];
			switch(g.kind)
			{
			case GateKind::cnot:
				psi[b] = a1;
				psi[b | tm] = a0;
				break;
			case GateKind::ch:
				psi[b] = (a0 + a1) / std::numbers::sqrt2;
				psi[b | tm] = (a0 - a1) / std::numbers::sqrt2;
				break;
			case GateKind::cry:
			{
				const double c2 = std::cos(g.theta / 2);
				const double s2 = std::sin(g.theta / 2);
				psi[b] = c2 * a0 - s2 * a1;
				psi[b | tm] = s2 * a0 + c2 * a1;
				break;
			}
			}
		}
	}
	return psi;
}

std::size_t sequential_index(int l) { return (std::size_t{1} << l) - 1; }

double max_diff(const State& a, const State& b)
{
	double m = 0;
	for(std::size_t i = 0; i < a.size(); ++i)
		m = std::max(m, std::abs(a[i] - b[i]));
	return m;
}

} // namespace

TEST_CASE("single eigenstate circuit")
{
	const QubitCircuit c = sequential_circuit(10, sequential::Eigenstate{6});
	CHECK(c.count(GateKind::cnot) == 5);
	CHECK(c.gates().size() == 5u);
	for(const auto& g : c.gates())
		CHECK(g.control == 0);

	const State out = simulate(c, sequential_index(1));
	CHECK(std::abs(out[sequential_index(6)] - 1.0) < 1e-15);
	const State vac = simulate(c, 0);
	CHECK(std::abs(vac[0] - 1.0) < 1e-15);
	CHECK(max_diff(out, reference_run(c, 1)) < 1e-15);
}

TEST_CASE("clock circuit")
{
	const QubitCircuit c = sequential_circuit(10, sequential::Clock{4, 8});
	CHECK(c.count(GateKind::ch) == 1);
	CHECK(c.count(GateKind::cnot) == 6);
	const RealVector p = sequential_populations(simulate(c, 1), 10);
	for(int l = 0; l <= 10; ++l)
		CHECK(p[l] == doctest::Approx((l == 4 || l == 8) ? 0.5 : 0.0).epsilon(1e-14));
	CHECK(p[11] < 1e-15);
	CHECK(std::abs(simulate(c, 0)[0] - 1.0) < 1e-15);

	const DickeState t = sequential_target(10, sequential::Clock{4, 8});
	CHECK(std::norm(t[4]) == doctest::Approx(0.5));
	CHECK(std::norm(t[8]) == doctest::Approx(0.5));
}

TEST_CASE("gaussian-like profile")
{
	const sequential::Profile prof{3, {0.79 * pi, 0.71 * pi, 0.63 * pi, 0.54 * pi, 0.42 * pi}};
	// frozen from a 40-digit evaluation of the product formula
	const double expected[] = {0.10492249381215481, 0.17323909453959965, 0.21758090454149218,
	                           0.22052864159599428, 0.17714468253002089, 0.10658418298073796};
	const RealVector formula = profile_probabilities(10, prof);
	const RealVector brute = sequential_populations(simulate(sequential_circuit(10, prof), 1), 10);
	for(int l = 0; l <= 10; ++l)
	{
		const double e = (l >= 3 && l <= 8) ? expected[l - 3] : 0.0;
		CHECK(std::abs(formula[l] - e) < 1e-15);
		CHECK(std::abs(brute[l] - e) < 1e-12);
	}
}

TEST_CASE("product formula against brute force")
{
	std::mt19937_64 rng(77);
	std::uniform_real_distribution<double> u(0, 2 * pi);
	for(int draw = 0; draw < 100; ++draw)
	{
		const int n = 3 + draw % 10;
		const int first = 1 + int(rng() % std::uint64_t(n - 1));
		const int k = 1 + int(rng() % std::uint64_t(n - first));
		sequential::Profile prof{first, {}};
		for(int j = 0; j < k; ++j)
			prof.thetas.push_back(u(rng));
		const QubitCircuit c = sequential_circuit(n, prof);
		const State out = simulate(c, 1);
		const RealVector brute = sequential_populations(out, n);
		const RealVector formula = profile_probabilities(n, prof);
		CHECK((brute.head(n + 1) - formula).cwiseAbs().maxCoeff() < 1e-12);
		CHECK(brute[n + 1] < 1e-12);
		CHECK(max_diff(out, reference_run(c, 1)) < 1e-12);
		CHECK(std::abs(simulate(c, 0)[0] - 1.0) < 1e-15);
	}
}

TEST_CASE("serial and parallel simulation agree bitwise")
{
	const QubitCircuit c = sequential_circuit(14, sequential::Profile{2, {0.3, 1.1, 2.0, 0.7, 2.9}});
	CHECK(simulate(c, 1, kernels::Exec::serial) == simulate(c, 1, kernels::Exec::parallel));
}

TEST_CASE("qubit circuit text format")
{
	const QubitCircuit c = sequential_circuit(8, sequential::Profile{2, {0.3, 1.1, 2.0}});
	std::stringstream ss;
	write_qubit_circuit(ss, c);
	CHECK(read_qubit_circuit(ss) == c);

	std::istringstream handmade("# comment\nqubits 3\nCNOT 0 1\nCH 1 2\nCRY 0 2 0.5\n");
	const QubitCircuit h = read_qubit_circuit(handmade);
	CHECK(h.gates().size() == 3u);
	CHECK(h.gates()[2] == QubitGate{GateKind::cry, 0, 2, 0.5});

	std::istringstream bad("qubits 3\nCNOT 0 3\n");
	CHECK_THROWS(read_qubit_circuit(bad));
	std::istringstream unknown("qubits 3\nSWAP 0 1\n");
	CHECK_THROWS(read_qubit_circuit(unknown));
}

TEST_CASE("invalid circuits")
{
	QubitCircuit c(4);
	CHECK_THROWS_AS(c.add({GateKind::cnot, 0, 4}), std::domain_error);
	CHECK_THROWS_AS(c.add({GateKind::cnot, 2, 2}), std::domain_error);
	CHECK_THROWS_AS(sequential_circuit(4, sequential::Eigenstate{5}), std::domain_error);
	CHECK_THROWS_AS(sequential_circuit(4, sequential::Clock{3, 2}), std::domain_error);
	CHECK_THROWS_AS(simulate(QubitCircuit(max_simulated_qubits + 1), 0), std::domain_error);
}
