// Serial reference path against the OpenMP path for each kernel.

#include "dickenet/dicke.hpp"
#include "dickenet/kernels.hpp"
#include "dickenet/measurement.hpp"
#include "dickenet/qubit_circuit.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

namespace
{

using dickenet::kernels::Exec;

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

void BM_EvaluateGrid(benchmark::State& state)
{
	std::vector<double> xs(static_cast<std::size_t>(state.range(1)));
	for(std::size_t i = 0; i < xs.size(); ++i)
		xs[i] = 1e-3 * double(i);
	const auto fn = [](double t) { return std::exp(-t * t / 4) * std::cos(30 * t); };
	for(auto _ : state)
		benchmark::DoNotOptimize(dickenet::kernels::evaluate_grid(xs, fn, exec_of(state)));
}
BENCHMARK(BM_EvaluateGrid)->ArgsProduct({{0, 1}, {1 << 16, 1 << 20}});

void BM_Husimi(benchmark::State& state)
{
	const int n = static_cast<int>(state.range(1));
	const dickenet::DickeState psi = dickenet::coherent_state(dickenet::EnsembleDims(n), 1.0, 0.5);
	std::vector<std::complex<double>> amp(psi.amplitudes().data(), psi.amplitudes().data() + psi.dim());
	std::vector<double> th;
	std::vector<double> ph;
	for(const auto& p : dickenet::sphere_grid(100, 200))
	{
		th.push_back(p.theta);
		ph.push_back(p.phi);
	}
	for(auto _ : state)
		benchmark::DoNotOptimize(dickenet::kernels::husimi(amp, th, ph, exec_of(state)));
}
BENCHMARK(BM_Husimi)->ArgsProduct({{0, 1}, {20, 100}});

void BM_ControlledGate(benchmark::State& state)
{
	const int qubits = static_cast<int>(state.range(1));
	std::vector<std::complex<double>> psi(std::size_t{1} << qubits, 1.0 / std::sqrt(double(1 << qubits)));
	const double h = 1 / std::numbers::sqrt2;
	const std::array<std::complex<double>, 4> gate{h, h, h, -h};
	for(auto _ : state)
	{
		dickenet::kernels::apply_controlled_gate(psi, 0, qubits - 1, gate, exec_of(state));
		benchmark::ClobberMemory();
	}
}
BENCHMARK(BM_ControlledGate)->ArgsProduct({{0, 1}, {16, 20}});

void BM_RamseyOracle(benchmark::State& state)
{
	const int n = 12;
	const dickenet::EnsembleDims d(n);
	dickenet::GravityContext ctx;
	ctx.omega_eg = 2 * std::numbers::pi * 0.5e15;
	dickenet::RamseyScenario sc{dickenet::seed_state(d, {}), ctx, {}, 0.0, dickenet::linear_grid(0, 2, 201), 0};
	for(auto _ : state)
		benchmark::DoNotOptimize(dickenet::run_ramsey(sc, dickenet::EvalPath::oracle, exec_of(state)));
}
BENCHMARK(BM_RamseyOracle)->Arg(0)->Arg(1);

} // namespace

BENCHMARK_MAIN();
