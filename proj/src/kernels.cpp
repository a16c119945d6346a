#include "dickenet/kernels.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dickenet::kernels
{

namespace
{

using cplx = std::complex<double>;

void check_qubits(std::size_t size, int control, int target)
{
	if(size == 0 || (size & (size - 1)) != 0)
		throw std::domain_error("statevector length must be a power of two");
	const auto n = static_cast<int>(std::log2(static_cast<double>(size)) + 0.5);
	if(control < 0 || target < 0 || control >= n || target >= n || control == target)
		throw std::domain_error("qubit index out of range");
}

inline void gate_pair(std::span<cplx> state, std::size_t i0, std::size_t tmask,
                      const std::array<cplx, 4>& g)
{
	const std::size_t i1 = i0 | tmask;
	const cplx a = state[i0];
	const cplx b = state[i1];
	state[i0] = g[0] * a + g[1] * b;
	state[i1] = g[2] * a + g[3] * b;
}

// log of the coherent-state amplitude modulus prefactor sqrt(C(N, l)).
std::vector<double> half_log_binomials(int n)
{
	std::vector<double> out(n + 1);
	for(int l = 0; l <= n; ++l)
		out[l] = 0.5 * (std::lgamma(n + 1.0) - std::lgamma(l + 1.0) - std::lgamma(n - l + 1.0));
	return out;
}

// exp(log_prefactor) * a^p * b^q, evaluated in log space so large N does not overflow.
double signed_power_product(double log_prefactor, double a, int p, double b, int q)
{
	if((p > 0 && a == 0.0) || (q > 0 && b == 0.0))
		return 0.0;
	double log_mag = log_prefactor;
	if(p > 0)
		log_mag += p * std::log(std::abs(a));
	if(q > 0)
		log_mag += q * std::log(std::abs(b));
	const bool negative = (a < 0 && p % 2 == 1) != (b < 0 && q % 2 == 1);
	return negative ? -std::exp(log_mag) : std::exp(log_mag);
}

double husimi_point(std::span<const cplx> psi, const std::vector<double>& hlb, double theta, double phi)
{
	const int n = static_cast<int>(psi.size()) - 1;
	const double s = 0.5 * n;
	const double c2 = std::cos(0.5 * theta);
	const double s2 = -std::sin(0.5 * theta);
	cplx overlap{0.0, 0.0};
	for(int l = 0; l <= n; ++l)
	{
		// <l|theta,phi> = e^{-i phi (l - S)} sqrt(C(N,l)) cos^{N-l}(theta/2) (-sin(theta/2))^l
		const double mag = signed_power_product(hlb[l], c2, n - l, s2, l);
		const cplx coh = std::polar(mag, -phi * (l - s));
		overlap += std::conj(coh) * psi[l];
	}
	return std::norm(overlap);
}

} // namespace

std::vector<double> evaluate_grid(std::span<const double> xs, const std::function<double(double)>& fn, Exec exec)
{
	std::vector<double> out(xs.size());
	const auto n = static_cast<std::ptrdiff_t>(xs.size());
	if(exec == Exec::parallel)
	{
#pragma omp parallel for schedule(static)
		for(std::ptrdiff_t i = 0; i < n; ++i)
			out[i] = fn(xs[i]);
	}
	else
	{
		for(std::ptrdiff_t i = 0; i < n; ++i)
			out[i] = fn(xs[i]);
	}
	return out;
}

void apply_controlled_gate(std::span<cplx> state, int control, int target, const std::array<cplx, 4>& gate,
                           Exec exec)
{
	check_qubits(state.size(), control, target);
	const std::size_t cmask = std::size_t{1} << control;
	const std::size_t tmask = std::size_t{1} << target;
	const auto size = static_cast<std::ptrdiff_t>(state.size());
	if(exec == Exec::parallel)
	{
#pragma omp parallel for schedule(static)
		for(std::ptrdiff_t i = 0; i < size; ++i)
		{
			const auto idx = static_cast<std::size_t>(i);
			if((idx & cmask) && !(idx & tmask))
				gate_pair(state, idx, tmask, gate);
		}
	}
	else
	{
		for(std::size_t idx = 0; idx < state.size(); ++idx)
		{
			if((idx & cmask) && !(idx & tmask))
				gate_pair(state, idx, tmask, gate);
		}
	}
}

std::vector<double> husimi(std::span<const cplx> psi, std::span<const double> thetas, std::span<const double> phis,
                           Exec exec)
{
	if(thetas.size() != phis.size())
		throw std::domain_error("husimi: theta and phi grids differ in length");
	const auto hlb = half_log_binomials(static_cast<int>(psi.size()) - 1);
	std::vector<double> out(thetas.size());
	const auto n = static_cast<std::ptrdiff_t>(thetas.size());
	if(exec == Exec::parallel)
	{
#pragma omp parallel for schedule(static)
		for(std::ptrdiff_t k = 0; k < n; ++k)
			out[k] = husimi_point(psi, hlb, thetas[k], phis[k]);
	}
	else
	{
		for(std::ptrdiff_t k = 0; k < n; ++k)
			out[k] = husimi_point(psi, hlb, thetas[k], phis[k]);
	}
	return out;
}

int max_threads()
{
#ifdef _OPENMP
	return omp_get_max_threads();
#else
	return 1;
#endif
}

} // namespace dickenet::kernels
