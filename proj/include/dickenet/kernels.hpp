#pragma once

// Data-parallel inner loops. Every kernel has an OpenMP path and a serial
// reference path; both write each output element from exactly one iteration,
// so the two paths are bitwise identical.

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace dickenet::kernels
{

enum class Exec
{
	serial,
	parallel,
};

/// out[i] = fn(xs[i]).
std::vector<double> evaluate_grid(std::span<const double> xs, const std::function<double(double)>& fn,
                                  Exec exec = Exec::parallel);

/// Applies the 2x2 matrix {m00, m01, m10, m11} to `target` on the amplitudes
/// where `control` is set. Qubit q is bit q of the basis index.
void apply_controlled_gate(std::span<std::complex<double>> state, int control, int target,
                           const std::array<std::complex<double>, 4>& gate, Exec exec = Exec::parallel);

/// |<theta_k, phi_k | psi>|^2 for every grid point, with coherent-state
/// amplitudes given in closed form.
std::vector<double> husimi(std::span<const std::complex<double>> psi, std::span<const double> thetas,
                           std::span<const double> phis, Exec exec = Exec::parallel);

/// Number of OpenMP threads the parallel path would use (1 when built without OpenMP).
int max_threads();

} // namespace dickenet::kernels
