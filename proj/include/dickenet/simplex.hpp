#pragma once

// Thin wrapper over the GSL Nelder-Mead simplex minimizer (nmsimplex2).

#include <functional>
#include <span>
#include <vector>

namespace dickenet
{

struct SimplexOptions
{
	int max_evals = 4000;
	/// Stop once the characteristic simplex size drops below this.
	double size_tolerance = 1e-8;
	/// Initial step per coordinate.
	double initial_step = 0.3;
};

struct SimplexResult
{
	std::vector<double> x;
	double value = 0.0;
	int evaluations = 0;
	bool converged = false;
	/// Set when the objective returned a non-finite value; the search was abandoned.
	bool non_finite = false;
	/// Best value after each iteration.
	std::vector<double> trace;
};

SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
                          const SimplexOptions& options);

} // namespace dickenet
