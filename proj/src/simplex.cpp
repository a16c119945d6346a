#include "dickenet/simplex.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace dickenet
{

namespace
{

struct Context
{
	const std::function<double(std::span<const double>)>* f;
	int evaluations = 0;
	bool non_finite = false;
};

double trampoline(const gsl_vector* v, void* params)
{
	auto* ctx = static_cast<Context*>(params);
	++ctx->evaluations;
	const double value = (*ctx->f)(std::span<const double>(v->data, v->size));
	if(!std::isfinite(value))
	{
		ctx->non_finite = true;
		return std::numeric_limits<double>::max();
	}
	return value;
}

struct VectorDeleter
{
	void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
struct MinimizerDeleter
{
	void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};

} // namespace

SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
                          const SimplexOptions& options)
{
	if(x0.empty())
		throw std::domain_error("nelder_mead: empty parameter vector");
	// GSL aborts by default; errors are reported through return codes instead
	gsl_set_error_handler_off();

	const std::size_t n = x0.size();
	std::unique_ptr<gsl_vector, VectorDeleter> x(gsl_vector_alloc(n));
	std::unique_ptr<gsl_vector, VectorDeleter> step(gsl_vector_alloc(n));
	for(std::size_t i = 0; i < n; ++i)
		gsl_vector_set(x.get(), i, x0[i]);
	gsl_vector_set_all(step.get(), options.initial_step);

	Context ctx{&f};
	gsl_multimin_function fn{&trampoline, n, &ctx};
	std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> m(
	    gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n));

	SimplexResult result;
	if(gsl_multimin_fminimizer_set(m.get(), &fn, x.get(), step.get()) != GSL_SUCCESS || ctx.non_finite)
	{
		result.non_finite = ctx.non_finite;
		result.x = std::move(x0);
		result.value = std::numeric_limits<double>::infinity();
		result.evaluations = ctx.evaluations;
		return result;
	}

	while(ctx.evaluations < options.max_evals)
	{
		if(gsl_multimin_fminimizer_iterate(m.get()) != GSL_SUCCESS)
			break;
		result.trace.push_back(m->fval);
		if(ctx.non_finite)
			break;
		if(gsl_multimin_test_size(gsl_multimin_fminimizer_size(m.get()), options.size_tolerance) == GSL_SUCCESS)
		{
			result.converged = true;
			break;
		}
	}

	result.x.resize(n);
	for(std::size_t i = 0; i < n; ++i)
		result.x[i] = gsl_vector_get(m->x, i);
	result.value = m->fval;
	result.evaluations = ctx.evaluations;
	result.non_finite = ctx.non_finite;
	return result;
}

} // namespace dickenet
