#include "dickenet/spectrum.hpp"

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>
#include <fftw3.h>

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace dickenet
{

namespace
{

struct LinearFit
{
	double sse;
	double amplitude;
};

LinearFit cosine_fit(const InterferenceTrace& trace, double omega)
{
	const auto n = static_cast<Eigen::Index>(trace.times.size());
	Eigen::MatrixXd a(n, 3);
	Eigen::VectorXd y(n);
	for(Eigen::Index i = 0; i < n; ++i)
	{
		const double t = trace.times[i];
		a(i, 0) = std::cos(omega * t);
		a(i, 1) = std::sin(omega * t);
		a(i, 2) = 1.0;
		y[i] = trace.signal[i];
	}
	const Eigen::Vector3d x = a.colPivHouseholderQr().solve(y);
	return {(a * x - y).squaredNorm(), std::hypot(x[0], x[1])};
}

struct PlanDeleter
{
	void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};

} // namespace

SpectralPeak dominant_frequency(const InterferenceTrace& trace)
{
	trace.validate();
	const std::size_t n = trace.times.size();
	if(n < 8)
		throw std::domain_error("spectral analysis needs at least 8 samples");
	const double dt = (trace.times.back() - trace.times.front()) / static_cast<double>(n - 1);
	if(!(dt > 0.0))
		throw std::domain_error("spectral analysis needs increasing sample times");

	const std::size_t padded = 4 * n;
	const double mean = std::accumulate(trace.signal.begin(), trace.signal.end(), 0.0) / static_cast<double>(n);
	std::vector<double> in(padded, 0.0);
	for(std::size_t i = 0; i < n; ++i)
		in[i] = trace.signal[i] - mean;
	std::vector<std::complex<double>> out(padded / 2 + 1);
	std::unique_ptr<fftw_plan_s, PlanDeleter> plan(
	    fftw_plan_dft_r2c_1d(static_cast<int>(padded), in.data(), reinterpret_cast<fftw_complex*>(out.data()),
	                         FFTW_ESTIMATE));
	fftw_execute(plan.get());

	std::size_t best = 1;
	for(std::size_t k = 1; k < out.size(); ++k)
		if(std::abs(out[k]) > std::abs(out[best]))
			best = k;
	const double bin = 2.0 * std::numbers::pi / (static_cast<double>(padded) * dt);
	const double coarse = bin * static_cast<double>(best);

	const auto [omega, sse] = boost::math::tools::brent_find_minima(
	    [&](double w) { return cosine_fit(trace, w).sse; }, std::max(0.0, coarse - 2.0 * bin), coarse + 2.0 * bin, 60);
	const LinearFit fit = cosine_fit(trace, omega);
	return {omega, fit.amplitude, std::sqrt(sse / static_cast<double>(n))};
}

} // namespace dickenet
