#include "dickenet/measurement.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dickenet
{

namespace
{

double relative_phase(const GravityContext& ctx, int l_b, int l_a, double phi0, double t)
{
	return redshift_phase(ctx, l_b, Node::B, t) - redshift_phase(ctx, l_a, Node::A, t) - phi0;
}

void require_truncation(int n_max, int atoms)
{
	if(n_max < atoms + 1)
		throw std::domain_error("Fock truncation n_max = " + std::to_string(n_max) + " is below N + 1 = " +
		                        std::to_string(atoms + 1));
}

/// Beam-splitter blocks for every total photon number up to n_max.
class BeamSplitter
{
public:
	explicit BeamSplitter(int n_max)
	{
		blocks_.reserve(n_max + 1);
		for(int n = 0; n <= n_max; ++n)
			blocks_.push_back(beam_splitter_block(n));
	}

	[[nodiscard]] int n_max() const { return static_cast<int>(blocks_.size()) - 1; }

	/// Parity of mode B on the output, straight from the input amplitudes.
	[[nodiscard]] double parity(const ComplexMatrix& c) const
	{
		const int d = static_cast<int>(c.rows());
		double total = 0.0;
		for(int n = 0; n <= 2 * (d - 1); ++n)
		{
			ComplexVector v = ComplexVector::Zero(n + 1);
			bool occupied = false;
			for(int k = std::max(0, n - d + 1); k <= std::min(n, d - 1); ++k)
			{
				v[k] = c(k, n - k);
				occupied = occupied || v[k] != cplx{};
			}
			if(!occupied)
				continue;
			if(n > n_max())
				throw std::domain_error("beam splitter output leaves the Fock truncation (total photons " +
				                        std::to_string(n) + " > n_max " + std::to_string(n_max()) + ")");
			const ComplexVector out = blocks_[n] * v;
			for(int k = 0; k <= n; ++k)
				total += ((n - k) % 2 == 0 ? 1.0 : -1.0) * std::norm(out[k]);
		}
		return total;
	}

private:
	std::vector<ComplexMatrix> blocks_;
};

double quadrature_expectation(const ComplexMatrix& c, const ComplexMatrix& q)
{
	return (c.conjugate().cwiseProduct(q * c * q.transpose())).sum().real();
}

ComplexMatrix embed(const TwoNodeState& psi, int n_max)
{
	ComplexMatrix c = ComplexMatrix::Zero(n_max + 1, n_max + 1);
	c.topLeftCorner(psi.dim(), psi.dim()) = psi.amplitudes();
	return c;
}

} // namespace

double signal_nonlocal_analytic(const RealVector& weights, const GravityContext& ctx, double phi0, double t)
{
	double s = 0.0;
	for(int l = 1; l < weights.size(); ++l)
		s += weights[l] * std::cos(relative_phase(ctx, l, l, phi0, t));
	return s;
}

double signal_local_analytic(const RealVector& weights, const GravityContext& ctx, double phi0, double t)
{
	// cos(a_l - b_l' - phi0) = Re[e^{i a_l} e^{-i b_l'} e^{-i phi0}]: the double sum factorizes
	cplx sb = 0.0;
	cplx sa = 0.0;
	for(int l = 1; l < weights.size(); ++l)
	{
		sb += weights[l] * std::polar(1.0, redshift_phase(ctx, l, Node::B, t));
		sa += weights[l] * std::polar(1.0, -redshift_phase(ctx, l, Node::A, t));
	}
	return 0.5 * (sb * sa * std::polar(1.0, -phi0)).real();
}

double position_observable_expectation(const TwoNodeState& psi)
{
	double s = 0.0;
	for(int l = 1; l < psi.dim(); ++l)
		s += 2.0 * (std::conj(psi(0, l)) * psi(l, 0)).real();
	return s;
}

TwoModeFockState::TwoModeFockState(ComplexMatrix amplitudes) : amp_{std::move(amplitudes)}
{
	if(amp_.rows() < 1 || amp_.rows() != amp_.cols())
		throw std::domain_error("two-mode Fock state must be square");
	if(!(std::abs(amp_.squaredNorm() - 1.0) <= 1e-10))
		throw std::domain_error("two-mode Fock state is not normalized");
}

TwoModeFockState TwoModeFockState::from_atomic(const TwoNodeState& psi, int n_max)
{
	require_truncation(n_max, psi.dims().atoms());
	return TwoModeFockState(embed(psi, n_max));
}

int TwoModeFockState::max_total_photons() const
{
	int best = 0;
	for(int a = 0; a < amp_.rows(); ++a)
		for(int b = 0; b < amp_.cols(); ++b)
			if(amp_(a, b) != cplx{})
				best = std::max(best, a + b);
	return best;
}

ComplexMatrix beam_splitter_block(int n)
{
	if(n < 0)
		throw std::domain_error("photon number must be >= 0");
	// H = iK is Hermitian with integer spectrum {-n, -n+2, ..., n}
	ComplexMatrix h = ComplexMatrix::Zero(n + 1, n + 1);
	for(int k = 0; k < n; ++k)
	{
		const double a = std::sqrt((k + 1.0) * (n - k));
		h(k + 1, k) = cplx(0.0, a);
		h(k, k + 1) = cplx(0.0, -a);
	}
	Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
	ComplexVector phases(n + 1);
	for(int j = 0; j <= n; ++j)
	{
		const double lam = 2.0 * std::round(0.5 * (es.eigenvalues()[j] + n)) - n;
		phases[j] = std::polar(1.0, 0.25 * std::numbers::pi * lam);
	}
	ComplexMatrix u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
	for(int k = 0; k <= n; ++k)
		if((n - k) % 2 == 1)
			u.col(k) *= -1.0;
	return u;
}

TwoModeFockState apply_beam_splitter(const TwoModeFockState& in)
{
	const int n_max = in.n_max();
	if(in.max_total_photons() > n_max)
		throw std::domain_error("beam splitter output leaves the Fock truncation");
	const ComplexMatrix& c = in.amplitudes();
	ComplexMatrix out = ComplexMatrix::Zero(n_max + 1, n_max + 1);
	for(int n = 0; n <= n_max; ++n)
	{
		ComplexVector v(n + 1);
		for(int k = 0; k <= n; ++k)
			v[k] = c(k, n - k);
		const ComplexVector w = beam_splitter_block(n) * v;
		for(int k = 0; k <= n; ++k)
			out(k, n - k) = w[k];
	}
	return TwoModeFockState(std::move(out));
}

ComplexMatrix quadrature_matrix(int n_max)
{
	ComplexMatrix q = ComplexMatrix::Zero(n_max + 1, n_max + 1);
	for(int n = 0; n < n_max; ++n)
	{
		const double a = std::sqrt((n + 1.0) / 2.0);
		q(n, n + 1) = a;
		q(n + 1, n) = a;
	}
	return q;
}

double oracle_beam_splitter_parity(const TwoNodeState& psi, int n_max)
{
	require_truncation(n_max, psi.dims().atoms());
	return BeamSplitter(n_max).parity(psi.amplitudes());
}

double oracle_quadrature_product(const TwoNodeState& psi, const SymmetricUnitary& decoder, int n_max)
{
	require_truncation(n_max, psi.dims().atoms());
	const TwoNodeState decoded = apply_local(decoder, decoder, psi);
	return quadrature_expectation(embed(decoded, n_max), quadrature_matrix(n_max));
}

int default_n_max(const EnsembleDims& dims)
{
	return dims.atoms() + 2;
}

void MeasurementScheme::validate() const
{
	if(kind == SchemeKind::local_quadrature && !decoder)
		throw std::domain_error("local quadrature scheme needs a decoder U_m = U_p^dagger");
	if(kind != SchemeKind::local_quadrature && decoder)
		throw std::domain_error("only the local quadrature scheme takes a decoder");
}

RamseyResult run_ramsey(const RamseyScenario& sc, EvalPath path, kernels::Exec exec)
{
	sc.scheme.validate();
	sc.ctx.validate();
	for(const double t : sc.times)
		if(!(t >= 0.0))
			throw std::domain_error("Ramsey times must be >= 0");
	const EnsembleDims dims = sc.prepared.dims();
	if(sc.scheme.decoder && sc.scheme.decoder->dim() != sc.prepared.dim())
		throw std::domain_error("decoder dimension does not match the state");

	RamseyResult result;
	const ExcitationProfile profile = extract_excitation_profile(sc.prepared);
	result.leakage = profile.leakage;

	if(path != EvalPath::oracle)
	{
		const RealVector& w = profile.weights;
		const auto fn = [&](double t) {
			return sc.scheme.kind == SchemeKind::local_quadrature ? signal_local_analytic(w, sc.ctx, sc.phi0, t)
			                                                       : signal_nonlocal_analytic(w, sc.ctx, sc.phi0, t);
		};
		result.analytic = InterferenceTrace{sc.times, kernels::evaluate_grid(sc.times, fn, exec)};
	}

	if(path != EvalPath::analytic)
	{
		const int requested = sc.n_max > 0 ? sc.n_max : default_n_max(dims);
		require_truncation(requested, dims.atoms());
		// leaky states may occupy totals above N; the truncation grows to hold them
		const int n_max = std::max(requested, TwoModeFockState(embed(sc.prepared, dims.atoms() + 1)).max_total_photons());
		std::optional<BeamSplitter> bs;
		ComplexMatrix q;
		if(sc.scheme.kind == SchemeKind::nonlocal_parity)
			bs.emplace(n_max);
		if(sc.scheme.kind == SchemeKind::local_quadrature)
			q = quadrature_matrix(n_max);
		const auto fn = [&](double t) {
			const TwoNodeState evolved = evolve_gravity(sc.prepared, sc.ctx, t);
			switch(sc.scheme.kind)
			{
			case SchemeKind::nonlocal_parity:
				return bs->parity(evolved.amplitudes());
			case SchemeKind::local_quadrature:
				return quadrature_expectation(
				    embed(apply_local(*sc.scheme.decoder, *sc.scheme.decoder, evolved), n_max), q);
			case SchemeKind::position_observable:
				return position_observable_expectation(evolved);
			}
			throw std::logic_error("unknown scheme");
		};
		result.oracle = InterferenceTrace{sc.times, kernels::evaluate_grid(sc.times, fn, exec)};
	}

	if(result.analytic && result.oracle)
		for(std::size_t i = 0; i < sc.times.size(); ++i)
			result.max_abs_diff =
			    std::max(result.max_abs_diff, std::abs(result.analytic->signal[i] - result.oracle->signal[i]));
	return result;
}

EnvelopeMaxima envelope_maxima(const InterferenceTrace& trace)
{
	trace.validate();
	EnvelopeMaxima m;
	const auto& t = trace.times;
	const std::size_t n = t.size();
	if(n < 3)
		throw std::domain_error("envelope analysis needs at least 3 samples");
	std::vector<double> a(n);
	std::transform(trace.signal.begin(), trace.signal.end(), a.begin(), [](double x) { return std::abs(x); });

	if(a[0] >= a[1])
	{
		m.times.push_back(t[0]);
		m.values.push_back(a[0]);
	}
	for(std::size_t i = 1; i + 1 < n; ++i)
	{
		if(!(a[i] >= a[i - 1] && a[i] > a[i + 1]))
			continue;
		// vertex of the parabola through the three samples
		const double den = a[i - 1] - 2.0 * a[i] + a[i + 1];
		double shift = 0.0;
		double peak = a[i];
		if(den < 0.0)
		{
			shift = 0.5 * (a[i - 1] - a[i + 1]) / den;
			peak = a[i] - 0.25 * (a[i - 1] - a[i + 1]) * shift;
		}
		const double h = 0.5 * (t[i + 1] - t[i - 1]);
		m.times.push_back(t[i] + shift * h);
		m.values.push_back(peak);
	}
	m.revival_index = m.values.size();
	for(std::size_t j = 1; j < m.values.size(); ++j)
		if(m.values[j] > m.values[j - 1])
		{
			m.revival_index = j;
			break;
		}
	return m;
}

EnvelopeFit envelope_fit(const InterferenceTrace& trace)
{
	const EnvelopeMaxima m = envelope_maxima(trace);
	const std::size_t used = m.revival_index;
	if(used < 5)
		throw std::domain_error("envelope fit needs at least 5 maxima before the first revival (found " +
		                        std::to_string(used) + ")");
	const auto sse = [&](double tau) {
		double s = 0.0;
		for(std::size_t j = 0; j < used; ++j)
		{
			const double r = m.values[j] - std::exp(-std::pow(m.times[j] / tau, 2));
			s += r * r;
		}
		return s;
	};
	const double span = m.times[used - 1];
	if(!(span > 0.0))
		throw std::domain_error("envelope maxima do not span a positive time range");
	const double lo = 1e-3 * span;
	const double hi = 1e3 * span;
	// minimise over log(tau) so the bracket covers several decades evenly
	const auto [x, f] = boost::math::tools::brent_find_minima([&](double lt) { return sse(std::exp(lt)); },
	                                                          std::log(lo), std::log(hi), 50);
	return {std::exp(x), static_cast<int>(used), std::sqrt(f / static_cast<double>(used))};
}

RevivalReport detect_revival(const InterferenceTrace& trace, double rise)
{
	const EnvelopeMaxima m = envelope_maxima(trace);
	RevivalReport r;
	if(m.values.empty())
		return r;
	const double initial = m.values.front();
	double trough = initial;
	for(std::size_t j = 1; j < m.values.size(); ++j)
	{
		if(m.values[j] < trough)
		{
			trough = m.values[j];
			continue;
		}
		if(trough < 0.5 * initial && m.values[j] - trough >= rise)
		{
			r.detected = true;
			r.onset_time = m.times[j];
			r.trough = trough;
			r.peak = m.values[j];
			for(std::size_t k = j; k < m.values.size(); ++k)
				r.peak = std::max(r.peak, m.values[k]);
			return r;
		}
	}
	r.trough = trough;
	return r;
}

} // namespace dickenet
