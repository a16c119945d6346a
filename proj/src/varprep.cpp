#include "dickenet/varprep.hpp"

#include "dickenet/serialize.hpp"
#include "dickenet/simplex.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace dickenet
{

using std::numbers::pi;

void VariationalAnsatz::validate() const
{
	if(layers.empty())
		throw std::domain_error("ansatz needs at least one twisting layer (p >= 1)");
	for(const auto& l : layers)
		if(!std::isfinite(l.chi))
			throw std::domain_error("twisting angle must be finite");
	if(!std::isfinite(final_rotation.theta))
		throw std::domain_error("final rotation angle must be finite");
}

VariationalAnsatz VariationalAnsatz::from_reduced(int p, std::span<const double> params)
{
	if(p < 1)
		throw std::domain_error("ansatz depth p must be >= 1");
	if(static_cast<int>(params.size()) != reduced_parameter_count(p))
		throw std::domain_error("expected 3p+1 reduced parameters");
	VariationalAnsatz a;
	a.layers.reserve(p);
	a.layers.push_back({CollectiveAxis::from_angles(params[0], 0.0), params[1]});
	std::size_t k = 2;
	for(int i = 1; i < p; ++i, k += 3)
		a.layers.push_back({CollectiveAxis::from_angles(params[k], params[k + 1]), params[k + 2]});
	a.final_rotation = {CollectiveAxis::from_angles(0.5 * pi, params[k]), params[k + 1]};
	return a;
}

SymmetricUnitary build_circuit(const EnsembleDims& dims, const VariationalAnsatz& ansatz)
{
	ansatz.validate();
	SymmetricUnitary u = SymmetricUnitary::identity(dims);
	for(const auto& layer : ansatz.layers)
		u = oat(dims, layer.axis, layer.chi) * u;
	return rotation(dims, ansatz.final_rotation.axis, ansatz.final_rotation.theta) * u;
}

AnsatzPropagator::AnsatzPropagator(const EnsembleDims& dims) : dims_{dims}
{
	Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(collective_spin(dims, CollectiveAxis::y_axis()));
	v_ = es.eigenvectors();
	lambda_ = es.eigenvalues().unaryExpr([&](double x) { return std::round(x + dims.spin()) - dims.spin(); });
	m_.resize(dims.dim());
	for(int l = 0; l < dims.dim(); ++l)
		m_[l] = l - dims.spin();
}

void AnsatzPropagator::rz(double t, ComplexMatrix& x) const
{
	for(int l = 0; l < dims_.dim(); ++l)
		x.row(l) *= std::polar(1.0, -t * m_[l]);
}

void AnsatzPropagator::tz(double chi, ComplexMatrix& x) const
{
	for(int l = 0; l < dims_.dim(); ++l)
		x.row(l) *= std::polar(1.0, -chi * m_[l] * m_[l]);
}

void AnsatzPropagator::ry(double t, ComplexMatrix& x) const
{
	ComplexMatrix y = v_.adjoint() * x;
	for(int k = 0; k < dims_.dim(); ++k)
		y.row(k) *= std::polar(1.0, -t * lambda_[k]);
	x.noalias() = v_ * y;
}

ComplexMatrix AnsatzPropagator::apply(const VariationalAnsatz& ansatz, ComplexMatrix x) const
{
	// f(S_n) = R f(S_z) R^dagger with R = R_z(azimuth) R_y(polar)
	const auto conjugated = [&](const CollectiveAxis& n, auto&& diagonal) {
		const double b = n.polar();
		const double f = n.azimuth();
		rz(-f, x);
		ry(-b, x);
		diagonal(x);
		ry(b, x);
		rz(f, x);
	};
	for(const auto& layer : ansatz.layers)
		conjugated(layer.axis, [&](ComplexMatrix& y) { tz(layer.chi, y); });
	conjugated(ansatz.final_rotation.axis, [&](ComplexMatrix& y) { rz(ansatz.final_rotation.theta, y); });
	return x;
}

ComplexMatrix AnsatzPropagator::vacuum_and_single(const VariationalAnsatz& ansatz) const
{
	return apply(ansatz, ComplexMatrix::Identity(dims_.dim(), 2));
}

namespace
{

double vacuum_term(const ComplexVector& u0)
{
	return std::norm(u0[0]);
}

} // namespace

CostSpec CostSpec::target_distribution(DickeState target, double lambda, std::string label)
{
	CostSpec c;
	c.kind = Kind::target_distribution;
	c.target = std::move(target);
	c.lambda = lambda;
	c.label = std::move(label);
	c.validate();
	return c;
}

CostSpec CostSpec::energy_moments(double lambda1, double lambda2)
{
	CostSpec c;
	c.kind = Kind::energy_moments;
	c.lambda = 0.0;
	c.lambda1 = lambda1;
	c.lambda2 = lambda2;
	c.validate();
	return c;
}

void CostSpec::validate() const
{
	if(kind == Kind::target_distribution)
	{
		if(!target)
			throw std::domain_error("target_distribution cost needs a target state");
		if(!(lambda > 0.0))
			throw std::domain_error("lambda must be > 0");
	}
	else
	{
		if(target)
			throw std::domain_error("energy_moments cost takes no target state");
		if(!(lambda1 >= 0.0) || !(lambda2 >= 0.0))
			throw std::domain_error("lambda1 and lambda2 must be >= 0");
	}
}

double CostSpec::evaluate_columns(const ComplexVector& u0, const ComplexVector& u1) const
{
	const double vac = vacuum_term(u0);
	if(kind == Kind::target_distribution)
	{
		const ComplexVector& t = target->amplitudes();
		if(t.size() != u1.size())
			throw std::domain_error("cost: target dimension mismatch");
		double overlap = 0.0;
		for(Eigen::Index l = 1; l < t.size(); ++l)
			overlap += std::abs(t[l]) * std::abs(u1[l]);
		return -vac - lambda * overlap;
	}
	const auto n = static_cast<double>(u1.size() - 1);
	const double s = 0.5 * n;
	double mean = 0.0;
	double second = 0.0;
	for(Eigen::Index l = 0; l < u1.size(); ++l)
	{
		const double p = std::norm(u1[l]);
		const double m = static_cast<double>(l) - s;
		mean += p * m;
		second += p * m * m;
	}
	const double var = std::max(0.0, second - mean * mean);
	return -vac - lambda1 * mean / n - lambda2 * std::sqrt(var) / n;
}

double CostSpec::evaluate(const SymmetricUnitary& u) const
{
	return evaluate_columns(u.matrix().col(0), u.matrix().col(1));
}

double cost_target(const SymmetricUnitary& u, const DickeState& target, double lambda)
{
	return CostSpec::target_distribution(target, lambda).evaluate(u);
}

double cost_energy(const SymmetricUnitary& u, double lambda1, double lambda2)
{
	return CostSpec::energy_moments(lambda1, lambda2).evaluate(u);
}

void OptimizerConfig::validate() const
{
	if(restarts < 1)
		throw std::domain_error("optimizer restarts must be >= 1");
	if(max_evals < 10)
		throw std::domain_error("optimizer max_evals must be >= 10");
	if(!(tolerance > 0.0))
		throw std::domain_error("optimizer tolerance must be > 0");
	if(hops < 0)
		throw std::domain_error("optimizer hops must be >= 0");
	if(!(hop_step > 0.0))
		throw std::domain_error("optimizer hop_step must be > 0");
}

std::vector<double> initial_point(int p, std::uint64_t seed, int index)
{
	std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
	                  static_cast<std::uint32_t>(index)};
	std::mt19937_64 rng(seq);
	std::uniform_real_distribution<double> unit(0.0, 1.0);
	const auto polar = [&] { return std::acos(1.0 - 2.0 * unit(rng)); };
	std::vector<double> x;
	x.reserve(VariationalAnsatz::reduced_parameter_count(p));
	x.push_back(polar());
	x.push_back(pi * unit(rng));
	for(int i = 1; i < p; ++i)
	{
		x.push_back(polar());
		x.push_back(2.0 * pi * unit(rng));
		x.push_back(pi * unit(rng));
	}
	x.push_back(2.0 * pi * unit(rng));
	x.push_back(2.0 * pi * unit(rng));
	return x;
}

OptimizationResult optimize(const EnsembleDims& dims, const CostSpec& cost, int p, const OptimizerConfig& config)
{
	if(p < 1)
		throw std::domain_error("ansatz depth p must be >= 1");
	cost.validate();
	config.validate();

	const AnsatzPropagator prop(dims);
	const auto objective = [&](std::span<const double> x) {
		const ComplexMatrix cols = prop.vacuum_and_single(VariationalAnsatz::from_reduced(p, x));
		return cost.evaluate_columns(cols.col(0), cols.col(1));
	};

	struct Outcome
	{
		RestartRecord record;
		std::vector<double> x;
		std::vector<double> trace;
	};
	std::vector<Outcome> outcomes(config.restarts);

#pragma omp parallel for schedule(dynamic, 1)
	for(int r = 0; r < config.restarts; ++r)
	{
		Outcome& out = outcomes[r];
		out.record.index = r;
		double best = std::numeric_limits<double>::infinity();

		// simplex re-seeded at its own optimum until that stops improving;
		// returns false on a non-finite cost
		const auto local_search = [&](std::vector<double> x) {
			double value = std::numeric_limits<double>::infinity();
			int budget = config.max_evals;
			while(budget > 0)
			{
				const SimplexResult s = nelder_mead(objective, x, {budget, config.tolerance, 0.3});
				budget -= s.evaluations;
				out.record.evaluations += s.evaluations;
				if(s.non_finite)
					return false;
				for(const double v : s.trace)
					out.trace.push_back(std::min({best, value, v}));
				if(!(s.value < value - 1e-12))
					break;
				value = s.value;
				x = s.x;
			}
			if(value < best)
			{
				best = value;
				out.x = std::move(x);
			}
			return true;
		};

		out.record.aborted = !local_search(initial_point(p, config.seed, r));
		std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
		                  static_cast<std::uint32_t>(r), 0x686f70u};
		std::mt19937_64 rng(seq);
		std::normal_distribution<double> kick(0.0, config.hop_step);
		for(int h = 0; h < config.hops && !out.record.aborted; ++h)
		{
			std::vector<double> y = out.x;
			for(double& v : y)
				v += kick(rng);
			out.record.aborted = !local_search(std::move(y));
		}
		out.record.cost = out.record.aborted ? std::numeric_limits<double>::infinity() : best;
	}

	OptimizationResult result;
	result.cost = std::numeric_limits<double>::infinity();
	for(const Outcome& o : outcomes)
	{
		result.restarts.push_back(o.record);
		if(!o.record.aborted && o.record.cost < result.cost)
		{
			result.cost = o.record.cost;
			result.best_restart = o.record.index;
		}
	}
	if(result.best_restart < 0)
		throw std::runtime_error("optimize: every restart hit a non-finite cost");
	const Outcome& win = outcomes[result.best_restart];
	result.parameters = win.x;
	result.ansatz = VariationalAnsatz::from_reduced(p, win.x);
	result.trace = win.trace;
	return result;
}

DickeState mass_eigenstate(const EnsembleDims& dims, int m)
{
	if(m < 1 || m > dims.atoms())
		throw std::domain_error("mass eigenstate index must lie in [1, N]");
	return DickeState::basis(dims, m);
}

DickeState clock_state(const EnsembleDims& dims, int m1, int m2)
{
	if(m1 < 1 || m2 > dims.atoms() || m1 >= m2)
		throw std::domain_error("clock needs 1 <= M1 < M2 <= N");
	ComplexVector v = ComplexVector::Zero(dims.dim());
	v[m1] = (1.0 / std::numbers::sqrt2);
	v[m2] = (1.0 / std::numbers::sqrt2);
	return DickeState(std::move(v));
}

DickeState coherent_target(const EnsembleDims& dims)
{
	return apply(rotation(dims, CollectiveAxis::y_axis(), 0.5 * pi), DickeState::basis(dims, 0));
}

void write_circuit(std::ostream& os, const CircuitRecord& rec)
{
	os << "dickenet-circuit 1\n"
	   << "N " << rec.atoms << '\n'
	   << "p " << rec.ansatz.depth() << '\n';
	for(const auto& l : rec.ansatz.layers)
		os << "layer " << format_real(l.axis.polar()) << ' ' << format_real(l.axis.azimuth()) << ' '
		   << format_real(l.chi) << '\n';
	const auto& f = rec.ansatz.final_rotation;
	os << "final " << format_real(f.axis.polar()) << ' ' << format_real(f.axis.azimuth()) << ' '
	   << format_real(f.theta) << '\n'
	   << "cost " << format_real(rec.cost) << '\n'
	   << "seed " << rec.seed << '\n';
	const CostSpec& c = rec.cost_spec;
	if(c.kind == CostSpec::Kind::target_distribution)
	{
		os << "cost_kind target_distribution\n"
		   << "lambda " << format_real(c.lambda) << '\n';
		if(!c.label.empty())
			os << "label " << c.label << '\n';
		const ComplexVector& t = c.target->amplitudes();
		for(Eigen::Index l = 0; l < t.size(); ++l)
			if(t[l] != cplx{})
				os << "target " << l << ' ' << format_complex(t[l]) << '\n';
	}
	else
	{
		os << "cost_kind energy_moments\n"
		   << "lambda1 " << format_real(c.lambda1) << '\n'
		   << "lambda2 " << format_real(c.lambda2) << '\n';
	}
	os << "end\n";
}

CircuitRecord read_circuit(std::istream& is)
{
	CircuitRecord rec;
	std::string line;
	int line_no = 0;
	const auto fail = [&](const std::string& what) {
		throw std::runtime_error("line " + std::to_string(line_no) + ": " + what);
	};
	int declared_p = -1;
	std::string kind;
	ComplexVector target;
	bool header = false;
	bool ended = false;
	while(!ended && std::getline(is, line))
	{
		++line_no;
		std::istringstream ls(line);
		std::string key;
		if(!(ls >> key))
			continue;
		if(!header)
		{
			if(line != "dickenet-circuit 1")
				fail("missing 'dickenet-circuit 1' header");
			header = true;
			continue;
		}
		const auto need = [&](auto&... xs) {
			if(!((ls >> xs) && ...))
				fail("malformed '" + key + "' line");
		};
		if(key == "N")
		{
			need(rec.atoms);
			if(rec.atoms < 1)
				fail("N must be >= 1");
			target = ComplexVector::Zero(rec.atoms + 1);
		}
		else if(key == "p")
			need(declared_p);
		else if(key == "layer" || key == "final")
		{
			double polar = 0, azimuth = 0, angle = 0;
			need(polar, azimuth, angle);
			const auto axis = CollectiveAxis::from_angles(polar, azimuth);
			if(key == "layer")
				rec.ansatz.layers.push_back({axis, angle});
			else
				rec.ansatz.final_rotation = {axis, angle};
		}
		else if(key == "cost")
			need(rec.cost);
		else if(key == "seed")
			need(rec.seed);
		else if(key == "cost_kind")
			need(kind);
		else if(key == "lambda")
			need(rec.cost_spec.lambda);
		else if(key == "lambda1")
			need(rec.cost_spec.lambda1);
		else if(key == "lambda2")
			need(rec.cost_spec.lambda2);
		else if(key == "label")
		{
			std::getline(ls >> std::ws, rec.cost_spec.label);
		}
		else if(key == "target")
		{
			int l = -1;
			need(l);
			std::string rest;
			std::getline(ls, rest);
			double re = 0, im = 0;
			if(std::sscanf(rest.c_str(), " ( %lf , %lf )", &re, &im) != 2)
				fail("malformed target amplitude");
			if(l < 0 || l >= target.size())
				fail("target index out of range (is N declared first?)");
			target[l] = {re, im};
		}
		else if(key == "end")
			ended = true;
		else
			fail("unknown key '" + key + "'");
	}
	if(!ended)
		fail("missing 'end'");
	if(declared_p != rec.ansatz.depth())
		throw std::runtime_error("circuit declares p = " + std::to_string(declared_p) + " but lists " +
		                         std::to_string(rec.ansatz.depth()) + " layers");
	if(kind == "target_distribution")
	{
		rec.cost_spec.kind = CostSpec::Kind::target_distribution;
		rec.cost_spec.target = DickeState(target);
	}
	else if(kind == "energy_moments")
		rec.cost_spec.kind = CostSpec::Kind::energy_moments;
	else
		throw std::runtime_error("unknown cost_kind '" + kind + "'");
	rec.cost_spec.validate();
	rec.ansatz.validate();
	return rec;
}

} // namespace dickenet
