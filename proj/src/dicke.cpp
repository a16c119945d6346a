#include "dickenet/dicke.hpp"

#include "dickenet/kernels.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dickenet
{

namespace
{

constexpr double kNormTolerance = 1e-10;
constexpr double kUnitarityTolerance = 1e-10;

void require_same_dim(int a, int b, const char* what)
{
	if(a != b)
		throw std::domain_error(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
		                        std::to_string(b) + ")");
}

} // namespace

EnsembleDims::EnsembleDims(int atoms) : atoms_{atoms}
{
	if(atoms < 1)
		throw std::domain_error("atom number must be >= 1, got " + std::to_string(atoms));
}

CollectiveAxis::CollectiveAxis(double x, double y, double z) : dir_{x, y, z}
{
	const double n = dir_.norm();
	if(!(n > 0.0) || !std::isfinite(n))
		throw std::domain_error("collective axis must be a finite non-zero vector");
	dir_ /= n;
}

CollectiveAxis CollectiveAxis::from_angles(double polar, double azimuth)
{
	return {std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth), std::cos(polar)};
}

double CollectiveAxis::polar() const
{
	return std::acos(std::clamp(dir_[2], -1.0, 1.0));
}

double CollectiveAxis::azimuth() const
{
	return std::atan2(dir_[1], dir_[0]);
}

DickeState::DickeState(ComplexVector amplitudes) : amp_{std::move(amplitudes)}
{
	if(amp_.size() < 2)
		throw std::domain_error("Dicke state needs at least two amplitudes");
	const double n2 = amp_.squaredNorm();
	if(!(std::abs(n2 - 1.0) <= kNormTolerance))
		throw std::domain_error("Dicke state is not normalized (norm^2 = " + std::to_string(n2) + ")");
}

DickeState DickeState::basis(const EnsembleDims& dims, int excitations)
{
	if(excitations < 0 || excitations > dims.atoms())
		throw std::domain_error("excitation number " + std::to_string(excitations) + " outside [0, " +
		                        std::to_string(dims.atoms()) + "]");
	ComplexVector v = ComplexVector::Zero(dims.dim());
	v[excitations] = 1.0;
	return DickeState(std::move(v));
}

DickeState DickeState::normalized(ComplexVector amplitudes)
{
	const double n = amplitudes.norm();
	if(!(n > 0.0))
		throw std::domain_error("cannot normalize a zero vector");
	amplitudes /= n;
	return DickeState(std::move(amplitudes));
}

double unitarity_defect(const ComplexMatrix& u)
{
	if(u.rows() != u.cols())
		return std::numeric_limits<double>::infinity();
	const ComplexMatrix d = u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols());
	return d.cwiseAbs().maxCoeff();
}

SymmetricUnitary::SymmetricUnitary(ComplexMatrix matrix) : m_{std::move(matrix)}
{
	if(m_.rows() < 2 || m_.rows() != m_.cols())
		throw std::domain_error("symmetric unitary must be square with dimension >= 2");
	const double defect = unitarity_defect(m_);
	if(!(defect < kUnitarityTolerance))
		throw std::domain_error("matrix is not unitary (defect " + std::to_string(defect) + ")");
}

SymmetricUnitary SymmetricUnitary::identity(const EnsembleDims& dims)
{
	return SymmetricUnitary(ComplexMatrix::Identity(dims.dim(), dims.dim()), Trusted{});
}

SymmetricUnitary SymmetricUnitary::adjoint() const
{
	return SymmetricUnitary(m_.adjoint(), Trusted{});
}

SymmetricUnitary operator*(const SymmetricUnitary& lhs, const SymmetricUnitary& rhs)
{
	require_same_dim(lhs.dim(), rhs.dim(), "unitary product");
	return SymmetricUnitary(lhs.m_ * rhs.m_, SymmetricUnitary::Trusted{});
}

ComplexMatrix collective_spin(const EnsembleDims& dims, const CollectiveAxis& axis)
{
	const int d = dims.dim();
	const double s = dims.spin();
	ComplexMatrix sn = ComplexMatrix::Zero(d, d);
	const cplx raise_coeff{0.5 * axis.x(), -0.5 * axis.y()}; // (n_x - i n_y)/2 multiplies S_+
	for(int l = 0; l < d; ++l)
	{
		const double m = -s + l;
		sn(l, l) = axis.z() * m;
		if(l + 1 < d)
		{
			// <l+1| S_+ |l> = sqrt((S - m)(S + m + 1))
			const double amp = std::sqrt((s - m) * (s + m + 1.0));
			sn(l + 1, l) = raise_coeff * amp;
			sn(l, l + 1) = std::conj(raise_coeff) * amp;
		}
	}
	return sn;
}

SymmetricUnitary exp_spin_function(const EnsembleDims& dims, const CollectiveAxis& axis, double t, int power)
{
	if(power != 1 && power != 2)
		throw std::domain_error("exp_spin_function: power must be 1 or 2");
	if(!std::isfinite(t))
		throw std::domain_error("gate angle must be finite");
	const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(collective_spin(dims, axis));
	if(es.info() != Eigen::Success)
		throw std::runtime_error("eigendecomposition of collective spin failed");
	const double s = dims.spin();
	ComplexVector phases(dims.dim());
	for(int k = 0; k < dims.dim(); ++k)
	{
		// spectrum of S_n is exactly {-S, -S+1, ..., S}
		const double m = std::round(es.eigenvalues()[k] + s) - s;
		const double gen = power == 1 ? m : m * m;
		phases[k] = std::polar(1.0, -t * gen);
	}
	const ComplexMatrix& v = es.eigenvectors();
	return SymmetricUnitary(v * phases.asDiagonal() * v.adjoint(), SymmetricUnitary::Trusted{});
}

SymmetricUnitary rotation(const EnsembleDims& dims, const CollectiveAxis& axis, double theta)
{
	return exp_spin_function(dims, axis, theta, 1);
}

SymmetricUnitary oat(const EnsembleDims& dims, const CollectiveAxis& axis, double chi)
{
	return exp_spin_function(dims, axis, chi, 2);
}

DickeState apply(const SymmetricUnitary& u, const DickeState& psi)
{
	require_same_dim(u.dim(), psi.dim(), "apply");
	return DickeState(u.matrix() * psi.amplitudes());
}

RealVector mass_distribution(const DickeState& psi)
{
	return psi.amplitudes().cwiseAbs2();
}

EnergyMoments energy_moments(const DickeState& psi)
{
	const RealVector p = mass_distribution(psi);
	double m1 = 0.0;
	double m2 = 0.0;
	for(int l = 0; l < p.size(); ++l)
	{
		m1 += l * p[l];
		m2 += static_cast<double>(l) * l * p[l];
	}
	return {m1, std::max(0.0, m2 - m1 * m1)};
}

double energy_spread_joules(const DickeState& psi, double omega_eg, double hbar)
{
	return hbar * omega_eg * std::sqrt(energy_moments(psi).variance);
}

DickeState coherent_state(const EnsembleDims& dims, double theta, double phi)
{
	return apply(rotation(dims, CollectiveAxis::z_axis(), phi),
	             apply(rotation(dims, CollectiveAxis::y_axis(), theta), DickeState::basis(dims, 0)));
}

std::vector<double> husimi_q(const DickeState& psi, std::span<const SpherePoint> grid)
{
	std::vector<double> thetas(grid.size());
	std::vector<double> phis(grid.size());
	for(std::size_t k = 0; k < grid.size(); ++k)
	{
		thetas[k] = grid[k].theta;
		phis[k] = grid[k].phi;
	}
	const auto& a = psi.amplitudes();
	return kernels::husimi({a.data(), static_cast<std::size_t>(a.size())}, thetas, phis);
}

std::vector<SpherePoint> sphere_grid(int n_theta, int n_phi)
{
	if(n_theta < 2 || n_phi < 1)
		throw std::domain_error("sphere grid needs n_theta >= 2 and n_phi >= 1");
	std::vector<SpherePoint> grid;
	grid.reserve(static_cast<std::size_t>(n_theta) * n_phi);
	for(int i = 0; i < n_theta; ++i)
		for(int j = 0; j < n_phi; ++j)
			grid.push_back({std::numbers::pi * i / (n_theta - 1), 2.0 * std::numbers::pi * j / n_phi});
	return grid;
}

double fidelity(const DickeState& a, const DickeState& b)
{
	require_same_dim(a.dim(), b.dim(), "fidelity");
	return std::min(1.0, std::norm(a.amplitudes().dot(b.amplitudes())));
}

} // namespace dickenet
