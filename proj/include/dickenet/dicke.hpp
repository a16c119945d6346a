#pragma once

// Single-node linear algebra in the symmetric (Dicke) subspace.
//
// Index convention used everywhere in the library: amplitude index l is the
// excitation number, i.e. the Dicke state |S, -S + l> with S = N/2.

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace dickenet
{

using cplx = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Atom count of one node. Dimension of the symmetric subspace is N + 1.
class EnsembleDims
{
public:
	explicit EnsembleDims(int atoms);

	[[nodiscard]] int atoms() const { return atoms_; }
	[[nodiscard]] int dim() const { return atoms_ + 1; }
	[[nodiscard]] double spin() const { return 0.5 * atoms_; }

	friend bool operator==(const EnsembleDims&, const EnsembleDims&) = default;

private:
	int atoms_;
};

class CollectiveAxis
{
public:
	/// Normalizes (x, y, z); throws std::domain_error on a zero vector.
	CollectiveAxis(double x, double y, double z);

	static CollectiveAxis from_angles(double polar, double azimuth);
	static CollectiveAxis x_axis() { return {1.0, 0.0, 0.0}; }
	static CollectiveAxis y_axis() { return {0.0, 1.0, 0.0}; }
	static CollectiveAxis z_axis() { return {0.0, 0.0, 1.0}; }

	[[nodiscard]] double x() const { return dir_[0]; }
	[[nodiscard]] double y() const { return dir_[1]; }
	[[nodiscard]] double z() const { return dir_[2]; }
	[[nodiscard]] double polar() const;
	[[nodiscard]] double azimuth() const;

private:
	Eigen::Vector3d dir_;
};

class DickeState
{
public:
	/// Throws std::domain_error unless the vector has unit norm (1e-10).
	explicit DickeState(ComplexVector amplitudes);

	static DickeState basis(const EnsembleDims& dims, int excitations);
	/// Rescales to unit norm; throws on a zero vector.
	static DickeState normalized(ComplexVector amplitudes);

	[[nodiscard]] const ComplexVector& amplitudes() const { return amp_; }
	[[nodiscard]] cplx operator[](int l) const { return amp_[l]; }
	[[nodiscard]] int dim() const { return static_cast<int>(amp_.size()); }
	[[nodiscard]] EnsembleDims dims() const { return EnsembleDims(dim() - 1); }

private:
	ComplexVector amp_;
};

/// Unitary acting within one node's symmetric subspace.
class SymmetricUnitary
{
public:
	/// Throws std::domain_error unless ||U^dagger U - 1||_max < 1e-10.
	explicit SymmetricUnitary(ComplexMatrix matrix);

	static SymmetricUnitary identity(const EnsembleDims& dims);

	[[nodiscard]] const ComplexMatrix& matrix() const { return m_; }
	[[nodiscard]] int dim() const { return static_cast<int>(m_.rows()); }
	[[nodiscard]] EnsembleDims dims() const { return EnsembleDims(dim() - 1); }
	[[nodiscard]] SymmetricUnitary adjoint() const;

	/// Composition; the right operand acts first.
	friend SymmetricUnitary operator*(const SymmetricUnitary& lhs, const SymmetricUnitary& rhs);

private:
	struct Trusted {};
	SymmetricUnitary(ComplexMatrix matrix, Trusted) : m_{std::move(matrix)} {}
	friend SymmetricUnitary exp_spin_function(const EnsembleDims&, const CollectiveAxis&, double, int);

	ComplexMatrix m_;
};

/// Max-abs entrywise distance of U^dagger U from the identity.
double unitarity_defect(const ComplexMatrix& u);

/// S_n = n_x S_x + n_y S_y + n_z S_z in the spin-N/2 representation.
ComplexMatrix collective_spin(const EnsembleDims& dims, const CollectiveAxis& axis);

/// exp(-i t S_n^power) for power 1 or 2, via the eigendecomposition of S_n.
/// Eigenvalues are snapped to the exact spectrum {-S, ..., S} before
/// exponentiation.
SymmetricUnitary exp_spin_function(const EnsembleDims& dims, const CollectiveAxis& axis, double t, int power);

/// exp(-i theta S_n).
SymmetricUnitary rotation(const EnsembleDims& dims, const CollectiveAxis& axis, double theta);

/// One-axis twisting exp(-i chi S_n^2).
SymmetricUnitary oat(const EnsembleDims& dims, const CollectiveAxis& axis, double chi);

DickeState apply(const SymmetricUnitary& u, const DickeState& psi);

/// p_l = |psi_l|^2.
RealVector mass_distribution(const DickeState& psi);

/// Mean and variance of the excitation number, in units of hbar*omega_eg and
/// (hbar*omega_eg)^2 respectively.
struct EnergyMoments
{
	double mean;
	double variance;
};
EnergyMoments energy_moments(const DickeState& psi);

/// Energy spread Delta E in joules for transition frequency omega_eg (rad/s).
double energy_spread_joules(const DickeState& psi, double omega_eg, double hbar);

struct SpherePoint
{
	double theta;
	double phi;
};

/// Spin coherent state exp(-i phi S_z) exp(-i theta S_y)|0>.
DickeState coherent_state(const EnsembleDims& dims, double theta, double phi);

/// Husimi Q(theta, phi) = |<theta, phi|psi>|^2 on each grid point.
std::vector<double> husimi_q(const DickeState& psi, std::span<const SpherePoint> grid);

/// Regular (theta, phi) grid with n_theta x n_phi points, theta in [0, pi],
/// phi in [0, 2 pi).
std::vector<SpherePoint> sphere_grid(int n_theta, int n_phi);

/// |<a|b>|^2.
double fidelity(const DickeState& a, const DickeState& b);

} // namespace dickenet
