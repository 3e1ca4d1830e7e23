#pragma once
// Classical Hamiltonian H(x,y) = K(x,y) sqrt(pi(y)/pi(x)) and its analytic
// eigensystem: eigenvalues kappa(n), orthonormal eigenvectors
// phi_n(x) = d_n sqrt(pi(x)) P_n(x).

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "askey/markov.hpp"

namespace askey {

struct HamiltonianBuild {
    Eigen::MatrixXd matrix;  // symmetrized (H + H^T)/2
    double asymmetry = 0.0;  // max |H - H^T| before symmetrizing
};

HamiltonianBuild classical_hamiltonian(const ConvolutionKernel& kernel);
// Same transform from a plain matrix and pi; pi entries must be > 0.
HamiltonianBuild classical_hamiltonian(const Eigen::MatrixXd& K, const Eigen::VectorXd& pi);

// Modes whose weight outside a truncated window is at most this are resolved.
inline constexpr double kResolvedTail = 1e-20;

struct SpectralSystem {
    Eigen::MatrixXd hamiltonian;
    Eigen::VectorXd kappas;     // kappa(n), n = 0..size-1
    Eigen::MatrixXd phi;        // column n is phi_n on the lattice
    Eigen::VectorXd sqrt_pi;
    // Weight of each unit-norm mode beyond the window of a truncated lattice;
    // zero on finite lattices.
    Eigen::VectorXd mode_tail;
    double asymmetry = 0.0;
    ConvolutionRecipe recipe;
    LatticeSpec lattice;

    [[nodiscard]] bool resolved(Eigen::Index n) const { return mode_tail(n) <= kResolvedTail; }
    [[nodiscard]] std::vector<Eigen::Index> resolved_modes() const;
};

SpectralSystem analytic_eigensystem(const ConvolutionRecipe& recipe, const LatticeSpec& lattice);
SpectralSystem analytic_eigensystem(const ConvolutionKernel& kernel);

// Orthonormal modes of the stationary family on {0..L}, L = lattice.max_point()
// for finite lattices. Column n solves the symmetrized difference equation at
// energy E(n); it is obtained from a twisted factorization of the tridiagonal
// operator, which stays accurate where the hypergeometric series cancels.
// tail receives the weight beyond the window for truncated lattices, for
// which the modes are computed on a wider lattice and cut back.
Eigen::MatrixXd analytic_modes(const FamilySpec& stationary, const LatticeSpec& lattice,
                               Eigen::VectorXd* tail = nullptr);

// Eigenvector of a symmetric tridiagonal matrix (diag, off) for an eigenvalue
// lambda known to high accuracy; unit length, first component >= 0.
Eigen::VectorXd tridiagonal_eigenvector(const Eigen::VectorXd& diag, const Eigen::VectorXd& off,
                                        double lambda);

enum class ModeWeight { SqrtPi, Pi };

// d_n w(x) P_n(x) straight from the terminating series, w = sqrt(pi) or pi.
// Finite families and modest N only.
Eigen::MatrixXd direct_mode_matrix(const FamilySpec& stationary, ModeWeight weight = ModeWeight::SqrtPi);

// Full spectrum of a symmetric matrix, sorted descending. Throws
// ContractViolation if H deviates from symmetry by more than 1e-10.
Eigen::VectorXd numeric_spectrum(const Eigen::MatrixXd& H);

// Largest distance between each analytic value and a distinct numeric value.
// Both sorted when the sizes agree; otherwise each analytic value takes the
// nearest unused numeric one.
double match_spectra(const Eigen::VectorXd& analytic, const Eigen::VectorXd& numeric);

// ||H phi_n - kappa(n) phi_n||_inf for each mode.
Eigen::VectorXd eigen_residuals(const SpectralSystem& sys);

// Residuals of the polynomial eigen-relations of the kernel, from the series:
//   left:  sum_x K(x,y) P_n(x) - kappa(n) P_n(y)
//   right: sum_y K(x,y) pi(y) P_n(y) - kappa(n) pi(x) P_n(x)
// each as a sup norm divided by the sup norm of P_n (resp. pi P_n).
struct PolynomialResiduals {
    double left = 0.0;
    double right = 0.0;
};
PolynomialResiduals polynomial_residuals(const ConvolutionKernel& kernel, std::int64_t n);

// 1 - max_{n>=1} |kappa(n)| over the modes of the lattice.
double spectral_gap(const SpectralSystem& sys);

}  // namespace askey
