#pragma once
// Free spinless fermions hopping with the classical Hamiltonian,
// H_f = sum_{x,y} H(x,y) c_x^dag c_y = sum_n kappa(n) chat_n^dag chat_n,
// plus a brute-force Jordan-Wigner realization used as an oracle.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <vector>

#include "askey/spectral.hpp"

namespace askey {

// Largest lattice the dense many-body machinery accepts.
inline constexpr int kMaxManyBodySites = 12;

// Single-particle energies and orthonormal modes of a spectral system. Finite
// lattices use kappa(n) and phi; truncated lattices use the numeric
// eigenpairs of the truncated H, sorted by decreasing energy, since only the
// resolved analytic modes are eigenvectors of the truncated matrix.
struct SingleParticleData {
    Eigen::VectorXd energies;
    Eigen::MatrixXd modes;
};
SingleParticleData single_particle_data(const SpectralSystem& sys);

class FreeFermionModel {
public:
    // Fills every mode with energy below mu.
    static FreeFermionModel ground_state(SpectralSystem sys, double mu = 0.0);
    // Explicit filling; indices must lie in 0..size-1.
    static FreeFermionModel with_filling(SpectralSystem sys, std::vector<Eigen::Index> filled);

    [[nodiscard]] const SpectralSystem& spectral() const { return spectral_; }
    [[nodiscard]] const SingleParticleData& single_particle() const { return single_; }
    [[nodiscard]] const std::vector<Eigen::Index>& filled_modes() const { return filled_; }
    [[nodiscard]] double mu() const { return mu_; }
    [[nodiscard]] Eigen::Index size() const { return single_.energies.size(); }
    // Energy of the filled state, sum of the filled single-particle energies.
    [[nodiscard]] double energy() const;

private:
    FreeFermionModel(SpectralSystem sys, SingleParticleData sp, std::vector<Eigen::Index> filled, double mu)
        : spectral_(std::move(sys)), single_(std::move(sp)), filled_(std::move(filled)), mu_(mu) {}
    SpectralSystem spectral_;
    SingleParticleData single_;
    std::vector<Eigen::Index> filled_;
    double mu_;
};

struct CorrelationMatrix {
    Eigen::MatrixXd matrix;  // C(x,y) = sum_{n filled} phi_n(x) phi_n(y)
};

CorrelationMatrix correlation_matrix(const FreeFermionModel& model);

// All 2^size subset sums of the energies, sorted ascending. Throws
// SizeCapExceeded unless size <= max_size <= kMaxManyBodySites.
std::vector<double> many_body_energies(const Eigen::VectorXd& energies, int max_size = kMaxManyBodySites);
std::vector<double> many_body_energies(const SpectralSystem& sys, int max_size = kMaxManyBodySites);

// Half-open site range [begin, end).
struct Block {
    Eigen::Index begin = 0;
    Eigen::Index end = 0;
    [[nodiscard]] Eigen::Index size() const { return end - begin; }
};

// Entanglement entropy of a block from the eigenvalues of its correlation
// submatrix, clamped to [1e-12, 1 - 1e-12]. An empty block gives 0.
double block_entropy(const CorrelationMatrix& C, Block block);

// S([0, l)) for l = 0..size.
std::vector<double> entropy_sweep(const CorrelationMatrix& C);

// Explicit fermion operators on the 2^sites Fock space. Basis state s has
// site x occupied when bit x is set; c_x carries the sign (-1)^(number of
// occupied sites below x).
class JordanWigner {
public:
    using Operator = Eigen::SparseMatrix<double>;

    explicit JordanWigner(int sites);

    [[nodiscard]] int sites() const { return sites_; }
    [[nodiscard]] Eigen::Index dimension() const { return Eigen::Index{1} << sites_; }
    [[nodiscard]] const Operator& annihilator(int x) const { return c_[static_cast<std::size_t>(x)]; }
    [[nodiscard]] Operator creator(int x) const { return Operator(annihilator(x).transpose()); }

    // sum_{x,y} H(x,y) c_x^dag c_y
    [[nodiscard]] Operator hamiltonian(const Eigen::MatrixXd& H) const;
    // sum_x phi(x) c_x^dag
    [[nodiscard]] Operator mode_creator(const Eigen::VectorXd& phi) const;
    // Total particle number.
    [[nodiscard]] Operator number() const;

private:
    int sites_;
    std::vector<Operator> c_;
};

// Full many-body spectrum of sum H(x,y) c_x^dag c_y, sorted ascending,
// diagonalized one particle-number sector at a time.
std::vector<double> jordan_wigner_spectrum(const Eigen::MatrixXd& H, int max_size = kMaxManyBodySites);

// Lowest state of H_f - mu N in the Fock basis. Throws ContractViolation if
// it is degenerate within 1e-9.
Eigen::VectorXd jordan_wigner_ground_state(const Eigen::MatrixXd& H, double mu = 0.0,
                                           int max_size = kMaxManyBodySites);

// von Neumann entropy of the sites [begin, end) in a Fock-space state.
double reduced_density_entropy(const Eigen::VectorXd& state, int sites, Block block);

}  // namespace askey
