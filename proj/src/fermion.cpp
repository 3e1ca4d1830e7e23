#include "askey/fermion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "askey/errors.hpp"

namespace askey {

namespace {

constexpr double kEntropyClamp = 1e-12;

void require_sites(Eigen::Index size, int max_size) {
    if (max_size > kMaxManyBodySites || size > max_size) {
        throw SizeCapExceeded("many-body size " + std::to_string(size) + " exceeds the cap " +
                              std::to_string(std::min(max_size, kMaxManyBodySites)));
    }
}

double binary_entropy(double p) {
    p = std::clamp(p, kEntropyClamp, 1.0 - kEntropyClamp);
    return -(p * std::log(p) + (1.0 - p) * std::log1p(-p));
}

}  // namespace

SingleParticleData single_particle_data(const SpectralSystem& sys) {
    if (sys.lattice.is_finite()) return {sys.kappas, sys.phi};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sys.hamiltonian);
    if (solver.info() != Eigen::Success) throw ContractViolation("single_particle_data: eigensolver failed");
    const Eigen::Index n = sys.hamiltonian.rows();
    SingleParticleData out{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
    for (Eigen::Index j = 0; j < n; ++j) {
        out.energies(j) = solver.eigenvalues()(n - 1 - j);
        out.modes.col(j) = solver.eigenvectors().col(n - 1 - j);
    }
    return out;
}

FreeFermionModel FreeFermionModel::ground_state(SpectralSystem sys, double mu) {
    SingleParticleData sp = single_particle_data(sys);
    std::vector<Eigen::Index> filled;
    for (Eigen::Index n = 0; n < sp.energies.size(); ++n) {
        if (sp.energies(n) < mu) filled.push_back(n);
    }
    return {std::move(sys), std::move(sp), std::move(filled), mu};
}

FreeFermionModel FreeFermionModel::with_filling(SpectralSystem sys, std::vector<Eigen::Index> filled) {
    SingleParticleData sp = single_particle_data(sys);
    std::sort(filled.begin(), filled.end());
    if (std::adjacent_find(filled.begin(), filled.end()) != filled.end()) {
        throw DomainError("filled modes must be distinct");
    }
    for (const Eigen::Index n : filled) {
        if (n < 0 || n >= sp.energies.size()) {
            throw DomainError("filled mode " + std::to_string(n) + " outside 0.." +
                              std::to_string(sp.energies.size() - 1));
        }
    }
    return {std::move(sys), std::move(sp), std::move(filled), std::numeric_limits<double>::quiet_NaN()};
}

double FreeFermionModel::energy() const {
    double e = 0.0;
    for (const Eigen::Index n : filled_) e += single_.energies(n);
    return e;
}

CorrelationMatrix correlation_matrix(const FreeFermionModel& model) {
    const Eigen::Index size = model.size();
    Eigen::MatrixXd F(size, static_cast<Eigen::Index>(model.filled_modes().size()));
    for (std::size_t j = 0; j < model.filled_modes().size(); ++j) {
        F.col(static_cast<Eigen::Index>(j)) = model.single_particle().modes.col(model.filled_modes()[j]);
    }
    return {F * F.transpose()};
}

std::vector<double> many_body_energies(const Eigen::VectorXd& energies, int max_size) {
    require_sites(energies.size(), max_size);
    const auto L = static_cast<int>(energies.size());
    std::vector<double> out(std::size_t{1} << L);
    for (std::size_t s = 0; s < out.size(); ++s) {
        double e = 0.0;
        for (int n = 0; n < L; ++n) {
            if (s >> n & 1U) e += energies(n);
        }
        out[s] = e;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> many_body_energies(const SpectralSystem& sys, int max_size) {
    require_sites(sys.lattice.size(), max_size);
    return many_body_energies(single_particle_data(sys).energies, max_size);
}

double block_entropy(const CorrelationMatrix& C, Block block) {
    if (block.begin < 0 || block.end > C.matrix.rows() || block.begin > block.end) {
        throw DomainError("block_entropy: block outside the lattice");
    }
    if (block.size() == 0) return 0.0;
    const Eigen::MatrixXd sub = C.matrix.block(block.begin, block.begin, block.size(), block.size());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sub, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (const double v : solver.eigenvalues()) s += binary_entropy(v);
    return s;
}

std::vector<double> entropy_sweep(const CorrelationMatrix& C) {
    std::vector<double> out;
    for (Eigen::Index l = 0; l <= C.matrix.rows(); ++l) out.push_back(block_entropy(C, {0, l}));
    return out;
}

JordanWigner::JordanWigner(int sites) : sites_(sites) {
    require_sites(sites, kMaxManyBodySites);
    if (sites < 0) throw DomainError("JordanWigner: negative size");
    const Eigen::Index dim = dimension();
    for (int x = 0; x < sites; ++x) {
        std::vector<Eigen::Triplet<double>> t;
        const std::uint32_t below = (std::uint32_t{1} << x) - 1;
        for (Eigen::Index s = 0; s < dim; ++s) {
            const auto u = static_cast<std::uint32_t>(s);
            if (!(u >> x & 1U)) continue;
            const double sign = std::popcount(u & below) % 2 == 0 ? 1.0 : -1.0;
            t.emplace_back(static_cast<Eigen::Index>(u ^ (std::uint32_t{1} << x)), s, sign);
        }
        Operator c(dim, dim);
        c.setFromTriplets(t.begin(), t.end());
        c_.push_back(std::move(c));
    }
}

JordanWigner::Operator JordanWigner::hamiltonian(const Eigen::MatrixXd& H) const {
    if (H.rows() != sites_ || H.cols() != sites_) throw DomainError("JordanWigner: matrix size mismatch");
    Operator out(dimension(), dimension());
    for (int x = 0; x < sites_; ++x) {
        const Operator cd = creator(x);
        for (int y = 0; y < sites_; ++y) {
            if (H(x, y) != 0.0) out += H(x, y) * Operator(cd * annihilator(y));
        }
    }
    return out;
}

JordanWigner::Operator JordanWigner::mode_creator(const Eigen::VectorXd& phi) const {
    if (phi.size() != sites_) throw DomainError("JordanWigner: mode size mismatch");
    Operator out(dimension(), dimension());
    for (int x = 0; x < sites_; ++x) out += phi(x) * creator(x);
    return out;
}

JordanWigner::Operator JordanWigner::number() const {
    Operator out(dimension(), dimension());
    for (int x = 0; x < sites_; ++x) out += Operator(creator(x) * annihilator(x));
    return out;
}

namespace {

// Basis states of each particle-number sector.
std::vector<std::vector<Eigen::Index>> sectors(int sites) {
    std::vector<std::vector<Eigen::Index>> out(static_cast<std::size_t>(sites) + 1);
    for (Eigen::Index s = 0; s < (Eigen::Index{1} << sites); ++s) {
        out[static_cast<std::size_t>(std::popcount(static_cast<std::uint32_t>(s)))].push_back(s);
    }
    return out;
}

Eigen::MatrixXd sector_block(const JordanWigner::Operator& op, const std::vector<Eigen::Index>& states) {
    const auto m = static_cast<Eigen::Index>(states.size());
    std::vector<Eigen::Index> position(static_cast<std::size_t>(op.rows()), -1);
    for (Eigen::Index i = 0; i < m; ++i) position[static_cast<std::size_t>(states[i])] = i;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        for (JordanWigner::Operator::InnerIterator it(op, states[j]); it; ++it) {
            const Eigen::Index i = position[static_cast<std::size_t>(it.row())];
            if (i < 0) throw ContractViolation("operator does not conserve particle number");
            out(i, j) = it.value();
        }
    }
    return out;
}

}  // namespace

std::vector<double> jordan_wigner_spectrum(const Eigen::MatrixXd& H, int max_size) {
    require_sites(H.rows(), max_size);
    const auto L = static_cast<int>(H.rows());
    const JordanWigner jw(L);
    const JordanWigner::Operator hf = jw.hamiltonian(H);
    std::vector<double> out;
    for (const auto& states : sectors(L)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sector_block(hf, states), Eigen::EigenvaluesOnly);
        for (const double v : solver.eigenvalues()) out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Eigen::VectorXd jordan_wigner_ground_state(const Eigen::MatrixXd& H, double mu, int max_size) {
    require_sites(H.rows(), max_size);
    const auto L = static_cast<int>(H.rows());
    const JordanWigner jw(L);
    const JordanWigner::Operator hf = jw.hamiltonian(H);
    double best = std::numeric_limits<double>::infinity();
    double second = std::numeric_limits<double>::infinity();
    Eigen::VectorXd state = Eigen::VectorXd::Zero(jw.dimension());
    const auto all = sectors(L);
    for (std::size_t k = 0; k < all.size(); ++k) {
        const auto& states = all[k];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sector_block(hf, states));
        const Eigen::VectorXd ev = solver.eigenvalues().array() - mu * static_cast<double>(k);
        for (Eigen::Index i = 0; i < ev.size(); ++i) {
            if (ev(i) < best) {
                second = best;
                best = ev(i);
                state.setZero();
                for (std::size_t j = 0; j < states.size(); ++j) {
                    state(states[j]) = solver.eigenvectors()(static_cast<Eigen::Index>(j), i);
                }
            } else if (ev(i) < second) {
                second = ev(i);
            }
        }
    }
    if (second - best < 1e-9) throw ContractViolation("jordan_wigner_ground_state: degenerate ground state");
    return state;
}

double reduced_density_entropy(const Eigen::VectorXd& state, int sites, Block block) {
    if (state.size() != (Eigen::Index{1} << sites)) throw DomainError("reduced_density_entropy: state size");
    if (block.begin < 0 || block.end > sites || block.begin > block.end) {
        throw DomainError("reduced_density_entropy: block outside the lattice");
    }
    const auto nA = static_cast<int>(block.size());
    if (nA == 0 || nA == sites) return 0.0;
    const auto begin = static_cast<int>(block.begin);
    const std::uint32_t maskA = ((std::uint32_t{1} << nA) - 1) << begin;
    // Psi(a, b) with a the block occupation and b the rest packed together.
    Eigen::MatrixXd psi = Eigen::MatrixXd::Zero(Eigen::Index{1} << nA, Eigen::Index{1} << (sites - nA));
    for (Eigen::Index s = 0; s < state.size(); ++s) {
        const auto u = static_cast<std::uint32_t>(s);
        const std::uint32_t a = (u & maskA) >> begin;
        const std::uint32_t low = u & ((std::uint32_t{1} << begin) - 1);
        const std::uint32_t high = u >> (begin + nA);
        const std::uint32_t b = low | (high << begin);
        psi(a, b) = state(s);
    }
    const Eigen::MatrixXd rho = psi * psi.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(rho, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (const double p : solver.eigenvalues()) {
        if (p > 1e-300) s -= p * std::log(p);
    }
    return s;
}

}  // namespace askey
