#include "askey/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "askey/errors.hpp"
#include "series.hpp"

namespace askey {

namespace {

constexpr double kTinyPivot = 1e-300;

double guard(double p) {
    if (std::fabs(p) < kTinyPivot) return p < 0.0 ? -kTinyPivot : kTinyPivot;
    return p;
}

template <class Real>
Real guard_t(const Real& p) {
    using std::fabs;
    const Real tiny = std::numeric_limits<Real>::min() * Real(1e6);
    if (fabs(p) < tiny) return p < 0 ? Real(-tiny) : tiny;
    return p;
}

// Twisted factorization of J - lambda; returns the unnormalized vector with max entry 1.
template <class Real>
std::vector<Real> twisted_vector(const std::vector<Real>& diag, const std::vector<Real>& off, const Real& lambda) {
    using std::fabs;
    const std::size_t n = diag.size();
    std::vector<Real> z(n, Real(0));
    if (n == 1) {
        z[0] = 1;
        return z;
    }
    std::vector<Real> d(n);
    std::vector<Real> u(n);
    d[0] = guard_t<Real>(diag[0] - lambda);
    for (std::size_t i = 0; i + 1 < n; ++i) d[i + 1] = guard_t<Real>(diag[i + 1] - lambda - off[i] * off[i] / d[i]);
    u[n - 1] = guard_t<Real>(diag[n - 1] - lambda);
    for (std::size_t i = n - 1; i-- > 0;) u[i] = guard_t<Real>(diag[i] - lambda - off[i] * off[i] / u[i + 1]);

    // Twist at the smallest |gamma_r|, the reciprocal of the r-th diagonal of (J - lambda)^-1.
    std::size_t r = 0;
    Real best = fabs(d[0] + u[0] - (diag[0] - lambda));
    for (std::size_t i = 1; i < n; ++i) {
        const Real g = fabs(d[i] + u[i] - (diag[i] - lambda));
        if (g < best) {
            best = g;
            r = i;
        }
    }
    z[r] = 1;
    for (std::size_t i = r; i-- > 0;) z[i] = -(off[i] / d[i]) * z[i + 1];
    for (std::size_t i = r + 1; i < n; ++i) z[i] = -(off[i - 1] / u[i]) * z[i - 1];
    Real top = 0;
    for (const auto& v : z) top = std::max<Real>(top, fabs(v));
    for (auto& v : z) v /= top;
    return z;
}

// q-Hahn difference operator in precision Real. Entries grow like q^-N while low gaps stay O(1),
// so doubles cannot separate the low modes once q^-N is large.
template <class Real>
Eigen::MatrixXd qhahn_modes(const FamilySpec& s, Eigen::Index size) {
    using std::pow;
    using std::sqrt;
    const Real q = Real(s.q());
    const Real a = Real(s.a());
    const Real b = Real(s.b());
    const std::int64_t N = s.N();
    auto B = [&](std::int64_t x) { return (1 - a * pow(q, Real(x))) * (pow(q, Real(x - N)) - 1); };
    auto D = [&](std::int64_t x) { return a / q * (1 - pow(q, Real(x))) * (pow(q, Real(x - N)) - b); };
    std::vector<Real> diag(static_cast<std::size_t>(N + 1));
    std::vector<Real> off(static_cast<std::size_t>(N));
    for (std::int64_t x = 0; x <= N; ++x) {
        diag[static_cast<std::size_t>(x)] = B(x) + D(x);
        if (x < N) off[static_cast<std::size_t>(x)] = -sqrt(B(x) * D(x + 1));
    }
    Eigen::MatrixXd phi(size, size);
    for (Eigen::Index n = 0; n < size; ++n) {
        const Real E = (pow(q, Real(-n)) - 1) * (1 - a * b * pow(q, Real(n - 1)));
        const auto z = twisted_vector<Real>(diag, off, E);
        Real norm = 0;
        for (const auto& v : z) norm += v * v;
        norm = sqrt(norm);
        const double sign = z[0] < 0 ? -1.0 : 1.0;
        for (Eigen::Index x = 0; x < size; ++x) phi(x, n) = sign * static_cast<double>(z[static_cast<std::size_t>(x)] / norm);
    }
    return phi;
}

Eigen::MatrixXd qhahn_modes(const FamilySpec& s, Eigen::Index size) {
    // Decimal digits lost to the spread between the operator norm and the unit gaps near n = 0.
    const double lost = static_cast<double>(s.N()) * -std::log10(s.q()) + std::log10(4.0 * (1.0 + std::fabs(s.b())));
    if (lost <= 2.0) return qhahn_modes<double>(s, size);
    if (lost <= 32.0) return qhahn_modes<detail::mp50>(s, size);
    if (lost <= 80.0) return qhahn_modes<detail::mp100>(s, size);
    if (lost <= 230.0) return qhahn_modes<detail::mp250>(s, size);
    return qhahn_modes<detail::mp600>(s, size);
}

}  // namespace

HamiltonianBuild classical_hamiltonian(const Eigen::MatrixXd& K, const Eigen::VectorXd& pi) {
    if (K.rows() != K.cols() || K.rows() != pi.size()) {
        throw DomainError("classical_hamiltonian: kernel and pi sizes differ");
    }
    if (!(pi.array() > 0.0).all()) throw DomainError("classical_hamiltonian: pi must be positive");
    const Eigen::VectorXd s = pi.cwiseSqrt();
    const Eigen::MatrixXd raw = s.cwiseInverse().asDiagonal() * K * s.asDiagonal();
    return {0.5 * (raw + raw.transpose()), (raw - raw.transpose()).cwiseAbs().maxCoeff()};
}

HamiltonianBuild classical_hamiltonian(const ConvolutionKernel& kernel) {
    const Eigen::Index n = kernel.matrix.rows();
    if (kernel.log_pi.size() != n) throw DomainError("classical_hamiltonian: pi size mismatch");
    if (!kernel.log_pi.allFinite()) throw DomainError("classical_hamiltonian: pi must be positive");
    Eigen::MatrixXd raw(n, n);
    for (Eigen::Index y = 0; y < n; ++y) {
        for (Eigen::Index x = 0; x < n; ++x) {
            raw(x, y) = kernel.matrix(x, y) * std::exp(0.5 * (kernel.log_pi(y) - kernel.log_pi(x)));
        }
    }
    return {0.5 * (raw + raw.transpose()), (raw - raw.transpose()).cwiseAbs().maxCoeff()};
}

std::vector<Eigen::Index> SpectralSystem::resolved_modes() const {
    std::vector<Eigen::Index> out;
    for (Eigen::Index n = 0; n < mode_tail.size(); ++n) {
        if (resolved(n)) out.push_back(n);
    }
    return out;
}

Eigen::VectorXd tridiagonal_eigenvector(const Eigen::VectorXd& diag, const Eigen::VectorXd& off,
                                        double lambda) {
    const Eigen::Index n = diag.size();
    if (n == 0 || off.size() != n - 1) throw DomainError("tridiagonal_eigenvector: bad sizes");
    Eigen::VectorXd z(n);
    if (n == 1) {
        z(0) = 1.0;
        return z;
    }
    // Forward pivots d and backward pivots u of J - lambda.
    Eigen::VectorXd d(n);
    Eigen::VectorXd u(n);
    d(0) = guard(diag(0) - lambda);
    for (Eigen::Index i = 0; i + 1 < n; ++i) d(i + 1) = guard(diag(i + 1) - lambda - off(i) * off(i) / d(i));
    u(n - 1) = guard(diag(n - 1) - lambda);
    for (Eigen::Index i = n - 2; i >= 0; --i) u(i) = guard(diag(i) - lambda - off(i) * off(i) / u(i + 1));

    // Twist at the smallest |gamma_r|, the reciprocal of the r-th diagonal of (J - lambda)^-1.
    Eigen::Index r = 0;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double g = std::fabs(d(i) + u(i) - (diag(i) - lambda));
        if (g < best) {
            best = g;
            r = i;
        }
    }
    z(r) = 1.0;
    for (Eigen::Index i = r - 1; i >= 0; --i) z(i) = -(off(i) / d(i)) * z(i + 1);
    for (Eigen::Index i = r + 1; i < n; ++i) z(i) = -(off(i - 1) / u(i)) * z(i - 1);

    // Rescale before normalizing so that the largest entry is 1.
    z /= z.cwiseAbs().maxCoeff();
    z.normalize();
    if (z(0) < 0.0) z = -z;
    return z;
}

Eigen::MatrixXd analytic_modes(const FamilySpec& stationary, const LatticeSpec& lattice,
                               Eigen::VectorXd* tail) {
    if (stationary.finite() != lattice.is_finite()) {
        throw DomainError("analytic_modes: lattice kind does not match " + stationary.to_string());
    }
    if (stationary.family() == Family::QHahn) {
        if (tail) *tail = Eigen::VectorXd::Zero(lattice.size());
        return qhahn_modes(stationary, lattice.size());
    }
    const std::int64_t M = lattice.max_point();
    const std::int64_t L = lattice.is_finite() ? M : 2 * M + 40;
    const Eigen::Index len = L + 1;

    Eigen::VectorXd diag(len);
    Eigen::VectorXd off(len > 0 ? len - 1 : 0);
    for (std::int64_t x = 0; x <= L; ++x) {
        diag(x) = difference_B(stationary, x) + difference_D(stationary, x);
        if (x < L) off(x) = -std::sqrt(difference_B(stationary, x) * difference_D(stationary, x + 1));
    }

    const Eigen::Index size = lattice.size();
    Eigen::MatrixXd phi(size, size);
    if (tail) *tail = Eigen::VectorXd::Zero(size);
    for (Eigen::Index n = 0; n < size; ++n) {
        const Eigen::VectorXd z = tridiagonal_eigenvector(diag, off, difference_energy(stationary, n));
        phi.col(n) = z.head(size);
        if (tail && len > size) (*tail)(n) = z.tail(len - size).squaredNorm();
    }
    return phi;
}

SpectralSystem analytic_eigensystem(const ConvolutionKernel& kernel) {
    HamiltonianBuild h = classical_hamiltonian(kernel);
    const Eigen::Index size = kernel.lattice.size();
    Eigen::VectorXd kap(size);
    for (Eigen::Index n = 0; n < size; ++n) kap(n) = kappa(kernel.recipe, n);
    Eigen::VectorXd tail;
    Eigen::MatrixXd phi = analytic_modes(kernel.recipe.lambda3, kernel.lattice, &tail);
    return SpectralSystem{std::move(h.matrix),
                          std::move(kap),
                          std::move(phi),
                          (0.5 * kernel.log_pi.array()).exp().matrix(),
                          std::move(tail),
                          h.asymmetry,
                          kernel.recipe,
                          kernel.lattice};
}

SpectralSystem analytic_eigensystem(const ConvolutionRecipe& recipe, const LatticeSpec& lattice) {
    return analytic_eigensystem(build_kernel(recipe, lattice));
}

Eigen::MatrixXd direct_mode_matrix(const FamilySpec& stationary, ModeWeight weight) {
    if (!stationary.finite()) throw DomainError("direct_mode_matrix: finite families only");
    const std::int64_t N = stationary.N();
    const double power = weight == ModeWeight::SqrtPi ? 0.5 : 1.0;
    Eigen::MatrixXd phi(N + 1, N + 1);
    for (std::int64_t n = 0; n <= N; ++n) {
        const double half_log_d2 = 0.5 * log_norm_constant_sq(stationary, n);
        for (std::int64_t x = 0; x <= N; ++x) {
            phi(x, n) = std::exp(half_log_d2 + power * log_measure(stationary, x)) * polynomial(stationary, n, x);
        }
    }
    return phi;
}

Eigen::VectorXd numeric_spectrum(const Eigen::MatrixXd& H) {
    if (H.rows() != H.cols()) throw ContractViolation("numeric_spectrum: matrix is not square");
    if (H.size() == 0) return {};
    const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
    const double asym = (H - H.transpose()).cwiseAbs().maxCoeff();
    if (!(asym <= 1e-10 * scale)) {
        throw ContractViolation("numeric_spectrum: matrix is not symmetric (deviation " +
                                std::to_string(asym) + ")");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw ContractViolation("numeric_spectrum: eigensolver failed");
    Eigen::VectorXd ev = solver.eigenvalues();
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

double match_spectra(const Eigen::VectorXd& analytic, const Eigen::VectorXd& numeric) {
    if (analytic.size() > numeric.size()) return std::numeric_limits<double>::infinity();
    Eigen::VectorXd a = analytic;
    std::sort(a.begin(), a.end(), std::greater<>());
    if (analytic.size() == numeric.size()) {
        Eigen::VectorXd b = numeric;
        std::sort(b.begin(), b.end(), std::greater<>());
        return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
    }
    std::vector<bool> used(static_cast<std::size_t>(numeric.size()), false);
    double worst = 0.0;
    for (const double v : a) {
        Eigen::Index pick = -1;
        double dist = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < numeric.size(); ++j) {
            if (!used[static_cast<std::size_t>(j)] && std::fabs(numeric(j) - v) < dist) {
                dist = std::fabs(numeric(j) - v);
                pick = j;
            }
        }
        used[static_cast<std::size_t>(pick)] = true;
        worst = std::max(worst, dist);
    }
    return worst;
}

Eigen::VectorXd eigen_residuals(const SpectralSystem& sys) {
    const Eigen::MatrixXd R = sys.hamiltonian * sys.phi - sys.phi * sys.kappas.asDiagonal();
    Eigen::VectorXd out(R.cols());
    for (Eigen::Index n = 0; n < R.cols(); ++n) out(n) = R.col(n).cwiseAbs().maxCoeff();
    return out;
}

PolynomialResiduals polynomial_residuals(const ConvolutionKernel& kernel, std::int64_t n) {
    if (!kernel.lattice.is_finite()) throw DomainError("polynomial_residuals: finite lattices only");
    const std::int64_t N = kernel.lattice.max_point();
    if (n < 0 || n > N) throw DomainError("polynomial_residuals: degree outside the lattice");
    Eigen::VectorXd P(N + 1);
    for (std::int64_t x = 0; x <= N; ++x) P(x) = polynomial(kernel.recipe.lambda3, n, x);
    const double k = kappa(kernel.recipe, n);
    const Eigen::VectorXd piP = kernel.pi.cwiseProduct(P);
    PolynomialResiduals r;
    r.left = (kernel.matrix.transpose() * P - k * P).cwiseAbs().maxCoeff() / P.cwiseAbs().maxCoeff();
    r.right = (kernel.matrix * piP - k * piP).cwiseAbs().maxCoeff() / piP.cwiseAbs().maxCoeff();
    return r;
}

double spectral_gap(const SpectralSystem& sys) {
    double m = 0.0;
    for (Eigen::Index n = 1; n < sys.kappas.size(); ++n) m = std::max(m, std::fabs(sys.kappas(n)));
    return 1.0 - m;
}

}  // namespace askey
