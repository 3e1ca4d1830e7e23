#include "askey/markov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "askey/errors.hpp"

namespace askey {

namespace {

constexpr std::int64_t kMaxCutoff = 1'000'000;
constexpr std::int64_t kMaxTailTerms = 200'000;

// Lazily filled table of ln pi(x, size) for one family.
class MeasureCache {
public:
    explicit MeasureCache(FamilySpec spec) : spec_(spec) {}

    double operator()(std::int64_t x, std::int64_t size) {
        const std::size_t row = spec_.finite() ? static_cast<std::size_t>(size) : 0;
        if (rows_.size() <= row) rows_.resize(row + 1);
        auto& r = rows_[row];
        const auto ix = static_cast<std::size_t>(x);
        if (r.size() <= ix) r.resize(ix + 1, kUnset);
        if (std::isnan(r[ix])) r[ix] = log_measure(spec_, x, spec_.finite() ? size : 0);
        return r[ix];
    }

private:
    static constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();
    FamilySpec spec_;
    std::vector<std::vector<double>> rows_;
};

void require_supported(const FamilySpec& f) {
    if (f.finite()) {
        throw DomainError("truncation applies to Charlier and Meixner only, got " + f.to_string());
    }
}

// Bound on pi(x+1)/pi(x) for all x >= M+1.
double tail_ratio(const FamilySpec& f, std::int64_t M) {
    const double m = static_cast<double>(M);
    if (f.family() == Family::Charlier) return f.a() / (m + 2.0);
    return f.b() * std::max(1.0, (m + 1.0 + f.a()) / (m + 2.0));
}

}  // namespace

double tail_bound(const FamilySpec& family, std::int64_t M) {
    require_supported(family);
    if (M < 0) throw DomainError("tail_bound: negative cutoff");
    const double r = tail_ratio(family, M);
    if (!(r < 1.0)) return std::numeric_limits<double>::infinity();
    return std::exp(log_measure(family, M + 1)) / (1.0 - r);
}

std::int64_t truncation_cutoff(const FamilySpec& family, double tail_eps) {
    require_supported(family);
    if (!(tail_eps > 0.0 && tail_eps <= 1e-6)) {
        throw DomainError("truncation_cutoff: tail_eps must lie in (0, 1e-6]");
    }
    for (std::int64_t M = 0; M <= kMaxCutoff; ++M) {
        if (tail_bound(family, M) <= tail_eps) return M;
    }
    throw DomainError("truncation_cutoff: no cutoff below " + std::to_string(kMaxCutoff) +
                      " for " + family.to_string());
}

LatticeSpec LatticeSpec::finite(std::int64_t N) {
    if (N < 0) throw DomainError("finite lattice needs N >= 0");
    return {Kind::Finite, N, 0.0};
}

LatticeSpec LatticeSpec::truncated_for(const FamilySpec& stationary, double tail_eps) {
    const std::int64_t M = truncation_cutoff(stationary, tail_eps);
    return {Kind::TruncatedSemiInfinite, M, tail_bound(stationary, M)};
}

LatticeSpec LatticeSpec::truncated_at(const FamilySpec& stationary, std::int64_t M) {
    const double eps = tail_bound(stationary, M);
    if (!std::isfinite(eps)) {
        throw DomainError("no certified tail bound at M=" + std::to_string(M) + " for " +
                          stationary.to_string());
    }
    return {Kind::TruncatedSemiInfinite, M, eps};
}

LatticeSpec lattice_for(const ConvolutionRecipe& recipe, double tail_eps) {
    if (recipe.lambda3.finite()) return LatticeSpec::finite(recipe.N);
    return LatticeSpec::truncated_for(recipe.lambda3, tail_eps);
}

Eigen::MatrixXd build_type1(const LogMeasureFn& pi2, const LogMeasureFn& pi1, const LatticeSpec& lattice) {
    const std::int64_t N = lattice.max_point();
    Eigen::MatrixXd K(lattice.size(), lattice.size());
    for (std::int64_t y = 0; y <= N; ++y) {
        for (std::int64_t x = 0; x <= N; ++x) {
            double s = 0.0;
            for (std::int64_t z = 0; z <= std::min(x, y); ++z) s += std::exp(pi2(x - z, N - z) + pi1(z, y));
            K(x, y) = s;
        }
    }
    return K;
}

Eigen::MatrixXd build_type2(const LogMeasureFn& pi2, const LogMeasureFn& pi1, const LatticeSpec& lattice) {
    if (!lattice.is_finite()) throw DomainError("type ii kernels need a finite lattice");
    const std::int64_t N = lattice.max_point();
    Eigen::MatrixXd K(lattice.size(), lattice.size());
    for (std::int64_t y = 0; y <= N; ++y) {
        for (std::int64_t x = 0; x <= N; ++x) {
            double s = 0.0;
            for (std::int64_t z = std::max<std::int64_t>(0, x + y - N); z <= std::min(x, y); ++z) {
                s += std::exp(pi2(x - z, N - y) + pi1(z, y));
            }
            K(x, y) = s;
        }
    }
    return K;
}

Eigen::MatrixXd build_type3(const LogMeasureFn& pi2, const LogMeasureFn& pi1, const LatticeSpec& lattice) {
    const std::int64_t N = lattice.max_point();
    Eigen::MatrixXd K(lattice.size(), lattice.size());
    for (std::int64_t y = 0; y <= N; ++y) {
        for (std::int64_t x = 0; x <= N; ++x) {
            const std::int64_t z0 = std::max(x, y);
            double s = 0.0;
            if (lattice.is_finite()) {
                for (std::int64_t z = z0; z <= N; ++z) s += std::exp(pi2(x, z) + pi1(z - y, N - y));
            } else {
                double prev = std::numeric_limits<double>::infinity();
                int small = 0;
                std::int64_t z = z0;
                for (; z - z0 < kMaxTailTerms; ++z) {
                    const double t = std::exp(pi2(x, z) + pi1(z - y, 0));
                    s += t;
                    small = (t < 1e-16 * s && t < prev) ? small + 1 : 0;
                    prev = t;
                    if (small == 3) break;
                }
                if (small < 3) {
                    throw DomainError("type iii sum did not converge at x=" + std::to_string(x) +
                                      " y=" + std::to_string(y));
                }
            }
            K(x, y) = s;
        }
    }
    return K;
}

ConvolutionType kernel_type(const ConvolutionRecipe& recipe) {
    if (recipe.type == ConvolutionType::TypeII &&
        (recipe.family == Family::Charlier || recipe.family == Family::Meixner)) {
        return ConvolutionType::TypeI;
    }
    return recipe.type;
}

ConvolutionKernel build_kernel(const ConvolutionRecipe& recipe, const LatticeSpec& lattice) {
    if (recipe.lambda3.finite() != lattice.is_finite()) {
        throw DomainError("lattice kind does not match the stationary family " + recipe.lambda3.to_string());
    }
    if (lattice.is_finite() && lattice.max_point() != recipe.N) {
        throw DomainError("lattice size does not match recipe N");
    }
    MeasureCache c1(recipe.lambda1);
    MeasureCache c2(recipe.lambda2);
    const LogMeasureFn pi1 = [&c1](std::int64_t x, std::int64_t n) { return c1(x, n); };
    const LogMeasureFn pi2 = [&c2](std::int64_t x, std::int64_t n) { return c2(x, n); };

    Eigen::MatrixXd K;
    switch (kernel_type(recipe)) {
        case ConvolutionType::TypeI: K = build_type1(pi2, pi1, lattice); break;
        case ConvolutionType::TypeII: K = build_type2(pi2, pi1, lattice); break;
        case ConvolutionType::TypeIII: K = build_type3(pi2, pi1, lattice); break;
    }

    const Eigen::Index n = lattice.size();
    Eigen::VectorXd log_pi(n);
    for (Eigen::Index x = 0; x < n; ++x) log_pi(x) = log_measure(recipe.lambda3, x);

    Eigen::VectorXd leakage = Eigen::VectorXd::Zero(n);
    if (!lattice.is_finite()) {
        for (Eigen::Index y = 0; y < n; ++y) {
            leakage(y) = 1.0 - K.col(y).sum();
            K(y, y) += leakage(y);
        }
    }
    return ConvolutionKernel{std::move(K), log_pi.array().exp().matrix(), log_pi, recipe, lattice,
                             std::move(leakage)};
}

KernelReport verify_kernel(const Eigen::MatrixXd& K, const Eigen::VectorXd& pi, double tol) {
    KernelReport r;
    r.tol = tol;
    const Eigen::Index n = K.rows();
    if (K.cols() != n || pi.size() != n || n == 0) {
        r.max_stochastic_violation = std::numeric_limits<double>::infinity();
        r.max_reversibility_violation = std::numeric_limits<double>::infinity();
        r.passed = false;
        return r;
    }
    r.positivity = (K.array() > 0.0).all();
    double flux_max = 0.0;
    for (Eigen::Index y = 0; y < n; ++y) {
        r.max_stochastic_violation = std::max(r.max_stochastic_violation, std::fabs(K.col(y).sum() - 1.0));
        for (Eigen::Index x = 0; x < n; ++x) flux_max = std::max(flux_max, std::fabs(K(x, y) * pi(y)));
    }
    double rev = 0.0;
    for (Eigen::Index y = 0; y < n; ++y) {
        for (Eigen::Index x = 0; x < y; ++x) rev = std::max(rev, std::fabs(K(x, y) * pi(y) - K(y, x) * pi(x)));
    }
    r.max_reversibility_violation = flux_max > 0.0 ? rev / flux_max : rev;
    // std::max drops NaN, so check finiteness separately.
    if (!K.allFinite() || !pi.allFinite()) {
        r.max_stochastic_violation = std::numeric_limits<double>::quiet_NaN();
        r.max_reversibility_violation = std::numeric_limits<double>::quiet_NaN();
    }
    r.passed = r.max_stochastic_violation <= tol && r.max_reversibility_violation <= tol;
    return r;
}

KernelReport verify_kernel(const ConvolutionKernel& kernel, double tol) {
    KernelReport r = verify_kernel(kernel.matrix, kernel.pi, tol);
    if (!kernel.lattice.is_finite() && kernel.leakage.size() == kernel.pi.size()) {
        r.max_leakage = kernel.leakage.cwiseAbs().maxCoeff();
        r.weighted_leakage = kernel.pi.dot(kernel.leakage);
        // Column sums are rounded to ~1e-16 each, so allow that much on top of the bound.
        r.passed = r.passed && r.weighted_leakage <= kernel.lattice.tail_eps() + 1e-14;
    }
    return r;
}

}  // namespace askey
