#pragma once
// Reversible convolution kernels K(x,y) (transition y -> x, columns sum to 1)
// and their verification.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

#include "askey/families.hpp"

namespace askey {

// Highest point of a semi-infinite lattice kept after truncation, chosen so
// that sum_{x>M} pi(x) <= tail_eps. The bound is a ratio (geometric) bound on
// the tail, not a partial sum. Charlier or Meixner only; tail_eps in (0, 1e-6].
std::int64_t truncation_cutoff(const FamilySpec& family, double tail_eps);

// Certified upper bound on sum_{x>M} pi(x) for Charlier or Meixner
// (infinity when the ratio bound does not apply at M).
double tail_bound(const FamilySpec& family, std::int64_t M);

class LatticeSpec {
public:
    enum class Kind { Finite, TruncatedSemiInfinite };

    static LatticeSpec finite(std::int64_t N);
    // M from truncation_cutoff(stationary, tail_eps).
    static LatticeSpec truncated_for(const FamilySpec& stationary, double tail_eps);
    // Explicit M; tail_eps becomes the certified bound at M.
    static LatticeSpec truncated_at(const FamilySpec& stationary, std::int64_t M);

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] bool is_finite() const { return kind_ == Kind::Finite; }
    // N for finite lattices, M for truncated ones.
    [[nodiscard]] std::int64_t max_point() const { return max_point_; }
    [[nodiscard]] std::int64_t size() const { return max_point_ + 1; }
    [[nodiscard]] double tail_eps() const { return tail_eps_; }

private:
    LatticeSpec(Kind k, std::int64_t m, double eps) : kind_(k), max_point_(m), tail_eps_(eps) {}
    Kind kind_;
    std::int64_t max_point_;
    double tail_eps_;
};

// Lattice appropriate to a recipe: finite {0..N}, or truncated at tail_eps.
LatticeSpec lattice_for(const ConvolutionRecipe& recipe, double tail_eps = 1e-12);

struct ConvolutionKernel {
    Eigen::MatrixXd matrix;   // K(x, y)
    Eigen::VectorXd pi;       // pi(x, lambda3) on the lattice, from the family formula
    Eigen::VectorXd log_pi;
    ConvolutionRecipe recipe;
    LatticeSpec lattice;
    // Truncated lattices only: probability mass of column y that leaves
    // {0..M}. It is returned to the diagonal (moves out of the window are
    // rejected), which keeps the kernel stochastic and leaves detailed
    // balance untouched. Zero for finite lattices.
    Eigen::VectorXd leakage;
};

// ln pi(x, size) of one input measure. size is the lattice bound the measure
// is taken on (ignored by Charlier and Meixner).
using LogMeasureFn = std::function<double(std::int64_t x, std::int64_t size)>;

// sum_{z=0}^{min(x,y)} pi2(x-z, N-z) pi1(z, y)
Eigen::MatrixXd build_type1(const LogMeasureFn& pi2, const LogMeasureFn& pi1, const LatticeSpec& lattice);
// sum_{z=max(0,x+y-N)}^{min(x,y)} pi2(x-z, N-y) pi1(z, y)
Eigen::MatrixXd build_type2(const LogMeasureFn& pi2, const LogMeasureFn& pi1, const LatticeSpec& lattice);
// sum_{z=max(x,y)}^{N} pi2(x, z) pi1(z-y, N-y). On a truncated lattice the
// z sum runs to infinity and stops once the term is below 1e-16 of the
// partial sum for 3 consecutive terms while the term ratio is below 1.
Eigen::MatrixXd build_type3(const LogMeasureFn& pi2, const LogMeasureFn& pi1, const LatticeSpec& lattice);

// Kernel of the recipe on the given lattice, with pi attached.
ConvolutionKernel build_kernel(const ConvolutionRecipe& recipe, const LatticeSpec& lattice);

// Convolution type the kernel is actually built with (Charlier and Meixner
// type ii reduce to type i).
ConvolutionType kernel_type(const ConvolutionRecipe& recipe);

inline constexpr double kDefaultFiniteTol = 1e-12;
inline constexpr double kDefaultTruncatedTol = 1e-10;

struct KernelReport {
    double max_stochastic_violation = 0.0;    // max_y |sum_x K(x,y) - 1|
    double max_reversibility_violation = 0.0; // max |K(x,y)pi(y) - K(y,x)pi(x)| / max K(x,y)pi(y)
    bool positivity = false;                  // every entry > 0
    double max_leakage = 0.0;                 // truncated lattices: raw boundary leakage
    double weighted_leakage = 0.0;            // sum_y pi(y) leakage(y), bounded by tail_eps
    double tol = 0.0;
    bool passed = false;
};

// Never throws on a bad kernel; it reports.
KernelReport verify_kernel(const Eigen::MatrixXd& K, const Eigen::VectorXd& pi, double tol);
KernelReport verify_kernel(const ConvolutionKernel& kernel, double tol);

}  // namespace askey
