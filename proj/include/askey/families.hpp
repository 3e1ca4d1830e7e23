#pragma once
// Family data for the Krawtchouk, Charlier, Hahn, Meixner and q-Hahn
// polynomials: orthogonality measures, polynomials with P_n(0) = 1, norm
// constants, difference equations, and the parameter maps and eigenvalues
// of the three convolution kernels built from them.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace askey {

enum class Family { Krawtchouk, Charlier, Hahn, Meixner, QHahn };

std::string_view family_name(Family f);
Family parse_family(std::string_view name);

// Finite families live on {0..N}; Charlier and Meixner live on Z>=0.
constexpr bool is_finite(Family f) {
    return f == Family::Krawtchouk || f == Family::Hahn || f == Family::QHahn;
}

// One polynomial family with validated parameters.
//   Krawtchouk: p in (0,1)            Charlier: a > 0
//   Hahn:       a > 0, b > 0          Meixner:  a > 0, 0 < b < 1
//   q-Hahn:     0 < a < 1, b < 1, 0 < q < 1
// N is the lattice size for finite families and 0 otherwise.
class FamilySpec {
public:
    static FamilySpec krawtchouk(std::int64_t N, double p);
    static FamilySpec charlier(double a);
    static FamilySpec hahn(std::int64_t N, double a, double b);
    static FamilySpec meixner(double a, double b);
    static FamilySpec qhahn(std::int64_t N, double a, double b, double q);

    [[nodiscard]] Family family() const { return family_; }
    [[nodiscard]] std::int64_t N() const { return N_; }
    [[nodiscard]] double p() const { return a_; }  // Krawtchouk parameter
    [[nodiscard]] double a() const { return a_; }
    [[nodiscard]] double b() const { return b_; }
    [[nodiscard]] double q() const { return q_; }
    [[nodiscard]] bool finite() const { return is_finite(family_); }

    // Same parameters on a lattice of a different size (finite families).
    [[nodiscard]] FamilySpec with_size(std::int64_t N) const;

    // Canonical text form, e.g. "hahn:a=1,b=2,N=10".
    [[nodiscard]] std::string to_string() const;
    static FamilySpec parse(std::string_view text);

    friend bool operator==(const FamilySpec&, const FamilySpec&) = default;

private:
    FamilySpec(Family f, std::int64_t N, double a, double b, double q)
        : family_(f), N_(N), a_(a), b_(b), q_(q) {}

    Family family_;
    std::int64_t N_;
    double a_;
    double b_;
    double q_;
};

// ln pi(x). Finite families use spec.N(); the overload taking N evaluates the
// same family on {0..N} (N is ignored for Charlier and Meixner).
double log_measure(const FamilySpec& spec, std::int64_t x);
double log_measure(const FamilySpec& spec, std::int64_t x, std::int64_t N);
double measure(const FamilySpec& spec, std::int64_t x);

// P_n(x) by its terminating series; P_n(0) = 1. The series cancels heavily
// for large N, so this is accurate for small and moderate lattices only.
double polynomial(const FamilySpec& spec, std::int64_t n, std::int64_t x);

double log_norm_constant_sq(const FamilySpec& spec, std::int64_t n);
double norm_constant_sq(const FamilySpec& spec, std::int64_t n);

// Second-order difference equation of the family,
//   B(x)(P_n(x) - P_n(x+1)) + D(x)(P_n(x) - P_n(x-1)) = E(n) P_n(x).
double difference_B(const FamilySpec& spec, std::int64_t x);
double difference_D(const FamilySpec& spec, std::int64_t x);
double difference_energy(const FamilySpec& spec, std::int64_t n);

enum class ConvolutionType { TypeI, TypeII, TypeIII };

std::string_view conv_type_name(ConvolutionType t);  // "i", "ii", "iii"
ConvolutionType parse_conv_type(std::string_view s);

// Free parameters of a convolution. Which of a, b, c are used, and their
// ranges, depend on the family:
//   Krawtchouk: a, b in (0,1)
//   Charlier:   i: 0 < a < 1, b > 0      iii: a > 0, 0 < b < 1
//   Hahn:       a, b, c > 0
//   Meixner:    i/ii: a, b > 0, 0 < c < 1   iii: a, c > 0, 0 < b < 1
//   q-Hahn:     i: 0 < a, b < 1, c < 1      iii: 0 < a < 1, b < 1, 0 < c < 1
struct ConvolutionParams {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double q = 0.0;
    friend bool operator==(const ConvolutionParams&, const ConvolutionParams&) = default;
};

// A fully resolved convolution: the two input measures and the stationary
// family lambda3. lambda1 enters as pi(z, y, lambda1) (type i/ii) or
// pi(z-y, N-y, lambda1) (type iii); lambda2 as pi(x-z, ., lambda2) or
// pi(x, z, lambda2).
struct ConvolutionRecipe {
    Family family;
    ConvolutionType type;
    ConvolutionParams params;
    std::int64_t N = 0;  // finite families only
    FamilySpec lambda1;
    FamilySpec lambda2;
    FamilySpec lambda3;
};

// Meixner and Charlier type (ii) are the same kernel as type (i); q-Hahn
// type (ii) does not exist and throws UnsupportedCombination.
ConvolutionRecipe make_recipe(Family family, ConvolutionType type, const ConvolutionParams& params,
                              std::int64_t N = 0);

FamilySpec lambda3_map(ConvolutionType type, Family family, const ConvolutionParams& params,
                       std::int64_t N = 0);

// Eigenvalue kappa(n) of the kernel; kappa(0) = 1.
double kappa(ConvolutionType type, Family family, const ConvolutionParams& params,
             std::int64_t n);
double kappa(const ConvolutionRecipe& recipe, std::int64_t n);

// Hahn type (ii) eigenvalue as the explicit alternating binomial sum
//   sum_k C(n,k) (-1)^k (b)_k (n+a+2b+c-1)_k / ((a+b)_k (b+c)_k),
// evaluated term by term rather than by term ratios.
double hahn_type2_kappa_alternating(double a, double b, double c, std::int64_t n);

struct LimitReport {
    std::vector<double> steps;      // N (or a) along the sequence
    std::vector<double> distances;  // sup-norm distance on the window
    bool strictly_decreasing = false;
};

// pi_K(x, N, p/N) -> pi_C(x, p) as N grows.
LimitReport limit_check_K_to_C(double p, std::span<const std::int64_t> N_sequence,
                               std::int64_t window = 15);
// pi_H(x, N, a, N(1-b)/b) -> pi_M(x, a, b) as N grows.
LimitReport limit_check_H_to_M(double a, double b, std::span<const std::int64_t> N_sequence,
                               std::int64_t window = 15);
// pi_M(x, a, b/(a+b)) -> pi_C(x, b) as a grows.
LimitReport limit_check_M_to_C(double b, std::span<const double> a_sequence,
                               std::int64_t window = 15);

}  // namespace askey
