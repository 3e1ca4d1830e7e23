#pragma once
// Combinatorial and (basic) hypergeometric building blocks.
//
// Measures and norm constants are assembled as SignedLogValue and
// exponentiated once. Terminating series are summed in linear space because
// their terms alternate in sign.

#include <array>
#include <cstdint>
#include <span>

namespace askey {

struct SignedLogValue {
    double log_magnitude = 0.0;
    int sign = 1;  // +1, 0 or -1; 0 means the value is exactly zero

    static SignedLogValue one() { return {0.0, 1}; }
    static SignedLogValue zero() { return {0.0, 0}; }
    static SignedLogValue from_double(double v);

    [[nodiscard]] bool is_zero() const { return sign == 0; }
    [[nodiscard]] double value() const;

    SignedLogValue& operator*=(const SignedLogValue& rhs);
    SignedLogValue& operator/=(const SignedLogValue& rhs);
    // Raises to an integer power.
    [[nodiscard]] SignedLogValue pow(std::int64_t k) const;
};

SignedLogValue operator*(SignedLogValue lhs, const SignedLogValue& rhs);
SignedLogValue operator/(SignedLogValue lhs, const SignedLogValue& rhs);

// Reentrant ln|Γ(x)| for x > 0.
double log_gamma(double x);

// Rising factorial (a)_n = a(a+1)...(a+n-1).
SignedLogValue log_pochhammer(double a, std::int64_t n);

// q-shifted factorial (a;q)_n = prod_{k<n} (1 - a q^k), 0 < q < 1.
SignedLogValue q_pochhammer(double a, double q, std::int64_t n);

// ln C(N, x). Computed from min(x, N-x), so it is symmetric bit for bit.
double log_binomial(std::int64_t N, std::int64_t x);

// Gaussian binomial [N x]_q.
double q_binomial(std::int64_t N, std::int64_t x, double q);

// Highest termination order accepted by the series evaluators.
inline constexpr std::int64_t kMaxTerminationOrder = 200;

// Terminating generalized hypergeometric series pFq(num; den | z).
// One numerator must be a nonpositive integer -m; the sum runs over k = 0..m
// (the smallest such m). Throws ContractViolation if nothing terminates the
// series or m exceeds kMaxTerminationOrder, SingularityError if a
// denominator parameter reaches zero first.
double hypergeometric_terminating(std::span<const double> num,
                                  std::span<const double> den, double z);

// Terminating 3phi2(num; den | q; z). One numerator must equal q^{-m}.
double basic_hypergeometric_3phi2_terminating(const std::array<double, 3>& num,
                                              const std::array<double, 2>& den,
                                              double q, double z);

}  // namespace askey
