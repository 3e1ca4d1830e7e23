#include "askey/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "askey/errors.hpp"
#include "series.hpp"

namespace askey {

SignedLogValue SignedLogValue::from_double(double v) {
    if (v == 0.0) return zero();
    return {std::log(std::fabs(v)), v > 0.0 ? 1 : -1};
}

double SignedLogValue::value() const {
    if (sign == 0) return 0.0;
    return sign * std::exp(log_magnitude);
}

SignedLogValue& SignedLogValue::operator*=(const SignedLogValue& rhs) {
    sign *= rhs.sign;
    log_magnitude = sign == 0 ? 0.0 : log_magnitude + rhs.log_magnitude;
    return *this;
}

SignedLogValue& SignedLogValue::operator/=(const SignedLogValue& rhs) {
    if (rhs.sign == 0) throw DomainError("SignedLogValue: division by zero");
    sign *= rhs.sign;
    log_magnitude = sign == 0 ? 0.0 : log_magnitude - rhs.log_magnitude;
    return *this;
}

SignedLogValue SignedLogValue::pow(std::int64_t k) const {
    if (k == 0) return one();
    if (sign == 0) {
        if (k < 0) throw DomainError("SignedLogValue: zero to a negative power");
        return zero();
    }
    const int s = (sign < 0 && (k % 2 != 0)) ? -1 : 1;
    return {log_magnitude * static_cast<double>(k), s};
}

SignedLogValue operator*(SignedLogValue lhs, const SignedLogValue& rhs) { return lhs *= rhs; }
SignedLogValue operator/(SignedLogValue lhs, const SignedLogValue& rhs) { return lhs /= rhs; }

double log_gamma(double x) {
#if defined(__GLIBC__)
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

namespace {

// Accumulates a product of positive factors as a logarithm, taking the log
// only when the running product gets large or small.
class LogProduct {
public:
    void multiply(double f) {
        chunk_ *= f;
        if (chunk_ > 1e150 || chunk_ < 1e-150) flush();
    }
    double log() {
        flush();
        return log_;
    }

private:
    void flush() {
        log_ += std::log(chunk_);
        chunk_ = 1.0;
    }
    double chunk_ = 1.0;
    double log_ = 0.0;
};

// ln (b)_m for b > 0.
double log_pochhammer_positive(double b, std::int64_t m) {
    if (m <= 1000) {
        LogProduct p;
        for (std::int64_t k = 0; k < m; ++k) p.multiply(b + static_cast<double>(k));
        return p.log();
    }
    return log_gamma(b + static_cast<double>(m)) - log_gamma(b);
}

bool is_nonpositive_integer(double v) { return v <= 0.0 && v == std::nearbyint(v); }

}  // namespace

SignedLogValue log_pochhammer(double a, std::int64_t n) {
    if (n < 0) throw DomainError("log_pochhammer: negative length");
    if (n == 0) return SignedLogValue::one();
    if (is_nonpositive_integer(a) && static_cast<double>(n) > -a) return SignedLogValue::zero();

    // Factors a+k with k < k0 are negative.
    std::int64_t k0 = 0;
    if (a < 0.0) k0 = std::min<std::int64_t>(n, static_cast<std::int64_t>(std::floor(-a)) + 1);
    if (a < 0.0 && is_nonpositive_integer(a)) k0 = std::min<std::int64_t>(n, static_cast<std::int64_t>(-a));

    SignedLogValue out = SignedLogValue::one();
    if (k0 > 0) {
        // prod_{k<k0} (a+k) = (-1)^k0 (1-a-k0)_k0
        out.log_magnitude = log_pochhammer_positive(1.0 - a - static_cast<double>(k0), k0);
        out.sign = (k0 % 2 == 0) ? 1 : -1;
    }
    if (n > k0) {
        out.log_magnitude += log_pochhammer_positive(a + static_cast<double>(k0), n - k0);
    }
    return out;
}

SignedLogValue q_pochhammer(double a, double q, std::int64_t n) {
    if (n < 0) throw DomainError("q_pochhammer: negative length");
    if (!(q > 0.0 && q < 1.0)) throw DomainError("q_pochhammer: q must lie in (0,1)");
    SignedLogValue out = SignedLogValue::one();
    LogProduct p;
    for (std::int64_t k = 0; k < n; ++k) {
        const double f = 1.0 - a * std::pow(q, static_cast<double>(k));
        if (f == 0.0) return SignedLogValue::zero();
        if (f < 0.0) out.sign = -out.sign;
        p.multiply(std::fabs(f));
    }
    out.log_magnitude = p.log();
    return out;
}

double log_binomial(std::int64_t N, std::int64_t x) {
    if (N < 0 || x < 0 || x > N) {
        throw DomainError("log_binomial: need 0 <= x <= N, got N=" + std::to_string(N) +
                          " x=" + std::to_string(x));
    }
    const std::int64_t k = std::min(x, N - x);
    // Exact integer product while the result stays representable in a double.
    constexpr unsigned __int128 kExactLimit = static_cast<unsigned __int128>(1) << 53;
    unsigned __int128 c = 1;
    bool exact = true;
    for (std::int64_t i = 1; i <= k; ++i) {
        c = c * static_cast<unsigned __int128>(N - k + i) / static_cast<unsigned __int128>(i);
        if (c > kExactLimit) {
            exact = false;
            break;
        }
    }
    if (exact) return std::log(static_cast<double>(c));
    if (k <= 1000) {
        LogProduct p;
        for (std::int64_t i = 1; i <= k; ++i) {
            p.multiply(static_cast<double>(N - k + i) / static_cast<double>(i));
        }
        return p.log();
    }
    return log_gamma(static_cast<double>(N) + 1.0) - log_gamma(static_cast<double>(k) + 1.0) -
           log_gamma(static_cast<double>(N - k) + 1.0);
}

double q_binomial(std::int64_t N, std::int64_t x, double q) {
    if (N < 0 || x < 0 || x > N) throw DomainError("q_binomial: need 0 <= x <= N");
    if (!(q > 0.0 && q < 1.0)) throw DomainError("q_binomial: q must lie in (0,1)");
    const std::int64_t k = std::min(x, N - x);
    LogProduct p;
    for (std::int64_t i = 1; i <= k; ++i) {
        const double num = -std::expm1(static_cast<double>(N - k + i) * std::log(q));
        const double den = -std::expm1(static_cast<double>(i) * std::log(q));
        p.multiply(num / den);
    }
    return std::exp(p.log());
}

double hypergeometric_terminating(std::span<const double> num, std::span<const double> den,
                                  double z) {
    std::int64_t order = -1;
    for (double p : num) {
        if (is_nonpositive_integer(p)) {
            const auto m = static_cast<std::int64_t>(-p);
            order = order < 0 ? m : std::min(order, m);
        }
    }
    if (order < 0) throw ContractViolation("hypergeometric_terminating: series does not terminate");
    if (order > kMaxTerminationOrder) {
        throw ContractViolation("hypergeometric_terminating: termination order " +
                                std::to_string(order) + " exceeds supported maximum " +
                                std::to_string(kMaxTerminationOrder));
    }
    for (double d : den) {
        if (is_nonpositive_integer(d) && static_cast<std::int64_t>(-d) < order) {
            throw SingularityError("hypergeometric_terminating: denominator parameter " +
                                   std::to_string(d) + " vanishes before termination");
        }
    }

    return detail::adaptive_series([&]<class Real>() {
        const std::vector<Real> n(num.begin(), num.end());
        const std::vector<Real> d(den.begin(), den.end());
        return detail::hyper_sum<Real>(n, d, Real(z), order);
    });
}

double basic_hypergeometric_3phi2_terminating(const std::array<double, 3>& num,
                                              const std::array<double, 2>& den, double q,
                                              double z) {
    if (!(q > 0.0 && q < 1.0)) throw DomainError("3phi2: q must lie in (0,1)");
    std::int64_t order = -1;
    for (double p : num) {
        if (!(p > 0.0)) continue;
        const double m = std::log(p) / -std::log(q);
        const double mr = std::nearbyint(m);
        if (mr < 0.0) continue;
        if (std::fabs(p - std::pow(q, -mr)) <= 1e-10 * std::max(1.0, p)) {
            const auto mi = static_cast<std::int64_t>(mr);
            order = order < 0 ? mi : std::min(order, mi);
        }
    }
    if (order < 0) throw ContractViolation("3phi2: no numerator parameter of the form q^{-m}");
    if (order > kMaxTerminationOrder) {
        throw ContractViolation("3phi2: termination order exceeds supported maximum");
    }

    for (double d : den) {
        for (std::int64_t k = 0; k < order; ++k) {
            if (std::fabs(1.0 - d * std::pow(q, static_cast<double>(k))) < 1e-14) {
                throw SingularityError("3phi2: denominator factor vanishes before termination");
            }
        }
    }
    return detail::adaptive_series([&]<class Real>() {
        detail::SeriesSum<Real> s;
        detail::CompensatedSum<Real> acc;
        Real term = 1;
        Real qk = 1;  // q^k
        const Real rq = q;
        acc.add(term);
        s.magnitude = 1;
        for (std::int64_t k = 0; k < order; ++k) {
            Real ratio = Real(z) / (1 - qk * rq);
            for (double p : num) ratio *= 1 - Real(p) * qk;
            for (double d : den) ratio /= 1 - Real(d) * qk;
            term *= ratio;
            acc.add(term);
            s.magnitude += detail::abs_of(term);
            qk *= rq;
        }
        s.sum = acc.value();
        s.terms = order + 1;
        return s;
    });
}

}  // namespace askey
