#pragma once
// Terminating series summed at increasing precision until the cancellation
// they show leaves enough correct digits. Internal only.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "wide_real.hpp"

namespace askey::detail {

using mp50 = boost::multiprecision::cpp_bin_float_50;
using mp100 = boost::multiprecision::cpp_bin_float_100;
using mp250 = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<250>>;
using mp600 = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<600>>;

template <class Real>
constexpr int decimal_digits() {
    if constexpr (std::is_same_v<Real, wide_real>) {
#if defined(__SIZEOF_FLOAT128__)
        return 33;
#else
        return std::numeric_limits<long double>::digits10;
#endif
    } else {
        return std::numeric_limits<Real>::digits10;
    }
}

template <class Real>
Real abs_of(const Real& v) {
    return v < 0 ? Real(-v) : v;
}

template <class Real>
Real int_pow(Real base, long long k) {
    if (k < 0) return Real(1) / int_pow(base, -k);
    Real out = 1;
    while (k > 0) {
        if (k & 1) out *= base;
        base *= base;
        k >>= 1;
    }
    return out;
}

template <class Real>
struct SeriesSum {
    Real sum = 0;
    Real magnitude = 0;  // sum of |terms|
    std::int64_t terms = 0;
};

// pFq(num; den | z) truncated after `order` steps, all arithmetic in Real.
template <class Real>
SeriesSum<Real> hyper_sum(std::span<const Real> num, std::span<const Real> den, const Real& z,
                          std::int64_t order) {
    SeriesSum<Real> s;
    CompensatedSum<Real> acc;
    Real term = 1;
    acc.add(term);
    s.magnitude = 1;
    for (std::int64_t k = 0; k < order; ++k) {
        const Real rk = static_cast<double>(k);
        Real ratio = z / (rk + 1);
        for (const Real& p : num) ratio *= p + rk;
        for (const Real& d : den) ratio /= d + rk;
        term *= ratio;
        acc.add(term);
        s.magnitude += abs_of(term);
    }
    s.sum = acc.value();
    s.terms = order + 1;
    return s;
}

// Decimal digits the sum has lost to cancellation, including a rounding
// allowance for the number of terms. Infinite when the sum is zero.
template <class Real>
double digits_lost(const SeriesSum<Real>& s) {
    if (s.sum == 0) return s.magnitude == 0 ? 0.0 : std::numeric_limits<double>::infinity();
    const double ratio = static_cast<double>(Real(s.magnitude / abs_of(s.sum)));
    return std::log10(ratio) + std::log10(static_cast<double>(s.terms) + 1.0) + 1.0;
}

template <class Real, class F>
std::optional<double> try_precision(F& f, bool last) {
    constexpr double kWantedDigits = 18.0;
    const SeriesSum<Real> s = f.template operator()<Real>();
    if (last || decimal_digits<Real>() - digits_lost(s) >= kWantedDigits) {
        return static_cast<double>(s.sum);
    }
    return std::nullopt;
}

// f is a generic callable, f.template operator()<Real>() -> SeriesSum<Real>.
// It builds every parameter in Real from exact double inputs, so the only
// rounding is in the arithmetic of the chosen precision.
template <class F>
double adaptive_series(F&& f) {
    if (auto v = try_precision<wide_real>(f, false)) return *v;
    if (auto v = try_precision<mp50>(f, false)) return *v;
    if (auto v = try_precision<mp100>(f, false)) return *v;
    if (auto v = try_precision<mp250>(f, false)) return *v;
    return *try_precision<mp600>(f, true);
}

}  // namespace askey::detail
