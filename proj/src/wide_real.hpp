#pragma once
// Extended-precision scalar for cancellation-prone series. Internal only.

namespace askey::detail {

#if defined(__SIZEOF_FLOAT128__)
using wide_real = __float128;
#else
using wide_real = long double;
#endif

inline wide_real wide_abs(wide_real v) { return v < 0 ? -v : v; }

// base^k for integer k (negative allowed), by repeated squaring.
inline wide_real wide_pow(wide_real base, long long k) {
    if (k < 0) return 1 / wide_pow(base, -k);
    wide_real out = 1;
    while (k > 0) {
        if (k & 1) out *= base;
        base *= base;
        k >>= 1;
    }
    return out;
}

// Neumaier variant of Kahan summation.
template <class T>
class CompensatedSum {
public:
    void add(T v) {
        const T t = sum_ + v;
        if (wide_abs_(sum_) >= wide_abs_(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    [[nodiscard]] T value() const { return sum_ + comp_; }

private:
    static T wide_abs_(T v) { return v < 0 ? -v : v; }
    T sum_ = 0;
    T comp_ = 0;
};

}  // namespace askey::detail
