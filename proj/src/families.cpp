#include "askey/families.hpp"

#include <array>
#include <initializer_list>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "askey/errors.hpp"
#include "askey/specfun.hpp"
#include "askey/format.hpp"
#include "series.hpp"

namespace askey {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

void require_lattice(const FamilySpec& spec, std::int64_t x, std::int64_t N, const char* what) {
    if (x < 0 || (spec.finite() && x > N)) {
        throw DomainError(std::string(what) + ": point " + std::to_string(x) +
                          " outside the lattice of " + spec.to_string());
    }
}

double lp(double a, std::int64_t n) {
    const SignedLogValue v = log_pochhammer(a, n);
    if (v.sign <= 0) throw DomainError("non-positive Pochhammer symbol in family data");
    return v.log_magnitude;
}

double lqp(double a, double q, std::int64_t n) {
    const SignedLogValue v = q_pochhammer(a, q, n);
    if (v.sign <= 0) throw DomainError("non-positive q-Pochhammer symbol in family data");
    return v.log_magnitude;
}

// P_n(eta(x)) for q-Hahn, 3phi2(q^-n, ab q^{n-1}, q^-x; a, q^-N | q; q), with
// all q powers formed from integer exponents in the working precision.
double qhahn_series(std::int64_t n, std::int64_t x, std::int64_t N, double a, double b, double q) {
    const std::int64_t order = std::min(n, x);
    return detail::adaptive_series([&]<class Real>() {
        using detail::int_pow;
        const Real rq = q;
        const Real ra = a;
        const Real rab = Real(a) * Real(b);
        detail::SeriesSum<Real> s;
        detail::CompensatedSum<Real> acc;
        Real term = 1;
        acc.add(term);
        s.magnitude = 1;
        for (std::int64_t k = 0; k < order; ++k) {
            const Real qk = int_pow(rq, k);
            Real ratio = rq / (1 - qk * rq);
            ratio *= 1 - int_pow(rq, k - n);
            ratio *= 1 - rab * int_pow(rq, n - 1 + k);
            ratio *= 1 - int_pow(rq, k - x);
            ratio /= 1 - ra * qk;
            ratio /= 1 - int_pow(rq, k - N);
            term *= ratio;
            acc.add(term);
            s.magnitude += detail::abs_of(term);
        }
        s.sum = acc.value();
        s.terms = order + 1;
        return s;
    });
}

// Terminating series whose parameters are built by `params` in the working
// precision: params.template operator()<Real>(num, den, z).
template <class Params>
double series_from(std::int64_t order, Params&& params) {
    return detail::adaptive_series([&]<class Real>() {
        std::vector<Real> num;
        std::vector<Real> den;
        Real z = 1;
        params.template operator()<Real>(num, den, z);
        return detail::hyper_sum<Real>(num, den, z, order);
    });
}

}  // namespace

std::string_view family_name(Family f) {
    switch (f) {
        case Family::Krawtchouk: return "krawtchouk";
        case Family::Charlier: return "charlier";
        case Family::Hahn: return "hahn";
        case Family::Meixner: return "meixner";
        case Family::QHahn: return "qhahn";
    }
    return "?";
}

Family parse_family(std::string_view name) {
    for (Family f : {Family::Krawtchouk, Family::Charlier, Family::Hahn, Family::Meixner,
                     Family::QHahn}) {
        if (family_name(f) == name) return f;
    }
    throw DomainError("unknown polynomial family '" + std::string(name) + "'");
}

FamilySpec FamilySpec::krawtchouk(std::int64_t N, double p) {
    require(N >= 0, "krawtchouk: N must be >= 0");
    require(p > 0.0 && p < 1.0, "krawtchouk: need 0 < p < 1, got p=" + format_real(p));
    return {Family::Krawtchouk, N, p, 0.0, 0.0};
}

FamilySpec FamilySpec::charlier(double a) {
    require(a > 0.0 && std::isfinite(a), "charlier: need a > 0, got a=" + format_real(a));
    return {Family::Charlier, 0, a, 0.0, 0.0};
}

FamilySpec FamilySpec::hahn(std::int64_t N, double a, double b) {
    require(N >= 0, "hahn: N must be >= 0");
    require(a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b),
            "hahn: need a > 0 and b > 0, got a=" + format_real(a) + " b=" + format_real(b));
    return {Family::Hahn, N, a, b, 0.0};
}

FamilySpec FamilySpec::meixner(double a, double b) {
    require(a > 0.0 && std::isfinite(a) && b > 0.0 && b < 1.0,
            "meixner: need a > 0 and 0 < b < 1, got a=" + format_real(a) + " b=" + format_real(b));
    return {Family::Meixner, 0, a, b, 0.0};
}

FamilySpec FamilySpec::qhahn(std::int64_t N, double a, double b, double q) {
    require(N >= 0, "qhahn: N must be >= 0");
    require(q > 0.0 && q < 1.0, "qhahn: need 0 < q < 1, got q=" + format_real(q));
    require(a > 0.0 && a < 1.0 && b < 1.0 && std::isfinite(b),
            "qhahn: need 0 < a < 1 and b < 1, got a=" + format_real(a) + " b=" + format_real(b));
    return {Family::QHahn, N, a, b, q};
}

FamilySpec FamilySpec::with_size(std::int64_t N) const {
    if (!finite()) return *this;
    require(N >= 0, "with_size: N must be >= 0");
    FamilySpec out = *this;
    out.N_ = N;
    return out;
}

std::string FamilySpec::to_string() const {
    std::string out(family_name(family_));
    out += ':';
    switch (family_) {
        case Family::Krawtchouk: out += "p=" + format_real(a_); break;
        case Family::Charlier: out += "a=" + format_real(a_); break;
        case Family::Hahn:
        case Family::Meixner: out += "a=" + format_real(a_) + ",b=" + format_real(b_); break;
        case Family::QHahn:
            out += "a=" + format_real(a_) + ",b=" + format_real(b_) + ",q=" + format_real(q_);
            break;
    }
    if (finite()) out += ",N=" + std::to_string(N_);
    return out;
}

FamilySpec FamilySpec::parse(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw DomainError("family spec '" + std::string(text) + "' lacks ':'");
    }
    const Family f = parse_family(text.substr(0, colon));
    std::map<std::string, std::string, std::less<>> kv;
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view item = rest.substr(0, comma);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) {
            throw DomainError("family spec item '" + std::string(item) + "' lacks '='");
        }
        if (!kv.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1))).second) {
            throw DomainError("family spec repeats key '" + std::string(item.substr(0, eq)) + "'");
        }
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    auto take_real = [&](const char* key) {
        auto it = kv.find(key);
        if (it == kv.end()) throw DomainError(std::string("family spec misses key '") + key + "'");
        const double v = parse_real(it->second);
        kv.erase(it);
        return v;
    };
    auto take_int = [&](const char* key) {
        auto it = kv.find(key);
        if (it == kv.end()) throw DomainError(std::string("family spec misses key '") + key + "'");
        const std::int64_t v = parse_int(it->second);
        kv.erase(it);
        return v;
    };
    auto finish = [&](FamilySpec s) {
        if (!kv.empty()) throw DomainError("family spec has unknown key '" + kv.begin()->first + "'");
        return s;
    };
    switch (f) {
        case Family::Krawtchouk: {
            const double p = take_real("p");
            return finish(krawtchouk(take_int("N"), p));
        }
        case Family::Charlier: return finish(charlier(take_real("a")));
        case Family::Hahn: {
            const double a = take_real("a");
            const double b = take_real("b");
            return finish(hahn(take_int("N"), a, b));
        }
        case Family::Meixner: {
            const double a = take_real("a");
            return finish(meixner(a, take_real("b")));
        }
        case Family::QHahn: {
            const double a = take_real("a");
            const double b = take_real("b");
            const double q = take_real("q");
            return finish(qhahn(take_int("N"), a, b, q));
        }
    }
    throw DomainError("unreachable family");
}

double log_measure(const FamilySpec& spec, std::int64_t x) { return log_measure(spec, x, spec.N()); }

double log_measure(const FamilySpec& spec, std::int64_t x, std::int64_t N) {
    require_lattice(spec, x, N, "measure");
    const double xd = static_cast<double>(x);
    switch (spec.family()) {
        case Family::Krawtchouk: {
            const double p = spec.p();
            return log_binomial(N, x) + xd * std::log(p) + static_cast<double>(N - x) * std::log1p(-p);
        }
        case Family::Charlier: {
            const double a = spec.a();
            return xd * std::log(a) - a - log_gamma(xd + 1.0);
        }
        case Family::Hahn: {
            const double a = spec.a();
            const double b = spec.b();
            return log_binomial(N, x) + lp(a, x) + lp(b, N - x) - lp(a + b, N);
        }
        case Family::Meixner: {
            const double a = spec.a();
            const double b = spec.b();
            return lp(a, x) + xd * std::log(b) + a * std::log1p(-b) - log_gamma(xd + 1.0);
        }
        case Family::QHahn: {
            const double a = spec.a();
            const double b = spec.b();
            const double q = spec.q();
            return std::log(q_binomial(N, x, q)) + lqp(a, q, x) + lqp(b, q, N - x) +
                   static_cast<double>(N - x) * std::log(a) - lqp(a * b, q, N);
        }
    }
    throw DomainError("unreachable family");
}

double measure(const FamilySpec& spec, std::int64_t x) { return std::exp(log_measure(spec, x)); }

double polynomial(const FamilySpec& spec, std::int64_t n, std::int64_t x) {
    require_lattice(spec, x, spec.N(), "polynomial");
    require(n >= 0 && (!spec.finite() || n <= spec.N()), "polynomial: degree outside the lattice");
    const double nd = static_cast<double>(n);
    const double xd = static_cast<double>(x);
    const double Nd = static_cast<double>(spec.N());
    const std::int64_t order = std::min(n, x);
    const double a = spec.a();
    const double b = spec.b();
    switch (spec.family()) {
        case Family::Krawtchouk:
            return series_from(order, [&]<class Real>(std::vector<Real>& num, std::vector<Real>& den, Real& z) {
                num = {Real(-nd), Real(-xd)};
                den = {Real(-Nd)};
                z = 1 / Real(a);
            });
        case Family::Charlier:
            return series_from(order, [&]<class Real>(std::vector<Real>& num, std::vector<Real>&, Real& z) {
                num = {Real(-nd), Real(-xd)};
                z = -1 / Real(a);
            });
        case Family::Hahn:
            return series_from(order, [&]<class Real>(std::vector<Real>& num, std::vector<Real>& den, Real& z) {
                num = {Real(-nd), Real(nd) + Real(a) + Real(b) - 1, Real(-xd)};
                den = {Real(a), Real(-Nd)};
                z = 1;
            });
        case Family::Meixner:
            return series_from(order, [&]<class Real>(std::vector<Real>& num, std::vector<Real>& den, Real& z) {
                num = {Real(-nd), Real(-xd)};
                den = {Real(a)};
                z = 1 - 1 / Real(b);
            });
        case Family::QHahn:
            return qhahn_series(n, x, spec.N(), a, b, spec.q());
    }
    throw DomainError("unreachable family");
}

double log_norm_constant_sq(const FamilySpec& spec, std::int64_t n) {
    require(n >= 0 && (!spec.finite() || n <= spec.N()), "norm constant: degree outside the lattice");
    if (n == 0) return 0.0;
    const double nd = static_cast<double>(n);
    const std::int64_t N = spec.N();
    switch (spec.family()) {
        case Family::Krawtchouk: {
            const double p = spec.p();
            return log_binomial(N, n) + nd * (std::log(p) - std::log1p(-p));
        }
        case Family::Charlier: return nd * std::log(spec.a()) - log_gamma(nd + 1.0);
        case Family::Hahn: {
            const double a = spec.a();
            const double b = spec.b();
            return log_binomial(N, n) + lp(a, n) + std::log(2.0 * nd + a + b - 1.0) + lp(a + b, N) -
                   lp(b, n) - lp(nd + a + b - 1.0, N + 1);
        }
        case Family::Meixner: {
            const double a = spec.a();
            const double b = spec.b();
            return lp(a, n) + nd * std::log(b) - log_gamma(nd + 1.0);
        }
        case Family::QHahn: {
            // (ab q^{-1}; q)_n / (1 - ab q^{-1}) = (ab; q)_{n-1}, which stays
            // finite at ab = q.
            const double a = spec.a();
            const double b = spec.b();
            const double q = spec.q();
            const double ab = a * b;
            return std::log(q_binomial(N, n, q)) + lqp(a, q, n) + lqp(ab, q, n - 1) +
                   std::log1p(-ab * std::pow(q, 2.0 * nd - 1.0)) -
                   lqp(ab * std::pow(q, static_cast<double>(N)), q, n) - lqp(b, q, n) -
                   nd * std::log(a);
        }
    }
    throw DomainError("unreachable family");
}

double norm_constant_sq(const FamilySpec& spec, std::int64_t n) {
    return std::exp(log_norm_constant_sq(spec, n));
}

double difference_B(const FamilySpec& spec, std::int64_t x) {
    const double xd = static_cast<double>(x);
    const double Nd = static_cast<double>(spec.N());
    switch (spec.family()) {
        case Family::Krawtchouk: return spec.p() * (Nd - xd);
        case Family::Charlier: return spec.a();
        case Family::Hahn: return (xd + spec.a()) * (Nd - xd);
        case Family::Meixner: return spec.b() * (xd + spec.a()) / (1.0 - spec.b());
        case Family::QHahn: {
            const double q = spec.q();
            return (1.0 - spec.a() * std::pow(q, xd)) * std::expm1((xd - Nd) * std::log(q));
        }
    }
    throw DomainError("unreachable family");
}

double difference_D(const FamilySpec& spec, std::int64_t x) {
    const double xd = static_cast<double>(x);
    const double Nd = static_cast<double>(spec.N());
    switch (spec.family()) {
        case Family::Krawtchouk: return (1.0 - spec.p()) * xd;
        case Family::Charlier: return xd;
        case Family::Hahn: return xd * (spec.b() + Nd - xd);
        case Family::Meixner: return xd / (1.0 - spec.b());
        case Family::QHahn: {
            const double q = spec.q();
            return spec.a() / q * (-std::expm1(xd * std::log(q))) *
                   (std::pow(q, xd - Nd) - spec.b());
        }
    }
    throw DomainError("unreachable family");
}

double difference_energy(const FamilySpec& spec, std::int64_t n) {
    const double nd = static_cast<double>(n);
    switch (spec.family()) {
        case Family::Krawtchouk:
        case Family::Charlier:
        case Family::Meixner: return nd;
        case Family::Hahn: return nd * (nd + spec.a() + spec.b() - 1.0);
        case Family::QHahn: {
            const double q = spec.q();
            return std::expm1(-nd * std::log(q)) * (1.0 - spec.a() * spec.b() * std::pow(q, nd - 1.0));
        }
    }
    throw DomainError("unreachable family");
}

std::string_view conv_type_name(ConvolutionType t) {
    switch (t) {
        case ConvolutionType::TypeI: return "i";
        case ConvolutionType::TypeII: return "ii";
        case ConvolutionType::TypeIII: return "iii";
    }
    return "?";
}

ConvolutionType parse_conv_type(std::string_view s) {
    if (s == "i" || s == "1") return ConvolutionType::TypeI;
    if (s == "ii" || s == "2") return ConvolutionType::TypeII;
    if (s == "iii" || s == "3") return ConvolutionType::TypeIII;
    throw DomainError("unknown convolution type '" + std::string(s) + "' (expected i, ii or iii)");
}

namespace {

void reject_qhahn_type2(Family family, ConvolutionType type) {
    if (family == Family::QHahn && type == ConvolutionType::TypeII) {
        throw UnsupportedCombination(
            "qhahn type=ii: the type (ii) convolution does not exist for q-Hahn");
    }
}

void require_unit(double v, const char* name, const char* ctx) {
    require(v > 0.0 && v < 1.0,
            std::string(ctx) + ": need 0 < " + name + " < 1, got " + name + "=" + format_real(v));
}

void require_positive(double v, const char* name, const char* ctx) {
    require(v > 0.0 && std::isfinite(v),
            std::string(ctx) + ": need " + name + " > 0, got " + name + "=" + format_real(v));
}

}  // namespace

ConvolutionRecipe make_recipe(Family family, ConvolutionType type, const ConvolutionParams& params,
                              std::int64_t N) {
    reject_qhahn_type2(family, type);
    const double a = params.a;
    const double b = params.b;
    const double c = params.c;
    const double q = params.q;
    if (is_finite(family)) {
        require(N >= 0, "finite family needs N >= 0");
    } else {
        N = 0;
    }
    FamilySpec l3 = lambda3_map(type, family, params, N);
    switch (family) {
        case Family::Krawtchouk:
            return {family, type, params, N, FamilySpec::krawtchouk(N, a), FamilySpec::krawtchouk(N, b), l3};
        case Family::Charlier:
            if (type == ConvolutionType::TypeIII) {
                return {family, type, params, N, FamilySpec::charlier(a), FamilySpec::krawtchouk(0, b), l3};
            }
            return {family, type, params, N, FamilySpec::krawtchouk(0, a), FamilySpec::charlier(b), l3};
        case Family::Hahn:
            if (type == ConvolutionType::TypeIII) {
                return {family, type, params, N, FamilySpec::hahn(N, a, b), FamilySpec::hahn(N, c, a), l3};
            }
            return {family, type, params, N, FamilySpec::hahn(N, a, b), FamilySpec::hahn(N, b, c), l3};
        case Family::Meixner:
            if (type == ConvolutionType::TypeIII) {
                return {family, type, params, N, FamilySpec::meixner(a, b), FamilySpec::hahn(0, c, a), l3};
            }
            return {family, type, params, N, FamilySpec::hahn(0, a, b), FamilySpec::meixner(b, c), l3};
        case Family::QHahn:
            if (type == ConvolutionType::TypeIII) {
                return {family, type, params, N, FamilySpec::qhahn(N, a, b, q), FamilySpec::qhahn(N, c, a, q), l3};
            }
            return {family, type, params, N, FamilySpec::qhahn(N, a, b, q), FamilySpec::qhahn(N, b, c, q), l3};
    }
    throw DomainError("unreachable family");
}

FamilySpec lambda3_map(ConvolutionType type, Family family, const ConvolutionParams& params,
                       std::int64_t N) {
    reject_qhahn_type2(family, type);
    const double a = params.a;
    const double b = params.b;
    const double c = params.c;
    const double q = params.q;
    switch (family) {
        case Family::Krawtchouk:
            require_unit(a, "a", "krawtchouk");
            require_unit(b, "b", "krawtchouk");
            switch (type) {
                case ConvolutionType::TypeI: return FamilySpec::krawtchouk(N, b / (1.0 - a + a * b));
                case ConvolutionType::TypeII: return FamilySpec::krawtchouk(N, b / (1.0 - a + b));
                case ConvolutionType::TypeIII: return FamilySpec::krawtchouk(N, a * b / (1.0 - b + a * b));
            }
            break;
        case Family::Charlier:
            if (type == ConvolutionType::TypeIII) {
                require_positive(a, "a", "charlier type=iii");
                require_unit(b, "b", "charlier type=iii");
                return FamilySpec::charlier(a * b / (1.0 - b));
            }
            require_unit(a, "a", "charlier type=i");
            require_positive(b, "b", "charlier type=i");
            return FamilySpec::charlier(b / (1.0 - a));
        case Family::Hahn:
            require_positive(a, "a", "hahn");
            require_positive(b, "b", "hahn");
            require_positive(c, "c", "hahn");
            switch (type) {
                case ConvolutionType::TypeI: return FamilySpec::hahn(N, a + b, c);
                case ConvolutionType::TypeII: return FamilySpec::hahn(N, a + b, b + c);
                case ConvolutionType::TypeIII: return FamilySpec::hahn(N, c, a + b);
            }
            break;
        case Family::Meixner:
            require_positive(a, "a", "meixner");
            if (type == ConvolutionType::TypeIII) {
                require_unit(b, "b", "meixner type=iii");
                require_positive(c, "c", "meixner type=iii");
                return FamilySpec::meixner(c, b);
            }
            require_positive(b, "b", "meixner type=i");
            require_unit(c, "c", "meixner type=i");
            return FamilySpec::meixner(a + b, c);
        case Family::QHahn:
            require_unit(q, "q", "qhahn");
            require_unit(a, "a", "qhahn");
            if (type == ConvolutionType::TypeIII) {
                require(b < 1.0, "qhahn type=iii: need b < 1");
                require_unit(c, "c", "qhahn type=iii");
                return FamilySpec::qhahn(N, c, a * b, q);
            }
            require_unit(b, "b", "qhahn type=i");
            require(c < 1.0, "qhahn type=i: need c < 1");
            return FamilySpec::qhahn(N, a * b, c, q);
    }
    throw DomainError("unreachable family");
}

double kappa(ConvolutionType type, Family family, const ConvolutionParams& params, std::int64_t n) {
    reject_qhahn_type2(family, type);
    require(n >= 0, "kappa: negative degree");
    if (n == 0) return 1.0;
    const double a = params.a;
    const double b = params.b;
    const double c = params.c;
    const double q = params.q;
    const double nd = static_cast<double>(n);
    auto ratio = [](std::initializer_list<SignedLogValue> num, std::initializer_list<SignedLogValue> den) {
        SignedLogValue v = SignedLogValue::one();
        for (const auto& t : num) v *= t;
        for (const auto& t : den) v /= t;
        return v.value();
    };
    switch (family) {
        case Family::Krawtchouk:
            switch (type) {
                case ConvolutionType::TypeI: return std::pow(a * (1.0 - b), nd);
                case ConvolutionType::TypeII: return std::pow(a - b, nd);
                case ConvolutionType::TypeIII: return std::pow((1.0 - a) * b, nd);
            }
            break;
        case Family::Charlier:
            return type == ConvolutionType::TypeIII ? std::pow(b, nd) : std::pow(a, nd);
        case Family::Hahn:
            switch (type) {
                case ConvolutionType::TypeI:
                    return ratio({log_pochhammer(a, n), log_pochhammer(c, n)},
                                 {log_pochhammer(a + b, n), log_pochhammer(b + c, n)});
                case ConvolutionType::TypeII:
                    require(n <= kMaxTerminationOrder, "kappa: degree too large");
                    return series_from(n, [&]<class Real>(std::vector<Real>& num, std::vector<Real>& den, Real& z) {
                        num = {Real(-nd), Real(nd) + Real(a) + 2 * Real(b) + Real(c) - 1, Real(b)};
                        den = {Real(a) + Real(b), Real(b) + Real(c)};
                        z = 1;
                    });
                case ConvolutionType::TypeIII:
                    return ratio({log_pochhammer(b, n), log_pochhammer(c, n)},
                                 {log_pochhammer(a + b, n), log_pochhammer(a + c, n)});
            }
            break;
        case Family::Meixner:
            if (type == ConvolutionType::TypeIII) {
                return ratio({log_pochhammer(c, n)}, {log_pochhammer(a + c, n)});
            }
            return ratio({log_pochhammer(a, n)}, {log_pochhammer(a + b, n)});
        case Family::QHahn:
            if (type == ConvolutionType::TypeIII) {
                return ratio({SignedLogValue::from_double(a).pow(n), q_pochhammer(b, q, n),
                              q_pochhammer(c, q, n)},
                             {q_pochhammer(a * b, q, n), q_pochhammer(a * c, q, n)});
            }
            return ratio({SignedLogValue::from_double(b).pow(n), q_pochhammer(a, q, n),
                          q_pochhammer(c, q, n)},
                         {q_pochhammer(a * b, q, n), q_pochhammer(b * c, q, n)});
    }
    throw DomainError("unreachable family");
}

double kappa(const ConvolutionRecipe& recipe, std::int64_t n) {
    if (recipe.family == Family::Krawtchouk || recipe.family == Family::Hahn ||
        recipe.family == Family::QHahn) {
        require(n <= recipe.N, "kappa: degree outside the lattice");
    }
    return kappa(recipe.type, recipe.family, recipe.params, n);
}

double hahn_type2_kappa_alternating(double a, double b, double c, std::int64_t n) {
    require(n >= 0, "kappa: negative degree");
    require(n <= kMaxTerminationOrder, "kappa: degree too large");
    return detail::adaptive_series([&]<class Real>() {
        const Real s = Real(static_cast<double>(n)) + Real(a) + 2 * Real(b) + Real(c) - 1;
        detail::SeriesSum<Real> out;
        detail::CompensatedSum<Real> acc;
        for (std::int64_t k = 0; k <= n; ++k) {
            Real binom = 1;
            for (std::int64_t i = 1; i <= k; ++i) {
                binom = binom * static_cast<double>(n - k + i) / static_cast<double>(i);
            }
            Real poch = 1;
            for (std::int64_t i = 0; i < k; ++i) {
                const Real ri = static_cast<double>(i);
                poch *= (Real(b) + ri) * (s + ri) / ((Real(a) + Real(b) + ri) * (Real(b) + Real(c) + ri));
            }
            const Real t = binom * poch;
            acc.add(k % 2 == 0 ? t : Real(-t));
            out.magnitude += t;
        }
        out.sum = acc.value();
        out.terms = n + 1;
        return out;
    });
}

namespace {

LimitReport finish_limit(LimitReport r) {
    r.strictly_decreasing = r.distances.size() >= 2;
    for (std::size_t i = 1; i < r.distances.size(); ++i) {
        if (!(r.distances[i] < r.distances[i - 1])) r.strictly_decreasing = false;
    }
    return r;
}

}  // namespace

LimitReport limit_check_K_to_C(double p, std::span<const std::int64_t> N_sequence,
                               std::int64_t window) {
    require_positive(p, "p", "limit_check_K_to_C");
    const FamilySpec target = FamilySpec::charlier(p);
    LimitReport r;
    for (std::int64_t N : N_sequence) {
        const FamilySpec k = FamilySpec::krawtchouk(N, p / static_cast<double>(N));
        double d = 0.0;
        for (std::int64_t x = 0; x <= window; ++x) {
            const double pk = x <= N ? measure(k, x) : 0.0;
            d = std::max(d, std::fabs(pk - measure(target, x)));
        }
        r.steps.push_back(static_cast<double>(N));
        r.distances.push_back(d);
    }
    return finish_limit(std::move(r));
}

LimitReport limit_check_H_to_M(double a, double b, std::span<const std::int64_t> N_sequence,
                               std::int64_t window) {
    const FamilySpec target = FamilySpec::meixner(a, b);
    LimitReport r;
    for (std::int64_t N : N_sequence) {
        const FamilySpec h = FamilySpec::hahn(N, a, static_cast<double>(N) * (1.0 - b) / b);
        double d = 0.0;
        for (std::int64_t x = 0; x <= window; ++x) {
            const double ph = x <= N ? measure(h, x) : 0.0;
            d = std::max(d, std::fabs(ph - measure(target, x)));
        }
        r.steps.push_back(static_cast<double>(N));
        r.distances.push_back(d);
    }
    return finish_limit(std::move(r));
}

LimitReport limit_check_M_to_C(double b, std::span<const double> a_sequence, std::int64_t window) {
    const FamilySpec target = FamilySpec::charlier(b);
    LimitReport r;
    for (double a : a_sequence) {
        const FamilySpec m = FamilySpec::meixner(a, b / (a + b));
        double d = 0.0;
        for (std::int64_t x = 0; x <= window; ++x) {
            d = std::max(d, std::fabs(measure(m, x) - measure(target, x)));
        }
        r.steps.push_back(a);
        r.distances.push_back(d);
    }
    return finish_limit(std::move(r));
}

}  // namespace askey
