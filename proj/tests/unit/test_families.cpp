#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "askey/errors.hpp"
#include "askey/families.hpp"
#include "exact_oracle.hpp"

using namespace askey;
using oracle::R;
using oracle::Rational;

namespace {

std::vector<FamilySpec> finite_specs(std::int64_t N) {
    return {FamilySpec::krawtchouk(N, 0.3), FamilySpec::krawtchouk(N, 0.85), FamilySpec::hahn(N, 1.0, 2.0),
            FamilySpec::hahn(N, 0.4, 3.5), FamilySpec::qhahn(N, 0.3, 0.5, 0.5), FamilySpec::qhahn(N, 0.7, -0.4, 0.8)};
}

std::vector<FamilySpec> all_specs(std::int64_t N) {
    auto out = finite_specs(N);
    out.push_back(FamilySpec::charlier(1.0));
    out.push_back(FamilySpec::charlier(3.7));
    out.push_back(FamilySpec::meixner(1.0, 0.5));
    out.push_back(FamilySpec::meixner(2.5, 0.3));
    return out;
}

// Points of the lattice a test walks; Charlier and Meixner take the first
// `limit` points.
std::int64_t top(const FamilySpec& s, std::int64_t limit) { return s.finite() ? s.N() : limit; }

}  // namespace

TEST(FamilySpec, RejectsInvalidParameters) {
    EXPECT_THROW(FamilySpec::krawtchouk(4, 0.0), DomainError);
    EXPECT_THROW(FamilySpec::krawtchouk(4, 1.0), DomainError);
    EXPECT_THROW(FamilySpec::charlier(-1.0), DomainError);
    EXPECT_THROW(FamilySpec::hahn(4, 0.0, 1.0), DomainError);
    EXPECT_THROW(FamilySpec::meixner(1.0, 1.0), DomainError);
    EXPECT_THROW(FamilySpec::qhahn(4, 1.2, 0.5, 0.5), DomainError);
    EXPECT_THROW(FamilySpec::qhahn(4, 0.3, 1.0, 0.5), DomainError);
    EXPECT_THROW(FamilySpec::qhahn(4, 0.3, 0.5, 1.0), DomainError);
}

TEST(FamilySpec, TextRoundTrip) {
    for (const auto& s : all_specs(10)) EXPECT_EQ(FamilySpec::parse(s.to_string()), s) << s.to_string();
    EXPECT_EQ(FamilySpec::parse("hahn:a=1.0,b=2.0,N=10"), FamilySpec::hahn(10, 1.0, 2.0));
    EXPECT_THROW(FamilySpec::parse("hahn:a=1.0,N=10"), DomainError);
    EXPECT_THROW(FamilySpec::parse("hahn:a=1.0,b=2.0,c=3,N=10"), DomainError);
    EXPECT_THROW(FamilySpec::parse("laguerre:a=1"), DomainError);
}

TEST(Measure, Examples) {
    const auto k = FamilySpec::krawtchouk(2, 0.5);
    EXPECT_NEAR(measure(k, 0), 0.25, 1e-16);
    EXPECT_NEAR(measure(k, 1), 0.5, 1e-16);
    EXPECT_NEAR(measure(k, 2), 0.25, 1e-16);
    EXPECT_NEAR(measure(FamilySpec::charlier(1.0), 0), std::exp(-1.0), 1e-16);
    const auto h = FamilySpec::hahn(1, 1.0, 1.0);
    EXPECT_NEAR(measure(h, 0), 0.5, 1e-16);
    EXPECT_NEAR(measure(h, 1), 0.5, 1e-16);
    EXPECT_THROW(measure(k, 3), DomainError);
    EXPECT_THROW(measure(k, -1), DomainError);
}

TEST(Measure, MatchesRationalOracle) {
    const int N = 12;
    const auto near = [](double got, const Rational& want) {
        const double w = oracle::to_double(want);
        EXPECT_LE(std::abs(got - w), 1e-14 * w) << got << " vs " << w;
    };
    for (int x = 0; x <= N; ++x) {
        near(measure(FamilySpec::krawtchouk(N, 0.3), x), oracle::krawtchouk_measure(x, N, R(3, 10)));
        near(measure(FamilySpec::hahn(N, 1.5, 0.25), x), oracle::hahn_measure(x, N, R(3, 2), R(1, 4)));
        near(measure(FamilySpec::qhahn(N, 0.3, 0.5, 0.5), x), oracle::qhahn_measure(x, N, R(3, 10), R(1, 2), R(1, 2)));
    }
}

TEST(Measure, FiniteFamiliesSumToOne) {
    for (std::int64_t N : {1, 5, 20, 50, 100}) {
        for (const auto& s : finite_specs(N)) {
            double sum = 0.0;
            for (std::int64_t x = 0; x <= N; ++x) sum += measure(s, x);
            EXPECT_NEAR(sum, 1.0, 1e-13) << s.to_string();
        }
    }
}

TEST(Polynomial, NormalizedAtZero) {
    for (const auto& s : all_specs(15)) {
        for (std::int64_t n = 0; n <= top(s, 15); ++n) EXPECT_NEAR(polynomial(s, n, 0), 1.0, 1e-13) << s.to_string();
    }
}

TEST(Polynomial, Examples) {
    for (const auto& s : all_specs(6)) {
        for (std::int64_t x = 0; x <= top(s, 6); ++x) EXPECT_EQ(polynomial(s, 0, x), 1.0);
    }
    EXPECT_NEAR(polynomial(FamilySpec::krawtchouk(2, 0.5), 1, 1), 0.0, 1e-16);
}

TEST(Polynomial, MatchesRationalOracle) {
    const int N = 10;
    for (int n = 0; n <= N; ++n) {
        for (int x = 0; x <= N; ++x) {
            const double k = oracle::to_double(oracle::krawtchouk_poly(n, x, N, R(3, 10)));
            EXPECT_NEAR(polynomial(FamilySpec::krawtchouk(N, 0.3), n, x), k, 1e-12 * std::max(1.0, std::abs(k)));
            const double h = oracle::to_double(oracle::hahn_poly(n, x, N, R(3, 2), R(1, 4)));
            EXPECT_NEAR(polynomial(FamilySpec::hahn(N, 1.5, 0.25), n, x), h, 1e-12 * std::max(1.0, std::abs(h)));
            const double qh = oracle::to_double(oracle::qhahn_poly(n, x, N, R(3, 10), R(1, 2), R(1, 2)));
            EXPECT_NEAR(polynomial(FamilySpec::qhahn(N, 0.3, 0.5, 0.5), n, x), qh,
                        1e-12 * std::max(1.0, std::abs(qh)));
        }
    }
}

TEST(Polynomial, SelfDuality) {
    const auto k6 = FamilySpec::krawtchouk(6, 0.3);
    for (int n = 0; n <= 6; ++n) {
        for (int x = 0; x <= 6; ++x) EXPECT_NEAR(polynomial(k6, n, x), polynomial(k6, x, n), 1e-12);
    }
    const std::vector<FamilySpec> dual{FamilySpec::krawtchouk(20, 0.4), FamilySpec::charlier(2.0),
                                       FamilySpec::meixner(1.5, 0.4)};
    for (const auto& s : dual) {
        for (int n = 0; n <= 20; ++n) {
            for (int x = 0; x <= 20; ++x) {
                const double a = polynomial(s, n, x);
                EXPECT_LE(std::abs(a - polynomial(s, x, n)), 1e-11 * std::max(1.0, std::abs(a)))
                    << s.to_string() << " n=" << n << " x=" << x;
            }
        }
    }
}

TEST(Polynomial, QHahnIsPolynomialInEta) {
    // A degree-1 polynomial in eta(x) = q^-x - 1 is affine in eta.
    const auto s = FamilySpec::qhahn(8, 0.3, 0.5, 0.5);
    const double slope = (polynomial(s, 1, 1) - 1.0) / (std::pow(0.5, -1) - 1.0);
    for (int x = 2; x <= 8; ++x) {
        EXPECT_NEAR(polynomial(s, 1, x), 1.0 + slope * (std::pow(0.5, -x) - 1.0), 1e-12 * std::pow(2.0, x));
    }
}

TEST(NormConstant, Examples) {
    for (const auto& s : all_specs(7)) EXPECT_NEAR(norm_constant_sq(s, 0), 1.0, 1e-14) << s.to_string();
    EXPECT_NEAR(norm_constant_sq(FamilySpec::krawtchouk(4, 0.5), 2), 6.0, 1e-13);
}

TEST(NormConstant, HahnBruteForce) {
    // d_1^2 = 1 / sum_x pi(x) P_1(x)^2 on N=3, a=1, b=2, exactly.
    Rational s = 0;
    for (int x = 0; x <= 3; ++x) {
        const Rational p = oracle::hahn_poly(1, x, 3, R(1), R(2));
        s += oracle::hahn_measure(x, 3, R(1), R(2)) * p * p;
    }
    EXPECT_NEAR(norm_constant_sq(FamilySpec::hahn(3, 1.0, 2.0), 1), oracle::to_double(1 / s), 1e-14);
}

TEST(NormConstant, ExactOracleAllDegrees) {
    const int N = 8;
    for (int n = 0; n <= N; ++n) {
        Rational k = 0;
        Rational h = 0;
        Rational qh = 0;
        for (int x = 0; x <= N; ++x) {
            const Rational pk = oracle::krawtchouk_poly(n, x, N, R(3, 10));
            const Rational ph = oracle::hahn_poly(n, x, N, R(3, 2), R(1, 4));
            const Rational pq = oracle::qhahn_poly(n, x, N, R(3, 10), R(1, 2), R(1, 2));
            k += oracle::krawtchouk_measure(x, N, R(3, 10)) * pk * pk;
            h += oracle::hahn_measure(x, N, R(3, 2), R(1, 4)) * ph * ph;
            qh += oracle::qhahn_measure(x, N, R(3, 10), R(1, 2), R(1, 2)) * pq * pq;
        }
        const auto check = [n](const FamilySpec& s, const Rational& inv) {
            const double want = oracle::to_double(1 / inv);
            EXPECT_LE(std::abs(norm_constant_sq(s, n) - want), 1e-13 * want) << s.to_string() << " n=" << n;
        };
        check(FamilySpec::krawtchouk(N, 0.3), k);
        check(FamilySpec::hahn(N, 1.5, 0.25), h);
        check(FamilySpec::qhahn(N, 0.3, 0.5, 0.5), qh);
    }
}

TEST(Orthogonality, AllFamilies) {
    // Charlier and Meixner sums run far enough for the tail to vanish.
    for (const auto& s : all_specs(25)) {
        const std::int64_t L = s.finite() ? s.N() : 400;
        const int top_n = static_cast<int>(std::min<std::int64_t>(top(s, 25), 25));
        std::vector<std::vector<double>> P(static_cast<std::size_t>(top_n + 1));
        for (int n = 0; n <= top_n; ++n) {
            for (std::int64_t x = 0; x <= L; ++x) P[n].push_back(polynomial(s, n, x));
        }
        for (int m = 0; m <= top_n; ++m) {
            for (int n = m; n <= top_n; ++n) {
                double sum = 0.0;
                for (std::int64_t x = 0; x <= L; ++x) sum += measure(s, x) * P[m][x] * P[n][x];
                const double inv = 1.0 / norm_constant_sq(s, n);
                const double scale = std::sqrt(inv / norm_constant_sq(s, m));
                EXPECT_LE(std::abs(sum - (m == n ? inv : 0.0)), 1e-10 * scale)
                    << s.to_string() << " m=" << m << " n=" << n;
            }
        }
    }
}

TEST(DifferenceEquation, ExactPolynomials) {
    const int N = 9;
    const auto k = FamilySpec::krawtchouk(N, 0.3);
    const auto h = FamilySpec::hahn(N, 1.5, 0.25);
    const auto qh = FamilySpec::qhahn(N, 0.3, 0.5, 0.5);
    for (int n = 0; n <= N; ++n) {
        for (int x = 0; x <= N; ++x) {
            const auto lhs = [&](const FamilySpec& s, auto poly) {
                const double P = oracle::to_double(poly(x));
                double v = difference_D(s, x) * (x > 0 ? P - oracle::to_double(poly(x - 1)) : 0.0);
                v += difference_B(s, x) * (x < N ? P - oracle::to_double(poly(x + 1)) : 0.0);
                const double scale = std::max(1.0, std::abs(P)) * (difference_B(s, x) + difference_D(s, x) + 1.0);
                EXPECT_NEAR(v, difference_energy(s, n) * P, 1e-11 * scale) << s.to_string() << " n=" << n << " x=" << x;
            };
            lhs(k, [&](int y) { return oracle::krawtchouk_poly(n, y, N, R(3, 10)); });
            lhs(h, [&](int y) { return oracle::hahn_poly(n, y, N, R(3, 2), R(1, 4)); });
            lhs(qh, [&](int y) { return oracle::qhahn_poly(n, y, N, R(3, 10), R(1, 2), R(1, 2)); });
        }
    }
    EXPECT_EQ(difference_D(k, 0), 0.0);
    EXPECT_EQ(difference_B(k, N), 0.0);
}

TEST(DifferenceEquation, SemiInfiniteFamilies) {
    for (const auto& s : {FamilySpec::charlier(1.3), FamilySpec::meixner(2.0, 0.4)}) {
        for (int n = 0; n <= 10; ++n) {
            for (int x = 0; x <= 12; ++x) {
                const double P = polynomial(s, n, x);
                double v = difference_B(s, x) * (P - polynomial(s, n, x + 1));
                if (x > 0) v += difference_D(s, x) * (P - polynomial(s, n, x - 1));
                const double scale = std::max({1.0, std::abs(P), std::abs(polynomial(s, n, x + 1))}) *
                                     (difference_B(s, x) + difference_D(s, x) + 1.0);
                EXPECT_NEAR(v, difference_energy(s, n) * P, 1e-10 * scale) << s.to_string();
            }
        }
    }
}

TEST(Lambda3, Examples) {
    const auto k1 = lambda3_map(ConvolutionType::TypeI, Family::Krawtchouk, {0.3, 0.5, 0, 0}, 5);
    EXPECT_NEAR(k1.p(), 0.5 / 0.85, 1e-15);
    const auto h1 = lambda3_map(ConvolutionType::TypeI, Family::Hahn, {1.0, 2.0, 3.0, 0}, 5);
    EXPECT_EQ(h1.a(), 3.0);
    EXPECT_EQ(h1.b(), 3.0);
    const auto k3 = lambda3_map(ConvolutionType::TypeIII, Family::Krawtchouk, {0.4, 0.5, 0, 0}, 5);
    EXPECT_NEAR(k3.p(), 0.2 / 0.7, 1e-15);
}

TEST(Lambda3, RecipeStoresTheMappedFamily) {
    const auto r = make_recipe(Family::Hahn, ConvolutionType::TypeII, {1.0, 2.0, 3.0, 0}, 7);
    EXPECT_EQ(r.lambda3, lambda3_map(ConvolutionType::TypeII, Family::Hahn, r.params, 7));
    EXPECT_EQ(r.lambda3, FamilySpec::hahn(7, 3.0, 5.0));
}

TEST(Lambda3, RangeChecks) {
    EXPECT_THROW(lambda3_map(ConvolutionType::TypeI, Family::Charlier, {1.5, 1.0, 0, 0}), DomainError);
    EXPECT_THROW(lambda3_map(ConvolutionType::TypeI, Family::Krawtchouk, {0.3, 1.0, 0, 0}, 4), DomainError);
    EXPECT_THROW(lambda3_map(ConvolutionType::TypeIII, Family::Meixner, {1.0, 1.5, 1.0, 0}), DomainError);
    // p' = b/(1-a) may exceed 1 for Charlier.
    EXPECT_NEAR(lambda3_map(ConvolutionType::TypeI, Family::Charlier, {0.5, 2.0, 0, 0}).a(), 4.0, 1e-15);
}

TEST(Lambda3, QHahnTypeTwoDoesNotExist) {
    const ConvolutionParams p{0.3, 0.5, 0.4, 0.5};
    EXPECT_THROW(lambda3_map(ConvolutionType::TypeII, Family::QHahn, p, 4), UnsupportedCombination);
    EXPECT_THROW(make_recipe(Family::QHahn, ConvolutionType::TypeII, p, 4), UnsupportedCombination);
    EXPECT_THROW(kappa(ConvolutionType::TypeII, Family::QHahn, p, 1), UnsupportedCombination);
    try {
        make_recipe(Family::QHahn, ConvolutionType::TypeII, p, 4);
    } catch (const UnsupportedCombination& e) {
        EXPECT_NE(std::string(e.what()).find("does not exist"), std::string::npos);
    }
}

TEST(Kappa, ZeroDegreeIsOne) {
    const ConvolutionParams p{0.3, 0.5, 0.4, 0.5};
    for (auto f : {Family::Krawtchouk, Family::Charlier, Family::Hahn, Family::Meixner, Family::QHahn}) {
        for (auto t : {ConvolutionType::TypeI, ConvolutionType::TypeII, ConvolutionType::TypeIII}) {
            if (f == Family::QHahn && t == ConvolutionType::TypeII) continue;
            EXPECT_EQ(kappa(t, f, p, 0), 1.0);
        }
    }
}

TEST(Kappa, ClosedForms) {
    EXPECT_NEAR(kappa(ConvolutionType::TypeII, Family::Krawtchouk, {0.2, 0.6, 0, 0}, 1), -0.4, 1e-15);
    for (int n = 0; n <= 8; ++n) {
        EXPECT_NEAR(kappa(ConvolutionType::TypeI, Family::Krawtchouk, {0.3, 0.5, 0, 0}, n), std::pow(0.15, n), 1e-15);
        EXPECT_NEAR(kappa(ConvolutionType::TypeIII, Family::Krawtchouk, {0.3, 0.5, 0, 0}, n), std::pow(0.35, n), 1e-15);
        EXPECT_NEAR(kappa(ConvolutionType::TypeI, Family::Charlier, {0.4, 2.0, 0, 0}, n), std::pow(0.4, n), 1e-15);
        EXPECT_NEAR(kappa(ConvolutionType::TypeIII, Family::Charlier, {2.0, 0.3, 0, 0}, n), std::pow(0.3, n), 1e-15);
    }
    // Hahn i with a = b = c = 1: (1)_n (1)_n / ((2)_n (2)_n) = 1/(n+1)^2
    for (int n = 0; n <= 10; ++n) {
        EXPECT_NEAR(kappa(ConvolutionType::TypeI, Family::Hahn, {1.0, 1.0, 1.0, 0}, n), 1.0 / ((n + 1.0) * (n + 1.0)),
                    1e-15);
    }
}

TEST(Kappa, HahnTypeTwoRepresentationsAgree) {
    const std::vector<ConvolutionParams> grid{{0.5, 1.5, 2.0, 0}, {2.0, 0.7, 1.3, 0}, {1.0, 2.0, 3.0, 0}};
    for (const auto& p : grid) {
        for (int n = 0; n <= 15; ++n) {
            const double f = kappa(ConvolutionType::TypeII, Family::Hahn, p, n);
            const double alt = hahn_type2_kappa_alternating(p.a, p.b, p.c, n);
            EXPECT_LE(std::abs(f - alt), 1e-12 * std::abs(f)) << "n=" << n;
        }
    }
}

TEST(Kappa, HahnTypeTwoMatchesExactSum) {
    // a = b = c = 1 in exact arithmetic, up to n = 49 where the series cancels hard.
    for (int n : {2, 10, 25, 40, 49}) {
        const Rational exact =
            oracle::hypergeometric({R(-n), Rational(n + 3), R(1)}, {R(2), R(2)}, 1, n);
        const double got = kappa(ConvolutionType::TypeII, Family::Hahn, {1.0, 1.0, 1.0, 0}, n);
        EXPECT_NEAR(got, oracle::to_double(exact), 1e-15) << "n=" << n;
    }
}

TEST(Kappa, ModulusBelowOne) {
    const std::vector<std::pair<Family, ConvolutionParams>> grid{
        {Family::Krawtchouk, {0.9, 0.05, 0, 0}}, {Family::Hahn, {5.0, 0.1, 0.2, 0}},
        {Family::Meixner, {3.0, 0.2, 0.9, 0}},   {Family::QHahn, {0.9, 0.95, 0.9, 0.9}},
        {Family::Charlier, {0.95, 4.0, 0, 0}}};
    for (const auto& [f, p] : grid) {
        for (auto t : {ConvolutionType::TypeI, ConvolutionType::TypeIII}) {
            for (int n = 1; n <= 40; ++n) {
                if (f == Family::Charlier && t == ConvolutionType::TypeIII) continue;
                EXPECT_LT(std::abs(kappa(t, f, p, n)), 1.0);
            }
        }
    }
}

TEST(Limits, KrawtchoukToCharlier) {
    const std::vector<std::int64_t> Ns{10, 100, 1000};
    const auto r = limit_check_K_to_C(1.0, Ns);
    ASSERT_EQ(r.distances.size(), 3u);
    EXPECT_TRUE(r.strictly_decreasing);
    // window {0}: |(1 - p/N)^N - e^-p|
    const auto w0 = limit_check_K_to_C(1.0, Ns, 0);
    for (std::size_t i = 0; i < Ns.size(); ++i) {
        EXPECT_NEAR(w0.distances[i], std::abs(std::pow(1.0 - 1.0 / Ns[i], Ns[i]) - std::exp(-1.0)), 1e-14);
    }
}

TEST(Limits, HahnToMeixnerAndMeixnerToCharlier) {
    const std::vector<std::int64_t> Ns{10, 100, 1000};
    EXPECT_TRUE(limit_check_H_to_M(1.5, 0.4, Ns).strictly_decreasing);
    const std::vector<double> as{10.0, 100.0, 1000.0};
    const auto r = limit_check_M_to_C(2.0, as);
    EXPECT_TRUE(r.strictly_decreasing);
    EXPECT_LT(r.distances.back(), 1e-2);
}
