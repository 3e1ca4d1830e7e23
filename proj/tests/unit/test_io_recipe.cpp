#include <gtest/gtest.h>

#include <filesystem>
#include <limits>
#include <random>

#include "askey/errors.hpp"
#include "askey/format.hpp"
#include "askey/io.hpp"
#include "askey/recipe.hpp"

using namespace askey;

TEST(Format, RoundTrips) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> exps(-300.0, 300.0);
    for (int i = 0; i < 2000; ++i) {
        const double v = std::pow(10.0, exps(rng)) * (i % 2 ? -1.0 : 1.0);
        EXPECT_EQ(parse_real(format_real(v)), v);
        EXPECT_EQ(parse_real(format_real17(v)), v);
    }
    EXPECT_EQ(format_real(0.5), "0.5");
    EXPECT_THROW(parse_real("1.5x"), DomainError);
    EXPECT_THROW(parse_real(""), DomainError);
    EXPECT_THROW(parse_int("3.0"), DomainError);
    EXPECT_EQ(parse_int("-12"), -12);
}

TEST(Recipe, ParseAndCanonicalForm) {
    const auto r = parse_recipe("krawtchouk type=i a=0.3 b=0.5 N=5");
    EXPECT_EQ(r.family, Family::Krawtchouk);
    EXPECT_EQ(r.type, ConvolutionType::TypeI);
    EXPECT_EQ(r.N, 5);
    EXPECT_EQ(r.to_string(), "krawtchouk type=i a=0.3 b=0.5 N=5");
    // key order is free on input
    EXPECT_EQ(parse_recipe("krawtchouk N=5 b=0.5 a=0.3 type=i"), r);
}

TEST(Recipe, RoundTripAllFamilies) {
    for (const char* text : {"krawtchouk type=ii a=0.2 b=0.6 N=6", "charlier type=i a=0.5 b=1 eps=1e-12",
                             "charlier type=iii a=2 b=0.4 M=17", "hahn type=iii a=1 b=2 c=1 N=4",
                             "meixner type=iii a=1 b=0.5 c=0.7 eps=1e-12", "meixner type=ii a=1 b=0.5 c=0.6 M=9",
                             "qhahn type=i a=0.3 b=0.5 c=0.4 q=0.5 N=3"}) {
        const auto r = parse_recipe(text);
        EXPECT_EQ(parse_recipe(r.to_string()), r) << text;
        EXPECT_EQ(r.to_string(), text);
    }
}

TEST(Recipe, DefaultsAndLattices) {
    const auto c = parse_recipe("charlier type=i a=0.5 b=1");
    EXPECT_FALSE(c.cutoff.has_value());
    const auto lat = c.lattice();
    EXPECT_FALSE(lat.is_finite());
    EXPECT_LE(lat.tail_eps(), kDefaultTailEps);
    const auto m = parse_recipe("charlier type=i a=0.5 b=1 M=7");
    EXPECT_EQ(m.lattice().max_point(), 7);
}

TEST(Recipe, Rejections) {
    EXPECT_THROW(parse_recipe("krawtchouk type=i a=0.3 b=0.5"), DomainError);           // missing N
    EXPECT_THROW(parse_recipe("krawtchouk type=i a=0.3 b=0.5 N=5 c=1"), DomainError);    // unknown key
    EXPECT_THROW(parse_recipe("krawtchouk type=i a=0.3 a=0.4 b=0.5 N=5"), DomainError);  // repeated
    EXPECT_THROW(parse_recipe("krawtchouk type=i a=0.3 b=0.5 N=5 eps=1e-12"), DomainError);
    EXPECT_THROW(parse_recipe("charlier type=i a=0.5 b=1 eps=1e-12 M=5"), DomainError);
    EXPECT_THROW(parse_recipe("charlier type=i a=0.5 b=1 N=5"), DomainError);
    EXPECT_THROW(parse_recipe("krawtchouk type=iv a=0.3 b=0.5 N=5"), DomainError);
    EXPECT_THROW(parse_recipe("krawtchouk type=i a=1.3 b=0.5 N=5"), DomainError);
    EXPECT_THROW(parse_recipe("krawtchouk type=i a=0.3 b=0.5 N=-1"), DomainError);
    EXPECT_THROW(parse_recipe("krawtchouk type=i a=0.3 b N=5"), DomainError);
    EXPECT_THROW(parse_recipe("jacobi type=i a=0.3 b=0.5 N=5"), DomainError);
    EXPECT_THROW(parse_recipe(""), DomainError);
    EXPECT_THROW(parse_recipe("qhahn type=ii a=0.3 b=0.5 c=0.4 q=0.5 N=3"), UnsupportedCombination);
}

TEST(Csv, MatrixRoundTripIsExact) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    Eigen::MatrixXd m(7, 5);
    for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = g(rng) * std::pow(10.0, static_cast<double>(i % 9) - 4.0);
    m(0, 0) = std::numeric_limits<double>::denorm_min();
    m(1, 1) = -0.0;
    const auto back = matrix_from_csv(matrix_to_csv(m));
    EXPECT_EQ(back, m);
}

TEST(Csv, HeaderedColumns) {
    const Eigen::Vector3d a(0.0, 1.0, 2.0);
    const Eigen::Vector3d b(0.1, 1.0 / 3.0, -2e-300);
    const auto text = columns_to_csv({"n", "value"}, {a, b});
    EXPECT_EQ(text.substr(0, 8), "n,value\n");
    const auto back = matrix_from_csv(text, true);
    EXPECT_EQ(back.col(0), Eigen::VectorXd(a));
    EXPECT_EQ(back.col(1), Eigen::VectorXd(b));
    EXPECT_THROW(columns_to_csv({"n"}, {a, b}), DomainError);
}

TEST(Csv, Rejections) {
    EXPECT_THROW(matrix_from_csv("1,2\n3\n"), DomainError);
    EXPECT_THROW(matrix_from_csv("1,abc\n"), DomainError);
}

TEST(Json, RoundTrip) {
    Eigen::MatrixXd m(2, 3);
    m << 1.0 / 3.0, -2.5e-17, 7.0, 0.1, 0.2, 0.3;
    EXPECT_EQ(matrix_from_json(nlohmann::json::parse(matrix_to_json(m).dump())), m);
    const Eigen::Vector4d v(1e-300, 2.0 / 7.0, -1.0, 0.0);
    EXPECT_EQ(vector_from_json(nlohmann::json::parse(vector_to_json(v).dump())), Eigen::VectorXd(v));
    EXPECT_THROW(matrix_from_json(nlohmann::json::parse("[[1,2],[3]]")), DomainError);
    EXPECT_THROW(vector_from_json(nlohmann::json::parse("{}")), DomainError);
}

TEST(Json, Envelope) {
    const auto e = envelope("hahn type=i a=1 b=2 c=3 N=4", LatticeSpec::finite(4));
    EXPECT_EQ(e["recipe"], "hahn type=i a=1 b=2 c=3 N=4");
    EXPECT_EQ(e["lattice"]["kind"], "finite");
    EXPECT_EQ(e["lattice"]["size"], 5);
    const auto t = lattice_to_json(LatticeSpec::truncated_for(FamilySpec::charlier(1.0), 1e-12));
    EXPECT_EQ(t["kind"], "truncated");
    EXPECT_LE(t["tail_eps"].get<double>(), 1e-12);
}

TEST(Files, AtomicWriteLeavesNoTemporary) {
    const auto dir = std::filesystem::temp_directory_path() / "askey_io_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "m.csv";
    write_file_atomic(path, "1,2\n");
    write_file_atomic(path, "3,4\n");
    EXPECT_EQ(read_file(path), "3,4\n");
    int entries = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++entries;
    EXPECT_EQ(entries, 1);
    EXPECT_THROW(write_file_atomic(dir / "missing" / "x.csv", "1"), std::runtime_error);
    EXPECT_THROW(read_file(dir / "nope.csv"), std::runtime_error);
    std::filesystem::remove_all(dir);
}
