#pragma once
// One-line recipe grammar for a convolution kernel:
//   <family> type=<i|ii|iii> a=<real> b=<real> [c=<real>] [q=<real>] (N=<int> | eps=<real> | M=<int>)
// Finite families take N; Charlier and Meixner take eps (tail bound, default
// 1e-12) or an explicit cutoff M.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "askey/markov.hpp"

namespace askey {

struct RecipeSpec {
    Family family = Family::Krawtchouk;
    ConvolutionType type = ConvolutionType::TypeI;
    ConvolutionParams params;
    std::int64_t N = 0;                 // finite families
    std::optional<double> eps;          // truncated: tail bound
    std::optional<std::int64_t> cutoff; // truncated: explicit M

    friend bool operator==(const RecipeSpec&, const RecipeSpec&) = default;

    // Canonical text; parse_recipe(to_string()) == *this.
    [[nodiscard]] std::string to_string() const;
    [[nodiscard]] ConvolutionRecipe resolve() const;
    [[nodiscard]] LatticeSpec lattice() const;
};

inline constexpr double kDefaultTailEps = 1e-12;

// Throws DomainError on unknown, repeated or missing keys and on values out
// of range; UnsupportedCombination for q-Hahn type ii.
RecipeSpec parse_recipe(std::string_view text);

}  // namespace askey
