#include "askey/recipe.hpp"

#include <map>
#include <sstream>
#include <vector>

#include "askey/errors.hpp"
#include "askey/format.hpp"

namespace askey {

namespace {

// Parameter keys each family takes, in canonical order.
std::vector<std::string> parameter_keys(Family f) {
    switch (f) {
        case Family::Krawtchouk:
        case Family::Charlier: return {"a", "b"};
        case Family::Hahn:
        case Family::Meixner: return {"a", "b", "c"};
        case Family::QHahn: return {"a", "b", "c", "q"};
    }
    return {};
}

double& param_slot(ConvolutionParams& p, const std::string& key) {
    if (key == "a") return p.a;
    if (key == "b") return p.b;
    if (key == "c") return p.c;
    return p.q;
}

}  // namespace

RecipeSpec parse_recipe(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string word;
    if (!(in >> word)) throw DomainError("empty recipe");
    RecipeSpec r;
    r.family = parse_family(word);

    std::map<std::string, std::string, std::less<>> kv;
    while (in >> word) {
        const auto eq = word.find('=');
        if (eq == std::string::npos || eq == 0) throw DomainError("recipe item '" + word + "' is not key=value");
        if (!kv.emplace(word.substr(0, eq), word.substr(eq + 1)).second) {
            throw DomainError("recipe repeats key '" + word.substr(0, eq) + "'");
        }
    }
    auto take = [&](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    const auto type = take("type");
    if (!type) throw DomainError("recipe misses key 'type'");
    r.type = parse_conv_type(*type);
    for (const auto& key : parameter_keys(r.family)) {
        const auto v = take(key);
        if (!v) throw DomainError("recipe misses key '" + key + "'");
        param_slot(r.params, key) = parse_real(*v);
    }
    if (is_finite(r.family)) {
        const auto n = take("N");
        if (!n) throw DomainError("recipe misses key 'N'");
        r.N = parse_int(*n);
        if (r.N < 0) throw DomainError("recipe: N must be >= 0");
    } else {
        const auto eps = take("eps");
        const auto m = take("M");
        if (eps && m) throw DomainError("recipe: give eps or M, not both");
        if (m) {
            r.cutoff = parse_int(*m);
            if (*r.cutoff < 0) throw DomainError("recipe: M must be >= 0");
        } else {
            r.eps = eps ? parse_real(*eps) : kDefaultTailEps;
        }
    }
    if (!kv.empty()) {
        throw DomainError("recipe key '" + kv.begin()->first + "' is not used by " +
                          std::string(family_name(r.family)));
    }
    // Validates parameter ranges and the combination itself.
    (void)r.resolve();
    return r;
}

std::string RecipeSpec::to_string() const {
    std::string out(family_name(family));
    out += " type=";
    out += conv_type_name(type);
    ConvolutionParams p = params;
    for (const auto& key : parameter_keys(family)) out += " " + key + "=" + format_real(param_slot(p, key));
    if (is_finite(family)) {
        out += " N=" + std::to_string(N);
    } else if (cutoff) {
        out += " M=" + std::to_string(*cutoff);
    } else {
        out += " eps=" + format_real(eps.value_or(kDefaultTailEps));
    }
    return out;
}

ConvolutionRecipe RecipeSpec::resolve() const { return make_recipe(family, type, params, N); }

LatticeSpec RecipeSpec::lattice() const {
    const ConvolutionRecipe r = resolve();
    if (is_finite(family)) return LatticeSpec::finite(N);
    if (cutoff) return LatticeSpec::truncated_at(r.lambda3, *cutoff);
    return LatticeSpec::truncated_for(r.lambda3, eps.value_or(kDefaultTailEps));
}

}  // namespace askey
