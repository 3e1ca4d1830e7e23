#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "askey/errors.hpp"
#include "askey/fermion.hpp"
#include "askey/format.hpp"
#include "askey/io.hpp"
#include "askey/spectral.hpp"

namespace askey::cli {

namespace {

struct Options {
    std::string recipe;
    std::string format = "csv";
    std::string out;
    double tol = -1.0;
    std::optional<double> eps;
    std::optional<double> mu;
    std::string filled;
    std::string block;
    std::string config;
    std::string inject;
    int oracle_max = 6;
};

class ToleranceFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

RecipeSpec load_recipe(const std::string& text, const std::optional<double>& eps) {
    RecipeSpec r = parse_recipe(text);
    if (eps) {
        if (is_finite(r.family)) throw DomainError("--eps applies to Charlier and Meixner recipes only");
        r.eps = *eps;
        r.cutoff.reset();
    }
    return r;
}

double kernel_tol(const Options& o, const LatticeSpec& lattice) {
    if (o.tol >= 0.0) return o.tol;
    return lattice.is_finite() ? kDefaultFiniteTol : kDefaultTruncatedTol;
}

std::filesystem::path sidecar(const std::filesystem::path& p, const std::string& tag) {
    std::filesystem::path out = p.parent_path() / p.stem();
    out += "." + tag;
    out += p.extension();
    return out;
}

void emit(const Options& o, std::ostream& out, const std::string& content) {
    if (o.out.empty()) {
        out << content;
    } else {
        write_file_atomic(o.out, content);
    }
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

Block parse_block(const std::string& text, Eigen::Index size) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw DomainError("--block expects a:b");
    const Block b{parse_int(text.substr(0, colon)), parse_int(text.substr(colon + 1))};
    if (b.begin < 0 || b.end > size || b.begin > b.end) {
        throw DomainError("--block " + text + " outside the lattice 0:" + std::to_string(size));
    }
    return b;
}

std::vector<Eigen::Index> parse_filled(const std::string& text) {
    std::vector<Eigen::Index> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(parse_int(item));
    }
    return out;
}

FreeFermionModel make_model(const Options& o, SpectralSystem sys) {
    if (!o.filled.empty()) {
        if (o.mu) throw DomainError("give --mu or --filled, not both");
        return FreeFermionModel::with_filling(std::move(sys), parse_filled(o.filled));
    }
    return FreeFermionModel::ground_state(std::move(sys), o.mu.value_or(0.0));
}

void fail_if(bool bad, const std::string& what) {
    if (bad) throw ToleranceFailure(what);
}

int cmd_kernel(const Options& o, std::ostream& out) {
    const RecipeSpec spec = load_recipe(o.recipe, o.eps);
    const LatticeSpec lattice = spec.lattice();
    const ConvolutionKernel k = build_kernel(spec.resolve(), lattice);
    const KernelReport rep = verify_kernel(k, kernel_tol(o, lattice));
    if (o.format == "json") {
        nlohmann::json j = envelope(spec.to_string(), lattice);
        j["matrix"] = matrix_to_json(k.matrix);
        j["pi"] = vector_to_json(k.pi);
        if (!lattice.is_finite()) j["leakage"] = vector_to_json(k.leakage);
        j["report"] = {{"max_stochastic_violation", rep.max_stochastic_violation},
                       {"max_reversibility_violation", rep.max_reversibility_violation},
                       {"positivity", rep.positivity},
                       {"weighted_leakage", rep.weighted_leakage},
                       {"tol", rep.tol},
                       {"passed", rep.passed}};
        emit(o, out, dump(j));
    } else {
        emit(o, out, matrix_to_csv(k.matrix));
        if (!o.out.empty()) write_file_atomic(sidecar(o.out, "pi"), matrix_to_csv(k.pi));
    }
    fail_if(!rep.passed, "kernel check failed: stochastic " + format_real(rep.max_stochastic_violation) +
                             ", reversibility " + format_real(rep.max_reversibility_violation));
    return kOk;
}

int cmd_hamiltonian(const Options& o, std::ostream& out) {
    const RecipeSpec spec = load_recipe(o.recipe, o.eps);
    const LatticeSpec lattice = spec.lattice();
    const ConvolutionKernel k = build_kernel(spec.resolve(), lattice);
    const HamiltonianBuild h = classical_hamiltonian(k);
    const double tol = kernel_tol(o, lattice);
    if (o.format == "json") {
        nlohmann::json j = envelope(spec.to_string(), lattice);
        j["matrix"] = matrix_to_json(h.matrix);
        j["sqrt_pi"] = vector_to_json(k.pi.cwiseSqrt());
        j["asymmetry"] = h.asymmetry;
        emit(o, out, dump(j));
    } else {
        emit(o, out, matrix_to_csv(h.matrix));
    }
    fail_if(!(h.asymmetry <= tol), "hamiltonian asymmetry " + format_real(h.asymmetry) + " exceeds " + format_real(tol));
    return kOk;
}

Eigen::VectorXd resolved_kappas(const SpectralSystem& sys) {
    const auto modes = sys.resolved_modes();
    Eigen::VectorXd k(static_cast<Eigen::Index>(modes.size()));
    for (std::size_t i = 0; i < modes.size(); ++i) k(static_cast<Eigen::Index>(i)) = sys.kappas(modes[i]);
    return k;
}

Eigen::VectorXd resolved_flags(const SpectralSystem& sys) {
    Eigen::VectorXd f(sys.kappas.size());
    for (Eigen::Index n = 0; n < f.size(); ++n) f(n) = sys.resolved(n) ? 1.0 : 0.0;
    return f;
}

int cmd_spectrum(const Options& o, std::ostream& out) {
    const RecipeSpec spec = load_recipe(o.recipe, o.eps);
    const SpectralSystem sys = analytic_eigensystem(spec.resolve(), spec.lattice());
    const Eigen::VectorXd numeric = numeric_spectrum(sys.hamiltonian);
    const double diff = match_spectra(resolved_kappas(sys), numeric);
    const double tol = o.tol >= 0.0 ? o.tol : 1e-8;
    if (o.format == "json") {
        nlohmann::json j = envelope(spec.to_string(), sys.lattice);
        j["kappas"] = vector_to_json(sys.kappas);
        j["resolved"] = vector_to_json(resolved_flags(sys));
        j["numeric"] = vector_to_json(numeric);
        j["max_abs_diff"] = diff;
        j["spectral_gap"] = spectral_gap(sys);
        emit(o, out, dump(j));
    } else {
        const Eigen::VectorXd n = Eigen::VectorXd::LinSpaced(sys.kappas.size(), 0.0, static_cast<double>(sys.kappas.size() - 1));
        emit(o, out, columns_to_csv({"n", "kappa", "resolved"}, {n, sys.kappas, resolved_flags(sys)}));
    }
    fail_if(!(diff <= tol), "analytic and numeric spectra differ by " + format_real(diff));
    return kOk;
}

int cmd_eigvecs(const Options& o, std::ostream& out) {
    const RecipeSpec spec = load_recipe(o.recipe, o.eps);
    const SpectralSystem sys = analytic_eigensystem(spec.resolve(), spec.lattice());
    const auto modes = sys.resolved_modes();
    Eigen::MatrixXd P(sys.phi.rows(), static_cast<Eigen::Index>(modes.size()));
    for (std::size_t i = 0; i < modes.size(); ++i) P.col(static_cast<Eigen::Index>(i)) = sys.phi.col(modes[i]);
    const auto m = static_cast<Eigen::Index>(modes.size());
    const double orth = m == 0 ? 0.0 : (P.transpose() * P - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
    const double tol = o.tol >= 0.0 ? o.tol : 1e-9;
    if (o.format == "json") {
        nlohmann::json j = envelope(spec.to_string(), sys.lattice);
        j["phi"] = matrix_to_json(sys.phi);
        j["kappas"] = vector_to_json(sys.kappas);
        j["mode_tail"] = vector_to_json(sys.mode_tail);
        j["orthonormality"] = orth;
        emit(o, out, dump(j));
    } else {
        emit(o, out, matrix_to_csv(sys.phi));
    }
    fail_if(!(orth <= tol), "eigenvectors are not orthonormal: " + format_real(orth));
    return kOk;
}

int cmd_correlation(const Options& o, std::ostream& out) {
    const RecipeSpec spec = load_recipe(o.recipe, o.eps);
    const FreeFermionModel model = make_model(o, analytic_eigensystem(spec.resolve(), spec.lattice()));
    const CorrelationMatrix C = correlation_matrix(model);
    const double idem = (C.matrix * C.matrix - C.matrix).cwiseAbs().maxCoeff();
    const double tol = o.tol >= 0.0 ? o.tol : 1e-9;
    if (o.format == "json") {
        nlohmann::json j = envelope(spec.to_string(), model.spectral().lattice);
        j["matrix"] = matrix_to_json(C.matrix);
        j["filled_modes"] = model.filled_modes();
        if (std::isfinite(model.mu())) j["mu"] = model.mu();
        j["energy"] = model.energy();
        j["idempotency"] = idem;
        emit(o, out, dump(j));
    } else {
        emit(o, out, matrix_to_csv(C.matrix));
    }
    fail_if(!(idem <= tol), "correlation matrix is not a projector: " + format_real(idem));
    return kOk;
}

int cmd_entropy(const Options& o, std::ostream& out) {
    const RecipeSpec spec = load_recipe(o.recipe, o.eps);
    const FreeFermionModel model = make_model(o, analytic_eigensystem(spec.resolve(), spec.lattice()));
    const CorrelationMatrix C = correlation_matrix(model);
    if (!o.block.empty()) {
        const Block b = parse_block(o.block, C.matrix.rows());
        const double s = block_entropy(C, b);
        if (o.format == "json") {
            nlohmann::json j = envelope(spec.to_string(), model.spectral().lattice);
            j["block"] = {b.begin, b.end};
            j["entropy"] = s;
            emit(o, out, dump(j));
        } else {
            emit(o, out, "begin,end,entropy\n" + std::to_string(b.begin) + "," + std::to_string(b.end) + "," +
                             format_real17(s) + "\n");
        }
        return kOk;
    }
    const std::vector<double> sweep = entropy_sweep(C);
    const Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(sweep.data(), static_cast<Eigen::Index>(sweep.size()));
    if (o.format == "json") {
        nlohmann::json j = envelope(spec.to_string(), model.spectral().lattice);
        j["entropy"] = vector_to_json(s);
        emit(o, out, dump(j));
    } else {
        const Eigen::VectorXd l = Eigen::VectorXd::LinSpaced(s.size(), 0.0, static_cast<double>(s.size() - 1));
        emit(o, out, columns_to_csv({"block_size", "entropy"}, {l, s}));
    }
    return kOk;
}

VerifyOptions verify_options(const Options& o) {
    VerifyOptions v;
    v.kernel_tol = o.tol;
    v.oracle_max_sites = o.oracle_max;
    if (!o.inject.empty()) {
        std::vector<std::string> parts;
        std::stringstream ss(o.inject);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(item);
        if (parts.size() != 3) throw DomainError("--inject-fault expects x:y:delta");
        v.inject = true;
        v.inject_x = static_cast<long>(parse_int(parts[0]));
        v.inject_y = static_cast<long>(parse_int(parts[1]));
        v.inject_delta = parse_real(parts[2]);
    }
    return v;
}

std::vector<std::string> sweep_recipes(const std::string& path, Options& o) {
    const nlohmann::json j = nlohmann::json::parse(read_file(path));
    if (!j.is_object()) throw DomainError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key != "recipes" && key != "tol" && key != "oracle_max_sites") {
            throw DomainError("config has unknown key '" + key + "'");
        }
    }
    if (!j.contains("recipes") || !j["recipes"].is_array()) throw DomainError("config needs a 'recipes' array");
    if (j.contains("tol") && o.tol < 0.0) o.tol = j["tol"].get<double>();
    if (j.contains("oracle_max_sites")) o.oracle_max = j["oracle_max_sites"].get<int>();
    return j["recipes"].get<std::vector<std::string>>();
}

int cmd_verify(Options o, std::ostream& out) {
    std::vector<std::string> recipes;
    if (!o.config.empty()) {
        if (!o.recipe.empty()) throw DomainError("give --recipe or --config, not both");
        recipes = sweep_recipes(o.config, o);
    } else {
        if (o.recipe.empty()) throw DomainError("verify needs --recipe or --config");
        recipes.push_back(o.recipe);
    }
    const VerifyOptions vopt = verify_options(o);

    bool all = true;
    nlohmann::json runs = nlohmann::json::array();
    std::string csv = "recipe,check,value,tol,status\n";
    for (const auto& text : recipes) {
        const RecipeSpec spec = load_recipe(text, o.eps);
        const auto checks = run_checks(spec, vopt);
        nlohmann::json jc = nlohmann::json::array();
        for (const auto& c : checks) {
            const std::string status = c.informational ? "info" : (c.passed ? "pass" : "FAIL");
            all = all && (c.informational || c.passed);
            csv += "\"" + spec.to_string() + "\"," + c.name + "," + format_real17(c.value) + "," +
                   format_real17(c.tol) + "," + status + "\n";
            jc.push_back({{"check", c.name}, {"value", c.value}, {"tol", c.tol}, {"status", status}});
        }
        runs.push_back({{"recipe", spec.to_string()}, {"checks", jc}});
    }
    if (o.format == "json") {
        emit(o, out, dump({{"runs", runs}, {"passed", all}}));
    } else {
        emit(o, out, csv);
    }
    return all ? kOk : kToleranceFailure;
}

void add_recipe_options(CLI::App* sub, Options& o, bool recipe_required = true) {
    auto* r = sub->add_option("--recipe", o.recipe, "e.g. \"krawtchouk type=i a=0.3 b=0.5 N=5\"");
    if (recipe_required) r->required();
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", o.out, "output file (default: stdout)");
    sub->add_option("--tol", o.tol, "tolerance for the command's own check");
    sub->add_option("--eps", o.eps, "tail bound for Charlier and Meixner lattices");
}

void add_filling_options(CLI::App* sub, Options& o) {
    sub->add_option("--mu", o.mu, "chemical potential: fill modes with kappa < mu (default 0)");
    sub->add_option("--filled", o.filled, "explicit filled modes, e.g. 0,2,5");
}

}  // namespace

std::vector<Check> run_checks(const RecipeSpec& recipe, const VerifyOptions& options) {
    std::vector<Check> out;
    auto add = [&](std::string name, double value, double tol, bool passed) {
        out.push_back({std::move(name), value, tol, passed, false});
    };
    auto info = [&](std::string name, double value) { out.push_back({std::move(name), value, 0.0, true, true}); };

    const LatticeSpec lattice = recipe.lattice();
    ConvolutionKernel kernel = build_kernel(recipe.resolve(), lattice);
    if (options.inject) {
        if (options.inject_x < 0 || options.inject_y < 0 || options.inject_x >= lattice.size() ||
            options.inject_y >= lattice.size()) {
            throw DomainError("--inject-fault point outside the lattice");
        }
        kernel.matrix(options.inject_x, options.inject_y) += options.inject_delta;
    }
    const double ktol = options.kernel_tol >= 0.0 ? options.kernel_tol
                        : lattice.is_finite()      ? kDefaultFiniteTol
                                                   : kDefaultTruncatedTol;
    const KernelReport rep = verify_kernel(kernel, ktol);
    add("stochasticity", rep.max_stochastic_violation, ktol, rep.max_stochastic_violation <= ktol);
    add("detailed_balance", rep.max_reversibility_violation, ktol, rep.max_reversibility_violation <= ktol);
    add("positivity", kernel.matrix.minCoeff(), 0.0, rep.positivity);
    if (!lattice.is_finite()) {
        add("tail_certificate", rep.weighted_leakage, lattice.tail_eps(),
            rep.weighted_leakage <= lattice.tail_eps() + 1e-14);
    }

    const SpectralSystem sys = analytic_eigensystem(kernel);
    const double hmax = std::max(1.0, sys.hamiltonian.cwiseAbs().maxCoeff());
    add("hamiltonian_asymmetry", sys.asymmetry, ktol * hmax, sys.asymmetry <= ktol * hmax);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sys.hamiltonian);
    const Eigen::Index n = sys.hamiltonian.rows();
    const Eigen::VectorXd ev = solver.eigenvalues();
    const double top = ev(n - 1);
    add("top_eigenvalue", std::fabs(top - 1.0), 1e-12, std::fabs(top - 1.0) <= 1e-12);
    const auto ones = std::count_if(ev.begin(), ev.end(), [](double v) { return std::fabs(v - 1.0) <= 1e-9; });
    add("eigenvalue_one_multiplicity", static_cast<double>(ones), 1.0, ones == 1);
    const double radius = ev.cwiseAbs().maxCoeff();
    add("spectral_radius_excess", radius - 1.0, 1e-12, radius <= 1.0 + 1e-12);
    {
        Eigen::VectorXd v = sys.sqrt_pi.cwiseProduct(solver.eigenvectors().col(n - 1));
        v /= v.sum();
        const double d = (v - kernel.pi / kernel.pi.sum()).cwiseAbs().maxCoeff();
        add("perron_frobenius_vector", d, 1e-10, d <= 1e-10);
    }

    const auto modes = sys.resolved_modes();
    const auto m = static_cast<Eigen::Index>(modes.size());
    Eigen::VectorXd kap(m);
    Eigen::MatrixXd P(n, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        kap(i) = sys.kappas(modes[static_cast<std::size_t>(i)]);
        P.col(i) = sys.phi.col(modes[static_cast<std::size_t>(i)]);
    }
    const double sd = match_spectra(kap, ev);
    add("spectrum_match", sd, 1e-8, sd <= 1e-8);

    const double scale = 1.0 + static_cast<double>(lattice.max_point()) / 50.0;
    const double hinf = sys.hamiltonian.cwiseAbs().rowwise().sum().maxCoeff();
    const Eigen::VectorXd res = eigen_residuals(sys);
    double worst = 0.0;
    for (const auto k : modes) worst = std::max(worst, res(k));
    add("eigenvector_residual", worst / hinf, 1e-9 * scale, worst <= 1e-9 * hinf * scale);

    const double orth = m == 0 ? 0.0 : (P.transpose() * P - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
    add("orthonormality", orth, 1e-9, orth <= 1e-9);
    if (lattice.is_finite()) {
        const double comp = (sys.phi * sys.phi.transpose() - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
        add("completeness", comp, 1e-9, comp <= 1e-9);
        if (lattice.max_point() <= 30) {
            PolynomialResiduals pr;
            for (std::int64_t d = 0; d <= lattice.max_point(); ++d) {
                const PolynomialResiduals r = polynomial_residuals(kernel, d);
                pr.left = std::max(pr.left, r.left);
                pr.right = std::max(pr.right, r.right);
            }
            add("left_eigen_relation", pr.left, 1e-9, pr.left <= 1e-9);
            add("right_eigen_relation", pr.right, 1e-9, pr.right <= 1e-9);
        }
    }
    if (n <= options.oracle_max_sites && n <= kMaxManyBodySites) {
        const auto sums = many_body_energies(sys, kMaxManyBodySites);
        const auto oracle = jordan_wigner_spectrum(sys.hamiltonian, kMaxManyBodySites);
        double d = 0.0;
        for (std::size_t i = 0; i < sums.size(); ++i) d = std::max(d, std::fabs(sums[i] - oracle[i]));
        add("many_body_oracle", d, 1e-10, d <= 1e-10);
    }
    info("resolved_modes", static_cast<double>(m));
    info("spectral_gap", spectral_gap(sys));
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exactly solvable reversible Markov kernels, classical Hamiltonians and free-fermion models"};
    app.require_subcommand(1);
    Options o;

    auto* kernel = app.add_subcommand("kernel", "emit the kernel K(x,y); with --out, pi goes to <stem>.pi<ext>");
    add_recipe_options(kernel, o);
    auto* ham = app.add_subcommand("hamiltonian", "emit H(x,y) = K(x,y) sqrt(pi(y)/pi(x))");
    add_recipe_options(ham, o);
    auto* spectrum = app.add_subcommand("spectrum", "emit kappa(n), checked against a dense eigensolver");
    add_recipe_options(spectrum, o);
    auto* eigvecs = app.add_subcommand("eigvecs", "emit the orthonormal eigenvectors phi_n(x), one column per n");
    add_recipe_options(eigvecs, o);
    auto* corr = app.add_subcommand("correlation", "emit the ground-state correlation matrix");
    add_recipe_options(corr, o);
    add_filling_options(corr, o);
    auto* entropy = app.add_subcommand("entropy", "block entanglement entropy; sweeps [0,l) unless --block is given");
    add_recipe_options(entropy, o);
    add_filling_options(entropy, o);
    entropy->add_option("--block", o.block, "half-open site range a:b");
    auto* verify = app.add_subcommand("verify", "run every check for a recipe; exit 1 on any failure");
    add_recipe_options(verify, o, false);
    verify->add_option("--config", o.config, "JSON sweep: {\"recipes\": [...], \"tol\": ...}");
    verify->add_option("--oracle-max", o.oracle_max, "largest lattice for the many-body oracle check");
    verify->add_option("--inject-fault", o.inject, "x:y:delta")->group("");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageError;
    }

    try {
        if (*kernel) return cmd_kernel(o, out);
        if (*ham) return cmd_hamiltonian(o, out);
        if (*spectrum) return cmd_spectrum(o, out);
        if (*eigvecs) return cmd_eigvecs(o, out);
        if (*corr) return cmd_correlation(o, out);
        if (*entropy) return cmd_entropy(o, out);
        if (*verify) return cmd_verify(o, out);
    } catch (const ToleranceFailure& e) {
        err << "tolerance failure: " << e.what() << "\n";
        return kToleranceFailure;
    } catch (const UnsupportedCombination& e) {
        err << "error: unsupported combination: " << e.what() << "\n";
        return kUsageError;
    } catch (const nlohmann::json::exception& e) {
        err << "error: bad config: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }
    return kUsageError;
}

}  // namespace askey::cli
