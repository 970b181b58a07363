// jolt: exact classification, normal forms, and shear factorization for
// polynomial Hamiltonians whose flows are linear in time.
//
// Exit codes: 0 command ran (verdicts are output, not exit status),
//             2 parse error, 3 precondition failure, 4 numeric failure.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>

#include "jolt/corpus.hpp"
#include "jolt/factorize.hpp"
#include "jolt/hamio.hpp"

using namespace jolt;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct CommonOpts {
    bool json = false;
    bool numeric = false;
    std::size_t samples = 200;
    std::uint64_t seed = 20240801;
    double tol = 1e-9;
    std::size_t inline_n = 0;
    std::string inline_field = "rational";
};

SampleBudget make_budget(const CommonOpts& opts) {
    SampleBudget budget;
    budget.random_points = opts.samples;
    budget.seed = opts.seed;
    return budget;
}

NormalFormTolerances make_tolerances(const CommonOpts& opts) {
    NormalFormTolerances tol;
    tol.residual = opts.tol;
    return tol;
}

FieldSpec parse_field_flag(const std::string& name) {
    if (name == "rational") return FieldSpec::rational();
    if (name == "float") return FieldSpec::floating();
    if (name.rfind("sqrt", 0) == 0) {
        try {
            return FieldSpec::quadratic(std::stol(name.substr(4)));
        } catch (const JoltError&) {
            throw;
        } catch (const std::exception&) {
        }
    }
    throw ParseError(0, "unknown field '" + name + "' (use rational, float, or sqrt<d>)");
}

struct LoadedHamiltonian {
    Hamiltonian h;
    FieldSpec field;
    std::string name;
};

LoadedHamiltonian load_hamiltonian(const std::string& input, const CommonOpts& opts) {
    if (input.rfind("corpus:", 0) == 0) {
        const std::string name = input.substr(7);
        Hamiltonian h = corpus::by_name(name, opts.seed);
        return {h, infer_field(h.H), name};
    }
    if (std::filesystem::exists(input)) {
        const HamDocument doc = read_ham_file(input);
        return {doc.hamiltonian(), doc.field, doc.name};
    }
    if (opts.inline_n == 0)
        throw ParseError(0, "inline expressions need --n (or pass a .ham file / corpus:<name>)");
    const FieldSpec field = parse_field_flag(opts.inline_field);
    const FieldSpec parse_as = field.kind == FieldSpec::Kind::Float ? FieldSpec::rational() : field;
    return {Hamiltonian(opts.inline_n, parse_poly(input, opts.inline_n, parse_as)), field, ""};
}

std::pair<PolyVec, std::size_t> load_map(const std::string& input, const CommonOpts& opts) {
    if (input.rfind("corpus:", 0) == 0) {
        const Hamiltonian h = corpus::by_name(input.substr(7), opts.seed);
        return {linear_flow(h, Coeff(1)), h.n};
    }
    if (std::filesystem::exists(input)) {
        if (input.size() > 4 && input.substr(input.size() - 4) == ".map") {
            const MapDocument doc = read_map_file(input);
            return {doc.map, doc.n};
        }
        const HamDocument doc = read_ham_file(input);
        return {linear_flow(doc.hamiltonian(), Coeff(1)), doc.n};
    }
    throw ParseError(0, "map input must be a .map/.ham file or corpus:<name>");
}

void emit(const json& j, bool as_json, const std::string& text) {
    if (as_json) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << text;
    }
}

// --- classify ----------------------------------------------------------

int cmd_classify(const std::string& input, const CommonOpts& opts) {
    const auto start = Clock::now();
    const auto loaded = load_hamiltonian(input, opts);
    const SampleBudget budget = make_budget(opts);

    if (opts.numeric) {
        const std::size_t trials = opts.samples;
        const auto ai = is_affine_integrable_sampled(loaded.h, trials, opts.seed);
        const auto sh = is_shear_sampled(loaded.h, trials, opts.seed);
        const auto tn = is_triple_nilpotent_sampled(loaded.h, trials, opts.seed);
        json j;
        j["tool"] = "jolt";
        j["version"] = "0.1.0";
        j["seed"] = opts.seed;
        j["numeric_mode"] = true;
        j["trials"] = trials;
        const auto entry = [](const SampledIdentity& s) {
            return json{{"passed", s.passed},
                        {"trials_run", s.trials},
                        {"per_trial_bound", s.per_trial_bound}};
        };
        j["identities"] = {{"affine_integrable", entry(ai)},
                           {"shear_pair_identity", entry(sh)},
                           {"triple_nilpotent", entry(tn)}};
        j["timings_ms"] = {{"total", ms_since(start)}};
        std::ostringstream text;
        text << "numeric identity checks (trials = " << trials << ", seed = " << opts.seed
             << ")\n";
        const auto line = [&](const char* label, const SampledIdentity& s) {
            text << "  " << label << ": " << (s.passed ? "pass" : "FAIL") << " after " << s.trials
                 << " trials; Schwartz-Zippel failure bound <= " << s.per_trial_bound
                 << " per trial\n";
        };
        line("affine-integrable  ", ai);
        line("shear pair identity", sh);
        line("triple nilpotency  ", tn);
        emit(j, opts.json, text.str());
        return 0;
    }

    const ClassificationReport report = classify_hamiltonian(loaded.h, budget);
    const json j = classification_to_json(report, budget, ms_since(start));
    emit(j, opts.json, render_classification_text(report));
    return 0;
}

// --- seminormal ----------------------------------------------------------

int cmd_seminormal(const std::string& input, const std::string& at, const CommonOpts& opts) {
    const auto start = Clock::now();
    const auto loaded = load_hamiltonian(input, opts);
    const NormalFormTolerances tol = make_tolerances(opts);
    const std::size_t nv = 2 * loaded.h.n;

    ExactPoint x;
    if (!at.empty()) {
        x = parse_point(at, nv);
    } else {
        // First sample point with nonsingular A.
        PointSampler sampler(nv, make_budget(opts));
        bool found = false;
        while (auto pt = sampler.next()) {
            try {
                zeta_at_exact(loaded.h, *pt);
                x = *pt;
                found = true;
                break;
            } catch (const JoltError& e) {
                if (e.code() != ErrorCode::SingularA) throw;
            }
        }
        if (!found)
            throw JoltError(ErrorCode::NoValidPoint,
                            "no sample point with nonsingular A(x); pass --at explicitly");
    }

    const SemiNormalResult sn = seminormal_at(loaded.h, x, tol);
    json j;
    j["tool"] = "jolt";
    j["version"] = "0.1.0";
    j["seed"] = opts.seed;
    j["point"] = point_to_json(x);
    j["U"] = {{"S", dmat_to_json(sn.U.S)}, {"T", dmat_to_json(sn.U.T)}};
    j["zeta"] = dmat_to_json(sn.zeta);
    j["theta"] = dmat_to_json(sn.theta);
    j["residuals"] = {{"Z", sn.residual_Z},
                      {"B", sn.residual_B},
                      {"redundancy", sn.redundancy_residual}};
    j["timings_ms"] = {{"total", ms_since(start)}};

    std::ostringstream text;
    const auto print_mat = [&](const char* label, const DMat& m) {
        text << label << ":\n";
        for (std::size_t i = 0; i < m.rows(); ++i) {
            text << "   ";
            for (std::size_t c = 0; c < m.cols(); ++c) text << " " << m(i, c);
            text << "\n";
        }
    };
    text << "semi-normal form at (";
    for (std::size_t i = 0; i < x.size(); ++i) text << (i ? ", " : "") << x[i].str();
    text << ")\n";
    print_mat("S = cos(theta)", sn.U.S);
    print_mat("T = sin(theta)", sn.U.T);
    print_mat("zeta", sn.zeta);
    print_mat("theta", sn.theta);
    text << "residual Z: " << sn.residual_Z << "  residual B: " << sn.residual_B << "\n";
    emit(j, opts.json, text.str());
    return 0;
}

// --- reduce ----------------------------------------------------------

int cmd_reduce(const std::string& input, const CommonOpts& opts) {
    const auto start = Clock::now();
    const auto loaded = load_hamiltonian(input, opts);
    const auto result =
        simple_form_reduction(loaded.h, make_budget(opts), make_tolerances(opts));

    json j;
    j["tool"] = "jolt";
    j["version"] = "0.1.0";
    j["seed"] = opts.seed;
    std::ostringstream text;
    const std::size_t n = loaded.h.n;
    if (result.is_exact()) {
        const SimpleForm& f = *result.exact;
        j["exact"] = true;
        j["d"] = f.d;
        j["K"] = to_string(f.K, n);
        json v = json::array(), w = json::array();
        for (const auto& vi : f.V) v.push_back(to_string(vi, n));
        for (const auto& wi : f.W) w.push_back(to_string(wi, n));
        j["V"] = v;
        j["W"] = w;
        j["residual"] = 0.0;
        text << "simple form (exact), d = " << f.d << "\n";
        text << "  K = " << to_string(f.K, n) << "\n";
        for (std::size_t i = 0; i < f.d; ++i) {
            text << "  V" << i + 1 << " = " << to_string(f.V[i], n) << "\n";
            text << "  W" << i + 1 << " = " << to_string(f.W[i], n) << "\n";
        }
    } else {
        const NumericSimpleForm& f = *result.numeric;
        j["exact"] = false;
        j["d"] = f.d;
        j["K"] = to_string(f.K, n);
        json v = json::array(), w = json::array();
        for (const auto& vi : f.V) v.push_back(to_string(vi, n));
        for (const auto& wi : f.W) w.push_back(to_string(wi, n));
        j["V"] = v;
        j["W"] = w;
        j["residual"] = f.residual;
        j["integrability_residual"] = f.integrability_residual;
        j["integrability_exact_after_snap"] = f.integrability_exact;
        text << "simple form (float), d = " << f.d << ", residual " << f.residual << "\n";
        text << "  K = " << to_string(f.K, n) << "\n";
        for (std::size_t i = 0; i < f.d; ++i) {
            text << "  V" << i + 1 << " = " << to_string(f.V[i], n) << "\n";
            text << "  W" << i + 1 << " = " << to_string(f.W[i], n) << "\n";
        }
    }
    j["timings_ms"] = {{"total", ms_since(start)}};
    emit(j, opts.json, text.str());
    return 0;
}

// --- factorize ----------------------------------------------------------

int cmd_factorize(const std::string& input, const CommonOpts& opts) {
    const auto start = Clock::now();
    const auto [f, n] = load_map(input, opts);
    const JoltFactorization jf = jolt_factorize(f, n, make_budget(opts), make_tolerances(opts));

    json j;
    j["tool"] = "jolt";
    j["version"] = "0.1.0";
    j["seed"] = opts.seed;
    std::ostringstream text;
    if (jf.is_exact()) {
        const auto& factors = *jf.exact;
        j["exact"] = true;
        j["residual"] = "exact";
        j["H1U"] = to_string(factors.H1U.H, n);
        j["H4U"] = to_string(factors.H4U.H, n);
        j["F1"] = to_string(factors.F1, n);
        j["F4"] = to_string(factors.F4, n);
        j["h1"] = to_string(factors.h1, n);
        j["h4"] = to_string(factors.h4, n);
        text << "jolt factorization F = F1 o F4 (residual flag: exact)\n";
        text << "  H1 o U^-1 = " << to_string(factors.H1U.H, n) << "\n";
        text << "  H4 o U^-1 = " << to_string(factors.H4U.H, n) << "\n";
        text << "  F1 = " << to_string(factors.F1, n) << "\n";
        text << "  F4 = " << to_string(factors.F4, n) << "\n";
        text << "  h1(p) = " << to_string(factors.h1, n) << "\n";
        text << "  h4(p) = " << to_string(factors.h4, n) << "\n";
    } else {
        const auto& factors = *jf.numeric;
        j["exact"] = false;
        j["residual"] = jf.residual;
        j["H1U"] = to_string(factors.H1U.H, n);
        j["H4U"] = to_string(factors.H4U.H, n);
        text << "jolt factorization F = F1 o F4 (float, sampled residual " << jf.residual
             << ")\n";
        text << "  H1 o U^-1 = " << to_string(factors.H1U.H, n) << "\n";
        text << "  H4 o U^-1 = " << to_string(factors.H4U.H, n) << "\n";
    }
    j["timings_ms"] = {{"total", ms_since(start)}};
    emit(j, opts.json, text.str());
    return 0;
}

// --- small commands ----------------------------------------------------

int cmd_bracket(const std::string& f_text, const std::string& g_text, const CommonOpts& opts) {
    if (opts.inline_n == 0) throw ParseError(0, "bracket needs --n");
    const FieldSpec field = parse_field_flag(opts.inline_field);
    const Poly f = parse_poly(f_text, opts.inline_n, field);
    const Poly g = parse_poly(g_text, opts.inline_n, field);
    const Poly result = poisson(f, g, opts.inline_n);
    if (opts.json) {
        json j;
        j["bracket"] = to_string(result, opts.inline_n);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << to_string(result, opts.inline_n) << "\n";
    }
    return 0;
}

int cmd_flow(const std::string& input, const std::string& t_text, const CommonOpts& opts) {
    const auto loaded = load_hamiltonian(input, opts);
    Coeff t(1);
    if (!t_text.empty()) {
        const ExactPoint single = parse_point(t_text, 1);
        t = single[0];
    }
    const PolyVec flow = linear_flow(loaded.h, t);
    if (opts.json) {
        json j;
        json comps = json::array();
        for (const auto& c : flow) comps.push_back(to_string(c, loaded.h.n));
        j["map"] = comps;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << to_string(flow, loaded.h.n) << "\n";
    }
    return 0;
}

int cmd_verify_map(const std::string& input, const CommonOpts& opts) {
    const auto [f, n] = load_map(input, opts);
    const auto check = is_symplectic(f, n);
    if (opts.json) {
        json j;
        j["symplectic"] = check.ok;
        j["residual_zero"] = check.residual.is_zero();
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "symplectic: " << (check.ok ? "yes" : "no") << "\n";
        if (!check.ok) {
            for (std::size_t i = 0; i < check.residual.rows(); ++i)
                for (std::size_t c = 0; c < check.residual.cols(); ++c)
                    if (!check.residual(i, c).is_zero()) {
                        std::cout << "first nonzero residual entry (" << i << ", " << c
                                  << "): " << to_string(check.residual(i, c), n) << "\n";
                        return 0;
                    }
        }
    }
    return 0;
}

int cmd_corpus_list() {
    for (const auto& name : corpus::names()) std::cout << name << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact tools for affine-integrable Hamiltonians and jolt maps"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string input, second, at_point, t_text = "1";

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_flag("-j,--json", opts.json, "emit a JSON report");
        cmd->add_option("--samples", opts.samples, "random sample budget");
        cmd->add_option("--seed", opts.seed, "random seed");
        cmd->add_option("--tol", opts.tol, "residual tolerance");
        cmd->add_option("--n", opts.inline_n, "dimension n for inline expressions");
        cmd->add_option("--field", opts.inline_field,
                        "coefficient field for inline expressions (rational|sqrt<d>|float)");
    };

    auto* classify = app.add_subcommand("classify", "full classification report");
    classify->add_option("input", input, "expression, .ham file, or corpus:<name>")->required();
    classify->add_flag("--numeric", opts.numeric, "randomized identity checks instead of symbolic");
    add_common(classify);

    auto* seminormal = app.add_subcommand("seminormal", "semi-normalize the Hessian at a point");
    seminormal->add_option("input", input)->required();
    seminormal->add_option("--at", at_point, "comma-separated rational coordinates");
    add_common(seminormal);

    auto* reduce = app.add_subcommand("reduce", "reduce to K + Q^T V + P^T W form");
    reduce->add_option("input", input)->required();
    add_common(reduce);

    auto* factorize = app.add_subcommand("factorize", "factor a cubic jolt map into two shears");
    factorize->add_option("input", input, ".map/.ham file or corpus:<name>")->required();
    add_common(factorize);

    auto* bracket = app.add_subcommand("bracket", "Poisson bracket of two polynomials");
    bracket->add_option("f", input)->required();
    bracket->add_option("g", second)->required();
    add_common(bracket);

    auto* flow = app.add_subcommand("flow", "time-t flow map I + tX");
    flow->add_option("input", input)->required();
    flow->add_option("--t", t_text, "rational time (default 1)");
    add_common(flow);

    auto* verify = app.add_subcommand("verify-map", "exact symplecticity check of a map");
    verify->add_option("input", input)->required();
    add_common(verify);

    auto* corpus_cmd = app.add_subcommand("corpus", "list built-in corpus entries");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
            return app.exit(e);
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (classify->parsed()) return cmd_classify(input, opts);
        if (seminormal->parsed()) return cmd_seminormal(input, at_point, opts);
        if (reduce->parsed()) return cmd_reduce(input, opts);
        if (factorize->parsed()) return cmd_factorize(input, opts);
        if (bracket->parsed()) return cmd_bracket(input, second, opts);
        if (flow->parsed()) return cmd_flow(input, t_text, opts);
        if (verify->parsed()) return cmd_verify_map(input, opts);
        if (corpus_cmd->parsed()) return cmd_corpus_list();
    } catch (const JoltError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
