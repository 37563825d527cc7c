#pragma once

#include <iomanip>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "modcat/branching.hpp"
#include "modcat/families.hpp"
#include "modcat/json_io.hpp"
#include "modcat/mtc_core.hpp"
#include "modcat/orbifold_solver.hpp"

// modcat build | verify | fusion | solve | compare | report
// Exit codes: 0 success, 1 verification or solve failure, 2 usage or input error.

namespace modcat::cli {

enum Exit : int { kOk = 0, kFailure = 1, kUsage = 2 };

struct Options {
    double tolerance = 1e-9;
    double int_tolerance = 1e-6;
    bool json = false;

    Tolerances tol() const {
        Tolerances t;
        t.relation = tolerance;
        t.integrality = int_tolerance;
        return t;
    }
};

inline Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

inline Json report_to_json(const VerificationReport& r) {
    Json checks = Json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"deviation", finite_or_null(c.deviation)},
                          {"tolerance", c.tolerance}});
    return {{"passed", r.passed()}, {"checks", checks}};
}

/// A ModularData document, or entry `index` of a solver output document.
inline ModularData load_modular(const std::string& path, std::size_t index = 0) {
    const Json j = read_json_file(path);
    if (j.is_object() && j.contains("solutions")) {
        const auto& s = j.at("solutions");
        if (!s.is_array() || index >= s.size())
            throw InputError(path + ": no solution with index " + std::to_string(index));
        return modular_data_from_json(s[index]);
    }
    return modular_data_from_json(j);
}

/// p with b[p(i)] ≅ a[i] on S, twists and dims; empty if none.
inline std::optional<std::vector<std::size_t>> find_permutation(const ModularData& a, const ModularData& b, double tol) {
    const std::size_t n = a.size();
    if (b.size() != n) return std::nullopt;
    std::vector<std::size_t> p(n);
    std::vector<bool> used(n, false);
    auto at = [](const ModularData& m, std::size_t i, std::size_t j) {
        return m.S()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    };
    auto rec = [&](auto&& self, std::size_t i) -> bool {
        if (i == n) return true;
        for (std::size_t c = 0; c < n; ++c) {
            if (used[c]) continue;
            if (std::abs(a.twists()(static_cast<Eigen::Index>(i)) - b.twists()(static_cast<Eigen::Index>(c))) > tol) continue;
            if (std::abs(a.dims()(static_cast<Eigen::Index>(i)) - b.dims()(static_cast<Eigen::Index>(c))) > tol) continue;
            if (std::abs(at(a, i, i) - at(b, c, c)) > tol) continue;
            bool ok = true;
            for (std::size_t k = 0; k < i && ok; ++k) ok = std::abs(at(a, i, k) - at(b, c, p[k])) <= tol;
            if (!ok) continue;
            used[c] = true;
            p[i] = c;
            if (self(self, i + 1)) return true;
            used[c] = false;
        }
        return false;
    };
    if (!rec(rec, 0)) return std::nullopt;
    return p;
}

struct Comparison {
    bool sizes_match = false;
    double s_dev = 0.0, twist_dev = 0.0, c3_dev = 0.0;
    double worst() const { return std::max({s_dev, twist_dev, c3_dev}); }
};

/// Entrywise deviation under identity labels; phaseC enters through its cube, which is what the data fixes.
inline Comparison compare_identity(const ModularData& a, const ModularData& b) {
    Comparison c;
    c.sizes_match = a.size() == b.size();
    if (!c.sizes_match) return c;
    c.s_dev = (a.S() - b.S()).cwiseAbs().maxCoeff();
    c.twist_dev = (a.twists() - b.twists()).cwiseAbs().maxCoeff();
    c.c3_dev = std::abs(std::pow(a.phase_c(), 3) - std::pow(b.phase_c(), 3));
    return c;
}

inline ModularData relabel(const ModularData& b, const std::vector<std::size_t>& p, const ModularData& names_from) {
    // a[i] ↔ b[p(i)]: reorder b into a's label order
    const std::size_t n = b.size();
    ComplexMatrix s(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    ComplexVector t(static_cast<Eigen::Index>(n));
    std::size_t vac = 0;
    for (std::size_t i = 0; i < n; ++i) {
        t(static_cast<Eigen::Index>(i)) = b.twists()(static_cast<Eigen::Index>(p[i]));
        if (p[i] == b.vacuum()) vac = i;
        for (std::size_t j = 0; j < n; ++j)
            s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                b.S()(static_cast<Eigen::Index>(p[i]), static_cast<Eigen::Index>(p[j]));
    }
    return ModularData(b.name(), names_from.label_names(), vac, s, t, b.phase_c());
}

inline std::string weight_string(Complex twist) {
    double h = std::arg(twist) / (2 * kPi);
    if (h < 0) h += 1.0;
    Rational r;
    if (small_rational(h, 1024, 1e-9, r)) {
        if (r >= Rational(1)) r -= Rational(1);
        return to_string(r);
    }
    std::ostringstream os;
    os << std::setprecision(12) << h;
    return os.str();
}

inline void print_summary(const ModularData& md, std::ostream& os) {
    os << md.name() << ": " << md.size() << " sectors, mu = " << std::setprecision(12) << global_dimension(md);
    try {
        os << ", c mod 8 = " << to_string(central_charge_mod8(md));
    } catch (const Error&) {
        os << ", c mod 8 undetermined";
    }
    os << "\n";
}

inline int cmd_build(const std::string& family, int param, const std::string& path, const Options& opt,
                     std::ostream& out, std::ostream& err) {
    const FamilySpec spec{parse_family(family), param};
    ConstructionLog log;
    const ModularData md = build_family(spec, &log);
    const std::string doc = dump_json(to_json(md));
    std::ostream& info = path.empty() ? err : out;
    if (path.empty()) out << doc;
    else write_text_file(path, doc);
    if (opt.json) {
        Json j{{"name", md.name()}, {"sectors", md.size()}, {"mu", global_dimension(md)},
               {"c_mod_8", to_string(central_charge_mod8(md, opt.tol()))}, {"log", log.lines}};
        info << dump_json(j);
    } else {
        print_summary(md, info);
        for (const auto& l : log.lines) info << l << "\n";
    }
    return kOk;
}

inline int cmd_verify(const std::string& path, const Options& opt, std::ostream& out) {
    const ModularData md = load_modular(path);
    const VerificationReport r = verify(md, opt.tol());
    if (opt.json) out << dump_json(report_to_json(r));
    else out << md.name() << "\n" << r.to_table();
    return r.passed() ? kOk : kFailure;
}

inline int cmd_fusion(const std::string& path, const Options& opt, std::ostream& out, std::ostream& err) {
    const ModularData md = load_modular(path);
    FusionRing ring = [&] {
        try {
            return verlinde_fusion(md, opt.tol());
        } catch (const NotModular& e) {
            err << e.what() << "\n";
            throw;
        }
    }();
    const std::size_t r = ring.rank();
    const auto names = md.label_names();
    if (opt.json) {
        Json n = Json::array();
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                for (std::size_t k = 0; k < r; ++k)
                    if (ring(i, j, k) != 0) n.push_back({names[i], names[j], names[k], ring(i, j, k)});
        Json d = Json::array();
        for (std::size_t i = 0; i < r; ++i) d.push_back(md.dims()(static_cast<Eigen::Index>(i)));
        out << dump_json({{"labels", names}, {"dims", d}, {"fusion", n}});
        return kOk;
    }
    out << "dims:\n";
    for (std::size_t i = 0; i < r; ++i)
        out << "  " << names[i] << "  " << std::setprecision(12) << md.dims()(static_cast<Eigen::Index>(i)) << "\n";
    out << "fusion (a <= b):\n";
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i; j < r; ++j) {
            std::string rhs;
            for (std::size_t k = 0; k < r; ++k) {
                const int c = ring(i, j, k);
                if (c == 0) continue;
                if (!rhs.empty()) rhs += " + ";
                if (c != 1) rhs += std::to_string(c) + " ";
                rhs += names[k];
            }
            out << "  " << names[i] << " x " << names[j] << " = " << rhs << "\n";
        }
    return kOk;
}

inline SolverProblem builtin_problem(const std::string& kind, int l) {
    if (kind == "spin_level2") return spin_problem(l);
    if (kind == "orbifold_u1") return orbifold_problem(l);
    throw InputError("unknown built-in problem '" + kind + "' (expected spin_level2 or orbifold_u1)");
}

inline int cmd_solve(const std::string& problem_path, const std::string& builtin, int param,
                     const std::string& write_problem, const std::string& path, const Options& opt, std::ostream& out) {
    if (problem_path.empty() == builtin.empty()) throw InputError("solve needs exactly one of PROBLEM or --builtin");
    const SolverProblem pb =
        builtin.empty() ? solver_problem_from_json(read_json_file(problem_path)) : builtin_problem(builtin, param);
    if (!write_problem.empty()) write_text_file(write_problem, dump_json(to_json(pb)));
    SolveResult r;
    try {
        r = solve(pb, opt.tol());
    } catch (const DegenerateData& e) {
        out << "no solution: " << e.what() << "\n";
        return kFailure;
    }
    Json sols = Json::array();
    for (const auto& s : r.solutions) sols.push_back(to_json(s.data));
    Json doc{{"solutions", sols}, {"raw_candidates", r.raw_candidates},
             {"best_residual", finite_or_null(r.best_residual)}, {"log", r.log}};
    if (!path.empty()) write_text_file(path, dump_json(doc));
    if (opt.json) {
        out << dump_json(doc);
    } else {
        for (const auto& l : r.log) out << l << "\n";
        out << r.solutions.size() << " solution(s)";
        if (r.solutions.empty()) out << "; best residual " << std::scientific << std::setprecision(3) << r.best_residual;
        out << "\n";
        for (std::size_t i = 0; i < r.solutions.size(); ++i) {
            out << "solution " << i << ":\n";
            print_summary(r.solutions[i].data, out);
        }
    }
    return r.solutions.empty() ? kFailure : kOk;
}

inline int cmd_compare(const std::string& pa, const std::string& pb, bool allow_permutation, std::size_t index,
                       const Options& opt, std::ostream& out) {
    const ModularData a = load_modular(pa, index);
    const ModularData b = load_modular(pb, index);
    if (a.size() != b.size()) {
        out << "different sector counts: " << a.size() << " vs " << b.size() << "\n";
        return kFailure;
    }
    Comparison c = compare_identity(a, b);
    std::vector<std::size_t> perm(a.size());
    std::iota(perm.begin(), perm.end(), 0);
    if (c.worst() >= opt.tolerance && allow_permutation) {
        if (auto p = find_permutation(a, b, opt.tolerance)) {
            perm = *p;
            c = compare_identity(a, relabel(b, perm, a));
        }
    }
    const bool ok = c.worst() < opt.tolerance;
    if (opt.json) {
        Json p = Json::array();
        for (std::size_t i = 0; i < perm.size(); ++i) p.push_back({a.label_names()[i], b.label_names()[perm[i]]});
        out << dump_json({{"equal", ok}, {"S_deviation", c.s_dev}, {"twist_deviation", c.twist_dev},
                          {"phaseC3_deviation", c.c3_dev}, {"permutation", p}});
    } else {
        out << std::scientific << std::setprecision(3) << "S deviation " << c.s_dev << ", twist deviation "
            << c.twist_dev << ", phaseC^3 deviation " << c.c3_dev << "\n";
        out << "permutation:\n";
        for (std::size_t i = 0; i < perm.size(); ++i)
            out << "  " << a.label_names()[i] << " -> " << b.label_names()[perm[i]] << "\n";
        out << (ok ? "equal" : "different") << "\n";
    }
    return ok ? kOk : kFailure;
}

inline int cmd_report(const std::string& family, int param, const std::string& in, const Options& opt,
                      std::ostream& out) {
    ConstructionLog log;
    const ModularData md = in.empty() ? build_family({parse_family(family), param}, &log) : load_modular(in);
    const VerificationReport r = verify(md, opt.tol());
    const double rmu = std::sqrt(global_dimension(md));
    if (opt.json) {
        Json sectors = Json::array();
        for (std::size_t i = 0; i < md.size(); ++i)
            sectors.push_back({{"label", md.label_names()[i]}, {"dim", md.dims()(static_cast<Eigen::Index>(i))},
                               {"h", weight_string(md.twists()(static_cast<Eigen::Index>(i)))}});
        out << dump_json({{"name", md.name()}, {"mu", global_dimension(md)}, {"sectors", sectors},
                          {"verification", report_to_json(r)}, {"log", log.lines}});
        return r.passed() ? kOk : kFailure;
    }
    print_summary(md, out);
    out << "sectors (label, d, h mod 1):\n";
    for (std::size_t i = 0; i < md.size(); ++i)
        out << "  " << std::left << std::setw(12) << md.label_names()[i] << std::right << std::setw(14)
            << std::setprecision(10) << md.dims()(static_cast<Eigen::Index>(i)) << "  "
            << weight_string(md.twists()(static_cast<Eigen::Index>(i))) << "\n";
    out << "sqrt(mu) * S:\n";
    for (Eigen::Index i = 0; i < md.S().rows(); ++i) {
        out << " ";
        for (Eigen::Index j = 0; j < md.S().cols(); ++j) {
            const Complex z = md.S()(i, j) * rmu;
            std::ostringstream cell;
            cell << std::fixed << std::setprecision(4) << z.real();
            if (std::abs(z.imag()) > 1e-9) cell << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
            out << " " << std::setw(9) << cell.str();
        }
        out << "\n";
    }
    if (!log.lines.empty()) {
        out << "construction choices:\n";
        for (const auto& l : log.lines) out << l << "\n";
    }
    out << r.to_table();
    return r.passed() ? kOk : kFailure;
}

/// Entry point; args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"modular data toolkit", "modcat"};
    app.require_subcommand(1, 1);
    Options opt;
    app.add_option("--tolerance", opt.tolerance, "relation tolerance")->default_val(1e-9);
    app.add_option("--int-tolerance", opt.int_tolerance, "integrality tolerance")->default_val(1e-6);
    app.add_flag("--json", opt.json, "machine-readable output");

    std::string family, in, in2, path, builtin, write_problem;
    int param = 0;
    bool allow_perm = false;
    std::size_t index = 0;

    auto* build = app.add_subcommand("build", "construct a family member and write its modular data");
    build->add_option("family", family, "u1 | su_level1 | spin_level2 | orbifold_u1 | a1")->required();
    build->add_option("param", param, "family parameter")->required();
    build->add_option("-o,--out", path, "output file (stdout if omitted)");

    auto* ver = app.add_subcommand("verify", "check every modular relation");
    ver->add_option("input", in, "modular data JSON")->required();

    auto* fus = app.add_subcommand("fusion", "fusion rules from the Verlinde formula");
    fus->add_option("input", in, "modular data JSON")->required();

    auto* sol = app.add_subcommand("solve", "reconstruct orbifold modular data");
    sol->add_option("problem", in, "solver problem JSON");
    sol->add_option("--builtin", builtin, "spin_level2 | orbifold_u1");
    sol->add_option("--param", param, "l for --builtin");
    sol->add_option("--write-problem", write_problem, "save the problem document");
    sol->add_option("-o,--out", path, "write all solutions");

    auto* cmp = app.add_subcommand("compare", "compare two modular data files");
    cmp->add_option("a", in, "first file")->required();
    cmp->add_option("b", in2, "second file")->required();
    cmp->add_flag("--allow-permutation", allow_perm, "search for a label permutation");
    cmp->add_option("--solution", index, "entry used from solver output files");

    auto* rep = app.add_subcommand("report", "human-readable summary with construction choices");
    rep->add_option("family", family, "family name");
    rep->add_option("param", param, "family parameter");
    rep->add_option("--in", in, "report on a file instead");

    for (auto* s : {build, ver, fus, sol, cmp, rep}) s->fallthrough();

    std::vector<std::string> argv_s{"modcat"};
    argv_s.insert(argv_s.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_s) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }
    if (!(opt.tolerance > 0) || !(opt.int_tolerance > 0)) {
        err << "usage error: tolerances must be positive\n";
        return kUsage;
    }
    try {
        if (*build) return cmd_build(family, param, path, opt, out, err);
        if (*ver) return cmd_verify(in, opt, out);
        if (*fus) return cmd_fusion(in, opt, out, err);
        if (*sol) return cmd_solve(in, builtin, param, write_problem, path, opt, out);
        if (*cmp) return cmd_compare(in, in2, allow_perm, index, opt, out);
        if (*rep) {
            if (in.empty() == family.empty()) throw InputError("report needs FAMILY PARAM or --in FILE");
            return cmd_report(family, param, in, opt, out);
        }
    } catch (const NotModular&) {
        return kFailure;
    } catch (const DegenerateData& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    } catch (const CalibrationError& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    } catch (const Error& e) {
        err << "input error: " << e.what() << "\n";
        return kUsage;
    } catch (const nlohmann::json::exception& e) {
        err << "input error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

}  // namespace modcat::cli
