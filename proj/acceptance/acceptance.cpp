// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.

#include <chrono>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "modcat/cli.hpp"
#include "modcat/modcat.hpp"

using namespace modcat;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double max_check_deviation(const VerificationReport& r) {
    double m = 0.0;
    for (const auto& c : r.checks) m = std::max(m, c.deviation);
    return m;
}

// a × b = c as a single term
bool single_product(const FusionRing& r, std::size_t a, std::size_t b, std::size_t c) {
    for (std::size_t k = 0; k < r.rank(); ++k)
        if (r(a, b, k) != (k == c ? 1 : 0)) return false;
    return true;
}

bool near_integers(const ModularData& md, double tol) {
    for (Complex z : verlinde_raw(md))
        if (std::abs(z - std::round(z.real())) > tol || std::round(z.real()) < 0) return false;
    return true;
}

// Lowest deviation over the 24 relabelings of the four twisted sectors.
double deviation_up_to_twisted(const ModularData& got, const ModularData& ref, int l) {
    const SpinIndex x{l};
    const std::vector<std::size_t> tw{x.sigma(1), x.sigma(2), x.tau(1), x.tau(2)};
    std::vector<std::size_t> order{0, 1, 2, 3};
    double best = std::numeric_limits<double>::infinity();
    do {
        std::vector<std::size_t> p(got.size());
        std::iota(p.begin(), p.end(), 0);
        for (std::size_t a = 0; a < 4; ++a) p[tw[a]] = tw[order[a]];
        double dev = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const auto pi = static_cast<Eigen::Index>(p[i]), ii = static_cast<Eigen::Index>(i);
            dev = std::max(dev, std::abs(got.twists()(pi) - ref.twists()(ii)));
            for (std::size_t j = 0; j < p.size(); ++j)
                dev = std::max(dev, std::abs(got.S()(pi, static_cast<Eigen::Index>(p[j])) -
                                             ref.S()(ii, static_cast<Eigen::Index>(j))));
        }
        best = std::min(best, dev);
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
}

struct Outcome {
    bool pass;
    std::string detail;
};

Outcome criterion1() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    bool ok = true;
    for (int l = 3; l <= 8; ++l) {
        const auto r = verify(build_spin_m_level2(l));
        ok = ok && r.passed();
        for (const char* name : {"S unitary", "TSTST=S", "S^2=C permutation", "TC=CT", "|sigma|^2=sum d^2"})
            worst = std::max(worst, r.find(name).deviation);
    }
    const double secs = seconds_since(t0);
    ok = ok && worst < 1e-9 && secs < 5.0;
    std::ostringstream os;
    os << "spin_level2 l=3..8 verified, max relation deviation " << worst << ", " << secs << " s";
    return {ok, os.str()};
}

Outcome criterion2() {
    bool ok = true;
    std::ostringstream bad;
    for (int l = 3; l <= 8; ++l) {
        for (bool spin : {true, false}) {
            const ModularData md = spin ? build_spin_m_level2(l) : build_orbifold_u1(l);
            if (!near_integers(md, 1e-6)) {
                ok = false;
                bad << " " << md.name() << ":integrality";
                continue;
            }
            const FusionRing r = verlinde_fusion(md);
            for (const auto& f : spin_fusion_facts(l, spin)) {
                if (!single_product(r, md.index_of(f.a), md.index_of(f.b), md.index_of(f.c))) {
                    ok = false;
                    bad << " " << md.name() << ":" << f.a << "x" << f.b;
                }
            }
        }
    }
    return {ok, ok ? "both families l=3..8, odd and even relations hold" : "violations:" + bad.str()};
}

Outcome criterion3() {
    bool ok = true;
    std::ostringstream os;
    for (int l = 3; l <= 6; ++l) {
        const auto t0 = Clock::now();
        const SolveResult r = solve(spin_problem(l));
        const double secs = seconds_since(t0);
        double dev = std::numeric_limits<double>::infinity();
        if (r.solutions.size() == 1) dev = deviation_up_to_twisted(r.solutions[0].data, build_spin_m_level2(l), l);
        const bool good = r.solutions.size() == 1 && dev < 1e-9 && secs < 60.0;
        ok = ok && good;
        os << " l=" << l << ": " << r.solutions.size() << " sol, dev " << dev << ", " << secs << " s;";
    }
    return {ok, os.str()};
}

Outcome criterion4() {
    double worst = 0.0;
    bool ok = true;
    for (int l = 3; l <= 8; ++l) {
        const auto r = verify_intertwining(build_su_m_level1(l), build_spin_m_level2(l), branching_su_to_spin(l));
        ok = ok && r.passed();
        worst = std::max(worst, max_check_deviation(r));
    }
    ok = ok && worst < 1e-9;
    std::ostringstream os;
    os << "l=3..8, max deviation " << worst;
    return {ok, os.str()};
}

Outcome criterion5() {
    bool ok = true;
    std::ostringstream os;
    for (int l = 2; l <= 8; ++l) {
        const double mu_u = global_dimension(build_u1(2 * l));
        const double mu_o = global_dimension(build_orbifold_u1(l));
        const double mu_g = mu_orbifold(2.0 * l, 2);
        const bool good = std::abs(mu_u - 2 * l) < 1e-9 && std::abs(mu_o - 8 * l) < 1e-9 && std::abs(mu_g - 8 * l) < 1e-9;
        if (!good) os << " l=" << l << ": " << mu_u << "," << mu_o << "," << mu_g;
        ok = ok && good;
    }
    return {ok, ok ? "mu(u1(2l)) = 2l, mu(orbifold) = 8l = |G|^2 * 2l for l=2..8" : os.str()};
}

Outcome criterion6() {
    bool ok = true;
    std::ostringstream os;
    for (int l = 3; l <= 8; ++l) {
        const long long w = dim_w(branching_su_to_spin(l));
        os << w << (l < 8 ? "," : "");
        ok = ok && w == 2 * l + 2;
    }
    return {ok, "dim W for l=3..8: " + os.str()};
}

Outcome criterion7() {
    bool ok = true;
    std::ostringstream os;
    for (int l = 3; l <= 8; ++l) {
        const Rational co = central_charge_mod8(build_orbifold_u1(l));
        const Rational cs = central_charge_mod8(build_spin_m_level2(l));
        const Rational want((2 * l - 1) % 8);
        const bool phases = c_phase_check(build_su_m_level1(l), build_spin_m_level2(l)) &&
                            c_phase_check(build_u1(2 * l), build_orbifold_u1(l));
        const bool good = co == Rational(1) && cs == want && phases;
        if (!good) os << " l=" << l << ": c=" << to_string(co) << "/" << to_string(cs);
        ok = ok && good;
    }
    return {ok, ok ? "c = 1 (orbifold), 2l-1 mod 8 (level 2), C^3 matches for both pairs, l=3..8" : os.str()};
}

Outcome criterion8() {
    bool ok = true;
    std::ostringstream os;
    for (int l = 3; l <= 8; ++l) {
        for (bool spin : {true, false}) {
            const ModularData md = spin ? build_spin_m_level2(l) : build_orbifold_u1(l);
            const BranchingTable b = spin ? branching_su_to_spin(l) : branching_u1_to_orbifold(l);
            const auto c = classify_sectors(md, b);
            bool dims = true;
            for (std::size_t i = 0; i < c.twisted.size(); ++i)
                if (c.twisted[i]) dims = dims && std::abs(md.dims()(static_cast<Eigen::Index>(i)) - std::sqrt(double(l))) < 1e-9;
            const bool good = c.twisted_count() == 4 && dims && c.strict_inequality;
            if (!good) os << " " << md.name();
            ok = ok && good;
        }
    }
    return {ok, ok ? "4 twisted sectors of dimension sqrt(l), untwisted sum d^2 < mu, l=3..8" : "failed:" + os.str()};
}

Outcome criterion9() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "modcat_acceptance";
    fs::create_directories(dir);
    const std::string a = (dir / "u1_2.json").string(), b = (dir / "a1_1.json").string();
    std::ostringstream out, err;
    int rc = cli::run({"build", "u1", "2", "-o", a}, out, err);
    rc = std::max(rc, cli::run({"build", "a1", "1", "-o", b}, out, err));
    const int cmp = rc == 0 ? cli::run({"compare", a, b}, out, err) : rc;
    fs::remove_all(dir);
    // the SU(2)_1 x SU(2)_1 / SU(2)_2 coset is Ising-type, with the same mu as a1(2)
    const double mu2 = global_dimension(build_a1_level_k(2)), mu1 = global_dimension(build_a1_level_k(1));
    const bool mu = mu_product_identity(16, 2, 4) && mu_product_identity(mu2 * mu2, 2, mu1 * mu1);
    std::ostringstream os;
    os << "compare u1 2 / a1 1 exit " << cmp << ", mu product identity " << (mu ? "holds" : "fails");
    return {cmp == 0 && mu, os.str()};
}

FamilySpec random_spec(std::mt19937& rng) {
    switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
        case 0: return {Family::U1, 2 * std::uniform_int_distribution<int>(1, 8)(rng)};
        case 1: return {Family::SUM1, std::uniform_int_distribution<int>(3, 8)(rng)};
        case 2: return {Family::SPINM2, std::uniform_int_distribution<int>(3, 8)(rng)};
        case 3: return {Family::ORBIFOLD_U1, std::uniform_int_distribution<int>(2, 8)(rng)};
        default: return {Family::A1, std::uniform_int_distribution<int>(1, 8)(rng)};
    }
}

Outcome criterion10() {
    std::mt19937 rng(20240611);  // fixed so reruns sample the same theories
    int cases = 0, failures = 0;
    for (int t = 0; t < 40; ++t) {
        const ModularData md = build_family(random_spec(rng));
        ++cases;
        const FusionRing r = verlinde_fusion(md);
        const auto c = conjugation(md);
        bool ok = r.associativity_defect() == 0 && c[md.vacuum()] == md.vacuum();
        for (std::size_t i = 0; i < c.size(); ++i) ok = ok && c[c[i]] == i;
        failures += ok ? 0 : 1;
    }
    for (int t = 0; t < 20;) {
        const ModularData a = build_family(random_spec(rng)), b = build_family(random_spec(rng));
        if (a.size() * b.size() > 36) continue;
        ++t;
        ++cases;
        failures += verify(tensor_product(a, b)).passed() ? 0 : 1;
    }
    std::ostringstream os;
    os << cases - failures << "/" << cases << " sampled cases pass";
    return {failures == 0, os.str()};
}

}  // namespace

int main() {
    const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                         criterion6, criterion7, criterion8, criterion9, criterion10};
    int failed = 0;
    std::cout << std::setprecision(3);
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << o.detail << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
