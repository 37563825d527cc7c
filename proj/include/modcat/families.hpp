#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "modcat/affine_weights.hpp"
#include "modcat/mtc_core.hpp"

namespace modcat {

enum class Family { U1, SUM1, SPINM2, ORBIFOLD_U1, A1 };

struct FamilySpec {
    Family family = Family::U1;
    int param = 2;
};

inline std::string family_name(Family f) {
    switch (f) {
        case Family::U1: return "u1";
        case Family::SUM1: return "su_level1";
        case Family::SPINM2: return "spin_level2";
        case Family::ORBIFOLD_U1: return "orbifold_u1";
        case Family::A1: return "a1";
    }
    return "?";
}

inline Family parse_family(const std::string& name) {
    for (Family f : {Family::U1, Family::SUM1, Family::SPINM2, Family::ORBIFOLD_U1, Family::A1})
        if (family_name(f) == name) return f;
    throw InputError("unknown family '" + name + "' (expected u1, su_level1, spin_level2, orbifold_u1, a1)");
}

inline void validate(const FamilySpec& spec) {
    const int p = spec.param;
    const std::string who = family_name(spec.family) + " " + std::to_string(p);
    switch (spec.family) {
        case Family::U1:
            if (p < 2 || p % 2 != 0) throw InputError(who + ": parameter must be even and >= 2");
            break;
        case Family::SUM1:
        case Family::SPINM2:
            if (p < 3) throw InputError(who + ": parameter l must be >= 3");
            break;
        case Family::ORBIFOLD_U1:
            if (p < 2) throw InputError(who + ": parameter l must be >= 2");
            break;
        case Family::A1:
            if (p < 1) throw InputError(who + ": level must be >= 1");
            break;
    }
}

/// Free-form record of the choices a constructor made, losers included.
struct ConstructionLog {
    std::vector<std::string> lines;
    void add(std::string s) { lines.push_back(std::move(s)); }
};

inline void log_to(ConstructionLog* log, const std::string& s) {
    if (log) log->add(s);
}

struct TwistCandidate {
    std::string name;
    ComplexVector twists;
};

struct CalibrationEntry {
    std::string name;
    double tstst_deviation = 0.0;
    double conjugation_deviation = 0.0;  // max |ω_i − ω_ī|
    bool accepted = false;
};

struct CalibrationReport {
    std::vector<CalibrationEntry> entries;
    std::size_t winner = 0;

    std::string to_string() const {
        std::ostringstream os;
        for (const auto& e : entries)
            os << (e.accepted ? "  accepted  " : "  rejected  ") << e.name << "  TSTST-S " << std::scientific
               << std::setprecision(3) << e.tstst_deviation << "  TC-CT " << e.conjugation_deviation << "\n";
        return os.str();
    }
};

class CalibrationError : public Error {
  public:
    CalibrationError(const std::string& what, CalibrationReport r) : Error(what + "\n" + r.to_string()), report(std::move(r)) {}
    CalibrationReport report;
};

/// e^{i arg(σ̃)/3} for the dims read off S and the given twists.
inline Complex principal_phase(const ComplexMatrix& s, const ComplexVector& twists, std::size_t vacuum = 0) {
    const auto v = static_cast<Eigen::Index>(vacuum);
    RealVector d(s.rows());
    for (Eigen::Index i = 0; i < s.rows(); ++i) d(i) = (s(i, v) / s(v, v)).real();
    const Complex sigma = sigma_tilde(d, twists);
    if (std::abs(sigma) < 1e-12) throw DegenerateData("sigma-tilde vanishes");
    return std::polar(1.0, principal_arg(sigma) / 3.0);
}

/// Picks the unique candidate whose twists satisfy TSTST=S and TC=CT; throws on zero or several winners.
inline std::pair<std::size_t, CalibrationReport> twist_calibration(const ComplexMatrix& s,
                                                                   const std::vector<TwistCandidate>& candidates,
                                                                   const Tolerances& tol = {}) {
    if (candidates.empty()) throw InputError("twist calibration needs at least one candidate");
    const auto n = s.rows();
    CalibrationReport rep;
    std::vector<std::size_t> winners;
    const ComplexMatrix s2 = s * s;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const auto& cand = candidates[c];
        if (cand.twists.size() != n) throw DimensionMismatch("candidate '" + cand.name + "' has wrong length");
        CalibrationEntry e;
        e.name = cand.name;
        Complex phase = 1.0;
        try {
            phase = principal_phase(s, cand.twists);
            ComplexMatrix t = ComplexMatrix::Zero(n, n);
            for (Eigen::Index i = 0; i < n; ++i) t(i, i) = phase * cand.twists(i);
            e.tstst_deviation = (t * s * t * s * t - s).cwiseAbs().maxCoeff();
        } catch (const DegenerateData&) {
            e.tstst_deviation = std::numeric_limits<double>::infinity();
        }
        double cdev = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                if (std::abs(s2(i, j)) > 0.5) cdev = std::max(cdev, std::abs(cand.twists(i) - cand.twists(j)));
        e.conjugation_deviation = cdev;
        e.accepted = e.tstst_deviation <= tol.relation && cdev <= tol.relation;
        if (e.accepted) winners.push_back(c);
        rep.entries.push_back(e);
    }
    if (winners.size() != 1)
        throw CalibrationError(winners.empty() ? "twist calibration: no candidate satisfies TSTST=S"
                                               : "twist calibration: several candidates satisfy TSTST=S",
                               rep);
    rep.winner = winners.front();
    return {rep.winner, rep};
}

inline ComplexVector twists_from_weights(const std::vector<Rational>& h) {
    ComplexVector w(static_cast<Eigen::Index>(h.size()));
    for (std::size_t i = 0; i < h.size(); ++i)
        w(static_cast<Eigen::Index>(i)) = unit_phase(boost::rational_cast<double>(h[i]));
    return w;
}

namespace detail {

inline ComplexVector calibrate(const ComplexMatrix& s, const std::vector<TwistCandidate>& cands,
                               const std::string& who, ConstructionLog* log) {
    auto [win, rep] = twist_calibration(s, cands);
    log_to(log, who + ": twist calibration (arbiter TSTST=S), winner '" + cands[win].name + "'");
    for (const auto& e : rep.entries) {
        std::ostringstream os;
        os << "  " << (e.accepted ? "accepted " : "rejected ") << e.name << "  TSTST-S deviation " << std::scientific
           << std::setprecision(3) << e.tstst_deviation;
        log_to(log, os.str());
    }
    return cands[win].twists;
}

inline ComplexMatrix cyclic_s(int n, int sign) {
    ComplexMatrix s(n, n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) s(a, b) = norm * unit_phase(sign * static_cast<double>((a * b) % n) / n);
    return s;
}

}  // namespace detail

/// U(1)_n lattice theory: S_{kk'} = n^{-1/2} e^{-2πikk'/n}, twists calibrated among h = k²/(2n), k²/(4n).
inline ModularData build_u1(int n, ConstructionLog* log = nullptr) {
    validate({Family::U1, n});
    const ComplexMatrix s = detail::cyclic_s(n, -1);
    std::vector<Rational> lattice, halved;
    std::vector<std::string> names;
    for (int k = 0; k < n; ++k) {
        lattice.emplace_back(k * k, 2 * n);
        halved.emplace_back(k * k, 4 * n);
        names.push_back(std::to_string(k));
    }
    const std::string who = "u1(" + std::to_string(n) + ")";
    const ComplexVector tw = detail::calibrate(
        s, {{"h=k^2/(2n)", twists_from_weights(lattice)}, {"h=k^2/(4n)", twists_from_weights(halved)}}, who, log);
    return ModularData(who, names, 0, s, tw, principal_phase(s, tw));
}

/// SU(2l)_1: S_{kk'} = (2l)^{-1/2} e^{+2πikk'/2l}, twists calibrated among h = k(2l−k)/(4l), k²/(4l).
inline ModularData build_su_m_level1(int l, ConstructionLog* log = nullptr) {
    validate({Family::SUM1, l});
    const int n = 2 * l;
    const ComplexMatrix s = detail::cyclic_s(n, +1);
    std::vector<Rational> weight, lattice;
    std::vector<std::string> names;
    for (int k = 0; k < n; ++k) {
        weight.emplace_back(k * (n - k), 2 * n);
        lattice.emplace_back(k * k, 2 * n);
        names.push_back("Lambda~_" + std::to_string(k));
    }
    const std::string who = "su_level1(" + std::to_string(l) + ")";
    const ComplexVector tw = detail::calibrate(
        s, {{"h=k(M-k)/(2M)", twists_from_weights(weight)}, {"h=k^2/(2M)", twists_from_weights(lattice)}}, who, log);
    return ModularData(who, names, 0, s, tw, principal_phase(s, tw));
}

/// Canonical positions in the l+7 sector list shared by the level-2 and orbifold families.
struct SpinIndex {
    int l;
    std::size_t one() const { return 0; }
    std::size_t j() const { return 1; }
    std::size_t phi_l(int i) const { return static_cast<std::size_t>(1 + i); }       // i = 1, 2
    std::size_t phi(int k) const { return static_cast<std::size_t>(3 + k); }         // 1 <= k <= l-1
    std::size_t sigma(int i) const { return static_cast<std::size_t>(l + 2 + i); }   // i = 1, 2
    std::size_t tau(int i) const { return static_cast<std::size_t>(l + 4 + i); }     // i = 1, 2
    std::size_t size() const { return static_cast<std::size_t>(l + 7); }
};

inline std::vector<std::string> spin_label_names(int l, bool hatted) {
    const std::string p = hatted ? "hat_" : "";
    std::vector<std::string> n{p + "1", p + "j", p + "phi_l^1", p + "phi_l^2"};
    for (int k = 1; k < l; ++k) n.push_back(p + "phi_" + std::to_string(k));
    for (const char* t : {"sigma_1", "sigma_2", "tau_1", "tau_2"}) n.push_back(p + t);
    return n;
}

/// √(8l)·S table for the level-2 / orbifold theories; cos_divisor selects cos(πkk'/(cos_divisor·l)),
/// b_sign multiplies the φ_l^i-σ_j / φ_l^i-τ_j block.
inline ComplexMatrix spin_table(int l, int cos_divisor = 1, double b_sign = 1.0) {
    const SpinIndex x{l};
    const auto n = static_cast<Eigen::Index>(x.size());
    ComplexMatrix t = ComplexMatrix::Zero(n, n);
    const double sl = std::sqrt(static_cast<double>(l));
    const Complex e = std::polar(1.0, kPi * l / 2.0);
    const double sgn_l = (l % 2 == 0) ? 1.0 : -1.0;
    auto a = [&](int i, int j) { return std::sqrt(l / 2.0) * (1.0 + (i == j ? 1.0 : -1.0) * std::conj(e)); };
    auto b = [&](int i, int j) { return b_sign * ((l + (i == j ? 1 : 0)) % 2 == 0 ? 1.0 : -1.0) * sl * e; };
    auto set = [&](std::size_t r, std::size_t c, Complex v) {
        t(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
        t(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r)) = v;
    };
    const std::size_t heads[4] = {x.one(), x.j(), x.phi_l(1), x.phi_l(2)};
    for (std::size_t r : heads)
        for (std::size_t c : heads) set(r, c, 1.0);
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) set(x.phi_l(i), x.phi_l(j), sgn_l);
    for (int k = 1; k < l; ++k) {
        set(x.one(), x.phi(k), 2.0);
        set(x.j(), x.phi(k), 2.0);
        for (int i = 1; i <= 2; ++i) set(x.phi_l(i), x.phi(k), k % 2 == 0 ? 2.0 : -2.0);
        for (int k2 = 1; k2 < l; ++k2)
            set(x.phi(k), x.phi(k2), 4.0 * std::cos(kPi * k * k2 / (static_cast<double>(cos_divisor) * l)));
    }
    for (int i = 1; i <= 2; ++i) {
        for (std::size_t c : {x.sigma(i), x.tau(i)}) {
            set(x.one(), c, sl);
            set(x.j(), c, -sl);
        }
        for (int j = 1; j <= 2; ++j) {
            set(x.phi_l(i), x.sigma(j), b(i, j));
            set(x.phi_l(i), x.tau(j), b(i, j));
            set(x.sigma(i), x.sigma(j), a(i, j));
            set(x.tau(i), x.tau(j), a(i, j));
            set(x.sigma(i), x.tau(j), -a(i, j));
        }
    }
    return t;
}

/// Level-2 weights of the sectors in canonical order (l >= 3).
inline std::vector<AffineWeight> spin_level2_weights(int l) {
    require_rank(l);
    auto L = [l](int i, int m = 1) { return fundamental(l, i, m); };
    std::vector<AffineWeight> w{L(0, 2), L(1, 2), L(l - 1, 2), L(l, 2)};
    w.push_back(L(0) + L(1));
    for (int k = 2; k <= l - 2; ++k) w.push_back(L(k));
    w.push_back(L(l - 1) + L(l));
    w.push_back(L(0) + L(l - 1));  // sigma_1
    w.push_back(L(0) + L(l));      // sigma_2
    w.push_back(L(1) + L(l));      // tau_1
    w.push_back(L(1) + L(l - 1));  // tau_2
    return w;
}

/// Triples (J, x, J·x) for the simple currents J ∈ {ĵ, φ̂_l^1, φ̂_l^2} acting on the four heads and the twisted
/// sectors, read off the diagram automorphisms acting on the level-2 weights. Rank 2 borrows rank 4, which has
/// the same centre and the same index pattern on these sectors.
inline std::vector<std::array<std::size_t, 3>> spin_current_action(int l) {
    const int r = l >= 3 ? l : 4;
    const auto w = spin_level2_weights(r);
    const SpinIndex xr{r}, xl{l};
    auto index = [&](const AffineWeight& a) {
        const auto it = std::find(w.begin(), w.end(), a);
        if (it == w.end()) throw DegenerateData("automorphism image " + a.to_string() + " is not a listed sector");
        const auto i = static_cast<std::size_t>(it - w.begin());
        return i < 4 ? i : i - xr.sigma(1) + xl.sigma(1);
    };
    std::vector<std::size_t> moved{0, 1, 2, 3, xr.sigma(1), xr.sigma(2), xr.tau(1), xr.tau(2)};
    std::vector<std::array<std::size_t, 3>> out;
    const auto g = automorphism_group(r);
    for (std::size_t e = 1; e < g.order(); ++e) {
        const std::size_t cur = index(apply_node_permutation(g.elements[e], w[0]));
        for (std::size_t x : moved)
            out.push_back({cur, index(w[x]), index(apply_node_permutation(g.elements[e], w[x]))});
    }
    return out;
}

/// max |S_{Jx,m} S_{0,m} − S_{J,m} S_{x,m}| over the current triples: zero iff J × x = Jx for every triple.
inline double current_action_deviation(const ComplexMatrix& s, const std::vector<std::array<std::size_t, 3>>& triples) {
    double dev = 0.0;
    for (const auto& [cur, x, y] : triples)
        for (Eigen::Index m = 0; m < s.cols(); ++m) {
            auto at = [&](std::size_t i) { return s(static_cast<Eigen::Index>(i), m); };
            dev = std::max(dev, std::abs(at(y) * at(0) - at(cur) * at(x)));
        }
    return dev;
}

/// Unitary normalized table. The cosine argument is decided by unitarity, the sign of the b block by the
/// simple-current action of the diagram automorphisms.
inline ComplexMatrix spin_s_matrix(int l, const std::string& who, ConstructionLog* log) {
    const double norm = 1.0 / std::sqrt(8.0 * l);
    std::vector<std::pair<int, double>> dev;
    for (int div : {1, 2}) {
        const ComplexMatrix s = spin_table(l, div) * norm;
        dev.emplace_back(div, (s * s.adjoint() - ComplexMatrix::Identity(s.rows(), s.cols())).cwiseAbs().maxCoeff());
    }
    std::ostringstream os;
    os << who << ": phi_k/phi_k' entry 4cos(pi k k'/l) unitarity deviation " << std::scientific << std::setprecision(3)
       << dev[0].second << "; 4cos(pi k k'/(2l)) deviation " << dev[1].second;
    log_to(log, os.str());
    const Tolerances tol;
    const bool ok1 = dev[0].second <= tol.relation, ok2 = dev[1].second <= tol.relation;
    if (ok1 == ok2) throw DegenerateData(who + ": cannot decide the cosine variant by unitarity");
    const int div = ok1 ? 1 : 2;
    log_to(log, who + ": using cos(pi k k'/" + std::string(div == 1 ? "l" : "2l") + ")");

    const auto triples = spin_current_action(l);
    const double tabulated = current_action_deviation(spin_table(l, div, 1.0) * norm, triples);
    const double flipped = current_action_deviation(spin_table(l, div, -1.0) * norm, triples);
    const bool ok_p = tabulated <= tol.relation, ok_f = flipped <= tol.relation;
    if (ok_p == ok_f) throw DegenerateData(who + ": cannot decide the sign of b_ij from the simple currents");
    std::ostringstream ps, fs;
    ps << std::scientific << std::setprecision(3) << tabulated;
    fs << std::scientific << std::setprecision(3) << flipped;
    log_to(log, who + ": sign of b_ij (arbiter: diagram automorphisms as simple currents), winner '" +
                    std::string(ok_p ? "tabulated b_ij" : "b_ij with opposite sign") + "'");
    log_to(log, std::string(ok_p ? "  accepted" : "  rejected") + " tabulated b_ij = (-1)^(l+delta_ij) sqrt(l) e^(pi i l/2)"
                    "  current-action deviation " + ps.str());
    log_to(log, std::string(ok_f ? "  accepted" : "  rejected") + " b_ij with opposite sign  current-action deviation " +
                    fs.str());
    return spin_table(l, div, ok_p ? 1.0 : -1.0) * norm;
}

/// Spin(2l)_2 modular data with T-phase exp(−πi(2l−1)/12).
inline ModularData build_spin_m_level2(int l, ConstructionLog* log = nullptr) {
    validate({Family::SPINM2, l});
    const std::string who = "spin_level2(" + std::to_string(l) + ")";
    const SpinIndex x{l};
    const ComplexMatrix s = spin_s_matrix(l, who, log);

    std::vector<Rational> tab(x.size());
    tab[x.one()] = 0;
    tab[x.j()] = 0;
    tab[x.phi_l(1)] = tab[x.phi_l(2)] = Rational(l, 4);
    for (int k = 1; k < l; ++k) tab[x.phi(k)] = Rational(k * (l - k), 8 * l);
    for (int i = 1; i <= 2; ++i) {
        tab[x.sigma(i)] = Rational(2 * l - 1, 16);
        tab[x.tau(i)] = Rational(2 * l - 1, 16) + Rational(1, 2);
    }
    std::vector<Rational> cw;
    for (const auto& w : spin_level2_weights(l)) cw.push_back(conformal_weight(w, 2));

    const ComplexVector tw = detail::calibrate(
        s,
        {{"tabulated h_phi_k = k(l-k)/(8l)", twists_from_weights(tab)},
         {"D_l level-2 conformal weights", twists_from_weights(cw)}},
        who, log);
    return ModularData(who, spin_label_names(l, true), 0, s, tw, std::polar(1.0, -kPi * (2 * l - 1) / 12.0));
}

/// The (Λ̇, Λ̈; Λ) triples naming the orbifold sectors, in canonical order (l >= 3).
inline std::vector<CosetLabel> orbifold_coset_labels(int l) {
    require_rank(l);
    auto L = [l](int i, int m = 1) { return fundamental(l, i, m); };
    const AffineWeight d0 = L(0);
    const AffineWeight phi_l_second = (l % 2 == 0) ? L(0) : L(1);
    std::vector<CosetLabel> c{{d0, L(0), L(0, 2)},
                              {d0, L(0), L(1, 2)},
                              {d0, phi_l_second, L(l - 1, 2)},
                              {d0, phi_l_second, L(l, 2)}};
    for (int k = 1; k < l; ++k) {
        const AffineWeight target = (k == 1) ? L(0) + L(1) : (k == l - 1) ? L(l - 1) + L(l) : L(k);
        c.push_back({d0, L(k % 2), target});
    }
    c.push_back({d0, L(l - 1), L(0) + L(l - 1)});  // sigma_1
    c.push_back({d0, L(l), L(0) + L(l)});          // sigma_2
    c.push_back({d0, L(l - 1), L(1) + L(l)});      // tau_1
    c.push_back({d0, L(l), L(1) + L(l - 1)});      // tau_2
    return c;
}

/// Checks that the named triples obey the selection rule and sit in distinct free orbits.
inline void check_orbifold_labels(int l, ConstructionLog* log = nullptr) {
    const auto named = orbifold_coset_labels(l);
    const auto group = automorphism_group(l);
    const auto all = orbits(enumerate_coset_labels(l), group);
    std::set<CosetLabel> reps;
    for (const auto& c : named) {
        if (!selection_rule(c)) throw DegenerateData("label " + c.to_string() + " violates the selection rule");
        const Orbit& o = orbit_of(all, c);
        if (has_fixed_points(o, group)) throw DegenerateData("orbit of " + c.to_string() + " has fixed points");
        if (!reps.insert(o.representative).second) throw DegenerateData("two labels share the orbit of " + c.to_string());
    }
    log_to(log, "orbifold_u1(" + std::to_string(l) + "): " + std::to_string(named.size()) +
                    " labels in distinct free orbits out of " + std::to_string(all.size()));
}

/// Z2 orbifold of U(1)_{2l}: same S as the level-2 table, T-phase exp(−πi/12).
inline ModularData build_orbifold_u1(int l, ConstructionLog* log = nullptr) {
    validate({Family::ORBIFOLD_U1, l});
    const std::string who = "orbifold_u1(" + std::to_string(l) + ")";
    const SpinIndex x{l};
    const ComplexMatrix s = spin_s_matrix(l, who, log);

    auto base = [&](auto phi_weight) {
        std::vector<Rational> h(x.size());
        h[x.one()] = 0;
        h[x.j()] = 0;
        h[x.phi_l(1)] = h[x.phi_l(2)] = Rational(l, 4);
        for (int k = 1; k < l; ++k) h[x.phi(k)] = phi_weight(k);
        for (int i = 1; i <= 2; ++i) {
            h[x.sigma(i)] = Rational(1, 16);
            h[x.tau(i)] = Rational(9, 16);
        }
        return h;
    };
    const auto tab = base([&](int k) { return Rational(k * k, 8 * l); });
    std::vector<TwistCandidate> cands{{"tabulated h_phi_k = k^2/(8l)", twists_from_weights(tab)}};
    if (l >= 3) {
        check_orbifold_labels(l, log);
        std::vector<Rational> cw;
        for (const auto& c : orbifold_coset_labels(l)) cw.push_back(coset_conformal_weight(c));
        cands.push_back({"coset conformal weights", twists_from_weights(cw)});
    } else {
        cands.push_back({"lattice orbifold weights k^2/(4l), 1/16, 9/16",
                         twists_from_weights(base([&](int k) { return Rational(k * k, 4 * l); }))});
    }
    const ComplexVector tw = detail::calibrate(s, cands, who, log);
    return ModularData(who, spin_label_names(l, false), 0, s, tw, std::polar(1.0, -kPi / 12.0));
}

/// SU(2)_k: S_{ab} = √(2/(k+2)) sin(π(a+1)(b+1)/(k+2)), h_a = a(a+2)/(4(k+2)).
inline ModularData build_a1_level_k(int k, ConstructionLog* log = nullptr) {
    validate({Family::A1, k});
    const auto n = static_cast<Eigen::Index>(k + 1);
    ComplexMatrix s(n, n);
    std::vector<Rational> h;
    std::vector<std::string> names;
    const double norm = std::sqrt(2.0 / (k + 2));
    for (int a = 0; a <= k; ++a) {
        for (int b = 0; b <= k; ++b) s(a, b) = norm * std::sin(kPi * (a + 1) * (b + 1) / (k + 2));
        h.emplace_back(a * (a + 2), 4 * (k + 2));
        names.push_back(std::to_string(a));
    }
    const ComplexVector tw = twists_from_weights(h);
    log_to(log, "a1(" + std::to_string(k) + "): standard sine S-matrix, h_a = a(a+2)/(4(k+2))");
    return ModularData("a1(" + std::to_string(k) + ")", names, 0, s, tw, principal_phase(s, tw));
}

inline ModularData build_family(const FamilySpec& spec, ConstructionLog* log = nullptr) {
    switch (spec.family) {
        case Family::U1: return build_u1(spec.param, log);
        case Family::SUM1: return build_su_m_level1(spec.param, log);
        case Family::SPINM2: return build_spin_m_level2(spec.param, log);
        case Family::ORBIFOLD_U1: return build_orbifold_u1(spec.param, log);
        case Family::A1: return build_a1_level_k(spec.param, log);
    }
    throw InputError("unknown family");
}

/// One-label theory.
inline ModularData trivial_theory() {
    return ModularData("trivial", {"1"}, 0, ComplexMatrix::Ones(1, 1), ComplexVector::Ones(1), 1.0);
}

}  // namespace modcat
