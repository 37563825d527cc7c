#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "modcat/affine_weights.hpp"
#include "modcat/families.hpp"

using namespace modcat;

namespace {

AffineWeight L(int l, int i, int m = 1) { return fundamental(l, i, m); }

// Brute-force count of level-k weights: every coefficient vector in a box, filtered by the level equation.
int count_weights(int l, int k) {
    int count = 0;
    std::vector<int> c(static_cast<std::size_t>(l + 1), 0);
    while (true) {
        int lev = 0;
        for (int i = 0; i <= l; ++i) lev += c[static_cast<std::size_t>(i)] * ((i <= 1 || i >= l - 1) ? 1 : 2);
        if (lev == k) ++count;
        int p = 0;
        while (p <= l && ++c[static_cast<std::size_t>(p)] > k) c[static_cast<std::size_t>(p++)] = 0;
        if (p > l) break;
    }
    return count;
}

int fuse(const FusionRing& r, std::size_t a, std::size_t b, std::size_t c) { return r(a, b, c); }

// Single-term product a × b = c.
bool product_is(const FusionRing& r, std::size_t a, std::size_t b, std::size_t c) {
    for (std::size_t k = 0; k < r.rank(); ++k)
        if (fuse(r, a, b, k) != (k == c ? 1 : 0)) return false;
    return true;
}

}  // namespace

TEST(Weights, LevelOneRankFour) {
    const auto w = enumerate_weights(4, 1);
    ASSERT_EQ(w.size(), 4u);
    EXPECT_EQ(w[0], L(4, 0));
    EXPECT_EQ(w[1], L(4, 1));
    EXPECT_EQ(w[2], L(4, 3));
    EXPECT_EQ(w[3], L(4, 4));
}

TEST(Weights, LevelTwoCounts) {
    EXPECT_EQ(enumerate_weights(3, 2).size(), 10u);
    for (int l = 3; l <= 8; ++l) {
        EXPECT_EQ(static_cast<int>(enumerate_weights(l, 2).size()), l + 7);
        EXPECT_EQ(static_cast<int>(enumerate_weights(l, 2).size()), count_weights(l, 2));
        EXPECT_EQ(static_cast<int>(enumerate_weights(l, 3).size()), count_weights(l, 3));
    }
    EXPECT_EQ(enumerate_weights(5, 0).size(), 1u);
}

TEST(Weights, SortedAndLevelCorrect) {
    const auto w = enumerate_weights(6, 3);
    EXPECT_TRUE(std::is_sorted(w.begin(), w.end()));
    for (const auto& x : w) EXPECT_EQ(x.level(), 3);
    EXPECT_EQ(w.front(), L(6, 0, 3));
}

TEST(Weights, RankTooSmall) {
    EXPECT_THROW(enumerate_weights(2, 1), InputError);
    EXPECT_THROW(automorphism_group(2), InputError);
    EXPECT_THROW(enumerate_weights(4, -1), InputError);
}

TEST(Weights, Rendering) {
    EXPECT_EQ((L(4, 0, 2)).to_string(), "2Λ_0");
    EXPECT_EQ((L(4, 0) + L(4, 3)).to_string(), "Λ_0+Λ_3");
}

TEST(Automorphism, SpinorNodeImage) {
    for (int l = 3; l <= 8; ++l) EXPECT_EQ(diagram_automorphism(DiagramGenerator::s, L(l, 0)), L(l, l));
}

TEST(Automorphism, VectorGeneratorEven) {
    for (int l : {4, 6, 8}) EXPECT_EQ(diagram_automorphism(DiagramGenerator::v, L(l, 1, 2)), L(l, 0, 2));
    EXPECT_THROW(diagram_automorphism(DiagramGenerator::v, L(5, 0)), InputError);
}

TEST(Automorphism, OddRankOrderFourCycle) {
    for (int l : {3, 5, 7}) {
        AffineWeight w = L(l, 0);
        const std::vector<AffineWeight> expect{L(l, l), L(l, 1), L(l, l - 1), L(l, 0)};
        for (const auto& e : expect) {
            w = diagram_automorphism(DiagramGenerator::s, w);
            EXPECT_EQ(w, e) << l;
        }
    }
}

TEST(Automorphism, GroupStructure) {
    EXPECT_EQ(automorphism_group(4).structure, GroupStructure::Z2xZ2);
    EXPECT_EQ(automorphism_group(3).structure, GroupStructure::Z4);
    for (int l = 3; l <= 8; ++l) {
        const auto g = automorphism_group(l);
        ASSERT_EQ(g.order(), 4u);
        const auto& id = g.elements[0];
        // closure and element orders
        std::set<std::vector<int>> elems(g.elements.begin(), g.elements.end());
        int order_four = 0;
        for (const auto& a : g.elements) {
            for (const auto& b : g.elements) EXPECT_TRUE(elems.count(compose(a, b)));
            if (compose(a, a) != id) ++order_four;
        }
        EXPECT_EQ(order_four, l % 2 == 0 ? 0 : 2) << l;
        // A_s² is nontrivial exactly for odd l
        const auto s = node_permutation(DiagramGenerator::s, l);
        EXPECT_EQ(compose(s, s) == id, l % 2 == 0);
    }
}

TEST(Automorphism, BijectionOnWeights) {
    for (int l = 3; l <= 8; ++l)
        for (int k = 0; k <= 3; ++k) {
            const auto w = enumerate_weights(l, k);
            const std::set<std::vector<int>> src = [&] {
                std::set<std::vector<int>> s;
                for (const auto& x : w) s.insert(x.coeffs);
                return s;
            }();
            for (const auto& p : automorphism_group(l).elements) {
                std::set<std::vector<int>> img;
                for (const auto& x : w) {
                    const auto y = apply_node_permutation(p, x);
                    EXPECT_EQ(y.level(), k);
                    img.insert(y.coeffs);
                }
                EXPECT_EQ(img, src);
            }
        }
}

TEST(ConformalWeight, LevelOne) {
    for (int l = 3; l <= 8; ++l) {
        EXPECT_EQ(conformal_weight(L(l, 0), 1), Rational(0));
        EXPECT_EQ(conformal_weight(L(l, 1), 1), Rational(1, 2));
        EXPECT_EQ(conformal_weight(L(l, l), 1), Rational(l, 8));
        EXPECT_EQ(conformal_weight(L(l, l - 1), 1), Rational(l, 8));
    }
}

TEST(ConformalWeight, LevelTwoMiddleNodes) {
    // (Λ_k, Λ_k + 2ρ) = k(2l − k) for 2 ≤ k ≤ l − 2, divided by 2(2 + 2l − 2)
    for (int l = 4; l <= 8; ++l)
        for (int k = 2; k <= l - 2; ++k) EXPECT_EQ(conformal_weight(L(l, k), 2), Rational(k * (2 * l - k), 4 * l));
}

TEST(ConformalWeight, NonNegativeAndLevelChecked) {
    for (int l = 3; l <= 8; ++l)
        for (const auto& w : enumerate_weights(l, 2)) EXPECT_GE(conformal_weight(w, 2), Rational(0));
    EXPECT_THROW(conformal_weight(L(4, 0), 2), InputError);
}

TEST(RootLattice, Membership) {
    EXPECT_TRUE(in_root_lattice({0, 0, 0}));
    EXPECT_TRUE(in_root_lattice({2, 2, 0}));  // e_1 + e_2
    EXPECT_FALSE(in_root_lattice({2, 0, 0}));  // vector weight
    EXPECT_FALSE(in_root_lattice({1, 1, 1}));  // spinor
}

TEST(Orbits, DiagonalVacuumOrbit) {
    const int l = 4;
    const auto g = automorphism_group(l);
    const auto os = orbits(enumerate_coset_labels(l), g);
    const CosetLabel vac{L(l, 0), L(l, 0), L(l, 0, 2)};
    EXPECT_EQ(orbit_of(os, vac).members.size(), 4u);
}

TEST(Orbits, FixedSingleton) {
    // a label built from weights invariant under every element does not exist for D_l level 1; use the
    // trivial group instead to get a size-one orbit
    AutomorphismGroup trivial{4, {}, GroupStructure::Z2xZ2, {{0, 1, 2, 3, 4}}};
    const CosetLabel c{L(4, 0), L(4, 0), L(4, 0, 2)};
    const auto os = orbits({c}, trivial);
    ASSERT_EQ(os.size(), 1u);
    EXPECT_EQ(os[0].members.size(), 1u);
}

TEST(Orbits, CountMatchesSectorCount) {
    for (int l = 3; l <= 8; ++l) {
        const auto labels = enumerate_coset_labels(l);
        const auto os = orbits(labels, automorphism_group(l));
        EXPECT_EQ(static_cast<int>(os.size()), l + 7) << l;
        // partition: disjoint and covering
        std::set<CosetLabel> seen;
        std::size_t total = 0;
        for (const auto& o : os) {
            EXPECT_EQ(o.representative, o.members.front());
            for (const auto& m : o.members) EXPECT_TRUE(seen.insert(m).second);
            total += o.members.size();
        }
        EXPECT_EQ(total, labels.size());
    }
}

TEST(Orbits, NotClosedRejected) {
    const CosetLabel c{L(4, 0), L(4, 0), L(4, 0, 2)};
    EXPECT_THROW(orbits({c}, automorphism_group(4)), InputError);
}

TEST(Orbits, NamedLabelsDistinctAndFree) {
    for (int l = 3; l <= 8; ++l) EXPECT_NO_THROW(check_orbifold_labels(l));
}

TEST(U1, Entries) {
    const auto md = build_u1(6);
    EXPECT_NEAR(std::abs(md.S()(2, 3) - 1 / std::sqrt(6.0)), 0.0, 1e-15);
    EXPECT_EQ(md.size(), 6u);
    EXPECT_THROW(build_u1(3), InputError);
    EXPECT_THROW(build_u1(0), InputError);
}

TEST(U1, TwoEqualsA1LevelOne) {
    const auto u = build_u1(2), a = build_a1_level_k(1);
    EXPECT_LT((u.S() - a.S()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((u.twists() - a.twists()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SuLevelOne, Basics) {
    const auto md = build_su_m_level1(3);
    EXPECT_EQ(md.size(), 6u);
    EXPECT_NEAR(global_dimension(md), 6.0, 1e-12);
    for (Eigen::Index k = 0; k < 6; ++k) EXPECT_NEAR(std::abs(md.S()(0, k) - 1 / std::sqrt(6.0)), 0.0, 1e-15);
    for (int l = 3; l <= 6; ++l) {
        const auto c = conjugation(build_su_m_level1(l));
        for (std::size_t k = 0; k < c.size(); ++k) EXPECT_EQ(c[k], (2 * l - k) % (2 * l));
    }
    EXPECT_EQ(md.label_names()[2], "Lambda~_2");
}

TEST(SpinLevelTwo, TableEntriesLevelThree) {
    const auto md = build_spin_m_level2(3);
    const auto i1 = md.index_of("hat_1"), s1 = md.index_of("hat_sigma_1");
    EXPECT_NEAR(std::abs(md.S()(static_cast<Eigen::Index>(i1), static_cast<Eigen::Index>(s1)) - 1 / (2 * std::sqrt(2.0))),
                0.0, 1e-15);
    EXPECT_NEAR(std::abs(md.S()(static_cast<Eigen::Index>(s1), static_cast<Eigen::Index>(s1)) - Complex(0.25, 0.25)),
                0.0, 1e-15);
}

TEST(SpinLevelTwo, MatchesClosedFormEntries) {
    // independent evaluation of the table by label name; the b block carries the sign fixed by the simple
    // currents (see TabulatedSignOfBContradictsCurrents)
    for (int l = 3; l <= 8; ++l) {
        const auto md = build_spin_m_level2(l);
        const double n = std::sqrt(8.0 * l);
        auto S = [&](const std::string& a, const std::string& b) {
            return md.S()(static_cast<Eigen::Index>(md.index_of("hat_" + a)),
                          static_cast<Eigen::Index>(md.index_of("hat_" + b))) * n;
        };
        const Complex e = std::exp(Complex(0, kPi * l / 2));
        const double sl = std::sqrt(double(l));
        for (int i = 1; i <= 2; ++i)
            for (int j = 1; j <= 2; ++j) {
                const Complex a = std::sqrt(l / 2.0) * (1.0 + double(2 * (i == j) - 1) * std::conj(e));
                const Complex b = -std::pow(-1.0, l + (i == j)) * sl * e;
                const std::string si = "sigma_" + std::to_string(i), sj = "sigma_" + std::to_string(j);
                const std::string ti = "tau_" + std::to_string(i), tj = "tau_" + std::to_string(j);
                const std::string pi = "phi_l^" + std::to_string(i);
                EXPECT_NEAR(std::abs(S(si, sj) - a), 0.0, 1e-12);
                EXPECT_NEAR(std::abs(S(ti, tj) - a), 0.0, 1e-12);
                EXPECT_NEAR(std::abs(S(si, tj) + a), 0.0, 1e-12);
                EXPECT_NEAR(std::abs(S(pi, sj) - b), 0.0, 1e-12);
                EXPECT_NEAR(std::abs(S(pi, tj) - b), 0.0, 1e-12);
            }
        for (int k = 1; k < l; ++k) {
            const std::string pk = "phi_" + std::to_string(k);
            EXPECT_NEAR(std::abs(S("1", pk) - 2.0), 0.0, 1e-12);
            EXPECT_NEAR(std::abs(S("phi_l^1", pk) - 2.0 * std::pow(-1.0, k)), 0.0, 1e-12);
            EXPECT_NEAR(std::abs(S(pk, "sigma_1")), 0.0, 1e-12);
            for (int k2 = 1; k2 < l; ++k2)
                EXPECT_NEAR(std::abs(S(pk, "phi_" + std::to_string(k2)) - 4 * std::cos(kPi * k * k2 / l)), 0.0, 1e-12);
        }
        EXPECT_NEAR(std::abs(S("1", "sigma_1") - sl), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(S("j", "tau_2") + sl), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(S("phi_l^1", "phi_l^2") - std::pow(-1.0, l)), 0.0, 1e-12);
    }
}

// Oracle: the level-2 weights σ_1 = Λ_0+Λ_{l-1}, τ_2 = Λ_1+Λ_{l-1}, φ_l^1 = 2Λ_{l-1}, and the centre acting by diagram
// automorphisms. For even l the automorphism Λ_0 -> Λ_{l-1} is A_sA_v, which fixes Λ_0+Λ_{l-1}; for odd l it is A_s^3,
// which sends Λ_0+Λ_{l-1} to Λ_{l-1}+Λ_1.
TEST(SpinLevelTwo, TabulatedSignOfBContradictsCurrents) {
    for (int l = 3; l <= 8; ++l) {
        const SpinIndex x{l};
        const std::size_t image = l % 2 == 0 ? x.sigma(1) : x.tau(2);
        const auto built = verlinde_fusion(build_spin_m_level2(l));
        EXPECT_TRUE(product_is(built, x.phi_l(1), x.sigma(1), image)) << l;
        const ComplexMatrix tabulated = spin_table(l, 1, 1.0) / std::sqrt(8.0 * l);
        const ModularData cap("tabulated", spin_label_names(l, true), 0, tabulated, build_spin_m_level2(l).twists(),
                              build_spin_m_level2(l).phase_c());
        EXPECT_FALSE(product_is(verlinde_fusion(cap), x.phi_l(1), x.sigma(1), image)) << l;
    }
    const auto g = automorphism_group(4);
    const auto w = spin_level2_weights(4);
    const SpinIndex x{4};
    bool fixes = false;
    for (const auto& e : g.elements)
        if (apply_node_permutation(e, w[0]) == w[x.phi_l(1)]) fixes = apply_node_permutation(e, w[x.sigma(1)]) == w[x.sigma(1)];
    EXPECT_TRUE(fixes);
}

TEST(SpinLevelTwo, SizeMuAndCentralCharge) {
    for (int l = 3; l <= 8; ++l) {
        const auto md = build_spin_m_level2(l);
        EXPECT_EQ(static_cast<int>(md.size()), l + 7);
        EXPECT_NEAR(global_dimension(md), 8.0 * l, 1e-9);
        EXPECT_EQ(central_charge_mod8(md), Rational((2 * l - 1) % 8));
        EXPECT_NEAR(std::abs(md.phase_c() - std::polar(1.0, -kPi * (2 * l - 1) / 12)), 0.0, 1e-15);
    }
    EXPECT_THROW(build_spin_m_level2(2), InputError);
}

TEST(SpinLevelTwo, LogRecordsBothVariants) {
    ConstructionLog log;
    build_spin_m_level2(5, &log);
    std::string all;
    for (const auto& l : log.lines) all += l + "\n";
    EXPECT_NE(all.find("4cos(pi k k'/(2l)) deviation"), std::string::npos);
    EXPECT_NE(all.find("using cos(pi k k'/l)"), std::string::npos);
    EXPECT_NE(all.find("accepted D_l level-2 conformal weights"), std::string::npos);
    EXPECT_NE(all.find("rejected tabulated"), std::string::npos);
    EXPECT_NE(all.find("rejected tabulated b_ij"), std::string::npos);
    EXPECT_NE(all.find("accepted b_ij with opposite sign"), std::string::npos);
}

TEST(SpinLevelTwo, TwistsAreLevelTwoConformalWeights) {
    for (int l = 3; l <= 8; ++l) {
        const auto md = build_spin_m_level2(l);
        const auto w = spin_level2_weights(l);
        for (std::size_t i = 0; i < w.size(); ++i)
            EXPECT_NEAR(std::abs(md.twists()(static_cast<Eigen::Index>(i)) -
                                 unit_phase(boost::rational_cast<double>(conformal_weight(w[i], 2)))),
                        0.0, 1e-12);
    }
}

TEST(SpinLevelTwo, FusionRelationsBothParities) {
    for (int l = 3; l <= 8; ++l) {
        const auto md = build_spin_m_level2(l);
        const FusionRing r = verlinde_fusion(md);
        const SpinIndex x{l};
        if (l % 2 == 0) {
            for (int k = 1; k <= 2; ++k) EXPECT_TRUE(product_is(r, x.j(), x.sigma(k), x.tau(k))) << l;
            EXPECT_TRUE(product_is(r, x.phi_l(1), x.phi_l(1), x.one()));
            EXPECT_TRUE(product_is(r, x.phi_l(2), x.phi_l(2), x.one()));
            EXPECT_TRUE(product_is(r, x.j(), x.j(), x.one()));
            EXPECT_TRUE(product_is(r, x.phi_l(1), x.sigma(1), x.sigma(1)));
            EXPECT_TRUE(product_is(r, x.phi_l(2), x.sigma(2), x.sigma(2)));
        } else {
            EXPECT_TRUE(product_is(r, x.phi_l(1), x.phi_l(1), x.j())) << l;
            EXPECT_TRUE(product_is(r, x.j(), x.phi_l(1), x.phi_l(2)));
            EXPECT_TRUE(product_is(r, x.phi_l(2), x.phi_l(1), x.one()));  // fourth power is the vacuum
            EXPECT_TRUE(product_is(r, x.phi_l(1), x.sigma(1), x.tau(2)));
        }
        EXPECT_TRUE(r.invariant_violations().empty()) << l;
    }
}

TEST(OrbifoldU1, SharesTableAndDims) {
    for (int l = 3; l <= 8; ++l) {
        const auto o = build_orbifold_u1(l);
        const auto s = build_spin_m_level2(l);
        EXPECT_LT((o.S() - s.S()).cwiseAbs().maxCoeff(), 1e-15);
        EXPECT_NEAR(global_dimension(o), 8.0 * l, 1e-9);
        EXPECT_EQ(static_cast<int>(o.size()), l + 7);
        const SpinIndex x{l};
        for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(o.dims()(static_cast<Eigen::Index>(i)), 1.0, 1e-12);
        for (int k = 1; k < l; ++k) EXPECT_NEAR(o.dims()(static_cast<Eigen::Index>(x.phi(k))), 2.0, 1e-12);
        for (int i = 1; i <= 2; ++i) {
            EXPECT_NEAR(o.dims()(static_cast<Eigen::Index>(x.sigma(i))), std::sqrt(double(l)), 1e-12);
            EXPECT_NEAR(o.dims()(static_cast<Eigen::Index>(x.tau(i))), std::sqrt(double(l)), 1e-12);
        }
        EXPECT_NEAR(std::abs(o.twists()(static_cast<Eigen::Index>(x.tau(1))) +
                             o.twists()(static_cast<Eigen::Index>(x.sigma(1)))),
                    0.0, 1e-12);
        EXPECT_NEAR(std::abs(o.twists()(static_cast<Eigen::Index>(x.sigma(1))) - unit_phase(1.0 / 16)), 0.0, 1e-12);
        EXPECT_EQ(central_charge_mod8(o), Rational(1));
        EXPECT_EQ(o.label_names()[0], "1");
    }
}

TEST(OrbifoldU1, FusionIntegralAndRelations) {
    for (int l = 3; l <= 8; ++l) {
        const FusionRing r = verlinde_fusion(build_orbifold_u1(l));
        EXPECT_TRUE(r.invariant_violations().empty());
        const SpinIndex x{l};
        if (l % 2 == 0) EXPECT_TRUE(product_is(r, x.j(), x.sigma(1), x.tau(1)));
        else EXPECT_TRUE(product_is(r, x.phi_l(1), x.phi_l(1), x.j()));
    }
}

TEST(OrbifoldU1, RankTwoVariant) {
    ConstructionLog log;
    const auto o = build_orbifold_u1(2, &log);
    EXPECT_TRUE(verify(o).passed());
    EXPECT_NEAR(global_dimension(o), 16.0, 1e-9);
}

TEST(A1, LevelTwoIsing) {
    const auto md = build_a1_level_k(2);
    EXPECT_NEAR(md.dims()(0), 1.0, 1e-12);
    EXPECT_NEAR(md.dims()(1), std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(md.dims()(2), 1.0, 1e-12);
    EXPECT_NEAR(global_dimension(md), 4.0, 1e-12);
    const FusionRing r = verlinde_fusion(md);
    EXPECT_EQ(r(1, 1, 0), 1);
    EXPECT_EQ(r(1, 1, 1), 0);
    EXPECT_EQ(r(1, 1, 2), 1);
    EXPECT_THROW(build_a1_level_k(0), InputError);
}

TEST(Calibration, U1SixPicksLatticeWeights) {
    const auto md = build_u1(6);
    std::vector<Rational> a, b;
    for (int k = 0; k < 6; ++k) {
        a.emplace_back(k * k, 12);
        b.emplace_back(k * k, 24);
    }
    const auto [win, rep] = twist_calibration(md.S(), {{"k^2/12", twists_from_weights(a)}, {"k^2/24", twists_from_weights(b)}});
    EXPECT_EQ(win, 0u);
    EXPECT_TRUE(rep.entries[0].accepted);
    EXPECT_FALSE(rep.entries[1].accepted);
    EXPECT_GT(rep.entries[1].tstst_deviation, 1e-3);
}

TEST(Calibration, SingleCorrectCandidate) {
    const auto md = build_a1_level_k(3);
    const auto [win, rep] = twist_calibration(md.S(), {{"only", md.twists()}});
    EXPECT_EQ(win, 0u);
    EXPECT_EQ(rep.entries.size(), 1u);
}

TEST(Calibration, NoWinnerThrowsWithReport) {
    const auto md = build_u1(6);
    try {
        twist_calibration(md.S(), {{"ones", ComplexVector::Ones(6)}});
        FAIL() << "expected CalibrationError";
    } catch (const CalibrationError& e) {
        ASSERT_EQ(e.report.entries.size(), 1u);
        EXPECT_FALSE(e.report.entries[0].accepted);
    }
}

TEST(Calibration, SeveralWinnersThrow) {
    const auto md = build_u1(4);
    EXPECT_THROW(twist_calibration(md.S(), {{"a", md.twists()}, {"b", md.twists()}}), CalibrationError);
}

TEST(Families, ParseAndValidate) {
    EXPECT_EQ(parse_family("orbifold_u1"), Family::ORBIFOLD_U1);
    EXPECT_THROW(parse_family("e8"), InputError);
    EXPECT_THROW(validate({Family::SUM1, 2}), InputError);
    EXPECT_EQ(build_family({Family::A1, 3}).size(), 4u);
}
