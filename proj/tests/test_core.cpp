#include <gtest/gtest.h>

#include <cmath>

#include "modcat/families.hpp"
#include "modcat/json_io.hpp"
#include "modcat/mtc_core.hpp"

using namespace modcat;

namespace {

// Group ring of Z_n with vacuum 0, conjugation k -> -k.
FusionRing cyclic_ring(int n) {
    std::vector<std::string> names;
    std::vector<std::size_t> conj;
    std::vector<int> c(static_cast<std::size_t>(n * n * n), 0);
    for (int k = 0; k < n; ++k) {
        names.push_back(std::to_string(k));
        conj.push_back(static_cast<std::size_t>((n - k) % n));
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) c[static_cast<std::size_t>((a * n + b) * n + (a + b) % n)] = 1;
    return FusionRing(make_labels(names), 0, conj, c);
}

FusionRing one_label_ring() { return FusionRing(make_labels({"1"}), 0, {0}, {1}); }

std::vector<ModularData> sample_theories() {
    std::vector<ModularData> out{trivial_theory()};
    for (int n : {2, 4, 6, 8}) out.push_back(build_u1(n));
    for (int l : {3, 4, 5}) {
        out.push_back(build_su_m_level1(l));
        out.push_back(build_spin_m_level2(l));
        out.push_back(build_orbifold_u1(l));
    }
    for (int k : {1, 2, 3, 4}) out.push_back(build_a1_level_k(k));
    return out;
}

}  // namespace

TEST(Labels, DuplicateNamesRejected) {
    EXPECT_THROW(make_labels({"a", "b", "a"}), InputError);
    const auto l = make_labels({"x", "y"});
    EXPECT_EQ(l[1].index, 1u);
    EXPECT_EQ(l[1].name, "y");
}

TEST(FusionRing, CyclicRingSatisfiesAxioms) {
    const FusionRing r = cyclic_ring(6);
    EXPECT_TRUE(r.invariant_violations().empty());
    EXPECT_EQ(r.associativity_defect(), 0);
    EXPECT_EQ(r(2, 5, 1), 1);
    EXPECT_EQ(r(2, 5, 0), 0);
}

TEST(FusionRing, BrokenUnitDetected) {
    std::vector<int> c{1, 0, 0, 1, 0, 1, 1, 0};  // Z_2
    c[(0 * 2 + 1) * 2 + 1] = 0;                  // N_{01}^1 = 0 breaks the unit
    const FusionRing r(make_labels({"0", "1"}), 0, {0, 1}, c);
    EXPECT_FALSE(r.invariant_violations().empty());
}

TEST(FusionRing, ShapeErrors) {
    EXPECT_THROW(FusionRing(make_labels({"0", "1"}), 0, {0, 1}, {1, 0}), DimensionMismatch);
    EXPECT_THROW(FusionRing(make_labels({"0"}), 3, {0}, {1}), DimensionMismatch);
}

TEST(YMatrix, OneLabelRing) {
    const YMatrix y = y_from_fusion(one_label_ring(), RealVector::Ones(1), ComplexVector::Ones(1));
    EXPECT_NEAR(std::abs(y.values(0, 0) - 1.0), 0.0, 1e-15);
}

TEST(YMatrix, SemionEntry) {
    // d = (1, 1), twists (1, i): Y_11 = i·i/1 · 1 = −1
    RealVector d(2);
    d << 1, 1;
    ComplexVector w(2);
    w << 1.0, Complex(0, 1);
    const YMatrix y = y_from_fusion(cyclic_ring(2), d, w);
    EXPECT_NEAR(std::abs(y.values(1, 1) - Complex(-1, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(y.values(1, 0) - 1.0), 0.0, 1e-15);
    EXPECT_THROW(y_from_fusion(cyclic_ring(3), d, w), DimensionMismatch);
}

TEST(YMatrix, VacuumColumnIsDims) {
    for (const auto& md : sample_theories()) {
        const FusionRing ring = verlinde_fusion(md);
        const YMatrix y = y_from_fusion(ring, md.dims(), md.twists());
        for (Eigen::Index i = 0; i < y.values.rows(); ++i)
            EXPECT_NEAR(std::abs(y.values(i, static_cast<Eigen::Index>(md.vacuum())) - md.dims()(i)), 0.0, 1e-9)
                << md.name();
    }
}

TEST(SigmaTilde, Values) {
    EXPECT_NEAR(std::abs(sigma_tilde(RealVector::Ones(1), ComplexVector::Ones(1)) - 1.0), 0.0, 1e-15);
    RealVector d(2);
    d << 1, 1;
    ComplexVector w(2);
    w << 1.0, Complex(0, 1);
    const Complex s = sigma_tilde(d, w);
    EXPECT_NEAR(std::abs(s - Complex(1, -1)), 0.0, 1e-15);
    EXPECT_NEAR(std::norm(s), 2.0, 1e-14);
    RealVector d3(3);
    d3 << 1, 2, 3;
    EXPECT_NEAR(std::abs(sigma_tilde(d3, ComplexVector::Ones(3)) - 14.0), 0.0, 1e-14);
}

TEST(Assemble, SemionPhaseAndS) {
    RealVector d(2);
    d << 1, 1;
    ComplexVector w(2);
    w << 1.0, Complex(0, 1);
    const ModularData md = assemble_modular("semion", cyclic_ring(2), d, w);
    EXPECT_NEAR(std::abs(md.phase_c() - std::polar(1.0, -kPi / 12)), 0.0, 1e-15);
    const double r = 1 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(md.S()(1, 1) + r), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(md.S()(0, 1) - r), 0.0, 1e-15);
    EXPECT_TRUE(verify(md).passed());
}

TEST(Assemble, OneLabel) {
    const ModularData md = assemble_modular("one", one_label_ring(), RealVector::Ones(1), ComplexVector::Ones(1));
    EXPECT_NEAR(std::abs(md.S()(0, 0) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(md.phase_c() - 1.0), 0.0, 1e-15);
}

TEST(Assemble, OrbifoldPhase) {
    for (int l : {3, 4, 5}) {
        const ModularData o = build_orbifold_u1(l);
        const ModularData md = assemble_modular("o", verlinde_fusion(o), o.dims(), o.twists());
        EXPECT_NEAR(std::abs(md.phase_c() - std::polar(1.0, -kPi / 12)), 0.0, 1e-12);
    }
}

TEST(Assemble, ZeroGaussSumRejected) {
    // Z_2 with twists (1, −1) and d = (1, 1): σ̃ = 0
    RealVector d(2);
    d << 1, 1;
    ComplexVector w(2);
    w << 1.0, -1.0;
    EXPECT_THROW(assemble_modular("bad", cyclic_ring(2), d, w), DegenerateData);
}

TEST(Assemble, RoundTripThroughVerlinde) {
    for (const auto& md : sample_theories()) {
        const FusionRing ring = verlinde_fusion(md);
        const ModularData again = assemble_modular(md.name(), ring, md.dims(), md.twists());
        EXPECT_TRUE(verlinde_fusion(again) == ring) << md.name();
        EXPECT_LT((again.S() - md.S()).cwiseAbs().maxCoeff(), 1e-9) << md.name();
    }
}

TEST(Verlinde, U1SixIsCyclicGroupRing) {
    const FusionRing r = verlinde_fusion(build_u1(6));
    for (std::size_t a = 0; a < 6; ++a)
        for (std::size_t b = 0; b < 6; ++b)
            for (std::size_t c = 0; c < 6; ++c) EXPECT_EQ(r(a, b, c), (a + b) % 6 == c ? 1 : 0);
}

TEST(Verlinde, NonIntegralReported) {
    ComplexMatrix s(2, 2);
    const double t = 0.3;
    s << std::cos(t), std::sin(t), std::sin(t), -std::cos(t);
    const ModularData md("rot", {"0", "1"}, 0, s, ComplexVector::Ones(2), 1.0);
    try {
        verlinde_fusion(md);
        FAIL() << "expected NotModular";
    } catch (const NotModular& e) {
        EXPECT_LT(e.i, 2u);
        EXPECT_LT(e.k, 2u);
        EXPECT_GT(std::abs(e.value - std::round(e.value.real())), 1e-6);
    }
}

TEST(Verlinde, FrobeniusPerronMatchesDims) {
    for (const auto& md : sample_theories()) {
        const RealVector fp = frobenius_perron_dimensions(verlinde_fusion(md));
        EXPECT_LT((fp - md.dims()).cwiseAbs().maxCoeff(), 1e-6) << md.name();
    }
}

TEST(Conjugation, U1Six) {
    const auto c = conjugation(build_u1(6));
    for (std::size_t k = 0; k < 6; ++k) EXPECT_EQ(c[k], (6 - k) % 6);
}

TEST(Conjugation, SpinLevelTwoEvenSelfConjugate) {
    const auto md = build_spin_m_level2(4);
    EXPECT_LT(md.S().imag().cwiseAbs().maxCoeff(), 1e-12);
    const auto c = conjugation(md);
    for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(c[i], i);
}

TEST(Conjugation, NotAPermutation) {
    ComplexMatrix s(2, 2);
    s << 0.6, 0.8, 0.8, 0.6;  // S² has no 0/1 pattern
    const ModularData md("x", {"0", "1"}, 0, s, ComplexVector::Ones(2), 1.0);
    EXPECT_THROW(conjugation(md), Error);
}

TEST(Verify, SpinFourPasses) {
    const auto rep = verify(build_spin_m_level2(4));
    EXPECT_TRUE(rep.passed()) << rep.to_table();
    EXPECT_EQ(rep.checks.size(), 14u);
}

TEST(Verify, TrivialTwistsBreakModularRelation) {
    const auto u = build_u1(6);
    const ModularData bad("tampered", u.label_names(), 0, u.S(), ComplexVector::Ones(6), 1.0);
    const auto rep = verify(bad);
    EXPECT_FALSE(rep.find("TSTST=S").pass);
    EXPECT_FALSE(rep.passed());
}

TEST(Verify, OneLabelPasses) { EXPECT_TRUE(verify(trivial_theory()).passed()); }

TEST(Verify, EveryFamilyPasses) {
    for (const auto& md : sample_theories()) EXPECT_TRUE(verify(md).passed()) << md.name() << "\n" << verify(md).to_table();
}

TEST(Verify, FlippedSignDetected) {
    auto md = build_spin_m_level2(3);
    ComplexMatrix s = md.S();
    s(1, 2) *= -1.0;
    s(2, 1) *= -1.0;
    const ModularData bad("flipped", md.label_names(), 0, s, md.twists(), md.phase_c());
    EXPECT_FALSE(verify(bad).passed());
}

TEST(TensorProduct, GlobalDimensionMultiplies) {
    const auto a = build_a1_level_k(2), b = build_u1(4);
    const auto ab = tensor_product(a, b);
    EXPECT_NEAR(global_dimension(ab), global_dimension(a) * global_dimension(b), 1e-9);
    EXPECT_TRUE(verify(ab).passed());
    EXPECT_EQ(ab.label_names()[1], "(0,1)");
}

TEST(TensorProduct, TwoCopiesOfA1LevelOne) {
    const auto a = build_a1_level_k(1);
    EXPECT_NEAR(global_dimension(tensor_product(a, a)), 4.0, 1e-12);
}

TEST(TensorProduct, TrivialFactorIsIdentity) {
    const auto a = build_orbifold_u1(3);
    const auto at = tensor_product(a, trivial_theory());
    EXPECT_LT((at.S() - a.S()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((at.twists() - a.twists()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_NEAR(std::abs(at.phase_c() - a.phase_c()), 0.0, 1e-15);
}

TEST(GlobalDimension, Values) {
    for (int l = 1; l <= 6; ++l) EXPECT_NEAR(global_dimension(build_u1(2 * l)), 2.0 * l, 1e-9);
    for (int l = 3; l <= 6; ++l) EXPECT_NEAR(global_dimension(build_orbifold_u1(l)), 8.0 * l, 1e-9);
    EXPECT_NEAR(global_dimension(trivial_theory()), 1.0, 0.0);
}

TEST(CentralCharge, Values) {
    for (int n : {2, 4, 6, 8}) EXPECT_EQ(central_charge_mod8(build_u1(n)), Rational(1));
    for (int l = 3; l <= 8; ++l) EXPECT_EQ(central_charge_mod8(build_spin_m_level2(l)), Rational((2 * l - 1) % 8));
    EXPECT_EQ(central_charge_mod8(trivial_theory()), Rational(0));
    // SU(2)_k: c = 3k/(k+2)
    for (int k = 1; k <= 6; ++k) {
        Rational c(3 * k, k + 2);
        while (c >= Rational(8)) c -= Rational(8);
        EXPECT_EQ(central_charge_mod8(build_a1_level_k(k)), c) << k;
    }
}

TEST(CentralCharge, IrrationalPhaseRejected) {
    ComplexVector w(2);
    w << 1.0, std::polar(1.0, 1.0);  // not a rational angle; σ̃ phase is irrational
    ComplexMatrix s(2, 2);
    const double r = 1 / std::sqrt(2.0);
    s << r, r, r, -r;
    const ModularData md("odd", {"0", "1"}, 0, s, w, 1.0);
    EXPECT_THROW(central_charge_mod8(md), DegenerateData);
}

TEST(ModularData, ConstructorValidation) {
    EXPECT_THROW(ModularData("x", {}, 0, ComplexMatrix(0, 0), ComplexVector(0), 1.0), DimensionMismatch);
    EXPECT_THROW(ModularData("x", {"a", "b"}, 0, ComplexMatrix::Identity(3, 3), ComplexVector::Ones(2), 1.0),
                 DimensionMismatch);
    EXPECT_THROW(ModularData("x", {"a"}, 1, ComplexMatrix::Ones(1, 1), ComplexVector::Ones(1), 1.0), DimensionMismatch);
    EXPECT_THROW(ModularData("x", {"a"}, 0, ComplexMatrix::Zero(1, 1), ComplexVector::Ones(1), 1.0), DegenerateData);
}

TEST(ModularData, TIsPhaseTimesTwists) {
    const auto md = build_u1(4);
    const ComplexMatrix t = md.T();
    for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(t(i, i) - md.phase_c() * md.twists()(i)), 0.0, 1e-15);
    EXPECT_EQ(md.index_of("3"), 3u);
    EXPECT_THROW(md.index_of("nope"), InputError);
}

TEST(Json, RoundTripIsByteStable) {
    for (const auto& md : sample_theories()) {
        const std::string once = dump_json(to_json(md));
        const ModularData back = modular_data_from_json(parse_json_text(once, "mem"));
        EXPECT_EQ(dump_json(to_json(back)), once) << md.name();
        EXPECT_EQ(back.S(), md.S());
        EXPECT_EQ(back.twists(), md.twists());
    }
}

TEST(Json, SeventeenDigits) {
    EXPECT_EQ(detail::format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(detail::format_double(1.0), "1.0");
    EXPECT_EQ(detail::format_double(-0.0), "-0.0");
    EXPECT_THROW(detail::format_double(std::nan("")), InputError);
}

TEST(Json, ReadersAcceptLowPrecision) {
    const auto j = parse_json_text(
        R"({"name":"z2","labels":["0","1"],"vacuum":0,"S":[[[0.7071067811865476,0],[0.7071067811865476,0]],)"
        R"([[0.7071067811865476,0],[-0.7071067811865476,0]]],"twists":[[1,0],[0,1]],"phaseC":[0.9659258262890683,-0.25881904510252074]})",
        "mem");
    const ModularData md = modular_data_from_json(j);
    EXPECT_TRUE(verify(md).passed());
}

TEST(Json, MalformedDocuments) {
    EXPECT_THROW(parse_json_text("{not json", "mem"), InputError);
    EXPECT_THROW(modular_data_from_json(parse_json_text(R"({"labels":["a"]})", "mem")), InputError);
    EXPECT_THROW(modular_data_from_json(parse_json_text(
                     R"({"name":"x","labels":["a","b"],"vacuum":0,"S":[[[1,0]]],"twists":[[1,0]],"phaseC":[1,0]})",
                     "mem")),
                 DimensionMismatch);
    EXPECT_THROW(modular_data_from_json(parse_json_text(
                     R"({"name":"x","labels":["a"],"vacuum":-1,"S":[[[1,0]]],"twists":[[1,0]],"phaseC":[1,0]})", "mem")),
                 InputError);
    EXPECT_THROW(modular_data_from_json(parse_json_text(
                     R"({"name":"x","labels":[3],"vacuum":0,"S":[[[1,0]]],"twists":[[1,0]],"phaseC":[1,0]})", "mem")),
                 InputError);
}
