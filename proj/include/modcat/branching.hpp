#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "modcat/families.hpp"
#include "modcat/json_io.hpp"
#include "modcat/mtc_core.hpp"

namespace modcat {

/// b_{iλ}: multiplicity of child sector λ in parent sector i.
struct BranchingTable {
    std::string parent;
    std::string child;
    std::vector<std::string> parent_labels;
    std::vector<std::string> child_labels;
    int group_order = 1;
    std::vector<std::vector<int>> b;  // rows: parent, columns: child

    std::size_t rows() const { return b.size(); }
    std::size_t cols() const { return child_labels.size(); }
    int operator()(std::size_t i, std::size_t lambda) const { return b[i][lambda]; }

    void check_shape() const {
        if (b.size() != parent_labels.size()) throw DimensionMismatch("branching: one row per parent label required");
        for (const auto& row : b) {
            if (row.size() != child_labels.size())
                throw DimensionMismatch("branching: one column per child label required");
            for (int x : row)
                if (x < 0) throw InputError("branching: multiplicities must be nonnegative");
        }
        if (group_order < 1) throw InputError("branching: group order must be positive");
    }

    std::size_t child_index(const std::string& name) const {
        for (std::size_t i = 0; i < child_labels.size(); ++i)
            if (child_labels[i] == name) return i;
        throw InputError("branching: unknown child label '" + name + "'");
    }
};

inline Json to_json(const BranchingTable& t) {
    Json j;
    j["parent"] = t.parent;
    j["child"] = t.child;
    j["parent_labels"] = t.parent_labels;
    j["child_labels"] = t.child_labels;
    j["group_order"] = t.group_order;
    j["b"] = t.b;
    return j;
}

inline BranchingTable branching_from_json(const Json& j) {
    try {
        BranchingTable t;
        t.parent = require(j, "parent").get<std::string>();
        t.child = require(j, "child").get<std::string>();
        t.group_order = require(j, "group_order").get<int>();
        t.b = require(j, "b").get<std::vector<std::vector<int>>>();
        if (j.contains("parent_labels")) {
            t.parent_labels = j.at("parent_labels").get<std::vector<std::string>>();
        } else {
            for (std::size_t i = 0; i < t.b.size(); ++i) t.parent_labels.push_back(std::to_string(i));
        }
        if (j.contains("child_labels")) {
            t.child_labels = j.at("child_labels").get<std::vector<std::string>>();
        } else if (!t.b.empty()) {
            for (std::size_t i = 0; i < t.b.front().size(); ++i) t.child_labels.push_back(std::to_string(i));
        }
        t.check_shape();
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed branching document: ") + e.what());
    }
}

namespace detail {

/// Restriction of sector k of the 2l-sector parent: Λ~_0 → 1+j, Λ~_l → φ_l^1+φ_l^2, Λ~_k, Λ~_{2l−k} → φ_k.
inline BranchingTable z2_branching(int l, const ModularData& parent, const std::string& child,
                                   const std::vector<std::string>& child_labels) {
    const SpinIndex x{l};
    BranchingTable t;
    t.parent = parent.name();
    t.child = child;
    t.parent_labels = parent.label_names();
    t.child_labels = child_labels;
    t.group_order = 2;
    t.b.assign(static_cast<std::size_t>(2 * l), std::vector<int>(x.size(), 0));
    t.b[0][x.one()] = t.b[0][x.j()] = 1;
    t.b[static_cast<std::size_t>(l)][x.phi_l(1)] = t.b[static_cast<std::size_t>(l)][x.phi_l(2)] = 1;
    for (int k = 1; k < l; ++k) {
        t.b[static_cast<std::size_t>(k)][x.phi(k)] = 1;
        t.b[static_cast<std::size_t>(2 * l - k)][x.phi(k)] = 1;
    }
    return t;
}

}  // namespace detail

inline BranchingTable branching_su_to_spin(int l) {
    validate({Family::SPINM2, l});
    return detail::z2_branching(l, build_su_m_level1(l), "spin_level2(" + std::to_string(l) + ")",
                                spin_label_names(l, true));
}

inline BranchingTable branching_u1_to_orbifold(int l) {
    validate({Family::ORBIFOLD_U1, l});
    return detail::z2_branching(l, build_u1(2 * l), "orbifold_u1(" + std::to_string(l) + ")",
                                spin_label_names(l, false));
}

inline void check_compatible(const ModularData& parent, const ModularData& child, const BranchingTable& b) {
    b.check_shape();
    if (b.rows() != parent.size()) throw DimensionMismatch("branching rows differ from parent sector count");
    if (b.cols() != child.size()) throw DimensionMismatch("branching columns differ from child sector count");
}

/// Σ_λ b_{iλ} Ṡ_{λν} = Σ_k S_{ik} b_{kν} for every parent i and every child ν, twisted columns included.
inline VerificationReport verify_intertwining(const ModularData& parent, const ModularData& child,
                                              const BranchingTable& b, const Tolerances& tol = {}) {
    check_compatible(parent, child, b);
    const auto np = static_cast<Eigen::Index>(parent.size()), nc = static_cast<Eigen::Index>(child.size());
    ComplexMatrix bm(np, nc);
    for (Eigen::Index i = 0; i < np; ++i)
        for (Eigen::Index k = 0; k < nc; ++k) bm(i, k) = b(static_cast<std::size_t>(i), static_cast<std::size_t>(k));
    VerificationReport rep;
    rep.add("intertwining b*S_child = S_parent*b", (bm * child.S() - parent.S() * bm).cwiseAbs().maxCoeff(),
            tol.relation);
    return rep;
}

/// dim W = Σ b².
inline long long dim_w(const BranchingTable& b) {
    long long s = 0;
    for (const auto& row : b.b)
        for (int x : row) s += static_cast<long long>(x) * x;
    return s;
}

/// b_{vac,λ} = d_λ wherever positive, and Σ_λ b_{vac,λ} d_λ = |G|. Returns the worst deviation.
inline double vacuum_row_deviation(const ModularData& child, const BranchingTable& b, std::size_t parent_vacuum = 0) {
    if (b.cols() != child.size()) throw DimensionMismatch("branching columns differ from child sector count");
    double dev = 0.0, sum = 0.0;
    for (std::size_t lam = 0; lam < b.cols(); ++lam) {
        const int m = b(parent_vacuum, lam);
        const double d = child.dims()(static_cast<Eigen::Index>(lam));
        if (m > 0) dev = std::max(dev, std::abs(m - d));
        sum += m * d;
    }
    return std::max(dev, std::abs(sum - b.group_order));
}

struct SectorClassification {
    std::vector<bool> twisted;
    double untwisted_dim_sq = 0.0;  // Σ_{untwisted} d²
    double mu = 0.0;
    bool strict_inequality = true;  // Σ_{untwisted} d² < μ, checked when |G| > 1

    std::size_t twisted_count() const {
        std::size_t n = 0;
        for (bool t : twisted) n += t ? 1 : 0;
        return n;
    }
};

/// Untwisted iff some b_{iλ} ≠ 0; a nontrivial group must leave at least one twisted sector.
inline SectorClassification classify_sectors(const ModularData& child, const BranchingTable& b) {
    b.check_shape();
    if (b.cols() != child.size()) throw DimensionMismatch("branching columns differ from child sector count");
    SectorClassification c;
    c.mu = global_dimension(child);
    for (std::size_t lam = 0; lam < b.cols(); ++lam) {
        bool untw = false;
        for (std::size_t i = 0; i < b.rows(); ++i) untw = untw || b(i, lam) != 0;
        c.twisted.push_back(!untw);
        const double d = child.dims()(static_cast<Eigen::Index>(lam));
        if (untw) c.untwisted_dim_sq += d * d;
    }
    if (b.group_order > 1) {
        if (c.twisted_count() == 0) throw DegenerateData("nontrivial group but no twisted sector");
        c.strict_inequality = c.untwisted_dim_sq < c.mu;
    }
    return c;
}

/// μ(A^G) = |G|² μ(A).
inline double mu_orbifold(double mu_parent, int group_order) {
    if (!(mu_parent > 0) || group_order <= 0) throw InputError("mu_orbifold needs positive inputs");
    return static_cast<double>(group_order) * group_order * mu_parent;
}

/// mu_sub = index² · mu_parent within tol.
inline bool mu_product_identity(double mu_sub, double index, double mu_parent, double tol = 1e-9) {
    return std::abs(mu_sub - index * index * mu_parent) <= tol;
}

/// Ċ³ = C³.
inline bool c_phase_check(const ModularData& parent, const ModularData& child, double tol = 1e-9) {
    return std::abs(std::pow(parent.phase_c(), 3) - std::pow(child.phase_c(), 3)) <= tol;
}

}  // namespace modcat
