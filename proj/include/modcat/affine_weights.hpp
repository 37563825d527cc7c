#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "modcat/mtc_core.hpp"

// Integrable weights of affine D_l (l >= 3), its diagram automorphisms and
// the coset labels of Spin(2l)_1 x Spin(2l)_1 / Spin(2l)_2.

namespace modcat {

/// Level-k integrable weight λ_0Λ_0 + ... + λ_lΛ_l of affine D_l.
struct AffineWeight {
    int l = 0;
    std::vector<int> coeffs;  // λ_0..λ_l

    int level() const {
        int k = 0;
        for (int i = 0; i <= l; ++i) k += coeffs[static_cast<std::size_t>(i)] * ((i <= 1 || i >= l - 1) ? 1 : 2);
        return k;
    }

    /// Node-word order: Λ_0 < Λ_1 < ... < Λ_l, i.e. descending coefficient vectors.
    friend bool operator<(const AffineWeight& a, const AffineWeight& b) {
        if (a.l != b.l) return a.l < b.l;
        return a.coeffs > b.coeffs;
    }
    friend bool operator==(const AffineWeight&, const AffineWeight&) = default;

    /// "2Λ_0", "Λ_0+Λ_{l-1}" style rendering with numeric indices.
    std::string to_string() const {
        std::string s;
        for (int i = 0; i <= l; ++i) {
            const int c = coeffs[static_cast<std::size_t>(i)];
            if (c == 0) continue;
            if (!s.empty()) s += "+";
            if (c != 1) s += std::to_string(c);
            s += "Λ_" + std::to_string(i);
        }
        return s.empty() ? "0" : s;
    }
};

inline void require_rank(int l) {
    if (l < 3) throw InputError("affine D_l needs l >= 3, got " + std::to_string(l));
}

/// Fundamental weight Λ_i scaled by m.
inline AffineWeight fundamental(int l, int i, int m = 1) {
    require_rank(l);
    if (i < 0 || i > l) throw InputError("node index out of range");
    AffineWeight w{l, std::vector<int>(static_cast<std::size_t>(l + 1), 0)};
    w.coeffs[static_cast<std::size_t>(i)] = m;
    return w;
}

inline AffineWeight operator+(AffineWeight a, const AffineWeight& b) {
    if (a.l != b.l) throw InputError("adding weights of different rank");
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) a.coeffs[i] += b.coeffs[i];
    return a;
}

/// All solutions of λ_0 + λ_1 + 2(λ_2+...+λ_{l-2}) + λ_{l-1} + λ_l = k, Λ_0 first.
inline std::vector<AffineWeight> enumerate_weights(int l, int k) {
    require_rank(l);
    if (k < 0) throw InputError("level must be nonnegative");
    std::vector<AffineWeight> out;
    std::vector<int> c(static_cast<std::size_t>(l + 1), 0);
    auto mark = [l](int i) { return (i <= 1 || i >= l - 1) ? 1 : 2; };
    auto rec = [&](auto&& self, int node, int remaining) -> void {
        if (node == l + 1) {
            if (remaining == 0) out.push_back({l, c});
            return;
        }
        for (int v = remaining / mark(node); v >= 0; --v) {
            c[static_cast<std::size_t>(node)] = v;
            self(self, node + 1, remaining - v * mark(node));
        }
        c[static_cast<std::size_t>(node)] = 0;
    };
    rec(rec, 0, k);
    std::sort(out.begin(), out.end());
    return out;
}

enum class DiagramGenerator { s, v };

/// Node permutation i ↦ π(i) such that A(Σλ_iΛ_i) = Σλ_iΛ_{π(i)}.
inline std::vector<int> node_permutation(DiagramGenerator gen, int l) {
    require_rank(l);
    std::vector<int> p(static_cast<std::size_t>(l + 1));
    if (gen == DiagramGenerator::v) {
        if (l % 2 != 0) throw InputError("A_v exists only for even l");
        for (int i = 0; i <= l; ++i) p[static_cast<std::size_t>(i)] = i;
        std::swap(p[0], p[1]);
        std::swap(p[static_cast<std::size_t>(l - 1)], p[static_cast<std::size_t>(l)]);
        return p;
    }
    if (l % 2 == 0) {
        for (int i = 0; i <= l; ++i) p[static_cast<std::size_t>(i)] = l - i;
        return p;
    }
    p[0] = l;
    p[1] = l - 1;
    for (int i = 2; i <= l - 2; ++i) p[static_cast<std::size_t>(i)] = l - i;
    p[static_cast<std::size_t>(l - 1)] = 0;
    p[static_cast<std::size_t>(l)] = 1;
    return p;
}

inline AffineWeight apply_node_permutation(const std::vector<int>& p, const AffineWeight& w) {
    AffineWeight out{w.l, std::vector<int>(w.coeffs.size(), 0)};
    for (std::size_t i = 0; i < w.coeffs.size(); ++i) out.coeffs[static_cast<std::size_t>(p[i])] = w.coeffs[i];
    return out;
}

inline AffineWeight diagram_automorphism(DiagramGenerator gen, const AffineWeight& w) {
    return apply_node_permutation(node_permutation(gen, w.l), w);
}

enum class GroupStructure { Z2xZ2, Z4 };

struct AutomorphismGroup {
    int l = 0;
    std::vector<DiagramGenerator> generators;
    GroupStructure structure = GroupStructure::Z4;
    std::vector<std::vector<int>> elements;  // node permutations; identity first

    std::size_t order() const { return elements.size(); }
};

inline std::vector<int> compose(const std::vector<int>& a, const std::vector<int>& b) {
    // (a∘b)(i) = a(b(i))
    std::vector<int> out(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = a[static_cast<std::size_t>(b[i])];
    return out;
}

/// Z2xZ2 = {1, A_s, A_v, A_sA_v} for even l, Z4 = {1, A_s, A_s², A_s³} for odd l.
inline AutomorphismGroup automorphism_group(int l) {
    require_rank(l);
    AutomorphismGroup g;
    g.l = l;
    std::vector<int> id(static_cast<std::size_t>(l + 1));
    for (int i = 0; i <= l; ++i) id[static_cast<std::size_t>(i)] = i;
    const auto s = node_permutation(DiagramGenerator::s, l);
    if (l % 2 == 0) {
        const auto v = node_permutation(DiagramGenerator::v, l);
        g.generators = {DiagramGenerator::s, DiagramGenerator::v};
        g.structure = GroupStructure::Z2xZ2;
        g.elements = {id, s, v, compose(s, v)};
    } else {
        g.generators = {DiagramGenerator::s};
        g.structure = GroupStructure::Z4;
        const auto s2 = compose(s, s);
        g.elements = {id, s, s2, compose(s2, s)};
    }
    return g;
}

namespace detail {

/// 2·(finite part of w) in the orthonormal basis e_1..e_l.
inline std::vector<long long> doubled_finite_part(const AffineWeight& w) {
    const int l = w.l;
    std::vector<long long> v(static_cast<std::size_t>(l), 0);
    for (int i = 1; i <= l; ++i) {
        const long long c = w.coeffs[static_cast<std::size_t>(i)];
        if (c == 0) continue;
        if (i <= l - 2) {
            for (int a = 0; a < i; ++a) v[static_cast<std::size_t>(a)] += 2 * c;
        } else {
            for (int a = 0; a < l - 1; ++a) v[static_cast<std::size_t>(a)] += c;
            v[static_cast<std::size_t>(l - 1)] += (i == l) ? c : -c;
        }
    }
    return v;
}

}  // namespace detail

/// h = (λ̄, λ̄+2ρ) / (2(k + 2l − 2)), with ρ = (l−1, l−2, ..., 0).
inline Rational conformal_weight(const AffineWeight& w, int k) {
    require_rank(w.l);
    if (w.level() != k) throw InputError("weight " + w.to_string() + " is not at level " + std::to_string(k));
    const auto v = detail::doubled_finite_part(w);
    long long norm4 = 0;  // 4(λ̄, λ̄+2ρ)
    for (std::size_t a = 0; a < v.size(); ++a) norm4 += v[a] * v[a] + 4 * v[a] * (w.l - 1 - static_cast<long long>(a));
    return Rational(norm4, 8LL * (k + 2 * w.l - 2));
}

/// Root lattice of D_l: integer coordinates with even sum.
inline bool in_root_lattice(const std::vector<long long>& doubled) {
    long long sum = 0;
    for (long long x : doubled) {
        if (x % 2 != 0) return false;
        sum += x;
    }
    return sum % 4 == 0;
}

struct CosetLabel {
    AffineWeight first;   // level 1
    AffineWeight second;  // level 1
    AffineWeight target;  // level 2

    friend bool operator<(const CosetLabel& a, const CosetLabel& b) {
        if (!(a.first == b.first)) return a.first < b.first;
        if (!(a.second == b.second)) return a.second < b.second;
        return a.target < b.target;
    }
    friend bool operator==(const CosetLabel&, const CosetLabel&) = default;

    std::string to_string() const {
        return "[" + first.to_string() + ", " + second.to_string() + "; " + target.to_string() + "]";
    }
};

inline bool selection_rule(const CosetLabel& c) {
    const auto a = detail::doubled_finite_part(c.first);
    const auto b = detail::doubled_finite_part(c.second);
    const auto t = detail::doubled_finite_part(c.target);
    std::vector<long long> d(a.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = a[i] + b[i] - t[i];
    return in_root_lattice(d);
}

/// Coset weight ḣ + ḧ − h_Λ reduced to [0, 1).
inline Rational coset_conformal_weight(const CosetLabel& c) {
    Rational h = conformal_weight(c.first, 1) + conformal_weight(c.second, 1) - conformal_weight(c.target, 2);
    const long long fl = h.numerator() >= 0 ? h.numerator() / h.denominator()
                                            : -((-h.numerator() + h.denominator() - 1) / h.denominator());
    return h - Rational(fl);
}

/// Every (Λ̇, Λ̈; Λ) at levels (1, 1; 2) obeying the selection rule, sorted.
inline std::vector<CosetLabel> enumerate_coset_labels(int l) {
    std::vector<CosetLabel> out;
    const auto lv1 = enumerate_weights(l, 1);
    const auto lv2 = enumerate_weights(l, 2);
    for (const auto& a : lv1)
        for (const auto& b : lv1)
            for (const auto& t : lv2) {
                CosetLabel c{a, b, t};
                if (selection_rule(c)) out.push_back(c);
            }
    std::sort(out.begin(), out.end());
    return out;
}

inline CosetLabel act(const std::vector<int>& p, const CosetLabel& c) {
    return {apply_node_permutation(p, c.first), apply_node_permutation(p, c.second),
            apply_node_permutation(p, c.target)};
}

struct Orbit {
    CosetLabel representative;
    std::vector<CosetLabel> members;  // sorted
};

/// Partition of labels into diagonal orbits; throws when labels are not closed under the action.
inline std::vector<Orbit> orbits(const std::vector<CosetLabel>& labels, const AutomorphismGroup& group) {
    std::set<CosetLabel> pool(labels.begin(), labels.end());
    std::set<CosetLabel> seen;
    std::vector<Orbit> out;
    for (const auto& c : pool) {
        if (seen.count(c)) continue;
        std::set<CosetLabel> members;
        for (const auto& g : group.elements) {
            const CosetLabel img = act(g, c);
            if (!pool.count(img)) throw InputError("label set not closed under the diagonal action: " + img.to_string());
            members.insert(img);
        }
        seen.insert(members.begin(), members.end());
        out.push_back({*members.begin(), {members.begin(), members.end()}});
    }
    return out;
}

inline bool has_fixed_points(const Orbit& o, const AutomorphismGroup& g) { return o.members.size() < g.order(); }

inline const Orbit& orbit_of(const std::vector<Orbit>& os, const CosetLabel& c) {
    for (const auto& o : os)
        if (std::find(o.members.begin(), o.members.end(), c) != o.members.end()) return o;
    throw InputError("label " + c.to_string() + " lies in no orbit");
}

}  // namespace modcat
