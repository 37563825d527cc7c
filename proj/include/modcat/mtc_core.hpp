#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>
#include <Eigen/Eigenvalues>

#include "modcat/types.hpp"

namespace modcat {

using Rational = boost::rational<long long>;

struct Label {
    std::size_t index = 0;
    std::string name;

    friend bool operator==(const Label&, const Label&) = default;
};

/// Builds contiguous labels 0..n-1; names must be unique.
inline std::vector<Label> make_labels(const std::vector<std::string>& names) {
    std::set<std::string> seen;
    std::vector<Label> labels;
    labels.reserve(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (!seen.insert(names[i]).second)
            throw InputError("duplicate label name '" + names[i] + "'");
        labels.push_back({i, names[i]});
    }
    return labels;
}

/// Nonnegative integer structure constants N_{ij}^k with unit and conjugation.
class FusionRing {
  public:
    FusionRing(std::vector<Label> labels, std::size_t vacuum,
               std::vector<std::size_t> conj, std::vector<int> coefficients)
        : labels_(std::move(labels)), vacuum_(vacuum), conj_(std::move(conj)),
          n_(std::move(coefficients)) {
        const std::size_t r = labels_.size();
        if (r == 0) throw DimensionMismatch("fusion ring needs at least one label");
        if (vacuum_ >= r) throw DimensionMismatch("vacuum index out of range");
        if (conj_.size() != r) throw DimensionMismatch("conjugation size differs from label count");
        if (n_.size() != r * r * r)
            throw DimensionMismatch("fusion tensor must have rank^3 entries");
        for (std::size_t c : conj_)
            if (c >= r) throw DimensionMismatch("conjugation maps outside the label set");
    }

    std::size_t rank() const { return labels_.size(); }
    const std::vector<Label>& labels() const { return labels_; }
    std::size_t vacuum() const { return vacuum_; }
    std::size_t conj(std::size_t i) const { return conj_[i]; }
    const std::vector<std::size_t>& conjugation() const { return conj_; }

    /// N_{ij}^k
    int operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return n_[(i * rank() + j) * rank() + k];
    }

    /// (N_i)_{jk} = N_{ij}^k
    Eigen::MatrixXd fusion_matrix(std::size_t i) const {
        const auto r = static_cast<Eigen::Index>(rank());
        Eigen::MatrixXd m(r, r);
        for (Eigen::Index j = 0; j < r; ++j)
            for (Eigen::Index k = 0; k < r; ++k)
                m(j, k) = (*this)(i, static_cast<std::size_t>(j), static_cast<std::size_t>(k));
        return m;
    }

    /// max |Σ_m N_{ij}^m N_{mk}^l − Σ_m N_{jk}^m N_{im}^l|; zero for an associative ring.
    long long associativity_defect() const {
        const std::size_t r = rank();
        long long worst = 0;
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                for (std::size_t k = 0; k < r; ++k)
                    for (std::size_t l = 0; l < r; ++l) {
                        long long lhs = 0, rhs = 0;
                        for (std::size_t m = 0; m < r; ++m) {
                            lhs += static_cast<long long>((*this)(i, j, m)) * (*this)(m, k, l);
                            rhs += static_cast<long long>((*this)(j, k, m)) * (*this)(i, m, l);
                        }
                        worst = std::max(worst, std::llabs(lhs - rhs));
                    }
        return worst;
    }

    /// Human-readable list of broken ring axioms; empty when all hold.
    std::vector<std::string> invariant_violations() const {
        std::vector<std::string> out;
        const std::size_t r = rank();
        auto name = [&](std::size_t i) { return labels_[i].name; };
        for (std::size_t i = 0; i < r; ++i)
            if (conj_[conj_[i]] != i) out.push_back("conjugation not involutive at " + name(i));
        if (conj_[vacuum_] != vacuum_) out.push_back("vacuum not self-conjugate");
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                for (std::size_t k = 0; k < r; ++k) {
                    const int v = (*this)(i, j, k);
                    if (v < 0) out.push_back("negative N at (" + name(i) + "," + name(j) + "," + name(k) + ")");
                    if (i == vacuum_ && v != (j == k ? 1 : 0))
                        out.push_back("vacuum not a unit at (" + name(j) + "," + name(k) + ")");
                    if (v != (*this)(j, i, k))
                        out.push_back("not commutative at (" + name(i) + "," + name(j) + "," + name(k) + ")");
                    if (v != (*this)(conj_[i], conj_[j], conj_[k]))
                        out.push_back("conjugation symmetry broken at (" + name(i) + "," + name(j) + "," +
                                      name(k) + ")");
                }
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                if ((*this)(i, j, vacuum_) != (j == conj_[i] ? 1 : 0))
                    out.push_back("conjugation pairing broken at (" + name(i) + "," + name(j) + ")");
        if (associativity_defect() != 0) out.push_back("not associative");
        return out;
    }

    friend bool operator==(const FusionRing& a, const FusionRing& b) {
        return a.vacuum_ == b.vacuum_ && a.conj_ == b.conj_ && a.n_ == b.n_ &&
               a.labels_.size() == b.labels_.size();
    }

  private:
    std::vector<Label> labels_;
    std::size_t vacuum_;
    std::vector<std::size_t> conj_;
    std::vector<int> n_;
};

/// Modular data (S, twists, normalization phase C); T is always C·Diag(twists).
class ModularData {
  public:
    ModularData(std::string name, const std::vector<std::string>& label_names, std::size_t vacuum,
                ComplexMatrix s, ComplexVector twists, Complex phase_c)
        : name_(std::move(name)), labels_(make_labels(label_names)), vacuum_(vacuum),
          s_(std::move(s)), twists_(std::move(twists)), phase_c_(phase_c) {
        const auto n = static_cast<Eigen::Index>(labels_.size());
        if (n == 0) throw DimensionMismatch("modular data needs at least one label");
        if (s_.rows() != n || s_.cols() != n) throw DimensionMismatch("S must be square of label count");
        if (twists_.size() != n) throw DimensionMismatch("twist vector size differs from label count");
        if (vacuum_ >= labels_.size()) throw DimensionMismatch("vacuum index out of range");
        const auto v = static_cast<Eigen::Index>(vacuum_);
        if (std::abs(s_(v, v)) < 1e-300) throw DegenerateData("S_{vacuum,vacuum} vanishes");
        dims_.resize(n);
        for (Eigen::Index i = 0; i < n; ++i) dims_(i) = (s_(i, v) / s_(v, v)).real();
    }

    const std::string& name() const { return name_; }
    const std::vector<Label>& labels() const { return labels_; }
    std::size_t size() const { return labels_.size(); }
    std::size_t vacuum() const { return vacuum_; }
    const ComplexMatrix& S() const { return s_; }
    const ComplexVector& twists() const { return twists_; }
    Complex phase_c() const { return phase_c_; }
    const RealVector& dims() const { return dims_; }

    ComplexMatrix T() const {
        ComplexMatrix t = ComplexMatrix::Zero(s_.rows(), s_.cols());
        for (Eigen::Index i = 0; i < s_.rows(); ++i) t(i, i) = phase_c_ * twists_(i);
        return t;
    }

    std::size_t index_of(const std::string& label) const {
        for (const auto& l : labels_)
            if (l.name == label) return l.index;
        throw InputError("unknown label '" + label + "' in " + name_);
    }

    std::vector<std::string> label_names() const {
        std::vector<std::string> out;
        for (const auto& l : labels_) out.push_back(l.name);
        return out;
    }

  private:
    std::string name_;
    std::vector<Label> labels_;
    std::size_t vacuum_;
    ComplexMatrix s_;
    ComplexVector twists_;
    Complex phase_c_;
    RealVector dims_;
};

struct YMatrix {
    ComplexMatrix values;
};

/// Y_{ij} = Σ_k N_{ij}^k (ω_i ω_j / ω_k) d_k
inline YMatrix y_from_fusion(const FusionRing& ring, const RealVector& dims, const ComplexVector& twists) {
    const std::size_t r = ring.rank();
    if (static_cast<std::size_t>(dims.size()) != r || static_cast<std::size_t>(twists.size()) != r)
        throw DimensionMismatch("dims/twists size differs from fusion ring rank");
    const auto n = static_cast<Eigen::Index>(r);
    YMatrix y{ComplexMatrix::Zero(n, n)};
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            Complex acc = 0.0;
            for (std::size_t k = 0; k < r; ++k) {
                const int nij = ring(i, j, k);
                if (nij == 0) continue;
                const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j),
                           kk = static_cast<Eigen::Index>(k);
                acc += static_cast<double>(nij) * twists(ii) * twists(jj) / twists(kk) * dims(kk);
            }
            y.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
        }
    return y;
}

/// σ̃ = Σ_i d_i² ω_i^{-1}
inline Complex sigma_tilde(const RealVector& dims, const ComplexVector& twists) {
    if (dims.size() != twists.size()) throw DimensionMismatch("dims and twists differ in size");
    Complex acc = 0.0;
    for (Eigen::Index i = 0; i < dims.size(); ++i) acc += dims(i) * dims(i) / twists(i);
    return acc;
}

/// Argument in (−π, π].
inline double principal_arg(Complex z) {
    double x = std::arg(z);
    if (x <= -kPi) x += 2.0 * kPi;
    return x;
}

/// S = Y/|σ̃| and C = exp(i arg(σ̃)/3) on the principal branch.
inline ModularData assemble_modular(const std::string& name, const FusionRing& ring, const RealVector& dims,
                                    const ComplexVector& twists) {
    const Complex sigma = sigma_tilde(dims, twists);
    if (std::abs(sigma) < 1e-12) throw DegenerateData("sigma-tilde vanishes; Y is not invertible");
    const YMatrix y = y_from_fusion(ring, dims, twists);
    std::vector<std::string> names;
    for (const auto& l : ring.labels()) names.push_back(l.name);
    return ModularData(name, names, ring.vacuum(), y.values / std::abs(sigma), twists,
                       std::polar(1.0, principal_arg(sigma) / 3.0));
}

inline Complex sigma_tilde(const ModularData& md) { return sigma_tilde(md.dims(), md.twists()); }

/// Σ_i d_i²
inline double global_dimension(const ModularData& md) { return md.dims().squaredNorm(); }

/// Permutation i ↦ ī read off from S² = Ĉ.
inline std::vector<std::size_t> conjugation(const ModularData& md, double tol = 1e-6) {
    const ComplexMatrix s2 = md.S() * md.S();
    const std::size_t n = md.size();
    std::vector<std::size_t> perm(n);
    std::vector<bool> hit(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        Eigen::Index best = 0;
        s2.row(static_cast<Eigen::Index>(i)).cwiseAbs().maxCoeff(&best);
        perm[i] = static_cast<std::size_t>(best);
        if (hit[perm[i]]) throw DegenerateData("S^2 is not a permutation matrix");
        hit[perm[i]] = true;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Complex want = (perm[i] == j) ? 1.0 : 0.0;
            if (std::abs(s2(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - want) > tol)
                throw DegenerateData("S^2 is not a permutation matrix");
        }
    for (std::size_t i = 0; i < n; ++i)
        if (perm[perm[i]] != i) throw DegenerateData("S^2 permutation is not an involution");
    if (perm[md.vacuum()] != md.vacuum()) throw DegenerateData("S^2 moves the vacuum");
    return perm;
}

/// Verlinde coefficient nearest-integer failure, carrying the offending triple.
class NotModular : public Error {
  public:
    NotModular(std::size_t i, std::size_t j, std::size_t k, Complex value)
        : Error(describe(i, j, k, value)), i(i), j(j), k(k), value(value) {}
    std::size_t i, j, k;
    Complex value;

  private:
    static std::string describe(std::size_t i, std::size_t j, std::size_t k, Complex v) {
        std::ostringstream os;
        os << "not modular / wrong input: N_{" << i << "," << j << "}^" << k << " = " << v.real()
           << (v.imag() < 0 ? "" : "+") << v.imag() << "i is not a nonnegative integer";
        return os.str();
    }
};

/// Raw Verlinde sums N_{ij}^k = Σ_m S_{im} S_{jm} S*_{km} / S_{vac,m}, as complex numbers.
inline std::vector<Complex> verlinde_raw(const ModularData& md) {
    const auto& s = md.S();
    const auto n = s.rows();
    const auto v = static_cast<Eigen::Index>(md.vacuum());
    for (Eigen::Index m = 0; m < n; ++m)
        if (std::abs(s(v, m)) < 1e-12) throw DegenerateData("vacuum row of S has a vanishing entry");
    std::vector<Complex> raw(static_cast<std::size_t>(n * n * n));
    ComplexVector inv_first(n);
    for (Eigen::Index m = 0; m < n; ++m) inv_first(m) = 1.0 / s(v, m);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) {
            const ComplexVector w = s.row(i).transpose().cwiseProduct(s.row(j).transpose()).cwiseProduct(inv_first);
            for (Eigen::Index k = 0; k < n; ++k) {
                const Complex val = s.row(k).conjugate().dot(w.conjugate());
                // dot() conjugates its first argument; undo to get Σ S_im S_jm S*_km / S_vm
                const Complex sum = std::conj(val);
                raw[static_cast<std::size_t>((i * n + j) * n + k)] = sum;
                raw[static_cast<std::size_t>((j * n + i) * n + k)] = sum;
            }
        }
    return raw;
}

inline FusionRing rounded_fusion(const ModularData& md, const std::vector<Complex>& raw,
                                 const std::vector<std::size_t>& conj) {
    std::vector<int> n(raw.size());
    for (std::size_t t = 0; t < raw.size(); ++t) n[t] = static_cast<int>(std::lround(raw[t].real()));
    return FusionRing(md.labels(), md.vacuum(), conj, std::move(n));
}

/// Fusion ring recovered from S by the Verlinde formula; throws NotModular on non-integral entries.
inline FusionRing verlinde_fusion(const ModularData& md, const Tolerances& tol = {}) {
    const auto raw = verlinde_raw(md);
    const std::size_t r = md.size();
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            for (std::size_t k = 0; k < r; ++k) {
                const Complex v = raw[(i * r + j) * r + k];
                const double nearest = std::round(v.real());
                if (std::abs(v - Complex(nearest, 0.0)) > tol.integrality || nearest < 0) throw NotModular(i, j, k, v);
            }
    return rounded_fusion(md, raw, conjugation(md, tol.integrality));
}

/// Perron-Frobenius eigenvalue of each fusion matrix N_i.
inline RealVector frobenius_perron_dimensions(const FusionRing& ring) {
    RealVector out(static_cast<Eigen::Index>(ring.rank()));
    for (std::size_t i = 0; i < ring.rank(); ++i) {
        Eigen::EigenSolver<Eigen::MatrixXd> es(ring.fusion_matrix(i), false);
        out(static_cast<Eigen::Index>(i)) = es.eigenvalues().cwiseAbs().maxCoeff();
    }
    return out;
}

struct Check {
    std::string name;
    bool pass = false;
    double deviation = 0.0;
    double tolerance = 0.0;
};

struct VerificationReport {
    std::vector<Check> checks;

    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }

    const Check& find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return c;
        throw InputError("no check named '" + name + "'");
    }

    void add(std::string name, double deviation, double tolerance) {
        const bool ok = std::isfinite(deviation) && deviation <= tolerance;
        checks.push_back({std::move(name), ok, deviation, tolerance});
    }

    std::string to_table() const {
        std::ostringstream os;
        for (const auto& c : checks)
            os << (c.pass ? "pass  " : "FAIL  ") << std::left << std::setw(26) << c.name << std::right
               << std::scientific << std::setprecision(3) << c.deviation << "  (tol " << c.tolerance << ")\n";
        os << (passed() ? "overall: pass" : "overall: FAIL") << "\n";
        return os.str();
    }
};

namespace detail {

inline double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace detail

/// Runs every genus-0 relation on md. Never throws on bad data; failures are report entries.
inline VerificationReport verify(const ModularData& md, const Tolerances& tol = {}) {
    using detail::kInf;
    using detail::max_abs;
    VerificationReport rep;
    const auto& s = md.S();
    const auto n = s.rows();
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const ComplexMatrix t = md.T();

    rep.add("S unitary", max_abs(s * s.adjoint() - id), tol.relation);
    rep.add("S symmetric", max_abs(s - s.transpose()), tol.relation);
    rep.add("T unitary", max_abs(t * t.adjoint() - id), tol.relation);
    rep.add("vacuum twist", std::abs(md.twists()(static_cast<Eigen::Index>(md.vacuum())) - 1.0), tol.relation);
    rep.add("TSTST=S", max_abs(t * s * t * s * t - s), tol.relation);

    std::vector<std::size_t> conj;
    double perm_dev = kInf;
    try {
        conj = conjugation(md, 0.25);
        const ComplexMatrix s2 = s * s;
        ComplexMatrix p = ComplexMatrix::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) p(i, static_cast<Eigen::Index>(conj[static_cast<std::size_t>(i)])) = 1.0;
        perm_dev = max_abs(s2 - p);
    } catch (const Error&) {
        conj.clear();
    }
    rep.add("S^2=C permutation", perm_dev, tol.relation);

    double tc_dev = kInf;
    if (!conj.empty()) {
        tc_dev = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            tc_dev = std::max(tc_dev, std::abs(md.twists()(i) - md.twists()(static_cast<Eigen::Index>(conj[static_cast<std::size_t>(i)]))));
    }
    rep.add("TC=CT", tc_dev, tol.relation);

    const Complex sigma = sigma_tilde(md);
    const double mu = global_dimension(md);
    rep.add("|sigma|^2=sum d^2", std::abs(std::norm(sigma) - mu), tol.relation);
    rep.add("phaseC^3=sigma/|sigma|",
            std::abs(sigma) > 0 ? std::abs(std::pow(md.phase_c(), 3) - sigma / std::abs(sigma)) : kInf, tol.relation);

    double dims_dev = 0.0;
    const auto v = static_cast<Eigen::Index>(md.vacuum());
    for (Eigen::Index i = 0; i < n; ++i) {
        const Complex ratio = s(i, v) / s(v, v);
        if (ratio.real() <= 0.0) dims_dev = kInf;
        dims_dev = std::max(dims_dev, std::abs(ratio.imag()));
    }
    rep.add("dims positive", dims_dev, tol.relation);

    double integ_dev = kInf;
    std::vector<Complex> raw;
    try {
        raw = verlinde_raw(md);
        integ_dev = 0.0;
        for (const Complex& x : raw) {
            const double nearest = std::max(0.0, std::round(x.real()));
            integ_dev = std::max(integ_dev, std::abs(x - Complex(nearest, 0.0)));
        }
    } catch (const Error&) {
        raw.clear();
    }
    rep.add("Verlinde integrality", integ_dev, tol.integrality);

    double assoc_dev = kInf, y_dev = kInf, sy_dev = kInf;
    if (!raw.empty() && !conj.empty()) {
        const FusionRing ring = rounded_fusion(md, raw, conj);
        assoc_dev = static_cast<double>(ring.associativity_defect());
        const YMatrix y = y_from_fusion(ring, md.dims(), md.twists());
        const auto& yv = y.values;
        y_dev = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                const auto ib = static_cast<Eigen::Index>(conj[static_cast<std::size_t>(i)]);
                const auto jb = static_cast<Eigen::Index>(conj[static_cast<std::size_t>(j)]);
                y_dev = std::max({y_dev, std::abs(yv(i, j) - yv(j, i)), std::abs(yv(i, j) - std::conj(yv(i, jb))),
                                  std::abs(yv(i, j) - yv(ib, jb))});
            }
        for (Eigen::Index i = 0; i < n; ++i) y_dev = std::max(y_dev, std::abs(yv(i, v) - md.dims()(i)));
        if (std::abs(sigma) > 0) sy_dev = max_abs(yv / std::abs(sigma) - s);
    }
    rep.add("fusion associativity", assoc_dev, 0.0);
    rep.add("Y symmetries", y_dev, tol.relation);
    rep.add("S=Y/|sigma|", sy_dev, tol.relation);
    return rep;
}

/// Deligne product: labels are pairs, S = S_a ⊗ S_b, twists and phases multiply.
inline ModularData tensor_product(const ModularData& a, const ModularData& b) {
    const auto na = static_cast<Eigen::Index>(a.size()), nb = static_cast<Eigen::Index>(b.size());
    ComplexMatrix s(na * nb, na * nb);
    ComplexVector tw(na * nb);
    std::vector<std::string> names;
    for (Eigen::Index i = 0; i < na; ++i)
        for (Eigen::Index j = 0; j < nb; ++j) {
            names.push_back("(" + a.labels()[static_cast<std::size_t>(i)].name + "," +
                            b.labels()[static_cast<std::size_t>(j)].name + ")");
            tw(i * nb + j) = a.twists()(i) * b.twists()(j);
            for (Eigen::Index k = 0; k < na; ++k)
                for (Eigen::Index l = 0; l < nb; ++l) s(i * nb + j, k * nb + l) = a.S()(i, k) * b.S()(j, l);
        }
    return ModularData(a.name() + "*" + b.name(), names, a.vacuum() * b.size() + b.vacuum(), std::move(s),
                       std::move(tw), a.phase_c() * b.phase_c());
}

/// Best rational approximation p/q with q ≤ max_den, or nothing within tol.
inline bool small_rational(double x, long long max_den, double tol, Rational& out) {
    for (long long q = 1; q <= max_den; ++q) {
        const long long p = std::llround(x * static_cast<double>(q));
        if (std::abs(x - static_cast<double>(p) / static_cast<double>(q)) <= tol) {
            out = Rational(p, q);
            return true;
        }
    }
    return false;
}

/// c mod 8 with exp(−2πic/8) = σ̃/|σ̃|.
inline Rational central_charge_mod8(const ModularData& md, const Tolerances& tol = {}) {
    const Complex sigma = sigma_tilde(md);
    if (std::abs(sigma) < 1e-12) throw DegenerateData("sigma-tilde vanishes");
    double c = -4.0 * std::arg(sigma) / kPi;
    c = std::fmod(c, 8.0);
    if (c < 0) c += 8.0;
    Rational r;
    if (!small_rational(c, tol.max_denominator, 1e-8, r))
        throw DegenerateData("central charge phase is not a small-denominator rational");
    if (r >= Rational(8)) r -= Rational(8);
    return r;
}

inline std::string to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace modcat
