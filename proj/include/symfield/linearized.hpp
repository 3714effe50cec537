#pragma once

// Additive (F_p-linear) polynomials sum a_j T^{p^j}, the subspace polynomial
// prod_{w in W} (T - w) of an additive subgroup W, and the decomposition
// oracle that searches for f = L_{W'}(g) over the subgroups of a given
// ambient subspace.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "symfield/errors.hpp"
#include "symfield/field.hpp"
#include "symfield/sparse_poly.hpp"

namespace symfield {

class LinearizedPoly {
public:
    LinearizedPoly() = default;
    explicit LinearizedPoly(const Field* field) : field_(field) {}

    const Field* field() const { return field_; }

    /// Coefficient of T^{p^j} at position j; empty means the zero map.
    const std::vector<FieldElement>& coeffs() const { return a_; }

    bool is_zero() const { return a_.empty(); }

    void set_coeff(std::size_t j, const FieldElement& c) {
        if (c.field != field_) throw ArgumentError("coefficient from a different field");
        if (j >= a_.size()) a_.resize(j + 1, field_->zero());
        a_[j] = c;
        while (!a_.empty() && a_.back().is_zero()) a_.pop_back();
    }

    std::uint64_t poly_degree() const {
        if (a_.empty()) throw ArgumentError("zero linearized polynomial has no degree");
        return checked_pow_u64(field_->characteristic(), a_.size() - 1);
    }

    FieldElement evaluate(const FieldElement& x) const {
        if (x.field != field_) throw ArgumentError("evaluation point from a different field");
        FieldElement acc = field_->zero();
        FieldElement cur = x;
        for (std::size_t j = 0; j < a_.size(); ++j) {
            if (!a_[j].is_zero()) acc = field_->add(acc, field_->mul(a_[j], cur));
            if (j + 1 < a_.size()) cur = field_->pow(cur, field_->characteristic());
        }
        return acc;
    }

    SparsePoly to_sparse() const {
        SparsePoly r(field_);
        std::uint64_t e = 1;
        for (std::size_t j = 0; j < a_.size(); ++j) {
            r.set_term(e, a_[j]);
            if (j + 1 < a_.size()) e = checked_mul_u64(e, field_->characteristic());
        }
        return r;
    }

    LinearizedPoly scaled(const FieldElement& s) const {
        LinearizedPoly r(field_);
        for (std::size_t j = 0; j < a_.size(); ++j) r.set_coeff(j, field_->mul(a_[j], s));
        return r;
    }

    LinearizedPoly monic() const {
        if (a_.empty()) throw ArgumentError("cannot normalize the zero polynomial");
        return scaled(field_->inv(a_.back()));
    }

    friend bool operator==(const LinearizedPoly&, const LinearizedPoly&) = default;

private:
    const Field* field_ = nullptr;
    std::vector<FieldElement> a_;
};

/// An F_p-subspace of a field level, kept with a canonical reduced basis
/// (sorted by element index) and the fully enumerated span.
class Subgroup {
public:
    Subgroup() = default;

    static Subgroup from_elements(const Field* field, const std::vector<FieldElement>& gens) {
        Subgroup s;
        s.field_ = field;
        // row-reduce generator coordinate vectors over F_p
        const std::uint32_t p = field->characteristic();
        const std::uint32_t d = field->degree();
        std::vector<std::vector<std::uint8_t>> rows;
        for (const auto& g : gens) {
            if (g.field != field) throw ArgumentError("generator from a different field");
            std::vector<std::uint8_t> v(g.coeff.begin(), g.coeff.begin() + d);
            reduce_against(v, rows, p);
            if (std::any_of(v.begin(), v.end(), [](std::uint8_t x) { return x != 0; })) {
                insert_row(std::move(v), rows, p);
            }
        }
        for (const auto& r : rows) {
            FieldElement e{field, {}};
            for (std::uint32_t i = 0; i < d; ++i) e.coeff[i] = r[i];
            s.basis_.push_back(e);
        }
        std::sort(s.basis_.begin(), s.basis_.end(), [&](const FieldElement& a, const FieldElement& b) {
            return field->index_of(a) < field->index_of(b);
        });
        s.elements_ = field->span(s.basis_);
        return s;
    }

    static Subgroup from_basis(const Field* field, const std::vector<FieldElement>& basis) {
        Subgroup s = from_elements(field, basis);
        if (s.dimension() != basis.size()) throw ArgumentError("basis is not linearly independent");
        return s;
    }

    const Field* field() const { return field_; }
    const std::vector<FieldElement>& basis() const { return basis_; }
    const std::vector<FieldElement>& elements() const { return elements_; }
    std::size_t dimension() const { return basis_.size(); }
    std::uint64_t size() const { return elements_.size(); }

    bool contains(const FieldElement& e) const {
        if (e.field != field_) throw ArgumentError("element from a different field");
        const std::uint32_t p = field_->characteristic();
        const std::uint32_t d = field_->degree();
        std::vector<std::uint8_t> v(e.coeff.begin(), e.coeff.begin() + d);
        std::vector<std::vector<std::uint8_t>> rows;
        for (const auto& b : basis_) {
            rows.emplace_back(b.coeff.begin(), b.coeff.begin() + d);
        }
        // rows from a canonical basis are already in echelon form after sorting by pivot
        std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
            return pivot_of(a) < pivot_of(b);
        });
        reduce_against(v, rows, p);
        return std::all_of(v.begin(), v.end(), [](std::uint8_t x) { return x == 0; });
    }

    /// Sorted element indices; canonical identity of the subspace.
    std::vector<std::uint64_t> canonical_key() const {
        std::vector<std::uint64_t> k;
        k.reserve(elements_.size());
        for (const auto& e : elements_) k.push_back(field_->index_of(e));
        std::sort(k.begin(), k.end());
        return k;
    }

    std::vector<std::uint64_t> basis_indices() const {
        std::vector<std::uint64_t> k;
        for (const auto& e : basis_) k.push_back(field_->index_of(e));
        return k;
    }

private:
    static std::size_t pivot_of(const std::vector<std::uint8_t>& v) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i]) return i;
        }
        return v.size();
    }

    static void reduce_against(std::vector<std::uint8_t>& v, const std::vector<std::vector<std::uint8_t>>& rows,
                               std::uint32_t p) {
        for (const auto& r : rows) {
            std::size_t piv = pivot_of(r);
            if (piv >= v.size() || v[piv] == 0) continue;
            std::uint32_t f = (v[piv] * fp::mod_inv(r[piv], p)) % p;
            for (std::size_t i = 0; i < v.size(); ++i) {
                v[i] = static_cast<std::uint8_t>((v[i] + (p - f) * r[i]) % p);
            }
        }
    }

    static void insert_row(std::vector<std::uint8_t> v, std::vector<std::vector<std::uint8_t>>& rows,
                           std::uint32_t p) {
        std::uint32_t inv = fp::mod_inv(v[pivot_of(v)], p);
        for (auto& x : v) x = static_cast<std::uint8_t>((x * inv) % p);
        for (auto& r : rows) {
            std::size_t piv = pivot_of(v);
            if (r[piv]) {
                std::uint32_t f = r[piv];
                for (std::size_t i = 0; i < r.size(); ++i) {
                    r[i] = static_cast<std::uint8_t>((r[i] + (p - f) * v[i]) % p);
                }
            }
        }
        rows.push_back(std::move(v));
        std::sort(rows.begin(), rows.end(),
                  [](const auto& a, const auto& b) { return pivot_of(a) < pivot_of(b); });
    }

    const Field* field_ = nullptr;
    std::vector<FieldElement> basis_;
    std::vector<FieldElement> elements_;
};

/// prod_{w in W} (T - w) as a linearized polynomial, built by the extension
/// recurrence L_{U+<b>} = L_U^p - L_U(b)^{p-1} L_U. Degree |W|, separable,
/// additive, and its root set is exactly W.
inline LinearizedPoly subspace_polynomial(const Subgroup& w) {
    const Field* k = w.field();
    LinearizedPoly l(k);
    l.set_coeff(0, k->one());  // L_{0} = T
    for (const auto& b : w.basis()) {
        FieldElement lb = l.evaluate(b);
        if (lb.is_zero()) throw InternalError("basis element already in the span");
        FieldElement scale = k->pow(lb, k->characteristic() - 1);
        LinearizedPoly next(k);
        for (std::size_t j = 0; j < l.coeffs().size(); ++j) {
            next.set_coeff(j + 1, k->pow(l.coeffs()[j], k->characteristic()));
        }
        for (std::size_t j = 0; j < l.coeffs().size(); ++j) {
            next.set_coeff(j, k->sub(next.coeffs().size() > j ? next.coeffs()[j] : k->zero(),
                                     k->mul(scale, l.coeffs()[j])));
        }
        l = next;
    }
    return l;
}

/// The image subgroup L_W(V) = {L_W(v) : v in V}.
inline Subgroup image_subgroup(const LinearizedPoly& lw, const Subgroup& v) {
    std::vector<FieldElement> imgs;
    imgs.reserve(v.elements().size());
    for (const auto& e : v.elements()) imgs.push_back(lw.evaluate(e));
    return Subgroup::from_elements(v.field(), imgs);
}

/// Every subgroup of V (including the trivial one and V itself), ordered by
/// dimension ascending, then lexicographically by basis element indices.
inline std::vector<Subgroup> all_subgroups(const Subgroup& v) {
    std::map<std::vector<std::uint64_t>, Subgroup> seen;
    std::vector<Subgroup> frontier{Subgroup::from_elements(v.field(), {})};
    seen[frontier[0].canonical_key()] = frontier[0];
    while (!frontier.empty()) {
        std::vector<Subgroup> next;
        for (const auto& s : frontier) {
            if (s.dimension() == v.dimension()) continue;
            for (const auto& e : v.elements()) {
                if (e.is_zero() || s.contains(e)) continue;
                auto gens = s.basis();
                gens.push_back(e);
                Subgroup bigger = Subgroup::from_elements(v.field(), gens);
                auto key = bigger.canonical_key();
                if (seen.emplace(key, bigger).second) next.push_back(bigger);
            }
        }
        frontier = std::move(next);
    }
    std::vector<Subgroup> out;
    out.reserve(seen.size());
    for (auto& [key, s] : seen) out.push_back(std::move(s));
    std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
        if (a.dimension() != b.dimension()) return a.dimension() < b.dimension();
        return a.basis_indices() < b.basis_indices();
    });
    return out;
}

/// Matrix of the F_p-linear evaluation map x -> L(x) on L's field.
inline fp::Mat evaluation_matrix(const LinearizedPoly& l) {
    const Field* k = l.field();
    fp::Mat m(k->characteristic(), k->degree(), k->degree());
    for (std::uint32_t j = 0; j < k->degree(); ++j) {
        FieldElement basis{k, {}};
        basis.coeff[j] = 1;
        FieldElement img = l.evaluate(basis);
        for (std::uint32_t i = 0; i < k->degree(); ++i) m.at(i, j) = img.coeff[i];
    }
    return m;
}

/// Solve L(g) = f for g by peeling leading terms: the leading term of L(g)
/// is a_s * lead(g)^{p^s}, so lead(g) is forced at every step. A constant
/// residue is handled as an additive-map solve, since every coefficient of
/// L contributes to x^0. Returns absent when some residue exponent is not
/// divisible by p^s or a constant residue is outside the image of L.
inline std::optional<SparsePoly> solve_linearized_preimage(const LinearizedPoly& l, const SparsePoly& f) {
    const Field* k = l.field();
    if (f.field() != k) throw ArgumentError("mismatched fields");
    if (l.is_zero()) throw ArgumentError("cannot invert the zero map");
    const std::uint32_t p = k->characteristic();
    const std::size_t s = l.coeffs().size() - 1;
    const std::uint64_t ps = checked_pow_u64(p, s);
    const FieldElement top = l.coeffs()[s];
    // x -> x^{p^s} inverts as x -> x^{p^(D-s)} on a degree-D field
    const std::uint64_t root_exp = checked_pow_u64(p, (k->degree() - (s % k->degree())) % k->degree());
    SparsePoly g(k);
    SparsePoly work = f;
    std::size_t guard = 0;
    while (!work.is_zero()) {
        if (++guard > 200000) throw InternalError("preimage peeling failed to terminate");
        auto it = work.terms().rbegin();
        const std::uint64_t big_e = it->first;
        const FieldElement c = it->second;
        if (big_e == 0) {
            fp::Solver solver(evaluation_matrix(l));
            std::vector<std::uint8_t> rhs(c.coeff.begin(), c.coeff.begin() + k->degree());
            auto sol = solver.solve(rhs);
            if (!sol) return std::nullopt;
            FieldElement gc{k, {}};
            for (std::uint32_t i = 0; i < k->degree(); ++i) gc.coeff[i] = (*sol)[i];
            g.add_term(0, gc);
            work.add_term(0, k->neg(c));
            continue;
        }
        if (big_e % ps != 0) return std::nullopt;
        const std::uint64_t e = big_e / ps;
        FieldElement gc = k->pow(k->mul(c, k->inv(top)), root_exp);
        g.add_term(e, gc);
        // subtract L(gc * x^e)
        std::uint64_t cur = 1;
        for (std::size_t j = 0; j < l.coeffs().size(); ++j) {
            const FieldElement& aj = l.coeffs()[j];
            if (!aj.is_zero()) {
                work.add_term(checked_mul_u64(e, cur), k->neg(k->mul(aj, k->pow(gc, cur))));
            }
            if (j + 1 < l.coeffs().size()) cur = checked_mul_u64(cur, p);
        }
    }
    return g;
}

/// Substitute g into L: sum a_j * g^{p^j} as a sparse polynomial.
inline SparsePoly apply_to_poly(const LinearizedPoly& l, const SparsePoly& g) {
    const Field* k = l.field();
    if (g.field() != k) throw ArgumentError("mismatched fields");
    SparsePoly acc(k);
    std::uint64_t cur = 1;
    for (std::size_t j = 0; j < l.coeffs().size(); ++j) {
        if (!l.coeffs()[j].is_zero()) {
            acc = acc.add((cur == 1 ? g : g.frobenius_power(cur)).scaled(l.coeffs()[j]));
        }
        if (j + 1 < l.coeffs().size()) cur = checked_mul_u64(cur, k->characteristic());
    }
    return acc;
}

struct Decomposition {
    Subgroup w;          // proper nontrivial subgroup of V
    LinearizedPoly lw_image;  // L_{W'} with W' = L_W(V)
    SparsePoly g;        // f = lw_image(g)
};

/// Search for a proper nontrivial subgroup W of V and polynomial g with
/// f = L_{W'}(g), W' = L_W(V). Subgroups are tried in canonical order and
/// the first hit is returned; absent means no decomposition exists over
/// this level.
inline std::optional<Decomposition> decompose_linearized(const SparsePoly& f, const Subgroup& v) {
    if (f.field() != v.field()) throw ArgumentError("polynomial and subgroup over different fields");
    auto subs = all_subgroups(v);
    for (const auto& w : subs) {
        if (w.dimension() == 0 || w.dimension() == v.dimension()) continue;
        LinearizedPoly lw = subspace_polynomial(w);
        Subgroup wprime = image_subgroup(lw, v);
        LinearizedPoly lwp = subspace_polynomial(wprime);
        if (f.is_zero()) return Decomposition{w, lwp, SparsePoly(f.field())};
        auto g = solve_linearized_preimage(lwp, f);
        if (g) return Decomposition{w, lwp, *g};
    }
    return std::nullopt;
}

}  // namespace symfield
