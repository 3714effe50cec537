#pragma once

// Sparse univariate polynomials over a field level: exponent -> nonzero
// coefficient. Exponents are checked 64-bit; anything that would wrap
// throws instead of silently corrupting downstream counts.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "symfield/errors.hpp"
#include "symfield/field.hpp"

namespace symfield {

class SparsePoly {
public:
    SparsePoly() = default;
    explicit SparsePoly(const Field* field) : field_(field) {}
    explicit SparsePoly(const std::shared_ptr<const Field>& field) : field_(field.get()) {}

    const Field* field() const { return field_; }
    const std::map<std::uint64_t, FieldElement>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    std::optional<std::uint64_t> degree() const {
        if (terms_.empty()) return std::nullopt;
        return terms_.rbegin()->first;
    }

    FieldElement coeff(std::uint64_t e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? field_->zero() : it->second;
    }

    void set_term(std::uint64_t e, const FieldElement& c) {
        if (c.field != field_) throw ArgumentError("coefficient from a different field");
        if (c.is_zero()) {
            terms_.erase(e);
        } else {
            terms_[e] = c;
        }
    }

    void add_term(std::uint64_t e, const FieldElement& c) { set_term(e, field_->add(coeff(e), c)); }

    SparsePoly add(const SparsePoly& o) const {
        check_compatible(o);
        SparsePoly r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, c);
        return r;
    }

    SparsePoly sub(const SparsePoly& o) const {
        check_compatible(o);
        SparsePoly r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, field_->neg(c));
        return r;
    }

    SparsePoly mul(const SparsePoly& o) const {
        check_compatible(o);
        SparsePoly r(field_);
        for (const auto& [ea, ca] : terms_) {
            for (const auto& [eb, cb] : o.terms_) {
                r.add_term(checked_add_u64(ea, eb), field_->mul(ca, cb));
            }
        }
        return r;
    }

    SparsePoly scaled(const FieldElement& s) const {
        SparsePoly r(field_);
        for (const auto& [e, c] : terms_) r.set_term(e, field_->mul(c, s));
        return r;
    }

    /// Raise to the q-th power for q a power of the characteristic
    /// (coefficients go to their q-th powers, exponents multiply by q).
    SparsePoly frobenius_power(std::uint64_t q) const {
        require_char_power(q);
        SparsePoly r(field_);
        for (const auto& [e, c] : terms_) r.set_term(checked_mul_u64(e, q), field_->pow(c, q));
        return r;
    }

    SparsePoly derivative() const {
        const std::uint32_t p = field_->characteristic();
        SparsePoly r(field_);
        for (const auto& [e, c] : terms_) {
            if (e == 0) continue;
            std::uint32_t f = static_cast<std::uint32_t>(e % p);
            if (!f) continue;
            r.set_term(e - 1, field_->scalar_mul(f, c));
        }
        return r;
    }

    FieldElement evaluate(const FieldElement& x) const {
        if (x.field != field_) throw ArgumentError("evaluation point from a different field");
        FieldElement acc = field_->zero();
        for (const auto& [e, c] : terms_) acc = field_->add(acc, field_->mul(c, field_->pow(x, e)));
        return acc;
    }

    void require_char_power(std::uint64_t q) const {
        const std::uint32_t p = field_->characteristic();
        if (q < 2) throw ArgumentError("q must be at least 2");
        std::uint64_t v = q;
        while (v % p == 0) v /= p;
        if (v != 1) throw ArgumentError("q must be a power of the characteristic");
    }

    /// Terms sorted by descending exponent as "c*t^e"; coefficients print as
    /// canonical element indices, with bare 1 suppressed.
    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            if (!out.empty()) out += " + ";
            bool is_one = (it->second == field_->one());
            if (!is_one) out += field_->to_string(it->second) + "*";
            if (it->first == 0) {
                out += is_one ? "1" : "t^0";
            } else if (it->first == 1) {
                out += "t";
            } else {
                out += "t^" + std::to_string(it->first);
            }
        }
        return out;
    }

    friend bool operator==(const SparsePoly&, const SparsePoly&) = default;

private:
    void check_compatible(const SparsePoly& o) const {
        if (field_ != o.field_) throw ArgumentError("polynomials over different fields");
    }

    const Field* field_ = nullptr;
    std::map<std::uint64_t, FieldElement> terms_;
};

inline SparsePoly monomial(const Field* f, std::uint64_t e, const FieldElement& c) {
    SparsePoly r(f);
    r.set_term(e, c);
    return r;
}

/// The i-th elementary symmetric polynomial of t, t^q, ..., t^{q^(n-1)}:
/// the sum over all i-element subsets S of {0..n-1} of t^(sum_{j in S} q^j).
/// All coefficients are 1 and there are C(n,i) terms.
inline SparsePoly elementary_symmetric(const std::shared_ptr<const Field>& field, std::uint32_t n,
                                       std::uint64_t q, std::uint32_t i) {
    if (i < 1 || i > n) throw ArgumentError("need 1 <= i <= n");
    SparsePoly r(field.get());
    r.require_char_power(q);
    std::vector<std::uint64_t> qpow(n);
    for (std::uint32_t j = 0; j < n; ++j) qpow[j] = j == 0 ? 1 : checked_mul_u64(qpow[j - 1], q);
    std::vector<std::uint32_t> subset(i);
    for (std::uint32_t k = 0; k < i; ++k) subset[k] = k;
    while (true) {
        std::uint64_t e = 0;
        for (auto j : subset) e = checked_add_u64(e, qpow[j]);
        r.add_term(e, field->one());
        // next i-combination of {0..n-1}
        std::int64_t k = static_cast<std::int64_t>(i) - 1;
        while (k >= 0 && subset[k] == n - i + k) --k;
        if (k < 0) break;
        ++subset[k];
        for (std::size_t j = k + 1; j < i; ++j) subset[j] = subset[j - 1] + 1;
    }
    return r;
}

/// Largest exponent with nonzero coefficient that is coprime to the
/// characteristic; absent when no such term exists.
inline std::optional<std::uint64_t> coprime_degree(const SparsePoly& f) {
    const std::uint32_t p = f.field()->characteristic();
    std::optional<std::uint64_t> best;
    for (const auto& [e, c] : f.terms()) {
        if (e % p != 0) best = e;  // map iterates ascending, so last wins
    }
    return best;
}

/// True when f has a coprime-degree term t^d such that no term of degree
/// d*p^k (k >= 1) appears. Such an f is not of the form L(g) for any
/// nontrivial additive polynomial L, and T -> L_V(T) - f stays irreducible
/// for every additive subgroup V.
inline bool has_isolated_coprime_term(const SparsePoly& f) {
    const std::uint32_t p = f.field()->characteristic();
    auto dmax = f.degree();
    if (!dmax) return false;
    for (const auto& [d, c] : f.terms()) {
        if (d == 0 || d % p == 0) continue;
        bool isolated = true;
        std::uint64_t e = d;
        while (true) {
            if (e > *dmax / p) break;  // e*p would exceed the degree
            e *= p;
            if (!f.coeff(e).is_zero()) {
                isolated = false;
                break;
            }
        }
        if (isolated) return true;
    }
    return false;
}

/// Dense little-endian coefficient vector; guarded against huge degrees.
inline std::vector<FieldElement> to_dense(const SparsePoly& f, std::uint64_t max_degree = 1 << 20) {
    auto d = f.degree();
    if (!d) return {};
    if (*d > max_degree) throw ArgumentError("polynomial too large for dense form");
    std::vector<FieldElement> out(*d + 1, f.field()->zero());
    for (const auto& [e, c] : f.terms()) out[e] = c;
    return out;
}

/// All roots of f in its field with multiplicities, computed by repeated
/// exact division by (t - alpha). Roots appear in enumeration order.
inline std::vector<std::pair<FieldElement, std::uint32_t>> roots_with_multiplicity(const SparsePoly& f) {
    if (f.is_zero()) throw ArgumentError("zero polynomial has no root structure");
    const Field* k = f.field();
    std::vector<std::pair<FieldElement, std::uint32_t>> out;
    std::vector<FieldElement> dense = to_dense(f);
    for (std::uint64_t i = 0; i < k->order(); ++i) {
        FieldElement alpha = k->element_at(i);
        if (!f.evaluate(alpha).is_zero()) continue;
        // count multiplicity on a working copy
        std::vector<FieldElement> work = dense;
        std::uint32_t mult = 0;
        while (true) {
            // synthetic division by (t - alpha); remainder must be zero to count
            std::vector<FieldElement> quot(work.size() - 1, k->zero());
            FieldElement carry = k->zero();
            for (std::size_t j = work.size(); j-- > 1;) {
                carry = k->add(work[j], k->mul(alpha, carry));
                quot[j - 1] = carry;
            }
            FieldElement rem = k->add(work[0], k->mul(alpha, carry));
            if (!rem.is_zero()) break;
            ++mult;
            work = std::move(quot);
            if (work.empty()) break;
        }
        if (mult == 0) throw InternalError("evaluation and division disagree on a root");
        out.emplace_back(alpha, mult);
    }
    return out;
}

/// True iff evaluation over the whole field is injective.
inline bool is_permutation(const SparsePoly& f) {
    const Field* k = f.field();
    std::vector<bool> seen(k->order(), false);
    for (std::uint64_t i = 0; i < k->order(); ++i) {
        std::uint64_t v = k->index_of(f.evaluate(k->element_at(i)));
        if (seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

}  // namespace symfield
