#pragma once

// Small finite fields F_{p^k} with flat coefficient vectors over the prime
// field. A field is defined by the lexicographically smallest monic
// irreducible polynomial of the required degree, found by exhaustive search,
// so every run of every build constructs the same representation.
//
// Cardinalities are capped by an explicit enumeration budget: these fields
// exist to be enumerated element by element, and anything too large for that
// is rejected up front instead of silently truncated.

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "symfield/errors.hpp"
#include "symfield/fp_linalg.hpp"

namespace symfield {

inline constexpr std::size_t kMaxCoeffs = 32;
inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 20;

inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

class Field;

/// Element of one field level: coefficient vector over F_p, little-endian.
/// Trailing coefficients beyond the field degree are always zero.
struct FieldElement {
    const Field* field = nullptr;
    std::array<std::uint8_t, kMaxCoeffs> coeff{};

    friend bool operator==(const FieldElement&, const FieldElement&) = default;

    bool is_zero() const {
        for (auto c : coeff)
            if (c) return false;
        return true;
    }
};

namespace detail {

// Dense polynomials over F_p, little-endian coefficients, used only for
// modulus search and Frobenius bootstrapping.
using PPoly = std::vector<std::uint8_t>;

inline void ptrim(PPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline PPoly pmulmod(const PPoly& a, const PPoly& b, const PPoly& mod, std::uint32_t p) {
    if (a.empty() || b.empty()) return {};
    std::vector<std::uint32_t> acc(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j) acc[i + j] += a[i] * b[j];
    }
    const std::size_t d = mod.size() - 1;  // mod is monic of degree d
    for (std::size_t k = acc.size(); k-- > d;) {
        std::uint32_t c = acc[k] % p;
        if (!c) continue;
        acc[k] = 0;
        for (std::size_t j = 0; j < d; ++j) acc[k - d + j] = (acc[k - d + j] + c * (p - mod[j])) % p;
    }
    PPoly r(std::min<std::size_t>(acc.size(), d));
    for (std::size_t j = 0; j < r.size(); ++j) r[j] = static_cast<std::uint8_t>(acc[j] % p);
    ptrim(r);
    return r;
}

inline PPoly ppowmod(PPoly base, std::uint64_t e, const PPoly& mod, std::uint32_t p) {
    PPoly r{1};
    while (e > 0) {
        if (e & 1) r = pmulmod(r, base, mod, p);
        base = pmulmod(base, base, mod, p);
        e >>= 1;
    }
    return r;
}

inline PPoly pgcd(PPoly a, PPoly b, std::uint32_t p) {
    ptrim(a);
    ptrim(b);
    while (!b.empty()) {
        // a mod b
        std::uint32_t lead_inv = fp::mod_inv(b.back(), p);
        while (a.size() >= b.size() && !a.empty()) {
            std::uint32_t f = (a.back() * lead_inv) % p;
            std::size_t shift = a.size() - b.size();
            for (std::size_t j = 0; j < b.size(); ++j) {
                a[shift + j] = static_cast<std::uint8_t>((a[shift + j] + (p - f) * b[j] % p) % p);
            }
            ptrim(a);
            if (a.size() < b.size()) break;
        }
        std::swap(a, b);
    }
    return a;
}

inline bool is_irreducible(const PPoly& f, std::uint32_t p) {
    const std::size_t k = f.size() - 1;
    if (k == 0) return false;
    if (k == 1) return true;
    std::vector<std::size_t> checkpoints;
    for (std::size_t r = 2; r <= k; ++r) {
        if (k % r == 0 && is_prime_u64(r)) checkpoints.push_back(k / r);
    }
    PPoly x{0, 1};
    PPoly xq = x;
    for (std::size_t j = 1; j <= k; ++j) {
        xq = ppowmod(xq, p, f, p);
        if (std::find(checkpoints.begin(), checkpoints.end(), j) != checkpoints.end()) {
            // gcd(x^{p^j} - x, f) must be constant
            PPoly diff = xq;
            if (diff.size() < 2) diff.resize(2, 0);
            diff[1] = static_cast<std::uint8_t>((diff[1] + p - 1) % p);
            ptrim(diff);
            PPoly g = pgcd(diff, f, p);
            if (g.size() > 1) return false;
        }
    }
    PPoly diff = xq;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = static_cast<std::uint8_t>((diff[1] + p - 1) % p);
    ptrim(diff);
    return diff.empty();
}

}  // namespace detail

/// One level of a field tower: F_{p^k}, immutable after construction and
/// safe to share across threads. Elements carry a pointer to their field, so
/// fields are handed out as shared_ptr and never copied.
class Field {
public:
    static std::shared_ptr<const Field> make(std::uint32_t p, std::uint32_t degree,
                                             std::uint64_t budget = kDefaultBudget) {
        return std::shared_ptr<const Field>(new Field(p, degree, budget));
    }

    std::uint32_t characteristic() const { return p_; }
    std::uint32_t degree() const { return deg_; }
    std::uint64_t order() const { return order_; }
    std::uint64_t budget() const { return budget_; }

    /// Monic defining modulus over F_p, little-endian, length degree()+1.
    const std::vector<std::uint8_t>& modulus() const { return modulus_; }

    FieldElement zero() const { return FieldElement{this, {}}; }

    FieldElement one() const {
        FieldElement e{this, {}};
        e.coeff[0] = 1;
        return e;
    }

    FieldElement from_coeffs(const std::vector<std::uint8_t>& c) const {
        if (c.size() > deg_) throw ArgumentError("coefficient vector longer than field degree");
        FieldElement e{this, {}};
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c[i] >= p_) throw ArgumentError("coefficient out of range");
            e.coeff[i] = c[i];
        }
        return e;
    }

    FieldElement from_uint(std::uint64_t v) const {
        // Prime-subfield constant v mod p.
        FieldElement e{this, {}};
        e.coeff[0] = static_cast<std::uint8_t>(v % p_);
        return e;
    }

    /// idx-th element in the canonical enumeration: coefficient vectors read
    /// as base-p integers, least-significant coefficient first.
    FieldElement element_at(std::uint64_t idx) const {
        if (idx >= order_) throw ArgumentError("element index out of range");
        FieldElement e{this, {}};
        for (std::uint32_t j = 0; j < deg_ && idx; ++j) {
            e.coeff[j] = static_cast<std::uint8_t>(idx % p_);
            idx /= p_;
        }
        return e;
    }

    std::uint64_t index_of(const FieldElement& e) const {
        check_mine(e);
        std::uint64_t idx = 0;
        for (std::uint32_t j = deg_; j-- > 0;) idx = idx * p_ + e.coeff[j];
        return idx;
    }

    FieldElement add(const FieldElement& a, const FieldElement& b) const {
        check_mine(a);
        check_mine(b);
        FieldElement r{this, {}};
        for (std::uint32_t j = 0; j < deg_; ++j) {
            r.coeff[j] = static_cast<std::uint8_t>((a.coeff[j] + b.coeff[j]) % p_);
        }
        return r;
    }

    FieldElement sub(const FieldElement& a, const FieldElement& b) const {
        check_mine(a);
        check_mine(b);
        FieldElement r{this, {}};
        for (std::uint32_t j = 0; j < deg_; ++j) {
            r.coeff[j] = static_cast<std::uint8_t>((a.coeff[j] + p_ - b.coeff[j]) % p_);
        }
        return r;
    }

    FieldElement neg(const FieldElement& a) const { return sub(zero(), a); }

    FieldElement mul(const FieldElement& a, const FieldElement& b) const {
        check_mine(a);
        check_mine(b);
        std::array<std::uint32_t, 2 * kMaxCoeffs> acc{};
        for (std::uint32_t i = 0; i < deg_; ++i) {
            if (!a.coeff[i]) continue;
            const std::uint32_t ai = a.coeff[i];
            for (std::uint32_t j = 0; j < deg_; ++j) acc[i + j] += ai * b.coeff[j];
        }
        for (std::uint32_t k = 2 * deg_ - 1; k-- > deg_;) {
            std::uint32_t c = acc[k] % p_;
            if (!c) continue;
            acc[k] = 0;
            for (std::uint32_t j = 0; j < deg_; ++j) {
                acc[k - deg_ + j] = (acc[k - deg_ + j] + c * (p_ - modulus_[j])) % p_;
            }
        }
        FieldElement r{this, {}};
        for (std::uint32_t j = 0; j < deg_; ++j) r.coeff[j] = static_cast<std::uint8_t>(acc[j] % p_);
        return r;
    }

    FieldElement pow(const FieldElement& a, std::uint64_t e) const {
        check_mine(a);
        FieldElement result = one();
        FieldElement base = a;
        while (e > 0) {
            if (e & 1) result = mul(result, base);
            base = mul(base, base);
            e >>= 1;
        }
        return result;
    }

    FieldElement inv(const FieldElement& a) const {
        check_mine(a);
        if (a.is_zero()) throw ArgumentError("inverse of zero");
        return pow(a, order_ - 2);
    }

    FieldElement scalar_mul(std::uint32_t s, const FieldElement& a) const {
        check_mine(a);
        s %= p_;
        FieldElement r{this, {}};
        for (std::uint32_t j = 0; j < deg_; ++j) {
            r.coeff[j] = static_cast<std::uint8_t>((a.coeff[j] * s) % p_);
        }
        return r;
    }

    /// Matrix of x -> x^p in the power basis.
    const fp::Mat& frobenius_matrix() const { return frob_; }

    /// Matrix of x -> x^{p^k}.
    fp::Mat frobenius_power_matrix(std::uint64_t k) const { return frob_.pow(k); }

    FieldElement apply_matrix(const fp::Mat& m, const FieldElement& e) const {
        check_mine(e);
        std::vector<std::uint8_t> x(e.coeff.begin(), e.coeff.begin() + deg_);
        auto y = m.apply(x);
        FieldElement r{this, {}};
        for (std::uint32_t j = 0; j < deg_; ++j) r.coeff[j] = y[j];
        return r;
    }

    /// F_p-basis of the unique subfield of order p^d (requires d | degree).
    std::vector<FieldElement> subfield_basis(std::uint32_t d) const {
        if (d == 0 || deg_ % d != 0) throw ArgumentError("subfield degree must divide field degree");
        fp::Mat m = frobenius_power_matrix(d).sub(fp::Mat::identity(p_, deg_));
        auto ker = fp::kernel_basis(m);
        if (ker.size() != d) throw InternalError("subfield of wrong dimension");
        std::vector<FieldElement> basis;
        basis.reserve(d);
        for (const auto& v : ker) {
            FieldElement e{this, {}};
            for (std::uint32_t j = 0; j < deg_; ++j) e.coeff[j] = v[j];
            basis.push_back(e);
        }
        return basis;
    }

    /// All p^k combinations of the given elements, in mixed-radix counting
    /// order over the list.
    std::vector<FieldElement> span(const std::vector<FieldElement>& basis) const {
        auto count = try_pow_u64(p_, basis.size());
        if (!count || *count > budget_) throw BudgetError("span too large to enumerate");
        std::vector<FieldElement> out;
        out.reserve(*count);
        std::vector<std::uint32_t> digits(basis.size(), 0);
        for (std::uint64_t i = 0; i < *count; ++i) {
            FieldElement e = zero();
            std::uint64_t v = i;
            for (std::size_t k = 0; k < basis.size(); ++k) {
                std::uint32_t dk = static_cast<std::uint32_t>(v % p_);
                v /= p_;
                if (dk) e = add(e, scalar_mul(dk, basis[k]));
            }
            out.push_back(e);
        }
        return out;
    }

    /// Evaluate a polynomial with prime-field coefficients at e.
    FieldElement eval_prime_poly(const std::vector<std::uint8_t>& poly, const FieldElement& e) const {
        check_mine(e);
        FieldElement acc = zero();
        for (std::size_t k = poly.size(); k-- > 0;) {
            acc = mul(acc, e);
            if (poly[k]) acc = add(acc, scalar_mul(poly[k], one()));
        }
        return acc;
    }

    std::string to_string(const FieldElement& e) const {
        check_mine(e);
        return "e" + std::to_string(index_of(e));
    }

    Field(const Field&) = delete;
    Field& operator=(const Field&) = delete;

private:
    Field(std::uint32_t p, std::uint32_t degree, std::uint64_t budget) : p_(p), deg_(degree), budget_(budget) {
        if (!is_prime_u64(p)) throw ArgumentError("characteristic must be prime");
        if (p >= 256) throw ArgumentError("characteristic must be < 256");
        if (degree == 0 || degree > kMaxCoeffs) throw ArgumentError("unsupported extension degree");
        auto ord = try_pow_u64(p, degree);
        if (!ord || *ord > budget) throw BudgetError("field order exceeds enumeration budget");
        order_ = *ord;
        modulus_ = find_modulus();
        frob_ = build_frobenius();
    }

    void check_mine(const FieldElement& e) const {
        if (e.field != this) throw ArgumentError("element belongs to a different field");
    }

    std::vector<std::uint8_t> find_modulus() const {
        if (deg_ == 1) return {0, 1};
        std::uint64_t span = order_;  // p^deg choices of lower coefficients
        detail::PPoly f(deg_ + 1, 0);
        f[deg_] = 1;
        for (std::uint64_t idx = 0; idx < span; ++idx) {
            std::uint64_t v = idx;
            for (std::uint32_t j = 0; j < deg_; ++j) {
                f[j] = static_cast<std::uint8_t>(v % p_);
                v /= p_;
            }
            if (detail::is_irreducible(f, p_)) return f;
        }
        throw InternalError("no irreducible polynomial found");
    }

    fp::Mat build_frobenius() const {
        // Column j is (T^p)^j mod modulus.
        detail::PPoly x{0, 1};
        detail::PPoly r = detail::ppowmod(x, p_, modulus_, p_);
        fp::Mat m(p_, deg_, deg_);
        detail::PPoly col{1};
        for (std::uint32_t j = 0; j < deg_; ++j) {
            for (std::size_t i = 0; i < col.size(); ++i) m.at(i, j) = col[i];
            if (j + 1 < deg_) col = detail::pmulmod(col, r, modulus_, p_);
        }
        return m;
    }

    std::uint32_t p_ = 0;
    std::uint32_t deg_ = 0;
    std::uint64_t order_ = 0;
    std::uint64_t budget_ = 0;
    std::vector<std::uint8_t> modulus_;
    fp::Mat frob_;
};

inline FieldElement operator+(const FieldElement& a, const FieldElement& b) { return a.field->add(a, b); }
inline FieldElement operator-(const FieldElement& a, const FieldElement& b) { return a.field->sub(a, b); }
inline FieldElement operator*(const FieldElement& a, const FieldElement& b) { return a.field->mul(a, b); }
inline FieldElement operator-(const FieldElement& a) { return a.field->neg(a); }

}  // namespace symfield
