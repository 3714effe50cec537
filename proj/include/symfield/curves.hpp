#pragma once

// The symmetric curve families over F_{q^n} and their invariants:
//
//   additive family     y^{q^(n-1)} + ... + y = s_{n,i}(x),      2 <= i <= n
//   radical family      y^{(q^n-1)/(q-1)}     = s_{n,i}(x),      1 <= i <= n-1
//   trace-norm          trace(y) = norm(x) down to F_{q^m},      m | n, m != n
//   subcovers           L_{W'}(z) = s_{n,i}(x) for W below the trace-zero group
//   tower step          y^q + y = x^(q+1)/(x^q + x) over F_{q^2}
//   Hermitian           y^q + y = x^(q+1) over F_{q^2} (additive family, n = 2)
//
// Closed-form invariants are integer-exact and cross-checked against the
// Hurwitz genus identity; the place censuses are exhaustive enumerations
// meant to serve as ground truth for everything countable at these sizes.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "symfield/errors.hpp"
#include "symfield/field.hpp"
#include "symfield/fp_linalg.hpp"
#include "symfield/linearized.hpp"
#include "symfield/sparse_poly.hpp"
#include "symfield/tower.hpp"

namespace symfield {

/// Split a prime power q into (p, m) with q = p^m.
inline std::pair<std::uint32_t, std::uint32_t> factor_prime_power(std::uint64_t q) {
    if (q < 2) throw ArgumentError("q must be at least 2");
    std::uint64_t p = 2;
    while (q % p != 0) {
        ++p;
        if (p * p > q) {
            p = q;
            break;
        }
    }
    std::uint32_t m = 0;
    std::uint64_t v = q;
    while (v % p == 0) {
        v /= p;
        ++m;
    }
    if (v != 1) throw ArgumentError("q is not a prime power");
    return {static_cast<std::uint32_t>(p), m};
}

struct ArtinSchreierSpec {
    std::uint32_t n;
    std::uint64_t q;
    std::uint32_t i;
};

struct KummerSpec {
    std::uint32_t n;
    std::uint64_t q;
    std::uint32_t i;
};

struct TraceNormSpec {
    std::uint32_t n;
    std::uint64_t q;
    std::uint32_t m;  // trace and norm taken down to F_{q^m}
};

struct SubcoverSpec {
    ArtinSchreierSpec base;
    // canonical element indices in F_{q^n} spanning W; empty = the smallest
    // nonzero trace-zero element
    std::vector<std::uint64_t> w_basis;
};

struct GarciaStichtenothSpec {
    std::uint64_t q;
};

using CurveSpec = std::variant<ArtinSchreierSpec, KummerSpec, TraceNormSpec, SubcoverSpec, GarciaStichtenothSpec>;

inline ArtinSchreierSpec hermitian_spec(std::uint64_t q) { return ArtinSchreierSpec{2, q, 2}; }

inline void validate(const ArtinSchreierSpec& s) {
    factor_prime_power(s.q);
    if (s.n < 2) throw ArgumentError("additive family needs n >= 2");
    if (s.i < 2 || s.i > s.n) throw ArgumentError("additive family needs 2 <= i <= n");
}

inline void validate(const KummerSpec& s) {
    factor_prime_power(s.q);
    if (s.n < 2) throw ArgumentError("radical family needs n >= 2");
    if (s.i < 1 || s.i >= s.n) throw ArgumentError("radical family needs 1 <= i <= n-1");
}

inline void validate(const TraceNormSpec& s) {
    factor_prime_power(s.q);
    if (s.m == 0 || s.n % s.m != 0 || s.m == s.n) throw ArgumentError("need m | n with m != n");
}

inline void validate(const GarciaStichtenothSpec& s) { factor_prime_power(s.q); }

/// Reduce a trace-norm spec to the equivalent additive-family spec: taking
/// trace and norm to F_{q^m} is the (n/m, q^m)-shape with i = n/m.
inline ArtinSchreierSpec as_additive(const TraceNormSpec& s) {
    validate(s);
    std::uint32_t r = s.n / s.m;
    std::uint64_t qm = checked_pow_u64(s.q, s.m);
    return ArtinSchreierSpec{r, qm, r};
}

/// Tower that hosts the family's constants field at level kConstants.
inline Tower tower_for(const CurveSpec& spec, std::uint64_t budget = kDefaultBudget) {
    return std::visit(
        [&](const auto& s) -> Tower {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ArtinSchreierSpec>) {
                auto [p, m] = factor_prime_power(s.q);
                return Tower(p, m, s.n, budget);
            } else if constexpr (std::is_same_v<T, KummerSpec>) {
                auto [p, m] = factor_prime_power(s.q);
                return Tower(p, m, s.n, budget);
            } else if constexpr (std::is_same_v<T, TraceNormSpec>) {
                ArtinSchreierSpec a = as_additive(s);
                auto [p, m] = factor_prime_power(a.q);
                return Tower(p, m, a.n, budget);
            } else if constexpr (std::is_same_v<T, SubcoverSpec>) {
                auto [p, m] = factor_prime_power(s.base.q);
                return Tower(p, m, s.base.n, budget);
            } else {
                auto [p, m] = factor_prime_power(s.q);
                return Tower(p, m, 2, budget);
            }
        },
        spec);
}

struct RamifiedPlaceData {
    std::uint32_t place_degree = 1;  // degree over the constants field
    std::uint32_t num_places = 1;    // places sharing this (degree, valuation)
    std::uint64_t valuation = 0;     // |v_P| of the right-hand side
    std::uint64_t r = 1;             // gcd(extension degree, valuation)
    std::uint64_t e = 1;             // ramification index of the place above
    std::uint64_t d = 0;             // different exponent of the place above
};

struct CurveInvariants {
    std::string family;
    std::vector<std::pair<std::string, std::uint64_t>> params;
    std::uint64_t degree = 0;
    std::uint64_t genus = 0;
    std::uint64_t n1 = 0;  // predicted count of degree-one places
    std::optional<std::uint64_t> coprime_deg;
    std::optional<std::uint64_t> different_exponent;
    std::optional<std::uint64_t> ramification_break;  // first index with trivial group
    std::uint64_t different_degree = 0;
    std::vector<RamifiedPlaceData> ramified_places;
};

namespace detail {

inline std::uint64_t coprime_deg_formula(std::uint32_t n, std::uint64_t q, std::uint32_t i) {
    // m_i = q^(n-1) + q^(n-2) + ... + q^(n-i+1) + 1
    std::uint64_t mi = 1;
    std::uint64_t pw = checked_pow_u64(q, n - 1);
    for (std::uint32_t j = 0; j + 1 < i; ++j) {
        mi = checked_add_u64(mi, pw);
        pw /= q;
    }
    return mi;
}

inline void hurwitz_check(std::uint64_t degree, std::uint64_t genus, std::uint64_t diff_degree) {
    // 2g - 2 = degree * (-2) + deg Diff, over the rational function field
    std::int64_t lhs = 2 * static_cast<std::int64_t>(genus) - 2;
    std::int64_t rhs = -2 * static_cast<std::int64_t>(degree) + static_cast<std::int64_t>(diff_degree);
    if (lhs != rhs) throw InternalError("Hurwitz genus identity violated");
}

inline CurveInvariants additive_invariants(std::uint32_t n, std::uint64_t q, std::uint32_t i,
                                           std::uint64_t subcover_degree = 0) {
    // subcover_degree = 0 means the full extension of degree q^(n-1)
    std::uint64_t full = checked_pow_u64(q, n - 1);
    std::uint64_t deg = subcover_degree ? subcover_degree : full;
    std::uint64_t mi = coprime_deg_formula(n, q, i);
    std::uint64_t d = checked_mul_u64(deg - 1, mi + 1);
    std::uint64_t g2 = checked_mul_u64(deg - 1, mi - 1);
    if (g2 % 2 != 0) throw InternalError("genus formula did not produce an integer");
    // pole order of s_{n,i}(x) at infinity: q^(n-1) + ... + q^(n-i)
    std::uint64_t pole = 0;
    for (std::uint32_t j = n - i; j <= n - 1; ++j) pole = checked_add_u64(pole, checked_pow_u64(q, j));
    CurveInvariants inv;
    inv.degree = deg;
    inv.genus = g2 / 2;
    inv.n1 = checked_add_u64(checked_mul_u64(checked_pow_u64(q, n), deg), 1);
    inv.coprime_deg = mi;
    inv.different_exponent = d;
    inv.ramification_break = mi + 1;  // G_0 = ... = G_{m_i}, then trivial
    inv.different_degree = d;         // the single ramified place is rational
    inv.ramified_places.push_back({1, 1, pole, 0, deg, d});
    hurwitz_check(deg, inv.genus, inv.different_degree);
    return inv;
}

}  // namespace detail

inline CurveInvariants invariants(const ArtinSchreierSpec& s) {
    validate(s);
    CurveInvariants inv = detail::additive_invariants(s.n, s.q, s.i);
    inv.family = "as";
    inv.params = {{"n", s.n}, {"q", s.q}, {"i", s.i}};
    return inv;
}

inline CurveInvariants invariants(const TraceNormSpec& s) {
    ArtinSchreierSpec a = as_additive(s);
    CurveInvariants inv = invariants(a);
    inv.family = "tracenorm";
    inv.params = {{"n", s.n}, {"q", s.q}, {"m", s.m}};
    // cross-check the direct closed forms
    std::uint64_t n1 = checked_add_u64(checked_pow_u64(s.q, 2 * s.n - s.m), 1);
    std::uint64_t qm = checked_pow_u64(s.q, s.m);
    std::uint64_t qnm = checked_pow_u64(s.q, s.n - s.m);
    std::uint64_t g2 = checked_mul_u64(qm, checked_mul_u64(qnm - 1, qnm - 1)) / (qm - 1);
    if (inv.n1 != n1 || inv.genus * 2 != g2)
        throw InternalError("trace-norm closed forms disagree with the additive-family reduction");
    return inv;
}

inline CurveInvariants invariants(const GarciaStichtenothSpec& s) {
    validate(s);
    const std::uint64_t q = s.q;
    CurveInvariants inv;
    inv.family = "gs";
    inv.params = {{"q", q}};
    inv.degree = q;
    inv.genus = (q - 1) * (q - 1);
    inv.n1 = q * q * q - q * q + 2 * q;
    inv.different_exponent = 2 * (q - 1);
    // q totally ramified rational places: the pole of x and the q-1 nonzero
    // trace-zero points; every right-hand-side pole there is simple.
    inv.different_degree = 2 * (q - 1) * q;
    inv.ramified_places.push_back({1, static_cast<std::uint32_t>(q), 1, 1, q, 2 * (q - 1)});
    detail::hurwitz_check(inv.degree, inv.genus, inv.different_degree);
    return inv;
}

/// Root structure of s_{n,i} over the algebraic closure, collected by
/// scanning F_{q^k} for k = 1..n (every root lives in that range). Returns
/// for each exact degree d over F_q the number of distinct roots and their
/// shared multiplicities per Frobenius orbit.
struct RootOrbit {
    std::uint32_t exact_degree;  // over F_q
    std::uint32_t multiplicity;
    std::uint32_t orbit_count;  // number of size-d orbits with this multiplicity
};

inline std::vector<RootOrbit> symmetric_root_orbits(std::uint32_t n, std::uint64_t q, std::uint32_t i,
                                                    std::uint64_t budget = kDefaultBudget) {
    auto [p, m] = factor_prime_power(q);
    std::vector<RootOrbit> out;
    for (std::uint32_t d = 1; d <= n; ++d) {
        auto f = Field::make(p, m * d, budget);
        SparsePoly s = elementary_symmetric(f, n, q, i);
        // roots of exact degree d over F_q, keyed by multiplicity
        std::map<std::uint32_t, std::uint32_t> count_by_mult;
        for (const auto& [alpha, mult] : roots_with_multiplicity(s)) {
            FieldElement cur = alpha;
            std::uint32_t deg = 0;
            for (std::uint32_t j = 1; j <= d; ++j) {
                cur = f->pow(cur, q);
                if (cur == alpha) {
                    deg = j;
                    break;
                }
            }
            if (deg == d) ++count_by_mult[mult];
        }
        for (auto [mult, count] : count_by_mult) {
            if (count % d != 0) throw InternalError("roots do not close into Frobenius orbits");
            out.push_back({d, mult, count / d});
        }
    }
    return out;
}

inline CurveInvariants invariants(const KummerSpec& s, std::uint64_t budget = kDefaultBudget) {
    validate(s);
    const std::uint64_t qi = checked_pow_u64(s.q, s.i);
    const std::uint64_t qn = checked_pow_u64(s.q, s.n);
    const std::uint64_t deg = (qn - 1) / (s.q - 1);
    CurveInvariants inv;
    inv.family = "kummer";
    inv.params = {{"n", s.n}, {"q", s.q}, {"i", s.i}};
    inv.degree = deg;

    const std::uint64_t v0 = (qi - 1) / (s.q - 1);
    const std::uint64_t vinf = checked_mul_u64(checked_pow_u64(s.q, s.n - s.i), v0);
    auto guard = [&](std::uint64_t v) {
        std::uint64_t r = std::gcd(deg, v);
        if (r != 1) {
            throw ArgumentError("unsupported ramification: gcd(degree, valuation) = " + std::to_string(r));
        }
    };
    guard(vinf);
    // the place above infinity: totally ramified, tame
    inv.ramified_places.push_back({1, 1, vinf, 1, deg, deg - 1});
    std::uint64_t diff_total = deg - 1;

    // the root at zero carries multiplicity (q^i-1)/(q-1): the lowest
    // exponent of s_{n,i} is 1 + q + ... + q^(i-1)
    {
        auto f = Field::make(2, 1);
        SparsePoly s_check = elementary_symmetric(f, s.n, s.q, s.i);
        if (s_check.terms().begin()->first != v0) throw InternalError("zero root multiplicity mismatch");
    }
    std::uint64_t zeros_in_constants = 0;  // distinct zeros of s_{n,i} inside F_{q^n}
    for (const auto& orbit : symmetric_root_orbits(s.n, s.q, s.i, budget)) {
        guard(orbit.multiplicity);
        if (s.n % orbit.exact_degree == 0) {
            zeros_in_constants += static_cast<std::uint64_t>(orbit.exact_degree) * orbit.orbit_count;
        }
        std::uint32_t g = std::gcd(orbit.exact_degree, s.n);
        std::uint32_t place_degree = orbit.exact_degree / g;
        std::uint32_t places = orbit.orbit_count * g;
        inv.ramified_places.push_back(
            {place_degree, places, orbit.multiplicity, 1, deg, deg - 1});
        diff_total += static_cast<std::uint64_t>(places) * place_degree * (deg - 1);
    }
    if (s.i > 1 && !zero_root_checked && v0 > 1) throw InternalError("zero root not seen in the scan");
    inv.different_degree = diff_total;
    std::int64_t g2 = static_cast<std::int64_t>(diff_total) - 2 * static_cast<std::int64_t>(deg) + 2;
    if (g2 < 0 || g2 % 2 != 0) throw InternalError("tame Hurwitz computation produced a non-genus");
    inv.genus = static_cast<std::uint64_t>(g2) / 2;
    detail::hurwitz_check(inv.degree, inv.genus, inv.different_degree);
    // zeros contribute one rational place each; every other x-value splits
    // completely since its value is a (q-1)-st power residue in F_{q^n}
    inv.n1 = checked_add_u64(
        checked_add_u64(zeros_in_constants, checked_mul_u64(qn - zeros_in_constants, deg)), 1);
    return inv;
}

/// Resolve the subgroup W of a subcover spec inside the tower's trace-zero
/// group; empty basis means span of the smallest nonzero trace-zero element.
inline Subgroup resolve_subcover_group(const SubcoverSpec& s, const Tower& t) {
    validate(s.base);
    auto big = t.level(Tower::kConstants);
    auto tz = t.trace_zero_subgroup();
    Subgroup v = Subgroup::from_elements(big.get(), tz);
    std::vector<FieldElement> gens;
    if (s.w_basis.empty()) {
        gens.push_back(v.elements()[1]);
        std::uint64_t best = big->index_of(gens[0]);
        for (const auto& e : v.elements()) {
            if (!e.is_zero() && big->index_of(e) < best) {
                best = big->index_of(e);
                gens[0] = e;
            }
        }
    } else {
        for (auto idx : s.w_basis) gens.push_back(big->element_at(idx));
    }
    Subgroup w = Subgroup::from_elements(big.get(), gens);
    if (w.dimension() == 0) throw ArgumentError("subcover subgroup W must be nontrivial");
    for (const auto& e : w.elements()) {
        if (!v.contains(e)) throw ArgumentError("W is not a subgroup of the trace-zero group");
    }
    if (w.dimension() >= v.dimension()) throw ArgumentError("subcover subgroup W must be proper");
    return w;
}

struct SubcoverEquation {
    LinearizedPoly lhs;  // monic L_{W'} in the new variable
    SparsePoly rhs;      // s_{n,i}(x), unchanged
    std::uint64_t degree = 0;
};

/// The subcover fixed by W: z = L_W(y) satisfies L_{W'}(z) = s_{n,i}(x)
/// with W' = L_W(V). The left side is normalized monic.
inline SubcoverEquation subcover_equation(const ArtinSchreierSpec& base, const Subgroup& w, const Tower& t) {
    validate(base);
    auto big = t.level(Tower::kConstants);
    Subgroup v = Subgroup::from_elements(big.get(), t.trace_zero_subgroup());
    for (const auto& e : w.elements()) {
        if (!v.contains(e)) throw ArgumentError("W is not a subgroup of the trace-zero group");
    }
    LinearizedPoly lw = subspace_polynomial(w);
    Subgroup wprime = image_subgroup(lw, v);
    SubcoverEquation eq;
    eq.lhs = subspace_polynomial(wprime).monic();
    eq.rhs = elementary_symmetric(big, base.n, base.q, base.i);
    eq.degree = wprime.size();
    if (eq.degree * w.size() != v.size()) throw InternalError("subcover degree mismatch");
    return eq;
}

inline CurveInvariants invariants(const SubcoverSpec& s, const Tower& t) {
    Subgroup w = resolve_subcover_group(s, t);
    std::uint64_t full = checked_pow_u64(s.base.q, s.base.n - 1);
    std::uint64_t deg = full / w.size();
    CurveInvariants inv = detail::additive_invariants(s.base.n, s.base.q, s.base.i, deg);
    inv.family = "subcover";
    inv.params = {{"n", s.base.n}, {"q", s.base.q}, {"i", s.base.i}, {"|W|", w.size()}};
    inv.ramified_places[0].valuation = 0;
    return inv;
}

inline CurveInvariants invariants(const SubcoverSpec& s, std::uint64_t budget = kDefaultBudget) {
    Tower t = tower_for(s, budget);
    return invariants(s, t);
}

inline CurveInvariants invariants(const CurveSpec& spec, std::uint64_t budget = kDefaultBudget) {
    return std::visit(
        [&](const auto& s) -> CurveInvariants {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, KummerSpec>) {
                return invariants(s, budget);
            } else if constexpr (std::is_same_v<T, SubcoverSpec>) {
                return invariants(s, budget);
            } else {
                return invariants(s);
            }
        },
        spec);
}

/// Exhaustive census of degree-one places with the given tower level as the
/// constants field.
struct PlaceCensus {
    std::uint64_t n1 = 0;
    std::optional<std::uint64_t> n2;
    std::vector<std::uint32_t> per_x;  // degree-one places above each finite x-value
    std::uint64_t infinity_contribution = 1;
};

namespace detail {

inline std::vector<std::uint32_t> fiber_counts(const Field* k, const fp::Mat& frob_q, std::uint32_t n_terms) {
    // fibers of y -> y + y^q + ... + y^{q^(n_terms-1)}
    std::vector<std::uint32_t> counts(k->order(), 0);
    for (std::uint64_t iy = 0; iy < k->order(); ++iy) {
        FieldElement y = k->element_at(iy);
        FieldElement acc = y, cur = y;
        for (std::uint32_t j = 1; j < n_terms; ++j) {
            cur = k->apply_matrix(frob_q, cur);
            acc = k->add(acc, cur);
        }
        ++counts[k->index_of(acc)];
    }
    return counts;
}

inline std::vector<std::uint32_t> power_fiber_counts(const Field* k, std::uint64_t d) {
    std::vector<std::uint32_t> counts(k->order(), 0);
    for (std::uint64_t iy = 0; iy < k->order(); ++iy) {
        ++counts[k->index_of(k->pow(k->element_at(iy), d))];
    }
    return counts;
}

inline PlaceCensus census_over(const CurveSpec& spec, const Tower& t, int level);

}  // namespace detail

inline PlaceCensus count_n1(const CurveSpec& spec, const Tower& t) {
    return detail::census_over(spec, t, Tower::kConstants);
}

/// Places of degree two: new rational points over the quadratic constant
/// extension, in Galois-conjugate pairs. The place above infinity is
/// rational at both levels, so its contribution cancels.
inline std::uint64_t count_n2(const CurveSpec& spec, const Tower& t) {
    PlaceCensus big = detail::census_over(spec, t, Tower::kQuadratic);
    PlaceCensus small = detail::census_over(spec, t, Tower::kConstants);
    if (big.n1 < small.n1 || (big.n1 - small.n1) % 2 != 0)
        throw InternalError("census difference is not an even surplus");
    return (big.n1 - small.n1) / 2;
}

namespace detail {

inline PlaceCensus census_over(const CurveSpec& spec, const Tower& t, int level) {
    const auto& kptr = t.level(level);
    const Field* k = kptr.get();
    PlaceCensus census;
    census.per_x.assign(k->order(), 0);

    auto run_additive = [&](std::uint32_t n, std::uint64_t q, const SparsePoly& rhs) {
        auto [p, m] = factor_prime_power(q);
        if (p != k->characteristic()) throw ArgumentError("spec and tower characteristic differ");
        fp::Mat frob_q = k->frobenius_power_matrix(m);
        std::vector<std::uint32_t> fibers = fiber_counts(k, frob_q, n);
        for (std::uint64_t ix = 0; ix < k->order(); ++ix) {
            census.per_x[ix] = fibers[k->index_of(rhs.evaluate(k->element_at(ix)))];
        }
    };

    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ArtinSchreierSpec>) {
                validate(s);
                if (t.q() != s.q || t.n() != s.n) throw ArgumentError("tower does not match the spec");
                run_additive(s.n, s.q, elementary_symmetric(kptr, s.n, s.q, s.i));
            } else if constexpr (std::is_same_v<T, TraceNormSpec>) {
                ArtinSchreierSpec a = as_additive(s);
                if (t.q() != a.q || t.n() != a.n) throw ArgumentError("tower does not match the spec");
                run_additive(a.n, a.q, elementary_symmetric(kptr, a.n, a.q, a.i));
            } else if constexpr (std::is_same_v<T, SubcoverSpec>) {
                if (t.q() != s.base.q || t.n() != s.base.n) throw ArgumentError("tower does not match the spec");
                Subgroup w = resolve_subcover_group(s, t);
                SubcoverEquation eq = subcover_equation(s.base, w, t);
                // lift the linearized left side to the counting level
                LinearizedPoly lhs(k);
                for (std::size_t j = 0; j < eq.lhs.coeffs().size(); ++j) {
                    lhs.set_coeff(j, t.embed(eq.lhs.coeffs()[j], level));
                }
                SparsePoly rhs = elementary_symmetric(kptr, s.base.n, s.base.q, s.base.i);
                std::vector<std::uint32_t> fibers(k->order(), 0);
                for (std::uint64_t iy = 0; iy < k->order(); ++iy) {
                    ++fibers[k->index_of(lhs.evaluate(k->element_at(iy)))];
                }
                for (std::uint64_t ix = 0; ix < k->order(); ++ix) {
                    census.per_x[ix] = fibers[k->index_of(rhs.evaluate(k->element_at(ix)))];
                }
            } else if constexpr (std::is_same_v<T, KummerSpec>) {
                validate(s);
                if (t.q() != s.q || t.n() != s.n) throw ArgumentError("tower does not match the spec");
                const std::uint64_t deg = (checked_pow_u64(s.q, s.n) - 1) / (s.q - 1);
                SparsePoly rhs = elementary_symmetric(kptr, s.n, s.q, s.i);
                // guards: every ramified place must be totally ramified with a
                // rational place above (r = 1), including infinity
                if (std::gcd(deg, *rhs.degree()) != 1)
                    throw ArgumentError("unsupported ramification at infinity");
                for (const auto& [alpha, mult] : roots_with_multiplicity(rhs)) {
                    if (std::gcd(deg, static_cast<std::uint64_t>(mult)) != 1)
                        throw ArgumentError("unsupported ramification at a finite place");
                }
                std::vector<std::uint32_t> fibers = power_fiber_counts(k, deg);
                for (std::uint64_t ix = 0; ix < k->order(); ++ix) {
                    census.per_x[ix] = fibers[k->index_of(rhs.evaluate(k->element_at(ix)))];
                }
            } else {  // GarciaStichtenothSpec
                validate(s);
                auto [p, m] = factor_prime_power(s.q);
                if (t.q() != s.q || t.n() != 2) throw ArgumentError("tower does not match the spec");
                fp::Mat frob_q = k->frobenius_power_matrix(m);
                std::vector<std::uint32_t> fibers = fiber_counts(k, frob_q, 2);
                for (std::uint64_t ix = 0; ix < k->order(); ++ix) {
                    FieldElement x = k->element_at(ix);
                    FieldElement xq = k->apply_matrix(frob_q, x);
                    FieldElement den = k->add(xq, x);
                    if (ix == 0) {
                        // x^(q+1)/(x^q+x) = x^q/(x^(q-1)+1) evaluates to 0 at x = 0
                        census.per_x[ix] = fibers[k->index_of(k->zero())];
                    } else if (den.is_zero()) {
                        census.per_x[ix] = 1;  // totally ramified rational place
                    } else {
                        FieldElement w = k->mul(k->mul(xq, x), k->inv(den));
                        census.per_x[ix] = fibers[k->index_of(w)];
                    }
                }
            }
        },
        spec);

    census.infinity_contribution = 1;
    census.n1 = census.infinity_contribution;
    for (auto c : census.per_x) census.n1 += c;
    return census;
}

}  // namespace detail

/// FNV-1a digest of a census, for regression records.
inline std::uint64_t census_digest(const PlaceCensus& c) {
    std::uint64_t h = 14695981039346656037ull;
    auto mix = [&](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    mix(c.n1);
    mix(c.infinity_contribution);
    for (auto v : c.per_x) mix(v);
    return h;
}

/// Elements alpha of F_{q^(2n)} outside F_{q^n} whose image under the
/// (n-1, i-1) symmetric polynomial lands back in F_{q^n}. An empty list
/// rules out degree-two places for the additive family member i.
inline std::vector<FieldElement> find_n2_witnesses(std::uint32_t n, std::uint64_t q, std::uint32_t i,
                                                   const Tower& t) {
    if (t.q() != q || t.n() != n) throw ArgumentError("tower does not match the parameters");
    if (i < 2 || i > n) throw ArgumentError("need 2 <= i <= n");
    auto big = t.level(Tower::kQuadratic);
    auto [p, m] = factor_prime_power(q);
    const std::uint64_t qn = t.qn();
    std::vector<FieldElement> out;
    if (i == 2) {
        // s_{n-1,1} is additive, so the witness condition is the kernel of
        // the F_p-linear map (Frob^n - 1) o (1 + Frob + ... + Frob^{n-2}),
        // minus the subfield F_{q^n}. Identical to the raw scan, without
        // enumerating the large level.
        fp::Mat frob_q = big->frobenius_power_matrix(m);
        fp::Mat sum(p, big->degree(), big->degree());
        fp::Mat cur = fp::Mat::identity(p, big->degree());
        for (std::uint32_t j = 0; j + 1 < n; ++j) {
            for (std::size_t r = 0; r < sum.rows(); ++r) {
                for (std::size_t c = 0; c < sum.cols(); ++c) {
                    sum.at(r, c) = static_cast<std::uint8_t>((sum.at(r, c) + cur.at(r, c)) % p);
                }
            }
            if (j + 2 < n) cur = cur.mul(frob_q);
        }
        fp::Mat psi = frob_q.pow(n).sub(fp::Mat::identity(p, big->degree())).mul(sum);
        auto kernel = fp::kernel_basis(psi);
        std::vector<FieldElement> basis;
        for (const auto& v : kernel) {
            FieldElement e{big.get(), {}};
            for (std::uint32_t j = 0; j < big->degree(); ++j) e.coeff[j] = v[j];
            basis.push_back(e);
        }
        for (const auto& alpha : big->span(basis)) {
            if (big->pow(alpha, qn) == alpha) continue;  // inside F_{q^n}
            out.push_back(alpha);
        }
        std::sort(out.begin(), out.end(), [&](const FieldElement& a, const FieldElement& b) {
            return big->index_of(a) < big->index_of(b);
        });
    } else {
        SparsePoly s = elementary_symmetric(big, n - 1, q, i - 1);
        for (std::uint64_t ia = 0; ia < big->order(); ++ia) {
            FieldElement alpha = big->element_at(ia);
            if (big->pow(alpha, qn) == alpha) continue;
            FieldElement v = s.evaluate(alpha);
            if (big->pow(v, qn) == v) out.push_back(alpha);
        }
    }
    return out;
}

/// Raw-scan variant of the witness search (used to cross-check the linear
/// route at small sizes).
inline std::vector<FieldElement> find_n2_witnesses_scan(std::uint32_t n, std::uint64_t q, std::uint32_t i,
                                                        const Tower& t) {
    auto big = t.level(Tower::kQuadratic);
    const std::uint64_t qn = t.qn();
    SparsePoly s = elementary_symmetric(big, n - 1, q, i - 1);
    std::vector<FieldElement> out;
    for (std::uint64_t ia = 0; ia < big->order(); ++ia) {
        FieldElement alpha = big->element_at(ia);
        if (big->pow(alpha, qn) == alpha) continue;
        FieldElement v = s.evaluate(alpha);
        if (big->pow(v, qn) == v) out.push_back(alpha);
    }
    return out;
}

/// The translation automorphism group of the i = 2 family member: all pairs
/// (delta, tau) with trace-shape(delta) = s_{n,2}(tau), acting by
///   x -> x + tau,  y -> y + x(tau^q + ... + tau^{q^(n-1)}) + delta.
struct AutomorphismSet {
    std::vector<std::pair<FieldElement, FieldElement>> pairs;  // (delta, tau)
};

inline AutomorphismSet translation_automorphisms(std::uint32_t n, std::uint64_t q, const Tower& t) {
    if (t.q() != q || t.n() != n) throw ArgumentError("tower does not match the parameters");
    auto big = t.level(Tower::kConstants);
    auto [p, m] = factor_prime_power(q);
    fp::Mat frob_q = big->frobenius_power_matrix(m);
    SparsePoly s2 = elementary_symmetric(big, n, q, 2);
    // group deltas by the value of the additive left side
    std::map<std::uint64_t, std::vector<FieldElement>> by_trace;
    for (std::uint64_t idel = 0; idel < big->order(); ++idel) {
        FieldElement d = big->element_at(idel);
        FieldElement acc = d, cur = d;
        for (std::uint32_t j = 1; j < n; ++j) {
            cur = big->apply_matrix(frob_q, cur);
            acc = big->add(acc, cur);
        }
        by_trace[big->index_of(acc)].push_back(d);
    }
    AutomorphismSet out;
    for (std::uint64_t itau = 0; itau < big->order(); ++itau) {
        FieldElement tau = big->element_at(itau);
        auto it = by_trace.find(big->index_of(s2.evaluate(tau)));
        if (it == by_trace.end()) continue;
        for (const auto& d : it->second) out.pairs.emplace_back(d, tau);
    }
    std::sort(out.pairs.begin(), out.pairs.end(),
              [&](const auto& a, const auto& b) {
                  auto ka = std::make_pair(big->index_of(a.second), big->index_of(a.first));
                  auto kb = std::make_pair(big->index_of(b.second), big->index_of(b.first));
                  return ka < kb;
              });
    return out;
}

using CurvePoint = std::pair<FieldElement, FieldElement>;  // (x, y)

inline bool on_additive_curve(std::uint32_t n, std::uint64_t q, std::uint32_t i, const Tower& t,
                              const CurvePoint& pt) {
    auto big = t.level(Tower::kConstants);
    SparsePoly s = elementary_symmetric(big, n, q, i);
    FieldElement lhs = big->zero(), cur = pt.second;
    for (std::uint32_t j = 0; j < n; ++j) {
        lhs = big->add(lhs, cur);
        if (j + 1 < n) cur = big->pow(cur, q);
    }
    return lhs == s.evaluate(pt.first);
}

inline CurvePoint apply_automorphism(std::uint32_t n, std::uint64_t q, const Tower& t,
                                     const std::pair<FieldElement, FieldElement>& aut,
                                     const CurvePoint& pt) {
    if (!on_additive_curve(n, q, 2, t, pt)) throw ArgumentError("point is not on the curve");
    auto big = t.level(Tower::kConstants);
    const auto& [delta, tau] = aut;
    FieldElement x2 = big->add(pt.first, tau);
    FieldElement tsum = big->zero();
    FieldElement cur = tau;
    for (std::uint32_t j = 1; j < n; ++j) {
        cur = big->pow(cur, q);
        tsum = big->add(tsum, cur);
    }
    FieldElement y2 = big->add(big->add(pt.second, big->mul(pt.first, tsum)), delta);
    CurvePoint image{x2, y2};
    if (!on_additive_curve(n, q, 2, t, image)) throw InternalError("automorphism left the curve");
    return image;
}

/// Composition of the induced point maps: apply a first, then b.
inline std::pair<FieldElement, FieldElement> compose_automorphisms(
    std::uint32_t n, std::uint64_t q, const Tower& t, const std::pair<FieldElement, FieldElement>& b,
    const std::pair<FieldElement, FieldElement>& a) {
    auto big = t.level(Tower::kConstants);
    FieldElement tau = big->add(a.second, b.second);
    FieldElement tsum_b = big->zero(), cur = b.second;
    for (std::uint32_t j = 1; j < n; ++j) {
        cur = big->pow(cur, q);
        tsum_b = big->add(tsum_b, cur);
    }
    FieldElement delta = big->add(big->add(a.first, b.first), big->mul(a.second, tsum_b));
    return {delta, tau};
}

inline std::vector<CurvePoint> orbit_of(std::uint32_t n, std::uint64_t q, const Tower& t,
                                        const AutomorphismSet& autos, const CurvePoint& pt) {
    auto big = t.level(Tower::kConstants);
    std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
    std::vector<CurvePoint> orbit;
    for (const auto& aut : autos.pairs) {
        CurvePoint img = apply_automorphism(n, q, t, aut, pt);
        auto key = std::make_pair(big->index_of(img.first), big->index_of(img.second));
        if (seen.insert(key).second) orbit.push_back(img);
    }
    return orbit;
}

/// Count degree-one places of the i-family member with constants F_{q^m},
/// gcd(m, n) = 1 and p not dividing n: the additive left side permutes the
/// field, so the count is exactly q^m + 1.
inline std::uint64_t median_place_count(std::uint32_t n, std::uint64_t q, std::uint32_t m_ext,
                                        std::uint32_t i = 2, std::uint64_t budget = kDefaultBudget) {
    auto [p, m] = factor_prime_power(q);
    if (std::gcd<std::uint64_t>(m_ext, n) != 1) throw ArgumentError("need gcd(m, n) = 1");
    if (n % p == 0) throw ArgumentError("need p not dividing n");
    if (i < 1 || i > n) throw ArgumentError("need 1 <= i <= n");
    auto k = Field::make(p, m * m_ext, budget);
    fp::Mat frob_q = k->frobenius_power_matrix(m);
    std::vector<std::uint32_t> fibers = detail::fiber_counts(k.get(), frob_q, n);
    SparsePoly s = elementary_symmetric(k, n, q, i);
    std::uint64_t count = 1;  // the place above infinity
    for (std::uint64_t ix = 0; ix < k->order(); ++ix) {
        count += fibers[k->index_of(s.evaluate(k->element_at(ix)))];
    }
    if (count != k->order() + 1) throw InternalError("median count does not hit q^m + 1");
    return count;
}

/// Necessary-condition check for E_{i,Kum} ~ E_{n-i,Kum}: identical degree,
/// genus and brute-force degree-one counts.
inline bool kummer_iso_check(std::uint32_t n, std::uint64_t q, std::uint32_t i, const Tower& t) {
    KummerSpec a{n, q, i};
    KummerSpec b{n, q, n - i};
    if (i == n - i) return true;
    CurveInvariants ia = invariants(a, t.budget());
    CurveInvariants ib = invariants(b, t.budget());
    if (ia.degree != ib.degree || ia.genus != ib.genus || ia.n1 != ib.n1) return false;
    PlaceCensus ca = count_n1(CurveSpec{a}, t);
    PlaceCensus cb = count_n1(CurveSpec{b}, t);
    return ca.n1 == cb.n1;
}

}  // namespace symfield
