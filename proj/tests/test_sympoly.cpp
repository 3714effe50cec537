#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include "symfield/field.hpp"
#include "symfield/sparse_poly.hpp"
#include "symfield/tower.hpp"

using namespace symfield;

namespace {

std::uint64_t binom(std::uint32_t n, std::uint32_t k) {
    std::uint64_t r = 1;
    for (std::uint32_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

// smallest d >= 1 with alpha^(q^d) = alpha
std::uint32_t exact_degree_over(const FieldElement& alpha, std::uint64_t q, std::uint32_t dmax) {
    FieldElement cur = alpha;
    for (std::uint32_t d = 1; d <= dmax; ++d) {
        cur = alpha.field->pow(cur, q);
        if (cur == alpha) return d;
    }
    return 0;
}

}  // namespace

TEST_CASE("elementary symmetric polynomials expand to the expected terms") {
    auto f2 = Field::make(2, 1);
    SparsePoly s32 = elementary_symmetric(f2, 3, 2, 2);
    // q=2: t^(q^2+q) + t^(q^2+1) + t^(q+1) = t^6 + t^5 + t^3
    CHECK(s32.term_count() == 3);
    CHECK(s32.coeff(6) == f2->one());
    CHECK(s32.coeff(5) == f2->one());
    CHECK(s32.coeff(3) == f2->one());
    CHECK(s32.to_string() == "t^6 + t^5 + t^3");

    // the norm-like polynomial is a single term t^(1+q+...+q^(n-1))
    for (std::uint64_t q : {2ull, 3ull, 4ull}) {
        auto f = Field::make(q == 3 ? 3 : 2, 1);
        SparsePoly s = elementary_symmetric(f, 5, q, 5);
        CHECK(s.term_count() == 1);
        std::uint64_t e = 0, pw = 1;
        for (int j = 0; j < 5; ++j) {
            e += pw;
            pw *= q;
        }
        CHECK(s.coeff(e) == f->one());
    }

    // the trace-like polynomial has n terms t^(q^j)
    SparsePoly s41 = elementary_symmetric(f2, 4, 2, 1);
    CHECK(s41.term_count() == 4);
    for (std::uint64_t e : {1ull, 2ull, 4ull, 8ull}) CHECK(s41.coeff(e) == f2->one());

    // term counts are binomial for the full grid
    auto f3 = Field::make(3, 1);
    for (std::uint32_t n = 2; n <= 5; ++n) {
        for (std::uint32_t i = 1; i <= n; ++i) {
            CHECK(elementary_symmetric(f2, n, 2, i).term_count() == binom(n, i));
            CHECK(elementary_symmetric(f2, n, 4, i).term_count() == binom(n, i));
            CHECK(elementary_symmetric(f3, n, 3, i).term_count() == binom(n, i));
        }
    }
    CHECK_THROWS_AS(elementary_symmetric(f2, 3, 2, 0), ArgumentError);
    CHECK_THROWS_AS(elementary_symmetric(f2, 3, 3, 1), ArgumentError);  // q not a power of char
}

TEST_CASE("derivatives collapse to q-th powers of the lower symmetric polynomial") {
    auto f2 = Field::make(2, 1);
    SparsePoly c(f2.get());
    c.set_term(0, f2->one());
    CHECK(c.derivative().is_zero());

    // d/dt s_{n,1} = 1
    for (std::uint32_t n = 2; n <= 5; ++n) {
        SparsePoly d = elementary_symmetric(f2, n, 2, 1).derivative();
        CHECK(d.term_count() == 1);
        CHECK(d.coeff(0) == f2->one());
    }

    // q=2: [s_{3,2}]' = x^4 + x^2 = (s_{2,1})^2, checked coefficientwise
    SparsePoly d32 = elementary_symmetric(f2, 3, 2, 2).derivative();
    SparsePoly s21_sq = elementary_symmetric(f2, 2, 2, 1).frobenius_power(2);
    CHECK(d32 == s21_sq);
    CHECK(d32.coeff(4) == f2->one());
    CHECK(d32.coeff(2) == f2->one());
    CHECK(d32.term_count() == 2);

    // [s_{n,i}]' = [s_{n-1,i-1}]^q across the verification grid
    for (auto [p, q] : std::vector<std::pair<std::uint32_t, std::uint64_t>>{{2, 2}, {3, 3}, {2, 4}}) {
        auto f = Field::make(p, 1);
        for (std::uint32_t n = 2; n <= 5; ++n) {
            for (std::uint32_t i = 2; i <= n; ++i) {
                CHECK(elementary_symmetric(f, n, q, i).derivative() ==
                      elementary_symmetric(f, n - 1, q, i - 1).frobenius_power(q));
            }
        }
    }
}

TEST_CASE("coprime degree picks the largest exponent prime to the characteristic") {
    auto f2 = Field::make(2, 1);
    auto f3 = Field::make(3, 1);

    for (auto [f, q] : std::vector<std::pair<std::shared_ptr<const Field>, std::uint64_t>>{
             {f2, 2}, {f3, 3}, {f2, 4}}) {
        CHECK(coprime_degree(elementary_symmetric(f, 3, q, 2)) == q * q + 1);
        // m_i = q^(n-1) + ... + q^(n-i+1) + 1
        for (std::uint32_t n = 2; n <= 5; ++n) {
            for (std::uint32_t i = 2; i <= n; ++i) {
                std::uint64_t mi = 1, pw = 1;
                for (std::uint32_t j = 0; j + 1 < n; ++j) pw *= q;  // q^(n-1)
                for (std::uint32_t j = 0; j + 1 < i; ++j) {
                    mi += pw;
                    pw /= q;
                }
                CHECK(coprime_degree(elementary_symmetric(f, n, q, i)) == mi);
            }
        }
    }

    SparsePoly xp(f2.get());
    xp.set_term(2, f2->one());
    CHECK_FALSE(coprime_degree(xp).has_value());
    SparsePoly con(f3.get());
    con.set_term(0, f3->one());
    CHECK_FALSE(coprime_degree(con).has_value());
}

TEST_CASE("isolated coprime term criterion") {
    auto f2 = Field::make(2, 1);
    auto f3 = Field::make(3, 1);
    CHECK(has_isolated_coprime_term(elementary_symmetric(f2, 3, 2, 2)));
    for (auto [f, q] : std::vector<std::pair<std::shared_ptr<const Field>, std::uint64_t>>{{f2, 2}, {f3, 3}}) {
        for (std::uint32_t n = 2; n <= 5; ++n) {
            for (std::uint32_t i = 2; i <= n; ++i) {
                CHECK(has_isolated_coprime_term(elementary_symmetric(f, n, q, i)));
            }
        }
    }
    // f = x + x^p fails: d = 1 but a term of degree p exists
    for (auto f : {f2, f3}) {
        SparsePoly bad(f.get());
        bad.set_term(1, f->one());
        bad.set_term(f->characteristic(), f->one());
        CHECK_FALSE(has_isolated_coprime_term(bad));
        SparsePoly pure(f.get());
        pure.set_term(f->characteristic(), f->one());
        CHECK_FALSE(has_isolated_coprime_term(pure));
    }
}

TEST_CASE("nonzero roots swap between s_{n,i} and s_{n,n-i} under inversion") {
    for (std::uint32_t q : {2u, 3u}) {
        for (std::uint32_t n = 3; n <= 5; ++n) {
            for (std::uint32_t k = 1; k <= n; ++k) {
                auto f = Field::make(q, k);
                for (std::uint32_t i = 1; i < n; ++i) {
                    SparsePoly si = elementary_symmetric(f, n, q, i);
                    SparsePoly sni = elementary_symmetric(f, n, q, n - i);
                    for (std::uint64_t a = 1; a < f->order(); ++a) {
                        FieldElement alpha = f->element_at(a);
                        bool zi = si.evaluate(alpha).is_zero();
                        bool zn = sni.evaluate(f->inv(alpha)).is_zero();
                        CHECK(zi == zn);
                    }
                }
            }
        }
    }
}

TEST_CASE("q-power difference identity holds coefficientwise") {
    // s_{n,i}(t)^q - s_{n,i}(t) = (t^(q^n) - t) * s_{n-1,i-1}(t)^q
    for (std::uint32_t q : {2u, 3u}) {
        auto f = Field::make(q, 1);
        for (std::uint32_t n = 3; n <= 4; ++n) {
            std::uint64_t qn = 1;
            for (std::uint32_t j = 0; j < n; ++j) qn *= q;
            SparsePoly tqn_minus_t(f.get());
            tqn_minus_t.set_term(qn, f->one());
            tqn_minus_t.add_term(1, f->neg(f->one()));
            for (std::uint32_t i = 1; i <= n; ++i) {
                SparsePoly s = elementary_symmetric(f, n, q, i);
                SparsePoly lhs = s.frobenius_power(q).sub(s);
                SparsePoly rhs_factor(f.get());
                if (i == 1) {
                    rhs_factor.set_term(0, f->one());  // s_{n-1,0} = 1
                } else {
                    rhs_factor = elementary_symmetric(f, n - 1, q, i - 1).frobenius_power(q);
                }
                CHECK(lhs == tqn_minus_t.mul(rhs_factor));
            }
        }
    }
}

TEST_CASE("roots live in fields F_{q^k} with n-i+1 <= k <= n") {
    for (std::uint32_t q : {2u, 3u}) {
        for (std::uint32_t n = 3; n <= 5; ++n) {
            for (std::uint32_t i = 1; i <= n; ++i) {
                for (std::uint32_t k = 1; k <= n; ++k) {
                    auto f = Field::make(q, k);
                    SparsePoly s = elementary_symmetric(f, n, q, i);
                    for (const auto& [alpha, mult] : roots_with_multiplicity(s)) {
                        if (alpha.is_zero()) continue;  // zero sits in every field
                        std::uint32_t d = exact_degree_over(alpha, q, k);
                        REQUIRE(d > 0);
                        bool witnessed = false;
                        for (std::uint32_t k0 = n - i + 1; k0 <= n; ++k0) {
                            if (k0 % d == 0) witnessed = true;
                        }
                        CHECK(witnessed);
                        // multiplicity coprime to p forces membership in F_{q^n}
                        if (mult % f->characteristic() != 0) CHECK(n % d == 0);
                    }
                }
            }
        }
    }
}

TEST_CASE("repeated roots with tame multiplicities sit in the base field") {
    // multiplicity m > 1 with gcd(m,p) = gcd(m-1,p) = 1 forces alpha into F_q;
    // if p divides neither C(n,i) nor C(n-1,i-1) there is no such nonzero root
    for (std::uint32_t q : {2u, 3u}) {
        std::uint32_t p = q;
        for (std::uint32_t n = 3; n <= 5; ++n) {
            for (std::uint32_t i = 1; i <= n; ++i) {
                for (std::uint32_t k = 1; k <= n; ++k) {
                    auto f = Field::make(q, k);
                    SparsePoly s = elementary_symmetric(f, n, q, i);
                    for (const auto& [alpha, mult] : roots_with_multiplicity(s)) {
                        if (alpha.is_zero() || mult <= 1) continue;
                        if (mult % p == 0 || (mult - 1) % p == 0) continue;
                        std::uint32_t d = exact_degree_over(alpha, q, k);
                        CHECK(d == 1);
                        CHECK_FALSE((binom(n, i) % p != 0 && binom(n - 1, i - 1) % p != 0));
                    }
                }
            }
        }
    }
}

TEST_CASE("trace-like polynomial permutes fields of coprime degree") {
    // s_{3,1} with q=2 over F_4: gcd(2,3)=1 and 2 does not divide 3
    auto f4 = Field::make(2, 2);
    CHECK(is_permutation(elementary_symmetric(f4, 3, 2, 1)));
    // ... but not over F_8, where the kernel is the trace-zero subgroup
    auto f8 = Field::make(2, 3);
    CHECK_FALSE(is_permutation(elementary_symmetric(f8, 3, 2, 1)));
    // the identity map is a permutation
    SparsePoly t(f8.get());
    t.set_term(1, f8->one());
    CHECK(is_permutation(t));

    for (std::uint32_t q : {2u, 3u}) {
        std::uint32_t p = q;
        for (std::uint32_t n = 2; n <= 5; ++n) {
            if (n % p == 0) continue;
            for (std::uint32_t m = 1; m <= 3; ++m) {
                if (std::gcd(m, n) != 1) continue;
                auto f = Field::make(q, m);
                CHECK(is_permutation(elementary_symmetric(f, n, q, 1)));
            }
        }
    }
}

TEST_CASE("symmetric polynomials of base-field shape take base-field values") {
    // s_{n,i}(gamma) lies in F_q for every gamma in F_{q^n}
    for (auto [p, m, n] :
         std::vector<std::array<std::uint32_t, 3>>{{2, 1, 3}, {2, 1, 4}, {3, 1, 3}, {2, 2, 2}}) {
        Tower t(p, m, n);
        auto big = t.level(Tower::kConstants);
        std::uint64_t q = t.q();
        for (std::uint32_t i = 1; i <= n; ++i) {
            SparsePoly s = elementary_symmetric(big, n, q, i);
            for (std::uint64_t a = 0; a < big->order(); ++a) {
                FieldElement v = s.evaluate(big->element_at(a));
                CHECK(big->pow(v, q) == v);
            }
            CHECK(s.evaluate(big->zero()).is_zero());
        }
    }
    // s_{2,1}(omega) = omega^2 + omega = 1 in F_4
    auto f4 = Field::make(2, 2);
    SparsePoly s21 = elementary_symmetric(f4, 2, 2, 1);
    CHECK(s21.evaluate(f4->element_at(2)) == f4->one());
}

TEST_CASE("root multiplicities via exact division") {
    auto f8 = Field::make(2, 3);
    SparsePoly s32 = elementary_symmetric(f8, 3, 2, 2);  // t^6 + t^5 + t^3 = t^3(t^3+t^2+1)
    auto roots = roots_with_multiplicity(s32);
    REQUIRE(roots.size() == 4);
    CHECK(roots[0].first.is_zero());
    CHECK(roots[0].second == 3);
    for (std::size_t j = 1; j < 4; ++j) CHECK(roots[j].second == 1);

    // s_{n,1} over F_{q^n} has q^(n-1) simple roots: the trace-zero subgroup
    for (auto [p, n] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 3}, {2, 4}, {3, 2}, {3, 3}}) {
        Tower t(p, 1, n);
        auto big = t.level(Tower::kConstants);
        auto roots2 = roots_with_multiplicity(elementary_symmetric(big, n, p, 1));
        auto tz = t.trace_zero_subgroup();
        REQUIRE(roots2.size() == tz.size());
        for (std::size_t j = 0; j < roots2.size(); ++j) {
            CHECK(roots2[j].second == 1);
            CHECK(roots2[j].first == tz[j]);
        }
    }

    SparsePoly c(f8.get());
    c.set_term(0, f8->one());
    CHECK(roots_with_multiplicity(c).empty());
    SparsePoly z(f8.get());
    CHECK_THROWS_AS(roots_with_multiplicity(z), ArgumentError);
}

TEST_CASE("checked exponent arithmetic rejects overflow") {
    auto f2 = Field::make(2, 1);
    SparsePoly big(f2.get());
    big.set_term(std::uint64_t{1} << 63, f2->one());
    CHECK_THROWS_AS(big.frobenius_power(4), OverflowError);
    CHECK_THROWS_AS(big.mul(big), OverflowError);
}
