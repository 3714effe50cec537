#pragma once

// A fixed four-level tower F_p ⊂ F_q ⊂ F_{q^n} ⊂ F_{q^{2n}} with resolved
// embeddings between every pair of levels.
//
// Consecutive embeddings map the sublevel generator to the smallest root (in
// enumeration order) of the sublevel modulus inside the superlevel; the root
// search runs over the superlevel's subfield of the right size, which
// contains every root. Non-consecutive embeddings are composites of the
// consecutive ones, which keeps all triangles commuting.

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "symfield/errors.hpp"
#include "symfield/field.hpp"
#include "symfield/fp_linalg.hpp"

namespace symfield {

class Embedding {
public:
    Embedding() = default;

    static Embedding identity(const std::shared_ptr<const Field>& f) {
        Embedding e;
        e.sub_ = f;
        e.sup_ = f;
        e.mat_ = fp::Mat::identity(f->characteristic(), f->degree());
        e.solver_ = fp::Solver(e.mat_);
        return e;
    }

    static Embedding find(const std::shared_ptr<const Field>& sub, const std::shared_ptr<const Field>& sup) {
        if (sub->characteristic() != sup->characteristic())
            throw ArgumentError("embedding requires equal characteristic");
        if (sup->degree() % sub->degree() != 0)
            throw ArgumentError("embedding requires sublevel degree dividing superlevel degree");
        if (sub.get() == sup.get()) return identity(sub);
        if (sub->degree() == sup->degree()) {
            if (sub->modulus() != sup->modulus()) throw InternalError("equal-degree fields disagree");
            Embedding e = identity(sub);
            e.sup_ = sup;
            return e;
        }
        const std::uint32_t d = sub->degree();
        // All roots of the sublevel modulus lie in the p^d-element subfield.
        auto candidates = sup->span(sup->subfield_basis(d));
        std::optional<std::uint64_t> best;
        FieldElement root = sup->zero();
        for (const auto& c : candidates) {
            if (!sup->eval_prime_poly(sub->modulus(), c).is_zero()) continue;
            std::uint64_t idx = sup->index_of(c);
            if (!best || idx < *best) {
                best = idx;
                root = c;
            }
        }
        if (!best) throw InternalError("no root of sublevel modulus in superlevel");
        Embedding e;
        e.sub_ = sub;
        e.sup_ = sup;
        e.mat_ = fp::Mat(sub->characteristic(), sup->degree(), d);
        FieldElement power = sup->one();
        for (std::uint32_t j = 0; j < d; ++j) {
            for (std::uint32_t i = 0; i < sup->degree(); ++i) e.mat_.at(i, j) = power.coeff[i];
            if (j + 1 < d) power = sup->mul(power, root);
        }
        e.solver_ = fp::Solver(e.mat_);
        return e;
    }

    static Embedding compose(const Embedding& lo, const Embedding& hi) {
        if (lo.sup_.get() != hi.sub_.get()) throw ArgumentError("embeddings do not chain");
        Embedding e;
        e.sub_ = lo.sub_;
        e.sup_ = hi.sup_;
        e.mat_ = hi.mat_.mul(lo.mat_);
        e.solver_ = fp::Solver(e.mat_);
        return e;
    }

    const std::shared_ptr<const Field>& sub() const { return sub_; }
    const std::shared_ptr<const Field>& sup() const { return sup_; }

    FieldElement apply(const FieldElement& e) const {
        if (e.field != sub_.get()) throw ArgumentError("element not at the embedding's sublevel");
        std::vector<std::uint8_t> x(e.coeff.begin(), e.coeff.begin() + sub_->degree());
        auto y = mat_.apply(x);
        FieldElement r{sup_.get(), {}};
        for (std::uint32_t i = 0; i < sup_->degree(); ++i) r.coeff[i] = y[i];
        return r;
    }

    std::optional<FieldElement> preimage(const FieldElement& e) const {
        if (e.field != sup_.get()) throw ArgumentError("element not at the embedding's superlevel");
        std::vector<std::uint8_t> y(e.coeff.begin(), e.coeff.begin() + sup_->degree());
        auto x = solver_.solve(y);
        if (!x) return std::nullopt;
        FieldElement r{sub_.get(), {}};
        for (std::uint32_t i = 0; i < sub_->degree(); ++i) r.coeff[i] = (*x)[i];
        return r;
    }

    bool contains(const FieldElement& e) const {
        if (e.field != sup_.get()) throw ArgumentError("element not at the embedding's superlevel");
        return sup_->pow(e, sub_->order()) == e;
    }

private:
    std::shared_ptr<const Field> sub_, sup_;
    fp::Mat mat_;
    fp::Solver solver_;
};

/// The chain F_p ⊂ F_q ⊂ F_{q^n} ⊂ F_{q^{2n}}, q = p^m. Immutable and
/// shareable; every operation is a pure function of its inputs.
class Tower {
public:
    static constexpr int kPrime = 0;      // F_p
    static constexpr int kBase = 1;       // F_q
    static constexpr int kConstants = 2;  // F_{q^n}
    static constexpr int kQuadratic = 3;  // F_{q^{2n}}

    Tower(std::uint32_t p, std::uint32_t m, std::uint32_t n, std::uint64_t budget = kDefaultBudget)
        : p_(p), m_(m), n_(n), budget_(budget) {
        if (!is_prime_u64(p)) throw ArgumentError("p must be prime");
        if (m == 0 || n == 0) throw ArgumentError("m and n must be positive");
        const std::uint32_t degs[4] = {1, m, m * n, 2 * m * n};
        for (int i = 0; i < 4; ++i) {
            int same = -1;
            for (int j = 0; j < i; ++j) {
                if (degs[j] == degs[i]) same = j;
            }
            levels_[i] = (same >= 0) ? levels_[same] : Field::make(p, degs[i], budget);
        }
        emb_[0][1] = Embedding::find(levels_[0], levels_[1]);
        emb_[1][2] = Embedding::find(levels_[1], levels_[2]);
        emb_[2][3] = Embedding::find(levels_[2], levels_[3]);
        emb_[0][2] = Embedding::compose(emb_[0][1], emb_[1][2]);
        emb_[1][3] = Embedding::compose(emb_[1][2], emb_[2][3]);
        emb_[0][3] = Embedding::compose(emb_[0][2], emb_[2][3]);
    }

    std::uint32_t p() const { return p_; }
    std::uint32_t m() const { return m_; }
    std::uint32_t n() const { return n_; }
    std::uint64_t budget() const { return budget_; }
    std::uint64_t q() const { return levels_[kBase]->order(); }
    std::uint64_t qn() const { return levels_[kConstants]->order(); }
    std::uint64_t q2n() const { return levels_[kQuadratic]->order(); }

    const std::shared_ptr<const Field>& level(int i) const {
        if (i < 0 || i > 3) throw ArgumentError("level index out of range");
        return levels_[i];
    }

    const Embedding& embedding(int from, int to) const {
        if (from < 0 || to > 3 || from >= to) throw ArgumentError("bad embedding levels");
        return emb_[from][to];
    }

    int level_of(const FieldElement& e) const {
        for (int i = 3; i >= 0; --i) {
            if (levels_[i].get() == e.field) return i;
        }
        throw ArgumentError("element does not belong to this tower");
    }

    FieldElement embed(const FieldElement& e, int to) const {
        int from = -1;
        for (int i = 0; i <= to; ++i) {
            if (levels_[i].get() == e.field) {
                from = i;
                break;
            }
        }
        if (from < 0) throw ArgumentError("element level is not below the target level");
        if (from == to || levels_[from].get() == levels_[to].get()) return FieldElement{levels_[to].get(), e.coeff};
        return emb_[from][to].apply(e);
    }

    /// e^base_order, where base_order must be the cardinality of a tower
    /// level whose degree divides the degree of e's level.
    FieldElement frobenius(const FieldElement& e, std::uint64_t base_order) const {
        int lvl = level_of(e);
        bool ok = false;
        for (int i = 0; i < 4; ++i) {
            if (levels_[i]->order() == base_order && levels_[lvl]->degree() % levels_[i]->degree() == 0) {
                ok = true;
                break;
            }
        }
        if (!ok) throw ArgumentError("base order is not the cardinality of a nested tower level");
        return e.field->pow(e, base_order);
    }

    FieldElement trace_to(const FieldElement& e, int sub) const {
        auto [big, small] = nested_pair(e, sub);
        std::uint64_t q_sub = small->order();
        std::uint32_t steps = big->degree() / small->degree();
        FieldElement acc = big->zero();
        FieldElement cur = e;
        for (std::uint32_t j = 0; j < steps; ++j) {
            acc = big->add(acc, cur);
            if (j + 1 < steps) cur = big->pow(cur, q_sub);
        }
        return pull_down(acc, sub);
    }

    FieldElement norm_to(const FieldElement& e, int sub) const {
        auto [big, small] = nested_pair(e, sub);
        std::uint64_t q_sub = small->order();
        std::uint32_t steps = big->degree() / small->degree();
        FieldElement acc = big->one();
        FieldElement cur = e;
        for (std::uint32_t j = 0; j < steps; ++j) {
            acc = big->mul(acc, cur);
            if (j + 1 < steps) cur = big->pow(cur, q_sub);
        }
        return pull_down(acc, sub);
    }

    /// All elements of level `top` whose trace down to level `sub` vanishes,
    /// in enumeration order. Cardinality is |top| / |sub|.
    std::vector<FieldElement> trace_zero_subgroup(int top = kConstants, int sub = kBase) const {
        const auto& big = levels_[top];
        const auto& small = levels_[sub];
        if (big->degree() % small->degree() != 0) throw ArgumentError("levels are not nested");
        std::uint64_t q_sub = small->order();
        std::uint32_t steps = big->degree() / small->degree();
        std::vector<FieldElement> out;
        for (std::uint64_t i = 0; i < big->order(); ++i) {
            FieldElement e = big->element_at(i);
            FieldElement acc = big->zero();
            FieldElement cur = e;
            for (std::uint32_t j = 0; j < steps; ++j) {
                acc = big->add(acc, cur);
                if (j + 1 < steps) cur = big->pow(cur, q_sub);
            }
            if (acc.is_zero()) out.push_back(e);
        }
        return out;
    }

private:
    std::pair<const Field*, const Field*> nested_pair(const FieldElement& e, int sub) const {
        int lvl = level_of(e);
        const Field* big = levels_[lvl].get();
        const Field* small = level(sub).get();
        if (big->degree() % small->degree() != 0) throw ArgumentError("levels are not nested");
        return {big, small};
    }

    FieldElement pull_down(const FieldElement& v, int sub) const {
        int lvl = level_of(v);
        if (levels_[lvl].get() == levels_[sub].get()) return FieldElement{levels_[sub].get(), v.coeff};
        auto pre = emb_[sub][lvl].preimage(v);
        if (!pre) throw InternalError("trace/norm value escaped the sublevel");
        return *pre;
    }

    std::uint32_t p_, m_, n_;
    std::uint64_t budget_;
    std::shared_ptr<const Field> levels_[4];
    Embedding emb_[4][4];
};

inline Tower build_tower(std::uint32_t p, std::uint32_t m, std::uint32_t n,
                         std::uint64_t budget = kDefaultBudget) {
    return Tower(p, m, n, budget);
}

}  // namespace symfield
