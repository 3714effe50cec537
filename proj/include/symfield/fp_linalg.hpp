#pragma once

// Dense linear algebra over a prime field F_p with p < 256. Matrices are
// tiny (dimension = extension degree), so everything is straightforward
// row reduction on byte entries.

#include <cstdint>
#include <optional>
#include <vector>

#include "symfield/errors.hpp"

namespace symfield::fp {

inline std::uint32_t mod_inv(std::uint32_t a, std::uint32_t p) {
    if (a % p == 0) throw ArgumentError("mod_inv of zero");
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = p, new_r = a % p;
    while (new_r != 0) {
        std::int64_t q = r / new_r;
        std::int64_t tmp = t - q * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - q * new_r;
        r = new_r;
        new_r = tmp;
    }
    if (r != 1) throw ArgumentError("mod_inv: not invertible");
    if (t < 0) t += p;
    return static_cast<std::uint32_t>(t);
}

class Mat {
public:
    Mat() = default;
    Mat(std::uint32_t p, std::size_t rows, std::size_t cols)
        : p_(p), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

    static Mat identity(std::uint32_t p, std::size_t n) {
        Mat m(p, n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    std::uint8_t& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    std::uint8_t at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::uint32_t prime() const { return p_; }

    Mat mul(const Mat& o) const {
        if (cols_ != o.rows_ || p_ != o.p_) throw ArgumentError("Mat::mul shape mismatch");
        Mat r(p_, rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t k = 0; k < cols_; ++k) {
                std::uint32_t v = at(i, k);
                if (!v) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) {
                    r.at(i, j) = static_cast<std::uint8_t>((r.at(i, j) + v * o.at(k, j)) % p_);
                }
            }
        }
        return r;
    }

    Mat pow(std::uint64_t e) const {
        if (rows_ != cols_) throw ArgumentError("Mat::pow needs a square matrix");
        Mat result = identity(p_, rows_);
        Mat base = *this;
        while (e > 0) {
            if (e & 1) result = result.mul(base);
            base = base.mul(base);
            e >>= 1;
        }
        return result;
    }

    // this - other, entrywise
    Mat sub(const Mat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw ArgumentError("Mat::sub shape mismatch");
        Mat r(p_, rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) {
            r.a_[i] = static_cast<std::uint8_t>((a_[i] + p_ - o.a_[i]) % p_);
        }
        return r;
    }

    std::vector<std::uint8_t> apply(const std::vector<std::uint8_t>& x) const {
        if (x.size() != cols_) throw ArgumentError("Mat::apply size mismatch");
        std::vector<std::uint8_t> y(rows_, 0);
        for (std::size_t i = 0; i < rows_; ++i) {
            std::uint32_t acc = 0;
            for (std::size_t j = 0; j < cols_; ++j) acc += static_cast<std::uint32_t>(at(i, j)) * x[j];
            y[i] = static_cast<std::uint8_t>(acc % p_);
        }
        return y;
    }

    friend bool operator==(const Mat&, const Mat&) = default;

private:
    std::uint32_t p_ = 0;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<std::uint8_t> a_;
};

/// Basis of the null space {x : Mx = 0}, as column vectors of length cols().
inline std::vector<std::vector<std::uint8_t>> kernel_basis(const Mat& m) {
    const std::uint32_t p = m.prime();
    Mat r = m;
    std::vector<std::int64_t> pivot_of_col(m.cols(), -1);
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t sel = row;
        while (sel < m.rows() && r.at(sel, col) == 0) ++sel;
        if (sel == m.rows()) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) std::swap(r.at(row, j), r.at(sel, j));
        std::uint32_t inv = mod_inv(r.at(row, col), p);
        for (std::size_t j = 0; j < m.cols(); ++j) {
            r.at(row, j) = static_cast<std::uint8_t>((r.at(row, j) * inv) % p);
        }
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row) continue;
            std::uint32_t f = r.at(i, col);
            if (!f) continue;
            for (std::size_t j = 0; j < m.cols(); ++j) {
                r.at(i, j) = static_cast<std::uint8_t>((r.at(i, j) + (p - f) * r.at(row, j)) % p);
            }
        }
        pivot_of_col[col] = static_cast<std::int64_t>(row);
        ++row;
    }
    std::vector<std::vector<std::uint8_t>> basis;
    for (std::size_t col = 0; col < m.cols(); ++col) {
        if (pivot_of_col[col] >= 0) continue;
        std::vector<std::uint8_t> v(m.cols(), 0);
        v[col] = 1;
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (pivot_of_col[c] < 0) continue;
            std::uint32_t val = r.at(static_cast<std::size_t>(pivot_of_col[c]), col);
            v[c] = static_cast<std::uint8_t>(val ? p - val : 0);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Precomputed solver for Mx = b with a fixed M. Free variables are set to
/// zero, so for injective M the solution is the unique preimage.
class Solver {
public:
    Solver() = default;
    explicit Solver(const Mat& m) : m_(m), rref_(m), e_(Mat::identity(m.prime(), m.rows())) {
        const std::uint32_t p = m.prime();
        std::size_t row = 0;
        for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
            std::size_t sel = row;
            while (sel < m.rows() && rref_.at(sel, col) == 0) ++sel;
            if (sel == m.rows()) continue;
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(rref_.at(row, j), rref_.at(sel, j));
            for (std::size_t j = 0; j < m.rows(); ++j) std::swap(e_.at(row, j), e_.at(sel, j));
            std::uint32_t inv = mod_inv(rref_.at(row, col), p);
            for (std::size_t j = 0; j < m.cols(); ++j) {
                rref_.at(row, j) = static_cast<std::uint8_t>((rref_.at(row, j) * inv) % p);
            }
            for (std::size_t j = 0; j < m.rows(); ++j) {
                e_.at(row, j) = static_cast<std::uint8_t>((e_.at(row, j) * inv) % p);
            }
            for (std::size_t i = 0; i < m.rows(); ++i) {
                if (i == row) continue;
                std::uint32_t f = rref_.at(i, col);
                if (!f) continue;
                for (std::size_t j = 0; j < m.cols(); ++j) {
                    rref_.at(i, j) =
                        static_cast<std::uint8_t>((rref_.at(i, j) + (p - f) * rref_.at(row, j)) % p);
                }
                for (std::size_t j = 0; j < m.rows(); ++j) {
                    e_.at(i, j) = static_cast<std::uint8_t>((e_.at(i, j) + (p - f) * e_.at(row, j)) % p);
                }
            }
            pivots_.emplace_back(row, col);
            ++row;
        }
        rank_ = row;
    }

    std::optional<std::vector<std::uint8_t>> solve(const std::vector<std::uint8_t>& b) const {
        std::vector<std::uint8_t> y = e_.apply(b);
        for (std::size_t i = rank_; i < m_.rows(); ++i) {
            if (y[i] != 0) return std::nullopt;
        }
        std::vector<std::uint8_t> x(m_.cols(), 0);
        for (auto [row, col] : pivots_) x[col] = y[row];
        // A consistent RHS must also satisfy the pivot rows once free
        // variables are zeroed; recheck against the original matrix.
        if (m_.apply(x) != b) return std::nullopt;
        return x;
    }

private:
    Mat m_, rref_, e_;
    std::vector<std::pair<std::size_t, std::size_t>> pivots_;
    std::size_t rank_ = 0;
};

}  // namespace symfield::fp
