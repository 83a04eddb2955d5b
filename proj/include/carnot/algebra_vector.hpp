#pragma once

#include <memory>
#include <vector>

#include "carnot/errors.hpp"
#include "carnot/hall_basis.hpp"
#include "carnot/scalar.hpp"

namespace carnot {

/// Element of a free nilpotent Lie algebra: dense coordinates over a shared
/// Hall basis. Immutable-by-convention value type; all arithmetic is exact
/// when S = Rational.
template <class S>
class AlgebraVector {
public:
    explicit AlgebraVector(std::shared_ptr<const HallBasis> basis)
        : basis_(std::move(basis)),
          c_(static_cast<std::size_t>(basis_->dim()), scalar_traits<S>::zero()) {}

    AlgebraVector(std::shared_ptr<const HallBasis> basis, std::vector<S> coords)
        : basis_(std::move(basis)), c_(std::move(coords)) {
        if (c_.size() != static_cast<std::size_t>(basis_->dim()))
            throw mismatch_error("algebra vector: coordinate count does not match basis dimension");
    }

    static AlgebraVector unit(std::shared_ptr<const HallBasis> basis, int word_index) {
        AlgebraVector v(std::move(basis));
        v.c_[static_cast<std::size_t>(word_index)] = scalar_traits<S>::one();
        return v;
    }

    const std::shared_ptr<const HallBasis>& basis() const { return basis_; }
    const std::vector<S>& coords() const { return c_; }
    const S& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }

    bool is_zero() const {
        for (const S& x : c_)
            if (!scalar_traits<S>::is_zero(x)) return false;
        return true;
    }

    /// Smallest weight with a nonzero coordinate; step+1 for the zero vector.
    int min_weight() const {
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (!scalar_traits<S>::is_zero(c_[i])) return basis_->weight_of(static_cast<int>(i));
        return basis_->step() + 1;
    }

    friend AlgebraVector operator+(AlgebraVector a, const AlgebraVector& b) {
        a.require_same_basis(b);
        for (std::size_t i = 0; i < a.c_.size(); ++i) a.c_[i] += b.c_[i];
        return a;
    }
    friend AlgebraVector operator-(AlgebraVector a, const AlgebraVector& b) {
        a.require_same_basis(b);
        for (std::size_t i = 0; i < a.c_.size(); ++i) a.c_[i] -= b.c_[i];
        return a;
    }
    friend AlgebraVector operator-(AlgebraVector a) {
        for (auto& x : a.c_) x = -x;
        return a;
    }
    friend AlgebraVector operator*(const S& s, AlgebraVector a) {
        for (auto& x : a.c_) x *= s;
        return a;
    }
    friend bool operator==(const AlgebraVector& a, const AlgebraVector& b) {
        return a.basis_ == b.basis_ && a.c_ == b.c_;
    }

    void require_same_basis(const AlgebraVector& other) const {
        if (basis_ != other.basis_)
            throw mismatch_error("algebra vectors built over different bases");
    }

    std::vector<S>& mutable_coords() { return c_; }

private:
    std::shared_ptr<const HallBasis> basis_;
    std::vector<S> c_;
};

/// Lie bracket, exact and bilinear; components of weight above the basis step
/// are truncated to zero (nilpotent quotient semantics).
template <class S>
AlgebraVector<S> bracket(const AlgebraVector<S>& x, const AlgebraVector<S>& y) {
    x.require_same_basis(y);
    const HallBasis& basis = *x.basis();
    AlgebraVector<S> out(x.basis());
    auto& oc = out.mutable_coords();
    int d = basis.dim();
    for (int i = 0; i < d; ++i) {
        if (scalar_traits<S>::is_zero(x[i])) continue;
        for (int j = 0; j < d; ++j) {
            if (i == j || scalar_traits<S>::is_zero(y[j])) continue;
            if (basis.weight_of(i) + basis.weight_of(j) > basis.step()) continue;
            S prod = x[i];
            prod *= y[j];
            const auto& row = basis.canonical_row(std::min(i, j), std::max(i, j));
            if (i < j) {
                for (const auto& [k, c] : row)
                    oc[static_cast<std::size_t>(k)] += scalar_traits<S>::from_rational(c) * prod;
            } else {
                for (const auto& [k, c] : row)
                    oc[static_cast<std::size_t>(k)] -= scalar_traits<S>::from_rational(c) * prod;
            }
        }
    }
    return out;
}

/// Truncated Baker-Campbell-Hausdorff product log(exp(x) exp(y)), evaluated
/// through the basis' precompiled polynomial map.
template <class S>
AlgebraVector<S> bch(const AlgebraVector<S>& x, const AlgebraVector<S>& y) {
    x.require_same_basis(y);
    const auto& compiled = x.basis()->template bch_compiled<S>();
    std::vector<S> out;
    compiled.eval(x.coords(), y.coords(), out);
    return AlgebraVector<S>(x.basis(), std::move(out));
}

} // namespace carnot
