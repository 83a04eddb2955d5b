#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "carnot/algebra_vector.hpp"
#include "carnot/errors.hpp"
#include "carnot/hall_basis.hpp"
#include "carnot/random.hpp"
#include "carnot/scalar.hpp"

namespace carnot {

/// A free Carnot group in exponential coordinates of the first kind over its
/// Hall basis. Construction compiles the group-law polynomial map for both
/// the exact and the floating-point scalar, so group operations afterwards
/// are lock-free reads of shared immutable tables.
class CarnotGroup {
public:
    static std::shared_ptr<const CarnotGroup> make(int rank, int step, std::string label = "") {
        auto basis = HallBasis::make(rank, step);
        if (label.empty())
            label = "free(" + std::to_string(rank) + "," + std::to_string(step) + ")";
        return std::shared_ptr<const CarnotGroup>(new CarnotGroup(std::move(basis), std::move(label)));
    }

    /// Heisenberg group: rank 2, step 2.
    static std::shared_ptr<const CarnotGroup> heisenberg() { return make(2, 2, "heisenberg"); }

    /// Abelian group R^k as the step-1 free group.
    static std::shared_ptr<const CarnotGroup> euclidean(int k) {
        return make(k, 1, "euclidean(" + std::to_string(k) + ")");
    }

    const HallBasis& basis() const { return *basis_; }
    const std::shared_ptr<const HallBasis>& basis_ptr() const { return basis_; }
    const std::string& label() const { return label_; }
    int rank() const { return basis_->rank(); }
    int step() const { return basis_->step(); }
    int dim() const { return basis_->dim(); }

    template <class S>
    const CompiledBch<S>& law() const {
        if constexpr (scalar_traits<S>::exact)
            return *law_exact_;
        else
            return *law_real_;
    }

private:
    CarnotGroup(std::shared_ptr<const HallBasis> basis, std::string label)
        : basis_(std::move(basis)), label_(std::move(label)) {
        law_exact_ = &basis_->bch_compiled<Rational>();
        law_real_ = &basis_->bch_compiled<double>();
    }

    std::shared_ptr<const HallBasis> basis_;
    std::string label_;
    const CompiledBch<Rational>* law_exact_;
    const CompiledBch<double>* law_real_;
};

using GroupPtr = std::shared_ptr<const CarnotGroup>;

/// Group element in exponential coordinates of the first kind: the identity
/// is the zero vector and inversion is coordinate negation.
template <class S>
class GroupElement {
public:
    explicit GroupElement(GroupPtr group)
        : group_(std::move(group)),
          c_(static_cast<std::size_t>(group_->dim()), scalar_traits<S>::zero()) {}

    GroupElement(GroupPtr group, std::vector<S> coords) : group_(std::move(group)), c_(std::move(coords)) {
        if (c_.size() != static_cast<std::size_t>(group_->dim()))
            throw mismatch_error("group element: coordinate count does not match group dimension");
    }

    const GroupPtr& group() const { return group_; }
    const std::vector<S>& coords() const { return c_; }
    const S& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    std::vector<S>& mutable_coords() { return c_; }

    AlgebraVector<S> log() const { return AlgebraVector<S>(group_->basis_ptr(), c_); }

    bool is_identity() const {
        for (const S& x : c_)
            if (!scalar_traits<S>::is_zero(x)) return false;
        return true;
    }

    friend bool operator==(const GroupElement& a, const GroupElement& b) {
        return a.group_ == b.group_ && a.c_ == b.c_;
    }

    void require_same_group(const GroupElement& other) const {
        if (group_ != other.group_)
            throw mismatch_error("group elements built over different descriptors");
    }

private:
    GroupPtr group_;
    std::vector<S> c_;
};

template <class S>
GroupElement<S> identity(const GroupPtr& g) {
    return GroupElement<S>(g);
}

template <class S>
GroupElement<S> element(const GroupPtr& g, std::vector<S> coords) {
    return GroupElement<S>(g, std::move(coords));
}

/// Generator as a group element: exp of the i-th weight-1 basis direction.
template <class S>
GroupElement<S> generator(const GroupPtr& g, int i) {
    GroupElement<S> e(g);
    e.mutable_coords()[static_cast<std::size_t>(i)] = scalar_traits<S>::one();
    return e;
}

template <class S>
GroupElement<S> multiply(const GroupElement<S>& a, const GroupElement<S>& b) {
    a.require_same_group(b);
    std::vector<S> out;
    a.group()->template law<S>().eval(a.coords(), b.coords(), out);
    return GroupElement<S>(a.group(), std::move(out));
}

template <class S>
GroupElement<S> operator*(const GroupElement<S>& a, const GroupElement<S>& b) {
    return multiply(a, b);
}

template <class S>
GroupElement<S> inverse(GroupElement<S> g) {
    for (auto& x : g.mutable_coords()) x = -x;
    return g;
}

/// Dilation delta_lambda: the weight-k coordinate is scaled by lambda^k.
/// delta_0 collapses everything to the identity.
template <class S>
GroupElement<S> dilate(const S& lambda, GroupElement<S> g) {
    const HallBasis& basis = g.group()->basis();
    auto& c = g.mutable_coords();
    int w = -1;
    S factor = scalar_traits<S>::one();
    for (std::size_t i = 0; i < c.size(); ++i) {
        int wi = basis.weight_of(static_cast<int>(i));
        if (wi != w) {
            factor = int_pow(lambda, wi);
            w = wi;
        }
        c[i] *= factor;
    }
    return g;
}

/// Dilation by an arbitrary real factor. The input may be exact; the result is
/// explicitly a floating-point element.
inline GroupElement<double> dilate_real(double lambda, const GroupElement<Rational>& g) {
    std::vector<double> c(g.coords().size());
    const HallBasis& basis = g.group()->basis();
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = to_double(g[static_cast<int>(i)]) *
               int_pow(lambda, basis.weight_of(static_cast<int>(i)));
    return GroupElement<double>(g.group(), std::move(c));
}

inline GroupElement<double> to_real(const GroupElement<Rational>& g) {
    std::vector<double> c(g.coords().size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = to_double(g[static_cast<int>(i)]);
    return GroupElement<double>(g.group(), std::move(c));
}

/// Group commutator [g,h] = g h g^-1 h^-1.
template <class S>
GroupElement<S> commutator(const GroupElement<S>& g, const GroupElement<S>& h) {
    return multiply(multiply(g, h), multiply(inverse(g), inverse(h)));
}

/// Right-nested commutator [g1,[g2,[...,gk]]] of a list of elements.
template <class S>
GroupElement<S> simple_commutator(const std::vector<GroupElement<S>>& gs) {
    if (gs.empty()) throw domain_error("simple_commutator: empty element list");
    GroupElement<S> acc = gs.back();
    for (std::size_t i = gs.size() - 1; i-- > 0;) acc = commutator(gs[i], acc);
    return acc;
}

/// g^n by binary exponentiation (associativity makes this equal to repeated
/// multiplication); negative n uses the inverse.
template <class S>
GroupElement<S> power(const GroupElement<S>& g, long long n) {
    if (n < 0) return power(inverse(g), -n);
    GroupElement<S> acc = identity<S>(g.group());
    GroupElement<S> base = g;
    unsigned long long e = static_cast<unsigned long long>(n);
    while (e > 0) {
        if (e & 1ull) acc = multiply(acc, base);
        base = e > 1 ? multiply(base, base) : base;
        e >>= 1;
    }
    return acc;
}

template <class S>
GroupElement<S> power(const GroupElement<S>& g, const Integer& n) {
    if (sgn(n) < 0) return power(inverse(g), Integer(-n));
    GroupElement<S> acc = identity<S>(g.group());
    GroupElement<S> base = g;
    Integer e = n;
    while (sgn(e) > 0) {
        if (mpz_odd_p(e.get_mpz_t())) acc = multiply(acc, base);
        if (e > 1) base = multiply(base, base);
        e >>= 1;
    }
    return acc;
}

/// Membership in the lower central series term G^(k): for these graded groups
/// G^(k) is exactly the set of elements supported in weights >= k, and
/// G^(step+1) is trivial.
template <class S>
bool lcs_member(const GroupElement<S>& g, int k) {
    int s = g.group()->step();
    if (k < 1 || k > s + 1)
        throw bounds_error("lcs_member: k must lie in [1, " + std::to_string(s + 1) + "]");
    const HallBasis& basis = g.group()->basis();
    for (int i = 0; i < g.group()->dim(); ++i)
        if (basis.weight_of(i) < k && !scalar_traits<S>::is_zero(g[i])) return false;
    return true;
}

/// True iff g lies in the first layer, i.e. its dilation orbit
/// t -> delta_t(g) is a one-parameter subgroup.
template <class S>
bool in_first_layer(const GroupElement<S>& g) {
    const HallBasis& basis = g.group()->basis();
    for (int i = 0; i < g.group()->dim(); ++i)
        if (basis.weight_of(i) > 1 && !scalar_traits<S>::is_zero(g[i])) return false;
    return true;
}

/// Scalar action on the top layer G^(step): sigma_{n/m}(z) = delta_{1/m}(z^{n m^{s-1}}).
/// Together with the group product this makes the top layer a rational vector
/// space. Requires z in the top layer and a nonzero denominator.
inline GroupElement<Rational> sigma(const Rational& q, const GroupElement<Rational>& z) {
    int s = z.group()->step();
    if (!lcs_member(z, s))
        throw domain_error("sigma: element does not lie in the top layer G^(" + std::to_string(s) + ")");
    Integer n = q.get_num();
    Integer m = q.get_den(); // canonical: m > 0
    Integer e = n;
    for (int i = 0; i < s - 1; ++i) e *= m;
    GroupElement<Rational> p = power(z, e);
    Rational inv_m(1);
    inv_m /= Rational(m);
    return dilate(inv_m, std::move(p));
}

/// Random element with rational coordinates of bounded magnitude.
inline GroupElement<Rational> random_element(const GroupPtr& g, Rng& rng, long magnitude = 10) {
    std::vector<Rational> c(static_cast<std::size_t>(g->dim()));
    for (auto& x : c) x = random_rational(rng, magnitude);
    return GroupElement<Rational>(g, std::move(c));
}

/// Random element supported in weights wmin..wmax.
inline GroupElement<Rational> random_layer_element(const GroupPtr& g, Rng& rng, int wmin, int wmax,
                                                   long magnitude = 10) {
    std::vector<Rational> c(static_cast<std::size_t>(g->dim()), Rational(0));
    const HallBasis& basis = g->basis();
    for (int i = 0; i < g->dim(); ++i) {
        int w = basis.weight_of(i);
        if (w >= wmin && w <= wmax) c[static_cast<std::size_t>(i)] = random_rational(rng, magnitude);
    }
    return GroupElement<Rational>(g, std::move(c));
}

} // namespace carnot
