#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "carnot/carnot_group.hpp"
#include "carnot/errors.hpp"
#include "carnot/random.hpp"

namespace carnot {

enum class NormKind { ball_box, koranyi };

inline const char* to_string(NormKind k) {
    return k == NormKind::koranyi ? "koranyi" : "ball_box";
}

/// A homogeneous gauge: ||delta_t g|| = |t| ||g||, zero only at the identity,
/// invariant under inversion. The induced left-invariant distance is
/// d(p,q) = ||p^-1 q||.
///
/// koranyi is the quartic gauge on the Heisenberg group (a true metric in
/// these coordinates); ball_box is max_k c_k |g_k|^(1/k) over the layers and
/// satisfies the triangle inequality only up to a constant, which
/// estimate_quasi_triangle reports empirically.
struct HomogeneousNorm {
    NormKind kind = NormKind::ball_box;
    std::vector<double> layer_weights; ///< ball_box constants c_k; empty = all 1

    static HomogeneousNorm koranyi() { return HomogeneousNorm{NormKind::koranyi, {}}; }
    static HomogeneousNorm ball_box(std::vector<double> weights = {}) {
        return HomogeneousNorm{NormKind::ball_box, std::move(weights)};
    }
};

inline double norm_value(const HomogeneousNorm& n, const GroupElement<double>& g) {
    const CarnotGroup& G = *g.group();
    if (n.kind == NormKind::koranyi) {
        if (G.rank() != 2 || G.step() != 2)
            throw unsupported_error("koranyi norm requires the rank-2 step-2 group, got " +
                                    G.label());
        double x = g[0], y = g[1], t = g[2];
        double r2 = x * x + y * y;
        return std::pow(r2 * r2 + 16.0 * t * t, 0.25);
    }
    if (!n.layer_weights.empty() &&
        n.layer_weights.size() != static_cast<std::size_t>(G.step()))
        throw domain_error("ball_box norm: expected one layer weight per layer");
    const HallBasis& basis = G.basis();
    double best = 0.0;
    for (int w = 1; w <= G.step(); ++w) {
        double ss = 0.0;
        for (int i = basis.layer_begin(w); i < basis.layer_end(w); ++i) ss += g[i] * g[i];
        if (ss == 0.0) continue;
        double c = n.layer_weights.empty() ? 1.0 : n.layer_weights[static_cast<std::size_t>(w - 1)];
        double val = c * std::pow(ss, 0.5 / w);
        if (val > best) best = val;
    }
    return best;
}

inline double norm_value(const HomogeneousNorm& n, const GroupElement<Rational>& g) {
    return norm_value(n, to_real(g));
}

/// Left-invariant homogeneous distance d(p,q) = ||p^-1 q||. For exact-rational
/// elements the group part is computed exactly and only the final gauge
/// evaluation rounds.
template <class S>
double distance(const HomogeneousNorm& n, const GroupElement<S>& p, const GroupElement<S>& q) {
    p.require_same_group(q);
    return norm_value(n, multiply(inverse(p), q));
}

struct HomothetyReport {
    double speed = 0.0;             ///< c = d(e, v)
    double max_rel_deviation = 0.0; ///< of d(delta_a v, delta_b v) from c|a-b|
    int samples = 0;
};

/// For v in the first layer, t -> delta_t(v) is a homothetic embedding of the
/// line: d(delta_a v, delta_b v) = c |a-b| with c = d(e, v). Samples are exact
/// rationals so the group-side computation is exact and the report measures
/// only gauge round-off.
inline HomothetyReport homothety_check(const HomogeneousNorm& n, const GroupElement<Rational>& v,
                                       const std::vector<std::pair<Rational, Rational>>& samples) {
    if (!in_first_layer(v))
        throw domain_error("homothety_check: direction must lie in the first layer");
    if (v.is_identity()) throw domain_error("homothety_check: direction must not be the identity");
    HomothetyReport rep;
    rep.speed = norm_value(n, v);
    rep.samples = static_cast<int>(samples.size());
    for (const auto& [a, b] : samples) {
        double measured = distance(n, dilate(a, v), dilate(b, v));
        double expected = rep.speed * std::fabs(to_double(Rational(b - a)));
        double dev;
        if (expected == 0.0)
            dev = measured == 0.0 ? 0.0 : 1.0;
        else
            dev = std::fabs(measured - expected) / expected;
        if (dev > rep.max_rel_deviation) rep.max_rel_deviation = dev;
    }
    return rep;
}

struct PerturbationOptions {
    int samples = 200;
    int max_halvings = 40;
    std::uint64_t seed = 1;
};

struct PerturbationResult {
    enum class Status { certified_by_sampling, inconclusive } status =
        Status::inconclusive;
    double delta = 0.0;
    int samples_checked = 0;
};

/// Searches for delta > 0 such that every sampled h with ||h|| < delta moves
/// every k in K by less than eps: d(hk, k) < eps. Starts at delta = eps and
/// halves until the sampled certificate holds. The certificate is
/// probabilistic (randomized h), never a proof; exhaustion of the halving
/// budget yields an inconclusive status instead of an exception.
inline PerturbationResult perturbation_bound(const HomogeneousNorm& n,
                                             const std::vector<GroupElement<double>>& K,
                                             double eps,
                                             const PerturbationOptions& opts = {}) {
    if (K.empty()) throw domain_error("perturbation_bound: K must be nonempty");
    const GroupPtr& g = K.front().group();
    Rng rng = make_rng(opts.seed);
    PerturbationResult res;
    double delta = eps;
    for (int round = 0; round <= opts.max_halvings; ++round) {
        bool ok = true;
        for (int s = 0; s < opts.samples && ok; ++s) {
            // random direction, rescaled to a gauge length just inside delta
            std::vector<double> c(static_cast<std::size_t>(g->dim()));
            double mag = 0.0;
            for (auto& x : c) {
                x = uniform(rng, -1.0, 1.0);
                mag += std::fabs(x);
            }
            if (mag == 0.0) continue;
            GroupElement<double> u(g, std::move(c));
            double nu = norm_value(n, u);
            if (nu == 0.0) continue;
            double t = uniform(rng, 0.0, 1.0);
            GroupElement<double> h = dilate(t * delta / nu, u);
            ++res.samples_checked;
            for (const auto& k : K) {
                if (distance(n, multiply(h, k), k) >= eps) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) {
            res.status = PerturbationResult::Status::certified_by_sampling;
            res.delta = delta;
            return res;
        }
        delta *= 0.5;
    }
    return res;
}

struct QuasiTriangleEstimate {
    double constant = 1.0; ///< max of d(p,q) / (d(p,r) + d(r,q)) over samples
    int trials = 0;
};

/// Empirical quasi-triangle constant of a gauge distance on a group.
inline QuasiTriangleEstimate estimate_quasi_triangle(const HomogeneousNorm& n, const GroupPtr& g,
                                                     int trials, std::uint64_t seed,
                                                     long magnitude = 10) {
    Rng rng = make_rng(seed);
    QuasiTriangleEstimate est;
    est.trials = trials;
    for (int t = 0; t < trials; ++t) {
        auto p = random_element(g, rng, magnitude);
        auto q = random_element(g, rng, magnitude);
        auto r = random_element(g, rng, magnitude);
        double direct = distance(n, p, q);
        double via = distance(n, p, r) + distance(n, r, q);
        if (via <= 1e-300) continue;
        double ratio = direct / via;
        if (ratio > est.constant) est.constant = ratio;
    }
    return est;
}

struct MetricAxiomReport {
    std::string norm_name;
    int trials = 0;
    int symmetry_failures = 0;
    int identity_failures = 0;
    int positivity_failures = 0;
    double max_homogeneity_rel = 0.0;
    double max_left_invariance_rel = 0.0;
    int triangle_violations = -1;        ///< -1 when the gauge is not a proven metric
    double quasi_triangle_constant = 0.0; ///< reported for ball_box on step >= 2

    bool passed(double tol_rel) const {
        bool ok = symmetry_failures == 0 && identity_failures == 0 && positivity_failures == 0 &&
                  max_homogeneity_rel < tol_rel && max_left_invariance_rel < tol_rel;
        if (triangle_violations >= 0) ok = ok && triangle_violations == 0;
        return ok;
    }
};

/// Samples exact-rational triples and checks the metric axioms of the induced
/// distance. Symmetry and left-invariance go through the exact group law, so
/// they are bit-exact; homogeneity uses exact rational dilation factors and
/// measures gauge round-off only. The triangle inequality is counted exactly
/// (with a 4-ulp float allowance) for gauges that are true metrics: koranyi,
/// and ball_box on abelian groups. For other ball_box gauges the empirical
/// quasi-triangle constant is reported instead.
inline MetricAxiomReport verify_metric_axioms(const HomogeneousNorm& n, const GroupPtr& g,
                                              int trials, std::uint64_t seed, long magnitude = 10) {
    MetricAxiomReport rep;
    rep.norm_name = to_string(n.kind);
    rep.trials = trials;
    bool true_metric = n.kind == NormKind::koranyi || g->step() == 1;
    if (true_metric) rep.triangle_violations = 0;
    Rng rng = make_rng(seed);
    for (int t = 0; t < trials; ++t) {
        auto p = random_element(g, rng, magnitude);
        auto q = random_element(g, rng, magnitude);
        auto r = random_element(g, rng, magnitude);
        double dpq = distance(n, p, q);
        if (distance(n, q, p) != dpq) ++rep.symmetry_failures;
        if (distance(n, p, p) != 0.0) ++rep.identity_failures;
        if (!(p == q) && !(dpq > 0.0)) ++rep.positivity_failures;

        Rational lam = random_nonzero_rational(rng, magnitude);
        double lhs = distance(n, dilate(lam, p), dilate(lam, q));
        double scale = std::fabs(to_double(lam)) * dpq;
        if (scale > 0.0) {
            double dev = std::fabs(lhs - scale) / scale;
            if (dev > rep.max_homogeneity_rel) rep.max_homogeneity_rel = dev;
        }
        double dl = distance(n, multiply(r, p), multiply(r, q));
        if (dpq > 0.0) {
            double dev = std::fabs(dl - dpq) / dpq;
            if (dev > rep.max_left_invariance_rel) rep.max_left_invariance_rel = dev;
        }
        if (true_metric) {
            double via = distance(n, p, r) + distance(n, r, q);
            if (dpq > via * (1.0 + 4.0 * 2.220446049250313e-16)) ++rep.triangle_violations;
        }
    }
    if (!true_metric)
        rep.quasi_triangle_constant =
            estimate_quasi_triangle(n, g, std::min(trials, 2000), seed ^ 0x5a5au, magnitude)
                .constant;
    return rep;
}

} // namespace carnot
