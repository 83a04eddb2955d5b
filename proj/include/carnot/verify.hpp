#pragma once

#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "carnot/carnot_group.hpp"
#include "carnot/parallel.hpp"
#include "carnot/random.hpp"

namespace carnot {

struct CheckResult {
    std::string name;
    int trials = 0;
    int failures = 0;
    std::string first_counterexample; ///< empty when the check passed
    bool passed() const { return failures == 0; }
};

struct VerifyReport {
    std::string suite;
    std::vector<CheckResult> checks;
    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed()) return false;
        return true;
    }
    const CheckResult* first_failure() const {
        for (const auto& c : checks)
            if (!c.passed()) return &c;
        return nullptr;
    }
};

namespace detail {

/// Runs `trials` independent seeded trials, possibly in parallel; failures are
/// reduced in index order so the report is identical at every parallelism
/// degree. The callback returns a failure description, or nothing on success.
inline CheckResult run_trials(const std::string& name, int trials, unsigned jobs,
                              const std::function<std::optional<std::string>(int)>& trial) {
    std::vector<std::optional<std::string>> outcome(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials), jobs,
                 [&](std::size_t i) { outcome[i] = trial(static_cast<int>(i)); });
    CheckResult r;
    r.name = name;
    r.trials = trials;
    for (int i = 0; i < trials; ++i) {
        if (outcome[static_cast<std::size_t>(i)]) {
            if (r.failures == 0)
                r.first_counterexample =
                    "trial " + std::to_string(i) + ": " + *outcome[static_cast<std::size_t>(i)];
            ++r.failures;
        }
    }
    return r;
}

template <class S>
std::string coords_string(const GroupElement<S>& g) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < g.coords().size(); ++i) {
        if (i) os << ",";
        os << to_string(g.coords()[i]);
    }
    os << ")";
    return os.str();
}

} // namespace detail

/// Exact group-law checks: associativity, identity, inverses, and the
/// dilation laws delta_l(delta_m(g)) = delta_{lm}(g),
/// delta_l(gh) = delta_l(g) delta_l(h), delta_0(g) = e.
inline VerifyReport verify_group_axioms(const GroupPtr& g, int trials, std::uint64_t seed,
                                        unsigned jobs = 1, long magnitude = 10) {
    VerifyReport rep;
    rep.suite = "group_axioms";
    rep.checks.push_back(detail::run_trials(
        "associativity", trials, jobs, [&](int t) -> std::optional<std::string> {
            Rng rng = make_rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
            auto a = random_element(g, rng, magnitude);
            auto b = random_element(g, rng, magnitude);
            auto c = random_element(g, rng, magnitude);
            if (multiply(multiply(a, b), c) == multiply(a, multiply(b, c))) return std::nullopt;
            return "a=" + detail::coords_string(a) + " b=" + detail::coords_string(b) +
                   " c=" + detail::coords_string(c);
        }));
    rep.checks.push_back(detail::run_trials(
        "identity_and_inverse", trials, jobs, [&](int t) -> std::optional<std::string> {
            Rng rng = make_rng(mix_seed(seed ^ 0x11u, static_cast<std::uint64_t>(t)));
            auto a = random_element(g, rng, magnitude);
            bool ok = multiply(a, identity<Rational>(g)) == a &&
                      multiply(identity<Rational>(g), a) == a &&
                      multiply(a, inverse(a)).is_identity();
            if (ok) return std::nullopt;
            return "a=" + detail::coords_string(a);
        }));
    rep.checks.push_back(detail::run_trials(
        "dilation_composition", trials, jobs, [&](int t) -> std::optional<std::string> {
            Rng rng = make_rng(mix_seed(seed ^ 0x22u, static_cast<std::uint64_t>(t)));
            auto a = random_element(g, rng, magnitude);
            Rational l = random_rational(rng, magnitude);
            Rational m = random_rational(rng, magnitude);
            bool ok = dilate(l, dilate(m, a)) == dilate(Rational(l * m), a) &&
                      dilate(Rational(0), a).is_identity();
            if (ok) return std::nullopt;
            return "a=" + detail::coords_string(a) + " l=" + to_string(l) + " m=" + to_string(m);
        }));
    rep.checks.push_back(detail::run_trials(
        "dilation_automorphism", trials, jobs, [&](int t) -> std::optional<std::string> {
            Rng rng = make_rng(mix_seed(seed ^ 0x33u, static_cast<std::uint64_t>(t)));
            auto a = random_element(g, rng, magnitude);
            auto b = random_element(g, rng, magnitude);
            Rational l = random_rational(rng, magnitude);
            if (dilate(l, multiply(a, b)) == multiply(dilate(l, a), dilate(l, b)))
                return std::nullopt;
            return "a=" + detail::coords_string(a) + " b=" + detail::coords_string(b) +
                   " l=" + to_string(l);
        }));
    return rep;
}

/// Exact checks of the classical commutator identities, on seeded random
/// rational triples:
///   product_commutator_expansion   [xy,z] = [x,[y,z]] [y,z] [x,z]
///   central_product_split          [xy,z] = [x,z][y,z], [z,xy] = [z,x][z,y]
///                                  (with [y,z] arranged to be central)
///   power_commutator_residue       [x^n,y^m] = h [x,y]^{nm}, h in G^(3)
///   inverse_commutator_twist       [x^-1,y] = [x^-1,[y,x]] [x,y]^-1
inline VerifyReport verify_commutator_identities(const GroupPtr& g, int trials, std::uint64_t seed,
                                                 unsigned jobs = 1, long magnitude = 10) {
    VerifyReport rep;
    rep.suite = "commutator_identities";
    int s = g->step();
    rep.checks.push_back(detail::run_trials(
        "product_commutator_expansion", trials, jobs, [&](int t) -> std::optional<std::string> {
            Rng rng = make_rng(mix_seed(seed ^ 0x44u, static_cast<std::uint64_t>(t)));
            auto x = random_element(g, rng, magnitude);
            auto y = random_element(g, rng, magnitude);
            auto z = random_element(g, rng, magnitude);
            auto lhs = commutator(multiply(x, y), z);
            auto yz = commutator(y, z);
            auto rhs = multiply(multiply(commutator(x, yz), yz), commutator(x, z));
            if (lhs == rhs) return std::nullopt;
            return "x=" + detail::coords_string(x) + " y=" + detail::coords_string(y) +
                   " z=" + detail::coords_string(z);
        }));
    rep.checks.push_back(detail::run_trials(
        "central_product_split", trials, jobs, [&](int t) -> std::optional<std::string> {
            Rng rng = make_rng(mix_seed(seed ^ 0x55u, static_cast<std::uint64_t>(t)));
            auto x = random_element(g, rng, magnitude);
            auto y = random_element(g, rng, magnitude);
            // z in G^(s-1) forces [y,z] into the central top layer
            auto z = random_layer_element(g, rng, s > 1 ? s - 1 : 1, s, magnitude);
            auto lhs1 = commutator(multiply(x, y), z);
            auto rhs1 = multiply(commutator(x, z), commutator(y, z));
            auto lhs2 = commutator(z, multiply(x, y));
            auto rhs2 = multiply(commutator(z, x), commutator(z, y));
            if (lhs1 == rhs1 && lhs2 == rhs2) return std::nullopt;
            return "x=" + detail::coords_string(x) + " y=" + detail::coords_string(y) +
                   " z=" + detail::coords_string(z);
        }));
    rep.checks.push_back(detail::run_trials(
        "power_commutator_residue", trials, jobs, [&](int t) -> std::optional<std::string> {
            Rng rng = make_rng(mix_seed(seed ^ 0x66u, static_cast<std::uint64_t>(t)));
            auto x = random_element(g, rng, magnitude);
            auto y = random_element(g, rng, magnitude);
            long n = uniform_int(rng, 1, 4);
            long m = uniform_int(rng, 1, 4);
            auto lhs = commutator(power(x, n), power(y, m));
            auto h = multiply(lhs, inverse(power(commutator(x, y), n * m)));
            if (lcs_member(h, std::min(3, g->step() + 1))) return std::nullopt;
            return "x=" + detail::coords_string(x) + " y=" + detail::coords_string(y) +
                   " n=" + std::to_string(n) + " m=" + std::to_string(m) +
                   " residue=" + detail::coords_string(h);
        }));
    rep.checks.push_back(detail::run_trials(
        "inverse_commutator_twist", trials, jobs, [&](int t) -> std::optional<std::string> {
            Rng rng = make_rng(mix_seed(seed ^ 0x77u, static_cast<std::uint64_t>(t)));
            auto x = random_element(g, rng, magnitude);
            auto y = random_element(g, rng, magnitude);
            auto lhs = commutator(inverse(x), y);
            auto rhs = multiply(commutator(inverse(x), commutator(y, x)),
                                inverse(commutator(x, y)));
            if (lhs == rhs) return std::nullopt;
            return "x=" + detail::coords_string(x) + " y=" + detail::coords_string(y);
        }));
    return rep;
}

/// Dilation of a weight-k simple commutator y of first-layer elements factors
/// as delta_m(y) = h y^{m^k} with h one layer deeper; at k = step the residue
/// h must be the identity. Checked exactly on seeded random commutators.
inline VerifyReport verify_dilation_residue(const GroupPtr& g, const std::vector<long>& m_values,
                                            int trials, std::uint64_t seed, unsigned jobs = 1,
                                            long magnitude = 10) {
    if (g->step() < 2) throw domain_error("verify_dilation_residue: group step must be >= 2");
    VerifyReport rep;
    rep.suite = "dilation_residue";
    for (int k = 2; k <= g->step(); ++k) {
        for (long m : m_values) {
            std::string name = "residue_k" + std::to_string(k) + "_m" + std::to_string(m);
            rep.checks.push_back(detail::run_trials(
                name, trials, jobs, [&, k, m](int t) -> std::optional<std::string> {
                    Rng rng = make_rng(mix_seed(seed ^ (0x88u + static_cast<unsigned>(k)),
                                                static_cast<std::uint64_t>(t) * 131 +
                                                    static_cast<std::uint64_t>(m)));
                    std::vector<GroupElement<Rational>> gs;
                    for (int i = 0; i < k; ++i)
                        gs.push_back(random_layer_element(g, rng, 1, 1, magnitude));
                    auto y = simple_commutator(gs);
                    long long mk = 1;
                    for (int i = 0; i < k; ++i) mk *= m;
                    auto h = multiply(dilate(Rational(m), y), inverse(power(y, mk)));
                    bool ok = lcs_member(h, k + 1);
                    if (ok && k == g->step()) ok = h.is_identity();
                    if (ok) return std::nullopt;
                    return "y=" + detail::coords_string(y) + " residue=" + detail::coords_string(h);
                }));
        }
    }
    return rep;
}

/// The top layer with sigma_q as scalar action satisfies the vector-space
/// axioms exactly: compatibility, additivity in the scalar, unit, and
/// distribution over the (abelian) top-layer product.
inline VerifyReport verify_top_layer_scalars(const GroupPtr& g, int trials, std::uint64_t seed,
                                             unsigned jobs = 1, long den_bound = 12) {
    VerifyReport rep;
    rep.suite = "top_layer_scalars";
    int s = g->step();
    auto sample = [&](Rng& rng) { return random_layer_element(g, rng, s, s, 10); };
    rep.checks.push_back(detail::run_trials(
        "scalar_compatibility", trials, jobs, [&](int t) -> std::optional<std::string> {
            Rng rng = make_rng(mix_seed(seed ^ 0xa1u, static_cast<std::uint64_t>(t)));
            auto z = sample(rng);
            Rational q = random_rational(rng, den_bound);
            Rational p = random_rational(rng, den_bound);
            if (sigma(q, sigma(p, z)) == sigma(Rational(q * p), z)) return std::nullopt;
            return "z=" + detail::coords_string(z) + " q=" + to_string(q) + " p=" + to_string(p);
        }));
    rep.checks.push_back(detail::run_trials(
        "scalar_additivity", trials, jobs, [&](int t) -> std::optional<std::string> {
            Rng rng = make_rng(mix_seed(seed ^ 0xa2u, static_cast<std::uint64_t>(t)));
            auto z = sample(rng);
            Rational q = random_rational(rng, den_bound);
            Rational p = random_rational(rng, den_bound);
            if (multiply(sigma(q, z), sigma(p, z)) == sigma(Rational(q + p), z))
                return std::nullopt;
            return "z=" + detail::coords_string(z) + " q=" + to_string(q) + " p=" + to_string(p);
        }));
    rep.checks.push_back(detail::run_trials(
        "scalar_unit", trials, jobs, [&](int t) -> std::optional<std::string> {
            Rng rng = make_rng(mix_seed(seed ^ 0xa3u, static_cast<std::uint64_t>(t)));
            auto z = sample(rng);
            if (sigma(Rational(1), z) == z) return std::nullopt;
            return "z=" + detail::coords_string(z);
        }));
    rep.checks.push_back(detail::run_trials(
        "scalar_distributes_over_product", trials, jobs, [&](int t) -> std::optional<std::string> {
            Rng rng = make_rng(mix_seed(seed ^ 0xa4u, static_cast<std::uint64_t>(t)));
            auto z = sample(rng);
            auto h = sample(rng);
            Rational q = random_rational(rng, den_bound);
            if (multiply(sigma(q, z), sigma(q, h)) == sigma(q, multiply(z, h)))
                return std::nullopt;
            return "z=" + detail::coords_string(z) + " h=" + detail::coords_string(h) +
                   " q=" + to_string(q);
        }));
    return rep;
}

} // namespace carnot
