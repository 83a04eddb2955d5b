#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "carnot/errors.hpp"
#include "carnot/scalar.hpp"

namespace carnot {

/// One Hall word of a free nilpotent Lie algebra: either a generator or a
/// bracket [left,right] of two earlier basis words.
struct HallWord {
    int weight = 1;
    int left = -1; ///< index of the left factor, -1 for generators
    int right = 0; ///< index of the right factor, or the generator number for leaves
    bool is_generator() const { return left < 0; }
};

namespace detail {

/// Sparse polynomial in the free associative algebra on `rank` letters,
/// truncated at a fixed degree. Keys are letter sequences. Exact coefficients.
using TensorMono = std::vector<std::uint8_t>;
using TensorPoly = std::map<TensorMono, Rational>;

inline void tensor_add(TensorPoly& dst, const TensorMono& m, const Rational& c) {
    auto it = dst.find(m);
    if (it == dst.end()) {
        if (sgn(c) != 0) dst.emplace(m, c);
        return;
    }
    it->second += c;
    if (sgn(it->second) == 0) dst.erase(it);
}

/// dst += f * a * b, truncated at max_degree.
inline void tensor_mul_add(TensorPoly& dst, const TensorPoly& a, const TensorPoly& b,
                           const Rational& f, std::size_t max_degree) {
    TensorMono m;
    for (const auto& [ma, ca] : a) {
        for (const auto& [mb, cb] : b) {
            if (ma.size() + mb.size() > max_degree) continue;
            m = ma;
            m.insert(m.end(), mb.begin(), mb.end());
            tensor_add(dst, m, f * ca * cb);
        }
    }
}

/// Monomial in the commuting coordinate variables of a BCH polynomial map:
/// a sorted list of variable ids (x_i -> i, y_i -> dim + i), with repetition.
using CoordMono = std::vector<std::uint16_t>;
using CoordPoly = std::map<CoordMono, Rational>;

inline CoordMono mono_mul(const CoordMono& a, const CoordMono& b) {
    CoordMono out;
    out.resize(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), out.begin());
    return out;
}

inline void poly_add(CoordPoly& dst, const CoordMono& m, const Rational& c) {
    auto it = dst.find(m);
    if (it == dst.end()) {
        if (sgn(c) != 0) dst.emplace(m, c);
        return;
    }
    it->second += c;
    if (sgn(it->second) == 0) dst.erase(it);
}

} // namespace detail

/// One term of a compiled group-law polynomial: coeff * prod(vars), where a
/// variable id v < dim refers to the left factor's coordinate v and
/// v >= dim to the right factor's coordinate v - dim.
template <class S>
struct CompiledTerm {
    S coeff;
    std::vector<std::uint16_t> vars;
};

/// Compiled polynomial map for z = bch(x, y): one term list per output
/// coordinate. Built once per basis, then evaluated on the hot path.
template <class S>
class CompiledBch {
public:
    CompiledBch(int dim, std::vector<std::vector<CompiledTerm<S>>> terms)
        : dim_(dim), terms_(std::move(terms)) {}

    int dim() const { return dim_; }

    void eval(const std::vector<S>& x, const std::vector<S>& y, std::vector<S>& out) const {
        out.assign(dim_, scalar_traits<S>::zero());
        S prod;
        for (int k = 0; k < dim_; ++k) {
            S& acc = out[k];
            for (const auto& term : terms_[k]) {
                prod = term.coeff;
                bool dead = false;
                for (std::uint16_t v : term.vars) {
                    const S& f = v < static_cast<std::uint16_t>(dim_)
                                     ? x[v]
                                     : y[v - static_cast<std::uint16_t>(dim_)];
                    if constexpr (scalar_traits<S>::exact) {
                        if (scalar_traits<S>::is_zero(f)) {
                            dead = true;
                            break;
                        }
                    }
                    prod *= f;
                }
                if (!dead) acc += prod;
            }
        }
    }

    std::size_t term_count() const {
        std::size_t n = 0;
        for (const auto& t : terms_) n += t.size();
        return n;
    }

private:
    int dim_;
    std::vector<std::vector<CompiledTerm<S>>> terms_;
};

/// Graded Hall basis of the free nilpotent Lie algebra on `rank` generators
/// truncated at `step`, in the Hall-family convention: a bracket [u,v] of
/// basis words is itself a basis word iff u < v in the (weight, tree-lex)
/// order and, when v = [w,t] is composite, w <= u. Words are indexed by
/// increasing weight; within a weight by (left, right) index pairs.
///
/// Structure constants are obtained by expanding candidate brackets in the
/// truncated tensor algebra and solving exactly against the expansions of the
/// basis words of the same weight, so any internal inconsistency surfaces as
/// a loud failure instead of a wrong table. Tables are cached lazily and may
/// be read concurrently once built.
class HallBasis : public std::enable_shared_from_this<HallBasis> {
public:
    static constexpr int max_rank = 8;
    static constexpr int max_step = 8;

    using SparseRow = std::vector<std::pair<int, Rational>>;

    static std::shared_ptr<const HallBasis> make(int rank, int step) {
        if (rank < 1 || rank > max_rank)
            throw bounds_error("hall_basis: rank must lie in [1, " + std::to_string(max_rank) +
                               "], got " + std::to_string(rank));
        if (step < 1 || step > max_step)
            throw bounds_error("hall_basis: step must lie in [1, " + std::to_string(max_step) +
                               "], got " + std::to_string(step));
        return std::shared_ptr<const HallBasis>(new HallBasis(rank, step));
    }

    int rank() const { return rank_; }
    int step() const { return step_; }
    int dim() const { return static_cast<int>(words_.size()); }

    const HallWord& word(int i) const { return words_[static_cast<std::size_t>(i)]; }
    int weight_of(int i) const { return words_[static_cast<std::size_t>(i)].weight; }

    /// Index range [begin, end) of the words of weight w (1 <= w <= step).
    int layer_begin(int w) const { return layer_offsets_[static_cast<std::size_t>(w - 1)]; }
    int layer_end(int w) const { return layer_offsets_[static_cast<std::size_t>(w)]; }
    int layer_dim(int w) const { return layer_end(w) - layer_begin(w); }

    /// Human-readable bracket form, e.g. "[x1,[x1,x2]]".
    std::string bracket_string(int i) const {
        const HallWord& w = word(i);
        if (w.is_generator()) return "x" + std::to_string(w.right + 1);
        return "[" + bracket_string(w.left) + "," + bracket_string(w.right) + "]";
    }

    /// Expansion of [w_i, w_j] in the basis (all i, j accepted; antisymmetric,
    /// truncated to zero above `step`). Entries sorted by word index.
    SparseRow bracket_of_words(int i, int j) const {
        if (i == j) return {};
        if (weight_of(i) + weight_of(j) > step_) return {};
        if (i < j) return canonical_row(i, j);
        SparseRow row = canonical_row(j, i);
        for (auto& [k, c] : row) c = -c;
        return row;
    }

    /// Cached canonical row for i < j with admissible weight. The reference
    /// stays valid for the basis lifetime.
    const SparseRow& canonical_row(int i, int j) const {
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = bracket_cache_.find({i, j});
            if (it != bracket_cache_.end()) return it->second;
        }
        SparseRow row = compute_row(i, j);
        std::lock_guard<std::mutex> lock(mu_);
        return bracket_cache_.emplace(std::make_pair(i, j), std::move(row)).first->second;
    }

    /// Index of the basis word equal to [w_i, w_j], or -1 when the pair is not
    /// itself a Hall word.
    int pair_word(int i, int j) const {
        auto it = pair_index_.find({i, j});
        return it == pair_index_.end() ? -1 : it->second;
    }

    /// Group-law polynomial map, compiled for the requested scalar type.
    /// Built on first use; the reference stays valid for the basis lifetime.
    template <class S>
    const CompiledBch<S>& bch_compiled() const;

    /// Coefficients of the truncated BCH series indexed by letter words over
    /// {0 = left factor, 1 = right factor}: bch(x,y) = sum_w c_w * R(w) where
    /// R is the right-nested bracketing of the word. Obtained by applying the
    /// Dynkin idempotent w -> R(w)/|w| to log(exp(x) exp(y)) expanded in the
    /// free associative algebra on two letters.
    static const std::map<std::vector<std::uint8_t>, Rational>& bch_word_coefficients(int step);

private:
    HallBasis(int rank, int step) : rank_(rank), step_(step) {
        // Weight-1 layer: the generators in order.
        for (int g = 0; g < rank; ++g) words_.push_back(HallWord{1, -1, g});
        layer_offsets_.push_back(0);
        layer_offsets_.push_back(rank);
        for (int w = 2; w <= step; ++w) {
            std::vector<std::pair<int, int>> pairs;
            for (int a = 1; a <= w - 1; ++a) {
                int b = w - a;
                for (int u = layer_begin(a); u < layer_end(a); ++u) {
                    for (int v = layer_begin(b); v < layer_end(b); ++v) {
                        if (a > b) continue;          // need weight(u) <= weight(v)
                        if (a == b && u >= v) continue; // same weight: strict order
                        const HallWord& vw = word(v);
                        if (!vw.is_generator() && vw.left > u) continue;
                        pairs.emplace_back(u, v);
                    }
                }
            }
            std::sort(pairs.begin(), pairs.end());
            for (auto [u, v] : pairs) words_.push_back(HallWord{w, u, v});
            layer_offsets_.push_back(static_cast<int>(words_.size()));
        }
        for (int k = 0; k < dim(); ++k) {
            const HallWord& w = words_[static_cast<std::size_t>(k)];
            if (!w.is_generator()) pair_index_[{w.left, w.right}] = k;
        }
        tensor_cache_.resize(words_.size());
    }

    // --- structure constants -------------------------------------------------

    struct Echelon {
        struct Row {
            detail::TensorPoly poly;        // invariant: poly == sum_k combo[k] * T(word_k)
            std::vector<Rational> combo;    // layer-local coordinates
        };
        std::vector<Row> rows;
        std::map<detail::TensorMono, int> pivot_of;
    };

    const detail::TensorPoly& tensor_of_word(int i) const {
        // caller holds mu_
        auto& slot = tensor_cache_[static_cast<std::size_t>(i)];
        if (slot) return *slot;
        const HallWord& w = words_[static_cast<std::size_t>(i)];
        auto poly = std::make_unique<detail::TensorPoly>();
        if (w.is_generator()) {
            detail::TensorMono m{static_cast<std::uint8_t>(w.right)};
            poly->emplace(std::move(m), Rational(1));
        } else {
            const detail::TensorPoly& a = tensor_of_word(w.left);
            const detail::TensorPoly& b = tensor_of_word(w.right);
            detail::tensor_mul_add(*poly, a, b, Rational(1), static_cast<std::size_t>(step_));
            detail::tensor_mul_add(*poly, b, a, Rational(-1), static_cast<std::size_t>(step_));
        }
        slot = std::move(poly);
        return *slot;
    }

    static void reduce_against(const Echelon& e, detail::TensorPoly& p,
                               std::vector<Rational>& coords) {
        while (!p.empty()) {
            const auto& lead = p.begin()->first;
            auto it = e.pivot_of.find(lead);
            if (it == e.pivot_of.end()) return;
            const Echelon::Row& row = e.rows[static_cast<std::size_t>(it->second)];
            Rational f = p.begin()->second / row.poly.at(lead);
            for (const auto& [m, c] : row.poly) detail::tensor_add(p, m, -f * c);
            for (std::size_t k = 0; k < coords.size(); ++k) coords[k] += f * row.combo[k];
        }
    }

    const Echelon& echelon_for_weight(int w) const {
        // caller holds mu_
        auto it = echelon_.find(w);
        if (it != echelon_.end()) return *it->second;
        auto e = std::make_unique<Echelon>();
        int lo = layer_begin(w), hi = layer_end(w);
        int n = hi - lo;
        for (int local = 0; local < n; ++local) {
            Echelon::Row row;
            row.poly = tensor_of_word(lo + local);
            row.combo.assign(static_cast<std::size_t>(n), Rational(0));
            row.combo[static_cast<std::size_t>(local)] = 1;
            // reduce against earlier pivots, tracking the combination
            while (!row.poly.empty()) {
                const auto& lead = row.poly.begin()->first;
                auto pit = e->pivot_of.find(lead);
                if (pit == e->pivot_of.end()) break;
                const Echelon::Row& prev = e->rows[static_cast<std::size_t>(pit->second)];
                Rational f = row.poly.begin()->second / prev.poly.at(lead);
                for (const auto& [m, c] : prev.poly) detail::tensor_add(row.poly, m, -f * c);
                for (std::size_t k = 0; k < row.combo.size(); ++k)
                    row.combo[k] -= f * prev.combo[k];
            }
            if (row.poly.empty())
                throw error("hall_basis: basis words of weight " + std::to_string(w) +
                            " are not independent (internal error)");
            e->pivot_of[row.poly.begin()->first] = static_cast<int>(e->rows.size());
            e->rows.push_back(std::move(row));
        }
        return *echelon_.emplace(w, std::move(e)).first->second;
    }

    SparseRow compute_row(int i, int j) const {
        std::lock_guard<std::mutex> lock(mu_);
        int w = weight_of(i) + weight_of(j);
        // Fast path: the pair is itself a basis word.
        if (auto it = pair_index_.find({i, j}); it != pair_index_.end())
            return {{it->second, Rational(1)}};
        detail::TensorPoly target;
        const detail::TensorPoly& a = tensor_of_word(i);
        const detail::TensorPoly& b = tensor_of_word(j);
        detail::tensor_mul_add(target, a, b, Rational(1), static_cast<std::size_t>(step_));
        detail::tensor_mul_add(target, b, a, Rational(-1), static_cast<std::size_t>(step_));
        const Echelon& e = echelon_for_weight(w);
        std::vector<Rational> coords(static_cast<std::size_t>(layer_dim(w)), Rational(0));
        reduce_against(e, target, coords);
        if (!target.empty())
            throw error("hall_basis: bracket expansion left the span of weight-" +
                        std::to_string(w) + " words (internal error)");
        SparseRow row;
        int lo = layer_begin(w);
        for (std::size_t k = 0; k < coords.size(); ++k)
            if (sgn(coords[k]) != 0) row.emplace_back(lo + static_cast<int>(k), coords[k]);
        return row;
    }

    // --- compiled group law ---------------------------------------------------

    detail::CoordPoly poly_mul(const detail::CoordPoly& a, const detail::CoordPoly& b) const {
        detail::CoordPoly out;
        for (const auto& [ma, ca] : a)
            for (const auto& [mb, cb] : b) detail::poly_add(out, detail::mono_mul(ma, mb), ca * cb);
        return out;
    }

    using SymVec = std::vector<detail::CoordPoly>; // one coordinate polynomial per word

    SymVec bracket_sym(const SymVec& a, const SymVec& b) const {
        SymVec out(words_.size());
        for (int i = 0; i < dim(); ++i) {
            if (a[static_cast<std::size_t>(i)].empty()) continue;
            for (int j = 0; j < dim(); ++j) {
                if (b[static_cast<std::size_t>(j)].empty()) continue;
                if (i == j || weight_of(i) + weight_of(j) > step_) continue;
                int lo = std::min(i, j), hi = std::max(i, j);
                const SparseRow& row = canonical_row(lo, hi);
                if (row.empty()) continue;
                detail::CoordPoly prod =
                    poly_mul(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(j)]);
                Rational sign = i < j ? 1 : -1;
                for (const auto& [k, c] : row)
                    for (const auto& [m, pc] : prod)
                        detail::poly_add(out[static_cast<std::size_t>(k)], m, sign * c * pc);
            }
        }
        return out;
    }

    SymVec build_symbolic_bch() const {
        const auto& table = bch_word_coefficients(step_);
        // suffix values, grouped by length so each is a single bracket away
        std::map<std::vector<std::uint8_t>, SymVec> values;
        SymVec base[2];
        for (int side = 0; side < 2; ++side) {
            base[side].assign(words_.size(), {});
            for (int i = 0; i < dim(); ++i) {
                detail::CoordMono m{
                    static_cast<std::uint16_t>(i + side * dim())};
                base[side][static_cast<std::size_t>(i)].emplace(std::move(m), Rational(1));
            }
        }
        std::vector<std::vector<std::uint8_t>> suffixes;
        for (const auto& [w, c] : table)
            for (std::size_t s = 0; s < w.size(); ++s)
                suffixes.emplace_back(w.begin() + static_cast<long>(s), w.end());
        std::sort(suffixes.begin(), suffixes.end(),
                  [](const auto& a, const auto& b) {
                      return a.size() != b.size() ? a.size() < b.size() : a < b;
                  });
        suffixes.erase(std::unique(suffixes.begin(), suffixes.end()), suffixes.end());
        for (const auto& s : suffixes) {
            if (s.size() == 1) {
                values[s] = base[s[0]];
                continue;
            }
            std::vector<std::uint8_t> rest(s.begin() + 1, s.end());
            values[s] = bracket_sym(base[s[0]], values.at(rest));
        }
        SymVec z(words_.size());
        for (const auto& [w, c] : table) {
            const SymVec& v = values.at(w);
            for (std::size_t k = 0; k < words_.size(); ++k)
                for (const auto& [m, pc] : v[k]) detail::poly_add(z[k], m, c * pc);
        }
        return z;
    }

    template <class S>
    std::unique_ptr<CompiledBch<S>> compile_bch(const SymVec& z) const {
        std::vector<std::vector<CompiledTerm<S>>> terms(words_.size());
        for (std::size_t k = 0; k < words_.size(); ++k) {
            terms[k].reserve(z[k].size());
            for (const auto& [m, c] : z[k]) {
                CompiledTerm<S> t;
                t.coeff = scalar_traits<S>::from_rational(c);
                t.vars.assign(m.begin(), m.end());
                terms[k].push_back(std::move(t));
            }
        }
        return std::make_unique<CompiledBch<S>>(dim(), std::move(terms));
    }

    const SymVec& symbolic_bch() const {
        std::lock_guard<std::mutex> lock(sym_mu_);
        if (!sym_bch_) sym_bch_ = std::make_unique<SymVec>(build_symbolic_bch());
        return *sym_bch_;
    }

    int rank_;
    int step_;
    std::vector<HallWord> words_;
    std::vector<int> layer_offsets_; // size step+1: layer w is [offsets[w-1], offsets[w])
    std::map<std::pair<int, int>, int> pair_index_;

    mutable std::mutex mu_;
    mutable std::map<std::pair<int, int>, SparseRow> bracket_cache_;
    mutable std::vector<std::unique_ptr<detail::TensorPoly>> tensor_cache_;
    mutable std::map<int, std::unique_ptr<Echelon>> echelon_;

    mutable std::mutex sym_mu_;
    mutable std::unique_ptr<SymVec> sym_bch_;
    mutable std::unique_ptr<CompiledBch<Rational>> compiled_exact_;
    mutable std::unique_ptr<CompiledBch<double>> compiled_real_;
};

template <>
inline const CompiledBch<Rational>& HallBasis::bch_compiled<Rational>() const {
    const SymVec& z = symbolic_bch();
    std::lock_guard<std::mutex> lock(sym_mu_);
    if (!compiled_exact_) compiled_exact_ = compile_bch<Rational>(z);
    return *compiled_exact_;
}

template <>
inline const CompiledBch<double>& HallBasis::bch_compiled<double>() const {
    const SymVec& z = symbolic_bch();
    std::lock_guard<std::mutex> lock(sym_mu_);
    if (!compiled_real_) compiled_real_ = compile_bch<double>(z);
    return *compiled_real_;
}

inline const std::map<std::vector<std::uint8_t>, Rational>&
HallBasis::bch_word_coefficients(int step) {
    static std::mutex table_mu;
    static std::map<int, std::map<std::vector<std::uint8_t>, Rational>> tables;
    std::lock_guard<std::mutex> lock(table_mu);
    auto it = tables.find(step);
    if (it != tables.end()) return it->second;

    using Word = std::vector<std::uint8_t>;
    using Series = std::map<Word, Rational>;
    auto mul = [step](const Series& a, const Series& b) {
        Series out;
        for (const auto& [wa, ca] : a)
            for (const auto& [wb, cb] : b) {
                if (wa.size() + wb.size() > static_cast<std::size_t>(step)) continue;
                Word w = wa;
                w.insert(w.end(), wb.begin(), wb.end());
                auto [pos, fresh] = out.emplace(std::move(w), ca * cb);
                if (!fresh) pos->second += ca * cb;
            }
        return out;
    };

    // u = exp(X) exp(Y) - 1, truncated.
    Series u;
    for (int a = 0; a <= step; ++a) {
        for (int b = 0; a + b <= step; ++b) {
            if (a + b == 0) continue;
            Word w(static_cast<std::size_t>(a), 0);
            w.insert(w.end(), static_cast<std::size_t>(b), 1);
            Rational c(1);
            for (int k = 2; k <= a; ++k) c /= k;
            for (int k = 2; k <= b; ++k) c /= k;
            u.emplace(std::move(w), c);
        }
    }
    // log(1 + u) = sum (-1)^{k-1} u^k / k.
    Series logseries;
    Series upow = u;
    for (int k = 1; k <= step; ++k) {
        Rational f = Rational(k % 2 == 1 ? 1 : -1, k);
        for (const auto& [w, c] : upow) {
            auto [pos, fresh] = logseries.emplace(w, f * c);
            if (!fresh) pos->second += f * c;
        }
        if (k < step) upow = mul(upow, u);
    }
    // Dynkin idempotent: keep c_w / |w| per word; drop words whose right-nested
    // bracket vanishes identically (repeated final letter) and zero coefficients.
    std::map<Word, Rational> table;
    for (const auto& [w, c] : logseries) {
        if (sgn(c) == 0) continue;
        std::size_t n = w.size();
        if (n >= 2 && w[n - 1] == w[n - 2]) continue;
        table.emplace(w, c / static_cast<long>(n));
    }
    return tables.emplace(step, std::move(table)).first->second;
}

} // namespace carnot
