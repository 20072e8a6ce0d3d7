// Copyright 2026 The sparsesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sparsesim/bitstring.hpp"
#include "sparsesim/random.hpp"

namespace sparsesim {

inline constexpr double kNormTolerance = 1e-12;

namespace detail {

template <class Value>
std::vector<std::pair<BitString, Value>> sorted_unique(int width, std::vector<std::pair<BitString, Value>> entries,
                                                       const char* what) {
    for (const auto& e : entries) {
        if (e.first.size() != width) {
            throw InputError(std::string(what) + ": entry '" + e.first.str() + "' has the wrong length");
        }
    }
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first.value() < b.first.value(); });
    for (std::size_t i = 1; i < entries.size(); ++i) {
        if (entries[i].first == entries[i - 1].first) {
            throw InputError(std::string(what) + ": duplicate entry '" + entries[i].first.str() + "'");
        }
    }
    return entries;
}

}  // namespace detail

/// Explicit support list of a (sub)normalized distribution over k-bit strings, sorted by integer view.
class SparseDistribution {
   public:
    explicit SparseDistribution(int width = 0, std::vector<std::pair<BitString, double>> entries = {})
        : width_(width), entries_(detail::sorted_unique(width, std::move(entries), "SparseDistribution")) {
        for (const auto& [x, p] : entries_) {
            if (!(p >= 0.0) || !std::isfinite(p)) {
                throw InputError("SparseDistribution: probability of '" + x.str() + "' is negative or not finite");
            }
        }
        if (total() > 1.0 + kNormTolerance) {
            throw InputError("SparseDistribution: probabilities sum to more than 1");
        }
    }

    /// Nonzero entries of a dense vector indexed by integer view.
    static SparseDistribution from_dense(int width, std::span<const double> dense) {
        if (dense.size() != (std::size_t{1} << width)) {
            throw InputError("SparseDistribution::from_dense: vector length is not 2^width");
        }
        std::vector<std::pair<BitString, double>> e;
        for (std::size_t i = 0; i < dense.size(); ++i) {
            if (dense[i] != 0.0) {
                e.emplace_back(BitString(width, i), dense[i]);
            }
        }
        return SparseDistribution(width, std::move(e));
    }

    int width() const { return width_; }
    const std::vector<std::pair<BitString, double>>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    double total() const {
        double s = 0.0;
        for (const auto& e : entries_) {
            s += e.second;
        }
        return s;
    }

    bool normalized() const { return std::abs(total() - 1.0) <= kNormTolerance; }

    double probability(const BitString& x) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), x.value(),
                                   [](const auto& e, std::uint64_t v) { return e.first.value() < v; });
        return (it != entries_.end() && it->first == x) ? it->second : 0.0;
    }

    double min_probability() const {
        double m = 1.0;
        for (const auto& e : entries_) {
            m = std::min(m, e.second);
        }
        return m;
    }

    std::vector<double> dense() const {
        std::vector<double> out(std::size_t{1} << width_, 0.0);
        for (const auto& [x, p] : entries_) {
            out[x.value()] = p;
        }
        return out;
    }

   private:
    int width_;
    std::vector<std::pair<BitString, double>> entries_;
};

/// Explicit support list of a state with 2-norm at most 1.
class SparseState {
   public:
    explicit SparseState(int width = 0, std::vector<std::pair<BitString, Amplitude>> entries = {})
        : width_(width), entries_(detail::sorted_unique(width, std::move(entries), "SparseState")) {
        for (const auto& [x, a] : entries_) {
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
                throw InputError("SparseState: amplitude of '" + x.str() + "' is not finite");
            }
        }
        if (norm() > 1.0 + kNormTolerance) {
            throw InputError("SparseState: 2-norm exceeds 1");
        }
    }

    int width() const { return width_; }
    const std::vector<std::pair<BitString, Amplitude>>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    double norm() const {
        double s = 0.0;
        for (const auto& e : entries_) {
            s += std::norm(e.second);
        }
        return std::sqrt(s);
    }

    Amplitude amplitude(const BitString& x) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), x.value(),
                                   [](const auto& e, std::uint64_t v) { return e.first.value() < v; });
        return (it != entries_.end() && it->first == x) ? it->second : Amplitude{};
    }

    /// Born distribution |amplitude|^2 over the support.
    SparseDistribution born() const {
        std::vector<std::pair<BitString, double>> e;
        for (const auto& [x, a] : entries_) {
            e.emplace_back(x, std::min(1.0, std::norm(a)));
        }
        return SparseDistribution(width_, std::move(e));
    }

   private:
    int width_;
    std::vector<std::pair<BitString, Amplitude>> entries_;
};

namespace detail {

template <class Entry, class Key>
std::vector<Entry> top_entries(std::vector<Entry> entries, std::size_t t, Key key) {
    std::stable_sort(entries.begin(), entries.end(), [&](const Entry& a, const Entry& b) {
        const double ka = key(a);
        const double kb = key(b);
        if (ka != kb) {
            return ka > kb;
        }
        return a.first.value() < b.first.value();
    });
    if (entries.size() > t) {
        entries.resize(t);
    }
    return entries;
}

}  // namespace detail

/// P[t]: the restriction of P to its t largest probabilities (ties: ascending integer view).
inline SparseDistribution truncate_top(const SparseDistribution& p, std::size_t t) {
    return SparseDistribution(p.width(),
                              detail::top_entries(p.entries(), t, [](const auto& e) { return e.second; }));
}

inline SparseDistribution truncate_top(int width, std::span<const double> dense, std::size_t t) {
    return truncate_top(SparseDistribution::from_dense(width, dense), t);
}

/// phi[t]: the restriction of phi to its t largest-modulus amplitudes.
inline SparseState truncate_top(const SparseState& phi, std::size_t t) {
    return SparseState(phi.width(),
                       detail::top_entries(phi.entries(), t, [](const auto& e) { return std::abs(e.second); }));
}

/// Restriction of P to {x : p_x >= epsilon / t}.
inline SparseDistribution threshold_restrict(const SparseDistribution& p, double epsilon, std::size_t t) {
    if (t == 0) {
        throw InputError("threshold_restrict: t must be positive");
    }
    const double cut = epsilon / static_cast<double>(t);
    std::vector<std::pair<BitString, double>> kept;
    for (const auto& e : p.entries()) {
        if (e.second >= cut) {
            kept.push_back(e);
        }
    }
    return SparseDistribution(p.width(), std::move(kept));
}

/// sum_x |p_x - q_x| over the union of supports.
inline double l1_distance(const SparseDistribution& p, const SparseDistribution& q) {
    std::map<std::uint64_t, double> diff;
    for (const auto& [x, v] : p.entries()) {
        diff[x.value()] += v;
    }
    for (const auto& [x, v] : q.entries()) {
        diff[x.value()] -= v;
    }
    double s = 0.0;
    for (const auto& [x, d] : diff) {
        s += std::abs(d);
    }
    return s;
}

/// Against a dense vector indexed by integer view.
inline double l1_distance(const SparseDistribution& p, std::span<const double> dense) {
    if (dense.size() != (std::size_t{1} << p.width())) {
        throw InputError("l1_distance: dense vector length is not 2^width");
    }
    double s = 0.0;
    std::size_t next = 0;
    for (std::size_t i = 0; i < dense.size(); ++i) {
        double v = dense[i];
        if (next < p.size() && p.entries()[next].first.value() == i) {
            v -= p.entries()[next].second;
            ++next;
        }
        s += std::abs(v);
    }
    return s;
}

inline double l2_distance(const SparseState& a, const SparseState& b) {
    std::map<std::uint64_t, Amplitude> diff;
    for (const auto& [x, v] : a.entries()) {
        diff[x.value()] += v;
    }
    for (const auto& [x, v] : b.entries()) {
        diff[x.value()] -= v;
    }
    double s = 0.0;
    for (const auto& [x, d] : diff) {
        s += std::norm(d);
    }
    return std::sqrt(s);
}

inline double l2_distance(const SparseState& a, std::span<const Amplitude> dense) {
    if (dense.size() != (std::size_t{1} << a.width())) {
        throw InputError("l2_distance: dense vector length is not 2^width");
    }
    double s = 0.0;
    std::size_t next = 0;
    for (std::size_t i = 0; i < dense.size(); ++i) {
        Amplitude v = dense[i];
        if (next < a.size() && a.entries()[next].first.value() == i) {
            v -= a.entries()[next].second;
            ++next;
        }
        s += std::norm(v);
    }
    return std::sqrt(s);
}

/// P / ||P||_1.
inline SparseDistribution normalize(const SparseDistribution& p) {
    const double total = p.total();
    if (!(total > 0.0)) {
        throw InputError("normalize: distribution has zero 1-norm");
    }
    std::vector<std::pair<BitString, double>> e;
    for (const auto& [x, v] : p.entries()) {
        e.emplace_back(x, v / total);
    }
    return SparseDistribution(p.width(), std::move(e));
}

/// phi / ||phi||_2.
inline SparseState normalize(const SparseState& phi) {
    const double norm = phi.norm();
    if (!(norm > 0.0)) {
        throw InputError("normalize: state has zero 2-norm");
    }
    std::vector<std::pair<BitString, Amplitude>> e;
    for (const auto& [x, a] : phi.entries()) {
        e.emplace_back(x, a / norm);
    }
    return SparseState(phi.width(), std::move(e));
}

/// Draws from a normalized sparse distribution by inverting the cumulative sums.
class SparseSampler {
   public:
    explicit SparseSampler(const SparseDistribution& p) : width_(p.width()) {
        if (p.empty() || !p.normalized()) {
            throw InputError("SparseSampler: distribution must be normalized and nonempty");
        }
        double acc = 0.0;
        for (const auto& [x, v] : p.entries()) {
            acc += v;
            strings_.push_back(x.value());
            cumulative_.push_back(acc);
        }
    }

    std::uint64_t draw_bits(Rng& rng) const {
        const double r = rng.uniform() * cumulative_.back();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
        const auto i = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), strings_.size() - 1);
        return strings_[i];
    }

    BitString operator()(Rng& rng) const { return BitString(width_, draw_bits(rng)); }

   private:
    int width_;
    std::vector<std::uint64_t> strings_;
    std::vector<double> cumulative_;
};

inline BitString sample_sparse(const SparseDistribution& p, Rng& rng) { return SparseSampler(p)(rng); }

}  // namespace sparsesim
