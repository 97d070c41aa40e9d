#pragma once

// Coloured partitions: generalised Primc partitions, grounded partitions and the
// bijections phi (paths) and Phi (minimal partition + ordinary partition).

#include <algorithm>
#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "energy.hpp"
#include "errors.hpp"
#include "series.hpp"

namespace primc::partitions {

using energy::Colour;

struct ColouredPart {
    int size = 0;
    Colour colour;
    friend auto operator<=>(const ColouredPart&, const ColouredPart&) = default;
};

using PrimcPartition = std::vector<ColouredPart>;

struct GroundedPartition {
    int ell = 0;
    std::vector<ColouredPart> parts;  // pi_0, ..., pi_{s-1}, 0_{c_g}

    int weight() const {
        int w = 0;
        for (const auto& p : parts) w += p.size;
        return w;
    }
    // number of parts before the terminal ground part
    int s() const { return static_cast<int>(parts.size()) - 1; }
    friend bool operator==(const GroundedPartition&, const GroundedPartition&) = default;
};

inline Colour ground_colour(int ell) { return Colour{ell, ell}; }

inline std::string to_string(const ColouredPart& p) {
    return std::to_string(p.size) + "_" + energy::name(p.colour);
}
inline std::string to_string(const std::vector<ColouredPart>& parts) {
    std::string out = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ", ";
        out += to_string(parts[i]);
    }
    return out + ")";
}
inline std::string to_string(const GroundedPartition& g) { return to_string(g.parts); }

// colour a_k b_l contributes b_l b_k^{-1}
inline Monomial colour_monomial(int n, const std::vector<ColouredPart>& parts) {
    Monomial m(n);
    for (const auto& p : parts) {
        m.b[static_cast<std::size_t>(p.colour.b)] += 1;
        m.b[static_cast<std::size_t>(p.colour.a)] -= 1;
        m.q += p.size;
    }
    return m;
}

// minimal difference between an earlier and a later coloured part
class DifferenceRule {
public:
    DifferenceRule() = default;

    // the energy function (computed on the crystal); n = 1 is the one-colour loop
    static DifferenceRule from_energy(int n) {
        if (n == 1) return from_delta(1);
        auto t = energy::energy_table(n);
        return build(n, [&](Colour e, Colour l) { return t.between(e, l); });
    }
    static DifferenceRule from_energy(const energy::EnergyTable& t) {
        return build(t.n(), [&](Colour e, Colour l) { return t.between(e, l); });
    }
    static DifferenceRule from_delta(int n) {
        if (n < 1) throw UnsupportedRank("n must be positive");
        return build(n, [n](Colour e, Colour l) { return energy::delta(n, e, l); });
    }

    int n() const { return n_; }
    int operator()(const Colour& earlier, const Colour& later) const {
        return m_[static_cast<std::size_t>(index(earlier) * n_ * n_ + index(later))];
    }

private:
    template <class F>
    static DifferenceRule build(int n, F f) {
        DifferenceRule r;
        r.n_ = n;
        r.m_.resize(static_cast<std::size_t>(n * n * n * n));
        for (auto e : energy::colours(n))
            for (auto l : energy::colours(n))
                r.m_[static_cast<std::size_t>(r.index(e) * n * n + r.index(l))] = f(e, l);
        return r;
    }
    int index(const Colour& c) const { return c.a * n_ + c.b; }
    int n_ = 0;
    std::vector<int> m_;
};

inline void check_colour(int n, const Colour& c) {
    if (!energy::valid(n, c)) throw IndexOutOfRange("colour " + energy::name(c) + " for n = " + std::to_string(n));
}

inline bool primc_ok(int n, const PrimcPartition& p) {
    for (const auto& part : p)
        if (!energy::valid(n, part.colour)) return false;
    for (std::size_t j = 0; j + 1 < p.size(); ++j)
        if (p[j].size - p[j + 1].size < energy::delta(n, p[j].colour, p[j + 1].colour)) return false;
    return p.empty() || p.back().size >= 1;
}

namespace detail {

// Depth-first extension towards larger parts. `rev` holds the partition from its
// last part backwards; every node is a complete partition and is visited once.
template <class Accept, class Visit>
void extend(const DifferenceRule& d, bool minimal, int N, const std::vector<Colour>& palette,
            std::vector<ColouredPart>& rev, int weight, int equal_run, Accept& accept, Visit& visit) {
    if (!accept(rev)) return;
    visit(rev, weight);
    const ColouredPart last = rev.back();
    const int cap = d.n() * d.n();
    for (const auto& c : palette) {
        const int lo = last.size + d(c, last.colour);
        const int hi = minimal ? lo : N - weight;
        for (int x = lo; x <= hi && weight + x <= N; ++x) {
            // zero-size parts add no weight, so their chains need their own bound
            const int run = x == 0 ? equal_run + 1 : 0;
            if (run > cap)
                throw std::logic_error("unbounded chain of zero parts; difference rule is not a valid energy");
            rev.push_back({x, c});
            extend(d, minimal, N, palette, rev, weight + x, run, accept, visit);
            rev.pop_back();
        }
    }
}

struct AcceptAll {
    bool operator()(const std::vector<ColouredPart>&) const { return true; }
};

}  // namespace detail

// Visits every grounded partition of weight <= N; the callback sees the parts from the
// ground upwards (reverse order) and the weight.
template <class Visit>
void for_each_grounded(const DifferenceRule& d, int ell, int N, bool minimal, Visit&& visit) {
    const int n = d.n();
    if (ell < 0 || ell >= n) throw IndexOutOfRange("ground index " + std::to_string(ell));
    if (N < 0) return;
    const Colour g = ground_colour(ell);
    std::vector<ColouredPart> rev{{0, g}};
    visit(rev, 0);
    const auto palette = energy::colours(n);
    detail::AcceptAll all;
    for (const auto& c : palette) {
        const int lo = d(c, g);
        const int hi = minimal ? lo : N;
        for (int x = lo; x <= hi && x <= N; ++x) {
            if (c == g && x == 0) continue;  // pi_{s-1} != 0_{c_g}
            rev.push_back({x, c});
            detail::extend(d, minimal, N, palette, rev, x, x == 0 ? 1 : 0, all, visit);
            rev.pop_back();
        }
    }
}

inline std::vector<GroundedPartition> sorted_canonically(std::vector<GroundedPartition> v) {
    auto key = [](const GroundedPartition& g) {
        std::vector<Colour> cols;
        std::vector<int> sizes;
        for (const auto& p : g.parts) {
            cols.push_back(p.colour);
            sizes.push_back(p.size);
        }
        return std::make_tuple(g.weight(), cols, sizes);
    };
    std::sort(v.begin(), v.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
    return v;
}

inline std::vector<GroundedPartition> enumerate_grounded(const DifferenceRule& d, int ell, int N,
                                                         bool minimal) {
    std::vector<GroundedPartition> out;
    for_each_grounded(d, ell, N, minimal, [&](const std::vector<ColouredPart>& rev, int) {
        out.push_back(GroundedPartition{ell, std::vector<ColouredPart>(rev.rbegin(), rev.rend())});
    });
    return sorted_canonically(std::move(out));
}

inline std::vector<GroundedPartition> enumerate_grounded(int n, int ell, int N, bool minimal) {
    return enumerate_grounded(DifferenceRule::from_energy(n), ell, N, minimal);
}

// counts by (weight, colour monomial) in machine integers, converted once at the end
class MonomialCounter {
public:
    explicit MonomialCounter(Context ctx) : ctx_(ctx) {}
    void add(const std::vector<ColouredPart>& parts) { ++counts_[colour_monomial(ctx_.n, parts)]; }
    Series series() const {
        std::vector<Series::Term> t;
        t.reserve(counts_.size());
        for (const auto& [m, c] : counts_) t.emplace_back(m, BigInt(c));
        return Series::from_terms(ctx_, std::move(t));
    }

private:
    Context ctx_;
    std::unordered_map<Monomial, long long, MonomialHash> counts_;
};

inline Series gf_grounded(const DifferenceRule& d, int ell, int N, bool minimal) {
    MonomialCounter acc({d.n(), N});
    for_each_grounded(d, ell, N, minimal,
                      [&](const std::vector<ColouredPart>& rev, int) { acc.add(rev); });
    return acc.series();
}

inline Series gf_grounded(int n, int ell, int N, bool minimal) {
    return gf_grounded(DifferenceRule::from_energy(n), ell, N, minimal);
}

// --- phi: paths <-> minimal grounded partitions -------------------------------------

inline GroundedPartition path_to_partition(const energy::EnergyTable& t, int ell,
                                           const std::vector<crystal::BoxVertex>& path) {
    const int n = t.n();
    if (ell < 0 || ell >= n) throw IndexOutOfRange("ground index " + std::to_string(ell));
    const auto g = crystal::box(ell, ell);
    if (!path.empty() && path.back() == g) throw BadPath("path must not end at the ground");
    GroundedPartition out;
    out.ell = ell;
    out.parts.resize(path.size() + 1);
    out.parts.back() = {0, ground_colour(ell)};
    int size = 0;
    for (std::size_t k = path.size(); k-- > 0;) {
        const auto& next = k + 1 < path.size() ? path[k + 1] : g;
        size += t.at(next, path[k]);
        out.parts[k] = {size, energy::colour_of(path[k])};
    }
    return out;
}

inline bool is_grounded(const DifferenceRule& d, const GroundedPartition& pi, bool minimal) {
    const int n = d.n();
    if (pi.ell < 0 || pi.ell >= n || pi.parts.empty()) return false;
    const Colour g = ground_colour(pi.ell);
    if (pi.parts.back() != ColouredPart{0, g}) return false;
    for (const auto& p : pi.parts)
        if (!energy::valid(n, p.colour)) return false;
    if (pi.parts.size() >= 2 && pi.parts[pi.parts.size() - 2] == ColouredPart{0, g}) return false;
    for (std::size_t k = 0; k + 1 < pi.parts.size(); ++k) {
        const int diff = pi.parts[k].size - pi.parts[k + 1].size;
        const int h = d(pi.parts[k].colour, pi.parts[k + 1].colour);
        if (minimal ? diff != h : diff < h) return false;
    }
    return true;
}

inline std::vector<crystal::BoxVertex> partition_to_path(const energy::EnergyTable& t,
                                                         const GroundedPartition& pi) {
    if (!is_grounded(DifferenceRule::from_energy(t), pi, true))
        throw NotGrounded("not a minimal grounded partition: " + to_string(pi));
    std::vector<crystal::BoxVertex> path;
    for (int k = 0; k < pi.s(); ++k) path.push_back(energy::box_of(pi.parts[static_cast<std::size_t>(k)].colour));
    return path;
}

// --- Phi: P^>> <-> P^min x ordinary partitions ---------------------------------------

struct PhiSplit {
    GroundedPartition mu;
    std::vector<int> nu;  // nonincreasing, positive
    friend bool operator==(const PhiSplit&, const PhiSplit&) = default;
};

inline PhiSplit split_phi(const DifferenceRule& d, const GroundedPartition& pi) {
    if (!is_grounded(d, pi, false)) throw NotGrounded("not a grounded partition: " + to_string(pi));
    const Colour g = ground_colour(pi.ell);
    const int s = pi.s();
    int r = 0;
    for (int k = s; k >= 1; --k)
        if (pi.parts[static_cast<std::size_t>(k - 1)].colour != g) {
            r = k;
            break;
        }
    PhiSplit out;
    out.mu.ell = pi.ell;
    out.mu.parts.resize(static_cast<std::size_t>(r) + 1);
    out.mu.parts[static_cast<std::size_t>(r)] = {0, g};
    for (int k = r - 1; k >= 0; --k) {
        const auto& later = out.mu.parts[static_cast<std::size_t>(k) + 1];
        const Colour c = pi.parts[static_cast<std::size_t>(k)].colour;
        out.mu.parts[static_cast<std::size_t>(k)] = {later.size + d(c, later.colour), c};
    }
    auto size = [&](int k) { return pi.parts[static_cast<std::size_t>(k)].size; };
    auto mu = [&](int k) { return out.mu.parts[static_cast<std::size_t>(k)].size; };
    if (r < s) {
        for (int k = 0; k < r; ++k) out.nu.push_back(size(k) - mu(k));
        for (int k = r; k < s; ++k) out.nu.push_back(size(k));
    } else {
        int t = 0;
        while (size(t) != mu(t)) ++t;
        for (int k = 0; k < t; ++k) out.nu.push_back(size(k) - mu(k));
    }
    return out;
}

inline GroundedPartition merge_phi(const DifferenceRule& d, const PhiSplit& in) {
    const auto& mu = in.mu;
    if (!is_grounded(d, mu, true)) throw NotGrounded("not a minimal grounded partition: " + to_string(mu));
    for (std::size_t k = 0; k < in.nu.size(); ++k)
        if (in.nu[k] <= 0 || (k && in.nu[k] > in.nu[k - 1]))
            throw std::invalid_argument("second component must be a partition into positive parts");
    const Colour g = ground_colour(mu.ell);
    const int r = mu.s(), t = static_cast<int>(in.nu.size());
    GroundedPartition pi;
    pi.ell = mu.ell;
    if (t <= r) {
        pi.parts = mu.parts;
        for (int k = 0; k < t; ++k) pi.parts[static_cast<std::size_t>(k)].size += in.nu[static_cast<std::size_t>(k)];
    } else {
        for (int k = 0; k < r; ++k) {
            auto p = mu.parts[static_cast<std::size_t>(k)];
            p.size += in.nu[static_cast<std::size_t>(k)];
            pi.parts.push_back(p);
        }
        for (int k = r; k < t; ++k) pi.parts.push_back({in.nu[static_cast<std::size_t>(k)], g});
        pi.parts.push_back({0, g});
    }
    return pi;
}

}  // namespace primc::partitions
