#pragma once

// Minimal difference Delta, the energy function H on B (x) B, and their comparison.

#include <algorithm>
#include <compare>
#include <cstdio>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "crystal.hpp"
#include "errors.hpp"

namespace primc::energy {

using crystal::BoxVertex;
using crystal::PairVertex;

struct Colour {
    int a = 0;
    int b = 0;
    friend auto operator<=>(const Colour&, const Colour&) = default;
};

inline std::string name(const Colour& c) {
    return "a" + std::to_string(c.a) + "b" + std::to_string(c.b);
}

inline std::optional<Colour> parse_colour(const std::string& s) {
    int a = 0, b = 0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "a%db%d%c", &a, &b, &tail) != 2) return std::nullopt;
    if (name(Colour{a, b}) != s) return std::nullopt;
    return Colour{a, b};
}

inline bool valid(int n, const Colour& c) { return c.a >= 0 && c.a < n && c.b >= 0 && c.b < n; }
inline bool is_free(const Colour& c) { return c.a == c.b; }

// v_l (x) v_k^vee  <->  a_k b_l
inline Colour colour_of(const BoxVertex& v) { return Colour{crystal::box_k(v), crystal::box_l(v)}; }
inline BoxVertex box_of(const Colour& c) { return crystal::box(c.b, c.a); }

// all n^2 colours, lexicographic in (a, b)
inline std::vector<Colour> colours(int n) {
    std::vector<Colour> out;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) out.push_back({a, b});
    return out;
}

inline int chi(bool v) { return v ? 1 : 0; }

// Delta(a_i b_k, a_i' b_k')
inline int delta(int n, const Colour& c1, const Colour& c2) {
    (void)n;
    const int i = c1.a, k = c1.b, ip = c2.a, kp = c2.b;
    return chi(i >= ip) - chi(i == k && k == ip) + chi(k <= kp) - chi(k == ip && ip == kp);
}

// int(i, j) = {i+1, ..., j} taken cyclically; int(i, i) is everything
inline std::vector<int> interval(int n, int i, int j) {
    std::vector<int> out;
    int x = i;
    do {
        x = crystal::mod(x + 1, n);
        out.push_back(x);
    } while (x != j);
    return out;
}

inline bool in_interval(int n, int x, int i, int j) {
    auto s = interval(n, i, j);
    return std::find(s.begin(), s.end(), x) != s.end();
}

// Delta(a_k b_l; a_k' b_l') through intervals
inline int delta_interval(int n, const Colour& c1, const Colour& c2) {
    const int k = c1.a, l = c1.b, kp = c2.a, lp = c2.b;
    if (l == kp) return chi(!in_interval(n, 0, kp, k)) + chi(!in_interval(n, 0, l, lp));
    return chi(in_interval(n, 0, k, kp)) + chi(in_interval(n, 0, lp, l));
}

inline int min_last_part(int n, int ell, const Colour& c) {
    if (ell < 0 || ell >= n) throw IndexOutOfRange("level index " + std::to_string(ell));
    return chi(c.a >= ell) + chi(ell > c.b);
}

class EnergyTable {
public:
    EnergyTable() = default;
    EnergyTable(int n, std::vector<int> h) : n_(n), h_(std::move(h)) {}
    int n() const { return n_; }
    int at(const PairVertex& p) const { return h_.at(static_cast<std::size_t>(crystal::pair_index(n_, p))); }
    int at(const BoxVertex& b1, const BoxVertex& b2) const { return at(PairVertex{b1, b2}); }
    // H(box(later) (x) box(earlier)): energy between consecutive coloured parts
    int between(const Colour& earlier, const Colour& later) const {
        return at(box_of(later), box_of(earlier));
    }
    const std::vector<int>& values() const { return h_; }

private:
    int n_ = 0;
    std::vector<int> h_;
};

inline EnergyTable energy_table(int n) {
    crystal::check_rank(n);
    const auto c = crystal::pair_crystal(n);
    const auto verts = c.vertices();
    std::vector<std::optional<int>> h(verts.size());
    const PairVertex ground{crystal::box(0, 0), crystal::box(0, 0)};
    h[static_cast<std::size_t>(crystal::pair_index(n, ground))] = 0;
    std::deque<PairVertex> todo{ground};

    auto visit = [&](const PairVertex& from, const PairVertex& to, int value) {
        auto& slot = h[static_cast<std::size_t>(crystal::pair_index(n, to))];
        if (!slot) {
            slot = value;
            todo.push_back(to);
        } else if (*slot != value) {
            throw InconsistentEnergy("energy propagation disagrees at a vertex reached from index " +
                                     std::to_string(crystal::pair_index(n, from)));
        }
    };

    while (!todo.empty()) {
        PairVertex u = todo.front();
        todo.pop_front();
        const int hu = *h[static_cast<std::size_t>(crystal::pair_index(n, u))];
        for (int i = 0; i < n; ++i) {
            const int z = chi(i == 0);
            if (auto w = c.e(i, u)) visit(u, *w, hu + (c.e_acts_left(i, u) ? z : -z));
            if (auto w = c.f(i, u)) visit(u, *w, hu + (c.f_acts_left(i, u) ? -z : z));
        }
    }
    std::vector<int> out;
    out.reserve(h.size());
    for (std::size_t v = 0; v < h.size(); ++v) {
        if (!h[v]) throw Disconnected("pair vertex " + std::to_string(v) + " is unreachable");
        out.push_back(*h[v]);
    }
    return EnergyTable(n, std::move(out));
}

struct TheoremReport {
    int n = 0;
    std::size_t checks = 0;
    bool passed = true;
    struct Counterexample {
        Colour earlier, later;
        int energy = 0, minimal_difference = 0;
    };
    std::optional<Counterexample> first_failure;
};

// H((v_l' (x) v_k'^vee) (x) (v_l (x) v_k^vee)) = Delta(a_k b_l; a_k' b_l')
inline TheoremReport verify_theorem(int n, const EnergyTable& table) {
    TheoremReport r;
    r.n = n;
    for (const auto& c1 : colours(n))
        for (const auto& c2 : colours(n)) {
            ++r.checks;
            const int h = table.between(c1, c2), d = delta(n, c1, c2);
            if (h != d && r.passed) {
                r.passed = false;
                r.first_failure = TheoremReport::Counterexample{c1, c2, h, d};
            }
        }
    return r;
}

inline TheoremReport verify_theorem(int n) { return verify_theorem(n, energy_table(n)); }

}  // namespace primc::energy
