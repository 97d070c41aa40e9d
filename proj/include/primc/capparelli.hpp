#pragma once

// Generalised Capparelli partitions: (delta, gamma) specs, their validation, and the
// pattern-avoidance membership test and enumeration.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "energy.hpp"
#include "errors.hpp"
#include "partitions.hpp"
#include "series.hpp"

namespace primc::capparelli {

using energy::Colour;
using partitions::ColouredPart;
using partitions::PrimcPartition;

struct CapparelliSpec {
    int n = 0;
    std::map<Colour, int> delta;                      // on bound colours
    std::map<std::pair<Colour, Colour>, int> gamma;   // on pairs of bound colours
    friend bool operator==(const CapparelliSpec&, const CapparelliSpec&) = default;
};

struct ValidationReport {
    bool valid = true;
    std::string first_violation;
    std::size_t checked = 0;

    void fail(const std::string& why) {
        if (valid) first_violation = why;
        valid = false;
    }
};

inline bool is_bound(const Colour& c) { return c.a != c.b; }

inline std::vector<Colour> bound_colours(int n) {
    std::vector<Colour> out;
    for (auto c : energy::colours(n))
        if (is_bound(c)) out.push_back(c);
    return out;
}

// {lo+1, ..., hi}
inline std::vector<int> range_set(int lo, int hi) {
    std::vector<int> s;
    for (int v = lo + 1; v <= hi; ++v) s.push_back(v);
    return s;
}
inline std::vector<int> set_minus(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    for (int v : a)
        if (std::find(b.begin(), b.end(), v) == b.end()) out.push_back(v);
    return out;
}

enum class GammaClause { interleaved, both_descending, both_ascending };

struct GammaDomainEntry {
    GammaClause clause;
    std::vector<int> admissible;  // nonempty, increasing
};

// The clause of Condition 2 governing gamma(c1, c2), with its admissible values.
// Pairs outside every clause carry no constraint and trigger no pattern.
inline std::optional<GammaDomainEntry> gamma_domain(const Colour& c1, const Colour& c2) {
    const int k1 = c1.a, l1 = c1.b, k2 = c2.a, l2 = c2.b;
    if (!is_bound(c1) || !is_bound(c2)) return std::nullopt;
    if (std::max(k1, l2) < std::min(k2, l1))
        return GammaDomainEntry{GammaClause::interleaved, range_set(std::max(k1, l2), std::min(k2, l1))};
    if (k1 > l1 && k2 > l2) {
        auto S = set_minus(range_set(l2, k2), range_set(l1, k1));
        if (!S.empty()) return GammaDomainEntry{GammaClause::both_descending, S};
    }
    if (k1 < l1 && k2 < l2) {
        auto S = set_minus(range_set(k1, l1), range_set(k2, l2));
        if (!S.empty()) return GammaDomainEntry{GammaClause::both_ascending, S};
    }
    return std::nullopt;
}

inline ValidationReport validate_cond1(int n, const std::map<Colour, int>& delta) {
    ValidationReport r;
    for (const auto& [c, v] : delta)
        if (!energy::valid(n, c) || !is_bound(c)) r.fail("delta defined on " + energy::name(c) + ", which is not a bound colour");
    for (auto c : bound_colours(n)) {
        ++r.checked;
        auto it = delta.find(c);
        if (it == delta.end()) {
            r.fail("delta(" + energy::name(c) + ") is undefined");
            continue;
        }
        const int lo = std::min(c.a, c.b), hi = std::max(c.a, c.b);
        if (!(lo < it->second && it->second <= hi))
            r.fail("delta(" + energy::name(c) + ") = " + std::to_string(it->second) + " not in (" +
                   std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return r;
}

inline std::string pair_name(const Colour& c1, const Colour& c2) {
    return energy::name(c1) + "," + energy::name(c2);
}

inline ValidationReport validate_cond2(int n, const std::map<std::pair<Colour, Colour>, int>& gamma) {
    ValidationReport r;
    for (const auto& [key, v] : gamma)
        if (!energy::valid(n, key.first) || !energy::valid(n, key.second) || !is_bound(key.first) ||
            !is_bound(key.second))
            r.fail("gamma defined on (" + pair_name(key.first, key.second) + "), not a pair of bound colours");
    for (auto c1 : bound_colours(n))
        for (auto c2 : bound_colours(n)) {
            auto dom = gamma_domain(c1, c2);
            if (!dom) continue;
            ++r.checked;
            auto it = gamma.find({c1, c2});
            if (it == gamma.end()) {
                r.fail("gamma(" + pair_name(c1, c2) + ") is undefined but constrained");
                continue;
            }
            if (std::find(dom->admissible.begin(), dom->admissible.end(), it->second) ==
                dom->admissible.end())
                r.fail("gamma(" + pair_name(c1, c2) + ") = " + std::to_string(it->second) +
                       " is not admissible");
        }
    return r;
}

inline void require_valid(const CapparelliSpec& spec) {
    auto r1 = validate_cond1(spec.n, spec.delta);
    if (!r1.valid) throw InvalidSpec("Condition 1 fails: " + r1.first_violation);
    auto r2 = validate_cond2(spec.n, spec.gamma);
    if (!r2.valid) throw InvalidSpec("Condition 2 fails: " + r2.first_violation);
}

enum class Choice { largest, smallest };

// delta = max{k, l} with the largest admissible gamma, or delta = min{k, l} + 1 with
// the smallest admissible gamma
inline CapparelliSpec make_spec(int n, Choice choice) {
    CapparelliSpec s;
    s.n = n;
    for (auto c : bound_colours(n))
        s.delta[c] = choice == Choice::largest ? std::max(c.a, c.b) : std::min(c.a, c.b) + 1;
    for (auto c1 : bound_colours(n))
        for (auto c2 : bound_colours(n))
            if (auto d = gamma_domain(c1, c2))
                s.gamma[{c1, c2}] = choice == Choice::largest ? d->admissible.back() : d->admissible.front();
    return s;
}

// Every valid spec (restricted to the constrained domain), in lexicographic order of
// choices; stops after `limit` specs.
inline std::vector<CapparelliSpec> all_valid_specs(int n, std::size_t limit) {
    struct Slot {
        bool is_delta;
        Colour c1, c2;
        std::vector<int> values;
    };
    std::vector<Slot> slots;
    for (auto c : bound_colours(n))
        slots.push_back({true, c, c, range_set(std::min(c.a, c.b), std::max(c.a, c.b))});
    for (auto c1 : bound_colours(n))
        for (auto c2 : bound_colours(n))
            if (auto d = gamma_domain(c1, c2)) slots.push_back({false, c1, c2, d->admissible});
    std::vector<CapparelliSpec> out;
    std::vector<std::size_t> pick(slots.size(), 0);
    while (out.size() < limit) {
        CapparelliSpec s;
        s.n = n;
        for (std::size_t i = 0; i < slots.size(); ++i) {
            if (slots[i].is_delta)
                s.delta[slots[i].c1] = slots[i].values[pick[i]];
            else
                s.gamma[{slots[i].c1, slots[i].c2}] = slots[i].values[pick[i]];
        }
        out.push_back(std::move(s));
        std::size_t i = 0;
        while (i < slots.size() && ++pick[i] == slots[i].values.size()) pick[i++] = 0;
        if (i == slots.size()) break;
    }
    return out;
}

inline nlohmann::json spec_to_json(const CapparelliSpec& s) {
    nlohmann::json d = nlohmann::json::object(), g = nlohmann::json::object();
    for (const auto& [c, v] : s.delta) d[energy::name(c)] = v;
    for (const auto& [k, v] : s.gamma) g[pair_name(k.first, k.second)] = v;
    return {{"n", s.n}, {"delta", d}, {"gamma", g}};
}

inline CapparelliSpec spec_from_json(const nlohmann::json& j) {
    auto colour = [](const std::string& name) {
        auto c = energy::parse_colour(name);
        if (!c) throw InvalidSpec("unrecognised colour name '" + name + "'");
        return *c;
    };
    CapparelliSpec s;
    try {
        s.n = j.at("n").get<int>();
        for (const auto& [k, v] : j.at("delta").items()) s.delta[colour(k)] = v.get<int>();
        if (j.contains("gamma"))
            for (const auto& [k, v] : j.at("gamma").items()) {
                auto comma = k.find(',');
                if (comma == std::string::npos) throw InvalidSpec("gamma key '" + k + "' is not 'c1,c2'");
                s.gamma[{colour(k.substr(0, comma)), colour(k.substr(comma + 1))}] = v.get<int>();
            }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidSpec(std::string("malformed spec: ") + e.what());
    }
    return s;
}

namespace detail {

inline bool has_free_colour(const ColouredPart& p, int i) { return p.colour == Colour{i, i}; }

inline std::optional<int> gamma_at(const CapparelliSpec& s, const Colour& c1, const Colour& c2) {
    auto it = s.gamma.find({c1, c2});
    if (it == s.gamma.end() || !gamma_domain(c1, c2)) return std::nullopt;
    return it->second;
}

// Scans every window of the partition (largest part first). The two boundary
// conventions use u = infinity: a 2-window at the start (resp. end) of lambda. When
// `at_start_is_final` is false the start convention is skipped, which makes the test
// hereditary under adding larger parts.
inline std::optional<std::string> forbidden_pattern(const CapparelliSpec& s, const PrimcPartition& lam,
                                                    bool at_start_is_final) {
    const std::size_t len = lam.size();
    for (std::size_t j = 0; j < len; ++j)
        if (lam[j].colour == Colour{0, 0}) return "part coloured a0b0";
    for (std::size_t j = 0; j + 1 < len; ++j) {
        const auto &x = lam[j], &y = lam[j + 1];
        if (x.size == y.size && x.colour == y.colour && !is_bound(x.colour) && x.colour.a >= 1)
            return "repeated free colour " + partitions::to_string(x);
    }
    for (std::size_t j = 0; j + 2 < len; ++j) {
        const auto &x = lam[j], &y = lam[j + 1], &z = lam[j + 2];
        const int k1 = x.colour.a, l1 = x.colour.b, k2 = z.colour.a, l2 = z.colour.b;
        if (x.size == y.size && y.size == z.size && std::max(k1, l2) < std::min(k2, l1))
            if (auto g = gamma_at(s, x.colour, z.colour); g && has_free_colour(y, *g))
                return "interleaved triple at position " + std::to_string(j);
    }
    // third part bound with k2 > l2: windows (x?, y, z) with y, z of equal size p
    for (std::size_t m = 1; m < len; ++m) {
        const auto &y = lam[m - 1], &z = lam[m];
        const int k2 = z.colour.a, l2 = z.colour.b;
        if (!(k2 > l2) || y.size != z.size) continue;
        const int p = z.size;
        const int i = s.delta.at(z.colour);
        if (has_free_colour(y, i)) {
            if (m == 1) {
                if (at_start_is_final) return "descending pair at the start";
            } else {
                const auto& x = lam[m - 2];
                if (x.size >= p + 2) return "descending pair after a gap";
                if (x.size == p + 1 && x.colour.a <= x.colour.b) return "descending triple (p+1, p, p)";
            }
        }
        if (m >= 2) {
            const auto& x = lam[m - 2];
            const int k1 = x.colour.a, l1 = x.colour.b;
            if (x.size == p + 1 && k1 > l1)
                if (auto g = gamma_at(s, x.colour, z.colour); g && has_free_colour(y, *g))
                    return "descending triple with gamma";
        }
    }
    // first part bound with k1 < l1: windows (x, y, z?) with x, y of equal size
    for (std::size_t m = 0; m + 1 < len; ++m) {
        const auto &x = lam[m], &y = lam[m + 1];
        const int k1 = x.colour.a, l1 = x.colour.b;
        if (!(k1 < l1) || x.size != y.size) continue;
        const int p = x.size;
        const int i = s.delta.at(x.colour);
        const ColouredPart* z = m + 2 < len ? &lam[m + 2] : nullptr;
        if (has_free_colour(y, i)) {
            if (!z) return "ascending pair at the end";
            if (z->size <= p - 2) return "ascending pair before a gap";
            if (z->size == p - 1 && z->colour.a >= z->colour.b) return "ascending triple (p+1, p+1, p)";
        }
        if (z && z->size == p - 1 && z->colour.a < z->colour.b)
            if (auto g = gamma_at(s, x.colour, z->colour); g && has_free_colour(y, *g))
                return "ascending triple with gamma";
    }
    return std::nullopt;
}

}  // namespace detail

inline bool capparelli_ok(int n, const CapparelliSpec& spec, const PrimcPartition& lam) {
    require_valid(spec);
    if (spec.n != n) throw InvalidSpec("spec is for n = " + std::to_string(spec.n));
    return partitions::primc_ok(n, lam) && !detail::forbidden_pattern(spec, lam, true);
}

// Visits every generalised Capparelli partition of weight <= N (largest part first).
template <class Visit>
void for_each_capparelli(const CapparelliSpec& spec, int N, Visit&& visit) {
    require_valid(spec);
    const int n = spec.n;
    visit(PrimcPartition{}, 0);
    std::vector<Colour> palette;
    for (auto c : energy::colours(n))
        if (c != Colour{0, 0}) palette.push_back(c);
    const auto d = partitions::DifferenceRule::from_delta(n);
    PrimcPartition lam;
    auto accept = [&](const std::vector<ColouredPart>& rev) {
        lam.assign(rev.rbegin(), rev.rend());
        return !detail::forbidden_pattern(spec, lam, false);
    };
    auto emit = [&](const std::vector<ColouredPart>&, int w) {
        if (!detail::forbidden_pattern(spec, lam, true)) visit(lam, w);
    };
    std::vector<ColouredPart> rev;
    for (const auto& c : palette)
        for (int x = 1; x <= N; ++x) {
            rev.push_back({x, c});
            partitions::detail::extend(d, false, N, palette, rev, x, 0, accept, emit);
            rev.pop_back();
        }
}

inline std::vector<PrimcPartition> enumerate_capparelli(const CapparelliSpec& spec, int N) {
    std::vector<std::pair<int, PrimcPartition>> tmp;
    for_each_capparelli(spec, N, [&](const PrimcPartition& p, int w) { tmp.emplace_back(w, p); });
    auto key = [](const std::pair<int, PrimcPartition>& e) {
        std::vector<Colour> cols;
        std::vector<int> sizes;
        for (const auto& p : e.second) {
            cols.push_back(p.colour);
            sizes.push_back(p.size);
        }
        return std::make_tuple(e.first, cols, sizes);
    };
    std::sort(tmp.begin(), tmp.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
    std::vector<PrimcPartition> out;
    for (auto& e : tmp) out.push_back(std::move(e.second));
    return out;
}

inline Series gf_capparelli(const CapparelliSpec& spec, int N) {
    partitions::MonomialCounter acc({spec.n, N});
    for_each_capparelli(spec, N, [&](const PrimcPartition& p, int) { acc.add(p); });
    return acc.series();
}

}  // namespace primc::capparelli
