#pragma once

// Closed formulas for G^P and the level-1 characters, and the identity checks that
// tie them to the partition enumerations.

#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "capparelli.hpp"
#include "errors.hpp"
#include "partitions.hpp"
#include "series.hpp"

namespace primc::characters {

inline void check_request(int n, int ell, std::int64_t N) {
    if (n < 1) throw UnsupportedRank("n must be positive");
    if (ell < 0 || ell >= n) throw IndexOutOfRange("level index " + std::to_string(ell) + " for n = " + std::to_string(n));
    if (N < 0) throw InsufficientTruncation("truncation must be nonnegative");
}

// (q^step; q^step)_inf with no b-dependence
inline Series q_poch(int n, std::int64_t step, std::int64_t N) {
    return poch_expand(qpow(n, step), -1, step, {n, N});
}

// b_0 ... b_{i-1} b_i^{-i}
inline Monomial e_sum(int n, int i) {
    Monomial m(n);
    for (int j = 0; j < i; ++j) m.b[static_cast<std::size_t>(j)] += 1;
    m.b[static_cast<std::size_t>(i)] -= i;
    return m;
}

// prod (b_{i-1} b_i^{-1})^{s_i} q^{qexp}
inline Monomial root_monomial(int n, const std::vector<int>& s, std::int64_t qexp) {
    Monomial m(n);
    for (int i = 1; i < n; ++i) {
        m.b[static_cast<std::size_t>(i - 1)] += s[static_cast<std::size_t>(i)];
        m.b[static_cast<std::size_t>(i)] -= s[static_cast<std::size_t>(i)];
    }
    m.q = qexp;
    return m;
}

// sum_i s_i (s_i - s_{i+1}) with s_n = 0; s is indexed 0..n
inline std::int64_t quad(int n, const std::vector<int>& s) {
    std::int64_t q = 0;
    for (int i = 1; i < n; ++i)
        q += static_cast<std::int64_t>(s[static_cast<std::size_t>(i)]) *
             (s[static_cast<std::size_t>(i)] - s[static_cast<std::size_t>(i) + 1]);
    return q;
}

// calls f(s) for every s in [-bound, bound]^{n-1} (entries 1..n-1; s_0 = s_n = 0)
inline void for_each_box(int n, int bound, const std::function<void(const std::vector<int>&)>& f) {
    std::vector<int> s(static_cast<std::size_t>(n) + 1, 0);
    std::function<void(int)> rec = [&](int i) {
        if (i == n) {
            f(s);
            return;
        }
        for (int v = -bound; v <= bound; ++v) {
            s[static_cast<std::size_t>(i)] = v;
            rec(i + 1);
        }
        s[static_cast<std::size_t>(i)] = 0;
    };
    rec(1);
}

// Q(s) >= (2/n) s_l^2, so Q <= Q_max forces |s_l| <= sqrt(n Q_max / 2)
inline int lattice_bound(int n, std::int64_t qmax) {
    int b = 0;
    while (2 * static_cast<std::int64_t>(b + 1) * (b + 1) <= static_cast<std::int64_t>(n) * qmax) ++b;
    return b;
}

inline Series gp_ct(int n, std::int64_t N) {
    check_request(n, 0, N);
    const Context ctx{n, N};
    Series a = Series::constant(ctx), b = Series::constant(ctx);
    for (int i = 0; i < n; ++i) {
        Monomial ma = bvar(n, i, -1) * xvar(n, 1);
        ma.q = 1;
        a = a * poch_expand(ma, 1, 1, ctx);
        b = b * poch_expand(bvar(n, i, 1) * xvar(n, -1), 1, 1, ctx);
    }
    return const_term_of_product(a, b);
}

inline Series gp_lattice(int n, std::int64_t N) {
    check_request(n, 0, N);
    const Context ctx{n, N};
    SeriesAccumulator acc(ctx);
    for_each_box(n, lattice_bound(n, N), [&](const std::vector<int>& s) {
        const auto q = quad(n, s);
        if (q <= N) acc.add(root_monomial(n, s, q), 1);
    });
    Series sum = std::move(acc).finish();
    return sum * series_pow(euler_inverse(ctx), static_cast<unsigned>(n));
}

namespace detail {

struct Factor {
    Series s;
    std::int64_t min_q = 0;
};

// (-m; q^step)_inf with the factors of negative q-exponent split off and expanded
// exactly; the rest is expanded to `N` (caller widens N by the peeled depth)
inline std::vector<Factor> signed_poch(const Monomial& m, std::int64_t step, Context ctx) {
    std::vector<Factor> out;
    Monomial cur = m;
    while (cur.q < 0) {
        Series f = Series::constant(ctx) + Series::monomial(ctx, cur);
        out.push_back({f, cur.q});
        cur.q += step;
    }
    out.push_back({poch_expand(cur, 1, step, ctx), 0});
    return out;
}

inline std::int64_t peeled_depth(const Monomial& m, std::int64_t step) {
    std::int64_t d = 0;
    for (std::int64_t e = m.q; e < 0; e += step) d -= e;
    return d;
}

// the r-indexed sum shared by the theta form of G^P and the positive character
inline Series r_sum(int n, int ell, std::int64_t N, bool character) {
    const Context ctx{n, N};
    SeriesAccumulator acc(ctx);
    std::vector<int> r(static_cast<std::size_t>(n) + 1, 0);
    std::function<void(int)> rec = [&](int i) {
        if (i < n) {
            for (int v = 0; v <= i - 1; ++v) {
                r[static_cast<std::size_t>(i)] = v;
                rec(i + 1);
            }
            r[static_cast<std::size_t>(i)] = 0;
            return;
        }
        std::int64_t pre = quad(n, r) + (character ? r[static_cast<std::size_t>(ell)] : 0);
        std::vector<std::pair<Monomial, std::int64_t>> pochs;
        for (int j = 1; j < n; ++j) {
            const std::int64_t M = static_cast<std::int64_t>(j) * (j + 1);
            const std::int64_t shift = character && ell > 0 && j >= ell ? ell : 0;
            const std::int64_t lin = static_cast<std::int64_t>(j + 1) * r[static_cast<std::size_t>(j)] -
                                     static_cast<std::int64_t>(j) * r[static_cast<std::size_t>(j) + 1];
            Monomial up = e_sum(n, j), down = e_sum(n, j).inverse();
            up.q = M / 2 + lin + shift;
            down.q = M / 2 - lin - shift;
            pochs.emplace_back(up, M);
            pochs.emplace_back(down, M);
        }
        std::int64_t depth = std::max<std::int64_t>(0, -pre);
        for (const auto& [m, step] : pochs) depth += peeled_depth(m, step);
        const Context wide{n, N + depth};
        Series term = Series::monomial(wide, root_monomial(n, r, pre));
        for (const auto& [m, step] : pochs)
            for (auto& f : signed_poch(m, step, wide)) term = term * f.s;
        acc.add(term.truncated(N));
    };
    rec(1);
    return std::move(acc).finish();
}

}  // namespace detail

inline Series gp_theta(int n, std::int64_t N) {
    check_request(n, 0, N);
    const Context ctx{n, N};
    Series pre = euler_inverse(ctx);
    for (int i = 1; i < n; ++i) pre = pre * q_poch(n, static_cast<std::int64_t>(i) * (i + 1), N) * euler_inverse(ctx);
    return pre * detail::r_sum(n, 0, N, false);
}

// input truncation T for G^P so that the shift b_j -> b_j q (j < l) is exact to q^N:
// a dropped monomial q^m (m > T) lands at q^{m + s_l} with |s_l| <= sqrt(n m / 2)
inline std::int64_t shifted_tail_floor(int n, std::int64_t T) {
    const std::int64_t m = T + 1;
    std::int64_t r = 0;
    while ((r + 1) * (r + 1) <= n * m / 2) ++r;
    return m - r;
}

inline std::int64_t shifted_input_trunc(int n, std::int64_t N) {
    std::int64_t T = N;
    while (8 * (T + 1) < n || shifted_tail_floor(n, T) <= N) ++T;
    return T;
}

inline Substitution level_shift(int n, int ell) {
    Substitution rule;
    rule.b_shift.assign(static_cast<std::size_t>(n), 0);
    for (int j = 0; j < ell; ++j) rule.b_shift[static_cast<std::size_t>(j)] = 1;
    return rule;
}

// G^P(q; b_0 q, ..., b_{l-1} q, b_l, ..., b_{n-1})
inline Series gp_shifted(int n, int ell, std::int64_t N) {
    check_request(n, ell, N);
    if (ell == 0) return gp_ct(n, N);
    const auto T = shifted_input_trunc(n, N);
    return subst(gp_ct(n, T), level_shift(n, ell), N, shifted_tail_floor(n, T));
}

// (q;q)_inf times the shifted G^P
inline Series char_from_gp(int n, int ell, std::int64_t N) {
    return q_poch(n, 1, N) * gp_shifted(n, ell, N);
}

inline Series char_kp(int n, int ell, std::int64_t N) {
    check_request(n, ell, N);
    const Context ctx{n, N};
    // Q(s) + s_l <= N needs Q - sqrt(n Q / 2) <= N
    std::int64_t qmax = N;
    while (qmax + 1 - lattice_bound(n, qmax + 1) <= N) ++qmax;
    SeriesAccumulator acc(ctx);
    for_each_box(n, lattice_bound(n, qmax), [&](const std::vector<int>& s) {
        const auto q = quad(n, s);
        if (q - std::abs(s[static_cast<std::size_t>(ell)]) > N) return;
        const auto e = q + s[static_cast<std::size_t>(ell)];
        if (e <= N) acc.add(root_monomial(n, s, e), 1);
    });
    Series sum = std::move(acc).finish();
    if (n == 1) return sum;
    return sum * series_pow(euler_inverse(ctx), static_cast<unsigned>(n - 1));
}

inline Series char_positive(int n, int ell, std::int64_t N) {
    check_request(n, ell, N);
    const Context ctx{n, N};
    Series pre = Series::constant(ctx);
    for (int i = 1; i < n; ++i) pre = pre * q_poch(n, static_cast<std::int64_t>(i) * (i + 1), N) * euler_inverse(ctx);
    return pre * detail::r_sum(n, ell, N, true);
}

// --- verification ---------------------------------------------------------------

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;  // first differing monomial, or a violation
    double millis = 0;
};

struct VerificationReport {
    int n = 0;
    int ell = 0;
    std::int64_t trunc = 0;
    std::vector<Check> checks;
    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
    }
};

namespace detail {

inline std::string describe_difference(const Series& a, const Series& b) {
    if (a.context() != b.context()) return "contexts differ";
    auto d = first_difference(a, b);
    if (!d) return "";
    return "at " + to_string(d->first) + ": " + d->second.first.str() + " vs " + d->second.second.str();
}

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double millis() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

inline Check equal_check(std::string name, const Series& a, const Series& b, double millis) {
    Check c{std::move(name), a == b, "", millis};
    if (!c.passed) c.detail = describe_difference(a, b);
    return c;
}

inline Check positivity_check(std::string name, const Series& s) {
    Check c{std::move(name), true, "", 0};
    try {
        auto e = to_alpha(s);
        if (!e.positive()) {
            c.passed = false;
            std::string v;
            for (auto x : e.violations.front().c) v += (v.empty() ? "" : ",") + std::to_string(x);
            c.detail = std::to_string(e.violations.size()) + " violations, first alpha exponent (" + v + ")";
        }
    } catch (const NotAlphaConvertible& ex) {
        c.passed = false;
        c.detail = ex.what();
    }
    return c;
}

// partitions with no part divisible by n, counted by listing them
inline std::vector<BigInt> count_no_multiples(int n, std::int64_t N) {
    std::vector<BigInt> out(static_cast<std::size_t>(N) + 1, 0);
    std::function<void(std::int64_t, std::int64_t)> rec = [&](std::int64_t w, std::int64_t max_part) {
        ++out[static_cast<std::size_t>(w)];
        for (std::int64_t p = std::min(max_part, N - w); p >= 1; --p)
            if (p % n != 0) rec(w + p, p);
    };
    rec(0, N);
    return out;
}

}  // namespace detail

inline VerificationReport principal_spec(int n, std::int64_t N) {
    check_request(n, 0, N);
    VerificationReport r{n, 0, N, {}};
    {
        detail::Timer t;
        // a part of size m coloured a_k b_l lands at n m + l - k >= m
        Substitution rule;
        rule.q_power = n;
        for (int i = 0; i < n; ++i) rule.b_scalar.push_back(i);
        Series lhs = subst(gp_ct(n, N), rule, N, N + 1);
        Series rhs = euler_inverse({n, N});
        r.checks.push_back(detail::equal_check("principal specialisation of G^P", lhs, rhs, t.millis()));
    }
    {
        detail::Timer t;
        auto lhs = q_coefficients(q_poch(1, n, N) * euler_inverse({1, N}));
        auto rhs = detail::count_no_multiples(n, N);
        Check c{"no part divisible by n", lhs == rhs, "", t.millis()};
        for (std::size_t m = 0; m < lhs.size() && !c.passed; ++m)
            if (lhs[m] != rhs[m]) {
                c.detail = "at q^" + std::to_string(m) + ": " + lhs[m].str() + " vs " + rhs[m].str();
                break;
            }
        r.checks.push_back(std::move(c));
    }
    return r;
}

inline VerificationReport verify_all(int n, int ell, std::int64_t N,
                                     const std::optional<capparelli::CapparelliSpec>& spec = std::nullopt) {
    check_request(n, ell, N);
    if (n < 2) throw UnsupportedRank("verification needs n >= 2");
    VerificationReport r{n, ell, N, {}};
    auto timed = [](auto f) {
        detail::Timer t;
        auto v = f();
        return std::make_pair(std::move(v), t.millis());
    };
    if (ell == 0) {
        auto [ct, t_ct] = timed([&] { return gp_ct(n, N); });
        auto [en, t_en] = timed([&] { return partitions::gf_grounded(n, 0, N, false); });
        auto [la, t_la] = timed([&] { return gp_lattice(n, N); });
        auto [th, t_th] = timed([&] { return gp_theta(n, N); });
        r.checks.push_back(detail::equal_check("grounded enumeration = constant term", en, ct, t_en + t_ct));
        r.checks.push_back(detail::equal_check("lattice sum = constant term", la, ct, t_la));
        r.checks.push_back(detail::equal_check("theta products = constant term", th, ct, t_th));
    }
    auto [gp, t_gp] = timed([&] { return char_from_gp(n, ell, N); });
    auto [kp, t_kp] = timed([&] { return char_kp(n, ell, N); });
    auto [pos, t_pos] = timed([&] { return char_positive(n, ell, N); });
    auto [mn, t_mn] = timed([&] { return partitions::gf_grounded(n, ell, N, true); });
    r.checks.push_back(detail::equal_check("lattice character = shifted G^P", kp, gp, t_kp + t_gp));
    r.checks.push_back(detail::equal_check("positive character = lattice character", pos, kp, t_pos));
    r.checks.push_back(detail::equal_check("minimal grounded partitions = character", mn, kp, t_mn));
    r.checks.push_back(detail::positivity_check("character positive in the root basis", kp));
    if (spec) {
        if (spec->n != n) throw InvalidSpec("spec is for n = " + std::to_string(spec->n));
        auto [cp, t_cp] = timed([&] { return capparelli::gf_capparelli(*spec, static_cast<int>(N)); });
        Series target = ell == 0 ? gp : char_from_gp(n, 0, N);
        r.checks.push_back(detail::equal_check("Capparelli partitions = character", cp, target, t_cp));
    }
    return r;
}

}  // namespace primc::characters
