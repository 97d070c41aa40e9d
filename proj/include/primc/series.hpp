#pragma once

// Truncated formal series in q with Laurent monomials in b_0..b_{n-1} and x.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "errors.hpp"

namespace primc {

using BigInt = boost::multiprecision::cpp_int;
using Exps = boost::container::small_vector<int, 8>;

struct Monomial {
    std::int64_t q = 0;
    Exps b;
    int x = 0;

    Monomial() = default;
    explicit Monomial(int n) : b(static_cast<std::size_t>(n), 0) {}
    Monomial(std::int64_t q_, Exps b_, int x_ = 0) : q(q_), b(std::move(b_)), x(x_) {}

    int n() const { return static_cast<int>(b.size()); }

    Monomial& operator*=(const Monomial& o) {
        if (o.b.size() != b.size()) throw MismatchedContext("monomial ranks differ");
        q += o.q;
        for (std::size_t i = 0; i < b.size(); ++i) b[i] += o.b[i];
        x += o.x;
        return *this;
    }
    friend Monomial operator*(Monomial a, const Monomial& c) { return a *= c; }

    Monomial inverse() const {
        Monomial r(*this);
        r.q = -r.q;
        for (auto& e : r.b) e = -e;
        r.x = -r.x;
        return r;
    }

    friend bool operator==(const Monomial& l, const Monomial& r) {
        return l.q == r.q && l.x == r.x && l.b == r.b;
    }
    // canonical order: q, then b lexicographically, then x
    friend std::strong_ordering operator<=>(const Monomial& l, const Monomial& r) {
        if (auto c = l.q <=> r.q; c != 0) return c;
        if (auto c = std::lexicographical_compare_three_way(l.b.begin(), l.b.end(), r.b.begin(),
                                                            r.b.end());
            c != 0)
            return c;
        return l.x <=> r.x;
    }
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const noexcept {
        std::size_t h = std::hash<std::int64_t>{}(m.q);
        auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
        for (int e : m.b) mix(std::hash<int>{}(e));
        mix(std::hash<int>{}(m.x));
        return h;
    }
};

// helpers for building monomials
inline Monomial qpow(int n, std::int64_t k) {
    Monomial m(n);
    m.q = k;
    return m;
}
inline Monomial bvar(int n, int i, int e = 1) {
    Monomial m(n);
    m.b.at(static_cast<std::size_t>(i)) = e;
    return m;
}
inline Monomial xvar(int n, int e = 1) {
    Monomial m(n);
    m.x = e;
    return m;
}

struct Context {
    int n = 1;
    std::int64_t trunc = 0;
    friend bool operator==(const Context&, const Context&) = default;
};

class Series {
public:
    using Term = std::pair<Monomial, BigInt>;

    Series() = default;
    explicit Series(Context ctx) : ctx_(ctx) {
        if (ctx.n < 1) throw MismatchedContext("series rank must be positive");
        if (ctx.trunc < 0) throw MismatchedContext("truncation must be nonnegative");
    }
    Series(int n, std::int64_t trunc) : Series(Context{n, trunc}) {}

    static Series constant(Context ctx, const BigInt& c = 1) {
        return monomial(ctx, Monomial(ctx.n), c);
    }
    static Series monomial(Context ctx, const Monomial& m, const BigInt& c = 1) {
        Series s(ctx);
        s.check(m);
        if (c != 0 && m.q <= ctx.trunc) s.terms_.emplace_back(m, c);
        return s;
    }
    // merges duplicates, drops zeros and anything above the truncation
    static Series from_terms(Context ctx, std::vector<Term> raw) {
        Series s(ctx);
        for (auto& t : raw) s.check(t.first);
        std::sort(raw.begin(), raw.end(),
                  [](const Term& a, const Term& b) { return a.first < b.first; });
        for (auto& t : raw) {
            if (t.first.q > ctx.trunc) continue;
            if (!s.terms_.empty() && s.terms_.back().first == t.first)
                s.terms_.back().second += t.second;
            else
                s.terms_.push_back(std::move(t));
        }
        std::erase_if(s.terms_, [](const Term& t) { return t.second == 0; });
        return s;
    }

    int n() const { return ctx_.n; }
    std::int64_t trunc() const { return ctx_.trunc; }
    Context context() const { return ctx_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    BigInt coefficient(const Monomial& m) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                                   [](const Term& t, const Monomial& k) { return t.first < k; });
        if (it != terms_.end() && it->first == m) return it->second;
        return 0;
    }

    // lowering the truncation is always exact; raising it is not
    Series truncated(std::int64_t t) const {
        if (t > ctx_.trunc)
            throw InsufficientTruncation("cannot raise truncation from " +
                                         std::to_string(ctx_.trunc) + " to " + std::to_string(t));
        Series r(Context{ctx_.n, t});
        for (const auto& term : terms_) {
            if (term.first.q > t) break;
            r.terms_.push_back(term);
        }
        return r;
    }

    Series operator-() const {
        Series r(*this);
        for (auto& t : r.terms_) t.second = -t.second;
        return r;
    }

    // multiplication by a monomial keeps the canonical order
    Series times(const Monomial& m, const BigInt& c = 1) const {
        check(m);
        Series r(ctx_);
        if (c == 0) return r;
        r.terms_.reserve(terms_.size());
        for (const auto& t : terms_) {
            Monomial p = t.first * m;
            if (p.q > ctx_.trunc) {
                if (m.q >= 0) break;
                continue;
            }
            r.terms_.emplace_back(std::move(p), t.second * c);
        }
        if (m.q < 0) std::sort(r.terms_.begin(), r.terms_.end(), [](const Term& a, const Term& b) {
            return a.first < b.first;
        });
        return r;
    }

    friend bool operator==(const Series& a, const Series& b) {
        return a.ctx_ == b.ctx_ && a.terms_ == b.terms_;
    }

    void check(const Monomial& m) const {
        if (m.n() != ctx_.n)
            throw MismatchedContext("monomial has " + std::to_string(m.n()) +
                                    " b-exponents, series rank is " + std::to_string(ctx_.n));
    }

private:
    friend class SeriesAccumulator;
    friend Series series_add(const Series&, const Series&);
    Context ctx_;
    std::vector<Term> terms_;
};

// Unordered scratch space for sums of many products.
class SeriesAccumulator {
public:
    explicit SeriesAccumulator(Context ctx) : ctx_(ctx) {}
    void add(const Monomial& m, const BigInt& c) {
        if (m.q > ctx_.trunc || c == 0) return;
        if (m.n() != ctx_.n) throw MismatchedContext("monomial rank differs from accumulator");
        acc_[m] += c;
    }
    void add(const Series& s, const BigInt& scale = 1) {
        if (s.context() != ctx_) throw MismatchedContext("accumulating a series of another context");
        for (const auto& [m, c] : s.terms()) acc_[m] += c * scale;
    }
    Context context() const { return ctx_; }
    Series finish() && {
        Series s(ctx_);
        s.terms_.reserve(acc_.size());
        for (auto& [m, c] : acc_)
            if (c != 0) s.terms_.emplace_back(m, std::move(c));
        acc_.clear();
        std::sort(s.terms_.begin(), s.terms_.end(),
                  [](const Series::Term& a, const Series::Term& b) { return a.first < b.first; });
        return s;
    }

private:
    Context ctx_;
    std::unordered_map<Monomial, BigInt, MonomialHash> acc_;
};

inline void require_same_context(const Series& a, const Series& b) {
    if (a.context() != b.context())
        throw MismatchedContext("series contexts differ: (n=" + std::to_string(a.n()) +
                                ", trunc=" + std::to_string(a.trunc()) + ") vs (n=" +
                                std::to_string(b.n()) + ", trunc=" + std::to_string(b.trunc()) +
                                ")");
}

inline Series series_add(const Series& a, const Series& b) {
    require_same_context(a, b);
    Series r(a.context());
    auto& out = r.terms_;
    out.reserve(a.size() + b.size());
    auto i = a.terms().begin(), ie = a.terms().end();
    auto j = b.terms().begin(), je = b.terms().end();
    while (i != ie || j != je) {
        if (j == je || (i != ie && i->first < j->first)) {
            out.push_back(*i++);
        } else if (i == ie || j->first < i->first) {
            out.push_back(*j++);
        } else {
            BigInt c = i->second + j->second;
            if (c != 0) out.emplace_back(i->first, std::move(c));
            ++i;
            ++j;
        }
    }
    return r;
}

inline Series series_neg(const Series& a) { return -a; }

inline Series series_sub(const Series& a, const Series& b) { return series_add(a, -b); }

inline Series series_mul(const Series& a, const Series& b) {
    require_same_context(a, b);
    const Series& big = a.size() >= b.size() ? a : b;
    const Series& small = a.size() >= b.size() ? b : a;
    SeriesAccumulator acc(a.context());
    const auto N = a.trunc();
    for (const auto& [ms, cs] : small.terms()) {
        for (const auto& [mb, cb] : big.terms()) {
            if (ms.q + mb.q > N) break;
            acc.add(ms * mb, cs * cb);
        }
    }
    return std::move(acc).finish();
}

inline Series operator+(const Series& a, const Series& b) { return series_add(a, b); }
inline Series operator-(const Series& a, const Series& b) { return series_sub(a, b); }
inline Series operator*(const Series& a, const Series& b) { return series_mul(a, b); }

inline Series series_pow(const Series& s, unsigned k) {
    Series r = Series::constant(s.context());
    Series base = s;
    while (k) {
        if (k & 1u) r = r * base;
        k >>= 1u;
        if (k) base = base * base;
    }
    return r;
}

// prod_{j>=0} (1 + sign * m * q^{step j})
inline Series poch_expand(const Monomial& m, int sign, std::int64_t step, Context ctx) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("poch_expand: sign must be +1 or -1");
    if (step < 1) throw std::invalid_argument("poch_expand: step must be positive");
    if (m.q < 0)
        throw DivergentProduct("Pochhammer argument has negative q-exponent " +
                               std::to_string(m.q));
    Series r = Series::constant(ctx);
    r.check(m);
    for (std::int64_t j = 0; m.q + step * j <= ctx.trunc; ++j) {
        Monomial f = m;
        f.q += step * j;
        r = r + r.times(f, sign);
    }
    return r;
}

// 1/(q;q)_inf, coefficients are partition numbers
inline Series euler_inverse(Context ctx) {
    const auto N = ctx.trunc;
    std::vector<BigInt> p(static_cast<std::size_t>(N) + 1, 0);
    p[0] = 1;
    for (std::int64_t part = 1; part <= N; ++part)
        for (std::int64_t m = part; m <= N; ++m) p[m] += p[m - part];
    std::vector<Series::Term> t;
    for (std::int64_t m = 0; m <= N; ++m) t.emplace_back(qpow(ctx.n, m), p[m]);
    return Series::from_terms(ctx, std::move(t));
}

inline Series const_term_x(const Series& s) {
    std::vector<Series::Term> t;
    for (const auto& term : s.terms())
        if (term.first.x == 0) t.push_back(term);
    return Series::from_terms(s.context(), std::move(t));
}

// [x^0](a*b) without forming the full product
inline Series const_term_of_product(const Series& a, const Series& b) {
    require_same_context(a, b);
    std::unordered_map<int, std::vector<const Series::Term*>> by_x;
    for (const auto& t : b.terms()) by_x[t.first.x].push_back(&t);
    SeriesAccumulator acc(a.context());
    for (const auto& [ma, ca] : a.terms()) {
        auto it = by_x.find(-ma.x);
        if (it == by_x.end()) continue;
        for (const auto* tb : it->second) {
            if (ma.q + tb->first.q > a.trunc()) break;
            acc.add(ma * tb->first, ca * tb->second);
        }
    }
    return std::move(acc).finish();
}

// q -> q^d, then b_i -> b_i q^{shift_i}, then optionally b_i -> q^{t_i}
struct Substitution {
    std::int64_t q_power = 1;
    std::vector<std::int64_t> b_shift;
    std::vector<std::optional<std::int64_t>> b_scalar;

    bool pure_dilation() const {
        auto zero = [](std::int64_t v) { return v == 0; };
        auto none = [](const std::optional<std::int64_t>& v) { return !v.has_value(); };
        return std::all_of(b_shift.begin(), b_shift.end(), zero) &&
               std::all_of(b_scalar.begin(), b_scalar.end(), none);
    }
};

inline Monomial apply(const Substitution& rule, const Monomial& m) {
    Monomial r = m;
    r.q = rule.q_power * m.q;
    for (std::size_t i = 0; i < m.b.size(); ++i) {
        if (i < rule.b_shift.size()) r.q += rule.b_shift[i] * m.b[i];
        if (i < rule.b_scalar.size() && rule.b_scalar[i]) {
            r.q += *rule.b_scalar[i] * m.b[i];
            r.b[i] = 0;
        }
    }
    return r;
}

// `tail_floor` bounds from below the image q-exponent of every monomial the
// input has discarded (q-exponent > input trunc). Without shifts or scalars it
// defaults to d*(trunc+1).
inline Series subst(const Series& s, const Substitution& rule, std::int64_t out_trunc,
                    std::optional<std::int64_t> tail_floor = std::nullopt) {
    if (rule.q_power < 1) throw std::invalid_argument("subst: q power must be positive");
    if (rule.b_shift.size() > static_cast<std::size_t>(s.n()) ||
        rule.b_scalar.size() > static_cast<std::size_t>(s.n()))
        throw MismatchedContext("substitution rule longer than series rank");
    if (!tail_floor) {
        if (!rule.pure_dilation())
            throw InsufficientTruncation(
                "subst: shifted substitution needs an explicit tail floor to be exact");
        tail_floor = rule.q_power * (s.trunc() + 1);
    }
    if (*tail_floor <= out_trunc)
        throw InsufficientTruncation("subst: input truncated at q^" + std::to_string(s.trunc()) +
                                     " only determines the image up to q^" +
                                     std::to_string(*tail_floor - 1) + ", requested q^" +
                                     std::to_string(out_trunc));
    SeriesAccumulator acc(Context{s.n(), out_trunc});
    for (const auto& [m, c] : s.terms()) acc.add(apply(rule, m), c);
    return std::move(acc).finish();
}

// A monomial known to be exact; its discarded tail is empty.
inline constexpr std::int64_t kExactTail = std::numeric_limits<std::int64_t>::max();

struct AlphaMonomial {
    std::vector<std::int64_t> c;
    friend auto operator<=>(const AlphaMonomial&, const AlphaMonomial&) = default;
    bool nonnegative() const {
        return std::all_of(c.begin(), c.end(), [](std::int64_t v) { return v >= 0; });
    }
};

struct AlphaExpansion {
    int n = 1;
    std::vector<std::pair<AlphaMonomial, BigInt>> terms;
    std::vector<AlphaMonomial> violations;  // negative exponents or nonpositive coefficients
    bool positive() const { return violations.empty(); }
};

inline AlphaMonomial alpha_of(const Monomial& m) {
    if (m.x != 0) throw NotAlphaConvertible("monomial carries x^" + std::to_string(m.x));
    std::int64_t sum = 0;
    for (int e : m.b) sum += e;
    if (sum != 0) throw NotAlphaConvertible("b-exponents sum to " + std::to_string(sum));
    AlphaMonomial a;
    a.c.resize(m.b.size());
    a.c[0] = m.q;
    for (std::size_t i = 0; i + 1 < m.b.size(); ++i) a.c[i + 1] = a.c[i] - m.b[i];
    return a;
}

// e^{-a_0} = q b_0 b_{n-1}^{-1}, e^{-a_i} = b_{i-1}^{-1} b_i
inline Monomial from_alpha(const AlphaMonomial& a) {
    const int n = static_cast<int>(a.c.size());
    Monomial m(n);
    m.q = a.c[0];
    m.b[0] += static_cast<int>(a.c[0]);
    m.b[static_cast<std::size_t>(n - 1)] -= static_cast<int>(a.c[0]);
    for (int i = 1; i < n; ++i) {
        m.b[static_cast<std::size_t>(i - 1)] -= static_cast<int>(a.c[static_cast<std::size_t>(i)]);
        m.b[static_cast<std::size_t>(i)] += static_cast<int>(a.c[static_cast<std::size_t>(i)]);
    }
    return m;
}

inline AlphaExpansion to_alpha(const Series& s) {
    AlphaExpansion r;
    r.n = s.n();
    for (const auto& [m, c] : s.terms()) {
        AlphaMonomial a = alpha_of(m);
        if (!a.nonnegative() || c <= 0) r.violations.push_back(a);
        r.terms.emplace_back(std::move(a), c);
    }
    std::sort(r.terms.begin(), r.terms.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    std::sort(r.violations.begin(), r.violations.end());
    return r;
}

inline std::string to_string(const Monomial& m) {
    std::string out;
    auto put = [&out](const std::string& var, std::int64_t e) {
        if (e == 0) return;
        if (!out.empty()) out += "*";
        out += var;
        if (e != 1) out += "^" + std::to_string(e);
    };
    for (std::size_t i = 0; i < m.b.size(); ++i) put("b" + std::to_string(i), m.b[i]);
    put("x", m.x);
    put("q", m.q);
    return out.empty() ? "1" : out;
}

inline std::string to_string(const Series& s) {
    if (s.is_zero()) return "0 + O(q^" + std::to_string(s.trunc() + 1) + ")";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : s.terms()) {
        BigInt mag = c < 0 ? BigInt(-c) : c;
        if (first)
            os << (c < 0 ? "-" : "");
        else
            os << (c < 0 ? " - " : " + ");
        first = false;
        std::string mono = to_string(m);
        if (mono == "1")
            os << mag;
        else if (mag == 1)
            os << mono;
        else
            os << mag << "*" << mono;
    }
    os << " + O(q^" << s.trunc() + 1 << ")";
    return os.str();
}

inline nlohmann::json to_json(const Series& s) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [m, c] : s.terms()) {
        nlohmann::json b = nlohmann::json::array();
        for (int e : m.b) b.push_back(e);
        terms.push_back({{"q", m.q}, {"b", b}, {"x", m.x}, {"coef", c.str()}});
    }
    return {{"n", s.n()}, {"trunc", s.trunc()}, {"terms", terms}};
}

inline Series series_from_json(const nlohmann::json& j) {
    Context ctx{j.at("n").get<int>(), j.at("trunc").get<std::int64_t>()};
    std::vector<Series::Term> t;
    for (const auto& e : j.at("terms")) {
        Monomial m(ctx.n);
        m.q = e.at("q").get<std::int64_t>();
        const auto& b = e.at("b");
        if (b.size() != static_cast<std::size_t>(ctx.n))
            throw MismatchedContext("serialised monomial has wrong rank");
        for (std::size_t i = 0; i < b.size(); ++i) m.b[i] = b[i].get<int>();
        m.x = e.value("x", 0);
        t.emplace_back(std::move(m), BigInt(e.at("coef").get<std::string>()));
    }
    return Series::from_terms(ctx, std::move(t));
}

// substitutes b_i -> 1 and returns the q-coefficients
inline std::vector<BigInt> q_coefficients(const Series& s) {
    std::vector<BigInt> out(static_cast<std::size_t>(s.trunc()) + 1, 0);
    for (const auto& [m, c] : s.terms())
        if (m.q >= 0) out[static_cast<std::size_t>(m.q)] += c;
    return out;
}

// first monomial where two series of equal context differ
inline std::optional<std::pair<Monomial, std::pair<BigInt, BigInt>>> first_difference(
    const Series& a, const Series& b) {
    Series d = a - b;
    if (d.is_zero()) return std::nullopt;
    const Monomial& m = d.terms().front().first;
    return std::make_pair(m, std::make_pair(a.coefficient(m), b.coefficient(m)));
}

}  // namespace primc
