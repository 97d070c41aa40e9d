#pragma once

// Vector crystal of A_{n-1}^(1), its dual, and tensor products (Kashiwara convention).

#include <compare>
#include <concepts>
#include <cstdint>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace primc::crystal {

inline int mod(int a, int n) { return ((a % n) + n) % n; }

struct ClassicalWeight {
    std::vector<int> lam;

    ClassicalWeight() = default;
    explicit ClassicalWeight(int n) : lam(static_cast<std::size_t>(n), 0) {}

    static ClassicalWeight fundamental(int n, int i) {
        ClassicalWeight w(n);
        w.lam[static_cast<std::size_t>(mod(i, n))] += 1;
        return w;
    }
    int n() const { return static_cast<int>(lam.size()); }
    int level() const {
        int s = 0;
        for (int v : lam) s += v;
        return s;
    }
    // <h_i, w>
    int pairing(int i) const { return lam.at(static_cast<std::size_t>(i)); }

    ClassicalWeight& operator+=(const ClassicalWeight& o) {
        for (std::size_t i = 0; i < lam.size(); ++i) lam[i] += o.lam.at(i);
        return *this;
    }
    ClassicalWeight& operator-=(const ClassicalWeight& o) {
        for (std::size_t i = 0; i < lam.size(); ++i) lam[i] -= o.lam.at(i);
        return *this;
    }
    friend ClassicalWeight operator+(ClassicalWeight a, const ClassicalWeight& b) { return a += b; }
    friend ClassicalWeight operator-(ClassicalWeight a, const ClassicalWeight& b) { return a -= b; }
    ClassicalWeight operator-() const { return ClassicalWeight(lam.size()) - *this; }
    friend bool operator==(const ClassicalWeight&, const ClassicalWeight&) = default;

private:
    explicit ClassicalWeight(std::size_t n) : lam(n, 0) {}
};

inline std::string to_string(const ClassicalWeight& w) {
    std::string out;
    for (std::size_t i = 0; i < w.lam.size(); ++i) {
        int c = w.lam[i];
        if (c == 0) continue;
        if (!out.empty()) out += c > 0 ? " + " : " - ";
        else if (c < 0) out += "-";
        int a = c < 0 ? -c : c;
        if (a != 1) out += std::to_string(a);
        out += "L" + std::to_string(i);
    }
    return out.empty() ? "0" : out;
}

// a_ij of the affine Cartan matrix of type A_{n-1}^(1)
inline int cartan(int n, int i, int j) {
    if (n == 2) return i == j ? 2 : -2;
    if (i == j) return 2;
    int d = mod(i - j, n);
    return (d == 1 || d == n - 1) ? -1 : 0;
}

// alpha_j = sum_i a_ij Lambda_i
inline ClassicalWeight simple_root(int n, int j) {
    ClassicalWeight w(n);
    for (int i = 0; i < n; ++i) w.lam[static_cast<std::size_t>(i)] = cartan(n, i, j);
    return w;
}

struct VecVertex {
    int idx = 0;
    friend auto operator<=>(const VecVertex&, const VecVertex&) = default;
};

template <class V>
struct Dual {
    V base;
    friend auto operator<=>(const Dual&, const Dual&) = default;
};

template <class L, class R>
struct Tensor {
    L left;
    R right;
    friend auto operator<=>(const Tensor&, const Tensor&) = default;
};

// v_l (x) v_k^vee, with l = left.idx and k = right.base.idx
using BoxVertex = Tensor<VecVertex, Dual<VecVertex>>;
using PairVertex = Tensor<BoxVertex, BoxVertex>;

inline BoxVertex box(int l, int k) { return BoxVertex{VecVertex{l}, Dual<VecVertex>{VecVertex{k}}}; }
inline int box_l(const BoxVertex& b) { return b.left.idx; }
inline int box_k(const BoxVertex& b) { return b.right.base.idx; }
inline PairVertex pair(const BoxVertex& a, const BoxVertex& b) { return PairVertex{a, b}; }

template <class C>
concept Crystal = requires(const C& c, const typename C::vertex_type& v, int i) {
    typename C::vertex_type;
    { c.rank() } -> std::convertible_to<int>;
    { c.vertices() } -> std::same_as<std::vector<typename C::vertex_type>>;
    { c.f(i, v) } -> std::same_as<std::optional<typename C::vertex_type>>;
    { c.e(i, v) } -> std::same_as<std::optional<typename C::vertex_type>>;
    { c.phi(i, v) } -> std::convertible_to<int>;
    { c.eps(i, v) } -> std::convertible_to<int>;
    { c.wt(v) } -> std::same_as<ClassicalWeight>;
};

inline void check_rank(int n) {
    if (n < 2)
        throw UnsupportedRank("crystal graphs need n >= 2 (n = " + std::to_string(n) + ")");
}
inline void check_label(int n, int i) {
    if (i < 0 || i >= n)
        throw IndexOutOfRange("label " + std::to_string(i) + " outside 0.." + std::to_string(n - 1));
}
inline void check_vertex(int n, const VecVertex& v) {
    if (v.idx < 0 || v.idx >= n)
        throw IndexOutOfRange("vertex v_" + std::to_string(v.idx) + " outside 0.." +
                              std::to_string(n - 1));
}

class VectorCrystal {
public:
    using vertex_type = VecVertex;
    explicit VectorCrystal(int n) : n_(n) { check_rank(n); }
    int rank() const { return n_; }
    std::vector<VecVertex> vertices() const {
        std::vector<VecVertex> v;
        for (int i = 0; i < n_; ++i) v.push_back({i});
        return v;
    }
    std::optional<VecVertex> f(int i, const VecVertex& v) const {
        guard(i, v);
        if (v.idx == mod(i - 1, n_)) return VecVertex{i};
        return std::nullopt;
    }
    std::optional<VecVertex> e(int i, const VecVertex& v) const {
        guard(i, v);
        if (v.idx == i) return VecVertex{mod(i - 1, n_)};
        return std::nullopt;
    }
    int phi(int i, const VecVertex& v) const {
        guard(i, v);
        return v.idx == mod(i - 1, n_) ? 1 : 0;
    }
    int eps(int i, const VecVertex& v) const {
        guard(i, v);
        return v.idx == i ? 1 : 0;
    }
    ClassicalWeight wt(const VecVertex& v) const {
        check_vertex(n_, v);
        return ClassicalWeight::fundamental(n_, v.idx + 1) - ClassicalWeight::fundamental(n_, v.idx);
    }

private:
    void guard(int i, const VecVertex& v) const {
        check_label(n_, i);
        check_vertex(n_, v);
    }
    int n_;
};

template <Crystal C>
class DualCrystal {
public:
    using base_vertex = typename C::vertex_type;
    using vertex_type = Dual<base_vertex>;
    explicit DualCrystal(C base) : base_(std::move(base)) {}
    int rank() const { return base_.rank(); }
    const C& base() const { return base_; }
    std::vector<vertex_type> vertices() const {
        std::vector<vertex_type> v;
        for (auto& b : base_.vertices()) v.push_back({b});
        return v;
    }
    std::optional<vertex_type> f(int i, const vertex_type& v) const {
        if (auto r = base_.e(i, v.base)) return vertex_type{*r};
        return std::nullopt;
    }
    std::optional<vertex_type> e(int i, const vertex_type& v) const {
        if (auto r = base_.f(i, v.base)) return vertex_type{*r};
        return std::nullopt;
    }
    int phi(int i, const vertex_type& v) const { return base_.eps(i, v.base); }
    int eps(int i, const vertex_type& v) const { return base_.phi(i, v.base); }
    ClassicalWeight wt(const vertex_type& v) const { return -base_.wt(v.base); }

private:
    C base_;
};

template <Crystal C1, Crystal C2>
class TensorCrystal {
public:
    using vertex_type = Tensor<typename C1::vertex_type, typename C2::vertex_type>;
    TensorCrystal(C1 a, C2 b) : c1_(std::move(a)), c2_(std::move(b)) {
        if (c1_.rank() != c2_.rank()) throw MismatchedContext("tensor factors have different ranks");
    }
    int rank() const { return c1_.rank(); }
    const C1& first() const { return c1_; }
    const C2& second() const { return c2_; }
    std::vector<vertex_type> vertices() const {
        std::vector<vertex_type> v;
        for (auto& a : c1_.vertices())
            for (auto& b : c2_.vertices()) v.push_back({a, b});
        return v;
    }
    std::optional<vertex_type> f(int i, const vertex_type& v) const {
        if (c1_.phi(i, v.left) > c2_.eps(i, v.right)) {
            if (auto l = c1_.f(i, v.left)) return vertex_type{*l, v.right};
            return std::nullopt;
        }
        if (auto r = c2_.f(i, v.right)) return vertex_type{v.left, *r};
        return std::nullopt;
    }
    std::optional<vertex_type> e(int i, const vertex_type& v) const {
        if (c1_.phi(i, v.left) >= c2_.eps(i, v.right)) {
            if (auto l = c1_.e(i, v.left)) return vertex_type{*l, v.right};
            return std::nullopt;
        }
        if (auto r = c2_.e(i, v.right)) return vertex_type{v.left, *r};
        return std::nullopt;
    }
    int phi(int i, const vertex_type& v) const {
        int p1 = c1_.phi(i, v.left), p2 = c2_.phi(i, v.right), e2 = c2_.eps(i, v.right);
        return std::max(p2, p1 + p2 - e2);
    }
    int eps(int i, const vertex_type& v) const {
        int e1 = c1_.eps(i, v.left), e2 = c2_.eps(i, v.right), p1 = c1_.phi(i, v.left);
        return std::max(e1, e1 + e2 - p1);
    }
    ClassicalWeight wt(const vertex_type& v) const { return c1_.wt(v.left) + c2_.wt(v.right); }
    // which factor the operator acts on: true for the left one
    bool e_acts_left(int i, const vertex_type& v) const {
        return c1_.phi(i, v.left) >= c2_.eps(i, v.right);
    }
    bool f_acts_left(int i, const vertex_type& v) const {
        return c1_.phi(i, v.left) > c2_.eps(i, v.right);
    }

private:
    C1 c1_;
    C2 c2_;
};

using BoxCrystal = TensorCrystal<VectorCrystal, DualCrystal<VectorCrystal>>;
using PairCrystal = TensorCrystal<BoxCrystal, BoxCrystal>;

inline BoxCrystal box_crystal(int n) {
    return BoxCrystal(VectorCrystal(n), DualCrystal<VectorCrystal>(VectorCrystal(n)));
}
inline PairCrystal pair_crystal(int n) { return PairCrystal(box_crystal(n), box_crystal(n)); }

// free-function forms
inline std::optional<VecVertex> vec_f(int n, int i, VecVertex v) { return VectorCrystal(n).f(i, v); }
inline std::optional<VecVertex> vec_e(int n, int i, VecVertex v) { return VectorCrystal(n).e(i, v); }
inline int vec_phi(int n, int i, VecVertex v) { return VectorCrystal(n).phi(i, v); }
inline int vec_eps(int n, int i, VecVertex v) { return VectorCrystal(n).eps(i, v); }
inline ClassicalWeight vec_wt(int n, VecVertex v) { return VectorCrystal(n).wt(v); }

inline DualCrystal<VectorCrystal> dual_vector(int n) {
    return DualCrystal<VectorCrystal>(VectorCrystal(n));
}
inline std::optional<Dual<VecVertex>> dual_f(int n, int i, Dual<VecVertex> v) {
    check_label(n, i);
    return dual_vector(n).f(i, v);
}
inline std::optional<Dual<VecVertex>> dual_e(int n, int i, Dual<VecVertex> v) {
    check_label(n, i);
    return dual_vector(n).e(i, v);
}
inline int dual_phi(int n, int i, Dual<VecVertex> v) { return dual_vector(n).phi(i, v); }
inline int dual_eps(int n, int i, Dual<VecVertex> v) { return dual_vector(n).eps(i, v); }
inline ClassicalWeight dual_wt(int n, Dual<VecVertex> v) { return dual_vector(n).wt(v); }

template <Crystal C1, Crystal C2>
std::optional<typename TensorCrystal<C1, C2>::vertex_type> tensor_f(
    int i, const typename TensorCrystal<C1, C2>::vertex_type& b, const C1& c1, const C2& c2) {
    return TensorCrystal<C1, C2>(c1, c2).f(i, b);
}
template <Crystal C1, Crystal C2>
std::optional<typename TensorCrystal<C1, C2>::vertex_type> tensor_e(
    int i, const typename TensorCrystal<C1, C2>::vertex_type& b, const C1& c1, const C2& c2) {
    return TensorCrystal<C1, C2>(c1, c2).e(i, b);
}
template <Crystal C1, Crystal C2>
int tensor_phi(int i, const typename TensorCrystal<C1, C2>::vertex_type& b, const C1& c1,
               const C2& c2) {
    return TensorCrystal<C1, C2>(c1, c2).phi(i, b);
}
template <Crystal C1, Crystal C2>
int tensor_eps(int i, const typename TensorCrystal<C1, C2>::vertex_type& b, const C1& c1,
               const C2& c2) {
    return TensorCrystal<C1, C2>(c1, c2).eps(i, b);
}
template <Crystal C1, Crystal C2>
ClassicalWeight tensor_wt(const typename TensorCrystal<C1, C2>::vertex_type& b, const C1& c1,
                          const C2& c2) {
    return TensorCrystal<C1, C2>(c1, c2).wt(b);
}

// phi, eps as weights: sum_i phi_i Lambda_i
template <Crystal C>
ClassicalWeight phi_weight(const C& c, const typename C::vertex_type& v) {
    ClassicalWeight w(c.rank());
    for (int i = 0; i < c.rank(); ++i) w.lam[static_cast<std::size_t>(i)] = c.phi(i, v);
    return w;
}
template <Crystal C>
ClassicalWeight eps_weight(const C& c, const typename C::vertex_type& v) {
    ClassicalWeight w(c.rank());
    for (int i = 0; i < c.rank(); ++i) w.lam[static_cast<std::size_t>(i)] = c.eps(i, v);
    return w;
}

struct BoxData {
    ClassicalWeight wt, phi, eps;
    friend bool operator==(const BoxData&, const BoxData&) = default;
};

// closed forms for v_l (x) v_k^vee, valid for n >= 3
inline BoxData box_data(int n, const BoxVertex& b) {
    if (n < 3) throw UnsupportedRank("closed forms need n >= 3 (n = " + std::to_string(n) + ")");
    const int l = box_l(b), k = box_k(b);
    check_vertex(n, VecVertex{l});
    check_vertex(n, VecVertex{k});
    auto L = [n](int i) { return ClassicalWeight::fundamental(n, i); };
    BoxData d;
    d.wt = L(l + 1) - L(l) + L(k) - L(k + 1);
    if (l == k) {
        d.phi = L(l);
        d.eps = L(l);
    } else if (l == mod(k - 1, n)) {
        d.phi = L(k) + L(k);
        d.eps = L(k - 1) + L(k + 1);
    } else if (l == mod(k + 1, n)) {
        d.phi = L(l - 1) + L(l + 1);
        d.eps = L(l) + L(l);
    } else {
        d.phi = L(l + 1) + L(k);
        d.eps = L(k + 1) + L(l);
    }
    return d;
}

struct Edge {
    int from = 0, to = 0, label = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
};

struct PairGraph {
    int n = 0;
    std::vector<PairVertex> vertices;  // lexicographic in (l, k, l', k')
    std::vector<Edge> edges;           // sorted by (from, label)
    bool connected = false;
    std::size_t components = 0;

    std::string node_id(int v) const {
        const auto& p = vertices.at(static_cast<std::size_t>(v));
        return std::to_string(box_l(p.left)) + "," + std::to_string(box_k(p.left)) + "|" +
               std::to_string(box_l(p.right)) + "," + std::to_string(box_k(p.right));
    }
};

inline int pair_index(int n, const PairVertex& p) {
    return ((box_l(p.left) * n + box_k(p.left)) * n + box_l(p.right)) * n + box_k(p.right);
}

inline PairGraph pair_graph(int n) {
    check_rank(n);
    PairCrystal c = pair_crystal(n);
    PairGraph g;
    g.n = n;
    g.vertices = c.vertices();
    std::vector<std::vector<int>> adj(g.vertices.size());
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        for (int i = 0; i < n; ++i) {
            if (auto w = c.f(i, g.vertices[v])) {
                int to = pair_index(n, *w);
                g.edges.push_back({static_cast<int>(v), to, i});
                adj[v].push_back(to);
                adj[static_cast<std::size_t>(to)].push_back(static_cast<int>(v));
            }
        }
    }
    std::vector<int> comp(g.vertices.size(), -1);
    for (std::size_t s = 0; s < g.vertices.size(); ++s) {
        if (comp[s] >= 0) continue;
        const int id = static_cast<int>(g.components++);
        std::queue<int> q;
        q.push(static_cast<int>(s));
        comp[s] = id;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int w : adj[static_cast<std::size_t>(u)])
                if (comp[static_cast<std::size_t>(w)] < 0) {
                    comp[static_cast<std::size_t>(w)] = id;
                    q.push(w);
                }
        }
    }
    g.connected = g.components == 1;
    return g;
}

inline std::string to_dot(const PairGraph& g) {
    std::ostringstream os;
    os << "digraph pair_crystal_n" << g.n << " {\n";
    os << "  // " << g.vertices.size() << " vertices, " << g.edges.size() << " edges, "
       << (g.connected ? "connected" : "disconnected") << "\n";
    for (std::size_t v = 0; v < g.vertices.size(); ++v)
        os << "  \"" << g.node_id(static_cast<int>(v)) << "\";\n";
    for (const auto& e : g.edges)
        os << "  \"" << g.node_id(e.from) << "\" -> \"" << g.node_id(e.to) << "\" [label=" << e.label
           << "];\n";
    os << "}\n";
    return os.str();
}

}  // namespace primc::crystal
