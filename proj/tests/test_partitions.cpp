#include <catch_amalgamated.hpp>

#include <set>

#include <primc/partitions.hpp>

using namespace primc;
using namespace primc::partitions;
using energy::Colour;

namespace {

ColouredPart P(int size, const char* colour) { return {size, *energy::parse_colour(colour)}; }

// Delta typed in from its defining formula, kept separate from the library
int delta_oracle(Colour c1, Colour c2) {
    auto chi = [](bool b) { return b ? 1 : 0; };
    return chi(c1.a >= c2.a) - chi(c1.a == c1.b && c1.b == c2.a) + chi(c1.b <= c2.b) -
           chi(c1.b == c2.a && c2.a == c2.b);
}

// nonincreasing coloured sequences ending in 0_{c_g}, checked pair by pair as they grow
void brute_grounded(int n, int ell, int N, bool minimal, std::vector<ColouredPart>& cur, int w,
                    std::set<std::vector<ColouredPart>>& out) {
    auto fits = [&](const ColouredPart& x, const ColouredPart& y) {
        int d = x.size - y.size, h = delta_oracle(x.colour, y.colour);
        return minimal ? d == h : d >= h;
    };
    const ColouredPart ground{0, {ell, ell}};
    if (cur.empty() || (cur.back() != ground && fits(cur.back(), ground))) {
        auto full = cur;
        full.push_back(ground);
        out.insert(full);
    }
    // free colours may repeat at size 0, so the depth needs a cap
    if (static_cast<int>(cur.size()) > N + n * n) return;
    int maxsize = cur.empty() ? N : cur.back().size;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int x = 0; x <= maxsize && w + x <= N; ++x) {
                ColouredPart p{x, {a, b}};
                if (!cur.empty() && !fits(cur.back(), p)) continue;
                cur.push_back(p);
                brute_grounded(n, ell, N, minimal, cur, w + x, out);
                cur.pop_back();
            }
}

std::vector<long long> mul(const std::vector<long long>& a, const std::vector<long long>& b) {
    std::vector<long long> r(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; i + j < a.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

// (1/(q;q)^{n-1}) sum_s q^{Q(s)} at b = 1, in machine integers
std::vector<long long> character_at_one(int n, int N) {
    std::vector<long long> theta(N + 1, 0);
    std::vector<int> s(n + 1, 0);
    int bound = 1;
    while (2 * bound * bound <= n * N) ++bound;
    std::function<void(int)> rec = [&](int i) {
        if (i == n) {
            long q = 0;
            for (int j = 1; j < n; ++j) q += static_cast<long>(s[j]) * (s[j] - s[j + 1]);
            if (q <= N) ++theta[q];
            return;
        }
        for (int v = -bound; v <= bound; ++v) {
            s[i] = v;
            rec(i + 1);
        }
        s[i] = 0;
    };
    rec(1);
    std::vector<long long> p(N + 1, 0);
    p[0] = 1;
    for (int part = 1; part <= N; ++part)
        for (int m = part; m <= N; ++m) p[m] += p[m - part];
    for (int k = 1; k < n; ++k) theta = mul(theta, p);
    return theta;
}

}  // namespace

TEST_CASE("primc_ok", "[partitions]") {
    CHECK(primc_ok(2, {P(3, "a1b1"), P(3, "a1b0"), P(1, "a0b1")}));
    CHECK_FALSE(primc_ok(2, {P(1, "a1b0"), P(1, "a1b0")}));
    CHECK(primc_ok(2, {}));
    CHECK_FALSE(primc_ok(2, {P(0, "a1b1")}));
    CHECK_FALSE(primc_ok(2, {P(3, "a2b0")}));
}

TEST_CASE("grounded enumeration basics", "[partitions]") {
    for (bool minimal : {false, true}) {
        auto v = enumerate_grounded(2, 0, 0, minimal);
        REQUIRE(v.size() == 1);
        CHECK(v[0].parts == std::vector<ColouredPart>{P(0, "a0b0")});
    }
    auto v = enumerate_grounded(2, 0, 7, true);
    GroundedPartition ex{0, {P(3, "a1b1"), P(3, "a1b0"), P(1, "a0b1"), P(0, "a0b0")}};
    CHECK(std::find(v.begin(), v.end(), ex) != v.end());
    for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i - 1].weight() <= v[i].weight());
    std::set<std::vector<ColouredPart>> uniq;
    for (auto& g : v) CHECK(uniq.insert(g.parts).second);
}

TEST_CASE("grounded enumeration is complete against brute force", "[partitions][property]") {
    for (int n : {2, 3})
        for (int ell = 0; ell < n; ++ell)
            for (bool minimal : {false, true}) {
                const int N = n == 2 ? 6 : 4;
                std::set<std::vector<ColouredPart>> want;
                std::vector<ColouredPart> cur;
                brute_grounded(n, ell, N, minimal, cur, 0, want);
                std::set<std::vector<ColouredPart>> got;
                for (auto& g : enumerate_grounded(n, ell, N, minimal)) got.insert(g.parts);
                INFO("n=" << n << " ell=" << ell << " minimal=" << minimal);
                CHECK(got == want);
            }
}

TEST_CASE("minimal grounded counts match the character at b = 1", "[partitions]") {
    auto want = character_at_one(2, 6);
    auto got = q_coefficients(gf_grounded(2, 0, 6, true));
    for (int m = 0; m <= 6; ++m) CHECK(got[m] == want[m]);
}

TEST_CASE("gf_grounded", "[partitions]") {
    Series s = gf_grounded(2, 0, 1, false);
    Context c{2, 1};
    Series want = Series::constant(c) + Series::monomial(c, qpow(2, 1), 2) +
                  Series::monomial(c, Monomial(1, Exps{1, -1})) +
                  Series::monomial(c, Monomial(1, Exps{-1, 1}));
    CHECK(s == want);
    CHECK(gf_grounded(3, 1, 0, false) == gf_grounded(3, 1, 0, true));
    CHECK(gf_grounded(2, 0, 0, false) == Series::constant({2, 0}));
    for (int n : {2, 3})
        for (int ell = 0; ell < n; ++ell) {
            const int N = n == 2 ? 10 : 7;
            CHECK(gf_grounded(n, ell, N, true) * euler_inverse({n, N}) == gf_grounded(n, ell, N, false));
        }
}

TEST_CASE("one colour gives classical partitions", "[partitions]") {
    auto got = q_coefficients(gf_grounded(1, 0, 15, false));
    auto want = q_coefficients(euler_inverse({1, 15}));
    CHECK(got == want);
    CHECK(q_coefficients(gf_grounded(1, 0, 15, true)) == q_coefficients(Series::constant({1, 15})));
}

TEST_CASE("phi on paths", "[partitions]") {
    auto t = energy::energy_table(2);
    using crystal::box;
    auto pi = path_to_partition(t, 0, {box(1, 1), box(0, 1), box(1, 0)});
    CHECK(pi.parts == std::vector<ColouredPart>{P(3, "a1b1"), P(3, "a1b0"), P(1, "a0b1"), P(0, "a0b0")});
    CHECK(path_to_partition(t, 0, {}).parts == std::vector<ColouredPart>{P(0, "a0b0")});
    CHECK_THROWS_AS(path_to_partition(t, 0, {box(1, 0), box(0, 0)}), BadPath);
    CHECK_THROWS_AS(partition_to_path(t, GroundedPartition{0, {P(5, "a1b1"), P(0, "a0b0")}}), NotGrounded);
}

TEST_CASE("phi round trip on all short paths", "[partitions][property]") {
    const int n = 3;
    auto t = energy::energy_table(n);
    auto boxes = crystal::box_crystal(n).vertices();
    auto rule = DifferenceRule::from_energy(t);
    for (int ell = 0; ell < n; ++ell) {
        std::size_t checked = 0;
        std::vector<crystal::BoxVertex> path;
        std::function<void()> rec = [&]() {
            if (path.empty() || path.back() != crystal::box(ell, ell)) {
                auto pi = path_to_partition(t, ell, path);
                CHECK(is_grounded(rule, pi, true));
                CHECK(partition_to_path(t, pi) == path);
                ++checked;
            }
            if (path.size() == 5) return;
            for (auto& b : boxes) {
                path.push_back(b);
                rec();
                path.pop_back();
            }
        };
        rec();
        CHECK(checked > 50000);
    }
}

TEST_CASE("weight law for paths", "[partitions][property]") {
    // affine weight of a path minus the highest weight: classical part sum_k wt p_k,
    // null-root degree sum_k (k+1) H(p_{k+1} (x) p_k)
    for (int n : {2, 3, 4}) {
        auto t = energy::energy_table(n);
        auto bc = crystal::box_crystal(n);
        for (int ell = 0; ell < n; ++ell)
            for (const auto& pi : enumerate_grounded(n, ell, 8, true)) {
                auto path = partition_to_path(t, pi);
                crystal::ClassicalWeight w(n);
                long degree = 0;
                for (std::size_t k = 0; k < path.size(); ++k) {
                    w += bc.wt(path[k]);
                    auto next = k + 1 < path.size() ? path[k + 1] : crystal::box(ell, ell);
                    degree += static_cast<long>(k + 1) * t.at(next, path[k]);
                }
                Monomial m = colour_monomial(n, pi.parts);
                CHECK(degree == m.q);
                CHECK(degree == pi.weight());
                // e^{wt v_i} = b_i and wt v_i = L_{i+1} - L_i: coefficient of L_j is e_{j-1} - e_j
                for (int j = 0; j < n; ++j)
                    CHECK(w.lam[j] == m.b[(j + n - 1) % n] - m.b[j]);
            }
    }
}

TEST_CASE("Phi examples", "[partitions]") {
    auto d = DifferenceRule::from_energy(2);
    GroundedPartition pi{0, {P(10, "a0b0"), P(7, "a1b0"), P(5, "a0b1"), P(3, "a1b1"), P(2, "a0b0"),
                             P(1, "a1b0"), P(0, "a0b0")}};
    auto r = split_phi(d, pi);
    CHECK(r.mu.parts == std::vector<ColouredPart>{P(6, "a0b0"), P(5, "a1b0"), P(3, "a0b1"), P(3, "a1b1"),
                                                  P(2, "a0b0"), P(1, "a1b0"), P(0, "a0b0")});
    CHECK(r.nu == std::vector<int>{4, 2, 2});
    CHECK(merge_phi(d, r) == pi);

    GroundedPartition pi2{0, {P(8, "a0b0"), P(5, "a1b0"), P(3, "a0b1"), P(2, "a1b1"), P(1, "a0b0"),
                              P(1, "a0b0"), P(0, "a0b0")}};
    auto r2 = split_phi(d, pi2);
    CHECK(r2.mu.parts ==
          std::vector<ColouredPart>{P(4, "a0b0"), P(3, "a1b0"), P(1, "a0b1"), P(1, "a1b1"), P(0, "a0b0")});
    CHECK(r2.nu == std::vector<int>{4, 2, 2, 1, 1, 1});
    CHECK(merge_phi(d, r2) == pi2);

    auto r0 = split_phi(d, GroundedPartition{0, {P(0, "a0b0")}});
    CHECK(r0.mu.parts == std::vector<ColouredPart>{P(0, "a0b0")});
    CHECK(r0.nu.empty());

    CHECK_THROWS_AS(split_phi(d, GroundedPartition{0, {P(1, "a1b0"), P(1, "a1b0"), P(0, "a0b0")}}),
                    NotGrounded);
    CHECK_THROWS_AS(split_phi(d, GroundedPartition{0, {P(2, "a1b1")}}), NotGrounded);
}

TEST_CASE("Phi is a weight- and colour-preserving bijection", "[partitions][property]") {
    for (int n : {2, 3}) {
        auto d = DifferenceRule::from_energy(n);
        for (int ell = 0; ell < n; ++ell) {
            const int N = 10;
            std::set<std::pair<std::vector<ColouredPart>, std::vector<int>>> images;
            auto all = enumerate_grounded(d, ell, N, false);
            for (const auto& pi : all) {
                auto r = split_phi(d, pi);
                CHECK(is_grounded(d, r.mu, true));
                int nu = 0;
                for (int v : r.nu) nu += v;
                CHECK(pi.weight() == r.mu.weight() + nu);
                std::vector<Colour> a, b;
                for (const auto& p : pi.parts)
                    if (p.colour != ground_colour(ell)) a.push_back(p.colour);
                for (const auto& p : r.mu.parts)
                    if (p.colour != ground_colour(ell)) b.push_back(p.colour);
                CHECK(a == b);
                CHECK(merge_phi(d, r) == pi);
                CHECK(images.insert({r.mu.parts, r.nu}).second);
            }
            // surjectivity: every (mu, nu) of total weight <= N is hit
            std::size_t pairs = 0;
            auto mins = enumerate_grounded(d, ell, N, true);
            std::vector<long long> p(N + 1, 0);
            p[0] = 1;
            for (int part = 1; part <= N; ++part)
                for (int m = part; m <= N; ++m) p[m] += p[m - part];
            for (const auto& mu : mins)
                for (int w = 0; w + mu.weight() <= N; ++w) pairs += p[w];
            CHECK(pairs == all.size());
        }
    }
}

TEST_CASE("split after merge", "[partitions][property]") {
    auto d = DifferenceRule::from_energy(3);
    for (int ell = 0; ell < 3; ++ell)
        for (const auto& mu : enumerate_grounded(d, ell, 5, true)) {
            // all partitions nu of size <= 4
            std::vector<std::vector<int>> nus{{}};
            std::function<void(std::vector<int>&, int, int)> gen = [&](std::vector<int>& cur, int left, int mx) {
                for (int v = std::min(left, mx); v >= 1; --v) {
                    cur.push_back(v);
                    nus.push_back(cur);
                    gen(cur, left - v, v);
                    cur.pop_back();
                }
            };
            std::vector<int> cur;
            gen(cur, 4, 4);
            for (const auto& nu : nus) {
                PhiSplit in{mu, nu};
                auto pi = merge_phi(d, in);
                CHECK(is_grounded(d, pi, false));
                CHECK(split_phi(d, pi) == in);
            }
        }
}
