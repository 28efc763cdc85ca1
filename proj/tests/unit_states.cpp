// State-space layer at k <= 2: exact simplex, polytope construction,
// well-definedness proofs, behaviour round trips, classical states, order
// determination, and the orthogonality/clique machinery.

#include <boxlogic/generate.hpp>
#include <boxlogic/lo.hpp>
#include <boxlogic/states.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace boxlogic;

namespace {

struct K1 {
    Structure<1> s;
    StateSpace<1> ss;
    K1() {
        auto [st, rep] = one_box_logic<1>(BoxSpec::binary());
        (void)rep;
        s = std::move(st);
        ss = build_state_space(s);
    }
};

struct K2 {
    Structure<1> s;
    StateSpace<1> ss;
    K2() {
        auto [st, rep] =
            box_product<1>({BoxSpec::binary(), BoxSpec::binary()}, SumRule::EffectSum);
        (void)rep;
        s = std::move(st);
        ss = build_state_space(s);
    }
};

const K1& k1() {
    static K1 f;
    return f;
}
const K2& k2() {
    static K2 f;
    return f;
}

std::string label_of(const StateSpace<1>& ss, uint32_t pos) {
    return (*ss.s->atom_infos)[ss.ct.info_of_pos[pos]].label;
}

// subset scan over small orthogonality graphs; independent of the
// branch-and-bound enumerator
size_t naive_clique_count(const OrthogonalityGraph& g, size_t max_size) {
    size_t count = 0;
    for (uint64_t sub = 1; sub < (uint64_t(1) << g.n); ++sub) {
        size_t sz = size_t(__builtin_popcountll(sub));
        if (sz < 2 || sz > max_size) continue;
        std::vector<uint32_t> vs;
        for (uint32_t v = 0; v < g.n; ++v)
            if (sub >> v & 1) vs.push_back(v);
        bool clique = true;
        for (size_t a = 0; a < vs.size() && clique; ++a)
            for (size_t b = a + 1; b < vs.size() && clique; ++b)
                if (!g.adj[vs[a]][vs[b]]) clique = false;
        if (clique) ++count;
    }
    return count;
}

} // namespace

TEST_CASE("exact simplex on hand-sized systems", "[simplex]") {
    SECTION("bounded optimum") {
        RatMat A{{1, 1, 1}};
        RatVec b{1}, c{1, 1, 0};
        auto r = lp_maximize(A, b, c);
        REQUIRE(r.status == LpStatus::Optimal);
        CHECK(r.value == 1);
    }
    SECTION("infeasible") {
        RatMat A{{1}};
        RatVec b{-1}, c{1};
        CHECK(lp_maximize(A, b, c).status == LpStatus::Infeasible);
    }
    SECTION("unbounded") {
        RatMat A{{1, -1}};
        RatVec b{0}, c{1, 0};
        CHECK(lp_maximize(A, b, c).status == LpStatus::Unbounded);
    }
    SECTION("redundant rows") {
        RatMat A{{1, 1}, {1, 1}, {2, 2}};
        RatVec b{1, 1, 2}, c{Rational(1), Rational(1, 2)};
        auto r = lp_maximize(A, b, c);
        REQUIRE(r.status == LpStatus::Optimal);
        CHECK(r.value == 1);
        CHECK(r.x[0] == 1);
        CHECK(r.x[1] == 0);
    }
    SECTION("fractional optimum stays exact") {
        RatMat A{{1, 2, 1, 0}, {3, 1, 0, 1}};
        RatVec b{4, 6}, c{3, 2, 0, 0};
        auto r = lp_maximize(A, b, c);
        REQUIRE(r.status == LpStatus::Optimal);
        CHECK(r.value == Rational(36, 5));
    }
}

TEST_CASE("one-box state space", "[states]") {
    const auto& f = k1();
    CHECK(f.ss.poly.nvars == 4);
    CHECK(f.ss.poly.normalization_rows == 2);
    CHECK(f.ss.poly.nosignaling_rows == 0);
    CHECK(f.ss.poly.A.size() == 2);
    CHECK(f.ss.poly.rank == 2);
    CHECK(f.ss.null_basis.size() == 2);

    auto cls = classical_states(f.ss);
    CHECK(cls.size() == 4);
    CHECK(check_order_determining_classical(f.s).pass);

    // a single state cannot order six elements
    auto uni = pr_to_logic_state(f.ss, uniform_state(f.ss));
    auto od1 = check_order_determining(f.ss, {uni});
    CHECK(!od1.pass);
}

TEST_CASE("two-box state space and well-definedness", "[states]") {
    const auto& f = k2();
    CHECK(f.ss.poly.nvars == 16);
    CHECK(f.ss.poly.normalization_rows == 4);
    CHECK(f.ss.poly.nosignaling_rows == 8);
    CHECK(f.ss.poly.A.size() == 12);
    CHECK(f.ss.poly.rank == 8);
    CHECK(f.ss.null_basis.size() == 8);

    // multi-decomposition elements: every certificate functional difference
    // vanishes on the affine hull, so state values never depend on the
    // decomposition chosen
    CHECK(f.ss.proof.multi_elements == 25);
    CHECK(f.ss.proof.certificates == 76);
    CHECK(f.ss.proof.max_certificates == 12);
    CHECK(f.ss.proof.distinct_diffs == 27);
    CHECK(f.ss.proof.all_vanish);
}

TEST_CASE("sampled no-signaling behaviours round trip", "[states]") {
    const auto& f = k2();
    std::mt19937_64 rng(12345);
    for (int n = 0; n < 30; ++n) {
        PRState P = sample_ns_state(f.ss, rng);
        LogicState st = pr_to_logic_state(f.ss, P);
        PRState back = logic_state_to_pr(f.ss, st);
        CHECK(P == back);
    }
}

TEST_CASE("classical states are normalized and additive", "[states]") {
    const auto& f = k2();
    auto cls = classical_states(f.ss);
    REQUIRE(cls.size() == 16);
    for (auto& st : cls) CHECK(state_value(f.ss, st, f.s.one_index()) == 1);

    // additivity across every defined pair for one deterministic state
    const LogicState& st = cls[5];
    for (uint32_t i = 1; i < f.s.size(); ++i)
        for (uint32_t j = i; j < f.s.size(); ++j) {
            if (!f.s.sum_defined(i, j)) continue;
            uint32_t k = f.s.require_index(f.s.elems[i] | f.s.elems[j]);
            CHECK(state_value(f.ss, st, k) ==
                  state_value(f.ss, st, i) + state_value(f.ss, st, j));
        }
}

TEST_CASE("classical point-mass states determine the two-box order", "[states]") {
    const auto& f = k2();
    CHECK(check_order_determining_classical(f.s).pass);
    auto cls = classical_states(f.ss);
    auto od = check_order_determining(f.ss, cls);
    CHECK(od.pass);
    CHECK(od.state_distinguishing);
}

TEST_CASE("linear optimization over the two-box polytope", "[states]") {
    const auto& f = k2();
    // a single event is reachable with certainty
    auto opt = maximize_linear(f.ss, indicator_objective(16, {0}));
    CHECK(opt.value == 1);
    // a full context always sums to exactly one
    auto optc = maximize_linear(f.ss, indicator_objective(16, f.ss.ct.ctx_atoms[0]));
    CHECK(optc.value == 1);
}

TEST_CASE("no-signaling violations are reported with the offending marginal", "[states]") {
    const auto& f = k2();
    PRState P = uniform_state(f.ss);
    P.probs[0][0] = Rational(1, 2);
    P.probs[0][1] = Rational(1, 4);
    P.probs[0][2] = Rational(1, 8);
    P.probs[0][3] = Rational(1, 8);
    try {
        pr_to_logic_state(f.ss, P);
        FAIL("expected a no-signaling violation");
    } catch (const NoSignalingViolation& e) {
        std::string msg = e.what();
        CHECK(msg.find("box 1") != std::string::npos);
        CHECK(msg.find("5/8") != std::string::npos);
    }
}

TEST_CASE("one-box orthogonality graph and cliques", "[lo]") {
    const auto& f = k1();
    auto g = build_orthogonality_graph(f.ss);
    auto mc = maximal_cliques(g);
    REQUIRE(mc.size() == 2);
    std::set<std::set<std::string>> got;
    for (auto& cl : mc) {
        REQUIRE(cl.size() == 2);
        got.insert({label_of(f.ss, cl[0]), label_of(f.ss, cl[1])});
    }
    // the two maximal cliques are exactly the per-input outcome pairs
    std::set<std::set<std::string>> want{{"x0", "x1"}, {"y0", "y1"}};
    CHECK(got == want);
    CHECK(cliques_up_to(g, 4).size() == naive_clique_count(g, 4));

    auto lo = check_lo_violations(f.ss, mc);
    CHECK(lo.max_lp == 1);
    CHECK(lo.violated_count == 0);
    for (auto& row : lo.rows) {
        CHECK(row.sum_defined);
        // defined context sums are affinely pinned to 1; no LP run is needed
        CHECK(row.by_affine);
    }
    CHECK(lo.lp_runs == 0);
}

TEST_CASE("two-box clique census and inequality sweep", "[lo]") {
    const auto& f = k2();
    auto g = build_orthogonality_graph(f.ss);
    auto mc = maximal_cliques(g);
    REQUIRE(mc.size() == 12);
    for (auto& cl : mc) CHECK(cl.size() == 4);

    auto lo = check_lo_violations(f.ss, mc);
    CHECK(lo.max_lp == 1);
    CHECK(lo.violated_count == 0);
    CHECK(lo.lp_runs == 0);

    CHECK(cliques_up_to(g, 4).size() == naive_clique_count(g, 4));
    CHECK(cliques_up_to(g, 4).size() == 116);
}

TEST_CASE("running two copies of the uniform two-box behaviour", "[lo]") {
    const auto& f = k2();
    auto cop = check_lo_copies(f.ss, uniform_state(f.ss), 2, 8, 20'000'000);
    CHECK(!cop.violated);
    CHECK(cop.complete);
    CHECK(cop.support == 256);
    CHECK(cop.max_sum == Rational(1, 2));

    CHECK_THROWS_AS(check_lo_copies(f.ss, uniform_state(f.ss), 3, 4, 1000),
                    std::invalid_argument);
}
