// Three binary boxes: the effect-algebra structure (28886 elements), its
// union-closure companion (29142 elements), their state spaces, the clique
// census with the 4/3 violation, and the pinned-polytope analysis of the
// closure. Fixtures are built once and shared; the full pinned inequality
// sweep is tagged [.slow] and runs only on request.

#include <boxlogic/axioms.hpp>
#include <boxlogic/generate.hpp>
#include <boxlogic/lo.hpp>
#include <boxlogic/states.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <set>

using namespace boxlogic;

namespace {

struct K3 {
    Structure<1> ea;
    GenerationReport ea_rep;
    Structure<1> omp;
    GenerationReport omp_rep;
    StateSpace<1> ss;                            // over ea
    PinnedSpace<1> pinned;                       // closure polytope pinned to ea's
    std::vector<std::vector<uint32_t>> cliques;  // maximal cliques of ea's graph

    K3() {
        std::vector<BoxSpec> boxes(3, BoxSpec::binary());
        auto [e, er] = box_product<1>(boxes, SumRule::EffectSum);
        ea = std::move(e);
        ea_rep = er;
        auto [o, orr] = box_product<1>(boxes, SumRule::UnionSum);
        omp = std::move(o);
        omp_rep = orr;
        ss = build_state_space(ea);
        pinned = build_pinned_space(omp, ss);
        cliques = maximal_cliques(build_orthogonality_graph(ss));
    }
};

const K3& fix() {
    static K3 f;
    return f;
}

uint32_t atom_position(const StateSpace<1>& ss, const std::string& label) {
    const auto& infos = *ss.s->atom_infos;
    for (size_t t = 0; t < infos.size(); ++t)
        if (infos[t].label == label) return ss.ct.pos_of_info[t];
    FAIL("unknown atom label " << label);
    return 0;
}

std::set<std::string> mask_hexes(const Structure<1>& s, const std::vector<uint32_t>& idxs) {
    std::set<std::string> out;
    for (uint32_t i : idxs) out.insert(s.elems[i].to_hex());
    return out;
}

} // namespace

TEST_CASE("three-box censuses", "[k3]") {
    const auto& f = fix();
    CHECK(f.ea.size() == 28886);
    CHECK(f.ea.atoms.size() == 64);
    CHECK(f.ea_rep.closure_rounds == 9);
    CHECK(f.omp.size() == 29142);
    CHECK(f.omp.atoms.size() == 192);
    CHECK(f.omp_rep.closure_rounds == 4);

    // the sum structure embeds in the union closure
    size_t contained = 0;
    for (auto& m : f.ea.elems) contained += f.omp.is_element(m);
    CHECK(contained == f.ea.size());
    size_t shared_atoms = 0;
    for (uint32_t ai : f.ea.atoms) {
        uint32_t k = f.omp.require_index(f.ea.elems[ai]);
        shared_atoms += std::binary_search(f.omp.atoms.begin(), f.omp.atoms.end(), k);
    }
    CHECK(shared_atoms == 64);

    // the 128 extra closure atoms are half-space masks outside the sum structure
    size_t extra = 0;
    for (uint32_t ai : f.omp.atoms) {
        const Bitset<1>& m = f.omp.elems[ai];
        if (f.ea.is_element(m)) continue;
        ++extra;
        CHECK(m.count() == 32);
    }
    CHECK(extra == 128);
}

TEST_CASE("three-box axiom sweeps", "[k3]") {
    const auto& f = fix();
    for (auto& r : check_effect_algebra(f.ea)) {
        INFO(r.axiom);
        CHECK(r.pass);
    }
    CHECK(check_atomistic(f.ea).pass);
    for (auto& r : check_effect_algebra(f.omp)) {
        INFO(r.axiom);
        CHECK(r.pass);
    }
    for (auto& r : check_orthoposet(f.omp)) {
        INFO(r.axiom);
        CHECK(r.pass);
    }
    CHECK(check_atomistic(f.omp).pass);
}

TEST_CASE("pairwise orthogonality no longer forces a total sum", "[k3]") {
    const auto& f = fix();
    auto co = check_coherence_law(f.ea);
    CHECK(!co.pass);
    CHECK(co.families_checked == 5505);
    REQUIRE(co.witness.size() == 4);
    CHECK(mask_hexes(f.ea, co.witness) ==
          std::set<std::string>{"330033", "c0c00000c0c", "5050505000000000",
                                "aa000000aa000000"});
    // recheck the witness family naively: pairwise defined, total undefined
    for (size_t a = 0; a < 4; ++a)
        for (size_t b = a + 1; b < 4; ++b) CHECK(f.ea.sum_defined(co.witness[a], co.witness[b]));
    CHECK(!f.ea.nsum_defined(co.witness));

    // the union closure restores the law
    auto co2 = check_coherence_law(f.omp);
    CHECK(co2.pass);
    CHECK(co2.families_checked == 88264);
}

TEST_CASE("the four named events violate coherence", "[k3]") {
    const auto& f = fix();
    uint32_t q1 = f.ea.atoms[atom_position(f.ss, "x0x0x0")];
    uint32_t q2 = f.ea.atoms[atom_position(f.ss, "x1y1y0")];
    uint32_t q3 = f.ea.atoms[atom_position(f.ss, "y0x1y1")];
    uint32_t q4 = f.ea.atoms[atom_position(f.ss, "y1y0x1")];
    std::set<std::string> masks = mask_hexes(f.ea, {q1, q2, q3, q4});
    CHECK(masks == std::set<std::string>{"330033", "5050505000000000", "aa000000aa00",
                                         "c0c00000c0c0000"});

    // every pair is summable
    for (uint32_t a : {q1, q2, q3, q4})
        for (uint32_t b : {q1, q2, q3, q4})
            if (a != b) CHECK(f.ea.sum_defined(a, b));
    // the three sums with a member total exist
    CHECK(f.ea.nsum_defined({q1, q2, q3}));
    CHECK(f.ea.nsum_defined({q3, q4}));
    CHECK(f.ea.nsum_defined({q1, q2, q4}));
    // the quadruple does not
    CHECK(!f.ea.nsum_defined({q1, q2, q3, q4}));
}

TEST_CASE("orthoposet laws break at three boxes and witnesses verify naively", "[k3]") {
    const auto& f = fix();
    auto reports = check_orthoposet(f.ea);
    std::map<std::string, AxiomReport> by_axiom;
    for (auto& r : reports) by_axiom[r.axiom] = r;
    CHECK(by_axiom["L1"].pass);
    CHECK(by_axiom["L2"].pass);
    CHECK(by_axiom["L3"].pass);

    REQUIRE(!by_axiom["L4"].pass);
    REQUIRE(by_axiom["L4"].witness.size() == 2);
    CHECK(mask_hexes(f.ea, by_axiom["L4"].witness) ==
          std::set<std::string>{"a0a0a0a", "5500000055"});
    // L4 fails on an orthogonal pair with upper bounds but no least one
    uint32_t f1 = by_axiom["L4"].witness[0], f2 = by_axiom["L4"].witness[1];
    CHECK(f.ea.sum_defined(f1, f2));
    CHECK(!detail::upper_bounds(f.ea, {f1, f2}).empty());
    CHECK(!detail::least_upper_bound(f.ea, {f1, f2}).has_value());

    REQUIRE(!by_axiom["L5"].pass);
    REQUIRE(by_axiom["L5"].witness.size() == 2);
    CHECK(mask_hexes(f.ea, by_axiom["L5"].witness) ==
          std::set<std::string>{"aa000000aa", "3cf33ffcfcfffff"});
    uint32_t ip = f.ea.require_index(Bitset<1>::from_hex("aa000000aa"));
    uint32_t iq = f.ea.require_index(Bitset<1>::from_hex("3cf33ffcfcfffff"));
    CHECK(f.ea.leq_member(ip, iq));
    CHECK(!detail::greatest_lower_bound(f.ea, {iq, f.ea.comp_index(ip)}).has_value());

    // independently found pairs show the same failures
    uint32_t p1 = f.ea.require_index(Bitset<1>::from_hex("c0c0c0c"));
    uint32_t p2 = f.ea.require_index(Bitset<1>::from_hex("3300000033"));
    CHECK(!detail::least_upper_bound(f.ea, {p1, p2}).has_value());
    uint32_t yq = f.ea.require_index(Bitset<1>::from_hex("5af55ffafafffff"));
    CHECK(!detail::greatest_lower_bound(f.ea, {yq, f.ea.comp_index(p1)}).has_value());
}

TEST_CASE("neither three-box structure is a lattice", "[k3]") {
    const auto& f = fix();
    auto lat = check_lattice_and_boolean(f.ea);
    CHECK(!lat.is_lattice);
    CHECK(!lat.exhaustive);
    REQUIRE(lat.lattice_witness.size() == 2);
    CHECK(mask_hexes(f.ea, lat.lattice_witness) ==
          std::set<std::string>{"330033", "5050505"});
    CHECK(!detail::least_upper_bound(f.ea, lat.lattice_witness).has_value());

    auto lat2 = check_lattice_and_boolean(f.omp);
    CHECK(!lat2.is_lattice);
    REQUIRE(lat2.lattice_witness.size() == 2);
    CHECK(mask_hexes(f.omp, lat2.lattice_witness) ==
          std::set<std::string>{"330033", "5050505"});
}

TEST_CASE("classical point-mass states fail to determine the three-box sum order",
          "[k3]") {
    const auto& f = fix();
    auto inc = inclusion_sweep(f.ea, true);
    CHECK(inc.inclusion_pairs == 1524868);
    REQUIRE(inc.violating.size() == 1792);

    auto od = check_order_determining_classical(f.ea);
    CHECK(!od.pass);
    CHECK(od.failing_pairs == 1792);
    REQUIRE(od.witness.has_value());
    CHECK(od.witness->first == 8);
    CHECK(od.witness->second == 3117);

    // every failing difference is one of the 128 closure-only atoms: the
    // inclusion holds as sets, but the difference is not a member here
    std::set<std::string> diffs;
    for (auto& [i, j] : inc.violating) {
        Bitset<1> d = f.ea.elems[j] - f.ea.elems[i];
        CHECK(!f.ea.is_element(d));
        diffs.insert(d.to_hex());
    }
    std::set<std::string> closure_only;
    for (uint32_t ai : f.omp.atoms) {
        const Bitset<1>& m = f.omp.elems[ai];
        if (!f.ea.is_element(m)) closure_only.insert(m.to_hex());
    }
    CHECK(diffs == closure_only);
    CHECK(diffs.size() == 128);

    // the union closure has no such gap
    auto od2 = check_order_determining_classical(f.omp);
    CHECK(od2.pass);
    CHECK(inclusion_sweep(f.omp, false).inclusion_pairs == 1528708);
}

TEST_CASE("three-box polytope and well-definedness proof", "[k3]") {
    const auto& f = fix();
    CHECK(f.ss.poly.nvars == 64);
    CHECK(f.ss.poly.normalization_rows == 8);
    CHECK(f.ss.poly.nosignaling_rows == 48);
    CHECK(f.ss.poly.rank == 38);
    CHECK(f.ss.null_basis.size() == 26);
    CHECK(f.ss.proof.multi_elements == 14181);
    CHECK(f.ss.proof.certificates == 71576);
    CHECK(f.ss.proof.max_certificates == 744);
    CHECK(f.ss.proof.distinct_diffs == 8275);
    CHECK(f.ss.proof.all_vanish);
}

TEST_CASE("the four-event objective reaches exactly 4/3", "[k3]") {
    const auto& f = fix();
    std::vector<uint32_t> quad;
    for (auto lb : {"x0x0x0", "x1y1y0", "y0x1y1", "y1y0x1"})
        quad.push_back(atom_position(f.ss, lb));
    auto opt = maximize_linear(f.ss, indicator_objective(64, quad));
    CHECK(opt.value == Rational(4, 3));

    // the maximizer is a genuine no-signaling behaviour with 24-atom support
    LogicState st;
    st.atom_values = opt.argmax;
    PRState P = logic_state_to_pr(f.ss, st);
    CHECK(pr_to_logic_state(f.ss, P) == st);
    size_t support = 0;
    for (auto& v : opt.argmax)
        if (v > 0) ++support;
    CHECK(support == 24);
}

TEST_CASE("sampled behaviours round trip and respect every decomposition", "[k3]") {
    const auto& f = fix();
    std::mt19937_64 rng(777);
    for (int n = 0; n < 20; ++n) {
        PRState P = sample_ns_state(f.ss, rng);
        LogicState st = pr_to_logic_state(f.ss, P);
        CHECK(logic_state_to_pr(f.ss, st) == P);
        if (n < 3) {
            // spot-check certificate agreement directly on strided elements
            size_t seen = 0;
            for (uint32_t i = 1; i < f.ea.size() && seen < 40; i += 997) {
                auto certs = f.ea.oracle->all_certificates(f.ea.elems[i], 1000);
                if (certs.size() < 2) continue;
                ++seen;
                Rational v0;
                for (size_t c = 0; c < certs.size(); ++c) {
                    Rational v = 0;
                    for (uint32_t t : certs[c]) v += st.atom_values[f.ss.ct.pos_of_info[t]];
                    if (c == 0) v0 = v;
                    else CHECK(v == v0);
                }
            }
        }
    }
}

TEST_CASE("clique census and inequality sweep", "[k3]") {
    const auto& f = fix();
    REQUIRE(f.cliques.size() == 872);
    size_t s8 = 0, s4 = 0;
    for (auto& cl : f.cliques) {
        if (cl.size() == 8) ++s8;
        else if (cl.size() == 4) ++s4;
    }
    CHECK(s8 == 744);
    CHECK(s4 == 128);

    auto lo = check_lo_violations(f.ss, f.cliques);
    CHECK(lo.max_lp == Rational(4, 3));
    CHECK(lo.violated_count == 128);
    CHECK(lo.lp_runs == 128);
    for (auto& row : lo.rows) {
        if (row.events.size() == 8) {
            // full contexts: the sum exists and is affinely pinned to one
            CHECK(row.sum_defined);
            CHECK(row.lp_max == 1);
            CHECK(row.by_affine);
        } else {
            // the 128 mixed-context quadruples: no total sum, all violated
            CHECK(!row.sum_defined);
            CHECK(row.violated);
            CHECK(row.lp_max == Rational(4, 3));
        }
    }
}

TEST_CASE("pinned closure polytope bounds every clique at one", "[k3]") {
    const auto& f = fix();
    CHECK(f.pinned.poly.nvars == 192);
    CHECK(f.pinned.poly.A.size() == 184);
    CHECK(f.pinned.pin_rows == 128);
    CHECK(f.pinned.poly.rank == 166);
    CHECK(f.pinned.new_pos.size() == 128);
    REQUIRE(f.pinned.doc.size() == 3);
    CHECK(f.pinned.doc[1].find("pin rows: 128") != std::string::npos);

    // every 109th clique plus one violated quadruple; the full sweep is the
    // [.slow] case below
    std::vector<std::vector<uint32_t>> sample;
    for (size_t i = 0; i < f.cliques.size(); i += 109) sample.push_back(f.cliques[i]);
    for (auto& cl : f.cliques)
        if (cl.size() == 4) {
            sample.push_back(cl);
            break;
        }
    auto lo = check_lo_violations_pinned(f.pinned, sample);
    CHECK(lo.max_lp == 1);
    CHECK(lo.violated_count == 0);
    CHECK(lo.lp_runs == 2);
    for (auto& row : lo.rows) CHECK(row.sum_defined);
}

TEST_CASE("full pinned inequality sweep", "[.slow][k3]") {
    const auto& f = fix();
    auto lo = check_lo_violations_pinned(f.pinned, f.cliques);
    CHECK(lo.rows.size() == 872);
    CHECK(lo.max_lp == 1);
    CHECK(lo.violated_count == 0);
    for (auto& row : lo.rows) CHECK(row.sum_defined);
}

TEST_CASE("which behaviours extend to the closure", "[k3]") {
    const auto& f = fix();
    auto du = extension_diagnostic(f.pinned, f.ss, uniform_state(f.ss));
    CHECK(du.extends);

    // a biased product of one-box behaviours extends
    PRState prod;
    prod.probs.resize(f.ss.ct.num_contexts);
    std::vector<std::vector<Rational>> box1{{Rational(1, 3), Rational(2, 3)},
                                            {Rational(1, 4), Rational(3, 4)}};
    for (size_t c = 0; c < f.ss.ct.num_contexts; ++c) {
        prod.probs[c].resize(f.ss.ct.ctx_sizes[c]);
        for (size_t o = 0; o < f.ss.ct.ctx_sizes[c]; ++o) {
            size_t rem = o;
            Rational p = 1;
            for (size_t i = 3; i-- > 0;) {
                size_t oc = rem % 2;
                rem /= 2;
                p *= box1[f.ss.ct.ctx_input[c][i]][oc];
            }
            prod.probs[c][o] = p;
        }
    }
    auto dp = extension_diagnostic(f.pinned, f.ss, prod);
    CHECK(dp.extends);

    // the 4/3 maximizer cannot extend: some pinned atom is forced negative
    std::vector<uint32_t> quad;
    for (auto lb : {"x0x0x0", "x1y1y0", "y0x1y1", "y1y0x1"})
        quad.push_back(atom_position(f.ss, lb));
    auto opt = maximize_linear(f.ss, indicator_objective(64, quad));
    LogicState st;
    st.atom_values = opt.argmax;
    auto da = extension_diagnostic(f.pinned, f.ss, logic_state_to_pr(f.ss, st));
    CHECK(!da.extends);
    REQUIRE(da.failed_atom.has_value());
    CHECK(*da.failed_atom == 104);
    CHECK(da.note.find("-1/3") != std::string::npos);
}

TEST_CASE("copies of the maximizing behaviour", "[k3]") {
    const auto& f = fix();
    std::vector<uint32_t> quad;
    for (auto lb : {"x0x0x0", "x1y1y0", "y0x1y1", "y1y0x1"})
        quad.push_back(atom_position(f.ss, lb));
    auto opt = maximize_linear(f.ss, indicator_objective(64, quad));
    LogicState st;
    st.atom_values = opt.argmax;
    PRState P = logic_state_to_pr(f.ss, st);

    auto one = check_lo_copies(f.ss, P, 1, 4, 1'000'000);
    CHECK(one.max_sum == Rational(4, 3));
    CHECK(one.violated);

    auto two = check_lo_copies(f.ss, P, 2, 16, 20'000'000);
    CHECK(two.support == 576);
    CHECK(two.max_sum == Rational(16, 9));
    CHECK(two.violated);
    CHECK(two.complete);

    auto pairs = check_lo_copies(f.ss, uniform_state(f.ss), 2, 2, 20'000'000);
    CHECK(pairs.support == 4096);
    CHECK(pairs.max_sum == Rational(1, 32));
    CHECK(!pairs.violated);
    CHECK(pairs.complete);
}

TEST_CASE("localized elements agree between the two structures", "[k3]") {
    const auto& f = fix();
    std::vector<std::vector<size_t>> subsets{{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
    for (const std::vector<size_t>& subset : subsets) {
        auto le = localized_elements(f.ea, subset);
        auto lo = localized_elements(f.omp, subset);
        CHECK(le == lo);
        for (auto& m : le) {
            CHECK(f.ea.is_element(m));
            CHECK(f.omp.is_element(m));
        }
    }
    CHECK(localized_elements(f.ea, {0, 1, 2}).size() == 126);
    CHECK(localized_elements(f.ea, {0}).size() == 6);
}
