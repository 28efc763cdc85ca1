// Acceptance gate: eleven end-to-end checks over freshly generated
// structures, one PASS/FAIL line each. The exit code is the number of failed
// criteria, so a clean run exits 0.
//
// Criterion 7 (order determination by point-mass states for all three box
// counts) fails by design of this library's faithful construction: at three
// boxes the sum-rule structure contains 1792 inclusion pairs whose set
// difference is not a member, so no state family can order them through the
// sum relation. The failure is reported with a witness and analysis instead
// of being papered over; the union-closure companion passes the same sweep.

#include <boxlogic/axioms.hpp>
#include <boxlogic/generate.hpp>
#include <boxlogic/lo.hpp>
#include <boxlogic/states.hpp>

#include <chrono>
#include <cstdio>
#include <random>
#include <set>
#include <string>

using namespace boxlogic;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double secs_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void criterion(int n, bool ok, const std::string& text) {
    std::printf("%s criterion %2d: %s\n", ok ? "PASS" : "FAIL", n, text.c_str());
    if (!ok) ++failures;
}

std::string fmt(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2fs", s);
    return buf;
}

bool axioms_pass(const std::vector<AxiomReport>& rs) {
    for (auto& r : rs)
        if (!r.pass) return false;
    return true;
}

// order reversal p <= q  =>  ~q <= ~p, exhaustively for small structures and
// on a strided sample for the large ones
bool order_reversal_holds(const Structure<1>& s, size_t stride, bool* sampled) {
    *sampled = stride > 1;
    for (uint32_t i = 0; i < s.size(); i += stride)
        for (uint32_t j = 0; j < s.size(); j += stride) {
            if (!s.leq_member(i, j)) continue;
            if (!s.leq_member(s.comp_index(j), s.comp_index(i))) return false;
        }
    return true;
}

} // namespace

int main() {
    std::vector<BoxSpec> bin1{BoxSpec::binary()};
    std::vector<BoxSpec> bin2(2, BoxSpec::binary());
    std::vector<BoxSpec> bin3(3, BoxSpec::binary());

    // ----- 1: one-box binary logic
    auto t0 = Clock::now();
    auto [one, one_rep] = one_box_logic<1>(BoxSpec::binary());
    bool c1 = one.size() == 6 && one.atoms.size() == 4;
    c1 = c1 && axioms_pass(check_orthoposet(one));
    auto lat1 = check_lattice_and_boolean(one);
    c1 = c1 && lat1.is_lattice;
    double t1 = secs_since(t0);
    c1 = c1 && t1 < 1.0;
    criterion(1, c1,
              "one-box binary logic: 6 elements, 4 atoms, poset laws hold, lattice (" +
                  fmt(t1) + ", limit 1s)");

    // ----- 2: three-box sum-rule generation
    t0 = Clock::now();
    auto [ea, ea_rep] = box_product<1>(bin3, SumRule::EffectSum);
    double t2 = secs_since(t0);
    bool c2 = ea.size() == 28886 && ea.atoms.size() == 64 && t2 < 300.0;
    criterion(2, c2,
              "three-box sum structure: " + std::to_string(ea.size()) + " elements, " +
                  std::to_string(ea.atoms.size()) + " atoms (" + fmt(t2) + ", limit 300s)");

    // ----- 3: three-box union closure and localized elements
    auto [omp, omp_rep] = box_product<1>(bin3, SumRule::UnionSum);
    bool c3 = omp.size() == 29142 && omp.atoms.size() == 192;
    size_t shared = 0;
    for (uint32_t ai : ea.atoms) {
        auto k = omp.index_of(ea.elems[ai]);
        if (k && std::binary_search(omp.atoms.begin(), omp.atoms.end(), *k)) ++shared;
    }
    c3 = c3 && shared == 64;
    bool localized_same = true;
    std::vector<std::vector<size_t>> subsets{{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
    for (auto& sub : subsets)
        localized_same = localized_same && localized_elements(ea, sub) == localized_elements(omp, sub);
    c3 = c3 && localized_same;
    criterion(3, c3,
              "three-box union closure: " + std::to_string(omp.size()) + " elements, " +
                  std::to_string(omp.atoms.size()) + " atoms; all 64 sum-structure atoms kept; "
                  "localized elements identical across every box subset");

    // ----- 4: the coherence frontier
    auto [two, two_rep] = box_product<1>(bin2, SumRule::EffectSum);
    bool k2_coherent = check_coherence_law(two).pass && axioms_pass(check_orthoposet(two));
    bool k3_incoherent = !check_coherence_law(ea).pass;

    // resolve the four events by their generator labels
    uint32_t q[4];
    {
        const char* names[4] = {"x0x0x0", "x1y1y0", "y0x1y1", "y1y0x1"};
        const auto& infos = *ea.atom_infos;
        auto masks = product_atom_masks<1>(*ea.factors, infos); // parallel to infos
        for (int a = 0; a < 4; ++a) {
            q[a] = UINT32_MAX;
            for (size_t t = 0; t < infos.size(); ++t)
                if (infos[t].label == names[a]) {
                    q[a] = ea.require_index(masks[t]);
                    break;
                }
        }
    }
    bool quad_ok = q[0] != UINT32_MAX && q[1] != UINT32_MAX && q[2] != UINT32_MAX &&
                   q[3] != UINT32_MAX;
    if (quad_ok) {
        for (int a = 0; a < 4 && quad_ok; ++a)
            for (int b = a + 1; b < 4 && quad_ok; ++b) quad_ok = ea.sum_defined(q[a], q[b]);
        quad_ok = quad_ok && ea.nsum_defined({q[0], q[1], q[2]});
        quad_ok = quad_ok && ea.nsum_defined({q[2], q[3]});
        quad_ok = quad_ok && ea.nsum_defined({q[0], q[1], q[3]});
        quad_ok = quad_ok && !ea.nsum_defined({q[0], q[1], q[2], q[3]});
    }
    bool c4 = lat1.is_lattice && k2_coherent && k3_incoherent && quad_ok;
    criterion(4, c4,
              "classification: one box is a lattice, two boxes satisfy the poset laws with "
              "coherence, three boxes break coherence on the four named events "
              "(pairwise and the three listed sums exist, the quadruple sum does not)");

    // ----- 5: the four-event objective maximizes to exactly 4/3
    t0 = Clock::now();
    auto ss3 = build_state_space(ea);
    std::vector<uint32_t> quadpos;
    {
        const char* names[4] = {"x0x0x0", "x1y1y0", "y0x1y1", "y1y0x1"};
        const auto& infos = *ea.atom_infos;
        for (auto* nm : names)
            for (size_t t = 0; t < infos.size(); ++t)
                if (infos[t].label == nm) quadpos.push_back(ss3.ct.pos_of_info[t]);
    }
    auto opt = maximize_linear(ss3, indicator_objective(64, quadpos));
    bool c5 = quadpos.size() == 4 && opt.value == Rational(4, 3);
    criterion(5, c5,
              "linear program over the three-box no-signaling polytope: four-event objective "
              "reaches exactly 4/3 (" + fmt(secs_since(t0)) + ")");

    // ----- 6: behaviour round trips on seeded random rational states
    t0 = Clock::now();
    auto ss1 = build_state_space(one);
    auto ss2 = build_state_space(two);
    bool c6 = ss1.proof.all_vanish && ss2.proof.all_vanish && ss3.proof.all_vanish;
    std::mt19937_64 rng(20260821);
    auto round_trips = [&](const StateSpace<1>& ss) {
        for (int n = 0; n < 1000; ++n) {
            PRState P = sample_ns_state(ss, rng);
            LogicState st = pr_to_logic_state(ss, P);
            if (!(logic_state_to_pr(ss, st) == P)) return false;
        }
        return true;
    };
    c6 = c6 && round_trips(ss1) && round_trips(ss2) && round_trips(ss3);
    criterion(6, c6,
              "probability-table <-> state round trip is the identity on 1000 seeded random "
              "rational no-signaling behaviours per box count, and every multi-decomposition "
              "certificate agrees (" + fmt(secs_since(t0)) + ")");

    // ----- 7: order determination by point-mass states (honest failure)
    auto od1 = check_order_determining_classical(one);
    auto od2 = check_order_determining_classical(two);
    auto od3 = check_order_determining_classical(ea);
    bool c7 = od1.pass && od2.pass && od3.pass;
    criterion(7, c7,
              "point-mass states determine the order at one, two, AND three boxes "
              "(exhaustive over all element pairs)");
    if (!od3.pass) {
        std::printf("        one box: %s, two boxes: %s, three boxes: FAIL with %zu pairs\n",
                    od1.pass ? "pass" : "fail", od2.pass ? "pass" : "fail", od3.failing_pairs);
        if (od3.witness) {
            uint32_t wi = od3.witness->first, wj = od3.witness->second;
            Bitset<1> d = ea.elems[wj] - ea.elems[wi];
            std::printf("        witness: elements 0x%s < 0x%s as sets (every point-mass state "
                        "orders them), but the difference 0x%s is not a member, so no sum "
                        "produces the larger from the smaller\n",
                        ea.elems[wi].to_hex().c_str(), ea.elems[wj].to_hex().c_str(),
                        d.to_hex().c_str());
        }
        // all failing differences are exactly the closure-only atoms
        auto inc = inclusion_sweep(ea, true);
        std::set<std::string> diffs;
        for (auto& [i, j] : inc.violating) diffs.insert((ea.elems[j] - ea.elems[i]).to_hex());
        std::set<std::string> closure_only;
        for (uint32_t ai : omp.atoms)
            if (!ea.is_element(omp.elems[ai])) closure_only.insert(omp.elems[ai].to_hex());
        std::printf("        analysis: the %zu failing pairs use %zu distinct differences, "
                    "exactly the %zu atoms the union closure adds; the closure itself %s the "
                    "same sweep\n",
                    od3.failing_pairs, diffs.size(), closure_only.size(),
                    check_order_determining_classical(omp).pass ? "passes" : "fails");
        if (diffs != closure_only)
            std::printf("        (unexpected: difference set does not match the closure atoms)\n");
    }

    // ----- 8: product associativity on mixed box types
    t0 = Clock::now();
    GenerateOptions cap4m;
    cap4m.max_elements = 4'000'000;
    auto assoc = check_product_associativity<3>(BoxSpec::binary(), BoxSpec::binary(),
                                                BoxSpec::ternary_output(), cap4m);
    bool c8 = assoc.pass && assoc.left_elements == 2'129'374 &&
              assoc.right_elements == 2'129'374 && assoc.atom_count == 96;
    criterion(8, c8,
              "product associativity on (binary, binary, ternary-output): both association "
              "orders give identical element sets, " + std::to_string(assoc.left_elements) +
                  " elements over 96 atoms (" + fmt(secs_since(t0)) + ")");

    // ----- 9: even-cardinality fixtures
    Structure<1> e2 = even_set_logic<1>(2);
    Structure<1> e4 = even_set_logic<1>(4);
    auto late2 = check_lattice_and_boolean(e2);
    auto late4 = check_lattice_and_boolean(e4);
    bool c9 = e2.size() == 2 && late2.is_lattice && late2.is_boolean;
    c9 = c9 && e4.size() == 8 && late4.is_lattice && !late4.is_boolean &&
         axioms_pass(check_orthoposet(e4));
    criterion(9, c9,
              "even-cardinality fixtures: two points give a Boolean algebra, four points an "
              "8-element orthomodular lattice that is not Boolean");

    // ----- 10: axiom suites across the whole matrix
    bool c10 = true;
    std::string sampled_note;
    {
        BoxSpec mixed{{{"x", {"0", "1"}}, {"y", {"0", "1", "2"}}}};
        std::vector<std::pair<std::string, const Structure<1>*>> matrix;
        auto [one_t, r1t] = one_box_logic<1>(BoxSpec::ternary_output());
        auto [one_m, r1m] = one_box_logic<1>(mixed);
        auto [two_u, r2u] = box_product<1>(bin2, SumRule::UnionSum);
        matrix = {{"one-box binary", &one},       {"one-box ternary-output", &one_t},
                  {"one-box mixed", &one_m},      {"two-box sum", &two},
                  {"two-box union", &two_u},      {"three-box sum", &ea},
                  {"three-box union", &omp}};
        for (auto& [name, sp] : matrix) {
            const Structure<1>& s = *sp;
            bool ok = axioms_pass(check_effect_algebra(s)) && check_atomistic(s).pass;
            for (uint32_t i = 0; i < s.size() && ok; ++i)
                ok = s.comp(s.comp(s.elems[i])) == s.elems[i];
            size_t stride = s.size() <= 1000 ? 1 : 17;
            bool sampled = false;
            ok = ok && order_reversal_holds(s, stride, &sampled);
            if (sampled) sampled_note = " (order reversal strided on the three-box structures)";
            if (!ok) {
                std::printf("        axiom suite failed on: %s\n", name.c_str());
                c10 = false;
            }
        }
        // closure invariance: permuted atom lists and a two-worker run agree
        std::vector<Factor> factors{one_box_factor(BoxSpec::binary()),
                                    one_box_factor(BoxSpec::binary())};
        auto infos = product_atom_infos(factors);
        ProductLayout lay(factors);
        auto masks = product_atom_masks<1>(factors, infos);
        std::vector<Bitset<1>> rev(masks.rbegin(), masks.rend());
        auto [sperm, rp] = generate_effect_algebra<1>(std::move(rev), lay.cells);
        c10 = c10 && sperm.elems == two.elems;
        GenerateOptions two_workers;
        two_workers.threads = 2;
        auto [spar, rpar] = box_product<1>(bin3, SumRule::EffectSum, two_workers);
        c10 = c10 && spar.elems == ea.elems;
    }
    criterion(10, c10,
              "axiom suites pass on all seven generated structures: sum axioms, complement "
              "involution, order reversal, atomisticity; closure invariant under atom "
              "permutation and worker count" + sampled_note);

    // ----- 11: closure equals the brute-force characterization
    bool c11 = true;
    for (size_t k : {size_t(1), size_t(2)}) {
        std::vector<BoxSpec> boxes(k, BoxSpec::binary());
        std::vector<Factor> factors;
        for (auto& b : boxes) factors.push_back(one_box_factor(b));
        auto infos = product_atom_infos(factors);
        ProductLayout lay(factors);
        auto masks = product_atom_masks<1>(factors, infos);
        std::vector<uint64_t> atom_words;
        for (auto& m : masks) atom_words.push_back(m.w[0]);
        auto brute = characterization_elements(atom_words, lay.cells);
        const Structure<1>& s = k == 1 ? one : two;
        c11 = c11 && brute.size() == s.size();
        for (size_t i = 0; c11 && i < brute.size(); ++i) c11 = brute[i] == s.elems[i].w[0];
    }
    criterion(11, c11,
              "closure output equals the brute-force power-set characterization at one and two "
              "boxes (64 cells at three boxes puts the 2^64 scan out of reach, so that case is "
              "skipped)");

    std::printf("%d of 11 criteria passed\n", 11 - failures);
    return failures;
}
