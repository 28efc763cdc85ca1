#pragma once

// JSON serialization for box specs, behaviours, and check reports, built on
// nlohmann::ordered_json so emitted documents are byte-stable across runs.

#include "axioms.hpp"
#include "generate.hpp"
#include "lo.hpp"
#include "model.hpp"
#include "states.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace boxlogic {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Box specs
// ---------------------------------------------------------------------------

inline Json box_spec_to_json(const BoxSpec& b) {
    Json inputs = Json::array();
    for (const auto& in : b.inputs) {
        Json outs = Json::array();
        for (const auto& o : in.outcomes) outs.push_back(o);
        inputs.push_back(Json{{"name", in.name}, {"outcomes", outs}});
    }
    return Json{{"inputs", inputs}};
}

inline BoxSpec box_spec_from_json(const Json& j) {
    BoxSpec b;
    if (!j.contains("inputs") || !j["inputs"].is_array())
        throw std::invalid_argument("box spec needs an 'inputs' array");
    for (const auto& in : j["inputs"]) {
        BoxSpec::Input inp;
        inp.name = in.at("name").get<std::string>();
        for (const auto& o : in.at("outcomes")) inp.outcomes.push_back(o.get<std::string>());
        b.inputs.push_back(std::move(inp));
    }
    b.validate();
    return b;
}

inline Json boxes_to_json(const std::vector<BoxSpec>& boxes) {
    Json arr = Json::array();
    for (const auto& b : boxes) arr.push_back(box_spec_to_json(b));
    return Json{{"boxes", arr}};
}

inline std::vector<BoxSpec> boxes_from_json(const Json& j) {
    if (!j.contains("boxes") || !j["boxes"].is_array() || j["boxes"].empty())
        throw std::invalid_argument("model spec needs a nonempty 'boxes' array");
    std::vector<BoxSpec> out;
    for (const auto& b : j["boxes"]) out.push_back(box_spec_from_json(b));
    return out;
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    Json j;
    in >> j;
    return j;
}

// ---------------------------------------------------------------------------
// Behaviours
// ---------------------------------------------------------------------------

// One entry per context: the input names and a map from comma-joined outcome
// labels to exact probabilities. Zero entries are kept so a document is a
// complete table.
inline Json pr_state_to_json(const ContextTable& ct, const PRState& P) {
    Json contexts = Json::array();
    for (size_t c = 0; c < ct.num_contexts; ++c) {
        Json inputs = Json::array();
        for (size_t i = 0; i < ct.k; ++i)
            inputs.push_back(ct.boxes[i].inputs[ct.ctx_input[c][i]].name);
        Json probs = Json::object();
        for (size_t o = 0; o < ct.ctx_sizes[c]; ++o) {
            std::string key;
            size_t rem = o;
            std::vector<size_t> digits(ct.k);
            for (size_t i = ct.k; i-- > 0;) {
                size_t radix = ct.boxes[i].num_outcomes(ct.ctx_input[c][i]);
                digits[i] = rem % radix;
                rem /= radix;
            }
            for (size_t i = 0; i < ct.k; ++i) {
                if (i) key += ",";
                key += ct.boxes[i].inputs[ct.ctx_input[c][i]].outcomes[digits[i]];
            }
            probs[key] = rat_frac(P.probs[c][o]);
        }
        contexts.push_back(Json{{"inputs", inputs}, {"probs", probs}});
    }
    return Json{{"contexts", contexts}};
}

inline PRState pr_state_from_json(const ContextTable& ct, const Json& j) {
    if (!j.contains("contexts") || !j["contexts"].is_array())
        throw std::invalid_argument("behaviour needs a 'contexts' array");
    PRState P;
    P.probs.resize(ct.num_contexts);
    for (size_t c = 0; c < ct.num_contexts; ++c) P.probs[c].assign(ct.ctx_sizes[c], Rational(0));
    std::vector<char> seen(ct.num_contexts, 0);

    for (const auto& cj : j["contexts"]) {
        const auto& inames = cj.at("inputs");
        if (!inames.is_array() || inames.size() != ct.k)
            throw std::invalid_argument("context needs one input name per box");
        std::vector<uint32_t> inputs(ct.k);
        for (size_t i = 0; i < ct.k; ++i) {
            std::string name = inames[i].get<std::string>();
            uint32_t idx = UINT32_MAX;
            for (uint32_t a = 0; a < ct.boxes[i].num_inputs(); ++a)
                if (ct.boxes[i].inputs[a].name == name) { idx = a; break; }
            if (idx == UINT32_MAX)
                throw std::invalid_argument("unknown input '" + name + "' for box " +
                                            std::to_string(i + 1));
            inputs[i] = idx;
        }
        size_t c = ct.context_index(inputs);
        if (seen[c]) throw std::invalid_argument("duplicate context in behaviour");
        seen[c] = 1;
        for (const auto& [key, val] : cj.at("probs").items()) {
            // split the comma-joined outcome labels
            std::vector<std::string> parts;
            std::string cur;
            for (char ch : key) {
                if (ch == ',') {
                    parts.push_back(cur);
                    cur.clear();
                } else {
                    cur += ch;
                }
            }
            parts.push_back(cur);
            if (parts.size() != ct.k)
                throw std::invalid_argument("outcome key '" + key + "' needs one label per box");
            std::vector<uint32_t> outs(ct.k);
            for (size_t i = 0; i < ct.k; ++i) {
                const auto& labels = ct.boxes[i].inputs[inputs[i]].outcomes;
                uint32_t idx = UINT32_MAX;
                for (uint32_t o = 0; o < labels.size(); ++o)
                    if (labels[o] == parts[i]) { idx = o; break; }
                if (idx == UINT32_MAX)
                    throw std::invalid_argument("unknown outcome '" + parts[i] + "' in key '" +
                                                key + "'");
                outs[i] = idx;
            }
            P.probs[c][ct.outcome_index(inputs, outs)] = rat_parse(val.get<std::string>());
        }
    }
    for (size_t c = 0; c < ct.num_contexts; ++c)
        if (!seen[c]) throw std::invalid_argument("behaviour is missing a context");
    return P;
}

// ---------------------------------------------------------------------------
// Check reports
// ---------------------------------------------------------------------------

inline Json axiom_report_to_json(const AxiomReport& r) {
    Json w = Json::array();
    for (uint32_t i : r.witness) w.push_back(i);
    return Json{{"axiom", r.axiom}, {"pass", r.pass}, {"witness", w}};
}

inline Json axiom_reports_to_json(const std::vector<AxiomReport>& rs) {
    Json arr = Json::array();
    for (const auto& r : rs) arr.push_back(axiom_report_to_json(r));
    return arr;
}

inline Json coherence_to_json(const CoherenceReport& r) {
    Json w = Json::array();
    for (uint32_t i : r.witness) w.push_back(i);
    return Json{{"pass", r.pass},
                {"witness", w},
                {"bound", r.bound},
                {"families_checked", r.families_checked}};
}

inline Json lattice_to_json(const LatticeReport& r) {
    Json lw = Json::array(), bw = Json::array();
    for (uint32_t i : r.lattice_witness) lw.push_back(i);
    for (uint32_t i : r.boolean_witness) bw.push_back(i);
    return Json{{"is_lattice", r.is_lattice},
                {"is_boolean", r.is_boolean},
                {"lattice_witness", lw},
                {"boolean_witness", bw},
                {"exhaustive", r.exhaustive}};
}

inline Json order_det_to_json(const OrderDetReport& r) {
    Json j{{"pass", r.pass},
           {"failing_pairs", r.failing_pairs},
           {"state_distinguishing", r.state_distinguishing}};
    if (r.witness) j["witness"] = Json::array({r.witness->first, r.witness->second});
    else j["witness"] = Json::array();
    return j;
}

inline Json generation_to_json(const GenerationReport& r) {
    return Json{{"elements", r.element_count},
                {"atoms", r.atom_count},
                {"rounds", r.closure_rounds},
                {"seconds", r.wall_seconds},
                {"kind", kind_name(r.rule)}};
}

inline Json welldef_to_json(const WellDefinednessProof& p) {
    return Json{{"multi_certificate_elements", p.multi_elements},
                {"certificates", p.certificates},
                {"max_certificates", p.max_certificates},
                {"distinct_differences", p.distinct_diffs},
                {"all_vanish", p.all_vanish}};
}

// The report schema for clique inequalities: exactly the four documented keys
// per row.
inline Json lo_report_to_json(const LOReport& r) {
    Json arr = Json::array();
    for (const auto& row : r.rows) {
        Json ev = Json::array();
        for (uint32_t v : row.events) ev.push_back(v);
        arr.push_back(Json{{"events", ev},
                           {"lp_max", rat_frac(row.lp_max)},
                           {"violated", row.violated},
                           {"sum_defined", row.sum_defined}});
    }
    return arr;
}

inline Json copies_to_json(const CopiesReport& r) {
    Json w = Json::array();
    for (size_t i = 0; i + r.copies <= r.witness.size(); i += r.copies) {
        Json ev = Json::array();
        for (size_t c = 0; c < r.copies; ++c) ev.push_back(r.witness[i + c]);
        w.push_back(ev);
    }
    return Json{{"copies", r.copies},       {"support", r.support},
                {"cliques_checked", r.cliques_checked}, {"max_sum", rat_frac(r.max_sum)},
                {"violated", r.violated},   {"complete", r.complete},
                {"witness", w}};
}

} // namespace boxlogic
