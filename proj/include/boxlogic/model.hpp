#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace boxlogic {

// One measurement device: N inputs, each with its own finite outcome set.
// Outcome labels are kept for I/O; all math runs on dense indices.
struct BoxSpec {
    struct Input {
        std::string name;
        std::vector<std::string> outcomes;
    };
    std::vector<Input> inputs;

    size_t num_inputs() const { return inputs.size(); }
    size_t num_outcomes(size_t a) const { return inputs[a].outcomes.size(); }

    // |Gamma| = product over inputs of |U_a|: one cell per deterministic
    // input->output assignment
    size_t phase_cells() const {
        size_t n = 1;
        for (auto& in : inputs) {
            if (in.outcomes.empty()) throw std::invalid_argument("input with no outcomes");
            n *= in.outcomes.size();
        }
        return n;
    }

    void validate() const {
        if (inputs.empty()) throw std::invalid_argument("box needs at least one input");
        for (auto& in : inputs)
            if (in.outcomes.empty()) throw std::invalid_argument("input with no outcomes");
    }

    static BoxSpec binary() {
        return BoxSpec{{{"x", {"0", "1"}}, {"y", {"0", "1"}}}};
    }
    // same two inputs, three outcomes each
    static BoxSpec ternary_output() {
        return BoxSpec{{{"x", {"0", "1", "2"}}, {"y", {"0", "1", "2"}}}};
    }
};

// Cell indexing inside one box's phase space: lexicographic in the assignment
// tuple (gamma_1..gamma_N) with input 1 slowest.
struct OneBoxIndexing {
    std::vector<size_t> strides; // per input
    size_t cells = 1;

    explicit OneBoxIndexing(const BoxSpec& spec) {
        size_t n = spec.num_inputs();
        strides.assign(n, 1);
        size_t acc = 1;
        for (size_t a = n; a-- > 0;) {
            strides[a] = acc;
            acc *= spec.num_outcomes(a);
        }
        cells = acc;
    }

    // cells of the cylinder { gamma : gamma_a = alpha }
    std::vector<uint32_t> cylinder_cells(const BoxSpec& spec, size_t a, size_t alpha) const {
        std::vector<uint32_t> out;
        size_t n = spec.num_inputs();
        std::vector<size_t> idx(n, 0);
        for (size_t c = 0; c < cells; ++c) {
            size_t rem = c;
            bool hit = false;
            for (size_t j = 0; j < n; ++j) {
                size_t g = rem / strides[j];
                rem %= strides[j];
                if (j == a && g == alpha) hit = true;
            }
            if (hit) out.push_back(uint32_t(c));
        }
        return out;
    }
};

// A factor of a product model, reduced to what generation needs: its cell
// count and its atoms as cell-index lists with labels. 1-box factors carry
// (input, outcome) atom labels; composite factors (used by the associativity
// check) carry opaque labels.
struct Factor {
    size_t cells = 0;
    struct Atom {
        std::vector<uint32_t> cells;
        std::string label;
        // for 1-box factors: the (input, outcome) pair; (-1,-1) otherwise
        int input = -1;
        int outcome = -1;
    };
    std::vector<Atom> atoms;
    BoxSpec spec; // meaningful for 1-box factors only
    bool is_one_box = false;
};

inline Factor one_box_factor(const BoxSpec& spec) {
    spec.validate();
    Factor f;
    f.spec = spec;
    f.is_one_box = true;
    OneBoxIndexing ix(spec);
    f.cells = ix.cells;
    for (size_t a = 0; a < spec.num_inputs(); ++a)
        for (size_t alpha = 0; alpha < spec.num_outcomes(a); ++alpha) {
            Factor::Atom at;
            at.cells = ix.cylinder_cells(spec, a, alpha);
            at.label = spec.inputs[a].name + spec.inputs[a].outcomes[alpha];
            at.input = int(a);
            at.outcome = int(alpha);
            f.atoms.push_back(std::move(at));
        }
    return f;
}

// Product atom: one generating atom per factor. Product cells are indexed
// lexicographically with factor 1 slowest: idx = c_1*|G_2|*...*|G_k| + ...
struct ProductAtomInfo {
    std::vector<uint32_t> factor_atom; // index into each factor's atom list
    std::string label;                 // concatenated factor labels
};

struct ProductLayout {
    std::vector<size_t> factor_cells;
    std::vector<size_t> strides;
    size_t cells = 1;

    explicit ProductLayout(const std::vector<Factor>& factors) {
        size_t k = factors.size();
        factor_cells.resize(k);
        strides.assign(k, 1);
        for (size_t i = 0; i < k; ++i) factor_cells[i] = factors[i].cells;
        size_t acc = 1;
        for (size_t i = k; i-- > 0;) {
            strides[i] = acc;
            acc *= factor_cells[i];
        }
        cells = acc;
    }
};

// All product atoms in canonical construction order: factor-1 atom index
// slowest. The atom count is the product of per-factor atom counts.
inline std::vector<ProductAtomInfo> product_atom_infos(const std::vector<Factor>& factors) {
    size_t k = factors.size();
    size_t total = 1;
    for (auto& f : factors) total *= f.atoms.size();
    std::vector<ProductAtomInfo> out;
    out.reserve(total);
    std::vector<uint32_t> idx(k, 0);
    for (size_t n = 0; n < total; ++n) {
        ProductAtomInfo info;
        info.factor_atom = idx;
        for (size_t i = 0; i < k; ++i)
            info.label += factors[i].atoms[idx[i]].label;
        out.push_back(std::move(info));
        for (size_t i = k; i-- > 0;) {
            if (++idx[i] < factors[i].atoms.size()) break;
            idx[i] = 0;
        }
    }
    return out;
}

} // namespace boxlogic
