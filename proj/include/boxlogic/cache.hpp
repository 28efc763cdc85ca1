#pragma once

// On-disk cache for generated structures. Plain text, hash-guarded: the
// element family of a large product takes minutes to close, the file reloads
// in well under a second and rebuilds the sum oracle and product metadata
// from the embedded model spec.

#include "generate.hpp"
#include "reports.hpp"
#include "structure.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace boxlogic {

struct CacheError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (size_t i = 16; i-- > 0;) {
        s[i] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

// Deterministic file name for a spec + closure rule pair, so callers can
// address the cache without tracking paths themselves.
inline std::string cache_basename(SumRule rule, const std::vector<BoxSpec>& boxes) {
    std::string spec = boxes_to_json(boxes).dump();
    std::string kind = rule == SumRule::EffectSum ? "ea" : "omp";
    return kind + "-k" + std::to_string(boxes.size()) + "-" + hex64(fnv1a64(spec)) + ".blcache";
}

template <size_t W>
void save_cache(const std::string& path, const Structure<W>& s, const GenerationReport& rep,
                const std::vector<BoxSpec>& boxes, const std::vector<std::string>& notes = {}) {
    std::ostringstream body;
    body << "boxlogic-cache 1\n";
    body << "kind " << kind_name(s.rule) << "\n";
    body << "k " << boxes.size() << "\n";
    body << "cells " << s.cells << "\n";
    body << "spec " << boxes_to_json(boxes).dump() << "\n";
    body << "elements " << s.elems.size() << "\n";
    body << "atoms " << s.atoms.size() << "\n";
    body << "rounds " << rep.closure_rounds << "\n";
    body << "masks:\n";
    for (const Bitset<W>& m : s.elems) body << m.to_hex() << "\n";
    body << "atom-indices:\n";
    for (size_t i = 0; i < s.atoms.size(); ++i) body << (i ? " " : "") << s.atoms[i];
    body << "\n";
    body << "notes:\n";
    for (const std::string& n : notes) body << n << "\n";

    std::string text = body.str();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CacheError("cannot write cache file: " + path);
    out << text << "hash " << hex64(fnv1a64(text)) << "\n";
    if (!out) throw CacheError("write failed: " + path);
}

template <size_t W>
struct CachedStructure {
    Structure<W> s;
    GenerationReport rep;
    std::vector<BoxSpec> boxes;
    std::vector<std::string> notes;
};

namespace detail_cache {

inline std::string expect_prefix(const std::string& line, const std::string& prefix,
                                 const std::string& path) {
    if (line.size() < prefix.size() || line.compare(0, prefix.size(), prefix) != 0)
        throw CacheError("malformed cache file " + path + ": expected '" + prefix + "...', got '" +
                         line + "'");
    return line.substr(prefix.size());
}

inline size_t parse_count(const std::string& text, const std::string& path) {
    try {
        size_t pos = 0;
        unsigned long long v = std::stoull(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("");
        return size_t(v);
    } catch (...) {
        throw CacheError("malformed cache file " + path + ": bad number '" + text + "'");
    }
}

} // namespace detail_cache

template <size_t W>
CachedStructure<W> load_cache(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CacheError("cannot open cache file: " + path);
    std::ostringstream raw;
    raw << in.rdbuf();
    std::string text = raw.str();

    // the final line carries the digest of everything before it
    size_t hash_pos = text.rfind("hash ");
    if (hash_pos == std::string::npos || (hash_pos != 0 && text[hash_pos - 1] != '\n'))
        throw CacheError("cache file " + path + " has no hash line");
    std::string body = text.substr(0, hash_pos);
    std::string stored = text.substr(hash_pos + 5);
    while (!stored.empty() && (stored.back() == '\n' || stored.back() == '\r')) stored.pop_back();
    if (stored != hex64(fnv1a64(body)))
        throw CacheError("cache file " + path + " is corrupt: hash mismatch");

    std::istringstream is(body);
    std::string line;
    auto next = [&]() -> std::string {
        if (!std::getline(is, line))
            throw CacheError("malformed cache file " + path + ": truncated");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    };
    using detail_cache::expect_prefix;
    using detail_cache::parse_count;

    if (next() != "boxlogic-cache 1")
        throw CacheError("cache file " + path + " has an unsupported header");
    std::string kind = expect_prefix(next(), "kind ", path);
    SumRule rule;
    if (kind == "effect-algebra") rule = SumRule::EffectSum;
    else if (kind == "orthoposet") rule = SumRule::UnionSum;
    else throw CacheError("cache file " + path + " has unknown kind '" + kind + "'");

    size_t k = parse_count(expect_prefix(next(), "k ", path), path);
    size_t cells = parse_count(expect_prefix(next(), "cells ", path), path);
    std::string spec_text = expect_prefix(next(), "spec ", path);
    size_t n_elems = parse_count(expect_prefix(next(), "elements ", path), path);
    size_t n_atoms = parse_count(expect_prefix(next(), "atoms ", path), path);
    size_t rounds = parse_count(expect_prefix(next(), "rounds ", path), path);

    std::vector<BoxSpec> boxes;
    try {
        boxes = boxes_from_json(Json::parse(spec_text));
    } catch (const std::exception& e) {
        throw CacheError("cache file " + path + " carries a bad spec: " + e.what());
    }
    if (boxes.size() != k)
        throw CacheError("cache file " + path + " is inconsistent: k != number of boxes");

    if (cells > Bitset<W>::capacity)
        throw CacheError("cache file " + path + " needs a wider mask type");

    CachedStructure<W> out;
    detail::Timer timer;
    Structure<W>& s = out.s;
    s.cells = cells;
    s.full = Bitset<W>::full(cells);
    s.rule = rule;

    if (next() != "masks:")
        throw CacheError("malformed cache file " + path + ": missing masks section");
    s.elems.reserve(n_elems);
    for (size_t i = 0; i < n_elems; ++i) {
        Bitset<W> m;
        try {
            m = Bitset<W>::from_hex(next());
        } catch (const std::exception& e) {
            throw CacheError("cache file " + path + " has a bad mask: " + e.what());
        }
        if (!m.subset_of(s.full))
            throw CacheError("cache file " + path + " has a mask outside the phase space");
        if (i && !(s.elems.back() < m))
            throw CacheError("cache file " + path + " masks are not in canonical order");
        s.elems.push_back(m);
    }
    if (s.elems.empty() || s.elems[0] != Bitset<W>{})
        throw CacheError("cache file " + path + " is missing the zero element");
    if (!s.is_element(s.full))
        throw CacheError("cache file " + path + " is missing the unit element");

    if (next() != "atom-indices:")
        throw CacheError("malformed cache file " + path + ": missing atom-indices section");
    {
        std::istringstream as(next());
        uint32_t v;
        while (as >> v) {
            if (v == 0 || v >= s.elems.size())
                throw CacheError("cache file " + path + " has an atom index out of range");
            if (!s.atoms.empty() && s.atoms.back() >= v)
                throw CacheError("cache file " + path + " atom indices are not ascending");
            s.atoms.push_back(v);
        }
        if (s.atoms.size() != n_atoms)
            throw CacheError("cache file " + path + " is inconsistent: atom count mismatch");
    }

    if (next() != "notes:")
        throw CacheError("malformed cache file " + path + ": missing notes section");
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        out.notes.push_back(line);
    }

    // rebuild product metadata and the sum oracle from the embedded spec,
    // then confirm the stored family really is generated by those atoms
    auto factors = std::make_shared<std::vector<Factor>>();
    for (const BoxSpec& b : boxes) factors->push_back(one_box_factor(b));
    auto infos = std::make_shared<std::vector<ProductAtomInfo>>(product_atom_infos(*factors));
    ProductLayout lay(*factors);
    if (lay.cells != cells)
        throw CacheError("cache file " + path + " is inconsistent: spec gives " +
                         std::to_string(lay.cells) + " cells, file says " + std::to_string(cells));
    std::vector<Bitset<W>> gen_masks = product_atom_masks<W>(*factors, *infos);

    MaskSet<W> atom_set;
    for (uint32_t i : s.atoms) atom_set.insert(s.elems[i]);
    for (const Bitset<W>& g : gen_masks) {
        if (!s.is_element(g))
            throw CacheError("cache file " + path +
                             " is inconsistent: a generating atom is not an element");
        if (!atom_set.contains(g))
            throw CacheError("cache file " + path +
                             " is inconsistent: a generating atom is not marked atomic");
    }
    if (rule == SumRule::EffectSum && s.atoms.size() != gen_masks.size())
        throw CacheError("cache file " + path +
                         " is inconsistent: effect-algebra atoms must equal the generators");

    s.factors = std::move(factors);
    s.atom_infos = std::move(infos);
    if (rule == SumRule::EffectSum)
        s.oracle = std::make_shared<DecompOracle<W>>(gen_masks, cells);

    out.rep.rule = rule;
    out.rep.element_count = s.elems.size();
    out.rep.atom_count = s.atoms.size();
    out.rep.closure_rounds = int(rounds);
    out.rep.wall_seconds = timer.seconds();
    out.boxes = std::move(boxes);
    return out;
}

} // namespace boxlogic
