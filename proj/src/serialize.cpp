// Copyright 2026 The qfl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qfl/serialize.hpp"

#include <fstream>
#include <sstream>

#include "qfl/error.hpp"

namespace qfl {

namespace {

char symbol_from_key(const std::string &key, const char *what) {
    if (key.size() != 1) {
        throw ValidationError(std::string(what) + " symbol '" + key + "' must be a single character");
    }
    return key[0];
}

std::vector<std::string> string_list(const Json &j, const char *field) {
    if (!j.is_array()) {
        throw ValidationError(std::string("field '") + field + "' must be an array of strings");
    }
    std::vector<std::string> out;
    for (const auto &item : j) {
        if (!item.is_string()) {
            throw ValidationError(std::string("field '") + field + "' must be an array of strings");
        }
        out.push_back(item.get<std::string>());
    }
    return out;
}

const Json &require(const Json &j, const char *field) {
    if (!j.is_object() || !j.contains(field)) {
        throw ValidationError(std::string("missing field '") + field + "'");
    }
    return j.at(field);
}

std::string require_string(const Json &j, const char *field) {
    const Json &v = require(j, field);
    if (!v.is_string()) {
        throw ValidationError(std::string("field '") + field + "' must be a string");
    }
    return v.get<std::string>();
}

Json code_list(const std::vector<BasisCode> &codes, int qubits) {
    Json out = Json::array();
    for (BasisCode c : codes) {
        out.push_back(code_to_bits(c, qubits));
    }
    return out;
}

}  // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json &j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ValidationError("complex numbers must be [re, im] pairs");
    }
    return checked_complex(j[0].get<double>(), j[1].get<double>());
}

Json matrix_to_json(const ComplexMatrix &m) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            row.push_back(complex_to_json(m(r, c)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const Json &j) {
    if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) {
        throw ValidationError("matrices must be non-empty arrays of rows");
    }
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].size();
    std::vector<Complex> data;
    data.reserve(rows * cols);
    for (const auto &row : j) {
        if (!row.is_array() || row.size() != cols) {
            throw ValidationError("matrix rows must all have the same length");
        }
        for (const auto &z : row) {
            data.push_back(complex_from_json(z));
        }
    }
    return ComplexMatrix(rows, cols, std::move(data));
}

Json tag_to_json(const QfaClassTag &tag) {
    Json out;
    out["kind"] = to_string(tag.kind);
    out["error_side"] = to_string(tag.error_side);
    if (tag.margin) {
        out["margin"] = *tag.margin;
    }
    return out;
}

QfaClassTag tag_from_json(const Json &j) {
    QfaClassTag tag;
    tag.kind = parse_qfa_kind(require_string(j, "kind"));
    tag.error_side = parse_error_side(require_string(j, "error_side"));
    if (j.contains("margin") && !j.at("margin").is_null()) {
        if (!j.at("margin").is_number()) {
            throw ValidationError("class margin must be a number");
        }
        tag.margin = j.at("margin").get<double>();
    }
    validate(tag);
    return tag;
}

Json qfa_to_json(const Qfa &m, const std::optional<QfaClassTag> &tag) {
    const SemiQfa &semi = semi_of(m);
    const bool mm = std::holds_alternative<MmQfa>(m);
    Json out;
    out["type"] = mm ? "mm" : "mo";
    out["states"] = semi.states();
    Json alphabet = Json::array();
    for (char c : semi.alphabet()) {
        alphabet.push_back(std::string(1, c));
    }
    out["alphabet"] = std::move(alphabet);
    Json transitions = Json::object();
    // '#', input symbols, '$': the order a reader expects.
    for (char c : kStartSymbol + semi.alphabet() + kEndSymbol) {
        transitions[std::string(1, c)] = matrix_to_json(semi.unitary(c));
    }
    out["transitions"] = std::move(transitions);
    std::visit(
        [&](const auto &x) {
            out["initial"] = x.initial();
            out["accepting"] = x.accepting();
        },
        m);
    if (mm) {
        out["rejecting"] = std::get<MmQfa>(m).rejecting();
    }
    if (tag) {
        out["class"] = tag_to_json(*tag);
    }
    return out;
}

TaggedQfa qfa_from_json(const Json &j, double tol) {
    try {
        const std::string type = require_string(j, "type");
        if (type != "mo" && type != "mm") {
            throw ValidationError("automaton type must be \"mo\" or \"mm\", got \"" + type + "\"");
        }
        std::vector<std::string> states = string_list(require(j, "states"), "states");
        std::string alphabet;
        for (const auto &s : string_list(require(j, "alphabet"), "alphabet")) {
            alphabet += symbol_from_key(s, "alphabet");
        }
        const Json &t = require(j, "transitions");
        if (!t.is_object()) {
            throw ValidationError("field 'transitions' must be an object keyed by tape symbol");
        }
        std::map<char, ComplexMatrix> unitaries;
        for (const auto &[key, value] : t.items()) {
            unitaries.emplace(symbol_from_key(key, "transition"), matrix_from_json(value));
        }
        SemiQfa semi(std::move(states), std::move(alphabet), std::move(unitaries), tol);
        std::string initial = require_string(j, "initial");
        std::vector<std::string> accepting = string_list(require(j, "accepting"), "accepting");
        TaggedQfa out{type == "mo" ? Qfa{MoQfa(std::move(semi), std::move(initial), std::move(accepting))}
                                   : Qfa{MmQfa(std::move(semi), std::move(initial), std::move(accepting),
                                               string_list(require(j, "rejecting"), "rejecting"))},
                      std::nullopt};
        if (type == "mo" && j.contains("rejecting") && !j.at("rejecting").empty()) {
            throw ValidationError("measure-once automata have no rejecting states");
        }
        if (j.contains("class")) {
            out.tag = tag_from_json(j.at("class"));
        }
        return out;
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("malformed automaton JSON: ") + e.what());
    }
}

Json mapping_to_json(const StateMapping &m) {
    Json out;
    out["qubits"] = m.qubits;
    out["kind"] = to_string(m.kind);
    Json assignment = Json::object();
    for (std::size_t i = 0; i < m.states.size(); ++i) {
        assignment[m.states[i]] = code_to_bits(m.codes[i], m.qubits);
    }
    out["assignment"] = std::move(assignment);
    return out;
}

StateMapping mapping_from_json(const Json &j) {
    try {
        StateMapping m;
        const Json &q = require(j, "qubits");
        if (!q.is_number_integer()) {
            throw ValidationError("mapping 'qubits' must be an integer");
        }
        m.qubits = q.get<int>();
        m.kind = parse_mapping_kind(require_string(j, "kind"));
        const Json &a = require(j, "assignment");
        if (!a.is_object()) {
            throw ValidationError("mapping 'assignment' must be an object");
        }
        for (const auto &[state, bits] : a.items()) {
            if (!bits.is_string() || bits.get<std::string>().size() != static_cast<std::size_t>(m.qubits)) {
                throw ValidationError("code of state '" + state + "' must be a " + std::to_string(m.qubits) +
                                      "-character bit string");
            }
            m.states.push_back(state);
            m.codes.push_back(bits_to_code(bits.get<std::string>()));
        }
        m.validate();
        return m;
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("malformed mapping JSON: ") + e.what());
    }
}

Json equ_params_to_json(const EquParams &p) {
    Json out;
    out["k"] = p.k;
    out["theta"] = p.theta;
    out["phi"] = p.phi;
    out["c_k"] = p.c_k;
    out["margin_bound"] = p.margin_bound;
    out["margin"] = p.margin;
    return out;
}

Json mod_p_coefficients_to_json(const ModPCoefficients &c) {
    Json out;
    out["p"] = c.p;
    out["d"] = c.d();
    out["coefficients"] = c.coefficients;
    out["max_non_member_probability"] = c.max_non_member_probability;
    return out;
}

std::map<char, std::string> homomorphism_from_json(const Json &j) {
    if (!j.is_object()) {
        throw ValidationError("a homomorphism must be a JSON object such as {\"b\": \"aa\"}");
    }
    std::map<char, std::string> out;
    for (const auto &[key, value] : j.items()) {
        if (!value.is_string()) {
            throw ValidationError("homomorphism image of '" + key + "' must be a string");
        }
        out.emplace(symbol_from_key(key, "homomorphism"), value.get<std::string>());
    }
    return out;
}

Json circuit_to_json(const CircuitIR &ir) {
    Json out;
    out["qubits"] = ir.qubits;
    out["initial"] = code_to_bits(ir.initial_code, ir.qubits);
    out["mapping"] = mapping_to_json(ir.mapping);
    Json measure;
    measure["mode"] = ir.measure.per_block ? "per_block" : "final";
    measure["accepting"] = code_list(ir.measure.accepting, ir.qubits);
    if (ir.measure.per_block) {
        measure["rejecting"] = code_list(ir.measure.rejecting, ir.qubits);
    }
    out["measure"] = std::move(measure);
    Json blocks = Json::array();
    for (const auto &b : ir.blocks) {
        Json jb;
        jb["label"] = std::string(1, b.label);
        jb["unitary"] = matrix_to_json(b.unitary);
        if (b.factors) {
            Json factors = Json::array();
            for (const auto &f : *b.factors) {
                Json jf;
                jf["indices"] = Json::array({f.i, f.j});
                jf["u"] = matrix_to_json(f.u);
                factors.push_back(std::move(jf));
            }
            jb["two_level_factors"] = std::move(factors);
        }
        blocks.push_back(std::move(jb));
    }
    out["blocks"] = std::move(blocks);
    return out;
}

Json parse_json(const std::string &text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw IoError(std::string("malformed JSON: ") + e.what());
    }
}

Json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return Json::parse(buf.str());
    } catch (const nlohmann::json::parse_error &e) {
        throw IoError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

void write_text_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << text;
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

std::string dump(const Json &j) { return j.dump(2) + "\n"; }

}  // namespace qfl
