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

#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qfl/automata.hpp"
#include "qfl/blocks.hpp"
#include "qfl/compose.hpp"
#include "qfl/error.hpp"
#include "qfl/experiment.hpp"
#include "qfl/mapping.hpp"
#include "qfl/noisesim.hpp"
#include "qfl/serialize.hpp"
#include "qfl/transpile.hpp"

namespace qfl::cli {

namespace {

namespace fs = std::filesystem;

struct Globals {
    std::uint64_t seed = 0;
    double tol = kUnitaryTol;
    std::string out;
};

// Writes the primary result to --out when given, else to the output stream.
void emit(const Globals &g, std::ostream &out, const std::string &text) {
    if (g.out.empty()) {
        out << text;
    } else {
        write_text_file(g.out, text);
    }
}

TaggedQfa load_machine(const std::string &path, const Globals &g) {
    Json j;
    if (path.empty() || path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        j = parse_json(buf.str());
    } else {
        j = read_json_file(path);
    }
    return qfa_from_json(j, g.tol);
}

// Tag recorded in the file, or the strongest class the sample checks confirm.
QfaClassTag tag_of(const TaggedQfa &t) {
    if (t.tag) {
        return *t.tag;
    }
    QfaClassTag tag = default_tag(t.machine);
    if (const auto *mm = std::get_if<MmQfa>(&t.machine)) {
        const auto sample = default_sample(mm->semi().alphabet());
        if (check_co_end_decisive(*mm, sample)) {
            tag.kind = QfaKind::kMmCoEndDecisive;
        } else if (check_end_decisive(*mm, sample)) {
            tag.kind = QfaKind::kMmEndDecisive;
        }
    }
    return tag;
}

std::optional<double> margin_if_valid(double m) {
    if (m > 0.0 && m < 1.0) {
        return m;
    }
    return std::nullopt;
}

fs::path sidecar_path(const std::string &out) {
    fs::path p(out);
    p.replace_extension();
    p += ".params.json";
    return p;
}

void emit_block(const Globals &g, std::ostream &out, const Qfa &m, const QfaClassTag &tag,
                const std::optional<Json> &params, const std::string &params_path) {
    emit(g, out, dump(qfa_to_json(m, tag)));
    if (!params) {
        return;
    }
    if (!params_path.empty()) {
        write_text_file(params_path, dump(*params));
    } else if (!g.out.empty()) {
        write_text_file(sidecar_path(g.out), dump(*params));
    }
}

StateMapping resolve_mapping(const Qfa &m, const std::string &kind, const std::string &file,
                             std::optional<int> qubits) {
    if (!file.empty()) {
        StateMapping mapping = mapping_from_json(read_json_file(file));
        // Files may list states in any order; realign with the machine.
        StateMapping aligned = mapping;
        aligned.states = semi_of(m).states();
        aligned.codes.clear();
        for (const auto &s : aligned.states) {
            aligned.codes.push_back(mapping.code_of(s));
        }
        if (aligned.states.size() != mapping.states.size()) {
            throw ValidationError("mapping file names states the automaton does not have");
        }
        return aligned;
    }
    return make_mapping(m, parse_mapping_kind(kind), qubits);
}

std::string format_probability(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", p);
    return buf;
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"qfl: quantum finite automata construction, composition and noisy simulation"};
    app.fallthrough();
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "Seed for coefficient search, noise and experiments");
    app.add_option("--tol", g.tol, "Unitarity tolerance used when loading automata")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "Write the primary output here instead of stdout (experiment: directory)");

    // block
    auto *block = app.add_subcommand("block", "Build a basic block automaton");
    block->require_subcommand(1);
    std::string params_path;
    block->add_option("--params", params_path, "Parameter sidecar path (default: <out>.params.json)");

    int mod_n = 0;
    auto *block_mod = block->add_subcommand("mod", "Two-state MO-QFA for MOD_n");
    block_mod->add_option("--n", mod_n, "Modulus")->required();

    int mod_p = 0;
    std::optional<int> mod_d;
    auto *block_modp = block->add_subcommand("modp", "Multi-block MO-QFA for MOD_p with margin 1/8");
    block_modp->add_option("--p", mod_p, "Prime modulus")->required();
    block_modp->add_option("--d", mod_d, "Initial number of rotation blocks");

    int equ_k = 0;
    std::optional<double> theta;
    std::optional<double> phi;
    bool optimal = false;
    auto *block_equ = block->add_subcommand("equ", "Four-state MM-QFA for EQU_k = {a^k}");
    block_equ->add_option("--k", equ_k, "Target length")->required();
    auto *theta_opt = block_equ->add_option("--theta", theta, "Rotation angle of U_# in (0, pi/2)");
    auto *phi_opt = block_equ->add_option("--phi", phi, "Rotation angle of U_a in (0, pi/2)");
    auto *optimal_flag = block_equ->add_flag("--optimal", optimal, "Use margin-maximising parameters (default)");
    theta_opt->needs(phi_opt);
    phi_opt->needs(theta_opt);
    optimal_flag->excludes(theta_opt);
    optimal_flag->excludes(phi_opt);

    // op
    auto *op = app.add_subcommand("op", "Apply a language operation");
    op->require_subcommand(1);
    std::string lhs;
    std::string rhs;
    auto add_binary = [&](const char *name, const char *help) {
        auto *sub = op->add_subcommand(name, help);
        sub->add_option("left", lhs, "First automaton JSON")->required();
        sub->add_option("right", rhs, "Second automaton JSON")->required();
        return sub;
    };
    auto *op_complement = op->add_subcommand("complement", "1 - f");
    op_complement->add_option("input", lhs, "Automaton JSON")->required();
    auto *op_union = add_binary("union", "Union of two negative one-sided error languages");
    auto *op_intersection = add_binary("intersection", "Intersection of two negative one-sided error languages");
    add_binary("hadamard", "Pointwise product f_M f_N");
    double c1 = 0.5;
    double c2 = 0.5;
    auto *op_lincomb = add_binary("lincomb", "Convex combination c1 f_M + c2 f_N");
    op_lincomb->add_option("--c1", c1, "Weight of the first automaton");
    op_lincomb->add_option("--c2", c2, "Weight of the second automaton");
    std::string hom_text;
    auto *op_invhom = op->add_subcommand("invhom", "Inverse homomorphism (measure-once only)");
    op_invhom->add_option("--map", hom_text, "JSON object such as {\"b\":\"aa\"}, or a file holding one")->required();
    op_invhom->add_option("input", lhs, "Automaton JSON")->required();
    std::string quotient_word;
    auto *op_quotient = op->add_subcommand("quotient", "Left word quotient w\\L (measure-once only)");
    op_quotient->add_option("--word", quotient_word, "Prefix word")->required();
    op_quotient->add_option("input", lhs, "Automaton JSON")->required();

    // eval
    std::string machine_path;
    std::vector<std::string> inputs;
    auto *eval = app.add_subcommand("eval", "Exact acceptance probability");
    eval->add_option("machine", machine_path, "Automaton JSON (default: stdin)");
    eval->add_option("--input", inputs, "Input word; repeat for several")->required()->allow_extra_args(false);

    // simulate
    std::string word;
    std::int64_t shots = 100000;
    double eta_g = 0.0;
    double eta_r = 0.0;
    std::string mapping_kind = "density";
    std::string mapping_file;
    std::optional<int> qubits;
    unsigned threads = 1;
    std::string unmapped_mid = "nonhalting";
    std::string unmapped_final = "unmapped";
    auto *simulate = app.add_subcommand("simulate", "Shot-based run under bit-flip noise");
    simulate->add_option("machine", machine_path, "Automaton JSON (default: stdin)");
    simulate->add_option("--input", word, "Input word")->required();
    simulate->add_option("--shots", shots, "Number of shots")->check(CLI::PositiveNumber);
    simulate->add_option("--eta-g", eta_g, "Per-block, per-qubit flip probability")->check(CLI::Range(0.0, 1.0));
    simulate->add_option("--eta-r", eta_r, "Per-qubit readout flip probability")->check(CLI::Range(0.0, 1.0));
    simulate->add_option("--mapping", mapping_kind, "naive or density")->check(CLI::IsMember({"naive", "density"}));
    simulate->add_option("--mapping-file", mapping_file, "Mapping JSON overriding --mapping");
    simulate->add_option("--qubits", qubits, "Register size (default: minimum)");
    simulate->add_option("--threads", threads, "Worker threads");
    simulate->add_option("--unmapped-mid", unmapped_mid, "Mid-string unmapped outcome: nonhalting or reject")
        ->check(CLI::IsMember({"nonhalting", "reject"}));
    simulate->add_option("--unmapped-final", unmapped_final, "Final unmapped outcome: unmapped or reject")
        ->check(CLI::IsMember({"unmapped", "reject"}));

    // map
    bool score = false;
    auto *map = app.add_subcommand("map", "Assign states to qubit basis strings");
    map->add_option("machine", machine_path, "Automaton JSON (default: stdin)");
    map->add_option("--kind", mapping_kind, "naive or density")->check(CLI::IsMember({"naive", "density"}));
    map->add_option("--qubits", qubits, "Register size (default: minimum)");
    map->add_flag("--score", score, "Include the single-flip robustness score");

    // transpile
    bool stats = false;
    std::size_t max_length = 40;
    auto *transpile = app.add_subcommand("transpile", "Lower to a circuit of two-level unitaries");
    transpile->add_option("machine", machine_path, "Automaton JSON (default: stdin)");
    transpile->add_option("--mapping", mapping_kind, "naive or density")->check(CLI::IsMember({"naive", "density"}));
    transpile->add_option("--mapping-file", mapping_file, "Mapping JSON overriding --mapping");
    transpile->add_option("--qubits", qubits, "Register size (default: minimum)");
    transpile->add_flag("--stats", stats, "Emit factor counts as CSV instead of the circuit JSON");
    transpile->add_option("--max-length", max_length, "Longest input length in --stats");

    // experiment
    std::string config;
    std::vector<std::string> languages;
    std::vector<std::string> etas;
    std::vector<std::string> mappings;
    std::optional<int> min_len;
    std::optional<int> max_len;
    std::optional<std::int64_t> exp_shots;
    auto *experiment = app.add_subcommand("experiment", "Noise sweep comparing naive and density mappings");
    experiment->add_option("--config", config, "Experiment config JSON");
    experiment->add_option("--language", languages, "mod:N, modp:P[:seed] or equ:K; repeatable");
    experiment->add_option("--eta", etas, "eta_g,eta_r pair; repeatable");
    experiment->add_option("--mapping", mappings, "naive or density; repeatable")
        ->check(CLI::IsMember({"naive", "density"}));
    experiment->add_option("--min-length", min_len, "Shortest string (default 2)");
    experiment->add_option("--max-length", max_len, "Longest string (default 40)");
    experiment->add_option("--shots", exp_shots, "Shots per string (default 100000)");
    experiment->add_option("--threads", threads, "Worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    try {
        if (block->parsed()) {
            if (block_mod->parsed()) {
                const MoQfa m = build_mod_n(mod_n);
                const double c = std::cos(std::numbers::pi / mod_n);
                emit_block(g, out, m, QfaClassTag{QfaKind::kMo, ErrorSide::kNegative, margin_if_valid(1.0 - c * c)},
                           std::nullopt, params_path);
            } else if (block_modp->parsed()) {
                const ModPBlock b = build_mod_p(mod_p, g.seed, mod_d);
                emit_block(g, out, b.machine,
                           QfaClassTag{QfaKind::kMo, ErrorSide::kNegative,
                                       margin_if_valid(1.0 - b.coefficients.max_non_member_probability)},
                           mod_p_coefficients_to_json(b.coefficients), params_path);
            } else {
                const EquBlock b = theta ? build_equ(equ_k, *theta, *phi) : build_equ(optimal_equ_params(equ_k));
                emit_block(g, out, b.machine,
                           QfaClassTag{QfaKind::kMmCoEndDecisive, ErrorSide::kNegative, margin_if_valid(b.params.margin)},
                           equ_params_to_json(b.params), params_path);
            }
            return kExitOk;
        }

        if (op->parsed()) {
            const TaggedQfa a = load_machine(lhs, g);
            Qfa result = a.machine;
            std::optional<QfaClassTag> tag;
            if (op_complement->parsed()) {
                result = complement(a.machine);
                tag = complement(tag_of(a));
            } else if (op_invhom->parsed() || op_quotient->parsed()) {
                const auto *mo = std::get_if<MoQfa>(&a.machine);
                if (op_invhom->parsed()) {
                    if (!mo) {
                        throw ValidationError("MM-QFA inverse homomorphism not supported");
                    }
                    const auto first = hom_text.find_first_not_of(" \t\n");
                    const Json h = first != std::string::npos && hom_text[first] == '{' ? parse_json(hom_text)
                                                                                        : read_json_file(hom_text);
                    result = mo_inverse_homomorphism(*mo, homomorphism_from_json(h));
                } else {
                    if (!mo) {
                        throw ValidationError("MM-QFA word quotient not supported");
                    }
                    result = mo_word_quotient(*mo, quotient_word);
                }
                tag = tag_of(a);
            } else {
                const TaggedQfa b = load_machine(rhs, g);
                if (a.machine.index() != b.machine.index()) {
                    throw ValidationError("operands must both be measure-once or both measure-many");
                }
                if (op_union->parsed()) {
                    tag = union_of(tag_of(a), tag_of(b));
                    result = union_of(a.machine, b.machine);
                } else if (op_intersection->parsed()) {
                    tag = intersection(tag_of(a), tag_of(b));
                    result = intersection(a.machine, b.machine);
                } else if (op_lincomb->parsed()) {
                    tag = linear_combination(tag_of(a), tag_of(b));
                    if (const auto *mo = std::get_if<MoQfa>(&a.machine)) {
                        result = linear_combination(*mo, std::get<MoQfa>(b.machine), c1, c2);
                    } else {
                        result = linear_combination(std::get<MmQfa>(a.machine), std::get<MmQfa>(b.machine), c1, c2);
                    }
                } else {
                    tag = hadamard(tag_of(a), tag_of(b));
                    if (const auto *mo = std::get_if<MoQfa>(&a.machine)) {
                        result = mo_hadamard(*mo, std::get<MoQfa>(b.machine));
                    } else {
                        result = mm_end_decisive_hadamard(std::get<MmQfa>(a.machine), std::get<MmQfa>(b.machine));
                    }
                }
            }
            emit(g, out, dump(qfa_to_json(result, tag)));
            return kExitOk;
        }

        if (eval->parsed()) {
            const TaggedQfa m = load_machine(machine_path, g);
            std::string text;
            for (const auto &w : inputs) {
                text += format_probability(accept_probability(m.machine, w)) + "\n";
            }
            emit(g, out, text);
            return kExitOk;
        }

        if (simulate->parsed()) {
            const TaggedQfa m = load_machine(machine_path, g);
            const StateMapping mapping = resolve_mapping(m.machine, mapping_kind, mapping_file, qubits);
            UnmappedPolicy policy;
            policy.mid = unmapped_mid == "reject" ? UnmappedPolicy::Mid::kReject : UnmappedPolicy::Mid::kNonHalting;
            policy.final =
                unmapped_final == "reject" ? UnmappedPolicy::Final::kReject : UnmappedPolicy::Final::kCountUnmapped;
            const EmbeddedQfa e = embed(m.machine, mapping);
            const NoiseModel noise{eta_g, eta_r, g.seed};
            const ShotResult r = run_shots(e, word, noise, shots, policy, threads);
            Json j;
            j["input"] = word;
            j["mapping"] = to_string(mapping.kind);
            j["qubits"] = mapping.qubits;
            j["eta_g"] = eta_g;
            j["eta_r"] = eta_r;
            j["seed"] = g.seed;
            j["shots"] = r.shots;
            j["accepted"] = r.accepted;
            j["rejected"] = r.rejected;
            j["unmapped_outcomes"] = r.unmapped_outcomes;
            j["frequency"] = r.frequency();
            j["ideal_p"] = accept_probability(m.machine, word);
            emit(g, out, dump(j));
            return kExitOk;
        }

        if (map->parsed()) {
            const TaggedQfa m = load_machine(machine_path, g);
            const StateMapping mapping = make_mapping(m.machine, parse_mapping_kind(mapping_kind), qubits);
            Json j = mapping_to_json(mapping);
            if (score) {
                j["flip_robustness_score"] = flip_robustness_score(mapping, m.machine);
            }
            emit(g, out, dump(j));
            return kExitOk;
        }

        if (transpile->parsed()) {
            const TaggedQfa m = load_machine(machine_path, g);
            const CircuitIR ir = lower(m.machine, resolve_mapping(m.machine, mapping_kind, mapping_file, qubits));
            if (stats) {
                std::ostringstream csv;
                write_gate_stats_csv(csv, gate_stats(ir, max_length));
                emit(g, out, csv.str());
            } else {
                emit(g, out, dump(circuit_to_json(ir)));
            }
            return kExitOk;
        }

        // experiment
        ExperimentSpec spec = config.empty() ? ExperimentSpec{} : experiment_spec_from_json(read_json_file(config));
        for (const auto &l : languages) {
            spec.languages.push_back(LanguageSpec::parse(l));
        }
        for (const auto &e : etas) {
            const auto comma = e.find(',');
            if (comma == std::string::npos) {
                throw ValidationError("--eta expects eta_g,eta_r, got '" + e + "'");
            }
            try {
                spec.etas.push_back(NoisePair{std::stod(e.substr(0, comma)), std::stod(e.substr(comma + 1))});
            } catch (const std::logic_error &) {
                throw ValidationError("--eta expects two numbers, got '" + e + "'");
            }
        }
        if (!mappings.empty()) {
            spec.mappings.clear();
            for (const auto &m : mappings) {
                spec.mappings.push_back(parse_mapping_kind(m));
            }
        }
        const ExperimentSpec grid = ExperimentSpec::default_grid();
        if (spec.languages.empty()) {
            spec.languages = grid.languages;
        }
        if (spec.etas.empty()) {
            spec.etas = grid.etas;
        }
        spec.min_length = min_len.value_or(spec.min_length);
        spec.max_length = max_len.value_or(spec.max_length);
        spec.shots = exp_shots.value_or(spec.shots);
        if (app.get_option("--seed")->count() > 0 || config.empty()) {
            spec.seed = g.seed;
        }
        if (experiment->get_option("--threads")->count() > 0) {
            spec.threads = threads;
        }
        spec.validate();
        if (g.out.empty()) {
            throw ValidationError("experiment needs --out DIR for its result files");
        }
        const ExperimentResult r = run_experiment(spec);
        std::error_code ec;
        fs::create_directories(g.out, ec);
        if (ec) {
            throw IoError("cannot create output directory '" + g.out + "': " + ec.message());
        }
        std::ostringstream results;
        write_results_csv(results, r);
        write_text_file(fs::path(g.out) / "results.csv", results.str());
        std::ostringstream table;
        write_mape_csv(table, spec, r);
        write_text_file(fs::path(g.out) / "mape.csv", table.str());
        write_text_file(fs::path(g.out) / "summary.json", dump(experiment_summary(spec, r)));
        out << table.str();
        return kExitOk;
    } catch (const IoError &e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}

}  // namespace qfl::cli
