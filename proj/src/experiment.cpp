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

#include "qfl/experiment.hpp"

#include <atomic>
#include <charconv>
#include <thread>

#include "qfl/blocks.hpp"
#include "qfl/error.hpp"
#include "qfl/noisesim.hpp"
#include "qfl/rng.hpp"

namespace qfl {

namespace {

// Shortest round-trip decimal form; locale independent.
std::string fmt(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

int parse_int(const std::string &s, const std::string &context) {
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ValidationError("expected an integer in '" + context + "'");
    }
    return v;
}

}  // namespace

std::string LanguageSpec::name() const {
    std::string out = family + ":" + std::to_string(parameter);
    if (family == "modp" && construction_seed != 0) {
        out += ":" + std::to_string(construction_seed);
    }
    return out;
}

LanguageSpec LanguageSpec::parse(const std::string &text) {
    const auto first = text.find(':');
    if (first == std::string::npos) {
        throw ValidationError("language '" + text + "' must look like mod:5, modp:3[:seed] or equ:3");
    }
    LanguageSpec out;
    out.family = text.substr(0, first);
    if (out.family != "mod" && out.family != "modp" && out.family != "equ") {
        throw ValidationError("unknown language family '" + out.family + "' (expected mod, modp or equ)");
    }
    const auto second = text.find(':', first + 1);
    out.parameter = parse_int(text.substr(first + 1, second - first - 1), text);
    if (second != std::string::npos) {
        if (out.family != "modp") {
            throw ValidationError("only modp languages take a construction seed: '" + text + "'");
        }
        out.construction_seed = static_cast<std::uint64_t>(parse_int(text.substr(second + 1), text));
    }
    return out;
}

Qfa build_language(const LanguageSpec &lang) {
    if (lang.family == "mod") {
        return build_mod_n(lang.parameter);
    }
    if (lang.family == "modp") {
        return build_mod_p(lang.parameter, lang.construction_seed).machine;
    }
    if (lang.family == "equ") {
        if (lang.parameter < 1) {
            throw ValidationError("EQU_k needs k >= 1");
        }
        return build_equ(optimal_equ_params(lang.parameter)).machine;
    }
    throw ValidationError("unknown language family '" + lang.family + "'");
}

void ExperimentSpec::validate() const {
    if (languages.empty()) {
        throw ValidationError("experiment needs at least one language");
    }
    if (min_length < 0 || max_length < min_length) {
        throw ValidationError("experiment string lengths must satisfy 0 <= min <= max");
    }
    if (etas.empty()) {
        throw ValidationError("experiment needs at least one noise pair");
    }
    for (const auto &e : etas) {
        NoiseModel{e.eta_g, e.eta_r, 0}.validate();
    }
    if (mappings.empty()) {
        throw ValidationError("experiment needs at least one mapping");
    }
    if (shots < 1) {
        throw ValidationError("shot count must be at least 1");
    }
}

ExperimentSpec ExperimentSpec::default_grid() {
    ExperimentSpec s;
    for (int p : {3, 5, 7}) {
        s.languages.push_back(LanguageSpec{"modp", p, 0});
    }
    for (int k : {3, 5, 7}) {
        s.languages.push_back(LanguageSpec{"equ", k, 0});
    }
    for (double eta : {0.001, 0.005, 0.01}) {
        s.etas.push_back(NoisePair{eta, eta});
    }
    return s;
}

ExperimentSpec experiment_spec_from_json(const Json &j) {
    if (!j.is_object()) {
        throw ValidationError("experiment config must be a JSON object");
    }
    try {
        ExperimentSpec s;
        if (j.contains("languages")) {
            for (const auto &l : j.at("languages")) {
                s.languages.push_back(LanguageSpec::parse(l.get<std::string>()));
            }
        }
        if (j.contains("lengths")) {
            const Json &r = j.at("lengths");
            if (!r.is_array() || r.size() != 2) {
                throw ValidationError("'lengths' must be [min, max]");
            }
            s.min_length = r[0].get<int>();
            s.max_length = r[1].get<int>();
        }
        if (j.contains("etas")) {
            for (const auto &e : j.at("etas")) {
                if (!e.is_array() || e.size() != 2) {
                    throw ValidationError("each entry of 'etas' must be [eta_g, eta_r]");
                }
                s.etas.push_back(NoisePair{e[0].get<double>(), e[1].get<double>()});
            }
        }
        if (j.contains("mappings")) {
            s.mappings.clear();
            for (const auto &m : j.at("mappings")) {
                s.mappings.push_back(parse_mapping_kind(m.get<std::string>()));
            }
        }
        if (j.contains("shots")) {
            s.shots = j.at("shots").get<std::int64_t>();
        }
        if (j.contains("seed")) {
            s.seed = j.at("seed").get<std::uint64_t>();
        }
        if (j.contains("threads")) {
            s.threads = j.at("threads").get<unsigned>();
        }
        return s;
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("malformed experiment config: ") + e.what());
    }
}

std::uint64_t string_seed(std::uint64_t seed, int length) {
    return SplitMix64::substream(seed, static_cast<std::uint64_t>(length))();
}

ExperimentResult run_experiment(const ExperimentSpec &spec) {
    spec.validate();
    const std::size_t lengths = static_cast<std::size_t>(spec.max_length - spec.min_length + 1);
    ExperimentResult out;

    struct Target {
        std::string language;
        MappingKind mapping;
        EmbeddedQfa embedded;
        std::vector<double> ideal;
    };
    std::vector<Target> targets;
    for (const auto &lang : spec.languages) {
        const Qfa m = build_language(lang);
        std::vector<double> ideal;
        for (std::size_t i = 0; i < lengths; ++i) {
            ideal.push_back(accept_probability(m, std::string(static_cast<std::size_t>(spec.min_length) + i, 'a')));
        }
        for (MappingKind kind : spec.mappings) {
            targets.push_back(Target{lang.name(), kind, embed(m, make_mapping(m, kind)), ideal});
        }
    }

    // Row index = ((target * etas) + eta) * lengths + length.
    const std::size_t total = targets.size() * spec.etas.size() * lengths;
    out.rows.resize(total);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t idx = next++; idx < total; idx = next++) {
            const std::size_t li = idx % lengths;
            const std::size_t ei = (idx / lengths) % spec.etas.size();
            const Target &t = targets[idx / lengths / spec.etas.size()];
            const int len = spec.min_length + static_cast<int>(li);
            const NoisePair eta = spec.etas[ei];
            const NoiseModel noise{eta.eta_g, eta.eta_r, string_seed(spec.seed, len)};
            const ShotResult r = run_shots(t.embedded, std::string(static_cast<std::size_t>(len), 'a'), noise,
                                           spec.shots);
            out.rows[idx] = ExperimentRow{t.language, len, t.mapping, eta.eta_g, eta.eta_r, spec.shots,
                                          t.ideal[li], r.frequency(), spec.seed};
        }
    };
    const unsigned threads = std::max(1u, spec.threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; ++i) {
            pool.emplace_back(worker);
        }
        for (auto &th : pool) {
            th.join();
        }
    }

    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
        for (std::size_t ei = 0; ei < spec.etas.size(); ++ei) {
            std::vector<double> ideal;
            std::vector<double> measured;
            for (std::size_t li = 0; li < lengths; ++li) {
                const auto &row = out.rows[(ti * spec.etas.size() + ei) * lengths + li];
                ideal.push_back(row.ideal_p);
                measured.push_back(row.measured_p);
            }
            MapeCell cell;
            cell.language = targets[ti].language;
            cell.mapping = targets[ti].mapping;
            cell.eta = spec.etas[ei];
            cell.strings_excluded = mape_excluded_count(ideal);
            cell.strings_used = ideal.size() - cell.strings_excluded;
            cell.mape = mape(ideal, measured);
            out.cells.push_back(std::move(cell));
        }
    }
    return out;
}

void write_results_csv(std::ostream &out, const ExperimentResult &r) {
    out << "language,string_length,mapping,eta_g,eta_r,shots,ideal_p,measured_p,seed\n";
    for (const auto &row : r.rows) {
        out << row.language << ',' << row.string_length << ',' << to_string(row.mapping) << ',' << fmt(row.eta_g)
            << ',' << fmt(row.eta_r) << ',' << row.shots << ',' << fmt(row.ideal_p) << ',' << fmt(row.measured_p)
            << ',' << row.seed << '\n';
    }
}

void write_mape_csv(std::ostream &out, const ExperimentSpec &spec, const ExperimentResult &r) {
    out << "language,mapping";
    for (const auto &e : spec.etas) {
        out << ",mape_g" << fmt(e.eta_g) << "_r" << fmt(e.eta_r);
    }
    out << '\n';
    for (std::size_t i = 0; i < r.cells.size(); i += spec.etas.size()) {
        out << r.cells[i].language << ',' << to_string(r.cells[i].mapping);
        for (std::size_t e = 0; e < spec.etas.size(); ++e) {
            out << ',' << fmt(r.cells[i + e].mape);
        }
        out << '\n';
    }
}

Json experiment_summary(const ExperimentSpec &spec, const ExperimentResult &r) {
    Json out;
    out["shots"] = spec.shots;
    out["seed"] = spec.seed;
    out["lengths"] = Json::array({spec.min_length, spec.max_length});
    out["mape_floor"] = kMapeFloor;
    Json cells = Json::array();
    for (const auto &c : r.cells) {
        Json jc;
        jc["language"] = c.language;
        jc["mapping"] = to_string(c.mapping);
        jc["eta_g"] = c.eta.eta_g;
        jc["eta_r"] = c.eta.eta_r;
        jc["mape"] = c.mape;
        jc["strings_used"] = c.strings_used;
        jc["strings_excluded"] = c.strings_excluded;
        cells.push_back(std::move(jc));
    }
    out["cells"] = std::move(cells);

    Json ratios = Json::array();
    auto find = [&](const std::string &lang, MappingKind kind, std::size_t ei) -> const MapeCell * {
        for (std::size_t i = 0; i < r.cells.size(); ++i) {
            if (r.cells[i].language == lang && r.cells[i].mapping == kind && i % spec.etas.size() == ei) {
                return &r.cells[i];
            }
        }
        return nullptr;
    };
    for (const auto &lang : spec.languages) {
        for (std::size_t ei = 0; ei < spec.etas.size(); ++ei) {
            const MapeCell *naive = find(lang.name(), MappingKind::kNaive, ei);
            const MapeCell *density = find(lang.name(), MappingKind::kDensity, ei);
            if (!naive || !density) {
                continue;
            }
            Json jr;
            jr["language"] = lang.name();
            jr["eta_g"] = spec.etas[ei].eta_g;
            jr["eta_r"] = spec.etas[ei].eta_r;
            jr["naive_mape"] = naive->mape;
            jr["density_mape"] = density->mape;
            jr["density_over_naive"] = naive->mape > 0.0 ? Json(density->mape / naive->mape) : Json(nullptr);
            ratios.push_back(std::move(jr));
        }
    }
    out["ratios"] = std::move(ratios);
    return out;
}

}  // namespace qfl
