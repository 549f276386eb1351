// Batch front end. Each subcommand parses its documents, runs the matching
// validators or constructors, and emits one JSON report:
//
//   { "format_version": 1, "command": ..., "options": {...},
//     "cases": [...], "passed": bool, "counterexample"?: <first failed case> }
//
// Exit status: 0 all checks pass, 1 check failure (first counterexample in
// the report), 2 parse error (location on stderr). Reports are byte-stable
// for fixed inputs and seed.

#include "ptsys/expr.hpp"
#include "ptsys/gen.hpp"
#include "ptsys/json_io.hpp"
#include "ptsys/surgery.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using ptsys::Error;
using ptsys::ErrorKind;
using ptsys::io::Json;
namespace closure = ptsys::closure;
namespace gen = ptsys::gen;
namespace io = ptsys::io;
namespace khm = ptsys::khm;
namespace mcg = ptsys::mcg;
namespace rank1 = ptsys::rank1;
namespace systems = ptsys::systems;

struct JobOptions {
    std::string file;
    std::string out_path;
    bool text = false;
    std::uint64_t seed = 0;
    std::size_t cases = 200;
    std::string cutoff;
    std::string psi_mode = "same-genus";
    std::string coherence_mode = "transitivity";
    std::string ring = "novikov";
    std::string unit_group = "signs";
    bool positive = false;
};

void check_keys(const Json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
    if (!j.is_object())
        throw Error(ErrorKind::parse, where + " is not an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known)
            throw Error(ErrorKind::parse, "unknown field \"" + it.key() + "\" in " + where);
    }
}

// Non-parse errors inside a case become a failed case instead of aborting
// the job; syntax problems still surface as exit status 2.
Json guarded_case(std::size_t index, const std::function<Json()>& body) {
    try {
        return body();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::parse) throw;
        Json c;
        c["index"] = index;
        c["error"] = e.what();
        c["ok"] = false;
        return c;
    }
}

Json make_report(const std::string& command, Json options, Json cases) {
    Json doc;
    doc["format_version"] = 1;
    doc["command"] = command;
    doc["options"] = std::move(options);
    doc["cases"] = std::move(cases);
    // Copy, not reference: inserting further keys reallocates the object
    // storage and would invalidate a pointer into "cases".
    Json bad;
    bool passed = true;
    for (const auto& c : doc["cases"])
        if (!c.at("ok").get<bool>()) {
            passed = false;
            bad = c;
            break;
        }
    doc["passed"] = passed;
    if (!passed) doc["counterexample"] = std::move(bad);
    return doc;
}

std::string text_summary(const Json& doc) {
    std::ostringstream out;
    const Json& cases = doc.at("cases");
    std::size_t good = 0;
    for (const auto& c : cases)
        if (c.at("ok").get<bool>()) ++good;
    out << doc.at("command").get<std::string>() << ": " << good << "/" << cases.size()
        << " checks passed\n";
    for (const auto& c : cases) {
        if (c.at("ok").get<bool>()) continue;
        out << "case " << c.at("index") << " failed";
        if (c.contains("detail"))
            out << ": " << c.at("detail").get<std::string>();
        else if (c.contains("error"))
            out << ": " << c.at("error").get<std::string>();
        out << "\n";
    }
    out << (doc.at("passed").get<bool>() ? "PASS" : "FAIL") << "\n";
    return out.str();
}

int finish(const Json& doc, const JobOptions& opt) {
    std::string body = doc.dump(2);
    body.push_back('\n');
    if (!opt.out_path.empty()) {
        std::ofstream f(opt.out_path, std::ios::binary);
        if (!f) throw Error(ErrorKind::validation, "cannot open output file " + opt.out_path);
        f << body;
    }
    if (opt.text)
        std::cout << text_summary(doc);
    else if (opt.out_path.empty())
        std::cout << body;
    return doc.at("passed").get<bool>() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// ring-eval

Json run_ring_eval(const JobOptions& opt) {
    Json j = io::parse_file(opt.file);
    check_keys(j, {"ring", "unit_group", "expressions"}, "ring-eval input");
    ptsys::RingSpec spec = io::ring_spec_from_json(j);
    const Json& exprs = io::field(j, "expressions", "ring-eval input");
    if (!exprs.is_array()) throw Error(ErrorKind::parse, "\"expressions\" is not an array");

    ptsys::expr::EvalOptions eval_opt;
    eval_opt.ring = spec;
    eval_opt.cutoff = ptsys::rat_from_string(opt.cutoff);

    Json options;
    options["ring"] = ptsys::to_string(spec.kind);
    options["unit_group"] = ptsys::to_string(spec.unit_group);
    options["cutoff"] = ptsys::rat_to_string(eval_opt.cutoff);

    Json cases = Json::array();
    for (std::size_t i = 0; i < exprs.size(); ++i) {
        if (!exprs[i].is_string())
            throw Error(ErrorKind::parse, "expression " + std::to_string(i) + " is not a string");
        std::string text = exprs[i].get<std::string>();
        cases.push_back(guarded_case(i, [&] {
            Json c;
            c["index"] = i;
            c["expression"] = text;
            try {
                ptsys::expr::EvalResult res = ptsys::expr::evaluate(text, eval_opt);
                c["value"] = ptsys::ring_to_string(res.value);
                if (res.cutoff) c["cutoff"] = ptsys::rat_to_string(*res.cutoff);
                c["ok"] = true;
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::parse)
                    throw Error(ErrorKind::parse,
                                "expression " + std::to_string(i) + ": " + e.what(), e.position());
                c["error"] = e.what();
                c["ok"] = false;
            }
            return c;
        }));
    }
    return make_report("ring-eval", std::move(options), std::move(cases));
}

// ---------------------------------------------------------------------------
// system-validate / system-quotient / system-tensor / system-flatten

Json run_system_validate(const JobOptions& opt) {
    systems::TransitiveSystem S = io::system_from_json(io::parse_file(opt.file));
    std::vector<systems::Violation> vs = systems::validate_system(S);
    Json c;
    c["index"] = 0;
    c["indices"] = S.indices;
    c["violations"] = io::violations_to_json(vs);
    c["ok"] = vs.empty();
    if (!vs.empty()) c["detail"] = "system does not validate";
    return make_report("system-validate", Json::object(), Json::array({c}));
}

Json run_system_quotient(const JobOptions& opt) {
    systems::TransitiveSystem S = io::system_from_json(io::parse_file(opt.file));
    Json c = guarded_case(0, [&] {
        Json out;
        out["index"] = 0;
        std::vector<systems::Violation> vs = systems::validate_system(S);
        if (!vs.empty()) {
            out["violations"] = io::violations_to_json(vs);
            out["detail"] = "system does not validate";
            out["ok"] = false;
            return out;
        }
        systems::QuotientResult q = systems::quotient_module(S);
        Json module;
        module["ring"] = ptsys::to_string(S.ring.kind);
        module["rank"] = q.module.rank;
        out["module"] = std::move(module);
        Json ids;
        for (const auto& [label, hom] : q.identifications) ids[label] = io::hom_to_json(hom);
        out["identifications"] = std::move(ids);
        out["ok"] = true;
        return out;
    });
    return make_report("system-quotient", Json::object(), Json::array({c}));
}

Json run_system_tensor(const JobOptions& opt) {
    Json j = io::parse_file(opt.file);
    check_keys(j, {"system", "target"}, "system-tensor input");
    systems::TransitiveSystem S = io::system_from_json(io::field(j, "system", "system-tensor input"));
    ptsys::RingSpec target = io::ring_spec_from_json(io::field(j, "target", "system-tensor input"));
    Json c = guarded_case(0, [&] {
        Json out;
        out["index"] = 0;
        systems::TransitiveSystem T = systems::tensor_system(S, target);
        std::vector<systems::Violation> vs = systems::validate_system(T);
        out["system"] = io::system_to_json(T);
        out["violations"] = io::violations_to_json(vs);
        out["ok"] = vs.empty();
        return out;
    });
    return make_report("system-tensor", Json::object(), Json::array({c}));
}

Json run_system_flatten(const JobOptions& opt) {
    systems::SystemOfSystems T = io::sos_from_json(io::parse_file(opt.file));
    Json c = guarded_case(0, [&] {
        Json out;
        out["index"] = 0;
        std::vector<systems::Violation> vs = systems::validate_system_of_systems(T);
        out["violations"] = io::violations_to_json(vs);
        if (!vs.empty()) {
            out["detail"] = "system of systems does not validate";
            out["ok"] = false;
            return out;
        }
        systems::TransitiveSystem F = systems::flatten_system_of_systems(T);
        std::vector<systems::Violation> fv = systems::validate_system(F);
        out["flattened"] = io::system_to_json(F);
        out["flattened_violations"] = io::violations_to_json(fv);
        out["ok"] = fv.empty();
        return out;
    });
    return make_report("system-flatten", Json::object(), Json::array({c}));
}

// ---------------------------------------------------------------------------
// mcg-factor / mcg-act / surgery-build

Json run_mcg_factor(const JobOptions& opt) {
    Json j = io::parse_file(opt.file);
    check_keys(j, {"genus", "matrix"}, "mcg-factor input");
    const Json& gj = io::field(j, "genus", "mcg-factor input");
    if (!gj.is_number_integer() || gj.get<int>() < 1)
        throw Error(ErrorKind::parse, "\"genus\" must be a positive integer");
    int genus = gj.get<int>();
    mcg::IntMat M = io::mat_from_json(io::field(j, "matrix", "mcg-factor input"));

    Json options;
    options["positive"] = opt.positive;

    Json c = guarded_case(0, [&] {
        Json out;
        out["index"] = 0;
        out["genus"] = genus;
        mcg::SurfaceModel s{genus, std::nullopt};
        if (M.n != s.dim())
            throw Error(ErrorKind::validation, "matrix size does not match the genus");
        mcg::TwistWord w = mcg::factor_symplectic(M, mcg::default_generators(s), opt.positive);
        bool round_trip = (mcg::word_action(w) == M);
        out["letters"] = w.letters.size();
        out["word"] = io::twist_word_to_json(w);
        out["round_trip"] = round_trip;
        out["ok"] = round_trip;
        if (!round_trip) out["detail"] = "factored word does not reproduce the matrix";
        return out;
    });
    return make_report("mcg-factor", std::move(options), Json::array({c}));
}

Json run_mcg_act(const JobOptions& opt) {
    Json j = io::parse_file(opt.file);
    check_keys(j, {"word", "curves"}, "mcg-act input");
    mcg::TwistWord w = io::twist_word_from_json(io::field(j, "word", "mcg-act input"));
    const Json& curves = io::field(j, "curves", "mcg-act input");
    if (!curves.is_array()) throw Error(ErrorKind::parse, "\"curves\" is not an array");

    Json c = guarded_case(0, [&] {
        Json out;
        out["index"] = 0;
        mcg::IntMat A = mcg::word_action(w);
        Json images = Json::array();
        for (std::size_t i = 0; i < curves.size(); ++i) {
            std::vector<ptsys::Int> v = io::int_vec_from_json(curves[i]);
            if (v.size() != A.n)
                throw Error(ErrorKind::validation,
                            "curve " + std::to_string(i) + " has the wrong dimension");
            images.push_back(io::int_vec_to_json(mcg::mat_apply(A, v)));
        }
        out["action"] = io::mat_to_json(A);
        out["images"] = std::move(images);
        out["identity"] = mcg::is_identity_on_homology(w);
        out["ok"] = true;
        return out;
    });
    return make_report("mcg-act", Json::object(), Json::array({c}));
}

Json run_surgery_build(const JobOptions& opt) {
    Json j = io::parse_file(opt.file);
    check_keys(j, {"word"}, "surgery-build input");
    mcg::TwistWord w = io::twist_word_from_json(io::field(j, "word", "surgery-build input"));

    Json options;
    options["positive"] = opt.positive;

    Json c = guarded_case(0, [&] {
        Json out;
        out["index"] = 0;
        mcg::TwistWord v = opt.positive ? mcg::positivize_word(w) : w;
        closure::SurgeryPresentation p = closure::build_surgery(v);
        closure::validate_surgery(p);
        out["letters"] = v.letters.size();
        out["entries"] = p.entries.size();
        out["surgery"] = io::surgery_to_json(p);
        out["ok"] = true;
        return out;
    });
    return make_report("surgery-build", std::move(options), Json::array({c}));
}

// ---------------------------------------------------------------------------
// psi-build

std::vector<std::string> dedup_rules(const std::vector<std::string>& rules) {
    std::vector<std::string> out;
    for (const std::string& r : rules)
        if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
    return out;
}

Json word_case(std::size_t index, const closure::MorphismWord& w) {
    Json c;
    c["index"] = index;
    c["source"] = w.source.id;
    c["target"] = w.target.id;
    c["letters"] = w.letters.size();
    closure::validate_word(w);
    closure::RewriteTrace trace;
    closure::MorphismWord nf = closure::normal_form(w, &trace);
    bool idempotent = closure::words_equal(closure::normal_form(nf), nf);
    c["normal_form"] = io::word_to_json(nf);
    c["relations"] = dedup_rules(trace.rules);
    c["ok"] = idempotent;
    if (!idempotent) c["detail"] = "normal form is not idempotent";
    return c;
}

Json run_psi_build(const JobOptions& opt) {
    Json options;
    Json cases = Json::array();
    if (!opt.file.empty()) {
        Json j = io::parse_file(opt.file);
        std::string kind = io::field(j, "kind", "psi-build input").get<std::string>();
        options["positive"] = opt.positive;
        cases.push_back(guarded_case(0, [&] {
            if (kind == "same-genus") {
                check_keys(j, {"kind", "gluing"}, "psi-build input");
                closure::GluingData g =
                    io::gluing_from_json(io::field(j, "gluing", "psi-build input"));
                return word_case(0, closure::psi_same_genus(g.source, g.target, g, opt.positive));
            }
            if (kind == "genus-step" || kind == "genus-step-down") {
                check_keys(j, {"kind", "source", "target", "cut", "leg1", "leg2"},
                           "psi-build input");
                closure::ClosureDescriptor src =
                    io::closure_from_json(io::field(j, "source", "psi-build input"));
                closure::ClosureDescriptor tgt =
                    io::closure_from_json(io::field(j, "target", "psi-build input"));
                closure::CutData cd = io::cut_from_json(io::field(j, "cut", "psi-build input"));
                closure::GluingData leg1 =
                    io::gluing_from_json(io::field(j, "leg1", "psi-build input"));
                closure::GluingData leg2 =
                    io::gluing_from_json(io::field(j, "leg2", "psi-build input"));
                closure::MorphismWord w =
                    kind == "genus-step"
                        ? closure::psi_genus_step(src, tgt, cd, leg1, leg2)
                        : closure::psi_genus_step_down(src, tgt, cd, leg1, leg2);
                return word_case(0, w);
            }
            throw Error(ErrorKind::parse, "unknown kind \"" + kind + "\" in psi-build input");
        }));
        return make_report("psi-build", std::move(options), std::move(cases));
    }

    if (opt.psi_mode != "same-genus" && opt.psi_mode != "genus-step")
        throw Error(ErrorKind::parse, "unknown mode \"" + opt.psi_mode + "\"");
    options["mode"] = opt.psi_mode;
    options["seed"] = opt.seed;
    options["cases"] = opt.cases;
    options["positive"] = opt.positive;
    gen::Rng r(opt.seed);
    for (std::size_t i = 0; i < opt.cases; ++i) {
        cases.push_back(guarded_case(i, [&] {
            std::string p = "g" + std::to_string(i);
            if (opt.psi_mode == "same-genus") {
                closure::ClosureDescriptor d0 = gen::random_closure(r, p + ".d0", p + ".K", 2);
                closure::ClosureDescriptor d1 = gen::random_closure(r, p + ".d1", p + ".K", 2);
                closure::GluingData g = gen::random_gluing(r, d0, d1, 4);
                return word_case(i, closure::psi_same_genus(d0, d1, g, opt.positive));
            }
            return word_case(i, gen::random_genus_step_pair(r, p).first);
        }));
    }
    return make_report("psi-build", std::move(options), std::move(cases));
}

// ---------------------------------------------------------------------------
// coherence

struct WordPair {
    closure::MorphismWord w1, w2;
};

WordPair transitivity_pair(gen::Rng& r, const std::string& p) {
    closure::ClosureDescriptor d0 = gen::random_closure(r, p + ".d0", p + ".K", 2);
    closure::ClosureDescriptor d1 = gen::random_closure(r, p + ".d1", p + ".K", 2);
    closure::ClosureDescriptor d2 = gen::random_closure(r, p + ".d2", p + ".K", 2);
    closure::GluingData g1 = gen::random_gluing(r, d0, d1, 4);
    closure::GluingData g2 = gen::random_gluing(r, d1, d2, 4);
    WordPair out;
    out.w1 = closure::psi_same_genus(d0, d2, closure::compose_gluings(g1, g2));
    out.w2 = closure::concat(closure::psi_same_genus(d0, d1, g1),
                             closure::psi_same_genus(d1, d2, g2));
    return out;
}

WordPair psi_choice_pair(gen::Rng& r, const std::string& p) {
    closure::ClosureDescriptor d0 = gen::random_closure(r, p + ".d0", p + ".K", 2);
    closure::ClosureDescriptor d1 = gen::random_closure(r, p + ".d1", p + ".K", 2);
    closure::GluingData g = gen::random_gluing(r, d0, d1, 4);
    closure::GluingData ga = gen::alternative_psi(r, g, 3);
    WordPair out;
    out.w1 = closure::psi_same_genus(d0, d1, g);
    out.w2 = closure::psi_same_genus(d0, d1, ga, true);
    return out;
}

Json coherence_case(std::size_t index, const closure::MorphismWord& w1,
                    const closure::MorphismWord& w2, const std::string& mode) {
    Json c;
    c["index"] = index;
    if (!mode.empty()) c["mode"] = mode;
    c["source"] = w1.source.id;
    c["target"] = w1.target.id;
    closure::CoherenceReport rep = closure::coherence_check(w1, w2);
    c["relations"] = rep.rules_used;
    c["ok"] = rep.ok;
    if (rep.ok) {
        c["normal_form"] = io::word_to_json(rep.nf1);
    } else {
        c["nf1"] = io::word_to_json(rep.nf1);
        c["nf2"] = io::word_to_json(rep.nf2);
        c["detail"] = rep.detail;
    }
    return c;
}

// Every simple directed cycle, reported once with its smallest node first.
std::vector<std::vector<std::size_t>> simple_cycles(std::size_t n) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> path;
    std::vector<bool> used(n, false);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t v) {
        path.push_back(v);
        used[v] = true;
        if (path.size() >= 2) out.push_back(path);
        for (std::size_t w = start + 1; w < n; ++w)
            if (!used[w]) rec(start, w);
        used[v] = false;
        path.pop_back();
    };
    for (std::size_t s = 0; s < n; ++s) rec(s, s);
    return out;
}

Json cycles_case(gen::Rng& r, std::size_t index, const std::string& p) {
    gen::ClosurePool pool = gen::random_pool(r, 2, 1, p + ".K");
    std::vector<std::vector<std::size_t>> cycles = simple_cycles(pool.nodes.size());
    Json c;
    c["index"] = index;
    c["mode"] = "cycles";
    c["nodes"] = pool.nodes.size();
    c["cycles"] = cycles.size();
    std::vector<std::string> rules;
    for (const std::vector<std::size_t>& cyc : cycles) {
        std::vector<closure::PathStep> steps;
        for (std::size_t k = 0; k < cyc.size(); ++k)
            steps.push_back(pool.edge(cyc[k], cyc[(k + 1) % cyc.size()]).step);
        closure::MorphismWord w =
            closure::psi_general(pool.nodes[cyc[0]], pool.nodes[cyc[0]], steps);
        closure::RewriteTrace trace;
        closure::MorphismWord nf = closure::normal_form(w, &trace);
        for (const std::string& rule : trace.rules) rules.push_back(rule);
        if (!nf.letters.empty()) {
            Json cycle = Json::array();
            for (std::size_t v : cyc) cycle.push_back(v);
            c["cycle"] = std::move(cycle);
            c["normal_form"] = io::word_to_json(nf);
            c["detail"] = "cycle does not normalize to the empty word";
            c["relations"] = dedup_rules(rules);
            c["ok"] = false;
            return c;
        }
    }
    c["relations"] = dedup_rules(rules);
    c["ok"] = true;
    return c;
}

Json run_coherence(const JobOptions& opt) {
    Json options;
    Json cases = Json::array();
    if (!opt.file.empty()) {
        Json j = io::parse_file(opt.file);
        check_keys(j, {"word1", "word2"}, "coherence input");
        closure::MorphismWord w1 = io::word_from_json(io::field(j, "word1", "coherence input"));
        closure::MorphismWord w2 = io::word_from_json(io::field(j, "word2", "coherence input"));
        cases.push_back(guarded_case(0, [&] { return coherence_case(0, w1, w2, ""); }));
        return make_report("coherence", std::move(options), std::move(cases));
    }

    const std::string& mode = opt.coherence_mode;
    if (mode != "transitivity" && mode != "psi-choice" && mode != "genus-step" &&
        mode != "functor" && mode != "cycles")
        throw Error(ErrorKind::parse, "unknown mode \"" + mode + "\"");
    options["mode"] = mode;
    options["seed"] = opt.seed;
    options["cases"] = opt.cases;
    gen::Rng r(opt.seed);
    for (std::size_t i = 0; i < opt.cases; ++i) {
        cases.push_back(guarded_case(i, [&] {
            std::string p = "g" + std::to_string(i);
            if (mode == "cycles") return cycles_case(r, i, p);
            WordPair pr;
            if (mode == "transitivity") {
                pr = transitivity_pair(r, p);
            } else if (mode == "psi-choice") {
                pr = psi_choice_pair(r, p);
            } else if (mode == "genus-step") {
                gen::GenusStepPair gs = gen::random_genus_step_pair(r, p);
                pr = {gs.first, gs.second};
            } else {
                gen::FunctorLawPair fl = gen::random_functor_pair(r, p);
                pr = {fl.lhs, fl.rhs};
            }
            return coherence_case(i, pr.w1, pr.w2, mode);
        }));
    }
    return make_report("coherence", std::move(options), std::move(cases));
}

// ---------------------------------------------------------------------------
// rank1-eval

Json run_rank1_eval(const JobOptions& opt) {
    Json options;
    Json cases = Json::array();
    if (!opt.file.empty()) {
        Json j = io::parse_file(opt.file);
        check_keys(j, {"assignment", "word"}, "rank1-eval input");
        rank1::RankOneAssignment a =
            io::assignment_from_json(io::field(j, "assignment", "rank1-eval input"));
        closure::MorphismWord w = io::word_from_json(io::field(j, "word", "rank1-eval input"));
        cases.push_back(guarded_case(0, [&] {
            Json c;
            c["index"] = 0;
            c["source"] = w.source.id;
            c["target"] = w.target.id;
            rank1::validate_rank_one(a);
            c["value"] = ptsys::ring_to_string(rank1::evaluate_rank_one(a, w));
            c["ok"] = true;
            return c;
        }));
        return make_report("rank1-eval", std::move(options), std::move(cases));
    }

    ptsys::RingSpec spec{ptsys::ring_kind_from_string(opt.ring),
                         ptsys::unit_group_from_string(opt.unit_group)};
    ptsys::validate_ring_spec(spec);
    options["ring"] = ptsys::to_string(spec.kind);
    options["unit_group"] = ptsys::to_string(spec.unit_group);
    options["seed"] = opt.seed;
    options["cases"] = opt.cases;
    gen::Rng r(opt.seed);
    for (std::size_t i = 0; i < opt.cases; ++i) {
        cases.push_back(guarded_case(i, [&] {
            std::string p = "g" + std::to_string(i);
            WordPair pr;
            if (i % 2 == 0) {
                pr = transitivity_pair(r, p);
            } else {
                gen::GenusStepPair gs = gen::random_genus_step_pair(r, p);
                pr = {gs.first, gs.second};
            }
            Json c;
            c["index"] = i;
            c["source"] = pr.w1.source.id;
            c["target"] = pr.w1.target.id;
            closure::CoherenceReport rep = closure::coherence_check(pr.w1, pr.w2);
            c["coherent"] = rep.ok;
            bool ok = rep.ok;
            Json values = Json::array();
            std::vector<const closure::MorphismWord*> words{&pr.w1, &pr.w2};
            for (int k = 0; k < 3; ++k) {
                rank1::RankOneAssignment a = gen::random_assignment(r, spec, words);
                ptsys::RingElem v1 = rank1::evaluate_rank_one(a, pr.w1);
                ptsys::RingElem v2 = rank1::evaluate_rank_one(a, pr.w2);
                ok = ok && ptsys::ring_ratio_in_group(v1, v2, spec.unit_group);
                values.push_back(
                    Json::array({ptsys::ring_to_string(v1), ptsys::ring_to_string(v2)}));
            }
            c["values"] = std::move(values);
            c["ok"] = ok;
            if (!ok) c["detail"] = "values disagree beyond the declared unit group";
            return c;
        }));
    }
    return make_report("rank1-eval", std::move(options), std::move(cases));
}

// ---------------------------------------------------------------------------
// khm-check

Json khm_case(std::size_t index, const khm::KhmModel& m) {
    Json c;
    c["index"] = index;
    c["tags"] = m.tags;
    std::vector<systems::Violation> vs = khm::validate_khm(m);
    c["violations"] = io::violations_to_json(vs);
    if (!vs.empty()) {
        c["detail"] = "model does not validate";
        c["ok"] = false;
        return c;
    }
    std::size_t pairs = 0;
    for (const std::string& a : m.tags)
        for (const std::string& b : m.tags) {
            if (a == b) continue;
            systems::SystemMorphism fwd = khm::khm_psi(m, a, b);
            systems::SystemMorphism back = khm::khm_psi(m, b, a);
            systems::SystemMorphism round = systems::compose_system_morphisms(back, fwd);
            if (!systems::morphisms_equal(round, systems::identity_morphism(m.tag_systems.at(a))))
                throw Error(ErrorKind::validation,
                            "comparison " + a + " <-> " + b + " does not invert");
            ++pairs;
        }
    c["psi_pairs"] = pairs;
    systems::SystemOfSystems sos = khm::khm_system_of_systems(m);
    std::vector<systems::Violation> sv = systems::validate_system_of_systems(sos);
    std::vector<systems::Violation> fv =
        sv.empty() ? systems::validate_system(systems::flatten_system_of_systems(sos))
                   : std::vector<systems::Violation>{};
    c["assembled_violations"] = io::violations_to_json(sv);
    c["flattened_violations"] = io::violations_to_json(fv);
    c["ok"] = sv.empty() && fv.empty();
    if (!c["ok"].get<bool>()) c["detail"] = "assembled system does not validate";
    return c;
}

Json run_khm_check(const JobOptions& opt) {
    Json options;
    Json cases = Json::array();
    if (!opt.file.empty()) {
        khm::KhmModel m = io::khm_from_json(io::parse_file(opt.file));
        cases.push_back(guarded_case(0, [&] { return khm_case(0, m); }));
        return make_report("khm-check", std::move(options), std::move(cases));
    }

    options["seed"] = opt.seed;
    options["cases"] = opt.cases;
    gen::Rng r(opt.seed);
    for (std::size_t i = 0; i < opt.cases; ++i) {
        cases.push_back(guarded_case(i, [&] {
            std::size_t tags = 3 + r.index(4);
            std::size_t indices = 2 + r.index(2);
            std::size_t rank = 1 + r.index(2);
            return khm_case(i, gen::random_khm_model(r, tags, indices, rank));
        }));
    }
    return make_report("khm-check", std::move(options), std::move(cases));
}

} // namespace

int main(int argc, char** argv) {
    JobOptions opt;
    const char* env_cutoff = std::getenv("PTSYS_CUTOFF");
    opt.cutoff = env_cutoff != nullptr ? env_cutoff : "50";

    CLI::App app{"transitive systems, closure comparisons, and their checkers"};
    app.require_subcommand(1);

    int rc = 0;
    std::string command = "none";
    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--out", opt.out_path, "write the JSON report to this path");
        sub->add_flag("--text", opt.text, "print a human summary instead of JSON");
    };
    auto add_generator = [&](CLI::App* sub) {
        sub->add_option("--seed", opt.seed, "generator seed");
        sub->add_option("--cases", opt.cases, "number of generated cases");
    };
    auto install = [&](CLI::App* sub, std::function<Json(const JobOptions&)> fn) {
        add_output(sub);
        sub->callback([&, fn, sub] {
            command = sub->get_name();
            rc = finish(fn(opt), opt);
        });
    };

    CLI::App* ring_eval = app.add_subcommand("ring-eval", "evaluate ring expressions");
    ring_eval->add_option("file", opt.file, "input document")->required();
    ring_eval->add_option("--cutoff", opt.cutoff, "series truncation exponent (rational)");
    install(ring_eval, run_ring_eval);

    CLI::App* sys_validate =
        app.add_subcommand("system-validate", "check transitive-system structure");
    sys_validate->add_option("file", opt.file, "system document")->required();
    install(sys_validate, run_system_validate);

    CLI::App* sys_quotient =
        app.add_subcommand("system-quotient", "base-point quotient of a trivial-unit system");
    sys_quotient->add_option("file", opt.file, "system document")->required();
    install(sys_quotient, run_system_quotient);

    CLI::App* sys_tensor =
        app.add_subcommand("system-tensor", "apply a ring change to an integral system");
    sys_tensor->add_option("file", opt.file, "input document")->required();
    install(sys_tensor, run_system_tensor);

    CLI::App* sys_flatten = app.add_subcommand("system-flatten", "flatten a two-level system");
    sys_flatten->add_option("file", opt.file, "system-of-systems document")->required();
    install(sys_flatten, run_system_flatten);

    CLI::App* mcg_factor =
        app.add_subcommand("mcg-factor", "factor a symplectic matrix into twist letters");
    mcg_factor->add_option("file", opt.file, "input document")->required();
    mcg_factor->add_flag("--positive", opt.positive, "only positive twists");
    install(mcg_factor, run_mcg_factor);

    CLI::App* mcg_act = app.add_subcommand("mcg-act", "apply a twist word to homology classes");
    mcg_act->add_option("file", opt.file, "input document")->required();
    install(mcg_act, run_mcg_act);

    CLI::App* surgery =
        app.add_subcommand("surgery-build", "framed surgery presentation of a twist word");
    surgery->add_option("file", opt.file, "input document")->required();
    surgery->add_flag("--positive", opt.positive, "positivize the word first");
    install(surgery, run_surgery_build);

    CLI::App* psi_build =
        app.add_subcommand("psi-build", "construct comparison words and their normal forms");
    psi_build->add_option("file", opt.file, "input document (omit to generate)");
    psi_build->add_option("--mode", opt.psi_mode, "same-genus or genus-step");
    psi_build->add_flag("--positive", opt.positive, "positive-twist factorization");
    add_generator(psi_build);
    install(psi_build, run_psi_build);

    CLI::App* coherence =
        app.add_subcommand("coherence", "check two comparison words for equal normal forms");
    coherence->add_option("file", opt.file, "input document (omit to generate)");
    coherence->add_option("--mode", opt.coherence_mode,
                          "transitivity, psi-choice, genus-step, functor, or cycles");
    add_generator(coherence);
    install(coherence, run_coherence);

    CLI::App* rank1_eval =
        app.add_subcommand("rank1-eval", "evaluate rank-one assignments on comparison words");
    rank1_eval->add_option("file", opt.file, "input document (omit to generate)");
    rank1_eval->add_option("--ring", opt.ring, "generated assignment ring");
    rank1_eval->add_option("--unit-group", opt.unit_group, "declared unit group");
    add_generator(rank1_eval);
    install(rank1_eval, run_rank1_eval);

    CLI::App* khm_check =
        app.add_subcommand("khm-check", "validate nesting models and refinement independence");
    khm_check->add_option("file", opt.file, "model document (omit to generate)");
    add_generator(khm_check);
    install(khm_check, run_khm_check);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::parse) {
            std::cerr << "parse error: " << e.what();
            if (e.position()) std::cerr << " (position " << *e.position() << ")";
            std::cerr << "\n";
            return 2;
        }
        Json doc;
        doc["format_version"] = 1;
        doc["command"] = command;
        doc["options"] = Json::object();
        doc["cases"] = Json::array();
        doc["passed"] = false;
        doc["counterexample"] = Json{{"error", e.what()}};
        try {
            return finish(doc, opt);
        } catch (const Error&) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
