#include "ptsys/json_io.hpp"

#include <fstream>
#include <sstream>

namespace ptsys::io {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::parse, msg); }

std::string str_at(const Json& j, const std::string& key, const std::string& where) {
    const Json& v = field(j, key, where);
    if (!v.is_string()) bad(where + "." + key + " must be a string");
    return v.get<std::string>();
}

std::int64_t int_at(const Json& j, const std::string& key, const std::string& where) {
    const Json& v = field(j, key, where);
    if (!v.is_number_integer()) bad(where + "." + key + " must be an integer");
    return v.get<std::int64_t>();
}

Int big_from_json(const Json& v, const std::string& where) {
    if (v.is_number_integer()) return Int(v.get<std::int64_t>());
    if (v.is_string()) {
        try {
            return Int(v.get<std::string>());
        } catch (const std::exception&) {
            bad(where + " is not an integer literal");
        }
    }
    bad(where + " must be an integer or an integer string");
}

Json big_to_json(const Int& n) {
    // Entries that fit in 64 bits stay numbers; larger ones become strings.
    static const Int lo = Int(std::numeric_limits<std::int64_t>::min());
    static const Int hi = Int(std::numeric_limits<std::int64_t>::max());
    if (n >= lo && n <= hi) return static_cast<std::int64_t>(n);
    return n.str();
}

std::pair<std::string, std::string> split_arrow(const std::string& key) {
    auto pos = key.find("->");
    if (pos == std::string::npos || pos == 0 || pos + 2 >= key.size())
        bad("map key '" + key + "' is not of the form 'a->b'");
    return {key.substr(0, pos), key.substr(pos + 2)};
}

} // namespace

Json parse_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::parse, e.what(), e.byte);
    }
}

Json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::parse, "cannot open input file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
}

const Json& field(const Json& j, const std::string& key, const std::string& where) {
    if (!j.is_object()) bad(where + " must be a JSON object");
    auto it = j.find(key);
    if (it == j.end()) bad(where + " is missing the field '" + key + "'");
    return *it;
}

// ---------------------------------------------------------------------------

Json ring_spec_to_json(const RingSpec& spec) {
    return Json{{"ring", to_string(spec.kind)}, {"unit_group", to_string(spec.unit_group)}};
}

RingSpec ring_spec_from_json(const Json& j) {
    RingSpec spec;
    spec.kind = ring_kind_from_string(str_at(j, "ring", "ring spec"));
    spec.unit_group = unit_group_from_string(str_at(j, "unit_group", "ring spec"));
    validate_ring_spec(spec);
    return spec;
}

Json hom_to_json(const modalg::Homomorphism& f) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < f.rows(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < f.cols(); ++c) row.push_back(ring_to_string(f.at(r, c)));
        rows.push_back(std::move(row));
    }
    return Json{{"ring", to_string(f.source.ring.kind)},
                {"rows", f.rows()},
                {"cols", f.cols()},
                {"entries", std::move(rows)}};
}

modalg::Homomorphism hom_from_json(const Json& j, const RingSpec& ring) {
    if (j.contains("ring") &&
        ring_kind_from_string(str_at(j, "ring", "matrix")) != ring.kind)
        bad("matrix ring does not match the document ring");
    auto rows = static_cast<std::size_t>(int_at(j, "rows", "matrix"));
    auto cols = static_cast<std::size_t>(int_at(j, "cols", "matrix"));
    const Json& entries = field(j, "entries", "matrix");
    if (!entries.is_array() || entries.size() != rows) bad("matrix entries have wrong shape");
    std::vector<RingElem> flat;
    flat.reserve(rows * cols);
    for (const Json& row : entries) {
        if (!row.is_array() || row.size() != cols) bad("matrix entries have wrong shape");
        for (const Json& e : row) {
            if (!e.is_string()) bad("matrix entries must be ring-element strings");
            flat.push_back(ring_parse(ring.kind, e.get<std::string>()));
        }
    }
    return modalg::make_hom(modalg::FreeModule{ring, cols}, modalg::FreeModule{ring, rows},
                            std::move(flat));
}

Json system_to_json(const systems::TransitiveSystem& S) {
    Json modules = Json::object();
    for (const auto& i : S.indices) modules[i] = S.modules.at(i).rank;
    Json maps = Json::object();
    for (const auto& i : S.indices)
        for (const auto& k : S.indices) {
            auto it = S.maps.find({i, k});
            if (it != S.maps.end()) maps[i + "->" + k] = hom_to_json(it->second.rep);
        }
    Json out = ring_spec_to_json(S.ring);
    out["indices"] = S.indices;
    out["modules"] = std::move(modules);
    out["maps"] = std::move(maps);
    return out;
}

systems::TransitiveSystem system_from_json(const Json& j) {
    systems::TransitiveSystem S;
    S.ring = ring_spec_from_json(j);
    const Json& idx = field(j, "indices", "system");
    if (!idx.is_array()) bad("system.indices must be an array");
    for (const Json& i : idx) {
        if (!i.is_string()) bad("system.indices entries must be strings");
        S.indices.push_back(i.get<std::string>());
    }
    const Json& mods = field(j, "modules", "system");
    for (const auto& i : S.indices) {
        auto ranked = static_cast<std::size_t>(int_at(mods, i, "system.modules"));
        S.modules[i] = modalg::FreeModule{S.ring, ranked};
    }
    const Json& maps = field(j, "maps", "system");
    if (!maps.is_object()) bad("system.maps must be an object");
    for (auto it = maps.begin(); it != maps.end(); ++it) {
        auto [a, b] = split_arrow(it.key());
        S.maps[{a, b}] =
            modalg::GClassHom{hom_from_json(it.value(), S.ring), S.ring.unit_group};
    }
    bool complete = true;
    for (const auto& i : S.indices)
        for (const auto& k : S.indices)
            if (!S.maps.count({i, k})) complete = false;
    if (!complete) S = systems::complete_system(std::move(S));
    return S;
}

Json morphism_to_json(const systems::SystemMorphism& m) {
    Json comps = Json::object();
    for (const auto& i : m.source.indices)
        for (const auto& k : m.target.indices) {
            auto it = m.components.find({i, k});
            if (it != m.components.end()) comps[i + "->" + k] = hom_to_json(it->second.rep);
        }
    return Json{{"source", system_to_json(m.source)},
                {"target", system_to_json(m.target)},
                {"components", std::move(comps)}};
}

systems::SystemMorphism morphism_from_json(const Json& j) {
    systems::SystemMorphism m;
    m.source = system_from_json(field(j, "source", "morphism"));
    m.target = system_from_json(field(j, "target", "morphism"));
    const Json& comps = field(j, "components", "morphism");
    if (!comps.is_object()) bad("morphism.components must be an object");
    for (auto it = comps.begin(); it != comps.end(); ++it) {
        auto [a, b] = split_arrow(it.key());
        m.components[{a, b}] =
            modalg::GClassHom{hom_from_json(it.value(), m.source.ring), m.source.ring.unit_group};
    }
    return m;
}

Json sos_to_json(const systems::SystemOfSystems& T) {
    Json inner = Json::object();
    for (const auto& o : T.outer) inner[o] = system_to_json(T.inner.at(o));
    Json conns = Json::object();
    for (const auto& a : T.outer)
        for (const auto& b : T.outer) {
            auto it = T.connectors.find({a, b});
            if (it == T.connectors.end()) continue;
            Json comps = Json::object();
            for (const auto& [pr, cls] : it->second.components)
                comps[pr.first + "->" + pr.second] = hom_to_json(cls.rep);
            conns[a + "->" + b] = std::move(comps);
        }
    return Json{{"outer", T.outer}, {"inner", std::move(inner)},
                {"connectors", std::move(conns)}};
}

systems::SystemOfSystems sos_from_json(const Json& j) {
    systems::SystemOfSystems T;
    const Json& outer = field(j, "outer", "system of systems");
    if (!outer.is_array()) bad("outer must be an array");
    for (const Json& o : outer) T.outer.push_back(o.get<std::string>());
    const Json& inner = field(j, "inner", "system of systems");
    for (const auto& o : T.outer)
        T.inner[o] = system_from_json(field(inner, o, "inner"));
    const Json& conns = field(j, "connectors", "system of systems");
    if (!conns.is_object()) bad("connectors must be an object");
    for (auto it = conns.begin(); it != conns.end(); ++it) {
        auto [a, b] = split_arrow(it.key());
        if (!T.inner.count(a) || !T.inner.count(b))
            bad("connector '" + it.key() + "' references an unknown outer label");
        systems::SystemMorphism m;
        m.source = T.inner.at(a);
        m.target = T.inner.at(b);
        if (!it.value().is_object()) bad("connector components must be an object");
        for (auto c = it.value().begin(); c != it.value().end(); ++c) {
            auto [x, y] = split_arrow(c.key());
            m.components[{x, y}] = modalg::GClassHom{hom_from_json(c.value(), m.source.ring),
                                                     m.source.ring.unit_group};
        }
        T.connectors[{a, b}] = std::move(m);
    }
    return T;
}

Json violations_to_json(const std::vector<systems::Violation>& vs) {
    Json out = Json::array();
    for (const auto& v : vs)
        out.push_back(Json{{"kind", v.kind}, {"indices", v.indices}, {"detail", v.detail}});
    return out;
}

// ---------------------------------------------------------------------------

Json mat_to_json(const mcg::IntMat& m) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.n; ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.n; ++c) row.push_back(big_to_json(m.at(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

mcg::IntMat mat_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) bad("matrix must be a non-empty array of rows");
    mcg::IntMat m;
    m.n = j.size();
    m.a.assign(m.n * m.n, Int(0));
    for (std::size_t r = 0; r < m.n; ++r) {
        const Json& row = j[r];
        if (!row.is_array() || row.size() != m.n) bad("matrix must be square");
        for (std::size_t c = 0; c < m.n; ++c)
            m.at(r, c) = big_from_json(row[c], "matrix entry");
    }
    return m;
}

Json int_vec_to_json(const std::vector<Int>& v) {
    Json out = Json::array();
    for (const Int& x : v) out.push_back(big_to_json(x));
    return out;
}

std::vector<Int> int_vec_from_json(const Json& j) {
    if (!j.is_array()) bad("vector must be an array");
    std::vector<Int> v;
    v.reserve(j.size());
    for (const Json& x : j) v.push_back(big_from_json(x, "vector entry"));
    return v;
}

Json twist_word_to_json(const mcg::TwistWord& w) {
    Json letters = Json::array();
    for (const auto& l : w.letters)
        letters.push_back(Json{{"curve", int_vec_to_json(l.curve.vec)}, {"sign", l.sign}});
    Json out = Json{{"genus", w.surface.genus}};
    if (w.surface.marked_point) out["marked_point"] = *w.surface.marked_point;
    out["letters"] = std::move(letters);
    return out;
}

mcg::TwistWord twist_word_from_json(const Json& j) {
    mcg::SurfaceModel s;
    s.genus = static_cast<int>(int_at(j, "genus", "word"));
    if (j.contains("marked_point")) s.marked_point = str_at(j, "marked_point", "word");
    mcg::TwistWord w{s, {}};
    const Json& letters = field(j, "letters", "word");
    if (!letters.is_array()) bad("word.letters must be an array");
    for (const Json& l : letters) {
        auto vec = int_vec_from_json(field(l, "curve", "letter"));
        if (vec.size() != s.dim()) bad("curve length does not match the surface dimension");
        int sign = static_cast<int>(int_at(l, "sign", "letter"));
        if (sign != 1 && sign != -1) bad("letter sign must be +-1");
        w.letters.push_back({mcg::CurveClass{s, std::move(vec), "c"}, sign});
    }
    return w;
}

Json surgery_to_json(const closure::SurgeryPresentation& p) {
    Json entries = Json::array();
    for (const auto& e : p.entries) {
        Json one{{"curve", int_vec_to_json(e.curve.vec)},
                 {"height", rat_to_string(e.height)},
                 {"framing", e.framing}};
        if (e.cancelling_partner)
            one["cancelling_partner"] = rat_to_string(*e.cancelling_partner);
        entries.push_back(std::move(one));
    }
    return Json{{"entries", std::move(entries)}};
}

// ---------------------------------------------------------------------------

Json closure_to_json(const closure::ClosureDescriptor& d) {
    return Json{{"id", d.id},
                {"genus", d.genus},
                {"complement_tag", d.complement_tag},
                {"odd", d.odd},
                {"eta", int_vec_to_json(d.eta.vec)}};
}

closure::ClosureDescriptor closure_from_json(const Json& j) {
    closure::ClosureDescriptor d;
    d.id = str_at(j, "id", "closure");
    d.genus = static_cast<int>(int_at(j, "genus", "closure"));
    d.complement_tag = str_at(j, "complement_tag", "closure");
    const Json& odd = field(j, "odd", "closure");
    if (!odd.is_boolean()) bad("closure.odd must be a boolean");
    d.odd = odd.get<bool>();
    d.surface = mcg::SurfaceModel{
        d.genus, d.odd ? std::optional<std::string>("pt") : std::nullopt};
    d.eta = mcg::CurveClass{d.surface, int_vec_from_json(field(j, "eta", "closure")), "eta"};
    closure::validate_closure(d);
    return d;
}

Json free_word_to_json(const closure::FreeWord& w) {
    Json out = Json::array();
    for (const auto& l : w.letters) out.push_back(Json{{"label", l.label}, {"exp", l.exp}});
    return out;
}

closure::FreeWord free_word_from_json(const Json& j) {
    if (!j.is_array()) bad("complement word must be an array");
    std::vector<closure::FreeLetter> letters;
    for (const Json& l : j) {
        std::string label = str_at(l, "label", "complement letter");
        int exp = static_cast<int>(int_at(l, "exp", "complement letter"));
        if (exp != 1 && exp != -1) bad("complement letter exponent must be +-1");
        letters.push_back({std::move(label), exp});
    }
    return closure::fw_reduce(std::move(letters));
}

Json gluing_to_json(const closure::GluingData& g) {
    return Json{{"source", closure_to_json(g.source)},
                {"target", closure_to_json(g.target)},
                {"complement_map", free_word_to_json(g.complement_map)},
                {"phi_minus", mat_to_json(g.phi_minus)},
                {"phi_plus", mat_to_json(g.phi_plus)},
                {"psi", mat_to_json(g.psi)}};
}

closure::GluingData gluing_from_json(const Json& j) {
    closure::ClosureDescriptor src = closure_from_json(field(j, "source", "gluing"));
    closure::ClosureDescriptor tgt = closure_from_json(field(j, "target", "gluing"));
    closure::FreeWord cm = free_word_from_json(field(j, "complement_map", "gluing"));
    mcg::IntMat minus = mat_from_json(field(j, "phi_minus", "gluing"));
    mcg::IntMat plus = mat_from_json(field(j, "phi_plus", "gluing"));
    if (!j.contains("psi")) return closure::make_gluing(src, tgt, cm, plus, minus);
    closure::GluingData g{std::move(src), std::move(tgt), std::move(cm),
                          std::move(minus), std::move(plus),
                          mat_from_json(field(j, "psi", "gluing"))};
    closure::validate_gluing(g);
    return g;
}

Json cut_to_json(const closure::CutData& cd) {
    return Json{{"parent", closure_to_json(cd.parent)},
                {"c1", int_vec_to_json(cd.c1.vec)},
                {"delta", int_vec_to_json(cd.delta.vec)}};
}

closure::CutData cut_from_json(const Json& j) {
    closure::ClosureDescriptor parent = closure_from_json(field(j, "parent", "cut"));
    mcg::CurveClass c1{parent.surface, int_vec_from_json(field(j, "c1", "cut")), "c1"};
    mcg::CurveClass delta{parent.surface, int_vec_from_json(field(j, "delta", "cut")), "delta"};
    return closure::make_cut_data(parent, c1, delta);
}

Json letter_to_json(const closure::ElementaryMorphism& l) {
    Json out{{"kind", closure::to_string(l.kind)}};
    switch (l.kind) {
        case closure::LetterKind::HandleMinus:
        case closure::LetterKind::HandlePlus: {
            const auto& p = std::get<closure::HandlePayload>(l.payload);
            out["source"] = closure_to_json(l.source);
            out["target"] = closure_to_json(l.target);
            out["word"] = twist_word_to_json(p.word);
            out["inverse_marked"] = p.inverse_marked;
            out["surgery"] = surgery_to_json(p.surgery);
            break;
        }
        case closure::LetterKind::Theta: {
            const auto& p = std::get<closure::ThetaPayload>(l.payload);
            out["source"] = closure_to_json(l.source);
            out["target"] = closure_to_json(l.target);
            out["complement_map"] = free_word_to_json(p.complement_map);
            out["action"] = mat_to_json(p.action);
            if (p.phi_plus) out["phi_plus"] = mat_to_json(*p.phi_plus);
            if (p.phi_minus) out["phi_minus"] = mat_to_json(*p.phi_minus);
            break;
        }
        case closure::LetterKind::SpliceMerge:
        case closure::LetterKind::SpliceSplit:
            out["cut"] = cut_to_json(std::get<closure::SplicePayload>(l.payload).cut);
            break;
        case closure::LetterKind::XiMerge: {
            const auto& p = std::get<closure::XiPayload>(l.payload);
            out["at"] = closure_to_json(l.source);
            out["label"] = p.label;
            out["exp"] = p.exp;
            break;
        }
        case closure::LetterKind::UnitScalar: {
            const auto& p = std::get<closure::UnitPayload>(l.payload);
            out["at"] = closure_to_json(l.source);
            out["ring"] = to_string(p.value.kind());
            out["value"] = ring_to_string(p.value);
            break;
        }
    }
    return out;
}

closure::ElementaryMorphism letter_from_json(const Json& j) {
    std::string kind = str_at(j, "kind", "letter");
    if (kind == "theta") {
        closure::ClosureDescriptor src = closure_from_json(field(j, "source", "theta letter"));
        closure::ClosureDescriptor tgt = closure_from_json(field(j, "target", "theta letter"));
        closure::FreeWord cm = free_word_from_json(field(j, "complement_map", "theta letter"));
        mcg::IntMat action = mat_from_json(field(j, "action", "theta letter"));
        closure::ElementaryMorphism l = closure::make_theta(src, tgt, cm, action);
        auto& payload = std::get<closure::ThetaPayload>(l.payload);
        if (j.contains("phi_plus")) payload.phi_plus = mat_from_json(j.at("phi_plus"));
        if (j.contains("phi_minus")) payload.phi_minus = mat_from_json(j.at("phi_minus"));
        if (payload.phi_plus.has_value() != payload.phi_minus.has_value())
            bad("theta letter must carry both boundary maps or neither");
        return l;
    }
    if (kind == "splice-merge")
        return closure::make_splice_merge(cut_from_json(field(j, "cut", "splice letter")));
    if (kind == "splice-split")
        return closure::make_splice_split(cut_from_json(field(j, "cut", "splice letter")));
    if (kind == "xi") {
        closure::ClosureDescriptor at = closure_from_json(field(j, "at", "xi letter"));
        int exp = static_cast<int>(int_at(j, "exp", "xi letter"));
        return closure::make_xi(at, str_at(j, "label", "xi letter"), exp);
    }
    if (kind == "unit") {
        closure::ClosureDescriptor at = closure_from_json(field(j, "at", "unit letter"));
        RingKind rk = ring_kind_from_string(str_at(j, "ring", "unit letter"));
        return closure::make_unit(at, ring_parse(rk, str_at(j, "value", "unit letter")));
    }
    if (kind == "handle-minus" || kind == "handle-plus")
        bad("handle letters cannot be hand-written; use a constructor command");
    bad("unknown letter kind '" + kind + "'");
}

Json word_to_json(const closure::MorphismWord& w) {
    Json letters = Json::array();
    for (const auto& l : w.letters) letters.push_back(letter_to_json(l));
    return Json{{"source", closure_to_json(w.source)},
                {"target", closure_to_json(w.target)},
                {"letters", std::move(letters)}};
}

closure::MorphismWord word_from_json(const Json& j) {
    closure::MorphismWord w;
    w.source = closure_from_json(field(j, "source", "word"));
    w.target = closure_from_json(field(j, "target", "word"));
    const Json& letters = field(j, "letters", "word");
    if (!letters.is_array()) bad("word.letters must be an array");
    for (const Json& l : letters) w.letters.push_back(letter_from_json(l));
    closure::validate_word(w);
    return w;
}

// ---------------------------------------------------------------------------

Json assignment_to_json(const rank1::RankOneAssignment& a) {
    Json out = ring_spec_to_json(a.ring);
    Json closures = Json::object();
    for (const auto& [k, v] : a.closure_unit) closures[k] = ring_to_string(v);
    Json labels = Json::object();
    for (const auto& [k, v] : a.label_unit) labels[k] = ring_to_string(v);
    Json handles = Json::object();
    for (const auto& [k, v] : a.handle_unit) handles[std::to_string(k)] = ring_to_string(v);
    Json splices = Json::object();
    for (const auto& [k, v] : a.splice_unit) splices[k] = ring_to_string(v);
    out["closure_unit"] = std::move(closures);
    out["label_unit"] = std::move(labels);
    out["handle_unit"] = std::move(handles);
    out["splice_unit"] = std::move(splices);
    return out;
}

rank1::RankOneAssignment assignment_from_json(const Json& j) {
    rank1::RankOneAssignment a;
    a.ring = ring_spec_from_json(j);
    auto read_map = [&](const char* key, auto& dest) {
        if (!j.contains(key)) return;
        const Json& m = j.at(key);
        if (!m.is_object()) bad(std::string("assignment.") + key + " must be an object");
        for (auto it = m.begin(); it != m.end(); ++it) {
            if (!it.value().is_string()) bad("unit values must be ring-element strings");
            RingElem v = ring_parse(a.ring.kind, it.value().get<std::string>());
            if constexpr (std::is_same_v<std::decay_t<decltype(dest)>,
                                         std::map<std::uint64_t, RingElem>>) {
                dest[std::stoull(it.key())] = std::move(v);
            } else {
                dest[it.key()] = std::move(v);
            }
        }
    };
    read_map("closure_unit", a.closure_unit);
    read_map("label_unit", a.label_unit);
    read_map("handle_unit", a.handle_unit);
    read_map("splice_unit", a.splice_unit);
    rank1::validate_rank_one(a);
    return a;
}

Json khm_to_json(const khm::KhmModel& m) {
    Json systems_json = Json::object();
    for (const auto& t : m.tags) systems_json[t] = system_to_json(m.tag_systems.at(t));
    Json edges = Json::array();
    for (const auto& e : m.edges) {
        Json comps = Json::object();
        for (const auto& [pr, cls] : e.gen.components)
            comps[pr.first + "->" + pr.second] = hom_to_json(cls.rep);
        edges.push_back(Json{{"outer", e.outer}, {"inner", e.inner},
                             {"components", std::move(comps)}});
    }
    Json out = ring_spec_to_json(m.ring);
    out["tags"] = m.tags;
    out["systems"] = std::move(systems_json);
    out["edges"] = std::move(edges);
    return out;
}

khm::KhmModel khm_from_json(const Json& j) {
    khm::KhmModel m;
    m.ring = ring_spec_from_json(j);
    const Json& tags = field(j, "tags", "khm model");
    if (!tags.is_array()) bad("khm model tags must be an array");
    for (const Json& t : tags) m.tags.push_back(t.get<std::string>());
    const Json& sys = field(j, "systems", "khm model");
    for (const auto& t : m.tags) m.tag_systems[t] = system_from_json(field(sys, t, "systems"));
    const Json& edges = field(j, "edges", "khm model");
    if (!edges.is_array()) bad("khm model edges must be an array");
    for (const Json& e : edges) {
        khm::NestingEdge edge;
        edge.outer = str_at(e, "outer", "edge");
        edge.inner = str_at(e, "inner", "edge");
        if (!m.tag_systems.count(edge.outer) || !m.tag_systems.count(edge.inner))
            bad("edge references an unknown tag");
        edge.gen.source = m.tag_systems.at(edge.outer);
        edge.gen.target = m.tag_systems.at(edge.inner);
        const Json& comps = field(e, "components", "edge");
        if (!comps.is_object()) bad("edge components must be an object");
        for (auto it = comps.begin(); it != comps.end(); ++it) {
            auto [a, b] = split_arrow(it.key());
            edge.gen.components[{a, b}] =
                modalg::GClassHom{hom_from_json(it.value(), m.ring), m.ring.unit_group};
        }
        m.edges.push_back(std::move(edge));
    }
    return m;
}

} // namespace ptsys::io
