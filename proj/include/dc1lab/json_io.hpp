#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dc1lab/construct.hpp"
#include "dc1lab/furstenberg.hpp"
#include "dc1lab/index_set.hpp"
#include "dc1lab/minimality.hpp"
#include "dc1lab/orbitstats.hpp"
#include "dc1lab/stable.hpp"
#include "dc1lab/system.hpp"

namespace dc1lab::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "dc1lab/1";

// ---------------------------------------------------------------------------
// Parsing helpers

inline parse_error parse_error_at(const std::string& text, size_t byte,
                                  const std::string& what) {
    size_t line = 1, col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return parse_error(what, line, col);
}

inline Json parse_document(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error_at(text, e.byte, e.what());
    }
}

inline void require_schema(const Json& j) {
    if (!j.is_object() || !j.contains("schema") || j["schema"] != kSchema)
        throw parse_error("document does not declare schema \"dc1lab/1\"");
}

// ---------------------------------------------------------------------------
// Exact numbers

inline Json rational_to_json(const Rational& r) { return r.get_str(); }

inline Rational rational_from_json(const Json& j) {
    if (!j.is_string()) throw parse_error("rational must be a \"p/q\" string");
    return parse_rational(j.get<std::string>());
}

inline Json quadratic_to_json(const systems::QuadraticNumber& q) {
    return Json{{"a", rational_to_json(q.a())}, {"b", rational_to_json(q.b())}};
}

inline systems::QuadraticNumber quadratic_from_json(const Json& j) {
    if (j.is_string()) return systems::QuadraticNumber(rational_from_json(j));
    if (!j.is_object() || !j.contains("a") || !j.contains("b"))
        throw parse_error("quadratic number needs fields a and b");
    return {rational_from_json(j["a"]), rational_from_json(j["b"])};
}

inline uint64_t u64_from_json(const Json& j, const char* what) {
    if (j.is_string()) {
        const Integer z(j.get<std::string>());
        return to_u64(z);
    }
    if (!j.is_number_unsigned())
        throw parse_error(std::string(what) + " must be a nonnegative integer");
    return j.get<uint64_t>();
}

// ---------------------------------------------------------------------------
// Sequences

inline Json word_to_json(const systems::Word& w) {
    Json arr = Json::array();
    for (auto s : w) arr.push_back(s);
    return arr;
}

inline systems::Word word_from_json(const Json& j) {
    if (!j.is_array()) throw parse_error("word must be an array of symbols");
    systems::Word w;
    for (const auto& s : j) {
        if (!s.is_number_unsigned()) throw parse_error("symbols must be nonnegative");
        w.push_back(s.get<systems::Symbol>());
    }
    return w;
}

inline Json prefix_periodic_to_json(const systems::PrefixPeriodic& p) {
    return Json{{"prefix", word_to_json(p.prefix)}, {"period", word_to_json(p.period)}};
}

inline systems::PrefixPeriodic prefix_periodic_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("period"))
        throw parse_error("prefix-periodic generator needs a period");
    systems::Word prefix;
    if (j.contains("prefix")) prefix = word_from_json(j["prefix"]);
    return systems::PrefixPeriodic(std::move(prefix), word_from_json(j["period"]));
}

inline Json sequence_to_json(const systems::SymbolicSequence& s) {
    Json j{{"alphabet_size", s.alphabet_size()}};
    if (s.is_prefix_periodic()) {
        j["prefix_periodic"] = prefix_periodic_to_json(s.prefix_periodic());
    } else {
        const auto& bt = s.block_program();
        Json ends = Json::array();
        for (uint64_t e : bt.phase_ends) ends.push_back(std::to_string(e));
        j["block_program"] = Json{{"phase_ends", ends},
                                  {"proximal", prefix_periodic_to_json(bt.proximal)},
                                  {"distal", prefix_periodic_to_json(bt.distal)}};
    }
    return j;
}

inline systems::SymbolicSequence sequence_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("alphabet_size"))
        throw parse_error("sequence needs alphabet_size");
    const uint32_t alphabet = j["alphabet_size"].get<uint32_t>();
    if (j.contains("prefix_periodic"))
        return systems::SymbolicSequence(alphabet,
                                         prefix_periodic_from_json(j["prefix_periodic"]));
    if (j.contains("block_program")) {
        const Json& b = j["block_program"];
        systems::BlockTracks bt;
        for (const auto& e : b.at("phase_ends"))
            bt.phase_ends.push_back(u64_from_json(e, "phase end"));
        bt.proximal = prefix_periodic_from_json(b.at("proximal"));
        bt.distal = prefix_periodic_from_json(b.at("distal"));
        return systems::SymbolicSequence(alphabet, std::move(bt));
    }
    throw parse_error("sequence needs prefix_periodic or block_program");
}

// ---------------------------------------------------------------------------
// Systems, points, open sets

Json point_to_json(const systems::Point& p);
systems::Point point_from_json(const Json& j);

inline Json system_to_json(const systems::SystemSpec& spec) {
    const auto& v = spec.kind().v;
    if (const auto* fs = std::get_if<systems::FullShift>(&v))
        return Json{{"kind", "full_shift"}, {"alphabet", fs->alphabet}};
    if (const auto* sft = std::get_if<systems::Sft>(&v)) {
        Json words = Json::array();
        for (const auto& w : sft->forbidden) words.push_back(word_to_json(w));
        return Json{{"kind", "sft"}, {"alphabet", sft->alphabet}, {"forbidden", words}};
    }
    if (const auto* rot = std::get_if<systems::CircleRotation>(&v))
        return Json{{"kind", "circle_rotation"}, {"angle", quadratic_to_json(rot->angle)}};
    if (const auto* od = std::get_if<systems::Odometer>(&v))
        return Json{{"kind", "odometer"}, {"base", od->base}};
    if (const auto* ta = std::get_if<systems::TorusAutomorphism>(&v))
        return Json{{"kind", "torus_automorphism"},
                    {"matrix", Json::array({Json::array({ta->m00, ta->m01}),
                                            Json::array({ta->m10, ta->m11})})}};
    if (const auto* pr = std::get_if<systems::ProductSystem>(&v)) {
        Json parts = Json::array();
        for (const auto& p : pr->parts) parts.push_back(system_to_json(p));
        return Json{{"kind", "product"}, {"parts", parts}};
    }
    const auto& r = std::get<systems::Restriction>(v);
    Json pts = Json::array();
    for (const auto& p : r.points) pts.push_back(point_to_json(p));
    return Json{{"kind", "restriction"}, {"parent", system_to_json(r.parent)},
                {"points", pts}};
}

inline systems::SystemSpec system_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("kind")) throw parse_error("system needs a kind");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "full_shift") return systems::make_full_shift(j.at("alphabet").get<uint32_t>());
    if (kind == "sft") {
        std::vector<systems::Word> forbidden;
        for (const auto& w : j.at("forbidden")) forbidden.push_back(word_from_json(w));
        return systems::make_sft(j.at("alphabet").get<uint32_t>(), std::move(forbidden));
    }
    if (kind == "circle_rotation")
        return systems::make_rotation(quadratic_from_json(j.at("angle")));
    if (kind == "odometer") return systems::make_odometer(j.at("base").get<uint32_t>());
    if (kind == "torus_automorphism") {
        const Json& m = j.at("matrix");
        return systems::make_torus_automorphism(
            m.at(0).at(0).get<long long>(), m.at(0).at(1).get<long long>(),
            m.at(1).at(0).get<long long>(), m.at(1).at(1).get<long long>());
    }
    if (kind == "product") {
        std::vector<systems::SystemSpec> parts;
        for (const auto& p : j.at("parts")) parts.push_back(system_from_json(p));
        return systems::make_product(std::move(parts));
    }
    if (kind == "restriction") {
        std::vector<systems::Point> pts;
        for (const auto& p : j.at("points")) pts.push_back(point_from_json(p));
        return systems::make_restriction(system_from_json(j.at("parent")), std::move(pts));
    }
    throw parse_error("unknown system kind: " + kind);
}

inline Json point_to_json(const systems::Point& p) {
    const auto& v = p.kind().v;
    if (const auto* sp = std::get_if<systems::ShiftPoint>(&v)) {
        Json j{{"kind", "shift"}, {"sequence", sequence_to_json(sp->seq)}};
        if (sp->offset) j["offset"] = sp->offset;
        return j;
    }
    if (const auto* cp = std::get_if<systems::CirclePoint>(&v))
        return Json{{"kind", "circle"}, {"x", quadratic_to_json(cp->x)}};
    if (const auto* op = std::get_if<systems::OdometerPoint>(&v))
        return Json{{"kind", "odometer"}, {"digits", prefix_periodic_to_json(op->digits)}};
    if (const auto* tp = std::get_if<systems::TorusPoint>(&v))
        return Json{{"kind", "torus"}, {"x", quadratic_to_json(tp->x)},
                    {"y", quadratic_to_json(tp->y)}};
    const auto& pp = std::get<systems::ProductPoint>(v);
    Json parts = Json::array();
    for (const auto& q : pp.parts) parts.push_back(point_to_json(q));
    return Json{{"kind", "product"}, {"parts", parts}};
}

inline systems::Point point_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("kind")) throw parse_error("point needs a kind");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "shift") {
        uint64_t offset = 0;
        if (j.contains("offset")) offset = u64_from_json(j["offset"], "offset");
        return systems::make_shift_point(sequence_from_json(j.at("sequence")), offset);
    }
    if (kind == "circle") return systems::make_circle_point(quadratic_from_json(j.at("x")));
    if (kind == "odometer")
        return systems::make_odometer_point(prefix_periodic_from_json(j.at("digits")));
    if (kind == "torus")
        return systems::make_torus_point(quadratic_from_json(j.at("x")),
                                         quadratic_from_json(j.at("y")));
    if (kind == "product") {
        std::vector<systems::Point> parts;
        for (const auto& q : j.at("parts")) parts.push_back(point_from_json(q));
        return systems::make_product_point(std::move(parts));
    }
    throw parse_error("unknown point kind: " + kind);
}

inline Json open_set_to_json(const systems::OpenSetSpec& o) {
    const auto& v = o.kind().v;
    if (const auto* c = std::get_if<systems::Cylinder>(&v))
        return Json{{"kind", "cylinder"}, {"word", word_to_json(c->word)}};
    if (const auto* a = std::get_if<systems::Arc>(&v))
        return Json{{"kind", "arc"}, {"center", quadratic_to_json(a->center)},
                    {"radius", rational_to_json(a->radius)}};
    if (const auto* b = std::get_if<systems::Box>(&v))
        return Json{{"kind", "box"},
                    {"x", Json{{"center", quadratic_to_json(b->x.center)},
                               {"radius", rational_to_json(b->x.radius)}}},
                    {"y", Json{{"center", quadratic_to_json(b->y.center)},
                               {"radius", rational_to_json(b->y.radius)}}}};
    if (const auto* d = std::get_if<systems::DigitCylinder>(&v))
        return Json{{"kind", "digit_cylinder"}, {"digits", word_to_json(d->digits)}};
    if (const auto* pc = std::get_if<systems::PointCell>(&v))
        return Json{{"kind", "point_cell"}, {"point", point_to_json(pc->p)}};
    const auto& po = std::get<systems::ProductOpen>(v);
    Json parts = Json::array();
    for (const auto& q : po.parts) parts.push_back(open_set_to_json(q));
    return Json{{"kind", "product"}, {"parts", parts}};
}

inline systems::OpenSetSpec open_set_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("kind")) throw parse_error("open set needs a kind");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "cylinder") return systems::make_cylinder(word_from_json(j.at("word")));
    if (kind == "arc")
        return systems::make_arc(quadratic_from_json(j.at("center")),
                                 rational_from_json(j.at("radius")));
    if (kind == "box")
        return systems::make_box(
            systems::Arc{quadratic_from_json(j.at("x").at("center")),
                         rational_from_json(j.at("x").at("radius"))},
            systems::Arc{quadratic_from_json(j.at("y").at("center")),
                         rational_from_json(j.at("y").at("radius"))});
    if (kind == "digit_cylinder")
        return systems::make_digit_cylinder(word_from_json(j.at("digits")));
    if (kind == "point_cell") return systems::make_point_cell(point_from_json(j.at("point")));
    if (kind == "product") {
        std::vector<systems::OpenSetSpec> parts;
        for (const auto& q : j.at("parts")) parts.push_back(open_set_from_json(q));
        return systems::make_product_open(std::move(parts));
    }
    throw parse_error("unknown open set kind: " + kind);
}

// ---------------------------------------------------------------------------
// Index sets and verdicts

inline Json index_set_to_json(const furstenberg::IndexSet& s) {
    Json members = Json::array();
    for (uint64_t m : s.members()) members.push_back(m);
    return Json{{"schema", kSchema}, {"horizon", s.horizon()}, {"members", members}};
}

inline furstenberg::IndexSet index_set_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("horizon"))
        throw parse_error("index set needs a horizon");
    std::vector<uint64_t> members;
    if (j.contains("members"))
        for (const auto& m : j["members"]) members.push_back(u64_from_json(m, "member"));
    return furstenberg::IndexSet(u64_from_json(j["horizon"], "horizon"), std::move(members));
}

inline Json family_verdict_to_json(const furstenberg::FamilyVerdict& v) {
    Json j{{"status", furstenberg::to_string(v.status)}};
    if (v.witness) j["witness"] = *v.witness;
    j["note"] = v.note;
    return j;
}

// ---------------------------------------------------------------------------
// Profiles and tuple verdicts

inline Json density_profile_to_json(const orbitstats::DensityProfile& p) {
    Json cps = Json::array();
    for (uint64_t c : p.checkpoints) cps.push_back(c);
    Json ds = Json::array();
    for (const auto& d : p.densities) ds.push_back(rational_to_json(d));
    return Json{{"checkpoints", cps},
                {"densities", ds},
                {"limsup_estimate", rational_to_json(p.limsup_estimate)},
                {"liminf_estimate", rational_to_json(p.liminf_estimate)}};
}

inline std::string density_profile_to_csv(const orbitstats::DensityProfile& p) {
    std::string out = "m,d_m\n";
    for (size_t i = 0; i < p.checkpoints.size(); ++i) {
        out += std::to_string(p.checkpoints[i]);
        out += ',';
        out += p.densities[i].get_str();
        out += '\n';
    }
    return out;
}

inline Json tuple_verdict_to_json(const orbitstats::TupleVerdict& v) {
    Json eps = Json::array();
    for (const auto& e : v.eps_grid) eps.push_back(quadratic_to_json(e));
    Json bs = Json::array();
    for (const auto& b : v.b_profiles) bs.push_back(density_profile_to_json(b));
    return Json{{"schema", kSchema},
                {"type", "tuple_verdict"},
                {"describes", "scrambled_tuple_density_statistics"},
                {"n", v.n},
                {"delta", quadratic_to_json(v.delta)},
                {"eps_grid", eps},
                {"tol", rational_to_json(v.tol)},
                {"dc1_evidence", v.dc1_evidence},
                {"a_profile", density_profile_to_json(v.a_profile)},
                {"b_profiles", bs},
                {"semantics",
                 "limsup_estimate is the max of exact partial densities over the "
                 "checkpoint grid; dc1_evidence means every estimate reaches 1 - tol"}};
}

// ---------------------------------------------------------------------------
// Scrambled tuple specs (byte-for-byte reproducible round trip)

inline Json scrambled_tuple_to_json(const construct::ScrambledTupleSpec& s) {
    Json anchors = Json::array();
    for (const auto& a : s.distal_anchors) anchors.push_back(prefix_periodic_to_json(a));
    return Json{{"schema", kSchema},
                {"type", "scrambled_tuple"},
                {"n", s.n},
                {"alphabet_size", s.alphabet_size},
                {"schedule", Json{{"initial_length", s.schedule.initial_length},
                                  {"accel", s.schedule.accel}}},
                {"distal_anchors", anchors},
                {"proximal_target", prefix_periodic_to_json(s.proximal_target)}};
}

inline construct::ScrambledTupleSpec scrambled_tuple_from_json(const Json& j) {
    require_schema(j);
    if (!j.contains("type") || j["type"] != "scrambled_tuple")
        throw parse_error("not a scrambled_tuple document");
    construct::ScrambledTupleSpec s;
    s.n = j.at("n").get<size_t>();
    s.alphabet_size = j.at("alphabet_size").get<uint32_t>();
    s.schedule = construct::BlockSchedule(
        u64_from_json(j.at("schedule").at("initial_length"), "initial_length"),
        u64_from_json(j.at("schedule").at("accel"), "accel"));
    for (const auto& a : j.at("distal_anchors"))
        s.distal_anchors.push_back(prefix_periodic_from_json(a));
    s.proximal_target = prefix_periodic_from_json(j.at("proximal_target"));
    if (s.distal_anchors.size() != s.n)
        throw parse_error("anchor count does not match n");
    return s;
}

inline Json document(const char* type, Json body) {
    Json j{{"schema", kSchema}, {"type", type}};
    for (auto& [k, v] : body.items()) j[k] = v;
    return j;
}

}  // namespace dc1lab::io
