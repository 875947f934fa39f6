// dc1lab command-line front end: parse system/point/set descriptions, run an
// operation, write a JSON report. Exit codes: 0 completed (UNKNOWN verdicts
// included), 2 precondition or parse failure, 3 budget exceeded.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dc1lab/acceptance.hpp"
#include "dc1lab/dc1lab.hpp"

using namespace dc1lab;
using io::Json;
using systems::Point;
using systems::QuadraticNumber;
using systems::SystemSpec;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw precondition_error("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// temp file + rename so readers never observe a partial report
void write_atomically(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text << "\n";
        return;
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw precondition_error("cannot write file: " + tmp);
        out << text << "\n";
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw precondition_error("cannot move report into place: " + path);
}

QuadraticNumber parse_exact(const std::string& text) {
    if (text == "golden") return QuadraticNumber::golden();
    if (text == "sqrt5") return QuadraticNumber::sqrt5();
    return QuadraticNumber(parse_rational(text));
}

SystemSpec parse_system(const std::string& text) {
    if (text.rfind("fullshift", 0) == 0)
        return systems::make_full_shift(
            static_cast<uint32_t>(std::stoul(text.substr(9))));
    if (text == "rotation-golden")
        return systems::make_rotation(QuadraticNumber::golden());
    if (text.rfind("rotation:", 0) == 0)
        return systems::make_rotation(parse_exact(text.substr(9)));
    if (text.rfind("odometer", 0) == 0)
        return systems::make_odometer(static_cast<uint32_t>(std::stoul(text.substr(8))));
    if (text == "catmap") return systems::make_torus_automorphism(2, 1, 1, 1);
    // otherwise a JSON file
    const Json j = io::parse_document(read_file(text));
    return io::system_from_json(j.contains("system") ? j["system"] : j);
}

// point literals: rationals/"golden" for circle points, "pp:PREFIX/PERIOD"
// for shift points (symbols as digits), "digits:PREFIX/PERIOD" for odometer
// points, "x,y" for torus points, or a JSON file
Point parse_point(const SystemSpec& spec, const std::string& text) {
    const auto& sv = spec.kind().v;
    auto word_of = [](const std::string& s) {
        systems::Word w;
        for (char c : s) {
            if (c < '0' || c > '9') throw precondition_error("symbols must be digits");
            w.push_back(static_cast<systems::Symbol>(c - '0'));
        }
        return w;
    };
    if (std::holds_alternative<systems::CircleRotation>(sv))
        return systems::make_circle_point(parse_exact(text));
    if (std::holds_alternative<systems::FullShift>(sv) ||
        std::holds_alternative<systems::Sft>(sv)) {
        if (text.rfind("pp:", 0) == 0) {
            const std::string body = text.substr(3);
            const auto slash = body.find('/');
            if (slash == std::string::npos)
                throw precondition_error("shift point literal needs prefix/period");
            uint32_t alphabet = 2;
            if (const auto* fs = std::get_if<systems::FullShift>(&sv)) alphabet = fs->alphabet;
            if (const auto* s = std::get_if<systems::Sft>(&sv)) alphabet = s->alphabet;
            return systems::make_shift_point(systems::SymbolicSequence(
                alphabet, systems::PrefixPeriodic(word_of(body.substr(0, slash)),
                                                  word_of(body.substr(slash + 1)))));
        }
        const Json j = io::parse_document(read_file(text));
        return io::point_from_json(j.contains("point") ? j["point"] : j);
    }
    if (std::holds_alternative<systems::Odometer>(sv)) {
        if (text.rfind("digits:", 0) == 0) {
            const std::string body = text.substr(7);
            const auto slash = body.find('/');
            if (slash == std::string::npos)
                throw precondition_error("odometer literal needs prefix/period");
            return systems::make_odometer_point(systems::PrefixPeriodic(
                word_of(body.substr(0, slash)), word_of(body.substr(slash + 1))));
        }
        const Json j = io::parse_document(read_file(text));
        return io::point_from_json(j.contains("point") ? j["point"] : j);
    }
    if (std::holds_alternative<systems::TorusAutomorphism>(sv)) {
        const auto comma = text.find(',');
        if (comma != std::string::npos)
            return systems::make_torus_point(parse_exact(text.substr(0, comma)),
                                             parse_exact(text.substr(comma + 1)));
        const Json j = io::parse_document(read_file(text));
        return io::point_from_json(j.contains("point") ? j["point"] : j);
    }
    const Json j = io::parse_document(read_file(text));
    return io::point_from_json(j.contains("point") ? j["point"] : j);
}

// open-set literals: "cyl:010", "arc:center:radius", "digits:01", or JSON file
systems::OpenSetSpec parse_open(const SystemSpec& spec, const std::string& text) {
    auto word_of = [](const std::string& s) {
        systems::Word w;
        for (char c : s) {
            if (c < '0' || c > '9') throw precondition_error("symbols must be digits");
            w.push_back(static_cast<systems::Symbol>(c - '0'));
        }
        return w;
    };
    if (text.rfind("cyl:", 0) == 0) return systems::make_cylinder(word_of(text.substr(4)));
    if (text.rfind("arc:", 0) == 0) {
        const std::string body = text.substr(4);
        const auto colon = body.find(':');
        if (colon == std::string::npos)
            throw precondition_error("arc literal needs center:radius");
        return systems::make_arc(parse_exact(body.substr(0, colon)),
                                 parse_rational(body.substr(colon + 1)));
    }
    if (text.rfind("digits:", 0) == 0)
        return systems::make_digit_cylinder(word_of(text.substr(7)));
    (void)spec;
    const Json j = io::parse_document(read_file(text));
    return io::open_set_from_json(j.contains("open") ? j["open"] : j);
}

std::vector<QuadraticNumber> parse_eps_grid(const std::string& text) {
    std::vector<QuadraticNumber> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) grid.push_back(parse_exact(item));
    if (grid.empty()) throw precondition_error("empty eps grid");
    return grid;
}

Json envelope(const std::string& command, uint64_t seed, Json result) {
    return Json{{"schema", io::kSchema},
                {"type", "report"},
                {"command", command},
                {"seed", seed},
                {"result", std::move(result)}};
}

Json index_set_result(const furstenberg::IndexSet& s, const char* describes) {
    Json j = io::index_set_to_json(s);
    j["describes"] = describes;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-horizon chaos statistics over exact arithmetic"};
    app.require_subcommand(1);

    // shared options
    std::string out_path;
    uint64_t seed = 42;
    uint64_t horizon = 10000;
    uint64_t mmin = 1000, mmax = 100000;
    std::string growth = "11/10";
    std::string tol = "1/100";
    uint32_t resolution = 3;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_path, "output path (default: stdout)");
        cmd->add_option("--seed", seed, "seed recorded in the report");
    };

    // construct-tuple
    auto* c_construct = app.add_subcommand("construct-tuple", "build a scrambled tuple");
    uint64_t n_points = 2, initial = 10, accel = 100;
    uint32_t alphabet = 0;
    bool classic = false;
    c_construct->add_option("--n", n_points, "tuple size")->required();
    c_construct->add_option("--alphabet", alphabet, "alphabet size (default n+1)");
    c_construct->add_option("--initial", initial, "first phase length");
    c_construct->add_option("--accel", accel, "phase growth acceleration");
    c_construct->add_flag("--classic", classic, "use the minimal-growth schedule");
    add_common(c_construct);

    // analyze-tuple
    auto* c_analyze = app.add_subcommand("analyze-tuple", "density statistics of a tuple");
    std::string system_text, tuple_path, delta_text = "1/2", eps_text = "1/8,1/32,1/256";
    c_analyze->add_option("--system", system_text, "system description")->required();
    c_analyze->add_option("--tuple", tuple_path, "scrambled tuple JSON")->required();
    c_analyze->add_option("--delta", delta_text, "separation threshold");
    c_analyze->add_option("--eps", eps_text, "proximality grid, comma separated");
    c_analyze->add_option("--mmin", mmin, "smallest checkpoint");
    c_analyze->add_option("--mmax", mmax, "largest checkpoint");
    c_analyze->add_option("--growth", growth, "checkpoint growth factor");
    c_analyze->add_option("--tol", tol, "evidence tolerance");
    std::string csv_path;
    c_analyze->add_option("--csv", csv_path, "also write (m, d_m) rows of the A profile");
    add_common(c_analyze);

    // return-times
    auto* c_return = app.add_subcommand("return-times", "N(x, eps) below a horizon");
    std::string x_text, eps_one = "1/10";
    c_return->add_option("--system", system_text, "system description")->required();
    c_return->add_option("--x", x_text, "point")->required();
    c_return->add_option("--eps", eps_one, "radius");
    c_return->add_option("--horizon", horizon, "horizon");
    add_common(c_return);

    // hitting-times
    auto* c_hit = app.add_subcommand("hitting-times", "N(U, V) below a horizon");
    std::string u_text, v_text;
    c_hit->add_option("--system", system_text, "system description")->required();
    c_hit->add_option("--U", u_text, "source open set")->required();
    c_hit->add_option("--V", v_text, "target open set")->required();
    c_hit->add_option("--horizon", horizon, "horizon");
    add_common(c_hit);

    // family-test
    auto* c_family = app.add_subcommand("family-test", "finite-horizon family verdict");
    std::string set_path, family_name;
    uint64_t family_k = 0;
    c_family->add_option("--set", set_path, "index set JSON")->required();
    c_family->add_option("--family", family_name, "Frr | Fs | Ft")->required();
    c_family->add_option("--k", family_k, "gap bound / progression step / run length");
    add_common(c_family);

    // lemma12
    auto* c_l12 = app.add_subcommand("lemma12", "return-set inclusion via equicontinuity");
    std::string lambda_text, p_text, q_text;
    c_l12->add_option("--lambda", lambda_text, "minimal equicontinuous subsystem")
        ->required();
    c_l12->add_option("--p", p_text, "recurrent point")->required();
    c_l12->add_option("--q", q_text, "target point")->required();
    c_l12->add_option("--eps", eps_one, "radius");
    c_l12->add_option("--horizon", horizon, "horizon");
    add_common(c_l12);

    // lemma13
    auto* c_l13 = app.add_subcommand("lemma13", "difference-set and shifted-target "
                                                "hitting inclusions");
    std::string g_text, f_text, y_text, delta_one = "1/20";
    uint64_t j_shift = 0;
    c_l13->add_option("--g", g_text, "rotation or finite-orbit system")->required();
    c_l13->add_option("--y", y_text, "base point of g")->required();
    c_l13->add_option("--delta", delta_one, "ball radius");
    c_l13->add_option("--f", f_text, "second system")->required();
    c_l13->add_option("--U", u_text, "open set of f")->required();
    c_l13->add_option("--V", v_text, "open set of f")->required();
    c_l13->add_option("--j", j_shift, "target shift");
    c_l13->add_option("--horizon", horizon, "horizon");
    add_common(c_l13);

    // transitivity
    auto* c_trans = app.add_subcommand("transitivity", "hitting evidence matrix");
    std::string mode_text = "plain", with_text;
    c_trans->add_option("--system", system_text, "system description")->required();
    c_trans->add_option("--resolution", resolution, "basis resolution");
    c_trans->add_option("--horizon", horizon, "horizon");
    c_trans->add_option("--mode", mode_text, "plain | total:K | weakmix | product");
    c_trans->add_option("--with", with_text, "restriction system for product mode");
    add_common(c_trans);

    // stable-cover
    auto* c_cover = app.add_subcommand("stable-cover", "coverage by eps-stable sets");
    std::string sample_text = "zeros";
    uint64_t tail_start = 16;
    c_cover->add_option("--system", system_text, "system description")->required();
    c_cover->add_option("--sample", sample_text,
                        "zeros | origin | orbit:N | JSON file of points");
    c_cover->add_option("--eps", eps_one, "stability radius");
    c_cover->add_option("--resolution", resolution, "basis resolution");
    c_cover->add_option("--tail-start", tail_start, "window start");
    c_cover->add_option("--horizon", horizon, "window end");
    add_common(c_cover);

    // omega
    auto* c_omega = app.add_subcommand("omega", "visited cells and periodic proximity");
    c_omega->add_option("--system", system_text, "system description")->required();
    c_omega->add_option("--x", x_text, "point")->required();
    c_omega->add_option("--horizon", horizon, "horizon");
    c_omega->add_option("--resolution", resolution, "basis resolution");
    add_common(c_omega);

    // accept
    auto* c_accept = app.add_subcommand("accept", "run the acceptance suite");
    acceptance::AcceptanceConfig acfg;
    c_accept->add_option("--mmax", acfg.m_max, "tuple statistics horizon");
    c_accept->add_option("--horizon", acfg.set_horizon, "set algebra horizon");
    c_accept->add_option("--orbit-horizon", acfg.orbit_horizon, "orbit horizon");
    c_accept->add_option("--pairs", acfg.random_pairs, "random pairs");
    c_accept->add_option("--sets", acfg.random_sets, "random index sets");
    c_accept->add_option("--doubling", acfg.doubling_configs, "doubling configs");
    add_common(c_accept);

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_construct->parsed()) {
            const construct::BlockSchedule sched =
                classic ? construct::BlockSchedule::classic()
                        : construct::BlockSchedule(initial, accel);
            if (alphabet == 0) alphabet = static_cast<uint32_t>(n_points) + 1;
            const auto spec = construct::make_dc1_tuple_spec(n_points, sched, alphabet);
            write_atomically(out_path, io::scrambled_tuple_to_json(spec).dump(2));
            return 0;
        }
        if (c_analyze->parsed()) {
            const SystemSpec spec = parse_system(system_text);
            const auto tuple_spec =
                io::scrambled_tuple_from_json(io::parse_document(read_file(tuple_path)));
            std::vector<Point> tuple;
            for (const auto& s : tuple_spec.sequences())
                tuple.push_back(systems::make_shift_point(s));
            const orbitstats::CheckpointSchedule cps(mmin, mmax, parse_rational(growth));
            const auto verdict = orbitstats::dc1_tuple_statistics(
                spec, tuple, parse_exact(delta_text), parse_eps_grid(eps_text), cps,
                parse_rational(tol));
            if (!csv_path.empty())
                write_atomically(csv_path, io::density_profile_to_csv(verdict.a_profile));
            write_atomically(out_path,
                             envelope("analyze-tuple", seed, io::tuple_verdict_to_json(verdict))
                                 .dump(2));
            return 0;
        }
        if (c_return->parsed()) {
            const SystemSpec spec = parse_system(system_text);
            const Point x = parse_point(spec, x_text);
            const auto n = furstenberg::return_times(spec, x, parse_exact(eps_one), horizon);
            write_atomically(out_path,
                             envelope("return-times", seed,
                                      index_set_result(n, "return_time_set"))
                                 .dump(2));
            return 0;
        }
        if (c_hit->parsed()) {
            const SystemSpec spec = parse_system(system_text);
            const auto u = parse_open(spec, u_text);
            const auto v = parse_open(spec, v_text);
            const auto n = furstenberg::hitting_times(spec, u, v, horizon);
            write_atomically(out_path,
                             envelope("hitting-times", seed,
                                      index_set_result(n, "hitting_time_set"))
                                 .dump(2));
            return 0;
        }
        if (c_family->parsed()) {
            const auto set =
                io::index_set_from_json(io::parse_document(read_file(set_path)));
            furstenberg::Family family;
            std::optional<uint64_t> k;
            if (family_k > 0) k = family_k;
            if (family_name == "Frr")
                family = furstenberg::Frr{k};
            else if (family_name == "Fs")
                family = furstenberg::Fs{k};
            else if (family_name == "Ft")
                family = furstenberg::Ft{k};
            else
                throw precondition_error("unknown family: " + family_name);
            const auto v = furstenberg::family_test(set, family);
            Json result = io::family_verdict_to_json(v);
            result["describes"] = "family_membership_evidence";
            result["semantics"] =
                "IN/OUT describe the finite window only; no infinite claim is made";
            write_atomically(out_path, envelope("family-test", seed, result).dump(2));
            return 0;
        }
        if (c_l12->parsed()) {
            const SystemSpec lam = parse_system(lambda_text);
            const Point p = parse_point(lam, p_text);
            const Point q = parse_point(lam, q_text);
            const auto rep = furstenberg::lemma12_inclusion_check(
                lam, p, q, parse_exact(eps_one), horizon);
            Json result{{"describes", "return_set_inclusion"},
                        {"applicable", rep.applicable},
                        {"i", rep.i},
                        {"delta", io::quadratic_to_json(rep.delta)},
                        {"violations", rep.violations},
                        {"note", rep.note}};
            write_atomically(out_path, envelope("lemma12", seed, result).dump(2));
            return 0;
        }
        if (c_l13->parsed()) {
            const SystemSpec g = parse_system(g_text);
            const SystemSpec f = parse_system(f_text);
            const Point y = parse_point(g, y_text);
            const auto u = parse_open(f, u_text);
            const auto v = parse_open(f, v_text);
            const auto rep = furstenberg::lemma13_inclusion_check(
                g, y, parse_exact(delta_one), f, u, v, j_shift, horizon);
            Json pairs = Json::array();
            for (const auto& pe : rep.product_evidence)
                pairs.push_back(Json{{"u1", pe.u1},
                                     {"v1", pe.v1},
                                     {"common_index", pe.common_index
                                                          ? Json(*pe.common_index)
                                                          : Json(nullptr)}});
            Json result{{"describes", "difference_set_and_shifted_hitting_inclusions"},
                        {"inclusion1_violations", rep.inclusion1_violations},
                        {"inclusion2_violations", rep.inclusion2_violations},
                        {"product_evidence", pairs},
                        {"note", rep.note}};
            write_atomically(out_path, envelope("lemma13", seed, result).dump(2));
            return 0;
        }
        if (c_trans->parsed()) {
            const SystemSpec spec = parse_system(system_text);
            furstenberg::TransitivityMode mode = furstenberg::Plain{};
            if (mode_text.rfind("total:", 0) == 0)
                mode = furstenberg::Total{std::stoull(mode_text.substr(6))};
            else if (mode_text == "weakmix")
                mode = furstenberg::WeakMixing{};
            else if (mode_text == "product")
                mode = furstenberg::ProductWith{parse_system(with_text)};
            else if (mode_text != "plain")
                throw precondition_error("unknown transitivity mode: " + mode_text);
            const auto rep = furstenberg::transitivity_report(spec, resolution, horizon, mode);
            Json mats = Json::array();
            for (const auto& m : rep.matrices) {
                Json entries = Json::array();
                for (const auto& e : m.entries)
                    entries.push_back(Json{
                        {"u", e.u},
                        {"v", e.v},
                        {"first_hit", e.first_hit ? Json(*e.first_hit) : Json(nullptr)}});
                mats.push_back(Json{{"label", m.label},
                                    {"in", m.in_count},
                                    {"unknown", m.unknown_count},
                                    {"min_hit", m.min_hit ? Json(*m.min_hit) : Json(nullptr)},
                                    {"max_hit", m.max_hit ? Json(*m.max_hit) : Json(nullptr)},
                                    {"entries", entries}});
            }
            Json cells = Json::array();
            for (const auto& c : rep.cells) cells.push_back(io::open_set_to_json(c));
            Json result{{"describes", "transitivity_evidence_matrix"},
                        {"mode", rep.mode},
                        {"resolution", rep.resolution},
                        {"horizon", rep.horizon},
                        {"cells", cells},
                        {"matrices", mats},
                        {"semantics", rep.semantics}};
            write_atomically(out_path, envelope("transitivity", seed, result).dump(2));
            return 0;
        }
        if (c_cover->parsed()) {
            const SystemSpec spec = parse_system(system_text);
            std::vector<Point> sample;
            if (sample_text == "zeros") {
                uint32_t a = 2;
                if (const auto* fs = std::get_if<systems::FullShift>(&spec.kind().v))
                    a = fs->alphabet;
                sample.push_back(
                    systems::make_shift_point(systems::SymbolicSequence::constant(a, 0)));
            } else if (sample_text == "origin") {
                sample.push_back(
                    systems::make_torus_point(QuadraticNumber(), QuadraticNumber()));
            } else if (sample_text.rfind("orbit:", 0) == 0) {
                const size_t n = std::stoul(sample_text.substr(6));
                Point p = systems::make_circle_point(QuadraticNumber());
                for (size_t i = 0; i < n; ++i) {
                    sample.push_back(p);
                    p = systems::step(spec, p);
                }
            } else {
                const Json j = io::parse_document(read_file(sample_text));
                for (const auto& pj : j.at("points")) sample.push_back(io::point_from_json(pj));
            }
            const auto rep = stable::stable_cover_report(
                spec, sample, parse_exact(eps_one), resolution, tail_start, horizon);
            Json table = Json::array();
            for (const auto& cw : rep.table) {
                Json row{{"cell", io::open_set_to_json(rep.cells[cw.cell])},
                         {"covered", cw.covered}};
                if (cw.witness) {
                    row["witness"] = io::point_to_json(*cw.witness);
                    row["target"] = cw.target_index;
                    row["tail_sup"] = io::quadratic_to_json(cw.evidence.tail_sup);
                    row["verdict"] = stable::to_string(cw.evidence.verdict);
                }
                table.push_back(row);
            }
            Json result{{"describes", "stable_set_cell_coverage"},
                        {"coverage", io::rational_to_json(rep.coverage)},
                        {"table", table},
                        {"note", rep.note}};
            write_atomically(out_path, envelope("stable-cover", seed, result).dump(2));
            return 0;
        }
        if (c_omega->parsed()) {
            const SystemSpec spec = parse_system(system_text);
            const Point x = parse_point(spec, x_text);
            const auto rep = orbitstats::omega_limit_estimate(spec, x, horizon, resolution);
            Json cells = Json::array();
            for (size_t c = 0; c < rep.cells.size(); ++c)
                cells.push_back(Json{{"cell", io::open_set_to_json(rep.cells[c])},
                                     {"hits", rep.hit_counts[c]}});
            Json result{{"describes", "omega_limit_cell_estimate"},
                        {"visited_cells", rep.visited_cells},
                        {"periodic_proximity", rep.periodic_proximity},
                        {"detected_period", rep.detected_period ? Json(*rep.detected_period)
                                                                : Json(nullptr)},
                        {"cells", cells},
                        {"note", rep.note}};
            write_atomically(out_path, envelope("omega", seed, result).dump(2));
            return 0;
        }
        if (c_accept->parsed()) {
            acfg.seed = seed;
            const auto outcome = acceptance::run_acceptance(acfg, &std::cout);
            write_atomically(out_path, outcome.report.dump(2));
            return 0;
        }
    } catch (const budget_error& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 3;
    } catch (const parse_error& e) {
        if (e.line > 0)
            std::cerr << "parse error at line " << e.line << ", column " << e.column
                      << ": " << e.what() << "\n";
        else
            std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const precondition_error& e) {
        std::cerr << "precondition error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
