#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ramsey/arrow.hpp"
#include "ramsey/classes.hpp"
#include "ramsey/errors.hpp"
#include "ramsey/hales_jewett.hpp"
#include "ramsey/json_io.hpp"
#include "ramsey/ordering.hpp"
#include "ramsey/partite.hpp"
#include "ramsey/structure.hpp"
#include "ramsey/tree.hpp"

using namespace ramsey;

namespace {

constexpr int kExitHolds = 0;
constexpr int kExitFails = 1;
constexpr int kExitBudget = 2;
constexpr int kExitInput = 3;

struct Common {
    std::string input = "-";
    std::string output;
    std::string certificate;
    std::string record;
    std::uint64_t budget = 0; // 0 keeps the default (RAMSEY_BUDGET or 2^26)
    int jobs = 1;
    unsigned seed = 0;
};

void add_common(CLI::App* cmd, Common& c, bool with_input = true) {
    if (with_input)
        cmd->add_option("-i,--input", c.input, "JSON input file, '-' for stdin");
    cmd->add_option("-o,--output", c.output, "result JSON file, '-' for stdout");
    cmd->add_option("--certificate", c.certificate, "certificate JSON file");
    cmd->add_option("--record", c.record, "run record JSON file");
    cmd->add_option("--budget", c.budget, "coloring/assignment budget");
    cmd->add_option("--jobs", c.jobs, "sweep worker count");
    cmd->add_option("--seed", c.seed, "seed for randomized drivers (unused by core ops)");
}

ArrowOptions arrow_opts(const Common& c) {
    ArrowOptions o;
    if (c.budget != 0) o.budget = c.budget;
    o.jobs = c.jobs;
    return o;
}

Json read_input(const std::string& path) {
    if (path == "-") {
        std::stringstream buf;
        buf << std::cin.rdbuf();
        return Json::parse(buf.str());
    }
    return load_json_file(path);
}

FiniteStructure key_structure(const Json& doc, const std::string& key) {
    if (!doc.is_object() || !doc.contains(key))
        throw InputError("input: missing structure \"" + key + "\"");
    return structure_from_json(doc.at(key));
}

// Renumbers leaf elements onto 0..k-1 by rank, keeping the shape.
LeafTree renumber_leaves(const LeafTree& t) {
    auto sorted = t.leaves();
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw InputError("input: tree leaves repeat an element");
    std::function<LeafTree(const LeafTree&)> go = [&](const LeafTree& u) {
        if (u.is_leaf()) {
            auto it = std::lower_bound(sorted.begin(), sorted.end(), u.element());
            return LeafTree::leaf(static_cast<int>(it - sorted.begin()));
        }
        return LeafTree::node(go(u.left()), go(u.right()));
    };
    return go(t);
}

// Trees are accepted both as nested arrays and as branching structures.
LeafTree key_tree(const Json& doc, const std::string& key) {
    if (!doc.is_object() || !doc.contains(key))
        throw InputError("input: missing tree \"" + key + "\"");
    const Json& j = doc.at(key);
    if (j.is_number_integer() || j.is_array()) return renumber_leaves(tree_from_json(j));
    return structure_to_tree(structure_from_json(j));
}

// Everything a run leaves behind. The certificate subdocument is byte-stable
// across repeated runs and worker counts; the record adds telemetry.
struct RunSink {
    std::string command;
    Json parameters = Json::object();
    Json inputs = Json::object();
    Json verdicts = Json::object();
    Json certificate;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    void hash_input(const std::string& name, const FiniteStructure& s) {
        inputs[name] = content_hash(canonical_json_string(s));
    }
    void hash_raw(const std::string& name, const Json& j) { inputs[name] = content_hash(j.dump()); }

    void finish(const Common& c, const Json& output) const {
        if (!c.output.empty()) {
            if (c.output == "-")
                std::cout << output.dump(2) << "\n";
            else
                write_json_file(c.output, output);
        }
        if (!c.certificate.empty() && !certificate.is_null())
            write_json_file(c.certificate, certificate);
        if (!c.record.empty()) {
            Json rec;
            rec["command"] = command;
            rec["parameters"] = parameters;
            rec["inputs"] = inputs;
            rec["verdicts"] = verdicts;
            rec["certificate"] = certificate;
            rec["wall_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - t0)
                                 .count();
            rec["workers"] = c.jobs;
            write_json_file(c.record, rec);
        }
    }
};

const char* verdict_name(Verdict v) { return v == Verdict::holds ? "holds" : "fails"; }

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stoi(item));
    return out;
}

ClassGenerator named_class(const std::string& name) {
    auto g = class_by_name(name);
    if (!g) throw InputError("class: unknown class \"" + name + "\"");
    return *g;
}

int arrow_like(const Common& c, const std::string& command, int r, int k) {
    auto doc = read_input(c.input);
    auto cs = key_structure(doc, "C");
    auto bs = key_structure(doc, "B");
    auto as = key_structure(doc, "A");
    RunSink sink;
    sink.command = command;
    sink.parameters = {{"r", r}, {"k", k}, {"jobs", c.jobs}};
    sink.hash_input("C", cs);
    sink.hash_input("B", bs);
    sink.hash_input("A", as);
    auto res = k == 1 ? check_arrow(cs, bs, as, r, arrow_opts(c))
                      : check_arrow_defect(cs, bs, as, r, k, arrow_opts(c));
    sink.verdicts["arrow"] = verdict_name(res.verdict);
    sink.certificate = certificate_to_json(res);
    std::cout << verdict_name(res.verdict) << "\n";
    sink.finish(c, sink.certificate);
    return res.verdict == Verdict::holds ? kExitHolds : kExitFails;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"structural Ramsey toolkit"};
    app.require_subcommand(1);
    std::function<int()> action;

    static Common c;

    // arrow
    auto* arrow = app.add_subcommand("arrow", "partition arrow verification");
    arrow->require_subcommand(1);
    {
        static int r = 2, k = 1;
        auto* check = arrow->add_subcommand("check", "verify C -> (B)^A_r");
        add_common(check, c);
        check->add_option("--r", r, "number of colors");
        check->callback([&]() { action = [&]() { return arrow_like(c, "arrow check", r, 1); }; });

        auto* defect = arrow->add_subcommand("defect", "verify with a defect threshold");
        add_common(defect, c);
        defect->add_option("--r", r, "number of colors");
        defect->add_option("--k", k, "color count allowed on the surviving family");
        defect->callback([&]() { action = [&]() { return arrow_like(c, "arrow defect", r, k); }; });

        auto* sim = arrow->add_subcommand("simultaneous", "joint arrow for several patterns");
        add_common(sim, c);
        sim->add_option("--r", r, "number of colors");
        sim->callback([&]() {
            action = [&]() {
                auto doc = read_input(c.input);
                auto cs = key_structure(doc, "C");
                auto bs = key_structure(doc, "B");
                if (!doc.contains("patterns") || !doc.at("patterns").is_array())
                    throw InputError("input: missing pattern list \"patterns\"");
                std::vector<FiniteStructure> patterns;
                for (const auto& j : doc.at("patterns")) patterns.push_back(structure_from_json(j));
                RunSink sink;
                sink.command = "arrow simultaneous";
                sink.parameters = {{"r", r}, {"patterns", patterns.size()}, {"jobs", c.jobs}};
                sink.hash_input("C", cs);
                sink.hash_input("B", bs);
                for (std::size_t i = 0; i < patterns.size(); ++i)
                    sink.hash_input("A" + std::to_string(i + 1), patterns[i]);
                auto res = check_simultaneous(cs, bs, patterns, r, arrow_opts(c));
                sink.verdicts["arrow"] = verdict_name(res.verdict);
                sink.certificate = certificate_to_json(res);
                std::cout << verdict_name(res.verdict) << "\n";
                sink.finish(c, sink.certificate);
                return res.verdict == Verdict::holds ? kExitHolds : kExitFails;
            };
        });
    }

    // hj
    auto* hj = app.add_subcommand("hj", "Hales-Jewett grids and lines");
    hj->require_subcommand(1);
    {
        static int m = 2, d = 1, r = 2, dmax = 4;
        auto* lines = hj->add_subcommand("lines", "list the lines of [m]^d");
        add_common(lines, c, /*with_input=*/false);
        lines->add_option("--m", m, "alphabet size");
        lines->add_option("--d", d, "dimension");
        lines->callback([&]() {
            action = [&]() {
                RunSink sink;
                sink.command = "hj lines";
                sink.parameters = {{"m", m}, {"d", d}};
                Json out;
                out["count"] = hj_line_count(m, d);
                out["lines"] = hj_lines(m, d);
                sink.certificate = out;
                std::cout << out["count"].get<std::uint64_t>() << "\n";
                sink.finish(c, out);
                return kExitHolds;
            };
        });

        auto* number = hj->add_subcommand("number", "least dimension with the line property");
        add_common(number, c, /*with_input=*/false);
        number->add_option("--m", m, "alphabet size");
        number->add_option("--r", r, "number of colors");
        number->add_option("--dmax", dmax, "largest dimension to try");
        number->callback([&]() {
            action = [&]() {
                RunSink sink;
                sink.command = "hj number";
                sink.parameters = {{"m", m}, {"r", r}, {"dmax", dmax}, {"jobs", c.jobs}};
                auto res = hj_number(m, r, dmax, arrow_opts(c));
                Json out;
                out["number"] = res ? Json(*res) : Json();
                sink.verdicts["found"] = res.has_value();
                sink.certificate = out;
                if (res)
                    std::cout << *res << "\n";
                else
                    std::cout << "none up to " << dmax << "\n";
                sink.finish(c, out);
                return res ? kExitHolds : kExitFails;
            };
        });

        auto* find = hj->add_subcommand("find-line", "first monochromatic line of a coloring");
        add_common(find, c);
        find->add_option("--m", m, "alphabet size");
        find->add_option("--d", d, "dimension");
        find->callback([&]() {
            action = [&]() {
                auto doc = read_input(c.input);
                const Json& cj = doc.is_array() ? doc : doc.at("coloring");
                std::vector<int> coloring = cj.get<std::vector<int>>();
                RunSink sink;
                sink.command = "hj find-line";
                sink.parameters = {{"m", m}, {"d", d}};
                sink.hash_raw("coloring", cj);
                auto line = find_mono_line(m, d, coloring);
                Json out;
                out["line"] = line ? Json(*line) : Json();
                sink.verdicts["found"] = line.has_value();
                sink.certificate = out;
                std::cout << (line ? Json(*line).dump() : "none") << "\n";
                sink.finish(c, out);
                return line ? kExitHolds : kExitFails;
            };
        });
    }

    // partite
    auto* partite = app.add_subcommand("partite", "partite powers and constructions");
    partite->require_subcommand(1);
    {
        static int r = 2, d = 1, ambient_max = 7;
        static std::string order_symbol = "ord";

        auto* power = partite->add_subcommand("nr-power", "d-th power of B over the transversal A");
        add_common(power, c);
        power->add_option("--d", d, "power dimension");
        power->callback([&]() {
            action = [&]() {
                auto doc = read_input(c.input);
                auto b = partite_from_json(doc.at("B"));
                Transversal a(partite_from_json(doc.at("A")));
                RunSink sink;
                sink.command = "partite nr-power";
                sink.parameters = {{"d", d}};
                sink.hash_input("B", b.base());
                sink.hash_input("A", a.base());
                auto out = nr_power(b, a, d, arrow_opts(c));
                Json j = partite_to_json(out);
                sink.certificate = j;
                std::cout << out.size() << " points on " << out.level_count() << " levels\n";
                sink.finish(c, j);
                return kExitHolds;
            };
        });

        auto* lemma = partite->add_subcommand("lemma", "level-preserving arrow witness");
        add_common(lemma, c);
        lemma->add_option("--r", r, "number of colors");
        lemma->callback([&]() {
            action = [&]() {
                auto doc = read_input(c.input);
                auto b = partite_from_json(doc.at("B"));
                Transversal a(partite_from_json(doc.at("A")));
                RunSink sink;
                sink.command = "partite lemma";
                sink.parameters = {{"r", r}, {"jobs", c.jobs}};
                sink.hash_input("B", b.base());
                sink.hash_input("A", a.base());
                auto res = partite_lemma_witness(a, b, r, arrow_opts(c));
                Json out;
                out["status"] =
                    res.status == ConstructionStatus::complete ? "complete" : "budget-partial";
                out["witness"] = partite_to_json(res.witness);
                out["m"] = res.m;
                out["d"] = res.d;
                out["d_exact"] = res.d_exact;
                out["note"] = res.note;
                sink.verdicts["status"] = out["status"];
                sink.certificate = out;
                std::cout << out["status"].get<std::string>() << ": " << res.witness.size()
                          << " points (m=" << res.m << ", d=" << res.d << ")\n";
                sink.finish(c, out);
                return res.status == ConstructionStatus::complete ? kExitHolds : kExitBudget;
            };
        });

        auto construct_action = [&](bool forb) {
            return [&, forb]() {
                auto doc = read_input(c.input);
                auto a = key_structure(doc, "A");
                auto b = key_structure(doc, "B");
                PartiteOptions popts;
                popts.arrow = arrow_opts(c);
                popts.order_symbol = order_symbol;
                popts.ambient_max_size = ambient_max;
                if (doc.contains("ambient"))
                    popts.ambient = structure_from_json(doc.at("ambient"));
                RunSink sink;
                sink.command = forb ? "partite construct-forb" : "partite construct";
                sink.parameters = {{"r", r}, {"order_symbol", order_symbol}, {"jobs", c.jobs}};
                sink.hash_input("A", a);
                sink.hash_input("B", b);
                ConstructionResult res;
                if (forb) {
                    std::vector<FiniteStructure> family;
                    if (!doc.contains("family") || !doc.at("family").is_array())
                        throw InputError("input: missing forbidden family \"family\"");
                    for (const auto& j : doc.at("family")) {
                        family.push_back(structure_from_json(j));
                        sink.hash_input("family" + std::to_string(family.size()), family.back());
                    }
                    res = partite_construction_forb(a, b, r, family, popts);
                } else {
                    res = partite_construction(a, b, r, popts);
                }
                Json out;
                out["status"] =
                    res.status == ConstructionStatus::complete ? "complete" : "budget-partial";
                out["output"] = structure_to_json(res.output);
                out["p"] = res.p;
                out["q"] = res.q;
                out["failed_stage"] = res.failed_stage;
                out["stage_log"] = res.stage_log_json();
                out["note"] = res.note;
                sink.verdicts["status"] = out["status"];
                sink.certificate = out;
                std::cout << out["status"].get<std::string>() << ": " << res.output.size()
                          << " points after " << res.q << " stages\n";
                sink.finish(c, out);
                return res.status == ConstructionStatus::complete ? kExitHolds : kExitBudget;
            };
        };

        auto* con = partite->add_subcommand("construct", "ordered partite construction");
        add_common(con, c);
        con->add_option("--r", r, "number of colors");
        con->add_option("--order-symbol", order_symbol, "linear order symbol");
        con->callback([&]() { action = construct_action(false); });

        auto* conf = partite->add_subcommand("construct-forb",
                                             "construction avoiding a forbidden family");
        add_common(conf, c);
        conf->add_option("--r", r, "number of colors");
        conf->add_option("--order-symbol", order_symbol, "linear order symbol");
        conf->add_option("--ambient-max-size", ambient_max, "ambient search size cap");
        conf->callback([&]() { action = construct_action(true); });
    }

    // tree
    auto* tree = app.add_subcommand("tree", "binary branching structures");
    tree->require_subcommand(1);
    {
        static int r = 2;
        static bool verify = false;
        static std::string c_symbol = "C", order_symbol = "ord";

        auto* check = tree->add_subcommand("check", "validate the branching axioms");
        add_common(check, c);
        check->add_option("--c-symbol", c_symbol, "branching symbol");
        check->add_option("--order-symbol", order_symbol, "linear order symbol");
        check->callback([&]() {
            action = [&]() {
                auto doc = read_input(c.input);
                auto s = structure_from_json(doc);
                RunSink sink;
                sink.command = "tree check";
                sink.hash_input("S", s);
                auto rep = check_c_axioms(s, c_symbol, order_symbol);
                Json out;
                out["valid"] = rep.valid;
                out["note"] = rep.note;
                sink.verdicts["valid"] = rep.valid;
                sink.certificate = out;
                std::cout << (rep.valid ? "valid" : "invalid: " + rep.note) << "\n";
                sink.finish(c, out);
                return rep.valid ? kExitHolds : kExitFails;
            };
        });

        auto* convert = tree->add_subcommand("convert",
                                             "tree JSON to structure, or structure to tree");
        add_common(convert, c);
        convert->callback([&]() {
            action = [&]() {
                auto doc = read_input(c.input);
                RunSink sink;
                sink.command = "tree convert";
                Json out;
                if (doc.is_number_integer() || doc.is_array()) {
                    auto t = tree_from_json(doc);
                    sink.hash_raw("tree", doc);
                    out = structure_to_json(tree_to_structure(t));
                } else {
                    auto s = structure_from_json(doc);
                    sink.hash_input("S", s);
                    out = tree_to_json(structure_to_tree(s));
                }
                sink.certificate = out;
                std::cout << out.dump() << "\n";
                sink.finish(c, out);
                return kExitHolds;
            };
        });

        auto* construct = tree->add_subcommand("construct", "inductive tree arrow witness");
        add_common(construct, c);
        construct->add_option("--r", r, "number of colors");
        construct->add_flag("--verify", verify, "re-check the arrow on the witness");
        construct->callback([&]() {
            action = [&]() {
                auto doc = read_input(c.input);
                auto a = key_tree(doc, "A");
                auto b = key_tree(doc, "B");
                RunSink sink;
                sink.command = "tree construct";
                sink.parameters = {{"r", r}, {"verify", verify}, {"jobs", c.jobs}};
                sink.hash_raw("A", tree_to_json(a));
                sink.hash_raw("B", tree_to_json(b));
                TreeOptions topts;
                topts.arrow = arrow_opts(c);
                auto tc = construct_ramsey_tree_chain(a, b, r, topts);
                Json out;
                out["witness"] = tree_to_json(tc.witness);
                Json chain = Json::array();
                for (const auto& t : tc.chain) chain.push_back(tree_to_json(t));
                out["chain"] = chain;
                bool ok = true;
                if (verify) {
                    auto res = check_arrow(tree_to_structure(tc.witness), tree_to_structure(b),
                                           tree_to_structure(a), r, topts.arrow);
                    ok = res.verdict == Verdict::holds;
                    out["verdict"] = verdict_name(res.verdict);
                    sink.verdicts["arrow"] = verdict_name(res.verdict);
                    std::cout << verdict_name(res.verdict) << ": ";
                }
                sink.certificate = out;
                std::cout << tc.witness.leaf_count() << " leaves, chain length "
                          << tc.chain.size() << "\n";
                sink.finish(c, out);
                return ok ? kExitHolds : kExitFails;
            };
        });
    }

    // class
    auto* cls = app.add_subcommand("class", "structure classes and their closure properties");
    cls->require_subcommand(1);
    {
        static std::string class_name = "lo", class2_name;
        static int max_size = 3, size = 0;
        static std::string alignment_text, points_text, p_symbol = "P";

        auto* ap = cls->add_subcommand("amalgamation", "check the amalgamation property");
        add_common(ap, c, /*with_input=*/false);
        ap->add_option("--class", class_name, "registered class name")->required();
        ap->add_option("--max-size", max_size, "largest side size");
        ap->callback([&]() {
            action = [&]() {
                auto g = named_class(class_name);
                RunSink sink;
                sink.command = "class amalgamation";
                sink.parameters = {{"class", class_name}, {"max_size", max_size}};
                auto rep = check_amalgamation_property(g, max_size);
                Json out;
                out["holds"] = rep.holds;
                if (!rep.holds) {
                    out["a"] = structure_to_json(*rep.a);
                    out["b1"] = structure_to_json(*rep.b1);
                    out["b2"] = structure_to_json(*rep.b2);
                    out["e1"] = rep.e1;
                    out["e2"] = rep.e2;
                }
                sink.verdicts["amalgamation"] = rep.holds ? "holds" : "fails";
                sink.certificate = out;
                std::cout << (rep.holds ? "holds" : "fails") << "\n";
                sink.finish(c, out);
                return rep.holds ? kExitHolds : kExitFails;
            };
        });

        auto* jep = cls->add_subcommand("jep", "check joint embedding");
        add_common(jep, c, /*with_input=*/false);
        jep->add_option("--class", class_name, "registered class name")->required();
        jep->add_option("--max-size", max_size, "largest side size");
        jep->callback([&]() {
            action = [&]() {
                auto g = named_class(class_name);
                RunSink sink;
                sink.command = "class jep";
                sink.parameters = {{"class", class_name}, {"max_size", max_size}};
                auto rep = check_jep(g, max_size);
                Json out;
                out["holds"] = rep.holds;
                if (!rep.holds) {
                    out["b1"] = structure_to_json(*rep.b1);
                    out["b2"] = structure_to_json(*rep.b2);
                }
                sink.verdicts["jep"] = rep.holds ? "holds" : "fails";
                sink.certificate = out;
                std::cout << (rep.holds ? "holds" : "fails") << "\n";
                sink.finish(c, out);
                return rep.holds ? kExitHolds : kExitFails;
            };
        });

        auto* enumerate = cls->add_subcommand("enumerate", "members of one size, up to isomorphism");
        add_common(enumerate, c, /*with_input=*/false);
        enumerate->add_option("--class", class_name, "registered class name")->required();
        enumerate->add_option("--size", size, "exact member size")->required();
        enumerate->callback([&]() {
            action = [&]() {
                auto g = named_class(class_name);
                RunSink sink;
                sink.command = "class enumerate";
                sink.parameters = {{"class", class_name}, {"size", size}};
                Json members = Json::array();
                for (const auto& s : g.members_of_size(size)) members.push_back(structure_to_json(s));
                Json out;
                out["count"] = members.size();
                out["members"] = members;
                sink.certificate = out;
                std::cout << members.size() << "\n";
                sink.finish(c, out);
                return kExitHolds;
            };
        });

        auto* sup = cls->add_subcommand("superpose", "overlay two structures on shared points");
        add_common(sup, c);
        sup->add_option("--alignment", alignment_text, "comma list: result point -> A2 point");
        sup->add_option("--class1", class_name, "enumerate superpositions of this class");
        sup->add_option("--class2", class2_name, "with this class");
        sup->add_option("--size", size, "member size for class enumeration");
        sup->callback([&]() {
            action = [&]() {
                RunSink sink;
                if (!class2_name.empty()) {
                    sink.command = "class superpose";
                    sink.parameters = {{"class1", class_name}, {"class2", class2_name},
                                       {"size", size}};
                    auto members =
                        superposition_members(named_class(class_name), named_class(class2_name),
                                              size);
                    Json out;
                    out["count"] = members.size();
                    Json arr = Json::array();
                    for (const auto& s : members) arr.push_back(structure_to_json(s));
                    out["members"] = arr;
                    sink.certificate = out;
                    std::cout << members.size() << "\n";
                    sink.finish(c, out);
                    return kExitHolds;
                }
                auto doc = read_input(c.input);
                auto a1 = key_structure(doc, "A");
                auto a2 = key_structure(doc, "B");
                std::vector<int> alignment;
                if (!alignment_text.empty())
                    alignment = parse_int_list(alignment_text);
                else
                    for (int i = 0; i < a1.size(); ++i) alignment.push_back(i);
                sink.command = "class superpose";
                sink.parameters = {{"alignment", alignment}};
                sink.hash_input("A", a1);
                sink.hash_input("B", a2);
                Json out = structure_to_json(superpose(a1, a2, alignment));
                sink.certificate = out;
                std::cout << "superposed " << a1.size() << " points\n";
                sink.finish(c, out);
                return kExitHolds;
            };
        });

        auto* product = cls->add_subcommand("product", "full product of factors");
        add_common(product, c);
        product->callback([&]() {
            action = [&]() {
                auto doc = read_input(c.input);
                std::vector<FiniteStructure> factors;
                if (doc.contains("factors") && doc.at("factors").is_array())
                    for (const auto& j : doc.at("factors")) factors.push_back(structure_from_json(j));
                else {
                    factors.push_back(key_structure(doc, "A"));
                    factors.push_back(key_structure(doc, "B"));
                }
                RunSink sink;
                sink.command = "class product";
                for (std::size_t i = 0; i < factors.size(); ++i)
                    sink.hash_input("factor" + std::to_string(i + 1), factors[i]);
                auto p = full_product(factors);
                Json out;
                out["product"] = structure_to_json(p.product);
                out["coords"] = p.coords;
                sink.certificate = out;
                std::cout << p.product.size() << " points\n";
                sink.finish(c, out);
                return kExitHolds;
            };
        });

        auto* constants = cls->add_subcommand("constants", "expand by slice relations at points");
        add_common(constants, c);
        constants->add_option("--points", points_text, "comma list of pinned points")->required();
        constants->callback([&]() {
            action = [&]() {
                auto doc = read_input(c.input);
                auto s = structure_from_json(doc);
                RunSink sink;
                sink.command = "class constants";
                sink.parameters = {{"points", points_text}};
                sink.hash_input("S", s);
                Json out = structure_to_json(expand_with_constants(s, parse_int_list(points_text)));
                sink.certificate = out;
                std::cout << "expanded signature size "
                          << out.at("signature").size() << "\n";
                sink.finish(c, out);
                return kExitHolds;
            };
        });

        auto* du = cls->add_subcommand("disjoint-union", "marked disjoint union");
        add_common(du, c);
        du->add_option("--p-symbol", p_symbol, "marker symbol for the left summand");
        du->callback([&]() {
            action = [&]() {
                auto doc = read_input(c.input);
                auto a1 = key_structure(doc, "A");
                auto a2 = key_structure(doc, "B");
                RunSink sink;
                sink.command = "class disjoint-union";
                sink.parameters = {{"p_symbol", p_symbol}};
                sink.hash_input("A", a1);
                sink.hash_input("B", a2);
                Json out = structure_to_json(disjoint_union_p(a1, a2, p_symbol));
                sink.certificate = out;
                std::cout << a1.size() + a2.size() << " points\n";
                sink.finish(c, out);
                return kExitHolds;
            };
        });
    }

    // ordering
    auto* ordering = app.add_subcommand("ordering", "order expansions of a class");
    ordering->require_subcommand(1);
    {
        static std::string class_name, order_symbol, x_path, variant;
        static int max_size = 4;

        auto* check = ordering->add_subcommand("check", "search an ordering-property witness");
        add_common(check, c);
        check->add_option("--class", class_name, "registered class name")->required();
        check->add_option("--order-symbol", order_symbol,
                          "order symbol treated as the expansion (default: lt2 for two-orders, "
                          "ord otherwise)");
        check->add_option("--x", x_path, "structure file for x (alias of --input)");
        check->add_option("--max-size", max_size, "largest candidate size");
        check->callback([&]() {
            action = [&]() {
                auto g = named_class(class_name);
                std::string sym = order_symbol;
                if (sym.empty()) sym = class_name == "two-orders" ? "lt2" : "ord";
                auto doc = read_input(x_path.empty() ? c.input : x_path);
                auto x = structure_from_json(doc);
                RunSink sink;
                sink.command = "ordering check";
                sink.parameters = {{"class", class_name}, {"order_symbol", sym},
                                   {"max_size", max_size}};
                sink.hash_input("X", x);
                OrderExpansionFamily fam{g, sym};
                auto rep = check_ordering_property(fam, x, max_size);
                Json out;
                out["y"] = rep.y ? structure_to_json(*rep.y) : Json();
                if (rep.blocking_x) out["blocking_x"] = structure_to_json(*rep.blocking_x);
                if (rep.blocking_y) out["blocking_y"] = structure_to_json(*rep.blocking_y);
                sink.verdicts["ordering_property"] = rep.y.has_value() ? "witnessed" : "blocked";
                sink.certificate = out;
                std::cout << (rep.y ? "witnessed at size " + std::to_string(rep.y->size())
                                    : "no witness up to size " + std::to_string(max_size))
                          << "\n";
                sink.finish(c, out);
                return rep.y ? kExitHolds : kExitFails;
            };
        });

        auto* defeat = ordering->add_subcommand("defeat", "convex coloring with no "
                                                          "monochromatic target copy");
        add_common(defeat, c);
        defeat->add_option("--class", variant, "equivalence or ctree")->required();
        defeat->add_option("--c", x_path, "structure file for the colored member "
                                          "(alias of --input)");
        defeat->callback([&]() {
            action = [&]() {
                auto doc = read_input(x_path.empty() ? c.input : x_path);
                auto s = structure_from_json(doc);
                RunSink sink;
                sink.command = "ordering defeat";
                sink.parameters = {{"class", variant}};
                sink.hash_input("C", s);
                DefeatColoring d;
                if (variant == "equivalence" || variant == "equivalence-order")
                    d = convex_defeat_equivalence(s);
                else if (variant == "ctree" || variant == "convex-branching" ||
                         variant == "branching-order")
                    d = convex_defeat_ctree(s);
                else
                    throw InputError("ordering: defeat variant must be equivalence or ctree");
                Json out;
                out["pattern"] = structure_to_json(d.pattern);
                out["target"] = structure_to_json(d.target);
                out["coloring"] = d.coloring;
                out["convex_order"] = d.convex_order;
                sink.certificate = out;
                std::cout << d.coloring.size() << " pattern copies colored\n";
                sink.finish(c, out);
                return kExitHolds;
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInput;
    }

    try {
        return action ? action() : kExitInput;
    } catch (const BudgetError& e) {
        std::cerr << "budget: " << e.what() << "\n";
        return kExitBudget;
    } catch (const InputError& e) {
        std::cerr << "input: " << e.what() << "\n";
        return kExitInput;
    } catch (const InvariantError& e) {
        std::cerr << "invariant: " << e.what() << "\n";
        return kExitInput;
    } catch (const Json::exception& e) {
        std::cerr << "input: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
