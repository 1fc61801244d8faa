#include "ramsey/json_io.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

namespace ramsey {

Json structure_to_json(const FiniteStructure& s) {
    Json sig = Json::array();
    for (const auto& sym : s.signature().symbols())
        sig.push_back({{"name", sym.name}, {"arity", sym.arity}});
    Json rels = Json::object();
    for (int si = 0; si < s.signature().size(); ++si) {
        Json ts = Json::array();
        for (const auto& t : s.relation(si)) ts.push_back(t);
        rels[s.signature().at(si).name] = std::move(ts);
    }
    return Json{{"signature", sig}, {"size", s.size()}, {"relations", rels}};
}

FiniteStructure structure_from_json(const Json& j) {
    try {
        if (!j.is_object() || !j.contains("signature") || !j.contains("size"))
            throw InputError("structure JSON: expected object with signature/size/relations");
        std::vector<RelationSymbol> syms;
        for (const auto& e : j.at("signature"))
            syms.push_back({e.at("name").get<std::string>(), e.at("arity").get<int>()});
        Signature sig(std::move(syms));
        FiniteStructure out(sig, j.at("size").get<int>());
        if (j.contains("relations")) {
            for (const auto& [name, ts] : j.at("relations").items()) {
                if (!sig.contains(name))
                    throw InputError("structure JSON: relation '" + name + "' not in signature");
                for (const auto& t : ts) out.add_tuple(name, t.get<Tuple>());
            }
        }
        return out;
    } catch (const Json::exception& e) {
        throw InputError(std::string("structure JSON: ") + e.what());
    }
}

std::string canonical_json_string(const FiniteStructure& s) {
    return structure_to_json(s).dump();
}

std::string content_hash(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw InputError("invalid JSON in '" + path + "': " + e.what());
    }
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

} // namespace ramsey
