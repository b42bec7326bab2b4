#include "peritl/json_io.hpp"

#include <nlohmann/json.hpp>

namespace peritl {

using nlohmann::json;

json diagram_to_json(const AnnularDiagram& d) {
    return json{{"n_out", d.n_out}, {"n_in", d.n_in}, {"b", d.b},
                {"l", d.l},         {"out", d.out},   {"in", d.in}};
}

AnnularDiagram diagram_from_json(const json& j) {
    AnnularDiagram d;
    d.n_out = j.at("n_out").get<int>();
    d.n_in = j.at("n_in").get<int>();
    d.b = j.at("b").get<int>();
    d.l = j.at("l").get<long>();
    d.out = j.at("out").get<std::vector<int>>();
    d.in = j.at("in").get<std::vector<int>>();
    d.check();
    return d;
}

AnnularDiagram parse_diagram(const std::string& text) {
    return diagram_from_json(json::parse(text));
}

json state_to_json(const BState& s) {
    json j;
    switch (s.kind) {
        case FamilyKind::Wk:
            j["kind"] = "Wk";
            j["tuple"] = s.ints;
            j["winding"] = s.wind;
            break;
        case FamilyKind::Wkx:
            j["kind"] = "Wkx";
            j["tuple"] = s.ints;
            break;
        case FamilyKind::Vacuum: {
            j["kind"] = "V";
            std::vector<std::vector<int>> arcs;
            for (int i = 1; i < (int)s.ints.size(); i++)
                if (s.ints[i] > i) arcs.push_back({i, s.ints[i]});
            j["arcs"] = arcs;
            break;
        }
        case FamilyKind::XXZ: {
            j["kind"] = "XXZ";
            std::string spins;
            for (int8_t v : s.spins) spins += v > 0 ? '+' : '-';
            j["spins"] = spins;
            break;
        }
        case FamilyKind::RSOS: {
            j["kind"] = "RSOS";
            std::vector<int> path;
            for (int v : s.ints) path.push_back(v + 1);  // 1-indexed nodes
            j["path"] = path;
            break;
        }
        case FamilyKind::LDiag:
            j["kind"] = "L";
            j["enc"] = s.ints;
            j["winding"] = s.wind;
            break;
        case FamilyKind::Fused:
            j["kind"] = "fused";
            j["n"] = s.fused->n;
            j["na"] = s.fused->na;
            j["nb"] = s.fused->nb;
            j["u"] = state_to_json(s.fused->u);
            j["v"] = state_to_json(s.fused->v);
            break;
    }
    return j;
}

BState state_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "Wk") return wk_state(j.at("tuple").get<std::vector<int>>(), j.at("winding").get<long>());
    if (kind == "Wkx") return wkx_state(j.at("tuple").get<std::vector<int>>());
    if (kind == "V") {
        auto arcs = j.at("arcs").get<std::vector<std::vector<int>>>();
        int n = 0;
        for (auto& a : arcs) n = std::max({n, a.at(0), a.at(1)});
        std::vector<int> m(n + 1, 0);
        for (auto& a : arcs) {
            m[a.at(0)] = a.at(1);
            m[a.at(1)] = a.at(0);
        }
        return vac_state(m);
    }
    if (kind == "XXZ") {
        std::vector<int8_t> spins;
        for (char c : j.at("spins").get<std::string>()) spins.push_back(c == '+' ? 1 : -1);
        return xxz_state(spins);
    }
    if (kind == "RSOS") {
        std::vector<int> path;
        for (int v : j.at("path").get<std::vector<int>>()) path.push_back(v - 1);
        return rsos_state(path);
    }
    if (kind == "fused") {
        FusedCanon fc;
        fc.n = j.at("n").get<int>();
        fc.na = j.at("na").get<int>();
        fc.nb = j.at("nb").get<int>();
        fc.u = state_from_json(j.at("u"));
        fc.v = state_from_json(j.at("v"));
        return fused_bstate(fc);
    }
    throw std::invalid_argument("state_from_json: unknown kind '" + kind + "'");
}

json vector_to_json(const ModuleVector& v) {
    json terms = json::array();
    for (const auto& [s, c] : v.terms)
        terms.push_back(json{{"state", state_to_json(s)}, {"coeff", c.str()}});
    return json{{"family", v.family ? v.family->str() : ""}, {"n", v.n}, {"terms", terms}};
}

}  // namespace peritl
