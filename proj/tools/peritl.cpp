// peritl: exact computations in the enlarged periodic Temperley-Lieb category
// (annular diagram composition, generator-word normal forms, module families,
// fusion of families).

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "peritl/checks.hpp"
#include "peritl/fusion.hpp"
#include "peritl/json_io.hpp"
#include "peritl/svg.hpp"
#include "peritl/transform.hpp"
#include "peritl/twohole.hpp"

using namespace peritl;
using nlohmann::json;

namespace {

struct Options {
    std::string format = "text";
    uint64_t seed = 0;
};

void emit(const Options& opt, const json& j, const std::string& text) {
    if (opt.format == "json")
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

int cmd_compose(const Options& opt, const std::string& left, const std::string& right) {
    auto [d, f] = compose(parse_diagram(left), parse_diagram(right));
    json j{{"diagram", diagram_to_json(d)}, {"scalar", f.str()}};
    std::ostringstream os;
    os << "diagram: " << diagram_to_json(d).dump() << "\nscalar: " << f.str() << "\n";
    emit(opt, j, os.str());
    return 0;
}

int cmd_normalize(const Options& opt, const std::string& word_text) {
    Word w = parse_word(word_text);
    CanonicalWordState st = normalize(w);
    json j{{"word", word_str(canonical_word(st))},
           {"beta_power", st.beta_pow},
           {"bridges", st.k2},
           {"winding", st.l},
           {"n_out", st.n_out},
           {"n_in", st.n_in},
           {"j_out", st.j_out},
           {"s_out", st.s_out},
           {"j_in", st.j_in},
           {"s_in", st.s_in},
           {"diagram", diagram_to_json(state_to_diagram(st))}};
    std::ostringstream os;
    os << "canonical: " << word_str(canonical_word(st)) << "\nscalar: beta^" << st.beta_pow
       << "\ndiagram: " << diagram_to_json(state_to_diagram(st)).dump() << "\n";
    emit(opt, j, os.str());
    return 0;
}

int cmd_act(const Options& opt, const std::string& family, int n, const std::string& word_text,
            const std::string& diagram_text, long state_index) {
    FamilyPtr fam = parse_family(family);
    auto states = basis(fam, n);
    if (state_index < 0 || state_index >= (long)states.size())
        throw std::invalid_argument("act: --state index out of range (basis has " +
                                    std::to_string(states.size()) + " states)");
    ModuleVector v = unit_vector(fam, n, states[state_index]);
    ModuleVector out;
    if (!diagram_text.empty())
        out = act_diagram(parse_diagram(diagram_text), v);
    else
        out = act_word(parse_word(word_text, n), v);
    json j = vector_to_json(out);
    std::ostringstream os;
    os << "input state: " << states[state_index].str() << "\nresult (" << out.terms.size()
       << " terms at N=" << out.n << "):\n";
    for (const auto& [s, c] : out.terms) os << "  " << s.str() << "  *  " << c.str() << "\n";
    emit(opt, j, os.str());
    return 0;
}

int cmd_dims(const Options& opt, const std::string& family, int n) {
    FamilyPtr fam = parse_family(family);
    auto d = dimension(fam, n);
    json j{{"family", fam->str()}, {"n", n}};
    std::ostringstream os;
    if (d) {
        j["dim"] = *d;
        os << *d << "\n";
    } else {
        j["dim"] = nullptr;
        os << "infinite (enumeration bounded)\n";
    }
    emit(opt, j, os.str());
    return 0;
}

int cmd_fuse(const Options& opt, const std::string& left, const std::string& right, int n,
             int cutoff, int increments) {
    HarvestReport rep =
        harvest_and_rank(parse_family(left), parse_family(right), n, cutoff, opt.seed, increments);
    json j{{"left", left},          {"right", right},
           {"size", n},             {"seed", rep.seed},
           {"cutoffs", rep.cutoffs},{"states", rep.states},
           {"relations", rep.relations}, {"rank", rep.rank},
           {"dim_estimate", rep.dim_estimate}, {"estimates", rep.estimates},
           {"stable", rep.stable}};
    std::ostringstream os;
    os << "states: " << rep.states << "\nrelations: " << rep.relations << "\nrank: " << rep.rank
       << "\ndim_estimate: " << rep.dim_estimate << "\nestimates:";
    for (long e : rep.estimates) os << " " << e;
    os << "\nstable: " << (rep.stable ? "yes" : "no") << "\nseed: " << rep.seed << "\n";
    emit(opt, j, os.str());
    return rep.stable ? 0 : 1;
}

int cmd_fuse_check(const Options& opt, const std::string& witness, const std::string& left,
                   const std::string& right, const std::string& third, int cap, int word_len) {
    FamilyPtr ma = parse_family(left);
    FamilyPtr mb = parse_family(right);
    FusionWitness w = parse_fusion_witness(witness);
    json j{{"witness", witness}, {"left", left}, {"right", right}, {"cap", cap}};
    std::ostringstream os;
    bool pass = false;
    if (w == FusionWitness::assoc_phi || w == FusionWitness::assoc_psi) {
        FamilyPtr mc = parse_family(third.empty() ? "V" : third);
        AssocReport rep = check_associativity_instances(ma, mb, mc, cap, word_len);
        pass = rep.pass;
        j["checked"] = rep.checked;
        j["outcome"] = rep.pass ? "pass" : "fail";
        if (!rep.first_failure.empty()) j["first_failure"] = rep.first_failure;
        os << "associativity instances: " << (rep.pass ? "pass" : "fail") << " ("
           << rep.checked << " checked)";
        if (!rep.first_failure.empty()) os << " first failure: " << rep.first_failure;
        os << "\n";
    } else {
        if (w == FusionWitness::minus_sign) ma = with_transform(ma, TransformTag::minus);
        if (w == FusionWitness::reflect_pair) {
            ma = with_transform(ma, TransformTag::reflect);
            mb = with_transform(mb, TransformTag::reflect);
        }
        AnnihilationReport rep = check_annihilates(w, ma, mb, cap);
        pass = rep.outcome == CheckOutcome::pass;
        j["checked"] = rep.checked;
        j["outcome"] = outcome_str(rep.outcome);
        if (!rep.first_failure.empty()) j["first_failure"] = rep.first_failure;
        os << "witness annihilation: " << outcome_str(rep.outcome) << " (" << rep.checked
           << " generators)";
        if (!rep.first_failure.empty()) os << " first failure: " << rep.first_failure;
        os << "\n";
    }
    emit(opt, j, os.str());
    return pass ? 0 : 1;
}

int cmd_check_relations(const Options& opt, int nmax, const std::string& family) {
    json j;
    std::ostringstream os;
    bool pass = true;
    if (family.empty()) {
        SuiteReport rep = check_relations_diagram(nmax);
        pass = rep.pass;
        j = json{{"suite", "diagram"},
                 {"nmax", nmax},
                 {"checked", rep.checked},
                 {"pass", rep.pass}};
        if (!rep.first_failure.empty()) j["first_failure"] = rep.first_failure;
        os << "relations (2.5) on diagrams, N <= " << nmax << ": "
           << (rep.pass ? "pass" : "FAIL") << " (" << rep.checked << " instances)";
        if (!rep.first_failure.empty()) os << " first failure: " << rep.first_failure;
        os << "\n";
    } else {
        FamilyPtr fam = parse_family(family);
        SuiteReport rep = check_relations_family(fam, nmax);
        pass = rep.pass;
        j = json{{"suite", "family"},   {"family", fam->str()},
                 {"nmax", nmax},        {"checked", rep.checked},
                 {"pass", rep.pass},    {"max_dev", rep.max_dev}};
        if (!rep.first_failure.empty()) j["first_failure"] = rep.first_failure;
        os << "relations (2.5) on " << fam->str() << ", N <= " << nmax << ": "
           << (rep.pass ? "pass" : "FAIL") << " (" << rep.checked
           << " instances, max dev " << rep.max_dev << ")";
        if (!rep.first_failure.empty()) os << " first failure: " << rep.first_failure;
        os << "\n";
    }
    emit(opt, j, os.str());
    return pass ? 0 : 1;
}

int cmd_check_iso(const Options& opt, const std::string& kind_name, const std::string& family,
                  int nmax) {
    WitnessKind kind = parse_witness_kind(kind_name);
    FamilyPtr base;
    if (!family.empty()) {
        base = parse_family(family);
    } else {
        switch (kind) {
            case WitnessKind::Wk_minus:
            case WitnessKind::Wk_reflect: base = make_wk(2); break;
            case WitnessKind::Wkx_minus:
            case WitnessKind::Wkx_reflect: base = make_wkx(2); break;
            case WitnessKind::V_reflect: base = make_vacuum(); break;
            case WitnessKind::RSOS_minus:
            case WitnessKind::RSOS_reflect: base = make_rsos({ADE::A, 3, 1, {}}); break;
            case WitnessKind::XXZ_minus:
            case WitnessKind::XXZ_reflect: base = make_xxz(0); break;
        }
    }
    IsoWitness w(kind, base);
    IntertwinerReport rep = verify_intertwiner(w, nmax);
    json j{{"kind", kind_name},
           {"base", base->str()},
           {"source", w.source()->str()},
           {"target", w.target()->str()},
           {"nmax", nmax},
           {"checked", rep.checked},
           {"pass", rep.pass},
           {"bijective", rep.bijective},
           {"max_dev", rep.max_numeric_dev}};
    if (!rep.first_failure.empty()) j["first_failure"] = rep.first_failure;
    std::ostringstream os;
    os << kind_name << " [" << w.source()->str() << " -> " << w.target()->str() << "], N <= "
       << nmax << ": " << (rep.pass ? "pass" : "FAIL") << " (" << rep.checked
       << " generator instances, max dev " << rep.max_numeric_dev << ")";
    if (!rep.first_failure.empty()) os << " first failure: " << rep.first_failure;
    os << "\n";
    emit(opt, j, os.str());
    return rep.pass ? 0 : 1;
}

int cmd_render(const std::string& diagram_text, const std::string& outfile) {
    std::string svg = render_svg(parse_diagram(diagram_text));
    if (outfile.empty() || outfile == "-") {
        std::cout << svg;
    } else {
        std::ofstream f(outfile);
        if (!f) throw std::invalid_argument("render: cannot open '" + outfile + "'");
        f << svg;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact symbolic engine for the enlarged periodic Temperley-Lieb category"};
    app.require_subcommand(1);
    Options opt;
    app.add_option("--format", opt.format, "output format: text|json")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_option("--seed", opt.seed, "seed for randomized procedures (default 0)");

    std::string left, right, third, word_text, diagram_text, family, witness, kind, outfile;
    int n = 0, nmax = 5, cutoff = 8, cap = 2, word_len = 2, increments = 2;
    long state_index = 0;

    auto* c_compose = app.add_subcommand("compose", "compose two diagrams (JSON in, JSON out)");
    c_compose->add_option("--left", left, "left diagram (JSON)")->required();
    c_compose->add_option("--right", right, "right diagram (JSON)")->required();

    auto* c_norm = app.add_subcommand("normalize", "canonical form of a generator word");
    c_norm->add_option("--word", word_text, "word, e.g. 'c[6,1] cd[6,0]'")->required();

    auto* c_act = app.add_subcommand("act", "act a word or diagram on a module basis state");
    c_act->add_option("--family", family, "family, e.g. Wkx:k=1,x=x1")->required();
    c_act->add_option("--n", n, "module size N")->required();
    c_act->add_option("--word", word_text, "word acting on size N");
    c_act->add_option("--diagram", diagram_text, "diagram acting on size N (JSON)");
    c_act->add_option("--state", state_index, "basis state index (default 0)");

    auto* c_dims = app.add_subcommand("dims", "module dimension");
    c_dims->add_option("--family", family, "family specifier")->required();
    c_dims->add_option("--n", n, "module size N")->required();

    auto* c_fuse = app.add_subcommand("fuse", "fused-module dimension estimate by generic rank");
    c_fuse->add_option("--left", left, "left family")->required();
    c_fuse->add_option("--right", right, "right family")->required();
    c_fuse->add_option("--size", n, "module size N")->required();
    c_fuse->add_option("--cutoff", cutoff, "cap on N_a + N_b (default 8)");
    c_fuse->add_option("--increments", increments, "extra cutoff steps for stability (default 2)");

    auto* c_fc = app.add_subcommand("fuse-check", "witness annihilation suites");
    c_fc->add_option("witness", witness,
                     "swap|minus|reflect|vacuum|vacuum_psi|dual|assoc")
        ->required();
    c_fc->add_option("--left", left, "left family")->required();
    c_fc->add_option("--right", right, "right family")->required();
    c_fc->add_option("--third", third, "third family (assoc only)");
    c_fc->add_option("--cap", cap, "size cap for N_a, N_b (default 2)");
    c_fc->add_option("--word-len", word_len, "lambda word length for assoc (default 2)");

    auto* c_cr = app.add_subcommand("check-relations", "defining relations suite");
    c_cr->add_option("--nmax", nmax, "largest size (default 5)");
    c_cr->add_option("--family", family, "check on a family instead of diagrams");

    auto* c_ci = app.add_subcommand("check-iso", "transformation isomorphism witnesses");
    c_ci->add_option("kind", kind,
                     "Wk_minus|Wk_reflect|Wkx_minus|Wkx_reflect|V_reflect|RSOS_minus|"
                     "RSOS_reflect|XXZ_minus|XXZ_reflect")
        ->required();
    c_ci->add_option("--family", family, "base family (defaults per kind)");
    c_ci->add_option("--nmax", nmax, "largest size (default 5)");

    auto* c_render = app.add_subcommand("render", "render a diagram to SVG");
    c_render->add_option("--diagram", diagram_text, "diagram (JSON)")->required();
    c_render->add_option("-o,--output", outfile, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_compose->parsed()) return cmd_compose(opt, left, right);
        if (c_norm->parsed()) return cmd_normalize(opt, word_text);
        if (c_act->parsed()) return cmd_act(opt, family, n, word_text, diagram_text, state_index);
        if (c_dims->parsed()) return cmd_dims(opt, family, n);
        if (c_fuse->parsed()) return cmd_fuse(opt, left, right, n, cutoff, increments);
        if (c_fc->parsed()) return cmd_fuse_check(opt, witness, left, right, third, cap, word_len);
        if (c_cr->parsed()) return cmd_check_relations(opt, nmax, family);
        if (c_ci->parsed()) return cmd_check_iso(opt, kind, family, nmax);
        if (c_render->parsed()) return cmd_render(diagram_text, outfile);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
