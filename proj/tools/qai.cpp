#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "qai/demo.hpp"
#include "qai/json_io.hpp"

namespace {

using namespace qai;

// exit-code contract
constexpr int kOk = 0;        // success / valid
constexpr int kInvalid = 1;   // invalid triple or incompleteness witness
constexpr int kUsage = 2;     // usage / parse error
constexpr int kNumeric = 3;   // numeric or budget failure

struct RunConfig {
    Tolerances tolerances;
    LoopPolicy loop;
    std::uint64_t seed = 0;
    bool json = false;
    std::string output = "-";  // stdout
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json load_json(const std::string& path) {
    try {
        return Json::parse(read_file(path));
    } catch (const Json::parse_error& e) {
        throw Error(path + ": " + e.what());
    }
}

Program load_program(const std::string& path) { return parse(read_file(path)); }

// --domain values: "subspace" or "local:q1,q2;q2,q3"
DomainKind parse_domain_flag(const std::string& s) {
    if (s == "subspace") return DomainKind::global();
    const std::string prefix = "local:";
    if (s.rfind(prefix, 0) != 0)
        throw Error("domain must be 'subspace' or 'local:<q,..;q,..>'");
    Signature sig;
    std::stringstream groups(s.substr(prefix.size()));
    std::string group;
    while (std::getline(groups, group, ';')) {
        std::vector<std::string> names;
        std::stringstream vars(group);
        std::string v;
        while (std::getline(vars, v, ',')) {
            if (!v.empty()) names.push_back(v);
        }
        if (!names.empty()) sig.subsets.push_back(std::move(names));
    }
    if (sig.subsets.empty()) throw Error("empty local signature");
    return DomainKind::local(std::move(sig));
}

void emit(const RunConfig& cfg, const Json& payload, const std::string& human) {
    if (cfg.json)
        std::cout << dump_json(payload, 2) << "\n";
    else
        std::cout << human;
}

Json stmt_to_json(const Stmt& s);

Json block_to_json(const Block& b) {
    Json out = Json::array();
    for (const Stmt& s : b) out.push_back(stmt_to_json(s));
    return out;
}

Json stmt_to_json(const Stmt& s) {
    return std::visit(
        [&](const auto& node) -> Json {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, SkipStmt>) {
                return Json{{"kind", "skip"}};
            } else if constexpr (std::is_same_v<T, InitStmt>) {
                return Json{{"kind", "init"}, {"targets", node.targets}};
            } else if constexpr (std::is_same_v<T, UnitaryStmt>) {
                return Json{{"kind", "unitary"}, {"targets", node.targets},
                            {"gate", node.gate}};
            } else if constexpr (std::is_same_v<T, AssertStmt>) {
                return Json{{"kind", "assert"}, {"targets", node.targets},
                            {"space", node.space}};
            } else if constexpr (std::is_same_v<T, IfStmt>) {
                return Json{{"kind", "if"},
                            {"targets", node.targets},
                            {"space", node.space},
                            {"then", block_to_json(node.then_body)},
                            {"else", block_to_json(node.else_body)}};
            } else {
                return Json{{"kind", "while"},
                            {"targets", node.targets},
                            {"space", node.space},
                            {"body", block_to_json(node.body)}};
            }
        },
        s.node);
}

Json program_to_json(const Program& p) {
    Json unitaries = Json::array();
    for (const auto& [name, decl] : p.unitaries) {
        Json rows = Json::array();
        for (Eigen::Index r = 0; r < decl.matrix.rows(); ++r) {
            Json row = Json::array();
            for (Eigen::Index c = 0; c < decl.matrix.cols(); ++c)
                row.push_back(Json::array(
                    {decl.matrix(r, c).real(), decl.matrix(r, c).imag()}));
            rows.push_back(row);
        }
        unitaries.push_back(Json{{"name", name}, {"matrix", rows}});
    }
    Json spaces = Json::array();
    for (const auto& [name, decl] : p.spaces) {
        Json vecs = Json::array();
        for (const auto& v : decl.vectors) {
            Json vec = Json::array();
            for (Eigen::Index i = 0; i < v.size(); ++i)
                vec.push_back(Json::array({v(i).real(), v(i).imag()}));
            vecs.push_back(vec);
        }
        spaces.push_back(
            Json{{"name", name}, {"num_bits", decl.num_bits}, {"vectors", vecs}});
    }
    return Json{{"layout", p.layout.order()},
                {"unitaries", unitaries},
                {"spaces", spaces},
                {"body", block_to_json(p.body)}};
}

std::string describe_element(const AbstractElement& e) {
    std::ostringstream os;
    if (e.kind.is_local()) {
        os << "local element:";
        for (std::size_t i = 0; i < e.parts.size(); ++i) {
            os << " [";
            const auto& names = e.kind.signature.subsets[i];
            for (std::size_t k = 0; k < names.size(); ++k)
                os << (k ? "," : "") << names[k];
            os << "] dim " << e.parts[i].dim() << "/" << e.parts[i].ambient_dim() << ";";
        }
    } else {
        os << "subspace of dim " << e.parts.front().dim() << "/"
           << e.parts.front().ambient_dim();
    }
    return os.str();
}

int cmd_parse(const RunConfig& cfg, const std::string& file) {
    Program p = load_program(file);
    emit(cfg, program_to_json(p), pretty(p));
    return kOk;
}

int cmd_run(RunConfig cfg, const std::string& file, const std::string& state_path) {
    Program p = load_program(file);
    State in = state_from_json(load_json(state_path));
    try {
        State out = eval(p, in, cfg.loop, cfg.tolerances);
        Json j = to_json(out);
        j["trace"] = out.trace();
        std::cout << dump_json(j, 2) << "\n";
        return kOk;
    } catch (const LoopBudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (cfg.json) {
            Json j{{"error", "loop-budget-exceeded"},
                   {"accumulated_trace", e.accumulated_trace},
                   {"pending_trace", e.pending_trace}};
            std::cout << dump_json(j, 2) << "\n";
        }
        return kNumeric;
    }
}

int cmd_analyze(const RunConfig& cfg, const std::string& file,
                const std::string& pre_path, const std::string& domain_flag) {
    Program p = load_program(file);
    AbstractElement pre = element_from_json(load_json(pre_path));
    DomainKind kind = parse_domain_flag(domain_flag);
    if (!(pre.kind == kind))
        throw Error("--pre element does not match --domain");
    AbstractElement out = analyze(kind, p, pre, nullptr, cfg.tolerances);
    emit(cfg, to_json(out), describe_element(out) + "\n");
    return kOk;
}

int cmd_hoare(const RunConfig& cfg, const std::string& file, const std::string& pre_path,
              const std::string& post_path, const std::string& domain_flag,
              bool want_witness) {
    HoareTriple t{element_from_json(load_json(pre_path)), load_program(file),
                  element_from_json(load_json(post_path))};
    DomainKind kind = parse_domain_flag(domain_flag);
    if (!(t.pre.kind == kind) || !(t.post.kind == kind))
        throw Error("--pre/--post elements do not match --domain");

    HoareCheck res = check_hoare(t, cfg.loop, cfg.tolerances);
    Json j{{"valid", res.valid},
           {"strongest_post", to_json(res.strongest_post)}};
    std::ostringstream human;
    human << (res.valid ? "valid" : "invalid") << "\n";
    if (res.valid) {
        ReplayResult self = replay(*res.derivation, t.program, cfg.tolerances);
        if (!self.ok)
            throw Error("emitted derivation failed its own replay at " + self.path);
        j["derivation"] = to_json(*res.derivation);
        human << "derivation with "
              << res.derivation->premises.size() << " root premise(s)\n";
    } else {
        const char* status = res.witness_status == WitnessStatus::Found ? "found"
                             : res.witness_status == WitnessStatus::Unknown ? "unknown"
                                                                            : "not-needed";
        j["witness_status"] = status;
        human << "witness: " << status << "\n";
        if (res.witness && want_witness) j["witness"] = to_json(*res.witness);
        if (res.witness) j["witness_residual"] = res.witness_residual;
    }
    emit(cfg, j, human.str());
    return res.valid ? kOk : kInvalid;
}

int cmd_incorrect(const RunConfig& cfg, const std::string& file,
                  const std::string& pre_path, const std::string& post_path) {
    IncorrectnessTriple t{element_from_json(load_json(pre_path)), load_program(file),
                          element_from_json(load_json(post_path))};
    IncorrectnessCheck res = check_incorrectness(t, cfg.tolerances);
    Json j{{"valid", res.valid},
           {"strongest_post", to_json(res.strongest_post)}};
    std::ostringstream human;
    human << (res.valid ? "valid" : "invalid") << "\n";
    if (res.valid) {
        ReplayResult self = replay(*res.derivation, t.program, cfg.tolerances);
        if (!self.ok)
            throw Error("emitted derivation failed its own replay at " + self.path);
        j["derivation"] = to_json(*res.derivation);
    } else if (res.gap) {
        j["gap"] = to_json(*res.gap);
        j["gap_residual"] = res.gap_residual;
        human << "post escapes the strongest post by " << res.gap_residual << "\n";
    }
    emit(cfg, j, human.str());
    return res.valid ? kOk : kInvalid;
}

int cmd_replay(const RunConfig& cfg, const std::string& derivation_path,
               const std::string& file) {
    Program p = load_program(file);
    Derivation d = derivation_from_json(load_json(derivation_path));
    ReplayResult res = replay(d, p, cfg.tolerances);
    Json j{{"ok", res.ok}};
    std::ostringstream human;
    if (res.ok) {
        human << "replay ok\n";
    } else {
        j["path"] = res.path;
        j["detail"] = res.detail;
        human << "replay failed at " << res.path << ": " << res.detail << "\n";
    }
    emit(cfg, j, human.str());
    return res.ok ? kOk : kInvalid;
}

Json completeness_to_json(const CompletenessReport& rep) {
    Json j{{"verdict", rep.complete ? "Complete" : "IncompleteWitness"},
           {"max_deviation", rep.max_deviation},
           {"samples", rep.samples},
           {"soundness_violations", rep.soundness_violations},
           {"analyzed", to_json(rep.analyzed)},
           {"sampled_join", to_json(rep.sampled_join)}};
    if (rep.witness) j["witness"] = to_json(*rep.witness);
    return j;
}

int cmd_compare_domains(const RunConfig& cfg, const std::string& file,
                        const std::string& pre_path, const std::string& local_flag,
                        std::size_t trials) {
    Program p = load_program(file);
    AbstractElement pre = element_from_json(load_json(pre_path));
    DomainKind local = parse_domain_flag(
        local_flag.rfind("local:", 0) == 0 ? local_flag : "local:" + local_flag);

    // derive the matching element in the other domain
    AbstractElement global_pre, local_pre;
    if (pre.kind.is_local()) {
        if (!(pre.kind == local)) throw Error("--pre signature does not match --local");
        local_pre = pre;
        global_pre = AbstractElement{DomainKind::global(),
                                     {gamma_as_subspace(pre, p.layout, cfg.tolerances)}};
    } else {
        global_pre = pre;
        local_pre = alpha_subspace(local, p.layout, pre.parts.front(), cfg.tolerances);
    }

    CompletenessReport global_rep = check_completeness(
        DomainKind::global(), p, global_pre, trials, cfg.seed, cfg.loop, cfg.tolerances);
    CompletenessReport local_rep = check_completeness(local, p, local_pre, trials,
                                                      cfg.seed, cfg.loop, cfg.tolerances);

    Json j{{"global", completeness_to_json(global_rep)},
           {"local", completeness_to_json(local_rep)}};
    std::ostringstream human;
    human << "global: " << (global_rep.complete ? "Complete" : "IncompleteWitness")
          << " (max deviation " << global_rep.max_deviation << ")\n"
          << "local:  " << (local_rep.complete ? "Complete" : "IncompleteWitness")
          << " (max deviation " << local_rep.max_deviation << ")\n";
    emit(cfg, j, human.str());
    return (global_rep.complete && local_rep.complete) ? kOk : kInvalid;
}

int cmd_paper_5_3(const RunConfig& cfg) {
    LocalGapDemo demo = make_local_gap_demo();
    const Program& p = demo.program;
    const Tolerances& tol = cfg.tolerances;

    AbstractElement input_abs = alpha(demo.local, p.layout, {demo.phi_plus}, tol);
    State reached = eval(p, demo.phi_plus, cfg.loop, tol);
    AbstractElement reached_abs = alpha(demo.local, p.layout, {reached}, tol);
    AbstractElement analyzed = analyze(demo.local, p, input_abs, nullptr, tol);

    AbstractElement expect_in{demo.local, {demo.pair_equal, demo.pair_equal}};
    AbstractElement expect_out{demo.local, {demo.pair_zero, demo.pair_zero}};

    Subspace ket11 = Subspace::from_orthonormal(4, basis_ket(4, 3));
    bool eleven_in_q1 = leq(ket11, analyzed.parts[0], tol);
    bool eleven_in_q2 = leq(ket11, analyzed.parts[1], tol);

    bool input_matches = same_element(input_abs, expect_in, tol);
    bool reached_matches = same_element(reached_abs, expect_out, tol);
    double gap = dom_residual(analyzed, reached_abs);
    bool incomplete = gap > tol.incl_tol && eleven_in_q1 && eleven_in_q2;

    CompletenessReport rep =
        check_completeness(demo.local, p, input_abs, 4, cfg.seed, cfg.loop, tol);

    Json j{{"input_abstraction", to_json(input_abs)},
           {"input_abstraction_matches_pair_equal", input_matches},
           {"reachable_abstraction", to_json(reached_abs)},
           {"reachable_abstraction_matches_pair_zero", reached_matches},
           {"analyzed", to_json(analyzed)},
           {"analyzed_contains_ket11", Json::array({eleven_in_q1, eleven_in_q2})},
           {"analysis_gap", gap},
           {"verdict", incomplete ? "IncompleteWitness" : "Complete"},
           {"witness", to_json(demo.phi_plus)},
           {"sampled", completeness_to_json(rep)}};

    std::ostringstream human;
    human << "input abstraction  = (span{|00>,|11>}, span{|00>,|11>}): "
          << (input_matches ? "yes" : "NO") << "\n"
          << "reached abstraction = (span{|00>}, span{|00>}): "
          << (reached_matches ? "yes" : "NO") << "\n"
          << "analysis keeps |11> in both components: "
          << ((eleven_in_q1 && eleven_in_q2) ? "yes" : "NO") << "\n"
          << "verdict: " << (incomplete ? "IncompleteWitness" : "Complete")
          << " (gap " << gap << ")\n";
    emit(cfg, j, human.str());
    return incomplete ? kInvalid : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"static analyzer and triple checker for a quantum while-language"};
    app.require_subcommand(1);
    app.fallthrough(false);

    RunConfig cfg;
    app.add_option("--rank-tol", cfg.tolerances.rank_tol, "relative rank cutoff");
    app.add_option("--incl-tol", cfg.tolerances.incl_tol, "inclusion residual bound");
    app.add_flag("--json", cfg.json, "machine-readable output");
    app.add_option("--seed", cfg.seed, "random seed");

    std::string file, state_path, pre_path, post_path, domain_flag = "subspace";
    std::string derivation_path, local_flag;
    std::size_t trials = 16;
    bool want_witness = false;

    CLI::App* parse_cmd = app.add_subcommand("parse", "parse and pretty-print");
    parse_cmd->add_option("file", file)->required();

    CLI::App* run_cmd = app.add_subcommand("run", "evaluate on a state");
    run_cmd->add_option("file", file)->required();
    run_cmd->add_option("--state", state_path)->required();
    run_cmd->add_option("--trace-eps", cfg.loop.trace_eps);
    run_cmd->add_option("--max-iters", cfg.loop.max_iters);

    CLI::App* analyze_cmd = app.add_subcommand("analyze", "forward abstract analysis");
    analyze_cmd->add_option("file", file)->required();
    analyze_cmd->add_option("--pre", pre_path)->required();
    analyze_cmd->add_option("--domain", domain_flag);

    CLI::App* hoare_cmd = app.add_subcommand("hoare", "check a correctness triple");
    hoare_cmd->add_option("file", file)->required();
    hoare_cmd->add_option("--pre", pre_path)->required();
    hoare_cmd->add_option("--post", post_path)->required();
    hoare_cmd->add_option("--domain", domain_flag);
    hoare_cmd->add_flag("--witness", want_witness);

    CLI::App* incorrect_cmd =
        app.add_subcommand("incorrect", "check an incorrectness triple");
    incorrect_cmd->add_option("file", file)->required();
    incorrect_cmd->add_option("--pre", pre_path)->required();
    incorrect_cmd->add_option("--post", post_path)->required();

    CLI::App* replay_cmd = app.add_subcommand("replay", "re-check a derivation");
    replay_cmd->add_option("derivation", derivation_path)->required();
    replay_cmd->add_option("file", file)->required();

    CLI::App* compare_cmd =
        app.add_subcommand("compare-domains", "global vs local completeness probing");
    compare_cmd->add_option("file", file)->required();
    compare_cmd->add_option("--pre", pre_path)->required();
    compare_cmd->add_option("--local", local_flag)->required();
    compare_cmd->add_option("--trials", trials);

    CLI::App* paper_cmd =
        app.add_subcommand("paper-5-3", "built-in local-domain gap reproduction");

    for (CLI::App* sub : {parse_cmd, run_cmd, analyze_cmd, hoare_cmd, incorrect_cmd,
                          replay_cmd, compare_cmd, paper_cmd})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    default_tolerances() = cfg.tolerances;

    try {
        if (parse_cmd->parsed()) return cmd_parse(cfg, file);
        if (run_cmd->parsed()) return cmd_run(cfg, file, state_path);
        if (analyze_cmd->parsed()) return cmd_analyze(cfg, file, pre_path, domain_flag);
        if (hoare_cmd->parsed())
            return cmd_hoare(cfg, file, pre_path, post_path, domain_flag, want_witness);
        if (incorrect_cmd->parsed()) return cmd_incorrect(cfg, file, pre_path, post_path);
        if (replay_cmd->parsed()) return cmd_replay(cfg, derivation_path, file);
        if (compare_cmd->parsed())
            return cmd_compare_domains(cfg, file, pre_path, local_flag, trials);
        if (paper_cmd->parsed()) return cmd_paper_5_3(cfg);
    } catch (const SyntaxError& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (cfg.json) std::cout << dump_json(Json{{"error", e.what()}}, 2) << "\n";
        return kUsage;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (cfg.json) std::cout << dump_json(Json{{"error", e.what()}}, 2) << "\n";
        return kUsage;
    } catch (const LoopBudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (cfg.json) std::cout << dump_json(Json{{"error", e.what()}}, 2) << "\n";
        return kNumeric;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (cfg.json) std::cout << dump_json(Json{{"error", e.what()}}, 2) << "\n";
        return kUsage;
    } catch (const Json::exception& e) {
        std::cerr << "error: malformed input: " << e.what() << "\n";
        if (cfg.json) std::cout << dump_json(Json{{"error", e.what()}}, 2) << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumeric;
    }
    return kUsage;
}
