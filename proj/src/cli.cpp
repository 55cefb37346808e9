#include "divsparse/cli.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <ostream>
#include <sstream>

#include "divsparse/bruteforce.hpp"

namespace divsparse {

ParseError::ParseError(std::size_t line, const std::string& what)
    : UsageError("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

struct Line {
    std::size_t number;
    std::vector<std::string> tokens;
};

std::vector<Line> tokenize(const std::string& text) {
    std::vector<Line> lines;
    std::istringstream in(text);
    std::string raw;
    std::size_t number = 0;
    while (std::getline(in, raw)) {
        ++number;
        std::istringstream words(raw);
        Line line{number, {}};
        std::string w;
        while (words >> w) line.tokens.push_back(w);
        if (line.tokens.empty() || line.tokens.front().front() == '#') continue;
        lines.push_back(std::move(line));
    }
    return lines;
}

std::size_t to_count(const std::string& token, std::size_t line, const std::string& what) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw ParseError(line, "expected " + what + ", got '" + token + "'");
    }
    return value;
}

DomainKind kind_from(const std::string& name, std::size_t line) {
    static const std::map<std::string, DomainKind> kinds = {
        {"explicit", DomainKind::explicit_family},
        {"vertex_cover", DomainKind::vertex_cover},
        {"spanning_tree", DomainKind::spanning_tree},
        {"uniform_matroid", DomainKind::uniform_matroid},
        {"partition_matroid", DomainKind::partition_matroid},
        {"matching", DomainKind::matching},
        {"st_mincut", DomainKind::st_mincut},
        {"dag_dp", DomainKind::dag_dp},
    };
    auto it = kinds.find(name);
    if (it == kinds.end()) throw ParseError(line, "unknown domain kind '" + name + "'");
    return it->second;
}

// Keys each kind takes on its `domain` line.
std::vector<std::string> keys_for(DomainKind kind) {
    switch (kind) {
        case DomainKind::vertex_cover: return {"ell"};
        case DomainKind::uniform_matroid: return {"rank"};
        case DomainKind::matching: return {"size"};
        case DomainKind::st_mincut: return {"s", "t"};
        case DomainKind::dag_dp: return {"universe"};
        default: return {};
    }
}

bool uses_graph(DomainKind kind) {
    return kind != DomainKind::explicit_family && kind != DomainKind::uniform_matroid &&
           kind != DomainKind::partition_matroid;
}

bool uses_universe_line(DomainKind kind) {
    return kind == DomainKind::explicit_family || kind == DomainKind::uniform_matroid ||
           kind == DomainKind::partition_matroid;
}

void check_universe(std::size_t n, std::size_t line) {
    if (n == 0) throw ParseError(line, "universe must be nonempty");
    if (n > kMaxUniverse) {
        throw ParseError(line, "universe exceeds the supported size " + std::to_string(kMaxUniverse));
    }
}

std::size_t small_ell(const DomainInstance& instance) {
    if (auto bound = instance.size_bound()) return *bound;
    if (instance.kind == DomainKind::explicit_family) return instance.family->max_cardinality();
    return instance.universe_size();
}

void print_set(std::ostream& out, const SubsetMask& m) {
    const auto body = format_indices(m);
    out << "set:" << (body.empty() ? "" : " ") << body << '\n';
}

void print_family(std::ostream& out, const SetFamily& family) {
    out << "size: " << family.size() << '\n';
    for (const auto& m : family.canonical()) print_set(out, m);
}

LimitedSparsifyParams limited_params(const RunConfig& c) {
    LimitedSparsifyParams p;
    p.k = c.k;
    p.d = c.d;
    p.p = c.p;
    p.epsilon = c.epsilon;
    p.trials_override = c.trials;
    p.seed = c.seed;
    return p;
}

SparsifierReport sparsify(const RunConfig& c, const DomainInstance& instance,
                          const DomainOracle& oracle, Mode mode) {
    if (mode == Mode::small) {
        const std::size_t ell = small_ell(instance);
        OracleEmptyView view(oracle);
        return k_sparsify(SmallSparsifyParams{c.k, ell, ell}, view);
    }
    return dk_sparsify(oracle, limited_params(c));
}

int run_impl(const RunConfig& c, const DomainInstance& instance, std::ostream& out) {
    if (c.command == Command::enumerate) {
        print_family(out, enumerate_domain(instance));
        return 0;
    }
    if (c.k < 1) throw UsageError("--k must be at least 1");
    const auto oracle = instance.make_oracle();
    const Mode mode = resolve_mode(c.mode, instance);

    if (c.command == Command::sparsify || c.command == Command::verify) {
        auto report = sparsify(c, instance, *oracle, mode);
        if (c.command == Command::sparsify) {
            print_family(out, report.family);
            out << "calls_opt: " << report.calls_opt << '\n';
            out << "calls_extend: " << report.calls_extend << '\n';
            out << "seed: " << report.seed << '\n';
            return 0;
        }
        const auto domain = enumerate_domain(instance);
        const std::size_t n = instance.universe_size();
        const auto scope = mode == Mode::small
                               ? VerifyScope::against_ball(c.k, std::nullopt, SubsetMask(n),
                                                           small_ell(instance))
                               : VerifyScope::against_all_subsets(c.k, c.d);
        auto result = verify_sparsifier(domain, report.family, scope, c.seed);
        if (result.ok) {
            out << "OK\n";
        } else {
            out << "FAIL\n";
            for (const auto& f : result.counterexample_tuple) print_set(out, f);
            print_set(out, *result.counterexample_member);
        }
        return 0;
    }

    if (!c.problem) throw UsageError("solve needs --problem");
    ProblemSpec spec{*c.problem, c.k, c.d, c.modified};
    std::unique_ptr<SparsifierBuilder> builder =
        mode == Mode::small ? small_builder(*oracle, small_ell(instance))
                            : limited_builder(*oracle, limited_params(c));
    auto answer = solve(*oracle, spec, *builder);
    out << (answer.feasible ? "YES" : "NO") << '\n';
    if (answer.feasible) {
        std::vector<std::pair<SubsetMask, std::size_t>> rows;
        for (std::size_t i = 0; i < answer.witnesses.size(); ++i) {
            rows.push_back({answer.witnesses[i], answer.radii ? (*answer.radii)[i] : 0});
        }
        std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
            return canonical_less(a.first, b.first);
        });
        for (const auto& [set, radius] : rows) {
            print_set(out, set);
            if (answer.radii) out << "radius: " << radius << '\n';
        }
    }
    if (spec.problem == Problem::maxsum && answer.objective) {
        out << "objective: " << *answer.objective << '\n';
    }
    return 0;
}

}  // namespace

DomainInstance parse_instance(const std::string& text) {
    const auto lines = tokenize(text);
    if (lines.empty()) throw ParseError(1, "expected 'domain <kind>'");
    const auto& head = lines.front();
    if (head.tokens[0] != "domain" || head.tokens.size() < 2) {
        throw ParseError(head.number, "expected 'domain <kind>'");
    }
    DomainInstance inst;
    inst.kind = kind_from(head.tokens[1], head.number);
    const auto kind_name = std::string(to_string(inst.kind));

    std::map<std::string, std::size_t> keys;
    for (std::size_t i = 2; i < head.tokens.size(); ++i) {
        const auto& tok = head.tokens[i];
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw ParseError(head.number, "expected key=value, got '" + tok + "'");
        const auto key = tok.substr(0, eq);
        const auto allowed = keys_for(inst.kind);
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ParseError(head.number, "domain " + kind_name + " takes no key '" + key + "'");
        }
        if (keys.count(key)) throw ParseError(head.number, "duplicate key '" + key + "'");
        keys[key] = to_count(tok.substr(eq + 1), head.number, "a nonnegative integer for " + key);
    }
    for (const auto& key : keys_for(inst.kind)) {
        if (!keys.count(key)) throw ParseError(head.number, "domain " + kind_name + " needs " + key + "=");
    }
    if (inst.kind == DomainKind::vertex_cover) inst.ell = keys["ell"];
    if (inst.kind == DomainKind::uniform_matroid) inst.rank = keys["rank"];
    if (inst.kind == DomainKind::matching) inst.matching_size = keys["size"];
    if (inst.kind == DomainKind::st_mincut) {
        inst.s = keys["s"];
        inst.t = keys["t"];
    }
    if (inst.kind == DomainKind::dag_dp) {
        inst.universe = keys["universe"];
        check_universe(inst.universe, head.number);
    }

    bool have_universe = false, have_labels = false;
    std::size_t graph_line = 0;
    std::vector<SubsetMask> sets;
    SubsetMask blocked;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const auto& line = lines[li];
        const auto& word = line.tokens[0];
        auto not_allowed = [&] {
            return ParseError(line.number, "'" + word + "' is not part of a " + kind_name + " instance");
        };
        if (word == "universe") {
            if (!uses_universe_line(inst.kind)) throw not_allowed();
            if (have_universe) throw ParseError(line.number, "duplicate universe line");
            if (line.tokens.size() != 2) throw ParseError(line.number, "expected 'universe <n>'");
            inst.universe = to_count(line.tokens[1], line.number, "the universe size");
            check_universe(inst.universe, line.number);
            have_universe = true;
            blocked = SubsetMask(inst.universe);
        } else if (word == "set") {
            if (inst.kind != DomainKind::explicit_family) throw not_allowed();
            if (!have_universe) throw ParseError(line.number, "'set' before 'universe'");
            SubsetMask m(inst.universe);
            for (std::size_t i = 1; i < line.tokens.size(); ++i) {
                auto e = to_count(line.tokens[i], line.number, "an element index");
                if (e >= inst.universe) throw ParseError(line.number, "element " + line.tokens[i] + " out of range");
                m.insert(e);
            }
            sets.push_back(m);
        } else if (word == "block") {
            if (inst.kind != DomainKind::partition_matroid) throw not_allowed();
            if (!have_universe) throw ParseError(line.number, "'block' before 'universe'");
            if (line.tokens.size() < 2) throw ParseError(line.number, "expected 'block <cap> <i> ...'");
            PartitionBlock b;
            b.capacity = to_count(line.tokens[1], line.number, "a block capacity");
            for (std::size_t i = 2; i < line.tokens.size(); ++i) {
                auto e = to_count(line.tokens[i], line.number, "an element index");
                if (e >= inst.universe) throw ParseError(line.number, "element " + line.tokens[i] + " out of range");
                if (blocked.contains(e)) throw ParseError(line.number, "element " + line.tokens[i] + " is in two blocks");
                blocked.insert(e);
                b.elements.push_back(e);
            }
            inst.blocks.push_back(b);
        } else if (word == "graph") {
            if (!uses_graph(inst.kind)) throw not_allowed();
            if (inst.graph) throw ParseError(line.number, "duplicate graph block");
            if (line.tokens.size() != 4 ||
                (line.tokens[1] != "directed" && line.tokens[1] != "undirected")) {
                throw ParseError(line.number, "expected 'graph <directed|undirected> <nV> <m>'");
            }
            graph_line = line.number;
            GraphData g;
            g.directed = line.tokens[1] == "directed";
            g.n_vertices = to_count(line.tokens[2], line.number, "a vertex count");
            const std::size_t m = to_count(line.tokens[3], line.number, "an edge count");
            const bool need_undirected = inst.kind == DomainKind::vertex_cover ||
                                         inst.kind == DomainKind::spanning_tree ||
                                         inst.kind == DomainKind::matching;
            if (need_undirected && g.directed) throw ParseError(line.number, kind_name + " needs an undirected graph");
            if (inst.kind == DomainKind::dag_dp && !g.directed) throw ParseError(line.number, "dag_dp needs a directed graph");
            for (std::size_t e = 0; e < m; ++e) {
                if (li + 1 >= lines.size()) throw ParseError(line.number, "graph block ends after " + std::to_string(e) + " of " + std::to_string(m) + " edges");
                const auto& el = lines[++li];
                if (el.tokens.size() != 2) throw ParseError(el.number, "expected an edge '<u> <v>'");
                auto u = to_count(el.tokens[0], el.number, "a vertex index");
                auto v = to_count(el.tokens[1], el.number, "a vertex index");
                if (u >= g.n_vertices || v >= g.n_vertices) throw ParseError(el.number, "vertex out of range");
                if (u == v) throw ParseError(el.number, "self-loop");
                g.edges.push_back({u, v});
            }
            inst.graph = g;
        } else if (word == "labels") {
            if (inst.kind != DomainKind::dag_dp) throw not_allowed();
            if (have_labels) throw ParseError(line.number, "duplicate labels line");
            if (!inst.graph) throw ParseError(line.number, "'labels' before the graph block");
            if (line.tokens.size() != inst.graph->n_vertices + 1) {
                throw ParseError(line.number, "expected one label per vertex");
            }
            for (std::size_t i = 1; i < line.tokens.size(); ++i) {
                auto l = to_count(line.tokens[i], line.number, "a label");
                if (l >= inst.universe) throw ParseError(line.number, "label " + line.tokens[i] + " out of range");
                inst.labels.push_back(l);
            }
            have_labels = true;
        } else {
            throw ParseError(line.number, "unexpected '" + word + "'");
        }
    }

    const std::size_t end = lines.back().number;
    if (uses_universe_line(inst.kind) && !have_universe) throw ParseError(end, kind_name + " needs a universe line");
    if (uses_graph(inst.kind) && !inst.graph) throw ParseError(end, kind_name + " needs a graph block");
    if (inst.kind == DomainKind::dag_dp && !have_labels) throw ParseError(end, "dag_dp needs a labels line");
    if (inst.kind == DomainKind::explicit_family) inst.family = SetFamily(inst.universe, sets);
    if (inst.kind == DomainKind::uniform_matroid && inst.rank > inst.universe) {
        throw ParseError(head.number, "rank exceeds the universe size");
    }
    if (inst.kind == DomainKind::st_mincut) {
        if (inst.s >= inst.graph->n_vertices || inst.t >= inst.graph->n_vertices) {
            throw ParseError(head.number, "terminal out of range");
        }
        if (inst.s == inst.t) throw ParseError(head.number, "s and t must differ");
    }
    if (inst.graph) {
        const std::size_t n = inst.universe_size();
        if (n == 0) throw ParseError(graph_line, "instance has an empty ground set");
        if (n > kMaxUniverse) throw ParseError(graph_line, "ground set exceeds the supported size " + std::to_string(kMaxUniverse));
    }
    if (inst.kind == DomainKind::dag_dp) {
        try {
            inst.dag_instance().validate();
        } catch (const UsageError& e) {
            throw ParseError(graph_line, e.what());
        }
    }
    return inst;
}

Command parse_command(const std::string& name) {
    if (name == "solve") return Command::solve;
    if (name == "sparsify") return Command::sparsify;
    if (name == "enumerate") return Command::enumerate;
    if (name == "verify") return Command::verify;
    throw UsageError("unknown command '" + name + "'");
}

Mode parse_mode(const std::string& name) {
    if (name == "auto") return Mode::automatic;
    if (name == "small") return Mode::small;
    if (name == "limited") return Mode::limited;
    throw UsageError("unknown mode '" + name + "'");
}

Mode resolve_mode(Mode requested, const DomainInstance& instance) {
    if (requested != Mode::automatic) return requested;
    return instance.size_bound() ? Mode::small : Mode::limited;
}

int run(const RunConfig& config, const DomainInstance& instance, std::ostream& out,
        std::ostream& err) {
    try {
        return run_impl(config, instance, out);
    } catch (const GuardExceeded& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const CapabilityError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

int run_text(const RunConfig& config, const std::string& text, std::ostream& out,
             std::ostream& err) {
    DomainInstance instance;
    try {
        instance = parse_instance(text);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return run(config, instance, out, err);
}

}  // namespace divsparse
