// atilde: command-line front end for triangle presentations, normal forms,
// automatic structures, Coxeter hyperbolicity and thinness probes.

#include "atilde/automatic.hpp"
#include "atilde/coxeter.hpp"
#include "atilde/errors.hpp"
#include "atilde/geometry.hpp"
#include "atilde/parallel.hpp"
#include "atilde/presentation.hpp"
#include "atilde/probe.hpp"
#include "atilde/word.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace atilde;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 2;
constexpr int kCap = 3;
constexpr int kParse = 4;

struct Globals {
    bool json = false;
    unsigned workers = default_workers();
    std::string output;  // empty for stdout
};

// Caps default from the environment so batch jobs can raise them without new flags.
std::size_t env_cap(const char* name, std::size_t fallback) {
    const char* v = std::getenv(name);
    if (!v || !*v) return fallback;
    try {
        std::size_t used = 0;
        unsigned long long n = std::stoull(v, &used);
        if (used != std::string(v).size()) throw std::invalid_argument(v);
        return static_cast<std::size_t>(n);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string(name) + " must be a non-negative integer, got '" + v + "'");
    }
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot write " + path);
        }
    }
    std::ostream& operator*() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

std::string join(const std::vector<int>& v, const char* sep = " ") {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += std::to_string(v[i]);
    }
    return s;
}

// Words are generator ids separated by commas or spaces; "" or "e" is the identity.
std::vector<int> parse_word(const std::string& text, int generators) {
    std::vector<int> w;
    if (text == "e") return w;
    std::string tok;
    auto flush = [&] {
        if (tok.empty()) return;
        std::size_t used = 0;
        int x = -1;
        try {
            x = std::stoi(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size()) throw ParseError("bad letter '" + tok + "' in word '" + text + "'");
        if (x < 0 || x >= generators)
            throw ParseError("letter " + tok + " is not a generator id (0.." + std::to_string(generators - 1) + ")");
        w.push_back(x);
        tok.clear();
    };
    for (char c : text) {
        if (c == ',' || c == ' ' || c == '\t')
            flush();
        else
            tok += c;
    }
    flush();
    return w;
}

std::unique_ptr<TriangleGroup> load_group(const std::string& path) {
    auto tp = std::make_shared<const TrianglePresentation>(load_presentation_file(path));
    return std::make_unique<TriangleGroup>(tp);
}

const char* relation_name(Relation r) {
    switch (r) {
        case Relation::Equal: return "equal";
        case Relation::SpanFull: return "span-full";
        case Relation::Contains: return "contains";
        case Relation::ContainedIn: return "contained-in";
        case Relation::Skew: return "skew";
    }
    return "?";
}

const char* ending_name(Ending e) {
    switch (e) {
        case Ending::Append: return "append";
        case Ending::Replace: return "replace";
        case Ending::Cancel: return "cancel";
    }
    return "?";
}

Json trace_json(const RightMultTrace& t, int x) {
    Json steps = Json::array();
    for (const auto& s : t.steps)
        steps.push_back({{"level", s.level}, {"u", s.u}, {"carry_in", s.carry_in}, {"s", s.s},
                         {"carry_out", s.carry_out}, {"v", s.v}});
    Json triples = Json::array();
    for (const auto& tr : t.triples) triples.push_back({tr.u, tr.v, tr.w});
    return {{"x", x},
            {"case", t.tag},
            {"relation", relation_name(t.relation)},
            {"length", t.length},
            {"length_change", t.length_change()},
            {"steps", steps},
            {"ending", ending_name(t.ending)},
            {"triples", triples},
            {"differences", t.differences}};
}

void print_trace(std::ostream& out, const RightMultTrace& t, int x) {
    out << "  x=" << x << " case " << t.tag << " (" << relation_name(t.relation) << ") length " << t.length << " -> "
        << t.length + t.length_change() << ", " << ending_name(t.ending);
    if (!t.steps.empty()) {
        out << ", cascade";
        for (const auto& s : t.steps) out << " [" << s.level << ": " << s.u << "," << s.carry_in << " -> " << s.carry_out << "," << s.v << "]";
    }
    out << '\n';
}

Json report_json(const ThinnessReport& r) {
    auto witness = [](const BigonWitness& w) {
        return Json{{"a", w.a}, {"b", w.b}, {"sigma", w.sigma}, {"sigma_prime", w.sigma_prime},
                    {"hausdorff", w.hausdorff}, {"pointwise", w.pointwise}};
    };
    return {{"radius", r.radius},
            {"basepoint", r.basepoint},
            {"vertices_in_ball", r.vertices_in_ball},
            {"pairs_probed", r.pairs_probed},
            {"pairs_skipped", r.pairs_skipped},
            {"geodesics", r.geodesics},
            {"bigon_K", r.bigon_K},
            {"pointwise_Kprime", r.pointwise_Kprime},
            {"kprime_violations", r.kprime_violations},
            {"witness_K", witness(r.witness_K)},
            {"witness_Kprime", witness(r.witness_Kprime)}};
}

struct ProbeInput {
    std::string graph_path, tp_path;
    int radius = 0;
    int basepoint = 0;
    std::size_t ball_cap = 0;
};

// Graph plus metric, either from an edge-list file or a Cayley ball of a presentation.
struct ProbeSubject {
    std::unique_ptr<TriangleGroup> group;
    std::unique_ptr<Ball> ball;
    std::unique_ptr<FiniteGraph> graph;
    std::unique_ptr<Metric> metric;

    explicit ProbeSubject(const ProbeInput& in) {
        if (!in.tp_path.empty()) {
            group = load_group(in.tp_path);
            ball = std::make_unique<Ball>(atilde::ball(*group, in.radius, in.ball_cap));
            graph = std::make_unique<FiniteGraph>(FiniteGraph::from_ball(*ball));
            metric = std::make_unique<CayleyMetric>(*group, *ball);
        } else {
            graph = std::make_unique<FiniteGraph>(read_graph_file(in.graph_path));
            metric = std::make_unique<GraphMetric>(*graph);
        }
    }
};

void add_probe_input(CLI::App* cmd, ProbeInput& in) {
    auto* g = cmd->add_option("--graph", in.graph_path, "edge-list file")->check(CLI::ExistingFile);
    auto* t = cmd->add_option("--tp", in.tp_path, "presentation file; probes its Cayley ball")->check(CLI::ExistingFile);
    g->excludes(t);
    cmd->add_option("--radius", in.radius, "ball radius about the basepoint")->required()->check(CLI::NonNegativeNumber);
    cmd->add_option("--basepoint", in.basepoint, "basepoint vertex")->check(CLI::NonNegativeNumber);
    in.ball_cap = env_cap("ATILDE_BALL_CAP", 2000000);
    cmd->add_option("--ball-cap", in.ball_cap, "vertex cap for Cayley balls (env ATILDE_BALL_CAP)");
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"Triangle presentations, Ã_2 groups, Coxeter hyperbolicity and thinness probes"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    Globals G;
    app.add_flag("--json", G.json, "machine-readable output");
    app.add_option("--workers", G.workers, "worker threads for parallel subcommands")->check(CLI::PositiveNumber);
    app.add_option("-o,--output", G.output, "write to a file instead of stdout");

    std::function<int()> run;

    // geometry
    int gn = 2, gq = 2;
    std::string gmod, glambda = "perp";
    auto* geometry_cmd = app.add_subcommand("geometry", "emit the enumerated geometry file");
    geometry_cmd->add_option("n", gn, "projective dimension")->required()->check(CLI::Range(2, 8));
    geometry_cmd->add_option("q", gq, "field order")->required()->check(CLI::Range(2, 255));
    geometry_cmd->add_option("--modulus", gmod, "irreducible modulus c0,...,ce for prime powers");
    geometry_cmd->add_option("--lambda", glambda, "correlation")->check(CLI::IsMember({"perp", "singer"}));
    geometry_cmd->callback([&] {
        run = [&] {
            FieldSpec field = FieldSpec::for_order(gq);
            if (!gmod.empty()) {
                std::vector<int> coeffs;
                std::stringstream ss(gmod);
                for (std::string tok; std::getline(ss, tok, ',');) coeffs.push_back(std::stoi(tok));
                field = FieldSpec::with_modulus(gq, coeffs);
            }
            auto g = Geometry::enumerate(gn, field);
            Correlation lambda = glambda == "singer" ? singer_correlation(*g) : perp_correlation(*g);
            Output out(G.output);
            if (G.json) {
                Json subs = Json::array();
                for (int i = 0; i < g->size(); ++i) {
                    auto b = g->basis(i);
                    subs.push_back({{"id", i}, {"dim", g->dim(i)}, {"basis", std::vector<int>(b.begin(), b.end())},
                                    {"lambda", lambda(i)}});
                }
                *out << Json{{"n", gn}, {"q", gq}, {"subspaces", subs}}.dump(2) << '\n';
            } else {
                write_geometry_header(*out, *g, lambda);
                write_geometry_listing(*out, *g);
            }
            return kOk;
        };
    });

    // tp-search
    std::string search_geometry, search_dir;
    SearchOptions search_opts;
    search_opts.node_limit = env_cap("ATILDE_NODE_LIMIT", 0);
    auto* search_cmd = app.add_subcommand("tp-search", "search for triangle presentations");
    search_cmd->add_option("geometry", search_geometry, "geometry file")->required()->check(CLI::ExistingFile);
    search_cmd->add_option("--limit", search_opts.limit, "stop after this many presentations");
    search_cmd->add_option("--node-limit", search_opts.node_limit, "search node cap, 0 = none (env ATILDE_NODE_LIMIT)");
    search_cmd->add_option("--out-dir", search_dir, "write tp_<k>.tp files here");
    search_cmd->callback([&] {
        run = [&] {
            std::ifstream in(search_geometry);
            auto [g, lambda] = realize(read_geometry_spec(in));
            SearchResult res = search(g, lambda, search_opts);
            Output out(G.output);
            if (!search_dir.empty()) {
                std::filesystem::create_directories(search_dir);
                for (std::size_t k = 0; k < res.presentations.size(); ++k) {
                    std::ofstream f(std::filesystem::path(search_dir) / ("tp_" + std::to_string(k) + ".tp"));
                    save_presentation(f, res.presentations[k]);
                }
            }
            if (G.json) {
                Json list = Json::array();
                for (const auto& tp : res.presentations) {
                    std::ostringstream s;
                    save_presentation(s, tp);
                    list.push_back(s.str());
                }
                *out << Json{{"found", res.presentations.size()}, {"exhausted", res.exhausted}, {"nodes", res.nodes},
                             {"presentations", list}}
                            .dump(2)
                     << '\n';
            } else {
                *out << "# found " << res.presentations.size() << " presentation(s), " << res.nodes << " nodes, "
                     << (res.exhausted ? "search exhausted" : "search stopped early") << '\n';
                if (search_dir.empty())
                    for (std::size_t k = 0; k < res.presentations.size(); ++k) {
                        if (k) *out << "# ----\n";
                        save_presentation(*out, res.presentations[k]);
                    }
            }
            if (!res.presentations.empty()) return kOk;
            if (!res.exhausted && search_opts.node_limit) return kCap;
            return kNegative;
        };
    });

    // tp-verify
    std::string verify_path;
    auto* verify_cmd = app.add_subcommand("tp-verify", "check the six axioms");
    verify_cmd->add_option("tp", verify_path, "presentation file")->required()->check(CLI::ExistingFile);
    verify_cmd->callback([&] {
        run = [&] {
            std::ifstream in(verify_path);
            TrianglePresentation tp = read_presentation(in);
            ValidationReport rep = validate(tp);
            Output out(G.output);
            if (G.json) {
                Json axioms = Json::array();
                for (const auto& r : rep.results)
                    axioms.push_back({{"axiom", std::string(1, axiom_letter(r.axiom))}, {"pass", r.pass},
                                      {"witness", r.witness}, {"detail", r.detail}});
                *out << Json{{"triples", tp.triples().size()}, {"axioms", axioms}, {"pass", rep.all_pass()}}.dump(2)
                     << '\n';
            } else {
                for (const auto& r : rep.results) {
                    *out << "axiom " << axiom_letter(r.axiom) << ' ' << (r.pass ? "PASS" : "FAIL");
                    if (!r.pass) *out << " witness (" << join(r.witness, ",") << ") " << r.detail;
                    *out << '\n';
                }
                *out << (rep.all_pass() ? "VALID" : "INVALID") << '\n';
            }
            return rep.all_pass() ? kOk : kNegative;
        };
    });

    // nf / mul / inv / dist
    std::string word_tp, word_a, word_b;
    bool show_trace = false;
    auto* nf_cmd = app.add_subcommand("nf", "normal form of a word, with the rewriting trace");
    nf_cmd->add_option("tp", word_tp, "presentation file")->required()->check(CLI::ExistingFile);
    nf_cmd->add_option("word", word_a, "letters, comma or space separated; 'e' for the identity")->required();
    nf_cmd->add_flag("--trace", show_trace, "print the case taken for every letter");
    nf_cmd->callback([&] {
        run = [&] {
            auto group = load_group(word_tp);
            std::vector<int> w = parse_word(word_a, group->generators());
            std::vector<int> cur;
            std::vector<RightMultTrace> traces(w.size());
            for (std::size_t i = 0; i < w.size(); ++i) group->multiply(cur, w[i], &traces[i]);
            Output out(G.output);
            if (G.json) {
                Json j{{"input", w}, {"nf", cur}, {"length", cur.size()}};
                if (show_trace) {
                    Json ts = Json::array();
                    for (std::size_t i = 0; i < w.size(); ++i) ts.push_back(trace_json(traces[i], w[i]));
                    j["trace"] = ts;
                }
                *out << j.dump(2) << '\n';
            } else {
                *out << "nf" << (cur.empty() ? "" : " ") << join(cur) << '\n';
                if (show_trace)
                    for (std::size_t i = 0; i < w.size(); ++i) print_trace(*out, traces[i], w[i]);
            }
            return kOk;
        };
    });

    auto* mul_cmd = app.add_subcommand("mul", "normal form of the product of two words");
    mul_cmd->add_option("tp", word_tp, "presentation file")->required()->check(CLI::ExistingFile);
    mul_cmd->add_option("u", word_a, "first word")->required();
    mul_cmd->add_option("v", word_b, "second word")->required();
    auto* inv_cmd = app.add_subcommand("inv", "normal form of the inverse");
    inv_cmd->add_option("tp", word_tp, "presentation file")->required()->check(CLI::ExistingFile);
    inv_cmd->add_option("u", word_a, "word")->required();
    auto* dist_cmd = app.add_subcommand("dist", "word-metric distance between two elements");
    dist_cmd->add_option("tp", word_tp, "presentation file")->required()->check(CLI::ExistingFile);
    dist_cmd->add_option("u", word_a, "first word")->required();
    dist_cmd->add_option("v", word_b, "second word")->required();
    auto arithmetic = [&](const std::string& op) {
        return [&, op] {
            run = [&, op] {
                auto group = load_group(word_tp);
                NormalForm u = group->reduce(parse_word(word_a, group->generators()));
                Output out(G.output);
                if (op == "inv") {
                    NormalForm r = group->inverse(u);
                    if (G.json)
                        *out << Json{{"nf", r.letters()}, {"length", r.length()}}.dump(2) << '\n';
                    else
                        *out << "nf" << (r.empty() ? "" : " ") << join(r.letters()) << '\n';
                    return kOk;
                }
                std::vector<int> v = parse_word(word_b, group->generators());
                if (op == "mul") {
                    std::vector<int> cur = u.letters();
                    for (int x : v) group->multiply(cur, x);
                    if (G.json)
                        *out << Json{{"nf", cur}, {"length", cur.size()}}.dump(2) << '\n';
                    else
                        *out << "nf" << (cur.empty() ? "" : " ") << join(cur) << '\n';
                } else {
                    int d = group->dist(u, group->reduce(v));
                    if (G.json)
                        *out << Json{{"distance", d}}.dump(2) << '\n';
                    else
                        *out << "distance " << d << '\n';
                }
                return kOk;
            };
        };
    };
    mul_cmd->callback(arithmetic("mul"));
    inv_cmd->callback(arithmetic("inv"));
    dist_cmd->callback(arithmetic("dist"));

    // fellow-check
    std::string fellow_tp;
    int fellow_len = 5;
    auto* fellow_cmd = app.add_subcommand("fellow-check", "verify the 1-fellow-traveller property (parallel)");
    fellow_cmd->add_option("tp", fellow_tp, "presentation file")->required()->check(CLI::ExistingFile);
    fellow_cmd->add_option("--max-len", fellow_len, "longest u checked")->check(CLI::Range(0, 12));
    fellow_cmd->callback([&] {
        run = [&] {
            auto group = load_group(fellow_tp);
            FellowReport r = fellow_traveller_check(*group, fellow_len, G.workers);
            Output out(G.output);
            if (G.json) {
                Json viol = Json::array();
                for (const auto& v : r.violations)
                    viol.push_back({{"u", v.u}, {"x", v.x}, {"t", v.t}, {"distance", v.distance},
                                    {"trace_difference", v.trace_difference}, {"measured", v.measured}});
                *out << Json{{"max_len", r.max_len},         {"words", r.words},
                             {"instances", r.instances},     {"k_trace", r.max_k_trace},
                             {"k_dist", r.max_k_dist},       {"nontrivial_instances", r.nontrivial_instances},
                             {"witness", {{"u", r.witness_u}, {"x", r.witness_x}, {"t", r.witness_t}}},
                             {"violation_count", r.violation_count},
                             {"violations", viol},           {"pass", r.ok()}}
                            .dump(2)
                     << '\n';
            } else {
                *out << "max_len " << r.max_len << "\nwords " << r.words << "\ninstances " << r.instances
                     << "\nk_trace " << r.max_k_trace << "\nk_dist " << r.max_k_dist << "\nnontrivial "
                     << r.nontrivial_instances << '\n';
                if (r.witness_x >= 0)
                    *out << "witness u=" << join(r.witness_u, ",") << " x=" << r.witness_x << " t=" << r.witness_t
                         << '\n';
                *out << "violations " << r.violation_count << '\n';
                for (const auto& v : r.violations)
                    *out << "  u=" << join(v.u, ",") << " x=" << v.x << " t=" << v.t << " distance " << v.distance
                         << '\n';
                *out << (r.ok() ? "PASS" : "FAIL") << '\n';
            }
            return r.ok() ? kOk : kNegative;
        };
    });

    // multiplier
    std::string mult_tp, mult_x;
    auto* mult_cmd = app.add_subcommand("multiplier", "export the multiplier automaton of a generator");
    mult_cmd->add_option("tp", mult_tp, "presentation file")->required()->check(CLI::ExistingFile);
    mult_cmd->add_option("x", mult_x, "generator id, or 'eq' for the equality recogniser")->required();
    mult_cmd->callback([&] {
        run = [&] {
            auto group = load_group(mult_tp);
            int x = -1;
            if (mult_x != "eq") {
                auto w = parse_word(mult_x, group->generators());
                if (w.size() != 1) throw ParseError("expected a single generator id, got '" + mult_x + "'");
                x = w[0];
            }
            Multiplier m = build_multiplier(*group, x);
            Output out(G.output);
            if (G.json) {
                const Automaton& a = m.automaton();
                Json accept = Json::array(), states = Json::array(), trans = Json::array();
                for (int s = 0; s < a.states(); ++s) {
                    if (a.accepting(s)) accept.push_back(s);
                    if (s == m.fail_state()) continue;
                    const auto& st = m.states()[s];
                    states.push_back({{"id", s}, {"difference", st.difference}, {"u", st.u_state}, {"v", st.v_state}});
                    for (int l = 0; l < a.alphabet(); ++l)
                        if (a.next(s, l) != m.fail_state()) {
                            auto [p, q] = m.decode(l);
                            trans.push_back({s, p, q, a.next(s, l)});
                        }
                }
                *out << Json{{"x", x},
                             {"states", a.states()},
                             {"start", a.start()},
                             {"fail", m.fail_state()},
                             {"difference_states", m.difference_states()},
                             {"accept", accept},
                             {"live_states", states},
                             {"transitions", trans}}
                            .dump(2)
                     << '\n';
            } else {
                write_multiplier(*out, m);
            }
            return kOk;
        };
    });

    // growth
    std::string growth_tp;
    int growth_terms = 10;
    auto* growth_cmd = app.add_subcommand("growth", "growth series and its recurrence");
    growth_cmd->add_option("tp", growth_tp, "presentation file")->required()->check(CLI::ExistingFile);
    growth_cmd->add_option("--terms", growth_terms, "largest length tabulated")->check(CLI::Range(0, 100000));
    growth_cmd->callback([&] {
        run = [&] {
            auto group = load_group(growth_tp);
            GrowthSeries s = growth(*group, growth_terms);
            Output out(G.output);
            auto strs = [](const std::vector<BigInt>& v) {
                std::vector<std::string> o;
                for (const auto& x : v) o.push_back(x.str());
                return o;
            };
            if (G.json) {
                *out << Json{{"terms", growth_terms},
                             {"coefficients", strs(s.coefficients)},
                             {"cumulative", strs(s.cumulative)},
                             {"recurrence", strs(s.recurrence)},
                             {"numerator", strs(s.numerator)},
                             {"denominator", strs(s.denominator)},
                             {"recurrence_verified", s.recurrence_verified}}
                            .dump(2)
                     << '\n';
            } else {
                for (std::size_t l = 0; l < s.coefficients.size(); ++l)
                    *out << l << ' ' << s.coefficients[l] << ' ' << s.cumulative[l] << '\n';
                if (growth_terms > 0) {
                    auto line = [&](const char* name, const std::vector<BigInt>& v) {
                        *out << "# " << name;
                        for (const auto& c : v) *out << ' ' << c;
                        *out << '\n';
                    };
                    line("recurrence", s.recurrence);
                    line("numerator", s.numerator);
                    line("denominator", s.denominator);
                    *out << "# recurrence " << (s.recurrence_verified ? "verified" : "NOT verified") << '\n';
                }
            }
            return s.recurrence_verified ? kOk : kNegative;
        };
    });

    // ball
    std::string ball_tp;
    int ball_radius = 0;
    std::size_t ball_cap = env_cap("ATILDE_BALL_CAP", 2000000);
    auto* ball_cmd = app.add_subcommand("ball", "export a Cayley ball as an edge list");
    ball_cmd->add_option("tp", ball_tp, "presentation file")->required()->check(CLI::ExistingFile);
    ball_cmd->add_option("--radius", ball_radius, "radius")->required()->check(CLI::NonNegativeNumber);
    ball_cmd->add_option("--cap", ball_cap, "vertex cap (env ATILDE_BALL_CAP)");
    ball_cmd->add_flag("--words", show_trace, "list the normal form of every vertex as comments");
    ball_cmd->callback([&] {
        run = [&] {
            auto group = load_group(ball_tp);
            Ball b = ball(*group, ball_radius, ball_cap);
            Output out(G.output);
            if (G.json) {
                Json verts = Json::array();
                for (const auto& v : b.vertices) verts.push_back(v.letters());
                *out << Json{{"radius", b.radius}, {"vertices", verts}, {"edges", b.edges}}.dump() << '\n';
            } else {
                if (show_trace)
                    for (std::size_t i = 0; i < b.vertices.size(); ++i)
                        *out << "# " << i << " : " << join(b.vertices[i].letters()) << '\n';
                write_ball(*out, b);
            }
            return kOk;
        };
    });

    // coxeter-hyp
    std::string cox_path;
    int rank_cap = static_cast<int>(env_cap("ATILDE_RANK_CAP", 14));
    auto* cox_cmd = app.add_subcommand("coxeter-hyp", "Moussong hyperbolicity verdict with certificate");
    cox_cmd->add_option("matrix", cox_path, "Coxeter matrix file")->required()->check(CLI::ExistingFile);
    cox_cmd->add_option("--rank-cap", rank_cap, "largest rank accepted (env ATILDE_RANK_CAP)");
    cox_cmd->callback([&] {
        run = [&] {
            CoxeterMatrix m = read_coxeter_file(cox_path);
            HyperbolicityVerdict v = is_word_hyperbolic(m, rank_cap);
            const char* reason = v.reason == HyperbolicityVerdict::Reason::AffineSubsystem         ? "affine-subsystem"
                                 : v.reason == HyperbolicityVerdict::Reason::CommutingInfinitePair ? "commuting-infinite-pair"
                                                                                                    : "none";
            Output out(G.output);
            if (G.json) {
                Json cert = Json::array();
                for (const auto& c : v.certificate)
                    cert.push_back({{"subset", c.subset}, {"class", class_name(c.classification)},
                                    {"connected", c.connected}, {"minor_signs", c.minor_signs}});
                *out << Json{{"rank", m.rank()},
                             {"hyperbolic", v.hyperbolic},
                             {"reason", reason},
                             {"witness", v.witness},
                             {"witness_pair", v.witness_pair},
                             {"certificate", cert},
                             {"subsets_classified", v.subsets_classified}}
                            .dump(2)
                     << '\n';
            } else {
                *out << (v.hyperbolic ? "HYPERBOLIC" : "NOT-HYPERBOLIC") << '\n';
                *out << "reason " << reason << '\n';
                if (!v.witness.empty()) *out << "witness " << join(v.witness) << '\n';
                if (!v.witness_pair.empty()) *out << "witness_pair " << join(v.witness_pair) << '\n';
                for (const auto& c : v.certificate)
                    *out << "subsystem {" << join(c.subset, ",") << "} " << class_name(c.classification)
                         << (c.connected ? " connected" : " disconnected") << " minors " << join(c.minor_signs)
                         << '\n';
                *out << "subsets_classified " << v.subsets_classified << '\n';
            }
            return v.hyperbolic ? kOk : kNegative;
        };
    });

    // probe-bigon
    ProbeInput bigon_in;
    bool all_pairs = false;
    std::size_t geodesic_cap = env_cap("ATILDE_GEODESIC_CAP", 1000000);
    auto* bigon_cmd = app.add_subcommand("probe-bigon", "bigon thinness K and K' (parallel over pairs)");
    add_probe_input(bigon_cmd, bigon_in);
    bigon_cmd->add_flag("--all-pairs", all_pairs, "probe every pair in the ball, not just pairs at the basepoint");
    bigon_cmd->add_option("--geodesic-cap", geodesic_cap, "per-pair geodesic cap (env ATILDE_GEODESIC_CAP)");
    bigon_cmd->callback([&] {
        run = [&] {
            if (bigon_in.graph_path.empty() == bigon_in.tp_path.empty())
                throw CLI::ValidationError("probe-bigon", "exactly one of --graph and --tp is required");
            ProbeSubject subj(bigon_in);
            BigonOptions o;
            o.basepoint = bigon_in.basepoint;
            o.radius = bigon_in.radius;
            o.geodesic_cap = geodesic_cap;
            o.scope = all_pairs ? BigonScope::AllPairs : BigonScope::FromBasepoint;
            o.workers = G.workers;
            ThinnessReport r = bigon_thinness(*subj.graph, *subj.metric, o);
            Output out(G.output);
            if (G.json) {
                Json j = report_json(r);
                j["scope"] = all_pairs ? "all-pairs" : "basepoint";
                *out << j.dump(2) << '\n';
            } else {
                *out << "radius " << r.radius << "\nbasepoint " << r.basepoint << "\nscope "
                     << (all_pairs ? "all-pairs" : "basepoint") << "\nvertices " << r.vertices_in_ball << "\npairs "
                     << r.pairs_probed << "\nskipped " << r.pairs_skipped << "\ngeodesics " << r.geodesics
                     << "\nbigon_K " << r.bigon_K << "\npointwise_Kprime " << r.pointwise_Kprime
                     << "\nkprime_violations " << r.kprime_violations << '\n';
                for (auto [name, w] : {std::pair{"witness_K", &r.witness_K}, std::pair{"witness_Kprime", &r.witness_Kprime}}) {
                    if (w->a < 0) continue;
                    *out << name << ' ' << w->a << ' ' << w->b << " hausdorff " << w->hausdorff << " pointwise "
                         << w->pointwise << "\n  sigma " << join(w->sigma) << "\n  sigma' " << join(w->sigma_prime)
                         << '\n';
                }
            }
            return r.kprime_violations == 0 ? kOk : kNegative;
        };
    });

    // probe-triangle
    ProbeInput tri_in;
    TriangleOptions tri_opts;
    auto* tri_cmd = app.add_subcommand("probe-triangle", "triangle thinness δ (parallel over triangles)");
    add_probe_input(tri_cmd, tri_in);
    tri_cmd->add_option("--sample", tri_opts.sample, "triangles sampled; exhaustive when there are at most this many");
    tri_cmd->add_option("--seed", tri_opts.seed, "sampling seed");
    tri_cmd->callback([&] {
        run = [&] {
            if (tri_in.graph_path.empty() == tri_in.tp_path.empty())
                throw CLI::ValidationError("probe-triangle", "exactly one of --graph and --tp is required");
            ProbeSubject subj(tri_in);
            tri_opts.basepoint = tri_in.basepoint;
            tri_opts.radius = tri_in.radius;
            tri_opts.workers = G.workers;
            ThinnessReport r = triangle_thinness(*subj.graph, *subj.metric, tri_opts);
            Output out(G.output);
            if (G.json) {
                *out << Json{{"radius", r.radius},
                             {"basepoint", r.basepoint},
                             {"vertices_in_ball", r.vertices_in_ball},
                             {"triangles", r.triangles},
                             {"skipped", r.sides_skipped},
                             {"exhaustive", r.exhaustive},
                             {"seed", r.seed},
                             {"delta", r.triangle_delta},
                             {"witness_triangle", r.witness_triangle},
                             {"witness_sides", r.witness_sides}}
                            .dump(2)
                     << '\n';
            } else {
                *out << "radius " << r.radius << "\nbasepoint " << r.basepoint << "\nvertices " << r.vertices_in_ball
                     << "\ntriangles " << r.triangles << "\nskipped " << r.sides_skipped << "\nsampling "
                     << (r.exhaustive ? "exhaustive" : "seeded") << "\nseed " << r.seed << "\ndelta "
                     << r.triangle_delta << '\n';
                if (!r.witness_triangle.empty()) {
                    *out << "witness " << join(r.witness_triangle) << '\n';
                    for (const auto& s : r.witness_sides) *out << "  side " << join(s) << '\n';
                }
            }
            return kOk;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        return run();
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kParse;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kNegative;
    } catch (const CapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << '\n';
        return kCap;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
