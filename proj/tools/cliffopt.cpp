// cliffopt: command-line front end.
//
// Exit codes:
//   0  success
//   1  input or runtime error (unreadable file, parse error, bad database)
//   2  invalid flags
//   3  database build stopped at the memory limit (partial file written)
//   4  no circuit found within the database or search budget
//   5  verification failed

#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>

#include <cliffopt/cliffopt.hpp>

using namespace cliffopt;
using nlohmann::json;

namespace {

enum Exit : int { kOk = 0, kRuntime = 1, kUsage = 2, kMemory = 3, kNotFound = 4, kVerifyFailed = 5 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out || !(out << text) || !out.flush()) {
        throw std::runtime_error("cannot write " + path);
    }
}

enum class FileKind { Tableau, Circuit, Stabilizers };

/// Sniffs the first significant token: "n" starts a tableau, "qubits" a circuit.
FileKind sniff(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = line.substr(0, line.find('#'));
        std::istringstream words(line);
        std::string first;
        if (words >> first) {
            if (first == "n") {
                return FileKind::Tableau;
            }
            if (first == "qubits") {
                return FileKind::Circuit;
            }
            return FileKind::Stabilizers;
        }
    }
    throw std::runtime_error("empty input file");
}

Tableau target_tableau(const std::string& text) {
    switch (sniff(text)) {
        case FileKind::Tableau: return parse_tableau(text);
        case FileKind::Circuit: return from_circuit(parse_circuit(text));
        case FileKind::Stabilizers: break;
    }
    throw std::runtime_error("expected a tableau or circuit file");
}

StabilizerGroup load_stabilizers(const std::string& path) {
    std::vector<std::string> warnings;
    auto g = parse_stabilizers(read_text(path), &warnings);
    for (const auto& w : warnings) {
        std::cerr << "warning: " << w << "\n";
    }
    return g;
}

std::string upper(std::string s) {
    for (auto& c : s) {
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return s;
}

GateKind parse_gate_name(const std::string& raw) {
    const std::string s = upper(raw);
    if (s == "P") return GateKind::P;
    if (s == "SDG" || s == "PDAG") return GateKind::Pdag;
    if (s == "CNOT") return GateKind::Cnot;
    for (auto k : kAllGateKinds) {
        if (upper(std::string(mnemonic(k))) == s) {
            return k;
        }
    }
    throw UsageError("unknown gate '" + raw + "'");
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

std::string gate_list(GateSet g) {
    std::string out;
    for (auto k : kAllGateKinds) {
        if (g.contains(k)) {
            out += (out.empty() ? "" : ",") + std::string(mnemonic(k));
        }
    }
    return out;
}

/// Cost model from --metric, --gates ("H,S,CX") and --weights ("H=0,S=0,CZ=1").
CostModel make_model(const std::string& metric, const std::string& gates, const std::string& weights) {
    GateSet set;
    for (const auto& g : split_list(gates)) {
        set.insert(parse_gate_name(g));
    }
    try {
        if (metric == "cz") {
            if (!gates.empty() || !weights.empty()) {
                throw UsageError("--metric cz fixes the gate set and weights");
            }
            return CostModel::cz_count();
        }
        if (metric == "weighted") {
            WeightTable w{};
            for (const auto& item : split_list(weights)) {
                const auto eq = item.find('=');
                if (eq == std::string::npos) {
                    throw UsageError("weights take the form GATE=VALUE");
                }
                const auto kind = parse_gate_name(item.substr(0, eq));
                std::size_t used = 0;
                unsigned long value = 0;
                try {
                    value = std::stoul(item.substr(eq + 1), &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used == 0 || used != item.size() - eq - 1) {
                    throw UsageError("bad weight '" + item + "'");
                }
                w[static_cast<std::size_t>(kind)] = static_cast<std::uint32_t>(value);
                if (gates.empty()) {
                    set.insert(kind);
                }
            }
            return CostModel::weighted(set, w);
        }
        if (!weights.empty()) {
            throw UsageError("--weights needs --metric weighted");
        }
        if (set.empty()) {
            set = CostModel::default_gates();
        }
        if (metric == "gates") {
            return CostModel::gate_count(set);
        }
        if (metric == "depth") {
            return CostModel::depth(set);
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    throw UsageError("unknown metric '" + metric + "'");
}

std::string metric_name(const CostModel& m) {
    if (m == CostModel::cz_count()) {
        return "cz";
    }
    switch (m.metric()) {
        case Metric::GateCount: return "gates";
        case Metric::Depth: return "depth";
        case Metric::Weighted: return "weighted";
    }
    return "?";
}

EquivMode parse_mode(const std::string& s) {
    if (s == "exact") return EquivMode::Exact;
    if (s == "simultaneous") return EquivMode::Simultaneous;
    if (s == "independent") return EquivMode::Independent;
    throw UsageError("unknown mode '" + s + "'");
}

/// "512M", "2G", "100000" -> bytes.
std::size_t parse_bytes(const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw UsageError("bad size '" + s + "'");
    }
    const std::string suffix = upper(s.substr(used));
    double scale = 1;
    if (suffix == "K" || suffix == "KB") scale = 1024.0;
    else if (suffix == "M" || suffix == "MB") scale = 1024.0 * 1024;
    else if (suffix == "G" || suffix == "GB") scale = 1024.0 * 1024 * 1024;
    else if (!suffix.empty() && suffix != "B") throw UsageError("bad size suffix in '" + s + "'");
    if (!(v > 0)) {
        throw UsageError("size must be positive");
    }
    return static_cast<std::size_t>(v * scale);
}

/// Key as a JSON number when it fits, otherwise a decimal string.
json key_json(Key k) {
    if (k <= std::numeric_limits<std::uint64_t>::max()) {
        return static_cast<std::uint64_t>(k);
    }
    return to_decimal(k);
}

std::string fixed(double v, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

// ---------------------------------------------------------------- build-db

struct BuildArgs {
    std::size_t qubits = 0;
    std::string mode = "simultaneous";
    std::string metric = "gates";
    std::string gates;
    std::string weights;
    std::optional<unsigned> max_cost;
    std::string mem_limit;
    unsigned threads = 0;
    std::string out;
    bool json = false;
};

template <typename Domain>
int run_build(const BuildArgs& a, const CostModel& model, EquivMode mode) {
    BuildOptions opt;
    opt.max_cost = a.max_cost;
    opt.threads = a.threads;
    if (!a.mem_limit.empty()) {
        opt.memory_budget = parse_bytes(a.mem_limit);
    }
    const auto start = Clock::now();
    if (!a.json) {
        opt.on_layer = [](const Layer& l) {
            std::cerr << "layer " << l.cost() << ": " << l.size() << " classes\n";
        };
    }
    auto result = build_database<Domain>(a.qubits, mode, model, opt);
    const double elapsed = seconds_since(start);
    const auto& db = result.db;
    save_database(db, a.out);

    const auto counts = db.orbit_weighted_counts(a.threads);
    const Key total = db.orbit_weighted_total(a.threads);
    const Key order = Domain::group_order(a.qubits);
    if (a.json) {
        json layers = json::array();
        for (std::size_t i = 0; i < db.layers().size(); ++i) {
            layers.push_back({{"cost", i}, {"classes", db.layers()[i].size()}, {"unitaries", key_json(counts[i])}});
        }
        json j = {{"schema", "cliffopt.build-db/1"},
                  {"qubits", a.qubits},
                  {"domain", Domain::paired ? "clifford" : "linear"},
                  {"mode", to_string(mode)},
                  {"metric", metric_name(model)},
                  {"gates", gate_list(model.gates())},
                  {"status", to_string(result.status)},
                  {"layers", layers},
                  {"classes", db.total_classes()},
                  {"unitaries", key_json(total)},
                  {"group_order", key_json(order)},
                  {"key_bytes", db.memory_bytes()},
                  {"seconds", elapsed},
                  {"out", a.out}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "qubits " << a.qubits << "  domain " << (Domain::paired ? "clifford" : "linear") << "  mode "
                  << to_string(mode) << "  metric " << metric_name(model) << "  gates " << gate_list(model.gates())
                  << "\n";
        std::cout << std::setw(6) << "cost" << std::setw(14) << "classes" << std::setw(24) << "unitaries" << "\n";
        for (std::size_t i = 0; i < db.layers().size(); ++i) {
            std::cout << std::setw(6) << i << std::setw(14) << db.layers()[i].size() << std::setw(24)
                      << to_decimal(counts[i]) << "\n";
        }
        std::cout << std::setw(6) << "total" << std::setw(14) << db.total_classes() << std::setw(24)
                  << to_decimal(total) << "\n";
        std::cout << "group order " << to_decimal(order) << "  status " << to_string(result.status) << "  keys "
                  << db.memory_bytes() << " bytes  " << fixed(elapsed, 2) << " s\n";
    }
    if (result.status == BuildStatus::MemoryLimit) {
        std::cerr << "stopped at the memory limit after " << db.layers().size() << " layers; partial database written to "
                  << a.out << "\n";
        return kMemory;
    }
    return kOk;
}

int cmd_build(const BuildArgs& a) {
    const auto model = make_model(a.metric, a.gates, a.weights);
    const auto mode = parse_mode(a.mode);
    if (!model.unit_or_zero_weights()) {
        throw UsageError("database builds need every weight to be 0 or 1");
    }
    if (model.gates().is_linear()) {
        if (a.qubits == 0 || a.qubits > LinearDomain::max_key_qubits) {
            throw UsageError("linear databases support 1.." + std::to_string(LinearDomain::max_key_qubits) + " qubits");
        }
        return run_build<LinearDomain>(a, model, mode);
    }
    if (a.qubits == 0 || a.qubits > CliffordDomain::max_key_qubits) {
        throw UsageError("Clifford databases support 1.." + std::to_string(CliffordDomain::max_key_qubits) + " qubits");
    }
    return run_build<CliffordDomain>(a, model, mode);
}

// ---------------------------------------------------------------- synth

struct PartialArgs {
    std::string metric = "gates";
    std::optional<std::size_t> max_states;
    std::optional<std::uint64_t> max_cost;
    unsigned threads = 0;
};

PartialSearchOptions partial_options(const PartialArgs& a) {
    PartialSearchOptions opt;
    opt.max_states = a.max_states;
    opt.max_cost = a.max_cost;
    opt.threads = resolve_threads(a.threads);
    return opt;
}

struct SynthArgs {
    std::string db;
    std::string target;
    bool mim = false;
    bool explicit_swaps = false;
    PartialArgs partial;
    std::string out;
};

void emit_result(const Circuit& c, const std::string& out, const std::vector<std::string>& report) {
    if (out.empty()) {
        for (const auto& line : report) {
            std::cerr << line << "\n";
        }
        std::cout << emit_circuit(c);
        return;
    }
    write_text(out, emit_circuit(c));
    for (const auto& line : report) {
        std::cout << line << "\n";
    }
}

int cmd_synth(const SynthArgs& a) {
    const std::string text = read_text(a.target);
    if (sniff(text) == FileKind::Stabilizers) {
        std::vector<std::string> warnings;
        const auto group = parse_stabilizers(text, &warnings);
        for (const auto& w : warnings) {
            std::cerr << "warning: " << w << "\n";
        }
        const CostModel model = a.db.empty() ? make_model(a.partial.metric, "", "") : read_database_header(a.db).model();
        const auto r = synth_partial(PartialTarget::from_group(group), model, partial_options(a.partial));
        if (!r.circuit) {
            std::cerr << "no encoder found within the budget; optimal cost is at least " << r.lower_bound << "\n";
            return kNotFound;
        }
        emit_result(*r.circuit, a.out,
                    {"cost " + std::to_string(*r.cost) + " (" + metric_name(model) + ")",
                     "gates " + std::to_string(r.circuit->size()), "depth " + std::to_string(depth(*r.circuit)),
                     "states " + std::to_string(r.states),
                     std::string("verified ") + (verify_encoder(*r.circuit, group) ? "yes" : "no")});
        return kOk;
    }
    if (a.db.empty()) {
        throw UsageError("--db is required for tableau targets");
    }
    const Tableau target = target_tableau(text);
    const AnyDatabase any = load_any_database(a.db);
    return std::visit(
        [&](const auto& db) -> int {
            using DB = std::decay_t<decltype(db)>;
            if (target.num_qubits() != db.num_qubits()) {
                throw std::runtime_error("target has " + std::to_string(target.num_qubits()) +
                                         " qubits but the database has " + std::to_string(db.num_qubits()));
            }
            std::optional<Circuit> c;
            std::optional<unsigned> cost;
            if constexpr (std::is_same_v<DB, LayerDatabase<LinearDomain>>) {
                const auto m = linear_from_tableau(target);
                cost = db.lookup(m);
                c = reconstruct(db, m, a.explicit_swaps);
            } else {
                const auto t = SmallTableau::convert(target);
                cost = db.lookup(t);
                c = reconstruct(db, t, a.explicit_swaps);
                if (!c && a.mim) {
                    auto r = mim_search(db, t, {.threads = resolve_threads(a.partial.threads),
                                                .explicit_swaps = a.explicit_swaps});
                    c = r.circuit;
                    cost = r.cost;
                }
            }
            if (!c) {
                std::cerr << "target is beyond the database (cost > " << db.max_cost() << ")"
                          << (a.mim ? " and the meet-in-the-middle search" : "") << "\n";
                return kNotFound;
            }
            emit_result(*c, a.out,
                        {"cost " + std::to_string(*cost) + " (" + metric_name(db.model()) + ", " +
                             to_string(db.mode()) + ")",
                         "gates " + std::to_string(c->size()), "depth " + std::to_string(depth(*c))});
            return kOk;
        },
        any);
}

// ---------------------------------------------------------------- optimize

struct OptimizeArgs {
    std::string db;
    std::string circuit;
    std::optional<std::size_t> window;
    std::optional<std::size_t> max_qubits;
    std::optional<std::size_t> passes;
    bool mim = false;
    std::string out;
    bool json = false;
};

int cmd_optimize(const OptimizeArgs& a) {
    const Circuit input = parse_circuit(read_text(a.circuit));
    const auto db = load_database<CliffordDomain>(a.db);
    PeepholeConfig cfg;
    cfg.max_qubits = a.max_qubits.value_or(db.num_qubits());
    cfg.window = a.window;
    cfg.max_passes = a.passes;
    cfg.use_mim = a.mim;
    PeepholeResult r;
    try {
        r = optimize(input, db, cfg);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (!a.out.empty()) {
        write_text(a.out, emit_circuit(r.circuit));
    }
    if (a.json) {
        auto j = to_json(r.report);
        if (a.out.empty()) {
            j["circuit"] = emit_circuit(r.circuit);
        }
        std::cout << j.dump(2) << "\n";
        return kOk;
    }
    const auto& p = r.report;
    const double gate_cut = p.input_gates ? 100.0 * (1.0 - double(p.output_gates) / double(p.input_gates)) : 0.0;
    std::ostream& table = a.out.empty() ? std::cerr : std::cout;
    table << std::setw(10) << "" << std::setw(12) << "input" << std::setw(12) << "optimized" << "\n";
    table << std::setw(10) << "gates" << std::setw(12) << p.input_gates << std::setw(12) << p.output_gates << "\n";
    table << std::setw(10) << "depth" << std::setw(12) << p.input_depth << std::setw(12) << p.output_depth << "\n";
    table << std::setw(10) << "cost" << std::setw(12) << p.input_cost << std::setw(12) << p.output_cost << "\n";
    table << "reduction " << fixed(gate_cut, 1) << "%  passes " << p.passes.size() << "  runtime "
          << fixed(p.seconds, 3) << " s\n";
    if (a.out.empty()) {
        std::cout << emit_circuit(r.circuit);
    }
    return kOk;
}

// ---------------------------------------------------------------- qecc

struct QeccArgs {
    std::string stabilizers;
    std::string algo = "staged";
    PartialArgs partial;
    std::string out;
    bool json = false;
};

int cmd_qecc(const QeccArgs& a) {
    const auto group = load_stabilizers(a.stabilizers);
    const auto start = Clock::now();
    std::optional<Circuit> c;
    json search;
    if (a.algo == "staged") {
        c = encode_staged(group);
    } else if (a.algo == "unstaged") {
        c = encode_unstaged(group);
    } else if (a.algo == "optimal") {
        const auto model = make_model(a.partial.metric, "", "");
        const auto r = synth_partial(PartialTarget::from_group(group), model, partial_options(a.partial));
        search = {{"metric", metric_name(model)}, {"states", r.states}, {"lower_bound", r.lower_bound}};
        if (r.cost) {
            search["cost"] = *r.cost;
        }
        if (!r.circuit) {
            if (a.json) {
                std::cout << json{{"schema", "cliffopt.qecc/1"}, {"found", false}, {"search", search}}.dump(2) << "\n";
            }
            std::cerr << "no encoder found within the budget; optimal cost is at least " << r.lower_bound << "\n";
            return kNotFound;
        }
        c = r.circuit;
    } else {
        throw UsageError("unknown algorithm '" + a.algo + "'");
    }
    const double elapsed = seconds_since(start);
    const bool ok = verify_encoder(*c, group);
    std::size_t cz = 0;
    for (const auto& g : c->gates()) {
        cz += arity(g.kind) == 2;
    }
    if (!a.out.empty()) {
        write_text(a.out, emit_circuit(*c));
    }
    if (a.json) {
        json j = {{"schema", "cliffopt.qecc/1"},
                  {"found", true},
                  {"n", group.n},
                  {"k", group.k()},
                  {"algo", a.algo},
                  {"gates", c->size()},
                  {"depth", depth(*c)},
                  {"two_qubit_gates", cz},
                  {"verified", ok},
                  {"seconds", elapsed}};
        if (!search.is_null()) {
            j["search"] = search;
        }
        if (a.out.empty()) {
            j["circuit"] = emit_circuit(*c);
        }
        std::cout << j.dump(2) << "\n";
    } else {
        if (a.out.empty()) {
            std::cout << emit_circuit(*c);
        }
        std::cout << "# code n=" << group.n << " k=" << group.k() << "  algo " << a.algo << "\n";
        std::cout << "# gates " << c->size() << "  depth " << depth(*c) << "  two-qubit " << cz << "\n";
        if (!search.is_null()) {
            std::cout << "# search " << search["metric"].get<std::string>() << " cost " << search["cost"]
                      << "  states " << search["states"] << "\n";
        }
        std::cout << "# verified " << (ok ? "yes" : "no") << "  " << fixed(elapsed, 3) << " s\n";
    }
    if (!ok) {
        std::cerr << "encoder does not produce the stabilizer group\n";
        return kVerifyFailed;
    }
    return kOk;
}

// ---------------------------------------------------------------- sample

struct SampleArgs {
    std::size_t qubits = 0;
    std::uint64_t samples = 20000;
    std::uint64_t seed = 1;
    std::string db;
    double alpha = 0.001;
    bool no_mim = false;
    unsigned threads = 0;
    bool json = false;
};

int cmd_sample(const SampleArgs& a) {
    if (!(a.alpha > 0 && a.alpha < 1)) {
        throw UsageError("--alpha must lie in (0, 1)");
    }
    std::optional<LayerDatabase<CliffordDomain>> db;
    if (!a.db.empty()) {
        db = load_database<CliffordDomain>(a.db);
        if (a.qubits != 0 && a.qubits != db->num_qubits()) {
            throw UsageError("--qubits disagrees with the database");
        }
    } else {
        if (a.qubits == 0 || a.qubits > 3) {
            throw UsageError("without --db, sampling builds a database in memory and supports 1..3 qubits");
        }
        db = build_database<CliffordDomain>(a.qubits, EquivMode::Simultaneous, CostModel::gate_count(),
                                            {.threads = a.threads})
                 .db;
    }
    SampleOptions opt;
    opt.use_mim = !a.no_mim;
    opt.alpha = a.alpha;
    opt.threads = a.threads;
    const auto start = Clock::now();
    const auto est = estimate_distribution(*db, a.samples, a.seed, opt);
    const double elapsed = seconds_since(start);
    const std::string mode = to_string(db->mode());
    if (a.json) {
        json dist = json::object();
        for (const auto& [c, k] : est.counts) {
            dist[std::to_string(c)] = est.proportion(c);
        }
        std::cout << json{{"schema", "cliffopt.sample/1"},
                          {"qubits", db->num_qubits()},
                          {"mode", mode},
                          {"metric", metric_name(db->model())},
                          {"samples", est.samples},
                          {"seed", a.seed},
                          {"alpha", est.alpha},
                          {"epsilon", est.epsilon},
                          {"proportions", dist},
                          {"not_found", est.not_found_mass()},
                          {"seconds", elapsed}}
                         .dump(2)
                  << "\n";
        return kOk;
    }
    std::cout << "qubits " << db->num_qubits() << "  mode " << mode << "  metric " << metric_name(db->model())
              << "  samples " << est.samples << "  seed " << a.seed << "\n";
    std::cout << std::setw(6) << "cost" << std::setw(12) << "count" << std::setw(12) << "proportion" << "\n";
    for (const auto& [c, k] : est.counts) {
        std::cout << std::setw(6) << c << std::setw(12) << k << std::setw(12) << fixed(est.proportion(c), 5) << "\n";
    }
    std::cout << "not found " << fixed(est.not_found_mass(), 5) << "  epsilon " << fixed(est.epsilon, 5)
              << " at confidence " << fixed(1 - est.alpha, 4) << "  " << fixed(elapsed, 2) << " s\n";
    return kOk;
}

// ---------------------------------------------------------------- verify / tableau

struct VerifyArgs {
    std::string circuit;
    std::string target;
    std::string stabilizers;
    std::string mode = "exact";
};

int cmd_verify(const VerifyArgs& a) {
    const Circuit c = parse_circuit(read_text(a.circuit));
    if (a.target.empty() == a.stabilizers.empty()) {
        throw UsageError("give exactly one of --target and --stabilizers");
    }
    bool ok = false;
    if (!a.stabilizers.empty()) {
        ok = verify_encoder(c, load_stabilizers(a.stabilizers));
    } else {
        const auto mode = parse_mode(a.mode);
        const Tableau got = from_circuit(c);
        const Tableau want = target_tableau(read_text(a.target));
        if (got.num_qubits() != want.num_qubits()) {
            ok = false;
        } else if (mode == EquivMode::Exact) {
            ok = got == want;
        } else {
            if (got.num_qubits() > CliffordDomain::max_key_qubits) {
                throw std::runtime_error("renaming-equivalence checks support up to " +
                                         std::to_string(CliffordDomain::max_key_qubits) + " qubits");
            }
            ok = canonicalize(got, mode) == canonicalize(want, mode);
        }
    }
    std::cout << (ok ? "equivalent" : "not equivalent") << "\n";
    return ok ? kOk : kVerifyFailed;
}

int cmd_tableau(const std::string& circuit, const std::string& out) {
    const auto text = emit_tableau(from_circuit(parse_circuit(read_text(circuit))));
    if (out.empty()) {
        std::cout << text;
    } else {
        write_text(out, text);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal Clifford circuit databases, peephole optimization and encoder synthesis"};
    app.require_subcommand(1);
    std::function<int()> run;

    BuildArgs build;
    auto* b = app.add_subcommand("build-db", "Enumerate optimal-cost classes layer by layer");
    b->add_option("--qubits", build.qubits, "Number of qubits")->required();
    b->add_option("--mode", build.mode, "exact | simultaneous | independent")->capture_default_str();
    b->add_option("--metric", build.metric, "gates | depth | cz | weighted")->capture_default_str();
    b->add_option("--gates", build.gates, "Comma-separated gate set, e.g. H,S,CX (default H,S,CX)");
    b->add_option("--weights", build.weights, "Per-gate weights for --metric weighted, e.g. H=0,S=0,CZ=1");
    b->add_option("--max-cost", build.max_cost, "Stop after this cost layer");
    b->add_option("--mem-limit", build.mem_limit, "Memory budget for keys, e.g. 512M or 2G");
    b->add_option("--threads", build.threads, "Worker threads (0 = all cores)");
    b->add_option("--out", build.out, "Output database file")->required();
    b->add_flag("--json", build.json, "Machine-readable report");
    b->callback([&] { run = [&] { return cmd_build(build); }; });

    SynthArgs synth;
    auto* s = app.add_subcommand("synth", "Optimal circuit for a tableau, circuit or stabilizer target");
    s->add_option("--db", synth.db, "Database file (required for tableau targets)");
    s->add_option("--target", synth.target, "Tableau, circuit or stabilizer file")->required();
    s->add_flag("--mim", synth.mim, "Meet-in-the-middle fallback beyond the database");
    s->add_flag("--explicit-swaps", synth.explicit_swaps, "Spell out independent-mode relabelings as SWAPs");
    s->add_option("--metric", synth.partial.metric, "Metric for stabilizer targets without --db: gates | depth | cz");
    s->add_option("--max-states", synth.partial.max_states, "State budget for stabilizer targets");
    s->add_option("--max-cost", synth.partial.max_cost, "Cost budget for stabilizer targets");
    s->add_option("--threads", synth.partial.threads, "Worker threads (0 = all cores)");
    s->add_option("--out", synth.out, "Write the circuit here instead of stdout");
    s->callback([&] { run = [&] { return cmd_synth(synth); }; });

    OptimizeArgs opt;
    auto* o = app.add_subcommand("optimize", "Peephole-optimize a circuit with a simultaneous-mode database");
    o->add_option("--db", opt.db, "Database file")->required();
    o->add_option("--circuit", opt.circuit, "Circuit file")->required();
    o->add_option("--window", opt.window, "Gates scanned past each pivot (default unbounded)");
    o->add_option("--max-qubits", opt.max_qubits, "Subcircuit width (default: database width)");
    o->add_option("--passes", opt.passes, "Maximum number of sweeps");
    o->add_flag("--mim", opt.mim, "Meet-in-the-middle lookups beyond the database");
    o->add_option("--out", opt.out, "Write the circuit here instead of stdout");
    o->add_flag("--json", opt.json, "Machine-readable report");
    o->callback([&] { run = [&] { return cmd_optimize(opt); }; });

    QeccArgs qecc;
    auto* q = app.add_subcommand("qecc", "Encoding circuit for a stabilizer code");
    q->add_option("--stabilizers", qecc.stabilizers, "Stabilizer file")->required();
    q->add_option("--algo", qecc.algo, "staged | unstaged | optimal")->capture_default_str();
    q->add_option("--metric", qecc.partial.metric, "Metric for --algo optimal: gates | depth | cz")
        ->capture_default_str();
    q->add_option("--max-states", qecc.partial.max_states, "State budget for --algo optimal");
    q->add_option("--max-cost", qecc.partial.max_cost, "Cost budget for --algo optimal");
    q->add_option("--threads", qecc.partial.threads, "Worker threads (0 = all cores)");
    q->add_option("--out", qecc.out, "Write the circuit here");
    q->add_flag("--json", qecc.json, "Machine-readable report");
    q->callback([&] { run = [&] { return cmd_qecc(qecc); }; });

    SampleArgs sample;
    auto* m = app.add_subcommand("sample", "Estimate the optimal-cost distribution of random Cliffords");
    m->add_option("--qubits", sample.qubits, "Number of qubits");
    m->add_option("--samples", sample.samples, "Number of samples")->capture_default_str();
    m->add_option("--seed", sample.seed, "Random seed")->capture_default_str();
    m->add_option("--db", sample.db, "Clifford database (built in memory for n <= 3 when absent)");
    m->add_option("--alpha", sample.alpha, "One minus the confidence level")->capture_default_str();
    m->add_flag("--no-mim", sample.no_mim, "Count targets beyond the database as not found");
    m->add_option("--threads", sample.threads, "Worker threads (0 = all cores)");
    m->add_flag("--json", sample.json, "Machine-readable report");
    m->callback([&] { run = [&] { return cmd_sample(sample); }; });

    VerifyArgs verify;
    auto* v = app.add_subcommand("verify", "Check a circuit against a target or a stabilizer group");
    v->add_option("--circuit", verify.circuit, "Circuit file")->required();
    v->add_option("--target", verify.target, "Tableau or circuit file");
    v->add_option("--stabilizers", verify.stabilizers, "Stabilizer file (encoder check)");
    v->add_option("--mode", verify.mode, "exact | simultaneous | independent")->capture_default_str();
    v->callback([&] { run = [&] { return cmd_verify(verify); }; });

    std::string tab_circuit;
    std::string tab_out;
    auto* t = app.add_subcommand("tableau", "Print the tableau of a circuit");
    t->add_option("--circuit", tab_circuit, "Circuit file")->required();
    t->add_option("--out", tab_out, "Write the tableau here");
    t->callback([&] { run = [&] { return cmd_tableau(tab_circuit, tab_out); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }
    try {
        return run();
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
}
