// Command-line front end: run mechanisms on instance files, audit
// allocations, compute interim tables, run incentive audits, divide cakes,
// and execute the named replication fixtures.
//
// Exit codes: 0 all requested verdicts hold, 1 some verdict failed,
// 2 configuration/parse problem, 3 an enumeration or node cap was exceeded.

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairdiv/audits.hpp"
#include "fairdiv/cake.hpp"
#include "fairdiv/characterization.hpp"
#include "fairdiv/errors.hpp"
#include "fairdiv/interim.hpp"
#include "fairdiv/io.hpp"
#include "fairdiv/mechanisms.hpp"
#include "fairdiv/priors.hpp"
#include "fairdiv/replicate.hpp"
#include "fairdiv/welfare.hpp"

namespace {

using fairdiv::Rational;
using nlohmann::json;

struct Options {
    std::string command;
    std::string instance_path;
    std::string mech = "rr-pass";
    std::string predicates = "ef1";
    std::string alloc_literal;
    std::string prior = "simplex";
    std::string values_literal;
    std::vector<std::string> deviation_literals;
    std::string order_literal;
    int positive_count = -1;
    int agent = 1;  // 1-indexed on the CLI
    int n = 2;
    int m = 0;
    std::string fixture_id;
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 1;
    std::string format = "json";
    std::uint64_t cap_enum = fairdiv::kDefaultInterimCap;
    std::uint64_t cap_nodes = 10'000'000;
    std::string out_path;
    bool mc = false;
};

std::vector<Rational> parse_rational_list(const std::string& text) {
    std::vector<Rational> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, ',')) {
        out.push_back(fairdiv::rational_from_string(cur));
    }
    if (out.empty()) throw fairdiv::ConfigError("empty value list");
    return out;
}

fairdiv::Mechanism parse_mechanism(const std::string& text, int n) {
    const auto colon = text.find(':');
    std::string head = text.substr(0, colon);
    const std::string rest =
        colon == std::string::npos ? "" : text.substr(colon + 1);
    for (auto& c : head) {
        if (c == '_') c = '-';
    }
    if (head == "rr-pass") return fairdiv::Mechanism::RrPass();
    if (head == "pass-least-favorite") return fairdiv::Mechanism::PassLeastFavorite();
    if (head == "serial-dictatorship") {
        std::vector<int> order;
        if (rest.empty()) {
            for (int i = 0; i < n; ++i) order.push_back(i);
        } else {
            std::istringstream in(rest);
            std::string tok;
            while (std::getline(in, tok, ',')) {
                try {
                    order.push_back(std::stoi(tok) - 1);
                } catch (const std::exception&) {
                    throw fairdiv::ConfigError("bad dictator order: " + rest);
                }
            }
        }
        return fairdiv::Mechanism::SerialDictatorship(std::move(order));
    }
    if (head == "welfare-max") {
        const std::string spec = rest.empty() ? "util" : rest;
        return fairdiv::Mechanism::WelfareMax(fairdiv::WelfareFn::parse(spec));
    }
    throw fairdiv::ConfigError("unknown mechanism: " + text);
}

fairdiv::ValuationProfile require_goods(const fairdiv::Instance& inst) {
    if (!inst.goods) {
        throw fairdiv::ConfigError("instance has no goods valuation matrix");
    }
    return *inst.goods;
}

// One row per verdict or estimate; nested objects are flattened to text.
void write_csv_rows(std::ostream& out, const json& report) {
    out << "key,value\n";
    std::function<void(const std::string&, const json&)> walk =
        [&](const std::string& prefix, const json& node) {
            if (node.is_object()) {
                for (const auto& [k, v] : node.items()) {
                    walk(prefix.empty() ? k : prefix + "." + k, v);
                }
            } else if (node.is_array()) {
                int idx = 0;
                for (const auto& v : node) {
                    walk(prefix + "[" + std::to_string(idx++) + "]", v);
                }
            } else {
                std::string text = node.is_string() ? node.get<std::string>()
                                                    : node.dump();
                for (auto& c : text) {
                    if (c == ',') c = ';';
                }
                out << prefix << "," << text << "\n";
            }
        };
    walk("", report);
}

void emit(const Options& opt, const json& report) {
    std::ostringstream buffer;
    if (opt.format == "csv") {
        write_csv_rows(buffer, report);
    } else {
        buffer << report.dump(2) << "\n";
    }
    if (opt.out_path.empty()) {
        std::cout << buffer.str();
    } else {
        std::ofstream f(opt.out_path);
        if (!f) throw fairdiv::ConfigError("cannot write: " + opt.out_path);
        f << buffer.str();
    }
}

json config_json(const Options& opt) {
    json cfg{{"seed", opt.seed},
             {"samples", opt.samples},
             {"cap_enum", opt.cap_enum},
             {"cap_nodes", opt.cap_nodes}};
    if (!opt.instance_path.empty()) cfg["instance"] = opt.instance_path;
    if (!opt.fixture_id.empty()) cfg["fixture"] = opt.fixture_id;
    return cfg;
}

json utilities_json(const fairdiv::ValuationProfile& v,
                    const fairdiv::Allocation& x) {
    json out = json::array();
    for (const auto& u : utility_vector(v, x)) {
        out.push_back(fairdiv::to_string(u));
    }
    return out;
}

json bundles_json(const fairdiv::Allocation& x) {
    json out = json::array();
    for (int i = 0; i < x.num_agents; ++i) {
        json items = json::array();
        for (int j = 0; j < static_cast<int>(x.owner.size()); ++j) {
            if (x.owner[j] == i) items.push_back(j + 1);
        }
        out.push_back(std::move(items));
    }
    return out;
}

int cmd_allocate(const Options& opt) {
    const fairdiv::ValuationProfile v =
        require_goods(fairdiv::load_instance(opt.instance_path));
    const fairdiv::Mechanism mech = parse_mechanism(opt.mech, v.n());
    const fairdiv::Allocation x = mech.run(v);
    json report = {{"command", "allocate"},
                   {"mechanism", mech.name()},
                   {"owners", fairdiv::allocation_to_json(x)},
                   {"bundles", bundles_json(x)},
                   {"utilities", utilities_json(v, x)},
                   {"config", config_json(opt)}};
    emit(opt, report);
    return 0;
}

int cmd_audit(const Options& opt) {
    const fairdiv::ValuationProfile v =
        require_goods(fairdiv::load_instance(opt.instance_path));
    fairdiv::Allocation x{};
    std::string source;
    if (!opt.alloc_literal.empty()) {
        x = fairdiv::allocation_from_string(opt.alloc_literal, v.n(), v.m());
        source = opt.alloc_literal;
    } else {
        const fairdiv::Mechanism mech = parse_mechanism(opt.mech, v.n());
        x = mech.run(v);
        source = mech.name();
    }

    bool all_hold = true;
    json verdicts = json::array();
    std::istringstream in(opt.predicates);
    std::string name;
    while (std::getline(in, name, ',')) {
        fairdiv::AuditReport rep;
        if (name == "ef1") {
            rep = fairdiv::is_ef1(v, x);
        } else if (name == "envy-free") {
            rep = fairdiv::is_envy_free(v, x);
        } else if (name == "sd") {
            rep = fairdiv::is_efficient(v, x, fairdiv::EfficiencyCriterion::sd,
                                        opt.cap_enum);
        } else if (name == "sd-plus") {
            rep = fairdiv::is_efficient(
                v, x, fairdiv::EfficiencyCriterion::sd_plus, opt.cap_enum);
        } else if (name == "pareto") {
            rep = fairdiv::is_efficient(
                v, x, fairdiv::EfficiencyCriterion::pareto, opt.cap_enum);
        } else if (name == "fpo") {
            rep = fairdiv::is_fpo(v, x);
        } else if (name == "fulfilling") {
            rep = fairdiv::is_fulfilling(v, x);
        } else {
            throw fairdiv::ConfigError("unknown predicate: " + name);
        }
        all_hold = all_hold && rep.verdict;
        verdicts.push_back(rep.to_json());
    }

    json report = {{"command", "audit"},
                   {"allocation", source},
                   {"owners", fairdiv::allocation_to_json(x)},
                   {"verdicts", verdicts},
                   {"all_hold", all_hold},
                   {"config", config_json(opt)}};
    emit(opt, report);
    return all_hold ? 0 : 1;
}

int cmd_interim(const Options& opt) {
    if (opt.m <= 0) throw fairdiv::ConfigError("interim needs --items");
    const fairdiv::Mechanism mech = parse_mechanism(opt.mech, opt.n);
    const int agent = opt.agent - 1;

    if (!opt.order_literal.empty()) {
        std::vector<int> order;
        std::istringstream in(opt.order_literal);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            try {
                order.push_back(std::stoi(tok) - 1);
            } catch (const std::exception&) {
                throw fairdiv::ConfigError("bad item order: " + opt.order_literal);
            }
        }
        const int k = opt.positive_count < 0 ? opt.m : opt.positive_count;
        fairdiv::InterimTable t = fairdiv::interim_allocation(
            mech, agent, {order, k}, opt.n, opt.m, opt.cap_enum);
        json q = json::array();
        for (const auto& x : t.q) q.push_back(fairdiv::to_string(x));
        emit(opt, {{"command", "interim"},
                   {"mechanism", mech.name()},
                   {"agent", opt.agent},
                   {"q", q},
                   {"evaluations", t.evaluations},
                   {"config", config_json(opt)}});
        return 0;
    }

    fairdiv::PositionalInterim p =
        fairdiv::positional_interim(mech, agent, opt.n, opt.m, opt.cap_enum);
    const bool monotone = p.positional && fairdiv::check_monotone(p.q_pos);
    json q = json::array();
    for (const auto& x : p.q_pos) q.push_back(fairdiv::to_string(x));
    json report = {{"command", "interim"},
                   {"mechanism", mech.name()},
                   {"agent", opt.agent},
                   {"positional", p.positional},
                   {"monotone", monotone},
                   {"q_pos", q},
                   {"config", config_json(opt)}};
    emit(opt, report);
    return p.positional && monotone ? 0 : 1;
}

int cmd_bic(const Options& opt) {
    if (opt.values_literal.empty()) {
        throw fairdiv::ConfigError("bic needs --values");
    }
    const std::vector<Rational> truth = parse_rational_list(opt.values_literal);
    const int agent = opt.agent - 1;
    const fairdiv::Mechanism mech = parse_mechanism(opt.mech, opt.n);

    if (!opt.mc) {
        fairdiv::BicAuditResult r =
            fairdiv::bic_audit_exact(mech, agent, truth, opt.n, opt.cap_enum);
        json report = {{"command", "bic"},
                       {"mode", "exact"},
                       {"mechanism", mech.name()},
                       {"agent", opt.agent},
                       {"truthful_eu", fairdiv::to_string(r.truthful_eu)},
                       {"best_deviation_eu",
                        fairdiv::to_string(r.best_deviation_eu)},
                       {"verdict", r.verdict},
                       {"config", config_json(opt)}};
        emit(opt, report);
        return r.verdict ? 0 : 1;
    }

    if (opt.deviation_literals.empty()) {
        throw fairdiv::ConfigError("bic --mc needs at least one --deviation");
    }
    std::vector<std::vector<Rational>> devs;
    for (const auto& lit : opt.deviation_literals) {
        devs.push_back(parse_rational_list(lit));
    }
    const fairdiv::PriorSpec prior =
        fairdiv::PriorSpec::parse(opt.prior, static_cast<int>(truth.size()));
    const auto reports = fairdiv::bic_audit_mc(mech, agent, truth, devs, prior,
                                               opt.n, opt.samples, opt.seed);
    bool bic_plausible = true;
    json rows = json::array();
    for (std::size_t d = 0; d < reports.size(); ++d) {
        const auto& r = reports[d];
        const bool profitable = r.estimate > 3.0 * r.std_error;
        bic_plausible = bic_plausible && !profitable;
        rows.push_back({{"deviation", opt.deviation_literals[d]},
                        {"gain", r.estimate},
                        {"std_error", r.std_error},
                        {"count", r.count},
                        {"profitable", profitable}});
    }
    json report = {{"command", "bic"},
                   {"mode", "mc"},
                   {"mechanism", mech.name()},
                   {"agent", opt.agent},
                   {"prior", prior.name()},
                   {"reports", rows},
                   {"verdict", bic_plausible},
                   {"config", config_json(opt)}};
    emit(opt, report);
    return bic_plausible ? 0 : 1;
}

int cmd_cake(const Options& opt) {
    const fairdiv::Instance inst = fairdiv::load_instance(opt.instance_path);
    if (!inst.cake) throw fairdiv::ConfigError("instance has no densities");
    const auto& reports = *inst.cake;
    const fairdiv::IaResult ia = fairdiv::incremental_accommodation(reports);
    const fairdiv::ProportionalityReport prop =
        fairdiv::is_proportional(ia.allocation, reports);

    json pieces = json::array();
    json shares = json::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
        json iv = json::array();
        for (const auto& seg : ia.allocation.pieces[i].intervals()) {
            iv.push_back({fairdiv::to_string(seg.lo), fairdiv::to_string(seg.hi)});
        }
        pieces.push_back(std::move(iv));
        shares.push_back(fairdiv::to_string(
            fairdiv::integrate(reports[i], ia.allocation.pieces[i])));
    }
    json report = {{"command", "cake"},
                   {"agents", reports.size()},
                   {"pieces", pieces},
                   {"shares", shares},
                   {"proportional", prop.verdict},
                   {"config", config_json(opt)}};
    emit(opt, report);
    return prop.verdict ? 0 : 1;
}

int cmd_replicate(const Options& opt) {
    fairdiv::ReplicationOptions ropts;
    ropts.seed = opt.seed;
    ropts.samples = opt.samples;
    ropts.node_budget = opt.cap_nodes;
    const fairdiv::ReplicationResult r =
        fairdiv::run_replication(opt.fixture_id, ropts);
    json report = {{"command", "replicate"},
                   {"id", r.id},
                   {"pass", r.pass},
                   {"details", r.details},
                   {"config", config_json(opt)}};
    emit(opt, report);
    return r.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"fair-division workbench"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", opt.format, "json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out", opt.out_path, "write the report to this file");
        sub->add_option("--seed", opt.seed, "random seed");
        sub->add_option("--samples", opt.samples, "Monte Carlo sample count");
        sub->add_option("--cap-enum", opt.cap_enum, "enumeration cap");
        sub->add_option("--cap-nodes", opt.cap_nodes, "search node budget");
    };

    CLI::App* allocate = app.add_subcommand("allocate", "run a mechanism");
    allocate->add_option("instance", opt.instance_path)->required();
    allocate->add_option("--mech", opt.mech,
                         "rr-pass | serial-dictatorship[:order] | "
                         "pass-least-favorite | welfare-max:<welfare>");
    add_common(allocate);

    CLI::App* audit = app.add_subcommand("audit", "audit an allocation");
    audit->add_option("instance", opt.instance_path)->required();
    audit->add_option("--predicates", opt.predicates,
                      "comma list: ef1,envy-free,sd,sd-plus,pareto,fpo,fulfilling");
    audit->add_option("--alloc", opt.alloc_literal,
                      "owner list like \"1,1,2,2\" (default: run --mech)");
    audit->add_option("--mech", opt.mech);
    add_common(audit);

    CLI::App* interim = app.add_subcommand("interim", "interim allocation table");
    interim->add_option("--mech", opt.mech);
    interim->add_option("--agents,-n", opt.n, "number of agents");
    interim->add_option("--items,-m", opt.m, "number of items")->required();
    interim->add_option("--agent", opt.agent, "1-indexed agent");
    interim->add_option("--order", opt.order_literal,
                        "single report: comma list of items, best first");
    interim->add_option("--positive", opt.positive_count,
                        "positive count for --order (default all)");
    add_common(interim);

    CLI::App* bic = app.add_subcommand("bic", "incentive audit");
    bic->add_option("--mech", opt.mech);
    bic->add_option("--agents,-n", opt.n);
    bic->add_option("--agent", opt.agent, "1-indexed agent");
    bic->add_option("--values", opt.values_literal, "true values, comma list");
    bic->add_flag("--mc", opt.mc, "Monte Carlo mode (default: exact)");
    bic->add_option("--deviation", opt.deviation_literals,
                    "misreport row, comma list (repeatable)");
    bic->add_option("--prior", opt.prior,
                    "simplex | order_uniform | uniform:a,b | exp:l | "
                    "per_item:a,b;c,d");
    add_common(bic);

    CLI::App* cake = app.add_subcommand("cake", "divide and audit a cake");
    cake->add_option("instance", opt.instance_path)->required();
    add_common(cake);

    CLI::App* replicate = app.add_subcommand("replicate", "run a named fixture");
    replicate->add_option("id", opt.fixture_id)->required();
    add_common(replicate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    for (CLI::App* sub : {allocate, audit, interim, bic, cake, replicate}) {
        if (sub->parsed()) opt.command = sub->get_name();
    }

    try {
        if (allocate->parsed()) return cmd_allocate(opt);
        if (audit->parsed()) return cmd_audit(opt);
        if (interim->parsed()) return cmd_interim(opt);
        if (bic->parsed()) return cmd_bic(opt);
        if (cake->parsed()) return cmd_cake(opt);
        if (replicate->parsed()) return cmd_replicate(opt);
        return 2;
    } catch (const fairdiv::CapExceeded& e) {
        // Emit what is known so the caller still gets a machine-readable
        // document alongside the distinct exit code.
        json partial = {{"command", opt.command},
                        {"partial", true},
                        {"error", e.what()},
                        {"config", config_json(opt)}};
        try {
            emit(opt, partial);
        } catch (const std::exception&) {
        }
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return 3;
    } catch (const fairdiv::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const fairdiv::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
