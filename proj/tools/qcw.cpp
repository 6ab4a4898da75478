#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcw/errors.hpp"
#include "qcw/harness.hpp"

namespace {

struct SubState {
    qcw::SessionConfig cfg;
    std::vector<std::string> knob_args;
    std::vector<std::string> text_args;
    std::string graph_file;
    size_t default_trials = 100;
};

void apply_pairs(const std::vector<std::string>& args, bool numeric,
                 qcw::SessionConfig& cfg) {
    for (const std::string& arg : args) {
        size_t eq = arg.find('=');
        if (eq == std::string::npos || eq == 0)
            throw qcw::UsageError("expected KEY=VALUE, got '" + arg + "'");
        std::string key = arg.substr(0, eq);
        std::string value = arg.substr(eq + 1);
        if (!numeric) {
            cfg.text[key] = value;
            continue;
        }
        try {
            size_t used = 0;
            cfg.knobs[key] = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
            throw qcw::UsageError("knob '" + key + "' needs a numeric value");
        }
    }
}

std::string human_line(const qcw::StatReport& r) {
    const char* rule = "upper";
    switch (r.rule) {
        case qcw::BoundRule::upper: rule = "upper"; break;
        case qcw::BoundRule::lower: rule = "lower"; break;
        case qcw::BoundRule::two_sided: rule = "two_sided"; break;
        case qcw::BoundRule::exact: rule = "exact"; break;
    }
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "[%s] %s estimate=%.6g std_err=%.6g bound=%.6g rule=%s",
                  r.pass ? "pass" : "FAIL", r.metric.c_str(), r.estimate,
                  r.std_err, r.bound, rule);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw qcw::FormatError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw qcw::FormatError("failed writing '" + path + "'");
}

void add_knob_option(CLI::App* sub, SubState& st, const std::string& flag,
                     const std::string& knob, const std::string& help) {
    sub->add_option_function<double>(
        flag, [&st, knob](double v) { st.cfg.knobs[knob] = v; }, help);
}

void add_text_option(CLI::App* sub, SubState& st, const std::string& flag,
                     const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(
        flag, [&st, key](const std::string& v) { st.cfg.text[key] = v; },
        help);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic two-party protocol workbench"};
    app.require_subcommand(1);

    uint64_t seed = 1;
    size_t trials = 0;
    size_t parallelism = 1;
    bool json = false;
    std::string out_path;
    app.add_option("--seed", seed, "Master seed (QCW_SEED overrides)");
    app.add_option("--trials", trials,
                   "Sessions per batch (0 = per-protocol default)");
    app.add_option("--parallelism", parallelism, "Worker threads");
    app.add_flag("--json", json, "Print one JSON object per report");
    app.add_option("--out", out_path, "Also write JSON lines to this file");

    std::map<std::string, SubState> subs;
    auto make_sub = [&](const std::string& name, const std::string& desc,
                        size_t default_trials) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->fallthrough();
        SubState& st = subs[name];
        st.cfg.protocol = name;
        st.default_trials = default_trials;
        sub->add_option("--alice", st.cfg.alice, "Alice strategy");
        sub->add_option("--bob", st.cfg.bob, "Bob strategy");
        sub->add_option("--eve", st.cfg.eve, "Eve strategy");
        sub->add_option("--knob", st.knob_args,
                        "Numeric parameter as KEY=VALUE (repeatable)");
        sub->add_option("--text", st.text_args,
                        "Text parameter as KEY=VALUE (repeatable)");
        return sub;
    };

    CLI::App* ot = make_sub("ot", "Oblivious transfer on the sealed channel", 20);
    add_knob_option(ot, subs["ot"], "--m", "m", "Channel size");
    add_knob_option(ot, subs["ot"], "--alpha", "alpha", "Test fraction");
    add_knob_option(ot, subs["ot"], "--lambda", "lambda", "Privacy margin");
    add_knob_option(ot, subs["ot"], "--phi", "phi", "Channel noise rate");
    add_knob_option(ot, subs["ot"], "--phi-prime", "phi_prime",
                    "Accepted test error rate");
    add_knob_option(ot, subs["ot"], "--gamma", "gamma",
                    "Adversary storage rate");

    CLI::App* id = make_sub("id", "Password identification", 100);
    add_knob_option(id, subs["id"], "--m", "m", "Channel size");
    add_knob_option(id, subs["id"], "--ell", "ell", "Response length");
    add_knob_option(id, subs["id"], "--passwords", "passwords",
                    "Password space size");

    CLI::App* idplus = make_sub(
        "idplus", "Identification hardened against a classical tap", 20);
    add_knob_option(idplus, subs["idplus"], "--m", "m", "Channel size");
    add_knob_option(idplus, subs["idplus"], "--ell", "ell", "Response length");
    add_knob_option(idplus, subs["idplus"], "--tag-bits", "tag_bits",
                    "Authentication tag length");

    CLI::App* coin = make_sub("coin", "Committed coin flips", 2000);
    add_knob_option(coin, subs["coin"], "--bits", "bits", "Coins per session");
    add_knob_option(coin, subs["coin"], "--flavor", "flavor",
                    "0 plain, 1 keyed, 2 keyed with shared randomizer");
    add_knob_option(coin, subs["coin"], "--sigma", "sigma",
                    "Share-vector parameter for flavor 2");
    add_text_option(coin, subs["coin"], "--target", "target",
                    "Forced outcome as hex");

    CLI::App* commit = make_sub("commit", "Single-bit commitments", 50);
    add_knob_option(commit, subs["commit"], "--count", "count",
                    "Commitments per session");
    add_text_option(commit, subs["commit"], "--mode", "mode",
                    "Key mode: binding or hiding");

    CLI::App* sss = make_sub("ssscommit", "Share-vector commitments", 200);
    add_knob_option(sss, subs["ssscommit"], "--sigma", "sigma",
                    "Shares opened per challenge");
    add_knob_option(sss, subs["ssscommit"], "--field-bits", "field_bits",
                    "Field size exponent");

    CLI::App* zkpk = make_sub("zkpk", "Cycle-knowledge proofs", 100);
    add_knob_option(zkpk, subs["zkpk"], "--vertices", "vertices",
                    "Vertices of the sampled instance");
    add_knob_option(zkpk, subs["zkpk"], "--sigma", "sigma", "Repetitions");
    add_knob_option(zkpk, subs["zkpk"], "--edge-prob", "edge_prob",
                    "Extra-arc probability");
    zkpk->add_option("--graph-file", subs["zkpk"].graph_file,
                     "JSON adjacency list to prove on");

    CLI::App* iqzk = make_sub("iqzk", "Proofs on a flipped reference string",
                              200);
    add_knob_option(iqzk, subs["iqzk"], "--kappa", "kappa",
                    "Reference string length");
    add_text_option(iqzk, subs["iqzk"], "--statement", "statement",
                    "Statement bytes as hex");

    CLI::App* suite =
        app.add_subcommand("suite", "Run the fixed cross-protocol battery");
    suite->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (const char* env = std::getenv("QCW_SEED")) {
            try {
                size_t used = 0;
                std::string text(env);
                seed = std::stoull(text, &used);
                if (used != text.size()) throw std::invalid_argument(text);
            } catch (const std::exception&) {
                throw qcw::UsageError("QCW_SEED must be an integer");
            }
        }

        if (suite->parsed()) {
            std::vector<qcw::SuiteEntry> entries =
                qcw::run_suite(seed, parallelism);
            std::string text = qcw::suite_json(entries);
            std::cout << text;
            if (!out_path.empty()) write_file(out_path, text);
            for (const qcw::SuiteEntry& entry : entries)
                for (const qcw::StatReport& report : entry.reports)
                    if (!report.pass) return 1;
            return 0;
        }

        for (auto& [name, st] : subs) {
            CLI::App* sub = app.get_subcommand(name);
            if (!sub->parsed()) continue;
            apply_pairs(st.knob_args, true, st.cfg);
            apply_pairs(st.text_args, false, st.cfg);
            if (!st.graph_file.empty()) {
                std::ifstream in(st.graph_file, std::ios::binary);
                if (!in)
                    throw qcw::UsageError("cannot read graph file '" +
                                          st.graph_file + "'");
                std::string content((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
                st.cfg.text["graph"] = content;
            }
            size_t n = trials == 0 ? st.default_trials : trials;
            std::vector<qcw::StatReport> reports =
                qcw::run_batch(st.cfg, seed, n, parallelism);
            std::string json_lines;
            bool all_pass = true;
            for (const qcw::StatReport& report : reports) {
                json_lines += qcw::report_json_line(report);
                json_lines += '\n';
                all_pass = all_pass && report.pass;
                if (json)
                    std::cout << qcw::report_json_line(report) << '\n';
                else
                    std::cout << human_line(report) << '\n';
            }
            if (!out_path.empty()) write_file(out_path, json_lines);
            return all_pass ? 0 : 1;
        }
        throw qcw::UsageError("no subcommand selected");
    } catch (const qcw::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const qcw::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const qcw::ParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const qcw::FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
