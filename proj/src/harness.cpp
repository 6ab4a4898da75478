#include "qcw/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <thread>

#include <json.hpp>

#include "qcw/coinflip.hpp"
#include "qcw/errors.hpp"
#include "qcw/mixedcommit.hpp"
#include "qcw/protocols.hpp"
#include "qcw/rng.hpp"
#include "qcw/ssscommit.hpp"
#include "qcw/stats.hpp"
#include "qcw/zkpk.hpp"

namespace qcw {

namespace {

double knob_or(const SessionConfig& cfg, const std::string& name, double dflt) {
    auto it = cfg.knobs.find(name);
    return it == cfg.knobs.end() ? dflt : it->second;
}

size_t sknob(const SessionConfig& cfg, const std::string& name, double dflt) {
    double v = knob_or(cfg, name, dflt);
    if (v < 0 || v != std::floor(v))
        throw ParameterError("knob '" + name + "' must be a whole number");
    return static_cast<size_t>(v);
}

std::string text_or(const SessionConfig& cfg, const std::string& name,
                    const std::string& dflt) {
    auto it = cfg.text.find(name);
    return it == cfg.text.end() ? dflt : it->second;
}

Bits parse_target(const SessionConfig& cfg, size_t bits) {
    std::string hex = text_or(cfg, "target", "");
    uint64_t value = 0x5a5a5a5a5a5a5a5aULL;
    if (!hex.empty()) {
        try {
            size_t used = 0;
            value = std::stoull(hex, &used, 16);
            if (used != hex.size()) throw std::invalid_argument(hex);
        } catch (const std::exception&) {
            throw ParameterError("target must be a hex number");
        }
    }
    if (bits < 64) value &= (uint64_t{1} << bits) - 1;
    return uint_to_bits(value, bits);
}

Bytes field_elems_bytes(const std::vector<FieldElem>& values) {
    Bytes out;
    put_u64(out, values.size());
    for (const FieldElem& v : values) put_u64(out, v.value);
    return out;
}

Bytes indices_bytes(const std::vector<size_t>& indices) {
    Bytes out;
    put_u64(out, indices.size());
    for (size_t i : indices) put_u64(out, i);
    return out;
}

Bytes sss_commitment_blob(const SssCommitment& com) {
    Bytes out;
    put_u64(out, com.per_share.size());
    for (const auto& share : com.per_share)
        for (const auto& c : share) {
            Bytes one = serialize_commitment(c);
            out.insert(out.end(), one.begin(), one.end());
        }
    return out;
}

Bytes share_openings_blob(const ShareOpenings& openings) {
    Bytes out;
    put_u64(out, openings.size());
    for (const auto& share : openings)
        for (const auto& o : share) {
            Bytes one = serialize_opening(o);
            out.insert(out.end(), one.begin(), one.end());
        }
    return out;
}

CommitterPlan plan_of(const std::string& name) {
    if (name == "refuse") return refuse_from(0);
    return honest_committer();
}

ResponderStrategy responder_of(const std::string& name) {
    if (name == "constant0") return constant_responder(0);
    if (name == "constant1") return constant_responder(1);
    return honest_responder();
}

StringResponder string_responder_of(const std::string& name, size_t ell) {
    if (name == "constant0") return constant_string_responder(Bits(ell, 0));
    if (name == "constant1") return constant_string_responder(Bits(ell, 1));
    return honest_string_responder();
}

void fill_enforce_metrics(SessionOutcome& out, const EnforceCoinReport& rep) {
    out.metrics["hit"] = rep.hit_target ? 1 : 0;
    out.metrics["aborted"] = rep.outcome.aborted ? 1 : 0;
    out.metrics["enforcement_failure"] = rep.enforcement_failure ? 1 : 0;
    out.metrics["attempts"] = static_cast<double>(rep.attempts);
    out.ok = rep.hit_target;
    out.note = rep.hit_target          ? "outcome forced"
               : rep.enforcement_failure ? "extraction disagreed"
                                         : "aborted";
}

double divergent_escape_bound(size_t sigma) {
    return static_cast<double>(binomial_count(3 * sigma - 1, sigma)) /
           static_cast<double>(binomial_count(4 * sigma, sigma));
}

struct MetricSummary {
    double mean = 0;
    double std_err = 0;
    size_t count = 0;
};

MetricSummary summarize(const std::vector<SessionOutcome>& outs,
                        const std::string& name) {
    MetricSummary s;
    double sum = 0;
    for (const auto& o : outs) {
        auto it = o.metrics.find(name);
        if (it == o.metrics.end()) continue;
        sum += it->second;
        ++s.count;
    }
    if (s.count == 0) return s;
    s.mean = sum / static_cast<double>(s.count);
    if (s.count > 1) {
        double sq = 0;
        for (const auto& o : outs) {
            auto it = o.metrics.find(name);
            if (it == o.metrics.end()) continue;
            sq += (it->second - s.mean) * (it->second - s.mean);
        }
        double var = sq / static_cast<double>(s.count - 1);
        s.std_err = std::sqrt(var / static_cast<double>(s.count));
    }
    return s;
}

bool rule_pass(double estimate, double std_err, double bound, BoundRule rule) {
    switch (rule) {
        case BoundRule::upper: return estimate <= bound + 3 * std_err;
        case BoundRule::lower: return estimate >= bound - 3 * std_err;
        case BoundRule::two_sided:
            return std::fabs(estimate - bound) <= 3 * std_err;
        case BoundRule::exact: return estimate == bound;
    }
    return false;
}

StatReport mean_report(const std::string& metric,
                       const std::vector<SessionOutcome>& outs, double bound,
                       BoundRule rule) {
    MetricSummary s = summarize(outs, metric);
    StatReport r;
    r.metric = metric;
    r.estimate = s.mean;
    r.std_err = s.std_err;
    r.bound = bound;
    r.rule = rule;
    r.pass = s.count > 0 && rule_pass(s.mean, s.std_err, bound, rule);
    return r;
}

StatReport uniformity_report(const std::vector<SessionOutcome>& outs,
                             size_t cells, const std::string& metric) {
    std::vector<uint64_t> counts(cells, 0);
    size_t total = 0;
    for (const auto& o : outs) {
        auto it = o.metrics.find(metric);
        if (it == o.metrics.end()) continue;
        auto v = static_cast<size_t>(it->second);
        if (v < cells) {
            ++counts[v];
            ++total;
        }
    }
    StatReport r;
    r.metric = metric + "_uniformity_z";
    r.bound = 3.09;
    r.rule = BoundRule::upper;
    if (total > 0) {
        r.estimate = chi_square_z(chi_square_stat(counts), cells - 1);
        r.pass = r.estimate <= r.bound;
    }
    return r;
}

using Runner = std::function<SessionOutcome(const SessionConfig&, SessionLog&,
                                            Rng&, Rng&, Rng&, Rng&)>;
using Reporter = std::function<std::vector<StatReport>(
    const SessionConfig&, const std::vector<SessionOutcome>&)>;

struct ProtocolEntry {
    std::vector<std::string> alice;
    std::vector<std::string> bob;
    std::vector<std::string> eve;
    std::map<std::string, char> directions;
    Runner run;
    Reporter report;
};

const std::map<std::string, char>& coin_directions() {
    static const std::map<std::string, char> table{
        {"salt", 'B'},          {"coin-commit", 'A'},
        {"coin-response", 'B'}, {"coin-open", 'A'},
        {"coin-refuse", 'A'},   {"string-commit", 'A'},
        {"string-response", 'B'}, {"string-refuse", 'A'},
        {"string-open", 'A'},   {"share-commitments", 'A'},
        {"response", 'B'},      {"shares", 'A'},
        {"challenge-openings", 'A'}, {"substituted-key", 'E'}};
    return table;
}

std::map<std::string, char> with_coin_rounds(
    std::map<std::string, char> extra) {
    for (const char* t :
         {"salt", "coin-commit", "coin-response", "coin-open", "coin-refuse"})
        extra.emplace(t, coin_directions().at(t));
    return extra;
}

// ---- coin ----------------------------------------------------------------

SessionOutcome run_coin(const SessionConfig& cfg, SessionLog& log, Rng& setup,
                        Rng& a, Rng& b, Rng&) {
    size_t bits = sknob(cfg, "bits", 8);
    if (bits == 0 || bits > 32) throw ParameterError("bits must be in [1,32]");
    size_t flavor = sknob(cfg, "flavor", 0);
    CoinProtocolConfig base;
    base.naor_n = sknob(cfg, "naor_n", 16);
    LweParams params = lwe_params_for(sknob(cfg, "lwe_n", 4));
    bool a_force = cfg.alice == "force";
    bool b_force = cfg.bob == "force";
    if (a_force && b_force) throw ConfigError("only one side can force");

    SessionOutcome out;
    if (flavor == 0) {
        if (cfg.alice == "divergent")
            throw ConfigError("divergent committer applies to flavor 2 only");
        if (a_force) {
            EnforceCoinReport rep = enforce_against_bob(
                parse_target(cfg, bits), responder_of(cfg.bob),
                sknob(cfg, "max_retries", 64), base, log, a, b);
            fill_enforce_metrics(out, rep);
        } else if (b_force) {
            CommitKey bk = gen_binding(params, setup);
            EnforceCoinReport rep =
                enforce_against_alice(parse_target(cfg, bits),
                                      plan_of(cfg.alice), bk, log, a, b);
            fill_enforce_metrics(out, rep);
        } else {
            CoinOutcome o = coin_sequential(bits, base, plan_of(cfg.alice),
                                            responder_of(cfg.bob), log, a, b);
            out.metrics["aborted"] = o.aborted ? 1 : 0;
            if (!o.aborted)
                out.metrics["value"] =
                    static_cast<double>(bits_to_uint(o.value));
            out.ok = cfg.alice == "refuse" ? o.aborted : !o.aborted;
            out.note = o.aborted ? "aborted" : "flipped";
        }
        return out;
    }

    if (flavor == 1) {
        ForceRandomConfig fr;
        fr.kappa = sknob(cfg, "kappa", 16);
        fr.ell = bits;
        fr.params = params;
        fr.base = base;
        if (a_force || cfg.alice == "divergent")
            throw ConfigError("flavor 1 enforces against the committer only");
        if (b_force) {
            EnforceCoinReport rep = enforce_force_random_against_alice(
                fr, parse_target(cfg, bits), plan_of(cfg.alice), log, a, b);
            fill_enforce_metrics(out, rep);
        } else {
            CoinOutcome o = amplify_force_random(
                fr, plan_of(cfg.alice), string_responder_of(cfg.bob, bits),
                log, a, b);
            out.metrics["aborted"] = o.aborted ? 1 : 0;
            if (!o.aborted)
                out.metrics["value"] =
                    static_cast<double>(bits_to_uint(o.value));
            out.ok = cfg.alice == "refuse" ? o.aborted : !o.aborted;
            out.note = o.aborted ? "aborted" : "flipped";
        }
        return out;
    }

    if (flavor != 2) throw ParameterError("flavor must be 0, 1, or 2");
    ForceForceConfig ff;
    ff.kappa = sknob(cfg, "kappa", 16);
    ff.sss = {static_cast<int>(sknob(cfg, "sigma", 8)),
              static_cast<int>(sknob(cfg, "field_bits", 8))};
    ff.ell = bits;
    ff.params = params;
    ff.base = base;
    ff.max_retries = sknob(cfg, "max_retries", 64);
    if (b_force) {
        AliceForceForceBehavior behavior = cfg.alice == "divergent"
                                               ? AliceForceForceBehavior::divergent
                                               : AliceForceForceBehavior::honest;
        if (cfg.alice == "refuse")
            throw ConfigError("refusal is not modeled under enforcement");
        EnforceCoinReport rep = enforce_force_force_against_alice(
            ff, parse_target(cfg, bits), behavior, log, a, b);
        fill_enforce_metrics(out, rep);
    } else if (a_force) {
        EnforceCoinReport rep = enforce_force_force_against_bob(
            ff, parse_target(cfg, bits), string_responder_of(cfg.bob, bits),
            responder_of(cfg.bob), log, a, b);
        fill_enforce_metrics(out, rep);
    } else {
        if (cfg.alice != "honest" || cfg.bob != "honest")
            throw ConfigError("flavor 2 runs honest or forced only");
        CoinOutcome o = amplify_force_force(ff, log, a, b);
        out.metrics["aborted"] = o.aborted ? 1 : 0;
        if (!o.aborted)
            out.metrics["value"] = static_cast<double>(bits_to_uint(o.value));
        out.ok = !o.aborted;
        out.note = o.aborted ? "aborted" : "flipped";
    }
    return out;
}

std::vector<StatReport> report_coin(const SessionConfig& cfg,
                                    const std::vector<SessionOutcome>& outs) {
    size_t bits = sknob(cfg, "bits", 8);
    std::vector<StatReport> r;
    bool forced = cfg.alice == "force" || cfg.bob == "force";
    if (forced) {
        if (cfg.alice == "divergent") {
            r.push_back(mean_report("hit", outs, 0.0, BoundRule::upper));
            r.push_back(mean_report("enforcement_failure", outs,
                                    divergent_escape_bound(sknob(cfg, "sigma", 8)),
                                    BoundRule::upper));
            r.push_back(mean_report("aborted", outs, 1.0, BoundRule::lower));
        } else if (cfg.alice == "refuse") {
            r.push_back(mean_report("aborted", outs, 1.0, BoundRule::lower));
        } else {
            r.push_back(mean_report("hit", outs, 1.0, BoundRule::lower));
            r.push_back(mean_report("aborted", outs, 0.0, BoundRule::upper));
        }
        return r;
    }
    if (cfg.alice == "refuse") {
        r.push_back(mean_report("aborted", outs, 1.0, BoundRule::lower));
        return r;
    }
    r.push_back(mean_report("aborted", outs, 0.0, BoundRule::upper));
    double top = std::pow(2.0, static_cast<double>(bits)) - 1.0;
    r.push_back(mean_report("value", outs, top / 2.0, BoundRule::two_sided));
    if (bits <= 16)
        r.push_back(uniformity_report(outs, size_t{1} << bits, "value"));
    return r;
}

// ---- commit ---------------------------------------------------------------

SessionOutcome run_commit(const SessionConfig& cfg, SessionLog& log,
                          Rng& setup, Rng& a, Rng&, Rng&) {
    LweParams params = lwe_params_for(sknob(cfg, "lwe_n", 4));
    size_t count = sknob(cfg, "count", 64);
    if (count == 0) throw ParameterError("count must be positive");
    std::string mode = text_or(cfg, "mode", "binding");
    if (mode != "binding" && mode != "hiding")
        throw ConfigError("mode must be hiding or binding");
    CommitKey key = mode == "binding" ? gen_binding(params, setup)
                                      : gen_hiding(params, setup);

    Bytes commit_blob, open_blob;
    size_t verified = 0, extract_match = 0, ones = 0;
    for (size_t i = 0; i < count; ++i) {
        uint8_t bit = a.bit();
        ones += bit;
        auto [com, op] = lwe_commit(key, bit, a);
        Bytes cb = serialize_commitment(com);
        commit_blob.insert(commit_blob.end(), cb.begin(), cb.end());
        Bytes ob = serialize_opening(op);
        open_blob.insert(open_blob.end(), ob.begin(), ob.end());
        if (lwe_verify(key, com, op)) ++verified;
        if (mode == "binding" && lwe_extract(key, com) == bit)
            ++extract_match;
    }
    log.record('A', "commitments", commit_blob);
    log.record('A', "openings", open_blob);

    SessionOutcome out;
    auto n = static_cast<double>(count);
    out.metrics["verify_rate"] = static_cast<double>(verified) / n;
    out.metrics["bit_mean"] = static_cast<double>(ones) / n;
    if (mode == "binding")
        out.metrics["extract_match"] = static_cast<double>(extract_match) / n;
    out.ok = verified == count &&
             (mode != "binding" || extract_match == count);
    out.note = out.ok ? "all openings verified" : "verification failed";
    return out;
}

std::vector<StatReport> report_commit(const SessionConfig& cfg,
                                      const std::vector<SessionOutcome>& outs) {
    std::vector<StatReport> r;
    r.push_back(mean_report("verify_rate", outs, 1.0, BoundRule::lower));
    if (text_or(cfg, "mode", "binding") == "binding")
        r.push_back(mean_report("extract_match", outs, 1.0, BoundRule::lower));
    r.push_back(mean_report("bit_mean", outs, 0.5, BoundRule::two_sided));
    return r;
}

// ---- ssscommit ------------------------------------------------------------

SessionOutcome run_ssscommit(const SessionConfig& cfg, SessionLog& log,
                             Rng& setup, Rng& a, Rng& b, Rng&) {
    SssParams params{static_cast<int>(sknob(cfg, "sigma", 8)),
                     static_cast<int>(sknob(cfg, "field_bits", 8))};
    LweParams lwe = lwe_params_for(sknob(cfg, "lwe_n", 4));
    CommitKey key = gen_hiding(lwe, setup);
    auto sigma = static_cast<size_t>(params.sigma);

    std::vector<FieldElem> message;
    message.reserve(sigma);
    for (size_t j = 0; j < sigma; ++j)
        message.push_back(
            fe(static_cast<uint32_t>(a.below(uint64_t{1} << params.kappa)),
               params.kappa));

    SessionOutcome out;
    if (cfg.alice == "divergent") {
        DivergentSharePair pair = make_divergent_pair(params, message, a);
        auto [com, openings] = commit_shares(key, pair.midpoint, params, a);
        log.record('A', "share-commitments", sss_commitment_blob(com));
        Challenge challenge{b.subset(params.n_shares(), sigma)};
        log.record('B', "challenge", indices_bytes(challenge.subset));
        log.record('A', "shares", field_elems_bytes(pair.far.shares));
        ShareOpenings on_s = openings_for_challenge(openings, challenge);
        log.record('A', "challenge-openings", share_openings_blob(on_s));
        OpenOutcome o =
            open_phase(key, com, pair.far.shares, challenge, on_s);
        out.metrics["escape"] = o.status == OpenStatus::ok ? 1 : 0;
        out.ok = o.status != OpenStatus::ok;
        out.note = out.ok ? "cheat caught" : "cheat escaped";
        return out;
    }

    SssCommitResult cr = commit_phase(key, message, a);
    log.record('A', "share-commitments", sss_commitment_blob(cr.com));
    Challenge challenge{b.subset(params.n_shares(), sigma)};
    log.record('B', "challenge", indices_bytes(challenge.subset));
    log.record('A', "shares", field_elems_bytes(cr.shares.shares));
    ShareOpenings on_s = openings_for_challenge(cr.openings, challenge);
    log.record('A', "challenge-openings", share_openings_blob(on_s));
    OpenOutcome o = open_phase(key, cr.com, cr.shares.shares, challenge, on_s);
    bool ok = o.status == OpenStatus::ok && o.message == message;
    out.metrics["ok"] = ok ? 1 : 0;
    out.ok = ok;
    out.note = ok ? "opened to the committed message" : "open failed";
    return out;
}

std::vector<StatReport> report_ssscommit(
    const SessionConfig& cfg, const std::vector<SessionOutcome>& outs) {
    std::vector<StatReport> r;
    if (cfg.alice == "divergent")
        r.push_back(mean_report("escape", outs,
                                divergent_escape_bound(sknob(cfg, "sigma", 8)),
                                BoundRule::upper));
    else
        r.push_back(mean_report("ok", outs, 1.0, BoundRule::lower));
    return r;
}

// ---- ot -------------------------------------------------------------------

SessionOutcome run_ot(const SessionConfig& cfg, SessionLog& log, Rng& setup,
                      Rng& a, Rng& b, Rng& e) {
    size_t m = sknob(cfg, "m", 256);
    double lambda = knob_or(cfg, "lambda", 0.1);
    double phi = knob_or(cfg, "phi", 0.0);
    ChannelConfig channel{phi};
    SessionOutcome out;

    if (cfg.bob == "bqsm") {
        double gamma = knob_or(cfg, "gamma", 0.08);
        BqsmAttackOutcome r =
            ot_bounded_storage_attack(m, lambda, gamma, channel, a, b);
        out.metrics["known_secret_correct"] = r.known_secret_correct ? 1 : 0;
        out.metrics["other_secret_correct"] = r.other_secret_correct ? 1 : 0;
        out.ok = r.known_secret_correct;
        out.note = "bounded-storage attack";
        return out;
    }
    (void)setup;

    CoinProtocolConfig base;
    base.naor_n = sknob(cfg, "naor_n", 16);
    CoinOutcome flip = coin_sequential(sknob(cfg, "kappa", 8), base,
                                       honest_committer(), honest_responder(),
                                       log, a, b);
    if (flip.aborted) {
        out.metrics["accepted"] = 0;
        out.metrics["ok"] = 0;
        out.note = "key flip aborted";
        return out;
    }
    CompilerConfig cc;
    cc.alpha = knob_or(cfg, "alpha", 0.5);
    cc.phi_prime = knob_or(cfg, "phi_prime", default_phi_prime(phi));
    cc.key = key_from_coin(flip.value, lwe_params_for(sknob(cfg, "lwe_n", 4)));

    EveTap tap;
    Rng* eve_rng = nullptr;
    if (cfg.eve == "pass") {
        tap = [](std::vector<StoredQubit>&, Rng&) {};
        eve_rng = &e;
    } else if (cfg.eve == "measure") {
        double fraction = knob_or(cfg, "fraction", 0.1);
        log.record('E', "channel-tap", {});
        tap = [fraction](std::vector<StoredQubit>& qubits, Rng& rng) {
            eve_measure_fraction(qubits, fraction, 0, rng);
        };
        eve_rng = &e;
    }

    ReceiverStrategy strat = cfg.bob == "delayed"
                                 ? ReceiverStrategy::delayed_measurement
                                 : ReceiverStrategy::honest;
    Bb84Run run = run_bb84_preparation(m, channel, strat, a, b, tap, eve_rng);
    CompileResult cr = compile_verification(run, cc, log, a, b);
    out.metrics["accepted"] = cr.status == CompileStatus::accepted ? 1 : 0;
    if (cr.status != CompileStatus::accepted) {
        out.metrics["ok"] = 0;
        out.note = "verification rejected";
        return out;
    }

    size_t secret_bits = ot_secret_bits(cr.run, lambda);
    if (secret_bits == 0) {
        out.metrics["ok"] = 0;
        out.note = "no secret bits at this size";
        return out;
    }
    OtInputs inputs;
    inputs.s0 = a.bit_string(secret_bits);
    inputs.s1 = a.bit_string(secret_bits);
    inputs.k = b.bit();
    inputs.lambda = lambda;
    OtResult r = ot_postprocess(cr.run, inputs, log, a);
    bool good = r.status == OtStatus::ok &&
                r.output == (inputs.k ? inputs.s1 : inputs.s0);
    out.metrics["ok"] = good ? 1 : 0;
    out.ok = good;
    out.note = good ? "received the chosen secret" : "output mismatch";
    return out;
}

std::vector<StatReport> report_ot(const SessionConfig& cfg,
                                  const std::vector<SessionOutcome>& outs) {
    std::vector<StatReport> r;
    if (cfg.bob == "bqsm") {
        r.push_back(mean_report("known_secret_correct", outs,
                                knob_or(cfg, "known_bound", 0.8),
                                BoundRule::lower));
        r.push_back(mean_report("other_secret_correct", outs,
                                knob_or(cfg, "attack_bound", 0.05),
                                BoundRule::upper));
        return r;
    }
    if (cfg.bob == "delayed") {
        r.push_back(mean_report("accepted", outs,
                                knob_or(cfg, "reject_bound", 0.01),
                                BoundRule::upper));
        return r;
    }
    if (cfg.eve == "measure") {
        r.push_back(mean_report("accepted", outs, 1.0, BoundRule::upper));
        return r;
    }
    r.push_back(mean_report("accepted", outs, 1.0, BoundRule::lower));
    r.push_back(mean_report("ok", outs, 1.0, BoundRule::lower));
    return r;
}

// ---- id -------------------------------------------------------------------

SessionOutcome run_id(const SessionConfig& cfg, SessionLog& log, Rng& setup,
                      Rng& a, Rng& b, Rng&) {
    size_t m = sknob(cfg, "m", 256);
    size_t ell = sknob(cfg, "ell", 8);
    size_t passwords = sknob(cfg, "passwords", 4);
    size_t min_distance = sknob(cfg, "min_distance", std::floor(m / 4.0));
    IdCode code = make_id_code(passwords, m, min_distance, setup);
    size_t w_alice = setup.below(passwords);
    size_t w_bob = w_alice;
    if (cfg.bob == "wrong-password")
        w_bob = (w_alice + 1 + setup.below(passwords - 1)) % passwords;

    ChannelConfig channel{knob_or(cfg, "phi", 0.0)};
    Bb84Run run = run_bb84_preparation(m, channel, ReceiverStrategy::honest,
                                       a, b);
    IdOutcome o = id_run(run, code, w_alice, w_bob, ell, log, a, b);
    SessionOutcome out;
    out.metrics["accept"] = o.accept ? 1 : 0;
    out.ok = cfg.bob == "wrong-password" ? !o.accept : o.accept;
    out.note = o.accept ? "accepted" : "rejected";
    return out;
}

std::vector<StatReport> report_id(const SessionConfig& cfg,
                                  const std::vector<SessionOutcome>& outs) {
    std::vector<StatReport> r;
    if (cfg.bob == "wrong-password") {
        double ell = knob_or(cfg, "ell", 8);
        r.push_back(mean_report("accept", outs,
                                std::pow(2.0, -ell) +
                                    knob_or(cfg, "slack", 0.02),
                                BoundRule::upper));
    } else {
        r.push_back(mean_report("accept", outs, 1.0, BoundRule::lower));
    }
    return r;
}

// ---- idplus ---------------------------------------------------------------

SessionOutcome run_idplus(const SessionConfig& cfg, SessionLog& log,
                          Rng& setup, Rng& a, Rng& b, Rng&) {
    size_t m = sknob(cfg, "m", 256);
    size_t ell = sknob(cfg, "ell", 8);
    size_t passwords = sknob(cfg, "passwords", 4);
    double phi = knob_or(cfg, "phi", 0.0);
    ChannelConfig channel{phi};

    CoinProtocolConfig base;
    base.naor_n = sknob(cfg, "naor_n", 16);
    SessionOutcome out;
    CoinOutcome flip = coin_sequential(sknob(cfg, "kappa", 8), base,
                                       honest_committer(), honest_responder(),
                                       log, a, b);
    if (flip.aborted) {
        out.metrics["accept"] = 0;
        out.note = "key flip aborted";
        return out;
    }
    CompilerConfig cc;
    cc.alpha = knob_or(cfg, "alpha", 0.5);
    cc.phi_prime = knob_or(cfg, "phi_prime", default_phi_prime(phi));
    cc.key = key_from_coin(flip.value, lwe_params_for(sknob(cfg, "lwe_n", 4)));

    Bb84Run run = run_bb84_preparation(m, channel, ReceiverStrategy::honest,
                                       a, b);
    CompileResult cr = compile_verification(run, cc, log, a, b);
    if (cr.status != CompileStatus::accepted) {
        out.metrics["accept"] = 0;
        out.note = "verification rejected";
        return out;
    }

    size_t n = cr.run.surviving.size();
    size_t min_distance = sknob(cfg, "min_distance", std::floor(n / 4.0));
    IdCode code = make_id_code(passwords, n, min_distance, setup);
    size_t w = setup.below(passwords);
    IdPlusKeys keys;
    keys.mac_key = setup.bit_string(sknob(cfg, "mac_key_bits", 128));
    keys.j = setup.word();
    keys.n_prime = sknob(cfg, "n_prime", 16);
    keys.phi_dprime = knob_or(cfg, "phi_dprime", 0.1);
    keys.tag_bits = sknob(cfg, "tag_bits", 16);

    std::optional<EveFlip> flip_msg;
    if (cfg.eve == "flip")
        flip_msg = EveFlip{sknob(cfg, "flip_message", 6),
                           sknob(cfg, "flip_bit", 0)};
    IdPlusOutcome o =
        id_plus_run(cr, code, w, w, keys, ell, log, a, b, flip_msg);
    out.metrics["accept"] = o.status == IdPlusStatus::accept ? 1 : 0;
    out.metrics["mac_reject"] = o.status == IdPlusStatus::mac_reject ? 1 : 0;
    out.metrics["decode_failure"] =
        o.status == IdPlusStatus::decode_failure ? 1 : 0;
    out.ok = cfg.eve == "flip" ? o.status != IdPlusStatus::accept
                               : o.status == IdPlusStatus::accept;
    out.note = out.ok ? "expected verdict" : "unexpected verdict";
    return out;
}

std::vector<StatReport> report_idplus(const SessionConfig& cfg,
                                      const std::vector<SessionOutcome>& outs) {
    std::vector<StatReport> r;
    if (cfg.eve == "flip") {
        double tag_bits = knob_or(cfg, "tag_bits", 16);
        r.push_back(mean_report("accept", outs,
                                std::pow(2.0, -tag_bits) +
                                    knob_or(cfg, "slack", 0.01),
                                BoundRule::upper));
    } else {
        r.push_back(mean_report("accept", outs, 1.0, BoundRule::lower));
    }
    return r;
}

// ---- zkpk -----------------------------------------------------------------

Graph graph_from_json_text(const std::string& json_text) {
    nlohmann::json parsed = nlohmann::json::parse(json_text, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_array())
        throw FormatError("graph must be a JSON adjacency list");
    size_t v = parsed.size();
    if (v < 3 || v > 256)
        throw ParameterError("vertex count out of range");
    Graph g;
    g.vertices = v;
    g.adj.assign(v * v, 0);
    for (size_t r = 0; r < v; ++r) {
        if (!parsed[r].is_array())
            throw FormatError("graph must be a JSON adjacency list");
        for (const auto& entry : parsed[r]) {
            if (!entry.is_number_unsigned())
                throw FormatError("graph neighbors must be vertex indices");
            auto c = entry.get<size_t>();
            if (c >= v || c == r)
                throw ParameterError("graph neighbor out of range");
            g.set(r, c, 1);
        }
    }
    return g;
}

SessionOutcome run_zkpk(const SessionConfig& cfg, SessionLog& log, Rng& setup,
                        Rng& a, Rng& b, Rng&) {
    size_t sigma = sknob(cfg, "sigma", 8);
    WitnessEncodingScheme scheme = ham_encoding(sigma);
    ZkpkConfig zc;
    zc.kappa = sknob(cfg, "kappa", 8);
    zc.params = lwe_params_for(sknob(cfg, "lwe_n", 4));
    zc.base.naor_n = sknob(cfg, "naor_n", 16);

    Graph g;
    std::optional<Cycle> witness;
    std::string graph_text = text_or(cfg, "graph", "");
    if (!graph_text.empty()) {
        g = graph_from_json_text(graph_text);
        witness = find_ham_cycle(g);
    } else {
        auto [gg, ww] = random_ham_graph(sknob(cfg, "vertices", 8),
                                         knob_or(cfg, "edge_prob", 0.3), setup);
        g = gg;
        witness = ww;
    }

    ZkpkProver prover = ZkpkProver::honest;
    if (cfg.alice == "cheat") prover = ZkpkProver::guess_cheat;
    if (cfg.alice == "corrupt") prover = ZkpkProver::corrupt_opening;

    ZkpkResult res = zkpk_run(scheme, g, witness, prover, zc, log, a, b);
    SessionOutcome out;
    out.metrics["success"] = res.verdict == ZkpkVerdict::success ? 1 : 0;
    out.metrics["rejected"] = res.verdict == ZkpkVerdict::rejected ? 1 : 0;
    out.metrics["bad_opening"] =
        res.verdict == ZkpkVerdict::bad_opening ? 1 : 0;
    out.metrics["refused"] = res.verdict == ZkpkVerdict::refused ? 1 : 0;
    switch (res.verdict) {
        case ZkpkVerdict::success: out.note = "accepted"; break;
        case ZkpkVerdict::rejected: out.note = "rejected"; break;
        case ZkpkVerdict::bad_opening: out.note = "bad opening"; break;
        case ZkpkVerdict::refused: out.note = "prover refused"; break;
        case ZkpkVerdict::coin_abort: out.note = "coin flip aborted"; break;
    }
    out.ok = cfg.alice == "honest"
                 ? res.verdict == ZkpkVerdict::success
                 : res.verdict != ZkpkVerdict::success;
    return out;
}

std::vector<StatReport> report_zkpk(const SessionConfig& cfg,
                                    const std::vector<SessionOutcome>& outs) {
    std::vector<StatReport> r;
    if (cfg.alice == "cheat") {
        double sigma = knob_or(cfg, "sigma", 8);
        r.push_back(mean_report("success", outs, std::pow(2.0, -sigma),
                                BoundRule::upper));
    } else if (cfg.alice == "corrupt") {
        r.push_back(mean_report("bad_opening", outs, 1.0, BoundRule::lower));
    } else {
        r.push_back(mean_report("success", outs, 1.0, BoundRule::lower));
    }
    return r;
}

// ---- iqzk -----------------------------------------------------------------

SessionOutcome run_iqzk(const SessionConfig& cfg, SessionLog& log, Rng&,
                        Rng& a, Rng& b, Rng&) {
    size_t kappa = sknob(cfg, "kappa", 8);
    CoinProtocolConfig base;
    base.naor_n = sknob(cfg, "naor_n", 16);
    Bytes statement = from_hex(text_or(cfg, "statement", "3c3c"));
    NizkSystem nizk = parity_nizk_double();
    IqzkResult res = iqzk_run(statement, nizk, kappa, base,
                              plan_of(cfg.alice), log, a, b);
    SessionOutcome out;
    out.metrics["accepted"] = res.accepted ? 1 : 0;
    out.metrics["coin_aborted"] = res.coin_aborted ? 1 : 0;
    if (!res.coin_aborted && kappa <= 32)
        out.metrics["omega"] = static_cast<double>(bits_to_uint(res.omega));
    uint8_t parity = 0;
    for (uint8_t byte : statement) parity ^= byte;
    bool in_language = parity == 0;
    out.ok = cfg.alice == "refuse" ? res.coin_aborted
                                   : res.accepted == in_language;
    out.note = res.coin_aborted ? "reference string aborted"
               : res.accepted  ? "proof accepted"
                               : "proof rejected";
    return out;
}

std::vector<StatReport> report_iqzk(const SessionConfig& cfg,
                                    const std::vector<SessionOutcome>& outs) {
    std::vector<StatReport> r;
    if (cfg.alice == "refuse") {
        r.push_back(mean_report("coin_aborted", outs, 1.0, BoundRule::lower));
        return r;
    }
    Bytes statement = from_hex(text_or(cfg, "statement", "3c3c"));
    uint8_t parity = 0;
    for (uint8_t byte : statement) parity ^= byte;
    if (parity == 0)
        r.push_back(mean_report("accepted", outs, 1.0, BoundRule::lower));
    else
        r.push_back(mean_report("accepted", outs, 0.0, BoundRule::upper));
    size_t kappa = sknob(cfg, "kappa", 8);
    if (kappa <= 16)
        r.push_back(uniformity_report(outs, size_t{1} << kappa, "omega"));
    return r;
}

// ---- registry ---------------------------------------------------------------

const std::map<std::string, ProtocolEntry>& registry() {
    static const std::map<std::string, ProtocolEntry> table = [] {
        std::map<std::string, ProtocolEntry> t;
        t["coin"] = {{"honest", "refuse", "force", "divergent"},
                     {"honest", "constant0", "constant1", "force"},
                     {"none"},
                     coin_directions(),
                     run_coin,
                     report_coin};
        t["commit"] = {{"honest"},
                       {"honest"},
                       {"none"},
                       {{"commitments", 'A'}, {"openings", 'A'}},
                       run_commit,
                       report_commit};
        t["ssscommit"] = {{"honest", "divergent"},
                          {"honest"},
                          {"none"},
                          {{"share-commitments", 'A'},
                           {"challenge", 'B'},
                           {"shares", 'A'},
                           {"challenge-openings", 'A'}},
                          run_ssscommit,
                          report_ssscommit};
        t["ot"] = {{"honest"},
                   {"honest", "delayed", "bqsm"},
                   {"none", "pass", "measure"},
                   with_coin_rounds({{"channel-tap", 'E'},
                                     {"commitments", 'B'},
                                     {"test-subset", 'A'},
                                     {"test-openings", 'B'},
                                     {"bases", 'A'},
                                     {"subsets", 'B'},
                                     {"abort-short-set", 'A'},
                                     {"masked-secrets", 'A'}}),
                   run_ot,
                   report_ot};
        t["id"] = {{"honest"},
                   {"honest", "wrong-password"},
                   {"none"},
                   {{"basis-shift", 'B'},
                    {"bases", 'A'},
                    {"hash-f", 'A'},
                    {"hash-g", 'B'},
                    {"response", 'A'}},
                   run_id,
                   report_id};
        t["idplus"] = {{"honest"},
                       {"honest"},
                       {"none", "flip"},
                       with_coin_rounds({{"commitments", 'B'},
                                         {"test-subset", 'A'},
                                         {"test-openings", 'B'},
                                         {"basis-shift", 'B'},
                                         {"bases", 'A'},
                                         {"hash-f", 'A'},
                                         {"hash-g", 'B'},
                                         {"syndrome-index", 'A'},
                                         {"syndrome", 'A'},
                                         {"response", 'A'},
                                         {"tag", 'A'}}),
                       run_idplus,
                       report_idplus};
        t["zkpk"] = {{"honest", "cheat", "corrupt"},
                     {"honest"},
                     {"none"},
                     with_coin_rounds({{"substituted-key", 'E'},
                                       {"refuse", 'A'},
                                       {"instance", 'A'},
                                       {"encoding-commitments", 'A'},
                                       {"challenge-openings", 'A'}}),
                     run_zkpk,
                     report_zkpk};
        t["iqzk"] = {{"honest", "refuse"},
                     {"honest"},
                     {"none"},
                     with_coin_rounds({{"statement", 'A'}, {"proof", 'A'}}),
                     run_iqzk,
                     report_iqzk};
        return t;
    }();
    return table;
}

const ProtocolEntry& validated_entry(const SessionConfig& cfg) {
    auto it = registry().find(cfg.protocol);
    if (it == registry().end())
        throw ConfigError("unknown protocol '" + cfg.protocol + "'");
    const ProtocolEntry& entry = it->second;
    auto listed = [](const std::vector<std::string>& names,
                     const std::string& name) {
        return std::find(names.begin(), names.end(), name) != names.end();
    };
    if (!listed(entry.alice, cfg.alice))
        throw ConfigError("unknown alice strategy '" + cfg.alice + "' for " +
                          cfg.protocol);
    if (!listed(entry.bob, cfg.bob))
        throw ConfigError("unknown bob strategy '" + cfg.bob + "' for " +
                          cfg.protocol);
    if (!listed(entry.eve, cfg.eve))
        throw ConfigError("protocol " + cfg.protocol +
                          " does not support eve strategy '" + cfg.eve + "'");
    return entry;
}

}  // namespace

std::vector<std::string> protocol_names() {
    std::vector<std::string> names;
    for (const auto& [name, entry] : registry()) names.push_back(name);
    return names;
}

void check_schedule(const std::string& protocol,
                    const Transcript& transcript) {
    auto it = registry().find(protocol);
    if (it == registry().end())
        throw ConfigError("unknown protocol '" + protocol + "'");
    const auto& directions = it->second.directions;
    for (size_t i = 0; i < transcript.size(); ++i) {
        const TranscriptRecord& rec = transcript[i];
        std::string where = "schedule violation at round " + std::to_string(i);
        if (rec.round != i)
            throw SessionError(where + ": rounds not contiguous");
        auto dir = directions.find(rec.msg_type);
        if (dir == directions.end())
            throw SessionError(where + ": unexpected message '" +
                               rec.msg_type + "'");
        if (dir->second != rec.sender)
            throw SessionError(where + ": '" + rec.msg_type +
                               "' must come from " +
                               std::string(1, dir->second));
    }
}

SessionResult run_session(const SessionConfig& cfg, uint64_t seed) {
    const ProtocolEntry& entry = validated_entry(cfg);
    SessionResult result;
    result.session_id = seed;
    result.setup_seed = derive_seed(seed, 0);
    result.alice_seed = derive_seed(seed, 1);
    result.bob_seed = derive_seed(seed, 2);
    result.eve_seed = derive_seed(seed, 3);
    Rng setup(result.setup_seed);
    Rng alice(result.alice_seed);
    Rng bob(result.bob_seed);
    Rng eve(result.eve_seed);
    SessionLog log;
    result.outcome = entry.run(cfg, log, setup, alice, bob, eve);
    result.transcript = log.transcript();
    check_schedule(cfg.protocol, result.transcript);
    return result;
}

std::vector<StatReport> run_batch(const SessionConfig& cfg,
                                  uint64_t master_seed, size_t trials,
                                  size_t parallelism) {
    const ProtocolEntry& entry = validated_entry(cfg);
    if (trials < 1) throw ParameterError("trials must be at least 1");
    if (parallelism < 1) throw ParameterError("parallelism must be at least 1");
    size_t workers = std::min(parallelism, trials);

    std::vector<SessionOutcome> outcomes(trials);
    auto work = [&](size_t offset) {
        for (size_t i = offset; i < trials; i += workers)
            outcomes[i] = run_session(cfg, derive_seed(master_seed, i)).outcome;
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> threads;
        threads.reserve(workers);
        for (size_t w = 0; w < workers; ++w)
            threads.emplace_back([&, w] {
                try {
                    work(w);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (auto& th : threads) th.join();
        for (const auto& err : errors)
            if (err) std::rethrow_exception(err);
    }
    return entry.report(cfg, outcomes);
}

void export_transcript(const Transcript& transcript, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open '" + path + "' for writing");
    for (const TranscriptRecord& rec : transcript) {
        nlohmann::json line{{"round", rec.round},
                            {"sender", std::string(1, rec.sender)},
                            {"msg_type", rec.msg_type},
                            {"payload", rec.payload_hex}};
        out << line.dump() << '\n';
    }
    if (!out) throw FormatError("failed writing '" + path + "'");
}

Transcript import_transcript(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path + "'");
    Transcript transcript;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string where =
            "transcript parse error at line " + std::to_string(line_no);
        nlohmann::json parsed = nlohmann::json::parse(line, nullptr, false);
        if (parsed.is_discarded() || !parsed.is_object())
            throw FormatError(where + ": not a JSON object");
        if (!parsed.contains("round") || !parsed["round"].is_number_unsigned() ||
            !parsed.contains("sender") || !parsed["sender"].is_string() ||
            !parsed.contains("msg_type") || !parsed["msg_type"].is_string() ||
            !parsed.contains("payload") || !parsed["payload"].is_string())
            throw FormatError(where + ": missing record fields");
        TranscriptRecord rec;
        rec.round = parsed["round"].get<size_t>();
        std::string sender = parsed["sender"].get<std::string>();
        if (sender.size() != 1 ||
            (sender[0] != 'A' && sender[0] != 'B' && sender[0] != 'E'))
            throw FormatError(where + ": sender must be A, B, or E");
        rec.sender = sender[0];
        rec.msg_type = parsed["msg_type"].get<std::string>();
        rec.payload_hex = parsed["payload"].get<std::string>();
        try {
            from_hex(rec.payload_hex);
        } catch (const FormatError&) {
            throw FormatError(where + ": payload is not hex");
        }
        if (rec.round != transcript.size())
            throw FormatError(where + ": rounds not contiguous");
        transcript.push_back(std::move(rec));
    }
    return transcript;
}

std::vector<SuiteEntry> run_suite(uint64_t master_seed, size_t parallelism) {
    struct Planned {
        std::string name;
        SessionConfig cfg;
        size_t trials;
    };
    std::vector<Planned> plan;
    auto add = [&plan](std::string name, SessionConfig cfg, size_t trials) {
        plan.push_back({std::move(name), std::move(cfg), trials});
    };

    SessionConfig cfg;
    cfg.protocol = "coin";
    add("coin-honest", cfg, 2000);
    cfg.alice = "force";
    add("coin-force-alice", cfg, 100);
    cfg.alice = "honest";
    cfg.bob = "force";
    add("coin-force-bob", cfg, 100);
    cfg.knobs["flavor"] = 2;
    cfg.alice = "divergent";
    add("coin-force-divergent", cfg, 150);

    cfg = {};
    cfg.protocol = "commit";
    add("commit-binding", cfg, 50);
    cfg.text["mode"] = "hiding";
    add("commit-hiding", cfg, 50);

    cfg = {};
    cfg.protocol = "ssscommit";
    add("ssscommit-honest", cfg, 100);
    cfg.alice = "divergent";
    add("ssscommit-divergent", cfg, 300);

    cfg = {};
    cfg.protocol = "ot";
    cfg.knobs["m"] = 128;
    add("ot-honest", cfg, 20);
    cfg.eve = "pass";
    add("ot-eve-pass", cfg, 20);
    cfg.eve = "none";
    cfg.bob = "delayed";
    cfg.knobs["phi_prime"] = 0.02;
    add("ot-delayed", cfg, 20);
    cfg = {};
    cfg.protocol = "ot";
    cfg.bob = "bqsm";
    cfg.knobs["m"] = 256;
    add("ot-bqsm", cfg, 50);

    cfg = {};
    cfg.protocol = "id";
    cfg.knobs["m"] = 128;
    add("id-honest", cfg, 50);
    cfg.bob = "wrong-password";
    add("id-wrong-password", cfg, 400);

    cfg = {};
    cfg.protocol = "idplus";
    cfg.knobs["m"] = 128;
    add("idplus-honest", cfg, 20);
    cfg.eve = "flip";
    add("idplus-eve-flip", cfg, 50);

    cfg = {};
    cfg.protocol = "zkpk";
    add("zkpk-honest", cfg, 50);
    cfg.alice = "cheat";
    cfg.knobs["vertices"] = 5;
    add("zkpk-cheat", cfg, 300);

    cfg = {};
    cfg.protocol = "iqzk";
    add("iqzk-honest", cfg, 100);
    cfg.text["statement"] = "3c3d";
    add("iqzk-odd-statement", cfg, 50);
    cfg.text.clear();
    cfg.alice = "refuse";
    add("iqzk-refuse", cfg, 20);

    std::vector<SuiteEntry> entries;
    entries.reserve(plan.size());
    for (size_t i = 0; i < plan.size(); ++i) {
        SuiteEntry entry;
        entry.name = plan[i].name;
        entry.reports = run_batch(plan[i].cfg, derive_seed(master_seed, i),
                                  plan[i].trials, parallelism);
        entries.push_back(std::move(entry));
    }
    return entries;
}

std::string suite_json(const std::vector<SuiteEntry>& entries) {
    std::string out;
    size_t passed = 0, total = 0;
    for (const SuiteEntry& entry : entries) {
        for (const StatReport& report : entry.reports) {
            nlohmann::json line =
                nlohmann::json::parse(report_json_line(report));
            line["entry"] = entry.name;
            out += line.dump();
            out += '\n';
            ++total;
            if (report.pass) ++passed;
        }
    }
    nlohmann::json summary{{"entry", "summary"},
                           {"reports", total},
                           {"passed", passed},
                           {"verdict", passed == total ? "pass" : "fail"}};
    out += summary.dump();
    out += '\n';
    return out;
}

std::string report_json_line(const StatReport& report) {
    const char* rule = "upper";
    switch (report.rule) {
        case BoundRule::upper: rule = "upper"; break;
        case BoundRule::lower: rule = "lower"; break;
        case BoundRule::two_sided: rule = "two_sided"; break;
        case BoundRule::exact: rule = "exact"; break;
    }
    nlohmann::json line{{"metric", report.metric},
                        {"estimate", report.estimate},
                        {"std_err", report.std_err},
                        {"bound", report.bound},
                        {"rule", rule},
                        {"verdict", report.pass ? "pass" : "fail"}};
    return line.dump();
}

}  // namespace qcw
