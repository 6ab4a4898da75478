#include "qcw/coinflip.hpp"

#include "qcw/errors.hpp"

namespace qcw {

namespace {

Bytes sss_commitment_bytes(const SssCommitment& com) {
    Bytes out;
    put_u64(out, com.per_share.size());
    for (const auto& share : com.per_share) {
        put_u64(out, share.size());
        for (const auto& c : share) {
            Bytes one = serialize_commitment(c);
            out.insert(out.end(), one.begin(), one.end());
        }
    }
    return out;
}

Bytes shares_bytes(const std::vector<FieldElem>& shares) {
    Bytes out;
    put_u64(out, shares.size());
    for (const auto& s : shares) put_u64(out, s.value);
    return out;
}

Bytes openings_bytes(const ShareOpenings& openings) {
    Bytes out;
    put_u64(out, openings.size());
    for (const auto& share : openings) {
        put_u64(out, share.size());
        for (const auto& o : share) {
            Bytes one = serialize_opening(o);
            out.insert(out.end(), one.begin(), one.end());
        }
    }
    return out;
}

struct RoundResult {
    bool aborted = false;
    uint8_t coin = 0;
};

RoundResult run_round(const CoinProtocolConfig& cfg, size_t round,
                      const CommitterPlan& committer,
                      const ResponderStrategy& responder, SessionLog& session,
                      Rng& alice_rng, Rng& bob_rng) {
    bool alice_commits = cfg.role == CoinRole::alice_commits;
    Rng& c_rng = alice_commits ? alice_rng : bob_rng;
    Rng& r_rng = alice_commits ? bob_rng : alice_rng;
    char c_label = alice_commits ? 'A' : 'B';
    char r_label = alice_commits ? 'B' : 'A';

    uint8_t a = c_rng.bit();
    Bytes com_bytes;
    Bits commitment, seed, rb;
    LweCommitment lcom;
    LweOpening lopen;
    if (cfg.lwe_key) {
        std::tie(lcom, lopen) = lwe_commit(*cfg.lwe_key, a, c_rng);
        com_bytes = serialize_commitment(lcom);
    } else {
        if (cfg.naor_n < 8) throw ParameterError("seed length at least 8");
        rb = r_rng.bit_string(3 * cfg.naor_n);
        session.record(r_label, "salt", pack_bits(rb));
        seed = c_rng.bit_string(cfg.naor_n);
        commitment = naor_commit(a, seed, rb);
        com_bytes = pack_bits(commitment);
    }
    session.record(c_label, "coin-commit", com_bytes);

    uint8_t b = responder(com_bytes, r_rng) & 1;
    session.record(r_label, "coin-response", Bytes{b});

    if (!committer(round)) {
        session.record(c_label, "coin-refuse", {});
        return {true, 0};
    }

    bool ok;
    Bytes open_bytes;
    if (cfg.lwe_key) {
        open_bytes = serialize_opening(lopen);
        ok = lwe_verify(*cfg.lwe_key, lcom, lopen);
    } else {
        open_bytes.push_back(a);
        Bytes packed = pack_bits(seed);
        open_bytes.insert(open_bytes.end(), packed.begin(), packed.end());
        ok = naor_verify(commitment, a, seed, rb);
    }
    session.record(c_label, "coin-open", open_bytes);
    if (!ok) return {true, 0};
    return {false, static_cast<uint8_t>(a ^ b)};
}

// Bit width needed to cover [0, total).
size_t value_bits(uint64_t total) {
    size_t nbits = 1;
    while (nbits < 64 && (uint64_t{1} << nbits) < total) ++nbits;
    return nbits;
}

std::vector<FieldElem> random_message(const SssParams& sss, Rng& rng) {
    std::vector<FieldElem> msg;
    msg.reserve(static_cast<size_t>(sss.sigma));
    for (int j = 0; j < sss.sigma; ++j)
        msg.push_back(fe(static_cast<uint32_t>(rng.bits_value(sss.kappa)),
                         sss.kappa));
    return msg;
}

// The ranked-subset challenge: flip enough bits to cover all sigma-subsets
// of the share positions, reflipping values past the count.
std::optional<Challenge> challenge_flip(const ForceForceConfig& cfg,
                                        SessionLog& session, Rng& alice_rng,
                                        Rng& bob_rng) {
    size_t n = cfg.sss.n_shares();
    uint64_t total = binomial_count(n, static_cast<size_t>(cfg.sss.sigma));
    size_t nbits = value_bits(total);
    for (int tries = 0; tries < 64; ++tries) {
        CoinOutcome flip =
            coin_sequential(nbits, cfg.base, honest_committer(),
                            honest_responder(), session, alice_rng, bob_rng);
        if (flip.aborted) return std::nullopt;
        uint64_t v = bits_to_uint(flip.value);
        if (v < total)
            return Challenge{
                subset_unrank(v, n, static_cast<size_t>(cfg.sss.sigma))};
    }
    return std::nullopt;
}

void validate_force_force(const ForceForceConfig& cfg) {
    if (cfg.ell < 1) throw ParameterError("outcome width at least 1");
    if (cfg.ell >
        static_cast<size_t>(cfg.sss.sigma) * static_cast<size_t>(cfg.sss.kappa))
        throw ParameterError("outcome width exceeds the message bits");
}

}  // namespace

IdealCoinFunc::IdealCoinFunc(size_t lambda) : lambda_(lambda) {
    if (lambda < 1) throw ParameterError("width at least 1");
}

const Bits& IdealCoinFunc::start(Rng& rng) {
    if (pending_) throw UsageError("flip already in progress");
    pending_ = rng.bit_string(lambda_);
    return *pending_;
}

CoinOutcome IdealCoinFunc::finish(bool deliver) {
    if (!pending_) throw UsageError("no flip in progress");
    CoinOutcome out;
    if (deliver)
        out.value = *pending_;
    else
        out.aborted = true;
    pending_.reset();
    return out;
}

CommitterPlan honest_committer() {
    return [](size_t) { return true; };
}

CommitterPlan refuse_from(size_t round) {
    return [round](size_t r) { return r < round; };
}

ResponderStrategy honest_responder() {
    return [](const Bytes&, Rng& rng) { return rng.bit(); };
}

ResponderStrategy constant_responder(uint8_t bit) {
    return [bit](const Bytes&, Rng&) { return bit; };
}

StringResponder honest_string_responder() {
    return [](const Bytes&, size_t ell, Rng& rng) { return rng.bit_string(ell); };
}

StringResponder constant_string_responder(const Bits& value) {
    return [value](const Bytes&, size_t ell, Rng&) {
        if (value.size() != ell) throw ParameterError("response width mismatch");
        return value;
    };
}

CoinOutcome coin_single(const CoinProtocolConfig& cfg,
                        const CommitterPlan& committer,
                        const ResponderStrategy& responder, SessionLog& session,
                        Rng& alice_rng, Rng& bob_rng) {
    RoundResult r =
        run_round(cfg, 0, committer, responder, session, alice_rng, bob_rng);
    if (r.aborted) return {true, {}};
    return {false, Bits{r.coin}};
}

CoinOutcome coin_sequential(size_t ell, const CoinProtocolConfig& cfg,
                            const CommitterPlan& committer,
                            const ResponderStrategy& responder,
                            SessionLog& session, Rng& alice_rng, Rng& bob_rng) {
    if (ell < 1) throw ParameterError("width at least 1");
    CoinOutcome out;
    for (size_t r = 0; r < ell; ++r) {
        RoundResult rr =
            run_round(cfg, r, committer, responder, session, alice_rng, bob_rng);
        if (rr.aborted) return {true, {}};
        out.value.push_back(rr.coin);
    }
    return out;
}

EnforceCoinReport enforce_against_bob(const Bits& target,
                                      const ResponderStrategy& responder,
                                      size_t max_retries,
                                      const CoinProtocolConfig& cfg,
                                      SessionLog& session, Rng& sim_rng,
                                      Rng& bob_rng) {
    if (target.empty()) throw ParameterError("empty target");
    if (max_retries < 1) throw ParameterError("at least one attempt");
    EnforceCoinReport rep;
    for (size_t i = 0; i < target.size(); ++i) {
        uint8_t guess = sim_rng.bit();
        Bits rb;
        if (!cfg.lwe_key) rb = bob_rng.bit_string(3 * cfg.naor_n);
        bool success = false;
        for (size_t attempt = 0; attempt < max_retries; ++attempt) {
            uint8_t a = target[i] ^ guess;
            Bytes com_bytes;
            Bits commitment, seed;
            LweCommitment lcom;
            LweOpening lopen;
            if (cfg.lwe_key) {
                std::tie(lcom, lopen) = lwe_commit(*cfg.lwe_key, a, sim_rng);
                com_bytes = serialize_commitment(lcom);
            } else {
                seed = sim_rng.bit_string(cfg.naor_n);
                commitment = naor_commit(a, seed, rb);
                com_bytes = pack_bits(commitment);
            }
            ++rep.attempts;
            uint8_t b = responder(com_bytes, bob_rng) & 1;
            if (b != guess) {
                guess = b;  // rewind and retry against the observed response
                continue;
            }
            if (!cfg.lwe_key) session.record('B', "salt", pack_bits(rb));
            session.record('A', "coin-commit", com_bytes);
            session.record('B', "coin-response", Bytes{b});
            Bytes open_bytes;
            if (cfg.lwe_key) {
                open_bytes = serialize_opening(lopen);
            } else {
                open_bytes.push_back(a);
                Bytes packed = pack_bits(seed);
                open_bytes.insert(open_bytes.end(), packed.begin(), packed.end());
            }
            session.record('A', "coin-open", open_bytes);
            rep.outcome.value.push_back(static_cast<uint8_t>(a ^ b));
            success = true;
            break;
        }
        if (!success) {
            rep.outcome.aborted = true;
            rep.outcome.value.clear();
            return rep;
        }
    }
    rep.hit_target = rep.outcome.value == target;
    return rep;
}

EnforceCoinReport enforce_against_alice(const Bits& target,
                                        const CommitterPlan& committer,
                                        const CommitKey& binding_key,
                                        SessionLog& session, Rng& alice_rng,
                                        Rng& sim_rng) {
    if (target.empty()) throw ParameterError("empty target");
    if (binding_key.mode != KeyMode::binding)
        throw UsageError("extraction needs a binding key");
    (void)sim_rng;
    EnforceCoinReport rep;
    for (size_t i = 0; i < target.size(); ++i) {
        uint8_t a = alice_rng.bit();
        auto [com, opening] = lwe_commit(binding_key, a, alice_rng);
        session.record('A', "coin-commit", serialize_commitment(com));
        uint8_t extracted = lwe_extract(binding_key, com);
        uint8_t b = target[i] ^ extracted;
        session.record('B', "coin-response", Bytes{b});
        if (!committer(i)) {
            session.record('A', "coin-refuse", {});
            rep.outcome.aborted = true;
            rep.outcome.value.clear();
            return rep;
        }
        session.record('A', "coin-open", serialize_opening(opening));
        if (!lwe_verify(binding_key, com, opening)) {
            rep.outcome.aborted = true;
            rep.outcome.value.clear();
            return rep;
        }
        if (opening.bit != extracted) {
            rep.enforcement_failure = true;
            rep.outcome.aborted = true;
            rep.outcome.value.clear();
            return rep;
        }
        rep.outcome.value.push_back(static_cast<uint8_t>(opening.bit ^ b));
    }
    rep.hit_target = rep.outcome.value == target;
    return rep;
}

CommitKey key_from_coin(const Bits& coin, const LweParams& params) {
    if (coin.empty()) throw ParameterError("empty coin");
    if (params.n_dim < 1 || params.p < 2 || params.m_samples < 1)
        throw ParameterError("degenerate key shape");
    size_t width = value_bits(params.p);
    size_t need = params.m_samples * (params.n_dim + 1);
    std::vector<uint64_t> vals;
    vals.reserve(need);
    for (uint64_t block = 0; vals.size() < need; ++block) {
        Bits seed = coin;
        Bits tag = uint_to_bits(block, 32);
        seed.insert(seed.end(), tag.begin(), tag.end());
        Bits material = chacha_expand(seed, width * 4 * (need + 16));
        for (size_t pos = 0; pos + width <= material.size() && vals.size() < need;
             pos += width) {
            uint64_t v = 0;
            for (size_t k = 0; k < width; ++k)
                v |= static_cast<uint64_t>(material[pos + k]) << k;
            if (v < params.p) vals.push_back(v);
        }
    }
    CommitKey key;
    key.mode = KeyMode::hiding;
    key.params = params;
    size_t at = 0;
    key.a_matrix.resize(params.m_samples);
    for (auto& row : key.a_matrix) {
        row.resize(params.n_dim);
        for (auto& v : row) v = vals[at++];
    }
    key.b.resize(params.m_samples);
    for (auto& v : key.b) v = vals[at++];
    return key;
}

uint64_t binomial_count(size_t n, size_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    unsigned __int128 r = 1;
    for (size_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > UINT64_MAX) throw ParameterError("subset count overflows");
    }
    return static_cast<uint64_t>(r);
}

uint64_t subset_rank(const std::vector<size_t>& subset, size_t n) {
    size_t k = subset.size();
    if (k == 0 || k > n) throw ParameterError("subset size out of range");
    for (size_t i = 0; i < k; ++i) {
        if (subset[i] >= n) throw ParameterError("subset element out of range");
        if (i > 0 && subset[i] <= subset[i - 1])
            throw ParameterError("subset must be strictly increasing");
    }
    uint64_t rank = 0;
    size_t prev = 0;
    for (size_t i = 0; i < k; ++i) {
        for (size_t v = prev; v < subset[i]; ++v)
            rank += binomial_count(n - 1 - v, k - 1 - i);
        prev = subset[i] + 1;
    }
    return rank;
}

std::vector<size_t> subset_unrank(uint64_t rank, size_t n, size_t k) {
    if (k == 0 || k > n) throw ParameterError("subset size out of range");
    if (rank >= binomial_count(n, k)) throw ParameterError("rank out of range");
    std::vector<size_t> out;
    out.reserve(k);
    size_t v = 0;
    for (size_t i = 0; i < k; ++i) {
        while (true) {
            uint64_t c = binomial_count(n - 1 - v, k - 1 - i);
            if (rank < c) {
                out.push_back(v);
                ++v;
                break;
            }
            rank -= c;
            ++v;
        }
    }
    return out;
}

Bits pack_message(const std::vector<FieldElem>& message, size_t ell) {
    if (message.empty()) throw ParameterError("empty message");
    int kappa = message[0].kappa;
    for (const auto& m : message)
        if (m.kappa != kappa) throw ParameterError("mixed field widths");
    if (ell > message.size() * static_cast<size_t>(kappa))
        throw ParameterError("not enough message bits");
    Bits out;
    out.reserve(ell);
    for (const auto& m : message)
        for (int k = 0; k < kappa && out.size() < ell; ++k)
            out.push_back(static_cast<uint8_t>((m.value >> k) & 1));
    return out;
}

std::vector<FieldElem> unpack_message(const Bits& value,
                                      const SssParams& params) {
    size_t capacity = static_cast<size_t>(params.sigma) *
                      static_cast<size_t>(params.kappa);
    if (value.size() > capacity)
        throw ParameterError("value exceeds the message bits");
    std::vector<FieldElem> out;
    out.reserve(static_cast<size_t>(params.sigma));
    for (int j = 0; j < params.sigma; ++j) {
        uint32_t v = 0;
        for (int k = 0; k < params.kappa; ++k) {
            size_t idx = static_cast<size_t>(j) * params.kappa + k;
            if (idx < value.size() && value[idx]) v |= 1u << k;
        }
        out.push_back(fe(v, params.kappa));
    }
    return out;
}

CoinOutcome amplify_force_random(const ForceRandomConfig& cfg,
                                 const CommitterPlan& alice,
                                 const StringResponder& bob,
                                 SessionLog& session, Rng& alice_rng,
                                 Rng& bob_rng) {
    if (cfg.ell < 1) throw ParameterError("outcome width at least 1");
    if (cfg.kappa < 8) throw ParameterError("key width at least 8");
    CoinProtocolConfig base = cfg.base;
    base.role = CoinRole::bob_commits;
    CoinOutcome pk_flip =
        coin_sequential(cfg.kappa, base, honest_committer(), honest_responder(),
                        session, alice_rng, bob_rng);
    if (pk_flip.aborted) return {true, {}};
    CommitKey key = key_from_coin(pk_flip.value, cfg.params);

    Bits a = alice_rng.bit_string(cfg.ell);
    std::vector<LweCommitment> coms(cfg.ell);
    std::vector<LweOpening> opens(cfg.ell);
    Bytes blob;
    for (size_t i = 0; i < cfg.ell; ++i) {
        std::tie(coms[i], opens[i]) = lwe_commit(key, a[i], alice_rng);
        Bytes one = serialize_commitment(coms[i]);
        blob.insert(blob.end(), one.begin(), one.end());
    }
    session.record('A', "string-commit", blob);

    Bits b = bob(blob, cfg.ell, bob_rng);
    if (b.size() != cfg.ell) throw ParameterError("response width mismatch");
    session.record('B', "string-response", pack_bits(b));

    if (!alice(0)) {
        session.record('A', "string-refuse", {});
        return {true, {}};
    }
    Bytes open_blob;
    for (size_t i = 0; i < cfg.ell; ++i) {
        Bytes one = serialize_opening(opens[i]);
        open_blob.insert(open_blob.end(), one.begin(), one.end());
    }
    session.record('A', "string-open", open_blob);
    for (size_t i = 0; i < cfg.ell; ++i)
        if (!lwe_verify(key, coms[i], opens[i])) return {true, {}};
    return {false, xor_bits(a, b)};
}

EnforceCoinReport enforce_force_random_against_alice(
    const ForceRandomConfig& cfg, const Bits& target,
    const CommitterPlan& alice, SessionLog& session, Rng& alice_rng,
    Rng& sim_rng) {
    if (target.size() != cfg.ell) throw ParameterError("target width mismatch");
    CommitKey key = gen_binding(cfg.params, sim_rng);
    session.record('E', "substituted-key", {});

    EnforceCoinReport rep;
    Bits a = alice_rng.bit_string(cfg.ell);
    std::vector<LweCommitment> coms(cfg.ell);
    std::vector<LweOpening> opens(cfg.ell);
    Bytes blob;
    for (size_t i = 0; i < cfg.ell; ++i) {
        std::tie(coms[i], opens[i]) = lwe_commit(key, a[i], alice_rng);
        Bytes one = serialize_commitment(coms[i]);
        blob.insert(blob.end(), one.begin(), one.end());
    }
    session.record('A', "string-commit", blob);

    Bits extracted(cfg.ell);
    for (size_t i = 0; i < cfg.ell; ++i)
        extracted[i] = lwe_extract(key, coms[i]);
    Bits b = xor_bits(target, extracted);
    session.record('B', "string-response", pack_bits(b));

    if (!alice(0)) {
        session.record('A', "string-refuse", {});
        rep.outcome.aborted = true;
        return rep;
    }
    Bytes open_blob;
    for (size_t i = 0; i < cfg.ell; ++i) {
        Bytes one = serialize_opening(opens[i]);
        open_blob.insert(open_blob.end(), one.begin(), one.end());
    }
    session.record('A', "string-open", open_blob);
    Bits opened(cfg.ell);
    for (size_t i = 0; i < cfg.ell; ++i) {
        if (!lwe_verify(key, coms[i], opens[i])) {
            rep.outcome.aborted = true;
            return rep;
        }
        opened[i] = opens[i].bit;
    }
    if (opened != extracted) {
        rep.enforcement_failure = true;
        rep.outcome.aborted = true;
        return rep;
    }
    rep.outcome.value = xor_bits(opened, b);
    rep.hit_target = rep.outcome.value == target;
    return rep;
}

CoinOutcome amplify_force_force(const ForceForceConfig& cfg,
                                SessionLog& session, Rng& alice_rng,
                                Rng& bob_rng) {
    validate_force_force(cfg);
    ForceRandomConfig kf{cfg.kappa, cfg.kappa, cfg.params, cfg.base};
    CoinOutcome pk_flip =
        amplify_force_random(kf, honest_committer(), honest_string_responder(),
                             session, alice_rng, bob_rng);
    if (pk_flip.aborted) return {true, {}};
    CommitKey key = key_from_coin(pk_flip.value, cfg.params);

    std::vector<FieldElem> msg = random_message(cfg.sss, alice_rng);
    SssCommitResult cr = commit_phase(key, msg, alice_rng);
    session.record('A', "share-commitments", sss_commitment_bytes(cr.com));

    Bits b = bob_rng.bit_string(cfg.ell);
    session.record('B', "response", pack_bits(b));

    session.record('A', "shares", shares_bytes(cr.shares.shares));
    if (!shares_consistent(cfg.sss, cr.shares.shares)) return {true, {}};

    auto challenge = challenge_flip(cfg, session, alice_rng, bob_rng);
    if (!challenge) return {true, {}};

    ShareOpenings on_s = openings_for_challenge(cr.openings, *challenge);
    session.record('A', "challenge-openings", openings_bytes(on_s));
    OpenOutcome oo =
        open_phase(key, cr.com, cr.shares.shares, *challenge, on_s);
    if (oo.status != OpenStatus::ok) return {true, {}};
    return {false, xor_bits(pack_message(oo.message, cfg.ell), b)};
}

EnforceCoinReport enforce_force_force_against_alice(
    const ForceForceConfig& cfg, const Bits& target,
    AliceForceForceBehavior alice, SessionLog& session, Rng& alice_rng,
    Rng& sim_rng) {
    validate_force_force(cfg);
    if (target.size() != cfg.ell) throw ParameterError("target width mismatch");
    CommitKey key = gen_binding(cfg.params, sim_rng);
    session.record('E', "substituted-key", {});

    SssCommitment com;
    ShareOpenings openings;
    std::vector<FieldElem> claim;
    std::vector<FieldElem> msg = random_message(cfg.sss, alice_rng);
    if (alice == AliceForceForceBehavior::honest) {
        SssCommitResult cr = commit_phase(key, msg, alice_rng);
        com = std::move(cr.com);
        openings = std::move(cr.openings);
        claim = cr.shares.shares;
    } else {
        DivergentSharePair pair = make_divergent_pair(cfg.sss, msg, alice_rng);
        std::tie(com, openings) =
            commit_shares(key, pair.midpoint, cfg.sss, alice_rng);
        claim = pair.far.shares;
    }
    session.record('A', "share-commitments", sss_commitment_bytes(com));

    EnforceCoinReport rep;
    ExtractResult ex = extract_commitment(key, com);
    Bits b = xor_bits(target, pack_message(ex.message, cfg.ell));
    session.record('B', "response", pack_bits(b));

    session.record('A', "shares", shares_bytes(claim));
    if (!shares_consistent(cfg.sss, claim)) {
        rep.outcome.aborted = true;
        return rep;
    }

    auto challenge = challenge_flip(cfg, session, alice_rng, sim_rng);
    if (!challenge) {
        rep.outcome.aborted = true;
        return rep;
    }

    ShareOpenings on_s = openings_for_challenge(openings, *challenge);
    session.record('A', "challenge-openings", openings_bytes(on_s));
    OpenOutcome oo = open_phase(key, com, claim, *challenge, on_s);
    if (oo.status != OpenStatus::ok) {
        rep.outcome.aborted = true;
        return rep;
    }
    if (oo.message != ex.message) {
        rep.enforcement_failure = true;
        rep.outcome.aborted = true;
        return rep;
    }
    rep.outcome.value = target;
    rep.hit_target = true;
    return rep;
}

EnforceCoinReport enforce_force_force_against_bob(
    const ForceForceConfig& cfg, const Bits& target, const StringResponder& bob,
    const ResponderStrategy& bob_coin, SessionLog& session, Rng& sim_rng,
    Rng& bob_rng) {
    validate_force_force(cfg);
    if (target.size() != cfg.ell) throw ParameterError("target width mismatch");
    ForceRandomConfig kf{cfg.kappa, cfg.kappa, cfg.params, cfg.base};
    CoinOutcome pk_flip =
        amplify_force_random(kf, honest_committer(), honest_string_responder(),
                             session, sim_rng, bob_rng);
    EnforceCoinReport rep;
    if (pk_flip.aborted) {
        rep.outcome.aborted = true;
        return rep;
    }
    CommitKey key = key_from_coin(pk_flip.value, cfg.params);

    std::vector<FieldElem> placeholder = random_message(cfg.sss, sim_rng);
    SssCommitResult cr = commit_phase(key, placeholder, sim_rng);
    Bytes blob = sss_commitment_bytes(cr.com);
    session.record('A', "share-commitments", blob);

    Bits b = bob(blob, cfg.ell, bob_rng);
    if (b.size() != cfg.ell) throw ParameterError("response width mismatch");
    session.record('B', "response", pack_bits(b));

    std::vector<FieldElem> target_msg =
        unpack_message(xor_bits(b, target), cfg.sss);
    size_t n = cfg.sss.n_shares();
    Challenge s{sim_rng.subset(n, static_cast<size_t>(cfg.sss.sigma))};
    OpenTranscript ot = trapdoor_open(key, cr, target_msg, s);
    session.record('A', "shares", shares_bytes(ot.sent_shares));

    uint64_t total = binomial_count(n, static_cast<size_t>(cfg.sss.sigma));
    Bits rank_bits =
        uint_to_bits(subset_rank(s.subset, n), value_bits(total));
    EnforceCoinReport flip =
        enforce_against_bob(rank_bits, bob_coin, cfg.max_retries, cfg.base,
                            session, sim_rng, bob_rng);
    rep.attempts = flip.attempts;
    if (flip.outcome.aborted || !flip.hit_target) {
        rep.outcome.aborted = true;
        return rep;
    }

    session.record('A', "challenge-openings", openings_bytes(ot.openings));
    OpenOutcome oo = open_phase(key, cr.com, ot.sent_shares, s, ot.openings);
    if (oo.status != OpenStatus::ok) {
        rep.outcome.aborted = true;
        return rep;
    }
    rep.outcome.value = xor_bits(pack_message(oo.message, cfg.ell), b);
    rep.hit_target = rep.outcome.value == target;
    return rep;
}

}  // namespace qcw
