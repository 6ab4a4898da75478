#include "qcw/protocols.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "qcw/errors.hpp"

namespace qcw {

namespace {

void validate_run(const Bb84Run& run) {
    if (run.m < 8) throw ParameterError("need at least 8 positions");
    if (run.x.size() != run.m || run.theta.size() != run.m ||
        run.theta_hat.size() != run.m || run.x_hat.size() != run.m)
        throw ParameterError("run strings must all have length m");
    if (run.surviving.empty()) throw ParameterError("empty surviving set");
    for (size_t i = 0; i < run.surviving.size(); ++i) {
        if (run.surviving[i] >= run.m)
            throw ParameterError("surviving index out of range");
        if (i > 0 && run.surviving[i] <= run.surviving[i - 1])
            throw ParameterError("surviving set must be strictly increasing");
    }
}

Bits restrict_to(const Bits& v, const std::vector<size_t>& idx) {
    Bits out;
    out.reserve(idx.size());
    for (size_t i : idx) out.push_back(v[i]);
    return out;
}

void encode_bits(Bytes& out, const Bits& b) {
    put_u64(out, b.size());
    Bytes packed = pack_bits(b);
    out.insert(out.end(), packed.begin(), packed.end());
}

Bytes bits_message(const Bits& b) {
    Bytes out;
    encode_bits(out, b);
    return out;
}

Bits decode_bits(const Bytes& in, size_t& pos) {
    uint64_t n = get_u64(in, pos);
    if (n > (1ull << 32)) throw FormatError("bit count out of range");
    size_t nbytes = (static_cast<size_t>(n) + 7) / 8;
    if (in.size() - pos < nbytes) throw FormatError("truncated bit string");
    Bits out = unpack_bits(
        Bytes(in.begin() + static_cast<ptrdiff_t>(pos),
              in.begin() + static_cast<ptrdiff_t>(pos + nbytes)),
        static_cast<size_t>(n));
    pos += nbytes;
    return out;
}

Bytes encode_indices(const std::vector<size_t>& idx) {
    Bytes out;
    put_u64(out, idx.size());
    for (size_t i : idx) put_u64(out, i);
    return out;
}

void put_commitment(Bytes& out, const LweCommitment& c) {
    put_u64_vec(out, c.a_vec);
    put_u64(out, c.c_val);
}

void put_opening(Bytes& out, const LweOpening& o) {
    out.push_back(o.bit);
    encode_bits(out, o.subset);
}

Bits password_bits(size_t w) { return uint_to_bits(w, 8); }

// Recipient's copy of a wire message, with the eavesdropper's flip applied
// when it targets this message.
Bytes recipient_view(const Bytes& blob, size_t index,
                     const std::optional<EveFlip>& flip) {
    Bytes out = blob;
    if (flip && flip->message_index == index) {
        if (flip->bit_index >= out.size() * 8)
            throw ParameterError("flip bit index out of range");
        out[flip->bit_index / 8] ^= static_cast<uint8_t>(1u << (flip->bit_index % 8));
    }
    return out;
}

bool next_weight_combination(std::vector<size_t>& idx, size_t n) {
    size_t k = idx.size();
    for (size_t i = k; i-- > 0;) {
        if (idx[i] + (k - i) < n) {
            ++idx[i];
            for (size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

size_t syndrome_parity_bits(size_t n_prime) { return (3 * n_prime + 3) / 4; }

}  // namespace

Bb84Run run_bb84_preparation(size_t m, const ChannelConfig& channel,
                             ReceiverStrategy strategy, Rng& alice_rng,
                             Rng& bob_rng, const EveTap& eve, Rng* eve_rng) {
    if (m < 8) throw ParameterError("need at least 8 positions");
    Bb84Run run;
    run.m = m;
    run.x = alice_rng.bit_string(m);
    run.theta = alice_rng.bit_string(m);
    auto qubits = send_bb84(run.x, run.theta, channel, alice_rng);
    if (eve) {
        if (!eve_rng)
            throw ParameterError("eavesdropper tap needs its own randomness");
        eve(qubits, *eve_rng);
        if (qubits.size() != m)
            throw SessionError("round 0: eavesdropper changed the qubit count");
    }
    switch (strategy) {
        case ReceiverStrategy::honest: {
            auto [theta_hat, x_hat] = receiver_honest(qubits, bob_rng);
            run.theta_hat = std::move(theta_hat);
            run.x_hat = std::move(x_hat);
            break;
        }
        case ReceiverStrategy::delayed_measurement:
            run.theta_hat = bob_rng.bit_string(m);
            run.x_hat = bob_rng.bit_string(m);
            break;
    }
    run.surviving.resize(m);
    for (size_t i = 0; i < m; ++i) run.surviving[i] = i;
    return run;
}

void eve_measure_fraction(std::vector<StoredQubit>& qubits, double fraction,
                          uint8_t basis, Rng& rng) {
    if (fraction < 0 || fraction > 1)
        throw ParameterError("fraction must lie in [0, 1]");
    if (basis > 1) throw ParameterError("basis must be 0 or 1");
    ChannelConfig clean{0.0};
    for (auto& q : qubits) {
        if (rng.unit() >= fraction) continue;
        uint8_t v = measure(q, basis, rng);
        auto fresh = send_bb84(Bits{v}, Bits{basis}, clean, rng);
        q = fresh[0];
    }
}

double default_phi_prime(double phi) {
    if (phi < 0 || phi >= 0.5) throw ParameterError("phi must lie in [0, 1/2)");
    return phi + 0.03;
}

CompileResult compile_verification(const Bb84Run& run, const CompilerConfig& cfg,
                                   SessionLog& session, Rng& alice_rng,
                                   Rng& bob_rng, OpenBehavior behavior) {
    validate_run(run);
    if (!(cfg.alpha > 0 && cfg.alpha < 1))
        throw ParameterError("alpha must lie in (0, 1)");
    if (!(cfg.phi_prime >= 0 && cfg.phi_prime < 0.5))
        throw ParameterError("phi_prime must lie in [0, 1/2)");

    size_t m = run.m;
    std::vector<LweCommitment> c_theta(m), c_x(m);
    std::vector<LweOpening> o_theta(m), o_x(m);
    Bytes commit_blob;
    for (size_t i = 0; i < m; ++i) {
        std::tie(c_theta[i], o_theta[i]) =
            lwe_commit(cfg.key, run.theta_hat[i], bob_rng);
        std::tie(c_x[i], o_x[i]) = lwe_commit(cfg.key, run.x_hat[i], bob_rng);
        put_commitment(commit_blob, c_theta[i]);
        put_commitment(commit_blob, c_x[i]);
    }
    session.record('B', "commitments", commit_blob);

    size_t tsize =
        static_cast<size_t>(std::ceil(cfg.alpha * static_cast<double>(m) - 1e-9));
    if (tsize >= m) throw ParameterError("test set would swallow every position");
    std::vector<size_t> test_set = alice_rng.subset(m, tsize);
    session.record('A', "test-subset", encode_indices(test_set));

    CompileResult result;
    result.test_set = test_set;
    for (size_t i : test_set) {
        TestRecord rec{i, c_theta[i], c_x[i], o_theta[i], o_x[i]};
        if (behavior == OpenBehavior::corrupt_first &&
            result.test_records.empty())
            rec.o_x.bit ^= 1;
        result.test_records.push_back(std::move(rec));
    }
    session.record('B', "test-openings", serialize_test_records(result.test_records));

    Bits theta_hat_open = run.theta_hat;
    Bits x_hat_open = run.x_hat;
    for (const auto& rec : result.test_records) {
        if (!lwe_verify(cfg.key, rec.c_theta, rec.o_theta) ||
            !lwe_verify(cfg.key, rec.c_x, rec.o_x)) {
            result.status = CompileStatus::bad_opening;
            result.run = run;
            return result;
        }
        theta_hat_open[rec.index] = rec.o_theta.bit;
        x_hat_open[rec.index] = rec.o_x.bit;
    }

    result.test_error = sampling_estimate_check(run.x, x_hat_open, run.theta,
                                                theta_hat_open, test_set)
                            .test_err;
    if (result.test_error > cfg.phi_prime + 1e-12) {
        result.status = CompileStatus::error_rate;
        result.run = run;
        return result;
    }

    result.status = CompileStatus::accepted;
    result.run = run;
    result.run.surviving.clear();
    std::vector<uint8_t> in_test(m, 0);
    for (size_t i : test_set) in_test[i] = 1;
    for (size_t i = 0; i < m; ++i)
        if (!in_test[i]) result.run.surviving.push_back(i);
    return result;
}

void check_commit_before_test(const Transcript& transcript) {
    bool seen_commitments = false;
    for (const auto& rec : transcript) {
        if (rec.msg_type == "commitments") seen_commitments = true;
        if (rec.msg_type == "test-subset" && !seen_commitments)
            throw SessionError("round " + std::to_string(rec.round) +
                               ": test subset announced before the commitments");
    }
}

Bytes serialize_test_records(const std::vector<TestRecord>& records) {
    Bytes out;
    put_u64(out, records.size());
    for (const auto& rec : records) {
        put_u64(out, rec.index);
        put_commitment(out, rec.c_theta);
        put_commitment(out, rec.c_x);
        put_opening(out, rec.o_theta);
        put_opening(out, rec.o_x);
    }
    return out;
}

size_t ot_secret_bits(const Bb84Run& run, double lambda) {
    validate_run(run);
    if (lambda <= 0 || lambda >= 0.25)
        throw ParameterError("lambda must lie in (0, 1/4)");
    size_t ell = static_cast<size_t>(
        lambda * static_cast<double>(run.surviving.size()) + 1e-9);
    if (ell < 1) throw ParameterError("lambda leaves no secret bits");
    return ell;
}

OtResult ot_postprocess(const Bb84Run& run, const OtInputs& inputs,
                        SessionLog& session, Rng& alice_rng) {
    size_t ell = ot_secret_bits(run, inputs.lambda);
    if (inputs.s0.size() != ell || inputs.s1.size() != ell)
        throw ParameterError("secrets must have ot_secret_bits bits");
    if (inputs.k > 1) throw ParameterError("choice bit must be 0 or 1");

    Bits theta_r = restrict_to(run.theta, run.surviving);
    Bits x_r = restrict_to(run.x, run.surviving);
    Bits theta_hat_r = restrict_to(run.theta_hat, run.surviving);
    Bits x_hat_r = restrict_to(run.x_hat, run.surviving);
    size_t n = theta_r.size();

    session.record('A', "bases", bits_message(theta_r));

    std::vector<size_t> good, bad;
    for (size_t i = 0; i < n; ++i)
        (theta_r[i] == theta_hat_r[i] ? good : bad).push_back(i);

    OtResult result;
    result.i0 = inputs.k == 0 ? good : bad;
    result.i1 = inputs.k == 0 ? bad : good;
    Bytes subsets = encode_indices(result.i0);
    Bytes part1 = encode_indices(result.i1);
    subsets.insert(subsets.end(), part1.begin(), part1.end());
    session.record('B', "subsets", subsets);

    if (result.i0.size() < ell || result.i1.size() < ell) {
        session.record('A', "abort-short-set", {});
        result.status = OtStatus::short_set;
        return result;
    }

    HashFunc f0 = sample_hash(n, ell, false, alice_rng);
    HashFunc f1 = sample_hash(n, ell, false, alice_rng);
    Bits m0 = xor_bits(inputs.s0, apply_hash(f0, restrict_to(x_r, result.i0)));
    Bits m1 = xor_bits(inputs.s1, apply_hash(f1, restrict_to(x_r, result.i1)));
    Bytes masked = serialize_hash(f0);
    Bytes rest = serialize_hash(f1);
    masked.insert(masked.end(), rest.begin(), rest.end());
    encode_bits(masked, m0);
    encode_bits(masked, m1);
    session.record('A', "masked-secrets", masked);

    const std::vector<size_t>& mine = inputs.k == 0 ? result.i0 : result.i1;
    const HashFunc& fk = inputs.k == 0 ? f0 : f1;
    const Bits& mk = inputs.k == 0 ? m0 : m1;
    result.output = xor_bits(mk, apply_hash(fk, restrict_to(x_hat_r, mine)));
    result.status = OtStatus::ok;
    return result;
}

uint64_t membership_projection(const std::vector<size_t>& set,
                               const std::vector<size_t>& probes) {
    if (probes.size() > 64) throw ParameterError("at most 64 probe positions");
    uint64_t out = 0;
    for (size_t p = 0; p < probes.size(); ++p)
        if (std::find(set.begin(), set.end(), probes[p]) != set.end())
            out |= 1ull << p;
    return out;
}

BqsmAttackOutcome ot_bounded_storage_attack(size_t n, double lambda,
                                            double gamma,
                                            const ChannelConfig& channel,
                                            Rng& alice_rng, Rng& bob_rng) {
    if (n < 8) throw ParameterError("need at least 8 positions");
    size_t ell = static_cast<size_t>(lambda * static_cast<double>(n) + 1e-9);
    if (ell < 1) throw ParameterError("lambda leaves no secret bits");

    Bits x = alice_rng.bit_string(n);
    Bits theta = alice_rng.bit_string(n);
    auto qubits = send_bb84(x, theta, channel, alice_rng);
    StorageView view = receiver_bounded_storage(
        qubits, gamma, [&theta] { return theta; }, bob_rng);

    std::vector<size_t> bad, good;
    for (size_t i = 0; i < n; ++i)
        if (!view.positions[i].known) bad.push_back(i);
    size_t pad = bad.size() < ell ? ell - bad.size() : 0;
    for (size_t i = 0; i < n; ++i) {
        if (!view.positions[i].known) continue;
        if (pad > 0) {
            bad.push_back(i);
            --pad;
        } else {
            good.push_back(i);
        }
    }
    std::sort(bad.begin(), bad.end());
    BqsmAttackOutcome out;
    if (good.size() < ell || bad.size() < ell) return out;

    Bits s0 = alice_rng.bit_string(ell);
    Bits s1 = alice_rng.bit_string(ell);
    HashFunc f0 = sample_hash(n, ell, false, alice_rng);
    HashFunc f1 = sample_hash(n, ell, false, alice_rng);
    Bits m0 = xor_bits(s0, apply_hash(f0, restrict_to(x, bad)));
    Bits m1 = xor_bits(s1, apply_hash(f1, restrict_to(x, good)));

    Bits guess(n, 0);
    for (size_t i = 0; i < n; ++i) guess[i] = view.positions[i].value;
    out.known_secret_correct =
        xor_bits(m1, apply_hash(f1, restrict_to(guess, good))) == s1;
    out.other_secret_correct =
        xor_bits(m0, apply_hash(f0, restrict_to(guess, bad))) == s0;
    return out;
}

IdCode make_id_code(size_t count, size_t n, size_t min_distance, Rng& rng) {
    if (count < 1 || count > 256)
        throw ParameterError("between 1 and 256 codewords");
    if (n < 1 || min_distance > n)
        throw ParameterError("min_distance must be at most n");
    IdCode code{n, min_distance, {}};
    size_t attempts = 0;
    while (code.codewords.size() < count) {
        if (++attempts > 200000)
            throw ParameterError("code sampling failed; distance too demanding");
        Bits w = rng.bit_string(n);
        bool ok = true;
        for (const auto& c : code.codewords)
            if (hamming(c, w) < min_distance) {
                ok = false;
                break;
            }
        if (ok) code.codewords.push_back(std::move(w));
    }
    return code;
}

size_t nearest_codeword(const IdCode& code, const Bits& bases) {
    if (code.codewords.empty()) throw ParameterError("empty code");
    if (bases.size() != code.n) throw ParameterError("length mismatch");
    size_t best = 0, best_d = code.n + 1;
    for (size_t i = 0; i < code.codewords.size(); ++i) {
        size_t d = hamming(code.codewords[i], bases);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

IdOutcome id_run(const Bb84Run& run, const IdCode& code, size_t w_alice,
                 size_t w_bob, size_t ell, SessionLog& session, Rng& alice_rng,
                 Rng& bob_rng) {
    validate_run(run);
    size_t n = run.surviving.size();
    if (code.n != n) throw ParameterError("code length differs from run length");
    if (w_alice >= code.codewords.size() || w_bob >= code.codewords.size())
        throw ParameterError("password index out of range");
    if (ell < 1 || ell > n) throw ParameterError("ell must lie in [1, n]");

    Bits theta_r = restrict_to(run.theta, run.surviving);
    Bits x_r = restrict_to(run.x, run.surviving);
    Bits theta_hat_r = restrict_to(run.theta_hat, run.surviving);
    Bits x_hat_r = restrict_to(run.x_hat, run.surviving);

    Bits kappa = xor_bits(theta_hat_r, code.codewords[w_bob]);
    session.record('B', "basis-shift", bits_message(kappa));
    session.record('A', "bases", bits_message(theta_r));
    HashFunc f = sample_hash(n, ell, false, alice_rng);
    session.record('A', "hash-f", serialize_hash(f));
    size_t n_g = std::max<size_t>(8, ell);
    HashFunc g = sample_hash(n_g, ell, false, bob_rng);
    session.record('B', "hash-g", serialize_hash(g));

    Bits effective_a = xor_bits(code.codewords[w_alice], kappa);
    std::vector<size_t> i_wa;
    for (size_t i = 0; i < n; ++i)
        if (theta_r[i] == effective_a[i]) i_wa.push_back(i);
    IdOutcome out;
    out.z = xor_bits(apply_hash(f, restrict_to(x_r, i_wa)),
                     apply_hash(g, password_bits(w_alice)));
    session.record('A', "response", bits_message(out.z));

    std::vector<size_t> i_wb;
    for (size_t i = 0; i < n; ++i)
        if (theta_r[i] == theta_hat_r[i]) i_wb.push_back(i);
    Bits expected = xor_bits(apply_hash(f, restrict_to(x_hat_r, i_wb)),
                             apply_hash(g, password_bits(w_bob)));
    out.accept = out.z == expected;
    return out;
}

Bits mac_tag(const Bits& key, const Bytes& message, size_t tag_bits) {
    if (key.empty()) throw ParameterError("empty key");
    if (tag_bits < 1 || tag_bits > 64)
        throw ParameterError("tag width must lie in [1, 64]");
    Bits seed = key;
    Bits len = uint_to_bits(message.size(), 64);
    seed.insert(seed.end(), len.begin(), len.end());
    Bits msg = unpack_bits(message, message.size() * 8);
    Bits material = chacha_expand(seed, tag_bits * msg.size() + tag_bits);
    Bits tag(tag_bits);
    for (size_t r = 0; r < tag_bits; ++r) {
        uint8_t acc = material[tag_bits * msg.size() + r];
        size_t base = r * msg.size();
        for (size_t i = 0; i < msg.size(); ++i) acc ^= material[base + i] & msg[i];
        tag[r] = acc & 1;
    }
    return tag;
}

Bits syndrome_bits(uint64_t j, size_t n_prime, const Bits& block) {
    if (n_prime < 1 || n_prime > 24)
        throw ParameterError("block length must lie in [1, 24]");
    if (block.size() != n_prime) throw ParameterError("block length mismatch");
    size_t parity = syndrome_parity_bits(n_prime);
    Bits seed = uint_to_bits(j, 64);
    Bits tail = uint_to_bits(n_prime, 16);
    seed.insert(seed.end(), tail.begin(), tail.end());
    Bits mat = chacha_expand(seed, parity * n_prime);
    Bits syn(parity);
    for (size_t r = 0; r < parity; ++r) {
        uint8_t acc = 0;
        for (size_t i = 0; i < n_prime; ++i)
            acc ^= mat[r * n_prime + i] & block[i];
        syn[r] = acc & 1;
    }
    return syn;
}

std::optional<Bits> syndrome_correct(uint64_t j, size_t n_prime,
                                     double radius_frac, const Bits& noisy_block,
                                     const Bits& syn) {
    if (radius_frac < 0 || radius_frac > 0.5)
        throw ParameterError("radius fraction must lie in [0, 1/2]");
    size_t parity = syndrome_parity_bits(n_prime);
    if (syn.size() != parity) throw ParameterError("syndrome length mismatch");
    size_t radius = static_cast<size_t>(
        std::ceil(radius_frac * static_cast<double>(n_prime) - 1e-9));

    Bits base = syndrome_bits(j, n_prime, noisy_block);
    uint32_t target = static_cast<uint32_t>(bits_to_uint(xor_bits(base, syn)));
    std::vector<uint32_t> columns(n_prime);
    for (size_t i = 0; i < n_prime; ++i) {
        Bits unit(n_prime, 0);
        unit[i] = 1;
        columns[i] = static_cast<uint32_t>(bits_to_uint(syndrome_bits(j, n_prime, unit)));
    }

    for (size_t w = 0; w <= radius; ++w) {
        if (w == 0) {
            if (target == 0) return noisy_block;
            continue;
        }
        std::vector<size_t> idx(w);
        for (size_t i = 0; i < w; ++i) idx[i] = i;
        do {
            uint32_t acc = 0;
            for (size_t i : idx) acc ^= columns[i];
            if (acc == target) {
                Bits fixed = noisy_block;
                for (size_t i : idx) fixed[i] ^= 1;
                return fixed;
            }
        } while (next_weight_combination(idx, n_prime));
    }
    return std::nullopt;
}

IdPlusOutcome id_plus_run(const CompileResult& cr, const IdCode& code,
                          size_t w_alice, size_t w_bob, const IdPlusKeys& keys,
                          size_t ell, SessionLog& session, Rng& alice_rng,
                          Rng& bob_rng, const std::optional<EveFlip>& flip) {
    if (cr.status != CompileStatus::accepted)
        throw UsageError("needs an accepted compiled run");
    validate_run(cr.run);
    size_t n = cr.run.surviving.size();
    if (code.n != n) throw ParameterError("code length differs from run length");
    if (w_alice >= code.codewords.size() || w_bob >= code.codewords.size())
        throw ParameterError("password index out of range");
    if (ell < 1 || ell > n) throw ParameterError("ell must lie in [1, n]");
    if (keys.mac_key.empty()) throw ParameterError("empty authentication key");
    if (flip && flip->message_index >= kIdPlusMessageCount)
        throw ParameterError("message index out of range");

    Bits theta_r = restrict_to(cr.run.theta, cr.run.surviving);
    Bits x_r = restrict_to(cr.run.x, cr.run.surviving);
    Bits theta_hat_r = restrict_to(cr.run.theta_hat, cr.run.surviving);
    Bits x_hat_r = restrict_to(cr.run.x_hat, cr.run.surviving);

    Bytes records_blob = serialize_test_records(cr.test_records);
    Bytes test_set_blob = encode_indices(cr.test_set);
    auto mac_input = [&](const std::array<Bytes, 7>& blobs, const Bits& xs) {
        Bytes out;
        for (const auto& blob : blobs) {
            put_u64(out, blob.size());
            out.insert(out.end(), blob.begin(), blob.end());
        }
        out.insert(out.end(), test_set_blob.begin(), test_set_blob.end());
        out.insert(out.end(), records_blob.begin(), records_blob.end());
        encode_bits(out, xs);
        return out;
    };

    try {
        // receiver masks his bases with his password codeword
        Bits kappa = xor_bits(theta_hat_r, code.codewords[w_bob]);
        Bytes msg_kappa = bits_message(kappa);
        session.record('B', "basis-shift", msg_kappa);

        Bytes msg_theta = bits_message(theta_r);
        session.record('A', "bases", msg_theta);
        HashFunc f = sample_hash(n, ell, false, alice_rng);
        Bytes msg_f = serialize_hash(f);
        session.record('A', "hash-f", msg_f);

        size_t n_g = std::max<size_t>(8, ell);
        HashFunc g = sample_hash(n_g, ell, false, bob_rng);
        Bytes msg_g = serialize_hash(g);
        session.record('B', "hash-g", msg_g);

        // sender's view of the receiver messages
        Bytes a_kappa_blob = recipient_view(msg_kappa, 0, flip);
        Bytes a_g_blob = recipient_view(msg_g, 3, flip);
        size_t pos = 0;
        Bits a_kappa = decode_bits(a_kappa_blob, pos);
        if (a_kappa.size() != n) throw FormatError("basis shift length mismatch");
        HashFunc a_g = deserialize_hash(a_g_blob);
        if (a_g.n != n_g || a_g.ell != ell)
            throw FormatError("hash-g shape mismatch");

        Bits effective_a = xor_bits(code.codewords[w_alice], a_kappa);
        std::vector<size_t> i_wa;
        for (size_t i = 0; i < n; ++i)
            if (theta_r[i] == effective_a[i]) i_wa.push_back(i);
        Bits xs = restrict_to(x_r, i_wa);

        Bits block(xs.begin(),
                   xs.begin() + static_cast<ptrdiff_t>(
                                    std::min(keys.n_prime, xs.size())));
        block.resize(keys.n_prime, 0);
        Bits clear = xs.size() > keys.n_prime
                         ? Bits(xs.begin() + static_cast<ptrdiff_t>(keys.n_prime),
                                xs.end())
                         : Bits{};
        Bits syn = syndrome_bits(keys.j, keys.n_prime, block);

        Bytes msg_j;
        put_u64(msg_j, keys.j);
        session.record('A', "syndrome-index", msg_j);
        Bytes msg_syn;
        encode_bits(msg_syn, syn);
        encode_bits(msg_syn, clear);
        session.record('A', "syndrome", msg_syn);

        Bits z = xor_bits(apply_hash(f, xs),
                          apply_hash(a_g, password_bits(w_alice)));
        Bytes msg_z = bits_message(z);
        session.record('A', "response", msg_z);

        Bits tag = mac_tag(
            keys.mac_key,
            mac_input({a_kappa_blob, msg_theta, msg_f, a_g_blob, msg_j, msg_syn,
                       msg_z},
                      xs),
            keys.tag_bits);
        Bytes msg_tag = bits_message(tag);
        session.record('A', "tag", msg_tag);

        // receiver's view of the sender messages
        Bytes b_theta_blob = recipient_view(msg_theta, 1, flip);
        Bytes b_f_blob = recipient_view(msg_f, 2, flip);
        Bytes b_j_blob = recipient_view(msg_j, 4, flip);
        Bytes b_syn_blob = recipient_view(msg_syn, 5, flip);
        Bytes b_z_blob = recipient_view(msg_z, 6, flip);
        Bytes b_tag_blob = recipient_view(msg_tag, 7, flip);

        pos = 0;
        Bits theta_recv = decode_bits(b_theta_blob, pos);
        if (theta_recv.size() != n) throw FormatError("bases length mismatch");
        HashFunc f_recv = deserialize_hash(b_f_blob);
        if (f_recv.n != n || f_recv.ell != ell)
            throw FormatError("hash-f shape mismatch");
        pos = 0;
        uint64_t j_recv = get_u64(b_j_blob, pos);
        pos = 0;
        Bits syn_recv = decode_bits(b_syn_blob, pos);
        Bits clear_recv = decode_bits(b_syn_blob, pos);
        if (syn_recv.size() != syndrome_parity_bits(keys.n_prime))
            throw FormatError("syndrome length mismatch");
        pos = 0;
        Bits z_recv = decode_bits(b_z_blob, pos);
        if (z_recv.size() != ell) throw FormatError("response length mismatch");
        pos = 0;
        Bits tag_recv = decode_bits(b_tag_blob, pos);
        if (tag_recv.size() != keys.tag_bits)
            throw FormatError("tag length mismatch");

        std::vector<size_t> i_wb;
        for (size_t i = 0; i < n; ++i)
            if (theta_recv[i] == theta_hat_r[i]) i_wb.push_back(i);
        Bits xhs = restrict_to(x_hat_r, i_wb);
        Bits noisy(xhs.begin(),
                   xhs.begin() + static_cast<ptrdiff_t>(
                                     std::min(keys.n_prime, xhs.size())));
        noisy.resize(keys.n_prime, 0);
        auto decoded = syndrome_correct(j_recv, keys.n_prime, keys.phi_dprime,
                                        noisy, syn_recv);
        if (!decoded) return {IdPlusStatus::decode_failure};

        Bits x_tilde;
        if (xhs.size() >= keys.n_prime) {
            x_tilde = *decoded;
            Bits tail = clear_recv;
            tail.resize(xhs.size() - keys.n_prime, 0);
            x_tilde.insert(x_tilde.end(), tail.begin(), tail.end());
        } else {
            x_tilde = Bits(decoded->begin(),
                           decoded->begin() + static_cast<ptrdiff_t>(xhs.size()));
        }

        Bits tag_check = mac_tag(
            keys.mac_key,
            mac_input({msg_kappa, b_theta_blob, b_f_blob, msg_g, b_j_blob,
                       b_syn_blob, b_z_blob},
                      x_tilde),
            keys.tag_bits);
        if (tag_check != tag_recv) return {IdPlusStatus::mac_reject};

        Bits expected = xor_bits(apply_hash(f_recv, x_tilde),
                                 apply_hash(g, password_bits(w_bob)));
        return {z_recv == expected ? IdPlusStatus::accept : IdPlusStatus::reject};
    } catch (const FormatError&) {
        return {IdPlusStatus::mac_reject};
    }
}

}  // namespace qcw
