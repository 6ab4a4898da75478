#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qcw/bits.hpp"
#include "qcw/coinflip.hpp"
#include "qcw/errors.hpp"
#include "qcw/fieldmath.hpp"
#include "qcw/harness.hpp"
#include "qcw/hashing.hpp"
#include "qcw/mixedcommit.hpp"
#include "qcw/protocols.hpp"
#include "qcw/rng.hpp"
#include "qcw/session.hpp"
#include "qcw/ssscommit.hpp"
#include "qcw/stats.hpp"
#include "qcw/zkpk.hpp"

using namespace qcw;

namespace {

std::string fmt(const char* pattern, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

double counts_tvd(const std::vector<uint64_t>& h0,
                  const std::vector<uint64_t>& h1) {
    double n0 = 0, n1 = 0;
    for (uint64_t c : h0) n0 += static_cast<double>(c);
    for (uint64_t c : h1) n1 += static_cast<double>(c);
    double sum = 0;
    for (size_t i = 0; i < h0.size(); ++i)
        sum += std::fabs(static_cast<double>(h0[i]) / n0 -
                         static_cast<double>(h1[i]) / n1);
    return sum / 2;
}

double binom_se(double rate, double n) {
    return std::sqrt(rate * (1.0 - rate) / n);
}

// 1. Exhaustive two-universality of the binary-matrix family.
bool crit_two_universal(std::string& detail) {
    size_t classes = 0;
    for (size_t n = 4; n <= 6; ++n) {
        for (size_t ell = 1; ell <= 3; ++ell) {
            uint64_t family = uint64_t{1} << (ell * n);
            std::vector<uint64_t> collisions(size_t{1} << n, 0);
            HashFunc h;
            h.n = n;
            h.ell = ell;
            h.strong = false;
            h.offset = Bits(ell, 0);
            const Bits zero(ell, 0);
            for (uint64_t id = 0; id < family; ++id) {
                h.rows.clear();
                for (size_t r = 0; r < ell; ++r)
                    h.rows.push_back(uint_to_bits((id >> (r * n)), n));
                for (uint64_t d = 1; d < (uint64_t{1} << n); ++d)
                    if (apply_hash(h, uint_to_bits(d, n)) == zero)
                        ++collisions[d];
            }
            for (uint64_t d = 1; d < (uint64_t{1} << n); ++d) {
                if (collisions[d] * (uint64_t{1} << ell) != family) {
                    detail = fmt("n=%.0f ell=%.0f has an uneven class",
                                 static_cast<double>(n),
                                 static_cast<double>(ell));
                    return false;
                }
                ++classes;
            }
        }
    }

    // Difference classes stand in for pairs: spot-check the equivalence.
    Rng rng(101);
    for (int t = 0; t < 200; ++t) {
        HashFunc h = sample_hash(6, 3, false, rng);
        uint64_t x = rng.below(64);
        uint64_t y = rng.below(64);
        if (x == y) continue;
        bool pair_collides =
            apply_hash(h, uint_to_bits(x, 6)) == apply_hash(h, uint_to_bits(y, 6));
        bool diff_zero =
            apply_hash(h, uint_to_bits(x ^ y, 6)) == Bits(3, 0);
        if (pair_collides != diff_zero) {
            detail = "pair collision disagrees with the difference test";
            return false;
        }
    }
    detail = fmt("%.0f difference classes across 9 family sizes, all exact",
                 static_cast<double>(classes));
    return true;
}

// 2. Extracted bits sit within the distance-from-uniform bound.
bool crit_pa_bound(std::string& detail) {
    Rng rng(202);
    size_t violations = 0;
    double worst_margin = 1e9;
    for (int inst = 0; inst < 1000; ++inst) {
        int bits = 4 + static_cast<int>(rng.below(9));
        uint64_t space = uint64_t{1} << bits;
        size_t support = 2 + static_cast<size_t>(rng.below(space - 1));
        Distribution d;
        d.bits = bits;
        double total = 0;
        for (size_t v : rng.subset(space, support)) {
            double w = 0.1 + rng.unit();
            d.probs[v] = w;
            total += w;
        }
        for (auto& [v, p] : d.probs) p /= total;

        size_t max_leak = std::min<size_t>(3, static_cast<size_t>(bits) - 1);
        std::vector<size_t> leak = rng.subset(bits, 1 + rng.below(max_leak));
        size_t ell = 1 + rng.below(3);

        PaResult r = pa_experiment(d, leak, ell, 24, rng);
        if (r.empirical > r.bound) ++violations;
        worst_margin = std::min(worst_margin, r.bound - r.empirical);
    }
    detail = fmt("violations=%.0f/1000, tightest slack %.4f",
                 static_cast<double>(violations), worst_margin);
    return violations == 0;
}

// 3. A splitting tag always exists and honors the pointwise bound.
bool crit_entropy_split(std::string& detail) {
    Rng rng(303);
    size_t failures = 0;
    for (int t = 0; t < 200; ++t) {
        size_t s0 = 2 + rng.below(11);
        size_t s1 = 2 + rng.below(11);
        JointDistribution j;
        j.bits0 = std::max<int>(1, static_cast<int>(std::ceil(std::log2(s0))));
        j.bits1 = std::max<int>(1, static_cast<int>(std::ceil(std::log2(s1))));
        double total = 0;
        for (uint64_t x = 0; x < s0; ++x)
            for (uint64_t y = 0; y < s1; ++y) {
                double w = 0.05 + rng.unit();
                j.probs[{x, y}] = w;
                total += w;
            }
        for (auto& [xy, p] : j.probs) p /= total;

        SplitWitness w = min_entropy_split_witness(j);
        double cap = std::pow(2.0, -w.alpha / 2) + 1e-12;
        bool ok = w.found && w.bound <= cap;
        if (ok) {
            std::map<std::pair<int, uint64_t>, double> buckets;
            for (const auto& [xy, p] : j.probs) {
                uint64_t tag_src = w.split_var == 0 ? xy.first : xy.second;
                int k = w.assignment.at(tag_src);
                uint64_t xk = k == 0 ? xy.first : xy.second;
                buckets[{k, xk}] += p;
            }
            for (const auto& [key, p] : buckets)
                if (p > cap) ok = false;
        }
        if (!ok) ++failures;
    }
    detail = fmt("failures=%.0f/200", static_cast<double>(failures));
    return failures == 0;
}

// 4. Keyed commitments: extraction, binding agreement, hiding distance.
bool crit_mixed_commitment(std::string& detail) {
    LweParams params = lwe_params_for(16);
    Rng rng(404);
    CommitKey binding = gen_binding(params, rng);

    size_t extract_ok = 0;
    for (int t = 0; t < 10000; ++t) {
        uint8_t bit = rng.bit();
        auto [com, op] = lwe_commit(binding, bit, rng);
        if (lwe_extract(binding, com) == bit) ++extract_ok;
    }

    size_t bind_ok = 0;
    for (int t = 0; t < 100000; ++t) {
        uint8_t bit = rng.bit();
        auto [com, op] = lwe_commit(binding, bit, rng);
        if (lwe_verify(binding, com, op) &&
            lwe_extract(binding, com) == op.bit)
            ++bind_ok;
    }

    CommitKey hiding = gen_hiding(params, rng);
    std::vector<std::string> proj0, proj1;
    proj0.reserve(100000);
    proj1.reserve(100000);
    for (int t = 0; t < 100000; ++t) {
        for (uint8_t bit : {0, 1}) {
            auto [com, op] = lwe_commit(hiding, bit, rng);
            uint64_t cell =
                (com.a_vec[0] % 8) * 8 + com.c_val * 8 / params.p;
            (bit ? proj1 : proj0).push_back(std::to_string(cell));
        }
    }
    double tvd = empirical_tvd(proj0, proj1);

    detail = fmt("extract %.0f/10000, binding %.0f/100000, hiding tvd %.4f",
                 static_cast<double>(extract_ok),
                 static_cast<double>(bind_ok), tvd);
    return extract_ok == 10000 && bind_ok == 100000 && tvd < 0.05;
}

// 5. Double-openable receiver vectors are rare at enumerable scale.
bool crit_naor_equivocation(std::string& detail) {
    const size_t n = 8;
    std::vector<Bits> expansions;
    expansions.reserve(size_t{1} << n);
    for (uint64_t s = 0; s < (uint64_t{1} << n); ++s)
        expansions.push_back(chacha_expand(uint_to_bits(s, n), 3 * n));

    std::set<uint64_t> bad_rb;
    for (size_t i = 0; i < expansions.size(); ++i)
        for (size_t j = i + 1; j < expansions.size(); ++j)
            bad_rb.insert(bits_to_uint(xor_bits(expansions[i], expansions[j])));

    double exact =
        static_cast<double>(bad_rb.size()) / std::pow(2.0, 3.0 * n);
    const double cap = 4.0 / 256.0;

    // Constructive check: one flagged vector really opens both ways.
    bool witnessed = false;
    uint64_t rb_val = *bad_rb.begin();
    Bits rb = uint_to_bits(rb_val, 3 * n);
    for (uint64_t s1 = 0; s1 < (1u << n) && !witnessed; ++s1)
        for (uint64_t s2 = 0; s2 < (1u << n) && !witnessed; ++s2) {
            if (s1 == s2) continue;
            if (bits_to_uint(xor_bits(expansions[s1], expansions[s2])) !=
                rb_val)
                continue;
            Bits com = naor_commit(0, uint_to_bits(s1, n), rb);
            witnessed = naor_verify(com, 0, uint_to_bits(s1, n), rb) &&
                        naor_verify(com, 1, uint_to_bits(s2, n), rb);
        }

    Rng rng(505);
    size_t hits = 0;
    for (int t = 0; t < 10000; ++t)
        hits += bad_rb.count(rng.bits_value(3 * n));
    double sampled = static_cast<double>(hits) / 10000.0;

    detail = fmt("exact %.5f, sampled %.5f vs cap %.5f", exact, sampled, cap);
    return exact <= cap && sampled <= cap && witnessed;
}

// 6. Cut-and-choose: hypergeometric escape and the generic cheater rate.
bool crit_cut_and_choose(std::string& detail) {
    Rng keyrng(606);
    CommitKey key = gen_hiding(lwe_params_for(4), keyrng);
    Rng rng(607);

    SssParams p4{4, 8};
    const int trials4 = 100000;
    size_t escapes = 0;
    for (int t = 0; t < trials4; ++t) {
        std::vector<FieldElem> m, s;
        for (int j = 0; j < p4.sigma; ++j) {
            m.push_back(fe(static_cast<uint32_t>(rng.below(256)), 8));
            s.push_back(fe(static_cast<uint32_t>(rng.below(256)), 8));
        }
        ShareVector honest = sss_share(m, s);
        std::vector<FieldElem> corrupted = honest.shares;
        std::vector<size_t> where = rng.subset(p4.n_shares(), p4.sigma);
        for (size_t idx : where)
            corrupted[idx] = gf_add(
                corrupted[idx],
                fe(1 + static_cast<uint32_t>(rng.below(255)), 8));
        auto [com, openings] = commit_shares(key, corrupted, p4, rng);
        Challenge ch = sample_challenge(p4, rng);
        OpenOutcome out = open_phase(key, com, honest.shares, ch,
                                     openings_for_challenge(openings, ch));
        bool escaped = out.status == OpenStatus::ok;
        bool missed = true;
        for (size_t idx : where)
            missed = missed && std::find(ch.subset.begin(), ch.subset.end(),
                                         idx) == ch.subset.end();
        if (escaped != missed) {
            detail = "escape disagrees with the challenged positions";
            return false;
        }
        escapes += escaped;
    }
    double expect = static_cast<double>(binomial_count(12, 4)) /
                    static_cast<double>(binomial_count(16, 4));
    double rate4 = static_cast<double>(escapes) / trials4;
    double se4 = binom_se(rate4, trials4);
    bool part4 = std::fabs(rate4 - expect) <= 3 * se4;

    SssParams p16{16, 8};
    const int trials16 = 10000;
    size_t generic_escapes = 0;
    for (int t = 0; t < trials16; ++t) {
        std::vector<FieldElem> m;
        for (int j = 0; j < p16.sigma; ++j)
            m.push_back(fe(static_cast<uint32_t>(rng.below(256)), 8));
        DivergentSharePair pair = make_divergent_pair(p16, m, rng);
        auto [com, openings] = commit_shares(key, pair.midpoint, p16, rng);
        Challenge ch = sample_challenge(p16, rng);
        OpenOutcome out = open_phase(key, com, pair.far.shares, ch,
                                     openings_for_challenge(openings, ch));
        generic_escapes += out.status == OpenStatus::ok;
    }
    double rate16 = static_cast<double>(generic_escapes) / trials16;
    double cap16 = std::pow(0.75, 16) + 3 * binom_se(rate16, trials16);
    bool part16 = rate16 <= cap16;

    detail = fmt("sigma=4 escape %.4f vs %.4f exact; sigma=16 cheat %.4f",
                 rate4, expect, rate16);
    return part4 && part16;
}

// 7. Equivocated openings replay honest transcripts and retarget freely.
bool crit_trapdoor_opening(std::string& detail) {
    Rng rng(707);
    CommitKey key = gen_hiding(lwe_params_for(4), rng);
    SssParams params{4, 8};
    size_t replayed = 0, retargeted = 0;
    for (int t = 0; t < 1000; ++t) {
        std::vector<FieldElem> m;
        for (int j = 0; j < params.sigma; ++j)
            m.push_back(fe(static_cast<uint32_t>(rng.below(256)), 8));
        SssCommitResult cr = commit_phase(key, m, rng);
        Challenge ch = sample_challenge(params, rng);

        OpenTranscript honest = honest_open_transcript(cr, ch);
        OpenTranscript same = trapdoor_open(key, cr, m, ch);
        if (transcript_bytes(honest) == transcript_bytes(same)) ++replayed;

        std::vector<FieldElem> target = m;
        while (target == m)
            target[rng.below(params.sigma)] =
                fe(static_cast<uint32_t>(rng.below(256)), 8);
        OpenTranscript forged = trapdoor_open(key, cr, target, ch);
        OpenOutcome out =
            open_phase(key, cr.com, forged.sent_shares, ch, forged.openings);
        if (out.status == OpenStatus::ok && out.message == target)
            ++retargeted;
    }
    detail = fmt("replayed %.0f/1000, retargeted %.0f/1000",
                 static_cast<double>(replayed),
                 static_cast<double>(retargeted));
    return replayed == 1000 && retargeted == 1000;
}

// 8. Transfer completeness, choice-bit privacy, storage-bounded attacks.
bool crit_oblivious_transfer(std::string& detail) {
    Rng keyrng(808);
    CommitKey key = gen_hiding(lwe_params_for(4), keyrng);
    CompilerConfig cc{0.5, default_phi_prime(0.0), key};

    size_t complete = 0;
    for (uint64_t t = 0; t < 1000; ++t) {
        Rng a(810000 + t), b(820000 + t);
        Bb84Run run =
            run_bb84_preparation(256, {0.0}, ReceiverStrategy::honest, a, b);
        SessionLog session;
        CompileResult cr = compile_verification(run, cc, session, a, b);
        if (cr.status != CompileStatus::accepted) continue;
        size_t ell = ot_secret_bits(cr.run, 0.1);
        if (ell == 0) continue;
        OtInputs inputs;
        inputs.s0 = a.bit_string(ell);
        inputs.s1 = a.bit_string(ell);
        inputs.k = b.bit();
        OtResult res = ot_postprocess(cr.run, inputs, session, a);
        if (res.status == OtStatus::ok &&
            res.output == (inputs.k ? inputs.s1 : inputs.s0))
            ++complete;
    }

    std::vector<size_t> probes{0, 1, 2, 3};
    std::vector<uint64_t> hist0(16, 0), hist1(16, 0);
    for (uint8_t k = 0; k <= 1; ++k) {
        for (uint64_t t = 0; t < 10000; ++t) {
            Rng a(830000 + t), b(840000 + t);
            Bb84Run run =
                run_bb84_preparation(64, {0.0}, ReceiverStrategy::honest, a, b);
            OtInputs inputs;
            inputs.s0 = a.bit_string(6);
            inputs.s1 = a.bit_string(6);
            inputs.k = k;
            SessionLog session;
            OtResult res = ot_postprocess(run, inputs, session, a);
            ++(k == 0 ? hist0 : hist1)[membership_projection(res.i0, probes)];
        }
    }
    double privacy_tvd = counts_tvd(hist0, hist1);

    size_t low_known = 0, low_other = 0, high_other = 0;
    for (uint64_t t = 0; t < 1000; ++t) {
        Rng a(850000 + t), b(860000 + t);
        auto low = ot_bounded_storage_attack(256, 0.1, 0.04, {0.0}, a, b);
        low_known += low.known_secret_correct;
        low_other += low.other_secret_correct;
        Rng a2(870000 + t), b2(880000 + t);
        auto high = ot_bounded_storage_attack(256, 0.1, 0.15, {0.0}, a2, b2);
        high_other += high.other_secret_correct;
    }
    double low_rate = static_cast<double>(low_other) / 1000.0;

    detail = fmt("complete %.0f/1000, privacy tvd %.4f, stored-low leak %.4f",
                 static_cast<double>(complete), privacy_tvd, low_rate) +
             fmt(" (above the storage line: %.4f)",
                 static_cast<double>(high_other) / 1000.0);
    return complete == 1000 && privacy_tvd < 0.05 && low_known == 1000 &&
           low_rate < 0.05;
}

// 9. Committing without measuring fails the opened-sample test.
bool crit_delayed_measurement(std::string& detail) {
    Rng keyrng(909);
    CommitKey key = gen_hiding(lwe_params_for(4), keyrng);
    CompilerConfig cc{0.5, 0.02, key};
    size_t rejected = 0;
    for (uint64_t t = 0; t < 1000; ++t) {
        Rng a(910000 + t), b(920000 + t);
        Bb84Run run = run_bb84_preparation(
            256, {0.0}, ReceiverStrategy::delayed_measurement, a, b);
        SessionLog session;
        CompileResult cr = compile_verification(run, cc, session, a, b);
        rejected += cr.status != CompileStatus::accepted;
    }
    detail = fmt("rejected %.0f/1000", static_cast<double>(rejected));
    return rejected >= 990;
}

// 10. Identification: completeness, wrong-password rate, shift uniformity.
bool crit_identification(std::string& detail) {
    Rng coder(1010);
    IdCode code = make_id_code(4, 128, 32, coder);

    size_t complete = 0;
    for (uint64_t t = 0; t < 1000; ++t) {
        Rng a(1020000 + t), b(1030000 + t);
        Bb84Run run =
            run_bb84_preparation(128, {0.0}, ReceiverStrategy::honest, a, b);
        SessionLog session;
        size_t w = a.below(4);
        complete += id_run(run, code, w, w, 8, session, a, b).accept;
    }

    size_t accepted_wrong = 0;
    std::vector<uint64_t> shift_counts(256, 0);
    for (uint64_t t = 0; t < 10000; ++t) {
        Rng a(1040000 + t), b(1050000 + t);
        Bb84Run run =
            run_bb84_preparation(128, {0.0}, ReceiverStrategy::honest, a, b);
        SessionLog session;
        size_t w_alice = a.below(4);
        size_t w_bob = (w_alice + 1 + b.below(3)) % 4;
        accepted_wrong +=
            id_run(run, code, w_alice, w_bob, 8, session, a, b).accept;
        // Payload layout: u64 bit count, then the packed shift bits.
        Bytes shift = from_hex(session.transcript().at(0).payload_hex);
        ++shift_counts[shift.at(8)];
    }
    double wrong_rate = static_cast<double>(accepted_wrong) / 10000.0;
    bool shift_uniform = uniformity_pass(shift_counts);

    detail = fmt("complete %.0f/1000, wrong-password %.4f, shift byte z ok %.0f",
                 static_cast<double>(complete), wrong_rate,
                 static_cast<double>(shift_uniform));
    return complete == 1000 && wrong_rate <= std::pow(2.0, -8) + 0.02 &&
           shift_uniform;
}

// 11. Authenticated identification: tampering and channel measurement.
bool crit_authenticated_id(std::string& detail) {
    Rng keyrng(1111);
    CommitKey key = gen_hiding(lwe_params_for(4), keyrng);
    CompilerConfig cc{0.5, 0.02, key};

    Rng a0(1120001), b0(1120002);
    Bb84Run base =
        run_bb84_preparation(512, {0.0}, ReceiverStrategy::honest, a0, b0);
    SessionLog vsession;
    CompileResult cr = compile_verification(base, cc, vsession, a0, b0);
    if (cr.status != CompileStatus::accepted) {
        detail = "reference run was rejected";
        return false;
    }
    size_t n = cr.run.surviving.size();
    Rng coder(1121);
    IdCode code = make_id_code(4, n, n / 4, coder);
    Rng keybits(1122);
    IdPlusKeys keys;
    keys.mac_key = keybits.bit_string(128);
    keys.j = keybits.word();

    SessionLog honest_session;
    Rng ah(1123), bh(1124);
    IdPlusOutcome honest =
        id_plus_run(cr, code, 2, 2, keys, 8, honest_session, ah, bh);
    if (honest.status != IdPlusStatus::accept) {
        detail = "honest reference run rejected";
        return false;
    }
    const Transcript& wire = honest_session.transcript();

    Rng pick(1125);
    size_t tamper_rejected = 0;
    for (uint64_t t = 0; t < 1000; ++t) {
        size_t msg = pick.below(kIdPlusMessageCount);
        size_t nbits = wire.at(msg).payload_hex.size() * 4;
        EveFlip flip{msg, pick.below(nbits)};
        Rng a(1130000 + t), b(1140000 + t);
        SessionLog session;
        IdPlusOutcome out =
            id_plus_run(cr, code, 2, 2, keys, 8, session, a, b, flip);
        tamper_rejected += out.status != IdPlusStatus::accept;
    }

    CompilerConfig strict{0.5, 0.004, key};
    size_t eve_rejected = 0;
    for (uint64_t t = 0; t < 1000; ++t) {
        Rng a(1150000 + t), b(1160000 + t), e(1170000 + t);
        EveTap tap = [](std::vector<StoredQubit>& qubits, Rng& rng) {
            eve_measure_fraction(qubits, 0.1, 0, rng);
        };
        Bb84Run run = run_bb84_preparation(512, {0.0},
                                           ReceiverStrategy::honest, a, b,
                                           tap, &e);
        SessionLog session;
        CompileResult out = compile_verification(run, strict, session, a, b);
        eve_rejected += out.status != CompileStatus::accepted;
    }

    detail = fmt("tamper rejected %.0f/1000, measuring tap rejected %.0f/1000",
                 static_cast<double>(tamper_rejected),
                 static_cast<double>(eve_rejected));
    return tamper_rejected >= 990 && eve_rejected >= 900;
}

// 12. Coin flips: uniformity and both enforcement directions.
bool crit_coin_flipping(std::string& detail) {
    CoinProtocolConfig base;
    base.naor_n = 16;

    std::vector<uint64_t> counts(256, 0);
    size_t aborts = 0;
    for (uint64_t t = 0; t < 100000; ++t) {
        Rng a(1210000 + t), b(1310000 + t);
        SessionLog session;
        CoinOutcome out = coin_sequential(8, base, honest_committer(),
                                          honest_responder(), session, a, b);
        if (out.aborted) {
            ++aborts;
            continue;
        }
        ++counts[bits_to_uint(out.value)];
    }
    bool uniform = aborts == 0 && uniformity_pass(counts);

    LweParams params = lwe_params_for(4);
    size_t alice_nonabort = 0, alice_hits = 0;
    Rng keyrng(1212);
    for (uint64_t t = 0; t < 1000; ++t) {
        CommitKey bk = gen_binding(params, keyrng);
        Rng a(1410000 + t), sim(1510000 + t);
        Bits target = uint_to_bits(a.below(256), 8);
        SessionLog session;
        EnforceCoinReport rep = enforce_against_alice(
            target, honest_committer(), bk, session, a, sim);
        if (!rep.outcome.aborted) {
            ++alice_nonabort;
            alice_hits += rep.hit_target;
        }
    }
    bool alice_ok = alice_nonabort > 0 && alice_hits == alice_nonabort;

    ForceForceConfig ff;
    ff.kappa = 16;
    ff.sss = {8, 8};
    ff.ell = 8;
    ff.params = params;
    ff.base = base;

    size_t bob_nonabort = 0, bob_hits = 0;
    for (uint64_t t = 0; t < 1000; ++t) {
        Rng sim(1610000 + t), b(1710000 + t);
        Bits target = uint_to_bits(sim.below(256), 8);
        SessionLog session;
        EnforceCoinReport rep = enforce_force_force_against_bob(
            ff, target, honest_string_responder(), honest_responder(),
            session, sim, b);
        if (!rep.outcome.aborted) {
            ++bob_nonabort;
            bob_hits += rep.hit_target;
        }
    }
    bool bob_ok = bob_nonabort > 0 && bob_hits == bob_nonabort;

    size_t failures = 0;
    for (uint64_t t = 0; t < 1000; ++t) {
        Rng a(1810000 + t), sim(1910000 + t);
        Bits target = uint_to_bits(sim.below(256), 8);
        SessionLog session;
        EnforceCoinReport rep = enforce_force_force_against_alice(
            ff, target, AliceForceForceBehavior::divergent, session, a, sim);
        failures += rep.enforcement_failure;
    }
    double fail_rate = static_cast<double>(failures) / 1000.0;
    double fail_cap = std::pow(0.75, 8) + 3 * binom_se(fail_rate, 1000);

    detail = fmt("uniform %.0f, forced hits %.0f+%.0f, ",
                 static_cast<double>(uniform),
                 static_cast<double>(alice_hits),
                 static_cast<double>(bob_hits)) +
             fmt("divergent failure %.4f vs cap %.4f", fail_rate, fail_cap);
    return uniform && alice_ok && bob_ok && fail_rate <= fail_cap;
}

// 13. Cycle proofs: completeness, cheating rate, extraction, simulation.
bool crit_cycle_proofs(std::string& detail) {
    WitnessEncodingScheme scheme8 = ham_encoding(8);
    ZkpkConfig zc;
    zc.kappa = 8;
    zc.params = lwe_params_for(4);
    zc.base.naor_n = 16;

    size_t complete = 0;
    for (uint64_t t = 0; t < 200; ++t) {
        Rng setup(1320000 + t), a(1330000 + t), b(1340000 + t);
        auto [g, w] = random_ham_graph(8, 0.3, setup);
        SessionLog session;
        ZkpkResult res =
            zkpk_run(scheme8, g, w, ZkpkProver::honest, zc, session, a, b);
        complete += res.verdict == ZkpkVerdict::success;
    }

    size_t cheat_wins = 0;
    for (uint64_t t = 0; t < 10000; ++t) {
        Rng setup(1350000 + t), a(1360000 + t), b(1370000 + t);
        auto [g, w] = random_ham_graph(5, 0.3, setup);
        SessionLog session;
        ZkpkResult res = zkpk_run(scheme8, g, std::nullopt,
                                  ZkpkProver::guess_cheat, zc, session, a, b);
        cheat_wins += res.verdict == ZkpkVerdict::success;
    }
    double cheat_rate = static_cast<double>(cheat_wins) / 10000.0;
    double cheat_cap = std::pow(2.0, -8) + 3 * binom_se(cheat_rate, 10000);

    WitnessEncodingScheme scheme4 = ham_encoding(4);
    Rng keyrng(1313);
    CommitKey bk = gen_binding(lwe_params_for(4), keyrng);
    ZkpkConfig bzc = zc;
    bzc.key_override = bk;
    size_t extractions = 0, accepting = 0;
    for (uint64_t t = 0; t < 100; ++t) {
        Rng setup(1380000 + t), a(1390000 + t), b(1400000 + t);
        auto [g, w] = random_ham_graph(6, 0.3, setup);
        SessionLog session;
        ZkpkResult res =
            zkpk_run(scheme4, g, w, ZkpkProver::honest, bzc, session, a, b);
        if (res.verdict != ZkpkVerdict::success) continue;
        ++accepting;
        std::optional<Cycle> pulled =
            extract_witness(scheme4, g, bk, res.commitments);
        if (pulled && is_valid_cycle(g, *pulled)) ++extractions;
    }

    // Enumerated simulatability on four-vertex instances.
    Graph plain4;
    plain4.vertices = 4;
    plain4.adj.assign(16, 0);
    for (size_t u = 0; u < 4; ++u) plain4.set(u, (u + 1) % 4, 1);
    Graph chord4 = plain4;
    chord4.set(0, 2, 1);
    Cycle w4{0, 1, 2, 3};
    WitnessEncodingScheme scheme1 = ham_encoding(1);
    auto opened_key = [](const OpenedBits& opened) {
        std::ostringstream key;
        for (const OpenedBit& ob : opened)
            key << ob.position << ':' << int(ob.bit) << ',';
        return key.str();
    };
    bool simulate_exact = true;
    for (const Graph& g4 : {plain4, chord4}) {
        for (uint8_t c = 0; c <= 1 && simulate_exact; ++c) {
            Bits challenge{c};
            std::map<std::string, int> enc_side, sim_side;
            std::vector<size_t> perm{0, 1, 2, 3};
            do {
                WitnessEncoding e = ham_encode_with(g4, w4, {perm});
                OpenedBits opened;
                for (size_t pos : scheme1.select(challenge, e))
                    opened.push_back({pos, e.bits.at(pos)});
                ++enc_side[opened_key(opened)];
                if (!scheme1.judge(g4, challenge, opened))
                    simulate_exact = false;
                ++sim_side[opened_key(ham_simulate_with(g4, challenge, {perm}))];
            } while (std::next_permutation(perm.begin(), perm.end()));
            if (enc_side != sim_side || enc_side.size() != 24)
                simulate_exact = false;
        }
    }

    detail = fmt("complete %.0f/200, cheat %.4f vs cap %.4f, ",
                 static_cast<double>(complete), cheat_rate, cheat_cap) +
             fmt("extracted %.0f/%.0f, enumerated match %.0f",
                 static_cast<double>(extractions),
                 static_cast<double>(accepting),
                 static_cast<double>(simulate_exact));
    return complete == 200 && cheat_rate <= cheat_cap && accepting == 100 &&
           extractions == accepting && simulate_exact;
}

// 14. The whole battery is a pure function of the master seed.
bool crit_reproducibility(std::string& detail) {
    std::vector<SuiteEntry> first = run_suite(20260815, 2);
    std::string text1 = suite_json(first);
    std::vector<SuiteEntry> second = run_suite(20260815, 7);
    std::string text2 = suite_json(second);
    size_t reports = 0, passed = 0;
    for (const SuiteEntry& entry : first)
        for (const StatReport& r : entry.reports) {
            ++reports;
            passed += r.pass;
        }
    detail = fmt("identical %.0f, %.0f/%.0f battery reports pass",
                 static_cast<double>(text1 == text2),
                 static_cast<double>(passed), static_cast<double>(reports));
    return text1 == text2 && passed == reports;
}

struct CriterionSpec {
    int id;
    const char* title;
    double budget_seconds;  // 0 when unconstrained
    std::function<bool(std::string&)> run;
};

}  // namespace

int main() {
    std::vector<CriterionSpec> checks{
        {1, "two-universal collision fractions exact", 10, crit_two_universal},
        {2, "extracted-bit distance bound, zero violations", 120, crit_pa_bound},
        {3, "entropy-splitting tag exists on random joints", 60, crit_entropy_split},
        {4, "keyed commitment extraction, binding, hiding", 180, crit_mixed_commitment},
        {5, "double-openable receiver vectors rare", 120, crit_naor_equivocation},
        {6, "cut-and-choose escape probabilities", 180, crit_cut_and_choose},
        {7, "trapdoor openings replay and retarget", 0, crit_trapdoor_opening},
        {8, "oblivious transfer guarantees", 300, crit_oblivious_transfer},
        {9, "delayed measurement caught", 0, crit_delayed_measurement},
        {10, "identification rates and shift uniformity", 0, crit_identification},
        {11, "authenticated identification tamper detection", 0, crit_authenticated_id},
        {12, "coin uniformity and enforcement", 300, crit_coin_flipping},
        {13, "cycle-proof soundness, extraction, simulation", 0, crit_cycle_proofs},
        {14, "suite reproducibility byte-for-byte", 0, crit_reproducibility},
    };

    int failures = 0;
    for (const CriterionSpec& c : checks) {
        std::string detail;
        bool ok = false;
        auto start = std::chrono::steady_clock::now();
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        if (ok && c.budget_seconds > 0 && elapsed > c.budget_seconds) {
            ok = false;
            detail += fmt(" [budget %.0fs exceeded]", c.budget_seconds);
        }
        failures += !ok;
        std::printf("[%s] criterion %2d: %s (%s; %.1fs)\n",
                    ok ? "PASS" : "FAIL", c.id, c.title, detail.c_str(),
                    elapsed);
        std::fflush(stdout);
    }
    if (failures > 0) {
        std::printf("%d of 14 criteria failed\n", failures);
        return 1;
    }
    std::printf("all 14 criteria pass\n");
    return 0;
}
