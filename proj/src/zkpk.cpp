#include "qcw/zkpk.hpp"

#include <algorithm>
#include <numeric>

#include "qcw/errors.hpp"

namespace qcw {

namespace {

void validate_graph(const Graph& g) {
    if (g.vertices < 3 || g.vertices > 256)
        throw ParameterError("vertex count out of range");
    if (g.adj.size() != g.vertices * g.vertices)
        throw ParameterError("adjacency size mismatch");
    for (size_t r = 0; r < g.vertices; ++r)
        for (size_t c = 0; c < g.vertices; ++c) {
            if (g.at(r, c) > 1) throw ParameterError("adjacency entry not a bit");
            if (r == c && g.at(r, c)) throw ParameterError("self loop");
        }
}

bool is_permutation(const std::vector<size_t>& p, size_t n) {
    if (p.size() != n) return false;
    std::vector<uint8_t> seen(n, 0);
    for (size_t v : p) {
        if (v >= n || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

bool dfs_cycle(const Graph& g, std::vector<size_t>& path,
               std::vector<uint8_t>& visited) {
    size_t cur = path.back();
    if (path.size() == g.vertices) return g.at(cur, path[0]) == 1;
    for (size_t next = 1; next < g.vertices; ++next) {
        if (visited[next] || !g.at(cur, next)) continue;
        visited[next] = 1;
        path.push_back(next);
        if (dfs_cycle(g, path, visited)) return true;
        path.pop_back();
        visited[next] = 0;
    }
    return false;
}

size_t perm_block_bits(size_t v) { return 8 * v; }

// Positions of the relabeled cycle arcs inside repetition rep.
std::vector<size_t> cycle_arc_positions(size_t v, size_t rep_base,
                                        const std::vector<size_t>& order) {
    std::vector<size_t> out;
    out.reserve(v);
    for (size_t t = 0; t < v; ++t) {
        size_t from = order[t];
        size_t to = order[(t + 1) % v];
        out.push_back(rep_base + perm_block_bits(v) + from * v + to);
    }
    return out;
}

void write_repetition(Bits& bits, size_t rep_base, const Graph& g,
                      const std::vector<size_t>& perm, const Graph& relabeled) {
    size_t v = g.vertices;
    for (size_t u = 0; u < v; ++u) {
        Bits field = uint_to_bits(perm[u], 8);
        for (size_t k = 0; k < 8; ++k) bits[rep_base + 8 * u + k] = field[k];
    }
    for (size_t r = 0; r < v; ++r)
        for (size_t c = 0; c < v; ++c)
            bits[rep_base + perm_block_bits(v) + r * v + c] = relabeled.at(r, c);
}

// True iff succ (a row->column map from v opened all-one arcs) is a single
// cycle through every vertex.
bool single_cycle(const std::vector<size_t>& succ) {
    size_t v = succ.size();
    size_t cur = 0;
    for (size_t t = 0; t + 1 < v; ++t) {
        cur = succ[cur];
        if (cur == 0) return false;
    }
    return succ[cur] == 0;
}

bool judge_zero(const Graph& g, const std::vector<uint8_t>& present,
                const std::vector<uint8_t>& value, size_t rep_bits) {
    size_t v = g.vertices;
    for (size_t off = 0; off < rep_bits; ++off)
        if (!present[off]) return false;
    std::vector<size_t> perm(v);
    for (size_t u = 0; u < v; ++u) {
        Bits field(8);
        for (size_t k = 0; k < 8; ++k) field[k] = value[8 * u + k];
        perm[u] = static_cast<size_t>(bits_to_uint(field));
    }
    if (!is_permutation(perm, v)) return false;
    Graph expected = permuted_graph(g, perm);
    for (size_t r = 0; r < v; ++r)
        for (size_t c = 0; c < v; ++c)
            if (value[perm_block_bits(v) + r * v + c] != expected.at(r, c))
                return false;
    return true;
}

bool judge_one(const Graph& g, const std::vector<uint8_t>& present,
               const std::vector<uint8_t>& value, size_t count) {
    size_t v = g.vertices;
    if (count != v) return false;
    constexpr size_t kUnset = static_cast<size_t>(-1);
    std::vector<size_t> succ(v, kUnset);
    std::vector<uint8_t> col_seen(v, 0);
    size_t rep_bits = present.size();
    for (size_t off = 0; off < rep_bits; ++off) {
        if (!present[off]) continue;
        if (off < perm_block_bits(v)) return false;
        if (!value[off]) return false;
        size_t r = (off - perm_block_bits(v)) / v;
        size_t c = (off - perm_block_bits(v)) % v;
        if (r == c) return false;
        if (succ[r] != kUnset || col_seen[c]) return false;
        succ[r] = c;
        col_seen[c] = 1;
    }
    for (size_t r = 0; r < v; ++r)
        if (succ[r] == kUnset) return false;
    return single_cycle(succ);
}

}  // namespace

bool is_valid_cycle(const Graph& g, const Cycle& cycle) {
    size_t v = g.vertices;
    if (!is_permutation(cycle, v) || v < 2) return false;
    for (size_t t = 0; t < v; ++t)
        if (!g.at(cycle[t], cycle[(t + 1) % v])) return false;
    return true;
}

std::vector<size_t> random_permutation(size_t n, Rng& rng) {
    std::vector<size_t> p(n);
    std::iota(p.begin(), p.end(), size_t{0});
    for (size_t i = n; i > 1; --i)
        std::swap(p[i - 1], p[rng.below(i)]);
    return p;
}

std::vector<size_t> inverse_permutation(const std::vector<size_t>& perm) {
    std::vector<size_t> inv(perm.size());
    for (size_t u = 0; u < perm.size(); ++u) inv[perm[u]] = u;
    return inv;
}

Graph permuted_graph(const Graph& g, const std::vector<size_t>& perm) {
    if (!is_permutation(perm, g.vertices))
        throw ParameterError("not a permutation of the vertices");
    Graph h;
    h.vertices = g.vertices;
    h.adj.assign(g.adj.size(), 0);
    for (size_t r = 0; r < g.vertices; ++r)
        for (size_t c = 0; c < g.vertices; ++c)
            if (g.at(r, c)) h.set(perm[r], perm[c], 1);
    return h;
}

std::optional<Cycle> find_ham_cycle(const Graph& g) {
    if (g.vertices < 2) return std::nullopt;
    std::vector<size_t> path{0};
    std::vector<uint8_t> visited(g.vertices, 0);
    visited[0] = 1;
    if (dfs_cycle(g, path, visited)) return path;
    return std::nullopt;
}

std::pair<Graph, Cycle> random_ham_graph(size_t v, double extra_edge_prob,
                                         Rng& rng) {
    if (v < 3 || v > 256) throw ParameterError("vertex count out of range");
    if (extra_edge_prob < 0.0 || extra_edge_prob > 1.0)
        throw ParameterError("edge probability out of range");
    Graph g;
    g.vertices = v;
    g.adj.assign(v * v, 0);
    Cycle order = random_permutation(v, rng);
    for (size_t t = 0; t < v; ++t) g.set(order[t], order[(t + 1) % v], 1);
    for (size_t r = 0; r < v; ++r)
        for (size_t c = 0; c < v; ++c) {
            if (r == c || g.at(r, c)) continue;
            if (rng.unit() < extra_edge_prob) g.set(r, c, 1);
        }
    return {g, order};
}

Bytes graph_bytes(const Graph& g) {
    Bytes out;
    put_u64(out, g.vertices);
    Bits adj(g.adj.begin(), g.adj.end());
    Bytes packed = pack_bits(adj);
    out.insert(out.end(), packed.begin(), packed.end());
    return out;
}

size_t ham_repetition_bits(const Graph& g) {
    return perm_block_bits(g.vertices) + g.vertices * g.vertices;
}

WitnessEncoding ham_encode_with(const Graph& g, const Cycle& witness,
                                const std::vector<std::vector<size_t>>& perms) {
    validate_graph(g);
    if (!is_valid_cycle(g, witness)) throw ParameterError("invalid witness");
    if (perms.empty()) throw ParameterError("no repetitions");
    size_t v = g.vertices;
    size_t rep_bits = ham_repetition_bits(g);
    WitnessEncoding enc;
    enc.bits.assign(perms.size() * rep_bits, 0);
    enc.cycle_positions.resize(perms.size());
    for (size_t i = 0; i < perms.size(); ++i) {
        const auto& perm = perms[i];
        if (!is_permutation(perm, v))
            throw ParameterError("not a permutation of the vertices");
        size_t base = i * rep_bits;
        write_repetition(enc.bits, base, g, perm, permuted_graph(g, perm));
        std::vector<size_t> relabeled_order(v);
        for (size_t t = 0; t < v; ++t) relabeled_order[t] = perm[witness[t]];
        enc.cycle_positions[i] = cycle_arc_positions(v, base, relabeled_order);
    }
    return enc;
}

OpenedBits ham_simulate_with(const Graph& g, const Bits& challenge,
                             const std::vector<std::vector<size_t>>& choices) {
    validate_graph(g);
    if (challenge.empty()) throw ParameterError("empty challenge");
    if (choices.size() != challenge.size())
        throw ParameterError("one choice per challenge bit");
    size_t v = g.vertices;
    size_t rep_bits = ham_repetition_bits(g);
    OpenedBits out;
    for (size_t i = 0; i < challenge.size(); ++i) {
        const auto& choice = choices[i];
        if (!is_permutation(choice, v))
            throw ParameterError("not a permutation of the vertices");
        size_t base = i * rep_bits;
        if (challenge[i] == 0) {
            Bits block(rep_bits, 0);
            write_repetition(block, 0, g, choice, permuted_graph(g, choice));
            for (size_t off = 0; off < rep_bits; ++off)
                out.push_back({base + off, block[off]});
        } else {
            for (size_t pos : cycle_arc_positions(v, base, choice))
                out.push_back({pos, 1});
        }
    }
    return out;
}

WitnessEncodingScheme ham_encoding(size_t sigma) {
    if (sigma < 1) throw ParameterError("at least one repetition");
    WitnessEncodingScheme scheme;
    scheme.sigma = sigma;
    scheme.length = [sigma](const Graph& g) {
        validate_graph(g);
        return sigma * ham_repetition_bits(g);
    };
    scheme.encode = [sigma](const Graph& g, const Cycle& w,
                            Rng& rng) -> std::optional<WitnessEncoding> {
        validate_graph(g);
        if (!is_valid_cycle(g, w)) return std::nullopt;
        std::vector<std::vector<size_t>> perms;
        perms.reserve(sigma);
        for (size_t i = 0; i < sigma; ++i)
            perms.push_back(random_permutation(g.vertices, rng));
        return ham_encode_with(g, w, perms);
    };
    scheme.decode = [sigma](const Graph& g,
                            const Bits& e) -> std::optional<Cycle> {
        validate_graph(g);
        size_t v = g.vertices;
        size_t rep_bits = ham_repetition_bits(g);
        if (e.size() != sigma * rep_bits)
            throw ParameterError("encoding length mismatch");
        for (size_t i = 0; i < sigma; ++i) {
            size_t base = i * rep_bits;
            std::vector<size_t> perm(v);
            for (size_t u = 0; u < v; ++u) {
                Bits field(e.begin() + static_cast<ptrdiff_t>(base + 8 * u),
                           e.begin() + static_cast<ptrdiff_t>(base + 8 * u + 8));
                perm[u] = static_cast<size_t>(bits_to_uint(field));
            }
            if (!is_permutation(perm, v)) continue;
            Graph h;
            h.vertices = v;
            h.adj.assign(v * v, 0);
            for (size_t r = 0; r < v; ++r)
                for (size_t c = 0; c < v; ++c)
                    h.set(r, c, e[base + perm_block_bits(v) + r * v + c]);
            auto relabeled_cycle = find_ham_cycle(h);
            if (!relabeled_cycle) continue;
            std::vector<size_t> inv = inverse_permutation(perm);
            Cycle w(v);
            for (size_t t = 0; t < v; ++t) w[t] = inv[(*relabeled_cycle)[t]];
            if (is_valid_cycle(g, w)) return w;
        }
        return std::nullopt;
    };
    scheme.select = [sigma](const Bits& s, const WitnessEncoding& enc) {
        if (s.size() != sigma) throw ParameterError("challenge width mismatch");
        if (enc.cycle_positions.size() != sigma)
            throw ParameterError("encoding repetition mismatch");
        size_t rep_bits = enc.bits.size() / sigma;
        std::vector<size_t> out;
        for (size_t i = 0; i < sigma; ++i) {
            if (s[i] == 0) {
                for (size_t off = 0; off < rep_bits; ++off)
                    out.push_back(i * rep_bits + off);
            } else {
                out.insert(out.end(), enc.cycle_positions[i].begin(),
                           enc.cycle_positions[i].end());
            }
        }
        return out;
    };
    scheme.judge = [sigma](const Graph& g, const Bits& s,
                           const OpenedBits& opened) {
        validate_graph(g);
        if (s.size() != sigma) throw ParameterError("challenge width mismatch");
        size_t rep_bits = ham_repetition_bits(g);
        size_t n = sigma * rep_bits;
        std::vector<std::vector<uint8_t>> present(
            sigma, std::vector<uint8_t>(rep_bits, 0));
        std::vector<std::vector<uint8_t>> value(
            sigma, std::vector<uint8_t>(rep_bits, 0));
        std::vector<size_t> counts(sigma, 0);
        for (const OpenedBit& ob : opened) {
            if (ob.position >= n || ob.bit > 1) return false;
            size_t rep = ob.position / rep_bits;
            size_t off = ob.position % rep_bits;
            if (present[rep][off]) return false;
            present[rep][off] = 1;
            value[rep][off] = ob.bit;
            ++counts[rep];
        }
        for (size_t i = 0; i < sigma; ++i) {
            bool ok = s[i] == 0
                          ? counts[i] == rep_bits &&
                                judge_zero(g, present[i], value[i], rep_bits)
                          : judge_one(g, present[i], value[i], counts[i]);
            if (!ok) return false;
        }
        return true;
    };
    scheme.simulate = [sigma](const Graph& g, const Bits& s, Rng& rng) {
        if (s.size() != sigma) throw ParameterError("challenge width mismatch");
        std::vector<std::vector<size_t>> choices;
        choices.reserve(sigma);
        for (size_t i = 0; i < sigma; ++i)
            choices.push_back(random_permutation(g.vertices, rng));
        return ham_simulate_with(g, s, choices);
    };
    scheme.cheat_encode = [sigma](const Graph& g, const Bits& guess, Rng& rng) {
        validate_graph(g);
        if (guess.size() != sigma)
            throw ParameterError("guess width mismatch");
        size_t v = g.vertices;
        size_t rep_bits = ham_repetition_bits(g);
        WitnessEncoding enc;
        enc.bits.assign(sigma * rep_bits, 0);
        enc.cycle_positions.resize(sigma);
        for (size_t i = 0; i < sigma; ++i) {
            size_t base = i * rep_bits;
            std::vector<size_t> perm = random_permutation(v, rng);
            std::vector<size_t> order = random_permutation(v, rng);
            if (guess[i] == 0) {
                write_repetition(enc.bits, base, g, perm,
                                 permuted_graph(g, perm));
            } else {
                Graph planted;
                planted.vertices = v;
                planted.adj.assign(v * v, 0);
                for (size_t t = 0; t < v; ++t)
                    planted.set(order[t], order[(t + 1) % v], 1);
                write_repetition(enc.bits, base, g, perm, planted);
            }
            enc.cycle_positions[i] = cycle_arc_positions(v, base, order);
        }
        return enc;
    };
    return scheme;
}

ZkpkResult zkpk_run(const WitnessEncodingScheme& scheme, const Graph& x,
                    const std::optional<Cycle>& witness, ZkpkProver prover,
                    const ZkpkConfig& cfg, SessionLog& session, Rng& alice_rng,
                    Rng& bob_rng) {
    validate_graph(x);
    ZkpkResult result;

    CommitKey key;
    if (cfg.key_override) {
        session.record('E', "substituted-key", {});
        key = *cfg.key_override;
    } else {
        if (cfg.kappa < 8) throw ParameterError("key width at least 8");
        CoinOutcome flip =
            coin_sequential(cfg.kappa, cfg.base, honest_committer(),
                            honest_responder(), session, alice_rng, bob_rng);
        if (flip.aborted) return result;
        key = key_from_coin(flip.value, cfg.params);
    }

    std::optional<WitnessEncoding> enc;
    if (prover == ZkpkProver::guess_cheat) {
        Bits guess = alice_rng.bit_string(scheme.sigma);
        enc = scheme.cheat_encode(x, guess, alice_rng);
    } else {
        if (witness) enc = scheme.encode(x, *witness, alice_rng);
        if (!enc) {
            session.record('A', "refuse", {});
            result.verdict = ZkpkVerdict::refused;
            return result;
        }
    }
    size_t n = enc->bits.size();

    session.record('A', "instance", graph_bytes(x));
    result.commitments.resize(n);
    std::vector<LweOpening> openings(n);
    Bytes commit_blob;
    for (size_t i = 0; i < n; ++i) {
        std::tie(result.commitments[i], openings[i]) =
            lwe_commit(key, enc->bits[i], alice_rng);
        Bytes one = serialize_commitment(result.commitments[i]);
        commit_blob.insert(commit_blob.end(), one.begin(), one.end());
    }
    session.record('A', "encoding-commitments", commit_blob);

    CoinOutcome challenge =
        coin_sequential(scheme.sigma, cfg.base, honest_committer(),
                        honest_responder(), session, alice_rng, bob_rng);
    if (challenge.aborted) return result;
    result.challenge = challenge.value;

    result.opened_positions = scheme.select(result.challenge, *enc);
    std::vector<std::pair<size_t, LweOpening>> sent;
    sent.reserve(result.opened_positions.size());
    for (size_t pos : result.opened_positions)
        sent.push_back({pos, openings[pos]});
    if (prover == ZkpkProver::corrupt_opening && !sent.empty())
        sent[0].second.bit ^= 1;
    Bytes open_blob;
    for (const auto& [pos, op] : sent) {
        put_u64(open_blob, pos);
        Bytes one = serialize_opening(op);
        open_blob.insert(open_blob.end(), one.begin(), one.end());
    }
    session.record('A', "challenge-openings", open_blob);

    OpenedBits opened;
    opened.reserve(sent.size());
    for (const auto& [pos, op] : sent) {
        if (pos >= n || !lwe_verify(key, result.commitments[pos], op)) {
            result.verdict = ZkpkVerdict::bad_opening;
            return result;
        }
        opened.push_back({pos, op.bit});
    }
    result.verdict = scheme.judge(x, result.challenge, opened)
                         ? ZkpkVerdict::success
                         : ZkpkVerdict::rejected;
    return result;
}

std::optional<Cycle> extract_witness(const WitnessEncodingScheme& scheme,
                                     const Graph& x, const CommitKey& key,
                                     const std::vector<LweCommitment>& coms) {
    Bits e(coms.size());
    for (size_t i = 0; i < coms.size(); ++i) e[i] = lwe_extract(key, coms[i]);
    return scheme.decode(x, e);
}

NizkSystem parity_nizk_double() {
    auto tag = [](const Bits& omega, const Bytes& statement) {
        Bytes material = pack_bits(omega);
        material.insert(material.end(), statement.begin(), statement.end());
        return chacha_expand_bytes(material, 16);
    };
    NizkSystem nizk;
    nizk.prove = [tag](const Bits& omega, const Bytes& statement, Rng&) {
        return tag(omega, statement);
    };
    nizk.verify = [tag](const Bits& omega, const Bytes& statement,
                        const Bytes& proof) {
        uint8_t parity = 0;
        for (uint8_t byte : statement) parity ^= byte;
        if (parity != 0) return false;
        return proof == tag(omega, statement);
    };
    return nizk;
}

IqzkResult iqzk_run(const Bytes& statement, const NizkSystem& nizk,
                    size_t kappa, const CoinProtocolConfig& base,
                    const CommitterPlan& alice_plan, SessionLog& session,
                    Rng& alice_rng, Rng& bob_rng) {
    if (kappa < 1) throw ParameterError("reference string width at least 1");
    CoinOutcome flip = coin_sequential(kappa, base, alice_plan,
                                       honest_responder(), session, alice_rng,
                                       bob_rng);
    IqzkResult out;
    if (flip.aborted) {
        out.coin_aborted = true;
        return out;
    }
    out.omega = flip.value;
    session.record('A', "statement", statement);
    Bytes proof = nizk.prove(out.omega, statement, alice_rng);
    session.record('A', "proof", proof);
    out.accepted = nizk.verify(out.omega, statement, proof);
    return out;
}

}  // namespace qcw
