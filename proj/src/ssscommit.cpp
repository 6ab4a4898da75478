#include "qcw/ssscommit.hpp"

#include <algorithm>
#include <numeric>

#include "qcw/errors.hpp"

namespace qcw {

namespace {

void validate_params(const SssParams& params) {
    if (params.sigma < 1) throw ParameterError("sigma must be positive");
    if (!gf_supported(params.kappa)) throw ParameterError("unsupported field width");
    if ((1ll << params.kappa) <= 5ll * params.sigma)
        throw ParameterError("field too small for the evaluation points");
}

SssParams params_for_message(const std::vector<FieldElem>& m) {
    if (m.empty()) throw ParameterError("empty message");
    for (const auto& e : m)
        if (e.kappa != m[0].kappa) throw ParameterError("mixed field widths");
    SssParams params{static_cast<int>(m.size()), m[0].kappa};
    validate_params(params);
    return params;
}

void validate_share_vector(const SssParams& params,
                           const std::vector<FieldElem>& shares) {
    if (shares.size() != params.n_shares())
        throw ParameterError("wrong share count");
    for (const auto& e : shares)
        if (e.kappa != params.kappa) throw ParameterError("mixed field widths");
}

void validate_challenge(const SssParams& params, const Challenge& challenge) {
    if (challenge.subset.size() != static_cast<size_t>(params.sigma))
        throw ParameterError("challenge must name sigma positions");
    std::vector<size_t> seen;
    for (size_t i : challenge.subset) {
        if (i >= params.n_shares()) throw ParameterError("challenge index out of range");
        seen.push_back(i);
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        throw ParameterError("duplicate challenge index");
}

FieldElem share_point(const SssParams& params, size_t index) {
    return enc_point(static_cast<int64_t>(index) + 1, params.sigma, params.kappa);
}

Poly poly_through_first_block(const SssParams& params,
                              const std::vector<FieldElem>& shares) {
    std::vector<std::pair<FieldElem, FieldElem>> points;
    for (size_t i = 0; i < static_cast<size_t>(2 * params.sigma); ++i)
        points.push_back({share_point(params, i), shares[i]});
    return lagrange_interpolate(points);
}

std::vector<FieldElem> codeword_from_poly(const SssParams& params, const Poly& f) {
    std::vector<FieldElem> out;
    for (size_t i = 0; i < params.n_shares(); ++i)
        out.push_back(poly_eval(f, share_point(params, i)));
    return out;
}

std::vector<FieldElem> message_of_poly(const SssParams& params, const Poly& f) {
    std::vector<FieldElem> out;
    for (int j = 0; j < params.sigma; ++j)
        out.push_back(poly_eval(f, enc_point(-j, params.sigma, params.kappa)));
    return out;
}

size_t vec_distance(const std::vector<FieldElem>& a,
                    const std::vector<FieldElem>& b) {
    size_t d = 0;
    for (size_t i = 0; i < a.size(); ++i) d += a[i].value != b[i].value;
    return d;
}

bool lex_less(const std::vector<FieldElem>& a, const std::vector<FieldElem>& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i].value != b[i].value) return a[i].value < b[i].value;
    return false;
}

bool next_combination(std::vector<size_t>& idx, size_t n) {
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

// Gauss-Jordan over GF(2^kappa); free variables are set to zero and an
// inconsistent system yields nullopt.
std::optional<std::vector<FieldElem>> solve_linear(
    std::vector<std::vector<FieldElem>> mat, std::vector<FieldElem> rhs,
    int kappa) {
    size_t rows = mat.size();
    size_t cols = rows ? mat[0].size() : 0;
    std::vector<size_t> pivot_cols;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t pr = r;
        while (pr < rows && mat[pr][c].value == 0) ++pr;
        if (pr == rows) continue;
        std::swap(mat[pr], mat[r]);
        std::swap(rhs[pr], rhs[r]);
        FieldElem inv = gf_inv(mat[r][c]);
        for (size_t j = c; j < cols; ++j) mat[r][j] = gf_mul(mat[r][j], inv);
        rhs[r] = gf_mul(rhs[r], inv);
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || mat[i][c].value == 0) continue;
            FieldElem factor = mat[i][c];
            for (size_t j = c; j < cols; ++j)
                mat[i][j] = gf_add(mat[i][j], gf_mul(factor, mat[r][j]));
            rhs[i] = gf_add(rhs[i], gf_mul(factor, rhs[r]));
        }
        pivot_cols.push_back(c);
        ++r;
    }
    for (size_t i = r; i < rows; ++i)
        if (rhs[i].value != 0) return std::nullopt;
    std::vector<FieldElem> sol(cols, fe(0, kappa));
    for (size_t i = 0; i < r; ++i) sol[pivot_cols[i]] = rhs[i];
    return sol;
}

// Quotient of num by a monic den when the remainder is zero, else nullopt.
std::optional<Poly> poly_divide_exact(Poly num, const Poly& den, int kappa) {
    while (!num.empty() && num.back().value == 0) num.pop_back();
    if (num.empty()) return Poly{};
    size_t dd = den.size() - 1;
    if (num.size() < den.size()) return std::nullopt;
    Poly q(num.size() - dd, fe(0, kappa));
    for (size_t i = num.size(); i-- > dd;) {
        FieldElem coef = num[i];
        q[i - dd] = coef;
        if (coef.value == 0) continue;
        for (size_t j = 0; j <= dd; ++j)
            num[i - dd + j] = gf_add(num[i - dd + j], gf_mul(coef, den[j]));
    }
    for (const auto& e : num)
        if (e.value != 0) return std::nullopt;
    return q;
}

struct Decoded {
    std::vector<FieldElem> codeword;
    size_t distance = 0;
    bool flagged = false;
};

Decoded decode_enumerate(const SssParams& params,
                         const std::vector<FieldElem>& received) {
    size_t n = params.n_shares();
    size_t k = static_cast<size_t>(2 * params.sigma);
    std::vector<size_t> idx(k);
    std::iota(idx.begin(), idx.end(), size_t{0});
    Decoded best;
    best.distance = n + 1;
    bool tied = false;
    do {
        std::vector<std::pair<FieldElem, FieldElem>> points;
        for (size_t i : idx) points.push_back({share_point(params, i), received[i]});
        std::vector<FieldElem> cw =
            codeword_from_poly(params, lagrange_interpolate(points));
        size_t d = vec_distance(cw, received);
        if (d < best.distance) {
            best.codeword = cw;
            best.distance = d;
            tied = false;
        } else if (d == best.distance && cw != best.codeword) {
            tied = true;
            if (lex_less(cw, best.codeword)) best.codeword = cw;
        }
    } while (next_combination(idx, n));
    best.flagged = tied;
    return best;
}

std::optional<Decoded> decode_solver(const SssParams& params,
                                     const std::vector<FieldElem>& received) {
    size_t n = params.n_shares();
    size_t deg = static_cast<size_t>(2 * params.sigma);
    for (size_t e = 0; e <= static_cast<size_t>(params.sigma); ++e) {
        size_t nq = deg + e;
        std::vector<std::vector<FieldElem>> mat(
            n, std::vector<FieldElem>(nq + e, fe(0, params.kappa)));
        std::vector<FieldElem> rhs(n, fe(0, params.kappa));
        for (size_t i = 0; i < n; ++i) {
            FieldElem x = share_point(params, i);
            FieldElem xp = fe(1, params.kappa);
            for (size_t j = 0; j < nq; ++j) {
                mat[i][j] = xp;
                xp = gf_mul(xp, x);
            }
            xp = fe(1, params.kappa);
            for (size_t k = 0; k < e; ++k) {
                mat[i][nq + k] = gf_mul(received[i], xp);
                xp = gf_mul(xp, x);
            }
            rhs[i] = gf_mul(received[i], xp);  // xp is now x^e
        }
        auto sol = solve_linear(mat, rhs, params.kappa);
        if (!sol) continue;
        Poly q(sol->begin(), sol->begin() + static_cast<ptrdiff_t>(nq));
        Poly locator(sol->begin() + static_cast<ptrdiff_t>(nq), sol->end());
        locator.push_back(fe(1, params.kappa));
        auto f = poly_divide_exact(q, locator, params.kappa);
        if (!f) continue;
        if (f->size() > deg) continue;
        std::vector<FieldElem> cw = codeword_from_poly(params, *f);
        size_t d = vec_distance(cw, received);
        if (d <= e) return Decoded{cw, d, false};
    }
    return std::nullopt;
}

Decoded decode_received(const SssParams& params,
                        const std::vector<FieldElem>& received) {
    if (params.sigma <= 4) return decode_enumerate(params, received);
    if (auto hit = decode_solver(params, received)) return *hit;
    std::vector<FieldElem> cw =
        codeword_from_poly(params, poly_through_first_block(params, received));
    return Decoded{cw, vec_distance(cw, received), true};
}

Poly poly_mul_linear(const Poly& p, FieldElem root) {
    Poly out(p.size() + 1, fe(0, root.kappa));
    for (size_t i = 0; i < p.size(); ++i) {
        out[i + 1] = gf_add(out[i + 1], p[i]);
        out[i] = gf_add(out[i], gf_mul(p[i], root));
    }
    return out;
}

}  // namespace

ShareVector sss_share(const std::vector<FieldElem>& m,
                      const std::vector<FieldElem>& s) {
    if (m.size() != s.size())
        throw ParameterError("message and randomizer lengths differ");
    SssParams params = params_for_message(m);
    for (const auto& e : s)
        if (e.kappa != params.kappa) throw ParameterError("mixed field widths");

    std::vector<std::pair<FieldElem, FieldElem>> points;
    for (int j = 0; j < params.sigma; ++j)
        points.push_back({enc_point(-j, params.sigma, params.kappa), m[j]});
    for (int j = 0; j < params.sigma; ++j)
        points.push_back({share_point(params, static_cast<size_t>(j)), s[j]});
    Poly f = lagrange_interpolate(points);

    ShareVector out;
    out.params = params;
    out.shares = codeword_from_poly(params, f);
    out.message = m;
    out.randomizer = s;
    return out;
}

std::optional<std::vector<FieldElem>> sss_reconstruct(
    const SssParams& params,
    const std::vector<std::pair<size_t, FieldElem>>& points) {
    validate_params(params);
    size_t need = static_cast<size_t>(2 * params.sigma);
    if (points.size() < need) throw ParameterError("too few shares");
    std::vector<size_t> seen;
    for (const auto& [idx, val] : points) {
        if (idx >= params.n_shares()) throw ParameterError("share index out of range");
        if (val.kappa != params.kappa) throw ParameterError("mixed field widths");
        seen.push_back(idx);
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        throw ParameterError("duplicate share index");

    std::vector<std::pair<FieldElem, FieldElem>> base;
    for (size_t i = 0; i < need; ++i)
        base.push_back({share_point(params, points[i].first), points[i].second});
    Poly f = lagrange_interpolate(base);
    for (size_t i = need; i < points.size(); ++i)
        if (!(poly_eval(f, share_point(params, points[i].first)) == points[i].second))
            return std::nullopt;
    return message_of_poly(params, f);
}

bool shares_consistent(const SssParams& params,
                       const std::vector<FieldElem>& shares) {
    validate_params(params);
    validate_share_vector(params, shares);
    Poly f = poly_through_first_block(params, shares);
    for (size_t i = static_cast<size_t>(2 * params.sigma); i < shares.size(); ++i)
        if (!(poly_eval(f, share_point(params, i)) == shares[i])) return false;
    return true;
}

std::vector<FieldElem> message_from_shares(const SssParams& params,
                                           const std::vector<FieldElem>& shares) {
    validate_params(params);
    validate_share_vector(params, shares);
    return message_of_poly(params, poly_through_first_block(params, shares));
}

std::pair<SssCommitment, ShareOpenings> commit_shares(
    const CommitKey& key, const std::vector<FieldElem>& shares,
    const SssParams& params, Rng& rng) {
    validate_params(params);
    validate_share_vector(params, shares);
    SssCommitment com;
    com.params = params;
    ShareOpenings openings;
    for (const auto& share : shares) {
        std::vector<LweCommitment> block;
        std::vector<LweOpening> block_openings;
        for (int j = 0; j < params.kappa; ++j) {
            uint8_t bit = static_cast<uint8_t>((share.value >> j) & 1);
            auto [c, o] = lwe_commit(key, bit, rng);
            block.push_back(std::move(c));
            block_openings.push_back(std::move(o));
        }
        com.per_share.push_back(std::move(block));
        openings.push_back(std::move(block_openings));
    }
    return {std::move(com), std::move(openings)};
}

SssCommitResult commit_phase(const CommitKey& key,
                             const std::vector<FieldElem>& m, Rng& rng) {
    SssParams params = params_for_message(m);
    std::vector<FieldElem> s;
    for (int j = 0; j < params.sigma; ++j)
        s.push_back(fe(static_cast<uint32_t>(rng.bits_value(params.kappa)),
                       params.kappa));
    SssCommitResult out;
    out.shares = sss_share(m, s);
    auto [com, openings] = commit_shares(key, out.shares.shares, params, rng);
    out.com = std::move(com);
    out.openings = std::move(openings);
    return out;
}

Challenge sample_challenge(const SssParams& params, Rng& rng) {
    validate_params(params);
    return Challenge{rng.subset(params.n_shares(),
                                static_cast<size_t>(params.sigma))};
}

ShareOpenings openings_for_challenge(const ShareOpenings& all,
                                     const Challenge& challenge) {
    ShareOpenings out;
    for (size_t i : challenge.subset) {
        if (i >= all.size()) throw ParameterError("challenge index out of range");
        out.push_back(all[i]);
    }
    return out;
}

OpenOutcome open_phase(const CommitKey& key, const SssCommitment& com,
                       const std::vector<FieldElem>& sent_shares,
                       const Challenge& challenge,
                       const ShareOpenings& openings_on_challenge) {
    const SssParams& params = com.params;
    validate_params(params);
    validate_share_vector(params, sent_shares);
    validate_challenge(params, challenge);
    if (com.per_share.size() != params.n_shares())
        throw ParameterError("commitment share count mismatch");
    if (openings_on_challenge.size() != challenge.subset.size())
        throw ParameterError("one opening block per challenged share");

    if (!shares_consistent(params, sent_shares))
        return {OpenStatus::inconsistent_shares, {}};

    for (size_t idx = 0; idx < challenge.subset.size(); ++idx) {
        size_t i = challenge.subset[idx];
        const auto& block = com.per_share[i];
        const auto& ops = openings_on_challenge[idx];
        if (block.size() != static_cast<size_t>(params.kappa))
            throw ParameterError("commitment block width mismatch");
        if (ops.size() != static_cast<size_t>(params.kappa))
            return {OpenStatus::bad_opening, {}};
        for (int j = 0; j < params.kappa; ++j) {
            if (!lwe_verify(key, block[j], ops[j]))
                return {OpenStatus::bad_opening, {}};
            if (ops[j].bit != ((sent_shares[i].value >> j) & 1))
                return {OpenStatus::bad_opening, {}};
        }
    }
    return {OpenStatus::ok, message_from_shares(params, sent_shares)};
}

ExtractResult extract_commitment(const CommitKey& key, const SssCommitment& com) {
    if (key.mode != KeyMode::binding)
        throw UsageError("extraction needs a binding key");
    const SssParams& params = com.params;
    validate_params(params);
    if (com.per_share.size() != params.n_shares())
        throw ParameterError("commitment share count mismatch");

    std::vector<FieldElem> received;
    for (const auto& block : com.per_share) {
        if (block.size() != static_cast<size_t>(params.kappa))
            throw ParameterError("commitment block width mismatch");
        uint32_t v = 0;
        for (int j = 0; j < params.kappa; ++j)
            v |= static_cast<uint32_t>(lwe_extract(key, block[j])) << j;
        received.push_back(fe(v, params.kappa));
    }

    Decoded dec = decode_received(params, received);
    ExtractResult out;
    out.message = message_from_shares(params, dec.codeword);
    out.codeword = std::move(dec.codeword);
    out.distance = dec.distance;
    out.flagged = dec.flagged;
    return out;
}

OpenTranscript honest_open_transcript(const SssCommitResult& cr,
                                      const Challenge& challenge) {
    validate_challenge(cr.com.params, challenge);
    return {cr.shares.shares, challenge,
            openings_for_challenge(cr.openings, challenge)};
}

OpenTranscript trapdoor_open(const CommitKey& key, const SssCommitResult& cr,
                             const std::vector<FieldElem>& target,
                             const Challenge& challenge) {
    const SssParams& params = cr.com.params;
    validate_params(params);
    validate_challenge(params, challenge);
    if (target.size() != static_cast<size_t>(params.sigma))
        throw ParameterError("target message length mismatch");
    for (const auto& e : target)
        if (e.kappa != params.kappa) throw ParameterError("mixed field widths");

    std::vector<std::pair<FieldElem, FieldElem>> points;
    for (size_t i : challenge.subset)
        points.push_back({share_point(params, i), cr.shares.shares[i]});
    for (int j = 0; j < params.sigma; ++j)
        points.push_back({enc_point(-j, params.sigma, params.kappa), target[j]});
    Poly f = lagrange_interpolate(points);

    OpenTranscript out;
    out.sent_shares = codeword_from_poly(params, f);
    out.challenge = challenge;
    out.openings = openings_for_challenge(cr.openings, challenge);
    for (const auto& block : out.openings)
        for (const auto& op : block)
            if (op.subset.size() != key.params.m_samples)
                throw ParameterError("openings do not match the key");
    return out;
}

Bytes transcript_bytes(const OpenTranscript& t) {
    Bytes out;
    put_u64(out, t.sent_shares.size());
    for (const auto& e : t.sent_shares) {
        put_u64(out, e.value);
        out.push_back(static_cast<uint8_t>(e.kappa));
    }
    put_u64(out, t.challenge.subset.size());
    for (size_t i : t.challenge.subset) put_u64(out, i);
    put_u64(out, t.openings.size());
    for (const auto& block : t.openings) {
        put_u64(out, block.size());
        for (const auto& op : block) {
            out.push_back(op.bit);
            put_u64(out, op.subset.size());
            Bytes packed = pack_bits(op.subset);
            out.insert(out.end(), packed.begin(), packed.end());
        }
    }
    return out;
}

DivergentSharePair make_divergent_pair(const SssParams& params,
                                       const std::vector<FieldElem>& m,
                                       Rng& rng) {
    validate_params(params);
    if (m.size() != static_cast<size_t>(params.sigma))
        throw ParameterError("message length mismatch");

    DivergentSharePair out;
    std::vector<FieldElem> s;
    for (int j = 0; j < params.sigma; ++j)
        s.push_back(fe(static_cast<uint32_t>(rng.bits_value(params.kappa)),
                       params.kappa));
    out.near = sss_share(m, s);

    // g = f + c * prod over the first 2*sigma-1 share points of (X - x_j):
    // same degree bound, agreement exactly on those points, and every
    // message coordinate moves because the message points avoid the roots.
    uint64_t nonzero = 1 + rng.below((1ull << params.kappa) - 1);
    Poly diff = {fe(static_cast<uint32_t>(nonzero), params.kappa)};
    size_t agree = static_cast<size_t>(2 * params.sigma) - 1;
    for (size_t j = 0; j < agree; ++j)
        diff = poly_mul_linear(diff, share_point(params, j));

    Poly f = poly_through_first_block(params, out.near.shares);
    Poly g(std::max(f.size(), diff.size()), fe(0, params.kappa));
    for (size_t i = 0; i < f.size(); ++i) g[i] = gf_add(g[i], f[i]);
    for (size_t i = 0; i < diff.size(); ++i) g[i] = gf_add(g[i], diff[i]);

    out.far.params = params;
    out.far.shares = codeword_from_poly(params, g);
    out.far.message = message_of_poly(params, g);
    out.far.randomizer.assign(out.far.shares.begin(),
                              out.far.shares.begin() + params.sigma);

    out.midpoint = out.near.shares;
    for (size_t i = agree; i < agree + static_cast<size_t>(params.sigma); ++i)
        out.midpoint[i] = out.far.shares[i];
    return out;
}

}  // namespace qcw
