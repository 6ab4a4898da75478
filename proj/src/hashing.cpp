#include "qcw/hashing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "qcw/errors.hpp"

namespace qcw {

HashFunc sample_hash(size_t n, size_t ell, bool strong, Rng& rng) {
    if (ell < 1 || ell > n)
        throw ParameterError("sample_hash: need 1 <= ell <= n");
    HashFunc h;
    h.n = n;
    h.ell = ell;
    h.strong = strong;
    for (size_t r = 0; r < ell; ++r) h.rows.push_back(rng.bit_string(n));
    h.offset = strong ? rng.bit_string(ell) : Bits(ell, 0);
    return h;
}

Bits apply_hash(const HashFunc& h, const Bits& x) {
    if (x.size() > h.n)
        throw ParameterError("apply_hash: input longer than n");
    Bits out(h.ell);
    for (size_t r = 0; r < h.ell; ++r) {
        uint8_t acc = h.offset[r];
        const Bits& row = h.rows[r];
        for (size_t c = 0; c < x.size(); ++c) acc ^= row[c] & x[c];
        out[r] = acc & 1;
    }
    return out;
}

Bytes serialize_hash(const HashFunc& h) {
    Bytes out;
    put_u64(out, h.n);
    put_u64(out, h.ell);
    out.push_back(h.strong ? 1 : 0);
    Bits flat;
    for (const auto& row : h.rows) flat.insert(flat.end(), row.begin(), row.end());
    flat.insert(flat.end(), h.offset.begin(), h.offset.end());
    Bytes packed = pack_bits(flat);
    out.insert(out.end(), packed.begin(), packed.end());
    return out;
}

HashFunc deserialize_hash(const Bytes& blob) {
    size_t pos = 0;
    HashFunc h;
    h.n = get_u64(blob, pos);
    h.ell = get_u64(blob, pos);
    // The width cap keeps ell*n from wrapping before the payload size check.
    if (h.n > (1u << 20)) throw FormatError("hash shape out of range");
    if (h.ell < 1 || h.ell > h.n) throw FormatError("hash shape out of range");
    if (pos >= blob.size()) throw FormatError("truncated hash record");
    uint8_t strong = blob[pos++];
    if (strong > 1) throw FormatError("bad strong flag");
    h.strong = strong == 1;
    size_t nbits = h.ell * h.n + h.ell;
    if (blob.size() - pos != (nbits + 7) / 8)
        throw FormatError("hash bit payload has the wrong size");
    Bits flat = unpack_bits(Bytes(blob.begin() + static_cast<ptrdiff_t>(pos),
                                  blob.end()),
                            nbits);
    size_t at = 0;
    for (size_t r = 0; r < h.ell; ++r) {
        h.rows.push_back(Bits(flat.begin() + static_cast<ptrdiff_t>(at),
                              flat.begin() + static_cast<ptrdiff_t>(at + h.n)));
        at += h.n;
    }
    h.offset = Bits(flat.begin() + static_cast<ptrdiff_t>(at), flat.end());
    if (!h.strong)
        for (uint8_t b : h.offset)
            if (b) throw FormatError("nonzero offset on a plain hash");
    return h;
}

double pa_bound(double hmin, double h0, size_t ell) {
    return 0.5 * std::pow(2.0, -(hmin - h0 - static_cast<double>(ell)) / 2.0);
}

double empirical_tvd(const std::vector<std::string>& a,
                     const std::vector<std::string>& b) {
    if (a.empty() || b.empty())
        throw ParameterError("empirical_tvd: empty sample set");
    std::map<std::string, double> pa, pb;
    for (const auto& s : a) pa[s] += 1.0 / static_cast<double>(a.size());
    for (const auto& s : b) pb[s] += 1.0 / static_cast<double>(b.size());
    double dist = 0;
    for (const auto& [k, p] : pa) {
        auto it = pb.find(k);
        dist += std::abs(p - (it == pb.end() ? 0.0 : it->second));
    }
    for (const auto& [k, p] : pb)
        if (!pa.count(k)) dist += p;
    return dist / 2.0;
}

PaResult pa_experiment(const Distribution& dist_x,
                       const std::vector<size_t>& leak_positions, size_t ell,
                       size_t trials, Rng& rng) {
    if (dist_x.bits < 1 || dist_x.bits > 16)
        throw ParameterError("pa_experiment: support limited to 2^16 outcomes");
    if (trials < 1)
        throw ParameterError("pa_experiment: need at least one trial");
    size_t n = static_cast<size_t>(dist_x.bits);
    if (ell < 1 || ell > n)
        throw ParameterError("pa_experiment: need 1 <= ell <= bits");
    std::set<size_t> seen;
    for (size_t pos : leak_positions) {
        if (pos >= n)
            throw ParameterError("pa_experiment: leak position out of range");
        if (!seen.insert(pos).second)
            throw ParameterError("pa_experiment: duplicate leak position");
    }

    // group the support by leak value
    struct Group {
        double weight = 0;
        std::vector<std::pair<uint64_t, double>> outcomes;
    };
    std::map<uint64_t, Group> groups;
    double total = 0;
    for (const auto& [x, p] : dist_x.probs) {
        if (p < -1e-12)
            throw ParameterError("pa_experiment: negative probability");
        if (p <= 0) continue;
        if (x >> n)
            throw ParameterError("pa_experiment: outcome wider than bits");
        uint64_t u = 0;
        for (size_t i = 0; i < leak_positions.size(); ++i)
            u |= ((x >> leak_positions[i]) & 1) << i;
        groups[u].weight += p;
        groups[u].outcomes.push_back({x, p});
        total += p;
    }
    if (groups.empty())
        throw ParameterError("pa_experiment: empty distribution");
    if (std::abs(total - 1.0) > 1e-9)
        throw ParameterError("pa_experiment: probabilities do not sum to 1");

    // worst-case conditional min-entropy over leak values
    double hmin = 1e300;
    for (const auto& [u, g] : groups) {
        double max_p = 0;
        for (const auto& [x, p] : g.outcomes) max_p = std::max(max_p, p);
        hmin = std::min(hmin, -std::log2(max_p / g.weight));
    }

    const double uniform = std::pow(2.0, -static_cast<double>(ell));
    double sum = 0, sum_sq = 0;
    for (size_t t = 0; t < trials; ++t) {
        HashFunc f = sample_hash(n, ell, false, rng);
        double dist_f = 0;
        for (const auto& [u, g] : groups) {
            std::map<uint64_t, double> hist;
            for (const auto& [x, p] : g.outcomes)
                hist[bits_to_uint(apply_hash(f, uint_to_bits(x, n)))] += p / g.weight;
            double d = 0;
            for (const auto& [z, q] : hist) d += std::abs(q - uniform);
            d += static_cast<double>((1ull << ell) - hist.size()) * uniform;
            dist_f += g.weight * d / 2.0;
        }
        sum += dist_f;
        sum_sq += dist_f * dist_f;
    }

    PaResult r;
    r.empirical = sum / static_cast<double>(trials);
    double var = sum_sq / static_cast<double>(trials) - r.empirical * r.empirical;
    r.std_err = std::sqrt(std::max(0.0, var) / static_cast<double>(trials));
    r.bound = pa_bound(hmin, 0, ell);
    return r;
}

}  // namespace qcw
