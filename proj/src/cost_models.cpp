#include "proxima/cost_models.hpp"

#include "proxima/tree.hpp"

#include <cmath>
#include <stdexcept>

namespace proxima {

void LatencyConstants::validate() const
{
    if (!(aggregate_add_ms > 0 && aggregate_verify_ms > 0 && rtt_local_ms > 0 && rtt_regional_ms > 0 &&
          rtt_global_ms > 0 && tree_overhead_ms >= 0)) {
        throw std::invalid_argument("latency constants must be positive");
    }
}

const char* protocol_name(Protocol p)
{
    switch (p) {
    case Protocol::HotStuff: return "hotstuff";
    case Protocol::Flat: return "proxima_flat";
    case Protocol::Tree: return "proxima_tree";
    }
    return "unknown";
}

std::uint64_t pbft_messages(std::uint64_t n)
{
    if (n == 0) throw std::invalid_argument("pbft_messages: n must be >= 1");
    return 2 * n * n;
}

std::uint64_t hotstuff_messages(std::uint64_t n, double byz_frac, double p_miss)
{
    if (n == 0) throw std::invalid_argument("hotstuff_messages: n must be >= 1");
    const double nd = static_cast<double>(n);
    return static_cast<std::uint64_t>(std::llround(6.0 * nd + 2.0 * p_miss * (1.0 - byz_frac) * nd));
}

double network_latency(Protocol p, std::size_t levels, const LatencyConstants& c)
{
    switch (p) {
    case Protocol::HotStuff: return 4.0 * c.rtt_global_ms;
    case Protocol::Flat: return 3.0 * c.rtt_global_ms;
    case Protocol::Tree:
        if (levels < 2) throw std::invalid_argument("network_latency: tree needs at least 2 levels");
        return 2.0 * (c.rtt_local_ms + static_cast<double>(levels - 2) * c.rtt_regional_ms + c.rtt_global_ms);
    }
    throw std::invalid_argument("network_latency: unknown protocol");
}

double bls_latency(Protocol p, std::uint64_t n, double byz_frac, unsigned branching, unsigned cores,
                   const LatencyConstants& c)
{
    if (cores == 0) throw std::invalid_argument("bls_latency: cores must be >= 1");
    const double nd = static_cast<double>(n);
    const double honest = nd * (1.0 - byz_frac);
    switch (p) {
    case Protocol::Flat:
        return honest * c.aggregate_add_ms / cores + c.aggregate_verify_ms;
    case Protocol::HotStuff:
        return 3.0 * (nd * c.aggregate_add_ms / cores + c.aggregate_verify_ms);
    case Protocol::Tree: {
        const auto levels = static_cast<double>(tree_levels(n, branching));
        const double b = branching;
        const double leaf = b * (1.0 - byz_frac) * c.aggregate_add_ms + c.aggregate_verify_ms;
        return leaf + (levels - 1.0) * (b * c.aggregate_add_ms + c.aggregate_verify_ms);
    }
    }
    throw std::invalid_argument("bls_latency: unknown protocol");
}

std::string bls_formula(Protocol p)
{
    switch (p) {
    case Protocol::Flat: return "N(1-byz)*add/cores + verify";
    case Protocol::HotStuff: return "3*(N*add/cores + verify)";
    case Protocol::Tree: return "B(1-byz)*add + verify + (L-1)*(B*add + verify)";
    }
    return "unknown";
}

LatencyProjection finality_projection(Protocol p, std::uint64_t n, double byz_frac, unsigned branching,
                                      unsigned cores, const LatencyConstants& c)
{
    c.validate();
    LatencyProjection out;
    out.cores = cores;
    out.bls_ms = bls_latency(p, n, byz_frac, branching, cores, c);
    const std::size_t levels = p == Protocol::Tree ? tree_levels(n, branching) : 0;
    out.network_ms = network_latency(p, levels, c);
    if (p == Protocol::Tree) out.network_ms += c.tree_overhead_ms;
    out.total_ms = out.bls_ms + out.network_ms;
    out.formula = bls_formula(p);
    return out;
}

} // namespace proxima
