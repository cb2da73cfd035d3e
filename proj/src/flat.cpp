#include "proxima/flat.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace proxima {

const char* finality_name(FinalityKind k)
{
    switch (k) {
    case FinalityKind::None: return "none";
    case FinalityKind::FastPath: return "fast_path";
    case FinalityKind::Certificate: return "certificate";
    }
    return "unknown";
}

void ReputationTable::record(std::size_t i, double distance)
{
    sum_.at(i) += distance;
    ++count_.at(i);
}

void ReputationTable::record_round(const ClusterResult& cluster)
{
    for (std::size_t i = 0; i < cluster.distances.size() && i < sum_.size(); ++i) {
        if (std::isfinite(cluster.distances[i])) record(i, cluster.distances[i]);
    }
}

double ReputationTable::mean(std::size_t i) const
{
    return count_.at(i) ? sum_.at(i) / static_cast<double>(count_.at(i)) : 0.0;
}

double ReputationTable::group_mean(std::size_t first, std::size_t last) const
{
    if (last <= first) return 0.0;
    double s = 0.0;
    for (std::size_t i = first; i < last; ++i) s += mean(i);
    return s / static_cast<double>(last - first);
}

std::size_t recover_from_suppression(World& world, unsigned level)
{
    std::size_t changes = 0;
    while (world.suppresses(world.aggregator())) {
        if (changes == world.size()) throw std::logic_error("every validator suppresses");
        // Phase-1 sends to the silent aggregator are wasted; after the
        // timeout every validator votes for the next one.
        world.send_many(MessageKind::Phase1Digest, level, world.size());
        world.send_many(MessageKind::ViewChange, level, world.size());
        world.rotate_aggregator();
        ++changes;
    }
    world.metrics().view_changes += changes;
    return changes;
}

ClusterResult run_phase1(World& world, const DistanceThreshold& tau, const RoundOptions& options)
{
    const std::size_t n = world.size();
    const std::size_t agg = world.aggregator();
    ClusterResult out;
    out.reference = world.reference_digest();
    out.distances.assign(n, 0.0);

    std::vector<Digest> reported;
    reported.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Phase1Payload payload = world.phase1_payload(i);
        world.send(i, agg, MessageKind::Phase1Digest);
        const double d = distance(payload.digest, out.reference);
        out.distances[i] = d;
        const bool force = options.force_include_byzantine && world.validator(i).byzantine();
        if (d > tau.value() && !force) {
            out.excluded.push_back(i);
            (world.validator(i).byzantine() ? world.metrics().excluded_byz : world.metrics().excluded_honest)++;
            continue;
        }
        out.included.push_back(i);
        reported.push_back(payload.digest);

        const auto push = world.push_for(i, payload);
        if (!push.empty()) {
            world.send(agg, i, MessageKind::TxPush, 0, push.size() * world.config().bytes.tx);
            world.deliver_push(i, push);
            out.pushed_tx_count += push.size();
            ++out.push_messages;
        }
    }

    if (!reported.empty()) {
        const GroupSummary s = summarize(reported);
        out.variance = s.variance;
        out.mean = s.mean;
    }
    out.fast_path = out.included.size() >= quorum(n) && out.variance <= kFastPathEpsilon &&
                    distance(out.mean, out.reference) <= kFastPathEpsilon;

    for (auto i : out.included) world.send(agg, i, MessageKind::ClusterAssign);
    return out;
}

std::vector<QuorumCertificate> assemble_certificates(const World& world, std::span<const CommitRecord> commits)
{
    std::map<Hash256, std::vector<const CommitRecord*>> by_hash;
    for (const auto& c : commits) by_hash[c.hash].push_back(&c);

    std::vector<QuorumCertificate> out;
    for (const auto& [hash, group] : by_hash) {
        QuorumCertificate qc;
        qc.block_hash = hash;
        qc.signers = SignerBitmap(world.size());
        std::vector<Signature> valid;
        for (const auto* c : group) {
            if (qc.signers.test(c->validator)) continue;
            if (!world.oracle().verify(world.publics()[c->validator], ByteView(hash), c->signature)) continue;
            qc.signers.set(c->validator);
            valid.push_back(c->signature);
        }
        if (valid.size() < quorum(world.size())) continue;
        qc.aggregate = aggregate(valid);
        if (world.oracle().verify_aggregate(qc, world.publics(), ByteView(hash))) out.push_back(std::move(qc));
    }
    return out;
}

Phase2Result run_phase2(World& world, const ClusterResult& cluster, const Block& block)
{
    const std::size_t agg = world.aggregator();
    Phase2Result out;
    std::vector<CommitRecord> commits;
    for (auto i : cluster.included) {
        const auto target = world.commit_target(i);
        if (!target) continue;
        const auto sig = world.sign_hash(i, *target);
        if (!sig) continue;
        world.send(i, agg, MessageKind::Commit);
        commits.push_back({i, *target, *sig});
    }
    out.commits = commits.size();
    out.certificates = assemble_certificates(world, commits);
    for (const auto& qc : out.certificates) {
        if (qc.block_hash == block.hash) {
            out.certificate = qc;
            out.valid_commits = qc.signers.count();
        }
    }
    if (out.certificate) {
        for (auto i : cluster.included) world.send(agg, i, MessageKind::Finality);
    }
    return out;
}

RoundResult run_round(World& world, const DistanceThreshold& tau, const RoundOptions& options)
{
    world.begin_height();
    recover_from_suppression(world);

    RoundResult r;
    r.height = world.height();
    r.block_hash = world.block().hash;
    r.cluster = run_phase1(world, tau, options);
    if (r.cluster.fast_path && !options.force_include_byzantine) {
        r.finality = FinalityKind::FastPath;
    } else {
        const auto p2 = run_phase2(world, r.cluster, world.block());
        r.commits = p2.commits;
        r.certificates = p2.certificates;
        r.certificate = p2.certificate;
        if (p2.certificate) r.finality = FinalityKind::Certificate;
    }
    world.metrics().fast_path = r.finality == FinalityKind::FastPath;
    world.metrics().finalized = r.finalized();
    r.metrics = world.metrics();
    return r;
}

ManyStats run_many(World& world, std::uint64_t rounds, const DistanceThreshold& tau)
{
    if (rounds == 0) throw std::invalid_argument("run_many: rounds must be >= 1");
    ManyStats s;
    s.reputation = ReputationTable(world.size());
    double messages = 0.0;
    double bytes = 0.0;
    double commits = 0.0;
    for (std::uint64_t r = 0; r < rounds; ++r) {
        const RoundResult rr = run_round(world, tau);
        ++s.rounds;
        if (rr.finalized()) ++s.finalized;
        if (rr.finality == FinalityKind::FastPath) ++s.fast_path;
        if (rr.certificates.size() > 1) ++s.conflicting_heights;
        messages += static_cast<double>(rr.metrics.messages);
        bytes += static_cast<double>(rr.metrics.bytes);
        commits += static_cast<double>(rr.commits);
        s.reputation.record_round(rr.cluster);
    }
    s.mean_messages = messages / static_cast<double>(rounds);
    s.mean_bytes = bytes / static_cast<double>(rounds);
    s.mean_commits = commits / static_cast<double>(rounds);
    return s;
}

} // namespace proxima
