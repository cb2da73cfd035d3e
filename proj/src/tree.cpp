#include "proxima/tree.hpp"

#include "proxima/parallel.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace proxima {

std::size_t TreeTopology::nonroot_nodes() const
{
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < level_sizes.size(); ++l) n += level_sizes[l];
    return n;
}

namespace {

std::vector<std::size_t> level_sizes_for(std::size_t n, unsigned branching)
{
    std::vector<std::size_t> sizes{(n + branching - 1) / branching};
    while (sizes.back() > 1) sizes.push_back((sizes.back() + branching - 1) / branching);
    if (sizes.size() == 1) sizes.push_back(1);
    return sizes;
}

struct NodeAggregate {
    Signature sig{};
    std::vector<std::size_t> signers;
};

} // namespace

std::size_t tree_levels(std::size_t n, unsigned branching)
{
    if (branching < 2) throw std::invalid_argument("tree: branching must be >= 2");
    if (n == 0) throw std::invalid_argument("tree: need at least one validator");
    return level_sizes_for(n, branching).size();
}

TreeTopology build_topology(std::size_t n, unsigned branching, std::optional<std::uint64_t> shuffle_seed)
{
    TreeTopology t;
    t.branching = branching;
    tree_levels(n, branching);  // argument checks
    t.level_sizes = level_sizes_for(n, branching);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (shuffle_seed) {
        Rng rng(*shuffle_seed);
        std::shuffle(order.begin(), order.end(), rng);
    }
    t.leaves.resize(t.level_sizes.front());
    t.leaf_of.assign(n, 0);
    for (std::size_t pos = 0; pos < n; ++pos) {
        const std::size_t leaf = pos / branching;
        t.leaves[leaf].push_back(order[pos]);
        t.leaf_of[order[pos]] = leaf;
    }
    return t;
}

bool root_accepts(const GroupSummary& child, const Digest& reference, const DistanceThreshold& tau)
{
    return child.count > 0 && distance(child.mean, reference) <= tau.value();
}

RoundResult run_tree_round(World& world, const TreeTopology& topology, const DistanceThreshold& tau,
                           const RoundOptions& options)
{
    if (topology.leaf_of.size() != world.size()) throw std::invalid_argument("tree: topology size does not match world");
    const std::size_t L = topology.levels();
    const auto top = static_cast<unsigned>(L - 1);

    world.begin_height();
    recover_from_suppression(world, top);

    RoundResult r;
    r.height = world.height();
    r.block_hash = world.block().hash;
    auto& cluster = r.cluster;
    cluster.reference = world.reference_digest();
    cluster.distances.assign(world.size(), 0.0);

    // Leaf leaders rotate with the height; a suppressing leader costs its
    // leaf a timeout and a resend.
    const std::size_t n_leaves = topology.leaf_count();
    // A leaf whose members all suppress stays silent and sends no summary.
    std::vector<std::optional<std::size_t>> leader(n_leaves);
    for (std::size_t leaf = 0; leaf < n_leaves; ++leaf) {
        const auto& members = topology.leaves[leaf];
        std::size_t pick = static_cast<std::size_t>(world.height() % members.size());
        std::size_t tries = 0;
        for (; tries < members.size() && world.suppresses(members[pick]); ++tries) {
            world.send_many(MessageKind::Phase1Digest, 0, members.size());
            world.send_many(MessageKind::ViewChange, 0, members.size());
            ++world.metrics().view_changes;
            pick = (pick + 1) % members.size();
        }
        if (tries < members.size()) leader[leaf] = members[pick];
    }

    // Phase 1 at the leaves.
    std::vector<std::vector<std::size_t>> leaf_included(n_leaves);
    std::vector<std::optional<GroupSummary>> summaries(n_leaves);
    for (std::size_t leaf = 0; leaf < n_leaves; ++leaf) {
        if (!leader[leaf]) {
            for (auto i : topology.leaves[leaf]) {
                cluster.excluded.push_back(i);
                (world.validator(i).byzantine() ? world.metrics().excluded_byz : world.metrics().excluded_honest)++;
            }
            continue;
        }
        const std::size_t head = *leader[leaf];
        std::vector<Digest> reported;
        for (auto i : topology.leaves[leaf]) {
            const Phase1Payload payload = world.phase1_payload(i);
            world.send(i, head, MessageKind::Phase1Digest, 0);
            const double d = distance(payload.digest, cluster.reference);
            cluster.distances[i] = d;
            const bool force = options.force_include_byzantine && world.validator(i).byzantine();
            if (d > tau.value() && !force) {
                cluster.excluded.push_back(i);
                (world.validator(i).byzantine() ? world.metrics().excluded_byz : world.metrics().excluded_honest)++;
                continue;
            }
            leaf_included[leaf].push_back(i);
            reported.push_back(payload.digest);
            const auto push = world.push_for(i, payload);
            if (!push.empty()) {
                world.send(head, i, MessageKind::TxPush, 0, push.size() * world.config().bytes.tx);
                world.deliver_push(i, push);
                cluster.pushed_tx_count += push.size();
                ++cluster.push_messages;
            }
        }
        if (!reported.empty()) summaries[leaf] = summarize(reported);
    }

    // Summaries up. Internal nodes merge without filtering; every non-root
    // node sends one summary, empty or not.
    std::vector<std::optional<GroupSummary>> level = std::move(summaries);
    std::vector<bool> accepted_child;
    std::optional<GroupSummary> root;
    for (std::size_t l = 0; l + 1 < L; ++l) {
        world.send_many(MessageKind::Summary, static_cast<unsigned>(l + 1), level.size());
        std::vector<std::vector<GroupSummary>> groups(topology.level_sizes[l + 1]);
        const bool into_root = l + 2 == L;
        if (into_root) accepted_child.assign(level.size(), false);
        for (std::size_t j = 0; j < level.size(); ++j) {
            if (!level[j]) continue;
            if (into_root) {
                if (!root_accepts(*level[j], cluster.reference, tau)) continue;
                accepted_child[j] = true;
            }
            groups[topology.parent(j)].push_back(*level[j]);
        }
        std::vector<std::optional<GroupSummary>> next(groups.size());
        for (std::size_t p = 0; p < groups.size(); ++p) {
            if (!groups[p].empty()) next[p] = merge_summaries(groups[p]);
        }
        level = std::move(next);
    }
    root = level.front();

    // Which leaves sit under an accepted root child.
    std::size_t span = 1;
    for (std::size_t l = 0; l + 2 < L; ++l) span *= topology.branching;
    std::vector<bool> leaf_live(n_leaves, false);
    for (std::size_t leaf = 0; leaf < n_leaves; ++leaf) leaf_live[leaf] = accepted_child[leaf / span];

    for (std::size_t leaf = 0; leaf < n_leaves; ++leaf) {
        if (!leaf_live[leaf]) {
            for (auto i : leaf_included[leaf]) cluster.excluded.push_back(i);
            continue;
        }
        cluster.included.insert(cluster.included.end(), leaf_included[leaf].begin(), leaf_included[leaf].end());
    }
    std::sort(cluster.included.begin(), cluster.included.end());
    std::sort(cluster.excluded.begin(), cluster.excluded.end());

    const bool root_ok = root && distance(root->mean, cluster.reference) <= tau.value();
    if (root) {
        cluster.variance = root->variance;
        cluster.mean = root->mean;
    }
    cluster.fast_path = root_ok && root->count >= quorum(world.size()) && root->variance <= kFastPathEpsilon &&
                        distance(root->mean, cluster.reference) <= kFastPathEpsilon;

    auto finality_down = [&] {
        for (std::size_t l = 0; l + 1 < L; ++l) {
            world.send_many(MessageKind::Finality, static_cast<unsigned>(l + 1), topology.level_sizes[l]);
        }
    };

    if (!root_ok) {
        world.metrics().finalized = false;
        r.metrics = world.metrics();
        return r;
    }
    if (cluster.fast_path && !options.force_include_byzantine) {
        finality_down();
        r.finality = FinalityKind::FastPath;
        world.metrics().fast_path = true;
        world.metrics().finalized = true;
        r.metrics = world.metrics();
        return r;
    }

    // Phase 2: commit requests down every edge, commits to leaf leaders.
    for (std::size_t l = 0; l + 1 < L; ++l) {
        world.send_many(MessageKind::CommitRequest, static_cast<unsigned>(l + 1), topology.level_sizes[l]);
    }
    const Hash256& h = world.block().hash;
    std::vector<CommitRecord> pool;
    std::vector<std::optional<NodeAggregate>> aggs(n_leaves);
    for (std::size_t leaf = 0; leaf < n_leaves; ++leaf) {
        if (!leaf_live[leaf]) continue;
        NodeAggregate node;
        for (auto i : leaf_included[leaf]) {
            world.send(*leader[leaf], i, MessageKind::CommitRequest, 0);
            const auto target = world.commit_target(i);
            if (!target) continue;
            const auto sig = world.sign_hash(i, *target);
            if (!sig) continue;
            world.send(i, *leader[leaf], MessageKind::Commit, 0);
            pool.push_back({i, *target, *sig});
            // The leaf leader keeps only valid commitments to the block hash.
            if (*target != h || !world.oracle().verify(world.publics()[i], ByteView(h), *sig)) continue;
            aggregate_into(node.sig, *sig);
            node.signers.push_back(i);
        }
        if (!node.signers.empty()) aggs[leaf] = std::move(node);
    }
    r.commits = pool.size();

    // Aggregates up; each parent checks its children's partial aggregates.
    for (std::size_t l = 0; l + 1 < L; ++l) {
        world.send_many(MessageKind::AggregateUp, static_cast<unsigned>(l + 1), aggs.size());
        std::vector<std::optional<NodeAggregate>> next(topology.level_sizes[l + 1]);
        for (std::size_t j = 0; j < aggs.size(); ++j) {
            if (!aggs[j]) continue;
            if (!world.oracle().verify_indices(aggs[j]->sig, aggs[j]->signers, world.publics(), ByteView(h))) continue;
            auto& parent = next[topology.parent(j)];
            if (!parent) parent = NodeAggregate{};
            aggregate_into(parent->sig, aggs[j]->sig);
            parent->signers.insert(parent->signers.end(), aggs[j]->signers.begin(), aggs[j]->signers.end());
        }
        aggs = std::move(next);
    }

    if (aggs.front()) {
        QuorumCertificate qc;
        qc.block_hash = h;
        qc.aggregate = aggs.front()->sig;
        qc.signers = SignerBitmap(world.size());
        for (auto i : aggs.front()->signers) qc.signers.set(i);
        if (world.oracle().verify_aggregate(qc, world.publics(), ByteView(h))) {
            r.certificate = std::move(qc);
            r.finality = FinalityKind::Certificate;
        }
    }
    r.certificates = assemble_certificates(world, pool);
    if (r.certificate) finality_down();

    world.metrics().finalized = r.finalized();
    r.metrics = world.metrics();
    return r;
}

CommitteeStats committee_compare(std::size_t n, std::size_t byzantine, std::size_t group, std::size_t trials,
                                 std::uint64_t seed)
{
    if (group == 0 || n == 0) throw std::invalid_argument("committee_compare: n and group must be positive");
    if (byzantine > n) throw std::invalid_argument("committee_compare: more Byzantine than validators");
    CommitteeStats s;
    s.leaves = (n + group - 1) / group;
    s.trials.resize(trials);
    parallel_for(static_cast<std::int64_t>(trials), [&](std::int64_t t) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        std::vector<std::uint8_t> is_byz(n, 0);
        std::fill(is_byz.begin(), is_byz.begin() + static_cast<std::ptrdiff_t>(byzantine), 1);
        std::shuffle(is_byz.begin(), is_byz.end(), rng);
        CommitteeTrial out;
        for (std::size_t start = 0; start < n; start += group) {
            const std::size_t end = std::min(n, start + group);
            const auto b = static_cast<std::size_t>(std::count(is_byz.begin() + static_cast<std::ptrdiff_t>(start),
                                                               is_byz.begin() + static_cast<std::ptrdiff_t>(end), 1));
            const std::size_t honest = (end - start) - b;
            if (b > (end - start) / 3) {
                ++out.failed_leaves;
            } else {
                out.bft_participants += honest;
            }
            out.distance_participants += honest;
        }
        s.trials[static_cast<std::size_t>(t)] = out;
    });
    for (const auto& t : s.trials) {
        s.mean_failed_leaves += static_cast<double>(t.failed_leaves);
        s.mean_bft_participants += static_cast<double>(t.bft_participants);
        s.mean_distance_participants += static_cast<double>(t.distance_participants);
    }
    if (trials > 0) {
        s.mean_failed_leaves /= static_cast<double>(trials);
        s.mean_bft_participants /= static_cast<double>(trials);
        s.mean_distance_participants /= static_cast<double>(trials);
    }
    return s;
}

} // namespace proxima
