#include "flmpc/simulation.hpp"

#include <algorithm>
#include <thread>

#include "flmpc/errors.hpp"

namespace flmpc {

CorruptionSet CorruptionSet::of(std::vector<int> parties) {
    CorruptionSet set{std::move(parties)};
    std::sort(set.parties.begin(), set.parties.end());
    set.parties.erase(std::unique(set.parties.begin(), set.parties.end()), set.parties.end());
    return set;
}

void CorruptionSet::validate(int arity) const {
    if (parties.empty()) throw DomainError("corrupted set must be non-empty");
    if (!std::is_sorted(parties.begin(), parties.end()))
        throw DomainError("corrupted set must be sorted");
    if (std::adjacent_find(parties.begin(), parties.end()) != parties.end())
        throw DomainError("corrupted set holds a duplicate index");
    if (parties.front() < 1 || parties.back() > arity)
        throw DomainError("corrupted party index out of range");
    if ((int)parties.size() > arity - 1)
        throw DomainError("at least one party must stay honest");
}

bool CorruptionSet::contains(int party) const {
    return std::binary_search(parties.begin(), parties.end(), party);
}

std::string CorruptionSet::str() const {
    std::string out = "{";
    for (std::size_t i = 0; i < parties.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(parties[i]);
    }
    return out + "}";
}

std::string JointView::canon() const {
    std::string out = netstring("corrupt " + set.str());
    for (const auto& v : views) out += v.canon();
    return out;
}

JointView project_views(const std::vector<PartyView>& all_views, const CorruptionSet& set) {
    set.validate((int)all_views.size());
    JointView jv;
    jv.set = set;
    for (int party : set.parties) jv.views.push_back(all_views[party - 1]);
    return jv;
}

ViewVault::ViewVault(std::vector<PartyView> views)
    : views_(std::move(views)), reads_(views_.size(), 0) {}

const PartyView& ViewVault::view(int party) const {
    if (party < 1 || party > (int)views_.size())
        throw DomainError("party index " + std::to_string(party) + " out of range");
    ++reads_[party - 1];
    return views_[party - 1];
}

std::uint64_t ViewVault::reads(int party) const { return reads_.at(party - 1); }

JointView project_views(const ViewVault& vault, const CorruptionSet& set) {
    set.validate(vault.arity());
    JointView jv;
    jv.set = set;
    for (int party : set.parties) jv.views.push_back(vault.view(party));
    return jv;
}

void ViewAccessAudit::absorb(const ViewVault& vault) {
    if (reads.size() < (std::size_t)vault.arity()) reads.resize(vault.arity(), 0);
    for (int party = 1; party <= vault.arity(); ++party) reads[party - 1] += vault.reads(party);
}

ViewDistribution ViewDistribution::from_counts(std::map<std::string, std::uint64_t> counts,
                                               std::uint64_t total, Provenance provenance) {
    if (total == 0) throw DomainError("distribution over zero points");
    std::uint64_t check = 0;
    ViewDistribution dist;
    for (auto& [key, count] : counts) {
        if (count == 0) continue;
        check += count;
        dist.mass_.emplace(key, Rational((std::int64_t)count, (std::int64_t)total));
    }
    if (check != total) throw DomainError("distribution counts do not cover the domain");
    dist.points_ = total;
    dist.provenance_ = provenance;
    return dist;
}

Rational ViewDistribution::total_mass() const {
    Rational sum(0);
    for (const auto& [key, p] : mass_) sum += p;
    return sum;
}

Rational tv_distance(const ViewDistribution& p, const ViewDistribution& q) {
    Rational acc(0);
    auto it_p = p.mass().begin();
    auto it_q = q.mass().begin();
    while (it_p != p.mass().end() || it_q != q.mass().end()) {
        if (it_q == q.mass().end() || (it_p != p.mass().end() && it_p->first < it_q->first)) {
            acc += it_p->second;
            ++it_p;
        } else if (it_p == p.mass().end() || it_q->first < it_p->first) {
            acc += it_q->second;
            ++it_q;
        } else {
            acc += (it_p->second - it_q->second).abs();
            ++it_p;
            ++it_q;
        }
    }
    return acc / Rational(2);
}

const char* check_mode_name(CheckMode m) {
    return m == CheckMode::Deterministic ? "deterministic-case" : "general-case";
}

// ---------------------------------------------------------------------------
// Aggregation protocol runner

AggProtocol::AggProtocol(Variant variant, std::uint32_t q, std::size_t dim, int arity)
    : variant_(variant), q_(q), dim_(dim), arity_(arity) {
    if (arity < 2) throw ArityError("aggregation needs at least two parties");
}

std::string AggProtocol::name() const {
    return std::string("agg-") + variant_name(variant_);
}

std::uint64_t AggProtocol::randomness_size() const {
    if (variant_ != Variant::Masked) return 1;
    return PairwiseMaskSet::domain_size(q_, dim_, arity_ - 1);
}

std::vector<Value> AggProtocol::ideal_outputs(const std::vector<Value>& inputs) const {
    return evaluate_functionality(sum_to_server(q_, dim_, arity_), inputs, 0);
}

AggProtocol::RunResult AggProtocol::run(const std::vector<Value>& inputs,
                                        std::uint64_t randomness) const {
    const int clients = arity_ - 1;
    if ((int)inputs.size() != arity_) throw ArityError("wrong input count");
    std::vector<FieldVector> xs;
    xs.reserve(clients);
    for (int i = 0; i < clients; ++i) xs.push_back(std::get<FieldVector>(inputs[i]));

    RunResult res;
    for (int party = 1; party <= arity_; ++party) res.views.emplace_back(party);
    for (int i = 0; i < clients; ++i) res.views[i].append(0, EntryKind::Input, xs[i]);
    res.views[arity_ - 1].append(0, EntryKind::Input, Bottom{});

    FieldVector agg(q_, dim_);
    switch (variant_) {
        case Variant::Plain: {
            for (int i = 0; i < clients; ++i) res.views[i].append(0, EntryKind::MessageOut, xs[i]);
            for (int i = 0; i < clients; ++i)
                res.views[arity_ - 1].append(0, EntryKind::MessageIn, xs[i]);
            agg = aggregate_plain(xs);
            break;
        }
        case Variant::Oracle: {
            OracleBinding binding("agg", sum_to_server(q_, dim_, arity_));
            auto answers = oracle_call(binding, inputs, 0, &res.views);
            agg = std::get<FieldVector>(answers[arity_ - 1]);
            break;
        }
        case Variant::Masked: {
            auto masks = PairwiseMaskSet::from_index(q_, dim_, clients, randomness);
            agg = secure_agg_round(xs, masks, res.views, 0);
            break;
        }
    }

    for (int i = 0; i < clients; ++i) res.views[i].append(0, EntryKind::Output, Ack{});
    res.views[arity_ - 1].append(0, EntryKind::Output, agg);

    res.outputs.assign((std::size_t)arity_, Value(Ack{}));
    res.outputs[arity_ - 1] = agg;
    return res;
}

// ---------------------------------------------------------------------------
// Full protocol runner

namespace {

std::uint64_t checked_pow(std::uint64_t base, std::uint32_t exp) {
    std::uint64_t out = 1;
    for (std::uint32_t i = 0; i < exp; ++i) {
        if (base != 0 && out > UINT64_MAX / base)
            throw BudgetError("randomness domain exceeds 64 bits");
        out *= base;
    }
    return out;
}

MaskProvider mask_provider_from_index(const FlConfig& config, std::uint64_t index) {
    const std::uint64_t per_round =
        PairwiseMaskSet::domain_size(config.modulus, config.dimension, config.clients);
    const std::uint32_t rounds = config.rounds;
    const FlConfig cfg = config;
    return [cfg, per_round, rounds, index](std::uint32_t round) {
        std::uint64_t digit = index;
        for (std::uint32_t later = round + 1; later < rounds; ++later) digit /= per_round;
        digit %= per_round;
        return PairwiseMaskSet::from_index(cfg.modulus, cfg.dimension, cfg.clients, digit);
    };
}

/// Model trajectory of the ideal pipeline, evaluated round by round.
Trajectory ideal_trajectory(const FlConfig& config, const std::vector<Value>& inputs) {
    auto round = round_functionality(config);
    std::vector<Value> current = inputs;
    Trajectory traj;
    for (std::uint32_t j = 0; j < config.rounds; ++j) {
        auto out = evaluate_functionality(round, current, 0);
        traj.models.push_back(std::get<RationalVector>(out.back()));
        current[current.size() - 1] = out.back();
    }
    return traj;
}

/// Per-round aggregates recovered from consecutive models:
/// decode(A_j) = (w_j - w_{j+1}) * clients * scale / lr, componentwise.
std::vector<FieldVector> aggregates_from_trajectory(const FlConfig& config,
                                                    const Trajectory& traj) {
    std::vector<FieldVector> aggs;
    RationalVector prev = config.model_or_zero();
    for (const auto& next : traj.models) {
        FieldVector agg(config.modulus, config.dimension);
        for (std::size_t c = 0; c < config.dimension; ++c) {
            Rational dec = (prev[c] - next[c]) * Rational(config.clients) *
                           Rational((std::int64_t)config.scale) / config.learning_rate;
            if (!dec.is_integer())
                throw DomainError("trajectory step is not a quantized aggregate");
            agg.encode(c, dec.num());
        }
        aggs.push_back(std::move(agg));
        prev = next;
    }
    return aggs;
}

} // namespace

FlProtocol::FlProtocol(Variant variant, FlConfig config)
    : variant_(variant), config_(std::move(config)) {
    config_.validate();
}

std::string FlProtocol::name() const { return std::string("fl-") + variant_name(variant_); }

std::uint64_t FlProtocol::randomness_size() const {
    if (variant_ != Variant::Masked) return 1;
    return checked_pow(
        PairwiseMaskSet::domain_size(config_.modulus, config_.dimension, config_.clients),
        config_.rounds);
}

std::vector<CandidateClient> FlProtocol::pool_from_inputs(const std::vector<Value>& inputs) const {
    if ((int)inputs.size() != config_.arity())
        throw ArityError("expected " + std::to_string(config_.arity()) + " protocol inputs");
    if (!std::holds_alternative<Bottom>(inputs.back()))
        throw DomainError("server input must be the empty symbol");
    std::vector<CandidateClient> pool;
    for (int i = 0; i < config_.clients; ++i) {
        const auto* ds = std::get_if<ClientDataset>(&inputs[i]);
        if (!ds) throw DomainError("client input must be a dataset");
        CandidateClient c;
        c.id = i + 1;
        c.dataset = *ds;
        c.dataset.owner = i + 1;
        pool.push_back(std::move(c));
    }
    return pool;
}

FlProtocol::RunResult FlProtocol::run(const std::vector<Value>& inputs,
                                      std::uint64_t randomness) const {
    auto pool = pool_from_inputs(inputs);
    MaskProvider masks;
    if (variant_ == Variant::Masked) masks = mask_provider_from_index(config_, randomness);

    RunResult res;
    FlRunOutput out = run_fl(config_, pool, variant_, masks, res.views);
    res.outputs.assign((std::size_t)config_.arity(), Value(Ack{}));
    res.outputs[config_.arity() - 1] = out.trajectory;
    return res;
}

std::vector<Value> FlProtocol::ideal_outputs(const std::vector<Value>& inputs) const {
    pool_from_inputs(inputs); // validates shape
    std::vector<Value> round_inputs = inputs;
    round_inputs[config_.arity() - 1] = config_.model_or_zero();
    Trajectory traj = ideal_trajectory(config_, round_inputs);
    return std::vector<Value>((std::size_t)config_.arity(), Value(traj));
}

// ---------------------------------------------------------------------------
// Simulators

namespace {

struct SplitSets {
    std::vector<int> corrupted_clients; // ascending
    std::vector<int> honest_clients;    // ascending
    bool server_corrupted = false;
};

SplitSets split_parties(const CorruptionSet& set, int arity) {
    SplitSets s;
    s.server_corrupted = set.contains(arity);
    for (int c = 1; c < arity; ++c) {
        if (set.contains(c))
            s.corrupted_clients.push_back(c);
        else
            s.honest_clients.push_back(c);
    }
    return s;
}

std::vector<std::pair<int, int>> adjacent_pairs(int clients,
                                                const std::vector<int>& corrupted_clients) {
    std::vector<std::pair<int, int>> out;
    for (auto [i, j] : PairwiseMaskSet::pairs(clients)) {
        bool adj = std::binary_search(corrupted_clients.begin(), corrupted_clients.end(), i) ||
                   std::binary_search(corrupted_clients.begin(), corrupted_clients.end(), j);
        if (adj) out.emplace_back(i, j);
    }
    return out;
}

/// Digit consumer over a base-q index, most significant digit first.
class BaseQDigits {
public:
    BaseQDigits(std::uint64_t index, std::uint32_t q, std::size_t cells)
        : q_(q), digits_(cells) {
        for (std::size_t i = cells; i-- > 0;) {
            digits_[i] = (std::uint32_t)(index % q);
            index /= q;
        }
        if (index != 0) throw DomainError("randomness index outside simulator domain");
    }

    std::uint32_t take() { return digits_.at(next_++); }

    FieldVector take_vector(std::size_t dim) {
        FieldVector v(q_, dim);
        for (std::size_t c = 0; c < dim; ++c) v.set(c, take());
        return v;
    }

private:
    std::uint32_t q_;
    std::vector<std::uint32_t> digits_;
    std::size_t next_ = 0;
};

/// Simulated client-side messages for one masked aggregation round.
struct MaskedRoundSim {
    PairwiseMaskSet masks;                 // adjacent pads sampled, rest zero
    std::map<int, FieldVector> messages;   // client -> masked update on the wire

    MaskedRoundSim(std::uint32_t q, std::size_t dim, int clients)
        : masks(q, dim, clients) {}
};

/// Plays the coset sampling shared by both simulators: corrupted-adjacent
/// pads are drawn uniformly, corrupted messages computed exactly, and (when
/// the server is corrupted) honest messages drawn uniformly subject to
/// summing to aggregate - sum(corrupted messages).
MaskedRoundSim simulate_masked_round(std::uint32_t q, std::size_t dim, int clients,
                                     const SplitSets& split,
                                     const std::map<int, FieldVector>& corrupted_updates,
                                     const FieldVector* aggregate, BaseQDigits& digits) {
    MaskedRoundSim sim(q, dim, clients);
    for (auto [i, j] : adjacent_pairs(clients, split.corrupted_clients))
        sim.masks.set_pad(i, j, digits.take_vector(dim));

    for (int c : split.corrupted_clients)
        sim.messages.emplace(c, mask_update(corrupted_updates.at(c), sim.masks, c));

    if (split.server_corrupted) {
        FieldVector residual = *aggregate;
        for (int c : split.corrupted_clients) residual -= sim.messages.at(c);
        FieldVector last = residual;
        for (std::size_t h = 0; h + 1 < split.honest_clients.size(); ++h) {
            FieldVector y = digits.take_vector(dim);
            last -= y;
            sim.messages.emplace(split.honest_clients[h], std::move(y));
        }
        sim.messages.emplace(split.honest_clients.back(), std::move(last));
    }
    return sim;
}

std::size_t masked_sim_cells(std::size_t dim, int clients, const SplitSets& split) {
    std::size_t cells = adjacent_pairs(clients, split.corrupted_clients).size() * dim;
    if (split.server_corrupted && !split.honest_clients.empty())
        cells += (split.honest_clients.size() - 1) * dim;
    return cells;
}

const FieldVector& server_output_of(const SimInput& input) {
    // the server is the highest index, hence last among corrupted outputs
    return std::get<FieldVector>(input.corrupted_outputs.back());
}

} // namespace

AggSimulator::AggSimulator(Variant variant, std::uint32_t q, std::size_t dim, int arity)
    : variant_(variant), q_(q), dim_(dim), arity_(arity) {}

std::string AggSimulator::name() const {
    return std::string("agg-sim-") + variant_name(variant_);
}

bool AggSimulator::supports(const CorruptionSet& set) const {
    if (set.parties.empty()) return false;
    if ((int)set.parties.size() > arity_ - 1) return false;
    return set.parties.front() >= 1 && set.parties.back() <= arity_;
}

std::uint64_t AggSimulator::randomness_size(const SimInput& input) const {
    if (variant_ != Variant::Masked) return 1;
    auto split = split_parties(input.set, arity_);
    return checked_pow(q_, (std::uint32_t)masked_sim_cells(dim_, arity_ - 1, split));
}

JointView AggSimulator::generate(const SimInput& input, std::uint64_t randomness) const {
    const int clients = arity_ - 1;
    auto split = split_parties(input.set, arity_);

    std::map<int, FieldVector> corrupted_inputs;
    for (std::size_t i = 0; i < input.set.parties.size(); ++i) {
        int party = input.set.parties[i];
        if (party <= clients)
            corrupted_inputs.emplace(party, std::get<FieldVector>(input.corrupted_inputs[i]));
    }

    // wire messages per corrupted-visible slot
    std::map<int, FieldVector> messages;
    std::map<int, MaskList> randomness_tapes;
    FieldVector aggregate(q_, dim_);
    if (split.server_corrupted) aggregate = server_output_of(input);

    switch (variant_) {
        case Variant::Masked: {
            BaseQDigits digits(randomness, q_, masked_sim_cells(dim_, clients, split));
            auto sim = simulate_masked_round(q_, dim_, clients, split, corrupted_inputs,
                                             split.server_corrupted ? &aggregate : nullptr,
                                             digits);
            messages = std::move(sim.messages);
            for (int c : split.corrupted_clients)
                randomness_tapes.emplace(c, sim.masks.masks_for_client(c));
            break;
        }
        case Variant::Plain: {
            for (int c : split.corrupted_clients) messages.emplace(c, corrupted_inputs.at(c));
            if (split.server_corrupted) {
                // canonical preimage: first honest slot carries the residual
                FieldVector residual = aggregate;
                for (int c : split.corrupted_clients) residual -= corrupted_inputs.at(c);
                for (std::size_t h = 0; h < split.honest_clients.size(); ++h)
                    messages.emplace(split.honest_clients[h],
                                     h == 0 ? residual : FieldVector(q_, dim_));
            }
            break;
        }
        case Variant::Oracle:
            for (int c : split.corrupted_clients) messages.emplace(c, corrupted_inputs.at(c));
            break;
    }

    JointView jv;
    jv.set = input.set;
    for (int party : input.set.parties) {
        PartyView view(party);
        if (party <= clients) {
            const FieldVector& x = corrupted_inputs.at(party);
            view.append(0, EntryKind::Input, x);
            switch (variant_) {
                case Variant::Plain:
                    view.append(0, EntryKind::MessageOut, x);
                    break;
                case Variant::Oracle:
                    view.append(0, EntryKind::OracleQuery, x);
                    view.append(0, EntryKind::OracleAnswer, Ack{});
                    break;
                case Variant::Masked:
                    view.append(0, EntryKind::Randomness, randomness_tapes.at(party));
                    view.append(0, EntryKind::MessageOut, messages.at(party));
                    break;
            }
            view.append(0, EntryKind::Output, Ack{});
        } else {
            view.append(0, EntryKind::Input, Bottom{});
            if (variant_ == Variant::Oracle) {
                view.append(0, EntryKind::OracleQuery, Bottom{});
                view.append(0, EntryKind::OracleAnswer, aggregate);
            } else {
                for (int c = 1; c <= clients; ++c)
                    view.append(0, EntryKind::MessageIn, messages.at(c));
            }
            view.append(0, EntryKind::Output, aggregate);
        }
        jv.views.push_back(std::move(view));
    }
    return jv;
}

FlSimulator::FlSimulator(Variant variant, FlConfig config)
    : variant_(variant), config_(std::move(config)) {
    config_.validate();
}

std::string FlSimulator::name() const {
    return std::string("fl-sim-") + variant_name(variant_);
}

bool FlSimulator::supports(const CorruptionSet& set) const {
    if (set.parties.empty()) return false;
    if ((int)set.parties.size() > config_.arity() - 1) return false;
    return set.parties.front() >= 1 && set.parties.back() <= config_.arity();
}

std::uint64_t FlSimulator::randomness_size(const SimInput& input) const {
    if (variant_ != Variant::Masked) return 1;
    auto split = split_parties(input.set, config_.arity());
    std::size_t cells = masked_sim_cells(config_.dimension, config_.clients, split);
    return checked_pow(checked_pow(config_.modulus, (std::uint32_t)cells), config_.rounds);
}

JointView FlSimulator::generate(const SimInput& input, std::uint64_t randomness) const {
    const int m = config_.arity();
    const int clients = config_.clients;
    auto split = split_parties(input.set, m);

    const Trajectory& traj = std::get<Trajectory>(input.corrupted_outputs.front());
    if (traj.models.size() != config_.rounds)
        throw DomainError("trajectory length does not match the configured rounds");
    std::vector<FieldVector> aggregates = aggregates_from_trajectory(config_, traj);

    std::map<int, const ClientDataset*> corrupted_datasets;
    for (std::size_t i = 0; i < input.set.parties.size(); ++i) {
        int party = input.set.parties[i];
        if (party <= clients)
            corrupted_datasets.emplace(party,
                                       &std::get<ClientDataset>(input.corrupted_inputs[i]));
    }

    const std::size_t cells_per_round = masked_sim_cells(config_.dimension, clients, split);
    BaseQDigits digits(variant_ == Variant::Masked ? randomness : 0, config_.modulus,
                       variant_ == Variant::Masked ? cells_per_round * config_.rounds : 0);

    // per-round wire data, computed up front in round order
    std::vector<std::map<int, FieldVector>> messages(config_.rounds);
    std::vector<std::map<int, MaskList>> tapes(config_.rounds);
    std::vector<std::map<int, FieldVector>> corrupted_updates(config_.rounds);
    std::vector<SysParam> sysparams;

    RationalVector model = config_.model_or_zero();
    for (std::uint32_t round = 0; round < config_.rounds; ++round) {
        SysParam sp = make_sysparam(config_, model, round);
        sysparams.push_back(sp);
        for (int c : split.corrupted_clients)
            corrupted_updates[round].emplace(c, client_update(*corrupted_datasets.at(c), sp));

        switch (variant_) {
            case Variant::Masked: {
                auto sim = simulate_masked_round(
                    config_.modulus, config_.dimension, clients, split,
                    corrupted_updates[round],
                    split.server_corrupted ? &aggregates[round] : nullptr, digits);
                messages[round] = std::move(sim.messages);
                for (int c : split.corrupted_clients)
                    tapes[round].emplace(c, sim.masks.masks_for_client(c));
                break;
            }
            case Variant::Plain: {
                for (int c : split.corrupted_clients)
                    messages[round].emplace(c, corrupted_updates[round].at(c));
                if (split.server_corrupted) {
                    FieldVector residual = aggregates[round];
                    for (int c : split.corrupted_clients)
                        residual -= corrupted_updates[round].at(c);
                    for (std::size_t h = 0; h < split.honest_clients.size(); ++h)
                        messages[round].emplace(
                            split.honest_clients[h],
                            h == 0 ? residual : FieldVector(config_.modulus, config_.dimension));
                }
                break;
            }
            case Variant::Oracle:
                break;
        }
        model = traj.models[round];
    }

    JointView jv;
    jv.set = input.set;
    for (int party : input.set.parties) {
        PartyView view(party);
        if (party <= clients) {
            view.append(0, EntryKind::Input, *corrupted_datasets.at(party));
            for (std::uint32_t round = 0; round < config_.rounds; ++round) {
                view.append(round, EntryKind::SysParamIn, sysparams[round]);
                switch (variant_) {
                    case Variant::Plain:
                        view.append(round, EntryKind::MessageOut,
                                    corrupted_updates[round].at(party));
                        break;
                    case Variant::Oracle:
                        view.append(round, EntryKind::OracleQuery,
                                    corrupted_updates[round].at(party));
                        view.append(round, EntryKind::OracleAnswer, Ack{});
                        break;
                    case Variant::Masked:
                        view.append(round, EntryKind::Randomness, tapes[round].at(party));
                        view.append(round, EntryKind::MessageOut, messages[round].at(party));
                        break;
                }
                view.append(round, EntryKind::Output, Ack{});
            }
        } else {
            view.append(0, EntryKind::Input, Bottom{});
            for (std::uint32_t round = 0; round < config_.rounds; ++round) {
                view.append(round, EntryKind::MessageOut, sysparams[round]);
                if (variant_ == Variant::Oracle) {
                    view.append(round, EntryKind::OracleQuery, Bottom{});
                    view.append(round, EntryKind::OracleAnswer, aggregates[round]);
                } else {
                    for (int c = 1; c <= clients; ++c)
                        view.append(round, EntryKind::MessageIn, messages[round].at(c));
                }
                view.append(round, EntryKind::Output, traj.models[round]);
            }
        }
        jv.views.push_back(std::move(view));
    }
    return jv;
}

// ---------------------------------------------------------------------------
// Enumeration and checks

ViewDistribution enumerate_real_distribution(const ProtocolRunner& runner,
                                             const std::vector<Value>& inputs,
                                             const CorruptionSet& set, CheckMode mode,
                                             std::uint64_t budget, int workers,
                                             ViewAccessAudit* audit) {
    set.validate(runner.arity());
    const std::uint64_t total = runner.randomness_size();
    if (total > budget)
        throw BudgetError("randomness domain of " + std::to_string(total) +
                          " points exceeds the budget of " + std::to_string(budget));

    std::string suffix;
    if (mode == CheckMode::General) suffix = canon_values(runner.ideal_outputs(inputs));

    const int nworkers = (int)std::min<std::uint64_t>(std::max(workers, 1), total);
    std::vector<std::map<std::string, std::uint64_t>> partial_counts(nworkers);
    std::vector<ViewAccessAudit> partial_audits(nworkers);
    std::vector<std::exception_ptr> worker_errors(nworkers);

    auto work = [&](int w) {
        try {
            std::uint64_t lo = total * w / nworkers;
            std::uint64_t hi = total * (w + 1) / nworkers;
            for (std::uint64_t r = lo; r < hi; ++r) {
                auto result = runner.run(inputs, r);
                ViewVault vault(std::move(result.views));
                JointView jv = project_views(vault, set);
                partial_counts[w][jv.canon() + suffix] += 1;
                partial_audits[w].absorb(vault);
            }
        } catch (...) {
            worker_errors[w] = std::current_exception();
        }
    };

    if (nworkers == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(nworkers);
        for (int w = 0; w < nworkers; ++w) threads.emplace_back(work, w);
        for (auto& t : threads) t.join();
    }
    for (auto& err : worker_errors)
        if (err) std::rethrow_exception(err);

    std::map<std::string, std::uint64_t> counts;
    for (auto& partial : partial_counts)
        for (auto& [key, count] : partial) counts[key] += count;
    if (audit) {
        for (auto& partial : partial_audits) {
            if (audit->reads.size() < partial.reads.size())
                audit->reads.resize(partial.reads.size(), 0);
            for (std::size_t i = 0; i < partial.reads.size(); ++i)
                audit->reads[i] += partial.reads[i];
        }
    }
    return ViewDistribution::from_counts(std::move(counts), total, Provenance::Real);
}

SimInput make_sim_input(const ProtocolRunner& runner, const std::vector<Value>& inputs,
                        const CorruptionSet& set, CheckMode mode) {
    set.validate(runner.arity());
    std::vector<Value> ideal = runner.ideal_outputs(inputs);
    SimInput si;
    si.set = set;
    for (int party : set.parties) {
        si.corrupted_inputs.push_back(inputs[party - 1]);
        si.corrupted_outputs.push_back(ideal[party - 1]);
    }
    if (mode == CheckMode::General) si.full_outputs = std::move(ideal);
    return si;
}

ViewDistribution simulate_distribution(const Simulator& sim, const SimInput& input,
                                       std::uint64_t budget) {
    if (!sim.supports(input.set))
        throw UnsupportedCorruptionError("simulator " + sim.name() +
                                         " does not accept corrupted set " + input.set.str());
    const std::uint64_t total = sim.randomness_size(input);
    if (total > budget)
        throw BudgetError("simulator randomness domain of " + std::to_string(total) +
                          " points exceeds the budget of " + std::to_string(budget));

    std::string suffix;
    if (input.full_outputs) suffix = canon_values(*input.full_outputs);

    std::map<std::string, std::uint64_t> counts;
    for (std::uint64_t r = 0; r < total; ++r)
        counts[sim.generate(input, r).canon() + suffix] += 1;
    return ViewDistribution::from_counts(std::move(counts), total, Provenance::Simulated);
}

PrivacyReport check_private_computation(const ProtocolRunner& runner, const Simulator& sim,
                                        const std::vector<std::vector<Value>>& input_grid,
                                        const std::vector<CorruptionSet>& sets, CheckMode mode,
                                        std::uint64_t budget, int workers,
                                        ViewAccessAudit* audit) {
    PrivacyReport report;
    report.overall = true;

    // real distributions kept per (set, input) for the witness search
    std::vector<std::vector<ViewDistribution>> reals(sets.size());
    std::vector<std::string> output_keys;

    for (const auto& inputs : input_grid) {
        output_keys.push_back(canon_values(runner.ideal_outputs(inputs)));
        for (std::size_t s = 0; s < sets.size(); ++s) {
            ViewDistribution real = enumerate_real_distribution(runner, inputs, sets[s], mode,
                                                                budget, workers, audit);
            SimInput si = make_sim_input(runner, inputs, sets[s], mode);
            ViewDistribution simulated = simulate_distribution(sim, si, budget);

            PrivacyRecord rec;
            rec.inputs_canon = canon_values(inputs);
            rec.set = sets[s];
            rec.mode = mode;
            rec.distance = tv_distance(real, simulated);
            rec.pass = rec.distance == Rational(0);
            report.overall = report.overall && rec.pass;
            report.records.push_back(std::move(rec));
            reals[s].push_back(std::move(real));
        }
    }

    if (!report.overall) {
        // inputs with equal functionality output but distinguishable real
        // views defeat any simulator fed only (I, x_I, f_I)
        for (std::size_t s = 0; s < sets.size(); ++s) {
            for (std::size_t a = 0; a < input_grid.size(); ++a) {
                for (std::size_t b = a + 1; b < input_grid.size(); ++b) {
                    if (output_keys[a] != output_keys[b]) continue;
                    Rational d = tv_distance(reals[s][a], reals[s][b]);
                    if (d > Rational(0)) {
                        report.witnesses.push_back(DistinguishWitness{
                            canon_values(input_grid[a]), canon_values(input_grid[b]), sets[s],
                            d});
                    }
                }
            }
        }
    }
    return report;
}

std::vector<std::vector<Value>> agg_input_grid(std::uint32_t q, std::size_t dim, int arity) {
    const int clients = arity - 1;
    std::uint64_t per_client = checked_pow(q, (std::uint32_t)dim);
    std::uint64_t total = checked_pow(per_client, (std::uint32_t)clients);

    std::vector<std::vector<Value>> grid;
    grid.reserve(total);
    for (std::uint64_t index = 0; index < total; ++index) {
        std::vector<Value> inputs;
        std::uint64_t rest = index;
        for (int i = 0; i < clients; ++i) {
            std::uint64_t cell = rest % per_client;
            rest /= per_client;
            FieldVector x(q, dim);
            for (std::size_t c = dim; c-- > 0;) {
                x.set(c, (std::uint32_t)(cell % q));
                cell /= q;
            }
            inputs.emplace_back(std::move(x));
        }
        inputs.emplace_back(Bottom{});
        grid.push_back(std::move(inputs));
    }
    return grid;
}

std::vector<std::vector<Value>> reduction_dataset_grid(const FlConfig& config) {
    config.validate();
    const int clients = config.clients;
    const std::size_t d = config.dimension;
    const std::size_t cells = (std::size_t)clients * d;

    std::uint64_t total = 1;
    for (std::size_t i = 0; i < cells; ++i) total *= 3;

    FlProtocol probe(Variant::Plain, config);
    std::vector<std::vector<Value>> grid;
    for (std::uint64_t index = 0; index < total; ++index) {
        // per-component update targets in {-1, 0, 1}
        std::vector<Value> inputs;
        std::uint64_t rest = index;
        for (int i = 0; i < clients; ++i) {
            ClientDataset ds;
            ds.owner = i + 1;
            for (std::size_t c = 0; c < d; ++c) {
                std::int64_t target = (std::int64_t)(rest % 3) - 1;
                rest /= 3;
                // one example per component: unit feature vector, label -t/2,
                // so the first-round gradient component is exactly t
                Example ex;
                ex.features.assign(d, Rational(0));
                ex.features[c] = Rational(1);
                ex.label = Rational(-target, 2);
                ds.examples.push_back(std::move(ex));
            }
            inputs.emplace_back(std::move(ds));
        }
        inputs.emplace_back(Bottom{});

        try {
            probe.run(inputs, 0);
        } catch (const OverflowError&) {
            continue; // not representable under this modulus; skip
        }
        grid.push_back(std::move(inputs));
    }
    return grid;
}

ReductionReport check_reduction(const FlConfig& config,
                                const std::vector<std::vector<Value>>& dataset_grid,
                                Variant inner, const std::vector<CorruptionSet>& sets,
                                std::uint64_t budget, int workers) {
    ReductionReport report;
    report.identity_composition = config.rounds == 1;

    FlProtocol oracle_fl(Variant::Oracle, config);
    FlProtocol substituted(inner, config);

    report.outputs_equal = true;
    for (const auto& inputs : dataset_grid) {
        auto expected = oracle_fl.run(inputs, 0).outputs;
        std::uint64_t total = substituted.randomness_size();
        if (total > budget)
            throw BudgetError("substituted randomness domain exceeds the budget");
        for (std::uint64_t r = 0; r < total; ++r) {
            auto got = substituted.run(inputs, r).outputs;
            if (canon_values(got) != canon_values(expected)) {
                report.outputs_equal = false;
                report.mismatches.push_back(OutputMismatch{canon_values(inputs), r});
            }
        }
    }

    auto run_both_modes = [&](const ProtocolRunner& runner, const Simulator& sim) {
        PrivacyReport merged;
        merged.overall = true;
        for (CheckMode mode : {CheckMode::Deterministic, CheckMode::General}) {
            PrivacyReport part = check_private_computation(runner, sim, dataset_grid, sets,
                                                           mode, budget, workers);
            merged.overall = merged.overall && part.overall;
            merged.records.insert(merged.records.end(), part.records.begin(),
                                  part.records.end());
            merged.witnesses.insert(merged.witnesses.end(), part.witnesses.begin(),
                                    part.witnesses.end());
        }
        return merged;
    };

    FlSimulator oracle_sim(Variant::Oracle, config);
    FlSimulator inner_sim(inner, config);
    report.oracle_privacy = run_both_modes(oracle_fl, oracle_sim);
    report.substituted_privacy = run_both_modes(substituted, inner_sim);

    report.overall = report.outputs_equal && report.substituted_privacy.overall;
    return report;
}

} // namespace flmpc
