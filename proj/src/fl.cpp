#include "flmpc/fl.hpp"

#include <algorithm>
#include <map>

#include "flmpc/errors.hpp"
#include "flmpc/prng.hpp"

namespace flmpc {

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::Plain: return "plain";
        case Variant::Oracle: return "oracle";
        case Variant::Masked: return "masked";
    }
    return "?";
}

Variant variant_from_name(const std::string& name) {
    if (name == "plain") return Variant::Plain;
    if (name == "oracle") return Variant::Oracle;
    if (name == "masked") return Variant::Masked;
    throw ConfigError("unknown protocol variant '" + name + "'");
}

RationalVector FlConfig::model_or_zero() const {
    RationalVector w = initial_model;
    w.resize(dimension, Rational(0));
    return w;
}

void FlConfig::validate() const {
    if (!is_prime(modulus)) throw ConfigError("modulus not prime");
    if (dimension < 1) throw ConfigError("dimension must be at least 1");
    if (clients < 1) throw ConfigError("at least one client required");
    if (rounds < 1) throw ConfigError("at least one round required");
    if (scale < 1) throw ConfigError("quantization scale must be at least 1");
    if (learning_rate <= Rational(0)) throw ConfigError("learning rate must be positive");
    if (initial_model.size() > dimension)
        throw ConfigError("initial model longer than the configured dimension");
    if (program != kProgramSqLinearStep)
        throw ConfigError("unknown training program '" + program + "'");
}

std::vector<int> select_clients(const std::vector<CandidateClient>& pool, int count,
                                std::size_t eligibility_min, std::uint64_t seed) {
    if (count < 1) throw DomainError("selection count must be at least 1");
    std::vector<int> eligible;
    for (const auto& c : pool)
        if (c.dataset.examples.size() >= eligibility_min) eligible.push_back(c.id);
    std::sort(eligible.begin(), eligible.end());
    eligible.erase(std::unique(eligible.begin(), eligible.end()), eligible.end());

    if ((int)eligible.size() < count)
        throw InsufficientClientsError("need " + std::to_string(count) +
                                       " eligible clients, have " +
                                       std::to_string(eligible.size()));

    SplitMix64 rng(seed);
    for (std::size_t i = eligible.size() - 1; i > 0; --i) {
        std::size_t j = (std::size_t)rng.next_below(i + 1);
        std::swap(eligible[i], eligible[j]);
    }
    eligible.resize(count);
    return eligible;
}

SysParam make_sysparam(const FlConfig& config, const RationalVector& model,
                       std::uint32_t round) {
    SysParam sp;
    sp.weights = model;
    sp.program = config.program;
    sp.round = round;
    sp.modulus = config.modulus;
    sp.scale = config.scale;
    return sp;
}

void broadcast_sysparam(const SysParam& sysparam, const std::vector<int>& selected,
                        std::vector<PartyView>& views) {
    const int clients = (int)views.size() - 1;
    for (int party : selected)
        if (party < 1 || party > clients)
            throw SelectionError("broadcast to unselected party " + std::to_string(party));
    views.back().append(sysparam.round, EntryKind::MessageOut, sysparam);
    for (int party : selected)
        views[party - 1].append(sysparam.round, EntryKind::SysParamIn, sysparam);
}

FieldVector client_update(const ClientDataset& dataset, const SysParam& sysparam) {
    const std::size_t d = sysparam.weights.size();
    const std::uint32_t q = sysparam.modulus;
    RationalVector gradient(d, Rational(0));
    for (const auto& ex : dataset.examples) {
        if (ex.features.size() != d)
            throw DomainError("example dimension " + std::to_string(ex.features.size()) +
                              " does not match model dimension " + std::to_string(d));
        Rational dot(0);
        for (std::size_t c = 0; c < d; ++c) dot += sysparam.weights[c] * ex.features[c];
        Rational residual = (dot - ex.label) * Rational(2);
        for (std::size_t c = 0; c < d; ++c) gradient[c] += residual * ex.features[c];
    }

    // the full centered range [-(q-1)/2, (q-1)/2] is representable
    const std::int64_t half = ((std::int64_t)q - 1) / 2;
    FieldVector update(q, d);
    for (std::size_t c = 0; c < d; ++c) {
        std::int64_t scaled = (gradient[c] * Rational((std::int64_t)sysparam.scale)).round_half_away();
        if (scaled > half || scaled < -half)
            throw OverflowError("scaled gradient component " + std::to_string(scaled) +
                                " does not fit the centered range of Z_" + std::to_string(q));
        update.encode(c, scaled);
    }
    return update;
}

FieldVector aggregate_plain(const std::vector<FieldVector>& updates) {
    if (updates.empty()) throw DomainError("aggregation of zero updates");
    FieldVector total = updates.front();
    for (std::size_t i = 1; i < updates.size(); ++i) total += updates[i];
    return total;
}

RationalVector model_update(const RationalVector& model, const FieldVector& aggregate,
                            int client_count, const Rational& learning_rate,
                            std::uint32_t scale, std::uint32_t modulus) {
    if (aggregate.modulus() != modulus) throw DomainError("aggregate modulus mismatch");
    if (aggregate.dim() != model.size()) throw DomainError("aggregate dimension mismatch");
    if (client_count < 1) throw DomainError("client count must be positive");

    const std::int64_t half = ((std::int64_t)modulus - 1) / 2;
    RationalVector next = model;
    for (std::size_t c = 0; c < model.size(); ++c) {
        std::int64_t dec = aggregate.decode(c);
        if (dec >= half || dec <= -half)
            throw OverflowError("aggregate decode " + std::to_string(dec) +
                                " outside the safe centered range of Z_" +
                                std::to_string(modulus));
        Rational step = learning_rate * Rational(dec, (std::int64_t)scale) /
                        Rational(client_count);
        next[c] = next[c] - step;
    }
    return next;
}

MAryFunctionality round_functionality(const FlConfig& config) {
    config.validate();
    const FlConfig cfg = config;
    const int m = config.arity();

    MAryFunctionality f;
    f.arity = m;
    f.rule = "fl-round";
    f.check_domain = [cfg, m](int party, const Value& v) {
        if (party < m) {
            const auto* ds = std::get_if<ClientDataset>(&v);
            if (!ds) throw DomainError("client input must be a dataset");
            for (const auto& ex : ds->examples)
                if (ex.features.size() != cfg.dimension)
                    throw DomainError("dataset dimension does not match the configuration");
        } else {
            const auto* w = std::get_if<RationalVector>(&v);
            if (!w || w->size() != cfg.dimension)
                throw DomainError("server input must be a model of dimension " +
                                  std::to_string(cfg.dimension));
        }
    };
    f.eval = [cfg, m](const std::vector<Value>& inputs, std::uint64_t) {
        const auto& model = std::get<RationalVector>(inputs[m - 1]);
        SysParam sp = make_sysparam(cfg, model, 0);
        std::vector<FieldVector> updates;
        updates.reserve(m - 1);
        for (int i = 0; i < m - 1; ++i)
            updates.push_back(client_update(std::get<ClientDataset>(inputs[i]), sp));
        FieldVector agg = aggregate_plain(updates);
        RationalVector next =
            model_update(model, agg, m - 1, cfg.learning_rate, cfg.scale, cfg.modulus);
        std::vector<Value> out((std::size_t)m, Value(Ack{}));
        out[m - 1] = next;
        return out;
    };
    return f;
}

MAryFunctionality composed_fl_functionality(const FlConfig& config) {
    CompositionPlan plan;
    plan.threading = ThreadingRule::ServerModel;
    plan.rounds.assign(config.rounds, round_functionality(config));
    return compose(plan);
}

MaskProvider seeded_mask_provider(const FlConfig& config, std::uint64_t seed) {
    const std::uint32_t q = config.modulus;
    const std::size_t d = config.dimension;
    const int clients = config.clients;
    return [q, d, clients, seed](std::uint32_t round) {
        return PairwiseMaskSet::from_seed(q, d, clients, seed, round);
    };
}

FlRunOutput run_fl(const FlConfig& config, const std::vector<CandidateClient>& pool,
                   Variant variant, const MaskProvider& masks,
                   std::vector<PartyView>& views) {
    config.validate();
    if (variant == Variant::Masked && !masks)
        throw DomainError("masked variant requires a mask provider");

    const int m = config.arity();
    std::vector<int> selected =
        select_clients(pool, config.clients, config.eligibility_min, config.selection_seed);
    std::sort(selected.begin(), selected.end());

    std::map<int, const ClientDataset*> datasets;
    for (const auto& c : pool) datasets.emplace(c.id, &c.dataset);

    views.clear();
    views.reserve(m);
    for (int party = 1; party <= m; ++party) views.emplace_back(party);

    // initial inputs: datasets for the selected clients, nothing for the server
    for (int i = 0; i < config.clients; ++i)
        views[i].append(0, EntryKind::Input, *datasets.at(selected[i]));
    views[m - 1].append(0, EntryKind::Input, Bottom{});

    std::vector<int> all_parties(config.clients);
    for (int i = 0; i < config.clients; ++i) all_parties[i] = i + 1;

    // one oracle binding per run so answer tapes accumulate across rounds
    OracleBinding binding("fl", sum_to_server(config.modulus, config.dimension, m));

    RationalVector model = config.model_or_zero();
    Trajectory trajectory;

    for (std::uint32_t round = 0; round < config.rounds; ++round) {
        SysParam sp = make_sysparam(config, model, round);
        broadcast_sysparam(sp, all_parties, views);

        std::vector<FieldVector> updates;
        updates.reserve(config.clients);
        for (int i = 0; i < config.clients; ++i)
            updates.push_back(client_update(*datasets.at(selected[i]), sp));

        FieldVector agg(config.modulus, config.dimension);
        switch (variant) {
            case Variant::Plain: {
                for (int i = 0; i < config.clients; ++i)
                    views[i].append(round, EntryKind::MessageOut, updates[i]);
                for (int i = 0; i < config.clients; ++i)
                    views[m - 1].append(round, EntryKind::MessageIn, updates[i]);
                agg = aggregate_plain(updates);
                break;
            }
            case Variant::Oracle: {
                std::vector<Value> queries(updates.begin(), updates.end());
                queries.emplace_back(Bottom{});
                auto answers = oracle_call(binding, queries, 0, &views);
                agg = std::get<FieldVector>(answers[m - 1]);
                break;
            }
            case Variant::Masked: {
                agg = secure_agg_round(updates, masks(round), views, round);
                break;
            }
        }

        model = model_update(model, agg, config.clients, config.learning_rate, config.scale,
                             config.modulus);
        for (int i = 0; i < config.clients; ++i) views[i].append(round, EntryKind::Output, Ack{});
        views[m - 1].append(round, EntryKind::Output, model);
        trajectory.models.push_back(model);
    }

    return FlRunOutput{model, std::move(trajectory)};
}

} // namespace flmpc
