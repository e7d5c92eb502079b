#include "flmpc/functionality.hpp"

#include "flmpc/errors.hpp"

namespace flmpc {

std::vector<Value> evaluate_functionality(const MAryFunctionality& f,
                                          const std::vector<Value>& inputs,
                                          std::uint64_t randomness) {
    if (f.arity < 2) throw ArityError("functionality arity must be at least 2");
    if ((int)inputs.size() != f.arity)
        throw ArityError("expected " + std::to_string(f.arity) + " inputs, got " +
                         std::to_string(inputs.size()));
    if (randomness >= f.randomness_size)
        throw DomainError("randomness index " + std::to_string(randomness) +
                          " outside domain of size " + std::to_string(f.randomness_size));
    if (f.check_domain)
        for (int i = 0; i < f.arity; ++i) f.check_domain(i + 1, inputs[i]);
    std::vector<Value> out = f.eval(inputs, randomness);
    if ((int)out.size() != f.arity)
        throw ArityError("evaluation rule produced " + std::to_string(out.size()) +
                         " outputs for arity " + std::to_string(f.arity));
    return out;
}

MAryFunctionality compose(const CompositionPlan& plan) {
    if (plan.rounds.empty()) throw ThreadingError("composition of zero rounds");
    const int m = plan.rounds.front().arity;
    std::uint64_t total = 1;
    for (const auto& f : plan.rounds) {
        if (f.arity != m) throw ArityError("composition mixes arities");
        if (f.randomness_size == 0) throw DomainError("empty randomness domain");
        if (total > UINT64_MAX / f.randomness_size)
            throw DomainError("composed randomness domain exceeds 64 bits");
        total *= f.randomness_size;
    }

    MAryFunctionality composed;
    composed.arity = m;
    composed.randomness_size = total;
    composed.rule = "compose(" + std::to_string(plan.rounds.size()) + " rounds)";
    composed.check_domain = plan.rounds.front().check_domain;

    const auto rounds = plan.rounds;
    const auto threading = plan.threading;
    composed.eval = [rounds, threading, m](const std::vector<Value>& inputs,
                                           std::uint64_t r) -> std::vector<Value> {
        // Split the product index lexicographically, round 1 most significant.
        std::vector<std::uint64_t> digits(rounds.size());
        std::uint64_t rest = r;
        for (std::size_t j = rounds.size(); j-- > 0;) {
            digits[j] = rest % rounds[j].randomness_size;
            rest /= rounds[j].randomness_size;
        }

        std::vector<Value> current = inputs;
        std::vector<Value> outputs;
        for (std::size_t j = 0; j < rounds.size(); ++j) {
            try {
                outputs = evaluate_functionality(rounds[j], current, digits[j]);
            } catch (const DomainError& e) {
                if (j == 0) throw;
                // inputs were valid in round 1, so a later domain failure
                // means the threaded state does not fit the next round
                throw ThreadingError("round " + std::to_string(j + 1) +
                                     " rejected threaded state: " + e.what());
            }
            if (j + 1 < rounds.size()) {
                switch (threading) {
                    case ThreadingRule::ServerModel:
                        current[m - 1] = outputs[m - 1];
                        break;
                    case ThreadingRule::PartyOutputs:
                        current = outputs;
                        break;
                }
            }
        }
        return outputs;
    };
    return composed;
}

OracleBinding::OracleBinding(std::string outer_id, MAryFunctionality inner)
    : outer_id_(std::move(outer_id)),
      inner_(std::move(inner)),
      pending_(inner_.arity),
      answer_tapes_(inner_.arity) {}

void OracleBinding::submit_query(int party, Value query) {
    if (party < 1 || party > inner_.arity)
        throw DomainError("party index " + std::to_string(party) + " out of range");
    if (pending_[party - 1].has_value())
        throw TapeViolationError("party " + std::to_string(party) +
                                 " already queued a query for this call");
    pending_[party - 1] = std::move(query);
}

bool OracleBinding::query_pending(int party) const {
    return pending_.at(party - 1).has_value();
}

const std::vector<Value>& OracleBinding::answer_tape(int party) const {
    if (party < 1 || party > inner_.arity)
        throw DomainError("party index " + std::to_string(party) + " out of range");
    return answer_tapes_[party - 1];
}

void OracleBinding::record_answer(int party, std::uint64_t call_index, Value answer) {
    auto& tape = answer_tapes_.at(party - 1);
    if (tape.size() != call_index)
        throw TapeViolationError("answer tape of party " + std::to_string(party) +
                                 " already holds an answer for call " +
                                 std::to_string(call_index));
    tape.push_back(std::move(answer));
}

std::vector<Value> oracle_call(OracleBinding& binding, std::uint64_t randomness,
                               std::vector<PartyView>* views) {
    const int m = binding.inner_.arity;
    std::vector<Value> queries;
    queries.reserve(m);
    for (int party = 1; party <= m; ++party) {
        if (!binding.pending_[party - 1].has_value())
            throw IncompleteCallError("oracle call without a query from party " +
                                      std::to_string(party));
        queries.push_back(*binding.pending_[party - 1]);
    }

    std::vector<Value> answers = evaluate_functionality(binding.inner_, queries, randomness);

    const std::uint64_t call = binding.calls_completed_;
    for (int party = 1; party <= m; ++party)
        binding.record_answer(party, call, answers[party - 1]);
    for (auto& slot : binding.pending_) slot.reset();
    ++binding.calls_completed_;

    if (views) {
        if ((int)views->size() != m) throw ArityError("oracle call with wrong view count");
        auto round = (std::uint32_t)call;
        for (int party = 1; party <= m; ++party) {
            (*views)[party - 1].append(round, EntryKind::OracleQuery, queries[party - 1]);
            (*views)[party - 1].append(round, EntryKind::OracleAnswer, answers[party - 1]);
        }
    }
    return answers;
}

std::vector<Value> oracle_call(OracleBinding& binding, const std::vector<Value>& queries,
                               std::uint64_t randomness, std::vector<PartyView>* views) {
    if ((int)queries.size() != binding.arity())
        throw ArityError("oracle call expects " + std::to_string(binding.arity()) + " queries");
    for (int party = 1; party <= binding.arity(); ++party)
        binding.submit_query(party, queries[party - 1]);
    return oracle_call(binding, randomness, views);
}

namespace {

void require_client_vector(std::uint32_t q, std::size_t dim, int party, const Value& v) {
    const auto* fv = std::get_if<FieldVector>(&v);
    if (!fv || fv->modulus() != q || fv->dim() != dim)
        throw DomainError("party " + std::to_string(party) +
                          " input must be a vector over Z_" + std::to_string(q) +
                          " of dimension " + std::to_string(dim));
}

FieldVector sum_client_inputs(std::uint32_t q, std::size_t dim, int m,
                              const std::vector<Value>& inputs) {
    FieldVector total(q, dim);
    for (int i = 0; i < m - 1; ++i) total += std::get<FieldVector>(inputs[i]);
    return total;
}

} // namespace

MAryFunctionality identity_functionality(int arity) {
    MAryFunctionality f;
    f.arity = arity;
    f.rule = "identity";
    f.eval = [](const std::vector<Value>& inputs, std::uint64_t) { return inputs; };
    return f;
}

MAryFunctionality sum_to_server(std::uint32_t q, std::size_t dim, int arity) {
    MAryFunctionality f;
    f.arity = arity;
    f.rule = "sum-to-server";
    f.check_domain = [q, dim, arity](int party, const Value& v) {
        if (party < arity) {
            require_client_vector(q, dim, party, v);
        } else if (!std::holds_alternative<Bottom>(v)) {
            throw DomainError("server input must be the empty symbol");
        }
    };
    f.eval = [q, dim, arity](const std::vector<Value>& inputs, std::uint64_t) {
        std::vector<Value> out((std::size_t)arity, Value(Ack{}));
        out[arity - 1] = sum_client_inputs(q, dim, arity, inputs);
        return out;
    };
    return f;
}

MAryFunctionality padded_sum_to_server(std::uint32_t q, std::size_t dim, int arity) {
    MAryFunctionality f = sum_to_server(q, dim, arity);
    f.rule = "padded-sum-to-server";
    f.randomness_size = 1;
    for (std::size_t i = 0; i < dim; ++i) f.randomness_size *= q;
    f.eval = [q, dim, arity](const std::vector<Value>& inputs, std::uint64_t r) {
        FieldVector pad(q, dim);
        std::uint64_t rest = r;
        for (std::size_t i = dim; i-- > 0;) {
            pad.set(i, (std::uint32_t)(rest % q));
            rest /= q;
        }
        std::vector<Value> out((std::size_t)arity, Value(Ack{}));
        out[arity - 1] = sum_client_inputs(q, dim, arity, inputs) + pad;
        return out;
    };
    return f;
}

MAryFunctionality accumulating_sum(std::uint32_t q, std::size_t dim, int arity) {
    MAryFunctionality f;
    f.arity = arity;
    f.rule = "accumulating-sum";
    f.check_domain = [q, dim](int party, const Value& v) {
        require_client_vector(q, dim, party, v);
    };
    f.eval = [q, dim, arity](const std::vector<Value>& inputs, std::uint64_t) {
        std::vector<Value> out((std::size_t)arity, Value(Ack{}));
        out[arity - 1] =
            std::get<FieldVector>(inputs[arity - 1]) + sum_client_inputs(q, dim, arity, inputs);
        return out;
    };
    return f;
}

} // namespace flmpc
