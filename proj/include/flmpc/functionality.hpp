#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "flmpc/value.hpp"
#include "flmpc/view.hpp"

namespace flmpc {

/// A (possibly randomized) process mapping m party inputs to m party
/// outputs. Randomness is never ambient: it is a finite, enumerable domain
/// addressed by index, so callers can run the process once per point and
/// build exact distributions. Evaluation is a pure function of
/// (inputs, randomness index).
struct MAryFunctionality {
    int arity = 0;
    std::uint64_t randomness_size = 1;
    std::string rule;

    /// Pure evaluation rule: m inputs + randomness index -> m outputs.
    std::function<std::vector<Value>(const std::vector<Value>&, std::uint64_t)> eval;

    /// Optional per-party domain check; throws DomainError on violation.
    /// Party indices are 1-based.
    std::function<void(int, const Value&)> check_domain;
};

/// Runs the evaluation rule after validating arity, domains and the
/// randomness index.
std::vector<Value> evaluate_functionality(const MAryFunctionality& f,
                                          const std::vector<Value>& inputs,
                                          std::uint64_t randomness);

/// How one round's outputs become the next round's inputs.
enum class ThreadingRule {
    /// The server's output replaces the server's input; all client inputs
    /// persist unchanged. This is the federated-learning shape: the updated
    /// model flows forward, datasets stay put.
    ServerModel,
    /// Every party's output becomes its next input.
    PartyOutputs,
};

struct CompositionPlan {
    std::vector<MAryFunctionality> rounds;
    ThreadingRule threading = ThreadingRule::ServerModel;
};

/// Composes round functionalities into a single functionality applying
/// round 1 first. The randomness domain is the product of the rounds'
/// domains, enumerated lexicographically with round 1 most significant.
MAryFunctionality compose(const CompositionPlan& plan);

/// Oracle machinery for oracle-aided protocols: each party owns a
/// write-once-per-call query slot and a read-only, append-only answer tape.
/// An answer lands on every tape only once all m queries for the call are in.
class OracleBinding {
public:
    OracleBinding(std::string outer_id, MAryFunctionality inner);

    const std::string& outer_id() const { return outer_id_; }
    const MAryFunctionality& inner() const { return inner_; }
    int arity() const { return inner_.arity; }
    std::uint64_t calls_completed() const { return calls_completed_; }

    /// Stages party's query for the current call. Party indices 1-based.
    void submit_query(int party, Value query);
    bool query_pending(int party) const;

    /// Answer tape of one party, in call order.
    const std::vector<Value>& answer_tape(int party) const;

    /// Low-level tape append; rejects a second answer for the same call.
    void record_answer(int party, std::uint64_t call_index, Value answer);

    friend std::vector<Value> oracle_call(OracleBinding& binding, std::uint64_t randomness,
                                          std::vector<PartyView>* views);

private:
    std::string outer_id_;
    MAryFunctionality inner_;
    std::vector<std::optional<Value>> pending_;
    std::vector<std::vector<Value>> answer_tapes_;
    std::uint64_t calls_completed_ = 0;
};

/// Completes one oracle call: evaluates the inner functionality on the m
/// staged queries, writes answer i to party i's tape, and (when views are
/// given) appends one oracle-query and one oracle-answer entry per party.
/// Round recorded in the view entries is the number of completed calls so
/// far, which matches the per-round call pattern of the protocols here.
std::vector<Value> oracle_call(OracleBinding& binding, std::uint64_t randomness,
                               std::vector<PartyView>* views = nullptr);

/// Convenience: stage all m queries then call.
std::vector<Value> oracle_call(OracleBinding& binding, const std::vector<Value>& queries,
                               std::uint64_t randomness, std::vector<PartyView>* views = nullptr);

// Ready-made functionalities used across tests and protocols.

/// Every party's output is its own input.
MAryFunctionality identity_functionality(int arity);

/// Clients hold vectors over Z_q, the server holds Bottom; client outputs
/// are acks, the server's output is the sum of the client vectors.
MAryFunctionality sum_to_server(std::uint32_t q, std::size_t dim, int arity);

/// Like sum_to_server but the server's output is shifted by a uniform pad:
/// randomness index r in [0, q^dim) decodes to a pad vector base-q,
/// component 0 most significant.
MAryFunctionality padded_sum_to_server(std::uint32_t q, std::size_t dim, int arity);

/// Clients hold vectors over Z_q, the server holds a running total of the
/// same shape; server output = total + sum of client inputs. Composes under
/// ServerModel threading into a multi-round accumulator.
MAryFunctionality accumulating_sum(std::uint32_t q, std::size_t dim, int arity);

} // namespace flmpc
