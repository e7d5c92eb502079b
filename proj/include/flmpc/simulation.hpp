#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "flmpc/fl.hpp"
#include "flmpc/functionality.hpp"
#include "flmpc/rational.hpp"
#include "flmpc/value.hpp"
#include "flmpc/view.hpp"

namespace flmpc {

/// Static, semi-honest corrupted set: sorted 1-based party indices, at
/// least one party corrupted and at least one honest.
struct CorruptionSet {
    std::vector<int> parties;

    static CorruptionSet of(std::vector<int> parties);

    void validate(int arity) const;
    bool contains(int party) const;
    std::size_t size() const { return parties.size(); }
    std::string str() const;
};

/// The corrupted set's views, ascending party order, as one object with a
/// canonical serialization usable as an exact distribution key.
struct JointView {
    CorruptionSet set;
    std::vector<PartyView> views;

    std::string canon() const;
};

JointView project_views(const std::vector<PartyView>& all_views, const CorruptionSet& set);

/// Holds one run's views behind access counters. Projection through a vault
/// records which parties' views were read; the simulator API never sees a
/// vault at all, so honest-view reads during simulation can be audited to
/// be exactly zero.
class ViewVault {
public:
    explicit ViewVault(std::vector<PartyView> views);

    int arity() const { return (int)views_.size(); }
    const PartyView& view(int party) const;
    std::uint64_t reads(int party) const;

private:
    std::vector<PartyView> views_;
    mutable std::vector<std::uint64_t> reads_;
};

JointView project_views(const ViewVault& vault, const CorruptionSet& set);

/// Per-party read totals accumulated across an enumeration.
struct ViewAccessAudit {
    std::vector<std::uint64_t> reads;

    void absorb(const ViewVault& vault);
};

enum class Provenance { Real, Simulated };

/// Exact probability distribution over canonically serialized joint views.
/// Probabilities are rationals with no rounding anywhere; total mass is
/// exactly 1 by construction.
class ViewDistribution {
public:
    static ViewDistribution from_counts(std::map<std::string, std::uint64_t> counts,
                                        std::uint64_t total, Provenance provenance);

    const std::map<std::string, Rational>& mass() const { return mass_; }
    std::size_t support_size() const { return mass_.size(); }
    std::uint64_t enumerated_points() const { return points_; }
    Provenance provenance() const { return provenance_; }
    Rational total_mass() const;

private:
    std::map<std::string, Rational> mass_;
    std::uint64_t points_ = 0;
    Provenance provenance_ = Provenance::Real;
};

/// (1/2) sum over the union of supports of |p(v) - q(v)|, exact.
Rational tv_distance(const ViewDistribution& p, const ViewDistribution& q);

/// Deterministic mode compares bare views; general mode compares
/// (views, functionality output) pairs and hands the simulator the full
/// output vector as an extra argument.
enum class CheckMode { Deterministic, General };

const char* check_mode_name(CheckMode m);

/// A protocol under test: pure function of (inputs, randomness index) to
/// (per-party views, per-party outputs), plus the functionality it is
/// supposed to compute.
class ProtocolRunner {
public:
    virtual ~ProtocolRunner() = default;

    virtual std::string name() const = 0;
    virtual int arity() const = 0;
    virtual std::uint64_t randomness_size() const = 0;

    struct RunResult {
        std::vector<PartyView> views;
        std::vector<Value> outputs;
    };
    virtual RunResult run(const std::vector<Value>& inputs, std::uint64_t randomness) const = 0;

    /// The functionality value f(x): one output per party, independent of
    /// the protocol randomness.
    virtual std::vector<Value> ideal_outputs(const std::vector<Value>& inputs) const = 0;
};

/// The one-round aggregation protocol on field-vector inputs (server input
/// is the empty symbol), in all three variants.
class AggProtocol : public ProtocolRunner {
public:
    AggProtocol(Variant variant, std::uint32_t q, std::size_t dim, int arity);

    std::string name() const override;
    int arity() const override { return arity_; }
    std::uint64_t randomness_size() const override;
    RunResult run(const std::vector<Value>& inputs, std::uint64_t randomness) const override;
    std::vector<Value> ideal_outputs(const std::vector<Value>& inputs) const override;

private:
    Variant variant_;
    std::uint32_t q_;
    std::size_t dim_;
    int arity_;
};

/// The full multi-round protocol on dataset inputs. The functionality it
/// computes (for privacy purposes) hands every party the model trajectory:
/// the per-round server outputs are re-broadcast as the next round's system
/// parameter, so the trajectory is the composition's legitimate interface.
class FlProtocol : public ProtocolRunner {
public:
    FlProtocol(Variant variant, FlConfig config);

    std::string name() const override;
    int arity() const override { return config_.arity(); }
    std::uint64_t randomness_size() const override;
    RunResult run(const std::vector<Value>& inputs, std::uint64_t randomness) const override;
    std::vector<Value> ideal_outputs(const std::vector<Value>& inputs) const override;

    const FlConfig& config() const { return config_; }
    Variant variant() const { return variant_; }

private:
    std::vector<CandidateClient> pool_from_inputs(const std::vector<Value>& inputs) const;

    Variant variant_;
    FlConfig config_;
};

/// Everything a simulator is allowed to see: the corrupted set, the
/// corrupted parties' inputs and functionality outputs, and in general mode
/// the full functionality output. Honest inputs and honest randomness are
/// structurally out of reach.
struct SimInput {
    CorruptionSet set;
    std::vector<Value> corrupted_inputs;
    std::vector<Value> corrupted_outputs;
    std::optional<std::vector<Value>> full_outputs;
};

class Simulator {
public:
    virtual ~Simulator() = default;

    virtual std::string name() const = 0;
    virtual bool supports(const CorruptionSet& set) const = 0;
    virtual std::uint64_t randomness_size(const SimInput& input) const = 0;
    virtual JointView generate(const SimInput& input, std::uint64_t randomness) const = 0;
};

/// Simulator for AggProtocol. For the masked variant it samples every pad
/// adjacent to a corrupted client, reproduces corrupted messages exactly,
/// and fills honest masked updates uniformly subject to their forced sum;
/// for the plain variant it emits the canonical preimage of the aggregate
/// (which is exactly what a sum-only simulator can do, and what the
/// distinguishability witnesses defeat); the oracle variant is
/// deterministic.
class AggSimulator : public Simulator {
public:
    AggSimulator(Variant variant, std::uint32_t q, std::size_t dim, int arity);

    std::string name() const override;
    bool supports(const CorruptionSet& set) const override;
    std::uint64_t randomness_size(const SimInput& input) const override;
    JointView generate(const SimInput& input, std::uint64_t randomness) const override;

private:
    Variant variant_;
    std::uint32_t q_;
    std::size_t dim_;
    int arity_;
};

/// Simulator for FlProtocol: recovers the per-round aggregates from the
/// model trajectory, recomputes corrupted client updates from corrupted
/// datasets, and plays the per-round aggregation simulation in the exact
/// entry layout of a real run.
class FlSimulator : public Simulator {
public:
    FlSimulator(Variant variant, FlConfig config);

    std::string name() const override;
    bool supports(const CorruptionSet& set) const override;
    std::uint64_t randomness_size(const SimInput& input) const override;
    JointView generate(const SimInput& input, std::uint64_t randomness) const override;

private:
    Variant variant_;
    FlConfig config_;
};

/// Runs the protocol once per randomness point and accumulates the exact
/// distribution of the projected joint view (uniform weight per point).
/// In general mode the functionality output is appended to every key.
ViewDistribution enumerate_real_distribution(const ProtocolRunner& runner,
                                             const std::vector<Value>& inputs,
                                             const CorruptionSet& set, CheckMode mode,
                                             std::uint64_t budget, int workers = 1,
                                             ViewAccessAudit* audit = nullptr);

/// Enumerates the simulator's randomness into an exact distribution over
/// simulated joint views (keys appended with the functionality output in
/// general mode, mirroring the real side).
ViewDistribution simulate_distribution(const Simulator& sim, const SimInput& input,
                                       std::uint64_t budget);

SimInput make_sim_input(const ProtocolRunner& runner, const std::vector<Value>& inputs,
                        const CorruptionSet& set, CheckMode mode);

struct PrivacyRecord {
    std::string inputs_canon;
    CorruptionSet set;
    CheckMode mode;
    Rational distance;
    bool pass;
};

/// Two inputs with identical functionality output whose real corrupted
/// views are nevertheless distinguishable: direct evidence that no
/// simulator fed only (I, x_I, f_I) can cover both.
struct DistinguishWitness {
    std::string inputs_a;
    std::string inputs_b;
    CorruptionSet set;
    Rational distance;
};

struct PrivacyReport {
    bool overall = false;
    std::vector<PrivacyRecord> records;
    std::vector<DistinguishWitness> witnesses;
};

/// For every input tuple and corrupted set: PASS iff the exact distance
/// between the real and simulated view distributions is zero. When any
/// record fails, inputs with equal functionality outputs are compared
/// pairwise to surface distinguishability witnesses.
PrivacyReport check_private_computation(const ProtocolRunner& runner, const Simulator& sim,
                                        const std::vector<std::vector<Value>>& input_grid,
                                        const std::vector<CorruptionSet>& sets, CheckMode mode,
                                        std::uint64_t budget, int workers = 1,
                                        ViewAccessAudit* audit = nullptr);

/// All (m-1)-tuples of client vectors over Z_q^d (server slot filled with
/// the empty symbol) — the canonical aggregation input grid.
std::vector<std::vector<Value>> agg_input_grid(std::uint32_t q, std::size_t dim, int arity);

/// Dataset tuples whose update vectors sweep the representable grid without
/// tripping the overflow guards: candidate per-component update targets in
/// {-1,0,1} are realized as single-example datasets and kept iff a plain
/// run of the configured protocol succeeds.
std::vector<std::vector<Value>> reduction_dataset_grid(const FlConfig& config);

struct OutputMismatch {
    std::string inputs_canon;
    std::uint64_t randomness;
};

struct ReductionReport {
    bool outputs_equal = false;
    std::vector<OutputMismatch> mismatches;
    PrivacyReport oracle_privacy;      // the reduction premise, both modes merged
    PrivacyReport substituted_privacy; // the composition conclusion, both modes merged
    bool identity_composition = false; // single-round runs compose trivially
    bool overall = false;
};

/// Instance-level test of the composition claim: the oracle-aided protocol
/// and the protocol with the realization substituted for the oracle must
/// produce identical outputs on the whole grid (for every substituted
/// randomness point), and the substituted protocol must still pass the
/// privacy check. Both check modes are exercised.
ReductionReport check_reduction(const FlConfig& config,
                                const std::vector<std::vector<Value>>& dataset_grid,
                                Variant inner, const std::vector<CorruptionSet>& sets,
                                std::uint64_t budget, int workers = 1);

} // namespace flmpc
