#include "flmpc/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "json.hpp"

#include "flmpc/errors.hpp"
#include "flmpc/prng.hpp"
#include "flmpc/transcript.hpp"

namespace flmpc {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

ExperimentConfig load_effective_config(const CliOptions& options) {
    if (options.config_path.empty()) throw ConfigError("--config is required");
    ExperimentConfig cfg = ExperimentConfig::load(options.config_path);
    if (!options.data_path.empty()) cfg.data_path = options.data_path;
    if (options.seed) cfg.fl.selection_seed = *options.seed;
    if (options.mode) {
        if (*options.mode == "det")
            cfg.mode = CheckMode::Deterministic;
        else if (*options.mode == "general")
            cfg.mode = CheckMode::General;
        else
            throw ConfigError("--mode must be det or general");
    }
    return cfg;
}

std::vector<CandidateClient> load_pool(const ExperimentConfig& cfg) {
    if (cfg.data_path.empty()) throw DatasetError("no dataset file configured");
    return load_datasets(cfg.data_path);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw TranscriptError("cannot write " + path.string());
    out << text;
}

std::string verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

void render_privacy_records(std::ostringstream& out, const PrivacyReport& report) {
    for (const auto& rec : report.records) {
        out << "record mode=" << check_mode_name(rec.mode) << " set=" << rec.set.str()
            << " distance=" << rec.distance.str() << " verdict=" << verdict(rec.pass)
            << " inputs=" << rec.inputs_canon << "\n";
    }
    for (const auto& w : report.witnesses) {
        out << "witness set=" << w.set.str() << " distance=" << w.distance.str()
            << " inputs_a=" << w.inputs_a << " inputs_b=" << w.inputs_b << "\n";
    }
}

json privacy_summary(const PrivacyReport& report) {
    std::size_t failures = 0;
    for (const auto& rec : report.records) failures += rec.pass ? 0 : 1;
    json j;
    j["overall"] = report.overall ? "PASS" : "FAIL";
    j["records"] = report.records.size();
    j["failures"] = failures;
    j["witnesses"] = report.witnesses.size();
    json ws = json::array();
    for (const auto& w : report.witnesses) {
        ws.push_back({{"set", w.set.str()},
                      {"distance", w.distance.str()},
                      {"inputs_a", w.inputs_a},
                      {"inputs_b", w.inputs_b}});
    }
    j["witness_list"] = ws;
    return j;
}

int cmd_run(const CliOptions& options, const ExperimentConfig& cfg) {
    auto pool = load_pool(cfg);
    MaskProvider masks;
    if (cfg.variant == Variant::Masked)
        masks = seeded_mask_provider(cfg.fl, cfg.fl.selection_seed);

    std::vector<PartyView> views;
    FlRunOutput out = run_fl(cfg.fl, pool, cfg.variant, masks, views);

    fs::create_directories(options.out_dir);
    write_transcript((fs::path(options.out_dir) / "transcript.txt").string(), views,
                     cfg.digest());
    write_model_file((fs::path(options.out_dir) / "model.txt").string(), out.final_model);

    std::cout << "final model:";
    for (const auto& r : out.final_model) std::cout << " " << r.str();
    std::cout << "\n";
    return exit_code::ok;
}

int cmd_ideal(const CliOptions& options, const ExperimentConfig& cfg) {
    auto pool = load_pool(cfg);
    std::vector<int> selected = select_clients(pool, cfg.fl.clients, cfg.fl.eligibility_min,
                                               cfg.fl.selection_seed);
    std::sort(selected.begin(), selected.end());

    std::vector<Value> inputs;
    for (int id : selected)
        for (const auto& c : pool)
            if (c.id == id) inputs.emplace_back(c.dataset);
    inputs.emplace_back(cfg.fl.model_or_zero());

    auto composed = composed_fl_functionality(cfg.fl);
    auto outputs = evaluate_functionality(composed, inputs, 0);
    const auto& model = std::get<RationalVector>(outputs.back());

    fs::create_directories(options.out_dir);
    write_model_file((fs::path(options.out_dir) / "model.txt").string(), model);

    std::cout << "ideal model:";
    for (const auto& r : model) std::cout << " " << r.str();
    std::cout << "\n";
    return exit_code::ok;
}

/// Informational sampled comparison for over-budget configurations: draws
/// seeded samples from both sides and reports a two-sample chi-square
/// statistic per record. Carries no acceptance weight.
int sampled_privacy(const CliOptions& options, const ExperimentConfig& cfg) {
    const int m = cfg.fl.arity();
    AggProtocol protocol(cfg.variant, cfg.fl.modulus, cfg.fl.dimension, m);
    AggSimulator simulator(cfg.variant, cfg.fl.modulus, cfg.fl.dimension, m);
    auto grid = agg_input_grid(cfg.fl.modulus, cfg.fl.dimension, m);

    std::ostringstream out;
    out << "flmpc-privacy-report 1\n";
    out << "protocol " << protocol.name() << "\n";
    out << "mode sampled\n";
    out << "samples " << cfg.sampling << "\n";
    out << "grid " << grid.size() << "\n";

    SplitMix64 rng(cfg.fl.selection_seed);
    for (const auto& inputs : grid) {
        for (const auto& set : cfg.corruption_sets) {
            SimInput si = make_sim_input(protocol, inputs, set, cfg.mode);
            std::map<std::string, std::uint64_t> real_counts, sim_counts;
            const std::uint64_t real_n = protocol.randomness_size();
            const std::uint64_t sim_n = simulator.randomness_size(si);
            for (std::uint64_t i = 0; i < cfg.sampling; ++i) {
                auto run = protocol.run(inputs, rng.next_below(real_n));
                real_counts[project_views(run.views, set).canon()] += 1;
                sim_counts[simulator.generate(si, rng.next_below(sim_n)).canon()] += 1;
            }
            // two-sample chi-square over the merged support
            double chi = 0.0;
            std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> merged;
            for (auto& [k, c] : real_counts) merged[k].first = c;
            for (auto& [k, c] : sim_counts) merged[k].second = c;
            for (auto& [k, ab] : merged) {
                double a = (double)ab.first, b = (double)ab.second;
                chi += (a - b) * (a - b) / (a + b);
            }
            out << "sampled-record set=" << set.str() << " chi2=" << chi
                << " inputs=" << canon_values(inputs) << "\n";
        }
    }
    out << "overall SAMPLED (informational, no acceptance weight)\n";

    fs::create_directories(options.out_dir);
    write_text(fs::path(options.out_dir) / "privacy-report.txt", out.str());
    json j;
    j["overall"] = "SAMPLED";
    j["samples"] = cfg.sampling;
    write_text(fs::path(options.out_dir) / "privacy-summary.json", j.dump(2) + "\n");
    std::cout << "privacy check: SAMPLED (informational)\n";
    return exit_code::ok;
}

int cmd_check_privacy(const CliOptions& options, const ExperimentConfig& cfg) {
    const int m = cfg.fl.arity();
    auto grid = agg_input_grid(cfg.fl.modulus, cfg.fl.dimension, m);

    AggProtocol protocol(cfg.variant, cfg.fl.modulus, cfg.fl.dimension, m);
    AggSimulator simulator(cfg.variant, cfg.fl.modulus, cfg.fl.dimension, m);

    PrivacyReport report;
    try {
        report = check_private_computation(protocol, simulator, grid, cfg.corruption_sets,
                                           cfg.mode, cfg.budget, options.workers);
    } catch (const BudgetError&) {
        if (cfg.sampling > 0) return sampled_privacy(options, cfg);
        throw;
    }

    std::ostringstream out;
    out << "flmpc-privacy-report 1\n";
    out << "protocol " << protocol.name() << "\n";
    out << "mode " << check_mode_name(cfg.mode) << "\n";
    out << "grid " << grid.size() << "\n";
    render_privacy_records(out, report);
    out << "overall " << verdict(report.overall) << "\n";

    fs::create_directories(options.out_dir);
    write_text(fs::path(options.out_dir) / "privacy-report.txt", out.str());
    write_text(fs::path(options.out_dir) / "privacy-summary.json",
               privacy_summary(report).dump(2) + "\n");

    std::cout << "privacy check: " << verdict(report.overall) << " (" << report.records.size()
              << " records, " << report.witnesses.size() << " witnesses)\n";
    return report.overall ? exit_code::ok : exit_code::privacy_fail;
}

int cmd_check_reduction(const CliOptions& options, const ExperimentConfig& cfg) {
    auto grid = reduction_dataset_grid(cfg.fl);
    Variant inner = cfg.variant;
    ReductionReport report = check_reduction(cfg.fl, grid, inner, cfg.corruption_sets,
                                             cfg.budget, options.workers);

    std::ostringstream out;
    out << "flmpc-reduction-report 1\n";
    out << "inner " << variant_name(inner) << "\n";
    out << "rounds " << cfg.fl.rounds << "\n";
    out << "grid " << grid.size() << "\n";
    out << "identity-composition " << (report.identity_composition ? "yes" : "no") << "\n";
    out << "outputs-equal " << (report.outputs_equal ? "yes" : "no") << "\n";
    for (const auto& mm : report.mismatches)
        out << "mismatch randomness=" << mm.randomness << " inputs=" << mm.inputs_canon << "\n";
    out << "premise-privacy " << verdict(report.oracle_privacy.overall) << "\n";
    out << "substituted-privacy " << verdict(report.substituted_privacy.overall) << "\n";
    render_privacy_records(out, report.substituted_privacy);
    out << "overall " << verdict(report.overall) << "\n";

    fs::create_directories(options.out_dir);
    write_text(fs::path(options.out_dir) / "reduction-report.txt", out.str());

    json j;
    j["overall"] = verdict(report.overall);
    j["outputs_equal"] = report.outputs_equal;
    j["identity_composition"] = report.identity_composition;
    j["premise_privacy"] = verdict(report.oracle_privacy.overall);
    j["substituted_privacy"] = verdict(report.substituted_privacy.overall);
    j["grid"] = grid.size();
    j["mismatches"] = report.mismatches.size();
    write_text(fs::path(options.out_dir) / "reduction-summary.json", j.dump(2) + "\n");

    std::cout << "reduction check: " << verdict(report.overall) << "\n";
    return report.overall ? exit_code::ok : exit_code::reduction_fail;
}

int cmd_report(const CliOptions& options) {
    fs::path path = fs::path(options.out_dir) / "transcript.txt";
    TranscriptData data = read_transcript(path.string());

    // validate the recorded views: strictly increasing sequence numbers and
    // identical sysparam payloads within each round
    std::map<std::uint32_t, std::vector<std::string>> sysparams_by_round;
    for (const auto& view : data.views) {
        std::uint64_t expected_seq = 0;
        for (const auto& e : view.entries()) {
            if (e.seq != expected_seq++)
                throw TranscriptError("party " + std::to_string(view.party()) +
                                      " has a sequence gap at " + std::to_string(e.seq));
            if (e.kind == EntryKind::SysParamIn)
                sysparams_by_round[e.round].push_back(canon(e.payload));
        }
    }
    for (const auto& [round, payloads] : sysparams_by_round)
        for (const auto& p : payloads)
            if (p != payloads.front())
                throw TranscriptError("round " + std::to_string(round) +
                                      " delivered diverging sysparams");

    std::cout << "transcript " << path.string() << "\n";
    std::cout << "digest " << data.digest << "\n";
    std::cout << "parties " << data.views.size() << "\n";
    for (const auto& view : data.views)
        std::cout << "party " << view.party() << " entries " << view.size() << "\n";
    std::cout << "valid\n";
    return exit_code::ok;
}

int dispatch(const CliOptions& options) {
    if (options.command == "report") return cmd_report(options);

    ExperimentConfig cfg = load_effective_config(options);
    if (options.command == "run") return cmd_run(options, cfg);
    if (options.command == "ideal") return cmd_ideal(options, cfg);
    if (options.command == "check-privacy") return cmd_check_privacy(options, cfg);
    if (options.command == "check-reduction") return cmd_check_reduction(options, cfg);
    throw ConfigError("unknown command '" + options.command + "'");
}

} // namespace

int run_cli(const CliOptions& options) {
    try {
        return dispatch(options);
    } catch (const ConfigError& e) {
        std::cerr << "error (config): " << e.what() << "\n";
        return exit_code::config;
    } catch (const DatasetError& e) {
        std::cerr << "error (dataset): " << e.what() << "\n";
        return exit_code::dataset;
    } catch (const InsufficientClientsError& e) {
        std::cerr << "error (insufficient-clients): " << e.what() << "\n";
        return exit_code::insufficient_clients;
    } catch (const OverflowError& e) {
        std::cerr << "error (overflow): " << e.what() << "\n";
        return exit_code::overflow;
    } catch (const BudgetError& e) {
        std::cerr << "error (budget): " << e.what() << "\n";
        return exit_code::budget;
    } catch (const TranscriptError& e) {
        std::cerr << "error (transcript): " << e.what() << "\n";
        return exit_code::transcript;
    } catch (const Error& e) {
        std::cerr << "error (protocol): " << e.what() << "\n";
        return exit_code::protocol;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code::unexpected;
    }
}

} // namespace flmpc
