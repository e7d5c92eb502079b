#include "flmpc/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "flmpc/errors.hpp"

namespace flmpc {

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    return hash;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string read_file(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(std::string(what) + " file not found: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::uint64_t parse_u64(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        std::uint64_t v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("junk");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected a non-negative integer, got '" + s + "'");
    }
}

CorruptionSet parse_corruption_set(const std::string& text, int arity,
                                   const std::string& where) {
    std::vector<int> parties;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        if (item == "server") {
            parties.push_back(arity);
        } else if (item == "clients") {
            for (int c = 1; c < arity; ++c) parties.push_back(c);
        } else {
            parties.push_back((int)parse_u64(item, where));
        }
    }
    if (parties.empty()) throw ConfigError(where + ": empty corrupted set");
    return CorruptionSet::of(std::move(parties));
}

RationalVector parse_model(const std::string& text, const std::string& where) {
    RationalVector w;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        try {
            w.push_back(Rational::parse(tok));
        } catch (const std::exception&) {
            throw ConfigError(where + ": expected rationals, got '" + tok + "'");
        }
    }
    return w;
}

} // namespace

void ExperimentConfig::validate() const {
    fl.validate();
    if (budget < 1) throw ConfigError("budget must be at least 1");
    for (const auto& set : corruption_sets) {
        try {
            set.validate(fl.arity());
        } catch (const DomainError& e) {
            throw ConfigError(std::string("corruption: ") + e.what());
        }
    }
}

std::string ExperimentConfig::canonical_text() const {
    std::ostringstream out;
    out << "budget = " << budget << "\n";
    out << "clients = " << fl.clients << "\n";
    out << "corruption =";
    for (std::size_t i = 0; i < corruption_sets.size(); ++i)
        out << (i ? " ;" : "") << " " << corruption_sets[i].str();
    out << "\n";
    out << "data = " << data_path << "\n";
    out << "dimension = " << fl.dimension << "\n";
    out << "eligibility_min = " << fl.eligibility_min << "\n";
    out << "initial_model =";
    for (const auto& r : fl.model_or_zero()) out << " " << r.str();
    out << "\n";
    out << "learning_rate = " << fl.learning_rate.str() << "\n";
    out << "mode = " << (mode == CheckMode::Deterministic ? "det" : "general") << "\n";
    out << "modulus = " << fl.modulus << "\n";
    out << "program = " << fl.program << "\n";
    out << "rounds = " << fl.rounds << "\n";
    out << "sampling = " << sampling << "\n";
    out << "scale = " << fl.scale << "\n";
    out << "selection_seed = " << fl.selection_seed << "\n";
    out << "variant = " << variant_name(variant) << "\n";
    return out.str();
}

std::string ExperimentConfig::digest() const {
    std::uint64_t h = fnv1a64(canonical_text());
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = hex[h & 0xF];
        h >>= 4;
    }
    return out;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text, const std::string& origin) {
    ExperimentConfig cfg;
    std::map<std::string, std::pair<std::string, int>> raw;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected 'key = value'");
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (!raw.emplace(key, std::make_pair(value, lineno)).second)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" +
                              key + "'");
    }

    auto where = [&](const std::string& key) {
        auto it = raw.find(key);
        return origin + ":" + std::to_string(it->second.second) + ": " + key;
    };
    auto take = [&](const std::string& key) -> const std::string* {
        auto it = raw.find(key);
        return it == raw.end() ? nullptr : &it->second.first;
    };

    if (auto* v = take("modulus")) cfg.fl.modulus = (std::uint32_t)parse_u64(*v, where("modulus"));
    if (auto* v = take("dimension")) cfg.fl.dimension = parse_u64(*v, where("dimension"));
    if (auto* v = take("clients")) cfg.fl.clients = (int)parse_u64(*v, where("clients"));
    if (auto* v = take("rounds")) cfg.fl.rounds = (std::uint32_t)parse_u64(*v, where("rounds"));
    if (auto* v = take("scale")) cfg.fl.scale = (std::uint32_t)parse_u64(*v, where("scale"));
    if (auto* v = take("selection_seed"))
        cfg.fl.selection_seed = parse_u64(*v, where("selection_seed"));
    if (auto* v = take("eligibility_min"))
        cfg.fl.eligibility_min = parse_u64(*v, where("eligibility_min"));
    if (auto* v = take("budget")) cfg.budget = parse_u64(*v, where("budget"));
    if (auto* v = take("sampling")) cfg.sampling = parse_u64(*v, where("sampling"));
    if (auto* v = take("data")) cfg.data_path = *v;
    if (auto* v = take("program")) cfg.fl.program = *v;

    if (auto* v = take("learning_rate")) {
        try {
            cfg.fl.learning_rate = Rational::parse(*v);
        } catch (const std::exception&) {
            throw ConfigError(where("learning_rate") + ": expected num/den, got '" + *v + "'");
        }
    }
    if (auto* v = take("initial_model"))
        cfg.fl.initial_model = parse_model(*v, where("initial_model"));
    if (auto* v = take("variant")) {
        try {
            cfg.variant = variant_from_name(*v);
        } catch (const ConfigError&) {
            throw ConfigError(where("variant") + ": expected plain|oracle|masked, got '" + *v +
                              "'");
        }
    }
    if (auto* v = take("mode")) {
        if (*v == "det")
            cfg.mode = CheckMode::Deterministic;
        else if (*v == "general")
            cfg.mode = CheckMode::General;
        else
            throw ConfigError(where("mode") + ": expected det|general, got '" + *v + "'");
    }
    if (auto* v = take("corruption")) {
        std::stringstream sets(*v);
        std::string one;
        while (std::getline(sets, one, ';')) {
            one = trim(one);
            if (!one.empty())
                cfg.corruption_sets.push_back(
                    parse_corruption_set(one, cfg.fl.arity(), where("corruption")));
        }
    }
    if (cfg.corruption_sets.empty())
        cfg.corruption_sets.push_back(CorruptionSet::of({cfg.fl.arity()}));

    static const char* known[] = {"modulus",       "dimension",  "clients",
                                  "rounds",        "scale",      "selection_seed",
                                  "eligibility_min", "budget",   "sampling",
                                  "data",          "program",    "learning_rate",
                                  "initial_model", "variant",    "mode",
                                  "corruption"};
    for (const auto& [key, value] : raw) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok)
            throw ConfigError(origin + ":" + std::to_string(value.second) +
                              ": unknown key '" + key + "'");
    }

    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    return parse(read_file(path, "config"), path);
}

std::vector<CandidateClient> parse_datasets(const std::string& text, const std::string& origin) {
    std::vector<CandidateClient> pool;
    CandidateClient* current = nullptr;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const std::string where = origin + ":" + std::to_string(lineno);

        if (stripped.rfind("client", 0) == 0) {
            std::istringstream head(stripped);
            std::string kw;
            long long id = 0;
            head >> kw >> id;
            if (head.fail() || kw != "client")
                throw DatasetError(where + ": expected 'client <id>'");
            for (const auto& c : pool)
                if (c.id == (int)id)
                    throw DatasetError(where + ": duplicate client id " + std::to_string(id));
            pool.push_back(CandidateClient{(int)id, ClientDataset{(int)id, {}}});
            current = &pool.back();
            continue;
        }

        if (!current) throw DatasetError(where + ": example before any 'client' header");
        std::size_t sep = stripped.find(';');
        if (sep == std::string::npos)
            throw DatasetError(where + ": expected '<features...> ; <label>'");
        Example ex;
        std::istringstream feats(stripped.substr(0, sep));
        std::string tok;
        while (feats >> tok) {
            try {
                ex.features.push_back(Rational::parse(tok));
            } catch (const std::exception&) {
                throw DatasetError(where + ": bad feature '" + tok + "'");
            }
        }
        if (ex.features.empty()) throw DatasetError(where + ": example with no features");
        std::string label = trim(stripped.substr(sep + 1));
        try {
            ex.label = Rational::parse(label);
        } catch (const std::exception&) {
            throw DatasetError(where + ": bad label '" + label + "'");
        }
        current->dataset.examples.push_back(std::move(ex));
    }
    if (pool.empty()) throw DatasetError(origin + ": no clients defined");
    return pool;
}

std::vector<CandidateClient> load_datasets(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DatasetError("dataset file not found: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_datasets(buf.str(), path);
}

void write_model_file(const std::string& path, const RationalVector& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw TranscriptError("cannot write model file: " + path);
    out << "flmpc-model 1\n";
    out << "dim " << model.size() << "\n";
    for (const auto& r : model) out << r.str() << "\n";
}

RationalVector read_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TranscriptError("cannot read model file: " + path);
    std::string header;
    std::getline(in, header);
    if (header != "flmpc-model 1") throw TranscriptError(path + ": not a model file");
    std::string dim_line;
    std::getline(in, dim_line);
    std::istringstream dims(dim_line);
    std::string kw;
    std::size_t d = 0;
    dims >> kw >> d;
    if (kw != "dim") throw TranscriptError(path + ": missing dim header");
    RationalVector model;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        model.push_back(Rational::parse(line));
    }
    if (model.size() != d) throw TranscriptError(path + ": component count mismatch");
    return model;
}

} // namespace flmpc
