#include "jobs.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <unistd.h>

#include "suites.hpp"

namespace ellgw::app {

namespace {

Json profile_json(const StationaryProfile& p)
{
    Json a = Json::array();
    for (int d : p) {
        a.push_back(d);
    }
    return a;
}

std::filesystem::path cache_path(const JobConfig& cfg, const StationaryProfile& p)
{
    std::string key = "stationary_";
    if (p.empty()) {
        key += "empty";
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
        key += (i ? "_" : "") + std::to_string(p[i]);
    }
    key += "_q" + std::to_string(cfg.q_order) + "_v" + ELLGW_VERSION + ".json";
    return cfg.cache_dir / key;
}

std::optional<QSeries> cache_lookup(const std::filesystem::path& path, const StationaryProfile& p)
{
    std::ifstream in(path);
    if (!in) {
        return std::nullopt;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        const auto doc = parse_document(ss.str());
        if (doc.payload.at("profile") != profile_json(p) || doc.version != ELLGW_VERSION) {
            return std::nullopt;
        }
        return series_from_json(doc.payload.at("series"));
    } catch (const std::exception& e) {
        std::cerr << "ellgw: ignoring unreadable cache entry " << path << ": " << e.what() << '\n';
        return std::nullopt;
    }
}

void cache_store(const std::filesystem::path& path, const ResultDocument& doc)
{
    try {
        std::filesystem::create_directories(path.parent_path());
        write_atomically(path, serialize(doc, Format::json));
    } catch (const std::exception& e) {
        std::cerr << "ellgw: cannot write cache entry " << path << ": " << e.what() << '\n';
    }
}

int weight_of(const StationaryProfile& p)
{
    int w = 0;
    for (int d : p) {
        w += d + 2;
    }
    return w;
}

Json verify_payload(const std::string& suite, const std::vector<CheckResult>& checks)
{
    return Json{{"suite", suite}, {"checks", checks_to_json(checks)}, {"passed", all_pass(checks)}};
}

JobOutcome stationary_job(const JobConfig& cfg)
{
    if (!cfg.profile) {
        throw ConfigError("stationary needs --profile");
    }
    const auto& p = *cfg.profile;
    ResultDocument doc;
    doc.command = Json{{"name", "stationary"}, {"profile", profile_json(p)}, {"quasimodular", cfg.quasimodular}};
    doc.truncation = Json{{"q_order", cfg.q_order}, {"n_max", cfg.n_max}};

    std::optional<QSeries> series;
    const auto path = cache_path(cfg, p);
    if (cfg.use_cache) {
        series = cache_lookup(path, p);
    }
    if (!series) {
        StationaryEngine engine(cfg.n_max);
        series = engine.connected_series(p, cfg.q_order);
        if (cfg.use_cache) {
            ResultDocument entry = doc;
            entry.command = Json{{"name", "stationary"}, {"profile", profile_json(p)}, {"quasimodular", false}};
            entry.payload = Json{{"profile", profile_json(p)}, {"series", series_to_json(*series)}};
            cache_store(path, entry);
        }
    }
    doc.payload = Json{{"profile", profile_json(p)}, {"series", series_to_json(*series)}};
    if (cfg.quasimodular) {
        const int w = weight_of(p);
        if (w % 2 != 0) {
            // no quasimodular forms of odd weight: the series must vanish
            if (!series->is_zero()) {
                throw InconsistencyError("odd-weight stationary series is nonzero");
            }
            doc.payload["quasimodular"] = quasimodular_to_json(QuasimodularDecomposition{QuasimodularForm{w, {}}, cfg.q_order + 1});
        } else {
            doc.payload["quasimodular"] = quasimodular_to_json(quasimodular_decompose(*series, w, cfg.q_order));
        }
    }
    return {doc, true};
}

JobOutcome potential_job(const JobConfig& cfg)
{
    if (!cfg.genus) {
        throw ConfigError("potential needs --genus");
    }
    const int g = *cfg.genus;
    if (g < 0 || g > 3) {
        throw ConfigError("potential supports genus 0..3");
    }
    if (g >= 2 && 2 * g - 2 > cfg.n_max) {
        throw ConfigError("genus " + std::to_string(g) + " needs --n-max " + std::to_string(2 * g - 2));
    }
    StationaryEngine engine(cfg.n_max);
    const auto trunc = cfg.potential_truncation();
    const auto f = g == 0 ? genus0_potential(trunc) : genus_potential(g, trunc, engine);
    ResultDocument doc;
    doc.command = Json{{"name", "potential"}, {"genus", g}};
    doc.truncation = Json{{"max_degree", trunc.max_degree}, {"max_level", trunc.max_level}, {"q_order", trunc.q_order}, {"n_max", cfg.n_max}};
    doc.payload = Json{{"genus", g}, {"potential", polynomial_to_json(f.body)}};
    return {doc, true};
}

std::vector<OperatorKind> selected_kinds(const std::string& op)
{
    if (op == "all") {
        return {OperatorKind::Ltilde, OperatorKind::D, OperatorKind::Dbar};
    }
    if (op == "Ltilde" || op == "L") {
        return {OperatorKind::Ltilde};
    }
    if (op == "D") {
        return {OperatorKind::D};
    }
    if (op == "Dbar") {
        return {OperatorKind::Dbar};
    }
    throw ConfigError("unknown operator '" + op + "' (Ltilde, D, Dbar or all)");
}

JobOutcome verify_job(const JobConfig& cfg)
{
    ResultDocument doc;
    doc.command = Json{{"name", "verify"}, {"suite", cfg.suite}};
    if (cfg.genus) {
        doc.command["genus"] = *cfg.genus;
    }
    const auto trunc = cfg.potential_truncation();
    const auto genera = [&](int lo, int hi) {
        std::vector<int> gs;
        if (cfg.genus) {
            gs.push_back(*cfg.genus);
        } else {
            for (int g = lo; g <= hi; ++g) {
                gs.push_back(g);
            }
        }
        for (int g : gs) {
            if (g < 0 || g > 3 || (g >= 2 && 2 * g - 2 > cfg.n_max)) {
                throw ConfigError("genus " + std::to_string(g) + " is outside 0..3 or needs a larger --n-max");
            }
        }
        return gs;
    };
    StationaryEngine engine(cfg.n_max);
    std::vector<CheckResult> checks;
    if (cfg.suite == "virasoro") {
        VirasoroSelection sel;
        sel.genera = genera(0, 2);
        sel.kinds = selected_kinds(cfg.op);
        if (cfg.level) {
            sel.levels = {*cfg.level};
        } else {
            sel.levels.clear();
            for (int k = -1; k <= 3 && k + 1 <= trunc.max_level; ++k) {
                sel.levels.push_back(k);
            }
        }
        doc.command["operator"] = cfg.op;
        if (cfg.level) {
            doc.command["k"] = *cfg.level;
        }
        doc.truncation = Json{{"max_degree", trunc.max_degree}, {"max_level", trunc.max_level}, {"q_order", trunc.q_order}};
        checks = virasoro_suite(sel, trunc, engine);
    } else if (cfg.suite == "divisor") {
        doc.truncation = Json{{"max_degree", trunc.max_degree}, {"max_level", trunc.max_level}, {"q_order", trunc.q_order}};
        checks = divisor_suite(genera(0, 2), trunc, engine);
    } else if (cfg.suite == "hierarchy") {
        doc.truncation = Json{{"max_degree", trunc.max_degree}, {"max_level", trunc.max_level}, {"q_order", trunc.q_order},
                              {"jet_order", cfg.jet_order}, {"b_max", cfg.b_max}};
        checks = hierarchy_suite(cfg.b_max, trunc, JetConfig{cfg.jet_order, cfg.q_order});
    } else if (cfg.suite == "miura") {
        doc.truncation = Json{{"max_degree", trunc.max_degree}, {"max_level", trunc.max_level}, {"q_order", trunc.q_order},
                              {"jet_order", cfg.jet_order}, {"eps_order", cfg.eps_order}};
        auto gs = genera(1, cfg.eps_order / 2);
        if (std::find(gs.begin(), gs.end(), 0) != gs.end()) {
            throw ConfigError("the Miura check starts at genus 1");
        }
        checks = miura_suite(gs, {1, 2, 3, 4}, trunc, JetConfig{cfg.jet_order, cfg.q_order}, engine);
    } else if (cfg.suite == "roundtrip") {
        doc.truncation = Json{{"q_order", cfg.q_order}, {"n_max", cfg.n_max}};
        std::vector<StationaryProfile> profiles;
        if (cfg.profile) {
            doc.command["profile"] = profile_json(*cfg.profile);
            profiles.push_back(*cfg.profile);
        } else {
            profiles = profiles_up_to(cfg.n_max, 8);
        }
        checks = roundtrip_suite(profiles, cfg.q_order, cfg.n_max);
    } else {
        throw ConfigError("unknown suite '" + cfg.suite + "' (virasoro, divisor, hierarchy, miura, roundtrip)");
    }
    doc.payload = verify_payload(cfg.suite, checks);
    return {doc, all_pass(checks)};
}

JobOutcome selftest_job(bool extended)
{
    ResultDocument doc;
    doc.command = Json{{"name", "selftest"}, {"extended", extended}};
    doc.truncation = Json{{"pinned", true}};
    std::vector<CheckResult> summary;
    for (int id = 1; id <= kCriterionCount + (extended ? 1 : 0); ++id) {
        const auto r = id <= kCriterionCount ? run_criterion(id) : extended_genus3();
        CheckResult c{(id <= kCriterionCount ? "criterion " + std::to_string(id) : std::string("extended")) + ": " + r.title, r.pass(), {}, nullptr};
        if (!c.pass) {
            std::vector<CheckResult> failing;
            for (const auto& x : r.checks) {
                if (!x.pass) {
                    failing.push_back(x);
                }
            }
            c.offending = failing.front().name + " [" + failing.front().offending + "]";
            c.residual = checks_to_json(failing);
        }
        summary.push_back(std::move(c));
    }
    doc.payload = verify_payload("selftest", summary);
    return {doc, all_pass(summary)};
}

} // namespace

StationaryProfile parse_profile(const std::string& text)
{
    StationaryProfile p;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        int d = 0;
        try {
            d = std::stoi(item, &used);
        } catch (const std::exception&) {
            throw ConfigError("malformed profile entry '" + item + "'");
        }
        if (used != item.size() || (d < 0 && d != -2)) {
            throw ConfigError("profile entries must be -2 or non-negative, got '" + item + "'");
        }
        p.push_back(d);
    }
    return p;
}

void validate(const JobConfig& cfg)
{
    if (cfg.q_order < 1 || cfg.max_degree < 1 || cfg.max_level < 1 || cfg.jet_order < 1 || cfg.eps_order < 1 || cfg.n_max < 1) {
        throw ConfigError("truncation orders must be positive");
    }
    if (cfg.eps_order % 2 != 0) {
        throw ConfigError("--eps-order must be even");
    }
    if (cfg.b_max < 0) {
        throw ConfigError("--b-max must be non-negative");
    }
    if (cfg.max_level >= kLevelCapacity) {
        throw ConfigError("--max-level must be below " + std::to_string(kLevelCapacity));
    }
    if (cfg.n_max > kMaxZVariables) {
        throw ConfigError("--n-max must be at most " + std::to_string(kMaxZVariables));
    }
    if (cfg.profile) {
        for (int d : *cfg.profile) {
            if (d < 0 && d != -2) {
                throw ConfigError("profile entries must be -2 or non-negative");
            }
        }
        if (static_cast<int>(cfg.profile->size()) > cfg.n_max) {
            throw ConfigError("profile longer than --n-max " + std::to_string(cfg.n_max));
        }
    }
    parse_format(cfg.format);
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file " + path.string());
    }
    std::map<std::string, std::string> kv;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(number) + ": expected key=value");
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) {
            throw ConfigError(path.string() + ":" + std::to_string(number) + ": empty key");
        }
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

std::filesystem::path default_cache_dir()
{
    if (const char* env = std::getenv("ELLGW_CACHE_DIR"); env && *env) {
        return env;
    }
    if (const char* home = std::getenv("HOME"); home && *home) {
        return std::filesystem::path(home) / ".cache" / "ellgw";
    }
    return std::filesystem::temp_directory_path() / "ellgw-cache";
}

JobOutcome run_job(const JobConfig& cfg)
{
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    JobOutcome out;
    if (cfg.command == "stationary") {
        out = stationary_job(cfg);
    } else if (cfg.command == "potential") {
        out = potential_job(cfg);
    } else if (cfg.command == "verify") {
        out = verify_job(cfg);
    } else if (cfg.command == "selftest") {
        out = selftest_job(cfg.extended);
    } else {
        throw ConfigError("unknown command '" + cfg.command + "'");
    }
    out.document.version = ELLGW_VERSION;
    if (cfg.timing) {
        out.document.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    return out;
}

void write_atomically(const std::filesystem::path& path, const std::string& text)
{
    auto tmp = path;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        }
        out << text;
        out.flush();
        if (!out) {
            throw std::runtime_error("write to " + tmp.string() + " failed");
        }
    }
    std::filesystem::rename(tmp, path);
}

} // namespace ellgw::app
