#include "cli.hpp"

#include <algorithm>
#include <iostream>
#include <set>

#include <CLI11.hpp>

#include "jobs.hpp"

namespace ellgw::app {

namespace {

const std::set<std::string> kFlagKeys{"quasimodular", "extended", "timing", "no-cache"};

bool given(const std::vector<std::string>& args, const std::string& key)
{
    const std::string opt = "--" + key;
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) { return a == opt || a.rfind(opt + "=", 0) == 0; });
}

// Config entries become trailing flags unless the command line already sets them.
std::vector<std::string> merge_config(std::vector<std::string> args)
{
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        }
    }
    if (path.empty()) {
        return args;
    }
    std::vector<std::string> extra;
    for (const auto& [key, value] : read_config_file(path)) {
        if (key == "config") {
            throw ConfigError("config files cannot include other config files");
        }
        if (given(args, key)) {
            continue;
        }
        if (kFlagKeys.count(key)) {
            if (value == "true" || value == "1" || value == "yes") {
                extra.push_back("--" + key);
            } else if (value != "false" && value != "0" && value != "no") {
                throw ConfigError("flag '" + key + "' needs true or false");
            }
        } else {
            extra.push_back("--" + key + "=" + value);
        }
    }
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
}

} // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err)
{
    JobConfig cfg;
    std::string config_path;
    std::string profile_text;
    bool no_cache = false;
    int genus = 0;
    int level = 0;

    CLI::App app{"Exact Gromov-Witten invariants of an elliptic curve"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--format", cfg.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--output", cfg.output, "write the result here instead of stdout");
    app.add_option("--config", config_path, "key=value file mirroring the long flags");
    app.add_flag("--timing", cfg.timing, "record the wall time in the result");
    app.add_flag("--no-cache", no_cache, "do not read or write cached stationary series");
    app.add_option("--n-max", cfg.n_max, "largest number of stationary insertions");

    auto* stationary = app.add_subcommand("stationary", "connected stationary series C_d(q)");
    stationary->add_option("--profile", profile_text, "comma separated levels, e.g. 2,1 or \"\"")->required();
    stationary->add_option("--q-order", cfg.q_order, "highest power of q");
    stationary->add_flag("--quasimodular", cfg.quasimodular, "decompose in E2, E4, E6");

    auto* potential = app.add_subcommand("potential", "genus-g potential F_g");
    auto* potential_genus = potential->add_option("--genus", genus, "genus 0..3")->required();
    potential->add_option("--max-degree", cfg.max_degree, "total degree N in t");
    potential->add_option("--max-level", cfg.max_level, "descendant levels 0..D");
    potential->add_option("--q-order", cfg.q_order, "highest power of q");

    auto* verify = app.add_subcommand("verify", "run an identity suite");
    verify->add_option("suite,--suite", cfg.suite, "virasoro, divisor, hierarchy, miura or roundtrip")
        ->required()
        ->check(CLI::IsMember({"virasoro", "divisor", "hierarchy", "miura", "roundtrip"}));
    auto* verify_genus = verify->add_option("--genus", genus, "restrict to one genus");
    auto* verify_level = verify->add_option("--k", level, "restrict to one operator index");
    verify->add_option("--operator", cfg.op, "Ltilde, D, Dbar or all");
    auto* verify_profile = verify->add_option("--profile", profile_text, "round trip for one profile");
    verify->add_option("--q-order", cfg.q_order, "highest power of q");
    verify->add_option("--max-degree", cfg.max_degree, "total degree N in t");
    verify->add_option("--max-level", cfg.max_level, "descendant levels 0..D");
    verify->add_option("--jet-order", cfg.jet_order, "highest jet order");
    verify->add_option("--eps-order", cfg.eps_order, "highest power of eps in the Miura check");
    verify->add_option("--b-max", cfg.b_max, "highest flow level in the hierarchy check");

    auto* selftest = app.add_subcommand("selftest", "acceptance suite at pinned truncations");
    selftest->add_flag("--extended", cfg.extended, "add genus-3 spot checks");

    std::vector<std::string> args;
    try {
        args = merge_config(raw_args);
    } catch (const std::exception& e) {
        err << "ellgw: " << e.what() << '\n';
        return kExitConfigError;
    }
    std::vector<const char*> argv{"ellgw"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        cfg.command = app.get_subcommands().front()->get_name();
        cfg.use_cache = !no_cache;
        cfg.cache_dir = default_cache_dir();
        if (stationary->parsed() || verify_profile->count() > 0) {
            cfg.profile = parse_profile(profile_text);
        }
        if (potential_genus->count() > 0 || verify_genus->count() > 0) {
            cfg.genus = genus;
        }
        if (verify_level->count() > 0) {
            cfg.level = level;
        }
        const auto outcome = run_job(cfg);
        const auto text = serialize(outcome.document, parse_format(cfg.format));
        if (cfg.output.empty()) {
            out << text;
            out.flush();
        } else {
            write_atomically(cfg.output, text);
        }
        if (!outcome.passed) {
            for (const auto& c : outcome.document.payload.at("checks")) {
                if (!c.at("pass").get<bool>()) {
                    err << "ellgw: FAIL " << c.at("name").get<std::string>();
                    if (c.contains("offending")) {
                        err << ": " << c.at("offending").get<std::string>();
                    }
                    err << '\n';
                }
            }
            return kExitMathFailure;
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "ellgw: configuration error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const TruncationError& e) {
        err << "ellgw: truncation error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const InconsistencyError& e) {
        err << "ellgw: inconsistency: " << e.what() << '\n';
        return kExitMathFailure;
    } catch (const std::invalid_argument& e) {
        err << "ellgw: invalid request: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        err << "ellgw: " << e.what() << '\n';
        return kExitMathFailure;
    }
}

} // namespace ellgw::app
