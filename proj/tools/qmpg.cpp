/// @file qmpg.cpp
/// @brief Command-line front end: leaves, verify, pairing, module and ideals.
#include <cstdlib>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qmpg/cache.hpp"
#include "qmpg/cli.hpp"
#include "qmpg/config.hpp"
#include "qmpg/report.hpp"

namespace {

struct Common {
    std::string config;
    std::string format = "text";
    std::vector<std::string> suites;
    std::string cache;
    int height_cap = 0;
    unsigned jobs = 1;
    bool stats = false;
};

void add_common(CLI::App* sub, Common& o, bool with_suites) {
    sub->add_option("--config", o.config, "JSON configuration file")->required();
    sub->add_option("--format", o.format, "text, csv or json")->check(CLI::IsMember({"text", "csv", "json"}));
    if (with_suites) sub->add_option("--suite", o.suites, "comma-separated suites, or all")->delimiter(',');
    sub->add_option("--cache", o.cache, "pairing cache file (default: $QMPG_CACHE)");
    sub->add_option("--height-cap", o.height_cap, "largest height of pairing blocks")->check(CLI::Range(1, 12));
    sub->add_option("--jobs", o.jobs, "worker threads")->check(CLI::Range(1u, 256u));
    sub->add_flag("--stats", o.stats, "print pairing recursion counts on stderr");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qmpg: checks for quantum groups with a twisted multiparameter"};
    app.require_subcommand(1);
    Common o;
    std::string weight, weyl;
    auto* leaves = app.add_subcommand("leaves", "symplectic leaves table of the Poisson structure");
    auto* verify = app.add_subcommand("verify", "run verification suites");
    auto* pairing = app.add_subcommand("pairing", "pairing block at a weight given in fundamental weights");
    auto* module = app.add_subcommand("module", "highest weight module");
    auto* ideals = app.add_subcommand("ideals", "generators of the ideals attached to a Weyl pair");
    add_common(leaves, o, false);
    add_common(verify, o, true);
    add_common(pairing, o, false);
    add_common(module, o, false);
    add_common(ideals, o, false);
    pairing->add_option("weight", weight, "e.g. 1,1")->required();
    module->add_option("weight", weight, "highest weight, e.g. 2")->required();
    ideals->add_option("weyl", weyl, "w+|w-, e.g. s1|e")->required();
    ideals->add_option("weight", weight, "highest weight")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (o.cache.empty())
        if (const char* env = std::getenv("QMPG_CACHE")) o.cache = env;

    try {
        const qmpg::Config cfg = qmpg::load_config(o.config);
        const qmpg::Format fmt = qmpg::parse_format(o.format);
        qmpg::Session s(cfg, {o.height_cap, o.jobs});

        std::unique_ptr<qmpg::PairingCache> cache;
        std::size_t seeded = 0;
        if (!o.cache.empty()) {
            cache = std::make_unique<qmpg::PairingCache>(o.cache);
            const auto ld = cache->load(s.B);
            if (!ld.warning.empty()) std::cerr << "qmpg: warning: " << ld.warning << "\n";
            seeded = ld.loaded;
        }

        qmpg::Report r;
        if (*leaves) r = qmpg::cmd_leaves(s);
        else if (*verify) r = qmpg::cmd_verify(s, o.suites.empty() ? cfg.suites : o.suites);
        else if (*pairing) r = qmpg::cmd_pairing(s, weight);
        else if (*module) r = qmpg::cmd_module(s, weight);
        else r = qmpg::cmd_ideals(s, weyl, weight);

        std::cout << qmpg::render(r, fmt) << std::flush;
        if (cache) cache->store(s.B);
        if (o.stats)
            std::cerr << "pairing recursions: " << s.B.recursion_count() << "\n"
                      << "cache entries loaded: " << seeded << "\n";
        return r.ok ? 0 : 1;
    } catch (const qmpg::ConfigError& e) {
        std::cerr << "qmpg: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "qmpg: error: " << e.what() << "\n";
        return 2;
    }
}
