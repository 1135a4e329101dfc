#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "document.hpp"
#include "jobs.hpp"

using namespace ellgw;
using namespace ellgw::app;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch_dir()
{
    static const auto dir = [] {
        auto d = std::filesystem::temp_directory_path() / ("ellgw-test-cli-" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(d);
        setenv("ELLGW_CACHE_DIR", (d / "cache").c_str(), 1);
        return d;
    }();
    return dir;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("rational serialization")
{
    CHECK(rational_to_json(make_rational(-3, 6)) == Json::array({-1, 2}));
    CHECK(rational_to_json(Rational(0)) == Json::array({0, 1}));
    const Rational big(Integer("1208925819614629174706176"), Integer(3));
    const auto j = rational_to_json(big);
    CHECK(j[0].is_string());
    CHECK(rational_from_json(j) == big);
    CHECK_THROWS_AS(rational_from_json(Json::array({2, 4})), std::invalid_argument);
    CHECK_THROWS_AS(rational_from_json(Json::array({1, -2})), std::invalid_argument);
    CHECK_THROWS_AS(rational_from_json(Json::array({1, 0})), std::invalid_argument);
    CHECK_THROWS_AS(rational_from_json(Json(3)), std::invalid_argument);
}

TEST_CASE("rationals round trip (property)")
{
    std::mt19937 rng(314);
    std::uniform_int_distribution<int> digits(1, 40);
    std::uniform_int_distribution<int> digit(0, 9);
    for (int trial = 0; trial < 200; ++trial) {
        auto number = [&] {
            std::string s = std::to_string(1 + digit(rng));
            const int n = digits(rng);
            for (int i = 0; i < n; ++i) {
                s += static_cast<char>('0' + digit(rng));
            }
            return Integer(s);
        };
        const Rational r = make_rational(trial % 2 ? number() : Integer(-number()), number());
        const auto j = rational_to_json(r);
        CHECK(rational_from_json(j) == r);
        CHECK(rational_from_json(Json::parse(j.dump())) == r);
    }
}

TEST_CASE("series and polynomial round trip")
{
    const QSeries s("q", {make_rational(7, 5760), make_rational(1, 24), make_rational(9, 8)});
    CHECK(series_from_json(series_to_json(s)) == s);
    CHECK(series_to_text(s) == "7/5760 + 1/24 q + 9/8 q^2 + O(q^3)");
    CHECK(series_to_text(QSeries("q", {0, -1, 0, 2})) == "-q + 2 q^3 + O(q^4)");

    StationaryEngine engine;
    const PotentialTruncation tr{};
    for (int g = 0; g <= 2; ++g) {
        const auto f = g == 0 ? genus0_potential(tr) : genus_potential(g, tr, engine);
        for (const auto& [m, c] : f.body.terms()) {
            CHECK(parse_monomial(m.to_string()) == m);
        }
        const auto j = polynomial_to_json(f.body);
        CHECK(polynomial_from_json(Json::parse(j.dump()), tr.max_level) == f.body);
    }
    CHECK(parse_monomial("1").is_one());
    CHECK_THROWS_AS(parse_monomial("t2_0^2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_monomial("t4_1*t1_0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_monomial("x1_0"), std::invalid_argument);
}

TEST_CASE("stationary command")
{
    scratch_dir();
    auto r = run({"stationary", "--profile", "2", "--q-order", "6", "--quasimodular"});
    REQUIRE(r.code == 0);
    const auto doc = parse_document(r.out);
    const auto& qm = doc.payload.at("quasimodular").at("coefficients");
    CHECK(qm.size() == 2);
    CHECK(qm.at("E2^2") == Json::array({1, 2}));
    CHECK(qm.at("E4") == Json::array({1, 12}));
    CHECK(doc.version == ELLGW_VERSION);

    r = run({"stationary", "--profile", "", "--q-order", "5"});
    REQUIRE(r.code == 0);
    const auto c = series_from_json(parse_document(r.out).payload.at("series"));
    CHECK(c == QSeries("q", {0, 1, make_rational(3, 2), make_rational(4, 3), make_rational(7, 4), make_rational(6, 5)}));

    r = run({"stationary", "--profile", "-2"});
    REQUIRE(r.code == 0);
    CHECK(series_from_json(parse_document(r.out).payload.at("series")) == QSeries::constant("q", 6, Rational(1)));

    r = run({"stationary", "--profile", "1", "--quasimodular"});
    CHECK(r.code == 0);
    CHECK(parse_document(r.out).payload.at("quasimodular").at("coefficients").empty());
}

TEST_CASE("output is deterministic and round trips")
{
    scratch_dir();
    const std::vector<std::vector<std::string>> jobs = {
        {"stationary", "--profile", "1,1", "--q-order", "6", "--quasimodular"},
        {"potential", "--genus", "1", "--max-degree", "4"},
        {"verify", "divisor", "--genus", "1"},
        {"verify", "roundtrip", "--profile", "1,1", "--q-order", "6"},
    };
    for (const auto& job : jobs) {
        auto nocache = job;
        nocache.push_back("--no-cache");
        const auto a = run(job);
        const auto b = run(job);
        const auto c = run(nocache);
        REQUIRE(a.code == 0);
        CHECK(a.out == b.out);
        CHECK(a.out == c.out);
        const auto doc = parse_document(a.out);
        CHECK(serialize(doc, Format::json) == a.out);
        CHECK(ResultDocument::from_json(doc.to_json()) == doc);
    }
}

TEST_CASE("potential command")
{
    auto r = run({"potential", "--genus", "1"});
    REQUIRE(r.code == 0);
    auto doc = parse_document(r.out);
    const auto f1 = polynomial_from_json(doc.payload.at("potential"), 4);
    StationaryEngine engine;
    CHECK(f1 == genus_potential(1, PotentialTruncation{}, engine).body);
    // all-t-zero row: sum sigma(n)/n q^n
    CHECK(f1.coefficient(SuperMonomial{}) == QSeries("q", {0, 1, make_rational(3, 2), make_rational(4, 3), make_rational(7, 4), make_rational(6, 5), 2}));

    r = run({"potential", "--genus", "2"});
    REQUIRE(r.code == 0);
    doc = parse_document(r.out);
    const auto& terms = doc.payload.at("potential").at("terms");
    CHECK(terms.contains("t4_2"));
    CHECK(terms.contains("t4_1^2"));

    r = run({"potential", "--genus", "0"});
    REQUIRE(r.code == 0);
    CHECK(parse_document(r.out).payload.at("potential").at("terms").at("t1_0*t2_0*t3_0") == series_to_json(QSeries::constant("q", 6, Rational(1))));

    CHECK(run({"potential", "--genus", "3"}).code == kExitConfigError);
    CHECK(run({"potential", "--genus", "4", "--n-max", "6"}).code == kExitConfigError);
}

TEST_CASE("verify suites and exit codes")
{
    auto r = run({"verify", "divisor", "--genus", "1"});
    CHECK(r.code == kExitOk);
    CHECK(parse_document(r.out).payload.at("passed").get<bool>());

    r = run({"verify", "virasoro", "--genus", "0", "--k", "-1", "--operator", "Ltilde"});
    CHECK(r.code == kExitOk);

    // the odd operators at k = -1 leave an unmatched genus-0 term
    r = run({"verify", "virasoro", "--genus", "0", "--k", "-1"});
    CHECK(r.code == kExitMathFailure);
    CHECK(r.err.find("D_-1 F_0: t1_0*t3_0") != std::string::npos);
    CHECK(r.err.find("Dbar_-1 F_0: t1_0*t2_0") != std::string::npos);

    r = run({"verify", "virasoro", "--genus", "1"});
    CHECK(r.code == kExitOk);

    r = run({"verify", "hierarchy", "--b-max", "1", "--q-order", "3"});
    CHECK(r.code == kExitOk);

    r = run({"verify", "miura", "--max-degree", "4", "--q-order", "4"});
    CHECK(r.code == kExitOk);

    r = run({"verify", "roundtrip", "--q-order", "4"});
    CHECK(r.code == kExitOk);
}

TEST_CASE("configuration errors")
{
    CHECK(run({}).code == kExitConfigError);
    CHECK(run({"stationary"}).code == kExitConfigError);
    CHECK(run({"stationary", "--profile", "2,x"}).code == kExitConfigError);
    CHECK(run({"stationary", "--profile", "-1"}).code == kExitConfigError);
    CHECK(run({"stationary", "--profile", "1,1,1,1"}).code == kExitConfigError);
    CHECK(run({"stationary", "--profile", "2", "--q-order", "0"}).code == kExitConfigError);
    CHECK(run({"stationary", "--profile", "2", "--quasimodular", "--q-order", "3"}).code == kExitConfigError);
    CHECK(run({"verify", "nonsense"}).code == kExitConfigError);
    CHECK(run({"verify", "virasoro", "--k", "4"}).code == kExitConfigError);
    CHECK(run({"verify", "virasoro", "--operator", "M"}).code == kExitConfigError);
    CHECK(run({"verify", "miura", "--genus", "0"}).code == kExitConfigError);
    CHECK(run({"--format", "xml", "selftest"}).code == kExitConfigError);
    CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("config file and output path")
{
    const auto dir = scratch_dir();
    const auto cfg = dir / "job.cfg";
    {
        std::ofstream out(cfg);
        out << "# batch settings\nq-order = 4\nquasimodular = true\nformat = csv\n";
    }
    auto r = run({"stationary", "--profile", "0", "--config", cfg.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("key,q_power,numerator,denominator\n", 0) == 0);
    CHECK(r.out.find("C,4,") != std::string::npos);
    CHECK(r.out.find("C,5,") == std::string::npos);
    CHECK(r.out.find("E2,,1,1") != std::string::npos);

    // flags win over the file
    r = run({"stationary", "--profile", "0", "--q-order", "5", "--format", "json", "--config", cfg.string()});
    REQUIRE(r.code == 0);
    const auto doc = parse_document(r.out);
    CHECK(doc.truncation.at("q_order") == 5);
    CHECK(doc.payload.contains("quasimodular"));

    {
        std::ofstream out(cfg);
        out << "no-such-flag = 1\n";
    }
    CHECK(run({"stationary", "--profile", "0", "--config", cfg.string()}).code == kExitConfigError);
    {
        std::ofstream out(cfg);
        out << "just a line\n";
    }
    CHECK(run({"stationary", "--profile", "0", "--config", cfg.string()}).code == kExitConfigError);
    CHECK(run({"stationary", "--profile", "0", "--config", (dir / "missing.cfg").string()}).code == kExitConfigError);

    const auto target = dir / "out.json";
    r = run({"stationary", "--profile", "2", "--output", target.string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    CHECK(slurp(target) == run({"stationary", "--profile", "2"}).out);
}

TEST_CASE("timing is opt-in")
{
    auto r = run({"stationary", "--profile", "2", "--timing"});
    REQUIRE(r.code == 0);
    CHECK(parse_document(r.out).seconds.has_value());
    r = run({"stationary", "--profile", "2"});
    CHECK(!parse_document(r.out).seconds.has_value());
    CHECK(run({"--format", "text", "stationary", "--profile", "2"}).out.find("C = 7/5760 + 1/24 q") != std::string::npos);
}

TEST_CASE("cache entries are keyed by profile and order")
{
    const auto dir = scratch_dir() / "cache";
    REQUIRE(run({"stationary", "--profile", "3,1", "--q-order", "4"}).code == 0);
    const auto entry = dir / ("stationary_3_1_q4_v" + std::string(ELLGW_VERSION) + ".json");
    REQUIRE(std::filesystem::exists(entry));
    // a corrupted entry is ignored and recomputed
    {
        std::ofstream out(entry);
        out << "{not json";
    }
    const auto r = run({"stationary", "--profile", "3,1", "--q-order", "4"});
    CHECK(r.code == 0);
    CHECK(r.out == run({"stationary", "--profile", "3,1", "--q-order", "4", "--no-cache"}).out);
}
