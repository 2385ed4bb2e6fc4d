#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <qpr/config_io.hpp>
#include <qpr/errors.hpp>

using qpr::ConfigError;

namespace {

const char* kGoodConfig = R"({
  "omega": [1.0],
  "forcing": [{"nu": [1], "re": 0.5}, {"nu": [-1], "re": 0.5}],
  "g": {"c0": 0.0, "coeffs": [0.0, 1.0, 1.0]},
  "epsilon": 0.05,
  "solve": {"order": 6},
  "attract": {"offsets": [0.02], "t_end": 50.0}
})";

}  // namespace

TEST_CASE("a full config parses into problem and options") {
    auto cfg = qpr::parse_config(kGoodConfig);
    CHECK(cfg.problem.epsilon == 0.05);
    CHECK(cfg.problem.omega.dim() == 1);
    CHECK(cfg.problem.forcing.coeff({1}) == qpr::FourierSeries::Coeff(0.5, 0.0));
    CHECK(cfg.problem.g.zero_order == 1);
    CHECK(cfg.solve.order == 6);
    CHECK(cfg.solve.grid == 0);          // untouched default
    CHECK(cfg.oracle.k_max == 5);        // whole section defaulted
    CHECK(cfg.attract.offsets == std::vector<double>{0.02});
    CHECK(cfg.attract.t_end == 50.0);
    CHECK(cfg.attract.threshold == 1e-6);
}

TEST_CASE("unknown fields are rejected at every level") {
    CHECK_THROWS_AS(qpr::parse_config(R"({"omega": [1], "bogus": 1})"), ConfigError);
    CHECK_THROWS_AS(qpr::parse_config(R"({
        "omega": [1.0],
        "forcing": [{"nu": [1], "re": 0.5, "phase": 0.0}, {"nu": [-1], "re": 0.5}],
        "g": {"c0": 0.0, "coeffs": [0.0, 1.0]},
        "epsilon": 0.05})"),
                    ConfigError);
    CHECK_THROWS_AS(qpr::parse_config(R"({
        "omega": [1.0],
        "forcing": [{"nu": [1], "re": 0.5}, {"nu": [-1], "re": 0.5}],
        "g": {"c0": 0.0, "coeffs": [0.0, 1.0], "name": "linear"},
        "epsilon": 0.05})"),
                    ConfigError);
    CHECK_THROWS_AS(qpr::parse_config(R"({
        "omega": [1.0],
        "forcing": [{"nu": [1], "re": 0.5}, {"nu": [-1], "re": 0.5}],
        "g": {"c0": 0.0, "coeffs": [0.0, 1.0]},
        "epsilon": 0.05,
        "solve": {"order": 6, "tolerance": 1e-9}})"),
                    ConfigError);
}

TEST_CASE("missing and malformed fields are rejected") {
    CHECK_THROWS_AS(qpr::parse_config("not json at all"), ConfigError);
    CHECK_THROWS_AS(qpr::parse_config("[1, 2, 3]"), ConfigError);
    CHECK_THROWS_AS(qpr::parse_config(R"({"omega": [1.0]})"), ConfigError);  // no forcing
    CHECK_THROWS_AS(qpr::parse_config(R"({
        "omega": [1.0],
        "forcing": [{"nu": [1], "re": 0.5}, {"nu": [-1], "re": 0.5}],
        "g": {"c0": 0.0, "coeffs": [0.0, 1.0]},
        "epsilon": "small"})"),
                    ConfigError);
    CHECK_THROWS_AS(qpr::parse_config(R"({
        "omega": [1.0, 2.0],
        "forcing": [{"nu": [1], "re": 0.5}],
        "g": {"c0": 0.0, "coeffs": [0.0, 1.0]},
        "epsilon": 0.05})"),
                    ConfigError);  // mode length vs dimension
}

TEST_CASE("forcing must describe a real function") {
    CHECK_THROWS_WITH_AS(qpr::parse_config(R"({
        "omega": [1.0],
        "forcing": [{"nu": [1], "re": 0.5}],
        "g": {"c0": 0.0, "coeffs": [0.0, 1.0]},
        "epsilon": 0.05})"),
                         doctest::Contains("list both +nu and -nu"), ConfigError);
}

TEST_CASE("17 significant digits round-trip doubles exactly") {
    for (double v : {0.1, 1.0 / 3.0, 1.6180339887498949, 1e-300, 6.62607015e-34, -0.25}) {
        std::string text = qpr::fmt(v);
        CHECK(std::strtod(text.c_str(), nullptr) == v);
    }
    CHECK(qpr::fmt(std::complex<double>(0.5, -0.25)) == "0.5 -0.25");
    CHECK(qpr::fmt_mode({2, -1, 0}) == "2,-1,0");
}

TEST_CASE("series serialization round-trips exactly") {
    std::mt19937 rng(31337);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    qpr::FourierSeries s(2, true);
    for (int i = 0; i < 12; ++i) {
        qpr::Mode nu = {static_cast<int>(rng() % 7) - 3, static_cast<int>(rng() % 7) - 3};
        std::complex<double> c(dist(rng), dist(rng));
        s.add_coeff(nu, c);
        s.add_coeff(qpr::negated(nu), std::conj(c));
    }
    auto text = qpr::serialize_series(s);
    auto back = qpr::deserialize_series(text, 2, true);
    CHECK(back.terms() == s.terms());
    CHECK_THROWS_AS(qpr::deserialize_series("1,1 not-a-number", 2, true), ConfigError);
}

TEST_CASE("atomic writes land complete and leave no temp files") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "qpr_config_io_test";
    fs::create_directories(dir);
    fs::path target = dir / "out.txt";

    qpr::write_text_atomic(target, "first\n");
    qpr::write_text_atomic(target, "second\n");  // overwrite goes through the same rename
    std::ifstream in(target);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content == "second\n");
    CHECK_FALSE(fs::exists(target.string() + ".tmp"));
    fs::remove_all(dir);
}

TEST_CASE("loading a missing file is a config error") {
    CHECK_THROWS_AS(qpr::load_config("/nonexistent/cfg.json"), ConfigError);
}
