#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "cdh/cli/acceptance.hpp"
#include "cdh/cli/config.hpp"
#include "cdh/cli/csv.hpp"
#include "cdh/cli/experiments.hpp"
#include "cdh/cli/svg.hpp"

using namespace cdh;
using namespace cdh::cli;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Config, ParseSerializeIsIdempotent) {
    const std::string text =
        "# a comment\n"
        "datum.width = 0.5\n"
        "experiment=thm1_radial_F\n"
        "dim=4\n"
        "datum.family=gaussian_bump_in_y\n"
        "times=geom:1:100:5\n"
        "seed=42\n";
    const auto cfg = parse_config(text);
    EXPECT_EQ(cfg.dim, 4);
    EXPECT_EQ(cfg.seed, 42u);
    EXPECT_EQ(cfg.times.values().size(), 5u);
    const auto once = cfg.serialize();
    const auto twice = parse_config(once).serialize();
    EXPECT_EQ(once, twice);
    const auto u0 = cfg.build_datum();
    EXPECT_NEAR(u0.line_value(0.0), 1.0, 1e-15);
}

TEST(Config, NumbersRoundTrip) {
    for (double v : {0.1, 1.0 / 3.0, 2.718281828459045, 1e-300, 12345.678})
        EXPECT_EQ(parse_number(format_number(v), "x"), v);
}

TEST(Config, RejectsBadInput) {
    EXPECT_THROW(parse_config("bogus=1\n"), ConfigError);
    EXPECT_THROW(parse_config("dim=3\ndim=4\n"), ConfigError);
    EXPECT_THROW(parse_config("times=\n"), ConfigError);
    EXPECT_THROW(parse_config("times=2,1\n"), ConfigError);
    EXPECT_THROW(parse_config("times=0,1\n"), ConfigError);
    EXPECT_THROW(parse_config("datum.r1=1\n"), ConfigError);
    EXPECT_THROW(parse_config("datum.family=annulus_indicator\ndatum.width=1\n"), ConfigError);
    EXPECT_THROW(parse_config("dim=0\n"), ConfigError);
    EXPECT_THROW(parse_config("no equals sign\n"), ConfigError);
    EXPECT_THROW(parse_config("plot=maybe\n"), ConfigError);
    EXPECT_THROW(parse_config("datum.family=annulus_indicator\ndatum.r1=3\ndatum.r2=2\n").build_datum(), ConfigError);
}

TEST(Config, ErrorsNameTheLine) {
    try {
        parse_config("dim=3\n\nbogus=1\n", "run.cfg");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("run.cfg:3"), std::string::npos) << e.what();
    }
}

TEST(Registry, HasEveryExperimentWithValidDefaults) {
    const auto& list = experiments();
    EXPECT_EQ(list.size(), 12u);
    for (const auto& e : list) {
        const auto cfg = e.defaults();
        EXPECT_EQ(cfg.experiment, e.name);
        EXPECT_EQ(parse_config(cfg.serialize()).serialize(), cfg.serialize());
        EXPECT_EQ(find_experiment(e.name), &e);
    }
    EXPECT_EQ(find_experiment("nope"), nullptr);
}

TEST(Registry, CriteriaFilter) {
    EXPECT_EQ(criteria().size(), 12u);
    std::size_t rate = 0;
    for (const auto& c : criteria()) rate += c.name.find("rate") != std::string::npos;
    EXPECT_EQ(rate, 2u);
}

TEST(Experiments, RandomDataAreDeterministicPerSeed) {
    std::mt19937_64 a(5), b(5);
    for (int i = 0; i < 20; ++i) {
        const auto da = random_datum(a, Dimension(3));
        const auto db = random_datum(b, Dimension(3));
        for (double y = -3; y <= 3; y += 0.37) EXPECT_EQ(da.line_value(y), db.line_value(y));
    }
}

TEST(Experiments, OutputsAreReproducible) {
    const auto* e = find_experiment("figure1_profiles");
    ASSERT_NE(e, nullptr);
    const auto cfg = e->defaults();
    const auto a = e->run(cfg);
    const auto b = e->run(cfg);
    ASSERT_EQ(a.series.size(), b.series.size());
    for (std::size_t k = 0; k < a.series.size(); ++k) EXPECT_EQ(a.series[k].value, b.series[k].value);
    EXPECT_TRUE(a.all_pass());
    ASSERT_TRUE(a.plot.has_value());
}

TEST(Output, CsvHeadersAndSvg) {
    const auto dir = std::filesystem::temp_directory_path() / "cdh_test_output";
    std::filesystem::create_directories(dir);
    write_series_csv((dir / "series.csv").string(), {{"x", 1.0, 0.5, "solution", 0.25}});
    write_summary_csv((dir / "summary.csv").string(), {{"x", "metric", 0.125, "<= 1", true}});
    const auto series = slurp(dir / "series.csv");
    const auto summary = slurp(dir / "summary.csv");
    EXPECT_EQ(series.substr(0, series.find('\n')), "experiment,t,y_or_r,value_kind,value");
    EXPECT_EQ(summary.substr(0, summary.find('\n')), "experiment,metric,value,tolerance,pass");
    EXPECT_NE(series.find("x,1,0.5,solution,0.25"), std::string::npos) << series;

    PlotSpec spec;
    spec.title = "a < b & c";
    const auto svg = render_svg(spec, {{"curve", {0.0, 1.0, 2.0}, {1.0, 0.5, 0.25}}});
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    EXPECT_NE(svg.find("a &lt; b &amp; c"), std::string::npos);
    std::filesystem::remove_all(dir);
}
