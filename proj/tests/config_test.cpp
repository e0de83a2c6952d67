#include <sstream>

#include <doctest.h>

#include "manet/config_file.hpp"

using namespace manet;

namespace {

ScenarioConfig parse(const std::string& text)
{
    std::istringstream in(text);
    return build_config(parse_key_values(in));
}

bool has(const std::vector<Issue>& issues, Issue::Severity sev, const std::string& field)
{
    for (const auto& i : issues) {
        if (i.severity == sev && i.field == field)
            return true;
    }
    return false;
}

} // namespace

TEST_CASE("validate")
{
    ScenarioConfig cfg;
    cfg.T = 10;
    cfg.receiver = BipolarReceiver{0.25};
    CHECK(validate(cfg).empty());

    cfg.pathloss = PathLoss::power_law(1, 2);
    CHECK(has(validate(cfg), Issue::Severity::Violation, "pathloss.beta"));

    ScenarioConfig mnn;
    mnn.receiver = MnnReceiver{};
    mnn.T = 0.5;
    const auto issues = validate(mnn);
    CHECK(is_valid(issues));
    CHECK(has(issues, Issue::Severity::Warning, "T"));

    ScenarioConfig bad;
    bad.p = 1.5;
    bad.lambda = 0;
    CHECK(has(validate(bad), Issue::Severity::Violation, "p"));
    CHECK(has(validate(bad), Issue::Severity::Violation, "lambda"));
}

TEST_CASE("key-value files")
{
    const ScenarioConfig cfg = parse("# comment\n"
                                     "lambda = 2\n\n"
                                     "p=0.3\n"
                                     "T = 1\n"
                                     "fading.variant = weibull\n"
                                     "fading.k = 0.4\n"
                                     "fading.c = 2\n"
                                     "noise.variant = constant\n"
                                     "noise.w = 0.5\n"
                                     "receiver.variant = poisson_plus_grid\n"
                                     "receiver.lambda0 = 1\n"
                                     "receiver.kappa = 3\n"
                                     "interference = cancelled\n");
    CHECK(cfg.lambda == 2);
    CHECK(cfg.p == 0.3);
    CHECK(cfg.fading.kind() == Fading::Kind::Weibull);
    CHECK(cfg.fading.shape() == 0.4);
    CHECK(cfg.noise.level() == 0.5);
    CHECK(std::get<PoissonPlusGridReceiver>(cfg.receiver).kappa == 3);
    CHECK(cfg.interference == InterferenceMode::Cancelled);

    // Round trip through the canonical form.
    const ScenarioConfig again = build_config(to_key_values(cfg));
    CHECK(to_key_values(again) == to_key_values(cfg));
}

TEST_CASE("malformed files are rejected")
{
    CHECK_THROWS_AS(parse("colour = blue\n"), ConfigError);
    CHECK_THROWS_AS(parse("lambda = one\n"), ConfigError);
    CHECK_THROWS_AS(parse("lambda = 1\nlambda = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse("receiver.variant = bipolar\nreceiver.lambda0 = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse("no equals sign\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), ConfigError);
}
