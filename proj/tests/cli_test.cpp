#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "manet/analytic.hpp"
#include "manet/cli.hpp"

using namespace manet;

namespace {

const std::string kData = MANET_TEST_DATA;

struct Run
{
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "manet");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> v;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);)
        v.push_back(l);
    return v;
}

std::vector<std::string> cells(const std::string& line)
{
    std::vector<std::string> v;
    std::stringstream in(line);
    for (std::string c; std::getline(in, c, ',');)
        v.push_back(c);
    if (!line.empty() && line.back() == ',')
        v.emplace_back();
    return v;
}

std::filesystem::path scratch(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / "manet_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("analytic subcommand")
{
    auto r = run({"analytic", "--config", kData + "/ipnr_finite.cfg"});
    REQUIRE(r.code == 0);
    auto l = lines(r.out);
    CHECK(l[0] == "quantity,value,method,stderr,diverged,seed,window_radius");
    CHECK(l[1].rfind("mean_delay,4.498025,closed_form", 0) == 0);

    r = run({"analytic", "--config", kData + "/ipnr_infinite.cfg"});
    REQUIRE(r.code == 0);
    CHECK(lines(r.out)[1].rfind("mean_delay,INF,threshold_rule", 0) == 0);
    CHECK(r.out.find("phase_verdict,infinite,ipnr_interference_threshold") != std::string::npos);
}

TEST_CASE("input errors exit with code 2 and no CSV")
{
    auto r = run({"analytic", "--config", kData + "/malformed.cfg"});
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    CHECK(r.err.find("colour") != std::string::npos);

    CHECK(run({"analytic", "--config", kData + "/missing.cfg"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"simulate", "--config", kData + "/bipolar.cfg", "--estimator", "fast"}).code == 2);
    CHECK(run({"simulate", "--config", kData + "/bipolar.cfg", "--samples", "10"}).code == 2);
}

TEST_CASE("simulate is deterministic and reports its checkpoints")
{
    const std::vector<std::string> args{"simulate", "--config", kData + "/bipolar.cfg", "--samples", "800",
                                        "--seed", "17"};
    const auto a = run(args);
    const auto b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    auto l = lines(a.out);
    CHECK(l[0] == "n,quantity,value,method,stderr,diverged,seed,window_radius");
    CHECK(l[1].rfind("100,running_mean,", 0) == 0);
    bool found = false;
    for (const auto& line : l) {
        const auto c = cells(line);
        if (c.size() == 8 && c[1] == "mean_delay") {
            found = true;
            CHECK(c[5] == "false");
            CHECK(c[6] == "17");
            CHECK(std::abs(std::stod(c[2]) / 2.48739676 - 1) < 0.05);
        }
    }
    CHECK(found);

    auto threads = args;
    threads.insert(threads.end(), {"--threads", "3"});
    CHECK(run(threads).out == a.out);

    auto verify = args;
    verify.push_back("--verify");
    CHECK(run(verify).code == 0);
}

TEST_CASE("run record")
{
    const auto path = scratch("record.json");
    const auto r = run({"analytic", "--config", kData + "/bipolar.cfg", "--record", path.string()});
    REQUIRE(r.code == 0);
    std::ifstream in(path);
    std::stringstream text;
    text << in.rdbuf();
    CHECK(text.str().find("\"version\"") != std::string::npos);
    CHECK(text.str().find("\"receiver.r\": \"0.25\"") != std::string::npos);
}

TEST_CASE("ccdf subcommand")
{
    const auto r = run({"ccdf", "--config", kData + "/ipnr_finite.cfg", "--samples", "300", "--m-max", "100"});
    REQUIRE(r.code == 0);
    const auto l = lines(r.out);
    CHECK(l[0].rfind("m,quantity", 0) == 0);
    CHECK(l[1].rfind("0,ccdf,1,", 0) == 0);
    CHECK(r.out.find("\n100,ccdf_partial_sum,") != std::string::npos);
}

TEST_CASE("sweep verdicts follow the theta boundary")
{
    const auto out = scratch("sweep.csv");
    const auto boundary = scratch("sweep_boundary.csv");
    std::filesystem::remove(boundary);
    const auto r = run({"sweep", "--sweep", kData + "/phase.sweep", "--out", out.string()});
    REQUIRE(r.code == 0);
    std::ifstream in(out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "p,receiver.lambda0,quantity,value,method,stderr,diverged,seed,window_radius");
    int points = 0;
    while (std::getline(in, line)) {
        const auto c = cells(line);
        if (c[2] != "phase_verdict")
            continue;
        ++points;
        const double p = std::stod(c[0]);
        const double lambda0 = std::stod(c[1]);
        const double threshold = analytic::theta(p, 1, 4).value() / std::numbers::pi;
        CHECK(c[3] == (lambda0 > threshold ? "finite" : "infinite"));
    }
    CHECK(points == 63);

    REQUIRE(std::filesystem::exists(boundary));
    std::ifstream b(boundary);
    std::getline(b, line);
    int crossings = 0;
    while (std::getline(b, line)) {
        const auto c = cells(line);
        const double p = std::stod(c[0]);
        const double lambda0 = std::stod(c[3]);
        CHECK(lambda0 == doctest::Approx(analytic::theta(p, 1, 4).value() / std::numbers::pi).epsilon(1e-6));
        ++crossings;
    }
    CHECK(crossings > 0);
}

TEST_CASE("sweep without axes is an input error")
{
    const auto spec = scratch("empty.sweep");
    std::ofstream(spec) << "lambda = 1\nreceiver.variant = ipnr\noutputs = phase_verdict\n";
    CHECK(run({"sweep", "--sweep", spec.string()}).code == 2);
}
