#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlse/cli.hpp>

using namespace nlse;
using Catch::Matchers::WithinAbs;

namespace {

namespace fs = std::filesystem;

CliConfig parse(std::initializer_list<const char*> xs) {
    return parse_args(std::vector<std::string>(xs.begin(), xs.end()));
}

int run(std::initializer_list<std::string> xs) {
    return run_cli(std::vector<std::string>(xs));
}

// Scratch directory removed when the test section ends.
struct TempDir {
    fs::path path;
    TempDir() {
        static std::mt19937_64 rng(std::random_device{}());
        path = fs::temp_directory_path() / ("nlse-cli-" + std::to_string(rng()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const char* name) const { return (path / name).string(); }
};

struct CaptureStream {
    std::ostream& target;
    std::ostringstream buffer;
    std::streambuf* saved;
    explicit CaptureStream(std::ostream& os) : target(os), saved(os.rdbuf(buffer.rdbuf())) {}
    ~CaptureStream() { target.rdbuf(saved); }
    std::string text() const { return buffer.str(); }
};

std::string slurp(const std::string& path) {
    std::ifstream ifs(path, std::ios::binary);
    REQUIRE(ifs);
    std::ostringstream ss;
    ss << ifs.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("numbers accept the power shorthand", "[parse]") {
    CHECK(detail::parse_real("2^-6") == 0.015625);
    CHECK(detail::parse_real("1e-3") == 1e-3);
    CHECK(detail::parse_real("0.5") == 0.5);
    CHECK(detail::parse_real("10^2") == 100.0);
    CHECK_THROWS_AS(detail::parse_real("abc"), usage_error);
    CHECK_THROWS_AS(detail::parse_real("1e-3x"), usage_error);
    CHECK_THROWS_AS(detail::parse_real(""), usage_error);
    CHECK_THROWS_AS(detail::parse_real("2^"), usage_error);
}

TEST_CASE("tau sweeps expand as lists and halving ranges", "[parse]") {
    CHECK(detail::expand_taus("0.1,0.05,0.025") == std::vector<double>{0.1, 0.05, 0.025});
    CHECK(detail::expand_taus("2^-6:2^-8:half") ==
          std::vector<double>{0.015625, 0.0078125, 0.00390625});

    // The stop value itself must survive the rounding of repeated halving.
    const auto taus = detail::expand_taus("1e-2:1.25e-3:half");
    REQUIRE(taus.size() == 4);
    CHECK_THAT(taus.back(), WithinAbs(1.25e-3, 1e-18));

    CHECK_THROWS_AS(detail::expand_taus("1e-3:1e-2:half"), usage_error);
    CHECK_THROWS_AS(detail::expand_taus("1e-2:1e-3:third"), usage_error);
    CHECK_THROWS_AS(detail::expand_taus("1e-2:1e-3"), usage_error);
    CHECK_THROWS_AS(detail::expand_taus("1e-2:1e-3:half:x"), usage_error);
    CHECK_THROWS_AS(detail::expand_taus("0.1,-0.05"), usage_error);
    CHECK_THROWS_AS(detail::expand_taus(""), usage_error);
}

TEST_CASE("argument parsing fills the config", "[parse]") {
    SECTION("gen-data defaults") {
        const auto cfg = parse({"gen-data"});
        CHECK(cfg.subcommand == "gen-data");
        CHECK(cfg.n == 256);
        CHECK(cfg.gamma == 2.0);
        CHECK(cfg.seed == 0);
        CHECK(cfg.out_path.empty());
    }
    SECTION("solve options") {
        const auto cfg = parse({"solve", "--tau", "2^-8", "--n", "64", "--scheme", "strang",
                                "--no-dealias", "--t-final", "0.5", "--seed", "9"});
        CHECK(cfg.subcommand == "solve");
        CHECK(cfg.tau == 0.00390625);
        CHECK(cfg.n == 64);
        CHECK(cfg.schemes == std::vector<Scheme>{Scheme::STRANG});
        CHECK(!cfg.dealias);
        CHECK(cfg.t_final == 0.5);
        CHECK(cfg.seed == 9);
    }
    SECTION("solve defaults") {
        const auto cfg = parse({"solve", "--tau", "1e-2"});
        CHECK(cfg.schemes == std::vector<Scheme>{Scheme::LRI});
        CHECK(cfg.dealias);
        CHECK(cfg.lambda == -1);
        CHECK(cfg.t_final == 1.0);
    }
    SECTION("converge defaults and the norm exponent") {
        const auto cfg = parse({"converge", "--taus", "2^-4:2^-6:half", "--n", "32"});
        CHECK(cfg.schemes == std::vector<Scheme>{Scheme::LRI, Scheme::NLRI});
        CHECK(cfg.taus.size() == 3);
        CHECK(cfg.norm_gamma == 2.0); // follows --gamma

        const auto cfg1 = parse({"converge", "--taus", "0.1,0.05,0.025", "--gamma", "1"});
        CHECK(cfg1.norm_gamma == 1.0);

        const auto cfg2 =
            parse({"converge", "--taus", "0.1,0.05,0.025", "--gamma", "1", "--norm-gamma", "0"});
        CHECK(cfg2.norm_gamma == 0.0);
        CHECK(cfg2.gamma == 1.0);
    }
    SECTION("mass-drift takes a scheme list") {
        const auto cfg = parse({"mass-drift", "--taus", "0.1,0.05,0.025", "--schemes",
                                "lri,nlri,lie"});
        CHECK(cfg.schemes == std::vector<Scheme>{Scheme::LRI, Scheme::NLRI, Scheme::LIE});
    }
}

TEST_CASE("bad invocations raise usage errors", "[parse]") {
    CHECK_THROWS_AS(parse({}), usage_error);
    CHECK_THROWS_AS(parse({"fit"}), usage_error);
    CHECK_THROWS_AS(parse({"solve"}), usage_error);                       // --tau required
    CHECK_THROWS_AS(parse({"solve", "--tau", "0.1", "--bogus"}), usage_error);
    CHECK_THROWS_AS(parse({"solve", "--tau=0"}), usage_error);
    CHECK_THROWS_AS(parse({"solve", "--tau=-0.5"}), usage_error);
    CHECK_THROWS_AS(parse({"solve", "--tau", "0.1", "--n", "12"}), usage_error);
    CHECK_THROWS_AS(parse({"solve", "--tau", "0.1", "--n", "2"}), usage_error);
    CHECK_THROWS_AS(parse({"solve", "--tau", "0.1", "--lambda", "2"}), usage_error);
    CHECK_THROWS_AS(parse({"solve", "--tau", "0.1", "--scheme", "rk4"}), usage_error);
    CHECK_THROWS_AS(parse({"solve", "--tau", "0.1", "--scheme", "lri,nlri"}), usage_error);
    CHECK_THROWS_AS(parse({"solve", "--tau", "0.1", "--t-final", "-1"}), usage_error);
    CHECK_THROWS_AS(parse({"solve", "--tau", "0.1", "--gamma", "-1"}), usage_error);
    CHECK_THROWS_AS(parse({"converge", "--taus", "0.1,0.05,0.025", "--norm-gamma", "-1"}),
                    usage_error);
    CHECK_THROWS_AS(parse({"mass-drift"}), usage_error); // --taus required
}

TEST_CASE("help requests carry the text", "[parse]") {
    CHECK_THROWS_AS(parse({"--help"}), help_requested);
    try {
        parse({"solve", "--help"});
        FAIL("expected help_requested");
    } catch (const help_requested& h) {
        CHECK(h.text.find("--tau") != std::string::npos);
    }
}

TEST_CASE("full workflow through the front end", "[e2e]") {
    TempDir tmp;
    const std::string data = tmp.file("u0.json");

    REQUIRE(run({"gen-data", "--n", "32", "--gamma", "2", "--seed", "1", "--out", data}) == 0);
    const auto u0 = read_field(data);
    REQUIRE(u0.grid->n == 32);
    CHECK(zero_mode(u0) == cdouble(0.0, 0.0));

    SECTION("a zero-length solve is the identity") {
        const std::string out = tmp.file("u1.json");
        REQUIRE(run({"solve", "--in", data, "--tau", "1e-2", "--t-final", "0", "--out", out}) ==
                0);
        CHECK(read_field(out).coeffs == u0.coeffs);
    }
    SECTION("solving without an input draws the same data") {
        const std::string out = tmp.file("u2.json");
        REQUIRE(run({"solve", "--n", "32", "--gamma", "2", "--seed", "1", "--tau", "1e-2",
                     "--t-final", "0", "--out", out}) == 0);
        CHECK(read_field(out).coeffs == u0.coeffs);
    }
    SECTION("short trajectories run end to end") {
        const std::string out = tmp.file("u3.json");
        REQUIRE(run({"solve", "--in", data, "--tau", "0.01", "--t-final", "0.05", "--scheme",
                     "nlri", "--out", out}) == 0);
        const auto u1 = read_field(out);
        CHECK_THAT(mass(u1), WithinAbs(mass(u0), 1e-12));
    }
}

TEST_CASE("convergence study through the front end", "[e2e]") {
    TempDir tmp;
    const std::string csv = tmp.file("conv.csv");
    const std::string svg = tmp.file("conv.svg");

    REQUIRE(run({"converge", "--n", "16", "--gamma", "4", "--seed", "2", "--taus",
                 "0.05,0.025,0.0125", "--t-final", "0.1", "--schemes", "lie,strang", "--out",
                 csv, "--plot", svg}) == 0);

    std::istringstream is(slurp(csv));
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(is, line)) lines.push_back(line);
    REQUIRE(lines.size() == 7);
    CHECK(lines[0] == "scheme,n,seed,gamma,tau,t_final,error,mass_drift,wall_time");
    CHECK(lines[1].rfind("lie,16,2,", 0) == 0);

    const auto picture = slurp(svg);
    CHECK(picture.rfind("<svg", 0) == 0);
    CHECK(picture.find("class=\"series\"") != std::string::npos);
    CHECK(picture.find("class=\"guide\"") != std::string::npos);
}

TEST_CASE("failures map onto the documented exit codes", "[e2e]") {
    TempDir tmp;

    SECTION("usage errors exit 2") {
        CaptureStream err(std::cerr);
        CHECK(run({"solve"}) == 2);
        CHECK(run({"bogus-subcommand"}) == 2);
        CHECK(err.text().find("error:") != std::string::npos);
    }
    SECTION("missing input exits 3") {
        CaptureStream err(std::cerr);
        CHECK(run({"solve", "--in", tmp.file("nope.json"), "--tau", "1e-2"}) == 3);
    }
    SECTION("unreadable payload exits 3") {
        const std::string bad = tmp.file("bad.json");
        std::ofstream(bad) << "{\"n\": 8}";
        CaptureStream err(std::cerr);
        CHECK(run({"solve", "--in", bad, "--tau", "1e-2"}) == 3);
    }
    SECTION("blow up exits 1") {
        const std::string giant = tmp.file("giant.json");
        auto g = make_grid(16);
        SpectralField huge = zero_field(g);
        huge.coeffs[g->index_of(1)] = cdouble(1e300, 0.0);
        write_field(huge, giant);
        CaptureStream err(std::cerr);
        CHECK(run({"solve", "--in", giant, "--tau", "0.05", "--t-final", "0.1", "--scheme",
                   "exp_euler"}) == 1);
        CHECK(err.text().find("blew up") != std::string::npos);
    }
    SECTION("help exits 0 and prints to stdout") {
        CaptureStream out(std::cout);
        CHECK(run({"--help"}) == 0);
        CHECK(out.text().find("nlse-bench") != std::string::npos);
    }
}

TEST_CASE("payload goes to stdout when no path is given", "[e2e]") {
    CaptureStream out(std::cout);
    CaptureStream err(std::cerr);
    REQUIRE(run({"gen-data", "--n", "16", "--gamma", "2", "--seed", "3"}) == 0);
    std::istringstream payload(out.text());
    const auto u = read_field(payload);
    CHECK(u.grid->n == 16);
    CHECK(err.text().find("gen-data:") != std::string::npos);
}
