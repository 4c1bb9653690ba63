#include "support.hpp"

#include <trapmodes/error.hpp>
#include <trapmodes_app/config.hpp>
#include <trapmodes_app/manifest.hpp>
#include <trapmodes_app/report.hpp>
#include <trapmodes_app/runner.hpp>

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace trapmodes;
using namespace trapmodes::app;
namespace fs = std::filesystem;
using test_support::pi;

namespace {

fs::path scratch(const std::string& name) {
    const char* env = std::getenv("TRAPMODES_TEST_TMP");
    const fs::path root = env ? fs::path(env) : fs::temp_directory_path() / "trapmodes_test_cli";
    const fs::path dir = root / name;
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const std::string interval_config = R"(schema = 1

[experiment]
kind = cross-section
name = interval

[cross_section]
kind = interval

[solver]
k = 3
)";

const std::string dent_config = R"(schema = 1

[experiment]
kind = condition

[profile_plus]
kind = fourier
a = -1
)";

RunOptions quiet(const fs::path& dir) {
    RunOptions o;
    o.out_dir = dir.string();
    return o;
}

}  // namespace

TEST_CASE("config parsing") {
    const auto c = parse_config(interval_config);
    CHECK(c.kind == ExperimentKind::cross_section);
    CHECK(c.name == "interval");
    CHECK(c.solve.k == 3);

    CHECK_THROWS_AS(parse_config("schema = 2\n[experiment]\nkind = validate\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[experiment]\nkind = validate\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("schema = 1\n[experiment]\nkind = validate\ncolour = red\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("schema = 1\n[experiment]\nkind = validate\n[bogus]\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("schema = 1\n[experiment]\nkind = nonsense\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("schema = 1\n[experiment]\nkind = cross-section\n[solver]\nk = many\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("schema = 1\n[experiment]\nkind = thin-sweep\n[sweep]\nh = 0.2, 0.1\n"),
                    ConfigError);
}

TEST_CASE("config round trip") {
    for (const auto& text : {interval_config, dent_config}) {
        const auto a = parse_config(text);
        const auto b = parse_config(config_to_text(a));
        CHECK(config_to_text(a) == config_to_text(b));
        CHECK(a.kind == b.kind);
    }
    const auto n = parse_config(slurp(fs::path(TRAPMODES_SOURCE_DIR) / "configs" / "thin_sweep.ini"));
    CHECK(n.hs.size() >= 3);
    CHECK(config_to_text(parse_config(config_to_text(n))) == config_to_text(n));
}

TEST_CASE("cross-section run writes a complete manifest") {
    const auto dir = scratch("interval");
    const auto out = run_config(parse_config(interval_config), quiet(dir));
    REQUIRE(out.exit_code == exit_ok);

    const auto result = Json::parse(slurp(dir / "result.json"));
    REQUIRE(result["mu"].size() == 3);
    for (int p = 1; p <= 3; ++p) CHECK(result["mu"][p - 1].get<double>() == doctest::Approx(p * p * pi * pi));

    const auto manifest = Json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["status"] == "ok");
    CHECK(manifest["config_sha256"] == sha256_hex(parse_config(interval_config).text));
    bool saw_result = false;
    for (const auto& f : manifest["files"]) {
        const fs::path p = dir / f["path"].get<std::string>();
        REQUIRE(fs::exists(p));
        CHECK(f["sha256"] == sha256_hex(slurp(p)));
        CHECK(f["bytes"].get<std::uintmax_t>() == fs::file_size(p));
        saw_result |= f["path"] == "result.json";
    }
    CHECK(saw_result);
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().filename() == "manifest.json") continue;
        bool listed = false;
        for (const auto& f : manifest["files"]) listed |= f["path"] == e.path().filename().string();
        CHECK(listed);
    }

    // Same config, same bytes.
    const auto again = scratch("interval_again");
    REQUIRE(run_config(parse_config(interval_config), quiet(again)).exit_code == exit_ok);
    CHECK(slurp(dir / "result.json") == slurp(again / "result.json"));
}

TEST_CASE("condition run reports verdicts") {
    const auto dir = scratch("dent");
    REQUIRE(run_config(parse_config(dent_config), quiet(dir)).exit_code == exit_ok);
    const auto result = Json::parse(slurp(dir / "result.json"));
    bool gradient = false;
    for (const auto& c : result["conditions"]) {
        if (c["id"] != "gradient_form") continue;
        gradient = true;
        CHECK(c["verdict"] == "satisfied");
        CHECK(c["value"].get<double>() == doctest::Approx(-pi * pi));
    }
    CHECK(gradient);
}

TEST_CASE("unwritable output directory") {
    const auto dir = scratch("blocked");
    fs::create_directories(dir.parent_path());
    std::ofstream(dir) << "a file, not a directory";
    const auto out = run_config(parse_config(interval_config), quiet(dir / "sub"));
    CHECK(out.exit_code == exit_io);
    CHECK_FALSE(out.error.empty());
}

TEST_CASE("built-in validation passes") {
    for (const auto& c : run_validation()) {
        INFO(c.name << ": " << c.detail);
        CHECK(c.passed);
    }
}

TEST_CASE("exit codes") {
    CHECK(exit_code_for(ConfigError("x")) == exit_config);
    CHECK(exit_code_for(FitError("x")) == exit_fit);
    CHECK(exit_code_for(ConvergenceError("x", {})) == exit_solve);
}

TEST_CASE("csv output") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_field("two\nlines") == "\"two\nlines\"");
    Table t{{"h", "note"}, {{"0.1", "x,y"}}};
    CHECK(to_csv(t) == "h,note\r\n0.1,\"x,y\"\r\n");
    CHECK(format_double(0.1) == "0.1");
    CHECK(json_number(std::nan("")).is_null());
}

TEST_CASE("emit_report") {
    const auto dir = scratch("emit");
    OutputWriter w(dir);
    Artifacts a;
    a.summary = {{"answer", 42}};
    a.tables.push_back({"one.csv", Table{{"a", "b"}, {{"1", "2"}}}});
    a.plots.push_back({"p.svg", Plot{"t<1>", "1/h", "log10 deviation", {{"s", {1, 2, 3}, {3, 1, 2}}}}});
    emit_report(w, a, {true, true, true});
    const auto csv = slurp(dir / "one.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
    const auto svg = slurp(dir / "p.svg");
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("1/h") != std::string::npos);
    CHECK(svg.find("log10 deviation") != std::string::npos);
    CHECK(svg.find("t&lt;1&gt;") != std::string::npos);
    CHECK(Json::parse(slurp(dir / "result.json"))["answer"] == 42);

    Artifacts empty;
    empty.tables.push_back({"empty.csv", Table{{"a"}, {}}});
    CHECK_THROWS_AS(emit_report(w, empty, {}), PreconditionError);
}

TEST_CASE("sha256 known vectors") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}
