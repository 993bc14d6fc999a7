#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "optbin/cli.hpp"
#include "optbin/csv.hpp"
#include "optbin/model_io.hpp"

using namespace optbin;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("optbin_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name, const std::string& text = {}) const {
        const auto p = (path / name).string();
        if (!text.empty()) std::ofstream(p, std::ios::binary) << text;
        return p;
    }
};

std::string small_csv() {
    std::ostringstream os;
    os << "x,y,note\n";
    for (int i = 0; i < 400; ++i) {
        const int x = i % 100;
        const int y = (x * 7 + i / 100) % 10 < x / 10 ? 1 : 0;
        if (i % 50 == 7)
            os << ",1,missing\n";
        else if (i % 60 == 3)
            os << "-7," << y << ",special\n";
        else
            os << x << "," << y << ",\"a, b\"\n";
    }
    return os.str();
}

int run(std::vector<std::string> args, std::string* out_text = nullptr,
        std::string* err_text = nullptr) {
    args.insert(args.begin(), "optbin");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int rc = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return rc;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("csv parsing") {
    std::istringstream in("a,b\r\n1,\"x, \"\"y\"\"\"\r\n\r\n2,\"multi\nline\"\n");
    const auto t = read_csv(in);
    CHECK(t.header == std::vector<std::string>{"a", "b"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][1] == "x, \"y\"");
    CHECK(t.rows[1][1] == "multi\nline");
    CHECK(t.column("b") == 1);
    CHECK_THROWS_AS(t.column("c"), BinningError);
}

TEST_CASE("csv errors") {
    std::istringstream empty("");
    CHECK_THROWS_AS(read_csv(empty), BinningError);
    std::istringstream ragged("a,b\n1\n");
    CHECK_THROWS_AS(read_csv(ragged), BinningError);
    std::istringstream open_quote("a\n\"abc\n");
    CHECK_THROWS_AS(read_csv(open_quote), BinningError);
}

TEST_CASE("cell parsing") {
    CHECK(std::holds_alternative<std::monostate>(parse_cell("")));
    CHECK(std::holds_alternative<std::monostate>(parse_cell("NA", "NA")));
    CHECK(std::holds_alternative<std::monostate>(parse_cell("nan")));
    CHECK(std::get<double>(parse_cell("-7")) == -7.0);
    CHECK(std::get<double>(parse_cell("1.5e3")) == 1500.0);
    CHECK(std::get<std::string>(parse_cell("1,5")) == "1,5");
    CHECK(std::get<std::string>(parse_cell("abc")) == "abc");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("plain") == "plain");
}

TEST_CASE("fit, report and transform") {
    TempDir dir;
    const auto data = dir.file("data.csv", small_csv());
    const auto model = dir.file("model.json");
    std::string out, err;
    REQUIRE(run({"fit", "--data", data, "--variable", "x", "--target", "y", "--trend",
                 "ascending", "--special-values=-7", "--model", model},
                &out, &err) == kExitOk);
    CHECK(out.find("Special") != std::string::npos);
    CHECK(out.find("Missing") != std::string::npos);
    CHECK(out.find("Totals") != std::string::npos);
    CHECK(out.find("Event rate") != std::string::npos);
    CHECK(std::filesystem::exists(model));

    REQUIRE(run({"report", "--model", model}, &out) == kExitOk);
    CHECK(out.find("quality_score") != std::string::npos);
    REQUIRE(run({"report", "--model", model, "--format", "json"}, &out) == kExitOk);
    CHECK(out.find("\"score\"") != std::string::npos);

    const auto output = dir.file("woe.csv");
    REQUIRE(run({"transform", "--model", model, "--data", data, "--output", output}) == kExitOk);
    const auto t = read_csv_file(output);
    CHECK(t.header == std::vector<std::string>{"x_woe"});
    CHECK(t.rows.size() == 400);
    // The missing row takes the Missing bin's WoE.
    const auto m = load_model(model);
    CHECK(std::stod(t.rows[7][0]) == doctest::Approx(m.find(BinKind::Missing)->stats.woe));
}

TEST_CASE("json table output") {
    TempDir dir;
    const auto data = dir.file("data.csv", small_csv());
    std::string out;
    REQUIRE(run({"fit", "--data", data, "--variable", "x", "--target", "y", "--format", "json"},
                &out) == kExitOk);
    CHECK(out.find("\"bins\"") != std::string::npos);
    CHECK(out.find("\"woe\"") != std::string::npos);
}

TEST_CASE("empty csv is an input error") {
    TempDir dir;
    const auto data = dir.file("empty.csv", "\n");
    std::string err;
    CHECK(run({"fit", "--data", data, "--variable", "x", "--target", "y"}, nullptr, &err) ==
          kExitInputError);
    CHECK_FALSE(err.empty());
}

TEST_CASE("unreachable bin count exits as infeasible") {
    TempDir dir;
    const auto data = dir.file("data.csv", small_csv());
    std::string err;
    CHECK(run({"fit", "--data", data, "--variable", "x", "--target", "y", "--min-bins", "40"},
              nullptr, &err) == kExitInfeasible);
    CHECK(err.find("infeasible") != std::string::npos);
}

TEST_CASE("bad arguments") {
    TempDir dir;
    const auto data = dir.file("data.csv", small_csv());
    CHECK(run({"fit", "--data", data}) == kExitInputError);
    CHECK(run({"fit", "--data", data, "--variable", "x", "--target", "y", "--trend", "wobbly"}) ==
          kExitInputError);
    CHECK(run({"fit", "--data", data, "--variable", "nope", "--target", "y"}) == kExitInputError);
    CHECK(run({"fit", "--data", data, "--variable", "x", "--target", "y", "--max-pvalue", "0"}) ==
          kExitInputError);
    CHECK(run({"report", "--model", dir.file("missing.json")}) == kExitInputError);
    CHECK(run({}) == kExitInputError);
}

TEST_CASE("report rejects continuous models") {
    TempDir dir;
    const auto data = dir.file("data.csv", small_csv());
    const auto model = dir.file("cont.json");
    REQUIRE(run({"fit", "--data", data, "--variable", "x", "--target", "y", "--target-kind",
                 "continuous", "--model", model}) == kExitOk);
    CHECK(run({"report", "--model", model}) == kExitInputError);
}

TEST_CASE("local search through the command line") {
    TempDir dir;
    const auto data = dir.file("data.csv", small_csv());
    std::string out;
    CHECK(run({"fit", "--data", data, "--variable", "x", "--target", "y", "--solver", "ls",
               "--seed", "5", "--time-budget", "0.5"},
              &out) == kExitOk);
    CHECK(out.find("feasible") != std::string::npos);
}

}
