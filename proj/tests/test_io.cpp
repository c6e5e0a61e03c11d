#include <doctest.h>

#include "lor/io.hpp"

using namespace lor;

TEST_CASE("bigint json round trip") {
    for (const char* s : {"0", "-7", "9007199254740991", "9007199254740992",
                          "-123456789012345678901234567890"}) {
        BigInt v(s);
        Json j = bigint_to_json(v);
        CHECK(bigint_from_json(j) == v);
    }
    CHECK(bigint_to_json(BigInt(5)).is_number_integer());
    CHECK(bigint_to_json(BigInt(1) << 60).is_string());
    CHECK_THROWS_AS(bigint_from_json(Json(1.5)), ParseError);
}

TEST_CASE("weights text parsing") {
    auto pw = parse_weights_text("1 2 3\n-4 5  # trailing comment\n");
    CHECK(pw.scale == 1);
    CHECK(pw.sequence.weights() == std::vector<BigInt>{1, 2, 3, -4, 5});

    auto rat = parse_weights_text("3/2 1 1/6");
    CHECK(rat.scale == 6);
    CHECK(rat.sequence.weights() == std::vector<BigInt>{9, 6, 1});

    CHECK_THROWS_AS(parse_weights_text(""), ParseError);
    CHECK_THROWS_WITH_AS(parse_weights_text("1\n2\nx 3"),
                         doctest::Contains("line 3"), ParseError);
    CHECK_THROWS_AS(parse_weights_text("1 0 2"), UsageError);  // zero weight
    CHECK_THROWS_AS(parse_weights_text("1/0"), ParseError);
}

TEST_CASE("weights json document round trip") {
    FamilySpec spec;
    spec.family = Family::planted_log;
    spec.n = 12;
    WeightSequence a = generate(spec);
    Json j = weights_to_json(a);
    WeightSequence b = weights_from_json(j);
    CHECK(b.weights() == a.weights());
    CHECK(b.name() == a.name());
    CHECK(b.params().at("k") == a.params().at("k"));
}

TEST_CASE("n-grid parsing") {
    CHECK(parse_n_grid("4096:131072:x2") ==
          std::vector<int64_t>{4096, 8192, 16384, 32768, 65536, 131072});
    CHECK(parse_n_grid("10:40:+10") == std::vector<int64_t>{10, 20, 30, 40});
    CHECK(parse_n_grid("5,9,12") == std::vector<int64_t>{5, 9, 12});
    CHECK_THROWS_AS(parse_n_grid("oops"), ParseError);
    CHECK_THROWS_AS(parse_n_grid("4:16:x1"), ParseError);
    CHECK_THROWS_AS(parse_n_grid("4:16:*2"), ParseError);
}

TEST_CASE("run records serialize deterministically") {
    Json inputs{{"alpha", 1}, {"beta", "two"}};
    Json outputs{{"value", 42}};
    Json rec = make_run_record("basis", inputs, outputs, std::nullopt);
    std::string s1 = record_to_string(rec);
    std::string s2 = record_to_string(make_run_record("basis", inputs, outputs, std::nullopt));
    CHECK(s1 == s2);
    CHECK(s1.find("\"schema\"") != std::string::npos);
    CHECK(s1.back() == '\n');
    Json reparsed = Json::parse(s1);
    CHECK(reparsed["outputs"] == outputs);
    CHECK(reparsed["version"] == kVersion);
}

TEST_CASE("csv rendering") {
    SweepResult s;
    SweepRow r;
    r.n = 64;
    r.estimate = 0.5;
    r.ci_low = 0.4;
    r.ci_high = 0.6;
    r.hits = 50;
    r.samples = 100;
    s.rows.push_back(r);
    s.fitted_slope = -0.5;
    s.fit_rows = 1;
    std::string csv = to_csv("sweep", sweep_to_json(s));
    CHECK(csv.find("n,estimate,ci_low,ci_high,hits,samples,failed") == 0);
    CHECK(csv.find("64,0.5,0.4,0.6,50,100,0") != std::string::npos);
    CHECK(csv.find("# fitted_slope,-0.5") != std::string::npos);
}
