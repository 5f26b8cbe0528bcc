#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "drscreen/dataio.hpp"

using namespace drscreen;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / ("drscreen_test_" + name);
}

Dataset tiny_synth(std::size_t n = 40, std::uint64_t seed = 4) {
    SynthParams p;
    p.n = n;
    p.seed = seed;
    p.separation = 2.0;
    return generate_synthetic(p);
}

}  // namespace

TEST_CASE("csv round trip is bit-stable") {
    const Dataset original = tiny_synth(60, 9);
    const fs::path path = temp_file("roundtrip.csv");
    write_csv(original, path);
    const Dataset loaded = load_csv(path);
    REQUIRE(loaded.records.size() == original.records.size());
    for (std::size_t i = 0; i < loaded.records.size(); ++i) {
        CHECK(loaded.records[i].grade == original.records[i].grade);
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            CHECK(loaded.records[i].features[f] == original.records[i].features[f]);
        }
    }
    fs::remove(path);
}

TEST_CASE("csv schema errors") {
    SUBCASE("loads a small well-formed file") {
        std::istringstream in(csv_header() +
                              "\n0.5,0,1,1,1,1,1,1,0,0,0,0,0,0,0,0,0,0.1,0.2,0\n"
                              "0.6,1,2,2,2,2,2,2,0,0,0,0,0,0,0,0,0,0.2,0.4,1\n"
                              "0.7,0,3,3,3,3,3,3,0,0,0,0,0,0,0,0,0,0.3,0.6,2\n");
        const Dataset d = read_csv(in, "test");
        CHECK(d.records.size() == 3);
        CHECK(d.records[2].grade == Grade::R2);
    }
    SUBCASE("header must match exactly") {
        std::istringstream in("chi0,chi1,grade\n1,0,0\n");
        CHECK_THROWS_AS(read_csv(in, "test"), SchemaError);
    }
    SUBCASE("header missing the grade column") {
        std::string header = csv_header();
        header = header.substr(0, header.size() - 6);  // drop ",grade"
        std::istringstream in(header + "\n");
        CHECK_THROWS_AS(read_csv(in, "test"), SchemaError);
    }
    SUBCASE("empty input") {
        std::istringstream in("");
        CHECK_THROWS_AS(read_csv(in, "test"), EmptyFileError);
        std::istringstream only_header(csv_header() + "\n");
        CHECK_THROWS_AS(read_csv(only_header, "test"), EmptyFileError);
    }
    SUBCASE("bad grade names the line") {
        std::istringstream in(csv_header() +
                              "\n0.5,0,1,1,1,1,1,1,0,0,0,0,0,0,0,0,0,0.1,0.2,0\n"
                              "0.5,0,1,1,1,1,1,1,0,0,0,0,0,0,0,0,0,0.1,0.2,4\n");
        try {
            read_csv(in, "test");
            FAIL("expected ValueError");
        } catch (const ValueError& e) {
            CHECK(e.line == 3);
        }
    }
    SUBCASE("truncated row reports its arity") {
        std::istringstream in(csv_header() + "\n0.5,0,1\n");
        CHECK_THROWS_AS(read_csv(in, "test"), ValueError);
    }
}

TEST_CASE("audit collects every problem") {
    const fs::path path = temp_file("audit.csv");
    std::ofstream out(path);
    out << csv_header() << "\n";
    out << "0.5,0,1,1,1,1,1,1,0,0,0,0,0,0,0,0,0,0.1,0.2,0\n";
    out << "1.5,0,1,1,1,1,1,1,0,0,0,0,0,0,0,0,0,0.1,0.2,0\n";  // chi0 out of range
    out << "0.5,0,1\n";                                        // truncated
    out.close();
    const CsvAudit audit = audit_csv(path);
    CHECK(audit.rows == 1);
    REQUIRE(audit.problems.size() == 2);
    CHECK(audit.problems[0].find("line 3") != std::string::npos);
    CHECK(audit.problems[1].find("line 4") != std::string::npos);
    fs::remove(path);
}

TEST_CASE("scenario mapping") {
    Dataset d;
    FeatureVector x{};
    x[0] = 0.5;
    d.records = {{x, Grade::R0}, {x, Grade::R1}, {x, Grade::R2}, {x, Grade::R3}};

    SUBCASE("r0_vs_r1 drops advanced grades") {
        const ScenarioDataset s = apply_scenario(d, Scenario::R0VsR1);
        CHECK(s.data.labels == std::vector<ClassLabel>{0, 1});
        CHECK(s.source_rows == std::vector<std::size_t>{0, 1});
    }
    SUBCASE("nodr_vs_dr pools every diseased grade") {
        const ScenarioDataset s = apply_scenario(d, Scenario::NoDrVsDr);
        CHECK(s.data.labels == std::vector<ClassLabel>{0, 1, 1, 1});
        CHECK(s.source_rows == std::vector<std::size_t>{0, 1, 2, 3});
    }
    SUBCASE("empty class after filtering") {
        Dataset only_r2;
        only_r2.records = {{x, Grade::R0}, {x, Grade::R2}};
        CHECK_THROWS_AS(apply_scenario(only_r2, Scenario::R0VsR1), EmptyAfterFilterError);
        Dataset only_r0;
        only_r0.records = {{x, Grade::R0}};
        CHECK_THROWS_AS(apply_scenario(only_r0, Scenario::NoDrVsDr), EmptyAfterFilterError);
    }
}

TEST_CASE("stratified folds partition with balanced classes") {
    std::vector<ClassLabel> labels(100);
    for (std::size_t i = 0; i < 50; ++i) labels[i] = 1;

    const FoldPlan plan = stratified_kfold(labels, 10, 42);
    REQUIRE(plan.assignment.size() == 100);
    for (std::size_t f = 0; f < 10; ++f) {
        const auto test = plan.test_indices(f);
        CHECK(test.size() == 10);
        std::size_t positives = 0;
        for (const std::size_t i : test) positives += labels[i];
        CHECK(positives == 5);
        const auto train = plan.train_indices(f);
        CHECK(train.size() == 90);
    }

    const FoldPlan again = stratified_kfold(labels, 10, 42);
    CHECK(again.assignment == plan.assignment);
    const FoldPlan other = stratified_kfold(labels, 10, 43);
    CHECK(other.assignment != plan.assignment);
}

TEST_CASE("stratification tolerates uneven classes within one sample") {
    std::vector<ClassLabel> labels(47, 0);
    for (std::size_t i = 0; i < 13; ++i) labels[i] = 1;
    const FoldPlan plan = stratified_kfold(labels, 4, 7);
    std::vector<std::size_t> pos_count(4, 0), neg_count(4, 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        (labels[i] == 1 ? pos_count : neg_count)[plan.assignment[i]] += 1;
    }
    for (std::size_t f = 0; f + 1 < 4; ++f) {
        for (std::size_t g = f + 1; g < 4; ++g) {
            CHECK(std::llabs(static_cast<long long>(pos_count[f]) -
                             static_cast<long long>(pos_count[g])) <= 1);
            CHECK(std::llabs(static_cast<long long>(neg_count[f]) -
                             static_cast<long long>(neg_count[g])) <= 1);
        }
    }
}

TEST_CASE("fold plan rejects impossible k") {
    std::vector<ClassLabel> labels = {0, 0, 0, 1, 1, 1};
    CHECK_THROWS_AS(stratified_kfold(labels, 1, 0), TooFewSamplesError);
    CHECK_THROWS_AS(stratified_kfold(labels, 4, 0), TooFewSamplesError);
    CHECK_NOTHROW(stratified_kfold(labels, 3, 0));
}

TEST_CASE("apportionment reproduces the source population") {
    const auto counts = apportion_counts(1200, kDefaultGradeProportions);
    CHECK(counts == std::array<std::size_t, 4>{540, 153, 247, 260});

    // remainder ties go to the lower grade
    const auto tied = apportion_counts(10, {0.25, 0.25, 0.25, 0.25});
    CHECK(tied == std::array<std::size_t, 4>{3, 3, 2, 2});
}

TEST_CASE("proportions must sum to one") {
    // 0.46 + 0.1275 + 0.2058 + 0.2167 = 1.01: rejected, not renormalized.
    SynthParams p;
    p.proportions = {0.46, 0.1275, 0.2058, 0.2167};
    CHECK_THROWS_AS(generate_synthetic(p), BadProportionsError);
    p.proportions = {0.5, 0.5, 0.2, -0.2};
    CHECK_THROWS_AS(generate_synthetic(p), BadProportionsError);
    p.proportions = kDefaultGradeProportions;
    p.n = 3;
    CHECK_THROWS_AS(generate_synthetic(p), BadProportionsError);
}

TEST_CASE("synthetic cohorts are deterministic and schema-valid") {
    const Dataset a = tiny_synth(80, 31);
    const Dataset b = tiny_synth(80, 31);
    REQUIRE(a.records.size() == 80);
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].grade == b.records[i].grade);
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            CHECK(a.records[i].features[f] == b.records[i].features[f]);
        }
        CHECK_NOTHROW(validate_feature_vector(a.records[i].features));
    }
    const Dataset c = tiny_synth(80, 32);
    bool any_difference = false;
    for (std::size_t i = 0; i < c.records.size() && !any_difference; ++i) {
        any_difference = c.records[i].features != a.records[i].features;
    }
    CHECK(any_difference);
}

TEST_CASE("generator counts follow the apportionment") {
    SynthParams p;
    p.n = 1200;
    p.seed = 17;
    const Dataset d = generate_synthetic(p);
    std::array<std::size_t, 4> histogram{};
    for (const auto& r : d.records) histogram[static_cast<std::size_t>(r.grade)] += 1;
    CHECK(histogram == std::array<std::size_t, 4>{540, 153, 247, 260});
}

TEST_CASE("separation controls the grade dependence of the feature means") {
    const auto r0_flat = synthetic_feature_means(Grade::R0, 0.0);
    const auto r3_flat = synthetic_feature_means(Grade::R3, 0.0);
    CHECK(r0_flat == r3_flat);  // separation 0: grade-independent by construction

    const auto r0 = synthetic_feature_means(Grade::R0, 2.0);
    const auto r1 = synthetic_feature_means(Grade::R1, 2.0);
    const auto r3 = synthetic_feature_means(Grade::R3, 2.0);
    CHECK(r0[0] == r3[0]);  // quality score never depends on the grade
    for (std::size_t f = 1; f < kFeatureCount; ++f) {
        CHECK(r0[f] < r1[f]);
        CHECK(r1[f] < r3[f]);
    }
}
