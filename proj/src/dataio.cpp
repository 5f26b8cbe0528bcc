#include "drscreen/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "drscreen/rng.hpp"
#include "drscreen/textio.hpp"

namespace drscreen {

std::string csv_header() {
    std::string header;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        header += "chi" + std::to_string(i) + ",";
    }
    header += "grade";
    return header;
}

namespace {

GradedRecord parse_csv_row(const std::string& line, std::size_t line_no) {
    const auto fields = split_fields(line);
    if (fields.size() != kFeatureCount + 1) {
        throw ValueError(line_no, "expected " + std::to_string(kFeatureCount + 1) +
                                      " fields, got " + std::to_string(fields.size()));
    }
    std::array<double, kFeatureCount> raw{};
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        const auto value = parse_double(fields[i]);
        if (!value) {
            throw ValueError(line_no, "chi" + std::to_string(i) + " is not a number: '" +
                                          std::string(fields[i]) + "'");
        }
        raw[i] = *value;
    }
    const auto grade_value = parse_double(fields[kFeatureCount]);
    if (!grade_value || *grade_value != std::floor(*grade_value) || *grade_value < 0 ||
        *grade_value > 3) {
        throw ValueError(line_no, "grade must be one of 0,1,2,3; got '" +
                                      std::string(fields[kFeatureCount]) + "'");
    }
    GradedRecord record;
    try {
        record.features = validate_feature_vector(raw);
    } catch (const Error& e) {
        throw ValueError(line_no, e.what());
    }
    record.grade = static_cast<Grade>(static_cast<int>(*grade_value));
    return record;
}

}  // namespace

Dataset read_csv(std::istream& in, std::string provenance) {
    std::string line;
    if (!std::getline(in, line)) {
        throw EmptyFileError("empty input: " + provenance);
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != csv_header()) {
        throw SchemaError("bad header; expected '" + csv_header() + "'");
    }

    Dataset data;
    data.provenance = std::move(provenance);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        data.records.push_back(parse_csv_row(line, line_no));
    }
    if (data.records.empty()) {
        throw EmptyFileError("no data rows in " + data.provenance);
    }
    return data;
}

CsvAudit audit_csv(const std::filesystem::path& path) {
    CsvAudit audit;
    std::ifstream in(path);
    if (!in) {
        audit.problems.push_back("cannot open " + path.string());
        return audit;
    }
    std::string line;
    if (!std::getline(in, line)) {
        audit.problems.push_back("empty file");
        return audit;
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != csv_header()) {
        audit.problems.push_back("bad header; expected '" + csv_header() + "'");
        return audit;
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            parse_csv_row(line, line_no);
            ++audit.rows;
        } catch (const Error& e) {
            audit.problems.push_back(e.what());
        }
    }
    if (audit.rows == 0 && audit.problems.empty()) {
        audit.problems.push_back("no data rows");
    }
    return audit;
}

Dataset load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return read_csv(in, path.string());
}

void write_csv(const Dataset& data, std::ostream& out) {
    out << csv_header() << '\n';
    for (const auto& record : data.records) {
        for (const double v : record.features) {
            out << format_double(v) << ',';
        }
        out << static_cast<int>(record.grade) << '\n';
    }
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    write_csv(data, out);
}

std::string_view scenario_name(Scenario s) {
    switch (s) {
        case Scenario::R0VsR1: return "r0_vs_r1";
        case Scenario::NoDrVsDr: return "nodr_vs_dr";
    }
    return "?";
}

std::optional<Scenario> parse_scenario(std::string_view name) {
    if (name == "r0_vs_r1") return Scenario::R0VsR1;
    if (name == "nodr_vs_dr") return Scenario::NoDrVsDr;
    return std::nullopt;
}

ScenarioDataset apply_scenario(const Dataset& data, Scenario scenario) {
    ScenarioDataset out;
    out.data.num_classes = 2;
    for (std::size_t i = 0; i < data.records.size(); ++i) {
        const Grade g = data.records[i].grade;
        if (scenario == Scenario::R0VsR1 && (g == Grade::R2 || g == Grade::R3)) continue;
        out.data.features.push_back(data.records[i].features);
        out.data.labels.push_back(g == Grade::R0 ? 0 : 1);
        out.source_rows.push_back(i);
    }
    const std::size_t positives =
        static_cast<std::size_t>(std::count(out.data.labels.begin(), out.data.labels.end(), 1));
    if (out.data.labels.empty() || positives == 0 || positives == out.data.labels.size()) {
        throw EmptyAfterFilterError("scenario " + std::string(scenario_name(scenario)) +
                                    " leaves an empty class");
    }
    return out;
}

std::vector<std::size_t> FoldPlan::test_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] == fold) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] != fold) out.push_back(i);
    }
    return out;
}

FoldPlan stratified_kfold(std::span<const ClassLabel> labels, std::size_t k,
                          std::uint64_t seed) {
    if (k < 2) {
        throw TooFewSamplesError("k must be at least 2, got " + std::to_string(k));
    }
    std::size_t num_classes = 0;
    for (const ClassLabel y : labels) num_classes = std::max(num_classes, y + 1);
    std::vector<std::vector<std::size_t>> per_class(num_classes);
    for (std::size_t i = 0; i < labels.size(); ++i) per_class[labels[i]].push_back(i);
    for (std::size_t c = 0; c < num_classes; ++c) {
        if (per_class[c].size() < k) {
            throw TooFewSamplesError("class " + std::to_string(c) + " has " +
                                     std::to_string(per_class[c].size()) + " samples, fewer than k=" +
                                     std::to_string(k));
        }
    }

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignment.assign(labels.size(), 0);
    Rng rng(mix_seed(seed, 0x666f6c64));  // "fold"
    for (auto& indices : per_class) {
        deterministic_shuffle(indices, rng);
        for (std::size_t i = 0; i < indices.size(); ++i) {
            plan.assignment[indices[i]] = i % k;
        }
    }
    return plan;
}

std::array<std::size_t, kGradeCount> apportion_counts(
    std::size_t n, const std::array<double, kGradeCount>& proportions) {
    double sum = 0.0;
    for (const double p : proportions) {
        if (!(p >= 0.0)) {
            throw BadProportionsError("proportions must be non-negative");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
        throw BadProportionsError("proportions sum to " + format_double(sum) +
                                  ", expected 1 within 1e-6");
    }

    // Largest-remainder apportionment; remainder ties go to the lower grade.
    std::array<std::size_t, kGradeCount> counts{};
    std::array<double, kGradeCount> remainder{};
    std::size_t assigned = 0;
    for (std::size_t g = 0; g < kGradeCount; ++g) {
        const double quota = static_cast<double>(n) * proportions[g] / sum;
        counts[g] = static_cast<std::size_t>(std::floor(quota));
        remainder[g] = quota - std::floor(quota);
        assigned += counts[g];
    }
    std::array<std::size_t, kGradeCount> order = {0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (remainder[a] != remainder[b]) return remainder[a] > remainder[b];
        return a < b;
    });
    for (std::size_t i = 0; assigned < n; ++i) {
        ++counts[order[i % kGradeCount]];
        ++assigned;
    }
    return counts;
}

namespace {

// Per-feature distribution locations. Severity widens the gap between the
// grade-conditional distributions linearly in `separation`.
struct SynthShape {
    double chi0_a = 6.0;  // Kumaraswamy shape for the quality score
    double chi0_b = 2.0;

    static double grade_scale(double base, double slope, double separation, int grade) {
        return base * (1.0 + slope * separation * static_cast<double>(grade));
    }

    double prescreen_rate(double separation, int grade) const {
        return std::min(0.05 + 0.03 * separation * static_cast<double>(grade), 0.95);
    }
    double ma_rate(double separation, int grade, std::size_t j) const {
        return grade_scale(3.0 * std::pow(0.75, static_cast<double>(j)), 0.6, separation, grade);
    }
    double exudate_mean(double separation, int grade, std::size_t j) const {
        return grade_scale(2.0 * std::pow(0.8, static_cast<double>(j)), 0.5, separation, grade);
    }
    double distance_mean(double separation, int grade) const {
        return grade_scale(0.3, 0.3, separation, grade);
    }
    double amfm_mean(double separation, int grade) const {
        return grade_scale(0.2, 0.75, separation, grade);
    }
};

}  // namespace

std::array<double, kFeatureCount> synthetic_feature_means(Grade grade, double separation) {
    const SynthShape shape;
    const int g = static_cast<int>(grade);
    std::array<double, kFeatureCount> means{};
    means[0] = 1.0;  // grade-independent by construction
    means[1] = shape.prescreen_rate(separation, g);
    for (std::size_t j = 0; j < 6; ++j) means[2 + j] = shape.ma_rate(separation, g, j);
    for (std::size_t j = 0; j < 9; ++j) means[8 + j] = shape.exudate_mean(separation, g, j);
    means[17] = shape.distance_mean(separation, g);
    means[18] = shape.amfm_mean(separation, g);
    return means;
}

Dataset generate_synthetic(const SynthParams& params) {
    if (params.n < 4) {
        throw BadProportionsError("need n >= 4, got " + std::to_string(params.n));
    }
    if (!(params.separation >= 0.0) || !std::isfinite(params.separation)) {
        throw BadProportionsError("separation must be a non-negative number");
    }
    const auto counts = apportion_counts(params.n, params.proportions);

    const SynthShape shape;
    Rng rng(params.seed);
    Dataset data;
    data.records.reserve(params.n);
    {
        std::ostringstream p;
        p << "synth(n=" << params.n << ",separation=" << format_double(params.separation)
          << ",seed=" << params.seed << ")";
        data.provenance = p.str();
    }

    for (std::size_t g = 0; g < kGradeCount; ++g) {
        const int grade = static_cast<int>(g);
        for (std::size_t i = 0; i < counts[g]; ++i) {
            GradedRecord record;
            record.grade = static_cast<Grade>(grade);
            auto& x = record.features;
            x[0] = kumaraswamy_draw(rng, shape.chi0_a, shape.chi0_b);
            x[1] = uniform01(rng) < shape.prescreen_rate(params.separation, grade) ? 1.0 : 0.0;
            for (std::size_t j = 0; j < 6; ++j) {
                x[2 + j] = static_cast<double>(
                    poisson_draw(rng, shape.ma_rate(params.separation, grade, j)));
            }
            for (std::size_t j = 0; j < 9; ++j) {
                x[8 + j] = exponential_draw(rng, shape.exudate_mean(params.separation, grade, j));
            }
            x[17] = shape.distance_mean(params.separation, grade) * (0.5 + uniform01(rng));
            x[18] = exponential_draw(rng, shape.amfm_mean(params.separation, grade));
            // Emitted rows honor the schema invariants by construction.
            record.features = validate_feature_vector(x);
            data.records.push_back(record);
        }
    }
    // Break the grade-block ordering.
    deterministic_shuffle(data.records, rng);
    return data;
}

}  // namespace drscreen
