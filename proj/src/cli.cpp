#include "fairtrade/cli.hpp"

#include "fairtrade/baselines.hpp"
#include "fairtrade/classifiers.hpp"
#include "fairtrade/dataset.hpp"
#include "fairtrade/error.hpp"
#include "fairtrade/manifest.hpp"
#include "fairtrade/massaging.hpp"
#include "fairtrade/metrics.hpp"
#include "fairtrade/svg_chart.hpp"
#include "fairtrade/sweep.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace fairtrade::cli {

namespace fs = std::filesystem;

namespace {

struct RunConfig {
    std::string command;
    std::vector<std::string> inputs;
    std::string output_dir = "fairtrade-out";
    std::string preset;
    std::string label_col;
    std::string positive_value;
    std::string group_col;
    std::string favored_value;
    std::string missing = "drop";
    bool with_s = false;
    std::uint64_t seed = kDefaultSeed;
    double split = 0.5;
    std::string classifier = "logistic";
    double threshold = 0.5;
    std::string strategy = "all";
    std::string d_grid = "uniform:21";
    std::string grid = "unique";
    std::string model;
    std::string massage_plan;
    bool oracle_row = false;
    std::string decisions;
    LogisticConfig logistic;
    double variance_floor = 1e-9;
    // synth
    std::size_t n = 1000;
    double alpha = 0.5;
    double pi0 = 0.5;
    double d0 = 0.0;
    std::size_t noise = 2;
};

/// Everything derived from the input file, the schema and the split.
struct Prepared {
    Schema schema;
    RawTable raw;
    Manifest manifest;
    Dataset train;
    Dataset test;
    std::vector<std::string> warnings;
};

const std::string& single_input(const RunConfig& cfg)
{
    if (cfg.inputs.size() != 1) {
        throw UsageError("--input must name exactly one file");
    }
    return cfg.inputs.front();
}

Schema make_schema(const RunConfig& cfg)
{
    Schema s;
    if (cfg.preset == "adult") {
        s.label_col = "income";
        s.positive_value = ">50K";
        s.group_col = "sex";
        s.favored_value = "Male";
    } else if (!cfg.preset.empty()) {
        throw UsageError("unknown preset '" + cfg.preset + "' (known: adult)");
    }
    if (!cfg.label_col.empty()) {
        s.label_col = cfg.label_col;
    }
    if (!cfg.positive_value.empty()) {
        s.positive_value = cfg.positive_value;
    }
    if (!cfg.group_col.empty()) {
        s.group_col = cfg.group_col;
    }
    if (!cfg.favored_value.empty()) {
        s.favored_value = cfg.favored_value;
    }
    const std::pair<const char*, const std::string*> required[] = {{"--label-col", &s.label_col},
                                                                   {"--positive-value", &s.positive_value},
                                                                   {"--group-col", &s.group_col},
                                                                   {"--favored-value", &s.favored_value}};
    for (const auto& [flag, value] : required) {
        if (value->empty()) {
            throw UsageError(std::string(flag) + " is required (or use --preset adult)");
        }
    }
    if (cfg.missing == "drop") {
        s.missing = MissingPolicy::drop;
    } else if (cfg.missing == "keep") {
        s.missing = MissingPolicy::keep;
    } else {
        throw UsageError("--missing must be 'drop' or 'keep'");
    }
    s.with_s = cfg.with_s;
    return s;
}

Manifest dataset_manifest(const RunConfig& cfg, const Schema& schema, const std::string& input)
{
    Manifest m;
    m.set("tool", "fairtrade 1");
    m.set("input", fs::path(input).filename().string());
    m.set("input_digest", file_digest(input));
    m.set("label_col", schema.label_col);
    m.set("positive_value", schema.positive_value);
    m.set("group_col", schema.group_col);
    m.set("favored_value", schema.favored_value);
    m.set("missing_policy", cfg.missing);
    m.set("missing_marker", schema.missing_marker);
    m.set("seed", std::to_string(cfg.seed));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", cfg.split);
    m.set("split_fraction", buf);
    m.set("split", "random, unstratified; first part = train");
    m.set("encoding", "one-hot categoricals; numerics z-scored with train-split mean and population sd");
    m.set("threshold_ties", "score > threshold accepts; equality rejects");
    m.set("massage_rounding", "m = round half-up of (P_w*n_b - P_b*n_w)/n; rank ties by ascending row");
    m.set("oracle_rounding", "flip count round half-up; flips by ascending row");
    return m;
}

Prepared prepare(const RunConfig& cfg, bool need_split = true)
{
    Prepared p;
    const std::string& input = single_input(cfg);
    p.schema = make_schema(cfg);
    p.raw = load_csv(input, p.schema);
    p.manifest = dataset_manifest(cfg, p.schema, input);
    if (!need_split) {
        const auto enc = FeatureEncoder::fit(p.raw, p.schema);
        p.warnings = enc.warnings();
        p.test = enc.transform(p.raw);
        return p;
    }
    const auto [train_idx, test_idx] = split_indices(p.raw.size(), cfg.split, cfg.seed);
    const RawTable train_raw = select_rows(p.raw, train_idx);
    const RawTable test_raw = select_rows(p.raw, test_idx);
    const auto enc = FeatureEncoder::fit(train_raw, p.schema);
    p.warnings = enc.warnings();
    p.train = enc.transform(train_raw);
    p.test = enc.transform(test_raw);
    return p;
}

fs::path output_dir(const RunConfig& cfg)
{
    fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    return dir;
}

void write_manifest(const RunConfig& cfg, const Manifest& manifest)
{
    std::ofstream out(output_dir(cfg) / "manifest.txt");
    manifest.write(out);
}

template <typename Writer> void write_file(const fs::path& path, Writer&& writer)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write '" + path.string() + "'");
    }
    writer(out);
}

std::string classifier_id(const RunConfig& cfg, bool massaged)
{
    return cfg.classifier + (cfg.with_s ? "_s" : "_nos") + (massaged ? "_massaged" : "");
}

std::string row_line(const std::string& name, const MetricBundle& m)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-22s %7.1f %7.1f %7.1f %7.1f %7.1f", name.c_str(), 100.0 * m.pi,
                  100.0 * m.accuracy, 100.0 * m.d, 100.0 * m.kappa, 100.0 * m.delta);
    return buf;
}

std::string row_header()
{
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-22s %7s %7s %7s %7s %7s", "(x 1e-2)", "pi", "A", "d", "kappa", "delta");
    return buf;
}

Dataset maybe_massaged(const RunConfig& cfg, const Dataset& train, bool& massaged)
{
    massaged = !cfg.massage_plan.empty();
    if (!massaged) {
        return train;
    }
    std::ifstream in(cfg.massage_plan);
    if (!in) {
        throw DataError("cannot open massage plan '" + cfg.massage_plan + "'");
    }
    return apply_massage(train, read_plan(in));
}

Model train_model(const RunConfig& cfg, const Dataset& train)
{
    if (cfg.classifier == "logistic") {
        return train_logistic(train, cfg.logistic);
    }
    if (cfg.classifier == "nb") {
        return train_naive_bayes(train, NaiveBayesConfig{cfg.variance_floor});
    }
    throw UsageError("--classifier must be 'logistic' or 'nb'");
}

const std::vector<std::string>& model_features(const Model& model)
{
    return std::visit([](const auto& m) -> const std::vector<std::string>& { return m.feature_names; }, model);
}

/// Loads --model, or trains one when no model file is given.
Model obtain_model(const RunConfig& cfg, const Prepared& p, std::string& id)
{
    if (cfg.model.empty()) {
        bool massaged = false;
        const Dataset train = maybe_massaged(cfg, p.train, massaged);
        id = classifier_id(cfg, massaged);
        return train_model(cfg, train);
    }
    std::ifstream in(cfg.model);
    if (!in) {
        throw DataError("cannot open model '" + cfg.model + "'");
    }
    std::string manifest;
    Model model = load_model(in, &manifest);
    if (manifest != p.manifest.hash()) {
        throw DataError("model '" + cfg.model + "' was built under manifest " + manifest
                        + ", which differs from the current run's " + p.manifest.hash());
    }
    if (model_features(model) != p.test.feature_names) {
        throw DataError("model '" + cfg.model + "' features do not match the encoded data (check --with-s)");
    }
    id = fs::path(cfg.model).stem().string();
    if (id.rfind("model_", 0) == 0) {
        id = id.substr(6);
    }
    return model;
}

void report_warnings(const Prepared& p, std::ostream& err)
{
    for (const auto& w : p.warnings) {
        err << "warning: " << w << '\n';
    }
}

// --- commands ---------------------------------------------------------------

void cmd_summarize(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const Prepared p = prepare(cfg, false);
    report_warnings(p, err);
    const DatasetSummary s = summarize(p.test);
    char buf[256];
    std::snprintf(buf, sizeof buf, "n       %lld\nalpha   %.4f\npi0     %.4f\nd0      %.4f\ndelta0  %.4f\n",
                  static_cast<long long>(s.n), s.alpha, s.pi0, s.d0, s.delta0);
    out << buf;
    out << "manifest " << p.manifest.hash() << '\n';
    write_manifest(cfg, p.manifest);
}

void cmd_train(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const Prepared p = prepare(cfg);
    report_warnings(p, err);
    bool massaged = false;
    const Dataset train = maybe_massaged(cfg, p.train, massaged);
    const Model model = train_model(cfg, train);
    const std::string id = classifier_id(cfg, massaged);
    const fs::path path = output_dir(cfg) / ("model_" + id + ".txt");
    write_file(path, [&](std::ostream& o) { save_model(model, o, p.manifest.hash()); });
    write_manifest(cfg, p.manifest);

    out << "model " << path.string() << '\n';
    if (const auto* lin = std::get_if<LinearModel>(&model)) {
        out << "epochs " << lin->epochs << "\nloss " << lin->final_loss << '\n';
    }
    const MetricBundle m = evaluate(p.test.labels, predict_at(score(model, p.test), cfg.threshold), p.test.groups);
    out << row_header() << '\n' << row_line(id, m) << '\n';
}

void cmd_massage(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const Prepared p = prepare(cfg);
    report_warnings(p, err);
    const LinearModel ranker = train_logistic(p.train, cfg.logistic);
    const MassagePlan plan = plan_massage(p.train, score_logistic(ranker, p.train));
    const Dataset massaged = apply_massage(p.train, plan);

    const fs::path path = output_dir(cfg) / "massage_plan.txt";
    write_file(path, [&](std::ostream& o) { write_plan(plan, o); });
    write_manifest(cfg, p.manifest);

    const DatasetSummary before = summarize(p.train);
    const DatasetSummary after = summarize(massaged);
    char buf[256];
    std::snprintf(buf, sizeof buf, "m %lld\npi0 %.6f -> %.6f\nd0 %.6f -> %.6f\n", static_cast<long long>(plan.m),
                  before.pi0, after.pi0, before.d0, after.d0);
    out << "plan " << path.string() << '\n' << buf;
}

void cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const Prepared p = prepare(cfg);
    report_warnings(p, err);
    std::string id;
    const Model model = obtain_model(cfg, p, id);
    const SweepGrid grid = SweepGrid::parse(cfg.grid);
    const SweepTable table =
        sweep(score(model, p.test), p.test.labels, p.test.groups, grid, SweepMetadata{id, p.manifest.hash(), cfg.seed});
    const fs::path path = output_dir(cfg) / ("sweep_" + id + ".dat");
    write_file(path, [&](std::ostream& o) { write_dat(to_dat(table), o); });
    write_manifest(cfg, p.manifest);
    out << "sweep " << path.string() << " (" << table.rows.size() << " rows)\n";
}

std::vector<double> parse_d_grid(const std::string& text, double d0)
{
    if (text.rfind("uniform:", 0) == 0) {
        const std::string count = text.substr(8);
        char* end = nullptr;
        const unsigned long n = std::strtoul(count.c_str(), &end, 10);
        if (count.empty() || *end != '\0' || n < 1) {
            throw UsageError("--d-grid 'uniform:N' needs a positive integer N");
        }
        return descending_grid(d0, n);
    }
    std::vector<double> grid;
    std::stringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) {
        char* end = nullptr;
        const double v = std::strtod(token.c_str(), &end);
        if (token.empty() || *end != '\0') {
            throw UsageError("--d-grid must be 'uniform:N' or a comma-separated list of targets");
        }
        grid.push_back(v);
    }
    if (grid.empty()) {
        throw UsageError("empty --d-grid");
    }
    return grid;
}

void cmd_oracle(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const Prepared p = prepare(cfg);
    report_warnings(p, err);
    const DatasetSummary s = summarize(p.test);
    const std::vector<double> grid = parse_d_grid(cfg.d_grid, s.d0);

    std::vector<OracleStrategy> strategies;
    if (cfg.strategy == "all") {
        strategies = {OracleStrategy::decrease_favored, OracleStrategy::increase_protected,
                      OracleStrategy::change_both_fixed_pi};
    } else {
        strategies = {parse_strategy(cfg.strategy)};
    }
    const fs::path dir = output_dir(cfg);
    for (const auto strategy : strategies) {
        const auto points = oracle_frontier(p.test.labels, p.test.groups, strategy, grid);
        const fs::path path = dir / ("oracle_" + std::string(to_string(strategy)) + ".dat");
        write_file(path, [&](std::ostream& o) { write_dat(frontier_to_dat(points, strategy, p.manifest.hash()), o); });
        std::size_t reachable = 0;
        for (const auto& pt : points) {
            reachable += pt.reachable ? 1 : 0;
        }
        out << "oracle " << path.string() << " (" << reachable << "/" << points.size() << " reachable)\n";
    }
    write_manifest(cfg, p.manifest);
}

BinaryVector read_decisions(const std::string& path, std::size_t expected)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open decisions '" + path + "'");
    }
    BinaryVector d;
    std::string token;
    while (in >> token) {
        if (token != "0" && token != "1") {
            throw DataError("decisions file must contain only 0/1 tokens, found '" + token + "'");
        }
        d.push_back(token == "1" ? 1 : 0);
    }
    if (d.size() != expected) {
        throw DataError("decisions file has " + std::to_string(d.size()) + " entries, test split has "
                        + std::to_string(expected));
    }
    return d;
}

void cmd_evaluate(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const Prepared p = prepare(cfg);
    report_warnings(p, err);
    const int sources = (cfg.oracle_row ? 1 : 0) + (cfg.model.empty() ? 0 : 1) + (cfg.decisions.empty() ? 0 : 1);
    if (sources != 1) {
        throw UsageError("evaluate needs exactly one of --oracle, --model, --decisions");
    }
    std::string name;
    BinaryVector decisions;
    if (cfg.oracle_row) {
        name = "data/oracle";
        decisions = p.test.labels;
    } else if (!cfg.decisions.empty()) {
        name = fs::path(cfg.decisions).stem().string();
        decisions = read_decisions(cfg.decisions, p.test.size());
    } else {
        const Model model = obtain_model(cfg, p, name);
        decisions = predict_at(score(model, p.test), cfg.threshold);
    }
    const MetricBundle m = evaluate(p.test.labels, decisions, p.test.groups);
    out << row_header() << '\n' << row_line(name, m) << '\n';
    write_manifest(cfg, p.manifest);
}

void cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream&)
{
    std::vector<SweepTable> tables;
    for (const auto& path : cfg.inputs) {
        std::ifstream in(path);
        if (!in) {
            throw DataError("cannot open '" + path + "'");
        }
        tables.push_back(sweep_from_dat(read_dat(in)));
    }
    const SweepComparison cmp = compare_sweeps(tables);
    const fs::path path = output_dir(cfg) / "comparison.dat";
    write_file(path, [&](std::ostream& o) { write_dat(comparison_to_dat(cmp), o); });
    const auto diffs = cmp.max_differences();
    out << "comparison " << path.string() << '\n';
    for (std::size_t k = 1; k < diffs.size(); ++k) {
        out << cmp.classifiers[k] << " vs " << cmp.classifiers[0] << ": max |dkappa| " << diffs[k].first
            << ", max |ddelta| " << diffs[k].second << '\n';
    }
}

std::vector<double> column_values(const DatTable& t, const std::string& name)
{
    const std::size_t c = t.column(name);
    std::vector<double> v;
    v.reserve(t.rows.size());
    for (const auto& row : t.rows) {
        v.push_back(row[c]);
    }
    return v;
}

struct Figure {
    std::string file;
    LineChart chart;
};

std::vector<Figure> sweep_figures(const std::vector<DatTable>& sweeps)
{
    Figure acc{"accuracy.svg", {"Accuracy", "p(+) output, pi", "Accuracy, A", -0.05, 1.05, -0.05, 1.05, {}}};
    Figure disc{"discrimination.svg",
                {"Discrimination", "p(+) output, pi", "Discrimination, d", -0.05, 1.05, -0.05, 1.05, {}}};
    Figure kappa{"kappa.svg", {"Normalized accuracy", "p(+) output, pi", "Kappa", -0.05, 1.05, -0.05, 1.05, {}}};
    Figure delta{"delta.svg",
                 {"Normalized discrimination", "p(+) output, pi", "Delta", -0.05, 1.05, -0.25, 1.05, {}}};

    for (const auto& t : sweeps) {
        const std::string id = t.meta("classifier").value_or("sweep");
        const auto pi = column_values(t, "pi");
        acc.chart.series.push_back({id, pi, column_values(t, "accuracy")});
        disc.chart.series.push_back({id, pi, column_values(t, "d")});
        kappa.chart.series.push_back({id, pi, column_values(t, "kappa")});
        delta.chart.series.push_back({id, pi, column_values(t, "delta")});
    }

    // reference curves from the first table's data columns
    const DatTable& ref = sweeps.front();
    const double pi0 = column_values(ref, "pi_data").front();
    const double d0 = column_values(ref, "d_data").front();
    const double delta0 = column_values(ref, "delta_data").front();
    std::vector<double> grid;
    std::vector<double> random_acc;
    for (int k = 0; k <= 100; ++k) {
        const double pi = k / 100.0;
        grid.push_back(pi);
        random_acc.push_back(random_accuracy(pi0, pi));
    }
    acc.chart.series.push_back({"random", grid, random_acc});
    kappa.chart.series.push_back({"random", {0.0, 1.0}, {0.0, 0.0}});
    disc.chart.series.push_back({"d data", {0.0, 1.0}, {d0, d0}});
    delta.chart.series.push_back({"delta data", {0.0, 1.0}, {delta0, delta0}});
    for (Figure* f : {&disc, &delta}) {
        f->chart.series.push_back({"p(+) data", {pi0, pi0}, {f->chart.y_min, f->chart.y_max}, true});
    }
    return {acc, disc, kappa, delta};
}

std::vector<Figure> oracle_figures(const std::vector<DatTable>& oracles)
{
    Figure raw{"oracle_accuracy.svg", {"Oracle", "Discrimination, d", "Accuracy, A", 0, 1, 0, 1, {}}};
    Figure norm{"oracle_kappa.svg", {"Oracle", "Norm. discrimination, delta", "Kappa", 0, 1, 0, 1, {}}};
    for (const auto& t : oracles) {
        const std::string id = t.meta("strategy").value_or("oracle");
        raw.chart.series.push_back({id, column_values(t, "d"), column_values(t, "accuracy")});
        norm.chart.series.push_back({id, column_values(t, "delta"), column_values(t, "kappa")});
    }
    for (Figure* f : {&raw, &norm}) {
        std::tie(f->chart.x_min, f->chart.x_max) = padded_range(f->chart.series, true);
        std::tie(f->chart.y_min, f->chart.y_max) = padded_range(f->chart.series, false);
    }
    return {raw, norm};
}

void cmd_report(const RunConfig& cfg, std::ostream& out, std::ostream&)
{
    if (cfg.inputs.empty()) {
        throw UsageError("report needs at least one --input table");
    }
    std::vector<DatTable> sweeps;
    std::vector<DatTable> oracles;
    for (const auto& path : cfg.inputs) {
        std::ifstream in(path);
        if (!in) {
            throw DataError("cannot open '" + path + "'");
        }
        DatTable t = read_dat(in);
        if (t.rows.empty()) {
            throw DataError("table '" + path + "' has no rows");
        }
        const std::string kind = t.meta("kind").value_or("");
        if (kind == "sweep") {
            sweeps.push_back(std::move(t));
        } else if (kind == "oracle") {
            oracles.push_back(std::move(t));
        } else {
            throw DataError("table '" + path + "' is neither a sweep nor an oracle frontier");
        }
    }

    // render everything before writing anything
    std::vector<std::pair<std::string, std::string>> rendered;
    if (!sweeps.empty()) {
        for (const auto& f : sweep_figures(sweeps)) {
            rendered.emplace_back(f.file, render_svg(f.chart));
        }
    }
    if (!oracles.empty()) {
        for (const auto& f : oracle_figures(oracles)) {
            rendered.emplace_back(f.file, render_svg(f.chart));
        }
    }
    const fs::path dir = output_dir(cfg);
    for (const auto& [file, svg] : rendered) {
        write_file(dir / file, [&](std::ostream& o) { o << svg; });
        out << "figure " << (dir / file).string() << '\n';
    }
}

void cmd_synth(const RunConfig& cfg, std::ostream& out, std::ostream&)
{
    const Dataset ds = synthesize(cfg.n, cfg.alpha, cfg.pi0, cfg.d0, cfg.seed, SynthesisOptions{cfg.noise});
    const fs::path path = output_dir(cfg) / "synthetic.csv";
    write_file(path, [&](std::ostream& o) { write_csv(ds, o); });
    out << "data " << path.string() << '\n';
}

// --- option wiring ----------------------------------------------------------

void add_schema_options(CLI::App* app, RunConfig& cfg)
{
    app->add_option("--preset", cfg.preset, "Column roles preset (adult)");
    app->add_option("--label-col", cfg.label_col, "Label column name");
    app->add_option("--positive-value", cfg.positive_value, "Label value meaning accept (+)");
    app->add_option("--group-col", cfg.group_col, "Protected attribute column name");
    app->add_option("--favored-value", cfg.favored_value, "Group value of the favored group (w)");
    app->add_option("--missing", cfg.missing, "Rows with the '?' marker: drop|keep")->capture_default_str();
    app->add_flag("--with-s", cfg.with_s, "Include the protected attribute among the features");
    app->add_option("--split", cfg.split, "Training fraction of the random split")->capture_default_str();
}

void add_classifier_options(CLI::App* app, RunConfig& cfg)
{
    app->add_option("--classifier", cfg.classifier, "logistic|nb")->capture_default_str();
    app->add_option("--learning-rate", cfg.logistic.learning_rate)->capture_default_str();
    app->add_option("--max-epochs", cfg.logistic.max_epochs)->capture_default_str();
    app->add_option("--tolerance", cfg.logistic.tolerance)->capture_default_str();
    app->add_option("--l2", cfg.logistic.l2)->capture_default_str();
    app->add_option("--variance-floor", cfg.variance_floor)->capture_default_str();
    app->add_option("--massage-plan", cfg.massage_plan, "Relabel the training split with this plan first");
}

std::uint64_t default_seed()
{
    const char* env = std::getenv(kSeedEnv);
    if (env == nullptr || *env == '\0') {
        return kDefaultSeed;
    }
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') {
        throw UsageError(std::string(kSeedEnv) + " must be a non-negative integer");
    }
    return v;
}

int exit_code_for(const std::exception& e)
{
    if (dynamic_cast<const UsageError*>(&e) != nullptr) {
        return kExitUsage;
    }
    if (dynamic_cast<const InfeasibleError*>(&e) != nullptr) {
        return kExitInfeasible;
    }
    return kExitData;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    CLI::App app{"Accuracy and discrimination of binary classifiers at matched acceptance rates", "fairtrade"};
    app.require_subcommand(1);
    std::optional<std::uint64_t> seed_flag;

    const auto sub = [&](const char* name, const char* help) {
        CLI::App* s = app.add_subcommand(name, help);
        s->add_option("--output-dir", cfg.output_dir, "Directory for outputs")->capture_default_str();
        s->add_option("--seed", seed_flag, "Random seed (default 42, or $FAIRTRADE_SEED)");
        s->callback([&cfg, s] { cfg.command = s->get_name(); });
        return s;
    };

    auto* summarize_cmd = sub("summarize", "Print pi0, alpha, d0 and delta0 of a dataset");
    summarize_cmd->add_option("--input", cfg.inputs, "CSV file")->required()->expected(1);
    add_schema_options(summarize_cmd, cfg);

    auto* train_cmd = sub("train", "Train a classifier on the training split");
    train_cmd->add_option("--input", cfg.inputs, "CSV file")->required()->expected(1);
    train_cmd->add_option("--threshold", cfg.threshold)->capture_default_str();
    add_schema_options(train_cmd, cfg);
    add_classifier_options(train_cmd, cfg);

    auto* massage_cmd = sub("massage", "Plan label massaging of the training split");
    massage_cmd->add_option("--input", cfg.inputs, "CSV file")->required()->expected(1);
    add_schema_options(massage_cmd, cfg);
    add_classifier_options(massage_cmd, cfg);

    auto* sweep_cmd = sub("sweep", "Sweep the decision threshold over the test split");
    sweep_cmd->add_option("--input", cfg.inputs, "CSV file")->required()->expected(1);
    sweep_cmd->add_option("--model", cfg.model, "Model file from 'train' (otherwise trains one)");
    sweep_cmd->add_option("--grid", cfg.grid, "unique|uniform:N|t1,t2,...")->capture_default_str();
    add_schema_options(sweep_cmd, cfg);
    add_classifier_options(sweep_cmd, cfg);

    auto* oracle_cmd = sub("oracle", "Oracle accuracy/discrimination frontiers on the test split");
    oracle_cmd->add_option("--input", cfg.inputs, "CSV file")->required()->expected(1);
    oracle_cmd
        ->add_option("--strategy", cfg.strategy, "all|decrease_favored|increase_protected|change_both_fixed_pi")
        ->capture_default_str();
    oracle_cmd->add_option("--d-grid", cfg.d_grid, "uniform:N (d0 down to 0) or d1,d2,...")->capture_default_str();
    add_schema_options(oracle_cmd, cfg);

    auto* evaluate_cmd = sub("evaluate", "Print a table row (pi, A, d, kappa, delta) x 1e-2 on the test split");
    evaluate_cmd->add_option("--input", cfg.inputs, "CSV file")->required()->expected(1);
    evaluate_cmd->add_option("--model", cfg.model, "Model file from 'train'");
    evaluate_cmd->add_flag("--oracle", cfg.oracle_row, "Evaluate perfect predictions");
    evaluate_cmd->add_option("--decisions", cfg.decisions, "File of 0/1 decisions for the test split");
    evaluate_cmd->add_option("--threshold", cfg.threshold)->capture_default_str();
    add_schema_options(evaluate_cmd, cfg);
    add_classifier_options(evaluate_cmd, cfg);

    auto* compare_cmd = sub("compare", "Align sweeps by acceptance rate");
    compare_cmd->add_option("--input", cfg.inputs, "Sweep .dat files")->required()->expected(2, 64);

    auto* report_cmd = sub("report", "Render .dat tables as SVG charts");
    report_cmd->add_option("--input", cfg.inputs, "Sweep or oracle .dat files")->required()->expected(1, 64);

    auto* synth_cmd = sub("synth", "Write a synthetic dataset with given alpha, pi0, d0");
    synth_cmd->add_option("--n", cfg.n)->capture_default_str();
    synth_cmd->add_option("--alpha", cfg.alpha)->capture_default_str();
    synth_cmd->add_option("--pi0", cfg.pi0)->capture_default_str();
    synth_cmd->add_option("--d0", cfg.d0)->capture_default_str();
    synth_cmd->add_option("--noise", cfg.noise, "Number of pure-noise features")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) {
        reversed.pop_back();  // program name
    }
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "fairtrade: usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        cfg.seed = seed_flag ? *seed_flag : default_seed();
        using Command = void (*)(const RunConfig&, std::ostream&, std::ostream&);
        const std::pair<const char*, Command> commands[] = {
            {"summarize", cmd_summarize}, {"train", cmd_train},     {"massage", cmd_massage},
            {"sweep", cmd_sweep},         {"oracle", cmd_oracle},   {"evaluate", cmd_evaluate},
            {"compare", cmd_compare},     {"report", cmd_report},   {"synth", cmd_synth},
        };
        for (const auto& [name, fn] : commands) {
            if (cfg.command == name) {
                fn(cfg, out, err);
                return kExitOk;
            }
        }
        throw UsageError("unknown command");
    } catch (const std::exception& e) {
        err << "fairtrade " << cfg.command << ": error: " << e.what() << '\n';
        return exit_code_for(e);
    }
}

} // namespace fairtrade::cli
