// Command-line front end: featurize, evaluate, noise-eval, visualize.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rulls/dataset.hpp"
#include "rulls/errors.hpp"
#include "rulls/eval.hpp"
#include "rulls/featurize.hpp"
#include "rulls/sparse.hpp"

namespace {

using namespace rulls;

struct RunConfig {
    std::string input;
    std::string output;
    int label_col = -2;  // -2 = unset, -1 = last column
    bool no_header = false;
    std::string method = "rulls";
    FeatureConfig feat;
    std::string task = "classify";
    double train_fraction = 0.8;
    int epochs = 20;
    double lambda = 1e-4;
    int k = 0;  // 0 = class count
    std::string noise_axis = "rows";
    double noise_fraction = 0.1;
    std::uint64_t seed = 0;
};

std::optional<int> label_column(const RunConfig& rc) {
    if (rc.label_col == -2) return std::nullopt;
    return rc.label_col;
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw DataError("cannot write file: " + tmp);
        out << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw DataError("cannot rename " + tmp + " to " + path);
}

std::string format_report(const std::vector<std::pair<std::string, double>>& metrics) {
    std::ostringstream os;
    for (const auto& [key, value] : metrics) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6f", value);
        os << key << '\t' << buf << '\n';
    }
    return os.str();
}

FeatureConfig make_feature_config(const RunConfig& rc) {
    FeatureConfig f = rc.feat;
    f.method = method_from_string(rc.method);
    f.seed = rc.seed;
    return f;
}

struct EvalResult {
    std::vector<std::pair<std::string, double>> metrics;
};

// Shared by evaluate and noise-eval: featurize the full dataset, compare the
// method's features against the raw features under the same model and split.
EvalResult run_eval(const Dataset& data, const RunConfig& rc) {
    if (!data.has_labels())
        throw DataError("evaluation requires a label column (--label-col)");
    FeatureConfig fc = make_feature_config(rc);
    SparseFeatureMatrix feat = compute_features(data, fc);
    FeatureConfig resolved = resolve_config(fc, data);

    FeatureRows raw_rows = FeatureRows::from_dense(data.values);
    FeatureRows method_rows = FeatureRows::from_sparse(feat);

    EvalResult r;
    if (rc.task == "classify") {
        SplitIndices idx = split(data, rc.train_fraction, rc.seed);
        std::vector<int> train_labels, test_labels;
        for (int i : idx.train) train_labels.push_back(data.labels[i]);
        for (int i : idx.test) test_labels.push_back(data.labels[i]);
        for (const auto& [name, rows] :
             {std::pair<std::string, const FeatureRows*>{"raw", &raw_rows},
              {rc.method, &method_rows}}) {
            ClassifierModel model =
                train_linear_classifier(rows->select(idx.train), train_labels,
                                        rc.epochs, rc.lambda, rc.seed);
            r.metrics.emplace_back("accuracy_" + name,
                                   accuracy(model, rows->select(idx.test), test_labels));
        }
    } else if (rc.task == "cluster") {
        const int k = rc.k > 0 ? rc.k : data.num_classes();
        for (const auto& [name, rows] :
             {std::pair<std::string, const FeatureRows*>{"raw", &raw_rows},
              {rc.method, &method_rows}}) {
            ClusterAssignment ca = kmeans(*rows, k, 300, rc.seed);
            r.metrics.emplace_back("nmi_" + name, nmi(ca.labels, data.labels));
        }
    } else {
        throw ConfigError("task must be classify or cluster");
    }
    r.metrics.emplace_back("sparsity", static_cast<double>(sparsity(feat)));
    r.metrics.emplace_back("sparsity_ratio",
                           sparsity_ratio(feat, resolved.landmarks, resolved.iterations));
    return r;
}

int cmd_featurize(const RunConfig& rc) {
    auto t0 = std::chrono::steady_clock::now();
    Dataset data = load_csv(rc.input, label_column(rc), !rc.no_header);
    FeatureConfig fc = make_feature_config(rc);
    SparseFeatureMatrix feat = compute_features(data, fc);
    FeatureConfig resolved = resolve_config(fc, data);
    save_sparse(feat, rc.output);

    std::vector<std::pair<std::string, double>> metrics = {
        {"sparsity", static_cast<double>(sparsity(feat))},
        {"sparsity_ratio", sparsity_ratio(feat, resolved.landmarks, resolved.iterations)},
    };
    write_atomic(rc.output + ".report", format_report(metrics));
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << format_report(metrics);
    std::printf("wall_time_seconds\t%.6f\n", wall);
    return 0;
}

int cmd_evaluate(const RunConfig& rc) {
    auto t0 = std::chrono::steady_clock::now();
    Dataset data = load_csv(rc.input, label_column(rc), !rc.no_header);
    EvalResult r = run_eval(data, rc);
    write_atomic(rc.output, format_report(r.metrics));
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << format_report(r.metrics);
    std::printf("wall_time_seconds\t%.6f\n", wall);
    return 0;
}

int cmd_noise_eval(const RunConfig& rc) {
    auto t0 = std::chrono::steady_clock::now();
    Dataset clean = load_csv(rc.input, label_column(rc), !rc.no_header);

    Dataset noisy = clean;
    if (rc.noise_fraction > 0.0) {
        if (rc.noise_axis == "rows")
            noisy = add_row_noise(clean, rc.noise_fraction, rc.seed);
        else if (rc.noise_axis == "cols")
            noisy = add_column_noise(clean, rc.noise_fraction, rc.seed);
        else
            throw ConfigError("noise axis must be rows or cols");
    } else if (rc.noise_fraction < 0.0) {
        throw ConfigError("noise fraction must be non-negative");
    }

    EvalResult rc_clean = run_eval(clean, rc);
    EvalResult rc_noisy = run_eval(noisy, rc);

    std::vector<std::pair<std::string, double>> metrics;
    for (size_t i = 0; i < rc_clean.metrics.size(); ++i) {
        const auto& [key, clean_v] = rc_clean.metrics[i];
        metrics.emplace_back(key + "_clean", clean_v);
        metrics.emplace_back(key + "_noisy", rc_noisy.metrics[i].second);
        if (key.rfind("accuracy_", 0) == 0 || key.rfind("nmi_", 0) == 0)
            metrics.emplace_back("delta_" + key, clean_v - rc_noisy.metrics[i].second);
    }
    write_atomic(rc.output, format_report(metrics));
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << format_report(metrics);
    std::printf("wall_time_seconds\t%.6f\n", wall);
    return 0;
}

int cmd_visualize(const RunConfig& rc) {
    SparseFeatureMatrix feat = load_sparse(rc.input);
    double vmax = 0;
    for (const auto& row : feat.entries)
        for (const auto& [c, v] : row) vmax = std::max(vmax, v);
    if (vmax <= 0) throw DataError("empty feature matrix, nothing to render");

    std::ostringstream img;
    img << "P5\n" << feat.cols << ' ' << feat.rows << "\n255\n";
    std::string pixels(static_cast<size_t>(feat.rows) * feat.cols, '\0');
    for (int i = 0; i < feat.rows; ++i)
        for (const auto& [c, v] : feat.entries[i])
            pixels[static_cast<size_t>(i) * feat.cols + c] =
                static_cast<char>(static_cast<unsigned char>(
                    std::lround(255.0 * v / vmax)));
    img << pixels;
    write_atomic(rc.output, img.str());
    return 0;
}

void add_common_flags(CLI::App* app, RunConfig& rc) {
    app->add_option("--input", rc.input, "Input file")->required();
    app->add_option("--output", rc.output, "Output file")->required();
    app->add_option("--label-col", rc.label_col, "Label column index (-1 = last)");
    app->add_flag("--no-header", rc.no_header, "Input CSV has no header row");
    app->add_option("--method", rc.method, "Feature method")
        ->check(CLI::IsMember({"rulls", "rulls-robust", "variant1", "variant2", "randlocal"}));
    app->add_option("--iterations", rc.feat.iterations, "Iterations T");
    app->add_option("--landmarks", rc.feat.landmarks, "Landmarks per iteration (0 = auto)");
    app->add_option("--nearest", rc.feat.nearest, "Nearest landmarks encoded per point");
    app->add_option("--k-eps", rc.feat.k_eps, "Neighborhood size for local PCA");
    app->add_option("--reg-p", rc.feat.reg_p, "Regularization floor multiplier");
    app->add_option("--variance-threshold", rc.feat.variance_threshold,
                    "Variance mass kept by local PCA");
    app->add_option("--normalize", rc.feat.normalize,
                    "Neighborhood normalization flag (0|1)");
    app->add_option("--proj-dim", rc.feat.projection_dim,
                    "Projection/subsample dimension (0 = 0.2*m)");
    app->add_option("--trim-fraction", rc.feat.trim_fraction,
                    "Trim fraction for rulls-robust");
    app->add_option("--seed", rc.seed, "Master seed")->envname("RULLS_SEED");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RULLS: sparse landmark-subspace feature engineering"};
    app.require_subcommand(1);
    app.set_config("--config");

    RunConfig rc;

    CLI::App* feat = app.add_subcommand("featurize", "Build a sparse feature matrix");
    add_common_flags(feat, rc);

    CLI::App* eval = app.add_subcommand("evaluate", "Compare method vs raw features");
    add_common_flags(eval, rc);
    eval->add_option("--task", rc.task, "classify or cluster")
        ->check(CLI::IsMember({"classify", "cluster"}));
    eval->add_option("--train-fraction", rc.train_fraction, "Train split fraction");
    eval->add_option("--epochs", rc.epochs, "Classifier epochs");
    eval->add_option("--lambda", rc.lambda, "Classifier regularization");
    eval->add_option("--k", rc.k, "Cluster count (0 = class count)");

    CLI::App* noise = app.add_subcommand("noise-eval", "Evaluate on clean and corrupted data");
    add_common_flags(noise, rc);
    noise->add_option("--task", rc.task, "classify or cluster")
        ->check(CLI::IsMember({"classify", "cluster"}));
    noise->add_option("--train-fraction", rc.train_fraction, "Train split fraction");
    noise->add_option("--epochs", rc.epochs, "Classifier epochs");
    noise->add_option("--lambda", rc.lambda, "Classifier regularization");
    noise->add_option("--k", rc.k, "Cluster count (0 = class count)");
    noise->add_option("--noise-axis", rc.noise_axis, "rows or cols")
        ->check(CLI::IsMember({"rows", "cols"}));
    noise->add_option("--noise-fraction", rc.noise_fraction, "Fraction to corrupt");

    CLI::App* vis = app.add_subcommand("visualize", "Render a sparse matrix file as PGM");
    vis->add_option("--input", rc.input, "Sparse matrix file")->required();
    vis->add_option("--output", rc.output, "Output PGM file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (feat->parsed()) return cmd_featurize(rc);
        if (eval->parsed()) return cmd_evaluate(rc);
        if (noise->parsed()) return cmd_noise_eval(rc);
        if (vis->parsed()) return cmd_visualize(rc);
    } catch (const rulls::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const rulls::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const rulls::DegeneracyError& e) {
        std::cerr << "numerical degeneracy: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
