#include "spf/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "spf/io.hpp"

namespace spf::data {

namespace {

std::vector<std::vector<int>> indices_by_class(const RawPoints& points) {
    std::vector<std::vector<int>> by_class(points.num_classes);
    for (size_t i = 0; i < points.y.size(); ++i) {
        const int c = points.y[i];
        if (c < 0 || c >= points.num_classes) {
            throw std::invalid_argument("split_labeled: class id out of range");
        }
        by_class[c].push_back(static_cast<int>(i));
    }
    return by_class;
}

}  // namespace

RawPoints make_two_moons(int n, double noise_sigma, uint64_t seed) {
    if (n < 2) throw std::invalid_argument("make_two_moons: n must be at least 2");
    RawPoints out;
    const int n0 = n - n / 2;
    const int n1 = n / 2;
    out.x.reserve(n);
    out.y.reserve(n);
    auto arc_angle = [](int i, int m) {
        return m == 1 ? 0.0 : std::numbers::pi * i / (m - 1);
    };
    for (int i = 0; i < n0; ++i) {
        const double t = arc_angle(i, n0);
        out.x.push_back({std::cos(t), std::sin(t)});
        out.y.push_back(0);
    }
    for (int i = 0; i < n1; ++i) {
        const double t = arc_angle(i, n1);
        out.x.push_back({1.0 - std::cos(t), 0.5 - std::sin(t)});
        out.y.push_back(1);
    }
    if (noise_sigma > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> noise(0.0, noise_sigma);
        for (auto& p : out.x) {
            for (double& v : p) v += noise(rng);
        }
    }
    return out;
}

Dataset split_labeled(const RawPoints& points, int per_class, uint64_t seed,
                      double test_fraction) {
    if (per_class < 1) throw std::invalid_argument("split_labeled: per_class must be >= 1");
    if (test_fraction < 0.0 || test_fraction >= 1.0) {
        throw std::invalid_argument("split_labeled: test_fraction must be in [0,1)");
    }
    Dataset ds;
    ds.feature_dim = points.feature_dim;
    ds.num_classes = points.num_classes;

    std::mt19937_64 rng(seed);
    for (auto& members : indices_by_class(points)) {
        std::shuffle(members.begin(), members.end(), rng);
        const int n_test = static_cast<int>(
            std::llround(test_fraction * static_cast<double>(members.size())));
        if (per_class > static_cast<int>(members.size()) - n_test) {
            throw std::invalid_argument(
                "split_labeled: per_class exceeds available samples after test holdout");
        }
        int i = 0;
        for (; i < n_test; ++i) {
            ds.test_x.push_back(points.x[members[i]]);
            ds.test_y.push_back(points.y[members[i]]);
        }
        for (; i < n_test + per_class; ++i) {
            ds.labeled_x.push_back(points.x[members[i]]);
            ds.labeled_y.push_back(points.y[members[i]]);
        }
        for (; i < static_cast<int>(members.size()); ++i) {
            ds.unlabeled_x.push_back(points.x[members[i]]);
            ds.unlabeled_truth.push_back(points.y[members[i]]);
        }
    }
    return ds;
}

std::vector<double> augment(const std::vector<double>& point, const AugmentSpec& spec,
                            AugmentStrength strength, std::mt19937_64& rng) {
    const double sigma =
        strength == AugmentStrength::Weak ? spec.weak_sigma : spec.strong_sigma;
    std::vector<double> out = point;
    if (sigma > 0.0) {
        std::normal_distribution<double> noise(0.0, sigma);
        for (double& v : out) v += noise(rng);
    }
    return out;
}

MixtureSample sample_beta_mixture(const mixture::MixtureModel& model, int n, uint64_t seed) {
    if (model.family != mixture::MixtureFamily::Beta) {
        throw std::invalid_argument("sample_beta_mixture: Beta family required");
    }
    MixtureSample out;
    out.scores.reserve(n);
    out.origins.reserve(n);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
        const int j = unif(rng) < model.weights[0] ? 0 : 1;
        std::gamma_distribution<double> ga(model.beta[j].alpha, 1.0);
        std::gamma_distribution<double> gb(model.beta[j].beta, 1.0);
        const double a = ga(rng);
        const double b = gb(rng);
        out.scores.push_back(a / (a + b));
        out.origins.push_back(j);
    }
    return out;
}

void export_csv(const Dataset& ds, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("export_csv: cannot open " + path);
    f << "x1,x2,split,label,hidden_truth\n";
    auto row = [&](const std::vector<double>& x, const char* split, int label, int truth) {
        for (double v : x) f << io::fmt_double(v) << ',';
        f << split << ',';
        if (label >= 0) f << label;
        f << ',' << truth << '\n';
    };
    for (size_t i = 0; i < ds.labeled_x.size(); ++i) {
        row(ds.labeled_x[i], "labeled", ds.labeled_y[i], ds.labeled_y[i]);
    }
    for (size_t i = 0; i < ds.unlabeled_x.size(); ++i) {
        row(ds.unlabeled_x[i], "unlabeled", -1, ds.unlabeled_truth[i]);
    }
    for (size_t i = 0; i < ds.test_x.size(); ++i) {
        row(ds.test_x[i], "test", ds.test_y[i], ds.test_y[i]);
    }
}

RawPoints import_points_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("import_points_csv: cannot open " + path);
    RawPoints out;
    out.num_classes = 0;
    std::string line;
    bool first = true;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() < 2 || cells.size() > 3) {
            throw std::runtime_error("import_points_csv: expected 2 or 3 columns");
        }
        try {
            const double x1 = std::stod(cells[0]);
            const double x2 = std::stod(cells[1]);
            const int label = cells.size() == 3 ? std::stoi(cells[2]) : -1;
            out.x.push_back({x1, x2});
            out.y.push_back(label);
            if (label >= 0) out.num_classes = std::max(out.num_classes, label + 1);
        } catch (const std::exception&) {
            if (first) {
                first = false;
                continue;  // header row
            }
            throw std::runtime_error("import_points_csv: malformed row: " + line);
        }
        first = false;
    }
    if (out.x.empty()) throw std::runtime_error("import_points_csv: no points in " + path);
    if (out.num_classes == 0) out.num_classes = 1;
    return out;
}

Dataset make_dataset(const DatasetSpec& spec, uint64_t seed) {
    RawPoints points;
    if (spec.generator == "two-moons") {
        points = make_two_moons(spec.n, spec.noise, seed);
    } else if (spec.generator == "csv") {
        points = import_points_csv(spec.csv_path);
        for (int y : points.y) {
            if (y < 0) {
                throw std::invalid_argument(
                    "make_dataset: csv points need a label column to be split");
            }
        }
    } else {
        throw std::invalid_argument("make_dataset: unknown generator " + spec.generator);
    }
    return split_labeled(points, spec.per_class_labels, seed + 1, spec.test_fraction);
}

}  // namespace spf::data
