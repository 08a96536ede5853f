#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "spf/mixture.hpp"

namespace spf::data {

/// Generated points with their ground-truth classes, before any splitting.
struct RawPoints {
    int feature_dim = 2;
    int num_classes = 2;
    std::vector<std::vector<double>> x;
    std::vector<int> y;
};

/// Two interleaving half-circles: class 0 on (cos t, sin t), class 1 on
/// (1-cos t, 0.5-sin t), t evenly spaced over [0, pi], plus isotropic
/// Gaussian noise. Deterministic per seed.
RawPoints make_two_moons(int n, double noise_sigma, uint64_t seed);

/// Labeled/unlabeled/test partition. The unlabeled ground truth is kept only
/// for evaluation; training updates must never read it.
struct Dataset {
    int feature_dim = 2;
    int num_classes = 2;
    std::vector<std::vector<double>> labeled_x;
    std::vector<int> labeled_y;
    std::vector<std::vector<double>> unlabeled_x;
    std::vector<std::vector<double>> test_x;
    std::vector<int> test_y;
    std::vector<int> unlabeled_truth;  // evaluation only
};

/// Holds out a stratified test split first, then draws `per_class` labeled
/// samples per class uniformly; the rest becomes unlabeled.
Dataset split_labeled(const RawPoints& points, int per_class, uint64_t seed,
                      double test_fraction = 0.2);

enum class AugmentStrength { Weak, Strong };

struct AugmentSpec {
    double weak_sigma = 0.05;
    double strong_sigma = 0.15;
};

/// Adds isotropic Gaussian jitter with the selected sigma.
std::vector<double> augment(const std::vector<double>& point, const AugmentSpec& spec,
                            AugmentStrength strength, std::mt19937_64& rng);

/// Draws from a two-component Beta mixture, keeping the component of origin
/// for evaluation (AUROC oracles).
struct MixtureSample {
    std::vector<double> scores;
    std::vector<int> origins;
};

MixtureSample sample_beta_mixture(const mixture::MixtureModel& model, int n, uint64_t seed);

/// CSV columns: x1,x2,split,label,hidden_truth (label empty for unlabeled rows).
void export_csv(const Dataset& ds, const std::string& path);

/// Reads x1,x2[,label] rows; a leading non-numeric row is treated as a header.
/// Points without a label column get class -1 and cannot be split.
RawPoints import_points_csv(const std::string& path);

/// Config-level description of a dataset.
struct DatasetSpec {
    std::string generator = "two-moons";  // or "csv"
    int n = 1000;
    double noise = 0.1;
    int per_class_labels = 5;
    double test_fraction = 0.2;
    std::string csv_path;  // generator == "csv"
};

Dataset make_dataset(const DatasetSpec& spec, uint64_t seed);

}  // namespace spf::data
