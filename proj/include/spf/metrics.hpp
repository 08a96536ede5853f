#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spf/mixture.hpp"
#include "spf/nn.hpp"

namespace spf::metrics {

/// Rank-based AUROC (Mann-Whitney) with ties counted half: the probability a
/// random positive outranks a random negative. Absent when either group is empty.
std::optional<double> auroc(const std::vector<double>& scores,
                            const std::vector<uint8_t>& positives);

/// Fraction of argmax predictions differing from the labels.
double error_rate(const nn::MlpClassifier& model, const nn::Matrix& inputs,
                  const std::vector<int>& labels);

/// Mean cross-entropy against hard labels.
double mean_cross_entropy(const nn::MlpClassifier& model, const nn::Matrix& inputs,
                          const std::vector<int>& labels);

struct Quartiles {
    double median = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
};

struct ConfidenceSummary {
    std::optional<Quartiles> correct;
    std::optional<Quartiles> incorrect;
};

/// Median and quartile range of confidences, per correctness group.
ConfidenceSummary confidence_summary(const std::vector<double>& confidences,
                                     const std::vector<uint8_t>& correct);

/// Smallest z on the 1e-4 grid over (0,1) such that posterior_correct stays at
/// or above weight_level for every grid point >= z; absent if none exists.
std::optional<double> virtual_threshold(const mixture::MixtureModel& model,
                                        double weight_level = 0.95);

/// One metrics.csv row.
struct MetricsRecord {
    int epoch = 0;
    double test_error = 0.0;
    double test_loss = 0.0;
    double labeled_train_loss = 0.0;
    std::optional<double> filter_auroc;
    std::optional<Quartiles> conf_correct;
    std::optional<Quartiles> conf_incorrect;
    std::optional<double> virtual_threshold;
    double mean_pseudo_weight = 0.0;
    double pseudo_accuracy = 0.0;
    // meta-model diagnostics (per-epoch refits of every family/feature combination)
    std::optional<double> auroc_bmm_conf;
    std::optional<double> auroc_gmm_conf;
    std::optional<double> auroc_bmm_loss;
    std::optional<double> auroc_gmm_loss;
};

std::string metrics_csv_header(bool with_diagnostics);
std::string metrics_csv_row(const MetricsRecord& r, bool with_diagnostics);

}  // namespace spf::metrics
