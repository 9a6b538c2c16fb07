#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace few::fitness {

enum class Metric { r2, silhouette, fisher };

std::string_view metric_name(Metric) noexcept;
Metric metric_from_name(std::string_view);

// Score of one engineered feature. `aggregate` is higher-is-better; the
// per-case decomposition (lower-is-better) exists for r2 and silhouette and
// feeds epsilon-lexicase survival.
struct FitnessRecord {
    double aggregate = 0.0;
    std::optional<std::vector<double>> per_case;
};

// Coefficient of determination of the feature against the numeric class
// labels 0..k-1. At most 1; exactly 1 iff phi == y elementwise. Throws
// DegenerateTargetError when y is constant.
double r2_fitness(std::span<const double> phi, std::span<const int> y);

// Sum over unordered class pairs of |mu_i - mu_j| / sqrt(var_i + var_j),
// with the denominator floored at 1e-9. Variances are population variances.
double fisher_fitness(std::span<const double> phi, std::span<const int> y, int n_classes);

struct SilhouetteResult {
    double mean = 0.0;
    std::vector<double> per_sample;
};

// Per-sample silhouette on the scalar feature with squared-Euclidean
// distances. Cohesion a_i excludes the sample itself (divisor |class|-1);
// the contrast class is the nearest other class by centroid distance.
// Singleton classes and 0/0 both yield s_i = 0; every s_i is in [-1, 1].
SilhouetteResult silhouette_fitness(std::span<const double> phi, std::span<const int> y,
                                    int n_classes);

// argmin over classes != query of |centroid(query) - centroid(other)|;
// ties go to the lowest class index.
int nearest_other_class(std::span<const double> phi, std::span<const int> y, int n_classes,
                        int query);

// r2 -> squared residuals; silhouette -> 1 - s_i (in [0, 2]). The Fisher
// criterion has no per-case decomposition and throws UnsupportedError.
std::vector<double> per_case_errors(Metric metric, std::span<const double> phi,
                                    std::span<const int> y, int n_classes);

// Aggregate + per-case in one pass (per-case absent for fisher).
FitnessRecord evaluate(Metric metric, std::span<const double> phi, std::span<const int> y,
                       int n_classes);

}  // namespace few::fitness
