#include "few/fitness.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "few/errors.hpp"
#include "few/kernels.hpp"

namespace few::fitness {

std::string_view metric_name(Metric m) noexcept {
    switch (m) {
        case Metric::r2: return "r2";
        case Metric::silhouette: return "silhouette";
        case Metric::fisher: return "fisher";
    }
    return "?";
}

Metric metric_from_name(std::string_view name) {
    if (name == "r2") return Metric::r2;
    if (name == "silhouette") return Metric::silhouette;
    if (name == "fisher") return Metric::fisher;
    throw Error("unknown fitness metric '" + std::string(name) + "'");
}

namespace {

struct ClassStats {
    std::vector<std::size_t> count;
    std::vector<double> sum;
    std::vector<double> sum_sq;
};

ClassStats class_stats(std::span<const double> phi, std::span<const int> y, int n_classes) {
    ClassStats s;
    s.count.assign(static_cast<std::size_t>(n_classes), 0);
    s.sum.assign(static_cast<std::size_t>(n_classes), 0.0);
    s.sum_sq.assign(static_cast<std::size_t>(n_classes), 0.0);
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const auto c = static_cast<std::size_t>(y[i]);
        s.count[c] += 1;
        s.sum[c] += phi[i];
        s.sum_sq[c] += phi[i] * phi[i];
    }
    return s;
}

void require_labels(std::span<const double> phi, std::span<const int> y, int n_classes) {
    if (phi.size() != y.size()) throw ShapeError("feature and label lengths differ");
    if (n_classes < 2) throw DegenerateTargetError("need at least 2 classes");
    for (int label : y) {
        if (label < 0 || label >= n_classes) throw Error("label out of range");
    }
}

}  // namespace

double r2_fitness(std::span<const double> phi, std::span<const int> y) {
    if (phi.size() != y.size()) throw ShapeError("feature and label lengths differ");
    if (y.size() < 2) throw DegenerateTargetError("need at least 2 samples");
    const std::size_t n = y.size();
    double y_sum = 0.0;
    for (int label : y) y_sum += static_cast<double>(label);
    const double y_mean = y_sum / static_cast<double>(n);
    double ss_tot = 0.0;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double yi = static_cast<double>(y[i]);
        ss_tot += (yi - y_mean) * (yi - y_mean);
        const double r = yi - phi[i];
        ss_res += r * r;
    }
    if (ss_tot <= 0.0) throw DegenerateTargetError("constant target under R^2");
    return 1.0 - ss_res / ss_tot;
}

double fisher_fitness(std::span<const double> phi, std::span<const int> y, int n_classes) {
    require_labels(phi, y, n_classes);
    const ClassStats s = class_stats(phi, y, n_classes);
    for (int c = 0; c < n_classes; ++c) {
        if (s.count[static_cast<std::size_t>(c)] == 0) {
            throw DegenerateTargetError("class " + std::to_string(c) + " has no samples");
        }
    }
    double total = 0.0;
    for (int i = 0; i < n_classes; ++i) {
        const auto ci = static_cast<std::size_t>(i);
        const double ni = static_cast<double>(s.count[ci]);
        const double mu_i = s.sum[ci] / ni;
        const double var_i = std::max(0.0, s.sum_sq[ci] / ni - mu_i * mu_i);
        for (int j = i + 1; j < n_classes; ++j) {
            const auto cj = static_cast<std::size_t>(j);
            const double nj = static_cast<double>(s.count[cj]);
            const double mu_j = s.sum[cj] / nj;
            const double var_j = std::max(0.0, s.sum_sq[cj] / nj - mu_j * mu_j);
            const double denom = std::max(std::sqrt(var_i + var_j), 1e-9);
            total += std::fabs(mu_i - mu_j) / denom;
        }
    }
    return total;
}

int nearest_other_class(std::span<const double> phi, std::span<const int> y, int n_classes,
                        int query) {
    require_labels(phi, y, n_classes);
    const ClassStats s = class_stats(phi, y, n_classes);
    const auto q = static_cast<std::size_t>(query);
    if (s.count[q] == 0) throw Error("query class has no samples");
    const double centroid_q = s.sum[q] / static_cast<double>(s.count[q]);
    int best = -1;
    double best_dist = 0.0;
    for (int c = 0; c < n_classes; ++c) {
        if (c == query || s.count[static_cast<std::size_t>(c)] == 0) continue;
        const auto cc = static_cast<std::size_t>(c);
        const double centroid = s.sum[cc] / static_cast<double>(s.count[cc]);
        const double dist = std::fabs(centroid_q - centroid);
        if (best < 0 || dist < best_dist) {  // strict '<' keeps the lowest index on ties
            best = c;
            best_dist = dist;
        }
    }
    if (best < 0) throw DegenerateTargetError("no other class present");
    return best;
}

SilhouetteResult silhouette_fitness(std::span<const double> phi, std::span<const int> y,
                                    int n_classes) {
    require_labels(phi, y, n_classes);
    const ClassStats s = class_stats(phi, y, n_classes);
    int present = 0;
    for (int c = 0; c < n_classes; ++c) {
        if (s.count[static_cast<std::size_t>(c)] > 0) ++present;
    }
    if (present < 2) throw DegenerateTargetError("silhouette needs two populated classes");

    // Nearest other class per class, by centroid distance.
    std::vector<int> nearest(static_cast<std::size_t>(n_classes), -1);
    for (int c = 0; c < n_classes; ++c) {
        if (s.count[static_cast<std::size_t>(c)] > 0) {
            nearest[static_cast<std::size_t>(c)] = nearest_other_class(phi, y, n_classes, c);
        }
    }

    SilhouetteResult out;
    out.per_sample.resize(phi.size());
    double total = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const auto c = static_cast<std::size_t>(y[i]);
        const double x = phi[i];
        const double nk = static_cast<double>(s.count[c]);
        double si = 0.0;
        if (s.count[c] > 1) {
            // Sum over the own class of (x - phi_j)^2; the self term is zero,
            // so only the divisor changes when excluding it.
            const double own = nk * x * x - 2.0 * x * s.sum[c] + s.sum_sq[c];
            const double a = std::max(0.0, own / (nk - 1.0));
            const auto o = static_cast<std::size_t>(nearest[c]);
            const double no = static_cast<double>(s.count[o]);
            const double other = no * x * x - 2.0 * x * s.sum[o] + s.sum_sq[o];
            const double b = std::max(0.0, other / no);
            const double denom = std::max(a, b);
            si = denom > 0.0 ? (b - a) / denom : 0.0;
            si = std::clamp(si, -1.0, 1.0);
        }
        out.per_sample[i] = si;
        total += si;
    }
    out.mean = total / static_cast<double>(phi.size());
    return out;
}

std::vector<double> per_case_errors(Metric metric, std::span<const double> phi,
                                    std::span<const int> y, int n_classes) {
    switch (metric) {
        case Metric::r2: {
            if (phi.size() != y.size()) throw ShapeError("feature and label lengths differ");
            std::vector<double> e(phi.size());
            for (std::size_t i = 0; i < phi.size(); ++i) {
                const double r = static_cast<double>(y[i]) - phi[i];
                e[i] = r * r;
            }
            return e;
        }
        case Metric::silhouette: {
            const SilhouetteResult s = silhouette_fitness(phi, y, n_classes);
            std::vector<double> e(s.per_sample.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = 1.0 - s.per_sample[i];
            return e;
        }
        case Metric::fisher:
            throw UnsupportedError("the Fisher criterion has no per-case decomposition");
    }
    throw Error("unreachable");
}

FitnessRecord evaluate(Metric metric, std::span<const double> phi, std::span<const int> y,
                       int n_classes) {
    FitnessRecord rec;
    switch (metric) {
        case Metric::r2:
            rec.aggregate = r2_fitness(phi, y);
            rec.per_case = per_case_errors(Metric::r2, phi, y, n_classes);
            break;
        case Metric::silhouette: {
            const SilhouetteResult s = silhouette_fitness(phi, y, n_classes);
            rec.aggregate = s.mean;
            std::vector<double> e(s.per_sample.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = 1.0 - s.per_sample[i];
            rec.per_case = std::move(e);
            break;
        }
        case Metric::fisher:
            rec.aggregate = fisher_fitness(phi, y, n_classes);
            break;
    }
    return rec;
}

}  // namespace few::fitness
