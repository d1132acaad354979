#pragma once

#include <string>
#include <vector>

#include "rulediff/registry.hpp"

namespace rulediff {
namespace stats {

// Upper regularized incomplete gamma Q(a, x); absolute accuracy target 1e-12.
double gamma_q(double a, double x);

// Survival functions used for the p-values, implemented in-repo.
double chi_squared_sf(double x, int dof);
double normal_sf(double z);

struct SampleGroup {
  std::string label;
  std::vector<double> values;
};

struct KruskalResult {
  double h = 0.0;
  double p = 1.0;
};

// Kruskal-Wallis H on mid-ranks with tie correction. Fully degenerate data
// (all observations equal) reports H = 0, p = 1. Throws ConfigError for
// fewer than two groups or an empty group.
KruskalResult kruskal_wallis(const std::vector<SampleGroup>& groups);

enum class Magnitude { Negligible, Small, Medium, Large };
enum class Verdict { Better, Worse, Equal };

std::string to_string(Magnitude m);
std::string to_string(Verdict v);

struct VdaResult {
  double a12 = 0.5;
  double scaled = 0.0;  // (a12 - 0.5) * 2
  Magnitude magnitude = Magnitude::Negligible;
};

// Vargha-Delaney A12 with the scaled magnitude bands:
// negligible < 0.147 <= small < 0.33 <= medium < 0.474 <= large.
VdaResult vda(const std::vector<double>& a, const std::vector<double>& b);

Magnitude classify_magnitude(double a12);

struct PairwiseComparison {
  std::string group1;
  std::string group2;
  double z = 0.0;
  double p_raw = 1.0;
  double p_adjusted = 1.0;
  double a12 = 0.5;
  double a12_scaled = 0.0;
  Magnitude magnitude = Magnitude::Negligible;
  Verdict verdict = Verdict::Equal;
};

// Dunn's z tests on shared mid-ranks with tie correction, two-sided p
// values, Benjamini-Yekutieli adjusted p values. Effect sizes and verdicts
// are filled by compare_all.
std::vector<PairwiseComparison> dunn_posthoc(const std::vector<SampleGroup>& groups);

// Step-up Benjamini-Yekutieli adjustment with the harmonic-number factor;
// adjusted values are clamped to 1 and monotone in raw-p order.
std::vector<double> benjamini_yekutieli(const std::vector<double>& raw_p);

struct ComparisonReport {
  KruskalResult omnibus;
  bool pairwise_run = false;
  std::vector<PairwiseComparison> pairs;
  double alpha = 0.01;
};

// Omnibus test first; pairwise comparisons only when the omnibus p is below
// alpha. A pair's verdict is Equal unless its adjusted p is below alpha and
// its magnitude is non-negligible; otherwise Better/Worse follows A12 and
// the metric polarity.
ComparisonReport compare_all(const std::vector<SampleGroup>& groups,
                             double alpha = 0.01, bool higher_is_better = true);

// metric,model1,model2,comparison,p,A12,magnitude
std::string report_to_csv(const ComparisonReport& report,
                          const std::string& metric_name);

}  // namespace stats
}  // namespace rulediff
