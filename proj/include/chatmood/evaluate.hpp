// Confusion matrix, per-class metrics, and rater agreement.
#pragma once

#include <json.hpp>

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "chatmood/label_class.hpp"

namespace chatmood {

/// 3x3 counts: rows = true class, columns = predicted, canonical order.
struct ConfusionMatrix {
  std::array<std::array<int, 3>, 3> cells{};

  int& at(LabelClass truth, LabelClass pred) {
    return cells[static_cast<std::size_t>(class_index(truth))]
                [static_cast<std::size_t>(class_index(pred))];
  }
  int at(LabelClass truth, LabelClass pred) const {
    return cells[static_cast<std::size_t>(class_index(truth))]
                [static_cast<std::size_t>(class_index(pred))];
  }
  int row_sum(int t) const;
  int col_sum(int p) const;
  int trace() const;
  int total() const;

  /// Cell-wise sum, used to pool matrices across validation folds.
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);

  bool operator==(const ConfusionMatrix&) const = default;
};

/// Counts co-occurrences of (truth, prediction) pairs.
ConfusionMatrix confusion(const std::vector<LabelClass>& pred,
                          const std::vector<LabelClass>& truth);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int frequency = 0;         // true-class count
  bool empty_column = false;  // nothing predicted as this class; precision reported 0
  bool empty_row = false;     // class absent from truth; recall reported 0

  bool operator==(const ClassMetrics&) const = default;
};

struct ClassificationReport {
  std::array<ClassMetrics, 3> per_class{};  // canonical order
  double accuracy = 0.0;
  int total = 0;

  bool operator==(const ClassificationReport&) const = default;
};

/// precision = diagonal / column sum, recall = diagonal / row sum, F1 their
/// harmonic mean; zero divisions report 0 with the matching flag set.
ClassificationReport report(const ConfusionMatrix& matrix);

struct Agreement {
  double raw = 0.0;
  std::optional<double> kappa;  // absent when chance agreement is 1
};

/// Position-aligned raw agreement and Cohen's kappa from the marginals.
Agreement agreement(const std::vector<LabelClass>& labels_a,
                    const std::vector<LabelClass>& labels_b);

std::string confusion_to_text(const ConfusionMatrix& matrix);
std::string report_to_text(const ClassificationReport& rep);
std::string report_to_csv(const ClassificationReport& rep);

void to_json(nlohmann::json& j, const ConfusionMatrix& matrix);
void from_json(const nlohmann::json& j, ConfusionMatrix& matrix);
void to_json(nlohmann::json& j, const ClassificationReport& rep);
void from_json(const nlohmann::json& j, ClassificationReport& rep);

}  // namespace chatmood
