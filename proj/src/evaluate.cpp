// Classification metrics and their text/JSON/CSV renderings.
#include "chatmood/evaluate.hpp"

#include <cstdio>

#include "chatmood/errors.hpp"

namespace chatmood {
namespace {

std::string number_field(double x) { return nlohmann::json(x).dump(); }

std::string two_decimals(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

}  // namespace

int ConfusionMatrix::row_sum(int t) const {
  const auto& row = cells[static_cast<std::size_t>(t)];
  return row[0] + row[1] + row[2];
}

int ConfusionMatrix::col_sum(int p) const {
  return cells[0][static_cast<std::size_t>(p)] + cells[1][static_cast<std::size_t>(p)] +
         cells[2][static_cast<std::size_t>(p)];
}

int ConfusionMatrix::trace() const { return cells[0][0] + cells[1][1] + cells[2][2]; }

int ConfusionMatrix::total() const { return row_sum(0) + row_sum(1) + row_sum(2); }

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  for (std::size_t t = 0; t < 3; ++t)
    for (std::size_t p = 0; p < 3; ++p) cells[t][p] += other.cells[t][p];
  return *this;
}

ConfusionMatrix confusion(const std::vector<LabelClass>& pred,
                          const std::vector<LabelClass>& truth) {
  if (pred.size() != truth.size())
    throw ValueError("confusion: " + std::to_string(pred.size()) + " predictions vs " +
                     std::to_string(truth.size()) + " truths");
  if (pred.empty()) throw ValueError("confusion: empty input");
  ConfusionMatrix m;
  for (std::size_t i = 0; i < pred.size(); ++i) ++m.at(truth[i], pred[i]);
  return m;
}

ClassificationReport report(const ConfusionMatrix& matrix) {
  const int total = matrix.total();
  if (total <= 0) throw ValueError("report: empty confusion matrix");
  for (const auto& row : matrix.cells)
    for (int cell : row) {
      if (cell < 0) throw ValueError("report: negative confusion count");
    }

  ClassificationReport rep;
  rep.total = total;
  for (int c = 0; c < 3; ++c) {
    ClassMetrics& m = rep.per_class[static_cast<std::size_t>(c)];
    const int diag = matrix.cells[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
    const int col = matrix.col_sum(c);
    const int row = matrix.row_sum(c);
    m.frequency = row;
    m.empty_column = col == 0;
    m.empty_row = row == 0;
    m.precision = col == 0 ? 0.0 : static_cast<double>(diag) / col;
    m.recall = row == 0 ? 0.0 : static_cast<double>(diag) / row;
    const double pr = m.precision + m.recall;
    m.f1 = pr == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / pr;
  }
  rep.accuracy = static_cast<double>(matrix.trace()) / total;
  return rep;
}

Agreement agreement(const std::vector<LabelClass>& labels_a,
                    const std::vector<LabelClass>& labels_b) {
  if (labels_a.size() != labels_b.size())
    throw ValueError("agreement: " + std::to_string(labels_a.size()) + " labels vs " +
                     std::to_string(labels_b.size()));
  if (labels_a.empty()) throw ValueError("agreement: empty input");

  const auto n = static_cast<double>(labels_a.size());
  int matches = 0;
  int count_a[3] = {0, 0, 0};
  int count_b[3] = {0, 0, 0};
  for (std::size_t i = 0; i < labels_a.size(); ++i) {
    matches += labels_a[i] == labels_b[i];
    ++count_a[class_index(labels_a[i])];
    ++count_b[class_index(labels_b[i])];
  }

  Agreement result;
  result.raw = matches / n;
  double chance = 0.0;
  for (int c = 0; c < 3; ++c) chance += (count_a[c] / n) * (count_b[c] / n);
  if (chance != 1.0) result.kappa = (result.raw - chance) / (1.0 - chance);
  return result;
}

std::string confusion_to_text(const ConfusionMatrix& matrix) {
  std::string out = "true\\pred   positive   neutral  negative\n";
  char buf[80];
  for (int t = 0; t < 3; ++t) {
    const auto& row = matrix.cells[static_cast<std::size_t>(t)];
    std::snprintf(buf, sizeof buf, "%-9s  %8d  %8d  %8d\n",
                  std::string(to_string(kAllClasses[static_cast<std::size_t>(t)])).c_str(),
                  row[0], row[1], row[2]);
    out += buf;
  }
  return out;
}

std::string report_to_text(const ClassificationReport& rep) {
  std::string out = "class      precision  recall      f1  frequency\n";
  char buf[120];
  bool flagged = false;
  for (int c = 0; c < 3; ++c) {
    const ClassMetrics& m = rep.per_class[static_cast<std::size_t>(c)];
    const bool flag = m.empty_column || m.empty_row;
    flagged = flagged || flag;
    std::snprintf(buf, sizeof buf, "%-9s  %9s  %6s  %6s  %9d%s\n",
                  std::string(to_string(kAllClasses[static_cast<std::size_t>(c)])).c_str(),
                  two_decimals(m.precision).c_str(), two_decimals(m.recall).c_str(),
                  two_decimals(m.f1).c_str(), m.frequency, flag ? " *" : "");
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "accuracy   %9s  (%d of %d)\n",
                two_decimals(rep.accuracy).c_str(), static_cast<int>(rep.accuracy * rep.total + 0.5),
                rep.total);
  out += buf;
  if (flagged) out += "* zero division reported as 0\n";
  return out;
}

std::string report_to_csv(const ClassificationReport& rep) {
  std::string out = "class,precision,recall,f1,frequency\n";
  for (int c = 0; c < 3; ++c) {
    const ClassMetrics& m = rep.per_class[static_cast<std::size_t>(c)];
    out += std::string(to_string(kAllClasses[static_cast<std::size_t>(c)])) + "," +
           number_field(m.precision) + "," + number_field(m.recall) + "," + number_field(m.f1) +
           "," + std::to_string(m.frequency) + "\n";
  }
  out += "accuracy," + number_field(rep.accuracy) + ",,," + std::to_string(rep.total) + "\n";
  return out;
}

void to_json(nlohmann::json& j, const ConfusionMatrix& matrix) {
  j = {{"order", {"positive", "neutral", "negative"}}, {"rows", matrix.cells}};
}

void from_json(const nlohmann::json& j, ConfusionMatrix& matrix) {
  const auto& rows = j.at("rows");
  if (!rows.is_array() || rows.size() != 3) throw SchemaError("confusion matrix needs 3 rows");
  for (std::size_t t = 0; t < 3; ++t) {
    if (!rows[t].is_array() || rows[t].size() != 3)
      throw SchemaError("confusion matrix row " + std::to_string(t) + " needs 3 columns");
    for (std::size_t p = 0; p < 3; ++p) {
      const int v = rows[t][p].get<int>();
      if (v < 0) throw SchemaError("confusion matrix count must be >= 0");
      matrix.cells[t][p] = v;
    }
  }
}

void to_json(nlohmann::json& j, const ClassificationReport& rep) {
  nlohmann::json classes = nlohmann::json::array();
  for (int c = 0; c < 3; ++c) {
    const ClassMetrics& m = rep.per_class[static_cast<std::size_t>(c)];
    classes.push_back({{"class", to_string(kAllClasses[static_cast<std::size_t>(c)])},
                       {"precision", m.precision},
                       {"recall", m.recall},
                       {"f1", m.f1},
                       {"frequency", m.frequency},
                       {"empty_column", m.empty_column},
                       {"empty_row", m.empty_row}});
  }
  j = {{"accuracy", rep.accuracy}, {"total", rep.total}, {"classes", classes}};
}

void from_json(const nlohmann::json& j, ClassificationReport& rep) {
  j.at("accuracy").get_to(rep.accuracy);
  j.at("total").get_to(rep.total);
  const auto& classes = j.at("classes");
  if (!classes.is_array() || classes.size() != 3)
    throw SchemaError("classification report needs 3 class entries");
  for (std::size_t c = 0; c < 3; ++c) {
    const auto& entry = classes[c];
    if (entry.at("class").get<std::string>() != to_string(kAllClasses[c]))
      throw SchemaError("classification report classes out of order");
    ClassMetrics& m = rep.per_class[c];
    entry.at("precision").get_to(m.precision);
    entry.at("recall").get_to(m.recall);
    entry.at("f1").get_to(m.f1);
    entry.at("frequency").get_to(m.frequency);
    entry.at("empty_column").get_to(m.empty_column);
    entry.at("empty_row").get_to(m.empty_row);
  }
}

}  // namespace chatmood
