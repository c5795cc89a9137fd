// Shared synthetic datasets for learner, evolution, and acceptance tests.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "chatmood/classify.hpp"

namespace chatmood::testfix {

/// A data point carrying the full dense schema; unnamed metrics are 0.
DataPoint dense_point(const std::string& id, LabelClass label,
                      const std::map<std::string, double>& overrides,
                      std::vector<std::string> words);

/// Balanced three-class data whose lex_mean sign matches the label and whose
/// word lists carry one perfectly discriminative token per class.
Dataset separable_dataset(int per_class, std::uint64_t seed = 99);

/// Random dense values and shared word pool with labels drawn independently
/// of everything else: any classifier is reduced to chance.
Dataset random_label_dataset(int n, std::uint64_t seed);

}  // namespace chatmood::testfix
