#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rgop/synth/corpus.hpp"

namespace rgop::pipeline {

/// Subject-independent fold assignment: subjects are shuffled by seed and
/// dealt round-robin, so no subject can appear in both the train and test
/// side of any fold.
struct FoldPlan {
  int k = 0;
  std::map<std::string, int> subject_fold;

  int fold_of(const std::string& subject) const;
  std::vector<std::string> test_subjects(int fold) const;
  std::uint64_t hash() const;
};

FoldPlan make_folds(const synth::DatasetManifest& manifest, int k, std::uint64_t seed);

}  // namespace rgop::pipeline
