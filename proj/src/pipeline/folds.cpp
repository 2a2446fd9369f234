#include "rgop/pipeline/folds.hpp"

#include "rgop/errors.hpp"
#include "rgop/rng.hpp"

namespace rgop::pipeline {

int FoldPlan::fold_of(const std::string& subject) const {
  auto it = subject_fold.find(subject);
  if (it == subject_fold.end()) throw ArgumentError("subject not in fold plan: " + subject);
  return it->second;
}

std::vector<std::string> FoldPlan::test_subjects(int fold) const {
  std::vector<std::string> out;
  for (const auto& [subject, f] : subject_fold)
    if (f == fold) out.push_back(subject);
  return out;
}

std::uint64_t FoldPlan::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ull;
    }
  };
  mix(&k, sizeof k);
  for (const auto& [subject, f] : subject_fold) {  // std::map: sorted, stable
    mix(subject.data(), subject.size());
    mix(&f, sizeof f);
  }
  return h;
}

FoldPlan make_folds(const synth::DatasetManifest& manifest, int k, std::uint64_t seed) {
  if (k < 2) throw ArgumentError("k must be >= 2");
  std::vector<std::string> subjects = manifest.distinct_subjects();
  if (static_cast<int>(subjects.size()) < k)
    throw ArgumentError("fewer subjects (" + std::to_string(subjects.size()) + ") than folds (" +
                        std::to_string(k) + ")");

  Rng rng(mix_seed(seed, "fold-shuffle"));
  rng.shuffle(subjects);

  FoldPlan plan;
  plan.k = k;
  for (std::size_t i = 0; i < subjects.size(); ++i)
    plan.subject_fold[subjects[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
  return plan;
}

}  // namespace rgop::pipeline
