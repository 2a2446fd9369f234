#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rgop/codec/codec.hpp"
#include "rgop/synth/sequence.hpp"

namespace rgop::synth {

struct ManifestRecord {
  std::string path;  // relative to the manifest's directory
  std::string subject;
  Expression label = Expression::kNeutral;
  std::optional<int> apex_index;  // absent: no apex annotation
  int frame_count = 0;
};

/// CSV manifest (header: path,subject,label,apex_index,frames) plus the
/// directory it lives in, so record paths resolve.
struct DatasetManifest {
  std::string base_dir;
  std::vector<ManifestRecord> records;

  std::string resolve(const ManifestRecord& rec) const;
  std::vector<std::string> distinct_subjects() const;  // sorted, unique
};

DatasetManifest read_manifest(const std::string& path);
void write_manifest(const std::string& path, const std::vector<ManifestRecord>& records);

struct CorpusParams {
  int n_subjects = 20;
  int sequences_per_subject_per_class = 1;
  int frame_count = 16;
  int frame_size = 64;
  ApexPolicy apex_policy = ApexPolicy::kLast;
  std::uint64_t master_seed = 1;
  codec::EncodeParams encode;
};

/// Generates the labeled synthetic corpus: every sequence rendered,
/// encoded to an RGOP bitstream under out_dir, and listed in
/// out_dir/manifest.csv. Fully reproducible from the master seed.
DatasetManifest build_corpus(const CorpusParams& params, const std::string& out_dir);

/// A raw external sequence (frames on disk), ready for encode_video.
struct ExternalSequence {
  std::vector<Frame> frames;
  std::string subject;
  Expression label = Expression::kNeutral;
  std::optional<int> apex_index;
};

/// Loads sequences referenced by a manifest whose paths are directories of
/// PPM (or PNG) frames, in sorted filename order.
std::vector<ExternalSequence> load_external(const std::string& manifest_path);

}  // namespace rgop::synth
