#include "rgop/synth/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "rgop/errors.hpp"
#include "rgop/rng.hpp"

namespace fs = std::filesystem;

namespace rgop::synth {

std::string DatasetManifest::resolve(const ManifestRecord& rec) const {
  if (base_dir.empty()) return rec.path;
  return (fs::path(base_dir) / rec.path).string();
}

std::vector<std::string> DatasetManifest::distinct_subjects() const {
  std::set<std::string> subjects;
  for (const auto& rec : records) subjects.insert(rec.subject);
  return {subjects.begin(), subjects.end()};
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

DatasetManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest", path);

  DatasetManifest manifest;
  manifest.base_dir = fs::path(path).parent_path().string();

  std::string line;
  std::size_t row = 0;
  if (!std::getline(in, line)) throw ParseError("empty manifest: " + path, 0);
  if (split_csv_line(line) != std::vector<std::string>{"path", "subject", "label", "apex_index", "frames"})
    throw ParseError("bad manifest header in " + path, 0);

  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 5)
      throw ParseError("manifest row " + std::to_string(row) + ": expected 5 fields", row);
    ManifestRecord rec;
    rec.path = fields[0];
    rec.subject = fields[1];
    try {
      rec.label = expression_from_string(fields[2]);
      if (!fields[3].empty()) rec.apex_index = std::stoi(fields[3]);
      rec.frame_count = std::stoi(fields[4]);
    } catch (const std::exception& e) {
      throw ParseError("manifest row " + std::to_string(row) + ": " + e.what(), row);
    }
    if (rec.frame_count < 1)
      throw ParseError("manifest row " + std::to_string(row) + ": bad frame count", row);
    if (rec.apex_index && (*rec.apex_index < 0 || *rec.apex_index >= rec.frame_count))
      throw ParseError("manifest row " + std::to_string(row) + ": apex out of range", row);
    manifest.records.push_back(std::move(rec));
  }
  return manifest;
}

void write_manifest(const std::string& path, const std::vector<ManifestRecord>& records) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing", path);
  out << "path,subject,label,apex_index,frames\n";
  for (const auto& rec : records) {
    out << rec.path << ',' << rec.subject << ',' << to_string(rec.label) << ',';
    if (rec.apex_index) out << *rec.apex_index;
    out << ',' << rec.frame_count << '\n';
  }
  if (!out) throw IoError("short write", path);
}

DatasetManifest build_corpus(const CorpusParams& params, const std::string& out_dir) {
  if (params.n_subjects < 1) throw ArgumentError("need at least one subject");
  if (params.sequences_per_subject_per_class < 1) throw ArgumentError("need at least one sequence per class");

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create corpus directory", out_dir);

  std::vector<ManifestRecord> records;
  for (int s = 0; s < params.n_subjects; ++s) {
    char subject[16];
    std::snprintf(subject, sizeof subject, "s%03d", s);
    const std::uint64_t identity_seed = mix_seed(params.master_seed, "corpus-identity", static_cast<std::uint64_t>(s));
    for (int c = 0; c < kExpressionCount; ++c) {
      const auto expr = static_cast<Expression>(c);
      for (int rep = 0; rep < params.sequences_per_subject_per_class; ++rep) {
        const std::uint64_t jitter_seed =
            mix_seed(params.master_seed, "corpus-jitter", static_cast<std::uint64_t>(s),
                     static_cast<std::uint64_t>(c) * 1000 + static_cast<std::uint64_t>(rep));
        const GeneratedSequence seq = generate_sequence(identity_seed, expr, params.frame_count,
                                                        params.apex_policy, jitter_seed,
                                                        params.frame_size);
        const codec::Bitstream bs = codec::encode_video(seq.frames, params.encode);

        std::ostringstream name;
        name << "seq_" << subject << '_' << to_string(expr) << '_' << rep << ".rgop";
        codec::save_bitstream((fs::path(out_dir) / name.str()).string(), bs);

        ManifestRecord rec;
        rec.path = name.str();
        rec.subject = subject;
        rec.label = expr;
        rec.apex_index = seq.apex_index;
        rec.frame_count = params.frame_count;
        records.push_back(std::move(rec));
      }
    }
  }

  const std::string manifest_path = (fs::path(out_dir) / "manifest.csv").string();
  write_manifest(manifest_path, records);

  DatasetManifest manifest;
  manifest.base_dir = out_dir;
  manifest.records = std::move(records);
  return manifest;
}

std::vector<ExternalSequence> load_external(const std::string& manifest_path) {
  const DatasetManifest manifest = read_manifest(manifest_path);
  std::vector<ExternalSequence> out;
  out.reserve(manifest.records.size());

  for (std::size_t i = 0; i < manifest.records.size(); ++i) {
    const auto& rec = manifest.records[i];
    const std::string dir = manifest.resolve(rec);
    if (!fs::is_directory(dir))
      throw ParseError("manifest row " + std::to_string(i + 1) + ": not a frame directory: " + dir,
                       i + 1);
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      const std::string ext = entry.path().extension().string();
      if (ext == ".ppm" || ext == ".png" || ext == ".PPM" || ext == ".PNG")
        files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    if (static_cast<int>(files.size()) != rec.frame_count)
      throw ParseError("manifest row " + std::to_string(i + 1) + ": expected " +
                           std::to_string(rec.frame_count) + " frames, found " +
                           std::to_string(files.size()),
                       i + 1);

    ExternalSequence seq;
    seq.subject = rec.subject;
    seq.label = rec.label;
    seq.apex_index = rec.apex_index;
    seq.frames.reserve(files.size());
    for (const auto& f : files) seq.frames.push_back(read_image(f));
    out.push_back(std::move(seq));
  }
  return out;
}

}  // namespace rgop::synth
