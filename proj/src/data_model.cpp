#include "dissim/data_model.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

#include "dissim/errors.hpp"
#include "dissim/rng.hpp"
#include "dissim/text.hpp"

namespace dissim {

namespace {

bool has_gz_suffix(const std::string& path) {
  return path.size() >= 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
}

std::string read_all(const std::string& path) {
  if (has_gz_suffix(path)) {
    gzFile gz = gzopen(path.c_str(), "rb");
    if (gz == nullptr) throw ParseError("cannot open '" + path + "'");
    std::string out;
    char buf[1 << 16];
    int n = 0;
    while ((n = gzread(gz, buf, sizeof(buf))) > 0) out.append(buf, static_cast<std::size_t>(n));
    const bool ok = n == 0;
    gzclose(gz);
    if (!ok) throw ParseError("gzip decompression failed for '" + path + "'");
    return out;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_all(const std::string& path, const std::string& content) {
  if (has_gz_suffix(path)) {
    gzFile gz = gzopen(path.c_str(), "wb");
    if (gz == nullptr) throw DataError("cannot open '" + path + "' for writing");
    const int written = gzwrite(gz, content.data(), static_cast<unsigned>(content.size()));
    const bool ok = written == static_cast<int>(content.size()) && gzclose(gz) == Z_OK;
    if (!ok) throw DataError("gzip write failed for '" + path + "'");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw DataError("write failed for '" + path + "'");
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      fields.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return fields;
}

[[noreturn]] void fail_line(std::size_t line_no, const std::string& what) {
  throw ParseError("line " + std::to_string(line_no) + ": " + what);
}

std::size_t parse_header(std::string_view header) {
  const auto fields = split_fields(header);
  if (fields.size() < 4 || fields[0] != "writer_id" || fields[1] != "label" ||
      fields[2] != "sample_index") {
    throw ParseError("line 1: malformed header, expected writer_id,label,sample_index,f0,...");
  }
  const std::size_t dim = fields.size() - 3;
  for (std::size_t i = 0; i < dim; ++i) {
    if (fields[3 + i] != "f" + std::to_string(i)) {
      throw ParseError("line 1: malformed header, feature column " + std::to_string(i) +
                       " must be named f" + std::to_string(i));
    }
  }
  return dim;
}

}  // namespace

Dataset::Dataset(std::vector<SignatureRecord> records, std::size_t dim)
    : records_(std::move(records)), dim_(dim) {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& rec = records_[i];
    if (rec.writer_id < 1) throw DataError("record " + std::to_string(i) + ": writer_id must be >= 1");
    if (rec.sample_index < 0) {
      throw DataError("record " + std::to_string(i) + ": sample_index must be >= 0");
    }
    if (rec.features.size() != dim_) {
      throw DataError("record " + std::to_string(i) + ": feature length " +
                      std::to_string(rec.features.size()) + " does not match dim " +
                      std::to_string(dim_));
    }
    for (double v : rec.features) {
      if (!std::isfinite(v)) throw DataError("record " + std::to_string(i) + ": non-finite feature");
    }
    auto& index = rec.label == Label::Genuine ? genuine_index_ : skilled_index_;
    index[rec.writer_id].push_back(i);
  }
  for (const auto& [writer, _] : genuine_index_) writer_ids_.push_back(writer);
  for (const auto& [writer, _] : skilled_index_) {
    if (!genuine_index_.count(writer)) writer_ids_.push_back(writer);
  }
  std::sort(writer_ids_.begin(), writer_ids_.end());
}

const std::vector<std::size_t>& Dataset::indices_of(std::int64_t writer, Label label) const {
  static const std::vector<std::size_t> kEmpty;
  const auto& index = label == Label::Genuine ? genuine_index_ : skilled_index_;
  const auto it = index.find(writer);
  return it == index.end() ? kEmpty : it->second;
}

bool WriterSplit::pairwise_disjoint() const {
  const std::vector<const std::vector<std::int64_t>*> sets = {
      &train_writers, &validation_writers, &opt_writers, &sel_writers, &exploitation_writers};
  std::vector<std::int64_t> all;
  for (const auto* set : sets) all.insert(all.end(), set->begin(), set->end());
  std::sort(all.begin(), all.end());
  return std::adjacent_find(all.begin(), all.end()) == all.end();
}

Dataset load_feature_file(const std::string& path, std::optional<std::size_t> expected_dim) {
  const std::string content = read_all(path);

  std::vector<std::string_view> lines;
  {
    std::string_view rest(content);
    while (!rest.empty()) {
      const std::size_t nl = rest.find('\n');
      std::string_view line = nl == std::string_view::npos ? rest : rest.substr(0, nl);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      lines.push_back(line);
      if (nl == std::string_view::npos) break;
      rest.remove_prefix(nl + 1);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
  }
  if (lines.empty()) throw ParseError("'" + path + "' is empty");

  const std::size_t dim = parse_header(lines[0]);
  if (expected_dim && *expected_dim != dim) {
    throw SchemaError("'" + path + "' has dimension " + std::to_string(dim) + ", expected " +
                      std::to_string(*expected_dim));
  }

  std::vector<SignatureRecord> records;
  records.reserve(lines.size() - 1);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t line_no = li + 1;
    const auto fields = split_fields(lines[li]);
    if (fields.size() != dim + 3) {
      fail_line(line_no, "expected " + std::to_string(dim + 3) + " columns, got " +
                             std::to_string(fields.size()));
    }
    SignatureRecord rec;
    const auto writer = parse_int(fields[0]);
    if (!writer || *writer < 1) fail_line(line_no, "invalid writer_id");
    rec.writer_id = *writer;
    if (fields[1] == "G") {
      rec.label = Label::Genuine;
    } else if (fields[1] == "S") {
      rec.label = Label::SkilledForgery;
    } else {
      fail_line(line_no, "label must be G or S");
    }
    const auto sample = parse_int(fields[2]);
    if (!sample || *sample < 0 || *sample > INT32_MAX) fail_line(line_no, "invalid sample_index");
    rec.sample_index = static_cast<std::int32_t>(*sample);
    rec.features.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      const auto v = parse_double(fields[3 + d]);
      if (!v) fail_line(line_no, "invalid feature value in column f" + std::to_string(d));
      if (!std::isfinite(*v)) fail_line(line_no, "non-finite feature value in column f" + std::to_string(d));
      rec.features[d] = *v;
    }
    records.push_back(std::move(rec));
  }
  return Dataset(std::move(records), dim);
}

void save_feature_file(const Dataset& dataset, const std::string& path) {
  std::string out = "writer_id,label,sample_index";
  for (std::size_t d = 0; d < dataset.dim(); ++d) out += ",f" + std::to_string(d);
  out += '\n';
  for (const auto& rec : dataset.records()) {
    out += std::to_string(rec.writer_id);
    out += rec.label == Label::Genuine ? ",G," : ",S,";
    out += std::to_string(rec.sample_index);
    for (double v : rec.features) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  write_all(path, out);
}

WriterSplit split_writers(const Dataset& dataset, const SplitCounts& counts, std::uint64_t seed) {
  const std::size_t needed =
      counts.train + counts.validation + counts.opt + counts.sel + counts.exploitation;
  if (needed > dataset.writer_ids().size()) {
    throw ConfigError("split needs " + std::to_string(needed) + " writers, dataset has " +
                      std::to_string(dataset.writer_ids().size()));
  }

  std::vector<std::int64_t> shuffled = dataset.writer_ids();
  Rng rng(seed, {stream::kWriterSplit});
  rng.shuffle(shuffled);

  WriterSplit split;
  auto take = [&shuffled](std::size_t& offset, std::size_t count) {
    std::vector<std::int64_t> out(shuffled.begin() + offset, shuffled.begin() + offset + count);
    std::sort(out.begin(), out.end());
    offset += count;
    return out;
  };
  std::size_t offset = 0;
  split.train_writers = take(offset, counts.train);
  split.validation_writers = take(offset, counts.validation);
  split.opt_writers = take(offset, counts.opt);
  split.sel_writers = take(offset, counts.sel);
  split.exploitation_writers = take(offset, counts.exploitation);
  return split;
}

std::vector<SignatureRecord> select_samples(const Dataset& dataset, std::int64_t writer,
                                            Label label, std::size_t k, std::uint64_t seed) {
  const auto& indices = dataset.indices_of(writer, label);
  if (indices.size() < k) {
    throw DataError("writer " + std::to_string(writer) + " has " +
                    std::to_string(indices.size()) +
                    (label == Label::Genuine ? " Genuine" : " SkilledForgery") +
                    " samples, need " + std::to_string(k));
  }
  std::vector<std::size_t> order = indices;
  Rng rng(seed, {stream::kSelectSamples, static_cast<std::uint64_t>(writer),
                 static_cast<std::uint64_t>(label)});
  rng.shuffle(order);
  std::vector<SignatureRecord> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(dataset.records()[order[i]]);
  return out;
}

}  // namespace dissim
