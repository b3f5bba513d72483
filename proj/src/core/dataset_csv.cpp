#include "core/dataset_csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "core/errors.hpp"

namespace hybridloc {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) {
    throw NumericalFailureError("failed to format double");
  }
  return std::string(buf, ptr);
}

namespace {

void check_field_text(const std::string& s, const char* what) {
  if (s.empty() || s.find_first_of(",\n\r") != std::string::npos) {
    throw InvalidInputError(std::string(what) +
                            " must be non-empty and free of commas/newlines: '" +
                            s + "'");
  }
}

double parse_double(const std::string& field, std::size_t line_no) {
  double value = 0.0;
  auto first = field.data();
  auto last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw InvalidInputError("line " + std::to_string(line_no) +
                            ": bad numeric field '" + field + "'");
  }
  if (!std::isfinite(value)) {
    throw InvalidInputError("line " + std::to_string(line_no) +
                            ": non-finite value '" + field + "'");
  }
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

void write_dataset_csv(const FingerprintDataset& dataset, std::ostream& out) {
  dataset.validate();
  for (const auto& name : dataset.technologies) {
    check_field_text(name, "technology name");
  }
  out << "point_id,true_x,true_y,true_z";
  for (const auto& name : dataset.technologies) {
    out << ",est_x_" << name << ",est_y_" << name << ",est_z_" << name;
  }
  out << "\n";
  for (const auto& rec : dataset.records) {
    check_field_text(rec.point_id, "point_id");
    out << rec.point_id << ',' << format_double(rec.true_position.x) << ','
        << format_double(rec.true_position.y) << ','
        << format_double(rec.true_position.z);
    for (const auto& est : rec.estimates) {
      out << ',' << format_double(est.x) << ',' << format_double(est.y) << ','
          << format_double(est.z);
    }
    out << "\n";
  }
}

void write_dataset_csv_file(const FingerprintDataset& dataset,
                            const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw InvalidInputError("cannot open for writing: " + path);
  }
  write_dataset_csv(dataset, out);
  if (!out.good()) {
    throw InvalidInputError("write failed: " + path);
  }
}

FingerprintDataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw InvalidInputError("empty CSV: missing header row");
  }
  const auto header = split_csv_line(strip_cr(line));
  const std::vector<std::string> fixed = {"point_id", "true_x", "true_y",
                                          "true_z"};
  if (header.size() < 7 || (header.size() - 4) % 3 != 0) {
    throw InvalidInputError("header must be point_id,true_x,true_y,true_z "
                            "plus est_x/est_y/est_z triples");
  }
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    if (header[i] != fixed[i]) {
      throw InvalidInputError("header column " + std::to_string(i + 1) +
                              " must be '" + fixed[i] + "', got '" + header[i] +
                              "'");
    }
  }
  FingerprintDataset dataset;
  for (std::size_t i = 4; i < header.size(); i += 3) {
    static const char* prefixes[3] = {"est_x_", "est_y_", "est_z_"};
    std::string name;
    for (int k = 0; k < 3; ++k) {
      const std::string& col = header[i + static_cast<std::size_t>(k)];
      const std::string prefix = prefixes[k];
      if (col.rfind(prefix, 0) != 0 || col.size() == prefix.size()) {
        throw InvalidInputError("bad estimate column '" + col + "', expected " +
                                prefix + "<technology>");
      }
      const std::string tech = col.substr(prefix.size());
      if (k == 0) {
        name = tech;
      } else if (tech != name) {
        throw InvalidInputError("estimate triple mixes technologies '" + name +
                                "' and '" + tech + "'");
      }
    }
    dataset.technologies.push_back(name);
  }

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw InvalidInputError("line " + std::to_string(line_no) + ": expected " +
                              std::to_string(header.size()) + " fields, got " +
                              std::to_string(fields.size()));
    }
    FingerprintRecord rec;
    rec.point_id = fields[0];
    rec.true_position = {parse_double(fields[1], line_no),
                         parse_double(fields[2], line_no),
                         parse_double(fields[3], line_no)};
    for (std::size_t i = 4; i < fields.size(); i += 3) {
      rec.estimates.push_back({parse_double(fields[i], line_no),
                               parse_double(fields[i + 1], line_no),
                               parse_double(fields[i + 2], line_no)});
    }
    dataset.records.push_back(std::move(rec));
  }
  dataset.validate();
  return dataset;
}

FingerprintDataset read_dataset_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidInputError("cannot open: " + path);
  }
  return read_dataset_csv(in);
}

}  // namespace hybridloc
