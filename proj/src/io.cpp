#include "rache/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "rache/errors.hpp"

namespace rache::io {

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  return in;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

// Reads `name=hex` lines into a map; rejects duplicates and junk.
std::map<std::string, bigint::Int> read_key_fields(
    const std::filesystem::path& path) {
  auto in = open_in(path);
  std::map<std::string, bigint::Int> fields;
  std::string raw;
  for (std::size_t line_no = 1; std::getline(in, raw); ++line_no) {
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw FormatError(where(path, line_no) + ": expected name=hex");
    }
    std::string name(line.substr(0, eq));
    bigint::Int value;
    try {
      value = bigint::from_hex(line.substr(eq + 1));
    } catch (const FormatError& e) {
      throw FormatError(where(path, line_no) + ": " + e.what());
    }
    if (!fields.emplace(name, std::move(value)).second) {
      throw FormatError(where(path, line_no) + ": duplicate field '" + name +
                        "'");
    }
  }
  return fields;
}

const bigint::Int& field(const std::map<std::string, bigint::Int>& fields,
                         const std::string& name,
                         const std::filesystem::path& path) {
  auto it = fields.find(name);
  if (it == fields.end()) {
    throw FormatError(path.string() + ": missing field '" + name + "'");
  }
  return it->second;
}

std::string format_seconds(double s) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out.precision(9);
  out << std::scientific << s;
  return out.str();
}

}  // namespace

Dataset parse_plaintexts(std::istream& in, std::string name) {
  Dataset ds;
  ds.name = std::move(name);
  std::string raw;
  for (std::size_t line_no = 1; std::getline(in, raw); ++line_no) {
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::uint64_t value = 0;
    const auto [ptr, ec] =
        std::from_chars(line.data(), line.data() + line.size(), value);
    if (ec == std::errc::result_out_of_range) {
      throw FormatError("line " + std::to_string(line_no) + ": value '" +
                        std::string(line) + "' exceeds 64 bits");
    }
    if (ec != std::errc() || ptr != line.data() + line.size()) {
      throw FormatError("line " + std::to_string(line_no) +
                        ": not an unsigned decimal integer: '" +
                        std::string(line) + "'");
    }
    ds.values.push_back(value);
    ds.max_value = std::max(ds.max_value, value);
  }
  if (ds.values.empty()) {
    throw EmptyDatasetError("dataset '" + ds.name + "' has no values");
  }
  return ds;
}

Dataset load_plaintexts(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return parse_plaintexts(in, path.stem().string());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::uint64_t scan_max(std::span<const std::uint64_t> values) {
  if (values.empty()) throw EmptyDatasetError("scan_max of an empty list");
  return *std::max_element(values.begin(), values.end());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out.flush()) throw Error("write to '" + path.string() + "' failed");
}

void write_plaintexts(const std::filesystem::path& path,
                      std::span<const bigint::Int> values) {
  std::string text;
  for (const auto& v : values) {
    text += bigint::to_decimal(v);
    text += '\n';
  }
  write_text(path, text);
}

void write_ciphertexts(const std::filesystem::path& path,
                       const paillier::PublicKey& pk,
                       std::span<const paillier::Ciphertext> cts) {
  std::string text = "n=" + bigint::to_hex(pk.n) + "\n";
  for (const auto& c : cts) {
    text += bigint::to_hex(c.value);
    text += '\n';
  }
  write_text(path, text);
}

CiphertextFile read_ciphertexts(const std::filesystem::path& path) {
  auto in = open_in(path);
  CiphertextFile file;
  std::string raw;
  if (!std::getline(in, raw) || trim(raw).substr(0, 2) != "n=") {
    throw FormatError(path.string() + ": missing 'n=<hex>' header");
  }
  try {
    file.n = bigint::from_hex(trim(raw).substr(2));
  } catch (const FormatError& e) {
    throw FormatError(where(path, 1) + ": " + e.what());
  }
  for (std::size_t line_no = 2; std::getline(in, raw); ++line_no) {
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    try {
      file.ciphertexts.push_back({bigint::from_hex(line)});
    } catch (const FormatError& e) {
      throw FormatError(where(path, line_no) + ": " + e.what());
    }
  }
  return file;
}

std::vector<paillier::Ciphertext> read_ciphertexts(
    const std::filesystem::path& path, const paillier::PublicKey& expected) {
  CiphertextFile file = read_ciphertexts(path);
  if (file.n != expected.n) {
    throw KeyMismatchError(path.string() +
                           ": ciphertexts were produced under a different key");
  }
  return std::move(file.ciphertexts);
}

void write_public_key(const std::filesystem::path& path,
                      const paillier::PublicKey& pk) {
  write_text(path, "n=" + bigint::to_hex(pk.n) + "\ng=" + bigint::to_hex(pk.g) +
                       "\nkey_bits=" +
                       bigint::to_hex(bigint::from_u64(pk.key_bits)) + "\n");
}

paillier::PublicKey read_public_key(const std::filesystem::path& path) {
  const auto fields = read_key_fields(path);
  auto pk = paillier::PublicKey::from_modulus(field(fields, "n", path));
  if (field(fields, "g", path) != pk.g) {
    throw FormatError(path.string() + ": g must equal n + 1");
  }
  if (field(fields, "key_bits", path) != pk.key_bits) {
    throw FormatError(path.string() + ": key_bits does not match n");
  }
  return pk;
}

void write_private_key(const std::filesystem::path& path,
                       const paillier::PrivateKey& sk) {
  write_text(path, "n=" + bigint::to_hex(sk.n) + "\nlambda=" +
                       bigint::to_hex(sk.lambda) + "\nmu=" +
                       bigint::to_hex(sk.mu) + "\n");
}

paillier::PrivateKey read_private_key(const std::filesystem::path& path) {
  const auto fields = read_key_fields(path);
  return {field(fields, "lambda", path), field(fields, "mu", path),
          field(fields, "n", path)};
}

std::string format_report_csv(std::span<const bench::BenchReport> reports) {
  std::string text = std::string(kReportCsvHeader) + "\n";
  for (const auto& report : reports) {
    for (const auto& r : report.records) {
      text += report.workload + "," + std::string(bench::to_string(r.phase)) +
              "," + std::to_string(r.workers) + "," +
              std::to_string(r.n_items) + "," + format_seconds(r.mean_seconds) +
              "," + format_seconds(r.stderr_seconds) + "," +
              std::to_string(r.op_count) + "\n";
    }
  }
  return text;
}

std::string format_memory_csv(std::span<const bench::BenchReport> reports) {
  std::string text = std::string(kMemoryCsvHeader) + "\n";
  auto emit = [&](const std::string& label,
                  const std::vector<bench::MemorySample>& samples) {
    for (const auto& s : samples) {
      char t[16];
      std::snprintf(t, sizeof t, "%.1f", s.normalized_time);
      text += label + "," + t + "," + std::to_string(s.resident_bytes) + "\n";
    }
  };
  for (const auto& report : reports) {
    emit(report.workload + "/rache_exec", report.memory_samples);
    emit(report.workload + "/paillier", report.paillier_memory_samples);
  }
  return text;
}

}  // namespace rache::io
