#include "rache/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rache/bench.hpp"
#include "rache/errors.hpp"
#include "rache/io.hpp"
#include "rache/paillier.hpp"
#include "rache/radix.hpp"

namespace rache::cli {

namespace {

namespace fs = std::filesystem;

struct KeygenArgs {
  std::size_t bits = paillier::kDefaultKeyBits;
  fs::path out_dir = ".";
  std::optional<std::uint64_t> test_seed;
};

struct EncryptArgs {
  fs::path pub;
  fs::path in;
  fs::path out;
  std::string mode = "rache";
  std::uint64_t radix = radix::kDefaultRadix;
  std::optional<std::uint64_t> max_value;
  unsigned workers = 1;
  bool randomize = false;
};

struct DecryptArgs {
  fs::path priv;
  fs::path in;
  fs::path out;
};

struct RadixInfoArgs {
  std::uint64_t max_value = 0;
  std::uint64_t r_max = 16;
};

struct BenchArgs {
  std::size_t items = 1024;
  unsigned reps = 5;
  unsigned workers = 1;
  std::uint64_t radix = radix::kDefaultRadix;
  std::uint64_t seed = 1;
  std::size_t bits = paillier::kDefaultKeyBits;
  std::optional<std::uint64_t> max_value;
  std::string mode = "strong";
  bool randomize = false;
  fs::path csv;
  fs::path mem_csv;
  fs::path in;
};

std::unique_ptr<EntropySource> key_entropy(std::optional<std::uint64_t> seed,
                                           std::ostream& err) {
  if (seed) {
    err << "warning: deterministic test-mode entropy, keys are NOT secure\n";
    return std::make_unique<DeterministicTestEntropy>(*seed);
  }
  return std::make_unique<SystemEntropy>();
}

void cmd_keygen(const KeygenArgs& a, std::ostream& err) {
  auto entropy = key_entropy(a.test_seed, err);
  const auto keys = paillier::keygen(a.bits, *entropy);
  fs::create_directories(a.out_dir);
  io::write_public_key(a.out_dir / "public.key", keys.pub);
  io::write_private_key(a.out_dir / "private.key", keys.priv);
  err << "wrote " << (a.out_dir / "public.key").string() << " and "
      << (a.out_dir / "private.key").string() << " (" << a.bits << " bits)\n";
}

void cmd_encrypt(const EncryptArgs& a, std::ostream& err) {
  const auto pk = io::read_public_key(a.pub);
  const auto ds = io::load_plaintexts(a.in);
  std::vector<paillier::Ciphertext> cts;
  if (a.mode == "paillier") {
    const auto start = std::chrono::steady_clock::now();
    cts = paillier::encrypt_batch(pk, ds.values, a.workers,
                                  system_entropy_factory());
    err << "paillier seconds: "
        << std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
               .count()
        << "\n";
  } else {
    const std::uint64_t m = a.max_value.value_or(ds.max_value);
    SystemEntropy entropy;
    const auto start = std::chrono::steady_clock::now();
    const auto cache = radix::cache_init(pk, a.radix, m, entropy);
    const double init_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    auto batch = radix::rache_encrypt_batch(
        cache, ds.values, a.workers,
        {a.randomize, system_entropy_factory()});
    err << "rache init seconds: " << init_s << "\n"
        << "rache exec seconds: " << batch.elapsed_seconds << "\n";
    cts = std::move(batch.ciphertexts);
  }
  io::write_ciphertexts(a.out, pk, cts);
  err << "encrypted " << cts.size() << " values to " << a.out.string() << "\n";
}

void cmd_decrypt(const DecryptArgs& a, std::ostream& err) {
  const auto sk = io::read_private_key(a.priv);
  const auto cts =
      io::read_ciphertexts(a.in, paillier::PublicKey::from_modulus(sk.n));
  std::vector<bigint::Int> values;
  values.reserve(cts.size());
  for (const auto& c : cts) values.push_back(paillier::decrypt(sk, c));
  io::write_plaintexts(a.out, values);
  err << "decrypted " << values.size() << " values to " << a.out.string()
      << "\n";
}

void cmd_radix_info(const RadixInfoArgs& a, std::ostream& out) {
  out << "radix,worst_case_additions\n";
  for (std::uint64_t r = 2; r <= a.r_max; ++r) {
    char cost[32];
    std::snprintf(cost, sizeof cost, "%.6f",
                  radix::worst_case_additions(r, a.max_value));
    out << r << "," << cost << "\n";
  }
  out << "optimal_radix," << radix::optimal_radix(a.max_value, a.r_max)
      << "\n";
}

void print_report(const bench::BenchReport& report, std::ostream& err) {
  for (const auto& r : report.records) {
    err << report.workload << " " << bench::to_string(r.phase)
        << " workers=" << r.workers << " n=" << r.n_items
        << " mean=" << r.mean_seconds << "s stderr=" << r.stderr_seconds
        << "s ops=" << r.op_count << "\n";
  }
}

void cmd_bench(const std::string& which, const BenchArgs& a,
               std::ostream& err) {
  bench::BenchConfig cfg;
  cfg.key_bits = a.bits;
  cfg.radix = a.radix;
  cfg.workers = a.workers;
  cfg.n_items = a.items;
  cfg.max_value_override = a.max_value;
  cfg.seed = a.seed;
  cfg.randomize_outputs = a.randomize;
  cfg.repetitions = a.reps;
  cfg.probe_memory = !a.mem_csv.empty();
  cfg.validate();

  err << "generating " << a.bits << "-bit key pair\n";
  SystemEntropy entropy;
  const auto keys = paillier::keygen(a.bits, entropy);

  bench::BenchReport report;
  if (which == "micro") {
    report = bench::bench_micro(cfg, keys);
  } else if (which == "dataset") {
    if (!a.in.empty()) {
      const auto ds = io::load_plaintexts(a.in);
      cfg.n_items = ds.values.size();
      report = bench::bench_dataset(cfg, keys, ds.values, ds.name);
    } else {
      const auto xs = bench::gen_uniform(a.items, a.seed);
      report = bench::bench_dataset(cfg, keys, xs,
                                    "uniform-" + std::to_string(a.items));
    }
  } else {
    report = bench::bench_scaling(cfg, keys,
                                  a.mode == "weak" ? bench::ScalingMode::weak
                                                   : bench::ScalingMode::strong);
  }
  print_report(report, err);
  const std::vector<bench::BenchReport> reports{report};
  if (!a.csv.empty()) io::write_text(a.csv, io::format_report_csv(reports));
  if (!a.mem_csv.empty()) {
    io::write_text(a.mem_csv, io::format_memory_csv(reports));
  }
}

const char* error_kind(const std::exception& e) {
  if (dynamic_cast<const VerificationError*>(&e)) return "verification failed";
  if (dynamic_cast<const KeyMismatchError*>(&e)) return "key mismatch";
  if (dynamic_cast<const FormatError*>(&e)) return "parse error";
  if (dynamic_cast<const EmptyDatasetError*>(&e)) return "empty dataset";
  if (dynamic_cast<const OutOfCacheRangeError*>(&e)) return "out of cache range";
  if (dynamic_cast<const DomainError*>(&e)) return "domain error";
  if (dynamic_cast<const MalformedCiphertextError*>(&e)) {
    return "malformed ciphertext";
  }
  if (dynamic_cast<const KeyGenError*>(&e)) return "key generation failed";
  if (dynamic_cast<const EntropyError*>(&e)) return "entropy failure";
  if (dynamic_cast<const fs::filesystem_error*>(&e)) return "filesystem error";
  return "error";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Paillier encryption with radix-additive caching"};
  app.require_subcommand(1);

  KeygenArgs keygen;
  auto* keygen_cmd = app.add_subcommand("keygen", "Generate a key pair");
  keygen_cmd->add_option("--bits", keygen.bits, "Modulus size in bits")
      ->capture_default_str();
  keygen_cmd->add_option("--out-dir", keygen.out_dir,
                         "Directory for public.key and private.key")
      ->capture_default_str();
  keygen_cmd->add_option(
      "--test-mode-seed", keygen.test_seed,
      "Use the deterministic test-mode entropy source (insecure)");

  EncryptArgs encrypt;
  auto* encrypt_cmd = app.add_subcommand("encrypt", "Encrypt a plaintext file");
  encrypt_cmd->add_option("--pub", encrypt.pub, "Public key file")->required();
  encrypt_cmd->add_option("--in", encrypt.in, "Plaintext file")->required();
  encrypt_cmd->add_option("--out", encrypt.out, "Ciphertext file")->required();
  encrypt_cmd->add_option("--mode", encrypt.mode, "rache or paillier")
      ->check(CLI::IsMember({"rache", "paillier"}))
      ->capture_default_str();
  encrypt_cmd->add_option("--radix", encrypt.radix, "Cache radix")
      ->check(CLI::Range(std::uint64_t{2}, UINT64_MAX))
      ->capture_default_str();
  encrypt_cmd->add_option("--max", encrypt.max_value,
                          "Cache maximum (default: largest input value)");
  encrypt_cmd->add_option("--workers", encrypt.workers, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  encrypt_cmd->add_flag("--randomize", encrypt.randomize,
                        "Rerandomize every rache ciphertext");

  DecryptArgs decrypt;
  auto* decrypt_cmd = app.add_subcommand("decrypt", "Decrypt a ciphertext file");
  decrypt_cmd->add_option("--priv", decrypt.priv, "Private key file")
      ->required();
  decrypt_cmd->add_option("--in", decrypt.in, "Ciphertext file")->required();
  decrypt_cmd->add_option("--out", decrypt.out, "Plaintext file")->required();

  RadixInfoArgs info;
  auto* info_cmd = app.add_subcommand(
      "radix-info", "Print the worst-case addition count per radix");
  info_cmd->add_option("--max", info.max_value, "Largest plaintext")
      ->required()
      ->check(CLI::Range(std::uint64_t{2}, UINT64_MAX));
  info_cmd->add_option("--r-max", info.r_max, "Largest radix in the table")
      ->check(CLI::Range(std::uint64_t{2}, UINT64_MAX))
      ->capture_default_str();

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark");
  bench_cmd->require_subcommand(1);
  std::string bench_which;
  for (const char* name : {"micro", "dataset", "scaling"}) {
    auto* sub = bench_cmd->add_subcommand(name);
    sub->add_option("--items", bench_args.items, "Number of plaintexts")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--reps", bench_args.reps, "Repetitions per phase")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--workers", bench_args.workers,
                    "Worker threads (scaling: maximum of the sweep)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--radix", bench_args.radix, "Cache radix")
        ->check(CLI::Range(std::uint64_t{2}, UINT64_MAX))
        ->capture_default_str();
    sub->add_option("--seed", bench_args.seed, "Workload seed")
        ->capture_default_str();
    sub->add_option("--bits", bench_args.bits, "Key size in bits")
        ->capture_default_str();
    sub->add_option("--csv", bench_args.csv, "Report CSV path");
    sub->add_option("--mem-csv", bench_args.mem_csv,
                    "Memory CSV path (enables probing)");
    sub->add_flag("--randomize", bench_args.randomize,
                  "Rerandomize rache outputs");
    if (std::string(name) == "dataset") {
      sub->add_option("--in", bench_args.in,
                      "Plaintext file (default: uniform values)");
      sub->add_option("--max", bench_args.max_value,
                      "Cache maximum (default: largest value)");
    }
    if (std::string(name) == "scaling") {
      sub->add_option("--mode", bench_args.mode, "strong or weak")
          ->check(CLI::IsMember({"strong", "weak"}))
          ->capture_default_str();
    }
    sub->callback([&bench_which, name] { bench_which = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*keygen_cmd) {
      cmd_keygen(keygen, err);
    } else if (*encrypt_cmd) {
      cmd_encrypt(encrypt, err);
    } else if (*decrypt_cmd) {
      cmd_decrypt(decrypt, err);
    } else if (*info_cmd) {
      cmd_radix_info(info, out);
    } else if (*bench_cmd) {
      cmd_bench(bench_which, bench_args, err);
    }
  } catch (const std::exception& e) {
    err << error_kind(e) << ": " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace rache::cli
