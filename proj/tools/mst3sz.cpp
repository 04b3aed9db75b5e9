// mst3sz: command-line front end for the library.
//
// Exit codes: 0 success, 1 usage or parameter error, 2 crypto, parse or I/O error.

#include <sodium.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mst3sz/mst3sz.hpp"

using json = nlohmann::json;
using namespace mst3sz;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitCrypto = 2;

class IoError : public Error {
 public:
  using Error::Error;
};

/// Uniform random bits from the operating system via libsodium.
struct SystemRng {
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() {
    result_type v;
    randombytes_buf(&v, sizeof v);
    return v;
  }
};

/// Calls fn with the seeded generator when a seed was given, else the system one.
template <class Fn>
auto with_rng(const std::optional<std::uint64_t>& seed, Fn&& fn) {
  if (seed) {
    std::mt19937_64 rng(*seed);
    return fn(rng);
  }
  SystemRng rng;
  return fn(rng);
}

Bytes read_file(const std::string& path) {
  if (path == "-") {
    std::cin >> std::noskipws;
    return Bytes(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::string& path, const Bytes& data) {
  if (path == "-") {
    std::cout.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("write failed for " + path);
}

std::string to_hex_string(const Bytes& data) {
  std::string out(data.size() * 2 + 1, '\0');
  sodium_bin2hex(out.data(), out.size(), data.data(), data.size());
  out.pop_back();
  return out;
}

std::string trim(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  return s;
}

Bytes armor_encode(const Bytes& raw, const std::string& armor) {
  if (armor == "raw") return raw;
  std::string text;
  if (armor == "hex") {
    text = to_hex_string(raw);
  } else {
    const auto variant = sodium_base64_VARIANT_ORIGINAL;
    text.assign(sodium_base64_encoded_len(raw.size(), variant), '\0');
    sodium_bin2base64(text.data(), text.size(), raw.data(), raw.size(), variant);
    text.pop_back();
  }
  text += '\n';
  return Bytes(text.begin(), text.end());
}

Bytes armor_decode(const Bytes& input, const std::string& armor) {
  if (armor == "raw") return input;
  const std::string text = trim(std::string(input.begin(), input.end()));
  Bytes out(text.size());
  std::size_t len = 0;
  int rc = 0;
  if (armor == "hex") {
    rc = sodium_hex2bin(out.data(), out.size(), text.data(), text.size(), nullptr, &len, nullptr);
  } else {
    rc = sodium_base642bin(out.data(), out.size(), text.data(), text.size(), nullptr, &len, nullptr,
                           sodium_base64_VARIANT_ORIGINAL);
  }
  if (rc != 0) throw ParseError("input is not valid " + armor);
  out.resize(len);
  return out;
}

SignatureType parse_type(const std::string& text, unsigned n) {
  if (text.empty()) return default_type(n);
  std::vector<std::uint64_t> sizes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      sizes.push_back(std::stoull(item));
    } catch (const std::exception&) {
      throw ParamError("bad signature type entry '" + item + "'");
    }
  }
  SignatureType t(std::move(sizes));
  t.chunk_bits(n);
  return t;
}

std::string big(const BigInt& v) { return v.str(); }

json attack_json(const AttackResult& r) {
  json j{{"attack", r.attack}, {"n", r.n},       {"trials", r.trials},
         {"success", r.success}, {"elapsed_ms", r.elapsed_ms}};
  if (r.attack == 3) j["verifications"] = r.verifications;
  if (r.nonce) j["nonce"] = {{"r1", to_string(r.nonce->r1)}, {"r2", to_string(r.nonce->r2)}};
  return j;
}

json storage_json(const StorageReport& rep) {
  return json{{"n", rep.n},
              {"type1", rep.type1.to_string()},
              {"type2", rep.type2.to_string()},
              {"entry_bits", rep.entry_bits},
              {"beta1_entries", rep.beta1_entries},
              {"beta2_entries", rep.beta2_entries},
              {"alpha_entries", rep.alpha1_entries + rep.alpha2_entries},
              {"gamma_entries", rep.gamma1_entries + rep.gamma2_entries},
              {"beta_bits", rep.beta_bits},
              {"alpha_bits", rep.alpha_bits},
              {"gamma_bits", rep.gamma_bits},
              {"public_key_bytes", rep.public_key_bytes},
              {"private_key_bytes", rep.private_key_bytes},
              {"ciphertext_bytes", rep.ciphertext_bytes},
              {"notes", rep.notes}};
}

template <class Fn>
double median_us(int iterations, Fn&& fn) {
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(iterations));
  for (int i = 0; i < iterations; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    samples.push_back(std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count());
  }
  std::nth_element(samples.begin(), samples.begin() + static_cast<long>(samples.size() / 2), samples.end());
  return samples[samples.size() / 2];
}

}  // namespace

int main(int argc, char** argv) {
  if (sodium_init() < 0) {
    std::cerr << "error: libsodium failed to initialize\n";
    return kExitCrypto;
  }

  CLI::App app{"MST3 encryption over the automorphism group of the Suzuki function field"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Deterministic seed (testing only; default: system randomness)");
  };

  unsigned n = 0;
  std::string pub_path, priv_path, in_path = "-", out_path = "-", ct_path, armor = "raw";
  std::string type1_text, type2_text;
  bool unsafe_dump = false;
  int attack_id = 0;
  unsigned threads = 1;
  int iterations = 100;
  std::vector<unsigned> bench_sizes{33, 63, 65};

  auto* params_cmd = app.add_subcommand("params", "Print field and group parameters");
  params_cmd->add_option("n", n, "Field degree (odd, 3..127)")->required();

  auto* keygen_cmd = app.add_subcommand("keygen", "Generate a key pair");
  keygen_cmd->add_option("--n", n, "Field degree")->required();
  keygen_cmd->add_option("--type1", type1_text, "Block sizes of beta1, e.g. 2,2,2 (default: 2-bit blocks + one 3-bit)");
  keygen_cmd->add_option("--type2", type2_text, "Block sizes of beta2");
  keygen_cmd->add_option("--pub", pub_path, "Public key output file")->required();
  keygen_cmd->add_option("--priv", priv_path, "Private key output file")->required();
  keygen_cmd->add_flag("--unsafe-dump", unsafe_dump, "Also print the private key as hex");
  add_seed(keygen_cmd);

  auto* encrypt_cmd = app.add_subcommand("encrypt", "Encrypt one message block");
  encrypt_cmd->add_option("--pub", pub_path, "Public key file")->required();
  encrypt_cmd->add_option("--in", in_path, "Payload file ('-' for stdin)");
  encrypt_cmd->add_option("--out", out_path, "Ciphertext file ('-' for stdout)");
  encrypt_cmd->add_option("--armor", armor, "Ciphertext encoding")->check(CLI::IsMember({"raw", "hex", "base64"}));
  add_seed(encrypt_cmd);

  auto* decrypt_cmd = app.add_subcommand("decrypt", "Decrypt one ciphertext");
  decrypt_cmd->add_option("--pub", pub_path, "Public key file")->required();
  decrypt_cmd->add_option("--priv", priv_path, "Private key file")->required();
  decrypt_cmd->add_option("--in", in_path, "Ciphertext file ('-' for stdin)");
  decrypt_cmd->add_option("--out", out_path, "Payload file ('-' for stdout)");
  decrypt_cmd->add_option("--armor", armor, "Ciphertext encoding")->check(CLI::IsMember({"raw", "hex", "base64"}));

  auto* attack_cmd = app.add_subcommand("attack", "Run a brute-force attack oracle (n <= 5)");
  attack_cmd->add_option("id", attack_id, "Attack number")->required()->check(CLI::Range(1, 3));
  attack_cmd->add_option("--n", n, "Field degree for a freshly generated instance")->default_val(3);
  attack_cmd->add_option("--pub", pub_path, "Attack this public key instead");
  attack_cmd->add_option("--ct", ct_path, "Attack this ciphertext (raw blob) instead");
  attack_cmd->add_option("--threads", threads, "Worker threads for attacks 1 and 2")->default_val(1);
  add_seed(attack_cmd);

  auto* report_cmd = app.add_subcommand("report", "Claimed attack complexities as exact integers");
  report_cmd->add_option("--n", n, "Field degree")->required();

  auto* storage_cmd = app.add_subcommand("storage", "Key and ciphertext storage for a layout");
  storage_cmd->add_option("--n", n, "Field degree; an even value reports the nearest odd realizations")->required();
  storage_cmd->add_option("--type1", type1_text, "Block sizes of beta1");
  storage_cmd->add_option("--type2", type2_text, "Block sizes of beta2");

  auto* selftest_cmd = app.add_subcommand("selftest", "Run the exhaustive q = 8 checks");

  auto* bench_cmd = app.add_subcommand("bench", "Median keygen/encrypt/decrypt timings as JSON");
  bench_cmd->add_option("--iterations", iterations, "Iterations per measurement")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--sizes", bench_sizes, "Field degrees to measure")->delimiter(',');
  add_seed(bench_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (params_cmd->parsed()) {
      const FieldParams p = make_params(n);
      const GroupStats st = stats(p);
      std::cout << "n: " << p.n << "\n"
                << "s: " << p.s << "\n"
                << "q: " << to_string(p.q) << "\n"
                << "q0: " << to_string(p.q0) << "\n"
                << "modulus: " << to_hex(p.modulus) << "\n"
                << "group_order: " << big(st.group_order) << "\n"
                << "center_order: " << big(st.center_order) << "\n"
                << "full_aut_order: " << big(st.full_aut_order) << "\n"
                << "genus: " << big(st.genus) << "\n"
                << "rational_places: " << big(st.rational_places) << "\n"
                << "message_capacity_bytes: " << message_capacity(p) << "\n";
    } else if (keygen_cmd->parsed()) {
      const FieldParams p = make_params(n);
      const SignatureType t1 = parse_type(type1_text, n);
      const SignatureType t2 = parse_type(type2_text, n);
      const KeyPair kp = with_rng(seed, [&](auto& rng) { return keygen(p, t1, t2, rng); });
      const Bytes pub = serialize(kp.pub);
      const Bytes priv = serialize(kp.priv);
      write_file(pub_path, pub);
      write_file(priv_path, priv);
      std::cerr << "generated n=" << n << " type1=" << t1.to_string() << " type2=" << t2.to_string()
                << " public=" << pub.size() << "B private=" << priv.size() << "B\n";
      if (unsafe_dump) std::cout << to_hex_string(priv) << "\n";
    } else if (encrypt_cmd->parsed()) {
      const PublicKey pk = parse_public_key(read_file(pub_path));
      const Bytes payload = read_file(in_path);
      const GroupElement m = encode_message(pk.params(), payload);
      const Ciphertext ct = with_rng(seed, [&](auto& rng) { return encrypt(pk, m, rng); });
      write_file(out_path, armor_encode(serialize(pk.params(), ct), armor));
    } else if (decrypt_cmd->parsed()) {
      const PublicKey pk = parse_public_key(read_file(pub_path));
      const PrivateKey sk = parse_private_key(read_file(priv_path));
      const ParsedCiphertext blob = parse_ciphertext(armor_decode(read_file(in_path), armor));
      if (!(blob.params == pk.params())) throw CryptoError("ciphertext and key use different fields");
      const GroupElement m = decrypt(pk, sk, blob.ct);
      const auto payload = decode_message(pk.params(), m);
      write_file(out_path, Bytes(payload.begin(), payload.end()));
    } else if (attack_cmd->parsed()) {
      std::optional<PublicKey> pk;
      Ciphertext ct;
      if (!pub_path.empty() || !ct_path.empty()) {
        if (pub_path.empty() || ct_path.empty()) throw ParamError("--pub and --ct must be given together");
        pk = parse_public_key(read_file(pub_path));
        const ParsedCiphertext blob = parse_ciphertext(read_file(ct_path));
        if (!(blob.params == pk->params())) throw CryptoError("ciphertext and key use different fields");
        ct = blob.ct;
      } else {
        const FieldParams p = make_params(n);
        if (p.n > kMaxAttackBits) throw ParamError("attack instances are limited to n <= 5");
        with_rng(seed, [&](auto& rng) {
          KeyPair kp = keygen(p, rng);
          ct = encrypt(kp.pub, encode_message(p, {}), rng);
          pk = std::move(kp.pub);
          return 0;
        });
      }
      AttackResult res;
      switch (attack_id) {
        case 1:
          res = attack1_bruteforce_ciphertext(*pk, ct, padding_predicate(pk->params()), threads);
          break;
        case 2:
          res = attack2_bruteforce_nonce(*pk, ct, threads);
          break;
        default:
          res = attack3_session_key(*pk, ct);
          break;
      }
      std::cout << attack_json(res).dump() << "\n";
    } else if (report_cmd->parsed()) {
      const FieldParams p = make_params(n);
      const ComplexityReport rep = complexity_report(p);
      std::cout << json{{"n", p.n},
                        {"q", to_string(p.q)},
                        {"attack1", big(rep.attack1)},
                        {"attack2", big(rep.attack2)},
                        {"attack3", big(rep.attack3)},
                        {"attack4", big(rep.attack4)},
                        {"attack5", big(rep.attack5)}}
                       .dump(2)
                << "\n";
    } else if (storage_cmd->parsed()) {
      json out = json::array();
      if (n % 2 == 0) {
        for (const auto& rep : uniform_layout_report(n)) out.push_back(storage_json(rep));
      } else {
        const FieldParams p = make_params(n);
        out.push_back(storage_json(storage_report(p, parse_type(type1_text, n), parse_type(type2_text, n))));
      }
      std::cout << out.dump(2) << "\n";
    } else if (selftest_cmd->parsed()) {
      bool all = true;
      for (const auto& check : run_selftest()) {
        std::cout << (check.passed ? "PASS " : "FAIL ") << check.name << " (" << check.detail << ")\n";
        all = all && check.passed;
      }
      return all ? 0 : kExitCrypto;
    } else if (bench_cmd->parsed()) {
      json runs = json::array();
      with_rng(seed, [&](auto& rng) {
        for (const unsigned bn : bench_sizes) {
          const FieldParams p = make_params(bn);
          std::optional<KeyPair> kp;
          const double keygen_us = median_us(iterations, [&] { kp = keygen(p, rng); });
          const GroupElement m = encode_message(p, {});
          Ciphertext ct;
          const double encrypt_us = median_us(iterations, [&] { ct = encrypt(kp->pub, m, rng); });
          bool ok = true;
          const double decrypt_us = median_us(iterations, [&] { ok = ok && decrypt(kp->pub, kp->priv, ct) == m; });
          if (!ok) throw CryptoError("benchmark round trip failed at n = " + std::to_string(bn));
          const StorageReport rep = storage_report(p, default_type(bn), default_type(bn));
          runs.push_back(json{{"n", bn},
                              {"iterations", iterations},
                              {"keygen_median_us", keygen_us},
                              {"encrypt_median_us", encrypt_us},
                              {"decrypt_median_us", decrypt_us},
                              {"public_key_bytes", serialize(kp->pub).size()},
                              {"private_key_bytes", serialize(kp->priv).size()},
                              {"ciphertext_bytes", serialize(p, ct).size()},
                              {"message_capacity_bytes", message_capacity(p)},
                              {"entries_per_signature", rep.beta1_entries}});
        }
        return 0;
      });
      std::cout << json{{"bench", runs}}.dump(2) << "\n";
    }
  } catch (const ParamError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCrypto;
  }
  return 0;
}
