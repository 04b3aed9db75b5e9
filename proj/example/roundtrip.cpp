// Generate a key at n = 17, encrypt a short payload, decrypt it again.

#include <iostream>
#include <random>
#include <string>

#include "mst3sz/mst3sz.hpp"

int main() {
  using namespace mst3sz;

  std::random_device seed;
  std::mt19937_64 rng(seed());

  const FieldParams params = make_params(17);
  const KeyPair keys = keygen(params, rng);

  const std::string text = "hi!";
  const GroupElement m = encode_message(params, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
  const Ciphertext ct = encrypt(keys.pub, m, rng);

  const auto payload = decode_message(params, decrypt(keys.pub, keys.priv, ct));
  std::cout << "capacity " << message_capacity(params) << " bytes, ciphertext "
            << serialize(params, ct).size() << " bytes, decrypted \""
            << std::string(payload.begin(), payload.end()) << "\"\n";
  return std::string(payload.begin(), payload.end()) == text ? 0 : 1;
}
