#pragma once

#include <random>
#include <string>

#include "cobra/server/wire.hpp"
#include "random_ops.hpp"

namespace cobra::testing {

inline constexpr std::u32string_view kWireAlphabet = U"aZ0 \n\"\\é€😀\u0000\u007f";

inline std::uint64_t random_uint(std::mt19937_64& rng) {
  // Mix small values with ones that need every varint width.
  const int bits = static_cast<int>(rng() % 65);
  if (bits == 0) return 0;
  const std::uint64_t v = rng();
  return bits == 64 ? v : (v & ((std::uint64_t{1} << bits) - 1));
}

inline std::string random_utf8(std::mt19937_64& rng, std::size_t max_len) {
  return to_utf8(random_text(rng, max_len, kWireAlphabet));
}

inline sync::Annotation random_annotation(std::mt19937_64& rng) {
  sync::Annotation a;
  a.range.begin = rng() % 1000;
  a.range.end = a.range.begin + rng() % 50;
  a.kind = static_cast<sync::AnnotationKind>(rng() % 4);
  a.class_name = random_utf8(rng, 6);
  a.message = random_utf8(rng, 12);
  return a;
}

inline server::wire::Message random_message(std::mt19937_64& rng) {
  using namespace server::wire;
  auto op = [&] {
    const Text base = random_text(rng, 20, kWireAlphabet);
    return random_operation(rng, base.size(), kWireAlphabet);
  };
  switch (rng() % 11) {
    case 0: return ClientHello{random_uint(rng)};
    case 1: {
      ServerHello m{random_utf8(rng, 16), {}};
      for (auto n = rng() % 5; n > 0; --n) m.docs.push_back(random_utf8(rng, 10));
      return m;
    }
    case 2: return OpenDoc{random_utf8(rng, 10)};
    case 3: return DocState{random_utf8(rng, 10), random_uint(rng), random_text(rng, 40, kWireAlphabet)};
    case 4: return Edit{random_utf8(rng, 10), random_uint(rng), op()};
    case 5: return Ack{random_utf8(rng, 10), random_uint(rng)};
    case 6: return RemoteEdit{random_utf8(rng, 10), random_uint(rng), op(), random_uint(rng)};
    case 7: {
      Annotations m{random_utf8(rng, 10), random_uint(rng), {}};
      for (auto n = rng() % 6; n > 0; --n) m.batch.push_back(random_annotation(rng));
      return m;
    }
    case 8: return FragmentStep{random_utf8(rng, 10), random_uint(rng), random_uint(rng)};
    case 9: {
      SettingsChanged m;
      for (auto n = rng() % 4; n > 0; --n) {
        m.changes.push_back({random_utf8(rng, 12), random_utf8(rng, 8), random_utf8(rng, 8), rng() % 2 == 0});
      }
      return m;
    }
    default: return Error{random_utf8(rng, 12), random_utf8(rng, 30)};
  }
}

}  // namespace cobra::testing
