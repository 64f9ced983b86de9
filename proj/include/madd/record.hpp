#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace madd {

// Value of the binary sensitive attribute.
enum class Group : std::uint8_t { G0 = 0, G1 = 1 };

// One student's predicted success probability, group tag and (optional)
// true outcome, 1 = success.
struct ScoredRecord {
  double proba = 0.0;
  Group group = Group::G0;
  std::optional<int> label;
};

inline std::size_t group_index(Group g) { return static_cast<std::size_t>(g); }

// Probabilities of the records belonging to `g`, in input order.
inline std::vector<double> probas_of(std::span<const ScoredRecord> records, Group g) {
  std::vector<double> out;
  for (const auto& r : records) {
    if (r.group == g) out.push_back(r.proba);
  }
  return out;
}

inline std::size_t count_of(std::span<const ScoredRecord> records, Group g) {
  std::size_t n = 0;
  for (const auto& r : records) n += (r.group == g);
  return n;
}

}  // namespace madd
