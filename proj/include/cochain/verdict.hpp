#pragma once

// Result of a fuel-bounded semi-decision. A predicate P(x) is realized as a
// total function (x, fuel) -> Verdict; Yes is final and sound, NotYet only
// says that the given fuel was not enough.
//
// Some routes can also prove that P(x) is false (for instance an exact overlap
// of two closed balls). They still answer NotYet, but set `refuted` so that a
// search may drop the candidate instead of feeding it more fuel.

#include "cochain/rational.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace cochain {

enum class Outcome { yes, not_yet };

struct Verdict {
  Outcome outcome = Outcome::not_yet;
  std::size_t stage = 0;
  std::vector<Natural> witness;
  bool refuted = false;
  std::string note;

  bool is_yes() const { return outcome == Outcome::yes; }
  explicit operator bool() const { return is_yes(); }

  static Verdict yes(std::size_t stage, std::vector<Natural> witness = {}) {
    Verdict v;
    v.outcome = Outcome::yes;
    v.stage = stage;
    v.witness = std::move(witness);
    return v;
  }
  static Verdict not_yet(std::size_t stage, std::string note = {}) {
    Verdict v;
    v.stage = stage;
    v.note = std::move(note);
    return v;
  }
  static Verdict refute(std::size_t stage, std::string note) {
    Verdict v;
    v.stage = stage;
    v.refuted = true;
    v.note = std::move(note);
    return v;
  }
};

}  // namespace cochain
