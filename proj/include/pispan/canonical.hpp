#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pispan/process.hpp"

namespace pispan {

// One parallel component `weight : guard`. A Nil guard marks a residue
// thread: a terminated branch that still carries elapsed time.
struct Thread {
  std::uint64_t weight = 0;
  Process guard;

  std::string str() const;
};

// (new a1..an)(w1 : G1 | ... | wm : Gm) with binders renamed to a canonical
// numbering, threads sorted, and guard bodies canonicalized recursively.
struct CanonicalForm {
  std::vector<std::string> bound;
  std::vector<Thread> threads;
  std::string key;

  Process embed() const;
  // Largest weight among the threads; 0 when there are none.
  std::uint64_t max_weight() const;

  friend bool operator==(const CanonicalForm& a, const CanonicalForm& b) { return a.key == b.key; }
};

CanonicalForm canonicalize(const Process& p);
bool congruent(const Process& p, const Process& q);

}  // namespace pispan
