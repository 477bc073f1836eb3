#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pispan/derivation.hpp"
#include "pispan/semantics.hpp"

namespace pispan {

// Directory searched for relative inputs that do not exist as given:
// $PISPAN_CORPUS if set, else the corpus directory of the source tree.
std::filesystem::path corpus_dir();
// `path` as given if it exists, else corpus_dir()/path, else
// corpus_dir()/basename. Throws Io when none exists.
std::filesystem::path resolve_input(const std::string& path);
std::string read_file(const std::filesystem::path& path);

Process load_process(const std::string& path);

// A `.usg` file: a usage, optionally preceded by `@indices i j ...` and
// `@constraint I <= J` lines. `#` starts a comment.
struct UsageFile {
  VarSet indices;
  ConstraintSet constraints;
  Usage usage;
};

UsageFile parse_usage_file(const std::string& text);
UsageFile load_usage(const std::string& path);

struct LoadedDerivation {
  DerivationScript script;
  Process process;
};

// Loads a `.deriv` file and the process it names (relative to the script).
LoadedDerivation load_derivation(const std::string& path);

// Valuations of `indices` over 0..max that satisfy `constraints`; a single
// empty valuation when there are no indices.
std::vector<Valuation> default_valuations(const VarSet& indices, const ConstraintSet& constraints,
                                          std::uint64_t max = 3);

struct SoundnessRun {
  Valuation valuation;
  // Values substituted for Nat-typed free names.
  std::map<std::string, std::uint64_t> inputs;
  std::uint64_t span = 0;
  bool exact = false;
  std::size_t states = 0;
  Extended lower;
  Extended upper;
  bool upper_ok = false;
  bool lower_checked = false;
  bool lower_ok = true;
  bool pass() const { return upper_ok && lower_ok; }
};

struct SoundnessReport {
  bool accepted = false;
  std::string error;
  Interval bound;
  std::vector<std::string> unreliable;
  std::vector<SoundnessRun> runs;

  bool pass() const;
  // Some oracle run ran out of fuel, so its span is only a lower bound.
  bool advisory() const;
};

SoundnessReport run_soundness(const DerivationScript& script, const Process& process,
                              const std::vector<Valuation>& valuations, std::size_t fuel = 100000,
                              const CheckConfig& config = {});

}  // namespace pispan
