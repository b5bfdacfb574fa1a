#pragma once

// The sequence ... f_-1, f_0, f_1 ... of forward (ker A) and backward (im Q)
// transforms, with its energy ledger and termination analysis.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "willmore/backlund.hpp"

namespace willmore {

enum class TerminationKind { Twistor, Minimal, RoundSphere, NotTerminated, MaxSteps };
enum class Side { None, Forward, Backward, Both };

const char* to_string(TerminationKind k);
const char* to_string(Side s);

using Evidence = std::vector<std::pair<std::string, double>>;

struct Termination {
  TerminationKind kind = TerminationKind::NotTerminated;
  Side side = Side::None;
  Evidence evidence;
  std::string note;
};

struct LedgerEntry {
  int index = 0;
  double energy = 0.0;
  double degree = 0.0;
  std::optional<long> normal_degree;  // closed charts only
  double harmonicity = 0.0;           // max of |d*A|, |d*Q|
  double a_norm = 0.0;
  double q_norm = 0.0;
  bool a_vanishes = false;
  bool q_vanishes = false;
  /// Residuals against the neighbour this entry was transformed from
  /// (absent for entry 0): Q~ = A or A^ = Q, and the sphere relation.
  std::optional<double> hopf_swap;
  std::optional<double> sphere_relation;
  /// Passed the Willmore gate; a side stops after an uncertified surface.
  bool certified = true;
  double gate_ratio = 0.0;
};

struct SideRecord {
  Termination termination;
  int steps = 0;  // transforms that produced a surface
  /// Line of the constant transform when the side ended in a constant map.
  std::optional<HVec2> constant_point;
};

struct SequenceLedger {
  std::vector<LedgerEntry> entries;  // ordered by index
  int genus = 0;
  int deg_k = -2;
  /// Disk-chart run: energies and degrees are chart-restricted.
  bool local = true;
  SideRecord forward;
  SideRecord backward;
  Termination termination;
  double gate_residual = 0.0;
  double gate_coarse_residual = 0.0;

  const LedgerEntry& at(int index) const;
};

struct SequenceOptions {
  int max_steps = 3;
  Tolerances tol;
  std::uint64_t seed = 0;
};

struct GateResult {
  bool passed = false;
  double residual = 0.0;
  double coarse_residual = 0.0;
  /// coarse / fine for the self-convergence gate; the relative residual for
  /// the derived gate.
  double ratio = 0.0;
};

/// Willmore gate by self-convergence: max(|d*A|, |d*Q|) must drop by
/// tol.gate_ratio from the same map sampled on every other node, or already
/// sit below the roundoff floor.
GateResult willmore_gate(const SurfaceChart& s, const Tolerances& tol = {});

/// Gate for a surface produced by a transform: max(|d*A|, |d*Q|) times the
/// chart extent, relative to max|A| + max|Q|, at most tol.derived_gate.
GateResult derived_gate(const SurfaceChart& s, const Tolerances& tol = {});

/// Every other node of the chart, spacing doubled.
SurfaceChart subsample(const SurfaceChart& s);

/// Throws NonWillmoreError when the gate fails.
SequenceLedger run_sequence(const SurfaceChart& f0, const SequenceOptions& options = {});

/// max |(W_i - W_i-1) - 4 pi v_i| over recorded steps (0 without steps or
/// on local runs).
double quantization_check(const SequenceLedger& ledger);

struct LengthBound {
  bool evaluated = false;  // false on local runs
  bool satisfied = true;
  double lhs = 0.0;        // n v + W / 4pi + 2 n (n + 1) deg K
  int n = 0;
};
LengthBound length_bound_check(const SequenceLedger& ledger);

/// Combines the two side records into the sequence's termination.
Termination classify_termination(const SideRecord& forward, const SideRecord& backward, const Tolerances& tol = {});

}  // namespace willmore
