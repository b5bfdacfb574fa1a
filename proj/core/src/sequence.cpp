#include "willmore/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "willmore/errors.hpp"

namespace willmore {

const char* to_string(TerminationKind k) {
  switch (k) {
    case TerminationKind::Twistor: return "Twistor";
    case TerminationKind::Minimal: return "Minimal";
    case TerminationKind::RoundSphere: return "RoundSphere";
    case TerminationKind::NotTerminated: return "NotTerminated";
    case TerminationKind::MaxSteps: return "MaxSteps";
  }
  return "?";
}

const char* to_string(Side s) {
  switch (s) {
    case Side::None: return "none";
    case Side::Forward: return "forward";
    case Side::Backward: return "backward";
    case Side::Both: return "both";
  }
  return "?";
}

const LedgerEntry& SequenceLedger::at(int index) const {
  for (const LedgerEntry& e : entries)
    if (e.index == index) return e;
  throw InvalidArgumentError("no ledger entry with index " + std::to_string(index));
}

SurfaceChart subsample(const SurfaceChart& s) {
  const GridChart& c = s.chart();
  auto coarse_count = [](int n, bool periodic) { return periodic ? n / 2 : (n + 1) / 2; };
  if ((c.periodic_x && c.nx % 2 != 0) || (c.periodic_y && c.ny % 2 != 0)) {
    throw InvalidArgumentError("periodic axes need an even node count to subsample");
  }
  GridChart cc = c;
  cc.nx = coarse_count(c.nx, c.periodic_x);
  cc.ny = coarse_count(c.ny, c.periodic_y);
  cc.hx = 2.0 * c.hx;
  cc.hy = 2.0 * c.hy;
  cc.halo = (c.halo + 1) / 2;
  cc.validate();
  Field<Quaternion> g = Field<Quaternion>::generate(cc, [&](int i, int j) { return s.g()(2 * i, 2 * j); });
  return SurfaceChart(std::move(g), s.options());
}

GateResult willmore_gate(const SurfaceChart& s, const Tolerances& tol) {
  GateResult r;
  const HarmonicityReport h = harmonicity_residual(s);
  r.residual = std::max(h.dstar_a, h.dstar_q);
  if (r.residual <= tol.gate_floor * tol.scale) {
    r.passed = true;
    return r;
  }
  try {
    const HarmonicityReport hc = harmonicity_residual(subsample(s));
    r.coarse_residual = std::max(hc.dstar_a, hc.dstar_q);
  } catch (const InvalidArgumentError&) {
    return r;
  }
  r.ratio = r.coarse_residual / r.residual;
  r.passed = r.ratio >= tol.gate_ratio / std::max(tol.scale, 1e-300);
  return r;
}

GateResult derived_gate(const SurfaceChart& s, const Tolerances& tol) {
  GateResult r;
  const HarmonicityReport h = harmonicity_residual(s);
  r.residual = std::max(h.dstar_a, h.dstar_q);
  const double hopf = max_norm(s.hopf().A, &s.trusted()) + max_norm(s.hopf().Q, &s.trusted());
  const double extent = std::max(s.chart().extent_x(), s.chart().extent_y());
  r.ratio = hopf > 0.0 ? r.residual * extent / hopf : 0.0;
  r.passed = r.residual <= tol.gate_floor * tol.scale || r.ratio <= tol.derived_gate * tol.scale;
  return r;
}

namespace {

LedgerEntry analyze(const SurfaceChart& s, int index, const Tolerances& tol) {
  LedgerEntry e;
  e.index = index;
  e.energy = willmore_energy(s);
  const DegreeReport d = degree(s);
  e.degree = d.degree;
  e.normal_degree = d.rounded;
  const HarmonicityReport h = harmonicity_residual(s);
  e.harmonicity = std::max(h.dstar_a, h.dstar_q);
  e.a_norm = max_norm(s.hopf().A, &s.trusted());
  e.q_norm = max_norm(s.hopf().Q, &s.trusted());
  e.a_vanishes = hopf_vanishes(s, TransformDirection::Forward, tol);
  e.q_vanishes = hopf_vanishes(s, TransformDirection::Backward, tol);
  return e;
}

struct SideRun {
  SideRecord record;
  std::vector<LedgerEntry> entries;
  std::optional<double> first_full_relation;
};

SideRun run_side(const SurfaceChart& f0, TransformDirection dir, const SequenceOptions& opt) {
  const bool forward = dir == TransformDirection::Forward;
  const int sign = forward ? 1 : -1;
  const Tolerances& tol = opt.tol;
  SideRun run;
  Termination& term = run.record.termination;
  term.side = forward ? Side::Forward : Side::Backward;

  std::optional<SurfaceChart> holder;
  const SurfaceChart* cur = &f0;
  HMat2 cumulative = HMat2::identity();  // chart coordinates of cur = cumulative * base
  for (int step = 1; step <= opt.max_steps; ++step) {
    const double h = cur->chart().relative_spacing();
    const double a = max_norm(cur->hopf().A, &cur->trusted());
    const double q = max_norm(cur->hopf().Q, &cur->trusted());
    const bool field_zero = hopf_vanishes(*cur, dir, tol);
    const bool other_zero = hopf_vanishes(*cur, forward ? TransformDirection::Backward : TransformDirection::Forward, tol);
    if (field_zero) {
      term.kind = other_zero ? TerminationKind::RoundSphere : TerminationKind::Twistor;
      term.evidence.emplace_back("terminal_index", sign * (step - 1));
      term.evidence.emplace_back(forward ? "a_norm" : "q_norm", forward ? a : q);
      term.evidence.emplace_back("vanishing_threshold", tol.hopf_zero(h, a + q));
      return run;
    }
    TransformResult t;
    try {
      t = backlund_transform(*cur, dir, tol, opt.seed + static_cast<std::uint64_t>(step));
    } catch (const AllZeroError& e) {
      term.kind = TerminationKind::Twistor;
      term.note = e.what();
      return run;
    } catch (const NoAffineChartError& e) {
      term.kind = TerminationKind::NotTerminated;
      term.note = e.what();
      return run;
    }
    if (t.constant) {
      term.kind = TerminationKind::Minimal;
      term.evidence.emplace_back("terminal_index", sign * (step - 1));
      term.evidence.emplace_back("spread", t.spread);
      term.evidence.emplace_back("constant_threshold", tol.constant_map_radius(h));
      const HVec2 p = inverse(cumulative) * t.reference;
      run.record.constant_point = p * (1.0 / p.norm());
      return run;
    }
    LedgerEntry e = analyze(*t.surface, sign * step, tol);
    e.hopf_swap = hopf_swap_residual(*cur, t);
    const SphereRelation rel = sphere_relation_residual(*cur, t);
    e.sphere_relation = rel.quotient;
    if (step == 1) run.first_full_relation = rel.full;
    const GateResult gate = derived_gate(*t.surface, tol);
    e.certified = gate.passed;
    e.gate_ratio = gate.ratio;
    run.entries.push_back(e);
    if (!gate.passed) {
      term.kind = TerminationKind::NotTerminated;
      term.note = "f_" + std::to_string(sign * step) + " fails the Willmore gate (residual " +
                  std::to_string(gate.residual) + "): resolution exhausted";
      run.record.steps = step;
      return run;
    }
    cumulative = t.moebius * cumulative;
    holder.emplace(std::move(*t.surface));
    cur = &*holder;
    run.record.steps = step;
  }
  term.kind = TerminationKind::MaxSteps;
  return run;
}

}  // namespace

Termination classify_termination(const SideRecord& forward, const SideRecord& backward, const Tolerances& tol) {
  const TerminationKind fk = forward.termination.kind;
  const TerminationKind bk = backward.termination.kind;
  Termination t;
  auto merge = [&t](const SideRecord& r, const char* prefix) {
    for (const auto& [k, v] : r.termination.evidence) t.evidence.emplace_back(std::string(prefix) + k, v);
  };
  merge(forward, "forward_");
  merge(backward, "backward_");
  auto side_of = [&](TerminationKind k) {
    const bool f = fk == k, b = bk == k;
    return f && b ? Side::Both : f ? Side::Forward : b ? Side::Backward : Side::None;
  };
  if (fk == TerminationKind::RoundSphere || bk == TerminationKind::RoundSphere) {
    t.kind = TerminationKind::RoundSphere;
    t.side = Side::Both;
  } else if (side_of(TerminationKind::Minimal) != Side::None) {
    t.kind = TerminationKind::Minimal;
    t.side = side_of(TerminationKind::Minimal);
    if (forward.constant_point && backward.constant_point) {
      const double d = chordal_distance(*forward.constant_point, *backward.constant_point);
      t.evidence.emplace_back("constant_points_distance", d);
      t.evidence.emplace_back("constant_points_threshold", tol.scale * tol.constant_map);
    }
  } else if (side_of(TerminationKind::Twistor) != Side::None) {
    t.kind = TerminationKind::Twistor;
    t.side = side_of(TerminationKind::Twistor);
  } else if (side_of(TerminationKind::MaxSteps) != Side::None) {
    t.kind = TerminationKind::MaxSteps;
    t.side = side_of(TerminationKind::MaxSteps);
  } else {
    t.kind = TerminationKind::NotTerminated;
    t.side = Side::None;
  }
  if (!forward.termination.note.empty()) t.note += "forward: " + forward.termination.note;
  if (!backward.termination.note.empty()) t.note += (t.note.empty() ? "" : "; ") + ("backward: " + backward.termination.note);
  return t;
}

SequenceLedger run_sequence(const SurfaceChart& f0, const SequenceOptions& options) {
  if (options.max_steps < 0) throw InvalidArgumentError("max_steps must be non-negative");
  const GateResult gate = willmore_gate(f0, options.tol);
  if (!gate.passed) {
    throw NonWillmoreError("harmonicity residual " + std::to_string(gate.residual) + " does not converge (coarse " +
                           std::to_string(gate.coarse_residual) + ")");
  }
  SequenceLedger ledger;
  ledger.gate_residual = gate.residual;
  ledger.gate_coarse_residual = gate.coarse_residual;
  ledger.local = !f0.chart().closed();
  ledger.genus = ledger.local ? 0 : 1;
  ledger.deg_k = 2 * ledger.genus - 2;

  SideRun fwd = run_side(f0, TransformDirection::Forward, options);
  SideRun bwd = run_side(f0, TransformDirection::Backward, options);
  for (auto it = bwd.entries.rbegin(); it != bwd.entries.rend(); ++it) ledger.entries.push_back(*it);
  ledger.entries.push_back(analyze(f0, 0, options.tol));
  for (const LedgerEntry& e : fwd.entries) ledger.entries.push_back(e);

  // A vanishing Hopf field on f0 forces the opposite transform to reverse S.
  if (fwd.record.termination.kind == TerminationKind::Twistor && bwd.first_full_relation) {
    fwd.record.termination.evidence.emplace_back("opposite_full_sphere_relation", *bwd.first_full_relation);
  }
  if (bwd.record.termination.kind == TerminationKind::Twistor && fwd.first_full_relation) {
    bwd.record.termination.evidence.emplace_back("opposite_full_sphere_relation", *fwd.first_full_relation);
  }
  ledger.forward = fwd.record;
  ledger.backward = bwd.record;
  ledger.termination = classify_termination(ledger.forward, ledger.backward, options.tol);
  return ledger;
}

double quantization_check(const SequenceLedger& ledger) {
  if (ledger.local) return 0.0;
  double worst = 0.0;
  for (std::size_t k = 1; k < ledger.entries.size(); ++k) {
    const LedgerEntry& prev = ledger.entries[k - 1];
    const LedgerEntry& cur = ledger.entries[k];
    if (!prev.certified || !cur.certified) continue;
    const double v = cur.normal_degree ? static_cast<double>(*cur.normal_degree) : cur.degree;
    worst = std::max(worst, std::abs((cur.energy - prev.energy) - 4.0 * std::numbers::pi * v));
  }
  return worst;
}

LengthBound length_bound_check(const SequenceLedger& ledger) {
  LengthBound b;
  if (ledger.local) return b;
  const LedgerEntry& f0 = ledger.at(0);
  const double v = f0.normal_degree ? static_cast<double>(*f0.normal_degree) : f0.degree;
  b.evaluated = true;
  b.n = ledger.forward.steps;
  b.lhs = b.n * v + f0.energy / (4.0 * std::numbers::pi) + 2.0 * b.n * (b.n + 1) * ledger.deg_k;
  b.satisfied = b.lhs >= 0.0;
  return b;
}

}  // namespace willmore
