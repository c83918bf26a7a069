"""Reference matching engine: one deliberately simple, re-validating
main-loop implementation built from the package's functional operations.

It recomputes every set from scratch each iteration and re-checks the full
forest invariant list before every step, then emits trace lines in the same
format as the optimized engine.  Tests replay seeded runs on both engines
and fail with a line diff on the first divergence.
"""

from __future__ import annotations

from dataclasses import dataclass

from expaths import engine as eng


class ReferenceDivergence(AssertionError):
    pass


@dataclass
class ReferenceResult:
    matching: frozenset[int]
    iterations: int
    collapse_passes: int
    max_ell: int
    signatures: tuple[eng.Signature, ...]
    trace: tuple[str, ...]


class ReferenceEngine:
    def __init__(self, host, cfg: eng.EngineConfig, oracle=None):
        self.host = host
        self.cfg = cfg
        self.oracle = (oracle if oracle is not None
                       else eng.make_oracle(host, cfg.oracle))
        self.matching: frozenset[int] = frozenset()
        self.forest = eng.AlternatingForest(frozenset(host.all_a()), ())
        self.cap = (cfg.iteration_cap if cfg.iteration_cap is not None
                    else eng.default_iteration_cap(host.n_value, cfg.delta))
        self.iterations = 0
        self.collapse_passes = 0
        self.max_ell = 0
        self.signatures = [eng.signature(self.forest)]
        self.trace: list[str] = []

    def step(self) -> bool:
        """One main-loop iteration; False when the matching is perfect."""
        if not self.forest.unmatched_a:
            return False
        if self.iterations >= self.cap:
            raise eng.NoProgressError("reference: iteration cap",
                                      self.signatures[-1], self.iterations)
        self.iterations += 1
        problems = eng.validate_forest(self.host, self.forest, self.matching,
                                       self.cfg.delta, self.cfg.mu)
        if problems:
            raise ReferenceDivergence(
                "forest invariants broken before step "
                f"{self.iterations}: {problems}")
        new_layer = eng.build_layer(self.host, self.forest, frozenset(),
                                    frozenset(), self.cfg, self.matching,
                                    oracle=self.oracle)
        grown = eng.AlternatingForest(self.forest.unmatched_a,
                                      self.forest.layers + (new_layer,))
        self.max_ell = max(self.max_ell, grown.ell)
        res = eng.collapse_forest(self.host, grown, self.matching, self.cfg,
                                  oracle=self.oracle)
        self.forest = res.forest
        self.matching = res.matching
        self.collapse_passes += res.passes
        sig = eng.signature(self.forest)
        self.signatures.append(sig)
        event = eng.classify_event(res.passes, res.superpose_accepted,
                                   res.matching_grew)
        self.trace.append(f"{self.iterations} {self.forest.ell} "
                          f"{len(self.matching)} {sig.hash12()} {event}")
        if not new_layer.x and res.passes == 0:
            raise eng.NoProgressError("reference: stalled", sig,
                                      self.iterations)
        return True

    def run(self) -> ReferenceResult:
        while self.step():
            pass
        return ReferenceResult(
            matching=self.matching,
            iterations=self.iterations,
            collapse_passes=self.collapse_passes,
            max_ell=self.max_ell,
            signatures=tuple(self.signatures),
            trace=tuple(self.trace),
        )


def diff_traces(optimized: tuple[str, ...], reference: tuple[str, ...]) -> str:
    """Human-readable first-divergence report; empty string when identical."""
    for i, (a, b) in enumerate(zip(optimized, reference)):
        if a != b:
            return f"trace line {i} differs:\n  optimized: {a}\n  reference: {b}"
    if len(optimized) != len(reference):
        return (f"trace lengths differ: optimized {len(optimized)} vs "
                f"reference {len(reference)}")
    return ""
