"""
Results Verification Script

Re-derives the headline numbers of the toolkit and prints a pass/fail
report: the Z(x)Z regression point, the exact-vs-dense agreement, the
bound gap over random codes and the d=3 witness graph.
"""

import sys
from pathlib import Path

# Add project root
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

import numpy as np

from config import OUTPUT_DIR


def check_regression():
    """Z(x)Z on the nu = 0 face state."""
    from src.codes.stabilizer import StabilizerCode
    from src.distillation.engine import distill_exact
    from src.distillation.sweep import bound_margin
    from src.phase_space.wigner import nu_family

    print("=" * 60)
    print("Regression: Z(x)Z at d=3")
    print("=" * 60)

    code = StabilizerCode.from_rows([[1, 1, 0, 0]], 3)
    res = distill_exact(code, nu_family(3, 0.0))
    f0 = res.w_out.value_at((0, 0))
    margin = bound_margin(code, (0, 0))
    ok = (abs(f0 - 1 / 11) < 1e-12 and abs(res.acceptance_probability - 22 / 64) < 1e-12
          and abs(margin + 1 / 15) < 1e-9)
    print(f"  f(0) = {f0:.17g}  (expected 1/11)")
    print(f"  acceptance = {res.acceptance_probability:.17g}  (expected 22/64)")
    print(f"  bound margin = {margin:.12g}  (expected -1/15)")
    print(f"\n{'PASS' if ok else 'FAIL'}")
    return ok


def check_oracle(trials: int = 50):
    """Exact phase-space engine against dense projection."""
    from src.codes.stabilizer import random_code
    from src.distillation.engine import distill_exact
    from src.oracle.dense import distill_dense, random_density_matrix
    from src.phase_space.wigner import wigner_from_density

    print("\n" + "=" * 60)
    print("Cross-check: phase space vs dense oracle")
    print("=" * 60)

    worst = 0.0
    for i in range(trials):
        code = random_code(3, 2 + i % 3, seed=[7, i])
        rho = random_density_matrix(3, seed=i)
        out, _ = distill_dense(code, rho)
        res = distill_exact(code, wigner_from_density(rho.matrix))
        worst = max(worst, float(np.abs(wigner_from_density(out.matrix).values - res.w_out.values).max()))
    ok = worst <= 1e-9
    print(f"  {trials} random (code, state) pairs, max deviation {worst:.3e}")
    print(f"\n{'PASS' if ok else 'FAIL'}")
    return ok


def check_bound_gap(codes: int = 100):
    """Trivial codes have f(0) = 0, nontrivial codes f(0) > 0."""
    from src.distillation.sweep import survey_frame, theorem2_survey
    from src.serialization.formats import write_csv

    print("\n" + "=" * 60)
    print("Bound gap over random codes")
    print("=" * 60)

    frame = survey_frame(theorem2_survey(3, 4, codes, seed=0, progress=True))
    path = write_csv(frame, OUTPUT_DIR / "bound_gap_survey.csv")
    ok = bool(frame["consistent"].all())
    print(f"  codes: {len(frame)}, trivial: {int(frame['trivial'].sum())}")
    print(f"  smallest nontrivial gap: {frame.loc[~frame['trivial'], 'min_gap'].min():.6g}")
    print(f"  least negative nontrivial margin: {frame.loc[~frame['trivial'], 'margin'].max():.6g}")
    print(f"  table saved to: {path}")
    print(f"\n{'PASS' if ok else 'FAIL'}")
    return ok


def check_witness_graph():
    """Graph counts and the Sigma identity at d=3."""
    from src.contextuality.witness import build_graph, sigma_identity_check

    print("\n" + "=" * 60)
    print("Witness graph at d=3")
    print("=" * 60)

    graph = build_graph(3, 0, 0)
    deviation = max(sigma_identity_check(3, u, v) for u in range(3) for v in range(3))
    ok = graph.n_vertices == 240 and graph.n_edges == 7116 and deviation <= 1e-9
    print(f"  vertices: {graph.n_vertices}, edges: {graph.n_edges}")
    print(f"  Sigma identity deviation: {deviation:.3e}")
    print(f"\n{'PASS' if ok else 'FAIL'}")
    return ok


def main():
    print("\n" + "=" * 60)
    print("Verification Report")
    print("=" * 60 + "\n")

    results = {
        "regression": check_regression(),
        "oracle": check_oracle(),
        "bound gap": check_bound_gap(),
        "witness graph": check_witness_graph(),
    }

    print("\n" + "=" * 60)
    print("Summary")
    print("=" * 60)
    for name, ok in results.items():
        print(f"  {name:<15} {'PASS' if ok else 'FAIL'}")
    return 0 if all(results.values()) else 1


if __name__ == "__main__":
    sys.exit(main())
