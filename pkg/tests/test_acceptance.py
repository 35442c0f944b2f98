"""Acceptance gate: one test per verified property group, at the stated
tolerances.  Each test prints a single pass/fail line for its criterion."""

import hashlib
import math
from pathlib import Path

from conftest import run_all_suites


def _checks(art):
    return {c["name"]: c for c in art["checks"]}


def _named(art, prefix):
    return [c for c in art["checks"] if c["name"].startswith(prefix)]


def _report(label, conditions):
    ok = all(bool(c) for c in conditions)
    print(f"{'PASS' if ok else 'FAIL'}: {label}")
    assert ok, label
    return ok


def test_01_kernel_normalization(suites):
    art = suites["kernel"]
    conds = [c["value"] <= 1e-6 for c in _named(art, "odqvist_mass_diag")]
    conds += [c["value"] <= 1e-8 for c in _named(art, "odqvist_mass_offdiag")]
    conds += [c["value"] <= 1e-8 for c in _named(art, "poisson_mass")]
    assert len(conds) == (3 + 1 + 1) * 3 + (4 + 1 + 1) * 3
    _report("kernel normalization (masses 1 / 0 at three heights, n = 3, 4)",
            conds)


def test_02_golden_kernel_values(suites):
    golden = _named(suites["kernel"], "golden_")
    assert len(golden) == 4
    _report("golden kernel values to 1e-12",
            [c["value"] <= 1e-12 for c in golden])


def test_03_cone_average_identity(suites):
    conds = [c["value"] <= 0.02
             for c in _named(suites["tent"], "cone_average_identity")]
    assert len(conds) == 3
    _report("cone-average identity <= 2% on three smooth fields (mu = pi)",
            conds)


def test_04_tent_closed_forms(suites):
    cks = _checks(suites["tent"])
    a2 = cks["conical_A2_closed_form"]["value"]
    c2 = cks["carleson_closed_form"]["value"]
    _report("conical A_2 = sqrt(3 pi / 2) and Carleson = sqrt(2), each +-1%",
            [a2 <= 0.01, c2 <= 0.01])


def test_05_tent_holder(suites):
    worst = _checks(suites["tent"])["tent_holder_max_ratio"]["value"]
    _report("tent-space Holder: lhs <= (1 + 1e-6) rhs on 20 random pairs",
            [worst <= 1.0 + 1e-6])


def test_06_aperture_comparability(suites):
    cks = _checks(suites["tent"])
    _report("aperture monotone, family ratio spread <= 1.5",
            [cks["aperture_monotone"]["pass"],
             cks["aperture_family_spread"]["value"] <= 1.5])


def test_07_local_lq_equivalence(suites):
    cks = _checks(suites["tent"])
    _report("local L^q equivalence: both ratio spreads <= 3",
            [cks["local_lq_spread_forward"]["value"] <= 3.0,
             cks["local_lq_spread_reverse"]["value"] <= 3.0])


def test_08_littlewood_paley(suites):
    cks = _checks(suites["freq"])
    _report("Littlewood-Paley partition/orthogonality 1e-12, dilation 1e-6, "
            "semigroup 1e-8",
            [cks["lp_partition_of_unity"]["value"] <= 1e-12,
             cks["lp_block_orthogonality"]["value"] <= 1e-12,
             cks["tl_norm_dyadic_dilation"]["value"] <= 1e-6,
             cks["poisson_semigroup_quarter"]["value"] <= 1e-8])


def test_09_poisson_tent_equivalence(suites):
    art = suites["freq"]
    spread = _checks(art)["poisson_tent_equivalence_spread"]["value"]
    _report("Poisson-tent equivalence spread <= 1.5 on a 10-member family",
            [len(art["scales"]) == 10, spread <= 1.5])


def test_10_stokes_extension(suites):
    cks = _checks(suites["linear"])
    _report("extension: residual 1e-3, div 1e-6, recovery 5% at 4h, "
            "scaling 1e-6",
            [cks["extension_momentum_residual"]["value"] <= 1e-3,
             cks["extension_divergence"]["value"] <= 1e-6,
             cks["extension_boundary_recovery_4h"]["value"] <= 0.05,
             cks["extension_scaling_equivariance"]["value"] <= 1e-6])


def test_11_green_potential(suites):
    cks = _checks(suites["green"])
    _report("Green potential: cross-check 1%, residual 1e-2, boundary 1e-2, "
            "pointwise bounds finite with <= 10% drift",
            [cks["green_path_cross_check"]["value"] <= 0.01,
             cks["green_momentum_residual"]["value"] <= 1e-2,
             cks["green_boundary_value"]["value"] <= 1e-2,
             cks["green_divergence"]["value"] <= 1e-6,
             cks["green_pointwise_bounds_finite"]["pass"],
             cks["green_pointwise_bounds_drift"]["value"] <= 0.10])


def test_12_mixed_norm_boundedness(suites):
    art = suites["gbeta"]
    cks = _checks(art)
    n_members = len(art["plain"]["ratios"])
    _report("fractional potential mixed norms: spread <= 2 on 12-member "
            "families, off-line exponents refused",
            [n_members == 12,
             cks["gbeta_mixed_norm_spread"]["value"] <= 2.0,
             cks["gbeta_weighted_spread"]["value"] <= 2.0,
             cks["gbeta_off_line_refused"]["pass"]])


def test_13_linear_estimate_suites(suites):
    art = suites["linear"]
    cks = _checks(art)
    ratios = (art["base_report"]["boundary_ratios"]
              + art["base_report"]["forcing_ratios"])
    _report("linear estimates: finite ratios, spread <= 3, <= 10% extent-"
            "doubling sensitivity",
            [all(math.isfinite(r) and r > 0 for r in ratios),
             cks["boundary_estimate_spread"]["value"] <= 3.0,
             cks["forcing_estimate_spread"]["value"] <= 3.0,
             cks["boundary_extent_doubling_sensitivity"]["value"] <= 0.10,
             cks["forcing_extent_doubling_sensitivity"]["value"] <= 0.10])


def test_14_solver(suites):
    cks = _checks(suites["solve"])
    scl = _checks(suites["scaling"])
    _report("solver: contraction <= 0.5, residual 1e-2, div 1e-6, decay, "
            "scaling 1%, uniqueness, large-data error, bounded bootstrap",
            [cks["picard_contraction_ratio"]["value"] <= 0.5,
             cks["navier_stokes_residual"]["value"] <= 1e-2,
             cks["solution_divergence"]["value"] <= 1e-6,
             cks["decay_profile_bounded"]["pass"],
             cks["decay_top_octave_decreasing"]["pass"],
             scl["solution_scaling_velocity"]["value"] <= 0.01,
             scl["solution_scaling_pressure"]["value"] <= 0.01,
             cks["two_initialization_gap"]["value"] <= 1e-6,
             cks["large_data_divergence_raised"]["pass"],
             cks["bootstrap_q4_tail_ratio"]["value"] <= 2.0])


def _tree_digest(root):
    digest = {}
    for path in sorted(Path(root).rglob("*")):
        if path.is_file():
            rel = str(path.relative_to(root))
            digest[rel] = hashlib.sha256(path.read_bytes()).hexdigest()
    return digest


def test_15_reproducibility(artifact_dir, tmp_path):
    first, _ = artifact_dir
    rerun = tmp_path / "rerun"
    rerun.mkdir()
    run_all_suites(rerun)
    da, db = _tree_digest(first), _tree_digest(rerun)
    _report("full report rerun with the same seed is byte-identical",
            [set(da) == set(db),
             all(da[k] == db[k] for k in da)])
