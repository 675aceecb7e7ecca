"""Binary reconstruction from four lattice directions."""

import json

from . import _core
from ._core import (
    Error,
    back_project,
    bench_csv,
    bin_counts,
    cgls,
    check_sufficient_window,
    construct_set_odd_n,
    dense_min_norm,
    enumerate_binary_solutions,
    expand_fs,
    fixture_phantom,
    ghost_basis,
    ghost_dimension,
    load_image,
    normalize_direction,
    project,
    random_phantom,
    save_image,
    shape_phantom,
)

__all__ = [
    "Error",
    "back_project",
    "bench_csv",
    "bin_counts",
    "cgls",
    "check_binary_uniqueness",
    "check_sufficient_window",
    "construct_set_odd_n",
    "dense_min_norm",
    "enumerate_binary_solutions",
    "expand_fs",
    "fixture_phantom",
    "ghost_basis",
    "ghost_dimension",
    "load_image",
    "normalize_direction",
    "project",
    "random_phantom",
    "reconstruct",
    "save_image",
    "shape_phantom",
]


def check_binary_uniqueness(dirs, grid):
    """Uniqueness report for a direction set on an (M, N) grid, as a dict."""
    return json.loads(_core.check_binary_uniqueness_json(dirs, grid))


def reconstruct(dirs, grid, p, kappa, force=False, fast_path=True, tol=None):
    """Run BRA. Returns a dict with binary, xk, corrected, alpha, kappa_used and diagnostics."""
    out = _core.reconstruct(dirs, grid, p, kappa, force, fast_path, tol)
    out["diagnostics"] = json.loads(out.pop("diagnostics_json"))
    return out
