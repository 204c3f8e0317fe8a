"""Verification suite: runs the closed-form homology predictions and the
structural checks for one coefficient algebra across the small shapes.

Expected values are never hard coded per algebra.  Each check instantiates
a symbolic formula at run time: the quotients A_m supply the weight-space
blocks, parity change covers the shifted blocks, and the first cyclic
homology term comes from an oracle (the Connes complex over Q, otherwise
the Steinberg kernel at the stable shape (3,2)).

UCE_THREADS bounds the worker pool.  Results are assembled in a fixed
order, so reports agree across runs and thread counts except for the
elapsed-millisecond fields.
"""

from __future__ import annotations

import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor

from .. import __version__
from ..exactlin import GradedInvariants, direct_sum_invariants
from ..liesuper import ce_h2, total_invariants, uce
from ..matgl import build_sl, supertrace_characterises_sl
from ..steinberg import (build_st, steinberg_h2, steinberg_kernel_invariants,
                         verify_decomposition, verify_identities,
                         verify_presentation)
from ..cocycle import (build_psi, build_st_sharp, check_super_2cocycle,
                       compare_extensions, sharp_over_sl)
from ..superalg import SuperAlgebra, hc1_connes, parity_change, quotient_am
from .parser import algebras_equal, parse_algebra, serialize_algebra
from .schemas import CheckResult, InvariantsModel, Report

SMALL_RANK_SHAPES = ((3, 0), (4, 0), (2, 1), (3, 1), (2, 2))
COCYCLE_SHAPES = ((3, 1), (2, 2))

CHECK_IDS = ("parse-roundtrip", "h2-sl", "h2-st", "h2-st-sharp",
             "presentation", "identities", "decomposition", "cocycle-check",
             "uce-compare", "hc1-kernel", "str-membership")


def resolve_threads(threads: int | None = None) -> int:
    if threads is None:
        raw = os.environ.get("UCE_THREADS", "").strip()
        threads = int(raw) if raw else 1
    return max(1, threads)


class _Memo:
    """Thread-safe build cache; caches raised exceptions as well, so every
    check that needs a failed build reports the same error."""

    def __init__(self):
        # reentrant: builds routinely request other cached builds
        self._lock = threading.RLock()
        self._store = {}

    def get(self, key, fn):
        with self._lock:
            if key not in self._store:
                try:
                    self._store[key] = ("ok", fn())
                except Exception as exc:
                    self._store[key] = ("err", exc)
            tag, val = self._store[key]
        if tag == "err":
            raise val
        return val


class _Ctx:
    def __init__(self, A: SuperAlgebra):
        self.A = A
        self.memo = _Memo()

    def sl(self, m, n):
        return self.memo.get(("sl", m, n), lambda: build_sl(m, n, self.A))

    def st(self, m, n):
        return self.memo.get(("st", m, n), lambda: build_st(m, n, self.A))

    def sharp(self, m, n):
        return self.memo.get(("sharp", m, n),
                             lambda: build_st_sharp(self.st(m, n)))

    def uce_sl(self, m, n):
        return self.memo.get(("uce-sl", m, n), lambda: uce(self.sl(m, n).lie))

    def hc1_oracle(self) -> GradedInvariants:
        def compute():
            if self.A.domain.kind == "Q":
                return hc1_connes(self.A)
            return steinberg_kernel_invariants(3, 2, self.A)
        return self.memo.get(("hc1",), compute)


def expected_st_h2(m: int, n: int, A: SuperAlgebra) -> GradedInvariants:
    """Closed-form second homology of st(m,n,A) for m+n >= 3."""
    shape = (max(m, n), min(m, n))
    if m + n >= 5 or shape == (2, 1):
        return GradedInvariants()
    if shape == (3, 0):
        blocks = [quotient_am(A, 3).invariants] * 6
    elif shape == (4, 0):
        blocks = [quotient_am(A, 2).invariants] * 6
    elif shape == (3, 1):
        blocks = [parity_change(quotient_am(A, 2).invariants)] * 6
    elif shape == (2, 2):
        blocks = [quotient_am(A, 2).invariants] * 4 + [quotient_am(A, 0).invariants] * 2
    else:
        raise ValueError(f"no closed form for shape ({m},{n})")
    return direct_sum_invariants(blocks)


def expected_sl_h2(ctx: _Ctx, m: int, n: int) -> GradedInvariants:
    return direct_sum_invariants([ctx.hc1_oracle(), expected_st_h2(m, n, ctx.A)])


# -- individual checks ------------------------------------------------------
# each returns (expected, computed, passed) with invariants or None


def _chk_parse_roundtrip(ctx, m, n):
    text = serialize_algebra(ctx.A)
    again = parse_algebra(text, label=ctx.A.label)
    ok = algebras_equal(ctx.A, again) and serialize_algebra(again) == text
    return None, None, ok


def _chk_h2_sl(ctx, m, n):
    # computed first: a bad shape then fails with the matrix error, not
    # with a complaint about the closed-form table
    computed = ce_h2(ctx.sl(m, n).lie)
    expected = expected_sl_h2(ctx, m, n)
    return expected, computed, expected == computed


def _chk_h2_st(ctx, m, n):
    computed = steinberg_h2(m, n, ctx.A)
    expected = expected_st_h2(m, n, ctx.A)
    return expected, computed, expected == computed


def _chk_h2_st_sharp(ctx, m, n):
    # the cocycle extension is universal, so its own H2 must vanish
    expected = GradedInvariants()
    computed = ce_h2(ctx.sharp(m, n).total)
    return expected, computed, expected == computed


def _chk_presentation(ctx, m, n):
    return None, None, all(verify_presentation(ctx.st(m, n)).values())


def _chk_identities(ctx, m, n):
    return None, None, all(verify_identities(ctx.st(m, n)).values())


def _chk_decomposition(ctx, m, n):
    return None, None, verify_decomposition(ctx.st(m, n))


def _chk_cocycle(ctx, m, n):
    st = ctx.st(m, n)
    psi = ctx.memo.get(("psi", m, n), lambda: build_psi(st))
    report = check_super_2cocycle(st.lie, psi.values, psi.w_parities, psi.w_moduli)
    return None, None, report.passed


def _chk_uce_compare(ctx, m, n):
    st = ctx.st(m, n)
    over_sl = sharp_over_sl(st, ctx.sharp(m, n))
    u = ctx.uce_sl(m, n)
    verdicts = compare_extensions(over_sl, u)
    return (total_invariants(u.total), total_invariants(over_sl.total),
            verdicts["isomorphic"])


def _chk_hc1_kernel(ctx, m, n):
    expected = ctx.hc1_oracle()
    computed = steinberg_kernel_invariants(m, n, ctx.A)
    return expected, computed, expected == computed


def _chk_str_membership(ctx, m, n):
    return None, None, supertrace_characterises_sl(ctx.sl(m, n))


_SHAPE_CHECKS = [
    ("h2-sl", None, _chk_h2_sl),
    ("h2-st", None, _chk_h2_st),
    ("h2-st-sharp", COCYCLE_SHAPES, _chk_h2_st_sharp),
    ("presentation", None, _chk_presentation),
    ("identities", None, _chk_identities),
    ("decomposition", None, _chk_decomposition),
    ("cocycle-check", COCYCLE_SHAPES, _chk_cocycle),
    ("uce-compare", COCYCLE_SHAPES, _chk_uce_compare),
    ("hc1-kernel", None, _chk_hc1_kernel),
    ("str-membership", None, _chk_str_membership),
]

_CHECK_FN = {"parse-roundtrip": _chk_parse_roundtrip,
             **{cid: fn for cid, _, fn in _SHAPE_CHECKS}}


def _task_list(shapes, checks):
    tasks = []
    if "parse-roundtrip" in checks:
        tasks.append(("parse-roundtrip", 0, 0))
    for m, n in shapes:
        for cid, only, _ in _SHAPE_CHECKS:
            if cid in checks and (only is None or (m, n) in only):
                tasks.append((cid, m, n))
    return tasks


def _run_one(ctx, cid, m, n) -> CheckResult:
    t0 = time.perf_counter()
    expected = computed = None
    error = None
    try:
        expected, computed, passed = _CHECK_FN[cid](ctx, m, n)
    except Exception as exc:
        passed = False
        error = f"{type(exc).__name__}: {exc}"
    millis = int((time.perf_counter() - t0) * 1000)
    return CheckResult(
        check=cid, m=m, n=n,
        expected=None if expected is None else InvariantsModel.from_invariants(expected),
        computed=None if computed is None else InvariantsModel.from_invariants(computed),
        pass_=passed, millis=millis, error=error)


def run_suite(A: SuperAlgebra, shapes=None, checks=None,
              threads: int | None = None) -> Report:
    """Run the named checks over the given shapes and assemble a report.

    Defaults cover the full small-rank battery.  The result order never
    depends on the worker count.
    """
    shapes = tuple(shapes) if shapes is not None else SMALL_RANK_SHAPES
    checks = tuple(checks) if checks is not None else CHECK_IDS
    unknown = [c for c in checks if c not in _CHECK_FN]
    if unknown:
        raise ValueError(f"unknown checks: {', '.join(unknown)}")
    ctx = _Ctx(A)
    tasks = _task_list(shapes, checks)
    workers = resolve_threads(threads)
    if workers == 1 or len(tasks) <= 1:
        results = [_run_one(ctx, *t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda t: _run_one(ctx, *t), tasks))
    return Report(version=__version__, domain=str(A.domain),
                  algebra=A.label or str(A), results=results)


def run_single(A: SuperAlgebra, check: str, m: int, n: int,
               threads: int | None = None) -> Report:
    """One check at one shape, in the same report format."""
    if check not in _CHECK_FN:
        raise ValueError(f"unknown check {check!r}")
    ctx = _Ctx(A)
    return Report(version=__version__, domain=str(A.domain),
                  algebra=A.label or str(A),
                  results=[_run_one(ctx, check, m, n)])
