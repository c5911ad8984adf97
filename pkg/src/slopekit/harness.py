"""Seeded randomized campaigns for the divisibility, congruence, slope and
layer properties.

Setting: ``L = Z^t`` with basis ``e_i``, ``K`` spanned by ``p^{a_i} e_i``
and ``xi(K) in p^n L``. In that basis column ``j`` of the matrix of ``xi``
is divisible by ``p^{b_j}``. A second operator ``u'`` with
``L'/K' = L/K`` satisfies ``u'_{jk} = u_{jk} mod p^{a_j}`` and the same
column divisibility.

Every trial is a pure function of ``(config, trial index)``; failures are
collected, never raised.
"""

from __future__ import annotations

import hashlib
import json
import random
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Iterable, Optional

from .bounds import B_function, T_function, critical_slope_c
from .linalg import IntegerMatrix, QuotientShape, char_poly, snf_p_exponents
from .newton import newton_polygon, slope_multiplicities
from .rational import fmt_q
from .valuation import INF, Prime, vp

KINDS = ("divisibility", "congruence", "slopes", "layers")


def derive_seed(seed: int, *keys) -> int:
    """Stable 64-bit seed for a sub-stream (independent of ``PYTHONHASHSEED``)."""
    h = hashlib.blake2b(repr((seed,) + keys).encode(), digest_size=8)
    return int.from_bytes(h.digest(), "big")


@dataclass(frozen=True)
class TrialConfig:
    shape: QuotientShape
    p: int
    seed: int
    entry_bound: Optional[int] = None
    trials: int = 1
    t_prime: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "p", Prime(self.p))
        if self.entry_bound is None:
            object.__setattr__(self, "entry_bound", self.shape.n + 2)
        if self.entry_bound < self.shape.n + 1:
            raise ValueError(f"entry_bound must be >= n + 1 = {self.shape.n + 1}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.t_prime is not None:
            _check_t_prime(self.shape, self.t_prime)

    def echo(self) -> dict:
        return {
            "n": self.shape.n,
            "shape": list(self.shape.a),
            "t": self.shape.t,
            "p": int(self.p),
            "seed": self.seed,
            "entry_bound": self.entry_bound,
            "trials": self.trials,
            "t_prime": self.t_prime,
        }


def _check_t_prime(shape: QuotientShape, t_prime: int) -> None:
    if not 1 <= t_prime <= shape.t:
        raise ValueError(f"t_prime={t_prime} must lie in 1..t={shape.t}")
    if any(shape.a[t_prime:]):
        raise ValueError(
            f"cannot drop to rank {t_prime}: dropped summands must have a_i = 0, got {shape.a[t_prime:]}"
        )


@dataclass
class Failure:
    trial: int
    seed: int
    index: object
    observed: object
    required: object
    detail: str = ""

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("index", "observed", "required"):
            v = d[key]
            if isinstance(v, Fraction) or v == INF:
                d[key] = fmt_q(v)
        return d


@dataclass
class VerificationReport:
    kind: str
    config: dict
    trials_run: int = 0
    failures: list = field(default_factory=list)
    slope_table: list = field(default_factory=list)
    totals: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def body(self) -> dict:
        totals = {"trials": self.trials_run, "failures": len(self.failures)}
        totals.update(self.totals)
        fails = sorted((f.to_dict() for f in self.failures), key=lambda f: (f["trial"], str(f["index"])))
        return {
            "kind": self.kind,
            "config": self.config,
            "totals": totals,
            "failures": fails,
            "tables": self.slope_table,
        }

    def body_json(self) -> str:
        return json.dumps(self.body(), indent=1, sort_keys=True)

    def dumps(self) -> str:
        """One header line (timestamp, elapsed) followed by the deterministic body."""
        header = {
            "generated": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "elapsed_s": round(self.elapsed, 3),
        }
        return json.dumps(header) + "\n" + self.body_json() + "\n"


def load_report_body(text: str) -> dict:
    _, _, body = text.partition("\n")
    return json.loads(body)


def gen_matrix(shape: QuotientShape, p: int, seed: int, entry_bound: Optional[int] = None) -> IntegerMatrix:
    """Random ``u`` with ``p^{b_j} | u_{ij}``: entries ``p^{b_j} * r``, ``r`` in ``[0, p^E)``."""
    p = Prime(p)
    E = shape.n + 2 if entry_bound is None else entry_bound
    rng = random.Random(seed)
    top = p**E
    scales = [p**b for b in shape.b]
    t = shape.t
    return IntegerMatrix(tuple(tuple(scales[j] * rng.randrange(top) for j in range(t)) for _ in range(t)))


def perturb_matrix(
    u: IntegerMatrix,
    shape: QuotientShape,
    p: int,
    seed: Optional[int],
    t_prime: Optional[int] = None,
    entry_bound: Optional[int] = None,
) -> IntegerMatrix:
    """A second operator with the same quotient data.

    Entry ``(j, k)`` moves by ``p^{max(a_j, b_k)} * r``; with ``t_prime < t``
    only the leading ``t_prime x t_prime`` block is kept. ``seed=None`` gives
    the zero perturbation.
    """
    p = Prime(p)
    t = shape.t
    if u.t != t:
        raise ValueError(f"matrix has rank {u.t}, shape has rank {t}")
    t_prime = t if t_prime is None else t_prime
    _check_t_prime(shape, t_prime)
    if seed is None:
        return u.principal(t_prime)
    E = shape.n + 2 if entry_bound is None else entry_bound
    rng = random.Random(seed)
    top = p**E
    a, b = shape.a, shape.b
    rows = []
    for j in range(t_prime):
        rows.append(
            tuple(u[j, k] + p ** max(a[j], b[k]) * rng.randrange(top) for k in range(t_prime))
        )
    return IntegerMatrix(tuple(rows))


def _padded(coeffs: list[int], t: int) -> list[int]:
    return coeffs + [0] * (t + 1 - len(coeffs))


def divisibility_failures(coeffs, shape: QuotientShape, p: int, trial=0, seed=0) -> list[Failure]:
    B = B_function(shape)
    out = []
    for s in range(1, shape.t + 1):
        need = B(s)
        v = vp(coeffs[s], p)
        if v < need:
            out.append(Failure(trial, seed, s, v, need, "vp(d_s) < B(s)"))
    return out


def congruence_failures(coeffs, coeffs_prime, shape: QuotientShape, p: int, trial=0, seed=0) -> list[Failure]:
    T = T_function(shape)
    out = []
    for s in range(1, shape.t + 1):
        need = T(s)
        v = vp(coeffs[s] - coeffs_prime[s], p)
        if v < need:
            out.append(Failure(trial, seed, s, v, need, "vp(d_s - d'_s) < T(s)"))
    return out


def slope_comparison(coeffs, coeffs_prime, shape: QuotientShape, p: int, trial=0, seed=0):
    """Compare slope multiplicities below ``c``; returns ``(failures, table_row, diverged_above_c)``.

    The table row splits slopes into ``below_c`` (must match) and
    ``at_or_above_c`` (free to differ), each mapping a slope to ``[mult_u, mult_u']``.
    """
    c = critical_slope_c(shape)
    P1, P2 = newton_polygon(coeffs, p), newton_polygon(coeffs_prime, p)
    m1, m2 = slope_multiplicities(P1), slope_multiplicities(P2)
    failures = []
    below, above = {}, {}
    for alpha in sorted(set(m1) | set(m2)):
        pair = [m1.get(alpha, 0), m2.get(alpha, 0)]
        (below if alpha < c else above)[fmt_q(alpha)] = pair
        if alpha < c and pair[0] != pair[1]:
            detail = f"u vertices {list(P1.vertices)}; u' vertices {list(P2.vertices)}"
            failures.append(Failure(trial, seed, alpha, pair[1], pair[0], detail))
    row = {
        "trial": trial,
        "c": fmt_q(c),
        "below_c": below,
        "at_or_above_c": above,
        "kernel": [P1.kernel_multiplicity, P2.kernel_multiplicity],
    }
    diverged = any(x != y for x, y in above.values())
    return failures, row, diverged


def verify_divisibility(u: IntegerMatrix, shape: QuotientShape, p: int) -> VerificationReport:
    rep = VerificationReport("divisibility", {"shape": list(shape.a), "n": shape.n, "p": int(p)}, trials_run=1)
    rep.failures = divisibility_failures(char_poly(u), shape, p)
    return rep


def verify_coeff_congruence(u: IntegerMatrix, u_prime: IntegerMatrix, shape: QuotientShape, p: int) -> VerificationReport:
    rep = VerificationReport("congruence", {"shape": list(shape.a), "n": shape.n, "p": int(p)}, trials_run=1)
    d1 = char_poly(u)
    d2 = _padded(char_poly(u_prime), shape.t)
    rep.failures = congruence_failures(d1, d2, shape, p)
    return rep


def verify_slope_match(u: IntegerMatrix, u_prime: IntegerMatrix, shape: QuotientShape, p: int) -> VerificationReport:
    rep = VerificationReport("slopes", {"shape": list(shape.a), "n": shape.n, "p": int(p)}, trials_run=1)
    d1 = char_poly(u)
    d2 = _padded(char_poly(u_prime), shape.t)
    fails, row, diverged = slope_comparison(d1, d2, shape, p)
    rep.failures = fails
    rep.slope_table = [row]
    rep.totals = {"diverged_at_or_above_c": int(diverged)}
    return rep


def layer_sizes(shape: QuotientShape) -> list[int]:
    """``log_p |p^mu P / p^{mu+1} P|`` for ``mu = 0..n-1``."""
    return [sum(1 for a in shape.a if a > mu) for mu in range(shape.n)]


def verify_layer_monotonic(parent: QuotientShape, sub: QuotientShape) -> bool:
    lp, ls = layer_sizes(parent), layer_sizes(sub)
    ls = ls + [0] * (len(lp) - len(ls))
    if any(ls[len(lp):]):
        return False
    return all(x <= y for x, y in zip(ls, lp))


def _log_order(gens: list[list[int]], exps: tuple[int, ...], p: int) -> int:
    """``log_p`` of the order of the subgroup of ``(+) Z/p^{e_i}`` spanned by columns ``gens``."""
    t = len(exps)
    rows = [list(gens[i]) + [p**exps[j] if j == i else 0 for j in range(t)] for i in range(t)]
    return sum(exps) - sum(snf_p_exponents(rows, p))


def subgroup_shape(gens: list[list[int]], exps: tuple[int, ...], p: int) -> tuple[int, ...]:
    """Shape of the subgroup spanned by the columns of ``gens``.

    Orders of ``p^mu H`` come from Smith forms; the number of cyclic factors
    of order above ``p^mu`` is ``log|p^mu H| - log|p^{mu+1} H|``.
    """
    n = max(exps, default=0)
    orders = []
    for mu in range(n + 1):
        scaled = [[p**mu * x for x in row] for row in gens]
        orders.append(_log_order(scaled, exps, p))
    layers = [orders[mu] - orders[mu + 1] for mu in range(n)]
    size = layers[0] if layers else 0
    return tuple(sum(1 for ell in layers if ell >= i) for i in range(1, size + 1))


def quotient_of(exps: tuple[int, ...], rels: list[list[int]], p: int) -> tuple[int, ...]:
    """Shape of ``((+) Z/p^{e_i}) / <columns of rels>``."""
    t = len(exps)
    if t == 0:
        return ()
    rows = [list(rels[i]) + [p**exps[j] if j == i else 0 for j in range(t)] for i in range(t)]
    return tuple(e for e in snf_p_exponents(rows, p) if e)


def _random_columns(rng: random.Random, exps, count: int, p: int) -> list[list[int]]:
    return [[rng.randrange(p**e) if e else 0 for _ in range(count)] for e in exps]


def random_subquotient(
    shape: QuotientShape, p: int, seed: int, subgroup: str = "random", quotient: str = "random"
) -> QuotientShape:
    """Shape of a random subquotient ``H / H'`` of ``P = (+) Z/p^{a_i}``.

    ``subgroup`` is ``"random"``, ``"trivial"`` or ``"full"``; ``quotient`` is
    ``"random"`` or ``"trivial"`` (divide by the zero subgroup).
    """
    p = Prime(p)
    rng = random.Random(seed)
    exps = shape.a
    t = shape.t
    if subgroup == "trivial":
        h = ()
    elif subgroup == "full":
        h = tuple(e for e in exps if e)
    elif subgroup == "random":
        r1 = rng.randint(0, t + 1)
        h = subgroup_shape(_random_columns(rng, exps, r1, p), exps, p) if r1 else ()
    else:
        raise ValueError(f"unknown subgroup mode {subgroup!r}")
    if quotient == "trivial" or not h:
        q = h
    elif quotient == "random":
        r2 = rng.randint(0, len(h) + 1)
        q = quotient_of(h, _random_columns(rng, h, r2, p), p)
    else:
        raise ValueError(f"unknown quotient mode {quotient!r}")
    q = tuple(sorted(q, reverse=True))
    return QuotientShape(shape.n, q + (0,) * (t - len(q)))


def _trial_seeds(config: TrialConfig, i: int) -> tuple[int, int]:
    return derive_seed(config.seed, "u", i), derive_seed(config.seed, "u'", i)


def _finish(rep: VerificationReport, start: float) -> VerificationReport:
    rep.elapsed = time.perf_counter() - start
    return rep


def run_divisibility(config: TrialConfig) -> VerificationReport:
    start = time.perf_counter()
    rep = VerificationReport("divisibility", config.echo())
    for i in range(config.trials):
        s, _ = _trial_seeds(config, i)
        u = gen_matrix(config.shape, config.p, s, config.entry_bound)
        rep.failures += divisibility_failures(char_poly(u), config.shape, config.p, i, s)
        rep.trials_run += 1
    return _finish(rep, start)


def run_paired(config: TrialConfig) -> tuple[VerificationReport, VerificationReport]:
    """Congruence and slope campaigns over the same ``(u, u')`` pairs."""
    start = time.perf_counter()
    cong = VerificationReport("congruence", config.echo())
    slopes = VerificationReport("slopes", config.echo())
    diverged = 0
    shape, p = config.shape, config.p
    for i in range(config.trials):
        s, s2 = _trial_seeds(config, i)
        u = gen_matrix(shape, p, s, config.entry_bound)
        u2 = perturb_matrix(u, shape, p, s2, config.t_prime, config.entry_bound)
        d1 = char_poly(u)
        d2 = _padded(char_poly(u2), shape.t)
        cong.failures += congruence_failures(d1, d2, shape, p, i, s)
        fails, row, div = slope_comparison(d1, d2, shape, p, i, s)
        slopes.failures += fails
        slopes.slope_table.append(row)
        diverged += div
        cong.trials_run += 1
        slopes.trials_run += 1
    slopes.totals = {"diverged_at_or_above_c": diverged}
    _finish(cong, start)
    slopes.elapsed = cong.elapsed
    return cong, slopes


def run_layers(config: TrialConfig) -> VerificationReport:
    start = time.perf_counter()
    rep = VerificationReport("layers", config.echo())
    parent = config.shape
    lp = layer_sizes(parent)
    for i in range(config.trials):
        s = derive_seed(config.seed, "subquotient", i)
        sub = random_subquotient(parent, config.p, s)
        if not verify_layer_monotonic(parent, sub):
            ls = layer_sizes(sub)
            for mu, (x, y) in enumerate(zip(ls, lp)):
                if x > y:
                    rep.failures.append(Failure(i, s, mu, x, y, f"subquotient {list(sub.a)}"))
        rep.trials_run += 1
    return _finish(rep, start)


def run_campaign(kind: str, config: TrialConfig) -> VerificationReport:
    if kind == "divisibility":
        return run_divisibility(config)
    if kind == "congruence":
        return run_paired(config)[0]
    if kind == "slopes":
        return run_paired(config)[1]
    if kind == "layers":
        return run_layers(config)
    raise ValueError(f"unknown campaign kind {kind!r}; expected one of {KINDS}")


def merge_reports(kind: str, reports: Iterable[VerificationReport], config: dict) -> VerificationReport:
    out = VerificationReport(kind, config)
    counters: dict = {}
    for r in reports:
        out.trials_run += r.trials_run
        out.failures += r.failures
        out.elapsed += r.elapsed
        for k, v in r.totals.items():
            counters[k] = counters.get(k, 0) + v
    out.totals = counters
    return out


def tightness_witness(shape: QuotientShape, p: int) -> tuple[int, Fraction]:
    """``(vp(d_t), B(t))`` for ``u = diag(p^{b_i})``; the two agree."""
    p = Prime(p)
    u = IntegerMatrix.diag([p**b for b in shape.b])
    return vp(char_poly(u)[-1], p), B_function(shape)(shape.t)


def engineered_divergence(p: int):
    """A legal pair whose slope counts differ at a slope ``>= c``.

    Shape ``n = 1, a = (1,)`` has ``c = 1/2``; ``u = (p)`` and
    ``u' = (p^2) = u + p (p - 1)`` have the same quotient data but slopes
    1 and 2.
    """
    p = Prime(p)
    shape = QuotientShape(1, (1,))
    return IntegerMatrix(((p,),)), IntegerMatrix(((p * p,),)), shape
