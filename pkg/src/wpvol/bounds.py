"""Certified volume bounds assembled from exact intersection numbers.

Three bound rules are implemented, named after the theorem labels used
throughout this project's documentation and CLI:

* ``thm1`` (added-point step): for stable (g, n) other than (0,4), (1,1),

      V(g, n+1) >= (3g-2+n)(7g-7+3n)/2 * V(g, n) + 1/(24^g g!),

  which rearranged also yields a strict upper bound for V(g, n) in terms
  of V(g, n+1).
* ``thm3`` (effective-divisor bound): a divisor p*lambda - sum q_j delta_j
  with every mu_j = (12 q_j - p)/p > 0 gives, for g > 1,

      V(g, 0) > mu_0/2 V(g-1,2) + mu_1/48 V(g-1,1)
                + sum_{j=2}^{floor(g/2)} mu_j V(j,1) V(g-j,1)
                - correction at the middle index for even g.

  Two middle-correction modes exist: "as-printed" subtracts
  mu_{g/2} (V(g/2,1))^2 and "thm2-consistent" subtracts half of that,
  matching the all-ones specialization below.  For even g >= 4 the
  subtracted square rides on the same V(g/2,1) as the j = g/2 summand, so
  the net coefficient is >= 0 in both modes and a lower bound on V(g/2,1)
  stays sound.
* presets of ``thm3``: the all-ones divisor with p = 56/5 (every
  mu_j = 1/14; the ``thm2`` rule) and the canonical-class divisor
  p = 13, q = (2, 3, 2, ...) valid for g >= 23 (the ``kodaira`` rule).

Every bound is returned as a BoundCertificate carrying a replayable trace;
``replay_certificate`` recomputes the value from the recorded inputs alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping

from .combinat import partitions
from .errors import DomainError, VerificationError
from .intersect import IntersectionEngine, IntersectionKey, ModuliPoint, default_engine

ZERO = Fraction(0)
ONE = Fraction(1)

EXCLUDED_PAIRS = frozenset({(0, 4), (1, 1)})
MODES = ("as-printed", "thm2-consistent")
DEFAULT_MODE = "thm2-consistent"

KODAIRA_MIN_GENUS = 23

# provenance labels and which of them may feed added/subtracted terms
_LOWERISH = ("exact", "lower", "convention")
_UPPERISH = ("exact", "upper", "convention")


def psi_top_constant(g: int) -> Fraction:
    """The additive constant 1/(24^g g!) of the added-point step."""
    return Fraction(1, 24**g * factorial(g))


def step_coefficient(g: int, n: int) -> Fraction:
    """The multiplier (3g-2+n)(7g-7+3n)/2 of the added-point step."""
    return Fraction((3 * g - 2 + n) * (7 * g - 7 + 3 * n), 2)


# --------------------------------------------------------------------- types


@dataclass(frozen=True)
class DivisorSpec:
    """Coefficients (p, q_0..q_k) of an effective divisor p*lambda - sum q_j delta_j."""

    p: Fraction
    q: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", Fraction(self.p))
        object.__setattr__(self, "q", tuple(Fraction(x) for x in self.q))
        if self.p <= 0:
            raise DomainError(f"divisor coefficient p must be positive, got {self.p}")
        if not self.q:
            raise DomainError("divisor needs at least the q_0 boundary coefficient")
        for j, qj in enumerate(self.q):
            if qj <= 0:
                raise DomainError(f"divisor coefficient q_{j} must be positive, got {qj}")


@dataclass(frozen=True)
class MuVector:
    """The derived weights mu_j = (12 q_j - p)/p, all required positive."""

    mu: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "mu", tuple(Fraction(x) for x in self.mu))
        for j, m in enumerate(self.mu):
            if m <= 0:
                raise DomainError(f"mu_{j} = {m} <= 0 violates the divisor hypothesis")

    def __len__(self) -> int:
        return len(self.mu)


@dataclass(frozen=True)
class KappaForm:
    """The same divisor rewritten as alpha*kappa_1 - sum beta_j delta_j."""

    alpha: Fraction
    beta: tuple[Fraction, ...]


def divisor_mu(spec: DivisorSpec) -> MuVector:
    """Derive the mu weights of a divisor; fails naming the first bad index."""
    mus = []
    for j, qj in enumerate(spec.q):
        m = (12 * qj - spec.p) / spec.p
        if m <= 0:
            raise DomainError(
                f"divisor hypothesis violated at index {j}: mu_{j} = (12*q_{j} - p)/p = {m} <= 0"
            )
        mus.append(m)
    return MuVector(tuple(mus))


def kappa_form(spec: DivisorSpec) -> KappaForm:
    """Rewrite the divisor over kappa_1 = 12*lambda - sum delta_j."""
    alpha = spec.p / 12
    beta = []
    for j, qj in enumerate(spec.q):
        bj = qj - spec.p / 12
        if bj <= 0:
            raise DomainError(
                f"divisor hypothesis violated at index {j}: beta_{j} = q_{j} - p/12 = {bj} <= 0"
            )
        beta.append(bj)
    return KappaForm(alpha, tuple(beta))


@dataclass(frozen=True)
class TraceInput:
    """One recorded input of a bound derivation."""

    name: str
    value: Fraction
    provenance: str  # exact | lower | upper | convention
    role: str  # added | subtracted | netted

    def __str__(self) -> str:
        return f"{self.name} = {self.value} [{self.provenance}, {self.role}]"


@dataclass(frozen=True)
class BoundCertificate:
    """A bound value together with the rule, inputs, and notes that derived it.

    Provenance discipline is enforced at construction: in a lower-bound
    certificate every added input must itself be exact or a lower bound and
    every subtracted input exact or an upper bound (dually for upper-bound
    certificates).  The "netted" role marks an input whose added and
    subtracted occurrences cancel to a non-negative net coefficient.
    """

    target: ModuliPoint
    kind: str  # lower | upper
    value: Fraction
    strict: bool
    rule: str  # thm1_step | thm1_upper | thm3
    params: tuple[tuple[str, object], ...]
    inputs: tuple[TraceInput, ...]
    notes: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in ("lower", "upper"):
            raise DomainError(f"certificate kind must be lower or upper, got {self.kind!r}")
        added_ok, subtracted_ok = (
            (_LOWERISH, _UPPERISH) if self.kind == "lower" else (_UPPERISH, _LOWERISH)
        )
        for ti in self.inputs:
            allowed = {"added": added_ok, "subtracted": subtracted_ok, "netted": added_ok}.get(ti.role)
            if allowed is None:
                raise DomainError(f"unknown trace role {ti.role!r} for input {ti.name}")
            if ti.provenance not in allowed:
                raise DomainError(
                    f"provenance mismatch in {self.kind}-bound trace: {ti.role} input "
                    f"{ti.name} has provenance {ti.provenance!r}, needs one of {allowed}"
                )

    def param(self, name: str):
        for key, val in self.params:
            if key == name:
                return val
        raise KeyError(name)

    def replay(self) -> Fraction:
        return replay_certificate(self)


# ------------------------------------------------------------- thm1 rules


def _check_step_domain(g: int, n: int, override_exclusions: bool) -> list[str]:
    ModuliPoint(g, n).require_stable()
    notes: list[str] = []
    if (g, n) in EXCLUDED_PAIRS:
        if not override_exclusions:
            raise DomainError(
                f"the added-point bound excludes (g,n) = ({g},{n}); "
                "set override_exclusions to experiment anyway"
            )
        notes.append(f"excluded pair ({g},{n}) overridden; the inequality is not asserted there")
    return notes


def thm1_step(
    g: int,
    n: int,
    v: Fraction,
    *,
    provenance: str = "exact",
    override_exclusions: bool = False,
) -> BoundCertificate:
    """Lower bound for V(g, n+1) from an exact value or lower bound for V(g, n)."""
    notes = _check_step_domain(g, n, override_exclusions)
    if provenance not in _LOWERISH:
        raise DomainError(
            f"provenance mismatch: the added-point step needs an exact value or lower "
            f"bound for V({g},{n}), got {provenance!r}"
        )
    v = Fraction(v)
    value = step_coefficient(g, n) * v + psi_top_constant(g)
    return BoundCertificate(
        target=ModuliPoint(g, n + 1),
        kind="lower",
        value=value,
        strict=False,
        rule="thm1_step",
        params=(("g", g), ("n", n)),
        inputs=(TraceInput(f"V({g},{n})", v, provenance, "added"),),
        notes=tuple(notes),
    )


def thm1_upper_prev(
    g: int,
    n: int,
    v_next: Fraction,
    *,
    provenance: str = "exact",
    override_exclusions: bool = False,
) -> BoundCertificate:
    """Strict upper bound for V(g, n) from an exact value or upper bound for V(g, n+1)."""
    notes = _check_step_domain(g, n, override_exclusions)
    denom = (3 * g - 2 + n) * (7 * g - 7 + 3 * n)
    if denom <= 0:
        raise DomainError(
            f"degenerate coefficient (3g-2+n)(7g-7+3n) = {denom} at (g,n)=({g},{n})"
        )
    if provenance not in _UPPERISH:
        raise DomainError(
            f"provenance mismatch: the rearranged step needs an exact value or upper "
            f"bound for V({g},{n + 1}), got {provenance!r}"
        )
    v_next = Fraction(v_next)
    value = 2 * (v_next - psi_top_constant(g)) / denom
    loose = 2 * v_next / denom
    return BoundCertificate(
        target=ModuliPoint(g, n),
        kind="upper",
        value=value,
        strict=True,
        rule="thm1_upper",
        params=(("g", g), ("n", n), ("unshifted_form", loose)),
        inputs=(TraceInput(f"V({g},{n + 1})", v_next, provenance, "added"),),
        notes=tuple(notes),
    )


# ------------------------------------------------------------- volume table


@dataclass
class TableCell:
    """Exact value and best certified bounds for one (g, n)."""

    exact: Fraction | None = None
    lower: BoundCertificate | None = None
    upper: BoundCertificate | None = None
    note: str | None = None


class VolumeTable:
    """(g, n)-indexed store of exact volumes and certified bounds.

    Insertions enforce the soundness invariants lower <= exact <= upper, and
    the best (largest lower / smallest upper) certificate is kept per cell.
    The conventional entry V(0,3) = 0 is always present.
    """

    def __init__(self) -> None:
        self._cells: dict[tuple[int, int], TableCell] = {}
        self.gaps: list[tuple[int, int, str]] = []
        self.set_exact(0, 3, ZERO, note="convention")

    def __contains__(self, point: tuple[int, int]) -> bool:
        return point in self._cells

    def points(self) -> list[tuple[int, int]]:
        return sorted(self._cells)

    def cell(self, g: int, n: int) -> TableCell | None:
        return self._cells.get((g, n))

    def _cell(self, g: int, n: int) -> TableCell:
        return self._cells.setdefault((g, n), TableCell())

    def set_exact(self, g: int, n: int, value: Fraction, note: str | None = None) -> None:
        cell = self._cell(g, n)
        value = Fraction(value)
        if cell.lower is not None and cell.lower.value > value:
            raise VerificationError(
                f"table invariant broken at ({g},{n}): lower bound {cell.lower.value} "
                f"exceeds exact value {value}"
            )
        if cell.upper is not None and cell.upper.value < value:
            raise VerificationError(
                f"table invariant broken at ({g},{n}): upper bound {cell.upper.value} "
                f"is below exact value {value}"
            )
        cell.exact = value
        cell.note = note

    def add_lower(self, cert: BoundCertificate) -> None:
        if cert.kind != "lower":
            raise DomainError(f"expected a lower-bound certificate, got kind {cert.kind!r}")
        g, n = cert.target.g, cert.target.n
        cell = self._cell(g, n)
        if cell.exact is not None and cert.value > cell.exact:
            raise VerificationError(
                f"table invariant broken at ({g},{n}): lower bound {cert.value} "
                f"exceeds exact value {cell.exact}"
            )
        if cell.lower is None or cert.value > cell.lower.value:
            cell.lower = cert

    def add_upper(self, cert: BoundCertificate) -> None:
        if cert.kind != "upper":
            raise DomainError(f"expected an upper-bound certificate, got kind {cert.kind!r}")
        g, n = cert.target.g, cert.target.n
        cell = self._cell(g, n)
        if cell.exact is not None and cert.value < cell.exact:
            raise VerificationError(
                f"table invariant broken at ({g},{n}): upper bound {cert.value} "
                f"is below exact value {cell.exact}"
            )
        if cell.upper is None or cert.value < cell.upper.value:
            cell.upper = cert

    def exact(self, g: int, n: int) -> Fraction | None:
        cell = self._cells.get((g, n))
        return cell.exact if cell else None

    def lower_input(self, g: int, n: int) -> tuple[Fraction, str] | None:
        """Best value usable where an exact-or-lower input is required."""
        cell = self._cells.get((g, n))
        if cell is None:
            return None
        if cell.exact is not None:
            return cell.exact, ("convention" if cell.note == "convention" else "exact")
        if cell.lower is not None:
            return cell.lower.value, "lower"
        return None

    def upper_input(self, g: int, n: int) -> tuple[Fraction, str] | None:
        """Best value usable where an exact-or-upper input is required."""
        cell = self._cells.get((g, n))
        if cell is None:
            return None
        if cell.exact is not None:
            return cell.exact, ("convention" if cell.note == "convention" else "exact")
        if cell.upper is not None:
            return cell.upper.value, "upper"
        return None


# ------------------------------------------------------------- thm3 family


def _thm3_value(
    g: int, mu: tuple[Fraction, ...], mode: str, val: Mapping[str, Fraction]
) -> Fraction:
    """The divisor-bound formula over a name -> value mapping (shared with replay)."""
    half = g // 2
    total = mu[0] / 2 * val[f"V({g - 1},2)"] + mu[1] / 48 * val[f"V({g - 1},1)"]
    for j in range(2, half + 1):
        total += mu[j] * val[f"V({j},1)"] * val[f"V({g - j},1)"]
    if g % 2 == 0:
        corr = mu[half] if mode == "as-printed" else mu[half] / 2
        total -= corr * val[f"V({half},1)"] ** 2
    return total


def thm3_bound(
    g: int,
    mu: MuVector,
    table: VolumeTable,
    mode: str = DEFAULT_MODE,
    *,
    preset: str | None = None,
    extra_notes: Iterable[str] = (),
) -> BoundCertificate:
    """Lower bound for V(g, 0) from the divisor weights ``mu`` and a volume table."""
    if g <= 1:
        raise DomainError(f"the effective-divisor bound requires g > 1, got g = {g}")
    if mode not in MODES:
        raise DomainError(f"unknown middle-correction mode {mode!r}; pick one of {MODES}")
    half = g // 2
    if len(mu) != half + 1:
        raise DomainError(
            f"mu vector must have floor(g/2)+1 = {half + 1} entries for genus {g}, got {len(mu)}"
        )

    notes = list(extra_notes)
    inputs: list[TraceInput] = []
    values: dict[str, Fraction] = {}

    def fetch_added(gg: int, nn: int, role: str = "added") -> None:
        name = f"V({gg},{nn})"
        if name in values:
            return
        got = table.lower_input(gg, nn)
        if got is None:
            raise DomainError(f"missing table entry: need an exact value or lower bound for {name}")
        v, prov = got
        values[name] = v
        inputs.append(TraceInput(name, v, prov, role))

    fetch_added(g - 1, 2)
    fetch_added(g - 1, 1)
    for j in range(2, half + 1):
        role = "netted" if (g % 2 == 0 and j == half) else "added"
        fetch_added(j, 1, role)
        fetch_added(g - j, 1)

    if g == 2:
        # The middle index coincides with the linear delta_1 term here, so the
        # squared correction is a genuine standalone subtraction.
        name = "V(1,1)"
        got = table.upper_input(1, 1)
        if got is None:
            raise DomainError(
                "missing table entry: need an exact value or upper bound for V(1,1) "
                "(subtracted middle correction at g = 2)"
            )
        v, prov = got
        values[name] = v
        inputs.append(TraceInput(name, v, prov, "subtracted"))
        notes.append("g=2: middle index 1 carries both the linear term and the squared correction")
    elif g % 2 == 0:
        middle = next(ti for ti in inputs if ti.name == f"V({half},1)")
        if middle.provenance == "lower":
            notes.append(
                f"middle term netted: coefficient mu_{half}"
                f"{'' if mode == 'as-printed' else '/2'} net of the correction is >= 0, "
                f"so a lower bound on V({half},1) keeps the bound sound"
            )

    value = _thm3_value(g, mu.mu, mode, values)
    return BoundCertificate(
        target=ModuliPoint(g, 0),
        kind="lower",
        value=value,
        strict=True,
        rule="thm3",
        params=(("g", g), ("mode", mode), ("mu", mu.mu), ("preset", preset)),
        inputs=tuple(inputs),
        notes=tuple(notes),
    )


def thm2_divisor(g: int) -> DivisorSpec:
    """The all-ones divisor (p = 56/5) whose weights are mu_j = 1/14."""
    return DivisorSpec(Fraction(56, 5), (ONE,) * (g // 2 + 1))


def kodaira_divisor(g: int) -> DivisorSpec:
    """The canonical-class divisor p = 13, q = (2, 3, 2, 2, ...)."""
    if g < 2:
        raise DomainError(f"the canonical-class divisor needs g >= 2, got g = {g}")
    return DivisorSpec(Fraction(13), (Fraction(2), Fraction(3)) + (Fraction(2),) * (g // 2 - 1))


def thm2_bound(g: int, table: VolumeTable, mode: str = DEFAULT_MODE) -> BoundCertificate:
    """The mu_j = 1/14 instance of the divisor bound (coefficients 1/28, 1/672, 1/14)."""
    if g <= 1:
        raise DomainError(f"the all-ones divisor bound requires g > 1, got g = {g}")
    return thm3_bound(g, divisor_mu(thm2_divisor(g)), table, mode, preset="thm2")


def kodaira_bound(
    g: int,
    table: VolumeTable,
    mode: str = DEFAULT_MODE,
    *,
    override_genus: bool = False,
) -> BoundCertificate:
    """The canonical-class instance (coefficients 11/26, 23/624, 11/13), g >= 23."""
    notes = []
    if g < KODAIRA_MIN_GENUS:
        if not override_genus:
            raise DomainError(
                f"the canonical-class bound is only established for g >= {KODAIRA_MIN_GENUS}, "
                f"got g = {g}; set override_genus to experiment anyway"
            )
        notes.append(
            f"genus floor g >= {KODAIRA_MIN_GENUS} overridden at g = {g}; "
            "the divisor is not known to be effective here"
        )
    return thm3_bound(
        g, divisor_mu(kodaira_divisor(g)), table, mode, preset="kodaira", extra_notes=notes
    )


def replay_certificate(cert: BoundCertificate) -> Fraction:
    """Recompute a certificate's value from its recorded rule and inputs."""
    g = cert.param("g")
    if cert.rule == "thm1_step":
        n = cert.param("n")
        v = cert.inputs[0].value
        return step_coefficient(g, n) * v + psi_top_constant(g)
    if cert.rule == "thm1_upper":
        n = cert.param("n")
        v_next = cert.inputs[0].value
        return 2 * (v_next - psi_top_constant(g)) / ((3 * g - 2 + n) * (7 * g - 7 + 3 * n))
    if cert.rule == "thm3":
        values = {ti.name: ti.value for ti in cert.inputs if ti.role != "subtracted"}
        for ti in cert.inputs:  # subtracted middle value wins where recorded
            if ti.role == "subtracted":
                values[ti.name] = ti.value
        return _thm3_value(g, cert.param("mu"), cert.param("mode"), values)
    raise DomainError(f"cannot replay certificate with unknown rule {cert.rule!r}")


# ------------------------------------------------------------------- chains


def build_chain(
    g_max: int,
    n_max: int,
    exact_dim_budget: int,
    *,
    engine: IntersectionEngine | None = None,
) -> VolumeTable:
    """Build a volume table: exact values up to a dimension budget, then bounds.

    Exact values seed every stable (g, n) with 3g-3+n <= exact_dim_budget and
    g <= g_max (the conventional 0 at (0,3)).  Lower bounds propagate in n by
    the added-point step and in g by the all-ones divisor bound, plus the
    canonical-class bound once g >= 23; the largest lower bound per cell is
    kept, and unreachable cells are recorded in ``table.gaps``.
    """
    if g_max < 0 or n_max < 0 or exact_dim_budget < 0:
        raise DomainError("g_max, n_max and exact_dim_budget must be non-negative")
    engine = engine or default_engine()
    table = VolumeTable()
    # bounds at genus g consume entries at n <= 2, so always chain that far
    n_reach = max(n_max, 2) if g_max >= 2 else n_max

    for g in range(g_max + 1):
        n_lo = max(0, 3 - 2 * g)
        for n in range(n_lo, exact_dim_budget - 3 * g + 3 + 1):
            if (g, n) != (0, 3):
                table.set_exact(g, n, engine.wp_volume(g, n))
        if g >= 2:
            for builder in (thm2_bound,) + ((kodaira_bound,) if g >= KODAIRA_MIN_GENUS else ()):
                try:
                    table.add_lower(builder(g, table))
                except DomainError as exc:
                    table.gaps.append((g, 0, str(exc)))
        for n in range(n_lo, n_reach):
            covered = table.lower_input(g, n + 1) is not None
            if (g, n) in EXCLUDED_PAIRS:
                if not covered:
                    table.gaps.append((g, n + 1, f"no propagation from excluded pair ({g},{n})"))
                continue
            src = table.lower_input(g, n)
            if src is None:
                if not covered:
                    table.gaps.append((g, n + 1, f"no exact value or lower bound for V({g},{n})"))
                continue
            v, prov = src
            table.add_lower(thm1_step(g, n, v, provenance=prov))
    return table


# ------------------------------------------------------------ verification


def verify_anchor_values(engine: IntersectionEngine | None = None) -> list[tuple[str, str]]:
    """Check the anchor identities and base volumes; raise on the first mismatch."""
    from .intersect import anchor_report

    engine = engine or IntersectionEngine()
    rows = []
    for label, got, expected in anchor_report(engine):
        if got != expected:
            raise VerificationError(f"anchor failed: {label}: got {got}, expected {expected}")
        rows.append((label, f"{got} == {expected}"))
    return rows


def verify_thm1(
    engine: IntersectionEngine | None = None, limit: int = 9
) -> list[tuple[int, int, Fraction, Fraction, bool]]:
    """Check the added-point bound on every stable, non-excluded (g,n) with 3g-2+n <= limit.

    The conventional V(0,3) = 0 feeds the (0,3) instance.  Returns
    (g, n, bound, exact next volume, equality) rows; raises on any violation.
    """
    engine = engine or IntersectionEngine()
    rows = []
    g = 0
    while 3 * g - 2 + max(0, 3 - 2 * g) <= limit:
        n_lo = max(0, 3 - 2 * g)
        for n in range(n_lo, limit - 3 * g + 2 + 1):
            if (g, n) in EXCLUDED_PAIRS:
                continue
            if (g, n) == (0, 3):
                v_in, prov = ZERO, "convention"
            else:
                v_in, prov = engine.wp_volume(g, n), "exact"
            cert = thm1_step(g, n, v_in, provenance=prov)
            v_next = engine.wp_volume(g, n + 1)
            if v_next < cert.value:
                raise VerificationError(
                    f"added-point bound fails at (g,n)=({g},{n}): "
                    f"bound {cert.value} > exact V({g},{n + 1}) = {v_next}"
                )
            rows.append((g, n, cert.value, v_next, v_next == cert.value))
        g += 1
    return rows


def verify_thm2(
    engine: IntersectionEngine | None = None, genera: Iterable[int] = (2, 3, 4)
) -> list[tuple[int, str, Fraction, Fraction]]:
    """Check exact V(g,0) against the all-ones divisor bound in both modes."""
    engine = engine or IntersectionEngine()
    genera = tuple(genera)
    table = build_chain(max(genera), 2, 3 * max(genera) - 3, engine=engine)
    rows = []
    for g in genera:
        exact = engine.wp_volume(g, 0)
        for mode in MODES:
            cert = thm2_bound(g, table, mode)
            if exact < cert.value:
                raise VerificationError(
                    f"all-ones divisor bound fails at g={g} ({mode}): "
                    f"bound {cert.value} > exact {exact}"
                )
            rows.append((g, mode, cert.value, exact))
    return rows


def verify_lemma1(
    engine: IntersectionEngine | None = None, max_dim: int = 6
) -> list[tuple[int, int, tuple[int, ...], Fraction]]:
    """Check non-negativity of every pure-kappa top integral with dim <= max_dim."""
    engine = engine or IntersectionEngine()
    rows = []
    g = 0
    while 3 * g - 3 <= max_dim:
        n_lo = max(0, 3 - 2 * g)
        for n in range(n_lo, max_dim - 3 * g + 3 + 1):
            d = 3 * g - 3 + n
            for part in partitions(d):
                kappa: dict[int, int] = {}
                for j in part:
                    kappa[j] = kappa.get(j, 0) + 1
                value = engine.mixed_intersection(IntersectionKey.make(g, n, kappa=kappa))
                if value < 0:
                    raise VerificationError(
                        f"kappa monomial sign check fails on M_({g},{n}): "
                        f"kappa partition {part} integrates to {value} < 0"
                    )
                rows.append((g, n, part, value))
        g += 1
    return rows
