"""Prime pairs bucketed by coset lattice class, and how evenly they spread.

Two counters are kept per product label ``c = n(n+z) mod q``:

* ``raw_count`` -- pairs ``(p, p+z)`` of primes with ``p + z <= x``
  (both entries at most ``x``, the convention of ``pi_z``);
* ``psi_mass`` -- ``sum_{n <= x} f(n) f(n+z)`` with ``f`` the von Mangoldt
  weight (or theta), the convention of ``Psi_z``.

Pairs with an entry sharing a factor with ``q`` are tallied under
``excluded_*`` so that totals close against the unbucketed counters.

Two predictions are compared: uniform over admissible labels, and weighted by
the number of residues ``a`` with ``a(a+z) == c`` (mod q).
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from . import _accel
from .area import correlation_terms
from .characters import Character, UnitGroupStructure, build_group, characters
from .errors import ArgumentError, FitError
from .residues import AdmissibleClassSet, Modulus, admissible_classes, make_modulus
from .sieve import PrimeTable

LABEL_FIELDS = (
    "label",
    "multiplicity",
    "raw_count",
    "psi_mass",
    "uniform_expected",
    "weighted_expected",
    "rel_dev_uniform",
    "rel_dev_weighted",
)


def _grouped_fsum(keys: np.ndarray, values: np.ndarray) -> dict[int, float]:
    """Correctly rounded per-key sums (independent of input order)."""
    if keys.size == 0:
        return {}
    order = np.argsort(keys, kind="stable")
    keys, values = keys[order], values[order]
    uniq, starts = np.unique(keys, return_index=True)
    bounds = list(starts[1:]) + [keys.size]
    return {int(k): math.fsum(values[s:e]) for k, s, e in zip(uniq, starts, bounds)}


@dataclass(frozen=True)
class ClassCounts:
    q: int
    z: int
    x: int
    weight: str
    raw_count: dict[int, int]
    psi_mass: dict[int, float]
    excluded_count: int
    excluded_psi_mass: float

    @property
    def raw_total(self) -> int:
        return sum(self.raw_count.values())

    @property
    def psi_total(self) -> float:
        return math.fsum(self.psi_mass.values())


def bucket_pairs(z: int, q: int | Modulus, x: int, t: PrimeTable, weight: str = "lambda") -> ClassCounts:
    m = make_modulus(q)
    n, w = correlation_terms(x, z, t, weight)
    labels = _accel.pair_labels(n, z, m.q)
    unit = (np.gcd(n, m.q) == 1) & (np.gcd(n + z, m.q) == 1)
    both_prime = t.bits[n].astype(bool) & t.bits[n + z].astype(bool) & (n + z <= x)
    mass = _grouped_fsum(labels[unit], w[unit])
    cnt_labels, cnt = np.unique(labels[unit & both_prime], return_counts=True)
    return ClassCounts(
        q=m.q,
        z=z,
        x=x,
        weight=weight,
        raw_count={int(k): int(v) for k, v in zip(cnt_labels, cnt)},
        psi_mass=mass,
        excluded_count=int(np.count_nonzero(both_prime & ~unit)),
        excluded_psi_mass=math.fsum(w[~unit]),
    )


def _root_sum(angles: np.ndarray, weights: np.ndarray, order: int) -> complex:
    ok = angles >= 0
    by_angle = _grouped_fsum(angles[ok], weights[ok])
    re = math.fsum(v * math.cos(2 * math.pi * k / order) for k, v in by_angle.items())
    im = math.fsum(v * math.sin(2 * math.pi * k / order) for k, v in by_angle.items())
    return complex(re, im)


def psi_chi(x: int, c: Character, t: PrimeTable) -> complex:
    """sum_{n <= x} Lambda(n) chi(n)."""
    n, logs = t.prime_powers(x)
    return _root_sum(c.angles(n), logs, c.structure.exponent)


def kappa_correlation(x: int, z: int, c: Character, t: PrimeTable) -> complex:
    """sum_{n <= x} Lambda(n) Lambda(n+z) kappa((n, n+z))."""
    n, w = correlation_terms(x, z, t, "lambda")
    labels = _accel.pair_labels(n, z, c.q)
    angles = c.angles(labels)
    angles[~((np.gcd(n, c.q) == 1) & (np.gcd(n + z, c.q) == 1))] = -1
    return _root_sum(angles, w, c.structure.exponent)


def reconstruct_label_mass(
    label: int, x: int, z: int, group: UnitGroupStructure | Modulus | int, t: PrimeTable
) -> float:
    """Psi_z mass at ``label`` recovered from the kappa-correlations of all characters."""
    g = group if isinstance(group, UnitGroupStructure) else build_group(group)
    total = 0j
    for c in characters(g):
        k = c.angle(label)
        rot = complex(math.cos(2 * math.pi * k / g.exponent), -math.sin(2 * math.pi * k / g.exponent))
        total += rot * kappa_correlation(x, z, c, t)
    return (total / g.modulus.phi).real


@dataclass(frozen=True)
class Prediction:
    model: str
    fractions: dict[int, float]
    theta_hat: float  # 2 * psi_total / x
    theta_hat_pi: float  # 2 * raw_total * log^2 x / x


@dataclass(frozen=True)
class LabelRow:
    label: int
    multiplicity: int
    raw_count: int
    psi_mass: float
    uniform_expected: float
    weighted_expected: float
    rel_dev_uniform: float | None
    rel_dev_weighted: float | None


@dataclass(frozen=True)
class EquidistributionReport:
    q: int
    z: int
    x: int
    weight: str
    labels: tuple[LabelRow, ...]
    chi2_uniform: float | None
    chi2_weighted: float | None
    excluded_mass: int
    excluded_psi_mass: float
    theta_hat: float
    theta_hat_pi: float
    max_abs_rel_dev_uniform: float | None
    max_abs_rel_dev_weighted: float | None
    degenerate: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        d["labels"] = [asdict(r) for r in self.labels]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "EquidistributionReport":
        d = dict(d)
        d["labels"] = tuple(LabelRow(**r) for r in d["labels"])
        return cls(**d)

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_json(cls, text: str) -> "EquidistributionReport":
        return cls.from_dict(json.loads(text))

    def csv_rows(self) -> list[dict]:
        return [{"q": self.q, "z": self.z, "x": self.x, **asdict(r)} for r in self.labels]

    def predictions(self) -> tuple[Prediction, Prediction]:
        mult = sum(r.multiplicity for r in self.labels)
        uni = {r.label: 1 / len(self.labels) for r in self.labels}
        wtd = {r.label: r.multiplicity / mult for r in self.labels}
        return (
            Prediction("uniform", uni, self.theta_hat, self.theta_hat_pi),
            Prediction("weighted", wtd, self.theta_hat, self.theta_hat_pi),
        )


def _chi2(observed: np.ndarray, expected: np.ndarray) -> float:
    return math.fsum((observed - expected) ** 2 / expected)


def build_report(counts: ClassCounts, adm: AdmissibleClassSet) -> EquidistributionReport:
    if (counts.z, counts.q) != (adm.gap, adm.modulus.q):
        raise ArgumentError("counts and admissible set disagree on (z, q)")
    stray = set(counts.raw_count) - set(adm.multiplicity)
    if stray:
        raise ArgumentError(f"counts at non-admissible labels {sorted(stray)}")
    labels = adm.labels
    mult = np.array([adm.multiplicity[c] for c in labels], dtype=np.float64)
    obs = np.array([counts.raw_count.get(c, 0) for c in labels], dtype=np.float64)
    total = counts.raw_total
    uni_frac = np.full(len(labels), 1.0 / len(labels)) if labels else np.empty(0)
    wtd_frac = mult / mult.sum() if labels else np.empty(0)
    uni_exp = uni_frac * total
    wtd_exp = wtd_frac * total
    degenerate = total == 0 or not labels
    rows = []
    for i, c in enumerate(labels):
        rows.append(
            LabelRow(
                label=c,
                multiplicity=int(mult[i]),
                raw_count=int(obs[i]),
                psi_mass=counts.psi_mass.get(c, 0.0),
                uniform_expected=float(uni_exp[i]),
                weighted_expected=float(wtd_exp[i]),
                rel_dev_uniform=None if degenerate else float((obs[i] - uni_exp[i]) / uni_exp[i]),
                rel_dev_weighted=None if degenerate else float((obs[i] - wtd_exp[i]) / wtd_exp[i]),
            )
        )
    x = counts.x
    theta_hat = 2.0 * counts.psi_total / x
    theta_hat_pi = 2.0 * total * math.log(x) ** 2 / x if x > 1 else 0.0
    return EquidistributionReport(
        q=counts.q,
        z=counts.z,
        x=x,
        weight=counts.weight,
        labels=tuple(rows),
        chi2_uniform=None if degenerate else _chi2(obs, uni_exp),
        chi2_weighted=None if degenerate else _chi2(obs, wtd_exp),
        excluded_mass=counts.excluded_count,
        excluded_psi_mass=counts.excluded_psi_mass,
        theta_hat=theta_hat,
        theta_hat_pi=theta_hat_pi,
        max_abs_rel_dev_uniform=None if degenerate else max(abs(r.rel_dev_uniform) for r in rows),
        max_abs_rel_dev_weighted=None if degenerate else max(abs(r.rel_dev_weighted) for r in rows),
        degenerate=degenerate,
    )


def measure(z: int, q: int, x: int, t: PrimeTable, weight: str = "lambda") -> EquidistributionReport:
    m = make_modulus(q)
    return build_report(bucket_pairs(z, m, x, t, weight), admissible_classes(z, m))


def reports_to_csv(reports: Sequence[EquidistributionReport]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=("q", "z", "x") + LABEL_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in reports:
        writer.writerows(r.csv_rows())
    return buf.getvalue()


@dataclass(frozen=True)
class LabelFit:
    label: int
    psi_slope: float  # mass ~ slope * x
    pi_slope: float  # count ~ slope * x / log^2 x
    psi_residual: float  # root-mean-square of the fit residuals
    pi_residual: float
    theta_hat_uniform: float
    theta_hat_weighted: float
    theta_hat_pi_uniform: float
    theta_hat_pi_weighted: float


@dataclass(frozen=True)
class ConstantEstimate:
    q: int
    z: int
    xs: tuple[int, ...]
    fits: tuple[LabelFit, ...] = field(default=())

    def theta_hat(self, model: str = "uniform", kind: str = "psi") -> float:
        """Mean over labels of the per-label estimate."""
        attr = {"psi": "theta_hat_", "pi": "theta_hat_pi_"}[kind] + model
        return math.fsum(getattr(f, attr) for f in self.fits) / len(self.fits)


def _slope(u: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Least-squares slope through the origin and RMS residual."""
    s = float(np.dot(u, y) / np.dot(u, u))
    return s, float(np.sqrt(np.mean((y - s * u) ** 2)))


def constant_estimate(reports: Sequence[EquidistributionReport]) -> ConstantEstimate:
    """Fit per-label mass against ``x`` and counts against ``x / log^2 x``.

    Per label, the effective constant is ``2 * slope / fraction`` where the
    fraction is the model's share for that label (``1/A`` for the uniform
    model over ``A`` admissible labels).
    """
    if len(reports) < 3:
        raise FitError(f"need at least 3 grid points, got {len(reports)}")
    if len({(r.q, r.z) for r in reports}) != 1:
        raise FitError("grid mixes different (q, z)")
    reports = sorted(reports, key=lambda r: r.x)
    xs = np.array([r.x for r in reports], dtype=np.float64)
    if len(set(xs.tolist())) < 3:
        raise FitError("need at least 3 distinct x values")
    first = reports[0]
    if not first.labels:
        raise FitError("no admissible labels")
    uni, wtd = first.predictions()
    u_pi = xs / np.log(xs) ** 2
    fits = []
    for i, row in enumerate(first.labels):
        mass = np.array([r.labels[i].psi_mass for r in reports])
        cnt = np.array([r.labels[i].raw_count for r in reports], dtype=np.float64)
        ps, pres = _slope(xs, mass)
        cs, cres = _slope(u_pi, cnt)
        fu, fw = uni.fractions[row.label], wtd.fractions[row.label]
        fits.append(LabelFit(row.label, ps, cs, pres, cres, 2 * ps / fu, 2 * ps / fw, 2 * cs / fu, 2 * cs / fw))
    return ConstantEstimate(first.q, first.z, tuple(int(v) for v in xs), tuple(fits))
