"""Charge transition levels, Fermi-level stability windows and reaction energies.

Formation energies of the charge states are linear in the Fermi level with
slope q. Only energy differences enter, so no chemical potentials are needed:
finite-size corrections come in as scalars and are added to the total
energies before differencing.
"""

from dataclasses import dataclass
from typing import Optional

DEFAULT_GAP_EV = 1.17
DEFAULT_ACCURACY_EV = 0.1


@dataclass(frozen=True)
class ChargeState:
    q: int
    E_tot: float  # eV
    E_corr: float = 0.0  # eV, finite-size correction
    spin: Optional[float] = None
    point_group: Optional[str] = None
    jt_energy: Optional[float] = None  # eV

    def __post_init__(self):
        if self.q == 0 and self.E_corr != 0.0:
            raise ValueError("neutral state cannot carry a charge correction")
        if self.q != 0 and self.E_corr < 0.0:
            raise ValueError("charge correction must be nonnegative")

    @property
    def corrected(self):
        return self.E_tot + self.E_corr


@dataclass(frozen=True)
class TransitionLevel:
    pair: tuple  # (q + 1, q)
    epsilon: float  # eV above the VBM
    undetermined: bool = False
    negative_u: bool = False

    @property
    def label(self):
        return f"{_charge_label(self.pair[0])}/{_charge_label(self.pair[1])}"


@dataclass(frozen=True)
class Window:
    q: int
    lo: float
    hi: float


@dataclass(frozen=True)
class TransitionLevelDiagram:
    levels: tuple
    gap: float
    windows: tuple
    accuracy_band: float = DEFAULT_ACCURACY_EV

    @property
    def negative_u(self):
        return any(lvl.negative_u for lvl in self.levels)

    def stable_charge(self, fermi):
        for w in self.windows:
            if w.lo <= fermi <= w.hi:
                return w.q
        raise ValueError(f"Fermi level {fermi} outside [0, {self.gap}]")


def _charge_label(q):
    if q == 0:
        return "0"
    sign = "+" if q > 0 else "-"
    return sign if abs(q) == 1 else f"{abs(q)}{sign}"


def transition_level(higher, lower, E_vbm=0.0):
    """epsilon(q+1/q) above the VBM, from corrected total energies of the two states."""
    if higher.q != lower.q + 1:
        raise ValueError(f"charges must differ by one, got {higher.q} and {lower.q}")
    return TransitionLevel((higher.q, lower.q), lower.corrected - higher.corrected - E_vbm)


def transition_levels(states, E_vbm=0.0):
    """All adjacent-charge levels of a set of states, highest charge first."""
    by_q = {s.q: s for s in states}
    qs = sorted(by_q, reverse=True)
    for a, b in zip(qs, qs[1:]):
        if a != b + 1:
            raise ValueError(f"charge states {a} and {b} are not adjacent")
    return [transition_level(by_q[a], by_q[b], E_vbm) for a, b in zip(qs, qs[1:])]


def stability_map(levels, gap=DEFAULT_GAP_EV, accuracy_band=DEFAULT_ACCURACY_EV):
    """Stable charge state for every Fermi level in [0, gap].

    ``levels`` are :class:`TransitionLevel` objects (or ``(pair, epsilon)``
    tuples) forming a chain of adjacent charges. Windows follow the lower
    envelope of the formation-energy lines, so they tile [0, gap]. When the
    levels are ordered the boundaries are the input levels themselves. A level
    above the next lower-charge level is flagged negative-U; levels closer than
    ``accuracy_band`` to either band edge are flagged undetermined.
    """
    if not gap > 0:
        raise ValueError("gap must be positive")
    lv = [lvl if isinstance(lvl, TransitionLevel) else TransitionLevel(tuple(lvl[0]), float(lvl[1]))
          for lvl in levels]
    if not lv:
        raise ValueError("no transition levels")
    lv.sort(key=lambda t: -t.pair[0])
    for t in lv:
        if t.pair[0] != t.pair[1] + 1:
            raise ValueError(f"level {t.pair} does not connect adjacent charges")
        if not -accuracy_band < t.epsilon < gap + accuracy_band:
            raise ValueError(f"level {t.label} at {t.epsilon:g} eV lies outside the gap")
    for a, b in zip(lv, lv[1:]):
        if a.pair[1] != b.pair[0]:
            raise ValueError(f"levels {a.label} and {b.label} do not form a chain")

    eps = [t.epsilon for t in lv]
    if all(a <= b for a, b in zip(eps, eps[1:])):
        windows = _ordered_windows(lv, gap)
    else:
        windows = _envelope_windows(lv, gap)

    flagged = []
    for k, t in enumerate(lv):
        neg_u = (k + 1 < len(lv) and t.epsilon > lv[k + 1].epsilon) or (k > 0 and lv[k - 1].epsilon > t.epsilon)
        undetermined = t.epsilon < accuracy_band or t.epsilon > gap - accuracy_band
        flagged.append(TransitionLevel(t.pair, t.epsilon, undetermined, neg_u))
    return TransitionLevelDiagram(tuple(flagged), gap, tuple(windows), accuracy_band)


def _ordered_windows(lv, gap):
    # levels ascend with decreasing charge: each charge is stable between its two levels
    bounds = [0.0] + [min(max(t.epsilon, 0.0), gap) for t in lv] + [gap]
    charges = [lv[0].pair[0]] + [t.pair[1] for t in lv]
    return [Window(q, lo, hi) for q, lo, hi in zip(charges, bounds, bounds[1:]) if hi > lo]


def _envelope_windows(lv, gap):
    # formation energies relative to the lowest charge: F_q(x) = c_q + q x
    q_min = lv[-1].pair[1]
    c = {q_min: 0.0}
    for t in reversed(lv):
        c[t.pair[0]] = c[t.pair[1]] - t.epsilon
    charges = sorted(c, reverse=True)

    def lowest(x):
        return min(charges, key=lambda q: (c[q] + q * x, -q))

    # candidate breakpoints: every pairwise crossing inside the gap
    exact = {0.0, gap} | {t.epsilon for t in lv if 0.0 < t.epsilon < gap}
    derived = set()
    for i, qa in enumerate(charges):
        for qb in charges[i + 1:]:
            if qa - qb > 1:
                x = (c[qb] - c[qa]) / (qa - qb)
                if 0.0 < x < gap:
                    derived.add(x)
    # crossings are merged when they agree to round-off; input levels win so boundaries stay bit-exact
    tol = 1e-12 * max(gap, 1.0)
    xs = sorted(exact)
    for x in sorted(derived):
        if all(abs(x - y) > tol for y in xs):
            xs.append(x)
    xs = sorted(xs)
    windows = []
    for lo, hi in zip(xs, xs[1:]):
        q = lowest(0.5 * (lo + hi))
        if windows and windows[-1].q == q:
            windows[-1] = Window(q, windows[-1].lo, hi)
        else:
            windows.append(Window(q, lo, hi))
    return windows


def reaction_energy(reactant_total, products_total):
    """Products minus reactant total energy; positive means endothermic."""
    return products_total - reactant_total
