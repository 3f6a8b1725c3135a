"""Fourier transforms of the discriminant-divisibility indicator.

For the local condition Psi_p = 1{p | disc(x)} on V(F_p), the normalized
transform is

    FT(y) = p^{-r} * sum_{x: p | disc x} e(<x, y> / p),

an exact rational because the support is invariant under scalar dilation
(the exponential sums collapse to (n_0 - n_1)/p^r, Ramanujan style).

Closed forms, verified exhaustively against brute force:

cubic space (p != 3), graded by the target y:
    y = 0                : p^-1 + p^-2 - p^-3
    disc(y) = 0, y != 0  : p^-2 - p^-3
    disc(y) != 0         : -p^-3

pair space (p != 2), graded by the orbit label of y:
    O_0      : p^-1 + 2p^-2 - p^-3 - 2p^-4 - p^-5 + 2p^-6 + p^-7 - p^-8
    O_D1^2   : p^-3 - p^-4 - 2p^-5 + 2p^-6 + p^-7 - p^-8
    O_D11    : 2p^-4 - 5p^-5 + 3p^-6 + p^-7 - p^-8
    O_Cs     : p^-4 - 3p^-5 + 2p^-6 + p^-7 - p^-8
    dim 8    : -p^-5 + p^-6 + p^-7 - p^-8       (D2, Dns, Cns, B11, B2)
    O_1^21^2 : -p^-6 + 2p^-7 - p^-8
    O_2^2    : p^-6 - p^-8
    O_1^4, O_1^31, O_1^211, O_1^22 : p^-7 - p^-8
    dim 12   : -p^-8                            (the five nonsingular)

There is also a dual-side table for the cubic space: with the plain dot
product x.k as character argument (k the preimage coordinates of the dual
lattice), the grading polynomial is dstar(k) = disc(rho(k))/27, which stays
meaningful mod 3; the same three values apply at every p including 3.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import ffcore, orbits
from .spaces import (BadPrimeError, ResourceLimitError, VElement,
                     disc_mod, dual_disc_cubic, pairing_weights_mod,
                     space_by_name)


class InvalidLabelError(ValueError):
    pass


FT_SWEEP_LIMIT = 6 ** 12
CUBIC_SWEEP_LIMIT = 60 ** 4

CUBIC_CLASSES = ("pV", "disc0", "nonsing")


@dataclass(frozen=True)
class LocalCondition:
    """Indicator of p | disc(x) for each prime p (the only built-in kind)."""
    space_id: str
    kind: str = "disc-divisible"

    @property
    def space(self):
        return space_by_name(self.space_id)

    def support_mask(self, coords, p):
        return disc_mod(self.space, coords, p) == 0

    def indicator(self, x, p):
        coords = x.coords if isinstance(x, VElement) else tuple(x)
        return int(disc_mod(self.space, np.array([coords]), p)[0] == 0)


CUBIC_COND = LocalCondition("cubic")
QUARTIC_COND = LocalCondition("quartic")


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def _poly(p, *pairs):
    """sum of c * p^-e for (c, e) pairs, exact."""
    return sum(Fraction(c, p ** e) for c, e in pairs)


def ft_closed_form_cubic(p, cls):
    if p == 3:
        raise BadPrimeError("cubic closed forms exclude p = 3")
    if cls == "pV":
        return _poly(p, (1, 1), (1, 2), (-1, 3))
    if cls == "disc0":
        return _poly(p, (1, 2), (-1, 3))
    if cls == "nonsing":
        return _poly(p, (-1, 3))
    raise InvalidLabelError(f"unknown cubic class {cls!r}")


_QUARTIC_LINES = {
    "O_0": ((1, 1), (2, 2), (-1, 3), (-2, 4), (-1, 5), (2, 6), (1, 7), (-1, 8)),
    "O_D1^2": ((1, 3), (-1, 4), (-2, 5), (2, 6), (1, 7), (-1, 8)),
    "O_D11": ((2, 4), (-5, 5), (3, 6), (1, 7), (-1, 8)),
    "O_Cs": ((1, 4), (-3, 5), (2, 6), (1, 7), (-1, 8)),
    "dim8": ((-1, 5), (1, 6), (1, 7), (-1, 8)),
    "O_1^21^2": ((-1, 6), (2, 7), (-1, 8)),
    "O_2^2": ((1, 6), (-1, 8)),
    "deg-linear": ((1, 7), (-1, 8)),
    "dim12": ((-1, 8),),
}

_LINE_OF_LABEL = {}
for _name in orbits.LABELS:
    if _name in _QUARTIC_LINES:
        _LINE_OF_LABEL[_name] = _name
    elif orbits.LABEL_DIM[_name] == 8:
        _LINE_OF_LABEL[_name] = "dim8"
    elif orbits.LABEL_DIM[_name] == 12:
        _LINE_OF_LABEL[_name] = "dim12"
    else:
        _LINE_OF_LABEL[_name] = "deg-linear"


def ft_closed_form_quartic(p, label):
    if p == 2:
        raise BadPrimeError("pair-space closed forms exclude p = 2")
    label = orbits.canonical_label(label)
    return _poly(p, *_QUARTIC_LINES[_LINE_OF_LABEL[label]])


def ft_closed_form(cond, p, label_or_class):
    if cond.space_id == "cubic":
        return ft_closed_form_cubic(p, label_or_class)
    return ft_closed_form_quartic(p, label_or_class)


def omega(space, p):
    """Psi-hat_p(0) = density of p | disc, exact.

    Unlike the graded tables, the zero-target value stays correct at the
    cubic space's bad prime: the count #{x in V(F_3): 3 | disc x} = 33
    gives 33/81 = 11/27, which is what the polynomial evaluates to.
    """
    if space.space_id == "cubic":
        return _poly(p, (1, 1), (1, 2), (-1, 3))
    return ft_closed_form_quartic(p, "O_0")


def cubic_class(y, p):
    coords = y.coords if isinstance(y, VElement) else tuple(y)
    arr = np.array([coords], dtype=np.int64) % p
    if not arr.any():
        return "pV"
    space = space_by_name("cubic")
    return "disc0" if disc_mod(space, arr, p)[0] == 0 else "nonsing"


def classify_target(cond, y, p):
    """Class/label of a transform argument: cubic coarse class or the
    orbit label of the pair space."""
    if cond.space_id == "cubic":
        return cubic_class(y, p)
    return orbits.classify(cond.space, y, p)


# ---------------------------------------------------------------------------
# brute force
# ---------------------------------------------------------------------------

def _targets_matrix(cond, targets, p):
    w = pairing_weights_mod(cond.space, p)
    T = np.asarray(targets, dtype=np.int64).reshape(-1, cond.space.r) % p
    return (T * w) % p


def ft_histograms(cond, p, targets, code_range=None, chunk=1 << 20):
    """Pairing histograms of <x, y_j> over the support {p | disc x}, all
    targets served by one sweep over the code range (default: everything).

    code_range=(lo, hi) sweeps a sub-range only; histograms over disjoint
    ranges merge additively to the full-sweep result.
    """
    space = cond.space
    if p in space.bad_primes:
        raise BadPrimeError(f"p={p} is a bad prime for {space.space_id}")
    n_states = p ** space.r
    limit = CUBIC_SWEEP_LIMIT if space.space_id == "cubic" else FT_SWEEP_LIMIT
    if n_states > limit:
        raise ResourceLimitError(f"p={p}: {n_states} states exceed the budget")
    lo, hi = code_range if code_range is not None else (0, n_states)
    WT = _targets_matrix(cond, targets, p)
    k = WT.shape[0]
    counts = np.zeros((k, p), dtype=np.int64)
    for start in range(lo, hi, chunk):
        codes = np.arange(start, min(start + chunk, hi), dtype=np.int64)
        C = orbits.decode_states(codes, p, r=space.r)
        sup = C[cond.support_mask(C, p)]
        if not sup.size:
            continue
        P = sup.astype(np.int64) @ WT.T % p
        for j in range(k):
            counts[j] += np.bincount(P[:, j], minlength=p)
    return [ffcore.PairingHistogram(p, c.tolist()) for c in counts]


def ft_bruteforce_multi(cond, p, targets, chunk=1 << 20):
    """Exact transform values at several targets from a single sweep."""
    hists = ft_histograms(cond, p, targets, chunk=chunk)
    return [ffcore.ft_value_from_histogram(h, cond.space.r) for h in hists]


def ft_bruteforce(cond, p, y, chunk=1 << 20):
    coords = y.coords if isinstance(y, VElement) else tuple(y)
    return ft_bruteforce_multi(cond, p, [coords], chunk=chunk)[0]


def ft_bruteforce_exhaustive_cubic(cond, p):
    """(numerators, p^4): exact FT numerators at every y in V(F_p), from one
    pass of the full support against all p^4 targets (target axis chunked:
    the pairing matrix at p = 23 would otherwise run to ~30 GB)."""
    if cond.space_id != "cubic":
        raise ValueError("exhaustive mode is for the cubic space")
    if p == 3:
        raise BadPrimeError("p=3 excluded (bad prime)")
    if p > 23:
        raise ResourceLimitError("exhaustive targets capped at p <= 23")
    n = p ** 4
    codes = np.arange(n, dtype=np.int64)
    C = orbits.decode_states(codes, p, r=4)
    sup = C[cond.support_mask(C, p)].astype(np.int64)
    WT = _targets_matrix(cond, C, p)
    numer = np.empty(n, dtype=np.int64)
    block = max(1, int(1.5e7) // max(len(sup), 1))
    for lo in range(0, n, block):
        P = sup @ WT[lo:lo + block].T % p    # (support, <=block)
        k = P.shape[1]
        cnt = np.bincount((P + np.arange(k, dtype=np.int64) * p).ravel(),
                          minlength=k * p).reshape(k, p)
        assert (cnt[:, 1:] == cnt[:, 1:2]).all()   # dilation invariance
        numer[lo:lo + block] = cnt[:, 0] - cnt[:, 1]
    return numer, n


# ---------------------------------------------------------------------------
# dual-side cubic table (plain dot-product character, all p)
# ---------------------------------------------------------------------------

def dual_cubic_class_batch(kcoords, p):
    """0: k = 0; 1: dstar(k) = 0, k != 0; 2: nonsingular."""
    K = np.asarray(kcoords, dtype=np.int64) % p
    ds = dual_disc_cubic(K) % p
    cls = np.where(ds == 0, 1, 2).astype(np.int8)
    cls[~K.any(axis=-1)] = 0
    return cls

def dual_ft_value(p, cls):
    """Dual-side cubic values; same three rationals as the direct table but
    valid at every p (the dstar grading absorbs the bad prime 3)."""
    if cls == 0:
        return _poly(p, (1, 1), (1, 2), (-1, 3))
    if cls == 1:
        return _poly(p, (1, 2), (-1, 3))
    if cls == 2:
        return _poly(p, (-1, 3))
    raise InvalidLabelError(f"dual class {cls!r}")


def dual_ft_bruteforce(p):
    """(numerators, p^4) of the dual-side transform at every k in (Z/p)^4:
    plain dot-product character over the support {p | disc x}."""
    n = p ** 4
    codes = np.arange(n, dtype=np.int64)
    C = orbits.decode_states(codes, p, r=4)
    space = space_by_name("cubic")
    sup = C[disc_mod(space, C, p) == 0].astype(np.int64)
    P = sup @ C.astype(np.int64).T % p
    numer = np.empty(n, dtype=np.int64)
    for j in range(n):
        cnt = np.bincount(P[:, j], minlength=p)
        assert len(set(cnt[1:].tolist())) == 1
        numer[j] = cnt[0] - cnt[1]
    return numer, n


# ---------------------------------------------------------------------------
# squarefree moduli on V(Z)
# ---------------------------------------------------------------------------

def ft_on_lattice(cond, q, y):
    """Psi-hat_q at an integer argument, squarefree q: the (q, m) factor is
    dropped (the dual-lattice index m acts trivially there), the rest is the
    per-prime closed form, multiplied out."""
    space = cond.space
    coords = y.coords if isinstance(y, VElement) else tuple(y)
    q_eff = q // np.gcd(q, space.m)
    value = Fraction(1)
    for p in ffcore.factor_squarefree(int(q_eff)):
        value *= ft_closed_form(cond, p, classify_target(cond, coords, p))
    return value


def ft_qsplit_check(cond, q0, q1, x):
    """The split identity: for x in q0 V(Z) and coprime squarefree q0, q1,
    FT_{q0 q1}(x) = FT_{q0}(x) * FT_{q1}(x / q0)."""
    coords = x.coords if isinstance(x, VElement) else tuple(x)
    if any(c % q0 for c in coords):
        raise ValueError(f"x not in {q0}V(Z)")
    if np.gcd(q0, q1) != 1:
        raise ValueError("moduli not coprime")
    lhs = ft_on_lattice(cond, q0 * q1, coords)
    rhs = (ft_on_lattice(cond, q0, coords)
           * ft_on_lattice(cond, q1, tuple(c // q0 for c in coords)))
    return lhs == rhs


# ---------------------------------------------------------------------------
# serialized tables
# ---------------------------------------------------------------------------

@dataclass
class FourierTable:
    p: int
    space_id: str
    values: dict            # label/class -> Fraction
    source: str             # bruteforce | closed_form

    def to_file(self, path, version="1"):
        with open(path, "w") as fh:
            fh.write(f"# fourier-table v{version} space={self.space_id} "
                     "prime label num den source\n")
            for name, v in self.values.items():
                fh.write(f"{self.p}\t{name}\t{v.numerator}\t{v.denominator}"
                         f"\t{self.source}\n")

    @classmethod
    def from_file(cls, path, version="1"):
        values = {}
        p = src = space_id = None
        with open(path) as fh:
            head = fh.readline()
            if not head.startswith(f"# fourier-table v{version} "):
                raise ValueError(f"stale or foreign fourier table: {head!r}")
            space_id = head.split("space=")[1].split()[0]
            for line in fh:
                ps, name, num, den, src = line.rstrip("\n").split("\t")
                p = int(ps)
                values[name] = Fraction(int(num), int(den))
        return cls(p=p, space_id=space_id, values=values, source=src)


def fourier_table_closed_form(cond, p):
    names = CUBIC_CLASSES if cond.space_id == "cubic" else orbits.LABELS
    return FourierTable(p=p, space_id=cond.space_id, source="closed_form",
                        values={n: ft_closed_form(cond, p, n) for n in names})


def fourier_table_bruteforce(cond, p, reps_by_name=None, chunk=1 << 20):
    """Brute-force table at class/orbit representatives.  For the pair space
    reps_by_name should come from decompose_orbits; for the cubic space
    canonical small representatives are built in."""
    if cond.space_id == "cubic":
        reps_by_name = reps_by_name or _cubic_class_reps(p)
    if reps_by_name is None:
        raise ValueError("pair space needs orbit representatives")
    names = list(reps_by_name)
    vals = ft_bruteforce_multi(cond, p, [reps_by_name[n] for n in names],
                               chunk=chunk)
    return FourierTable(p=p, space_id=cond.space_id, source="bruteforce",
                        values=dict(zip(names, vals)))


def _cubic_class_reps(p):
    # (1,0,0,0) = u^3 has disc 0; find any nonsingular form by scanning
    space = space_by_name("cubic")
    nonsing = None
    for code in range(1, p ** 4):
        c = tuple(int(v) for v in orbits.decode_states(
            np.array([code], dtype=np.int64), p, r=4)[0])
        if disc_mod(space, np.array([c]), p)[0] != 0:
            nonsing = c
            break
    return {"pV": (0, 0, 0, 0), "disc0": (1, 0, 0, 0), "nonsing": nonsing}
