"""Exact arithmetic kernels: CRT over squarefree moduli, pairing histograms,
and small finite-field extensions.

The central trick here is that the Fourier transform of a {0,1}-valued,
dilation-invariant function on (Z/p)^r against a fixed target y is a rational
number computable by pure counting.  Write n_k = #{x in supp : <x,y> = k mod p}.
Dilation invariance of the support forces n_1 = n_2 = ... = n_{p-1}, and since
the nonzero p-th roots of unity sum to -1,

    p^r * FT(y) = n_0 - n_1.

No floating point, no roots of unity.  The same idea works for squarefree q
via Ramanujan sums: if n_t depends only on gcd(t, q), then

    q^r * FT(y) = sum_{g | q} n_g * mu(q / g).

Everything in this module is exact (python ints / fractions.Fraction).
"""

from fractions import Fraction
from math import gcd, prod


class InvalidModulusError(ValueError):
    pass


class NonInvariantSupportError(ValueError):
    """Histogram classes that should be equal are not; the rational FT
    shortcut does not apply to this support."""


def factor_squarefree(q):
    """Factor a positive squarefree integer into its (sorted) primes.

    Raises InvalidModulusError if q is not squarefree or q < 1.
    """
    if q < 1:
        raise InvalidModulusError(f"modulus must be positive, got {q}")
    primes = []
    n = q
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                raise InvalidModulusError(f"{q} is not squarefree (p={d})")
            primes.append(d)
        d += 1 if d == 2 else 2
    if n > 1:
        primes.append(n)
    return primes


def mobius_squarefree(q):
    """mu(q) for squarefree q."""
    return (-1) ** len(factor_squarefree(q))


def divisors_squarefree(q):
    """All divisors of squarefree q, ascending."""
    ds = [1]
    for p in factor_squarefree(q):
        ds += [d * p for d in ds]
    return sorted(ds)


def crt_combine(residues):
    """Combine residues {m_1: a_1, ..., m_k: a_k} (or an iterable of
    (a_i, m_i) pairs) into (a, m_1*...*m_k).

    Moduli must be pairwise coprime; they are processed in ascending order of
    modulus so the result is deterministic regardless of input order.
    """
    if isinstance(residues, dict):
        residues = [(a, m) for m, a in residues.items()]
    residues = sorted(residues, key=lambda t: t[1])
    a, m = 0, 1
    for r, n in residues:
        if n < 1:
            raise InvalidModulusError(f"modulus must be positive, got {n}")
        if gcd(m, n) != 1:
            raise InvalidModulusError(f"moduli not coprime: {m}, {n}")
        # a' = a mod m, r mod n
        inv = pow(m % n, -1, n) if n > 1 else 0
        a = a + m * ((r - a) * inv % n)
        m *= n
        a %= m
    return a, m


class PairingHistogram:
    """Counts of <x,y> mod p over a designated support.

    Supports partitioned accumulation: build several histograms over disjoint
    slices of the support and merge(); integer sums make the merged result
    identical to a sequential count.
    """

    def __init__(self, p, counts=None):
        self.p = p
        self.counts = list(counts) if counts is not None else [0] * p
        if len(self.counts) != p:
            raise ValueError(f"need {p} classes, got {len(self.counts)}")

    def add(self, k, n=1):
        self.counts[k % self.p] += n

    def add_counts(self, counts):
        for k, n in enumerate(counts):
            self.counts[k] += int(n)

    def merge(self, other):
        """Fold another slice's counts into this one (in place)."""
        if other.p != self.p:
            raise ValueError("mismatched p")
        self.add_counts(other.counts)
        return self

    def total(self):
        return sum(self.counts)


def ft_value_from_histogram(h, r):
    """Exact FT value (n_0 - n_1)/p^r from a pairing histogram.

    Requires counts[1] = ... = counts[p-1]; raises NonInvariantSupportError
    otherwise (the support was not dilation-invariant, or the histogram was
    built against an inconsistent target).
    """
    p = h.p
    if p > 1 and len(set(h.counts[1:])) > 1:
        raise NonInvariantSupportError(
            f"nonzero classes unequal mod {p}: {h.counts}")
    n1 = h.counts[1] if p > 1 else 0
    return Fraction(h.counts[0] - n1, p ** r)


def ft_value_from_residue_histogram(counts, q, r):
    """Squarefree-q generalization: counts[t] = #{x : <x,y> = t mod q}.

    Requires counts constant on classes {t : gcd(t,q) = g}; value is
    sum_g counts_g * mu(q/g) / q^r.
    """
    if len(counts) != q:
        raise ValueError(f"need {q} classes")
    by_gcd = {}
    for t, n in enumerate(counts):
        g = gcd(t, q)
        if g in by_gcd and by_gcd[g] != n:
            raise NonInvariantSupportError(
                f"class gcd={g} not constant mod {q}")
        by_gcd[g] = n
    num = sum(by_gcd[g] * mobius_squarefree(q // g)
              for g in divisors_squarefree(q))
    return Fraction(num, q ** r)


# ---------------------------------------------------------------------------
# small extension fields F_{p^k}, k <= 4
# ---------------------------------------------------------------------------

def _poly_is_irreducible(coeffs, p):
    """Is x^k + c_{k-1} x^{k-1} + ... + c_0 irreducible over F_p?  k <= 4.

    Degrees 2 and 3: irreducible iff no roots.  Degree 4: no roots and not a
    product of two monic irreducible quadratics.
    """
    k = len(coeffs)

    def evalp(x):
        v = 1
        for c in reversed(coeffs):      # leading coefficient 1
            v = (v * x + c) % p
        return v

    if k == 1:
        return True
    if any(evalp(x) == 0 for x in range(p)) :
        return False
    if k <= 3:
        return True
    if k == 4:
        # test divisibility by every monic irreducible quadratic x^2+bx+c
        c3, c2, c1, c0 = coeffs[3], coeffs[2], coeffs[1], coeffs[0]
        for b in range(p):
            for c in range(p):
                # x^2+bx+c irreducible iff it has no roots in F_p
                if any((x * x + b * x + c) % p == 0 for x in range(p)):
                    continue
                # divide x^4 + c3 x^3 + c2 x^2 + c1 x + c0 by x^2 + b x + c
                q1 = (c3 - b) % p
                q0 = (c2 - c - b * q1) % p
                r1 = (c1 - b * q0 - c * q1) % p
                r0 = (c0 - c * q0) % p
                if r1 == 0 and r0 == 0:
                    return False
        return True
    raise ValueError("only k <= 4 supported")


def irreducible_poly(p, k):
    """Lexicographically least monic irreducible of degree k over F_p.

    Candidates x^k + c_{k-1}x^{k-1} + ... + c_0 are scanned in increasing
    order of the integer with base-p digits (c_{k-1}, ..., c_1, c_0), most
    significant digit first.  Returns (c_0, ..., c_{k-1}).
    """
    if k == 1:
        return (0,)
    for n in range(p ** k):
        digs = []
        m = n
        for _ in range(k):
            digs.append(m % p)
            m //= p
        coeffs = tuple(digs)            # c_0 first
        if _poly_is_irreducible(coeffs, p):
            return coeffs
    raise RuntimeError("unreachable: irreducibles of every degree exist")


class ExtField:
    """F_{p^k} with elements encoded as integers in [0, p^k): the element
    sum a_i t^i has code sum a_i p^i, t a root of the fixed irreducible.

    Arithmetic is vectorized over numpy arrays of codes; k <= 4.
    """

    def __init__(self, p, k):
        import numpy as np
        self.p, self.k = p, k
        self.q = p ** k
        self.modulus = irreducible_poly(p, k)
        # reduction rows: t^(k+j) = sum_i R[j][i] t^i, j = 0..k-2
        R = []
        row = [(-c) % p for c in self.modulus]          # t^k
        R.append(row[:])
        for _ in range(k - 2):
            carry = row[-1]                              # coefficient of t^(k-1)
            row = [0] + row[:-1]                         # multiply by t
            row = [(row[i] + carry * R[0][i]) % p for i in range(k)]
            R.append(row[:])
        self._np = np
        self._red = np.array(R, dtype=np.int64) if R else np.zeros((0, k), np.int64)

    def decode(self, codes):
        np = self._np
        codes = np.asarray(codes)
        out = np.empty(codes.shape + (self.k,), dtype=np.int64)
        c = codes.copy()
        for i in range(self.k):
            out[..., i] = c % self.p
            c = c // self.p
        return out

    def encode(self, digits):
        np = self._np
        pw = self.p ** np.arange(self.k, dtype=np.int64)
        return np.asarray(digits, dtype=np.int64) @ pw

    def mul(self, a, b):
        """Vectorized field multiplication of code arrays."""
        np = self._np
        da, db = self.decode(a), self.decode(b)
        k = self.k
        conv = np.zeros(np.broadcast(np.asarray(a), np.asarray(b)).shape + (2 * k - 1,),
                        dtype=np.int64)
        for i in range(k):
            for j in range(k):
                conv[..., i + j] += da[..., i] * db[..., j]
        low = conv[..., :k] % self.p
        if k > 1:
            high = conv[..., k:] % self.p
            low = (low + high @ self._red) % self.p
        return self.encode(low)

    def add(self, a, b):
        da, db = self.decode(a), self.decode(b)
        return self.encode((da + db) % self.p)

    def scalar_mul(self, c, a):
        """Multiply codes a by base-field scalar(s) c: int or array
        broadcastable against a's shape."""
        np = self._np
        da = self.decode(a)
        c = np.asarray(c, dtype=np.int64)[..., None]
        return self.encode((c * da) % self.p)
