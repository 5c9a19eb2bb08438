"""Finite fields GF(p^n), Galois rings GR(4,n), Gauss/exponential sums and
mutually orthogonal Latin squares."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .core import InputError, NumericalError, UnsupportedError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power_decomposition(d: int):
    """Return (p, n) with d = p^n, or None if d is not a prime power."""
    if d < 2:
        return None
    for p in range(2, d + 1):
        if p * p > d:
            break
        if d % p == 0:
            n = 0
            m = d
            while m % p == 0:
                m //= p
                n += 1
            return (p, n) if m == 1 else None
    return (d, 1)


class FieldExtension:
    """GF(p^n) with the lexicographically smallest primitive polynomial.

    Elements are integers in [0, p^n) encoding coefficient vectors in base p
    (digit i = coefficient of x^i). Multiplication uses exp/log tables built
    from the primitive root x, so construction verifies primitivity.
    """

    def __init__(self, p: int, n: int):
        if not is_prime(p):
            raise InputError(f"p = {p} is not prime")
        if n < 1:
            raise InputError(f"n must be >= 1, got {n}")
        self.p = p
        self.n = n
        self.q = p**n
        self.poly = self._smallest_primitive_poly()
        self._build_tables()

    def _poly_from_index(self, k: int):
        c = []
        for _ in range(self.n):
            c.append(k % self.p)
            k //= self.p
        return c  # c[i] = coefficient of x^i, monic x^n implied

    def _try_generator_order(self, low_coeffs) -> bool:
        # order of x modulo (x^n + sum low_coeffs[i] x^i) must be p^n - 1
        p, n, q = self.p, self.n, self.q
        red = [(-c) % p for c in low_coeffs]  # x^n = red(x)

        def mulx(vec):
            carry = vec[-1]
            out = [0] + vec[:-1]
            if carry:
                out = [(o + carry * r) % p for o, r in zip(out, red)]
            return out

        e = [1] + [0] * (n - 1)
        seen = 0
        for k in range(1, q):
            e = mulx(e)
            if e == [1] + [0] * (n - 1):
                seen = k
                break
        return seen == q - 1

    def _smallest_primitive_poly(self):
        for k in range(self.q):
            coeffs = self._poly_from_index(k)
            if self._try_generator_order(coeffs):
                return coeffs + [1]  # degree n monic
        raise NumericalError(f"no primitive polynomial found for GF({self.p}^{self.n})")

    def _build_tables(self):
        p, n, q = self.p, self.n, self.q
        red = [(-c) % p for c in self.poly[:n]]

        def mulx_idx(k):
            vec = self._poly_from_index(k)
            carry = vec[-1]
            out = [0] + vec[:-1]
            if carry:
                out = [(o + carry * r) % p for o, r in zip(out, red)]
            return sum(c * p**i for i, c in enumerate(out))

        exp = [1]
        for _ in range(q - 2):
            exp.append(mulx_idx(exp[-1]))
        self._exp = exp  # exp[i] = x^i
        self._log = {e: i for i, e in enumerate(exp)}
        if len(self._log) != q - 1:
            raise NumericalError("exp table degenerate; polynomial not primitive")

    # -- arithmetic on integer-encoded elements --
    def add(self, a: int, b: int) -> int:
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.n):
            out += ((a % p + b % p) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.n):
            out += ((-(a % p)) % p) * mult
            a //= p
            mult *= p
        return out

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            return 0 if k else 1
        return self._exp[(self._log[a] * k) % (self.q - 1)]

    def generator(self) -> int:
        return self._exp[1] if self.q > 2 else 1

    def elements(self):
        return range(self.q)

    def trace(self, a: int) -> int:
        """Tr(a) = a + a^p + ... + a^(p^(n-1)), an element of Z_p."""
        t = 0
        e = a
        for _ in range(self.n):
            t = self.add(t, e)
            e = self.pow(e, self.p)
        if t >= self.p:
            raise NumericalError(f"trace {t} not in prime field")
        return t


@lru_cache(maxsize=None)
def gf_construct(p: int, n: int) -> FieldExtension:
    return FieldExtension(p, n)


def gauss_sum_modulus(field: FieldExtension, b: int, v: int) -> float:
    """|sum_k exp(2 pi i Tr[b k^2 + v k]/p)| over GF(p^n); p odd, b != 0."""
    if field.p == 2:
        raise UnsupportedError("quadratic Gauss sum identity fails for p = 2")
    if b == 0:
        raise InputError("b must be nonzero")
    w = np.exp(2j * np.pi / field.p)
    s = 0.0 + 0.0j
    for k in field.elements():
        e = field.add(field.mul(b, field.mul(k, k)), field.mul(v, k))
        s += w ** field.trace(e)
    return float(abs(s))


class GaloisRing:
    """GR(4,n): Z4-polynomials modulo the Hensel lift of the GF(2^n) primitive
    polynomial, with Teichmuller set, Frobenius and trace."""

    def __init__(self, n: int):
        if n < 1:
            raise InputError(f"n must be >= 1, got {n}")
        self.n = n
        gf = gf_construct(2, n)
        self.lift = self._hensel_lift(gf.poly)
        self._red = tuple((-c) % 4 for c in self.lift[:n])
        self.teichmuller = self._build_teichmuller()
        self._dec = self._decompositions()

    @staticmethod
    def _hensel_lift(poly2):
        # g(x^2) = +- f(x) f(-x) mod 4, g monic (Graeffe lift)
        n = len(poly2) - 1
        f = list(poly2)
        fm = [(c * (-1) ** i) % 4 for i, c in enumerate(f)]
        prod = [0] * (2 * n + 1)
        for i, a in enumerate(f):
            for j, b in enumerate(fm):
                prod[i + j] = (prod[i + j] + a * b) % 4
        if any(prod[i] for i in range(1, 2 * n + 1, 2)):
            raise NumericalError("Hensel lift failed: odd powers survived")
        g = [prod[2 * i] % 4 for i in range(n + 1)]
        if g[n] != 1:
            g = [(-c) % 4 for c in g]
        return g

    def zero(self):
        return (0,) * self.n

    def one(self):
        return tuple([1] + [0] * (self.n - 1))

    def add(self, a, b):
        return tuple((x + y) % 4 for x, y in zip(a, b))

    def scale(self, c, a):
        return tuple((c * x) % 4 for x in a)

    def mul(self, a, b):
        n = self.n
        res = [0] * (2 * n - 1) if n > 1 else [0]
        for i in range(n):
            if a[i] == 0:
                continue
            for j in range(n):
                res[i + j] = (res[i + j] + a[i] * b[j]) % 4
        for k in range(2 * n - 2, n - 1, -1):
            c = res[k]
            if c:
                res[k] = 0
                for i in range(n):
                    res[k - n + i] = (res[k - n + i] + c * self._red[i]) % 4
        return tuple(res[:n])

    def _build_teichmuller(self):
        n = self.n
        if n == 1:
            return [(0,), (1,)]
        xi = tuple([0, 1] + [0] * (n - 2))
        teich = [self.zero(), self.one()]
        e = self.one()
        for _ in range(2**n - 2):
            e = self.mul(e, xi)
            teich.append(e)
        if len(set(teich)) != 2**n:
            raise NumericalError("Teichmuller set not of size 2^n")
        return teich

    def _decompositions(self):
        dec = {}
        for b in self.teichmuller:
            for v in self.teichmuller:
                r = self.add(b, self.scale(2, v))
                dec[r] = (b, v)
        if len(dec) != 4**self.n:
            raise NumericalError("b + 2v decomposition not unique/complete")
        return dec

    def frobenius(self, r):
        b, v = self._dec[r]
        return self.add(self.mul(b, b), self.scale(2, self.mul(v, v)))

    def trace(self, r) -> int:
        """Tr(r) = sum of Frobenius images, an element of Z/4Z."""
        tot = self.zero()
        e = r
        for _ in range(self.n):
            tot = self.add(tot, e)
            e = self.frobenius(e)
        if any(tot[1:]):
            raise NumericalError(f"ring trace not scalar: {tot}")
        return tot[0]

    def exponential_sum_modulus(self, r) -> float:
        """|sum over the Teichmuller set of i^Tr(r x)|."""
        s = sum(1j ** self.trace(self.mul(r, x)) for x in self.teichmuller)
        return float(abs(s))


@lru_cache(maxsize=None)
def gr_construct(n: int) -> GaloisRing:
    return GaloisRing(n)


@dataclass(frozen=True)
class LatinSquare:
    cells: tuple  # d x d tuple of tuples, entries in [0, d)
    is_latin: bool = field(default=True, compare=False)

    @property
    def order(self) -> int:
        return len(self.cells)

    def as_array(self) -> np.ndarray:
        return np.array(self.cells, dtype=int)


def _square_from_array(A, latin=True) -> LatinSquare:
    A = np.asarray(A, dtype=int)
    sq = LatinSquare(tuple(tuple(int(x) for x in row) for row in A), latin)
    if latin:
        d = sq.order
        want = set(range(d))
        for i in range(d):
            if set(A[i, :]) != want or set(A[:, i]) != want:
                raise NumericalError("constructed square is not Latin")
    return sq


def are_orthogonal_latin(L: LatinSquare, M: LatinSquare) -> bool:
    """Exact check: all ordered cell pairs (L_ij, M_ij) distinct."""
    if L.order != M.order:
        raise InputError(f"order mismatch: {L.order} vs {M.order}")
    d = L.order
    pairs = {(L.cells[i][j], M.cells[i][j]) for i in range(d) for j in range(d)}
    return len(pairs) == d * d


def mols_generate(d: int):
    """(d-1) mutually orthogonal Latin squares of prime-power order d from
    GF(d), plus the two augmentation squares A_ij = i and B_ij = j.

    Returns (mols, row_square, col_square).
    """
    pp = prime_power_decomposition(d)
    if pp is None:
        raise UnsupportedError(f"no general MOLS construction for non-prime-power order {d}")
    gf = gf_construct(*pp)
    mols = []
    for m in range(1, d):
        A = np.empty((d, d), dtype=int)
        for i in range(d):
            mi = gf.mul(m, i)
            for j in range(d):
                A[i, j] = gf.add(mi, j)
        mols.append(_square_from_array(A))
    rows = _square_from_array(np.tile(np.arange(d)[:, None], (1, d)), latin=False)
    cols = _square_from_array(np.tile(np.arange(d)[None, :], (d, 1)), latin=False)
    return mols, rows, cols
