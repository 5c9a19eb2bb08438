"""Complete-set MUB constructions (finite fields, Galois rings, cubic phases,
Heisenberg-Weyl classes) plus product, Latin-square, weighted-design,
approximate and d=6 product-family bases."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import algebra
from .algebra import gf_construct, gr_construct, is_prime, prime_power_decomposition
from .analysis import check_mu_set
from .core import (
    DEFAULT_TOL,
    ConstructionError,
    DomainError,
    InputError,
    NumericalError,
    ShapeError,
    ToleranceProfile,
    canonical_phase,
    kron_all,
)

COMPLETE_METHODS = ("ivanovic", "wootters_fields", "klappenecker_rotteler", "alltop", "heisenberg_weyl")


@dataclass
class MUBSet:
    dim: int
    bases: list  # list of (d, d) complex arrays, columns = vectors
    method: str
    params: dict = field(default_factory=dict)
    weights: list | None = None

    def __post_init__(self):
        self.bases = [np.asarray(B, dtype=complex) for B in self.bases]
        for B in self.bases:
            if B.shape != (self.dim, self.dim):
                raise ShapeError(f"basis shape {B.shape} != ({self.dim}, {self.dim})")

    def __len__(self):
        return len(self.bases)

    def validate(self, tol: ToleranceProfile = DEFAULT_TOL, expect_mu: bool = True):
        report = check_mu_set(self.bases, tol)
        if report.max_orth_deviation >= tol.eps_unitary:
            raise NumericalError(f"orthonormality deviation {report.max_orth_deviation:.2e}")
        if expect_mu and report.max_mu_deviation >= tol.eps_mu:
            raise NumericalError(f"MU deviation {report.max_mu_deviation:.2e}")
        if self.weights is not None:
            if len(self.weights) != len(self.bases):
                raise InputError("one weight per basis required")
            if abs(sum(self.weights) - 1.0 / self.dim) > 1e-12:
                raise NumericalError("weights must sum to 1/d")
        return report


def standard_basis(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex)


def _ivanovic_bases(p: int):
    w = np.exp(2j * np.pi / p)
    out = []
    for b in range(p):
        B = np.empty((p, p), dtype=complex)
        for v in range(p):
            B[:, v] = [w ** ((b * k * k + v * k) % p) for k in range(p)]
        out.append(B / np.sqrt(p))
    return out


def ivanovic(p: int) -> MUBSet:
    """Quadratic-phase complete set in odd prime dimension p."""
    if not is_prime(p) or p == 2:
        raise ConstructionError(f"ivanovic requires an odd prime dimension, got {p}")
    bases = [standard_basis(p)] + _ivanovic_bases(p)
    return MUBSet(p, bases, "ivanovic", {"p": p})


def wootters_fields(d: int) -> MUBSet:
    """Finite-field complete set in odd prime-power dimension d = p^n."""
    pp = prime_power_decomposition(d)
    if pp is None or pp[0] == 2:
        raise ConstructionError(f"wootters_fields requires an odd prime power, got {d}")
    p, n = pp
    gf = gf_construct(p, n)
    w = np.exp(2j * np.pi / p)
    bases = [standard_basis(d)]
    for b in gf.elements():
        B = np.empty((d, d), dtype=complex)
        for v in gf.elements():
            col = [w ** gf.trace(gf.add(gf.mul(b, gf.mul(k, k)), gf.mul(v, k))) for k in gf.elements()]
            B[:, v] = col
        bases.append(B / np.sqrt(d))
    return MUBSet(d, bases, "wootters_fields", {"p": p, "n": n})


def klappenecker_rotteler(d: int) -> MUBSet:
    """Galois-ring complete set in even prime-power dimension d = 2^n."""
    pp = prime_power_decomposition(d)
    if pp is None or pp[0] != 2:
        raise ConstructionError(f"klappenecker_rotteler requires d = 2^n, got {d}")
    n = pp[1]
    gr = gr_construct(n)
    teich = gr.teichmuller
    i4 = 1j
    bases = [standard_basis(d)]
    for b in teich:
        B = np.empty((d, d), dtype=complex)
        for vi, v in enumerate(teich):
            r = gr.add(b, gr.scale(2, v))
            B[:, vi] = [i4 ** gr.trace(gr.mul(r, k)) for k in teich]
        bases.append(B / np.sqrt(d))
    return MUBSet(d, bases, "klappenecker_rotteler", {"n": n})


def alltop(d: int) -> MUBSet:
    """Cubic-phase complete set in prime-power dimension d = p^n, p >= 5."""
    pp = prime_power_decomposition(d)
    if pp is None or pp[0] < 5:
        raise ConstructionError(f"alltop requires characteristic p >= 5, got d = {d}")
    p, n = pp
    gf = gf_construct(p, n)
    w = np.exp(2j * np.pi / p)
    bases = [standard_basis(d)]
    for b in gf.elements():
        B = np.empty((d, d), dtype=complex)
        for v in gf.elements():
            col = []
            for k in gf.elements():
                kb = gf.add(k, b)
                e = gf.add(gf.mul(kb, gf.mul(kb, kb)), gf.mul(v, kb))
                col.append(w ** gf.trace(e))
            B[:, v] = col
        bases.append(B / np.sqrt(d))
    return MUBSet(d, bases, "alltop", {"p": p, "n": n})


# -- Heisenberg-Weyl --

def shift_and_phase(d: int):
    """Cyclic shift X |k> = |k+1> and phase Z |k> = w^k |k>."""
    X = np.zeros((d, d), dtype=complex)
    for k in range(d):
        X[(k + 1) % d, k] = 1.0
    Z = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return X, Z


@dataclass
class HWOperatorClass:
    dim: int
    generator_label: str
    members: list  # d commuting unitaries, identity included


def _phase_sorted_eigenbasis(U: np.ndarray) -> np.ndarray:
    evals, vecs = np.linalg.eig(U)
    order = np.argsort(np.angle(evals))
    vecs = vecs[:, order]
    for j in range(vecs.shape[1]):
        vecs[:, j] = canonical_phase(vecs[:, j])
    return vecs


def heisenberg_weyl_classes(p: int):
    """The p+1 maximally commuting classes {Z}, {XZ^b} for prime p, together
    with their joint eigenbases (a complete MU set)."""
    if not is_prime(p):
        raise ConstructionError(f"heisenberg_weyl requires a prime dimension, got {p}")
    X, Z = shift_and_phase(p)
    classes = [HWOperatorClass(p, "Z", [np.linalg.matrix_power(Z, k) for k in range(p)])]
    eigenbases = [standard_basis(p)]
    for b in range(p):
        gen_pow = {}
        members = []
        for k in range(p):
            # representative X^k Z^{bk} without extra phases
            M = np.linalg.matrix_power(X, k) @ np.linalg.matrix_power(Z, (b * k) % p)
            members.append(M)
        classes.append(HWOperatorClass(p, f"X.Z^{b}", members))
        eigenbases.append(_phase_sorted_eigenbasis(X @ np.linalg.matrix_power(Z, b)))
    return classes, eigenbases


def heisenberg_weyl(p: int) -> MUBSet:
    _, eigenbases = heisenberg_weyl_classes(p)
    return MUBSet(p, eigenbases, "heisenberg_weyl", {"p": p})


def construct_complete(method: str, d: int) -> MUBSet:
    """Dispatch a complete-set construction; validates the MU property."""
    builders = {
        "ivanovic": ivanovic,
        "wootters_fields": wootters_fields,
        "klappenecker_rotteler": klappenecker_rotteler,
        "alltop": alltop,
        "heisenberg_weyl": heisenberg_weyl,
    }
    if method not in builders:
        raise InputError(f"unknown method {method!r}; choose from {sorted(builders)}")
    mubs = builders[method](d)
    mubs.validate()
    return mubs


def applicable_methods(d: int):
    """Complete-set methods valid in dimension d."""
    out = []
    pp = prime_power_decomposition(d)
    if pp is None:
        return out
    p, n = pp
    if n == 1 and p != 2:
        out.append("ivanovic")
    if p != 2:
        out.append("wootters_fields")
    if p == 2:
        out.append("klappenecker_rotteler")
    if p >= 5:
        out.append("alltop")
    if n == 1:
        out.append("heisenberg_weyl")
    return out


# -- combining constructions --

def tensor_product_mubs(factor_sets) -> MUBSet:
    """min_i(mu_i) MU bases on the tensor product of the factors' spaces."""
    if not factor_sets:
        raise InputError("need at least one factor MUBSet")
    mu = min(len(s) for s in factor_sets)
    dim = int(np.prod([s.dim for s in factor_sets]))
    bases = [kron_all([s.bases[k] for s in factor_sets]) for k in range(mu)]
    out = MUBSet(dim, bases, "tensor_product", {"factors": [s.dim for s in factor_sets]})
    out.validate()
    return out


def latin_square_mubs(s: int, mols, H) -> MUBSet:
    """mu + 2 maximally entangled MU bases of dimension s^2 from mu MOLS of
    order s and an order-s Hadamard (augmentation squares included here)."""
    H = np.asarray(H, dtype=complex)
    if H.shape != (s, s):
        raise ShapeError(f"Hadamard must be {s}x{s}")
    for i, L in enumerate(mols):
        for j in range(i + 1, len(mols)):
            if not algebra.are_orthogonal_latin(L, mols[j]):
                raise InputError(f"input squares {i} and {j} are not orthogonal")
    h = H * np.sqrt(s)  # unimodular entries
    d = s * s
    rows = np.tile(np.arange(s)[:, None], (1, s))
    cols = np.tile(np.arange(s)[None, :], (s, 1))
    squares = [L.as_array() for L in mols] + [rows, cols]
    bases = []
    for L in squares:
        B = np.zeros((d, d), dtype=complex)
        for j in range(s):
            cells = [(i, k) for i in range(s) for k in range(s) if L[i, k] == j]
            for m in range(s):
                vec = np.zeros(d, dtype=complex)
                for t, (i, k) in enumerate(cells):
                    vec[i * s + k] = h[m, t]
                B[:, j * s + m] = vec / np.sqrt(s)
        bases.append(B)
    out = MUBSet(d, bases, "latin_square", {"s": s, "num_mols": len(mols)})
    out.validate()
    return out


def weighted_design(d: int) -> MUBSet:
    """d+2 orthonormal bases forming a weighted 2-design when d+1 is a prime
    power: the standard basis (weight 1/(d(d+1))) plus d+1 character bases
    (weight 1/((d+1)^2) each)."""
    pp = prime_power_decomposition(d + 1)
    if pp is None:
        raise ConstructionError(f"weighted_design requires d+1 to be a prime power, got d = {d}")
    p, n = pp
    gf = gf_construct(p, n)
    y = gf.generator()
    wp = np.exp(2j * np.pi / p)
    wd = np.exp(2j * np.pi / d)
    powers = [gf.pow(y, k) for k in range(d)]  # runs through all nonzero elements
    bases = [standard_basis(d)]
    for b in gf.elements():
        B = np.empty((d, d), dtype=complex)
        for v in range(d):
            B[:, v] = [wd ** (v * k) * wp ** gf.trace(gf.mul(b, powers[k])) for k in range(d)]
        bases.append(B / np.sqrt(d))
    mu = d + 2
    weights = [1.0 / (d * (d + 1))] + [1.0 / ((mu - 1) * (d + 1))] * (d + 1)
    out = MUBSet(d, bases, "weighted_design", {"d": d, "p": p, "n": n}, weights=weights)
    out.validate(expect_mu=False)
    return out


def smallest_amub_prime(d: int) -> int:
    p = d + 1
    while not (is_prime(p) and p % d == 1):
        p += 1
    return p


def approx_mub(d: int, p: int | None = None):
    """d+1 approximately MU bases plus the overlap report.

    For p ≡ 1 (mod d) uses the mixed multiplicative/additive character sums
    (squared overlaps bounded by sqrt(p)/d); otherwise the quadratic Gauss
    phases exp(2 pi i b k^2 / p) with no such guarantee.
    Returns (MUBSet, max_squared_overlap, bound)."""
    if p is None:
        p = smallest_amub_prime(d)
    if not is_prime(p):
        raise InputError(f"p = {p} is not prime")
    wd = np.exp(2j * np.pi / d)
    wp = np.exp(2j * np.pi / p)
    bases = [standard_basis(d)]
    if p % d == 1:
        g = _primitive_root(p)
        powers = [pow(g, k, p) for k in range(d)]
        for b in range(1, d + 1):
            B = np.empty((d, d), dtype=complex)
            for v in range(d):
                B[:, v] = [wd ** (v * k) * wp ** ((b * powers[k]) % p) for k in range(d)]
            bases.append(B / np.sqrt(d))
    else:
        for b in range(1, d + 1):
            B = np.empty((d, d), dtype=complex)
            for v in range(d):
                B[:, v] = [wp ** ((b * k * k) % p) * wd ** ((v * k) % d) for k in range(d)]
            bases.append(B / np.sqrt(d))
    out = MUBSet(d, bases, "approx", {"d": d, "p": p})
    out.validate(expect_mu=False)
    mx = 0.0
    for i in range(len(bases)):
        for j in range(i + 1, len(bases)):
            mx = max(mx, float((np.abs(bases[i].conj().T @ bases[j]) ** 2).max()))
    return out, mx, np.sqrt(p) / d


def _primitive_root(p: int) -> int:
    phi = p - 1
    factors = set()
    m = phi
    f = 2
    while f * f <= m:
        while m % f == 0:
            factors.add(f)
            m //= f
        f += 1
    if m > 1:
        factors.add(m)
    for g in range(2, p):
        if all(pow(g, phi // q, p) != 1 for q in factors):
            return g
    raise NumericalError(f"no primitive root mod {p}")


# -- d = 6 product families (qubit x qutrit) --

def _qubit_bases():
    z = np.eye(2, dtype=complex)
    x = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    y = np.array([[1, 1], [1j, -1j]], dtype=complex) / np.sqrt(2)
    return {"z": z, "x": x, "y": y}


def _qutrit_bases():
    _, bases = heisenberg_weyl_classes(3)
    return {"z": bases[0], "x": bases[1], "y": bases[2], "w": bases[3]}


def _product_basis(pairs):
    """Columns |a> x |B> for (qubit vector, qutrit vector) column pairs."""
    cols = [np.kron(a, b) for a, b in pairs]
    return np.array(cols).T


def product_family_d6(which: str, params: dict | None = None) -> MUBSet:
    """The exhaustive d = 6 MU product-basis families: pairs P0..P3 and
    triples T0, T1. Free parameters default to pi/5."""
    params = dict(params or {})
    for k, v in params.items():
        if k in ("xi", "eta", "zeta", "chi"):
            if not (0.0 <= v < 2 * np.pi):
                raise DomainError(f"{k} must lie in [0, 2 pi), got {v}")
        elif k in ("sigma", "tau"):
            if not (0.0 < v < np.pi):
                raise DomainError(f"{k} must lie in (0, pi), got {v}")
        else:
            raise InputError(f"unknown parameter {k!r}")
    q2 = _qubit_bases()
    q3 = _qutrit_bases()
    default = np.pi / 5

    def cols_of(B):
        return [B[:, v] for v in range(B.shape[0])]

    def full(a_label, b_label):
        return _product_basis([(u, w) for u in cols_of(q2[a_label]) for w in cols_of(q3[b_label])])

    def split2(a_label, b0_cols, b1_cols):
        a0, a1 = cols_of(q2[a_label])
        return _product_basis([(a0, w) for w in b0_cols] + [(a1, w) for w in b1_cols])

    if which == "P0":
        bases = [full("z", "z"), full("x", "x")]
    elif which == "P1":
        xi = params.get("xi", default)
        eta = params.get("eta", default)
        R = q3["z"] @ np.diag([1.0, np.exp(1j * xi), np.exp(1j * eta)]) @ q3["z"].conj().T
        bases = [full("z", "z"), split2("x", cols_of(q3["x"]), cols_of(R @ q3["x"]))]
    elif which == "P2":
        bases = [split2("z", cols_of(q3["z"]), cols_of(q3["y"])),
                 split2("x", cols_of(q3["x"]), cols_of(q3["w"]))]
    elif which == "P3":
        zeta = params.get("zeta", default)
        chi = params.get("chi", default)
        sigma = params.get("sigma", default)
        tau = params.get("tau", default)
        S = q3["x"] @ np.diag([1.0, np.exp(1j * zeta), np.exp(1j * chi)]) @ q3["x"].conj().T
        first = split2("z", cols_of(q3["z"]), cols_of(S @ q3["z"]))

        def rot(angle):
            return np.array([[1, 1], [np.exp(1j * angle), -np.exp(1j * angle)]], dtype=complex) / np.sqrt(2)

        t0, t1, t2 = cols_of(q3["x"])
        qx, qs, qt = q2["x"], rot(sigma), rot(tau)
        second = _product_basis(
            [(qx[:, 0], t0), (qx[:, 1], t0), (qs[:, 0], t1), (qs[:, 1], t1), (qt[:, 0], t2), (qt[:, 1], t2)]
        )
        bases = [first, second]
    elif which == "T0":
        bases = [full("z", "z"), full("x", "x"), full("y", "y")]
    elif which == "T1":
        bases = [full("z", "z"), full("x", "x"), split2("y", cols_of(q3["y"]), cols_of(q3["w"]))]
    else:
        raise InputError(f"unknown family {which!r}; choose P0..P3, T0, T1")
    out = MUBSet(6, bases, "product_family_d6", {"which": which, **params})
    out.validate()
    return out


def complete_missing_basis(bases, rng: np.random.Generator) -> np.ndarray:
    """Given d MU bases of C^d, derive the unique basis completing them to a
    complete set (orthocomplement of the projector span is a commuting
    algebra; a generic element's eigenbasis is the missing basis)."""
    mats = [np.asarray(B, dtype=complex) for B in bases]
    d = mats[0].shape[0]
    if len(mats) != d:
        raise InputError(f"need exactly d = {d} bases, got {len(mats)}")
    rows = [np.outer(B[:, v], B[:, v].conj()).conj().ravel() for B in mats for v in range(d)]
    rows.append(np.eye(d).ravel().astype(complex))
    A = np.array(rows)
    _, s, Vh = np.linalg.svd(A)
    null = Vh[int(np.sum(s > 1e-10)):].conj()
    if len(null) != d - 1:
        raise NumericalError(f"projector-span complement has dimension {len(null)}, expected {d - 1}")
    herm = []
    for nv in null:
        M = nv.reshape(d, d)
        herm.append((M + M.conj().T) / 2)
        herm.append((1j * M + (1j * M).conj().T) / 2)
    W = sum(c * M for c, M in zip(rng.normal(size=len(herm)), herm))
    _, vecs = np.linalg.eigh(W)
    for j in range(d):
        vecs[:, j] = canonical_phase(vecs[:, j])
    return vecs
