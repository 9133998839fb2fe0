"""Code design criteria: exponent targets for codebook distances and a checker.

A criterion demands that a codeword-difference quantity q (a squared distance,
or the smallest nonzero eigenvalue of a two-column difference Gram matrix)
satisfies q >= snr^(-x + eps). The target x is the largest aggregate rate at
which the term governing that criterion still has exponent >= d*, the
scheme's overall exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import dmt
from .errors import ConsistencyError, InvalidParameterError, ResourceError, ValidationError
from .model import PowerSplit, RatePair, SplitVector

SCHEMES = ("jd", "jd_very_strong", "hk", "mac", "strip")
MIN_BLOCK = {"jd": 2, "jd_very_strong": 2, "hk": 2, "mac": 2, "strip": 1}
RANK_TOL = 1e-9
X_HUGE = 64.0  # beyond any exponent in scope; a term still >= d* here is vacuous


@dataclass
class Codebook:
    n: int
    words: np.ndarray  # (count, n) complex
    multiplexing_rate: float
    snr: float

    def __post_init__(self):
        self.words = np.atleast_2d(np.asarray(self.words, dtype=complex))
        if self.n < 1 or self.words.shape[1] != self.n:
            raise InvalidParameterError(f"words must have length n={self.n}")
        if not self.snr > 0:
            raise InvalidParameterError("snr must be positive")
        norms = np.sum(np.abs(self.words) ** 2, axis=1)
        if np.any(norms > self.n * (1 + 1e-9)):
            raise ValidationError("codeword violates the power constraint |x|^2 <= n")

    @property
    def nominal_size(self) -> int:
        return max(1, round(self.snr ** (self.n * self.multiplexing_rate)))

    def __len__(self):
        return self.words.shape[0]


@dataclass
class SuperpositionCodebook:
    private: Codebook
    public: Codebook
    p: float

    def __post_init__(self):
        u, w = self.private, self.public
        if u.n != w.n or u.snr != w.snr:
            raise InvalidParameterError("private and public books must share n and snr")
        n, snr = u.n, u.snr
        fl = snr ** (1 - self.p)
        if np.any(np.linalg.norm(u.words, axis=1) > np.sqrt(n / fl) * (1 + 1e-9)):
            raise ValidationError("private word exceeds its power constraint")
        if np.any(np.linalg.norm(w.words, axis=1) > np.sqrt(n) * (1 - np.sqrt(1 / fl)) * (1 + 1e-9) + 1e-12):
            raise ValidationError("public word exceeds its power constraint")

    def combined(self) -> np.ndarray:
        u, w = self.private.words, self.public.words
        return (u[:, None, :] + w[None, :, :]).reshape(-1, u.shape[1])


@dataclass(frozen=True)
class Threshold:
    label: str
    x: float  # bound is snr^(-x + epsilon); inf means vacuous
    epsilon: float
    books: tuple  # one name: distance criterion; two names: Gram criterion


@dataclass
class DesignTargets:
    scheme: str
    thresholds: list
    d_star: float
    notes: list = field(default_factory=list)


# --- scalar solve ----------------------------------------------------------

def solve_largest(term, d_star: float, x0: float) -> float:
    """sup{x >= x0 : term(x) >= d*} for a nonincreasing term.

    Equals the largest solution of term(x) = d* whenever term is continuous
    there; +inf when the term never drops below d*.
    """
    f = lambda x: float(term(x))  # noqa: E731
    if f(x0) < d_star - 1e-12:
        raise ConsistencyError(f"term({x0}) = {f(x0)} below the minimum {d_star}")
    if f(X_HUGE) >= d_star:
        return math.inf
    lo, hi = x0, X_HUGE
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if f(mid) >= d_star:
            lo = mid
        else:
            hi = mid
    return lo


def _jd_pair_term(alpha):
    return lambda x: dmt.pos(1 - x) + dmt.pos(alpha - x)


def _per_eps(epsilon, label):
    return epsilon.get(label, 0.0) if isinstance(epsilon, dict) else float(epsilon)


def design_targets(scheme: str, r: RatePair, s: SplitVector | None = None, p: PowerSplit | None = None,
                   alpha: float = 0.0, epsilon=0.0) -> DesignTargets:
    """Exponent targets x for each code criterion of `scheme` at rates r.

    epsilon is a float applied to every criterion or a dict label -> epsilon.
    """
    if scheme not in SCHEMES:
        raise InvalidParameterError(f"unknown scheme {scheme!r}")
    r1, r2 = r
    out = []
    notes = []

    def add(label, x, books):
        out.append(Threshold(label, x, _per_eps(epsilon, label), books))

    if scheme in ("jd_very_strong", "strip"):
        d_star = dmt.d_very_strong_outer(r)
        add("min_distance[x1]", r1, ("x1",))
        add("min_distance[x2]", r2, ("x2",))
        if scheme == "jd_very_strong":
            add("min_gram_eig[x1,x2]", r1 + r2, ("x1", "x2"))
        return DesignTargets(scheme, out, d_star, notes)

    if scheme == "jd":
        d_star = dmt.d_jd(r, alpha).overall
        single = lambda x: dmt.pos(1 - x)  # noqa: E731
        add("min_distance[x1]", solve_largest(single, d_star, r1), ("x1",))
        add("min_distance[x2]", solve_largest(single, d_star, r2), ("x2",))
        add("min_gram_eig[x1,x2]", solve_largest(_jd_pair_term(alpha), d_star, r1 + r2), ("x1", "x2"))
        return DesignTargets(scheme, out, d_star, notes)

    if scheme == "mac":
        d_star = dmt.d_mac(r, alpha).overall
        single = lambda x: dmt.pos(1 - x)  # noqa: E731
        cross = lambda x: dmt.pos(alpha - x)  # noqa: E731
        for i, ri in ((1, r1), (2, r2)):
            # own-receiver and other-receiver terms both constrain x_i; keep the stricter
            x = min(solve_largest(single, d_star, ri), solve_largest(cross, d_star, ri))
            add(f"min_distance[x{i}]", x, (f"x{i}",))
        add("min_gram_eig[x1,x2]", solve_largest(_jd_pair_term(alpha), d_star, r1 + r2), ("x1", "x2"))
        return DesignTargets(scheme, out, d_star, notes)

    # hk
    if s is None or p is None:
        raise InvalidParameterError("hk targets need s and p")
    s.check(r)
    d_star = dmt.d_hk_given(r, s, p, alpha)
    terms = dmt.d_hk_terms(r, s, p, alpha).as_dict()
    rr, ss, pp = (r1, r2), (s.s1, s.s2), (p.p1, p.p2)
    for i in (1, 2):
        ii, jj = i - 1, 2 - i
        j = 3 - i
        ri, si, pi = rr[ii], ss[ii], pp[ii]
        ti, tj = ri - si, rr[jj] - ss[jj]
        pj = pp[jj]
        priv_j = abs(ss[jj]) > dmt.BTOL
        single = lambda lead: (lambda x: dmt.hk_single(x, lead, pj, alpha, priv_j))  # noqa: E731
        joint = lambda lead: (lambda x: dmt.hk_joint(x, lead, pj, alpha, priv_j))  # noqa: E731
        spec = [
            (1, f"min_distance[u{i}]", single(pi), si, (f"u{i}",)),
            (2, f"min_distance[w{i}]", single(1.0), ti, (f"w{i}",)),
            (3, f"min_distance[x{i}]", single(1.0), ri, (f"x{i}",)),
            (4, f"min_gram_eig[u{i},w{j}]", joint(pi), si + tj, (f"u{i}", f"w{j}")),
            (5, f"min_gram_eig[w{i},w{j}]", joint(1.0), ti + tj, (f"w{i}", f"w{j}")),
            (6, f"min_gram_eig[x{i},w{j}]", joint(1.0), ri + tj, (f"x{i}", f"w{j}")),
        ]
        for l, label, term, x0, books in spec:
            if math.isinf(terms[f"d{i}{l}"]):
                continue  # zero-rate event: no criterion
            add(label, solve_largest(term, d_star, x0), books)
    if any(math.isinf(v) for v in terms.values()):
        notes.append("zero-rate convention: criteria of empty events omitted")
    return DesignTargets("hk", out, d_star, notes)


# --- achieved quantities ---------------------------------------------------

def _pair_diffs(words: np.ndarray) -> np.ndarray:
    i, j = np.triu_indices(words.shape[0], k=1)
    return words[i] - words[j]


def _min_dist_diffs(d: np.ndarray) -> float:
    return float(np.min(np.sum(np.abs(d) ** 2, axis=1)))


def min_sq_distance(cb: Codebook) -> float:
    """Smallest squared distance between two distinct codewords."""
    if len(cb) < 2:
        raise InvalidParameterError("need at least 2 codewords")
    return _min_dist_diffs(_pair_diffs(cb.words))


def _min_gram_diffs(da: np.ndarray, db: np.ndarray, block: int = 512) -> float:
    """Min over difference pairs (a, b) of the smallest nonzero eigenvalue of [a b]^H [a b]."""
    na = np.sum(np.abs(da) ** 2, axis=1)
    nb = np.sum(np.abs(db) ** 2, axis=1)
    da, na = da[na > 0], na[na > 0]
    db, nb = db[nb > 0], nb[nb > 0]
    if not len(da) or not len(db):
        return 0.0
    n = da.shape[1]
    best = math.inf
    for k in range(0, len(da), block):
        a, an = da[k:k + block], na[k:k + block]
        tr = an[:, None] + nb[None, :]
        # determinant by the Lagrange identity: sum over k<l of |a_k b_l - a_l b_k|^2, free of cancellation
        det = np.zeros_like(tr)
        for p in range(n):
            for q in range(p + 1, n):
                det += np.abs(np.outer(a[:, p], db[:, q]) - np.outer(a[:, q], db[:, p])) ** 2
        disc = np.sqrt(np.maximum(tr * tr - 4 * det, 0.0))
        lmax = 0.5 * (tr + disc)
        lmin = det / lmax
        smallest = np.where(lmin <= RANK_TOL * lmax, lmax, lmin)
        best = min(best, float(smallest.min()))
    return best


def min_pair_gram_eig(cbA: Codebook, cbB: Codebook) -> float:
    """Smallest nonzero eigenvalue of [dA dB]^H [dA dB] over nonzero differences dA, dB."""
    if cbA.n != cbB.n:
        raise InvalidParameterError("codebooks have different block lengths")
    if len(cbA) < 2 or len(cbB) < 2:
        raise InvalidParameterError("need at least 2 codewords per codebook")
    return _min_gram_diffs(_pair_diffs(cbA.words), _pair_diffs(cbB.words))


# --- checking --------------------------------------------------------------

@dataclass(frozen=True)
class CriterionResult:
    label: str
    achieved: float
    threshold: float
    x: float
    epsilon: float
    passed: bool
    margin_db: float


@dataclass
class CheckReport:
    scheme: str
    snr: float
    results: list
    notes: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.results)

    def lines(self) -> list:
        out = [f"scheme={self.scheme} snr={self.snr:.6g}"]
        out += [f"note: {n}" for n in self.notes]
        for c in self.results:
            out.append(f"{'PASS' if c.passed else 'FAIL'} {c.label} achieved={c.achieved:.6g} "
                       f"threshold={c.threshold:.6g} x={c.x:.6g} eps={c.epsilon:.6g} margin_db={c.margin_db:.3f}")
        return out


def _difference_sets(scheme, codebooks):
    """Difference vectors per book name, plus the common snr and block length."""
    if scheme == "hk":
        if len(codebooks) != 2 or not all(isinstance(c, SuperpositionCodebook) for c in codebooks):
            raise InvalidParameterError("hk needs two superposition codebooks")
        snr, n = codebooks[0].private.snr, codebooks[0].private.n
        diffs = {}
        for i, sc in enumerate(codebooks, start=1):
            if sc.private.snr != snr or sc.private.n != n:
                raise InvalidParameterError("codebooks must share snr and n")
            diffs[f"u{i}"] = np.sqrt(snr ** (1 - sc.p)) * _pair_diffs(sc.private.words)
            diffs[f"w{i}"] = _pair_diffs(sc.public.words)
            diffs[f"x{i}"] = _pair_diffs(sc.combined())
        return diffs, snr, n
    if len(codebooks) != 2 or not all(isinstance(c, Codebook) for c in codebooks):
        raise InvalidParameterError(f"{scheme} needs two plain codebooks")
    a, b = codebooks
    if a.snr != b.snr or a.n != b.n:
        raise InvalidParameterError("codebooks must share snr and n")
    return {"x1": _pair_diffs(a.words), "x2": _pair_diffs(b.words)}, a.snr, a.n


def check_criteria(scheme: str, codebooks, targets: DesignTargets) -> CheckReport:
    """Compare achieved distances and Gram eigenvalues with snr^(-x + eps)."""
    if targets.scheme != scheme:
        raise InvalidParameterError(f"targets are for {targets.scheme}, not {scheme}")
    diffs, snr, n = _difference_sets(scheme, codebooks)
    if n < MIN_BLOCK[scheme]:
        raise InvalidParameterError(f"{scheme} criteria need block length >= {MIN_BLOCK[scheme]}, got {n}")
    results = []
    for t in targets.thresholds:
        ds = [diffs[b] for b in t.books]
        if any(len(d) == 0 for d in ds):
            raise InvalidParameterError(f"{t.label}: codebook with fewer than 2 words")
        if len(ds) == 1:
            achieved = _min_dist_diffs(ds[0])
        else:
            achieved = _min_gram_diffs(ds[0], ds[1])
        thr = 0.0 if math.isinf(t.x) else snr ** (-t.x + t.epsilon)
        ok = achieved > 0 and achieved >= thr
        if achieved <= 0:
            margin = -math.inf
        elif thr == 0:
            margin = math.inf
        else:
            margin = 10 * math.log10(achieved / thr)
        results.append(CriterionResult(t.label, achieved, thr, t.x, t.epsilon, ok, margin))
    return CheckReport(scheme, snr, results, list(targets.notes))


def operating_point_note(r: RatePair, s: SplitVector, p: PowerSplit, alpha: float, step: float = 1 / 24):
    """'non-optimal operating point' when (s, p) is beaten by the HK grid optimum."""
    from .optimize import GridSpec, optimize_hk

    best = optimize_hk(r, alpha, GridSpec(step)).value
    if dmt.d_hk_given(r, s, p, alpha) < best - 1e-9:
        return f"non-optimal operating point (grid optimum {best:.6g})"
    return None


# --- generation and files --------------------------------------------------

def _size(snr, n, rate, cap):
    if rate <= dmt.BTOL:
        return 1
    m = round(snr ** (n * rate))
    if m > cap:
        raise ResourceError(f"codebook size {m} exceeds cap {cap}")
    return max(m, 1)


def _gaussian_book(rng, m, n, var, bound):
    w = np.sqrt(var / 2) * (rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n)))
    norm = np.linalg.norm(w, axis=1)
    over = norm > bound
    w[over] *= (bound / norm[over])[:, None]
    return w


def gen_superposition_codebook(n: int, s: float, t: float, p: float, snr: float, seed: int,
                               cap: int = 4096) -> SuperpositionCodebook:
    """Random Gaussian private/public books; rate-0 layers hold the single zero word."""
    if n < 2:
        raise InvalidParameterError("superposition codebooks need n >= 2")
    if not 0 <= p < 1 or s < 0 or t < 0 or not snr > 1:
        raise InvalidParameterError("need 0 <= p < 1, s, t >= 0, snr > 1")
    mu, mw = _size(snr, n, s, cap), _size(snr, n, t, cap)
    rng = np.random.default_rng(seed)
    fl = snr ** (1 - p)
    u_bound = np.sqrt(n / fl)
    w_bound = np.sqrt(n) * (1 - np.sqrt(1 / fl))
    u = np.zeros((1, n), complex) if s <= dmt.BTOL else _gaussian_book(rng, mu, n, 1 / fl, u_bound)
    w = np.zeros((1, n), complex) if t <= dmt.BTOL else _gaussian_book(rng, mw, n, 1.0, w_bound)
    return SuperpositionCodebook(Codebook(n, u, s, snr), Codebook(n, w, t, snr), p)


class CodebookFormatError(InvalidParameterError):
    pass


def read_codebook(path) -> tuple[Codebook, float | None]:
    """Parse a codebook file; returns the book and its p header (None if absent)."""
    lines = [ln.strip() for ln in Path(path).read_text().splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise CodebookFormatError(f"{path}: empty file")
    head = {}
    for tok in lines[0].split():
        if "=" not in tok:
            raise CodebookFormatError(f"{path}: bad header token {tok!r}")
        k, v = tok.split("=", 1)
        head[k] = v
    try:
        n = int(head["n"])
        snr = float(head["snr"])
        rate = float(head["rate"])
        p = float(head["p"]) if "p" in head else None
    except (KeyError, ValueError) as e:
        raise CodebookFormatError(f"{path}: header needs n=<int> snr=<real> rate=<real> ({e})") from None
    words = []
    for k, ln in enumerate(lines[1:], start=2):
        try:
            v = np.array(ln.split(), dtype=float)
        except ValueError:
            raise CodebookFormatError(f"{path}:{k}: non-numeric entry") from None
        if v.size != 2 * n:
            raise CodebookFormatError(f"{path}:{k}: expected {2 * n} reals, got {v.size}")
        words.append(v[0::2] + 1j * v[1::2])
    if not words:
        raise CodebookFormatError(f"{path}: no codewords")
    return Codebook(n, np.array(words), rate, snr), p


def write_codebook(path, cb: Codebook, p: float | None = None) -> None:
    head = f"n={cb.n} snr={cb.snr!r} rate={cb.multiplexing_rate!r}"
    if p is not None:
        head += f" p={p!r}"
    rows = [head]
    for w in cb.words:
        inter = np.empty(2 * cb.n)
        inter[0::2], inter[1::2] = w.real, w.imag
        rows.append(" ".join(repr(float(v)) for v in inter))
    Path(path).write_text("\n".join(rows) + "\n")


def psk_codebook(m: int, snr: float, rate: float = 0.0) -> Codebook:
    """Scalar unit-circle PSK with m points."""
    return Codebook(1, np.exp(2j * np.pi * np.arange(m) / m)[:, None], rate, snr)


__all__ = [
    "Codebook", "SuperpositionCodebook", "DesignTargets", "Threshold", "CheckReport", "CriterionResult",
    "design_targets", "solve_largest", "min_sq_distance", "min_pair_gram_eig", "check_criteria",
    "gen_superposition_codebook", "read_codebook", "write_codebook", "psk_codebook", "operating_point_note",
    "CodebookFormatError",
]
