"""Exact arithmetic kernel: prime fields, monomials, sparse polynomials,
graded free modules and matrices of polynomials.

Conventions used throughout the toolkit:

* The coordinate ring is R = F_p[x0..xn], graded by total degree.
* Monomials are exponent tuples of length n+1.  The active order is
  graded reverse lexicographic unless stated otherwise.
* A graded free module is recorded by its list of twists [a1..ar]
  meaning R(a1) + ... + R(ar); the summand R(a) has its generator in
  degree -a, and R(a)_q = R_{q+a}.
* A degree-0 map R(a) -> R(b) is multiplication by a form of degree
  b - a, so the (i, j) entry of a PolyMatrix is homogeneous of degree
  target.twists[i] - source.twists[j].
"""

from functools import lru_cache
from math import comb

import numpy as np

# exponents are packed base PACK for O(1) monomial products on arrays
PACK = 32


class AmbientMismatch(ValueError):
    pass


class DegreeError(ValueError):
    pass


def _is_prime(p):
    if p < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if p % q == 0:
            return p == q
    # deterministic Miller-Rabin, valid far beyond any sane characteristic
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """F_p with exact mod-p arithmetic, default p = 31991."""

    def __init__(self, p=31991):
        p = int(p)
        if not _is_prime(p):
            raise ValueError("characteristic %d is not prime" % p)
        self.p = p
        self._inv_table = None

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_%d" % self.p)
        return pow(a, self.p - 2, self.p)

    def inv_table(self):
        """Vector of inverses, inv_table[a] = a^-1 (index 0 unused)."""
        if self._inv_table is None:
            p = self.p
            t = np.zeros(p, dtype=np.int64)
            t[1] = 1
            for a in range(2, p):
                # p = (p // a) * a + p % a  =>  a^-1 = -(p // a) * (p % a)^-1
                t[a] = (p - (p // a)) * t[p % a] % p
            self._inv_table = t
        return self._inv_table

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return "PrimeField(%d)" % self.p


def grevlex_key(exps):
    """Sort key: larger key = larger monomial in grevlex."""
    return (sum(exps),) + tuple(-e for e in reversed(exps))


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def mono_div(a, b):
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


class AmbientSpace:
    """P^n over F_p with coordinate ring R = F_p[x0..xn].

    Caches graded-piece monomial bases and variable multiplication
    tables; these drive all the degreewise linear algebra downstream.
    Piece bases are ordered by ascending packed key (a fixed
    deterministic order, not grevlex).
    """

    def __init__(self, n, field=None):
        if n < 2:
            raise ValueError("projective dimension must be >= 2")
        self.n = int(n)
        self.field = field if field is not None else PrimeField()
        self.p = self.field.p
        self.names = ["x%d" % i for i in range(n + 1)]
        self._basis_cache = {}
        self._varmul_cache = {}

    @property
    def nvars(self):
        return self.n + 1

    def dim(self, d):
        """dim_k R_d = C(n+d, n)."""
        return comb(self.n + d, self.n) if d >= 0 else 0

    def pack(self, exps):
        key = 0
        for e in reversed(exps):
            key = key * PACK + e
        return key

    def unpack(self, key):
        exps = []
        for _ in range(self.nvars):
            exps.append(int(key % PACK))
            key //= PACK
        return tuple(exps)

    def basis(self, d):
        """(sorted packed keys, exponent rows) of the degree-d monomials."""
        if d < 0:
            return np.zeros(0, dtype=np.int64), np.zeros((0, self.nvars), np.int16)
        if d not in self._basis_cache:
            if d >= PACK:
                raise DegreeError("degree %d exceeds packing bound %d" % (d, PACK))
            exps = _compositions(d, self.nvars)
            arr = np.array(exps, dtype=np.int16).reshape(-1, self.nvars)
            keys = arr.astype(np.int64) @ (PACK ** np.arange(self.nvars, dtype=np.int64))
            order = np.argsort(keys, kind="stable")
            self._basis_cache[d] = (keys[order], arr[order])
        return self._basis_cache[d]

    def index_of(self, exps, d=None):
        if d is None:
            d = sum(exps)
        keys, _ = self.basis(d)
        pos = int(np.searchsorted(keys, self.pack(exps)))
        if pos >= len(keys) or keys[pos] != self.pack(exps):
            raise KeyError("monomial %r not of degree %d" % (exps, d))
        return pos

    def mono_shift(self, d, mono):
        """Index map of multiplication by `mono`: R_d -> R_{d+deg mono}."""
        keys, _ = self.basis(d)
        tkeys, _ = self.basis(d + sum(mono))
        idx = np.searchsorted(tkeys, keys + self.pack(mono))
        return idx.astype(np.int64)

    def var_shifts(self, d):
        """Index maps of multiplication by each variable on R_d."""
        if d not in self._varmul_cache:
            maps = []
            for i in range(self.nvars):
                mono = tuple(1 if j == i else 0 for j in range(self.nvars))
                maps.append(self.mono_shift(d, mono))
            self._varmul_cache[d] = maps
        return self._varmul_cache[d]

    def variable(self, i):
        exps = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Polynomial(self, {exps: 1})

    def one(self):
        return Polynomial(self, {(0,) * self.nvars: 1})

    def zero(self):
        return Polynomial(self, {})

    def poly(self, terms):
        return Polynomial(self, dict(terms))

    def __eq__(self, other):
        return (
            isinstance(other, AmbientSpace)
            and other.n == self.n
            and other.field == self.field
        )

    def __hash__(self):
        return hash(("AmbientSpace", self.n, self.p))

    def __repr__(self):
        return "AmbientSpace(n=%d, p=%d)" % (self.n, self.p)


@lru_cache(maxsize=None)
def _compositions(d, k):
    """All exponent tuples of length k summing to d."""
    if k == 1:
        return [(d,)]
    out = []
    for e in range(d + 1):
        for rest in _compositions(d - e, k - 1):
            out.append((e,) + rest)
    return out


class Polynomial:
    """Sparse multivariate polynomial over F_p.

    Terms live in a dict {exponent tuple: nonzero coefficient}; the
    canonical form (grevlex-descending term list) is produced on
    demand.  Instances are treated as immutable values.
    """

    __slots__ = ("space", "terms")

    def __init__(self, space, terms):
        p = space.p
        clean = {}
        for mono, c in terms.items():
            c %= p
            if c:
                clean[mono] = c
        self.space = space
        self.terms = clean

    # -- structure ---------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def degree(self):
        """Total degree, or -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self):
        degs = {sum(m) for m in self.terms}
        return len(degs) <= 1

    def homogeneous_degree(self):
        degs = {sum(m) for m in self.terms}
        if len(degs) > 1:
            raise DegreeError("polynomial is inhomogeneous")
        return degs.pop() if degs else -1

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    def lead_monomial(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms, key=grevlex_key)

    def lead_coeff(self):
        return self.terms[self.lead_monomial()]

    def monic(self):
        if not self.terms:
            return self
        c = self.space.field.inv(self.lead_coeff())
        return self.scale(c)

    # -- arithmetic --------------------------------------------------------
    def _check(self, other):
        if self.space != other.space:
            raise AmbientMismatch("operands live in different ambient spaces")

    def __add__(self, other):
        self._check(other)
        res = dict(self.terms)
        p = self.space.p
        for m, c in other.terms.items():
            v = (res.get(m, 0) + c) % p
            if v:
                res[m] = v
            elif m in res:
                del res[m]
        out = Polynomial.__new__(Polynomial)
        out.space, out.terms = self.space, res
        return out

    def __neg__(self):
        p = self.space.p
        out = Polynomial.__new__(Polynomial)
        out.space = self.space
        out.terms = {m: p - c for m, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        p = self.space.p
        res = {}
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = mono_mul(m1, m2)
                res[m] = (res.get(m, 0) + c1 * c2) % p
        out = Polynomial.__new__(Polynomial)
        out.space = self.space
        out.terms = {m: c for m, c in res.items() if c}
        return out

    __rmul__ = __mul__

    def scale(self, c):
        c %= self.space.p
        if c == 0:
            return self.space.zero()
        out = Polynomial.__new__(Polynomial)
        out.space = self.space
        out.terms = {m: (v * c) % self.space.p for m, v in self.terms.items()}
        return out

    def shift(self, mono):
        """Multiply by a single monomial."""
        out = Polynomial.__new__(Polynomial)
        out.space = self.space
        out.terms = {mono_mul(m, mono): c for m, c in self.terms.items()}
        return out

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.space == other.space
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.space, tuple(self.sorted_terms())))

    def coefficient(self, mono):
        return self.terms.get(tuple(mono), 0)

    def derivative(self, i):
        p = self.space.p
        res = {}
        for m, c in self.terms.items():
            if m[i]:
                v = c * m[i] % p
                if v:
                    mm = list(m)
                    mm[i] -= 1
                    res[tuple(mm)] = v
        return Polynomial(self.space, res)

    # -- vector conversion -------------------------------------------------
    def to_vector(self, d):
        """Coefficient vector on the degree-d monomial basis."""
        vec = np.zeros(self.space.dim(d), dtype=np.int64)
        for m, c in self.terms.items():
            if sum(m) != d:
                raise DegreeError("term of degree %d in degree-%d piece" % (sum(m), d))
            vec[self.space.index_of(m, d)] = c
        return vec

    @staticmethod
    def from_vector(space, d, vec):
        _, exps = space.basis(d)
        terms = {}
        for i in np.nonzero(np.asarray(vec) % space.p)[0]:
            terms[tuple(int(e) for e in exps[i])] = int(vec[i]) % space.p
        return Polynomial(space, terms)

    # -- text format ---------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = []
            if c != 1 or not any(m):
                factors.append(str(c))
            for i, e in enumerate(m):
                if e == 1:
                    factors.append("x%d" % i)
                elif e > 1:
                    factors.append("x%d^%d" % (i, e))
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return "Poly(%s)" % self


def parse_poly(space, text):
    """Parse the kernel text syntax `c*x0^2*x3 + ...` (with ^, *, +, -)."""
    text = text.replace(" ", "").replace("**", "^")
    if not text:
        raise ValueError("empty polynomial string")
    # split into signed terms
    chunks = []
    sign, start = 1, 0
    if text[0] in "+-":
        sign = -1 if text[0] == "-" else 1
        start = 1
    cur = []
    i = start
    while i <= len(text):
        if i == len(text) or text[i] in "+-":
            chunks.append((sign, "".join(cur)))
            if i < len(text):
                sign = -1 if text[i] == "-" else 1
                cur = []
        else:
            cur.append(text[i])
        i += 1
    p = space.p
    terms = {}
    for sgn, chunk in chunks:
        if not chunk:
            raise ValueError("malformed term in %r" % text)
        coeff = 1
        exps = [0] * space.nvars
        for factor in chunk.split("*"):
            if not factor:
                raise ValueError("malformed term %r" % chunk)
            if factor[0] == "x":
                if "^" in factor:
                    var, _, exp = factor.partition("^")
                else:
                    var, exp = factor, "1"
                idx = int(var[1:])
                if idx >= space.nvars:
                    raise ValueError("variable %s outside ambient P^%d" % (var, space.n))
                exps[idx] += int(exp)
            else:
                if "^" in factor:
                    base, _, exp = factor.partition("^")
                    coeff *= int(base) ** int(exp)
                else:
                    coeff *= int(factor)
        mono = tuple(exps)
        terms[mono] = (terms.get(mono, 0) + sgn * coeff) % p
    return Polynomial(space, terms)


class GradedFreeModule:
    """A free module R(a1) + ... + R(ar), twists in generator order."""

    __slots__ = ("space", "twists")

    def __init__(self, space, twists):
        self.space = space
        self.twists = [int(a) for a in twists]

    @property
    def rank(self):
        return len(self.twists)

    def gen_degrees(self):
        """Degrees of the generators (generator of R(a) lives in degree -a)."""
        return [-a for a in self.twists]

    def twist(self, t):
        return GradedFreeModule(self.space, [a + t for a in self.twists])

    def dual(self, t=0):
        """Hom(self, R(t))."""
        return GradedFreeModule(self.space, [t - a for a in self.twists])

    def dim(self, q):
        """dim of the degree-q piece."""
        return sum(self.space.dim(q + a) for a in self.twists)

    def piece_blocks(self, q):
        """[(offset, component dim)] of the degree-q piece, per component."""
        blocks, off = [], 0
        for a in self.twists:
            d = self.space.dim(q + a)
            blocks.append((off, d))
            off += d
        return blocks

    def c1(self):
        return sum(self.twists)

    def __eq__(self, other):
        return (
            isinstance(other, GradedFreeModule)
            and self.space == other.space
            and self.twists == other.twists
        )

    def __str__(self):
        if not self.twists:
            return "0"
        counts = {}
        for a in self.twists:
            counts[a] = counts.get(a, 0) + 1
        parts = []
        for a in sorted(counts, reverse=True):
            r = counts[a]
            body = "O" if a == 0 else "O(%d)" % a
            parts.append(body if r == 1 else "%d%s" % (r, body))
        return " + ".join(parts)

    def __repr__(self):
        return "GradedFreeModule(%r)" % (self.twists,)


class PolyMatrix:
    """A degree-0 graded map between free modules, stored row-major.

    entries[i][j] : source component j -> target component i, a
    homogeneous polynomial of degree target.twists[i] - source.twists[j]
    (zero entries always allowed).
    """

    __slots__ = ("source", "target", "entries")

    def __init__(self, source, target, entries, check=True):
        self.source = source
        self.target = target
        self.entries = entries
        if check:
            self.audit_degrees()

    @staticmethod
    def zero(source, target):
        z = source.space.zero()
        rows = [[z] * source.rank for _ in range(target.rank)]
        return PolyMatrix(source, target, rows, check=False)

    @staticmethod
    def identity(module):
        one = module.space.one()
        z = module.space.zero()
        rows = [
            [one if i == j else z for j in range(module.rank)]
            for i in range(module.rank)
        ]
        return PolyMatrix(module, module, rows, check=False)

    @staticmethod
    def from_columns(space, target, columns, col_degrees):
        """Columns as lists of polynomials in the target's components."""
        source = GradedFreeModule(space, [-d for d in col_degrees])
        rows = [
            [columns[j][i] for j in range(len(columns))] for i in range(target.rank)
        ]
        return PolyMatrix(source, target, rows)

    @property
    def nrows(self):
        return self.target.rank

    @property
    def ncols(self):
        return self.source.rank

    def entry(self, i, j):
        return self.entries[i][j]

    def column(self, j):
        return [self.entries[i][j] for i in range(self.nrows)]

    def column_degree(self, j):
        return -self.source.twists[j]

    def audit_degrees(self):
        for i in range(self.nrows):
            for j in range(self.ncols):
                e = self.entries[i][j]
                if e.is_zero():
                    continue
                want = self.target.twists[i] - self.source.twists[j]
                if not e.is_homogeneous() or e.homogeneous_degree() != want:
                    raise DegreeError(
                        "entry (%d,%d) has degree %s, expected %d"
                        % (i, j, e.degree(), want)
                    )

    def compose(self, other):
        """self o other (apply other first)."""
        if other.target.twists != self.source.twists:
            raise AmbientMismatch("twist mismatch in composition")
        space = self.source.space
        rows = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = space.zero()
                for k in range(self.ncols):
                    a = self.entries[i][k]
                    b = other.entries[k][j]
                    if a.terms and b.terms:
                        acc = acc + a * b
                row.append(acc)
            rows.append(row)
        return PolyMatrix(other.source, self.target, rows, check=False)

    def is_zero(self):
        return all(e.is_zero() for row in self.entries for e in row)

    def transpose(self, t=0):
        """The dual map Hom(target, R(t)) -> Hom(source, R(t))."""
        rows = [
            [self.entries[i][j] for i in range(self.nrows)] for j in range(self.ncols)
        ]
        return PolyMatrix(self.target.dual(t), self.source.dual(t), rows, check=False)

    def twist(self, t):
        return PolyMatrix(
            self.source.twist(t), self.target.twist(t), self.entries, check=False
        )

    def stack_columns(self, other):
        """[self | other]: same target, concatenated sources."""
        if other.target.twists != self.target.twists:
            raise AmbientMismatch("targets differ")
        src = GradedFreeModule(self.source.space, self.source.twists + other.source.twists)
        rows = [
            self.entries[i] + other.entries[i] for i in range(self.nrows)
        ]
        return PolyMatrix(src, self.target, rows, check=False)

    def piece(self, q):
        """Numpy matrix of the degree-q piece of the map."""
        space = self.source.space
        rows_dim = self.target.dim(q)
        cols_dim = self.source.dim(q)
        A = np.zeros((rows_dim, cols_dim), dtype=np.int64)
        tblocks = self.target.piece_blocks(q)
        sblocks = self.source.piece_blocks(q)
        for j, a in enumerate(self.source.twists):
            coff, cdim = sblocks[j]
            if cdim == 0:
                continue
            cols = np.arange(cdim)
            for i in range(self.nrows):
                e = self.entries[i][j]
                if not e.terms:
                    continue
                roff, rdim = tblocks[i]
                if rdim == 0:
                    continue
                for mono, c in e.terms.items():
                    idx = space.mono_shift(q + a, mono)
                    A[roff + idx, coff + cols] += c
        return A % space.p

    def apply_piece(self, q, M):
        """Degree-q piece applied to coefficient columns M (dim_src x k).

        Cheaper than materializing piece(q) when M is narrow; safe in
        int64 because p^2 times the term count stays far below 2^63.
        """
        space = self.source.space
        p = space.p
        M = np.asarray(M, dtype=np.int64) % p
        out = np.zeros((self.target.dim(q), M.shape[1]), dtype=np.int64)
        tblocks = self.target.piece_blocks(q)
        sblocks = self.source.piece_blocks(q)
        for j, a in enumerate(self.source.twists):
            coff, cdim = sblocks[j]
            if cdim == 0:
                continue
            block = M[coff : coff + cdim]
            for i in range(self.nrows):
                e = self.entries[i][j]
                if not e.terms:
                    continue
                roff, _ = tblocks[i]
                for mono, c in e.terms.items():
                    idx = space.mono_shift(q + a, mono)
                    out[roff + idx] += c * block
        return out % p

    def minors(self, size):
        """All size x size minors, row-major in combination order."""
        from itertools import combinations

        if size < 1 or size > min(self.nrows, self.ncols):
            raise DegreeError("minor size %d out of range" % size)
        space = self.source.space
        memo = {}

        def det(rows, cols):
            if len(rows) == 1:
                return self.entries[rows[0]][cols[0]]
            key = (rows, cols)
            if key in memo:
                return memo[key]
            acc = space.zero()
            r0 = rows[0]
            rest = rows[1:]
            for k, c in enumerate(cols):
                e = self.entries[r0][c]
                if e.terms:
                    sub = det(rest, cols[:k] + cols[k + 1 :])
                    term = e * sub
                    acc = acc + (term if k % 2 == 0 else -term)
            memo[key] = acc
            return acc

        out = []
        for rows in combinations(range(self.nrows), size):
            for cols in combinations(range(self.ncols), size):
                out.append(det(rows, cols))
        return out

    def __str__(self):
        lines = ["%s <- %s" % (self.target, self.source)]
        for row in self.entries:
            lines.append("[" + ", ".join(str(e) for e in row) + "]")
        return "\n".join(lines)

    def __repr__(self):
        return "PolyMatrix(%dx%d)" % (self.nrows, self.ncols)


def poly_arith(a, b, op):
    """Dispatcher for the text-level kernel operations add / mul."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError("unknown op %r" % op)
