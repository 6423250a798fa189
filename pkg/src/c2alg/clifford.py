"""Finite-dimensional graded Clifford-type algebras with Real and *-structures.

Blades are bitmasks over generator indices 1..p+q; coefficients are either
exact (GaussianRational) or numeric (complex). The same multiplication engine
serves the complexified Clifford algebras CCl(p,q) (all generators square to
+1, Real structure fixes the first p generators and negates the last q), the
Kasparov-style presentation C_{p,q} (last q generators square to -1), and the
interleaved model of CCl(n,n) used by the unitary-group lifts.
"""

from __future__ import annotations

import re as _re
from fractions import Fraction
from functools import lru_cache

from .scalars import GaussianRational, MultiPoly

MAX_GENERATORS = 16


def _reorder_sign(a: int, b: int) -> int:
    """Sign from sorting the concatenated generator words of blades a, b."""
    a >>= 1
    swaps = 0
    while a:
        swaps += (a & b).bit_count()
        a >>= 1
    return -1 if swaps & 1 else 1


class CliffordAlgebra:
    """Generator data for one algebra: squares, Real signs, *-signs per index."""

    def __init__(self, p, q, squares, bar_signs, star_signs, label, convention="blocked"):
        dim = p + q
        if dim > MAX_GENERATORS:
            raise ValueError(f"at most {MAX_GENERATORS} generators supported")
        if p < 0 or q < 0:
            raise ValueError("negative signature")
        self.p = p
        self.q = q
        self.dim = dim
        self.squares = tuple(squares)
        self.bar_signs = tuple(bar_signs)
        self.star_signs = tuple(star_signs)
        self.label = label
        self.convention = convention
        self._blade_cache: dict[int, tuple[int, int]] = {}
        # masks of generators that pick up a sign under the listed structure
        self.neg_square_mask = sum(1 << i for i, s in enumerate(self.squares) if s < 0)
        self.bar_neg_mask = sum(1 << i for i, s in enumerate(self.bar_signs) if s < 0)
        self.star_neg_mask = sum(1 << i for i, s in enumerate(self.star_signs) if s < 0)

    def __repr__(self):
        return f"<{self.label}>"

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return id(self)

    def blade_product(self, m1: int, m2: int) -> tuple[int, int]:
        """(sign, mask) of the product of basis blades m1 * m2."""
        key = (m1 << self.dim) | m2
        hit = self._blade_cache.get(key)
        if hit is not None:
            return hit
        sign = _reorder_sign(m1, m2)
        common = m1 & m2
        if common & self.neg_square_mask and (common & self.neg_square_mask).bit_count() & 1:
            sign = -sign
        result = (sign, m1 ^ m2)
        self._blade_cache[key] = result
        return result

    # -- constructors for elements -------------------------------------------------

    def zero(self) -> "Multivector":
        return Multivector(self, {})

    def scalar(self, c) -> "Multivector":
        c = self.coerce_coeff(c)
        return Multivector(self, {0: c} if c else {})

    def generator(self, index: int) -> "Multivector":
        """Generator e_index, 1-based."""
        if not 1 <= index <= self.dim:
            raise ValueError(f"generator index {index} out of range 1..{self.dim}")
        return Multivector(self, {1 << (index - 1): GaussianRational.ONE})

    def blade(self, indices, coeff=1) -> "Multivector":
        """Product of generators in the given order, times coeff."""
        out = self.scalar(coeff)
        for i in indices:
            out = out * self.generator(i)
        return out

    def from_terms(self, terms: dict) -> "Multivector":
        return Multivector(self, {m: c for m, c in terms.items() if c})

    def vector(self, coeffs) -> "Multivector":
        """Grade-1 element with the given coefficient list."""
        coeffs = list(coeffs)
        if len(coeffs) != self.dim:
            raise ValueError("coefficient count must equal the generator count")
        terms = {}
        for i, c in enumerate(coeffs):
            c = self.coerce_coeff(c)
            if c:
                terms[1 << i] = c
        return Multivector(self, terms)

    @staticmethod
    def coerce_coeff(c):
        if isinstance(c, GaussianRational):
            return c
        if isinstance(c, (int, Fraction)):
            return GaussianRational(c)
        if isinstance(c, (float, complex)):
            return complex(c)
        raise TypeError(f"unsupported coefficient type {type(c).__name__}")

    def parse(self, text: str) -> "Multivector":
        return parse_multivector(text, self)


@lru_cache(maxsize=None)
def ccl(p: int, q: int) -> CliffordAlgebra:
    """CCl(p,q): all squares +1; bar fixes v_1..v_p and negates w_1..w_q."""
    return CliffordAlgebra(
        p, q,
        squares=(1,) * (p + q),
        bar_signs=(1,) * p + (-1,) * q,
        star_signs=(1,) * (p + q),
        label=f"CCl({p},{q})",
    )


@lru_cache(maxsize=None)
def kasparov(p: int, q: int) -> CliffordAlgebra:
    """Kasparov presentation C_{p,q}: eps_i^2 = 1, e_j^2 = -1, bar trivial, e_j* = -e_j."""
    return CliffordAlgebra(
        p, q,
        squares=(1,) * p + (-1,) * q,
        bar_signs=(1,) * (p + q),
        star_signs=(1,) * p + (-1,) * q,
        label=f"C_({p},{q})",
    )


@lru_cache(maxsize=None)
def ccl_interleaved(n: int) -> CliffordAlgebra:
    """CCl(n,n) in the interleaved basis: odd indices trivial, even indices sign."""
    bar = tuple(1 if i % 2 == 0 else -1 for i in range(2 * n))
    return CliffordAlgebra(
        n, n,
        squares=(1,) * (2 * n),
        bar_signs=bar,
        star_signs=(1,) * (2 * n),
        label=f"CCl({n},{n})-interleaved",
        convention="interleaved",
    )


def blocked_to_interleaved_perm(n: int) -> list[int]:
    """1-based generator permutation: blocked CCl(n,n) index -> interleaved index."""
    perm = [0] * (2 * n + 1)
    for i in range(1, n + 1):
        perm[i] = 2 * i - 1        # trivial generator v_i
        perm[n + i] = 2 * i        # sign generator w_i
    return perm


def interleaved_to_blocked_perm(n: int) -> list[int]:
    fwd = blocked_to_interleaved_perm(n)
    inv = [0] * (2 * n + 1)
    for i in range(1, 2 * n + 1):
        inv[fwd[i]] = i
    return inv


def reindex(mv: "Multivector", perm: list[int], target: CliffordAlgebra) -> "Multivector":
    """Relabel generators along a 1-based permutation (an algebra map when the
    permuted structure constants agree)."""
    if mv.algebra.dim != target.dim:
        raise ValueError("dimension mismatch")
    out: dict = {}
    for mask, coeff in mv.terms.items():
        indices = [perm[i + 1] for i in range(mv.algebra.dim) if mask & (1 << i)]
        sign = 1
        # insertion-sort parity of the relabeled word
        seq = []
        for idx in indices:
            pos = len(seq)
            while pos and seq[pos - 1] > idx:
                pos -= 1
            sign *= (-1) ** (len(seq) - pos)
            seq.insert(pos, idx)
        new_mask = 0
        for idx in seq:
            new_mask |= 1 << (idx - 1)
        c = coeff if sign > 0 else -coeff
        acc = out.get(new_mask)
        out[new_mask] = c if acc is None else acc + c
    return Multivector(target, {m: c for m, c in out.items() if c})


class Multivector:
    """Sparse graded algebra element: blade mask -> coefficient.

    Coefficients are uniformly exact (GaussianRational) or numeric (complex);
    the two kinds never mix inside one element.
    """

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: CliffordAlgebra, terms: dict):
        self.algebra = algebra
        self.terms = terms

    @property
    def exact(self) -> bool:
        for c in self.terms.values():
            return isinstance(c, GaussianRational)
        return True

    def _check(self, other: "Multivector"):
        if self.algebra is not other.algebra:
            raise ValueError(
                f"signature mismatch: {self.algebra.label} vs {other.algebra.label}")

    @staticmethod
    def _align(a: "Multivector", b: "Multivector"):
        """Float contagion: an exact operand converts when paired with numeric data."""
        if a.terms and b.terms and a.exact != b.exact:
            return a.to_numeric(), b.to_numeric()
        return a, b

    def __add__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational, float, complex)):
            other = self.algebra.scalar(other)
        self._check(other)
        self, other = Multivector._align(self, other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            acc = out.get(m)
            s = c if acc is None else acc + c
            if s:
                out[m] = s
            elif acc is not None:
                del out[m]
        return Multivector(self.algebra, out)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational, float, complex)):
            other = self.algebra.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Multivector(self.algebra, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational, float, complex)):
            return self.scale(other)
        self._check(other)
        self, other = Multivector._align(self, other)
        blade_product = self.algebra.blade_product
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                sign, mask = blade_product(m1, m2)
                c = c1 * c2
                if sign < 0:
                    c = -c
                acc = out.get(mask)
                out[mask] = c if acc is None else acc + c
        return Multivector(self.algebra, {m: c for m, c in out.items() if c})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational, float, complex)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c) -> "Multivector":
        c = self.algebra.coerce_coeff(c)
        if not c:
            return self.algebra.zero()
        mv = self
        if mv.terms and isinstance(c, complex) != (not mv.exact):
            if isinstance(c, complex):
                mv = mv.to_numeric()
            else:
                c = complex(c)
        return Multivector(mv.algebra, {m: k * c for m, k in mv.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational, float, complex)):
            other = self.algebra.scalar(other)
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def coeff(self, mask: int):
        c = self.terms.get(mask)
        if c is None:
            return GaussianRational.ZERO if self.exact else 0j
        return c

    def grades(self) -> set:
        return {m.bit_count() for m in self.terms}

    def parity(self):
        """0 for even, 1 for odd, None for mixed or zero."""
        gs = {g & 1 for g in self.grades()}
        if len(gs) == 1:
            return gs.pop()
        return None

    def grade_part(self, k: int) -> "Multivector":
        return Multivector(self.algebra,
                           {m: c for m, c in self.terms.items() if m.bit_count() == k})

    def scalar_part(self):
        return self.coeff(0)

    def max_grade(self) -> int:
        return max((m.bit_count() for m in self.terms), default=0)

    def bar(self) -> "Multivector":
        """Real structure: conjugate coefficients, sign per negated generator."""
        neg = self.algebra.bar_neg_mask
        out = {}
        for m, c in self.terms.items():
            c = c.conjugate()
            if (m & neg).bit_count() & 1:
                c = -c
            out[m] = c
        return Multivector(self.algebra, out)

    def star(self) -> "Multivector":
        """*-structure: conjugate-linear anti-involution (blade reversal)."""
        neg = self.algebra.star_neg_mask
        out = {}
        for m, c in self.terms.items():
            c = c.conjugate()
            k = m.bit_count()
            if (k * (k - 1) // 2) & 1:
                c = -c
            if (m & neg).bit_count() & 1:
                c = -c
            out[m] = c
        return Multivector(self.algebra, out)

    def is_real(self, tol: float = 0.0) -> bool:
        """All coefficients real (exactly, or within tol for numeric data)."""
        if self.exact:
            return all(c.is_real for c in self.terms.values())
        return all(abs(c.imag) <= tol for c in self.terms.values())

    def to_numeric(self) -> "Multivector":
        if not self.exact:
            return self
        return Multivector(self.algebra, {m: complex(c) for m, c in self.terms.items()})

    def prune(self, tol: float) -> "Multivector":
        if self.exact:
            return self
        return Multivector(self.algebra,
                           {m: c for m, c in self.terms.items() if abs(c) > tol})

    def max_abs(self) -> float:
        if self.exact:
            return max((float(abs(complex(c))) for c in self.terms.values()), default=0.0)
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def max_diff(self, other: "Multivector") -> float:
        """Max absolute coefficient difference (numeric comparison)."""
        self._check(other)
        masks = set(self.terms) | set(other.terms)
        diff = 0.0
        for m in masks:
            a = self.terms.get(m, 0)
            b = other.terms.get(m, 0)
            d = abs(complex(a) - complex(b))
            if d > diff:
                diff = d
        return diff

    def __str__(self):
        return format_multivector(self)

    def __repr__(self):
        return f"Multivector({self.algebra.label}: {format_multivector(self)})"

    def serialized_terms(self) -> list:
        """Sorted (mask, [re, im]) pairs; exact parts as "p/q" strings."""
        out = []
        for m in sorted(self.terms):
            c = self.terms[m]
            if isinstance(c, GaussianRational):
                out.append([m, [f"{c.re.numerator}/{c.re.denominator}",
                                f"{c.im.numerator}/{c.im.denominator}"]])
            else:
                out.append([m, [c.real, c.imag]])
        return out


def vector_norm_sq(v: Multivector) -> Fraction:
    """Squared Euclidean norm of a real-rational grade-1 element.

    Equals the scalar part of v*v since every generator squares to +1.
    """
    if v.terms and v.grades() != {1}:
        raise ValueError("input must be a pure grade-1 element")
    total = Fraction(0)
    for _, c in v.terms.items():
        if not isinstance(c, GaussianRational) or not c.is_real:
            raise ValueError("input must have real rational coefficients")
        total += c.re * c.re
    return total


# -- graded tensor decomposition ---------------------------------------------------


class TensorElement:
    """Element of a graded tensor product of two blade algebras.

    Terms map (mask1, mask2) to coefficients; the product obeys the Koszul
    rule (a (x) b)(c (x) d) = (-1)^{|b||c|} ac (x) bd.
    """

    __slots__ = ("alg1", "alg2", "terms")

    def __init__(self, alg1: CliffordAlgebra, alg2: CliffordAlgebra, terms: dict):
        self.alg1 = alg1
        self.alg2 = alg2
        self.terms = {k: c for k, c in terms.items() if c}

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            acc = out.get(k)
            s = c if acc is None else acc + c
            if s:
                out[k] = s
            elif acc is not None:
                del out[k]
        return TensorElement(self.alg1, self.alg2, out)

    def __neg__(self):
        return TensorElement(self.alg1, self.alg2, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out: dict = {}
        bp1 = self.alg1.blade_product
        bp2 = self.alg2.blade_product
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                s1, m1 = bp1(a1, a2)
                s2, m2 = bp2(b1, b2)
                sign = s1 * s2
                if b1.bit_count() & a2.bit_count() & 1:
                    sign = -sign
                c = c1 * c2
                if sign < 0:
                    c = -c
                key = (m1, m2)
                acc = out.get(key)
                out[key] = c if acc is None else acc + c
        return TensorElement(self.alg1, self.alg2, out)

    def bar(self) -> "TensorElement":
        n1, n2 = self.alg1.bar_neg_mask, self.alg2.bar_neg_mask
        out = {}
        for (a, b), c in self.terms.items():
            c = c.conjugate()
            if ((a & n1).bit_count() + (b & n2).bit_count()) & 1:
                c = -c
            out[(a, b)] = c
        return TensorElement(self.alg1, self.alg2, out)

    def star(self) -> "TensorElement":
        """Graded *: (a (x) b)* = (-1)^{|a||b|} a* (x) b*."""
        out = {}
        s1, s2 = self.alg1.star_neg_mask, self.alg2.star_neg_mask
        for (a, b), c in self.terms.items():
            c = c.conjugate()
            ka, kb = a.bit_count(), b.bit_count()
            sign = (ka * (ka - 1) // 2) + (kb * (kb - 1) // 2) + ka * kb
            sign += (a & s1).bit_count() + (b & s2).bit_count()
            if sign & 1:
                c = -c
            out[(a, b)] = c
        return TensorElement(self.alg1, self.alg2, out)

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self):
        return f"TensorElement({self.terms})"


class SplitSpec:
    """Partition of the generators of an algebra into two tensor factors."""

    def __init__(self, algebra: CliffordAlgebra, first_indices):
        first = sorted(set(first_indices))
        if any(i < 1 or i > algebra.dim for i in first):
            raise ValueError("inconsistent partition: index out of range")
        if len(first) != len(set(first_indices)):
            raise ValueError("inconsistent partition: repeated index")
        self.algebra = algebra
        self.first = first
        self.second = [i for i in range(1, algebra.dim + 1) if i not in set(first)]
        self.first_mask = sum(1 << (i - 1) for i in self.first)
        self.second_mask = sum(1 << (i - 1) for i in self.second)

        def sub_algebra(indices):
            squares = tuple(algebra.squares[i - 1] for i in indices)
            bars = tuple(algebra.bar_signs[i - 1] for i in indices)
            stars = tuple(algebra.star_signs[i - 1] for i in indices)
            p = sum(1 for s in bars if s > 0)
            q = len(bars) - p
            return CliffordAlgebra(p, q, squares, bars, stars,
                                   label=f"{algebra.label}|{indices}")

        self.alg1 = sub_algebra(self.first)
        self.alg2 = sub_algebra(self.second)
        self._pos1 = {i: k for k, i in enumerate(self.first)}
        self._pos2 = {i: k for k, i in enumerate(self.second)}

    def split(self, mv: Multivector) -> TensorElement:
        if mv.algebra is not self.algebra:
            raise ValueError("element does not live in the split algebra")
        out = {}
        for mask, coeff in mv.terms.items():
            m1 = m2 = 0
            swaps = 0
            seen_second = 0
            for i in range(self.algebra.dim):
                if not mask & (1 << i):
                    continue
                idx = i + 1
                if idx in self._pos1:
                    m1 |= 1 << self._pos1[idx]
                    swaps += seen_second
                else:
                    m2 |= 1 << self._pos2[idx]
                    seen_second += 1
            c = coeff if swaps % 2 == 0 else -coeff
            out[(m1, m2)] = c
        return TensorElement(self.alg1, self.alg2, out)

    def merge(self, t: TensorElement) -> Multivector:
        out: dict = {}
        for (m1, m2), coeff in t.terms.items():
            mask = 0
            for k, i in enumerate(self.first):
                if m1 & (1 << k):
                    mask |= 1 << (i - 1)
            for k, i in enumerate(self.second):
                if m2 & (1 << k):
                    mask |= 1 << (i - 1)
            swaps = 0
            seen_second = 0
            for i in range(self.algebra.dim):
                if not mask & (1 << i):
                    continue
                if (i + 1) in self._pos1:
                    swaps += seen_second
                else:
                    seen_second += 1
            c = coeff if swaps % 2 == 0 else -coeff
            acc = out.get(mask)
            out[mask] = c if acc is None else acc + c
        return Multivector(self.algebra, {m: c for m, c in out.items() if c})


def graded_tensor_split(mv: Multivector, first_indices) -> tuple[SplitSpec, TensorElement]:
    spec = SplitSpec(mv.algebra, first_indices)
    return spec, spec.split(mv)


# -- Kasparov comparison isomorphism ------------------------------------------------


def to_kasparov(mv: Multivector) -> Multivector:
    """Isomorphism CCl(p,q) -> C_{p,q}: v_i -> eps_i, w_j -> i*e_j."""
    alg = mv.algebra
    target = kasparov(alg.p, alg.q)
    w_mask = ((1 << alg.q) - 1) << alg.p
    i_unit = GaussianRational.I
    out = {}
    for mask, c in mv.terms.items():
        k = (mask & w_mask).bit_count()
        if k:
            c = c * (i_unit ** k) if isinstance(c, GaussianRational) else c * (1j ** k)
        out[mask] = c
    return Multivector(target, out)


def from_kasparov(mv: Multivector) -> Multivector:
    """Inverse of :func:`to_kasparov`."""
    alg = mv.algebra
    target = ccl(alg.p, alg.q)
    w_mask = ((1 << alg.q) - 1) << alg.p
    minus_i = -GaussianRational.I
    out = {}
    for mask, c in mv.terms.items():
        k = (mask & w_mask).bit_count()
        if k:
            c = c * (minus_i ** k) if isinstance(c, GaussianRational) else c * ((-1j) ** k)
        out[mask] = c
    return Multivector(target, out)


# -- expression grammar --------------------------------------------------------------

_TOKEN = _re.compile(
    r"""\s*(?:
        (?P<blade>(?:[eE]\d+)+)
      | (?P<num>\d+(?:\.\d+)?(?:/\d+)?)
      | (?P<imag>[iI])
      | (?P<op>[+\-*()])
    )""",
    _re.VERBOSE,
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse multivector expression near {text[pos:pos+12]!r}")
        pos = m.end()
        if m.lastgroup == "blade":
            tokens.append(("blade", [int(s) for s in _re.findall(r"\d+", m.group("blade"))]))
        elif m.lastgroup == "num":
            tokens.append(("num", Fraction(m.group("num"))))
        elif m.lastgroup == "imag":
            tokens.append(("i", None))
        else:
            tokens.append((m.group("op"), None))
    tail = text[pos:].strip()
    if tail:
        raise ValueError(f"cannot parse multivector expression near {tail[:12]!r}")
    return tokens


class _Parser:
    def __init__(self, tokens, algebra: CliffordAlgebra):
        self.tokens = tokens
        self.pos = 0
        self.algebra = algebra

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse_expr(self) -> Multivector:
        kind, _ = self.peek()
        negate = False
        if kind in ("+", "-"):
            self.next()
            negate = kind == "-"
        value = self.parse_term()
        if negate:
            value = -value
        while True:
            kind, _ = self.peek()
            if kind == "+":
                self.next()
                value = value + self.parse_term()
            elif kind == "-":
                self.next()
                value = value - self.parse_term()
            else:
                return value

    def parse_term(self) -> Multivector:
        value = self.parse_factor()
        while True:
            kind, _ = self.peek()
            if kind == "*":
                self.next()
                value = value * self.parse_factor()
            elif kind in ("num", "i", "blade", "("):
                value = value * self.parse_factor()
            else:
                return value

    def parse_factor(self) -> Multivector:
        kind, payload = self.next()
        if kind == "num":
            return self.algebra.scalar(payload)
        if kind == "i":
            return self.algebra.scalar(GaussianRational.I)
        if kind == "blade":
            return self.algebra.blade(payload)
        if kind == "(":
            value = self.parse_expr()
            kind, _ = self.next()
            if kind != ")":
                raise ValueError("unbalanced parenthesis in multivector expression")
            return value
        if kind == "-":
            return -self.parse_factor()
        if kind == "+":
            return self.parse_factor()
        raise ValueError("malformed multivector expression")


def parse_multivector(text: str, algebra: CliffordAlgebra) -> Multivector:
    """Parse expressions like "3/4*e1e3 + i*e2 - 1/2" (case/space insensitive)."""
    if not text.strip():
        raise ValueError("empty multivector expression")
    tokens = _tokenize(text)
    parser = _Parser(tokens, algebra)
    value = parser.parse_expr()
    if parser.pos != len(tokens):
        raise ValueError("trailing tokens in multivector expression")
    return value


def _format_exact_coeff(c: GaussianRational) -> str:
    if not c.im:
        return str(c.re)
    if not c.re:
        if c.im == 1:
            return "i"
        if c.im == -1:
            return "-i"
        return f"{c.im}*i"
    sign = "+" if c.im > 0 else "-"
    mag = abs(c.im)
    istr = "i" if mag == 1 else f"{mag}*i"
    return f"({c.re} {sign} {istr})"


def format_multivector(mv: Multivector) -> str:
    if not mv.terms:
        return "0"
    parts = []
    for mask in sorted(mv.terms, key=lambda m: (m.bit_count(), m)):
        c = mv.terms[mask]
        blade = "".join(f"e{i + 1}" for i in range(mv.algebra.dim) if mask & (1 << i))
        if isinstance(c, GaussianRational):
            cs = _format_exact_coeff(c)
        else:
            cs = _format_numeric_coeff(c)
        if not blade:
            parts.append(cs)
        elif cs == "1":
            parts.append(blade)
        elif cs == "-1":
            parts.append(f"-{blade}")
        else:
            parts.append(f"{cs}*{blade}")
    text = " + ".join(parts)
    return text.replace("+ -", "- ")


def _format_numeric_coeff(c: complex) -> str:
    if c.imag == 0:
        return repr(c.real)
    if c.real == 0:
        return f"{c.imag!r}*i"
    sign = "+" if c.imag >= 0 else "-"
    return f"({c.real!r} {sign} {abs(c.imag)!r}*i)"


# -- polynomial model of L^2(V) substitution (shared helper) ------------------------


def poly_identity_vars(nvars: int) -> list[MultiPoly]:
    return [MultiPoly.variable(nvars, i) for i in range(nvars)]
