"""Free *-algebra engine in z-normal form.

Words are stored as (letters, zexp) meaning letters * z^zexp: every power
of z is pushed to the far right through the confluent rule

    z * g = zeta^(-zdeg(g)) * g * z,

where zdeg is the z-commutation degree of the letter (deg_j - deg_i for
u[i,j] and t[i,j], negated for their adjoints).  The rule has a single
z-counter, so it is terminating and confluent, and membership bases never
need z-commutators.

On top of the element arithmetic this module supplies comultiplication
application on one, two and three tensor legs, the coassociativity check,
and bounded-degree ideal-membership certification by exact sparse
Gaussian elimination.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .scalar import Field, FieldMismatch, Scalar

__all__ = [
    "AlgebraContext",
    "AlgebraElement",
    "GeneratorSym",
    "MembershipCertificate",
    "CertEntry",
    "TensorElement",
    "Word",
    "apply_comult",
    "coassociativity_check",
    "expand_three_legs",
    "ideal_membership",
    "intertwiner_check",
    "normal_form",
    "well_definedness_check",
]

_KIND_RANK = {"U": 0, "Ustar": 1, "X": 2, "Xstar": 3, "Z": 4}
_STAR = {"U": "Ustar", "Ustar": "U", "X": "Xstar", "Xstar": "X", "Z": "Z"}


@dataclass(frozen=True)
class GeneratorSym:
    """A generator symbol: u[i,j], t[i,j] (kind X), their adjoints, or z.

    ``grading`` is the circle-action degree of the symbol: deg_j - deg_i
    for U(i,j), its negative for the adjoint, and zero for Z and the
    t-generators.
    """

    kind: str
    i: int | None = None
    j: int | None = None
    power: int = 1
    grading: int = 0

    def __post_init__(self):
        if self.kind not in _KIND_RANK:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.kind == "Z":
            if self.i is not None or self.j is not None:
                raise ValueError("Z carries no matrix indices")
        else:
            if self.i is None or self.j is None or self.i < 0 or self.j < 0:
                raise ValueError(f"{self.kind} needs nonnegative indices")
            if self.power != 1:
                raise ValueError("only Z carries a power")

    def star(self) -> "GeneratorSym":
        if self.kind == "Z":
            return GeneratorSym("Z", power=-self.power, grading=self.grading)
        return GeneratorSym(_STAR[self.kind], self.i, self.j, grading=-self.grading)

    def key(self) -> tuple:
        return (_KIND_RANK[self.kind], self.i if self.i is not None else -1,
                self.j if self.j is not None else -1, self.power)

    def display(self) -> str:
        if self.kind == "Z":
            return "Z" if self.power == 1 else f"Z^{self.power}"
        return f"{self.kind}({self.i},{self.j})"

    def to_json(self) -> dict:
        if self.kind == "Z":
            return {"kind": "Z", "power": self.power, "grading": self.grading}
        return {"kind": self.kind, "i": self.i, "j": self.j, "grading": self.grading}

    @classmethod
    def from_json(cls, data: dict) -> "GeneratorSym":
        kind = data.get("kind")
        if kind == "Z":
            return cls("Z", power=int(data.get("power", 1)), grading=int(data.get("grading", 0)))
        if kind in ("U", "Ustar", "X", "Xstar"):
            return cls(kind, int(data["i"]), int(data["j"]), grading=int(data.get("grading", 0)))
        raise ValueError(f"unknown generator kind {kind!r}")


@dataclass(frozen=True)
class AlgebraContext:
    """Shared data the rewriting needs: field, twisting phase, degrees."""

    field: Field
    zeta: Scalar
    degrees: tuple[int, ...]

    def __post_init__(self):
        if self.zeta.field != self.field:
            raise ValueError("zeta must live in the context field")

    @property
    def n(self) -> int:
        return len(self.degrees)

    def zeta_pow(self, exponent: int) -> Scalar:
        if exponent >= 0:
            return self.zeta ** exponent
        return self.zeta.conj() ** (-exponent)

    def zdeg(self, letter: GeneratorSym) -> int:
        """z-commutation degree: z * g = zeta^(-zdeg(g)) * g * z."""
        if letter.kind in ("U", "X"):
            return self.degrees[letter.j] - self.degrees[letter.i]
        if letter.kind in ("Ustar", "Xstar"):
            return self.degrees[letter.i] - self.degrees[letter.j]
        raise ValueError("z has no z-commutation degree")

    # letter factories keep the stored beta-grading consistent
    def u(self, i: int, j: int) -> GeneratorSym:
        return GeneratorSym("U", i, j, grading=self.degrees[j] - self.degrees[i])

    def ustar(self, i: int, j: int) -> GeneratorSym:
        return GeneratorSym("Ustar", i, j, grading=self.degrees[i] - self.degrees[j])

    def x(self, i: int, j: int) -> GeneratorSym:
        return GeneratorSym("X", i, j, grading=0)

    def xstar(self, i: int, j: int) -> GeneratorSym:
        return GeneratorSym("Xstar", i, j, grading=0)

    def z(self, power: int = 1) -> GeneratorSym:
        return GeneratorSym("Z", power=power, grading=0)

    def to_json(self) -> dict:
        return {"field": self.field.to_json(), "zeta": self.zeta.to_json(),
                "degrees": list(self.degrees)}

    @classmethod
    def from_json(cls, data: dict) -> "AlgebraContext":
        fld = Field.from_json(data["field"])
        return cls(field=fld, zeta=Scalar.from_json(data["zeta"], fld),
                   degrees=tuple(int(a) for a in data["degrees"]))


@dataclass(frozen=True)
class Word:
    """Normal-form monomial letters * z^zexp; letters never contain Z."""

    zexp: int
    letters: tuple[GeneratorSym, ...]

    def __post_init__(self):
        if any(g.kind == "Z" for g in self.letters):
            raise ValueError("Z belongs in zexp, not in the letter string")

    def key(self) -> tuple:
        return (self.zexp, len(self.letters), tuple(g.key() for g in self.letters))

    def __len__(self) -> int:
        return len(self.letters)

    def is_identity(self) -> bool:
        return self.zexp == 0 and not self.letters

    def display(self) -> str:
        parts = [g.display() for g in self.letters]
        if self.zexp:
            parts.append("Z" if self.zexp == 1 else f"Z^{self.zexp}")
        return "*".join(parts) if parts else "1"

    def to_json(self) -> list:
        return [self.zexp, [g.to_json() for g in self.letters]]

    @classmethod
    def from_json(cls, data: list) -> "Word":
        return cls(int(data[0]), tuple(GeneratorSym.from_json(g) for g in data[1]))


_IDENTITY_WORD = Word(0, ())


def normal_form(raw: list[GeneratorSym] | tuple[GeneratorSym, ...],
                context: AlgebraContext) -> tuple[Scalar, Word]:
    """Normalize a raw letter string that may contain Z letters.

    All z-powers migrate to the right; the accumulated phase is exact.
    Any rewriting strategy gives the same answer (single z-counter).
    """
    phase_exp = 0
    z_acc = 0
    letters: list[GeneratorSym] = []
    for sym in raw:
        if sym.kind == "Z":
            z_acc += sym.power
        else:
            if z_acc:
                phase_exp += -z_acc * context.zdeg(sym)
            letters.append(sym)
    return context.zeta_pow(phase_exp), Word(z_acc, tuple(letters))


def _word_mul(context: AlgebraContext, a: Word, b: Word) -> tuple[Scalar, Word]:
    # (w1 z^p)(w2 z^q) = zeta^(-p*zdeg(w2)) w1 w2 z^(p+q)
    if a.zexp and b.letters:
        zdeg = sum(context.zdeg(g) for g in b.letters)
        phase = context.zeta_pow(-a.zexp * zdeg)
    else:
        phase = context.field.one()
    return phase, Word(a.zexp + b.zexp, a.letters + b.letters)


def _word_adjoint(context: AlgebraContext, w: Word) -> tuple[Scalar, Word]:
    # (w z^p)* = zeta^(-p*zdeg(w)) w* z^(-p)
    starred = tuple(g.star() for g in reversed(w.letters))
    if w.zexp and w.letters:
        zdeg = sum(context.zdeg(g) for g in w.letters)
        phase = context.zeta_pow(-w.zexp * zdeg)
    else:
        phase = context.field.one()
    return phase, Word(-w.zexp, starred)


class AlgebraElement:
    """Finite scalar combination of normal-form words; canonical storage."""

    __slots__ = ("context", "terms")

    def __init__(self, context: AlgebraContext, terms: dict[Word, Scalar] | None = None):
        self.context = context
        clean: dict[Word, Scalar] = {}
        if terms:
            for w, c in terms.items():
                if not c.is_zero():
                    clean[w] = c
        self.terms = clean

    # constructors -------------------------------------------------------

    @classmethod
    def zero(cls, context: AlgebraContext) -> "AlgebraElement":
        return cls(context)

    @classmethod
    def one(cls, context: AlgebraContext) -> "AlgebraElement":
        return cls(context, {_IDENTITY_WORD: context.field.one()})

    @classmethod
    def monomial(cls, context: AlgebraContext, word: Word,
                 coeff: Scalar | None = None) -> "AlgebraElement":
        return cls(context, {word: coeff if coeff is not None else context.field.one()})

    @classmethod
    def from_letter(cls, context: AlgebraContext, letter: GeneratorSym) -> "AlgebraElement":
        if letter.kind == "Z":
            return cls.monomial(context, Word(letter.power, ()))
        return cls.monomial(context, Word(0, (letter,)))

    @classmethod
    def from_raw(cls, context: AlgebraContext, raw, coeff: Scalar | None = None) -> "AlgebraElement":
        phase, word = normal_form(list(raw), context)
        c = phase if coeff is None else phase * coeff
        return cls(context, {word: c})

    # arithmetic ----------------------------------------------------------

    def _check(self, other: "AlgebraElement") -> None:
        if self.context != other.context:
            raise FieldMismatch("algebra context mismatch")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            prev = out.get(w)
            out[w] = c if prev is None else prev + c
        return AlgebraElement(self.context, out)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            prev = out.get(w)
            out[w] = -c if prev is None else prev - c
        return AlgebraElement(self.context, out)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.context, {w: -c for w, c in self.terms.items()})

    def scale(self, coeff: Scalar) -> "AlgebraElement":
        if coeff.is_zero():
            return AlgebraElement.zero(self.context)
        return AlgebraElement(self.context, {w: coeff * c for w, c in self.terms.items()})

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        out: dict[Word, Scalar] = {}
        for wa, ca in self.terms.items():
            for wb, cb in other.terms.items():
                phase, word = _word_mul(self.context, wa, wb)
                coeff = ca * cb * phase
                prev = out.get(word)
                out[word] = coeff if prev is None else prev + coeff
        return AlgebraElement(self.context, out)

    def adjoint(self) -> "AlgebraElement":
        out: dict[Word, Scalar] = {}
        for w, c in self.terms.items():
            phase, word = _word_adjoint(self.context, w)
            coeff = c.conj() * phase
            prev = out.get(word)
            out[word] = coeff if prev is None else prev + coeff
        return AlgebraElement(self.context, out)

    # predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.context == other.context and (self - other).is_zero()

    def __hash__(self):
        raise TypeError("algebra elements are not hashable")

    def beta_degree(self) -> int | None:
        """The common grading of all words, or None when mixed or zero."""
        degree: int | None = None
        for w in self.terms:
            g = sum(letter.grading for letter in w.letters)
            if degree is None:
                degree = g
            elif degree != g:
                return None
        return degree

    def max_word_length(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def max_abs_zexp(self) -> int:
        return max((abs(w.zexp) for w in self.terms), default=0)

    def sorted_terms(self) -> list[tuple[Word, Scalar]]:
        return sorted(self.terms.items(), key=lambda item: item[0].key())

    def strip_unit_factors(self) -> "AlgebraElement":
        """Cancel a common right z-power and normalize the leading coefficient."""
        if self.is_zero():
            return self
        zexps = {w.zexp for w in self.terms}
        shift = next(iter(zexps)) if len(zexps) == 1 else 0
        shifted = self
        if shift:
            shifted = self * AlgebraElement.monomial(self.context, Word(-shift, ()))
        lead_word, lead_coeff = shifted.sorted_terms()[0]
        return shifted.scale(lead_coeff.inverse())

    def to_json(self) -> list:
        return [[c.to_json(), w.zexp, [g.to_json() for g in w.letters]]
                for w, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data: list, context: AlgebraContext) -> "AlgebraElement":
        terms: dict[Word, Scalar] = {}
        for coeff_json, zexp, letters in data:
            word = Word(int(zexp), tuple(GeneratorSym.from_json(g) for g in letters))
            terms[word] = Scalar.from_json(coeff_json, context.field)
        return cls(context, terms)

    def __repr__(self) -> str:
        if self.is_zero():
            return "0"
        parts = [f"({c!r})*{w.display()}" for w, c in self.sorted_terms()]
        return " + ".join(parts)


class TensorElement:
    """Scalar combination of 2- or 3-leg word tuples, each leg normalized."""

    __slots__ = ("context", "legs", "terms")

    def __init__(self, context: AlgebraContext, legs: int,
                 terms: dict[tuple[Word, ...], Scalar] | None = None):
        if legs not in (2, 3):
            raise ValueError("tensor elements have 2 or 3 legs")
        self.context = context
        self.legs = legs
        clean: dict[tuple[Word, ...], Scalar] = {}
        if terms:
            for ws, c in terms.items():
                if not c.is_zero():
                    clean[ws] = c
        self.terms = clean

    @classmethod
    def zero(cls, context: AlgebraContext, legs: int = 2) -> "TensorElement":
        return cls(context, legs)

    @classmethod
    def one(cls, context: AlgebraContext, legs: int = 2) -> "TensorElement":
        return cls(context, legs, {(_IDENTITY_WORD,) * legs: context.field.one()})

    @classmethod
    def tensor(cls, *factors: AlgebraElement) -> "TensorElement":
        if len(factors) not in (2, 3):
            raise ValueError("tensor() takes 2 or 3 factors")
        context = factors[0].context
        out: dict[tuple[Word, ...], Scalar] = {}

        def _extend(prefix, coeff, rest):
            if not rest:
                prev = out.get(prefix)
                out[prefix] = coeff if prev is None else prev + coeff
                return
            for w, c in rest[0].terms.items():
                _extend(prefix + (w,), coeff * c, rest[1:])

        _extend((), context.field.one(), list(factors))
        return cls(context, len(factors), out)

    def _check(self, other: "TensorElement") -> None:
        if self.context != other.context or self.legs != other.legs:
            raise FieldMismatch("tensor context or leg mismatch")

    def __add__(self, other: "TensorElement") -> "TensorElement":
        self._check(other)
        out = dict(self.terms)
        for ws, c in other.terms.items():
            prev = out.get(ws)
            out[ws] = c if prev is None else prev + c
        return TensorElement(self.context, self.legs, out)

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        self._check(other)
        out = dict(self.terms)
        for ws, c in other.terms.items():
            prev = out.get(ws)
            out[ws] = -c if prev is None else prev - c
        return TensorElement(self.context, self.legs, out)

    def __neg__(self) -> "TensorElement":
        return TensorElement(self.context, self.legs,
                             {ws: -c for ws, c in self.terms.items()})

    def scale(self, coeff: Scalar) -> "TensorElement":
        if coeff.is_zero():
            return TensorElement.zero(self.context, self.legs)
        return TensorElement(self.context, self.legs,
                             {ws: coeff * c for ws, c in self.terms.items()})

    def __mul__(self, other: "TensorElement") -> "TensorElement":
        """Legwise product; braiding phases already live in the z-bookkeeping."""
        self._check(other)
        out: dict[tuple[Word, ...], Scalar] = {}
        for wa, ca in self.terms.items():
            for wb, cb in other.terms.items():
                coeff = ca * cb
                words = []
                for a, b in zip(wa, wb):
                    phase, word = _word_mul(self.context, a, b)
                    coeff = coeff * phase
                    words.append(word)
                key = tuple(words)
                prev = out.get(key)
                out[key] = coeff if prev is None else prev + coeff
        return TensorElement(self.context, self.legs, out)

    def adjoint(self) -> "TensorElement":
        out: dict[tuple[Word, ...], Scalar] = {}
        for ws, c in self.terms.items():
            coeff = c.conj()
            words = []
            for w in ws:
                phase, word = _word_adjoint(self.context, w)
                coeff = coeff * phase
                words.append(word)
            key = tuple(words)
            prev = out.get(key)
            out[key] = coeff if prev is None else prev + coeff
        return TensorElement(self.context, self.legs, out)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return (self.context == other.context and self.legs == other.legs
                and (self - other).is_zero())

    def __hash__(self):
        raise TypeError("tensor elements are not hashable")

    def max_leg_length(self) -> int:
        return max((len(w) for ws in self.terms for w in ws), default=0)

    def max_leg_zexp(self) -> int:
        return max((abs(w.zexp) for ws in self.terms for w in ws), default=0)

    def sorted_terms(self) -> list[tuple[tuple[Word, ...], Scalar]]:
        return sorted(self.terms.items(), key=lambda item: tuple(w.key() for w in item[0]))

    def to_json(self) -> list:
        return [[c.to_json(), [w.to_json() for w in ws]] for ws, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data: list, context: AlgebraContext, legs: int = 2) -> "TensorElement":
        terms: dict[tuple[Word, ...], Scalar] = {}
        for coeff_json, words in data:
            key = tuple(Word.from_json(w) for w in words)
            terms[key] = Scalar.from_json(coeff_json, context.field)
        return cls(context, legs, terms)

    def __repr__(self) -> str:
        if self.is_zero():
            return "0"
        parts = [f"({c!r})*" + " (x) ".join(w.display() for w in ws)
                 for ws, c in self.sorted_terms()]
        return " + ".join(parts)


# -- comultiplication ------------------------------------------------------


def _comult_image(presentation, letter: GeneratorSym, cache: dict) -> TensorElement:
    image = cache.get(letter)
    if image is not None:
        return image
    base = presentation.comult.get(letter)
    if base is not None:
        image = base
    else:
        unstarred = letter.star()
        base = presentation.comult.get(unstarred)
        if base is None:
            raise ValueError(f"generator {letter.display()} has no comultiplication")
        image = base.adjoint()
    cache[letter] = image
    return image


def _check_group_like_z(presentation, context) -> None:
    zgen = GeneratorSym("Z")
    image = presentation.comult.get(zgen)
    if image is None:
        raise ValueError("presentation has no comultiplication for Z")
    zw = Word(1, ())
    expected = TensorElement(context, 2, {(zw, zw): context.field.one()})
    if image != expected:
        raise ValueError("z-powers extend only through the group-like image z (x) z")


def apply_comult(element: AlgebraElement, presentation) -> TensorElement:
    """Extend the presentation's generator comultiplication multiplicatively."""
    context = element.context
    cache: dict = {}
    z_checked = False
    out = TensorElement.zero(context, 2)
    for word, coeff in element.sorted_terms():
        acc = TensorElement.one(context, 2)
        for letter in word.letters:
            acc = acc * _comult_image(presentation, letter, cache)
        if word.zexp:
            if not z_checked:
                _check_group_like_z(presentation, context)
                z_checked = True
            zw = Word(word.zexp, ())
            acc = acc * TensorElement(context, 2, {(zw, zw): context.field.one()})
        out = out + acc.scale(coeff)
    return out


def expand_three_legs(t2: TensorElement, presentation, leg: int) -> TensorElement:
    """Apply the comultiplication to one leg of a 2-leg element (leg is 0 or 1)."""
    if t2.legs != 2 or leg not in (0, 1):
        raise ValueError("expand_three_legs acts on a specified leg of a 2-leg element")
    context = t2.context
    out = TensorElement.zero(context, 3)
    for (w1, w2), coeff in t2.sorted_terms():
        target = w1 if leg == 0 else w2
        inner = apply_comult(AlgebraElement.monomial(context, target), presentation)
        terms: dict[tuple[Word, ...], Scalar] = {}
        for (a, b), c in inner.terms.items():
            key = (a, b, w2) if leg == 0 else (w1, a, b)
            prev = terms.get(key)
            terms[key] = c if prev is None else prev + c
        out = out + TensorElement(context, 3, terms).scale(coeff)
    return out


def coassociativity_check(presentation) -> bool:
    """Exact equality of both 3-leg expansions on every generator."""
    context = presentation.context
    for gen in presentation.generators:
        elem = AlgebraElement.from_letter(context, gen)
        two = apply_comult(elem, presentation)
        left = expand_three_legs(two, presentation, 0)
        right = expand_three_legs(two, presentation, 1)
        if left != right:
            return False
    return True


# -- ideal membership -------------------------------------------------------


@dataclass(frozen=True)
class CertEntry:
    """One summand of a membership combination.

    ``leg`` is 0 for plain targets; for tensor targets the decorated
    relation sits in leg 1 or 2 and ``other`` is the passive monomial in
    the remaining leg.  ``star`` applies the adjoint of the indexed
    relation before decorating.
    """

    leg: int
    left: Word
    rel_index: int
    star: bool
    right: Word
    other: Word | None
    coeff: Scalar

    def to_json(self) -> dict:
        return {
            "leg": self.leg,
            "left": self.left.to_json(),
            "rel_index": self.rel_index,
            "star": self.star,
            "right": self.right.to_json(),
            "other": None if self.other is None else self.other.to_json(),
            "coeff": self.coeff.to_json(),
        }


@dataclass(frozen=True)
class MembershipCertificate:
    verdict: str  # in_ideal | undecided_at_bound | nonzero_constant_obstruction
    degree_bound: int
    combination: tuple[CertEntry, ...] = ()

    def replay(self, relations, context: AlgebraContext, legs: int = 0):
        """Reconstruct the certified element from the combination."""
        if self.verdict != "in_ideal":
            raise ValueError("only in_ideal certificates replay")
        if legs == 0:
            acc = AlgebraElement.zero(context)
            for entry in self.combination:
                rel = relations[entry.rel_index]
                if entry.star:
                    rel = rel.adjoint()
                piece = (AlgebraElement.monomial(context, entry.left) * rel
                         * AlgebraElement.monomial(context, entry.right))
                acc = acc + piece.scale(entry.coeff)
            return acc
        acc = TensorElement.zero(context, legs)
        one = AlgebraElement.one(context)
        for entry in self.combination:
            rel = relations[entry.rel_index]
            if entry.star:
                rel = rel.adjoint()
            piece = (AlgebraElement.monomial(context, entry.left) * rel
                     * AlgebraElement.monomial(context, entry.right))
            other = AlgebraElement.monomial(context, entry.other)
            if entry.leg == 1:
                tns = TensorElement.tensor(piece, other)
            else:
                tns = TensorElement.tensor(other, piece)
            acc = acc + tns.scale(entry.coeff)
        return acc

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "degree_bound": self.degree_bound,
            "combination": [e.to_json() for e in self.combination],
        }


class IdealCertifier:
    """Row-reduced spanning set of bounded two-sided relation multiples.

    The ambient spanning set is {a * r * b} for r in the relation list and
    its adjoints, a and b monomials, subject to word-degree <= bound and
    |zexp| <= bound.  Rows are discovered by division: starting from the
    target's words, every decoration a * r * b whose support meets the
    working column set is generated (matching each relation word as a
    contiguous factor), and newly seen support words are processed in turn
    until the component closes.  Rows supported outside the closure cannot
    contribute to any combination hitting the target, so the restricted
    elimination decides exactly the same membership questions as the full
    spanning set.

    Determinism: columns are words in canonical order, frontier words and
    the rows found for each are processed in canonical order, and the
    pivot is always the first nonzero column.
    """

    def __init__(self, context: AlgebraContext, relations, degree_bound: int,
                 row_cap: int = 2_000_000, workers: int = 1):
        self.context = context
        self.relations = list(relations)
        self.degree_bound = degree_bound
        self.row_cap = row_cap
        self.workers = max(1, workers)
        self.capped = False

        base: list[tuple[int, bool, AlgebraElement, list[Word]]] = []
        seen_keys = set()
        for idx, rel in enumerate(self.relations):
            for star in (False, True):
                elem = rel.adjoint() if star else rel
                if elem.is_zero() or elem.max_word_length() > degree_bound:
                    continue
                lead_coeff = elem.sorted_terms()[0][1]
                normalized = elem.scale(lead_coeff.inverse())
                key = tuple((w.key(), repr(c.to_json()))
                            for w, c in normalized.sorted_terms())
                if key in seen_keys:
                    continue
                seen_keys.add(key)
                base.append((idx, star, elem, [w for w, _ in elem.sorted_terms()]))
        self._base = base

        # pivots: word -> (vector, row_id, recipe); the recipe records the
        # immediate pivot hits consumed while reducing the inserted row, so
        # full row combinations are resolved lazily per certificate
        self._pivots: dict[Word, tuple[dict[Word, Scalar], int, dict[Word, Scalar], Scalar]] = {}
        self._combo_cache: dict[Word, dict[int, Scalar]] = {}
        self._decorations: list[tuple[Word, int, bool, Word]] = []
        self._processed: set[Word] = set()
        self._seen_rows: set[tuple] = set()

    # row discovery --------------------------------------------------------

    def _rows_touching(self, word: Word) -> list[tuple[Word, int, bool, Word]]:
        """All decorations (a, r, b) with a relation word of r dividing `word`."""
        found = []
        letters = word.letters
        for bi, (idx, star, _, term_words) in enumerate(self._base):
            for u in term_words:
                k = len(u.letters)
                if k > len(letters):
                    continue
                shift = word.zexp - u.zexp
                for pos in range(len(letters) - k + 1):
                    if letters[pos:pos + k] != u.letters:
                        continue
                    decoration = (Word(0, letters[:pos]), idx, star,
                                  Word(shift, letters[pos + k:]))
                    key = (bi, decoration[0].key(), decoration[3].key())
                    if key not in self._seen_rows:
                        self._seen_rows.add(key)
                        found.append(decoration)
        found.sort(key=lambda d: (d[1], d[2], d[0].key(), d[3].key()))
        return found

    def _expand_row(self, decoration):
        left, idx, star, right = decoration
        elem = self.relations[idx].adjoint() if star else self.relations[idx]
        row = (AlgebraElement.monomial(self.context, left) * elem
               * AlgebraElement.monomial(self.context, right))
        return decoration, row

    def _ensure_closure(self, seeds) -> None:
        """Generate every spanning row in the component of the seed words."""
        D = self.degree_bound
        frontier = sorted({w for w in seeds
                           if w not in self._processed
                           and len(w) <= D and abs(w.zexp) <= D}, key=Word.key)
        while frontier and not self.capped:
            discovered: set[Word] = set()
            for word in frontier:
                if word in self._processed:
                    continue
                self._processed.add(word)
                decorations = self._rows_touching(word)
                if not decorations:
                    continue
                if self.workers > 1:
                    with ThreadPoolExecutor(max_workers=self.workers) as pool:
                        expanded = list(pool.map(self._expand_row, decorations,
                                                 chunksize=16))
                else:
                    expanded = [self._expand_row(d) for d in decorations]
                for decoration, row in expanded:
                    if row.is_zero():
                        continue
                    if row.max_word_length() > D or row.max_abs_zexp() > D:
                        continue
                    if len(self._decorations) >= self.row_cap:
                        self.capped = True
                        return
                    row_id = len(self._decorations)
                    self._decorations.append(decoration)
                    for w in row.terms:
                        if w not in self._processed:
                            discovered.add(w)
                    self._insert(row.terms, row_id)
            frontier = sorted(discovered - self._processed, key=Word.key)

    # elimination ---------------------------------------------------------

    def _reduce_vector(self, vec: dict[Word, Scalar]):
        """Canonical residual of a vector and the pivot hits consumed."""
        vec = {w: c for w, c in vec.items() if not c.is_zero()}
        hits: dict[Word, Scalar] = {}
        while True:
            pivoted = [w for w in vec if w in self._pivots]
            if not pivoted:
                break
            word = min(pivoted, key=Word.key)
            coeff = vec[word]
            pivot_vec = self._pivots[word][0]
            for w, c in pivot_vec.items():
                prev = vec.get(w)
                new = (-coeff * c) if prev is None else prev - coeff * c
                if new.is_zero():
                    vec.pop(w, None)
                else:
                    vec[w] = new
            # the reduction word strictly increases, so each pivot is hit once
            hits[word] = coeff
        return vec, hits

    def _insert(self, vec: dict[Word, Scalar], row_id: int) -> None:
        residual, used = self._reduce_vector(vec)
        if not residual:
            return
        lead = min(residual, key=Word.key)
        inv = residual[lead].inverse()
        vec_n = {w: inv * c for w, c in residual.items()}
        # pivot row = inv * (row_{row_id} - sum used[q] * pivot_q)
        self._pivots[lead] = (vec_n, row_id, used, inv)

    def _pivot_combo(self, word: Word) -> dict[int, Scalar]:
        """Resolve a pivot row as a combination of original decorated rows.

        Recipes always reference pivots inserted earlier, so the dependency
        graph is acyclic; an explicit post-order walk avoids recursion limits.
        """
        cached = self._combo_cache.get(word)
        if cached is not None:
            return cached
        stack: list[tuple[Word, bool]] = [(word, False)]
        while stack:
            current, expanded = stack.pop()
            if current in self._combo_cache:
                continue
            recipe = self._pivots[current][2]
            if not expanded:
                stack.append((current, True))
                for dep in recipe:
                    if dep not in self._combo_cache:
                        stack.append((dep, False))
                continue
            _, row_id, used, inv = self._pivots[current]
            combo = {row_id: inv}
            for dep, coeff in used.items():
                scale = inv * coeff
                for rid, c in self._combo_cache[dep].items():
                    prev = combo.get(rid)
                    new = (-scale * c) if prev is None else prev - scale * c
                    if new.is_zero():
                        combo.pop(rid, None)
                    else:
                        combo[rid] = new
            self._combo_cache[current] = combo
        return self._combo_cache[word]

    def _combo_from_hits(self, hits: dict[Word, Scalar]) -> dict[int, Scalar]:
        combo: dict[int, Scalar] = {}
        for word in sorted(hits, key=Word.key):
            coeff = hits[word]
            for rid, c in self._pivot_combo(word).items():
                prev = combo.get(rid)
                new = coeff * c if prev is None else prev + coeff * c
                if new.is_zero():
                    combo.pop(rid, None)
                else:
                    combo[rid] = new
        return combo

    # public reduction ----------------------------------------------------

    def reduce_element(self, element: AlgebraElement):
        self._ensure_closure(element.terms.keys())
        residual, hits = self._reduce_vector(dict(element.terms))
        return AlgebraElement(self.context, residual), self._combo_from_hits(hits)

    def _entries_from_combo(self, combo: dict[int, Scalar], leg: int,
                            other: Word | None) -> list[CertEntry]:
        entries = []
        for rid in sorted(combo):
            left, idx, star, right = self._decorations[rid]
            entries.append(CertEntry(leg=leg, left=left, rel_index=idx, star=star,
                                     right=right, other=other, coeff=combo[rid]))
        return entries

    def certify_element(self, element: AlgebraElement) -> MembershipCertificate:
        residual, combo = self.reduce_element(element)
        if residual.is_zero():
            # sound even under a capped closure: the combination replays
            return MembershipCertificate("in_ideal", self.degree_bound,
                                         tuple(self._entries_from_combo(combo, 0, None)))
        if self.capped:
            return MembershipCertificate("undecided_at_bound", self.degree_bound)
        constant = (all(w.is_identity() for w in element.terms)
                    or all(w.is_identity() for w in residual.terms))
        verdict = "nonzero_constant_obstruction" if constant else "undecided_at_bound"
        return MembershipCertificate(verdict, self.degree_bound)

    def certify_tensor(self, target: TensorElement) -> MembershipCertificate:
        if target.legs != 2:
            raise ValueError("tensor certification is for 2-leg targets")
        seeds: set[Word] = set()
        for ws in target.terms:
            seeds.update(ws)
        self._ensure_closure(seeds)
        entries: list[CertEntry] = []

        # leg-1 pass: reduce the leg-1 vector over each leg-2 monomial
        by_leg2: dict[Word, dict[Word, Scalar]] = {}
        for (w1, w2), c in target.terms.items():
            by_leg2.setdefault(w2, {})[w1] = c
        middle: dict[tuple[Word, Word], Scalar] = {}
        for w2 in sorted(by_leg2, key=Word.key):
            residual, hits = self._reduce_vector(by_leg2[w2])
            entries.extend(self._entries_from_combo(self._combo_from_hits(hits), 1, w2))
            for w1, c in residual.items():
                middle[(w1, w2)] = c

        # leg-2 pass on what is left
        by_leg1: dict[Word, dict[Word, Scalar]] = {}
        for (w1, w2), c in middle.items():
            by_leg1.setdefault(w1, {})[w2] = c
        final: dict[tuple[Word, Word], Scalar] = {}
        for w1 in sorted(by_leg1, key=Word.key):
            residual, hits = self._reduce_vector(by_leg1[w1])
            entries.extend(self._entries_from_combo(self._combo_from_hits(hits), 2, w1))
            for w2, c in residual.items():
                final[(w1, w2)] = c

        residual_t = TensorElement(self.context, 2, final)
        if residual_t.is_zero():
            # sound even under a capped closure: the combination replays
            return MembershipCertificate("in_ideal", self.degree_bound, tuple(entries))
        if self.capped:
            return MembershipCertificate("undecided_at_bound", self.degree_bound)
        constant = (all(all(w.is_identity() for w in ws) for ws in target.terms)
                    or all(all(w.is_identity() for w in ws) for ws in residual_t.terms))
        verdict = "nonzero_constant_obstruction" if constant else "undecided_at_bound"
        return MembershipCertificate(verdict, self.degree_bound)


def ideal_membership(target, relations, degree_bound: int, *,
                     row_cap: int = 2_000_000, workers: int = 1) -> MembershipCertificate:
    """Certify membership of a target in the bounded two-sided relation span."""
    context = target.context
    if isinstance(target, TensorElement):
        if target.max_leg_length() > degree_bound:
            raise ValueError("degree_bound is below the target's word degree")
    else:
        if target.max_word_length() > degree_bound:
            raise ValueError("degree_bound is below the target's word degree")
    certifier = IdealCertifier(context, relations, degree_bound,
                               row_cap=row_cap, workers=workers)
    if isinstance(target, TensorElement):
        return certifier.certify_tensor(target)
    return certifier.certify_element(target)


def well_definedness_check(presentation, degree_bound: int, *,
                           row_cap: int = 2_000_000, workers: int = 1) -> dict:
    """Certify that the comultiplication respects every defining relation.

    For each relation r the 2-leg image of r under the comultiplication is
    certified to lie in the ideal generated by the relations in either
    leg.  Undecided verdicts are reported, never turned into failures.
    """
    context = presentation.context
    certifier = None
    results = []
    all_in = True
    for idx, rel in enumerate(presentation.relations):
        label = presentation.relation_labels[idx]
        if rel.is_zero():
            results.append({"relation": label, "verdict": "in_ideal",
                            "certificate": MembershipCertificate("in_ideal", degree_bound)})
            continue
        target = apply_comult(rel, presentation)
        if (target.max_leg_length() > degree_bound
                or target.max_leg_zexp() > degree_bound
                or rel.max_word_length() > degree_bound
                or rel.max_abs_zexp() > degree_bound):
            results.append({"relation": label, "verdict": "undecided_at_bound",
                            "certificate": MembershipCertificate("undecided_at_bound",
                                                                 degree_bound)})
            all_in = False
            continue
        if certifier is None:
            certifier = IdealCertifier(context, presentation.relations, degree_bound,
                                       row_cap=row_cap, workers=workers)
        cert = certifier.certify_tensor(target)
        results.append({"relation": label, "verdict": cert.verdict, "certificate": cert})
        if cert.verdict != "in_ideal":
            all_in = False
    return {"relations": results, "all_in_ideal": all_in, "degree_bound": degree_bound}


def intertwiner_check(data, f_override=None) -> bool:
    """Verify t*F = z^d*F*conj(t) entrywise against the generated relations.

    ``f_override`` substitutes a candidate matrix for the derived F, which
    is how mutation tests confirm the identity pins F.
    """
    from .graded import f_matrix
    from .presentation import t_form_presentation

    presentation = t_form_presentation(data)
    context = presentation.context
    F = f_matrix(data) if f_override is None else f_override
    n = data.space.n
    zd = AlgebraElement.monomial(context, Word(data.d, ()))
    generated = {}
    for idx, label in enumerate(presentation.relation_labels):
        if label.startswith("invariance"):
            coords = label[label.index("(") + 1:-1].split(",")
            generated[(int(coords[0]), int(coords[1]))] = presentation.relations[idx]
    for j in range(n):
        for i in range(n):
            lhs = AlgebraElement.zero(context)
            rhs = AlgebraElement.zero(context)
            for k in range(n):
                f_ki = F[k, i]
                if not f_ki.is_zero():
                    lhs = lhs + AlgebraElement.from_letter(context, context.x(j, k)).scale(f_ki)
                f_jk = F[j, k]
                if not f_jk.is_zero():
                    rhs = rhs + AlgebraElement.from_letter(context, context.xstar(k, i)).scale(f_jk)
            diff = lhs - zd * rhs
            if diff != generated[(j, i)]:
                return False
    return True
