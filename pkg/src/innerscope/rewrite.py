"""Noncommutative polynomial rewriting with diamond-lemma confluence checking.

Rewriting systems here present quotients of free associative algebras: the
relations y_i x_j = delta_ij realizing R^n = R as right modules, and the
straightening rules e_j e_i = e_i e_j + [e_j, e_i] presenting an enveloping
algebra.  Rules must strictly decrease the degree-lexicographic order, so
every reduction terminates; confluence is checked, not assumed, by reducing
both branches of every overlap and inclusion ambiguity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .exactmath import Field, Matrix


class AntisymmetryViolation(ValueError):
    pass


class CharacteristicZero(ValueError):
    pass


class NonzeroAugmentation(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


class LengthMismatch(ValueError):
    pass


class ValidationFailure(ValueError):
    pass


class NcPolynomial:
    """A polynomial in noncommuting variables: map from words to coefficients.

    Words are tuples of generator names.  Zero coefficients are never stored.
    """

    __slots__ = ("field", "terms")

    def __init__(self, field: Field, terms=None):
        self.field = field
        clean = {}
        if terms:
            for word, coeff in terms.items():
                c = field.coerce(coeff)
                if c != field.zero:
                    clean[tuple(word)] = c
        self.terms = clean

    @classmethod
    def zero(cls, field: Field) -> "NcPolynomial":
        return cls(field)

    @classmethod
    def one(cls, field: Field) -> "NcPolynomial":
        return cls(field, {(): field.one})

    @classmethod
    def monomial(cls, field: Field, word, coeff=1) -> "NcPolynomial":
        return cls(field, {tuple(word): field.coerce(coeff)})

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Largest word length; -1 for the zero polynomial."""
        return max((len(w) for w in self.terms), default=-1)

    def coefficient(self, word):
        return self.terms.get(tuple(word), self.field.zero)

    def __add__(self, other: "NcPolynomial") -> "NcPolynomial":
        if other.field != self.field:
            raise ValidationFailure("field mismatch")
        out = dict(self.terms)
        add, zero = self.field.add, self.field.zero
        for word, coeff in other.terms.items():
            v = add(out.get(word, zero), coeff)
            if v == zero:
                out.pop(word, None)
            else:
                out[word] = v
        result = NcPolynomial.__new__(NcPolynomial)
        result.field = self.field
        result.terms = out
        return result

    def __sub__(self, other: "NcPolynomial") -> "NcPolynomial":
        return self + other.scale(-1)

    def __mul__(self, other: "NcPolynomial") -> "NcPolynomial":
        if other.field != self.field:
            raise ValidationFailure("field mismatch")
        field = self.field
        add, mul, zero = field.add, field.mul, field.zero
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                word = w1 + w2
                v = add(out.get(word, zero), mul(c1, c2))
                if v == zero:
                    out.pop(word, None)
                else:
                    out[word] = v
        result = NcPolynomial.__new__(NcPolynomial)
        result.field = field
        result.terms = out
        return result

    def scale(self, c) -> "NcPolynomial":
        c = self.field.coerce(c)
        mul, zero = self.field.mul, self.field.zero
        if c == zero:
            return NcPolynomial.zero(self.field)
        result = NcPolynomial.__new__(NcPolynomial)
        result.field = self.field
        result.terms = {w: mul(c, v) for w, v in self.terms.items()}
        return result

    def __eq__(self, other):
        return (isinstance(other, NcPolynomial)
                and other.field == self.field and other.terms == self.terms)

    def __hash__(self):
        return hash((self.field, frozenset(self.terms.items())))

    def to_json(self) -> list:
        fmt = self.field.format_scalar
        return [{"word": list(w), "coeff": fmt(c)}
                for w, c in sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0]))]

    @classmethod
    def from_json(cls, field: Field, data: list) -> "NcPolynomial":
        terms: dict = {}
        add, zero = field.add, field.zero
        for entry in data:
            word = tuple(entry["word"])
            c = field.parse_scalar(str(entry["coeff"]))
            terms[word] = add(terms.get(word, zero), c)
        return cls(field, terms)

    @classmethod
    def parse(cls, field: Field, text: str, generators) -> "NcPolynomial":
        """Parse the flat syntax used on the command line, e.g. "x1*y1 - 1".

        Terms are separated by + and -; factors inside a term by *; a factor
        is a generator name, optionally with ^k, or an integer or fraction.
        """
        gens = set(generators)
        stripped = text.replace(" ", "")
        if not stripped:
            raise ValidationFailure("empty polynomial text")
        pieces = []
        sign = 1
        token = ""
        for ch in stripped:
            if ch in "+-":
                if token:
                    pieces.append((sign, token))
                    token = ""
                elif pieces:
                    raise ValidationFailure("dangling sign in %r" % text)
                sign = -1 if ch == "-" else 1
            else:
                token += ch
        if token:
            pieces.append((sign, token))
        else:
            raise ValidationFailure("trailing operator in %r" % text)
        poly = cls.zero(field)
        for sgn, term in pieces:
            coeff = field.coerce(sgn)
            word: list = []
            for factor in term.split("*"):
                if not factor:
                    raise ValidationFailure("empty factor in %r" % term)
                base, caret, exp = factor.partition("^")
                if caret:
                    try:
                        power = int(exp)
                    except ValueError:
                        raise ValidationFailure("bad exponent %r" % exp)
                    if power < 0:
                        raise ValidationFailure("negative exponent %r" % factor)
                else:
                    power = 1
                if base in gens:
                    word.extend([base] * power)
                else:
                    try:
                        value = field.coerce(Fraction(base))
                    except (ValueError, ZeroDivisionError):
                        raise ValidationFailure("unknown generator %r" % base)
                    for _ in range(power):
                        coeff = field.mul(coeff, value)
            poly = poly + cls.monomial(field, word, coeff)
        return poly

    def display(self, order_key=None) -> str:
        if not self.terms:
            return "0"
        key = order_key or (lambda w: (len(w), w))
        parts = []
        fmt = self.field.format_scalar
        for word in sorted(self.terms, key=key):
            c = self.terms[word]
            body = "*".join(word) if word else "1"
            if word and c == self.field.one:
                parts.append(body)
            elif not word:
                parts.append(fmt(c))
            else:
                parts.append("%s*%s" % (fmt(c), body))
        return " + ".join(parts)

    def __repr__(self):
        return "NcPolynomial(%s)" % self.display()


def augmentation(p: NcPolynomial):
    """Coefficient of the empty word: the algebra map killing all generators.

    Descends to a rewriting quotient exactly when every rule's right side has
    zero augmentation (RewriteSystem.preserves_augmentation).
    """
    return p.terms.get((), p.field.zero)


@dataclass
class OverlapFailure:
    rule_i: int
    rule_j: int
    word: tuple
    branch_i: NcPolynomial
    branch_j: NcPolynomial


class RewriteSystem:
    """An ordered alphabet plus strictly order-decreasing rewriting rules.

    The monomial order is degree-lexicographic: longer words are larger, and
    equal lengths compare letter by letter through the generator precedence
    (position in the generators list, later = larger).  Every rule must have
    all right-side terms strictly below its left side, which is what makes
    reduction terminate with no step cap.
    """

    def __init__(self, field: Field, generators, rules):
        self.field = field
        self.generators = list(generators)
        if len(set(self.generators)) != len(self.generators):
            raise ValidationFailure("duplicate generator names")
        self.rank = {g: i for i, g in enumerate(self.generators)}
        self.rules = []
        for lhs, rhs in rules:
            lhs = tuple(lhs)
            if not lhs:
                raise ValidationFailure("empty rule left side")
            for g in lhs:
                if g not in self.rank:
                    raise ValidationFailure("rule uses unknown generator %r" % g)
            if rhs.field != field:
                raise ValidationFailure("rule right side over the wrong field")
            lkey = self.deglex_key(lhs)
            for word in rhs.terms:
                if self.deglex_key(word) >= lkey:
                    raise ValidationFailure(
                        "rule %s -> %s does not decrease the order"
                        % ("*".join(lhs), rhs.display()))
            self.rules.append((lhs, rhs))
        self.preserves_augmentation = all(
            augmentation(rhs) == field.zero for _, rhs in self.rules)

    def deglex_key(self, word):
        return (len(word), tuple(self.rank[g] for g in word))

    def word_less(self, w1, w2) -> bool:
        return self.deglex_key(w1) < self.deglex_key(w2)

    # -- reduction ---------------------------------------------------------

    def _matches(self, word):
        out = []
        for pos in range(len(word)):
            for ri, (lhs, _) in enumerate(self.rules):
                if word[pos:pos + len(lhs)] == lhs:
                    out.append((pos, ri))
        return out

    def _first_match(self, word):
        n = len(word)
        for pos in range(n):
            for ri, (lhs, _) in enumerate(self.rules):
                if word[pos:pos + len(lhs)] == lhs:
                    return (pos, ri)
        return None

    def normal_form(self, p: NcPolynomial, rng=None) -> NcPolynomial:
        """Fully reduce p.  The default strategy is leftmost, lowest rule
        index; passing a random generator picks random redexes instead, which
        must not change the answer on a confluent system."""
        if p.field != self.field:
            raise ValidationFailure("polynomial over the wrong field")
        field = self.field
        add, mul, zero = field.add, field.mul, field.zero
        pending = dict(p.terms)
        result: dict = {}
        while pending:
            word, coeff = pending.popitem()
            if coeff == zero:
                continue
            if rng is None:
                match = self._first_match(word)
            else:
                matches = self._matches(word)
                match = rng.choice(matches) if matches else None
            if match is None:
                v = add(result.get(word, zero), coeff)
                if v == zero:
                    result.pop(word, None)
                else:
                    result[word] = v
                continue
            pos, ri = match
            lhs, rhs = self.rules[ri]
            prefix = word[:pos]
            suffix = word[pos + len(lhs):]
            for rword, rcoeff in rhs.terms.items():
                new_word = prefix + rword + suffix
                v = add(pending.get(new_word, zero), mul(coeff, rcoeff))
                if v == zero:
                    pending.pop(new_word, None)
                else:
                    pending[new_word] = v
        out = NcPolynomial.__new__(NcPolynomial)
        out.field = field
        out.terms = result
        return out

    def is_irreducible_word(self, word) -> bool:
        return self._first_match(tuple(word)) is None

    def irreducible_monomials(self, max_len: int):
        """All irreducible words of length <= max_len, in deglex order."""
        out = [()]
        layer = [()]
        for _ in range(max_len):
            nxt = []
            for word in layer:
                for g in self.generators:
                    cand = word + (g,)
                    if self._first_match(cand) is None:
                        nxt.append(cand)
            out.extend(nxt)
            layer = nxt
        out.sort(key=self.deglex_key)
        return out

    # -- confluence ----------------------------------------------------------

    def confluence_check(self) -> list[OverlapFailure]:
        """All overlap and inclusion ambiguities, reduced both ways.

        Returns the ambiguities whose two branches have different normal
        forms; empty means locally confluent, hence confluent (reduction
        terminates by the order invariant).
        """
        failures = []
        seen = set()
        for i, (lhs_i, rhs_i) in enumerate(self.rules):
            for j, (lhs_j, rhs_j) in enumerate(self.rules):
                # overlap: a proper suffix of lhs_i equals a proper prefix of lhs_j
                for k in range(1, min(len(lhs_i), len(lhs_j))):
                    if lhs_i[len(lhs_i) - k:] != lhs_j[:k]:
                        continue
                    word = lhs_i + lhs_j[k:]
                    left = rhs_i * NcPolynomial.monomial(self.field, lhs_j[k:])
                    right = NcPolynomial.monomial(self.field, lhs_i[:len(lhs_i) - k]) * rhs_j
                    key = (i, j, word)
                    if key in seen:
                        continue
                    seen.add(key)
                    nf_l = self.normal_form(left)
                    nf_r = self.normal_form(right)
                    if nf_l != nf_r:
                        failures.append(OverlapFailure(i, j, word, nf_l, nf_r))
                # inclusion: lhs_j occurs properly inside lhs_i
                if i != j and len(lhs_j) < len(lhs_i):
                    for pos in range(len(lhs_i) - len(lhs_j) + 1):
                        if lhs_i[pos:pos + len(lhs_j)] != lhs_j:
                            continue
                        inner = (NcPolynomial.monomial(self.field, lhs_i[:pos])
                                 * rhs_j
                                 * NcPolynomial.monomial(self.field, lhs_i[pos + len(lhs_j):]))
                        nf_l = self.normal_form(rhs_i)
                        nf_r = self.normal_form(inner)
                        if nf_l != nf_r:
                            failures.append(OverlapFailure(i, j, lhs_i, nf_l, nf_r))
        failures.sort(key=lambda f: (f.rule_i, f.rule_j, f.word))
        return failures

    def is_confluent(self) -> bool:
        return not self.confluence_check()

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "generators": self.generators,
            "precedence": self.generators,
            "field": {"char": self.field.char},
            "rules": [{"lhs": list(lhs), "rhs": rhs.to_json()} for lhs, rhs in self.rules],
        }

    @classmethod
    def from_json(cls, data: dict, field: Field | None = None) -> "RewriteSystem":
        if field is None:
            if "field" not in data:
                raise ValidationFailure("/field: missing and no field given")
            field = Field(int(data["field"].get("char", 0)))
        generators = data.get("precedence") or data["generators"]
        rules = [(tuple(r["lhs"]), NcPolynomial.from_json(field, r["rhs"]))
                 for r in data["rules"]]
        return cls(field, generators, rules)

    def __repr__(self):
        return "RewriteSystem(%d generators, %d rules)" % (len(self.generators), len(self.rules))


def leavitt_system(n: int, field: Field) -> RewriteSystem:
    """Presentation of the algebra with a 1 x n row a and n x 1 column b
    satisfying ab = 1 and ba = I_n; generators x_1..x_n, y_1..y_n.

    The unit relation is oriented at its largest monomial:
    x_n y_n -> 1 - sum_{i<n} x_i y_i.
    """
    if n < 2:
        raise ValidationFailure("need n >= 2")
    xs = ["x%d" % (i + 1) for i in range(n)]
    ys = ["y%d" % (i + 1) for i in range(n)]
    gens = xs + ys
    rules = []
    for i in range(n):
        for j in range(n):
            rhs = NcPolynomial.one(field) if i == j else NcPolynomial.zero(field)
            rules.append(((ys[i], xs[j]), rhs))
    last = NcPolynomial.one(field)
    for i in range(n - 1):
        last = last - NcPolynomial.monomial(field, (xs[i], ys[i]))
    rules.append(((xs[n - 1], ys[n - 1]), last))
    return RewriteSystem(field, gens, rules)


class LieData:
    """A finite-dimensional Lie bracket table over a field.

    brackets[i][j] is the coordinate vector of [e_i, e_j].  Alternation is
    enforced ([e_i, e_i] = 0 and antisymmetry); the Jacobi identity is a
    separate query, since straightening a non-Jacobi table is exactly how
    the confluence check gets its negative examples.
    """

    def __init__(self, field: Field, brackets, names=None):
        self.field = field
        self.dim = len(brackets)
        self.names = list(names) if names is not None else ["e%d" % (i + 1) for i in range(self.dim)]
        if len(self.names) != self.dim or len(set(self.names)) != self.dim:
            raise ValidationFailure("bad basis names")
        self.brackets = []
        for i in range(self.dim):
            row = []
            for j in range(self.dim):
                vec = tuple(field.coerce(c) for c in brackets[i][j])
                if len(vec) != self.dim:
                    raise ValidationFailure("brackets[%d][%d] has wrong length" % (i, j))
                row.append(vec)
            self.brackets.append(row)
        zero_vec = (field.zero,) * self.dim
        for i in range(self.dim):
            if self.brackets[i][i] != zero_vec:
                raise AntisymmetryViolation("[e%d, e%d] != 0" % (i, i))
            for j in range(i + 1, self.dim):
                neg = tuple(field.neg(c) for c in self.brackets[j][i])
                if self.brackets[i][j] != neg:
                    raise AntisymmetryViolation("[e%d, e%d] != -[e%d, e%d]" % (i, j, j, i))

    def bracket_vec(self, u, v):
        """Bilinear extension of the bracket table to coordinate vectors."""
        field = self.field
        zero, add, mul = field.zero, field.add, field.mul
        out = [zero] * self.dim
        for i, a in enumerate(u):
            if a == zero:
                continue
            for j, b in enumerate(v):
                if b == zero:
                    continue
                ab = mul(a, b)
                for k, c in enumerate(self.brackets[i][j]):
                    if c != zero:
                        out[k] = add(out[k], mul(ab, c))
        return tuple(out)

    def jacobi_ok(self) -> bool:
        zero_vec = (self.field.zero,) * self.dim
        basis = [tuple(self.field.one if t == i else self.field.zero for t in range(self.dim))
                 for i in range(self.dim)]
        add = self.field.add
        for i, j, k in itertools.combinations(range(self.dim), 3):
            total = (self.field.zero,) * self.dim
            for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                term = self.bracket_vec(self.brackets[a][b], basis[c])
                total = tuple(add(x, y) for x, y in zip(total, term))
            if total != zero_vec:
                return False
        return True

    def element(self, vec) -> NcPolynomial:
        """The degree-1 polynomial with the given coordinates."""
        terms = {(self.names[i],): c for i, c in enumerate(vec)}
        return NcPolynomial(self.field, terms)

    def to_json(self) -> dict:
        fmt = self.field.format_scalar
        return {
            "dim": self.dim,
            "field": {"char": self.field.char},
            "brackets": [[[fmt(c) for c in vec] for vec in row] for row in self.brackets],
            "names": self.names,
        }

    @classmethod
    def from_json(cls, data: dict) -> "LieData":
        for key in ("dim", "field", "brackets"):
            if key not in data:
                raise ValidationFailure("/%s: missing key" % key)
        field = Field(int(data["field"].get("char", 0)))
        lie = cls(field, data["brackets"], data.get("names"))
        if lie.dim != data["dim"]:
            raise ValidationFailure("/dim: does not match brackets size")
        return lie

    @classmethod
    def load(cls, path) -> "LieData":
        import json

        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def __repr__(self):
        return "LieData(dim=%d over %r)" % (self.dim, self.field)


def sl2(field: Field) -> LieData:
    """Basis e, f, h with [e,f] = h, [h,e] = 2e, [h,f] = -2f."""
    z = field.zero
    o = field.one
    two = field.add(o, o)
    zero = (z, z, z)
    brackets = [
        [zero, (z, z, o), (field.neg(two), z, z)],
        [(z, z, field.neg(o)), zero, (z, two, z)],
        [(two, z, z), (z, field.neg(two), z), zero],
    ]
    return LieData(field, brackets, ["e", "f", "h"])


def heisenberg(field: Field) -> LieData:
    """Basis x, y, z with [x,y] = z and z central."""
    zv = (field.zero,) * 3
    brackets = [[zv, (field.zero, field.zero, field.one), zv],
                [(field.zero, field.zero, field.neg(field.one)), zv, zv],
                [zv, zv, zv]]
    return LieData(field, brackets, ["x", "y", "z"])


def abelian_lie(dim: int, field: Field) -> LieData:
    zv = (field.zero,) * dim
    return LieData(field, [[zv] * dim for _ in range(dim)])


def pbw_system(lie: LieData) -> RewriteSystem:
    """Straightening rules e_j e_i -> e_i e_j + [e_j, e_i] for j > i.

    Confluent exactly when the bracket satisfies the Jacobi identity; the
    irreducible words are then the ordered monomials.
    """
    field = lie.field
    rules = []
    for j in range(lie.dim):
        for i in range(j):
            rhs = NcPolynomial.monomial(field, (lie.names[i], lie.names[j]))
            rhs = rhs + lie.element(lie.brackets[j][i])
            rules.append(((lie.names[j], lie.names[i]), rhs))
    return RewriteSystem(field, lie.names, rules)


@dataclass
class Verdict:
    passed: bool
    reason: str | None = None
    details: dict | None = None


def _fresh_names(taken, count):
    out = []
    i = 0
    while len(out) < count:
        name = "z%d" % i
        while name in taken or name in out:
            name = "_" + name
        out.append(name)
        i += 1
    return out


def extended_system(rs: RewriteSystem, count: int = 2):
    """rs with fresh rule-free generators adjoined (a free extension)."""
    fresh = _fresh_names(set(rs.generators), count)
    return RewriteSystem(rs.field, rs.generators + fresh, rs.rules), fresh


def check_endo_fp(a_list, b_list, rs: RewriteSystem) -> Verdict:
    """Unit-sum and generic multiplicativity at the presentation level.

    Fresh generators z0, z1 play the role of two independent generic
    elements; both conditions are decided by normal-form equality.
    Additivity is automatic for maps of the shape r |-> sum a_i r b_i.
    """
    if len(a_list) != len(b_list):
        raise LengthMismatch("a and b lists differ in length")
    ext, (z0, z1) = extended_system(rs, 2)
    field = rs.field
    total = NcPolynomial.zero(field)
    for a, b in zip(a_list, b_list):
        total = total + a * b
    unit_ok = ext.normal_form(total - NcPolynomial.one(field)).is_zero()
    mz0 = NcPolynomial.monomial(field, (z0,))
    mz1 = NcPolynomial.monomial(field, (z1,))
    w_z0z1 = NcPolynomial.zero(field)
    for a, b in zip(a_list, b_list):
        w_z0z1 = w_z0z1 + a * mz0 * mz1 * b
    w_z0 = NcPolynomial.zero(field)
    w_z1 = NcPolynomial.zero(field)
    for a, b in zip(a_list, b_list):
        w_z0 = w_z0 + a * mz0 * b
        w_z1 = w_z1 + a * mz1 * b
    mult_ok = ext.normal_form(w_z0z1 - w_z0 * w_z1).is_zero()
    if not unit_ok:
        return Verdict(False, "unit-sum")
    if not mult_ok:
        return Verdict(False, "multiplicativity")
    return Verdict(True)


def fp_witness_checks(a_list, b_list, rs: RewriteSystem, samples) -> dict:
    """Injectivity and centralizer witnesses for a passing presentation pair.

    For each sample r: b_j w(r) a_j must reduce back to r (a left inverse,
    so the endomorphism is one-to-one), and each a_i b_j must commute with
    w(r).  The n^2 elements a_i b_j must also be linearly independent.
    """
    verdict = check_endo_fp(a_list, b_list, rs)
    if not verdict.passed:
        raise ValidationFailure("pair fails the endomorphism conditions: %s" % verdict.reason)
    n = len(a_list)
    field = rs.field

    def w_of(r):
        acc = NcPolynomial.zero(field)
        for a, b in zip(a_list, b_list):
            acc = acc + a * r * b
        return acc

    injectivity = True
    centralizing = True
    for r in samples:
        wr = rs.normal_form(w_of(r))
        for j in range(n):
            back = rs.normal_form(b_list[j] * wr * a_list[j] - r)
            if not back.is_zero():
                injectivity = False
        for i in range(n):
            for j in range(n):
                e = a_list[i] * b_list[j]
                comm = rs.normal_form(e * wr - wr * e)
                if not comm.is_zero():
                    centralizing = False
    units_nf = [rs.normal_form(a_list[i] * b_list[j])
                for i in range(n) for j in range(n)]
    support = sorted({w for p in units_nf for w in p.terms}, key=rs.deglex_key)
    index = {w: t for t, w in enumerate(support)}
    rows = []
    for p in units_nf:
        row = [field.zero] * len(support)
        for w, c in p.terms.items():
            row[index[w]] = c
        rows.append(row)
    rank = Matrix(field, rows).rank() if support else 0
    independent = rank == n * n
    return {
        "injectivity": injectivity,
        "centralizing": centralizing,
        "independent_units": independent,
        "rank": rank,
        "passed": injectivity and centralizing and independent,
    }


def ad_power_check(lie: LieData, a_vec, probe_vec, degree_cap: int = 8) -> dict:
    """Compare p iterated brackets with the commutator by the p-th power.

    ad_a^p(probe) is computed inside the Lie algebra; [a^p, probe] is
    normalized in the enveloping presentation.  They must agree, and the
    normal form must be of pure degree <= 1 with no constant term.  The
    Leibniz identity for commutation with a^p is also sampled on all basis
    pairs.
    """
    field = lie.field
    p = field.char
    if p == 0:
        raise CharacteristicZero("needs positive characteristic")
    if p > degree_cap:
        raise BudgetExceeded("p = %d exceeds the degree cap %d" % (p, degree_cap))
    a_vec = tuple(field.coerce(c) for c in a_vec)
    probe_vec = tuple(field.coerce(c) for c in probe_vec)
    ad_result = probe_vec
    for _ in range(p):
        ad_result = lie.bracket_vec(a_vec, ad_result)
    rs = pbw_system(lie)
    a_poly = lie.element(a_vec)
    probe_poly = lie.element(probe_vec)
    a_power = NcPolynomial.one(field)
    for _ in range(p):
        a_power = a_power * a_poly
    comm = rs.normal_form(a_power * probe_poly - probe_poly * a_power)
    degree_one = all(len(w) == 1 for w in comm.terms)
    match = degree_one and comm == rs.normal_form(lie.element(ad_result))
    # Leibniz for d = [a^p, .] on all basis pairs, inside the presentation
    leibniz_ok = True
    basis_polys = [lie.element(tuple(field.one if t == i else field.zero
                                     for t in range(lie.dim)))
                   for i in range(lie.dim)]

    def d_of(q):
        return rs.normal_form(a_power * q - q * a_power)

    for i in range(lie.dim):
        for j in range(lie.dim):
            r, s = basis_polys[i], basis_polys[j]
            bracket_rs = lie.element(lie.brackets[i][j])
            lhs = d_of(bracket_rs)
            dr, ds = d_of(r), d_of(s)
            rhs = rs.normal_form(dr * s - s * dr + r * ds - ds * r)
            # d([r,s]) against [d(r), s] + [r, d(s)], all as commutators
            if lhs != rhs:
                leibniz_ok = False
    passed = match and degree_one and leibniz_ok
    return {
        "ad_power": ad_result,
        "commutator": comm,
        "degree_one": degree_one,
        "match": match,
        "leibniz_ok": leibniz_ok,
        "passed": passed,
    }


def lie_inner_derivation_check(lie: LieData, b: NcPolynomial) -> Verdict:
    """Does commutation with b restrict to a derivation of the Lie algebra?

    b must have zero augmentation; the answer is yes exactly when every
    [b, e_i] normalizes to pure degree <= 1 (it then lies in the Lie
    algebra, and commutators always satisfy Leibniz).
    """
    rs = pbw_system(lie)
    b = rs.normal_form(b)
    if augmentation(b) != lie.field.zero:
        raise NonzeroAugmentation("b has nonzero constant term")
    failing = []
    images = []
    for i in range(lie.dim):
        ei = NcPolynomial.monomial(lie.field, (lie.names[i],))
        comm = rs.normal_form(b * ei - ei * b)
        images.append(comm)
        if any(len(w) != 1 for w in comm.terms):
            failing.append((lie.names[i], comm))
    if failing:
        name, comm = failing[0]
        return Verdict(False, "leaves-degree-1",
                       {"basis": name, "normal_form": comm.display()})
    return Verdict(True, None, {"images": [c.display() for c in images]})


def scalar_unit_search(rs: RewriteSystem, degree_cap: int = 2,
                       budget: int = 1 << 16, coeffs=None) -> dict:
    """Exhaustive search for pairs (a, b) with b a = 1 in normal form.

    a ranges over polynomials on the irreducible monomials of degree <=
    degree_cap with coefficients from the given set, taken monic in the
    leading monomial (pairs scale); b is then solved for linearly over the
    same monomial space.  For an enveloping presentation over a field the
    expectation is that only scalars appear; a presentation with a one-sided
    inverse (y_1 x_1 = 1) shows up by contrast.
    """
    field = rs.field
    if coeffs is None:
        if field.char == 0:
            coeffs = (0, 1, -1)
        else:
            coeffs = tuple(range(field.char))
    coeffs = tuple(field.coerce(c) for c in coeffs)
    if field.zero not in coeffs:
        raise ValidationFailure("coefficient set must contain 0")
    monomials = rs.irreducible_monomials(degree_cap)
    m = len(monomials)
    total = len(coeffs) ** m
    if total > budget:
        raise BudgetExceeded("%d candidates exceed the budget %d" % (total, budget))
    # products of basis monomials, normalized once
    prod_nf = [[rs.normal_form(NcPolynomial.monomial(field, monomials[i] + monomials[j]))
                for j in range(m)] for i in range(m)]
    one = NcPolynomial.one(field)
    add, mul, zero = field.add, field.mul, field.zero
    solutions = []
    searched = 0
    aug_prune = rs.preserves_augmentation
    const_index = monomials.index(())
    for pattern in itertools.product(coeffs, repeat=m):
        if all(c == zero for c in pattern):
            continue
        # monic in the largest monomial present (deglex order of the list)
        lead = max(t for t, c in enumerate(pattern) if c != zero)
        if pattern[lead] != field.one:
            continue
        if aug_prune and pattern[const_index] == zero:
            continue
        searched += 1
        # columns: nf(m_i * a) as sparse word->coeff dicts
        echelon = []  # (pivot word, vector dict, combo dict)
        target = {(): field.one}
        combo_target: dict = {}
        for idx in range(m):
            vec: dict = {}
            for j, c in enumerate(pattern):
                if c == zero:
                    continue
                for w, v in prod_nf[idx][j].terms.items():
                    nv = add(vec.get(w, zero), mul(c, v))
                    if nv == zero:
                        vec.pop(w, None)
                    else:
                        vec[w] = nv
            combo = {idx: field.one}
            # reduce against the echelon basis
            for pw, pvec, pcombo in echelon:
                if pw in vec:
                    factor = field.div(vec[pw], pvec[pw])
                    for w, v in pvec.items():
                        nv = field.sub(vec.get(w, zero), mul(factor, v))
                        if nv == zero:
                            vec.pop(w, None)
                        else:
                            vec[w] = nv
                    for t, v in pcombo.items():
                        nv = field.sub(combo.get(t, zero), mul(factor, v))
                        if nv == zero:
                            combo.pop(t, None)
                        else:
                            combo[t] = nv
            if vec:
                pivot = max(vec, key=rs.deglex_key)
                echelon.append((pivot, vec, combo))
        # reduce the target against the echelon basis
        for pw, pvec, pcombo in echelon:
            if pw in target:
                factor = field.div(target[pw], pvec[pw])
                for w, v in pvec.items():
                    nv = field.sub(target.get(w, zero), mul(factor, v))
                    if nv == zero:
                        target.pop(w, None)
                    else:
                        target[w] = nv
                for t, v in pcombo.items():
                    nv = field.add(combo_target.get(t, zero), mul(factor, v))
                    if nv == zero:
                        combo_target.pop(t, None)
                    else:
                        combo_target[t] = nv
        if not target:
            a_poly = NcPolynomial(field, {monomials[t]: c for t, c in enumerate(pattern)
                                          if c != zero})
            b_poly = NcPolynomial(field, {monomials[t]: c for t, c in combo_target.items()})
            if not rs.normal_form(b_poly * a_poly - one).is_zero():
                raise ValidationFailure("solver produced a bad inverse")
            solutions.append((a_poly, b_poly))
    all_scalar = all(set(a.terms) <= {()} and set(b.terms) <= {()}
                     for a, b in solutions)
    return {
        "searched": searched,
        "solutions": solutions,
        "all_scalar": all_scalar,
        "monomials": m,
    }
