"""Exact scalar arithmetic and linear algebra over QQ and GF(p).

Everything downstream (words, tensors, rewriting, actions) reduces to exact
row operations over a field, so this module deliberately avoids floats.
Rationals are stdlib Fractions; prime-field elements are ints in [0, p).
"""

from __future__ import annotations

import operator
from fractions import Fraction


class FieldMismatch(ValueError):
    """Raised when scalars or matrices from different fields are combined."""


class DivisionByZero(ZeroDivisionError):
    """Raised on inversion of a zero scalar."""


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n below 2**64."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Field:
    """A coefficient field: characteristic 0 (QQ) or a prime p (GF(p)).

    Instances expose raw-value arithmetic (add/sub/mul/neg/inv on Fractions
    or ints) so hot loops can work without wrapper objects.  The Scalar
    class below wraps the same operations for the serialization surface.
    """

    _cache: dict[int, "Field"] = {}

    def __new__(cls, char: int):
        if char in cls._cache:
            return cls._cache[char]
        if char != 0:
            if char >= 1 << 63:
                raise ValueError("characteristic must fit in a machine word")
            if not is_prime(char):
                raise ValueError("characteristic must be 0 or a prime, got %r" % (char,))
        self = object.__new__(cls)
        self.char = char
        if char == 0:
            self.zero = Fraction(0)
            self.one = Fraction(1)
            self.add = operator.add
            self.sub = operator.sub
            self.mul = operator.mul
            self.neg = operator.neg
        else:
            p = char
            self.zero = 0
            self.one = 1 % p
            self.add = lambda a, b: (a + b) % p
            self.sub = lambda a, b: (a - b) % p
            self.mul = lambda a, b: (a * b) % p
            self.neg = lambda a: (-a) % p
        cls._cache[char] = self
        return self

    def inv(self, a):
        if a == self.zero:
            raise DivisionByZero("cannot invert zero in %r" % self)
        if self.char == 0:
            return 1 / a
        return pow(a, -1, self.char)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def coerce(self, value):
        """Turn an int, Fraction, or serialized string into a raw field value."""
        if isinstance(value, str):
            return self.parse_scalar(value)
        if isinstance(value, bool):
            raise TypeError("booleans are not scalars")
        if self.char == 0:
            if isinstance(value, (int, Fraction)):
                return Fraction(value)
            raise TypeError("cannot coerce %r into QQ" % (value,))
        if isinstance(value, int):
            return value % self.char
        if isinstance(value, Fraction):
            return self.div(value.numerator % self.char, value.denominator % self.char)
        raise TypeError("cannot coerce %r into GF(%d)" % (value, self.char))

    def elements(self):
        """All field elements; only sensible for small prime fields."""
        if self.char == 0:
            raise ValueError("QQ is not enumerable")
        return range(self.char)

    def format_scalar(self, value) -> str:
        if self.char == 0:
            return str(Fraction(value))
        return "%d mod %d" % (value % self.char, self.char)

    def parse_scalar(self, text: str):
        """Parse 'n/d' or 'k mod p' back into a raw value, bit-exactly."""
        text = text.strip()
        if "mod" in text:
            left, right = text.split("mod")
            p = int(right.strip())
            if p != self.char:
                raise FieldMismatch("scalar %r does not live in %r" % (text, self))
            return int(left.strip()) % p
        if self.char == 0:
            return Fraction(text)
        # bare integers are accepted in prime fields for convenience
        return int(text) % self.char

    def __eq__(self, other):
        return isinstance(other, Field) and other.char == self.char

    def __hash__(self):
        return hash(("Field", self.char))

    def __repr__(self):
        return "QQ" if self.char == 0 else "GF(%d)" % self.char


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


class Scalar:
    """A field element tagged with its field.

    Mixing tags raises FieldMismatch instead of silently coercing; the
    string form round-trips bit-exactly through parse().
    """

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value):
        self.field = field
        self.value = field.coerce(value)

    def _check(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            raise TypeError("expected a Scalar, got %r" % (other,))
        if other.field != self.field:
            raise FieldMismatch("%r and %r live in different fields" % (self, other))
        return other

    def __add__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.field.add(self.value, other.value))

    def __sub__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.field.sub(self.value, other.value))

    def __mul__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.field.mul(self.value, other.value))

    def __truediv__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.field.div(self.value, other.value))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def inv(self) -> "Scalar":
        return Scalar(self.field, self.field.inv(self.value))

    def is_zero(self) -> bool:
        return self.value == self.field.zero

    def __eq__(self, other):
        return (
            isinstance(other, Scalar)
            and other.field == self.field
            and other.value == self.value
        )

    def __hash__(self):
        return hash((self.field, self.value))

    def serialize(self) -> str:
        return self.field.format_scalar(self.value)

    @classmethod
    def parse(cls, text: str, field: Field | None = None) -> "Scalar":
        """Parse a serialized scalar; the field is inferred from 'k mod p' forms."""
        if field is None:
            field = GF(int(text.split("mod")[1])) if "mod" in text else QQ
        return cls(field, field.parse_scalar(text))

    def __repr__(self):
        return "Scalar(%s)" % self.serialize()


def rref_raw(field: Field, rows: list[list]) -> tuple[list[list], tuple[int, ...]]:
    """In-place reduced row echelon form with first-nonzero pivoting.

    Returns the reduced rows and the pivot column tuple.  Rows must hold raw
    field values.  The pivot rule (first row with a nonzero entry in the
    current column) is part of the contract: every caller that freezes
    expected output relies on it.
    """
    if not rows:
        return rows, ()
    ncols = len(rows[0])
    nrows = len(rows)
    sub, mul, div, zero = field.sub, field.mul, field.div, field.zero
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if rows[i][c] != zero:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        pv = rows[r][c]
        if pv != field.one:
            row = rows[r]
            for j in range(c, ncols):
                row[j] = div(row[j], pv)
        for i in range(nrows):
            if i != r and rows[i][c] != zero:
                factor = rows[i][c]
                row_i, row_r = rows[i], rows[r]
                for j in range(c, ncols):
                    row_i[j] = sub(row_i[j], mul(factor, row_r[j]))
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, tuple(pivots)


def kernel_raw(field: Field, rref_rows: list[list], pivots: tuple[int, ...], ncols: int):
    """Kernel basis (one vector per free column) from a matrix already in rref."""
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [field.zero] * ncols
        vec[free] = field.one
        for r, pc in enumerate(pivots):
            vec[pc] = field.neg(rref_rows[r][free])
        basis.append(tuple(vec))
    return basis


class Matrix:
    """Dense exact matrix over a single field, row-major."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, rows):
        self.field = field
        self.rows = [[field.coerce(x) for x in row] for row in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        for row in self.rows:
            if len(row) != self.ncols:
                raise ValueError("ragged rows")

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, [[field.one if i == j else field.zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        return cls(field, [[field.zero] * ncols for _ in range(nrows)])

    @classmethod
    def from_columns(cls, field: Field, cols) -> "Matrix":
        cols = [list(c) for c in cols]
        return cls(field, [[cols[j][i] for j in range(len(cols))] for i in range(len(cols[0]))])

    def _check(self, other: "Matrix"):
        if self.field != other.field:
            raise FieldMismatch("matrices over different fields")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        add = self.field.add
        return Matrix(
            self.field,
            [[add(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        sub = self.field.sub
        return Matrix(
            self.field,
            [[sub(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
        )

    def __mul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch: %dx%d times %dx%d"
                             % (self.nrows, self.ncols, other.nrows, other.ncols))
        f = self.field
        add, mul, zero = f.add, f.mul, f.zero
        out = []
        for row in self.rows:
            out_row = []
            for j in range(other.ncols):
                acc = zero
                for k, a in enumerate(row):
                    if a != zero:
                        acc = add(acc, mul(a, other.rows[k][j]))
                out_row.append(acc)
            out.append(out_row)
        return Matrix(f, out)

    def scale(self, c) -> "Matrix":
        c = self.field.coerce(c)
        mul = self.field.mul
        return Matrix(self.field, [[mul(c, x) for x in row] for row in self.rows])

    def transpose(self) -> "Matrix":
        return Matrix(self.field, [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)])

    def apply(self, vec):
        """Matrix times coordinate column, as a tuple."""
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        f = self.field
        add, mul, zero = f.add, f.mul, f.zero
        out = []
        for row in self.rows:
            acc = zero
            for a, x in zip(row, vec):
                if a != zero and x != zero:
                    acc = add(acc, mul(a, x))
            out.append(acc)
        return tuple(out)

    def column(self, j):
        return tuple(row[j] for row in self.rows)

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        rows = [list(r) for r in self.rows]
        rows, pivots = rref_raw(self.field, rows)
        return Matrix(self.field, rows), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self):
        reduced, pivots = self.rref()
        return kernel_raw(self.field, reduced.rows, pivots, self.ncols)

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows

    def inverse(self) -> "Matrix":
        if self.nrows != self.ncols:
            raise ValueError("not square")
        n = self.nrows
        f = self.field
        aug = [list(row) + [f.one if i == j else f.zero for j in range(n)]
               for i, row in enumerate(self.rows)]
        aug, pivots = rref_raw(f, aug)
        if pivots != tuple(range(n)):
            raise ValueError("matrix is singular")
        return Matrix(f, [row[n:] for row in aug])

    def solve(self, rhs):
        """One solution of self * x = rhs (a vector), or None."""
        f = self.field
        aug = [list(row) + [f.coerce(b)] for row, b in zip(self.rows, rhs)]
        aug, pivots = rref_raw(f, aug)
        if self.ncols in pivots:
            return None
        x = [f.zero] * self.ncols
        for r, pc in enumerate(pivots):
            x[pc] = aug[r][self.ncols]
        return tuple(x)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and other.field == self.field
            and other.rows == self.rows
        )

    def __hash__(self):
        return hash((self.field, tuple(tuple(r) for r in self.rows)))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format_scalar(x) for x in row) for row in self.rows)
        return "Matrix[%s]" % body


def rref_rank_kernel(m: Matrix):
    """One-call bundle: (rref matrix, pivot columns, rank, kernel basis)."""
    reduced, pivots = m.rref()
    kernel = kernel_raw(m.field, reduced.rows, pivots, m.ncols)
    return reduced, pivots, len(pivots), kernel


def vec_add(field: Field, u, v):
    add = field.add
    return tuple(add(a, b) for a, b in zip(u, v))

def vec_sub(field: Field, u, v):
    sub = field.sub
    return tuple(sub(a, b) for a, b in zip(u, v))

def vec_scale(field: Field, c, u):
    mul = field.mul
    return tuple(mul(c, a) for a in u)

def vec_is_zero(field: Field, u) -> bool:
    zero = field.zero
    return all(a == zero for a in u)

def zero_vec(field: Field, n: int):
    return (field.zero,) * n
