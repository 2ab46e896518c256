"""Immutable square matrices over an exact ring.

Rows are stored as nested tuples of canonical ring element values; public
row/column indices are 1-based throughout.  Inversion is exact: triangular
matrices with unit diagonal go through back-substitution, everything else
through the adjugate with a subset-DP determinant (intended for the small
ambient sizes used here, n <= 8).
"""

class MatrixError(ValueError):
    pass


class Matrix:
    __slots__ = ("ring", "n", "rows", "_hash")

    def __init__(self, ring, rows):
        self.ring = ring
        self.rows = tuple(tuple(r) for r in rows)
        self.n = len(self.rows)
        for r in self.rows:
            if len(r) != self.n:
                raise MatrixError("matrix must be square")
        self._hash = None

    # -- construction ------------------------------------------------
    @classmethod
    def identity(cls, ring, n):
        if n < 1:
            raise MatrixError(f"size must be positive, got {n}")
        z, o = ring.zero, ring.one
        return cls(ring, tuple(
            tuple(o if i == j else z for j in range(n)) for i in range(n)
        ))

    @classmethod
    def elementary(cls, ring, n, i, j, r):
        """Identity plus r in row i, column j (1-based, off-diagonal)."""
        if not (1 <= i <= n and 1 <= j <= n):
            raise MatrixError(f"indices ({i},{j}) outside 1..{n}")
        if i == j:
            raise MatrixError("elementary matrix needs i != j")
        rows = [list(row) for row in cls.identity(ring, n).rows]
        rows[i - 1][j - 1] = r
        return cls(ring, rows)

    @classmethod
    def diagonal(cls, ring, entries):
        entries = tuple(entries)
        for e in entries:
            if not ring.is_unit(e):
                raise MatrixError(
                    f"diagonal entry {ring.element_repr(e)} is not a unit"
                )
        z = ring.zero
        n = len(entries)
        return cls(ring, tuple(
            tuple(entries[i] if i == j else z for j in range(n)) for i in range(n)
        ))

    @classmethod
    def from_rows(cls, ring, rows):
        return cls(ring, rows)

    # -- basics ------------------------------------------------------
    def entry(self, i, j):
        """1-based entry access."""
        return self.rows[i - 1][j - 1]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.ring == other.ring
            and self.rows == other.rows
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.descriptor, self.rows))
        return self._hash

    def __repr__(self):
        er = self.ring.element_repr
        body = "; ".join(
            " ".join(er(v) for v in row) for row in self.rows
        )
        return f"[{body}]"

    def is_identity(self):
        z, o = self.ring.zero, self.ring.one
        return all(
            v == (o if i == j else z)
            for i, row in enumerate(self.rows)
            for j, v in enumerate(row)
        )

    def is_diagonal(self):
        z = self.ring.zero
        return all(
            v == z
            for i, row in enumerate(self.rows)
            for j, v in enumerate(row)
            if i != j
        )

    def is_upper_triangular(self):
        z = self.ring.zero
        return all(
            self.rows[i][j] == z for i in range(self.n) for j in range(i)
        )

    def is_lower_triangular(self):
        z = self.ring.zero
        return all(
            self.rows[i][j] == z
            for i in range(self.n)
            for j in range(i + 1, self.n)
        )

    def is_unitriangular(self):
        o = self.ring.one
        return self.is_upper_triangular() and all(
            self.rows[i][i] == o for i in range(self.n)
        )

    def diagonal_entries(self):
        return tuple(self.rows[i][i] for i in range(self.n))

    def transpose(self):
        return Matrix(self.ring, tuple(zip(*self.rows)))

    # -- arithmetic --------------------------------------------------
    def _require_compatible(self, other):
        if self.ring != other.ring:
            raise MatrixError(
                f"ring mismatch: {self.ring.descriptor} vs {other.ring.descriptor}"
            )
        if self.n != other.n:
            raise MatrixError(f"size mismatch: {self.n} vs {other.n}")

    def mul(self, other):
        self._require_compatible(other)
        R = self.ring
        add, mul, z = R.add, R.mul, R.zero
        a, b = self.rows, other.rows
        n = self.n
        bt = tuple(zip(*b))
        out = []
        for i in range(n):
            ai = a[i]
            row = []
            for j in range(n):
                bj = bt[j]
                acc = z
                for k in range(n):
                    aik = ai[k]
                    if aik != z:
                        acc = add(acc, mul(aik, bj[k]))
                row.append(acc)
            out.append(tuple(row))
        return Matrix(R, tuple(out))

    def __matmul__(self, other):
        return self.mul(other)

    def power(self, k):
        k = int(k)
        if k < 0:
            return self.inverse().power(-k)
        out = Matrix.identity(self.ring, self.n)
        base = self
        while k:
            if k & 1:
                out = out.mul(base)
            base = base.mul(base)
            k >>= 1
        return out

    def det(self):
        """Determinant by DP over column subsets; exact over any ring."""
        R = self.ring
        n = self.n
        add, mul, neg, z = R.add, R.mul, R.neg, R.zero
        states = {0: R.one}
        for i in range(n):
            nxt = {}
            row = self.rows[i]
            for mask, val in states.items():
                if val == z:
                    continue
                for j in range(n):
                    bit = 1 << j
                    if mask & bit:
                        continue
                    a = row[j]
                    if a == z:
                        continue
                    # parity of used columns below j gives the sign
                    swaps = i + bin(mask & (bit - 1)).count("1")
                    term = mul(val, a)
                    if swaps % 2:
                        term = neg(term)
                    key = mask | bit
                    nxt[key] = add(nxt.get(key, z), term)
            states = nxt
        full = (1 << n) - 1
        return states.get(full, z)

    def inverse(self):
        R = self.ring
        n = self.n
        if self.is_diagonal():
            invs = []
            for d in self.diagonal_entries():
                iv = R.try_inverse(d)
                if iv is None:
                    raise MatrixError(
                        f"diagonal entry {R.element_repr(d)} is not a unit"
                    )
                invs.append(iv)
            return Matrix.diagonal(R, tuple(invs))
        if self.is_upper_triangular() and all(
            R.is_unit(d) for d in self.diagonal_entries()
        ):
            return self._inverse_upper()
        if self.is_lower_triangular() and all(
            R.is_unit(d) for d in self.diagonal_entries()
        ):
            return self.transpose()._inverse_upper().transpose()
        d = self.det()
        dinv = R.try_inverse(d)
        if dinv is None:
            raise MatrixError(
                f"matrix is not invertible (determinant {R.element_repr(d)})"
            )
        adj = self._adjugate()
        return Matrix(R, tuple(
            tuple(R.mul(dinv, v) for v in row) for row in adj.rows
        ))

    def _inverse_upper(self):
        R = self.ring
        n = self.n
        z = R.zero
        a = self.rows
        dinv = [R.inverse(a[i][i]) for i in range(n)]
        out = [[z] * n for _ in range(n)]
        for j in range(n - 1, -1, -1):
            for i in range(j, -1, -1):
                if i == j:
                    out[i][j] = dinv[i]
                    continue
                acc = z
                for k in range(i + 1, j + 1):
                    if a[i][k] != z and out[k][j] != z:
                        acc = R.add(acc, R.mul(a[i][k], out[k][j]))
                out[i][j] = R.neg(R.mul(dinv[i], acc))
        return Matrix(R, tuple(tuple(row) for row in out))

    def _minor(self, drop_i, drop_j):
        rows = tuple(
            tuple(v for j, v in enumerate(row) if j != drop_j)
            for i, row in enumerate(self.rows)
            if i != drop_i
        )
        return Matrix(self.ring, rows)

    def _adjugate(self):
        R = self.ring
        n = self.n
        if n == 1:
            return Matrix(R, ((R.one,),))
        out = [[R.zero] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                c = self._minor(j, i).det()
                if (i + j) % 2:
                    c = R.neg(c)
                out[i][j] = c
        return Matrix(R, tuple(tuple(row) for row in out))


# -- group-theoretic helpers ------------------------------------------


def commutator(x, y):
    """x y x^-1 y^-1."""
    return x.mul(y).mul(x.inverse()).mul(y.inverse())


def conjugate(x, y):
    """x y x^-1."""
    return x.mul(y).mul(x.inverse())


def conjugate_by_diagonal(d, e):
    """d e d^-1 computed entrywise for diagonal d."""
    if not d.is_diagonal():
        raise MatrixError("conjugating matrix is not diagonal")
    d._require_compatible(e)
    R = d.ring
    diag = d.diagonal_entries()
    inv = tuple(R.inverse(v) for v in diag)
    rows = tuple(
        tuple(R.mul(R.mul(diag[i], e.rows[i][j]), inv[j]) for j in range(e.n))
        for i in range(e.n)
    )
    return Matrix(R, rows)


def hall_identity_check(a, b, c):
    """Two composite commutator identities that hold in any group.

    First: [c a c^-1, [b, c]] * [b c b^-1, [a, b]] * [a b a^-1, [c, a]] = 1.
    Second: [a b, c] = a [b, c] a^-1 * [a, c].
    """
    a._require_compatible(b)
    a._require_compatible(c)
    one = Matrix.identity(a.ring, a.n)
    t1 = commutator(conjugate(c, a), commutator(b, c))
    t2 = commutator(conjugate(b, c), commutator(a, b))
    t3 = commutator(conjugate(a, b), commutator(c, a))
    first = t1.mul(t2).mul(t3) == one
    lhs = commutator(a.mul(b), c)
    rhs = conjugate(a, commutator(b, c)).mul(commutator(a, c))
    second = lhs == rhs
    return first and second
