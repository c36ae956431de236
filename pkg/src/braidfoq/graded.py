"""Graded parameter data (V, pi, omega): validation, construction, and
the invariants attached to the defining block condition.

The block condition asks for a nonzero scalar c with

    conj(Omega_{a, d-a}) @ Omega_{d-a, a} = c * zeta^(d*a) * I

for every occupied degree a, where Omega_{a,b} collects the entries
omega[i][j] with degree(i) = a and degree(j) = b.  Equivalently,
conj(Omega) @ Omega = c * diag(zeta^(d*degree(i))).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field

from .scalar import Field, Matrix, Scalar, SingularMatrix, sqrt_fraction

__all__ = [
    "GradedSpace",
    "Infeasible",
    "OmegaData",
    "ValidationReport",
    "f_matrix",
    "irreducibility_test",
    "omega_tilde",
    "solve_omega",
    "triviality_lhs",
    "triviality_scan",
    "validate",
]


class Infeasible(ValueError):
    """No valid omega exists for the requested parameters."""


@dataclass(frozen=True)
class GradedSpace:
    """Dimension, sorted integer degree vector, and the deformation phase."""

    n: int
    degrees: tuple[int, ...]
    zeta: Scalar
    field: Field

    def __post_init__(self):
        if self.n < 1 or len(self.degrees) != self.n:
            raise ValueError("degree vector length must equal n")
        if any(a > b for a, b in zip(self.degrees, self.degrees[1:])):
            raise ValueError("degrees must be sorted ascending")
        if self.zeta.field != self.field:
            raise ValueError("zeta must live in the declared field")
        if not (self.zeta * self.zeta.conj()).is_one():
            raise ValueError("zeta must have modulus one")

    def zeta_pow(self, exponent: int) -> Scalar:
        if exponent >= 0:
            return self.zeta ** exponent
        return self.zeta.conj() ** (-exponent)

    def degree_indices(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for i, a in enumerate(self.degrees):
            out.setdefault(a, []).append(i)
        return out

    def phase_diagonal(self, d: int) -> Matrix:
        """diag(zeta^(d*degree(i)))."""
        zero = self.field.zero()
        return Matrix(self.field, [
            [self.zeta_pow(d * self.degrees[i]) if i == j else zero for j in range(self.n)]
            for i in range(self.n)])

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "degrees": list(self.degrees),
            "zeta": self.zeta.to_json(),
            "field": self.field.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "GradedSpace":
        fld = Field.from_json(data["field"])
        return cls(n=int(data["n"]), degrees=tuple(int(a) for a in data["degrees"]),
                   zeta=Scalar.from_json(data["zeta"], fld), field=fld)


@dataclass(frozen=True)
class OmegaData:
    """A graded space together with a d-homogeneous matrix omega."""

    space: GradedSpace
    omega: Matrix
    d: int
    branch_warning: bool = dataclass_field(default=False, compare=False)

    def __post_init__(self):
        n = self.space.n
        if self.omega.rows != n or self.omega.cols != n:
            raise ValueError("omega must be square of size n")
        if self.omega.field != self.space.field:
            raise ValueError("omega entries must live in the space's field")
        deg = self.space.degrees
        for i in range(n):
            for j in range(n):
                if deg[i] + deg[j] != self.d and not self.omega[i, j].is_zero():
                    raise ValueError(
                        f"omega[{i}][{j}] must vanish: degrees {deg[i]}+{deg[j]} != {self.d}")

    def block(self, a: int, b: int) -> Matrix | None:
        """The block of omega with row degree a and column degree b."""
        idx = self.space.degree_indices()
        rows, cols = idx.get(a), idx.get(b)
        if not rows or not cols:
            return None
        return Matrix(self.space.field,
                      [[self.omega[i, j] for j in cols] for i in rows])

    def to_json(self) -> dict:
        out = {
            "n": self.space.n,
            "degrees": list(self.space.degrees),
            "zeta": self.space.zeta.to_json(),
            "d": self.d,
            "field": self.space.field.to_json(),
            "omega": self.omega.to_json(),
        }
        if self.branch_warning:
            out["branch_warning"] = True
        return out

    @classmethod
    def from_json(cls, data: dict) -> "OmegaData":
        fld = Field.from_json(data["field"])
        space = GradedSpace(n=int(data["n"]), degrees=tuple(int(a) for a in data["degrees"]),
                            zeta=Scalar.from_json(data["zeta"], fld), field=fld)
        omega = Matrix.from_json(data["omega"], fld)
        return cls(space=space, omega=omega, d=int(data["d"]),
                   branch_warning=bool(data.get("branch_warning", False)))


@dataclass(frozen=True)
class ValidationReport:
    holds: bool
    c: Scalar | None
    block_residuals: dict[int, Matrix]
    invertible: bool
    phase_consistency: bool
    reason: str | None = None

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "c": None if self.c is None else self.c.to_json(),
            "invertible": self.invertible,
            "phase_consistency": self.phase_consistency,
            "reason": self.reason,
            "block_residual_zero": {str(a): m.is_zero() for a, m in sorted(self.block_residuals.items())},
        }


def validate(data: OmegaData) -> ValidationReport:
    """Check the block condition and extract the scalar c when it holds."""
    space, d = data.space, data.d
    if data.omega.rows != data.omega.cols:
        raise ValueError("omega must be square")
    idx = space.degree_indices()
    occupied = sorted(idx)
    invertible = data.omega.rank() == space.n

    c: Scalar | None = None
    residuals: dict[int, Matrix] = {}
    failure: str | None = None
    for a in occupied:
        upper = data.block(a, d - a)
        lower = data.block(d - a, a)
        size = len(idx[a])
        if upper is None or lower is None:
            # the whole degree-a row band of omega is zero
            product = Matrix.zeros(space.field, size, size)
        else:
            product = upper.conj() @ lower
        phase = space.zeta_pow(d * a)
        if c is None:
            # c is pinned by the lowest occupied degree; later blocks are checked
            lam = product.scalar_multiple_of_identity()
            if lam is None:
                residuals[a] = product
                failure = failure or "block product is not a scalar multiple of the identity"
                continue
            candidate = lam / phase
            if candidate.is_zero():
                residuals[a] = product
                failure = failure or "singular"
                continue
            c = candidate
        expected = Matrix.identity(space.field, size).scale(c * phase)
        residuals[a] = product - expected
        if not residuals[a].is_zero():
            failure = failure or f"block condition fails at degree {a}"

    phase_ok = False
    if c is not None:
        phase_ok = (c.conj() / c) == space.zeta_pow(d * d)
        if not phase_ok:
            failure = failure or "conj(c)/c != zeta^(d^2)"
    else:
        failure = failure or "singular"

    holds = (failure is None and c is not None and invertible and phase_ok
             and all(m.is_zero() for m in residuals.values()))
    if not holds and failure is None:
        failure = "singular" if not invertible else "inconsistent blocks"
    return ValidationReport(holds=holds, c=c, block_residuals=residuals,
                            invertible=invertible, phase_consistency=phase_ok,
                            reason=None if holds else failure)


def _standard_antisymmetric(field: Field, size: int) -> Matrix:
    """Block-diagonal J with 2x2 blocks [[0,-1],[1,0]]; J conj(J) = -I."""
    assert size % 2 == 0
    zero, one = field.zero(), field.one()
    entries = [[zero] * size for _ in range(size)]
    for b in range(0, size, 2):
        entries[b][b + 1] = -one
        entries[b + 1][b] = one
    return Matrix(field, entries)


def _default_c(space: GradedSpace, d: int) -> Scalar:
    """Some c with conj(c)/c = zeta^(d^2), preferring the middle-block-friendly one."""
    field = space.field
    if d % 2 == 0:
        # c = zeta^(-d^2/2) gives a middle-block demand of exactly +1
        return space.zeta_pow(-(d * d) // 2)
    t = space.zeta_pow(d * d)
    if t.is_one():
        return field.one()
    one = field.one()
    cand = one + t.conj()
    if not cand.is_zero():
        return cand
    # t = -1: need a purely imaginary c
    if field.exact and field.order >= 3:
        z = field.root(1)
        return z - z.conj()
    raise Infeasible("no scalar c with conj(c)/c = zeta^(d^2) exists in this field")


def solve_omega(space: GradedSpace, d: int, free_blocks: dict[int, Matrix],
                c: Scalar | None = None) -> OmegaData:
    """Build a valid omega from free blocks below the middle degree.

    Blocks Omega_{a, d-a} for occupied degrees a < d/2 come from
    free_blocks; their partners are Omega_{d-a, a} = c * zeta^(d*a) *
    conj(Omega_{a, d-a})^(-1).  For even d, the middle block X must solve
    conj(X) X = r * I with r = c * zeta^(d^2/2): sqrt(r) * I when r > 0,
    or sqrt(|r|) * J when r < 0 and the middle dimension is even.
    """
    field = space.field
    idx = space.degree_indices()
    for a, rows in idx.items():
        partner = idx.get(d - a)
        if partner is None or len(partner) != len(rows):
            raise Infeasible(
                f"occupied degrees are not symmetric: dim V_{a} = {len(rows)} but "
                f"dim V_{d - a} = {0 if partner is None else len(partner)}")

    if c is None:
        c = _default_c(space, d)
    else:
        if c.field != field:
            raise ValueError("c must live in the space's field")
        if c.is_zero():
            raise ValueError("c must be nonzero")
        if (c.conj() / c) != space.zeta_pow(d * d):
            raise ValueError("c violates conj(c)/c = zeta^(d^2)")

    zero = field.zero()
    entries = [[zero] * space.n for _ in range(space.n)]

    def _place(block: Matrix, rows: list[int], cols: list[int]):
        for bi, i in enumerate(rows):
            for bj, j in enumerate(cols):
                entries[i][j] = block[bi, bj]

    for a in sorted(idx):
        if 2 * a > d:
            continue
        rows, cols = idx[a], idx[d - a]
        if 2 * a == d:
            # middle block for even d
            r = c * space.zeta_pow((d * d) // 2)
            if not r.is_real():
                raise Infeasible("middle-block demand c*zeta^(d^2/2) is not real")
            sign = r.real_sign()
            size = len(rows)
            if sign > 0:
                root = _scalar_sqrt(r)
                middle = Matrix.identity(field, size).scale(root)
            elif sign < 0:
                if size % 2 != 0:
                    raise Infeasible(
                        "determinant obstruction: negative middle-block demand with odd dimension")
                root = _scalar_sqrt(-r)
                middle = _standard_antisymmetric(field, size).scale(root)
            else:
                raise Infeasible("middle-block demand is zero")
            _place(middle, rows, cols)
            continue
        free = free_blocks.get(a)
        if free is None:
            raise Infeasible(f"missing free block for degree {a}")
        if free.rows != len(rows) or free.cols != len(cols):
            raise Infeasible(f"free block for degree {a} has the wrong shape")
        try:
            partner = free.conj().inverse().scale(c * space.zeta_pow(d * a))
        except SingularMatrix as exc:
            raise Infeasible(f"free block for degree {a} is singular") from exc
        _place(free, rows, cols)
        _place(partner, idx[d - a], idx[a])

    data = OmegaData(space=space, omega=Matrix(field, entries), d=d)
    report = validate(data)
    assert report.holds, "solve_omega produced an invalid instance"
    return data


def _scalar_sqrt(value: Scalar) -> Scalar:
    """Exact square root of a positive scalar; rational squares only."""
    field = value.field
    if not field.exact:
        import cmath

        return field.from_complex(cmath.sqrt(value.value))
    q = value.as_rational()
    if q is not None:
        root = sqrt_fraction(q)
        if root is not None:
            return field.from_rational(root)
    raise Infeasible(
        "middle-block demand has no exact square root in this field; "
        "choose c so that c*zeta^(d^2/2) is a rational square, or use approx mode")


def omega_tilde(data: OmegaData) -> Matrix:
    """Entrywise phase twist: tilde(omega)[i][j] = omega[i][j] * zeta^(deg_i*deg_j)."""
    space = data.space
    deg = space.degrees
    return Matrix(space.field, [
        [data.omega[i, j] * space.zeta_pow(deg[i] * deg[j]) for j in range(space.n)]
        for i in range(space.n)])


def _triviality_factors(data: OmegaData):
    """The two matrix families whose products give the quartic sums.

    The quartic sum factorizes as A_j[i][k] * B_i[j][l] with
      A_j = conj(omega) @ diag(zeta^(deg_j*deg_t)) @ omega
      B_i = inv(tilde) @ diag(zeta^(-deg_s*deg_i)) @ conj(inv(tilde)).
    """
    space = data.space
    n, deg = space.n, space.degrees
    tilde = omega_tilde(data)
    tilde_inv = tilde.inverse()  # raises SingularMatrix when not invertible
    conj_omega = data.omega.conj()
    conj_tinv = tilde_inv.conj()
    zero = space.field.zero()

    def _diag(scale_of):
        return Matrix(space.field, [
            [scale_of(t) if s == t else zero for t in range(n)] for s in range(n)])

    a_mats = []
    b_mats = []
    for j in range(n):
        a_mats.append(conj_omega @ _diag(lambda t: space.zeta_pow(deg[j] * deg[t])) @ data.omega)
    for i in range(n):
        b_mats.append(tilde_inv @ _diag(lambda s: space.zeta_pow(-deg[s] * deg[i])) @ conj_tinv)
    return a_mats, b_mats


def triviality_lhs(data: OmegaData, i: int, j: int, k: int, l: int) -> Scalar:
    """Left side of the linear-independence identity at indices (i,j,k,l).

    Returns sum_{s,t} zeta^(-deg_s*deg_i + deg_j*deg_t)
            * conj(omega[i][t] * inv(tilde)[s][l]) * omega[t][k] * inv(tilde)[j][s];
    the identity asserts this equals delta_{j,l} * delta_{i,k}.
    Indices are 0-based.
    """
    space = data.space
    deg = space.degrees
    tilde_inv = omega_tilde(data).inverse()
    acc = space.field.zero()
    for t in range(space.n):
        w_it = data.omega[i, t]
        if w_it.is_zero():
            continue
        w_tk = data.omega[t, k]
        if w_tk.is_zero():
            continue
        for s in range(space.n):
            ti_sl = tilde_inv[s, l]
            if ti_sl.is_zero():
                continue
            ti_js = tilde_inv[j, s]
            if ti_js.is_zero():
                continue
            phase = space.zeta_pow(-deg[s] * deg[i] + deg[j] * deg[t])
            acc = acc + phase * (w_it * ti_sl).conj() * w_tk * ti_js
    return acc


def triviality_scan(data: OmegaData) -> list[tuple[tuple[int, int, int, int], Scalar]]:
    """All violations of the identity over the n^4 index tuples (0-based)."""
    space = data.space
    n = space.n
    a_mats, b_mats = _triviality_factors(data)
    one, zero = space.field.one(), space.field.zero()
    violations = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                a_ik = a_mats[j][i, k]
                for l in range(n):
                    value = a_ik * b_mats[i][j, l]
                    expect = one if (i == k and j == l) else zero
                    if value != expect:
                        violations.append(((i, j, k, l), value))
    return violations


def irreducibility_test(space: GradedSpace, omega: Matrix, d: int) -> tuple[bool, Scalar | None]:
    """Irreducibility of the fundamental representation for invertible omega.

    Tests whether conj(Omega) @ Omega @ diag(zeta^(-d*deg_i)) is a scalar
    multiple of the identity; the scalar is the c of the block condition.
    """
    if omega.rows != space.n or omega.cols != space.n:
        raise ValueError("omega must be square of size n")
    rank = omega.rank()
    if rank < space.n:
        raise SingularMatrix("irreducibility criterion requires invertible omega", rank)
    deg = space.degrees
    for i in range(space.n):
        for j in range(space.n):
            if deg[i] + deg[j] != d and not omega[i, j].is_zero():
                raise ValueError("omega must be d-homogeneous")
    product = omega.conj() @ omega @ space.phase_diagonal(-d)
    c = product.scalar_multiple_of_identity()
    if c is None or c.is_zero():
        return False, None
    return True, c


def f_matrix(data: OmegaData) -> Matrix:
    """F[i][j] = zeta^(d*deg_j) * omega[j][i]; for d = 0 this is omega^T."""
    report = validate(data)
    if not report.holds:
        raise ValueError(f"data does not satisfy the block condition: {report.reason}")
    space = data.space
    deg = space.degrees
    return Matrix(space.field, [
        [space.zeta_pow(data.d * deg[j]) * data.omega[j, i] for j in range(space.n)]
        for i in range(space.n)])
