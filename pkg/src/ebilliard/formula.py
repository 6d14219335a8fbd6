"""Triangle-center function strings.

Grammar (Python expression syntax, restricted)::

    expr  := number | name | expr op expr | -expr | +expr | func '(' expr ')'
    op    := '+' | '-' | '*' | '/' | '**'
    name  := 's1' | 's2' | 's3' | 'A' | 'B' | 'C'
    func  := 'cos' | 'sin' | 'tan' | 'sec' | 'csc' | 'sqrt'

``s1, s2, s3`` are sidelengths (``s1`` opposite the vertex whose coordinate
is being computed) and ``A, B, C`` the matching angles. Evaluation is
vectorised over numpy arrays.
"""
import ast

import numpy as np

NAMES = ("s1", "s2", "s3", "A", "B", "C")
FUNCS = {
    "cos": np.cos,
    "sin": np.sin,
    "tan": np.tan,
    "sec": lambda x: 1 / np.cos(x),
    "csc": lambda x: 1 / np.sin(x),
    "sqrt": np.sqrt,
}
_BINOPS = {
    ast.Add: np.add,
    ast.Sub: np.subtract,
    ast.Mult: np.multiply,
    ast.Div: np.divide,
    ast.Pow: np.power,
}


class FormulaError(ValueError):
    pass


def _check(node, text):
    if isinstance(node, ast.Expression):
        return _check(node.body, text)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return
    if isinstance(node, ast.Name):
        if node.id not in NAMES:
            raise FormulaError(f"unknown name {node.id!r} in {text!r}")
        return
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        _check(node.left, text)
        _check(node.right, text)
        return
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        _check(node.operand, text)
        return
    if (
        isinstance(node, ast.Call)
        and isinstance(node.func, ast.Name)
        and node.func.id in FUNCS
        and len(node.args) == 1
        and not node.keywords
    ):
        _check(node.args[0], text)
        return
    raise FormulaError(f"unsupported syntax {ast.dump(node)[:40]}... in {text!r}")


def _eval(node, env):
    if isinstance(node, ast.Constant):
        return float(node.value)
    if isinstance(node, ast.Name):
        return env[node.id]
    if isinstance(node, ast.BinOp):
        return _BINOPS[type(node.op)](_eval(node.left, env), _eval(node.right, env))
    if isinstance(node, ast.UnaryOp):
        v = _eval(node.operand, env)
        return -v if isinstance(node.op, ast.USub) else v
    return FUNCS[node.func.id](_eval(node.args[0], env))


class Formula:
    """A parsed center function ``h(s1, s2, s3)``.

    A top-level quotient ``N/D`` is kept split so trilinears can be formed
    without dividing by a vanishing ``D`` (see :meth:`trilinears`).
    """

    def __init__(self, text: str):
        self.text = text.strip()
        try:
            tree = ast.parse(self.text, mode="eval")
        except SyntaxError as exc:
            raise FormulaError(f"cannot parse {text!r}: {exc.msg}") from None
        _check(tree, text)
        body = tree.body
        if isinstance(body, ast.BinOp) and isinstance(body.op, ast.Div):
            self._num, self._den = body.left, body.right
        else:
            self._num, self._den = body, None

    def __repr__(self):
        return f"Formula({self.text!r})"

    def ratio(self, s1, s2, s3, A, B, C):
        env = dict(s1=s1, s2=s2, s3=s3, A=A, B=B, C=C)
        with np.errstate(divide="ignore", invalid="ignore"):
            num = _eval(self._num, env)
            den = 1.0 if self._den is None else _eval(self._den, env)
        return num, den

    def __call__(self, s1, s2, s3, A, B, C):
        num, den = self.ratio(s1, s2, s3, A, B, C)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.divide(num, den)

    def trilinears(self, s, ang, reciprocal: bool = False):
        """Cyclic triple ``h(s1,s2,s3) : h(s2,s3,s1) : h(s3,s1,s2)``.

        ``s`` and ``ang`` are ``(..., 3)`` arrays. With ``N_i/D_i`` the
        coordinates, the triple is scaled by ``D_1 D_2 D_3``, which keeps
        it finite when a single ``D_i`` vanishes (the point is then vertex
        ``i``). ``reciprocal=True`` yields the isogonal conjugate.
        """
        s = np.asarray(s, dtype=float)
        ang = np.asarray(ang, dtype=float)
        num, den = [], []
        for k in range(3):
            idx = [k, (k + 1) % 3, (k + 2) % 3]
            n_, d_ = self.ratio(*(s[..., i] for i in idx), *(ang[..., i] for i in idx))
            num.append(np.broadcast_to(n_, s.shape[:-1]))
            den.append(np.broadcast_to(d_, s.shape[:-1]))
        if reciprocal:
            num, den = den, num
        with np.errstate(invalid="ignore", over="ignore"):
            return np.stack(
                [num[k] * den[(k + 1) % 3] * den[(k + 2) % 3] for k in range(3)], axis=-1
            )
