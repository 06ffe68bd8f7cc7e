"""A small text DSL for immersions, and exact 2-jet evaluation of its specs.

File format (UTF-8, whitespace-insensitive, `#` comments)::

    params s, t;
    ambient 4;
    const c1 = 1;          # optional, repeatable
    domain s in [0, 2];    # optional, repeatable
    map [expr, expr, ...];

Expressions: + - * / with usual precedence, `^` with a constant exponent,
unary minus, sin cos exp log sqrt sinh cosh, parentheses.  `pi` and `sqrt2`
are predeclared constants.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DslSyntaxError,
    EvalDomainError,
    PreconditionError,
    UndeclaredIdentifierError,
)
from .jets import Jet2, JetFunction1D, Taylor2, UNARY_FUNCTIONS

PREDECLARED = {"pi": math.pi, "sqrt2": math.sqrt(2.0)}

DEFAULT_DOMAIN = (-1.0, 1.0)


# ---------------------------------------------------------------------------
# expression trees


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Call:
    fn: str
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * /
    left: object
    right: object


@dataclass(frozen=True)
class Power:
    base: object
    exponent: float


@dataclass(frozen=True)
class FuncRef:
    """Internal node: a numerically defined 1-D function applied to a parameter.

    Built programmatically (never parsed); specs containing one do not
    round-trip through text.
    """

    fn: JetFunction1D
    arg: object


def eval_expr(node, env):
    """Evaluate an expression tree over Taylor2 scalars."""
    try:
        if isinstance(node, Num):
            some = next(iter(env.values()))
            return Taylor2.constant(node.value, some.d1.shape[0])
        if isinstance(node, Var):
            return env[node.name]
        if isinstance(node, Neg):
            return -eval_expr(node.arg, env)
        if isinstance(node, Call):
            return UNARY_FUNCTIONS[node.fn](eval_expr(node.arg, env))
        if isinstance(node, Power):
            return eval_expr(node.base, env).pow_const(node.exponent)
        if isinstance(node, FuncRef):
            return node.fn(eval_expr(node.arg, env))
        if isinstance(node, BinOp):
            lhs = eval_expr(node.left, env)
            rhs = eval_expr(node.right, env)
            if node.op == "+":
                return lhs + rhs
            if node.op == "-":
                return lhs - rhs
            if node.op == "*":
                return lhs * rhs
            return lhs / rhs
    except EvalDomainError as exc:
        if exc.subexpr is None:
            raise EvalDomainError(exc.reason, subexpr=pretty(node)) from None
        raise
    raise TypeError(f"unknown node {node!r}")


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "pow": 4}


def pretty(node, parent_prec=0):
    """Render an expression; parse(pretty(e)) evaluates identically to e."""
    if isinstance(node, Num):
        text = repr(node.value)
        return f"({text})" if node.value < 0 and parent_prec > 1 else text
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.fn}({pretty(node.arg)})"
    if isinstance(node, FuncRef):
        return f"{node.fn.name}({pretty(node.arg)})"
    if isinstance(node, Neg):
        inner = f"-{pretty(node.arg, _PREC['neg'])}"
        return f"({inner})" if parent_prec > _PREC["neg"] else inner
    if isinstance(node, Power):
        exp = repr(node.exponent)
        if node.exponent < 0:
            exp = f"({exp})"
        inner = f"{pretty(node.base, _PREC['pow'] + 1)}^{exp}"
        return f"({inner})" if parent_prec > _PREC["pow"] else inner
    if isinstance(node, BinOp):
        p = _PREC[node.op]
        lhs = pretty(node.left, p)
        rhs = pretty(node.right, p + 1)  # left-associative
        inner = f"{lhs} {node.op} {rhs}"
        return f"({inner})" if parent_prec > p else inner
    raise TypeError(f"unknown node {node!r}")


def free_vars(node, acc=None):
    acc = set() if acc is None else acc
    if isinstance(node, Var):
        acc.add(node.name)
    elif isinstance(node, (Neg, Call, FuncRef)):
        free_vars(node.arg, acc)
    elif isinstance(node, Power):
        free_vars(node.base, acc)
    elif isinstance(node, BinOp):
        free_vars(node.left, acc)
        free_vars(node.right, acc)
    return acc


def has_func_ref(node):
    if isinstance(node, FuncRef):
        return True
    if isinstance(node, (Neg, Call)):
        return has_func_ref(node.arg)
    if isinstance(node, Power):
        return has_func_ref(node.base)
    if isinstance(node, BinOp):
        return has_func_ref(node.left) or has_func_ref(node.right)
    return False


# ---------------------------------------------------------------------------
# immersion specs


@dataclass(frozen=True)
class ImmersionSpec:
    """A parsed, evaluable parametrization u -> phi(u) in Minkowski space."""

    param_names: tuple
    ambient_dim: int
    components: tuple  # expression trees, one per ambient coordinate
    param_domain: tuple  # ((lo, hi), ...) aligned with param_names
    named_constants: dict = field(default_factory=dict)

    @property
    def n_params(self):
        return len(self.param_names)

    def __post_init__(self):
        n = self.n_params
        if self.ambient_dim not in (n + 1, n + 2):
            raise PreconditionError(
                f"ambient dimension {self.ambient_dim} must be {n + 1} or {n + 2}"
            )
        if len(self.components) != self.ambient_dim:
            raise PreconditionError(
                f"{len(self.components)} map components for ambient "
                f"dimension {self.ambient_dim}"
            )
        for lo, hi in self.param_domain:
            if not lo < hi:
                raise PreconditionError(f"empty domain [{lo}, {hi}]")
        declared = set(self.param_names)
        for comp in self.components:
            extra = free_vars(comp) - declared
            if extra:
                raise PreconditionError(f"undeclared identifiers {sorted(extra)}")

    def serializable(self):
        return not any(has_func_ref(c) for c in self.components)

    def midpoint(self):
        return np.array([(lo + hi) / 2.0 for lo, hi in self.param_domain])

    def interior_grid(self, shape):
        """Deterministic interior grid: per axis, k points at (i+1)/(k+1)."""
        if len(shape) != self.n_params:
            raise PreconditionError("grid rank must match parameter count")
        axes = []
        for (lo, hi), k in zip(self.param_domain, shape):
            ticks = lo + (hi - lo) * (np.arange(1, k + 1) / (k + 1))
            axes.append(ticks)
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)


def eval_jet2(spec, point, domain_slack=0.01):
    """Exact value/gradient/Hessian of every ambient coordinate at `point`.

    The point must lie in the declared domain (boundary allowed); a small
    relative slack is tolerated so finite-difference stencils near the
    boundary remain usable.
    """
    point = np.asarray(point, dtype=float)
    n = spec.n_params
    if point.shape != (n,):
        raise PreconditionError(f"point has shape {point.shape}, expected ({n},)")
    for j, (lo, hi) in enumerate(spec.param_domain):
        slack = domain_slack * (hi - lo)
        if point[j] < lo - slack or point[j] > hi + slack:
            raise PreconditionError(
                f"parameter {spec.param_names[j]}={point[j]} outside [{lo}, {hi}]"
            )
    env = {
        name: Taylor2.variable(point[j], j, n)
        for j, name in enumerate(spec.param_names)
    }
    k = spec.ambient_dim
    value = np.empty(k)
    first = np.empty((k, n))
    second = np.empty((k, n, n))
    for i, comp in enumerate(spec.components):
        try:
            r = eval_expr(comp, env)
        except EvalDomainError as exc:
            raise EvalDomainError(exc.reason, exc.subexpr, tuple(point)) from None
        value[i] = r.val
        first[i] = r.d1
        second[i] = 0.5 * (r.d2 + r.d2.T)
    return Jet2(value, first, second)


def eval_value(spec, point):
    return eval_jet2(spec, point).value


# ---------------------------------------------------------------------------
# lexer


_SYMBOLS = "()[],;=+-*/^"


@dataclass(frozen=True)
class Token:
    kind: str  # 'ident' | 'number' | one of _SYMBOLS | 'eof'
    text: str
    line: int
    col: int


def tokenize(text):
    tokens = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < len(text) and text[i] != "\n":
                i += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("ident", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isdigit() or (ch == "." and i + 1 < len(text) and text[i + 1].isdigit()):
            j = i
            while j < len(text) and (text[j].isdigit() or text[j] == "."):
                j += 1
            if j < len(text) and text[j] in "eE":
                k = j + 1
                if k < len(text) and text[k] in "+-":
                    k += 1
                if k < len(text) and text[k].isdigit():
                    j = k
                    while j < len(text) and text[j].isdigit():
                        j += 1
            word = text[i:j]
            try:
                float(word)
            except ValueError:
                raise DslSyntaxError(f"malformed number '{word}'", line, col)
            tokens.append(Token("number", word, line, col))
            col += j - i
            i = j
            continue
        if ch in _SYMBOLS:
            tokens.append(Token(ch, ch, line, col))
            i += 1
            col += 1
            continue
        raise DslSyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# recursive-descent parser


class _Parser:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, kind, what=None):
        tok = self.peek()
        if tok.kind != kind:
            want = what or f"'{kind}'"
            got = tok.text or "end of input"
            raise DslSyntaxError(f"expected {want}, got '{got}'", tok.line, tok.col)
        return self.advance()

    # -- statements

    def parse_file(self):
        params = None
        ambient = None
        consts = dict(PREDECLARED)
        user_consts = {}
        domains = {}
        map_exprs = None
        while self.peek().kind != "eof":
            tok = self.expect("ident", "a statement keyword")
            if tok.text == "params":
                params = [self.expect("ident", "a parameter name").text]
                while self.peek().kind == ",":
                    self.advance()
                    params.append(self.expect("ident", "a parameter name").text)
            elif tok.text == "ambient":
                ambient = int(self.expect("number", "an integer").text)
            elif tok.text == "const":
                name = self.expect("ident", "a constant name").text
                self.expect("=")
                consts[name] = user_consts[name] = self._signed_number()
            elif tok.text == "domain":
                name = self.expect("ident", "a parameter name").text
                kw = self.expect("ident", "'in'")
                if kw.text != "in":
                    raise DslSyntaxError("expected 'in'", kw.line, kw.col)
                self.expect("[")
                lo = self._signed_number()
                self.expect(",")
                hi = self._signed_number()
                self.expect("]")
                domains[name] = (lo, hi)
            elif tok.text == "map":
                self.expect("[")
                map_exprs = [self.parse_expr()]
                while self.peek().kind == ",":
                    self.advance()
                    map_exprs.append(self.parse_expr())
                self.expect("]")
            else:
                raise DslSyntaxError(
                    f"unknown statement '{tok.text}' (expected params, ambient,"
                    " const, domain or map)",
                    tok.line,
                    tok.col,
                )
            self.expect(";")
        end = self.peek()
        if params is None:
            raise DslSyntaxError("missing 'params' statement", end.line, end.col)
        if ambient is None:
            raise DslSyntaxError("missing 'ambient' statement", end.line, end.col)
        if map_exprs is None:
            raise DslSyntaxError("missing 'map' statement", end.line, end.col)
        exprs = [self._resolve(e, params, consts) for e in map_exprs]
        dom = tuple(domains.get(p, DEFAULT_DOMAIN) for p in params)
        return ImmersionSpec(
            param_names=tuple(params),
            ambient_dim=ambient,
            components=tuple(exprs),
            param_domain=dom,
            named_constants=dict(user_consts),
        )

    def _signed_number(self):
        sign = 1.0
        if self.peek().kind == "-":
            self.advance()
            sign = -1.0
        tok = self.expect("number", "a number")
        return sign * float(tok.text)

    # -- expressions: additive > multiplicative > unary > power > atom

    def parse_expr(self):
        node = self.parse_term()
        while self.peek().kind in ("+", "-"):
            op = self.advance().kind
            node = BinOp(op, node, self.parse_term())
        return node

    def parse_term(self):
        node = self.parse_unary()
        while self.peek().kind in ("*", "/"):
            op = self.advance().kind
            node = BinOp(op, node, self.parse_unary())
        return node

    def parse_unary(self):
        if self.peek().kind == "-":
            self.advance()
            return Neg(self.parse_unary())
        return self.parse_power()

    def parse_power(self):
        base = self.parse_atom()
        if self.peek().kind == "^":
            self.advance()
            base = Power(base, self._exponent())
        return base

    def _exponent(self):
        # exponent must be a constant: a literal, a named constant, or
        # either of those negated / parenthesized
        tok = self.peek()
        if tok.kind == "(":
            self.advance()
            value = self._exponent()
            self.expect(")")
            return value
        if tok.kind == "-":
            self.advance()
            return -self._exponent()
        if tok.kind == "number":
            return float(self.advance().text)
        if tok.kind == "ident":
            self.advance()
            return _ConstRef(tok)
        raise DslSyntaxError(
            f"expected a constant exponent, got '{tok.text or 'end of input'}'",
            tok.line,
            tok.col,
        )

    def parse_atom(self):
        tok = self.peek()
        if tok.kind == "(":
            self.advance()
            node = self.parse_expr()
            self.expect(")")
            return node
        if tok.kind == "number":
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "ident":
            self.advance()
            if tok.text in UNARY_FUNCTIONS:
                self.expect("(")
                arg = self.parse_expr()
                self.expect(")")
                return Call(tok.text, arg)
            return _Ident(tok)
        raise DslSyntaxError(
            f"expected an operand, got '{tok.text or 'end of input'}'",
            tok.line,
            tok.col,
        )

    def _resolve(self, node, params, consts):
        """Replace raw identifiers with Var/Num nodes; unknown names error."""
        if isinstance(node, _Ident):
            name = node.token.text
            if name in params:
                return Var(name)
            if name in consts:
                return Num(consts[name])
            raise UndeclaredIdentifierError(
                f"undeclared identifier '{name}'", node.token.line, node.token.col
            )
        if isinstance(node, Neg):
            return Neg(self._resolve(node.arg, params, consts))
        if isinstance(node, Call):
            return Call(node.fn, self._resolve(node.arg, params, consts))
        if isinstance(node, Power):
            exp = node.exponent
            if isinstance(exp, _ConstRef):
                name = exp.token.text
                if name not in consts:
                    raise UndeclaredIdentifierError(
                        f"undeclared identifier '{name}'",
                        exp.token.line,
                        exp.token.col,
                    )
                exp = consts[name]
            elif isinstance(exp, _NegConstRef):
                name = exp.ref.token.text
                if name not in consts:
                    raise UndeclaredIdentifierError(
                        f"undeclared identifier '{name}'",
                        exp.ref.token.line,
                        exp.ref.token.col,
                    )
                exp = -consts[name]
            return Power(self._resolve(node.base, params, consts), float(exp))
        if isinstance(node, BinOp):
            return BinOp(
                node.op,
                self._resolve(node.left, params, consts),
                self._resolve(node.right, params, consts),
            )
        return node


@dataclass(frozen=True)
class _Ident:
    token: Token


@dataclass(frozen=True)
class _ConstRef:
    token: Token

    def __neg__(self):
        return _NegConstRef(self)


@dataclass(frozen=True)
class _NegConstRef:
    ref: object

    def __neg__(self):
        return self.ref


def parse_immersion_spec(text):
    """Parse DSL text into an ImmersionSpec."""
    return _Parser(text).parse_file()


def parse_expression(text, params):
    """Parse a single expression over the given parameter names."""
    parser = _Parser(text)
    node = parser.parse_expr()
    tok = parser.peek()
    if tok.kind != "eof":
        raise DslSyntaxError(f"unexpected trailing '{tok.text}'", tok.line, tok.col)
    return parser._resolve(node, list(params), dict(PREDECLARED))


def spec_to_text(spec):
    """Render a spec back to DSL text (closed-form components only)."""
    if not spec.serializable():
        raise PreconditionError("spec contains numeric components; cannot serialize")
    lines = [f"params {', '.join(spec.param_names)};", f"ambient {spec.ambient_dim};"]
    for name, value in sorted(spec.named_constants.items()):
        lines.append(f"const {name} = {value!r};")
    for name, (lo, hi) in zip(spec.param_names, spec.param_domain):
        lines.append(f"domain {name} in [{lo!r}, {hi!r}];")
    body = ",\n     ".join(pretty(c) for c in spec.components)
    lines.append(f"map [{body}];")
    return "\n".join(lines) + "\n"
