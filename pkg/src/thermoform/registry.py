"""Built-in example tuples with stable names.

Names accept optional rational arguments in parentheses, so
"alpha(3/5,4/5)" and "eps(1/4)" are valid registry keys.  All built-ins
use the exact-rational policy.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .core import EXACT, MatrixTuple, make_tuple
from .errors import TupleFormatError


def notmix2() -> MatrixTuple:
    """Irreducible pair whose equilibrium state is not mixing.

    Both generators swap the coordinate axes with different weights;
    every even power tuple is reducible, giving period-two behaviour.
    """
    return make_tuple([[[0, 2], [1, 0]], [[0, 1], [2, 0]]], policy=EXACT,
                      label="notmix2")


def nilpotent2() -> MatrixTuple:
    """Irreducible pair supported on a single period-two orbit.

    Repeating either symbol annihilates the product, so the equilibrium
    state charges only the two alternating sequences.
    """
    return make_tuple([[[0, 1], [0, 0]], [[0, 0], [1, 0]]], policy=EXACT,
                      label="nilpotent2")


def alpha(alpha_1=Fraction(3, 5), alpha_2=Fraction(4, 5)) -> MatrixTuple:
    """Antidiagonal pair with weights alpha_1, alpha_2.

    When alpha_1^2 + alpha_2^2 = 1 the identity is a joint Perron
    eigenmatrix on both sides, the quadratic pressure vanishes, and
    cylinder measures reduce to half the squared Frobenius norm of the
    word product.  Unequal weights make the equilibrium state
    non-Bernoulli.
    """
    a1 = Fraction(alpha_1)
    a2 = Fraction(alpha_2)
    if a1 <= 0 or a2 <= 0:
        raise TupleFormatError("alpha weights must be positive")
    label = "alpha(%s,%s)" % (a1, a2)
    return make_tuple([[[0, a2], [a1, 0]], [[0, a1], [a2, 0]]], policy=EXACT,
                      label=label)


def rankone4() -> MatrixTuple:
    """Four rank-one generators whose semigroup is sign-symmetric.

    Every product is plus or minus one of the generators, so all
    nonzero products have spectral radius one and the equilibrium state
    is the uniform Bernoulli measure on four symbols.
    """
    return make_tuple([[[1, 1], [0, 0]], [[1, -1], [0, 0]],
                       [[0, 0], [1, 1]], [[0, 0], [-1, 1]]], policy=EXACT,
                      label="rankone4")


def eps(epsilon=Fraction(1)) -> MatrixTuple:
    """One-parameter deformation of notmix2.

    Any positive epsilon makes the pair strongly irreducible and the
    equilibrium state mixing; epsilon = 0 recovers notmix2, so the
    family witnesses discontinuity of the equilibrium state in the
    generators.
    """
    e = Fraction(epsilon)
    if e < 0:
        raise TupleFormatError("epsilon must be nonnegative")
    label = "eps(%s)" % e
    return make_tuple([[[0, 2], [1, 0]], [[e, 1], [2, 0]]], policy=EXACT,
                      label=label)


def reducible2() -> MatrixTuple:
    """Diagonal pair sharing both coordinate axes.

    Deliberately degenerate: equilibrium-state construction must reject
    it with a degenerate-eigenmatrix signal.
    """
    return make_tuple([[[1, 0], [0, 2]], [[3, 0], [0, 1]]], policy=EXACT,
                      label="reducible2")


BUILTINS = {
    "notmix2": (notmix2, 0),
    "nilpotent2": (nilpotent2, 0),
    "alpha": (alpha, 2),
    "rankone4": (rankone4, 0),
    "eps": (eps, 1),
    "reducible2": (reducible2, 0),
}

_NAME_RE = re.compile(r"^([a-z][a-z0-9_]*)(?:\(([^()]*)\))?$")


def builtin_names():
    return sorted(BUILTINS)


def get_builtin(name: str) -> MatrixTuple:
    """Resolve a registry name like "notmix2" or "alpha(3/5,4/5)".

    Arguments are rationals; omitted arguments fall back to the
    documented defaults.
    """
    match = _NAME_RE.match(name.strip())
    if not match:
        raise TupleFormatError("malformed builtin name %r" % name)
    base, argstr = match.group(1), match.group(2)
    if base not in BUILTINS:
        raise TupleFormatError(
            "unknown builtin %r (known: %s)" % (base, ", ".join(builtin_names())))
    factory, max_args = BUILTINS[base]
    args = []
    if argstr is not None and argstr.strip():
        for piece in argstr.split(","):
            piece = piece.strip()
            try:
                args.append(Fraction(piece))
            except (ValueError, ZeroDivisionError) as exc:
                raise TupleFormatError(
                    "bad rational argument %r in %r: %s" % (piece, name, exc))
    if len(args) > max_args:
        raise TupleFormatError(
            "builtin %r takes at most %d arguments, got %d"
            % (base, max_args, len(args)))
    return factory(*args)
