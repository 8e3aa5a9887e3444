"""mulam: a lambda-mu calculus workbench with a resource (multiset) fragment.

Two calculi share one locally nameless core: classical lambda-mu terms with
their beta / structural / renaming steps, and a linear resource calculus
whose applications carry finite multisets and whose reduction produces
formal sums over a boolean or counting semiring.  On top sit termination
measures, an exhaustive reduction-graph oracle, approximant enumeration
with truncated normal-form sets, randomized property suites, and a CLI.
"""

from .syntax import (
    App,
    BOOL,
    Bag,
    Lam,
    Mu,
    NAT,
    RApp,
    RLam,
    RMu,
    RVar,
    ResTerm,
    Sum,
    Term,
    Var,
    alpha_eq,
    mkbag,
    size,
)

__version__ = "0.1.0"

__all__ = [
    "App",
    "BOOL",
    "Bag",
    "Lam",
    "Mu",
    "NAT",
    "RApp",
    "RLam",
    "RMu",
    "RVar",
    "ResTerm",
    "Sum",
    "Term",
    "Var",
    "alpha_eq",
    "mkbag",
    "size",
    "__version__",
]
