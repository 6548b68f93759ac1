"""First-order formulas, structures and three-valued evaluation."""
from .catalog import NAMES, CatalogEntry, catalog, oracle
from .semantics import (UNDEFINED, FinStructure, PolyRing, Signature, Structure, brute_force,
                        check_sorts, eval_term, evaluate, ring_mod)
from .syntax import (And, App, Bottom, Carrier, Const, DegreeAtMost, DivisorsOf, Eq, Exists, FieldRange,
                     Forall, Hint, Iff, Implies, Lit, Not, Or, Quotient, Rel, Top, Var, bound_vars, depth,
                     format_formula, format_term, free_vars, is_sentence, normalize, parse_formula,
                     parse_term, substitute, unfold_ranges)
