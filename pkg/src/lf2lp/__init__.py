"""lf2lp: run Twelf-style LF specifications as hereditary Harrop programs.

Pipeline: parse and elaborate an LF signature, check it, compile it to a
simply typed logic program (plain ``hastype`` form or the optimized
per-family form), answer queries by proof search, and translate answer
substitutions and proof terms back into LF.
"""

from .engine import Answer, ProofState, SearchStats, solve
from .frontend import (AmbiguousImplicitType, ElabError, InferenceFailure,
                       ParseError, Query, RawDecl, elaborate_decl,
                       elaborate_query, elaborate_signature, parse_query,
                       parse_signature)
from .invert import InvContext, NotInvertible, invert_answer, invert_check, invert_substitution, invert_synth
from .lf import (App, Const, Context, Decl, FuelExhausted, Lam, LfError, LFExpr,
                 MetaVar, Pi, Signature, Type, UnboundConstant, Var,
                 beta_normalize, canonicalize, pretty, substitute, substitute_meta)
from .translate import (Mode, TranslatedProgram, TranslatedQuery, emit_program,
                        encode_term, encode_type_naive, flatten, strict_in_term,
                        strict_in_type, translate_query, translate_signature)
from .typecheck import (NotAFunction, SignatureError, TypecheckError, TypeMismatch,
                        UnboundVariable, check_context, check_kind, check_object,
                        check_signature, check_type, infer_object)

__version__ = "0.1.0"
