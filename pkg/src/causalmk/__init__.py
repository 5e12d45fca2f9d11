"""Actual causality over possible-world structural models.

Build a causal Kripke model (worlds, an accessibility relation, and one
structural equation per endogenous variable per world), fix a context for the
exogenous variables, and ask what caused an observed event: the package
decides and enumerates actual causes under the original, updated, and
modified counterfactual definitions, checks sufficiency over nearby contexts,
and fuzzes the axiom schemes of the underlying modal logic.
"""

from .axioms import (Counterexample, ModelGenSpec, SchemeId, SuiteReport, check_scheme,
                     generate_model, pseudo_g_local_counterexample, run_suite)
from .causes import (Budget, CauseVerdict, Witness, certainty_is_cause, check_ac1,
                     check_ac2a, check_ac2a_modified, check_ac2b_original,
                     check_ac2b_updated, find_causes, is_cause, modal_cause_check,
                     part_of_cause, possibility_is_cause, relevant_cone)
from .cli import corpus
from .errors import (CausalError, CycleError, DanglingRefError, FormulaSyntaxError,
                     ModelFileError, NestedInterventionError, RangeError,
                     SearchBudgetExceeded)
from .formulas import (And, Box, ConvBox, ConvDia, Dia, GlobalAtom, Implies,
                       InterventionFormula, LocalAtom, Not, Or, Top, format_conjunction,
                       format_formula, parse, parse_conjunction, parse_event,
                       parse_local_conjunction)
from .model import (Context, FormulaEquation, Intervention, Model, Signature,
                    TableEquation, Valuation, build_model, constant, evaluate,
                    intervene, parents, signature)
from .modelfile import ModelDocument, load_model_file, parse_model_text
from .semantics import Setting, satisfies, satisfies_text, valid_in_model
from .sufficiency import (ContextSpace, SufficiencyVerdict, hamming_pairs,
                          is_sufficient_cause, lift_to_kripke, lifted_sc3_formula,
                          make_context_space)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
