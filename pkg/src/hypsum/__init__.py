"""hypsum: partial sums of generalized hypergeometric series of unit argument
and their large-m asymptotic behaviour."""

__version__ = "0.1.0"

from .asymptotics import (AsymptoticResult, EvalReport, OrderFit,
                          binomial_partial_sum, digamma_asymptotic,
                          direct_partial_sum, evaluate, expansion_balanced,
                          expansion_convergent, expansion_negative_integer,
                          expansion_noninteger, expansion_s_one,
                          expansion_s_two, log_term_partial_sum, measure_order)
from .backend import active_backend
from .coefficients import (WeightTable, nested_reference, weight_p3_closed,
                           weight_p4_closed, weight_table)
from .continuation import (SumResult, TailControl, constant_balanced,
                           constant_negative, constant_positive,
                           growing_coefficient, limit_constant,
                           log_coefficient_balanced, log_coefficient_negative,
                           log_coefficient_positive, singular_coefficient)
from .errors import (ConvergenceError, DegenerateFitError,
                     DegenerateRepresentationError, DomainError, HypsumError,
                     ParameterError, PoleError, TailError)
from .params import SeriesParams, SpClass, SpTag, classify, s_exponent
from .specfun import (SignedLog, digamma, gamma_ratio, ln_gamma_signed,
                      pochhammer)

__all__ = [
    "__version__",
    "AsymptoticResult", "EvalReport", "OrderFit", "SumResult", "TailControl",
    "SeriesParams", "SpClass", "SpTag", "SignedLog", "WeightTable",
    "active_backend",
    "binomial_partial_sum", "classify", "constant_balanced",
    "constant_negative", "constant_positive", "digamma",
    "digamma_asymptotic", "direct_partial_sum", "evaluate",
    "expansion_balanced", "expansion_convergent",
    "expansion_negative_integer", "expansion_noninteger", "expansion_s_one",
    "expansion_s_two", "gamma_ratio", "growing_coefficient",
    "limit_constant", "ln_gamma_signed", "log_coefficient_balanced",
    "log_coefficient_negative", "log_coefficient_positive",
    "log_term_partial_sum", "measure_order", "nested_reference",
    "pochhammer", "s_exponent", "singular_coefficient", "weight_p3_closed",
    "weight_p4_closed", "weight_table",
    "ConvergenceError", "DegenerateFitError", "DegenerateRepresentationError",
    "DomainError", "HypsumError", "ParameterError", "PoleError", "TailError",
]
