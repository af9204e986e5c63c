"""Exception hierarchy.

Every error carries a short ``category`` string; the CLI prints it so that
scripts can branch on the failure kind without parsing messages.
"""


class PartmaxError(Exception):
    category = "error"


class ConfigError(PartmaxError, ValueError):
    category = "config"


# matroid
class OverlappingGroups(ConfigError):
    category = "overlapping_groups"


class BudgetOutOfRange(ConfigError):
    category = "budget_out_of_range"


class EmptyGroup(ConfigError):
    category = "empty_group"


class UnknownElement(PartmaxError, KeyError):
    category = "unknown_element"

    def __str__(self):
        # KeyError quotes its argument; keep the plain message
        return str(self.args[0]) if self.args else ""


class InfeasibleInput(PartmaxError, ValueError):
    category = "infeasible_input"


# oracle
class ElementAlreadyInSet(PartmaxError, ValueError):
    category = "element_already_in_set"


class NegativeWeight(ConfigError):
    category = "negative_weight"


# algorithms / quantify
class EmptyCandidatePool(PartmaxError, ValueError):
    category = "empty_candidate_pool"


class InvalidDelta(ConfigError):
    category = "invalid_delta"


class InstanceTooLarge(PartmaxError):
    category = "instance_too_large"


class GammaZero(PartmaxError, ZeroDivisionError):
    category = "gamma_zero"


# applications
class MalformedLine(PartmaxError, ValueError):
    category = "malformed_line"


class NotSymmetric(PartmaxError, ValueError):
    category = "not_symmetric"


class FactorizationFailure(PartmaxError, ArithmeticError):
    category = "factorization_failure"


class NonFiniteFeature(PartmaxError, ValueError):
    category = "non_finite_feature"


class BudgetExceedsSegment(ConfigError):
    category = "budget_exceeds_segment"
